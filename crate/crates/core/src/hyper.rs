//! Germs: the computable fragment of the hyperreal line.
//!
//! A germ is a sequence that, for `n ≡ r (mod m)`, equals a rational
//! function `f_r(n)`. Pieces are stored as functions of `n` itself, so
//! refining to a multiple of the modulus just repeats pieces, and the
//! canonical form (minimal modulus, reduced pieces with monic
//! denominators) is unique. Finite index sets are quotiented away: the
//! threshold is bookkeeping for where the pieces become pole-free and
//! sign-stable and takes no part in equality.
//!
//! Everything an ultrafilter decides about a germ is decided by the piece
//! of the class an [`UltraFragment`] selects; the Fréchet filter alone only
//! sees what all classes agree on.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::filters::UltraFragment;
use crate::poly::{Asymptote, Poly, RatFn};
use crate::rational::{self, lcm_u64, Rational};

#[derive(Clone)]
pub struct Germ {
    modulus: u64,
    pieces: Vec<RatFn>,
    threshold: u64,
}

impl PartialEq for Germ {
    fn eq(&self, other: &Self) -> bool {
        self.modulus == other.modulus && self.pieces == other.pieces
    }
}

impl Eq for Germ {}

impl Hash for Germ {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.modulus.hash(state);
        self.pieces.hash(state);
    }
}

/// Order of two germs as seen by the Fréchet filter alone.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FrechetOrder {
    LessEq,
    GreaterEq,
    Equal,
    Incomparable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub infinitesimal: bool,
    pub finite: bool,
    pub infinitely_large: bool,
    pub standard: bool,
    #[serde(serialize_with = "ser_opt_rational")]
    pub standard_value: Option<Rational>,
}

fn ser_opt_rational<S: serde::Serializer>(v: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(r) => s.serialize_some(&rational::format(r)),
        None => s.serialize_none(),
    }
}

impl Germ {
    /// Canonicalizes a piecewise description; `pieces.len()` is the modulus.
    pub fn from_pieces(pieces: Vec<RatFn>) -> Germ {
        assert!(!pieces.is_empty(), "a germ needs at least one piece");
        let m = pieces.len();
        let period = (1..=m)
            .filter(|d| m % d == 0)
            .find(|&d| (d..m).all(|i| pieces[i] == pieces[i % d]))
            .unwrap_or(m);
        let mut pieces = pieces;
        pieces.truncate(period);
        let threshold = pieces
            .iter()
            .map(|p| p.stable_index().unwrap_or(u64::MAX))
            .max()
            .unwrap_or(0);
        Germ {
            modulus: period as u64,
            pieces,
            threshold,
        }
    }

    pub fn constant(c: Rational) -> Germ {
        Self::from_pieces(vec![RatFn::constant(c)])
    }

    pub fn zero() -> Germ {
        Self::constant(rational::int(0))
    }

    pub fn one() -> Germ {
        Self::constant(rational::int(1))
    }

    /// The germ `⟨n⟩`.
    pub fn index() -> Germ {
        Self::from_pieces(vec![RatFn::var()])
    }

    pub fn from_ratfn(f: RatFn) -> Germ {
        Self::from_pieces(vec![f])
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn pieces(&self) -> &[RatFn] {
        &self.pieces
    }

    /// Piece governing indices `n ≡ r (mod modulus)`.
    pub fn piece(&self, r: u64) -> &RatFn {
        &self.pieces[(r % self.modulus) as usize]
    }

    /// From this index on every piece is pole-free with constant sign.
    pub fn threshold(&self) -> u64 {
        self.threshold
    }

    /// Raises the threshold, e.g. past poles that canonicalization removed.
    pub fn with_threshold_at_least(mut self, t: u64) -> Germ {
        self.threshold = self.threshold.max(t);
        self
    }

    /// Value of the representative sequence at `n`; `None` at a pole.
    pub fn value_at(&self, n: u64) -> Option<Rational> {
        self.piece(n).eval_nat(n)
    }

    pub fn is_zero(&self) -> bool {
        self.pieces.iter().all(RatFn::is_zero)
    }

    /// Pieces for modulus `m`, which must be a multiple of ours.
    pub fn refine(&self, m: u64) -> Vec<RatFn> {
        debug_assert_eq!(m % self.modulus, 0);
        (0..m).map(|r| self.piece(r).clone()).collect()
    }

    fn zip_with(&self, other: &Germ, f: impl Fn(&RatFn, &RatFn) -> Option<RatFn>) -> Option<Germ> {
        let m = lcm_u64(self.modulus, other.modulus);
        let pieces = (0..m)
            .map(|r| f(self.piece(r), other.piece(r)))
            .collect::<Option<Vec<_>>>()?;
        Some(Germ::from_pieces(pieces).with_threshold_at_least(self.threshold.max(other.threshold)))
    }

    fn map(&self, f: impl Fn(&RatFn) -> Option<RatFn>) -> Option<Germ> {
        let pieces = self.pieces.iter().map(f).collect::<Option<Vec<_>>>()?;
        Some(Germ::from_pieces(pieces).with_threshold_at_least(self.threshold))
    }

    /// Quotient of sequences. Fails if the divisor vanishes identically on
    /// some residue class.
    pub fn checked_div(&self, rhs: &Germ) -> Result<Germ> {
        self.zip_with(rhs, RatFn::checked_div)
            .ok_or(Error::DivisionByZeroGerm)
    }

    /// Integer power; negative exponents divide.
    pub fn pow(&self, e: i64) -> Result<Germ> {
        self.map(|p| p.pow(e)).ok_or(Error::DivisionByZeroGerm)
    }

    /// The class representative selected by `frag`.
    pub fn selected(&self, frag: &UltraFragment) -> &RatFn {
        self.piece(frag.residue(self.modulus))
    }

    /// Multiplicative inverse relative to `frag`. Classes whose piece is
    /// identically zero are padded with zero.
    pub fn inverse(&self, frag: &UltraFragment) -> Result<Germ> {
        if self.selected(frag).is_zero() {
            return Err(Error::DivisionByZeroGerm);
        }
        Ok(self
            .map(|p| {
                Some(if p.is_zero() {
                    RatFn::zero()
                } else {
                    p.recip()?
                })
            })
            .expect("nonzero pieces have reciprocals"))
    }

    /// Equality as elements of the ultrapower.
    pub fn eq_rel(&self, other: &Germ, frag: &UltraFragment) -> bool {
        compare(self, other, frag) == Ordering::Equal
    }

    pub fn classify(&self, frag: &UltraFragment) -> Classification {
        let p = self.selected(frag);
        let asym = p.asymptote();
        let finite = matches!(asym, Asymptote::Finite(_));
        let infinitesimal = asym == Asymptote::Finite(Rational::zero());
        let standard_value = p.as_constant();
        Classification {
            infinitesimal,
            finite,
            infinitely_large: !finite,
            standard: standard_value.is_some(),
            standard_value,
        }
    }

    /// The unique rational `r` with `self - r` infinitesimal.
    pub fn standard_part(&self, frag: &UltraFragment) -> Result<Rational> {
        match self.selected(frag).asymptote() {
            Asymptote::Finite(r) => Ok(r),
            _ => Err(Error::NotFinite),
        }
    }

    pub fn is_near(&self, other: &Germ, frag: &UltraFragment) -> bool {
        (self - other).classify(frag).infinitesimal
    }
}

/// Total order relative to an ultrafilter fragment: the eventual sign of
/// the selected class of `x - y`.
pub fn compare(x: &Germ, y: &Germ, frag: &UltraFragment) -> Ordering {
    (x - y).selected(frag).eventual_sign()
}

/// Partial order modulo the Fréchet filter: every class must agree.
pub fn frechet_compare(x: &Germ, y: &Germ) -> FrechetOrder {
    let d = x - y;
    let signs: Vec<Ordering> = d.pieces.iter().map(RatFn::eventual_sign).collect();
    if signs.iter().all(|s| *s == Ordering::Equal) {
        FrechetOrder::Equal
    } else if signs.iter().all(|s| *s != Ordering::Greater) {
        FrechetOrder::LessEq
    } else if signs.iter().all(|s| *s != Ordering::Less) {
        FrechetOrder::GreaterEq
    } else {
        FrechetOrder::Incomparable
    }
}

impl Add for &Germ {
    type Output = Germ;
    fn add(self, rhs: &Germ) -> Germ {
        self.zip_with(rhs, |a, b| Some(a + b)).unwrap()
    }
}

impl Sub for &Germ {
    type Output = Germ;
    fn sub(self, rhs: &Germ) -> Germ {
        self.zip_with(rhs, |a, b| Some(a - b)).unwrap()
    }
}

impl Mul for &Germ {
    type Output = Germ;
    fn mul(self, rhs: &Germ) -> Germ {
        self.zip_with(rhs, |a, b| Some(a * b)).unwrap()
    }
}

impl Neg for &Germ {
    type Output = Germ;
    fn neg(self) -> Germ {
        self.map(|p| Some(-p)).unwrap()
    }
}

impl From<Rational> for Germ {
    fn from(c: Rational) -> Germ {
        Germ::constant(c)
    }
}

impl From<Poly> for Germ {
    fn from(p: Poly) -> Germ {
        Germ::from_ratfn(RatFn::poly(p))
    }
}

/// Prints in the sequence grammar: a single rational function of `n`, or
/// `case(m; f_0, ..., f_{m-1})`.
impl fmt::Display for Germ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.modulus == 1 {
            return write!(f, "{}", self.pieces[0]);
        }
        let parts: Vec<String> = self.pieces.iter().map(ToString::to_string).collect();
        write!(f, "case({}; {})", self.modulus, parts.join(", "))
    }
}

impl fmt::Debug for Germ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Germ({self}; T={})", self.threshold)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_germ;
    use crate::rational::{int, ratio};
    use num_traits::Signed;

    fn g(s: &str) -> Germ {
        parse_germ(s).unwrap()
    }

    fn frag(s: &str) -> UltraFragment {
        s.parse().unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(&g("1/n") + &g("(n-1)/n"), Germ::one());
        let r = ratio(-3, 2);
        assert_eq!(&Germ::constant(r) + &g("1/n"), g("-3/2 + 1/n"));
        assert!((&g("case(2; 1, 0)") * &g("case(2; 0, 1)")).is_zero());
    }

    #[test]
    fn inverse_examples() {
        let d = UltraFragment::default();
        assert_eq!(g("n").inverse(&d).unwrap(), g("1/n"));
        let ind = g("case(2; 1, 0)");
        let inv = ind.inverse(&d).unwrap();
        assert_eq!(inv, ind);
        let prod = &ind * &inv;
        assert_eq!(prod, ind);
        assert!(prod.eq_rel(&Germ::one(), &d));
        assert!(!prod.eq_rel(&Germ::one(), &frag("2:1")));
        assert!(matches!(
            Germ::zero().inverse(&d),
            Err(Error::DivisionByZeroGerm)
        ));
        assert!(matches!(
            ind.inverse(&frag("2:1")),
            Err(Error::DivisionByZeroGerm)
        ));
    }

    #[test]
    fn compare_examples() {
        let d = UltraFragment::default();
        assert_eq!(compare(&g("1/n"), &Germ::zero(), &d), Ordering::Greater);
        let (e, o) = (g("case(2;1,0)"), g("case(2;0,1)"));
        assert_eq!(compare(&e, &o, &frag("2:0")), Ordering::Greater);
        assert_eq!(compare(&e, &o, &frag("2:1")), Ordering::Less);
        assert_eq!(compare(&e, &e, &d), Ordering::Equal);
    }

    #[test]
    fn frechet_compare_examples() {
        let (e, o) = (g("case(2;1,0)"), g("case(2;0,1)"));
        assert_eq!(frechet_compare(&e, &o), FrechetOrder::Incomparable);
        assert_eq!(frechet_compare(&g("1/n"), &g("2/n")), FrechetOrder::LessEq);
        assert_eq!(
            frechet_compare(&g("2/n"), &g("1/n")),
            FrechetOrder::GreaterEq
        );
        assert_eq!(frechet_compare(&e, &e), FrechetOrder::Equal);
    }

    #[test]
    fn classify_examples() {
        let d = UltraFragment::default();
        let c = g("1/n").classify(&d);
        assert!(c.infinitesimal && c.finite && !c.standard && !c.infinitely_large);
        let c = g("n").classify(&d);
        assert!(c.infinitely_large && !c.finite && !c.infinitesimal);
        let c = g("2 + 1/n").classify(&d);
        assert!(c.finite && !c.standard && !c.infinitesimal);
        let c = g("7/3").classify(&d);
        assert!(c.standard && c.finite && c.standard_value == Some(ratio(7, 3)));
        let c = Germ::zero().classify(&d);
        assert!(c.standard && c.infinitesimal && c.standard_value == Some(int(0)));
    }

    #[test]
    fn standard_part_examples() {
        let d = UltraFragment::default();
        assert_eq!(g("5 + 1/n").standard_part(&d).unwrap(), int(5));
        assert_eq!(g("(3*n^2+n)/(n^2+5)").standard_part(&d).unwrap(), int(3));
        assert!(matches!(g("n").standard_part(&d), Err(Error::NotFinite)));
        assert_eq!(g("case(2; 1, n)").standard_part(&d).unwrap(), int(1));
        assert!(g("case(2; 1, n)").standard_part(&frag("2:1")).is_err());
    }

    #[test]
    fn standard_part_oracle_approaches_three() {
        // exact values at n = 10^k get monotonically closer to 3
        let f = g("(3*n^2+n)/(n^2+5)");
        let mut prev_gap: Option<Rational> = None;
        for k in 2..=6u32 {
            let v = f.value_at(10u64.pow(k)).unwrap();
            let gap = (v - int(3)).abs();
            assert!(gap < ratio(1, 10i64.pow(k - 1)));
            if let Some(p) = prev_gap {
                assert!(gap < p);
            }
            prev_gap = Some(gap);
        }
        assert_eq!(f.standard_part(&UltraFragment::default()).unwrap(), int(3));
    }

    #[test]
    fn near_examples() {
        let d = UltraFragment::default();
        assert!(g("1/n").is_near(&Germ::zero(), &d));
        assert!(g("4 + 1/n").is_near(&Germ::constant(int(4)), &d));
        assert!(!g("n").is_near(&Germ::zero(), &d));
    }

    #[test]
    fn display_round_trips_through_parser() {
        for s in [
            "(3*n^2+n)/(n^2+5)",
            "case(3; n, 1/n, -2)",
            "1/(n-3)",
            "-1/2*n^3 + 7",
            "0",
        ] {
            let germ = g(s);
            assert_eq!(g(&germ.to_string()), germ, "{s} -> {germ}");
        }
    }
}
