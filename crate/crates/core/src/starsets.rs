//! Nonstandard extensions of real sets, hypernaturals and hypersequences.
//!
//! A [`RealSetDesc`] is a finite union of rational points and intervals,
//! kept in a canonical form: maximal pieces, sorted, pairwise disjoint and
//! non-adjacent. Membership of a germ in `*A` only needs eventual signs of
//! the selected piece against the finitely many endpoints of `A`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::filters::UltraFragment;
use crate::hyper::Germ;
use crate::poly::{Poly, RatFn};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SetPiece {
    Point(Rational),
    /// `None` ends are infinite (and therefore open).
    Interval {
        lo: Option<Rational>,
        hi: Option<Rational>,
        lo_closed: bool,
        hi_closed: bool,
    },
}

impl SetPiece {
    pub fn open(lo: Rational, hi: Rational) -> SetPiece {
        SetPiece::Interval {
            lo: Some(lo),
            hi: Some(hi),
            lo_closed: false,
            hi_closed: false,
        }
    }

    pub fn closed(lo: Rational, hi: Rational) -> SetPiece {
        SetPiece::Interval {
            lo: Some(lo),
            hi: Some(hi),
            lo_closed: true,
            hi_closed: true,
        }
    }

    pub fn contains(&self, x: &Rational) -> bool {
        match self {
            SetPiece::Point(p) => p == x,
            SetPiece::Interval {
                lo,
                hi,
                lo_closed,
                hi_closed,
            } => {
                let above = match lo {
                    None => true,
                    Some(l) => x > l || (*lo_closed && x == l),
                };
                let below = match hi {
                    None => true,
                    Some(h) => x < h || (*hi_closed && x == h),
                };
                above && below
            }
        }
    }

    /// Whether the sequence `f(n)` lies in the piece for all large `n`.
    fn eventually_contains(&self, f: &RatFn) -> bool {
        let sign_vs = |c: &Rational| (f - &RatFn::constant(c.clone())).eventual_sign();
        match self {
            SetPiece::Point(p) => sign_vs(p) == Ordering::Equal,
            SetPiece::Interval {
                lo,
                hi,
                lo_closed,
                hi_closed,
            } => {
                let above = match lo {
                    None => true,
                    Some(l) => match sign_vs(l) {
                        Ordering::Greater => true,
                        Ordering::Equal => *lo_closed,
                        Ordering::Less => false,
                    },
                };
                let below = match hi {
                    None => true,
                    Some(h) => match sign_vs(h) {
                        Ordering::Less => true,
                        Ordering::Equal => *hi_closed,
                        Ordering::Greater => false,
                    },
                };
                above && below
            }
        }
    }
}

/// Finite union of rational points and intervals in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct RealSetDesc {
    pieces: Vec<SetPiece>,
}

impl RealSetDesc {
    pub fn empty() -> Self {
        RealSetDesc { pieces: Vec::new() }
    }

    pub fn reals() -> Self {
        Self::from_pieces(vec![SetPiece::Interval {
            lo: None,
            hi: None,
            lo_closed: false,
            hi_closed: false,
        }])
        .unwrap()
    }

    /// Validates each piece (`lo < hi`, infinite ends open) and returns the
    /// canonical form of their union.
    pub fn from_pieces(pieces: Vec<SetPiece>) -> Result<Self> {
        for p in &pieces {
            if let SetPiece::Interval {
                lo,
                hi,
                lo_closed,
                hi_closed,
            } = p
            {
                if let (Some(l), Some(h)) = (lo, hi) {
                    if l >= h {
                        return Err(Error::InvalidSet(format!(
                            "interval needs lo < hi, got {} and {}",
                            rational::format(l),
                            rational::format(h)
                        )));
                    }
                }
                if (lo.is_none() && *lo_closed) || (hi.is_none() && *hi_closed) {
                    return Err(Error::InvalidSet("infinite ends must be open".into()));
                }
            }
        }
        let raw = RealSetDesc { pieces };
        Ok(Self::rebuild(&raw.breakpoints(), |x| raw.contains(x)))
    }

    pub fn pieces(&self) -> &[SetPiece] {
        &self.pieces
    }

    pub fn is_finite(&self) -> bool {
        self.pieces.iter().all(|p| matches!(p, SetPiece::Point(_)))
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.pieces.iter().any(|p| p.contains(x))
    }

    fn breakpoints(&self) -> Vec<Rational> {
        let mut out = Vec::new();
        for p in &self.pieces {
            match p {
                SetPiece::Point(v) => out.push(v.clone()),
                SetPiece::Interval { lo, hi, .. } => {
                    out.extend(lo.iter().cloned());
                    out.extend(hi.iter().cloned());
                }
            }
        }
        out.sort();
        out.dedup();
        out
    }

    /// Rebuilds a canonical set from membership on the regions cut out by
    /// sorted breakpoints: `(-inf, b0), {b0}, (b0, b1), ..., (bk, inf)`.
    fn rebuild(breaks: &[Rational], member: impl Fn(&Rational) -> bool) -> Self {
        let k = breaks.len();
        // region 2i is the open gap before breaks[i]; 2i+1 is the point
        let sample = |region: usize| -> Rational {
            if region % 2 == 1 {
                return breaks[region / 2].clone();
            }
            let i = region / 2;
            match (i.checked_sub(1).map(|j| &breaks[j]), breaks.get(i)) {
                (None, None) => Rational::zero(),
                (None, Some(b)) => b - Rational::one(),
                (Some(a), None) => a + Rational::one(),
                (Some(a), Some(b)) => (a + b) / rational::int(2),
            }
        };
        let flags: Vec<bool> = (0..=2 * k).map(|r| member(&sample(r))).collect();
        let mut pieces = Vec::new();
        let mut r = 0;
        while r <= 2 * k {
            if !flags[r] {
                r += 1;
                continue;
            }
            let start = r;
            while r + 1 <= 2 * k && flags[r + 1] {
                r += 1;
            }
            let end = r;
            r += 1;
            if start == end && start % 2 == 1 {
                pieces.push(SetPiece::Point(breaks[start / 2].clone()));
                continue;
            }
            let (lo, lo_closed) = if start % 2 == 1 {
                (Some(breaks[start / 2].clone()), true)
            } else if start == 0 {
                (None, false)
            } else {
                (Some(breaks[start / 2 - 1].clone()), false)
            };
            let (hi, hi_closed) = if end % 2 == 1 {
                (Some(breaks[end / 2].clone()), true)
            } else if end == 2 * k {
                (None, false)
            } else {
                (Some(breaks[end / 2].clone()), false)
            };
            pieces.push(SetPiece::Interval {
                lo,
                hi,
                lo_closed,
                hi_closed,
            });
        }
        RealSetDesc { pieces }
    }

    fn combine(&self, other: &Self, op: impl Fn(bool, bool) -> bool) -> Self {
        let mut breaks = self.breakpoints();
        breaks.extend(other.breakpoints());
        breaks.sort();
        breaks.dedup();
        Self::rebuild(&breaks, |x| op(self.contains(x), other.contains(x)))
    }

    pub fn union(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a || b)
    }

    pub fn intersect(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a && b)
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a && !b)
    }

    pub fn complement(&self) -> Self {
        Self::rebuild(&self.breakpoints(), |x| !self.contains(x))
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.difference(other).pieces.is_empty()
    }
}

impl fmt::Display for SetPiece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SetPiece::Point(v) => write!(f, "{{{}}}", rational::format(v)),
            SetPiece::Interval {
                lo,
                hi,
                lo_closed,
                hi_closed,
            } => {
                let lo = lo.as_ref().map_or("-inf".to_string(), rational::format);
                let hi = hi.as_ref().map_or("inf".to_string(), rational::format);
                write!(
                    f,
                    "{}{},{}{}",
                    if *lo_closed { '[' } else { '(' },
                    lo,
                    hi,
                    if *hi_closed { ']' } else { ')' }
                )
            }
        }
    }
}

/// `(0,2]  {3}  [5,inf)`; the empty set prints as `{}`.
impl fmt::Display for RealSetDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pieces.is_empty() {
            return f.write_str("{}");
        }
        let parts: Vec<String> = self.pieces.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join(" "))
    }
}

impl FromStr for RealSetDesc {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let bad = |m: String| Error::InvalidSet(m);
        let bound = |s: &str| -> Result<Option<Rational>> {
            match s.trim() {
                "inf" | "+inf" | "-inf" => Ok(None),
                t => rational::parse(t)
                    .map(Some)
                    .ok_or_else(|| bad(format!("bad endpoint `{t}`"))),
            }
        };
        let mut pieces = Vec::new();
        let mut rest = text.trim();
        while !rest.is_empty() {
            let open = rest.as_bytes()[0];
            let close_at = rest
                .find([')', ']', '}'])
                .ok_or_else(|| bad(format!("unterminated piece in `{rest}`")))?;
            let close = rest.as_bytes()[close_at];
            let inner = &rest[1..close_at];
            match (open, close) {
                (b'{', b'}') => {
                    if !inner.trim().is_empty() {
                        for v in inner.split(',') {
                            pieces.push(SetPiece::Point(
                                rational::parse(v)
                                    .ok_or_else(|| bad(format!("bad point `{v}`")))?,
                            ));
                        }
                    }
                }
                (b'(' | b'[', b')' | b']') => {
                    let (l, h) = inner
                        .split_once(',')
                        .ok_or_else(|| bad(format!("interval `{inner}` needs a comma")))?;
                    let (lo, hi) = (bound(l)?, bound(h)?);
                    if l.trim() == "inf" || l.trim() == "+inf" || h.trim() == "-inf" {
                        return Err(bad(format!("interval `{inner}` has ends reversed")));
                    }
                    pieces.push(SetPiece::Interval {
                        lo,
                        hi,
                        lo_closed: open == b'[',
                        hi_closed: close == b']',
                    });
                }
                _ => {
                    return Err(bad(format!(
                        "mismatched brackets in `{}`",
                        &rest[..=close_at]
                    )))
                }
            }
            rest = rest[close_at + 1..].trim_start();
        }
        RealSetDesc::from_pieces(pieces)
    }
}

/// Membership of the germ in `*A` relative to `frag`.
pub fn star_member(x: &Germ, set: &RealSetDesc, frag: &UltraFragment) -> bool {
    let f = x.selected(frag);
    set.pieces.iter().any(|p| p.eventually_contains(f))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NonHypernaturalReason {
    NonPolynomial,
    NonIntegerValued,
    EventuallyNegative,
}

impl fmt::Display for NonHypernaturalReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NonHypernaturalReason::NonPolynomial => "non-polynomial",
            NonHypernaturalReason::NonIntegerValued => "non-integer-valued",
            NonHypernaturalReason::EventuallyNegative => "eventually negative",
        })
    }
}

/// An element of `*N`: a germ whose every class is a polynomial that takes
/// nonnegative integer values on its class from some index on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HyperNat {
    germ: Germ,
}

impl HyperNat {
    pub fn germ(&self) -> &Germ {
        &self.germ
    }

    /// `Some(c)` if this is the standard natural `c`.
    pub fn standard_value(&self) -> Option<u64> {
        let c = self.germ.pieces()[0].as_constant()?;
        if self.germ.modulus() != 1 {
            return None;
        }
        rational::to_u64(&c)
    }

    pub fn is_infinite(&self) -> bool {
        self.standard_value().is_none()
    }

    /// `⟨m*n + r⟩`, the hypernatural running through one residue class.
    pub fn class_runner(m: u64, r: u64) -> HyperNat {
        HyperNat {
            germ: Germ::from(Poly::linear(rational::nat(m), rational::nat(r))),
        }
    }
}

/// Certifies that `x` is a hypernatural relative to `frag`.
///
/// The selected piece `f` must be a polynomial with `g(t) = f(m*t + r)`
/// integer-valued (checked at `deg + 1` consecutive points, which suffices
/// for integer-valued polynomials) and eventually nonnegative. The result
/// spreads `f` to every class as `f(n + r - s)`, which agrees with `x` on
/// the selected class and is integer-valued everywhere.
pub fn as_hypernatural(x: &Germ, frag: &UltraFragment) -> Result<HyperNat> {
    let m = x.modulus();
    let r = frag.residue(m);
    let f = x
        .piece(r)
        .as_poly()
        .ok_or(Error::NotHypernatural(NonHypernaturalReason::NonPolynomial))?
        .clone();
    let g = f.compose(&Poly::linear(rational::nat(m), rational::nat(r)));
    let d = g.degree().unwrap_or(0) as u64;
    if !(0..=d).all(|t| g.eval_nat(t).is_integer()) {
        return Err(Error::NotHypernatural(
            NonHypernaturalReason::NonIntegerValued,
        ));
    }
    if g.eventual_sign() == Ordering::Less {
        return Err(Error::NotHypernatural(
            NonHypernaturalReason::EventuallyNegative,
        ));
    }
    let pieces = (0..m)
        .map(|s| {
            let shift = rational::nat(r) - rational::nat(s);
            RatFn::poly(f.compose(&Poly::linear(Rational::one(), shift)))
        })
        .collect();
    Ok(HyperNat {
        germ: Germ::from_pieces(pieces),
    })
}

/// The hypersequence `*a` evaluated at `omega`: the germ of `a(omega(n))`.
pub fn compose(a: &Germ, omega: &HyperNat) -> Result<Germ> {
    let w = omega.germ();
    let mw = w.modulus();
    let ma = a.modulus();
    let ma_big = BigInt::from(ma);
    let mut threshold = a.threshold();
    // Per class s of omega: g_s(t) = P_s(mw*t + s) is integer-valued, and
    // g_s(t) mod ma has period dividing (denominator lcm of g_s) * ma.
    let mut class_polys = Vec::with_capacity(mw as usize);
    let mut period = BigInt::one();
    for s in 0..mw {
        let p = w
            .piece(s)
            .as_poly()
            .expect("hypernatural pieces are polynomials")
            .clone();
        let g = p.compose(&Poly::linear(rational::nat(mw), rational::nat(s)));
        match p.as_constant() {
            Some(c) => {
                if c < rational::nat(a.threshold()) {
                    return Err(Error::DomainTooSmall {
                        threshold: a.threshold(),
                    });
                }
            }
            None => {
                let past = &p - &Poly::constant(rational::nat(a.threshold()));
                threshold = threshold.max(past.stable_index().unwrap_or(u64::MAX));
            }
        }
        period = period.lcm(&(g.denominator_lcm() * &ma_big));
        class_polys.push((p, g));
    }
    let total = BigInt::from(mw) * &period;
    let total = total
        .to_u64()
        .filter(|&t| t <= crate::natset::MAX_MODULUS)
        .ok_or_else(|| Error::TooLarge(format!("composition period {total}")))?;
    let mut pieces = Vec::with_capacity(total as usize);
    for rho in 0..total {
        let s = rho % mw;
        let (p, g) = &class_polys[s as usize];
        let t0 = rational::nat((rho - s) / mw);
        let value = g.eval(&t0);
        debug_assert!(value.is_integer());
        let k = value.to_integer().mod_floor(&ma_big).to_u64().unwrap();
        let piece = a
            .piece(k)
            .compose(p)
            .expect("monic denominators stay nonzero");
        pieces.push(piece);
    }
    Ok(Germ::from_pieces(pieces).with_threshold_at_least(threshold))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_germ;
    use crate::rational::{int, ratio};

    fn g(s: &str) -> Germ {
        parse_germ(s).unwrap()
    }

    fn set(s: &str) -> RealSetDesc {
        s.parse().unwrap()
    }

    #[test]
    fn star_member_examples() {
        let d = UltraFragment::default();
        for r in [int(0), int(1), ratio(-3, 2)] {
            let x = &Germ::constant(r.clone()) + &g("1/n");
            let a =
                RealSetDesc::from_pieces(vec![SetPiece::open(&r - int(1), &r + int(1))]).unwrap();
            assert!(star_member(&x, &a, &d));
            assert!(!x.classify(&d).standard);
        }
        let a = set("(0,2] {3}");
        for (v, inside) in [
            (int(1), true),
            (int(3), true),
            (int(0), false),
            (int(2), true),
        ] {
            assert_eq!(star_member(&Germ::constant(v.clone()), &a, &d), inside);
            assert_eq!(a.contains(&v), inside);
        }
        assert!(!star_member(&g("1/n"), &set("{0}"), &d));
        assert!(star_member(&g("2 - 1/n"), &set("(0,2)"), &d));
        assert!(!star_member(&g("2 + 1/n"), &set("(0,2]"), &d));
        assert!(star_member(&g("n"), &set("[5,inf)"), &d));
    }

    #[test]
    fn boolean_op_examples() {
        assert_eq!(set("(0,2)").intersect(&set("(1,3)")), set("(1,2)"));
        let u = set("(0,1)").union(&set("{1}")).union(&set("(1,2)"));
        assert_eq!(u, set("(0,2)"));
        for probe in [ratio(1, 2), int(1), ratio(3, 2)] {
            assert!(u.contains(&probe));
        }
        assert_eq!(set("(0,3)").difference(&set("{1}")), set("(0,1) (1,3)"));
        assert_eq!(set("(0,1) {1} (1,2)").to_string(), "(0,2)");
        assert_eq!(set("(-inf,0] [0,inf)"), RealSetDesc::reals());
    }

    #[test]
    fn set_text_errors() {
        assert!("(2,1)".parse::<RealSetDesc>().is_err());
        assert!("[-inf,0)".parse::<RealSetDesc>().is_err());
        assert!("(0,1".parse::<RealSetDesc>().is_err());
        assert!("(0;1)".parse::<RealSetDesc>().is_err());
        assert_eq!("".parse::<RealSetDesc>().unwrap(), RealSetDesc::empty());
        assert_eq!(set("{3, 1}").to_string(), "{1} {3}");
    }

    #[test]
    fn hypernatural_examples() {
        let d = UltraFragment::default();
        let w = as_hypernatural(&g("n"), &d).unwrap();
        assert!(w.is_infinite());
        assert!(w.germ().classify(&d).infinitely_large);
        assert!(as_hypernatural(&g("n*(n+1)/2"), &d).is_ok());
        assert!(matches!(
            as_hypernatural(&g("n/2"), &d),
            Err(Error::NotHypernatural(
                NonHypernaturalReason::NonIntegerValued
            ))
        ));
        assert!(matches!(
            as_hypernatural(&g("1/n"), &d),
            Err(Error::NotHypernatural(NonHypernaturalReason::NonPolynomial))
        ));
        assert!(matches!(
            as_hypernatural(&g("5 - n"), &d),
            Err(Error::NotHypernatural(
                NonHypernaturalReason::EventuallyNegative
            ))
        ));
        let c = as_hypernatural(&g("7"), &d).unwrap();
        assert_eq!(c.standard_value(), Some(7));
        // n/2 is integer-valued on the even class only
        let half = as_hypernatural(&g("case(2; n/2, 1/n)"), &d).unwrap();
        assert!(half.germ().eq_rel(&g("n/2"), &d));
        assert!((0..20).all(|n| half.germ().value_at(n).unwrap().is_integer()));
    }

    #[test]
    fn compose_examples() {
        let d = UltraFragment::default();
        let w = as_hypernatural(&g("2*n+5"), &d).unwrap();
        assert_eq!(compose(&g("1/n"), &w).unwrap(), g("1/(2*n+5)"));
        let even = as_hypernatural(&g("2*n"), &d).unwrap();
        assert_eq!(compose(&g("(-1)^n"), &even).unwrap(), Germ::one());
        let sq = as_hypernatural(&g("n^2"), &d).unwrap();
        let c = compose(&g("(3*n^2+n)/(n^2+5)"), &sq).unwrap();
        assert_eq!(c.standard_part(&d).unwrap(), int(3));
        for t in 10..=1000 {
            let v = c.value_at(t).unwrap();
            assert!(v > int(3) && v < int(3) + ratio(1, 10));
        }
    }

    #[test]
    fn compose_with_triangular_numbers() {
        let d = UltraFragment::default();
        let tri = as_hypernatural(&g("n*(n+1)/2"), &d).unwrap();
        let a = g("case(3; n, 1/n, 2)");
        let c = compose(&a, &tri).unwrap();
        for t in c.threshold()..c.threshold() + 200 {
            let w = tri
                .germ()
                .value_at(t)
                .unwrap()
                .to_integer()
                .to_u64()
                .unwrap();
            assert_eq!(c.value_at(t), a.value_at(w), "t={t}");
        }
    }

    #[test]
    fn compose_rejects_small_constants() {
        let d = UltraFragment::default();
        let a = g("1/(n-10)");
        let three = as_hypernatural(&g("3"), &d).unwrap();
        assert!(matches!(
            compose(&a, &three),
            Err(Error::DomainTooSmall { .. })
        ));
        let big = as_hypernatural(&g("100"), &d).unwrap();
        assert_eq!(compose(&a, &big).unwrap(), Germ::constant(ratio(1, 90)));
    }

    use num_traits::ToPrimitive;
}
