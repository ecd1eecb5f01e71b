//! Dense univariate polynomials and reduced rational functions over Q.
//!
//! The variable is always the sequence index `n`. Besides field arithmetic
//! this module owns the sign machinery everything else leans on: Cauchy
//! root bounds, eventual signs and Sturm-based isolation of the real roots
//! that lie at or above zero.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::{self, Rational};

/// Coefficients stored low degree first, without trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The polynomial `n`.
    pub fn var() -> Self {
        Self::from_coeffs(vec![Rational::zero(), Rational::one()])
    }

    /// `a*n + b`
    pub fn linear(a: Rational, b: Rational) -> Self {
        Self::from_coeffs(vec![b, a])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    /// Value of a polynomial of degree at most 0.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.coeffs.len() {
            0 => Some(Rational::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_nat(&self, n: u64) -> Rational {
        self.eval(&rational::nat(n))
    }

    pub fn scale(&self, k: &Rational) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some(lc) => self.scale(&lc.recip()),
        }
    }

    pub fn derivative(&self) -> Poly {
        Poly::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * rational::nat(i as u64))
                .collect(),
        )
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Euclidean division. Panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        let dd = divisor.degree().expect("polynomial division by zero");
        let lc = divisor.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + dd] / &lc;
            if !c.is_zero() {
                for (j, d) in divisor.coeffs.iter().enumerate() {
                    rem[i + j] -= &c * d;
                }
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        (Poly::from_coeffs(quot), Poly::from_coeffs(rem))
    }

    /// Monic greatest common divisor; zero only when both inputs are zero.
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// `self(inner(n))`
    pub fn compose(&self, inner: &Poly) -> Poly {
        let mut acc = Poly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * inner) + &Poly::constant(c.clone());
        }
        acc
    }

    /// Sign of the polynomial for all sufficiently large `n`.
    pub fn eventual_sign(&self) -> Ordering {
        match self.leading() {
            None => Ordering::Equal,
            Some(lc) => lc.cmp(&Rational::zero()),
        }
    }

    /// Cauchy bound `1 + max |a_i| / |a_d|`: every complex root has modulus
    /// below it. Constants have no roots and get bound 0.
    pub fn cauchy_bound(&self) -> Rational {
        match self.degree() {
            None | Some(0) => Rational::zero(),
            Some(d) => {
                let lc = self.coeffs[d].abs();
                let max = self.coeffs[..d]
                    .iter()
                    .map(|c| c.abs())
                    .max()
                    .unwrap_or_else(Rational::zero);
                Rational::one() + max / lc
            }
        }
    }

    /// First natural number strictly past the Cauchy bound.
    pub fn stable_index(&self) -> Option<u64> {
        let b = self.cauchy_bound();
        if b.is_zero() {
            return Some(0);
        }
        rational::floor_u64(&b).and_then(|f| f.checked_add(1))
    }

    /// Least common multiple of the coefficient denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    pub fn is_integer_coefficients(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    fn squarefree(&self) -> Poly {
        let g = Poly::gcd(self, &self.derivative());
        if g.degree().unwrap_or(0) == 0 {
            self.monic()
        } else {
            self.div_rem(&g).0.monic()
        }
    }

    fn sturm_chain(&self) -> Vec<Poly> {
        let mut chain = vec![self.clone(), self.derivative()];
        loop {
            let n = chain.len();
            if chain[n - 1].is_zero() {
                chain.pop();
                break;
            }
            let r = chain[n - 2].div_rem(&chain[n - 1]).1;
            if r.is_zero() {
                break;
            }
            chain.push(-&r);
        }
        chain
    }

    /// Isolating intervals `(lo, hi]` of width at most 1 for the distinct
    /// real roots in `(lo, hi]`, sorted ascending. `lo` must not be a root.
    pub fn root_intervals(&self, lo: &Rational, hi: &Rational) -> Vec<(Rational, Rational)> {
        if self.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let p = self.squarefree();
        let chain = p.sturm_chain();
        let variations = |x: &Rational| -> usize {
            let mut last = Ordering::Equal;
            let mut count = 0;
            for q in &chain {
                let s = q.eval(x).cmp(&Rational::zero());
                if s != Ordering::Equal {
                    if last != Ordering::Equal && s != last {
                        count += 1;
                    }
                    last = s;
                }
            }
            count
        };
        let mut out = Vec::new();
        let mut stack = vec![(lo.clone(), variations(lo), hi.clone(), variations(hi))];
        while let Some((a, va, b, vb)) = stack.pop() {
            let k = va.saturating_sub(vb);
            if k == 0 {
                continue;
            }
            if k == 1 && &b - &a <= Rational::one() {
                out.push((a, b));
                continue;
            }
            let mid = split_point(&p, &a, &b);
            let vm = variations(&mid);
            stack.push((a, va, mid.clone(), vm));
            stack.push((mid, vm, b, vb));
        }
        out.sort();
        out
    }

    /// Natural numbers adjacent to a nonnegative real root. Between two
    /// consecutive returned integers, and past the last one, the sign of the
    /// polynomial on integers is constant.
    pub fn critical_naturals(&self) -> Vec<u64> {
        if self.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let mut lo = rational::ratio(-1, 2);
        let mut step = 3;
        while self.eval(&lo).is_zero() {
            lo = rational::ratio(-1, step);
            step += 1;
        }
        let hi = self.cauchy_bound() + Rational::one();
        let mut out = Vec::new();
        for (a, b) in self.root_intervals(&lo, &hi) {
            let from = a.floor();
            let to = b.ceil();
            let from = rational::to_u64(&from.max(Rational::zero())).unwrap_or(0);
            let to = rational::to_u64(&to.max(Rational::zero())).unwrap_or(from);
            out.extend(from..=to);
        }
        out.sort_unstable();
        out.dedup();
        out
    }
}

fn split_point(p: &Poly, a: &Rational, b: &Rational) -> Rational {
    let width = b - a;
    let mut denom = 2;
    loop {
        for num in 1..denom {
            let m = a + &width * rational::ratio(num, denom);
            if !p.eval(&m).is_zero() {
                return m;
            }
        }
        denom += 1;
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let zero = Rational::zero();
        Poly::from_coeffs(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&zero) + rhs.coeffs.get(i).unwrap_or(&zero))
                .collect(),
        )
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::from_coeffs(out)
    }
}

/// Writes the polynomial in the sequence grammar, e.g. `3*n^2 - 1/2*n + 5`.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = if first { c.clone() } else { c.abs() };
            if !first {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            first = false;
            let power = match i {
                0 => String::new(),
                1 => "n".to_string(),
                _ => format!("n^{i}"),
            };
            if i == 0 {
                f.write_str(&rational::format(&mag))?;
            } else if mag.is_one() {
                f.write_str(&power)?;
            } else {
                write!(f, "{}*{}", rational::format(&mag), power)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

/// A rational function `num / den` in lowest terms with a monic denominator.
/// The zero function is `0 / 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFn {
    num: Poly,
    den: Poly,
}

/// Behaviour of a rational function as `n` grows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Asymptote {
    Finite(Rational),
    PosInfinity,
    NegInfinity,
}

impl RatFn {
    /// Reduces `num / den`; `None` if `den` is the zero polynomial.
    pub fn new(num: Poly, den: Poly) -> Option<Self> {
        let lc = den.leading()?.clone();
        if num.is_zero() {
            return Some(Self::zero());
        }
        let g = Poly::gcd(&num, &den);
        let (num, den) = if g.degree() == Some(0) {
            (num, den)
        } else {
            (num.div_rem(&g).0, den.div_rem(&g).0)
        };
        let lc = if g.degree() == Some(0) {
            lc
        } else {
            den.leading().unwrap().clone()
        };
        let inv = lc.recip();
        Some(RatFn {
            num: num.scale(&inv),
            den: den.scale(&inv),
        })
    }

    pub fn zero() -> Self {
        RatFn {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        RatFn {
            num: Poly::constant(c),
            den: Poly::one(),
        }
    }

    pub fn poly(p: Poly) -> Self {
        RatFn {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn var() -> Self {
        Self::poly(Poly::var())
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        if self.den.degree() == Some(0) {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn as_poly(&self) -> Option<&Poly> {
        (self.den.degree() == Some(0)).then_some(&self.num)
    }

    /// `None` at a pole.
    pub fn eval(&self, x: &Rational) -> Option<Rational> {
        let d = self.den.eval(x);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(x) / d)
        }
    }

    pub fn eval_nat(&self, n: u64) -> Option<Rational> {
        self.eval(&rational::nat(n))
    }

    pub fn recip(&self) -> Option<RatFn> {
        RatFn::new(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, rhs: &RatFn) -> Option<RatFn> {
        RatFn::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }

    pub fn pow(&self, e: i64) -> Option<RatFn> {
        let mag = u32::try_from(e.unsigned_abs()).ok()?;
        let p = RatFn {
            num: self.num.pow(mag),
            den: self.den.pow(mag),
        };
        if e < 0 {
            p.recip()
        } else {
            Some(p)
        }
    }

    /// `self(inner(n))`
    pub fn compose(&self, inner: &Poly) -> Option<RatFn> {
        RatFn::new(self.num.compose(inner), self.den.compose(inner))
    }

    pub fn eventual_sign(&self) -> Ordering {
        self.num.eventual_sign()
    }

    pub fn asymptote(&self) -> Asymptote {
        let dn = match self.num.degree() {
            None => return Asymptote::Finite(Rational::zero()),
            Some(d) => d,
        };
        let dd = self.den.degree().unwrap_or(0);
        match dn.cmp(&dd) {
            Ordering::Less => Asymptote::Finite(Rational::zero()),
            Ordering::Equal => Asymptote::Finite(self.num.leading().unwrap().clone()),
            Ordering::Greater => {
                if self.num.leading().unwrap().is_positive() {
                    Asymptote::PosInfinity
                } else {
                    Asymptote::NegInfinity
                }
            }
        }
    }

    /// First natural past the root bounds of numerator and denominator: from
    /// there on the function has no poles and a constant sign.
    pub fn stable_index(&self) -> Option<u64> {
        Some(self.num.stable_index()?.max(self.den.stable_index()?))
    }

    /// Naturals where the sign of the function (or a pole) may change.
    pub fn critical_naturals(&self) -> Vec<u64> {
        let mut v = self.num.critical_naturals();
        v.extend(self.den.critical_naturals());
        v.sort_unstable();
        v.dedup();
        v
    }
}

impl Add for &RatFn {
    type Output = RatFn;
    fn add(self, rhs: &RatFn) -> RatFn {
        if self.den == rhs.den {
            return RatFn::new(&self.num + &rhs.num, self.den.clone()).unwrap();
        }
        RatFn::new(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
        .unwrap()
    }
}

impl Sub for &RatFn {
    type Output = RatFn;
    fn sub(self, rhs: &RatFn) -> RatFn {
        self + &(-rhs)
    }
}

impl Neg for &RatFn {
    type Output = RatFn;
    fn neg(self) -> RatFn {
        RatFn {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Mul for &RatFn {
    type Output = RatFn;
    fn mul(self, rhs: &RatFn) -> RatFn {
        RatFn::new(&self.num * &rhs.num, &self.den * &rhs.den).unwrap()
    }
}

/// Grammar form: `num` or `(num)/(den)`, parenthesized only when needed.
impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.degree() == Some(0) {
            return write!(f, "{}", self.num);
        }
        let single_term = |p: &Poly| p.coeffs().iter().filter(|c| !c.is_zero()).count() == 1;
        let num = self.num.to_string();
        if single_term(&self.num) && !self.num.leading().unwrap().is_negative() {
            f.write_str(&num)?;
        } else {
            write!(f, "({num})")?;
        }
        let den = self.den.to_string();
        // Monic single-term denominators print as a bare `n` or `n^k`.
        if single_term(&self.den) {
            write!(f, "/{den}")
        } else {
            write!(f, "/({den})")
        }
    }
}

impl fmt::Debug for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFn({self})")
    }
}
