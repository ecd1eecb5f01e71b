//! Generators and an independent evaluator shared by the integration tests.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, One, Zero};
use rand::Rng;

use starline::expr::{to_germ, SeqExpr};
use starline::{Germ, NatSet, Rational, UltraFragment};

pub type Small = Ratio<i128>;

/// Direct evaluation of the tree in `i128` fractions, `None` at a division
/// by zero. Overflow falls back to big rationals.
pub fn oracle_eval(e: &SeqExpr, n: u64) -> Option<Rational> {
    match small_eval(e, n) {
        Ok(v) => v.map(|v| Rational::new(BigInt::from(*v.numer()), BigInt::from(*v.denom()))),
        Err(Overflow) => big_eval(e, n),
    }
}

struct Overflow;

fn small_eval(e: &SeqExpr, n: u64) -> Result<Option<Small>, Overflow> {
    use SeqExpr::*;
    let ov = |x: Option<Small>| x.ok_or(Overflow);
    macro_rules! sub {
        ($x:expr) => {
            match small_eval($x, n)? {
                Some(v) => v,
                None => return Ok(None),
            }
        };
    }
    Ok(Some(match e {
        RationalConst(c) => {
            let (p, q) = (i128::try_from(c.numer()), i128::try_from(c.denom()));
            match (p, q) {
                (Ok(p), Ok(q)) => Small::new(p, q),
                _ => return Err(Overflow),
            }
        }
        IndexVar => Small::from_integer(n as i128),
        Add(a, b) => ov(sub!(a).checked_add(&sub!(b)))?,
        Sub(a, b) => ov(sub!(a).checked_sub(&sub!(b)))?,
        Mul(a, b) => ov(sub!(a).checked_mul(&sub!(b)))?,
        Div(a, b) => {
            let d = sub!(b);
            if d.is_zero() {
                return Ok(None);
            }
            ov(sub!(a).checked_div(&d))?
        }
        IntPow(b, k) => {
            let base = sub!(b);
            if *k < 0 && base.is_zero() {
                return Ok(None);
            }
            let base = if *k < 0 { base.recip() } else { base };
            let mut acc = Small::one();
            for _ in 0..k.unsigned_abs() {
                acc = ov(acc.checked_mul(&base))?;
            }
            acc
        }
        CaseMod(m, branches) => sub!(&branches[(n % m) as usize]),
    }))
}

fn big_eval(e: &SeqExpr, n: u64) -> Option<Rational> {
    use SeqExpr::*;
    Some(match e {
        RationalConst(c) => c.clone(),
        IndexVar => Rational::from_integer(BigInt::from(n)),
        Add(a, b) => big_eval(a, n)? + big_eval(b, n)?,
        Sub(a, b) => big_eval(a, n)? - big_eval(b, n)?,
        Mul(a, b) => big_eval(a, n)? * big_eval(b, n)?,
        Div(a, b) => {
            let d = big_eval(b, n)?;
            if d.is_zero() {
                return None;
            }
            big_eval(a, n)? / d
        }
        IntPow(b, k) => {
            let v = big_eval(b, n)?;
            if *k < 0 && v.is_zero() {
                return None;
            }
            let v = if *k < 0 { v.recip() } else { v };
            (0..k.unsigned_abs()).fold(Rational::one(), |acc, _| acc * &v)
        }
        CaseMod(m, branches) => big_eval(&branches[(n % m) as usize], n)?,
    })
}

pub fn q(p: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(d))
}

fn leaf(rng: &mut impl Rng) -> SeqExpr {
    if rng.gen_bool(0.45) {
        SeqExpr::IndexVar
    } else {
        let d = [1, 1, 1, 2, 3][rng.gen_range(0..5)];
        SeqExpr::RationalConst(q(rng.gen_range(-5..=5), d))
    }
}

/// A random expression tree of the given depth.
pub fn rand_expr(rng: &mut impl Rng, depth: u32) -> SeqExpr {
    if depth == 0 || rng.gen_bool(0.25) {
        return leaf(rng);
    }
    let sub = |rng: &mut _| Box::new(rand_expr(rng, depth - 1));
    match rng.gen_range(0..10) {
        0 | 1 => SeqExpr::Add(sub(rng), sub(rng)),
        2 => SeqExpr::Sub(sub(rng), sub(rng)),
        3 | 4 => SeqExpr::Mul(sub(rng), sub(rng)),
        5 | 6 => SeqExpr::Div(sub(rng), sub(rng)),
        7 => SeqExpr::IntPow(sub(rng), rng.gen_range(-2..=3)),
        _ => {
            let m = rng.gen_range(2..=3);
            SeqExpr::CaseMod(m, (0..m).map(|_| rand_expr(rng, depth - 1)).collect())
        }
    }
}

/// A random expression that denotes a germ (no class divides by zero).
pub fn rand_germ(rng: &mut impl Rng, depth: u32) -> (SeqExpr, Germ) {
    loop {
        let e = rand_expr(rng, depth);
        if let Ok(g) = to_germ(&e) {
            return (e, g);
        }
    }
}

pub fn rand_natset(rng: &mut impl Rng) -> NatSet {
    let m = rng.gen_range(1..=12u64);
    let residues: Vec<u64> = (0..m).filter(|_| rng.gen_bool(0.5)).collect();
    let t = rng.gen_range(0..40u64);
    let mut exceptions = Vec::new();
    for i in 0..t {
        if rng.gen_bool(0.3) {
            exceptions.push((i, rng.gen_bool(0.5)));
        }
    }
    NatSet::normalize(t, m, &residues, &exceptions).unwrap()
}

/// A fragment through a random point, described by a few of its residues.
pub fn rand_fragment(rng: &mut impl Rng) -> UltraFragment {
    let x: u64 = rng.gen_range(0..1_000_000);
    let k = rng.gen_range(0..4);
    let constraints: Vec<(u64, u64)> = (0..k)
        .map(|_| {
            let m = rng.gen_range(2..=12);
            (m, x % m)
        })
        .collect();
    UltraFragment::new(&constraints).unwrap()
}

pub fn fixed_fragments() -> Vec<UltraFragment> {
    ["", "2:1", "3:2", "2:1,3:1", "4:3,5:2"]
        .iter()
        .map(|s| s.parse().unwrap())
        .collect()
}

/// The first index `>= from` lying in class `r` modulo `m`.
pub fn next_in_class(from: u64, m: u64, r: u64) -> u64 {
    from + (r + m - from % m) % m
}
