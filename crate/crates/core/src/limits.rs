//! Limit engines.
//!
//! Three routes to `lim a_n = L`:
//!
//! * witness: the least `ν` with `|a_n - L| < ε` for all `n >= ν`;
//! * Fréchet: `S_ε = {n : |a_n - L| < ε}` is cofinite;
//! * Robinson: `*a_ω ≈ L` for every infinite hypernatural `ω`, which for
//!   piecewise rational germs means every class has the finite limit `L`.
//!
//! Index sets are built exactly. On one residue class every condition is a
//! sign test on a rational function, and the outcome can only change at the
//! naturals bracketing a real root. Everything else is filled in per gap.

use std::cmp::Ordering;
use std::fmt;

use bitvec::prelude::*;
use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::filters::UltraFragment;
use crate::hyper::Germ;
use crate::natset::{NatSet, MAX_MODULUS, MAX_PREFIX};
use crate::poly::{Asymptote, RatFn};
use crate::rational::{self, Rational};
use crate::starsets::{compose, HyperNat};

/// ε values every verdict is cross-checked against.
pub fn epsilon_grid() -> Vec<Rational> {
    vec![
        rational::int(1),
        rational::ratio(1, 2),
        rational::ratio(1, 10),
        rational::ratio(1, 100),
        rational::ratio(1, 1_000_000),
    ]
}

#[derive(Clone, Copy)]
enum SignTest {
    Negative,
    Positive,
    NonNegative,
}

impl SignTest {
    fn accepts(self, s: Ordering) -> bool {
        match self {
            SignTest::Negative => s == Ordering::Less,
            SignTest::Positive => s == Ordering::Greater,
            SignTest::NonNegative => s != Ordering::Less,
        }
    }
}

/// Conditions on one residue class: every function in `defined` must be
/// pole-free at `n` and every `(f, test)` must accept the sign of `f(n)`.
struct ClassRule {
    defined: Vec<RatFn>,
    conds: Vec<(RatFn, SignTest)>,
}

impl ClassRule {
    fn holds_at(&self, n: u64) -> bool {
        self.defined.iter().all(|f| f.eval_nat(n).is_some())
            && self.conds.iter().all(|(f, t)| match f.eval_nat(n) {
                Some(v) => t.accepts(v.cmp(&Rational::zero())),
                None => false,
            })
    }

    fn eventually(&self) -> bool {
        self.conds.iter().all(|(f, t)| t.accepts(f.eventual_sign()))
    }

    fn critical(&self) -> Vec<u64> {
        let mut out: Vec<u64> = self
            .defined
            .iter()
            .chain(self.conds.iter().map(|(f, _)| f))
            .flat_map(RatFn::critical_naturals)
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

fn index_set(modulus: u64, rule: impl Fn(u64) -> ClassRule) -> Result<NatSet> {
    if modulus > MAX_MODULUS {
        return Err(Error::TooLarge(format!("period {modulus}")));
    }
    let rules: Vec<ClassRule> = (0..modulus).map(rule).collect();
    let crits: Vec<Vec<u64>> = rules.iter().map(ClassRule::critical).collect();
    let top = crits
        .iter()
        .filter_map(|c| c.last().map(|&v| v + 1))
        .max()
        .unwrap_or(0);
    if top > MAX_PREFIX {
        return Err(Error::TooLarge(format!("index set threshold {top}")));
    }
    let tail: BitVec = rules.iter().map(ClassRule::eventually).collect();
    let mut prefix = bitvec![0; top as usize];
    for (r, (rule, crit)) in rules.iter().zip(&crits).enumerate() {
        let mut next = 0;
        let mut gap_value: Option<bool> = None;
        let mut n = r as u64;
        while n < top {
            while next < crit.len() && crit[next] < n {
                next += 1;
                gap_value = None;
            }
            let member = if crit.get(next) == Some(&n) {
                rule.holds_at(n)
            } else {
                *gap_value.get_or_insert_with(|| rule.holds_at(n))
            };
            prefix.set(n as usize, member);
            n += modulus;
        }
    }
    Ok(NatSet::from_parts(prefix, tail))
}

fn shifted(f: &RatFn, c: &Rational) -> RatFn {
    f - &RatFn::constant(c.clone())
}

/// `S_ε = {n : |a(n) - L| < ε}`. Poles of the representative are never
/// members.
pub fn s_epsilon(a: &Germ, limit: &Rational, eps: &Rational) -> Result<NatSet> {
    if !eps.is_positive() {
        return Err(Error::InvalidArgument("epsilon must be positive".into()));
    }
    let upper = limit + eps;
    let lower = limit - eps;
    index_set(a.modulus(), |r| {
        let f = a.piece(r);
        ClassRule {
            defined: vec![f.clone()],
            conds: vec![
                (shifted(f, &upper), SignTest::Negative),
                (shifted(f, &lower), SignTest::Positive),
            ],
        }
    })
}

/// `{n : lower(n) <= x(n) <= upper(n)}`
pub fn between_set(lower: &Germ, x: &Germ, upper: &Germ) -> Result<NatSet> {
    let m = rational::lcm_u64(
        rational::lcm_u64(lower.modulus(), x.modulus()),
        upper.modulus(),
    );
    index_set(m, |r| {
        let (l, v, u) = (lower.piece(r), x.piece(r), upper.piece(r));
        ClassRule {
            defined: vec![l.clone(), v.clone(), u.clone()],
            conds: vec![
                (v - l, SignTest::NonNegative),
                (u - v, SignTest::NonNegative),
            ],
        }
    })
}

/// `{n : a(n) <= b(n)}`
pub fn le_set(a: &Germ, b: &Germ) -> Result<NatSet> {
    let m = rational::lcm_u64(a.modulus(), b.modulus());
    index_set(m, |r| {
        let (f, g) = (a.piece(r), b.piece(r));
        ClassRule {
            defined: vec![f.clone(), g.clone()],
            conds: vec![(g - f, SignTest::NonNegative)],
        }
    })
}

pub fn frechet_limit_check(a: &Germ, limit: &Rational, eps: &Rational) -> Result<bool> {
    Ok(s_epsilon(a, limit, eps)?.is_cofinite())
}

/// Least `ν` such that `|a(n) - L| < ε` for every `n >= ν`.
pub fn witness_nu(a: &Germ, limit: &Rational, eps: &Rational) -> Result<u64> {
    let s = s_epsilon(a, limit, eps)?;
    s.frechet_witness().ok_or_else(|| {
        Error::NoWitness(Box::new(CounterExample::BadEpsilon {
            epsilon: eps.clone(),
            against: limit.clone(),
            s_epsilon: s,
        }))
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CounterExample {
    /// `S_ε` for `L = against` is not cofinite.
    BadEpsilon {
        epsilon: Rational,
        against: Rational,
        s_epsilon: NatSet,
    },
    /// `ω = ⟨m*n + r⟩` runs through the class `r` of `a`; `*a_ω` is near
    /// `near` (or infinitely large when `None`) and therefore not near
    /// `against` (or not near any real when `against` is `None`).
    BadOmega {
        omega: HyperNat,
        modulus: u64,
        residue: u64,
        near: Option<Rational>,
        against: Option<Rational>,
    },
}

impl CounterExample {
    /// Re-derives the claim this counterexample makes about `a`.
    pub fn validate(&self, a: &Germ) -> Result<bool> {
        match self {
            CounterExample::BadEpsilon {
                epsilon,
                against,
                s_epsilon: s,
            } => Ok(!s.is_cofinite() && *s == s_epsilon(a, against, epsilon)?),
            CounterExample::BadOmega {
                omega,
                near,
                against,
                ..
            } => {
                let frag = UltraFragment::default();
                let value = compose(a, omega)?;
                let near_ok = match near {
                    Some(v) => value.is_near(&Germ::constant(v.clone()), &frag),
                    None => value.classify(&frag).infinitely_large,
                };
                let against_ok = match against {
                    Some(l) => !value.is_near(&Germ::constant(l.clone()), &frag),
                    None => value.classify(&frag).infinitely_large,
                };
                Ok(near_ok && against_ok)
            }
        }
    }

    pub fn to_json(&self, one_based: bool) -> Value {
        match self {
            CounterExample::BadEpsilon {
                epsilon,
                against,
                s_epsilon,
            } => json!({
                "kind": "bad_epsilon",
                "epsilon": rational::format(epsilon),
                "limit": rational::format(against),
                "s_epsilon": display_set(s_epsilon, one_based),
                "cofinite": false,
            }),
            CounterExample::BadOmega {
                omega,
                modulus,
                residue,
                near,
                against,
            } => json!({
                "kind": "bad_omega",
                "omega": omega.germ().to_string(),
                "class": format!("{residue} mod {modulus}"),
                "near": near.as_ref().map(rational::format),
                "against": against.as_ref().map(rational::format),
            }),
        }
    }
}

impl fmt::Display for CounterExample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CounterExample::BadEpsilon {
                epsilon,
                against,
                s_epsilon,
            } => write!(
                f,
                "eps = {}: S_eps for L = {} is {} (not cofinite)",
                rational::format(epsilon),
                rational::format(against),
                s_epsilon
            ),
            CounterExample::BadOmega {
                omega,
                near,
                against,
                ..
            } => {
                write!(f, "omega = {}: a_omega ", omega.germ())?;
                match near {
                    Some(v) => write!(f, "is near {}", rational::format(v))?,
                    None => write!(f, "is infinitely large")?,
                }
                if let Some(l) = against {
                    write!(f, ", not near {}", rational::format(l))?;
                }
                Ok(())
            }
        }
    }
}

/// Index sets as shown to users; `one_based == false` renumbers so that the
/// term `n = 1` gets index 0.
pub fn display_set(s: &NatSet, one_based: bool) -> String {
    if one_based {
        s.to_string()
    } else {
        s.shift_down(1).to_string()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Converges(Rational),
    Diverges(Vec<CounterExample>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LimitVerdict {
    pub outcome: Outcome,
    /// Engines that reached this outcome independently.
    pub engines: Vec<&'static str>,
}

impl LimitVerdict {
    pub fn limit(&self) -> Option<&Rational> {
        match &self.outcome {
            Outcome::Converges(l) => Some(l),
            Outcome::Diverges(_) => None,
        }
    }

    pub fn counterexamples(&self) -> &[CounterExample] {
        match &self.outcome {
            Outcome::Converges(_) => &[],
            Outcome::Diverges(c) => c,
        }
    }

    pub fn to_json(&self, one_based: bool) -> Value {
        let mut obj = serde_json::Map::new();
        match &self.outcome {
            Outcome::Converges(l) => {
                obj.insert("outcome".into(), json!("converges"));
                obj.insert("limit".into(), json!(rational::format(l)));
            }
            Outcome::Diverges(cs) => {
                obj.insert("outcome".into(), json!("diverges"));
                let omegas: Vec<Value> = cs
                    .iter()
                    .filter(|c| matches!(c, CounterExample::BadOmega { .. }))
                    .map(|c| c.to_json(one_based))
                    .collect();
                let eps = cs
                    .iter()
                    .find(|c| matches!(c, CounterExample::BadEpsilon { .. }))
                    .map(|c| c.to_json(one_based));
                obj.insert(
                    "counterexample".into(),
                    json!({ "bad_omega": omegas, "bad_epsilon": eps }),
                );
            }
        }
        obj.insert("engines".into(), json!(self.engines));
        Value::Object(obj)
    }
}

fn class_limits(a: &Germ) -> Vec<Option<Rational>> {
    a.pieces()
        .iter()
        .map(|p| match p.asymptote() {
            Asymptote::Finite(v) => Some(v),
            _ => None,
        })
        .collect()
}

fn bad_omega(
    a: &Germ,
    r: u64,
    near: Option<Rational>,
    against: Option<Rational>,
) -> CounterExample {
    let m = a.modulus();
    CounterExample::BadOmega {
        omega: HyperNat::class_runner(m, r),
        modulus: m,
        residue: r,
        near,
        against,
    }
}

/// Robinson's criterion, decided class by class.
pub fn robinson_limit(a: &Germ) -> LimitVerdict {
    let limits = class_limits(a);
    let outcome = if let Some(r) = limits.iter().position(Option::is_none) {
        Outcome::Diverges(vec![bad_omega(a, r as u64, None, None)])
    } else {
        let first = limits[0].clone().unwrap();
        match limits.iter().position(|l| l.as_ref() != Some(&first)) {
            None => Outcome::Converges(first),
            Some(r) => {
                let other = limits[r].clone().unwrap();
                Outcome::Diverges(vec![
                    bad_omega(a, 0, Some(first.clone()), Some(other.clone())),
                    bad_omega(a, r as u64, Some(other), Some(first)),
                ])
            }
        }
    };
    LimitVerdict {
        outcome,
        engines: vec!["robinson"],
    }
}

/// A concrete `ε` with `S_ε` not cofinite, showing `L` is not the limit.
pub fn counterexample_epsilon(a: &Germ, limit: &Rational) -> Result<CounterExample> {
    let limits = class_limits(a);
    let epsilon = if limits.iter().any(Option::is_none) {
        rational::int(1)
    } else {
        let gap = limits
            .iter()
            .flatten()
            .map(|l| (l - limit).abs())
            .filter(|g| !g.is_zero())
            .min()
            .ok_or(Error::IsActuallyLimit)?;
        gap / rational::int(2)
    };
    let s = s_epsilon(a, limit, &epsilon)?;
    if s.is_cofinite() {
        return Err(Error::Internal(format!(
            "S_eps for eps = {} is cofinite although L is not the limit",
            rational::format(&epsilon)
        )));
    }
    Ok(CounterExample::BadEpsilon {
        epsilon,
        against: limit.clone(),
        s_epsilon: s,
    })
}

/// Runs all three engines and insists that they agree on the ε grid.
pub fn limit(a: &Germ) -> Result<LimitVerdict> {
    let verdict = robinson_limit(a);
    match verdict.outcome {
        Outcome::Converges(l) => {
            for eps in epsilon_grid() {
                if !frechet_limit_check(a, &l, &eps)? {
                    return Err(Error::Internal(format!(
                        "Fréchet engine rejects L = {} at eps = {}",
                        rational::format(&l),
                        rational::format(&eps)
                    )));
                }
                match witness_nu(a, &l, &eps) {
                    Ok(_) => {}
                    Err(Error::NoWitness(_)) => {
                        return Err(Error::Internal(format!(
                            "no witness for L = {} at eps = {}",
                            rational::format(&l),
                            rational::format(&eps)
                        )))
                    }
                    Err(e) => return Err(e),
                }
            }
            Ok(LimitVerdict {
                outcome: Outcome::Converges(l),
                engines: vec!["robinson", "frechet", "witness"],
            })
        }
        Outcome::Diverges(mut cs) => {
            // the candidate every other class is measured against
            let candidate = class_limits(a)[0].clone().unwrap_or_else(Rational::zero);
            let bad = counterexample_epsilon(a, &candidate)?;
            let CounterExample::BadEpsilon { epsilon, .. } = &bad else {
                unreachable!()
            };
            if witness_nu(a, &candidate, epsilon).is_ok() {
                return Err(Error::Internal("witness engine found a witness".into()));
            }
            cs.push(bad);
            Ok(LimitVerdict {
                outcome: Outcome::Diverges(cs),
                engines: vec!["robinson", "frechet", "witness"],
            })
        }
    }
}

/// How a set in a squeeze trace is produced from the input sequences.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BuildSpec {
    Between {
        lower: Germ,
        x: Germ,
        upper: Germ,
    },
    Near {
        germ: Germ,
        limit: Rational,
        epsilon: Rational,
    },
}

impl BuildSpec {
    fn build(&self) -> Result<NatSet> {
        match self {
            BuildSpec::Between { lower, x, upper } => between_set(lower, x, upper),
            BuildSpec::Near {
                germ,
                limit,
                epsilon,
            } => s_epsilon(germ, limit, epsilon),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepOp {
    Build(BuildSpec),
    Intersect(Vec<String>),
    SubsetCheck(String, String),
    CofiniteCheck(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepResult {
    Set(NatSet),
    Holds(bool),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub name: String,
    pub op: StepOp,
    pub result: StepResult,
}

/// The set algebra behind the squeeze theorem, one recorded step at a time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofTrace {
    pub steps: Vec<TraceStep>,
}

impl ProofTrace {
    fn set(&self, name: &str) -> Result<&NatSet> {
        self.steps
            .iter()
            .find_map(|s| match (&s.result, s.name == name) {
                (StepResult::Set(v), true) => Some(v),
                _ => None,
            })
            .ok_or_else(|| Error::Internal(format!("trace has no set named {name}")))
    }

    fn run(&mut self, name: &str, op: StepOp) -> Result<&StepResult> {
        let result = match &op {
            StepOp::Build(recipe) => StepResult::Set(recipe.build()?),
            StepOp::Intersect(names) => {
                let mut acc = NatSet::all();
                for n in names {
                    acc = acc.intersect(self.set(n)?);
                }
                StepResult::Set(acc)
            }
            StepOp::SubsetCheck(a, b) => StepResult::Holds(self.set(a)?.is_subset(self.set(b)?)),
            StepOp::CofiniteCheck(a) => StepResult::Holds(self.set(a)?.is_cofinite()),
        };
        self.steps.push(TraceStep {
            name: name.to_string(),
            op,
            result,
        });
        Ok(&self.steps.last().unwrap().result)
    }

    /// Re-executes every step from scratch. A sound trace replays to itself.
    pub fn replay(&self) -> Result<ProofTrace> {
        let mut fresh = ProofTrace { steps: Vec::new() };
        for step in &self.steps {
            fresh.run(&step.name, step.op.clone())?;
        }
        Ok(fresh)
    }

    /// Whether the final step established the conclusion.
    pub fn concluded(&self) -> bool {
        matches!(
            self.steps.last(),
            Some(TraceStep {
                op: StepOp::CofiniteCheck(_),
                result: StepResult::Holds(true),
                ..
            })
        )
    }

    pub fn to_json(&self, one_based: bool) -> Value {
        let steps: Vec<Value> = self
            .steps
            .iter()
            .map(|s| {
                let (op, inputs): (&str, Vec<String>) = match &s.op {
                    StepOp::Build(BuildSpec::Between { .. }) => ("build", vec![]),
                    StepOp::Build(BuildSpec::Near { .. }) => ("build", vec![]),
                    StepOp::Intersect(v) => ("intersect", v.clone()),
                    StepOp::SubsetCheck(a, b) => ("subset", vec![a.clone(), b.clone()]),
                    StepOp::CofiniteCheck(a) => ("cofinite", vec![a.clone()]),
                };
                let result = match &s.result {
                    StepResult::Set(v) => json!(display_set(v, one_based)),
                    StepResult::Holds(b) => json!(b),
                };
                json!({ "name": s.name, "op": op, "inputs": inputs, "result": result })
            })
            .collect();
        json!({ "steps": steps, "concluded": self.concluded() })
    }
}

impl fmt::Display for ProofTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.steps {
            let result = match &s.result {
                StepResult::Set(v) => v.to_string(),
                StepResult::Holds(b) => b.to_string(),
            };
            match &s.op {
                StepOp::Build(_) => writeln!(f, "{} := {}", s.name, result)?,
                StepOp::Intersect(v) => {
                    writeln!(f, "{} := {} = {}", s.name, v.join(" ∩ "), result)?
                }
                StepOp::SubsetCheck(a, b) => writeln!(f, "{a} ⊆ {b}: {result}")?,
                StepOp::CofiniteCheck(a) => writeln!(f, "{a} cofinite: {result}")?,
            }
        }
        Ok(())
    }
}

/// Squeeze theorem for one ε: from `a <= x <= b` eventually and
/// `S_ε(a), S_ε(b)` cofinite, conclude `S_ε(x)` cofinite via
/// `X ∩ A_ε ∩ B_ε ⊆ S_ε`.
pub fn squeeze_check(
    a: &Germ,
    b: &Germ,
    x: &Germ,
    limit: &Rational,
    eps: &Rational,
) -> Result<ProofTrace> {
    if !eps.is_positive() {
        return Err(Error::InvalidArgument("epsilon must be positive".into()));
    }
    let near = |g: &Germ| {
        StepOp::Build(BuildSpec::Near {
            germ: g.clone(),
            limit: limit.clone(),
            epsilon: eps.clone(),
        })
    };
    let mut trace = ProofTrace { steps: Vec::new() };
    let hypotheses = [
        (
            "X",
            StepOp::Build(BuildSpec::Between {
                lower: a.clone(),
                x: x.clone(),
                upper: b.clone(),
            }),
        ),
        ("A_eps", near(a)),
        ("B_eps", near(b)),
    ];
    for (name, op) in hypotheses {
        trace.run(name, op)?;
        if trace.run(name, StepOp::CofiniteCheck(name.into()))? != &StepResult::Holds(true) {
            return Err(Error::HypothesisFailed(format!("{name} is not cofinite")));
        }
    }
    trace.run(
        "X ∩ A_eps ∩ B_eps",
        StepOp::Intersect(vec!["X".into(), "A_eps".into(), "B_eps".into()]),
    )?;
    trace.run("S_eps", near(x))?;
    let inside = trace.run(
        "subset",
        StepOp::SubsetCheck("X ∩ A_eps ∩ B_eps".into(), "S_eps".into()),
    )?;
    if inside != &StepResult::Holds(true) {
        return Err(Error::Internal(
            "X ∩ A_eps ∩ B_eps is not inside S_eps".into(),
        ));
    }
    if trace.run("S_eps", StepOp::CofiniteCheck("S_eps".into()))? != &StepResult::Holds(true) {
        return Err(Error::Internal(
            "S_eps contains a cofinite set but is not cofinite".into(),
        ));
    }
    Ok(trace)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderReport {
    pub limit_a: Rational,
    pub limit_b: Rational,
    /// `{n : a(n) <= b(n)}`, cofinite by the premise.
    pub le_set: NatSet,
}

impl OrderReport {
    pub fn to_json(&self, one_based: bool) -> Value {
        json!({
            "limit_a": rational::format(&self.limit_a),
            "limit_b": rational::format(&self.limit_b),
            "le_set": display_set(&self.le_set, one_based),
            "holds": self.limit_a <= self.limit_b,
        })
    }
}

/// Limits preserve `<=`: checks the premises and then the conclusion.
pub fn order_check(a: &Germ, b: &Germ) -> Result<OrderReport> {
    let lim = |g: &Germ, name: &str| {
        robinson_limit(g)
            .limit()
            .cloned()
            .ok_or_else(|| Error::PremiseFailed(format!("{name} has no limit")))
    };
    let (limit_a, limit_b) = (lim(a, "a")?, lim(b, "b")?);
    let le = le_set(a, b)?;
    if !le.is_cofinite() {
        return Err(Error::PremiseFailed(
            "{n : a(n) <= b(n)} is not cofinite".into(),
        ));
    }
    if limit_a > limit_b {
        return Err(Error::Internal(format!(
            "lim a = {} exceeds lim b = {}",
            rational::format(&limit_a),
            rational::format(&limit_b)
        )));
    }
    Ok(OrderReport {
        limit_a,
        limit_b,
        le_set: le,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_germ;
    use crate::rational::{int, ratio};

    fn g(s: &str) -> Germ {
        parse_germ(s).unwrap()
    }

    fn scan(a: &Germ, l: &Rational, e: &Rational, upto: u64) -> Vec<bool> {
        (0..upto)
            .map(|n| a.value_at(n).is_some_and(|v| (v - l).abs() < *e))
            .collect()
    }

    #[test]
    fn s_epsilon_matches_scan() {
        let s = s_epsilon(&g("1/n"), &int(0), &ratio(1, 100)).unwrap();
        assert_eq!(s, NatSet::tail(101));
        let brute = scan(&g("1/n"), &int(0), &ratio(1, 100), 201);
        assert!((0..201).all(|n| s.member(n) == brute[n as usize]));

        let alt = g("case(2; 1, -1)");
        let s = s_epsilon(&alt, &int(1), &ratio(1, 2)).unwrap();
        assert_eq!(s, NatSet::evens());
        assert!(!frechet_limit_check(&alt, &int(1), &ratio(1, 2)).unwrap());

        let s = s_epsilon(&g("n"), &int(0), &int(1000)).unwrap();
        assert_eq!(s, NatSet::finite(&(0..1000).collect::<Vec<_>>()));
        assert!(!s.is_cofinite());
    }

    #[test]
    fn witness_examples() {
        assert_eq!(witness_nu(&g("1/n"), &int(0), &ratio(1, 100)).unwrap(), 101);
        for e in epsilon_grid() {
            assert_eq!(witness_nu(&g("7/3"), &ratio(7, 3), &e).unwrap(), 0);
        }
        let a = g("(3*n^2+n)/(n^2+5)");
        let nu = witness_nu(&a, &int(3), &ratio(1, 10)).unwrap();
        let brute = scan(&a, &int(3), &ratio(1, 10), 1000);
        assert!(!brute[nu as usize - 1]);
        assert!(brute[nu as usize..].iter().all(|&b| b));
        let big = witness_nu(
            &(&Germ::constant(ratio(-3, 2)) + &g("1/n")),
            &ratio(-3, 2),
            &ratio(1, 1_000_000),
        );
        assert_eq!(big.unwrap(), 1_000_001);
    }

    #[test]
    fn no_witness_carries_s_epsilon() {
        match witness_nu(&g("(-1)^n"), &int(1), &ratio(1, 2)) {
            Err(Error::NoWitness(c)) => assert!(c.validate(&g("(-1)^n")).unwrap()),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn robinson_examples() {
        assert_eq!(robinson_limit(&g("1/n")).limit(), Some(&int(0)));
        let alt = g("case(2; 1, -1)");
        let v = robinson_limit(&alt);
        assert_eq!(v.counterexamples().len(), 2);
        for c in v.counterexamples() {
            assert!(c.validate(&alt).unwrap());
        }
        let v = robinson_limit(&g("n"));
        match &v.counterexamples()[0] {
            CounterExample::BadOmega { omega, near, .. } => {
                assert_eq!(omega.germ(), &Germ::index());
                assert!(near.is_none());
            }
            c => panic!("unexpected {c:?}"),
        }
    }

    #[test]
    fn full_limit_verdicts() {
        let v = limit(&g("1/n")).unwrap();
        assert_eq!(
            v.to_json(true),
            json!({"outcome": "converges", "limit": "0", "engines": ["robinson", "frechet", "witness"]})
        );
        let a = g("(-1)^n");
        let v = limit(&a).unwrap();
        let cs = v.counterexamples();
        assert!(cs
            .iter()
            .any(|c| matches!(c, CounterExample::BadOmega { .. })));
        assert!(cs
            .iter()
            .any(|c| matches!(c, CounterExample::BadEpsilon { .. })));
        assert!(cs.iter().all(|c| c.validate(&a).unwrap()));
    }

    #[test]
    fn counterexample_epsilon_examples() {
        match counterexample_epsilon(&g("case(2; 1, -1)"), &int(1)).unwrap() {
            CounterExample::BadEpsilon {
                epsilon, s_epsilon, ..
            } => {
                assert_eq!(epsilon, int(1));
                assert!(s_epsilon.intersect(&NatSet::odds()).is_empty());
            }
            c => panic!("unexpected {c:?}"),
        }
        match counterexample_epsilon(&g("n"), &int(0)).unwrap() {
            CounterExample::BadEpsilon {
                epsilon, s_epsilon, ..
            } => {
                assert_eq!(epsilon, int(1));
                assert!(s_epsilon.is_finite());
            }
            c => panic!("unexpected {c:?}"),
        }
        assert!(matches!(
            counterexample_epsilon(&g("1/n"), &int(0)),
            Err(Error::IsActuallyLimit)
        ));
    }

    #[test]
    fn squeeze_examples() {
        let (a, b) = (g("-1/n"), g("1/n"));
        let x = &g("case(2; 1, -1)") * &g("1/n");
        for e in [ratio(1, 10), ratio(1, 100)] {
            let t = squeeze_check(&a, &b, &x, &int(0), &e).unwrap();
            assert!(t.concluded());
            assert_eq!(t.replay().unwrap(), t);
        }
        let r = Germ::constant(ratio(5, 4));
        let t = squeeze_check(&r, &r, &r, &ratio(5, 4), &ratio(1, 10)).unwrap();
        assert!(t.steps.iter().all(|s| match &s.result {
            StepResult::Set(v) => *v == NatSet::all(),
            StepResult::Holds(h) => *h,
        }));
        match squeeze_check(&g("1/n"), &g("3"), &g("2"), &int(0), &ratio(1, 10)) {
            Err(Error::HypothesisFailed(m)) => assert!(m.contains("B_eps")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn order_examples() {
        let r = order_check(&g("1/n"), &g("2/n")).unwrap();
        assert_eq!((r.limit_a, r.limit_b), (int(0), int(0)));
        let r = order_check(&g("1 - 1/n"), &g("1")).unwrap();
        assert_eq!((r.limit_a, r.limit_b), (int(1), int(1)));
        assert!(matches!(
            order_check(&g("2"), &g("1")),
            Err(Error::PremiseFailed(_))
        ));
        assert!(matches!(
            order_check(&g("n"), &g("n+1")),
            Err(Error::PremiseFailed(_))
        ));
    }
}
