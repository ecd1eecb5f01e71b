//! Filters, ultrafilters and two-valued measures on a finite universe
//! `{0, ..., k-1}`, found by brute force over every family of subsets.
//!
//! A subset is a bitmask `< 2^k`; a family is a bitmask over subsets, so for
//! `k <= 4` it fits in a `u32` and there are at most `2^16` families.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

pub const MAX_UNIVERSE: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteFamily {
    k: usize,
    members: u32,
}

impl FiniteFamily {
    pub fn new(k: usize, members: u32) -> Result<Self> {
        check_k(k)?;
        let space = 1u64 << (1u32 << k);
        if u64::from(members) >= space {
            return Err(Error::InvalidArgument(format!(
                "family bitmask {members:#x} names subsets outside a universe of size {k}"
            )));
        }
        Ok(FiniteFamily { k, members })
    }

    pub fn from_sets(k: usize, sets: &[u32]) -> Result<Self> {
        check_k(k)?;
        let mut members = 0u32;
        for &s in sets {
            if s >= 1 << k {
                return Err(Error::InvalidArgument(format!(
                    "subset {s:#b} outside universe"
                )));
            }
            members |= 1 << s;
        }
        Ok(FiniteFamily { k, members })
    }

    /// `{X : base ⊆ X}`
    pub fn principal(k: usize, base: u32) -> Result<Self> {
        let sets: Vec<u32> = (0..1u32 << k).filter(|x| x & base == base).collect();
        Self::from_sets(k, &sets)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn members(&self) -> u32 {
        self.members
    }

    pub fn universe(&self) -> u32 {
        (1 << self.k) - 1
    }

    pub fn contains(&self, set: u32) -> bool {
        self.members >> set & 1 == 1
    }

    pub fn sets(&self) -> impl Iterator<Item = u32> + '_ {
        (0..1u32 << self.k).filter(|&s| self.contains(s))
    }

    pub fn is_subfamily(&self, other: &FiniteFamily) -> bool {
        self.members & !other.members == 0
    }

    /// Nonempty, omits the empty set, closed under intersection and under
    /// supersets.
    pub fn is_filter(&self) -> bool {
        if self.members == 0 || self.contains(0) {
            return false;
        }
        let all: Vec<u32> = (0..1u32 << self.k).collect();
        self.sets().all(|a| {
            self.sets().all(|b| self.contains(a & b))
                && all
                    .iter()
                    .filter(|&&x| x & a == a)
                    .all(|&x| self.contains(x))
        })
    }

    /// `A ∈ F` or `U ∖ A ∈ F` for every `A`.
    pub fn has_dichotomy(&self) -> bool {
        (0..1u32 << self.k).all(|a| self.contains(a) || self.contains(self.universe() & !a))
    }

    /// Intersection of all members, as a bitmask.
    pub fn kernel(&self) -> u32 {
        self.sets().fold(self.universe(), |acc, s| acc & s)
    }
}

impl fmt::Display for FiniteFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sets: Vec<String> = self
            .sets()
            .map(|s| {
                let pts: Vec<String> = (0..self.k)
                    .filter(|i| s >> i & 1 == 1)
                    .map(|i| i.to_string())
                    .collect();
                format!("{{{}}}", pts.join(","))
            })
            .collect();
        write!(f, "{{{}}}", sets.join(", "))
    }
}

fn check_k(k: usize) -> Result<()> {
    if (1..=MAX_UNIVERSE).contains(&k) {
        Ok(())
    } else {
        Err(Error::UniverseTooLarge(k))
    }
}

fn all_families(k: usize) -> impl Iterator<Item = FiniteFamily> {
    (0..1u64 << (1u32 << k)).map(move |m| FiniteFamily {
        k,
        members: m as u32,
    })
}

/// Every family satisfying the filter axioms, in bitmask order.
pub fn enumerate_filters(k: usize) -> Result<Vec<FiniteFamily>> {
    check_k(k)?;
    Ok(all_families(k).filter(FiniteFamily::is_filter).collect())
}

/// Filters not strictly contained in another filter.
pub fn enumerate_ultrafilters(k: usize) -> Result<Vec<FiniteFamily>> {
    let filters = enumerate_filters(k)?;
    Ok(maximal(&filters))
}

fn maximal(filters: &[FiniteFamily]) -> Vec<FiniteFamily> {
    filters
        .iter()
        .filter(|f| !filters.iter().any(|g| g != *f && f.is_subfamily(g)))
        .copied()
        .collect()
}

/// All ultrafilters containing `f`.
pub fn extend_filter(f: &FiniteFamily) -> Result<Vec<FiniteFamily>> {
    if !f.is_filter() {
        return Err(Error::NotAFilter);
    }
    Ok(enumerate_ultrafilters(f.k)?
        .into_iter()
        .filter(|u| f.is_subfamily(u))
        .collect())
}

/// Checks of the two-valued measure `μ(A) = [A ∈ F]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MeasureReport {
    pub universe_has_measure_one: bool,
    pub empty_has_measure_zero: bool,
    pub additive: bool,
    /// Exactly one of `A`, `U ∖ A` has measure one.
    pub complement_exclusive: bool,
    pub intersection_closed: bool,
    pub monotone: bool,
}

impl MeasureReport {
    pub fn all_hold(&self) -> bool {
        self.universe_has_measure_one
            && self.empty_has_measure_zero
            && self.additive
            && self.complement_exclusive
            && self.intersection_closed
            && self.monotone
    }
}

fn measure_report(f: &FiniteFamily) -> MeasureReport {
    let mu = |a: u32| u8::from(f.contains(a));
    let n = 1u32 << f.k;
    let u = f.universe();
    let pairs = || (0..n).flat_map(move |a| (0..n).map(move |b| (a, b)));
    MeasureReport {
        universe_has_measure_one: mu(u) == 1,
        empty_has_measure_zero: mu(0) == 0,
        additive: pairs()
            .filter(|(a, b)| a & b == 0)
            .all(|(a, b)| mu(a | b) == mu(a) + mu(b)),
        complement_exclusive: (0..n).all(|a| mu(a) + mu(u & !a) == 1),
        intersection_closed: pairs()
            .filter(|&(a, b)| mu(a) == 1 && mu(b) == 1)
            .all(|(a, b)| mu(a & b) == 1),
        monotone: pairs()
            .filter(|&(a, b)| a & b == a && mu(a) == 1)
            .all(|(_, b)| mu(b) == 1),
    }
}

/// Measure checks for an ultrafilter.
pub fn check_measure(f: &FiniteFamily) -> Result<MeasureReport> {
    if !f.is_filter() || !f.has_dichotomy() {
        return Err(Error::NotUltra);
    }
    Ok(measure_report(f))
}

/// Union lemma on `u`: if `A_1 ∪ ... ∪ A_j ∈ U` then some `A_i ∈ U`, and
/// exactly one when the `A_i` are pairwise disjoint. Checked on every
/// family of one to three subsets.
fn union_lemma_holds(u: &FiniteFamily) -> bool {
    let n = 1u32 << u.k;
    let mut families: Vec<Vec<u32>> = Vec::new();
    for a in 0..n {
        families.push(vec![a]);
        for b in 0..n {
            families.push(vec![a, b]);
            for c in 0..n {
                families.push(vec![a, b, c]);
            }
        }
    }
    families.iter().all(|sets| {
        let union = sets.iter().fold(0, |acc, s| acc | s);
        if !u.contains(union) {
            return true;
        }
        let hits = sets.iter().filter(|&&s| u.contains(s)).count();
        let disjoint = sets
            .iter()
            .enumerate()
            .all(|(i, a)| sets[i + 1..].iter().all(|b| a & b == 0));
        hits >= 1 && (!disjoint || hits == 1)
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModelReport {
    pub k: usize,
    pub filters: usize,
    pub expected_filters: usize,
    pub ultrafilters: usize,
    pub expected_ultrafilters: usize,
    /// Every filter is `{X : B ⊆ X}` for its kernel `B`.
    pub filters_principal: bool,
    /// Ultrafilters are exactly the point filters.
    pub ultrafilters_are_points: bool,
    pub every_filter_extends: bool,
    /// Maximal filters coincide with the filters having the dichotomy.
    pub dichotomy_exact: bool,
    pub union_lemma: bool,
    /// Indicator of a family is a two-valued additive measure with
    /// `μ(U) = 1` exactly when the family is an ultrafilter.
    pub measure_correspondence: bool,
    pub measure_lemmas: bool,
    /// Every filter has a nonempty kernel, so none is free.
    pub no_free_filter: bool,
}

impl ModelReport {
    pub fn passed(&self) -> bool {
        self.filters == self.expected_filters
            && self.ultrafilters == self.expected_ultrafilters
            && self.filters_principal
            && self.ultrafilters_are_points
            && self.every_filter_extends
            && self.dichotomy_exact
            && self.union_lemma
            && self.measure_correspondence
            && self.measure_lemmas
            && self.no_free_filter
    }
}

impl ModelReport {
    /// Every field plus `"passed"`.
    pub fn to_json(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        v["passed"] = self.passed().into();
        v
    }
}

pub fn model_check(k: usize) -> Result<ModelReport> {
    check_k(k)?;
    let filters = enumerate_filters(k)?;
    let ultras = maximal(&filters);
    let dichotomous: Vec<FiniteFamily> = filters
        .iter()
        .filter(|f| f.has_dichotomy())
        .copied()
        .collect();
    let points: Vec<FiniteFamily> = (0..k)
        .map(|a| FiniteFamily::principal(k, 1 << a))
        .collect::<Result<_>>()?;
    let mut sorted_points = points.clone();
    sorted_points.sort();
    let n = 1u32 << k;
    let is_measure = |f: &FiniteFamily| {
        f.contains(f.universe())
            && !f.contains(0)
            && (0..n).all(|a| {
                (0..n)
                    .filter(|b| a & b == 0)
                    .all(|b| f.contains(a | b) as u8 == f.contains(a) as u8 + f.contains(b) as u8)
            })
    };
    Ok(ModelReport {
        k,
        filters: filters.len(),
        expected_filters: (1 << k) - 1,
        ultrafilters: ultras.len(),
        expected_ultrafilters: k,
        filters_principal: filters
            .iter()
            .all(|f| FiniteFamily::principal(k, f.kernel()).map_or(false, |p| p == *f)),
        ultrafilters_are_points: ultras == sorted_points,
        every_filter_extends: filters
            .iter()
            .all(|f| extend_filter(f).map_or(false, |e| !e.is_empty())),
        dichotomy_exact: dichotomous == ultras,
        union_lemma: ultras.iter().all(union_lemma_holds),
        measure_correspondence: all_families(k).all(|f| is_measure(&f) == ultras.contains(&f)),
        measure_lemmas: ultras
            .iter()
            .all(|u| check_measure(u).map_or(false, |r| r.all_hold())),
        no_free_filter: filters.iter().all(|f| f.kernel() != 0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Filter axioms spelled out over explicit set lists.
    fn oracle_is_filter(k: usize, sets: &[Vec<usize>]) -> bool {
        use std::collections::BTreeSet;
        let fam: BTreeSet<BTreeSet<usize>> =
            sets.iter().map(|s| s.iter().copied().collect()).collect();
        let universe: Vec<usize> = (0..k).collect();
        let subsets: Vec<BTreeSet<usize>> = (0..1usize << k)
            .map(|m| {
                universe
                    .iter()
                    .copied()
                    .filter(|i| m >> i & 1 == 1)
                    .collect()
            })
            .collect();
        !fam.is_empty()
            && !fam.contains(&BTreeSet::new())
            && fam.iter().all(|a| {
                fam.iter()
                    .all(|b| fam.contains(&(a & b).into_iter().collect()))
            })
            && fam.iter().all(|a| {
                subsets
                    .iter()
                    .filter(|x| a.is_subset(x))
                    .all(|x| fam.contains(x))
            })
    }

    #[test]
    fn filter_counts_match_oracle() {
        for k in 1..=3 {
            let n = 1u32 << k;
            let oracle = (0..1u64 << n)
                .filter(|&m| {
                    let sets: Vec<Vec<usize>> = (0..n)
                        .filter(|s| m >> s & 1 == 1)
                        .map(|s| (0..k).filter(|i| s >> i & 1 == 1).collect())
                        .collect();
                    oracle_is_filter(k, &sets)
                })
                .count();
            assert_eq!(enumerate_filters(k).unwrap().len(), oracle);
        }
        assert_eq!(enumerate_filters(1).unwrap().len(), 1);
        assert_eq!(enumerate_filters(3).unwrap().len(), 7);
        assert_eq!(enumerate_filters(4).unwrap().len(), 15);
    }

    #[test]
    fn ultrafilters_are_point_filters() {
        for (k, n) in [(1, 1), (3, 3), (4, 4)] {
            let u = enumerate_ultrafilters(k).unwrap();
            assert_eq!(u.len(), n);
            for f in &u {
                let a = f.kernel();
                assert_eq!(a.count_ones(), 1);
                assert!(f.sets().all(|s| s & a == a));
            }
        }
    }

    #[test]
    fn extension_examples() {
        let f = FiniteFamily::principal(3, 0b011).unwrap();
        let ext = extend_filter(&f).unwrap();
        let kernels: Vec<u32> = ext.iter().map(FiniteFamily::kernel).collect();
        assert_eq!(kernels, vec![0b001, 0b010]);
        let u = FiniteFamily::principal(3, 0b100).unwrap();
        assert_eq!(extend_filter(&u).unwrap(), vec![u]);
        let top = FiniteFamily::from_sets(3, &[0b111]).unwrap();
        assert_eq!(extend_filter(&top).unwrap().len(), 3);
        let bad = FiniteFamily::from_sets(3, &[0b001, 0b010]).unwrap();
        assert!(matches!(extend_filter(&bad), Err(Error::NotAFilter)));
    }

    #[test]
    fn measure_examples() {
        let f0 = FiniteFamily::principal(3, 0b001).unwrap();
        assert!(f0.contains(0b011));
        assert!(!f0.contains(0b110));
        assert!(!f0.contains(0));
        assert!(check_measure(&f0).unwrap().all_hold());
        let not_ultra = FiniteFamily::principal(3, 0b011).unwrap();
        assert!(matches!(check_measure(&not_ultra), Err(Error::NotUltra)));
    }

    #[test]
    fn reports_pass_and_reject_large_universes() {
        for k in 1..=4 {
            let r = model_check(k).unwrap();
            assert!(r.passed(), "{r:?}");
        }
        assert!(matches!(model_check(5), Err(Error::UniverseTooLarge(5))));
        assert!(matches!(model_check(0), Err(Error::UniverseTooLarge(0))));
    }

    #[test]
    fn display_lists_sets() {
        let f = FiniteFamily::principal(2, 0b01).unwrap();
        assert_eq!(f.to_string(), "{{0}, {0,1}}");
    }
}
