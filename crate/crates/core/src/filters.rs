//! Filters generated by finite bases, ultrafilter fragments and the
//! two-valued measure they induce.
//!
//! An [`UltraFragment`] is the residue tower of one integer point `x`: for
//! every modulus `m` it selects the class `x mod m`. Towers of this shape
//! are coherent under divisibility, so they decide every eventually
//! periodic set the way some free ultrafilter would: a set is "large" iff
//! its tail rule contains the selected residue. Finite prefixes never
//! matter, which is exactly freeness.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::natset::NatSet;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UltraFragment {
    constraints: Vec<(u64, u64)>,
    point: BigInt,
    period: BigInt,
}

impl Default for UltraFragment {
    /// The zero tower: residue 0 for every modulus.
    fn default() -> Self {
        UltraFragment {
            constraints: Vec::new(),
            point: BigInt::zero(),
            period: BigInt::from(1u8),
        }
    }
}

impl UltraFragment {
    /// Fragment through the least nonnegative solution of
    /// `x ≡ r_i (mod m_i)` for all constraints.
    pub fn new(constraints: &[(u64, u64)]) -> Result<Self> {
        let mut point = BigInt::zero();
        let mut period = BigInt::from(1u8);
        for &(m, r) in constraints {
            if m == 0 || r >= m {
                return Err(Error::InvalidFragment(format!(
                    "constraint {m}:{r} needs 0 <= residue < modulus"
                )));
            }
            let (m_big, r_big) = (BigInt::from(m), BigInt::from(r));
            let g = period.extended_gcd(&m_big);
            let diff = &r_big - &point;
            if !(&diff % &g.gcd).is_zero() {
                return Err(Error::IncoherentConstraints(format!(
                    "{m}:{r} contradicts the earlier constraints (x ≡ {point} mod {period})"
                )));
            }
            let lcm = &period / &g.gcd * &m_big;
            // point + period * k with k = (diff/g) * inv(period/g) mod (m/g)
            let k = (&diff / &g.gcd * &g.x).mod_floor(&(&m_big / &g.gcd));
            point = (&point + &period * k).mod_floor(&lcm);
            period = lcm;
        }
        Ok(UltraFragment {
            constraints: constraints.to_vec(),
            point,
            period,
        })
    }

    pub fn constraints(&self) -> &[(u64, u64)] {
        &self.constraints
    }

    /// The integer point whose residues form the tower.
    pub fn point(&self) -> &BigInt {
        &self.point
    }

    /// The class selected modulo `m`.
    pub fn residue(&self, m: u64) -> u64 {
        assert!(m > 0, "modulus must be positive");
        self.point
            .mod_floor(&BigInt::from(m))
            .to_u64()
            .expect("residue fits its modulus")
    }

    /// Membership of `set` in the ultrafilter this fragment stands for.
    pub fn decide(&self, set: &NatSet) -> bool {
        set.has_residue(self.residue(set.modulus()))
    }

    pub fn measure(&self) -> Measure01<'_> {
        Measure01 { fragment: self }
    }
}

impl fmt::Display for UltraFragment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .constraints
            .iter()
            .map(|(m, r)| format!("{m}:{r}"))
            .collect();
        f.write_str(&parts.join(","))
    }
}

impl fmt::Debug for UltraFragment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UltraFragment(\"{self}\", x={})", self.point)
    }
}

/// `"2:1,3:2"`; the empty string is the zero tower.
impl FromStr for UltraFragment {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut constraints = Vec::new();
        for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (m, r) = item
                .split_once(':')
                .ok_or_else(|| Error::InvalidFragment(format!("`{item}` is not m:r")))?;
            let parse = |s: &str| {
                s.trim()
                    .parse::<u64>()
                    .map_err(|_| Error::InvalidFragment(format!("bad number in `{item}`")))
            };
            constraints.push((parse(m)?, parse(r)?));
        }
        UltraFragment::new(&constraints)
    }
}

/// The {0,1}-valued finitely additive measure of a fragment.
#[derive(Clone, Copy, Debug)]
pub struct Measure01<'a> {
    fragment: &'a UltraFragment,
}

impl Measure01<'_> {
    pub fn of(&self, set: &NatSet) -> u8 {
        u8::from(self.fragment.decide(set))
    }
}

/// A finite filter basis, stored together with the intersection of all its
/// members (the smallest finite intersection).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilterBasis {
    sets: Vec<NatSet>,
    core: NatSet,
}

impl FilterBasis {
    pub fn new(sets: Vec<NatSet>) -> Result<Self> {
        if sets.is_empty() {
            return Err(Error::EmptyBasisIntersection);
        }
        let core = sets
            .iter()
            .skip(1)
            .fold(sets[0].clone(), |acc, s| acc.intersect(s));
        if core.is_empty() {
            return Err(Error::EmptyBasisIntersection);
        }
        Ok(FilterBasis { sets, core })
    }

    pub fn sets(&self) -> &[NatSet] {
        &self.sets
    }

    /// Membership in the filter generated by the basis.
    pub fn generated_member(&self, set: &NatSet) -> bool {
        self.core.is_subset(set)
    }
}
