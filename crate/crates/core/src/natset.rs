//! Eventually periodic subsets of N.
//!
//! A set is stored as its exact membership on a finite prefix `[0, T)` plus
//! a periodic rule `n mod m ∈ R` that governs every `n >= T`. The canonical
//! form has the minimal period `m` and the minimal threshold `T`, so two
//! canonical sets are equal exactly when their fields are.
//!
//! Text form: `{T=5; mod=2; res=0; exc=+1,-3}`. `res` lists the residues of
//! the tail rule, `exc` overrides single indices (`+i` member, `-i`
//! non-member) or half-open runs (`-0..101`). Shorthands: `N`, `empty`,
//! `evens`, `odds`, `tail(v)`, `mod(m,r)` and `finite(a,b,...)`.

use std::fmt;
use std::str::FromStr;

use bitvec::prelude::*;

use crate::error::{Error, Result};
use crate::rational::lcm_u64;

/// Longest prefix (in bits) a set may carry.
pub const MAX_PREFIX: u64 = 1 << 30;
/// Largest tail period accepted from text or constructors.
pub const MAX_MODULUS: u64 = 1 << 24;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct NatSet {
    modulus: u64,
    residues: BitVec,
    prefix: BitVec,
}

impl NatSet {
    fn canonical(mut prefix: BitVec, residues: BitVec) -> NatSet {
        let m = residues.len();
        let period = (1..=m)
            .filter(|d| m % d == 0)
            .find(|&d| (d..m).all(|i| residues[i] == residues[i % d]))
            .unwrap_or(m);
        let residues: BitVec = residues[..period].to_bitvec();
        let mut t = prefix.len();
        while t > 0 && prefix[t - 1] == residues[(t - 1) % period] {
            t -= 1;
        }
        prefix.truncate(t);
        prefix.shrink_to_fit();
        NatSet {
            modulus: period as u64,
            residues,
            prefix,
        }
    }

    /// Canonical form of the set whose members below `threshold` follow the
    /// tail rule unless overridden by `exceptions`, and whose members from
    /// `threshold` on are exactly `n` with `n mod modulus ∈ residues`.
    pub fn normalize(
        threshold: u64,
        modulus: u64,
        residues: &[u64],
        exceptions: &[(u64, bool)],
    ) -> Result<NatSet> {
        if modulus == 0 || modulus > MAX_MODULUS {
            return Err(Error::InvalidSet(format!("modulus {modulus} out of range")));
        }
        let mut res = bitvec![0; modulus as usize];
        for &r in residues {
            if r >= modulus {
                return Err(Error::InvalidSet(format!(
                    "residue {r} is not below modulus {modulus}"
                )));
            }
            res.set(r as usize, true);
        }
        let top = exceptions
            .iter()
            .map(|&(i, _)| i.saturating_add(1))
            .max()
            .unwrap_or(0)
            .max(threshold);
        if top > MAX_PREFIX {
            return Err(Error::TooLarge(format!("threshold {top}")));
        }
        let mut prefix: BitVec = (0..top).map(|n| res[(n % modulus) as usize]).collect();
        for &(i, flag) in exceptions {
            prefix.set(i as usize, flag);
        }
        Ok(Self::canonical(prefix, res))
    }

    /// Builds a set from its membership on `[0, threshold)` and the tail
    /// rule given as a residue bitmap of length `modulus`.
    pub fn from_parts(prefix: BitVec, residues: BitVec) -> NatSet {
        assert!(!residues.is_empty(), "tail rule needs a positive modulus");
        Self::canonical(prefix, residues)
    }

    pub fn all() -> NatSet {
        Self::from_parts(BitVec::new(), bitvec![1])
    }

    pub fn empty() -> NatSet {
        Self::from_parts(BitVec::new(), bitvec![0])
    }

    /// `{v, v+1, v+2, ...}`
    pub fn tail(v: u64) -> NatSet {
        assert!(v <= MAX_PREFIX, "tail start {v} exceeds MAX_PREFIX");
        Self::from_parts(bitvec![0; v as usize], bitvec![1])
    }

    /// `{n : n ≡ r (mod m)}`
    pub fn residue_class(m: u64, r: u64) -> NatSet {
        assert!(m > 0 && r < m && m <= MAX_MODULUS);
        let mut res = bitvec![0; m as usize];
        res.set(r as usize, true);
        Self::from_parts(BitVec::new(), res)
    }

    pub fn evens() -> NatSet {
        Self::residue_class(2, 0)
    }

    pub fn odds() -> NatSet {
        Self::residue_class(2, 1)
    }

    pub fn finite(members: &[u64]) -> NatSet {
        let top = members.iter().map(|&i| i + 1).max().unwrap_or(0);
        assert!(top <= MAX_PREFIX);
        let mut prefix = bitvec![0; top as usize];
        for &i in members {
            prefix.set(i as usize, true);
        }
        Self::from_parts(prefix, bitvec![0])
    }

    pub fn threshold(&self) -> u64 {
        self.prefix.len() as u64
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn residues(&self) -> Vec<u64> {
        self.residues.iter_ones().map(|r| r as u64).collect()
    }

    pub fn has_residue(&self, r: u64) -> bool {
        self.residues[(r % self.modulus) as usize]
    }

    fn rule(&self, n: u64) -> bool {
        self.residues[(n % self.modulus) as usize]
    }

    /// Indices below the threshold whose membership differs from the tail
    /// rule, with their actual membership.
    pub fn exceptions(&self) -> Vec<(u64, bool)> {
        self.prefix
            .iter()
            .by_vals()
            .enumerate()
            .filter(|&(n, b)| b != self.rule(n as u64))
            .map(|(n, b)| (n as u64, b))
            .collect()
    }

    pub fn member(&self, n: u64) -> bool {
        if n < self.threshold() {
            self.prefix[n as usize]
        } else {
            self.rule(n)
        }
    }

    pub fn complement(&self) -> NatSet {
        NatSet {
            modulus: self.modulus,
            residues: !self.residues.clone(),
            prefix: !self.prefix.clone(),
        }
    }

    fn combine(&self, other: &NatSet, op: impl Fn(bool, bool) -> bool) -> NatSet {
        let m = lcm_u64(self.modulus, other.modulus);
        let t = self.threshold().max(other.threshold());
        let residues: BitVec = (0..m).map(|r| op(self.rule(r), other.rule(r))).collect();
        let prefix: BitVec = (0..t)
            .map(|n| op(self.member(n), other.member(n)))
            .collect();
        Self::canonical(prefix, residues)
    }

    pub fn intersect(&self, other: &NatSet) -> NatSet {
        self.combine(other, |a, b| a && b)
    }

    pub fn union(&self, other: &NatSet) -> NatSet {
        self.complement()
            .intersect(&other.complement())
            .complement()
    }

    pub fn difference(&self, other: &NatSet) -> NatSet {
        self.intersect(&other.complement())
    }

    pub fn is_subset(&self, other: &NatSet) -> bool {
        self.difference(other).is_empty()
    }

    /// Complement is finite.
    pub fn is_cofinite(&self) -> bool {
        self.residues.all()
    }

    /// Least `v` with `{v, v+1, ...} ⊆ self`, if the set is cofinite.
    pub fn frechet_witness(&self) -> Option<u64> {
        // In canonical form the last prefix bit of a cofinite set is a gap.
        self.is_cofinite().then(|| self.threshold())
    }

    pub fn is_finite(&self) -> bool {
        self.residues.not_any()
    }

    pub fn is_empty(&self) -> bool {
        self.is_finite() && self.prefix.not_any()
    }

    /// Largest member of a finite nonempty set.
    pub fn max_member(&self) -> Option<u64> {
        if !self.is_finite() {
            return None;
        }
        self.prefix.last_one().map(|i| i as u64)
    }

    /// `{n : n + k ∈ self}`
    pub fn shift_down(&self, k: u64) -> NatSet {
        let m = self.modulus;
        let residues: BitVec = (0..m).map(|r| self.rule(r + k % m)).collect();
        let prefix: BitVec = if k < self.threshold() {
            self.prefix[k as usize..].to_bitvec()
        } else {
            BitVec::new()
        };
        Self::canonical(prefix, residues)
    }

    pub fn members_below(&self, bound: u64) -> impl Iterator<Item = u64> + '_ {
        (0..bound).filter(move |&n| self.member(n))
    }
}

impl fmt::Display for NatSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let res: Vec<String> = self.residues().iter().map(u64::to_string).collect();
        write!(
            f,
            "{{T={}; mod={}; res={}; exc=",
            self.threshold(),
            self.modulus,
            res.join(",")
        )?;
        let mut items = Vec::new();
        let mut start = 0usize;
        let t = self.prefix.len();
        while start < t {
            let flag = self.prefix[start];
            let mut end = start;
            while end < t && self.prefix[end] == flag {
                end += 1;
            }
            let differing: Vec<usize> = (start..end)
                .filter(|&n| flag != self.rule(n as u64))
                .collect();
            let sign = if flag { '+' } else { '-' };
            if differing.len() >= 2 {
                let (a, b) = (differing[0], differing[differing.len() - 1] + 1);
                items.push(format!("{sign}{a}..{b}"));
            } else if let Some(&n) = differing.first() {
                items.push(format!("{sign}{n}"));
            }
            start = end;
        }
        write!(f, "{}}}", items.join(","))
    }
}

impl fmt::Debug for NatSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_u64(s: &str, what: &str) -> Result<u64> {
    s.trim()
        .parse()
        .map_err(|_| Error::InvalidSet(format!("bad {what} `{}`", s.trim())))
}

fn parse_list(s: &str, what: &str) -> Result<Vec<u64>> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| parse_u64(p, what))
        .collect()
}

impl FromStr for NatSet {
    type Err = Error;

    fn from_str(text: &str) -> Result<NatSet> {
        let text = text.trim();
        let call = |name: &str| -> Option<&str> {
            text.strip_prefix(name)?
                .trim_start()
                .strip_prefix('(')?
                .strip_suffix(')')
        };
        match text {
            "N" => return Ok(NatSet::all()),
            "empty" => return Ok(NatSet::empty()),
            "evens" => return Ok(NatSet::evens()),
            "odds" => return Ok(NatSet::odds()),
            _ => {}
        }
        if let Some(arg) = call("tail") {
            let v = parse_u64(arg, "tail start")?;
            if v > MAX_PREFIX {
                return Err(Error::TooLarge(format!("tail({v})")));
            }
            return Ok(NatSet::tail(v));
        }
        if let Some(arg) = call("mod") {
            let parts = parse_list(arg, "mod argument")?;
            let [m, r] = parts[..] else {
                return Err(Error::InvalidSet("mod(m,r) takes two arguments".into()));
            };
            return NatSet::normalize(0, m, &[r], &[]);
        }
        if let Some(arg) = call("finite") {
            let members = parse_list(arg, "member")?;
            let ex: Vec<(u64, bool)> = members.into_iter().map(|i| (i, true)).collect();
            return NatSet::normalize(0, 1, &[], &ex);
        }
        let body = text
            .strip_prefix('{')
            .and_then(|b| b.strip_suffix('}'))
            .ok_or_else(|| Error::InvalidSet(format!("unrecognized set `{text}`")))?;
        let (mut t, mut m, mut res, mut exc) = (0u64, None, None, Vec::new());
        for field in body.split(';').map(str::trim).filter(|f| !f.is_empty()) {
            let (key, value) = field
                .split_once('=')
                .ok_or_else(|| Error::InvalidSet(format!("field `{field}` lacks `=`")))?;
            match key.trim() {
                "T" => t = parse_u64(value, "threshold")?,
                "mod" => m = Some(parse_u64(value, "modulus")?),
                "res" => res = Some(parse_list(value, "residue")?),
                "exc" => {
                    for item in value.split(',').map(str::trim).filter(|i| !i.is_empty()) {
                        let (flag, rest) = match item.as_bytes()[0] {
                            b'+' => (true, &item[1..]),
                            b'-' => (false, &item[1..]),
                            _ => {
                                return Err(Error::InvalidSet(format!(
                                    "exception `{item}` needs a + or - sign"
                                )))
                            }
                        };
                        match rest.split_once("..") {
                            Some((a, b)) => {
                                let (a, b) = (parse_u64(a, "index")?, parse_u64(b, "index")?);
                                if b > MAX_PREFIX {
                                    return Err(Error::TooLarge(format!("exception run to {b}")));
                                }
                                exc.extend((a..b).map(|i| (i, flag)));
                            }
                            None => exc.push((parse_u64(rest, "index")?, flag)),
                        }
                    }
                }
                other => return Err(Error::InvalidSet(format!("unknown field `{other}`"))),
            }
        }
        let m = m.ok_or_else(|| Error::InvalidSet("missing `mod`".into()))?;
        let res = res.ok_or_else(|| Error::InvalidSet("missing `res`".into()))?;
        NatSet::normalize(t, m, &res, &exc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(s: &str) -> NatSet {
        s.parse().unwrap()
    }

    #[test]
    fn normalize_collapses_period_and_threshold() {
        let n = NatSet::normalize(0, 2, &[0, 1], &[]).unwrap();
        assert_eq!((n.threshold(), n.modulus(), n.residues()), (0, 1, vec![0]));
        let e = NatSet::normalize(0, 4, &[0, 2], &[]).unwrap();
        assert_eq!((e.threshold(), e.modulus(), e.residues()), (0, 2, vec![0]));
        assert_eq!(e, NatSet::evens());
    }

    #[test]
    fn normalize_with_exceptions_matches_pointwise_oracle() {
        let raw: Vec<(u64, bool)> = (0..5).map(|i| (i, true)).collect();
        let s = NatSet::normalize(5, 2, &[0], &raw).unwrap();
        // raw description: 0..=4 members, then evens
        let oracle = |n: u64| n < 5 || n % 2 == 0;
        for n in 0..(4 + 2 * 2) {
            assert_eq!(s.member(n), oracle(n), "n={n}");
        }
        assert_eq!(s.threshold(), 4);
        assert_eq!(s.exceptions(), vec![(1, true), (3, true)]);
    }

    #[test]
    fn complement_examples() {
        assert_eq!(NatSet::evens().complement(), NatSet::odds());
        assert_eq!(NatSet::all().complement(), NatSet::empty());
        assert_eq!(
            NatSet::tail(7).complement(),
            NatSet::finite(&[0, 1, 2, 3, 4, 5, 6])
        );
        let a = set("{T=5; mod=3; res=1; exc=+0,-4}");
        assert_eq!(a.complement().complement(), a);
    }

    #[test]
    fn intersect_examples() {
        assert_eq!(NatSet::evens().intersect(&NatSet::odds()), NatSet::empty());
        assert_eq!(NatSet::tail(3).intersect(&NatSet::tail(9)), NatSet::tail(9));
        let six = NatSet::residue_class(2, 0).intersect(&NatSet::residue_class(3, 0));
        for n in 0..12 {
            assert_eq!(six.member(n), n % 6 == 0);
        }
        assert_eq!(six, NatSet::residue_class(6, 0));
        assert_eq!(NatSet::evens().union(&NatSet::odds()), NatSet::all());
    }

    #[test]
    fn cofiniteness_and_witness() {
        for v in [0, 1, 17, 500] {
            assert!(NatSet::tail(v).is_cofinite());
            assert_eq!(NatSet::tail(v).frechet_witness(), Some(v));
        }
        assert!(!NatSet::evens().is_cofinite());
        assert_eq!(NatSet::evens().frechet_witness(), None);
        let holes = NatSet::all().difference(&NatSet::finite(&[4, 10]));
        assert!(holes.is_cofinite());
        let scan = (0..100u64).rev().find(|&n| !holes.member(n)).unwrap() + 1;
        assert_eq!(holes.frechet_witness(), Some(scan));
        assert_eq!(scan, 11);
    }

    #[test]
    fn finiteness_and_emptiness() {
        let f = NatSet::finite(&[0, 1, 2, 3, 4, 5, 6]);
        assert!(f.is_finite() && !f.is_empty());
        assert!(NatSet::empty().is_empty());
        assert!(NatSet::evens().member(6));
        assert!(!NatSet::evens().member(7));
        assert_eq!(f.max_member(), Some(6));
    }

    #[test]
    fn text_form_round_trips() {
        let s = set("{T=5; mod=2; res=0; exc=+1,-3}");
        assert_eq!(s.to_string(), "{T=2; mod=2; res=0; exc=+1}");
        assert_eq!(set(&s.to_string()), s);
        assert_eq!(
            NatSet::tail(101).to_string(),
            "{T=101; mod=1; res=0; exc=-0..101}"
        );
        assert_eq!(set("tail(101)"), set("{mod=1; res=0; exc=-0..101}"));
        assert_eq!(set("mod(3, 2)"), NatSet::residue_class(3, 2));
        assert!("{mod=2; res=2}".parse::<NatSet>().is_err());
        assert!("{res=0}".parse::<NatSet>().is_err());
        assert!("{mod=2; res=0; exc=4}".parse::<NatSet>().is_err());
    }

    #[test]
    fn shift_down_drops_leading_indices() {
        let t = NatSet::tail(101).shift_down(1);
        assert_eq!(t, NatSet::tail(100));
        let o = NatSet::odds().shift_down(1);
        assert_eq!(o, NatSet::evens());
    }

    #[test]
    fn equality_is_decidable_by_bounded_scan() {
        let a = NatSet::normalize(3, 4, &[0, 2], &[(1, true)]).unwrap();
        let b = NatSet::normalize(0, 2, &[0], &[(1, true)]).unwrap();
        let bound = a.threshold().max(b.threshold()) + lcm_u64(a.modulus(), b.modulus());
        let agree = (0..bound).all(|n| a.member(n) == b.member(n));
        assert_eq!(agree, a == b);
        assert!(agree);
    }
}
