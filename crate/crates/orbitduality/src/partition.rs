//! Partitions and the box-moving operations used throughout the crate.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Classical type of a partition or orbit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Kind {
    A,
    B,
    C,
    D,
}

impl Kind {
    /// 1 for type C, 0 for B and D. Type A has no parity convention and reports 0.
    pub fn epsilon(self) -> usize {
        match self {
            Kind::C => 1,
            _ => 0,
        }
    }

    pub fn letter(self) -> char {
        match self {
            Kind::A => 'A',
            Kind::B => 'B',
            Kind::C => 'C',
            Kind::D => 'D',
        }
    }

    /// Whether a partition of this size may be of this kind.
    pub fn size_ok(self, size: usize) -> bool {
        match self {
            Kind::A => true,
            Kind::B => size % 2 == 1,
            Kind::C | Kind::D => size.is_multiple_of(2),
        }
    }

    /// The Langlands dual kind (B and C swap).
    pub fn dual(self) -> Kind {
        match self {
            Kind::B => Kind::C,
            Kind::C => Kind::B,
            k => k,
        }
    }

    /// Ambient size of the dual group for an ambient size `n` of this kind.
    pub fn dual_size(self, n: usize) -> usize {
        match self {
            Kind::B => n.saturating_sub(1),
            Kind::C => n + 1,
            _ => n,
        }
    }

    /// Rank of the group of this kind acting on a space of dimension `n`.
    pub fn rank(self, n: usize) -> usize {
        match self {
            Kind::A => n.saturating_sub(1),
            _ => n / 2,
        }
    }

    /// Name of the classical Lie algebra, e.g. `so(9)`.
    pub fn algebra(self, n: usize) -> String {
        match self {
            Kind::A => format!("gl({n})"),
            Kind::B | Kind::D => format!("so({n})"),
            Kind::C => format!("sp({n})"),
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

impl FromStr for Kind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "A" | "a" => Ok(Kind::A),
            "B" | "b" => Ok(Kind::B),
            "C" | "c" => Ok(Kind::C),
            "D" | "d" => Ok(Kind::D),
            other => Err(Error::Parse(format!("unknown kind {other:?}"))),
        }
    }
}

/// A partition stored as weakly decreasing positive parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize)]
#[serde(into = "Vec<usize>")]
pub struct Partition(Vec<usize>);

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.0
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(de)?;
        Partition::new(v).map_err(serde::de::Error::custom)
    }
}

impl Partition {
    /// Builds a partition, rejecting zeros and increasing entries.
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) || parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::NotDecreasing(parts.iter().map(|&x| x as i64).collect()));
        }
        Ok(Partition(parts))
    }

    /// Sorts the input and drops zeros.
    pub fn from_unsorted<I: IntoIterator<Item = usize>>(parts: I) -> Self {
        let mut v: Vec<usize> = parts.into_iter().filter(|&x| x > 0).collect();
        v.sort_unstable_by(|a, b| b.cmp(a));
        Partition(v)
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    /// The `i`-th part counted from 1, or 0 past the end.
    pub fn part(&self, i: usize) -> usize {
        i.checked_sub(1).and_then(|j| self.0.get(j)).copied().unwrap_or(0)
    }

    pub fn largest(&self) -> usize {
        self.0.first().copied().unwrap_or(0)
    }

    pub fn smallest(&self) -> usize {
        self.0.last().copied().unwrap_or(0)
    }

    /// m_λ(x).
    pub fn multiplicity(&self, x: usize) -> usize {
        self.0.iter().filter(|&&p| p == x).count()
    }

    /// ht_λ(x) = number of parts ≥ x.
    pub fn height(&self, x: usize) -> usize {
        self.0.iter().filter(|&&p| p >= x).count()
    }

    /// (multiplicity, height) of `x`.
    pub fn stats(&self, x: usize) -> (usize, usize) {
        (self.multiplicity(x), self.height(x))
    }

    /// Distinct part values in decreasing order.
    pub fn distinct(&self) -> Vec<usize> {
        let mut v = self.0.clone();
        v.dedup();
        v
    }

    /// Multiplicities keyed by value.
    pub fn multiplicities(&self) -> BTreeMap<usize, usize> {
        let mut m = BTreeMap::new();
        for &p in &self.0 {
            *m.entry(p).or_insert(0) += 1;
        }
        m
    }

    pub fn contains(&self, x: usize) -> bool {
        self.0.contains(&x)
    }

    pub fn is_multiplicity_free(&self) -> bool {
        self.0.windows(2).all(|w| w[0] != w[1])
    }

    pub fn transpose(&self) -> Partition {
        let n = self.largest();
        Partition((1..=n).map(|i| self.height(i)).collect())
    }

    /// Multiset union λ ∪ μ.
    pub fn union(&self, other: &Partition) -> Partition {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Partition::from_unsorted(v)
    }

    /// Componentwise sum λ ∨ μ.
    pub fn join(&self, other: &Partition) -> Partition {
        let n = self.len().max(other.len());
        Partition((1..=n).map(|i| self.part(i) + other.part(i)).collect())
    }

    /// Multiset difference; fails when `other` is not contained in `self`.
    pub fn remove(&self, other: &Partition) -> Result<Partition> {
        let mut v = self.0.clone();
        for &x in &other.0 {
            match v.iter().position(|&p| p == x) {
                Some(i) => {
                    v.remove(i);
                }
                None => {
                    return Err(Error::Precondition(format!("{other} to be contained in {self}")))
                }
            }
        }
        Ok(Partition(v))
    }

    /// Partition with the given column lengths.
    pub fn from_columns<I: IntoIterator<Item = usize>>(columns: I) -> Partition {
        Partition::from_unsorted(columns).transpose()
    }

    /// Type condition on parts together with the size parity.
    pub fn is_type(&self, kind: Kind) -> bool {
        if !kind.size_ok(self.size()) {
            return false;
        }
        let bad_parity = match kind {
            Kind::A => return true,
            Kind::B | Kind::D => 0,
            Kind::C => 1,
        };
        self.multiplicities()
            .iter()
            .all(|(&x, &m)| x % 2 != bad_parity || m % 2 == 0)
    }

    /// All parts even, each with even multiplicity. The empty partition is not very even.
    pub fn is_very_even(&self) -> bool {
        !self.is_empty() && self.multiplicities().iter().all(|(&x, &m)| x % 2 == 0 && m % 2 == 0)
    }

    /// The `kind`-collapse: the largest partition of type `kind` dominated by `self`.
    pub fn collapse(&self, kind: Kind) -> Result<Partition> {
        if !kind.size_ok(self.size()) {
            return Err(Error::SizeKindMismatch { size: self.size(), kind: kind.letter() });
        }
        let bad_parity = match kind {
            Kind::A => return Ok(self.clone()),
            Kind::B | Kind::D => 0,
            Kind::C => 1,
        };
        let mut v = self.0.clone();
        loop {
            let p = Partition(v.clone());
            let bad = p
                .multiplicities()
                .into_iter()
                .rev()
                .find(|&(x, m)| x % 2 == bad_parity && m % 2 == 1);
            let Some((q, _)) = bad else { break };
            let last = v.iter().rposition(|&x| x == q).expect("part present");
            v[last] -= 1;
            match v.iter().skip(last + 1).position(|&x| x + 1 < q) {
                Some(off) => v[last + 1 + off] += 1,
                None => v.push(1),
            }
            v.retain(|&x| x > 0);
        }
        Ok(Partition(v))
    }

    /// Dominance order; sizes must agree.
    pub fn dominates(&self, other: &Partition) -> Result<bool> {
        if self.size() != other.size() {
            return Err(Error::SizeMismatch(self.size(), other.size()));
        }
        let n = self.len().max(other.len());
        let (mut a, mut b) = (0usize, 0usize);
        for i in 1..=n {
            a += self.part(i);
            b += other.part(i);
            if a < b {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// l(λ): remove one box from the last row.
    pub fn l(&self) -> Result<Partition> {
        if self.is_empty() {
            return Err(Error::Precondition("a nonempty partition for l".into()));
        }
        let mut v = self.0.clone();
        *v.last_mut().unwrap() -= 1;
        Ok(Partition::from_unsorted(v))
    }

    /// e(λ): append a part equal to 1.
    pub fn e(&self) -> Partition {
        let mut v = self.0.clone();
        v.push(1);
        Partition(v)
    }

    /// λ⁺: add one box to the first row.
    pub fn plus(&self) -> Partition {
        let mut v = self.0.clone();
        match v.first_mut() {
            Some(x) => *x += 1,
            None => v.push(1),
        }
        Partition(v)
    }

    /// λ₋ = l(λᵗ)ᵗ.
    pub fn minus(&self) -> Result<Partition> {
        Ok(self.transpose().l()?.transpose())
    }

    /// p⁻¹: subtract 1 from every part.
    pub fn inverse(&self) -> Partition {
        Partition::from_unsorted(self.0.iter().map(|&x| x - 1))
    }

    /// p_{≤k}: the first `k` rows.
    pub fn take(&self, k: usize) -> Partition {
        Partition(self.0.iter().copied().take(k).collect())
    }

    /// p_{>k}: the rows after the first `k`.
    pub fn drop(&self, k: usize) -> Partition {
        Partition(self.0.iter().copied().skip(k).collect())
    }

    /// p↑: each row pair (p_{2i-1}, p_{2i}) becomes (p_{2i-1}+1, p_{2i}-1).
    /// An odd number of rows is padded with a zero row, which must share the parity of the rest.
    pub fn uparrow(&self) -> Result<Partition> {
        let mut v = self.0.clone();
        if v.len() % 2 == 1 {
            v.push(0);
        }
        if let Some(&first) = v.first() {
            if v.iter().any(|&x| x % 2 != first % 2) {
                return Err(Error::UparrowParity(self.to_string()));
            }
        }
        let mut out = Vec::with_capacity(v.len());
        for pair in v.chunks(2) {
            out.push(pair[0] + 1);
            out.push(pair[1].saturating_sub(1));
        }
        Ok(Partition::from_unsorted(out))
    }

    /// Two-row rule [q₁+1, max(q₂-1, 0)].
    pub fn uparrow2(&self) -> Result<Partition> {
        if self.is_empty() || self.len() > 2 {
            return Err(Error::Precondition("one or two rows for uparrow2".into()));
        }
        Ok(Partition::from_unsorted([self.part(1) + 1, self.part(2).saturating_sub(1)]))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]")
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Accepts `[5,3,1]`, `[]`, and exponent shorthand such as `[4^2,2]`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let inner = t
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("expected [..] around {t:?}")))?;
        let mut parts = Vec::new();
        for tok in inner.split(',').map(str::trim).filter(|x| !x.is_empty()) {
            let (base, exp) = match tok.split_once('^') {
                Some((b, e)) => (b.trim(), e.trim()),
                None => (tok, "1"),
            };
            let b: i64 = base.parse().map_err(|_| Error::Parse(format!("bad part {tok:?}")))?;
            let e: usize = exp.parse().map_err(|_| Error::Parse(format!("bad exponent {tok:?}")))?;
            if b <= 0 {
                return Err(Error::NotDecreasing(vec![b]));
            }
            parts.extend(std::iter::repeat_n(b as usize, e));
        }
        Partition::new(parts)
    }
}

/// All partitions of `n`, in reverse lexicographic order.
pub fn partitions(n: usize) -> Vec<Partition> {
    fn rec(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        for p in (1..=max.min(rest)).rev() {
            cur.push(p);
            rec(rest - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// All partitions of `n` of the given kind.
pub fn partitions_of_type(kind: Kind, n: usize) -> Vec<Partition> {
    if !kind.size_ok(n) {
        return Vec::new();
    }
    partitions(n).into_iter().filter(|p| p.is_type(kind)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn transpose_examples() {
        assert_eq!(p("[]").transpose(), p("[]"));
        assert_eq!(p("[4,2,1]").transpose(), p("[3,2,1,1]"));
        assert_eq!(p("[3,1,1]").transpose(), p("[3,1,1]"));
    }

    #[test]
    fn union_and_join() {
        let a = p("[4,4,3,1,1,1]");
        let b = p("[5,1]");
        assert_eq!(a.union(&b), p("[5,4,4,3,1,1,1,1]"));
        assert_eq!(a.join(&b), p("[9,5,3,1,1,1]"));
        assert_eq!(a.union(&Partition::empty()), a);
        assert_eq!(a.join(&Partition::empty()), a);
    }

    #[test]
    fn collapse_examples() {
        assert_eq!(p("[4,4,3]").collapse(Kind::B).unwrap(), p("[4,4,3]"));
        assert_eq!(p("[6,3,2]").collapse(Kind::B).unwrap(), p("[5,3,3]"));
        assert_eq!(p("[3,1]").collapse(Kind::C).unwrap(), p("[2,2]"));
        assert!(matches!(p("[3,1]").collapse(Kind::B), Err(Error::SizeKindMismatch { .. })));
    }

    #[test]
    fn stats_examples() {
        assert_eq!(p("[5,3,1]").stats(3), (1, 2));
        assert_eq!(p("[5,3,1]").stats(4), (0, 1));
        assert_eq!(p("[4,2,2]").stats(2), (2, 3));
    }

    #[test]
    fn unit_transforms() {
        assert_eq!(p("[3,1,1]").l().unwrap(), p("[3,1]"));
        assert_eq!(p("[5,3]").uparrow().unwrap(), p("[6,2]"));
        assert_eq!(p("[2]").uparrow().unwrap(), p("[3]"));
        assert_eq!(p("[2]").uparrow2().unwrap(), p("[3]"));
        assert_eq!(p("[3,2]").plus(), p("[4,2]"));
        assert_eq!(p("[3,2]").e(), p("[3,2,1]"));
        assert_eq!(p("[3,1,1]").minus().unwrap(), p("[2,1,1]"));
        assert_eq!(p("[3,1,1]").inverse(), p("[2]"));
        assert_eq!(p("[5,3,1]").take(2), p("[5,3]"));
        assert_eq!(p("[5,3,1]").drop(2), p("[1]"));
        assert!(matches!(p("[5,2]").uparrow(), Err(Error::UparrowParity(_))));
        assert!(p("[]").l().is_err());
    }

    #[test]
    fn dominance_examples() {
        assert!(p("[6,3,2]").dominates(&p("[5,3,3]")).unwrap());
        assert!(p("[3,3]").dominates(&p("[3,3]")).unwrap());
        assert!(!p("[3,3]").dominates(&p("[4,2]")).unwrap());
        assert!(p("[3,3]").dominates(&p("[4]")).is_err());
    }

    #[test]
    fn type_examples() {
        assert!(p("[3,1,1]").is_type(Kind::B));
        assert!(!p("[3,1]").is_type(Kind::C));
        assert!(p("[4,4,2,2]").is_type(Kind::D));
        assert!(p("[4,4,2,2]").is_very_even());
    }

    #[test]
    fn parse_rejects_increasing() {
        assert!("[1,3]".parse::<Partition>().is_err());
        assert!("[3,0]".parse::<Partition>().is_err());
        assert_eq!(p("[4^2,1^3]"), p("[4,4,1,1,1]"));
        assert_eq!(p("[5,3,1]").to_string(), "[5,3,1]");
    }

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (0..10).map(|n| partitions(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11, 15, 22, 30]);
    }

    fn brute_collapse(lam: &Partition, kind: Kind) -> Partition {
        let cands: Vec<Partition> = partitions_of_type(kind, lam.size())
            .into_iter()
            .filter(|q| lam.dominates(q).unwrap())
            .collect();
        let maxima: Vec<&Partition> = cands
            .iter()
            .filter(|q| cands.iter().all(|r| !r.dominates(q).unwrap() || r == *q))
            .collect();
        assert_eq!(maxima.len(), 1, "collapse of {lam} not unique");
        maxima[0].clone()
    }

    #[test]
    fn collapse_matches_dominance_maximum() {
        for n in 0..=12 {
            for kind in [Kind::B, Kind::C, Kind::D] {
                if !kind.size_ok(n) {
                    continue;
                }
                for lam in partitions(n) {
                    assert_eq!(lam.collapse(kind).unwrap(), brute_collapse(&lam, kind), "{lam} {kind}");
                }
            }
        }
    }

    #[test]
    fn dominance_is_partial_order() {
        for n in 0..=8 {
            let ps = partitions(n);
            for a in &ps {
                assert!(a.dominates(a).unwrap());
                for b in &ps {
                    if a != b && a.dominates(b).unwrap() {
                        assert!(!b.dominates(a).unwrap());
                    }
                    for c in &ps {
                        if a.dominates(b).unwrap() && b.dominates(c).unwrap() {
                            assert!(a.dominates(c).unwrap());
                        }
                    }
                }
            }
        }
    }

    mod props {
        use super::super::*;
        use proptest::prelude::*;

        fn arb_partition(max_size: usize) -> impl Strategy<Value = Partition> {
            (0..=max_size).prop_flat_map(|n| {
                let ps = partitions(n);
                (0..ps.len()).prop_map(move |i| ps[i].clone())
            })
        }

        proptest! {
            #[test]
            fn transpose_is_involutive(lam in arb_partition(12)) {
                prop_assert_eq!(lam.transpose().transpose(), lam);
            }

            #[test]
            fn union_transposes_to_join(a in arb_partition(12), b in arb_partition(12)) {
                prop_assert_eq!(a.union(&b).transpose(), a.transpose().join(&b.transpose()));
            }

            #[test]
            fn collapse_is_idempotent(lam in arb_partition(12)) {
                for kind in [Kind::B, Kind::C, Kind::D] {
                    if kind.size_ok(lam.size()) {
                        let c = lam.collapse(kind).unwrap();
                        prop_assert!(c.is_type(kind));
                        prop_assert_eq!(c.collapse(kind).unwrap(), c.clone());
                        prop_assert!(lam.dominates(&c).unwrap());
                    }
                }
            }

            #[test]
            fn collapse_is_monotone(n in 0usize..=12, i in 0usize..1000, j in 0usize..1000) {
                let ps = partitions(n);
                let (a, b) = (&ps[i % ps.len()], &ps[j % ps.len()]);
                if a.dominates(b).unwrap() {
                    for kind in [Kind::B, Kind::C, Kind::D] {
                        if kind.size_ok(n) {
                            prop_assert!(a.collapse(kind).unwrap().dominates(&b.collapse(kind).unwrap()).unwrap());
                        }
                    }
                }
            }

            #[test]
            fn uparrow_preserves_size(a in 1usize..=12, b in 1usize..=12) {
                let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
                let q = Partition::from_unsorted([hi, lo]);
                prop_assert_eq!(q.uparrow2().unwrap().size(), q.size());
            }
        }
    }
}
