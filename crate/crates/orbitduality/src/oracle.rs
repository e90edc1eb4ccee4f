//! Brute-force certificates for the minimal W-orbit in S(O∨, C̄).

use std::collections::BTreeSet;

use serde::Serialize;

use crate::cover::{factor_kinds, MSLift};
use crate::error::{Error, Result};
use crate::group::lifts_of;
use crate::infchar::{gamma_la, WeightVector};
use crate::orbit::Orbit;
use crate::partition::{Kind, Partition};
use crate::sommers::LADatum;

/// The Richardson orbit of the Levi cut out by a weight on one classical factor: each distinct
/// nonzero absolute value of multiplicity q gives a column pair (q, q), the zero coordinates give
/// one column of length 2t (plus one for type B), and the result is collapsed.
pub fn richardson_zero(kind: Kind, size: usize, doubled: &[i64]) -> Result<Orbit> {
    if let Some(&first) = doubled.first() {
        if doubled.iter().any(|d| (d - first).rem_euclid(2) != 0) {
            return Err(Error::Precondition("all coordinates in one coset of Z".into()));
        }
    }
    let delta = usize::from(kind == Kind::B);
    if doubled.len() != kind.rank(size) || !kind.size_ok(size) {
        return Err(Error::Precondition(format!("{} coordinates for {}", doubled.len(), kind.algebra(size))));
    }
    let mut abs: Vec<i64> = doubled.iter().map(|d| d.abs()).collect();
    abs.sort_unstable();
    let zeros = abs.iter().take_while(|&&d| d == 0).count();
    let mut columns = vec![2 * zeros + delta];
    let mut i = zeros;
    while i < abs.len() {
        let j = abs[i..].iter().take_while(|&&d| d == abs[i]).count();
        columns.extend([j, j]);
        i += j;
    }
    let p = Partition::from_columns(columns.into_iter().filter(|&c| c > 0));
    Orbit::undecorated(kind, p.collapse(kind)?)
}

/// Splits doubled coordinates into half-integers and integers.
fn split_cosets(doubled: &[i64]) -> (Vec<i64>, Vec<i64>) {
    doubled.iter().partition(|d| d.rem_euclid(2) == 1)
}

/// Coordinates routed to the ν-side and η-side factors: half-integers go to ν for B and D,
/// integers go to ν for C.
fn route_coords(kind: Kind, doubled: &[i64]) -> (Vec<i64>, Vec<i64>) {
    let (halves, ints) = split_cosets(doubled);
    match kind {
        Kind::C => (ints, halves),
        _ => (halves, ints),
    }
}

/// Whether the marking ν′ of λ is realised by the weight, with factors of sizes |ν′| and |η′|.
fn matches_lift(kind: Kind, nu: &Partition, eta: &Partition, doubled: &[i64]) -> bool {
    let (k1, k2) = factor_kinds(kind);
    let (c1, c2) = route_coords(kind, doubled);
    if c1.len() != k1.rank(nu.size()) || c2.len() != k2.rank(eta.size()) {
        return false;
    }
    let r1 = richardson_zero(k1, nu.size(), &c1);
    let r2 = richardson_zero(k2, eta.size(), &c2);
    matches!((r1, r2), (Ok(a), Ok(b)) if a.partition == *nu && b.partition == *eta)
}

/// Membership of γ in S(O∨, C̄) for a distinguished datum, as a union over the lifts of C̄.
pub fn in_s(gamma: &WeightVector, d: &LADatum) -> Result<bool> {
    if !d.is_distinguished() {
        return Err(Error::NotDistinguished);
    }
    let lifts: Vec<(Partition, Partition)> =
        lifts_of(&d.marked).into_iter().map(|m| (m.nu.clone(), m.eta())).collect();
    Ok(in_s_lifts(d.kind(), &lifts, &gamma.canonical().doubled))
}

fn in_s_lifts(kind: Kind, lifts: &[(Partition, Partition)], doubled: &[i64]) -> bool {
    lifts.iter().any(|(nu, eta)| matches_lift(kind, nu, eta, doubled))
}

/// All weakly decreasing vectors of nonnegative integers of length `n` with Σ dᵢ² ≤ `bound`.
pub fn dominant_shell(n: usize, bound: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn rec(n: usize, left: i64, cap: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        let mut d = 0;
        while d <= cap && d * d <= left {
            cur.push(d);
            rec(n, left - d * d, d, cur, out);
            cur.pop();
            d += 1;
        }
    }
    let cap = (bound.max(0) as f64).sqrt() as i64 + 1;
    rec(n, bound, cap, &mut cur, &mut out);
    out
}

/// Result of the minimal-orbit search for one datum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub datum: String,
    pub candidate: WeightVector,
    pub shell_size: usize,
    pub members_found: usize,
    pub member: bool,
    pub smaller_members: Vec<WeightVector>,
    pub equal_norm_others: Vec<WeightVector>,
    pub unique_min_orbit: bool,
    pub pass: bool,
}

/// Certifies that ρ⁺(ν₀↑ ∪ η₀) is the unique W-orbit of minimal length in S(O∨, C̄). Every dominant
/// half-integral vector of norm at most that of the candidate is tested.
pub fn verify_min(d: &LADatum) -> Result<Certificate> {
    if !d.is_distinguished() {
        return Err(Error::NotDistinguished);
    }
    if !d.is_special() {
        return Err(Error::Precondition(format!("a special datum, got {d}")));
    }
    let kind = d.kind();
    let candidate = gamma_la(d)?;
    let bound = candidate.doubled_norm_sq();
    let lifts: Vec<(Partition, Partition)> =
        lifts_of(&d.marked).into_iter().map(|m| (m.nu.clone(), m.eta())).collect();
    let shell = dominant_shell(candidate.len(), bound);
    let member = in_s_lifts(kind, &lifts, &candidate.doubled);
    let mut members_found = 0;
    let mut smaller = Vec::new();
    let mut equal_others = Vec::new();
    let mut seen = BTreeSet::new();
    for v in &shell {
        if !in_s_lifts(kind, &lifts, v) {
            continue;
        }
        let w = WeightVector::from_doubled(kind, v.clone());
        let mut orbits = vec![w.clone()];
        if kind == Kind::D && v.iter().all(|&x| x != 0) {
            let mut flipped = v.clone();
            *flipped.last_mut().unwrap() *= -1;
            orbits.push(WeightVector::from_doubled(kind, flipped));
        }
        for o in orbits {
            if !seen.insert(o.canonical()) {
                continue;
            }
            members_found += 1;
            let n = o.doubled_norm_sq();
            if n < bound {
                smaller.push(o);
            } else if n == bound && o.canonical() != candidate.canonical() {
                equal_others.push(o);
            }
        }
    }
    let unique_min_orbit = smaller.is_empty() && equal_others.is_empty();
    Ok(Certificate {
        datum: d.to_string(),
        candidate,
        shell_size: shell.len(),
        members_found,
        member,
        smaller_members: smaller,
        equal_norm_others: equal_others,
        unique_min_orbit,
        pass: member && unique_min_orbit,
    })
}

/// The pair of Richardson orbits read off from γ(O∨, C̄) by coset.
pub fn richardson_pair(d: &LADatum) -> Result<MSLift> {
    let gamma = gamma_la(d)?;
    let kind = d.kind();
    let (k1, k2) = factor_kinds(kind);
    let (c1, c2) = route_coords(kind, &gamma.doubled);
    let n1 = 2 * c1.len();
    let n2 = 2 * c2.len() + usize::from(k2 == Kind::B);
    let r1 = richardson_zero(k1, n1, &c1)?;
    let r2 = richardson_zero(k2, n2, &c2)?;
    Ok(MSLift { factor1: (k1, n1, r1.partition), factor2: (k2, n2, r2.partition) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sommers::la_data;

    fn la(s: &str) -> LADatum {
        s.parse().unwrap()
    }

    #[test]
    fn richardson_examples() {
        let o = richardson_zero(Kind::D, 16, &[5, 3, 3, 3, 1, 1, 1, 1]).unwrap();
        assert_eq!(o.partition.to_string(), "[5,5,3,3]");
        let o = richardson_zero(Kind::C, 2, &[1]).unwrap();
        assert_eq!(o.partition.to_string(), "[2]");
        let o = richardson_zero(Kind::B, 9, &[0, 0, 0, 0]).unwrap();
        assert_eq!(o.partition.to_string(), "[1,1,1,1,1,1,1,1,1]");
        assert!(richardson_zero(Kind::C, 4, &[1, 2]).is_err());
    }

    #[test]
    fn in_s_examples() {
        let d = la("C:<[2]>[2,2]");
        assert!(in_s(&WeightVector::parse(Kind::C, "(1,1/2)").unwrap(), &d).unwrap());
        assert!(!in_s(&WeightVector::parse(Kind::C, "(1/2,1/2)").unwrap(), &d).unwrap());
        assert!(in_s(&WeightVector::parse(Kind::C, "(-1/2,1)").unwrap(), &d).unwrap());
    }

    #[test]
    fn verify_examples() {
        let c = verify_min(&la("C:<[2]>[2,2]")).unwrap();
        assert!(c.pass);
        assert_eq!(c.candidate.to_string(), "(1,1/2)");
        let c = verify_min(&la("B:<[5,1]>[5,3,1]")).unwrap();
        assert!(c.pass, "{c:?}");
        assert_eq!(c.candidate.to_string(), "(5/2,3/2,1/2,1/2)");
        let c = verify_min(&la("B:[5,3,1]")).unwrap();
        assert!(c.pass);
        assert_eq!(c.candidate.doubled, vec![4, 2, 2, 0]);
    }

    #[test]
    fn shell_matches_naive_enumeration() {
        for n in 1..=3usize {
            for bound in 0..=40i64 {
                let fast: BTreeSet<Vec<i64>> = dominant_shell(n, bound).into_iter().collect();
                let m = 7i64;
                let mut naive = BTreeSet::new();
                let total = (2 * m + 1).pow(n as u32);
                for idx in 0..total {
                    let mut v = Vec::new();
                    let mut k = idx;
                    for _ in 0..n {
                        v.push(k % (2 * m + 1) - m);
                        k /= 2 * m + 1;
                    }
                    if v.iter().map(|x| x * x).sum::<i64>() <= bound {
                        naive.insert(WeightVector::from_doubled(Kind::B, v).canonical().doubled);
                    }
                }
                assert_eq!(fast, naive, "n={n} bound={bound}");
            }
        }
    }

    #[test]
    fn minimality_small_ranks() {
        for (kind, sizes) in [(Kind::B, (3..=9).step_by(2)), (Kind::C, (2..=8).step_by(2)), (Kind::D, (4..=8).step_by(2))] {
            for n in sizes {
                for d in la_data(kind, n).into_iter().filter(|d| d.is_special() && d.is_distinguished()) {
                    let c = verify_min(&d).unwrap();
                    assert!(c.pass, "{c:?}");
                }
            }
        }
    }

    #[test]
    fn richardson_pair_matches_ms_lift_on_special_data() {
        for (kind, sizes) in [(Kind::B, (1..=9).step_by(2)), (Kind::C, (2..=8).step_by(2)), (Kind::D, (2..=8).step_by(2))] {
            for n in sizes {
                for d in la_data(kind, n).into_iter().filter(|d| d.is_special()) {
                    let r = richardson_pair(&d).unwrap();
                    let m = crate::cover::ms_lift(&d).unwrap();
                    assert_eq!(r, m, "{d}");
                }
            }
        }
        let d = la("B:<[5,1]>[5,4,4,3,1]");
        let r = richardson_pair(&d).unwrap();
        assert_eq!(r.factor1.2.to_string(), "[5,5,3,3]");
        assert_eq!(crate::cover::ms_lift(&d).unwrap().factor1.2.to_string(), "[5,4,4,3]");
    }
}
