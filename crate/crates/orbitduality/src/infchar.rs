//! Infinitesimal characters of birationally rigid covers and of Lusztig–Achar data.

use std::cmp::Reverse;
use std::fmt;

use num_rational::Ratio;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::group::c_zero;
use crate::orbit::Orbit;
use crate::partition::{Kind, Partition};
use crate::sommers::{sat_inverse, LADatum};

/// A vector of half-integers, stored as twice its coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeightVector {
    pub kind: Kind,
    pub doubled: Vec<i64>,
}

impl WeightVector {
    pub fn from_doubled(kind: Kind, doubled: Vec<i64>) -> WeightVector {
        WeightVector { kind, doubled }
    }

    pub fn len(&self) -> usize {
        self.doubled.len()
    }

    pub fn is_empty(&self) -> bool {
        self.doubled.is_empty()
    }

    pub fn coord(&self, i: usize) -> Ratio<i64> {
        Ratio::new(self.doubled[i], 2)
    }

    /// Σ γᵢ² as an exact rational.
    pub fn norm_sq(&self) -> Ratio<i64> {
        Ratio::new(self.doubled_norm_sq(), 4)
    }

    /// Σ (2γᵢ)².
    pub fn doubled_norm_sq(&self) -> i64 {
        self.doubled.iter().map(|d| d * d).sum()
    }

    /// Sign of the product of the coordinates, taken as +1 when a coordinate vanishes.
    pub fn sign(&self) -> i8 {
        if self.doubled.contains(&0) {
            return 1;
        }
        if self.doubled.iter().filter(|&&d| d < 0).count() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Representative of the W-orbit: absolute values in decreasing order. For type D an odd
    /// number of negative signs is recorded by negating the last coordinate.
    pub fn canonical(&self) -> WeightVector {
        let mut v: Vec<i64> = self.doubled.iter().map(|d| d.abs()).collect();
        v.sort_unstable_by_key(|&d| Reverse(d));
        if self.kind == Kind::D && self.sign() < 0 {
            if let Some(last) = v.last_mut() {
                *last = -*last;
            }
        }
        WeightVector { kind: self.kind, doubled: v }
    }

    /// Coordinates in the form `(5/2,3/2,1/2)`.
    pub fn coord_strings(&self) -> Vec<String> {
        self.doubled.iter().map(|&d| half_to_string(d)).collect()
    }

    /// Parses `(5/2,3/2,1/2,1/2)`.
    pub fn parse(kind: Kind, s: &str) -> Result<WeightVector> {
        let t = s.trim();
        let inner = t
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("expected (..) around {t:?}")))?;
        let mut doubled = Vec::new();
        for tok in inner.split(',').map(str::trim).filter(|x| !x.is_empty()) {
            let r: Ratio<i64> = tok.parse().map_err(|_| Error::Parse(format!("bad coordinate {tok:?}")))?;
            let d = r * 2;
            if !d.is_integer() {
                return Err(Error::Parse(format!("{tok} is not a half-integer")));
            }
            doubled.push(d.to_integer());
        }
        Ok(WeightVector { kind, doubled })
    }
}

fn half_to_string(d: i64) -> String {
    if d % 2 == 0 {
        format!("{}", d / 2)
    } else {
        format!("{d}/2")
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.coord_strings().join(","))
    }
}

impl Serialize for WeightVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coord_strings().serialize(s)
    }
}

/// W-equivalence of two weights of the same kind and length.
pub fn w_equivalent(u: &WeightVector, v: &WeightVector) -> Result<bool> {
    if u.kind != v.kind || u.len() != v.len() {
        return Err(Error::Precondition(format!("weights of equal kind and length, got {u} and {v}")));
    }
    Ok(u.canonical() == v.canonical())
}

/// Positive members of ((qᵢ−1)/2, (qᵢ−3)/2, …) over all parts, doubled, unsorted.
fn rho_plus_entries(q: &Partition) -> Vec<i64> {
    let mut out = Vec::new();
    for &x in q.parts() {
        let mut d = x as i64 - 1;
        while d > 0 {
            out.push(d);
            d -= 2;
        }
    }
    out
}

/// ρ⁺(q), zero-padded to `target_len` (default ⌊|q|/2⌋) and sorted in decreasing order.
pub fn rho_plus(kind: Kind, q: &Partition, target_len: Option<usize>) -> Result<WeightVector> {
    let mut v = rho_plus_entries(q);
    let n = target_len.unwrap_or(q.size() / 2);
    if v.len() > n {
        return Err(Error::Precondition(format!("target length at least {} for ρ⁺({q})", v.len())));
    }
    v.resize(n, 0);
    v.sort_unstable_by_key(|&d| Reverse(d));
    Ok(WeightVector { kind, doubled: v })
}

/// The ρ string of gl(a) as absolute values, doubled.
pub fn gl_rho_abs(a: usize) -> Vec<i64> {
    (0..a).map(|j| (a as i64 - 1 - 2 * j as i64).abs()).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FMap {
    F0,
    F1,
}

/// f₀ and f₁. Pairs (qᵢ, qᵢ₊₁) with i odd (f₀) or even (f₁) and qᵢ ≥ qᵢ₊₁ + 2 all become
/// (qᵢ − 1, qᵢ₊₁ + 1) at once; f₁ then adds a box to the first row.
pub fn f_map(q: &Partition, which: FMap) -> Partition {
    if which == FMap::F1 && q.is_empty() {
        return Partition::from_unsorted([1]);
    }
    let mut v: Vec<usize> = q.parts().to_vec();
    v.push(0);
    let start = if which == FMap::F0 { 0 } else { 1 };
    let mut i = start;
    while i + 1 < v.len() {
        if v[i] >= v[i + 1] + 2 {
            v[i] -= 1;
            v[i + 1] += 1;
        }
        i += 2;
    }
    if which == FMap::F1 {
        v[0] += 1;
    }
    Partition::from_unsorted(v.into_iter().filter(|&x| x > 0))
}

/// f_ε for the kind of the ambient group.
pub fn f_eps(kind: Kind, q: &Partition) -> Partition {
    if kind.epsilon() == 1 {
        f_map(q, FMap::F1)
    } else {
        f_map(q, FMap::F0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct XYG {
    pub x: Partition,
    pub y: Partition,
    pub g_of_y: Partition,
}

/// x = parts of multiplicity one, y = parts of multiplicity two, g(y) replaces each [yᵢ, yᵢ]
/// with [yᵢ + 1, yᵢ − 1].
pub fn xy_g(q: &Partition) -> Result<XYG> {
    let mut x = Vec::new();
    let mut y = Vec::new();
    let mut g = Vec::new();
    for (part, mult) in q.multiplicities() {
        match mult {
            1 => x.push(part),
            2 => {
                y.extend([part, part]);
                g.extend([part + 1, part - 1]);
            }
            _ => return Err(Error::MultiplicityTooLarge { part, mult }),
        }
    }
    Ok(XYG {
        x: Partition::from_unsorted(x),
        y: Partition::from_unsorted(y),
        g_of_y: Partition::from_unsorted(g.into_iter().filter(|&p| p > 0)),
    })
}

/// γ of the birationally rigid cover of O: ρ⁺(g(y) ∪ f_ε(x)) with x, y taken from the columns
/// of O, padded to the rank.
pub fn gamma_rigid_cover(o: &Orbit) -> Result<WeightVector> {
    let xyg = xy_g(&o.partition.transpose())?;
    let q = xyg.g_of_y.union(&f_eps(o.kind, &xyg.x));
    rho_plus(o.kind, &q, Some(o.rank()))
}

/// γ of a Lusztig–Achar datum: ρ⁺(ν₀↑ ∪ η₀) on the distinguished core together with the ρ
/// strings of the gl factors, in canonical form. The kind of the result is the kind of the datum.
pub fn gamma_la(d: &LADatum) -> Result<WeightVector> {
    let s = sat_inverse(d)?;
    let core = &s.core;
    let c = c_zero(&core.marked)?;
    let q = c.nu0.uparrow()?.union(&c.eta0);
    let mut v = rho_plus(d.kind(), &q, Some(core.kind().rank(core.size())))?.doubled;
    for &a in &s.gl_sizes {
        v.extend(gl_rho_abs(a));
    }
    Ok(WeightVector { kind: d.kind(), doubled: v }.canonical())
}

/// γ for the trivial class on the unmarked datum: half the semisimple element of the
/// Jacobson–Morozov triple, i.e. ρ⁺(λ).
pub fn half_h(kind: Kind, lam: &Partition) -> Result<WeightVector> {
    rho_plus(kind, lam, Some(kind.rank(lam.size())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn rho_plus_examples() {
        assert_eq!(rho_plus(Kind::B, &p("[3,2]"), Some(2)).unwrap().to_string(), "(1,1/2)");
        assert_eq!(rho_plus(Kind::C, &p("[6,2,1]"), Some(4)).unwrap().to_string(), "(5/2,3/2,1/2,1/2)");
        assert_eq!(rho_plus(Kind::B, &p("[1,1,1]"), Some(1)).unwrap().to_string(), "(0)");
        assert!(rho_plus(Kind::B, &p("[6]"), Some(2)).is_err());
    }

    #[test]
    fn f_map_examples() {
        assert_eq!(f_map(&p("[5,3]"), FMap::F1), p("[6,2,1]"));
        assert_eq!(f_map(&p("[]"), FMap::F1), p("[1]"));
        assert_eq!(f_map(&p("[3,2]"), FMap::F0), p("[3,2]"));
        assert_eq!(f_map(&p("[5]"), FMap::F0), p("[4,1]"));
    }

    #[test]
    fn xyg_examples() {
        let r = xy_g(&p("[5,3]")).unwrap();
        assert_eq!((r.x, r.y, r.g_of_y), (p("[5,3]"), p("[]"), p("[]")));
        let r = xy_g(&p("[3,3,1,1]")).unwrap();
        assert_eq!((r.x, r.y, r.g_of_y), (p("[]"), p("[3,3,1,1]"), p("[4,2,2]")));
        let r = xy_g(&p("[4,2,2]")).unwrap();
        assert_eq!((r.x, r.y, r.g_of_y), (p("[4]"), p("[2,2]"), p("[3,1]")));
        assert!(matches!(xy_g(&p("[1,1,1]")), Err(Error::MultiplicityTooLarge { part: 1, mult: 3 })));
    }

    #[test]
    fn gamma_rigid_examples() {
        let g = gamma_rigid_cover(&"B:[2,2,1]".parse().unwrap()).unwrap();
        assert_eq!(g.to_string(), "(1,1/2)");
        let g = gamma_rigid_cover(&"C:[2,2,2,1,1]".parse().unwrap()).unwrap();
        assert_eq!(g.to_string(), "(5/2,3/2,1/2,1/2)");
        for n in 1..=6 {
            let zero: Orbit = Orbit::new(Kind::C, Partition::from_unsorted(vec![1; 2 * n]), None).unwrap();
            let expect: Vec<i64> = (1..=n as i64).rev().map(|x| 2 * x).collect();
            assert_eq!(gamma_rigid_cover(&zero).unwrap().doubled, expect);
        }
    }

    #[test]
    fn gamma_la_examples() {
        let g = gamma_la(&"B:<[5,1]>[5,3,1]".parse().unwrap()).unwrap();
        assert_eq!(g.to_string(), "(5/2,3/2,1/2,1/2)");
        let g = gamma_la(&"B:<[5,1]>[5,4,4,3,1]".parse().unwrap()).unwrap();
        assert_eq!(g.to_string(), "(5/2,3/2,3/2,3/2,1/2,1/2,1/2,1/2)");
        let g = gamma_la(&"C:<[2]>[2,2]".parse().unwrap()).unwrap();
        assert_eq!(g.to_string(), "(1,1/2)");
    }

    #[test]
    fn canonical_examples() {
        let v = WeightVector::parse(Kind::B, "(-1/2,3/2)").unwrap();
        assert_eq!(v.canonical().to_string(), "(3/2,1/2)");
        let a = WeightVector::parse(Kind::D, "(1,-1)").unwrap();
        let b = WeightVector::parse(Kind::D, "(1,1)").unwrap();
        assert!(!w_equivalent(&a, &b).unwrap());
        let a = WeightVector::parse(Kind::D, "(1,0,-1)").unwrap();
        let b = WeightVector::parse(Kind::D, "(1,1,0)").unwrap();
        assert!(w_equivalent(&a, &b).unwrap());
        assert_eq!(a.norm_sq(), Ratio::from_integer(2));
        assert!(w_equivalent(&a, &WeightVector::parse(Kind::D, "(1,1)").unwrap()).is_err());
    }

    #[test]
    fn uparrow_increases_norm_on_two_rows() {
        for q1 in 1..=12usize {
            for q2 in 1..=q1 {
                let q = Partition::from_unsorted([q1, q2]);
                let up = q.uparrow2().unwrap();
                let a = rho_plus(Kind::A, &q, None).unwrap().norm_sq();
                let b = rho_plus(Kind::A, &up, None).unwrap().norm_sq();
                assert!(a < b, "{q}");
            }
        }
    }

    #[test]
    fn gamma_la_matches_rigid_cover_of_dual() {
        use crate::sommers::{la_data, sommers_dual, Route};
        for (kind, sizes) in [(Kind::B, (1..=11).step_by(2)), (Kind::C, (2..=10).step_by(2)), (Kind::D, (2..=10).step_by(2))] {
            for n in sizes {
                for d in la_data(kind, n).into_iter().filter(|d| d.is_special() && d.is_distinguished()) {
                    let a = gamma_la(&d).unwrap();
                    let o = sommers_dual(&d, Route::General).unwrap().orbit;
                    let b = gamma_rigid_cover(&o).unwrap().canonical();
                    assert_eq!(a.doubled, b.doubled, "{d} -> {o}");
                }
            }
        }
    }

    proptest! {
        #[test]
        fn rho_plus_splits_over_parity(even in prop::collection::vec(1usize..6, 0..4), odd in prop::collection::vec(0usize..6, 0..4)) {
            let pe = Partition::from_unsorted(even.iter().map(|x| 2 * x));
            let po = Partition::from_unsorted(odd.iter().map(|x| 2 * x + 1));
            let whole = rho_plus(Kind::A, &pe.union(&po), None).unwrap();
            let mut parts = rho_plus_entries(&pe);
            parts.extend(rho_plus_entries(&po));
            parts.resize(whole.len(), 0);
            parts.sort_unstable_by_key(|&d| Reverse(d));
            prop_assert_eq!(whole.doubled, parts);
        }

        #[test]
        fn canonical_is_w_invariant(v in prop::collection::vec(-7i64..8, 1..6), perm_seed in any::<u64>(), flips in any::<u32>()) {
            let w = WeightVector::from_doubled(Kind::B, v.clone());
            let mut u = v.clone();
            let n = u.len();
            for i in 0..n {
                let j = (perm_seed as usize).wrapping_add(i * 7) % n;
                u.swap(i, j);
            }
            for (i, x) in u.iter_mut().enumerate() {
                if flips >> i & 1 == 1 { *x = -*x; }
            }
            prop_assert_eq!(w.canonical(), WeightVector::from_doubled(Kind::B, u.clone()).canonical());
            let even_flips: Vec<i64> = v.iter().enumerate().map(|(i, &x)| if i < 2 && n >= 2 { -x } else { x }).collect();
            let wd = WeightVector::from_doubled(Kind::D, v.clone());
            prop_assert!(w_equivalent(&wd, &WeightVector::from_doubled(Kind::D, even_flips)).unwrap());
        }
    }
}
