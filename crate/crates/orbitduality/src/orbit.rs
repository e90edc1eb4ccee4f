//! Nilpotent orbits of classical Lie algebras with induction and Barbasch–Vogan–Lusztig–Spaltenstein duality.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::{partitions_of_type, Kind, Partition};

/// Roman-numeral label of a very even type-D orbit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Decoration {
    I,
    II,
}

impl Decoration {
    pub fn flip(self) -> Decoration {
        match self {
            Decoration::I => Decoration::II,
            Decoration::II => Decoration::I,
        }
    }
}

impl fmt::Display for Decoration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Decoration::I => write!(f, "I"),
            Decoration::II => write!(f, "II"),
        }
    }
}

/// A nilpotent orbit in sl(N), so(N) or sp(N), given by its partition of N.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Orbit {
    pub kind: Kind,
    #[serde(rename = "N")]
    pub n: usize,
    pub partition: Partition,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decoration: Option<Decoration>,
}

impl Orbit {
    /// Validates the type condition. Decorations are only accepted on very even type-D partitions.
    pub fn new(kind: Kind, partition: Partition, decoration: Option<Decoration>) -> Result<Orbit> {
        let n = partition.size();
        if !kind.size_ok(n) {
            return Err(Error::SizeKindMismatch { size: n, kind: kind.letter() });
        }
        if !partition.is_type(kind) {
            return Err(Error::WrongType { partition: partition.to_string(), kind: kind.letter() });
        }
        let very_even = kind == Kind::D && partition.is_very_even();
        if decoration.is_some() && !very_even {
            return Err(Error::Precondition(format!(
                "a decoration only on very even type-D partitions, got {kind}:{partition}"
            )));
        }
        Ok(Orbit { kind, n, partition, decoration })
    }

    /// Builds an orbit, leaving a very even type-D partition undecorated.
    pub fn undecorated(kind: Kind, partition: Partition) -> Result<Orbit> {
        Orbit::new(kind, partition, None)
    }

    pub fn rank(&self) -> usize {
        self.kind.rank(self.n)
    }

    pub fn is_very_even(&self) -> bool {
        self.kind == Kind::D && self.partition.is_very_even()
    }

    /// Very even type-D orbit that carries no decoration.
    pub fn missing_decoration(&self) -> bool {
        self.is_very_even() && self.decoration.is_none()
    }

    /// Same orbit up to the type-D decoration.
    pub fn same_partition(&self, other: &Orbit) -> bool {
        self.kind == other.kind && self.n == other.n && self.partition == other.partition
    }
}

impl fmt::Display for Orbit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.kind, self.partition)?;
        if let Some(d) = self.decoration {
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl FromStr for Orbit {
    type Err = Error;

    /// Parses `B:[5,3,1]` or `D:[2,2]I`.
    fn from_str(s: &str) -> Result<Orbit> {
        let (k, rest) = s
            .trim()
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("expected KIND:[..] in {s:?}")))?;
        let kind: Kind = k.parse()?;
        let close = rest.rfind(']').ok_or_else(|| Error::Parse(format!("missing ] in {s:?}")))?;
        let partition: Partition = rest[..=close].parse()?;
        let decoration = match rest[close + 1..].trim() {
            "" => None,
            "I" => Some(Decoration::I),
            "II" => Some(Decoration::II),
            other => return Err(Error::Parse(format!("bad decoration {other:?}"))),
        };
        Orbit::new(kind, partition, decoration)
    }
}

/// All orbits of the given kind on an N-dimensional space. Very even classes appear twice.
pub fn enumerate_orbits(kind: Kind, n: usize) -> Result<Vec<Orbit>> {
    if !kind.size_ok(n) {
        return Err(Error::SizeKindMismatch { size: n, kind: kind.letter() });
    }
    let mut out = Vec::new();
    for p in partitions_of_type(kind, n) {
        if kind == Kind::D && p.is_very_even() {
            out.push(Orbit::new(kind, p.clone(), Some(Decoration::I))?);
            out.push(Orbit::new(kind, p, Some(Decoration::II))?);
        } else {
            out.push(Orbit::new(kind, p, None)?);
        }
    }
    Ok(out)
}

/// Levi subalgebra gl(a₁) × … × gl(a_t) × g(m), or the primed type-D variant with m = 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LeviShape {
    pub kind: Kind,
    pub gl_sizes: Vec<usize>,
    pub residual: usize,
    #[serde(default)]
    pub primed: bool,
}

impl LeviShape {
    pub fn new(kind: Kind, gl_sizes: Vec<usize>, residual: usize, primed: bool) -> Result<LeviShape> {
        if matches!(kind, Kind::A) {
            return Err(Error::UnsupportedKind('A'));
        }
        if gl_sizes.contains(&0) {
            return Err(Error::Precondition("positive gl sizes".into()));
        }
        if !kind.size_ok(residual) {
            return Err(Error::SizeKindMismatch { size: residual, kind: kind.letter() });
        }
        if primed && !(kind == Kind::D && residual == 0 && gl_sizes.iter().all(|a| a % 2 == 0)) {
            return Err(Error::Precondition(
                "a primed Levi to be of type D with no residual factor and even gl sizes".into(),
            ));
        }
        Ok(LeviShape { kind, gl_sizes, residual, primed })
    }

    /// Ambient dimension 2Σaᵢ + m.
    pub fn ambient(&self) -> usize {
        2 * self.gl_sizes.iter().sum::<usize>() + self.residual
    }
}

impl fmt::Display for LeviShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut items: Vec<String> = self.gl_sizes.iter().map(|a| format!("gl({a})")).collect();
        if self.residual > 0 || items.is_empty() {
            items.push(self.kind.algebra(self.residual));
        }
        write!(f, "{}", items.join("+"))?;
        if self.primed {
            write!(f, "'")?;
        }
        Ok(())
    }
}

impl LeviShape {
    /// Parses `gl(4)+gl(1)+so(9)`, `gl(2)+sp(4)` or `gl(2)+gl(2)'`. The residual factor decides
    /// between B and D; a Levi with no residual factor needs `default_kind`.
    pub fn parse(s: &str, default_kind: Option<Kind>) -> Result<LeviShape> {
        let t = s.trim();
        let (body, primed) = match t.strip_suffix('\'') {
            Some(b) => (b, true),
            None => (t, false),
        };
        let mut gl = Vec::new();
        let mut residual: Option<(Kind, usize)> = None;
        for item in body.split('+').map(str::trim) {
            let (name, arg) = item
                .strip_suffix(')')
                .and_then(|x| x.split_once('('))
                .ok_or_else(|| Error::Parse(format!("bad Levi factor {item:?}")))?;
            let size: usize =
                arg.trim().parse().map_err(|_| Error::Parse(format!("bad size in {item:?}")))?;
            match name.trim() {
                "gl" => gl.push(size),
                "so" | "sp" if residual.is_some() => {
                    return Err(Error::Parse("more than one classical factor".into()))
                }
                "so" => residual = Some((if size % 2 == 1 { Kind::B } else { Kind::D }, size)),
                "sp" => residual = Some((Kind::C, size)),
                other => return Err(Error::Parse(format!("unknown factor {other:?}"))),
            }
        }
        let (kind, m) = match (residual, default_kind) {
            (Some((k, m)), Some(dk)) if m == 0 || k == dk || (dk == Kind::B) == (k == Kind::B) => {
                (dk, m)
            }
            (Some((k, m)), None) => (k, m),
            (Some((k, _)), Some(dk)) => {
                return Err(Error::Parse(format!("residual factor of kind {k} in a {dk} Levi")))
            }
            (None, Some(dk)) => (dk, 0),
            (None, None) => return Err(Error::Parse("Levi kind is ambiguous".into())),
        };
        LeviShape::new(kind, gl, m, primed)
    }
}

fn check_levi_inputs(levi: &LeviShape, gl_orbits: &[Partition], core: &Orbit) -> Result<()> {
    if levi.gl_sizes.len() != gl_orbits.len() {
        return Err(Error::Precondition(format!(
            "{} gl orbits for {} gl factors",
            gl_orbits.len(),
            levi.gl_sizes.len()
        )));
    }
    for (a, p) in levi.gl_sizes.iter().zip(gl_orbits) {
        if p.size() != *a {
            return Err(Error::Precondition(format!("gl({a}) orbit {p} to be a partition of {a}")));
        }
    }
    if core.kind != levi.kind || core.n != levi.residual {
        return Err(Error::Precondition(format!(
            "core {core} to live in {}",
            levi.kind.algebra(levi.residual)
        )));
    }
    Ok(())
}

/// Saturation: λ⁰ ∪ ⋃ (λʲ ∪ λʲ).
pub fn saturate(levi: &LeviShape, gl_orbits: &[Partition], core: &Orbit) -> Result<Orbit> {
    check_levi_inputs(levi, gl_orbits, core)?;
    let mut lam = core.partition.clone();
    for p in gl_orbits {
        lam = lam.union(p).union(p);
    }
    let decoration = if levi.kind == Kind::D && lam.is_very_even() {
        core.decoration.or(if levi.primed { Some(Decoration::II) } else { Some(Decoration::I) })
    } else {
        None
    };
    Orbit::new(levi.kind, lam, decoration)
}

/// Result of Lusztig–Spaltenstein induction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Induced {
    pub orbit: Orbit,
    /// The join before collapsing.
    pub join: Partition,
    pub collapsed: bool,
    pub birational: bool,
    /// Set when the induced orbit is very even; its decoration is left unassigned.
    pub decoration_warning: bool,
}

/// Induction: (λ⁰ ∨ ⋁ (λʲ ∨ λʲ))_X with the birationality test on the join.
pub fn induce(levi: &LeviShape, gl_orbits: &[Partition], core: &Orbit) -> Result<Induced> {
    check_levi_inputs(levi, gl_orbits, core)?;
    let mut beta = core.partition.clone();
    for p in gl_orbits {
        beta = beta.join(p).join(p);
    }
    induce_from_join(levi.kind, beta)
}

/// Collapses a join and decides birationality.
pub fn induce_from_join(kind: Kind, beta: Partition) -> Result<Induced> {
    let lam = beta.collapse(kind)?;
    let collapsed = lam != beta;
    let birational = !collapsed || (kind == Kind::D && single_odd_column_exception(&beta, &lam));
    let orbit = Orbit::undecorated(kind, lam)?;
    let decoration_warning = orbit.is_very_even();
    Ok(Induced { orbit, join: beta, collapsed, birational, decoration_warning })
}

/// Type-D exception in column form: β is a join of pairs of equal columns (all parts even), and
/// exactly one distinct column length is odd. Then λ = β_D.
fn single_odd_column_exception(beta: &Partition, lam: &Partition) -> bool {
    if beta.parts().iter().any(|x| x % 2 == 1) {
        return false;
    }
    let odd_columns = beta.transpose().distinct().into_iter().filter(|c| c % 2 == 1).count();
    odd_columns == 1 && beta.collapse(Kind::D).map(|c| c == *lam).unwrap_or(false)
}

/// The BVLS dual d(O). The input lives on the dual side: a type-B orbit of so(2n+1) maps to
/// sp(2n), a type-C orbit of sp(2n) maps to so(2n+1), type D maps to type D.
pub fn bvls_dual(o: &Orbit) -> Result<Orbit> {
    let lam = &o.partition;
    match o.kind {
        Kind::A => Orbit::new(Kind::A, lam.transpose(), None),
        Kind::C => Orbit::new(Kind::B, lam.e().transpose().collapse(Kind::B)?, None),
        Kind::B => Orbit::new(Kind::C, lam.transpose().l()?.collapse(Kind::C)?, None),
        Kind::D => {
            let t = lam.transpose().collapse(Kind::D)?;
            let decoration = if t.is_very_even() {
                let n = o.n / 2;
                o.decoration.map(|d| if n.is_multiple_of(4) { d } else { d.flip() })
            } else {
                None
            };
            Orbit::new(Kind::D, t, decoration)
        }
    }
}

/// Distinguished, even and special flags.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OrbitFlags {
    pub distinguished: bool,
    pub even: bool,
    pub special: bool,
}

pub fn orbit_predicates(o: &Orbit) -> Result<OrbitFlags> {
    let parts = o.partition.parts();
    let even = parts.windows(2).all(|w| w[0] % 2 == w[1] % 2);
    let distinguished = o.partition.is_multiplicity_free();
    let special = is_special(o)?;
    Ok(OrbitFlags { distinguished, even, special })
}

/// Special means fixed by d∘d.
pub fn is_special(o: &Orbit) -> Result<bool> {
    if o.kind == Kind::B && o.n == 0 {
        return Ok(true);
    }
    let dd = bvls_dual(&bvls_dual(o)?)?;
    Ok(dd.partition == o.partition && (o.decoration.is_none() || dd.decoration == o.decoration))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }
    fn o(s: &str) -> Orbit {
        s.parse().unwrap()
    }

    #[test]
    fn enumerate_examples() {
        let b3: Vec<String> = enumerate_orbits(Kind::B, 3).unwrap().iter().map(|x| x.to_string()).collect();
        assert_eq!(b3, vec!["B:[3]", "B:[1,1,1]"]);
        let c2: Vec<String> = enumerate_orbits(Kind::C, 2).unwrap().iter().map(|x| x.to_string()).collect();
        assert_eq!(c2, vec!["C:[2]", "C:[1,1]"]);
        let d4: Vec<String> = enumerate_orbits(Kind::D, 4).unwrap().iter().map(|x| x.to_string()).collect();
        assert_eq!(d4, vec!["D:[3,1]", "D:[2,2]I", "D:[2,2]II", "D:[1,1,1,1]"]);
        assert!(enumerate_orbits(Kind::B, 4).is_err());
    }

    #[test]
    fn saturate_examples() {
        let levi = LeviShape::new(Kind::B, vec![4], 9, false).unwrap();
        let core = o("B:[5,3,1]");
        assert_eq!(saturate(&levi, &[p("[4]")], &core).unwrap(), o("B:[5,4,4,3,1]"));
        assert_eq!(
            saturate(&levi, &[p("[1,1,1,1]")], &core).unwrap(),
            o("B:[5,3,1,1,1,1,1,1,1,1,1]")
        );
        let whole = LeviShape::new(Kind::B, vec![], 9, false).unwrap();
        assert_eq!(saturate(&whole, &[], &core).unwrap(), core);
    }

    #[test]
    fn induce_examples() {
        let levi = LeviShape::new(Kind::D, vec![1, 3, 4], 0, false).unwrap();
        let ind = induce(&levi, &[p("[1]"), p("[1,1,1]"), p("[1^4]")], &o("D:[]")).unwrap();
        assert_eq!(ind.join, p("[6,4,4,2]"));
        assert_eq!(ind.orbit, o("D:[5,5,3,3]"));

        let borel = LeviShape::new(Kind::C, vec![1; 4], 0, false).unwrap();
        let ind = induce(&borel, &vec![p("[1]"); 4], &o("C:[]")).unwrap();
        assert_eq!(ind.orbit, o("C:[8]"));
        assert!(ind.birational);

        let levi = LeviShape::new(Kind::C, vec![4], 8, false).unwrap();
        let ind = induce(&levi, &[p("[1^4]")], &o("C:[2,2,2,1,1]")).unwrap();
        assert_eq!(ind.join, p("[4,4,4,3,1]"));
        assert_eq!(ind.orbit, o("C:[4,4,4,2,2]"));
        assert!(ind.collapsed);
        assert!(!ind.birational);
    }

    #[test]
    fn type_d_exception_is_birational() {
        let levi = LeviShape::new(Kind::D, vec![1], 0, false).unwrap();
        let ind = induce(&levi, &[p("[1]")], &o("D:[]")).unwrap();
        assert_eq!(ind.join, p("[2]"));
        assert_eq!(ind.orbit.partition, p("[1,1]"));
        assert!(ind.birational);
        let levi = LeviShape::new(Kind::D, vec![3], 4, false).unwrap();
        let ind = induce(&levi, &[p("[1,1,1]")], &o("D:[2,2]I")).unwrap();
        assert_eq!(ind.join, p("[4,4,2]"));
        assert_eq!(ind.orbit.partition, p("[4,4,1,1]"));
        assert!(ind.birational);
        let levi = LeviShape::new(Kind::D, vec![1], 4, false).unwrap();
        let ind = induce(&levi, &[p("[1]")], &o("D:[2,2]I")).unwrap();
        assert_eq!(ind.join, p("[4,2]"));
        assert_eq!(ind.orbit.partition, p("[3,3]"));
        assert!(ind.birational);
        let levi = LeviShape::new(Kind::D, vec![1], 6, false).unwrap();
        let ind = induce(&levi, &[p("[1]")], &o("D:[2,2,1,1]")).unwrap();
        assert_eq!(ind.join, p("[4,2,1,1]"));
        assert_eq!(ind.orbit.partition, p("[3,3,1,1]"));
        assert!(!ind.birational);
    }

    #[test]
    fn bvls_examples() {
        assert_eq!(bvls_dual(&o("B:[3,1,1]")).unwrap(), o("C:[2,2]"));
        assert_eq!(bvls_dual(&o("C:[2,2]")).unwrap(), o("B:[3,1,1]"));
        assert_eq!(bvls_dual(&o("B:[7]")).unwrap(), o("C:[1^6]"));
        assert_eq!(bvls_dual(&o("D:[2,2]I")).unwrap(), o("D:[2,2]II"));
        assert_eq!(bvls_dual(&o("D:[2^4]I")).unwrap(), o("D:[4,4]I"));
    }

    #[test]
    fn predicate_examples() {
        assert!(orbit_predicates(&o("B:[5,3,1]")).unwrap().distinguished);
        assert!(orbit_predicates(&o("C:[4,2,2]")).unwrap().even);
        assert!(!orbit_predicates(&o("B:[2,2,1]")).unwrap().special);
        assert!(orbit_predicates(&o("B:[3,1,1]")).unwrap().special);
        assert!(!orbit_predicates(&o("C:[2,1,1]")).unwrap().special);
    }

    #[test]
    fn levi_parse_roundtrip() {
        let l = LeviShape::parse("gl(4)+gl(1)+so(9)", None).unwrap();
        assert_eq!(l.kind, Kind::B);
        assert_eq!(l.ambient(), 19);
        assert_eq!(l.to_string(), "gl(4)+gl(1)+so(9)");
        let l = LeviShape::parse("gl(2)+gl(2)'", Some(Kind::D)).unwrap();
        assert!(l.primed);
        assert_eq!(l.to_string(), "gl(2)+gl(2)'");
        assert!(LeviShape::parse("gl(1)+gl(2)'", Some(Kind::D)).is_err());
    }

    fn dual_pairs() -> Vec<(Kind, usize)> {
        let mut v = Vec::new();
        for n in 1..=13 {
            for k in [Kind::B, Kind::C, Kind::D] {
                if k.size_ok(n) && !(k == Kind::B && n < 1) {
                    v.push((k, n));
                }
            }
        }
        v
    }

    #[test]
    fn d_cubed_is_d_and_order_reversing() {
        for (k, n) in dual_pairs() {
            let orbits = enumerate_orbits(k, n).unwrap();
            for a in &orbits {
                let d1 = bvls_dual(a).unwrap();
                let d3 = bvls_dual(&bvls_dual(&d1).unwrap()).unwrap();
                assert_eq!(d1, d3, "{a}");
                for b in &orbits {
                    if a.partition.dominates(&b.partition).unwrap() {
                        let db = bvls_dual(b).unwrap();
                        assert!(db.partition.dominates(&d1.partition).unwrap(), "{a} {b}");
                    }
                }
            }
        }
    }

    #[test]
    fn transpose_is_type_a_duality() {
        let a = Orbit::new(Kind::A, p("[3,1]"), None).unwrap();
        assert_eq!(bvls_dual(&a).unwrap().partition, p("[2,1,1]"));
    }

    #[test]
    fn rows_and_columns_agree_on_induction() {
        // Adding a column pair of length a is adding 2 to the first a rows.
        for (k, n) in dual_pairs() {
            if n > 8 {
                continue;
            }
            for core in enumerate_orbits(k, n).unwrap() {
                for a in 1..=3 {
                    let levi = LeviShape::new(k, vec![a], n, false).unwrap();
                    let ind = induce(&levi, &[Partition::from_unsorted(vec![1; a])], &core).unwrap();
                    let cols = core.partition.transpose().union(&Partition::from_unsorted([a, a]));
                    assert_eq!(ind.join, cols.transpose());
                }
            }
        }
    }
}
