//! Lusztig–Achar data and their Sommers duals.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{c_zero, classify_marked, validate_marking, MarkedFlags, MarkedPartition};
use crate::orbit::{saturate, Decoration, LeviShape, Orbit};
use crate::partition::{Kind, Partition};

/// A Lusztig–Achar datum (O∨, C̄), encoded as a reduced marked partition.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct LADatum {
    pub marked: MarkedPartition,
    #[serde(skip)]
    flags: FlagsCache,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct FlagsCache {
    special: bool,
    distinguished: bool,
}

impl LADatum {
    pub fn new(marked: MarkedPartition) -> Result<LADatum> {
        let flags = classify_marked(&marked);
        if !flags.valid {
            validate_marking(&marked)?;
        }
        if !flags.reduced {
            return Err(Error::InvalidMarking(format!("{marked} is not reduced")));
        }
        Ok(LADatum { marked, flags: FlagsCache { special: flags.special, distinguished: flags.distinguished } })
    }

    pub fn kind(&self) -> Kind {
        self.marked.kind
    }

    pub fn lambda(&self) -> &Partition {
        &self.marked.lambda
    }

    pub fn nu(&self) -> &Partition {
        &self.marked.nu
    }

    pub fn eta(&self) -> Partition {
        self.marked.eta()
    }

    pub fn size(&self) -> usize {
        self.marked.size()
    }

    pub fn is_special(&self) -> bool {
        self.flags.special
    }

    pub fn is_distinguished(&self) -> bool {
        self.flags.distinguished
    }

    pub fn flags(&self) -> MarkedFlags {
        MarkedFlags { valid: true, reduced: true, special: self.flags.special, distinguished: self.flags.distinguished }
    }

    pub fn orbit(&self) -> Result<Orbit> {
        self.marked.orbit()
    }
}

impl fmt::Display for LADatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.marked.fmt(f)
    }
}

impl FromStr for LADatum {
    type Err = Error;
    fn from_str(s: &str) -> Result<LADatum> {
        LADatum::new(s.parse()?)
    }
}

/// All Lusztig–Achar data of the given kind and size.
pub fn la_data(kind: Kind, n: usize) -> Vec<LADatum> {
    crate::group::reduced_marked_partitions(kind, n)
        .into_iter()
        .filter_map(|m| LADatum::new(m).ok())
        .collect()
}

/// Which formula computes the Sommers dual.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    General,
    Distinguished,
    Blocks,
}

impl FromStr for Route {
    type Err = Error;
    fn from_str(s: &str) -> Result<Route> {
        match s.trim() {
            "general" => Ok(Route::General),
            "distinguished" => Ok(Route::Distinguished),
            "blocks" => Ok(Route::Blocks),
            other => Err(Error::Parse(format!("unknown route {other:?}"))),
        }
    }
}

/// A Sommers dual together with the intermediate partitions used to compute it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SommersDual {
    pub orbit: Orbit,
    pub route: Route,
    /// Named intermediate partitions, in the order they were computed.
    pub witness: Vec<(String, Partition)>,
    /// Set when the result is very even and carries no decoration.
    pub decoration_warning: bool,
}

fn finish(kind: Kind, p: Partition, route: Route, witness: Vec<(String, Partition)>) -> Result<SommersDual> {
    let orbit = Orbit::undecorated(kind, p)?;
    let decoration_warning = orbit.is_very_even();
    Ok(SommersDual { orbit, route, witness, decoration_warning })
}

/// The general formula on a marked partition, which need not be reduced.
pub fn sommers_general(m: &MarkedPartition) -> Result<SommersDual> {
    let nu = &m.nu;
    let eta = m.eta();
    let mut w = vec![("eta".to_string(), eta.clone())];
    let (kind, raw) = match m.kind {
        Kind::C => {
            let e = eta.plus().collapse(Kind::B)?;
            w.push(("(eta+)_B".into(), e.clone()));
            (Kind::B, nu.union(&e).transpose())
        }
        Kind::B => {
            let e = eta.l()?.collapse(Kind::C)?;
            w.push(("l(eta)_C".into(), e.clone()));
            (Kind::C, nu.union(&e).transpose())
        }
        Kind::D => {
            let e = eta.transpose().collapse(Kind::D)?.transpose();
            w.push(("((eta^t)_D)^t".into(), e.clone()));
            (Kind::D, nu.union(&e).transpose())
        }
        Kind::A => return Err(Error::UnsupportedKind('A')),
    };
    w.push(("transpose".into(), raw.clone()));
    let p = raw.collapse(kind)?;
    finish(kind, p, Route::General, w)
}

/// The shortcut through (ν₀, η₀) for distinguished data. The transposed union is returned
/// without a final collapse and must already have the dual type.
pub fn sommers_distinguished(m: &MarkedPartition) -> Result<SommersDual> {
    let c = c_zero(m)?;
    let mut w = vec![("nu0".to_string(), c.nu0.clone()), ("eta0".to_string(), c.eta0.clone())];
    let (kind, e) = match m.kind {
        Kind::B => (Kind::C, c.eta0.l()?.collapse(Kind::C)?),
        Kind::C => (Kind::B, c.eta0.plus().collapse(Kind::B)?),
        Kind::D => (Kind::D, c.eta0.uparrow()?),
        Kind::A => return Err(Error::UnsupportedKind('A')),
    };
    w.push(("eta0'".into(), e.clone()));
    let p = c.nu0.union(&e).transpose();
    finish(kind, p, Route::Distinguished, w)
}

/// The Sommers dual by the chosen route.
pub fn sommers_dual(d: &LADatum, route: Route) -> Result<SommersDual> {
    match route {
        Route::General => sommers_general(&d.marked),
        Route::Distinguished => {
            if !d.is_distinguished() {
                return Err(Error::NotDistinguished);
            }
            sommers_distinguished(&d.marked)
        }
        Route::Blocks => {
            let blocks = block_decompose(&d.marked)?;
            sommers_from_blocks(&d.marked, &blocks)
        }
    }
}

/// An ordered decomposition into basic or unmarked blocks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockList {
    pub blocks: Vec<MarkedPartition>,
}

impl fmt::Display for BlockList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.blocks.iter().map(|b| b.to_string()).collect();
        write!(f, "{}", s.join(" | "))
    }
}

fn block_kind(ambient: Kind, index: usize) -> Kind {
    match (ambient, index) {
        (Kind::B, 0) => Kind::B,
        (Kind::B, _) => Kind::D,
        (k, _) => k,
    }
}

/// Required parity of the superiority threshold m.
fn threshold_parity(ambient: Kind) -> usize {
    if ambient == Kind::C {
        1
    } else {
        0
    }
}

/// Whether some m of the given parity satisfies lo ≥ m ≥ hi.
fn superior(lo: usize, hi: usize, parity: usize) -> bool {
    lo >= hi && (lo > hi || lo % 2 == parity)
}

/// The markings that make a block basic.
fn basic_markings(kind: Kind, lam: &Partition) -> Vec<Partition> {
    let eps = kind.epsilon();
    let ht_parity = if kind == Kind::B { 1 } else { 0 };
    let top = lam
        .distinct()
        .into_iter()
        .find(|&x| x % 2 != eps && lam.height(x) % 2 == ht_parity);
    let mut out = Vec::new();
    let small = lam.smallest();
    if let Some(x) = top {
        if x != small && small % 2 != eps {
            out.push(Partition::from_unsorted([x, small]));
        }
        if kind == Kind::C {
            out.push(Partition::from_unsorted([x]));
        }
    }
    out
}

fn is_basic(kind: Kind, b: &MarkedPartition, last: bool) -> bool {
    let allowed = basic_markings(kind, &b.lambda);
    allowed.iter().any(|nu| *nu == b.nu && (nu.len() == 2 || last))
}

/// Checks conditions (i)–(iii) of a block decomposition into basic or unmarked blocks.
pub fn check_blocks(m: &MarkedPartition, blocks: &BlockList) -> bool {
    let bs = &blocks.blocks;
    if bs.is_empty() {
        return m.lambda.is_empty();
    }
    let lam = bs.iter().fold(Partition::empty(), |acc, b| acc.union(&b.lambda));
    let nu = bs.iter().fold(Partition::empty(), |acc, b| acc.union(&b.nu));
    if lam != m.lambda || nu != m.nu {
        return false;
    }
    let k = bs.len();
    for (i, b) in bs.iter().enumerate() {
        let kind = block_kind(m.kind, i);
        if b.kind != kind || b.lambda.is_empty() || !kind.size_ok(b.size()) || !b.lambda.is_type(kind) {
            return false;
        }
        if !b.nu.is_empty() && !is_basic(kind, b, i + 1 == k) {
            return false;
        }
        if m.kind == Kind::C && i + 1 < k && b.lambda.len() % 2 == 1 {
            return false;
        }
        if i + 1 < k && !superior(b.lambda.smallest(), bs[i + 1].lambda.largest(), threshold_parity(m.kind)) {
            return false;
        }
    }
    true
}

/// A block decomposition into basic or unmarked blocks, found by depth-first search over the
/// split points of λ and the markings of each segment, trying the shortest segment first.
pub fn block_decompose(m: &MarkedPartition) -> Result<BlockList> {
    validate_marking(m)?;
    let parts = m.lambda.parts();
    let mut acc = Vec::new();
    if search_blocks(m, parts, 0, &m.nu, &mut acc) {
        Ok(BlockList { blocks: acc })
    } else {
        Err(Error::Precondition(format!("a block decomposition of {m}")))
    }
}

fn search_blocks(
    m: &MarkedPartition,
    parts: &[usize],
    start: usize,
    nu_left: &Partition,
    acc: &mut Vec<MarkedPartition>,
) -> bool {
    if start == parts.len() {
        return nu_left.is_empty();
    }
    let idx = acc.len();
    let kind = block_kind(m.kind, idx);
    for end in start + 1..=parts.len() {
        let seg = Partition::from_unsorted(parts[start..end].iter().copied());
        let last = end == parts.len();
        if !kind.size_ok(seg.size()) || !seg.is_type(kind) {
            continue;
        }
        if m.kind == Kind::C && !last && seg.len() % 2 == 1 {
            continue;
        }
        if let Some(prev) = acc.last() {
            if !superior(prev.lambda.smallest(), seg.largest(), threshold_parity(m.kind)) {
                continue;
            }
        }
        let mut options = vec![Partition::empty()];
        options.extend(basic_markings(kind, &seg).into_iter().filter(|nu| nu.len() == 2 || last));
        for nu in options {
            let Ok(rest) = nu_left.remove(&nu) else { continue };
            acc.push(MarkedPartition::new(kind, seg.clone(), nu));
            if search_blocks(m, parts, end, &rest, acc) {
                return true;
            }
            acc.pop();
        }
    }
    false
}

/// The Sommers dual assembled as the join of the block duals.
pub fn sommers_from_blocks(m: &MarkedPartition, blocks: &BlockList) -> Result<SommersDual> {
    if !check_blocks(m, blocks) {
        return Err(Error::Precondition(format!("a valid block decomposition of {m}")));
    }
    let k = blocks.blocks.len();
    let mut total = Partition::empty();
    let mut w = Vec::new();
    for (i, b) in blocks.blocks.iter().enumerate() {
        let mut p = sommers_general(b)?.orbit.partition;
        if m.kind == Kind::C && i + 1 < k {
            p = p.minus()?;
        }
        w.push((format!("block {}", i + 1), p.clone()));
        total = total.join(&p);
    }
    let kind = m.kind.dual();
    finish(kind, total, Route::Blocks, w)
}

/// Saturation of a Lusztig–Achar datum from a Levi: λ gains the pairs λʲ ∪ λʲ, ν is unchanged.
pub fn sat_la(levi: &LeviShape, gl_orbits: &[Partition], core: &LADatum) -> Result<LADatum> {
    LADatum::new(sat_marked(levi, gl_orbits, &core.marked)?)
}

/// Saturation of a marked partition that need not be reduced.
pub fn sat_marked(levi: &LeviShape, gl_orbits: &[Partition], core: &MarkedPartition) -> Result<MarkedPartition> {
    validate_marking(core)?;
    let orbit = saturate(levi, gl_orbits, &core.orbit()?)?;
    Ok(MarkedPartition { kind: orbit.kind, lambda: orbit.partition, nu: core.nu.clone(), decoration: orbit.decoration })
}

/// The Levi and distinguished core from which a datum is saturated.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SatInverse {
    pub levi: LeviShape,
    /// Sizes of the gl factors, largest first. Each carries its principal orbit.
    pub gl_sizes: Vec<usize>,
    pub core: LADatum,
}

impl SatInverse {
    pub fn gl_orbits(&self) -> Vec<Partition> {
        self.gl_sizes.iter().map(|&a| Partition::from_unsorted([a])).collect()
    }
}

/// Removes every pair of equal parts that the distinguished criterion does not allow.
pub fn sat_inverse(d: &LADatum) -> Result<SatInverse> {
    let kind = d.kind();
    let eps = kind.epsilon();
    let mut core_parts = Vec::new();
    let mut gl = Vec::new();
    for (x, mult) in d.lambda().multiplicities() {
        let keep = if x % 2 == eps {
            0
        } else {
            let marked = usize::from(d.nu().contains(x));
            marked + (mult - marked) % 2
        };
        core_parts.extend(std::iter::repeat_n(x, keep));
        gl.extend(std::iter::repeat_n(x, (mult - keep) / 2));
    }
    gl.sort_unstable_by(|a, b| b.cmp(a));
    let lambda = Partition::from_unsorted(core_parts);
    let primed = kind == Kind::D && lambda.is_empty() && d.marked.decoration == Some(Decoration::II);
    let levi = LeviShape::new(kind, gl.clone(), lambda.size(), primed)?;
    let core_dec = if kind == Kind::D && lambda.is_very_even() { d.marked.decoration } else { None };
    let core = LADatum::new(MarkedPartition { kind, lambda, nu: d.nu().clone(), decoration: core_dec })?;
    Ok(SatInverse { levi, gl_sizes: gl, core })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbit::{bvls_dual, enumerate_orbits, induce};

    fn la(s: &str) -> LADatum {
        s.parse().unwrap()
    }
    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn sommers_examples() {
        let d = la("B:<[5,1]>[5,3,1]");
        for r in [Route::General, Route::Distinguished, Route::Blocks] {
            assert_eq!(sommers_dual(&d, r).unwrap().orbit.to_string(), "C:[2,2,2,1,1]", "{r:?}");
        }
        let d = la("B:<[5,1]>[5,4,4,3,1]");
        assert_eq!(sommers_dual(&d, Route::General).unwrap().orbit.to_string(), "C:[4,4,4,2,2]");
        assert_eq!(sommers_dual(&d, Route::Blocks).unwrap().orbit.to_string(), "C:[4,4,4,2,2]");
        assert!(matches!(sommers_dual(&d, Route::Distinguished), Err(Error::NotDistinguished)));
        let d = la("C:<[2]>[2,2]");
        assert_eq!(sommers_dual(&d, Route::General).unwrap().orbit.to_string(), "B:[2,2,1]");
        assert_eq!(sommers_dual(&d, Route::Distinguished).unwrap().orbit.to_string(), "B:[2,2,1]");
    }

    #[test]
    fn block_examples() {
        let b = block_decompose(&la("B:<[5,1]>[5,3,1]").marked).unwrap();
        assert_eq!(b.blocks.len(), 1);
        let b = block_decompose(&la("B:[3,3,1]").marked).unwrap();
        assert_eq!(b.blocks.len(), 1);
        let m = la("B:<[5,1]>[5,4,4,3,1]").marked;
        let b = block_decompose(&m).unwrap();
        assert!(check_blocks(&m, &b));
    }

    #[test]
    fn saturation_examples() {
        let levi = LeviShape::parse("gl(4)+so(9)", None).unwrap();
        let d = sat_la(&levi, &[p("[4]")], &la("B:<[5,1]>[5,3,1]")).unwrap();
        assert_eq!(d.to_string(), "B:<[5,1]>[5,4,4,3,1]");
        let levi = LeviShape::parse("gl(1)+sp(2)", None).unwrap();
        let d = sat_marked(&levi, &[p("[1]")], &"C:<[2]>[2]".parse().unwrap()).unwrap();
        assert_eq!(d.to_string(), "C:<[2]>[2,1,1]");
        let levi = LeviShape::parse("so(9)", None).unwrap();
        assert_eq!(sat_la(&levi, &[], &la("B:<[5,1]>[5,3,1]")).unwrap(), la("B:<[5,1]>[5,3,1]"));

        let s = sat_inverse(&la("B:<[5,1]>[5,4,4,3,1]")).unwrap();
        assert_eq!((s.gl_sizes.clone(), s.core.to_string()), (vec![4], "B:<[5,1]>[5,3,1]".to_string()));
        let s = sat_inverse(&la("B:[3,3,1,1,1]")).unwrap();
        assert_eq!((s.gl_sizes.clone(), s.core.to_string()), (vec![3, 1], "B:<[]>[1]".to_string()));
        let s = sat_inverse(&la("B:<[5,1]>[5,3,1]")).unwrap();
        assert!(s.gl_sizes.is_empty());
    }

    fn sweep() -> Vec<LADatum> {
        let mut v = Vec::new();
        for n in 1..=13 {
            v.extend(la_data(Kind::B, n));
        }
        for n in 2..=12 {
            v.extend(la_data(Kind::C, n));
            v.extend(la_data(Kind::D, n));
        }
        v
    }

    #[test]
    fn routes_agree() {
        for d in sweep() {
            let g = sommers_dual(&d, Route::General).unwrap().orbit;
            let b = sommers_dual(&d, Route::Blocks).unwrap_or_else(|e| panic!("{d}: {e}")).orbit;
            assert_eq!(g, b, "{d}");
            if d.is_distinguished() {
                let s = sommers_dual(&d, Route::Distinguished).unwrap_or_else(|e| panic!("{d}: {e}")).orbit;
                assert_eq!(g, s, "{d}");
            }
        }
    }

    #[test]
    fn unmarked_reduces_to_bvls() {
        for d in sweep().into_iter().filter(|d| d.nu().is_empty()) {
            let g = sommers_dual(&d, Route::General).unwrap().orbit;
            let b = bvls_dual(&d.orbit().unwrap()).unwrap();
            assert!(g.same_partition(&b), "{d}");
        }
    }

    #[test]
    fn saturation_roundtrip_and_intertwining() {
        for d in sweep() {
            let s = sat_inverse(&d).unwrap();
            assert!(s.core.is_distinguished(), "{d}");
            let back = sat_la(&s.levi, &s.gl_orbits(), &s.core).unwrap();
            assert_eq!(back.marked.lambda, d.marked.lambda, "{d}");
            assert_eq!(back.marked.nu, d.marked.nu, "{d}");
            if d.kind().rank(d.size()) > 6 {
                continue;
            }
            let core_dual = sommers_dual(&s.core, Route::General).unwrap().orbit;
            let dual_levi = LeviShape::new(d.kind().dual(), s.gl_sizes.clone(), core_dual.n, false).unwrap();
            let zeros_dual: Vec<Partition> = s.gl_sizes.iter().map(|&a| Partition::from_unsorted(vec![1; a])).collect();
            let ind = induce(&dual_levi, &zeros_dual, &core_dual).unwrap().orbit;
            let g = sommers_dual(&d, Route::General).unwrap().orbit;
            assert!(ind.same_partition(&g), "{d}");
        }
    }

    #[test]
    fn same_class_same_dual() {
        for d in sweep().into_iter().filter(|d| d.kind().rank(d.size()) <= 6) {
            let g = sommers_dual(&d, Route::General).unwrap().orbit;
            for l in crate::group::lifts_of(&d.marked) {
                assert_eq!(sommers_general(&l).unwrap().orbit, g, "{d} vs {l}");
            }
        }
    }

    #[test]
    fn injective_on_special_distinguished() {
        for (kind, sizes) in [(Kind::B, (1..=13).step_by(2)), (Kind::C, (2..=12).step_by(2)), (Kind::D, (2..=12).step_by(2))] {
            for n in sizes {
                let mut seen = std::collections::BTreeMap::new();
                for d in la_data(kind, n).into_iter().filter(|d| d.is_special() && d.is_distinguished()) {
                    let g = sommers_dual(&d, Route::General).unwrap().orbit;
                    if let Some(prev) = seen.insert(g.clone(), d.clone()) {
                        panic!("{prev} and {d} both map to {g}");
                    }
                }
            }
        }
        let _ = enumerate_orbits(Kind::B, 1);
    }
}
