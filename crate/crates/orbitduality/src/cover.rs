//! Nilpotent covers as subgroups of A(O), and the duality map D built from birational induction.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{a_ad_rank, a_eps, abar_rank, c_zero, kernel_n, lambda_eps, TwoElem, TwoSubgroup};
use crate::orbit::{induce, induce_from_join, LeviShape, Orbit};
use crate::partition::{Kind, Partition};
use crate::sommers::{sat_la, sommers_dual, LADatum, Route, SatInverse};

/// A cover of `base`, given by a subgroup of A(base) = A^ε.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverSpec {
    pub base: Orbit,
    pub subgroup: TwoSubgroup,
}

impl CoverSpec {
    pub fn new(base: Orbit, subgroup: TwoSubgroup) -> Result<CoverSpec> {
        let a = a_eps(base.kind, &base.partition);
        if !subgroup.is_subgroup_of(&a) {
            return Err(Error::Precondition(format!("a subgroup of A({base})")));
        }
        Ok(CoverSpec { base, subgroup })
    }

    /// The cover attached to N = ker(A → Ā).
    pub fn lusztig(base: Orbit) -> CoverSpec {
        let subgroup = kernel_n(base.kind, &base.partition);
        CoverSpec { base, subgroup }
    }

    pub fn degree(&self) -> usize {
        a_eps(self.base.kind, &self.base.partition).order() / self.subgroup.order()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RigidityFlags {
    pub no_codim2_leaves: bool,
    pub h2_zero: bool,
    pub birationally_rigid: bool,
}

/// Rows m with λ_m = λ_{m+1} + 2, with λ_{r+1} = 0.
fn gap_two_rows(lam: &Partition) -> Vec<usize> {
    (1..=lam.len()).filter(|&m| lam.part(m) == lam.part(m + 1) + 2).collect()
}

/// The codimension-two leaf criterion in row form, and the H² criterion: every part of λ^ε of
/// multiplicity two lies in the support of some element of H.
pub fn rigidity(c: &CoverSpec) -> RigidityFlags {
    let lam = &c.base.partition;
    let eps = c.base.kind.epsilon();
    let gaps_ok = (1..=lam.len()).all(|m| {
        let (x, y) = (lam.part(m), lam.part(m + 1));
        x <= y + 2 && (x < y + 2 || x % 2 != eps)
    });
    let twos = gap_two_rows(lam);
    let kernel_ok = twos.iter().all(|&m| {
        let e = TwoElem::product([lam.part(m), lam.part(m + 1)]);
        !c.subgroup.contains(&e)
    });
    let no_codim2_leaves = gaps_ok && kernel_ok;
    let h2_zero = lambda_eps(c.base.kind, lam)
        .multiplicities()
        .into_iter()
        .filter(|&(_, mult)| mult == 2)
        .all(|(x, _)| c.subgroup.elements.iter().any(|h| h.contains(x)));
    RigidityFlags { no_codim2_leaves, h2_zero, birationally_rigid: no_codim2_leaves && h2_zero }
}

/// φ: A(O_λ) → A(O_{λ⁰}) for the removal of two columns of length m.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PhiData {
    pub lambda0: Partition,
    /// Image value of each υ_x; zero stands for the identity.
    pub map: Vec<(usize, usize)>,
    pub kernel: TwoSubgroup,
}

/// Applies the row-shift rule: values at least `threshold` drop by two.
fn shift(e: &TwoElem, threshold: usize) -> TwoElem {
    TwoElem::product(e.support().iter().map(|&x| if x >= threshold { x - 2 } else { x }))
}

pub fn phi_data(lam: &Partition, kind: Kind, m: usize) -> Result<PhiData> {
    if m == 0 || m > lam.len() || lam.part(m) < lam.part(m + 1) + 2 {
        return Err(Error::Precondition(format!("{m} to be {lam}-singular")));
    }
    let threshold = lam.part(m);
    let lambda0 = Partition::from_unsorted(
        lam.parts().iter().enumerate().map(|(i, &x)| if i < m { x - 2 } else { x }).filter(|&x| x > 0),
    );
    let values = lambda_eps(kind, lam).distinct();
    let map: Vec<(usize, usize)> =
        values.iter().map(|&x| (x, if x >= threshold { x - 2 } else { x })).collect();
    let a = a_eps(kind, lam);
    let kernel = TwoSubgroup::generated_by(a.elements.iter().filter(|e| shift(e, threshold).is_identity()).cloned());
    Ok(PhiData { lambda0, map, kernel })
}

/// One gl step of the duality map.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DStep {
    pub a: usize,
    pub before: Orbit,
    pub after: Orbit,
    pub birational: bool,
    pub degree: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DMap {
    pub cover: CoverSpec,
    pub degree: usize,
    pub core_dual: Orbit,
    pub steps: Vec<DStep>,
    /// Set when the datum is not special.
    pub warning: Option<String>,
}

/// D(O∨, C̄): the Lusztig cover of the Sommers dual of the distinguished core, carried along
/// the induction from the Levi one gl factor at a time, largest first.
pub fn d_map(d: &LADatum) -> Result<DMap> {
    let s = crate::sommers::sat_inverse(d)?;
    d_map_in_order(d, &s, &s.gl_sizes)
}

/// The duality map with the gl factors processed in the given order.
pub fn d_map_in_order(d: &LADatum, s: &SatInverse, order: &[usize]) -> Result<DMap> {
    let core_dual = sommers_dual(&s.core, Route::General)?.orbit;
    let kind = core_dual.kind;
    let mut current = CoverSpec::lusztig(core_dual.clone());
    let mut steps = Vec::new();
    for &a in order {
        let before = current.base.clone();
        let pi = &before.partition;
        let beta = Partition::from_unsorted((1..=pi.len().max(a)).map(|i| pi.part(i) + if i <= a { 2 } else { 0 }));
        let ind = induce_from_join(kind, beta.clone())?;
        let after = ind.orbit.clone();
        let lam = &after.partition;
        let a_new = a_eps(kind, lam);
        let subgroup = if !ind.collapsed {
            let threshold = beta.part(a);
            TwoSubgroup::generated_by(
                a_new.elements.iter().filter(|h| current.subgroup.contains(&shift(h, threshold))).cloned(),
            )
        } else if ind.birational {
            a_new
        } else {
            let u = beta.part(a + 1);
            let mut expect: Vec<usize> = beta.parts().to_vec();
            expect.resize(expect.len().max(a + 1), 0);
            expect[a - 1] = u + 1;
            expect[a] = u + 1;
            if beta.part(a) != u + 2 || Partition::from_unsorted(expect) != *lam {
                return Err(Error::Precondition(format!(
                    "a single collapse of rows {a},{} in {beta}",
                    a + 1
                )));
            }
            TwoSubgroup::generated_by(
                a_new
                    .elements
                    .iter()
                    .filter(|h| !h.contains(u + 1) && current.subgroup.contains(&shift(h, u + 2)))
                    .cloned(),
            )
        };
        current = CoverSpec { base: after.clone(), subgroup };
        steps.push(DStep { a, before, after, birational: ind.birational, degree: current.degree() });
    }
    let expected = sommers_dual(d, Route::General)?.orbit;
    if !expected.same_partition(&current.base) {
        return Err(Error::Precondition(format!(
            "induction to reach the Sommers dual {expected}, got {}",
            current.base
        )));
    }
    let warning = (!d.is_special()).then(|| format!("{d} is not special"));
    Ok(DMap { degree: current.degree(), cover: current, core_dual, steps, warning })
}

/// The pseudo-Levi pair r∨ = g(|ν₀|) × g(|η₀|) with the orbits O_{ν₀} × O_{η₀}.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MSLift {
    pub factor1: (Kind, usize, Partition),
    pub factor2: (Kind, usize, Partition),
}

impl MSLift {
    pub fn abar_rank(&self) -> usize {
        abar_rank(self.factor1.0, &self.factor1.2) + abar_rank(self.factor2.0, &self.factor2.2)
    }
}

impl std::fmt::Display for MSLift {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let (k1, n1, p1) = &self.factor1;
        let (k2, n2, p2) = &self.factor2;
        write!(f, "{} x {}, {} x {}", k1.algebra(*n1), k2.algebra(*n2), p1, p2)
    }
}

/// Whether a gl pair [a, a] joins η₀ rather than ν₀.
pub fn routes_to_eta(kind: Kind, a: usize) -> bool {
    match kind {
        Kind::C => a.is_multiple_of(2),
        _ => a % 2 == 1,
    }
}

/// Kinds of the two factors of r∨.
pub fn factor_kinds(kind: Kind) -> (Kind, Kind) {
    match kind {
        Kind::B => (Kind::D, Kind::B),
        Kind::C => (Kind::C, Kind::C),
        _ => (Kind::D, Kind::D),
    }
}

/// (ν₀, η₀) of the core extended by the routed gl pairs of `gl`.
pub fn split_with_pairs(kind: Kind, core: &LADatum, gl: &[usize]) -> Result<(Partition, Partition)> {
    let c = c_zero(&core.marked)?;
    let (mut nu0, mut eta0) = (c.nu0, c.eta0);
    for &a in gl {
        let pair = Partition::from_unsorted([a, a]);
        if routes_to_eta(kind, a) {
            eta0 = eta0.union(&pair);
        } else {
            nu0 = nu0.union(&pair);
        }
    }
    Ok((nu0, eta0))
}

pub fn ms_lift(d: &LADatum) -> Result<MSLift> {
    let s = crate::sommers::sat_inverse(d)?;
    let (nu0, eta0) = split_with_pairs(d.kind(), &s.core, &s.gl_sizes)?;
    let (k1, k2) = factor_kinds(d.kind());
    Ok(MSLift { factor1: (k1, nu0.size(), nu0), factor2: (k2, eta0.size(), eta0) })
}

/// One saturation step of Γ: the induction from gl(a) × (partial datum).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GammaStep {
    pub a: usize,
    pub before: Orbit,
    pub after: Orbit,
    pub birational: bool,
}

/// Rank of Γ: the A^ad-rank of the Sommers dual of the core plus one for each gl step whose
/// induction is not birational.
pub fn gamma_group_rank(d: &LADatum) -> Result<(usize, Vec<GammaStep>)> {
    let s = crate::sommers::sat_inverse(d)?;
    gamma_group_rank_in_order(&s, &s.gl_sizes)
}

pub fn gamma_group_rank_in_order(s: &SatInverse, order: &[usize]) -> Result<(usize, Vec<GammaStep>)> {
    let core_dual = sommers_dual(&s.core, Route::General)?.orbit;
    let mut rank = a_ad_rank(core_dual.kind, &core_dual.partition);
    let mut partial = s.core.clone();
    let mut steps = Vec::new();
    for &a in order {
        let before = sommers_dual(&partial, Route::General)?.orbit;
        let levi = LeviShape::new(partial.kind(), vec![a], partial.size(), false)?;
        partial = sat_la(&levi, &[Partition::from_unsorted([a])], &partial)?;
        let after = sommers_dual(&partial, Route::General)?.orbit;
        let dual_levi = LeviShape::new(before.kind, vec![a], before.n, false)?;
        let ind = induce(&dual_levi, &[Partition::from_unsorted(vec![1; a])], &before)?;
        if !ind.orbit.same_partition(&after) {
            return Err(Error::Precondition(format!("induction of {before} by gl({a}) to give {after}")));
        }
        if !ind.birational {
            rank += 1;
        }
        steps.push(GammaStep { a, before, after, birational: ind.birational });
    }
    Ok((rank, steps))
}

/// Sum of the Ā-ranks of the two factors of the McNinch–Sommers lift.
pub fn abar_r_rank(d: &LADatum) -> Result<usize> {
    Ok(ms_lift(d)?.abar_rank())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StepFlags {
    pub abar_changes: bool,
    pub bind_birational: bool,
}

/// The Ā and birationality criteria for saturating `under` by one pair [a, a]. `nu0` and `eta0`
/// are the split of the partially saturated datum.
pub fn saturation_step_flags(kind: Kind, a: usize, under: &Partition, nu0: &Partition, eta0: &Partition) -> StepFlags {
    let fresh = !under.contains(a);
    let eta_side = routes_to_eta(kind, a);
    let ht_eta_ok = match kind {
        Kind::B => eta0.height(a) % 2 == 1,
        _ => eta0.height(a).is_multiple_of(2),
    };
    let abar_changes = fresh && eta_side && ht_eta_ok && (kind != Kind::D || !eta0.is_empty());
    let non_birational = fresh
        && if eta_side {
            ht_eta_ok && (kind != Kind::D || !(under.is_empty() || under.is_very_even()))
        } else {
            nu0.height(a) % 2 == 1
        };
    StepFlags { abar_changes, bind_birational: !non_birational }
}

/// Flags for adding one pair [a, a] to a datum built on a distinguished core.
pub fn saturation_step_analysis(a: usize, core_so_far: &LADatum) -> Result<StepFlags> {
    let s = crate::sommers::sat_inverse(core_so_far)?;
    let kind = core_so_far.kind();
    let (nu0, eta0) = split_with_pairs(kind, &s.core, &s.gl_sizes)?;
    Ok(saturation_step_flags(kind, a, core_so_far.lambda(), &nu0, &eta0))
}

/// Step-by-step flags from the core up to the datum, largest gl factor first, paired with
/// whether the actual induction was birational.
pub fn step_report(d: &LADatum) -> Result<Vec<(usize, StepFlags, bool)>> {
    let s = crate::sommers::sat_inverse(d)?;
    let (_, steps) = gamma_group_rank_in_order(&s, &s.gl_sizes)?;
    let mut partial = s.core.clone();
    let mut out = Vec::new();
    for (i, &a) in s.gl_sizes.iter().enumerate() {
        let (nu0, eta0) = split_with_pairs(d.kind(), &s.core, &s.gl_sizes[..i])?;
        let flags = saturation_step_flags(d.kind(), a, partial.lambda(), &nu0, &eta0);
        out.push((a, flags, steps[i].birational));
        let levi = LeviShape::new(partial.kind(), vec![a], partial.size(), false)?;
        partial = sat_la(&levi, &[Partition::from_unsorted([a])], &partial)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sommers::{la_data, sat_inverse};

    fn la(s: &str) -> LADatum {
        s.parse().unwrap()
    }

    fn special_data(max_b: usize, max_c: usize, max_d: usize) -> Vec<LADatum> {
        let mut v = Vec::new();
        for n in (1..=max_b).step_by(2) {
            v.extend(la_data(Kind::B, n));
        }
        for n in (2..=max_c).step_by(2) {
            v.extend(la_data(Kind::C, n));
        }
        for n in (2..=max_d).step_by(2) {
            v.extend(la_data(Kind::D, n));
        }
        v.into_iter().filter(|d| d.is_special()).collect()
    }

    #[test]
    fn rigidity_examples() {
        let c = CoverSpec::lusztig("C:[2,2,2,1,1]".parse().unwrap());
        assert!(rigidity(&c).birationally_rigid);
        let zero = CoverSpec::lusztig("B:[1,1,1,1,1]".parse().unwrap());
        assert!(rigidity(&zero).birationally_rigid);
        let o: Orbit = "C:[2,2]".parse().unwrap();
        let univ = CoverSpec::new(o, TwoSubgroup::trivial()).unwrap();
        let f = rigidity(&univ);
        assert!(!f.h2_zero);
    }

    #[test]
    fn phi_examples() {
        let lam: Partition = "[4,2]".parse().unwrap();
        let ph = phi_data(&lam, Kind::C, 1).unwrap();
        assert_eq!(ph.lambda0, "[2,2]".parse().unwrap());
        assert!(ph.kernel.same_as(&TwoSubgroup::generated_by([TwoElem::product([4, 2])])));
        let lam: Partition = "[5,1]".parse().unwrap();
        let ph = phi_data(&lam, Kind::C, 1).unwrap();
        assert_eq!(ph.kernel.order(), 1);
        assert!(phi_data(&lam, Kind::C, 2).is_err());
        let lam: Partition = "[6,4,2]".parse().unwrap();
        for m in 1..=3 {
            assert!(phi_data(&lam, Kind::C, m).unwrap().kernel.order() <= 2);
        }
    }

    #[test]
    fn d_map_examples() {
        let d = d_map(&la("B:<[5,1]>[5,4,4,3,1]")).unwrap();
        assert_eq!(d.cover.base.to_string(), "C:[4,4,4,2,2]");
        assert_eq!(d.degree, 2);
        assert!(d.warning.is_some());
        let d = d_map(&la("B:[5,3,1]")).unwrap();
        assert_eq!(d.degree, 1 << abar_rank(Kind::B, &"[5,3,1]".parse().unwrap()));
    }

    #[test]
    fn ms_lift_examples() {
        let m = ms_lift(&la("C:<[2]>[2,2]")).unwrap();
        assert_eq!(m.to_string(), "sp(2) x sp(2), [2] x [2]");
        let m = ms_lift(&la("B:<[5,1]>[5,4,4,3,1]")).unwrap();
        assert_eq!(m.to_string(), "so(16) x so(1), [5,4,4,3] x [1]");
        assert_eq!(m.abar_rank(), 0);
        let (g, _) = gamma_group_rank(&la("B:<[5,1]>[5,4,4,3,1]")).unwrap();
        assert_eq!(g, 1);
        let d = la("B:<[5,1]>[5,3,1]");
        assert_eq!(gamma_group_rank(&d).unwrap().0, abar_r_rank(&d).unwrap());
    }

    #[test]
    fn step_analysis_examples() {
        let f = saturation_step_analysis(4, &la("B:<[5,1]>[5,3,1]")).unwrap();
        assert!(!f.abar_changes);
        let f = saturation_step_analysis(3, &la("B:<[5,1]>[5,3,1]")).unwrap();
        assert!(!f.abar_changes && f.bind_birational);
    }

    #[test]
    fn gamma_ranks_agree_on_special_data() {
        for d in special_data(11, 10, 10) {
            let (g, _) = gamma_group_rank(&d).unwrap();
            assert_eq!(g, abar_r_rank(&d).unwrap(), "{d}");
            for (a, flags, birational) in step_report(&d).unwrap() {
                assert_eq!(flags.abar_changes, !flags.bind_birational, "{d} step {a}");
                assert_eq!(flags.bind_birational, birational, "{d} step {a}");
            }
        }
    }

    #[test]
    fn gamma_rank_order_independent() {
        for d in special_data(11, 10, 10) {
            let s = sat_inverse(&d).unwrap();
            let mut rev = s.gl_sizes.clone();
            rev.reverse();
            let a = gamma_group_rank_in_order(&s, &s.gl_sizes).unwrap().0;
            let b = gamma_group_rank_in_order(&s, &rev).unwrap().0;
            assert_eq!(a, b, "{d}");
        }
    }

    #[test]
    fn d_map_degrees() {
        for d in special_data(11, 10, 10) {
            let dm = d_map(&d).unwrap_or_else(|e| panic!("{d}: {e}"));
            let (g, _) = gamma_group_rank(&d).unwrap();
            let core = sat_inverse(&d).unwrap().core;
            let cd = sommers_dual(&core, Route::General).unwrap().orbit;
            let nonbir = dm.steps.iter().filter(|s| !s.birational).count();
            assert_eq!(dm.degree, (1 << abar_rank(cd.kind, &cd.partition)) << nonbir, "{d}");
            if d.nu().is_empty() {
                assert_eq!(dm.degree, 1 << abar_rank(d.kind(), d.lambda()), "{d}");
            }
            let _ = g;
        }
    }

    #[test]
    fn lusztig_covers_of_distinguished_duals_are_rigid() {
        for d in special_data(11, 10, 10).into_iter().filter(|d| d.is_distinguished()) {
            let o = sommers_dual(&d, Route::General).unwrap().orbit;
            assert!(rigidity(&CoverSpec::lusztig(o.clone())).birationally_rigid, "{d} -> {o}");
        }
    }
}
