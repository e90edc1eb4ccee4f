//! The verification suite: exhaustive sweeps for each acceptance criterion, run in parallel.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::cover::{abar_r_rank, d_map, gamma_group_rank, ms_lift, rigidity, step_report, CoverSpec};
use crate::exceptional::{verify_tables, Group};
use crate::group::{a_eps, abar_rank, kernel_n};
use crate::infchar::{gamma_la, gamma_rigid_cover, rho_plus};
use crate::oracle::{richardson_pair, verify_min};
use crate::orbit::{bvls_dual, enumerate_orbits, Orbit};
use crate::partition::{partitions, partitions_of_type, Kind, Partition};
use crate::sommers::{la_data, sommers_dual, LADatum, Route};

/// Sweep bounds. With `max_rank = r` the datum sweeps cover so(2r+1), sp(2r) and so(2r); the
/// orbit-level duality sweeps go one rank further.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SuiteConfig {
    pub max_rank: usize,
    /// Largest partition size for the collapse oracle.
    pub collapse_max: usize,
    /// Largest first row in the two-row norm inequality.
    pub two_row_max: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { max_rank: 5, collapse_max: 14, two_row_max: 12 }
    }
}

impl SuiteConfig {
    fn sizes(kind: Kind, rank: usize) -> Vec<usize> {
        match kind {
            Kind::B => (0..=rank).map(|r| 2 * r + 1).collect(),
            _ => (1..=rank).map(|r| 2 * r).collect(),
        }
    }

    fn data(&self, kinds: &[Kind], rank: usize) -> Vec<LADatum> {
        kinds
            .iter()
            .flat_map(|&k| Self::sizes(k, rank).into_iter().flat_map(move |n| la_data(k, n)))
            .collect()
    }

    /// Every Lusztig–Achar datum of so(2r+1), sp(2r), so(2r) for r ≤ max_rank.
    pub fn all_data(&self) -> Vec<LADatum> {
        self.data(&[Kind::B, Kind::C, Kind::D], self.max_rank)
    }

    pub fn special_data(&self) -> Vec<LADatum> {
        self.all_data().into_iter().filter(|d| d.is_special()).collect()
    }

    pub fn special_distinguished(&self) -> Vec<LADatum> {
        self.special_data().into_iter().filter(|d| d.is_distinguished()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionReport {
    pub id: u8,
    pub name: &'static str,
    pub pass: bool,
    pub checked: usize,
    pub failures: Vec<String>,
    pub seconds: f64,
}

impl CriterionReport {
    pub fn line(&self) -> String {
        format!(
            "{} criterion {}: {} ({} checks, {} failures, {:.1}s)",
            if self.pass { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.checked,
            self.failures.len(),
            self.seconds
        )
    }
}

type Check = std::result::Result<(), String>;

fn sweep<T: Sync, F: Fn(&T) -> Check + Sync + Send>(items: &[T], f: F) -> (usize, Vec<String>) {
    let failures: Vec<String> = items.par_iter().filter_map(|x| f(x).err()).collect();
    (items.len(), failures)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(ctx: impl std::fmt::Display) -> impl FnOnce(E) -> String {
    move |e| format!("{ctx}: {e}")
}

pub const NAMES: [&str; 8] = [
    "minimality of ρ⁺(ν₀↑∪η₀) in S(O∨,C̄)",
    "γ(O∨,C̄) equals γ of the rigid cover of the Sommers dual",
    "duality identities and route agreement",
    "Lusztig covers of distinguished duals are birationally rigid",
    "Γ rank equals Ā(O_R∨) rank",
    "Richardson pair equals the saturation pair",
    "point values and exceptional tables",
    "collapse oracle, kernel index, two-row norm inequality",
];

pub fn run_criterion(id: u8, cfg: &SuiteConfig) -> CriterionReport {
    let start = Instant::now();
    let (checked, failures) = match id {
        1 => criterion_minimality(cfg),
        2 => criterion_gamma_consistency(cfg),
        3 => criterion_duality(cfg),
        4 => criterion_rigidity(cfg),
        5 => criterion_gamma_rank(cfg),
        6 => criterion_richardson(cfg),
        7 => criterion_point_values(),
        8 => criterion_kernel(cfg),
        _ => (0, vec![format!("no criterion {id}")]),
    };
    CriterionReport {
        id,
        name: NAMES.get(usize::from(id).wrapping_sub(1)).copied().unwrap_or("unknown"),
        pass: failures.is_empty() && checked > 0,
        checked,
        failures,
        seconds: start.elapsed().as_secs_f64(),
    }
}

pub fn run_all(cfg: &SuiteConfig) -> Vec<CriterionReport> {
    (1..=8).map(|id| run_criterion(id, cfg)).collect()
}

fn criterion_minimality(cfg: &SuiteConfig) -> (usize, Vec<String>) {
    sweep(&cfg.special_distinguished(), |d| {
        let c = verify_min(d).map_err(err(d))?;
        ensure(c.pass, || {
            format!(
                "{d}: candidate {} member {} smaller {:?} equal {:?}",
                c.candidate,
                c.member,
                c.smaller_members.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
                c.equal_norm_others.iter().map(|w| w.to_string()).collect::<Vec<_>>()
            )
        })
    })
}

fn criterion_gamma_consistency(cfg: &SuiteConfig) -> (usize, Vec<String>) {
    sweep(&cfg.special_distinguished(), |d| {
        let a = gamma_la(d).map_err(err(d))?.canonical();
        let o = sommers_dual(d, Route::General).map_err(err(d))?.orbit;
        let b = gamma_rigid_cover(&o).map_err(err(&o))?.canonical();
        ensure(a.doubled == b.doubled, || format!("{d}: γ = {a}, rigid cover of {o} gives {b}"))
    })
}

fn criterion_duality(cfg: &SuiteConfig) -> (usize, Vec<String>) {
    let rank = cfg.max_rank + 1;
    let mut checked = 0;
    let mut failures = Vec::new();
    for kind in [Kind::B, Kind::C, Kind::D] {
        for n in SuiteConfig::sizes(kind, rank) {
            let orbits: Vec<Orbit> = match enumerate_orbits(kind, n) {
                Ok(o) => o,
                Err(e) => {
                    failures.push(format!("{}: {e}", kind.algebra(n)));
                    continue;
                }
            };
            let (c, f) = sweep(&orbits, |o| {
                let d1 = bvls_dual(o).map_err(err(o))?;
                let d3 = bvls_dual(&bvls_dual(&d1).map_err(err(&d1))?).map_err(err(&d1))?;
                ensure(d1.same_partition(&d3), || format!("d³ ≠ d at {o}: {d1} vs {d3}"))?;
                for p in &orbits {
                    if p.partition != o.partition && o.partition.dominates(&p.partition).unwrap_or(false) {
                        let dp = bvls_dual(p).map_err(err(p))?;
                        ensure(dp.partition.dominates(&d1.partition).unwrap_or(false), || {
                            format!("order reversal fails for {p} ≤ {o}: {dp} vs {d1}")
                        })?;
                    }
                }
                Ok(())
            });
            checked += c;
            failures.extend(f);
            let data = la_data(kind, n);
            let (c, f) = sweep(&data, |d| {
                let g = sommers_dual(d, Route::General).map_err(err(d))?.orbit;
                if d.nu().is_empty() {
                    let b = bvls_dual(&d.orbit().map_err(err(d))?).map_err(err(d))?;
                    ensure(g.same_partition(&b), || format!("d_S(⟨∅⟩λ) ≠ d(λ) at {d}: {g} vs {b}"))?;
                }
                let b = sommers_dual(d, Route::Blocks).map_err(err(d))?.orbit;
                ensure(g == b, || format!("general and block routes differ at {d}: {g} vs {b}"))?;
                if d.is_distinguished() {
                    let s = sommers_dual(d, Route::Distinguished).map_err(err(d))?.orbit;
                    ensure(g == s, || format!("general and distinguished routes differ at {d}: {g} vs {s}"))?;
                }
                Ok(())
            });
            checked += c;
            failures.extend(f);
            let mut images: Vec<(Orbit, String)> = data
                .iter()
                .filter(|d| d.is_special() && d.is_distinguished())
                .filter_map(|d| sommers_dual(d, Route::General).ok().map(|s| (s.orbit, d.to_string())))
                .collect();
            images.sort();
            checked += images.len();
            for w in images.windows(2) {
                if w[0].0 == w[1].0 {
                    failures.push(format!("d_S not injective: {} and {} both give {}", w[0].1, w[1].1, w[0].0));
                }
            }
        }
    }
    (checked, failures)
}

fn criterion_rigidity(cfg: &SuiteConfig) -> (usize, Vec<String>) {
    sweep(&cfg.special_distinguished(), |d| {
        let o = sommers_dual(d, Route::General).map_err(err(d))?.orbit;
        let f = rigidity(&CoverSpec::lusztig(o.clone()));
        ensure(f.birationally_rigid, || format!("{d}: Lusztig cover of {o} fails rigidity {f:?}"))
    })
}

fn criterion_gamma_rank(cfg: &SuiteConfig) -> (usize, Vec<String>) {
    sweep(&cfg.special_data(), |d| {
        let (g, _) = gamma_group_rank(d).map_err(err(d))?;
        let r = abar_r_rank(d).map_err(err(d))?;
        ensure(g == r, || format!("{d}: Γ rank {g}, Ā(O_R∨) rank {r}"))?;
        for (a, flags, birational) in step_report(d).map_err(err(d))? {
            ensure(flags.abar_changes == !flags.bind_birational, || {
                format!("{d}: step gl({a}) has Ā change {} and birational flag {}", flags.abar_changes, flags.bind_birational)
            })?;
            ensure(flags.bind_birational == birational, || {
                format!("{d}: step gl({a}) predicted birational {} but induction gives {birational}", flags.bind_birational)
            })?;
        }
        if d.nu().is_empty() {
            let dm = d_map(d).map_err(err(d))?;
            let expected = 1usize << abar_rank(d.kind(), d.lambda());
            ensure(dm.degree == expected, || format!("{d}: D-cover degree {} expected {expected}", dm.degree))?;
        }
        Ok(())
    })
}

fn criterion_richardson(cfg: &SuiteConfig) -> (usize, Vec<String>) {
    let (checked, mut failures) = sweep(&cfg.special_data(), |d| {
        let r = richardson_pair(d).map_err(err(d))?;
        let m = ms_lift(d).map_err(err(d))?;
        ensure(r == m, || format!("{d}: Richardson {r} vs saturation {m}"))
    });
    match witness_pair() {
        Ok((r, m)) => {
            if !(r == "[5,5,3,3]" && m == "[5,4,4,3]") {
                failures.push(format!("non-special witness: Richardson {r}, saturation {m}"));
            }
        }
        Err(e) => failures.push(format!("non-special witness: {e}")),
    }
    (checked + 1, failures)
}

/// The first factors of the Richardson pair and of the saturation pair for ⟨[5,1]⟩[5,4,4,3,1].
pub fn witness_pair() -> crate::Result<(String, String)> {
    let d: LADatum = "B:<[5,1]>[5,4,4,3,1]".parse()?;
    let r = richardson_pair(&d)?;
    let m = ms_lift(&d)?;
    Ok((r.factor1.2.to_string(), m.factor1.2.to_string()))
}

fn criterion_point_values() -> (usize, Vec<String>) {
    let mut checked = 0;
    let mut failures = Vec::new();
    let mut check = |ok: bool, msg: String| {
        checked += 1;
        if !ok {
            failures.push(msg);
        }
    };
    match "B:<[5,1]>[5,4,4,3,1]".parse::<LADatum>() {
        Ok(d) => {
            match gamma_la(&d) {
                Ok(g) => {
                    let s = g.to_string();
                    check(s == "(5/2,3/2,3/2,3/2,1/2,1/2,1/2,1/2)", format!("γ = {s}"));
                }
                Err(e) => check(false, format!("γ: {e}")),
            }
            match d_map(&d) {
                Ok(dm) => {
                    let base = dm.cover.base.to_string();
                    check(base == "C:[4,4,4,2,2]" && dm.degree == 2, format!("D gives degree {} over {base}", dm.degree));
                }
                Err(e) => check(false, format!("D: {e}")),
            }
        }
        Err(e) => check(false, format!("parse: {e}")),
    }
    for g in Group::ALL {
        match verify_tables(g) {
            Ok(r) => {
                for res in &r.results {
                    check(res.pass, format!("{g} check {} {}: {}", res.check, res.subject, res.detail));
                }
            }
            Err(e) => check(false, format!("{g}: {e}")),
        }
    }
    (checked, failures)
}

/// Dominance maximum among partitions of the kind's type dominated by λ, by exhaustive search.
pub fn brute_collapse(lam: &Partition, kind: Kind) -> Option<Partition> {
    let below: Vec<Partition> = partitions_of_type(kind, lam.size())
        .into_iter()
        .filter(|p| lam.dominates(p).unwrap_or(false))
        .collect();
    below.iter().find(|p| below.iter().all(|q| p.dominates(q).unwrap_or(false))).cloned()
}

fn criterion_kernel(cfg: &SuiteConfig) -> (usize, Vec<String>) {
    let mut checked = 0;
    let mut failures = Vec::new();
    let all: Vec<(Kind, Partition)> = (1..=cfg.collapse_max)
        .flat_map(|n| {
            [Kind::B, Kind::C, Kind::D]
                .into_iter()
                .filter(move |k| k.size_ok(n))
                .flat_map(move |k| partitions(n).into_iter().map(move |p| (k, p)))
        })
        .collect();
    let (c, f) = sweep(&all, |(k, p)| {
        let fast = p.collapse(*k).map_err(err(p))?;
        let slow = brute_collapse(p, *k);
        ensure(Some(&fast) == slow.as_ref(), || format!("{} collapse of {p}: {fast} vs oracle {slow:?}", k.letter()))
    });
    checked += c;
    failures.extend(f);
    let orbits: Vec<Orbit> = [Kind::B, Kind::C, Kind::D]
        .into_iter()
        .flat_map(|k| {
            SuiteConfig::sizes(k, cfg.max_rank + 1).into_iter().flat_map(move |n| enumerate_orbits(k, n).unwrap_or_default())
        })
        .collect();
    let (c, f) = sweep(&orbits, |o| {
        let a = a_eps(o.kind, &o.partition).order();
        let n = kernel_n(o.kind, &o.partition).order();
        let r = abar_rank(o.kind, &o.partition);
        ensure(a.is_multiple_of(n) && a / n == 1 << r, || format!("{o}: |A^ε| = {a}, |N| = {n}, Ā rank {r}"))
    });
    checked += c;
    failures.extend(f);
    let pairs: Vec<(usize, usize)> =
        (1..=cfg.two_row_max).flat_map(|q1| (1..=q1).map(move |q2| (q1, q2))).collect();
    let (c, f) = sweep(&pairs, |&(q1, q2)| {
        let q = Partition::from_unsorted([q1, q2]);
        let up = q.uparrow2().map_err(err(&q))?;
        let a = rho_plus(Kind::A, &q, None).map_err(err(&q))?.norm_sq();
        let b = rho_plus(Kind::A, &up, None).map_err(err(&up))?.norm_sq();
        ensure(a < b, || format!("‖ρ⁺({q})‖² = {a} is not below ‖ρ⁺({up})‖² = {b}"))
    });
    checked += c;
    failures.extend(f);
    (checked, failures)
}
