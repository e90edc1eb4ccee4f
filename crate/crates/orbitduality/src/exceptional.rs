//! Exceptional-type tables with their consistency checks against root-system data.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

type Q = Ratio<i64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Group {
    G2,
    F4,
    E6,
    E7,
    E8,
}

impl Group {
    pub const ALL: [Group; 5] = [Group::G2, Group::F4, Group::E6, Group::E7, Group::E8];

    pub fn rank(self) -> usize {
        match self {
            Group::G2 => 2,
            Group::F4 => 4,
            Group::E6 => 6,
            Group::E7 => 7,
            Group::E8 => 8,
        }
    }

    fn file_stem(self) -> &'static str {
        match self {
            Group::G2 => "g2",
            Group::F4 => "f4",
            Group::E6 => "e6",
            Group::E7 => "e7",
            Group::E8 => "e8",
        }
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.file_stem().to_uppercase())
    }
}

impl FromStr for Group {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "g2" => Ok(Group::G2),
            "f4" => Ok(Group::F4),
            "e6" => Ok(Group::E6),
            "e7" => Ok(Group::E7),
            "e8" => Ok(Group::E8),
            _ => Err(Error::UnknownKey(format!("group {s}"))),
        }
    }
}

/// One row of a special-distinguished table. Continuation rows (a further Sommers datum in the
/// same class) carry only `m_orbit` and `gamma_m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExceptionalRow {
    pub orbit_dual: String,
    pub m_orbit: String,
    pub d_s: Option<String>,
    pub gamma_m: String,
    pub gamma_la: Option<String>,
    pub gamma_d: Option<String>,
    pub r_o: Option<String>,
}

/// One row of a Γ-table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaRow {
    pub datum: String,
    pub orbit: String,
    pub levi: String,
    pub r_dual: String,
    pub abar_r: String,
    pub a_l: String,
    pub a: String,
    pub gamma: String,
    pub method: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table<R> {
    pub group: Group,
    pub title: String,
    pub rows: Vec<R>,
}

fn builtin(name: &str) -> Option<&'static str> {
    Some(match name {
        "la_g2" => include_str!("../tables/la_g2.json"),
        "la_f4" => include_str!("../tables/la_f4.json"),
        "la_e6" => include_str!("../tables/la_e6.json"),
        "la_e7" => include_str!("../tables/la_e7.json"),
        "la_e8" => include_str!("../tables/la_e8.json"),
        "gamma_g2" => include_str!("../tables/gamma_g2.json"),
        "gamma_f4" => include_str!("../tables/gamma_f4.json"),
        "gamma_e6" => include_str!("../tables/gamma_e6.json"),
        "gamma_e7" => include_str!("../tables/gamma_e7.json"),
        "gamma_e8" => include_str!("../tables/gamma_e8.json"),
        _ => return None,
    })
}

/// Table data directory override.
pub const TABLES_ENV: &str = "ORBITDUALITY_TABLES";

fn load<R: for<'de> Deserialize<'de>>(name: &str) -> Result<Table<R>> {
    let text = match std::env::var_os(TABLES_ENV) {
        Some(dir) => {
            let path = PathBuf::from(dir).join(format!("{name}.json"));
            std::fs::read_to_string(&path).map_err(|e| Error::Table(format!("{}: {e}", path.display())))?
        }
        None => builtin(name).ok_or_else(|| Error::UnknownKey(name.into()))?.to_string(),
    };
    serde_json::from_str(&text).map_err(|e| Error::Table(format!("{name}: {e}")))
}

pub fn la_table(group: Group) -> Result<Table<ExceptionalRow>> {
    load(&format!("la_{}", group.file_stem()))
}

pub fn gamma_table(group: Group) -> Result<Table<GammaRow>> {
    load(&format!("gamma_{}", group.file_stem()))
}

/// Rows of the special-distinguished table for `orbit_dual`, optionally restricted to one Sommers
/// datum by its `m_orbit` label. Continuation rows inherit the class columns of their head row.
pub fn table_lookup(group: Group, orbit_dual: &str, m_orbit: Option<&str>) -> Result<Vec<ExceptionalRow>> {
    let rows: Vec<ExceptionalRow> = la_classes(&la_table(group)?.rows)
        .into_iter()
        .flat_map(|class| {
            let head = class[0].clone();
            class
                .into_iter()
                .map(move |r| ExceptionalRow {
                    d_s: head.d_s.clone(),
                    gamma_la: head.gamma_la.clone(),
                    gamma_d: head.gamma_d.clone(),
                    r_o: head.r_o.clone(),
                    ..r
                })
        })
        .filter(|r| r.orbit_dual == orbit_dual && m_orbit.is_none_or(|m| r.m_orbit == m))
        .collect();
    if rows.is_empty() {
        return Err(Error::UnknownKey(format!("{group} {orbit_dual} {}", m_orbit.unwrap_or(""))));
    }
    Ok(rows)
}

pub fn gamma_lookup(group: Group, datum: &str) -> Result<GammaRow> {
    gamma_table(group)?
        .rows
        .into_iter()
        .find(|r| r.datum == datum)
        .ok_or_else(|| Error::UnknownKey(format!("{group} Γ-table {datum}")))
}

/// Splits rows into Lusztig–Achar classes: a head row followed by its continuation rows.
fn la_classes(rows: &[ExceptionalRow]) -> Vec<Vec<ExceptionalRow>> {
    let mut out: Vec<Vec<ExceptionalRow>> = Vec::new();
    for r in rows {
        match (&r.gamma_la, out.last_mut()) {
            (None, Some(last)) => last.push(r.clone()),
            _ => out.push(vec![r.clone()]),
        }
    }
    out
}

/// Parses "(1,1,2,2)/4" or "(1,0)".
pub fn parse_fund_vector(s: &str) -> Result<Vec<Q>> {
    let bad = || Error::Parse(format!("fundamental-weight vector {s:?}"));
    let s = s.trim();
    let (body, den) = match s.rsplit_once(")/") {
        Some((b, d)) => (format!("{b})"), d.trim().parse::<i64>().map_err(|_| bad())?),
        None => (s.to_string(), 1),
    };
    let inner = body.strip_prefix('(').and_then(|b| b.strip_suffix(')')).ok_or_else(bad)?;
    inner
        .split(',')
        .map(|x| x.trim().parse::<i64>().map(|n| Q::new(n, den)).map_err(|_| bad()))
        .collect()
}

/// Dynkin data: simple root squared lengths and bonds, in Bourbaki numbering.
fn dynkin(group: Group) -> (Vec<i64>, Vec<(usize, usize)>) {
    let e_edges = |n: usize| {
        let mut e = vec![(0, 2), (2, 3), (3, 4), (1, 3)];
        e.extend((4..n - 1).map(|i| (i, i + 1)));
        e
    };
    match group {
        Group::G2 => (vec![2, 6], vec![(0, 1)]),
        Group::F4 => (vec![4, 4, 2, 2], vec![(0, 1), (1, 2), (2, 3)]),
        Group::E6 => (vec![2; 6], e_edges(6)),
        Group::E7 => (vec![2; 7], e_edges(7)),
        Group::E8 => (vec![2; 8], e_edges(8)),
    }
}

fn invert(m: &[Vec<Q>]) -> Option<Vec<Vec<Q>>> {
    let n = m.len();
    let mut a: Vec<Vec<Q>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| Q::from_integer(i64::from(i == j))));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| a[r][c] != Q::from_integer(0))?;
        a.swap(c, p);
        let pivot = a[c][c];
        for x in a[c].iter_mut() {
            *x /= pivot;
        }
        for r in 0..n {
            if r != c && a[r][c] != Q::from_integer(0) {
                let f = a[r][c];
                for k in 0..2 * n {
                    let v = a[c][k];
                    a[r][k] -= f * v;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

fn determinant(m: &[Vec<Q>]) -> Q {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = Q::from_integer(1);
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| a[r][c] != Q::from_integer(0)) else {
            return Q::from_integer(0);
        };
        if p != c {
            a.swap(c, p);
            det = -det;
        }
        det *= a[c][c];
        for r in c + 1..n {
            let f = a[r][c] / a[c][c];
            for k in c..n {
                let v = a[c][k];
                a[r][k] -= f * v;
            }
        }
    }
    det
}

/// Root data for an exceptional group G together with its dual root system, which carries the
/// subsystems M∨ ⊂ G∨.
#[derive(Debug, Clone)]
pub struct RootSystemData {
    pub group: Group,
    /// Cartan matrix of G, entry (i, j) = ⟨α_j, α_i∨⟩.
    pub cartan: Vec<Vec<i64>>,
    /// Positive roots of G∨ in simple-coroot coordinates.
    pub dual_positive_roots: Vec<Vec<i64>>,
    /// Inner products of the simple roots of G∨.
    pub dual_inner: Vec<Vec<Q>>,
    /// Gram matrix of the fundamental weights of G.
    pub weight_gram: Vec<Vec<Q>>,
}

fn positive_roots(cartan: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let k = cartan.len();
    let simple: Vec<Vec<i64>> = (0..k).map(|i| (0..k).map(|j| i64::from(i == j)).collect()).collect();
    let mut all = simple.clone();
    let mut frontier = simple;
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for r in &frontier {
            for i in 0..k {
                let pairing: i64 = (0..k).map(|j| r[j] * cartan[i][j]).sum();
                let mut p = 0;
                let mut s = r.clone();
                loop {
                    s[i] -= 1;
                    if all.contains(&s) {
                        p += 1;
                    } else {
                        break;
                    }
                }
                if p - pairing > 0 {
                    let mut t = r.clone();
                    t[i] += 1;
                    if !all.contains(&t) {
                        all.push(t.clone());
                        next.push(t);
                    }
                }
            }
        }
        frontier = next;
    }
    all.sort_by_key(|r| (r.iter().sum::<i64>(), r.clone()));
    all
}

impl RootSystemData {
    pub fn new(group: Group) -> Result<Self> {
        let (lens, edges) = dynkin(group);
        let k = lens.len();
        let mut inner = vec![vec![Q::from_integer(0); k]; k];
        for i in 0..k {
            inner[i][i] = Q::from_integer(lens[i]);
        }
        for &(i, j) in &edges {
            let v = -Q::new(lens[i].max(lens[j]), 2);
            inner[i][j] = v;
            inner[j][i] = v;
        }
        let cartan: Vec<Vec<i64>> = (0..k)
            .map(|i| (0..k).map(|j| (Q::from_integer(2) * inner[i][j] / inner[i][i]).to_integer()).collect())
            .collect();
        let dual_inner: Vec<Vec<Q>> = (0..k)
            .map(|i| (0..k).map(|j| Q::from_integer(4) * inner[i][j] / (inner[i][i] * inner[j][j])).collect())
            .collect();
        let dual_cartan: Vec<Vec<i64>> = (0..k).map(|i| (0..k).map(|j| cartan[j][i]).collect()).collect();
        let d: Vec<Q> = (0..k).map(|i| inner[i][i] / 2).collect();
        let inv = invert(&inner).ok_or_else(|| Error::Table(format!("{group}: singular inner product")))?;
        let weight_gram: Vec<Vec<Q>> = (0..k).map(|i| (0..k).map(|j| d[i] * inv[i][j] * d[j]).collect()).collect();
        let data = RootSystemData { group, cartan, dual_positive_roots: positive_roots(&dual_cartan), dual_inner, weight_gram };
        if !data.gram_positive_definite() {
            return Err(Error::Table(format!("{group}: weight Gram matrix not positive definite")));
        }
        Ok(data)
    }

    /// Sylvester's criterion on the leading minors.
    pub fn gram_positive_definite(&self) -> bool {
        let g = &self.weight_gram;
        let n = g.len();
        (0..n).all(|i| (0..n).all(|j| g[i][j] == g[j][i]))
            && (1..=n).all(|m| {
                let minor: Vec<Vec<Q>> = g[..m].iter().map(|r| r[..m].to_vec()).collect();
                determinant(&minor) > Q::from_integer(0)
            })
    }

    pub fn norm_sq(&self, c: &[Q]) -> Q {
        let g = &self.weight_gram;
        let mut s = Q::from_integer(0);
        for i in 0..c.len() {
            for j in 0..c.len() {
                s += c[i] * g[i][j] * c[j];
            }
        }
        s
    }

    pub fn rho(&self) -> Vec<Q> {
        vec![Q::from_integer(1); self.cartan.len()]
    }

    fn dual_root_norm(&self, r: &[i64]) -> Q {
        let mut s = Q::from_integer(0);
        for i in 0..r.len() {
            for j in 0..r.len() {
                s += Q::from_integer(r[i] * r[j]) * self.dual_inner[i][j];
            }
        }
        s
    }

    fn dual_ip(&self, a: &[i64], b: &[i64]) -> Q {
        let mut s = Q::from_integer(0);
        for i in 0..a.len() {
            for j in 0..b.len() {
                s += Q::from_integer(a[i] * b[j]) * self.dual_inner[i][j];
            }
        }
        s
    }

    /// Cartan type of a set of positive roots of G∨ closed under the induced positive system.
    pub fn classify(&self, roots: &[Vec<i64>]) -> SubsystemType {
        let is_sum = |r: &Vec<i64>| {
            roots.iter().any(|a| {
                let b: Vec<i64> = r.iter().zip(a).map(|(x, y)| x - y).collect();
                b.iter().all(|&x| x >= 0) && b.iter().any(|&x| x > 0) && roots.contains(&b)
            })
        };
        let simple: Vec<&Vec<i64>> = roots.iter().filter(|r| !is_sum(r)).collect();
        let n = simple.len();
        let mut comp: Vec<usize> = (0..n).collect();
        fn find(c: &mut Vec<usize>, i: usize) -> usize {
            if c[i] != i {
                let r = find(c, c[i]);
                c[i] = r;
            }
            c[i]
        }
        for i in 0..n {
            for j in i + 1..n {
                if self.dual_ip(simple[i], simple[j]) != Q::from_integer(0) {
                    let (a, b) = (find(&mut comp, i), find(&mut comp, j));
                    comp[a] = b;
                }
            }
        }
        let ambient_max = self.dual_positive_roots.iter().map(|r| self.dual_root_norm(r)).max().unwrap();
        let mut out = SubsystemType::default();
        let roots_by_comp = |c: usize, comp: &mut Vec<usize>| -> Vec<&Vec<i64>> {
            let members: Vec<usize> = (0..n).filter(|&i| find(comp, i) == c).collect();
            roots
                .iter()
                .filter(|r| members.iter().any(|&i| self.dual_ip(r, simple[i]) != Q::from_integer(0)))
                .collect()
        };
        let heads: Vec<usize> = (0..n).filter(|&i| find(&mut comp, i) == i).collect();
        for c in heads {
            let rank = (0..n).filter(|&i| find(&mut comp, i) == c).count();
            let rs = roots_by_comp(c, &mut comp);
            let norms: Vec<Q> = rs.iter().map(|r| self.dual_root_norm(r)).collect();
            let long = *norms.iter().max().unwrap();
            let short = *norms.iter().min().unwrap();
            let n_short = norms.iter().filter(|&&x| x == short).count();
            let total = rs.len();
            let label = if long == short {
                let letter = match (rank, total) {
                    (6, 36) => "E",
                    (7, 63) => "E",
                    (8, 120) => "E",
                    (r, t) if r >= 4 && t == r * (r - 1) => "D",
                    _ => "A",
                };
                let tilde = if long < ambient_max { "~" } else { "" };
                format!("{letter}{tilde}{rank}")
            } else if long == short * 3 {
                "G2".to_string()
            } else if total == 24 && rank == 4 {
                "F4".to_string()
            } else if n_short == rank {
                format!("B{rank}")
            } else {
                format!("C{rank}")
            };
            out.add(&label);
        }
        out
    }

    fn pairing(root: &[i64], c: &[Q]) -> Q {
        root.iter().zip(c).map(|(m, x)| x * *m).sum()
    }

    /// Integral and singular subsystem types of γ given in fundamental-weight coordinates.
    pub fn subsystem_classify(&self, gamma: &[Q]) -> Classified {
        let integral: Vec<Vec<i64>> =
            self.dual_positive_roots.iter().filter(|r| Self::pairing(r, gamma).is_integer()).cloned().collect();
        let singular: Vec<Vec<i64>> = self
            .dual_positive_roots
            .iter()
            .filter(|r| Self::pairing(r, gamma) == Q::from_integer(0))
            .cloned()
            .collect();
        Classified { integral_type: self.classify(&integral), singular_type: self.classify(&singular) }
    }
}

/// Multiset of irreducible components, e.g. {"C3": 1, "A1": 1}. Short-root type-A components
/// carry a "~" after the letter; B2 and C2 are both recorded as B2.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SubsystemType(pub BTreeMap<String, usize>);

impl SubsystemType {
    fn add(&mut self, label: &str) {
        let label = if label == "C2" { "B2" } else { label };
        *self.0.entry(label.to_string()).or_default() += 1;
    }

    /// Parses labels like "C3+A1", "2A2", "A1+Ã1", "∅". Parenthesised orbit suffixes such as
    /// "(a1)" are dropped, so a Bala–Carter label yields its pseudo-Levi type.
    pub fn parse(label: &str) -> Result<Self> {
        let mut out = SubsystemType::default();
        let label = label.trim();
        if label.is_empty() || label == "∅" || label == "{0}" {
            return Ok(out);
        }
        for part in label.split('+') {
            let mut s: String = part.trim().trim_end_matches('\'').to_string();
            if let Some(i) = s.find('(') {
                s.truncate(i);
            }
            let digits: String = s.chars().take_while(|c| c.is_ascii_digit()).collect();
            let count = if digits.is_empty() { 1 } else { digits.parse().unwrap() };
            let rest = &s[digits.len()..];
            let (letter, tail) = if let Some(t) = rest.strip_prefix('Ã') {
                ("A~".to_string(), t)
            } else {
                let mut ch = rest.chars();
                let l = ch.next().ok_or_else(|| Error::Parse(format!("type label {label:?}")))?;
                if !"ABCDEFG".contains(l) {
                    return Err(Error::Parse(format!("type label {label:?}")));
                }
                let t = ch.as_str();
                match t.strip_prefix('~') {
                    Some(t2) => (format!("{l}~"), t2),
                    None => (l.to_string(), t),
                }
            };
            tail.parse::<usize>().map_err(|_| Error::Parse(format!("type label {label:?}")))?;
            for _ in 0..count {
                out.add(&format!("{letter}{tail}"));
            }
        }
        Ok(out)
    }

    /// The same type with length markers erased.
    pub fn without_tildes(&self) -> Self {
        let mut out = SubsystemType::default();
        for (k, v) in &self.0 {
            for _ in 0..*v {
                out.add(&k.replace('~', ""));
            }
        }
        out
    }
}

impl fmt::Display for SubsystemType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "∅");
        }
        let mut items: Vec<(&String, &usize)> = self.0.iter().collect();
        items.sort_by(|a, b| b.0.cmp(a.0));
        let parts: Vec<String> = items
            .into_iter()
            .map(|(k, &v)| {
                let k = k.replace("A~", "Ã");
                if v > 1 { format!("{v}{k}") } else { k }
            })
            .collect();
        write!(f, "{}", parts.join("+"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Classified {
    pub integral_type: SubsystemType,
    pub singular_type: SubsystemType,
}

/// Isomorphism class of a small component-group label: "1", "Z2", "S2", "S3", "S4".
fn group_class(label: &str) -> Result<&'static str> {
    match label.trim() {
        "1" => Ok("1"),
        "Z2" | "S2" => Ok("Z2"),
        "S3" => Ok("S3"),
        "S4" => Ok("S4"),
        other => Err(Error::Parse(format!("group label {other:?}"))),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub check: String,
    pub subject: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableReport {
    pub group: Group,
    pub results: Vec<CheckResult>,
}

impl TableReport {
    pub fn pass(&self) -> bool {
        self.results.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.results.iter().filter(|r| !r.pass)
    }
}

fn fmt_vec(v: &[Q]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

/// Runs the table checks: (a) γ(𝕆∨,C̄) = γ(D(𝕆∨,C̄)) on every class; (b) γ(𝕆∨,C̄) is the
/// minimum-norm γ(M∨,𝕆_M∨) of its class; (c) Ā_R∨ ≅ Γ on every Γ-table row. For G2 and F4 each
/// γ(M∨,𝕆_M∨) is also classified and compared with the pseudo-Levi type of its row, and checked
/// for minimality among dominant points of the shell ‖γ‖ ≤ ‖ρ‖ with the same pair of types.
pub fn verify_tables(group: Group) -> Result<TableReport> {
    let data = RootSystemData::new(group)?;
    let table = la_table(group)?;
    let mut results = Vec::new();
    let mut shell: Option<Shell> = None;
    for class in la_classes(&table.rows) {
        let head = &class[0];
        let subject = format!("{} / {}", head.orbit_dual, head.m_orbit);
        let (Some(la), Some(d)) = (&head.gamma_la, &head.gamma_d) else {
            return Err(Error::Table(format!("{group}: class head {subject} lacks γ columns")));
        };
        let la_v = parse_fund_vector(la)?;
        let d_v = parse_fund_vector(d)?;
        results.push(CheckResult {
            check: "a".into(),
            subject: subject.clone(),
            pass: la_v == d_v,
            detail: format!("γ(O∨,C̄) = {la}, γ(D) = {d}"),
        });
        let ms: Vec<(String, Vec<Q>)> =
            class.iter().map(|r| Ok((r.m_orbit.clone(), parse_fund_vector(&r.gamma_m)?))).collect::<Result<_>>()?;
        let min_norm = ms.iter().map(|(_, v)| data.norm_sq(v)).min().unwrap();
        let minimisers: Vec<&(String, Vec<Q>)> = ms.iter().filter(|(_, v)| data.norm_sq(v) == min_norm).collect();
        results.push(CheckResult {
            check: "b".into(),
            subject: subject.clone(),
            pass: minimisers.len() == 1 && minimisers[0].1 == la_v,
            detail: format!(
                "norms {}",
                ms.iter().map(|(m, v)| format!("{m}: {}", data.norm_sq(v))).collect::<Vec<_>>().join(", ")
            ),
        });
        if matches!(group, Group::G2 | Group::F4) {
            for (m, v) in &ms {
                let subject = format!("{} / {m}", head.orbit_dual);
                let expected = SubsystemType::parse(m)?;
                let got = data.subsystem_classify(v);
                results.push(CheckResult {
                    check: "classify".into(),
                    subject: subject.clone(),
                    pass: got.integral_type.without_tildes() == expected.without_tildes()
                        && got.integral_type.0.values().sum::<usize>() == expected.0.values().sum::<usize>(),
                    detail: format!("integral {} singular {}, expected {m}", got.integral_type, got.singular_type),
                });
                let shell = shell.get_or_insert_with(|| Shell::new(&data));
                let (same, competitors) = shell_minimality(&data, shell, v);
                results.push(CheckResult {
                    check: "shell (partial)".into(),
                    subject,
                    pass: competitors.is_empty(),
                    detail: if competitors.is_empty() {
                        format!("minimal among {same} dominant shell points of the same types")
                    } else {
                        format!("competitors {}", competitors.iter().map(|c| fmt_vec(c)).collect::<Vec<_>>().join(" "))
                    },
                });
            }
        }
    }
    for row in gamma_table(group)?.rows {
        let abar = group_class(&row.abar_r)?;
        let gamma = group_class(&row.gamma)?;
        results.push(CheckResult {
            check: "c".into(),
            subject: row.datum.clone(),
            pass: abar == gamma,
            detail: format!("Ā_R∨ = {}, Γ = {}", row.abar_r, row.gamma),
        });
    }
    Ok(TableReport { group, results })
}

fn lcm(a: i64, b: i64) -> i64 {
    let (mut x, mut y) = (a, b);
    while y != 0 {
        (x, y) = (y, x % y);
    }
    a / x * b
}

fn lcm_of_marks(group: Group) -> i64 {
    match group {
        Group::G2 => 6,
        Group::F4 => 12,
        Group::E6 => 6,
        Group::E7 => 12,
        Group::E8 => 60,
    }
}

/// Dominant points c ∈ (1/L)ℤ^k with ‖c‖ ≤ ‖ρ‖, L the least common multiple of the highest-root
/// marks, so every point with a full-rank integral subsystem is included. Each point carries its
/// norm and the bitmasks of its integral and singular positive roots of G∨.
struct Shell {
    l: i64,
    points: Vec<(Vec<i64>, Q, u128, u128)>,
}

impl Shell {
    fn new(data: &RootSystemData) -> Self {
        let l = lcm_of_marks(data.group);
        let k = data.cartan.len();
        let den = data.weight_gram.iter().flatten().fold(1i64, |a, x| lcm(a, *x.denom()));
        let gram: Vec<Vec<i64>> =
            data.weight_gram.iter().map(|r| r.iter().map(|x| (x * den).to_integer()).collect()).collect();
        let norm = |z: &[i64]| -> i64 {
            let mut s = 0;
            for i in 0..z.len() {
                for j in 0..z.len() {
                    s += z[i] * gram[i][j] * z[j];
                }
            }
            s
        };
        let bound = norm(&vec![l; k]);
        let mut raw = Vec::new();
        let mut cur = vec![0i64; k];
        fn rec(i: usize, k: usize, bound: i64, cur: &mut Vec<i64>, norm: &dyn Fn(&[i64]) -> i64, out: &mut Vec<Vec<i64>>) {
            if i == k {
                out.push(cur.clone());
                return;
            }
            cur[i] = 0;
            while norm(cur) <= bound {
                rec(i + 1, k, bound, cur, norm, out);
                cur[i] += 1;
            }
            cur[i] = 0;
        }
        rec(0, k, bound, &mut cur, &norm, &mut raw);
        let points = raw
            .into_iter()
            .map(|z| {
                let mut integral = 0u128;
                let mut singular = 0u128;
                for (t, r) in data.dual_positive_roots.iter().enumerate() {
                    let p: i64 = r.iter().zip(&z).map(|(m, x)| m * x).sum();
                    if p % l == 0 {
                        integral |= 1 << t;
                    }
                    if p == 0 {
                        singular |= 1 << t;
                    }
                }
                let n = Q::new(norm(&z), den * l * l);
                (z, n, integral, singular)
            })
            .collect();
        Shell { l, points }
    }

    fn masks(&self, data: &RootSystemData, gamma: &[Q]) -> (u128, u128) {
        let mut integral = 0u128;
        let mut singular = 0u128;
        for (t, r) in data.dual_positive_roots.iter().enumerate() {
            let p = RootSystemData::pairing(r, gamma);
            if p.is_integer() {
                integral |= 1 << t;
            }
            if p == Q::from_integer(0) {
                singular |= 1 << t;
            }
        }
        (integral, singular)
    }
}

/// Minimality of γ among dominant shell points with the same (integral, singular) types. Returns
/// the number of such points and the competitors with norm at most ‖γ‖.
fn shell_minimality(data: &RootSystemData, shell: &Shell, gamma: &[Q]) -> (usize, Vec<Vec<Q>>) {
    let target = data.subsystem_classify(gamma);
    let mut cache: HashMap<(u128, u128), bool> = HashMap::new();
    let mut same = 0;
    let mut competitors = Vec::new();
    let n = data.norm_sq(gamma);
    let own = shell.masks(data, gamma);
    cache.insert(own, true);
    for (z, norm, integral, singular) in &shell.points {
        let matches = *cache.entry((*integral, *singular)).or_insert_with(|| {
            let pick = |mask: u128| -> Vec<Vec<i64>> {
                data.dual_positive_roots.iter().enumerate().filter(|(t, _)| mask >> t & 1 == 1).map(|(_, r)| r.clone()).collect()
            };
            Classified { integral_type: data.classify(&pick(*integral)), singular_type: data.classify(&pick(*singular)) }
                == target
        });
        if !matches {
            continue;
        }
        same += 1;
        let c: Vec<Q> = z.iter().map(|&x| Q::new(x, shell.l)).collect();
        if *norm <= n && c.as_slice() != gamma {
            competitors.push(c);
        }
    }
    (same, competitors)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: &[(i64, i64)]) -> Vec<Q> {
        v.iter().map(|&(a, b)| Q::new(a, b)).collect()
    }

    #[test]
    fn root_counts_and_gram() {
        for (g, n) in [(Group::G2, 6), (Group::F4, 24), (Group::E6, 36), (Group::E7, 63), (Group::E8, 120)] {
            let d = RootSystemData::new(g).unwrap();
            assert_eq!(d.dual_positive_roots.len(), n, "{g}");
            assert!(d.gram_positive_definite());
        }
    }

    #[test]
    fn classify_examples() {
        let g2 = RootSystemData::new(Group::G2).unwrap();
        let c = g2.subsystem_classify(&q(&[(1, 1), (1, 1)]));
        assert_eq!(c.integral_type.to_string(), "G2");
        assert_eq!(c.singular_type.to_string(), "∅");
        let c = g2.subsystem_classify(&q(&[(1, 2), (1, 2)]));
        assert_eq!(c.integral_type, SubsystemType::parse("A1+Ã1").unwrap());
        let c = g2.subsystem_classify(&q(&[(1, 1), (1, 3)]));
        assert_eq!(c.integral_type.to_string(), "A2");
        let f4 = RootSystemData::new(Group::F4).unwrap();
        let c = f4.subsystem_classify(&q(&[(0, 1), (1, 2), (0, 1), (1, 1)]));
        assert_eq!(c.integral_type.to_string(), "B4");
        let c = f4.subsystem_classify(&q(&[(1, 2), (0, 1), (1, 2), (1, 2)]));
        assert_eq!(c.integral_type.without_tildes(), SubsystemType::parse("C3+A1").unwrap());
    }

    #[test]
    fn label_parsing() {
        assert_eq!(SubsystemType::parse("C3(a1)+A1").unwrap(), SubsystemType::parse("A1+C3").unwrap());
        assert_eq!(SubsystemType::parse("2A2").unwrap().to_string(), "2A2");
        assert_eq!(SubsystemType::parse("A1+Ã1").unwrap().to_string(), "Ã1+A1");
        assert!(SubsystemType::parse("X3").is_err());
    }

    #[test]
    fn lookup_examples() {
        let rows = table_lookup(Group::G2, "G2(a1)", Some("A1+Ã1")).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].d_s.as_deref(), Some("Ã1"));
        assert_eq!(rows[0].gamma_la.as_deref(), Some("(1,1)/2"));
        assert_eq!(rows[0].r_o.as_deref(), Some("A1"));
        let rows = table_lookup(Group::F4, "F4(a3)", Some("A3+A1")).unwrap();
        assert_eq!(rows[0].d_s.as_deref(), Some("A2+Ã1"));
        assert_eq!(parse_fund_vector(rows[0].gamma_m.as_str()).unwrap(), q(&[(1, 4), (1, 4), (1, 2), (1, 2)]));
        let rows = table_lookup(Group::F4, "F4(a2)", Some("C3+A1")).unwrap();
        assert_eq!(rows[0].gamma_la.as_deref(), Some("(1,0,1,0)"));
        let g = gamma_lookup(Group::G2, "(A1,A1)").unwrap();
        assert_eq!((g.orbit.as_str(), g.gamma.as_str(), g.method.as_str()), ("G2(a1)", "1", "(5)"));
        assert!(table_lookup(Group::G2, "E8", None).is_err());
        assert!(gamma_table(Group::E8).unwrap().rows.is_empty());
    }

    #[test]
    fn f4a2_minimum_is_the_integral_vector() {
        let f4 = RootSystemData::new(Group::F4).unwrap();
        let a = f4.norm_sq(&q(&[(1, 1), (0, 1), (1, 1), (0, 1)]));
        let b = f4.norm_sq(&q(&[(1, 2), (1, 2), (1, 2), (1, 2)]));
        assert!(a < b, "{a} {b}");
    }

    #[test]
    fn all_tables_verify() {
        for g in Group::ALL {
            let r = verify_tables(g).unwrap();
            let fails: Vec<_> = r.failures().collect();
            assert!(fails.is_empty(), "{g}: {fails:#?}");
        }
    }
}
