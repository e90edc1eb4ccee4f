//! Component groups of classical orbits and the marked partitions built on them.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::orbit::{Decoration, Orbit};
use crate::partition::{Kind, Partition};

/// Element of the elementary abelian 2-group spanned by υ_x, x a distinct part of λ^ε.
/// Stored as its support in decreasing order; the product is the symmetric difference.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct TwoElem(Vec<usize>);

impl TwoElem {
    pub fn identity() -> TwoElem {
        TwoElem(Vec::new())
    }

    /// υ_x, with υ₀ the identity.
    pub fn upsilon(x: usize) -> TwoElem {
        if x == 0 {
            TwoElem::identity()
        } else {
            TwoElem(vec![x])
        }
    }

    /// Product of υ_x over the given values; repeated values cancel in pairs.
    pub fn product<I: IntoIterator<Item = usize>>(values: I) -> TwoElem {
        values.into_iter().fold(TwoElem::identity(), |acc, x| acc.mul(&TwoElem::upsilon(x)))
    }

    pub fn mul(&self, other: &TwoElem) -> TwoElem {
        let a: BTreeSet<usize> = self.0.iter().copied().collect();
        let b: BTreeSet<usize> = other.0.iter().copied().collect();
        let mut v: Vec<usize> = a.symmetric_difference(&b).copied().collect();
        v.sort_unstable_by(|x, y| y.cmp(x));
        TwoElem(v)
    }

    pub fn support(&self) -> &[usize] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.0.contains(&x)
    }

    /// Number of υ factors.
    pub fn weight(&self) -> usize {
        self.0.len()
    }

    /// The marking given by the support.
    pub fn to_partition(&self) -> Partition {
        Partition::from_unsorted(self.0.iter().copied())
    }
}

impl fmt::Display for TwoElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let s: Vec<String> = self.0.iter().map(|x| format!("υ{x}")).collect();
        write!(f, "{}", s.join("·"))
    }
}

/// A subgroup given by generators together with its enumerated elements.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TwoSubgroup {
    pub generators: Vec<TwoElem>,
    pub elements: BTreeSet<TwoElem>,
}

impl TwoSubgroup {
    pub fn generated_by<I: IntoIterator<Item = TwoElem>>(gens: I) -> TwoSubgroup {
        let generators: Vec<TwoElem> = gens.into_iter().filter(|g| !g.is_identity()).collect();
        let mut elements = BTreeSet::new();
        elements.insert(TwoElem::identity());
        for g in &generators {
            if elements.contains(g) {
                continue;
            }
            let new: Vec<TwoElem> = elements.iter().map(|e| e.mul(g)).collect();
            elements.extend(new);
        }
        TwoSubgroup { generators, elements }
    }

    pub fn trivial() -> TwoSubgroup {
        TwoSubgroup::generated_by([])
    }

    pub fn contains(&self, e: &TwoElem) -> bool {
        self.elements.contains(e)
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// log₂ of the order.
    pub fn rank(&self) -> usize {
        self.order().trailing_zeros() as usize
    }

    pub fn is_subgroup_of(&self, other: &TwoSubgroup) -> bool {
        self.elements.iter().all(|e| other.contains(e))
    }

    pub fn same_as(&self, other: &TwoSubgroup) -> bool {
        self.elements == other.elements
    }

    pub fn intersection(&self, other: &TwoSubgroup) -> TwoSubgroup {
        TwoSubgroup::generated_by(self.elements.iter().filter(|e| other.contains(e)).cloned())
    }

    /// The coset `g·self`.
    pub fn coset(&self, g: &TwoElem) -> Vec<TwoElem> {
        self.elements.iter().map(|e| e.mul(g)).collect()
    }
}

/// λ^ε: the parts of λ whose parity differs from ε.
pub fn lambda_eps(kind: Kind, lam: &Partition) -> Partition {
    let eps = kind.epsilon();
    Partition::from_unsorted(lam.parts().iter().copied().filter(|x| x % 2 != eps))
}

/// Whether `e` lies in A^ε: every element for C, even-weight elements for B and D.
pub fn in_a_eps(kind: Kind, e: &TwoElem) -> bool {
    kind == Kind::C || e.weight().is_multiple_of(2)
}

/// A^ε as a subgroup on the distinct parts of λ^ε.
pub fn a_eps(kind: Kind, lam: &Partition) -> TwoSubgroup {
    let values = lambda_eps(kind, lam).distinct();
    match kind {
        Kind::C => TwoSubgroup::generated_by(values.iter().map(|&x| TwoElem::upsilon(x))),
        Kind::B | Kind::D => match values.split_first() {
            Some((&x0, rest)) => TwoSubgroup::generated_by(rest.iter().map(|&x| TwoElem::product([x0, x]))),
            None => TwoSubgroup::trivial(),
        },
        Kind::A => TwoSubgroup::trivial(),
    }
}

/// υ̃: product of υ_x over λ^ε with multiplicity.
pub fn upsilon_tilde(kind: Kind, lam: &Partition) -> TwoElem {
    TwoElem::product(lambda_eps(kind, lam).parts().iter().copied())
}

/// Summary of the component-group data of an orbit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupData {
    pub lambda_eps: Partition,
    pub a_rank: usize,
    pub a_ad_rank: usize,
    pub abar_rank: usize,
    pub upsilon_tilde: TwoElem,
    pub s1_nonempty: bool,
    pub markable: Partition,
    /// Set for type A, where every group is trivial.
    pub type_a: bool,
}

pub fn group_data(o: &Orbit) -> GroupData {
    let lam = &o.partition;
    if o.kind == Kind::A {
        return GroupData {
            lambda_eps: Partition::empty(),
            a_rank: 0,
            a_ad_rank: 0,
            abar_rank: 0,
            upsilon_tilde: TwoElem::identity(),
            s1_nonempty: false,
            markable: Partition::empty(),
            type_a: true,
        };
    }
    let a = a_eps(o.kind, lam);
    let ut = upsilon_tilde(o.kind, lam);
    let a_ad_rank = if !ut.is_identity() && a.contains(&ut) { a.rank() - 1 } else { a.rank() };
    GroupData {
        lambda_eps: lambda_eps(o.kind, lam),
        a_rank: a.rank(),
        a_ad_rank,
        abar_rank: abar_rank(o.kind, lam),
        s1_nonempty: !ut.is_identity(),
        upsilon_tilde: ut,
        markable: markable_parts(o.kind, lam),
        type_a: false,
    }
}

/// Rank of A^ad(O).
pub fn a_ad_rank(kind: Kind, lam: &Partition) -> usize {
    if kind == Kind::A {
        return 0;
    }
    let a = a_eps(kind, lam);
    let ut = upsilon_tilde(kind, lam);
    if !ut.is_identity() && a.contains(&ut) {
        a.rank() - 1
    } else {
        a.rank()
    }
}

/// Markable parts: odd x with odd height (B), even x with even height (C), odd x with even
/// height (D).
pub fn markable_parts(kind: Kind, lam: &Partition) -> Partition {
    let (part_parity, ht_parity) = match kind {
        Kind::B => (1, 1),
        Kind::C => (0, 0),
        Kind::D => (1, 0),
        Kind::A => return Partition::empty(),
    };
    Partition::from_unsorted(
        lam.distinct()
            .into_iter()
            .filter(|&x| x % 2 == part_parity && lam.height(x) % 2 == ht_parity),
    )
}

/// Rank of Ā(O) counted by markable parts.
pub fn abar_rank(kind: Kind, lam: &Partition) -> usize {
    let m = markable_parts(kind, lam).len();
    match kind {
        Kind::C => m,
        Kind::B | Kind::D => m.saturating_sub(1),
        Kind::A => 0,
    }
}

/// N = ker(A^ε → Ā(O)) from the interval rule on markable parts.
pub fn kernel_n(kind: Kind, lam: &Partition) -> TwoSubgroup {
    if kind == Kind::A {
        return TwoSubgroup::trivial();
    }
    let marks = markable_parts(kind, lam);
    let mut bounds: Vec<usize> = vec![usize::MAX];
    bounds.extend(marks.parts().iter().copied());
    bounds.push(0);
    let mut gens = Vec::new();
    for x in lambda_eps(kind, lam).distinct() {
        for j in 1..bounds.len() {
            if bounds[j] <= x && x < bounds[j - 1] {
                gens.push(TwoElem::product([x, bounds[j]]));
                break;
            }
        }
    }
    TwoSubgroup::generated_by(gens)
}

/// N for a distinguished datum: υ_{λ_{2i}}υ_{λ_{2i+1}} (B) or υ_{λ_{2i-1}}υ_{λ_{2i}} (C, D).
pub fn kernel_n_distinguished(kind: Kind, lam: &Partition) -> TwoSubgroup {
    let r = lam.len();
    let mut gens = Vec::new();
    let mut i = 1;
    loop {
        let (a, b) = match kind {
            Kind::B => (2 * i, 2 * i + 1),
            _ => (2 * i - 1, 2 * i),
        };
        if a > r {
            break;
        }
        gens.push(TwoElem::product([lam.part(a), lam.part(b)]));
        i += 1;
    }
    TwoSubgroup::generated_by(gens)
}

/// A partition with a multiplicity-free marking ν ⊂ λ.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MarkedPartition {
    pub kind: Kind,
    pub lambda: Partition,
    pub nu: Partition,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decoration: Option<Decoration>,
}

impl MarkedPartition {
    pub fn new(kind: Kind, lambda: Partition, nu: Partition) -> MarkedPartition {
        MarkedPartition { kind, lambda, nu, decoration: None }
    }

    /// ⟨∅⟩λ for an orbit.
    pub fn unmarked(o: &Orbit) -> MarkedPartition {
        MarkedPartition { kind: o.kind, lambda: o.partition.clone(), nu: Partition::empty(), decoration: o.decoration }
    }

    /// η = λ ∖ ν.
    pub fn eta(&self) -> Partition {
        self.lambda.remove(&self.nu).unwrap_or_default()
    }

    /// The element C̃_ν = ∏ υ_{ν_i}.
    pub fn element(&self) -> TwoElem {
        TwoElem::product(self.nu.parts().iter().copied())
    }

    pub fn size(&self) -> usize {
        self.lambda.size()
    }

    pub fn orbit(&self) -> Result<Orbit> {
        Orbit::new(self.kind, self.lambda.clone(), self.decoration)
    }

    /// Same datum with another marking.
    pub fn with_nu(&self, nu: Partition) -> MarkedPartition {
        MarkedPartition { kind: self.kind, lambda: self.lambda.clone(), nu, decoration: self.decoration }
    }
}

impl fmt::Display for MarkedPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:<{}>{}", self.kind, self.nu, self.lambda)?;
        if let Some(d) = self.decoration {
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl MarkedPartition {
    /// Parses `B:<[5,1]>[5,3,1]`, `B:[5,3,1]` (empty marking) or, with `default_kind`,
    /// the same forms without the kind prefix.
    pub fn parse(s: &str, default_kind: Option<Kind>) -> Result<MarkedPartition> {
        let t = s.trim();
        let (kind, rest) = match t.split_once(':') {
            Some((k, r)) => (k.parse::<Kind>()?, r.trim()),
            None => (
                default_kind.ok_or_else(|| Error::Parse(format!("missing kind prefix in {t:?}")))?,
                t,
            ),
        };
        let (nu, rest) = match rest.strip_prefix('<') {
            Some(r) => {
                let (inner, after) =
                    r.split_once('>').ok_or_else(|| Error::Parse(format!("missing > in {t:?}")))?;
                (inner.parse::<Partition>()?, after.trim())
            }
            None => (Partition::empty(), rest),
        };
        let close = rest.rfind(']').ok_or_else(|| Error::Parse(format!("missing ] in {t:?}")))?;
        let lambda: Partition = rest[..=close].parse()?;
        let decoration = match rest[close + 1..].trim() {
            "" => None,
            "I" => Some(Decoration::I),
            "II" => Some(Decoration::II),
            other => return Err(Error::Parse(format!("bad decoration {other:?}"))),
        };
        Ok(MarkedPartition { kind, lambda, nu, decoration })
    }
}

impl FromStr for MarkedPartition {
    type Err = Error;
    fn from_str(s: &str) -> Result<MarkedPartition> {
        MarkedPartition::parse(s, None)
    }
}

/// Flags describing a marked partition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MarkedFlags {
    pub valid: bool,
    pub reduced: bool,
    pub special: bool,
    pub distinguished: bool,
}

/// Checks that ν is a multiplicity-free subset of λ with parts of parity ≠ ε, an even number of
/// them in types B and D, and that λ has the right type.
pub fn validate_marking(m: &MarkedPartition) -> Result<()> {
    if m.kind == Kind::A {
        return Err(Error::UnsupportedKind('A'));
    }
    if !m.lambda.is_type(m.kind) {
        return Err(Error::WrongType { partition: m.lambda.to_string(), kind: m.kind.letter() });
    }
    if !m.nu.is_multiplicity_free() {
        return Err(Error::InvalidMarking(format!("{} has repeated parts", m.nu)));
    }
    if m.lambda.remove(&m.nu).is_err() {
        return Err(Error::InvalidMarking(format!("{} is not contained in {}", m.nu, m.lambda)));
    }
    let eps = m.kind.epsilon();
    if m.nu.parts().iter().any(|x| x % 2 == eps) {
        return Err(Error::InvalidMarking(format!("{} has parts of the wrong parity", m.nu)));
    }
    if m.kind != Kind::C && m.nu.len() % 2 == 1 {
        return Err(Error::InvalidMarking(format!("{} has an odd number of parts", m.nu)));
    }
    if m.decoration.is_some() && !(m.kind == Kind::D && m.lambda.is_very_even()) {
        return Err(Error::InvalidMarking("decoration on a partition that is not very even".into()));
    }
    Ok(())
}

pub fn is_reduced(m: &MarkedPartition) -> bool {
    let marks = markable_parts(m.kind, &m.lambda);
    validate_marking(m).is_ok() && m.nu.parts().iter().all(|&x| marks.contains(x))
}

/// No part x of parity ε' (even for B and D, odd for C) with ht_ν(x) odd and ht_λ(x) odd (B)
/// or even (C, D).
pub fn is_special_marked(m: &MarkedPartition) -> bool {
    let (bad_parity, ht_parity) = match m.kind {
        Kind::B => (0, 1),
        Kind::C => (1, 0),
        Kind::D => (0, 0),
        Kind::A => return true,
    };
    !m.lambda.distinct().into_iter().any(|x| {
        x % 2 == bad_parity && m.nu.height(x) % 2 == 1 && m.lambda.height(x) % 2 == ht_parity
    })
}

/// ν and η multiplicity-free, λ = λ^ε, and every part of multiplicity 2 is marked.
pub fn is_distinguished_marked(m: &MarkedPartition) -> bool {
    let eta = m.eta();
    let mult_free = m.nu.is_multiplicity_free() && eta.is_multiplicity_free();
    let eps = m.kind.epsilon();
    let all_eps = m.lambda.parts().iter().all(|x| x % 2 != eps);
    let mults_ok = m.lambda.multiplicities().into_iter().all(|(x, c)| c == 1 || (c == 2 && m.nu.contains(x)));
    mult_free && all_eps && mults_ok
}

pub fn classify_marked(m: &MarkedPartition) -> MarkedFlags {
    let valid = validate_marking(m).is_ok();
    MarkedFlags {
        valid,
        reduced: valid && is_reduced(m),
        special: valid && is_special_marked(m),
        distinguished: valid && is_distinguished_marked(m),
    }
}

/// θ basis elements of a distinguished λ.
pub fn thetas(kind: Kind, lam: &Partition) -> Vec<TwoElem> {
    let r = lam.len();
    let count = match kind {
        Kind::B => r.saturating_sub(1) / 2,
        Kind::C => r / 2,
        Kind::D => (r / 2).saturating_sub(1),
        Kind::A => 0,
    };
    (1..=count)
        .map(|i| match kind {
            Kind::B => TwoElem::product([lam.part(2 * i - 1), lam.part(2 * i + 1)]),
            _ => TwoElem::product([lam.part(2 * i), lam.part(2 * i + 2)]),
        })
        .collect()
}

/// The lifts θ̃ used for the splitting s̃.
pub fn theta_tildes(kind: Kind, lam: &Partition) -> Vec<TwoElem> {
    let count = thetas(kind, lam).len();
    (1..=count)
        .map(|i| match kind {
            Kind::B => TwoElem::product([lam.part(2 * i - 1), lam.part(2 * i)]),
            _ => TwoElem::product([lam.part(2 * i), lam.part(2 * i + 1)]),
        })
        .collect()
}

/// Coordinates of the Ā-class of `e` in the θ̄ basis.
pub fn theta_coordinates(kind: Kind, lam: &Partition, e: &TwoElem) -> Result<Vec<bool>> {
    let th = thetas(kind, lam);
    let n = kernel_n(kind, lam);
    let mut found: Option<Vec<bool>> = None;
    for mask in 0u64..(1u64 << th.len()) {
        let mut prod = e.clone();
        for (i, t) in th.iter().enumerate() {
            if mask >> i & 1 == 1 {
                prod = prod.mul(t);
            }
        }
        if n.contains(&prod) {
            if found.is_some() {
                return Err(Error::Precondition("θ̄ to be independent".into()));
            }
            found = Some((0..th.len()).map(|i| mask >> i & 1 == 1).collect());
        }
    }
    found.ok_or_else(|| Error::Precondition(format!("{e} to lie in the span of θ̄")))
}

/// The split λ = ν₀ ∪ η₀ attached to C₀ = s̃(C̄).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CZero {
    pub c0: TwoElem,
    pub nu0: Partition,
    pub eta0: Partition,
}

pub fn c_zero(m: &MarkedPartition) -> Result<CZero> {
    validate_marking(m)?;
    if !is_distinguished_marked(m) {
        return Err(Error::NotDistinguished);
    }
    let coords = theta_coordinates(m.kind, &m.lambda, &m.element())?;
    let tt = theta_tildes(m.kind, &m.lambda);
    let mut c0 = TwoElem::identity();
    for (c, t) in coords.iter().zip(&tt) {
        if *c {
            c0 = c0.mul(t);
        }
    }
    let nu0 = c0.to_partition();
    let eta0 = m.lambda.remove(&nu0)?;
    Ok(CZero { c0, nu0, eta0 })
}

/// All markings whose class in Ā(O) equals that of `m`.
pub fn lifts_of(m: &MarkedPartition) -> Vec<MarkedPartition> {
    let n = kernel_n(m.kind, &m.lambda);
    let mut out: Vec<MarkedPartition> =
        n.coset(&m.element()).into_iter().map(|e| m.with_nu(e.to_partition())).collect();
    out.sort();
    out
}

/// All reduced marked partitions of the given kind and size. Very even type-D partitions carry
/// both decorations.
pub fn reduced_marked_partitions(kind: Kind, n: usize) -> Vec<MarkedPartition> {
    let mut out = Vec::new();
    let Ok(orbits) = crate::orbit::enumerate_orbits(kind, n) else { return out };
    for o in orbits {
        let marks = markable_parts(kind, &o.partition);
        let k = marks.len();
        for mask in 0u64..(1u64 << k) {
            let nu = Partition::from_unsorted(
                marks.parts().iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &x)| x),
            );
            if kind != Kind::C && nu.len() % 2 == 1 {
                continue;
            }
            out.push(MarkedPartition { kind, lambda: o.partition.clone(), nu, decoration: o.decoration });
        }
    }
    out
}
