//! Path sets `D_J`, their 𝔸/𝔹/ℂ classification and the sign-reversing
//! involution `Φ` on `D = ⊔_{J ⊆ [k]} D_J`.
//!
//! A path in `D_J` is the QBG walk from `w_{k+1}` traced by an admissible
//! subset of `Γ_J`, split into its β- and γ-labels. Classes are decided from
//! the shape of the β-part: ℂ when `J` is empty, 𝔹 when `1 ∈ J`, and otherwise
//! 𝔸 exactly when the β-part opens with the full column
//! `(j_1-1, j_1), …, (1, j_1)`. Subclass 1 means the γ-part opens with
//! `(j_1, j_1+1)`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;

use crate::chain::{all_subsets, cached_chain, normalize_set, Part};
use crate::chevalley::{admissible_subsets, KqgClass};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::qbg::{edge_kind, EdgeKind};
use crate::series::NovikovDeg;
use crate::weyl::{GroupRingElem, Permutation, Root, Weight};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PathClass {
    A1,
    A2,
    B1,
    B2,
    C,
}

impl fmt::Display for PathClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PathClass::A1 => "A1",
            PathClass::A2 => "A2",
            PathClass::B1 => "B1",
            PathClass::B2 => "B2",
            PathClass::C => "C",
        };
        f.write_str(s)
    }
}

/// An element of `D_J`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DPath {
    pub n: usize,
    pub k: usize,
    pub set: Vec<usize>,
    pub beta: Vec<Root>,
    pub gamma: Vec<Root>,
    pub beta_end: Permutation,
    pub end: Permutation,
    /// Kinds of the β-steps followed by the γ-steps.
    pub kinds: Vec<EdgeKind>,
    /// `down` of the underlying admissible subset.
    pub down: NovikovDeg,
}

/// The signed monomial `e^{μ} (±1) [O_{Q_G(end t_down)}]` a path contributes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Contribution {
    pub weight: Weight,
    pub negative: bool,
    pub end: Permutation,
    pub down: NovikovDeg,
}

impl DPath {
    /// Rebuilds a path in `D_J` from its labels, checking that it is one.
    pub fn from_labels(n: usize, k: usize, set: &[usize], beta: Vec<Root>, gamma: Vec<Root>) -> Result<DPath> {
        let set = normalize_set(n, set)?;
        let chain = cached_chain(n, &set)?;
        let mut cursor = 0;
        for (label, part) in beta.iter().map(|r| (r, Part::Beta)).chain(gamma.iter().map(|r| (r, Part::Gamma))) {
            let found = chain.items[cursor..]
                .iter()
                .position(|it| it.part == part && it.root.abs() == *label)
                .ok_or_else(|| {
                    Error::Integrity(format!("label {label} is not a later {part:?} label of Γ_{set:?}"))
                })?;
            cursor += found + 1;
        }
        let start = Permutation::w_index(n, k + 1)?;
        let mut cur = start;
        let mut kinds = Vec::with_capacity(beta.len() + gamma.len());
        let mut down = vec![0u32; n];
        let mut beta_end = cur.clone();
        for (idx, &label) in beta.iter().chain(&gamma).enumerate() {
            let kind = edge_kind(&cur, label).ok_or_else(|| {
                Error::Integrity(format!("{cur} --{label}--> is not a QBG edge (J = {set:?})"))
            })?;
            if kind == EdgeKind::Quantum {
                down.iter_mut().zip(label.coroot_deg(n)).for_each(|(d, c)| *d += c);
            }
            kinds.push(kind);
            cur = cur.right_reflect(label);
            if idx + 1 == beta.len() {
                beta_end = cur.clone();
            }
        }
        Ok(DPath {
            n,
            k,
            set,
            beta,
            gamma,
            beta_end,
            end: cur,
            kinds,
            down: NovikovDeg(down),
        })
    }

    pub fn is_trivial(&self) -> bool {
        self.beta.is_empty() && self.gamma.is_empty()
    }

    /// `|J| ε_{n+1-k} - end(p_β) ε_J`, sign `(-1)^{|J| + ℓ(p_γ)}`, basis `(end, down)`.
    pub fn contribution(&self) -> Contribution {
        let eps = Weight::epsilon(self.n, self.n + 1 - self.k).scaled(self.set.len() as i64);
        let moved = self.beta_end.act_weight(&Weight::epsilon_set(self.n, &self.set));
        Contribution {
            weight: &eps - &moved,
            negative: (self.set.len() + self.gamma.len()) % 2 == 1,
            end: self.end.clone(),
            down: self.down.clone(),
        }
    }

    /// The leading γ-labels whose first index is `j_1`, with their edge kinds.
    pub fn gamma_run_at_min(&self) -> Vec<(Root, EdgeKind)> {
        let Some(&j1) = self.set.first() else {
            return Vec::new();
        };
        self.gamma
            .iter()
            .zip(&self.kinds[self.beta.len()..])
            .take_while(|(r, _)| r.i == j1)
            .map(|(r, k)| (*r, *k))
            .collect()
    }
}

impl fmt::Display for DPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b: Vec<String> = self.beta.iter().map(|r| r.to_string()).collect();
        let g: Vec<String> = self.gamma.iter().map(|r| r.to_string()).collect();
        write!(f, "J={:?} [{} | {}]", self.set, b.join(","), g.join(","))
    }
}

fn check_k(n: usize, k: usize) -> Result<()> {
    if k == 0 || k > n {
        return Err(Error::Domain(format!("k = {k} outside [1, {n}]")));
    }
    Ok(())
}

/// `D_J` for `J ⊆ [k]`.
pub fn enumerate_paths(n: usize, k: usize, set: &[usize]) -> Result<Vec<DPath>> {
    check_k(n, k)?;
    let set = normalize_set(n, set)?;
    if set.iter().any(|&j| j > k) {
        return Err(Error::Domain(format!("J = {set:?} is not inside [1, {k}]")));
    }
    let chain = cached_chain(n, &set)?;
    let a = chain.beta_len();
    let start = Permutation::w_index(n, k + 1)?;
    Ok(admissible_subsets(&start, &chain)?
        .into_iter()
        .map(|sub| {
            let split = sub.positions.iter().filter(|&&p| p <= a).count();
            DPath {
                n,
                k,
                set: set.clone(),
                beta: sub.labels[..split].to_vec(),
                gamma: sub.labels[split..].to_vec(),
                beta_end: sub.beta_end,
                end: sub.end,
                kinds: sub.kinds,
                down: sub.down,
            }
        })
        .collect())
}

/// `D`, ordered by `J` (size, then lexicographic) and then depth-first.
pub fn enumerate_all_with(exec: Exec, n: usize, k: usize) -> Result<Vec<DPath>> {
    check_k(n, k)?;
    let sets = all_subsets(k);
    let per_set = exec.map(&sets, |set| enumerate_paths(n, k, set));
    let mut out = Vec::new();
    for part in per_set {
        out.extend(part?);
    }
    Ok(out)
}

pub fn enumerate_all(n: usize, k: usize) -> Result<Vec<DPath>> {
    enumerate_all_with(Exec::default(), n, k)
}

/// `q = [(k-1,k), …, (1,k) | (k,k+1)]` in `D_{{k}}`.
pub fn fixed_point(n: usize, k: usize) -> Result<DPath> {
    check_k(n, k)?;
    let beta = (1..k).rev().map(|t| Root::new(t, k)).collect();
    DPath::from_labels(n, k, &[k], beta, vec![Root::new(k, k + 1)])
}

fn has_full_column(p: &DPath, j1: usize) -> bool {
    p.beta.len() >= j1 - 1 && (1..j1).all(|r| p.beta[r - 1] == Root::new(j1 - r, j1))
}

fn starts_gamma_with(p: &DPath, j1: usize) -> bool {
    p.gamma.first() == Some(&Root::new(j1, j1 + 1))
}

/// The class of `p`, read from the shape of its β-part.
pub fn classify(p: &DPath) -> PathClass {
    let Some(&j1) = p.set.first() else {
        return PathClass::C;
    };
    if j1 == 1 {
        return if starts_gamma_with(p, 1) { PathClass::B1 } else { PathClass::B2 };
    }
    if !has_full_column(p, j1) {
        return PathClass::C;
    }
    if starts_gamma_with(p, j1) {
        PathClass::A1
    } else {
        PathClass::A2
    }
}

/// `Φ(p)`.
pub fn phi(p: &DPath) -> Result<DPath> {
    let (n, k) = (p.n, p.k);
    match classify(p) {
        PathClass::A1 | PathClass::B1 if p.set == [k] => {
            let q = fixed_point(n, k)?;
            if *p != q {
                return Err(Error::Integrity(format!("{p} is in D_{{k}} class 1 but is not q")));
            }
            Ok(q)
        }
        PathClass::A2 => {
            let j1 = p.set[0];
            let mut set: Vec<usize> = p.set[1..].to_vec();
            set.push(j1 - 1);
            let mut beta: Vec<Root> = (1..j1 - 1).rev().map(|t| Root::new(t, j1 - 1)).collect();
            beta.extend(p.beta[j1 - 1..].iter().map(|r| {
                if r.i == j1 - 1 {
                    Root::new(j1, r.j)
                } else {
                    *r
                }
            }));
            let mut gamma = vec![Root::new(j1 - 1, j1)];
            gamma.extend(&p.gamma);
            DPath::from_labels(n, k, &set, beta, gamma)
        }
        PathClass::A1 | PathClass::B1 => {
            let j1 = p.set[0];
            let mut set: Vec<usize> = p.set[1..].to_vec();
            set.push(j1 + 1);
            let mut beta: Vec<Root> = (1..=j1).rev().map(|t| Root::new(t, j1 + 1)).collect();
            beta.extend(p.beta[j1 - 1..].iter().map(|r| {
                if r.i == j1 + 1 {
                    Root::new(j1, r.j)
                } else {
                    *r
                }
            }));
            DPath::from_labels(n, k, &set, beta, p.gamma[1..].to_vec())
        }
        PathClass::B2 => DPath::from_labels(n, k, &p.set[1..], p.beta.clone(), p.gamma.clone()),
        PathClass::C => {
            let mut set = p.set.clone();
            set.push(1);
            DPath::from_labels(n, k, &set, p.beta.clone(), p.gamma.clone())
        }
    }
}

/// The signed sum over `D`; it equals `[O_{Q_G(w_k)}]`.
pub fn telescope_sum_with(exec: Exec, n: usize, k: usize, trunc: u32) -> Result<KqgClass> {
    let mut out = KqgClass::zero(n, trunc);
    for p in enumerate_all_with(exec, n, k)? {
        let c = p.contribution();
        let sign = if c.negative { -1 } else { 1 };
        out.add_term(c.end, c.down, &GroupRingElem::from_terms(n, [(c.weight, BigInt::from(sign))]));
    }
    Ok(out)
}

pub fn telescope_sum(n: usize, k: usize, trunc: u32) -> Result<KqgClass> {
    telescope_sum_with(Exec::default(), n, k, trunc)
}

/// Everything the sijection suite checks for one `(n, k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SijectionCheck {
    pub n: usize,
    pub k: usize,
    pub sizes: BTreeMap<Vec<usize>, usize>,
    pub census: BTreeMap<PathClass, usize>,
    pub fixed_points: Vec<DPath>,
    pub involution_failures: Vec<String>,
    pub sign_failures: Vec<String>,
    pub lemma_gamma_failures: Vec<String>,
    pub fixed_point_data_ok: bool,
}

impl SijectionCheck {
    pub fn passed(&self) -> bool {
        self.fixed_points.len() == 1
            && self.involution_failures.is_empty()
            && self.sign_failures.is_empty()
            && self.lemma_gamma_failures.is_empty()
            && self.fixed_point_data_ok
    }
}

fn negate(c: &Contribution) -> Contribution {
    Contribution { negative: !c.negative, ..c.clone() }
}

pub fn check_sijection_with(exec: Exec, n: usize, k: usize) -> Result<SijectionCheck> {
    let paths = enumerate_all_with(exec, n, k)?;
    let mut sizes = BTreeMap::new();
    for set in all_subsets(k) {
        sizes.insert(set, 0);
    }
    let mut census = BTreeMap::new();
    let mut fixed_points = Vec::new();
    let mut involution_failures = Vec::new();
    let mut sign_failures = Vec::new();
    let mut lemma_gamma_failures = Vec::new();

    let images = exec.map(&paths, phi);
    for (p, image) in paths.iter().zip(images) {
        *sizes.get_mut(&p.set).expect("subset of [k]") += 1;
        let class = classify(p);
        *census.entry(class).or_insert(0) += 1;

        if matches!(class, PathClass::A1 | PathClass::A2 | PathClass::B1 | PathClass::B2) {
            let run = p.gamma_run_at_min();
            let j1 = p.set[0];
            let ok = run.is_empty()
                || (run.len() == 1 && run[0] == (Root::new(j1, j1 + 1), EdgeKind::Bruhat));
            if !ok {
                lemma_gamma_failures.push(p.to_string());
            }
        }

        let image = match image {
            Ok(q) => q,
            Err(e) => {
                involution_failures.push(format!("{p}: {e}"));
                continue;
            }
        };
        if image == *p {
            fixed_points.push(p.clone());
            continue;
        }
        match phi(&image) {
            Ok(back) if back == *p => {}
            Ok(back) => involution_failures.push(format!("{p} -> {image} -> {back}")),
            Err(e) => involution_failures.push(format!("{p} -> {image}: {e}")),
        }
        if image.contribution() != negate(&p.contribution()) {
            sign_failures.push(format!("{p} -> {image}"));
        }
    }

    let q = fixed_point(n, k)?;
    let wk = Permutation::w_index(n, k)?;
    let fixed_point_data_ok = fixed_points == [q.clone()]
        && q.beta_end.act_weight(&Weight::epsilon_set(n, &q.set)) == Weight::epsilon(n, n + 1 - k)
        && q.gamma.len() == 1
        && q.end == wk
        && q.down.is_zero()
        && q.contribution()
            == Contribution { weight: Weight::zero(n), negative: false, end: wk, down: NovikovDeg::zero(n) };

    Ok(SijectionCheck {
        n,
        k,
        sizes,
        census,
        fixed_points,
        involution_failures,
        sign_failures,
        lemma_gamma_failures,
        fixed_point_data_ok,
    })
}

pub fn check_sijection(n: usize, k: usize) -> Result<SijectionCheck> {
    check_sijection_with(Exec::default(), n, k)
}
