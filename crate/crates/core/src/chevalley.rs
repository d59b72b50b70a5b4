//! Classes in `K_H(Q_G)` and the Chevalley tensor operators.
//!
//! A [`KqgClass`] is a finite `Z[P]`-combination of semi-infinite Schubert
//! classes `[O_{Q_G(w t_ξ)}]`, indexed by `(w, ξ)` with `ξ` stored as a
//! [`NovikovDeg`] and truncated at total degree `D`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use serde::Serialize;

use crate::chain::{cached_chain, normalize_set, subsets_of_size, LambdaChain, Part};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::qbg::{edge_kind, EdgeKind};
use crate::series::{group_elem_to_json, NovikovDeg, NovikovSeries, WeightCoeffJson};
use crate::weyl::{GroupRingElem, Permutation, Root, Weight};

/// Basis index `(w, ξ)` of `[O_{Q_G(w t_ξ)}]`.
pub type Basis = (Permutation, NovikovDeg);

#[derive(Clone, PartialEq, Eq)]
pub struct KqgClass {
    n: usize,
    trunc: u32,
    terms: BTreeMap<Basis, GroupRingElem>,
}

impl KqgClass {
    pub fn zero(n: usize, trunc: u32) -> Self {
        KqgClass { n, trunc, terms: BTreeMap::new() }
    }

    /// `[O_{Q_G(w t_ξ)}]` with coefficient 1.
    pub fn basis(w: Permutation, xi: NovikovDeg, trunc: u32) -> Self {
        let n = w.rank();
        let mut c = Self::zero(n, trunc);
        c.add_term(w, xi, &GroupRingElem::one(n));
        c
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn trunc(&self) -> u32 {
        self.trunc
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Basis, &GroupRingElem)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &Permutation, xi: &NovikovDeg) -> GroupRingElem {
        self.terms
            .get(&(w.clone(), xi.clone()))
            .cloned()
            .unwrap_or_else(|| GroupRingElem::zero(self.n))
    }

    /// Adds `c·[O_{Q_G(w t_ξ)}]`; dropped beyond the truncation.
    pub fn add_term(&mut self, w: Permutation, xi: NovikovDeg, c: &GroupRingElem) {
        if c.is_zero() || xi.total() > self.trunc {
            return;
        }
        let key = (w, xi);
        let slot = self.terms.entry(key.clone()).or_insert_with(|| GroupRingElem::zero(self.n));
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add_class(&mut self, other: &KqgClass) {
        debug_assert_eq!((self.n, self.trunc), (other.n, other.trunc));
        for ((w, xi), c) in &other.terms {
            self.add_term(w.clone(), xi.clone(), c);
        }
    }

    pub fn try_add(&self, other: &KqgClass) -> Result<KqgClass> {
        if self.n != other.n {
            return Err(Error::Dimension(format!("ranks {} and {} differ", self.n, other.n)));
        }
        if self.trunc != other.trunc {
            return Err(Error::Config(format!(
                "truncations {} and {} differ",
                self.trunc, other.trunc
            )));
        }
        let mut out = self.clone();
        out.add_class(other);
        Ok(out)
    }

    pub fn negated(&self) -> KqgClass {
        self.scale(&GroupRingElem::constant(self.n, -1))
    }

    pub fn sub(&self, other: &KqgClass) -> Result<KqgClass> {
        self.try_add(&other.negated())
    }

    /// Multiplies every coefficient by `c ∈ Z[P]`.
    pub fn scale(&self, c: &GroupRingElem) -> KqgClass {
        let mut out = Self::zero(self.n, self.trunc);
        for ((w, xi), x) in &self.terms {
            out.add_term(w.clone(), xi.clone(), &(x * c));
        }
        out
    }

    /// `st_ξ`: translates every basis element by `ξ`.
    pub fn shift(&self, xi: &NovikovDeg) -> KqgClass {
        let mut out = Self::zero(self.n, self.trunc);
        for ((w, d), c) in &self.terms {
            out.add_term(w.clone(), d + xi, c);
        }
        out
    }

    /// Action of a series `Σ c_ξ Q^ξ` with `Q^ξ` acting as `st_ξ`.
    pub fn apply_series(&self, s: &NovikovSeries) -> Result<KqgClass> {
        if s.rank() != self.n {
            return Err(Error::Dimension(format!("series rank {} vs class rank {}", s.rank(), self.n)));
        }
        let mut out = Self::zero(self.n, self.trunc);
        for (xi, c) in s.terms() {
            out.add_class(&self.shift(xi).scale(c));
        }
        Ok(out)
    }

    /// `Σ_{m ≥ 0} st_j^m`, i.e. the operator `1/(1 - st_j)`, to truncation.
    pub fn geometric(&self, j: usize) -> KqgClass {
        let unit = NovikovDeg::unit(self.n, j);
        let mut out = self.clone();
        let mut cur = self.shift(&unit);
        while !cur.is_zero() {
            out.add_class(&cur);
            cur = cur.shift(&unit);
        }
        out
    }

    /// The operator `1 - st_j`.
    pub fn one_minus_shift(&self, j: usize) -> KqgClass {
        let mut out = self.clone();
        out.add_class(&self.shift(&NovikovDeg::unit(self.n, j)).negated());
        out
    }

    pub fn truncate(&self, trunc: u32) -> KqgClass {
        let mut out = Self::zero(self.n, trunc);
        for ((w, xi), c) in &self.terms {
            out.add_term(w.clone(), xi.clone(), c);
        }
        out
    }

    /// Tab-separated rows: window, Novikov degree, coefficient.
    pub fn to_rows(&self) -> String {
        let mut out = String::new();
        for ((w, xi), c) in &self.terms {
            out.push_str(&format!("{}\t{}\t{}\n", w.to_comma_string(), xi, c));
        }
        out
    }

    pub fn to_json_value(&self) -> Vec<ClassTermJson> {
        self.terms
            .iter()
            .map(|((w, xi), c)| ClassTermJson {
                window: w.window(),
                novikov_deg: xi.0.clone(),
                weight_coeffs: group_elem_to_json(c),
            })
            .collect()
    }

    /// First basis element where `self` and `other` differ, with both coefficients.
    pub fn first_difference(&self, other: &KqgClass) -> Option<(Basis, GroupRingElem, GroupRingElem)> {
        let keys: std::collections::BTreeSet<&Basis> =
            self.terms.keys().chain(other.terms.keys()).collect();
        keys.into_iter().find_map(|k| {
            let a = self.coeff(&k.0, &k.1);
            let b = other.coeff(&k.0, &k.1);
            (a != b).then(|| (k.clone(), a, b))
        })
    }
}

impl fmt::Display for KqgClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|((w, xi), c)| format!("({c})[O({w}, {xi})]"))
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl fmt::Debug for KqgClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "KqgClass[n={}, D={}]({self})", self.n, self.trunc)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassTermJson {
    pub window: Vec<usize>,
    pub novikov_deg: Vec<u32>,
    pub weight_coeffs: Vec<WeightCoeffJson>,
}

/// `[O_{Q_G(e)}]`.
pub fn identity_class(n: usize, trunc: u32) -> KqgClass {
    KqgClass::basis(Permutation::identity(n), NovikovDeg::zero(n), trunc)
}

/// A `w`-admissible subset of a chain together with its statistics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdmissibleSubset {
    pub start: Permutation,
    /// Chain positions, 1-based and increasing.
    pub positions: Vec<usize>,
    pub labels: Vec<Root>,
    pub kinds: Vec<EdgeKind>,
    /// End of the β-part of the path.
    pub beta_end: Permutation,
    pub end: Permutation,
    pub weight: Weight,
    pub neg_count: usize,
    pub down: NovikovDeg,
}

static WEIGHT_CHECKS: AtomicU64 = AtomicU64::new(0);

/// Number of admissible subsets whose weight has been computed both ways.
pub fn weight_checks() -> u64 {
    WEIGHT_CHECKS.load(Ordering::Relaxed)
}

/// `wt(A) = -w s_{ζ_{j_1}} ⋯ s_{ζ_{j_s}}(-λ)` with the stored affine hyperplanes.
fn weight_by_reflections(w: &Permutation, chain: &LambdaChain, positions: &[usize]) -> Weight {
    let mut mu = -&chain.lambda();
    for &pos in positions.iter().rev() {
        let item = chain.items[pos - 1];
        mu = mu.affine_reflect(item.root, item.level);
    }
    -&w.act_weight(&mu)
}

/// All `w`-admissible subsets of `chain`, in depth-first order (positions lexicographic).
pub fn admissible_subsets(w: &Permutation, chain: &LambdaChain) -> Result<Vec<AdmissibleSubset>> {
    if w.rank() != chain.n {
        return Err(Error::Dimension(format!(
            "permutation of rank {} with chain of rank {}",
            w.rank(),
            chain.n
        )));
    }
    struct Frame {
        cur: Permutation,
        beta_end: Permutation,
        positions: Vec<usize>,
        labels: Vec<Root>,
        kinds: Vec<EdgeKind>,
        neg_count: usize,
        down: Vec<u32>,
    }
    fn visit(
        w: &Permutation,
        chain: &LambdaChain,
        next: usize,
        f: &mut Frame,
        out: &mut Vec<AdmissibleSubset>,
    ) -> Result<()> {
        let shortcut = -&f.beta_end.act_weight(&Weight::epsilon_set(chain.n, &chain.set));
        let weight = weight_by_reflections(w, chain, &f.positions);
        WEIGHT_CHECKS.fetch_add(1, Ordering::Relaxed);
        if weight != shortcut {
            return Err(Error::Integrity(format!(
                "weight mismatch for w = {w}, J = {:?}, A = {:?}: {weight} vs {shortcut}",
                chain.set, f.positions
            )));
        }
        out.push(AdmissibleSubset {
            start: w.clone(),
            positions: f.positions.clone(),
            labels: f.labels.clone(),
            kinds: f.kinds.clone(),
            beta_end: f.beta_end.clone(),
            end: f.cur.clone(),
            weight,
            neg_count: f.neg_count,
            down: NovikovDeg(f.down.clone()),
        });
        for pos in next..chain.items.len() {
            let item = chain.items[pos];
            let label = item.root.abs();
            let Some(kind) = edge_kind(&f.cur, label) else {
                continue;
            };
            let saved = (f.cur.clone(), f.beta_end.clone());
            f.cur = f.cur.right_reflect(label);
            if item.part == Part::Beta {
                f.beta_end = f.cur.clone();
            }
            f.positions.push(pos + 1);
            f.labels.push(label);
            f.kinds.push(kind);
            let negative = !item.root.is_positive();
            f.neg_count += negative as usize;
            let deg = label.coroot_deg(chain.n);
            if kind == EdgeKind::Quantum {
                f.down.iter_mut().zip(&deg).for_each(|(a, b)| *a += b);
            }
            visit(w, chain, pos + 1, f, out)?;
            if kind == EdgeKind::Quantum {
                f.down.iter_mut().zip(&deg).for_each(|(a, b)| *a -= b);
            }
            f.neg_count -= negative as usize;
            f.kinds.pop();
            f.labels.pop();
            f.positions.pop();
            (f.cur, f.beta_end) = saved;
        }
        Ok(())
    }
    let mut frame = Frame {
        cur: w.clone(),
        beta_end: w.clone(),
        positions: Vec::new(),
        labels: Vec::new(),
        kinds: Vec::new(),
        neg_count: 0,
        down: vec![0; chain.n],
    };
    let mut out = Vec::new();
    visit(w, chain, 0, &mut frame, &mut out)?;
    Ok(out)
}

/// The data of one admissible subset that the tensor operator needs.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Transition {
    end: Permutation,
    down: NovikovDeg,
    coeff: GroupRingElem,
}

type TransitionCache = Mutex<HashMap<(Permutation, Vec<usize>), Arc<Vec<Transition>>>>;

fn transitions(w: &Permutation, set: &[usize]) -> Result<Arc<Vec<Transition>>> {
    static CACHE: OnceLock<TransitionCache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let key = (w.clone(), set.to_vec());
    if let Some(t) = cache.lock().expect("transition cache poisoned").get(&key) {
        return Ok(t.clone());
    }
    let chain = cached_chain(w.rank(), set)?;
    let list: Vec<Transition> = admissible_subsets(w, &chain)?
        .into_iter()
        .map(|a| {
            let mut coeff = GroupRingElem::monomial(a.weight);
            if a.neg_count % 2 == 1 {
                coeff = -&coeff;
            }
            Transition { end: a.end, down: a.down, coeff }
        })
        .collect();
    let list = Arc::new(list);
    Ok(cache.lock().expect("transition cache poisoned").entry(key).or_insert(list).clone())
}

/// `J⁻ = {j ∈ [n] : j ∉ J, j + 1 ∈ J}`, the coordinates where `-ε_J` pairs to `+1`.
pub fn j_minus(n: usize, set: &[usize]) -> Vec<usize> {
    (1..=n).filter(|j| !set.contains(j) && set.contains(&(j + 1))).collect()
}

/// `Σ_A (-1)^{n(A)} e^{wt(A)} [O_{Q_G(end(A) t_{ξ+down(A)})}]` summed over the terms of `cls`,
/// without the geometric `1/(1 - st_j)` factors.
pub fn raw_admissible_sum_with(exec: Exec, cls: &KqgClass, set: &[usize]) -> Result<KqgClass> {
    let set = normalize_set(cls.n, set)?;
    let terms: Vec<(&Basis, &GroupRingElem)> = cls.terms.iter().collect();
    let parts = exec.map(&terms, |&((w, xi), c)| -> Result<KqgClass> {
        let mut part = KqgClass::zero(cls.n, cls.trunc);
        for t in transitions(w, &set)?.iter() {
            let d = xi + &t.down;
            if d.total() <= cls.trunc {
                part.add_term(t.end.clone(), d, &(&t.coeff * c));
            }
        }
        Ok(part)
    });
    let mut out = KqgClass::zero(cls.n, cls.trunc);
    for p in parts {
        out.add_class(&p?);
    }
    Ok(out)
}

pub fn raw_admissible_sum(cls: &KqgClass, set: &[usize]) -> Result<KqgClass> {
    raw_admissible_sum_with(Exec::default(), cls, set)
}

/// `[O_{Q_G}(w∘ ε_J)] ⊗ cls`.
pub fn tensor_minuscule_with(exec: Exec, cls: &KqgClass, set: &[usize]) -> Result<KqgClass> {
    let set = normalize_set(cls.n, set)?;
    let mut out = raw_admissible_sum_with(exec, cls, &set)?;
    for j in j_minus(cls.n, &set) {
        out = out.geometric(j);
    }
    Ok(out)
}

pub fn tensor_minuscule(cls: &KqgClass, set: &[usize]) -> Result<KqgClass> {
    tensor_minuscule_with(Exec::default(), cls, set)
}

/// `𝔽ᵏ_p ⊗ cls = Σ_{J ⊆ [k], |J| = p} (∏_{j ∈ J⁻} (1 - st_j)) [O_{Q_G}(w∘ε_J)] ⊗ cls`.
///
/// The prefactors cancel the geometric factors of [`tensor_minuscule`], so this
/// is the plain admissible sum over all such `J`.
pub fn f_op_with(exec: Exec, cls: &KqgClass, k: usize, p: usize) -> Result<KqgClass> {
    if p > k || k > cls.n + 1 {
        return Err(Error::Domain(format!(
            "F^k_p needs 0 <= p <= k <= n+1, got k = {k}, p = {p}, n = {}",
            cls.n
        )));
    }
    let mut out = KqgClass::zero(cls.n, cls.trunc);
    for set in subsets_of_size(k, p) {
        out.add_class(&raw_admissible_sum_with(exec, cls, &set)?);
    }
    Ok(out)
}

pub fn f_op(cls: &KqgClass, k: usize, p: usize) -> Result<KqgClass> {
    f_op_with(Exec::default(), cls, k, p)
}

/// `(Σ_{p=0}^k (-1)^p e^{p ε_{n+1-k}} 𝔽ᵏ_p) ⊗ cls`, the `k`-th factor of the longest class.
pub fn wk_factor_with(exec: Exec, cls: &KqgClass, k: usize) -> Result<KqgClass> {
    let n = cls.n;
    if k == 0 || k > n {
        return Err(Error::Domain(format!("factor index k = {k} outside [1, {n}]")));
    }
    let eps = Weight::epsilon(n, n + 1 - k);
    let mut out = KqgClass::zero(n, cls.trunc);
    for p in 0..=k {
        let sign = if p % 2 == 0 { 1 } else { -1 };
        let c = GroupRingElem::from_terms(n, [(eps.scaled(p as i64), BigInt::from(sign))]);
        out.add_class(&f_op_with(exec, cls, k, p)?.scale(&c));
    }
    Ok(out)
}
