//! Reduced `(-ε_J)`-chains `Γ_J`.
//!
//! For `J = {j_1 < ⋯ < j_p}` the chain is the β-part coming from a reduced
//! word of the minimal `x_J` with `x_J ϖ_p = ε_J`, followed by the γ-part
//! coming from the word of `y_J`, where `y_J x_J` is minimal with
//! `y_J x_J ϖ_p = w∘ ϖ_p`.
//!
//! Sign convention: β-items are stored positive on the level-0 hyperplane,
//! γ-items negative on the level-1 hyperplane `H_{|γ|,1}`. With this choice
//! `n(A)` counts γ-steps and the weight shortcut `wt(A) = -end(β-part)·ε_J`
//! holds (checked on every enumeration in [`crate::chevalley`]).

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::weyl::{Permutation, Root, Weight};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Part {
    Beta,
    Gamma,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ChainItem {
    pub root: Root,
    pub level: i64,
    pub part: Part,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LambdaChain {
    pub n: usize,
    /// `J`, strictly increasing.
    pub set: Vec<usize>,
    pub items: Vec<ChainItem>,
}

impl LambdaChain {
    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Number of β-items (`a = ℓ(x_J)`).
    pub fn beta_len(&self) -> usize {
        self.items.iter().filter(|c| c.part == Part::Beta).count()
    }

    pub fn beta_roots(&self) -> Vec<Root> {
        self.roots_of(Part::Beta)
    }

    pub fn gamma_roots(&self) -> Vec<Root> {
        self.roots_of(Part::Gamma)
    }

    fn roots_of(&self, part: Part) -> Vec<Root> {
        self.items.iter().filter(|c| c.part == part).map(|c| c.root.abs()).collect()
    }

    /// `-ε_J`.
    pub fn lambda(&self) -> Weight {
        -&Weight::epsilon_set(self.n, &self.set)
    }

    /// Tab-separated rows: index, part, root, orientation, level.
    pub fn to_rows(&self) -> String {
        let mut out = String::new();
        for (idx, c) in self.items.iter().enumerate() {
            let part = match c.part {
                Part::Beta => "beta",
                Part::Gamma => "gamma",
            };
            let orient = if c.root.is_positive() { "+" } else { "-" };
            out.push_str(&format!(
                "{}\t{part}\t({},{})\t{orient}\t{}\n",
                idx + 1,
                c.root.i,
                c.root.j,
                c.level
            ));
        }
        out
    }
}

impl fmt::Display for LambdaChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.items.iter().map(|c| c.root.to_string()).collect();
        write!(f, "Γ_{:?} = [{}]", self.set, items.join(", "))
    }
}

/// Checks `J ⊆ [n+1]` (strictly increasing after sorting, no repeats) and returns it sorted.
pub fn normalize_set(n: usize, set: &[usize]) -> Result<Vec<usize>> {
    let mut j = set.to_vec();
    j.sort_unstable();
    if j.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Domain(format!("J = {set:?} has repeated entries")));
    }
    if let Some(&bad) = j.iter().find(|&&x| x == 0 || x > n + 1) {
        return Err(Error::Domain(format!("J = {set:?} is not inside [1, {}] (entry {bad})", n + 1)));
    }
    Ok(j)
}

/// Reduced word of `x_J`, left to right.
pub fn x_word(set: &[usize]) -> Vec<usize> {
    let mut word = Vec::new();
    for (idx, &ju) in set.iter().enumerate() {
        let u = idx + 1;
        word.extend((u..ju).rev());
    }
    word
}

/// Reduced word of `y_J`, left to right.
pub fn y_word(n: usize, set: &[usize]) -> Vec<usize> {
    let p = set.len();
    let mut word = Vec::new();
    for (idx, &ju) in set.iter().enumerate() {
        let u = idx + 1;
        word.extend((ju..=n + u - p).rev());
    }
    word
}

/// `Γ_J` built from the reduced words of `x_J` and `y_J`.
pub fn chain_for(n: usize, set: &[usize]) -> Result<LambdaChain> {
    let set = normalize_set(n, set)?;
    let xw = x_word(&set);
    let yw = y_word(n, &set);
    let mut items = Vec::with_capacity(xw.len() + yw.len());

    // β_c = s_{i_a} ⋯ s_{i_{c+1}} α_{i_c}; chain order starts at β_a
    for l in 0..xw.len() {
        let prefix = Permutation::from_word(n, &xw[..l])?;
        let root = prefix.act_root(Root::simple(xw[l]));
        debug_assert!(root.is_positive());
        items.push(ChainItem { root, level: 0, part: Part::Beta });
    }
    // γ_d = s_{k_b} ⋯ s_{k_{d+1}} α_{k_d}
    for d in 0..yw.len() {
        let suffix: Vec<usize> = yw[d + 1..].iter().rev().copied().collect();
        let root = Permutation::from_word(n, &suffix)?.act_root(Root::simple(yw[d]));
        debug_assert!(root.is_positive());
        items.push(ChainItem { root: root.negated(), level: 1, part: Part::Gamma });
    }
    Ok(LambdaChain { n, set, items })
}

/// `Γ_J` from the closed-form index formulas for `β_{u,t}` and `γ_{u,t}`.
pub fn chain_closed_form(n: usize, set: &[usize]) -> Result<LambdaChain> {
    let set = normalize_set(n, set)?;
    let p = set.len();
    let j = |u: usize| set[u - 1];
    let mut items = Vec::new();
    for u in 1..=p {
        for t in (u..j(u)).rev() {
            let tau = (1..u).filter(|&r| t < j(u - r) + r).count();
            items.push(ChainItem { root: Root::new(t - tau, j(u)), level: 0, part: Part::Beta });
        }
    }
    for u in 1..=p {
        for t in (j(u)..=n + u - p).rev() {
            let sigma = (u + 1..=p).filter(|&r| t + r >= j(r) + u).count();
            let root = Root::new(j(u), t + 1 + sigma).negated();
            items.push(ChainItem { root, level: 1, part: Part::Gamma });
        }
    }
    Ok(LambdaChain { n, set, items })
}

/// The label pattern of the β- and γ-parts read off directly from `J`.
pub fn chain_pattern(n: usize, set: &[usize]) -> (Vec<Root>, Vec<Root>) {
    let mut beta = Vec::new();
    let mut gamma = Vec::new();
    for (idx, &ju) in set.iter().enumerate() {
        beta.extend((1..ju).rev().filter(|t| !set[..idx].contains(t)).map(|t| Root::new(t, ju)));
        gamma.extend(
            (ju + 1..=n + 1)
                .rev()
                .filter(|t| !set[idx + 1..].contains(t))
                .map(|t| Root::new(ju, t)),
        );
    }
    (beta, gamma)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainValidation {
    /// First chain position (1-based) where the chain differs from the reference construction.
    pub first_mismatch: Option<usize>,
    pub closed_form_agrees: bool,
    pub pattern_holds: bool,
    /// No label `(j_r, j_s)` with both ends in `J`.
    pub no_internal_labels: bool,
    pub levels_ok: bool,
}

impl ChainValidation {
    pub fn passed(&self) -> bool {
        self.first_mismatch.is_none()
            && self.closed_form_agrees
            && self.pattern_holds
            && self.no_internal_labels
            && self.levels_ok
    }
}

fn first_difference(a: &[ChainItem], b: &[ChainItem]) -> Option<usize> {
    let common = a.len().min(b.len());
    (0..common)
        .find(|&i| a[i] != b[i])
        .or(if a.len() != b.len() { Some(common) } else { None })
        .map(|i| i + 1)
}

/// Validates a chain against both constructions and the label patterns.
pub fn validate_chain(c: &LambdaChain) -> Result<ChainValidation> {
    let reference = chain_for(c.n, &c.set)?;
    let closed = chain_closed_form(c.n, &c.set)?;
    let (beta, gamma) = chain_pattern(c.n, &c.set);
    let mut labels = c.beta_roots();
    labels.extend(c.gamma_roots());
    let split_ok = c.beta_roots() == beta && c.gamma_roots() == gamma;
    Ok(ChainValidation {
        first_mismatch: first_difference(&c.items, &reference.items),
        closed_form_agrees: closed == reference,
        pattern_holds: split_ok,
        no_internal_labels: labels
            .iter()
            .all(|r| !(c.set.contains(&r.i) && c.set.contains(&r.j))),
        levels_ok: c.items.iter().all(|it| match it.part {
            Part::Beta => it.level == 0 && it.root.is_positive(),
            Part::Gamma => it.level == 1 && !it.root.is_positive(),
        }),
    })
}

/// Memoized [`chain_for`].
pub fn cached_chain(n: usize, set: &[usize]) -> Result<Arc<LambdaChain>> {
    let set = normalize_set(n, set)?;
    type ChainCache = Mutex<HashMap<(usize, Vec<usize>), Arc<LambdaChain>>>;
    static CACHE: OnceLock<ChainCache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(c) = cache.lock().expect("chain cache poisoned").get(&(n, set.clone())) {
        return Ok(c.clone());
    }
    let built = Arc::new(chain_for(n, &set)?);
    let mut guard = cache.lock().expect("chain cache poisoned");
    Ok(guard.entry((n, set)).or_insert(built).clone())
}

/// All subsets of `[k]` with `|J| = p`, in lexicographic order.
pub fn subsets_of_size(k: usize, p: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, k: usize, p: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == p {
            out.push(cur.clone());
            return;
        }
        for x in start..=k {
            if k + 1 - x < p - cur.len() {
                break;
            }
            cur.push(x);
            go(x + 1, k, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if p <= k {
        go(1, k, p, &mut Vec::new(), &mut out);
    }
    out
}

/// All subsets of `[k]`, ordered by size then lexicographically.
pub fn all_subsets(k: usize) -> Vec<Vec<usize>> {
    (0..=k).flat_map(|p| subsets_of_size(k, p)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn roots(c: &LambdaChain) -> Vec<(usize, usize, Part)> {
        c.items.iter().map(|it| (it.root.i, it.root.j, it.part)).collect()
    }

    #[test]
    fn singleton_chains_rank_two() {
        let c = chain_for(2, &[1]).unwrap();
        assert_eq!(roots(&c), vec![(1, 3, Part::Gamma), (1, 2, Part::Gamma)]);
        assert!(c.items.iter().all(|it| it.level == 1 && !it.root.is_positive()));

        let c = chain_for(2, &[2]).unwrap();
        assert_eq!(roots(&c), vec![(1, 2, Part::Beta), (2, 3, Part::Gamma)]);
        assert_eq!(c.items[0].level, 0);
        assert_eq!(c.items[1].level, 1);

        assert!(chain_for(3, &[]).unwrap().is_empty());
    }

    #[test]
    fn closed_form_examples() {
        let c = chain_closed_form(2, &[2]).unwrap();
        assert_eq!(c.items[0].root, Root::new(1, 2));
        let c = chain_closed_form(2, &[1]).unwrap();
        // listed as γ_{1,2}, γ_{1,1}
        assert_eq!(c.gamma_roots(), vec![Root::new(1, 3), Root::new(1, 2)]);
        assert_eq!(chain_closed_form(2, &[1, 2]).unwrap(), chain_for(2, &[1, 2]).unwrap());
    }

    #[test]
    fn two_element_set_avoids_internal_label() {
        let c = chain_for(2, &[1, 2]).unwrap();
        let v = validate_chain(&c).unwrap();
        assert!(v.passed(), "{v:?}");
        assert!(!c.beta_roots().contains(&Root::new(1, 2)));
        assert!(!c.gamma_roots().contains(&Root::new(1, 2)));
    }

    #[test]
    fn corrupted_chain_reports_first_swap() {
        let mut c = chain_for(3, &[2, 3]).unwrap();
        assert!(validate_chain(&c).unwrap().passed());
        c.items.swap(1, 3);
        let v = validate_chain(&c).unwrap();
        assert!(!v.passed());
        assert_eq!(v.first_mismatch, Some(2));
    }

    #[test]
    fn constructions_agree_up_to_rank_four() {
        for n in 1..=4 {
            for k in 0..=n + 1 {
                for set in all_subsets(k) {
                    let c = chain_for(n, &set).unwrap();
                    let v = validate_chain(&c).unwrap();
                    assert!(v.passed(), "n={n} J={set:?}: {v:?}");
                    assert_eq!(c.len(), x_word(&set).len() + y_word(n, &set).len());
                }
            }
        }
    }

    #[test]
    fn words_have_expected_lengths_and_action() {
        for n in 1..=4 {
            for set in all_subsets(n + 1) {
                let p = set.len();
                let x = Permutation::from_word(n, &x_word(&set)).unwrap();
                let y = Permutation::from_word(n, &y_word(n, &set)).unwrap();
                assert_eq!(x.length(), x_word(&set).len());
                assert_eq!(x.act_weight(&Weight::fundamental(n, p)), Weight::epsilon_set(n, &set));
                let yx = y.multiply(&x).unwrap();
                assert_eq!(yx.length(), x.length() + y.length());
                let w0 = Permutation::longest(n);
                assert_eq!(
                    yx.act_weight(&Weight::fundamental(n, p)),
                    w0.act_weight(&Weight::fundamental(n, p))
                );
            }
        }
    }

    #[test]
    fn gamma_hyperplanes_fix_eps_j() {
        for n in 1..=4 {
            for set in all_subsets(n + 1) {
                let c = chain_for(n, &set).unwrap();
                let eps = Weight::epsilon_set(n, &set);
                for it in &c.items {
                    match it.part {
                        Part::Gamma => {
                            assert_eq!(eps.affine_reflect(it.root, 1), eps);
                            assert_eq!(c.lambda().pair(it.root), -1);
                        }
                        Part::Beta => assert_eq!(c.lambda().pair(it.root), 1),
                    }
                }
            }
        }
    }

    #[test]
    fn cache_returns_same_chain() {
        let a = cached_chain(3, &[3, 1]).unwrap();
        let b = cached_chain(3, &[1, 3]).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
        assert_eq!(*a, chain_for(3, &[1, 3]).unwrap());
        assert!(matches!(chain_for(2, &[4]), Err(Error::Domain(_))));
        assert!(chain_for(2, &[1, 1]).is_err());
    }

    #[test]
    fn subset_enumeration() {
        assert_eq!(subsets_of_size(3, 2), vec![vec![1, 2], vec![1, 3], vec![2, 3]]);
        assert_eq!(all_subsets(3).len(), 8);
        assert_eq!(subsets_of_size(2, 3), Vec::<Vec<usize>>::new());
    }
}
