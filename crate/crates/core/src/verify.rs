//! The evaluation map from polynomials to `K_H(Q_G)` and the verification suites.
//!
//! `psi_eval` sends a polynomial in `z_j = 1 - x_j` to the class it represents:
//! `z_j` acts by `(1 - st_{j-1})/(1 - st_j) · [O_{Q_G}(w∘ε_j)] ⊗ -` (with
//! `st_0 = st_{n+1} = 0`), `Q^ξ` acts by `st_ξ`, and every `Z[P]` coefficient is
//! flipped `e^μ ↦ e^{-μ}` exactly once, when it enters the map.

use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::chain::subsets_of_size;
use crate::chevalley::{identity_class, raw_admissible_sum_with, tensor_minuscule_with, wk_factor_with, KqgClass};
use crate::demazure::{pi, pi_z};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::grothendieck::{f_poly, groth, groth_longest};
use crate::series::{NovikovDeg, NovikovSeries, ZPolynomial};
use crate::sijection::{check_sijection_with, telescope_sum_with};
use crate::weyl::{GroupRingElem, Permutation, Root, Weight};

pub const CONVENTION_NOTE: &str =
    "polynomial coefficients are flipped (e^mu -> e^-mu) once, on entry to the evaluation map";

/// Action of `z_j` on a class.
///
/// The `(1 - st_{j-1})` prefactor cancels the `1/(1 - st_{j-1})` of the tensor
/// operator, leaving `1/(1 - st_j)` applied to the raw admissible sum.
pub fn z_action_with(exec: Exec, cls: &KqgClass, j: usize) -> Result<KqgClass> {
    let n = cls.rank();
    if j == 0 || j > n + 1 {
        return Err(Error::Domain(format!("variable z_{j} with n = {n}")));
    }
    let raw = raw_admissible_sum_with(exec, cls, &[j])?;
    Ok(if j <= n { raw.geometric(j) } else { raw })
}

/// Same action, computed literally: series inverse, scalar, full tensor operator.
pub fn z_action_literal(exec: Exec, cls: &KqgClass, j: usize) -> Result<KqgClass> {
    let (n, d) = (cls.rank(), cls.trunc());
    let scalar = &NovikovSeries::one_minus_q(n, j - 1, d)
        * &NovikovSeries::one_minus_q(n, j, d).series_inv_unit()?;
    tensor_minuscule_with(exec, cls, &[j])?.apply_series(&scalar)
}

/// `Σ_ξ flip(c_ξ) [O_{Q_G(e t_ξ)}]`.
fn ingest(s: &NovikovSeries, trunc: u32) -> KqgClass {
    let n = s.rank();
    let mut out = KqgClass::zero(n, trunc);
    for (xi, c) in s.terms() {
        out.add_term(Permutation::identity(n), xi.clone(), &c.flip());
    }
    out
}

fn eval_horner(exec: Exec, terms: &[(&[u32], &NovikovSeries)], var: usize, n: usize, trunc: u32) -> Result<KqgClass> {
    if var > n + 1 {
        let mut out = KqgClass::zero(n, trunc);
        for (_, s) in terms {
            out.add_class(&ingest(s, trunc));
        }
        return Ok(out);
    }
    let mut by_power: BTreeMap<u32, Vec<(&[u32], &NovikovSeries)>> = BTreeMap::new();
    for &(e, s) in terms {
        by_power.entry(e[var - 1]).or_default().push((e, s));
    }
    let top = *by_power.keys().next_back().expect("nonempty");
    let mut acc = KqgClass::zero(n, trunc);
    for a in (0..=top).rev() {
        if !acc.is_zero() {
            acc = z_action_with(exec, &acc, var)?;
        }
        if let Some(sub) = by_power.get(&a) {
            acc.add_class(&eval_horner(exec, sub, var + 1, n, trunc)?);
        }
    }
    Ok(acc)
}

/// `Φ(Ψ^Q(p))`, evaluated by a Horner scheme in each variable in turn.
pub fn psi_eval_with(exec: Exec, p: &ZPolynomial) -> Result<KqgClass> {
    let (n, trunc) = (p.rank(), p.trunc());
    if p.is_zero() {
        return Ok(KqgClass::zero(n, trunc));
    }
    let terms: Vec<(&[u32], &NovikovSeries)> = p.terms().map(|(e, s)| (e.as_slice(), s)).collect();
    eval_horner(exec, &terms, 1, n, trunc)
}

pub fn psi_eval(p: &ZPolynomial) -> Result<KqgClass> {
    psi_eval_with(Exec::default(), p)
}

/// Monomial-by-monomial evaluation applying the `z`-factors in the given
/// variable order, each through [`z_action_literal`].
pub fn psi_eval_ordered(p: &ZPolynomial, order: &[usize]) -> Result<KqgClass> {
    let (n, trunc) = (p.rank(), p.trunc());
    let mut sorted = order.to_vec();
    sorted.sort_unstable();
    if sorted != (1..=n + 1).collect::<Vec<_>>() {
        return Err(Error::Domain(format!("{order:?} is not an ordering of 1..={}", n + 1)));
    }
    let mut out = KqgClass::zero(n, trunc);
    for (e, s) in p.terms() {
        let mut cls = ingest(s, trunc);
        for &j in order {
            for _ in 0..e[j - 1] {
                cls = z_action_literal(Exec::Sequential, &cls, j)?;
            }
        }
        out.add_class(&cls);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Discrepancy {
    pub window: Vec<usize>,
    pub novikov_deg: Vec<u32>,
    pub got: String,
    pub expected: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CaseResult {
    pub id: String,
    pub passed: bool,
    pub discrepancy: Option<Discrepancy>,
    /// Free-form detail for checks that are not a class comparison.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    /// The class the case computed, kept for cross-truncation comparisons.
    #[serde(skip)]
    pub observed: Option<KqgClass>,
}

impl CaseResult {
    fn compare(id: String, got: KqgClass, expected: &KqgClass) -> Self {
        let discrepancy = got.first_difference(expected).map(|((w, xi), a, b)| Discrepancy {
            window: w.window(),
            novikov_deg: xi.0,
            got: a.to_string(),
            expected: b.to_string(),
        });
        CaseResult {
            id,
            passed: discrepancy.is_none(),
            discrepancy,
            detail: None,
            observed: Some(got),
        }
    }

    fn flag(id: String, passed: bool, detail: Option<String>) -> Self {
        CaseResult { id, passed, discrepancy: None, detail, observed: None }
    }

    fn error(id: String, e: Error) -> Self {
        Self::flag(id, false, Some(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub suite: String,
    pub n: usize,
    pub q_deg: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    pub convention: String,
    pub passed: bool,
    pub cases: Vec<CaseResult>,
    /// Wall-clock time; left out of JSON so that output is byte-stable.
    #[serde(skip)]
    pub elapsed_ms: u128,
}

impl Report {
    fn new(suite: &str, n: usize, q_deg: u32, k: Option<usize>, mut cases: Vec<CaseResult>, start: Instant) -> Self {
        cases.sort_by(|a, b| a.id.cmp(&b.id));
        Report {
            suite: suite.to_string(),
            n,
            q_deg,
            k,
            convention: CONVENTION_NOTE.to_string(),
            passed: cases.iter().all(|c| c.passed),
            cases,
            elapsed_ms: start.elapsed().as_millis(),
        }
    }

    /// Pretty JSON with sorted keys.
    pub fn to_json(&self) -> String {
        let v = serde_json::to_value(self).expect("serializable");
        serde_json::to_string_pretty(&v).expect("serializable")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "suite {} n={} D={}{}: {} ({} cases, {} ms)\n",
            self.suite,
            self.n,
            self.q_deg,
            self.k.map(|k| format!(" k={k}")).unwrap_or_default(),
            if self.passed { "PASS" } else { "FAIL" },
            self.cases.len(),
            self.elapsed_ms
        );
        for c in &self.cases {
            out.push_str(&format!("  {}\t{}", if c.passed { "ok" } else { "FAIL" }, c.id));
            if let Some(d) = &c.discrepancy {
                out.push_str(&format!(
                    "\tat ({:?}, {:?}): got {} expected {}",
                    d.window, d.novikov_deg, d.got, d.expected
                ));
            }
            if let Some(detail) = &c.detail {
                out.push_str(&format!("\t{detail}"));
            }
            out.push('\n');
        }
        out
    }

    /// Observed classes by case id.
    pub fn observed(&self) -> BTreeMap<&str, &KqgClass> {
        self.cases
            .iter()
            .filter_map(|c| c.observed.as_ref().map(|o| (c.id.as_str(), o)))
            .collect()
    }
}

fn check_rank(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Domain("rank must be at least 1".into()));
    }
    Ok(())
}

fn basis0(w: Permutation, trunc: u32) -> KqgClass {
    let n = w.rank();
    KqgClass::basis(w, NovikovDeg::zero(n), trunc)
}

/// `Ψ^Q(𝔊^Q_w) = [O^w]` for every `w ∈ S_{n+1}`.
pub fn verify_main_with(exec: Exec, n: usize, trunc: u32) -> Result<Report> {
    check_rank(n)?;
    let start = Instant::now();
    let perms = Permutation::all(n);
    let cases = exec.map(&perms, |w| {
        let id = format!("w={}", w.to_comma_string());
        match groth(w, trunc).and_then(|g| psi_eval_with(Exec::Sequential, &g)) {
            Ok(got) => CaseResult::compare(id, got, &basis0(w.clone(), trunc)),
            Err(e) => CaseResult::error(id, e),
        }
    });
    Ok(Report::new("main", n, trunc, None, cases, start))
}

/// `Ψ^Q(𝔊^Q_{w∘}) = [O^{w∘}]` through the polynomial and through the iterated factors.
pub fn verify_longest_with(exec: Exec, n: usize, trunc: u32) -> Result<Report> {
    check_rank(n)?;
    let start = Instant::now();
    let w0 = basis0(Permutation::longest(n), trunc);
    let poly = groth_longest(n, trunc).and_then(|g| psi_eval_with(exec, &g));
    let factored = (1..=n)
        .rev()
        .try_fold(identity_class(n, trunc), |cls, k| wk_factor_with(exec, &cls, k));
    let mut cases = Vec::new();
    match (poly, factored) {
        (Ok(p), Ok(f)) => {
            cases.push(CaseResult::compare("routes-agree".into(), p.clone(), &f));
            cases.push(CaseResult::compare("polynomial".into(), p, &w0));
            cases.push(CaseResult::compare("factorized".into(), f, &w0));
        }
        (p, f) => {
            for (id, r) in [("polynomial", p), ("factorized", f)] {
                cases.push(match r {
                    Ok(c) => CaseResult::compare(id.into(), c, &w0),
                    Err(e) => CaseResult::error(id.into(), e),
                });
            }
        }
    }
    Ok(Report::new("longest", n, trunc, None, cases, start))
}

/// `(Σ_p (-1)^p e^{pε_{n+1-k}} 𝔽ᵏ_p) ⊗ [O_{Q_G(w_{k+1})}] = [O_{Q_G(w_k)}]`, by `f_op` and by the sijection sum.
pub fn verify_prop_wk_with(exec: Exec, n: usize, k: usize, trunc: u32) -> Result<Report> {
    check_rank(n)?;
    if k == 0 || k > n {
        return Err(Error::Domain(format!("k = {k} outside [1, {n}]")));
    }
    let start = Instant::now();
    let want = basis0(Permutation::w_index(n, k)?, trunc);
    let via_f = wk_factor_with(exec, &basis0(Permutation::w_index(n, k + 1)?, trunc), k)?;
    let via_t = telescope_sum_with(exec, n, k, trunc)?;
    let same_bytes = serde_json::to_string(&via_f.to_json_value()).expect("serializable")
        == serde_json::to_string(&via_t.to_json_value()).expect("serializable");
    let cases = vec![
        CaseResult::compare("f-op".into(), via_f, &want),
        CaseResult::compare("telescope".into(), via_t, &want),
        CaseResult::flag("routes-byte-identical".into(), same_bytes, None),
    ];
    Ok(Report::new("prop-wk", n, trunc, Some(k), cases, start))
}

/// Every generator of the quantum ideal evaluates to its constant term.
pub fn verify_ideal_with(exec: Exec, n: usize, trunc: u32) -> Result<Report> {
    check_rank(n)?;
    let start = Instant::now();
    let ls: Vec<usize> = (1..=n + 1).collect();
    let cases = exec.map(&ls, |&l| {
        let id = format!("l={l}");
        let mut constant = GroupRingElem::zero(n);
        for set in subsets_of_size(n + 1, l) {
            constant.add_term(-&Weight::epsilon_set(n, &set), BigInt::from(1));
        }
        let want = identity_class(n, trunc).scale(&constant);
        match f_poly(n + 1, l, n, trunc).and_then(|g| psi_eval_with(Exec::Sequential, &g)) {
            Ok(got) => CaseResult::compare(id, got, &want),
            Err(e) => CaseResult::error(id, e),
        }
    });
    Ok(Report::new("ideal", n, trunc, None, cases, start))
}

/// `Ψ^Q(π_i 𝔊^Q_w)` is `[O^{s_i w}]` when `s_i w < w` and `[O^w]` otherwise.
pub fn verify_descent_with(exec: Exec, n: usize, trunc: u32) -> Result<Report> {
    check_rank(n)?;
    let start = Instant::now();
    let pairs: Vec<(Permutation, usize)> = Permutation::all(n)
        .into_iter()
        .flat_map(|w| (1..=n).map(move |i| (w.clone(), i)))
        .collect();
    let cases = exec.map(&pairs, |(w, i)| {
        let id = format!("w={} i={i}", w.to_comma_string());
        let siw = w.left_simple(*i);
        let target = if siw.length() < w.length() { siw } else { w.clone() };
        match groth(w, trunc)
            .and_then(|g| pi_z(*i, &g))
            .and_then(|g| psi_eval_with(Exec::Sequential, &g))
        {
            Ok(got) => CaseResult::compare(id, got, &basis0(target, trunc)),
            Err(e) => CaseResult::error(id, e),
        }
    });
    Ok(Report::new("descent", n, trunc, None, cases, start))
}

/// Involution, unique fixed point, sign reversal and telescoping for every `k ≤ n`.
pub fn verify_sijection_with(exec: Exec, n: usize, trunc: u32) -> Result<Report> {
    check_rank(n)?;
    let start = Instant::now();
    let mut cases = Vec::new();
    for k in 1..=n {
        let check = check_sijection_with(exec, n, k)?;
        let mut detail = format!(
            "|D|={} census={:?}",
            check.sizes.values().sum::<usize>(),
            check.census
        );
        for f in check
            .involution_failures
            .iter()
            .chain(&check.sign_failures)
            .chain(&check.lemma_gamma_failures)
            .take(3)
        {
            detail.push_str(&format!("; {f}"));
        }
        cases.push(CaseResult::flag(format!("k={k} involution"), check.passed(), Some(detail)));
        let want = basis0(Permutation::w_index(n, k)?, trunc);
        cases.push(CaseResult::compare(format!("k={k} telescope"), telescope_sum_with(exec, n, k, trunc)?, &want));
    }
    Ok(Report::new("sijection", n, trunc, None, cases, start))
}

fn random_elem(rng: &mut ChaCha8Rng, n: usize) -> GroupRingElem {
    let mut f = GroupRingElem::zero(n);
    for _ in 0..rng.gen_range(1..=6) {
        let coords: Vec<i64> = (0..n).map(|_| rng.gen_range(-3..=3)).collect();
        f.add_term(Weight::from_coords(coords), BigInt::from(rng.gen_range(-4i64..=4)));
    }
    f
}

/// Randomized Demazure laws: idempotency, braid and far commutation, and the
/// cleared-denominator identity `(1 - e^{-α_i}) π_i f = f - e^{-α_i} s_i f`.
pub fn verify_demazure(n: usize, cases_per_law: usize, seed: u64) -> Result<Report> {
    check_rank(n)?;
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures: BTreeMap<&str, Vec<String>> = BTreeMap::new();
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for _ in 0..cases_per_law {
        let f = random_elem(&mut rng, n);
        for i in 1..=n {
            let p = pi(i, &f)?;
            let neg_alpha = -&Root::simple(i).as_weight(n);
            let lhs = &p - &p.mul_monomial(&neg_alpha);
            let rhs = &f - &f.reflect_simple(i).mul_monomial(&neg_alpha);
            for (law, ok) in [("cleared-denominator", lhs == rhs), ("idempotent", pi(i, &p)? == p)] {
                *counts.entry(law).or_default() += 1;
                if !ok {
                    failures.entry(law).or_default().push(format!("i={i} f={f}"));
                }
            }
            if i < n {
                let a = pi(i, &pi(i + 1, &p)?)?;
                let b = pi(i + 1, &pi(i, &pi(i + 1, &f)?)?)?;
                *counts.entry("braid").or_default() += 1;
                if a != b {
                    failures.entry("braid").or_default().push(format!("i={i} f={f}"));
                }
            }
            for j in i + 2..=n {
                *counts.entry("commute").or_default() += 1;
                if pi(i, &pi(j, &f)?)? != pi(j, &p)? {
                    failures.entry("commute").or_default().push(format!("i={i} j={j} f={f}"));
                }
            }
        }
    }
    let cases = counts
        .into_iter()
        .map(|(law, count)| {
            let fails = failures.remove(law).unwrap_or_default();
            let detail = match fails.first() {
                Some(first) => format!("{} of {count} failed; first {first}", fails.len()),
                None => format!("{count} checks"),
            };
            CaseResult::flag(law.to_string(), fails.is_empty(), Some(detail))
        })
        .collect();
    Ok(Report::new("demazure", n, 0, None, cases, start))
}

pub fn verify_main(n: usize, trunc: u32) -> Result<Report> {
    verify_main_with(Exec::default(), n, trunc)
}

pub fn verify_longest(n: usize, trunc: u32) -> Result<Report> {
    verify_longest_with(Exec::default(), n, trunc)
}

pub fn verify_prop_wk(n: usize, k: usize, trunc: u32) -> Result<Report> {
    verify_prop_wk_with(Exec::default(), n, k, trunc)
}

pub fn verify_ideal(n: usize, trunc: u32) -> Result<Report> {
    verify_ideal_with(Exec::default(), n, trunc)
}

pub fn verify_descent(n: usize, trunc: u32) -> Result<Report> {
    verify_descent_with(Exec::default(), n, trunc)
}

pub fn verify_sijection(n: usize, trunc: u32) -> Result<Report> {
    verify_sijection_with(Exec::default(), n, trunc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(mu: Weight) -> GroupRingElem {
        GroupRingElem::monomial(mu)
    }

    #[test]
    fn rank_one_hand_cases() {
        let d = 2;
        let id = identity_class(1, d);
        assert_eq!(psi_eval(&ZPolynomial::one(1, d)).unwrap(), id);

        // (1 - Q_1) z_1 ↦ e^{-ε_1}([O(e)] - [O(s_1)])
        let p = ZPolynomial::z(1, 1, d).scale(&NovikovSeries::one_minus_q(1, 1, d));
        let c = e(-&Weight::epsilon(1, 1));
        let s1 = Permutation::new(vec![2, 1]).unwrap();
        let mut want = id.scale(&c);
        want.add_term(s1.clone(), NovikovDeg::zero(1), &-&c);
        assert_eq!(psi_eval(&p).unwrap(), want);

        // 𝔊_{s_1} = 1 - e^{-ε_1}(1 - Q_1) z_1 ↦ [O(e)] - e^{ε_1} e^{-ε_1}([O(e)] - [O(s_1)])
        let g = groth(&s1, d).unwrap();
        assert_eq!(psi_eval(&g).unwrap(), basis0(s1, d));
    }

    #[test]
    fn literal_and_cancelled_actions_agree() {
        for n in 1..=2 {
            for w in Permutation::all(n) {
                let cls = basis0(w, 3);
                for j in 1..=n + 1 {
                    assert_eq!(
                        z_action_with(Exec::Sequential, &cls, j).unwrap(),
                        z_action_literal(Exec::Sequential, &cls, j).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn evaluation_is_order_independent() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 1..=2 {
            for _ in 0..6 {
                let mut p = ZPolynomial::zero(n, 2);
                for _ in 0..3 {
                    let exps: Vec<u32> = (0..=n).map(|_| rng.gen_range(0..=2)).collect();
                    let c = NovikovSeries::monomial(
                        NovikovDeg((0..n).map(|_| rng.gen_range(0..=1)).collect()),
                        random_elem(&mut rng, n),
                        2,
                    );
                    p.add_term(exps, &c);
                }
                let horner = psi_eval_with(Exec::Sequential, &p).unwrap();
                let forward: Vec<usize> = (1..=n + 1).collect();
                let backward: Vec<usize> = (1..=n + 1).rev().collect();
                assert_eq!(psi_eval_ordered(&p, &forward).unwrap(), horner);
                assert_eq!(psi_eval_ordered(&p, &backward).unwrap(), horner);
            }
        }
        assert!(psi_eval_ordered(&ZPolynomial::one(1, 1), &[1]).is_err());
    }

    #[test]
    fn small_suites_pass() {
        for n in 1..=2 {
            for d in 0..=2 {
                assert!(verify_main(n, d).unwrap().passed, "main n={n} D={d}");
                assert!(verify_longest(n, d).unwrap().passed);
                assert!(verify_ideal(n, d).unwrap().passed);
                assert!(verify_descent(n, d).unwrap().passed);
                assert!(verify_sijection(n, d).unwrap().passed);
                for k in 1..=n {
                    assert!(verify_prop_wk(n, k, d).unwrap().passed);
                }
            }
        }
        assert_eq!(verify_main(1, 2).unwrap().cases.len(), 2);
        assert_eq!(verify_main(2, 1).unwrap().cases.len(), 6);
    }

    #[test]
    fn ideal_rank_one_examples() {
        let d = 2;
        let g1 = f_poly(2, 1, 1, d).unwrap();
        let c = &e(-&Weight::epsilon(1, 1)) + &e(-&Weight::epsilon(1, 2));
        assert_eq!(psi_eval(&g1).unwrap(), identity_class(1, d).scale(&c));
        let g2 = f_poly(2, 2, 1, d).unwrap();
        assert_eq!(psi_eval(&g2).unwrap(), identity_class(1, d));
    }

    #[test]
    fn failing_case_reports_discrepancy() {
        let got = identity_class(1, 1);
        let want = basis0(Permutation::longest(1), 1);
        let case = CaseResult::compare("x".into(), got, &want);
        assert!(!case.passed);
        let d = case.discrepancy.unwrap();
        assert_eq!(d.window, vec![1, 2]);
        assert_eq!(d.got, "1");
        assert_eq!(d.expected, "0");
    }

    #[test]
    fn demazure_suite_passes() {
        for n in 1..=3 {
            let r = verify_demazure(n, 50, 11).unwrap();
            assert!(r.passed, "{}", r.to_text());
        }
    }

    #[test]
    fn report_json_is_stable() {
        let a = verify_main(1, 1).unwrap().to_json();
        let b = verify_main_with(Exec::Sequential, 1, 1).unwrap().to_json();
        assert_eq!(a, b);
        assert!(a.contains("\"suite\": \"main\""));
    }
}
