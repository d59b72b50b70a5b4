//! Quantum double Grothendieck polynomials in the variables `z_j = 1 - x_j`.
//!
//! `𝔊^Q_{w∘}` is the product `∏_{k=1}^n Σ_l (-1)^l e^{-l ε_{n+1-k}} F^k_l`;
//! every other `𝔊^Q_w` is obtained by Demazure descent,
//! `𝔊^Q_w = π_{w w∘} 𝔊^Q_{w∘}`.

use num_bigint::BigInt;

use crate::chain::subsets_of_size;
use crate::demazure::pi_word;
use crate::error::{Error, Result};
use crate::series::{NovikovSeries, ZPolynomial};
use crate::weyl::{GroupRingElem, Permutation, Weight};

/// `F^k_l = Σ_{J ⊆ [k], |J| = l} ∏_{j ∈ J, j+1 ∉ J} (1 - Q_j) ∏_{j ∈ J} z_j`,
/// with `1 - Q_{n+1} = 1` so that `k = n + 1` is allowed.
pub fn f_poly(k: usize, l: usize, n: usize, trunc: u32) -> Result<ZPolynomial> {
    if l > k || k > n + 1 {
        return Err(Error::Domain(format!(
            "F^k_l needs 0 <= l <= k <= n+1, got k = {k}, l = {l}, n = {n}"
        )));
    }
    let mut out = ZPolynomial::zero(n, trunc);
    for set in subsets_of_size(k, l) {
        let mut coeff = NovikovSeries::one(n, trunc);
        for &j in &set {
            if !set.contains(&(j + 1)) {
                coeff = &coeff * &NovikovSeries::one_minus_q(n, j, trunc);
            }
        }
        let mut exps = vec![0u32; n + 1];
        for &j in &set {
            exps[j - 1] = 1;
        }
        out.add_term(exps, &coeff);
    }
    Ok(out)
}

/// The `k`-th factor `Σ_{l=0}^k (-1)^l e^{-l ε_{n+1-k}} F^k_l` of `𝔊^Q_{w∘}`.
pub fn longest_factor(k: usize, n: usize, trunc: u32) -> Result<ZPolynomial> {
    if k == 0 || k > n {
        return Err(Error::Domain(format!("factor index k = {k} outside [1, {n}]")));
    }
    let eps = Weight::epsilon(n, n + 1 - k);
    let mut out = ZPolynomial::zero(n, trunc);
    for l in 0..=k {
        let sign = if l % 2 == 0 { 1 } else { -1 };
        let c = GroupRingElem::from_terms(n, [(eps.scaled(-(l as i64)), BigInt::from(sign))]);
        out = &out + &f_poly(k, l, n, trunc)?.scale(&NovikovSeries::constant(c, trunc));
    }
    Ok(out)
}

/// `𝔊^Q_{w∘}`.
pub fn groth_longest(n: usize, trunc: u32) -> Result<ZPolynomial> {
    if n == 0 {
        return Err(Error::Domain("rank must be at least 1".into()));
    }
    let mut out = ZPolynomial::one(n, trunc);
    for k in 1..=n {
        out = &out * &longest_factor(k, n, trunc)?;
    }
    Ok(out)
}

/// `𝔊^Q_w = π_{w w∘} 𝔊^Q_{w∘}`.
pub fn groth(w: &Permutation, trunc: u32) -> Result<ZPolynomial> {
    let n = w.rank();
    let word = w.multiply(&Permutation::longest(n))?.reduced_word();
    pi_word(&word, &groth_longest(n, trunc)?)
}

/// The ordinary double Grothendieck polynomial (`Q = 0`).
pub fn groth_classical(w: &Permutation, trunc: u32) -> Result<ZPolynomial> {
    Ok(groth(w, trunc)?.specialize_q_zero())
}
