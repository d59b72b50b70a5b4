//! Demazure operators `π_i = (1 - e^{-α_i})^{-1}(id - e^{-α_i} s_i)` on `Z[P]`,
//! evaluated in closed form on monomials so no fractions are ever formed.

use crate::error::{Error, Result};
use crate::series::ZPolynomial;
use crate::weyl::{GroupRingElem, Root, Weight};

fn check_index(n: usize, i: usize) -> Result<()> {
    if i == 0 || i > n {
        return Err(Error::Domain(format!("Demazure index {i} outside [1, {n}]")));
    }
    Ok(())
}

/// `π_i(e^μ)`. With `m = ⟨μ, α_i^∨⟩`: the string `e^μ + ⋯ + e^{μ - mα_i}` for
/// `m ≥ 0`, zero for `m = -1`, and `-(e^{μ+α_i} + ⋯ + e^{μ+(-m-1)α_i})` below that.
pub fn pi_monomial(i: usize, mu: &Weight) -> Result<GroupRingElem> {
    let n = mu.rank();
    check_index(n, i)?;
    let alpha = Root::simple(i).as_weight(n);
    let m = mu.pair(Root::simple(i));
    let mut out = GroupRingElem::zero(n);
    if m >= 0 {
        for t in 0..=m {
            out.add_term(mu - &alpha.scaled(t), 1.into());
        }
    } else {
        for t in 1..-m {
            out.add_term(mu + &alpha.scaled(t), (-1).into());
        }
    }
    Ok(out)
}

/// Linear extension of [`pi_monomial`].
pub fn pi(i: usize, f: &GroupRingElem) -> Result<GroupRingElem> {
    check_index(f.rank(), i)?;
    let mut out = GroupRingElem::zero(f.rank());
    for (mu, c) in f.terms() {
        out += &pi_monomial(i, mu)?.scale(c);
    }
    Ok(out)
}

/// `π_i` on the `Z[P]` coefficients of a polynomial; `z` and `Q` are scalars.
pub fn pi_z(i: usize, p: &ZPolynomial) -> Result<ZPolynomial> {
    check_index(p.rank(), i)?;
    let mut err = None;
    let out = p.map_coeffs(|s| {
        s.map_coeffs(|c| {
            pi(i, c).unwrap_or_else(|e| {
                err = Some(e);
                GroupRingElem::zero(c.rank())
            })
        })
    });
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// `π_{i_1} ∘ ⋯ ∘ π_{i_l}` (the last letter acts first).
pub fn pi_word(word: &[usize], p: &ZPolynomial) -> Result<ZPolynomial> {
    let mut out = p.clone();
    for &i in word.iter().rev() {
        out = pi_z(i, &out)?;
    }
    Ok(out)
}
