//! Truncated Novikov power series over `Z[P]` and polynomials in the
//! variables `z_j = 1 - x_j`.
//!
//! A [`NovikovSeries`] lives in `Z[P]⟦Q_1, …, Q_n⟧` and keeps only terms of
//! total `Q`-degree at most its truncation `D`. A [`ZPolynomial`] is a sparse
//! polynomial in `z_1, …, z_{n+1}` with series coefficients; truncation never
//! touches `z`-degrees.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::weyl::{GroupRingElem, Weight};

/// Exponent vector of `Q^ξ = Q_1^{ξ_1} ⋯ Q_n^{ξ_n}`; equivalently `ξ ∈ Q^{∨,+}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NovikovDeg(pub Vec<u32>);

impl NovikovDeg {
    pub fn zero(n: usize) -> Self {
        NovikovDeg(vec![0; n])
    }

    /// `α_i^∨` (so `Q^{α_i^∨} = Q_i`).
    pub fn unit(n: usize, i: usize) -> Self {
        let mut d = vec![0; n];
        d[i - 1] = 1;
        NovikovDeg(d)
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&d| d == 0)
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }
}

impl Add for &NovikovDeg {
    type Output = NovikovDeg;
    fn add(self, rhs: &NovikovDeg) -> NovikovDeg {
        NovikovDeg(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl fmt::Display for NovikovDeg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|d| d.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

impl fmt::Debug for NovikovDeg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn check_compatible(a: (usize, u32), b: (usize, u32)) -> Result<()> {
    if a.0 != b.0 {
        return Err(Error::Dimension(format!("ranks {} and {} differ", a.0, b.0)));
    }
    if a.1 != b.1 {
        return Err(Error::Config(format!("truncations {} and {} differ", a.1, b.1)));
    }
    Ok(())
}

/// An element of `Z[P]⟦Q⟧` truncated at total `Q`-degree `trunc`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct NovikovSeries {
    n: usize,
    trunc: u32,
    terms: BTreeMap<NovikovDeg, GroupRingElem>,
}

impl NovikovSeries {
    pub fn zero(n: usize, trunc: u32) -> Self {
        NovikovSeries { n, trunc, terms: BTreeMap::new() }
    }

    pub fn one(n: usize, trunc: u32) -> Self {
        Self::constant(GroupRingElem::one(n), trunc)
    }

    pub fn constant(c: GroupRingElem, trunc: u32) -> Self {
        let n = c.rank();
        let mut s = Self::zero(n, trunc);
        s.add_term(NovikovDeg::zero(n), &c);
        s
    }

    /// `c · Q^ξ` (zero if `ξ` exceeds the truncation).
    pub fn monomial(deg: NovikovDeg, c: GroupRingElem, trunc: u32) -> Self {
        let mut s = Self::zero(c.rank(), trunc);
        s.add_term(deg, &c);
        s
    }

    /// `1 - Q_i`; `i = 0` or `i = n + 1` give `1` (the `Q_0 = Q_{n+1} = 0` convention).
    pub fn one_minus_q(n: usize, i: usize, trunc: u32) -> Self {
        let mut s = Self::one(n, trunc);
        if (1..=n).contains(&i) {
            s.add_term(NovikovDeg::unit(n, i), &GroupRingElem::constant(n, -1));
        }
        s
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

    pub fn terms(&self) -> impl Iterator<Item = (&NovikovDeg, &GroupRingElem)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, deg: &NovikovDeg) -> GroupRingElem {
        self.terms.get(deg).cloned().unwrap_or_else(|| GroupRingElem::zero(self.n))
    }

    pub fn constant_term(&self) -> GroupRingElem {
        self.coeff(&NovikovDeg::zero(self.n))
    }

    /// Adds `c · Q^deg`, dropping it when `deg` exceeds the truncation.
    pub fn add_term(&mut self, deg: NovikovDeg, c: &GroupRingElem) {
        if c.is_zero() || deg.total() > self.trunc {
            return;
        }
        let slot = self.terms.entry(deg.clone()).or_insert_with(|| GroupRingElem::zero(self.n));
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&deg);
        }
    }

    /// Product truncated to the common truncation.
    pub fn series_mul(&self, other: &Self) -> Result<Self> {
        check_compatible((self.n, self.trunc), (other.n, other.trunc))?;
        let mut out = Self::zero(self.n, self.trunc);
        for (da, ca) in &self.terms {
            for (db, cb) in &other.terms {
                if da.total() + db.total() > self.trunc {
                    continue;
                }
                out.add_term(da + db, &(ca * cb));
            }
        }
        Ok(out)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        check_compatible((self.n, self.trunc), (other.n, other.trunc))?;
        let mut out = self.clone();
        for (d, c) in &other.terms {
            out.add_term(d.clone(), c);
        }
        Ok(out)
    }

    /// Inverse of a unit: the constant term must be `±e^μ`.
    pub fn series_inv_unit(&self) -> Result<Self> {
        let c0 = self.constant_term();
        let (mu, negative) = c0.as_unit().ok_or_else(|| {
            Error::Inversion(format!("constant term {c0} is not a unit of Z[P]"))
        })?;
        let mut c0_inv = GroupRingElem::monomial(-&mu);
        if negative {
            c0_inv = -&c0_inv;
        }
        let c0_inv = Self::constant(c0_inv, self.trunc);
        // a = c0 (1 - u) with u nilpotent modulo truncation; a^{-1} = c0^{-1} Σ u^k
        let u = &Self::one(self.n, self.trunc) - &(&c0_inv * self);
        let mut acc = Self::one(self.n, self.trunc);
        let mut power = Self::one(self.n, self.trunc);
        for _ in 0..self.trunc {
            power = &power * &u;
            if power.is_zero() {
                break;
            }
            acc += &power;
        }
        Ok(&c0_inv * &acc)
    }

    /// Re-truncate at `trunc ≤ self.trunc`.
    pub fn truncate(&self, trunc: u32) -> Self {
        NovikovSeries {
            n: self.n,
            trunc,
            terms: self
                .terms
                .iter()
                .filter(|(d, _)| d.total() <= trunc)
                .map(|(d, c)| (d.clone(), c.clone()))
                .collect(),
        }
    }

    /// Drops every term of positive `Q`-degree.
    pub fn specialize_q_zero(&self) -> Self {
        let mut out = Self::zero(self.n, self.trunc);
        out.add_term(NovikovDeg::zero(self.n), &self.constant_term());
        out
    }

    /// Applies `f` to every coefficient.
    pub fn map_coeffs(&self, mut f: impl FnMut(&GroupRingElem) -> GroupRingElem) -> Self {
        let mut out = Self::zero(self.n, self.trunc);
        for (d, c) in &self.terms {
            out.add_term(d.clone(), &f(c));
        }
        out
    }

    /// `c · self` for `c ∈ Z[P]`.
    pub fn scale(&self, c: &GroupRingElem) -> Self {
        self.map_coeffs(|x| x * c)
    }

    pub fn flip(&self) -> Self {
        self.map_coeffs(GroupRingElem::flip)
    }
}

impl fmt::Display for NovikovSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (idx, (d, c)) in self.terms.iter().enumerate() {
            if idx > 0 {
                f.write_str(" + ")?;
            }
            let q = q_monomial_string(d);
            match (q.is_empty(), c.len()) {
                (true, _) => write!(f, "{c}")?,
                (false, 1) if c.as_unit().map(|(w, neg)| w.is_zero() && !neg).unwrap_or(false) => {
                    write!(f, "{q}")?
                }
                _ => write!(f, "({c})*{q}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for NovikovSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NovikovSeries[D={}]({self})", self.trunc)
    }
}

fn q_monomial_string(d: &NovikovDeg) -> String {
    let parts: Vec<String> = d
        .0
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| if e == 1 { format!("Q{}", i + 1) } else { format!("Q{}^{e}", i + 1) })
        .collect();
    parts.join("*")
}

impl AddAssign<&NovikovSeries> for NovikovSeries {
    fn add_assign(&mut self, rhs: &NovikovSeries) {
        for (d, c) in &rhs.terms {
            self.add_term(d.clone(), c);
        }
    }
}

impl SubAssign<&NovikovSeries> for NovikovSeries {
    fn sub_assign(&mut self, rhs: &NovikovSeries) {
        for (d, c) in &rhs.terms {
            self.add_term(d.clone(), &-c);
        }
    }
}

impl Add for &NovikovSeries {
    type Output = NovikovSeries;
    fn add(self, rhs: &NovikovSeries) -> NovikovSeries {
        self.try_add(rhs).expect("incompatible series")
    }
}

impl Sub for &NovikovSeries {
    type Output = NovikovSeries;
    fn sub(self, rhs: &NovikovSeries) -> NovikovSeries {
        self.try_add(&-rhs).expect("incompatible series")
    }
}

impl Neg for &NovikovSeries {
    type Output = NovikovSeries;
    fn neg(self) -> NovikovSeries {
        self.map_coeffs(|c| -c)
    }
}

/// Panics on rank or truncation mismatch; use [`NovikovSeries::series_mul`] to get an error instead.
impl Mul for &NovikovSeries {
    type Output = NovikovSeries;
    fn mul(self, rhs: &NovikovSeries) -> NovikovSeries {
        self.series_mul(rhs).expect("incompatible series")
    }
}

/// A polynomial in `z_1, …, z_{n+1}` (`z_j = 1 - x_j`) over truncated Novikov series.
#[derive(Clone, PartialEq, Eq)]
pub struct ZPolynomial {
    n: usize,
    trunc: u32,
    terms: BTreeMap<Vec<u32>, NovikovSeries>,
}

impl ZPolynomial {
    pub fn zero(n: usize, trunc: u32) -> Self {
        ZPolynomial { n, trunc, terms: BTreeMap::new() }
    }

    pub fn one(n: usize, trunc: u32) -> Self {
        Self::constant(NovikovSeries::one(n, trunc))
    }

    pub fn constant(c: NovikovSeries) -> Self {
        let mut p = Self::zero(c.rank(), c.trunc());
        p.add_term(vec![0; c.rank() + 1], &c);
        p
    }

    /// The variable `z_j`, `1 ≤ j ≤ n + 1`.
    pub fn z(n: usize, j: usize, trunc: u32) -> Self {
        let mut e = vec![0; n + 1];
        e[j - 1] = 1;
        Self::monomial(e, NovikovSeries::one(n, trunc))
    }

    pub fn monomial(exps: Vec<u32>, c: NovikovSeries) -> Self {
        let mut p = Self::zero(c.rank(), c.trunc());
        p.add_term(exps, &c);
        p
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

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &NovikovSeries)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[u32]) -> NovikovSeries {
        self.terms
            .get(exps)
            .cloned()
            .unwrap_or_else(|| NovikovSeries::zero(self.n, self.trunc))
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: &NovikovSeries) {
        debug_assert_eq!(exps.len(), self.n + 1);
        if c.is_zero() {
            return;
        }
        let slot = self
            .terms
            .entry(exps.clone())
            .or_insert_with(|| NovikovSeries::zero(self.n, self.trunc));
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&exps);
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        check_compatible((self.n, self.trunc), (other.n, other.trunc))
    }

    pub fn zpoly_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c);
        }
        Ok(out)
    }

    pub fn zpoly_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = Self::zero(self.n, self.trunc);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, &(ca * cb));
            }
        }
        Ok(out)
    }

    /// Multiplies every coefficient by a series.
    pub fn scale(&self, c: &NovikovSeries) -> Self {
        let mut out = Self::zero(self.n, self.trunc);
        for (e, s) in &self.terms {
            out.add_term(e.clone(), &(s * c));
        }
        out
    }

    /// Applies `f` to every series coefficient.
    pub fn map_coeffs(&self, mut f: impl FnMut(&NovikovSeries) -> NovikovSeries) -> Self {
        let mut out = Self::zero(self.n, self.trunc);
        for (e, s) in &self.terms {
            out.add_term(e.clone(), &f(s));
        }
        out
    }

    pub fn specialize_q_zero(&self) -> Self {
        self.map_coeffs(NovikovSeries::specialize_q_zero)
    }

    pub fn truncate(&self, trunc: u32) -> Self {
        let mut out = Self::zero(self.n, trunc);
        for (e, s) in &self.terms {
            out.add_term(e.clone(), &s.truncate(trunc));
        }
        out
    }

    /// Substitutes `v ↦ 1 - v` in every variable. Maps the `z`-presentation to
    /// the `x`-presentation and back; it is its own inverse.
    pub fn swap_presentation(&self) -> Self {
        let mut out = Self::zero(self.n, self.trunc);
        for (e, s) in &self.terms {
            // (1 - v)^m = Σ_r C(m, r) (-1)^r v^r, expanded variable by variable
            let mut partial: Vec<(Vec<u32>, BigInt)> = vec![(Vec::new(), BigInt::one())];
            for &m in e {
                let mut next = Vec::new();
                let mut binom = BigInt::one();
                for r in 0..=m {
                    let signed = if r % 2 == 0 { binom.clone() } else { -binom.clone() };
                    for (ex, c) in &partial {
                        let mut ex = ex.clone();
                        ex.push(r);
                        next.push((ex, c * &signed));
                    }
                    binom = binom * BigInt::from(m - r) / BigInt::from(r + 1);
                }
                partial = next;
            }
            for (ex, c) in partial {
                out.add_term(ex, &s.scale(&GroupRingElem::constant(self.n, c)));
            }
        }
        out
    }

    /// Total degree in the polynomial variables.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn to_json_value(&self) -> Vec<ZTermJson> {
        self.terms
            .iter()
            .map(|(e, s)| ZTermJson {
                z_exponents: e.clone(),
                terms: series_to_json(s),
            })
            .collect()
    }

    /// Byte-stable JSON; entries are sorted lexicographically by exponent vectors.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_value()).expect("serializable")
    }

    pub fn from_json(n: usize, trunc: u32, s: &str) -> Result<Self> {
        let raw: Vec<ZTermJson> =
            serde_json::from_str(s).map_err(|e| Error::Parse(format!("bad polynomial JSON: {e}")))?;
        let mut out = Self::zero(n, trunc);
        for t in raw {
            if t.z_exponents.len() != n + 1 {
                return Err(Error::Dimension(format!(
                    "z_exponents {:?} has wrong length for n = {n}",
                    t.z_exponents
                )));
            }
            out.add_term(t.z_exponents, &series_from_json(n, trunc, &t.terms)?);
        }
        Ok(out)
    }

    /// Text rendering; `x_presentation` rewrites in `x_j = 1 - z_j` first.
    pub fn render(&self, x_presentation: bool) -> String {
        let (p, var) = if x_presentation {
            (self.swap_presentation(), 'x')
        } else {
            (self.clone(), 'z')
        };
        if p.terms.is_empty() {
            return "0".to_string();
        }
        let mut lines = Vec::new();
        for (e, s) in &p.terms {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &m)| m > 0)
                .map(|(j, &m)| if m == 1 { format!("{var}{}", j + 1) } else { format!("{var}{}^{m}", j + 1) })
                .collect();
            let mono = if mono.is_empty() { "1".to_string() } else { mono.join("*") };
            lines.push(format!("{mono}\t{s}"));
        }
        lines.join("\n")
    }
}

impl fmt::Debug for ZPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ZPolynomial[n={}, D={}]\n{}", self.n, self.trunc, self.render(false))
    }
}

impl Add for &ZPolynomial {
    type Output = ZPolynomial;
    fn add(self, rhs: &ZPolynomial) -> ZPolynomial {
        self.zpoly_add(rhs).expect("incompatible polynomials")
    }
}

impl Sub for &ZPolynomial {
    type Output = ZPolynomial;
    fn sub(self, rhs: &ZPolynomial) -> ZPolynomial {
        self.zpoly_add(&rhs.map_coeffs(|c| -c)).expect("incompatible polynomials")
    }
}

impl Mul for &ZPolynomial {
    type Output = ZPolynomial;
    fn mul(self, rhs: &ZPolynomial) -> ZPolynomial {
        self.zpoly_mul(rhs).expect("incompatible polynomials")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightCoeffJson {
    pub eps_coords: Vec<i64>,
    pub coeff: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesTermJson {
    pub q_degs: Vec<u32>,
    pub weight_coeffs: Vec<WeightCoeffJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZTermJson {
    pub z_exponents: Vec<u32>,
    pub terms: Vec<SeriesTermJson>,
}

pub fn group_elem_to_json(c: &GroupRingElem) -> Vec<WeightCoeffJson> {
    c.terms()
        .map(|(w, k)| WeightCoeffJson {
            eps_coords: w.coords().to_vec(),
            coeff: k.to_string(),
        })
        .collect()
}

pub fn group_elem_from_json(n: usize, items: &[WeightCoeffJson]) -> Result<GroupRingElem> {
    let mut out = GroupRingElem::zero(n);
    for wc in items {
        if wc.eps_coords.len() != n {
            return Err(Error::Dimension(format!("eps_coords {:?} for n = {n}", wc.eps_coords)));
        }
        let k: BigInt = wc
            .coeff
            .parse()
            .map_err(|e| Error::Parse(format!("bad coefficient {:?}: {e}", wc.coeff)))?;
        out.add_term(Weight::from_coords(wc.eps_coords.clone()), k);
    }
    Ok(out)
}

pub fn series_to_json(s: &NovikovSeries) -> Vec<SeriesTermJson> {
    s.terms()
        .map(|(d, c)| SeriesTermJson {
            q_degs: d.0.clone(),
            weight_coeffs: group_elem_to_json(c),
        })
        .collect()
}

fn series_from_json(n: usize, trunc: u32, items: &[SeriesTermJson]) -> Result<NovikovSeries> {
    let mut out = NovikovSeries::zero(n, trunc);
    for t in items {
        if t.q_degs.len() != n {
            return Err(Error::Dimension(format!("q_degs {:?} for n = {n}", t.q_degs)));
        }
        out.add_term(NovikovDeg(t.q_degs.clone()), &group_elem_from_json(n, &t.weight_coeffs)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: usize, i: usize, trunc: u32) -> NovikovSeries {
        NovikovSeries::monomial(NovikovDeg::unit(n, i), GroupRingElem::one(n), trunc)
    }

    fn e(mu: Weight, trunc: u32) -> NovikovSeries {
        NovikovSeries::constant(GroupRingElem::monomial(mu), trunc)
    }

    #[test]
    fn telescoping_truncates() {
        let n = 1;
        let one = NovikovSeries::one(n, 2);
        let q1 = q(n, 1, 2);
        let a = &one - &q1;
        let b = &(&one + &q1) + &(&q1 * &q1);
        assert_eq!(&a * &b, one);
        assert_eq!(&a * &one, a);
    }

    #[test]
    fn exponents_cancel() {
        let n = 2;
        let e1 = Weight::epsilon(n, 1);
        let a = &e(e1.clone(), 2) * &q(n, 1, 2);
        let b = &e(-&e1, 2) * &q(n, 2, 2);
        assert_eq!(&a * &b, &q(n, 1, 2) * &q(n, 2, 2));
    }

    #[test]
    fn mismatched_truncation_is_config_error() {
        let a = NovikovSeries::one(1, 2);
        let b = NovikovSeries::one(1, 3);
        assert!(matches!(a.series_mul(&b), Err(Error::Config(_))));
        let c = NovikovSeries::one(2, 2);
        assert!(matches!(a.series_mul(&c), Err(Error::Dimension(_))));
    }

    #[test]
    fn inverse_examples() {
        let n = 1;
        let d = 3;
        let one = NovikovSeries::one(n, d);
        let inv = NovikovSeries::one_minus_q(n, 1, d).series_inv_unit().unwrap();
        let mut expected = one.clone();
        let mut p = one.clone();
        for _ in 0..3 {
            p = &p * &q(n, 1, d);
            expected += &p;
        }
        assert_eq!(inv, expected);
        assert_eq!(one.series_inv_unit().unwrap(), one);

        let n = 2;
        let e1 = Weight::epsilon(n, 1);
        let a = &e(e1.clone(), d) * &NovikovSeries::one_minus_q(n, 2, d);
        let inv = a.series_inv_unit().unwrap();
        assert_eq!(&a * &inv, NovikovSeries::one(n, d));
        assert_eq!(inv.constant_term(), GroupRingElem::monomial(-&e1));
    }

    #[test]
    fn non_unit_is_rejected() {
        let n = 1;
        let two = NovikovSeries::constant(GroupRingElem::constant(n, 2), 2);
        assert!(matches!(two.series_inv_unit(), Err(Error::Inversion(_))));
        assert!(matches!(q(n, 1, 2).series_inv_unit(), Err(Error::Inversion(_))));
    }

    #[test]
    fn zpoly_examples() {
        let n = 1;
        let d = 2;
        let z1 = ZPolynomial::z(n, 1, d);
        let z2 = ZPolynomial::z(n, 2, d);
        assert_eq!(&z1 * &z2, ZPolynomial::monomial(vec![1, 1], NovikovSeries::one(n, d)));

        let c = NovikovSeries::one_minus_q(n, 1, d);
        let em = e(-&Weight::epsilon(n, 1), d);
        let p = &ZPolynomial::one(n, d) - &z1.scale(&(&em * &c));
        assert_eq!(&p * &ZPolynomial::one(n, d), p);

        let a = &ZPolynomial::one(n, d) - &z1.scale(&c);
        let b = &ZPolynomial::one(n, d) + &z1.scale(&c);
        let expected = &ZPolynomial::one(n, d)
            - &ZPolynomial::monomial(vec![2, 0], &c * &c);
        assert_eq!(&a * &b, expected);
    }

    #[test]
    fn specialize_examples() {
        let n = 2;
        let d = 2;
        let z1 = ZPolynomial::z(n, 1, d).scale(&NovikovSeries::one_minus_q(n, 1, d));
        assert_eq!(z1.specialize_q_zero(), ZPolynomial::z(n, 1, d));
        let z2 = ZPolynomial::z(n, 2, d).scale(&q(n, 2, d));
        assert!(z2.specialize_q_zero().is_zero());
    }

    #[test]
    fn json_layout() {
        let n = 1;
        let d = 1;
        let p = &ZPolynomial::one(n, d)
            - &ZPolynomial::z(n, 1, d).scale(&NovikovSeries::one_minus_q(n, 1, d));
        let js = p.to_json();
        assert_eq!(
            js,
            r#"[{"z_exponents":[0,0],"terms":[{"q_degs":[0],"weight_coeffs":[{"eps_coords":[0],"coeff":"1"}]}]},{"z_exponents":[1,0],"terms":[{"q_degs":[0],"weight_coeffs":[{"eps_coords":[0],"coeff":"-1"}]},{"q_degs":[1],"weight_coeffs":[{"eps_coords":[0],"coeff":"1"}]}]}]"#
        );
        assert_eq!(ZPolynomial::from_json(n, d, &js).unwrap(), p);
    }

    fn arb_series(n: usize, trunc: u32) -> impl Strategy<Value = NovikovSeries> {
        let term = (
            proptest::collection::vec(0u32..=2, n),
            proptest::collection::vec(-2i64..=2, n),
            -3i64..=3,
        );
        proptest::collection::vec(term, 0..5).prop_map(move |ts| {
            let mut s = NovikovSeries::zero(n, trunc);
            for (d, w, c) in ts {
                s.add_term(
                    NovikovDeg(d),
                    &GroupRingElem::from_terms(n, [(Weight::from_coords(w), BigInt::from(c))]),
                );
            }
            s
        })
    }

    fn arb_zpoly(n: usize, trunc: u32) -> impl Strategy<Value = ZPolynomial> {
        proptest::collection::vec((proptest::collection::vec(0u32..=2, n + 1), arb_series(n, trunc)), 0..4)
            .prop_map(move |ts| {
                let mut p = ZPolynomial::zero(n, trunc);
                for (e, s) in ts {
                    p.add_term(e, &s);
                }
                p
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn series_ring_axioms(
            (a, b, c) in (1usize..=3).prop_flat_map(|n| (arb_series(n, 3), arb_series(n, 3), arb_series(n, 3)))
        ) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
        }

        #[test]
        fn truncation_coherence(
            (a, b, d) in (1usize..=3).prop_flat_map(|n| (arb_series(n, 4), arb_series(n, 4), 0u32..=3))
        ) {
            let high = (&a * &b).truncate(d);
            let low = &a.truncate(d) * &b.truncate(d);
            prop_assert_eq!(high, low);
        }

        #[test]
        fn inverse_is_two_sided(
            (mu, tail, neg) in (1usize..=3).prop_flat_map(|n| (
                proptest::collection::vec(-2i64..=2, n).prop_map(Weight::from_coords),
                arb_series(n, 3),
                any::<bool>(),
            ))
        ) {
            let n = mu.rank();
            let mut unit = GroupRingElem::monomial(mu);
            if neg { unit = -&unit; }
            let mut a = NovikovSeries::constant(unit, 3);
            for (d, c) in tail.terms() {
                if !d.is_zero() { a.add_term(d.clone(), c); }
            }
            let inv = a.series_inv_unit().unwrap();
            prop_assert_eq!(&a * &inv, NovikovSeries::one(n, 3));
            prop_assert_eq!(&inv * &a, NovikovSeries::one(n, 3));
        }

        #[test]
        fn zpoly_ring_axioms(
            (a, b, c) in (1usize..=2).prop_flat_map(|n| (arb_zpoly(n, 2), arb_zpoly(n, 2), arb_zpoly(n, 2)))
        ) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        }

        #[test]
        fn presentation_round_trip(p in (1usize..=3).prop_flat_map(|n| arb_zpoly(n, 2))) {
            prop_assert_eq!(p.swap_presentation().swap_presentation(), p.clone());
            let n = p.rank();
            prop_assert_eq!(ZPolynomial::from_json(n, 2, &p.to_json()).unwrap(), p);
        }
    }
}
