//! Type-A Weyl group, roots, weights and the group algebra `Z[P]`.
//!
//! Conventions: a [`Permutation`] is stored in one-line notation
//! `w(1), ..., w(n+1)`, composition is `(u·v)(i) = u(v(i))`, so that
//! `w ε_i = ε_{w(i)}` and right multiplication by the transposition `(i, j)`
//! swaps window positions `i` and `j`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// An element of `W = S_{n+1}` in one-line notation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    window: Vec<u16>,
}

impl Permutation {
    /// Builds a permutation from its one-line window (values `1..=n+1`).
    pub fn new(window: Vec<usize>) -> Result<Self> {
        let m = window.len();
        if m < 2 {
            return Err(Error::Domain(format!(
                "window {window:?} has length {m}; rank must be at least 1"
            )));
        }
        let mut seen = vec![false; m + 1];
        for &v in &window {
            if v == 0 || v > m || seen[v] {
                return Err(Error::Domain(format!(
                    "window {window:?} is not a bijection of 1..={m}"
                )));
            }
            seen[v] = true;
        }
        Ok(Permutation {
            window: window.into_iter().map(|v| v as u16).collect(),
        })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            window: (1..=n as u16 + 1).collect(),
        }
    }

    /// The longest element `w∘`, `w∘(k) = n + 2 - k`.
    pub fn longest(n: usize) -> Self {
        Permutation {
            window: (1..=n as u16 + 1).rev().collect(),
        }
    }

    /// The simple reflection `s_i = (i, i+1)`.
    pub fn simple(n: usize, i: usize) -> Result<Self> {
        if i == 0 || i > n {
            return Err(Error::Domain(format!("simple reflection s_{i} with n = {n}")));
        }
        let mut w = Self::identity(n);
        w.window.swap(i - 1, i);
        Ok(w)
    }

    /// The reflection `s_β` for a root `β = ±(ε_i - ε_j)`, i.e. the transposition `(i, j)`.
    pub fn reflection(n: usize, root: Root) -> Result<Self> {
        if root.j > n + 1 {
            return Err(Error::Domain(format!("root {root} outside rank {n}")));
        }
        let mut w = Self::identity(n);
        w.window.swap(root.i - 1, root.j - 1);
        Ok(w)
    }

    /// Product `s_{i_1} ⋯ s_{i_l}` of simple reflections.
    pub fn from_word(n: usize, word: &[usize]) -> Result<Self> {
        let mut w = Self::identity(n);
        for &i in word {
            if i == 0 || i > n {
                return Err(Error::Domain(format!("letter {i} in word for rank {n}")));
            }
            w.window.swap(i - 1, i);
        }
        Ok(w)
    }

    /// `w_k`: `w_k(m) = n-k+1+m` for `m ≤ k` and `w_k(k+m) = n-k+2-m`; `w_{n+1} = e`.
    pub fn w_index(n: usize, k: usize) -> Result<Self> {
        if k == 0 || k > n + 1 {
            return Err(Error::Domain(format!("w_k needs 1 <= k <= n+1, got k = {k}, n = {n}")));
        }
        let mut window = Vec::with_capacity(n + 1);
        for m in 1..=k {
            window.push(n + 1 + m - k);
        }
        for m in 1..=n + 1 - k {
            window.push(n + 2 - m - k);
        }
        Self::new(window)
    }

    /// All of `S_{n+1}`, ordered by (length, window).
    pub fn all(n: usize) -> Vec<Self> {
        let mut out = Vec::new();
        let mut cur: Vec<u16> = (1..=n as u16 + 1).collect();
        loop {
            out.push(Permutation { window: cur.clone() });
            // next lexicographic permutation
            let Some(i) = (0..cur.len() - 1).rev().find(|&i| cur[i] < cur[i + 1]) else {
                break;
            };
            let j = (i + 1..cur.len()).rev().find(|&j| cur[j] > cur[i]).unwrap();
            cur.swap(i, j);
            cur[i + 1..].reverse();
        }
        out.sort_by(|a, b| a.length().cmp(&b.length()).then_with(|| a.cmp(b)));
        out
    }

    /// Rank `n` (the window has `n + 1` entries).
    pub fn rank(&self) -> usize {
        self.window.len() - 1
    }

    pub fn window(&self) -> Vec<usize> {
        self.window.iter().map(|&v| v as usize).collect()
    }

    /// `w(i)`, 1-based.
    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.window[i - 1] as usize
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u16; self.window.len()];
        for (pos, &v) in self.window.iter().enumerate() {
            inv[v as usize - 1] = pos as u16 + 1;
        }
        Permutation { window: inv }
    }

    /// Composition `(self · other)(i) = self(other(i))`.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        if self.rank() != other.rank() {
            return Err(Error::Dimension(format!(
                "cannot compose permutations of ranks {} and {}",
                self.rank(),
                other.rank()
            )));
        }
        Ok(Permutation {
            window: other.window.iter().map(|&v| self.window[v as usize - 1]).collect(),
        })
    }

    /// `self · s_β`: swaps window positions `i` and `j` of `β = ±(ε_i - ε_j)`.
    pub fn right_reflect(&self, root: Root) -> Self {
        let mut w = self.clone();
        w.window.swap(root.i - 1, root.j - 1);
        w
    }

    /// `s_i · self`: swaps the values `i` and `i + 1`.
    pub fn left_simple(&self, i: usize) -> Self {
        let (a, b) = (i as u16, i as u16 + 1);
        Permutation {
            window: self
                .window
                .iter()
                .map(|&v| if v == a { b } else if v == b { a } else { v })
                .collect(),
        }
    }

    /// Number of inversions.
    pub fn length(&self) -> usize {
        let w = &self.window;
        let mut count = 0;
        for a in 0..w.len() {
            for b in a + 1..w.len() {
                if w[a] > w[b] {
                    count += 1;
                }
            }
        }
        count
    }

    /// Canonical reduced word: strip the smallest descent until the identity
    /// is reached, then read the stripped letters backwards.
    pub fn reduced_word(&self) -> Vec<usize> {
        let mut w = self.window.clone();
        let mut letters = Vec::new();
        while let Some(i) = (0..w.len() - 1).find(|&i| w[i] > w[i + 1]) {
            w.swap(i, i + 1);
            letters.push(i + 1);
        }
        letters.reverse();
        letters
    }

    /// `w μ`, the linear extension of `ε_i ↦ ε_{w(i)}`.
    pub fn act_weight(&self, mu: &Weight) -> Weight {
        debug_assert_eq!(mu.rank(), self.rank());
        let raw = mu.raw();
        let mut out = vec![0i64; raw.len()];
        for (i, &c) in raw.iter().enumerate() {
            out[self.window[i] as usize - 1] = c;
        }
        Weight::from_raw(&out)
    }

    /// `w β` for a root; the orientation is carried along.
    pub fn act_root(&self, root: Root) -> Root {
        Root::signed(self.apply(root.i), self.apply(root.j), root.negative)
    }

    /// Comma form, e.g. `3,1,2`.
    pub fn to_comma_string(&self) -> String {
        self.window
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_comma_string())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.to_comma_string())
    }
}

/// Accepts a comma list (`3,1,2`) or, when `n + 1 ≤ 9`, compact digits (`312`).
impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let values: Vec<usize> = if s.contains(',') {
            s.split(',')
                .map(|t| {
                    t.trim()
                        .parse::<usize>()
                        .map_err(|e| Error::Parse(format!("bad window entry {t:?}: {e}")))
                })
                .collect::<Result<_>>()?
        } else {
            if s.len() > 9 {
                return Err(Error::Parse(format!(
                    "compact window {s:?} is only allowed for n + 1 <= 9; use commas"
                )));
            }
            s.chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(|d| d as usize)
                        .ok_or_else(|| Error::Parse(format!("bad digit {c:?} in window {s:?}")))
                })
                .collect::<Result<_>>()?
        };
        Permutation::new(values)
    }
}

/// A root `±(ε_i - ε_j)` with `i < j`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Root {
    pub i: usize,
    pub j: usize,
    /// Orientation flag; `true` means `-(ε_i - ε_j)`.
    pub negative: bool,
}

impl Root {
    /// The positive root `ε_i - ε_j`.
    pub fn new(i: usize, j: usize) -> Self {
        assert!(0 < i && i < j, "root needs 0 < i < j, got ({i},{j})");
        Root { i, j, negative: false }
    }

    /// `ε_a - ε_b` (possibly negative), with an extra orientation flip.
    fn signed(a: usize, b: usize, flip: bool) -> Self {
        if a < b {
            Root { i: a, j: b, negative: flip }
        } else {
            Root { i: b, j: a, negative: !flip }
        }
    }

    pub fn simple(i: usize) -> Self {
        Root::new(i, i + 1)
    }

    pub fn negated(self) -> Self {
        Root { negative: !self.negative, ..self }
    }

    /// `|β|`, the positive root.
    pub fn abs(self) -> Self {
        Root { negative: false, ..self }
    }

    pub fn is_positive(self) -> bool {
        !self.negative
    }

    /// `⟨ρ, |β|^∨⟩ = j - i`.
    pub fn rho_pair(self) -> usize {
        self.j - self.i
    }

    /// `|β|^∨` expanded in simple coroots: ones in slots `i..j-1`.
    pub fn coroot_deg(self, n: usize) -> Vec<u32> {
        let mut d = vec![0u32; n];
        for slot in d.iter_mut().take(self.j - 1).skip(self.i - 1) {
            *slot = 1;
        }
        d
    }

    /// The root as a weight (respecting orientation).
    pub fn as_weight(self, n: usize) -> Weight {
        let mut raw = vec![0i64; n + 1];
        let s = if self.negative { -1 } else { 1 };
        raw[self.i - 1] += s;
        raw[self.j - 1] -= s;
        Weight::from_raw(&raw)
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negative {
            write!(f, "-({},{})", self.i, self.j)
        } else {
            write!(f, "({},{})", self.i, self.j)
        }
    }
}

impl fmt::Debug for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// An element of `P = Z^{n+1} / Z(ε_1 + ⋯ + ε_{n+1})`, stored with the
/// `ε_{n+1}` coordinate eliminated.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight {
    coords: Vec<i64>,
}

impl Weight {
    pub fn zero(n: usize) -> Self {
        Weight { coords: vec![0; n] }
    }

    /// From canonical coordinates (length `n`).
    pub fn from_coords(coords: Vec<i64>) -> Self {
        Weight { coords }
    }

    /// From a raw representative in `Z^{n+1}`.
    pub fn from_raw(raw: &[i64]) -> Self {
        let last = raw[raw.len() - 1];
        Weight {
            coords: raw[..raw.len() - 1].iter().map(|c| c - last).collect(),
        }
    }

    /// `ε_i`, `1 ≤ i ≤ n + 1`.
    pub fn epsilon(n: usize, i: usize) -> Self {
        let mut raw = vec![0i64; n + 1];
        raw[i - 1] = 1;
        Weight::from_raw(&raw)
    }

    /// `ε_J = Σ_{j ∈ J} ε_j`.
    pub fn epsilon_set(n: usize, set: &[usize]) -> Self {
        let mut raw = vec![0i64; n + 1];
        for &j in set {
            raw[j - 1] += 1;
        }
        Weight::from_raw(&raw)
    }

    /// The fundamental weight `ϖ_p = ε_1 + ⋯ + ε_p`.
    pub fn fundamental(n: usize, p: usize) -> Self {
        Self::epsilon_set(n, &(1..=p).collect::<Vec<_>>())
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    /// Representative in `Z^{n+1}` with last coordinate zero.
    pub fn raw(&self) -> Vec<i64> {
        let mut r = self.coords.clone();
        r.push(0);
        r
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    /// `⟨μ, |β|^∨⟩` for the positive root underlying `β`.
    pub fn pair(&self, root: Root) -> i64 {
        let at = |k: usize| if k <= self.coords.len() { self.coords[k - 1] } else { 0 };
        at(root.i) - at(root.j)
    }

    pub fn scaled(&self, k: i64) -> Self {
        Weight {
            coords: self.coords.iter().map(|c| c * k).collect(),
        }
    }

    /// Affine reflection in `H_{β,l}`: `μ - (⟨μ, β^∨⟩ - l) β` for positive `β`.
    pub fn affine_reflect(&self, beta: Root, level: i64) -> Self {
        let beta = beta.abs();
        let m = self.pair(beta) - level;
        self - &beta.as_weight(self.rank()).scaled(m)
    }

    /// Simple-reflection action `s_i μ`.
    pub fn reflect_simple(&self, i: usize) -> Self {
        self.affine_reflect(Root::simple(i), 0)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (idx, &c) in self.coords.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else if first { "" } else { "+" };
            let mag = c.abs();
            if mag == 1 {
                write!(f, "{sign}e{}", idx + 1)?;
            } else {
                write!(f, "{sign}{mag}e{}", idx + 1)?;
            }
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Weight({self})")
    }
}

impl Add for &Weight {
    type Output = Weight;
    fn add(self, rhs: &Weight) -> Weight {
        Weight {
            coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &Weight {
    type Output = Weight;
    fn sub(self, rhs: &Weight) -> Weight {
        Weight {
            coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        self.scaled(-1)
    }
}

/// An element of the group algebra `Z[P]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupRingElem {
    n: usize,
    terms: BTreeMap<Weight, BigInt>,
}

impl GroupRingElem {
    pub fn zero(n: usize) -> Self {
        GroupRingElem { n, terms: BTreeMap::new() }
    }

    pub fn one(n: usize) -> Self {
        Self::monomial(Weight::zero(n))
    }

    /// `e^μ`.
    pub fn monomial(mu: Weight) -> Self {
        let n = mu.rank();
        let mut terms = BTreeMap::new();
        terms.insert(mu, BigInt::one());
        GroupRingElem { n, terms }
    }

    pub fn constant(n: usize, c: impl Into<BigInt>) -> Self {
        Self::from_terms(n, [(Weight::zero(n), c.into())])
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (Weight, BigInt)>) -> Self {
        let mut out = Self::zero(n);
        for (w, c) in terms {
            out.add_term(w, c);
        }
        out
    }

    pub fn rank(&self) -> usize {
        self.n
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

    pub fn terms(&self) -> impl Iterator<Item = (&Weight, &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, mu: &Weight) -> BigInt {
        self.terms.get(mu).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, mu: Weight, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(mu) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// `e^μ · self`.
    pub fn mul_monomial(&self, mu: &Weight) -> Self {
        GroupRingElem {
            n: self.n,
            terms: self.terms.iter().map(|(w, c)| (w + mu, c.clone())).collect(),
        }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero(self.n);
        }
        GroupRingElem {
            n: self.n,
            terms: self.terms.iter().map(|(w, c)| (w.clone(), c * k)).collect(),
        }
    }

    /// The coefficient involution `e^μ ↦ e^{-μ}`.
    pub fn flip(&self) -> Self {
        GroupRingElem {
            n: self.n,
            terms: self.terms.iter().map(|(w, c)| (-w, c.clone())).collect(),
        }
    }

    /// Natural action of a Weyl group element, `e^μ ↦ e^{wμ}`.
    pub fn act(&self, w: &Permutation) -> Self {
        Self::from_terms(self.n, self.terms.iter().map(|(mu, c)| (w.act_weight(mu), c.clone())))
    }

    /// `s_i f`.
    pub fn reflect_simple(&self, i: usize) -> Self {
        Self::from_terms(self.n, self.terms.iter().map(|(mu, c)| (mu.reflect_simple(i), c.clone())))
    }

    /// `Some(±e^μ)` data when `self` is a unit of `Z[P]`.
    pub fn as_unit(&self) -> Option<(Weight, bool)> {
        if self.terms.len() != 1 {
            return None;
        }
        let (w, c) = self.terms.iter().next().unwrap();
        if c.abs().is_one() {
            Some((w.clone(), c.is_negative()))
        } else {
            None
        }
    }
}

impl fmt::Display for GroupRingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (idx, (w, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if idx == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            if w.is_zero() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "exp({w})")?;
            } else {
                write!(f, "{mag}*exp({w})")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for GroupRingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupRingElem({self})")
    }
}

impl AddAssign<&GroupRingElem> for GroupRingElem {
    fn add_assign(&mut self, rhs: &GroupRingElem) {
        for (w, c) in &rhs.terms {
            self.add_term(w.clone(), c.clone());
        }
    }
}

impl SubAssign<&GroupRingElem> for GroupRingElem {
    fn sub_assign(&mut self, rhs: &GroupRingElem) {
        for (w, c) in &rhs.terms {
            self.add_term(w.clone(), -c.clone());
        }
    }
}

impl Add for &GroupRingElem {
    type Output = GroupRingElem;
    fn add(self, rhs: &GroupRingElem) -> GroupRingElem {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &GroupRingElem {
    type Output = GroupRingElem;
    fn sub(self, rhs: &GroupRingElem) -> GroupRingElem {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Neg for &GroupRingElem {
    type Output = GroupRingElem;
    fn neg(self) -> GroupRingElem {
        GroupRingElem {
            n: self.n,
            terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect(),
        }
    }
}

impl Mul for &GroupRingElem {
    type Output = GroupRingElem;
    fn mul(self, rhs: &GroupRingElem) -> GroupRingElem {
        let mut out = GroupRingElem::zero(self.n);
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                out.add_term(a + b, ca * cb);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn perm(w: &[usize]) -> Permutation {
        Permutation::new(w.to_vec()).unwrap()
    }

    #[test]
    fn multiply_examples() {
        let s1 = perm(&[2, 1, 3]);
        assert_eq!(perm(&[2, 3, 1]).multiply(&s1).unwrap(), perm(&[3, 2, 1]));
        let w = perm(&[3, 1, 2]);
        assert_eq!(w.multiply(&Permutation::identity(2)).unwrap(), w);
        let w0 = Permutation::longest(2);
        assert_eq!(w0.multiply(&w0).unwrap(), Permutation::identity(2));
        assert!(matches!(
            w0.multiply(&Permutation::identity(3)),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn right_reflection_swaps_positions() {
        let w = perm(&[4, 1, 3, 2]);
        let t = Permutation::reflection(3, Root::new(1, 3)).unwrap();
        assert_eq!(w.multiply(&t).unwrap(), perm(&[3, 1, 4, 2]));
        assert_eq!(w.right_reflect(Root::new(1, 3)), perm(&[3, 1, 4, 2]));
    }

    #[test]
    fn length_examples() {
        assert_eq!(perm(&[3, 2, 1]).length(), 3);
        assert_eq!(Permutation::identity(2).length(), 0);
        assert_eq!(perm(&[2, 3, 1]).length(), 2);
    }

    #[test]
    fn reduced_word_examples() {
        assert_eq!(perm(&[3, 2, 1]).reduced_word(), vec![1, 2, 1]);
        assert!(Permutation::identity(3).reduced_word().is_empty());
        assert_eq!(perm(&[1, 3, 2]).reduced_word(), vec![2]);
    }

    #[test]
    fn w_index_examples() {
        assert_eq!(Permutation::w_index(2, 1).unwrap(), Permutation::longest(2));
        assert_eq!(Permutation::w_index(2, 2).unwrap(), perm(&[2, 3, 1]));
        assert_eq!(Permutation::w_index(2, 3).unwrap(), Permutation::identity(2));
        assert!(Permutation::w_index(2, 0).is_err());
        assert!(Permutation::w_index(2, 4).is_err());
    }

    #[test]
    fn w_index_matches_word_definition() {
        // w_k = (s_1⋯s_n)(s_1⋯s_{n-1})⋯(s_1⋯s_k)
        for n in 1..=5 {
            for k in 1..=n {
                let mut word = Vec::new();
                for top in (k..=n).rev() {
                    word.extend(1..=top);
                }
                assert_eq!(
                    Permutation::from_word(n, &word).unwrap(),
                    Permutation::w_index(n, k).unwrap(),
                    "n={n} k={k}"
                );
            }
        }
    }

    #[test]
    fn act_weight_examples() {
        let n = 2;
        let e1 = Weight::epsilon(n, 1);
        assert_eq!(perm(&[2, 3, 1]).act_weight(&e1), Weight::epsilon(n, 2));
        let mu = Weight::from_coords(vec![3, -1]);
        assert_eq!(Permutation::identity(n).act_weight(&mu), mu);
        let e12 = Weight::epsilon_set(n, &[1, 2]);
        let out = perm(&[3, 2, 1]).act_weight(&e12);
        assert_eq!(out, Weight::epsilon_set(n, &[2, 3]));
        assert_eq!(out, -&Weight::epsilon(n, 1));
    }

    #[test]
    fn affine_reflect_examples() {
        let n = 2;
        let e1 = Weight::epsilon(n, 1);
        assert_eq!(e1.affine_reflect(Root::new(1, 2), 1), e1);
        assert_eq!(e1.affine_reflect(Root::new(1, 2), 0), Weight::epsilon(n, 2));
        assert_eq!(Weight::zero(n).affine_reflect(Root::new(1, 3), 0), Weight::zero(n));
    }

    #[test]
    fn rho_pair_and_coroot() {
        assert_eq!(Root::new(1, 2).rho_pair(), 1);
        assert_eq!(Root::new(1, 3).rho_pair(), 2);
        assert_eq!(Root::new(2, 5).rho_pair(), 3);
        assert_eq!(Root::new(1, 2).coroot_deg(3), vec![1, 0, 0]);
        assert_eq!(Root::new(1, 3).coroot_deg(3), vec![1, 1, 0]);
        assert_eq!(Root::new(2, 4).coroot_deg(4), vec![0, 1, 1, 0]);
    }

    #[test]
    fn flip_examples() {
        let n = 2;
        let e1 = Weight::epsilon(n, 1);
        let e2 = Weight::epsilon(n, 2);
        assert_eq!(
            GroupRingElem::monomial(e1.clone()).flip(),
            GroupRingElem::monomial(-&e1)
        );
        assert_eq!(GroupRingElem::one(n).flip(), GroupRingElem::one(n));
        let f = GroupRingElem::from_terms(n, [(e1.clone(), 2.into()), (-&e2, (-1).into())]);
        let g = GroupRingElem::from_terms(n, [(-&e1, 2.into()), (e2, (-1).into())]);
        assert_eq!(f.flip(), g);
    }

    #[test]
    fn parse_windows() {
        assert_eq!("3,1,2".parse::<Permutation>().unwrap(), perm(&[3, 1, 2]));
        assert_eq!("312".parse::<Permutation>().unwrap(), perm(&[3, 1, 2]));
        assert_eq!(perm(&[3, 1, 2]).to_string(), "3,1,2");
        assert!("3,3,1".parse::<Permutation>().is_err());
        assert!("1".parse::<Permutation>().is_err());
        assert!("1x2".parse::<Permutation>().is_err());
    }

    #[test]
    fn all_permutations_sorted() {
        let all = Permutation::all(3);
        assert_eq!(all.len(), 24);
        assert_eq!(all[0], Permutation::identity(3));
        assert_eq!(all[23], Permutation::longest(3));
        for pair in all.windows(2) {
            assert!(pair[0].length() <= pair[1].length());
        }
    }

    fn arb_perm(n: usize) -> impl Strategy<Value = Permutation> {
        Just((1..=n + 1).collect::<Vec<usize>>())
            .prop_shuffle()
            .prop_map(|w| Permutation::new(w).unwrap())
    }

    fn arb_weight(n: usize) -> impl Strategy<Value = Weight> {
        proptest::collection::vec(-3i64..=3, n).prop_map(Weight::from_coords)
    }

    fn arb_elem(n: usize) -> impl Strategy<Value = GroupRingElem> {
        proptest::collection::vec((arb_weight(n), -3i64..=3), 0..5).prop_map(move |ts| {
            GroupRingElem::from_terms(n, ts.into_iter().map(|(w, c)| (w, BigInt::from(c))))
        })
    }

    proptest! {
        #[test]
        fn reduced_word_multiplies_back(w in (1usize..=4).prop_flat_map(arb_perm)) {
            let r = w.reduced_word();
            prop_assert_eq!(r.len(), w.length());
            prop_assert_eq!(Permutation::from_word(w.rank(), &r).unwrap(), w);
        }

        #[test]
        fn length_subadditive_and_reflection_parity(
            (u, v, i, j) in (2usize..=4).prop_flat_map(|n| (arb_perm(n), arb_perm(n), 1..=n, 1..=n + 1))
        ) {
            let uv = u.multiply(&v).unwrap();
            prop_assert!(uv.length() <= u.length() + v.length());
            if i < j {
                let t = u.right_reflect(Root::new(i, j));
                prop_assert_eq!((t.length() as i64 - u.length() as i64).rem_euclid(2), 1);
            }
        }

        #[test]
        fn act_weight_is_group_action(
            (u, v, mu) in (1usize..=4).prop_flat_map(|n| (arb_perm(n), arb_perm(n), arb_weight(n)))
        ) {
            let lhs = u.act_weight(&v.act_weight(&mu));
            let rhs = u.multiply(&v).unwrap().act_weight(&mu);
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn affine_reflection_involution(
            (mu, i, j, l) in (2usize..=4).prop_flat_map(|n| (arb_weight(n), 1..=n, 2..=n + 1, -2i64..=2))
        ) {
            prop_assume!(i < j);
            let beta = Root::new(i, j);
            let once = mu.affine_reflect(beta, l);
            prop_assert_eq!(once.affine_reflect(beta, l), mu.clone());
            prop_assert_eq!(once == mu, mu.pair(beta) == l);
        }

        #[test]
        fn flip_is_ring_involution(
            (f, g) in (1usize..=3).prop_flat_map(|n| (arb_elem(n), arb_elem(n)))
        ) {
            prop_assert_eq!(f.flip().flip(), f.clone());
            prop_assert_eq!((&f * &g).flip(), &f.flip() * &g.flip());
        }

        #[test]
        fn canonicalization_ignores_all_ones(raw in proptest::collection::vec(-4i64..=4, 2..=5), shift in -3i64..=3) {
            let shifted: Vec<i64> = raw.iter().map(|c| c + shift).collect();
            prop_assert_eq!(Weight::from_raw(&raw), Weight::from_raw(&shifted));
        }
    }
}
