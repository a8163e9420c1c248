//! The mod-2 Steenrod algebra and its profile sub-Hopf algebras in the
//! Milnor basis.
//!
//! The dual generators obey `Δξ_n = Σ_{i+j=n} ξ_i^{2^j} ⊗ ξ_j`, and
//! `Sq(R)` is dual to `ξ^R`. Products use the Milnor-matrix formula with
//! multinomial coefficients reduced mod 2 by bitwise disjointness.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf2::{BitVec, Reducer};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HopfError {
    #[error("algebra mismatch: {0} vs {1}")]
    AlgebraMismatch(Profile, Profile),
    #[error("{0} is not a sub-profile of {1}")]
    NotSubProfile(Profile, Profile),
    #[error("unknown algebra name {0:?} (expected A, A0, A1, A2, A3)")]
    UnknownAlgebra(String),
    #[error("degree {degree} exceeds the materialized bound {bound}")]
    DegreeOutOfRange { degree: u32, bound: u32 },
}

/// Exponent bounds `(h_1, h_2, …)`: `ξ_i^{2^{h_i}} = 0` in the dual.
/// `Full` is the whole Steenrod algebra.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Profile {
    Full,
    Bounded(Vec<u32>),
}

impl Profile {
    /// `A(n)`, with profile `(n+1, n, …, 1)`.
    pub fn a(n: u32) -> Self {
        Profile::Bounded((1..=n + 1).rev().collect())
    }

    pub fn full() -> Self {
        Profile::Full
    }

    pub fn parse(name: &str) -> Result<Self, HopfError> {
        match name.trim() {
            "A" => Ok(Profile::Full),
            "A0" | "A(0)" => Ok(Profile::a(0)),
            "A1" | "A(1)" => Ok(Profile::a(1)),
            "A2" | "A(2)" => Ok(Profile::a(2)),
            "A3" | "A(3)" => Ok(Profile::a(3)),
            other => Err(HopfError::UnknownAlgebra(other.to_string())),
        }
    }

    /// `h_i` for 1-based `i`; `None` means unbounded.
    pub fn exponent(&self, i: usize) -> Option<u32> {
        match self {
            Profile::Full => None,
            Profile::Bounded(h) => Some(h.get(i - 1).copied().unwrap_or(0)),
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Profile::Bounded(_))
    }

    /// Does `Sq(R)` (equivalently `ξ^R`) survive in this profile?
    pub fn admits(&self, r: &[u32]) -> bool {
        r.iter().enumerate().all(|(i, &ri)| match self.exponent(i + 1) {
            None => true,
            Some(h) => h >= 32 || ri < (1u32 << h),
        })
    }

    /// Number of dual generators that may be nonzero.
    pub fn length(&self) -> Option<usize> {
        match self {
            Profile::Full => None,
            Profile::Bounded(h) => Some(h.iter().rposition(|&x| x > 0).map_or(0, |p| p + 1)),
        }
    }

    pub fn dimension(&self) -> Option<u64> {
        match self {
            Profile::Full => None,
            Profile::Bounded(h) => Some(h.iter().map(|&x| 1u64 << x).product()),
        }
    }

    pub fn top_degree(&self) -> Option<u32> {
        match self {
            Profile::Full => None,
            Profile::Bounded(h) => Some(
                h.iter()
                    .enumerate()
                    .map(|(i, &x)| ((1u32 << x) - 1) * ((1u32 << (i + 1)) - 1))
                    .sum(),
            ),
        }
    }

    pub fn is_sub_profile_of(&self, big: &Profile) -> bool {
        match (self, big) {
            (_, Profile::Full) => true,
            (Profile::Full, Profile::Bounded(_)) => false,
            (Profile::Bounded(a), Profile::Bounded(_)) => {
                (1..=a.len().max(1)).all(|i| self.exponent(i) <= big.exponent(i))
            }
        }
    }

    /// Degrees of the indecomposables `Sq(2^k)` up to `max_degree`.
    pub fn generator_degrees(&self, max_degree: u32) -> Vec<u32> {
        let cap = self.exponent(1).map_or(32, |h| h.min(32));
        (0..cap)
            .map(|k| 1u32 << k)
            .take_while(|&d| d <= max_degree)
            .collect()
    }

    pub fn name(&self) -> String {
        match self {
            Profile::Full => "A".into(),
            Profile::Bounded(h) => {
                for n in 0..8u32 {
                    if *self == Profile::a(n) {
                        return format!("A({n})");
                    }
                }
                let parts: Vec<String> = h.iter().map(|x| x.to_string()).collect();
                format!("P({})", parts.join(","))
            }
        }
    }
}

impl fmt::Debug for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

fn trim(mut v: Vec<u32>) -> Vec<u32> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

/// Milnor basis element `Sq(r_1, …, r_k)` with trailing zeros removed.
/// Ordered by length, then lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Sq(Vec<u32>);

impl Sq {
    pub fn new(r: Vec<u32>) -> Self {
        Sq(trim(r))
    }

    pub fn unit() -> Self {
        Sq(Vec::new())
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0
            .iter()
            .enumerate()
            .map(|(i, &r)| r * ((1u32 << (i + 1)) - 1))
            .sum()
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }
}

impl Ord for Sq {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Sq {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Sq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|r| r.to_string()).collect();
        write!(f, "Sq({})", parts.join(","))
    }
}

impl fmt::Display for Sq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Monomial `ξ_1^{e_1} ξ_2^{e_2} …` in the dual algebra.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Xi(Vec<u32>);

impl Xi {
    pub fn new(e: Vec<u32>) -> Self {
        Xi(trim(e))
    }

    pub fn one() -> Self {
        Xi(Vec::new())
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0
            .iter()
            .enumerate()
            .map(|(i, &e)| e * ((1u32 << (i + 1)) - 1))
            .sum()
    }

    /// `wt(ξ_i) = 2^{i-1}`, additive on products.
    pub fn weight(&self) -> u32 {
        self.0
            .iter()
            .enumerate()
            .map(|(i, &e)| e * (1u32 << i))
            .sum()
    }

    pub fn mul(&self, other: &Xi) -> Xi {
        let n = self.0.len().max(other.0.len());
        let v = (0..n)
            .map(|i| self.0.get(i).copied().unwrap_or(0) + other.0.get(i).copied().unwrap_or(0))
            .collect();
        Xi::new(v)
    }

    /// Label such as `x1^4 x3`.
    pub fn label(&self) -> String {
        if self.0.is_empty() {
            return "1".into();
        }
        let mut parts = Vec::new();
        for (i, &e) in self.0.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(format!("x{}", i + 1)),
                _ => parts.push(format!("x{}^{}", i + 1, e)),
            }
        }
        parts.join(" ")
    }
}

impl fmt::Debug for Xi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// A homogeneous-or-not mod-2 sum of Milnor basis elements.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MilnorElement {
    pub profile: Profile,
    pub terms: BTreeSet<Sq>,
}

impl MilnorElement {
    pub fn zero(profile: Profile) -> Self {
        MilnorElement {
            profile,
            terms: BTreeSet::new(),
        }
    }

    pub fn unit(profile: Profile) -> Self {
        Self::monomial(profile, Sq::unit())
    }

    pub fn monomial(profile: Profile, sq: Sq) -> Self {
        let mut terms = BTreeSet::new();
        if profile.admits(sq.exponents()) {
            terms.insert(sq);
        }
        MilnorElement { profile, terms }
    }

    pub fn from_terms(profile: Profile, terms: impl IntoIterator<Item = Sq>) -> Self {
        let mut e = Self::zero(profile);
        for t in terms {
            e.toggle(t);
        }
        e
    }

    fn toggle(&mut self, t: Sq) {
        if !self.profile.admits(t.exponents()) {
            return;
        }
        if !self.terms.remove(&t) {
            self.terms.insert(t);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Common degree of all terms, `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.iter().next().map(|t| t.degree())
    }

    pub fn add(&self, other: &MilnorElement) -> Result<MilnorElement, HopfError> {
        if self.profile != other.profile {
            return Err(HopfError::AlgebraMismatch(
                self.profile.clone(),
                other.profile.clone(),
            ));
        }
        let mut out = self.clone();
        for t in &other.terms {
            out.toggle(t.clone());
        }
        Ok(out)
    }
}

impl fmt::Debug for MilnorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms.iter().map(|t| format!("{t:?}")).collect();
        f.write_str(&parts.join(" + "))
    }
}

/// All Milnor monomials of degree `n` admitted by `profile`, canonical order.
pub fn basis_in_degree(profile: &Profile, n: u32) -> Vec<Sq> {
    let mut max_len = 0;
    while (1u64 << (max_len + 1)) - 1 <= n as u64 {
        max_len += 1;
    }
    if let Some(l) = profile.length() {
        max_len = max_len.min(l);
    }
    let mut out = Vec::new();
    let mut r = vec![0u32; max_len];
    fill_basis(profile, max_len, n, &mut r, &mut out);
    out.sort();
    out
}

fn fill_basis(profile: &Profile, i: usize, remaining: u32, r: &mut Vec<u32>, out: &mut Vec<Sq>) {
    if i == 0 {
        if remaining == 0 {
            out.push(Sq::new(r.clone()));
        }
        return;
    }
    let w = (1u32 << i) - 1;
    let mut cap = remaining / w;
    if let Some(h) = profile.exponent(i) {
        if h < 32 {
            cap = cap.min((1u32 << h) - 1);
        }
    }
    for v in 0..=cap {
        r[i - 1] = v;
        fill_basis(profile, i - 1, remaining - v * w, r, out);
    }
    r[i - 1] = 0;
}

/// Odd-coefficient terms of `Sq(R)·Sq(S)` in the full algebra.
fn milnor_product_raw(r: &[u32], s: &[u32]) -> Vec<Sq> {
    let rows = r.len();
    let cols = s.len();
    let stride = cols + 1;
    let mut x = vec![0u32; (rows + 1) * stride];
    let mut row_rem: Vec<u32> = std::iter::once(0).chain(r.iter().copied()).collect();
    let mut col_rem: Vec<u32> = std::iter::once(0).chain(s.iter().copied()).collect();
    let mut acc: HashMap<Vec<u32>, bool> = HashMap::new();

    #[allow(clippy::too_many_arguments)]
    fn rec(
        cell: usize,
        rows: usize,
        cols: usize,
        stride: usize,
        x: &mut [u32],
        row_rem: &mut [u32],
        col_rem: &mut [u32],
        acc: &mut HashMap<Vec<u32>, bool>,
    ) {
        if cell == rows * cols {
            for i in 1..=rows {
                x[i * stride] = row_rem[i];
            }
            for j in 1..=cols {
                x[j] = col_rem[j];
            }
            let mut t = Vec::with_capacity(rows + cols);
            for n in 1..=rows + cols {
                let mut sum = 0u32;
                let lo = n.saturating_sub(cols);
                for i in lo..=n.min(rows) {
                    let v = x[i * stride + (n - i)];
                    if sum & v != 0 {
                        return;
                    }
                    sum |= v;
                }
                t.push(sum);
            }
            let t = trim(t);
            let e = acc.entry(t).or_insert(false);
            *e = !*e;
            return;
        }
        let i = cell / cols + 1;
        let j = cell % cols + 1;
        let cap = (row_rem[i] >> j).min(col_rem[j]);
        for v in 0..=cap {
            x[i * stride + j] = v;
            row_rem[i] -= v << j;
            col_rem[j] -= v;
            rec(cell + 1, rows, cols, stride, x, row_rem, col_rem, acc);
            row_rem[i] += v << j;
            col_rem[j] += v;
        }
        x[i * stride + j] = 0;
    }

    rec(
        0,
        rows,
        cols,
        stride,
        &mut x,
        &mut row_rem,
        &mut col_rem,
        &mut acc,
    );
    let mut out: Vec<Sq> = acc
        .into_iter()
        .filter(|(_, odd)| *odd)
        .map(|(t, _)| Sq(t))
        .collect();
    out.sort();
    out
}

/// Product of two basis monomials, truncated to `profile`.
pub fn product_monomials(profile: &Profile, a: &Sq, b: &Sq) -> Vec<Sq> {
    milnor_product_raw(a.exponents(), b.exponents())
        .into_iter()
        .filter(|t| profile.admits(t.exponents()))
        .collect()
}

pub fn milnor_product(a: &MilnorElement, b: &MilnorElement) -> Result<MilnorElement, HopfError> {
    if a.profile != b.profile {
        return Err(HopfError::AlgebraMismatch(
            a.profile.clone(),
            b.profile.clone(),
        ));
    }
    let mut out = MilnorElement::zero(a.profile.clone());
    for x in &a.terms {
        for y in &b.terms {
            for t in product_monomials(&a.profile, x, y) {
                out.toggle(t);
            }
        }
    }
    Ok(out)
}

/// `ΔSq(R) = Σ_{R'+R''=R} Sq(R') ⊗ Sq(R'')`.
pub fn coproduct(x: &Sq) -> Vec<(Sq, Sq)> {
    let r = x.exponents();
    let mut out = Vec::new();
    let mut left = vec![0u32; r.len()];
    fn rec(i: usize, r: &[u32], left: &mut Vec<u32>, out: &mut Vec<(Sq, Sq)>) {
        if i == r.len() {
            let right: Vec<u32> = r.iter().zip(left.iter()).map(|(a, b)| a - b).collect();
            out.push((Sq::new(left.clone()), Sq::new(right)));
            return;
        }
        for v in 0..=r[i] {
            left[i] = v;
            rec(i + 1, r, left, out);
        }
    }
    rec(0, r, &mut left, &mut out);
    out
}

/// Kronecker pairing of the Milnor basis with the dual monomial basis.
pub fn dual_pairing(x: &Sq, m: &Xi) -> bool {
    x.exponents() == m.exponents()
}

/// `Δ(ξ^E)` in the dual, keeping only terms whose right factor survives in
/// `right` and whose left factor satisfies `keep_left`.
pub fn dual_coproduct(
    m: &Xi,
    right: &Profile,
    keep_left: impl Fn(&[u32]) -> bool,
) -> Vec<(Xi, Xi)> {
    let mut acc: HashMap<(Vec<u32>, Vec<u32>), bool> = HashMap::new();
    acc.insert((Vec::new(), Vec::new()), true);
    let add = |a: &[u32], b: &[u32]| -> Vec<u32> {
        let n = a.len().max(b.len());
        (0..n)
            .map(|i| a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0))
            .collect()
    };
    for (n0, &e) in m.exponents().iter().enumerate() {
        let n = n0 + 1;
        for k in 0..32 {
            if (e >> k) & 1 == 0 {
                continue;
            }
            // (Δξ_n)^{2^k} = Σ_i ξ_{n-i}^{2^{i+k}} ⊗ ξ_i^{2^k}
            let mut factor = Vec::with_capacity(n + 1);
            for i in 0..=n {
                let mut l = vec![0u32; n];
                let mut r = vec![0u32; n];
                if i < n {
                    l[n - i - 1] = 1u32 << (i + k);
                }
                if i > 0 {
                    r[i - 1] = 1u32 << k;
                }
                factor.push((l, r));
            }
            let mut next: HashMap<(Vec<u32>, Vec<u32>), bool> = HashMap::new();
            for ((a, b), odd) in &acc {
                if !odd {
                    continue;
                }
                for (c, d) in &factor {
                    let rd = trim(add(b, d));
                    if !right.admits(&rd) {
                        continue;
                    }
                    let lc = trim(add(a, c));
                    let entry = next.entry((lc, rd)).or_insert(false);
                    *entry = !*entry;
                }
            }
            acc = next;
        }
    }
    let mut out: Vec<(Xi, Xi)> = acc
        .into_iter()
        .filter(|(k, odd)| *odd && keep_left(&k.0))
        .map(|((a, b), _)| (Xi(a), Xi(b)))
        .collect();
    out.sort();
    out
}

/// The basis of a profile algebra through `max_degree` with a precomputed
/// product table. Basis elements are indexed globally in (degree,
/// canonical) order, so the unit has index 0.
#[derive(Clone)]
pub struct Algebra {
    profile: Profile,
    max_degree: u32,
    basis: Vec<Sq>,
    degrees: Vec<u32>,
    degree_start: Vec<usize>,
    index: HashMap<Sq, usize>,
    products: Vec<Vec<Box<[u32]>>>,
}

impl fmt::Debug for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Algebra")
            .field("profile", &self.profile)
            .field("max_degree", &self.max_degree)
            .field("dim", &self.basis.len())
            .finish()
    }
}

impl Algebra {
    /// Materialize the algebra through `max_degree` (clamped to the top
    /// degree for finite profiles).
    pub fn new(profile: Profile, max_degree: u32) -> Self {
        let max_degree = match profile.top_degree() {
            Some(top) => max_degree.min(top),
            None => max_degree,
        };
        let mut basis = Vec::new();
        let mut degrees = Vec::new();
        let mut degree_start = Vec::with_capacity(max_degree as usize + 2);
        for d in 0..=max_degree {
            degree_start.push(basis.len());
            for b in basis_in_degree(&profile, d) {
                degrees.push(d);
                basis.push(b);
            }
        }
        degree_start.push(basis.len());
        let index = basis
            .iter()
            .enumerate()
            .map(|(i, b)| (b.clone(), i))
            .collect::<HashMap<_, _>>();
        let products: Vec<Vec<Box<[u32]>>> = (0..basis.len())
            .into_par_iter()
            .map(|i| {
                let room = max_degree - degrees[i];
                let upto = degree_start[room as usize + 1];
                (0..upto)
                    .map(|j| {
                        product_monomials(&profile, &basis[i], &basis[j])
                            .iter()
                            .map(|t| index[t] as u32)
                            .collect::<Vec<_>>()
                            .into_boxed_slice()
                    })
                    .collect()
            })
            .collect();
        Algebra {
            profile,
            max_degree,
            basis,
            degrees,
            degree_start,
            index,
            products,
        }
    }

    pub fn profile(&self) -> &Profile {
        &self.profile
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn dim_in_degree(&self, d: i64) -> usize {
        if d < 0 || d > self.max_degree as i64 {
            return 0;
        }
        let d = d as usize;
        self.degree_start[d + 1] - self.degree_start[d]
    }

    pub fn degree_start(&self, d: u32) -> usize {
        self.degree_start[d as usize]
    }

    pub fn basis(&self, i: usize) -> &Sq {
        &self.basis[i]
    }

    pub fn degree(&self, i: usize) -> u32 {
        self.degrees[i]
    }

    pub fn index_of(&self, sq: &Sq) -> Option<usize> {
        self.index.get(sq).copied()
    }

    /// Global indices of the basis in degree `d`.
    pub fn indices_in_degree(&self, d: i64) -> std::ops::Range<usize> {
        if d < 0 || d > self.max_degree as i64 {
            return 0..0;
        }
        self.degree_start[d as usize]..self.degree_start[d as usize + 1]
    }

    /// `basis[i] · basis[j]` as sorted global indices. Products past the
    /// top degree of a finite profile are zero; for the full algebra the
    /// degree must stay within the materialized bound.
    #[inline]
    pub fn product(&self, i: usize, j: usize) -> &[u32] {
        match self.products[i].get(j) {
            Some(p) => p,
            None => {
                debug_assert!(self.profile.is_finite(), "product beyond materialized degree");
                &[]
            }
        }
    }

    pub fn try_product(&self, i: usize, j: usize) -> Result<&[u32], HopfError> {
        let d = self.degrees[i] + self.degrees[j];
        if d > self.max_degree {
            return Err(HopfError::DegreeOutOfRange {
                degree: d,
                bound: self.max_degree,
            });
        }
        Ok(self.product(i, j))
    }

    /// Indices of the indecomposables `Sq(2^k)` present in the table.
    pub fn generators(&self) -> Vec<usize> {
        self.profile
            .generator_degrees(self.max_degree)
            .into_iter()
            .filter_map(|d| self.index_of(&Sq::new(vec![d])))
            .collect()
    }

    /// Coproduct of a basis element in global indices.
    pub fn coproduct_indices(&self, i: usize) -> Vec<(usize, usize)> {
        coproduct(&self.basis[i])
            .into_iter()
            .map(|(a, b)| (self.index[&a], self.index[&b]))
            .collect()
    }

    pub fn to_element(&self, indices: &[u32]) -> MilnorElement {
        MilnorElement::from_terms(
            self.profile.clone(),
            indices.iter().map(|&i| self.basis[i as usize].clone()),
        )
    }

    /// For every positive-degree basis element `a`, an expression
    /// `a = Σ Sq(2^k)·y` as pairs `(generator index, y index)`, chosen by
    /// canonical elimination. Used to extend generator actions to the
    /// whole algebra.
    pub fn decompositions(&self) -> Vec<Vec<(usize, usize)>> {
        let gens = self.generators();
        let mut out = vec![Vec::new(); self.dim()];
        for d in 1..=self.max_degree as i64 {
            let range = self.indices_in_degree(d);
            let width = range.len();
            let base = range.start;
            let mut red = Reducer::new(width);
            let mut cands = Vec::new();
            for &g in &gens {
                let gd = self.degrees[g] as i64;
                for y in self.indices_in_degree(d - gd) {
                    let v = BitVec::from_ones(width, self.product(g, y).iter().map(|&t| t as usize - base));
                    red.insert(v);
                    cands.push((g, y));
                }
            }
            for a in range.clone() {
                let tag = red
                    .solve(&BitVec::unit(width, a - base))
                    .expect("indecomposables generate the algebra");
                out[a] = tag.iter_ones().map(|k| cands[k]).collect();
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sq(r: &[u32]) -> Sq {
        Sq::new(r.to_vec())
    }

    #[test]
    fn basis_examples() {
        assert_eq!(basis_in_degree(&Profile::a(1), 6), vec![sq(&[3, 1])]);
        assert_eq!(basis_in_degree(&Profile::a(2), 0), vec![Sq::unit()]);
        let total: usize = (0..=30).map(|d| basis_in_degree(&Profile::a(2), d).len()).sum();
        assert_eq!(total, 64);
    }

    #[test]
    fn dims_and_poincare() {
        for (n, dim) in [(1u32, 8usize), (2, 64), (3, 1024)] {
            let p = Profile::a(n);
            let top = p.top_degree().unwrap();
            let total: usize = (0..=top).map(|d| basis_in_degree(&p, d).len()).sum();
            assert_eq!(total, dim);
        }
        // (1+q+...+q^7)(1+q^3+q^6+q^9)(1+q^7)
        let mut expect = vec![0usize; 24];
        for a in 0..8 {
            for b in 0..4 {
                for c in 0..2 {
                    expect[a + 3 * b + 7 * c] += 1;
                }
            }
        }
        let got: Vec<usize> = (0..24).map(|d| basis_in_degree(&Profile::a(2), d).len()).collect();
        assert_eq!(got, expect);
        assert_eq!(Profile::a(2).top_degree(), Some(23));
    }

    #[test]
    fn small_products() {
        let p = Profile::Full;
        assert!(product_monomials(&p, &sq(&[1]), &sq(&[1])).is_empty());
        assert_eq!(product_monomials(&p, &sq(&[1]), &sq(&[2])), vec![sq(&[3])]);
        // Sq2 Sq2 = Sq3 Sq1 = Sq(1,1)
        assert_eq!(product_monomials(&p, &sq(&[2]), &sq(&[2])), vec![sq(&[1, 1])]);
        assert_eq!(product_monomials(&p, &Sq::unit(), &sq(&[5, 1])), vec![sq(&[5, 1])]);
    }

    #[test]
    fn a1_associativity_exhaustive() {
        let alg = Algebra::new(Profile::a(1), 100);
        let n = alg.dim();
        assert_eq!(n, 8);
        let mul = |x: &[u32], j: usize| -> Vec<u32> {
            let mut acc = std::collections::BTreeMap::<u32, bool>::new();
            for &i in x {
                if alg.degree(i as usize) + alg.degree(j) > alg.max_degree() {
                    continue;
                }
                for &t in alg.product(i as usize, j) {
                    *acc.entry(t).or_insert(false) ^= true;
                }
            }
            acc.into_iter().filter(|e| e.1).map(|e| e.0).collect()
        };
        let lmul = |i: usize, x: &[u32]| -> Vec<u32> {
            let mut acc = std::collections::BTreeMap::<u32, bool>::new();
            for &j in x {
                for &t in alg.product(i, j as usize) {
                    *acc.entry(t).or_insert(false) ^= true;
                }
            }
            acc.into_iter().filter(|e| e.1).map(|e| e.0).collect()
        };
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if alg.degree(a) + alg.degree(b) + alg.degree(c) > alg.max_degree() {
                        continue;
                    }
                    let ab_c = mul(alg.product(a, b), c);
                    let a_bc = lmul(a, alg.product(b, c));
                    assert_eq!(ab_c, a_bc, "({a},{b},{c})");
                }
            }
        }
    }

    #[test]
    fn coproduct_and_pairing() {
        assert_eq!(coproduct(&Sq::unit()), vec![(Sq::unit(), Sq::unit())]);
        for (l, r) in coproduct(&sq(&[3, 1])) {
            assert_eq!(l.degree() + r.degree(), 6);
        }
        assert!(dual_pairing(&sq(&[1]), &Xi::new(vec![1])));
        assert!(!dual_pairing(&sq(&[1]), &Xi::new(vec![0, 1])));
    }

    #[test]
    fn a1_pairing_is_permutation() {
        let p = Profile::a(1);
        let sqs: Vec<Sq> = (0..=6).flat_map(|d| basis_in_degree(&p, d)).collect();
        let xis: Vec<Xi> = sqs.iter().map(|s| Xi::new(s.exponents().to_vec())).collect();
        for s in &sqs {
            assert_eq!(xis.iter().filter(|x| dual_pairing(s, x)).count(), 1);
        }
    }

    #[test]
    fn indecomposables_of_a2() {
        let alg = Algebra::new(Profile::a(2), 23);
        // rank of A+·A+ in each degree; the cokernel is the indecomposables
        let mut indec = Vec::new();
        for d in 1..=23i64 {
            let range = alg.indices_in_degree(d);
            let mut red = Reducer::new(range.len());
            for e in 1..d {
                for i in alg.indices_in_degree(e) {
                    for j in alg.indices_in_degree(d - e) {
                        red.insert(BitVec::from_ones(
                            range.len(),
                            alg.product(i, j).iter().map(|&t| t as usize - range.start),
                        ));
                    }
                }
            }
            for _ in red.rank()..range.len() {
                indec.push(d);
            }
        }
        assert_eq!(indec, vec![1, 2, 4]);
    }

    #[test]
    fn dual_coproduct_of_xi2() {
        let terms = dual_coproduct(&Xi::new(vec![0, 1]), &Profile::Full, |_| true);
        let expect = vec![
            (Xi::new(vec![]), Xi::new(vec![0, 1])),
            (Xi::new(vec![0, 1]), Xi::new(vec![])),
            (Xi::new(vec![2]), Xi::new(vec![1])),
        ];
        let mut expect = expect;
        expect.sort();
        assert_eq!(terms, expect);
    }
}
