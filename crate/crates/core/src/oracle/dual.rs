//! The dual Steenrod algebra and its quotients `A(n)_*`, built directly
//! from Milnor's coproduct formula `Δξ_n = Σ ξ_{n−i}^{2^i} ⊗ ξ_i`.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::OracleError;

/// An F₂-polynomial in the `ξ_i`: a set of exponent vectors (no trailing
/// zeros).
pub type Poly = BTreeSet<Vec<u32>>;

pub fn mono_degree(e: &[u32]) -> u32 {
    e.iter().enumerate().map(|(i, &x)| x * ((1 << (i + 1)) - 1)).sum()
}

fn trim(mut e: Vec<u32>) -> Vec<u32> {
    while e.last() == Some(&0) {
        e.pop();
    }
    e
}

fn mono_mul(a: &[u32], b: &[u32]) -> Vec<u32> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0))
        .collect()
}

fn xi_power(i: usize, p: u32) -> Vec<u32> {
    if i == 0 || p == 0 {
        return Vec::new();
    }
    let mut e = vec![0; i];
    e[i - 1] = p;
    e
}

pub fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for x in a {
        for y in b {
            let m = mono_mul(x, y);
            if !out.remove(&m) {
                out.insert(m);
            }
        }
    }
    out
}

/// `A(n)_*` (exponent bounds `ξ_i^{2^{b_i}} = 0`) or the whole dual
/// algebra, materialized through `max_degree`.
#[derive(Clone, Debug)]
pub struct DualAlgebra {
    bounds: Option<Vec<u32>>,
    max_degree: u32,
    basis: Vec<Vec<u32>>,
    degree: Vec<u32>,
    index: HashMap<Vec<u32>, u32>,
    /// `coproduct[m]`: pairs `(left, right)` of basis indices.
    coproduct: Vec<Vec<(u32, u32)>>,
}

impl DualAlgebra {
    /// `A(n)_*`: bounds `(n+1, n, …, 1)`.
    pub fn a(n: u32, max_degree: u32) -> DualAlgebra {
        Self::new(Some((1..=n + 1).rev().collect()), max_degree)
    }

    pub fn full(max_degree: u32) -> DualAlgebra {
        Self::new(None, max_degree)
    }

    pub fn new(bounds: Option<Vec<u32>>, max_degree: u32) -> DualAlgebra {
        let mut basis = Vec::new();
        enumerate(&bounds, max_degree, 1, Vec::new(), &mut basis);
        basis.sort_by_key(|e| (mono_degree(e), e.clone()));
        let degree: Vec<u32> = basis.iter().map(|e| mono_degree(e)).collect();
        let index = basis.iter().enumerate().map(|(i, e)| (e.clone(), i as u32)).collect();
        let mut alg = DualAlgebra {
            bounds,
            max_degree,
            basis,
            degree,
            index,
            coproduct: Vec::new(),
        };
        alg.coproduct = (0..alg.basis.len()).map(|m| alg.compute_coproduct(m)).collect();
        alg
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn degree(&self, m: usize) -> u32 {
        self.degree[m]
    }

    pub fn monomial(&self, m: usize) -> &[u32] {
        &self.basis[m]
    }

    pub fn index_of(&self, e: &[u32]) -> Option<usize> {
        self.index.get(e).map(|&i| i as usize)
    }

    pub fn coproduct(&self, m: usize) -> &[(u32, u32)] {
        &self.coproduct[m]
    }

    /// Whether a monomial survives in this quotient.
    pub fn admits(&self, e: &[u32]) -> bool {
        match &self.bounds {
            None => true,
            Some(b) => e
                .iter()
                .enumerate()
                .all(|(i, &x)| x == 0 || b.get(i).is_some_and(|&h| h < 32 && x < 1 << h)),
        }
    }

    fn compute_coproduct(&self, m: usize) -> Vec<(u32, u32)> {
        let e = &self.basis[m];
        let mut acc: BTreeSet<(Vec<u32>, Vec<u32>)> = BTreeSet::new();
        acc.insert((Vec::new(), Vec::new()));
        for (k0, &x) in e.iter().enumerate() {
            let k = k0 + 1;
            for j in 0..32 {
                if x >> j & 1 == 0 {
                    continue;
                }
                // (Δξ_k)^{2^j} = Σ ξ_{k−i}^{2^{i+j}} ⊗ ξ_i^{2^j}
                let factor: Vec<(Vec<u32>, Vec<u32>)> = (0..=k)
                    .map(|i| (xi_power(k - i, 1 << (i + j)), xi_power(i, 1 << j)))
                    .filter(|(l, r)| self.admits(l) && self.admits(r))
                    .collect();
                let mut next = BTreeSet::new();
                for (a, b) in &acc {
                    for (l, r) in &factor {
                        let t = (trim(mono_mul(a, l)), trim(mono_mul(b, r)));
                        if self.admits(&t.0) && self.admits(&t.1) && !next.remove(&t) {
                            next.insert(t);
                        }
                    }
                }
                acc = next;
            }
        }
        acc.into_iter()
            .map(|(l, r)| (self.index[&l], self.index[&r]))
            .collect()
    }

    /// Reduce a polynomial of the full dual algebra to this quotient.
    pub fn project(&self, p: &Poly) -> Vec<usize> {
        p.iter().filter_map(|e| self.index_of(e)).collect()
    }
}

fn enumerate(bounds: &Option<Vec<u32>>, max: u32, i: usize, prefix: Vec<u32>, out: &mut Vec<Vec<u32>>) {
    let deg = mono_degree(&prefix);
    let d = (1u32 << i) - 1;
    let cap = match bounds {
        Some(b) => match b.get(i - 1) {
            Some(&h) => (1u32 << h) - 1,
            None => 0,
        },
        None => {
            if d > max {
                0
            } else {
                u32::MAX
            }
        }
    };
    if cap == 0 || deg + d > max {
        out.push(trim(prefix));
        return;
    }
    let mut x = 0;
    while x <= cap && deg + x * d <= max {
        let mut p = prefix.clone();
        p.push(x);
        enumerate(bounds, max, i + 1, p, out);
        x += 1;
    }
}

/// Conjugates `ξ̄_n = χ(ξ_n)` for `n ≤ count`, from `Σ_i ξ_{n−i}^{2^i} ξ̄_i = 0`.
pub fn conjugates(count: usize) -> Vec<Poly> {
    let mut out: Vec<Poly> = vec![Poly::from([Vec::new()])];
    for n in 1..=count {
        let mut acc = Poly::new();
        for (i, xb) in out.iter().enumerate() {
            let lead = Poly::from([xi_power(n - i, 1 << i)]);
            for m in poly_mul(&lead, xb) {
                if !acc.remove(&m) {
                    acc.insert(m);
                }
            }
        }
        out.push(acc);
    }
    out
}

pub fn poly_pow(p: &Poly, k: u32) -> Poly {
    let mut acc = Poly::from([Vec::new()]);
    for _ in 0..k {
        acc = poly_mul(&acc, p);
    }
    acc
}

/// A left `Γ`-comodule with a homogeneous basis; `coaction[b]` lists the
/// terms `γ ⊗ b'` of `ψ(b)`, including `1 ⊗ b`.
#[derive(Clone, Debug)]
pub struct OracleComodule {
    pub degrees: Vec<u32>,
    pub coaction: Vec<Vec<(u32, u32)>>,
}

impl OracleComodule {
    pub fn trivial() -> OracleComodule {
        OracleComodule {
            degrees: vec![0],
            coaction: vec![vec![(0, 0)]],
        }
    }

    /// The span of `elements` inside the full dual algebra, as a comodule
    /// over `gamma` through the coproduct followed by projection of the
    /// left factor. Fails unless the span is a left subcomodule.
    pub fn subcomodule_of_dual(gamma: &DualAlgebra, elements: &[Poly]) -> Result<OracleComodule, OracleError> {
        let top = elements
            .iter()
            .flat_map(|p| p.iter().map(|e| mono_degree(e)))
            .max()
            .unwrap_or(0);
        let full = DualAlgebra::full(top);
        let mut degrees = Vec::new();
        for p in elements {
            let ds: BTreeSet<u32> = p.iter().map(|e| mono_degree(e)).collect();
            if ds.len() != 1 {
                return Err(OracleError::NotHomogeneous);
            }
            degrees.push(*ds.iter().next().unwrap());
        }
        // Coordinates over full-algebra monomials, for solving.
        let vecs: Vec<BTreeSet<usize>> = elements
            .iter()
            .map(|p| p.iter().map(|e| full.index_of(e).unwrap()).collect())
            .collect();
        let express = |target: &BTreeSet<usize>| -> Option<Vec<u32>> {
            let cols = vecs.len();
            let rows: BTreeSet<usize> = vecs.iter().flatten().chain(target).copied().collect();
            let rows: Vec<usize> = rows.into_iter().collect();
            let m = crate::gf2::BitMatrix::from_fn(rows.len(), cols, |r, c| vecs[c].contains(&rows[r]));
            let b = crate::gf2::BitVec::from_bools(&rows.iter().map(|r| target.contains(r)).collect::<Vec<_>>());
            m.solve(&b).ok().flatten().map(|x| x.iter_ones().map(|i| i as u32).collect())
        };
        let mut coaction = Vec::new();
        for v in &vecs {
            let mut by_left: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
            for &m in v {
                for &(l, r) in full.coproduct(m) {
                    let set = by_left.entry(l as usize).or_default();
                    if !set.remove(&(r as usize)) {
                        set.insert(r as usize);
                    }
                }
            }
            let mut terms = Vec::new();
            for (l, rhs) in by_left {
                if rhs.is_empty() {
                    continue;
                }
                let coeffs = express(&rhs).ok_or(OracleError::NotSubcomodule)?;
                if let Some(g) = gamma.index_of(full.monomial(l)) {
                    terms.extend(coeffs.into_iter().map(|b| (g as u32, b)));
                }
            }
            terms.sort_unstable();
            coaction.push(terms);
        }
        Ok(OracleComodule { degrees, coaction })
    }

    /// `bo_i`: monomials of weight `≤ 4i` in `ξ̄₁⁴, ξ̄₂², ξ̄₃, ξ̄₄, …`
    /// (weight of `ξ̄_k` is `2^{k−1}`).
    pub fn bo(gamma: &DualAlgebra, i: u32) -> Result<OracleComodule, OracleError> {
        let w = 4 * i;
        let xb = conjugates(8);
        // generators (conjugate index k, power p) with weight p·2^{k−1}
        let gens: Vec<(usize, u32)> = (1..=8usize)
            .map(|k| (k, if k == 1 { 4 } else if k == 2 { 2 } else { 1 }))
            .filter(|&(k, p)| p << (k - 1) <= w.max(1))
            .collect();
        let mut elements = Vec::new();
        let mut stack = vec![(0usize, 0u32, Poly::from([Vec::new()]))];
        while let Some((g, weight, p)) = stack.pop() {
            if g == gens.len() {
                elements.push(p);
                continue;
            }
            let (k, pw) = gens[g];
            let step = pw << (k - 1);
            let mut e = 0;
            let mut cur = p;
            while weight + e * step <= w {
                stack.push((g + 1, weight + e * step, cur.clone()));
                cur = poly_mul(&cur, &poly_pow(&xb[k], pw));
                e += 1;
            }
        }
        elements.sort_by_key(|p| (p.iter().map(|e| mono_degree(e)).max(), p.clone()));
        Self::subcomodule_of_dual(gamma, &elements)
    }

    pub fn dim(&self) -> usize {
        self.degrees.len()
    }
}
