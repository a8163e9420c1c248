//! Bounded complexes of free modules over a profile algebra.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::gf2::BitVec;
use crate::hopf::Algebra;

/// Sparse free-module element: sorted `(generator, algebra basis index)`
/// pairs with no repeats.
pub type Sparse = Vec<(u32, u32)>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub degree: i32,
    /// Differential as a sparse element of the level below.
    pub d: Sparse,
}

/// Mod-2 accumulator for sparse elements.
#[derive(Default)]
pub struct SparseAcc(BTreeMap<(u32, u32), ()>);

impl SparseAcc {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn toggle(&mut self, key: (u32, u32)) {
        if self.0.remove(&key).is_none() {
            self.0.insert(key, ());
        }
    }

    pub fn add(&mut self, x: &[(u32, u32)]) {
        for &k in x {
            self.toggle(k);
        }
    }

    /// Add `a · x` for an algebra basis index `a`.
    pub fn add_product(&mut self, alg: &Algebra, a: usize, x: &[(u32, u32)]) {
        for &(g, c) in x {
            for &p in alg.product(a, c as usize) {
                self.toggle((g, p));
            }
        }
    }

    pub fn finish(self) -> Sparse {
        self.0.into_keys().collect()
    }
}

/// `a · x` for an algebra basis index `a`.
pub fn left_multiply(alg: &Algebra, a: usize, x: &[(u32, u32)]) -> Sparse {
    let mut acc = SparseAcc::new();
    acc.add_product(alg, a, x);
    acc.finish()
}

pub fn sparse_sum(x: &[(u32, u32)], y: &[(u32, u32)]) -> Sparse {
    let mut acc = SparseAcc::new();
    acc.add(x);
    acc.add(y);
    acc.finish()
}

/// Coordinates of `(F_k)_t`: one block per generator `g` with
/// `0 ≤ t − |g| ≤` algebra bound, holding the algebra basis in degree
/// `t − |g|`. Blocks are in generator order.
#[derive(Clone, Debug)]
pub struct Layout {
    pub degree: i32,
    pub dim: usize,
    /// (generator, offset, first algebra index, block length)
    pub blocks: Vec<(u32, u32, u32, u32)>,
    block_of: Vec<u32>,
}

const ABSENT: u32 = u32::MAX;

impl Layout {
    #[inline]
    pub fn position(&self, gen: u32, alg_index: u32) -> Option<usize> {
        let b = *self.block_of.get(gen as usize)?;
        if b == ABSENT {
            return None;
        }
        let (_, off, start, len) = self.blocks[b as usize];
        let k = alg_index.checked_sub(start)?;
        (k < len).then_some((off + k) as usize)
    }

    /// Position of `(gen, index)`; panics if the pair is not homogeneous
    /// of this layout's degree.
    #[inline]
    pub fn pos(&self, gen: u32, alg_index: u32) -> usize {
        self.position(gen, alg_index)
            .unwrap_or_else(|| panic!("({gen},{alg_index}) not in layout of degree {}", self.degree))
    }

    pub fn encode(&self, x: &[(u32, u32)]) -> BitVec {
        let mut v = BitVec::zeros(self.dim);
        for &(g, a) in x {
            v.flip(self.pos(g, a));
        }
        v
    }

    pub fn decode(&self, v: &BitVec) -> Sparse {
        let mut out = Vec::with_capacity(v.count_ones());
        let mut b = 0;
        for p in v.iter_ones() {
            while (self.blocks[b].1 + self.blocks[b].3) as usize <= p {
                b += 1;
            }
            let (g, off, start, _) = self.blocks[b];
            out.push((g, start + (p as u32 - off)));
        }
        out
    }

    /// Basis element at position `p`.
    pub fn entry(&self, p: usize) -> (u32, u32) {
        let b = self
            .blocks
            .partition_point(|blk| (blk.1 + blk.3) as usize <= p);
        let (g, off, start, _) = self.blocks[b];
        (g, start + (p as u32 - off))
    }
}

/// A free complex `C_0 ← C_1 ← …` truncated at `max_t` in internal degree.
#[derive(Clone, Debug)]
pub struct FreeComplex {
    alg: Arc<Algebra>,
    levels: Vec<Vec<Generator>>,
    /// Per level, generator indices sorted by (degree, index).
    by_degree: Vec<Vec<u32>>,
    max_t: i32,
}

impl FreeComplex {
    pub fn new(alg: Arc<Algebra>, levels: Vec<Vec<Generator>>, max_t: i32) -> Self {
        let by_degree = levels.iter().map(|gens| sort_by_degree(gens)).collect();
        FreeComplex {
            alg,
            levels,
            by_degree,
            max_t,
        }
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.alg
    }

    pub fn max_t(&self) -> i32 {
        self.max_t
    }

    /// Number of levels present (`C_0 … C_{n-1}`).
    pub fn num_levels(&self) -> usize {
        self.levels.len()
    }

    pub fn level(&self, k: usize) -> &[Generator] {
        self.levels.get(k).map_or(&[], |v| v.as_slice())
    }

    pub fn generator(&self, k: usize, g: usize) -> &Generator {
        &self.levels[k][g]
    }

    pub(crate) fn push_level(&mut self, gens: Vec<Generator>) {
        self.by_degree.push(sort_by_degree(&gens));
        self.levels.push(gens);
    }

    pub(crate) fn push_generator(&mut self, k: usize, g: Generator) {
        let idx = self.levels[k].len() as u32;
        let deg = g.degree;
        self.levels[k].push(g);
        let order = &mut self.by_degree[k];
        let at = order.partition_point(|&i| self.levels[k][i as usize].degree <= deg);
        order.insert(at, idx);
    }

    /// Generator indices of level `k` with degree in `lo..=hi`, ascending.
    pub fn generators_in_degrees(&self, k: usize, lo: i32, hi: i32) -> Vec<u32> {
        let Some(order) = self.by_degree.get(k) else {
            return Vec::new();
        };
        let gens = &self.levels[k];
        let a = order.partition_point(|&i| gens[i as usize].degree < lo);
        let b = order.partition_point(|&i| gens[i as usize].degree <= hi);
        let mut v = order[a..b].to_vec();
        v.sort_unstable();
        v
    }

    pub fn count_in_degree(&self, k: usize, t: i32) -> usize {
        self.generators_in_degrees(k, t, t).len()
    }

    pub fn layout(&self, k: usize, t: i32) -> Layout {
        let alg = &self.alg;
        let lo = t - alg.max_degree() as i32;
        let gens = self.generators_in_degrees(k, lo, t);
        let n = self.levels.get(k).map_or(0, |v| v.len());
        let mut block_of = vec![ABSENT; n];
        let mut blocks = Vec::with_capacity(gens.len());
        let mut off = 0u32;
        for g in gens {
            let e = (t - self.levels[k][g as usize].degree) as i64;
            let len = alg.dim_in_degree(e) as u32;
            if len == 0 {
                continue;
            }
            block_of[g as usize] = blocks.len() as u32;
            blocks.push((g, off, alg.degree_start(e as u32) as u32, len));
            off += len;
        }
        Layout {
            degree: t,
            dim: off as usize,
            blocks,
            block_of,
        }
    }

    /// `d(Σ a_i g_i) = Σ a_i d(g_i)` for a sparse element of level `k ≥ 1`.
    pub fn apply_d(&self, k: usize, x: &[(u32, u32)]) -> Sparse {
        let mut acc = SparseAcc::new();
        for &(g, a) in x {
            acc.add_product(&self.alg, a as usize, &self.levels[k][g as usize].d);
        }
        acc.finish()
    }

    /// Check `d∘d = 0` on every generator.
    pub fn check_d_squared(&self) -> Result<(), (usize, usize)> {
        for k in 2..self.levels.len() {
            for (g, gen) in self.levels[k].iter().enumerate() {
                if !self.apply_d(k - 1, &gen.d).is_empty() {
                    return Err((k, g));
                }
            }
        }
        Ok(())
    }

    /// True when no differential has a degree-zero (unit) coefficient.
    pub fn is_minimal(&self) -> bool {
        self.levels
            .iter()
            .flatten()
            .all(|g| g.d.iter().all(|&(_, a)| a != 0))
    }
}

fn sort_by_degree(gens: &[Generator]) -> Vec<u32> {
    let mut order: Vec<u32> = (0..gens.len() as u32).collect();
    order.sort_by_key(|&i| (gens[i as usize].degree, i));
    order
}
