//! `Cotor_Γ(F₂, N)` two ways: a minimal cofree resolution of `N`
//! (primitives of successive cokernels), and the literal reduced cobar
//! complex for tiny ranges.

use std::collections::{BTreeMap, HashMap};

use super::dual::{DualAlgebra, OracleComodule};
use super::OracleError;
use crate::gf2::{BitMatrix, BitVec, Reducer};

/// Upper bound on the dimension of any single graded piece handled.
pub const BUDGET: usize = 200_000;

/// Nonzero `dim Cotor^{s,t}`.
pub type CotorDims = BTreeMap<(usize, u32), usize>;

/// A comodule truncated to degrees `≤ max_t`, indexed by degree.
struct Graded {
    /// `by_deg[d]` lists global basis ids.
    by_deg: Vec<Vec<u32>>,
    local: Vec<u32>,
    degree: Vec<u32>,
    coaction: Vec<Vec<(u32, u32)>>,
}

impl Graded {
    fn from_comodule(n: &OracleComodule, max_t: u32) -> Graded {
        let keep: Vec<usize> = (0..n.dim()).filter(|&b| n.degrees[b] <= max_t).collect();
        let remap: HashMap<usize, u32> = keep.iter().enumerate().map(|(i, &b)| (b, i as u32)).collect();
        let mut g = Graded {
            by_deg: vec![Vec::new(); max_t as usize + 1],
            local: Vec::new(),
            degree: Vec::new(),
            coaction: Vec::new(),
        };
        for &b in &keep {
            let id = g.degree.len() as u32;
            let d = n.degrees[b];
            g.local.push(g.by_deg[d as usize].len() as u32);
            g.by_deg[d as usize].push(id);
            g.degree.push(d);
            g.coaction.push(
                n.coaction[b]
                    .iter()
                    .filter_map(|&(c, x)| remap.get(&(x as usize)).map(|&y| (c, y)))
                    .collect(),
            );
        }
        g
    }
}

/// Primitives of `c` in degree `d`, as kernel vectors over `by_deg[d]`.
fn primitives(c: &Graded, d: usize) -> Vec<BitVec> {
    let ids = &c.by_deg[d];
    let mut rows: HashMap<(u32, u32), usize> = HashMap::new();
    let mut cols: Vec<Vec<usize>> = Vec::with_capacity(ids.len());
    for &b in ids {
        let mut col = Vec::new();
        for &(g, x) in &c.coaction[b as usize] {
            if g == 0 {
                continue;
            }
            let n = rows.len();
            col.push(*rows.entry((g, x)).or_insert(n));
        }
        cols.push(col);
    }
    let mut m = BitMatrix::zeros(rows.len(), ids.len());
    for (j, col) in cols.iter().enumerate() {
        for &r in col {
            let v = !m.get(r, j);
            m.set(r, j, v);
        }
    }
    m.kernel_basis()
}

/// One cofree step: returns the primitives (dims per degree) of `c` and
/// the cokernel of `c → Γ ⊗ P(c)`.
fn step(gamma: &DualAlgebra, c: &Graded, max_t: u32) -> Result<(Vec<usize>, Graded), OracleError> {
    let top = max_t as usize;
    // P basis: (degree, kernel vector); retraction reads the free column.
    let mut prims: Vec<(u32, usize)> = Vec::new(); // (degree, free column local index)
    let mut prim_of: HashMap<u32, u32> = HashMap::new(); // c basis id → P id
    let mut dims = vec![0; top + 1];
    for d in 0..=top {
        for v in primitives(c, d) {
            let ids = &c.by_deg[d];
            // kernel_basis puts the defining 1 at the free column; it is the
            // only free column set, so the first free-looking bit is found
            // by testing which set bit is not a pivot of the others. The
            // canonical basis lists free columns in increasing order, so the
            // last set bit is always the free one.
            let f = v.iter_ones().last().expect("nonzero kernel vector");
            prim_of.insert(ids[f], prims.len() as u32);
            prims.push((d as u32, f));
            dims[d] += 1;
        }
    }
    // E = Γ ⊗ P, indexed per degree.
    let mut e_index: Vec<HashMap<(u32, u32), usize>> = vec![HashMap::new(); top + 1];
    let mut e_basis: Vec<Vec<(u32, u32)>> = vec![Vec::new(); top + 1];
    for (p, &(pd, _)) in prims.iter().enumerate() {
        for g in 0..gamma.dim() {
            let d = gamma.degree(g) + pd;
            if d > max_t {
                continue;
            }
            let slot = &mut e_basis[d as usize];
            e_index[d as usize].insert((g as u32, p as u32), slot.len());
            slot.push((g as u32, p as u32));
        }
    }
    for (d, b) in e_basis.iter().enumerate() {
        if b.len() > BUDGET {
            return Err(OracleError::Budget { degree: d as u32, size: b.len() });
        }
    }
    // Image of c in E, reduced per degree.
    let mut reducers: Vec<Reducer> = e_basis.iter().map(|b| Reducer::new(b.len())).collect();
    for d in 0..=top {
        for &b in &c.by_deg[d] {
            let mut v = BitVec::zeros(e_basis[d].len());
            for &(g, x) in &c.coaction[b as usize] {
                if let Some(&p) = prim_of.get(&x) {
                    v.flip(e_index[d][&(g, p)]);
                }
            }
            if reducers[d].insert_untracked(v).is_none() {
                return Err(OracleError::Internal("comodule map into the cofree hull is not injective".into()));
            }
        }
    }
    // Cokernel basis: non-pivot positions.
    let mut next = Graded {
        by_deg: vec![Vec::new(); top + 1],
        local: Vec::new(),
        degree: Vec::new(),
        coaction: Vec::new(),
    };
    let mut q_of: Vec<Vec<Option<u32>>> = Vec::with_capacity(top + 1);
    for d in 0..=top {
        let mut is_pivot = vec![false; e_basis[d].len()];
        for p in reducers[d].pivots() {
            is_pivot[p] = true;
        }
        let mut map = vec![None; e_basis[d].len()];
        for (pos, piv) in is_pivot.iter().enumerate() {
            if !piv {
                let id = next.degree.len() as u32;
                map[pos] = Some(id);
                next.local.push(next.by_deg[d].len() as u32);
                next.by_deg[d].push(id);
                next.degree.push(d as u32);
            }
        }
        q_of.push(map);
    }
    let project = |d: usize, pos: usize| -> Vec<u32> {
        let mut v = BitVec::zeros(e_basis[d].len());
        v.set(pos, true);
        reducers[d].reduce(&mut v);
        v.iter_ones().map(|i| q_of[d][i].expect("reduced vectors avoid pivots")).collect()
    };
    for d in 0..=top {
        for (pos, &(g, p)) in e_basis[d].iter().enumerate() {
            if q_of[d][pos].is_none() {
                continue;
            }
            let mut acc: BTreeMap<(u32, u32), bool> = BTreeMap::new();
            for &(l, r) in gamma.coproduct(g as usize) {
                let dd = d - gamma.degree(l as usize) as usize;
                let rpos = e_index[dd][&(r, p)];
                for y in project(dd, rpos) {
                    let e = acc.entry((l, y)).or_insert(false);
                    *e = !*e;
                }
            }
            next.coaction
                .push(acc.into_iter().filter(|&(_, on)| on).map(|(k, _)| k).collect());
        }
    }
    Ok((dims, next))
}

/// `dim Cotor^{s,t}_Γ(F₂, N)` for `s ≤ max_s`, `t ≤ max_t`.
pub fn cotor(gamma: &DualAlgebra, n: &OracleComodule, max_s: usize, max_t: u32) -> Result<CotorDims, OracleError> {
    if gamma.max_degree() < max_t {
        return Err(OracleError::Internal(format!(
            "dual algebra materialized to degree {}, need {max_t}",
            gamma.max_degree()
        )));
    }
    let mut c = Graded::from_comodule(n, max_t);
    let mut out = CotorDims::new();
    for s in 0..=max_s {
        let (dims, next) = step(gamma, &c, max_t)?;
        for (t, &k) in dims.iter().enumerate() {
            if k > 0 {
                out.insert((s, t as u32), k);
            }
        }
        c = next;
    }
    Ok(out)
}

/// The reduced cobar complex `Γ̄^{⊗s}` with trivial coefficients in
/// internal degrees `≤ max_t`.
pub struct CobarComplex<'a> {
    gamma: &'a DualAlgebra,
    max_t: u32,
    /// `cells[s][t]`: tuples of positive-degree basis indices.
    cells: Vec<Vec<Vec<Vec<u32>>>>,
}

impl<'a> CobarComplex<'a> {
    pub fn new(gamma: &'a DualAlgebra, max_s: usize, max_t: u32) -> Result<CobarComplex<'a>, OracleError> {
        let mut cells = vec![vec![Vec::new(); max_t as usize + 1]; max_s + 2];
        cells[0][0].push(Vec::new());
        for s in 1..=max_s + 1 {
            for t in 0..=max_t as usize {
                let mut here = Vec::new();
                for g in 1..gamma.dim() {
                    let dg = gamma.degree(g) as usize;
                    if dg > t {
                        break;
                    }
                    for tail in &cells[s - 1][t - dg] {
                        let mut v = vec![g as u32];
                        v.extend_from_slice(tail);
                        here.push(v);
                    }
                }
                if here.len() > BUDGET {
                    return Err(OracleError::Budget { degree: t as u32, size: here.len() });
                }
                cells[s][t] = here;
            }
        }
        Ok(CobarComplex { gamma, max_t, cells })
    }

    fn index(&self, s: usize, t: usize) -> HashMap<&[u32], usize> {
        self.cells[s][t].iter().enumerate().map(|(i, c)| (c.as_slice(), i)).collect()
    }

    /// Matrix of `d: C^s_t → C^{s+1}_t` (columns are sources).
    pub fn differential(&self, s: usize, t: usize) -> BitMatrix {
        let tgt = self.index(s + 1, t);
        let src = &self.cells[s][t];
        let mut m = BitMatrix::zeros(self.cells[s + 1][t].len(), src.len());
        for (j, cell) in src.iter().enumerate() {
            for i in 0..cell.len() {
                for &(l, r) in self.gamma.coproduct(cell[i] as usize) {
                    if l == 0 || r == 0 {
                        continue;
                    }
                    let mut w = cell[..i].to_vec();
                    w.push(l);
                    w.push(r);
                    w.extend_from_slice(&cell[i + 1..]);
                    let row = tgt[w.as_slice()];
                    let v = !m.get(row, j);
                    m.set(row, j, v);
                }
            }
        }
        m
    }

    /// `d∘d = 0` on every basis element in range.
    pub fn check_d_squared(&self) -> bool {
        (0..self.cells.len().saturating_sub(2)).all(|s| {
            (0..=self.max_t as usize).all(|t| {
                let a = self.differential(s, t);
                let b = self.differential(s + 1, t);
                b.multiply(&a).map(|p| (0..p.rows()).all(|r| p.row(r).is_zero())).unwrap_or(false)
            })
        })
    }

    pub fn cohomology(&self) -> CotorDims {
        let mut out = CotorDims::new();
        for s in 0..self.cells.len() - 1 {
            for t in 0..=self.max_t as usize {
                let n = self.cells[s][t].len();
                if n == 0 {
                    continue;
                }
                let z = n - self.differential(s, t).rank();
                let b = if s == 0 { 0 } else { self.differential(s - 1, t).rank() };
                if z > b {
                    out.insert((s, t as u32), z - b);
                }
            }
        }
        out
    }
}
