//! Cell objects: finite twisted complexes over the resolution of `F₂`.
//!
//! A cell object with cells `(s_c, t_c)` is realized as the free complex
//! `T_S = ⊕_c F_{S−s_c}[t_c]` with differential `d + A`, where the
//! attaching block `A_{c,c'}` (`c > c'`) has drop `s_c − s_{c'} + 1` and
//! shift `t_c − t_{c'}`. Cochains supported on cells `≤ c` form a
//! subcomplex, which gives the cell provenance of Ext classes.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::maps::{lift_chain_map, null_homotopy, FMap, Obstruction};
use super::resolution::FreeResolution;
use super::ResolveError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    pub label: String,
    pub s: usize,
    pub t: i32,
}

impl Cell {
    pub fn stem(&self) -> i32 {
        self.t - self.s as i32
    }
}

#[derive(Clone, Debug)]
pub struct CellObject {
    pub name: String,
    pub cells: Vec<Cell>,
    /// `A_{c,c'}` keyed by `(c, c')`, `c > c'`. Missing blocks are zero.
    pub attach: BTreeMap<(usize, usize), FMap>,
    /// Human-readable record of the self-map choices made while building.
    pub selections: Vec<String>,
}

/// A map of twisted complexes `T_{S+σ} → T_S` lowering internal degree by
/// `τ`, lower triangular in the cells.
#[derive(Clone, Debug)]
pub struct CellMap {
    pub sigma: usize,
    pub tau: i32,
    pub blocks: BTreeMap<(usize, usize), FMap>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellObstruction {
    pub block: (usize, usize),
    pub at: Obstruction,
}

impl std::fmt::Display for CellObstruction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "no null-homotopy for block {:?} (level {}, degree {})",
            self.block, self.at.level, self.at.degree
        )
    }
}

impl CellObject {
    pub fn point() -> CellObject {
        CellObject {
            name: "F2".into(),
            cells: vec![Cell {
                label: "0".into(),
                s: 0,
                t: 0,
            }],
            attach: BTreeMap::new(),
            selections: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Cell bidegrees as `(stem, s)`.
    pub fn bidegrees(&self) -> Vec<(i32, usize)> {
        self.cells.iter().map(|c| (c.stem(), c.s)).collect()
    }

    pub fn max_cell_s(&self) -> usize {
        self.cells.iter().map(|c| c.s).max().unwrap_or(0)
    }

    pub fn block_drop(&self, c: usize, c2: usize) -> usize {
        self.cells[c].s - self.cells[c2].s + 1
    }

    /// Solve for the off-diagonal blocks of a map with the given diagonal,
    /// in order of increasing distance from the diagonal.
    pub fn complete_map(
        &self,
        res: &FreeResolution,
        sigma: usize,
        tau: i32,
        diagonal: Vec<FMap>,
    ) -> Result<CellMap, CellObstruction> {
        assert_eq!(diagonal.len(), self.len());
        let mut blocks: BTreeMap<(usize, usize), FMap> = diagonal.into_iter().enumerate().map(|(c, f)| ((c, c), f)).collect();
        let n = self.len();
        for dist in 1..n {
            for c2 in 0..n - dist {
                let c = c2 + dist;
                let drop = sigma + self.cells[c].s - self.cells[c2].s;
                let shift = tau + self.cells[c].t - self.cells[c2].t;
                let mut q = FMap::zero(res, drop + 1, shift);
                let mut nonzero = false;
                for k in c2..c {
                    if let (Some(a), Some(phi)) = (self.attach.get(&(c, k)), blocks.get(&(k, c2))) {
                        q = q.add(&a.compose(res, phi));
                        nonzero = true;
                    }
                }
                for k in c2 + 1..=c {
                    if let (Some(phi), Some(a)) = (blocks.get(&(c, k)), self.attach.get(&(k, c2))) {
                        q = q.add(&phi.compose(res, a));
                        nonzero = true;
                    }
                }
                let block = if nonzero && q.images.iter().flatten().any(|x| !x.is_empty()) {
                    null_homotopy(res, &q).map_err(|at| CellObstruction { block: (c, c2), at })?
                } else {
                    FMap::zero(res, drop, shift)
                };
                blocks.insert((c, c2), block);
            }
        }
        Ok(CellMap { sigma, tau, blocks })
    }

    /// The action of a class of `Ext(F₂)` on the realized complex: diagonal
    /// lifts of the class, off-diagonal blocks by homotopy.
    pub fn product_map(
        &self,
        res: &FreeResolution,
        s: usize,
        t: i32,
        class: &[bool],
    ) -> Result<CellMap, ProductError> {
        let lam = lift_chain_map(res, s, t, class).map_err(ProductError::Resolve)?;
        self.complete_map(res, s, t, vec![lam; self.len()])
            .map_err(ProductError::Obstructed)
    }
}

#[derive(Debug)]
pub enum ProductError {
    Resolve(ResolveError),
    Obstructed(CellObstruction),
}

impl std::fmt::Display for ProductError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ProductError::Resolve(e) => write!(f, "{e}"),
            ProductError::Obstructed(o) => write!(f, "{o}"),
        }
    }
}

/// Cone on a self-map `phi: X → X` of shift `(σ, τ)`: the cells of `X`
/// followed by a copy shifted by `(σ − 1, τ)`, attached along `phi`.
pub fn cone(x: &CellObject, phi: &CellMap, name: &str) -> Result<CellObject, ResolveError> {
    if phi.sigma == 0 {
        return Err(ResolveError::Malformed("cone needs an attaching class of positive filtration".into()));
    }
    let n = x.len();
    if phi.blocks.values().all(|f| f.images.iter().flatten().all(|v| v.is_empty())) {
        return Err(ResolveError::ZeroAttachingClass);
    }
    let mut cells = x.cells.clone();
    for c in &x.cells {
        let s = c.s + phi.sigma - 1;
        let t = c.t + phi.tau;
        cells.push(Cell {
            label: (t - s as i32).to_string(),
            s,
            t,
        });
    }
    let mut attach = x.attach.clone();
    for (&(c, c2), f) in &x.attach {
        attach.insert((c + n, c2 + n), f.clone());
    }
    for (&(c, c2), f) in &phi.blocks {
        attach.insert((c + n, c2), f.clone());
    }
    Ok(CellObject {
        name: name.into(),
        cells,
        attach,
        selections: x.selections.clone(),
    })
}

/// Cone on a class `α ∈ Ext^{s,t}(F₂)` over the point.
pub fn cone_on_class(res: &FreeResolution, s: usize, t: i32, class: &[bool], name: &str) -> Result<CellObject, ResolveError> {
    if class.iter().all(|&b| !b) {
        return Err(ResolveError::ZeroAttachingClass);
    }
    let lam = lift_chain_map(res, s, t, class)?;
    let phi = CellMap {
        sigma: s,
        tau: t,
        blocks: BTreeMap::from([((0, 0), lam)]),
    };
    cone(&CellObject::point(), &phi, name)
}

/// The unique nonzero class in `Ext^{s,t}(F₂)`, if the group is a line.
pub fn unique_class(res: &FreeResolution, s: usize, t: i32) -> Option<Vec<bool>> {
    (res.ext_dim(s, t) == 1).then(|| vec![true])
}

/// `H(8)`: the cone on `h₀³`.
pub fn h8(res: &FreeResolution) -> Result<CellObject, ResolveError> {
    let h0_cubed = vec![true];
    if res.ext_dim(3, 3) != 1 {
        return Err(ResolveError::OutOfRange { s: 3, t: 3 });
    }
    cone_on_class(res, 3, 3, &h0_cubed, "H(8)")
}

#[derive(Clone, Debug)]
pub struct SelfMapCandidate {
    /// Diagonal classes, one coordinate vector per cell.
    pub diagonal: Vec<Vec<bool>>,
    pub map: CellMap,
}

#[derive(Clone, Debug)]
pub struct SelfMapSelection {
    pub s: usize,
    pub t: i32,
    pub candidates: Vec<SelfMapCandidate>,
    pub canonical: usize,
    /// For each off-diagonal block, the dimension of `Ext(F₂)` classes that
    /// could be added to it without breaking the chain-map equations.
    pub homotopy_freedom: BTreeMap<(usize, usize), usize>,
}

impl SelfMapSelection {
    pub fn is_ambiguous(&self) -> bool {
        self.candidates.len() > 1 || self.homotopy_freedom.values().any(|&d| d > 0)
    }

    pub fn chosen(&self) -> &SelfMapCandidate {
        &self.candidates[self.canonical]
    }

    pub fn describe(&self) -> String {
        let fmt_class = |v: &Vec<bool>| v.iter().map(|&b| if b { '1' } else { '0' }).collect::<String>();
        let diag: Vec<String> = self.chosen().diagonal.iter().map(fmt_class).collect();
        let freedom: Vec<String> = self
            .homotopy_freedom
            .iter()
            .map(|((a, b), d)| format!("{a}{b}:{d}"))
            .collect();
        format!(
            "self-map ({},{}): diagonal [{}], candidate {} of {}, homotopy freedom [{}]",
            self.s,
            self.t,
            diag.join(";"),
            self.canonical + 1,
            self.candidates.len(),
            freedom.join(",")
        )
    }
}

const MAX_SELF_MAP_COMBINATIONS: usize = 1 << 12;

/// Self-maps of `x` of shift `(s, t)` whose bottom-cell diagonal is the
/// lift of `bottom`. Other diagonal blocks range over all of
/// `Ext^{s,t}(F₂)`; a candidate survives if its off-diagonal blocks can be
/// solved. The canonical candidate has every diagonal equal to `bottom`
/// when that survives, otherwise the first survivor in enumeration order.
pub fn select_self_map(res: &FreeResolution, x: &CellObject, s: usize, t: i32, bottom: &[bool]) -> Result<SelfMapSelection, ResolveError> {
    let dim = res.ext_dim(s, t);
    if bottom.len() != dim {
        return Err(ResolveError::Malformed(format!("bottom class has wrong length for Ext^({s},{t})")));
    }
    let others = x.len() - 1;
    let bits = dim * others;
    if bits >= 63 || (1usize << bits) > MAX_SELF_MAP_COMBINATIONS {
        return Err(ResolveError::Malformed("too many self-map candidates to enumerate".into()));
    }
    let mut lifts: BTreeMap<Vec<bool>, FMap> = BTreeMap::new();
    let mut lift = |v: &Vec<bool>| -> Result<FMap, ResolveError> {
        if let Some(f) = lifts.get(v) {
            return Ok(f.clone());
        }
        let f = lift_chain_map(res, s, t, v)?;
        lifts.insert(v.clone(), f.clone());
        Ok(f)
    };
    let mut candidates = Vec::new();
    let mut canonical = None;
    for code in 0..(1usize << bits) {
        let mut diagonal = vec![bottom.to_vec()];
        for c in 0..others {
            diagonal.push((0..dim).map(|k| code >> (c * dim + k) & 1 == 1).collect());
        }
        let maps = diagonal.iter().map(&mut lift).collect::<Result<Vec<_>, _>>()?;
        if let Ok(map) = x.complete_map(res, s, t, maps) {
            if canonical.is_none() && diagonal.iter().all(|d| d == bottom) {
                canonical = Some(candidates.len());
            }
            candidates.push(SelfMapCandidate { diagonal, map });
        }
    }
    if candidates.is_empty() {
        return Err(ResolveError::NoSelfMap { s, t });
    }
    let mut homotopy_freedom = BTreeMap::new();
    for c in 0..x.len() {
        for c2 in 0..c {
            let drop = s + x.cells[c].s - x.cells[c2].s;
            let shift = t + x.cells[c].t - x.cells[c2].t;
            let d = if drop <= res.max_s() { res.ext_dim(drop, shift) } else { 0 };
            homotopy_freedom.insert((c, c2), d);
        }
    }
    Ok(SelfMapSelection {
        s,
        t,
        candidates,
        canonical: canonical.unwrap_or(0),
        homotopy_freedom,
    })
}

/// `H(8, v₁⁸)`: the cone on the canonical `v₁⁸` self-map of `H(8)`.
pub fn h8v18(res: &FreeResolution) -> Result<(CellObject, SelfMapSelection), ResolveError> {
    let base = h8(res)?;
    let v18 = unique_class(res, 8, 24).ok_or(ResolveError::OutOfRange { s: 8, t: 24 })?;
    let sel = select_self_map(res, &base, 8, 24, &v18)?;
    let mut x = cone(&base, &sel.chosen().map, "H(8,v1^8)")?;
    x.selections.push(format!("H(8,v1^8) {}", sel.describe()));
    Ok((x, sel))
}

/// Pairwise sums of cell bidegrees `(stem, s)`, sorted, with multiplicity.
pub fn cells_of_tensor(x: &CellObject, y: &CellObject) -> Vec<(i32, usize)> {
    let mut out: Vec<(i32, usize)> = x
        .bidegrees()
        .iter()
        .flat_map(|&(a, s)| y.bidegrees().into_iter().map(move |(b, r)| (a + b, s + r)))
        .collect();
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hopf::Profile;
    use crate::resolve::{algebra_for, minimal_resolution};

    #[test]
    fn h8_cells() {
        let r = minimal_resolution(algebra_for(&Profile::a(2), 40), 10, 40).unwrap();
        let x = h8(&r).unwrap();
        assert_eq!(x.bidegrees(), vec![(0, 0), (1, 2)]);
        assert!(cone_on_class(&r, 1, 1, &[false], "split").is_err());
    }

    #[test]
    fn identity_is_a_self_map() {
        let r = minimal_resolution(algebra_for(&Profile::a(2), 40), 10, 40).unwrap();
        let x = h8(&r).unwrap();
        let sel = select_self_map(&r, &x, 0, 0, &[true]).unwrap();
        assert!(sel.candidates.iter().any(|c| c.diagonal == vec![vec![true], vec![true]]));
    }

    #[test]
    fn h8v18_cells() {
        let r = minimal_resolution(algebra_for(&Profile::a(2), 40), 12, 40).unwrap();
        let (x, sel) = h8v18(&r).unwrap();
        assert_eq!(x.bidegrees(), vec![(0, 0), (1, 2), (17, 7), (18, 9)]);
        assert!(!sel.candidates.is_empty());
        let sq = cells_of_tensor(&x, &x);
        assert_eq!(sq.len(), 16);
        let mut distinct = sq.clone();
        distinct.dedup();
        assert_eq!(
            distinct,
            vec![(0, 0), (1, 2), (2, 4), (17, 7), (18, 9), (19, 11), (34, 14), (35, 16), (36, 18)]
        );
    }
}
