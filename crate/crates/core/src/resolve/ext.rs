//! Ext charts: cohomology of `Hom_A(T, M)` for a realized cell object `T`
//! and a finite coefficient module `M`, with product actions and cell
//! provenance of every class.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use super::cell::{CellMap, CellObject};
use super::maps::lift_chain_map;
use super::resolution::FreeResolution;
use super::ResolveError;
use crate::comod::FiniteModule;
use crate::gf2::{BitMatrix, BitVec, Reducer};

/// A class of `Ext(F₂)` used as a product operator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedClass {
    pub name: String,
    pub s: usize,
    pub t: i32,
    /// Coordinates over the level-`s` generators of degree `t`.
    pub class: Vec<bool>,
}

impl NamedClass {
    pub fn stem(&self) -> i32 {
        self.t - self.s as i32
    }
}

/// Named classes of `Ext(F₂)` located by bidegree: `h0`, `h1`, `h2`, `h3`,
/// `h4` on the 1-line, and `v1^4` (stem 8), `g` (stem 20), `v1^8` (stem 16)
/// on the 4- and 8-lines. A name is returned only when its group is a line.
pub fn standard_class(res: &FreeResolution, name: &str) -> Option<NamedClass> {
    let (s, t) = match name {
        "h0" => (1, 1),
        "h1" => (1, 2),
        "h2" => (1, 4),
        "h3" => (1, 8),
        "h4" => (1, 16),
        "v1^4" => (4, 12),
        "g" => (4, 24),
        "v1^8" => (8, 24),
        _ => return power_class(res, name),
    };
    (s <= res.max_s() && t <= res.max_t() && res.ext_dim(s, t) == 1).then(|| NamedClass {
        name: name.into(),
        s,
        t,
        class: vec![true],
    })
}

/// `h_i^k` for names like `h0^3`, by iterated Yoneda products. Unlike the
/// named generators the result may be zero.
fn power_class(res: &FreeResolution, name: &str) -> Option<NamedClass> {
    let (base, k) = name.split_once('^')?;
    let k: usize = k.parse().ok().filter(|&k| k >= 1)?;
    if !base.starts_with('h') {
        return None;
    }
    let x = standard_class(res, base)?;
    let mut acc = x.clone();
    for _ in 1..k {
        acc = yoneda_product(res, &acc, &x).ok()?;
    }
    acc.name = name.into();
    Some(acc)
}

/// Yoneda product of two classes of `Ext(F₂)`: `[a ∘ λ_b]`.
pub fn yoneda_product(res: &FreeResolution, a: &NamedClass, b: &NamedClass) -> Result<NamedClass, ResolveError> {
    let (s, t) = (a.s + b.s, a.t + b.t);
    if !res.in_range(s, t) {
        return Err(ResolveError::OutOfRange { s, t });
    }
    let lam = lift_chain_map(res, b.s, b.t, &b.class)?;
    let a_gens = res.generators_in_degree(a.s, a.t);
    let support: Vec<u32> = a_gens.iter().zip(&a.class).filter(|(_, &on)| on).map(|(&g, _)| g).collect();
    let class = res
        .generators_in_degree(s, t)
        .iter()
        .map(|&g| {
            lam.images[a.s][g as usize]
                .iter()
                .filter(|&&(h, x)| x == 0 && support.contains(&h))
                .count()
                % 2
                == 1
        })
        .collect();
    Ok(NamedClass {
        name: format!("{}*{}", a.name, b.name),
        s,
        t,
        class,
    })
}

/// Coefficients: `F₂` in degree 0 or a finite module.
#[derive(Clone, Copy)]
pub enum Coeff<'a> {
    F2,
    Module(&'a FiniteModule),
}

const UNIT: [u32; 1] = [0];

impl<'a> Coeff<'a> {
    fn in_degree(&self, d: i32) -> &'a [u32] {
        match self {
            Coeff::F2 => {
                if d == 0 {
                    &UNIT
                } else {
                    &[]
                }
            }
            Coeff::Module(m) => m.indices_in_degree(d),
        }
    }

    fn act(&self, a: usize, j: usize) -> &'a [u32] {
        match self {
            Coeff::F2 => {
                if a == 0 {
                    &UNIT
                } else {
                    &[]
                }
            }
            Coeff::Module(m) => m.act(a, j),
        }
    }

    fn degree_range(&self) -> (i32, i32) {
        match self {
            Coeff::F2 => (0, 0),
            Coeff::Module(m) => (m.min_degree().unwrap_or(0), m.max_degree().unwrap_or(-1)),
        }
    }
}

/// Basis of `Hom(T_S, M)` in internal degree `t`: `(cell, generator, m)`
/// sorted by cell, so cochains on cells `≤ c` form a prefix.
struct Cochains {
    coords: Vec<(usize, u32, u32)>,
    index: HashMap<(usize, u32, u32), usize>,
    by_gen: BTreeMap<(usize, u32), Vec<(u32, usize)>>,
    cell_end: Vec<usize>,
}

impl Cochains {
    fn len(&self) -> usize {
        self.coords.len()
    }
}

/// One bidegree of the chart with its class representatives.
struct Group {
    cochains: Cochains,
    reps: Vec<BitVec>,
    rep_cells: Vec<usize>,
    reducer: Reducer,
    rep_slot: HashMap<usize, usize>,
}

impl Group {
    fn decompose(&self, z: &BitVec) -> Option<Vec<bool>> {
        let tag = self.reducer.solve(z)?;
        let mut out = vec![false; self.reps.len()];
        for i in tag.iter_ones() {
            if let Some(&k) = self.rep_slot.get(&i) {
                out[k] = true;
            }
        }
        Some(out)
    }
}

struct HomComplex<'a> {
    res: &'a FreeResolution,
    x: &'a CellObject,
    coeff: Coeff<'a>,
}

impl HomComplex<'_> {
    fn cochains(&self, s: usize, t: i32) -> Cochains {
        let (lo, hi) = self.coeff.degree_range();
        let mut coords = Vec::new();
        let mut cell_end = Vec::with_capacity(self.x.len());
        for (c, cell) in self.x.cells.iter().enumerate() {
            if s >= cell.s && s - cell.s <= self.res.max_s() {
                let level = s - cell.s;
                let top = t - cell.t;
                for g in self.res.complex().generators_in_degrees(level, top - hi, top - lo) {
                    let md = top - self.res.generators(level)[g as usize].degree;
                    for &m in self.coeff.in_degree(md) {
                        coords.push((c, g, m));
                    }
                }
            }
            cell_end.push(coords.len());
        }
        let index = coords.iter().enumerate().map(|(i, &k)| (k, i)).collect();
        let mut by_gen: BTreeMap<(usize, u32), Vec<(u32, usize)>> = BTreeMap::new();
        for (i, &(c, g, m)) in coords.iter().enumerate() {
            by_gen.entry((c, g)).or_default().push((m, i));
        }
        Cochains {
            coords,
            index,
            by_gen,
            cell_end,
        }
    }

    /// Flip `(c', g', m')` entries of `out` for every `a·f(c, g)` term,
    /// where `terms` lists `(c, g, a)` and `f` is given on `src`.
    fn push_terms(&self, terms: &[(usize, u32, u32)], src: &Cochains, f: &dyn Fn(usize) -> bool, c2: usize, g2: u32, dst: &Cochains, out: &mut dyn FnMut(usize)) {
        for &(c, g, a) in terms {
            if let Some(ms) = src.by_gen.get(&(c, g)) {
                for &(m, col) in ms {
                    if !f(col) {
                        continue;
                    }
                    for &m2 in self.coeff.act(a as usize, m as usize) {
                        let row = dst.index[&(c2, g2, m2)];
                        out(row);
                    }
                }
            }
        }
    }

    /// The terms `(cell, generator, algebra index)` of `D` applied to
    /// generator `g2` of cell `c2` in total level `s2`.
    fn differential_terms(&self, s2: usize, c2: usize, g2: u32) -> Vec<(usize, u32, u32)> {
        let level = s2 - self.x.cells[c2].s;
        let mut terms: Vec<(usize, u32, u32)> = self.res.generators(level)[g2 as usize]
            .d
            .iter()
            .map(|&(g, a)| (c2, g, a))
            .collect();
        for c in c2 + 1..self.x.len() {
            if let Some(f) = self.x.attach.get(&(c, c2)) {
                if let Some(j) = level.checked_sub(f.drop) {
                    if j < f.len() {
                        terms.extend(f.images[j][g2 as usize].iter().map(|&(g, a)| (c, g, a)));
                    }
                }
            }
        }
        terms
    }

    /// `δ: C^{s,t} → C^{s+1,t}` (rows: target).
    fn delta(&self, s: usize, src: &Cochains, dst: &Cochains) -> BitMatrix {
        let mut m = BitMatrix::zeros(dst.len(), src.len());
        for &(c2, g2) in dst.by_gen.keys() {
            let terms = self.differential_terms(s + 1, c2, g2);
            for &(c, g, a) in &terms {
                if let Some(ms) = src.by_gen.get(&(c, g)) {
                    for &(mm, col) in ms {
                        for &m2 in self.coeff.act(a as usize, mm as usize) {
                            let row = dst.index[&(c2, g2, m2)];
                            m.set(row, col, !m.get(row, col));
                        }
                    }
                }
            }
        }
        m
    }

    fn group(&self, s: usize, t: i32) -> Group {
        let src = self.cochains(s, t);
        let n = src.len();
        let dst = self.cochains(s + 1, t);
        let delta = self.delta(s, &src, &dst);
        let prev = if s > 0 {
            let p = self.cochains(s - 1, t);
            Some(self.delta(s - 1, &p, &src))
        } else {
            None
        };
        let n_image = prev.as_ref().map_or(0, |p| p.cols());
        let mut reducer = Reducer::with_capacity(n, n_image + n);
        if let Some(p) = &prev {
            for j in 0..p.cols() {
                reducer.insert(p.column(j));
            }
        }
        let mut reps = Vec::new();
        let mut rep_cells = Vec::new();
        let mut rep_slot = HashMap::new();
        let mut last_end = 0;
        for (c, &end) in src.cell_end.iter().enumerate() {
            if end == last_end {
                continue;
            }
            last_end = end;
            let sub = BitMatrix::from_fn(delta.rows(), end, |i, j| delta.get(i, j));
            for kv in sub.kernel_basis() {
                let v = kv.resized(n);
                let slot = reducer.inserted();
                if reducer.insert(v.clone()).is_some() {
                    rep_slot.insert(slot, reps.len());
                    reps.push(v);
                    rep_cells.push(c);
                }
            }
        }
        Group {
            cochains: src,
            reps,
            rep_cells,
            reducer,
            rep_slot,
        }
    }

    /// `f ∘ Θ` for a cochain `f` on `src`.
    fn apply_map(&self, map: &CellMap, s: usize, f: &BitVec, src: &Cochains, dst: &Cochains) -> BitVec {
        let mut out = BitVec::zeros(dst.len());
        let on = |col: usize| f.get(col);
        for &(c2, g2) in dst.by_gen.keys() {
            let level = s + map.sigma - self.x.cells[c2].s;
            let mut terms = Vec::new();
            for c in c2..self.x.len() {
                if let Some(b) = map.blocks.get(&(c, c2)) {
                    if let Some(j) = level.checked_sub(b.drop) {
                        if j < b.len() {
                            terms.extend(b.images[j][g2 as usize].iter().map(|&(g, a)| (c, g, a)));
                        }
                    }
                }
            }
            self.push_terms(&terms, src, &on, c2, g2, dst, &mut |row| out.flip(row));
        }
        out
    }
}

/// Chart computation bounds. `stems` is a half-open window `[a, b)`.
#[derive(Clone, Debug, Default)]
pub struct ChartOptions {
    pub max_s: Option<usize>,
    pub max_t: Option<i32>,
    pub stems: Option<(i32, i32)>,
    pub min_s: usize,
    pub products: Vec<NamedClass>,
}

impl ChartOptions {
    pub fn with_products(res: &FreeResolution, names: &[&str]) -> ChartOptions {
        ChartOptions {
            products: names.iter().filter_map(|n| standard_class(res, n)).collect(),
            ..ChartOptions::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassGroup {
    pub dim: usize,
    /// Cell label carrying each class.
    pub cells: Vec<String>,
    pub names: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductTable {
    pub s: usize,
    pub t: i32,
    /// Source bidegree → matrix (rows: target classes, cols: source).
    /// Only pairs with both groups nonzero and in range are stored.
    pub maps: BTreeMap<(usize, i32), BitMatrix>,
}

/// Bigraded dimensions with products and provenance. Bidegrees are `(s, t)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtChart {
    pub algebra: String,
    pub descriptor: String,
    pub max_s: usize,
    pub max_t: i32,
    pub min_s: usize,
    pub stems: Option<(i32, i32)>,
    pub cell_labels: Vec<String>,
    pub groups: BTreeMap<(usize, i32), ClassGroup>,
    pub products: BTreeMap<String, ProductTable>,
    pub notes: Vec<String>,
}

impl ExtChart {
    pub fn empty(algebra: &str, descriptor: &str) -> ExtChart {
        ExtChart {
            algebra: algebra.into(),
            descriptor: descriptor.into(),
            max_s: 0,
            max_t: 0,
            min_s: 0,
            stems: None,
            cell_labels: Vec::new(),
            groups: BTreeMap::new(),
            products: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    pub fn dim(&self, s: usize, t: i32) -> usize {
        self.groups.get(&(s, t)).map_or(0, |g| g.dim)
    }

    pub fn in_range(&self, s: usize, t: i32) -> bool {
        let stem = t - s as i32;
        s >= self.min_s
            && s <= self.max_s
            && t <= self.max_t
            && self.stems.is_none_or(|(a, b)| stem >= a && stem < b)
    }

    /// Dimension by `(stem, s)`.
    pub fn dim_at_stem(&self, stem: i32, s: usize) -> usize {
        self.dim(s, stem + s as i32)
    }

    /// The product matrix from `(s, t)`, or a zero matrix of the right
    /// shape when either side vanishes. `None` if the product is unknown
    /// or the target is out of range.
    pub fn product(&self, name: &str, s: usize, t: i32) -> Option<BitMatrix> {
        let p = self.products.get(name)?;
        let (s2, t2) = (s + p.s, t + p.t);
        if !self.in_range(s2, t2) || !self.in_range(s, t) {
            return None;
        }
        Some(
            p.maps
                .get(&(s, t))
                .cloned()
                .unwrap_or_else(|| BitMatrix::zeros(self.dim(s2, t2), self.dim(s, t))),
        )
    }

    /// Name every one-dimensional group `x_{stem,s}(tag)`.
    pub fn name_lines(&mut self, tag: &str) {
        for (&(s, t), g) in self.groups.iter_mut() {
            if g.dim == 1 {
                g.names = vec![format!("x_{{{},{}}}({tag})", t - s as i32, s)];
            }
        }
    }
}

/// Ext of a cell object with coefficients.
pub fn ext_cell(res: &FreeResolution, x: &CellObject, m: Option<&FiniteModule>, opts: &ChartOptions) -> Result<ExtChart, ResolveError> {
    let coeff = match m {
        Some(m) => {
            if m.profile() != res.profile() {
                return Err(ResolveError::Malformed(format!(
                    "module over {} used with a resolution over {}",
                    m.profile().name(),
                    res.profile().name()
                )));
            }
            Coeff::Module(m)
        }
        None => Coeff::F2,
    };
    let max_s = opts.max_s.unwrap_or(usize::MAX).min(res.max_s().saturating_sub(1));
    let max_t = opts.max_t.unwrap_or(i32::MAX).min(res.max_t());
    let hc = HomComplex { res, x, coeff };
    let mut chart = ExtChart {
        algebra: res.profile().name(),
        descriptor: x.name.clone(),
        max_s,
        max_t,
        min_s: opts.min_s,
        stems: opts.stems,
        cell_labels: x.cells.iter().map(|c| c.label.clone()).collect(),
        groups: BTreeMap::new(),
        products: BTreeMap::new(),
        notes: x.selections.clone(),
    };
    let (lo, _) = coeff.degree_range();
    let bidegrees: Vec<(usize, i32)> = (opts.min_s..=max_s)
        .flat_map(|s| (s as i32 + lo..=max_t).map(move |t| (s, t)))
        .filter(|&(s, t)| chart.in_range(s, t))
        .collect();
    let groups: BTreeMap<(usize, i32), Group> = bidegrees
        .par_iter()
        .map(|&(s, t)| ((s, t), hc.group(s, t)))
        .filter(|(_, g)| !g.reps.is_empty())
        .collect();
    for (&k, g) in &groups {
        chart.groups.insert(
            k,
            ClassGroup {
                dim: g.reps.len(),
                cells: g.rep_cells.iter().map(|&c| x.cells[c].label.clone()).collect(),
                names: Vec::new(),
            },
        );
    }
    for p in &opts.products {
        let map = match x.product_map(res, p.s, p.t, &p.class) {
            Ok(map) => map,
            Err(e) => {
                chart.notes.push(format!("product {} skipped: {e}", p.name));
                continue;
            }
        };
        let maps: BTreeMap<(usize, i32), BitMatrix> = groups
            .par_iter()
            .filter_map(|(&(s, t), g)| {
                let target = groups.get(&(s + p.s, t + p.t))?;
                let mut m = BitMatrix::zeros(target.reps.len(), g.reps.len());
                for (j, f) in g.reps.iter().enumerate() {
                    let z = hc.apply_map(&map, s, f, &g.cochains, &target.cochains);
                    let col = target.decompose(&z).expect("product of cocycles is a cocycle");
                    for (i, &b) in col.iter().enumerate() {
                        m.set(i, j, b);
                    }
                }
                Some(((s, t), m))
            })
            .collect();
        chart.products.insert(p.name.clone(), ProductTable { s: p.s, t: p.t, maps });
    }
    Ok(chart)
}

pub fn ext_f2(res: &FreeResolution, opts: &ChartOptions) -> Result<ExtChart, ResolveError> {
    ext_cell(res, &CellObject::point(), None, opts)
}

pub fn ext_module(res: &FreeResolution, m: &FiniteModule, opts: &ChartOptions) -> Result<ExtChart, ResolveError> {
    ext_cell(res, &CellObject::point(), Some(m), opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hopf::Profile;
    use crate::resolve::{algebra_for, h8, minimal_resolution};

    #[test]
    fn f2_chart_matches_generator_counts() {
        let r = minimal_resolution(algebra_for(&Profile::a(2), 40), 10, 40).unwrap();
        let c = ext_f2(&r, &ChartOptions::with_products(&r, &["h0", "h1", "h2"])).unwrap();
        for s in 0..=9 {
            for t in 0..=40 {
                assert_eq!(c.dim(s, t), r.ext_dim(s, t), "({s},{t})");
            }
        }
        assert_eq!(c.product("h0", 0, 0).unwrap().get(0, 0), true);
        assert!(c.product("h1", 0, 0).unwrap().get(0, 0));
        assert_eq!(c.product("h0", 1, 2).unwrap().rows(), 0);
        assert!(c.product("h1", 1, 2).unwrap().get(0, 0));
    }

    #[test]
    fn yoneda_examples() {
        let r = minimal_resolution(algebra_for(&Profile::a(2), 30), 6, 30).unwrap();
        let h0 = standard_class(&r, "h0").unwrap();
        let h1 = standard_class(&r, "h1").unwrap();
        assert_eq!(yoneda_product(&r, &h0, &h0).unwrap().class, vec![true]);
        assert!(yoneda_product(&r, &h1, &h0).unwrap().class.iter().all(|&b| !b));
    }

    #[test]
    fn h8_bottom() {
        let r = minimal_resolution(algebra_for(&Profile::a(2), 40), 10, 40).unwrap();
        let x = h8(&r).unwrap();
        let c = ext_cell(&r, &x, None, &ChartOptions::default()).unwrap();
        assert_eq!(c.dim(0, 0), 1);
        assert_eq!(c.dim(1, 1), 1);
        assert_eq!(c.dim(2, 2), 1);
        assert_eq!(c.dim(3, 3), 0);
        // the top cell carries the h0^3-annihilated classes, shifted by (2,3)
        assert_eq!(c.dim(2, 3), 0);
        assert_eq!(c.groups[&(3, 5)].cells, vec!["1".to_string()]);
    }
}
