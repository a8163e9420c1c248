//! Minimal free resolutions of the ground field.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::complex::{FreeComplex, Generator, Layout, Sparse};
use super::ResolveError;
use crate::gf2::{BitVec, Reducer};
use crate::hopf::{Algebra, Profile};

pub const RESOLUTION_FORMAT_VERSION: u32 = 1;

/// Preimages under `d_s` in one internal degree. Insertion order is the
/// source layout order, so solution tags decode through that layout.
#[derive(Debug)]
pub struct Solver {
    source: Layout,
    target: Layout,
    reducer: Reducer,
    kernel: Vec<Sparse>,
}

impl Solver {
    fn build(c: &FreeComplex, s: usize, t: i32, track: bool) -> Solver {
        let alg = c.algebra();
        let source = c.layout(s, t);
        let target = c.layout(s - 1, t);
        let mut reducer = Reducer::with_capacity(target.dim, if track { source.dim } else { 0 });
        let mut kernel = Vec::new();
        for &(g, _, start, len) in &source.blocks {
            let d = &c.generator(s, g as usize).d;
            for a in start..start + len {
                let mut v = BitVec::zeros(target.dim);
                for &(h, x) in d {
                    for &p in alg.product(a as usize, x as usize) {
                        v.flip(target.pos(h, p));
                    }
                }
                if track {
                    if let (None, Some(dep)) = reducer.insert_tracked(v) {
                        kernel.push(source.decode(&dep.resized(source.dim)));
                    }
                } else {
                    reducer.insert_untracked(v);
                }
            }
        }
        Solver {
            source,
            target,
            reducer,
            kernel,
        }
    }

    /// Some `x` with `d x = y`, canonical for the fixed insertion order.
    pub fn solve(&self, y: &[(u32, u32)]) -> Option<Sparse> {
        let v = self.target.encode(y);
        let tag = self.reducer.solve(&v)?;
        Some(self.source.decode(&tag.resized(self.source.dim)))
    }

    pub fn image_rank(&self) -> usize {
        self.reducer.rank()
    }

    pub fn kernel(&self) -> &[Sparse] {
        &self.kernel
    }
}

/// A minimal free resolution `F₂ ← F_0 ← F_1 ← …` through `(max_s, max_t)`.
/// Level 0 has the single generator `ι` in degree 0.
#[derive(Debug)]
pub struct FreeResolution {
    complex: FreeComplex,
    max_s: usize,
    max_t: i32,
    solvers: Mutex<HashMap<(usize, i32), Arc<Solver>>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ResolutionDocument {
    pub format_version: u32,
    pub algebra: String,
    pub max_s: usize,
    pub max_t: i32,
    pub levels: Vec<Vec<Generator>>,
}

impl FreeResolution {
    pub fn algebra(&self) -> &Arc<Algebra> {
        self.complex.algebra()
    }

    pub fn profile(&self) -> &Profile {
        self.algebra().profile()
    }

    pub fn complex(&self) -> &FreeComplex {
        &self.complex
    }

    pub fn max_s(&self) -> usize {
        self.max_s
    }

    pub fn max_t(&self) -> i32 {
        self.max_t
    }

    pub fn generators(&self, s: usize) -> &[Generator] {
        self.complex.level(s)
    }

    /// Level-`s` generator indices of internal degree `t`, ascending.
    pub fn generators_in_degree(&self, s: usize, t: i32) -> Vec<u32> {
        self.complex.generators_in_degrees(s, t, t)
    }

    /// `dim Ext^{s,t}(F₂, F₂)`, read off the generator count.
    pub fn ext_dim(&self, s: usize, t: i32) -> usize {
        self.complex.count_in_degree(s, t)
    }

    pub fn in_range(&self, s: usize, t: i32) -> bool {
        s <= self.max_s && t <= self.max_t
    }

    /// The (cached) solver for `d_s` in degree `t`, `s ≥ 1`.
    pub fn solver(&self, s: usize, t: i32) -> Result<Arc<Solver>, ResolveError> {
        if s == 0 || !self.in_range(s, t) {
            return Err(ResolveError::OutOfRange { s, t });
        }
        if let Some(x) = self.solvers.lock().unwrap().get(&(s, t)) {
            return Ok(x.clone());
        }
        let built = Arc::new(Solver::build(&self.complex, s, t, true));
        Ok(self
            .solvers
            .lock()
            .unwrap()
            .entry((s, t))
            .or_insert(built)
            .clone())
    }

    /// Drop all cached solvers.
    pub fn clear_cache(&self) {
        self.solvers.lock().unwrap().clear();
    }

    pub fn cached_solvers(&self) -> usize {
        self.solvers.lock().unwrap().len()
    }

    pub fn to_document(&self) -> ResolutionDocument {
        ResolutionDocument {
            format_version: RESOLUTION_FORMAT_VERSION,
            algebra: self.profile().name(),
            max_s: self.max_s,
            max_t: self.max_t,
            levels: (0..self.complex.num_levels())
                .map(|s| self.complex.level(s).to_vec())
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_document()).expect("resolution serializes")
    }

    /// Rebuild from a document; the algebra must match its profile and
    /// cover `max_t`. Structural checks (`d∘d = 0`, minimality) are run.
    pub fn from_document(alg: Arc<Algebra>, doc: ResolutionDocument) -> Result<Self, ResolveError> {
        if doc.format_version != RESOLUTION_FORMAT_VERSION {
            return Err(ResolveError::Malformed(format!(
                "format version {} (expected {RESOLUTION_FORMAT_VERSION})",
                doc.format_version
            )));
        }
        if doc.algebra != alg.profile().name() {
            return Err(ResolveError::Malformed(format!(
                "document is over {}, algebra is {}",
                doc.algebra,
                alg.profile().name()
            )));
        }
        check_algebra_bound(&alg, doc.max_t)?;
        if doc.levels.len() != doc.max_s + 1 {
            return Err(ResolveError::Malformed("level count does not match max_s".into()));
        }
        for (s, level) in doc.levels.iter().enumerate() {
            for g in level {
                if g.degree > doc.max_t {
                    return Err(ResolveError::Malformed(format!("generator beyond bound at level {s}")));
                }
                let below = doc.levels.get(s.wrapping_sub(1)).map_or(0, |l| l.len());
                for &(h, a) in &g.d {
                    if s == 0 || h as usize >= below || a as usize >= alg.dim() {
                        return Err(ResolveError::Malformed(format!("bad differential entry at level {s}")));
                    }
                    let hd = doc.levels[s - 1][h as usize].degree;
                    if hd + alg.degree(a as usize) as i32 != g.degree {
                        return Err(ResolveError::Malformed(format!("inhomogeneous differential at level {s}")));
                    }
                }
            }
        }
        let complex = FreeComplex::new(alg, doc.levels, doc.max_t);
        complex
            .check_d_squared()
            .map_err(|(s, g)| ResolveError::Malformed(format!("d∘d ≠ 0 at level {s} generator {g}")))?;
        if !complex.is_minimal() {
            return Err(ResolveError::Malformed("resolution is not minimal".into()));
        }
        Ok(FreeResolution {
            complex,
            max_s: doc.max_s,
            max_t: doc.max_t,
            solvers: Mutex::new(HashMap::new()),
        })
    }

    pub fn from_json(alg: Arc<Algebra>, text: &str) -> Result<Self, ResolveError> {
        let doc: ResolutionDocument =
            serde_json::from_str(text).map_err(|e| ResolveError::Malformed(e.to_string()))?;
        Self::from_document(alg, doc)
    }
}

fn check_algebra_bound(alg: &Algebra, max_t: i32) -> Result<(), ResolveError> {
    let enough = match alg.profile().top_degree() {
        Some(top) => alg.max_degree() == top,
        None => alg.max_degree() as i64 >= max_t as i64,
    };
    if enough {
        Ok(())
    } else {
        Err(ResolveError::AlgebraTooSmall {
            have: alg.max_degree(),
            need: max_t,
        })
    }
}

/// The algebra table a resolution through `max_t` needs.
pub fn algebra_for(profile: &Profile, max_t: i32) -> Arc<Algebra> {
    let bound = profile.top_degree().unwrap_or(max_t.max(0) as u32);
    Arc::new(Algebra::new(profile.clone(), bound))
}

/// Minimal resolution of `F₂` through `(max_s, max_t)`.
///
/// Levels are built in order. Within a level the new generators in degree
/// `t` are the kernel vectors of `d_{s-1}` (in their canonical order) that
/// are independent of the image so far; the kernels of `d_s` needed by the
/// next level are then computed for all degrees in parallel, each degree
/// independently, so the output does not depend on the thread count.
pub fn minimal_resolution(alg: Arc<Algebra>, max_s: usize, max_t: i32) -> Result<FreeResolution, ResolveError> {
    check_algebra_bound(&alg, max_t)?;
    let mut complex = FreeComplex::new(
        alg.clone(),
        vec![vec![Generator {
            degree: 0,
            d: Vec::new(),
        }]],
        max_t,
    );
    // ker ε in degree t is all of (F_0)_t for t > 0.
    let mut kernels: Vec<Vec<Sparse>> = (0..=max_t)
        .map(|t| {
            if t == 0 {
                Vec::new()
            } else {
                alg.indices_in_degree(t as i64)
                    .map(|a| vec![(0u32, a as u32)])
                    .collect()
            }
        })
        .collect();
    for s in 1..=max_s {
        complex.push_level(Vec::new());
        for t in s as i32..=max_t {
            let cands = std::mem::take(&mut kernels[t as usize]);
            if cands.is_empty() {
                continue;
            }
            let image = Solver::build(&complex, s, t, false);
            let mut red = image.reducer;
            for kv in cands {
                let v = image.target.encode(&kv);
                if red.insert_untracked(v).is_some() {
                    complex.push_generator(s, Generator { degree: t, d: kv });
                }
            }
        }
        if s < max_s {
            let c = &complex;
            kernels = (0..=max_t)
                .into_par_iter()
                .map(|t| {
                    if t < s as i32 {
                        Vec::new()
                    } else {
                        Solver::build(c, s, t, true).kernel
                    }
                })
                .collect();
        }
    }
    Ok(FreeResolution {
        complex,
        max_s,
        max_t,
        solvers: Mutex::new(HashMap::new()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a2(max_s: usize, max_t: i32) -> FreeResolution {
        minimal_resolution(algebra_for(&Profile::a(2), max_t), max_s, max_t).unwrap()
    }

    #[test]
    fn a2_low_levels() {
        let r = a2(6, 30);
        let ext1: Vec<i32> = r.generators(1).iter().map(|g| g.degree).collect();
        assert_eq!(ext1, vec![1, 2, 4]);
        for s in 0..=6 {
            assert_eq!(r.ext_dim(s, s as i32), 1, "h0 tower at s={s}");
        }
        r.complex().check_d_squared().unwrap();
        assert!(r.complex().is_minimal());
    }

    #[test]
    fn a1_known_dims() {
        let r = minimal_resolution(algebra_for(&Profile::a(1), 20), 5, 20).unwrap();
        // h1 at (1,2), h1^2 at (2,4), h1^3 = 0, stem-4 class at (3,7),
        // the periodicity class at (4,12)
        assert_eq!(r.ext_dim(1, 2), 1);
        assert_eq!(r.ext_dim(2, 4), 1);
        assert_eq!(r.ext_dim(3, 6), 0);
        assert_eq!(r.ext_dim(3, 7), 1);
        assert_eq!(r.ext_dim(4, 12), 1);
        assert_eq!(r.ext_dim(2, 3), 0);
    }

    #[test]
    fn full_algebra_ext1() {
        let r = minimal_resolution(algebra_for(&Profile::full(), 30), 2, 30).unwrap();
        let ext1: Vec<i32> = r.generators(1).iter().map(|g| g.degree).collect();
        assert_eq!(ext1, vec![1, 2, 4, 8, 16]);
    }

    #[test]
    fn json_round_trip() {
        let r = a2(4, 20);
        let back = FreeResolution::from_json(r.algebra().clone(), &r.to_json()).unwrap();
        assert_eq!(back.to_json(), r.to_json());
    }

    #[test]
    fn solver_inverts_differential() {
        let r = a2(4, 20);
        let c = r.complex();
        for g in r.generators(3) {
            assert!(c.apply_d(2, &g.d).is_empty());
            let x = r.solver(3, g.degree).unwrap().solve(&g.d).unwrap();
            assert_eq!(c.apply_d(3, &x), g.d);
        }
    }
}
