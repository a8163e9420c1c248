//! Finite graded modules over a finite profile algebra.
//!
//! A module is stored as the dual of a right comodule: basis degrees are
//! comodule degrees and `a · n = Σ n₀ ⟨a, n₁⟩` lowers degree by `|a|`.
//! Every algebra basis element carries its own sparse action table.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf2::BitVec;
use crate::hopf::{dual_coproduct, Algebra, HopfError, Profile, Sq, Xi};

pub const MODULE_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum ModuleError {
    #[error(transparent)]
    Hopf(#[from] HopfError),
    #[error("algebra mismatch: {0} vs {1}")]
    AlgebraMismatch(Profile, Profile),
    #[error("modules need a finite profile, got {0}")]
    InfiniteProfile(Profile),
    #[error("action relation fails: act({a})·act({b}) != act({a}·{b})")]
    InvalidAction { a: String, b: String },
    #[error("malformed module document: {0}")]
    Malformed(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BasisElement {
    pub label: String,
    pub degree: i32,
    pub weight: Option<u32>,
}

/// Graded dimension counts.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PoincareSeries {
    pub coefficients: BTreeMap<i32, usize>,
}

impl PoincareSeries {
    pub fn coefficient(&self, d: i32) -> usize {
        self.coefficients.get(&d).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.coefficients.values().sum()
    }

    pub fn shifted(&self, k: i32) -> PoincareSeries {
        PoincareSeries {
            coefficients: self.coefficients.iter().map(|(d, c)| (d + k, *c)).collect(),
        }
    }

    pub fn add(&self, other: &PoincareSeries) -> PoincareSeries {
        let mut out = self.clone();
        for (d, c) in &other.coefficients {
            *out.coefficients.entry(*d).or_default() += c;
        }
        out
    }

    pub fn mul(&self, other: &PoincareSeries) -> PoincareSeries {
        let mut out = PoincareSeries::default();
        for (a, x) in &self.coefficients {
            for (b, y) in &other.coefficients {
                *out.coefficients.entry(a + b).or_default() += x * y;
            }
        }
        out
    }

    pub fn truncated(&self, max: i32) -> PoincareSeries {
        PoincareSeries {
            coefficients: self
                .coefficients
                .iter()
                .filter(|(d, c)| **d <= max && **c > 0)
                .map(|(d, c)| (*d, *c))
                .collect(),
        }
    }
}

/// A finite graded module over a finite profile algebra.
#[derive(Clone)]
pub struct FiniteModule {
    alg: Arc<Algebra>,
    basis: Vec<BasisElement>,
    /// `action[a][j]`: indices `i` with `e_i` in `basis[a] · e_j`.
    action: Vec<Vec<Vec<u32>>>,
    by_degree: BTreeMap<i32, Vec<u32>>,
}

impl fmt::Debug for FiniteModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteModule")
            .field("algebra", self.alg.profile())
            .field("dim", &self.dim())
            .field("degrees", &self.basis.iter().map(|b| b.degree).collect::<Vec<_>>())
            .finish()
    }
}

fn require_finite(alg: &Algebra) -> Result<(), ModuleError> {
    if alg.profile().is_finite() {
        Ok(())
    } else {
        Err(ModuleError::InfiniteProfile(alg.profile().clone()))
    }
}

impl FiniteModule {
    fn assemble(alg: Arc<Algebra>, basis: Vec<BasisElement>, action: Vec<Vec<Vec<u32>>>) -> Self {
        let mut by_degree: BTreeMap<i32, Vec<u32>> = BTreeMap::new();
        for (i, b) in basis.iter().enumerate() {
            by_degree.entry(b.degree).or_default().push(i as u32);
        }
        FiniteModule {
            alg,
            basis,
            action,
            by_degree,
        }
    }

    /// Sort the basis into canonical (degree, label) order.
    fn canonical(self) -> Self {
        let mut perm: Vec<usize> = (0..self.dim()).collect();
        perm.sort_by(|&a, &b| {
            let (x, y) = (&self.basis[a], &self.basis[b]);
            (x.degree, &x.label).cmp(&(y.degree, &y.label))
        });
        self.permute(&perm)
    }

    /// Reorder the basis: new element `k` is old element `perm[k]`.
    pub fn permute(&self, perm: &[usize]) -> FiniteModule {
        assert_eq!(perm.len(), self.dim());
        let mut inv = vec![0u32; perm.len()];
        for (k, &old) in perm.iter().enumerate() {
            inv[old] = k as u32;
        }
        let basis = perm.iter().map(|&o| self.basis[o].clone()).collect();
        let action = self
            .action
            .iter()
            .map(|rows| {
                perm.iter()
                    .map(|&o| {
                        let mut v: Vec<u32> = rows[o].iter().map(|&i| inv[i as usize]).collect();
                        v.sort_unstable();
                        v
                    })
                    .collect()
            })
            .collect();
        FiniteModule::assemble(self.alg.clone(), basis, action)
    }

    /// Rename basis labels without reordering.
    pub fn relabel(&self, f: impl Fn(usize, &str) -> String) -> FiniteModule {
        let mut m = self.clone();
        for (i, b) in m.basis.iter_mut().enumerate() {
            b.label = f(i, &b.label);
        }
        m
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.alg
    }

    pub fn profile(&self) -> &Profile {
        self.alg.profile()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    pub fn degree(&self, i: usize) -> i32 {
        self.basis[i].degree
    }

    /// Basis indices in degree `d`, in basis order.
    pub fn indices_in_degree(&self, d: i32) -> &[u32] {
        self.by_degree.get(&d).map_or(&[], |v| v.as_slice())
    }

    pub fn min_degree(&self) -> Option<i32> {
        self.by_degree.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i32> {
        self.by_degree.keys().next_back().copied()
    }

    pub fn poincare(&self) -> PoincareSeries {
        PoincareSeries {
            coefficients: self.by_degree.iter().map(|(d, v)| (*d, v.len())).collect(),
        }
    }

    /// `basis[a] · e_j` as a sorted index list.
    #[inline]
    pub fn act(&self, a: usize, j: usize) -> &[u32] {
        &self.action[a][j]
    }

    /// Apply an algebra basis element to a vector over the whole basis.
    pub fn act_vec(&self, a: usize, v: &BitVec) -> BitVec {
        let mut out = BitVec::zeros(self.dim());
        for j in v.iter_ones() {
            for &i in &self.action[a][j] {
                out.flip(i as usize);
            }
        }
        out
    }

    pub fn trivial(alg: &Arc<Algebra>) -> Result<Self, ModuleError> {
        require_finite(alg)?;
        let basis = vec![BasisElement {
            label: "1".into(),
            degree: 0,
            weight: Some(0),
        }];
        let action = (0..alg.dim())
            .map(|a| vec![if a == 0 { vec![0] } else { vec![] }])
            .collect();
        Ok(Self::assemble(alg.clone(), basis, action))
    }

    pub fn suspend(&self, k: i32) -> FiniteModule {
        let basis = self
            .basis
            .iter()
            .map(|b| BasisElement {
                degree: b.degree + k,
                ..b.clone()
            })
            .collect();
        Self::assemble(self.alg.clone(), basis, self.action.clone())
    }

    fn same_algebra(&self, other: &FiniteModule) -> Result<(), ModuleError> {
        if self.alg.profile() != other.alg.profile() {
            return Err(ModuleError::AlgebraMismatch(
                self.profile().clone(),
                other.profile().clone(),
            ));
        }
        Ok(())
    }

    pub fn direct_sum(&self, other: &FiniteModule) -> Result<FiniteModule, ModuleError> {
        self.same_algebra(other)?;
        let n = self.dim() as u32;
        let mut basis = self.basis.clone();
        basis.extend(other.basis.iter().map(|b| BasisElement {
            label: format!("{}'", b.label),
            ..b.clone()
        }));
        let action = (0..self.alg.dim())
            .map(|a| {
                let mut rows = self.action[a].clone();
                rows.extend(
                    other.action[a]
                        .iter()
                        .map(|r| r.iter().map(|&i| i + n).collect::<Vec<_>>()),
                );
                rows
            })
            .collect();
        Ok(Self::assemble(self.alg.clone(), basis, action).canonical())
    }

    /// Tensor product with the action through the coproduct.
    pub fn tensor(&self, other: &FiniteModule) -> Result<FiniteModule, ModuleError> {
        self.same_algebra(other)?;
        let (m, n) = (self.dim(), other.dim());
        let mut basis = Vec::with_capacity(m * n);
        for x in &self.basis {
            for y in &other.basis {
                basis.push(BasisElement {
                    label: format!("{}|{}", x.label, y.label),
                    degree: x.degree + y.degree,
                    weight: match (x.weight, y.weight) {
                        (Some(a), Some(b)) => Some(a + b),
                        _ => None,
                    },
                });
            }
        }
        let alg = &self.alg;
        let action = (0..alg.dim())
            .map(|a| {
                let cop = alg.coproduct_indices(a);
                let mut rows = Vec::with_capacity(m * n);
                for i in 0..m {
                    for j in 0..n {
                        let mut acc: HashSet<u32> = HashSet::new();
                        for &(l, r) in &cop {
                            for &x in &self.action[l][i] {
                                for &y in &other.action[r][j] {
                                    let k = x * n as u32 + y;
                                    if !acc.remove(&k) {
                                        acc.insert(k);
                                    }
                                }
                            }
                        }
                        let mut v: Vec<u32> = acc.into_iter().collect();
                        v.sort_unstable();
                        rows.push(v);
                    }
                }
                rows
            })
            .collect();
        Ok(Self::assemble(alg.clone(), basis, action).canonical())
    }

    /// The linear dual, with degrees `D - d` where `D` is the top degree.
    /// Returns the module and `D`. The action goes through the antipode.
    pub fn dualize(&self) -> (FiniteModule, i32) {
        let top = self.max_degree().unwrap_or(0);
        let chi = antipode_table(&self.alg);
        let basis = self
            .basis
            .iter()
            .map(|b| BasisElement {
                label: format!("{}*", b.label),
                degree: top - b.degree,
                weight: b.weight,
            })
            .collect();
        let dim = self.dim();
        let action = (0..self.alg.dim())
            .map(|a| {
                // (a·f_i)(e_j) = f_i(χ(a)·e_j)
                let mut rows = vec![Vec::new(); dim];
                for j in 0..dim {
                    let mut image = BitVec::zeros(dim);
                    for &c in &chi[a] {
                        for &i in &self.action[c as usize][j] {
                            image.flip(i as usize);
                        }
                    }
                    for i in image.iter_ones() {
                        rows[i].push(j as u32);
                    }
                }
                rows
            })
            .collect();
        (Self::assemble(self.alg.clone(), basis, action).canonical(), top)
    }

    /// Check `act(a)∘act(b) = act(ab)` for every pair of basis elements.
    pub fn validate(&self) -> Result<(), ModuleError> {
        let alg = &self.alg;
        let dim = self.dim();
        if (0..dim).any(|j| self.action[0][j] != [j as u32]) {
            return Err(ModuleError::InvalidAction {
                a: "Sq()".into(),
                b: "Sq()".into(),
            });
        }
        for a in 0..alg.dim() {
            for b in 0..alg.dim() {
                if alg.degree(a) + alg.degree(b) > alg.max_degree() {
                    continue;
                }
                let ab = alg.product(a, b);
                for j in 0..dim {
                    let mut lhs = BitVec::zeros(dim);
                    for &k in &self.action[b][j] {
                        for &i in &self.action[a][k as usize] {
                            lhs.flip(i as usize);
                        }
                    }
                    let mut rhs = BitVec::zeros(dim);
                    for &c in ab {
                        for &i in &self.action[c as usize][j] {
                            rhs.flip(i as usize);
                        }
                    }
                    if lhs != rhs {
                        return Err(ModuleError::InvalidAction {
                            a: format!("{:?}", alg.basis(a)),
                            b: format!("{:?}", alg.basis(b)),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// The coaction-dual module on a set of dual monomials. Terms of the
    /// coaction whose left factor is outside `monomials` are dropped,
    /// which realizes sub- and quotient comodules alike.
    pub fn from_dual_monomials(
        alg: &Arc<Algebra>,
        monomials: &[Xi],
        suspension: i32,
    ) -> Result<FiniteModule, ModuleError> {
        require_finite(alg)?;
        let index: HashMap<&Xi, u32> = monomials
            .iter()
            .enumerate()
            .map(|(i, m)| (m, i as u32))
            .collect();
        let basis: Vec<BasisElement> = monomials
            .iter()
            .map(|m| BasisElement {
                label: m.label(),
                degree: m.degree() as i32 + suspension,
                weight: Some(m.weight()),
            })
            .collect();
        let mut action = vec![vec![Vec::new(); monomials.len()]; alg.dim()];
        for (j, m) in monomials.iter().enumerate() {
            for (left, right) in dual_coproduct(m, alg.profile(), |_| true) {
                let Some(&i) = index.get(&left) else { continue };
                let Some(a) = alg.index_of(&Sq::new(right.exponents().to_vec())) else {
                    continue;
                };
                action[a][j].push(i);
            }
        }
        for rows in &mut action {
            for r in rows.iter_mut() {
                r.sort_unstable();
            }
        }
        Ok(Self::assemble(alg.clone(), basis, action).canonical())
    }

    /// `bo_i`: monomials of weight `≤ 4i` in `F₂[ξ₁⁴, ξ₂², ξ₃, …]`.
    pub fn bo(alg: &Arc<Algebra>, i: u32) -> Result<FiniteModule, ModuleError> {
        let mons = quotient_monomials(&Profile::a(1), &Profile::Full, |m| m.weight() <= 4 * i, WEIGHT, 4 * i);
        Self::from_dual_monomials(alg, &mons, 0)
    }

    /// `tmf_j`: monomials of weight `≤ 8j` in `F₂[ξ₁⁸, ξ₂⁴, ξ₃², ξ₄, …]`.
    pub fn tmf_bg(alg: &Arc<Algebra>, j: u32) -> Result<FiniteModule, ModuleError> {
        let mons = quotient_monomials(&Profile::a(2), &Profile::Full, |m| m.weight() <= 8 * j, WEIGHT, 8 * j);
        Self::from_dual_monomials(alg, &mons, 0)
    }

    /// The dual of `big⫽small` as a module over `big` (which must be the
    /// algebra `alg`).
    pub fn quotient_hopf_module(alg: &Arc<Algebra>, small: &Profile) -> Result<FiniteModule, ModuleError> {
        let big = alg.profile().clone();
        if !small.is_finite() || !small.is_sub_profile_of(&big) {
            return Err(HopfError::NotSubProfile(small.clone(), big).into());
        }
        let top = big.top_degree().ok_or_else(|| ModuleError::InfiniteProfile(big.clone()))?;
        let mons = quotient_monomials(small, &big, |_| true, DEGREE, top);
        Self::from_dual_monomials(alg, &mons, 0)
    }

    /// Positive-degree monomials of `A⫽A(2)_*` in degrees `≤ max_degree`:
    /// a finite stand-in for the augmentation cokernel, valid in a window.
    pub fn abar_truncation(alg: &Arc<Algebra>, max_degree: u32) -> Result<FiniteModule, ModuleError> {
        let mons: Vec<Xi> = quotient_monomials(&Profile::a(2), &Profile::Full, |_| true, DEGREE, max_degree)
            .into_iter()
            .filter(|m| m.degree() > 0)
            .collect();
        Self::from_dual_monomials(alg, &mons, 0)
    }

    pub fn to_document(&self) -> ModuleDocument {
        let gens = self.alg.generators();
        let mut actions = BTreeMap::new();
        for g in gens {
            let mut rows = vec![Vec::new(); self.dim()];
            for j in 0..self.dim() {
                for &i in &self.action[g][j] {
                    rows[i as usize].push(j as u32);
                }
            }
            actions.insert(format!("{:?}", self.alg.basis(g)), rows);
        }
        ModuleDocument {
            format_version: MODULE_FORMAT_VERSION,
            algebra: self.profile().name(),
            basis: self
                .basis
                .iter()
                .map(|b| (b.label.clone(), b.degree, b.weight))
                .collect(),
            actions,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("module serializes")
    }

    /// Rebuild from generator actions; the full table follows from the
    /// decomposition of each basis element as `Σ Sq(2^k)·y`, and the
    /// result is validated.
    pub fn from_document(alg: &Arc<Algebra>, doc: &ModuleDocument) -> Result<FiniteModule, ModuleError> {
        require_finite(alg)?;
        if doc.format_version != MODULE_FORMAT_VERSION {
            return Err(ModuleError::Malformed(format!(
                "format version {} (expected {MODULE_FORMAT_VERSION})",
                doc.format_version
            )));
        }
        let profile = Profile::parse(&doc.algebra)?;
        if &profile != alg.profile() {
            return Err(ModuleError::AlgebraMismatch(profile, alg.profile().clone()));
        }
        let dim = doc.basis.len();
        let basis: Vec<BasisElement> = doc
            .basis
            .iter()
            .map(|(l, d, w)| BasisElement {
                label: l.clone(),
                degree: *d,
                weight: *w,
            })
            .collect();
        let mut action: Vec<Vec<Vec<u32>>> = vec![vec![Vec::new(); dim]; alg.dim()];
        action[0] = (0..dim as u32).map(|j| vec![j]).collect();
        for g in alg.generators() {
            let key = format!("{:?}", alg.basis(g));
            let rows = doc.actions.get(&key).cloned().unwrap_or_default();
            if !rows.is_empty() && rows.len() != dim {
                return Err(ModuleError::Malformed(format!("{key}: {} rows for dim {dim}", rows.len())));
            }
            for (i, row) in rows.iter().enumerate() {
                for &j in row {
                    if j as usize >= dim {
                        return Err(ModuleError::Malformed(format!("{key}: index {j} out of range")));
                    }
                    if basis[j as usize].degree - basis[i].degree != alg.degree(g) as i32 {
                        return Err(ModuleError::Malformed(format!("{key}: action on {j} is not homogeneous")));
                    }
                    action[g][j as usize].push(i as u32);
                }
            }
        }
        let decomp = alg.decompositions();
        let gens: HashSet<usize> = alg.generators().into_iter().collect();
        for a in 1..alg.dim() {
            if gens.contains(&a) {
                continue;
            }
            let mut rows = Vec::with_capacity(dim);
            for j in 0..dim {
                let mut v = BitVec::zeros(dim);
                for &(g, y) in &decomp[a] {
                    for &k in &action[y][j] {
                        for &i in &action[g][k as usize] {
                            v.flip(i as usize);
                        }
                    }
                }
                rows.push(v.iter_ones().map(|i| i as u32).collect());
            }
            action[a] = rows;
        }
        for rows in &mut action {
            for r in rows.iter_mut() {
                r.sort_unstable();
            }
        }
        let m = Self::assemble(alg.clone(), basis, action);
        m.validate()?;
        Ok(m)
    }

    pub fn from_json(alg: &Arc<Algebra>, text: &str) -> Result<FiniteModule, ModuleError> {
        let doc: ModuleDocument = serde_json::from_str(text)?;
        Self::from_document(alg, &doc)
    }

    /// True if every action term maps a basis element to elements of
    /// weight no larger than its own.
    pub fn action_respects_weight(&self) -> bool {
        self.action.iter().all(|rows| {
            rows.iter().enumerate().all(|(j, r)| {
                r.iter().all(|&i| match (self.basis[i as usize].weight, self.basis[j].weight) {
                    (Some(wi), Some(wj)) => wi <= wj,
                    _ => true,
                })
            })
        })
    }
}

/// Versioned JSON form: generator actions as sparse rows, where row `i`
/// lists the `j` with `e_i` in `Sq(2^k)·e_j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleDocument {
    pub format_version: u32,
    pub algebra: String,
    pub basis: Vec<(String, i32, Option<u32>)>,
    pub actions: BTreeMap<String, Vec<Vec<u32>>>,
}

const WEIGHT: bool = true;
const DEGREE: bool = false;

/// Monomials `ξ^E` with `2^{small_i} | e_i`, admitted by `within`, bounded
/// by weight (`by_weight`) or degree, and passing `keep`. Canonical order.
fn quotient_monomials(
    small: &Profile,
    within: &Profile,
    keep: impl Fn(&Xi) -> bool,
    by_weight: bool,
    bound: u32,
) -> Vec<Xi> {
    let cost = |i: usize| -> u32 {
        if by_weight {
            1u32 << (i - 1)
        } else {
            (1u32 << i) - 1
        }
    };
    let mut len = 0;
    while cost(len + 1) <= bound.max(1) && len < 30 {
        len += 1;
    }
    if let Some(l) = within.length() {
        len = len.min(l);
    }
    let mut out = Vec::new();
    let mut e = vec![0u32; len];
    #[allow(clippy::too_many_arguments)]
    fn rec(
        i: usize,
        len: usize,
        left: u32,
        e: &mut Vec<u32>,
        small: &Profile,
        within: &Profile,
        cost: &dyn Fn(usize) -> u32,
        out: &mut Vec<Xi>,
    ) {
        if i > len {
            out.push(Xi::new(e.clone()));
            return;
        }
        let step = 1u32 << small.exponent(i).unwrap_or(0).min(31);
        let cap = within.exponent(i).map(|h| if h >= 32 { u32::MAX } else { (1u32 << h) - 1 });
        let c = cost(i);
        let mut v = 0u32;
        loop {
            if v * c > left || cap.is_some_and(|cap| v > cap) {
                break;
            }
            e[i - 1] = v;
            rec(i + 1, len, left - v * c, e, small, within, cost, out);
            v += step;
        }
        e[i - 1] = 0;
    }
    rec(1, len, bound, &mut e, small, within, &cost, &mut out);
    out.retain(|m| keep(m));
    out.sort_by(|a, b| (a.degree(), a).cmp(&(b.degree(), b)));
    out
}

/// `χ(basis[a])` for every basis element, via
/// `χ(Sq R) = Σ_{R' ≠ 0} Sq(R') χ(Sq(R − R'))`.
fn antipode_table(alg: &Algebra) -> Vec<Vec<u32>> {
    let mut chi: Vec<Vec<u32>> = vec![Vec::new(); alg.dim()];
    chi[0] = vec![0];
    for a in 1..alg.dim() {
        let mut acc = BTreeMap::<u32, bool>::new();
        for (l, r) in alg.coproduct_indices(a) {
            if l == 0 {
                continue;
            }
            for &c in &chi[r] {
                for &t in alg.product(l, c as usize) {
                    *acc.entry(t).or_insert(false) ^= true;
                }
            }
        }
        chi[a] = acc.into_iter().filter(|e| e.1).map(|e| e.0).collect();
    }
    chi
}

/// Graded-dimension report for the splitting of the augmentation
/// cokernel of `A⫽A(2)_*` into suspended `bo_i`.
#[derive(Clone, Debug, Serialize)]
pub struct SplittingReport {
    pub max_degree: u32,
    pub abar: Vec<usize>,
    pub bo_sum: Vec<usize>,
    pub first_discrepancy: Option<u32>,
}

impl SplittingReport {
    pub fn passed(&self) -> bool {
        self.first_discrepancy.is_none()
    }
}

fn series_vec(p: &PoincareSeries, max: u32) -> Vec<usize> {
    (0..=max as i32).map(|d| p.coefficient(d)).collect()
}

/// Monomial Poincaré series, without building module actions.
fn monomial_series(mons: &[Xi], shift: i32) -> PoincareSeries {
    let mut p = PoincareSeries::default();
    for m in mons {
        *p.coefficients.entry(m.degree() as i32 + shift).or_default() += 1;
    }
    p
}

fn bo_series(i: u32) -> PoincareSeries {
    monomial_series(
        &quotient_monomials(&Profile::a(1), &Profile::Full, |m| m.weight() <= 4 * i, WEIGHT, 4 * i),
        0,
    )
}

fn tmf_series(j: u32) -> PoincareSeries {
    monomial_series(
        &quotient_monomials(&Profile::a(2), &Profile::Full, |m| m.weight() <= 8 * j, WEIGHT, 8 * j),
        0,
    )
}

pub fn verify_splitting(max_degree: u32) -> SplittingReport {
    let abar_mons: Vec<Xi> = quotient_monomials(&Profile::a(2), &Profile::Full, |_| true, DEGREE, max_degree)
        .into_iter()
        .filter(|m| m.degree() > 0)
        .collect();
    let abar = series_vec(&monomial_series(&abar_mons, 0), max_degree);
    let mut sum = PoincareSeries::default();
    let mut i = 1;
    while 8 * i <= max_degree {
        sum = sum.add(&bo_series(i).shifted(8 * i as i32));
        i += 1;
    }
    let bo_sum = series_vec(&sum, max_degree);
    let first_discrepancy = (0..=max_degree).find(|&d| abar[d as usize] != bo_sum[d as usize]);
    SplittingReport {
        max_degree,
        abar,
        bo_sum,
        first_discrepancy,
    }
}

/// Alternating-sum identities for the two exact sequences at index `j`.
#[derive(Clone, Debug, Serialize)]
pub struct BoSequenceReport {
    pub j: u32,
    /// Degrees where `P(Σ^{8j}bo_j) − P(bo_{2j}) + P(A(2)⫽A(1)⊗tmf_{j−1}) − P(Σ^{8j+9}bo_{j−1})` is nonzero.
    pub even_failures: Vec<i32>,
    /// Degrees where `P(bo_{2j+1}) ≠ P(Σ^{8j}bo_j⊗bo_1) + P(A(2)⫽A(1)⊗tmf_{j−1})`.
    pub odd_failures: Vec<i32>,
}

impl BoSequenceReport {
    pub fn passed(&self) -> bool {
        self.even_failures.is_empty() && self.odd_failures.is_empty()
    }
}

pub fn verify_bo_sequence(j: u32) -> BoSequenceReport {
    assert!(j >= 1, "sequences start at j = 1");
    let a2a1 = monomial_series(
        &quotient_monomials(&Profile::a(1), &Profile::a(2), |_| true, DEGREE, 23),
        0,
    );
    let middle = a2a1.mul(&tmf_series(j - 1));
    let degrees = |ps: &[&PoincareSeries]| -> Vec<i32> {
        let mut ds: Vec<i32> = ps.iter().flat_map(|p| p.coefficients.keys().copied()).collect();
        ds.sort_unstable();
        ds.dedup();
        ds
    };

    let a = bo_series(j).shifted(8 * j as i32);
    let b = bo_series(2 * j);
    let d = bo_series(j - 1).shifted(8 * j as i32 + 9);
    let even_failures = degrees(&[&a, &b, &middle, &d])
        .into_iter()
        .filter(|&k| {
            a.coefficient(k) as i64 - b.coefficient(k) as i64 + middle.coefficient(k) as i64
                - d.coefficient(k) as i64
                != 0
        })
        .collect();

    let lhs = bo_series(2 * j + 1);
    let rhs = bo_series(j).mul(&bo_series(1)).shifted(8 * j as i32).add(&middle);
    let odd_failures = degrees(&[&lhs, &rhs])
        .into_iter()
        .filter(|&k| lhs.coefficient(k) != rhs.coefficient(k))
        .collect();

    BoSequenceReport {
        j,
        even_failures,
        odd_failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a2() -> Arc<Algebra> {
        Arc::new(Algebra::new(Profile::a(2), 23))
    }

    fn degrees(m: &FiniteModule) -> Vec<i32> {
        m.basis().iter().map(|b| b.degree).collect()
    }

    #[test]
    fn trivial_and_suspension() {
        let alg = a2();
        let t = FiniteModule::trivial(&alg).unwrap();
        assert_eq!(degrees(&t), vec![0]);
        t.validate().unwrap();
        assert_eq!(degrees(&t.suspend(8)), vec![8]);
    }

    #[test]
    fn bo_and_tmf_bases() {
        let alg = a2();
        let bo0 = FiniteModule::bo(&alg, 0).unwrap();
        assert_eq!(degrees(&bo0), vec![0]);
        let bo1 = FiniteModule::bo(&alg, 1).unwrap();
        assert_eq!(degrees(&bo1), vec![0, 4, 6, 7]);
        bo1.validate().unwrap();
        let bo2 = FiniteModule::bo(&alg, 2).unwrap();
        assert_eq!(degrees(&bo2), vec![0, 4, 6, 7, 8, 10, 11, 12, 13, 14, 15]);
        bo2.validate().unwrap();
        let tmf1 = FiniteModule::tmf_bg(&alg, 1).unwrap();
        assert_eq!(degrees(&tmf1), vec![0, 8, 12, 14, 15]);
        tmf1.validate().unwrap();
        assert!(tmf1.basis().iter().all(|b| b.weight.unwrap() <= 8));
        assert!(bo2.action_respects_weight());
    }

    #[test]
    fn quotient_modules() {
        let alg = a2();
        let q = FiniteModule::quotient_hopf_module(&alg, &Profile::a(1)).unwrap();
        assert_eq!(degrees(&q), vec![0, 4, 6, 7, 10, 11, 13, 17]);
        q.validate().unwrap();
        assert_eq!(FiniteModule::quotient_hopf_module(&alg, &Profile::a(0)).unwrap().dim(), 32);
        let a1 = Arc::new(Algebra::new(Profile::a(1), 6));
        assert_eq!(FiniteModule::quotient_hopf_module(&a1, &Profile::a(1)).unwrap().dim(), 1);
        assert!(FiniteModule::quotient_hopf_module(&a1, &Profile::a(2)).is_err());
    }

    #[test]
    fn tensor_and_dual() {
        let alg = a2();
        let bo1 = FiniteModule::bo(&alg, 1).unwrap();
        let sq = bo1.tensor(&bo1).unwrap();
        assert_eq!(sq.dim(), 16);
        assert_eq!(sq.max_degree(), Some(14));
        sq.validate().unwrap();
        let (d, top) = bo1.dualize();
        assert_eq!(top, 7);
        assert_eq!(degrees(&d), vec![0, 1, 3, 7]);
        d.validate().unwrap();
        let (dd, _) = d.dualize();
        assert_eq!(dd.poincare(), bo1.poincare());
        dd.validate().unwrap();
    }

    #[test]
    fn abar_low_degrees() {
        let alg = a2();
        let ab = FiniteModule::abar_truncation(&alg, 15).unwrap();
        assert_eq!(ab.min_degree(), Some(8));
        assert_eq!(ab.poincare().coefficient(15), 1);
        ab.validate().unwrap();
    }

    #[test]
    fn splitting_and_sequences() {
        for d in [8, 15, 48] {
            assert!(verify_splitting(d).passed(), "degree {d}");
        }
        for j in 1..=3 {
            let r = verify_bo_sequence(j);
            assert!(r.passed(), "{r:?}");
        }
    }

    #[test]
    fn json_round_trip() {
        let alg = a2();
        let bo2 = FiniteModule::bo(&alg, 2).unwrap();
        let back = FiniteModule::from_json(&alg, &bo2.to_json()).unwrap();
        assert_eq!(back.basis(), bo2.basis());
        for a in 0..alg.dim() {
            for j in 0..bo2.dim() {
                assert_eq!(back.act(a, j), bo2.act(a, j));
            }
        }
    }
}
