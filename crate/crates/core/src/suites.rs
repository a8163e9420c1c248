//! Verification suites shared by the command line and the acceptance
//! tests. Each returns a [`SuiteReport`] with a JSON detail payload.

use std::sync::Arc;

use serde::Serialize;
use serde_json::{json, Value};

use crate::bgpoly::{a1_vanishing_filter, check_lemma, f};
use crate::charts::render_tsv;
use crate::comod::{verify_bo_sequence, verify_splitting, FiniteModule};
use crate::hopf::Profile;
use crate::oracle::{comodule_by_name, cotor, DualAlgebra, OracleError};
use crate::resolve::{
    cells_of_tensor, ext_cell, ext_f2, ext_module, h8, h8v18, les_consistency, lemma_v2_8_windows, minimal_resolution, algebra_for,
    periodicity, products_commute, standard_class, tmfres_windows, torsion_exponent, v1_4_edge, yoneda_product, ChartOptions,
    FreeResolution, ResolveError, TmfresPlan,
};

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub passed: bool,
    pub summary: String,
    pub details: Value,
}

#[derive(Debug, thiserror::Error)]
pub enum SuiteError {
    #[error(transparent)]
    Resolve(#[from] ResolveError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Module(#[from] crate::comod::ModuleError),
    #[error("unknown suite {0}")]
    Unknown(String),
}

/// Supplies resolutions (possibly from a cache) by profile and bounds.
pub type Resolver<'a> = &'a dyn Fn(&Profile, usize, i32) -> Result<Arc<FreeResolution>, ResolveError>;

pub fn compute_resolution(p: &Profile, max_s: usize, max_t: i32) -> Result<Arc<FreeResolution>, ResolveError> {
    Ok(Arc::new(minimal_resolution(algebra_for(p, max_t), max_s, max_t)?))
}

pub const SUITES: [&str; 6] = ["oracle", "splitting", "bo-sequences", "bg-lemma", "vanishing-windows", "les"];

pub fn run(name: &str, res: Resolver) -> Result<Vec<SuiteReport>, SuiteError> {
    Ok(match name {
        "oracle" => vec![oracle(res, 6, 12)?],
        "splitting" => vec![splitting(48)],
        "bo-sequences" => vec![bo_sequences(&[1, 2, 3])],
        "bg-lemma" => vec![bg_lemma(128)],
        "vanishing-windows" => vec![
            v2_8_windows(res)?,
            tmfres(res, &TmfresPlan::full())?,
            tmfres(res, &TmfresPlan::fallback())?,
        ],
        "les" => vec![les(res, 60)?],
        other => return Err(SuiteError::Unknown(other.into())),
    })
}

fn report(suite: &str, passed: bool, summary: String, details: Value) -> SuiteReport {
    SuiteReport {
        suite: suite.into(),
        passed,
        summary,
        details,
    }
}

/// Engine Ext against oracle Cotor over `A(1)` and `A(2)` for `f2` and
/// `bo:1`, at `s ≤ max_s`, `0 ≤ t−s ≤ max_stem`.
pub fn oracle(res: Resolver, max_s: usize, max_stem: i32) -> Result<SuiteReport, SuiteError> {
    let max_t = max_stem + max_s as i32;
    let mut rows = Vec::new();
    let mut ok = true;
    for n in [1u32, 2] {
        let r = res(&Profile::a(n), max_s + 1, max_t)?;
        let alg = r.algebra().clone();
        let gamma = DualAlgebra::a(n, max_t as u32);
        for name in ["f2", "bo:1"] {
            let m = match name {
                "f2" => FiniteModule::trivial(&alg)?,
                _ => FiniteModule::bo(&alg, 1)?,
            };
            let chart = ext_module(&r, &m, &ChartOptions::default())?;
            let dims = cotor(&gamma, &comodule_by_name(&gamma, name)?, max_s, max_t as u32)?;
            let mut mismatches = Vec::new();
            let mut compared = 0;
            for s in 0..=max_s {
                for stem in 0..=max_stem {
                    let t = stem + s as i32;
                    let o = dims.get(&(s, t as u32)).copied().unwrap_or(0);
                    let e = chart.in_range(s, t).then(|| chart.dim(s, t));
                    compared += 1;
                    if e != Some(o) {
                        mismatches.push(json!({"s": s, "t": t, "engine": e, "oracle": o}));
                    }
                }
            }
            ok &= mismatches.is_empty();
            rows.push(json!({"algebra": format!("A({n})"), "coefficient": name, "compared": compared, "mismatches": mismatches}));
        }
    }
    Ok(report(
        "oracle",
        ok,
        format!("engine vs cofree Cotor, s <= {max_s}, t-s <= {max_stem}: {}", if ok { "exact match" } else { "mismatch" }),
        Value::Array(rows),
    ))
}

pub fn splitting(max_degree: u32) -> SuiteReport {
    let r = verify_splitting(max_degree);
    report(
        "splitting",
        r.passed(),
        format!("Abar vs sum of S^8i bo_i through degree {max_degree}: first discrepancy {:?}", r.first_discrepancy),
        serde_json::to_value(&r).unwrap(),
    )
}

pub fn bo_sequences(js: &[u32]) -> SuiteReport {
    let reps: Vec<_> = js.iter().map(|&j| verify_bo_sequence(j)).collect();
    let ok = reps.iter().all(|r| r.passed());
    report(
        "bo-sequences",
        ok,
        format!("Poincare identities of the bo exact sequences for j in {js:?}"),
        serde_json::to_value(&reps).unwrap(),
    )
}

pub fn bg_lemma(max_i: u32) -> SuiteReport {
    let reps: Vec<_> = (0..=max_i).map(check_lemma).collect();
    let failures: Vec<_> = reps.iter().filter(|r| !r.passed()).collect();
    use crate::bgpoly::BGPolynomial as P;
    let recursion = f(2) == P::monomial(0, 1, 1).add(&P::monomial(1, 2, 0)) && f(3) == P::monomial(0, 1, 2);
    let ok = failures.is_empty() && recursion;
    report(
        "bg-lemma",
        ok,
        format!("f2 = {}, f3 = {}; lemma items for i <= {max_i}: {} failures", f(2), f(3), failures.len()),
        json!({"f2": f(2), "f3": f(3), "failures": failures}),
    )
}

/// Boundary and monotonicity checks of the A(1) vanishing filter.
pub fn a1_filter() -> SuiteReport {
    let points = [((112, 26), true), ((0, 7), false), ((0, 8), true), ((7, 8), false), ((12, 9), false), ((13, 10), true)];
    let mut ok = points.iter().all(|&((st, s), want)| a1_vanishing_filter(st, s) == want);
    for stem in -10..200 {
        let first = (0..200).find(|&s| a1_vanishing_filter(stem, s)).unwrap();
        ok &= (first..200).all(|s| a1_vanishing_filter(stem, s));
    }
    report(
        "a1-filter",
        ok,
        "7s > (t-s) + 51 with exact rationals; monotone in s".into(),
        json!({"points": points.iter().map(|&((st, s), w)| json!({"stem": st, "s": s, "expected": w, "got": a1_vanishing_filter(st, s)})).collect::<Vec<_>>()}),
    )
}

/// Ext¹ generators at `t ∈ {1,2,4}`, an h₀-tower through every `(s,s)`,
/// and h₀-torsion of exponent 3, for `t−s ≤ max_stem`.
pub fn a2_structure(res: Resolver, max_stem: i32) -> Result<SuiteReport, SuiteError> {
    let max_s = 30;
    let r = res(&Profile::a(2), max_s + 1, max_stem + max_s as i32)?;
    let chart = ext_f2(&r, &ChartOptions::with_products(&r, &["h0"]))?;
    let ext1: Vec<i32> = chart.groups.iter().filter(|(k, g)| k.0 == 1 && g.dim > 0).map(|(k, _)| k.1).collect();
    let tower = (0..max_s).all(|s| {
        chart.dim(s, s as i32) == 1 && chart.product("h0", s, s as i32).is_some_and(|m| m.get(0, 0))
    });
    let torsion = torsion_exponent(&chart, "h0", 3, max_stem);
    let ok = ext1 == vec![1, 2, 4] && tower && torsion.passed();
    Ok(report(
        "a2-structure",
        ok,
        format!("Ext^1 at t = {ext1:?}; h0-tower {tower}; h0-torsion is h0^3-torsion: {} bidegrees, {} violations", torsion.checked, torsion.violations.len()),
        json!({"ext1": ext1, "tower": tower, "torsion": torsion}),
    ))
}

/// Cell bidegrees of `H(8)`, `H(8,v₁⁸)` and the tensor square.
pub fn cells(res: Resolver) -> Result<SuiteReport, SuiteError> {
    let r = res(&Profile::a(2), 10, 30)?;
    let a = h8(&r)?.bidegrees();
    let (x, _) = h8v18(&r)?;
    let b = x.bidegrees();
    let mut sq = cells_of_tensor(&x, &x);
    let count = sq.len();
    sq.dedup();
    let ok = a == vec![(0, 0), (1, 2)]
        && b == vec![(0, 0), (1, 2), (17, 7), (18, 9)]
        && count == 16
        && sq == vec![(0, 0), (1, 2), (2, 4), (17, 7), (18, 9), (19, 11), (34, 14), (35, 16), (36, 18)];
    Ok(report(
        "cells",
        ok,
        format!("H(8) {a:?}; H(8,v1^8) {b:?}; tensor square {count} cells in {} bidegrees", sq.len()),
        json!({"h8": a, "h8v18": b, "square_distinct": sq}),
    ))
}

/// The cone long exact sequence for `H(8)` in stems `≤ max_stem`, plus
/// `v₁⁴`-periodicity and `h₀h₁ = h₁h₀` on the cone.
pub fn les(res: Resolver, max_stem: i32) -> Result<SuiteReport, SuiteError> {
    let max_s = 40;
    let r = res(&Profile::a(2), max_s, max_stem + max_s as i32)?;
    let opts = ChartOptions {
        stems: Some((0, max_stem + 1)),
        ..ChartOptions::with_products(&r, &["h0", "h1", "h0^3", "v1^4"])
    };
    let f2 = ext_f2(&r, &opts)?;
    let cone = ext_cell(&r, &h8(&r)?, None, &opts)?;
    let l = les_consistency(&f2, &cone, "h0^3");
    let p = periodicity(&cone, "v1^4", v1_4_edge);
    let c = products_commute(&cone, "h0", "h1");
    Ok(report(
        "les",
        l.passed(),
        format!(
            "H(8) exact sequence over h0^3, t-s <= {max_stem}: {} bidegrees, {} violations; v1^4: {} violations; h0h1: {} violations",
            l.checked,
            l.violations.len(),
            p.violations.len(),
            c.violations.len()
        ),
        json!({"les": l, "v1_4": p, "commute": c}),
    ))
}

pub fn v2_8_windows(res: Resolver) -> Result<SuiteReport, SuiteError> {
    let r = res(&Profile::a(2), 9, 57)?;
    let w = lemma_v2_8_windows(&r)?;
    let summary = w
        .checks
        .iter()
        .map(|c| format!("{} Ext^{{{},{}}} = {}", c.label, c.s, c.t, c.value.map_or("?".into(), |v| v.to_string())))
        .collect::<Vec<_>>()
        .join("; ");
    Ok(report("v2^8 windows", w.passed(), summary, serde_json::to_value(&w).unwrap()))
}

pub fn tmfres(res: Resolver, plan: &TmfresPlan) -> Result<SuiteReport, SuiteError> {
    let (s, t) = plan.bound();
    let r = res(&Profile::a(2), s, t)?;
    let w = tmfres_windows(&r, plan)?;
    let zeros = w.checks.iter().filter(|c| c.expect == crate::resolve::Expect::Zero).count();
    let failed: Vec<String> = w.failures().map(|c| format!("{} ({},{}) = {:?}", c.label, c.s, c.t, c.value)).collect();
    Ok(report(
        &format!("tmf-resolution windows v2^{}", plan.power),
        w.passed(),
        format!("{} windows, {zeros} required zero; failures: {failed:?}", w.checks.len()),
        serde_json::to_value(&w).unwrap(),
    ))
}

/// Full Steenrod algebra, `t ≤ 30`: Ext¹ at `t ∈ {1,2,4,8,16}`,
/// `h₀⁵h₄ ≠ 0`, `h₀⁸h₄ = 0`.
pub fn full_a(res: Resolver) -> Result<SuiteReport, SuiteError> {
    let r = res(&Profile::full(), 10, 30)?;
    let chart = ext_f2(&r, &ChartOptions::default())?;
    let ext1: Vec<i32> = chart.groups.iter().filter(|(k, g)| k.0 == 1 && g.dim > 0).map(|(k, _)| k.1).collect();
    let h4 = standard_class(&r, "h4").ok_or(ResolveError::OutOfRange { s: 1, t: 16 })?;
    let times = |k: u32| -> Result<bool, SuiteError> {
        let p = standard_class(&r, &format!("h0^{k}")).ok_or(ResolveError::OutOfRange { s: k as usize, t: k as i32 })?;
        Ok(yoneda_product(&r, &p, &h4)?.class.iter().any(|&b| b))
    };
    let (five, eight) = (times(5)?, times(8)?);
    let ok = ext1 == vec![1, 2, 4, 8, 16] && five && !eight;
    Ok(report(
        "full-A",
        ok,
        format!("Ext^1 at t = {ext1:?}; h0^5 h4 != 0: {five}; h0^8 h4 = 0: {}", !eight),
        json!({"ext1": ext1, "h0^5h4_nonzero": five, "h0^8h4_zero": !eight}),
    ))
}

/// TSV of `bo:1 ⊗ h8` is unchanged by permuting the module basis and by
/// the worker count.
pub fn determinism(jobs: usize) -> Result<SuiteReport, SuiteError> {
    let run = |threads: usize, permute: bool| -> Result<String, SuiteError> {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().expect("thread pool");
        pool.install(|| {
            let r = compute_resolution(&Profile::a(2), 10, 40)?;
            let mut m = FiniteModule::bo(r.algebra(), 1)?;
            if permute {
                let n = m.dim();
                let perm: Vec<usize> = (0..n).map(|i| (i * 7 + 3) % n).collect();
                let perm = if is_permutation(&perm) { perm } else { (0..n).rev().collect() };
                m = m.permute(&perm).relabel(|i, _| format!("e{}", n - 1 - i));
            }
            let c = ext_cell(&r, &h8(&r)?, Some(&m), &ChartOptions::with_products(&r, &["h0", "h1", "h2"]))?;
            Ok(render_tsv(&c))
        })
    };
    let base = run(1, false)?;
    let permuted = run(1, true)?;
    let parallel = run(jobs.max(2), false)?;
    let ok = base == permuted && base == parallel;
    Ok(report(
        "determinism",
        ok,
        format!(
            "bo:1 ⊗ h8 TSV ({} rows): permuted basis identical {}, jobs 1 vs {} identical {}",
            base.lines().count() - 1,
            base == permuted,
            jobs.max(2),
            base == parallel
        ),
        json!({"tsv": base}),
    ))
}

fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    p.iter().all(|&i| i < p.len() && !std::mem::replace(&mut seen[i], true))
}
