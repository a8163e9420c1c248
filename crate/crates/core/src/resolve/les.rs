//! Consistency reports on charts: the long exact sequence of a cone,
//! h₀-torsion exponents, periodicity and commutation of products.

use serde::Serialize;

use super::ext::ExtChart;
use crate::gf2::BitMatrix;

#[derive(Clone, Debug, Default, Serialize)]
pub struct Violation {
    pub s: usize,
    pub t: i32,
    pub detail: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Report {
    pub name: String,
    pub checked: usize,
    pub violations: Vec<Violation>,
    pub skipped: usize,
}

impl Report {
    fn new(name: &str) -> Report {
        Report {
            name: name.into(),
            ..Report::default()
        }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.checked > 0
    }

    fn fail(&mut self, s: usize, t: i32, detail: String) {
        self.violations.push(Violation { s, t, detail });
    }
}

/// For the cone on `α ∈ Ext^{σ,τ}(F₂)` (new cell at `(σ−1, τ)`), check
/// `dim Ext^{s,t}(cone) = dim coker(α into (s,t)) + dim ker(α out of
/// (s−σ+1, t−τ))` wherever every term is in range. `alpha` names the
/// product in `f2`.
pub fn les_consistency(f2: &ExtChart, cone: &ExtChart, alpha: &str) -> Report {
    let mut rep = Report::new(&format!("les[{alpha}]"));
    let Some(p) = f2.products.get(alpha) else {
        rep.fail(0, 0, format!("product {alpha} missing from the F2 chart"));
        return rep;
    };
    let (sig, tau) = (p.s, p.t);
    for s in cone.min_s..=cone.max_s {
        for t in s as i32..=cone.max_t {
            if !cone.in_range(s, t) || !f2.in_range(s, t) || !f2.in_range(s + 1, t) {
                rep.skipped += 1;
                continue;
            }
            let coker = match s.checked_sub(sig) {
                Some(s0) if t - tau >= 0 => match f2.product(alpha, s0, t - tau) {
                    Some(m) => f2.dim(s, t) - m.rank(),
                    None => {
                        rep.skipped += 1;
                        continue;
                    }
                },
                _ => f2.dim(s, t),
            };
            let ker = match (s + 1).checked_sub(sig) {
                Some(s1) if t - tau >= 0 => match f2.product(alpha, s1, t - tau) {
                    Some(m) => f2.dim(s1, t - tau) - m.rank(),
                    None => {
                        rep.skipped += 1;
                        continue;
                    }
                },
                _ => 0,
            };
            rep.checked += 1;
            let got = cone.dim(s, t);
            if got != coker + ker {
                rep.fail(s, t, format!("cone has {got}, sequence predicts {coker} + {ker}"));
            }
        }
    }
    rep
}

/// Composite of a product `k` times starting at `(s, t)`, or `None` when
/// any step leaves the range.
pub fn iterate_product(chart: &ExtChart, name: &str, s: usize, t: i32, k: usize) -> Option<BitMatrix> {
    let p = chart.products.get(name)?;
    let mut acc = BitMatrix::identity(chart.dim(s, t));
    let (mut cs, mut ct) = (s, t);
    for _ in 0..k {
        let m = chart.product(name, cs, ct)?;
        acc = m.multiply(&acc).ok()?;
        cs += p.s;
        ct += p.t;
    }
    Some(acc)
}

/// Every class killed by some power of `name` is killed by its
/// `exponent`-th power: `rank(x^k) = rank(x^exponent)` for every
/// `k ≥ exponent` that stays in range. Only source bidegrees with stem in
/// `[0, max_stem]` are checked.
pub fn torsion_exponent(chart: &ExtChart, name: &str, exponent: usize, max_stem: i32) -> Report {
    let mut rep = Report::new(&format!("{name}-torsion is {name}^{exponent}-torsion"));
    for (&(s, t), g) in &chart.groups {
        if t - s as i32 > max_stem {
            continue;
        }
        let Some(base) = iterate_product(chart, name, s, t, exponent) else {
            rep.skipped += 1;
            continue;
        };
        let r0 = base.rank();
        let mut k = exponent + 1;
        while let Some(m) = iterate_product(chart, name, s, t, k) {
            rep.checked += 1;
            if m.rank() != r0 {
                rep.fail(s, t, format!("rank of {name}^{k} is {} but {name}^{exponent} has {r0} (dim {})", m.rank(), g.dim));
            }
            k += 1;
        }
    }
    rep
}

/// Filtration from which multiplication by `v₁⁴` on `Ext_{A(2)}(H(8))` is
/// onto, as measured: `s > stem/5 + 2`.
pub fn v1_4_edge(stem: i32) -> usize {
    ((stem + 10).div_euclid(5) + 1).max(0) as usize
}

/// Multiplication by `name` is injective everywhere in range, and an
/// isomorphism from every `(s, t)` with `s ≥ edge(stem)`.
pub fn periodicity(chart: &ExtChart, name: &str, edge: impl Fn(i32) -> usize) -> Report {
    let mut rep = Report::new(&format!("{name}-periodicity"));
    let Some(p) = chart.products.get(name) else {
        rep.fail(0, 0, format!("product {name} missing"));
        return rep;
    };
    for s in chart.min_s..=chart.max_s {
        for t in s as i32..=chart.max_t {
            let Some(m) = chart.product(name, s, t) else {
                continue;
            };
            let (d0, d1) = (chart.dim(s, t), chart.dim(s + p.s, t + p.t));
            if d0 == 0 && d1 == 0 {
                continue;
            }
            rep.checked += 1;
            let r = m.rank();
            if r != d0 {
                rep.fail(s, t, format!("{name} not injective: rank {r} on dim {d0}"));
            } else if s >= edge(t - s as i32) && r != d1 {
                rep.fail(s, t, format!("{name} not onto above the edge: rank {r}, target dim {d1}"));
            }
        }
    }
    rep
}

/// `a·b = b·a` on every class where both composites are defined.
pub fn products_commute(chart: &ExtChart, a: &str, b: &str) -> Report {
    let mut rep = Report::new(&format!("{a}{b} = {b}{a}"));
    let (Some(pa), Some(pb)) = (chart.products.get(a), chart.products.get(b)) else {
        rep.fail(0, 0, "product missing".into());
        return rep;
    };
    for &(s, t) in chart.groups.keys() {
        let ab = chart
            .product(a, s, t)
            .and_then(|m| chart.product(b, s + pa.s, t + pa.t).map(|n| n.multiply(&m).unwrap()));
        let ba = chart
            .product(b, s, t)
            .and_then(|m| chart.product(a, s + pb.s, t + pb.t).map(|n| n.multiply(&m).unwrap()));
        match (ab, ba) {
            (Some(x), Some(y)) => {
                rep.checked += 1;
                if x != y {
                    rep.fail(s, t, format!("{a}{b} != {b}{a}"));
                }
            }
            _ => rep.skipped += 1,
        }
    }
    rep
}
