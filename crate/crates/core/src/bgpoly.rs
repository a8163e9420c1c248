//! Brown-Gitler polynomials `f_i(s,t,x)` and the bookkeeping of the
//! algebraic tmf-resolution E₁-page: which suspended `bo₁^{⊗m}` summands
//! (and which residual `Ext_{A(1)}` terms) can reach a window.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::Ratio;
use serde::Serialize;

/// `Σ a·s^k t^l x^m` with non-negative integer coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BGPolynomial {
    #[serde(serialize_with = "as_terms")]
    pub coefficients: BTreeMap<(u32, u32, u32), u128>,
}

fn as_terms<S: serde::Serializer>(c: &BTreeMap<(u32, u32, u32), u128>, ser: S) -> Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    struct Term {
        k: u32,
        l: u32,
        m: u32,
        a: u128,
    }
    ser.collect_seq(c.iter().map(|(&(k, l, m), &a)| Term { k, l, m, a }))
}

impl BGPolynomial {
    pub fn one() -> Self {
        Self::monomial(0, 0, 0)
    }

    pub fn monomial(k: u32, l: u32, m: u32) -> Self {
        BGPolynomial {
            coefficients: BTreeMap::from([((k, l, m), 1)]),
        }
    }

    pub fn coefficient(&self, k: u32, l: u32, m: u32) -> u128 {
        self.coefficients.get(&(k, l, m)).copied().unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut c = self.coefficients.clone();
        for (&e, &a) in &other.coefficients {
            *c.entry(e).or_default() += a;
        }
        BGPolynomial { coefficients: c }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut c = BTreeMap::new();
        for (&(k1, l1, m1), &a) in &self.coefficients {
            for (&(k2, l2, m2), &b) in &other.coefficients {
                *c.entry((k1 + k2, l1 + l2, m1 + m2)).or_default() += a * b;
            }
        }
        BGPolynomial { coefficients: c }
    }

    /// Value at `s = t = x = 1`: the total number of summands.
    pub fn total(&self) -> u128 {
        self.coefficients.values().sum()
    }

    /// Terms with `k = 0`.
    pub fn mod_s(&self) -> Self {
        BGPolynomial {
            coefficients: self
                .coefficients
                .iter()
                .filter(|(e, _)| e.0 == 0)
                .map(|(&e, &a)| (e, a))
                .collect(),
        }
    }

    pub fn max_power_s(&self) -> u32 {
        self.coefficients.keys().map(|e| e.0).max().unwrap_or(0)
    }

    pub fn max_power_x(&self) -> u32 {
        self.coefficients.keys().map(|e| e.2).max().unwrap_or(0)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("polynomial serializes")
    }
}

impl fmt::Display for BGPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coefficients.is_empty() {
            return write!(f, "0");
        }
        let var = |name: &str, e: u32| match e {
            0 => String::new(),
            1 => name.to_string(),
            _ => format!("{name}^{e}"),
        };
        let terms: Vec<String> = self
            .coefficients
            .iter()
            .map(|(&(k, l, m), &a)| {
                let body = [var("s", k), var("t", l), var("x", m)]
                    .into_iter()
                    .filter(|v| !v.is_empty())
                    .collect::<Vec<_>>()
                    .join(" ");
                match (a, body.is_empty()) {
                    (_, true) => a.to_string(),
                    (1, false) => body,
                    _ => format!("{a} {body}"),
                }
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

/// `f_0 = 1`, `f_1 = x`, `f_{2j} = t^j f_j + s t^{j+1} f_{j−1}`,
/// `f_{2j+1} = t^j x f_j`.
pub fn f(i: u32) -> BGPolynomial {
    let mut memo: Vec<BGPolynomial> = Vec::with_capacity(i as usize + 1);
    for n in 0..=i {
        let p = match n {
            0 => BGPolynomial::one(),
            1 => BGPolynomial::monomial(0, 0, 1),
            _ if n % 2 == 0 => {
                let j = n / 2;
                BGPolynomial::monomial(0, j, 0)
                    .mul(&memo[j as usize])
                    .add(&BGPolynomial::monomial(1, j + 1, 0).mul(&memo[j as usize - 1]))
            }
            _ => {
                let j = n / 2;
                BGPolynomial::monomial(0, j, 1).mul(&memo[j as usize])
            }
        };
        memo.push(p);
    }
    memo.pop().unwrap()
}

/// `f_I = f_{i_1} ⋯ f_{i_n}`.
pub fn f_multi(index: &[u32]) -> BGPolynomial {
    index.iter().fold(BGPolynomial::one(), |acc, &i| acc.mul(&f(i)))
}

#[derive(Clone, Debug, Serialize)]
pub struct LemmaReport {
    pub i: u32,
    /// Every monomial has `l + m = i`.
    pub weight: bool,
    /// `f_i ≡ t^{i−m} x^m mod s`, `m` the number of binary ones.
    pub mod_s: bool,
    /// x-degree at most the number of binary digits.
    pub x_degree: bool,
    /// s-degree equals the number of ones left of the rightmost zero.
    pub s_degree: bool,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.weight && self.mod_s && self.x_degree && self.s_degree
    }
}

/// Number of ones to the left of the rightmost zero in the binary
/// expansion of `i` (zero when the expansion has no zero digit).
pub fn ones_left_of_rightmost_zero(i: u32) -> u32 {
    if i == 0 {
        return 0;
    }
    let digits = 32 - i.leading_zeros();
    match (0..digits).find(|&b| i >> b & 1 == 0) {
        Some(z) => (i >> z).count_ones(),
        None => 0,
    }
}

pub fn check_lemma(i: u32) -> LemmaReport {
    let p = f(i);
    let ones = i.count_ones();
    let digits = if i == 0 { 1 } else { 32 - i.leading_zeros() };
    LemmaReport {
        i,
        weight: p.coefficients.keys().all(|&(_, l, m)| l + m == i),
        mod_s: p.mod_s() == BGPolynomial::monomial(0, i - ones, ones),
        x_degree: p.max_power_x() <= digits,
        s_degree: p.max_power_s() == ones_left_of_rightmost_zero(i),
    }
}

/// Half-open window `[stem_lo, stem_hi) × [s_lo, s_hi)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Window {
    pub stems: (i32, i32),
    pub s: (u32, u32),
}

impl Window {
    pub fn new(stems: (i32, i32), s: (u32, u32)) -> Self {
        Window { stems, s }
    }

    pub fn shifted_stems(&self, by: i32) -> Window {
        Window {
            stems: (self.stems.0 + by, self.stems.1 + by),
            s: self.s,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.stems.0 >= self.stems.1 || self.s.0 >= self.s.1
    }
}

/// Cells of a coefficient object as `(stem, s)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cells(pub Vec<(i32, u32)>);

impl Cells {
    pub fn point() -> Cells {
        Cells(vec![(0, 0)])
    }

    /// `H(8,v₁⁸)`.
    pub fn h8v18() -> Cells {
        Cells(vec![(0, 0), (1, 2), (17, 7), (18, 9)])
    }

    pub fn h8() -> Cells {
        Cells(vec![(0, 0), (1, 2)])
    }

    fn bottom_stem(&self) -> i32 {
        self.0.iter().map(|c| c.0).min().unwrap_or(0)
    }

    fn bottom_s(&self) -> u32 {
        self.0.iter().map(|c| c.1).min().unwrap_or(0)
    }
}

/// One monomial `a·s^k t^l x^m` of `f_I`, read as `a` copies of
/// `Σ^{8l+k} bo₁^{⊗m}[−k] ⊗ M`: classes of `Ext(bo₁^{⊗m} ⊗ M)` moved up
/// `8l` stems and `k` filtrations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SummandDescriptor {
    pub suspension: u32,
    pub tensor_power: u32,
    pub homological_shift: u32,
    pub multiplicity: u128,
}

impl SummandDescriptor {
    pub fn stem_shift(&self) -> i32 {
        (self.suspension - self.homological_shift) as i32
    }
}

/// A residual `Ext_{A(1)}(tmf_j ⊗ bo_{rest} ⊗ bo₁^{⊗m} ⊗ M)` term, shifted
/// like a summand.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct A1Term {
    /// Position in the multi-index whose expansion produced it.
    pub factor: usize,
    pub tmf_index: u32,
    pub remaining: Vec<u32>,
    pub suspension: u32,
    pub tensor_power: u32,
    pub homological_shift: u32,
    pub multiplicity: u128,
    /// `true` when the whole window lies above the `Ext_{A(1)}` vanishing
    /// line, so the term is dropped.
    pub dropped: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SummandList {
    pub index: Vec<u32>,
    pub summands: Vec<SummandDescriptor>,
    pub a1_terms: Vec<A1Term>,
}

impl SummandList {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("summands serialize")
    }
}

/// `A(1)`-type terms met while expanding `bo_i` by the two exact
/// sequences, each with the monomial accumulated so far.
fn a1_expansion(i: u32, ctx: (u32, u32, u32), out: &mut Vec<(u32, (u32, u32, u32))>) {
    if i <= 1 {
        return;
    }
    let j = i / 2;
    let (k, l, m) = ctx;
    if i % 2 == 0 {
        out.push((j - 1, ctx));
        a1_expansion(j, (k, l + j, m), out);
        a1_expansion(j - 1, (k + 1, l + j + 1, m), out);
    } else {
        out.push((j - 1, ctx));
        a1_expansion(j, (k, l + j, m + 1), out);
    }
}

fn reaches(window: &Window, cells: &Cells, stem_shift: i32, s_shift: u32) -> bool {
    !window.is_empty() && stem_shift + cells.bottom_stem() < window.stems.1 && s_shift + cells.bottom_s() < window.s.1
}

/// Summands of `Ext(bo_I ⊗ M)` that can be nonzero in `window` (given in
/// the coordinates of that Ext group), plus the residual `A(1)` terms.
pub fn enumerate_summands(index: &[u32], window: &Window, cells: &Cells) -> SummandList {
    let poly = f_multi(index);
    let summands = poly
        .coefficients
        .iter()
        .map(|(&(k, l, m), &a)| SummandDescriptor {
            suspension: 8 * l + k,
            tensor_power: m,
            homological_shift: k,
            multiplicity: a,
        })
        .filter(|d| reaches(window, cells, d.stem_shift(), d.homological_shift))
        .collect();

    let mut a1_terms = Vec::new();
    let mut prefix = BGPolynomial::one();
    for (r, &i) in index.iter().enumerate() {
        let mut local = Vec::new();
        a1_expansion(i, (0, 0, 0), &mut local);
        let mut merged: BTreeMap<(u32, (u32, u32, u32)), u128> = BTreeMap::new();
        for (&(k0, l0, m0), &a) in &prefix.coefficients {
            for &(tmf, (k, l, m)) in &local {
                *merged.entry((tmf, (k0 + k, l0 + l, m0 + m))).or_default() += a;
            }
        }
        for ((tmf_index, (k, l, m)), multiplicity) in merged {
            let stem_shift = 8 * l as i32;
            if !reaches(window, cells, stem_shift, k) {
                continue;
            }
            let dropped = window_above_a1_line(window);
            a1_terms.push(A1Term {
                factor: r,
                tmf_index,
                remaining: index[r + 1..].to_vec(),
                suspension: 8 * l + k,
                tensor_power: m,
                homological_shift: k,
                multiplicity,
                dropped,
            });
        }
        prefix = prefix.mul(&f(i));
    }
    SummandList {
        index: index.to_vec(),
        summands,
        a1_terms,
    }
}

/// `s > (t−s)/7 + 51/7`, compared in exact rational arithmetic.
pub fn a1_vanishing_filter(t_minus_s: i64, s: i64) -> bool {
    Ratio::from_integer(s) > Ratio::new(t_minus_s, 7) + Ratio::new(51, 7)
}

/// Every point of the window satisfies the filter. The filter is monotone
/// in `s` and antitone in the stem, so the corner with the lowest `s` and
/// the highest stem decides.
fn window_above_a1_line(w: &Window) -> bool {
    !w.is_empty() && a1_vanishing_filter(w.stems.1 as i64 - 1, w.s.0 as i64)
}

/// Multi-indices `(i_1,…,i_n)` whose E₁ term
/// `Ext(Σ^{8Σi} bo_I ⊗ M)` can reach `window` (in that term's own
/// coordinates), each with its summand expansion.
pub fn e1_window(n: usize, window: &Window, cells: &Cells) -> Vec<(Vec<u32>, SummandList)> {
    assert!(n >= 1, "the E1 lines start at n = 1");
    if window.is_empty() {
        return Vec::new();
    }
    let budget = window.stems.1 - 1 - cells.bottom_stem();
    if budget < 8 * n as i32 {
        return Vec::new();
    }
    let max_sum = (budget / 8) as u32;
    let mut out = Vec::new();
    let mut idx = vec![1u32; n];
    loop {
        let total: u32 = idx.iter().sum();
        if total <= max_sum {
            let shifted = window.shifted_stems(-(8 * total as i32));
            out.push((idx.clone(), enumerate_summands(&idx, &shifted, cells)));
        }
        // odometer over indices with sum ≤ max_sum
        let mut p = n;
        loop {
            if p == 0 {
                return out;
            }
            p -= 1;
            idx[p] += 1;
            if idx.iter().sum::<u32>() <= max_sum {
                break;
            }
            idx[p] = 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_polynomials() {
        assert_eq!(f(0), BGPolynomial::one());
        assert_eq!(f(1).to_string(), "x");
        assert_eq!(f(2), BGPolynomial::monomial(0, 1, 1).add(&BGPolynomial::monomial(1, 2, 0)));
        assert_eq!(f(3), BGPolynomial::monomial(0, 1, 2));
        assert_eq!(f(5), BGPolynomial::monomial(0, 3, 2).add(&BGPolynomial::monomial(1, 4, 1)));
        assert_eq!(f_multi(&[1, 1]), BGPolynomial::monomial(0, 0, 2));
        assert_eq!(f(2).to_string(), "t x + s t^2");
        assert_eq!(f(5).to_string(), "t^3 x^2 + s t^4 x");
        assert_eq!(f_multi(&[2, 1]), BGPolynomial::monomial(0, 1, 2).add(&BGPolynomial::monomial(1, 2, 1)));
    }

    #[test]
    fn lemma_items_i5() {
        let r = check_lemma(5);
        assert!(r.passed());
        assert_eq!(f(5).max_power_s(), 1);
        assert_eq!(f(5).mod_s(), BGPolynomial::monomial(0, 3, 2));
    }

    #[test]
    fn dyadic_rule() {
        assert_eq!(ones_left_of_rightmost_zero(0b101), 1);
        assert_eq!(ones_left_of_rightmost_zero(0b110), 2);
        assert_eq!(ones_left_of_rightmost_zero(0b111), 0);
        assert_eq!(ones_left_of_rightmost_zero(0b1011), 1);
    }

    #[test]
    fn summands_of_small_indices() {
        let w = Window::new((0, 200), (0, 50));
        let one = enumerate_summands(&[1], &w, &Cells::point());
        assert_eq!(one.summands, vec![SummandDescriptor { suspension: 0, tensor_power: 1, homological_shift: 0, multiplicity: 1 }]);
        assert!(one.a1_terms.is_empty());
        let two = enumerate_summands(&[2], &w, &Cells::point());
        let mut got: Vec<(u32, u32, u32)> = two.summands.iter().map(|d| (d.suspension, d.tensor_power, d.homological_shift)).collect();
        got.sort();
        assert_eq!(got, vec![(8, 1, 0), (17, 0, 1)]);
        assert_eq!(two.a1_terms.len(), 1);
        assert_eq!(two.a1_terms[0].tmf_index, 0);
        assert!(enumerate_summands(&[2], &Window::new((0, 4), (0, 50)), &Cells::point()).summands.is_empty());
    }

    #[test]
    fn vanishing_filter_boundaries() {
        assert!(a1_vanishing_filter(112, 26));
        assert!(!a1_vanishing_filter(0, 7));
        assert!(a1_vanishing_filter(0, 8));
        assert!(!a1_vanishing_filter(7, 8));
        assert!(a1_vanishing_filter(7, 9));
        // exactly on the line: 7·9 = 12 + 51
        assert!(!a1_vanishing_filter(12, 9));
    }

    #[test]
    fn e1_connectivity() {
        let pt = Cells::point();
        let w = Window::new((0, 16), (0, 40));
        let one: Vec<Vec<u32>> = e1_window(1, &w, &pt).into_iter().map(|x| x.0).collect();
        assert_eq!(one, vec![vec![1]]);
        assert!(e1_window(2, &w, &pt).is_empty());
        let wide = Window::new((96, 144), (0, 40));
        let ids: Vec<u32> = e1_window(1, &wide, &pt).into_iter().map(|x| x.0[0]).collect();
        assert_eq!(ids, (1..=17).collect::<Vec<_>>());
    }
}
