//! The independent oracle against the engine.

use ext_forge::comod::FiniteModule;
use ext_forge::hopf::{milnor_product, MilnorElement, Profile, Sq};
use ext_forge::oracle::{adem_straighten, comodule_by_name, cotor, is_admissible, DualAlgebra};
use ext_forge::resolve::{algebra_for, ext_module, minimal_resolution, ChartOptions};
use itertools::Itertools;

fn sq_word(word: &[u32]) -> MilnorElement {
    let p = Profile::full();
    word.iter().fold(MilnorElement::unit(p.clone()), |acc, &i| {
        milnor_product(&acc, &MilnorElement::monomial(p.clone(), Sq::new(vec![i]))).unwrap()
    })
}

/// Adem straightening and the Milnor product define the same element for
/// every word of length at most 3 in total degree at most 16.
#[test]
fn adem_agrees_with_milnor_product() {
    let mut checked = 0;
    for len in 1..=3 {
        for word in (0..len).map(|_| 1u32..=16).multi_cartesian_product() {
            if word.iter().sum::<u32>() > 16 {
                continue;
            }
            let adem = adem_straighten(&word);
            assert!(adem.iter().all(|w| is_admissible(w)));
            let mut rhs = MilnorElement::zero(Profile::full());
            for w in &adem {
                rhs = rhs.add(&sq_word(w)).unwrap();
            }
            assert_eq!(sq_word(&word), rhs, "word {word:?}");
            checked += 1;
        }
    }
    assert!(checked > 500);
}

fn compare(n: u32, name: &str, max_s: usize, max_stem: i32) {
    let max_t = max_stem + max_s as i32;
    let alg = algebra_for(&Profile::a(n), max_t);
    let r = minimal_resolution(alg.clone(), max_s + 1, max_t).unwrap();
    let m = match name.strip_prefix("bo:") {
        Some(i) => FiniteModule::bo(&alg, i.parse().unwrap()).unwrap(),
        None => FiniteModule::trivial(&alg).unwrap(),
    };
    let chart = ext_module(&r, &m, &ChartOptions::default()).unwrap();
    let g = DualAlgebra::a(n, max_t as u32);
    let dims = cotor(&g, &comodule_by_name(&g, name).unwrap(), max_s, max_t as u32).unwrap();
    for s in 0..=max_s {
        for stem in 0..=max_stem {
            let t = stem + s as i32;
            assert_eq!(chart.dim(s, t), dims.get(&(s, t as u32)).copied().unwrap_or(0), "A({n}) {name} at (s,t)=({s},{t})");
        }
    }
}

#[test]
fn engine_matches_oracle_bo2() {
    compare(1, "bo:2", 6, 12);
    compare(2, "bo:2", 9, 33);
}

#[test]
fn engine_matches_oracle_wider_f2() {
    compare(2, "f2", 10, 30);
}
