//! Worked examples for the resolution engine, charts and cell objects.

use ext_forge::comod::FiniteModule;
use ext_forge::hopf::Profile;
use ext_forge::resolve::*;

fn a2(max_s: usize, max_t: i32) -> FreeResolution {
    minimal_resolution(algebra_for(&Profile::a(2), max_t), max_s, max_t).unwrap()
}

#[test]
fn ext_a1_known_values() {
    let r = minimal_resolution(algebra_for(&Profile::a(1), 30), 10, 30).unwrap();
    let c = ext_f2(&r, &ChartOptions::default()).unwrap();
    // ko pattern: h0-tower in stem 0, h1, h1², tower from stem 4 (s=3), v1^4 at (4,12)
    assert_eq!(c.dim_at_stem(0, 5), 1);
    assert_eq!(c.dim_at_stem(1, 1), 1);
    assert_eq!(c.dim_at_stem(2, 2), 1);
    assert_eq!(c.dim_at_stem(3, 3), 0);
    assert_eq!(c.dim_at_stem(4, 2), 0);
    assert_eq!(c.dim_at_stem(4, 3), 1);
    assert_eq!(c.dim_at_stem(8, 4), 1);
}

#[test]
fn change_of_rings() {
    let r = a2(8, 30);
    let m = FiniteModule::quotient_hopf_module(r.algebra(), &Profile::a(1)).unwrap();
    let lhs = ext_module(&r, &m, &ChartOptions::default()).unwrap();
    let r1 = minimal_resolution(algebra_for(&Profile::a(1), 30), 8, 30).unwrap();
    let rhs = ext_f2(&r1, &ChartOptions::default()).unwrap();
    for s in 0..=7 {
        for stem in 0..=14 {
            assert_eq!(lhs.dim_at_stem(stem, s), rhs.dim_at_stem(stem, s), "(stem {stem}, s {s})");
        }
    }
}

#[test]
fn products_in_low_degrees() {
    let r = a2(6, 20);
    let h0 = standard_class(&r, "h0").unwrap();
    let h1 = standard_class(&r, "h1").unwrap();
    assert!(yoneda_product(&r, &h0, &h0).unwrap().class.iter().any(|&b| b));
    assert!(yoneda_product(&r, &h1, &h0).unwrap().class.iter().all(|&b| !b));
    let h0_3 = standard_class(&r, "h0^3").unwrap();
    assert_eq!((h0_3.s, h0_3.t), (3, 3));
}

#[test]
fn cones_and_cells() {
    let r = a2(10, 40);
    let x = h8(&r).unwrap();
    assert_eq!(x.bidegrees(), vec![(0, 0), (1, 2)]);
    let c = ext_cell(&r, &x, None, &ChartOptions::default()).unwrap();
    assert_eq!(c.dim(3, 3), 0);
    assert_eq!(c.dim(0, 0), 1);
    assert!(matches!(cone_on_class(&r, 1, 1, &[false], "split"), Err(ResolveError::ZeroAttachingClass)));
}

#[test]
fn self_map_is_unique_and_recorded() {
    let r = a2(10, 40);
    let (x, sel) = h8v18(&r).unwrap();
    // The top-cell diagonal may be 0 or v1^8; each extends uniquely.
    let diagonals: Vec<_> = sel.candidates.iter().map(|c| c.diagonal.clone()).collect();
    assert_eq!(diagonals, vec![vec![vec![true], vec![false]], vec![vec![true], vec![true]]]);
    assert_eq!(sel.chosen().diagonal, vec![vec![true], vec![true]]);
    assert!(sel.homotopy_freedom.values().all(|&d| d == 0));
    assert_eq!(x.bidegrees(), vec![(0, 0), (1, 2), (17, 7), (18, 9)]);
    assert!(!x.selections.is_empty());
}

#[test]
fn unit_lifts_to_identity() {
    let r = a2(6, 20);
    let id = lift_chain_map(&r, 0, 0, &[true]).unwrap();
    assert_eq!((id.drop, id.shift), (0, 0));
    for j in 0..id.len() {
        for g in 0..r.generators(j).len() {
            let img = id.image(j, g);
            assert_eq!(img.len(), 1, "level {j} generator {g}");
            assert_eq!(img[0].0 as usize, g);
        }
    }
    let h0 = standard_class(&r, "h0").unwrap();
    let h1 = standard_class(&r, "h1").unwrap();
    assert_eq!(yoneda_product(&r, &h0, &h1).unwrap().class, yoneda_product(&r, &h1, &h0).unwrap().class);
}

#[test]
fn serialization_round_trip() {
    let r = a2(8, 30);
    let back = FreeResolution::from_json(r.algebra().clone(), &r.to_json()).unwrap();
    let o = ChartOptions::with_products(&r, &["h0", "h1"]);
    assert_eq!(ext_f2(&r, &o).unwrap(), ext_f2(&back, &ChartOptions::with_products(&back, &["h0", "h1"])).unwrap());
}
