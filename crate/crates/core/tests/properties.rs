use std::collections::BTreeMap;

use ext_forge::bgpoly::{check_lemma, enumerate_summands, f, f_multi, a1_vanishing_filter, Cells, Window};
use ext_forge::charts::{parse_tsv, render_tsv};
use ext_forge::descriptor::Descriptor;
use ext_forge::gf2::{BitMatrix, BitVec};
use ext_forge::hopf::{milnor_product, MilnorElement, Profile, Sq};
use ext_forge::resolve::{ClassGroup, ExtChart};
use proptest::prelude::*;

fn matrix() -> impl Strategy<Value = BitMatrix> {
    (1usize..40, 1usize..90).prop_flat_map(|(r, c)| {
        proptest::collection::vec(any::<bool>(), r * c).prop_map(move |bits| BitMatrix::from_fn(r, c, |i, j| bits[i * c + j]))
    })
}

fn sq_in_a2() -> impl Strategy<Value = Sq> {
    (0u32..8, 0u32..4, 0u32..2).prop_map(|(a, b, c)| Sq::new(vec![a, b, c]))
}

proptest! {
    #[test]
    fn rank_nullity(m in matrix()) {
        let e = m.rref();
        let k = m.kernel_basis();
        prop_assert_eq!(e.rank + k.len(), m.cols());
        prop_assert_eq!(e.pivot_columns.len(), e.rank);
        prop_assert!(e.pivot_columns.windows(2).all(|w| w[0] < w[1]));
        for v in &k {
            prop_assert!(m.mul_vec(v).unwrap().is_zero());
        }
    }

    #[test]
    fn solve_reproduces_image(m in matrix(), seed in any::<u64>()) {
        let x = BitVec::from_bools(&(0..m.cols()).map(|i| (seed >> (i % 64)) & 1 == 1).collect::<Vec<_>>());
        let b = m.mul_vec(&x).unwrap();
        let y = m.solve(&b).unwrap().expect("b is in the image");
        prop_assert_eq!(m.mul_vec(&y).unwrap(), b);
    }

    #[test]
    fn milnor_product_is_associative(a in sq_in_a2(), b in sq_in_a2(), c in sq_in_a2()) {
        let p = Profile::a(2);
        let (a, b, c) = (MilnorElement::monomial(p.clone(), a), MilnorElement::monomial(p.clone(), b), MilnorElement::monomial(p, c));
        let left = milnor_product(&milnor_product(&a, &b).unwrap(), &c).unwrap();
        let right = milnor_product(&a, &milnor_product(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn bg_lemma_holds(i in 0u32..2000) {
        prop_assert!(check_lemma(i).passed());
    }

    #[test]
    fn bg_multi_is_product_and_weight(idx in proptest::collection::vec(1u32..40, 1..4)) {
        let p = f_multi(&idx);
        let total: u32 = idx.iter().sum();
        prop_assert!(p.coefficients.keys().all(|&(_, l, m)| l + m == total));
        let prod: u128 = idx.iter().map(|&i| f(i).total()).product();
        prop_assert_eq!(p.total(), prod);
        let all = enumerate_summands(&idx, &Window::new((0, i32::MAX / 2), (0, u32::MAX)), &Cells::point());
        prop_assert_eq!(all.summands.iter().map(|d| d.multiplicity).sum::<u128>(), p.total());
    }

    #[test]
    fn a1_filter_is_monotone(stem in -50i64..500, s in 0i64..200) {
        if a1_vanishing_filter(stem, s) {
            prop_assert!(a1_vanishing_filter(stem, s + 1));
            prop_assert!(a1_vanishing_filter(stem - 1, s));
        }
        prop_assert_eq!(a1_vanishing_filter(stem, s), 7 * s > stem + 51);
    }

    #[test]
    fn tsv_round_trip(dims in proptest::collection::btree_map((0usize..20, 0i32..40), 0usize..4, 0..60)) {
        let mut c = ExtChart::empty("A(2)", "f2");
        for (&(s, stem), &d) in &dims {
            c.groups.insert((s, stem + s as i32), ClassGroup { dim: d, cells: vec!["0".into(); d], names: vec![] });
        }
        let t = render_tsv(&c);
        let back = parse_tsv(&t, "A(2)", "f2").unwrap();
        prop_assert_eq!(render_tsv(&back), t.clone());
        let got: BTreeMap<_, _> = back.groups.iter().map(|(k, g)| (*k, g.dim)).collect();
        let want: BTreeMap<_, _> = c.groups.iter().filter(|(_, g)| g.dim > 0).map(|(k, g)| (*k, g.dim)).collect();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn descriptor_display_parses_back(k in -20i32..40, i in 0u32..5, cell in 0usize..3) {
        let cell = ["", " ⊗ h8", " ⊗ h8v18"][cell];
        let d = Descriptor::parse(&format!("S^{k} (bo:{i} ⊗ tmfbg:1){cell}")).unwrap();
        prop_assert_eq!(Descriptor::parse(&d.to_string()).unwrap(), d);
    }
}
