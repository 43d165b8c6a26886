mod common;

use bentkit::{Anf, BooleanFunction};
use common::*;
use proptest::prelude::*;

/// `x1x4 + x2x5 + x3x6 + x1x2x3`.
fn cubic_mm_example() -> BooleanFunction {
    BooleanFunction::from_anf(&[vec![0, 3], vec![1, 4], vec![2, 5], vec![0, 1, 2]], 6).unwrap()
}

/// Component `i` (1-based) of a 6-bit vector.
fn c(v: u32, i: u32) -> bool {
    v >> (6 - i) & 1 == 1
}

#[test]
fn empty_anf_is_zero() {
    let f = BooleanFunction::from_anf::<Vec<usize>>(&[], 3).unwrap();
    assert_eq!(f.len(), 8);
    assert_eq!(f.constant_value(), Some(false));
}

#[test]
fn single_and_table() {
    let f = BooleanFunction::from_anf(&[vec![0, 1]], 2).unwrap();
    let bits: Vec<bool> = (0..4).map(|x| f.get(x)).collect();
    assert_eq!(bits, [false, false, false, true]);
    assert_eq!(f.to_hex(), "1");
}

#[test]
fn out_of_range_variable_rejected() {
    assert!(BooleanFunction::from_anf(&[vec![0, 3]], 3).is_err());
}

#[test]
fn to_anf_examples() {
    let zero = BooleanFunction::zero(2).unwrap();
    assert!(zero.to_anf().is_zero());
    assert_eq!(zero.degree(), None);
    let and = BooleanFunction::from_fn(2, |x| x == 3).unwrap();
    assert_eq!(and.to_anf().index_sets(), vec![vec![0, 1]]);
    assert_eq!(and.degree(), Some(2));
}

#[test]
fn six_variable_catalog_anf_round_trips() {
    let cat = catalog();
    let f = cat.function("h6_1").unwrap();
    let anf = f.to_anf();
    assert_eq!(anf.monomials().len(), 16);
    assert_eq!(anf.degree(), Some(3));
    let sets = anf.index_sets();
    assert!(sets.contains(&vec![0, 1, 2]));
    assert!(sets.contains(&vec![2, 4, 5]));
}

#[test]
fn homogeneity_examples() {
    let cat = catalog();
    assert!(cat.function("h10_4").unwrap().is_homogeneous(3));
    assert!(!cubic_mm_example().is_homogeneous(3));
    for d in 0..4 {
        assert!(!BooleanFunction::zero(4).unwrap().is_homogeneous(d));
    }
}

#[test]
fn derivative_examples() {
    let f = cubic_mm_example();
    assert_eq!(f.derivative(0).unwrap().constant_value(), Some(false));
    let and = BooleanFunction::from_anf(&[vec![0, 1]], 2).unwrap();
    let d = and.derivative(0b10).unwrap();
    assert_eq!(d.to_anf().index_sets(), vec![vec![1]]);
}

#[test]
fn cubic_without_affine_derivatives() {
    let f = catalog().function("h10_4").unwrap();
    for a in 1..1u32 << 10 {
        assert_eq!(f.derivative(a).unwrap().degree(), Some(2), "direction {a:#x}");
    }
}

#[test]
fn higher_derivative_examples() {
    let f = cubic_mm_example();
    let a = 0b101100;
    assert_eq!(f.higher_derivative(&[a, a]).unwrap().constant_value(), Some(false));
    let dirs = [0b100000u32, 0b010000, 0b001000];
    let reference = f.higher_derivative(&dirs).unwrap();
    for perm in [[0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
        let permuted: Vec<u32> = perm.iter().map(|&i| dirs[i]).collect();
        assert_eq!(f.higher_derivative(&permuted).unwrap(), reference);
    }
    // e1, e2, e3 are slow points down the chain: the top derivative is one
    assert_eq!(reference.constant_value(), Some(true));
    let span_sum = (0..8u32).fold(BooleanFunction::zero(6).unwrap(), |acc, k| {
        let shift = (0..3).filter(|i| k >> i & 1 == 1).fold(0, |s, i| s ^ dirs[i]);
        &acc ^ &f.translate(shift)
    });
    assert_eq!(span_sum, reference);
}

#[test]
fn second_derivatives_of_examples() {
    let f = cubic_mm_example();
    let d = f.second_derivative(0b000100, 0b000010).unwrap();
    assert_eq!(d.constant_value(), Some(false));
    let d = f.second_derivative(0b010001, 0b000011).unwrap();
    assert_eq!(d.constant_value(), Some(true));
    let r = f.relaxed_second_derivative(0b010001, 0b000011).unwrap();
    assert_eq!(r.constant_value(), Some(false));
}

#[test]
fn printed_second_derivative_formula() {
    let f = cubic_mm_example();
    for a in 0..64u32 {
        for b in 0..64u32 {
            let c0 = (c(a, 1) & (c(a, 2) & c(b, 3) ^ c(a, 3) & c(b, 2) ^ c(b, 2) & c(b, 3)))
                ^ (c(b, 1) & (c(a, 2) & c(a, 3) ^ c(a, 2) & c(b, 3) ^ c(a, 3) & c(b, 2)))
                ^ (c(a, 1) & c(b, 4))
                ^ (c(a, 2) & c(b, 5))
                ^ (c(a, 3) & c(b, 6))
                ^ (c(a, 4) & c(b, 1))
                ^ (c(a, 5) & c(b, 2))
                ^ (c(a, 6) & c(b, 3));
            let l1 = c(a, 3) & c(b, 2) ^ c(a, 2) & c(b, 3);
            let l2 = c(a, 3) & c(b, 1) ^ c(a, 1) & c(b, 3);
            let l3 = c(a, 2) & c(b, 1) ^ c(a, 1) & c(b, 2);
            let d = f.second_derivative(a, b).unwrap();
            for x in 0..64u32 {
                let expected = c0 ^ (l1 & c(x, 1)) ^ (l2 & c(x, 2)) ^ (l3 & c(x, 3));
                assert_eq!(d.get(x), expected, "a={a:06b} b={b:06b} x={x:06b}");
            }
            assert!(!f.relaxed_second_derivative(a, b).unwrap().to_anf().coefficient(0));
        }
    }
}

#[test]
fn bentness_examples() {
    assert!(cubic_mm_example().is_bent());
    assert!(!BooleanFunction::zero(2).unwrap().is_bent());
    let q = BooleanFunction::from_anf(&[vec![0, 1], vec![2, 3]], 4).unwrap();
    assert!(q.is_bent());
    assert!(bent_by_derivatives(&q));
    assert!(!BooleanFunction::from_anf(&[vec![0, 1]], 3).unwrap().is_bent());
}

#[test]
fn fast_point_dimensions() {
    let cat = catalog();
    for (name, dim) in [("h12_5", 0), ("h6_1", 3), ("h8_1", 1)] {
        assert_eq!(cat.function(name).unwrap().fast_point_space().unwrap().dim(), dim, "{name}");
    }
    assert!(BooleanFunction::one(3).unwrap().fast_point_space().is_err());
    assert!(BooleanFunction::zero(3).unwrap().fast_point_space().is_err());
}

#[test]
fn fast_point_space_matches_definition() {
    let mut rng = rng(7);
    for _ in 0..20 {
        let f = random_mm(&mut rng, 3);
        let Some(d) = f.degree() else { continue };
        let fp = f.fast_point_space().unwrap();
        for a in 0..64u32 {
            let da = f.derivative(a).unwrap().degree();
            let fast = da.map_or(true, |e| e + 1 < d);
            assert_eq!(fp.contains(a), fast, "a = {a:#x}");
        }
    }
}

#[test]
fn direct_sum_examples() {
    let cat = catalog();
    let f = cat.function("h6_1").unwrap();
    let empty = BooleanFunction::zero(0).unwrap();
    assert_eq!(f.direct_sum(&empty).unwrap(), f);
    assert_eq!(f.k_fold(1).unwrap(), f);
    let g = cat.function("h8_1").unwrap();
    let h = f.direct_sum(&g).unwrap();
    assert!(h.is_bent());
    assert!(h.is_homogeneous(3));
    for x in [0u32, 0x3fff, 0x1234, 0x2a55] {
        assert_eq!(h.get(x), f.get(x >> 8) ^ g.get(x & 0xff));
    }
    let two = f.k_fold(2).unwrap();
    assert_eq!(two, f.direct_sum(&f).unwrap());
}

#[test]
fn fast_points_add_under_direct_sums() {
    let cat = catalog();
    let names = ["h6_1", "h8_1", "h8_2", "mm6_cubic"];
    for a in names {
        for b in names {
            let (f, g) = (cat.function(a).unwrap(), cat.function(b).unwrap());
            let h = f.direct_sum(&g).unwrap();
            let d = h.degree().unwrap();
            // brute-force scan of the sum's fast points
            let count = (0..1u32 << h.num_vars())
                .filter(|&v| h.derivative(v).unwrap().degree().map_or(true, |e| e + 1 < d))
                .count();
            let expected = f.fast_point_space().unwrap().dim() + g.fast_point_space().unwrap().dim();
            assert_eq!(count, 1 << expected, "{a} + {b}");
        }
    }
}

#[test]
fn catalog_bent_derivatives_are_balanced() {
    let cat = catalog();
    for name in ["mm6_cubic", "h6_1", "h8_1", "h8_2", "h10_1", "h10_4"] {
        let f = cat.function(name).unwrap();
        for a in 1..f.len() as u32 {
            assert!(f.derivative(a).unwrap().is_balanced(), "{name}, a = {a:#x}");
        }
    }
}

#[test]
fn hex_round_trip() {
    let f = cubic_mm_example();
    let hex = f.to_hex();
    assert_eq!(hex.len(), 16);
    assert_eq!(BooleanFunction::from_hex(&hex, 6).unwrap(), f);
    assert!(BooleanFunction::from_hex("123", 4).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn anf_round_trip(f in any_function(0, 10)) {
        let anf = f.to_anf();
        prop_assert_eq!(anf.to_function(), f.clone());
        let rebuilt = Anf::from_index_sets(f.num_vars(), &anf.index_sets()).unwrap();
        prop_assert_eq!(rebuilt, anf);
    }

    #[test]
    fn parseval(f in any_function(0, 10)) {
        let n = f.num_vars() as u32;
        prop_assert_eq!(f.walsh().energy(), 1i128 << (2 * n));
    }

    #[test]
    fn second_derivative_is_symmetric(f in any_function(2, 8), a in any::<u32>(), b in any::<u32>()) {
        let m = mask(f.num_vars());
        let (a, b) = (a & m, b & m);
        prop_assert_eq!(f.second_derivative(a, b).unwrap(), f.second_derivative(b, a).unwrap());
        for x in 0..f.len() as u32 {
            prop_assert_eq!(f.second_derivative(a, b).unwrap().get(x), second_derivative_at(&f, a, b, x));
        }
    }

    #[test]
    fn walsh_bentness_matches_definition(f in any_function(1, 6)) {
        prop_assert_eq!(f.is_bent(), bent_by_derivatives(&f));
    }

    #[test]
    fn walsh_bentness_matches_definition_on_mm(seed in any::<u64>(), m in 1usize..=3) {
        let mut r = rng(seed);
        let f = random_mm(&mut r, m);
        prop_assert!(f.is_bent());
        prop_assert!(bent_by_derivatives(&f));
        let broken = &f ^ &BooleanFunction::from_fn(2 * m, |x| x == 0).unwrap();
        prop_assert_eq!(broken.is_bent(), bent_by_derivatives(&broken));
    }

    #[test]
    fn fast_point_dimension_bound(f in any_function(1, 9)) {
        if let Some(d) = f.degree().filter(|&d| d >= 1) {
            prop_assert!(f.fast_point_space().unwrap().dim() <= f.num_vars() - d);
        }
    }
}
