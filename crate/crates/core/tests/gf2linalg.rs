mod common;

use bentkit::catalog::parse_base32;
use bentkit::gf2linalg::{apply_affine_equivalence, apply_transform, change_of_basis};
use bentkit::subspaces::{affine_on_cosets, linearity_index, relaxed_linearity_index};
use bentkit::{Gf2Matrix, Subspace};
use common::*;
use proptest::prelude::*;
use rand::Rng;

fn h12_split_subspace() -> Subspace {
    let rows = "300 gg 88 44 22 11".split(' ').map(|t| parse_base32(t, 12).unwrap());
    Subspace::gjb(12, rows).unwrap()
}

fn random_subspace(rng: &mut rand_chacha::ChaCha8Rng, n: usize, k: usize) -> Subspace {
    Subspace::gjb(n, (0..k).map(|_| rng.gen::<u32>() & mask(n))).unwrap()
}

#[test]
fn gjb_examples() {
    assert_eq!(Subspace::gjb(4, []).unwrap().dim(), 0);
    let a = 0b1011;
    let s = Subspace::gjb(4, [a, a]).unwrap();
    assert_eq!(s.basis(), &[a]);
    let u = h12_split_subspace();
    assert_eq!(u.dim(), 6);
    assert_eq!(
        u.basis(),
        &[0b110000000000, 0b001000010000, 0b000100001000, 0b000010000100, 0b000001000010, 0b000000100001]
    );
    assert!(u.is_canonical());
    assert_eq!(u.as_matrix().rank(), 6);
}

#[test]
fn complement_examples() {
    assert_eq!(Subspace::full(5).complement().dim(), 0);
    let u = h12_split_subspace();
    let v = u.complement();
    assert_eq!(v.basis(), &[0b010000000000, 0b10000, 0b01000, 0b00100, 0b00010, 0b00001]);
    assert_eq!(u.intersection(&v).dim(), 0);
    let mut rng = rng(11);
    for _ in 0..100 {
        let k = rng.gen_range(0..=12);
        let u = random_subspace(&mut rng, 12, k);
        let v = u.complement();
        assert_eq!(u.dim() + v.dim(), 12);
        let stacked: Vec<u32> = u.basis().iter().chain(v.basis()).copied().collect();
        assert_eq!(vector_rank(&stacked), 12);
    }
}

#[test]
fn change_of_basis_for_aligned_subspace_swaps_blocks() {
    let (n, r) = (6, 4);
    let u = Subspace::gjb(n, (0..r).map(|i| 1u32 << i)).unwrap();
    let a = change_of_basis(&u).unwrap();
    let s = n - r;
    for z in 0..1u32 << n {
        let (x, y) = (z >> s, z & ((1 << s) - 1));
        assert_eq!(a.apply(z), y << r | x);
    }
    assert!(change_of_basis(&Subspace::zero(n)).is_err());
    assert!(change_of_basis(&Subspace::full(n)).is_err());
}

#[test]
fn change_of_basis_aligns_cosets() {
    let f = catalog().function("h12_3").unwrap();
    let u = h12_split_subspace();
    assert!(affine_on_cosets(&f, &u));
    let g = apply_transform(&f, &change_of_basis(&u).unwrap()).unwrap();
    let high = Subspace::gjb(12, (6..12).map(|i| 1u32 << i)).unwrap();
    assert!(affine_on_cosets(&g, &high));
}

#[test]
fn change_of_basis_is_invertible() {
    let mut rng = rng(12);
    let mut tested = 0;
    while tested < 100 {
        let n = rng.gen_range(2..=12);
        let k = rng.gen_range(1..n);
        let u = random_subspace(&mut rng, n, k);
        if u.dim() == 0 || u.dim() == n {
            continue;
        }
        let a = change_of_basis(&u).unwrap();
        let inv = a.invert().unwrap();
        assert_eq!(a.mul(&inv).unwrap(), Gf2Matrix::identity(n));
        tested += 1;
    }
}

#[test]
fn singular_matrix_rejected() {
    let m = Gf2Matrix::new(vec![0b11, 0b11], 2).unwrap();
    assert_eq!(m.rank(), 1);
    assert!(m.invert().is_err());
    let f = catalog().function("mm6_cubic").unwrap();
    assert!(apply_transform(&f, &Gf2Matrix::new(vec![1; 6], 6).unwrap()).is_err());
}

#[test]
fn identity_transform() {
    let f = catalog().function("h8_1").unwrap();
    assert_eq!(apply_transform(&f, &Gf2Matrix::identity(8)).unwrap(), f);
}

#[test]
fn transforms_preserve_invariants() {
    let f = catalog().function("h10_4").unwrap();
    let mut rng = rng(13);
    for _ in 0..50 {
        let m = random_invertible(&mut rng, 10);
        let g = apply_transform(&f, &m).unwrap();
        assert_eq!(g.degree(), Some(3));
        assert!(g.is_bent());
        assert_eq!(g.fast_point_space().unwrap().dim(), 0);
        assert_eq!(apply_transform(&g, &m.invert().unwrap()).unwrap(), f);
    }
}

#[test]
fn affine_equivalence_preserves_indices() {
    let cat = catalog();
    let mut rng = rng(14);
    for name in ["h6_1", "h8_1", "h8_2", "h10_4"] {
        let f = cat.function(name).unwrap();
        let (ind, rind) = (linearity_index(&f), relaxed_linearity_index(&f));
        let n = f.num_vars();
        for _ in 0..3 {
            let m = random_invertible(&mut rng, n);
            let g = apply_affine_equivalence(&f, &m, rng.gen::<u32>() & mask(n), rng.gen::<u32>() & mask(n), rng.gen())
                .unwrap();
            assert_eq!(linearity_index(&g), ind, "{name}");
            assert_eq!(relaxed_linearity_index(&g), rind, "{name}");
            assert_eq!(g.is_bent(), f.is_bent());
            assert_eq!(g.fast_point_space().unwrap().dim(), f.fast_point_space().unwrap().dim());
        }
    }
}

proptest! {
    #[test]
    fn gjb_is_idempotent_and_canonical(n in 1usize..=16, vs in prop::collection::vec(any::<u32>(), 0..10)) {
        let vs: Vec<u32> = vs.into_iter().map(|v| v & mask(n)).collect();
        let s = Subspace::gjb(n, vs.iter().copied()).unwrap();
        prop_assert!(s.is_canonical());
        prop_assert_eq!(s.dim(), vector_rank(&vs));
        prop_assert_eq!(Subspace::gjb(n, s.basis().iter().copied()).unwrap(), s.clone());
        for v in vs {
            prop_assert!(s.contains(v));
        }
    }

    #[test]
    fn equal_spans_have_equal_bases(n in 1usize..=10, vs in prop::collection::vec(any::<u32>(), 1..6), seed in any::<u64>()) {
        let vs: Vec<u32> = vs.into_iter().map(|v| v & mask(n)).collect();
        let s = Subspace::gjb(n, vs.iter().copied()).unwrap();
        // a random invertible recombination spans the same space
        let mut r = rng(seed);
        let k = vs.len();
        let t = random_invertible(&mut r, k);
        let mixed: Vec<u32> = (0..k)
            .map(|i| (0..k).filter(|&j| t.get(i, j)).fold(0, |acc, j| acc ^ vs[j]))
            .collect();
        prop_assert_eq!(Subspace::gjb(n, mixed).unwrap(), s);
    }

    #[test]
    fn complement_is_a_complement(n in 1usize..=16, vs in prop::collection::vec(any::<u32>(), 0..16)) {
        let u = Subspace::gjb(n, vs.into_iter().map(|v| v & mask(n))).unwrap();
        let v = u.complement();
        let stacked: Vec<u32> = u.basis().iter().chain(v.basis()).copied().collect();
        prop_assert_eq!(vector_rank(&stacked), n);
        prop_assert_eq!(u.dim() + v.dim(), n);
    }

    #[test]
    fn inverse_round_trip(n in 1usize..=12, seed in any::<u64>()) {
        let mut r = rng(seed);
        let m = random_invertible(&mut r, n);
        let inv = m.invert().unwrap();
        prop_assert_eq!(m.mul(&inv).unwrap(), Gf2Matrix::identity(n));
        let f = random_function(&mut r, n);
        prop_assert_eq!(apply_transform(&apply_transform(&f, &m).unwrap(), &inv).unwrap(), f.clone());
        for x in 0..1u32 << n {
            let direct = (0..n).filter(|&i| x >> (n - 1 - i) & 1 == 1).fold(0, |acc, i| acc ^ m.rows()[i]);
            prop_assert_eq!(apply_transform(&f, &m).unwrap().get(x), f.get(direct));
        }
    }
}
