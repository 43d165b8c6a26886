//! Independent brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use bentkit::catalog::Catalog;
use bentkit::constructions::mm_bent;
use bentkit::{BooleanFunction, Gf2Matrix, Subspace};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn catalog() -> Catalog {
    Catalog::builtin()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_function(rng: &mut ChaCha8Rng, n: usize) -> BooleanFunction {
    BooleanFunction::from_fn(n, |_| rng.gen()).unwrap()
}

/// `f_{pi, phi}` with a random permutation `pi` and random `phi` on `m` variables.
pub fn random_mm(rng: &mut ChaCha8Rng, m: usize) -> BooleanFunction {
    let mut pi: Vec<u32> = (0..1u32 << m).collect();
    pi.shuffle(rng);
    let phi = random_function(rng, m);
    mm_bent(&pi, &phi).unwrap()
}

/// A random invertible `n x n` matrix, by rejection.
pub fn random_invertible(rng: &mut ChaCha8Rng, n: usize) -> Gf2Matrix {
    loop {
        let rows: Vec<u32> = (0..n).map(|_| rng.gen::<u32>() & mask(n)).collect();
        let m = Gf2Matrix::new(rows, n).unwrap();
        if m.rank() == n {
            return m;
        }
    }
}

pub fn mask(n: usize) -> u32 {
    if n == 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

/// Truth-table strategy for `lo..=hi` variables.
pub fn any_function(lo: usize, hi: usize) -> impl Strategy<Value = BooleanFunction> {
    (lo..=hi).prop_flat_map(|n| prop::collection::vec(any::<bool>(), 1usize << n))
        .prop_map(|bits| BooleanFunction::from_bits(&bits).unwrap())
}

/// Bentness by the derivative definition: every `D_a f = b` with `a != 0`
/// has exactly `2^(n-1)` solutions.
pub fn bent_by_derivatives(f: &BooleanFunction) -> bool {
    let n = f.num_vars();
    if n % 2 == 1 || n == 0 {
        return false;
    }
    let size = 1u32 << n;
    (1..size).all(|a| {
        let ones = (0..size).filter(|&x| f.get(x) != f.get(x ^ a)).count();
        ones == (size / 2) as usize
    })
}

/// `D_a D_b f(x)` straight from the definition.
pub fn second_derivative_at(f: &BooleanFunction, a: u32, b: u32, x: u32) -> bool {
    f.get(x) ^ f.get(x ^ a) ^ f.get(x ^ b) ^ f.get(x ^ a ^ b)
}

/// Value of `D_{a,b} f` if constant.
pub fn constant_second_derivative(f: &BooleanFunction, a: u32, b: u32) -> Option<bool> {
    let v = second_derivative_at(f, a, b, 0);
    (0..1u32 << f.num_vars()).all(|x| second_derivative_at(f, a, b, x) == v).then_some(v)
}

/// Every plane of `U` has constant `D_{a,b} f` (zero unless `relaxed`).
pub fn subspace_passes(f: &BooleanFunction, u: &Subspace, relaxed: bool) -> bool {
    let elems = u.elements();
    elems.iter().all(|&a| {
        elems.iter().all(|&b| match constant_second_derivative(f, a, b) {
            Some(false) => true,
            Some(true) => relaxed,
            None => false,
        })
    })
}

/// All `r`-dimensional subspaces of `F_2^n`, as spans of increasing vector tuples.
pub fn all_subspaces(n: usize, r: usize) -> Vec<Subspace> {
    fn extend(n: usize, r: usize, start: u32, picked: &mut Vec<u32>, out: &mut std::collections::HashSet<Subspace>) {
        if picked.len() == r {
            let u = Subspace::gjb(n, picked.iter().copied()).unwrap();
            if u.dim() == r {
                out.insert(u);
            }
            return;
        }
        for v in start..1u32 << n {
            picked.push(v);
            extend(n, r, v + 1, picked, out);
            picked.pop();
        }
    }
    let mut set = std::collections::HashSet::new();
    extend(n, r, 1, &mut Vec::new(), &mut set);
    let mut out: Vec<Subspace> = set.into_iter().collect();
    out.sort();
    out
}

/// Brute-force (relaxed) M-subspaces of dimension `r`.
pub fn brute_force_ms(f: &BooleanFunction, r: usize, relaxed: bool) -> Vec<Subspace> {
    all_subspaces(f.num_vars(), r).into_iter().filter(|u| subspace_passes(f, u, relaxed)).collect()
}

/// GF(2) rank of explicit bit rows.
pub fn gf2_rank(mut rows: Vec<Vec<bool>>) -> usize {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&i| rows[i][c]) else { continue };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && row[c] {
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x ^= *y;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Rank of the full graph incidence matrix `(M_f M_f'; M_f' M_f)`.
pub fn graph_incidence_rank(f: &BooleanFunction) -> usize {
    let size = 1u32 << f.num_vars();
    let rows = (0..2 * size)
        .map(|r| {
            (0..2 * size)
                .map(|c| {
                    let v = f.get((r % size) ^ (c % size));
                    if (r / size) == (c / size) {
                        v
                    } else {
                        !v
                    }
                })
                .collect()
        })
        .collect();
    gf2_rank(rows)
}

/// Rank of `M_f = (f(x + y))`.
pub fn support_incidence_rank(f: &BooleanFunction) -> usize {
    let size = 1u32 << f.num_vars();
    gf2_rank((0..size).map(|y| (0..size).map(|x| f.get(x ^ y)).collect()).collect())
}

/// Row-echelon rank of `u32` vectors.
pub fn vector_rank(vs: &[u32]) -> usize {
    gf2_rank(vs.iter().map(|&v| (0..32).map(|i| v >> i & 1 == 1).collect()).collect())
}
