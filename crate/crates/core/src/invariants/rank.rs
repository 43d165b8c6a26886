use std::collections::HashMap;

use crate::boolcore::{Anf, BooleanFunction};

/// Which incidence structure a [`DevelopmentView`] describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DevelopmentKind {
    /// Translates of the support: `M_f = (f(x + y))_{y, x}`.
    Support,
    /// Translates of the graph: the `2^(n+1)` square block matrix
    /// `(M_f, M_f'; M_f', M_f)` with `f'` the complement.
    Graph,
}

/// Incidence matrix rows generated on demand from a truth table.
#[derive(Clone, Debug)]
pub struct DevelopmentView<'f> {
    source: &'f BooleanFunction,
    kind: DevelopmentKind,
}

impl<'f> DevelopmentView<'f> {
    pub fn new(source: &'f BooleanFunction, kind: DevelopmentKind) -> Self {
        Self { source, kind }
    }

    pub fn order(&self) -> usize {
        match self.kind {
            DevelopmentKind::Support => self.source.len(),
            DevelopmentKind::Graph => 2 * self.source.len(),
        }
    }

    /// Row `y` as packed bits, column `x` at word `x >> 6`, bit `x & 63`.
    pub fn row(&self, y: usize) -> Vec<u64> {
        let len = self.source.len();
        match self.kind {
            DevelopmentKind::Support => self.source.translate(y as u32).words().to_vec(),
            DevelopmentKind::Graph => {
                let (c, y) = (y / len, y % len);
                let base = self.source.translate(y as u32);
                let (left, right) = if c == 0 { (base.clone(), base.complement()) } else { (base.complement(), base) };
                concat_bits(len, left.words(), right.words())
            }
        }
    }
}

fn concat_bits(len: usize, left: &[u64], right: &[u64]) -> Vec<u64> {
    if len >= 64 {
        let mut out = left.to_vec();
        out.extend_from_slice(right);
        return out;
    }
    vec![left[0] | (right[0] << len)]
}

/// Incremental GF(2) row echelon basis over packed rows.
#[derive(Default)]
pub(crate) struct EchelonBasis {
    rows: Vec<(usize, Vec<u64>)>,
}

impl EchelonBasis {
    /// Reduces `row` and keeps it if independent; returns whether it was kept.
    pub(crate) fn insert(&mut self, mut row: Vec<u64>) -> bool {
        for (p, prow) in &self.rows {
            if row[p >> 6] >> (p & 63) & 1 == 1 {
                row.iter_mut().zip(prow).for_each(|(a, b)| *a ^= b);
            }
        }
        match row.iter().position(|&w| w != 0) {
            Some(w) => {
                let p = (w << 6) | row[w].trailing_zeros() as usize;
                self.rows.push((p, row));
                true
            }
            None => false,
        }
    }

    pub(crate) fn rank(&self) -> usize {
        self.rows.len()
    }
}

/// GF(2) rank of `M_f`, streaming the rows `f(x + y)` through elimination.
pub fn two_rank_streaming(f: &BooleanFunction) -> usize {
    let view = DevelopmentView::new(f, DevelopmentKind::Support);
    let mut basis = EchelonBasis::default();
    for y in 0..view.order() {
        basis.insert(view.row(y));
        if basis.rank() == view.order() {
            break;
        }
    }
    basis.rank()
}

/// GF(2) rank of `M_f` as `dim span{d_S f}` over formal partial derivatives.
///
/// Translates satisfy `f(x + y) = sum_S y^S d_S f(x)` and `d_S f` is the
/// derivative in the directions `e_i, i in S`, so both spans agree. Only
/// sets `S` inside some monomial contribute, which keeps sparse inputs cheap.
pub fn two_rank_from_anf(anf: &Anf) -> usize {
    let mut closure: Vec<u32> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for &m in anf.monomials() {
        // all submasks of m
        let mut s = m;
        loop {
            if seen.insert(s) {
                closure.push(s);
            }
            if s == 0 {
                break;
            }
            s = (s - 1) & m;
        }
    }
    closure.sort_unstable();
    let index: HashMap<u32, usize> = closure.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let words = closure.len().div_ceil(64).max(1);
    let mut basis = EchelonBasis::default();
    for &s in &closure {
        let partial = anf.partial(s);
        if partial.is_zero() {
            continue;
        }
        let mut row = vec![0u64; words];
        for m in partial.monomials() {
            let k = index[m];
            row[k >> 6] ^= 1 << (k & 63);
        }
        basis.insert(row);
    }
    basis.rank()
}

/// GF(2) rank of the incidence matrix of the development of the support.
pub fn two_rank(f: &BooleanFunction) -> usize {
    two_rank_streaming(f)
}

/// GF(2) rank of the incidence matrix of the development of the graph:
/// 2 for constant functions and the 2-rank otherwise. Uses the
/// partial-derivative route, which is much cheaper for low-degree inputs.
pub fn gamma_rank(f: &BooleanFunction) -> usize {
    gamma_rank_from_anf(&f.to_anf())
}

pub fn gamma_rank_from_anf(anf: &Anf) -> usize {
    match anf.degree() {
        None | Some(0) => 2,
        _ => two_rank_from_anf(anf),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_function_has_rank_zero() {
        let f = BooleanFunction::zero(4).unwrap();
        assert_eq!(two_rank(&f), 0);
        assert_eq!(two_rank_streaming(&f), 0);
        assert_eq!(gamma_rank(&f), 2);
    }

    #[test]
    fn both_routes_agree() {
        for seed in 0u32..40 {
            let n = 1 + (seed as usize % 7);
            let f = BooleanFunction::from_fn(n, |x| (x.wrapping_add(seed).wrapping_mul(0x2c1b_3c6d) >> 13) & 1 == 1)
                .unwrap();
            assert_eq!(two_rank_from_anf(&f.to_anf()), two_rank_streaming(&f), "seed {seed}");
        }
    }

    #[test]
    fn graph_rows_have_block_structure() {
        let f = BooleanFunction::from_anf(&[vec![0, 1]], 2).unwrap();
        let view = DevelopmentView::new(&f, DevelopmentKind::Graph);
        assert_eq!(view.order(), 8);
        // row (c=0, y=0): f then complement of f
        assert_eq!(view.row(0)[0], 0b0111_1000);
        assert_eq!(view.row(4)[0], 0b1000_0111);
    }
}
