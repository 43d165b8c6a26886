//! Bit-packed linear algebra over GF(2) for dimensions up to 32.
//!
//! Vectors are `u32` values with coordinate `i` (0-based) at bit `n - 1 - i`,
//! the same layout used for truth-table indices.

use std::cmp::Ordering;
use std::fmt;

use crate::boolcore::BooleanFunction;
use crate::error::{Error, Result};

#[inline]
fn leading_bit(v: u32) -> u32 {
    31 - v.leading_zeros()
}

#[inline]
pub(crate) fn parity(v: u32) -> bool {
    v.count_ones() & 1 == 1
}

/// Standard dot product `<a, b>` over GF(2).
#[inline]
pub fn dot(a: u32, b: u32) -> bool {
    parity(a & b)
}

fn width_mask(n: usize) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

/// Kernel of the linear map sending coordinate `i` of `F_2^n` to `images[i]`
/// (dense bitsets of equal length). Returns a basis of the kernel.
pub(crate) fn kernel_of_images(n: usize, images: Vec<Vec<u64>>) -> Vec<u32> {
    let mut pivots: Vec<(usize, Vec<u64>, u32)> = Vec::new();
    let mut kernel = Vec::new();
    for (i, mut row) in images.into_iter().enumerate() {
        let mut combo = 1u32 << (n - 1 - i);
        for (p, prow, pcombo) in &pivots {
            if (row[p >> 6] >> (p & 63)) & 1 == 1 {
                row.iter_mut().zip(prow).for_each(|(a, b)| *a ^= b);
                combo ^= pcombo;
            }
        }
        match row.iter().position(|&w| w != 0) {
            Some(w) => {
                let p = (w << 6) | row[w].trailing_zeros() as usize;
                pivots.push((p, row, combo));
            }
            None => kernel.push(combo),
        }
    }
    kernel
}

/// Dense GF(2) matrix with bit-packed rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Gf2Matrix {
    rows: Vec<u32>,
    ncols: usize,
}

impl Gf2Matrix {
    pub fn new(rows: Vec<u32>, ncols: usize) -> Result<Self> {
        if ncols > 32 {
            return Err(Error::Dimension(format!("{ncols} columns exceed 32")));
        }
        if let Some(&r) = rows.iter().find(|&&r| r & !width_mask(ncols) != 0) {
            return Err(Error::VectorWidth { vector: r as u64, n: ncols });
        }
        Ok(Self { rows, ncols })
    }

    pub fn identity(n: usize) -> Self {
        Self { rows: (0..n).map(|i| 1u32 << (n - 1 - i)).collect(), ncols: n }
    }

    pub fn rows(&self) -> &[u32] {
        &self.rows
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn is_square(&self) -> bool {
        self.rows.len() == self.ncols
    }

    /// Entry in row `i`, column `j`.
    pub fn get(&self, i: usize, j: usize) -> bool {
        (self.rows[i] >> (self.ncols - 1 - j)) & 1 == 1
    }

    /// Row vector times matrix, `x * M`, with `x` of `nrows` bits.
    #[inline]
    pub fn apply(&self, x: u32) -> u32 {
        let m = self.rows.len();
        let mut acc = 0;
        let mut bits = x;
        while bits != 0 {
            let b = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            acc ^= self.rows[m - 1 - b];
        }
        acc
    }

    /// Images `x * M` for every `x` of `nrows` bits.
    pub fn image_table(&self) -> Vec<u32> {
        let m = self.rows.len();
        let mut out = vec![0u32; 1usize << m];
        for x in 1..out.len() {
            let low = x.trailing_zeros() as usize;
            out[x] = out[x & (x - 1)] ^ self.rows[m - 1 - low];
        }
        out
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &Gf2Matrix) -> Result<Gf2Matrix> {
        if self.ncols != other.nrows() {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.nrows(),
                self.ncols,
                other.nrows(),
                other.ncols
            )));
        }
        Ok(Gf2Matrix { rows: self.rows.iter().map(|&r| other.apply(r)).collect(), ncols: other.ncols })
    }

    pub fn transpose(&self) -> Gf2Matrix {
        let m = self.rows.len();
        let rows = (0..self.ncols)
            .map(|j| (0..m).fold(0u32, |acc, i| (acc << 1) | self.get(i, j) as u32))
            .collect();
        Gf2Matrix { rows, ncols: m }
    }

    /// Stacks `self` on top of `other`.
    pub fn stack(&self, other: &Gf2Matrix) -> Result<Gf2Matrix> {
        if self.ncols != other.ncols {
            return Err(Error::Dimension("stacking matrices with different widths".into()));
        }
        let mut rows = self.rows.clone();
        rows.extend_from_slice(&other.rows);
        Ok(Gf2Matrix { rows, ncols: self.ncols })
    }

    pub fn rank(&self) -> usize {
        Subspace::span_unchecked(self.ncols, self.rows.iter().copied()).dim()
    }

    /// Inverse by Gauss-Jordan elimination on `[M | I]`.
    pub fn invert(&self) -> Result<Gf2Matrix> {
        if !self.is_square() {
            return Err(Error::Dimension("only square matrices can be inverted".into()));
        }
        let n = self.ncols;
        let mut work: Vec<(u32, u32)> = self.rows.iter().enumerate().map(|(i, &r)| (r, 1u32 << (n - 1 - i))).collect();
        for col in 0..n {
            let bit = 1u32 << (n - 1 - col);
            let pivot = (col..n).find(|&i| work[i].0 & bit != 0).ok_or(Error::SingularMatrix)?;
            work.swap(col, pivot);
            let (pr, pi) = work[col];
            for (i, row) in work.iter_mut().enumerate() {
                if i != col && row.0 & bit != 0 {
                    row.0 ^= pr;
                    row.1 ^= pi;
                }
            }
        }
        Ok(Gf2Matrix { rows: work.into_iter().map(|(_, inv)| inv).collect(), ncols: n })
    }

    /// Columns `start..start + len` as linear forms: entry `j` is the column
    /// vector of length `nrows`, i.e. the form `z -> <z, column>`.
    pub fn column_forms(&self, start: usize, len: usize) -> Vec<u32> {
        let t = self.transpose();
        t.rows[start..start + len].to_vec()
    }
}

impl fmt::Debug for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Gf2Matrix {}x{} [", self.nrows(), self.ncols)?;
        for &r in &self.rows {
            writeln!(f, "  {:0width$b}", r, width = self.ncols)?;
        }
        write!(f, "]")
    }
}

/// `x -> f(x * M)` for a square invertible `M` of size `n`.
pub fn apply_transform(f: &BooleanFunction, m: &Gf2Matrix) -> Result<BooleanFunction> {
    let n = f.num_vars();
    if !m.is_square() || m.ncols() != n {
        return Err(Error::Dimension(format!("transform must be {n}x{n}")));
    }
    if m.rank() != n {
        return Err(Error::SingularMatrix);
    }
    let images = m.image_table();
    BooleanFunction::from_fn(n, |x| f.get(images[x as usize]))
}

/// `x -> f(x * M + c) + <a, x> + b`, the general equivalence action.
pub fn apply_affine_equivalence(
    f: &BooleanFunction,
    m: &Gf2Matrix,
    shift: u32,
    linear: u32,
    constant: bool,
) -> Result<BooleanFunction> {
    let n = f.num_vars();
    if !m.is_square() || m.ncols() != n || m.rank() != n {
        return Err(Error::SingularMatrix);
    }
    let images = m.image_table();
    BooleanFunction::from_fn(n, |x| f.get(images[x as usize] ^ shift) ^ dot(linear, x) ^ constant)
}

/// A subspace of `F_2^n` held by its Gauss-Jordan basis: rows sorted by
/// decreasing leading bit, each leading bit the only set bit of its column.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    n: usize,
    basis: Vec<u32>,
}

impl Subspace {
    pub fn zero(n: usize) -> Self {
        Self { n, basis: Vec::new() }
    }

    pub fn full(n: usize) -> Self {
        Self { n, basis: (0..n).map(|i| 1u32 << (n - 1 - i)).collect() }
    }

    /// Gauss-Jordan basis of the span of `vectors`.
    pub fn gjb(n: usize, vectors: impl IntoIterator<Item = u32>) -> Result<Self> {
        if n > 32 {
            return Err(Error::Dimension(format!("ambient dimension {n} exceeds 32")));
        }
        let mut s = Self::zero(n);
        for v in vectors {
            if v & !width_mask(n) != 0 {
                return Err(Error::VectorWidth { vector: v as u64, n });
            }
            s.insert(v);
        }
        Ok(s)
    }

    pub(crate) fn span_unchecked(n: usize, vectors: impl IntoIterator<Item = u32>) -> Self {
        let mut s = Self::zero(n);
        for v in vectors {
            s.insert(v);
        }
        s
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[u32] {
        &self.basis
    }

    pub fn as_matrix(&self) -> Gf2Matrix {
        Gf2Matrix { rows: self.basis.clone(), ncols: self.n }
    }

    /// Mask of pivot (leading) bits.
    pub fn pivot_mask(&self) -> u32 {
        self.basis.iter().fold(0, |acc, &r| acc | (1 << leading_bit(r)))
    }

    /// Canonical representative of `v + U`: `v` with every pivot bit cleared.
    #[inline]
    pub fn reduce(&self, mut v: u32) -> u32 {
        for &r in &self.basis {
            if v & (1 << leading_bit(r)) != 0 {
                v ^= r;
            }
        }
        v
    }

    #[inline]
    pub fn contains(&self, v: u32) -> bool {
        self.reduce(v) == 0
    }

    /// Adds `v` to the span, keeping the basis canonical. Returns whether the
    /// dimension grew.
    pub fn insert(&mut self, v: u32) -> bool {
        let v = self.reduce(v);
        if v == 0 {
            return false;
        }
        let p = 1u32 << leading_bit(v);
        for r in self.basis.iter_mut() {
            if *r & p != 0 {
                *r ^= v;
            }
        }
        let pos = self.basis.iter().position(|&r| r < v).unwrap_or(self.basis.len());
        self.basis.insert(pos, v);
        true
    }

    pub fn with(&self, v: u32) -> Subspace {
        let mut s = self.clone();
        s.insert(v);
        s
    }

    pub fn is_canonical(&self) -> bool {
        let pivots = self.pivot_mask();
        self.basis.windows(2).all(|w| leading_bit(w[0]) > leading_bit(w[1]))
            && self.basis.iter().all(|&r| r != 0 && (r & pivots) == (1 << leading_bit(r)))
    }

    /// All `2^dim` elements, in Gray-code order starting from zero.
    pub fn elements(&self) -> Vec<u32> {
        let d = self.basis.len();
        let mut out = Vec::with_capacity(1 << d);
        let mut cur = 0u32;
        out.push(cur);
        for i in 1u32..(1 << d) {
            cur ^= self.basis[i.trailing_zeros() as usize];
            out.push(cur);
        }
        out
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.basis.iter().all(|&r| other.contains(r))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut s = self.clone();
        for &r in &other.basis {
            s.insert(r);
        }
        s
    }

    /// `U^perp` with respect to the standard dot product.
    pub fn orthogonal(&self) -> Subspace {
        let pivots = self.pivot_mask();
        let mut out = Subspace::zero(self.n);
        for c in 0..self.n {
            let bit = 1u32 << c;
            if pivots & bit != 0 {
                continue;
            }
            let mut w = bit;
            for &r in &self.basis {
                if r & bit != 0 {
                    w |= 1 << leading_bit(r);
                }
            }
            out.insert(w);
        }
        out
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        self.orthogonal().sum(&other.orthogonal()).orthogonal()
    }

    /// A complement `V` with `U + V = F_2^n` and `U ∩ V = 0`: standard basis
    /// vectors are added greedily starting from the least significant bit
    /// (coordinate `x_n`), then the result is brought to Gauss-Jordan form.
    pub fn complement(&self) -> Subspace {
        let mut span = self.clone();
        let mut chosen = Subspace::zero(self.n);
        for bit in 0..self.n {
            if span.dim() == self.n {
                break;
            }
            let e = 1u32 << bit;
            if span.insert(e) {
                chosen.insert(e);
            }
        }
        chosen
    }

    /// Every `k`-dimensional subspace contained in `self`.
    pub fn subspaces_of_dim(&self, k: usize) -> Vec<Subspace> {
        let d = self.dim();
        if k > d {
            return Vec::new();
        }
        let mut out = Vec::new();
        for coords in rref_enumeration(d, k) {
            let vectors = coords.iter().map(|&c| {
                (0..d).filter(|&i| (c >> (d - 1 - i)) & 1 == 1).fold(0u32, |acc, i| acc ^ self.basis[i])
            });
            out.push(Subspace::span_unchecked(self.n, vectors));
        }
        out.sort();
        out
    }

    /// Whitespace-separated base-32 tokens, one per basis row.
    pub fn to_base32(&self) -> String {
        self.basis.iter().map(|&r| crate::catalog::format_base32(r)).collect::<Vec<_>>().join(" ")
    }
}

/// All `k`-dimensional subspaces of `F_2^d` as canonical bases (rows as `d`-bit values).
pub(crate) fn rref_enumeration(d: usize, k: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    if k > d {
        return out;
    }
    // pivot columns chosen from the most significant end
    let mut pivots = Vec::with_capacity(k);
    fn choose(d: usize, k: usize, start: usize, pivots: &mut Vec<usize>, out: &mut Vec<Vec<u32>>) {
        if pivots.len() == k {
            fill(d, pivots, out);
            return;
        }
        for c in start..d {
            if d - c < k - pivots.len() {
                break;
            }
            pivots.push(c);
            choose(d, k, c + 1, pivots, out);
            pivots.pop();
        }
    }
    fn fill(d: usize, pivots: &[usize], out: &mut Vec<Vec<u32>>) {
        // free positions of row i: non-pivot columns to the right of pivot i
        let free: Vec<Vec<usize>> = pivots
            .iter()
            .map(|&p| (p + 1..d).filter(|c| !pivots.contains(c)).collect())
            .collect();
        let total: usize = free.iter().map(|f| f.len()).sum();
        for assignment in 0u64..(1u64 << total) {
            let mut bitpos = 0;
            let rows = pivots
                .iter()
                .zip(&free)
                .map(|(&p, fr)| {
                    let mut r = 1u32 << (d - 1 - p);
                    for &c in fr {
                        if (assignment >> bitpos) & 1 == 1 {
                            r |= 1 << (d - 1 - c);
                        }
                        bitpos += 1;
                    }
                    r
                })
                .collect();
            out.push(rows);
        }
    }
    choose(d, k, 0, &mut pivots, &mut out);
    out
}

impl PartialOrd for Subspace {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic on the concatenated canonical basis.
impl Ord for Subspace {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n.cmp(&other.n).then_with(|| self.basis.cmp(&other.basis))
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(n={}, [{}])", self.n, self.to_base32())
    }
}

/// `A_U`: the rows of `GJB(U)` followed by the rows of `GJB(complement(U))`, so
/// that `z * A_U` with `z = (x, y)` runs over the coset `U + y-part` as `x` varies.
pub fn change_of_basis(u: &Subspace) -> Result<Gf2Matrix> {
    let (r, n) = (u.dim(), u.ambient_dim());
    if r == 0 || r == n {
        return Err(Error::DegenerateSplit { dim: r, n });
    }
    u.as_matrix().stack(&u.complement().as_matrix())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gjb_edge_cases() {
        assert_eq!(Subspace::gjb(5, []).unwrap().dim(), 0);
        let s = Subspace::gjb(5, [0b10110, 0b10110]).unwrap();
        assert_eq!(s.basis(), &[0b10110]);
        assert!(Subspace::gjb(3, [0b1000]).is_err());
    }

    #[test]
    fn insert_keeps_canonical_form() {
        let s = Subspace::gjb(6, [0b111000, 0b011100, 0b001110, 0b110011]).unwrap();
        assert!(s.is_canonical());
        assert_eq!(s.elements().len(), 1 << s.dim());
        let again = Subspace::gjb(6, s.basis().iter().copied()).unwrap();
        assert_eq!(again, s);
    }

    #[test]
    fn complement_of_full_space_is_zero() {
        assert_eq!(Subspace::full(7).complement().dim(), 0);
        assert_eq!(Subspace::zero(4).complement(), Subspace::full(4));
    }

    #[test]
    fn orthogonal_and_intersection() {
        let u = Subspace::gjb(6, [0b110000, 0b001100]).unwrap();
        let perp = u.orthogonal();
        assert_eq!(perp.dim(), 4);
        for &a in u.basis() {
            for &b in perp.basis() {
                assert!(!dot(a, b));
            }
        }
        let w = Subspace::gjb(6, [0b110000, 0b000011]).unwrap();
        assert_eq!(u.intersection(&w), Subspace::gjb(6, [0b110000]).unwrap());
    }

    #[test]
    fn inverse_and_identity_transform() {
        let m = Gf2Matrix::new(vec![0b110, 0b011, 0b001], 3).unwrap();
        let inv = m.invert().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), Gf2Matrix::identity(3));
        let singular = Gf2Matrix::new(vec![0b110, 0b011, 0b101], 3).unwrap();
        assert_eq!(singular.invert().unwrap_err(), Error::SingularMatrix);
        let f = BooleanFunction::from_fn(3, |x| x == 3 || x == 6).unwrap();
        assert_eq!(apply_transform(&f, &Gf2Matrix::identity(3)).unwrap(), f);
    }

    #[test]
    fn change_of_basis_for_aligned_subspace_swaps_blocks() {
        // U = span(e4, e5, e6) in F_2^6
        let u = Subspace::gjb(6, [0b000100, 0b000010, 0b000001]).unwrap();
        let a = change_of_basis(&u).unwrap();
        assert_eq!(a.rows(), &[0b000100, 0b000010, 0b000001, 0b100000, 0b010000, 0b001000]);
        assert!(change_of_basis(&Subspace::zero(6)).is_err());
        assert!(change_of_basis(&Subspace::full(6)).is_err());
    }

    #[test]
    fn subspace_counts_are_gaussian_binomials() {
        // [4 choose 2]_2 = 35, [5 choose 2]_2 = 155
        assert_eq!(rref_enumeration(4, 2).len(), 35);
        assert_eq!(rref_enumeration(5, 2).len(), 155);
        assert_eq!(Subspace::full(4).subspaces_of_dim(3).len(), 15);
    }
}
