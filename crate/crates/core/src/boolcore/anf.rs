//! Algebraic normal form and the binary Möbius transform.

use std::fmt;

use super::function::{BooleanFunction, LOW_HALF};
use crate::error::{Error, Result};

/// In-place binary Möbius transform of a packed table. It is an involution,
/// mapping truth tables to ANF coefficient tables and back.
pub(crate) fn moebius_in_place(n: usize, words: &mut [u64]) {
    for (j, &m) in LOW_HALF.iter().enumerate().take(n.min(6)) {
        let s = 1 << j;
        for w in words.iter_mut() {
            *w ^= (*w & m) << s;
        }
    }
    let mut step = 1;
    while step < words.len() {
        for base in (0..words.len()).step_by(2 * step) {
            for i in base..base + step {
                words[i + step] ^= words[i];
            }
        }
        step <<= 1;
    }
}

/// Algebraic normal form: the set of monomials with coefficient one.
///
/// A monomial is a mask over the same bit layout as vectors, so variable
/// `x_i` (0-based) is bit `n - 1 - i` and `x_1` is the most significant bit.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Anf {
    n: usize,
    monomials: Vec<u32>,
    degree: Option<usize>,
}

impl Anf {
    /// Builds an ANF from monomial masks. Duplicates cancel.
    pub fn from_masks(n: usize, masks: impl IntoIterator<Item = u32>) -> Result<Self> {
        super::function::check_vars(n)?;
        let mut monomials: Vec<u32> = Vec::new();
        for m in masks {
            if (m as u64) >> n != 0 {
                return Err(Error::VectorWidth { vector: m as u64, n });
            }
            monomials.push(m);
        }
        monomials.sort_unstable();
        let mut dedup: Vec<u32> = Vec::with_capacity(monomials.len());
        for m in monomials {
            if dedup.last() == Some(&m) {
                dedup.pop();
            } else {
                dedup.push(m);
            }
        }
        Ok(Self::from_sorted(n, dedup))
    }

    fn from_sorted(n: usize, monomials: Vec<u32>) -> Self {
        let degree = monomials.iter().map(|m| m.count_ones() as usize).max();
        Self { n, monomials, degree }
    }

    /// Builds an ANF from monomials given as lists of 0-based variable indices.
    pub fn from_index_sets<S: AsRef<[usize]>>(n: usize, monomials: &[S]) -> Result<Self> {
        let mut masks = Vec::with_capacity(monomials.len());
        for mono in monomials {
            let mut mask = 0u32;
            for &i in mono.as_ref() {
                if i >= n {
                    return Err(Error::VariableIndex { index: i, n });
                }
                let bit = 1u32 << (n - 1 - i);
                if mask & bit != 0 {
                    return Err(Error::Parse(format!("variable {i} repeated in a monomial")));
                }
                mask |= bit;
            }
            masks.push(mask);
        }
        Self::from_masks(n, masks)
    }

    pub fn num_vars(&self) -> usize {
        self.n
    }

    /// Sorted monomial masks.
    pub fn monomials(&self) -> &[u32] {
        &self.monomials
    }

    /// Monomials as sorted lists of 0-based variable indices.
    pub fn index_sets(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = self.monomials.iter().map(|&m| mask_to_indices(self.n, m)).collect();
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out
    }

    /// Algebraic degree, `None` for the zero function.
    pub fn degree(&self) -> Option<usize> {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn coefficient(&self, mask: u32) -> bool {
        self.monomials.binary_search(&mask).is_ok()
    }

    /// True iff the ANF is nonempty and every monomial has degree `d`.
    pub fn is_homogeneous(&self, d: usize) -> bool {
        !self.monomials.is_empty() && self.monomials.iter().all(|m| m.count_ones() as usize == d)
    }

    /// The homogeneous component of degree `d`.
    pub fn component(&self, d: usize) -> Anf {
        let ms = self.monomials.iter().copied().filter(|m| m.count_ones() as usize == d).collect();
        Self::from_sorted(self.n, ms)
    }

    /// Evaluates the polynomial to a truth table.
    pub fn to_function(&self) -> BooleanFunction {
        let mut table = BooleanFunction::zero(self.n).expect("variable count checked at construction");
        let mut words = table.words().to_vec();
        for &m in &self.monomials {
            words[(m >> 6) as usize] ^= 1 << (m & 63);
        }
        moebius_in_place(self.n, &mut words);
        table = BooleanFunction::from_words_unchecked(self.n, words);
        table
    }

    /// Formal partial derivative with respect to the variables in `set`:
    /// monomials containing `set` with those variables removed.
    pub fn partial(&self, set: u32) -> Anf {
        let mut ms: Vec<u32> = self.monomials.iter().filter(|&&m| m & set == set).map(|&m| m & !set).collect();
        ms.sort_unstable();
        Self::from_sorted(self.n, ms)
    }
}

pub(crate) fn mask_to_indices(n: usize, mask: u32) -> Vec<usize> {
    (0..n).filter(|&i| (mask >> (n - 1 - i)) & 1 == 1).collect()
}

impl fmt::Debug for Anf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Anf(n={}, {})", self.n, self)
    }
}

/// Writes monomials as `x1x2x3 + x4`, 1-based, `0` for the zero polynomial.
impl fmt::Display for Anf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.monomials.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .index_sets()
            .iter()
            .map(|set| {
                if set.is_empty() {
                    "1".to_string()
                } else {
                    set.iter().map(|i| format!("x{}", i + 1)).collect()
                }
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl BooleanFunction {
    /// Evaluates an ANF given as monomials of 0-based variable indices.
    pub fn from_anf<S: AsRef<[usize]>>(monomials: &[S], n: usize) -> Result<Self> {
        Ok(Anf::from_index_sets(n, monomials)?.to_function())
    }

    /// Inverse Möbius transform of the truth table.
    pub fn to_anf(&self) -> Anf {
        let mut words = self.words().to_vec();
        moebius_in_place(self.num_vars(), &mut words);
        let mut ms = Vec::new();
        for (i, &w) in words.iter().enumerate() {
            let mut w = w;
            while w != 0 {
                let b = w.trailing_zeros();
                w &= w - 1;
                ms.push(((i as u32) << 6) | b);
            }
        }
        Anf::from_sorted(self.num_vars(), ms)
    }

    /// Algebraic degree, `None` for the zero function.
    pub fn degree(&self) -> Option<usize> {
        // cheap exits before the transform
        if self.constant_value() == Some(false) {
            return None;
        }
        self.to_anf().degree()
    }

    /// True iff the ANF is nonempty and all monomials have degree `d`.
    pub fn is_homogeneous(&self, d: usize) -> bool {
        self.to_anf().is_homogeneous(d)
    }
}
