//! Boolean functions as packed truth tables, their algebraic normal form,
//! derivatives and Walsh spectrum.

mod anf;
mod function;
mod walsh;

pub use anf::Anf;
pub use function::{BooleanFunction, MAX_VARS};
pub use walsh::WalshSpectrum;

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::gf2linalg::{kernel_of_images, Subspace};

impl Anf {
    /// The space of fast points `{a : deg(D_a f) < deg(f) - 1}`.
    ///
    /// The degree `deg(f) - 1` part of `D_a f` is `sum_i a_i * d/dx_i f_top`
    /// where `f_top` is the top-degree component, so the fast points are
    /// the kernel of a linear map and never need a truth table.
    pub fn fast_point_space(&self) -> Result<Subspace> {
        let d = self.degree().ok_or(Error::ConstantFunction)?;
        if d == 0 {
            return Err(Error::ConstantFunction);
        }
        let n = self.num_vars();
        let top = self.component(d);
        let partials: Vec<Vec<u32>> = (0..n).map(|i| top.partial(1 << (n - 1 - i)).monomials().to_vec()).collect();
        let mut index: HashMap<u32, usize> = HashMap::new();
        for m in partials.iter().flatten() {
            let next = index.len();
            index.entry(*m).or_insert(next);
        }
        let words = index.len().div_ceil(64).max(1);
        let images = partials
            .iter()
            .map(|ms| {
                let mut row = vec![0u64; words];
                for m in ms {
                    let k = index[m];
                    row[k >> 6] ^= 1 << (k & 63);
                }
                row
            })
            .collect();
        Ok(Subspace::span_unchecked(n, kernel_of_images(n, images)))
    }
}

impl BooleanFunction {
    /// Fast-point space, see [`Anf::fast_point_space`]. Constant input is rejected.
    pub fn fast_point_space(&self) -> Result<Subspace> {
        self.to_anf().fast_point_space()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_force_fast_points(f: &BooleanFunction) -> Vec<u32> {
        let d = f.degree().unwrap();
        (0..f.len() as u32)
            .filter(|&a| {
                let da = f.derivative(a).unwrap().degree();
                da.map_or(true, |e| e + 1 < d)
            })
            .collect()
    }

    #[test]
    fn fast_points_match_derivative_scan() {
        // x1x2x3 + x4x5 + x1x6, plus a quadratic sample
        let samples = [
            BooleanFunction::from_anf(&[vec![0, 1, 2], vec![3, 4], vec![0, 5]], 6).unwrap(),
            BooleanFunction::from_anf(&[vec![0, 1], vec![2, 3]], 5).unwrap(),
            BooleanFunction::from_anf(&[vec![1], vec![3]], 4).unwrap(),
        ];
        for f in &samples {
            let fp = f.fast_point_space().unwrap();
            let mut expected = brute_force_fast_points(f);
            let mut got = fp.elements();
            expected.sort_unstable();
            got.sort_unstable();
            assert_eq!(got, expected);
            assert!(fp.dim() <= f.num_vars() - f.degree().unwrap());
        }
    }

    #[test]
    fn constant_has_no_fast_point_space() {
        assert_eq!(BooleanFunction::one(3).unwrap().fast_point_space().unwrap_err(), Error::ConstantFunction);
        assert_eq!(BooleanFunction::zero(3).unwrap().fast_point_space().unwrap_err(), Error::ConstantFunction);
    }
}
