//! Incidence-structure invariants: 2-rank, Γ-rank, Smith normal form, the
//! all-one decomposition of the incidence code and the divisor symmetry check.

mod rank;
mod snf;

pub use rank::{
    gamma_rank, gamma_rank_from_anf, two_rank, two_rank_from_anf, two_rank_streaming, DevelopmentKind,
    DevelopmentView,
};
pub use snf::{
    check_snf_symmetry, divisors_as_u64, smith_diagonal, snf, snf_exact, snf_two_adic, two_adic_valuation_counts,
    SnfMultiset, SymmetryClause, SymmetryReport, Word, EXACT_SNF_MAX_VARS,
};

use crate::boolcore::BooleanFunction;
use crate::error::{Error, Result};
use crate::gf2linalg::Subspace;

/// Witness that the all-one vector is a sum of rows of `M_f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AllOneDecomposition {
    /// Independent slow-point directions `a_1, ..., a_d`.
    pub directions: Vec<u32>,
    /// The `2^d` translates `y` with `sum_y f(x + y) = 1` for all `x`.
    pub translates: Vec<u32>,
}

/// Picks, greedily in index order, a slow point of `f`, then of `D_{a_1} f`,
/// and so on until the derivative is the constant one. The translates are
/// the span of the directions.
pub fn all_one_decomposition(f: &BooleanFunction) -> Result<AllOneDecomposition> {
    let n = f.num_vars();
    let d = f.degree().ok_or(Error::ConstantFunction)?;
    if d == 0 {
        return Err(Error::ConstantFunction);
    }
    let mut g = f.clone();
    let mut directions = Vec::with_capacity(d);
    for _ in 0..d {
        let fast = match g.degree() {
            Some(e) if e >= 1 => g.fast_point_space()?,
            _ => return Err(Error::Internal("derivative chain lost degree".into())),
        };
        let a = (1..g.len() as u32)
            .find(|&a| !fast.contains(a))
            .ok_or_else(|| Error::Internal("no slow point found".into()))?;
        g = g.derivative(a)?;
        directions.push(a);
    }
    let span = Subspace::gjb(n, directions.iter().copied())?;
    if span.dim() != d || g.constant_value() != Some(true) {
        return Err(Error::Internal("top derivative is not the constant one".into()));
    }
    let mut translates = span.elements();
    translates.sort_unstable();
    let sum = translates.iter().fold(BooleanFunction::zero(n)?, |acc, &y| &acc ^ &f.translate(y));
    if sum.constant_value() != Some(true) {
        return Err(Error::Internal("translates do not sum to the all-one vector".into()));
    }
    Ok(AllOneDecomposition { directions, translates })
}
