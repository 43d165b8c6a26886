//! Maiorana-McFarland builders, direct-sum concatenations, homogeneity
//! preserving modifications of a Maiorana-McFarland representation, and
//! certificates that a function lies outside the completed class.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::boolcore::{Anf, BooleanFunction};
use crate::catalog::{format_anf, Catalog};
use crate::error::{Error, Result};
use crate::gf2linalg::{apply_transform, Gf2Matrix, Subspace};
use crate::invariants::{gamma_rank, two_adic_valuation_counts};
use crate::subspaces::{
    check_subspace, mm_representation, relaxed_linearity_index, DerivativeOracle, Enumerator, MmRepresentation,
};

/// Largest variable count for which concatenations are materialized as truth tables.
pub const MAX_TABLE_VARS: usize = 24;

/// Rule name: `rind(f) < n/2` and `rind(g) <= m/2` exclude `f + k g` from the completed class.
pub const RULE_RIND_BOUND: &str = "relaxed-index bound";
/// Rule name: no half-dimensional subspace of a product of relaxed M-subspaces is an M-subspace.
pub const RULE_PRODUCTS: &str = "product-subspace check";

/// `<x, pi(y)> + phi(y)` on `2m` variables with `x` the first `m` coordinates.
pub fn mm_bent(pi: &[u32], phi: &BooleanFunction) -> Result<BooleanFunction> {
    let m = phi.num_vars();
    if 2 * m > crate::boolcore::MAX_VARS {
        return Err(Error::VariableCount(2 * m));
    }
    if pi.len() != 1 << m {
        return Err(Error::Dimension(format!("permutation table must have {} entries", 1u64 << m)));
    }
    let mut seen = vec![false; pi.len()];
    for &p in pi {
        if (p as usize) >= pi.len() || std::mem::replace(&mut seen[p as usize], true) {
            return Err(Error::NotPermutation);
        }
    }
    Ok(crate::subspaces::mm_function(m, pi, phi))
}

/// `Q_k = x_1 x_{k/2+1} + ... + x_{k/2} x_k`.
pub fn quadratic_bent(k: usize) -> Result<BooleanFunction> {
    if k % 2 != 0 {
        return Err(Error::OddVariableCount(k));
    }
    if k == 0 {
        return Err(Error::VariableCount(0));
    }
    let m = k / 2;
    let pi: Vec<u32> = (0..1u32 << m).collect();
    mm_bent(&pi, &BooleanFunction::zero(m)?)
}

/// Multiplicities of the four components of `h = i R + j A + k B + l C`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConcatRecipe {
    pub counts: [usize; 4],
    /// Catalog names filling the four component slots.
    pub components: [String; 4],
}

impl ConcatRecipe {
    /// Components `R3, h8_1, h10_4, h12_5`.
    pub fn standard(i: usize, j: usize, k: usize, l: usize) -> Self {
        Self { counts: [i, j, k, l], components: ["R3", "h8_1", "h10_4", "h12_5"].map(String::from) }
    }

    pub fn num_vars(&self) -> usize {
        6 * self.counts[0] + 8 * self.counts[1] + 10 * self.counts[2] + 12 * self.counts[3]
    }
}

/// A direct sum held blockwise; tables are built only on request.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Concatenation {
    pub recipe: ConcatRecipe,
    /// Component name and ANF, in variable order.
    pub blocks: Vec<(String, Anf)>,
}

impl Concatenation {
    pub fn num_vars(&self) -> usize {
        self.blocks.iter().map(|(_, a)| a.num_vars()).sum()
    }

    /// Monomials as 0-based variable index sets over all blocks.
    pub fn monomials(&self) -> Vec<Vec<usize>> {
        let mut offset = 0;
        let mut out = Vec::new();
        for (_, anf) in &self.blocks {
            out.extend(anf.index_sets().into_iter().map(|s| s.into_iter().map(|i| i + offset).collect()));
            offset += anf.num_vars();
        }
        out
    }

    /// The ANF as `x1x2x3 + ...` with 1-based variables.
    pub fn anf_text(&self) -> String {
        if self.num_vars() <= crate::boolcore::MAX_VARS {
            if let Ok(anf) = Anf::from_index_sets(self.num_vars(), &self.monomials()) {
                return anf.to_string();
            }
        }
        self.monomials()
            .iter()
            .map(|m| m.iter().map(|i| format!("x{}", i + 1)).collect::<String>())
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// Truth table, for at most [`MAX_TABLE_VARS`] variables.
    pub fn to_function(&self) -> Result<BooleanFunction> {
        let n = self.num_vars();
        if n > MAX_TABLE_VARS {
            return Err(Error::VariableCount(n));
        }
        let mut blocks = self.blocks.iter();
        let Some((_, first)) = blocks.next() else { return BooleanFunction::zero(0) };
        blocks.try_fold(first.to_function(), |acc, (_, anf)| acc.direct_sum(&anf.to_function()))
    }

    /// `i*A + j*B + ...` over the non-empty slots.
    pub fn recipe_text(&self) -> String {
        let r = &self.recipe;
        r.counts
            .iter()
            .zip(&r.components)
            .filter(|(c, _)| **c > 0)
            .map(|(c, name)| format!("{c}*{name}"))
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// Cubic iff some block is cubic and none has higher degree.
    pub fn degree(&self) -> Option<usize> {
        self.blocks.iter().filter_map(|(_, a)| a.degree()).max()
    }

    /// Homogeneous of the common degree iff every block is.
    pub fn is_homogeneous(&self) -> bool {
        match self.degree() {
            Some(d) => self.blocks.iter().all(|(_, a)| a.is_homogeneous(d)),
            None => true,
        }
    }
}

/// Assembles `counts[0]` copies of the first component followed by the others.
pub fn build_concat(catalog: &Catalog, recipe: &ConcatRecipe) -> Result<Concatenation> {
    let mut blocks = Vec::new();
    for (count, name) in recipe.counts.iter().zip(&recipe.components) {
        if *count == 0 {
            continue;
        }
        let f = catalog.function(name)?;
        let anf = f.to_anf();
        for _ in 0..*count {
            blocks.push((name.clone(), anf.clone()));
        }
    }
    Ok(Concatenation { recipe: recipe.clone(), blocks })
}

/// Whether a value was computed here or taken from published data.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Computed,
    Published,
    Bound,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Measurement {
    pub name: String,
    pub value: String,
    pub provenance: Provenance,
}

impl Measurement {
    pub fn new(name: impl Into<String>, value: impl ToString, provenance: Provenance) -> Self {
        Self { name: name.into(), value: value.to_string(), provenance }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    OutsideCompletedClass,
    InsideCompletedClass,
    Inconclusive,
}

/// Structured outcome of a membership argument.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub construction: String,
    pub rule: String,
    pub measurements: Vec<Measurement>,
    pub verdict: Verdict,
    /// A witness M-subspace when the verdict is inside.
    pub witness: Option<String>,
}

/// Relaxed index of one summand, with its origin.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndexedSummand {
    pub label: String,
    pub num_vars: usize,
    pub rind: usize,
    pub provenance: Provenance,
}

impl IndexedSummand {
    /// Computes the relaxed index of a bent function.
    pub fn measure(label: impl Into<String>, f: &BooleanFunction) -> Result<Self> {
        if !f.is_bent() {
            return Err(Error::Dimension(format!("{} is not bent", label.into())));
        }
        Ok(Self { label: label.into(), num_vars: f.num_vars(), rind: relaxed_linearity_index(f), provenance: Provenance::Computed })
    }

    /// Uses a published relaxed index.
    pub fn published(label: impl Into<String>, num_vars: usize, rind: usize) -> Self {
        Self { label: label.into(), num_vars, rind, provenance: Provenance::Published }
    }
}

/// `f + k g` lies outside the completed class for every `k >= 1` when
/// `rind(f) < n/2` and `rind(g) <= m/2`; inconclusive otherwise.
pub fn certify_outside_mm(f: &IndexedSummand, g: &IndexedSummand) -> Certificate {
    let strong = 2 * f.rind < f.num_vars;
    let weak = 2 * g.rind <= g.num_vars;
    Certificate {
        construction: format!("{} + k*{} (k >= 1)", f.label, g.label),
        rule: RULE_RIND_BOUND.into(),
        measurements: vec![
            Measurement::new(format!("rind({})", f.label), f.rind, f.provenance),
            Measurement::new(format!("n({})", f.label), f.num_vars, Provenance::Computed),
            Measurement::new(format!("rind({})", g.label), g.rind, g.provenance),
            Measurement::new(format!("n({})", g.label), g.num_vars, Provenance::Computed),
            Measurement::new(format!("rind({} + k*{}) upper bound", f.label, g.label), "rind(f) + k*rind(g)", Provenance::Bound),
        ],
        verdict: if strong && weak { Verdict::OutsideCompletedClass } else { Verdict::Inconclusive },
        witness: None,
    }
}

/// Bounds `rind(h) <= sum rind(component)`; the sum staying below `n/2`
/// excludes every half-dimensional M-subspace. Component indices are computed.
pub fn certify_concat(concat: &Concatenation) -> Result<Certificate> {
    let mut measurements = Vec::new();
    let mut total = 0;
    let mut cache: Vec<(String, usize)> = Vec::new();
    for (name, anf) in &concat.blocks {
        let rind = match cache.iter().find(|(n, _)| n == name) {
            Some(&(_, r)) => r,
            None => {
                let r = relaxed_linearity_index(&anf.to_function());
                cache.push((name.clone(), r));
                measurements.push(Measurement::new(format!("rind({name})"), r, Provenance::Computed));
                r
            }
        };
        total += rind;
    }
    let n = concat.num_vars();
    measurements.push(Measurement::new("rind upper bound (sum over blocks)", total, Provenance::Bound));
    measurements.push(Measurement::new("n/2", n / 2, Provenance::Computed));
    let outside = n % 2 == 0 && 2 * total < n;
    Ok(Certificate {
        construction: concat.recipe_text(),
        rule: RULE_RIND_BOUND.into(),
        measurements,
        verdict: if outside { Verdict::OutsideCompletedClass } else { Verdict::Inconclusive },
        witness: None,
    })
}

/// `V x W` inside `F_2^(n+m)` with `V` on the first `n` coordinates.
fn product_subspace(v: &Subspace, w: &Subspace) -> Subspace {
    let m = w.ambient_dim();
    let n = v.ambient_dim() + m;
    Subspace::gjb(n, v.basis().iter().map(|&b| b << m).chain(w.basis().iter().copied()))
        .expect("blocks fit the ambient space")
}

/// Decides `h = f + g` against the completed class by testing every
/// `n/2`-dimensional subspace of every product of inclusion-maximal relaxed
/// M-subspaces. `budget` caps the number of subspace tests.
pub fn certify_outside_mm_by_products(
    h: &BooleanFunction,
    f: &BooleanFunction,
    g: &BooleanFunction,
    budget: Option<u64>,
) -> Result<Certificate> {
    if f.direct_sum(g)? != *h {
        return Err(Error::Dimension("h is not the direct sum of f and g".into()));
    }
    let n = h.num_vars();
    if n % 2 != 0 {
        return Err(Error::OddVariableCount(n));
    }
    let target = n / 2;
    let maximal_f = Enumerator::new(f, true).with_budget(budget).maximal()?;
    let maximal_g = Enumerator::new(g, true).with_budget(budget).maximal()?;
    let products: BTreeSet<Subspace> = maximal_f
        .iter()
        .flat_map(|v| maximal_g.iter().map(move |w| product_subspace(v, w)))
        .filter(|p| p.dim() >= target)
        .collect();
    let oracle = DerivativeOracle::new(h, false);
    let mut tested: u64 = 0;
    let mut witness = None;
    for p in &products {
        let candidates = p.subspaces_of_dim(target);
        tested += candidates.len() as u64;
        if budget.is_some_and(|b| tested > b) {
            return Err(Error::BudgetExceeded { budget: budget.unwrap_or_default() });
        }
        if let Some(u) = candidates.into_par_iter().find_first(|u| check_subspace(&oracle, u).is_ok()) {
            witness = Some(u.to_base32());
            break;
        }
    }
    let verdict = if witness.is_some() { Verdict::InsideCompletedClass } else { Verdict::OutsideCompletedClass };
    Ok(Certificate {
        construction: format!("direct sum on {} + {} variables", f.num_vars(), g.num_vars()),
        rule: RULE_PRODUCTS.into(),
        measurements: vec![
            Measurement::new("maximal RMS of first summand", maximal_f.len(), Provenance::Computed),
            Measurement::new("maximal RMS of second summand", maximal_g.len(), Provenance::Computed),
            Measurement::new(format!("products of dimension >= {target}"), products.len(), Provenance::Computed),
            Measurement::new(format!("{target}-dimensional subspaces tested"), tested, Provenance::Computed),
        ],
        verdict,
        witness,
    })
}

/// Product of linear forms (masks over `n` variables) as a set of monomials.
fn expand_product(forms: &[u32]) -> BTreeSet<u32> {
    let mut poly = BTreeSet::from([0u32]);
    for &form in forms {
        let mut next = BTreeSet::new();
        for &m in &poly {
            let mut bits = form;
            while bits != 0 {
                let b = bits & bits.wrapping_neg();
                bits ^= b;
                let t = m | b;
                if !next.insert(t) {
                    next.remove(&t);
                }
            }
        }
        poly = next;
    }
    poly
}

/// Homogeneity-preserving modifications `phi -> phi + omega` of a
/// Maiorana-McFarland representation.
#[derive(Clone, Debug)]
pub struct OmegaSet {
    pub base: MmRepresentation,
    /// `T`, the inverse of the representation's change of basis.
    pub transform_inverse: Gf2Matrix,
    /// Degree-`d` monomials on the `s` inner variables (bit `s-1-j` is `y_{j+1}`)
    /// whose composition with the image of `y` is `d`-homogeneous or zero.
    pub basis_monomials: Vec<u32>,
    pub degree: usize,
}

/// Linear forms `y'_j(z)`, the last `s` coordinates of `z T`.
pub fn y_image(base: &MmRepresentation, transform_inverse: &Gf2Matrix) -> Vec<u32> {
    transform_inverse.column_forms(base.r, base.s)
}

/// ANF of `omega(y'(z))` for an `s`-variable ANF `omega`.
pub fn compose_with_forms(omega: &Anf, forms: &[u32], n: usize) -> Result<Anf> {
    let s = forms.len();
    let mut acc = BTreeSet::new();
    for &m in omega.monomials() {
        let chosen: Vec<u32> = (0..s).filter(|j| m >> (s - 1 - j) & 1 == 1).map(|j| forms[j]).collect();
        for t in expand_product(&chosen) {
            if !acc.insert(t) {
                acc.remove(&t);
            }
        }
    }
    Anf::from_masks(n, acc)
}

/// Tests every degree-`d` monomial on the inner variables.
pub fn omega_basis(base: &MmRepresentation, d: usize) -> Result<OmegaSet> {
    let transform_inverse = base.transform.invert()?;
    let forms = y_image(base, &transform_inverse);
    let (n, s) = (base.r + base.s, base.s);
    let monomials: Vec<u32> = (0..1u32 << s).filter(|m| m.count_ones() as usize == d).collect();
    let qualifies: Vec<bool> = monomials
        .par_iter()
        .map(|&m| {
            let omega = Anf::from_masks(s, [m]).expect("monomial fits");
            compose_with_forms(&omega, &forms, n).map(|c| c.is_zero() || c.is_homogeneous(d))
        })
        .collect::<Result<_>>()?;
    let basis_monomials = monomials.into_iter().zip(qualifies).filter(|(_, q)| *q).map(|(m, _)| m).collect();
    Ok(OmegaSet { base: base.clone(), transform_inverse, basis_monomials, degree: d })
}

/// `omega_basis` for the representation of `f` relative to `u`.
pub fn omega_basis_for(f: &BooleanFunction, u: &Subspace, d: usize) -> Result<OmegaSet> {
    omega_basis(&mm_representation(f, u)?, d)
}

/// `z -> MM(pi, phi + omega)(z T)`, verified bent and `d`-homogeneous when
/// `degree` is given.
pub fn generate_from_omega(
    base: &MmRepresentation,
    omega: &BooleanFunction,
    t: &Gf2Matrix,
    degree: Option<usize>,
) -> Result<BooleanFunction> {
    if omega.num_vars() != base.s {
        return Err(Error::Dimension(format!("omega must have {} variables", base.s)));
    }
    let phi = &base.phi ^ omega;
    let g = crate::subspaces::mm_function(base.r, &base.pi, &phi);
    let out = apply_transform(&g, t)?;
    if base.pi_is_permutation() && !out.is_bent() {
        return Err(Error::Internal("generated function is not bent".into()));
    }
    if let Some(d) = degree {
        if !out.is_homogeneous(d) {
            return Err(Error::Internal(format!("generated function is not {d}-homogeneous")));
        }
    }
    Ok(out)
}

impl OmegaSet {
    pub fn dim(&self) -> usize {
        self.basis_monomials.len()
    }

    /// The element selected by the bits of `coords` over `basis_monomials`.
    pub fn element(&self, coords: u64) -> Anf {
        let masks = self.basis_monomials.iter().enumerate().filter(|(i, _)| coords >> i & 1 == 1).map(|(_, &m)| m);
        Anf::from_masks(self.base.s, masks).expect("basis monomials fit")
    }

    /// Linear forms of the image of `y`.
    pub fn y_image(&self) -> Vec<u32> {
        y_image(&self.base, &self.transform_inverse)
    }

    /// Whether `omega` composed with the image of `y` is `d`-homogeneous or zero.
    pub fn preserves_homogeneity(&self, omega: &Anf) -> Result<bool> {
        let c = compose_with_forms(omega, &self.y_image(), self.base.r + self.base.s)?;
        Ok(c.is_zero() || c.is_homogeneous(self.degree))
    }

    /// The function generated by the element with coordinates `coords`.
    pub fn generate(&self, coords: u64) -> Result<BooleanFunction> {
        let omega = self.element(coords).to_function();
        generate_from_omega(&self.base, &omega, &self.transform_inverse, Some(self.degree))
    }

    /// The modification `omega(y'(z))` added to the base function, as an ANF
    /// on all variables.
    pub fn composed(&self, coords: u64) -> Result<Anf> {
        compose_with_forms(&self.element(coords), &self.y_image(), self.base.r + self.base.s)
    }
}

/// A generated function whose Smith normal form prefix matches a target.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OmegaHit {
    pub coords: u64,
    /// The added monomials, digit notation over the inner variables.
    pub omega: String,
    pub gamma_rank: usize,
    pub prefix: Vec<usize>,
    pub evaluations: u64,
}

/// Counters of an Ω search.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct OmegaSearchStats {
    pub visited: u64,
    pub gamma_rank_passed: u64,
    pub snf_runs: u64,
}

/// Searches the span of `set` for a generated function whose multiplicities of
/// `1, 2, 4, ...` start with `target`, visiting elements in order of
/// increasing weight. Candidates are filtered by Γ-rank (the multiplicity of
/// 1) before any Smith normal form is started, and every SNF run aborts as
/// soon as a finished level disagrees with the target. `budget` caps the
/// number of visited elements.
pub fn search_omega(
    set: &OmegaSet,
    target: &[usize],
    budget: u64,
    progress: &mut dyn FnMut(&OmegaSearchStats),
) -> Result<(Option<OmegaHit>, OmegaSearchStats)> {
    let k = set.dim();
    if k >= 64 {
        return Err(Error::Dimension("Ω basis too large to index".into()));
    }
    let mut stats = OmegaSearchStats::default();
    for weight in 0..=k {
        let mut found = None;
        let mut exhausted = false;
        for_each_of_weight(k, weight, &mut |coords| {
            if stats.visited >= budget {
                exhausted = true;
                return false;
            }
            stats.visited += 1;
            if stats.visited % 256 == 0 {
                progress(&stats);
            }
            match evaluate_candidate(set, coords, target, &mut stats) {
                Ok(Some(hit)) => {
                    found = Some(Ok(hit));
                    false
                }
                Ok(None) => true,
                Err(e) => {
                    found = Some(Err(e));
                    false
                }
            }
        });
        if let Some(hit) = found {
            let mut hit = hit?;
            hit.evaluations = stats.visited;
            return Ok((Some(hit), stats));
        }
        if exhausted {
            return Err(Error::BudgetExceeded { budget });
        }
    }
    Ok((None, stats))
}

fn evaluate_candidate(set: &OmegaSet, coords: u64, target: &[usize], stats: &mut OmegaSearchStats) -> Result<Option<OmegaHit>> {
    let f = set.generate(coords)?;
    let rank = gamma_rank(&f);
    if target.first().is_some_and(|&m1| m1 != rank) {
        return Ok(None);
    }
    stats.gamma_rank_passed += 1;
    stats.snf_runs += 1;
    let mut stop = |level: u32, counts: &[usize]| {
        let level = level as usize;
        level < target.len() && counts[level] != target[level]
    };
    let Some(counts) = two_adic_valuation_counts(&f, &mut stop)? else { return Ok(None) };
    let prefix: Vec<usize> = (0..target.len()).map(|i| counts.get(i).copied().unwrap_or(0)).collect();
    if prefix != target {
        return Ok(None);
    }
    Ok(Some(OmegaHit { coords, omega: format_anf(&set.element(coords)), gamma_rank: rank, prefix, evaluations: 0 }))
}

/// Calls `visit` on every `k`-bit word of the given weight in increasing
/// order until it returns false.
fn for_each_of_weight(k: usize, weight: usize, visit: &mut dyn FnMut(u64) -> bool) {
    if weight > k {
        return;
    }
    if weight == 0 {
        visit(0);
        return;
    }
    let limit = 1u64 << k;
    let mut x = (1u64 << weight) - 1;
    while x < limit {
        if !visit(x) {
            return;
        }
        // next word with the same popcount
        let c = x & x.wrapping_neg();
        let r = x + c;
        x = (((r ^ x) >> 2) / c) | r;
    }
}
