//! Smith normal form of the graph incidence matrix.
//!
//! The elementary divisors of the `2^(n+1)` square graph incidence matrix
//! are those of the `(2^n + 1)`-order matrix `(M_f, j^T; j, 2)` plus
//! `2^n - 1` zeros. Bent inputs only have power-of-two divisors, so they
//! are eliminated over `Z / 2^K` with minimal-valuation pivots; other
//! inputs use exact big-integer arithmetic.

use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::Serialize;

use crate::boolcore::BooleanFunction;
use crate::error::{Error, Result};

/// Largest variable count accepted by the exact engine.
pub const EXACT_SNF_MAX_VARS: usize = 8;

/// Elementary divisors with multiplicities, zeros counted separately.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfMultiset {
    entries: Vec<(BigUint, usize)>,
    zeros: usize,
}

impl SnfMultiset {
    /// Validates that divisors increase and each divides the next.
    pub fn new(entries: Vec<(BigUint, usize)>, zeros: usize) -> Result<Self> {
        for w in entries.windows(2) {
            if w[0].0 >= w[1].0 || !(&w[1].0 % &w[0].0).is_zero() {
                return Err(Error::Internal(format!("{} does not properly divide {}", w[0].0, w[1].0)));
            }
        }
        if entries.iter().any(|(d, m)| d.is_zero() || *m == 0) {
            return Err(Error::Internal("divisors and multiplicities must be positive".into()));
        }
        Ok(Self { entries, zeros })
    }

    /// Counts a diagonal; entries must already form a divisor chain.
    pub fn from_diagonal(diagonal: impl IntoIterator<Item = BigUint>) -> Result<Self> {
        let mut values: Vec<BigUint> = diagonal.into_iter().collect();
        values.sort();
        let zeros = values.iter().take_while(|v| v.is_zero()).count();
        let mut entries: Vec<(BigUint, usize)> = Vec::new();
        for v in values.into_iter().skip(zeros) {
            match entries.last_mut() {
                Some((d, m)) if *d == v => *m += 1,
                _ => entries.push((v, 1)),
            }
        }
        Self::new(entries, zeros)
    }

    fn from_valuations(counts: &[usize], zeros: usize) -> Self {
        let entries = counts
            .iter()
            .enumerate()
            .filter(|(_, &m)| m > 0)
            .map(|(v, &m)| (BigUint::one() << v, m))
            .collect();
        Self { entries, zeros }
    }

    pub fn entries(&self) -> &[(BigUint, usize)] {
        &self.entries
    }

    pub fn zeros(&self) -> usize {
        self.zeros
    }

    /// Number of diagonal entries, zeros included.
    pub fn order(&self) -> usize {
        self.entries.iter().map(|(_, m)| m).sum::<usize>() + self.zeros
    }

    /// Multiplicity of the divisor `d` (zero if absent).
    pub fn multiplicity(&self, d: u64) -> usize {
        let d = BigUint::from(d);
        self.entries.iter().find(|(e, _)| *e == d).map_or(0, |(_, m)| *m)
    }

    /// Multiplicities in increasing divisor order, zeros excluded.
    pub fn multiplicities(&self) -> Vec<usize> {
        self.entries.iter().map(|(_, m)| *m).collect()
    }

    /// Multiplicities of `1, 2, 4, ..., 2^(k-1)`.
    pub fn power_of_two_prefix(&self, k: usize) -> Vec<usize> {
        (0..k).map(|i| self.multiplicity(1u64 << i)).collect()
    }

    pub fn all_powers_of_two(&self) -> bool {
        self.entries.iter().all(|(d, _)| d.count_ones() == 1)
    }

    /// Appends `count` zero divisors.
    pub fn with_zeros(mut self, count: usize) -> Self {
        self.zeros += count;
        self
    }

    /// `d^m` terms for the first `k` divisors, e.g. `1^20, 2^86`.
    pub fn format_prefix(&self, k: usize) -> String {
        self.entries.iter().take(k).map(|(d, m)| format!("{d}^{m}")).collect::<Vec<_>>().join(", ")
    }
}

impl fmt::Display for SnfMultiset {
    /// `1^20, 2^86, ..., 0^1023`: increasing divisors, zeros last.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<String> = self.entries.iter().map(|(d, m)| format!("{d}^{m}")).collect();
        if self.zeros > 0 {
            terms.push(format!("0^{}", self.zeros));
        }
        write!(f, "{}", terms.join(", "))
    }
}

impl Serialize for SnfMultiset {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Term {
            divisor: String,
            multiplicity: usize,
        }
        let terms: Vec<Term> =
            self.entries.iter().map(|(d, m)| Term { divisor: d.to_string(), multiplicity: *m }).collect();
        let mut st = s.serialize_struct("SnfMultiset", 3)?;
        st.serialize_field("divisors", &terms)?;
        st.serialize_field("zeros", &self.zeros)?;
        st.serialize_field("text", &self.to_string())?;
        st.end()
    }
}

/// Fixed-width unsigned words used as `Z / 2^BITS`.
pub trait Word: Copy + Eq + Send + Sync + 'static {
    const BITS: u32;
    const ZERO: Self;
    fn from_u64(v: u64) -> Self;
    fn wrapping_mul(self, rhs: Self) -> Self;
    fn wrapping_sub(self, rhs: Self) -> Self;
    fn shr(self, v: u32) -> Self;
    fn or(self, rhs: Self) -> Self;
    fn trailing_zeros(self) -> u32;
    fn bit(self, v: u32) -> bool;
    /// Inverse of an odd word.
    fn inverse(self) -> Self {
        let two = Self::from_u64(2);
        let mut inv = self;
        for _ in 0..6 {
            inv = inv.wrapping_mul(two.wrapping_sub(self.wrapping_mul(inv)));
        }
        inv
    }
}

macro_rules! impl_word {
    ($t:ty) => {
        impl Word for $t {
            const BITS: u32 = <$t>::BITS;
            const ZERO: Self = 0;
            #[inline]
            fn from_u64(v: u64) -> Self {
                v as $t
            }
            #[inline]
            fn wrapping_mul(self, rhs: Self) -> Self {
                <$t>::wrapping_mul(self, rhs)
            }
            #[inline]
            fn wrapping_sub(self, rhs: Self) -> Self {
                <$t>::wrapping_sub(self, rhs)
            }
            #[inline]
            fn shr(self, v: u32) -> Self {
                self >> v
            }
            #[inline]
            fn or(self, rhs: Self) -> Self {
                self | rhs
            }
            #[inline]
            fn trailing_zeros(self) -> u32 {
                <$t>::trailing_zeros(self)
            }
            #[inline]
            fn bit(self, v: u32) -> bool {
                (self >> v) & 1 == 1
            }
        }
    };
}

impl_word!(u16);
impl_word!(u32);
impl_word!(u64);

/// The `(2^n + 1)`-order matrix `(M_f, j^T; j, 2)` as `0/1/2` entries.
fn reduced_matrix_entries(f: &BooleanFunction) -> (usize, impl Fn(usize, usize) -> u64 + '_) {
    let len = f.len();
    let order = len + 1;
    let entry = move |i: usize, j: usize| -> u64 {
        match (i == len, j == len) {
            (true, true) => 2,
            (true, false) | (false, true) => 1,
            (false, false) => f.get((i ^ j) as u32) as u64,
        }
    };
    (order, entry)
}

/// Dense square workspace for the 2-adic elimination.
struct TwoAdicEliminator<W: Word> {
    order: usize,
    m: Vec<W>,
    k: usize,
    level: u32,
    counts: Vec<usize>,
    flags: Vec<bool>,
}

impl<W: Word> TwoAdicEliminator<W> {
    fn new(order: usize, entry: impl Fn(usize, usize) -> u64) -> Self {
        let mut m = Vec::with_capacity(order * order);
        for i in 0..order {
            for j in 0..order {
                m.push(W::from_u64(entry(i, j)));
            }
        }
        let mut s = Self { order, m, k: 0, level: 0, counts: vec![0; W::BITS as usize], flags: vec![false; order] };
        s.refresh_flags();
        s
    }

    fn refresh_flags(&mut self) {
        let (n, k, v) = (self.order, self.k, self.level);
        for i in k..n {
            let acc = self.m[i * n + k..(i + 1) * n].iter().fold(W::ZERO, |a, &x| a.or(x));
            self.flags[i] = acc.bit(v);
        }
    }

    fn find_pivot(&mut self) -> Option<(usize, usize)> {
        let (n, k, v) = (self.order, self.k, self.level);
        for i in k..n {
            if !self.flags[i] {
                continue;
            }
            if let Some(j) = self.m[i * n + k..(i + 1) * n].iter().position(|x| x.bit(v)) {
                return Some((i, j + k));
            }
            self.flags[i] = false;
        }
        None
    }

    fn swap_into_place(&mut self, i: usize, j: usize) {
        let (n, k) = (self.order, self.k);
        if i != k {
            for c in 0..n {
                self.m.swap(i * n + c, k * n + c);
            }
            self.flags.swap(i, k);
        }
        if j != k {
            for r in k..n {
                self.m.swap(r * n + j, r * n + k);
            }
        }
    }

    fn eliminate(&mut self) {
        let (n, k, v) = (self.order, self.k, self.level);
        let (head, tail) = self.m.split_at_mut((k + 1) * n);
        let pivot_row = &mut head[k * n..];
        let unit = pivot_row[k].shr(v);
        let inv = unit.inverse();
        for x in pivot_row[k..].iter_mut() {
            *x = x.wrapping_mul(inv);
        }
        let pivot = &pivot_row[k + 1..];
        for (r, row) in tail.chunks_exact_mut(n).enumerate() {
            let a = row[k];
            if a == W::ZERO {
                continue;
            }
            let q = a.shr(v);
            let mut acc = W::ZERO;
            for (x, &p) in row[k + 1..].iter_mut().zip(pivot) {
                *x = x.wrapping_sub(q.wrapping_mul(p));
                acc = acc.or(*x);
            }
            row[k] = W::ZERO;
            self.flags[k + 1 + r] = acc.bit(v);
        }
    }

    /// Runs to completion, or until `stop` returns true after a finished
    /// valuation level. Returns whether it ran to completion.
    fn run(&mut self, stop: &mut dyn FnMut(u32, &[usize]) -> bool) -> Result<bool> {
        while self.k < self.order {
            match self.find_pivot() {
                Some((i, j)) => {
                    self.swap_into_place(i, j);
                    self.eliminate();
                    self.counts[self.level as usize] += 1;
                    self.k += 1;
                }
                None => {
                    if stop(self.level, &self.counts[..=self.level as usize]) {
                        return Ok(false);
                    }
                    self.level += 1;
                    if self.level >= W::BITS {
                        return Err(Error::Internal(format!(
                            "{} rows left with valuation at least {}",
                            self.order - self.k,
                            W::BITS
                        )));
                    }
                    self.refresh_flags();
                }
            }
        }
        Ok(true)
    }
}

fn run_two_adic<W: Word>(f: &BooleanFunction, stop: &mut dyn FnMut(u32, &[usize]) -> bool) -> Result<Option<Vec<usize>>> {
    let (order, entry) = reduced_matrix_entries(f);
    let mut elim = TwoAdicEliminator::<W>::new(order, entry);
    let complete = elim.run(stop)?;
    let mut counts = elim.counts;
    while counts.last() == Some(&0) {
        counts.pop();
    }
    Ok(complete.then_some(counts))
}

/// Multiplicities of `2^0, 2^1, ...` in the reduced matrix over the 2-adic
/// integers. `stop(level, counts)` is consulted each time a valuation level
/// is exhausted; returning true aborts and yields `None`.
pub fn two_adic_valuation_counts(
    f: &BooleanFunction,
    stop: &mut dyn FnMut(u32, &[usize]) -> bool,
) -> Result<Option<Vec<usize>>> {
    let n = f.num_vars();
    if n + 2 <= 16 {
        run_two_adic::<u16>(f, stop)
    } else if n + 2 <= 32 {
        run_two_adic::<u32>(f, stop)
    } else {
        run_two_adic::<u64>(f, stop)
    }
}

/// Power-of-two part of the Smith normal form. Equals the full form for
/// bent functions, whose divisors are all powers of two.
pub fn snf_two_adic(f: &BooleanFunction) -> Result<SnfMultiset> {
    let counts = two_adic_valuation_counts(f, &mut |_, _| false)?.expect("never stopped");
    Ok(SnfMultiset::from_valuations(&counts, 0).with_zeros(f.len() - 1))
}

/// Exact Smith normal form for small inputs.
pub fn snf_exact(f: &BooleanFunction) -> Result<SnfMultiset> {
    let n = f.num_vars();
    if n > EXACT_SNF_MAX_VARS {
        return Err(Error::Dimension(format!("exact Smith normal form is limited to {EXACT_SNF_MAX_VARS} variables")));
    }
    let (order, entry) = reduced_matrix_entries(f);
    let rows: Vec<Vec<i64>> = (0..order).map(|i| (0..order).map(|j| entry(i, j) as i64).collect()).collect();
    Ok(SnfMultiset::from_diagonal(smith_diagonal(&rows))?.with_zeros(f.len() - 1))
}

/// Smith normal form of the graph incidence matrix: the 2-adic engine for
/// bent inputs, exact arithmetic otherwise.
pub fn snf(f: &BooleanFunction) -> Result<SnfMultiset> {
    if f.is_bent() {
        snf_two_adic(f)
    } else {
        snf_exact(f)
    }
}

/// Diagonal of the Smith normal form of an integer matrix (absolute values,
/// zeros included), by exact elimination.
pub fn smith_diagonal(matrix: &[Vec<i64>]) -> Vec<BigUint> {
    let rows = matrix.len();
    let cols = matrix.first().map_or(0, |r| r.len());
    let mut a: Vec<Vec<BigInt>> = matrix.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut diag = Vec::with_capacity(rows.min(cols));
    for t in 0..rows.min(cols) {
        loop {
            let Some((pi, pj)) = min_abs_entry(&a, t) else {
                diag.extend(std::iter::repeat(BigUint::zero()).take(rows.min(cols) - t));
                return diag;
            };
            a.swap(t, pi);
            for r in a.iter_mut() {
                r.swap(t, pj);
            }
            let mut clean = true;
            for i in t + 1..rows {
                if !a[i][t].is_zero() {
                    let q = a[i][t].div_floor(&a[t][t]);
                    let (top, bottom) = a.split_at_mut(i);
                    for (x, p) in bottom[0][t..].iter_mut().zip(&top[t][t..]) {
                        *x -= &q * p;
                    }
                    clean &= a[i][t].is_zero();
                }
            }
            for j in t + 1..cols {
                if !a[t][j].is_zero() {
                    let q = a[t][j].div_floor(&a[t][t]);
                    for r in a[t..].iter_mut() {
                        let p = r[t].clone();
                        r[j] -= &q * p;
                    }
                    clean &= a[t][j].is_zero();
                }
            }
            if !clean {
                continue;
            }
            let pivot = a[t][t].clone();
            let bad = (t + 1..rows).find(|&i| a[i][t + 1..].iter().any(|x| !(x % &pivot).is_zero()));
            match bad {
                Some(i) => {
                    let (top, bottom) = a.split_at_mut(i);
                    for (x, y) in top[t][t..].iter_mut().zip(&bottom[0][t..]) {
                        *x += y;
                    }
                }
                None => break,
            }
        }
        diag.push(a[t][t].magnitude().clone());
    }
    diag
}

fn min_abs_entry(a: &[Vec<BigInt>], t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, &BigInt)> = None;
    for (i, row) in a.iter().enumerate().skip(t) {
        for (j, x) in row.iter().enumerate().skip(t) {
            if x.sign() == Sign::NoSign {
                continue;
            }
            if best.map_or(true, |(_, _, b)| x.abs() < b.abs()) {
                best = Some((i, j, x));
                if x.abs().is_one() {
                    return Some((i, j));
                }
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

/// Clause-by-clause check of the conjectured symmetry of the multiplicities.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SymmetryReport {
    pub clauses: Vec<SymmetryClause>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SymmetryClause {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl SymmetryReport {
    pub fn all_passed(&self) -> bool {
        self.clauses.iter().all(|c| c.passed)
    }

    pub fn clause(&self, name: &str) -> Option<&SymmetryClause> {
        self.clauses.iter().find(|c| c.name == name)
    }
}

/// Checks the multiplicities `m_i` of `2^(i-1)` for: divisors exactly
/// `1, ..., 2^(n-1)`; `m_n = 1`; `m_(n-1) = m_1 - 2`; and
/// `m_(n/2 - i) = m_(n/2 + i)` for `1 <= i <= n/2 - 2`. Reports only.
pub fn check_snf_symmetry(s: &SnfMultiset, n: usize) -> SymmetryReport {
    let m = |i: usize| -> usize { if i == 0 { 0 } else { s.multiplicity(1u64 << (i - 1)) } };
    let mut clauses = Vec::new();
    let expected: Vec<BigUint> = (0..n).map(|i| BigUint::one() << i).collect();
    let actual: Vec<BigUint> = s.entries().iter().map(|(d, _)| d.clone()).collect();
    clauses.push(SymmetryClause {
        name: "divisors".into(),
        passed: actual == expected,
        detail: format!(
            "nonzero divisors {}",
            actual.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(" ")
        ),
    });
    if n >= 1 {
        clauses.push(SymmetryClause {
            name: "top multiplicity".into(),
            passed: m(n) == 1,
            detail: format!("m_{n} = {}", m(n)),
        });
    }
    if n >= 2 {
        let (a, b) = (m(n - 1), m(1));
        clauses.push(SymmetryClause {
            name: "second multiplicity".into(),
            passed: b >= 2 && a == b - 2,
            detail: format!("m_{} = {a}, m_1 = {b}", n - 1),
        });
    }
    let half = n / 2;
    let mut mirror_ok = true;
    let mut detail = Vec::new();
    for i in 1..half.saturating_sub(1) {
        let (lo, hi) = (m(half - i), m(half + i));
        mirror_ok &= lo == hi;
        detail.push(format!("m_{}={lo}/m_{}={hi}", half - i, half + i));
    }
    clauses.push(SymmetryClause { name: "mirror".into(), passed: mirror_ok, detail: detail.join(" ") });
    SymmetryReport { clauses }
}

/// Converts small divisors for reporting; `None` when a divisor exceeds `u64`.
pub fn divisors_as_u64(s: &SnfMultiset) -> Option<Vec<(u64, usize)>> {
    s.entries().iter().map(|(d, m)| d.to_u64().map(|d| (d, *m))).collect()
}
