//! M-subspaces and relaxed M-subspaces: membership tests, enumeration,
//! linearity indices and the Maiorana-McFarland representation.
//!
//! For a fixed direction `a` the set `N(a) = {b : D_{a,b} f = 0}` is the space
//! of 0-linear structures of `D_a f`, hence a subspace; the relaxed variant
//! (`D_{a,b} f` constant) is the space of all linear structures. Because
//! `D_{a,b} f` depends only on the plane `<a, b>`, a subspace `U + <v>` with
//! `U` an M-subspace is again one iff `v` lies in `C(U) = ∩_{a ∈ U\0} N(a)`.
//! Enumeration is a depth-first canonical augmentation over these sets.

use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::Serialize;

use crate::boolcore::{Anf, BooleanFunction};
use crate::error::{Error, Result};
use crate::gf2linalg::{apply_transform, change_of_basis, dot, Gf2Matrix, Subspace};

/// Largest variable count for which the per-direction spaces are cached.
const CACHE_LIMIT: usize = 16;

enum Kind {
    /// Degree at most three: `D_{a,b} f` is affine with linear part
    /// `x_k -> a^T B_k b` read off the cubic monomials.
    Cubic { tri: Vec<Vec<u32>> },
    /// Any degree: linear structures of `D_a f` from its autocorrelation.
    Generic,
}

/// Answers `D_{a,b} f = 0` (or, relaxed, `D_{a,b} f` constant) queries.
pub struct DerivativeOracle<'f> {
    f: &'f BooleanFunction,
    relaxed: bool,
    kind: Kind,
    cache: Option<Vec<OnceLock<Subspace>>>,
}

impl<'f> DerivativeOracle<'f> {
    /// Picks the cubic fast path whenever `deg(f) <= 3`.
    pub fn new(f: &'f BooleanFunction, relaxed: bool) -> Self {
        let anf = f.to_anf();
        let kind = if anf.degree().unwrap_or(0) <= 3 { Kind::Cubic { tri: trilinear(&anf) } } else { Kind::Generic };
        Self::with_kind(f, relaxed, kind)
    }

    /// Always uses the degree-independent path.
    pub fn generic(f: &'f BooleanFunction, relaxed: bool) -> Self {
        Self::with_kind(f, relaxed, Kind::Generic)
    }

    fn with_kind(f: &'f BooleanFunction, relaxed: bool, kind: Kind) -> Self {
        let n = f.num_vars();
        let cache = (n <= CACHE_LIMIT).then(|| (0..1usize << n).map(|_| OnceLock::new()).collect());
        Self { f, relaxed, kind, cache }
    }

    pub fn function(&self) -> &BooleanFunction {
        self.f
    }

    pub fn is_relaxed(&self) -> bool {
        self.relaxed
    }

    /// Orthogonal complement of `N(a)` (or its relaxed counterpart).
    pub fn annihilator_perp(&self, a: u32) -> Subspace {
        match &self.cache {
            Some(c) => c[a as usize].get_or_init(|| self.compute_perp(a)).clone(),
            None => self.compute_perp(a),
        }
    }

    fn with_perp<R>(&self, a: u32, op: impl FnOnce(&Subspace) -> R) -> R {
        match &self.cache {
            Some(c) => op(c[a as usize].get_or_init(|| self.compute_perp(a))),
            None => op(&self.compute_perp(a)),
        }
    }

    /// `{b : D_{a,b} f = 0}`, or `{b : D_{a,b} f constant}` when relaxed.
    pub fn annihilator(&self, a: u32) -> Subspace {
        self.with_perp(a, |p| p.orthogonal())
    }

    /// Whether the plane `<a, b>` passes the predicate.
    pub fn pair_passes(&self, a: u32, b: u32) -> bool {
        self.with_perp(a, |p| p.basis().iter().all(|&w| !dot(w, b)))
    }

    fn compute_perp(&self, a: u32) -> Subspace {
        let n = self.f.num_vars();
        if a == 0 {
            return Subspace::zero(n);
        }
        match &self.kind {
            Kind::Cubic { tri } => {
                let mut rows = vec![0u32; n];
                let mut bits = a;
                while bits != 0 {
                    let i = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    for (k, row) in rows.iter_mut().enumerate() {
                        *row ^= tri[k][i];
                    }
                }
                let linear = Subspace::span_unchecked(n, rows);
                if self.relaxed {
                    return linear;
                }
                // on the relaxed space the constant term c0(a, .) is linear
                let fa = self.f.get(a) ^ self.f.get(0);
                let c0 = |b: u32| self.f.get(a ^ b) ^ self.f.get(b) ^ fa;
                let relaxed_space = linear.orthogonal();
                let mut kernel = Vec::with_capacity(relaxed_space.dim());
                let mut odd: Option<u32> = None;
                for &b in relaxed_space.basis() {
                    if !c0(b) {
                        kernel.push(b);
                    } else if let Some(o) = odd {
                        kernel.push(b ^ o);
                    } else {
                        odd = Some(b);
                    }
                }
                Subspace::span_unchecked(n, kernel).orthogonal()
            }
            Kind::Generic => {
                let d = self.f.derivative(a).expect("direction fits by construction");
                let auto = autocorrelation(&d);
                let full = 1i64 << n;
                let structures =
                    (0..auto.len() as u32).filter(|&b| auto[b as usize] == full || (self.relaxed && auto[b as usize] == -full));
                Subspace::span_unchecked(n, structures).orthogonal()
            }
        }
    }
}

/// `tri[k][i]`: mask of bits `j` such that the monomial on bits `{i, j, k}` is present.
fn trilinear(anf: &Anf) -> Vec<Vec<u32>> {
    let n = anf.num_vars();
    let mut tri = vec![vec![0u32; n]; n];
    for &m in anf.monomials() {
        if m.count_ones() != 3 {
            continue;
        }
        let bits: Vec<usize> = (0..n).filter(|&b| m >> b & 1 == 1).collect();
        for (k, i, j) in [(0, 1, 2), (1, 0, 2), (2, 0, 1)] {
            let (k, i, j) = (bits[k], bits[i], bits[j]);
            tri[k][i] ^= 1 << j;
            tri[k][j] ^= 1 << i;
        }
    }
    tri
}

/// Autocorrelation `r(b) = sum_x (-1)^(g(x) + g(x + b))` via two Walsh transforms.
fn autocorrelation(g: &BooleanFunction) -> Vec<i64> {
    let mut v: Vec<i64> = g.walsh().values().iter().map(|w| w * w).collect();
    let mut h = 1;
    while h < v.len() {
        for base in (0..v.len()).step_by(2 * h) {
            for i in base..base + h {
                let (x, y) = (v[i], v[i + h]);
                v[i] = x + y;
                v[i + h] = x - y;
            }
        }
        h <<= 1;
    }
    let len = v.len() as i64;
    v.iter_mut().for_each(|x| *x /= len);
    v
}

/// Checks `U` against the oracle, naming a failing plane `<a, b>` if any.
pub fn check_subspace(oracle: &DerivativeOracle<'_>, u: &Subspace) -> Result<()> {
    if u.ambient_dim() != oracle.function().num_vars() {
        return Err(Error::Dimension("subspace and function live in different spaces".into()));
    }
    for a in u.elements().into_iter().skip(1) {
        if let Some(&b) = u.basis().iter().find(|&&b| !oracle.pair_passes(a, b)) {
            return Err(Error::NotMSubspace { a, b });
        }
    }
    Ok(())
}

/// Every second-order derivative over planes in `U` vanishes.
pub fn is_m_subspace(f: &BooleanFunction, u: &Subspace) -> bool {
    check_subspace(&DerivativeOracle::new(f, false), u).is_ok()
}

/// Every second-order derivative over planes in `U` is constant.
pub fn is_relaxed_m_subspace(f: &BooleanFunction, u: &Subspace) -> bool {
    check_subspace(&DerivativeOracle::new(f, true), u).is_ok()
}

/// Subspaces of a fixed dimension in canonical order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubspaceCollection {
    pub dim: usize,
    #[serde(serialize_with = "serialize_members")]
    pub members: Vec<Subspace>,
}

fn serialize_members<S: serde::Serializer>(members: &[Subspace], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(members.iter().map(|m| m.to_base32()))
}

impl SubspaceCollection {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Subspace> {
        self.members.iter()
    }
}

impl std::fmt::Display for SubspaceCollection {
    /// One subspace per line, basis rows as base-32 tokens.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for m in &self.members {
            writeln!(f, "{}", m.to_base32())?;
        }
        Ok(())
    }
}

struct Node {
    u: Subspace,
    /// `C(U)^perp`.
    perp: Subspace,
}

/// Depth-first enumerator over (relaxed) M-subspaces.
pub struct Enumerator<'f> {
    oracle: DerivativeOracle<'f>,
    budget: Option<u64>,
    visited: AtomicU64,
}

impl<'f> Enumerator<'f> {
    pub fn new(f: &'f BooleanFunction, relaxed: bool) -> Self {
        Self::from_oracle(DerivativeOracle::new(f, relaxed))
    }

    pub fn from_oracle(oracle: DerivativeOracle<'f>) -> Self {
        Self { oracle, budget: None, visited: AtomicU64::new(0) }
    }

    /// Caps the number of visited subspaces; exceeding it is an error.
    pub fn with_budget(mut self, budget: Option<u64>) -> Self {
        self.budget = budget;
        self
    }

    pub fn oracle(&self) -> &DerivativeOracle<'f> {
        &self.oracle
    }

    /// Subspaces visited so far.
    pub fn visited(&self) -> u64 {
        self.visited.load(Ordering::Relaxed)
    }

    fn n(&self) -> usize {
        self.oracle.function().num_vars()
    }

    fn tick(&self) -> Result<()> {
        let v = self.visited.fetch_add(1, Ordering::Relaxed) + 1;
        match self.budget {
            Some(b) if v > b => Err(Error::BudgetExceeded { budget: b }),
            _ => Ok(()),
        }
    }

    fn root(&self) -> Node {
        Node { u: Subspace::zero(self.n()), perp: Subspace::zero(self.n()) }
    }

    fn child(&self, node: &Node, v: u32) -> Node {
        let mut perp = node.perp.clone();
        for u in node.u.elements() {
            self.oracle.with_perp(v ^ u, |p| {
                for &w in p.basis() {
                    perp.insert(w);
                }
            });
        }
        Node { u: node.u.with(v), perp }
    }

    /// Rows generating the canonical extension vectors of `node`, and the
    /// subset of them that may lead an extension.
    fn extension_rows(&self, node: &Node) -> (Vec<u32>, Vec<usize>) {
        let n = self.n();
        let ext = node.perp.orthogonal();
        let q = Subspace::span_unchecked(n, ext.basis().iter().map(|&w| node.u.reduce(w)));
        let min_pivot = node.u.basis().last().map_or(n as u32, |&r| 31 - r.leading_zeros());
        let used = node.u.basis().iter().fold(0u32, |acc, &r| acc | r);
        let rows: Vec<u32> = q.basis().iter().copied().filter(|&r| 31 - r.leading_zeros() < min_pivot).collect();
        let leads = (0..rows.len()).filter(|&i| used >> (31 - rows[i].leading_zeros()) & 1 == 0).collect();
        (rows, leads)
    }

    /// Children `v` in canonical augmentation order.
    fn for_each_extension(&self, node: &Node, mut visit: impl FnMut(u32) -> Result<bool>) -> Result<()> {
        let (rows, leads) = self.extension_rows(node);
        for &i in &leads {
            let tail = &rows[i + 1..];
            for mask in 0u64..(1u64 << tail.len()) {
                let v = tail.iter().enumerate().filter(|(j, _)| mask >> j & 1 == 1).fold(rows[i], |acc, (_, &r)| acc ^ r);
                if !visit(v)? {
                    return Ok(());
                }
            }
        }
        Ok(())
    }

    fn upper_bound(&self, node: &Node) -> usize {
        node.u.dim() + self.extension_rows(node).0.len()
    }

    fn roots(&self) -> Vec<u32> {
        (1..(1u64 << self.n()) as u32).collect()
    }

    /// All subspaces of dimension `r` passing the predicate.
    pub fn enumerate(&self, r: usize) -> Result<SubspaceCollection> {
        let n = self.n();
        let members = if r > n {
            Vec::new()
        } else if r == 0 {
            vec![Subspace::zero(n)]
        } else {
            let root = self.root();
            let parts: Result<Vec<Vec<Subspace>>> = self
                .roots()
                .into_par_iter()
                .map(|v| {
                    let mut out = Vec::new();
                    self.collect(self.child(&root, v), r, &mut out)?;
                    Ok(out)
                })
                .collect();
            let mut all: Vec<Subspace> = parts?.into_iter().flatten().collect();
            all.sort();
            all
        };
        Ok(SubspaceCollection { dim: r, members })
    }

    fn collect(&self, node: Node, r: usize, out: &mut Vec<Subspace>) -> Result<()> {
        self.tick()?;
        if node.u.dim() == r {
            out.push(node.u);
            return Ok(());
        }
        if self.upper_bound(&node) < r {
            return Ok(());
        }
        self.for_each_extension(&node, |v| {
            self.collect(self.child(&node, v), r, out)?;
            Ok(true)
        })
    }

    /// Whether some subspace of dimension `r` passes; stops at the first hit.
    pub fn exists(&self, r: usize) -> Result<bool> {
        if r == 0 {
            return Ok(true);
        }
        if r > self.n() {
            return Ok(false);
        }
        let root = self.root();
        let found = std::sync::atomic::AtomicBool::new(false);
        self.roots().into_par_iter().try_for_each(|v| {
            if !found.load(Ordering::Relaxed) && self.reach(self.child(&root, v), r, &found)? {
                found.store(true, Ordering::Relaxed);
            }
            Ok::<_, Error>(())
        })?;
        Ok(found.load(Ordering::Relaxed))
    }

    fn reach(&self, node: Node, r: usize, found: &std::sync::atomic::AtomicBool) -> Result<bool> {
        self.tick()?;
        if node.u.dim() >= r {
            return Ok(true);
        }
        if found.load(Ordering::Relaxed) || self.upper_bound(&node) < r {
            return Ok(false);
        }
        let mut hit = false;
        self.for_each_extension(&node, |v| {
            hit = self.reach(self.child(&node, v), r, found)?;
            Ok(!hit)
        })?;
        Ok(hit)
    }

    /// Largest dimension of a passing subspace (branch and bound).
    pub fn max_dimension(&self) -> Result<usize> {
        let n = self.n();
        if n == 0 {
            return Ok(0);
        }
        let best = AtomicUsize::new(1);
        let root = self.root();
        self.roots().into_par_iter().try_for_each(|v| self.improve(self.child(&root, v), &best))?;
        Ok(best.load(Ordering::Relaxed))
    }

    fn improve(&self, node: Node, best: &AtomicUsize) -> Result<()> {
        self.tick()?;
        best.fetch_max(node.u.dim(), Ordering::Relaxed);
        if self.upper_bound(&node) <= best.load(Ordering::Relaxed) {
            return Ok(());
        }
        self.for_each_extension(&node, |v| {
            self.improve(self.child(&node, v), best)?;
            Ok(true)
        })
    }

    /// Inclusion-maximal passing subspaces, in canonical order.
    pub fn maximal(&self) -> Result<Vec<Subspace>> {
        let root = self.root();
        if self.n() == 0 {
            return Ok(vec![Subspace::zero(0)]);
        }
        let parts: Result<Vec<Vec<Subspace>>> = self
            .roots()
            .into_par_iter()
            .map(|v| {
                let mut out = Vec::new();
                self.collect_maximal(self.child(&root, v), &mut out)?;
                Ok(out)
            })
            .collect();
        let mut out: Vec<Subspace> = parts?.into_iter().flatten().collect();
        out.sort();
        Ok(out)
    }

    fn collect_maximal(&self, node: Node, out: &mut Vec<Subspace>) -> Result<()> {
        self.tick()?;
        let n = self.n();
        if node.perp.dim() + node.u.dim() == n {
            out.push(node.u);
            return Ok(());
        }
        self.for_each_extension(&node, |v| {
            self.collect_maximal(self.child(&node, v), out)?;
            Ok(true)
        })
    }
}

/// `MS_r(f)`: all `r`-dimensional M-subspaces.
pub fn enumerate_ms(f: &BooleanFunction, r: usize) -> SubspaceCollection {
    Enumerator::new(f, false).enumerate(r).expect("no budget set")
}

/// `RMS_r(f)`: all `r`-dimensional relaxed M-subspaces.
pub fn enumerate_rms(f: &BooleanFunction, r: usize) -> SubspaceCollection {
    Enumerator::new(f, true).enumerate(r).expect("no budget set")
}

/// Largest dimension of an M-subspace.
pub fn linearity_index(f: &BooleanFunction) -> usize {
    Enumerator::new(f, false).max_dimension().expect("no budget set")
}

/// Largest dimension of a relaxed M-subspace.
pub fn relaxed_linearity_index(f: &BooleanFunction) -> usize {
    Enumerator::new(f, true).max_dimension().expect("no budget set")
}

/// Membership in the completed Maiorana-McFarland class: an M-subspace of
/// dimension `n/2` exists.
pub fn in_completed_mm(f: &BooleanFunction) -> Result<bool> {
    let n = f.num_vars();
    if n % 2 != 0 {
        return Err(Error::OddVariableCount(n));
    }
    Enumerator::new(f, false).exists(n / 2)
}

/// `f(z A_U) = <x, pi(y)> + phi(y)` for `z = (x, y)`, `x` the first `r` coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MmRepresentation {
    pub r: usize,
    pub s: usize,
    /// `pi[y]` is an `r`-bit vector.
    pub pi: Vec<u32>,
    pub phi: BooleanFunction,
    /// `A_U`.
    pub transform: Gf2Matrix,
}

impl MmRepresentation {
    /// `<x, pi(y)> + phi(y)` on `r + s` variables, `x` the high block.
    pub fn to_function(&self) -> BooleanFunction {
        mm_function(self.r, &self.pi, &self.phi)
    }

    pub fn pi_is_permutation(&self) -> bool {
        if self.r != self.s {
            return false;
        }
        let mut seen = vec![false; self.pi.len()];
        self.pi.iter().all(|&p| !std::mem::replace(&mut seen[p as usize], true))
    }
}

pub(crate) fn mm_function(r: usize, pi: &[u32], phi: &BooleanFunction) -> BooleanFunction {
    let s = phi.num_vars();
    BooleanFunction::from_fn(r + s, |z| {
        let (x, y) = (z >> s, z & ((1u32 << s) - 1));
        dot(x, pi[y as usize]) ^ phi.get(y)
    })
    .expect("split sizes come from a valid function")
}

/// Maiorana-McFarland form of `f` relative to an M-subspace `U`.
pub fn mm_representation(f: &BooleanFunction, u: &Subspace) -> Result<MmRepresentation> {
    check_subspace(&DerivativeOracle::new(f, false), u)?;
    let transform = change_of_basis(u)?;
    let g = apply_transform(f, &transform)?;
    let (n, r) = (f.num_vars(), u.dim());
    let s = n - r;
    let phi = BooleanFunction::from_fn(s, |y| g.get(y))?;
    let pi: Vec<u32> = (0..1u32 << s)
        .map(|y| {
            (0..r).fold(0u32, |acc, i| {
                let x = 1u32 << (r - 1 - i);
                acc | (((g.get(x << s | y) ^ g.get(y)) as u32) << (r - 1 - i))
            })
        })
        .collect();
    let rep = MmRepresentation { r, s, pi, phi, transform };
    if rep.to_function() != g {
        return Err(Error::Internal("Maiorana-McFarland reconstruction failed".into()));
    }
    Ok(rep)
}

/// Whether `f` is affine on every coset of `U`.
pub fn affine_on_cosets(f: &BooleanFunction, u: &Subspace) -> bool {
    let complement = u.complement();
    complement.elements().into_iter().all(|c| {
        let base = f.get(c);
        let slopes: Vec<bool> = u.basis().iter().map(|&b| f.get(c ^ b) ^ base).collect();
        let mut ok = true;
        let mut value = base;
        let mut cur = c;
        for i in 1u32..(1 << u.dim()) {
            let k = i.trailing_zeros() as usize;
            cur ^= u.basis()[k];
            value ^= slopes[k];
            if f.get(cur) != value {
                ok = false;
                break;
            }
        }
        ok
    })
}
