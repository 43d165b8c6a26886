//! Named functions with their published invariants, the text format they
//! are stored in, and the verification pipeline that recomputes them.

mod notation;

pub use notation::{decode_vector, format_anf, format_base32, parse_anf, parse_anf_string, parse_base32, BitOrder, ALPHABET};

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use serde::Serialize;

use crate::boolcore::BooleanFunction;
use crate::constructions::quadratic_bent;
use crate::error::{Error, Result};
use crate::gf2linalg::Subspace;
use crate::invariants::{gamma_rank, snf};
use crate::subspaces::{enumerate_ms, is_m_subspace, linearity_index, relaxed_linearity_index};

/// Environment variable naming a catalog file that replaces the built-in one.
pub const CATALOG_ENV: &str = "BENTKIT_CATALOG";

const BUILTIN: &str = include_str!("catalog.txt");

/// A published integer value, exact or a lower bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Bound {
    Exact(usize),
    AtLeast(usize),
}

impl Bound {
    pub fn admits(self, value: usize) -> bool {
        match self {
            Bound::Exact(v) => value == v,
            Bound::AtLeast(v) => value >= v,
        }
    }

    fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let (ctor, digits): (fn(usize) -> Bound, &str) = match s.strip_prefix(">=") {
            Some(rest) => (Bound::AtLeast, rest.trim()),
            None => (Bound::Exact, s),
        };
        digits.parse().map(ctor).map_err(|_| Error::Parse(format!("expected an integer, got `{s}`")))
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Exact(v) => write!(f, "{v}"),
            Bound::AtLeast(v) => write!(f, ">={v}"),
        }
    }
}

/// Published M-subspace collection of one dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MsList {
    /// Rows of base-32 tokens, one subspace per entry.
    Listed(Vec<Vec<String>>),
    /// Equal to the collection published for another entry.
    SameAs(String),
}

/// Offset and basis tokens of an affine flat.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlatSpec {
    pub offset: String,
    pub basis: Vec<String>,
}

/// An affine flat `offset + span(basis)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flat {
    pub offset: u32,
    pub basis: Subspace,
}

impl Flat {
    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn points(&self) -> impl Iterator<Item = u32> + '_ {
        self.basis.elements().into_iter().map(move |u| u ^ self.offset)
    }
}

/// The value `f` takes on the whole flat, if it is constant there.
pub fn flat_value(f: &BooleanFunction, flat: &Flat) -> Option<bool> {
    let first = f.get(flat.offset);
    flat.points().all(|x| f.get(x) == first).then_some(first)
}

/// True iff `f` is constant on the flat.
pub fn verify_flat_normality(f: &BooleanFunction, flat: &Flat) -> bool {
    flat_value(f, flat).is_some()
}

/// Published invariants attached to an entry.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Expected {
    pub degree: Option<usize>,
    pub bent: Option<bool>,
    pub homogeneous: Option<bool>,
    pub ind: Option<Bound>,
    pub rind: Option<Bound>,
    pub fp: Option<Bound>,
    /// `(divisor, multiplicity)` pairs of the printed prefix.
    pub snf_prefix: Option<Vec<(u64, usize)>>,
    pub ms: Option<(usize, MsList)>,
    pub flat: Option<FlatSpec>,
}

/// One named function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogEntry {
    pub name: String,
    pub n: usize,
    /// Digit-notation ANF; `None` for an unsourced slot.
    pub anf_source: Option<String>,
    pub is_slot: bool,
    pub expected: Expected,
}

impl CatalogEntry {
    pub fn is_sourced(&self) -> bool {
        self.anf_source.is_some()
    }

    pub fn function(&self) -> Result<BooleanFunction> {
        match &self.anf_source {
            Some(src) => parse_anf_string(src, self.n),
            None => Err(Error::Unsourced(self.name.clone())),
        }
    }
}

/// Lookup table of named functions.
#[derive(Debug)]
pub struct Catalog {
    entries: Vec<CatalogEntry>,
    bit_order: OnceLock<Result<BitOrder>>,
}

impl Clone for Catalog {
    fn clone(&self) -> Self {
        Self { entries: self.entries.clone(), bit_order: OnceLock::new() }
    }
}

impl Catalog {
    /// The catalog shipped with the crate.
    pub fn builtin() -> Self {
        Self::parse(BUILTIN).expect("built-in catalog parses")
    }

    /// The file named by [`CATALOG_ENV`] if set, else the built-in catalog.
    pub fn load() -> Result<Self> {
        match std::env::var_os(CATALOG_ENV) {
            Some(path) => {
                let text = std::fs::read_to_string(&path)
                    .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.to_string_lossy())))?;
                Self::parse(&text)
            }
            None => Ok(Self::builtin()),
        }
    }

    /// Parses the block format described at the top of the built-in file.
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        let mut current: Option<(String, BTreeMap<String, Vec<String>>)> = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                if let Some((name, fields)) = current.take() {
                    entries.push(build_entry(name, fields)?);
                }
                current = Some((name.trim().to_string(), BTreeMap::new()));
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("line {}: expected `key = value`", lineno + 1)))?;
            let (_, fields) = current
                .as_mut()
                .ok_or_else(|| Error::Parse(format!("line {}: field outside of an entry", lineno + 1)))?;
            fields.entry(key.trim().to_string()).or_default().push(value.trim().to_string());
        }
        if let Some((name, fields)) = current.take() {
            entries.push(build_entry(name, fields)?);
        }
        Ok(Self { entries, bit_order: OnceLock::new() })
    }

    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    pub fn names(&self) -> Vec<&str> {
        self.entries.iter().map(|e| e.name.as_str()).collect()
    }

    pub fn get(&self, name: &str) -> Result<&CatalogEntry> {
        self.entries.iter().find(|e| e.name == name).ok_or_else(|| Error::UnknownEntry(name.to_string()))
    }

    /// A named function. `Q<k>` is the quadratic bent function on `k` variables.
    pub fn function(&self, name: &str) -> Result<BooleanFunction> {
        if let Some(k) = name.strip_prefix('Q').and_then(|k| k.parse::<usize>().ok()) {
            return quadratic_bent(k);
        }
        self.get(name)?.function()
    }

    /// Supplies an ANF for a slot. The candidate must pass every expected
    /// invariant of the slot before it is accepted.
    pub fn with_slot_candidate(&self, name: &str, anf: &str) -> Result<Catalog> {
        let entry = self.get(name)?;
        if !entry.is_slot {
            return Err(Error::SlotValidation { name: name.into(), reason: "entry is not a slot".into() });
        }
        let mut candidate = entry.clone();
        candidate.anf_source = Some(anf.to_string());
        let f = candidate.function().map_err(|e| Error::SlotValidation { name: name.into(), reason: e.to_string() })?;
        validate_slot(&candidate, &f)?;
        let mut next = self.clone();
        for e in next.entries.iter_mut() {
            if e.name == name {
                *e = candidate.clone();
            }
        }
        Ok(next)
    }

    /// Whether any entry publishes base-32 data (M-subspace lists or flats).
    pub fn has_tokens(&self) -> bool {
        self.entries.iter().any(|e| e.expected.ms.is_some() || e.expected.flat.is_some())
    }

    /// Bit order of base-32 tokens, fixed by requiring every published
    /// M-subspace to pass the membership test and every published flat to be
    /// constant. Exactly one order must be consistent.
    pub fn bit_order(&self) -> Result<BitOrder> {
        self.bit_order.get_or_init(|| self.resolve_bit_order()).clone()
    }

    fn resolve_bit_order(&self) -> Result<BitOrder> {
        let candidates = [BitOrder::MsbFirst, BitOrder::LsbFirst];
        let consistent: Vec<BitOrder> =
            candidates.into_iter().filter(|&o| self.consistent_with(o).unwrap_or(false)).collect();
        match consistent.as_slice() {
            [only] => Ok(*only),
            [] => Err(Error::Internal("no bit order makes the published subspaces and flats consistent".into())),
            _ => Err(Error::Internal("both bit orders are consistent with the published data".into())),
        }
    }

    fn consistent_with(&self, order: BitOrder) -> Result<bool> {
        let mut checked = 0;
        for e in self.entries.iter().filter(|e| e.is_sourced()) {
            let f = e.function()?;
            if let Some(list) = self.published_ms(&e.name, order)? {
                for u in list {
                    checked += 1;
                    if !is_m_subspace(&f, &u) {
                        return Ok(false);
                    }
                }
            }
            if let Some(flat) = self.flat(&e.name, order)? {
                checked += 1;
                if !verify_flat_normality(&f, &flat) {
                    return Ok(false);
                }
            }
        }
        Ok(checked > 0)
    }

    /// Published M-subspaces of an entry decoded under `order`, following
    /// `same` references; `None` when nothing is published.
    pub fn published_ms(&self, name: &str, order: BitOrder) -> Result<Option<Vec<Subspace>>> {
        let entry = self.get(name)?;
        let Some((_, list)) = &entry.expected.ms else { return Ok(None) };
        match list {
            MsList::SameAs(other) => self.published_ms(other, order),
            MsList::Listed(rows) => rows
                .iter()
                .map(|row| {
                    let vs = row.iter().map(|t| decode_vector(t, entry.n, order)).collect::<Result<Vec<_>>>()?;
                    Subspace::gjb(entry.n, vs)
                })
                .collect::<Result<Vec<_>>>()
                .map(Some),
        }
    }

    /// Published rows (tokens) of an entry's M-subspace list, following references.
    pub fn published_ms_tokens(&self, name: &str) -> Result<Option<Vec<Vec<String>>>> {
        let entry = self.get(name)?;
        match &entry.expected.ms {
            None => Ok(None),
            Some((_, MsList::SameAs(other))) => self.published_ms_tokens(other),
            Some((_, MsList::Listed(rows))) => Ok(Some(rows.clone())),
        }
    }

    /// Published normality flat of an entry decoded under `order`.
    pub fn flat(&self, name: &str, order: BitOrder) -> Result<Option<Flat>> {
        let entry = self.get(name)?;
        let Some(spec) = &entry.expected.flat else { return Ok(None) };
        let offset = decode_vector(&spec.offset, entry.n, order)?;
        let vs = spec.basis.iter().map(|t| decode_vector(t, entry.n, order)).collect::<Result<Vec<_>>>()?;
        Ok(Some(Flat { offset, basis: Subspace::gjb(entry.n, vs)? }))
    }
}

fn build_entry(name: String, mut fields: BTreeMap<String, Vec<String>>) -> Result<CatalogEntry> {
    let ctx = |e: Error| Error::Parse(format!("entry `{name}`: {e}"));
    let mut single = |key: &str| -> Option<String> { fields.remove(key).and_then(|mut v| v.pop()) };
    let n: usize = single("n")
        .ok_or_else(|| Error::Parse(format!("entry `{name}` lacks `n`")))?
        .parse()
        .map_err(|_| Error::Parse(format!("entry `{name}`: bad `n`")))?;
    let yes_no = |v: Option<String>| -> Result<Option<bool>> {
        v.map(|s| match s.as_str() {
            "yes" | "true" => Ok(true),
            "no" | "false" => Ok(false),
            other => Err(Error::Parse(format!("entry `{name}`: expected yes/no, got `{other}`"))),
        })
        .transpose()
    };
    let anf_source = single("anf");
    let is_slot = single("slot").is_some();
    let mut expected = Expected {
        degree: single("degree").map(|s| s.parse()).transpose().map_err(|_| Error::Parse(format!("entry `{name}`: bad degree")))?,
        bent: yes_no(single("bent"))?,
        homogeneous: yes_no(single("homogeneous"))?,
        ind: single("ind").map(|s| Bound::parse(&s)).transpose().map_err(ctx)?,
        rind: single("rind").map(|s| Bound::parse(&s)).transpose().map_err(ctx)?,
        fp: single("fp").map(|s| Bound::parse(&s)).transpose().map_err(ctx)?,
        snf_prefix: single("snf").map(|s| parse_snf_prefix(&s)).transpose().map_err(ctx)?,
        ms: None,
        flat: None,
    };
    if let Some(spec) = single("flat") {
        let (offset, basis) =
            spec.split_once(':').ok_or_else(|| Error::Parse(format!("entry `{name}`: flat needs `offset : basis`")))?;
        expected.flat = Some(FlatSpec {
            offset: offset.trim().to_string(),
            basis: basis.split_whitespace().map(str::to_string).collect(),
        });
    }
    let ms_keys: Vec<String> = fields.keys().filter(|k| k.starts_with("ms")).cloned().collect();
    for key in ms_keys {
        let dim: usize = key[2..].parse().map_err(|_| Error::Parse(format!("entry `{name}`: bad key `{key}`")))?;
        let lines = fields.remove(&key).unwrap_or_default();
        let list = match lines.as_slice() {
            [one] if one == "none" => MsList::Listed(Vec::new()),
            [one] if one.starts_with("same ") => MsList::SameAs(one[5..].trim().to_string()),
            rows => MsList::Listed(rows.iter().map(|r| r.split_whitespace().map(str::to_string).collect()).collect()),
        };
        expected.ms = Some((dim, list));
    }
    if let Some(key) = fields.keys().next() {
        return Err(Error::Parse(format!("entry `{name}`: unknown key `{key}`")));
    }
    if let Some(src) = &anf_source {
        parse_anf(src, n).map_err(ctx)?;
    }
    Ok(CatalogEntry { name, n, anf_source, is_slot, expected })
}

fn parse_snf_prefix(s: &str) -> Result<Vec<(u64, usize)>> {
    s.split(',')
        .map(|term| {
            let (d, m) = term.trim().split_once('^').ok_or_else(|| Error::Parse(format!("bad SNF term `{term}`")))?;
            let d = d.trim().parse().map_err(|_| Error::Parse(format!("bad divisor in `{term}`")))?;
            let m = m.trim().parse().map_err(|_| Error::Parse(format!("bad multiplicity in `{term}`")))?;
            Ok((d, m))
        })
        .collect()
}

fn validate_slot(entry: &CatalogEntry, f: &BooleanFunction) -> Result<()> {
    let reject = |reason: String| Err(Error::SlotValidation { name: entry.name.clone(), reason });
    let exp = &entry.expected;
    if f.num_vars() != entry.n {
        return reject(format!("expected {} variables", entry.n));
    }
    if exp.bent == Some(true) && !f.is_bent() {
        return reject("not bent".into());
    }
    if let Some(d) = exp.degree {
        if f.degree() != Some(d) {
            return reject(format!("degree {:?}, expected {d}", f.degree()));
        }
    }
    if let Some(h) = exp.homogeneous {
        let actual = f.degree().is_some_and(|d| f.is_homogeneous(d));
        if actual != h {
            return reject(format!("homogeneity is {actual}, expected {h}"));
        }
    }
    if let Some(fp) = exp.fp {
        let dim = f.fast_point_space()?.dim();
        if !fp.admits(dim) {
            return reject(format!("fast-point dimension {dim}, expected {fp}"));
        }
    }
    if let Some(r) = exp.rind {
        let got = relaxed_linearity_index(f);
        if !r.admits(got) {
            return reject(format!("relaxed linearity index {got}, expected {r}"));
        }
    }
    if let Some(r) = exp.ind {
        let got = linearity_index(f);
        if !r.admits(got) {
            return reject(format!("linearity index {got}, expected {r}"));
        }
    }
    Ok(())
}

/// Which published values [`verify_entry`] recomputes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyScope {
    /// Degree, bentness, homogeneity.
    pub basics: bool,
    /// Linearity index, relaxed index, fast points.
    pub indices: bool,
    pub snf: bool,
    pub subspaces: bool,
    pub flats: bool,
}

impl VerifyScope {
    pub const ALL: VerifyScope = VerifyScope { basics: true, indices: true, snf: true, subspaces: true, flats: true };
    pub const NONE: VerifyScope = VerifyScope { basics: false, indices: false, snf: false, subspaces: false, flats: false };
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
}

/// One recomputed value next to its published counterpart.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub item: String,
    pub expected: String,
    pub actual: String,
    pub outcome: Outcome,
}

impl Check {
    fn new(item: &str, expected: impl ToString, actual: impl ToString, pass: bool) -> Self {
        Self {
            item: item.to_string(),
            expected: expected.to_string(),
            actual: actual.to_string(),
            outcome: if pass { Outcome::Pass } else { Outcome::Fail },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EntryStatus {
    Verified,
    Mismatch,
    Unsourced,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EntryReport {
    pub name: String,
    pub status: EntryStatus,
    pub checks: Vec<Check>,
}

/// Recomputes the published values of `name` within `scope`.
pub fn verify_entry(catalog: &Catalog, name: &str, scope: VerifyScope) -> Result<EntryReport> {
    let entry = catalog.get(name)?;
    if !entry.is_sourced() {
        return Ok(EntryReport { name: name.into(), status: EntryStatus::Unsourced, checks: Vec::new() });
    }
    let f = entry.function()?;
    let exp = &entry.expected;
    let mut checks = Vec::new();
    if scope.basics {
        if let Some(d) = exp.degree {
            let got = f.degree();
            checks.push(Check::new("degree", d, got.map_or("none".into(), |g| g.to_string()), got == Some(d)));
        }
        if let Some(b) = exp.bent {
            let got = f.is_bent();
            checks.push(Check::new("bent", b, got, got == b));
        }
        if let Some(h) = exp.homogeneous {
            let got = f.degree().is_some_and(|d| f.is_homogeneous(d));
            checks.push(Check::new("homogeneous", h, got, got == h));
        }
    }
    if scope.indices {
        if let Some(b) = exp.ind {
            let got = linearity_index(&f);
            checks.push(Check::new("ind", b, got, b.admits(got)));
        }
        if let Some(b) = exp.rind {
            let got = relaxed_linearity_index(&f);
            checks.push(Check::new("rind", b, got, b.admits(got)));
        }
        if let Some(b) = exp.fp {
            let got = f.fast_point_space()?.dim();
            checks.push(Check::new("dim FP", b, got, b.admits(got)));
        }
    }
    if scope.snf {
        if let Some(prefix) = &exp.snf_prefix {
            let s = snf(&f)?;
            let got: Vec<(u64, usize)> = prefix.iter().map(|&(d, _)| (d, s.multiplicity(d))).collect();
            let fmt = |v: &[(u64, usize)]| v.iter().map(|(d, m)| format!("{d}^{m}")).collect::<Vec<_>>().join(", ");
            checks.push(Check::new("snf prefix", fmt(prefix), fmt(&got), &got == prefix));
            let g = gamma_rank(&f);
            let m1 = s.multiplicity(1);
            checks.push(Check::new("m_1 = Γrank", g, m1, g == m1));
        }
    }
    if scope.subspaces {
        if let Some((dim, _)) = &exp.ms {
            let order = catalog.bit_order()?;
            let published = catalog.published_ms(name, order)?.unwrap_or_default();
            let computed = enumerate_ms(&f, *dim);
            let mut published_sorted = published.clone();
            published_sorted.sort();
            let render = |v: &[Subspace]| {
                if v.is_empty() {
                    "none".to_string()
                } else {
                    v.iter().map(|u| u.to_base32()).collect::<Vec<_>>().join("; ")
                }
            };
            checks.push(Check::new(
                &format!("MS_{dim}"),
                render(&published_sorted),
                render(&computed.members),
                published_sorted == computed.members,
            ));
            if let Some(rows) = catalog.published_ms_tokens(name)? {
                // printed rows must already be canonical bases
                let printed: Vec<String> = rows.iter().map(|r| r.join(" ")).collect();
                let canonical: Vec<String> = published.iter().map(|u| u.to_base32()).collect();
                let ok = order == BitOrder::MsbFirst && printed == canonical;
                checks.push(Check::new(&format!("MS_{dim} rows canonical"), printed.join("; "), canonical.join("; "), ok));
            }
        }
    }
    if scope.flats && exp.flat.is_some() {
        if let Some(flat) = catalog.flat(name, catalog.bit_order()?)? {
            let value = flat_value(&f, &flat);
            let shown = value.map_or("not constant".to_string(), |v| format!("constant {}", v as u8));
            checks.push(Check::new(&format!("normal on {}-flat", flat.dim()), "constant", shown, value.is_some()));
        }
    }
    let status =
        if checks.iter().all(|c| c.outcome == Outcome::Pass) { EntryStatus::Verified } else { EntryStatus::Mismatch };
    Ok(EntryReport { name: name.into(), status, checks })
}
