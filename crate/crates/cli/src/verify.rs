//! The `verify-paper` subcommand.

use clap::ValueEnum;
use rayon::prelude::*;
use serde::Serialize;

use bentkit::catalog::{verify_entry, BitOrder, Catalog, EntryReport, EntryStatus, Outcome, VerifyScope};

use crate::Failure;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Scope {
    /// Indices, fast points and Smith normal form prefixes.
    Tables,
    /// Homogeneity, bentness and the published M-subspace lists.
    Appendix,
    /// Constancy on the published normality flats.
    Flats,
    All,
}

impl Scope {
    fn checks(self) -> VerifyScope {
        match self {
            Scope::Tables => VerifyScope { indices: true, snf: true, ..VerifyScope::NONE },
            Scope::Appendix => VerifyScope { basics: true, subspaces: true, ..VerifyScope::NONE },
            Scope::Flats => VerifyScope { flats: true, ..VerifyScope::NONE },
            Scope::All => VerifyScope::ALL,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    /// Resolved token bit order; absent when the catalog publishes no tokens.
    pub bit_order: Option<BitOrder>,
    pub entries: Vec<EntryReport>,
    pub passed: bool,
}

pub fn run(catalog: &Catalog, scope: Scope) -> Result<VerifyReport, Failure> {
    let checks = scope.checks();
    let bit_order = if catalog.has_tokens() { Some(catalog.bit_order()?) } else { None };
    let names = catalog.names();
    let entries: Vec<EntryReport> = names
        .par_iter()
        .map(|name| {
            eprintln!("verifying {name}");
            verify_entry(catalog, name, checks)
        })
        .collect::<bentkit::Result<Vec<_>>>()?;
    let entries: Vec<EntryReport> = entries.into_iter().filter(|e| !e.checks.is_empty() || e.status == EntryStatus::Unsourced).collect();
    let passed = entries.iter().all(|e| e.status != EntryStatus::Mismatch);
    Ok(VerifyReport { bit_order, entries, passed })
}

const MAX_CELL: usize = 40;

fn cell(s: &str, full: bool) -> String {
    if full || s.chars().count() <= MAX_CELL {
        s.to_string()
    } else {
        let head: String = s.chars().take(MAX_CELL - 3).collect();
        format!("{head}...")
    }
}

pub fn render_text(report: &VerifyReport) -> String {
    let mut rows: Vec<[String; 5]> = vec![["entry", "item", "expected", "actual", "status"].map(String::from)];
    for e in &report.entries {
        if e.status == EntryStatus::Unsourced {
            rows.push([e.name.clone(), "-".into(), "-".into(), "-".into(), "skipped (unsourced)".into()]);
            continue;
        }
        for c in &e.checks {
            let failed = c.outcome == Outcome::Fail;
            rows.push([
                e.name.clone(),
                c.item.clone(),
                cell(&c.expected, failed),
                cell(&c.actual, failed),
                if failed { "FAIL".into() } else { "ok".into() },
            ]);
        }
    }
    let mut widths = [0usize; 5];
    for row in &rows {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.chars().count());
        }
    }
    let mut out = match report.bit_order {
        Some(order) => format!("bit order: {order:?}\n"),
        None => String::new(),
    };
    for row in &rows {
        let line: Vec<String> = row
            .iter()
            .zip(widths)
            .enumerate()
            .map(|(i, (c, w))| if i == 4 { c.clone() } else { format!("{c}{}", " ".repeat(w - c.chars().count())) })
            .collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    out.push_str(if report.passed { "all published values reproduced\n" } else { "MISMATCH: see rows marked FAIL\n" });
    out
}
