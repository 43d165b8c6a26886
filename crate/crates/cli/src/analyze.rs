//! The `analyze` subcommand.

use serde::Serialize;

use bentkit::invariants::{check_snf_symmetry, gamma_rank, snf, SnfMultiset};
use bentkit::subspaces::{Enumerator, SubspaceCollection};

use crate::input::Resolved;
use crate::Failure;

/// Invariants selected on the command line.
#[derive(Clone, Copy, Debug, Default)]
pub struct Selection {
    pub bent: bool,
    pub homogeneous: bool,
    pub fp: bool,
    pub index: bool,
    pub relaxed_index: bool,
    pub gamma_rank: bool,
    pub snf: bool,
    pub ms: Option<usize>,
    pub rms: Option<usize>,
}

impl Selection {
    fn is_empty(&self) -> bool {
        !(self.bent
            || self.homogeneous
            || self.fp
            || self.index
            || self.relaxed_index
            || self.gamma_rank
            || self.snf
            || self.ms.is_some()
            || self.rms.is_some())
    }

    /// The cheap invariants, used when nothing is selected.
    fn defaults() -> Self {
        Self { bent: true, homogeneous: true, fp: true, gamma_rank: true, ..Self::default() }
    }
}

/// One invariant. Every value here is computed exactly; bounds only appear
/// in construction certificates.
#[derive(Debug, Serialize)]
pub struct Field {
    pub name: String,
    pub value: String,
}

#[derive(Debug, Serialize)]
pub struct AnalysisReport {
    pub function: String,
    pub num_vars: usize,
    pub anf: String,
    pub invariants: Vec<Field>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub snf: Option<SnfMultiset>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub subspaces: Vec<SubspaceCollectionReport>,
    pub notes: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct SubspaceCollectionReport {
    pub kind: &'static str,
    pub collection: SubspaceCollection,
}

fn exact(name: &str, value: impl ToString) -> Field {
    Field { name: name.into(), value: value.to_string() }
}

pub fn run(input: &Resolved, selection: Selection, budget: Option<u64>) -> Result<AnalysisReport, Failure> {
    let f = &input.function;
    let sel = if selection.is_empty() { Selection::defaults() } else { selection };
    let anf = f.to_anf();
    let mut report = AnalysisReport {
        function: input.label.clone(),
        num_vars: f.num_vars(),
        anf: if anf.is_zero() { "0".into() } else { bentkit::catalog::format_anf(&anf) },
        invariants: Vec::new(),
        snf: None,
        subspaces: Vec::new(),
        notes: Vec::new(),
    };
    let degree = anf.degree();
    report.invariants.push(exact("degree", degree.map_or("none (zero function)".into(), |d| d.to_string())));
    if sel.bent {
        report.invariants.push(exact("bent", f.is_bent()));
    }
    if sel.homogeneous {
        report.invariants.push(exact("homogeneous", degree.is_some_and(|d| anf.is_homogeneous(d))));
    }
    if sel.fp {
        match f.fast_point_space() {
            Ok(fp) => report.invariants.push(exact("dim FP", fp.dim())),
            Err(_) => report.notes.push("fast points are undefined for constant functions".into()),
        }
    }
    if sel.index {
        let ind = Enumerator::new(f, false).with_budget(budget).max_dimension()?;
        report.invariants.push(exact("ind", ind));
    }
    if sel.relaxed_index {
        let rind = Enumerator::new(f, true).with_budget(budget).max_dimension()?;
        report.invariants.push(exact("rind", rind));
    }
    if sel.gamma_rank || sel.snf {
        report.invariants.push(exact("Γrank", gamma_rank(f)));
    }
    if sel.snf {
        let s = snf(f)?;
        report.invariants.push(exact("snf", s.to_string()));
        if f.is_bent() {
            let sym = check_snf_symmetry(&s, f.num_vars());
            let failed: Vec<&str> = sym.clauses.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
            report.notes.push(if failed.is_empty() {
                "divisor symmetry check: all clauses hold".into()
            } else {
                format!("divisor symmetry check: failed clauses {}", failed.join(", "))
            });
        }
        report.snf = Some(s);
    }
    if let Some(r) = sel.ms {
        let c = Enumerator::new(f, false).with_budget(budget).enumerate(r)?;
        report.invariants.push(exact(&format!("|MS_{r}|"), c.len()));
        report.subspaces.push(SubspaceCollectionReport { kind: "MS", collection: c });
    }
    if let Some(r) = sel.rms {
        let c = Enumerator::new(f, true).with_budget(budget).enumerate(r)?;
        report.invariants.push(exact(&format!("|RMS_{r}|"), c.len()));
        report.subspaces.push(SubspaceCollectionReport { kind: "RMS", collection: c });
    }
    Ok(report)
}

pub fn render_text(report: &AnalysisReport) -> String {
    let mut out = format!("function  {} ({} variables)\nanf       {}\n", report.function, report.num_vars, report.anf);
    let width = report.invariants.iter().map(|f| f.name.chars().count()).max().unwrap_or(0);
    for field in &report.invariants {
        let pad = width - field.name.chars().count();
        out.push_str(&format!("{}{}  {}\n", field.name, " ".repeat(pad), field.value));
    }
    for s in &report.subspaces {
        out.push_str(&format!("{}_{}:\n", s.kind, s.collection.dim));
        for u in s.collection.iter() {
            out.push_str(&format!("  {}\n", u.to_base32()));
        }
    }
    for note in &report.notes {
        out.push_str(&format!("note: {note}\n"));
    }
    out
}
