//! The `construct` subcommand.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use bentkit::catalog::{format_anf, parse_base32, Catalog};
use bentkit::constructions::{
    build_concat, certify_concat, certify_outside_mm_by_products, omega_basis_for, search_omega, Certificate,
    ConcatRecipe, OmegaHit, OmegaSearchStats, Provenance, Verdict, MAX_TABLE_VARS,
};
use bentkit::invariants::{gamma_rank, two_adic_valuation_counts};
use bentkit::subspaces::Enumerator;
use bentkit::{Anf, BooleanFunction, Subspace};

use crate::input::Resolved;
use crate::Failure;

#[derive(Debug, Serialize)]
pub struct Property {
    pub name: String,
    pub value: String,
    /// `computed` from the table, or `compositional` from the blocks.
    pub basis: &'static str,
}

fn property(name: &str, value: impl ToString, basis: &'static str) -> Property {
    Property { name: name.into(), value: value.to_string(), basis }
}

#[derive(Debug, Serialize)]
pub struct ConcatReport {
    pub recipe: String,
    pub num_vars: usize,
    pub anf: String,
    /// Digit notation, re-readable as `anf:`; absent beyond 32 variables.
    pub digits: Option<String>,
    pub properties: Vec<Property>,
    pub certificate: Certificate,
}

pub fn concat(catalog: &Catalog, counts: [usize; 4]) -> Result<ConcatReport, Failure> {
    let recipe = ConcatRecipe::standard(counts[0], counts[1], counts[2], counts[3]);
    let c = build_concat(catalog, &recipe)?;
    if c.blocks.is_empty() {
        return Err(Failure::Usage("the recipe is empty".into()));
    }
    let n = c.num_vars();
    let mut properties = vec![
        property("degree", c.degree().map_or("none".into(), |d| d.to_string()), "compositional"),
        property("homogeneous", c.is_homogeneous(), "compositional"),
    ];
    if n <= MAX_TABLE_VARS {
        eprintln!("building the {n}-variable table");
        let f = c.to_function()?;
        properties.push(property("bent", f.is_bent(), "computed"));
    } else {
        properties.push(property("bent", "true (direct sum of bent blocks)", "compositional"));
    }
    let ranks: Vec<usize> = c.blocks.iter().map(|(_, a)| bentkit::invariants::gamma_rank_from_anf(a)).collect();
    let total = ranks.iter().sum::<usize>() + 2 - 2 * ranks.len();
    properties.push(property("Γrank", total, "compositional"));
    properties.push(property("Γrank of the primary construction", n + 2, "compositional"));
    let certificate = certify_concat(&c)?;
    let digits = Anf::from_index_sets(n, &c.monomials()).ok().map(|a| format_anf(&a));
    Ok(ConcatReport { recipe: c.recipe_text(), num_vars: n, anf: c.anf_text(), digits, properties, certificate })
}

#[derive(Debug, Serialize)]
pub struct OmegaSample {
    pub coords: u64,
    pub omega: String,
    pub gamma_rank: usize,
    /// Multiplicities of `1, 2, 4, ...` up to `2^(n/2 - 1)`.
    pub snf_prefix: Vec<usize>,
}

#[derive(Debug, Serialize)]
pub struct OmegaReport {
    pub base: String,
    pub subspace: String,
    /// Linear forms of the image of the inner variables, `x1 + x2` style.
    pub y_image: Vec<String>,
    pub basis_monomials: Vec<String>,
    pub dimension: usize,
    pub samples: Vec<OmegaSample>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub search: Option<OmegaSearchReport>,
}

#[derive(Debug, Serialize)]
pub struct OmegaSearchReport {
    pub target: String,
    pub hit: Option<OmegaHit>,
    /// Digit-notation ANF of the matching function.
    pub generated_anf: Option<String>,
    pub stats: OmegaSearchStats,
}

pub struct OmegaOptions<'a> {
    pub subspace: Option<&'a str>,
    pub samples: usize,
    pub seed: u64,
    pub target: Option<&'a str>,
    pub budget: Option<u64>,
}

fn form_text(form: u32, n: usize) -> String {
    (0..n).filter(|i| form >> (n - 1 - i) & 1 == 1).map(|i| format!("x{}", i + 1)).collect::<Vec<_>>().join(" + ")
}

fn snf_prefix(f: &BooleanFunction, len: usize) -> Result<Vec<usize>, Failure> {
    let mut partial = Vec::new();
    let complete = two_adic_valuation_counts(f, &mut |level, counts| {
        partial = counts.to_vec();
        level as usize + 1 >= len
    })?;
    let mut counts = complete.unwrap_or(partial);
    counts.resize(len, 0);
    Ok(counts)
}

pub fn omega_scan(catalog: &Catalog, base: &Resolved, opts: &OmegaOptions<'_>) -> Result<OmegaReport, Failure> {
    let f = &base.function;
    let n = f.num_vars();
    if n % 2 != 0 {
        return Err(Failure::Usage("the base function needs an even number of variables".into()));
    }
    let degree = f.degree().ok_or_else(|| Failure::Usage("the base function is zero".into()))?;
    if !f.is_homogeneous(degree) {
        return Err(Failure::Usage("the base function is not homogeneous".into()));
    }
    let u = match opts.subspace {
        Some(text) => {
            let vs = text.split_whitespace().map(|t| parse_base32(t, n)).collect::<bentkit::Result<Vec<_>>>()?;
            Subspace::gjb(n, vs)?
        }
        None => {
            eprintln!("enumerating M-subspaces of dimension {}", n / 2);
            let ms = Enumerator::new(f, false).with_budget(opts.budget).enumerate(n / 2)?;
            ms.members.into_iter().next().ok_or_else(|| Failure::Usage("the base function has no M-subspace of dimension n/2".into()))?
        }
    };
    let set = omega_basis_for(f, &u, degree)?;
    let s = set.base.s;
    let basis_monomials =
        set.basis_monomials.iter().map(|&m| format_anf(&Anf::from_masks(s, [m]).expect("monomial fits"))).collect();
    let y_image = set.y_image().into_iter().map(|form| form_text(form, n)).collect();
    let mut samples = Vec::new();
    let dim = set.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for i in 0..opts.samples {
        let z: u64 = rng.gen();
        let coords = if dim >= 64 { z } else { z & ((1u64 << dim) - 1) };
        eprintln!("sample {}/{}", i + 1, opts.samples);
        let g = set.generate(coords)?;
        samples.push(OmegaSample {
            coords,
            omega: format_anf(&set.element(coords)),
            gamma_rank: gamma_rank(&g),
            snf_prefix: snf_prefix(&g, n / 2)?,
        });
    }
    let search = match opts.target {
        Some(name) => {
            let entry = catalog.get(name)?;
            let target: Vec<usize> = entry
                .expected
                .snf_prefix
                .as_ref()
                .ok_or_else(|| Failure::Usage(format!("{name} has no published Smith normal form prefix")))?
                .iter()
                .map(|&(_, m)| m)
                .collect();
            let budget = opts.budget.unwrap_or(1 << 20);
            let (hit, stats) = search_omega(&set, &target, budget, &mut |st| {
                eprintln!("searched {} (Γ-rank filter passed {}, SNF runs {})", st.visited, st.gamma_rank_passed, st.snf_runs)
            })?;
            let generated_anf = match &hit {
                Some(h) => Some(format_anf(&set.generate(h.coords)?.to_anf())),
                None => None,
            };
            Some(OmegaSearchReport { target: name.to_string(), hit, generated_anf, stats })
        }
        None => None,
    };
    Ok(OmegaReport {
        base: base.label.clone(),
        subspace: u.to_base32(),
        y_image,
        dimension: dim,
        basis_monomials,
        samples,
        search,
    })
}

pub fn product_check(f: &Resolved, g: &Resolved, budget: Option<u64>) -> Result<Certificate, Failure> {
    let h = f.function.direct_sum(&g.function)?;
    let mut cert = certify_outside_mm_by_products(&h, &f.function, &g.function, budget)?;
    cert.construction = format!("{} + {}", f.label, g.label);
    Ok(cert)
}

pub fn render_certificate(cert: &Certificate) -> String {
    let verdict = match cert.verdict {
        Verdict::OutsideCompletedClass => "outside the completed Maiorana-McFarland class",
        Verdict::InsideCompletedClass => "inside the completed Maiorana-McFarland class",
        Verdict::Inconclusive => "inconclusive",
    };
    let mut out = format!("certificate for {}\n  rule     {}\n  verdict  {verdict}\n", cert.construction, cert.rule);
    for m in &cert.measurements {
        out.push_str(&format!("  {} = {} ({})\n", m.name, m.value, provenance_text(m.provenance)));
    }
    if let Some(w) = &cert.witness {
        out.push_str(&format!("  witness M-subspace  {w}\n"));
    }
    out
}

fn provenance_text(p: Provenance) -> &'static str {
    match p {
        Provenance::Computed => "computed",
        Provenance::Published => "published",
        Provenance::Bound => "bound",
    }
}

pub fn render_concat(r: &ConcatReport) -> String {
    let mut out = format!("construction  {} ({} variables)\nanf  {}\n", r.recipe, r.num_vars, r.digits.as_deref().unwrap_or(&r.anf));
    for p in &r.properties {
        out.push_str(&format!("  {} = {} [{}]\n", p.name, p.value, p.basis));
    }
    out.push_str(&render_certificate(&r.certificate));
    out
}

pub fn render_omega(r: &OmegaReport) -> String {
    let mut out = format!("base      {}\nsubspace  {}\nimage of y:\n", r.base, r.subspace);
    for (j, form) in r.y_image.iter().enumerate() {
        out.push_str(&format!("  y'{} = {form}\n", j + 1));
    }
    out.push_str(&format!("qualifying monomials ({}): {}\n", r.basis_monomials.len(), r.basis_monomials.join(" ")));
    out.push_str(&format!("span size 2^{}\n", r.dimension));
    for s in &r.samples {
        let prefix: Vec<String> = s.snf_prefix.iter().enumerate().map(|(i, m)| format!("{}^{m}", 1u64 << i)).collect();
        out.push_str(&format!("sample omega = {}\n  Γrank {}  snf {}\n", if s.omega.is_empty() { "0" } else { &s.omega }, s.gamma_rank, prefix.join(", ")));
    }
    if let Some(search) = &r.search {
        match &search.hit {
            Some(hit) => out.push_str(&format!(
                "match for {}: omega = {} after {} candidates ({} SNF runs)\n",
                search.target, hit.omega, search.stats.visited, search.stats.snf_runs
            )),
            None => out.push_str(&format!("no match for {} in {} candidates\n", search.target, search.stats.visited)),
        }
    }
    out
}
