//! Function specifications accepted on the command line.

use bentkit::catalog::{parse_anf, Catalog};
use bentkit::BooleanFunction;

/// A resolved input function and how to name it in reports.
pub struct Resolved {
    pub label: String,
    pub function: BooleanFunction,
}

/// Parses `name:<entry>`, `anf:<monomials>[@n]`, `tt:<hex>@<n>`, or a bare
/// catalog name or hex table.
pub fn resolve(spec: &str, catalog: &Catalog) -> Result<Resolved, String> {
    if let Some(name) = spec.strip_prefix("name:") {
        return by_name(name, catalog);
    }
    if let Some(body) = spec.strip_prefix("anf:") {
        let (text, n) = match body.rsplit_once('@') {
            Some((text, n)) => (text, Some(n.parse::<usize>().map_err(|_| format!("bad variable count `{n}`"))?)),
            None => (body, None),
        };
        let n = match n {
            Some(n) => n,
            None => infer_anf_vars(text)?,
        };
        let anf = parse_anf(text, n).map_err(|e| format!("cannot parse ANF `{text}`: {e}"))?;
        return Ok(Resolved { label: format!("anf:{text}@{n}"), function: anf.to_function() });
    }
    if let Some(body) = spec.strip_prefix("tt:") {
        let (hex, n) = body.rsplit_once('@').ok_or_else(|| "truth tables need `tt:<hex>@<n>`".to_string())?;
        let n: usize = n.parse().map_err(|_| format!("bad variable count `{n}`"))?;
        let function = BooleanFunction::from_hex(hex, n).map_err(|e| format!("cannot parse table `{hex}`: {e}"))?;
        return Ok(Resolved { label: format!("tt:{hex}@{n}"), function });
    }
    if let Ok(found) = by_name(spec, catalog) {
        return Ok(found);
    }
    if !spec.is_empty() && spec.chars().all(|c| c.is_ascii_hexdigit()) {
        let n = hex_vars(spec.len()).ok_or_else(|| format!("`{spec}` is not a table of 2^n bits"))?;
        let function = BooleanFunction::from_hex(spec, n).map_err(|e| e.to_string())?;
        return Ok(Resolved { label: format!("tt:{spec}@{n}"), function });
    }
    Err(format!("`{spec}` is neither a catalog entry nor a function specification (name:, anf:, tt:)"))
}

fn by_name(name: &str, catalog: &Catalog) -> Result<Resolved, String> {
    let function = catalog.function(name).map_err(|e| e.to_string())?;
    Ok(Resolved { label: name.to_string(), function })
}

/// Smallest `n` covering every variable symbol in the ANF.
fn infer_anf_vars(text: &str) -> Result<usize, String> {
    let max = text
        .chars()
        .filter(|c| c.is_ascii_alphanumeric())
        .map(|c| c.to_digit(32).ok_or_else(|| format!("invalid variable symbol `{c}`")))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .max();
    Ok(max.map_or(0, |m| m as usize + 1))
}

/// Variable count of a bare hex table with `digits` nibbles.
fn hex_vars(digits: usize) -> Option<usize> {
    if !digits.is_power_of_two() {
        return None;
    }
    Some(digits.trailing_zeros() as usize + 2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bare_hex_width() {
        assert_eq!(hex_vars(1), Some(2));
        assert_eq!(hex_vars(4), Some(4));
        assert_eq!(hex_vars(3), None);
    }

    #[test]
    fn anf_width_inference() {
        assert_eq!(infer_anf_vars("03 + 14 + 25").unwrap(), 6);
        assert_eq!(infer_anf_vars("02b").unwrap(), 12);
        assert_eq!(infer_anf_vars("").unwrap(), 0);
    }
}
