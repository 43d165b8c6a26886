//! Digit notation for ANFs and base-32 notation for vectors.

use crate::boolcore::{Anf, BooleanFunction};
use crate::error::{Error, Result};

/// Symbols for the values 0 through 31.
pub const ALPHABET: &[u8; 32] = b"0123456789abcdefghijklmnopqrstuv";

fn symbol_value(c: char) -> Option<u32> {
    let c = c.to_ascii_lowercase();
    ALPHABET.iter().position(|&s| s as char == c).map(|p| p as u32)
}

/// How a base-32 integer maps to coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub enum BitOrder {
    /// The most significant bit of the integer is `x_1` (the internal layout).
    MsbFirst,
    /// The least significant bit of the integer is `x_1`.
    LsbFirst,
}

impl BitOrder {
    /// Converts the integer value of a token into an internal vector.
    pub fn apply(self, value: u32, n: usize) -> u32 {
        match self {
            BitOrder::MsbFirst => value,
            BitOrder::LsbFirst if n == 0 => 0,
            BitOrder::LsbFirst => value.reverse_bits() >> (32 - n),
        }
    }
}

/// Big-endian base-32 integer over `0-9 a-v`, as an `n`-bit vector.
pub fn parse_base32(token: &str, n: usize) -> Result<u32> {
    decode_vector(token, n, BitOrder::MsbFirst)
}

/// Parses a base-32 token under an explicit bit order.
pub fn decode_vector(token: &str, n: usize, order: BitOrder) -> Result<u32> {
    if token.is_empty() {
        return Err(Error::Parse("empty base-32 token".into()));
    }
    let mut value: u64 = 0;
    for c in token.chars() {
        let d = symbol_value(c).ok_or_else(|| Error::Parse(format!("invalid base-32 symbol `{c}` in `{token}`")))?;
        value = value * 32 + d as u64;
        if value >> n.min(63) != 0 {
            return Err(Error::Parse(format!("`{token}` does not fit in {n} bits")));
        }
    }
    Ok(order.apply(value as u32, n))
}

/// Base-32 rendering of an integer; `0` for zero.
pub fn format_base32(mut v: u32) -> String {
    if v == 0 {
        return "0".into();
    }
    let mut out = Vec::new();
    while v > 0 {
        out.push(ALPHABET[(v % 32) as usize]);
        v /= 32;
    }
    out.reverse();
    String::from_utf8(out).expect("alphabet is ASCII")
}

/// Parses monomials such as `012 + 02a` (`⊕` also accepted) where each symbol
/// names a 0-based variable. `()` is the constant monomial.
pub fn parse_anf(s: &str, n: usize) -> Result<Anf> {
    let mut monomials: Vec<Vec<usize>> = Vec::new();
    for term in s.split(['+', '⊕']) {
        let term = term.trim();
        if term.is_empty() {
            if s.trim().is_empty() {
                continue;
            }
            return Err(Error::Parse(format!("empty monomial in `{s}`")));
        }
        if term == "()" {
            monomials.push(Vec::new());
            continue;
        }
        let mut vars = Vec::with_capacity(term.len());
        for c in term.chars() {
            let v = symbol_value(c).ok_or_else(|| Error::Parse(format!("invalid variable symbol `{c}`")))? as usize;
            if v >= n {
                return Err(Error::VariableIndex { index: v, n });
            }
            if vars.contains(&v) {
                return Err(Error::Parse(format!("variable `{c}` repeated in monomial `{term}`")));
            }
            vars.push(v);
        }
        monomials.push(vars);
    }
    Anf::from_index_sets(n, &monomials)
}

/// [`parse_anf`] evaluated to a truth table.
pub fn parse_anf_string(s: &str, n: usize) -> Result<BooleanFunction> {
    Ok(parse_anf(s, n)?.to_function())
}

/// Digit notation for an ANF, monomials ordered by degree then indices.
pub fn format_anf(anf: &Anf) -> String {
    if anf.num_vars() > ALPHABET.len() {
        return anf.to_string();
    }
    let terms: Vec<String> = anf
        .index_sets()
        .into_iter()
        .map(|set| {
            if set.is_empty() {
                "()".to_string()
            } else {
                set.into_iter().map(|i| ALPHABET[i] as char).collect()
            }
        })
        .collect();
    terms.join(" + ")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base32_values() {
        assert_eq!(parse_base32("f", 10).unwrap(), 15);
        assert_eq!(parse_base32("g3", 10).unwrap(), 515);
        assert_eq!(parse_base32("300", 12).unwrap(), 3072);
        assert!(parse_base32("w", 10).is_err());
        assert!(parse_base32("400", 12).is_err());
        assert_eq!(format_base32(3072), "300");
        assert_eq!(format_base32(528), "gg");
    }

    #[test]
    fn reversed_order() {
        // "1" is x_n under the default order and x_1 when reversed
        assert_eq!(decode_vector("1", 6, BitOrder::LsbFirst).unwrap(), 0b100000);
        assert_eq!(decode_vector("1", 6, BitOrder::MsbFirst).unwrap(), 0b000001);
    }

    #[test]
    fn digit_notation() {
        let anf = parse_anf("012", 6).unwrap();
        assert_eq!(anf.index_sets(), vec![vec![0, 1, 2]]);
        let anf = parse_anf("02a ⊕ 02b", 12).unwrap();
        assert_eq!(anf.index_sets(), vec![vec![0, 2, 10], vec![0, 2, 11]]);
        assert!(parse_anf("", 4).unwrap().is_zero());
        assert!(parse_anf("016", 6).is_err());
        assert!(parse_anf("011", 6).is_err());
        assert_eq!(format_anf(&parse_anf("3 + 012 + ()", 4).unwrap()), "() + 3 + 012");
    }
}
