use std::fmt;
use std::ops::{BitXor, BitXorAssign};

use crate::error::{Error, Result};

/// Largest supported variable count.
pub const MAX_VARS: usize = 32;

/// Masks selecting the table positions whose index has bit `j` clear, for the
/// six index bits that live inside one 64-bit word.
pub(crate) const LOW_HALF: [u64; 6] = [
    0x5555_5555_5555_5555,
    0x3333_3333_3333_3333,
    0x0f0f_0f0f_0f0f_0f0f,
    0x00ff_00ff_00ff_00ff,
    0x0000_ffff_0000_ffff,
    0x0000_0000_ffff_ffff,
];

/// A Boolean function `F_2^n -> F_2` stored as a packed truth table.
///
/// Vectors of `F_2^n` are `u32` values in which variable `x_i` (0-based)
/// occupies bit `n - 1 - i`, so `x_1` is the most significant bit. The table
/// bit at index `x` is `f(x)`, and 64 consecutive table bits share a word.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BooleanFunction {
    n: usize,
    words: Vec<u64>,
}

pub(crate) fn word_count(n: usize) -> usize {
    if n <= 6 {
        1
    } else {
        1 << (n - 6)
    }
}

/// Mask of the bits of the single word used when `n < 6`.
pub(crate) fn tail_mask(n: usize) -> u64 {
    if n >= 6 {
        u64::MAX
    } else {
        (1u64 << (1 << n)) - 1
    }
}

/// Swaps table positions `x` and `x ^ a` inside a word for the low six bits of `a`.
#[inline]
pub(crate) fn permute_word(mut w: u64, low: u32) -> u64 {
    for (j, &m) in LOW_HALF.iter().enumerate() {
        if (low >> j) & 1 == 1 {
            let s = 1 << j;
            w = ((w >> s) & m) | ((w & m) << s);
        }
    }
    w
}

pub(crate) fn check_vars(n: usize) -> Result<()> {
    if n > MAX_VARS {
        Err(Error::VariableCount(n))
    } else {
        Ok(())
    }
}

impl BooleanFunction {
    /// The constant zero function in `n` variables.
    pub fn zero(n: usize) -> Result<Self> {
        check_vars(n)?;
        Ok(Self { n, words: vec![0; word_count(n)] })
    }

    /// The constant one function in `n` variables.
    pub fn one(n: usize) -> Result<Self> {
        Ok(Self::zero(n)?.complement())
    }

    /// Builds a function by evaluating `f` at every point of `F_2^n`.
    pub fn from_fn(n: usize, mut f: impl FnMut(u32) -> bool) -> Result<Self> {
        let mut out = Self::zero(n)?;
        for x in 0..(1u64 << n) {
            if f(x as u32) {
                out.words[(x >> 6) as usize] |= 1 << (x & 63);
            }
        }
        Ok(out)
    }

    /// Wraps raw table words. Bits beyond `2^n` must be zero.
    pub fn from_words(n: usize, words: Vec<u64>) -> Result<Self> {
        check_vars(n)?;
        let expected = word_count(n);
        if words.len() != expected {
            return Err(Error::TableLength { expected: 1 << n, got: words.len() * 64 });
        }
        if words[0] & !tail_mask(n) != 0 {
            return Err(Error::TableLength { expected: 1 << n, got: 64 });
        }
        Ok(Self { n, words })
    }

    pub(crate) fn from_words_unchecked(n: usize, words: Vec<u64>) -> Self {
        debug_assert_eq!(words.len(), word_count(n));
        Self { n, words }
    }

    /// Builds a function from a slice of `2^n` truth values.
    pub fn from_bits(bits: &[bool]) -> Result<Self> {
        let len = bits.len();
        if !len.is_power_of_two() {
            return Err(Error::TableLength { expected: len.next_power_of_two(), got: len });
        }
        let n = len.trailing_zeros() as usize;
        Self::from_fn(n, |x| bits[x as usize])
    }

    pub fn num_vars(&self) -> usize {
        self.n
    }

    /// Number of table entries, `2^n`.
    pub fn len(&self) -> usize {
        1 << self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, x: u32) -> bool {
        debug_assert!((x as u64) < (1u64 << self.n));
        (self.words[(x >> 6) as usize] >> (x & 63)) & 1 == 1
    }

    /// Hamming weight of the truth table.
    pub fn weight(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    /// `Some(c)` when the function is the constant `c`.
    pub fn constant_value(&self) -> Option<bool> {
        match self.weight() {
            0 => Some(false),
            w if w == self.len() as u64 => Some(true),
            _ => None,
        }
    }

    pub fn is_balanced(&self) -> bool {
        self.weight() * 2 == self.len() as u64
    }

    pub fn complement(&self) -> Self {
        let mask = tail_mask(self.n);
        let words = self.words.iter().map(|w| !w & mask).collect();
        Self { n: self.n, words }
    }

    /// `x -> f(x ^ a)`.
    pub fn translate(&self, a: u32) -> Self {
        debug_assert!((a as u64) < (1u64 << self.n));
        let low = a & 63;
        let high = (a >> 6) as usize;
        let mut words = vec![0u64; self.words.len()];
        for (i, &w) in self.words.iter().enumerate() {
            words[i ^ high] = permute_word(w, low);
        }
        Self { n: self.n, words }
    }

    fn check_vector(&self, a: u32) -> Result<()> {
        if (a as u64) >> self.n != 0 {
            Err(Error::VectorWidth { vector: a as u64, n: self.n })
        } else {
            Ok(())
        }
    }

    /// First-order derivative `D_a f(x) = f(x ^ a) ^ f(x)`.
    pub fn derivative(&self, a: u32) -> Result<Self> {
        self.check_vector(a)?;
        Ok(&self.translate(a) ^ self)
    }

    /// Iterated derivative `D_{a_k} ... D_{a_1} f`.
    pub fn higher_derivative(&self, dirs: &[u32]) -> Result<Self> {
        let mut out = self.clone();
        for &a in dirs {
            out = out.derivative(a)?;
        }
        Ok(out)
    }

    /// `D_{a,b} f = D_b(D_a f)`.
    pub fn second_derivative(&self, a: u32, b: u32) -> Result<Self> {
        self.higher_derivative(&[a, b])
    }

    /// `D_{a,b} f` with the constant term of its algebraic normal form removed.
    pub fn relaxed_second_derivative(&self, a: u32, b: u32) -> Result<Self> {
        let d = self.second_derivative(a, b)?;
        // the ANF constant term of a function is its value at 0
        Ok(if d.get(0) { d.complement() } else { d })
    }

    /// `h(x, y) = f(x) ^ g(y)` where `x` takes the high-order variable block.
    pub fn direct_sum(&self, g: &BooleanFunction) -> Result<Self> {
        let n = self.n + g.n;
        check_vars(n)?;
        let m = g.n;
        if m >= 6 {
            let block = g.words.len();
            let mut words = Vec::with_capacity(word_count(n));
            for x in 0..(1u64 << self.n) {
                let flip = if self.get(x as u32) { u64::MAX } else { 0 };
                words.extend(g.words.iter().map(|w| w ^ flip));
            }
            debug_assert_eq!(words.len(), block << self.n);
            Ok(Self { n, words })
        } else {
            Self::from_fn(n, |z| self.get(z >> m) ^ g.get(z & ((1 << m) - 1)))
        }
    }

    /// `k`-fold direct sum `f(x_1) ^ ... ^ f(x_k)`.
    pub fn k_fold(&self, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::Dimension("k-fold direct sum needs k >= 1".into()));
        }
        let mut out = self.clone();
        for _ in 1..k {
            out = out.direct_sum(self)?;
        }
        Ok(out)
    }

    /// Lowercase hex of the table bits with `f(0)` as the most significant bit
    /// of the first digit. Tables shorter than four bits are zero-padded on the right.
    pub fn to_hex(&self) -> String {
        let len = self.len();
        let digits = len.div_ceil(4);
        let mut s = String::with_capacity(digits);
        for d in 0..digits {
            let mut v = 0u32;
            for k in 0..4 {
                let x = d * 4 + k;
                v <<= 1;
                if x < len && self.get(x as u32) {
                    v |= 1;
                }
            }
            s.push(char::from_digit(v, 16).expect("nibble"));
        }
        s
    }

    /// Parses the format written by [`BooleanFunction::to_hex`].
    pub fn from_hex(hex: &str, n: usize) -> Result<Self> {
        check_vars(n)?;
        let hex = hex.trim();
        let len = 1usize << n;
        let digits = len.div_ceil(4);
        if hex.len() != digits {
            return Err(Error::TableLength { expected: len, got: hex.len() * 4 });
        }
        let nibbles = hex
            .chars()
            .map(|c| c.to_digit(16).ok_or_else(|| Error::Parse(format!("invalid hex digit `{c}`"))))
            .collect::<Result<Vec<u32>>>()?;
        if len < 4 && nibbles[0] & ((1 << (4 - len)) - 1) != 0 {
            return Err(Error::Parse("padding bits of a short table must be zero".into()));
        }
        Self::from_fn(n, |x| (nibbles[(x / 4) as usize] >> (3 - x % 4)) & 1 == 1)
    }

    /// Iterator over the points where the function is one.
    pub fn support(&self) -> impl Iterator<Item = u32> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros();
                w &= w - 1;
                Some(((i as u32) << 6) | b)
            })
        })
    }
}

impl BitXor for &BooleanFunction {
    type Output = BooleanFunction;

    fn bitxor(self, rhs: &BooleanFunction) -> BooleanFunction {
        assert_eq!(self.n, rhs.n, "xor of functions with different variable counts");
        let words = self.words.iter().zip(&rhs.words).map(|(a, b)| a ^ b).collect();
        BooleanFunction { n: self.n, words }
    }
}

impl BitXorAssign<&BooleanFunction> for BooleanFunction {
    fn bitxor_assign(&mut self, rhs: &BooleanFunction) {
        assert_eq!(self.n, rhs.n, "xor of functions with different variable counts");
        for (a, b) in self.words.iter_mut().zip(&rhs.words) {
            *a ^= b;
        }
    }
}

impl fmt::Debug for BooleanFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.n <= 8 {
            write!(f, "BooleanFunction(n={}, {})", self.n, self.to_hex())
        } else {
            write!(f, "BooleanFunction(n={}, weight={})", self.n, self.weight())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn translate_matches_pointwise_definition() {
        for n in [1usize, 3, 6, 8] {
            let f = BooleanFunction::from_fn(n, |x| (x.wrapping_mul(2654435761) >> 7) & 1 == 1).unwrap();
            for a in [0u32, 1, (1 << n) - 1, 5 & ((1 << n) - 1)] {
                let t = f.translate(a);
                for x in 0..(1u32 << n) {
                    assert_eq!(t.get(x), f.get(x ^ a));
                }
            }
        }
    }

    #[test]
    fn hex_round_trip_and_bit_order() {
        // x1 x2 on two variables: only f(11) = 1
        let f = BooleanFunction::from_fn(2, |x| x == 3).unwrap();
        assert_eq!(f.to_hex(), "1");
        assert_eq!(BooleanFunction::from_hex("1", 2).unwrap(), f);
        let g = BooleanFunction::from_fn(1, |x| x == 0).unwrap();
        assert_eq!(g.to_hex(), "8");
        assert!(BooleanFunction::from_hex("9", 1).is_err());
        let h = BooleanFunction::from_fn(7, |x| x % 3 == 0).unwrap();
        assert_eq!(BooleanFunction::from_hex(&h.to_hex(), 7).unwrap(), h);
    }

    #[test]
    fn zero_derivative_direction() {
        let f = BooleanFunction::from_fn(5, |x| x.count_ones() > 2).unwrap();
        assert_eq!(f.derivative(0).unwrap().constant_value(), Some(false));
        assert!(f.derivative(32).is_err());
    }

    #[test]
    fn direct_sum_blocks() {
        let f = BooleanFunction::from_fn(3, |x| x == 5).unwrap();
        for m in [0usize, 2, 7] {
            let g = BooleanFunction::from_fn(m, |y| y.count_ones() % 2 == 1).unwrap();
            let h = f.direct_sum(&g).unwrap();
            for z in 0..(1u32 << (3 + m)) {
                assert_eq!(h.get(z), f.get(z >> m) ^ g.get(z & ((1 << m) - 1)));
            }
        }
        let zero0 = BooleanFunction::zero(0).unwrap();
        assert_eq!(f.direct_sum(&zero0).unwrap(), f);
        assert_eq!(f.k_fold(1).unwrap(), f);
    }

    #[test]
    fn bound_is_enforced() {
        assert!(BooleanFunction::zero(33).is_err());
        let f = BooleanFunction::zero(20).unwrap();
        assert!(f.direct_sum(&BooleanFunction::zero(13).unwrap()).is_err());
    }
}
