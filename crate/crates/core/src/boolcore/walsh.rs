use super::function::BooleanFunction;

/// Walsh spectrum `W_f(u) = sum_x (-1)^(f(x) + u.x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WalshSpectrum {
    n: usize,
    values: Vec<i64>,
}

impl WalshSpectrum {
    pub fn num_vars(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    /// Sum of squares; equals `2^(2n)` by Parseval.
    pub fn energy(&self) -> i128 {
        self.values.iter().map(|&v| (v as i128) * (v as i128)).sum()
    }

    pub fn max_abs(&self) -> i64 {
        self.values.iter().map(|v| v.abs()).max().unwrap_or(0)
    }

    /// True iff every coefficient has absolute value `2^(n/2)`.
    pub fn is_flat(&self) -> bool {
        if self.n % 2 != 0 {
            return false;
        }
        let target = 1i64 << (self.n / 2);
        self.values.iter().all(|v| v.abs() == target)
    }
}

impl BooleanFunction {
    /// Fast Walsh-Hadamard transform of `(-1)^f`.
    pub fn walsh(&self) -> WalshSpectrum {
        let n = self.num_vars();
        let mut values: Vec<i64> = (0..self.len() as u64).map(|x| if self.get(x as u32) { -1 } else { 1 }).collect();
        let mut h = 1;
        while h < values.len() {
            for base in (0..values.len()).step_by(2 * h) {
                for i in base..base + h {
                    let (a, b) = (values[i], values[i + h]);
                    values[i] = a + b;
                    values[i + h] = a - b;
                }
            }
            h <<= 1;
        }
        WalshSpectrum { n, values }
    }

    /// Bentness via Walsh flatness. Odd `n` (and `n = 0`) is never bent.
    pub fn is_bent(&self) -> bool {
        let n = self.num_vars();
        n > 0 && n % 2 == 0 && self.walsh().is_flat()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spectrum_of_linear_function_is_a_spike() {
        // f = x1 + x3 on three variables, vector mask 0b101
        let f = BooleanFunction::from_fn(3, |x| (x & 0b101).count_ones() % 2 == 1).unwrap();
        let w = f.walsh();
        for u in 0..8 {
            let expected = if u == 0b101 { 8 } else { 0 };
            assert_eq!(w.values()[u], expected);
        }
    }

    #[test]
    fn constant_is_not_bent() {
        assert!(!BooleanFunction::zero(2).unwrap().is_bent());
        assert!(!BooleanFunction::from_fn(3, |x| x == 7).unwrap().is_bent());
    }
}
