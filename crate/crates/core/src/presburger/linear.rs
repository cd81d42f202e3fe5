use std::fmt;

use num_integer::Integer;

use super::PresburgerError;

/// Affine form `Σ coeffs[j]·ℓ_{j+1} + constant` with integer coefficients.
///
/// Trailing zero coefficients are trimmed, so two equal forms compare equal
/// regardless of how many variables they were built over.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct LinearForm {
    coeffs: Vec<i64>,
    constant: i64,
}

fn overflow() -> PresburgerError {
    PresburgerError::Overflow
}

impl LinearForm {
    pub fn new(coeffs: Vec<i64>, constant: i64) -> Self {
        let mut f = LinearForm { coeffs, constant };
        f.trim();
        f
    }

    pub fn constant(c: i64) -> Self {
        LinearForm {
            coeffs: Vec::new(),
            constant: c,
        }
    }

    /// The variable `ℓ_{j+1}`.
    pub fn var(j: usize) -> Self {
        let mut coeffs = vec![0; j + 1];
        coeffs[j] = 1;
        LinearForm {
            coeffs,
            constant: 0,
        }
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn constant_term(&self) -> i64 {
        self.constant
    }

    pub fn coeff(&self, j: usize) -> i64 {
        self.coeffs.get(j).copied().unwrap_or(0)
    }

    /// One more than the largest variable index with a nonzero coefficient.
    pub fn var_bound(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn mentions(&self, j: usize) -> bool {
        self.coeff(j) != 0
    }

    /// Value at `point`; missing coordinates count as zero.
    pub fn eval(&self, point: &[i64]) -> i128 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(j, &a)| i128::from(a) * i128::from(point.get(j).copied().unwrap_or(0)))
            .sum::<i128>()
            + i128::from(self.constant)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, PresburgerError> {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|j| {
                self.coeff(j)
                    .checked_add(other.coeff(j))
                    .ok_or_else(overflow)
            })
            .collect::<Result<_, _>>()?;
        let constant = self
            .constant
            .checked_add(other.constant)
            .ok_or_else(overflow)?;
        Ok(LinearForm::new(coeffs, constant))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, PresburgerError> {
        self.checked_add(&other.checked_scale(-1)?)
    }

    pub fn checked_scale(&self, k: i64) -> Result<Self, PresburgerError> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|&a| a.checked_mul(k).ok_or_else(overflow))
            .collect::<Result<_, _>>()?;
        let constant = self.constant.checked_mul(k).ok_or_else(overflow)?;
        Ok(LinearForm::new(coeffs, constant))
    }

    pub fn checked_add_constant(&self, c: i64) -> Result<Self, PresburgerError> {
        let mut out = self.clone();
        out.constant = out.constant.checked_add(c).ok_or_else(overflow)?;
        Ok(out)
    }

    /// Copy with the coefficient of `ℓ_{j+1}` set to `a`.
    pub fn with_coeff(&self, j: usize, a: i64) -> Self {
        let mut coeffs = self.coeffs.clone();
        if coeffs.len() <= j {
            coeffs.resize(j + 1, 0);
        }
        coeffs[j] = a;
        LinearForm::new(coeffs, self.constant)
    }

    /// Replaces `ℓ_{j+1}` by `value`.
    pub fn substitute(&self, j: usize, value: &LinearForm) -> Result<Self, PresburgerError> {
        let a = self.coeff(j);
        if a == 0 {
            return Ok(self.clone());
        }
        self.with_coeff(j, 0).checked_add(&value.checked_scale(a)?)
    }

    /// Gcd of the variable coefficients (0 for a constant form).
    pub fn content(&self) -> i64 {
        self.coeffs.iter().fold(0i64, |g, &a| g.gcd(&a))
    }

    /// Renames variables through `map` (`map[j]` is the new index of `j`).
    pub fn rename(&self, map: &[usize]) -> Self {
        let n = map.iter().copied().max().map_or(0, |m| m + 1);
        let mut coeffs = vec![0; n];
        for (j, &a) in self.coeffs.iter().enumerate() {
            coeffs[map[j]] += a;
        }
        LinearForm::new(coeffs, self.constant)
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            let mag = a.unsigned_abs();
            match (first, a < 0) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            if mag != 1 {
                write!(f, "{mag}*")?;
            }
            write!(f, "l{}", j + 1)?;
            first = false;
        }
        if first {
            write!(f, "{}", self.constant)
        } else {
            match self.constant {
                0 => Ok(()),
                c if c < 0 => write!(f, " - {}", c.unsigned_abs()),
                c => write!(f, " + {c}"),
            }
        }
    }
}
