//! Configurable-precision real arithmetic and the dense LU solver.
//!
//! `Real` is an MPFR float. Every value created through a [`PrecisionContext`]
//! carries the context's binary precision, so identical operation sequences
//! under equal contexts give bitwise-identical results.

use std::fmt;

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Assign, Float};

use crate::error::{Error, Result};

/// Working real number.
pub type Real = Float;

/// Smallest accepted number of significant decimal digits.
pub const MIN_DIGITS: u32 = 30;

/// Guard digits allowed for rounding growth in a well-conditioned solve.
pub const GUARD_DIGITS: u32 = 10;

/// Binary precision such that every value prints and re-parses exactly at
/// `digits` significant decimal digits: `10^(digits-1) >= 2^bits`.
fn bits_for_digits(digits: u32) -> u32 {
    ((digits - 1) as f64 * std::f64::consts::LOG2_10).floor() as u32
}

/// Number of significant decimal digits carried by all arithmetic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrecisionContext {
    digits: u32,
    bits: u32,
}

impl PrecisionContext {
    pub fn new(digits: u32) -> Result<Self> {
        if digits < MIN_DIGITS {
            return Err(Error::InvalidPrecision(digits));
        }
        Ok(Self {
            digits,
            bits: bits_for_digits(digits),
        })
    }

    /// Working precision for results wanted to `output_digits` places:
    /// twice the output plus 20, never below 50.
    pub fn for_output_digits(output_digits: u32) -> Self {
        Self::new((2 * output_digits + 20).max(50)).expect("at least 50 digits")
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    /// Binary precision of every `Real` made by this context.
    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn zero(&self) -> Real {
        Float::new(self.bits)
    }

    pub fn one(&self) -> Real {
        self.int(1)
    }

    pub fn int(&self, v: i64) -> Real {
        Float::with_val(self.bits, v)
    }

    /// Exact ratio `num / den`, rounded once.
    pub fn ratio(&self, num: i64, den: i64) -> Real {
        Float::with_val(self.bits, num) / den
    }

    /// Convert an `f64` exactly (then rounded to context precision).
    pub fn from_f64(&self, v: f64) -> Real {
        Float::with_val(self.bits, v)
    }

    pub fn pi(&self) -> Real {
        Float::with_val(self.bits, Constant::Pi)
    }

    /// `10^exp` at context precision.
    pub fn pow10(&self, exp: i32) -> Real {
        Float::with_val(self.bits, 10).pow(exp)
    }

    /// Bring any float to this context's precision.
    pub fn adopt(&self, v: &Real) -> Real {
        Float::with_val(self.bits, v)
    }

    /// Parse a decimal string such as `-1.58807`, `0.25` or `1.5e-12`.
    pub fn parse(&self, s: &str) -> Result<Real> {
        let parsed = Float::parse(s.trim()).map_err(|_| Error::Parse(s.to_owned()))?;
        Ok(Float::with_val(self.bits, parsed))
    }

    /// Decimal-string form at full context precision.
    ///
    /// Magnitudes in `[1e-6, 1e9)` use plain positional notation; everything
    /// else uses scientific notation `d.ddd…e±X`.
    pub fn format(&self, v: &Real) -> String {
        format_decimal(v, self.digits as usize)
    }
}

/// Format `v` with `digits` significant decimal digits; see
/// [`PrecisionContext::format`].
pub fn format_decimal(v: &Real, digits: usize) -> String {
    if v.is_nan() {
        return "NaN".into();
    }
    if v.is_infinite() {
        return if v.is_sign_negative() { "-inf" } else { "inf" }.into();
    }
    if v.is_zero() {
        return "0".into();
    }
    let (neg, mantissa, exp) = v.to_sign_string_exp(10, Some(digits));
    // `mantissa` has an implied radix point before its first digit.
    let exp = exp.expect("finite non-zero value has an exponent");
    let sign = if neg { "-" } else { "" };
    // value = 0.d1d2d3… × 10^exp, so the leading digit sits at 10^(exp-1).
    let lead = exp - 1;
    if (-6..9).contains(&lead) {
        let body = if exp <= 0 {
            format!("0.{}{}", "0".repeat((-exp) as usize), mantissa)
        } else if exp as usize >= mantissa.len() {
            format!("{}{}", mantissa, "0".repeat(exp as usize - mantissa.len()))
        } else {
            let (int, frac) = mantissa.split_at(exp as usize);
            format!("{int}.{frac}")
        };
        format!("{sign}{body}")
    } else {
        let (first, rest) = mantissa.split_at(1);
        if rest.is_empty() {
            format!("{sign}{first}e{lead}")
        } else {
            format!("{sign}{first}.{rest}e{lead}")
        }
    }
}

/// Number of leading significant decimal digits on which `a` and `b` agree,
/// measured as `-log10(|a-b| / |b|)`; `b == 0` falls back to absolute error.
pub fn agreeing_digits(a: &Real, b: &Real) -> f64 {
    let diff = Float::with_val(a.prec().max(b.prec()), a - b).abs();
    if diff.is_zero() {
        return f64::INFINITY;
    }
    let scale = if b.is_zero() {
        Float::with_val(diff.prec(), 1)
    } else {
        Float::with_val(b.prec(), b.abs_ref())
    };
    let rel = diff / scale;
    -rel.log10().to_f64()
}

/// Square dense linear system `A x = b`.
#[derive(Clone, Debug)]
pub struct DenseSystem {
    matrix: Vec<Vec<Real>>,
    rhs: Vec<Real>,
}

impl DenseSystem {
    pub fn new(matrix: Vec<Vec<Real>>, rhs: Vec<Real>) -> Result<Self> {
        let n = rhs.len();
        if matrix.len() != n || matrix.iter().any(|row| row.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: matrix.len(),
            });
        }
        Ok(Self { matrix, rhs })
    }

    pub fn size(&self) -> usize {
        self.rhs.len()
    }

    pub fn matrix(&self) -> &[Vec<Real>] {
        &self.matrix
    }

    pub fn rhs(&self) -> &[Real] {
        &self.rhs
    }

    /// `A x − b`.
    pub fn residual(&self, x: &[Real]) -> Vec<Real> {
        self.matrix
            .iter()
            .zip(&self.rhs)
            .map(|(row, b)| {
                let mut acc = Float::with_val(b.prec(), 0);
                for (a, xi) in row.iter().zip(x) {
                    acc += Float::with_val(b.prec(), a * xi);
                }
                acc - b
            })
            .collect()
    }
}

impl fmt::Display for DenseSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (row, b) in self.matrix.iter().zip(&self.rhs) {
            for a in row {
                write!(f, "{:>12.4e} ", a.to_f64())?;
            }
            writeln!(f, "| {:>12.4e}", b.to_f64())?;
        }
        Ok(())
    }
}

/// Solve `A x = b` by Gaussian elimination with partial pivoting.
///
/// Only a structurally vanishing pivot (exactly zero after elimination, as
/// produced by repeated rows or an all-zero column) or a non-finite one is
/// reported as [`Error::SingularMatrix`]. Collocation matrices for large `N`
/// have pivots at the rounding floor and are still solved; the rounded
/// elimination is what keeps their iterates bounded.
pub fn lu_solve(system: &DenseSystem, ctx: &PrecisionContext) -> Result<Vec<Real>> {
    let n = system.size();
    let mut a: Vec<Vec<Real>> = system
        .matrix
        .iter()
        .map(|row| row.iter().map(|v| ctx.adopt(v)).collect())
        .collect();
    let mut b: Vec<Real> = system.rhs.iter().map(|v| ctx.adopt(v)).collect();

    let mut tmp = ctx.zero();
    for k in 0..n {
        let pivot_row = (k..n)
            .max_by(|&i, &j| {
                a[i][k]
                    .cmp_abs(&a[j][k])
                    .unwrap_or(std::cmp::Ordering::Equal)
                    // prefer the earliest row on ties
                    .then(j.cmp(&i))
            })
            .expect("non-empty range");
        if a[pivot_row][k].is_zero() || !a[pivot_row][k].is_finite() {
            return Err(Error::SingularMatrix { column: k });
        }
        a.swap(k, pivot_row);
        b.swap(k, pivot_row);

        let (upper, lower) = a.split_at_mut(k + 1);
        let pivot = &upper[k];
        for (offset, row) in lower.iter_mut().enumerate() {
            if row[k].is_zero() {
                continue;
            }
            let factor = Float::with_val(ctx.bits(), &row[k] / &pivot[k]);
            for j in k + 1..n {
                tmp.assign(&factor * &pivot[j]);
                row[j] -= &tmp;
            }
            row[k].assign(0);
            tmp.assign(&factor * &b[k]);
            b[k + 1 + offset] -= &tmp;
        }
    }

    let mut x = vec![ctx.zero(); n];
    for i in (0..n).rev() {
        let mut acc = ctx.adopt(&b[i]);
        for j in i + 1..n {
            tmp.assign(&a[i][j] * &x[j]);
            acc -= &tmp;
        }
        x[i] = acc / &a[i][i];
    }
    Ok(x)
}
