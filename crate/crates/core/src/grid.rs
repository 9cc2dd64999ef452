//! Collocation abscissas: roots of the rational Chebyshev function of order
//! `N + 1` on `[0, ∞)`,
//!
//! ```text
//! x_i = (1 − cos θ_i) / (1 + cos θ_i),   θ_i = (2i − 1)π / (2N + 2),   i = 1..=N+1
//! ```
//!
//! The formula has no scale parameter; the grid is the same for every `L`.

use std::io::Write;

use rug::Float;

use crate::bigreal::{PrecisionContext, Real};
use crate::error::Result;

#[derive(Clone, Debug, PartialEq)]
pub struct CollocationGrid {
    order: usize,
    points: Vec<Real>,
}

impl CollocationGrid {
    pub fn build(order: usize, ctx: &PrecisionContext) -> Self {
        let pi = ctx.pi();
        let denom = 2 * order as u32 + 2;
        let mut points: Vec<Real> = (1..=order as u32 + 1)
            .map(|i| {
                if 2 * (2 * i - 1) == denom {
                    // θ = π/2 maps to exactly 1
                    return ctx.one();
                }
                let theta = Float::with_val(ctx.bits(), &pi * (2 * i - 1)) / denom;
                let cos = theta.cos();
                Float::with_val(ctx.bits(), 1u32 - &cos) / (cos + 1u32)
            })
            .collect();
        points.sort_by(|a, b| a.partial_cmp(b).expect("finite grid points"));
        Self { order, points }
    }

    /// Truncation order `N` the grid was built for.
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Real] {
        &self.points
    }

    /// Diagnostic dump: `index,x` with 1-based indices, full precision.
    pub fn write_csv<W: Write>(&self, out: &mut W, ctx: &PrecisionContext) -> Result<()> {
        writeln!(out, "index,x")?;
        for (i, x) in self.points.iter().enumerate() {
            writeln!(out, "{},{}", i + 1, ctx.format(x))?;
        }
        Ok(())
    }
}

/// Build the `N + 1` collocation points for truncation order `N`.
pub fn build_grid(order: usize, ctx: &PrecisionContext) -> CollocationGrid {
    CollocationGrid::build(order, ctx)
}
