//! The Thomas–Fermi problem
//!
//! ```text
//! y'' = y^(3/2) / √x,   y(0) = 1,   y(x) → 0 as x → ∞
//! ```
//!
//! solved with the boundary-embedding trial function
//!
//! ```text
//! y_N(x) = 1/(x²+1) + x/(x²+1) · Σ_{n=0}^{N} ĉ_n FB_n^α(x, L)
//! ```
//!
//! and linearized about the previous iterate `y_r` as
//!
//! ```text
//! y'' − (3/(2√x)) y_r^(1/2) y = −(1/(2√x)) y_r^(3/2).
//! ```

use std::path::Path;
use std::sync::Arc;

use rug::ops::Pow;
use rug::Float;
use serde::{Deserialize, Serialize};

use crate::basis::{FrbBasis, Jet};
use crate::bigreal::{PrecisionContext, Real};
use crate::error::{Error, Result};
use crate::grid::CollocationGrid;
use crate::qlm::{self, Ansatz, CoefficientFn, IterationTrace, LinearizedBvp, NonlinearBvp, SpectralSolution};

/// Boundary-embedding trial function for `y(0) = 1`, `y(∞) = 0`.
#[derive(Clone, Debug)]
pub struct TfAnsatz {
    basis: FrbBasis,
}

pub type TfSolution = SpectralSolution<TfAnsatz>;

impl TfAnsatz {
    pub fn new(basis: FrbBasis) -> Self {
        Self { basis }
    }

    fn ctx(&self) -> &PrecisionContext {
        self.basis.context()
    }

    /// `1/(x²+1)` with derivatives.
    fn envelope(&self, x: &Real) -> Jet {
        let bits = self.ctx().bits();
        let x2 = Float::with_val(bits, x.square_ref());
        let d = Float::with_val(bits, &x2 + 1u32);
        let inv = Float::with_val(bits, d.recip_ref());
        let inv2 = Float::with_val(bits, inv.square_ref());
        let inv3 = Float::with_val(bits, &inv2 * &inv);
        Jet {
            d1: Float::with_val(bits, x * &inv2) * -2i32,
            d2: Float::with_val(bits, Float::with_val(bits, &x2 * 6u32) - 2u32) * inv3,
            value: inv,
        }
    }

    /// `x/(x²+1)` with derivatives.
    fn multiplier(&self, x: &Real) -> Jet {
        let bits = self.ctx().bits();
        let x2 = Float::with_val(bits, x.square_ref());
        let d = Float::with_val(bits, &x2 + 1u32);
        let inv = Float::with_val(bits, d.recip_ref());
        let inv2 = Float::with_val(bits, inv.square_ref());
        let inv3 = Float::with_val(bits, &inv2 * &inv);
        let value = Float::with_val(bits, x * &inv);
        let d1 = Float::with_val(bits, 1u32 - &x2) * inv2;
        // (2x³ − 6x) / (x²+1)³
        let d2 = Float::with_val(bits, Float::with_val(bits, &x2 * 2u32) - 6u32) * x * inv3;
        Jet { value, d1, d2 }
    }
}

impl Ansatz for TfAnsatz {
    fn basis(&self) -> &FrbBasis {
        &self.basis
    }

    fn particular(&self, x: &Real) -> Jet {
        self.envelope(x)
    }

    fn terms(&self, x: &Real) -> Result<Vec<Jet>> {
        let g = self.multiplier(x);
        Ok(self.basis.eval_all(x)?.iter().map(|fb| g.mul(fb)).collect())
    }

    fn term_values(&self, x: &Real) -> Result<Vec<Real>> {
        let g = self.multiplier(x).value;
        Ok(self.basis.eval_values(x)?.into_iter().map(|v| v * &g).collect())
    }

    /// The envelope is flat at 0, and `x/(x²+1) · Σ ĉ_n FB_n` behaves like a
    /// sum of powers `x^(1+αk)`, `k` the power of `t` in `FB_n`. Differentiated,
    /// only `k = 0` survives as `x → 0`.
    fn slope_at_origin(&self, coeffs: &[Real]) -> Result<Real> {
        let ctx = self.ctx();
        let alpha = self.basis.alpha();
        let mut slope = ctx.zero();
        for (n, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for r in 0..=(self.basis.order() - n) / 2 {
                let k = 2 * r + n;
                // exponent of x after differentiating x^(1 + αk)
                let exponent = Float::with_val(ctx.bits(), alpha * k as u32);
                if exponent < 0 {
                    return Err(Error::Domain(format!(
                        "y'(0) diverges: term x^{exponent} from FB_{n}"
                    )));
                }
                if exponent.is_zero() {
                    // the t^k coefficient of B_n equals B_n(0) when k = 0
                    slope += Float::with_val(ctx.bits(), c * self.basis.bessel_poly(n, &ctx.zero()));
                }
            }
        }
        Ok(slope)
    }
}

/// The Thomas–Fermi problem with its QLM linearization.
#[derive(Clone, Debug)]
pub struct ThomasFermi {
    ansatz: TfAnsatz,
}

impl ThomasFermi {
    pub fn new(basis: FrbBasis) -> Self {
        Self {
            ansatz: TfAnsatz::new(basis),
        }
    }

    pub fn basis(&self) -> &FrbBasis {
        &self.ansatz.basis
    }

    /// Solve on the standard grid for the basis order.
    pub fn solve(&self, iterations: usize) -> Result<(TfSolution, IterationTrace)> {
        let ctx = *self.basis().context();
        let grid = CollocationGrid::build(self.basis().order(), &ctx);
        qlm::qlm_iterate(self, iterations, &grid, &ctx)
    }
}

impl NonlinearBvp for ThomasFermi {
    type Ansatz = TfAnsatz;

    fn ansatz(&self) -> &TfAnsatz {
        &self.ansatz
    }

    /// `y_0(x) = 1`.
    fn initial_iterate(&self) -> CoefficientFn {
        let one = self.ansatz.ctx().one();
        Arc::new(move |_| one.clone())
    }

    fn linearize(&self, previous: CoefficientFn) -> LinearizedBvp {
        linearize(previous, self.ansatz.ctx())
    }

    fn is_admissible(&self, value: &Real) -> bool {
        !value.is_sign_negative() || value.is_zero()
    }
}

/// QLM linearization about `previous`: `p = 0`,
/// `q = −3/(2√x) · √y_r`, `f = −1/(2√x) · y_r^(3/2)`.
///
/// Negative values of the previous iterate are clamped to zero.
pub fn linearize(previous: CoefficientFn, ctx: &PrecisionContext) -> LinearizedBvp {
    let bits = ctx.bits();
    let clamp = {
        let previous = previous.clone();
        move |x: &Real| {
            let y = previous(x);
            if y.is_sign_negative() {
                Float::new(bits)
            } else {
                y
            }
        }
    };
    let clamp = Arc::new(clamp);
    let q_src = clamp.clone();
    let q: CoefficientFn = Arc::new(move |x: &Real| {
        let root_y = q_src(x).sqrt();
        let two_root_x = Float::with_val(bits, x.sqrt_ref()) * 2u32;
        -(root_y * 3u32 / two_root_x)
    });
    let f: CoefficientFn = Arc::new(move |x: &Real| {
        let y = clamp(x);
        let y32 = Float::with_val(bits, &y * Float::with_val(bits, y.sqrt_ref()));
        let two_root_x = Float::with_val(bits, x.sqrt_ref()) * 2u32;
        -(y32 / two_root_x)
    });
    let p: CoefficientFn = Arc::new(move |_| Float::new(bits));
    LinearizedBvp { p, q, f }
}

impl SpectralSolution<TfAnsatz> {
    /// `y(x)` (order 0) or `y'(x)` (order 1) for `x ≥ 0`; order 2 needs `x > 0`.
    pub fn eval(&self, x: &Real, order: u32) -> Result<Real> {
        if x.is_sign_negative() && !x.is_zero() {
            return Err(Error::Domain(format!("x must be >= 0, got {x}")));
        }
        match order {
            0 => self.value(x),
            1 if x.is_zero() => self.slope_at_origin(),
            1 => Ok(self.jet(x)?.d1),
            2 => Ok(self.jet(x)?.d2),
            _ => Err(Error::Domain(format!("derivative order {order} is not 0, 1 or 2"))),
        }
    }

    /// `|y'' − y^(3/2)/√x|` at each probe point (`x > 0`); negative `y` is
    /// clamped to zero before the power.
    pub fn residual_profile(&self, probe: &[Real]) -> Result<Vec<Real>> {
        let bits = self.context().bits();
        probe
            .iter()
            .map(|x| {
                if x.is_sign_negative() || x.is_zero() {
                    return Err(Error::Domain(format!("residual probe needs x > 0, got {x}")));
                }
                let jet = self.jet(x)?;
                let y = if jet.value.is_sign_negative() {
                    Float::new(bits)
                } else {
                    jet.value
                };
                let y32 = Float::with_val(bits, &y * Float::with_val(bits, y.sqrt_ref()));
                let rhs = y32 / Float::with_val(bits, x.sqrt_ref());
                Ok((jet.d2 - rhs).abs())
            })
            .collect()
    }

    pub fn to_document(&self) -> SolutionDocument {
        let ctx = self.context();
        let basis = self.basis();
        SolutionDocument {
            n: basis.order(),
            alpha: ctx.format(basis.alpha()),
            l: ctx.format(basis.scale()),
            digits: ctx.digits(),
            iterations: self.iterations(),
            coeffs: self.coeffs().iter().map(|c| ctx.format(c)).collect(),
        }
    }

    pub fn from_document(doc: &SolutionDocument) -> Result<Self> {
        let ctx = PrecisionContext::new(doc.digits)?;
        let alpha = ctx.parse(&doc.alpha)?;
        let scale = ctx.parse(&doc.l)?;
        let basis = FrbBasis::new(doc.n, alpha, scale, &ctx)?;
        if doc.coeffs.len() != basis.size() {
            return Err(Error::InvalidSolution(format!(
                "expected {} coefficients for N = {}, found {}",
                basis.size(),
                doc.n,
                doc.coeffs.len()
            )));
        }
        let coeffs = doc
            .coeffs
            .iter()
            .map(|s| ctx.parse(s))
            .collect::<Result<Vec<_>>>()?;
        SpectralSolution::new(coeffs, TfAnsatz::new(basis), doc.iterations, &ctx)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(&self.to_document())?;
        text.push('\n');
        std::fs::write(path, text)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let doc: SolutionDocument = serde_json::from_str(&text)?;
        Self::from_document(&doc)
    }
}

/// Persisted form of a solution; all reals are decimal strings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolutionDocument {
    #[serde(rename = "N")]
    pub n: usize,
    pub alpha: String,
    #[serde(rename = "L")]
    pub l: String,
    pub digits: u32,
    pub iterations: usize,
    pub coeffs: Vec<String>,
}

/// Energy of a neutral atom, `E = (6/7)(4π/3)^(2/3) Z^(7/3) y'(0)`.
pub fn energy(charge: &Real, slope: &Real, ctx: &PrecisionContext) -> Result<Real> {
    if !(charge.is_finite() && *charge > 0) {
        return Err(Error::Domain(format!("nuclear charge must be positive, got {charge}")));
    }
    let base = ctx.pi() * 4u32 / 3u32;
    let geometric = base.pow(ctx.ratio(2, 3));
    let charge_power = ctx.adopt(charge).pow(ctx.ratio(7, 3));
    Ok(ctx.ratio(6, 7) * geometric * charge_power * slope)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(50).unwrap()
    }

    fn problem(order: usize) -> ThomasFermi {
        let c = ctx();
        ThomasFermi::new(FrbBasis::new(order, c.ratio(1, 2), c.one(), &c).unwrap())
    }

    fn zero_solution(order: usize) -> TfSolution {
        let c = ctx();
        let p = problem(order);
        SpectralSolution::new(vec![c.zero(); order + 1], p.ansatz, 0, &c).unwrap()
    }

    #[test]
    fn linearize_about_one() {
        let c = ctx();
        let lin = problem(4).linearize(problem(4).initial_iterate());
        assert_eq!((lin.q)(&c.int(4)), c.ratio(-3, 4));
        assert_eq!((lin.f)(&c.int(4)), c.ratio(-1, 4));
        assert_eq!((lin.q)(&c.one()), c.ratio(-3, 2));
        assert_eq!((lin.f)(&c.one()), c.ratio(-1, 2));
        assert!((lin.p)(&c.one()).is_zero());
    }

    #[test]
    fn linearize_about_zero_and_negative() {
        let c = ctx();
        for v in [0, -3] {
            let prev: CoefficientFn = {
                let v = c.int(v);
                Arc::new(move |_| v.clone())
            };
            let lin = linearize(prev, &c);
            assert!((lin.q)(&c.int(7)).is_zero());
            assert!((lin.f)(&c.int(7)).is_zero());
        }
        let p = problem(2);
        assert!(!p.is_admissible(&c.int(-1)));
        assert!(p.is_admissible(&c.zero()));
    }

    #[test]
    fn envelope_only_solution() {
        let c = ctx();
        let sol = zero_solution(3);
        assert_eq!(sol.eval(&c.one(), 0).unwrap(), c.ratio(1, 2));
        assert_eq!(sol.eval(&c.zero(), 0).unwrap(), c.one());
        assert!(sol.eval(&c.zero(), 1).unwrap().is_zero());
        // d²/dx² (1/(x²+1)) at x = 1 is (6 − 2)/8 = 1/2
        assert_eq!(sol.eval(&c.one(), 2).unwrap(), c.ratio(1, 2));
        let res = sol.residual_profile(&[c.one()]).unwrap();
        let expected = c.ratio(1, 2) - c.ratio(1, 2).pow(c.ratio(3, 2));
        assert!((res[0].clone() - expected).abs() < c.pow10(-45));
        assert!(sol.residual_profile(&[c.zero()]).is_err());
        assert!(sol.eval(&c.int(-1), 0).is_err());
    }

    #[test]
    fn slope_is_first_coefficient_for_half_alpha() {
        let c = ctx();
        let p = problem(5);
        let coeffs: Vec<Real> = (0..6).map(|i| c.ratio(i * 7 - 11, 3)).collect();
        let sol = SpectralSolution::new(coeffs.clone(), p.ansatz, 1, &c).unwrap();
        assert_eq!(sol.slope_at_origin().unwrap(), coeffs[0]);
    }

    #[test]
    fn energy_values() {
        let c = ctx();
        assert!(energy(&c.one(), &c.zero(), &c).unwrap().is_zero());
        let e1 = energy(&c.one(), &c.int(-1), &c).unwrap();
        assert!((e1.to_f64() + 2.2274).abs() < 1e-4, "{e1}");
        let e2 = energy(&c.int(2), &c.int(-1), &c).unwrap();
        let ratio = e2 / e1;
        let expected = c.int(2).pow(c.ratio(7, 3));
        assert!((ratio - expected).abs() < c.pow10(-45));
        assert!(energy(&c.zero(), &c.one(), &c).is_err());
    }

    #[test]
    fn document_round_trip() {
        let c = ctx();
        let p = problem(3);
        let coeffs: Vec<Real> = (0..4).map(|i| c.ratio(1, 3 + i)).collect();
        let sol = SpectralSolution::new(coeffs, p.ansatz, 7, &c).unwrap();
        let doc = sol.to_document();
        assert_eq!(doc.n, 3);
        let back = TfSolution::from_document(&doc).unwrap();
        assert_eq!(back.coeffs(), sol.coeffs());
        assert_eq!(back.iterations(), 7);
        assert_eq!(back.basis().alpha(), sol.basis().alpha());

        let mut bad = doc.clone();
        bad.coeffs.pop();
        assert!(TfSolution::from_document(&bad).is_err());
        let mut bad = doc;
        bad.alpha = "-1".into();
        assert!(TfSolution::from_document(&bad).is_err());
    }

    #[test]
    fn single_iteration_embeds_boundary() {
        let c = ctx();
        let (sol, trace) = problem(6).solve(1).unwrap();
        assert_eq!(trace.len(), 1);
        assert_eq!(sol.eval(&c.zero(), 0).unwrap(), c.one());
        assert!(sol.eval(&c.pow10(12), 0).unwrap().abs() < c.pow10(-8));
    }
}
