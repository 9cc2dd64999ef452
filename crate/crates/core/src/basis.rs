//! Truncated Bessel polynomials and the fractional rational Bessel (FRB)
//! functions built from them through the map `t(x) = x^α / (x^α + L)`.
//!
//! The Bessel polynomial of index `n` is truncated by the *global* order `N`
//! of the family:
//!
//! ```text
//! B_n(t) = Σ_{r=0}^{⌊(N-n)/2⌋} (-1)^r / (r! (n+r)!) · (t/2)^(2r+n)
//! ```
//!
//! so every member is a polynomial of degree at most `N` in `t`.

use rug::ops::Pow;
use rug::Float;

use crate::bigreal::{PrecisionContext, Real};
use crate::error::{Error, Result};

/// Value with its first two derivatives.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet {
    pub value: Real,
    pub d1: Real,
    pub d2: Real,
}

impl Jet {
    pub fn constant(value: Real) -> Self {
        let zero = Float::new(value.prec());
        Self {
            value,
            d1: zero.clone(),
            d2: zero,
        }
    }

    /// Product rule through second order.
    pub fn mul(&self, other: &Jet) -> Jet {
        let p = self.value.prec();
        let value = Float::with_val(p, &self.value * &other.value);
        let d1 = Float::with_val(p, &self.d1 * &other.value) + &self.value * &other.d1;
        let mut d2 = Float::with_val(p, &self.d2 * &other.value);
        d2 += Float::with_val(p, &self.d1 * &other.d1) * 2u32;
        d2 += &self.value * &other.d2;
        Jet { value, d1, d2 }
    }
}

/// A map derivative that may be a one-sided infinity at the origin.
#[derive(Clone, Debug, PartialEq)]
pub enum MapDerivative {
    Finite(Real),
    PosInfinite,
    NegInfinite,
}

impl MapDerivative {
    pub fn finite(&self) -> Option<&Real> {
        match self {
            MapDerivative::Finite(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        !matches!(self, MapDerivative::Finite(_))
    }
}

/// An abscissa together with its image under the algebraic map.
#[derive(Clone, Debug, PartialEq)]
pub struct MapPoint {
    pub x: Real,
    pub t: Real,
    /// `dt/dx = α L x^(α-1) / (x^α + L)^2`, the weight of the FRB family.
    pub dt_dx: MapDerivative,
    pub d2t_dx2: MapDerivative,
}

/// The truncated FRB family `{FB_n^α(x, L)}`, `n = 0..=N`.
#[derive(Clone, Debug)]
pub struct FrbBasis {
    order: usize,
    alpha: Real,
    scale: Real,
    ctx: PrecisionContext,
    /// `coeffs[n][r]` multiplies `t^(2r+n)` in `B_n`.
    coeffs: Vec<Vec<Real>>,
}

impl FrbBasis {
    pub fn new(order: usize, alpha: Real, scale: Real, ctx: &PrecisionContext) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0) {
            return Err(Error::InvalidBasis(format!("alpha must be positive, got {alpha}")));
        }
        if !(scale.is_finite() && scale > 0) {
            return Err(Error::InvalidBasis(format!("L must be positive, got {scale}")));
        }
        let factorials = factorial_table(order, ctx);
        let coeffs = (0..=order)
            .map(|n| {
                (0..=(order - n) / 2)
                    .map(|r| {
                        let k = 2 * r + n;
                        let denom = Float::with_val(ctx.bits(), &factorials[r] * &factorials[n + r]);
                        let mut c = ctx.one() / denom;
                        c >>= k as u32;
                        if r % 2 == 1 {
                            c = -c;
                        }
                        c
                    })
                    .collect()
            })
            .collect();
        Ok(Self {
            order,
            alpha: ctx.adopt(&alpha),
            scale: ctx.adopt(&scale),
            ctx: *ctx,
            coeffs,
        })
    }

    /// Truncation order `N`.
    pub fn order(&self) -> usize {
        self.order
    }

    /// Number of members, `N + 1`.
    pub fn size(&self) -> usize {
        self.order + 1
    }

    pub fn alpha(&self) -> &Real {
        &self.alpha
    }

    pub fn scale(&self) -> &Real {
        &self.scale
    }

    pub fn context(&self) -> &PrecisionContext {
        &self.ctx
    }

    /// `B_n(t)` and its first two `t`-derivatives for every `n`.
    pub fn bessel_jets(&self, t: &Real) -> Vec<Jet> {
        let ctx = &self.ctx;
        let powers = self.powers(t);
        self.coeffs
            .iter()
            .enumerate()
            .map(|(n, row)| {
                let mut jet = Jet::constant(ctx.zero());
                for (r, c) in row.iter().enumerate() {
                    let k = 2 * r + n;
                    jet.value += Float::with_val(ctx.bits(), c * &powers[k]);
                    if k >= 1 {
                        jet.d1 += Float::with_val(ctx.bits(), c * &powers[k - 1]) * k as u32;
                    }
                    if k >= 2 {
                        jet.d2 += Float::with_val(ctx.bits(), c * &powers[k - 2]) * (k * (k - 1)) as u32;
                    }
                }
                jet
            })
            .collect()
    }

    /// `B_n(t)` for a single index.
    pub fn bessel_poly(&self, n: usize, t: &Real) -> Real {
        let Some(row) = self.coeffs.get(n) else {
            return self.ctx.zero();
        };
        let mut acc = self.ctx.zero();
        for (r, c) in row.iter().enumerate() {
            acc += Float::with_val(self.ctx.bits(), t.pow((2 * r + n) as u32)) * c;
        }
        acc
    }

    /// `d^order B_n / dt^order` for `order` 1 or 2.
    pub fn bessel_poly_deriv(&self, n: usize, t: &Real, order: u32) -> Result<Real> {
        if !(1..=2).contains(&order) {
            return Err(Error::Domain(format!("derivative order {order} is not 1 or 2")));
        }
        let Some(row) = self.coeffs.get(n) else {
            return Ok(self.ctx.zero());
        };
        let mut acc = self.ctx.zero();
        for (r, c) in row.iter().enumerate() {
            let k = (2 * r + n) as u32;
            if k < order {
                continue;
            }
            let falling = if order == 1 { k } else { k * (k - 1) };
            let term = Float::with_val(self.ctx.bits(), t.pow(k - order)) * c;
            acc += term * falling;
        }
        Ok(acc)
    }

    /// Image of `x ≥ 0` under the map, with closed-form derivatives.
    pub fn map_point(&self, x: &Real) -> Result<MapPoint> {
        let ctx = &self.ctx;
        if x.is_sign_negative() && !x.is_zero() || !x.is_finite() {
            return Err(Error::Domain(format!("map needs finite x >= 0, got {x}")));
        }
        let x = ctx.adopt(x);
        if x.is_zero() {
            let one = ctx.one();
            let two = ctx.int(2);
            let dt = match self.alpha.partial_cmp(&one) {
                Some(std::cmp::Ordering::Less) => MapDerivative::PosInfinite,
                Some(std::cmp::Ordering::Equal) => MapDerivative::Finite(ctx.one() / &self.scale),
                _ => MapDerivative::Finite(ctx.zero()),
            };
            // Leading behaviour of d²t/dx² near 0 is α(α-1) x^(α-2) / L.
            let d2t = if self.alpha < one {
                MapDerivative::NegInfinite
            } else if self.alpha == one {
                let l2 = Float::with_val(ctx.bits(), self.scale.square_ref());
                MapDerivative::Finite(-(ctx.int(2) / l2))
            } else if self.alpha < two {
                MapDerivative::PosInfinite
            } else if self.alpha == two {
                MapDerivative::Finite(ctx.int(2) / &self.scale)
            } else {
                MapDerivative::Finite(ctx.zero())
            };
            return Ok(MapPoint {
                t: ctx.zero(),
                x,
                dt_dx: dt,
                d2t_dx2: d2t,
            });
        }
        let xa = Float::with_val(ctx.bits(), (&x).pow(&self.alpha));
        let denom = Float::with_val(ctx.bits(), &xa + &self.scale);
        let t = Float::with_val(ctx.bits(), &xa / &denom);
        // dt/dx = α L x^α / (x (x^α + L)^2)
        let denom2 = Float::with_val(ctx.bits(), denom.square_ref());
        let dt = Float::with_val(ctx.bits(), &self.alpha * &self.scale) * &xa / (denom2 * &x);
        // d²t/dx² = dt/dx · ((α-1)/x − 2α x^(α-1)/(x^α + L))
        let am1 = Float::with_val(ctx.bits(), &self.alpha - 1u32);
        let first = Float::with_val(ctx.bits(), &am1 / &x);
        let second = Float::with_val(ctx.bits(), &self.alpha * 2u32) * &xa / (Float::with_val(ctx.bits(), &x * &denom));
        let d2t = Float::with_val(ctx.bits(), &dt * (first - second));
        Ok(MapPoint {
            x,
            t,
            dt_dx: MapDerivative::Finite(dt),
            d2t_dx2: MapDerivative::Finite(d2t),
        })
    }

    /// Value, first and second `x`-derivative of every `FB_n` at `x > 0`.
    pub fn eval_all(&self, x: &Real) -> Result<Vec<Jet>> {
        let mp = self.map_point(x)?;
        let (Some(dt), Some(d2t)) = (mp.dt_dx.finite(), mp.d2t_dx2.finite()) else {
            return Err(Error::Domain(format!(
                "FRB derivatives are singular at x = 0 for alpha = {}",
                self.alpha
            )));
        };
        let dt2 = Float::with_val(self.ctx.bits(), dt.square_ref());
        Ok(self
            .bessel_jets(&mp.t)
            .into_iter()
            .map(|b| Jet {
                d2: Float::with_val(self.ctx.bits(), &b.d2 * &dt2) + &b.d1 * d2t,
                d1: Float::with_val(self.ctx.bits(), &b.d1 * dt),
                value: b.value,
            })
            .collect())
    }

    /// Values of every `FB_n` at `x ≥ 0`.
    pub fn eval_values(&self, x: &Real) -> Result<Vec<Real>> {
        let mp = self.map_point(x)?;
        let powers = self.powers(&mp.t);
        Ok(self
            .coeffs
            .iter()
            .enumerate()
            .map(|(n, row)| {
                let mut acc = self.ctx.zero();
                for (r, c) in row.iter().enumerate() {
                    acc += Float::with_val(self.ctx.bits(), c * &powers[2 * r + n]);
                }
                acc
            })
            .collect())
    }

    /// `t^0 ..= t^N`.
    fn powers(&self, t: &Real) -> Vec<Real> {
        let mut powers = Vec::with_capacity(self.order + 1);
        powers.push(self.ctx.one());
        for k in 1..=self.order {
            powers.push(Float::with_val(self.ctx.bits(), &powers[k - 1] * t));
        }
        powers
    }

    /// `FB_n^α(x, L)` or one of its first two derivatives.
    pub fn frb_eval(&self, n: usize, x: &Real, order: u32) -> Result<Real> {
        let mp = self.map_point(x)?;
        if order == 0 {
            return Ok(self.bessel_poly(n, &mp.t));
        }
        if order > 2 {
            return Err(Error::Domain(format!("derivative order {order} is not 0, 1 or 2")));
        }
        let singular = || {
            Error::Domain(format!(
                "derivative of FB_{n} is singular at x = 0 for alpha = {}",
                self.alpha
            ))
        };
        let dt = mp.dt_dx.finite().ok_or_else(singular)?;
        let b1 = self.bessel_poly_deriv(n, &mp.t, 1)?;
        if order == 1 {
            return Ok(b1 * dt);
        }
        let d2t = mp.d2t_dx2.finite().ok_or_else(singular)?;
        let b2 = self.bessel_poly_deriv(n, &mp.t, 2)?;
        Ok(b2 * Float::with_val(self.ctx.bits(), dt.square_ref()) + b1 * d2t)
    }

    /// Upper bound `Σ_r 1/(r!(n+r)!) · (1/2)^(2r+n)` on `|FB_n|` over `t ∈ [0, 1)`.
    pub fn magnitude_bound(&self, n: usize) -> Real {
        self.coeffs
            .get(n)
            .map(|row| row.iter().fold(self.ctx.zero(), |acc, c| acc + Float::with_val(self.ctx.bits(), c.abs_ref())))
            .unwrap_or_else(|| self.ctx.zero())
    }
}

fn factorial_table(order: usize, ctx: &PrecisionContext) -> Vec<Real> {
    let mut out = Vec::with_capacity(order + 1);
    let mut acc = rug::Integer::from(1);
    out.push(Float::with_val(ctx.bits(), &acc));
    for k in 1..=order {
        acc *= k as u32;
        out.push(Float::with_val(ctx.bits(), &acc));
    }
    out
}
