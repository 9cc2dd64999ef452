#![allow(dead_code)]

use frbc::{FrbBasis, PrecisionContext, Real, TfAnsatz, TfSolution};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::ops::Pow;
use rug::Float;

pub fn half_basis(order: usize, ctx: &PrecisionContext) -> FrbBasis {
    FrbBasis::new(order, ctx.ratio(1, 2), ctx.one(), ctx).unwrap()
}

/// Term-by-term sum `Σ_{r ≤ (N−n)/2} (−1)^r / (r!(n+r)!) (t/2)^(2r+n)` with
/// rational arithmetic on the factorials.
pub fn bessel_sum(n: usize, order: usize, t: &Real, ctx: &PrecisionContext) -> Real {
    let mut total = ctx.zero();
    if n > order {
        return total;
    }
    let half_t = Float::with_val(ctx.bits(), t / 2u32);
    for r in 0..=(order - n) / 2 {
        let mut denom = rug::Integer::from(1);
        for k in 1..=r {
            denom *= k as u32;
        }
        for k in 1..=(n + r) {
            denom *= k as u32;
        }
        let power = Float::with_val(ctx.bits(), (&half_t).pow((2 * r + n) as u32));
        let term = power / Float::with_val(ctx.bits(), &denom);
        if r % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

/// `(f(x + h) − f(x − h)) / 2h`.
pub fn central_difference(f: impl Fn(&Real) -> Real, x: &Real, h: &Real, ctx: &PrecisionContext) -> Real {
    let bits = ctx.bits();
    let up = f(&Float::with_val(bits, x + h));
    let down = f(&Float::with_val(bits, x - h));
    Float::with_val(bits, up - down) / Float::with_val(bits, h * 2u32)
}

/// `|a − b| ≤ 10^(−places) · max(1, |b|)`.
pub fn close(a: &Real, b: &Real, places: i32, ctx: &PrecisionContext) -> bool {
    let diff = Float::with_val(ctx.bits(), a - b).abs();
    let scale = Float::with_val(ctx.bits(), b.abs_ref()).max(&ctx.one());
    diff <= ctx.pow10(-places) * scale
}

/// One-sided slope at the origin from `(y(h) − 1)/h` at `h = 10^(−k)`,
/// `k = k_lo..=k_hi`, Richardson-extrapolated against an error expansion in
/// powers `h^(j/2)`.
pub fn richardson_slope(y: impl Fn(&Real) -> Real, k_lo: u32, k_hi: u32, ctx: &PrecisionContext) -> Real {
    let bits = ctx.bits();
    let mut column: Vec<Real> = (k_lo..=k_hi)
        .map(|k| {
            let h = ctx.pow10(-(k as i32));
            let rise = Float::with_val(bits, y(&h) - 1u32);
            rise / h
        })
        .collect();
    let mut level = 1u32;
    while column.len() > 1 {
        // factor = 10^(level/2)
        let factor = Float::with_val(bits, ctx.int(10).pow(ctx.ratio(level as i64, 2)));
        let denom = Float::with_val(bits, &factor - 1u32);
        column = column
            .windows(2)
            .map(|w| {
                let fine = Float::with_val(bits, &factor * &w[1]);
                Float::with_val(bits, fine - &w[0]) / &denom
            })
            .collect();
        level += 1;
    }
    column.pop().unwrap()
}

/// Solution with coefficients drawn uniformly from `[−1, 1]`.
pub fn random_solution(order: usize, seed: u64, ctx: &PrecisionContext) -> TfSolution {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coeffs = (0..=order)
        .map(|_| ctx.from_f64(rng.gen_range(-1.0..=1.0)))
        .collect();
    TfSolution::new(coeffs, TfAnsatz::new(half_basis(order, ctx)), 0, ctx).unwrap()
}

/// `count` log-spaced points from `10^lo` to `10^hi`.
pub fn log_points(lo: i32, hi: i32, count: usize, ctx: &PrecisionContext) -> Vec<Real> {
    (0..count)
        .map(|k| {
            let e = ctx.int(lo as i64)
                + ctx.int((hi - lo) as i64) * ctx.int(k as i64) / ctx.int(count as i64 - 1);
            ctx.int(10).pow(e)
        })
        .collect()
}
