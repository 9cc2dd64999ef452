//! Quasilinearization driver.
//!
//! A nonlinear problem `u'' = F(u', u, x)` is replaced by the sequence of
//! linear problems
//!
//! ```text
//! u_{r+1}'' + p(x) u_{r+1}' + q(x) u_{r+1} = f(x)
//! ```
//!
//! obtained by expanding `F` to first order about the previous iterate
//! `u_r`. Each linear problem is discretized by collocating a boundary-
//! embedding ansatz `u = u_0(x) + Σ ĉ_n φ_n(x)` at the grid nodes, giving a
//! square system for `ĉ`. Boundary data live entirely in the ansatz; there
//! are no boundary rows.

use std::sync::Arc;

use rayon::prelude::*;
use rug::Float;
use serde::Serialize;

use crate::basis::{FrbBasis, Jet};
use crate::bigreal::{lu_solve, DenseSystem, PrecisionContext, Real};
use crate::error::{Error, Result};
use crate::grid::CollocationGrid;

/// Scalar function of the abscissa.
pub type CoefficientFn = Arc<dyn Fn(&Real) -> Real + Send + Sync>;

/// One linearized iterate `u'' + p u' + q u = f`.
#[derive(Clone)]
pub struct LinearizedBvp {
    pub p: CoefficientFn,
    pub q: CoefficientFn,
    pub f: CoefficientFn,
}

impl LinearizedBvp {
    fn coefficients_at(&self, x: &Real, iteration: usize) -> Result<[Real; 3]> {
        let vals = [(self.p)(x), (self.q)(x), (self.f)(x)];
        for (v, what) in vals.iter().zip(["p(x)", "q(x)", "f(x)"]) {
            if !v.is_finite() {
                return Err(Error::NonFiniteCoefficient {
                    what,
                    x: x.to_string_radix(10, Some(20)),
                    iteration,
                });
            }
        }
        Ok(vals)
    }
}

/// Trial function `u(x) = u_0(x) + Σ ĉ_n φ_n(x)` that satisfies the
/// boundary conditions for every coefficient vector.
pub trait Ansatz: Clone + Send + Sync + 'static {
    fn basis(&self) -> &FrbBasis;

    /// Jet of the inhomogeneous part `u_0` at `x ≥ 0`.
    fn particular(&self, x: &Real) -> Jet;

    /// Jets of the trial terms `φ_n` at `x > 0`.
    fn terms(&self, x: &Real) -> Result<Vec<Jet>>;

    /// Values of the trial terms at `x ≥ 0`.
    fn term_values(&self, x: &Real) -> Result<Vec<Real>>;

    /// One-sided derivative of the trial function at `x = 0`.
    fn slope_at_origin(&self, coeffs: &[Real]) -> Result<Real>;
}

/// Coefficient vector together with the ansatz it belongs to.
#[derive(Clone, Debug)]
pub struct SpectralSolution<A> {
    coeffs: Vec<Real>,
    ansatz: A,
    iterations: usize,
    ctx: PrecisionContext,
}

impl<A: Ansatz> SpectralSolution<A> {
    pub fn new(coeffs: Vec<Real>, ansatz: A, iterations: usize, ctx: &PrecisionContext) -> Result<Self> {
        let size = ansatz.basis().size();
        if coeffs.len() != size {
            return Err(Error::DimensionMismatch {
                expected: size,
                found: coeffs.len(),
            });
        }
        if let Some(bad) = coeffs.iter().position(|c| !c.is_finite()) {
            return Err(Error::InvalidSolution(format!("coefficient {bad} is not finite")));
        }
        Ok(Self {
            coeffs,
            ansatz,
            iterations,
            ctx: *ctx,
        })
    }

    pub fn coeffs(&self) -> &[Real] {
        &self.coeffs
    }

    pub fn ansatz(&self) -> &A {
        &self.ansatz
    }

    pub fn basis(&self) -> &FrbBasis {
        self.ansatz.basis()
    }

    /// Number of quasilinearization cycles that produced the coefficients.
    pub fn iterations(&self) -> usize {
        self.iterations
    }

    pub fn context(&self) -> &PrecisionContext {
        &self.ctx
    }

    /// `u(x)` for `x ≥ 0`.
    pub fn value(&self, x: &Real) -> Result<Real> {
        let mut acc = self.ansatz.particular(x).value;
        for (c, v) in self.coeffs.iter().zip(self.ansatz.term_values(x)?) {
            acc += v * c;
        }
        Ok(acc)
    }

    /// `u, u', u''` at `x > 0`.
    pub fn jet(&self, x: &Real) -> Result<Jet> {
        Ok(combine(&self.ansatz.particular(x), &self.ansatz.terms(x)?, &self.coeffs))
    }

    pub fn slope_at_origin(&self) -> Result<Real> {
        self.ansatz.slope_at_origin(&self.coeffs)
    }
}

fn combine(particular: &Jet, terms: &[Jet], coeffs: &[Real]) -> Jet {
    let mut out = particular.clone();
    for (t, c) in terms.iter().zip(coeffs) {
        out.value += Float::with_val(out.value.prec(), &t.value * c);
        out.d1 += Float::with_val(out.value.prec(), &t.d1 * c);
        out.d2 += Float::with_val(out.value.prec(), &t.d2 * c);
    }
    out
}

/// A nonlinear second-order boundary-value problem prepared for QLM.
pub trait NonlinearBvp: Sync {
    type Ansatz: Ansatz;

    fn ansatz(&self) -> &Self::Ansatz;

    /// Starting iterate `u_0`.
    fn initial_iterate(&self) -> CoefficientFn;

    /// Linearize about the previous iterate.
    fn linearize(&self, previous: CoefficientFn) -> LinearizedBvp;

    /// Whether the previous iterate's value lies where the linearization
    /// is defined without clamping.
    fn is_admissible(&self, _value: &Real) -> bool {
        true
    }
}

/// Per-iteration diagnostics.
#[derive(Clone, Debug)]
pub struct IterationRecord {
    /// 1-based iteration index `r + 1`.
    pub iteration: usize,
    pub coeffs: Vec<Real>,
    /// `max_i |u_{r+1}(x_i) − u_r(x_i)|`.
    pub delta_sup: Real,
    /// `u_{r+1}'(0)`.
    pub slope: Real,
    /// `max_i |Res_{r+1}(x_i)|` after the solve.
    pub max_node_residual: Real,
    /// Nodes where the previous iterate was clamped into the admissible set.
    pub clamped_nodes: usize,
}

#[derive(Clone, Debug, Default)]
pub struct IterationTrace {
    pub records: Vec<IterationRecord>,
}

#[derive(Serialize)]
struct RecordDocument {
    iteration: usize,
    delta_sup: String,
    slope: String,
    max_node_residual: String,
    clamped_nodes: usize,
    coeffs: Vec<String>,
}

impl IterationTrace {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn last(&self) -> Option<&IterationRecord> {
        self.records.last()
    }

    /// JSON array of records with every number as a decimal string.
    pub fn to_json(&self, ctx: &PrecisionContext, with_coeffs: bool) -> serde_json::Value {
        let docs: Vec<RecordDocument> = self
            .records
            .iter()
            .map(|r| RecordDocument {
                iteration: r.iteration,
                delta_sup: ctx.format(&r.delta_sup),
                slope: ctx.format(&r.slope),
                max_node_residual: ctx.format(&r.max_node_residual),
                clamped_nodes: r.clamped_nodes,
                coeffs: if with_coeffs {
                    r.coeffs.iter().map(|c| ctx.format(c)).collect()
                } else {
                    Vec::new()
                },
            })
            .collect();
        serde_json::to_value(docs).expect("trace serializes")
    }
}

/// Ansatz jets at every node, reused across iterations.
struct NodeCache {
    particular: Vec<Jet>,
    terms: Vec<Vec<Jet>>,
}

impl NodeCache {
    fn build<A: Ansatz>(ansatz: &A, grid: &CollocationGrid) -> Result<Self> {
        let particular = grid.points().par_iter().map(|x| ansatz.particular(x)).collect();
        let terms = grid
            .points()
            .par_iter()
            .map(|x| ansatz.terms(x))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { particular, terms })
    }

    fn values(&self, coeffs: &[Real]) -> Vec<Real> {
        self.particular
            .par_iter()
            .zip(&self.terms)
            .map(|(p, terms)| {
                let mut acc = p.value.clone();
                for (t, c) in terms.iter().zip(coeffs) {
                    acc += Float::with_val(acc.prec(), &t.value * c);
                }
                acc
            })
            .collect()
    }
}

fn apply_operator(jet: &Jet, coeffs: &[Real; 3], ctx: &PrecisionContext) -> Real {
    let [p, q, _] = coeffs;
    let mut acc = ctx.adopt(&jet.d2);
    if !p.is_zero() {
        acc += Float::with_val(ctx.bits(), p * &jet.d1);
    }
    acc += Float::with_val(ctx.bits(), q * &jet.value);
    acc
}

fn assemble_cached(
    lin: &LinearizedBvp,
    cache: &NodeCache,
    grid: &CollocationGrid,
    ctx: &PrecisionContext,
    iteration: usize,
) -> Result<DenseSystem> {
    let rows = grid
        .points()
        .par_iter()
        .zip(cache.particular.par_iter().zip(&cache.terms))
        .map(|(x, (particular, terms))| {
            let coeffs = lin.coefficients_at(x, iteration)?;
            let row: Vec<Real> = terms.iter().map(|t| apply_operator(t, &coeffs, ctx)).collect();
            let rhs = Float::with_val(ctx.bits(), &coeffs[2] - apply_operator(particular, &coeffs, ctx));
            Ok((row, rhs))
        })
        .collect::<Result<Vec<_>>>()?;
    let (matrix, rhs) = rows.into_iter().unzip();
    DenseSystem::new(matrix, rhs)
}

fn check_sizes(basis: &FrbBasis, grid: &CollocationGrid) -> Result<()> {
    if grid.len() != basis.size() {
        return Err(Error::DimensionMismatch {
            expected: basis.size(),
            found: grid.len(),
        });
    }
    Ok(())
}

/// Collocation system for one linear iterate: row `i` is the ODE residual at
/// node `x_i` written in the unknown coefficients.
pub fn assemble_system<A: Ansatz>(
    lin: &LinearizedBvp,
    ansatz: &A,
    grid: &CollocationGrid,
    ctx: &PrecisionContext,
) -> Result<DenseSystem> {
    check_sizes(ansatz.basis(), grid)?;
    let cache = NodeCache::build(ansatz, grid)?;
    assemble_cached(lin, &cache, grid, ctx, 0)
}

fn sup_abs(values: impl Iterator<Item = Real>, ctx: &PrecisionContext) -> Real {
    values.map(|v| v.abs()).fold(ctx.zero(), |m, v| if v > m { v } else { m })
}

/// Run exactly `iterations` linearize–assemble–solve cycles.
pub fn qlm_iterate<P: NonlinearBvp>(
    problem: &P,
    iterations: usize,
    grid: &CollocationGrid,
    ctx: &PrecisionContext,
) -> Result<(SpectralSolution<P::Ansatz>, IterationTrace)> {
    qlm_iterate_with(problem, iterations, grid, ctx, |_| {})
}

/// As [`qlm_iterate`], calling `observe` after every completed iteration.
pub fn qlm_iterate_with<P, F>(
    problem: &P,
    iterations: usize,
    grid: &CollocationGrid,
    ctx: &PrecisionContext,
    mut observe: F,
) -> Result<(SpectralSolution<P::Ansatz>, IterationTrace)>
where
    P: NonlinearBvp,
    F: FnMut(&IterationRecord),
{
    if iterations == 0 {
        return Err(Error::Usage("at least one iteration is required".into()));
    }
    let ansatz = problem.ansatz();
    check_sizes(ansatz.basis(), grid)?;
    let cache = NodeCache::build(ansatz, grid)?;

    let mut previous = problem.initial_iterate();
    let mut previous_nodes: Vec<Real> = grid.points().iter().map(|x| previous(x)).collect();
    let mut trace = IterationTrace::default();
    let mut solution = None;

    for iteration in 1..=iterations {
        let clamped_nodes = previous_nodes.iter().filter(|v| !problem.is_admissible(v)).count();
        let lin = problem.linearize(previous.clone());
        let system = assemble_cached(&lin, &cache, grid, ctx, iteration)?;
        let coeffs = lu_solve(&system, ctx)?;

        let nodes = cache.values(&coeffs);
        let delta_sup = sup_abs(
            nodes
                .iter()
                .zip(&previous_nodes)
                .map(|(a, b)| Float::with_val(ctx.bits(), a - b)),
            ctx,
        );
        let max_node_residual = sup_abs(system.residual(&coeffs).into_iter(), ctx);
        let current = SpectralSolution::new(coeffs, ansatz.clone(), iteration, ctx)?;
        let record = IterationRecord {
            iteration,
            coeffs: current.coeffs().to_vec(),
            delta_sup,
            slope: current.slope_at_origin()?,
            max_node_residual,
            clamped_nodes,
        };
        observe(&record);
        trace.records.push(record);

        let shared = Arc::new(current.clone());
        previous = Arc::new(move |x: &Real| {
            shared
                .value(x)
                .unwrap_or_else(|_| Float::with_val(x.prec(), rug::float::Special::Nan))
        });
        previous_nodes = nodes;
        solution = Some(current);
    }
    Ok((solution.expect("at least one iteration ran"), trace))
}
