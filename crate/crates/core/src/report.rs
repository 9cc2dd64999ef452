//! Run configuration and tabular output shared by the command-line tool and
//! the C interface.

use std::io::Write;

use rug::Float;
use serde::Serialize;

use crate::basis::FrbBasis;
use crate::bigreal::{PrecisionContext, Real};
use crate::error::{Error, Result};
use crate::qlm::{IterationTrace, NonlinearBvp, SpectralSolution};
use crate::thomas_fermi::{TfSolution, ThomasFermi};

/// The 52 abscissas of the published value and derivative tables.
pub const REFERENCE_ABSCISSAS: [&str; 52] = [
    "0.25", "0.50", "0.75", "1.00", "1.25", "1.50", "1.75", "2.00", "2.25", "2.50", "2.75", "3.00",
    "3.25", "3.5", "3.75", "4.00", "4.25", "4.50", "4.75", "5.00", "6.00", "7.00", "8.00", "9.00",
    "10.00", "20.00", "30", "40", "50", "60", "70", "80", "90", "100", "200", "300", "400", "500",
    "600", "700", "800", "900", "1000", "2000", "3000", "4000", "5000", "6000", "7000", "8000",
    "9000", "10000",
];

/// Abscissas of the published iteration-convergence lattice; `0` stands for
/// the initial slope.
pub const LATTICE_ABSCISSAS: [&str; 7] = ["0", "10", "100", "200", "300", "400", "500"];

/// Checkpoints of the published iteration-convergence lattice.
pub const LATTICE_ITERATIONS: [usize; 3] = [15, 30, 45];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub order: usize,
    /// Map exponent as a decimal or `p/q`.
    pub alpha: String,
    /// Map scale `L` as a decimal or `p/q`.
    pub scale: String,
    pub iterations: usize,
    pub digits: u32,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            order: 50,
            alpha: "1/2".into(),
            scale: "1".into(),
            iterations: 45,
            digits: 50,
        }
    }
}

impl RunConfig {
    pub fn context(&self) -> Result<PrecisionContext> {
        PrecisionContext::new(self.digits)
    }

    pub fn problem(&self) -> Result<ThomasFermi> {
        let ctx = self.context()?;
        let alpha = parse_rational(&self.alpha, &ctx)?;
        let scale = parse_rational(&self.scale, &ctx)?;
        Ok(ThomasFermi::new(FrbBasis::new(self.order, alpha, scale, &ctx)?))
    }

    pub fn solve(&self) -> Result<(TfSolution, IterationTrace)> {
        self.problem()?.solve(self.iterations)
    }
}

/// Parse `p/q` or a plain decimal at context precision.
pub fn parse_rational(text: &str, ctx: &PrecisionContext) -> Result<Real> {
    match text.split_once('/') {
        Some((num, den)) => {
            let num = ctx.parse(num.trim())?;
            let den = ctx.parse(den.trim())?;
            if den.is_zero() {
                return Err(Error::Parse(text.into()));
            }
            Ok(Float::with_val(ctx.bits(), num / den))
        }
        None => ctx.parse(text.trim()),
    }
}

/// Parse a comma-separated list of decimals.
pub fn parse_list(text: &str, ctx: &PrecisionContext) -> Result<Vec<Real>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| ctx.parse(s))
        .collect()
}

pub fn reference_abscissas(ctx: &PrecisionContext) -> Vec<Real> {
    REFERENCE_ABSCISSAS
        .iter()
        .map(|s| ctx.parse(s).expect("literal abscissa"))
        .collect()
}

/// `count` points spaced evenly in `log10 x` from `lo` to `hi` inclusive.
pub fn log_probe(lo: &Real, hi: &Real, count: usize, ctx: &PrecisionContext) -> Result<Vec<Real>> {
    if !(*lo > 0 && *hi > 0) || lo > hi {
        return Err(Error::Usage(format!(
            "probe range needs 0 < lo <= hi, got {} .. {}",
            ctx.format(lo),
            ctx.format(hi)
        )));
    }
    let bits = ctx.bits();
    let log_lo = Float::with_val(bits, lo.ln_ref());
    let log_hi = Float::with_val(bits, hi.ln_ref());
    Ok(match count {
        0 => Vec::new(),
        1 => vec![ctx.adopt(lo)],
        _ => (0..count)
            .map(|k| {
                if k == 0 {
                    return ctx.adopt(lo);
                }
                if k + 1 == count {
                    return ctx.adopt(hi);
                }
                let span = Float::with_val(bits, &log_hi - &log_lo);
                let step = span * k as u32 / (count as u32 - 1);
                (step + &log_lo).exp()
            })
            .collect(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Which {
    Value,
    Derivative,
}

impl Which {
    pub fn order(self) -> u32 {
        match self {
            Which::Value => 0,
            Which::Derivative => 1,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Which::Value => "y",
            Which::Derivative => "dy",
        }
    }
}

/// Header plus rows of already formatted cells.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn write_csv<W: Write>(&self, out: &mut W) -> Result<()> {
        writeln!(out, "{}", self.header.join(","))?;
        for row in &self.rows {
            writeln!(out, "{}", row.join(","))?;
        }
        Ok(())
    }

    /// Array of objects keyed by the header; every cell stays a string.
    pub fn to_json(&self) -> serde_json::Value {
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let map = self
                    .header
                    .iter()
                    .cloned()
                    .zip(row.iter().cloned().map(serde_json::Value::String))
                    .collect::<serde_json::Map<_, _>>();
                serde_json::Value::Object(map)
            })
            .collect();
        serde_json::Value::Array(rows)
    }
}

/// `x, y(x)` or `x, y'(x)` rows.
pub fn value_table(solution: &TfSolution, which: Which, xs: &[Real]) -> Result<Table> {
    let ctx = solution.context();
    let mut table = Table::new(&["x", which.label()]);
    for x in xs {
        if x.is_sign_negative() && !x.is_zero() {
            return Err(Error::Usage(format!("abscissa must be >= 0, got {}", ctx.format(x))));
        }
        let v = solution.eval(x, which.order())?;
        table.rows.push(vec![ctx.format(x), ctx.format(&v)]);
    }
    Ok(table)
}

/// `N, x, residual` rows, one series per solution.
pub fn residual_table(solutions: &[TfSolution], probe: &[Real]) -> Result<Table> {
    if let Some(x) = probe.iter().find(|x| x.is_sign_negative() || x.is_zero()) {
        return Err(Error::Usage(format!("residual probe needs x > 0, got {x}")));
    }
    let mut table = Table::new(&["N", "x", "residual"]);
    for solution in solutions {
        let ctx = solution.context();
        let order = solution.basis().order().to_string();
        for (x, r) in probe.iter().zip(solution.residual_profile(probe)?) {
            table.rows.push(vec![order.clone(), ctx.format(x), ctx.format(&r)]);
        }
    }
    Ok(table)
}

/// `N, iteration, x, y, dy` rows for every requested checkpoint.
///
/// One solve per configuration runs to the largest checkpoint; intermediate
/// iterates are rebuilt from the trace.
pub fn convergence_table(configs: &[RunConfig], checkpoints: &[usize], xs: &[Real]) -> Result<Table> {
    use rayon::prelude::*;

    let last = *checkpoints
        .iter()
        .max()
        .ok_or_else(|| Error::Usage("no iteration checkpoints requested".into()))?;
    if checkpoints.contains(&0) {
        return Err(Error::Usage("iteration checkpoints start at 1".into()));
    }
    let blocks = configs
        .par_iter()
        .map(|config| {
            let config = RunConfig {
                iterations: last,
                ..config.clone()
            };
            let problem = config.problem()?;
            let ctx = config.context()?;
            let (_, trace) = problem.solve(last)?;
            let mut rows = Vec::new();
            for &iteration in checkpoints {
                let record = &trace.records[iteration - 1];
                let solution = SpectralSolution::new(
                    record.coeffs.clone(),
                    problem.ansatz().clone(),
                    iteration,
                    &ctx,
                )?;
                for x in xs {
                    if x.is_sign_negative() && !x.is_zero() {
                        return Err(Error::Usage(format!("abscissa must be >= 0, got {}", ctx.format(x))));
                    }
                    rows.push(vec![
                        config.order.to_string(),
                        iteration.to_string(),
                        ctx.format(x),
                        ctx.format(&solution.eval(x, 0)?),
                        ctx.format(&solution.eval(x, 1)?),
                    ]);
                }
            }
            Ok(rows)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut table = Table::new(&["N", "iteration", "x", "y", "dy"]);
    table.rows = blocks.into_iter().flatten().collect();
    Ok(table)
}

/// Summary printed by a solve.
#[derive(Clone, Debug, Serialize)]
pub struct SolveSummary {
    #[serde(rename = "N")]
    pub order: usize,
    pub alpha: String,
    #[serde(rename = "L")]
    pub scale: String,
    pub digits: u32,
    pub iterations: usize,
    pub slope: String,
    pub max_node_residual: String,
    pub delta_sup: String,
    pub clamped_nodes: usize,
}

impl SolveSummary {
    pub fn new(solution: &TfSolution, trace: &IterationTrace) -> Result<Self> {
        let ctx = solution.context();
        let last = trace
            .last()
            .ok_or_else(|| Error::InvalidSolution("empty iteration trace".into()))?;
        Ok(Self {
            order: solution.basis().order(),
            alpha: ctx.format(solution.basis().alpha()),
            scale: ctx.format(solution.basis().scale()),
            digits: ctx.digits(),
            iterations: solution.iterations(),
            slope: ctx.format(&solution.slope_at_origin()?),
            max_node_residual: ctx.format(&last.max_node_residual),
            delta_sup: ctx.format(&last.delta_sup),
            clamped_nodes: trace.records.iter().map(|r| r.clamped_nodes).sum(),
        })
    }

    pub fn to_table(&self) -> Table {
        let mut table = Table::new(&["key", "value"]);
        let pairs = [
            ("N", self.order.to_string()),
            ("alpha", self.alpha.clone()),
            ("L", self.scale.clone()),
            ("digits", self.digits.to_string()),
            ("iterations", self.iterations.to_string()),
            ("slope", self.slope.clone()),
            ("max_node_residual", self.max_node_residual.clone()),
            ("delta_sup", self.delta_sup.clone()),
            ("clamped_nodes", self.clamped_nodes.to_string()),
        ];
        table.rows = pairs.into_iter().map(|(k, v)| vec![k.to_string(), v]).collect();
        table
    }
}
