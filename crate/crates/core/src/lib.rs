//! Fractional rational Bessel collocation combined with quasilinearization
//! for nonlinear second-order boundary-value problems on `[0, ∞)`, with the
//! Thomas–Fermi equation as the built-in problem.
//!
//! ```no_run
//! use frbc::{FrbBasis, PrecisionContext, ThomasFermi};
//!
//! let ctx = PrecisionContext::new(50)?;
//! let basis = FrbBasis::new(50, ctx.ratio(1, 2), ctx.one(), &ctx)?;
//! let (solution, trace) = ThomasFermi::new(basis).solve(45)?;
//! println!("y'(0) = {}", ctx.format(&solution.slope_at_origin()?));
//! # Ok::<(), frbc::Error>(())
//! ```

pub mod basis;
pub mod bigreal;
pub mod error;
pub mod grid;
pub mod qlm;
pub mod report;
pub mod thomas_fermi;

pub use basis::{FrbBasis, Jet, MapDerivative, MapPoint};
pub use bigreal::{lu_solve, DenseSystem, PrecisionContext, Real};
pub use error::{Error, Result};
pub use grid::{build_grid, CollocationGrid};
pub use qlm::{assemble_system, qlm_iterate, IterationRecord, IterationTrace, LinearizedBvp, SpectralSolution};
pub use report::{RunConfig, Table, Which};
pub use thomas_fermi::{energy, SolutionDocument, TfAnsatz, TfSolution, ThomasFermi};
