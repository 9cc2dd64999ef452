mod common;

use common::half_basis;
use frbc::qlm::qlm_iterate_with;
use frbc::{build_grid, Error, PrecisionContext, ThomasFermi};

#[test]
fn desk_scale_trace() {
    let c = PrecisionContext::new(50).unwrap();
    let problem = ThomasFermi::new(half_basis(50, &c));
    let grid = build_grid(50, &c);
    let mut seen = 0;
    let (sol, trace) = qlm_iterate_with(&problem, 45, &grid, &c, |r| {
        seen += 1;
        assert_eq!(r.iteration, seen);
    })
    .unwrap();
    assert_eq!(seen, 45);
    assert_eq!(trace.len(), 45);
    assert_eq!(sol.iterations(), 45);
    assert_eq!(trace.last().unwrap().coeffs, sol.coeffs());
    assert!(trace.records.iter().all(|r| !r.delta_sup.is_sign_negative()));

    let deltas: Vec<f64> = trace.records.iter().map(|r| r.delta_sup.to_f64()).collect();
    // stagnation floor recorded from this configuration: ~1e-23
    assert!(deltas[44] < 1e-22, "{}", deltas[44]);

    let peak = (0..deltas.len())
        .max_by(|&a, &b| deltas[a].partial_cmp(&deltas[b]).unwrap())
        .unwrap();
    let cutoff = 10f64.powi(-(c.digits() as i32) / 3);
    let settled = peak + deltas[peak..].iter().position(|&d| d < cutoff).unwrap();
    assert!(settled - peak >= 10, "decay run {peak}..{settled}");
    for r in peak..settled {
        assert!(deltas[r + 1] < deltas[r], "iteration {}", r + 2);
    }

    let slope = trace.last().unwrap().slope.to_f64();
    assert!((slope + 1.58807102).abs() < 1e-8, "{slope}");
}

#[test]
fn trace_json_uses_decimal_strings() {
    let c = PrecisionContext::new(40).unwrap();
    let (sol, trace) = ThomasFermi::new(half_basis(6, &c)).solve(3).unwrap();
    let json = trace.to_json(sol.context(), true);
    let records = json.as_array().unwrap();
    assert_eq!(records.len(), 3);
    assert_eq!(records[0]["iteration"], 1);
    assert!(records[2]["slope"].is_string());
    assert_eq!(records[2]["coeffs"].as_array().unwrap().len(), 7);
    assert_eq!(
        records[2]["slope"].as_str().unwrap(),
        c.format(&sol.slope_at_origin().unwrap())
    );
    let bare = trace.to_json(sol.context(), false);
    assert!(bare[0]["coeffs"].as_array().unwrap().is_empty());
}

#[test]
fn zero_iterations_rejected() {
    let c = PrecisionContext::new(40).unwrap();
    assert!(matches!(
        ThomasFermi::new(half_basis(4, &c)).solve(0),
        Err(Error::Usage(_))
    ));
}

#[test]
fn grid_size_must_match_basis() {
    let c = PrecisionContext::new(40).unwrap();
    let problem = ThomasFermi::new(half_basis(4, &c));
    let grid = build_grid(5, &c);
    assert!(matches!(
        frbc::qlm_iterate(&problem, 1, &grid, &c),
        Err(Error::DimensionMismatch { expected: 5, found: 6 })
    ));
}

#[test]
fn identical_runs_are_bitwise_equal() {
    let c = PrecisionContext::new(40).unwrap();
    let run = || ThomasFermi::new(half_basis(20, &c)).solve(10).unwrap().0;
    assert_eq!(run().coeffs(), run().coeffs());
}
