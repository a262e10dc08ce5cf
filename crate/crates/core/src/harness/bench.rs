//! Runtime scaling with a least-squares log-log slope.

use std::time::Instant;

use serde::Serialize;

use super::experiment::{run_algorithm, Algorithm};
use super::generate::{generate, InstanceSpec};
use crate::error::{Error, Result};
use crate::primitives::EdApproximator;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScalingRow {
    pub n: usize,
    /// Best of the repeats, in seconds.
    pub seconds: f64,
    pub length: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScalingTable {
    pub algorithm: Algorithm,
    pub rows: Vec<ScalingRow>,
    /// Slope of `ln(seconds)` against `ln(n)`.
    pub slope: f64,
}

/// Least-squares slope of `ln y` on `ln x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    let pts: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// Time `algorithm` on `template` instances resized to each `n` (with
/// `m = n`). Instance generation is excluded from the timings.
pub fn bench_scaling(
    algorithm: Algorithm,
    sizes: &[usize],
    template: &InstanceSpec,
    repeats: usize,
    ed: &dyn EdApproximator,
) -> Result<ScalingTable> {
    if sizes.len() < 2 || sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Spec {
            field: "sizes",
            reason: "need at least two strictly ascending sizes".into(),
        });
    }
    let mut rows = Vec::with_capacity(sizes.len());
    for &n in sizes {
        let spec = InstanceSpec {
            n,
            m: None,
            ..template.clone()
        };
        let (a, b) = generate(&spec)?;
        let mut best = f64::INFINITY;
        let mut length = 0;
        for _ in 0..repeats.max(1) {
            let start = Instant::now();
            let report = run_algorithm(algorithm, &a, &b, None, ed, u64::MAX)?;
            best = best.min(start.elapsed().as_secs_f64());
            length = report.len();
        }
        rows.push(ScalingRow {
            n,
            seconds: best.max(1e-9),
            length,
        });
    }
    let points: Vec<(f64, f64)> = rows.iter().map(|r| (r.n as f64, r.seconds)).collect();
    Ok(ScalingTable {
        algorithm,
        slope: loglog_slope(&points),
        rows,
    })
}
