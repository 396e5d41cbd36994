//! Wall-clock measurements for the Hessenberg fast path and the mixed search.

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::eval::qperm_numeric;
use crate::exact::{rat, Rat};
use crate::hessenberg::qperm_hessenberg_numeric;
use crate::mixed::search_consistent_targets;
use crate::random::Sampler;

/// Largest size at which the naive expansion is attempted.
pub const NAIVE_LIMIT: usize = 9;

/// Median wall time of `runs` executions (at least one).
pub fn median_time<T>(runs: usize, mut f: impl FnMut() -> T) -> (Duration, T) {
    let mut times = Vec::with_capacity(runs.max(1));
    let mut last = None;
    for _ in 0..runs.max(1) {
        let start = Instant::now();
        let out = f();
        times.push(start.elapsed());
        last = Some(out);
    }
    times.sort();
    (times[times.len() / 2], last.expect("at least one run"))
}

/// Least-squares slope of `log y` against `log x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    let logs: Vec<(f64, f64)> = points.iter().map(|(x, y)| (x.ln(), y.ln())).collect();
    let k = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / k;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / k;
    let num: f64 = logs.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = logs.iter().map(|(x, _)| (x - mx).powi(2)).sum();
    num / den
}

#[derive(Clone, Debug, Serialize)]
pub struct HessenbergRow {
    pub n: usize,
    pub fast_seconds: f64,
    /// `None` when the naive expansion is out of reach.
    pub naive_seconds: Option<f64>,
    pub agree: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct HessenbergReport {
    pub q0: String,
    pub runs: usize,
    pub rows: Vec<HessenbergRow>,
    pub slope: f64,
}

/// Times `P_{q0}(A)` for random rational Hessenberg matrices of each size.
pub fn hessenberg_suite(sizes: &[usize], runs: usize, seed: u64) -> HessenbergReport {
    let q0: Rat = rat(3, 2);
    let mut sampler = Sampler::new(seed);
    let mut rows = Vec::new();
    for &n in sizes {
        let a = sampler.hessenberg_rat(n);
        let (fast_t, fast) = median_time(runs, || qperm_hessenberg_numeric(&a, &q0).expect("Hessenberg input"));
        let (naive_seconds, agree) = if n <= NAIVE_LIMIT {
            let (t, naive) = median_time(runs, || qperm_numeric(&a, &q0).expect("size checked"));
            (Some(t.as_secs_f64()), Some(naive == fast))
        } else {
            (None, None)
        };
        rows.push(HessenbergRow {
            n,
            fast_seconds: fast_t.as_secs_f64(),
            naive_seconds,
            agree,
        });
    }
    let points: Vec<(f64, f64)> = rows.iter().map(|r| (r.n as f64, r.fast_seconds.max(1e-9))).collect();
    HessenbergReport {
        q0: "3/2".into(),
        runs,
        slope: if points.len() >= 2 {
            loglog_slope(&points)
        } else {
            f64::NAN
        },
        rows,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MixedRow {
    pub n: usize,
    pub jobs: usize,
    pub seconds: f64,
    pub count: usize,
}

/// Median time of the consistent-target search.
pub fn mixed_suite(sizes: &[usize], jobs: usize, runs: usize) -> Vec<MixedRow> {
    sizes
        .iter()
        .map(|&n| {
            let (t, found) = median_time(runs, || search_consistent_targets(n, jobs).expect("n ≤ 4"));
            MixedRow {
                n,
                jobs,
                seconds: t.as_secs_f64(),
                count: found.len(),
            }
        })
        .collect()
}
