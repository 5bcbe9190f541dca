//! Convergence experiments on simplex nodes, plus the CLI front end.
//!
//! For each `delta` of the grid the experiment picks the admissible `k`, takes
//! `Q = regular_simplex(n, delta * k)`, interpolates a fixed synthetic
//! native-space target at the equally spaced nodes of degree `k - 1` in `Q`,
//! and records the largest error on a finer equally spaced sample grid.
//!
//! The target is drawn once on the largest admissible simplex,
//! `regular_simplex(n, 2 / (3 C))`; every `Q` shares its first vertex and
//! orientation and so lies inside it.

pub mod cli;
pub mod io;
pub mod precise;

use std::path::PathBuf;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{admissible_k, check_delta, error_bound, new_constants, NewBoundConstants};
use crate::error::{Error, Result};
use crate::interpolant::{fit, saddle_condition, synth_native_function, CenterSet, NativeFunction};
use crate::kernel::{distance, KernelParams};
use crate::simplex::{binomial, equally_spaced_nodes, regular_simplex};

pub const GENERATOR: &str = "ChaCha8Rng";

/// Largest number of `delta` values one experiment accepts.
pub const MAX_GRID_POINTS: usize = 1000;

/// Geometric grid from `delta0` down to `delta0 / ratio`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeltaAuto {
    pub count: usize,
    pub ratio: f64,
}

impl Default for DeltaAuto {
    fn default() -> Self {
        Self {
            count: 8,
            ratio: 5.0,
        }
    }
}

fn default_l_const() -> f64 {
    1.0
}

fn default_source_count() -> usize {
    20
}

fn default_eval_resolution() -> usize {
    40
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub n: usize,
    pub lambda: usize,
    pub c: f64,
    #[serde(default = "default_l_const")]
    pub l_const: f64,
    pub b0: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_grid: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_auto: Option<DeltaAuto>,
    pub seed: u64,
    #[serde(default = "default_source_count")]
    pub source_count: usize,
    #[serde(default = "default_eval_resolution")]
    pub eval_resolution: usize,
    /// Significand bits for the fit and error evaluation; `None` uses `f64`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision_bits: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

impl ExperimentConfig {
    /// Config with the default geometric grid and sampling.
    pub fn new(n: usize, lambda: usize, c: f64, b0: f64, seed: u64) -> Self {
        Self {
            n,
            lambda,
            c,
            l_const: 1.0,
            b0,
            delta_grid: None,
            delta_auto: None,
            seed,
            source_count: default_source_count(),
            eval_resolution: default_eval_resolution(),
            precision_bits: None,
            output: None,
        }
    }

    /// Parses a JSON config. Unknown keys are rejected.
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text)?;
        if cfg.delta_grid.is_some() && cfg.delta_auto.is_some() {
            return Err(Error::InvalidParameter(
                "delta_grid and delta_auto are mutually exclusive".into(),
            ));
        }
        Ok(cfg)
    }

    pub fn kernel_params(&self) -> Result<KernelParams> {
        KernelParams::with_fourier_constant(self.n, self.lambda, self.c, self.l_const)
    }

    /// The `delta` values of the experiment, validated against `consts`.
    pub fn deltas(&self, consts: &NewBoundConstants) -> Result<Vec<f64>> {
        let deltas = match (&self.delta_grid, &self.delta_auto) {
            (Some(_), Some(_)) => {
                return Err(Error::InvalidParameter(
                    "delta_grid and delta_auto are mutually exclusive".into(),
                ))
            }
            (Some(grid), None) => grid.clone(),
            (None, auto) => {
                let auto = auto.unwrap_or_default();
                if auto.count == 0
                    || auto.count > MAX_GRID_POINTS
                    || !(auto.ratio >= 1.0)
                    || !auto.ratio.is_finite()
                {
                    return Err(Error::InvalidParameter(format!(
                        "delta_auto needs 1 <= count <= {MAX_GRID_POINTS} and ratio >= 1, got {auto:?}"
                    )));
                }
                geometric_grid(consts.delta_max, auto.ratio, auto.count)
            }
        };
        if deltas.is_empty() {
            return Err(Error::InvalidParameter("empty delta grid".into()));
        }
        if deltas.len() > MAX_GRID_POINTS {
            return Err(Error::InvalidParameter(format!(
                "delta grid has {} points, at most {MAX_GRID_POINTS} allowed",
                deltas.len()
            )));
        }
        for &d in &deltas {
            check_delta(consts, d)?;
        }
        Ok(deltas)
    }

    /// Checks everything that can be checked before running.
    pub fn validate(&self) -> Result<(KernelParams, NewBoundConstants, Vec<f64>)> {
        let params = self.kernel_params()?;
        if let Some(bits) = self.precision_bits {
            precise::check_bits(bits)?;
        }
        let consts = new_constants(&params, self.b0)?;
        let deltas = self.deltas(&consts)?;
        let k_max = deltas
            .iter()
            .map(|&d| admissible_k(consts.c_const, d))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .max()
            .unwrap_or(0);
        if self.eval_resolution < k_max {
            return Err(Error::InvalidParameter(format!(
                "eval_resolution {} is below the largest admissible k {k_max}",
                self.eval_resolution
            )));
        }
        Ok((params, consts, deltas))
    }
}

/// `count` values from `start` down to `start / ratio`, equally spaced in log scale.
pub fn geometric_grid(start: f64, ratio: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![start];
    }
    (0..count)
        .map(|i| {
            if i == 0 {
                start
            } else {
                start * ratio.powf(-(i as f64) / (count - 1) as f64)
            }
        })
        .collect()
}

/// One row of a convergence experiment. A failed fit has NaN `max_error`
/// and `condition_estimate`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRecord {
    pub delta: f64,
    pub k: usize,
    pub node_count: usize,
    pub max_error: f64,
    pub bound_value: f64,
    pub seminorm: f64,
    pub condition_estimate: f64,
}

impl ConvergenceRecord {
    pub fn is_failed(&self) -> bool {
        self.max_error.is_nan()
    }

    /// Field-wise bit equality, so failed rows compare equal to themselves.
    pub fn bitwise_eq(&self, other: &Self) -> bool {
        self.delta.to_bits() == other.delta.to_bits()
            && self.k == other.k
            && self.node_count == other.node_count
            && self.max_error.to_bits() == other.max_error.to_bits()
            && self.bound_value.to_bits() == other.bound_value.to_bits()
            && self.seminorm.to_bits() == other.seminorm.to_bits()
            && self.condition_estimate.to_bits() == other.condition_estimate.to_bits()
    }
}

#[derive(Debug, Clone)]
pub struct ConvergenceRun {
    pub config: ExperimentConfig,
    pub constants: NewBoundConstants,
    pub target: NativeFunction,
    /// Sorted by descending `delta`.
    pub records: Vec<ConvergenceRecord>,
    /// `sup` over the sample grid of the distance to the nearest center, per record.
    pub fill_distances: Vec<f64>,
    /// `(row index, message)` for rows whose fit failed.
    pub failures: Vec<(usize, String)>,
}

impl ConvergenceRun {
    /// `#` lines written ahead of the CSV header.
    pub fn metadata(&self) -> Vec<String> {
        let c = &self.config;
        vec![
            format!(
                "generator={GENERATOR} seed={} target_seed={}",
                c.seed,
                self.target.seed()
            ),
            format!(
                "n={} lambda={} c={} l_const={} b0={} source_count={} eval_resolution={} arithmetic={}",
                c.n,
                c.lambda,
                c.c,
                c.l_const,
                c.b0,
                c.source_count,
                c.eval_resolution,
                match c.precision_bits {
                    Some(bits) => format!("binary{bits}"),
                    None => "f64".to_string(),
                }
            ),
            format!(
                "delta0={} C={} omega_prime={} c1={}",
                self.constants.delta_max,
                self.constants.c_const,
                self.constants.omega_prime,
                self.constants.c1
            ),
        ]
    }
}

struct RowOutcome {
    record: ConvergenceRecord,
    fill_distance: f64,
    failure: Option<String>,
}

fn convergence_row(
    params: &KernelParams,
    consts: &NewBoundConstants,
    target: &NativeFunction,
    delta: f64,
    eval_resolution: usize,
    precision_bits: Option<usize>,
) -> Result<RowOutcome> {
    let n = params.n();
    let k = admissible_k(consts.c_const, delta)?;
    let q = regular_simplex(n, delta * k as f64)?;
    let nodes = equally_spaced_nodes(&q, k - 1)?;
    let samples = equally_spaced_nodes(&q, eval_resolution)?;
    let seminorm = target.seminorm();
    let bound_value = error_bound(consts, delta, seminorm)?;
    let fill_distance = samples
        .nodes()
        .iter()
        .map(|x| {
            nodes
                .nodes()
                .iter()
                .map(|y| distance(x, y))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max);

    let centers = CenterSet::new(nodes.nodes().to_vec())?;
    let fitted = match precision_bits {
        None => {
            let values: Vec<f64> = nodes.nodes().iter().map(|x| target.eval(x)).collect();
            fit(params, &centers, &values).and_then(|s| {
                let mut err = 0.0f64;
                for x in samples.nodes() {
                    let e = (target.eval(x) - s.evaluate(x)?).abs();
                    err = err.max(e);
                }
                Ok((err, s.condition_estimate()))
            })
        }
        Some(bits) => {
            precise::max_interpolation_error(params, target, nodes.nodes(), samples.nodes(), bits)
                .and_then(|err| Ok((err, saddle_condition(params, &centers)?)))
        }
    };
    let (max_error, condition_estimate, failure) = match fitted {
        Ok((e, cond)) => (e, cond, None),
        Err(e) => (f64::NAN, f64::NAN, Some(e.to_string())),
    };
    Ok(RowOutcome {
        record: ConvergenceRecord {
            delta,
            k,
            node_count: nodes.len(),
            max_error,
            bound_value,
            seminorm,
            condition_estimate,
        },
        fill_distance,
        failure,
    })
}

/// Runs the experiment described by `config`.
///
/// Rows are computed in parallel; the result does not depend on the number
/// of threads.
pub fn run_convergence(config: &ExperimentConfig) -> Result<ConvergenceRun> {
    let (params, consts, mut deltas) = config.validate()?;
    deltas.sort_by(|a, b| b.total_cmp(a));
    let domain = regular_simplex(params.n(), 2.0 / (3.0 * consts.c_const))?;
    let target = synth_native_function(&params, config.seed, config.source_count, &domain)?;

    let outcomes: Vec<RowOutcome> = deltas
        .par_iter()
        .map(|&d| {
            convergence_row(
                &params,
                &consts,
                &target,
                d,
                config.eval_resolution,
                config.precision_bits,
            )
        })
        .collect::<Result<_>>()?;

    let mut records = Vec::with_capacity(outcomes.len());
    let mut fill_distances = Vec::with_capacity(outcomes.len());
    let mut failures = Vec::new();
    for (i, o) in outcomes.into_iter().enumerate() {
        debug_assert_eq!(
            o.record.node_count as f64,
            binomial(params.n() + o.record.k - 1, params.n())
        );
        records.push(o.record);
        fill_distances.push(o.fill_distance);
        if let Some(msg) = o.failure {
            failures.push((i, msg));
        }
    }
    Ok(ConvergenceRun {
        config: config.clone(),
        constants: consts,
        target,
        records,
        fill_distances,
        failures,
    })
}

/// Least-squares line through `(1/delta, ln max_error)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayFit {
    pub slope: f64,
    pub intercept: f64,
    /// Residuals of the usable points, in record order.
    pub residuals: Vec<f64>,
    pub points_used: usize,
}

pub fn fit_decay(records: &[ConvergenceRecord]) -> Result<DecayFit> {
    let usable: Vec<(f64, f64)> = records
        .iter()
        .filter(|r| r.max_error > 0.0 && r.max_error.is_finite() && r.delta > 0.0)
        .map(|r| (1.0 / r.delta, r.max_error.ln()))
        .collect();
    if usable.len() < 3 {
        let zeros = records.iter().filter(|r| r.max_error == 0.0).count();
        let msg = if zeros > 0 {
            format!(
                "only {} usable points; {zeros} rows have zero error (below noise floor)",
                usable.len()
            )
        } else {
            format!("only {} usable points, need 3", usable.len())
        };
        return Err(Error::InsufficientData(msg));
    }
    let len = usable.len() as f64;
    let mx = usable.iter().map(|p| p.0).sum::<f64>() / len;
    let my = usable.iter().map(|p| p.1).sum::<f64>() / len;
    let sxx: f64 = usable.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = usable.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if !(sxx > 0.0) {
        return Err(Error::InsufficientData(
            "all usable points share the same delta".into(),
        ));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residuals = usable
        .iter()
        .map(|&(x, y)| y - (intercept + slope * x))
        .collect();
    Ok(DecayFit {
        slope,
        intercept,
        residuals,
        points_used: usable.len(),
    })
}

/// True when, going to smaller `delta`, no error grows by more than `slack`.
/// Failed rows are skipped.
pub fn nonincreasing_with_slack(records: &[ConvergenceRecord], slack: f64) -> bool {
    let mut sorted: Vec<&ConvergenceRecord> = records.iter().filter(|r| !r.is_failed()).collect();
    sorted.sort_by(|a, b| b.delta.total_cmp(&a.delta));
    sorted
        .windows(2)
        .all(|w| w[1].max_error <= slack * w[0].max_error)
}
