//! Monte Carlo harness. Trials run in parallel on child streams keyed by
//! (seed, n, trial), so the report does not depend on the thread count.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use statrs::distribution::{ChiSquared, ContinuousCDF};
use thiserror::Error;

use crate::analyze::{band_max, has_small_ab_cycle, has_small_simple_ab_cycle};
use crate::count::CountCache;
use crate::enumerate::enum_cyclically_reduced;
use crate::graph::{LabeledGraph, RankConvention};
use crate::moves::{apply_in_place, minimal_sequence, silhouette};
use crate::sample::{raw_pair, sample_of_size, RawGraphSampler, Rng, SampleError};

pub const CSV_HEADER: &str = "experiment,n,trials,metric,value,stderr,seed";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Experiment {
    AbCycles,
    SilhouetteSize,
    Disconnection,
    Uniformity,
    RankPreservation,
}

impl Experiment {
    pub const ALL: [Experiment; 5] = [
        Experiment::AbCycles,
        Experiment::SilhouetteSize,
        Experiment::Disconnection,
        Experiment::Uniformity,
        Experiment::RankPreservation,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::AbCycles => "ab-cycles",
            Experiment::SilhouetteSize => "silhouette-size",
            Experiment::Disconnection => "disconnection",
            Experiment::Uniformity => "uniformity",
            Experiment::RankPreservation => "rank-preservation",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = ExperimentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| ExperimentError::UnknownExperiment(s.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentSpec {
    pub experiment: Experiment,
    pub sizes: Vec<u32>,
    pub trials: usize,
    pub alpha: f64,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum ExperimentError {
    #[error("unknown experiment {0:?}")]
    UnknownExperiment(String),
    #[error("no sizes given")]
    NoSizes,
    #[error("size {0} is not allowed here")]
    BadSize(u32),
    #[error("trials must be at least 1")]
    NoTrials,
    #[error("alpha {0} outside (0, 1/6)")]
    BadAlpha(f64),
    #[error(transparent)]
    Sample(#[from] SampleError),
    #[error("{0}")]
    Invariant(String),
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<(), ExperimentError> {
        if self.sizes.is_empty() {
            return Err(ExperimentError::NoSizes);
        }
        if self.trials == 0 {
            return Err(ExperimentError::NoTrials);
        }
        for &n in &self.sizes {
            let ok = match self.experiment {
                Experiment::Disconnection => n > 0 && n % 6 == 0,
                Experiment::Uniformity => (1..=6).contains(&n),
                _ => n > 0,
            };
            if !ok {
                return Err(ExperimentError::BadSize(n));
            }
        }
        if self.experiment == Experiment::AbCycles && !(self.alpha > 0.0 && self.alpha < 1.0 / 6.0) {
            return Err(ExperimentError::BadAlpha(self.alpha));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub experiment: Experiment,
    pub n: u32,
    pub trials: usize,
    pub metric: &'static str,
    pub value: f64,
    pub stderr: Option<f64>,
    pub seed: u64,
}

impl Row {
    pub fn csv(&self) -> String {
        let se = self.stderr.map(|s| s.to_string()).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{}",
            self.experiment, self.n, self.trials, self.metric, self.value, se, self.seed
        )
    }
}

pub fn to_csv(rows: &[Row]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.csv());
        out.push('\n');
    }
    out
}

/// Standard error of a Bernoulli proportion.
fn prop_se(p: f64, t: usize) -> f64 {
    (p * (1.0 - p) / t as f64).sqrt()
}

fn trials<T: Send>(
    seed: u64,
    n: u32,
    count: usize,
    f: impl Fn(&mut Rng) -> Result<T, ExperimentError> + Sync,
) -> Result<Vec<T>, ExperimentError> {
    (0..count)
        .into_par_iter()
        .map(|t| f(&mut Rng::child(seed, &[n as u64, t as u64])))
        .collect()
}

/// Pearson statistic, degrees of freedom and upper-tail p-value for counts
/// that should be uniform over `cells` outcomes. Outcomes never seen count
/// as zeros.
pub fn chi_square_uniform(observed: &[u64], cells: usize) -> (f64, usize, f64) {
    let total: u64 = observed.iter().sum();
    let e = total as f64 / cells as f64;
    let seen: f64 = observed.iter().map(|&o| (o as f64 - e).powi(2) / e).sum();
    let stat = seen + (cells - observed.len()) as f64 * e;
    let df = cells.saturating_sub(1);
    let p = if df == 0 { 1.0 } else { ChiSquared::new(df as f64).expect("df > 0").sf(stat) };
    (stat, df, p)
}

/// Rank of a graph by the type formula and by collapsing b-orbits.
fn ranks(g: &LabeledGraph) -> (Option<u32>, Option<u32>) {
    (
        g.iso_type_with(RankConvention::Completed).ok().map(|t| t.r),
        g.iso_type_via_collapse().ok().map(|t| t.r),
    )
}

/// Number of graphs along the minimal move sequence of `g` whose rank differs
/// from the rank of `g`, by either computation.
pub fn rank_violations(g: &LabeledGraph) -> usize {
    let mut h = g.unrooted();
    let (r0, c0) = ranks(&h);
    let mut bad = usize::from(r0.is_none() || r0 != c0);
    for m in minimal_sequence(&h) {
        if apply_in_place(&mut h, m).is_err() {
            return bad + 1;
        }
        let (r, c) = ranks(&h);
        if r != r0 || c != r0 {
            bad += 1;
        }
    }
    bad
}

pub fn run_experiment(spec: &ExperimentSpec) -> Result<Vec<Row>, ExperimentError> {
    spec.validate()?;
    let mut rows = Vec::new();
    let cache = CountCache::global();
    for &n in &spec.sizes {
        let t = spec.trials;
        let row = |metric, value, stderr| Row {
            experiment: spec.experiment,
            n,
            trials: t,
            metric,
            value,
            stderr,
            seed: spec.seed,
        };
        match spec.experiment {
            Experiment::AbCycles => {
                let raw = RawGraphSampler::new(n)?;
                let alpha = spec.alpha;
                let res = trials(spec.seed, n, t, |rng| {
                    let g = sample_of_size(cache, &raw, rng)?;
                    let simple = has_small_simple_ab_cycle(&g, alpha).expect("alpha validated");
                    let any = has_small_ab_cycle(&g, alpha).expect("alpha validated");
                    Ok((simple, any))
                })?;
                let p_simple = res.iter().filter(|x| !x.0).count() as f64 / t as f64;
                let p_any = res.iter().filter(|x| !x.1).count() as f64 / t as f64;
                rows.push(row("band_max", band_max(n as usize, alpha) as f64, None));
                rows.push(row("fraction_lacking_small_simple_cycle", p_simple, Some(prop_se(p_simple, t))));
                rows.push(row("fraction_lacking_small_cycle", p_any, Some(prop_se(p_any, t))));
            }
            Experiment::SilhouetteSize => {
                let raw = RawGraphSampler::new(n)?;
                let sizes = trials(spec.seed, n, t, |rng| {
                    let g = sample_of_size(cache, &raw, rng)?;
                    Ok(silhouette(&g).n() as f64)
                })?;
                let mean = sizes.iter().sum::<f64>() / t as f64;
                let var = if t > 1 {
                    sizes.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (t - 1) as f64
                } else {
                    0.0
                };
                let min = sizes.iter().copied().fold(f64::INFINITY, f64::min);
                let threshold = n as f64 - 3.0 * (n as f64).powf(2.0 / 3.0);
                let below = sizes.iter().filter(|&&s| s < threshold).count() as f64 / t as f64;
                rows.push(row("mean_silhouette_size", mean, Some((var / t as f64).sqrt())));
                rows.push(row("min_silhouette_size", min, None));
                rows.push(row("fraction_below_n_minus_3n23", below, Some(prop_se(below, t))));
            }
            Experiment::Disconnection => {
                let res = trials(spec.seed, n, t, |rng| Ok(!raw_pair(n, rng)?.is_connected()))?;
                let p = res.iter().filter(|&&d| d).count() as f64 / t as f64;
                let se = prop_se(p, t);
                rows.push(row("disconnection_rate", p, Some(se)));
                rows.push(row("c_estimate", p * n as f64, Some(se * n as f64)));
            }
            Experiment::Uniformity => {
                let class: Vec<LabeledGraph> = enum_cyclically_reduced(n as usize).collect();
                let index: HashMap<&LabeledGraph, usize> =
                    class.iter().enumerate().map(|(i, g)| (g, i)).collect();
                let raw = RawGraphSampler::new(n)?;
                let hits = trials(spec.seed, n, t, |rng| {
                    let g = sample_of_size(cache, &raw, rng)?;
                    index.get(&g).copied().ok_or_else(|| {
                        ExperimentError::Invariant(format!("sample outside the enumerated class: {g:?}"))
                    })
                })?;
                let mut counts = vec![0u64; class.len()];
                for h in hits {
                    counts[h] += 1;
                }
                let (stat, df, p) = chi_square_uniform(&counts, class.len());
                rows.push(row("class_size", class.len() as f64, None));
                rows.push(row("chi_square", stat, None));
                rows.push(row("degrees_of_freedom", df as f64, None));
                rows.push(row("p_value", p, None));
            }
            Experiment::RankPreservation => {
                let raw = RawGraphSampler::new(n)?;
                let bad = trials(spec.seed, n, t, |rng| Ok(rank_violations(&sample_of_size(cache, &raw, rng)?)))?;
                rows.push(row("rank_violations", bad.iter().sum::<usize>() as f64, None));
            }
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(e: Experiment, sizes: &[u32], trials: usize) -> ExperimentSpec {
        ExperimentSpec { experiment: e, sizes: sizes.to_vec(), trials, alpha: 0.15, seed: 5 }
    }

    #[test]
    fn names_round_trip() {
        for e in Experiment::ALL {
            assert_eq!(e.name().parse::<Experiment>(), Ok(e));
        }
        assert!("nope".parse::<Experiment>().is_err());
    }

    #[test]
    fn validation() {
        assert_eq!(spec(Experiment::Disconnection, &[7], 1).validate(), Err(ExperimentError::BadSize(7)));
        assert_eq!(spec(Experiment::AbCycles, &[6], 0).validate(), Err(ExperimentError::NoTrials));
        let mut s = spec(Experiment::AbCycles, &[6], 1);
        s.alpha = 0.5;
        assert_eq!(s.validate(), Err(ExperimentError::BadAlpha(0.5)));
    }

    #[test]
    fn deterministic_report() {
        let s = spec(Experiment::SilhouetteSize, &[12, 18], 20);
        let a = to_csv(&run_experiment(&s).unwrap());
        let b = to_csv(&run_experiment(&s).unwrap());
        assert_eq!(a, b);
        assert!(a.starts_with(CSV_HEADER));
    }

    #[test]
    fn no_rank_violations_small() {
        let rows = run_experiment(&spec(Experiment::RankPreservation, &[10, 20], 30)).unwrap();
        assert!(rows.iter().all(|r| r.value == 0.0));
    }

    #[test]
    fn chi_square_counts_missing_cells() {
        let (stat, df, _) = chi_square_uniform(&[2, 2], 4);
        assert_eq!(df, 3);
        assert!((stat - 4.0).abs() < 1e-12);
    }
}
