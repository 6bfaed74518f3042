//! Batch runs over generated games, written as CSV.
//!
//! Instance `i` of a run gets its own generator seed derived from the run
//! seed, so results do not depend on scheduling. Instances are processed on
//! the rayon pool and written sorted by `game_id`.

use std::path::PathBuf;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curb::{all_minimal_curb, one_minimal_curb, smallest_minimal_curb};
use crate::error::{CurbError, Result};
use crate::game::{AnyGame, Game};
use crate::generators::{seeded_rng, GeneratorSpec};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Algorithm {
    #[serde(rename = "all_mc")]
    AllMc,
    #[serde(rename = "one_mc")]
    OneMc,
    #[serde(rename = "small_mc")]
    SmallMc,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::AllMc, Algorithm::OneMc, Algorithm::SmallMc];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::AllMc => "all_mc",
            Algorithm::OneMc => "one_mc",
            Algorithm::SmallMc => "small_mc",
        }
    }
}

impl std::str::FromStr for Algorithm {
    type Err = CurbError;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| CurbError::InvalidParameter(format!("unknown algorithm '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    /// Family template; freely sized families are resized to each entry of
    /// `sizes`, and its seed is replaced per instance.
    pub generator: GeneratorSpec,
    pub instance_count: usize,
    /// Total game sizes `rows + cols`.
    pub sizes: Vec<usize>,
    pub algorithms: Vec<Algorithm>,
    pub rng_seed: u64,
    pub output: Option<PathBuf>,
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        if self.instance_count == 0 {
            return Err(CurbError::InvalidParameter("instance count must be at least 1".into()));
        }
        if self.sizes.is_empty() {
            return Err(CurbError::InvalidParameter("at least one game size is required".into()));
        }
        if let Some(&n) = self.sizes.iter().find(|&&n| n < 2) {
            return Err(CurbError::InvalidParameter(format!("game size {n} is below 2")));
        }
        self.generator.validate()
    }

    /// `(game_id, size, generator)` for every instance, sizes outermost.
    fn instances(&self) -> Vec<(usize, usize, GeneratorSpec)> {
        let mut out = Vec::with_capacity(self.sizes.len() * self.instance_count);
        for &n in &self.sizes {
            for _ in 0..self.instance_count {
                let game_id = out.len();
                let mut generator = self.generator.with_total_size(n);
                generator.rng_seed = instance_seed(self.rng_seed, game_id as u64);
                out.push((game_id, n, generator));
            }
        }
        out
    }
}

/// SplitMix64 finaliser applied to the run seed and the instance id.
pub fn instance_seed(run_seed: u64, game_id: u64) -> u64 {
    let mut z = run_seed.wrapping_add(game_id.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionRow {
    pub game_id: usize,
    pub family: String,
    pub n: usize,
    pub smallest_curb_size: usize,
    pub lfp_calls: usize,
    pub wall_time: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RuntimeRow {
    pub game_id: usize,
    pub family: String,
    pub n: usize,
    pub algorithm: Algorithm,
    pub wall_time: f64,
    pub lfp_calls: usize,
    /// Size of the returned set (the smallest one for `all_mc`).
    #[serde(skip)]
    pub curb_size: usize,
}

fn instance_error(game_id: usize, e: CurbError) -> CurbError {
    CurbError::Instance { game_id, source: Box::new(e) }
}

fn smallest_with_cost<T: Scalar>(game: &Game<T>) -> Result<(usize, usize)> {
    let report = smallest_minimal_curb(game)?;
    Ok((report.size(), report.lfp_calls))
}

/// Smallest minimal CURB size per instance.
pub fn run_distribution_experiment(spec: &ExperimentSpec) -> Result<Vec<DistributionRow>> {
    spec.validate()?;
    let mut rows = spec
        .instances()
        .into_par_iter()
        .map(|(game_id, _, generator)| {
            let game = generator.generate().map_err(|e| instance_error(game_id, e))?;
            let start = Instant::now();
            let (size, lfp_calls) = match &game {
                AnyGame::Rational(g) => smallest_with_cost(g),
                AnyGame::Float(g) => smallest_with_cost(g),
            }
            .map_err(|e| instance_error(game_id, e))?;
            Ok(DistributionRow {
                game_id,
                family: generator.family.name().to_string(),
                n: game.size(),
                smallest_curb_size: size,
                lfp_calls,
                wall_time: start.elapsed().as_secs_f64(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by_key(|r| r.game_id);
    if let Some(path) = &spec.output {
        write_csv(path, &rows)?;
    }
    Ok(rows)
}

fn run_algorithm<T: Scalar>(game: &Game<T>, algorithm: Algorithm, seed: u64) -> Result<(usize, usize)> {
    match algorithm {
        Algorithm::AllMc => {
            let all = all_minimal_curb(game)?;
            let smallest = all.reports.iter().map(|r| r.size()).min().unwrap_or(0);
            Ok((smallest, all.lfp_calls))
        }
        Algorithm::OneMc => {
            let report = one_minimal_curb(game, &mut seeded_rng(seed))?;
            Ok((report.size(), report.lfp_calls))
        }
        Algorithm::SmallMc => smallest_with_cost(game),
    }
}

/// Cost of each requested algorithm on each instance.
pub fn run_runtime_experiment(spec: &ExperimentSpec) -> Result<Vec<RuntimeRow>> {
    spec.validate()?;
    if spec.algorithms.is_empty() {
        return Err(CurbError::InvalidParameter("at least one algorithm is required".into()));
    }
    let per_instance = spec
        .instances()
        .into_par_iter()
        .map(|(game_id, _, generator)| {
            let game = generator.generate().map_err(|e| instance_error(game_id, e))?;
            // The one_mc draw gets a stream distinct from the generator's.
            let search_seed = instance_seed(generator.rng_seed, u64::MAX);
            spec.algorithms
                .iter()
                .map(|&algorithm| {
                    let start = Instant::now();
                    let (curb_size, lfp_calls) = match &game {
                        AnyGame::Rational(g) => run_algorithm(g, algorithm, search_seed),
                        AnyGame::Float(g) => run_algorithm(g, algorithm, search_seed),
                    }
                    .map_err(|e| instance_error(game_id, e))?;
                    Ok(RuntimeRow {
                        game_id,
                        family: generator.family.name().to_string(),
                        n: game.size(),
                        algorithm,
                        wall_time: start.elapsed().as_secs_f64(),
                        lfp_calls,
                        curb_size,
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let mut rows: Vec<RuntimeRow> = per_instance.into_iter().flatten().collect();
    rows.sort_by_key(|r| (r.game_id, r.algorithm));
    if let Some(path) = &spec.output {
        write_csv(path, &rows)?;
    }
    Ok(rows)
}

pub fn write_csv<R: Serialize>(path: &std::path::Path, rows: &[R]) -> Result<()> {
    let file = std::fs::File::create(path)?;
    write_csv_to(file, rows)
}

/// Header row first, RFC 4180 quoting.
pub fn write_csv_to<W: std::io::Write, R: Serialize>(writer: W, rows: &[R]) -> Result<()> {
    let mut out = csv::Writer::from_writer(writer);
    for row in rows {
        out.serialize(row)?;
    }
    out.flush()?;
    Ok(())
}
