//! Multi-threaded drivers for the long-running searches.
//!
//! Each driver splits work along the same `(seed, index)` substreams or grid
//! slices as its sequential counterpart in `pentaks_core` and reduces in a
//! fixed order, so the results are identical to the sequential ones for any
//! thread count.

use rayon::prelude::*;
use rayon::ThreadPool;

use pentaks_core::orthograph::OrthogonalityGraph;
use pentaks_core::paradoxes::{hardy_optimum_from, hardy_restart, AvGame, GameStats, HardyOptimum};
use pentaks_core::pentagram3::{
    best_lambda_max, max_eigenvalue_from, refine_overlap_minimum, sample_family, FamilyExtremum, FamilyGrid, FamilySample,
};
use pentaks_core::pentagram4::{
    distinct_solutions, entangled_attempt, separable_attempt, ConjectureProblem, ConjectureReport, Pentagram4Class,
};
use pentaks_core::Error as CoreError;

use crate::error::{AppError, Result};

/// Environment variable capping the number of worker threads.
pub const THREADS_VAR: &str = "PENTAKS_THREADS";

/// Thread count requested through [`THREADS_VAR`], if any.
pub fn requested_threads() -> Result<Option<usize>> {
    match std::env::var(THREADS_VAR) {
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => Err(AppError::Threads(format!("{THREADS_VAR}: {e}"))),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(AppError::Threads(format!("{THREADS_VAR} must be a positive integer, got `{s}`"))),
        },
    }
}

/// A pool honouring [`THREADS_VAR`]; machine parallelism otherwise.
pub fn pool() -> Result<ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = requested_threads()? {
        builder = builder.num_threads(n);
    }
    builder.build().map_err(|e| AppError::Threads(e.to_string()))
}

pub fn av_game(pool: &ThreadPool, game: &AvGame, runs: u64, seed: u64) -> Result<GameStats> {
    if runs == 0 {
        return Err(CoreError::InvalidArgument("runs must be at least 1".to_string()).into());
    }
    let empty = GameStats { rng_seed: seed, ..GameStats::default() };
    Ok(pool.install(|| {
        (0..runs)
            .into_par_iter()
            .fold(
                || empty,
                |mut acc, i| {
                    acc.record(game.run(seed, i));
                    acc
                },
            )
            .reduce(|| empty, GameStats::merge)
    }))
}

pub fn conjecture_scan(pool: &ThreadPool, graph: &OrthogonalityGraph, samples: u64, seed: u64) -> Result<ConjectureReport> {
    if samples == 0 {
        return Err(CoreError::InvalidArgument("samples must be at least 1".into()).into());
    }
    let problem = ConjectureProblem::new(graph)?;
    let outcomes: Vec<_> = pool.install(|| (0..samples).into_par_iter().map(|i| problem.sample(seed, i)).collect());
    Ok(problem.report(seed, outcomes)?)
}

/// Grid maximum of `lambda_max` per slice, reduced to the earliest slice on
/// ties, then refined exactly as the sequential search does.
pub fn max_eigenvalue_over_family(pool: &ThreadPool, grid: FamilyGrid) -> Result<FamilyExtremum> {
    let per_slice: Vec<_> = pool.install(|| {
        (0..grid.slices())
            .into_par_iter()
            .map(|i| best_lambda_max(grid.slice(i)))
            .collect()
    });
    let best = per_slice
        .into_iter()
        .flatten()
        .fold(None::<(_, f64)>, |acc, s| match acc {
            Some(b) if b.1 >= s.1 => Some(b),
            _ => Some(s),
        })
        .ok_or(CoreError::NotFound { restarts: 0 })?;
    Ok(max_eigenvalue_from(best.0)?)
}

/// Streams the grid scan through `emit` in lexicographic order, computing
/// batches of slices in parallel.
pub fn scan_family<F>(pool: &ThreadPool, grid: FamilyGrid, mut emit: F) -> Result<()>
where
    F: FnMut(&FamilySample) -> Result<()>,
{
    let batch = pool.current_num_threads().max(1);
    let slices = grid.slices();
    let mut start = 0;
    while start < slices {
        let end = (start + batch).min(slices);
        let rows: Vec<Vec<FamilySample>> = pool.install(|| {
            (start..end)
                .into_par_iter()
                .map(|i| grid.slice(i).filter_map(|p| sample_family(&p)).collect())
                .collect()
        });
        for row in rows.iter().flatten() {
            emit(row)?;
        }
        start = end;
    }
    Ok(())
}

pub fn hardy_maximize(pool: &ThreadPool, restarts: usize, seed: u64) -> Result<HardyOptimum> {
    if restarts == 0 {
        return Err(CoreError::InvalidArgument("restarts must be at least 1".to_string()).into());
    }
    let runs = pool.install(|| (0..restarts as u64).into_par_iter().map(|i| hardy_restart(seed, i)).collect());
    Ok(hardy_optimum_from(runs)?)
}

/// First converged separable restart, by restart index.
pub fn separable_regular(pool: &ThreadPool, budget: usize, seed: u64) -> Result<Pentagram4Class> {
    let found = pool.install(|| (0..budget as u64).into_par_iter().find_map_first(|i| separable_attempt(seed, i)));
    found.ok_or_else(|| CoreError::NotFound { restarts: budget }.into())
}

pub fn entangled_regular(pool: &ThreadPool, budget: usize, seed: u64) -> Result<Vec<(Pentagram4Class, usize)>> {
    let attempts: Vec<_> = pool.install(|| (0..budget as u64).into_par_iter().map(|i| entangled_attempt(seed, i)).collect());
    let classes = distinct_solutions(attempts);
    if classes.is_empty() {
        return Err(CoreError::NotFound { restarts: budget }.into());
    }
    Ok(classes)
}

/// Smallest overlap sum on the grid, found per slice in parallel and
/// refined as in the sequential search. Ties go to the earliest grid point.
pub fn overlap_minimum(pool: &ThreadPool, grid: FamilyGrid) -> Result<FamilyExtremum> {
    let per_slice: Vec<Option<FamilySample>> = pool.install(|| {
        (0..grid.slices())
            .into_par_iter()
            .map(|i| {
                grid.slice(i).filter_map(|p| sample_family(&p)).fold(None, |acc: Option<FamilySample>, s| match acc {
                    Some(b) if b.overlap_sum <= s.overlap_sum => Some(b),
                    _ => Some(s),
                })
            })
            .collect()
    });
    let minima: Vec<FamilySample> = per_slice.into_iter().flatten().collect();
    Ok(refine_overlap_minimum(&minima)?)
}
