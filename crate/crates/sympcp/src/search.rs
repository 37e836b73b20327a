//! Bounded breadth-first search for correspondence solutions.
//!
//! A search configuration is the pair (which coordinate is ahead, the
//! overhang word the other coordinate still has to match). Appending a pair
//! either extends the overhang, consumes part of it, flips which side is
//! ahead, or kills the branch when the words disagree. An empty overhang
//! after at least one pair is a solution.
//!
//! The search explores layer by layer (one layer per appended pair), merging
//! configurations that have been seen before. Within a layer, states are
//! expanded in the order of their recorded index sequences and pairs are
//! tried in instance order, so the first solution reported is the canonical
//! one: shortest, then lexicographically least. Layers may be expanded by
//! parallel workers; the per-state results are merged back in expansion
//! order, so the outcome never depends on the worker count.

use std::collections::HashSet;
use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::words::{PcpInstance, PcpSolution};

/// Resource bounds for the bounded searches.
///
/// For [`solve`], `max_tiles` bounds the solution length, `max_overhang` the
/// overhang word length, and `max_states` the number of distinct
/// configurations ever enqueued. The relation search in
/// [`crate::freeness::find_relation`] reuses the same struct with
/// `max_tiles` read as a bound on the total product length.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchLimits {
    pub max_tiles: usize,
    pub max_overhang: usize,
    pub max_states: usize,
}

impl SearchLimits {
    pub fn new(max_tiles: usize, max_overhang: usize, max_states: usize) -> Result<Self> {
        let limits = SearchLimits {
            max_tiles,
            max_overhang,
            max_states,
        };
        limits.validate()?;
        Ok(limits)
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_tiles == 0 || self.max_overhang == 0 || self.max_states == 0 {
            return Err(Error::InvalidLimits);
        }
        Ok(())
    }
}

/// Why a bounded search may soundly report that no solution exists.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnsolvableReason {
    /// Every pair has a strictly longer first coordinate, or every pair a
    /// strictly longer second coordinate, so the concatenations can never
    /// have equal length.
    LengthMonotone,
    /// No pair has prefix-comparable coordinates, so no sequence can even
    /// begin to match.
    NoStart,
    /// Every configuration reachable within the overhang bound was explored,
    /// none was ever discarded, and no accepting configuration exists.
    StateExhausted,
}

impl UnsolvableReason {
    pub fn tag(&self) -> &'static str {
        match self {
            UnsolvableReason::LengthMonotone => "length-monotone",
            UnsolvableReason::NoStart => "no-start",
            UnsolvableReason::StateExhausted => "state-exhausted",
        }
    }
}

impl fmt::Display for UnsolvableReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Result of a bounded search: a witness, a sound proof that none exists, or
/// an honest "ran out of budget".
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome<T> {
    Found(T),
    ProvedUnsolvable(UnsolvableReason),
    Exhausted,
}

impl<T> SearchOutcome<T> {
    pub fn found(&self) -> Option<&T> {
        match self {
            SearchOutcome::Found(t) => Some(t),
            _ => None,
        }
    }
}

/// Which coordinate concatenation is currently longer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Side {
    First,
    Second,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Config {
    ahead: Side,
    overhang: Vec<u32>,
}

impl Config {
    fn start() -> Self {
        Config {
            ahead: Side::First,
            overhang: Vec::new(),
        }
    }
}

/// Appends pair `(u, v)` to a configuration. Returns the successor, or
/// `None` when the coordinates disagree.
fn step(cfg: &Config, u: &[u32], v: &[u32]) -> Option<Config> {
    // `long` is the side that is ahead: its pending overhang plus its new
    // word must be prefix-comparable with the other side's new word.
    let (long_word, short_word) = match cfg.ahead {
        Side::First => (u, v),
        Side::Second => (v, u),
    };
    let mut long: Vec<u32> = Vec::with_capacity(cfg.overhang.len() + long_word.len());
    long.extend_from_slice(&cfg.overhang);
    long.extend_from_slice(long_word);
    if long.len() >= short_word.len() {
        if !long.starts_with(short_word) {
            return None;
        }
        Some(Config {
            ahead: cfg.ahead,
            overhang: long[short_word.len()..].to_vec(),
        })
    } else {
        if !short_word.starts_with(&long) {
            return None;
        }
        Some(Config {
            ahead: match cfg.ahead {
                Side::First => Side::Second,
                Side::Second => Side::First,
            },
            overhang: short_word[long.len()..].to_vec(),
        })
    }
}

/// What expanding one state produced: successor configurations in pair
/// order, solutions found, and whether any successor was discarded for
/// exceeding the overhang bound.
struct Expansion {
    successors: Vec<(Config, Vec<usize>)>,
    solutions: Vec<Vec<usize>>,
    truncated: bool,
}

fn expand_state(
    pairs: &[(Vec<u32>, Vec<u32>)],
    cfg: &Config,
    path: &[usize],
    max_overhang: usize,
) -> Expansion {
    let mut out = Expansion {
        successors: Vec::new(),
        solutions: Vec::new(),
        truncated: false,
    };
    for (i, (u, v)) in pairs.iter().enumerate() {
        let Some(next) = step(cfg, u, v) else {
            continue;
        };
        let mut path = path.to_vec();
        path.push(i);
        if next.overhang.is_empty() {
            out.solutions.push(path);
        } else if next.overhang.len() > max_overhang {
            out.truncated = true;
        } else {
            out.successors.push((next, path));
        }
    }
    out
}

/// Bounded breadth-first solve with the reference single-worker semantics.
pub fn solve(inst: &PcpInstance, limits: &SearchLimits) -> Result<SearchOutcome<PcpSolution>> {
    solve_with_threads(inst, limits, 1)
}

/// Bounded breadth-first solve with up to `threads` parallel workers per
/// layer. The outcome is identical for every worker count.
pub fn solve_with_threads(
    inst: &PcpInstance,
    limits: &SearchLimits,
    threads: usize,
) -> Result<SearchOutcome<PcpSolution>> {
    limits.validate()?;
    let pairs: Vec<(Vec<u32>, Vec<u32>)> = inst
        .pairs()
        .iter()
        .map(|(u, v)| (u.symbols().to_vec(), v.symbols().to_vec()))
        .collect();

    // Sound a-priori criteria.
    if pairs.iter().all(|(u, v)| u.len() > v.len()) || pairs.iter().all(|(u, v)| u.len() < v.len())
    {
        return Ok(SearchOutcome::ProvedUnsolvable(
            UnsolvableReason::LengthMonotone,
        ));
    }
    if pairs
        .iter()
        .all(|(u, v)| !u.starts_with(v) && !v.starts_with(u))
    {
        return Ok(SearchOutcome::ProvedUnsolvable(UnsolvableReason::NoStart));
    }

    let mut visited: HashSet<Config> = HashSet::new();
    visited.insert(Config::start());
    let mut layer: Vec<(Config, Vec<usize>)> = vec![(Config::start(), Vec::new())];
    let mut truncated = false;

    for _depth in 1..=limits.max_tiles {
        let expansions: Vec<Expansion> = if threads > 1 {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .expect("worker pool");
            pool.install(|| {
                layer
                    .par_iter()
                    .map(|(cfg, path)| expand_state(&pairs, cfg, path, limits.max_overhang))
                    .collect()
            })
        } else {
            layer
                .iter()
                .map(|(cfg, path)| expand_state(&pairs, cfg, path, limits.max_overhang))
                .collect()
        };

        // Deterministic merge: expansion order equals state order, so the
        // first solution seen is the lexicographically least of this layer,
        // and the first discovery of a configuration carries the least
        // index sequence leading to it.
        let mut next: Vec<(Config, Vec<usize>)> = Vec::new();
        let mut seen_this_layer: HashSet<Config> = HashSet::new();
        let mut best_solution: Option<Vec<usize>> = None;
        for exp in expansions {
            truncated |= exp.truncated;
            if best_solution.is_none() {
                best_solution = exp.solutions.into_iter().next();
            }
            if best_solution.is_some() {
                continue;
            }
            for (cfg, path) in exp.successors {
                if visited.contains(&cfg) || seen_this_layer.contains(&cfg) {
                    continue;
                }
                seen_this_layer.insert(cfg.clone());
                next.push((cfg, path));
            }
        }
        if let Some(indices) = best_solution {
            return Ok(SearchOutcome::Found(PcpSolution::new(indices)?));
        }
        if next.is_empty() {
            return Ok(if truncated {
                SearchOutcome::Exhausted
            } else {
                SearchOutcome::ProvedUnsolvable(UnsolvableReason::StateExhausted)
            });
        }
        visited.extend(next.iter().map(|(cfg, _)| cfg.clone()));
        if visited.len() > limits.max_states {
            return Ok(SearchOutcome::Exhausted);
        }
        layer = next;
    }
    Ok(SearchOutcome::Exhausted)
}

/// Brute-force enumeration of every solution of length at most `max_tiles`,
/// in canonical order (shorter first, then lexicographic). Checks each index
/// sequence by direct concatenation, independently of the overhang search,
/// so it doubles as an oracle for [`solve`].
pub fn enumerate_solutions(inst: &PcpInstance, max_tiles: usize) -> Result<Vec<PcpSolution>> {
    if max_tiles == 0 {
        return Err(Error::InvalidLimits);
    }
    let k = inst.k();
    let mut out = Vec::new();
    for n in 1..=max_tiles {
        let mut indices = vec![0usize; n];
        loop {
            let candidate = PcpSolution::new(indices.clone())?;
            if inst.check_solution(&candidate)? {
                out.push(candidate);
            }
            // Odometer increment in lexicographic order.
            let mut pos = n;
            loop {
                if pos == 0 {
                    break;
                }
                pos -= 1;
                indices[pos] += 1;
                if indices[pos] < k {
                    break;
                }
                indices[pos] = 0;
            }
            if indices.iter().all(|&i| i == 0) {
                break;
            }
        }
    }
    Ok(out)
}
