//! Extremal-progression search and envelope reporting: how large can a
//! symmetric progression inside `[-N, N]` be while containing no nonzero
//! polynomial value of integers or of primes?
//!
//! One-dimensional instances are solved exactly by an exhaustive scan over
//! steps. Higher dimensions run a seeded random-restart hill climb (the
//! source material proves upper bounds and offers no search procedure, so
//! the procedure here is original to this toolkit and results are reported
//! as best-found lower-bound data, never as optima). Every progression
//! that enters a report is re-verified by the brute-force avoidance oracle,
//! and cross-checked against the residue-space detection functional when
//! the instance fits its guards.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier::{detection_count, DetectionInstance};
use crate::gap::{avoids, AvoidanceVerdict, SymmetricGap};
use crate::limits::Limits;
use crate::poly::IntPolynomial;
use crate::primes::{is_prime_u64, PrimeTable};
use crate::InputMode;

/// How candidate progressions are explored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    /// Exact in one dimension; a budget-capped step grid in higher ones.
    Exhaustive,
    /// Seeded hill climb with random restarts; deterministic given the seed.
    RandomRestartHillClimb,
}

impl std::str::FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Strategy> {
        match s {
            "exhaustive" => Ok(Strategy::Exhaustive),
            "random_restart_hill_climb" | "hill-climb" | "hill_climb" => {
                Ok(Strategy::RandomRestartHillClimb)
            }
            other => Err(Error::InvalidInput(format!(
                "unknown strategy {other:?}; use exhaustive or random_restart_hill_climb"
            ))),
        }
    }
}

/// Candidate filters, mirroring the hypotheses of the statements the
/// search contextualizes.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchFilters {
    /// Require the highest step to be prime.
    pub require_prime_last_step: bool,
    /// Require candidates to be proper (all coefficient tuples give
    /// distinct elements).
    pub require_proper: bool,
}

/// A full search request.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SearchConfig {
    /// Ambient bounds `N` to sweep, one report row each.
    pub ambient_values: Vec<u64>,
    /// Number of directions `k`.
    pub dims: u32,
    /// The polynomial whose values must be avoided.
    pub poly: IntPolynomial,
    /// Integer inputs or prime inputs.
    pub inputs: InputMode,
    pub strategy: Strategy,
    /// Seed for the deterministic pseudo-random stream.
    pub seed: u64,
    /// Candidate-evaluation budget per ambient bound.
    pub budget: u64,
    /// Hill-climb restarts per ambient bound (restart 0 is a warm start
    /// from the one-dimensional optimum).
    pub restarts: u32,
    pub filters: SearchFilters,
}

impl SearchConfig {
    fn validate(&self) -> Result<()> {
        if self.ambient_values.is_empty() {
            return Err(Error::InvalidInput("no ambient bounds to sweep".into()));
        }
        if self.dims == 0 {
            return Err(Error::InvalidInput("dims must be at least 1".into()));
        }
        if self.budget == 0 {
            return Err(Error::InvalidInput("budget must be at least 1".into()));
        }
        if self.restarts == 0 {
            return Err(Error::InvalidInput("restarts must be at least 1".into()));
        }
        if self.poly.degree().unwrap_or(0) < 1 {
            return Err(Error::InvalidInput(
                "search needs a nonconstant polynomial".into(),
            ));
        }
        Ok(())
    }
}

/// A reported progression: shape, exact distinct size, properness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoundGap {
    pub steps: Vec<i64>,
    pub widths: Vec<i64>,
    /// Number of distinct elements.
    pub size: u64,
    pub proper: bool,
}

/// One ambient bound of an envelope report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EnvelopeRow {
    pub ambient: u64,
    /// Largest distinct size found (0 when no avoiding progression was
    /// found at all).
    pub best_size: u64,
    /// Reference envelope `N^{5/6} (ln N)^{1/3}`.
    pub envelope: f64,
    /// `best_size / envelope`.
    pub ratio: f64,
    pub witness: Option<FoundGap>,
    /// Candidate evaluations actually spent.
    pub evaluations: u64,
    /// True when the budget ran out before the search settled.
    pub budget_exhausted: bool,
    /// True when the detection functional corroborated the avoidance
    /// verdict (instances outside its guards are skipped, not failed).
    pub cross_checked: bool,
}

/// Best-found avoiding progressions over an ambient sweep.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EnvelopeReport {
    pub dims: u32,
    /// Display form of the avoided polynomial.
    pub poly: String,
    /// Its degree (kept here so downstream envelope tables need not
    /// re-parse the display form).
    pub degree: u32,
    pub inputs: InputMode,
    pub strategy: Strategy,
    pub seed: u64,
    pub budget: u64,
    pub restarts: u32,
    pub rows: Vec<EnvelopeRow>,
}

/// Exact one-dimensional optimum and width extremum.
#[derive(Debug, Clone, Serialize)]
pub struct OneDimReport {
    pub ambient: u64,
    /// The progression maximizing distinct size (ties broken toward the
    /// smallest step); `None` when no step admits width >= 1.
    pub best: Option<FoundGap>,
    /// Largest avoiding width over all steps (0 when none).
    pub max_width: u64,
    /// The smallest step attaining `max_width`.
    pub max_width_step: u64,
}

/// Marks every attainable nonzero |value| of `h` up to `ambient`.
fn value_flags(
    ambient: u64,
    h: &IntPolynomial,
    inputs: InputMode,
    limits: &Limits,
) -> Result<Vec<bool>> {
    let cap = BigInt::from(ambient);
    let n0 = crate::gap::input_scan_bound(h, &cap);
    if n0 > limits.tuple_enumeration() {
        return Err(Error::GuardExceeded(format!(
            "value scan bound {n0} exceeds {}",
            limits.tuple_enumeration()
        )));
    }
    let mut flags = vec![false; ambient as usize + 1];
    let mut mark = |n: i64| {
        if let Some(m) = h.evaluate_i64(n).magnitude().to_u64() {
            if (1..=ambient).contains(&m) {
                flags[m as usize] = true;
            }
        }
    };
    match inputs {
        InputMode::Integers => {
            mark(0);
            for n in 1..=n0 as i64 {
                mark(n);
                mark(-n);
            }
        }
        InputMode::Primes => {
            if n0 >= 2 {
                let table = PrimeTable::sieve(n0, limits)?;
                for p in table.primes_up_to(n0) {
                    mark(p as i64);
                }
            }
        }
    }
    Ok(flags)
}

/// Exhaustive one-dimensional search: for every step `d <= ambient`, the
/// largest avoiding width is read off the value table, so the scan is
/// exact, not heuristic.
pub fn one_dim_scan(
    ambient: u64,
    h: &IntPolynomial,
    inputs: InputMode,
    limits: &Limits,
) -> Result<OneDimReport> {
    if ambient == 0 {
        return Err(Error::InvalidInput("ambient bound must be positive".into()));
    }
    if ambient > limits.tuple_enumeration() {
        return Err(Error::GuardExceeded(format!(
            "ambient {ambient} exceeds the one-dimensional scan ceiling {}",
            limits.tuple_enumeration()
        )));
    }
    let flags = value_flags(ambient, h, inputs, limits)?;
    let mut best: Option<(u64, u64)> = None; // (step, width), max 2w+1 then min d
    let mut max_width = 0u64;
    let mut max_width_step = 0u64;
    for d in 1..=ambient {
        let cap = ambient / d;
        if cap == 0 {
            break;
        }
        let mut width = cap;
        for m in 1..=cap {
            if flags[(m * d) as usize] {
                width = m - 1;
                break;
            }
        }
        if width == 0 {
            continue;
        }
        if width > max_width {
            max_width = width;
            max_width_step = d;
        }
        if best.map_or(true, |(_, w)| width > w) {
            best = Some((d, width));
        }
    }
    let best = match best {
        None => None,
        Some((d, w)) => {
            let gap = SymmetricGap::new(vec![d as i64], vec![w as i64])?;
            // Re-verify through the independent oracle before reporting.
            match avoids(&gap, h, inputs, limits)? {
                AvoidanceVerdict::Avoids => {}
                AvoidanceVerdict::Contains { input, value } => {
                    return Err(Error::ConsistencyFailure(format!(
                        "one-dimensional scan reported {{{d}x : |x| <= {w}}} but it \
                         contains h({input}) = {value}"
                    )))
                }
            }
            Some(FoundGap {
                steps: vec![d as i64],
                widths: vec![w as i64],
                size: 2 * w + 1,
                proper: true,
            })
        }
    };
    Ok(OneDimReport {
        ambient,
        best,
        max_width,
        max_width_step,
    })
}

/// Distinct size and properness, cheaply when possible.
///
/// Proper progressions have size `prod (2 L_i + 1)` with no enumeration;
/// otherwise a bounded enumeration counts distinct elements. `None` means
/// the candidate is too large to evaluate and is skipped.
fn distinct_size(gap: &SymmetricGap, limits: &Limits) -> Option<(u64, bool)> {
    if gap.is_proper_fast() == Some(true) {
        return u64::try_from(gap.tuple_count()).ok().map(|s| (s, true));
    }
    if gap.tuple_count() <= 2_000_000u128.min(limits.tuple_enumeration() as u128) {
        let report = gap.properness(limits).ok()?;
        return Some((report.distinct_size, report.is_proper));
    }
    None
}

/// One hill-climb / enumeration state.
#[derive(Clone)]
struct State {
    steps: Vec<i64>,
    widths: Vec<i64>,
    size: u64,
}

struct Evaluator<'a> {
    h: &'a IntPolynomial,
    inputs: InputMode,
    filters: SearchFilters,
    ambient: u64,
    limits: &'a Limits,
    budget_left: u64,
    evaluations: u64,
}

impl<'a> Evaluator<'a> {
    /// Checks one candidate; `None` if rejected (any reason) or if the
    /// budget is exhausted.
    fn evaluate(&mut self, steps: &[i64], widths: &[i64]) -> Option<State> {
        if self.budget_left == 0 {
            return None;
        }
        self.budget_left -= 1;
        self.evaluations += 1;
        let span: i128 = steps
            .iter()
            .zip(widths)
            .map(|(&d, &l)| d as i128 * l as i128)
            .sum();
        if span > self.ambient as i128 {
            return None;
        }
        if self.filters.require_prime_last_step {
            let last = *steps.last()? as u64;
            if !is_prime_u64(last) {
                return None;
            }
        }
        let gap = SymmetricGap::new(steps.to_vec(), widths.to_vec()).ok()?;
        let (size, proper) = distinct_size(&gap, self.limits)?;
        if self.filters.require_proper && !proper {
            return None;
        }
        match avoids(&gap, self.h, self.inputs, self.limits).ok()? {
            AvoidanceVerdict::Avoids => Some(State {
                steps: steps.to_vec(),
                widths: widths.to_vec(),
                size,
            }),
            AvoidanceVerdict::Contains { .. } => None,
        }
    }

    fn exhausted(&self) -> bool {
        self.budget_left == 0
    }
}

/// Greedily widens a feasible state: repeatedly bump the width whose
/// direction has the smallest current factor `2 L_i + 1` (ties toward the
/// cheaper step), as long as the result still fits and avoids.
fn grow_widths(state: &mut State, eval: &mut Evaluator) {
    loop {
        let k = state.steps.len();
        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by_key(|&i| (state.widths[i], state.steps[i], i));
        let mut improved = false;
        for &i in &order {
            let mut widths = state.widths.clone();
            widths[i] += 1;
            if let Some(next) = eval.evaluate(&state.steps, &widths) {
                *state = next;
                improved = true;
                break;
            }
            if eval.exhausted() {
                return;
            }
        }
        if !improved {
            return;
        }
    }
}

/// Deterministic warm start: embed the one-dimensional optimum with
/// width-1 extra directions on ascending primes chosen so the enlarged
/// progression still avoids.
fn warm_start(
    ambient: u64,
    dims: u32,
    one_dim: Option<&FoundGap>,
    eval: &mut Evaluator,
) -> Option<State> {
    let base = one_dim?;
    let d1 = base.steps[0];
    let l1_full = base.widths[0];
    if dims == 1 {
        return eval.evaluate(&base.steps, &base.widths);
    }
    let k = dims as usize;
    let mut q = 2u64;
    while q <= ambient {
        if !is_prime_u64(q) {
            q += 1;
            continue;
        }
        // Extra directions on consecutive primes starting at q.
        let mut extra: Vec<i64> = Vec::with_capacity(k - 1);
        let mut p = q;
        while extra.len() < k - 1 {
            if is_prime_u64(p) {
                extra.push(p as i64);
            }
            p += 1;
        }
        let extra_span: i128 = extra.iter().map(|&d| d as i128).sum();
        let room = ambient as i128 - extra_span;
        if room < d1 as i128 {
            return None; // even width 1 on the base direction no longer fits
        }
        let l1 = l1_full.min((room / d1 as i128) as i64);
        let mut steps = vec![d1];
        steps.extend(&extra);
        let mut widths = vec![l1];
        widths.extend(std::iter::repeat(1).take(k - 1));
        if let Some(mut state) = eval.evaluate(&steps, &widths) {
            grow_widths(&mut state, eval);
            return Some(state);
        }
        if eval.exhausted() {
            return None;
        }
        q += 1;
    }
    None
}

/// splitmix-style mixing so each (seed, ambient, restart) stream is
/// independent and reproducible.
fn mix_seed(seed: u64, ambient: u64, restart: u32) -> u64 {
    let mut z = seed
        .wrapping_add(ambient.wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add((restart as u64).wrapping_mul(0xD1B5_4A32_D192_ED03));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// One hill-climb restart. Restart 0 prefers the warm start.
fn hill_climb_restart(
    ambient: u64,
    cfg: &SearchConfig,
    one_dim: Option<&FoundGap>,
    restart: u32,
    budget: u64,
    limits: &Limits,
) -> (Option<State>, u64, bool) {
    let mut eval = Evaluator {
        h: &cfg.poly,
        inputs: cfg.inputs,
        filters: cfg.filters,
        ambient,
        limits,
        budget_left: budget,
        evaluations: 0,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(cfg.seed, ambient, restart));
    let k = cfg.dims as usize;

    let mut current: Option<State> = if restart == 0 {
        warm_start(ambient, cfg.dims, one_dim, &mut eval)
    } else {
        None
    };
    // Random initial states until one is feasible.
    while current.is_none() && !eval.exhausted() {
        let cap = (ambient / k as u64).max(2);
        let mut steps: Vec<i64> = (0..k).map(|_| rng.gen_range(1..=cap) as i64).collect();
        if cfg.filters.require_prime_last_step {
            let mut p = steps[k - 1] as u64;
            while !is_prime_u64(p) {
                p += 1;
            }
            steps[k - 1] = p as i64;
        }
        let widths = vec![1i64; k];
        if let Some(mut state) = eval.evaluate(&steps, &widths) {
            grow_widths(&mut state, &mut eval);
            current = Some(state);
        }
    }
    let Some(mut current) = current else {
        return (None, eval.evaluations, eval.exhausted());
    };

    let mut stall = 0u32;
    while !eval.exhausted() && stall < 300 {
        let i = rng.gen_range(0..k);
        let move_step = rng.gen_bool(0.5);
        let op = rng.gen_range(0..8u32);
        let mut steps = current.steps.clone();
        let mut widths = current.widths.clone();
        let target = if move_step {
            &mut steps[i]
        } else {
            &mut widths[i]
        };
        let v = *target as i128;
        let moved: i128 = match op {
            0 => v + 1,
            1 => v - 1,
            2 => v * 2,
            3 => v / 2,
            4 => v * 3,
            5 => v / 3,
            6 => v * 5,
            _ => v / 5,
        };
        *target = moved.clamp(1, ambient as i128) as i64;
        if cfg.filters.require_prime_last_step && move_step && i == k - 1 {
            let mut p = steps[k - 1] as u64;
            while p <= 2 * ambient && !is_prime_u64(p) {
                p += 1;
            }
            steps[k - 1] = p as i64;
        }
        // Repair the span by shaving the widest direction.
        loop {
            let span: i128 = steps
                .iter()
                .zip(&widths)
                .map(|(&d, &l)| d as i128 * l as i128)
                .sum();
            if span <= ambient as i128 {
                break;
            }
            let j = (0..k)
                .max_by_key(|&j| (widths[j] as i128 * steps[j] as i128, j))
                .unwrap();
            if widths[j] <= 1 {
                break; // evaluate() will reject; move wasted
            }
            widths[j] -= 1;
        }
        match eval.evaluate(&steps, &widths) {
            Some(mut state) if state.size > current.size => {
                grow_widths(&mut state, &mut eval);
                current = state;
                stall = 0;
            }
            _ => stall += 1,
        }
    }
    let exhausted = eval.exhausted();
    (Some(current), eval.evaluations, exhausted)
}

/// Budget-capped exhaustive step grid for two or more directions: all
/// nondecreasing step tuples below `budget^{1/k}`, each completed by the
/// greedy width growth, preceded by the warm-start embedding.
fn exhaustive_high_dim(
    ambient: u64,
    cfg: &SearchConfig,
    one_dim: Option<&FoundGap>,
    limits: &Limits,
) -> (Option<State>, u64, bool) {
    let mut eval = Evaluator {
        h: &cfg.poly,
        inputs: cfg.inputs,
        filters: cfg.filters,
        ambient,
        limits,
        budget_left: cfg.budget,
        evaluations: 0,
    };
    let k = cfg.dims as usize;
    let mut best = warm_start(ambient, cfg.dims, one_dim, &mut eval);

    let grid = ((cfg.budget as f64).powf(1.0 / k as f64).floor() as u64)
        .clamp(2, ambient)
        .min(ambient);
    let mut tuple = vec![1u64; k];
    'outer: loop {
        let admissible = !cfg.filters.require_prime_last_step || is_prime_u64(tuple[k - 1]);
        let span: u128 = tuple.iter().map(|&d| d as u128).sum();
        if admissible && span <= ambient as u128 {
            let steps: Vec<i64> = tuple.iter().map(|&d| d as i64).collect();
            let widths = vec![1i64; k];
            if let Some(mut state) = eval.evaluate(&steps, &widths) {
                grow_widths(&mut state, &mut eval);
                if best.as_ref().map_or(true, |b| state.size > b.size) {
                    best = Some(state);
                }
            }
            if eval.exhausted() {
                break 'outer;
            }
        }
        // Next nondecreasing tuple below the grid cap.
        let mut j = k;
        loop {
            if j == 0 {
                break 'outer;
            }
            j -= 1;
            if tuple[j] < grid {
                tuple[j] += 1;
                for l in j + 1..k {
                    tuple[l] = tuple[j];
                }
                break;
            }
        }
    }
    let exhausted = eval.exhausted();
    (best, eval.evaluations, exhausted)
}

/// The reference envelope `N^{5/6} (ln N)^{1/3}` attached to every row.
fn reference_envelope(ambient: u64) -> f64 {
    let nf = ambient as f64;
    nf.powf(5.0 / 6.0) * nf.ln().cbrt()
}

/// Runs the configured search over the ambient sweep. Deterministic for a
/// fixed config: restarts are merged by (size, then lexicographic shape)
/// regardless of how they are scheduled.
pub fn extremal_search(cfg: &SearchConfig, limits: &Limits) -> Result<EnvelopeReport> {
    cfg.validate()?;
    let degree = cfg.poly.degree().unwrap() as u32;
    let mut rows = Vec::with_capacity(cfg.ambient_values.len());
    for &ambient in &cfg.ambient_values {
        if ambient == 0 {
            return Err(Error::InvalidInput("ambient bound must be positive".into()));
        }
        let one_dim = one_dim_scan(ambient, &cfg.poly, cfg.inputs, limits)?;
        let (state, evaluations, exhausted) = match (cfg.strategy, cfg.dims) {
            (Strategy::Exhaustive, 1) => {
                let state = one_dim.best.as_ref().map(|b| State {
                    steps: b.steps.clone(),
                    widths: b.widths.clone(),
                    size: b.size,
                });
                (state, ambient, false)
            }
            (Strategy::RandomRestartHillClimb, 1) => {
                // The one-dimensional problem is solved exactly; the climb
                // could only confirm it.
                let state = one_dim.best.as_ref().map(|b| State {
                    steps: b.steps.clone(),
                    widths: b.widths.clone(),
                    size: b.size,
                });
                (state, ambient, false)
            }
            (Strategy::Exhaustive, _) => {
                exhaustive_high_dim(ambient, cfg, one_dim.best.as_ref(), limits)
            }
            (Strategy::RandomRestartHillClimb, _) => {
                let per_restart = (cfg.budget / cfg.restarts as u64).max(1);
                let outcomes: Vec<(Option<State>, u64, bool)> = (0..cfg.restarts)
                    .into_par_iter()
                    .map(|r| {
                        hill_climb_restart(
                            ambient,
                            cfg,
                            one_dim.best.as_ref(),
                            r,
                            per_restart,
                            limits,
                        )
                    })
                    .collect();
                let mut best: Option<State> = None;
                let mut evaluations = 0;
                let mut exhausted = false;
                for (state, used, ex) in outcomes {
                    evaluations += used;
                    exhausted |= ex;
                    if let Some(s) = state {
                        let better = match &best {
                            None => true,
                            Some(b) => {
                                s.size > b.size
                                    || (s.size == b.size
                                        && (s.steps.clone(), s.widths.clone())
                                            < (b.steps.clone(), b.widths.clone()))
                            }
                        };
                        if better {
                            best = Some(s);
                        }
                    }
                }
                (best, evaluations, exhausted)
            }
        };

        let mut cross_checked = false;
        let witness = match state {
            None => None,
            Some(state) => {
                let gap = SymmetricGap::new(state.steps.clone(), state.widths.clone())?;
                match avoids(&gap, &cfg.poly, cfg.inputs, limits)? {
                    AvoidanceVerdict::Avoids => {}
                    AvoidanceVerdict::Contains { input, value } => {
                        return Err(Error::ConsistencyFailure(format!(
                            "search reported an avoiding progression that contains \
                             h({input}) = {value}"
                        )))
                    }
                }
                // Independent corroboration: the detection functional must
                // not find a value in a progression the oracle cleared.
                match DetectionInstance::new(gap.clone(), cfg.poly.clone(), cfg.inputs, limits)
                    .and_then(|inst| detection_count(&inst, limits))
                {
                    Ok(report) => {
                        if report.positive {
                            return Err(Error::ConsistencyFailure(format!(
                                "detection reports a value inside {:?}/{:?}, which the \
                                 avoidance oracle cleared",
                                gap.steps(),
                                gap.widths()
                            )));
                        }
                        cross_checked = true;
                    }
                    Err(Error::ConsistencyFailure(msg)) => {
                        return Err(Error::ConsistencyFailure(msg))
                    }
                    Err(_) => {} // outside detection guards; skip quietly
                }
                let proper = gap.is_proper_fast() == Some(true)
                    || gap
                        .properness(limits)
                        .map(|r| r.is_proper)
                        .unwrap_or(false);
                Some(FoundGap {
                    steps: state.steps,
                    widths: state.widths,
                    size: state.size,
                    proper,
                })
            }
        };
        let best_size = witness.as_ref().map_or(0, |w| w.size);
        let envelope = reference_envelope(ambient);
        rows.push(EnvelopeRow {
            ambient,
            best_size,
            envelope,
            ratio: best_size as f64 / envelope,
            witness,
            evaluations,
            budget_exhausted: exhausted,
            cross_checked,
        });
    }
    Ok(EnvelopeReport {
        dims: cfg.dims,
        poly: cfg.poly.to_string(),
        degree,
        inputs: cfg.inputs,
        strategy: cfg.strategy,
        seed: cfg.seed,
        budget: cfg.budget,
        restarts: cfg.restarts,
        rows,
    })
}

/// The density statements whose envelopes can be tabulated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Theorem {
    T1,
    T2,
    T3,
    Eq27,
}

impl std::str::FromStr for Theorem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Theorem> {
        match s {
            "t1" => Ok(Theorem::T1),
            "t2" => Ok(Theorem::T2),
            "t3" => Ok(Theorem::T3),
            "eq27" => Ok(Theorem::Eq27),
            other => Err(Error::InvalidInput(format!(
                "unknown envelope {other:?}; use t1, t2, t3, or eq27"
            ))),
        }
    }
}

impl std::fmt::Display for Theorem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Theorem::T1 => "t1",
            Theorem::T2 => "t2",
            Theorem::T3 => "t3",
            Theorem::Eq27 => "eq27",
        })
    }
}

/// Numeric envelope value at ambient `n`.
///
/// - `t1`: `n^{5/6} (ln n)^{1/3}` (degree and dims ignored).
/// - `t2`: `n^{1 - 1/(l (2^{l+2}+1)^{k-1})} (6k)^{2k} ln n`.
/// - `t3`: `n^{1 - c^k 5^{-l k}}` — `c` is not specified by the source
///   estimate; the caller supplies a stand-in value.
/// - `eq27`: `n^{1 - c^l / k}` — same caveat.
pub fn envelope_value(theorem: Theorem, n: u64, ell: u32, k: u32, c: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidInput("envelope needs n >= 2".into()));
    }
    if ell == 0 || k == 0 {
        return Err(Error::InvalidInput("envelope needs degree, dims >= 1".into()));
    }
    let nf = n as f64;
    Ok(match theorem {
        Theorem::T1 => nf.powf(5.0 / 6.0) * nf.ln().cbrt(),
        Theorem::T2 => {
            let base = (2f64.powi(ell as i32 + 2) + 1.0).powi(k as i32 - 1);
            let exponent = 1.0 - 1.0 / (ell as f64 * base);
            let kf = k as f64;
            nf.powf(exponent) * (6.0 * kf).powf(2.0 * kf) * nf.ln()
        }
        Theorem::T3 => {
            let exponent = 1.0 - c.powi(k as i32) * 5f64.powi(-((ell * k) as i32));
            nf.powf(exponent)
        }
        Theorem::Eq27 => {
            let exponent = 1.0 - c.powi(ell as i32) / k as f64;
            nf.powf(exponent)
        }
    })
}

/// One row of an envelope comparison table.
#[derive(Debug, Clone, Serialize)]
pub struct EnvelopeTableRow {
    pub ambient: u64,
    pub best_size: u64,
    pub envelope: f64,
    pub ratio: f64,
}

/// Best-found sizes against a chosen envelope, with a stability summary.
#[derive(Debug, Clone, Serialize)]
pub struct EnvelopeTable {
    pub theorem: Theorem,
    pub degree: u32,
    pub dims: u32,
    /// Stand-in for the implicit constant where the estimate leaves it
    /// unspecified (`t3`, `eq27`); recorded even when unused.
    pub c: f64,
    /// True when the envelope actually depends on the stand-in `c`.
    pub c_is_assumed: bool,
    pub rows: Vec<EnvelopeTableRow>,
    pub min_ratio: f64,
    pub max_ratio: f64,
    /// Whether the ratio column is nonincreasing across the sweep.
    pub ratios_nonincreasing: bool,
}

/// Tabulates search results against the chosen envelope.
pub fn envelope_report(results: &EnvelopeReport, theorem: Theorem, c: f64) -> Result<EnvelopeTable> {
    if results.rows.is_empty() {
        return Err(Error::InvalidInput("empty search results".into()));
    }
    let mut rows = Vec::with_capacity(results.rows.len());
    for row in &results.rows {
        let envelope = envelope_value(theorem, row.ambient, results.degree, results.dims, c)?;
        rows.push(EnvelopeTableRow {
            ambient: row.ambient,
            best_size: row.best_size,
            envelope,
            ratio: row.best_size as f64 / envelope,
        });
    }
    let min_ratio = rows.iter().map(|r| r.ratio).fold(f64::INFINITY, f64::min);
    let max_ratio = rows.iter().map(|r| r.ratio).fold(0.0f64, f64::max);
    let ratios_nonincreasing = rows.windows(2).all(|w| w[1].ratio <= w[0].ratio + 1e-12);
    Ok(EnvelopeTable {
        theorem,
        degree: results.degree,
        dims: results.dims,
        c,
        c_is_assumed: matches!(theorem, Theorem::T3 | Theorem::Eq27),
        rows,
        min_ratio,
        max_ratio,
        ratios_nonincreasing,
    })
}

/// Comma-separated rendering of an envelope table.
pub fn envelope_csv(table: &EnvelopeTable) -> String {
    let mut out = String::from("ambient,best_size,envelope,ratio\n");
    for r in &table.rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            r.ambient, r.best_size, r.envelope, r.ratio
        ));
    }
    out
}

/// Whitespace-column rendering (`N bestA envelope ratio`) for plotting.
pub fn envelope_plot_data(table: &EnvelopeTable) -> String {
    let mut out = String::from("# N bestA envelope ratio\n");
    for r in &table.rows {
        out.push_str(&format!(
            "{} {} {} {}\n",
            r.ambient, r.best_size, r.envelope, r.ratio
        ));
    }
    out
}

/// The density-envelope exponents for a polynomial of degree `l` in `k`
/// directions. Estimates whose constant `c` is unspecified are rendered
/// symbolically; fully explicit ones also come as exact fractions.
#[derive(Debug, Clone, Serialize)]
pub struct ExponentReport {
    pub degree: u32,
    pub dims: u32,
    /// `1 - 1/(l (2^{l+2}+1)^{k-1})`, numerically.
    pub t2_exponent: f64,
    /// The same exponent as an exact fraction `num/den`.
    pub t2_fraction: String,
    /// `1 - c^k / 5^{l k}` with the power expanded.
    pub t3_exponent: String,
    /// `1 - c / (l (200 l^2 4^l)^{k-1})` with the denominator expanded.
    pub t5_exponent: String,
    /// `1 - c^l / k`.
    pub eq27_exponent: String,
}

fn symbolic_power(base: &str, e: u32) -> String {
    if e == 1 {
        base.to_string()
    } else {
        format!("{base}^{e}")
    }
}

/// Exponent table for display alongside empirical ratio data.
pub fn exponent_report(h: &IntPolynomial, k: u32) -> Result<ExponentReport> {
    let ell = h
        .degree()
        .filter(|&l| l >= 1)
        .ok_or_else(|| Error::InvalidInput("exponents need a nonconstant polynomial".into()))? as u32;
    if k == 0 {
        return Err(Error::InvalidInput("exponents need dims >= 1".into()));
    }
    // t2: denominator l * (2^{l+2} + 1)^{k-1}, exactly.
    let base: BigInt = (BigInt::one() << (ell + 2)) + 1;
    let denom = BigInt::from(ell) * base.pow(k - 1);
    let numer = &denom - 1;
    let t2_fraction = format!("{numer}/{denom}");
    let t2_exponent = 1.0 - 1.0
        / denom
            .to_string()
            .parse::<f64>()
            .unwrap_or(f64::INFINITY);
    // t3: 1 - c^k / 5^{l k}.
    let t3_den = BigInt::from(5u32).pow(ell * k);
    let t3_exponent = format!("1 - {}/{}", symbolic_power("c", k), t3_den);
    // t5: 1 - c/(l * (200 l^2 4^l)^{k-1}).
    let block = BigInt::from(200u32) * BigInt::from(ell) * BigInt::from(ell)
        * BigInt::from(4u32).pow(ell);
    let t5_den = BigInt::from(ell) * block.pow(k - 1);
    let t5_exponent = format!("1 - c/{t5_den}");
    // eq27: 1 - c^l / k.
    let eq27_exponent = if k == 1 {
        format!("1 - {}", symbolic_power("c", ell))
    } else {
        format!("1 - {}/{k}", symbolic_power("c", ell))
    };
    Ok(ExponentReport {
        degree: ell,
        dims: k,
        t2_exponent,
        t2_fraction,
        t3_exponent,
        t5_exponent,
        eq27_exponent,
    })
}
