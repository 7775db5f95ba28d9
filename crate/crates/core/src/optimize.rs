//! Multi-start Nelder-Mead search over pure states.
//!
//! A state on `dim` levels is parameterized by `2·dim` ambient real
//! coordinates (real parts, then imaginary parts). Every trial point is
//! renormalized before evaluation, so the objective only ever sees unit
//! vectors. Product states use one such block per factor.
//!
//! Restart `r` draws its start from stream `r` of the seed, so the merged
//! result is the same for any thread count.

use alloc::vec::Vec;

use crate::error::{QldpError, Result};
use crate::matrix::{c, kron_vec, Complex};
use crate::rng::{haar_vector, stream_rng};
use crate::state::PureState;

/// Optimizer knobs shared by every search in the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerOpts {
    pub restarts: usize,
    pub max_iters: usize,
    pub tol: f64,
    pub seed: u64,
    /// Points per axis for the Bloch-sphere grid.
    pub grid_resolution: usize,
    /// Worker threads for restarts; 0 picks the available parallelism.
    /// Ignored without the `std` feature.
    pub threads: usize,
}

impl Default for OptimizerOpts {
    fn default() -> Self {
        Self {
            restarts: 64,
            max_iters: 2000,
            tol: 1e-8,
            seed: 42,
            grid_resolution: 720,
            threads: 0,
        }
    }
}

impl OptimizerOpts {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let checks = [
            ("restarts", self.restarts as f64, self.restarts > 0),
            ("max_iters", self.max_iters as f64, self.max_iters > 0),
            ("tol", self.tol, self.tol > 0.0 && self.tol.is_finite()),
            (
                "grid_resolution",
                self.grid_resolution as f64,
                self.grid_resolution >= 2,
            ),
        ];
        for (name, value, ok) in checks {
            if !ok {
                return Err(QldpError::InvalidParameter { name, value });
            }
        }
        Ok(())
    }
}

/// Outcome of a maximization.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult {
    /// Largest objective value seen at any evaluation; +∞ if the objective
    /// reported a singular point.
    pub value: f64,
    /// Unit vector per block at the best evaluation.
    pub blocks: Vec<Vec<Complex>>,
    /// Tensor product of `blocks`.
    pub state: Vec<Complex>,
    pub evaluations: usize,
}

impl SearchResult {
    pub fn is_singular(&self) -> bool {
        self.value == f64::INFINITY
    }

    pub fn witness(&self) -> PureState {
        PureState::from_unit_unchecked(self.state.clone())
    }
}

const NM_ALPHA: f64 = 1.0;
const NM_GAMMA: f64 = 2.0;
const NM_RHO: f64 = 0.5;
const NM_SIGMA: f64 = 0.5;
const INITIAL_STEP: f64 = 0.5;
const POLISH_ROUNDS: usize = 4;
const POLISH_SHRINK: f64 = 0.1;

/// Nelder-Mead minimization of `g`. `g` may rewrite its argument (to project
/// it back onto the feasible set) and returns −∞ to request an immediate stop.
fn nelder_mead<G: FnMut(&mut [f64]) -> f64>(
    x0: &[f64],
    step: f64,
    max_iters: usize,
    tol: f64,
    g: &mut G,
) -> (Vec<f64>, f64) {
    let n = x0.len();
    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    let mut values: Vec<f64> = Vec::with_capacity(n + 1);
    let mut first = x0.to_vec();
    let v = g(&mut first);
    if v == f64::NEG_INFINITY {
        return (first, v);
    }
    simplex.push(first);
    values.push(v);
    for i in 0..n {
        let mut x = x0.to_vec();
        x[i] += step;
        let v = g(&mut x);
        if v == f64::NEG_INFINITY {
            return (x, v);
        }
        simplex.push(x);
        values.push(v);
    }

    let mut order: Vec<usize> = (0..=n).collect();
    let mut centroid = alloc::vec![0.0; n];
    for _ in 0..max_iters {
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        let (best, worst, second) = (order[0], order[n], order[n - 1]);
        if values[worst] - values[best] <= tol * values[best].abs().max(1.0) {
            break;
        }
        centroid.iter_mut().for_each(|x| *x = 0.0);
        for &k in &order[..n] {
            for (cj, xj) in centroid.iter_mut().zip(&simplex[k]) {
                *cj += xj / n as f64;
            }
        }
        let along = |t: f64, from: &[f64]| -> Vec<f64> {
            centroid
                .iter()
                .zip(from)
                .map(|(cj, wj)| cj + t * (cj - wj))
                .collect()
        };

        let mut xr = along(NM_ALPHA, &simplex[worst]);
        let fr = g(&mut xr);
        if fr == f64::NEG_INFINITY {
            return (xr, fr);
        }
        if fr < values[best] {
            let mut xe = along(NM_GAMMA, &simplex[worst]);
            let fe = g(&mut xe);
            if fe == f64::NEG_INFINITY {
                return (xe, fe);
            }
            if fe < fr {
                simplex[worst] = xe;
                values[worst] = fe;
            } else {
                simplex[worst] = xr;
                values[worst] = fr;
            }
            continue;
        }
        if fr < values[second] {
            simplex[worst] = xr;
            values[worst] = fr;
            continue;
        }
        let (mut xc, outside) = if fr < values[worst] {
            (along(NM_RHO, &simplex[worst]), true)
        } else {
            (along(-NM_RHO, &simplex[worst]), false)
        };
        let fc = g(&mut xc);
        if fc == f64::NEG_INFINITY {
            return (xc, fc);
        }
        if (outside && fc <= fr) || (!outside && fc < values[worst]) {
            simplex[worst] = xc;
            values[worst] = fc;
            continue;
        }
        let anchor = simplex[best].clone();
        for &k in &order[1..] {
            let mut x: Vec<f64> = anchor
                .iter()
                .zip(&simplex[k])
                .map(|(b, xk)| b + NM_SIGMA * (xk - b))
                .collect();
            let v = g(&mut x);
            if v == f64::NEG_INFINITY {
                return (x, v);
            }
            simplex[k] = x;
            values[k] = v;
        }
    }
    let best = (0..=n)
        .min_by(|&a, &b| values[a].total_cmp(&values[b]))
        .expect("non-empty simplex");
    (simplex.swap_remove(best), values[best])
}

/// Ambient coordinates of a unit vector.
fn encode(blocks: &[Vec<Complex>]) -> Vec<f64> {
    let mut x = Vec::new();
    for b in blocks {
        x.extend(b.iter().map(|z| z.re));
        x.extend(b.iter().map(|z| z.im));
    }
    x
}

/// Renormalizes each block of `x` in place and returns the block vectors,
/// or `None` when a block collapsed to the origin.
fn decode(x: &mut [f64], dims: &[usize]) -> Option<Vec<Vec<Complex>>> {
    let mut out = Vec::with_capacity(dims.len());
    let mut offset = 0;
    for &d in dims {
        let block = &mut x[offset..offset + 2 * d];
        let norm = libm::sqrt(block.iter().map(|v| v * v).sum());
        if !(norm > 1e-150) || !norm.is_finite() {
            return None;
        }
        block.iter_mut().for_each(|v| *v /= norm);
        out.push((0..d).map(|i| c(block[i], block[d + i])).collect());
        offset += 2 * d;
    }
    Some(out)
}

fn product(blocks: &[Vec<Complex>]) -> Vec<Complex> {
    let mut state = alloc::vec![c(1.0, 0.0)];
    for b in blocks {
        state = kron_vec(&state, b);
    }
    state
}

struct Best {
    value: f64,
    blocks: Vec<Vec<Complex>>,
    evaluations: usize,
}

impl Best {
    fn into_result(self) -> SearchResult {
        let state = product(&self.blocks);
        SearchResult {
            value: self.value,
            blocks: self.blocks,
            state,
            evaluations: self.evaluations,
        }
    }
}

/// One local search (initial run plus polishing) from `start`.
fn local_search<F: Fn(&[Complex]) -> f64>(
    f: &F,
    dims: &[usize],
    start: &[Vec<Complex>],
    opts: &OptimizerOpts,
) -> Best {
    let mut best = Best {
        value: f64::NEG_INFINITY,
        blocks: start.to_vec(),
        evaluations: 0,
    };
    let mut g = |x: &mut [f64]| -> f64 {
        let Some(blocks) = decode(x, dims) else {
            return f64::INFINITY;
        };
        let state = product(&blocks);
        let v = f(&state);
        best.evaluations += 1;
        let v = if v.is_nan() { f64::NEG_INFINITY } else { v };
        // strict comparison keeps the first of equal values
        if v > best.value {
            best.value = v;
            best.blocks = blocks;
        }
        -v
    };
    let mut x = encode(start);
    let mut step = INITIAL_STEP;
    let mut last = f64::INFINITY;
    for _ in 0..POLISH_ROUNDS {
        let (xb, gb) = nelder_mead(&x, step, opts.max_iters, opts.tol, &mut g);
        if gb == f64::NEG_INFINITY {
            break;
        }
        let improved = last - gb;
        x = xb;
        last = gb;
        step *= POLISH_SHRINK;
        if improved.is_finite() && improved <= opts.tol * gb.abs().max(1.0) {
            break;
        }
    }
    best
}

fn merge(results: Vec<Best>) -> Best {
    let mut evaluations = 0;
    let mut out: Option<Best> = None;
    for r in results {
        evaluations += r.evaluations;
        match &out {
            Some(b) if r.value <= b.value => {}
            _ => out = Some(r),
        }
    }
    let mut out = out.expect("at least one restart");
    out.evaluations = evaluations;
    out
}

#[cfg(feature = "std")]
fn worker_count(opts: &OptimizerOpts, jobs: usize) -> usize {
    let wanted = if opts.threads == 0 {
        std::thread::available_parallelism().map_or(1, usize::from)
    } else {
        opts.threads
    };
    wanted.clamp(1, jobs.max(1))
}

/// Runs `job(0..jobs)` and returns the outputs in index order.
fn run_jobs<T: Send, J: Fn(usize) -> T + Sync>(jobs: usize, opts: &OptimizerOpts, job: J) -> Vec<T> {
    #[cfg(feature = "std")]
    {
        let workers = worker_count(opts, jobs);
        if workers > 1 {
            let job = &job;
            let mut slots: Vec<Option<T>> = (0..jobs).map(|_| None).collect();
            std::thread::scope(|scope| {
                let handles: Vec<_> = (0..workers)
                    .map(|w| {
                        scope.spawn(move || {
                            (w..jobs)
                                .step_by(workers)
                                .map(|i| (i, job(i)))
                                .collect::<Vec<_>>()
                        })
                    })
                    .collect();
                for h in handles {
                    for (i, v) in h.join().expect("optimizer worker panicked") {
                        slots[i] = Some(v);
                    }
                }
            });
            return slots.into_iter().map(|s| s.expect("job ran")).collect();
        }
    }
    #[cfg(not(feature = "std"))]
    let _ = opts;
    (0..jobs).map(job).collect()
}

/// Maximizes `f` over product unit vectors with factor dimensions `dims`.
///
/// Each entry of `starts` is run as an extra restart ahead of the
/// `opts.restarts` Haar-random ones. Ties keep the earliest restart.
pub fn maximize_product<F: Fn(&[Complex]) -> f64 + Sync>(
    dims: &[usize],
    f: &F,
    opts: &OptimizerOpts,
    starts: &[Vec<Vec<Complex>>],
) -> SearchResult {
    let extra = starts.len();
    let results = run_jobs(extra + opts.restarts, opts, |i| {
        let start: Vec<Vec<Complex>> = if i < extra {
            starts[i].clone()
        } else {
            let mut rng = stream_rng(opts.seed, (i - extra) as u64);
            dims.iter().map(|&d| haar_vector(d, &mut rng)).collect()
        };
        local_search(f, dims, &start, opts)
    });
    merge(results).into_result()
}

/// Maximizes `f` over unit vectors in dimension `dim`.
pub fn maximize_pure_state<F: Fn(&[Complex]) -> f64 + Sync>(
    dim: usize,
    f: &F,
    opts: &OptimizerOpts,
) -> SearchResult {
    maximize_product(&[dim], f, opts, &[])
}

/// As [`maximize_pure_state`] with caller-supplied extra starting points.
pub fn maximize_pure_state_from<F: Fn(&[Complex]) -> f64 + Sync>(
    dim: usize,
    f: &F,
    opts: &OptimizerOpts,
    starts: &[Vec<Complex>],
) -> SearchResult {
    let starts: Vec<Vec<Vec<Complex>>> = starts.iter().map(|s| alloc::vec![s.clone()]).collect();
    maximize_product(&[dim], f, opts, &starts)
}

/// Bloch-sphere maximum of a qubit objective.
#[derive(Debug, Clone, PartialEq)]
pub struct BlochMaximum {
    pub value: f64,
    pub theta: f64,
    pub phi: f64,
    pub evaluations: usize,
}

/// Grid search over (θ, φ) with `grid_resolution` points per axis followed
/// by a Nelder-Mead refinement from the best grid point.
pub fn maximize_bloch<F: Fn(&[Complex]) -> f64>(f: &F, opts: &OptimizerOpts) -> BlochMaximum {
    use core::f64::consts::PI;
    let r = opts.grid_resolution.max(2);
    let eval = |theta: f64, phi: f64| -> f64 {
        let v = f(PureState::bloch(theta, phi).amplitudes());
        if v.is_nan() {
            f64::NEG_INFINITY
        } else {
            v
        }
    };
    let mut best = BlochMaximum {
        value: f64::NEG_INFINITY,
        theta: 0.0,
        phi: 0.0,
        evaluations: 0,
    };
    for i in 0..r {
        let theta = PI * i as f64 / (r - 1) as f64;
        for j in 0..r {
            let phi = 2.0 * PI * j as f64 / r as f64;
            let v = eval(theta, phi);
            best.evaluations += 1;
            if v > best.value {
                best.value = v;
                best.theta = theta;
                best.phi = phi;
            }
            if v == f64::INFINITY {
                return best;
            }
        }
    }
    let step = PI / (r - 1) as f64;
    let start = [best.theta, best.phi];
    let mut g = |x: &mut [f64]| -> f64 {
        let v = eval(x[0], x[1]);
        best.evaluations += 1;
        if v > best.value {
            best.value = v;
            best.theta = x[0];
            best.phi = x[1];
        }
        -v
    };
    let _ = nelder_mead(&start, step, opts.max_iters, opts.tol * 1e-2, &mut g);
    best
}
