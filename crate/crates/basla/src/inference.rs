//! Maximum-likelihood fitting, AIC/BIC ranking, and the nested
//! likelihood-ratio test of Laplace against BASLa2.
//!
//! The likelihood is nondifferentiable wherever the location parameter
//! crosses an observation, so the engine is derivative-free: a multi-start
//! Nelder-Mead search (optionally preceded by a simulated-annealing pass per
//! start) over `(location, log scale[, shape])`. Restarts are independent,
//! run in parallel, and merge deterministically: best log-likelihood wins,
//! ties broken by the lowest restart index.

use crate::competitors::{default_start, Family, ModelSpec};
use crate::error::Error;
use crate::dist::{normalizer, BaslaParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;

/// 99% critical value of the chi-square distribution with one degree of
/// freedom.
pub const CHI_SQUARE_1DF_99: f64 = 6.635;

/// An ordered collection of real observations.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    name: String,
    values: Vec<f64>,
    source_note: String,
}

impl Dataset {
    /// Rejects empty data and non-finite observations.
    pub fn new(
        name: impl Into<String>,
        values: Vec<f64>,
        source_note: impl Into<String>,
    ) -> Result<Self, Error> {
        if values.is_empty() {
            return Err(Error::EmptyData);
        }
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFiniteData { index, value });
        }
        Ok(Dataset { name: name.into(), values, source_note: source_note.into() })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn source_note(&self) -> &str {
        &self.source_note
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction rejects empty data
    }
}

/// Optimizer options; the defaults match the documented fitting contract.
#[derive(Debug, Clone, PartialEq)]
pub struct FitOptions {
    /// Independent optimizer starts (location/scale seeds crossed with a
    /// shape ladder plus jitter).
    pub restarts: usize,
    /// Objective-evaluation budget per start.
    pub max_evals_per_start: usize,
    /// Convergence threshold on the simplex diameter in scaled coordinates.
    pub tol: f64,
    /// Seed for start jitter and the annealing pass.
    pub seed: u64,
    /// Run a simulated-annealing pass before the simplex polish.
    pub annealing: bool,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            restarts: 16,
            max_evals_per_start: 10_000,
            tol: 1e-8,
            seed: 0xBA5_1A,
            annealing: false,
        }
    }
}

/// Outcome of one maximum-likelihood fit.
#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub spec: ModelSpec,
    /// Sum of log-densities at the fitted parameters, re-evaluated rather
    /// than carried from the optimizer.
    pub log_likelihood: f64,
    /// `2k - 2 logL`.
    pub aic: f64,
    /// `k ln n - 2 logL`.
    pub bic: f64,
    pub evaluations: u64,
    pub converged: bool,
    pub restarts_used: usize,
}

/// Log-likelihood of BASLa2(α, μ, β): the sum form with the per-sample
/// kernel terms and the hoisted normalizing constants.
pub fn log_likelihood_basla(data: &Dataset, params: BaslaParams) -> f64 {
    let (alpha, mu, beta) = (params.alpha(), params.mu(), params.beta());
    let n = data.len() as f64;
    let mut acc = 0.0;
    for &z in data.values() {
        let u = (z - mu) / beta;
        let k = (1.0 - alpha * u).powi(2) + 1.0;
        acc += 2.0 * k.ln() - u.abs();
    }
    acc - n * normalizer(alpha).ln() - n * (2.0 * beta).ln()
}

/// Search box in transformed coordinates `(location, ln scale[, shape])`.
struct SearchSpace {
    family: Family,
    lower: Vec<f64>,
    upper: Vec<f64>,
    /// Coordinate scales used for the convergence test and jitter.
    scales: Vec<f64>,
}

impl SearchSpace {
    fn new(family: Family, data: &Dataset) -> Result<Self, Error> {
        let min = data.values().iter().copied().fold(f64::INFINITY, f64::min);
        let max = data.values().iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let range = max - min;
        if !(range > 0.0) {
            return Err(Error::DegenerateData);
        }
        let mut lower = vec![min - range, (1e-6 * range).ln()];
        let mut upper = vec![max + range, (10.0 * range).ln()];
        let mut scales = vec![range, 1.0];
        if family.parameter_count() == 3 {
            lower.push(-50.0);
            upper.push(50.0);
            scales.push(1.0);
        }
        Ok(SearchSpace { family, lower, upper, scales })
    }

    fn dim(&self) -> usize {
        self.lower.len()
    }

    fn params_from(&self, x: &[f64]) -> Vec<f64> {
        let mut p = Vec::with_capacity(x.len());
        p.push(x[0]);
        p.push(x[1].exp());
        if x.len() == 3 {
            p.push(x[2]);
        }
        p
    }

    /// Negative log-likelihood at the clamped point plus a quadratic pull
    /// back into the box.
    fn objective(&self, data: &Dataset, x: &[f64]) -> f64 {
        let mut clamped = [0.0_f64; 3];
        let mut penalty = 0.0;
        for d in 0..self.dim() {
            let c = x[d].clamp(self.lower[d], self.upper[d]);
            penalty += ((x[d] - c) / self.scales[d]).powi(2);
            clamped[d] = c;
        }
        let params = self.params_from(&clamped[..self.dim()]);
        let spec = ModelSpec::new(self.family, params)
            .expect("clamped coordinates are always valid parameters");
        let nll: f64 = -data.values().iter().map(|&z| spec.log_pdf(z)).sum::<f64>();
        nll + 1e4 * penalty * data.len() as f64
    }
}

struct StartOutcome {
    x: Vec<f64>,
    value: f64,
    evaluations: u64,
    converged: bool,
}

/// Maximum-likelihood fit of `family` to `data`.
pub fn fit(data: &Dataset, family: Family, options: &FitOptions) -> Result<FitResult, Error> {
    let space = SearchSpace::new(family, data)?;
    let start = default_start(family, data)?;
    let base: Vec<f64> = {
        let mut x = vec![start[0], start[1].ln()];
        if start.len() == 3 {
            x.push(start[2]);
        }
        x
    };

    let restarts = options.restarts.max(1);
    let shape_ladder = [-2.0, -1.0, 0.0, 1.0, 2.0];

    let outcomes: Vec<StartOutcome> = (0..restarts)
        .into_par_iter()
        .map(|i| {
            let mut x0 = base.clone();
            let mut rng = ChaCha12Rng::seed_from_u64(options.seed);
            rng.set_stream(i as u64);
            if i > 0 {
                // Jittered location/scale crossed with the shape ladder.
                x0[0] += space.scales[0] * (rng.gen::<f64>() - 0.5) * 0.5;
                x0[1] += (rng.gen::<f64>() - 0.5) * 1.4;
                if x0.len() == 3 {
                    x0[2] = shape_ladder[i % shape_ladder.len()]
                        + 0.25 * (rng.gen::<f64>() - 0.5);
                }
            }
            let budget = options.max_evals_per_start;
            let f = |x: &[f64]| space.objective(data, x);
            if options.annealing {
                let (sa_x, sa_evals) = anneal(&f, &space, &x0, budget / 2, &mut rng);
                let mut out = nelder_mead(&f, &space, &sa_x, budget - budget / 2, options.tol);
                out.evaluations += sa_evals;
                out
            } else {
                nelder_mead(&f, &space, &x0, budget, options.tol)
            }
        })
        .collect();

    let total_evals: u64 = outcomes.iter().map(|o| o.evaluations).sum();
    let best = outcomes
        .iter()
        .enumerate()
        .min_by(|(ia, a), (ib, b)| a.value.total_cmp(&b.value).then(ia.cmp(ib)))
        .map(|(_, o)| o)
        .expect("at least one restart");

    let params = space.params_from(&best.x);
    let spec = ModelSpec::new(family, params)?;
    let log_likelihood: f64 = data.values().iter().map(|&z| spec.log_pdf(z)).sum();
    let k = spec.k() as f64;
    let n = data.len() as f64;
    Ok(FitResult {
        aic: 2.0 * k - 2.0 * log_likelihood,
        bic: k * n.ln() - 2.0 * log_likelihood,
        spec,
        log_likelihood,
        evaluations: total_evals,
        converged: best.converged,
        restarts_used: restarts,
    })
}

/// Nelder-Mead simplex minimization with standard coefficients. Converges
/// when the simplex diameter in scaled coordinates drops below `tol`.
fn nelder_mead<F: Fn(&[f64]) -> f64>(
    f: &F,
    space: &SearchSpace,
    x0: &[f64],
    max_evals: usize,
    tol: f64,
) -> StartOutcome {
    const REFLECT: f64 = 1.0;
    const EXPAND: f64 = 2.0;
    const CONTRACT: f64 = 0.5;
    const SHRINK: f64 = 0.5;

    let dim = x0.len();
    let mut evals: u64 = 0;
    let eval = |x: &[f64], evals: &mut u64| {
        *evals += 1;
        f(x)
    };

    let steps = [0.1 * space.scales[0], 0.25, 0.5];
    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(dim + 1);
    simplex.push(x0.to_vec());
    for d in 0..dim {
        let mut v = x0.to_vec();
        v[d] += steps[d];
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| eval(v, &mut evals)).collect();

    let mut converged = false;
    while evals < max_evals as u64 {
        // Order: best first, worst last.
        let mut order: Vec<usize> = (0..=dim).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        let best = order[0];
        let worst = order[dim];
        let second_worst = order[dim - 1];

        let diameter = simplex
            .iter()
            .map(|v| {
                (0..dim)
                    .map(|d| ((v[d] - simplex[best][d]) / space.scales[d]).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        if diameter < tol {
            converged = true;
            break;
        }

        let mut centroid = vec![0.0; dim];
        for &i in order.iter().take(dim) {
            for d in 0..dim {
                centroid[d] += simplex[i][d];
            }
        }
        for c in centroid.iter_mut() {
            *c /= dim as f64;
        }

        let reflected: Vec<f64> = (0..dim)
            .map(|d| centroid[d] + REFLECT * (centroid[d] - simplex[worst][d]))
            .collect();
        let reflected_value = eval(&reflected, &mut evals);

        if reflected_value < values[best] {
            let expanded: Vec<f64> = (0..dim)
                .map(|d| centroid[d] + EXPAND * (reflected[d] - centroid[d]))
                .collect();
            let expanded_value = eval(&expanded, &mut evals);
            if expanded_value < reflected_value {
                simplex[worst] = expanded;
                values[worst] = expanded_value;
            } else {
                simplex[worst] = reflected;
                values[worst] = reflected_value;
            }
            continue;
        }
        if reflected_value < values[second_worst] {
            simplex[worst] = reflected;
            values[worst] = reflected_value;
            continue;
        }

        let contracted: Vec<f64> = (0..dim)
            .map(|d| centroid[d] + CONTRACT * (simplex[worst][d] - centroid[d]))
            .collect();
        let contracted_value = eval(&contracted, &mut evals);
        if contracted_value < values[worst] {
            simplex[worst] = contracted;
            values[worst] = contracted_value;
            continue;
        }

        for &i in order.iter().skip(1) {
            let shrunk: Vec<f64> = (0..dim)
                .map(|d| simplex[best][d] + SHRINK * (simplex[i][d] - simplex[best][d]))
                .collect();
            simplex[i] = shrunk;
            values[i] = eval(&simplex[i], &mut evals);
        }
    }

    let best = values
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| a.total_cmp(b))
        .map(|(i, _)| i)
        .expect("simplex is nonempty");
    StartOutcome {
        x: simplex[best].clone(),
        value: values[best],
        evaluations: evals,
        converged,
    }
}

/// Geometric-cooling simulated annealing inside the search box; used as a
/// global pre-pass when the annealing mode is on.
fn anneal<F: Fn(&[f64]) -> f64>(
    f: &F,
    space: &SearchSpace,
    x0: &[f64],
    max_evals: usize,
    rng: &mut ChaCha12Rng,
) -> (Vec<f64>, u64) {
    let dim = x0.len();
    let mut current = x0.to_vec();
    let mut current_value = f(&current);
    let mut best = current.clone();
    let mut best_value = current_value;
    let mut evals: u64 = 1;

    let t_initial: f64 = 10.0;
    let t_final: f64 = 1e-4;
    let steps = max_evals.max(2) as f64;
    let cooling = (t_final / t_initial).powf(1.0 / steps);
    let mut temperature = t_initial;

    while evals < max_evals as u64 {
        let fraction = temperature / t_initial;
        let candidate: Vec<f64> = (0..dim)
            .map(|d| {
                let width = (space.upper[d] - space.lower[d]).min(4.0 * space.scales[d]);
                let delta = fraction * width * (2.0 * rng.gen::<f64>() - 1.0);
                (current[d] + delta).clamp(space.lower[d], space.upper[d])
            })
            .collect();
        let candidate_value = f(&candidate);
        evals += 1;

        let delta = candidate_value - current_value;
        if delta < 0.0 || rng.gen::<f64>() < (-delta / temperature).exp() {
            current = candidate;
            current_value = candidate_value;
            if current_value < best_value {
                best = current.clone();
                best_value = current_value;
            }
        }
        temperature = (temperature * cooling).max(t_final);
    }
    (best, evals)
}

/// Per-family results ranked by AIC, with failed fits reported alongside.
#[derive(Debug, Clone)]
pub struct CompareOutcome {
    /// Successful fits sorted by AIC ascending, ties broken by BIC.
    pub ranked: Vec<FitResult>,
    pub failures: Vec<(Family, Error)>,
}

/// Fits each family and ranks the outcomes; per-family errors do not abort
/// the rest.
pub fn compare(
    data: &Dataset,
    families: &[Family],
    options: &FitOptions,
) -> Result<CompareOutcome, Error> {
    if families.len() < 2 {
        return Err(Error::TooFewFamilies { got: families.len() });
    }
    let mut ranked = Vec::new();
    let mut failures = Vec::new();
    for &family in families {
        match fit(data, family, options) {
            Ok(result) => ranked.push(result),
            Err(err) => failures.push((family, err)),
        }
    }
    ranked.sort_by(|a, b| a.aic.total_cmp(&b.aic).then(a.bic.total_cmp(&b.bic)));
    Ok(CompareOutcome { ranked, failures })
}

/// Likelihood-ratio test of the nested pair La(μ, β) within BASLa2(α, μ, β).
#[derive(Debug, Clone)]
pub struct LrTestResult {
    /// `2 (logL_full - logL_null)`, clamped at zero.
    pub statistic: f64,
    pub df: u32,
    pub critical_99: f64,
    pub reject_null: bool,
    pub null_fit: FitResult,
    pub full_fit: FitResult,
}

/// Fits the Laplace null (α = 0) and the full family, then compares twice
/// the log-likelihood gap against the 99% chi-square critical value.
pub fn lr_test(data: &Dataset, options: &FitOptions) -> Result<LrTestResult, Error> {
    let null_fit = fit(data, Family::Laplace, options)?;
    let full_fit = fit(data, Family::Basla2, options)?;
    let statistic = (2.0 * (full_fit.log_likelihood - null_fit.log_likelihood)).max(0.0);
    Ok(LrTestResult {
        statistic,
        df: 1,
        critical_99: CHI_SQUARE_1DF_99,
        reject_null: statistic > CHI_SQUARE_1DF_99,
        null_fit,
        full_fit,
    })
}
