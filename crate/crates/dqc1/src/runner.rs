//! Runs a configured experiment and checks verification tables.

use dqc1_core::circuit::{ControlQubit, Dqc1Instance};
use dqc1_core::entpower::{
    brute_force_entpower_with, brute_force_min_mixing_with, decompose_from_t, ensemble_average, entpower_alpha,
    entpower_bounds, entpower_standard, fourier_ensemble, lambda_factor, support_rank, SearchOptions,
};
use dqc1_core::measurement::{entpower_from_rounds, error_budget, estimate_trace, rounds_for_budget};
use dqc1_core::numerics::{random_right_unitary, ComplexMatrix, SeededRng};
use dqc1_core::{tol, C64};
use rayon::prelude::*;

use crate::config::{Experiment, ExperimentConfig};
use crate::error::{CliError, Result};
use crate::results::ResultRow;

/// Stream for the unitary and register state shared by every point.
const SETUP_STREAM: u64 = 0;
/// Parent stream of the per-point generators.
const POINT_STREAM: u64 = 1;
/// Ensemble cardinality for control decompositions.
const CONTROL_K: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq)]
enum Point {
    Shots { shots: u64 },
    Alpha(f64),
    Fourier,
    Sample(usize),
    Bounds,
}

impl Point {
    fn describe(&self) -> String {
        match self {
            Point::Shots { shots } => format!("shots = {shots}"),
            Point::Alpha(a) => format!("alpha = {a}"),
            Point::Fourier => "Fourier ensemble".into(),
            Point::Sample(i) => format!("sample {i}"),
            Point::Bounds => "bounds".into(),
        }
    }
}

struct Context<'a> {
    cfg: &'a ExperimentConfig,
    unitary: ComplexMatrix,
    rho: ComplexMatrix,
    control: ControlQubit,
}

impl Context<'_> {
    fn instance(&self, control: ControlQubit) -> dqc1_core::Result<Dqc1Instance> {
        Dqc1Instance::new(self.unitary.clone(), control)?.with_system_state(self.rho.clone())
    }
}

/// Rows for every parameter point, in point order regardless of scheduling.
///
/// Point `i` draws from stream `fork(i)` of the seed, so the output depends
/// only on the config.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    cfg.validate()?;
    let mut setup = SeededRng::new(cfg.seed, SETUP_STREAM);
    let unitary = cfg.unitary_spec()?.build(cfg.n, &mut setup)?;
    let rho = cfg.rho_spec()?.build(cfg.n, &mut setup)?;
    let ctx = Context {
        cfg,
        unitary,
        rho,
        control: cfg.control()?,
    };
    let points = points(cfg);
    let parent = SeededRng::new(cfg.seed, POINT_STREAM);

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Format(format!("thread pool: {e}")))?;
    let per_point: Vec<Vec<ResultRow>> = pool.install(|| {
        points
            .par_iter()
            .enumerate()
            .map(|(i, p)| {
                let mut rng = parent.fork(i as u64);
                evaluate(&ctx, *p, &mut rng).map_err(|e| {
                    CliError::core(format!("{} at {}", cfg.experiment.id(), p.describe()), e)
                })
            })
            .collect::<Result<_>>()
    })?;
    Ok(per_point.into_iter().flatten().collect())
}

fn points(cfg: &ExperimentConfig) -> Vec<Point> {
    let samples = cfg.samples_or_default();
    match cfg.experiment {
        Experiment::TraceVsShots => cfg
            .shots
            .iter()
            .flat_map(|&shots| std::iter::repeat_n(Point::Shots { shots }, samples))
            .collect(),
        Experiment::EntpowerVsAlpha | Experiment::ComplexityCurve | Experiment::VerifyTheorem2 => {
            cfg.alpha_grid().into_iter().map(Point::Alpha).collect()
        }
        Experiment::VerifyTheorem1 => std::iter::once(Point::Fourier).chain((0..samples).map(Point::Sample)).collect(),
        Experiment::VerifyTheorem3 => std::iter::once(Point::Bounds).chain((0..samples).map(Point::Sample)).collect(),
    }
}

fn evaluate(ctx: &Context, point: Point, rng: &mut SeededRng) -> dqc1_core::Result<Vec<ResultRow>> {
    let cfg = ctx.cfg;
    let seed = cfg.seed;
    let id = cfg.experiment.id();
    let row = |suffix: &str, name: &str, value: f64, measured: f64, reference: f64| {
        let experiment = if suffix.is_empty() { id.to_owned() } else { format!("{id}/{suffix}") };
        ResultRow::new(experiment, name, value, measured, reference, seed)
    };
    let u = &ctx.unitary;
    let d = u.dim();

    Ok(match (cfg.experiment, point) {
        (Experiment::TraceVsShots, Point::Shots { shots }) => {
            let inst = ctx.instance(ctx.control)?;
            let est = estimate_trace(&inst, shots, rng)?;
            let t = inst.weighted_trace();
            let l = shots as f64;
            vec![
                row("re", "shots", l, est.trace_estimate.re, t.re),
                row("im", "shots", l, est.trace_estimate.im, t.im),
            ]
        }
        (Experiment::EntpowerVsAlpha, Point::Alpha(alpha)) => {
            let inst = ctx.instance(ControlQubit::alpha(alpha)?)?;
            let opts = SearchOptions {
                samples: cfg.samples_or_default(),
                k: cfg.k_or_default(),
                include_fourier: true,
            };
            let search = brute_force_entpower_with(&inst, opts, rng)?;
            let reference = entpower_alpha(u, alpha)?;
            let mut rows = vec![row("", "alpha", alpha, search.best, reference)];
            if let Some(best) = search.best_sampled() {
                rows.push(row("sampled", "alpha", alpha, best, reference));
            }
            rows
        }
        (Experiment::ComplexityCurve, Point::Alpha(alpha)) => {
            let t = (u * &ctx.rho).trace();
            let eps_y = balanced_eps_y(cfg.eps, t);
            let budget = error_budget(cfg.eps, eps_y, cfg.pe, cfg.pe)?;
            let plan = rounds_for_budget(&budget, alpha, t)?;
            let measured = entpower_from_rounds(alpha, plan.budget_m, plan.rounds)?;
            let reference = alpha * (1.0 - t.norm_sqr()).max(0.0).sqrt();
            let rounds_ref = plan.budget_m / (alpha * alpha * t.norm_sqr());
            vec![
                row("entpower", "alpha", alpha, measured, reference),
                row("rounds", "alpha", alpha, plan.rounds, rounds_ref),
            ]
        }
        (Experiment::VerifyTheorem1, Point::Fourier) => {
            let inst = ctx.instance(ControlQubit::pure_zero())?;
            let measured = ensemble_average(&inst, &fourier_ensemble(u)?)?;
            vec![row("fourier", "fourier", 0.0, measured, entpower_standard(u))]
        }
        (Experiment::VerifyTheorem1, Point::Sample(i)) => {
            let inst = ctx.instance(ControlQubit::pure_zero())?;
            let t = random_right_unitary(d, cfg.k_or_default(), rng)?;
            let measured = ensemble_average(&inst, &decompose_from_t(&ctx.rho, &t)?)?;
            vec![row("sample", "sample", i as f64, measured, entpower_standard(u))]
        }
        (Experiment::VerifyTheorem2, Point::Alpha(alpha)) => {
            let control = ControlQubit::alpha(alpha)?;
            let samples = cfg.samples_or_default();
            let mixing = brute_force_min_mixing_with(&control, samples, CONTROL_K, &rng.fork(0))?;
            let inst = ctx.instance(control)?;
            let opts = SearchOptions {
                samples,
                k: cfg.k_or_default(),
                include_fourier: true,
            };
            let search = brute_force_entpower_with(&inst, opts, &rng.fork(1))?;
            vec![
                row("min-mixing", "alpha", alpha, mixing.best, alpha),
                row("min-mixing-sampled", "alpha", alpha, mixing.best_sampled, alpha),
                row("entpower", "alpha", alpha, search.best, entpower_alpha(u, alpha)?),
            ]
        }
        (Experiment::VerifyTheorem3, Point::Bounds) => {
            let b = entpower_bounds(u, &ctx.rho)?;
            vec![row("lower", "bounds", 0.0, b.lower, b.upper)]
        }
        (Experiment::VerifyTheorem3, Point::Sample(i)) => {
            let inst = ctx.instance(ctx.control)?;
            let upper = entpower_bounds(u, &ctx.rho)?.upper;
            let reference = lambda_factor(&ctx.control) * upper;
            let rank = support_rank(&ctx.rho)?;
            let t = random_right_unitary(rank, cfg.k_or_default().max(rank), rng)?;
            let measured = ensemble_average(&inst, &decompose_from_t(&ctx.rho, &t)?)?;
            vec![row("sample", "sample", i as f64, measured, reference)]
        }
        _ => unreachable!("points() only emits points valid for the experiment"),
    })
}

/// `ε_y` making both quadratures demand the same number of rounds for equal `P_e`.
fn balanced_eps_y(eps_x: f64, t: C64) -> f64 {
    if t.re == 0.0 || t.im == 0.0 {
        eps_x
    } else {
        eps_x * t.re.abs() / t.im.abs()
    }
}

/// Checks a verification table; `Ok` carries a one-line summary.
pub fn verify_rows(experiment: Experiment, rows: &[ResultRow]) -> std::result::Result<String, String> {
    let theorem = tol::THEOREM;
    let mut failures = Vec::new();
    for r in rows {
        let kind = r.experiment.rsplit('/').next().unwrap_or_default();
        let ok = match (experiment, kind) {
            (Experiment::VerifyTheorem1, "fourier") => r.deviation <= theorem,
            (Experiment::VerifyTheorem1, "sample") => r.measured <= r.reference + theorem,
            (Experiment::VerifyTheorem2, "min-mixing") => r.deviation <= 1e-12,
            (Experiment::VerifyTheorem2, "min-mixing-sampled") => r.measured >= r.reference - theorem,
            (Experiment::VerifyTheorem2, "entpower") => r.deviation <= theorem,
            (Experiment::VerifyTheorem3, "lower") => r.measured <= r.reference + theorem,
            (Experiment::VerifyTheorem3, "sample") => {
                r.measured >= -theorem && r.measured <= r.reference + theorem
            }
            _ => true,
        };
        if !ok {
            failures.push(format!("{} {}={}", r.experiment, r.param_name, r.param_value));
        }
    }
    if failures.is_empty() {
        Ok(format!("{}: pass ({} rows)", experiment.id(), rows.len()))
    } else {
        Err(format!("{}: {} violations: {}", experiment.id(), failures.len(), failures.join("; ")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;

    fn run(text: &str) -> Vec<ResultRow> {
        run_experiment(&parse_config(text.as_bytes()).unwrap()).unwrap()
    }

    #[test]
    fn identity_trace_is_one() {
        let rows = run(r#"{"experiment": "trace-vs-shots", "n": 2, "unitary": "identity", "shots": [1000, 100000]}"#);
        assert_eq!(rows.len(), 4);
        for r in &rows {
            let expected = if r.experiment.ends_with("/re") { 1.0 } else { 0.0 };
            assert_eq!(r.reference, expected);
            assert!(r.deviation < 5.0 / r.param_value.sqrt(), "{r:?}");
        }
    }

    #[test]
    fn traceless_reference_is_alpha() {
        let rows = run(r#"{"experiment": "entpower-vs-alpha", "n": 2, "unitary": "pauli:XZ", "alphas": [0.2, 0.7], "samples": 3}"#);
        let main: Vec<_> = rows.iter().filter(|r| r.experiment == "entpower-vs-alpha").collect();
        assert_eq!(main.len(), 2);
        for r in main {
            assert_eq!(r.reference, r.param_value);
            assert!(r.deviation < 1e-9);
        }
    }

    #[test]
    fn theorem_tables_pass() {
        for (exp, text) in [
            (Experiment::VerifyTheorem1, r#"{"experiment": "verify-theorem1", "n": 2, "samples": 20}"#),
            (Experiment::VerifyTheorem2, r#"{"experiment": "verify-theorem2", "n": 2, "samples": 20, "alphas": [0.1, 0.5, 1.0]}"#),
            (Experiment::VerifyTheorem3, r#"{"experiment": "verify-theorem3", "n": 2, "samples": 20, "rho": "random:3"}"#),
            (Experiment::VerifyTheorem3, r#"{"experiment": "verify-theorem3", "n": 1, "samples": 20, "rho": "random", "bloch": [0.3, 0.4, 0.5]}"#),
        ] {
            let rows = run(text);
            verify_rows(exp, &rows).unwrap();
        }
    }

    #[test]
    fn complexity_curve_is_exact() {
        let rows = run(r#"{"experiment": "complexity-curve", "n": 2, "alphas": [0.25, 0.5, 1.0], "eps": 0.1, "pe": 0.01}"#);
        for r in rows.iter().filter(|r| r.experiment.ends_with("/entpower")) {
            assert!(r.deviation < 1e-12, "{r:?}");
        }
    }

    #[test]
    fn output_is_independent_of_workers() {
        let base = r#"{"experiment": "verify-theorem1", "n": 2, "samples": 16, "seed": 5"#;
        let one = run(&format!("{base}, \"workers\": 1}}"));
        let four = run(&format!("{base}, \"workers\": 4}}"));
        assert_eq!(one, four);
    }

    #[test]
    fn runtime_errors_name_the_point() {
        let cfg = parse_config(br#"{"experiment": "complexity-curve", "n": 1, "unitary": "pauli:X", "alphas": [0.5]}"#)
            .unwrap();
        let err = run_experiment(&cfg).unwrap_err();
        assert!(err.to_string().contains("alpha = 0.5"), "{err}");
        assert_eq!(err.exit_code(), 1);
    }

    #[test]
    fn detects_violations() {
        let bad = vec![ResultRow::new("verify-theorem1/sample", "sample", 0.0, 0.9, 0.5, 0)];
        assert!(verify_rows(Experiment::VerifyTheorem1, &bad).is_err());
    }
}
