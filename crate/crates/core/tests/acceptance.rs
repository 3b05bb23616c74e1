//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! non-zero when any fails.

use std::fs;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use vector_split::analysis::{
    check_bound_16, check_bound_22, component_spread, convergence_study, integrate_vector_system,
    run_scheme, span_order, steps_to_horizon, ErrorNorm,
};
use vector_split::harness::{cmd_run, RunConfig, TRACE_FILE};
use vector_split::linalg::StateVector;
use vector_split::problem::{gen_pseudo_parabolic_2d, gen_random_split, BlockState, SplitProblem};
use vector_split::schemes::{
    check_c_le_pg, check_r_nonneg, sequential_residuals, step_monolithic_oracle,
    step_vector_additive, step_vector_sequential, LevelPair, SchemeKind, SchemeParams,
    VectorAdditiveStepper, VectorStepper,
};

const BOUND_STEPS: usize = 200;
const BOUND_TAU: f64 = 0.05;

struct Verdict {
    passed: bool,
    detail: String,
}

fn verdict(passed: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        passed,
        detail: detail.into(),
    }
}

/// Random problem run long enough for 200 steps of `BOUND_TAU`.
fn long_problem(seed: u64, m: usize, p: usize) -> SplitProblem {
    gen_random_split(seed, m, p, 100.0)
        .and_then(|pr| pr.with_horizon(BOUND_STEPS as f64 * BOUND_TAU))
        .unwrap()
}

fn stable_parameter_sets(p: usize) -> [(f64, f64); 2] {
    let p = p as f64;
    [(p / 2.0, 0.25), (p, 0.5)]
}

fn criterion2_instances() -> Vec<SplitProblem> {
    (0..100u64)
        .map(|i| long_problem(2000 + i, 4 + (i as usize * 5) % 21, 1 + i as usize % 4))
        .collect()
}

fn c1_bound_16() -> Verdict {
    let start = Instant::now();
    let results: Vec<(bool, f64)> = (0..100u64)
        .into_par_iter()
        .flat_map_iter(|i| {
            let problem = long_problem(1000 + i, 2 + (i as usize * 7) % 31, 1 + i as usize % 4);
            assert!(!problem.forcing().is_zero());
            [0.5, 0.75, 1.0].map(|sigma| {
                let params =
                    SchemeParams::new(SchemeKind::TwoLevel, BOUND_TAU, sigma, 0.0).unwrap();
                let trace = run_scheme(&problem, params, BOUND_STEPS).unwrap();
                let report = check_bound_16(&problem, &trace).unwrap();
                (report.passed(), report.max_residual())
            })
        })
        .collect();
    let secs = start.elapsed().as_secs_f64();
    let ok = results.iter().all(|r| r.0);
    let worst = results
        .iter()
        .map(|r| r.1)
        .fold(f64::NEG_INFINITY, f64::max);
    verdict(
        ok && secs <= 30.0,
        format!("300 runs, max residual {worst:.3e}, {secs:.1} s"),
    )
}

fn c2_bound_22(instances: &[SplitProblem]) -> Verdict {
    let start = Instant::now();
    let results: Vec<(bool, f64)> = instances
        .par_iter()
        .flat_map_iter(|problem| {
            stable_parameter_sets(problem.p()).map(|(theta, sigma)| {
                let params =
                    SchemeParams::new(SchemeKind::VectorAdditive, BOUND_TAU, sigma, theta).unwrap();
                let trace = run_scheme(problem, params, BOUND_STEPS).unwrap();
                let report = check_bound_22(problem, &trace).unwrap();
                (report.passed(), report.max_residual())
            })
        })
        .collect();
    let secs = start.elapsed().as_secs_f64();
    let ok = results.iter().all(|r| r.0);
    let worst = results
        .iter()
        .map(|r| r.1)
        .fold(f64::NEG_INFINITY, f64::max);
    verdict(
        ok && secs <= 60.0,
        format!("200 runs, max residual {worst:.3e}, {secs:.1} s"),
    )
}

fn c3_c_le_pg() -> Verdict {
    let results: Vec<(usize, f64, f64, bool)> = (0..100u64)
        .into_par_iter()
        .map(|i| {
            let p = 1 + i as usize % 4;
            let m = if i % 10 == 0 {
                256 / p
            } else {
                2 + (i as usize * 3) % 30
            };
            let problem = gen_random_split(3000 + i, m, p, 100.0).unwrap();
            let check = check_c_le_pg(&problem).unwrap();
            (p, check.min_eig, check.norm, check.passed)
        })
        .collect();
    let all_pass = results.iter().all(|r| r.3);
    let single_zero = results
        .iter()
        .filter(|r| r.0 == 1)
        .all(|r| r.1.abs() <= 1e-10 * r.2);
    let worst = results
        .iter()
        .map(|r| r.1 / r.2)
        .fold(f64::INFINITY, f64::min);
    verdict(
        all_pass && single_zero,
        format!(
            "min relative eigenvalue {worst:.3e}, p = 1 within tolerance of zero: {single_zero}"
        ),
    )
}

fn c4_r_nonneg(instances: &[SplitProblem]) -> Verdict {
    let results: Vec<(bool, f64)> = instances
        .par_iter()
        .flat_map_iter(|problem| {
            stable_parameter_sets(problem.p()).map(|(theta, sigma)| {
                let check = check_r_nonneg(problem, theta, sigma, BOUND_TAU).unwrap();
                (check.passed, check.min_eig / check.norm)
            })
        })
        .collect();
    let worst = results.iter().map(|r| r.1).fold(f64::INFINITY, f64::min);
    verdict(
        results.iter().all(|r| r.0),
        format!("200 checks, min relative eigenvalue {worst:.3e}"),
    )
}

fn random_block(rng: &mut ChaCha8Rng, p: usize, m: usize) -> BlockState {
    BlockState::new(
        (0..p)
            .map(|_| StateVector::from_fn(m, |_| rng.gen_range(-1.0..1.0)))
            .collect(),
    )
    .unwrap()
}

fn c5_oracles() -> Verdict {
    let mut worst_oracle = 0.0f64;
    let mut worst_seq = 0.0f64;
    for i in 0..50u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(5000 + i);
        let p = 1 + i as usize % 3;
        let m = rng.gen_range(1..=16);
        let problem = gen_random_split(5000 + i, m, p, 50.0).unwrap();
        let levels = LevelPair::new(
            random_block(&mut rng, p, m),
            random_block(&mut rng, p, m),
            0.3,
        )
        .unwrap();
        let phi = StateVector::from_fn(m, |_| rng.gen_range(-1.0..1.0));
        let tau = rng.gen_range(0.01..0.5);
        let (theta, sigma) = stable_parameter_sets(p)[i as usize % 2];
        let fast = step_vector_additive(&problem, theta, sigma, tau, &levels, &phi).unwrap();
        let oracle = step_monolithic_oracle(&problem, theta, sigma, tau, &levels, &phi).unwrap();
        worst_oracle = worst_oracle.max(fast.sub(&oracle).norm() / oracle.norm());
        let seq = step_vector_sequential(&problem, sigma, tau, &levels, &phi).unwrap();
        let res = sequential_residuals(&problem, sigma, tau, &levels, &seq, &phi).unwrap();
        worst_seq = res.iter().copied().fold(worst_seq, f64::max);
    }
    verdict(
        worst_oracle <= 1e-9 && worst_seq <= 1e-10,
        format!("oracle relative gap {worst_oracle:.3e}, sequential residual {worst_seq:.3e}"),
    )
}

fn c6_component_equality() -> Verdict {
    let instances: Vec<SplitProblem> = (0..10u64)
        .map(|i| gen_random_split(1000 + i, 8, 2 + i as usize % 3, 10.0).unwrap())
        .collect();
    let fine: Vec<f64> = instances
        .par_iter()
        .map(|problem| {
            let start = BlockState::replicate(problem.u0(), problem.p());
            integrate_vector_system(problem, &start, 1.0, 1000)
                .unwrap()
                .max_spread
        })
        .collect();
    let worst_fine = fine.iter().copied().fold(0.0, f64::max);
    let taus: Vec<f64> = (0..6).map(|k| 0.1 / 2f64.powi(k)).collect();
    let decreasing: Vec<bool> = instances
        .par_iter()
        .flat_map_iter(|problem| {
            let taus = &taus;
            stable_parameter_sets(problem.p()).map(move |(theta, sigma)| {
                let spreads: Vec<f64> = taus
                    .iter()
                    .map(|&tau| {
                        let params =
                            SchemeParams::new(SchemeKind::VectorAdditive, tau, sigma, theta)
                                .unwrap();
                        let steps = steps_to_horizon(problem.horizon(), tau).unwrap();
                        component_spread(run_scheme(problem, params, steps).unwrap().last())
                    })
                    .collect();
                spreads.windows(2).all(|w| w[1] < w[0])
            })
        })
        .collect();
    let monotone = decreasing.iter().filter(|d| **d).count();
    verdict(
        worst_fine <= 1e-8 && monotone == decreasing.len(),
        format!(
            "fine-step spread {worst_fine:.3e}, spread at T decreasing in {monotone}/{} discrete sweeps",
            decreasing.len()
        ),
    )
}

fn c7_convergence() -> Verdict {
    let start = Instant::now();
    let problem = gen_pseudo_parabolic_2d(8, 8, 1.0, 0.0).unwrap();
    let taus: Vec<f64> = (0..5).map(|k| 0.1 / 2f64.powi(k)).collect();
    let mut ok = true;
    let mut detail = Vec::new();
    for (theta, sigma) in stable_parameter_sets(problem.p()) {
        let rows = convergence_study(
            &problem,
            SchemeKind::VectorAdditive,
            sigma,
            theta,
            &taus,
            ErrorNorm::BNorm,
        )
        .unwrap();
        let orders: Vec<f64> = rows.iter().filter_map(|r| r.observed_order).collect();
        let span = span_order(&rows).unwrap();
        let in_band = |q: f64| (0.8..=1.6).contains(&q);
        ok &= in_band(orders[orders.len() - 1]) && in_band(span);
        detail.push(format!(
            "vector theta={theta} sigma={sigma} orders {orders:.2?} span {span:.2}"
        ));
    }
    let rows = convergence_study(
        &problem,
        SchemeKind::TwoLevel,
        0.5,
        0.0,
        &taus,
        ErrorNorm::BNorm,
    )
    .unwrap();
    let orders: Vec<f64> = rows.iter().filter_map(|r| r.observed_order).collect();
    ok &= orders.iter().all(|&q| q >= 1.8);
    detail.push(format!("two-level orders {orders:.3?}"));
    let secs = start.elapsed().as_secs_f64();
    detail.push(format!("{secs:.1} s"));
    verdict(ok && secs <= 60.0, detail.join("; "))
}

const RUN_CONFIG: &str = r#"
seed = 11

[problem]
source = "random"
m = 12
p = 3

[scheme]
kind = "vector_additive"
tau = 0.01
sigma = 0.25
theta = 1.5
"#;

fn c8_determinism() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let config = RunConfig::parse(RUN_CONFIG).unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    cmd_run(&config, &a).unwrap();
    cmd_run(&config, &b).unwrap();
    let same_file = fs::read(a.join(TRACE_FILE)).unwrap() == fs::read(b.join(TRACE_FILE)).unwrap();

    let orders = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let mut same_bits = true;
    for i in 0..10u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(8000 + i);
        let problem = gen_random_split(8000 + i, 10, 3, 50.0).unwrap();
        let stepper = VectorAdditiveStepper::new(&problem, 1.5, 0.25, 0.05).unwrap();
        let levels = LevelPair::new(
            random_block(&mut rng, 3, 10),
            random_block(&mut rng, 3, 10),
            0.2,
        )
        .unwrap();
        let phi = problem.forcing_at(0.2);
        let reference = stepper.step(&levels, &phi).unwrap();
        for order in &orders {
            same_bits &= stepper.step_in_order(&levels, &phi, order).unwrap() == reference;
        }
        same_bits &= stepper.step_parallel(&levels, &phi).unwrap() == reference;
    }
    verdict(
        same_file && same_bits,
        format!("trace bytes identical: {same_file}, permuted component order bit-identical: {same_bits}"),
    )
}

fn main() {
    let instances = criterion2_instances();
    type Criterion<'a> = (&'static str, Box<dyn Fn() -> Verdict + 'a>);
    let criteria: Vec<Criterion> = vec![
        ("1 two-level estimate", Box::new(c1_bound_16)),
        (
            "2 vector energy estimate",
            Box::new(|| c2_bound_22(&instances)),
        ),
        ("3 C <= pG", Box::new(c3_c_le_pg)),
        ("4 R >= 0", Box::new(|| c4_r_nonneg(&instances))),
        ("5 oracle equivalence", Box::new(c5_oracles)),
        ("6 component equality", Box::new(c6_component_equality)),
        ("7 convergence", Box::new(c7_convergence)),
        ("8 determinism", Box::new(c8_determinism)),
    ];
    let mut failed = 0;
    for (name, run) in &criteria {
        let v = run();
        println!(
            "criterion {name}: {} ({})",
            if v.passed { "PASS" } else { "FAIL" },
            v.detail
        );
        failed += usize::from(!v.passed);
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
