//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit status if
//! any criterion fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use entropic_core::bounds::{
    is_complementary, krishna_parthasarathy_bound, lambda_s_three, lambda_s_two, maassen_uffink_bound,
    partovi_bound, projector_norm_relation, second_stage_dominates,
};
use entropic_core::entropy::{entropies_sequential, entropies_sequential_3, entropy_distinct, variance_relations};
use entropic_core::optimize::{lambda_d_numeric, lambda_s3_numeric, lambda_s_numeric};
use entropic_core::spin::{
    boundary_lhs, difference_axis_eigenstates, high_regime_value, low_regime_value, spin_pair, sum_axis_eigenstates,
    table1, theta_star, ThetaCurve, REFERENCE_TABLE,
};
use entropic_core::state::{
    interference_gap, luders_map, random_degenerate_observable, random_mixed_state, random_observable, random_state,
    sample_sequence, wigner_joint_2,
};
use entropic_core::{Density, Matrix, Observable, OptimizerConfig, State, C64};

const TABLE_TOL: f64 = 5e-4;
const TABLE_TOL_NUMERIC: f64 = 1e-3;
const TABLE_RUNTIME: Duration = Duration::from_secs(30);
const THETA_STAR_DEG_TOL: f64 = 0.5;
const THETA_STAR_RESIDUAL: f64 = 1e-12;
const COMPLEMENTARY_TOL: f64 = 1e-9;
const LAMBDA_S_NUMERIC_TOL: f64 = 1e-4;
const LAMBDA_S_RUNTIME: Duration = Duration::from_secs(120);
const PAIR_CHAIN_SLACK: f64 = 1e-9;
const GRID_CHAIN_SLACK: f64 = 1e-6;
const EQUALITY_TOL: f64 = 1e-6;
const DISTINCT_OPTIMUM_TOL: f64 = 1e-4;
const MINIMIZER_FIDELITY: f64 = 0.9999;
const IDENTITY_TOL: f64 = 1e-10;
const ENTROPY_INEQ_SLACK: f64 = 1e-9;
const VARIANCE_SLACK: f64 = 1e-9;
const COMMUTATOR_TOL: f64 = 1e-10;
const INTERFERENCE_ANALYTIC: f64 = 0.5;
const INTERFERENCE_ANALYTIC_TOL: f64 = 1e-12;
const INTERFERENCE_MC_TOL: f64 = 0.005;
const INTERFERENCE_SAMPLES: u64 = 1_000_000;
const INTERFERENCE_SEED: u64 = 20_020_704;
const TRIPLE_NUMERIC_TOL: f64 = 1e-3;
const TRIPLE_DOMINANCE_SLACK: f64 = 1e-9;

struct Verdict {
    pass: bool,
    detail: String,
}

impl Verdict {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self { pass, detail: detail.into() }
    }
}

type Check = fn() -> entropic_core::Result<Verdict>;

fn sz() -> Observable {
    Observable::new(Matrix::diagonal(&[1.0, -1.0])).unwrap()
}

fn sx() -> Observable {
    Observable::new(Matrix::from_real(2, &[0.0, 1.0, 1.0, 0.0])).unwrap()
}

fn dim_for(seed: u64, lo: usize, hi: usize) -> usize {
    lo + (seed % (hi - lo + 1) as u64) as usize
}

fn table_reproduction() -> entropic_core::Result<Verdict> {
    let start = Instant::now();
    let rows = table1::<f64>(&OptimizerConfig::default())?;
    let elapsed = start.elapsed();
    let mut worst = 0.0f64;
    let mut misses = Vec::new();
    for (row, reference) in rows.iter().zip(REFERENCE_TABLE) {
        let got = [row.lambda_s, row.lambda_d, row.lambda_d2, row.lambda_d1];
        for (col, (&g, &want)) in got.iter().zip(&reference[1..]).enumerate() {
            let numeric = col == 1 && reference[0] >= 70.0;
            let tol = if numeric { TABLE_TOL_NUMERIC } else { TABLE_TOL };
            let err = (g - want).abs();
            worst = worst.max(err);
            if err > tol {
                misses.push(format!("θ={}° col {}: {g:.6} vs {want}", reference[0], col + 1));
            }
        }
    }
    let pass = rows.len() == 10 && misses.is_empty() && elapsed < TABLE_RUNTIME;
    Ok(Verdict::new(
        pass,
        format!(
            "40 cells, max |error| {worst:.2e}, {} misses, {:.2}s{}",
            misses.len(),
            elapsed.as_secs_f64(),
            if misses.is_empty() { String::new() } else { format!(" [{}]", misses.join("; ")) }
        ),
    ))
}

fn boundary_angle() -> entropic_core::Result<Verdict> {
    let t: f64 = theta_star();
    let residual = (boundary_lhs(t) - 2.0).abs();
    let deg = t.to_degrees();
    Ok(Verdict::new(
        (deg - 67.0).abs() <= THETA_STAR_DEG_TOL && residual <= THETA_STAR_RESIDUAL,
        format!("θ* = {deg:.6}°, residual {residual:.1e}"),
    ))
}

fn fourier_pair(n: usize) -> entropic_core::Result<(Observable, Observable)> {
    let eigenvalues: Vec<f64> = (0..n).map(|k| k as f64).collect();
    let computational: Vec<Vec<C64>> = (0..n)
        .map(|k| State::basis(n, k).map(|s| s.amplitudes().to_vec()))
        .collect::<entropic_core::Result<_>>()?;
    let norm = 1.0 / (n as f64).sqrt();
    let fourier: Vec<Vec<C64>> = (0..n)
        .map(|k| (0..n).map(|j| C64::from_polar(norm, 2.0 * PI * (j * k) as f64 / n as f64)).collect())
        .collect();
    Ok((
        Observable::from_eigenbasis(&eigenvalues, &computational)?,
        Observable::from_eigenbasis(&eigenvalues, &fourier)?,
    ))
}

fn complementary_bases() -> entropic_core::Result<Verdict> {
    let mut worst = 0.0f64;
    let mut all_flagged = true;
    for n in 2..=8 {
        let (a, b) = fourier_pair(n)?;
        all_flagged &= is_complementary(&a, &b, COMPLEMENTARY_TOL)?;
        worst = worst.max((maassen_uffink_bound(&a, &b)? - (n as f64).ln()).abs());
    }
    Ok(Verdict::new(
        all_flagged && worst <= COMPLEMENTARY_TOL,
        format!("n = 2..8 flagged: {all_flagged}, max |bound − log n| {worst:.1e}"),
    ))
}

fn successive_optimum() -> entropic_core::Result<Verdict> {
    let start = Instant::now();
    let config = OptimizerConfig::default();
    let mut worst = 0.0f64;
    for seed in 0..100u64 {
        let dim = dim_for(seed, 2, 3);
        let a = random_observable::<f64>(dim, 1000 + 2 * seed)?;
        let b = random_observable::<f64>(dim, 1001 + 2 * seed)?;
        let numeric = lambda_s_numeric(&a, &b, &config.clone().with_seed(seed))?.value;
        worst = worst.max((numeric - lambda_s_two(&a, &b)?).abs());
    }
    let elapsed = start.elapsed();
    Ok(Verdict::new(
        worst <= LAMBDA_S_NUMERIC_TOL && elapsed < LAMBDA_S_RUNTIME,
        format!("100 pairs, max |numeric − closed form| {worst:.1e}, {:.2}s", elapsed.as_secs_f64()),
    ))
}

fn inequality_chain() -> entropic_core::Result<Verdict> {
    let mut min_slack = f64::INFINITY;
    let mut nondegenerate = 0;
    for seed in 0..200u64 {
        let dim = dim_for(seed, 2, 6);
        let a = if seed % 3 == 0 {
            random_degenerate_observable::<f64>(dim, 5000 + seed)?
        } else {
            random_observable::<f64>(dim, 5000 + seed)?
        };
        let b = random_observable::<f64>(dim, 7000 + seed)?;
        let ls = lambda_s_two(&a, &b)?;
        let kp = krishna_parthasarathy_bound(&a, &b)?;
        let p = partovi_bound(&a, &b)?;
        min_slack = min_slack.min(ls - kp).min(kp - p);
        if a.is_nondegenerate() && b.is_nondegenerate() {
            nondegenerate += 1;
            min_slack = min_slack.min(ls - maassen_uffink_bound(&a, &b)?);
        }
    }
    let pairs_ok = min_slack >= -PAIR_CHAIN_SLACK;

    let points = ThetaCurve::<f64>::new(OptimizerConfig::default()).sweep_degrees(0.0, 180.0, 181)?;
    let mut grid_slack = f64::INFINITY;
    let mut unexpected = Vec::new();
    for (deg, p) in points.iter().enumerate() {
        grid_slack = grid_slack.min(p.chain_slack());
        let s_d = p.lambda_s - p.lambda_d;
        let d_d2 = p.lambda_d - p.lambda_d2;
        let d2_d1 = p.lambda_d2 - 2.0 * p.lambda_d1;
        let endpoint = deg == 0 || deg == 180;
        let right_angle = deg == 90;
        let strict_ok = if endpoint {
            s_d.abs().max(d_d2.abs()).max(d2_d1.abs()) <= EQUALITY_TOL
        } else if right_angle {
            s_d.abs() <= EQUALITY_TOL && d_d2.abs() <= EQUALITY_TOL && d2_d1 > EQUALITY_TOL
        } else {
            // Λ_D2 − 2Λ_D1 shrinks like (1 − cos θ/2)²/2 near the endpoints,
            // below 1e-6 within a few degrees, so only its sign is checked.
            s_d > EQUALITY_TOL && d_d2 > EQUALITY_TOL && d2_d1 > 0.0
        };
        if !strict_ok {
            unexpected.push(deg.to_string());
        }
    }
    let grid_ok = grid_slack >= -GRID_CHAIN_SLACK && unexpected.is_empty();
    Ok(Verdict::new(
        pairs_ok && grid_ok,
        format!(
            "200 pairs ({nondegenerate} nondegenerate) min slack {min_slack:.1e}; grid min slack {grid_slack:.1e}, \
             equalities at 0°, 90°, 180° only: {}",
            if unexpected.is_empty() { "yes".to_string() } else { format!("no [{}]", unexpected.join(",")) }
        ),
    ))
}

fn distinct_optimum() -> entropic_core::Result<Verdict> {
    let config = OptimizerConfig::default();
    let mut worst_value = 0.0f64;
    let mut worst_fidelity = 1.0f64;
    for (degrees, low) in (1..=6).map(|k| (10.0 * k as f64, true)).chain((12..=17).map(|k| (10.0 * k as f64, false))) {
        let theta = f64::to_radians(degrees);
        let (a, b) = spin_pair(theta)?;
        let numeric = lambda_d_numeric(&a, &b, &config)?;
        let (closed, states) = if low {
            (low_regime_value(theta), sum_axis_eigenstates(theta)?)
        } else {
            (high_regime_value(theta), difference_axis_eigenstates(theta)?)
        };
        worst_value = worst_value.max((numeric.value - closed).abs());
        let fidelity = states
            .map(|s| s.iter().map(|e| e.fidelity(&numeric.minimizer)).fold(0.0, f64::max))
            .unwrap_or(0.0);
        worst_fidelity = worst_fidelity.min(fidelity);
    }
    Ok(Verdict::new(
        worst_value <= DISTINCT_OPTIMUM_TOL && worst_fidelity >= MINIMIZER_FIDELITY,
        format!("12 angles, max |numeric − closed form| {worst_value:.1e}, min fidelity {worst_fidelity:.8}"),
    ))
}

struct Instance {
    rho: Density,
    a: Observable,
    b: Observable,
    c: Observable,
}

fn instance(seed: u64, lo: usize, hi: usize) -> entropic_core::Result<Instance> {
    let dim = dim_for(seed, lo, hi);
    let rho = if seed.is_multiple_of(2) {
        random_state::<f64>(dim, seed)?
    } else {
        random_mixed_state::<f64>(dim, 1 + (seed as usize / 2) % dim, seed)?
    };
    let obs = |k: u64| {
        if (seed + k).is_multiple_of(5) {
            random_degenerate_observable::<f64>(dim, 31 * seed + k)
        } else {
            random_observable::<f64>(dim, 31 * seed + k)
        }
    };
    Ok(Instance { rho, a: obs(1)?, b: obs(2)?, c: obs(3)? })
}

fn projector_defect(obs: &Observable) -> f64 {
    let n = obs.dim();
    let ps = obs.projectors();
    let mut worst = 0.0f64;
    let mut sum = Matrix::zeros(n);
    for (i, p) in ps.iter().enumerate() {
        for (j, q) in ps.iter().enumerate() {
            let expected = if i == j { p.clone() } else { Matrix::zeros(n) };
            worst = worst.max((&(p * q) - &expected).max_abs());
        }
        sum = &sum + p;
    }
    worst.max((&sum - &Matrix::identity(n)).max_abs())
}

fn identities() -> entropic_core::Result<Verdict> {
    let mut identity_err = 0.0f64;
    let mut ineq_slack = f64::INFINITY;
    for seed in 0..200u64 {
        let Instance { rho, a, b, c } = instance(seed, 2, 5)?;
        identity_err = identity_err.max(projector_defect(&a)).max(projector_defect(&b));

        let collapsed = luders_map(&rho, &a)?;
        let report = entropies_sequential(&rho, &a, &b)?;
        identity_err = identity_err
            .max((report.s_a - entropy_distinct(&rho, &a)?).abs())
            .max((report.s_a - entropy_distinct(&collapsed, &a)?).abs())
            .max((report.s_b - entropy_distinct(&collapsed, &b)?).abs());

        let joint = wigner_joint_2(&rho, &a, &b)?;
        for (i, p) in a.projectors().iter().enumerate() {
            identity_err = identity_err.max((joint.marginal(0).weights()[i] - (rho.matrix() * p).trace().re).abs());
        }
        for (j, p) in b.projectors().iter().enumerate() {
            identity_err = identity_err.max((joint.marginal(1).weights()[j] - (collapsed.matrix() * p).trace().re).abs());
        }

        let three = entropies_sequential_3(&rho, &a, &b, &c)?;
        let s_c = three.s_c.expect("three-observable report");
        let mut max_pqp = 0.0f64;
        for p in a.projectors() {
            for q in b.projectors() {
                max_pqp = max_pqp.max(projector_norm_relation(p, q)?.1);
            }
        }
        ineq_slack = ineq_slack
            .min(report.subadditivity_slack())
            .min(three.s_a + three.s_b + s_c - three.s_joint)
            .min(three.strong_subadditivity_slack().expect("three-observable report"))
            .min(report.s_joint + max_pqp.ln());
    }
    Ok(Verdict::new(
        identity_err <= IDENTITY_TOL && ineq_slack >= -ENTROPY_INEQ_SLACK,
        format!("200 instances, max identity error {identity_err:.1e}, min inequality slack {ineq_slack:.1e}"),
    ))
}

fn variance() -> entropic_core::Result<Verdict> {
    let mut slack = f64::INFINITY;
    let mut commutator = 0.0f64;
    for seed in 0..500u64 {
        let Instance { rho, a, b, .. } = instance(10_000 + seed, 2, 6)?;
        let v = variance_relations(&rho, &a, &b)?;
        slack = slack.min(v.robertson_slack()).min(v.successive_slack());
        commutator = commutator.max(a.matrix().commutator(&v.c_of_b).max_abs());
    }
    Ok(Verdict::new(
        slack >= -VARIANCE_SLACK && commutator <= COMMUTATOR_TOL,
        format!("500 instances, min slack {slack:.1e}, max ‖[A, C(B)]‖ {commutator:.1e}"),
    ))
}

fn interference() -> entropic_core::Result<Verdict> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let x_plus = State::new(vec![C64::new(h, 0.0), C64::new(h, 0.0)])?;
    let rho = x_plus.density();
    let (a, b) = (sz(), sx());
    let analytic = interference_gap(&rho, &a, &b)?;
    let sequential = sample_sequence(&rho, &[&a, &b], INTERFERENCE_SAMPLES, INTERFERENCE_SEED)?;
    let direct = sample_sequence(&rho, &[&b], INTERFERENCE_SAMPLES, INTERFERENCE_SEED + 1)?;
    let n = INTERFERENCE_SAMPLES as f64;
    let empirical = sequential
        .marginal_counts(1)
        .iter()
        .zip(direct.counts())
        .map(|(&s, &d)| (s as f64 / n - d as f64 / n).abs())
        .fold(0.0, f64::max);
    Ok(Verdict::new(
        (analytic - INTERFERENCE_ANALYTIC).abs() <= INTERFERENCE_ANALYTIC_TOL
            && (empirical - analytic).abs() <= INTERFERENCE_MC_TOL,
        format!("analytic gap {analytic:.6}, Monte Carlo {empirical:.6} (10⁶ samples, seed {INTERFERENCE_SEED})"),
    ))
}

fn three_measurements() -> entropic_core::Result<Verdict> {
    let config = OptimizerConfig::default();
    let mut ordered = true;
    let mut differing = 0;
    let mut numeric_matches = 0;
    let mut worst_numeric = 0.0f64;
    let mut dominance_slack = f64::INFINITY;
    for seed in 0..50u64 {
        let dim = dim_for(seed, 2, 3);
        let a = random_observable::<f64>(dim, 40_000 + 3 * seed)?;
        let b = random_observable::<f64>(dim, 40_001 + 3 * seed)?;
        let c = random_observable::<f64>(dim, 40_002 + 3 * seed)?;
        let triple = lambda_s_three(&a, &b, &c)?;
        ordered &= triple.joint >= triple.as_printed;
        let stage = second_stage_dominates(&a, &b, &c)?;
        dominance_slack = dominance_slack.min(stage.second_stage - stage.first_stage);
        if triple.joint - triple.as_printed > TRIPLE_NUMERIC_TOL {
            differing += 1;
            let numeric = lambda_s3_numeric(&a, &b, &c, &config.clone().with_seed(seed))?.value;
            let err = (numeric - triple.joint).abs();
            worst_numeric = worst_numeric.max(err);
            if err <= TRIPLE_NUMERIC_TOL {
                numeric_matches += 1;
            }
        }
    }
    Ok(Verdict::new(
        ordered && numeric_matches == differing && dominance_slack >= -TRIPLE_DOMINANCE_SLACK,
        format!(
            "50 triples, joint ≥ separate: {ordered}; {differing} differ by > 1e-3, numeric optimum matches joint in \
             {numeric_matches} (max error {worst_numeric:.1e}); second-stage min slack {dominance_slack:.1e}"
        ),
    ))
}

fn main() -> ExitCode {
    let checks: [(&str, Check); 10] = [
        ("table reproduction", table_reproduction),
        ("boundary angle", boundary_angle),
        ("complementary bases", complementary_bases),
        ("successive optimum", successive_optimum),
        ("inequality chain", inequality_chain),
        ("distinct optimum", distinct_optimum),
        ("identities and probability structure", identities),
        ("variance relations", variance),
        ("interference of probabilities", interference),
        ("three-measurement bound", three_measurements),
    ];
    let mut failures = 0;
    for (i, (name, check)) in checks.iter().enumerate() {
        let verdict = check().unwrap_or_else(|e| Verdict::new(false, format!("error: {e}")));
        if !verdict.pass {
            failures += 1;
        }
        println!("{} {:>2} {name}: {}", if verdict.pass { "PASS" } else { "FAIL" }, i + 1, verdict.detail);
    }
    println!("acceptance: {}/{} criteria passed", checks.len() - failures, checks.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
