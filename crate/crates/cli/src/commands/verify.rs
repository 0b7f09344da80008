//! Randomized property suite over seeded instances.
//!
//! Every property is phrased as a defect: an identity reports `|lhs − rhs|`
//! and an inequality `lhs ≥ rhs` reports `rhs − lhs`. A property holds when
//! its worst defect over all instances is at most its tolerance.

use clap::Args;
use entropic_core::bounds::{
    deutsch_bound, krishna_parthasarathy_bound, lambda_s_two, maassen_uffink_bound, partovi_bound,
    projector_norm_relation, second_stage_dominates,
};
use entropic_core::entropy::{
    entropies_sequential, entropies_sequential_3, entropy_after_collapse, entropy_distinct, variance_relations,
};
use entropic_core::state::{
    interference_gap, luders_map, random_degenerate_observable, random_mixed_state, random_observable, random_state,
    wigner_joint_2, wigner_joint_3,
};
use entropic_core::{Curve, Density, Matrix, Observable, OptimizerConfig, Transition};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{exit, CliError, Result};
use crate::output::{csv_string, json_string, sig, Context, Format, TextTable};
use crate::scenario::Scenario;

/// Largest dimension the suite accepts.
const MAX_VERIFY_DIM: usize = 8;
const IDENTITY_TOL: f64 = 1e-10;
const ENTROPY_TOL: f64 = 1e-9;
const QUBIT_CHAIN_TOL: f64 = 1e-6;

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Number of random instances.
    #[arg(long, default_value_t = 200)]
    pub instances: usize,
    /// Dimension range, `lo-hi` or a single value.
    #[arg(long, default_value = "2-5")]
    pub dims: String,
}

struct Instance {
    rho: Density,
    a: Observable,
    b: Observable,
    c: Observable,
}

impl Instance {
    /// Odd instances draw mixed states; every fourth observable is degenerate.
    fn generate(seed: u64, index: usize, lo: usize, hi: usize) -> Result<Self> {
        let dim = lo + index % (hi - lo + 1);
        let base = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(index as u64 * 16);
        let rho = if index % 2 == 1 {
            random_mixed_state(dim, 1 + index / 2 % dim, base)?
        } else {
            random_state(dim, base)?
        };
        let observable = |k: usize| -> Result<Observable> {
            let s = base + k as u64;
            Ok(if (index + k).is_multiple_of(4) {
                random_degenerate_observable(dim, s)?
            } else {
                random_observable(dim, s)?
            })
        };
        Ok(Self {
            rho,
            a: observable(1)?,
            b: observable(2)?,
            c: observable(3)?,
        })
    }

    fn document(&self) -> serde_json::Value {
        Scenario::document(
            &[("A", self.a.matrix()), ("B", self.b.matrix()), ("C", self.c.matrix())],
            Some(self.rho.matrix()),
        )
    }
}

type Probe = fn(&Instance) -> Result<Option<f64>>;

struct Property {
    name: &'static str,
    tolerance: f64,
    probe: Probe,
}

fn max_of(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, f64::max)
}

fn spectral_defect(o: &Observable) -> f64 {
    let dim = o.dim();
    let sum = o.projectors().iter().fold(Matrix::zeros(dim), |acc, p| &acc + p);
    let reconstruction = (&o.decomposition().reconstruct() - o.matrix()).max_abs();
    let completeness = (&sum - &Matrix::identity(dim)).max_abs();
    let idempotence = max_of(o.projectors().iter().map(|p| (&(p * p) - p).max_abs()));
    reconstruction.max(completeness).max(idempotence)
}

fn spectral_resolution(x: &Instance) -> Result<Option<f64>> {
    Ok(Some(max_of([&x.a, &x.b, &x.c].map(spectral_defect))))
}

fn luders_idempotent(x: &Instance) -> Result<Option<f64>> {
    let once = luders_map(&x.rho, &x.a)?;
    let twice = luders_map(&once, &x.a)?;
    Ok(Some((twice.matrix() - once.matrix()).max_abs()))
}

fn luders_commutes(x: &Instance) -> Result<Option<f64>> {
    let once = luders_map(&x.rho, &x.a)?;
    Ok(Some(max_of(x.a.projectors().iter().map(|p| once.commutator_defect(p)))))
}

fn joint_marginals(x: &Instance) -> Result<Option<f64>> {
    let joint = wigner_joint_2(&x.rho, &x.a, &x.b)?;
    let collapsed = luders_map(&x.rho, &x.a)?;
    let rows = joint.marginal(0);
    let cols = joint.marginal(1);
    let first = x.a.projectors().iter().zip(rows.weights()).map(|(p, &w)| (w - (x.rho.matrix() * p).trace().re).abs());
    let second = x.b.projectors().iter().zip(cols.weights()).map(|(q, &w)| (w - (collapsed.matrix() * q).trace().re).abs());
    let triple_total = (wigner_joint_3(&x.rho, &x.a, &x.b, &x.c)?.total() - 1.0).abs();
    Ok(Some(max_of(first.chain(second)).max(triple_total)))
}

fn entropy_identities(x: &Instance) -> Result<Option<f64>> {
    let report = entropies_sequential(&x.rho, &x.a, &x.b)?;
    let collapsed = luders_map(&x.rho, &x.a)?;
    Ok(Some(max_of([
        (report.s_a - entropy_distinct(&x.rho, &x.a)?).abs(),
        (report.s_a - entropy_distinct(&collapsed, &x.a)?).abs(),
        (report.s_b - entropy_after_collapse(&x.rho, &x.a, &x.b)?).abs(),
    ])))
}

fn subadditivity(x: &Instance) -> Result<Option<f64>> {
    Ok(Some(-entropies_sequential(&x.rho, &x.a, &x.b)?.subadditivity_slack()))
}

fn joint_dominates_marginals(x: &Instance) -> Result<Option<f64>> {
    let r = entropies_sequential(&x.rho, &x.a, &x.b)?;
    Ok(Some(r.s_a.max(r.s_b) - r.s_joint))
}

fn three_subadditivity(x: &Instance) -> Result<Option<f64>> {
    Ok(Some(-entropies_sequential_3(&x.rho, &x.a, &x.b, &x.c)?.subadditivity_slack()))
}

fn strong_subadditivity(x: &Instance) -> Result<Option<f64>> {
    Ok(entropies_sequential_3(&x.rho, &x.a, &x.b, &x.c)?
        .strong_subadditivity_slack()
        .map(|s| -s))
}

/// `S(A, B) ≥ −log max ‖P Q P‖`.
fn joint_entropy_bound(x: &Instance) -> Result<Option<f64>> {
    let mut worst = 0.0f64;
    for p in x.a.projectors() {
        for q in x.b.projectors() {
            worst = worst.max(projector_norm_relation(p, q)?.1);
        }
    }
    let s_joint = entropies_sequential(&x.rho, &x.a, &x.b)?.s_joint;
    Ok(Some(-worst.ln() - s_joint))
}

fn projector_norms(x: &Instance) -> Result<Option<f64>> {
    let mut defect = f64::NEG_INFINITY;
    for p in x.a.projectors() {
        for q in x.b.projectors() {
            let (pq_sq, pqp, quarter) = projector_norm_relation(p, q)?;
            defect = defect.max((pq_sq - pqp).abs()).max(pq_sq - quarter);
        }
    }
    Ok(Some(defect))
}

fn bound_chain(x: &Instance) -> Result<Option<f64>> {
    let (a, b) = (&x.a, &x.b);
    let kp = krishna_parthasarathy_bound(a, b)?;
    let lambda_s = lambda_s_two(a, b)?;
    let distinct = entropy_distinct(&x.rho, a)? + entropy_distinct(&x.rho, b)?;
    let mut defect = (partovi_bound(a, b)? - kp).max(kp - lambda_s).max(kp - distinct);
    if a.is_nondegenerate() && b.is_nondegenerate() {
        let mu = maassen_uffink_bound(a, b)?;
        defect = defect.max(mu - lambda_s).max(deutsch_bound(a, b)? - mu).max(mu - distinct);
    }
    Ok(Some(defect))
}

fn collapsed_entropy_bound(x: &Instance) -> Result<Option<f64>> {
    let s_b = entropies_sequential(&x.rho, &x.a, &x.b)?.s_b;
    Ok(Some(lambda_s_two(&x.a, &x.b)? - s_b))
}

fn doubly_stochastic(x: &Instance) -> Result<Option<f64>> {
    if !(x.b.is_nondegenerate() && x.c.is_nondegenerate()) {
        return Ok(None);
    }
    let t = Transition::new(&x.b, &x.c)?;
    let sums = t.row_sums().into_iter().chain(t.column_sums());
    let negative = max_of(t.entries().iter().flatten().map(|&u| -u));
    Ok(Some(max_of(sums.map(|s| (s - 1.0).abs())).max(negative)))
}

fn second_stage_dominance(x: &Instance) -> Result<Option<f64>> {
    if ![&x.a, &x.b, &x.c].iter().all(|o| o.is_nondegenerate()) {
        return Ok(None);
    }
    let cmp = second_stage_dominates(&x.a, &x.b, &x.c)?;
    Ok(Some(cmp.first_stage - cmp.second_stage))
}

fn robertson(x: &Instance) -> Result<Option<f64>> {
    Ok(Some(-variance_relations(&x.rho, &x.a, &x.b)?.robertson_slack()))
}

fn successive_variance(x: &Instance) -> Result<Option<f64>> {
    Ok(Some(-variance_relations(&x.rho, &x.a, &x.b)?.successive_slack()))
}

fn pinched_commutes(x: &Instance) -> Result<Option<f64>> {
    let v = variance_relations(&x.rho, &x.a, &x.b)?;
    Ok(Some(x.a.matrix().commutator(&v.c_of_b).max_abs()))
}

fn interference_vanishes(x: &Instance) -> Result<Option<f64>> {
    let collapsed = luders_map(&x.rho, &x.a)?;
    Ok(Some(interference_gap(&collapsed, &x.a, &x.b)?))
}

const PROPERTIES: &[Property] = &[
    Property { name: "spectral-resolution", tolerance: IDENTITY_TOL, probe: spectral_resolution },
    Property { name: "luders-idempotent", tolerance: IDENTITY_TOL, probe: luders_idempotent },
    Property { name: "luders-commutes", tolerance: IDENTITY_TOL, probe: luders_commutes },
    Property { name: "joint-marginals", tolerance: IDENTITY_TOL, probe: joint_marginals },
    Property { name: "entropy-identities", tolerance: IDENTITY_TOL, probe: entropy_identities },
    Property { name: "subadditivity", tolerance: ENTROPY_TOL, probe: subadditivity },
    Property { name: "joint-dominates-marginals", tolerance: ENTROPY_TOL, probe: joint_dominates_marginals },
    Property { name: "three-subadditivity", tolerance: ENTROPY_TOL, probe: three_subadditivity },
    Property { name: "strong-subadditivity", tolerance: ENTROPY_TOL, probe: strong_subadditivity },
    Property { name: "joint-entropy-bound", tolerance: ENTROPY_TOL, probe: joint_entropy_bound },
    Property { name: "projector-norms", tolerance: IDENTITY_TOL, probe: projector_norms },
    Property { name: "bound-chain", tolerance: ENTROPY_TOL, probe: bound_chain },
    Property { name: "collapsed-entropy-bound", tolerance: ENTROPY_TOL, probe: collapsed_entropy_bound },
    Property { name: "doubly-stochastic", tolerance: IDENTITY_TOL, probe: doubly_stochastic },
    Property { name: "second-stage-dominance", tolerance: ENTROPY_TOL, probe: second_stage_dominance },
    Property { name: "robertson", tolerance: ENTROPY_TOL, probe: robertson },
    Property { name: "successive-variance", tolerance: ENTROPY_TOL, probe: successive_variance },
    Property { name: "pinched-commutes", tolerance: IDENTITY_TOL, probe: pinched_commutes },
    Property { name: "interference-vanishes", tolerance: IDENTITY_TOL, probe: interference_vanishes },
];

#[derive(Debug, Serialize)]
struct Outcome {
    property: &'static str,
    checked: usize,
    worst_defect: Option<f64>,
    tolerance: f64,
    holds: bool,
    /// Instance index of the worst defect.
    worst_instance: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    counterexample: Option<serde_json::Value>,
}

#[derive(Debug, Serialize)]
struct VerifyReport {
    command: &'static str,
    seed: u64,
    instances: usize,
    dims: [usize; 2],
    properties: Vec<Outcome>,
    all_hold: bool,
}

pub fn parse_dims(s: &str) -> Result<(usize, usize)> {
    let bad = || CliError::Input(format!("--dims expects `lo-hi` within 2-{MAX_VERIFY_DIM}, got {s:?}"));
    let (lo, hi) = match s.split_once('-') {
        Some((lo, hi)) => (lo.trim().parse().map_err(|_| bad())?, hi.trim().parse().map_err(|_| bad())?),
        None => {
            let d = s.trim().parse().map_err(|_| bad())?;
            (d, d)
        }
    };
    if lo < 2 || hi > MAX_VERIFY_DIM || lo > hi {
        return Err(bad());
    }
    Ok((lo, hi))
}

/// Qubit pair property, checked once on the 1° grid rather than per instance.
fn qubit_chain(seed: u64) -> Result<Outcome> {
    let curve = Curve::new(OptimizerConfig::default().with_seed(seed));
    let points = curve.sweep_degrees(0.0, 180.0, 181)?;
    let (worst, at) = points
        .iter()
        .enumerate()
        .map(|(k, p)| (-p.chain_slack(), k))
        .fold((f64::NEG_INFINITY, 0), |acc, x| if x.0 > acc.0 { x } else { acc });
    Ok(Outcome {
        property: "qubit-chain",
        checked: points.len(),
        worst_defect: Some(worst),
        tolerance: QUBIT_CHAIN_TOL,
        holds: worst <= QUBIT_CHAIN_TOL,
        worst_instance: Some(at),
        counterexample: None,
    })
}

pub fn run(args: &VerifyArgs, ctx: &Context) -> Result<(String, u8)> {
    if args.instances == 0 {
        return Err(CliError::Input("--instances must be at least 1".into()));
    }
    let (lo, hi) = parse_dims(&args.dims)?;

    // One row of defects per instance; rayon preserves index order on collect.
    let rows: Vec<Vec<Option<f64>>> = (0..args.instances)
        .into_par_iter()
        .map(|i| {
            let x = Instance::generate(ctx.seed, i, lo, hi)?;
            PROPERTIES.iter().map(|p| (p.probe)(&x)).collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;

    let mut properties = Vec::with_capacity(PROPERTIES.len() + 1);
    for (k, prop) in PROPERTIES.iter().enumerate() {
        let mut worst: Option<(f64, usize)> = None;
        let mut checked = 0;
        for (i, row) in rows.iter().enumerate() {
            if let Some(d) = row[k] {
                checked += 1;
                // NaN defects count as worst of all.
                let d = if d.is_nan() { f64::INFINITY } else { d };
                if worst.is_none_or(|(w, _)| d > w) {
                    worst = Some((d, i));
                }
            }
        }
        let holds = worst.is_none_or(|(w, _)| w <= prop.tolerance);
        let counterexample = match (holds, worst) {
            (false, Some((_, i))) => Some(Instance::generate(ctx.seed, i, lo, hi)?.document()),
            _ => None,
        };
        properties.push(Outcome {
            property: prop.name,
            checked,
            worst_defect: worst.map(|(w, _)| w),
            tolerance: prop.tolerance,
            holds,
            worst_instance: worst.map(|(_, i)| i),
            counterexample,
        });
    }
    properties.push(qubit_chain(ctx.seed)?);

    let all_hold = properties.iter().all(|p| p.holds);
    let report = VerifyReport {
        command: "verify",
        seed: ctx.seed,
        instances: args.instances,
        dims: [lo, hi],
        properties,
        all_hold,
    };
    let code = if all_hold { exit::SUCCESS } else { exit::MISMATCH };
    Ok((render(&report, ctx)?, code))
}

fn render(report: &VerifyReport, ctx: &Context) -> Result<String> {
    let worst = |o: &Outcome| o.worst_defect.map(sig).unwrap_or_else(|| "-".into());
    match ctx.format {
        Format::Json => Ok(json_string(report)),
        Format::Csv => {
            let rows: Vec<Vec<String>> = report
                .properties
                .iter()
                .map(|o| {
                    vec![
                        o.property.to_string(),
                        o.checked.to_string(),
                        o.worst_defect.map(|w| w.to_string()).unwrap_or_default(),
                        o.tolerance.to_string(),
                        o.holds.to_string(),
                    ]
                })
                .collect();
            csv_string(&["property", "checked", "worst_defect", "tolerance", "holds"], &rows)
        }
        Format::Table => {
            let mut out = format!(
                "# verify: {} instances, dims {}-{}, seed {}\n",
                report.instances, report.dims[0], report.dims[1], report.seed
            );
            let mut t = TextTable::new(["property", "checked", "worst defect", "tolerance", "result"]);
            for o in &report.properties {
                t.push(vec![
                    o.property.into(),
                    o.checked.to_string(),
                    worst(o),
                    sig(o.tolerance),
                    if o.holds { "PASS" } else { "FAIL" }.into(),
                ]);
            }
            out.push_str(&t.render());
            for o in report.properties.iter().filter(|o| o.counterexample.is_some()) {
                out.push_str(&format!(
                    "\ncounterexample for {} (instance {}):\n{}",
                    o.property,
                    o.worst_instance.unwrap_or_default(),
                    json_string(&o.counterexample)
                ));
            }
            if !ctx.quiet {
                let failed = report.properties.iter().filter(|o| !o.holds).count();
                out.push_str(&if failed == 0 {
                    format!("\nall {} properties hold\n", report.properties.len())
                } else {
                    format!("\n{failed} of {} properties FAILED\n", report.properties.len())
                });
            }
            Ok(out)
        }
    }
}
