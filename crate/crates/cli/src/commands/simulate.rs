//! Monte Carlo runs of a measurement chain, side by side with the analytic
//! distribution.

use std::path::PathBuf;

use clap::Args;
use entropic_core::entropy::entropy_nats;
use entropic_core::state::{sample_sequence, wigner_joint};
use entropic_core::{Joint, Observable, SampleCounts};
use serde::Serialize;

use crate::error::{exit, CliError, Result};
use crate::output::{csv_string, json_string, sig, sig_opt, Context, Format, TextTable};
use crate::scenario::Scenario;

#[derive(Args, Debug)]
pub struct SimulateArgs {
    /// Scenario document (JSON); must contain a state.
    pub file: PathBuf,
    /// Observable names in measurement order; defaults to the document order.
    #[arg(long, value_delimiter = ',')]
    pub order: Vec<String>,
    /// Number of sampled outcome tuples.
    #[arg(long, default_value_t = 100_000)]
    pub samples: u64,
}

#[derive(Debug, Serialize)]
struct Cell {
    outcome: Vec<f64>,
    analytic: f64,
    empirical: f64,
    standard_error: f64,
}

#[derive(Debug, Serialize)]
struct Marginal {
    observable: String,
    cells: Vec<Cell>,
}

#[derive(Debug, Serialize)]
struct EntropyRow {
    name: String,
    analytic: f64,
    empirical: f64,
    standard_error: f64,
}

#[derive(Debug, Serialize)]
struct InterferenceCell {
    outcome: f64,
    sequential_analytic: f64,
    direct_analytic: f64,
    sequential_empirical: f64,
    direct_empirical: f64,
}

#[derive(Debug, Serialize)]
struct Interference {
    observable: String,
    direct_seed: u64,
    cells: Vec<InterferenceCell>,
    gap_analytic: f64,
    gap_empirical: f64,
}

#[derive(Debug, Serialize)]
struct Correlation {
    first: String,
    second: String,
    analytic: Option<f64>,
    empirical: Option<f64>,
}

#[derive(Debug, Serialize)]
struct SimulateReport {
    command: &'static str,
    file: String,
    order: Vec<String>,
    samples: u64,
    seed: u64,
    log_base: String,
    joint: Vec<Cell>,
    marginals: Vec<Marginal>,
    entropies: Vec<EntropyRow>,
    interference: Option<Interference>,
    correlations: Vec<Correlation>,
}

fn binomial_se(p: f64, n: f64) -> f64 {
    (p * (1.0 - p) / n).max(0.0).sqrt()
}

/// Plug-in entropy and its delta-method standard error, both in nats:
/// `Var Ĥ ≈ (Σ p ln²p − H²) / n`.
fn entropy_with_se(freqs: &[f64], n: f64) -> (f64, f64) {
    let h = entropy_nats(freqs);
    let second: f64 = freqs.iter().filter(|&&p| p > 0.0).map(|&p| p * p.ln() * p.ln()).sum();
    (h, ((second - h * h).max(0.0) / n).sqrt())
}

/// Splits a row-major flat index into per-axis outcome indices.
fn unflatten(mut flat: usize, shape: &[usize]) -> Vec<usize> {
    let mut index = vec![0; shape.len()];
    for (slot, &w) in index.iter_mut().zip(shape).rev() {
        *slot = flat % w;
        flat /= w;
    }
    index
}

/// Pearson correlation of two axes under the weights `w` over flat cells.
fn pearson(weights: &[f64], shape: &[usize], axes: &[Vec<f64>], i: usize, j: usize) -> Option<f64> {
    let (mut ex, mut ey, mut exx, mut eyy, mut exy) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (flat, &w) in weights.iter().enumerate() {
        let idx = unflatten(flat, shape);
        let (x, y) = (axes[i][idx[i]], axes[j][idx[j]]);
        ex += w * x;
        ey += w * y;
        exx += w * x * x;
        eyy += w * y * y;
        exy += w * x * y;
    }
    let vx = exx - ex * ex;
    let vy = eyy - ey * ey;
    // Relative threshold so that a sharp outcome reads as zero variance.
    let scale = exx.max(eyy).max(f64::MIN_POSITIVE);
    if vx <= 1e-12 * scale || vy <= 1e-12 * scale {
        return None;
    }
    Some(((exy - ex * ey) / (vx * vy).sqrt()).clamp(-1.0, 1.0))
}

fn marginal_freqs(counts: &SampleCounts, axis: usize) -> Vec<f64> {
    let n = counts.samples() as f64;
    counts.marginal_counts(axis).iter().map(|&c| c as f64 / n).collect()
}

pub fn run(args: &SimulateArgs, ctx: &Context) -> Result<(String, u8)> {
    if args.samples == 0 {
        return Err(CliError::Input("--samples must be at least 1".into()));
    }
    let scenario = Scenario::load(&args.file)?;
    let rho = scenario
        .state
        .as_ref()
        .ok_or_else(|| CliError::Input("simulate needs a state in the scenario document".into()))?;
    let chain = scenario.select(&args.order)?;
    let names: Vec<String> = chain.iter().map(|(n, _)| n.clone()).collect();
    let observables: Vec<&Observable> = chain.iter().map(|(_, o)| *o).collect();

    let joint: Joint = wigner_joint(rho, &observables)?;
    let counts = sample_sequence(rho, &observables, args.samples, ctx.seed)?;
    let n = args.samples as f64;
    let shape = counts.shape().to_vec();
    let axes = joint.axes().to_vec();
    let freqs = counts.frequencies();

    let joint_cells = joint
        .table()
        .iter()
        .zip(&freqs)
        .enumerate()
        .map(|(flat, (&analytic, &empirical))| Cell {
            outcome: unflatten(flat, &shape).iter().zip(&axes).map(|(&k, ax)| ax[k]).collect(),
            analytic,
            empirical,
            standard_error: binomial_se(empirical, n),
        })
        .collect();

    let mut marginals = Vec::new();
    let mut entropies = Vec::new();
    for (axis, name) in names.iter().enumerate() {
        let analytic = joint.marginal(axis);
        let empirical = marginal_freqs(&counts, axis);
        marginals.push(Marginal {
            observable: name.clone(),
            cells: axes[axis]
                .iter()
                .zip(analytic.weights())
                .zip(&empirical)
                .map(|((&value, &a), &e)| Cell {
                    outcome: vec![value],
                    analytic: a,
                    empirical: e,
                    standard_error: binomial_se(e, n),
                })
                .collect(),
        });
        let (h, se) = entropy_with_se(&empirical, n);
        entropies.push(EntropyRow {
            name: format!("S({})", scenario.label(name)),
            analytic: ctx.scale(entropy_nats(analytic.weights())),
            empirical: ctx.scale(h),
            standard_error: ctx.scale(se),
        });
    }
    if names.len() > 1 {
        let (h, se) = entropy_with_se(&freqs, n);
        entropies.push(EntropyRow {
            name: "S(joint)".into(),
            analytic: ctx.scale(entropy_nats(joint.table())),
            empirical: ctx.scale(h),
            standard_error: ctx.scale(se),
        });
    }

    let interference = match observables.split_last() {
        Some((last, prefix)) if !prefix.is_empty() => {
            let axis = observables.len() - 1;
            let direct_seed = ctx.seed.wrapping_add(1);
            let direct = sample_sequence(rho, &[*last], args.samples, direct_seed)?;
            let direct_freqs = direct.frequencies();
            let sequential_freqs = marginal_freqs(&counts, axis);
            let cells: Vec<InterferenceCell> = last
                .projectors()
                .iter()
                .enumerate()
                .map(|(j, q)| InterferenceCell {
                    outcome: axes[axis][j],
                    sequential_analytic: joint.marginal(axis).weights()[j],
                    direct_analytic: rho.probability(q),
                    sequential_empirical: sequential_freqs[j],
                    direct_empirical: direct_freqs[j],
                })
                .collect();
            let gap = |f: fn(&InterferenceCell) -> f64| cells.iter().map(f).fold(0.0, f64::max);
            Some(Interference {
                observable: names[axis].clone(),
                direct_seed,
                gap_analytic: gap(|c| (c.sequential_analytic - c.direct_analytic).abs()),
                gap_empirical: gap(|c| (c.sequential_empirical - c.direct_empirical).abs()),
                cells,
            })
        }
        _ => None,
    };

    let correlations = (1..names.len())
        .map(|k| Correlation {
            first: names[k - 1].clone(),
            second: names[k].clone(),
            analytic: pearson(joint.table(), &shape, &axes, k - 1, k),
            empirical: pearson(&freqs, &shape, &axes, k - 1, k),
        })
        .collect();

    let report = SimulateReport {
        command: "simulate",
        file: args.file.display().to_string(),
        order: names,
        samples: args.samples,
        seed: ctx.seed,
        log_base: ctx.base_label(),
        joint: joint_cells,
        marginals,
        entropies,
        interference,
        correlations,
    };
    Ok((render(&report, &scenario, ctx)?, exit::SUCCESS))
}

fn outcome_label(values: &[f64]) -> String {
    values.iter().map(|&v| sig(v)).collect::<Vec<_>>().join(",")
}

fn render(report: &SimulateReport, scenario: &Scenario, ctx: &Context) -> Result<String> {
    match ctx.format {
        Format::Json => Ok(json_string(report)),
        Format::Csv => {
            let mut rows: Vec<Vec<String>> = Vec::new();
            let cell_row = |section: &str, c: &Cell| {
                vec![
                    section.to_string(),
                    outcome_label(&c.outcome),
                    c.analytic.to_string(),
                    c.empirical.to_string(),
                    c.standard_error.to_string(),
                ]
            };
            rows.extend(report.joint.iter().map(|c| cell_row("joint", c)));
            for m in &report.marginals {
                rows.extend(m.cells.iter().map(|c| cell_row(&format!("marginal:{}", m.observable), c)));
            }
            rows.extend(report.entropies.iter().map(|e| {
                vec![
                    "entropy".into(),
                    e.name.clone(),
                    e.analytic.to_string(),
                    e.empirical.to_string(),
                    e.standard_error.to_string(),
                ]
            }));
            if let Some(i) = &report.interference {
                rows.push(vec![
                    "interference-gap".into(),
                    i.observable.clone(),
                    i.gap_analytic.to_string(),
                    i.gap_empirical.to_string(),
                    String::new(),
                ]);
            }
            let opt = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
            rows.extend(report.correlations.iter().map(|c| {
                vec![
                    "correlation".into(),
                    format!("{},{}", c.first, c.second),
                    opt(c.analytic),
                    opt(c.empirical),
                    String::new(),
                ]
            }));
            csv_string(&["section", "key", "analytic", "empirical", "standard_error"], &rows)
        }
        Format::Table => {
            let labels: Vec<&str> = report.order.iter().map(|n| scenario.label(n)).collect();
            let mut out = format!(
                "# simulate {}: {} samples, seed {}, log base {}\n",
                labels.join(" -> "),
                report.samples,
                report.seed,
                report.log_base
            );
            let cells_table = |first: &str, cells: &[Cell]| {
                let mut t = TextTable::new([first, "analytic", "empirical", "std err"]);
                for c in cells {
                    t.push(vec![outcome_label(&c.outcome), sig(c.analytic), sig(c.empirical), sig(c.standard_error)]);
                }
                t.render()
            };
            out.push_str(&cells_table("joint outcome", &report.joint));
            for m in &report.marginals {
                out.push('\n');
                out.push_str(&cells_table(scenario.label(&m.observable), &m.cells));
            }
            out.push('\n');
            let mut t = TextTable::new(["entropy", "analytic", "empirical", "std err"]);
            for e in &report.entropies {
                t.push(vec![e.name.clone(), sig(e.analytic), sig(e.empirical), sig(e.standard_error)]);
            }
            out.push_str(&t.render());
            if let Some(i) = &report.interference {
                out.push_str(&format!(
                    "\n# {} with and without the earlier measurements (direct run seed {})\n",
                    scenario.label(&i.observable),
                    i.direct_seed
                ));
                let mut t = TextTable::new(["outcome", "sequential", "direct", "seq. sampled", "direct sampled"]);
                for c in &i.cells {
                    t.push(vec![
                        sig(c.outcome),
                        sig(c.sequential_analytic),
                        sig(c.direct_analytic),
                        sig(c.sequential_empirical),
                        sig(c.direct_empirical),
                    ]);
                }
                t.push(vec!["max gap".into(), String::new(), sig(i.gap_analytic), String::new(), sig(i.gap_empirical)]);
                out.push_str(&t.render());
            }
            if !report.correlations.is_empty() {
                out.push('\n');
                let mut t = TextTable::new(["correlation", "analytic", "empirical"]);
                for c in &report.correlations {
                    t.push(vec![
                        format!("{} , {}", scenario.label(&c.first), scenario.label(&c.second)),
                        sig_opt(c.analytic),
                        sig_opt(c.empirical),
                    ]);
                }
                out.push_str(&t.render());
                if !ctx.quiet && report.correlations.iter().any(|c| c.analytic.is_none() || c.empirical.is_none()) {
                    out.push_str("\n- : an outcome column has zero variance\n");
                }
            }
            Ok(out)
        }
    }
}
