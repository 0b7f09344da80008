use std::path::PathBuf;

use clap::Args;
use entropic_core::bounds::lambda_s_three;
use entropic_core::entropy::{entropies_sequential, entropies_sequential_3, entropy_distinct};
use entropic_core::optimize::{lambda_d_numeric, lambda_s3_numeric, lambda_s_numeric};
use entropic_core::{Bounds, Observable, OptimizerConfig};
use indexmap::IndexMap;
use serde::Serialize;

use crate::error::{CliError, Result};
use crate::output::{checks_table, csv_string, json_string, sig_opt, Check, Context, Format, TextTable};
use crate::scenario::Scenario;

/// Slack allowed on inequalities between closed-form quantities.
const ANALYTIC_SLACK: f64 = 1e-9;
/// Slack allowed when comparing an optimizer value with a lower bound.
const NUMERIC_SLACK: f64 = 1e-6;
/// Agreement required between optimizer and closed-form optima.
const TWO_STAGE_AGREEMENT: f64 = 1e-4;
const THREE_STAGE_AGREEMENT: f64 = 1e-3;

#[derive(Args, Debug)]
pub struct BoundsArgs {
    /// Scenario document (JSON).
    pub file: PathBuf,
    /// Observable names in measurement order (two or three); defaults to
    /// the document order.
    #[arg(long, value_delimiter = ',')]
    pub order: Vec<String>,
    /// Optimizer starts for the numeric optima.
    #[arg(long, default_value_t = 64)]
    pub starts: usize,
    /// Iteration budget per optimizer start.
    #[arg(long, default_value_t = 2000)]
    pub max_iterations: usize,
}

#[derive(Debug, Serialize)]
struct Inputs {
    file: String,
    order: Vec<String>,
    dim: usize,
    starts: usize,
    max_iterations: usize,
    has_state: bool,
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    command: &'static str,
    inputs: Inputs,
    seed: u64,
    log_base: String,
    values: IndexMap<String, Option<f64>>,
    checks: Vec<Check>,
}

pub fn run(args: &BoundsArgs, ctx: &Context) -> Result<(String, u8)> {
    let scenario = Scenario::load(&args.file)?;
    let chain = scenario.select(&args.order)?;
    let config = OptimizerConfig {
        max_iterations: args.max_iterations,
        ..OptimizerConfig::default().with_starts(args.starts).with_seed(ctx.seed)
    };
    config.validate()?;
    let observables: Vec<&Observable> = chain.iter().map(|(_, o)| *o).collect();
    let (values, checks) = match observables.as_slice() {
        [a, b] => two(a, b, &scenario, &config, ctx)?,
        [a, b, c] => three(a, b, c, &scenario, &config, ctx)?,
        _ => {
            return Err(CliError::Input(format!(
                "bounds needs two or three observables, got {}",
                observables.len()
            )))
        }
    };
    let report = RunReport {
        command: "bounds",
        inputs: Inputs {
            file: args.file.display().to_string(),
            order: chain.iter().map(|(n, _)| n.clone()).collect(),
            dim: scenario.dim,
            starts: args.starts,
            max_iterations: args.max_iterations,
            has_state: scenario.state.is_some(),
        },
        seed: ctx.seed,
        log_base: ctx.base_label(),
        values,
        checks,
    };
    Ok((render(&report, &scenario, ctx)?, crate::error::exit::SUCCESS))
}

type Outcome = (IndexMap<String, Option<f64>>, Vec<Check>);

fn two(a: &Observable, b: &Observable, scenario: &Scenario, config: &OptimizerConfig, ctx: &Context) -> Result<Outcome> {
    let bounds = Bounds::compute(a, b, config)?;
    let lambda_d = lambda_d_numeric(a, b, config)?.value;
    let lambda_s_num = lambda_s_numeric(a, b, config)?.value;
    let s = |x: f64| ctx.scale(x);

    let mut values = IndexMap::new();
    values.insert("deutsch".into(), bounds.deutsch.map(s));
    values.insert("partovi".into(), Some(s(bounds.partovi)));
    values.insert("maassen_uffink".into(), bounds.maassen_uffink.map(s));
    values.insert("krishna_parthasarathy".into(), Some(s(bounds.krishna_parthasarathy)));
    values.insert("lambda_s".into(), Some(s(bounds.lambda_s)));
    values.insert("lambda_d_numeric".into(), Some(s(lambda_d)));
    values.insert("lambda_s_numeric".into(), Some(s(lambda_s_num)));

    let mut checks = Vec::new();
    if let (Some(mu), Some(d)) = (bounds.maassen_uffink, bounds.deutsch) {
        checks.push(Check::at_least("lambda_s >= maassen_uffink", s(bounds.lambda_s), s(mu), ANALYTIC_SLACK));
        checks.push(Check::at_least("maassen_uffink >= deutsch", s(mu), s(d), ANALYTIC_SLACK));
    }
    checks.push(Check::at_least(
        "lambda_s >= krishna_parthasarathy",
        s(bounds.lambda_s),
        s(bounds.krishna_parthasarathy),
        ANALYTIC_SLACK,
    ));
    checks.push(Check::at_least(
        "krishna_parthasarathy >= partovi",
        s(bounds.krishna_parthasarathy),
        s(bounds.partovi),
        ANALYTIC_SLACK,
    ));
    let strongest = [Some(bounds.partovi), Some(bounds.krishna_parthasarathy), bounds.deutsch, bounds.maassen_uffink]
        .into_iter()
        .flatten()
        .fold(f64::NEG_INFINITY, f64::max);
    checks.push(Check::at_least("lambda_d_numeric >= strongest distinct bound", s(lambda_d), s(strongest), NUMERIC_SLACK));
    checks.push(Check::agrees("lambda_s_numeric ~ lambda_s", s(lambda_s_num), s(bounds.lambda_s), TWO_STAGE_AGREEMENT));

    if let Some(rho) = &scenario.state {
        let seq = entropies_sequential(rho, a, b)?;
        let distinct = entropy_distinct(rho, a)? + entropy_distinct(rho, b)?;
        values.insert("state.distinct_sum".into(), Some(s(distinct)));
        values.insert("state.s_a".into(), Some(s(seq.s_a)));
        values.insert("state.s_b".into(), Some(s(seq.s_b)));
        values.insert("state.s_joint".into(), Some(s(seq.s_joint)));
        checks.push(Check::at_least(
            "state distinct_sum >= krishna_parthasarathy",
            s(distinct),
            s(bounds.krishna_parthasarathy),
            ANALYTIC_SLACK,
        ));
        checks.push(Check::at_least("state s_b >= lambda_s", s(seq.s_b), s(bounds.lambda_s), ANALYTIC_SLACK));
        checks.push(Check::at_least("state s_a + s_b >= s_joint", s(seq.s_a + seq.s_b), s(seq.s_joint), ANALYTIC_SLACK));
    }
    Ok((values, checks))
}

fn three(
    a: &Observable,
    b: &Observable,
    c: &Observable,
    scenario: &Scenario,
    config: &OptimizerConfig,
    ctx: &Context,
) -> Result<Outcome> {
    let triple = lambda_s_three(a, b, c)?;
    let numeric = lambda_s3_numeric(a, b, c, config)?.value;
    let s = |x: f64| ctx.scale(x);

    let mut values = IndexMap::new();
    values.insert("lambda_s3_separate".into(), Some(s(triple.as_printed)));
    values.insert("lambda_s3_joint".into(), Some(s(triple.joint)));
    values.insert("first_stage".into(), Some(s(triple.first_stage)));
    values.insert("second_stage".into(), Some(s(triple.second_stage)));
    values.insert("lambda_s3_numeric".into(), Some(s(numeric)));

    let mut checks = vec![
        Check::at_least("lambda_s3_joint >= lambda_s3_separate", s(triple.joint), s(triple.as_printed), ANALYTIC_SLACK),
        Check::at_least("second_stage >= first_stage", s(triple.second_stage), s(triple.first_stage), ANALYTIC_SLACK),
        Check::at_least("lambda_s3_numeric >= lambda_s3_separate", s(numeric), s(triple.as_printed), NUMERIC_SLACK),
        Check::agrees("lambda_s3_numeric ~ lambda_s3_joint", s(numeric), s(triple.joint), THREE_STAGE_AGREEMENT),
    ];
    if let Some(rho) = &scenario.state {
        let seq = entropies_sequential_3(rho, a, b, c)?;
        let s_c = seq.s_c.expect("three-observable report");
        values.insert("state.s_a".into(), Some(s(seq.s_a)));
        values.insert("state.s_b".into(), Some(s(seq.s_b)));
        values.insert("state.s_c".into(), Some(s(s_c)));
        values.insert("state.s_joint".into(), Some(s(seq.s_joint)));
        checks.push(Check::at_least("state s_c >= second_stage", s(s_c), s(triple.second_stage), ANALYTIC_SLACK));
        checks.push(Check::at_least(
            "state s_a + s_b + s_c >= lambda_s3_joint",
            s(seq.s_a + seq.s_b + s_c),
            s(triple.joint),
            ANALYTIC_SLACK,
        ));
    }
    Ok((values, checks))
}

fn render(report: &RunReport, scenario: &Scenario, ctx: &Context) -> Result<String> {
    match ctx.format {
        Format::Json => Ok(json_string(report)),
        Format::Csv => {
            let mut rows: Vec<Vec<String>> = report
                .values
                .iter()
                .map(|(k, v)| vec!["value".into(), k.clone(), v.map(|x| x.to_string()).unwrap_or_default(), String::new()])
                .collect();
            rows.extend(
                report
                    .checks
                    .iter()
                    .map(|c| vec!["check".into(), c.name.clone(), c.slack.to_string(), c.holds.to_string()]),
            );
            csv_string(&["kind", "name", "value", "holds"], &rows)
        }
        Format::Table => {
            let labels: Vec<&str> = report.inputs.order.iter().map(|n| scenario.label(n)).collect();
            let mut out = format!(
                "# bounds for {} (dim {}), seed {}, log base {}\n",
                labels.join(" -> "),
                report.inputs.dim,
                report.seed,
                report.log_base
            );
            let mut t = TextTable::new(["quantity", "value"]);
            for (k, v) in &report.values {
                t.push(vec![k.clone(), sig_opt(*v)]);
            }
            out.push_str(&t.render());
            out.push('\n');
            out.push_str(&checks_table(&report.checks));
            if !ctx.quiet && report.values.values().any(Option::is_none) {
                out.push_str("\n- : defined only for nondegenerate spectra\n");
            }
            Ok(out)
        }
    }
}
