use cvclone::cloning::{clone_q_grid, intermediate_state_check, CloneMoments, IntermediateCheck};
use cvclone::fock::BackendComparison;
use cvclone::report::{complex_pair, GridSpec, ModeMoments, QSample, SCHEMA_VERSION};
use cvclone::telecloning::{
    teleclone_with_log, wigner_quadratic_form_check, BellLayout, QuadraticFormReport,
};
use cvclone::{
    closed_form_fidelity, compare_backends, run_clone, Complex64, TeleclonePlan, TelecloneReport,
};
use serde::Serialize;

use crate::{
    CliError, CloneArgs, Format, GridArgs, OracleArgs, TableArgs, TelecloneArgs, TOLERANCE,
};

/// Rendered report plus verdict.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub body: Vec<u8>,
    pub passed: bool,
    /// One-line human summary for stderr.
    pub summary: String,
}

type CmdResult = Result<Outcome, CliError>;

fn json<T: Serialize>(value: &T) -> Vec<u8> {
    let mut body = serde_json::to_vec_pretty(value).expect("reports serialize");
    body.push(b'\n');
    body
}

fn csv_rows<T: Serialize>(rows: &[T]) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row).expect("rows serialize");
    }
    w.into_inner().expect("in-memory writer")
}

fn json_only(format: Option<Format>, command: &str) -> Result<(), CliError> {
    match format {
        Some(Format::Csv) => Err(CliError::Usage(format!(
            "{command} writes a JSON report; csv is available for qgrid and fidelity-table"
        ))),
        _ => Ok(()),
    }
}

#[derive(Serialize)]
struct CloneOutput<'a> {
    schema_version: u32,
    #[serde(rename = "N")]
    n: usize,
    #[serde(with = "complex_pair")]
    xi: Complex64,
    fidelity: f64,
    closed_form: f64,
    /// Worst of the fidelity and pairwise deviations.
    max_deviation: f64,
    max_fidelity_deviation: f64,
    max_pairwise_deviation: f64,
    passed: bool,
    clones: &'a [CloneMoments],
    ancilla: ModeMoments,
    after_transfer: IntermediateCheck,
}

pub fn clone(args: &CloneArgs) -> CmdResult {
    json_only(args.out.format, "clone")?;
    let n = args.n as usize;
    let report = run_clone(n, args.xi)?;
    let max_deviation = report
        .max_fidelity_deviation
        .max(report.max_pairwise_deviation);
    let passed = max_deviation < TOLERANCE;
    let out = CloneOutput {
        schema_version: SCHEMA_VERSION,
        n,
        xi: args.xi,
        fidelity: report.fidelity(),
        closed_form: report.closed_form_fidelity,
        max_deviation,
        max_fidelity_deviation: report.max_fidelity_deviation,
        max_pairwise_deviation: report.max_pairwise_deviation,
        passed,
        clones: &report.per_clone,
        ancilla: report.ancilla,
        after_transfer: intermediate_state_check(n, args.xi)?,
    };
    Ok(Outcome {
        body: json(&out),
        passed,
        summary: format!(
            "clone N={n}: fidelity {} (closed form {}), max deviation {max_deviation:.3e}",
            out.fidelity, out.closed_form
        ),
    })
}

#[derive(Serialize)]
struct QRow {
    re_alpha: f64,
    im_alpha: f64,
    q_simulated: f64,
    q_closed_form: f64,
    abs_diff: f64,
}

#[derive(Serialize)]
struct GridOutput<'a> {
    schema_version: u32,
    #[serde(rename = "N")]
    n: usize,
    #[serde(with = "complex_pair")]
    xi: Complex64,
    grid: GridSpec,
    max_abs_diff: f64,
    passed: bool,
    samples: &'a [QSample],
}

pub fn qgrid(args: &GridArgs) -> CmdResult {
    let n = args.clone.n as usize;
    let xi = args.clone.xi;
    let grid = GridSpec::new(args.center.unwrap_or(xi), args.half_width, args.points)?;
    let samples = clone_q_grid(n, xi, &grid)?;
    let max_abs_diff = samples.iter().map(|s| s.abs_diff).fold(0.0, f64::max);
    let passed = max_abs_diff < TOLERANCE;
    let body = match args.clone.out.format.unwrap_or(Format::Csv) {
        Format::Csv => csv_rows(
            &samples
                .iter()
                .map(|s| QRow {
                    re_alpha: s.alpha.re,
                    im_alpha: s.alpha.im,
                    q_simulated: s.simulated,
                    q_closed_form: s.closed_form,
                    abs_diff: s.abs_diff,
                })
                .collect::<Vec<_>>(),
        ),
        Format::Json => json(&GridOutput {
            schema_version: SCHEMA_VERSION,
            n,
            xi,
            grid,
            max_abs_diff,
            passed,
            samples: &samples,
        }),
    };
    Ok(Outcome {
        body,
        passed,
        summary: format!(
            "qgrid N={n}: {p}x{p} points, max |Q_sim - Q_closed| {max_abs_diff:.3e}",
            p = grid.points
        ),
    })
}

#[derive(Serialize)]
struct TelecloneOutput {
    schema_version: u32,
    deterministic_fidelity: f64,
    passed: bool,
    #[serde(flatten)]
    report: TelecloneReport,
    layout: BellLayout,
    wigner_form: QuadraticFormReport,
}

pub fn teleclone(args: &TelecloneArgs) -> CmdResult {
    json_only(args.out.format, "teleclone")?;
    let n = args.n as usize;
    let samples = usize::try_from(args.samples)
        .map_err(|_| CliError::Usage(format!("too many samples: {}", args.samples)))?;
    let plan = TeleclonePlan::new(n, args.seed, samples)?;
    let report = teleclone_with_log(n, args.xi, &plan, args.log_outcomes)?;
    let passed = report.max_fidelity_deviation < TOLERANCE;
    let out = TelecloneOutput {
        schema_version: SCHEMA_VERSION,
        deterministic_fidelity: report.per_clone_fidelity[0],
        passed,
        report,
        layout: plan.layout,
        wigner_form: wigner_quadratic_form_check(n)?,
    };
    Ok(Outcome {
        body: json(&out),
        passed,
        summary: format!(
            "teleclone N={n}: deterministic fidelity {} (closed form {}), Monte Carlo {} ± {}",
            out.deterministic_fidelity,
            out.report.analytic_fidelity,
            out.report.monte_carlo_fidelity_mean,
            out.report.monte_carlo_fidelity_stderr
        ),
    })
}

#[derive(Serialize)]
struct OracleOutput {
    schema_version: u32,
    #[serde(flatten)]
    comparison: BackendComparison,
}

pub fn oracle_check(args: &OracleArgs) -> CmdResult {
    json_only(args.out.format, "oracle-check")?;
    let comparison = compare_backends(args.n as usize, args.xi, args.cutoff as usize)?;
    let c = &comparison;
    let summary = format!(
        "oracle-check N={} cutoff {} (cavity {}): mean {:.2e}, cov {:.2e}, fidelity {:.2e}, leakage {:.2e}",
        c.n,
        c.cutoff,
        c.cavity_cutoff,
        c.max_mean_deviation,
        c.max_cov_deviation,
        c.max_fidelity_deviation,
        c.leakage
    );
    let passed = comparison.passed;
    Ok(Outcome {
        body: json(&OracleOutput {
            schema_version: SCHEMA_VERSION,
            comparison,
        }),
        passed,
        summary,
    })
}

#[derive(Serialize)]
struct TableRow {
    #[serde(rename = "N")]
    n: usize,
    #[serde(rename = "simulated_F")]
    simulated: f64,
    #[serde(rename = "closed_form_F")]
    closed_form: f64,
    deviation: f64,
}

#[derive(Serialize)]
struct TableOutput<'a> {
    schema_version: u32,
    #[serde(with = "complex_pair")]
    xi: Complex64,
    /// Closed form strictly decreasing in N over the table.
    monotone_decreasing: bool,
    passed: bool,
    rows: &'a [TableRow],
}

pub fn fidelity_table(args: &TableArgs) -> CmdResult {
    if args.n_min > args.n_max {
        return Err(CliError::Usage(format!(
            "empty N range {}..={}",
            args.n_min, args.n_max
        )));
    }
    let rows = (args.n_min..=args.n_max)
        .map(|n| {
            let n = n as usize;
            let report = run_clone(n, args.xi)?;
            let closed_form = closed_form_fidelity(n);
            // Report the clone furthest from the closed form.
            let simulated = report
                .per_clone
                .iter()
                .map(|c| c.fidelity)
                .max_by(|a, b| (a - closed_form).abs().total_cmp(&(b - closed_form).abs()))
                .expect("at least one clone");
            Ok(TableRow {
                n,
                simulated,
                closed_form,
                deviation: (simulated - closed_form).abs(),
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let worst = rows.iter().map(|r| r.deviation).fold(0.0, f64::max);
    let passed = worst < TOLERANCE;
    let monotone_decreasing = rows.windows(2).all(|w| w[1].closed_form < w[0].closed_form);
    let body = match args.out.format.unwrap_or(Format::Csv) {
        Format::Csv => csv_rows(&rows),
        Format::Json => json(&TableOutput {
            schema_version: SCHEMA_VERSION,
            xi: args.xi,
            monotone_decreasing,
            passed,
            rows: &rows,
        }),
    };
    Ok(Outcome {
        body,
        passed,
        summary: format!(
            "fidelity-table N={}..={}: max deviation {worst:.3e}",
            args.n_min, args.n_max
        ),
    })
}
