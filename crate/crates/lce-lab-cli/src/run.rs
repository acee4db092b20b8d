//! Subcommand implementations. Each returns the exact text the binary
//! writes, so tests can compare file bytes against a direct invocation.

use std::path::Path;

use lce_lab::cme::{cme_fit, KernelSpec};
use lce_lab::gaussian::{gaussian_condition, sample, CovRegime};
use lce_lab::lce::{
    empirical_risk, lcc, lce_compatible, lce_regularized, lce_truncated, LceResult, Regime,
};
use lce_lab::linalg::Tolerance;
use lce_lab::moments::JointMoments;
use lce_lab::verification::{
    contractivity_f1, contractivity_f2, dct_slope_formula, fixtures, FixtureReport,
};

use crate::docs::{
    self, to_json_string, CmeModelDoc, ConditionalGaussianDoc, GaussianJointDoc,
    GaussianMeasureDoc, LccDoc, LceResultDoc, TableDoc,
};
use crate::io::{self, numbered_columns, read_csv_blocks, read_joint_csv};
use crate::{CliError, SCHEMA};

/// Output format for tabular results.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

pub fn render_table(columns: Vec<String>, rows: Vec<Vec<f64>>, format: Format) -> String {
    match format {
        Format::Csv => io::write_table_csv(&columns, &rows),
        Format::Json => to_json_string(&TableDoc {
            schema: SCHEMA.into(),
            columns,
            rows,
        }),
    }
}

fn fit_regime(m: &JointMoments, regime: Regime, tol: &Tolerance) -> Result<LceResult, CliError> {
    match regime {
        Regime::Compatible => lce_compatible(m, tol).map_err(CliError::from),
        Regime::Truncated(n) => lce_truncated(m, n, tol).map_err(CliError::from),
        Regime::Regularized(e) => lce_regularized(m, e).map_err(CliError::from),
    }
}

/// `lce fit`: read a `v..,u..[,w]` CSV and emit the fitted operator JSON.
pub fn lce_fit(input: &Path, regime: Regime, tol: &Tolerance) -> Result<String, CliError> {
    let dist = read_joint_csv(input)?;
    let m = dist.empirical_moments(true);
    let fit = fit_regime(&m, regime, tol)?;
    let risk = empirical_risk(&dist, &fit.gamma)?;
    Ok(to_json_string(&LceResultDoc::new(&fit, Some(risk))))
}

/// `lce eval`: apply a fitted operator to a `v..` query CSV.
pub fn lce_eval(operator_json: &str, queries: &Path, format: Format) -> Result<String, CliError> {
    let doc: LceResultDoc = docs::from_json_str(operator_json)?;
    let gamma = doc.operator()?;
    let parsed = read_csv_blocks(queries, &["v"], false)?;
    let vs = &parsed.blocks[0];
    if vs[0].len() != gamma.dim_in() {
        return Err(CliError::parse(
            None,
            format!(
                "operator takes dim {} but queries have dim {}",
                gamma.dim_in(),
                vs[0].len()
            ),
        ));
    }
    let rows: Vec<Vec<f64>> = vs.iter().map(|v| gamma.apply(v).iter().copied().collect()).collect();
    Ok(render_table(
        numbered_columns("u", gamma.dim_out()),
        rows,
        format,
    ))
}

/// `lcc`: conditional-covariance field of `U` given `V` plus per-atom table.
pub fn lcc_run(input: &Path, regime: Regime, tol: &Tolerance) -> Result<String, CliError> {
    let dist = read_joint_csv(input)?;
    let field = lcc(&dist, None, regime, tol)?;
    let atoms = dist
        .atoms()
        .iter()
        .map(|(v, _)| Ok((v.clone(), field.eval(v)?)))
        .collect::<Result<Vec<_>, lce_lab::Error>>()?;
    Ok(to_json_string(&LccDoc::new(&field, &atoms)))
}

/// `cme fit`: read `x..,y..[,w]` pairs and persist the fitted model.
pub fn cme_fit_run(
    input: &Path,
    kx: &KernelSpec,
    ky: &KernelSpec,
    eps: f64,
    tol: &Tolerance,
) -> Result<String, CliError> {
    let mut parsed = read_csv_blocks(input, &["x", "y"], true)?;
    let y = parsed.blocks.pop().expect("two blocks");
    let x = parsed.blocks.pop().expect("two blocks");
    let model = cme_fit(&x, &y, parsed.weights, kx, ky, eps, tol)?;
    Ok(to_json_string(&CmeModelDoc::new(&model)))
}

/// `cme predict`: coefficient vectors (plus the out-of-span diagnostic) at
/// `x..` query points.
pub fn cme_predict_run(model_json: &str, queries: &Path, format: Format) -> Result<String, CliError> {
    let doc: CmeModelDoc = docs::from_json_str(model_json)?;
    let model = doc.into_model()?;
    let parsed = read_csv_blocks(queries, &["x"], false)?;
    let mut rows = Vec::new();
    for q in &parsed.blocks[0] {
        let (coords, out_of_span) = model.embed_query(q)?;
        let pred = model.lce.gamma.apply(&coords);
        let mut row: Vec<f64> = pred.iter().copied().collect();
        row.push(out_of_span);
        rows.push(row);
    }
    let m = model.y_points.len();
    let mut columns = numbered_columns("c", m);
    columns.push("span_residual".into());
    Ok(render_table(columns, rows, format))
}

/// `gaussian condition`: conditional mean map and covariance of the `U`
/// block of a joint measure.
pub fn gaussian_condition_run(
    joint_json: &str,
    regime: CovRegime,
    tol: &Tolerance,
) -> Result<String, CliError> {
    let doc: GaussianJointDoc = docs::from_json_str(joint_json)?;
    let joint = doc.measure(tol)?;
    let cond = gaussian_condition(&joint, doc.u_dim, regime, tol)?;
    Ok(to_json_string(&ConditionalGaussianDoc::new(&cond)))
}

/// `gaussian sample`: seeded draws, one sample per CSV row.
pub fn gaussian_sample_run(
    measure_json: &str,
    count: usize,
    seed: u64,
    tol: &Tolerance,
) -> Result<String, CliError> {
    let doc: GaussianMeasureDoc = docs::from_json_str(measure_json)?;
    let g = doc.measure(tol)?;
    let draws = sample(&g, count, seed, tol)?;
    let rows: Vec<Vec<f64>> = (0..draws.nrows())
        .map(|i| draws.row(i).iter().copied().collect())
        .collect();
    Ok(render_table(numbered_columns("x", g.dim()), rows, Format::Csv))
}

/// `paper-examples`: run the exact fixtures and report computed vs expected.
///
/// Returns the report text and whether every check passed.
pub fn paper_examples(
    only: Option<&str>,
    params: &[(String, f64)],
) -> Result<(String, bool), CliError> {
    let mut selected = fixtures();
    if let Some(name) = only {
        selected.retain(|f| f.name == name);
        if selected.is_empty() {
            return Err(CliError::parse(None, format!("no fixture named {name:?}")));
        }
    } else if !params.is_empty() {
        return Err(CliError::parse(None, "--param requires --only"));
    }
    for f in &mut selected {
        for (k, v) in params {
            f.set_param(k, *v)?;
        }
    }

    let mut out = String::new();
    let mut all_passed = true;
    let mut worst = 0.0f64;
    let mut reports: Vec<FixtureReport> = Vec::new();
    for f in &selected {
        reports.push(f.evaluate()?);
    }
    for (f, report) in selected.iter().zip(&reports) {
        out.push_str(&format!("{}: {}\n", f.name, f.summary));
        for c in &report.checks {
            out.push_str(&format!(
                "  {:<28} expected {:<24} computed {:<24} dev {:.3e}\n",
                c.label,
                io::fmt_f64(c.expected),
                io::fmt_f64(c.computed),
                c.deviation()
            ));
        }
        let status = if report.passed() { "PASS" } else { "FAIL" };
        out.push_str(&format!(
            "  {status} (max deviation {:.3e})\n\n",
            report.max_deviation()
        ));
        all_passed &= report.passed();
        worst = worst.max(report.max_deviation());
    }
    let n_pass = reports.iter().filter(|r| r.passed()).count();
    out.push_str(&format!(
        "{n_pass}/{} fixtures passed; max deviation {worst:.3e}\n",
        reports.len()
    ));
    Ok((out, all_passed))
}

/// Which data series `plotdata` emits.
#[derive(Debug, Clone)]
pub enum Series {
    /// `(p, ε, f₁(ε), f₂(ε))` over an ε grid per p.
    Contractivity {
        p: Vec<f64>,
        eps_max: f64,
        points: usize,
    },
    /// `(k, a_k)` closed-form slope growth of the power-tail fixture.
    DctSlope { eps: f64, k_max: u32 },
    /// Per-atom `(v.., u.., fit..)` for a data CSV under the fitted operator.
    Scatter { regime: Regime },
}

pub fn plotdata(
    series: &Series,
    input: Option<&Path>,
    tol: &Tolerance,
    format: Format,
) -> Result<String, CliError> {
    match series {
        Series::Contractivity { p, eps_max, points } => {
            if *points < 2 {
                return Err(CliError::parse(None, "need at least 2 grid points"));
            }
            let mut rows = Vec::new();
            for &pv in p {
                for i in 0..*points {
                    let eps = eps_max * i as f64 / (*points - 1) as f64;
                    rows.push(vec![
                        pv,
                        eps,
                        contractivity_f1(eps, pv),
                        contractivity_f2(eps, pv),
                    ]);
                }
            }
            let columns = vec!["p".into(), "eps".into(), "f1".into(), "f2".into()];
            Ok(render_table(columns, rows, format))
        }
        Series::DctSlope { eps, k_max } => {
            let rows = (1..=*k_max)
                .map(|k| vec![k as f64, dct_slope_formula(*eps, k)])
                .collect();
            Ok(render_table(vec!["k".into(), "a_k".into()], rows, format))
        }
        Series::Scatter { regime } => {
            let input = input
                .ok_or_else(|| CliError::parse(None, "scatter series needs --input"))?;
            let dist = read_joint_csv(input)?;
            let m = dist.empirical_moments(true);
            let fit = fit_regime(&m, *regime, tol)?;
            let mut columns = numbered_columns("v", dist.dim_v());
            columns.extend(numbered_columns("u", dist.dim_u()));
            columns.extend(numbered_columns("fit", dist.dim_u()));
            let rows = dist
                .atoms()
                .iter()
                .map(|(v, u)| {
                    let mut row: Vec<f64> = v.iter().copied().collect();
                    row.extend(u.iter().copied());
                    row.extend(fit.gamma.apply(v).iter().copied());
                    row
                })
                .collect();
            Ok(render_table(columns, rows, format))
        }
    }
}
