//! The `check`, `matrix`, `kernel` and `sweep` operations.

use std::collections::BTreeMap;
use std::io::Write;
use std::time::Instant;

use polydisk::analysis::{
    check_hermitian, check_j_symmetry, check_normal, norm_probe, null_space, polar_grid, CheckEntry,
};
use polydisk::operators::{matrix_section_with, MatrixSection};
use polydisk::par::map_collect;
use polydisk::symbols::classify;
use polydisk::{Complex64, Execution, OperatorSpec};

use crate::config::{CheckKind, ExperimentConfig};
use crate::defaults;
use crate::report::{
    write_matrix, CapsRecord, CheckRecord, ClassificationRecord, KernelImageRecord, KernelRecord,
    NormalityRecord, RunReport, RungRecord,
};
use crate::CliError;

/// Runs every check named in the config against its spec.
pub fn run_check(config: &ExperimentConfig, exec: Execution) -> Result<RunReport, CliError> {
    let started = Instant::now();
    let spec = config.spec()?;
    let block = config.block_caps()?;
    let inner = config.inner_caps()?;
    let tol = &config.tolerances;
    let mut report = RunReport {
        version: crate::report::REPORT_VERSION,
        toolkit: env!("CARGO_PKG_VERSION"),
        config: config.clone(),
        caps: CapsRecord {
            block: block.as_slice().to_vec(),
            inner: inner.as_slice().to_vec(),
            ladder: config.caps.ladder.clone(),
        },
        inexact_symbol: !spec.exact_symbol(),
        checks: Vec::new(),
        kernel: None,
        norms: Vec::new(),
        kernel_images: None,
        normality: None,
        classification: None,
        timings: BTreeMap::new(),
        passed: true,
    };
    let mut entries: Vec<CheckEntry> = Vec::new();
    for &kind in &config.checks {
        let t = Instant::now();
        match kind {
            CheckKind::JSymmetry => {
                entries.push(check_j_symmetry(&spec, block.clone(), tol.symmetry)?)
            }
            CheckKind::Hermitian => {
                entries.push(check_hermitian(&spec, block.clone(), tol.symmetry)?)
            }
            CheckKind::Normal => {
                let r = check_normal(&spec, block.clone(), inner.clone(), tol.normal)?;
                entries.push(r.entry.clone());
                report.normality =
                    Some(NormalityRecord::new(&r, block.as_slice(), inner.as_slice()));
            }
            CheckKind::Kernel => {
                let k = null_space(&spec, block.clone(), tol.rank)?;
                let miss = k.dim_computed.abs_diff(k.dim_derived_claim)
                    + k.dim_adjoint.abs_diff(k.dim_computed);
                entries.push(CheckEntry::new("kernel_dimension", miss as f64, 0.0));
                report.kernel = Some(KernelRecord::from(&k));
            }
            CheckKind::Norms => {
                if !spec.exact_symbol() {
                    return Err(CliError::Invalid(
                        "the norms check needs a closed-form family symbol".into(),
                    ));
                }
                let grid = polar_grid(spec.arity(), defaults::GRID_RADIUS, defaults::GRID_POINTS);
                let p = norm_probe(&spec, &config.caps.ladder, &grid, exec)?;
                let drop = p
                    .rungs
                    .windows(2)
                    .map(|w| ((w[0].1 - w[1].1) / w[0].1.max(f64::MIN_POSITIVE)).max(0.0))
                    .fold(0.0, f64::max);
                entries.push(CheckEntry::new("ladder_monotone", drop, 1e-12));
                entries.push(CheckEntry::new(
                    "ladder_variation",
                    p.last_rung_variation,
                    tol.ladder_variation,
                ));
                if let Some(bound) = p.kernel_bound {
                    let excess = ((p.max_kernel_image_norm - bound) / bound).max(0.0);
                    entries.push(CheckEntry::new("kernel_image_bound", excess, 0.0));
                }
                report.norms = p
                    .rungs
                    .iter()
                    .map(|&(cap, section_norm)| RungRecord { cap, section_norm })
                    .collect();
                report.kernel_images = Some(KernelImageRecord::from(&p));
            }
            CheckKind::Classify => {
                let u = spec.weight_series(block.clone())?;
                let v: Vec<_> = spec
                    .maps()
                    .iter()
                    .zip(block.as_slice())
                    .map(|(m, &cap)| m.expand(cap))
                    .collect();
                let c = classify(&u, &v, spec.orders(), defaults::CLASSIFY_TOL)?;
                let best = c.j_symmetric.residual.min(c.hermitian.residual);
                entries.push(CheckEntry::new("classify", best, defaults::CLASSIFY_TOL));
                let cand = if c.j_symmetric.residual <= c.hermitian.residual {
                    &c.j_symmetric
                } else {
                    &c.hermitian
                };
                report.classification = Some(ClassificationRecord {
                    form: c.form.as_str(),
                    a: cand.a.into(),
                    c: cand.c.iter().map(|&x| x.into()).collect(),
                    d: cand.d.iter().map(|&x| x.into()).collect(),
                    j_symmetric_residual: c.j_symmetric.residual,
                    hermitian_residual: c.hermitian.residual,
                });
            }
        }
        report
            .timings
            .insert(kind.as_str().to_string(), t.elapsed().as_secs_f64());
    }
    report.passed = entries.iter().all(|e| e.verdict.passed());
    report.checks = entries.iter().map(CheckRecord::from).collect();
    report
        .timings
        .insert("total".into(), started.elapsed().as_secs_f64());
    Ok(report)
}

/// Section at the config's row and column caps.
pub fn section(
    config: &ExperimentConfig,
    exec: Execution,
) -> Result<(OperatorSpec, MatrixSection), CliError> {
    let spec = config.spec()?;
    let m = matrix_section_with(&spec, config.row_caps()?, config.col_caps()?, exec)?;
    Ok((spec, m))
}

pub fn dump_matrix<W: Write>(
    config: &ExperimentConfig,
    exec: Execution,
    out: W,
) -> Result<(), CliError> {
    let (_, m) = section(config, exec)?;
    write_matrix(&m, out)
}

/// Only the kernel analysis.
pub fn run_kernel(config: &ExperimentConfig, exec: Execution) -> Result<RunReport, CliError> {
    let mut c = config.clone();
    c.checks = vec![CheckKind::Kernel];
    run_check(&c, exec)
}

#[derive(Clone, Debug)]
pub struct SweepRow {
    pub point: Vec<(String, Complex64)>,
    /// `None` for a valid point, the violated predicate otherwise.
    pub invalid: Option<String>,
    pub checks: Vec<CheckRecord>,
}

impl SweepRow {
    pub fn passed(&self) -> bool {
        self.invalid.is_none() && self.checks.iter().all(|c| c.verdict == "pass")
    }
}

/// Every grid point in lexicographic order (first axis slowest).
pub fn grid_points(config: &ExperimentConfig) -> Result<Vec<Vec<(String, Complex64)>>, CliError> {
    if config.sweep.is_empty() {
        return Err(CliError::Invalid(
            "sweep needs at least one grid axis".into(),
        ));
    }
    let mut points: Vec<Vec<(String, Complex64)>> = vec![Vec::new()];
    for axis in &config.sweep {
        if axis.values.is_empty() {
            return Err(CliError::Invalid(format!(
                "grid axis `{}` is empty",
                axis.param
            )));
        }
        points = points
            .into_iter()
            .flat_map(|p| {
                axis.values.iter().map(move |v| {
                    let mut q = p.clone();
                    q.push((axis.param.clone(), v.0));
                    q
                })
            })
            .collect();
    }
    Ok(points)
}

/// Runs the checks at every grid point; predicate failures mark the row
/// invalid instead of stopping the sweep.
pub fn run_sweep(config: &ExperimentConfig, exec: Execution) -> Result<Vec<SweepRow>, CliError> {
    let points = grid_points(config)?;
    for axis in &config.sweep {
        // reject unknown parameter names before doing any work
        config.with_parameter(&axis.param, axis.values[0].0)?;
    }
    // points run in parallel, so each point computes its sections sequentially
    let rows = map_collect(exec, &points, |point| {
        let mut c = config.clone();
        for (param, value) in point {
            c = c.with_parameter(param, *value)?;
        }
        let row = match run_check(&c, Execution::Sequential) {
            Ok(r) => SweepRow {
                point: point.clone(),
                invalid: None,
                checks: r.checks,
            },
            Err(e) => SweepRow {
                point: point.clone(),
                invalid: Some(e.to_string()),
                checks: Vec::new(),
            },
        };
        Ok(row)
    });
    rows.into_iter().collect()
}

/// One CSV row per grid point: parameter values, `status`, the diagnostic for
/// invalid rows, then residual and verdict for each check.
pub fn write_sweep<W: Write>(
    config: &ExperimentConfig,
    rows: &[SweepRow],
    out: W,
) -> Result<(), CliError> {
    let io = |e: csv::Error| CliError::Io(format!("sweep table: {e}"));
    let mut names: Vec<String> = Vec::new();
    for row in rows {
        for c in &row.checks {
            if !names.contains(&c.name) {
                names.push(c.name.clone());
            }
        }
    }
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<String> = config.sweep.iter().map(|a| a.param.clone()).collect();
    header.extend(["status".to_string(), "message".to_string()]);
    for n in &names {
        header.push(format!("{n}_residual"));
        header.push(format!("{n}_verdict"));
    }
    w.write_record(&header).map_err(io)?;
    for row in rows {
        let mut rec: Vec<String> = row.point.iter().map(|(_, v)| v.to_string()).collect();
        let status = match (&row.invalid, row.passed()) {
            (Some(_), _) => "invalid",
            (None, true) => "pass",
            (None, false) => "fail",
        };
        rec.push(status.into());
        rec.push(row.invalid.clone().unwrap_or_default());
        for n in &names {
            match row.checks.iter().find(|c| &c.name == n) {
                Some(c) => {
                    rec.push(format!("{:e}", c.residual));
                    rec.push(c.verdict.into());
                }
                None => rec.extend([String::new(), String::new()]),
            }
        }
        w.write_record(&rec).map_err(io)?;
    }
    w.flush()
        .map_err(|e| CliError::Io(format!("sweep table: {e}")))?;
    Ok(())
}
