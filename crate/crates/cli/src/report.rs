//! JSON run reports and delimited matrix dumps.

use std::collections::BTreeMap;
use std::io::Write;

use polydisk::analysis::{CheckEntry, KernelReport, NormProbe, NormalityReport};
use polydisk::operators::MatrixSection;
use polydisk::Complex64;
use serde::Serialize;

use crate::config::{ExperimentConfig, Scalar};
use crate::CliError;

pub const REPORT_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub verdict: &'static str,
}

impl From<&CheckEntry> for CheckRecord {
    fn from(e: &CheckEntry) -> Self {
        CheckRecord {
            name: e.name.clone(),
            residual: e.residual,
            tolerance: e.tolerance,
            verdict: e.verdict.as_str(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BasisVector {
    /// Nonzero coordinates keyed by multi-index.
    pub coefficients: BTreeMap<String, Scalar>,
}

#[derive(Clone, Debug, Serialize)]
pub struct KernelRecord {
    pub caps: Vec<usize>,
    pub rank_tol: f64,
    pub dim_computed: usize,
    pub dim_adjoint: usize,
    pub dim_paper_claim: usize,
    pub dim_derived_claim: usize,
    pub paper_discrepancy: bool,
    pub derived_span_residual: f64,
    pub paper_containment_residual: f64,
    pub smallest_kept_singular_value: Option<f64>,
    pub basis: Vec<BasisVector>,
}

impl From<&KernelReport> for KernelRecord {
    fn from(k: &KernelReport) -> Self {
        let labels: Vec<String> = k.caps.indices().map(|m| m.to_string()).collect();
        let basis = k
            .basis
            .iter()
            .map(|b| BasisVector {
                coefficients: b
                    .iter()
                    .zip(&labels)
                    .filter(|(z, _)| z.norm() > 1e-14)
                    .map(|(z, l)| (l.clone(), Scalar(*z)))
                    .collect(),
            })
            .collect();
        let kept = k.singular_values.len().saturating_sub(k.basis.len());
        KernelRecord {
            caps: k.caps.as_slice().to_vec(),
            rank_tol: k.rank_tol,
            dim_computed: k.dim_computed,
            dim_adjoint: k.dim_adjoint,
            dim_paper_claim: k.dim_paper_claim,
            dim_derived_claim: k.dim_derived_claim,
            paper_discrepancy: k.paper_discrepancy,
            derived_span_residual: k.derived_span_residual,
            paper_containment_residual: k.paper_containment_residual,
            smallest_kept_singular_value: kept.checked_sub(1).map(|i| k.singular_values[i]),
            basis,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RungRecord {
    pub cap: usize,
    pub section_norm: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct KernelImageRecord {
    pub bound: Option<f64>,
    pub samples: usize,
    pub max_norm: f64,
    pub violations: usize,
}

impl From<&NormProbe> for KernelImageRecord {
    fn from(p: &NormProbe) -> Self {
        KernelImageRecord {
            bound: p.kernel_bound,
            samples: p.samples,
            max_norm: p.max_kernel_image_norm,
            violations: p.violations,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BasisNormRecord {
    pub index: String,
    pub image_norm: f64,
    pub adjoint_image_norm: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closed_form: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct NormalityRecord {
    pub block: Vec<usize>,
    pub inner: Vec<usize>,
    pub commutator: f64,
    pub tail_estimate: f64,
    pub off_diagonal: f64,
    pub closed_form_deviation: Option<f64>,
    pub basis: Vec<BasisNormRecord>,
}

impl NormalityRecord {
    pub fn new(r: &NormalityReport, block: &[usize], inner: &[usize]) -> Self {
        NormalityRecord {
            block: block.to_vec(),
            inner: inner.to_vec(),
            commutator: r.commutator,
            tail_estimate: r.tail_estimate,
            off_diagonal: r.off_diagonal,
            closed_form_deviation: r.closed_form_deviation,
            basis: r
                .basis
                .iter()
                .map(|b| BasisNormRecord {
                    index: b.index.to_string(),
                    image_norm: b.image_norm,
                    adjoint_image_norm: b.adjoint_image_norm,
                    closed_form: b.closed_form,
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassificationRecord {
    pub form: &'static str,
    pub a: Scalar,
    pub c: Vec<Scalar>,
    pub d: Vec<Scalar>,
    pub j_symmetric_residual: f64,
    pub hermitian_residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CapsRecord {
    pub block: Vec<usize>,
    pub inner: Vec<usize>,
    pub ladder: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub version: u32,
    pub toolkit: &'static str,
    pub config: ExperimentConfig,
    pub caps: CapsRecord,
    /// Set when the weight or a coordinate map is a coefficient table, so
    /// entries inherit that table's truncation.
    pub inexact_symbol: bool,
    pub checks: Vec<CheckRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kernel: Option<KernelRecord>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub norms: Vec<RungRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kernel_images: Option<KernelImageRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub normality: Option<NormalityRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classification: Option<ClassificationRecord>,
    /// Wall-clock seconds per check and in total.
    pub timings: BTreeMap<String, f64>,
    pub passed: bool,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

/// `re±imi` with 17 significant digits in each part.
pub fn format_cell(z: Complex64) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{:.16e}{}{:.16e}i", z.re, sign, z.im.abs())
}

/// Inverse of [`format_cell`].
pub fn parse_cell(s: &str) -> Option<Complex64> {
    let body = s.strip_suffix('i')?;
    let split = body
        .char_indices()
        .skip(1)
        .find(|&(i, ch)| (ch == '+' || ch == '-') && !body[..i].ends_with('e'))
        .map(|(i, _)| i)?;
    let re: f64 = body[..split].parse().ok()?;
    let im: f64 = body[split..].parse().ok()?;
    Some(Complex64::new(re, im))
}

/// Writes the section as CSV: the corner cell is `j\m`, the header row holds
/// column multi-indices, the first column row multi-indices.
pub fn write_matrix<W: Write>(section: &MatrixSection, out: W) -> Result<(), CliError> {
    let io = |e: csv::Error| CliError::Io(format!("matrix dump: {e}"));
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["j\\m".to_string()];
    header.extend(section.col_indices().map(|m| m.to_string()));
    w.write_record(&header).map_err(io)?;
    for (r, j) in section.row_indices().enumerate() {
        let mut row = vec![j.to_string()];
        row.extend((0..section.ncols()).map(|c| format_cell(section.entries()[(r, c)])));
        w.write_record(&row).map_err(io)?;
    }
    w.flush()
        .map_err(|e| CliError::Io(format!("matrix dump: {e}")))?;
    Ok(())
}
