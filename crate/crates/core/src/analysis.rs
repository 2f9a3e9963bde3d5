//! Structural verdicts on finite sections, each with a residual and the
//! tolerance it was judged against.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operators::{
    adjoint_matrix, kernel_image_norm, matrix_section, matrix_section_with, MatrixSection,
};
use crate::par::{map_collect, Execution};
use crate::series::{for_each_in_box, rising_factor, Caps, MultiIndex, Point};
use crate::symbols::{OperatorSpec, Symbol};

/// Default relative tolerance for the symmetry and self-adjointness checks.
pub const SYMMETRY_TOL: f64 = 1e-10;
/// Default absolute tolerance for the normality commutator after the tail
/// estimate is subtracted.
pub const NORMAL_TOL: f64 = 1e-6;
/// Singular values below `RANK_TOL * sigma_max` count as zero.
pub const RANK_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn passed(self) -> bool {
        self == Verdict::Pass
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
        }
    }
}

/// One named check: passes iff `residual <= tolerance`.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckEntry {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub verdict: Verdict,
}

impl CheckEntry {
    pub fn new(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        CheckEntry {
            name: name.into(),
            residual,
            tolerance,
            verdict: Verdict::from_bool(residual <= tolerance),
        }
    }
}

fn require_square(m: &MatrixSection) -> Result<()> {
    if m.row_caps() != m.col_caps() {
        return Err(Error::InvalidParameter(format!(
            "square section required, got rows {:?} and columns {:?}",
            m.row_caps().as_slice(),
            m.col_caps().as_slice()
        )));
    }
    Ok(())
}

/// `max |M[j][m] - M[m][j]|`.
pub fn symmetry_residual(m: &MatrixSection) -> Result<f64> {
    require_square(m)?;
    let e = m.entries();
    let mut worst = 0.0f64;
    for c in 0..e.ncols() {
        for r in 0..c {
            worst = worst.max((e[(r, c)] - e[(c, r)]).norm());
        }
    }
    Ok(worst)
}

/// `max |M[j][m] - conj(M[m][j])|`, diagonal included.
pub fn hermitian_residual(m: &MatrixSection) -> Result<f64> {
    require_square(m)?;
    let e = m.entries();
    let mut worst = 0.0f64;
    for c in 0..e.ncols() {
        for r in 0..=c {
            worst = worst.max((e[(r, c)] - e[(c, r)].conj()).norm());
        }
    }
    Ok(worst)
}

/// Complex symmetry with respect to `J` on the square section at `caps`:
/// passes iff the transpose residual is at most `tol * max |entry|`.
pub fn check_j_symmetry(
    spec: &OperatorSpec,
    caps: impl Into<Caps>,
    tol: f64,
) -> Result<CheckEntry> {
    let caps = caps.into();
    let m = matrix_section(spec, caps.clone(), caps)?;
    Ok(CheckEntry::new(
        "j_symmetry",
        symmetry_residual(&m)?,
        tol * m.max_abs_entry(),
    ))
}

/// Self-adjointness on the square section at `caps`.
pub fn check_hermitian(spec: &OperatorSpec, caps: impl Into<Caps>, tol: f64) -> Result<CheckEntry> {
    let caps = caps.into();
    let m = matrix_section(spec, caps.clone(), caps)?;
    Ok(CheckEntry::new(
        "hermitian",
        hermitian_residual(&m)?,
        tol * m.max_abs_entry(),
    ))
}

/// `||W e_m||` and `||W* e_m||` from tall sections, plus the closed-form
/// value when the symbols are `u = a z^k`, `v_i = d_i z_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct BasisNorm {
    pub index: MultiIndex,
    pub image_norm: f64,
    pub adjoint_image_norm: f64,
    pub closed_form: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NormalityReport {
    pub entry: CheckEntry,
    /// Raw `max |S1 - S2|` on the block.
    pub commutator: f64,
    /// Change of both Gram blocks between the inner caps `(D + K) / 2` and
    /// `K`, used as the truncation estimate.
    pub tail_estimate: f64,
    pub basis: Vec<BasisNorm>,
    /// Largest deviation of the computed basis norms from the closed form.
    pub closed_form_deviation: Option<f64>,
    /// Largest off-diagonal magnitude of the square block section.
    pub off_diagonal: f64,
}

/// Parameters `(a, d)` when the spec is `u = a prod z_i^{k_i}`, `v_i = d_i z_i`.
fn diagonal_parameters(spec: &OperatorSpec) -> Option<(Complex64, Vec<Complex64>)> {
    let Symbol::Rational(u) = spec.weight() else {
        return None;
    };
    if u.zero_orders() != spec.orders().components() || u.poles().iter().any(|p| p.norm() != 0.0) {
        return None;
    }
    let mut d = Vec::with_capacity(spec.arity());
    for map in spec.maps() {
        let (c, di, p) = map.rational_parameters()?;
        if c.norm() != 0.0 || p.norm() != 0.0 {
            return None;
        }
        d.push(di);
    }
    Some((u.scale(), d))
}

/// `|a prod_i m_i!/(m_i - k_i)! d_i^{m_i - k_i}|`, zero when some `m_i < k_i`.
pub fn diagonal_image_norm(a: Complex64, d: &[Complex64], k: &MultiIndex, m: &MultiIndex) -> f64 {
    let mut acc = a.norm();
    for i in 0..k.arity() {
        if m[i] < k[i] {
            return 0.0;
        }
        acc *= rising_factor(m[i] - k[i], k[i]) * d[i].norm().powi((m[i] - k[i]) as i32);
    }
    acc
}

fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().fold(0.0, |a, x| a.max(x.norm()))
}

/// Normality on the block `D` using tall sections with inner caps `K >= D`:
/// `S1 = T^H T` from the `K x D` section and `S2 = T T^H` from the `D x K`
/// section. Passes iff `max |S1 - S2| - tail_estimate <= tol`.
pub fn check_normal(
    spec: &OperatorSpec,
    block: impl Into<Caps>,
    inner: impl Into<Caps>,
    tol: f64,
) -> Result<NormalityReport> {
    let block = block.into();
    let inner = inner.into();
    if block.arity() != inner.arity()
        || block
            .as_slice()
            .iter()
            .zip(inner.as_slice())
            .any(|(d, k)| k < d)
    {
        return Err(Error::InnerCapsTooSmall {
            block: block.as_slice().to_vec(),
            inner: inner.as_slice().to_vec(),
        });
    }
    let mid = Caps::new(
        block
            .as_slice()
            .iter()
            .zip(inner.as_slice())
            .map(|(d, k)| (d + k) / 2)
            .collect(),
    );
    let tall = matrix_section(spec, inner.clone(), block.clone())?;
    let wide = matrix_section(spec, block.clone(), inner.clone())?;
    let gram_tall = |t: &MatrixSection| t.entries().adjoint() * t.entries();
    let gram_wide = |w: &MatrixSection| w.entries() * w.entries().adjoint();
    let s1 = gram_tall(&tall);
    let s2 = gram_wide(&wide);
    let s1_mid = gram_tall(&tall.sub_section(&mid, &block)?);
    let s2_mid = gram_wide(&wide.sub_section(&block, &mid)?);
    let commutator = max_abs(&(&s1 - &s2));
    let tail_estimate = max_abs(&(&s1 - &s1_mid)) + max_abs(&(&s2 - &s2_mid));

    let closed = diagonal_parameters(spec);
    let k = spec.orders();
    let mut deviation: Option<f64> = None;
    let basis: Vec<BasisNorm> = block
        .indices()
        .enumerate()
        .map(|(o, m)| {
            let image_norm = tall.entries().column(o).norm();
            let adjoint_image_norm = wide.entries().row(o).norm();
            let closed_form = closed
                .as_ref()
                .map(|(a, d)| diagonal_image_norm(*a, d, k, &m));
            if let Some(c) = closed_form {
                let dev = (image_norm - c).abs().max((adjoint_image_norm - c).abs());
                deviation = Some(deviation.map_or(dev, |x| x.max(dev)));
            }
            BasisNorm {
                index: m,
                image_norm,
                adjoint_image_norm,
                closed_form,
            }
        })
        .collect();

    let square = tall.sub_section(&block, &block)?;
    let e = square.entries();
    let mut off_diagonal = 0.0f64;
    for c in 0..e.ncols() {
        for r in 0..e.nrows() {
            if r != c {
                off_diagonal = off_diagonal.max(e[(r, c)].norm());
            }
        }
    }

    Ok(NormalityReport {
        entry: CheckEntry::new("normal", (commutator - tail_estimate).max(0.0), tol),
        commutator,
        tail_estimate,
        basis,
        closed_form_deviation: deviation,
        off_diagonal,
    })
}

/// Polynomial subspaces compared against computed kernels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpaceMode {
    /// All polynomials of total degree `< m`.
    TotalDegreeBelow(usize),
    /// Monomials `z^a` within caps with some `a_i < k_i`.
    MonomialKill(MultiIndex),
}

/// A coordinate subspace spanned by monomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolynomialSpace {
    pub arity: usize,
    pub mode: SpaceMode,
    pub caps: Caps,
}

impl PolynomialSpace {
    /// Spanning monomials in lexicographic order.
    pub fn monomials(&self) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        match &self.mode {
            SpaceMode::TotalDegreeBelow(m) => {
                if *m == 0 {
                    return out;
                }
                for_each_in_box(&vec![m - 1; self.arity], |a| {
                    if a.iter().sum::<usize>() < *m {
                        out.push(MultiIndex::from(a));
                    }
                });
            }
            SpaceMode::MonomialKill(k) => {
                for a in self.caps.indices() {
                    if a.components()
                        .iter()
                        .zip(k.components())
                        .any(|(x, ki)| x < ki)
                    {
                        out.push(a);
                    }
                }
            }
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.monomials().len()
    }
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// `(C(m - 1 + n, n), prod (D_i + 1) - prod max(D_i - k_i + 1, 0))` with
/// `m = sum k_i`: the dimension of polynomials of degree `< m` and the number
/// of monomials within caps annihilated by `d^k`.
pub fn expected_kernel_dims(n: usize, k: &MultiIndex, caps: &Caps) -> (usize, usize) {
    let m = k.degree();
    let low_degree = if m == 0 { 0 } else { binomial(m - 1 + n, n) };
    let all: usize = caps.as_slice().iter().map(|d| d + 1).product();
    let survivors: usize = caps
        .as_slice()
        .iter()
        .zip(k.components())
        .map(|(d, ki)| (d + 1).saturating_sub(*ki))
        .product();
    (low_degree, all - survivors)
}

/// Orthonormal basis of the numerical null space of `a` (singular values
/// `<= rank_tol * sigma_max`) and all singular values.
pub fn numerical_null_space(
    a: &DMatrix<Complex64>,
    rank_tol: f64,
) -> (Vec<DVector<Complex64>>, Vec<f64>) {
    let (rows, cols) = a.shape();
    if cols == 0 {
        return (Vec::new(), Vec::new());
    }
    // zero rows keep the null space and make the SVD return all right vectors
    let padded = if rows < cols {
        let mut p = DMatrix::zeros(cols, cols);
        p.view_mut((0, 0), (rows, cols)).copy_from(a);
        p
    } else {
        a.clone()
    };
    let svd = padded.svd(false, true);
    let sigma: Vec<f64> = svd.singular_values.iter().copied().collect();
    let v_t = svd.v_t.expect("right singular vectors requested");
    let sigma_max = sigma.iter().fold(0.0f64, |m, s| m.max(*s));
    let basis = sigma
        .iter()
        .enumerate()
        .filter(|(_, s)| **s <= rank_tol * sigma_max)
        .map(|(i, _)| v_t.row(i).adjoint().into_owned())
        .collect();
    let mut sorted = sigma;
    sorted.sort_by(|x, y| y.total_cmp(x));
    (basis, sorted)
}

/// Largest norm of a basis vector's component outside the span of the given
/// monomials (coordinates are offsets in `caps`).
pub fn span_residual(basis: &[DVector<Complex64>], caps: &Caps, space: &[MultiIndex]) -> f64 {
    let mut inside = vec![false; caps.len()];
    for a in space {
        if caps.contains(a.components()) {
            inside[caps.offset(a.components())] = true;
        }
    }
    basis
        .iter()
        .map(|b| {
            b.iter()
                .zip(&inside)
                .filter(|(_, ins)| !**ins)
                .map(|(x, _)| x.norm_sqr())
                .sum::<f64>()
                .sqrt()
        })
        .fold(0.0, f64::max)
}

/// Largest distance of a monomial `z^a` from the span of an orthonormal basis.
pub fn containment_residual(
    basis: &[DVector<Complex64>],
    caps: &Caps,
    space: &[MultiIndex],
) -> f64 {
    space
        .iter()
        .filter(|a| caps.contains(a.components()))
        .map(|a| {
            let o = caps.offset(a.components());
            let captured: f64 = basis.iter().map(|b| b[o].norm_sqr()).sum();
            (1.0 - captured).max(0.0).sqrt()
        })
        .fold(0.0, f64::max)
}

#[derive(Clone, Debug, PartialEq)]
pub struct KernelReport {
    pub caps: Caps,
    pub row_caps: Caps,
    pub rank_tol: f64,
    pub dim_computed: usize,
    pub dim_adjoint: usize,
    /// Dimension of polynomials of total degree `< m`.
    pub dim_paper_claim: usize,
    /// Number of monomials within caps annihilated by `d^k`.
    pub dim_derived_claim: usize,
    /// Orthonormal kernel basis; coordinates follow the lexicographic column
    /// enumeration of `caps`.
    pub basis: Vec<DVector<Complex64>>,
    pub singular_values: Vec<f64>,
    /// Basis leakage outside the monomial-kill span.
    pub derived_span_residual: f64,
    /// Distance of the degree `< m` monomials from the computed kernel.
    pub paper_containment_residual: f64,
    /// `true` when the computed dimension differs from the degree `< m` count.
    pub paper_discrepancy: bool,
}

/// Numerical kernel of the section with columns `caps` and rows `row_caps`
/// (`row_caps >= caps`), plus the kernel of its adjoint.
pub fn null_space_with(
    spec: &OperatorSpec,
    caps: impl Into<Caps>,
    row_caps: impl Into<Caps>,
    rank_tol: f64,
) -> Result<KernelReport> {
    let caps = caps.into();
    let row_caps = row_caps.into();
    if let Some(&coordinate) = spec.degenerate_coordinates().first() {
        return Err(Error::DegenerateMap { coordinate });
    }
    if row_caps.arity() != caps.arity()
        || caps
            .as_slice()
            .iter()
            .zip(row_caps.as_slice())
            .any(|(d, r)| r < d)
    {
        return Err(Error::InnerCapsTooSmall {
            block: caps.as_slice().to_vec(),
            inner: row_caps.as_slice().to_vec(),
        });
    }
    let section = matrix_section(spec, row_caps.clone(), caps.clone())?;
    let (basis, singular_values) = numerical_null_space(section.entries(), rank_tol);
    let (adjoint_basis, _) = numerical_null_space(adjoint_matrix(&section).entries(), rank_tol);
    let (dim_paper_claim, dim_derived_claim) =
        expected_kernel_dims(spec.arity(), spec.orders(), &caps);

    let killed = PolynomialSpace {
        arity: spec.arity(),
        mode: SpaceMode::MonomialKill(spec.orders().clone()),
        caps: caps.clone(),
    }
    .monomials();
    let low_degree = PolynomialSpace {
        arity: spec.arity(),
        mode: SpaceMode::TotalDegreeBelow(spec.total_order()),
        caps: caps.clone(),
    }
    .monomials();

    Ok(KernelReport {
        derived_span_residual: span_residual(&basis, &caps, &killed),
        paper_containment_residual: containment_residual(&basis, &caps, &low_degree),
        paper_discrepancy: basis.len() != dim_paper_claim,
        dim_computed: basis.len(),
        dim_adjoint: adjoint_basis.len(),
        dim_paper_claim,
        dim_derived_claim,
        basis,
        singular_values,
        caps,
        row_caps,
        rank_tol,
    })
}

/// [`null_space_with`] on the square section.
pub fn null_space(
    spec: &OperatorSpec,
    caps: impl Into<Caps>,
    rank_tol: f64,
) -> Result<KernelReport> {
    let caps = caps.into();
    null_space_with(spec, caps.clone(), caps, rank_tol)
}

/// Largest singular value.
pub fn spectral_norm(m: &DMatrix<Complex64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.singular_values().iter().fold(0.0, |a, s| a.max(*s))
}

/// Per-axis sample points `{0} ∪ {r e^{2 pi i l / (count - 1)}}`, combined as
/// a Cartesian product in lexicographic order.
pub fn polar_grid(arity: usize, radius: f64, per_axis: usize) -> Vec<Point> {
    let ring = per_axis.saturating_sub(1).max(1);
    let axis: Vec<Complex64> =
        std::iter::once(Complex64::new(0.0, 0.0))
            .chain((0..ring).map(|l| {
                Complex64::from_polar(radius, std::f64::consts::TAU * l as f64 / ring as f64)
            }))
            .take(per_axis)
            .collect();
    let caps = Caps::uniform(arity, axis.len() - 1);
    caps.indices()
        .map(|idx| Point::new(idx.components().iter().map(|&i| axis[i]).collect()))
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct NormProbe {
    /// `(cap, largest singular value of the square section at that cap)`.
    pub rungs: Vec<(usize, f64)>,
    pub nondecreasing: bool,
    /// Relative change over the last two rungs.
    pub last_rung_variation: f64,
    /// `|a| prod k_i! / (1 - 2|c_i| - |d_i| - |c_i|^2)^{k_i+1}` when every
    /// denominator is positive.
    pub kernel_bound: Option<f64>,
    pub samples: usize,
    /// Largest `||W K_w||` over the samples.
    pub max_kernel_image_norm: f64,
    /// Samples whose `||W K_w||` exceeds the bound.
    pub violations: usize,
}

/// `|a| prod k_i! / (1 - 2|c_i| - |d_i| - |c_i|^2)^{k_i+1}` for closed-form
/// specs, `None` if some denominator is not positive.
pub fn kernel_image_bound(spec: &OperatorSpec) -> Result<Option<f64>> {
    let Symbol::Rational(u) = spec.weight() else {
        return Err(Error::NotClosedForm);
    };
    let mut bound = u.scale().norm();
    for (i, map) in spec.maps().iter().enumerate() {
        let (c, d, _) = map.rational_parameters().ok_or(Error::NotClosedForm)?;
        let c = c.norm();
        let den = 1.0 - 2.0 * c - d.norm() - c * c;
        if den.is_nan() || den <= 0.0 {
            return Ok(None);
        }
        let k = spec.orders()[i];
        bound *= rising_factor(0, k) / den.powi(k as i32 + 1);
    }
    Ok(Some(bound))
}

/// Section norms along a ladder of uniform caps and the kernel-image bound
/// over the sample points.
pub fn norm_probe(
    spec: &OperatorSpec,
    ladder: &[usize],
    samples: &[Point],
    exec: Execution,
) -> Result<NormProbe> {
    if ladder.is_empty() {
        return Err(Error::Empty("caps ladder"));
    }
    let n = spec.arity();
    let top = *ladder.iter().max().expect("non-empty ladder");
    let full = matrix_section_with(spec, Caps::uniform(n, top), Caps::uniform(n, top), exec)?;
    let rungs = ladder
        .iter()
        .map(|&cap| {
            let caps = Caps::uniform(n, cap);
            let block = full.sub_section(&caps, &caps)?;
            Ok((cap, spectral_norm(block.entries())))
        })
        .collect::<Result<Vec<_>>>()?;
    // nested compressions: allow rounding-level decreases only
    let nondecreasing = rungs.windows(2).all(|w| w[1].1 >= w[0].1 * (1.0 - 1e-12));
    let last_rung_variation = match rungs.len() {
        0 | 1 => 0.0,
        len => {
            let (a, b) = (rungs[len - 2].1, rungs[len - 1].1);
            if b == 0.0 {
                0.0
            } else {
                (b - a).abs() / b
            }
        }
    };
    let kernel_bound = kernel_image_bound(spec)?;
    let norms = map_collect(exec, samples, |w| kernel_image_norm(spec, w));
    let mut max_norm = 0.0f64;
    let mut violations = 0;
    for r in norms {
        let v = r?;
        max_norm = max_norm.max(v);
        if let Some(b) = kernel_bound {
            if v > b {
                violations += 1;
            }
        }
    }
    Ok(NormProbe {
        rungs,
        nondecreasing,
        last_rung_variation,
        kernel_bound,
        samples: samples.len(),
        max_kernel_image_norm: max_norm,
        violations,
    })
}

/// Aggregated verdicts for one spec.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct StructureReport {
    pub checks: Vec<CheckEntry>,
    pub kernel: Option<KernelReport>,
    pub norms: Option<NormProbe>,
    /// Set when some symbol was given as a coefficient table.
    pub inexact_symbol: bool,
}

impl StructureReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.verdict.passed())
    }
}
