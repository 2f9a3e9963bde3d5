//! Application of `W f = u (d^k f)(v)`, finite matrix sections in the
//! monomial basis, the conjugations `J` and `A_{u,v}`, and the closed-form
//! action of the adjoint on reproducing kernels.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hardy::derivative_kernel;
use crate::par::{map_range, Execution};
use crate::series::{
    rising_factor, univariate_powers, univariate_product, Caps, MultiIndex, Point, TruncatedSeries,
    MAX_TABLE_LEN,
};
use crate::symbols::{negative_binomial, CoordinateMap, OperatorSpec, Symbol};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn check_caps(spec: &OperatorSpec, caps: &Caps) -> Result<()> {
    if caps.arity() != spec.arity() {
        return Err(Error::ArityMismatch {
            expected: spec.arity(),
            found: caps.arity(),
        });
    }
    Ok(())
}

/// `W f` truncated at `out_caps`, computed as derivative, then diagonal
/// composition, then multiplication by the weight.
///
/// Composition and multiplication never move high-order coefficients into
/// lower orders, so the weight and the coordinate maps are only needed up to
/// `out_caps`. The result is exact up to `out_caps` for polynomial `f`.
pub fn apply(
    spec: &OperatorSpec,
    f: &TruncatedSeries,
    out_caps: impl Into<Caps>,
) -> Result<TruncatedSeries> {
    let out_caps = out_caps.into();
    check_caps(spec, &out_caps)?;
    if f.arity() != spec.arity() {
        return Err(Error::ArityMismatch {
            expected: spec.arity(),
            found: f.arity(),
        });
    }
    let derived = f.partial_derivative(spec.orders())?;
    let v: Vec<TruncatedSeries> = spec
        .maps()
        .iter()
        .zip(out_caps.as_slice())
        .map(|(m, &cap)| m.expand(cap))
        .collect();
    let composed = derived.compose_diagonal(&v, out_caps.clone())?;
    let u = spec.weight_series(out_caps.clone())?;
    TruncatedSeries::multiply(&u, &composed, out_caps)
}

/// Dense block `M[j][m] = <W z^m, z^j>` with `j <= row_caps`, `m <= col_caps`,
/// rows and columns enumerated lexicographically.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixSection {
    row_caps: Caps,
    col_caps: Caps,
    entries: DMatrix<Complex64>,
}

impl MatrixSection {
    pub fn new(row_caps: Caps, col_caps: Caps, entries: DMatrix<Complex64>) -> Result<Self> {
        if entries.nrows() != row_caps.len() || entries.ncols() != col_caps.len() {
            return Err(Error::InvalidParameter(format!(
                "matrix is {}x{}, caps describe {}x{}",
                entries.nrows(),
                entries.ncols(),
                row_caps.len(),
                col_caps.len()
            )));
        }
        Ok(MatrixSection {
            row_caps,
            col_caps,
            entries,
        })
    }

    pub fn row_caps(&self) -> &Caps {
        &self.row_caps
    }

    pub fn col_caps(&self) -> &Caps {
        &self.col_caps
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn nrows(&self) -> usize {
        self.entries.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.entries.ncols()
    }

    pub fn row_indices(&self) -> impl Iterator<Item = MultiIndex> + '_ {
        self.row_caps.indices()
    }

    pub fn col_indices(&self) -> impl Iterator<Item = MultiIndex> + '_ {
        self.col_caps.indices()
    }

    /// `<W z^m, z^j>`, zero outside the block.
    pub fn entry(&self, j: &MultiIndex, m: &MultiIndex) -> Complex64 {
        if self.row_caps.contains(j.components()) && self.col_caps.contains(m.components()) {
            self.entries[(
                self.row_caps.offset(j.components()),
                self.col_caps.offset(m.components()),
            )]
        } else {
            ZERO
        }
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.entries.iter().fold(0.0, |a, c| a.max(c.norm()))
    }

    /// Column `m` as a series at the row caps.
    pub fn column(&self, m: &MultiIndex) -> Result<TruncatedSeries> {
        let o = self.col_caps.offset(m.components());
        TruncatedSeries::from_coeffs(
            self.row_caps.clone(),
            self.entries.column(o).iter().copied().collect(),
        )
    }

    /// Leading sub-block with smaller caps (the section of the same operator
    /// at those caps).
    pub fn sub_section(&self, row_caps: &Caps, col_caps: &Caps) -> Result<MatrixSection> {
        for (small, big) in [(row_caps, &self.row_caps), (col_caps, &self.col_caps)] {
            if small.arity() != big.arity()
                || small
                    .as_slice()
                    .iter()
                    .zip(big.as_slice())
                    .any(|(a, b)| a > b)
            {
                return Err(Error::InvalidParameter(format!(
                    "caps {:?} exceed section caps {:?}",
                    small.as_slice(),
                    big.as_slice()
                )));
            }
        }
        let rows: Vec<usize> = row_caps
            .indices()
            .map(|j| self.row_caps.offset(j.components()))
            .collect();
        let cols: Vec<usize> = col_caps
            .indices()
            .map(|m| self.col_caps.offset(m.components()))
            .collect();
        let entries = DMatrix::from_fn(rows.len(), cols.len(), |r, c| {
            self.entries[(rows[r], cols[c])]
        });
        MatrixSection::new(row_caps.clone(), col_caps.clone(), entries)
    }
}

/// Column `m` of the section: `prod_i m_i!/(m_i-k_i)! v_i^{m_i-k_i}` is a
/// rank-one tensor, so the product with `u` runs as one convolution per axis.
fn section_column(
    u: &TruncatedSeries,
    powers: &[Vec<Vec<Complex64>>],
    k: &MultiIndex,
    m: &MultiIndex,
) -> Result<Vec<Complex64>> {
    let row_caps = u.caps().clone();
    if m.components()
        .iter()
        .zip(k.components())
        .any(|(mi, ki)| mi < ki)
    {
        return Ok(vec![ZERO; row_caps.len()]);
    }
    let mut col = u.clone();
    for (axis, (&mi, &ki)) in m.components().iter().zip(k.components()).enumerate() {
        let factor = rising_factor(mi - ki, ki);
        let g: Vec<Complex64> = powers[axis][mi - ki].iter().map(|x| x * factor).collect();
        col = col.convolve_axis(axis, &g, row_caps.as_slice()[axis])?;
    }
    Ok(col.coeffs().to_vec())
}

/// Finite section of `W`; see [`matrix_section_with`].
pub fn matrix_section(
    spec: &OperatorSpec,
    row_caps: impl Into<Caps>,
    col_caps: impl Into<Caps>,
) -> Result<MatrixSection> {
    matrix_section_with(spec, row_caps, col_caps, Execution::default())
}

/// Finite section of `W` with columns evaluated independently (in parallel
/// when requested) and assembled in lexicographic column order.
///
/// Entries are exact coefficients of the infinite matrix whenever the weight
/// and coordinate maps are closed forms, or tables with caps at least
/// `row_caps`.
pub fn matrix_section_with(
    spec: &OperatorSpec,
    row_caps: impl Into<Caps>,
    col_caps: impl Into<Caps>,
    exec: Execution,
) -> Result<MatrixSection> {
    let row_caps = row_caps.into();
    let col_caps = col_caps.into();
    check_caps(spec, &row_caps)?;
    check_caps(spec, &col_caps)?;
    let total = row_caps.len().saturating_mul(col_caps.len());
    if total > MAX_TABLE_LEN * 4 {
        return Err(Error::TooLarge(total));
    }
    let u = spec.weight_series(row_caps.clone())?;
    let k = spec.orders();
    let powers: Vec<Vec<Vec<Complex64>>> = spec
        .maps()
        .iter()
        .enumerate()
        .map(|(i, map)| {
            let r = row_caps.as_slice()[i];
            let top = col_caps.as_slice()[i].saturating_sub(k[i]);
            univariate_powers(&map.coefficients(r), top, r)
        })
        .collect();
    let columns = map_range(exec, col_caps.len(), |o| {
        section_column(&u, &powers, k, &col_caps.unravel(o))
    });
    let nrows = row_caps.len();
    let mut data = Vec::with_capacity(nrows * col_caps.len());
    for col in columns {
        data.extend(col?);
    }
    let entries = DMatrix::from_vec(nrows, col_caps.len(), data);
    MatrixSection::new(row_caps, col_caps, entries)
}

/// Conjugate transpose: the section of `W*` with the index sets swapped.
pub fn adjoint_matrix(section: &MatrixSection) -> MatrixSection {
    MatrixSection {
        row_caps: section.col_caps.clone(),
        col_caps: section.row_caps.clone(),
        entries: section.entries.adjoint(),
    }
}

/// The standard conjugation `J f(z) = conj(f(conj z))`.
pub fn conjugate_j(f: &TruncatedSeries) -> TruncatedSeries {
    f.conj()
}

/// The weighted composition conjugation `A_{u,v} f = u conj(f(conj v))`,
/// i.e. `W_{u,v} J f`. Antilinear in `f`.
pub fn weighted_conjugation(
    u: &Symbol,
    v: &[CoordinateMap],
    f: &TruncatedSeries,
    out_caps: impl Into<Caps>,
) -> Result<TruncatedSeries> {
    let spec = OperatorSpec::new(u.clone(), v.to_vec(), MultiIndex::zeros(u.arity()))?;
    apply(&spec, &conjugate_j(f), out_caps)
}

/// `W* K_w = conj(u(w)) K_{v(w)}^[k]`, with `u(w)` and `v(w)` taken from the
/// closed forms when available.
pub fn adjoint_kernel_image(
    spec: &OperatorSpec,
    w: &Point,
    caps: impl Into<Caps>,
) -> Result<TruncatedSeries> {
    let caps = caps.into();
    check_caps(spec, &caps)?;
    if w.arity() != spec.arity() {
        return Err(Error::ArityMismatch {
            expected: spec.arity(),
            found: w.arity(),
        });
    }
    w.check_inside()?;
    let uw = spec.weight().evaluate(w)?;
    let vw = spec
        .maps()
        .iter()
        .zip(w.coordinates())
        .map(|(m, &z)| m.evaluate(z))
        .collect::<Result<Vec<_>>>()?;
    let kernel = derivative_kernel(&Point::new(vw), spec.orders(), caps)?;
    Ok(kernel.scale(uw.conj()))
}

/// One-variable factor of `W K_alpha` for a rational weight and Möbius map.
///
/// With `v = c + d z/(1 - p z)` and `A = 1 - conj(alpha) c`,
/// `B = p + conj(alpha)(d - c p)`:
/// `(d^k K_alpha)(v(z)) = k! conj(alpha)^k (1 - p z)^{k+1} / (A - B z)^{k+1}`,
/// multiplied by the weight factor `z^q (1 - c' z)^{-r}`.
fn kernel_image_factor(
    spec: &OperatorSpec,
    i: usize,
    alpha: Complex64,
    cap: usize,
) -> Result<Vec<Complex64>> {
    let (Symbol::Rational(u), Some((c, d, p))) =
        (spec.weight(), spec.maps()[i].rational_parameters())
    else {
        return Err(Error::NotClosedForm);
    };
    let k = spec.orders()[i];
    let ab = alpha.conj();
    let a_coef = ONE - ab * c;
    let b_coef = p + ab * (d - c * p);
    let lead = ab.powu(k as u32) * rising_factor(0, k) / a_coef.powu(k as u32 + 1);
    let denominator = negative_binomial(b_coef / a_coef, k + 1, 0, cap);
    let mut numerator = vec![ZERO; cap + 1];
    let mut binom = ONE;
    for (t, slot) in numerator.iter_mut().enumerate().take(k + 2) {
        *slot = binom * (-p).powu(t as u32);
        binom *= (k + 1 - t) as f64 / (t + 1) as f64;
    }
    let weight = u.factor(i, cap);
    let prod = univariate_product(
        &univariate_product(&weight, &numerator, cap),
        &denominator,
        cap,
    );
    Ok(prod.into_iter().map(|x| x * lead).collect())
}

/// `W K_alpha` in closed form for a rational weight and Möbius coordinate
/// maps; exact per coefficient up to `caps`.
pub fn kernel_image(
    spec: &OperatorSpec,
    alpha: &Point,
    caps: impl Into<Caps>,
) -> Result<TruncatedSeries> {
    let caps = caps.into();
    check_caps(spec, &caps)?;
    alpha.check_inside()?;
    let Symbol::Rational(u) = spec.weight() else {
        return Err(Error::NotClosedForm);
    };
    let mut factors = caps
        .as_slice()
        .iter()
        .enumerate()
        .map(|(i, &cap)| {
            kernel_image_factor(spec, i, alpha[i], cap).map(TruncatedSeries::univariate)
        })
        .collect::<Result<Vec<_>>>()?;
    factors[0] = factors[0].scale(u.scale());
    TruncatedSeries::tensor(&factors)
}

/// `||W K_alpha||` for closed-form specs, as a product of one-variable norms
/// summed until the geometric tail is below double precision.
pub fn kernel_image_norm(spec: &OperatorSpec, alpha: &Point) -> Result<f64> {
    if alpha.arity() != spec.arity() {
        return Err(Error::ArityMismatch {
            expected: spec.arity(),
            found: alpha.arity(),
        });
    }
    alpha.check_inside()?;
    let Symbol::Rational(u) = spec.weight() else {
        return Err(Error::NotClosedForm);
    };
    let mut norm = u.scale().norm();
    for i in 0..spec.arity() {
        let mut cap = 64;
        let mut prev = f64::NAN;
        let value = loop {
            let f = kernel_image_factor(spec, i, alpha[i], cap)?;
            let s: f64 = f.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
            let tail: f64 = f[cap / 2..]
                .iter()
                .map(|x| x.norm_sqr())
                .sum::<f64>()
                .sqrt();
            if tail <= 1e-16 * s || cap >= 1 << 14 || s == prev {
                break s;
            }
            prev = s;
            cap *= 2;
        };
        norm *= value;
    }
    Ok(norm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hardy::kernel;
    use crate::symbols::{hermitian_family, j_symmetric_family, MobiusSelfMap, RationalSymbol};

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn family_1d() -> OperatorSpec {
        j_symmetric_family(re(1.0), &[re(0.5)], &[re(0.1)], &MultiIndex::new(vec![1])).unwrap()
    }

    fn mono(a: &[usize], caps: &[usize]) -> TruncatedSeries {
        TruncatedSeries::monomial(&MultiIndex::from(a), caps)
    }

    #[test]
    fn apply_to_z_gives_weight() {
        // W z = u * 1 = z / (1 - 0.5 z)^2 = z + z^2 + 0.75 z^3 + ...
        let out = apply(&family_1d(), &mono(&[1], &[1]), vec![3]).unwrap();
        let want = [0.0, 1.0, 1.0, 0.75];
        for (got, w) in out.coeffs().iter().zip(want) {
            assert!((got - re(w)).norm() < 1e-15);
        }
    }

    #[test]
    fn apply_kills_constants_when_differentiating() {
        let out = apply(
            &family_1d(),
            &TruncatedSeries::constant(1, re(3.0)),
            vec![6],
        )
        .unwrap();
        assert!(out.is_zero());
    }

    #[test]
    fn identity_operator() {
        let id = OperatorSpec::identity(2);
        let f = TruncatedSeries::from_fn(vec![3, 2], |a| {
            Complex64::new(a[0] as f64, a[1] as f64 - 1.0)
        });
        let out = apply(&id, &f, vec![3, 2]).unwrap();
        assert_eq!(out, f);
        let m = matrix_section(&id, vec![3, 2], vec![3, 2]).unwrap();
        assert_eq!(m.entries(), &DMatrix::identity(12, 12));
        assert_eq!(adjoint_matrix(&m), m);
    }

    #[test]
    fn section_symmetric_entries() {
        let m = matrix_section(&family_1d(), vec![6], vec![6]).unwrap();
        let e = |j: usize, k: usize| m.entry(&MultiIndex::new(vec![j]), &MultiIndex::new(vec![k]));
        assert!((e(1, 2) - re(1.0)).norm() < 1e-15);
        assert!((e(2, 1) - re(1.0)).norm() < 1e-15);
        assert!((e(2, 3) - re(1.05)).norm() < 1e-15);
        assert!((e(3, 2) - re(1.05)).norm() < 1e-15);
        // m < k columns vanish
        assert!(m.entries().column(0).iter().all(|x| *x == ZERO));
    }

    #[test]
    fn killed_columns_in_two_variables() {
        let spec = j_symmetric_family(
            re(1.0),
            &[re(0.2), re(-0.1)],
            &[re(0.3), re(0.2)],
            &MultiIndex::new(vec![1, 2]),
        )
        .unwrap();
        let m = matrix_section(&spec, vec![4, 4], vec![4, 4]).unwrap();
        for (o, idx) in m.col_indices().enumerate() {
            let zero = m.entries().column(o).iter().all(|x| *x == ZERO);
            assert_eq!(zero, idx[0] < 1 || idx[1] < 2, "column {idx}");
        }
    }

    #[test]
    fn columns_match_apply() {
        let spec = hermitian_family(
            re(1.5),
            &[Complex64::new(0.1, 0.2), re(0.3)],
            &[re(0.2), re(-0.25)],
            &MultiIndex::new(vec![1, 0]),
        )
        .unwrap();
        let m = matrix_section(&spec, vec![5, 4], vec![3, 3]).unwrap();
        for idx in m.col_indices() {
            let col = m.column(&idx).unwrap();
            let direct = apply(&spec, &mono(idx.components(), &[3, 3]), vec![5, 4]).unwrap();
            assert!(col.max_abs_diff(&direct).unwrap() < 1e-14, "column {idx}");
        }
    }

    #[test]
    fn sequential_and_parallel_sections_agree() {
        let spec = family_1d();
        let a = matrix_section_with(&spec, vec![12], vec![9], Execution::Sequential).unwrap();
        let b = matrix_section_with(&spec, vec![12], vec![9], Execution::Parallel).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn sub_section_is_smaller_section() {
        let spec = family_1d();
        let big = matrix_section(&spec, vec![10], vec![10]).unwrap();
        let small = matrix_section(&spec, vec![6], vec![4]).unwrap();
        assert_eq!(
            big.sub_section(&Caps::new(vec![6]), &Caps::new(vec![4]))
                .unwrap(),
            small
        );
        assert!(big
            .sub_section(&Caps::new(vec![11]), &Caps::new(vec![4]))
            .is_err());
    }

    #[test]
    fn conjugation_axioms() {
        let i = Complex64::i();
        let iz = mono(&[1], &[1]).scale(i);
        assert_eq!(conjugate_j(&iz), mono(&[1], &[1]).scale(-i));

        let f = TruncatedSeries::from_fn(vec![2, 2], |a| {
            Complex64::new(a[0] as f64 + 0.5, a[1] as f64 - 0.3)
        });
        let g = TruncatedSeries::from_fn(vec![2, 2], |a| {
            Complex64::new(1.0 - a[1] as f64, 0.2 * a[0] as f64)
        });
        assert_eq!(conjugate_j(&conjugate_j(&f)), f);
        let lhs = TruncatedSeries::inner_product(&conjugate_j(&f), &conjugate_j(&g)).unwrap();
        let rhs = TruncatedSeries::inner_product(&g, &f).unwrap();
        assert!((lhs - rhs).norm() < 1e-15);
    }

    #[test]
    fn weighted_conjugation_examples() {
        let id = OperatorSpec::identity(1);
        let f =
            TruncatedSeries::univariate(vec![Complex64::new(1.0, 2.0), Complex64::new(-0.5, 0.25)]);
        let out = weighted_conjugation(id.weight(), id.maps(), &f, vec![1]).unwrap();
        assert_eq!(out, conjugate_j(&f));

        let spec = j_symmetric_family(
            Complex64::new(0.5, 1.0),
            &[re(0.3)],
            &[re(0.2)],
            &MultiIndex::zeros(1),
        )
        .unwrap();
        let one = TruncatedSeries::constant(1, re(1.0));
        let out = weighted_conjugation(spec.weight(), spec.maps(), &one, vec![8]).unwrap();
        assert!(
            out.max_abs_diff(&spec.weight_series(vec![8]).unwrap())
                .unwrap()
                < 1e-15
        );

        let alpha = Complex64::new(0.3, -1.2);
        let lhs =
            weighted_conjugation(spec.weight(), spec.maps(), &f.scale(alpha), vec![8]).unwrap();
        let rhs = weighted_conjugation(spec.weight(), spec.maps(), &f, vec![8])
            .unwrap()
            .scale(alpha.conj());
        assert!(lhs.max_abs_diff(&rhs).unwrap() < 1e-14);
    }

    #[test]
    fn adjoint_kernel_image_examples() {
        let spec =
            j_symmetric_family(re(1.0), &[re(0.5)], &[re(0.1)], &MultiIndex::zeros(1)).unwrap();
        let img = adjoint_kernel_image(&spec, &Point::origin(1), vec![12]).unwrap();
        assert!(
            img.max_abs_diff(&kernel(&Point::new(vec![re(0.5)]), vec![12]).unwrap())
                .unwrap()
                < 1e-16
        );

        let img = adjoint_kernel_image(&family_1d(), &Point::origin(1), vec![12]).unwrap();
        assert!(img.is_zero());

        assert!(adjoint_kernel_image(&family_1d(), &Point::new(vec![re(1.0)]), vec![3]).is_err());
    }

    #[test]
    fn adjoint_matrix_involution() {
        let spec = hermitian_family(
            re(1.0),
            &[Complex64::new(0.0, 0.3)],
            &[re(0.4)],
            &MultiIndex::new(vec![1]),
        )
        .unwrap();
        let m = matrix_section(&spec, vec![9], vec![7]).unwrap();
        let adj = adjoint_matrix(&m);
        assert_eq!(adj.nrows(), 8);
        assert_eq!(adjoint_matrix(&adj), m);
        let sq = matrix_section(&spec, vec![9], vec![9]).unwrap();
        let diff = (sq.entries() - adjoint_matrix(&sq).entries())
            .iter()
            .fold(0.0f64, |a, x| a.max(x.norm()));
        assert!(diff <= 1e-12);
    }

    #[test]
    fn kernel_image_matches_truncated_application() {
        let spec = j_symmetric_family(
            Complex64::new(1.2, -0.4),
            &[Complex64::new(0.2, 0.1)],
            &[Complex64::new(0.1, -0.2)],
            &MultiIndex::new(vec![2]),
        )
        .unwrap();
        let alpha = Point::new(vec![Complex64::new(0.3, 0.2)]);
        let closed = kernel_image(&spec, &alpha, vec![15]).unwrap();
        let via_apply = apply(&spec, &kernel(&alpha, vec![120]).unwrap(), vec![15]).unwrap();
        assert!(closed.max_abs_diff(&via_apply).unwrap() < 1e-12);
    }

    #[test]
    fn kernel_image_for_general_rational_weight() {
        let u = RationalSymbol::new(
            re(0.7),
            vec![2, 0],
            vec![re(0.3), Complex64::new(0.0, -0.2)],
            vec![1, 2],
        )
        .unwrap();
        let v = vec![
            CoordinateMap::Mobius(MobiusSelfMap::new(re(0.1), re(0.5)).unwrap()),
            CoordinateMap::Mobius(
                MobiusSelfMap::with_conjugate_pole(Complex64::new(0.2, 0.2), re(0.3)).unwrap(),
            ),
        ];
        let spec = OperatorSpec::new(Symbol::Rational(u), v, MultiIndex::new(vec![0, 1])).unwrap();
        let alpha = Point::new(vec![re(-0.4), Complex64::new(0.1, 0.3)]);
        let closed = kernel_image(&spec, &alpha, vec![6, 6]).unwrap();
        let via_apply = apply(&spec, &kernel(&alpha, vec![90, 90]).unwrap(), vec![6, 6]).unwrap();
        assert!(closed.max_abs_diff(&via_apply).unwrap() < 1e-12);
        let norm = kernel_image_norm(&spec, &alpha).unwrap();
        let big = kernel_image(&spec, &alpha, vec![80, 80]).unwrap();
        assert!((norm - big.h2_norm()).abs() < 1e-12 * norm);
    }

    #[test]
    fn kernel_image_needs_closed_forms() {
        let spec = OperatorSpec::new(
            Symbol::Series(TruncatedSeries::constant(1, re(1.0))),
            vec![CoordinateMap::Series(TruncatedSeries::univariate(vec![
                re(0.0),
                re(0.5),
            ]))],
            MultiIndex::zeros(1),
        )
        .unwrap();
        assert_eq!(
            kernel_image(&spec, &Point::origin(1), vec![3]),
            Err(Error::NotClosedForm)
        );
    }
}
