//! Symbols `(u, v)` of weighted composition-differentiation operators.
//!
//! The two closed-form families are
//!
//! * complex symmetric (with respect to coefficient conjugation):
//!   `u = a prod z_i^{k_i} / (1 - c_i z_i)^{k_i+1}`,
//!   `v_j = ((d_j - c_j^2) z_j + c_j) / (1 - c_j z_j)`;
//! * self-adjoint: the same shapes with the poles at `conj(c_i)`,
//!   `v_j = ((d_j - |c_j|^2) z_j + c_j) / (1 - conj(c_j) z_j)`, and `a`, `d_j`
//!   real.
//!
//! Every coordinate map is stored as `v(z) = c + d z / (1 - p z)` with
//! `c = v(0)`, `d = v'(0)` and pole parameter `p` (`p = c` or `p = conj(c)`),
//! which expands exactly as `v_0 = c`, `v_j = d p^{j-1}`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::series::{Caps, MultiIndex, Point, TruncatedSeries};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// `|d| < 1 - |c|^2`, the sufficient condition accepted for `v(D) ⊂ D`.
pub fn self_map_condition(c: Complex64, d: Complex64) -> bool {
    d.norm() < 1.0 - c.norm_sqr()
}

/// `|d| < (1 - |c|)^2`, the sufficient condition for boundedness.
pub fn bounded_condition(c: Complex64, d: Complex64) -> bool {
    let s = 1.0 - c.norm();
    d.norm() < s * s
}

/// One-variable rational self-map `v(z) = c + d z / (1 - p z)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MobiusSelfMap {
    c: Complex64,
    d: Complex64,
    pole: Complex64,
}

impl MobiusSelfMap {
    /// `((d - c^2) z + c) / (1 - c z)`.
    pub fn new(c: Complex64, d: Complex64) -> Result<Self> {
        Self::build(c, d, c)
    }

    /// `((d - |c|^2) z + c) / (1 - conj(c) z)`.
    pub fn with_conjugate_pole(c: Complex64, d: Complex64) -> Result<Self> {
        Self::build(c, d, c.conj())
    }

    fn build(c: Complex64, d: Complex64, pole: Complex64) -> Result<Self> {
        let modulus = c.norm();
        if modulus.is_nan() || modulus >= 1.0 {
            return Err(Error::PoleOutsideDisk { modulus });
        }
        if !self_map_condition(c, d) {
            return Err(Error::SelfMapViolated {
                d_abs: d.norm(),
                bound: 1.0 - c.norm_sqr(),
            });
        }
        Ok(MobiusSelfMap { c, d, pole })
    }

    /// `v(0)`.
    pub fn c(&self) -> Complex64 {
        self.c
    }

    /// `v'(0)`.
    pub fn d(&self) -> Complex64 {
        self.d
    }

    pub fn pole(&self) -> Complex64 {
        self.pole
    }

    /// Always `true` for a constructed map; kept as a flag for reports.
    pub fn self_map(&self) -> bool {
        self_map_condition(self.c, self.d)
    }

    pub fn bounded_sufficient(&self) -> bool {
        bounded_condition(self.c, self.d)
    }

    /// Constant map (`d = 0`).
    pub fn is_degenerate(&self) -> bool {
        self.d == ZERO
    }

    /// Image of the unit disk as `(center, radius)`.
    ///
    /// `z / (1 - p z)` sends the disk onto the disk of center
    /// `conj(p) / (1 - |p|^2)` and radius `1 / (1 - |p|^2)`.
    pub fn image_disk(&self) -> (Complex64, f64) {
        let s = 1.0 - self.pole.norm_sqr();
        (self.c + self.d * self.pole.conj() / s, self.d.norm() / s)
    }

    /// Exact test of `v(D) ⊂ D` from the image disk.
    pub fn maps_into_disk(&self) -> bool {
        let (center, radius) = self.image_disk();
        center.norm() + radius <= 1.0
    }

    /// Taylor coefficients up to degree `cap`: `c, d, d p, d p^2, ...`.
    pub fn coefficients(&self, cap: usize) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(cap + 1);
        out.push(self.c);
        let mut acc = self.d;
        for _ in 1..=cap {
            out.push(acc);
            acc *= self.pole;
        }
        out
    }

    pub fn expand(&self, cap: usize) -> TruncatedSeries {
        TruncatedSeries::univariate(self.coefficients(cap))
    }

    /// `v(z)` from the rational form; valid wherever `p z != 1`.
    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        self.c + self.d * z / (ONE - self.pole * z)
    }
}

/// Validated constructor `v(z) = ((d - c^2) z + c) / (1 - c z)`.
pub fn mobius_map(c: Complex64, d: Complex64) -> Result<MobiusSelfMap> {
    MobiusSelfMap::new(c, d)
}

pub fn expand_mobius(map: &MobiusSelfMap, cap: usize) -> TruncatedSeries {
    map.expand(cap)
}

/// Coefficients of `z^shift (1 - c z)^{-order}` up to degree `cap`:
/// `C(j + order - 1, order - 1) c^j` at degree `j + shift`.
pub fn negative_binomial(c: Complex64, order: usize, shift: usize, cap: usize) -> Vec<Complex64> {
    let mut out = vec![ZERO; cap + 1];
    let mut coef = ONE;
    for j in 0..=cap.saturating_sub(shift) {
        if j + shift > cap {
            break;
        }
        out[j + shift] = coef;
        coef *= c * ((j + order) as f64 / (j + 1) as f64);
    }
    out
}

/// `u(z) = a prod_i z_i^{p_i} / (1 - c_i z_i)^{q_i}`.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalSymbol {
    scale: Complex64,
    zero_orders: Vec<usize>,
    poles: Vec<Complex64>,
    pole_orders: Vec<usize>,
}

impl RationalSymbol {
    pub fn new(
        scale: Complex64,
        zero_orders: Vec<usize>,
        poles: Vec<Complex64>,
        pole_orders: Vec<usize>,
    ) -> Result<Self> {
        let n = zero_orders.len();
        for len in [poles.len(), pole_orders.len()] {
            if len != n {
                return Err(Error::ArityMismatch {
                    expected: n,
                    found: len,
                });
            }
        }
        if n == 0 {
            return Err(Error::Empty("rational symbol factors"));
        }
        if scale == ZERO || !scale.is_finite() {
            return Err(Error::InvalidParameter(
                "scale a must be a nonzero finite number".into(),
            ));
        }
        for c in &poles {
            let modulus = c.norm();
            if modulus.is_nan() || modulus >= 1.0 {
                return Err(Error::PoleOutsideDisk { modulus });
            }
        }
        if pole_orders.contains(&0) {
            return Err(Error::InvalidParameter(
                "pole orders must be positive".into(),
            ));
        }
        Ok(RationalSymbol {
            scale,
            zero_orders,
            poles,
            pole_orders,
        })
    }

    pub fn arity(&self) -> usize {
        self.zero_orders.len()
    }

    pub fn scale(&self) -> Complex64 {
        self.scale
    }

    pub fn zero_orders(&self) -> &[usize] {
        &self.zero_orders
    }

    pub fn poles(&self) -> &[Complex64] {
        &self.poles
    }

    pub fn pole_orders(&self) -> &[usize] {
        &self.pole_orders
    }

    /// Same factors with a different scale; the scale is not re-validated
    /// beyond being nonzero.
    pub fn with_scale(&self, scale: Complex64) -> Result<Self> {
        RationalSymbol::new(
            scale,
            self.zero_orders.clone(),
            self.poles.clone(),
            self.pole_orders.clone(),
        )
    }

    /// One-variable factor `z^{p_i} (1 - c_i z)^{-q_i}` up to degree `cap`.
    pub fn factor(&self, i: usize, cap: usize) -> Vec<Complex64> {
        negative_binomial(self.poles[i], self.pole_orders[i], self.zero_orders[i], cap)
    }

    /// Exact expansion: tensor product of the factors, scaled by `a`.
    pub fn expand(&self, caps: impl Into<Caps>) -> Result<TruncatedSeries> {
        let caps = caps.into();
        if caps.arity() != self.arity() {
            return Err(Error::ArityMismatch {
                expected: self.arity(),
                found: caps.arity(),
            });
        }
        let mut factors: Vec<TruncatedSeries> = caps
            .as_slice()
            .iter()
            .enumerate()
            .map(|(i, &d)| TruncatedSeries::univariate(self.factor(i, d)))
            .collect();
        factors[0] = factors[0].scale(self.scale);
        TruncatedSeries::tensor(&factors)
    }

    pub fn evaluate(&self, p: &Point) -> Result<Complex64> {
        if p.arity() != self.arity() {
            return Err(Error::ArityMismatch {
                expected: self.arity(),
                found: p.arity(),
            });
        }
        p.check_inside()?;
        let mut acc = self.scale;
        for (i, z) in p.coordinates().iter().enumerate() {
            acc *= z.powu(self.zero_orders[i] as u32)
                / (ONE - self.poles[i] * z).powu(self.pole_orders[i] as u32);
        }
        Ok(acc)
    }
}

pub fn expand_rational(u: &RationalSymbol, caps: impl Into<Caps>) -> Result<TruncatedSeries> {
    u.expand(caps)
}

/// The weight `u`: exact rational form or a given coefficient table.
#[derive(Clone, Debug, PartialEq)]
pub enum Symbol {
    Rational(RationalSymbol),
    Series(TruncatedSeries),
}

impl Symbol {
    pub fn arity(&self) -> usize {
        match self {
            Symbol::Rational(r) => r.arity(),
            Symbol::Series(s) => s.arity(),
        }
    }

    /// Coefficients at `caps`; exact for rational symbols, zero-padded or
    /// truncated for tables.
    pub fn expand(&self, caps: impl Into<Caps>) -> Result<TruncatedSeries> {
        match self {
            Symbol::Rational(r) => r.expand(caps),
            Symbol::Series(s) => s.resized(caps),
        }
    }

    pub fn evaluate(&self, p: &Point) -> Result<Complex64> {
        match self {
            Symbol::Rational(r) => r.evaluate(p),
            Symbol::Series(s) => s.evaluate(p),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Symbol::Rational(_))
    }

    fn is_zero(&self) -> bool {
        match self {
            Symbol::Rational(_) => false,
            Symbol::Series(s) => s.is_zero(),
        }
    }
}

/// One coordinate `v_j` of the diagonal self-map.
#[derive(Clone, Debug, PartialEq)]
pub enum CoordinateMap {
    /// `v(z) = z`, the boundary case excluded by the Möbius predicate.
    Identity,
    Mobius(MobiusSelfMap),
    Series(TruncatedSeries),
}

impl CoordinateMap {
    pub fn coefficients(&self, cap: usize) -> Vec<Complex64> {
        match self {
            CoordinateMap::Identity => {
                let mut out = vec![ZERO; cap + 1];
                if cap >= 1 {
                    out[1] = ONE;
                }
                out
            }
            CoordinateMap::Mobius(m) => m.coefficients(cap),
            CoordinateMap::Series(s) => {
                let mut out = vec![ZERO; cap + 1];
                for (o, c) in out.iter_mut().zip(s.coeffs()) {
                    *o = *c;
                }
                out
            }
        }
    }

    pub fn expand(&self, cap: usize) -> TruncatedSeries {
        TruncatedSeries::univariate(self.coefficients(cap))
    }

    pub fn evaluate(&self, z: Complex64) -> Result<Complex64> {
        match self {
            CoordinateMap::Identity => {
                Point::new(vec![z]).check_inside()?;
                Ok(z)
            }
            CoordinateMap::Mobius(m) => {
                Point::new(vec![z]).check_inside()?;
                Ok(m.evaluate(z))
            }
            CoordinateMap::Series(s) => s.evaluate(&Point::new(vec![z])),
        }
    }

    /// `true` for constant maps, whose image is not open.
    pub fn is_degenerate(&self) -> bool {
        match self {
            CoordinateMap::Identity => false,
            CoordinateMap::Mobius(m) => m.is_degenerate(),
            CoordinateMap::Series(s) => s.coeffs().iter().skip(1).all(|c| *c == ZERO),
        }
    }

    pub fn as_mobius(&self) -> Option<&MobiusSelfMap> {
        match self {
            CoordinateMap::Mobius(m) => Some(m),
            _ => None,
        }
    }

    /// `(c, d, p)` with `v(z) = c + d z / (1 - p z)` for closed-form maps.
    pub fn rational_parameters(&self) -> Option<(Complex64, Complex64, Complex64)> {
        match self {
            CoordinateMap::Identity => Some((ZERO, ONE, ZERO)),
            CoordinateMap::Mobius(m) => Some((m.c(), m.d(), m.pole())),
            CoordinateMap::Series(_) => None,
        }
    }
}

/// The data `(u, v, k)` of `W f = u (d^k f)(v)`.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorSpec {
    u: Symbol,
    v: Vec<CoordinateMap>,
    k: MultiIndex,
}

impl OperatorSpec {
    pub fn new(u: Symbol, v: Vec<CoordinateMap>, k: MultiIndex) -> Result<Self> {
        let n = u.arity();
        if v.len() != n {
            return Err(Error::ArityMismatch {
                expected: n,
                found: v.len(),
            });
        }
        if k.arity() != n {
            return Err(Error::ArityMismatch {
                expected: n,
                found: k.arity(),
            });
        }
        for map in &v {
            if let CoordinateMap::Series(s) = map {
                if s.arity() != 1 {
                    return Err(Error::ArityMismatch {
                        expected: 1,
                        found: s.arity(),
                    });
                }
            }
        }
        if u.is_zero() {
            return Err(Error::InvalidParameter(
                "weight u is identically zero".into(),
            ));
        }
        Ok(OperatorSpec { u, v, k })
    }

    /// `u = 1`, `v = identity`, `k = 0` in `n` variables.
    pub fn identity(n: usize) -> Self {
        let u = RationalSymbol::new(ONE, vec![0; n], vec![ZERO; n], vec![1; n])
            .expect("identity weight");
        let v = vec![CoordinateMap::Identity; n];
        OperatorSpec {
            u: Symbol::Rational(u),
            v,
            k: MultiIndex::zeros(n),
        }
    }

    pub fn arity(&self) -> usize {
        self.k.arity()
    }

    pub fn weight(&self) -> &Symbol {
        &self.u
    }

    pub fn maps(&self) -> &[CoordinateMap] {
        &self.v
    }

    pub fn orders(&self) -> &MultiIndex {
        &self.k
    }

    /// Total differentiation order `m = k_1 + ... + k_n`.
    pub fn total_order(&self) -> usize {
        self.k.degree()
    }

    /// Indices of constant coordinate maps.
    pub fn degenerate_coordinates(&self) -> Vec<usize> {
        self.v
            .iter()
            .enumerate()
            .filter(|(_, m)| m.is_degenerate())
            .map(|(i, _)| i)
            .collect()
    }

    pub fn degenerate_v(&self) -> bool {
        self.v.iter().any(CoordinateMap::is_degenerate)
    }

    /// `true` when every matrix entry comes from closed forms.
    pub fn exact_symbol(&self) -> bool {
        self.u.is_exact() && self.v.iter().all(|m| m.rational_parameters().is_some())
    }

    /// Same `v` and `k` with a different weight.
    pub fn with_weight(&self, u: Symbol) -> Result<Self> {
        OperatorSpec::new(u, self.v.clone(), self.k.clone())
    }

    /// Weight as a coefficient table at `caps`.
    pub fn weight_series(&self, caps: impl Into<Caps>) -> Result<TruncatedSeries> {
        self.u.expand(caps)
    }

    pub fn map_series(&self, cap: usize) -> Vec<TruncatedSeries> {
        self.v.iter().map(|m| m.expand(cap)).collect()
    }
}

fn check_lengths(n: usize, c: &[Complex64], d: &[Complex64]) -> Result<()> {
    for len in [c.len(), d.len()] {
        if len != n {
            return Err(Error::ArityMismatch {
                expected: n,
                found: len,
            });
        }
    }
    if n == 0 {
        return Err(Error::Empty("parameter lists"));
    }
    Ok(())
}

/// `u = a prod z_i^{k_i} (1 - c_i z_i)^{-(k_i+1)}` with `v_i = MobiusSelfMap(c_i, d_i)`.
pub fn j_symmetric_family(
    a: Complex64,
    c: &[Complex64],
    d: &[Complex64],
    k: &MultiIndex,
) -> Result<OperatorSpec> {
    let n = k.arity();
    check_lengths(n, c, d)?;
    let v = c
        .iter()
        .zip(d)
        .map(|(&ci, &di)| MobiusSelfMap::new(ci, di).map(CoordinateMap::Mobius))
        .collect::<Result<Vec<_>>>()?;
    let ks = k.components().to_vec();
    let u = RationalSymbol::new(
        a,
        ks.clone(),
        c.to_vec(),
        ks.iter().map(|x| x + 1).collect(),
    )?;
    OperatorSpec::new(Symbol::Rational(u), v, k.clone())
}

fn require_real(name: String, x: Complex64) -> Result<()> {
    if x.im != 0.0 {
        return Err(Error::NonReal { name, im: x.im });
    }
    Ok(())
}

/// `u = a prod z_i^{k_i} (1 - conj(c_i) z_i)^{-(k_i+1)}`,
/// `v_j = ((d_j - |c_j|^2) z_j + c_j) / (1 - conj(c_j) z_j)` with `a`, `d_j` real.
pub fn hermitian_family(
    a: Complex64,
    c: &[Complex64],
    d: &[Complex64],
    k: &MultiIndex,
) -> Result<OperatorSpec> {
    let n = k.arity();
    check_lengths(n, c, d)?;
    require_real("a".into(), a)?;
    for (j, dj) in d.iter().enumerate() {
        require_real(format!("d[{j}]"), *dj)?;
    }
    let v = c
        .iter()
        .zip(d)
        .map(|(&ci, &di)| MobiusSelfMap::with_conjugate_pole(ci, di).map(CoordinateMap::Mobius))
        .collect::<Result<Vec<_>>>()?;
    let ks = k.components().to_vec();
    let poles = c.iter().map(|x| x.conj()).collect();
    let u = RationalSymbol::new(a, ks.clone(), poles, ks.iter().map(|x| x + 1).collect())?;
    OperatorSpec::new(Symbol::Rational(u), v, k.clone())
}

/// Which closed-form family a pair of symbols matches.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymbolForm {
    JSymmetric,
    Hermitian,
    Both,
    Neither,
}

impl SymbolForm {
    pub fn as_str(self) -> &'static str {
        match self {
            SymbolForm::JSymmetric => "j_symmetric",
            SymbolForm::Hermitian => "hermitian",
            SymbolForm::Both => "both",
            SymbolForm::Neither => "neither",
        }
    }
}

/// Parameters read off the symbols and the residual of the reconstruction.
#[derive(Clone, Debug, PartialEq)]
pub struct Candidate {
    pub a: Complex64,
    pub c: Vec<Complex64>,
    pub d: Vec<Complex64>,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Classification {
    pub form: SymbolForm,
    pub j_symmetric: Candidate,
    pub hermitian: Candidate,
}

fn reconstruction_residual(
    u: &TruncatedSeries,
    v: &[TruncatedSeries],
    k: &MultiIndex,
    a: Complex64,
    c: &[Complex64],
    d: &[Complex64],
    poles: &[Complex64],
) -> f64 {
    if c.iter()
        .chain(poles)
        .any(|x| x.norm().is_nan() || x.norm() >= 1.0)
    {
        return f64::INFINITY;
    }
    let caps = u.caps().as_slice();
    let factors: Vec<Vec<Complex64>> = (0..k.arity())
        .map(|i| negative_binomial(poles[i], k[i] + 1, k[i], caps[i]))
        .collect();
    let model = TruncatedSeries::from_fn(u.caps().clone(), |idx| {
        idx.components()
            .iter()
            .enumerate()
            .fold(a, |acc, (i, &ai)| acc * factors[i][ai])
    });
    let mut worst = u.max_abs_diff(&model).unwrap_or(f64::INFINITY);
    for (i, vi) in v.iter().enumerate() {
        let cap = vi.caps().as_slice()[0];
        let mut coeffs = vec![c[i]];
        let mut acc = d[i];
        for _ in 1..=cap {
            coeffs.push(acc);
            acc *= poles[i];
        }
        let rebuilt = TruncatedSeries::univariate(coeffs);
        worst = worst.max(vi.max_abs_diff(&rebuilt).unwrap_or(f64::INFINITY));
    }
    worst
}

/// Decides whether `(u, v)` match the complex symmetric and/or self-adjoint
/// closed forms for differentiation orders `k`.
///
/// `a` is the coefficient of `prod z_i^{k_i}` in `u`, `c_i = v_i(0)` and
/// `d_i = v_i'(0)`. The residual is the largest coefficient deviation between
/// the given tables and the reconstructed family members over the given caps;
/// for the self-adjoint form it also includes `|Im a|` and `|Im d_i|`.
pub fn classify(
    u: &TruncatedSeries,
    v: &[TruncatedSeries],
    k: &MultiIndex,
    tol: f64,
) -> Result<Classification> {
    let n = u.arity();
    if v.len() != n || k.arity() != n {
        return Err(Error::ArityMismatch {
            expected: n,
            found: if v.len() != n { v.len() } else { k.arity() },
        });
    }
    for (i, &cap) in u.caps().as_slice().iter().enumerate() {
        if cap < k[i] + 3 {
            return Err(Error::CapsTooSmall {
                variable: i,
                found: cap,
                required: k[i] + 3,
            });
        }
    }
    for (i, vi) in v.iter().enumerate() {
        if vi.arity() != 1 {
            return Err(Error::ArityMismatch {
                expected: 1,
                found: vi.arity(),
            });
        }
        let cap = vi.caps().as_slice()[0];
        if cap < k[i] + 3 {
            return Err(Error::CapsTooSmall {
                variable: i,
                found: cap,
                required: k[i] + 3,
            });
        }
    }
    let a = u.coeff(k);
    let c: Vec<Complex64> = v.iter().map(|vi| vi.coeffs()[0]).collect();
    let d: Vec<Complex64> = v.iter().map(|vi| vi.coeffs()[1]).collect();

    let j_res = reconstruction_residual(u, v, k, a, &c, &d, &c);
    let conj_poles: Vec<Complex64> = c.iter().map(|x| x.conj()).collect();
    let h_res = d
        .iter()
        .fold(a.im.abs(), |m, x| m.max(x.im.abs()))
        .max(reconstruction_residual(u, v, k, a, &c, &d, &conj_poles));

    let form = match (j_res <= tol, h_res <= tol) {
        (true, true) => SymbolForm::Both,
        (true, false) => SymbolForm::JSymmetric,
        (false, true) => SymbolForm::Hermitian,
        (false, false) => SymbolForm::Neither,
    };
    Ok(Classification {
        form,
        j_symmetric: Candidate {
            a,
            c: c.clone(),
            d: d.clone(),
            residual: j_res,
        },
        hermitian: Candidate {
            a,
            c,
            d,
            residual: h_res,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn im(x: f64) -> Complex64 {
        Complex64::new(0.0, x)
    }

    #[test]
    fn mobius_predicates() {
        let m = mobius_map(re(0.5), re(0.2)).unwrap();
        assert!(m.self_map());
        assert!(m.bounded_sufficient());

        let m = mobius_map(re(0.5), re(0.3)).unwrap();
        assert!(m.self_map());
        assert!(!m.bounded_sufficient());

        let err = mobius_map(re(0.0), re(1.0)).unwrap_err();
        assert!(matches!(err, Error::SelfMapViolated { .. }));
        assert!(err.to_string().contains("self-map condition violated"));
        assert!(matches!(
            mobius_map(re(1.0), re(0.0)),
            Err(Error::PoleOutsideDisk { .. })
        ));
    }

    #[test]
    fn image_disk_exact_containment() {
        // z -> 0.5 + 0.2 z / (1 - 0.5 z) reaches 0.5 + 0.2 / 0.5 = 0.9 at z = 1
        let m = mobius_map(re(0.5), re(0.2)).unwrap();
        let (center, radius) = m.image_disk();
        assert!((center.re + radius - 0.9).abs() < 1e-15);
        assert!(m.maps_into_disk());
        // the accepted sufficient condition admits (0.5, 0.3), which reaches 1.1
        let m = mobius_map(re(0.5), re(0.3)).unwrap();
        assert!((m.evaluate(re(0.999_999)).re - 1.1).abs() < 1e-5);
        assert!(!m.maps_into_disk());
    }

    #[test]
    fn expand_mobius_examples() {
        let m = mobius_map(re(0.5), re(0.1)).unwrap();
        let s = expand_mobius(&m, 6);
        let want = [0.5, 0.1, 0.05, 0.025, 0.0125, 0.00625, 0.003125];
        for (got, w) in s.coeffs().iter().zip(want) {
            assert!((got - re(w)).norm() < 1e-17);
        }
        let s = expand_mobius(&mobius_map(re(0.0), re(0.7)).unwrap(), 4);
        assert_eq!(s, TruncatedSeries::univariate(vec![re(0.0), re(0.7)]));
        let s = expand_mobius(&mobius_map(re(0.5), re(0.0)).unwrap(), 4);
        assert_eq!(s, TruncatedSeries::constant(1, re(0.5)));
    }

    #[test]
    fn mobius_expansion_matches_rational_form() {
        let m = mobius_map(Complex64::new(0.3, -0.2), Complex64::new(0.1, 0.4)).unwrap();
        let s = m.expand(60);
        let z = Complex64::new(0.2, 0.1);
        let direct = ((m.d() - m.c() * m.c()) * z + m.c()) / (re(1.0) - m.c() * z);
        let series = s.evaluate(&Point::new(vec![z])).unwrap();
        assert!((direct - series).norm() < 1e-14);
        assert!((direct - m.evaluate(z)).norm() < 1e-15);
    }

    #[test]
    fn expand_rational_examples() {
        let u = RationalSymbol::new(re(1.0), vec![1], vec![re(0.5)], vec![2]).unwrap();
        let s = expand_rational(&u, vec![10]).unwrap();
        assert_eq!(s.coeffs()[0], re(0.0));
        for j in 1..=10 {
            let want = j as f64 * 0.5f64.powi(j as i32 - 1);
            assert!((s.coeffs()[j] - re(want)).norm() <= 1e-15 * want);
        }

        let u = RationalSymbol::new(re(3.0), vec![0], vec![re(0.0)], vec![1]).unwrap();
        assert_eq!(
            expand_rational(&u, vec![5]).unwrap(),
            TruncatedSeries::constant(1, re(3.0))
        );

        let u =
            RationalSymbol::new(re(2.0), vec![1, 0], vec![re(0.4), im(0.3)], vec![2, 3]).unwrap();
        let s = u.expand(vec![6, 6]).unwrap();
        let f0 = u.factor(0, 6);
        let f1 = u.factor(1, 6);
        for a in s.caps().indices() {
            let want = re(2.0) * f0[a[0]] * f1[a[1]];
            assert!((s.coeff(&a) - want).norm() < 1e-15);
        }
    }

    #[test]
    fn rational_symbol_validation() {
        assert!(RationalSymbol::new(re(0.0), vec![0], vec![re(0.1)], vec![1]).is_err());
        assert!(RationalSymbol::new(re(1.0), vec![0], vec![re(1.0)], vec![1]).is_err());
        assert!(RationalSymbol::new(re(1.0), vec![0], vec![re(0.1)], vec![0]).is_err());
        assert!(RationalSymbol::new(re(1.0), vec![0, 1], vec![re(0.1)], vec![1]).is_err());
    }

    #[test]
    fn j_family_forms() {
        let k = MultiIndex::new(vec![1]);
        let spec = j_symmetric_family(re(1.0), &[re(0.5)], &[re(0.1)], &k).unwrap();
        let Symbol::Rational(u) = spec.weight() else {
            panic!("expected rational weight")
        };
        assert_eq!(u.zero_orders(), &[1]);
        assert_eq!(u.pole_orders(), &[2]);
        assert_eq!(u.poles(), &[re(0.5)]);
        let v = spec.maps()[0].as_mobius().unwrap();
        // numerator (d - c^2) z + c = -0.15 z + 0.5
        assert!((v.d() - v.c() * v.pole() - re(-0.15)).norm() < 1e-16);
        assert_eq!(spec.total_order(), 1);

        let k0 = MultiIndex::zeros(2);
        let spec =
            j_symmetric_family(re(2.0), &[re(0.1), re(0.2)], &[re(0.3), re(0.3)], &k0).unwrap();
        let Symbol::Rational(u) = spec.weight() else {
            panic!()
        };
        assert_eq!(u.pole_orders(), &[1, 1]);
        assert_eq!(u.zero_orders(), &[0, 0]);

        let k = MultiIndex::new(vec![2]);
        let spec = j_symmetric_family(re(1.0), &[re(0.0)], &[re(0.4)], &k).unwrap();
        let s = spec.weight_series(vec![5]).unwrap();
        assert_eq!(s, TruncatedSeries::monomial(&k, vec![5]));
        assert_eq!(
            spec.map_series(3)[0],
            TruncatedSeries::univariate(vec![re(0.0), re(0.4)])
        );
    }

    #[test]
    fn j_family_propagates_map_errors() {
        let k = MultiIndex::new(vec![0]);
        assert!(matches!(
            j_symmetric_family(re(1.0), &[re(0.8)], &[re(0.5)], &k),
            Err(Error::SelfMapViolated { .. })
        ));
        assert!(j_symmetric_family(re(0.0), &[re(0.1)], &[re(0.1)], &k).is_err());
        assert!(j_symmetric_family(re(1.0), &[re(0.1), re(0.1)], &[re(0.1)], &k).is_err());
    }

    #[test]
    fn hermitian_family_forms() {
        let k = MultiIndex::new(vec![1]);
        let spec = hermitian_family(re(2.0), &[im(0.3)], &[re(0.5)], &k).unwrap();
        let Symbol::Rational(u) = spec.weight() else {
            panic!()
        };
        // 1 - conj(0.3 i) z = 1 + 0.3 i z
        assert_eq!(u.poles(), &[im(-0.3)]);
        let v = spec.maps()[0].as_mobius().unwrap();
        // numerator (0.41 z + 0.3 i)
        assert!((v.d() - v.c() * v.pole() - re(0.41)).norm() < 1e-16);
        assert_eq!(v.c(), im(0.3));

        assert!(matches!(
            hermitian_family(im(1.0), &[im(0.3)], &[re(0.5)], &k),
            Err(Error::NonReal { .. })
        ));
        assert!(matches!(
            hermitian_family(re(1.0), &[im(0.3)], &[Complex64::new(0.5, 0.1)], &k),
            Err(Error::NonReal { .. })
        ));
    }

    #[test]
    fn families_coincide_for_real_parameters() {
        let k = MultiIndex::new(vec![1, 2]);
        let c = [re(0.3), re(-0.2)];
        let d = [re(0.2), re(0.1)];
        let j = j_symmetric_family(re(1.5), &c, &d, &k).unwrap();
        let h = hermitian_family(re(1.5), &c, &d, &k).unwrap();
        assert_eq!(j, h);
    }

    #[test]
    fn classify_round_trip() {
        let k = MultiIndex::new(vec![1]);
        let spec = j_symmetric_family(re(2.0), &[re(0.3)], &[re(0.2)], &k).unwrap();
        let u = spec.weight_series(vec![8]).unwrap();
        let v = spec.map_series(8);
        let cls = classify(&u, &v, &k, 1e-12).unwrap();
        // real parameters sit in both families
        assert_eq!(cls.form, SymbolForm::Both);
        let cand = &cls.j_symmetric;
        assert!((cand.a - re(2.0)).norm() < 1e-12);
        assert!((cand.c[0] - re(0.3)).norm() < 1e-12);
        assert!((cand.d[0] - re(0.2)).norm() < 1e-12);
        assert!(cand.residual <= 1e-12);
    }

    #[test]
    fn classify_detects_perturbation() {
        let k = MultiIndex::new(vec![1]);
        let spec = j_symmetric_family(re(2.0), &[re(0.3)], &[re(0.2)], &k).unwrap();
        let u = spec.weight_series(vec![8]).unwrap();
        let bump = TruncatedSeries::monomial(&MultiIndex::new(vec![2]), vec![8]);
        let u = TruncatedSeries::linear_combine(&[(re(1.0), &u), (re(0.01), &bump)]).unwrap();
        let cls = classify(&u, &spec.map_series(8), &k, 1e-9).unwrap();
        assert_eq!(cls.form, SymbolForm::Neither);
        assert!(cls.j_symmetric.residual >= 0.009);
        assert!((cls.j_symmetric.residual - 0.01).abs() < 1e-15);
    }

    #[test]
    fn classify_complex_pole_is_hermitian_only() {
        let k = MultiIndex::new(vec![1]);
        let spec = hermitian_family(re(2.0), &[im(0.3)], &[re(0.5)], &k).unwrap();
        let u = spec.weight_series(vec![8]).unwrap();
        let cls = classify(&u, &spec.map_series(8), &k, 1e-12).unwrap();
        assert_eq!(cls.form, SymbolForm::Hermitian);
        assert!(cls.j_symmetric.residual > 1e-3);
    }

    #[test]
    fn classify_requires_enough_coefficients() {
        let k = MultiIndex::new(vec![2]);
        let spec = j_symmetric_family(re(1.0), &[re(0.1)], &[re(0.1)], &k).unwrap();
        let u = spec.weight_series(vec![4]).unwrap();
        assert!(matches!(
            classify(&u, &spec.map_series(8), &k, 1e-9),
            Err(Error::CapsTooSmall { required: 5, .. })
        ));
    }

    #[test]
    fn degenerate_maps_are_flagged() {
        let k = MultiIndex::new(vec![0, 0]);
        let spec =
            j_symmetric_family(re(1.0), &[re(0.5), re(0.1)], &[re(0.0), re(0.2)], &k).unwrap();
        assert!(spec.degenerate_v());
        assert_eq!(spec.degenerate_coordinates(), vec![0]);
        assert!(!OperatorSpec::identity(2).degenerate_v());
    }

    #[test]
    fn rational_evaluation_matches_expansion() {
        let u = RationalSymbol::new(
            Complex64::new(1.0, -0.5),
            vec![1, 2],
            vec![re(0.3), im(0.2)],
            vec![2, 3],
        )
        .unwrap();
        let p = Point::new(vec![Complex64::new(0.2, 0.1), re(-0.3)]);
        let direct = u.evaluate(&p).unwrap();
        let series = u.expand(vec![60, 60]).unwrap().evaluate(&p).unwrap();
        assert!((direct - series).norm() < 1e-13);
    }
}
