//! Truncated multivariate power series over the complex numbers.
//!
//! A [`TruncatedSeries`] stores the Taylor coefficients `f_a` of an analytic
//! function on the polydisk for every multi-index `a` with `a_i <= D_i`,
//! where `D = (D_1, ..., D_n)` are per-variable degree caps. Coefficients are
//! kept in a dense row-major table whose enumeration order is lexicographic on
//! `(a_1, ..., a_n)`: `a_1` varies slowest and `a_n` fastest. Indices beyond the
//! caps are exact zeros.
//!
//! The monomials `z^a` are orthonormal in the Hardy space, so the inner
//! product of two series is the coefficient sum `sum_a f_a conj(g_a)`.

use std::fmt;
use std::ops::Index;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Upper bound on the number of stored coefficients in one table.
pub const MAX_TABLE_LEN: usize = 1 << 24;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Exponent tuple `(a_1, ..., a_n)` of a monomial `z_1^{a_1} ... z_n^{a_n}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(Vec<usize>);

impl MultiIndex {
    pub fn new(components: Vec<usize>) -> Self {
        MultiIndex(components)
    }

    pub fn zeros(arity: usize) -> Self {
        MultiIndex(vec![0; arity])
    }

    /// Unit vector `e_i` of length `arity`.
    pub fn unit(arity: usize, i: usize) -> Self {
        let mut c = vec![0; arity];
        c[i] = 1;
        MultiIndex(c)
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    /// Total degree `a_1 + ... + a_n`.
    pub fn degree(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn components(&self) -> &[usize] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }

    /// Component-wise sum.
    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `true` when `self_i <= other_i` for every coordinate.
    pub fn le_componentwise(&self, other: &[usize]) -> bool {
        self.0.iter().zip(other).all(|(a, b)| a <= b)
    }
}

impl Index<usize> for MultiIndex {
    type Output = usize;

    fn index(&self, i: usize) -> &usize {
        &self.0[i]
    }
}

impl From<Vec<usize>> for MultiIndex {
    fn from(v: Vec<usize>) -> Self {
        MultiIndex(v)
    }
}

impl From<&[usize]> for MultiIndex {
    fn from(v: &[usize]) -> Self {
        MultiIndex(v.to_vec())
    }
}

/// Serialized as `a1.a2.....an`, the form used in matrix dumps.
impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

impl FromStr for MultiIndex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.split('.')
            .map(|p| {
                p.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidParameter(format!("bad multi-index `{s}`")))
            })
            .collect::<Result<Vec<_>>>()
            .map(MultiIndex)
    }
}

/// A point of `C^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct Point(Vec<Complex64>);

impl Point {
    pub fn new(coordinates: Vec<Complex64>) -> Self {
        Point(coordinates)
    }

    pub fn origin(arity: usize) -> Self {
        Point(vec![ZERO; arity])
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn coordinates(&self) -> &[Complex64] {
        &self.0
    }

    /// Rejects points with some `|z_i| >= 1`.
    pub fn check_inside(&self) -> Result<()> {
        for (i, z) in self.0.iter().enumerate() {
            let modulus = z.norm();
            if modulus.is_nan() || modulus >= 1.0 {
                return Err(Error::OutsidePolydisk {
                    coordinate: i,
                    modulus,
                });
            }
        }
        Ok(())
    }

    pub fn conj(&self) -> Point {
        Point(self.0.iter().map(|z| z.conj()).collect())
    }
}

impl Index<usize> for Point {
    type Output = Complex64;

    fn index(&self, i: usize) -> &Complex64 {
        &self.0[i]
    }
}

impl From<Vec<Complex64>> for Point {
    fn from(v: Vec<Complex64>) -> Self {
        Point(v)
    }
}

/// Per-variable degree caps `(D_1, ..., D_n)` together with the row-major
/// layout of the dense coefficient table they describe.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Caps {
    caps: Vec<usize>,
    strides: Vec<usize>,
    len: usize,
}

impl Caps {
    pub fn new(caps: Vec<usize>) -> Self {
        let mut strides = vec![1; caps.len()];
        let mut len = 1usize;
        for i in (0..caps.len()).rev() {
            strides[i] = len;
            len = len.saturating_mul(caps[i] + 1);
        }
        Caps { caps, strides, len }
    }

    pub fn uniform(arity: usize, cap: usize) -> Self {
        Caps::new(vec![cap; arity])
    }

    pub fn arity(&self) -> usize {
        self.caps.len()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.caps
    }

    /// Number of multi-indices `a <= caps`, i.e. `prod (D_i + 1)`.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn strides(&self) -> &[usize] {
        &self.strides
    }

    pub fn contains(&self, a: &[usize]) -> bool {
        a.len() == self.caps.len() && a.iter().zip(&self.caps).all(|(x, d)| x <= d)
    }

    /// Table offset of `a`; caller guarantees `contains(a)`.
    pub fn offset(&self, a: &[usize]) -> usize {
        a.iter().zip(&self.strides).map(|(x, s)| x * s).sum()
    }

    /// Inverse of [`Caps::offset`].
    pub fn unravel(&self, mut offset: usize) -> MultiIndex {
        let mut out = vec![0; self.caps.len()];
        for (i, s) in self.strides.iter().enumerate() {
            out[i] = offset / s;
            offset %= s;
        }
        MultiIndex(out)
    }

    /// All multi-indices within the caps, in lexicographic order.
    pub fn indices(&self) -> impl Iterator<Item = MultiIndex> + '_ {
        (0..self.len).map(move |o| self.unravel(o))
    }

    /// Component-wise maximum.
    pub fn max(&self, other: &Caps) -> Caps {
        Caps::new(
            self.caps
                .iter()
                .zip(&other.caps)
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }

    /// Component-wise minimum.
    pub fn min(&self, other: &Caps) -> Caps {
        Caps::new(
            self.caps
                .iter()
                .zip(&other.caps)
                .map(|(a, b)| *a.min(b))
                .collect(),
        )
    }

    fn check_size(&self) -> Result<()> {
        if self.len > MAX_TABLE_LEN {
            return Err(Error::TooLarge(self.len));
        }
        Ok(())
    }
}

impl From<Vec<usize>> for Caps {
    fn from(v: Vec<usize>) -> Self {
        Caps::new(v)
    }
}

impl From<&[usize]> for Caps {
    fn from(v: &[usize]) -> Self {
        Caps::new(v.to_vec())
    }
}

fn check_arity(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::ArityMismatch { expected, found });
    }
    Ok(())
}

/// Visits every multi-index in the box `0 <= a_i <= lims_i` in lexicographic
/// order.
pub(crate) fn for_each_in_box(lims: &[usize], mut f: impl FnMut(&[usize])) {
    let n = lims.len();
    let mut a = vec![0usize; n];
    loop {
        f(&a);
        let mut i = n;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if a[i] < lims[i] {
                a[i] += 1;
                break;
            }
            a[i] = 0;
        }
    }
}

/// `(a + 1)(a + 2)...(a + k)` as a float, the factor `(a+k)!/a!`.
pub fn rising_factor(a: usize, k: usize) -> f64 {
    (a + 1..=a + k).fold(1.0, |acc, t| acc * t as f64)
}

/// Finitely truncated Taylor coefficient table on the polydisk.
#[derive(Clone, Debug)]
pub struct TruncatedSeries {
    caps: Caps,
    coeffs: Vec<Complex64>,
}

impl TruncatedSeries {
    pub fn zeros(caps: impl Into<Caps>) -> Self {
        let caps = caps.into();
        let coeffs = vec![ZERO; caps.len()];
        TruncatedSeries { caps, coeffs }
    }

    /// Builds a table from coefficients listed in lexicographic order.
    pub fn from_coeffs(caps: impl Into<Caps>, coeffs: Vec<Complex64>) -> Result<Self> {
        let caps = caps.into();
        caps.check_size()?;
        if coeffs.len() != caps.len() {
            return Err(Error::InvalidParameter(format!(
                "expected {} coefficients, found {}",
                caps.len(),
                coeffs.len()
            )));
        }
        Ok(TruncatedSeries { caps, coeffs })
    }

    pub fn from_fn(caps: impl Into<Caps>, mut f: impl FnMut(&MultiIndex) -> Complex64) -> Self {
        let caps = caps.into();
        let coeffs = (0..caps.len()).map(|o| f(&caps.unravel(o))).collect();
        TruncatedSeries { caps, coeffs }
    }

    /// One-variable series `sum_j coeffs[j] z^j`.
    pub fn univariate(coeffs: Vec<Complex64>) -> Self {
        assert!(
            !coeffs.is_empty(),
            "univariate series needs at least one coefficient"
        );
        let caps = Caps::new(vec![coeffs.len() - 1]);
        TruncatedSeries { caps, coeffs }
    }

    /// The constant `value` in `arity` variables.
    pub fn constant(arity: usize, value: Complex64) -> Self {
        let mut s = TruncatedSeries::zeros(vec![0; arity]);
        s.coeffs[0] = value;
        s
    }

    /// The monomial `z^a` stored at the given caps (zero if `a` exceeds them).
    pub fn monomial(a: &MultiIndex, caps: impl Into<Caps>) -> Self {
        let mut s = TruncatedSeries::zeros(caps);
        if s.caps.contains(a.components()) {
            let o = s.caps.offset(a.components());
            s.coeffs[o] = ONE;
        }
        s
    }

    /// Outer product of one-variable factors: coefficient at `a` equals
    /// `prod_i factors[i]_{a_i}`.
    pub fn tensor(factors: &[TruncatedSeries]) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::Empty("tensor factors"));
        }
        for f in factors {
            check_arity(1, f.arity())?;
        }
        let caps = Caps::new(factors.iter().map(|f| f.caps.caps[0]).collect());
        caps.check_size()?;
        Ok(TruncatedSeries::from_fn(caps, |a| {
            a.components()
                .iter()
                .zip(factors)
                .fold(ONE, |acc, (&ai, f)| acc * f.coeffs[ai])
        }))
    }

    pub fn arity(&self) -> usize {
        self.caps.arity()
    }

    pub fn caps(&self) -> &Caps {
        &self.caps
    }

    /// Coefficients in lexicographic order.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient at `a`; zero beyond the caps.
    pub fn coeff(&self, a: &MultiIndex) -> Complex64 {
        if self.caps.contains(a.components()) {
            self.coeffs[self.caps.offset(a.components())]
        } else {
            ZERO
        }
    }

    /// `(index, coefficient)` pairs in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = (MultiIndex, Complex64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(o, c)| (self.caps.unravel(o), *c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == ZERO)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.norm()))
    }

    /// Copy of the series re-stored at new caps: coefficients beyond the new
    /// caps are dropped, new slots are zero.
    pub fn resized(&self, caps: impl Into<Caps>) -> Result<Self> {
        let caps = caps.into();
        check_arity(self.arity(), caps.arity())?;
        caps.check_size()?;
        let common = self.caps.min(&caps);
        let mut out = TruncatedSeries::zeros(caps);
        for_each_in_box(common.as_slice(), |a| {
            out.coeffs[out.caps.offset(a)] = self.coeffs[self.caps.offset(a)];
        });
        Ok(out)
    }

    pub fn scale(&self, alpha: Complex64) -> Self {
        TruncatedSeries {
            caps: self.caps.clone(),
            coeffs: self.coeffs.iter().map(|c| c * alpha).collect(),
        }
    }

    /// Coefficient-wise complex conjugation, `f(z) -> conj(f(conj z))`.
    pub fn conj(&self) -> Self {
        TruncatedSeries {
            caps: self.caps.clone(),
            coeffs: self.coeffs.iter().map(|c| c.conj()).collect(),
        }
    }

    /// Largest coefficient difference over the union of both supports.
    pub fn max_abs_diff(&self, other: &TruncatedSeries) -> Result<f64> {
        check_arity(self.arity(), other.arity())?;
        let union = self.caps.max(&other.caps);
        let mut worst = 0.0f64;
        for_each_in_box(union.as_slice(), |a| {
            let x = self.coeff_slice(a);
            let y = other.coeff_slice(a);
            worst = worst.max((x - y).norm());
        });
        Ok(worst)
    }

    fn coeff_slice(&self, a: &[usize]) -> Complex64 {
        if self.caps.contains(a) {
            self.coeffs[self.caps.offset(a)]
        } else {
            ZERO
        }
    }

    /// Exact `sum_t alpha_t f_t`; output caps are the component-wise maximum.
    pub fn linear_combine(terms: &[(Complex64, &TruncatedSeries)]) -> Result<Self> {
        let (_, first) = terms.first().ok_or(Error::Empty("linear combination"))?;
        let arity = first.arity();
        let mut caps = first.caps.clone();
        for (_, f) in terms {
            check_arity(arity, f.arity())?;
            caps = caps.max(&f.caps);
        }
        caps.check_size()?;
        let mut out = TruncatedSeries::zeros(caps);
        for (alpha, f) in terms {
            if f.caps == out.caps {
                for (o, c) in out.coeffs.iter_mut().zip(&f.coeffs) {
                    *o += alpha * c;
                }
            } else {
                for (off, c) in f.coeffs.iter().enumerate() {
                    let a = f.caps.unravel(off);
                    let o = out.caps.offset(a.components());
                    out.coeffs[o] += alpha * c;
                }
            }
        }
        Ok(out)
    }

    /// Cauchy product truncated at `out_caps`:
    /// `(fg)_a = sum_{b <= a} f_b g_{a-b}` for every `a <= out_caps`.
    pub fn multiply(
        f: &TruncatedSeries,
        g: &TruncatedSeries,
        out_caps: impl Into<Caps>,
    ) -> Result<Self> {
        let out_caps = out_caps.into();
        check_arity(f.arity(), g.arity())?;
        check_arity(f.arity(), out_caps.arity())?;
        out_caps.check_size()?;
        let n = f.arity();
        let mut out = TruncatedSeries::zeros(out_caps);
        let f_box = f.caps.min(&out.caps);
        let mut lims = vec![0usize; n];
        let out_strides = out.caps.strides.clone();
        let g_strides = &g.caps.strides;
        for_each_in_box(f_box.as_slice(), |b| {
            let fb = f.coeffs[f.caps.offset(b)];
            if fb == ZERO {
                return;
            }
            for i in 0..n {
                lims[i] = g.caps.caps[i].min(out.caps.caps[i] - b[i]);
            }
            let base = out.caps.offset(b);
            for_each_in_box(&lims, |c| {
                let mut go = 0;
                let mut oo = base;
                for i in 0..n {
                    go += c[i] * g_strides[i];
                    oo += c[i] * out_strides[i];
                }
                out.coeffs[oo] += fb * g.coeffs[go];
            });
        });
        Ok(out)
    }

    /// Mixed partial derivative `d^{|k|} f / dz_1^{k_1} ... dz_n^{k_n}`.
    ///
    /// Output caps are `D_i - k_i` clamped at zero; differentiating past a
    /// cap gives the zero series.
    pub fn partial_derivative(&self, k: &MultiIndex) -> Result<Self> {
        check_arity(self.arity(), k.arity())?;
        let over = k
            .components()
            .iter()
            .zip(self.caps.as_slice())
            .any(|(ki, di)| ki > di);
        let out_caps: Vec<usize> = self
            .caps
            .as_slice()
            .iter()
            .zip(k.components())
            .map(|(d, ki)| d.saturating_sub(*ki))
            .collect();
        if over {
            return Ok(TruncatedSeries::zeros(out_caps));
        }
        Ok(TruncatedSeries::from_fn(out_caps, |a| {
            let shifted = a.add(k);
            let factor = a
                .components()
                .iter()
                .zip(k.components())
                .fold(1.0, |acc, (&ai, &ki)| acc * rising_factor(ai, ki));
            self.coeffs[self.caps.offset(shifted.components())] * factor
        }))
    }

    /// Value of the truncated sum at `p`, accumulated in lexicographic order.
    pub fn evaluate(&self, p: &Point) -> Result<Complex64> {
        check_arity(self.arity(), p.arity())?;
        p.check_inside()?;
        let powers: Vec<Vec<Complex64>> = self
            .caps
            .as_slice()
            .iter()
            .zip(p.coordinates())
            .map(|(&d, &z)| power_table(z, d))
            .collect();
        let mut sum = ZERO;
        let mut off = 0;
        for_each_in_box(self.caps.as_slice(), |a| {
            let mut term = self.coeffs[off];
            off += 1;
            if term == ZERO {
                return;
            }
            for (i, &ai) in a.iter().enumerate() {
                term *= powers[i][ai];
            }
            sum += term;
        });
        Ok(sum)
    }

    /// Linear map applied along one axis:
    /// `out[.., j, ..] = sum_a weight(j, a) * self[.., a, ..]` for `j <= new_cap`.
    pub fn map_axis(
        &self,
        axis: usize,
        new_cap: usize,
        weight: impl Fn(usize, usize) -> Complex64,
    ) -> Result<Self> {
        let mut caps = self.caps.as_slice().to_vec();
        let old_cap = caps[axis];
        caps[axis] = new_cap;
        let caps = Caps::new(caps);
        caps.check_size()?;
        let table: Vec<Complex64> = (0..=new_cap)
            .flat_map(|j| (0..=old_cap).map(move |a| (j, a)))
            .map(|(j, a)| weight(j, a))
            .collect();
        let inner = self.caps.strides[axis];
        let outer = self.caps.len() / (inner * (old_cap + 1));
        let mut out = TruncatedSeries::zeros(caps);
        for o in 0..outer {
            let src = o * (old_cap + 1) * inner;
            let dst = o * (new_cap + 1) * inner;
            for j in 0..=new_cap {
                let row = &table[j * (old_cap + 1)..(j + 1) * (old_cap + 1)];
                for (a, w) in row.iter().enumerate() {
                    if *w == ZERO {
                        continue;
                    }
                    let s = src + a * inner;
                    let d = dst + j * inner;
                    for t in 0..inner {
                        out.coeffs[d + t] += w * self.coeffs[s + t];
                    }
                }
            }
        }
        Ok(out)
    }

    /// Product with a one-variable series in `z_axis`, truncated at `new_cap`
    /// along that axis.
    pub fn convolve_axis(&self, axis: usize, g: &[Complex64], new_cap: usize) -> Result<Self> {
        self.map_axis(axis, new_cap, |j, a| {
            if a <= j && j - a < g.len() {
                g[j - a]
            } else {
                ZERO
            }
        })
    }

    /// Composition with a diagonal map `v(z) = (v_1(z_1), ..., v_n(z_n))`.
    ///
    /// Every `v_j` is a one-variable series. Output coefficients are exact up
    /// to `out_caps` given the stored coefficients of `self` and `v`; only the
    /// powers `v_j^0, ..., v_j^{D_j}` of coordinate `j` enter axis `j`.
    pub fn compose_diagonal(
        &self,
        v: &[TruncatedSeries],
        out_caps: impl Into<Caps>,
    ) -> Result<Self> {
        let out_caps = out_caps.into();
        check_arity(self.arity(), v.len())?;
        check_arity(self.arity(), out_caps.arity())?;
        out_caps.check_size()?;
        for vj in v {
            check_arity(1, vj.arity())?;
        }
        let mut current = self.clone();
        for (axis, vj) in v.iter().enumerate() {
            let deg = self.caps.caps[axis];
            let out_cap = out_caps.caps[axis];
            let powers = univariate_powers(vj.coeffs(), deg, out_cap);
            current = current.map_axis(axis, out_cap, |j, a| powers[a][j])?;
        }
        Ok(current)
    }

    /// `<f, g> = sum_a f_a conj(g_a)` in the Hardy space.
    pub fn inner_product(f: &TruncatedSeries, g: &TruncatedSeries) -> Result<Complex64> {
        check_arity(f.arity(), g.arity())?;
        let common = f.caps.min(&g.caps);
        let mut sum = ZERO;
        for_each_in_box(common.as_slice(), |a| {
            sum += f.coeffs[f.caps.offset(a)] * g.coeffs[g.caps.offset(a)].conj();
        });
        Ok(sum)
    }

    /// Hardy-space norm of the truncated table.
    pub fn h2_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }
}

/// Equality on the union of caps with missing coefficients read as zero.
impl PartialEq for TruncatedSeries {
    fn eq(&self, other: &Self) -> bool {
        self.arity() == other.arity() && matches!(self.max_abs_diff(other), Ok(d) if d == 0.0)
    }
}

/// `[1, z, z^2, ..., z^deg]`.
pub fn power_table(z: Complex64, deg: usize) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(deg + 1);
    let mut acc = ONE;
    for _ in 0..=deg {
        out.push(acc);
        acc *= z;
    }
    out
}

/// Cauchy product of two coefficient vectors truncated at degree `cap`.
pub fn univariate_product(f: &[Complex64], g: &[Complex64], cap: usize) -> Vec<Complex64> {
    let mut out = vec![ZERO; cap + 1];
    for (i, fi) in f.iter().enumerate().take(cap + 1) {
        if *fi == ZERO {
            continue;
        }
        for (j, gj) in g.iter().enumerate().take(cap + 1 - i) {
            out[i + j] += fi * gj;
        }
    }
    out
}

/// Powers `v^0, ..., v^deg` of a one-variable series, each truncated at `cap`.
pub fn univariate_powers(v: &[Complex64], deg: usize, cap: usize) -> Vec<Vec<Complex64>> {
    let mut out = Vec::with_capacity(deg + 1);
    let mut acc = vec![ZERO; cap + 1];
    acc[0] = ONE;
    for _ in 0..deg {
        let next = univariate_product(&acc, v, cap);
        out.push(acc);
        acc = next;
    }
    out.push(acc);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn mono(a: &[usize], caps: &[usize]) -> TruncatedSeries {
        TruncatedSeries::monomial(&MultiIndex::from(a), caps)
    }

    #[test]
    fn lexicographic_layout() {
        let caps = Caps::new(vec![1, 2]);
        let order: Vec<String> = caps.indices().map(|a| a.to_string()).collect();
        assert_eq!(order, ["0.0", "0.1", "0.2", "1.0", "1.1", "1.2"]);
        assert_eq!(caps.offset(&[1, 1]), 4);
        assert_eq!(caps.unravel(5), MultiIndex::new(vec![1, 2]));
    }

    #[test]
    fn multi_index_text_round_trip() {
        let a: MultiIndex = "3.0.12".parse().unwrap();
        assert_eq!(a.components(), &[3, 0, 12]);
        assert_eq!(a.to_string(), "3.0.12");
        assert_eq!(a.degree(), 15);
        assert!("1.x".parse::<MultiIndex>().is_err());
    }

    #[test]
    fn linear_combine_union_of_supports() {
        let z1 = mono(&[1, 0], &[1, 0]);
        let z2 = mono(&[0, 1], &[0, 1]);
        let s = TruncatedSeries::linear_combine(&[(c(1.0), &z1), (c(1.0), &z2)]).unwrap();
        assert_eq!(s.caps().as_slice(), &[1, 1]);
        assert_eq!(s.coeff(&MultiIndex::new(vec![1, 0])), c(1.0));
        assert_eq!(s.coeff(&MultiIndex::new(vec![0, 1])), c(1.0));
        assert_eq!(s.coeff(&MultiIndex::new(vec![1, 1])), c(0.0));
    }

    #[test]
    fn linear_combine_cancels_exactly() {
        let f = TruncatedSeries::univariate(vec![c(1.0), c(1.0)]);
        let s = TruncatedSeries::linear_combine(&[(c(2.0), &f), (c(-2.0), &f)]).unwrap();
        assert!(s.is_zero());
    }

    #[test]
    fn linear_combine_complex_scalars() {
        let i = Complex64::i();
        let z = TruncatedSeries::univariate(vec![c(0.0), c(1.0)]);
        let iz = z.scale(i);
        let s = TruncatedSeries::linear_combine(&[(i, &z), (c(1.0), &iz)]).unwrap();
        assert_eq!(s.coeffs(), &[c(0.0), Complex64::new(0.0, 2.0)]);
    }

    #[test]
    fn linear_combine_rejects_arity_mismatch() {
        let f = TruncatedSeries::constant(1, c(1.0));
        let g = TruncatedSeries::constant(2, c(1.0));
        assert_eq!(
            TruncatedSeries::linear_combine(&[(c(1.0), &f), (c(1.0), &g)]),
            Err(Error::ArityMismatch {
                expected: 1,
                found: 2
            })
        );
        assert!(TruncatedSeries::linear_combine(&[]).is_err());
    }

    #[test]
    fn multiply_bilinear_factors() {
        let f = TruncatedSeries::from_coeffs(vec![1, 0], vec![c(1.0), c(1.0)]).unwrap();
        let g = TruncatedSeries::from_coeffs(vec![0, 1], vec![c(1.0), c(1.0)]).unwrap();
        let p = TruncatedSeries::multiply(&f, &g, vec![1, 1]).unwrap();
        assert_eq!(p.coeffs(), &[c(1.0); 4]);
    }

    #[test]
    fn multiply_geometric_hand_convolution() {
        // coefficient of z^3 in (sum_{j<=3} 0.5^j z^j)^2 is 4 * 0.125
        let f = TruncatedSeries::univariate((0..4).map(|j| c(0.5f64.powi(j))).collect());
        let p = TruncatedSeries::multiply(&f, &f, vec![3]).unwrap();
        let hand: f64 = (0..=3).map(|j| 0.5f64.powi(j) * 0.5f64.powi(3 - j)).sum();
        assert_eq!(hand, 0.5);
        assert_eq!(p.coeff(&MultiIndex::new(vec![3])), c(hand));
    }

    #[test]
    fn multiply_by_zero() {
        let f = TruncatedSeries::univariate(vec![c(1.0), c(2.0), c(3.0)]);
        let z = TruncatedSeries::zeros(vec![2]);
        assert!(TruncatedSeries::multiply(&f, &z, vec![4])
            .unwrap()
            .is_zero());
    }

    #[test]
    fn derivative_examples() {
        let f = mono(&[2, 1], &[2, 1]);
        let d = f.partial_derivative(&MultiIndex::new(vec![1, 1])).unwrap();
        assert_eq!(d, mono(&[1, 0], &[1, 0]).scale(c(2.0)));

        let g = TruncatedSeries::univariate(vec![c(1.0); 4]);
        let dg = g.partial_derivative(&MultiIndex::new(vec![1])).unwrap();
        assert_eq!(dg.coeffs(), &[c(1.0), c(2.0), c(3.0)]);

        let h = mono(&[5], &[5]);
        let d2 = h.partial_derivative(&MultiIndex::new(vec![2])).unwrap();
        assert_eq!(d2, mono(&[3], &[3]).scale(c(20.0)));
    }

    #[test]
    fn over_differentiation_is_zero() {
        let f = TruncatedSeries::univariate(vec![c(1.0), c(1.0)]);
        let d = f.partial_derivative(&MultiIndex::new(vec![3])).unwrap();
        assert!(d.is_zero());
        assert_eq!(d.caps().as_slice(), &[0]);
    }

    #[test]
    fn evaluate_examples() {
        let f = mono(&[1, 1], &[1, 1]);
        let p = Point::new(vec![c(0.5), c(0.5)]);
        assert_eq!(f.evaluate(&p).unwrap(), c(0.25));

        let seven = TruncatedSeries::constant(3, c(7.0));
        let q = Point::new(vec![c(0.9), Complex64::new(0.1, -0.8), c(0.0)]);
        assert_eq!(seven.evaluate(&q).unwrap(), c(7.0));
    }

    #[test]
    fn evaluate_geometric_truncation_within_tail_bound() {
        let f = TruncatedSeries::univariate((0..=20).map(|j| c(0.5f64.powi(j))).collect());
        let v = f.evaluate(&Point::new(vec![c(0.4)])).unwrap();
        let tail = 0.2f64.powi(21) / 0.8;
        assert!((v - c(1.25)).norm() <= tail * (1.0 + 1e-12) + 1e-15);
    }

    #[test]
    fn evaluate_rejects_outside_points() {
        let f = TruncatedSeries::constant(2, c(1.0));
        let err = f.evaluate(&Point::new(vec![c(0.0), c(1.0)])).unwrap_err();
        assert!(matches!(err, Error::OutsidePolydisk { coordinate: 1, .. }));
    }

    #[test]
    fn compose_examples() {
        let f = mono(&[2], &[2]);
        let v = TruncatedSeries::univariate(vec![c(0.0), c(0.5)]);
        let out = f.compose_diagonal(&[v], vec![4]).unwrap();
        assert_eq!(out, mono(&[2], &[2]).scale(c(0.25)));

        // v(z) = 0.5 + 0.1 z / (1 - 0.5 z): partial fractions give 0.1 * 0.5^{j-1}
        let mobius: Vec<Complex64> = (0..8)
            .map(|j| {
                if j == 0 {
                    c(0.5)
                } else {
                    c(0.1 * 0.5f64.powi(j - 1))
                }
            })
            .collect();
        let z = mono(&[1], &[1]);
        let out = z
            .compose_diagonal(&[TruncatedSeries::univariate(mobius.clone())], vec![7])
            .unwrap();
        assert_eq!(out.coeffs(), mobius.as_slice());
        assert_eq!(out.coeffs()[..4], [c(0.5), c(0.1), c(0.05), c(0.025)]);

        let one = TruncatedSeries::constant(1, c(1.0));
        let out = one
            .compose_diagonal(&[TruncatedSeries::univariate(mobius)], vec![5])
            .unwrap();
        assert_eq!(out, TruncatedSeries::constant(1, c(1.0)));
    }

    #[test]
    fn compose_rejects_multivariate_coordinate() {
        let f = TruncatedSeries::constant(1, c(1.0));
        let v = TruncatedSeries::constant(2, c(0.0));
        assert!(f.compose_diagonal(&[v], vec![2]).is_err());
    }

    #[test]
    fn inner_product_examples() {
        let a = mono(&[2, 1], &[3, 3]);
        assert_eq!(TruncatedSeries::inner_product(&a, &a).unwrap(), c(1.0));
        let z1 = mono(&[1, 0], &[1, 1]);
        let z2 = mono(&[0, 1], &[1, 1]);
        assert_eq!(TruncatedSeries::inner_product(&z1, &z2).unwrap(), c(0.0));

        // truncated kernel K_w has coefficients conj(w)^a
        let w = [0.3f64, 0.5];
        let k = TruncatedSeries::from_fn(vec![6, 6], |a| {
            c(w[0].powi(a[0] as i32) * w[1].powi(a[1] as i32))
        });
        let z1z2 = mono(&[1, 1], &[1, 1]);
        let ip = TruncatedSeries::inner_product(&z1z2, &k).unwrap();
        assert!((ip - c(0.15)).norm() < 1e-16);
    }

    #[test]
    fn resized_pads_and_drops() {
        let f = TruncatedSeries::univariate(vec![c(1.0), c(2.0), c(3.0)]);
        assert_eq!(f.resized(vec![1]).unwrap().coeffs(), &[c(1.0), c(2.0)]);
        let g = f.resized(vec![4]).unwrap();
        assert_eq!(g, f);
        assert_eq!(g.coeffs().len(), 5);
    }

    #[test]
    fn tensor_factors_multiply() {
        let a = TruncatedSeries::univariate(vec![c(1.0), c(2.0)]);
        let b = TruncatedSeries::univariate(vec![c(3.0), c(5.0), c(7.0)]);
        let t = TruncatedSeries::tensor(&[a, b]).unwrap();
        assert_eq!(t.coeff(&MultiIndex::new(vec![1, 2])), c(14.0));
        assert_eq!(t.coeff(&MultiIndex::new(vec![0, 1])), c(5.0));
    }

    #[test]
    fn oversized_tables_rejected() {
        let err = TruncatedSeries::from_coeffs(vec![4096, 4096], vec![]).unwrap_err();
        assert!(matches!(err, Error::TooLarge(_)));
    }
}
