//! Reproducing kernels of the Hardy space on the polydisk.
//!
//! `K_a(z) = prod_i 1 / (1 - conj(a_i) z_i)` reproduces point evaluation and
//! `K_w^[k](z) = prod_i k_i! z_i^{k_i} / (1 - conj(w_i) z_i)^{k_i + 1}`
//! reproduces the mixed partial `d^k f (w)`. Both are rank-one tensors of
//! one-variable geometric-type sequences, so every stored coefficient is
//! exact.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::series::{power_table, rising_factor, Caps, MultiIndex, Point, TruncatedSeries};

fn check_point(alpha: &Point, caps: &Caps) -> Result<()> {
    if alpha.arity() != caps.arity() {
        return Err(Error::ArityMismatch {
            expected: caps.arity(),
            found: alpha.arity(),
        });
    }
    alpha.check_inside()
}

/// Truncated reproducing kernel `K_alpha`.
pub fn kernel(alpha: &Point, caps: impl Into<Caps>) -> Result<TruncatedSeries> {
    derivative_kernel(alpha, &MultiIndex::zeros(alpha.arity()), caps)
}

/// Truncated derivative kernel `K_w^[k]`: coefficient at `a` is zero when some
/// `a_i < k_i` and `prod_i a_i!/(a_i - k_i)! conj(w_i)^{a_i - k_i}` otherwise.
pub fn derivative_kernel(
    w: &Point,
    k: &MultiIndex,
    caps: impl Into<Caps>,
) -> Result<TruncatedSeries> {
    let caps = caps.into();
    check_point(w, &caps)?;
    if k.arity() != caps.arity() {
        return Err(Error::ArityMismatch {
            expected: caps.arity(),
            found: k.arity(),
        });
    }
    let factors = caps
        .as_slice()
        .iter()
        .zip(w.coordinates())
        .zip(k.components())
        .map(|((&d, wi), &ki)| {
            let powers = power_table(wi.conj(), d);
            TruncatedSeries::univariate(
                (0..=d)
                    .map(|a| {
                        if a < ki {
                            Complex64::new(0.0, 0.0)
                        } else {
                            powers[a - ki] * rising_factor(a - ki, ki)
                        }
                    })
                    .collect(),
            )
        })
        .collect::<Vec<_>>();
    TruncatedSeries::tensor(&factors)
}

/// Closed-form `||K_alpha||^2 = prod_i 1 / (1 - |alpha_i|^2)`.
pub fn kernel_norm_sqr(alpha: &Point) -> Result<f64> {
    alpha.check_inside()?;
    Ok(alpha
        .coordinates()
        .iter()
        .map(|a| 1.0 / (1.0 - a.norm_sqr()))
        .product())
}

/// `K_alpha / ||K_alpha||` with the norm taken from the closed form, not from
/// the truncated table.
pub fn normalized_kernel(alpha: &Point, caps: impl Into<Caps>) -> Result<TruncatedSeries> {
    let k = kernel(alpha, caps)?;
    let norm = kernel_norm_sqr(alpha)?.sqrt();
    Ok(k.scale(Complex64::new(1.0 / norm, 0.0)))
}
