//! Weighted composition-differentiation operators `W f = u (d^k f)(v)` on the
//! Hardy space of the polydisk, studied through truncated power series and
//! finite matrix sections in the monomial basis.
//!
//! * [`series`]: truncated multivariate series arithmetic.
//! * [`hardy`]: reproducing kernels and their derivative variants.
//! * [`symbols`]: the symbol families, validity predicates and classification.
//! * [`operators`]: operator application, matrix sections, conjugations and
//!   the closed-form adjoint action on kernels.
//! * [`analysis`]: symmetry, self-adjointness, normality, null spaces and norm
//!   probes with residuals.

pub mod analysis;
pub mod error;
pub mod hardy;
pub mod operators;
pub mod par;
pub mod series;
pub mod symbols;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use par::Execution;
pub use series::{Caps, MultiIndex, Point, TruncatedSeries};
pub use symbols::{CoordinateMap, MobiusSelfMap, OperatorSpec, RationalSymbol, Symbol};
