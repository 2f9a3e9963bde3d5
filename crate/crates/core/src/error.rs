use thiserror::Error;

/// Errors raised by series arithmetic, symbol construction and the checks.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("arity mismatch: expected {expected} variables, found {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("coordinate {coordinate} has modulus {modulus} and lies outside the open unit disk")]
    OutsidePolydisk { coordinate: usize, modulus: f64 },

    #[error("pole parameter |c| = {modulus} must be < 1")]
    PoleOutsideDisk { modulus: f64 },

    #[error("self-map condition violated: |d| = {d_abs} is not < 1 - |c|^2 = {bound}")]
    SelfMapViolated { d_abs: f64, bound: f64 },

    #[error("parameter `{name}` must be real, found imaginary part {im}")]
    NonReal { name: String, im: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("caps too small: variable {variable} has cap {found}, need at least {required}")]
    CapsTooSmall {
        variable: usize,
        found: usize,
        required: usize,
    },

    #[error("coordinate map {coordinate} is constant; the kernel analysis needs an open image")]
    DegenerateMap { coordinate: usize },

    #[error("inner caps {inner:?} must dominate block caps {block:?} component-wise")]
    InnerCapsTooSmall {
        block: Vec<usize>,
        inner: Vec<usize>,
    },

    #[error("coefficient table of {0} entries exceeds the dense storage limit")]
    TooLarge(usize),

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("closed form needs a rational weight and Möbius coordinate maps")]
    NotClosedForm,
}

pub type Result<T> = std::result::Result<T, Error>;
