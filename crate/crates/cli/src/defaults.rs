//! Every default used when a config leaves a field out.
//!
//! | field                     | default              |
//! |---------------------------|----------------------|
//! | `caps.block`              | 10 per variable      |
//! | `caps.inner`              | `block + 20`         |
//! | `caps.ladder`             | 4, 5, ..., 12        |
//! | `caps.rows`, `caps.cols`  | `block`              |
//! | `tolerances.symmetry`     | 1e-10 (relative)     |
//! | `tolerances.normal`       | 1e-6 (absolute)      |
//! | `tolerances.rank`         | 1e-8 (relative)      |
//! | `tolerances.ladder_variation` | 0.05             |
//! | `checks`                  | none                 |

use polydisk::analysis::{NORMAL_TOL, RANK_TOL, SYMMETRY_TOL};

use crate::config::CapsValue;

pub const BLOCK: usize = 10;
pub const INNER_PADDING: usize = 20;
pub const LADDER: std::ops::RangeInclusive<usize> = 4..=12;
pub const LADDER_VARIATION: f64 = 0.05;
/// Points per axis of the polar sample grid, and its radius.
pub const GRID_POINTS: usize = 9;
pub const GRID_RADIUS: f64 = 0.9;
/// Tolerance for the symbol classification residual.
pub const CLASSIFY_TOL: f64 = 1e-10;

pub fn block() -> CapsValue {
    CapsValue::Uniform(BLOCK)
}

pub fn ladder() -> Vec<usize> {
    LADDER.collect()
}

pub fn symmetry_tol() -> f64 {
    SYMMETRY_TOL
}

pub fn normal_tol() -> f64 {
    NORMAL_TOL
}

pub fn rank_tol() -> f64 {
    RANK_TOL
}

pub fn ladder_variation() -> f64 {
    LADDER_VARIATION
}
