//! Experiment configuration files (TOML or JSON, unknown fields rejected).

use std::path::{Path, PathBuf};

use polydisk::symbols::{hermitian_family, j_symmetric_family};
use polydisk::{Caps, Complex64, CoordinateMap, MultiIndex, OperatorSpec, Symbol, TruncatedSeries};
use serde::{Deserialize, Serialize};

use crate::defaults;
use crate::CliError;

/// A complex parameter. Accepts `0.5`, `[0.5, -0.1]` or `{re = 0.5, im = -0.1}`;
/// always written back as `{"re": .., "im": ..}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(from = "ScalarRepr", into = "ScalarObject")]
pub struct Scalar(pub Complex64);

#[derive(Deserialize)]
#[serde(untagged)]
enum ScalarRepr {
    Real(f64),
    Pair([f64; 2]),
    Object(ScalarObject),
}

#[derive(Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScalarObject {
    re: f64,
    #[serde(default)]
    im: f64,
}

impl From<ScalarRepr> for Scalar {
    fn from(r: ScalarRepr) -> Self {
        match r {
            ScalarRepr::Real(x) => Scalar(Complex64::new(x, 0.0)),
            ScalarRepr::Pair([re, im]) => Scalar(Complex64::new(re, im)),
            ScalarRepr::Object(o) => Scalar(Complex64::new(o.re, o.im)),
        }
    }
}

impl From<Scalar> for ScalarObject {
    fn from(s: Scalar) -> Self {
        ScalarObject {
            re: s.0.re,
            im: s.0.im,
        }
    }
}

impl From<Complex64> for Scalar {
    fn from(z: Complex64) -> Self {
        Scalar(z)
    }
}

fn values(xs: &[Scalar]) -> Vec<Complex64> {
    xs.iter().map(|s| s.0).collect()
}

/// Coefficient table in lexicographic order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesTable {
    pub caps: Vec<usize>,
    pub coeffs: Vec<Scalar>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum SymbolConfig {
    JSymmetric {
        a: Scalar,
        c: Vec<Scalar>,
        d: Vec<Scalar>,
    },
    Hermitian {
        a: Scalar,
        c: Vec<Scalar>,
        d: Vec<Scalar>,
    },
    #[serde(alias = "explicit-series")]
    ExplicitSeries {
        u: SeriesTable,
        /// One coefficient list per coordinate map.
        v: Vec<Vec<Scalar>>,
    },
}

impl SymbolConfig {
    pub fn family(&self) -> &'static str {
        match self {
            SymbolConfig::JSymmetric { .. } => "j_symmetric",
            SymbolConfig::Hermitian { .. } => "hermitian",
            SymbolConfig::ExplicitSeries { .. } => "explicit_series",
        }
    }
}

/// Caps given as one number for every variable or one per variable.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CapsValue {
    Uniform(usize),
    PerVariable(Vec<usize>),
}

impl CapsValue {
    pub fn resolve(&self, n: usize, what: &str) -> Result<Caps, CliError> {
        match self {
            CapsValue::Uniform(c) => Ok(Caps::uniform(n, *c)),
            CapsValue::PerVariable(v) if v.len() == n => Ok(Caps::new(v.clone())),
            CapsValue::PerVariable(v) => Err(CliError::Invalid(format!(
                "{what} caps list has {} entries for {n} variables",
                v.len()
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CapsConfig {
    #[serde(default = "defaults::block")]
    pub block: CapsValue,
    /// Inner caps of the tall sections; defaults to `block + 20`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inner: Option<CapsValue>,
    #[serde(default = "defaults::ladder")]
    pub ladder: Vec<usize>,
    /// Row caps of matrix dumps; defaults to `block`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rows: Option<CapsValue>,
    /// Column caps of matrix dumps; defaults to `block`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cols: Option<CapsValue>,
}

impl Default for CapsConfig {
    fn default() -> Self {
        CapsConfig {
            block: defaults::block(),
            inner: None,
            ladder: defaults::ladder(),
            rows: None,
            cols: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    #[serde(default = "defaults::symmetry_tol")]
    pub symmetry: f64,
    #[serde(default = "defaults::normal_tol")]
    pub normal: f64,
    #[serde(default = "defaults::rank_tol")]
    pub rank: f64,
    /// Growth allowed over the last two ladder rungs.
    #[serde(default = "defaults::ladder_variation")]
    pub ladder_variation: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            symmetry: defaults::symmetry_tol(),
            normal: defaults::normal_tol(),
            rank: defaults::rank_tol(),
            ladder_variation: defaults::ladder_variation(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    JSymmetry,
    Hermitian,
    Normal,
    Kernel,
    Norms,
    Classify,
}

impl CheckKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CheckKind::JSymmetry => "j_symmetry",
            CheckKind::Hermitian => "hermitian",
            CheckKind::Normal => "normal",
            CheckKind::Kernel => "kernel",
            CheckKind::Norms => "norms",
            CheckKind::Classify => "classify",
        }
    }
}

/// One sweep axis: `param` is `a`, `c`, `d` (all coordinates) or `c[i]`, `d[i]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridAxis {
    pub param: String,
    pub values: Vec<Scalar>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputPaths {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub n: usize,
    pub k: Vec<usize>,
    pub symbol: SymbolConfig,
    #[serde(default)]
    pub caps: CapsConfig,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub checks: Vec<CheckKind>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sweep: Vec<GridAxis>,
    #[serde(default)]
    pub output: OutputPaths,
}

impl ExperimentConfig {
    /// Reads a `.json` file as JSON and anything else as TOML.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Invalid(format!("cannot read {}: {e}", path.display())))?;
        let is_json = path
            .extension()
            .is_some_and(|e| e.eq_ignore_ascii_case("json"));
        let config = if is_json {
            Self::from_json(&text)?
        } else {
            Self::from_toml(&text)?
        };
        config.validate()?;
        Ok(config)
    }

    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Invalid(format!("config: {e}")))
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Invalid(format!("config: {e}")))
    }

    pub fn orders(&self) -> MultiIndex {
        MultiIndex::new(self.k.clone())
    }

    pub fn block_caps(&self) -> Result<Caps, CliError> {
        self.caps.block.resolve(self.n, "block")
    }

    pub fn inner_caps(&self) -> Result<Caps, CliError> {
        match &self.caps.inner {
            Some(v) => v.resolve(self.n, "inner"),
            None => Ok(Caps::new(
                self.block_caps()?
                    .as_slice()
                    .iter()
                    .map(|c| c + defaults::INNER_PADDING)
                    .collect(),
            )),
        }
    }

    pub fn row_caps(&self) -> Result<Caps, CliError> {
        self.caps
            .rows
            .as_ref()
            .map_or_else(|| self.block_caps(), |v| v.resolve(self.n, "row"))
    }

    pub fn col_caps(&self) -> Result<Caps, CliError> {
        self.caps
            .cols
            .as_ref()
            .map_or_else(|| self.block_caps(), |v| v.resolve(self.n, "column"))
    }

    /// Structural checks plus every predicate of the symbol constructors.
    pub fn validate(&self) -> Result<(), CliError> {
        if self.n == 0 {
            return Err(CliError::Invalid("n must be at least 1".into()));
        }
        if self.k.len() != self.n {
            return Err(CliError::Invalid(format!(
                "k has {} entries for n = {}",
                self.k.len(),
                self.n
            )));
        }
        self.block_caps()?;
        self.inner_caps()?;
        self.row_caps()?;
        self.col_caps()?;
        self.spec()?;
        Ok(())
    }

    /// The operator described by the symbol block.
    pub fn spec(&self) -> Result<OperatorSpec, CliError> {
        let k = self.orders();
        if k.arity() != self.n {
            return Err(CliError::Invalid(format!(
                "k has {} entries for n = {}",
                k.arity(),
                self.n
            )));
        }
        let spec = match &self.symbol {
            SymbolConfig::JSymmetric { a, c, d } => {
                j_symmetric_family(a.0, &values(c), &values(d), &k)?
            }
            SymbolConfig::Hermitian { a, c, d } => {
                hermitian_family(a.0, &values(c), &values(d), &k)?
            }
            SymbolConfig::ExplicitSeries { u, v } => {
                let table = TruncatedSeries::from_coeffs(u.caps.clone(), values(&u.coeffs))?;
                let maps = v
                    .iter()
                    .map(|coeffs| {
                        if coeffs.is_empty() {
                            return Err(CliError::Invalid("empty coordinate map table".into()));
                        }
                        Ok(CoordinateMap::Series(TruncatedSeries::univariate(values(
                            coeffs,
                        ))))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                OperatorSpec::new(Symbol::Series(table), maps, k)?
            }
        };
        if spec.arity() != self.n {
            return Err(CliError::Invalid(format!(
                "symbol has {} variables for n = {}",
                spec.arity(),
                self.n
            )));
        }
        Ok(spec)
    }

    /// Copy with one grid value substituted.
    pub fn with_parameter(&self, param: &str, value: Complex64) -> Result<Self, CliError> {
        let mut out = self.clone();
        let (a, c, d) = match &mut out.symbol {
            SymbolConfig::JSymmetric { a, c, d } | SymbolConfig::Hermitian { a, c, d } => (a, c, d),
            SymbolConfig::ExplicitSeries { .. } => {
                return Err(CliError::Invalid("sweeps need a closed-form family".into()))
            }
        };
        let bad = || CliError::Invalid(format!("unknown sweep parameter `{param}`"));
        match param {
            "a" => *a = Scalar(value),
            "c" => c.iter_mut().for_each(|x| *x = Scalar(value)),
            "d" => d.iter_mut().for_each(|x| *x = Scalar(value)),
            _ => {
                let (name, rest) = param.split_at(1);
                let i: usize = rest
                    .strip_prefix('[')
                    .and_then(|r| r.strip_suffix(']'))
                    .and_then(|r| r.parse().ok())
                    .ok_or_else(bad)?;
                let list = match name {
                    "c" => c,
                    "d" => d,
                    _ => return Err(bad()),
                };
                let slot = list.get_mut(i).ok_or_else(|| {
                    CliError::Invalid(format!("sweep parameter `{param}` out of range"))
                })?;
                *slot = Scalar(value);
            }
        }
        Ok(out)
    }
}
