use std::path::{Path, PathBuf};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Environment variable naming a directory that overrides the bundled
/// permittivity tables.
pub const DATA_DIR_ENV: &str = "NEQCP_DATA_DIR";

const SAPPHIRE_FILE: &str = "sapphire_ordinary.txt";
const SAPPHIRE_BUNDLED: &str = include_str!("../../data/sapphire_ordinary.txt");

/// How values between grid points are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Interpolation {
    /// Linear in ω, applied to Re ε and Im ε independently.
    Linear,
}

/// Permittivity sampled on a strictly increasing frequency grid.
///
/// Queries outside the grid are errors.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedDielectric {
    omega: Vec<f64>,
    eps: Vec<Complex64>,
    rule: Interpolation,
}

impl TabulatedDielectric {
    pub fn new(omega: Vec<f64>, eps: Vec<Complex64>) -> Result<Self> {
        if omega.len() < 2 {
            return Err(Error::Data(format!(
                "permittivity table needs at least 2 points, got {}",
                omega.len()
            )));
        }
        if omega.len() != eps.len() {
            return Err(Error::Data("frequency and permittivity columns differ in length".into()));
        }
        if omega[0] <= 0.0 {
            return Err(Error::Data("table frequencies must be positive".into()));
        }
        if let Some(w) = omega.windows(2).find(|w| !(w[1] > w[0])) {
            return Err(Error::Data(format!(
                "table frequencies not strictly increasing at {:e}",
                w[1]
            )));
        }
        if let Some((w, e)) = omega.iter().zip(&eps).find(|(_, e)| e.im < 0.0) {
            return Err(Error::Data(format!(
                "Im ε = {:e} < 0 at ω = {w:e}: not a passive medium",
                e.im
            )));
        }
        Ok(Self {
            omega,
            eps,
            rule: Interpolation::Linear,
        })
    }

    /// Parses the three-column text format `ω  Re ε  Im ε` (`#` comments allowed).
    pub fn parse(text: &str) -> Result<Self> {
        let mut omega = Vec::new();
        let mut eps = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = line.split_whitespace().collect();
            if cols.len() != 3 {
                return Err(Error::Data(format!(
                    "line {}: expected 3 columns, found {}",
                    lineno + 1,
                    cols.len()
                )));
            }
            let parse = |s: &str| {
                s.parse::<f64>().map_err(|e| {
                    Error::Data(format!("line {}: cannot parse '{s}': {e}", lineno + 1))
                })
            };
            omega.push(parse(cols[0])?);
            eps.push(Complex64::new(parse(cols[1])?, parse(cols[2])?));
        }
        Self::new(omega, eps)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Data(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Ordinary-ray sapphire over 18–27×10¹⁴ rad/s.
    ///
    /// Uses `$NEQCP_DATA_DIR/sapphire_ordinary.txt` when present, otherwise
    /// the table compiled into the library.
    pub fn sapphire() -> Result<Self> {
        match data_dir_override() {
            Some(dir) => {
                let p = dir.join(SAPPHIRE_FILE);
                if p.exists() {
                    return Self::from_file(&p);
                }
                Self::parse(SAPPHIRE_BUNDLED)
            }
            None => Self::parse(SAPPHIRE_BUNDLED),
        }
    }

    pub fn bundled_sapphire() -> Self {
        Self::parse(SAPPHIRE_BUNDLED).expect("bundled sapphire table is valid")
    }

    pub fn range(&self) -> (f64, f64) {
        (self.omega[0], *self.omega.last().unwrap())
    }

    pub fn interpolation(&self) -> Interpolation {
        self.rule
    }

    pub fn permittivity(&self, omega: f64) -> Result<Complex64> {
        let (min, max) = self.range();
        if !(omega >= min && omega <= max) {
            return Err(Error::Tabulation { omega, min, max });
        }
        let i = match self.omega.binary_search_by(|w| w.total_cmp(&omega)) {
            Ok(i) => return Ok(self.eps[i]),
            Err(i) => i - 1,
        };
        let t = (omega - self.omega[i]) / (self.omega[i + 1] - self.omega[i]);
        Ok(self.eps[i] * (1.0 - t) + self.eps[i + 1] * t)
    }

    /// n = √ε (principal branch).
    pub fn refractive_index(&self, omega: f64) -> Result<Complex64> {
        Ok(self.permittivity(omega)?.sqrt())
    }
}

fn data_dir_override() -> Option<PathBuf> {
    std::env::var_os(DATA_DIR_ENV).map(PathBuf::from)
}
