//! Scalar flux loaded from a two-column text table (u, f), interpolated
//! by a natural cubic spline. Lines starting with `#` are header or
//! comment lines.

use std::path::Path;

use crate::error::{FtError, Result};

use super::scalar::{ScalarFlux, ScalarModel};

pub struct TabulatedScalarFlux {
    us: Vec<f64>,
    fs: Vec<f64>,
    /// Spline second derivatives at the nodes.
    m: Vec<f64>,
    inflections: Vec<f64>,
}

impl TabulatedScalarFlux {
    pub fn from_samples(us: Vec<f64>, fs: Vec<f64>) -> Result<Self> {
        if us.len() != fs.len() || us.len() < 4 {
            return Err(FtError::Config(
                "tabulated flux needs at least 4 (u, f) samples".into(),
            ));
        }
        if us.windows(2).any(|w| w[1] <= w[0]) {
            return Err(FtError::Config("tabulated flux grid must be increasing".into()));
        }
        let m = natural_spline_moments(&us, &fs);
        // The spline's second derivative is piecewise linear in u, so its
        // sign changes are grid-bracketed linear roots.
        let mut inflections = Vec::new();
        for k in 0..us.len() - 1 {
            let (m0, m1) = (m[k], m[k + 1]);
            if m0 == 0.0 {
                continue;
            }
            if m0 * m1 < 0.0 {
                let t = m0 / (m0 - m1);
                inflections.push(us[k] + t * (us[k + 1] - us[k]));
            }
        }
        Ok(TabulatedScalarFlux {
            us,
            fs,
            m,
            inflections,
        })
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_text(&text)
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut us = Vec::new();
        let mut fs = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut it = line.split_whitespace();
            let u: f64 = it
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| FtError::Config(format!("line {}: missing u", ln + 1)))?;
            let f: f64 = it
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| FtError::Config(format!("line {}: missing f", ln + 1)))?;
            us.push(u);
            fs.push(f);
        }
        Self::from_samples(us, fs)
    }

    pub fn range(&self) -> (f64, f64) {
        (self.us[0], *self.us.last().unwrap())
    }

    fn locate(&self, u: f64) -> usize {
        match self
            .us
            .binary_search_by(|x| x.partial_cmp(&u).unwrap())
        {
            Ok(k) => k.min(self.us.len() - 2),
            Err(k) => k.saturating_sub(1).min(self.us.len() - 2),
        }
    }
}

impl ScalarFlux for TabulatedScalarFlux {
    fn f(&self, u: f64) -> f64 {
        let k = self.locate(u);
        let h = self.us[k + 1] - self.us[k];
        let a = (self.us[k + 1] - u) / h;
        let b = (u - self.us[k]) / h;
        a * self.fs[k]
            + b * self.fs[k + 1]
            + ((a * a * a - a) * self.m[k] + (b * b * b - b) * self.m[k + 1]) * h * h / 6.0
    }

    fn df(&self, u: f64) -> f64 {
        let k = self.locate(u);
        let h = self.us[k + 1] - self.us[k];
        let a = (self.us[k + 1] - u) / h;
        let b = (u - self.us[k]) / h;
        (self.fs[k + 1] - self.fs[k]) / h
            + ((3.0 * b * b - 1.0) * self.m[k + 1] - (3.0 * a * a - 1.0) * self.m[k]) * h / 6.0
    }

    fn d2f(&self, u: f64) -> f64 {
        let k = self.locate(u);
        let h = self.us[k + 1] - self.us[k];
        let a = (self.us[k + 1] - u) / h;
        let b = (u - self.us[k]) / h;
        a * self.m[k] + b * self.m[k + 1]
    }

    fn inflections(&self) -> &[f64] {
        &self.inflections
    }
}

/// Natural cubic spline second-derivative moments via the tridiagonal
/// Thomas algorithm.
fn natural_spline_moments(us: &[f64], fs: &[f64]) -> Vec<f64> {
    let n = us.len();
    let mut sub = vec![0.0; n];
    let mut diag = vec![1.0; n];
    let mut sup = vec![0.0; n];
    let mut rhs = vec![0.0; n];
    for i in 1..n - 1 {
        let h0 = us[i] - us[i - 1];
        let h1 = us[i + 1] - us[i];
        sub[i] = h0 / 6.0;
        diag[i] = (h0 + h1) / 3.0;
        sup[i] = h1 / 6.0;
        rhs[i] = (fs[i + 1] - fs[i]) / h1 - (fs[i] - fs[i - 1]) / h0;
    }
    for i in 1..n {
        let w = sub[i] / diag[i - 1];
        diag[i] -= w * sup[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    let mut m = vec![0.0; n];
    m[n - 1] = rhs[n - 1] / diag[n - 1];
    for i in (0..n - 1).rev() {
        m[i] = (rhs[i] - sup[i] * m[i + 1]) / diag[i];
    }
    m
}

/// Builds a `ScalarModel` from a tabulated flux file.
pub fn tabulated_model(path: &Path) -> Result<ScalarModel<TabulatedScalarFlux>> {
    let flux = TabulatedScalarFlux::from_file(path)?;
    let (lo, hi) = flux.range();
    Ok(ScalarModel::new("custom", flux, lo, hi))
}
