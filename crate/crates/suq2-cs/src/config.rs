//! Run configuration shared by the command-line front end and the
//! verification suites.

use serde::{Deserialize, Serialize};

use crate::basis::Truncation;
use crate::cocycles::{Normalization, Phi1Route};
use crate::error::{Error, Result};
use crate::rep::Rep;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    pub relation: f64,
    pub symbol_residue: f64,
    pub dimension_spectrum: f64,
    pub trace_identity: f64,
    pub phi3_routes: f64,
    pub closed_form: f64,
    pub index_pairing: f64,
    pub gauge_shift_rel: f64,
    pub gradient_rel: f64,
    pub reduction: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            relation: 1e-12,
            symbol_residue: 1e-3,
            dimension_spectrum: 1e-3,
            trace_identity: 1e-6,
            phi3_routes: 1e-2,
            closed_form: 1e-10,
            index_pairing: 0.05,
            gauge_shift_rel: 0.02,
            gradient_rel: 1e-6,
            reduction: 1e-12,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct Config {
    pub q: f64,
    pub m_max: u32,
    pub guard: u32,
    pub k_cut: u32,
    pub k_level: i64,
    pub n_matrix: u8,
    pub seed: u64,
    pub phi1_route: Phi1Route,
    pub normalization: Normalization,
    pub tolerances: Tolerances,
    pub out_dir: Option<String>,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            q: 0.5,
            m_max: 80,
            guard: 8,
            k_cut: 2,
            k_level: 1,
            n_matrix: 2,
            seed: 7,
            phi1_route: Phi1Route::Symbolic,
            normalization: Normalization::Consistent,
            tolerances: Tolerances::default(),
            out_dir: None,
        }
    }
}

impl Config {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..1.0).contains(&self.q) {
            return Err(Error::Config(format!("q = {} outside [0, 1)", self.q)));
        }
        if self.guard > self.m_max {
            return Err(Error::Config(format!(
                "guard {} exceeds m_max {}",
                self.guard, self.m_max
            )));
        }
        if self.m_max < 24 {
            return Err(Error::Config("m_max below 24 leaves no fit window".into()));
        }
        if self.n_matrix == 0 || self.n_matrix > 4 {
            return Err(Error::Config("n_matrix must be 1..=4".into()));
        }
        if self.k_level == 0 {
            return Err(Error::Config("level k must be a nonzero integer".into()));
        }
        Ok(())
    }

    pub fn truncation(&self) -> Result<Truncation> {
        Truncation::new(self.m_max, self.guard)
    }

    pub fn rep(&self) -> Result<Rep> {
        self.validate()?;
        Rep::new(self.q, self.truncation()?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Config = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }
}
