//! Evaluation thresholds and term budgets.
//!
//! The defaults reproduce the settings used for the shipped accuracy tables
//! (10 terms in the large-η expansions, 8 Sommerfeld terms inside F^(R),
//! k ≤ 5 in the large-β expansions). Everything can be overridden through a
//! `key = value` config file or programmatically.

use crate::error::{FdError, Result};

/// Thresholds and budgets for [`crate::fd_relativistic::fd_rel_eval`] and friends.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalConfig {
    /// Auto dispatch: η at or below this uses the convergent negative-η series.
    pub eta_neg_switch: f64,
    /// Auto dispatch: η at or above this uses the large-η expansions.
    pub eta_big: f64,
    /// Auto dispatch: β at or above this uses the large-β expansions.
    pub beta_big: f64,
    /// Auto dispatch: β at or below this uses the small-β series.
    pub beta_small: f64,
    /// Kummer-U argument at or above which the divergent asymptotic series is used.
    pub z_switch: f64,
    /// Kummer-U argument at or below which the convergent M/log-case forms are
    /// used. Between `z_connect` and `z_switch` neither form holds full double
    /// precision (the connection formula cancels like e^z) and U is evaluated
    /// from its Laplace integral representation instead.
    pub z_connect: f64,
    /// Relative stopping tolerance for convergent series.
    pub series_tol: f64,
    /// Relative tolerance for the analytically continued F̂ quadratures.
    pub fhat_tol: f64,
    /// Mixed absolute/relative tolerance for the quadrature reference.
    pub oracle_tol: f64,
    /// Highest index retained in the large-η asymptotic series (0..=n).
    pub n_terms_large_eta: usize,
    /// Terms in the Sommerfeld expansion used for standard integrals at large η.
    pub sommerfeld_terms: usize,
    /// Largest index k retained in the large-β expansions (k = 0..=k_max).
    pub k_max_large_beta: usize,
    /// Highest index retained in the small-β series (0..=n).
    pub n_terms_small_beta: usize,
    /// Include the exponentially small convergent series of the large-η
    /// generic expansion.
    pub include_exp_small: bool,
    /// Hard cap on convergent series length before reporting failure.
    pub max_series_terms: usize,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            eta_neg_switch: -0.5,
            eta_big: 15.0,
            beta_big: 30.0,
            beta_small: 0.05,
            z_switch: 40.0,
            z_connect: 10.0,
            series_tol: 1e-14,
            fhat_tol: 1e-13,
            oracle_tol: 1e-13,
            n_terms_large_eta: 10,
            sommerfeld_terms: 8,
            k_max_large_beta: 5,
            n_terms_small_beta: 10,
            include_exp_small: true,
            max_series_terms: 500,
        }
    }
}

impl EvalConfig {
    /// Parse a `key = value` config body ('#' starts a comment). Unknown keys
    /// are rejected so typos do not silently fall back to defaults.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = EvalConfig::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                FdError::Usage(format!("config line {}: expected key = value", lineno + 1))
            })?;
            cfg.set(key.trim(), value.trim())?;
        }
        Ok(cfg)
    }

    /// Set a single option by its config-file key.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        fn num(key: &str, value: &str) -> Result<f64> {
            value
                .parse::<f64>()
                .map_err(|_| FdError::Usage(format!("config key {key}: bad number {value:?}")))
        }
        fn int(key: &str, value: &str) -> Result<usize> {
            value
                .parse::<usize>()
                .map_err(|_| FdError::Usage(format!("config key {key}: bad integer {value:?}")))
        }
        match key {
            "eta_neg_switch" => self.eta_neg_switch = num(key, value)?,
            "eta_big" => self.eta_big = num(key, value)?,
            "beta_big" => self.beta_big = num(key, value)?,
            "beta_small" => self.beta_small = num(key, value)?,
            "z_switch" => self.z_switch = num(key, value)?,
            "z_connect" => self.z_connect = num(key, value)?,
            "series_tol" => self.series_tol = num(key, value)?,
            "fhat_tol" => self.fhat_tol = num(key, value)?,
            "oracle_tol" => self.oracle_tol = num(key, value)?,
            "n_terms_large_eta" => self.n_terms_large_eta = int(key, value)?,
            "sommerfeld_terms" => self.sommerfeld_terms = int(key, value)?,
            "k_max_large_beta" => self.k_max_large_beta = int(key, value)?,
            "n_terms_small_beta" => self.n_terms_small_beta = int(key, value)?,
            "include_exp_small" => {
                self.include_exp_small = match value {
                    "true" | "1" | "on" => true,
                    "false" | "0" | "off" => false,
                    _ => {
                        return Err(FdError::Usage(format!(
                            "config key include_exp_small: bad flag {value:?}"
                        )))
                    }
                }
            }
            "max_series_terms" => self.max_series_terms = int(key, value)?,
            _ => return Err(FdError::Usage(format!("unknown config key {key:?}"))),
        }
        Ok(())
    }
}
