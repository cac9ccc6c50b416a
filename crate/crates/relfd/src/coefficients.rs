//! Expansion-coefficient families and their cache.
//!
//! * `a_n` — large-η generic q: Cauchy product of the τ series with the
//!   Taylor coefficients of ₁F₁(−1/2; −q−1/2; 2s/β) in s.
//! * `A_m`, `P/Q/R_{m,k}` and the τ-convolved `p/q_{m,k}` — half-integer q.
//! * `c_k`, `d_k` — large-β generic q.
//! * `P̃/Q̃_{m,k}` — large-β half-integer q (P̃_{m,k} = β^k P_{m,k}).
//!
//! Sweeps revisit identical parameter sets thousands of times, so families
//! are memoized per (q or m, β, length) in [`CoefficientCache`].

use crate::error::{FdError, Result};
use crate::scalar_special::{digamma_int_halfint, pochhammer, TauTable, GAMMA_NEG_HALF};
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

fn require_non_half_integer(q: f64, what: &'static str) -> Result<()> {
    let m = q + 1.5;
    if (m - m.round()).abs() < crate::kummer::QCLASS_TOL {
        return Err(FdError::Domain { what, value: q });
    }
    Ok(())
}

/// Taylor coefficient k of ₁F₁(−1/2; −q−1/2; 2s/β) as a series in s:
/// (2/β)^k (−1/2)_k / (k! (−q−1/2)_k).
fn m_series_coeff(q: f64, beta: f64, k: u32) -> f64 {
    let fact_k = (1..=k).fold(1.0f64, |p, i| p * i as f64);
    (2.0 / beta).powi(k as i32) * pochhammer(-0.5, k) / (fact_k * pochhammer(-q - 0.5, k))
}

/// a_0..a_{n_max} for the large-η generic-q expansion.
pub fn a_coeffs(q: f64, beta: f64, n_max: usize) -> Result<Vec<f64>> {
    require_non_half_integer(q, "a_coeffs needs non-half-integer q (use the m-family)")?;
    if !(beta > 0.0) {
        return Err(FdError::Domain {
            what: "a_coeffs needs beta > 0",
            value: beta,
        });
    }
    let tau = TauTable::new(n_max / 2 + 1);
    let m: Vec<f64> = (0..=n_max as u32).map(|k| m_series_coeff(q, beta, k)).collect();
    Ok((0..=n_max)
        .map(|n| (0..=n).map(|j| tau.tau(j) * m[n - j]).sum())
        .collect())
}

/// The half-integer coefficient family for m = q + 3/2 ≥ 2.
#[derive(Debug, Clone, PartialEq)]
pub struct PqrFamily {
    pub a_m: f64,
    /// P_{m,0..k_max}
    pub p_upper: Vec<f64>,
    /// Q_{m,0..k_max}
    pub q_upper: Vec<f64>,
    /// R_{m,1..m} (index 0 holds R_{m,1})
    pub r: Vec<f64>,
    /// p_{m,k} = Σ_j τ_j P_{m,k−j}
    pub p_cauchy: Vec<f64>,
    /// q_{m,k} = Σ_j τ_j Q_{m,k−j}
    pub q_cauchy: Vec<f64>,
}

/// A_m = (−1)^{m+1} / (m! Γ(−1/2)).
pub fn a_m(m: u32) -> f64 {
    let m_fact = (1..=m).fold(1.0f64, |p, i| p * i as f64);
    let sign = if (m + 1) % 2 == 0 { 1.0 } else { -1.0 };
    sign / (m_fact * GAMMA_NEG_HALF)
}

/// A_m, P/Q/R_{m,k} and their τ Cauchy products.
pub fn pqr_family(m: u32, beta: f64, k_max: usize) -> Result<PqrFamily> {
    if m < 2 {
        return Err(FdError::Domain {
            what: "pqr_family needs m >= 2",
            value: m as f64,
        });
    }
    if !(beta > 0.0) {
        return Err(FdError::Domain {
            what: "pqr_family needs beta > 0",
            value: beta,
        });
    }
    let mf = m as f64;
    let a_m = a_m(m);

    let ln_2_over_beta = (2.0 / beta).ln();
    let mut p_upper = Vec::with_capacity(k_max + 1);
    let mut q_upper = Vec::with_capacity(k_max + 1);
    for k in 0..=k_max as u32 {
        let kf = k as f64;
        let fact_k = (1..=k).fold(1.0f64, |p, i| p * i as f64);
        let p_mk = (2.0 / beta).powi(k as i32) * pochhammer(mf - 0.5, k)
            / (fact_k * pochhammer(mf + 1.0, k));
        // ψ(m−1/2+k) − ψ(1+k) − ψ(m+k+1)
        let bracket = ln_2_over_beta + digamma_int_halfint(2 * m - 1 + 2 * k)?
            - digamma_int_halfint(2 + 2 * k)?
            - digamma_int_halfint(2 * (m + k + 1))?;
        p_upper.push(p_mk);
        q_upper.push(p_mk * bracket);
        let _ = kf;
    }

    // R_{m,k} = (2/β)^{−k} (k−1)! (3/2−m+k)_{m−k} / (Γ(m−1/2) (m−k)!), k = 1..m
    let gamma_m_half = crate::scalar_special::gamma_real(mf - 0.5)?;
    let mut r = Vec::with_capacity(m as usize);
    for k in 1..=m {
        let fact_km1 = (1..k).fold(1.0f64, |p, i| p * i as f64);
        let fact_mk = (1..=(m - k)).fold(1.0f64, |p, i| p * i as f64);
        r.push(
            (2.0 / beta).powi(-(k as i32)) * fact_km1
                * pochhammer(1.5 - mf + k as f64, m - k)
                / (gamma_m_half * fact_mk),
        );
    }

    let tau = TauTable::new(k_max / 2 + 1);
    let convolve = |base: &[f64]| -> Vec<f64> {
        (0..=k_max)
            .map(|k| (0..=k).map(|j| tau.tau(j) * base[k - j]).sum())
            .collect()
    };
    let p_cauchy = convolve(&p_upper);
    let q_cauchy = convolve(&q_upper);

    Ok(PqrFamily {
        a_m,
        p_upper,
        q_upper,
        r,
        p_cauchy,
        q_cauchy,
    })
}

/// c_k = 2^k (q+1)_k / (k! (q+5/2)_k) and d_k = 2^k (−1/2)_k / (k! (−q−1/2)_k)
/// of the large-β generic expansion.
pub fn cd_coeffs(q: f64, k_max: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    require_non_half_integer(q, "cd_coeffs needs non-half-integer q")?;
    let mut c = Vec::with_capacity(k_max + 1);
    let mut d = Vec::with_capacity(k_max + 1);
    for k in 0..=k_max as u32 {
        let fact_k = (1..=k).fold(1.0f64, |p, i| p * i as f64);
        let two_k = 2.0f64.powi(k as i32);
        c.push(two_k * pochhammer(q + 1.0, k) / (fact_k * pochhammer(q + 2.5, k)));
        d.push(two_k * pochhammer(-0.5, k) / (fact_k * pochhammer(-q - 0.5, k)));
    }
    Ok((c, d))
}

/// P̃_{m,k} = 2^k (m−1/2)_k / (k! (m+1)_k) and Q̃_{m,k} = P̃_{m,k} · (ln(2/β) + ψ bracket)
/// of the large-β half-integer expansion.
pub fn tilde_pq(m: u32, beta: f64, k_max: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if m < 2 {
        return Err(FdError::Domain {
            what: "tilde_pq needs m >= 2",
            value: m as f64,
        });
    }
    let mf = m as f64;
    let ln_2_over_beta = (2.0 / beta).ln();
    let mut ptilde = Vec::with_capacity(k_max + 1);
    let mut qtilde = Vec::with_capacity(k_max + 1);
    for k in 0..=k_max as u32 {
        let fact_k = (1..=k).fold(1.0f64, |p, i| p * i as f64);
        let p = 2.0f64.powi(k as i32) * pochhammer(mf - 0.5, k) / (fact_k * pochhammer(mf + 1.0, k));
        let bracket = ln_2_over_beta + digamma_int_halfint(2 * m - 1 + 2 * k)?
            - digamma_int_halfint(2 + 2 * k)?
            - digamma_int_halfint(2 * (m + k + 1))?;
        ptilde.push(p);
        qtilde.push(p * bracket);
    }
    Ok((ptilde, qtilde))
}

/// Cache key: the f64 bit patterns make lookups exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Key {
    A { q: u64, beta: u64, n: usize },
    Pqr { m: u32, beta: u64, k: usize },
    Cd { q: u64, k: usize },
    Tilde { m: u32, beta: u64, k: usize },
}

/// Memoized coefficient families, safe for concurrent readers; construction
/// of a missing entry happens under the lock, so each key is built once.
#[derive(Debug, Default)]
pub struct CoefficientCache {
    a: Mutex<HashMap<Key, Arc<Vec<f64>>>>,
    pqr: Mutex<HashMap<Key, Arc<PqrFamily>>>,
    cd: Mutex<HashMap<Key, Arc<(Vec<f64>, Vec<f64>)>>>,
    tilde: Mutex<HashMap<Key, Arc<(Vec<f64>, Vec<f64>)>>>,
}

impl CoefficientCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn a_coeffs(&self, q: f64, beta: f64, n_max: usize) -> Result<Arc<Vec<f64>>> {
        let key = Key::A {
            q: q.to_bits(),
            beta: beta.to_bits(),
            n: n_max,
        };
        let mut guard = self.a.lock().unwrap();
        if let Some(v) = guard.get(&key) {
            return Ok(v.clone());
        }
        let v = Arc::new(a_coeffs(q, beta, n_max)?);
        guard.insert(key, v.clone());
        Ok(v)
    }

    pub fn pqr_family(&self, m: u32, beta: f64, k_max: usize) -> Result<Arc<PqrFamily>> {
        let key = Key::Pqr {
            m,
            beta: beta.to_bits(),
            k: k_max,
        };
        let mut guard = self.pqr.lock().unwrap();
        if let Some(v) = guard.get(&key) {
            return Ok(v.clone());
        }
        let v = Arc::new(pqr_family(m, beta, k_max)?);
        guard.insert(key, v.clone());
        Ok(v)
    }

    pub fn cd_coeffs(&self, q: f64, k_max: usize) -> Result<Arc<(Vec<f64>, Vec<f64>)>> {
        let key = Key::Cd {
            q: q.to_bits(),
            k: k_max,
        };
        let mut guard = self.cd.lock().unwrap();
        if let Some(v) = guard.get(&key) {
            return Ok(v.clone());
        }
        let v = Arc::new(cd_coeffs(q, k_max)?);
        guard.insert(key, v.clone());
        Ok(v)
    }

    pub fn tilde_pq(&self, m: u32, beta: f64, k_max: usize) -> Result<Arc<(Vec<f64>, Vec<f64>)>> {
        let key = Key::Tilde {
            m,
            beta: beta.to_bits(),
            k: k_max,
        };
        let mut guard = self.tilde.lock().unwrap();
        if let Some(v) = guard.get(&key) {
            return Ok(v.clone());
        }
        let v = Arc::new(tilde_pq(m, beta, k_max)?);
        guard.insert(key, v.clone());
        Ok(v)
    }
}
