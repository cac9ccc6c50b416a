//! The relativistic integral F_q(η,β): the five expansion families and an
//! automatic regime dispatcher.
//!
//! Assembly for generic q (also used by the large-β expansion):
//!
//! ```text
//! F_q(η,β) = (2/β)^{q+1} Γ(−q−3/2)Γ(q+1)/Γ(−1/2) · F^(1)
//!          + (2/β)^{−1/2} Γ(q+3/2)               · F^(2),
//! ```
//!
//! and for half-integer q = m − 3/2:
//!
//! ```text
//! F_q(η,β) = Γ(m−1/2) (2/β)^{m−1/2} (F^(P) + F^(Q)) + F^(R) [+ F^(S)].
//! ```

use crate::coefficients::{self, CoefficientCache};
use crate::config::EvalConfig;
use crate::error::{FdError, Result};
use crate::fd_standard::{fd_std_eval, fd_std_int_exact, fhat, phi1, psi_aux};
use crate::kummer::{
    classify_q, kummer_m, kummer_u_asymptotic, kummer_u_logcase, kummer_u_quad, QClass, UqSpec,
};
use crate::oracle;
use crate::scalar_special::{gamma_real, pochhammer, recip_gamma, sinpi, EULER, GAMMA_NEG_HALF};
use std::sync::OnceLock;

/// One evaluation point (q, η, β).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdParams {
    pub q: f64,
    pub eta: f64,
    pub beta: f64,
}

impl FdParams {
    pub fn new(q: f64, eta: f64, beta: f64) -> Result<Self> {
        if !(q >= 0.0) {
            return Err(FdError::Domain {
                what: "FdParams needs q >= 0",
                value: q,
            });
        }
        if !(beta >= 0.0) {
            return Err(FdError::Domain {
                what: "FdParams needs beta >= 0",
                value: beta,
            });
        }
        if !eta.is_finite() {
            return Err(FdError::Domain {
                what: "FdParams needs finite eta",
                value: eta,
            });
        }
        Ok(FdParams { q, eta, beta })
    }

    pub fn qclass(&self) -> QClass {
        classify_q(self.q)
    }
}

/// Which expansion produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Auto,
    NegEtaSeries,
    LargeEtaGeneric,
    LargeEtaHalfInt,
    SmallBeta,
    LargeBetaGeneric,
    LargeBetaHalfInt,
    Quadrature,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Auto => "auto",
            Method::NegEtaSeries => "neg-eta-series",
            Method::LargeEtaGeneric => "large-eta-generic",
            Method::LargeEtaHalfInt => "large-eta-half-int",
            Method::SmallBeta => "small-beta",
            Method::LargeBetaGeneric => "large-beta-generic",
            Method::LargeBetaHalfInt => "large-beta-half-int",
            Method::Quadrature => "quadrature",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Value, heuristic error estimate (first omitted or last added term), series
/// length and the expansion used.
#[derive(Debug, Clone, Copy)]
pub struct EvalResult {
    pub value: f64,
    pub err_est: f64,
    pub terms_used: usize,
    pub method: Method,
}

fn coeff_cache() -> &'static CoefficientCache {
    static CACHE: OnceLock<CoefficientCache> = OnceLock::new();
    CACHE.get_or_init(CoefficientCache::new)
}

/// F_k(η) at integer order for any η: the terminating exact form where it
/// applies, the standard dispatcher otherwise.
fn fd_std_int_any(order: u32, eta: f64) -> Result<f64> {
    if eta > 0.0 {
        fd_std_int_exact(order, eta)
    } else {
        Ok(fd_std_eval(order as f64, eta, &EvalConfig::default())?.value)
    }
}

/// Convergent series for η < 0 (reduces to the standard series at β = 0):
/// F_q(η,β) = Γ(q+1) Σ (−1)^{n−1} e^{nη} n^{−q−1} U_q(n,β).
pub fn fd_rel_neg_eta(p: &FdParams, tol: f64) -> Result<EvalResult> {
    fd_rel_neg_eta_with(p, tol, &EvalConfig::default())
}

fn fd_rel_neg_eta_with(p: &FdParams, tol: f64, cfg: &EvalConfig) -> Result<EvalResult> {
    if !(p.eta < 0.0) {
        return Err(FdError::Domain {
            what: "fd_rel_neg_eta needs eta < 0",
            value: p.eta,
        });
    }
    let gamma_q1 = gamma_real(p.q + 1.0)?;
    let spec = UqSpec::new(p.q, p.beta)?;
    let mut sum = 0.0f64;
    let mut last = 0.0f64;
    for n in 1..=cfg.max_series_terms {
        let nf = n as f64;
        let slow = crate::kummer::u_q_with(&spec, nf, cfg.z_connect, cfg.z_switch, tol)?;
        let term = if n % 2 == 1 { 1.0 } else { -1.0 } * (nf * p.eta).exp()
            / nf.powf(p.q + 1.0)
            * slow;
        sum += term;
        last = term.abs();
        if last <= tol * sum.abs() {
            return Ok(EvalResult {
                value: gamma_q1 * sum,
                err_est: gamma_q1 * last,
                terms_used: n,
                method: Method::NegEtaSeries,
            });
        }
    }
    Err(FdError::Convergence {
        context: "fd_rel_neg_eta series",
        achieved: last,
        steps: cfg.max_series_terms,
    })
}

/// Large-η expansion for q not half-integer.
///
/// F^(1) is the convergent series Σ (−1)^n e^{−nη} M(q+1; q+5/2; −2n/β);
/// F^(2) couples an asymptotic series in 1/η over the a_n coefficients with an
/// exponentially small convergent series weighted by sin(πq). The latter
/// improves moderate-η accuracy and can be disabled.
///
/// `n_terms` is the highest retained index of the asymptotic series (indices
/// 0..=n_terms), cut earlier at the smallest term.
pub fn fd_rel_large_eta_generic(
    p: &FdParams,
    n_terms: usize,
    include_exp_small: bool,
) -> Result<EvalResult> {
    let qc = p.qclass();
    if !qc.is_generic() {
        return Err(FdError::Usage(format!(
            "large-eta generic expansion needs non-half-integer q, got q = {}",
            p.q
        )));
    }
    if !(p.eta > 0.0) || !(p.beta > 0.0) {
        return Err(FdError::Domain {
            what: "fd_rel_large_eta_generic needs eta > 0 and beta > 0",
            value: if p.eta > 0.0 { p.beta } else { p.eta },
        });
    }
    let (q, eta, beta) = (p.q, p.eta, p.beta);
    let series_tol = 1e-15;

    // F^(1): n = 0 term is M(·,·,0) = 1
    let mut f1 = 1.0f64;
    let mut f1_terms = 1usize;
    for n in 1..=300usize {
        let nf = n as f64;
        let m = kummer_m(q + 1.0, q + 2.5, -2.0 * nf / beta, series_tol)?;
        let term = if n % 2 == 0 { 1.0 } else { -1.0 } * (-nf * eta).exp() * m;
        f1 += term;
        f1_terms += 1;
        if term.abs() <= series_tol * f1.abs() {
            break;
        }
    }

    // F^(2), asymptotic part (indices 0..=n_terms) with optimal truncation.
    // The a_n sawtooth between even and odd indices (the τ series feeds only
    // even offsets), so the growth test looks back two terms.
    let a = coeff_cache().a_coeffs(q, beta, n_terms + 2)?;
    let mut f2 = 0.0f64;
    let mut used = 0usize;
    let mut prev = [f64::INFINITY; 2];
    let mut omitted = 0.0f64;
    for (n, &an) in a.iter().enumerate().take(n_terms + 1) {
        let term = an * recip_gamma(q + 2.5 - n as f64) * eta.powf(q + 1.5 - n as f64);
        if term.abs() > prev[0].max(prev[1]) {
            omitted = term.abs();
            break;
        }
        f2 += term;
        used += 1;
        prev = [prev[1], term.abs()];
        // the sawtooth makes the single next term an underestimate; look at
        // the next two
        let t_at = |j: usize| {
            (a[j] * recip_gamma(q + 2.5 - j as f64) * eta.powf(q + 1.5 - j as f64)).abs()
        };
        omitted = t_at(n + 1).max(t_at(n + 2));
    }

    // exponentially small convergent series, identically zero at integer q
    let mut exp_terms = 0usize;
    if include_exp_small {
        let s = sinpi(q);
        if s != 0.0 {
            // the n^{−q−3/2} weight is forced by the β → 0 limit, which has
            // to reproduce the cos(πq) reflection of the standard integral
            let mut acc = 0.0f64;
            for n in 1..=300usize {
                let nf = n as f64;
                let m = kummer_m(-0.5, -q - 0.5, -2.0 * nf / beta, series_tol)?;
                let term = if n % 2 == 0 { 1.0 } else { -1.0 } * (-nf * eta).exp()
                    / nf.powf(q + 1.5)
                    * m;
                acc += term;
                exp_terms += 1;
                if term.abs() <= series_tol * acc.abs().max(1e-300) {
                    break;
                }
            }
            f2 += s * acc;
        }
    }

    let pre1 = (2.0 / beta).powf(q + 1.0) * gamma_real(-q - 1.5)? * gamma_real(q + 1.0)?
        / GAMMA_NEG_HALF;
    let pre2 = (2.0 / beta).powf(-0.5) * gamma_real(q + 1.5)?;
    let value = pre1 * f1 + pre2 * f2;
    Ok(EvalResult {
        value,
        err_est: (pre2 * omitted).abs().max(f64::EPSILON * value.abs()),
        terms_used: used + f1_terms + exp_terms,
        method: Method::LargeEtaGeneric,
    })
}

/// Large-η expansion for half-integer q = m − 3/2, m ≥ 2:
/// Γ(m−1/2)(2/β)^{m−1/2}(F^(P) + F^(Q)) + F^(R) + F^(S); `n_terms` is the
/// highest index of the F^(P) series.
pub fn fd_rel_large_eta_halfint(p: &FdParams, n_terms: usize) -> Result<EvalResult> {
    let QClass::HalfInteger { m } = p.qclass() else {
        return Err(FdError::Usage(format!(
            "large-eta half-integer expansion needs q = m - 3/2, m >= 2, got q = {}",
            p.q
        )));
    };
    if !(p.eta > 0.0) || !(p.beta > 0.0) {
        return Err(FdError::Domain {
            what: "fd_rel_large_eta_halfint needs eta > 0 and beta > 0",
            value: if p.eta > 0.0 { p.beta } else { p.eta },
        });
    }
    let (eta, beta) = (p.eta, p.beta);
    let mf = m as f64;
    let fam = coeff_cache().pqr_family(m, beta, n_terms + 2)?;

    // F^(P) = A_m (−(γ + ln η) p_{m,0} + Σ_k (−1)^k p_{m,k} (k−1)! η^{−k});
    // the p_{m,k} sawtooth like the a_n, hence the two-term lookback
    let mut fp = -(EULER + eta.ln()) * fam.p_cauchy[0];
    let mut used = 1usize;
    let mut prev = [f64::INFINITY; 2];
    let mut omitted = 0.0f64;
    let mut fact_km1 = 1.0f64; // (k−1)!
    for k in 1..=n_terms {
        if k > 1 {
            fact_km1 *= (k - 1) as f64;
        }
        let term = if k % 2 == 0 { 1.0 } else { -1.0 } * fam.p_cauchy[k] * fact_km1
            / eta.powi(k as i32);
        if term.abs() > prev[0].max(prev[1]) {
            omitted = term.abs();
            break;
        }
        fp += term;
        used += 1;
        prev = [prev[1], term.abs()];
        let t_at = |j: usize, fact: f64| (fam.p_cauchy[j] * fact / eta.powi(j as i32)).abs();
        omitted = t_at(k + 1, fact_km1 * k as f64)
            .max(t_at(k + 2, fact_km1 * (k * (k + 1)) as f64));
    }
    fp *= fam.a_m;

    // F^(Q) = A_m q_{m,0}
    let fq = fam.a_m * fam.q_cauchy[0];

    let fr = fd_rel_f_r(m, eta, beta)?;
    let fs = fd_rel_f_s(m, eta, beta)?;

    let pre = gamma_real(mf - 0.5)? * (2.0 / beta).powf(mf - 0.5);
    let value = pre * (fp + fq) + fr + fs;
    Ok(EvalResult {
        value,
        err_est: (pre * fam.a_m * omitted)
            .abs()
            .max(f64::EPSILON * value.abs()),
        terms_used: used,
        method: Method::LargeEtaHalfInt,
    })
}

/// F^(R): the finite sum over standard Fermi-Dirac integrals of integer order,
/// Σ_{j=0..m−1} (−1)^j (−1/2)_j / j! (2/β)^{j−1/2} F_{m−j−1}(η).
pub fn fd_rel_f_r(m: u32, eta: f64, beta: f64) -> Result<f64> {
    if !(beta > 0.0) {
        return Err(FdError::Domain {
            what: "fd_rel_f_r needs beta > 0",
            value: beta,
        });
    }
    let mut sum = 0.0f64;
    let mut fact_j = 1.0f64;
    for j in 0..m {
        if j > 0 {
            fact_j *= j as f64;
        }
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * pochhammer(-0.5, j) / fact_j
            * (2.0 / beta).powf(j as f64 - 0.5)
            * fd_std_int_any(m - 1 - j, eta)?;
    }
    Ok(sum)
}

/// F^(S): the exponentially small convergent series
/// (√π/2)(2/β)^{m−1/2}(−1)^m Σ (−1)^n e^{−nη−2n/β} U(3/2, m+1, 2n/β).
///
/// Omitted from the large-β half-integer assembly; callers wanting to inspect
/// its magnitude there can evaluate it directly.
pub fn fd_rel_f_s(m: u32, eta: f64, beta: f64) -> Result<f64> {
    if !(beta > 0.0) {
        return Err(FdError::Domain {
            what: "fd_rel_f_s needs beta > 0",
            value: beta,
        });
    }
    let cfg = EvalConfig::default();
    let mut sum = 0.0f64;
    for n in 1..=200usize {
        let nf = n as f64;
        let z = 2.0 * nf / beta;
        let u = if z >= cfg.z_switch {
            kummer_u_asymptotic(1.5, mf64(m) + 1.0, z, 40).0
        } else if z <= cfg.z_connect {
            kummer_u_logcase(1.5, m + 1, z, 1e-15)?
        } else {
            kummer_u_quad(1.5, mf64(m) + 1.0, z, 1e-13)?
        };
        let term = if n % 2 == 0 { 1.0 } else { -1.0 } * (-nf * eta - z).exp() * u;
        sum += term;
        if term.abs() <= 1e-16 * sum.abs().max(1e-300) {
            break;
        }
    }
    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
    Ok(0.5 * std::f64::consts::PI.sqrt() * (2.0 / beta).powf(mf64(m) - 0.5) * sign * sum)
}

fn mf64(m: u32) -> f64 {
    m as f64
}

/// The finite large-β sum of Cox-type form,
/// (β/2)^{1/2} Σ_{k=0..K_q} (−1)^k (−1/2)_k / k! (2/β)^k F_{q+1/2−k}(η),
/// K_q the largest integer with q+1/2−K_q > −1. For half-integer q it equals
/// F^(R) identically.
pub fn cox_finite_sum(q: f64, eta: f64, beta: f64) -> Result<f64> {
    let QClass::HalfInteger { m } = classify_q(q) else {
        return Err(FdError::Usage(format!(
            "cox_finite_sum implemented for half-integer q, got {q}"
        )));
    };
    if !(beta > 0.0) {
        return Err(FdError::Domain {
            what: "cox_finite_sum needs beta > 0",
            value: beta,
        });
    }
    let mut sum = 0.0f64;
    let mut fact_k = 1.0f64;
    for k in 0..m {
        if k > 0 {
            fact_k *= k as f64;
        }
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * pochhammer(-0.5, k) / fact_k
            * (2.0 / beta).powi(k as i32)
            * fd_std_int_any(m - 1 - k, eta)?;
    }
    Ok((beta / 2.0).sqrt() * sum)
}

/// Small-β series Σ (−1)^n (−1/2)_n / n! (β/2)^n F_{q+n}(η) over indices
/// 0..=n_terms; exact at β = 0.
pub fn fd_rel_small_beta(p: &FdParams, n_terms: usize) -> Result<EvalResult> {
    fd_rel_small_beta_with(p, n_terms, &EvalConfig::default())
}

fn fd_rel_small_beta_with(p: &FdParams, n_terms: usize, cfg: &EvalConfig) -> Result<EvalResult> {
    let mut sum = 0.0f64;
    let mut fact_n = 1.0f64;
    let mut used = 0usize;
    for n in 0..=n_terms {
        if n > 0 {
            fact_n *= n as f64;
        }
        let w = if n % 2 == 0 { 1.0 } else { -1.0 } * pochhammer(-0.5, n as u32) / fact_n
            * (p.beta / 2.0).powi(n as i32);
        if w == 0.0 && n > 0 {
            break; // β = 0: only the n = 0 term contributes
        }
        sum += w * fd_std_eval(p.q + n as f64, p.eta, cfg)?.value;
        used += 1;
    }
    let err_est = if p.beta == 0.0 {
        f64::EPSILON * sum.abs()
    } else {
        let n = used;
        let fact = fact_n * if n > 1 { n as f64 } else { 1.0 };
        (pochhammer(-0.5, n as u32) / fact * (p.beta / 2.0).powi(n as i32)
            * fd_std_eval(p.q + n as f64, p.eta, cfg)?.value)
            .abs()
    };
    Ok(EvalResult {
        value: sum,
        err_est,
        terms_used: used,
        method: Method::SmallBeta,
    })
}

/// Large-β expansion for q not half-integer:
/// F^(1) ~ Σ c_k/β^k Φ_k^(1)(η), F^(2) ~ Σ d_k/β^k F̂_{q+1/2−k}(η), assembled
/// with the generic gamma prefactors. The F̂ factors reach orders ≤ −1 for
/// k ≥ q + 3/2 and rely on the analytic continuation.
pub fn fd_rel_large_beta_generic(p: &FdParams, k_max: usize) -> Result<EvalResult> {
    fd_rel_large_beta_generic_with(p, k_max, &EvalConfig::default())
}

fn fd_rel_large_beta_generic_with(
    p: &FdParams,
    k_max: usize,
    cfg: &EvalConfig,
) -> Result<EvalResult> {
    if !p.qclass().is_generic() {
        return Err(FdError::Usage(format!(
            "large-beta generic expansion needs non-half-integer q, got q = {}",
            p.q
        )));
    }
    if !(p.beta > 0.0) {
        return Err(FdError::Domain {
            what: "fd_rel_large_beta_generic needs beta > 0",
            value: p.beta,
        });
    }
    let (q, eta, beta) = (p.q, p.eta, p.beta);
    let cd = coeff_cache().cd_coeffs(q, k_max + 1)?;
    let (c, d) = (&cd.0, &cd.1);

    let mut f1 = 0.0f64;
    let mut f2 = 0.0f64;
    for k in 0..=k_max {
        let bk = beta.powi(k as i32);
        f1 += c[k] / bk * phi1(k, eta);
        f2 += d[k] / bk * fhat(q + 0.5 - k as f64, eta, cfg.fhat_tol)?;
    }

    let pre1 = (2.0 / beta).powf(q + 1.0) * gamma_real(-q - 1.5)? * gamma_real(q + 1.0)?
        / GAMMA_NEG_HALF;
    let pre2 = (2.0 / beta).powf(-0.5) * gamma_real(q + 1.5)?;
    let value = pre1 * f1 + pre2 * f2;

    let bk1 = beta.powi(k_max as i32 + 1);
    let omit1 = pre1 * c[k_max + 1] / bk1 * phi1(k_max + 1, eta);
    let omit2 = pre2 * d[k_max + 1] / bk1 * fhat(q + 0.5 - (k_max as f64 + 1.0), eta, cfg.fhat_tol)?;
    Ok(EvalResult {
        value,
        err_est: omit1.abs().max(omit2.abs()).max(f64::EPSILON * value.abs()),
        terms_used: k_max + 1,
        method: Method::LargeBetaGeneric,
    })
}

/// Large-β expansion for half-integer q = m − 3/2:
/// F^(P) ~ A_m Σ P̃_{m,k}/β^k Ψ_k(η), F^(Q) ~ A_m Σ Q̃_{m,k}/β^k Φ_k^(1)(η),
/// plus the same F^(R) as at large η (no F^(S) term in this assembly).
pub fn fd_rel_large_beta_halfint(p: &FdParams, k_max: usize) -> Result<EvalResult> {
    fd_rel_large_beta_halfint_with(p, k_max, &EvalConfig::default())
}

fn fd_rel_large_beta_halfint_with(
    p: &FdParams,
    k_max: usize,
    cfg: &EvalConfig,
) -> Result<EvalResult> {
    let QClass::HalfInteger { m } = p.qclass() else {
        return Err(FdError::Usage(format!(
            "large-beta half-integer expansion needs q = m - 3/2, m >= 2, got q = {}",
            p.q
        )));
    };
    if !(p.beta > 0.0) {
        return Err(FdError::Domain {
            what: "fd_rel_large_beta_halfint needs beta > 0",
            value: p.beta,
        });
    }
    let (eta, beta) = (p.eta, p.beta);
    let mf = m as f64;
    let a_m = coefficients::a_m(m);
    let tilde = coeff_cache().tilde_pq(m, beta, k_max + 1)?;
    let (pt, qt) = (&tilde.0, &tilde.1);

    let mut fp = 0.0f64;
    let mut fq = 0.0f64;
    for k in 0..=k_max {
        let bk = beta.powi(k as i32);
        fp += pt[k] / bk * psi_aux(k, eta, cfg.fhat_tol)?;
        fq += qt[k] / bk * phi1(k, eta);
    }
    fp *= a_m;
    fq *= a_m;

    let pre = gamma_real(mf - 0.5)? * (2.0 / beta).powf(mf - 0.5);
    let value = pre * (fp + fq) + fd_rel_f_r(m, eta, beta)?;

    let bk1 = beta.powi(k_max as i32 + 1);
    let omit = pre * a_m / bk1
        * (pt[k_max + 1] * psi_aux(k_max + 1, eta, cfg.fhat_tol)?
            + qt[k_max + 1] * phi1(k_max + 1, eta));
    Ok(EvalResult {
        value,
        err_est: omit.abs().max(f64::EPSILON * value.abs()),
        terms_used: k_max + 1,
        method: Method::LargeBetaHalfInt,
    })
}

/// Evaluate F_q(η,β) by the requested method, or route automatically.
///
/// Auto routing: η ≤ −1/2 → the convergent series; β ≤ β_small → small-β
/// (the large-η and large-β kernels carry 2/β powers, so β = 0 must resolve
/// here first); η ≥ η_big → large-η by q class; β ≥ β_big → large-β by q
/// class; otherwise quadrature of the defining integral.
pub fn fd_rel_eval(p: &FdParams, method: Method, cfg: &EvalConfig) -> Result<EvalResult> {
    let qc = p.qclass();
    match method {
        Method::Auto => {
            if p.eta <= cfg.eta_neg_switch {
                fd_rel_eval(p, Method::NegEtaSeries, cfg)
            } else if p.beta <= cfg.beta_small {
                fd_rel_eval(p, Method::SmallBeta, cfg)
            } else if p.eta >= cfg.eta_big {
                match qc {
                    QClass::HalfInteger { .. } => fd_rel_eval(p, Method::LargeEtaHalfInt, cfg),
                    _ => fd_rel_eval(p, Method::LargeEtaGeneric, cfg),
                }
            } else if p.beta >= cfg.beta_big {
                match qc {
                    QClass::HalfInteger { .. } => fd_rel_eval(p, Method::LargeBetaHalfInt, cfg),
                    _ => fd_rel_eval(p, Method::LargeBetaGeneric, cfg),
                }
            } else {
                fd_rel_eval(p, Method::Quadrature, cfg)
            }
        }
        Method::NegEtaSeries => fd_rel_neg_eta_with(p, cfg.series_tol, cfg),
        Method::LargeEtaGeneric => {
            fd_rel_large_eta_generic(p, cfg.n_terms_large_eta, cfg.include_exp_small)
        }
        Method::LargeEtaHalfInt => fd_rel_large_eta_halfint(p, cfg.n_terms_large_eta),
        Method::SmallBeta => fd_rel_small_beta_with(p, cfg.n_terms_small_beta, cfg),
        Method::LargeBetaGeneric => fd_rel_large_beta_generic_with(p, cfg.k_max_large_beta, cfg),
        Method::LargeBetaHalfInt => fd_rel_large_beta_halfint_with(p, cfg.k_max_large_beta, cfg),
        Method::Quadrature => {
            let out = oracle::quad_fd_rel(p, cfg.oracle_tol)?;
            Ok(EvalResult {
                value: out.value,
                err_est: out.abs_err_est,
                terms_used: out.evaluations,
                method: Method::Quadrature,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn params(q: f64, eta: f64, beta: f64) -> FdParams {
        FdParams::new(q, eta, beta).unwrap()
    }

    #[test]
    fn params_validation() {
        assert!(FdParams::new(-0.5, 0.0, 0.0).is_err());
        assert!(FdParams::new(1.0, 0.0, -1.0).is_err());
        assert!(FdParams::new(1.0, f64::NAN, 1.0).is_err());
    }

    #[test]
    fn neg_eta_reduces_to_standard_at_beta_zero() {
        let p = params(0.75, -3.0, 0.0);
        let rel = fd_rel_neg_eta(&p, 1e-14).unwrap();
        let std = crate::fd_standard::fd_std_neg_eta(0.75, -3.0, 1e-14).unwrap();
        assert_relative_eq!(rel.value, std.value, max_relative = 1e-14);
    }

    #[test]
    fn neg_eta_term_counts() {
        let r = fd_rel_neg_eta(&params(0.75, -20.0, 4.0 / 3.0), 1e-14).unwrap();
        assert!(r.terms_used <= 4, "terms_used = {}", r.terms_used);
        let r = fd_rel_neg_eta(&params(0.75, -7.0, 10.5), 1e-14).unwrap();
        assert!(r.terms_used <= 10, "terms_used = {}", r.terms_used);
    }

    #[test]
    fn small_beta_exact_at_zero() {
        let p = params(1.2, 2.0, 0.0);
        let r = fd_rel_small_beta(&p, 7).unwrap();
        let std = fd_std_eval(1.2, 2.0, &EvalConfig::default()).unwrap();
        assert_eq!(r.terms_used, 1);
        assert_relative_eq!(r.value, std.value, max_relative = 1e-14);
    }

    #[test]
    fn diagnostic_terms_reject_beta_zero() {
        assert!(fd_rel_f_r(3, 4.5, 0.0).is_err());
        assert!(fd_rel_f_s(3, 4.5, 0.0).is_err());
        assert!(cox_finite_sum(1.5, 4.5, 0.0).is_err());
    }

    #[test]
    fn cox_sum_equals_f_r_for_half_integers() {
        for &q in &[1.5f64, 2.5] {
            let m = (q + 1.5).round() as u32;
            for &(eta, beta) in &[(4.5, 20.0), (10.0, 50.0)] {
                let cox = cox_finite_sum(q, eta, beta).unwrap();
                let fr = fd_rel_f_r(m, eta, beta).unwrap();
                assert_relative_eq!(cox, fr, max_relative = 1e-13);
            }
        }
        assert!(cox_finite_sum(1.2, 4.5, 20.0).is_err());
    }

    #[test]
    fn dispatcher_routes_by_regime() {
        let cfg = EvalConfig::default();
        let r = fd_rel_eval(&params(0.75, -7.0, 4.0 / 3.0), Method::Auto, &cfg).unwrap();
        assert_eq!(r.method, Method::NegEtaSeries);
        let r = fd_rel_eval(&params(1.5, 25.0, 10.5), Method::Auto, &cfg).unwrap();
        assert_eq!(r.method, Method::LargeEtaHalfInt);
        let r = fd_rel_eval(&params(2.4, 4.5, 50.0), Method::Auto, &cfg).unwrap();
        assert_eq!(r.method, Method::LargeBetaGeneric);
        let r = fd_rel_eval(&params(2.4, 4.5, 10.0), Method::Auto, &cfg).unwrap();
        assert_eq!(r.method, Method::Quadrature);
        let r = fd_rel_eval(&params(2.4, 25.0, 0.0), Method::Auto, &cfg).unwrap();
        assert_eq!(r.method, Method::SmallBeta);
    }

    #[test]
    fn dispatcher_rejects_incompatible_method() {
        let cfg = EvalConfig::default();
        assert!(fd_rel_eval(&params(1.5, 25.0, 1.0), Method::LargeEtaGeneric, &cfg).is_err());
        assert!(fd_rel_eval(&params(1.2, 25.0, 1.0), Method::LargeEtaHalfInt, &cfg).is_err());
        assert!(fd_rel_eval(&params(1.2, 2.0, 1.0), Method::NegEtaSeries, &cfg).is_err());
    }

    #[test]
    fn method_names_round_trip() {
        for m in [
            Method::Auto,
            Method::NegEtaSeries,
            Method::LargeEtaGeneric,
            Method::LargeEtaHalfInt,
            Method::SmallBeta,
            Method::LargeBetaGeneric,
            Method::LargeBetaHalfInt,
            Method::Quadrature,
        ] {
            assert!(!m.name().is_empty());
        }
    }
}
