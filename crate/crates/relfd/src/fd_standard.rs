//! The standard Fermi-Dirac integral F_q(η) = ∫₀^∞ x^q/(e^{x−η}+1) dx in all
//! regimes, the normalized form F̂_q(η) = F_q(η)/Γ(q+1) analytically continued
//! to q ≤ −1, and the auxiliary functions Φ_k^(1), Φ_k^(2), Ψ_k that feed the
//! large-β expansions.
//!
//! The continuation of F̂ rests on a loop-contour representation around the
//! unit interval. On the unit circle z = e^{iθ} the integrand's poles
//! η ± (2k+1)πi stay at distance ≥ π from the origin for every real η, so the
//! θ-quadrature below is valid on the whole real η axis.

use crate::config::EvalConfig;
use crate::error::{FdError, Result};
use crate::fd_relativistic::{EvalResult, Method};
use crate::oracle;
use crate::quad;
use crate::scalar_special::{
    cospi, digamma_int_halfint, gamma_real, recip_gamma, TauTable,
};

/// Below this η the θ-kernel is rescaled by e^{2η} to avoid overflow.
const THETA_RESCALE_ETA: f64 = -30.0;

/// 1/(e^{x−η}+1) without overflow on either side.
pub(crate) fn fermi_factor(x: f64, eta: f64) -> f64 {
    let t = x - eta;
    if t > 0.0 {
        let e = (-t).exp();
        e / (1.0 + e)
    } else {
        1.0 / (t.exp() + 1.0)
    }
}

/// Convergent series for η < 0: F_q(η) = Γ(q+1) Σ (−1)^{n−1} e^{nη} / n^{q+1}.
pub fn fd_std_neg_eta(q: f64, eta: f64, tol: f64) -> Result<EvalResult> {
    if !(eta < 0.0) {
        return Err(FdError::Domain {
            what: "fd_std_neg_eta needs eta < 0",
            value: eta,
        });
    }
    let gamma_q1 = gamma_real(q + 1.0)?;
    let mut sum = 0.0f64;
    let mut terms = 0usize;
    for n in 1..=500usize {
        let nf = n as f64;
        let term = if n % 2 == 1 { 1.0 } else { -1.0 } * (nf * eta).exp() / nf.powf(q + 1.0);
        sum += term;
        terms = n;
        if term.abs() <= tol * sum.abs() {
            return Ok(EvalResult {
                value: gamma_q1 * sum,
                err_est: gamma_q1 * term.abs(),
                terms_used: terms,
                method: Method::NegEtaSeries,
            });
        }
    }
    Err(FdError::Convergence {
        context: "fd_std_neg_eta series",
        achieved: sum,
        steps: terms,
    })
}

/// Sommerfeld expansion for η > 0:
///
/// ```text
/// F_q(η) ~ Γ(q+1) η^{q+1} Σ_n τ_{2n} / (Γ(q+2−2n) η^{2n}) + cos(πq) F_q(−η).
/// ```
///
/// The reflection term carries no extra Γ(q+1) factor (the integer-order
/// identities such as F_2(η) − F_2(−η) = η³/3 + π²η/3 pin this down), vanishes
/// identically for half-integer q, and makes the expansion exact for integer q
/// where the main series terminates.
pub fn fd_std_sommerfeld(q: f64, eta: f64, n_terms: usize) -> Result<EvalResult> {
    if !(eta > 0.0) {
        return Err(FdError::Domain {
            what: "fd_std_sommerfeld needs eta > 0",
            value: eta,
        });
    }
    let n_terms = n_terms.max(1);
    let gamma_q1 = gamma_real(q + 1.0)?;
    let tau = TauTable::new(n_terms + 1);
    let mut main = 0.0f64;
    for n in 0..n_terms {
        // 1/Γ(q+2−2n) is exactly 0 at the nonpositive integers
        main += tau.tau_2n(n) * recip_gamma(q + 2.0 - 2.0 * n as f64)
            / eta.powi(2 * n as i32);
    }
    let lead = gamma_q1 * eta.powf(q + 1.0);
    let omitted = lead
        * (tau.tau_2n(n_terms) * recip_gamma(q + 2.0 - 2.0 * n_terms as f64)
            / eta.powi(2 * n_terms as i32))
        .abs();

    let mut value = lead * main;
    let mut terms_used = n_terms;
    let c = cospi(q);
    if c != 0.0 {
        let reflect = fd_std_neg_eta(q, -eta, 1e-16)?;
        value += c * reflect.value;
        terms_used += reflect.terms_used;
    }
    Ok(EvalResult {
        value,
        err_est: omitted.max(f64::EPSILON * value.abs()),
        terms_used,
        method: Method::LargeEtaGeneric,
    })
}

/// F_k(η) for integer order k ≥ 0 and η > 0, from the terminating Sommerfeld
/// polynomial plus the exact reflection term; accurate to roundoff at any η.
pub fn fd_std_int_exact(order: u32, eta: f64) -> Result<f64> {
    if !(eta > 0.0) {
        return Err(FdError::Domain {
            what: "fd_std_int_exact needs eta > 0",
            value: eta,
        });
    }
    let q = order as f64;
    let gamma_q1 = gamma_real(q + 1.0)?;
    let tau = TauTable::new(order as usize / 2 + 2);
    let mut main = 0.0f64;
    let mut n = 0usize;
    while 2 * n <= order as usize + 1 {
        main += tau.tau_2n(n) * recip_gamma(q + 2.0 - 2.0 * n as f64) / eta.powi(2 * n as i32);
        n += 1;
    }
    let sign = if order % 2 == 0 { 1.0 } else { -1.0 };
    Ok(gamma_q1 * eta.powf(q + 1.0) * main + sign * fd_std_neg_eta(q, -eta, 1e-16)?.value)
}

/// Standard-integral dispatcher: series for η ≤ −1/2, Sommerfeld for large η,
/// quadrature in between.
pub fn fd_std_eval(q: f64, eta: f64, cfg: &EvalConfig) -> Result<EvalResult> {
    if eta <= cfg.eta_neg_switch {
        fd_std_neg_eta(q, eta, cfg.series_tol)
    } else if eta >= cfg.eta_big {
        fd_std_sommerfeld(q, eta, cfg.sommerfeld_terms)
    } else {
        let out = oracle::quad_fd_std(q, eta, cfg.oracle_tol)?;
        Ok(EvalResult {
            value: out.value,
            err_est: out.abs_err_est,
            terms_used: out.evaluations,
            method: Method::Quadrature,
        })
    }
}

/// The two pieces of the normalized integral: `part1` over the unit interval
/// (or its loop-contour continuation) and `part2` over the tail [1, ∞).
#[derive(Debug, Clone, Copy)]
pub struct FhatSplit {
    pub part1: f64,
    pub part2: f64,
    pub q: f64,
    pub eta: f64,
}

impl FhatSplit {
    pub fn total(&self) -> f64 {
        self.part1 + self.part2
    }
}

fn is_nonneg_integer(q: f64) -> bool {
    q >= -crate::kummer::QCLASS_TOL && (q - q.round()).abs() < crate::kummer::QCLASS_TOL
}

fn is_negative_integer(q: f64) -> bool {
    q < 0.0 && (q - q.round()).abs() < crate::kummer::QCLASS_TOL
}

/// F̂_q(η) = F_q(η)/Γ(q+1) for all real q.
///
/// q > −1 (and every nonnegative integer) uses direct quadrature of the
/// defining split; q ≤ −1 uses the θ-form of the loop contour for the unit
/// interval plus the tail quadrature (which vanishes identically at negative
/// integer q).
pub fn fhat(q: f64, eta: f64, tol: f64) -> Result<f64> {
    Ok(fhat_split(q, eta, tol)?.total())
}

/// As [`fhat`], returning the two pieces.
///
/// The θ route takes over already at q ≤ −1/2: the direct route's endpoint
/// substitution x = t^p needs p ~ 1/(q+1) and degenerates toward q = −1.
pub fn fhat_split(q: f64, eta: f64, tol: f64) -> Result<FhatSplit> {
    if q > -0.5 || is_nonneg_integer(q) {
        fhat_direct(q, eta, tol)
    } else {
        fhat_theta(q, eta, tol)
    }
}

/// Direct route, valid for q > −1: both pieces by quadrature of
/// x^q/(e^{x−η}+1), the x = 0 endpoint regularized by x = t^p.
pub fn fhat_direct(q: f64, eta: f64, tol: f64) -> Result<FhatSplit> {
    if !(q > -1.0) {
        return Err(FdError::Domain {
            what: "fhat_direct needs q > -1",
            value: q,
        });
    }
    let inv_gamma = recip_gamma(q + 1.0);
    let part1 = if q >= 0.0 {
        let f = |x: f64| x.powf(q) * fermi_factor(x, eta);
        quad::adaptive_gk(&f, &[0.0, 0.5, 1.0], tol, 0.0, 800)?.value
    } else {
        // x = t^p with p(q+1) − 1 ≥ 1 keeps the integrand C¹ at 0
        let p = (2.0 / (q + 1.0)).ceil() + 1.0;
        let g = move |t: f64| p * t.powf(p * (q + 1.0) - 1.0) * fermi_factor(t.powf(p), eta);
        quad::adaptive_gk(&g, &[0.0, 0.5, 1.0], tol, 0.0, 800)?.value
    } * inv_gamma;
    let part2 = tail_x_integral(q, eta, tol)? * inv_gamma;
    Ok(FhatSplit {
        part1,
        part2,
        q,
        eta,
    })
}

/// ∫₁^∞ x^q/(e^{x−η}+1) dx with the logistic knee split out explicitly.
fn tail_x_integral(q: f64, eta: f64, tol: f64) -> Result<f64> {
    let f = move |x: f64| x.powf(q) * fermi_factor(x, eta);
    let t_start = (2.0 * eta).max(40.0);
    let mut edges = vec![1.0];
    if eta > 1.0 && eta < t_start {
        edges.push(eta);
    }
    edges.push(t_start);
    let head = quad::adaptive_gk(&f, &edges, tol, 0.0, 800)?;
    let tail = quad::adaptive_gk_tail(&f, t_start, &[], tol, tol * head.value.abs(), 400)?;
    Ok(head.value + tail.value)
}

/// θ-kernel of the loop contour on the unit circle, μ = q + 1:
/// returns (f(θ), g(θ)) with
///
/// ```text
/// f = [E cos(μθ + sin θ) + cos(μθ)] / D,
/// g = −θ [E sin(μθ + sin θ) + sin(μθ)] / D,
/// D = 1 + 2 E cos(sin θ) + E²,     E = e^{−η−cos θ},
/// ```
///
/// rescaled by e^{2η} below [`THETA_RESCALE_ETA`] so large negative η cannot
/// overflow the exponentials.
fn theta_kernel(theta: f64, eta: f64, mu: f64) -> (f64, f64) {
    let c = theta.cos();
    let s = theta.sin();
    let phase = mu * theta;
    if eta >= THETA_RESCALE_ETA {
        let e = (-eta - c).exp();
        let den = 1.0 + 2.0 * e * s.cos() + e * e;
        let f = (e * (phase + s).cos() + phase.cos()) / den;
        let g = -theta * (e * (phase + s).sin() + phase.sin()) / den;
        (f, g)
    } else {
        let e1 = (eta - c).exp(); // e^{2η} E
        let e2 = (2.0 * eta).exp();
        let den = e2 + 2.0 * e1 * s.cos() + (-2.0 * c).exp();
        let f = (e1 * (phase + s).cos() + e2 * phase.cos()) / den;
        let g = -theta * (e1 * (phase + s).sin() + e2 * phase.sin()) / den;
        (f, g)
    }
}

/// Loop-contour route, valid for q < 0 (and the only route for q ≤ −1):
/// part1 = Γ(−q)/π ∫₀^π f(θ) dθ, part2 the tail with its 1/Γ(q+1) prefactor
/// (exactly zero at q = −1, −2, …).
pub fn fhat_theta(q: f64, eta: f64, tol: f64) -> Result<FhatSplit> {
    if is_nonneg_integer(q) {
        return Err(FdError::Domain {
            what: "fhat_theta is singular at nonnegative integer q (Γ(−q) pole)",
            value: q,
        });
    }
    let mu = q + 1.0;
    let int_f = quad::gauss_legendre_doubling(
        &|theta| theta_kernel(theta, eta, mu).0,
        0.0,
        std::f64::consts::PI,
        tol,
    )?;
    let part1 = gamma_real(-q)? / std::f64::consts::PI * int_f;
    let part2 = if is_negative_integer(q) {
        0.0
    } else {
        recip_gamma(q + 1.0) * tail_x_integral(q, eta, tol)?
    };
    Ok(FhatSplit {
        part1,
        part2,
        q,
        eta,
    })
}

/// Φ_k^(1)(η): the k-th η-derivative of the logistic function
/// Φ_0^(1) = 1/(e^{−η}+1), computed exactly as a polynomial in
/// σ = Φ_0^(1) through dσ/dη = σ(1−σ).
pub fn phi1(k: usize, eta: f64) -> f64 {
    let mut coeffs = vec![0.0f64, 1.0]; // σ
    for _ in 0..k {
        let mut next = vec![0.0f64; coeffs.len() + 1];
        for (j, &cj) in coeffs.iter().enumerate() {
            if cj == 0.0 || j == 0 {
                continue;
            }
            let jf = j as f64;
            next[j] += jf * cj;
            next[j + 1] -= jf * cj;
        }
        coeffs = next;
    }
    let sigma = if eta >= 0.0 {
        1.0 / (1.0 + (-eta).exp())
    } else {
        let e = eta.exp();
        e / (1.0 + e)
    };
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * sigma + c)
}

/// Φ_k^(2)(η, q) = F̂_{q+1/2−k}(η).
pub fn phi2(k: usize, eta: f64, q: f64) -> Result<f64> {
    fhat(q + 0.5 - k as f64, eta, 1e-13)
}

/// Ψ_k(η) = −∂F̂_q(η)/∂q at q = −k−1, evaluated from its two quadrature
/// pieces:
///
/// ```text
/// Ψ_k^(1) = (k!/π) [ψ(k+1) ∫₀^π f(θ) dθ − ∫₀^π g(θ) dθ],   μ = −k,
/// Ψ_k^(2) = (−1)^{k+1} k! ∫₁^∞ x^{−k−1}/(e^{x−η}+1) dx.
/// ```
pub fn psi_aux(k: usize, eta: f64, tol: f64) -> Result<f64> {
    let mu = -(k as f64);
    let k_fact = (1..=k).fold(1.0f64, |p, i| p * i as f64);
    let int_f = quad::gauss_legendre_doubling(
        &|theta| theta_kernel(theta, eta, mu).0,
        0.0,
        std::f64::consts::PI,
        tol,
    )?;
    let int_g = quad::gauss_legendre_doubling(
        &|theta| theta_kernel(theta, eta, mu).1,
        0.0,
        std::f64::consts::PI,
        tol,
    )?;
    let psi_k1 = digamma_int_halfint(2 * (k as u32 + 1))?;
    let part1 = k_fact / std::f64::consts::PI * (psi_k1 * int_f - int_g);

    let tail = tail_x_integral(-(k as f64) - 1.0, eta, tol)?;
    let sign = if (k + 1) % 2 == 0 { 1.0 } else { -1.0 };
    let part2 = sign * k_fact * tail;
    Ok(part1 + part2)
}
