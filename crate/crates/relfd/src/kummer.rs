//! Confluent hypergeometric machinery: the regular Kummer M = ₁F₁ series, the
//! divergent large-z U series, the logarithmic integer-parameter U
//! representation, and the composite slowly varying factor
//!
//! ```text
//! U_q(s,β) = (2s/β)^{q+1} U(q+1, q+5/2, 2s/β) = (2s/β)^{−1/2} U(−1/2, −q−1/2, 2s/β),
//! ```
//!
//! with limiting value U_q(s,0) = 1.
//!
//! None of the three analytic routes for U covers the whole positive axis in
//! double precision. The connection formula through two M functions cancels
//! like e^z, the log-case series likewise, and the asymptotic series only
//! reaches full accuracy once z is large. In the intermediate window U is
//! evaluated from its Laplace integral representation
//! U(a,b,z) = z^{−a}/Γ(a) ∫₀^∞ e^{−u} u^{a−1} (1 + u/z)^{b−a−1} du, a > 0.

use crate::error::{FdError, Result};
use crate::quad;
use crate::scalar_special::{digamma_int_halfint, gamma_real, pochhammer};

/// Tolerance for recognizing q as half-integer (q + 3/2 integer) or integer.
pub const QCLASS_TOL: f64 = 1e-9;

/// Maximum series length before a convergence error is reported.
const MAX_TERMS: usize = 10_000;

/// Classification of the order q, driving branch selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QClass {
    /// q not a half-integer; the two-M connection formula applies.
    Generic,
    /// q = m − 3/2 with integer m ≥ 2; needs the logarithmic U form.
    HalfInteger { m: u32 },
    /// q ∈ {0, 1, 2, …}; handled by the generic branches, but the
    /// exponentially small sin(πq) series vanishes identically.
    NonNegInteger { n: u32 },
}

impl QClass {
    /// True unless q is half-integer, i.e. the generic-q expansions apply.
    pub fn is_generic(self) -> bool {
        !matches!(self, QClass::HalfInteger { .. })
    }
}

/// Classify q within [`QCLASS_TOL`]. Half-integers below 1/2 (m < 2) have no
/// dedicated expansion and are rejected by the callers that need m ≥ 2.
pub fn classify_q(q: f64) -> QClass {
    let n = q.round();
    if (q - n).abs() < QCLASS_TOL && n >= 0.0 {
        return QClass::NonNegInteger { n: n as u32 };
    }
    let m = q + 1.5;
    let mr = m.round();
    if (m - mr).abs() < QCLASS_TOL && mr >= 2.0 {
        return QClass::HalfInteger { m: mr as u32 };
    }
    QClass::Generic
}

/// Parameters of one U_q evaluation.
#[derive(Debug, Clone, Copy)]
pub struct UqSpec {
    pub q: f64,
    pub beta: f64,
    pub qclass: QClass,
}

impl UqSpec {
    pub fn new(q: f64, beta: f64) -> Result<Self> {
        if !q.is_finite() {
            return Err(FdError::Domain {
                what: "q must be finite",
                value: q,
            });
        }
        if !(beta >= 0.0) {
            return Err(FdError::Domain {
                what: "beta must be nonnegative",
                value: beta,
            });
        }
        Ok(UqSpec {
            q,
            beta,
            qclass: classify_q(q),
        })
    }
}

/// Kummer M(a; b; z) = ₁F₁ by Taylor summation.
///
/// Negative arguments are routed through the Kummer transformation
/// M(a,b,z) = e^z M(b−a, b, −z) so the sum runs over a positive argument and
/// avoids alternating cancellation. Stops once three consecutive terms fall
/// below `tol` relative to the partial sum.
pub fn kummer_m(a: f64, b: f64, z: f64, tol: f64) -> Result<f64> {
    if b <= 0.0 && b == b.round() {
        return Err(FdError::Domain {
            what: "kummer_m pole: b is a nonpositive integer",
            value: b,
        });
    }
    if z < 0.0 {
        return Ok(z.exp() * kummer_m(b - a, b, -z, tol)?);
    }
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    let mut small_streak = 0;
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        term *= (a + kf) / (b + kf) * z / (kf + 1.0);
        sum += term;
        if term.abs() <= tol * sum.abs() {
            small_streak += 1;
            if small_streak >= 3 {
                return Ok(sum);
            }
        } else {
            small_streak = 0;
        }
    }
    Err(FdError::Convergence {
        context: "kummer_m series",
        achieved: term.abs(),
        steps: MAX_TERMS,
    })
}

/// Divergent large-z series U(a,b,z) ~ z^{−a} Σ (a)_k (a−b+1)_k / k! (−z)^{−k},
/// summed to its smallest term or `max_terms`, whichever comes first.
///
/// Returns (value, error estimate, terms used); the error estimate is the
/// magnitude of the first omitted term times z^{−a}.
pub fn kummer_u_asymptotic(a: f64, b: f64, z: f64, max_terms: usize) -> (f64, f64, usize) {
    assert!(z > 0.0, "kummer_u_asymptotic needs z > 0");
    let scale = z.powf(-a);
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    let mut terms = 1usize;
    let mut omitted = f64::INFINITY;
    for k in 0..max_terms.max(1) {
        let kf = k as f64;
        let next = term * (a + kf) * (a - b + 1.0 + kf) / ((kf + 1.0) * -z);
        if next.abs() >= term.abs() || terms >= max_terms {
            omitted = next.abs();
            break;
        }
        sum += next;
        term = next;
        terms += 1;
        omitted = (term * (a + kf + 1.0) * (a - b + 2.0 + kf) / ((kf + 2.0) * z)).abs();
    }
    (scale * sum, scale * omitted, terms)
}

/// U(a, m+1, z) for integer b = m+1 ≥ 1 via the logarithmic representation:
/// an infinite series carrying ln z and digamma values plus a finite sum of
/// negative powers. `a` must be half-integer (the only case needed here) so
/// that all ψ arguments stay on the integer/half-integer grid.
pub fn kummer_u_logcase(a: f64, m_plus_1: u32, z: f64, tol: f64) -> Result<f64> {
    assert!(z > 0.0, "kummer_u_logcase needs z > 0");
    let m = m_plus_1 - 1;
    let mf = m as f64;
    if a <= mf && a == a.round() {
        return Err(FdError::Domain {
            what: "kummer_u_logcase: a a nonpositive integer shift of m",
            value: a,
        });
    }
    let two_a = 2.0 * a;
    let two_a_int = two_a.round() as i64;
    if (two_a - two_a_int as f64).abs() > 1e-12 || two_a_int % 2 == 0 {
        return Err(FdError::Domain {
            what: "kummer_u_logcase implemented for half-integer a only",
            value: a,
        });
    }

    // infinite part: C Σ_k (a)_k / (k! (m+1)_k) z^k (ln z + ψ(a+k) − ψ(1+k) − ψ(m+1+k))
    let ln_z = z.ln();
    let sign = if (m + 1) % 2 == 0 { 1.0 } else { -1.0 };
    let m_fact = (1..=m).fold(1.0f64, |p, i| p * i as f64);
    let prefactor = sign / (m_fact * gamma_real(a - mf)?);

    let mut coef = 1.0f64; // (a)_k z^k / (k! (m+1)_k)
    let mut psi_a = digamma_int_halfint((two_a_int) as u32)?; // 2a > 0 guaranteed: a > m ≥ 0
    let mut psi_1 = digamma_int_halfint(2)?;
    let mut psi_m1 = digamma_int_halfint(2 * (m + 1))?;
    let mut sum = ln_z + psi_a - psi_1 - psi_m1;
    let mut small_streak = 0;
    let mut converged = false;
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        coef *= (a + kf) * z / ((kf + 1.0) * (mf + 1.0 + kf));
        psi_a += 1.0 / (a + kf);
        psi_1 += 1.0 / (1.0 + kf);
        psi_m1 += 1.0 / (mf + 1.0 + kf);
        let term = coef * (ln_z + psi_a - psi_1 - psi_m1);
        sum += term;
        if term.abs() <= tol * sum.abs().max(1e-300) {
            small_streak += 1;
            if small_streak >= 3 {
                converged = true;
                break;
            }
        } else {
            small_streak = 0;
        }
    }
    if !converged {
        return Err(FdError::Convergence {
            context: "kummer_u_logcase series",
            achieved: sum,
            steps: MAX_TERMS,
        });
    }

    // finite part: (1/Γ(a)) Σ_{k=1..m} (k−1)! (1−a+k)_{m−k} / (m−k)! z^{−k}
    let mut finite = 0.0f64;
    if m >= 1 {
        let inv_gamma_a = 1.0 / gamma_real(a)?;
        for k in 1..=m {
            let kf = k as f64;
            let fact_km1 = (1..k).fold(1.0f64, |p, i| p * i as f64);
            let fact_mk = (1..=(m - k)).fold(1.0f64, |p, i| p * i as f64);
            finite +=
                fact_km1 * pochhammer(1.0 - a + kf, m - k) / fact_mk * z.powi(-(k as i32));
        }
        finite *= inv_gamma_a;
    }

    Ok(prefactor * sum + finite)
}

/// U(a,b,z) from the Laplace integral z^{−a}/Γ(a) ∫ e^{−u} u^{a−1} (1+u/z)^{b−a−1} du,
/// valid for a > 0, z > 0. Smooth positive integrand; this is the reference
/// route in the window where both series forms lose digits.
pub fn kummer_u_quad(a: f64, b: f64, z: f64, tol: f64) -> Result<f64> {
    assert!(a > 0.0 && z > 0.0, "kummer_u_quad needs a > 0, z > 0");
    let p = b - a - 1.0;
    let integrand = move |u: f64| (-u).exp() * u.powf(a - 1.0) * (1.0 + u / z).powf(p);
    let cut = 30.0 + 5.0 * a.max(p.abs());
    let head = if a < 1.0 {
        // u = t² removes the endpoint singularity u^{a−1}
        let g = move |t: f64| {
            2.0 * (-t * t).exp() * t.powf(2.0 * a - 1.0) * (1.0 + t * t / z).powf(p)
        };
        quad::adaptive_gk(&g, &[0.0, 1.0, cut.sqrt()], tol, 0.0, 800)?
    } else {
        quad::adaptive_gk(&integrand, &[0.0, 1.0, cut], tol, 0.0, 800)?
    };
    let tail = quad::adaptive_gk_tail(&integrand, cut, &[], tol, tol * head.value.abs(), 400)?;
    Ok(z.powf(-a) * (head.value + tail.value) / gamma_real(a)?)
}

/// U_q(s,β) with automatic route selection; `z_connect`/`z_switch` bound the
/// convergent-series and asymptotic regimes (between them the Laplace
/// integral is used).
pub fn u_q_with(spec: &UqSpec, s: f64, z_connect: f64, z_switch: f64, tol: f64) -> Result<f64> {
    if !(s > 0.0) {
        return Err(FdError::Domain {
            what: "u_q needs s > 0",
            value: s,
        });
    }
    if spec.beta == 0.0 {
        return Ok(1.0);
    }
    let z = 2.0 * s / spec.beta;
    if z >= z_switch {
        // U_q = z^{−1/2} U(−1/2, −q−1/2, z); the helper already includes z^{−a} = z^{1/2}
        let (u, _, _) = kummer_u_asymptotic(-0.5, -spec.q - 0.5, z, 40);
        return Ok(z.powf(-0.5) * u);
    }
    if z <= z_connect {
        return match spec.qclass {
            QClass::HalfInteger { m } => {
                let mf = m as f64;
                Ok(z.powf(mf - 0.5) * kummer_u_logcase(mf - 0.5, m + 1, z, tol)?)
            }
            _ => u_q_connection(spec.q, z, tol),
        };
    }
    // U_q(s,β) = z^{q+1} U(q+1, q+5/2, z) with the a-parameter positive
    Ok(z.powf(spec.q + 1.0) * kummer_u_quad(spec.q + 1.0, spec.q + 2.5, z, tol.min(1e-13))?)
}

/// U_q(s,β) with the default route thresholds.
pub fn u_q(spec: &UqSpec, s: f64) -> Result<f64> {
    let cfg = crate::config::EvalConfig::default();
    u_q_with(spec, s, cfg.z_connect, cfg.z_switch, cfg.series_tol)
}

/// Two-M connection formula for U_q; valid for q not half-integer
/// (Γ(−q−3/2) must be finite).
pub fn u_q_connection(q: f64, z: f64, tol: f64) -> Result<f64> {
    let g1 = gamma_real(-q - 1.5)? / gamma_real(-0.5)?;
    let g2 = gamma_real(q + 1.5)? / gamma_real(q + 1.0)?;
    Ok(z.powf(q + 1.0) * g1 * kummer_m(q + 1.0, q + 2.5, z, tol)?
        + z.powf(-0.5) * g2 * kummer_m(-0.5, -q - 0.5, z, tol)?)
}
