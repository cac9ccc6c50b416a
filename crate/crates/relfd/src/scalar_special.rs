//! Scalar special-function primitives used by every expansion: real gamma,
//! digamma at integer and half-integer arguments, Pochhammer symbols and the
//! τ coefficients of πs/sin(πs) = Σ τ_{2n} s^{2n}.

use crate::error::{FdError, Result};

/// Euler's constant γ.
pub const EULER: f64 = 0.5772156649015329;

/// Γ(−1/2) = −2√π.
pub const GAMMA_NEG_HALF: f64 = -3.5449077018110318;

// Lanczos-type coefficients, "An Analysis of the Lanczos Gamma Approximation",
// G. R. Pugh, 2004, p. 116 (g = 10.900511, n = 11).
const GAMMA_DK: [f64; 11] = [
    2.4857408913875355e-5,
    1.0514237858172197,
    -3.4568709722201625,
    4.512277094668948,
    -2.9828522532357664,
    1.056397115771267,
    -1.9542877319164587e-1,
    1.709705434044412e-2,
    -5.719261174043057e-4,
    4.633994733599057e-6,
    -2.7199490848860772e-9,
];
const GAMMA_R: f64 = 10.900511;
const TWO_SQRT_E_OVER_PI: f64 = 1.8603827342052657;

fn lanczos_sum(x: f64) -> f64 {
    // argument already shifted so that x >= 0.5
    GAMMA_DK
        .iter()
        .enumerate()
        .skip(1)
        .fold(GAMMA_DK[0], |s, (i, c)| s + c / (x + i as f64 - 1.0))
}

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}

/// Real gamma function Γ(x), x not a nonpositive integer.
///
/// Negative arguments go through the reflection formula; sin(πx) is evaluated
/// with [`sinpi`] so accuracy does not degrade near the poles.
pub fn gamma_real(x: f64) -> Result<f64> {
    if is_nonpositive_integer(x) || x.is_nan() {
        return Err(FdError::Domain {
            what: "gamma pole at nonpositive integer",
            value: x,
        });
    }
    if x < 0.5 {
        // Γ(x) Γ(1−x) = π / sin(πx)
        Ok(std::f64::consts::PI / (sinpi(x) * gamma_positive(1.0 - x)))
    } else {
        Ok(gamma_positive(x))
    }
}

fn gamma_positive(x: f64) -> f64 {
    // shift large arguments down by recurrence; the Lanczos form loses
    // accuracy as x grows (≈1.4e-13 relative already at x ≈ 15)
    let mut prod = 1.0f64;
    let mut y = x;
    while y > 10.0 {
        y -= 1.0;
        prod *= y;
    }
    let s = lanczos_sum(y);
    prod * s * TWO_SQRT_E_OVER_PI * ((y - 0.5 + GAMMA_R) / std::f64::consts::E).powf(y - 0.5)
}

/// 1/Γ(x), with the convention 1/Γ = 0 at the poles x = 0, −1, −2, …
pub fn recip_gamma(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        0.0
    } else if x < 0.5 {
        sinpi(x) * gamma_positive(1.0 - x) / std::f64::consts::PI
    } else {
        1.0 / gamma_positive(x)
    }
}

/// sin(πx), exactly zero at integer x.
pub fn sinpi(x: f64) -> f64 {
    let n = x.round();
    let f = x - n;
    let s = (std::f64::consts::PI * f).sin();
    if (n as i64) % 2 == 0 {
        s
    } else {
        -s
    }
}

/// cos(πx), exactly zero at half-integer x.
pub fn cospi(x: f64) -> f64 {
    sinpi(x + 0.5)
}

/// Digamma ψ(x) for x = two_x/2, two_x ≥ 1, via the closed forms
/// ψ(n+1) = −γ + H_n and ψ(n+1/2) = −γ − 2 ln 2 + 2 Σ_{j=1..n} 1/(2j−1).
pub fn digamma_int_halfint(two_x: u32) -> Result<f64> {
    if two_x == 0 {
        return Err(FdError::Domain {
            what: "digamma pole at 0",
            value: 0.0,
        });
    }
    if two_x % 2 == 0 {
        let n = two_x / 2 - 1; // x = n + 1
        let h: f64 = (1..=n).map(|j| 1.0 / j as f64).sum();
        Ok(-EULER + h)
    } else {
        let n = (two_x - 1) / 2; // x = n + 1/2
        let h: f64 = (1..=n).map(|j| 2.0 / (2.0 * j as f64 - 1.0)).sum();
        Ok(-EULER - 2.0 * std::f64::consts::LN_2 + h)
    }
}

/// Pochhammer symbol (x)_k = x (x+1) ⋯ (x+k−1), empty product = 1.
pub fn pochhammer(x: f64, k: u32) -> f64 {
    (0..k).fold(1.0, |p, i| p * (x + i as f64))
}

/// τ_n: Taylor coefficients of πs/sin(πs). Zero for odd n, τ_0 = 1, and for
/// even n ≥ 2 equal to twice the alternating Dirichlet series Σ (−1)^{m−1} m^{−n}.
///
/// The series is summed with the Cohen–Rodriguez Villegas–Zagier acceleration;
/// plain term-by-term summation of the n = 2 case would need ~10^8 terms.
pub fn tau(n: u32) -> f64 {
    if n == 0 {
        return 1.0;
    }
    if n % 2 == 1 {
        return 0.0;
    }
    2.0 * alternating_zeta(n as f64)
}

/// η(s) = Σ_{m≥1} (−1)^{m−1} m^{−s} by CVZ acceleration (~1.31 digits/term).
fn alternating_zeta(s: f64) -> f64 {
    const N: usize = 32;
    let mut d = (3.0 + 8.0f64.sqrt()).powi(N as i32);
    d = (d + 1.0 / d) / 2.0;
    let mut b = -1.0;
    let mut c = -d;
    let mut sum = 0.0;
    for k in 0..N {
        c = b - c;
        sum += c * ((k + 1) as f64).powf(-s);
        let kf = k as f64;
        b *= (kf + N as f64) * (kf - N as f64) / ((kf + 0.5) * (kf + 1.0));
    }
    sum / d
}

/// Precomputed table of τ_0, τ_2, …, τ_{2(len−1)} (odd indices are zero and
/// not stored). Built once, immutable afterwards.
#[derive(Debug, Clone)]
pub struct TauTable {
    values: Vec<f64>,
}

impl TauTable {
    pub fn new(len: usize) -> Self {
        TauTable {
            values: (0..len).map(|n| tau(2 * n as u32)).collect(),
        }
    }

    /// τ_{2n}; panics if beyond the table length.
    pub fn tau_2n(&self, n: usize) -> f64 {
        self.values[n]
    }

    /// τ_j for arbitrary index (0 for odd j).
    pub fn tau(&self, j: usize) -> f64 {
        if j % 2 == 1 {
            0.0
        } else {
            self.values[j / 2]
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const PI: f64 = std::f64::consts::PI;

    #[test]
    fn gamma_known_values() {
        assert_relative_eq!(gamma_real(1.0).unwrap(), 1.0, max_relative = 1e-14);
        assert_relative_eq!(
            gamma_real(0.5).unwrap(),
            PI.sqrt(),
            max_relative = 1e-14
        );
        // Γ(−5/2) = −8√π/15 by reflection + recurrence from Γ(1/2)
        assert_relative_eq!(
            gamma_real(-2.5).unwrap(),
            -8.0 * PI.sqrt() / 15.0,
            max_relative = 1e-13
        );
        assert_relative_eq!(gamma_real(5.0).unwrap(), 24.0, max_relative = 1e-14);
        assert_relative_eq!(gamma_real(-0.5).unwrap(), GAMMA_NEG_HALF, max_relative = 1e-14);
    }

    #[test]
    fn gamma_rejects_poles() {
        for x in [0.0, -1.0, -7.0] {
            assert!(gamma_real(x).is_err());
        }
    }

    #[test]
    fn gamma_recurrence_on_grid() {
        // x = −9.75, −9.25, …, 49.75 avoids all poles
        let mut x = -9.75;
        while x < 49.8 {
            let lhs = gamma_real(x + 1.0).unwrap();
            let rhs = x * gamma_real(x).unwrap();
            assert_relative_eq!(lhs, rhs, max_relative = 1e-13);
            x += 0.5;
        }
    }

    #[test]
    fn recip_gamma_zero_at_poles_and_consistent() {
        assert_eq!(recip_gamma(0.0), 0.0);
        assert_eq!(recip_gamma(-3.0), 0.0);
        for x in [0.25, 1.0, 4.5, -1.5, -6.25] {
            assert_relative_eq!(
                recip_gamma(x),
                1.0 / gamma_real(x).unwrap(),
                max_relative = 1e-13
            );
        }
    }

    #[test]
    fn sinpi_cospi_exact_zeros() {
        assert_eq!(sinpi(3.0), 0.0);
        assert_eq!(sinpi(-120.0), 0.0);
        assert_eq!(cospi(2.5), 0.0);
        assert_eq!(cospi(-0.5), 0.0);
        assert_relative_eq!(sinpi(0.25), (PI * 0.25).sin(), max_relative = 1e-15);
        assert_relative_eq!(cospi(0.25), (PI * 0.25).cos(), max_relative = 1e-15);
        assert_relative_eq!(cospi(2.0), 1.0, max_relative = 1e-15);
        assert_relative_eq!(cospi(3.0), -1.0, max_relative = 1e-15);
    }

    #[test]
    fn digamma_closed_forms() {
        // ψ(1) = −γ
        assert_relative_eq!(digamma_int_halfint(2).unwrap(), -EULER, max_relative = 1e-15);
        // ψ(1/2) = −γ − 2 ln 2
        assert_relative_eq!(
            digamma_int_halfint(1).unwrap(),
            -EULER - 2.0 * std::f64::consts::LN_2,
            max_relative = 1e-15
        );
        // ψ(2) = 1 − γ
        assert_relative_eq!(
            digamma_int_halfint(4).unwrap(),
            1.0 - EULER,
            max_relative = 1e-15
        );
        assert!(digamma_int_halfint(0).is_err());
    }

    #[test]
    fn digamma_recurrence() {
        // ψ(x+1) = ψ(x) + 1/x on the representable grid
        for two_x in 1..40u32 {
            let x = two_x as f64 / 2.0;
            let lhs = digamma_int_halfint(two_x + 2).unwrap();
            let rhs = digamma_int_halfint(two_x).unwrap() + 1.0 / x;
            assert_relative_eq!(lhs, rhs, max_relative = 1e-13, epsilon = 1e-14);
        }
    }

    #[test]
    fn pochhammer_values() {
        assert_eq!(pochhammer(3.5, 0), 1.0);
        assert_eq!(pochhammer(2.0, 3), 24.0);
        assert_eq!(pochhammer(-0.5, 2), -0.25);
    }

    #[test]
    fn tau_known_values() {
        assert_eq!(tau(0), 1.0);
        assert_relative_eq!(tau(2), PI * PI / 6.0, max_relative = 1e-14);
        assert_relative_eq!(tau(4), 7.0 * PI.powi(4) / 360.0, max_relative = 1e-14);
        assert_eq!(tau(3), 0.0);
        assert_eq!(tau(17), 0.0);
    }

    #[test]
    fn tau_positive_and_tends_to_two() {
        for n in 0..=20 {
            assert!(tau(2 * n) > 0.0);
        }
        assert_relative_eq!(tau(60), 2.0, max_relative = 1e-15);
    }

    #[test]
    fn tau_matches_bernoulli_closed_form() {
        // τ_{2n} = (−1)^{n−1} (1 − 2^{1−2n}) (2π)^{2n} B_{2n} / (2n)!
        let bernoulli: [f64; 20] = [
            1.0 / 6.0,
            -1.0 / 30.0,
            1.0 / 42.0,
            -1.0 / 30.0,
            5.0 / 66.0,
            -691.0 / 2730.0,
            7.0 / 6.0,
            -3617.0 / 510.0,
            43867.0 / 798.0,
            -174611.0 / 330.0,
            854513.0 / 138.0,
            -236364091.0 / 2730.0,
            8553103.0 / 6.0,
            -23749461029.0 / 870.0,
            8615841276005.0 / 14322.0,
            -7709321041217.0 / 510.0,
            2577687858367.0 / 6.0,
            -26315271553053477373.0 / 1919190.0,
            2929993913841559.0 / 6.0,
            -261082718496449122051.0 / 13530.0,
        ];
        let mut fact = 1.0f64; // (2n)!
        for n in 1..=20usize {
            fact *= (2 * n - 1) as f64 * (2 * n) as f64;
            let b = bernoulli[n - 1];
            let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
            let closed =
                sign * (1.0 - 2.0f64.powi(1 - 2 * n as i32)) * (2.0 * PI).powi(2 * n as i32) * b
                    / fact;
            assert_relative_eq!(tau(2 * n as u32), closed, max_relative = 1e-13);
        }
    }

    #[test]
    fn tau_series_sums_to_generating_function() {
        // Σ τ_{2n} s^{2n} at s = 1/2 equals (π/2)/sin(π/2) within 40 terms
        let s = 0.5f64;
        let target = (PI * s) / (PI * s).sin();
        let table = TauTable::new(40);
        let mut sum = 0.0;
        for n in 0..40 {
            sum += table.tau_2n(n) * s.powi(2 * n as i32);
        }
        assert_relative_eq!(sum, target, max_relative = 1e-12);
    }

    #[test]
    fn tau_table_indexing() {
        let t = TauTable::new(8);
        assert_eq!(t.len(), 8);
        assert_eq!(t.tau(0), 1.0);
        assert_eq!(t.tau(5), 0.0);
        assert_relative_eq!(t.tau(4), tau(4), max_relative = 1e-15);
    }
}
