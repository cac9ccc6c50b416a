//! Brute-force reference: adaptive quadrature of the defining integrals and
//! an exact truncated-polynomial product. Ground truth for every derived
//! expectation in the test suite and for the CLI's `reference` column.

use crate::error::{FdError, Result};
use crate::fd_relativistic::FdParams;
use crate::fd_standard::fermi_factor;
use crate::quad;

/// A quadrature value with its error estimate and cost.
#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: f64,
    pub abs_err_est: f64,
    pub evaluations: usize,
}

/// Adaptive quadrature of F_q(η,β) = ∫₀^∞ x^q √(1+βx/2)/(e^{x−η}+1) dx.
///
/// The domain is split at the logistic knee x = max(η, 0) and at the tail
/// start x = max(2η, 40); the tail is mapped onto a finite interval. The
/// stable logistic keeps e^{x−η} from overflowing at any η.
pub fn quad_fd_rel(p: &FdParams, tol: f64) -> Result<QuadResult> {
    if !(tol > 0.0) {
        return Err(FdError::Usage(format!("quad_fd_rel: tol must be > 0, got {tol}")));
    }
    let (q, eta, beta) = (p.q, p.eta, p.beta);
    quad_fd_weighted(q, eta, beta, tol)
}

/// As [`quad_fd_rel`] with β = 0, valid down to q > −1 (the x = 0 endpoint
/// singularity is removed by a power substitution).
pub fn quad_fd_std(q: f64, eta: f64, tol: f64) -> Result<QuadResult> {
    if !(q > -1.0) {
        return Err(FdError::Domain {
            what: "quad_fd_std needs q > -1",
            value: q,
        });
    }
    quad_fd_weighted(q, eta, 0.0, tol)
}

fn quad_fd_weighted(q: f64, eta: f64, beta: f64, tol: f64) -> Result<QuadResult> {
    let f = move |x: f64| x.powf(q) * (1.0 + 0.5 * beta * x).sqrt() * fermi_factor(x, eta);
    let knee = eta.max(0.0);
    let t_start = (2.0 * eta).max(40.0);

    let mut evaluations = 0usize;
    let mut value = 0.0f64;
    let mut err = 0.0f64;

    // head [0, 1]: substitute x = t^p when q < 0 so the integrand stays bounded
    let head = if q < 0.0 {
        let p = (2.0 / (q + 1.0)).ceil() + 1.0;
        let g = move |t: f64| {
            let x = t.powf(p);
            p * t.powf(p * (q + 1.0) - 1.0) * (1.0 + 0.5 * beta * x).sqrt() * fermi_factor(x, eta)
        };
        quad::adaptive_gk(&g, &[0.0, 0.5, 1.0], tol, 0.0, 1200)?
    } else {
        quad::adaptive_gk(&f, &[0.0, 0.5, 1.0], tol, 0.0, 1200)?
    };
    value += head.value;
    err += head.abs_err;
    evaluations += head.evaluations;

    // middle [1, t_start] with the knee split out
    let mut edges = vec![1.0];
    if knee > 1.0 && knee < t_start {
        edges.push(knee);
    }
    edges.push(t_start);
    let mid = quad::adaptive_gk(&f, &edges, tol, tol * value.abs(), 1200)?;
    value += mid.value;
    err += mid.abs_err;
    evaluations += mid.evaluations;

    // tail [t_start, ∞): integrand ~ x^{q+1/2} e^{η−x}
    let tail = quad::adaptive_gk_tail(&f, t_start, &[], tol, tol * value.abs(), 600)?;
    value += tail.value;
    err += tail.abs_err;
    evaluations += tail.evaluations;

    Ok(QuadResult {
        value,
        abs_err_est: err,
        evaluations,
    })
}

/// Exact truncated product of two Taylor polynomials, coefficient arrays in
/// ascending order; the independent check for every coefficient family built
/// from Cauchy products.
pub fn taylor_product_oracle(series_a: &[f64], series_b: &[f64], order: usize) -> Result<Vec<f64>> {
    if series_a.len() <= order || series_b.len() <= order {
        return Err(FdError::Usage(format!(
            "taylor_product_oracle: need at least {} coefficients, got {} and {}",
            order + 1,
            series_a.len(),
            series_b.len()
        )));
    }
    Ok((0..=order)
        .map(|n| (0..=n).map(|j| series_a[j] * series_b[n - j]).sum())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};

    fn params(q: f64, eta: f64, beta: f64) -> FdParams {
        FdParams::new(q, eta, beta).unwrap()
    }

    #[test]
    fn closed_forms() {
        // F_0(0) = ln 2
        let r = quad_fd_rel(&params(0.0, 0.0, 0.0), 1e-13).unwrap();
        assert_relative_eq!(r.value, std::f64::consts::LN_2, max_relative = 1e-13);
        // F_1(0) = π²/12
        let r = quad_fd_rel(&params(1.0, 0.0, 0.0), 1e-13).unwrap();
        assert_relative_eq!(
            r.value,
            std::f64::consts::PI.powi(2) / 12.0,
            max_relative = 1e-13
        );
        // F_0(1) = ln(1 + e)
        let r = quad_fd_std(0.0, 1.0, 1e-13).unwrap();
        assert_relative_eq!(
            r.value,
            (1.0 + std::f64::consts::E).ln(),
            max_relative = 1e-13
        );
    }

    #[test]
    fn fractional_order_against_fhat_definition() {
        // F_q(η) = Γ(q+1) F̂_q(η) for q = −1/2
        let q = -0.5;
        let quad = quad_fd_std(q, 2.0, 1e-12).unwrap().value;
        let via_fhat = crate::fd_standard::fhat(q, 2.0, 1e-12).unwrap()
            * crate::scalar_special::gamma_real(q + 1.0).unwrap();
        assert_relative_eq!(quad, via_fhat, max_relative = 1e-10);
    }

    #[test]
    fn sommerfeld_cross_check() {
        let quad = quad_fd_std(0.5, 30.0, 1e-12).unwrap().value;
        let somm = crate::fd_standard::fd_std_sommerfeld(0.5, 30.0, 8)
            .unwrap()
            .value;
        assert_relative_eq!(quad, somm, max_relative = 1e-10);
    }

    #[test]
    fn tol_halving_self_consistency() {
        // halving tol moves the value by no more than the previous error
        // estimate, on a seeded random grid
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(20260810);
        for _ in 0..10 {
            let q: f64 = rng.gen_range(0.0..4.0);
            let eta: f64 = rng.gen_range(-8.0..25.0);
            let beta: f64 = rng.gen_range(0.0..40.0);
            let p = params(q, eta, beta);
            let coarse = quad_fd_rel(&p, 1e-10).unwrap();
            let fine = quad_fd_rel(&p, 5e-11).unwrap();
            assert!(
                (coarse.value - fine.value).abs()
                    <= coarse.abs_err_est + 1e-14 * coarse.value.abs(),
                "q={q} eta={eta} beta={beta}"
            );
        }
    }

    #[test]
    fn tail_truncation_is_negligible() {
        // cutting the domain at x = 2η + 80 changes nothing beyond 1e-15
        for &eta in &[5.0, 20.0, 50.0] {
            let p = params(0.75, eta, 4.0 / 3.0);
            let full = quad_fd_rel(&p, 1e-13).unwrap().value;
            let cut = 2.0 * eta + 80.0;
            let f = move |x: f64| {
                x.powf(0.75) * (1.0 + 0.5 * (4.0 / 3.0) * x).sqrt() * fermi_factor(x, eta)
            };
            let truncated =
                quad::adaptive_gk(&f, &[0.0, 1.0, eta, cut], 1e-13, 0.0, 3000).unwrap();
            assert_relative_eq!(full, truncated.value, max_relative = 1e-13);
        }
    }

    #[test]
    fn agrees_with_neg_eta_series() {
        // the η < 0 series is a theorem-level truth; the oracle must match it
        for &eta in &[-1.0, -3.0, -10.0] {
            for &beta in &[0.0, 4.0 / 3.0, 10.5] {
                let p = params(0.75, eta, beta);
                let quad = quad_fd_rel(&p, 1e-13).unwrap().value;
                let series = crate::fd_relativistic::fd_rel_neg_eta(&p, 1e-15)
                    .unwrap()
                    .value;
                assert_relative_eq!(quad, series, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn taylor_product_cases() {
        assert_eq!(
            taylor_product_oracle(&[1.0], &[1.0, 2.0, 3.0], 0).unwrap(),
            vec![1.0]
        );
        // identity factor passes the other series through
        let got = taylor_product_oracle(&[1.0, 0.0, 0.0], &[1.0, 2.0, 3.0], 2).unwrap();
        assert_eq!(got, vec![1.0, 2.0, 3.0]);
        // [1, 0, τ₂] × [1, b₁, b₂] = [1, b₁, b₂ + τ₂]
        let t2 = crate::scalar_special::tau(2);
        let got = taylor_product_oracle(&[1.0, 0.0, t2], &[1.0, -0.7, 0.4], 2).unwrap();
        assert_relative_eq!(got[2], 0.4 + t2, max_relative = 1e-15);
        assert_eq!(got[1], -0.7);
        // insufficient length is a usage error
        assert!(taylor_product_oracle(&[1.0], &[1.0], 1).is_err());
    }

    #[test]
    fn random_parameters_deterministic() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        let q: f64 = rng.gen_range(0.0..3.0);
        let p = params(q, 1.5, 2.0);
        let a = quad_fd_rel(&p, 1e-12).unwrap().value;
        let b = quad_fd_rel(&p, 1e-12).unwrap().value;
        assert_eq!(a.to_bits(), b.to_bits());
    }
}
