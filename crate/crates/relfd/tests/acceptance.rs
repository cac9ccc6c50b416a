//! Acceptance suite: one test per shipped accuracy claim, each printing a
//! single pass/fail line (run with `--nocapture` to see them all).

use relfd::config::EvalConfig;
use relfd::coefficients::a_coeffs;
use relfd::fd_relativistic::{
    cox_finite_sum, fd_rel_eval, fd_rel_f_r, fd_rel_large_beta_generic,
    fd_rel_large_beta_halfint, fd_rel_large_eta_generic, fd_rel_large_eta_halfint,
    fd_rel_neg_eta, FdParams, Method,
};
use relfd::fd_standard::{fhat_direct, fhat_theta, fhat, psi_aux};
use relfd::oracle::{quad_fd_rel, taylor_product_oracle};
use relfd::scalar_special::tau;

fn params(q: f64, eta: f64, beta: f64) -> FdParams {
    FdParams::new(q, eta, beta).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn report(n: usize, what: &str, pass: bool) {
    println!(
        "criterion {n:2} [{}]: {what}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {n} failed: {what}");
}

#[test]
fn criterion_01_neg_eta_convergence_profile() {
    let mut pass = true;
    for &beta in &[0.0, 4.0 / 3.0, 10.5] {
        for i in 1..=6 {
            let eta = -5.0 * i as f64;
            let p = params(0.75, eta, beta);
            let r = fd_rel_neg_eta(&p, 1e-14).unwrap();
            let reference = quad_fd_rel(&p, 1e-13).unwrap().value;
            if rel(r.value, reference) > 1e-12 {
                pass = false;
            }
            let budget = if eta <= -15.0 { 4 } else { 10 };
            if r.terms_used > budget {
                pass = false;
            }
        }
    }
    report(
        1,
        "negative-eta series: rel err <= 1e-12, <= 4 terms for eta <= -15, <= 10 for eta <= -5",
        pass,
    );
}

#[test]
fn criterion_02_large_eta_generic_accuracy() {
    let mut pass = true;
    for &beta in &[4.0 / 3.0, 10.5] {
        for &eta in &[15.0, 18.0, 22.0, 30.0, 40.0] {
            let p = params(0.25, eta, beta);
            let r = fd_rel_large_eta_generic(&p, 10, true).unwrap();
            let reference = quad_fd_rel(&p, 1e-14).unwrap().value;
            if rel(r.value, reference) > 1e-8 {
                pass = false;
            }
        }
    }
    report(2, "large-eta generic: rel err <= 1e-8 for eta >= 15", pass);
}

#[test]
fn criterion_03_exp_small_term_benefit() {
    let mut pass = true;
    for &eta in &[6.0, 8.0, 10.0, 12.0, 14.0, 16.0] {
        let p = params(0.25, eta, 4.0 / 3.0);
        let reference = quad_fd_rel(&p, 1e-14).unwrap().value;
        let with = fd_rel_large_eta_generic(&p, 10, true).unwrap().value;
        let without = fd_rel_large_eta_generic(&p, 10, false).unwrap().value;
        if rel(with, reference) > rel(without, reference) {
            pass = false;
        }
    }
    report(
        3,
        "exponentially small series never increases the error on 6 <= eta <= 16",
        pass,
    );
}

#[test]
fn criterion_04_large_eta_half_integer() {
    let mut pass = true;
    for &q in &[1.5, 4.5] {
        for &beta in &[4.0 / 3.0, 10.5] {
            let err_at = |eta: f64| {
                let p = params(q, eta, beta);
                let r = fd_rel_large_eta_halfint(&p, 10).unwrap();
                let o = quad_fd_rel(&p, 1e-14).unwrap();
                (
                    rel(r.value, o.value),
                    o.abs_err_est / o.value.abs(),
                )
            };
            let (e20, n20) = err_at(20.0);
            let (e25, _) = err_at(25.0);
            let (e30, n30) = err_at(30.0);
            if e20 > 1e-8 || e25 > 1e-8 || e30 > 1e-8 {
                pass = false;
            }
            // monotone improvement, allowing the oracle noise band
            if e30 > e20 + n20 + n30 {
                pass = false;
            }
        }
    }
    report(
        4,
        "half-integer large-eta: rel err <= 1e-8 for eta >= 20, improving from eta=20 to 30",
        pass,
    );
}

/// ×10 band around the published error value, with sub-epsilon entries
/// accepted whenever the measured error is below 1e-14.
fn table_band(measured: f64, printed: f64) -> bool {
    (measured <= 10.0 * printed && measured >= printed / 10.0)
        || (printed <= 1e-15 && measured <= 1e-14)
}

#[test]
fn criterion_05_table1_reproduction() {
    let printed50 = [4.2e-3, 1.1e-5, 9.8e-8, 4.7e-9, 1.7e-12, 8.5e-15];
    let printed100 = [2.1e-3, 2.8e-5, 1.2e-8, 2.9e-10, 5.3e-14, 2.2e-16];
    let mut pass = true;
    for (beta, printed) in [(50.0, printed50), (100.0, printed100)] {
        let p = params(2.4, 4.5, beta);
        let reference = quad_fd_rel(&p, 1e-14).unwrap().value;
        for (k, &expect) in printed.iter().enumerate() {
            let r = fd_rel_large_beta_generic(&p, k).unwrap();
            if !table_band(rel(r.value, reference), expect) {
                pass = false;
            }
        }
    }
    report(
        5,
        "large-beta generic errors at q=2.4, eta=4.5 within x10 of the published table",
        pass,
    );
}

#[test]
fn criterion_06_table2_reproduction() {
    let printed20 = [2.5e-8, 3.1e-10, 4.6e-12, 5.9e-14, 8.9e-16, 2.2e-16];
    let printed50 = [6.7e-10, 3.5e-12, 2.2e-14, 2.2e-16, 4.4e-16, 4.4e-16];
    let mut pass = true;
    for (beta, printed) in [(20.0, printed20), (50.0, printed50)] {
        let p = params(1.5, 4.5, beta);
        let reference = quad_fd_rel(&p, 1e-14).unwrap().value;
        for (k, &expect) in printed.iter().enumerate() {
            let measured = rel(
                fd_rel_large_beta_halfint(&p, k).unwrap().value,
                reference,
            );
            if !table_band(measured, expect) {
                pass = false;
            }
            // one term already beats single precision
            if k == 0 && measured > 1e-7 {
                pass = false;
            }
        }
    }
    report(
        6,
        "large-beta half-integer errors at q=3/2, eta=4.5 within x10 of the published table",
        pass,
    );
}

#[test]
fn criterion_07_coefficient_oracle() {
    let mut pass = true;
    for &q in &[0.25, 1.2, 2.4] {
        for &beta in &[4.0 / 3.0, 10.5, 50.0] {
            let a = a_coeffs(q, beta, 3).unwrap();
            // closed forms
            let t2 = tau(2);
            let closed = [
                1.0,
                2.0 / (beta * (1.0 + 2.0 * q)),
                (t2 * beta * beta * (4.0 * q * q - 1.0) - 2.0)
                    / (beta * beta * (4.0 * q * q - 1.0)),
                2.0 * (beta * beta * t2 * (2.0 * q - 1.0) * (2.0 * q - 3.0) + 2.0)
                    / (beta.powi(3) * (4.0 * q * q - 1.0) * (2.0 * q - 3.0)),
            ];
            // independent polynomial product
            let tau_series: Vec<f64> =
                (0..=3).map(|j| if j % 2 == 1 { 0.0 } else { tau(j) }).collect();
            let m_series: Vec<f64> = (0..=3u32)
                .map(|k| {
                    let fact = (1..=k).fold(1.0f64, |p, i| p * i as f64);
                    (2.0 / beta).powi(k as i32) * relfd::scalar_special::pochhammer(-0.5, k)
                        / (fact * relfd::scalar_special::pochhammer(-q - 0.5, k))
                })
                .collect();
            let product = taylor_product_oracle(&tau_series, &m_series, 3).unwrap();
            for n in 0..=3 {
                if rel(a[n], closed[n]) > 1e-12 || rel(a[n], product[n]) > 1e-12 {
                    pass = false;
                }
            }
        }
    }
    report(
        7,
        "a_0..a_3 match the closed forms and the polynomial-product oracle to 1e-12",
        pass,
    );
}

#[test]
fn criterion_08_continuation_overlap_and_psi() {
    let mut pass = true;
    for &q in &[-0.9, -0.5, -0.1] {
        for &eta in &[-3.0, 0.0, 5.0] {
            let direct = fhat_direct(q, eta, 1e-13).unwrap().total();
            let theta = fhat_theta(q, eta, 1e-13).unwrap().total();
            if rel(direct, theta) > 1e-10 {
                pass = false;
            }
        }
    }
    let h = 1e-4;
    for k in 0..=2usize {
        for &eta in &[1.6, 4.5] {
            let q0 = -(k as f64) - 1.0;
            let fd = -(fhat(q0 + h, eta, 1e-13).unwrap() - fhat(q0 - h, eta, 1e-13).unwrap())
                / (2.0 * h);
            if (psi_aux(k, eta, 1e-13).unwrap() - fd).abs() > 1e-6 {
                pass = false;
            }
        }
    }
    report(
        8,
        "dual-route continuation agreement <= 1e-10; Psi_k finite-difference check <= 1e-6",
        pass,
    );
}

#[test]
fn criterion_09_cox_identity() {
    let mut pass = true;
    for &q in &[1.5, 2.5] {
        let m = (q + 1.5f64).round() as u32;
        for &(eta, beta) in &[(4.5, 20.0), (10.0, 50.0)] {
            let cox = cox_finite_sum(q, eta, beta).unwrap();
            let f_r = fd_rel_f_r(m, eta, beta).unwrap();
            if rel(cox, f_r) > 1e-13 {
                pass = false;
            }
        }
    }
    report(9, "finite Cox-type sum equals F^(R) to 1e-13", pass);
}

#[test]
fn criterion_10_structural_invariants() {
    let cfg = EvalConfig::default();
    let mut pass = true;
    // beta = 0 reduction
    for &q in &[0.25, 0.75, 1.5, 2.4] {
        for &eta in &[-7.0, -1.0, 3.0, 25.0] {
            let r = fd_rel_eval(&params(q, eta, 0.0), Method::Auto, &cfg).unwrap();
            let s = relfd::fd_standard::fd_std_eval(q, eta, &cfg).unwrap();
            if rel(r.value, s.value) > 1e-12 || r.value <= 0.0 {
                pass = false;
            }
        }
    }
    // monotonicity in eta and beta on a 3x3x3 grid, via the oracle
    for &q in &[0.25, 1.5, 3.0] {
        for &eta in &[-3.0, 1.0, 8.0] {
            for &beta in &[0.0, 1.0, 20.0] {
                let f = quad_fd_rel(&params(q, eta, beta), 1e-12).unwrap().value;
                let fe = quad_fd_rel(&params(q, eta + 0.5, beta), 1e-12).unwrap().value;
                let fb = quad_fd_rel(&params(q, eta, beta + 0.5), 1e-12).unwrap().value;
                if f <= 0.0 || fe <= f || fb < f {
                    pass = false;
                }
            }
        }
    }
    report(
        10,
        "beta=0 reduction <= 1e-12, positivity, and monotonicity in eta and beta",
        pass,
    );
}
