//! Internal quadrature engine: a 15-point Gauss-Kronrod rule driven by
//! deterministic worst-panel bisection, plus fixed-order Gauss-Legendre with
//! order doubling for smooth finite-interval integrands.

use crate::error::{FdError, Result};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

// 15-point Kronrod abscissae on [-1, 1] (positive half) and weights, with the
// embedded 7-point Gauss weights. Standard QUADPACK dqk15 constants.
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// One Gauss-Kronrod application on [a, b]: (value, error estimate, ∫|f|).
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = f(center);

    let mut res_kronrod = f_center * WGK[7];
    let mut res_gauss = f_center * WG[3];
    let mut res_abs = res_kronrod.abs();
    let mut fv = [0.0f64; 14];

    for j in 0..7 {
        let x = half * XGK[j];
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv[j] = f1;
        fv[j + 7] = f2;
        res_kronrod += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_gauss += WG[j / 2] * (f1 + f2);
        }
    }

    let mean = res_kronrod * 0.5;
    let mut res_asc = WGK[7] * (f_center - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv[j] - mean).abs() + (fv[j + 7] - mean).abs());
    }

    let value = res_kronrod * half;
    res_abs *= half.abs();
    res_asc *= half.abs();

    // QUADPACK error rescaling
    let mut err = ((res_kronrod - res_gauss) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        let scale = (200.0 * err / res_asc).powf(1.5);
        err = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    (value, err, res_abs)
}

/// Neumaier-compensated sum; keeps panel totals at full double accuracy.
fn compensated_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
    resabs: f64,
}

/// Outcome of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub(crate) struct QuadOutcome {
    pub value: f64,
    pub abs_err: f64,
    pub evaluations: usize,
}

/// Adaptive Gauss-Kronrod on a finite interval list. The panels come from the
/// caller (domain splits at integrand knees); the worst panel, found by linear
/// scan with lowest-index tie break, is bisected until the summed error meets
/// `tol_abs + tol_rel · |I|` or the panel budget runs out.
pub(crate) fn adaptive_gk<F: Fn(f64) -> f64>(
    f: &F,
    edges: &[f64],
    tol_rel: f64,
    tol_abs: f64,
    max_panels: usize,
) -> Result<QuadOutcome> {
    assert!(edges.len() >= 2, "need at least one interval");
    let mut panels: Vec<Panel> = Vec::with_capacity(max_panels.min(256));
    let mut evals = 0usize;
    for w in edges.windows(2) {
        if w[1] <= w[0] {
            continue;
        }
        let (value, err, resabs) = gk15(f, w[0], w[1]);
        evals += 15;
        panels.push(Panel {
            a: w[0],
            b: w[1],
            value,
            err,
            resabs,
        });
    }

    loop {
        let total: f64 = compensated_sum(panels.iter().map(|p| p.value));
        let total_err: f64 = panels.iter().map(|p| p.err).sum();
        let total_resabs: f64 = panels.iter().map(|p| p.resabs).sum();
        let target = tol_abs + tol_rel * total.abs();
        // per-panel error estimates floor at ~50 ε ∫|f|; refinement past the
        // summed floor cannot improve the double-precision result
        let floor = 100.0 * f64::EPSILON * total_resabs;
        if total_err <= target.max(floor) {
            return Ok(QuadOutcome {
                value: total,
                abs_err: total_err,
                evaluations: evals,
            });
        }
        if panels.len() >= max_panels {
            return Err(FdError::Convergence {
                context: "adaptive Gauss-Kronrod quadrature",
                achieved: total_err,
                steps: evals,
            });
        }
        let mut worst = 0;
        for (i, p) in panels.iter().enumerate() {
            if p.err > panels[worst].err {
                worst = i;
            }
        }
        let Panel { a, b, .. } = panels[worst];
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            // interval no longer splittable in f64; accept what we have
            return Ok(QuadOutcome {
                value: total,
                abs_err: total_err,
                evaluations: evals,
            });
        }
        let (v1, e1, r1) = gk15(f, a, mid);
        let (v2, e2, r2) = gk15(f, mid, b);
        evals += 30;
        panels[worst] = Panel {
            a,
            b: mid,
            value: v1,
            err: e1,
            resabs: r1,
        };
        panels.push(Panel {
            a: mid,
            b,
            value: v2,
            err: e2,
            resabs: r2,
        });
    }
}

/// Adaptive integral over [a, ∞): x = a + t/(1−t) maps t ∈ [0, 1). The
/// integrand must decay fast enough that g(t) → 0 as t → 1.
pub(crate) fn adaptive_gk_tail<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    interior_knees: &[f64],
    tol_rel: f64,
    tol_abs: f64,
    max_panels: usize,
) -> Result<QuadOutcome> {
    let g = |t: f64| {
        let om = 1.0 - t;
        if om <= 1e-300 {
            return 0.0;
        }
        let x = a + t / om;
        let v = f(x) / (om * om);
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    // knees map to t = (x−a)/(1+x−a)
    let mut edges = vec![0.0];
    for &x in interior_knees {
        if x > a {
            edges.push((x - a) / (1.0 + x - a));
        }
    }
    edges.push(0.5);
    edges.push(1.0);
    edges.sort_by(|p, q| p.partial_cmp(q).unwrap());
    edges.dedup();
    adaptive_gk(&g, &edges, tol_rel, tol_abs, max_panels)
}

/// Gauss-Legendre nodes/weights on [-1, 1], cached per order.
fn gl_rule(n: usize) -> Arc<(Vec<f64>, Vec<f64>)> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<(Vec<f64>, Vec<f64>)>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap();
    guard
        .entry(n)
        .or_insert_with(|| Arc::new(compute_gl_rule(n)))
        .clone()
}

/// Newton iteration on the Legendre polynomial recurrence.
fn compute_gl_rule(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    let legendre = |x: f64| {
        // P_n(x) and P'_n(x) by the 3-term recurrence
        let mut p0 = 1.0;
        let mut p1 = x;
        for k in 2..=n {
            let kf = k as f64;
            let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
            p0 = p1;
            p1 = p2;
        }
        (p1, n as f64 * (x * p1 - p0) / (x * x - 1.0))
    };
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre(x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        // weight from the derivative at the converged node
        let (_, dp) = legendre(x);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Fixed-order Gauss-Legendre on [a, b]: (value, Σ w|f| — the roundoff scale).
fn gauss_legendre_l1<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, order: usize) -> (f64, f64) {
    let rule = gl_rule(order);
    let (nodes, weights) = (&rule.0, &rule.1);
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut sum = 0.0;
    let mut l1 = 0.0;
    for (x, w) in nodes.iter().zip(weights) {
        let v = f(c + h * x);
        sum += w * v;
        l1 += w * v.abs();
    }
    (sum * h, l1 * h.abs())
}

/// Fixed-order Gauss-Legendre on [a, b].
pub(crate) fn gauss_legendre<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, order: usize) -> f64 {
    gauss_legendre_l1(f, a, b, order).0
}

/// Gauss-Legendre with order doubling 16 → 32 → … until two successive
/// estimates agree to `tol` relative (smooth non-periodic integrands). A
/// cancellation-aware floor of 100 ε ∫|f| keeps oscillatory integrands with
/// small values from demanding sub-roundoff agreement.
pub(crate) fn gauss_legendre_doubling<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<f64> {
    let mut prev = gauss_legendre(f, a, b, 16);
    for order in [32usize, 64, 128, 256, 512] {
        let (cur, l1) = gauss_legendre_l1(f, a, b, order);
        if (cur - prev).abs() <= tol * cur.abs() + 100.0 * f64::EPSILON * l1 + 1e-305 {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(FdError::Convergence {
        context: "Gauss-Legendre order doubling",
        achieved: prev,
        steps: 512,
    })
}
