//! Shared numerical primitives: trapezoid quadrature with exact interval
//! additivity, adaptive Simpson, deterministic bisection, secant, an adaptive
//! Runge-Kutta step for scalar autonomous ODEs, and finite-difference stencils
//! on (possibly non-uniform) node sets.

/// Composite trapezoid of sampled values over the full node range.
pub fn trapezoid(nodes: &[f64], values: &[f64]) -> f64 {
    debug_assert_eq!(nodes.len(), values.len());
    let mut acc = 0.0;
    for i in 1..nodes.len() {
        acc += 0.5 * (nodes[i] - nodes[i - 1]) * (values[i] + values[i - 1]);
    }
    acc
}

/// Prefix integrals of the piecewise-linear interpolant: `out[i] = int_{x0}^{xi}`.
pub fn cumulative_trapezoid(nodes: &[f64], values: &[f64]) -> Vec<f64> {
    debug_assert_eq!(nodes.len(), values.len());
    let mut out = Vec::with_capacity(nodes.len());
    let mut acc = 0.0;
    out.push(0.0);
    for i in 1..nodes.len() {
        acc += 0.5 * (nodes[i] - nodes[i - 1]) * (values[i] + values[i - 1]);
        out.push(acc);
    }
    out
}

/// Index of the cell `[nodes[i], nodes[i+1])` containing `x` (clamped to the
/// last cell for `x = nodes[last]`).
pub fn find_cell(nodes: &[f64], x: f64) -> usize {
    match nodes.binary_search_by(|v| v.partial_cmp(&x).unwrap()) {
        Ok(i) => i.min(nodes.len() - 2),
        Err(i) => i.saturating_sub(1).min(nodes.len() - 2),
    }
}

/// Linear interpolation of sampled values at `x` (clamped to the node range).
pub fn interp_linear(nodes: &[f64], values: &[f64], x: f64) -> f64 {
    if x <= nodes[0] {
        return values[0];
    }
    if x >= nodes[nodes.len() - 1] {
        return values[values.len() - 1];
    }
    let i = find_cell(nodes, x);
    let w = (x - nodes[i]) / (nodes[i + 1] - nodes[i]);
    values[i] * (1.0 - w) + values[i + 1] * w
}

/// Antiderivative of the piecewise-linear interpolant, evaluated at `x`,
/// given precomputed prefix integrals. Interval integrals obtained as
/// differences of this function are exactly additive over adjacent intervals.
pub fn antiderivative_at(nodes: &[f64], values: &[f64], cumulative: &[f64], x: f64) -> f64 {
    if x <= nodes[0] {
        return 0.0;
    }
    if x >= nodes[nodes.len() - 1] {
        return cumulative[cumulative.len() - 1];
    }
    let i = find_cell(nodes, x);
    let fx = interp_linear(nodes, values, x);
    cumulative[i] + 0.5 * (x - nodes[i]) * (values[i] + fx)
}

/// Integral of the piecewise-linear interpolant over `[a, b]`.
pub fn integral_between(nodes: &[f64], values: &[f64], cumulative: &[f64], a: f64, b: f64) -> f64 {
    antiderivative_at(nodes, values, cumulative, b) - antiderivative_at(nodes, values, cumulative, a)
}

/// Adaptive Simpson quadrature of `f` over `[a, b]` (handles `a > b` by sign).
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    if a > b {
        return -adaptive_simpson(f, b, a, tol);
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    simpson_recurse(f, a, b, fa, fm, fb, simpson_rule(a, b, fa, fm, fb), tol, 40)
}

fn simpson_rule(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn simpson_recurse<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson_rule(a, m, fa, flm, fm);
    let right = simpson_rule(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        left + right + delta / 15.0
    } else {
        simpson_recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + simpson_recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
}

/// Deterministic bisection for a root of `f` on `[lo, hi]`, assuming
/// `f(lo) <= 0 <= f(hi)`. Returns the midpoint once the bracket shrinks below
/// `rel_tol` relative to its midpoint (absolute near zero). Identical inputs
/// produce bitwise-identical output.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, rel_tol: f64) -> f64 {
    debug_assert!(lo < hi);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let scale = mid.abs().max(1e-300);
        if (hi - lo) <= rel_tol * scale || mid <= lo || mid >= hi {
            return mid;
        }
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Secant iteration for `f(x) = 0` starting from `x0`, `x1`.
pub fn secant<F: Fn(f64) -> f64>(f: F, mut x0: f64, mut x1: f64, tol: f64, max_iter: usize) -> Option<f64> {
    let mut f0 = f(x0);
    let mut f1 = f(x1);
    for _ in 0..max_iter {
        if (f1 - f0).abs() < 1e-300 {
            return None;
        }
        let x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
        if !x2.is_finite() {
            return None;
        }
        if (x2 - x1).abs() <= tol * (1.0 + x2.abs()) {
            return Some(x2);
        }
        x0 = x1;
        f0 = f1;
        x1 = x2;
        f1 = f(x1);
    }
    None
}

/// One adaptive Cash-Karp RK45 integration of the scalar autonomous ODE
/// `dy/ds = f(y)` from `s0` to `s1`, with absolute step-error tolerance `tol`.
pub fn integrate_autonomous<F: Fn(f64) -> f64>(f: &F, mut y: f64, s0: f64, s1: f64, tol: f64) -> f64 {
    if s0 == s1 {
        return y;
    }
    let dir = if s1 > s0 { 1.0 } else { -1.0 };
    let mut s = s0;
    let mut h = dir * (s1 - s0).abs().min(0.1);
    let mut guard = 0usize;
    while (s1 - s) * dir > 0.0 {
        if (s + h - s1) * dir > 0.0 {
            h = s1 - s;
        }
        let (y5, err) = cash_karp_step(f, y, h);
        let scale = tol;
        if err <= scale || h.abs() < 1e-14 {
            s += h;
            y = y5;
            let grow = if err > 1e-300 { 0.9 * (scale / err).powf(0.2) } else { 5.0 };
            h *= grow.clamp(0.2, 5.0);
        } else {
            h *= (0.9 * (scale / err).powf(0.25)).clamp(0.1, 0.9);
        }
        guard += 1;
        if guard > 1_000_000 {
            break;
        }
    }
    y
}

fn cash_karp_step<F: Fn(f64) -> f64>(f: &F, y: f64, h: f64) -> (f64, f64) {
    let k1 = f(y);
    let k2 = f(y + h * (0.2 * k1));
    let k3 = f(y + h * (0.075 * k1 + 0.225 * k2));
    let k4 = f(y + h * (0.3 * k1 - 0.9 * k2 + 1.2 * k3));
    let k5 = f(y + h * (-11.0 / 54.0 * k1 + 2.5 * k2 - 70.0 / 27.0 * k3 + 35.0 / 27.0 * k4));
    let k6 = f(y
        + h * (1631.0 / 55296.0 * k1
            + 175.0 / 512.0 * k2
            + 575.0 / 13824.0 * k3
            + 44275.0 / 110592.0 * k4
            + 253.0 / 4096.0 * k5));
    let y5 = y + h * (37.0 / 378.0 * k1 + 250.0 / 621.0 * k3 + 125.0 / 594.0 * k4 + 512.0 / 1771.0 * k6);
    let y4 = y + h
        * (2825.0 / 27648.0 * k1
            + 18575.0 / 48384.0 * k3
            + 13525.0 / 55296.0 * k4
            + 277.0 / 14336.0 * k5
            + 0.25 * k6);
    (y5, (y5 - y4).abs())
}

/// C^2 quintic step: 0 for `x <= 0`, 1 for `x >= 1`, `6x^5 - 15x^4 + 10x^3` between.
pub fn smootherstep(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else {
        x * x * x * (x * (x * 6.0 - 15.0) + 10.0)
    }
}

/// Second-order first derivative of sampled values on a strictly increasing
/// node set: centered three-point stencils inside, one-sided at the ends.
pub fn derivative(nodes: &[f64], values: &[f64]) -> Vec<f64> {
    let n = nodes.len();
    debug_assert!(n >= 3);
    let mut out = vec![0.0; n];
    out[0] = one_sided(nodes[0], nodes[1], nodes[2], values[0], values[1], values[2]);
    out[n - 1] = one_sided(
        nodes[n - 1],
        nodes[n - 2],
        nodes[n - 3],
        values[n - 1],
        values[n - 2],
        values[n - 3],
    );
    for i in 1..n - 1 {
        let hl = nodes[i] - nodes[i - 1];
        let hr = nodes[i + 1] - nodes[i];
        out[i] = -hr / (hl * (hl + hr)) * values[i - 1] + (hr - hl) / (hl * hr) * values[i]
            + hl / (hr * (hl + hr)) * values[i + 1];
    }
    out
}

fn one_sided(x0: f64, x1: f64, x2: f64, f0: f64, f1: f64, f2: f64) -> f64 {
    f0 * (2.0 * x0 - x1 - x2) / ((x0 - x1) * (x0 - x2))
        + f1 * (x0 - x2) / ((x1 - x0) * (x1 - x2))
        + f2 * (x0 - x1) / ((x2 - x0) * (x2 - x1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trapezoid_linear_exact() {
        let nodes: Vec<f64> = (0..=100).map(|i| i as f64 * 0.01).collect();
        let values: Vec<f64> = nodes.iter().map(|&r| 3.0 * r + 1.0).collect();
        let exact = 1.5 + 1.0;
        assert!((trapezoid(&nodes, &values) - exact).abs() < 1e-14);
    }

    #[test]
    fn interval_integrals_are_additive() {
        let nodes: Vec<f64> = (0..=57).map(|i| (i as f64).sqrt()).collect();
        let values: Vec<f64> = nodes.iter().map(|&r| (r * 1.3).sin() + 2.0).collect();
        let cum = cumulative_trapezoid(&nodes, &values);
        let (a, b, c) = (0.3, 2.71, 6.4);
        let whole = integral_between(&nodes, &values, &cum, a, c);
        let split = integral_between(&nodes, &values, &cum, a, b)
            + integral_between(&nodes, &values, &cum, b, c);
        assert!((whole - split).abs() <= 1e-12 * whole.abs());
    }

    #[test]
    fn simpson_matches_closed_form() {
        let val = adaptive_simpson(&|x: f64| x.sin(), 0.0, std::f64::consts::PI, 1e-13);
        assert!((val - 2.0).abs() < 1e-11);
    }

    #[test]
    fn bisect_finds_sqrt2() {
        let root = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-12);
        assert!((root - std::f64::consts::SQRT_2).abs() < 1e-11);
    }

    #[test]
    fn bisect_is_bitwise_deterministic() {
        let a = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-12);
        let b = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-12);
        assert_eq!(a.to_bits(), b.to_bits());
    }

    #[test]
    fn secant_solves_cubic() {
        let root = secant(|x| x * x * x - 8.0, 1.0, 3.0, 1e-13, 100).unwrap();
        assert!((root - 2.0).abs() < 1e-10);
    }

    #[test]
    fn rk_integrates_logistic_sine() {
        // dy/ds = sin(y) from y(0) = pi/2 has solution y = 2 atan(e^s).
        let y = integrate_autonomous(&|y: f64| y.sin(), std::f64::consts::FRAC_PI_2, 0.0, 1.5, 1e-12);
        let exact = 2.0 * (1.5f64.exp()).atan();
        assert!((y - exact).abs() < 1e-9, "y = {y}, exact = {exact}");
    }

    #[test]
    fn derivative_second_order() {
        let nodes: Vec<f64> = (0..=200).map(|i| i as f64 * 0.005).collect();
        let values: Vec<f64> = nodes.iter().map(|&r| (2.0 * r).sin()).collect();
        let d = derivative(&nodes, &values);
        for (i, &r) in nodes.iter().enumerate() {
            let exact = 2.0 * (2.0 * r).cos();
            assert!((d[i] - exact).abs() < 2e-4, "node {i}: {} vs {exact}", d[i]);
        }
    }

    #[test]
    fn smootherstep_endpoints() {
        assert_eq!(smootherstep(-1.0), 0.0);
        assert_eq!(smootherstep(2.0), 1.0);
        assert!((smootherstep(0.5) - 0.5).abs() < 1e-15);
    }
}
