//! Small scalar solvers: a bracketed bisection/secant hybrid and golden-section
//! minimisation.

/// Root of `f` on `[a, b]`, which must bracket a sign change.
///
/// Each iteration tries a secant step and falls back to bisection whenever the
/// secant point leaves the current bracket. Returns `None` if `f(a)` and `f(b)`
/// have the same sign or either is not finite.
pub fn bracketed_root<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Option<f64> {
    let (mut a, mut b) = (a.min(b), a.max(b));
    let mut fa = f(a);
    let mut fb = f(b);
    if !fa.is_finite() || !fb.is_finite() {
        return None;
    }
    if fa == 0.0 {
        return Some(a);
    }
    if fb == 0.0 {
        return Some(b);
    }
    if fa.signum() == fb.signum() {
        return None;
    }
    for _ in 0..200 {
        if b - a <= tol {
            break;
        }
        let mid = 0.5 * (a + b);
        let sec = b - fb * (b - a) / (fb - fa);
        // only accept the secant point when it lands well inside the bracket
        let margin = 0.1 * (b - a);
        let x = if sec.is_finite() && sec > a + margin && sec < b - margin {
            sec
        } else {
            mid
        };
        let fx = f(x);
        if fx == 0.0 {
            return Some(x);
        }
        if fx.signum() == fa.signum() {
            a = x;
            fa = fx;
        } else {
            b = x;
            fb = fx;
        }
    }
    Some(if fa.abs() < fb.abs() { a } else { b })
}

/// Minimiser of a unimodal `f` on `[a, b]`; returns `(x, f(x))`.
pub fn golden_min<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> (f64, f64) {
    let inv_phi = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (a.min(b), a.max(b));
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while b - a > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    let fx = f(x);
    [(x, fx), (c, fc), (d, fd)]
        .into_iter()
        .fold((x, fx), |best, p| if p.1 < best.1 { p } else { best })
}
