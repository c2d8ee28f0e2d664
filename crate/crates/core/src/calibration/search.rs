//! One-dimensional minimisers used by the coordinate-wise fit.

use alloc::vec::Vec;

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// `n` points spaced evenly in log space over `[lo, hi]`.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (libm::log(lo), libm::log(hi));
    match n {
        0 => Vec::new(),
        1 => alloc::vec![libm::exp((a + b) / 2.0)],
        _ => (0..n).map(|i| libm::exp(a + (b - a) * i as f64 / (n - 1) as f64)).collect(),
    }
}

/// Golden-section search for a minimum of `f` on `[a, b]`, stopping once the
/// bracket is narrower than `rel_tol` relative to its midpoint.
pub fn golden_section<F: FnMut(f64) -> f64>(mut f: F, mut a: f64, mut b: f64, rel_tol: f64) -> (f64, f64) {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..200 {
        if (b - a).abs() <= rel_tol * (0.5 * (a + b)).abs().max(1e-12) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    if fc < fd { (c, fc) } else { (d, fd) }
}

/// Newton iterations on central-difference derivatives with step
/// `1e-4·|x|`, kept inside `[lo, hi]`. A step is only taken when it lowers
/// `f`; the iteration stops at a non-convex point.
pub fn newton_polish<F: FnMut(f64) -> f64>(mut f: F, x0: f64, fx0: f64, lo: f64, hi: f64, max_iter: usize) -> (f64, f64) {
    let (mut x, mut fx) = (x0, fx0);
    for _ in 0..max_iter {
        let h = 1e-4 * x.abs().max(1e-8);
        let (fp, fm) = (f(x + h), f(x - h));
        let grad = (fp - fm) / (2.0 * h);
        let curv = (fp - 2.0 * fx + fm) / (h * h);
        if !(curv > 0.0) || !grad.is_finite() {
            break;
        }
        let next = (x - grad / curv).clamp(lo, hi);
        if (next - x).abs() <= 1e-12 * x.abs().max(1e-12) {
            break;
        }
        let f_next = f(next);
        if f_next < fx {
            x = next;
            fx = f_next;
        } else {
            break;
        }
    }
    (x, fx)
}
