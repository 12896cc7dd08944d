//! Fixed-step quadrature used by the normalization and transform checks.

/// Composite Simpson rule on `[lo, hi]` with step close to `step`.
///
/// The interval count is rounded up to the next even number so the rule is
/// always well formed.
pub fn simpson<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, step: f64) -> f64 {
    assert!(hi > lo && step > 0.0, "simpson: need hi > lo and step > 0");
    let mut n = ((hi - lo) / step).ceil() as usize;
    n = n.max(2);
    if n % 2 == 1 {
        n += 1;
    }
    let h = (hi - lo) / n as f64;
    let mut odd = 0.0;
    let mut even = 0.0;
    for i in 1..n {
        let v = f(lo + i as f64 * h);
        if i % 2 == 1 {
            odd += v;
        } else {
            even += v;
        }
    }
    (f(lo) + f(hi) + 4.0 * odd + 2.0 * even) * h / 3.0
}
