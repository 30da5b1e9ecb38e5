//! Quadrature rules on uniform grids.

/// Composite Simpson rule on `[a, b]` with an even number of cells no wider
/// than `max_h`.
pub fn simpson<F>(f: F, a: f64, b: f64, max_h: f64) -> f64
where
    F: Fn(f64) -> f64,
{
    if a == b {
        return 0.0;
    }
    let cells = ((b - a).abs() / max_h).ceil().max(2.0) as usize;
    let cells = cells + cells % 2;
    let h = (b - a) / cells as f64;
    let mut odd = 0.0;
    let mut even = 0.0;
    for i in 1..cells {
        let v = f(a + i as f64 * h);
        if i % 2 == 1 {
            odd += v;
        } else {
            even += v;
        }
    }
    h / 3.0 * (f(a) + f(b) + 4.0 * odd + 2.0 * even)
}

/// Running integral `F[i] = ∫_{t_0}^{t_i} f` of uniformly spaced samples.
///
/// Each cell is integrated with the cubic through four neighbouring samples
/// (shifted one-sided at the ends), so `F` is accurate to `O(h^4)` at every
/// node, not only at even ones. Needs at least four samples.
pub fn cumulative_cubic(f: &[f64], h: f64) -> Vec<f64> {
    let n = f.len();
    assert!(n >= 4, "cumulative_cubic needs four samples");
    let w = h / 24.0;
    let mut out = Vec::with_capacity(n);
    out.push(0.0);
    let mut acc = 0.0;
    for i in 0..n - 1 {
        let cell = if i == 0 {
            9.0 * f[0] + 19.0 * f[1] - 5.0 * f[2] + f[3]
        } else if i == n - 2 {
            f[n - 4] - 5.0 * f[n - 3] + 19.0 * f[n - 2] + 9.0 * f[n - 1]
        } else {
            -f[i - 1] + 13.0 * f[i] + 13.0 * f[i + 1] - f[i + 2]
        };
        acc += w * cell;
        out.push(acc);
    }
    out
}
