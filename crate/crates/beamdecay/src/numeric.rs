//! Small shared numeric helpers: quadrature, finite differences on uniform
//! grids, and the fixed-precision rounding used by table output.

/// Composite Simpson rule on uniformly spaced samples with spacing `h`.
///
/// Needs at least two samples. An odd interval count is handled by closing
/// the last interval with the trapezoid rule.
pub fn simpson(values: &[f64], h: f64) -> f64 {
    let n = values.len();
    assert!(n >= 2, "simpson needs at least two samples");
    let intervals = n - 1;
    let even_intervals = if intervals % 2 == 0 {
        intervals
    } else {
        intervals - 1
    };
    let mut sum = 0.0;
    let mut i = 0;
    while i + 2 <= even_intervals {
        sum += (values[i] + 4.0 * values[i + 1] + values[i + 2]) * h / 3.0;
        i += 2;
    }
    if intervals % 2 != 0 {
        sum += 0.5 * h * (values[n - 2] + values[n - 1]);
    }
    sum
}

/// Second derivative samples of a uniformly sampled function.
///
/// Central differences inside, one-sided second-order stencils at both ends.
pub fn second_derivative(values: &[f64], h: f64) -> Vec<f64> {
    let n = values.len();
    assert!(n >= 4, "second_derivative needs at least four samples");
    let h2 = h * h;
    let mut d = vec![0.0; n];
    d[0] = (2.0 * values[0] - 5.0 * values[1] + 4.0 * values[2] - values[3]) / h2;
    for i in 1..n - 1 {
        d[i] = (values[i - 1] - 2.0 * values[i] + values[i + 1]) / h2;
    }
    d[n - 1] = (2.0 * values[n - 1] - 5.0 * values[n - 2] + 4.0 * values[n - 3] - values[n - 4]) / h2;
    d
}

/// First derivative samples on a uniform grid, second order everywhere.
pub fn first_derivative(values: &[f64], h: f64) -> Vec<f64> {
    let n = values.len();
    assert!(n >= 3, "first_derivative needs at least three samples");
    let mut d = vec![0.0; n];
    d[0] = (-3.0 * values[0] + 4.0 * values[1] - values[2]) / (2.0 * h);
    for i in 1..n - 1 {
        d[i] = (values[i + 1] - values[i - 1]) / (2.0 * h);
    }
    d[n - 1] = (3.0 * values[n - 1] - 4.0 * values[n - 2] + values[n - 3]) / (2.0 * h);
    d
}

/// One-sided second-order slope estimates at the two ends of a uniform grid.
pub fn end_slopes(values: &[f64], h: f64) -> (f64, f64) {
    let n = values.len();
    assert!(n >= 3, "end_slopes needs at least three samples");
    let left = (-3.0 * values[0] + 4.0 * values[1] - values[2]) / (2.0 * h);
    let right = (3.0 * values[n - 1] - 4.0 * values[n - 2] + values[n - 3]) / (2.0 * h);
    (left, right)
}

/// `n` evenly spaced points covering `[0, length]` inclusive.
pub fn linspace(length: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2);
    let h = length / (n - 1) as f64;
    (0..n).map(|i| i as f64 * h).collect()
}

/// Round to `digits` significant decimal digits, ties to even.
pub fn round_sig(x: f64, digits: i32) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let magnitude = x.abs().log10().floor() as i32;
    let factor = 10f64.powi(digits - 1 - magnitude);
    (x * factor).round_ties_even() / factor
}

/// Round to `decimals` places after the point, ties to even.
pub fn round_dp(x: f64, decimals: i32) -> f64 {
    let factor = 10f64.powi(decimals);
    (x * factor).round_ties_even() / factor
}

/// Fixed 17-significant-digit formatting used for every CSV cell.
pub fn fmt_csv(x: f64) -> String {
    format!("{:.16e}", x)
}
