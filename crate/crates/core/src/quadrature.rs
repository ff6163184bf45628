//! Composite Simpson quadrature on uniform meshes.

/// Integral of samples `f` taken on a uniform mesh with (signed) spacing `h`.
///
/// An even number of intervals uses the plain composite rule; an odd number
/// closes the last three intervals with the 3/8 rule. A single interval falls
/// back to the trapezoid.
pub fn simpson(h: f64, f: &[f64]) -> f64 {
    let n = f.len();
    match n {
        0 | 1 => 0.0,
        2 => 0.5 * h * (f[0] + f[1]),
        _ => {
            let intervals = n - 1;
            let even_end = if intervals % 2 == 0 { n - 1 } else { n - 4 };
            let mut acc = 0.0;
            let mut i = 0;
            while i + 2 <= even_end {
                acc += f[i] + 4.0 * f[i + 1] + f[i + 2];
                i += 2;
            }
            let mut total = acc * h / 3.0;
            if intervals % 2 == 1 {
                let j = n - 4;
                total += 3.0 * h / 8.0 * (f[j] + 3.0 * f[j + 1] + 3.0 * f[j + 2] + f[j + 3]);
            }
            total
        }
    }
}

/// Running integrals `C[i] = ∫_{x_0}^{x_i} f` on a uniform mesh.
///
/// Even indices are composite Simpson sums; odd indices add one panel with the
/// three-point formula `h/12 (-f_{i-2} + 8 f_{i-1} + 5 f_i)`, or
/// `h/12 (5 f_0 + 8 f_1 - f_2)` for the first panel.
pub fn cumulative_simpson(h: f64, f: &[f64]) -> Vec<f64> {
    let n = f.len();
    let mut c = vec![0.0; n];
    if n < 2 {
        return c;
    }
    if n == 2 {
        c[1] = 0.5 * h * (f[0] + f[1]);
        return c;
    }
    c[1] = h / 12.0 * (5.0 * f[0] + 8.0 * f[1] - f[2]);
    for i in 2..n {
        c[i] = if i % 2 == 0 {
            c[i - 2] + h / 3.0 * (f[i - 2] + 4.0 * f[i - 1] + f[i])
        } else {
            c[i - 1] + h / 12.0 * (-f[i - 2] + 8.0 * f[i - 1] + 5.0 * f[i])
        };
    }
    c
}
