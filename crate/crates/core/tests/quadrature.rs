use std::f64::consts::PI;
use transmission_sl::quadrature::*;

fn samples(n: usize, a: f64, b: f64, f: impl Fn(f64) -> f64) -> (f64, Vec<f64>) {
    let h = (b - a) / (n - 1) as f64;
    (h, (0..n).map(|i| f(a + h * i as f64)).collect())
}

#[test]
fn exact_for_cubics_even_and_odd() {
    for n in [3, 4, 5, 8, 9, 64, 65] {
        let (h, f) = samples(n, -1.0, 2.0, |x| x * x * x - 2.0 * x + 1.0);
        let exact = (16.0 / 4.0 - 4.0 + 2.0) - (0.25 - 1.0 - 1.0);
        assert!((simpson(h, &f) - exact).abs() < 1e-12, "n = {n}");
    }
}

#[test]
fn sine_squared_normalisation() {
    let (h, f) = samples(513, -PI, PI, |x| (x + PI).sin().powi(2));
    assert!((simpson(h, &f) - PI).abs() < 1e-10);
}

#[test]
fn cumulative_matches_antiderivative() {
    let (h, f) = samples(1025, 0.0, PI, |x| (3.0 * x).cos());
    let c = cumulative_simpson(h, &f);
    for (i, ci) in c.iter().enumerate() {
        let x = h * i as f64;
        assert!((ci - (3.0 * x).sin() / 3.0).abs() < 1e-9, "i = {i}");
    }
}

#[test]
fn cumulative_reverse_direction() {
    let (h, f) = samples(101, PI, 0.0, |x| x);
    let c = cumulative_simpson(h, &f);
    let last = c[100];
    assert!((last - (0.0 - PI * PI / 2.0)).abs() < 1e-12);
}
