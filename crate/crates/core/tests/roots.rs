use transmission_sl::roots::*;
use transmission_sl::*;

#[test]
fn brent_finds_cubic_root() {
    let f = |x: f64| Ok(x * x * x - 2.0 * x - 5.0);
    let r = brent(f, 2.0, 3.0, -1.0, 16.0, |_| 1e-14).unwrap();
    assert!((r - 2.094_551_481_542_326_5).abs() < 1e-13);
}

#[test]
fn brent_rejects_same_sign() {
    let f = |x: f64| Ok(x * x + 1.0);
    assert!(matches!(
        brent(f, -1.0, 1.0, 2.0, 2.0, |_| 1e-12),
        Err(Error::LostBracket { .. })
    ));
}

#[test]
fn brent_propagates_errors() {
    let f = |_: f64| Err(Error::InvalidInput("boom".into()));
    assert!(brent(f, 0.0, 1.0, -1.0, 1.0, |_| 1e-12).is_err());
}

#[test]
fn brent_tiny_root_near_zero() {
    let f = |x: f64| Ok(x - 1e-17);
    let r = brent(f, -1e-3, 1e-3, -1e-3, 1e-3, |b| 1e-12 * (b.abs() + 1e-12)).unwrap();
    assert!((r - 1e-17).abs() < 1e-22);
}

#[test]
fn golden_quadratic() {
    let (x, fx) = golden_min(|x| Ok((x - 0.3).powi(2) + 1.0), -1.0, 2.0, 1e-10).unwrap();
    assert!((x - 0.3).abs() < 1e-7);
    assert!((fx - 1.0).abs() < 1e-15);
}
