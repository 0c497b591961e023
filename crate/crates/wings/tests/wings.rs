use wingtail_core::{FnCurve, MgfCurve, Side};
use wingtail_wings::{
    c_tilde_constant, implied_vol_wing, lee_slope, local_vol_wing, WingConfig, WingError,
};

#[test]
fn lee_slope_examples() {
    assert!((lee_slope(1.0, Side::Right).unwrap() - 2.0).abs() < 1e-15);
    assert!((lee_slope(2.0, Side::Right).unwrap() - (6.0 - 4.0 * 2f64.sqrt())).abs() < 1e-14);
    assert!(lee_slope(1e6, Side::Right).unwrap() < 1e-5);
    assert!(lee_slope(1e6, Side::Left).unwrap() < 1e-5);
    assert!(matches!(lee_slope(0.5, Side::Right), Err(WingError::Domain(_))));
    assert!(matches!(lee_slope(0.0, Side::Left), Err(WingError::Domain(_))));
}

#[test]
fn lee_slope_stays_in_unit_interval_of_two() {
    for i in 0..200 {
        let mu = 1.0 + 0.05 * i as f64 + 1e-3 * (i * i) as f64;
        for side in [Side::Right, Side::Left] {
            let s = lee_slope(mu, side).unwrap();
            assert!((0.0..=2.0).contains(&s), "{side} mu*={mu} slope={s}");
        }
    }
    let s = lee_slope(1e-3, Side::Left).unwrap();
    assert!((0.0..=2.0).contains(&s));
}

fn pure_pole() -> FnCurve {
    FnCurve::pure_pole(Side::Right, 1.0, 2.0)
}

#[test]
fn pure_pole_implied_wing_is_hand_checkable() {
    let (omega, mu_star, k) = (1.0f64, 2.0, 100.0f64);
    let w = implied_vol_wing(&pure_pole(), 1.0, k, &WingConfig::default()).unwrap();
    let lambda_star = mu_star * k - 2.0 * (omega * k).sqrt();
    let second = 0.5 * omega.sqrt() * k.powf(-1.5);
    let c_tilde = -(k * second).ln() + c_tilde_constant(mu_star, Side::Right).unwrap();
    let x = lambda_star + 0.5 * c_tilde;
    let value = 4.0 * lambda_star + 2.0 * c_tilde - 2.0 * k - 4.0 * (x * (x - k)).sqrt();
    assert!((w.term("lambda_star").unwrap() - lambda_star).abs() < 1e-8);
    assert!((w.term("c_tilde").unwrap() - c_tilde).abs() < 1e-8);
    assert!((w.value - value).abs() < 1e-7 * value);
}

#[test]
fn pure_pole_slope_gap_shrinks() {
    let lee = 6.0 - 4.0 * 2f64.sqrt();
    let gaps: Vec<f64> = [50.0, 100.0, 200.0, 400.0]
        .iter()
        .map(|&k| {
            let w = implied_vol_wing(&pure_pole(), 1.0, k, &WingConfig::default()).unwrap();
            assert!(w.value > 0.0);
            (w.value / k - lee).abs()
        })
        .collect();
    for g in gaps.windows(2) {
        assert!(g[1] < g[0], "{gaps:?}");
    }
}

#[test]
fn right_wing_needs_critical_moment_above_one() {
    let curve = FnCurve::pure_pole(Side::Right, 1.0, 0.8);
    assert!(matches!(
        implied_vol_wing(&curve, 1.0, 10.0, &WingConfig::default()),
        Err(WingError::Domain(_))
    ));
}

#[test]
fn implied_wing_guard() {
    assert!(matches!(
        implied_vol_wing(&pure_pole(), 1.0, 1.0, &WingConfig::default()),
        Err(WingError::Regime { .. })
    ));
}

#[test]
fn constant_critical_moment_is_degenerate() {
    let curve = pure_pole();
    assert_eq!(curve.dmu_star_dt(1.0).unwrap(), 0.0);
    assert!(matches!(
        local_vol_wing(&curve, 1.0, 10.0, 0.0, &WingConfig::default()),
        Err(WingError::DegenerateWing { .. })
    ));
}
