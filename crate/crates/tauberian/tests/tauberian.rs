use wingtail_core::{FnCurve, Side};
use wingtail_tauberian::{ratio_correction, tail_expansion, tail_expansion_with, TailConfig, TauberianError};

fn chi_square() -> FnCurve {
    FnCurve::new(Side::Right, 0.5, 1.0, |m| -0.5 * (1.0 - 2.0 * m).ln() + m / (1.0 - 2.0 * m))
}

/// Exact tail of Z^2 with Z ~ N(1, 1).
fn chi_square_tail(x: f64) -> f64 {
    let r = x.sqrt();
    wingtail_core::normal::sf(r - 1.0) + wingtail_core::normal::sf(r + 1.0)
}

#[test]
fn pure_pole_bracket_terms() {
    // Lambda = 1/(1 - mu): p* = 1 - x^{-1/2}, Lambda* = x - 2 sqrt(x), p*' = x^{-3/2}/2.
    // Bracket terms at x = 100 from 40-digit arithmetic: 0.009911... and 0.000167...
    let curve = FnCurve::pure_pole(Side::Right, 1.0, 1.0);
    let e = tail_expansion(&curve, 1.0, 100.0).unwrap();
    let leading = 0.009_911_800_645_293_173;
    let correction = 0.000_167_261_635_889_322_3;
    assert!((e.leading / leading - 1.0).abs() < 1e-4);
    assert!((e.correction / correction - 1.0).abs() < 1e-4);
    assert!((e.lambda_star - 80.0).abs() < 1e-8);
    let expected = (-80f64).exp() * (leading - correction);
    assert!((e.prob / expected - 1.0).abs() < 1e-4);
}

#[test]
fn regime_guard_rejects_moderate_x() {
    let curve = chi_square();
    assert!(matches!(tail_expansion(&curve, 1.0, 4.0), Err(TauberianError::Regime { .. })));
}

#[test]
fn chi_square_tail_at_36_has_the_frozen_error() {
    // Exact tail 2.8665e-7; the two-term expansion sits 7.29% above it
    // (50-digit evaluation of the same formula). The remainder is O(1/x).
    let curve = chi_square();
    let config = TailConfig { guard_ratio: 0.7 };
    let e = tail_expansion_with(&curve, 1.0, 36.0, &config).unwrap();
    let exact = chi_square_tail(36.0);
    assert!((exact / 2.866_528_516_917_378e-7 - 1.0).abs() < 1e-9);
    let rel = (e.prob / exact - 1.0).abs();
    assert!((rel - 0.072_895_684_485).abs() < 1e-6, "relative error {rel}");
}

#[test]
fn chi_square_error_decreases() {
    let curve = chi_square();
    let config = TailConfig { guard_ratio: 0.7 };
    let errs: Vec<f64> = [16.0, 25.0, 36.0, 49.0]
        .iter()
        .map(|&x| (tail_expansion_with(&curve, 1.0, x, &config).unwrap().prob / chi_square_tail(x) - 1.0).abs())
        .collect();
    for w in errs.windows(2) {
        assert!(w[1] < w[0], "{errs:?}");
    }
}

#[test]
fn second_order_term_decays_like_inverse_square_root() {
    // On the pure pole ln(prob) + Lambda* - ln(leading) = ln(1 - correction/leading),
    // and correction/leading ~ c x^{-1/2}.
    let curve = FnCurve::pure_pole(Side::Right, 1.0, 1.0);
    let xs = [100.0, 400.0, 1600.0, 6400.0];
    let gaps: Vec<f64> = xs
        .iter()
        .map(|&x| {
            let e = tail_expansion(&curve, 1.0, x).unwrap();
            (e.log_prob + e.lambda_star - e.leading.ln()).abs()
        })
        .collect();
    let n = xs.len() as f64;
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let lg: Vec<f64> = gaps.iter().map(|g| g.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let mg = lg.iter().sum::<f64>() / n;
    let slope = lx.iter().zip(&lg).map(|(a, b)| (a - mx) * (b - mg)).sum::<f64>()
        / lx.iter().map(|a| (a - mx) * (a - mx)).sum::<f64>();
    assert!((slope + 0.5).abs() < 0.1, "fitted exponent {slope}");
}

#[test]
fn ratio_correction_trivial_gammas() {
    let curve = FnCurve::pure_pole(Side::Right, 1.0, 2.0);
    assert_eq!(ratio_correction(&curve, 1.0, 100.0, 0.0).unwrap().1, 1.0);
    assert_eq!(ratio_correction(&curve, 1.0, 100.0, 1.0).unwrap().1, 1.0);
}

#[test]
fn ratio_correction_pure_pole() {
    let curve = FnCurve::pure_pole(Side::Right, 1.0, 2.0);
    let (eval, factor) = ratio_correction(&curve, 1.0, 100.0, 0.5).unwrap();
    assert!((factor - 0.9975).abs() < 1e-9);
    assert!((eval - 1e4).abs() < 1e-5);
}

#[test]
fn ratio_correction_tends_to_one() {
    let curves = [FnCurve::pure_pole(Side::Right, 1.0, 2.0), chi_square()];
    for curve in &curves {
        for &g in &[-1.0, 0.5, 2.0] {
            let f: Vec<f64> = [10.0, 100.0, 1000.0]
                .iter()
                .map(|&x| (ratio_correction(curve, 1.0, x, g).unwrap().1 - 1.0).abs())
                .collect();
            assert!(f[2] < f[1] && f[1] < f[0], "gamma {g}: {f:?}");
            assert!(f[2] < 1e-2);
        }
    }
}
