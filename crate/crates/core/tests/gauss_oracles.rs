//! The normal kernel checked against independent oracles, plus zone
//! probability properties.

use proptest::prelude::*;
use runrules::gauss::{normal_cdf, normal_sf, zone_probabilities, ShiftedProcess, ZonePartition};
use runrules::rules::{Scheme, ZoneLabel};

const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

fn density(x: f64) -> f64 {
    INV_SQRT_2PI * (-0.5 * x * x).exp()
}

/// `Φ(x) = 1/2 + φ(x) Σ x^(2k+1) / (2k+1)!!`, all terms of one sign.
fn series_cdf(x: f64) -> f64 {
    let mut term = x;
    let mut sum = x;
    let mut k = 1.0;
    while term.abs() > 1e-18 * sum.abs() {
        term *= x * x / (2.0 * k + 1.0);
        sum += term;
        k += 1.0;
    }
    0.5 + density(x) * sum
}

/// Upper tail for `x > 0` from the Laplace continued fraction (modified Lentz).
fn continued_fraction_sf(x: f64) -> f64 {
    let tiny = 1e-300;
    let mut f = x;
    let mut c = x;
    let mut d = 0.0;
    for n in 1..500 {
        let a = n as f64;
        d = x + a * d;
        d = if d.abs() < tiny { tiny } else { d };
        c = x + a / c;
        c = if c.abs() < tiny { tiny } else { c };
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    density(x) / f
}

#[test]
fn cdf_matches_series_on_central_range() {
    for i in -800..=800 {
        let x = i as f64 / 100.0;
        let expected = series_cdf(x);
        assert!((normal_cdf(x) - expected).abs() <= 1e-12, "x = {x}");
        assert!((normal_sf(x) - (1.0 - expected)).abs() <= 1e-12, "x = {x}");
    }
    assert!((series_cdf(3.0) - 0.998_650_101_968_369_9).abs() < 1e-15);
}

#[test]
fn tails_keep_relative_precision() {
    for i in 0..=270 {
        let x = 3.0 + i as f64 / 10.0;
        let expected = continued_fraction_sf(x);
        let rel = (normal_sf(x) - expected).abs() / expected;
        assert!(rel <= 1e-12, "x = {x}: {rel}");
        assert_eq!(normal_cdf(-x), normal_sf(x));
    }
}

#[test]
fn cdf_matches_simpson_quadrature() {
    // Φ(x) = Φ(-8) + ∫_{-8}^{x} φ, integrated piecewise on a fine mesh.
    let h = 1.0 / 200.0;
    let simpson =
        |a: f64, b: f64| (b - a) / 6.0 * (density(a) + 4.0 * density(0.5 * (a + b)) + density(b));
    let mut acc = continued_fraction_sf(8.0);
    let mut at = -8.0;
    for i in 0..1000 {
        let x = -8.0 + 16.0 * (i as f64 + 0.5) / 1000.0;
        while at + h <= x {
            acc += simpson(at, at + h);
            at += h;
        }
        let value = acc + simpson(at, x);
        assert!((normal_cdf(x) - value).abs() <= 1e-10, "x = {x}");
    }
}

prop_compose! {
    fn partitions()(mut cuts in prop::collection::vec(-6.0f64..6.0, 1..8)) -> ZonePartition {
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        // Only the zone count matters for the probability properties.
        let labels = vec![ZoneLabel::Above; cuts.len() + 1];
        ZonePartition::new(cuts, labels).unwrap()
    }
}

proptest! {
    #[test]
    fn zone_probabilities_sum_to_one(p in partitions(), shift in -5.0f64..5.0) {
        let probs = zone_probabilities(&p, ShiftedProcess::new(shift).unwrap());
        prop_assert_eq!(probs.len(), p.zone_count());
        prop_assert!(probs.iter().all(|&q| (0.0..=1.0).contains(&q)));
        prop_assert!((probs.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn mirrored_partition_and_shift_reverse_the_vector(p in partitions(), shift in -5.0f64..5.0) {
        let mut forward = zone_probabilities(&p, ShiftedProcess::new(shift).unwrap());
        let back = zone_probabilities(&p.mirrored(), ShiftedProcess::new(-shift).unwrap());
        forward.reverse();
        prop_assert_eq!(forward, back);
    }

    #[test]
    fn symmetric_partitions_give_palindromes(limit in 0.05f64..6.0) {
        for scheme in [Scheme::Basic { r: 2, m: 3 }, Scheme::WesternElectric { run_length: 8 }] {
            let probs = zone_probabilities(&scheme.partition(limit), ShiftedProcess::in_control());
            let mut reversed = probs.clone();
            reversed.reverse();
            prop_assert_eq!(probs, reversed);
        }
    }
}
