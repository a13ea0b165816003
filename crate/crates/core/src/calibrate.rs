//! Control-limit calibration to a target in-control ARL.
//!
//! The in-control ARL of an `r/m` or `M-r/m` chart is continuous and strictly
//! increasing in the limit half-width `L`. The root of
//! `ln ARL0(L) - ln target` is bracketed by geometric expansion from
//! `[0.1, 4.0]` and then refined by regula falsi with the Illinois
//! modification, falling back to bisection whenever the interpolated point
//! lands outside the bracket.

use crate::engine::CompiledScheme;
use crate::error::{Error, Result};
use crate::rules::Scheme;

pub const DEFAULT_TOL: f64 = 1e-6;

const INITIAL_BRACKET: (f64, f64) = (0.1, 4.0);
const MIN_LIMIT: f64 = 1e-6;
/// Beyond this the normal tail underflows and ARL0 is no longer finite.
const MAX_LIMIT: f64 = 37.0;
const MIN_WIDTH: f64 = 1e-9;
const MAX_ITERATIONS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CalibrationResult {
    pub limit: f64,
    pub achieved_arl0: f64,
    pub iterations: usize,
    pub bracket_width: f64,
}

/// Finds `L` with `ARL0(L) = target_arl0` to relative tolerance `tol`.
pub fn calibrate_limit(scheme: &Scheme, target_arl0: f64, tol: f64) -> Result<CalibrationResult> {
    calibrate_compiled(&CompiledScheme::new(*scheme), target_arl0, tol)
}

/// As [`calibrate_limit`], reusing an already compiled scheme.
pub fn calibrate_compiled(
    compiled: &CompiledScheme,
    target_arl0: f64,
    tol: f64,
) -> Result<CalibrationResult> {
    if let Scheme::WesternElectric { .. } = compiled.scheme() {
        return Err(Error::Unsupported(
            "Western Electric limits are fixed at three sigma".into(),
        ));
    }
    if !(target_arl0.is_finite() && target_arl0 > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "target ARL must be positive and finite, got {target_arl0}"
        )));
    }
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be positive, got {tol}"
        )));
    }

    let ln_target = target_arl0.ln();
    let mut evaluations = 0;
    let mut eval = |limit: f64| -> Result<(f64, f64)> {
        evaluations += 1;
        let arl = compiled.arl(limit, 0.0)?;
        Ok((arl, arl.ln() - ln_target))
    };
    let done = |arl: f64| ((arl - target_arl0) / target_arl0).abs() <= tol;

    let (mut lo, mut hi) = INITIAL_BRACKET;
    let (mut arl_lo, mut g_lo) = eval(lo)?;
    while g_lo > 0.0 {
        let next = lo / 2.0;
        if next < MIN_LIMIT {
            return Err(Error::TargetBelowFloor {
                target: target_arl0,
                floor: arl_lo,
            });
        }
        hi = lo;
        lo = next;
        (arl_lo, g_lo) = eval(lo)?;
    }
    let (mut arl_hi, mut g_hi) = eval(hi)?;
    while g_hi < 0.0 {
        if hi >= MAX_LIMIT {
            return Err(Error::InvalidArgument(format!(
                "target ARL {target_arl0} needs limits beyond {MAX_LIMIT}"
            )));
        }
        lo = hi;
        (arl_lo, g_lo) = (arl_hi, g_hi);
        hi = (hi * 1.5).min(MAX_LIMIT);
        (arl_hi, g_hi) = eval(hi)?;
    }
    if done(arl_lo) {
        return Ok(CalibrationResult {
            limit: lo,
            achieved_arl0: arl_lo,
            iterations: evaluations,
            bracket_width: hi - lo,
        });
    }
    if done(arl_hi) {
        return Ok(CalibrationResult {
            limit: hi,
            achieved_arl0: arl_hi,
            iterations: evaluations,
            bracket_width: hi - lo,
        });
    }

    // Weights for the Illinois modification of the retained endpoint.
    let (mut w_lo, mut w_hi) = (g_lo, g_hi);
    let mut last_side = 0i8;
    for _ in 0..MAX_ITERATIONS {
        let mut x = lo - w_lo * (hi - lo) / (w_hi - w_lo);
        if !(x > lo && x < hi) {
            x = 0.5 * (lo + hi);
        }
        let (arl, g) = eval(x)?;
        if g < g_lo - 1e-12 || g > g_hi + 1e-12 {
            return Err(Error::NonMonotone { limit: x });
        }
        if done(arl) || hi - lo <= MIN_WIDTH {
            return Ok(CalibrationResult {
                limit: x,
                achieved_arl0: arl,
                iterations: evaluations,
                bracket_width: hi - lo,
            });
        }
        if g < 0.0 {
            lo = x;
            g_lo = g;
            w_lo = g;
            if last_side == -1 {
                w_hi /= 2.0;
            }
            last_side = -1;
        } else {
            hi = x;
            g_hi = g;
            w_hi = g;
            if last_side == 1 {
                w_lo /= 2.0;
            }
            last_side = 1;
        }
    }
    Err(Error::NoConvergence {
        sweeps: MAX_ITERATIONS,
        residual: hi - lo,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rules::parse_scheme;

    fn calibrated(text: &str, target: f64) -> CalibrationResult {
        calibrate_limit(&parse_scheme(text).unwrap(), target, DEFAULT_TOL).unwrap()
    }

    #[test]
    fn published_limits() {
        assert!((calibrated("2/2", 370.4).limit - 1.781).abs() <= 5e-4);
        assert!((calibrated("M-4/5", 370.4).limit - 0.949).abs() <= 5e-4);
        assert!((calibrated("1/1", 370.4).limit - 3.0).abs() <= 5e-4);
    }

    #[test]
    fn round_trip_hits_target() {
        for text in ["2/3", "M-2/3", "4/4", "M-3/5"] {
            let c = calibrated(text, 370.4);
            let arl = CompiledScheme::new(parse_scheme(text).unwrap())
                .arl(c.limit, 0.0)
                .unwrap();
            assert!((arl - 370.4).abs() / 370.4 <= 1e-6, "{text}: {arl}");
            assert!((c.achieved_arl0 - arl).abs() < 1e-12 * arl);
        }
    }

    #[test]
    fn modified_limits_sit_inside_basic() {
        for (r, m) in [(2, 3), (2, 4), (3, 4), (2, 5), (3, 5), (4, 5)] {
            let basic = calibrate_limit(&Scheme::Basic { r, m }, 370.4, DEFAULT_TOL).unwrap();
            let modified = calibrate_limit(&Scheme::Modified { r, m }, 370.4, DEFAULT_TOL).unwrap();
            assert!(modified.limit < basic.limit, "{r}/{m}");
        }
    }

    #[test]
    fn limit_grows_with_target() {
        let limits: Vec<f64> = [50.0, 100.0, 370.4, 1000.0]
            .iter()
            .map(|&t| calibrated("M-2/4", t).limit)
            .collect();
        assert!(limits.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn error_paths() {
        let s = parse_scheme("3/3").unwrap();
        assert!(matches!(
            calibrate_limit(&s, 2.5, DEFAULT_TOL),
            Err(Error::TargetBelowFloor { .. })
        ));
        assert!(
            calibrate_limit(&Scheme::western_electric(8).unwrap(), 370.4, DEFAULT_TOL).is_err()
        );
        assert!(calibrate_limit(&s, -1.0, DEFAULT_TOL).is_err());
        assert!(calibrate_limit(&s, 370.4, 0.0).is_err());
    }
}
