//! Subcommand bodies. Each returns the text to emit.

use runrules::calibrate::calibrate_limit;
use runrules::engine::{CompiledScheme, STANDARD_LEVELS};
use runrules::mc;
use runrules::report::{compute_table, fmt_shift, ShiftGrid, TableOptions};
use runrules::{Error, Scheme, SchemeSpec};
use thiserror::Error;

use crate::output::{fixed2, record, Format, Grid};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Compute(#[from] Error),
    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl CliError {
    /// 2 for anything the caller can fix by changing the arguments, 1 otherwise.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Compute(e) => match e {
                Error::InvalidScheme { .. }
                | Error::InvalidArgument(_)
                | Error::InvalidPartition(_)
                | Error::WindowTooLong { .. }
                | Error::ForeignLabel(_)
                | Error::TargetBelowFloor { .. }
                | Error::Unsupported(_) => 2,
                Error::DimensionMismatch { .. }
                | Error::CannotSignal
                | Error::NoConvergence { .. }
                | Error::NegativeVariance(_)
                | Error::IterationCap(_)
                | Error::NonMonotone { .. } => 1,
            },
            CliError::Io { .. } => 1,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Statistics selectable in `evaluate`, in output column order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Stat {
    Arl,
    Sd,
    Percentile(usize),
    Sir,
}

impl Stat {
    fn header(self) -> String {
        match self {
            Stat::Arl => "arl".into(),
            Stat::Sd => "sd".into(),
            Stat::Percentile(k) => format!("p{}", (STANDARD_LEVELS[k] * 100.0).round()),
            Stat::Sir => "sir".into(),
        }
    }
}

/// Parses one `--stats` item; `percentiles` expands to all five levels.
pub fn parse_stat(text: &str) -> Result<Vec<Stat>, String> {
    let all = || (0..STANDARD_LEVELS.len()).map(Stat::Percentile).collect();
    match text.trim() {
        "arl" => Ok(vec![Stat::Arl]),
        "sd" => Ok(vec![Stat::Sd]),
        "sir" => Ok(vec![Stat::Sir]),
        "percentiles" => Ok(all()),
        other => {
            let level = other.strip_prefix('p').and_then(|p| p.parse::<f64>().ok());
            match level.and_then(|l| STANDARD_LEVELS.iter().position(|s| (s * 100.0 - l).abs() < 1e-9)) {
                Some(k) => Ok(vec![Stat::Percentile(k)]),
                None => Err(format!(
                    "unknown statistic `{other}` (expected arl, sd, percentiles, p5, p25, p50, p75, p95 or sir)"
                )),
            }
        }
    }
}

/// Applies `--we-run-length` to a Western Electric scheme.
pub fn with_run_length(scheme: Scheme, run_length: usize) -> CliResult<Scheme> {
    match scheme {
        Scheme::WesternElectric { .. } => Ok(Scheme::western_electric(run_length)?),
        other => Ok(other),
    }
}

fn spec_for(scheme: Scheme, limit: Option<f64>) -> CliResult<SchemeSpec> {
    match (scheme, limit) {
        (_, Some(l)) => Ok(SchemeSpec::new(scheme, l)?),
        (Scheme::WesternElectric { .. }, None) => Ok(SchemeSpec::new(scheme, 3.0)?),
        (_, None) => Err(CliError::Usage(format!(
            "--limit is required for scheme {scheme}"
        ))),
    }
}

pub fn calibrate(scheme: Scheme, target: f64, tol: f64, format: Format) -> CliResult<String> {
    let c = calibrate_limit(&scheme, target, tol)?;
    Ok(record(
        &[
            ("scheme", scheme.to_string()),
            ("target_arl0", format!("{target}")),
            ("limit", format!("{:.6}", c.limit)),
            ("achieved_arl0", format!("{:.6}", c.achieved_arl0)),
            ("iterations", c.iterations.to_string()),
            ("bracket_width", format!("{:.3e}", c.bracket_width)),
        ],
        format,
    ))
}

pub fn evaluate(
    scheme: Scheme,
    limit: Option<f64>,
    shifts: &ShiftGrid,
    stats: &[Stat],
    format: Format,
) -> CliResult<String> {
    let spec = spec_for(scheme, limit)?;
    let mut stats = stats.to_vec();
    stats.sort();
    stats.dedup();
    if stats.is_empty() {
        return Err(CliError::Usage("no statistics requested".into()));
    }
    let levels: &[f64] = if stats
        .iter()
        .any(|s| matches!(s, Stat::Percentile(_) | Stat::Sir))
    {
        &STANDARD_LEVELS
    } else {
        &[]
    };

    let compiled = CompiledScheme::new(spec.scheme());
    let mut grid = Grid::new(
        ["scheme".to_string(), "limit".into(), "shift".into()]
            .into_iter()
            .chain(stats.iter().map(|s| s.header())),
    );
    for &shift in shifts.values() {
        let summary = compiled.summarize(spec.limit(), shift, levels)?;
        let mut row = vec![
            scheme.to_string(),
            format!("{}", spec.limit()),
            fmt_shift(shift),
        ];
        for stat in &stats {
            row.push(match *stat {
                Stat::Arl => fixed2(summary.arl),
                Stat::Sd => fixed2(summary.sd),
                Stat::Percentile(k) => summary.percentiles[k].1.to_string(),
                Stat::Sir => fixed2(summary.sir.expect("quartiles requested")),
            });
        }
        grid.push(row);
    }
    Ok(grid.render(format))
}

pub fn table(id: u8, we_run_length: usize, format: Format) -> CliResult<String> {
    let t = compute_table(id, TableOptions { we_run_length })?;
    Ok(match format {
        Format::Csv => t.render_csv(),
        Format::Text => t.render_text(),
    })
}

pub fn simulate(
    scheme: Scheme,
    limit: Option<f64>,
    shift: f64,
    replications: u64,
    seed: u64,
    format: Format,
) -> CliResult<String> {
    let spec = spec_for(scheme, limit)?;
    let est = mc::estimate(&spec, shift, replications, seed, &STANDARD_LEVELS)?;
    let exact =
        CompiledScheme::new(spec.scheme()).summarize(spec.limit(), shift, &STANDARD_LEVELS)?;

    let mut fields = vec![
        ("scheme", scheme.to_string()),
        ("limit", format!("{}", spec.limit())),
        ("shift", fmt_shift(shift)),
        ("replications", replications.to_string()),
        ("seed", seed.to_string()),
        ("mean", format!("{:.4}", est.mean)),
        ("sd", format!("{:.4}", est.sd)),
        ("standard_error", format!("{:.4}", est.standard_error)),
        ("exact_arl", format!("{:.4}", exact.arl)),
        ("exact_sd", format!("{:.4}", exact.sd)),
        ("z", format!("{:.3}", est.z_score(exact.arl))),
    ];
    let names = ["p5", "p25", "p50", "p75", "p95"];
    let exact_names = [
        "exact_p5",
        "exact_p25",
        "exact_p50",
        "exact_p75",
        "exact_p95",
    ];
    for (k, level) in STANDARD_LEVELS.iter().enumerate() {
        let sim = est.percentile(*level).expect("level requested");
        fields.push((names[k], sim.to_string()));
        fields.push((exact_names[k], exact.percentiles[k].1.to_string()));
    }
    Ok(record(&fields, format))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stat_items() {
        assert_eq!(parse_stat("arl").unwrap(), vec![Stat::Arl]);
        assert_eq!(parse_stat("p75").unwrap(), vec![Stat::Percentile(3)]);
        assert_eq!(parse_stat("percentiles").unwrap().len(), 5);
        assert!(parse_stat("p40").is_err());
        assert!(parse_stat("mean").is_err());
    }

    #[test]
    fn headers_follow_levels() {
        let names: Vec<String> = (0..5).map(|k| Stat::Percentile(k).header()).collect();
        assert_eq!(names, ["p5", "p25", "p50", "p75", "p95"]);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Usage("x".into()).exit_code(), 2);
        assert_eq!(CliError::from(Error::CannotSignal).exit_code(), 1);
        assert_eq!(
            CliError::from(Error::InvalidArgument("x".into())).exit_code(),
            2
        );
    }
}
