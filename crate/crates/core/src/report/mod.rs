//! The standard comparison tables: recomputed from scratch, compared against
//! the published values, and rendered as aligned text or CSV.
//!
//! Limits are always recalibrated, so every table run is also an end-to-end
//! calibration check.

pub mod published;

use std::fmt::Write as _;
use std::str::FromStr;

use rayon::prelude::*;

use crate::calibrate::{calibrate_compiled, CalibrationResult, DEFAULT_TOL};
use crate::engine::{CompiledScheme, RunLengthSummary, STANDARD_LEVELS};
use crate::error::{Error, Result};
use crate::rules::{parse_scheme, Scheme, DEFAULT_WE_RUN_LENGTH};

use published::*;

const MAX_GRID_POINTS: usize = 100_000;

/// Shift values to evaluate, strictly increasing.
///
/// Parsed from comma-separated items, each either a single value or an
/// inclusive range `start:stop:step`, e.g. `0:3:0.2,3.5,4.0`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ShiftGrid {
    values: Vec<f64>,
}

impl ShiftGrid {
    pub fn range(start: f64, stop: f64, step: f64) -> Result<Self> {
        Self::default().extend_range(start, stop, step)
    }

    /// `0.0(0.2)3.0` followed by `3.5` and `4.0`.
    pub fn standard() -> Self {
        let mut values: Vec<f64> = (0..=15).map(|i| i as f64 / 5.0).collect();
        values.extend([3.5, 4.0]);
        Self { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    fn extend_range(mut self, start: f64, stop: f64, step: f64) -> Result<Self> {
        if !(start.is_finite() && stop.is_finite() && step.is_finite()) {
            return Err(Error::InvalidArgument(
                "shift grid bounds must be finite".into(),
            ));
        }
        if step <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "grid step must be positive, got {step}"
            )));
        }
        if stop < start {
            return Err(Error::InvalidArgument(format!(
                "grid stop {stop} lies below start {start}"
            )));
        }
        let count = ((stop - start) / step + 1e-9).floor();
        if count >= MAX_GRID_POINTS as f64 {
            return Err(Error::InvalidArgument("shift grid is too large".into()));
        }
        for i in 0..=count as usize {
            self.values.push(tidy(start + i as f64 * step));
        }
        Ok(self.normalized())
    }

    fn with_value(mut self, value: f64) -> Result<Self> {
        if !value.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "shift must be finite, got {value}"
            )));
        }
        self.values.push(tidy(value));
        Ok(self.normalized())
    }

    fn normalized(mut self) -> Self {
        self.values.sort_by(f64::total_cmp);
        self.values.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
        self
    }
}

/// Rounds away accumulated representation noise such as `0.6000000000000001`.
fn tidy(x: f64) -> f64 {
    let r = (x * 1e9).round() / 1e9;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

fn parse_number(text: &str) -> Result<f64> {
    text.trim()
        .parse::<f64>()
        .map_err(|_| Error::InvalidArgument(format!("`{text}` is not a number")))
}

impl FromStr for ShiftGrid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut grid = ShiftGrid::default();
        for item in s.split(',') {
            let parts: Vec<&str> = item.split(':').collect();
            grid = match parts.as_slice() {
                [value] => grid.with_value(parse_number(value)?)?,
                [start, stop, step] => grid.extend_range(
                    parse_number(start)?,
                    parse_number(stop)?,
                    parse_number(step)?,
                )?,
                _ => {
                    return Err(Error::InvalidArgument(format!(
                        "`{item}` is neither a value nor start:stop:step"
                    )))
                }
            };
        }
        Ok(grid)
    }
}

/// Shift printed with one decimal when that is exact, otherwise with up to
/// six significant decimals.
pub fn fmt_shift(shift: f64) -> String {
    if ((shift * 10.0).round() - shift * 10.0).abs() < 1e-9 {
        format!("{shift:.1}")
    } else {
        let s = format!("{shift:.6}");
        s.trim_end_matches('0').to_string()
    }
}

/// Whether a published table 1 cell is one of the known suspect entries:
/// the M-2/4 and 2/4 columns at shifts 0.2 to 0.8, and 2/2 at 1.2.
pub fn is_suspect_cell(scheme: &str, shift: f64) -> bool {
    match scheme {
        "M-2/4" | "2/4" => (0.2 - 1e-9..=0.8 + 1e-9).contains(&shift),
        "2/2" => (shift - 1.2).abs() < 1e-9,
        _ => false,
    }
}

/// table 1 cell tolerance: `max(0.05, 0.5%)`.
pub fn table1_tolerance(published: f64) -> f64 {
    (0.005 * published.abs()).max(0.05)
}

/// tables 2-4 percentile tolerance: exact from shift 0.4 on, `±1` below.
pub fn percentile_tolerance(shift: f64) -> u64 {
    if shift < 0.4 - 1e-9 {
        1
    } else {
        0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableColumn {
    pub label: String,
    pub scheme: Scheme,
    pub limit: f64,
    pub calibration: Option<CalibrationResult>,
}

/// A recomputed value outside tolerance of its published counterpart.
#[derive(Debug, Clone, PartialEq)]
pub struct Deviation {
    pub column: String,
    pub shift: f64,
    pub statistic: &'static str,
    pub computed: f64,
    pub published: f64,
    pub tolerance: f64,
    pub suspect: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Layout {
    /// `ARL (SD)` per scheme column.
    ArlSd,
    /// ARL and the standard percentiles for one scheme.
    Percentiles,
    /// `ARL (SIR)` per scheme column.
    ArlSir,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TableOptions {
    pub we_run_length: usize,
}

impl Default for TableOptions {
    fn default() -> Self {
        Self {
            we_run_length: DEFAULT_WE_RUN_LENGTH,
        }
    }
}

/// A fully evaluated table.
#[derive(Debug, Clone, PartialEq)]
pub struct ComputedTable {
    pub id: u8,
    pub title: String,
    pub columns: Vec<TableColumn>,
    pub shifts: Vec<f64>,
    /// `cells[column][row]`.
    pub cells: Vec<Vec<RunLengthSummary>>,
    pub deviations: Vec<Deviation>,
    pub notes: Vec<String>,
    layout: Layout,
}

fn evaluate_column(
    compiled: &CompiledScheme,
    limit: f64,
    shifts: &[f64],
) -> Result<Vec<RunLengthSummary>> {
    shifts
        .iter()
        .map(|&d| compiled.summarize(limit, d, &STANDARD_LEVELS))
        .collect()
}

fn calibrated_column(
    label: &str,
    target: f64,
    shifts: &[f64],
) -> Result<(TableColumn, Vec<RunLengthSummary>)> {
    let scheme = parse_scheme(label)?;
    let compiled = CompiledScheme::new(scheme);
    let calibration = calibrate_compiled(&compiled, target, DEFAULT_TOL)?;
    let cells = evaluate_column(&compiled, calibration.limit, shifts)?;
    Ok((
        TableColumn {
            label: label.to_string(),
            scheme,
            limit: calibration.limit,
            calibration: Some(calibration),
        },
        cells,
    ))
}

#[allow(clippy::too_many_arguments)]
fn check(
    deviations: &mut Vec<Deviation>,
    column: &str,
    shift: f64,
    statistic: &'static str,
    computed: f64,
    published: f64,
    tolerance: f64,
    suspect: bool,
) {
    if (computed - published).abs() > tolerance + 1e-12 {
        deviations.push(Deviation {
            column: column.to_string(),
            shift,
            statistic,
            computed,
            published,
            tolerance,
            suspect,
        });
    }
}

/// Recomputes table `id` (1 to 5).
pub fn compute_table(id: u8, options: TableOptions) -> Result<ComputedTable> {
    match id {
        1 => table1(),
        2..=4 => percentile_table(id),
        5 => table5(options),
        _ => Err(Error::InvalidArgument(format!(
            "no table {id}; valid ids are 1 to 5"
        ))),
    }
}

fn table1() -> Result<ComputedTable> {
    let shifts = ShiftGrid::standard().values().to_vec();
    let computed: Vec<_> = TABLE1_SCHEMES
        .par_iter()
        .map(|label| calibrated_column(label, TABLE1_TARGET, &shifts))
        .collect::<Result<_>>()?;
    let (columns, cells): (Vec<_>, Vec<_>) = computed.into_iter().unzip();

    let mut deviations = Vec::new();
    for (c, column) in columns.iter().enumerate() {
        let (limit, decimals) = TABLE1_LIMITS[c];
        let half_unit = 0.5 * 10f64.powi(-(decimals as i32));
        check(
            &mut deviations,
            &column.label,
            f64::NAN,
            "limit",
            column.limit,
            limit,
            half_unit,
            false,
        );
        for (row, &shift) in shifts.iter().enumerate() {
            let (arl, sd) = TABLE1[row][c];
            let suspect = is_suspect_cell(&column.label, shift);
            let cell = &cells[c][row];
            check(
                &mut deviations,
                &column.label,
                shift,
                "ARL",
                cell.arl,
                arl,
                table1_tolerance(arl),
                suspect,
            );
            check(
                &mut deviations,
                &column.label,
                shift,
                "SD",
                cell.sd,
                sd,
                table1_tolerance(sd),
                suspect,
            );
        }
    }
    Ok(ComputedTable {
        id: 1,
        title: format!("ARL and SD values, in-control ARL = {TABLE1_TARGET:.2}"),
        columns,
        shifts,
        cells,
        deviations,
        notes: Vec::new(),
        layout: Layout::ArlSd,
    })
}

fn percentile_table(id: u8) -> Result<ComputedTable> {
    let label = PERCENTILE_SCHEMES[id as usize - 2];
    let published = match id {
        2 => &TABLE2,
        3 => &TABLE3,
        _ => &TABLE4,
    };
    let shifts = ShiftGrid::standard().values().to_vec();
    let (column, cells) = calibrated_column(label, TABLE1_TARGET, &shifts)?;
    let mut deviations = Vec::new();
    for (row, &shift) in shifts.iter().enumerate() {
        let (arl, ref points) = published[row];
        let cell = &cells[row];
        check(
            &mut deviations,
            label,
            shift,
            "ARL",
            cell.arl,
            arl,
            table1_tolerance(arl),
            false,
        );
        let tolerance = percentile_tolerance(shift) as f64;
        for (k, &p) in points.iter().enumerate() {
            check(
                &mut deviations,
                label,
                shift,
                ["p5", "p25", "p50", "p75", "p95"][k],
                cell.percentiles[k].1 as f64,
                p as f64,
                tolerance,
                false,
            );
        }
    }
    Ok(ComputedTable {
        id,
        title: format!(
            "Percentiles and ARL values for the {label} scheme, in-control ARL = {TABLE1_TARGET}"
        ),
        columns: vec![column],
        shifts,
        cells: vec![cells],
        deviations,
        notes: Vec::new(),
        layout: Layout::Percentiles,
    })
}

fn table5(options: TableOptions) -> Result<ComputedTable> {
    let shifts: Vec<f64> = ShiftGrid::range(0.0, 3.0, 0.2)?.values().to_vec();
    let we = Scheme::western_electric(options.we_run_length)?;
    let we_compiled = CompiledScheme::new(we);
    let we_cells = evaluate_column(&we_compiled, 3.0, &shifts)?;
    let mut columns = vec![TableColumn {
        label: format!("C1234 (run {})", options.we_run_length),
        scheme: we,
        limit: 3.0,
        calibration: None,
    }];
    let mut cells = vec![we_cells];
    let computed: Vec<_> = TABLE5_SCHEMES[1..]
        .par_iter()
        .map(|label| calibrated_column(label, TABLE5_TARGET, &shifts))
        .collect::<Result<_>>()?;
    for (column, column_cells) in computed {
        columns.push(column);
        cells.push(column_cells);
    }

    let mut deviations = Vec::new();
    for (c, column) in columns.iter().enumerate() {
        if c > 0 {
            check(
                &mut deviations,
                &column.label,
                f64::NAN,
                "limit",
                column.limit,
                TABLE5_LIMITS[c],
                5e-5,
                false,
            );
        }
        for (row, &shift) in shifts.iter().enumerate() {
            let (arl, sir) = TABLE5[row][c];
            let cell = &cells[c][row];
            if c == 0 {
                check(
                    &mut deviations,
                    &column.label,
                    shift,
                    "ARL",
                    cell.arl,
                    arl,
                    0.05 * arl,
                    false,
                );
            } else {
                let tolerance = if row == 0 { 0.3 } else { 0.01 * arl };
                check(
                    &mut deviations,
                    &column.label,
                    shift,
                    "ARL",
                    cell.arl,
                    arl,
                    tolerance,
                    false,
                );
                check(
                    &mut deviations,
                    &column.label,
                    shift,
                    "SIR",
                    cell.sir.unwrap_or(f64::NAN),
                    sir,
                    0.5,
                    false,
                );
            }
        }
    }

    let variants: Vec<(usize, f64)> = [8, 9]
        .iter()
        .map(|&rl| {
            let arl = if rl == options.we_run_length {
                cells[0][0].arl
            } else {
                CompiledScheme::new(Scheme::western_electric(rl)?).arl(3.0, 0.0)?
            };
            Ok((rl, arl))
        })
        .collect::<Result<_>>()?;
    let closest = variants
        .iter()
        .min_by(|a, b| {
            (a.1 - TABLE5[0][0].0)
                .abs()
                .total_cmp(&(b.1 - TABLE5[0][0].0).abs())
        })
        .expect("two variants");
    let notes = vec![format!(
        "C1234 in-control ARL: run of 8 -> {:.2}, run of 9 -> {:.2}; published {:.2} is closest to the run-of-{} variant.",
        variants[0].1, variants[1].1, TABLE5[0][0].0, closest.0
    )];

    Ok(ComputedTable {
        id: 5,
        title: format!("ARL and SIR values for C1234 and M-r/5, in-control ARL = {TABLE5_TARGET}"),
        columns,
        shifts,
        cells,
        deviations,
        notes,
        layout: Layout::ArlSir,
    })
}

impl ComputedTable {
    /// Column index of the smallest ARL in each row.
    pub fn row_minima(&self) -> Vec<usize> {
        (0..self.shifts.len())
            .map(|row| {
                (0..self.columns.len())
                    .min_by(|&a, &b| self.cells[a][row].arl.total_cmp(&self.cells[b][row].arl))
                    .expect("at least one column")
            })
            .collect()
    }

    pub fn render_csv(&self) -> String {
        let mut out = String::new();
        let header = match self.layout {
            Layout::ArlSd => "scheme,limit,shift,arl,sd",
            Layout::Percentiles => "scheme,limit,shift,arl,p5,p25,p50,p75,p95",
            Layout::ArlSir => "scheme,limit,shift,arl,sir",
        };
        out.push_str(header);
        out.push('\n');
        for (c, column) in self.columns.iter().enumerate() {
            let scheme = column.scheme.to_string();
            for (row, &shift) in self.shifts.iter().enumerate() {
                let cell = &self.cells[c][row];
                let _ = write!(
                    out,
                    "{scheme},{:.6},{},{:.2}",
                    column.limit,
                    fmt_shift(shift),
                    cell.arl
                );
                match self.layout {
                    Layout::ArlSd => {
                        let _ = write!(out, ",{:.2}", cell.sd);
                    }
                    Layout::Percentiles => {
                        for &(_, p) in &cell.percentiles {
                            let _ = write!(out, ",{p}");
                        }
                    }
                    Layout::ArlSir => {
                        let _ = write!(out, ",{:.2}", cell.sir.unwrap_or(f64::NAN));
                    }
                }
                out.push('\n');
            }
        }
        out
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "Table {}. {}", self.id, self.title);
        let _ = writeln!(out);
        match self.layout {
            Layout::Percentiles => self.render_percentiles(&mut out),
            Layout::ArlSd | Layout::ArlSir => self.render_spread(&mut out),
        }
        if !self.notes.is_empty() || !self.deviations.is_empty() {
            let _ = writeln!(out);
        }
        for note in &self.notes {
            let _ = writeln!(out, "Note: {note}");
        }
        if !self.deviations.is_empty() {
            let _ = writeln!(
                out,
                "Cells deviating from published values beyond tolerance:"
            );
            for d in &self.deviations {
                let at = if d.shift.is_nan() {
                    String::new()
                } else {
                    format!(" at shift {}", fmt_shift(d.shift))
                };
                let tag = if d.suspect {
                    " [suspect published entry]"
                } else {
                    ""
                };
                let _ = writeln!(
                    out,
                    "  {} {}{at}: computed {}, published {} (tolerance {}){tag}",
                    d.column,
                    d.statistic,
                    trim_number(d.computed),
                    trim_number(d.published),
                    trim_number(d.tolerance),
                );
            }
        }
        out
    }

    fn render_spread(&self, out: &mut String) {
        const WIDTH: usize = 17;
        let minima = self.row_minima();
        let _ = write!(out, "{:>5}", "Shift");
        for column in &self.columns {
            let _ = write!(out, "{:>WIDTH$}", column.label);
        }
        out.push('\n');
        let _ = write!(out, "{:>5}", "L");
        for column in &self.columns {
            let _ = write!(out, "{:>WIDTH$}", format!("±{:.6}", column.limit));
        }
        out.push('\n');
        for (row, &shift) in self.shifts.iter().enumerate() {
            let _ = write!(out, "{:>5}", fmt_shift(shift));
            for c in 0..self.columns.len() {
                let cell = &self.cells[c][row];
                let spread = match self.layout {
                    Layout::ArlSd => cell.sd,
                    _ => cell.sir.unwrap_or(f64::NAN),
                };
                let mark = if minima[row] == c { "*" } else { " " };
                let _ = write!(
                    out,
                    "{:>WIDTH$}",
                    format!("{:.2} ({:.2}){mark}", cell.arl, spread)
                );
            }
            out.push('\n');
        }
        let _ = writeln!(out);
        let _ = writeln!(out, "* smallest ARL in the row");
    }

    fn render_percentiles(&self, out: &mut String) {
        let column = &self.columns[0];
        let _ = writeln!(out, "Scheme {} with L = ±{:.6}", column.label, column.limit);
        let _ = writeln!(
            out,
            "{:>5}{:>9}{:>7}{:>7}{:>7}{:>7}{:>7}",
            "Shift", "ARL", "5th", "25th", "50th", "75th", "95th"
        );
        for (row, &shift) in self.shifts.iter().enumerate() {
            let cell = &self.cells[0][row];
            let _ = write!(out, "{:>5}{:>9.2}", fmt_shift(shift), cell.arl);
            for &(_, p) in &cell.percentiles {
                let _ = write!(out, "{p:>7}");
            }
            out.push('\n');
        }
    }
}

fn trim_number(x: f64) -> String {
    let s = format!("{x:.6}");
    let s = s.trim_end_matches('0');
    s.trim_end_matches('.').to_string()
}
