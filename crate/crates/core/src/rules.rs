//! Scheme grammar, zone labels, and the windowed signal predicates.
//!
//! The predicate [`Scheme::signals`] is the single definition of when a chart
//! signals. The automata in [`crate::automaton`] and the simulator in
//! [`crate::mc`] are both checked against it.
//!
//! Supported schemes:
//!
//! - `r/m`: signal when at least `r` of the last `m` points lie above the
//!   upper limit, or at least `r` of them lie below the lower limit.
//! - `M-r/m`: signal when `r` points above the upper limit are separated by
//!   at most `m - r` points lying between the center line and the upper
//!   limit, or the mirror image below the center line. A point on the far
//!   side of the center line breaks the pattern.
//! - `C1234`: the four Western Electric zone tests with 1, 2 and 3 sigma
//!   lines and a same-side run of configurable length.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::gauss::ZonePartition;

/// Largest window span accepted by the parser. The window automaton grows
/// like `4^(m-1)`.
pub const MAX_WINDOW: usize = 12;

pub const DEFAULT_WE_RUN_LENGTH: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Lower,
    Upper,
}

impl Side {
    pub fn opposite(self) -> Self {
        match self {
            Side::Lower => Side::Upper,
            Side::Upper => Side::Lower,
        }
    }
}

/// Classification of one observation.
///
/// `r/m` and `M-r/m` schemes use the four zones cut at `-L`, `0` and `L`.
/// Western Electric uses side of the center line times a sigma band:
/// band 0 is within one sigma, band 1 between one and two, band 2 between two
/// and three, band 3 beyond three.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ZoneLabel {
    /// At or below the lower limit (`d`).
    Below,
    /// Between the lower limit and the center line (`l`).
    LowerInner,
    /// Between the center line and the upper limit (`u`).
    UpperInner,
    /// Above the upper limit (`U`).
    Above,
    Sigma {
        side: Side,
        band: u8,
    },
}

impl ZoneLabel {
    pub fn mirrored(self) -> Self {
        match self {
            ZoneLabel::Below => ZoneLabel::Above,
            ZoneLabel::LowerInner => ZoneLabel::UpperInner,
            ZoneLabel::UpperInner => ZoneLabel::LowerInner,
            ZoneLabel::Above => ZoneLabel::Below,
            ZoneLabel::Sigma { side, band } => ZoneLabel::Sigma {
                side: side.opposite(),
                band,
            },
        }
    }

    pub fn side(self) -> Side {
        match self {
            ZoneLabel::Below | ZoneLabel::LowerInner => Side::Lower,
            ZoneLabel::UpperInner | ZoneLabel::Above => Side::Upper,
            ZoneLabel::Sigma { side, .. } => side,
        }
    }

    /// Sigma band for Western Electric labels, `None` otherwise.
    pub fn band(self) -> Option<u8> {
        match self {
            ZoneLabel::Sigma { band, .. } => Some(band),
            _ => None,
        }
    }

    pub fn symbol(self) -> String {
        match self {
            ZoneLabel::Below => "d".into(),
            ZoneLabel::LowerInner => "l".into(),
            ZoneLabel::UpperInner => "u".into(),
            ZoneLabel::Above => "U".into(),
            ZoneLabel::Sigma {
                side: Side::Upper,
                band,
            } => format!("+{band}"),
            ZoneLabel::Sigma {
                side: Side::Lower,
                band,
            } => format!("-{band}"),
        }
    }
}

/// A runs-rule scheme, without its control limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    Basic { r: usize, m: usize },
    Modified { r: usize, m: usize },
    WesternElectric { run_length: usize },
}

fn check_rm(text: &str, r: usize, m: usize) -> Result<()> {
    let reason = if r < 1 || m < 1 {
        Some("r and m must be at least 1".to_string())
    } else if r > m {
        Some(format!("r = {r} exceeds m = {m}"))
    } else if m > MAX_WINDOW {
        Some(format!(
            "m = {m} exceeds the supported maximum {MAX_WINDOW}"
        ))
    } else {
        None
    };
    match reason {
        Some(reason) => Err(Error::InvalidScheme {
            text: text.to_string(),
            reason,
        }),
        None => Ok(()),
    }
}

impl Scheme {
    pub fn basic(r: usize, m: usize) -> Result<Self> {
        check_rm(&format!("{r}/{m}"), r, m)?;
        Ok(Scheme::Basic { r, m })
    }

    pub fn modified(r: usize, m: usize) -> Result<Self> {
        check_rm(&format!("M-{r}/{m}"), r, m)?;
        Ok(Scheme::Modified { r, m })
    }

    pub fn western_electric(run_length: usize) -> Result<Self> {
        if run_length != 8 && run_length != 9 {
            return Err(Error::InvalidScheme {
                text: "C1234".into(),
                reason: format!("same-side run length must be 8 or 9, got {run_length}"),
            });
        }
        Ok(Scheme::WesternElectric { run_length })
    }

    /// Number of most recent labels the predicate looks at.
    pub fn required_window(&self) -> usize {
        match *self {
            Scheme::Basic { m, .. } | Scheme::Modified { m, .. } => m,
            Scheme::WesternElectric { run_length } => run_length.max(5),
        }
    }

    /// Smallest possible run length.
    pub fn min_run_length(&self) -> usize {
        match *self {
            Scheme::Basic { r, .. } | Scheme::Modified { r, .. } => r,
            Scheme::WesternElectric { .. } => 1,
        }
    }

    /// Zone labels in partition order (lowest zone first).
    pub fn alphabet(&self) -> Vec<ZoneLabel> {
        match self {
            Scheme::Basic { .. } | Scheme::Modified { .. } => vec![
                ZoneLabel::Below,
                ZoneLabel::LowerInner,
                ZoneLabel::UpperInner,
                ZoneLabel::Above,
            ],
            Scheme::WesternElectric { .. } => (0..4)
                .rev()
                .map(|band| ZoneLabel::Sigma {
                    side: Side::Lower,
                    band,
                })
                .chain((0..4).map(|band| ZoneLabel::Sigma {
                    side: Side::Upper,
                    band,
                }))
                .collect(),
        }
    }

    /// Zone partition for control limits at `±limit`. Western Electric zones
    /// sit at one, two and three thirds of the limit.
    pub fn partition(&self, limit: f64) -> ZonePartition {
        let cuts = match self {
            Scheme::Basic { .. } | Scheme::Modified { .. } => vec![-limit, 0.0, limit],
            Scheme::WesternElectric { .. } => {
                let sigma = limit / 3.0;
                (-3..=3).map(|k| k as f64 * sigma).collect()
            }
        };
        ZonePartition::new(cuts, self.alphabet()).expect("scheme partitions are well formed")
    }

    pub fn with_limit(self, limit: f64) -> Result<SchemeSpec> {
        SchemeSpec::new(self, limit)
    }

    /// Whether the chart signals at the newest observation of `window`.
    ///
    /// `window` holds the most recent labels, oldest first, and must not be
    /// longer than [`Scheme::required_window`]; during start-up it is simply
    /// shorter.
    pub fn signals(&self, window: &[ZoneLabel]) -> Result<bool> {
        let max = self.required_window();
        if window.len() > max {
            return Err(Error::WindowTooLong {
                len: window.len(),
                max,
            });
        }
        let we = matches!(self, Scheme::WesternElectric { .. });
        if let Some(&bad) = window.iter().find(|l| l.band().is_some() != we) {
            return Err(Error::ForeignLabel(bad));
        }
        Ok(self.fires(window))
    }

    /// Unchecked predicate; callers guarantee the window fits.
    #[inline]
    pub(crate) fn fires(&self, window: &[ZoneLabel]) -> bool {
        match *self {
            Scheme::Basic { r, m } => {
                let recent = &window[window.len().saturating_sub(m)..];
                let above = recent.iter().filter(|&&l| l == ZoneLabel::Above).count();
                let below = recent.iter().filter(|&&l| l == ZoneLabel::Below).count();
                above >= r || below >= r
            }
            Scheme::Modified { r, m } => {
                modified_fires(window, r, m, ZoneLabel::Above, ZoneLabel::UpperInner)
                    || modified_fires(window, r, m, ZoneLabel::Below, ZoneLabel::LowerInner)
            }
            Scheme::WesternElectric { run_length } => we_fires(window, run_length),
        }
    }
}

/// One side of the modified rule: walking back from the newest label through
/// `beyond`/`inner` labels only, `r` beyond-limit labels are met within `m`
/// positions, the newest being one of them.
fn modified_fires(
    window: &[ZoneLabel],
    r: usize,
    m: usize,
    beyond: ZoneLabel,
    inner: ZoneLabel,
) -> bool {
    if window.last() != Some(&beyond) {
        return false;
    }
    let mut count = 0;
    for &label in window.iter().rev().take(m) {
        if label == beyond {
            count += 1;
            if count == r {
                return true;
            }
        } else if label != inner {
            return false;
        }
    }
    false
}

fn count_beyond(window: &[ZoneLabel], span: usize, min_band: u8, side: Side) -> usize {
    window[window.len().saturating_sub(span)..]
        .iter()
        .filter(|l| l.side() == side && l.band().is_some_and(|b| b >= min_band))
        .count()
}

/// Rule 1: newest point beyond three sigma.
pub(crate) fn we_rule1(window: &[ZoneLabel]) -> bool {
    window.last().and_then(|l| l.band()) == Some(3)
}

/// Rule 2: two of the last three beyond two sigma on one side.
pub(crate) fn we_rule2(window: &[ZoneLabel]) -> bool {
    [Side::Lower, Side::Upper]
        .iter()
        .any(|&s| count_beyond(window, 3, 2, s) >= 2)
}

/// Rule 3: four of the last five beyond one sigma on one side.
pub(crate) fn we_rule3(window: &[ZoneLabel]) -> bool {
    [Side::Lower, Side::Upper]
        .iter()
        .any(|&s| count_beyond(window, 5, 1, s) >= 4)
}

/// Rule 4: the last `run_length` points on one side of the center line.
pub(crate) fn we_rule4(window: &[ZoneLabel], run_length: usize) -> bool {
    window.len() >= run_length && {
        let recent = &window[window.len() - run_length..];
        let side = recent[0].side();
        recent.iter().all(|l| l.side() == side)
    }
}

fn we_fires(window: &[ZoneLabel], run_length: usize) -> bool {
    we_rule1(window) || we_rule2(window) || we_rule3(window) || we_rule4(window, run_length)
}

fn parse_count(text: &str, part: &str) -> Result<usize> {
    if part.is_empty() || !part.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::InvalidScheme {
            text: text.to_string(),
            reason: format!("`{part}` is not a positive integer"),
        });
    }
    part.parse().map_err(|_| Error::InvalidScheme {
        text: text.to_string(),
        reason: format!("`{part}` is out of range"),
    })
}

/// Parses `r/m`, `M-r/m`, `C1234` or `WE`. Case-sensitive, no whitespace.
pub fn parse_scheme(text: &str) -> Result<Scheme> {
    if text == "C1234" || text == "WE" {
        return Scheme::western_electric(DEFAULT_WE_RUN_LENGTH);
    }
    let (modified, body) = match text.strip_prefix("M-") {
        Some(rest) => (true, rest),
        None => (false, text),
    };
    let (r, m) = body.split_once('/').ok_or_else(|| Error::InvalidScheme {
        text: text.to_string(),
        reason: "expected `r/m`, `M-r/m` or `C1234`".into(),
    })?;
    let r = parse_count(text, r)?;
    let m = parse_count(text, m)?;
    check_rm(text, r, m)?;
    Ok(if modified {
        Scheme::Modified { r, m }
    } else {
        Scheme::Basic { r, m }
    })
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_scheme(s)
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scheme::Basic { r, m } => write!(f, "{r}/{m}"),
            Scheme::Modified { r, m } => write!(f, "M-{r}/{m}"),
            Scheme::WesternElectric { .. } => f.write_str("C1234"),
        }
    }
}

/// A scheme together with its symmetric control limits `±limit`.
///
/// Western Electric charts always use three-sigma limits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeSpec {
    scheme: Scheme,
    limit: f64,
}

impl SchemeSpec {
    pub fn new(scheme: Scheme, limit: f64) -> Result<Self> {
        if !(limit.is_finite() && limit > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "control limit must be positive and finite, got {limit}"
            )));
        }
        if matches!(scheme, Scheme::WesternElectric { .. }) && limit != 3.0 {
            return Err(Error::InvalidArgument(
                "Western Electric charts use fixed three-sigma limits".into(),
            ));
        }
        Ok(Self { scheme, limit })
    }

    pub fn western_electric(run_length: usize) -> Result<Self> {
        Self::new(Scheme::western_electric(run_length)?, 3.0)
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn limit(&self) -> f64 {
        self.limit
    }

    pub fn partition(&self) -> ZonePartition {
        self.scheme.partition(self.limit)
    }
}

impl fmt::Display for SchemeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (L = {})", self.scheme, self.limit)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ZoneLabel::{Above as U, Below as D, LowerInner as L, UpperInner as Uu};

    const BASIC: [ZoneLabel; 4] = [D, L, Uu, U];

    /// Every label string over `alphabet` of length exactly `len`.
    fn strings(alphabet: &[ZoneLabel], len: usize) -> Vec<Vec<ZoneLabel>> {
        (0..len).fold(vec![vec![]], |acc, _| {
            acc.into_iter()
                .flat_map(|s| {
                    alphabet.iter().map(move |&c| {
                        let mut t = s.clone();
                        t.push(c);
                        t
                    })
                })
                .collect()
        })
    }

    fn upto(alphabet: &[ZoneLabel], max_len: usize) -> Vec<Vec<ZoneLabel>> {
        (1..=max_len).flat_map(|n| strings(alphabet, n)).collect()
    }

    fn rm_schemes() -> Vec<(usize, usize)> {
        (1..=5).flat_map(|m| (1..=m).map(move |r| (r, m))).collect()
    }

    #[test]
    fn parses_table_headers() {
        assert_eq!(parse_scheme("2/3").unwrap(), Scheme::Basic { r: 2, m: 3 });
        assert_eq!(
            parse_scheme("M-4/5").unwrap(),
            Scheme::Modified { r: 4, m: 5 }
        );
        assert_eq!(
            parse_scheme("C1234").unwrap(),
            Scheme::WesternElectric { run_length: 8 }
        );
        assert_eq!(parse_scheme("WE").unwrap(), parse_scheme("C1234").unwrap());
        for s in ["2/3", "M-4/5", "1/1", "C1234"] {
            assert_eq!(parse_scheme(s).unwrap().to_string(), s);
        }
    }

    #[test]
    fn rejects_malformed_schemes() {
        for bad in [
            "3/2", "0/1", "1/0", "2/13", "m-2/3", "2 /3", "2/3 ", "+2/3", "2", "M-", "c1234", "",
        ] {
            assert!(parse_scheme(bad).is_err(), "{bad:?} should fail");
        }
        assert!(parse_scheme("6/12").is_ok());
        assert!(Scheme::western_electric(7).is_err());
    }

    #[test]
    fn required_windows() {
        assert_eq!(parse_scheme("2/3").unwrap().required_window(), 3);
        assert_eq!(parse_scheme("M-3/5").unwrap().required_window(), 5);
        assert_eq!(Scheme::western_electric(8).unwrap().required_window(), 8);
        assert_eq!(Scheme::western_electric(9).unwrap().required_window(), 9);
    }

    #[test]
    fn modified_versus_basic_examples() {
        let m23 = Scheme::Modified { r: 2, m: 3 };
        let b23 = Scheme::Basic { r: 2, m: 3 };
        assert!(m23.signals(&[U, Uu, U]).unwrap());
        assert!(!m23.signals(&[U, L, U]).unwrap());
        assert!(b23.signals(&[U, L, U]).unwrap());
        assert!(Scheme::Basic { r: 2, m: 2 }.signals(&[U, U]).unwrap());
        assert!(Scheme::Modified { r: 2, m: 2 }.signals(&[U, U]).unwrap());
        let m35 = Scheme::Modified { r: 3, m: 5 };
        assert!(m35.signals(&[U, Uu, U, Uu, U]).unwrap());
        assert!(!m35.signals(&[U, Uu, Uu, Uu, U]).unwrap());
        assert!(m35.signals(&[D, L, D, D]).unwrap());
    }

    #[test]
    fn signals_rejects_bad_windows() {
        let s = Scheme::Basic { r: 2, m: 3 };
        assert!(matches!(
            s.signals(&[U, U, U, U]),
            Err(Error::WindowTooLong { len: 4, max: 3 })
        ));
        let we = ZoneLabel::Sigma {
            side: Side::Upper,
            band: 1,
        };
        assert!(matches!(s.signals(&[we]), Err(Error::ForeignLabel(_))));
        assert!(Scheme::western_electric(8).unwrap().signals(&[U]).is_err());
    }

    /// Independent reading of the modified rule: from the newest point back,
    /// collect the beyond-limit points of the unbroken same-side stretch and
    /// check whether the r-th most recent one lies close enough.
    fn modified_reference(s: &[ZoneLabel], r: usize, m: usize) -> bool {
        [(U, Uu), (D, L)].iter().any(|&(beyond, inner)| {
            if s.last() != Some(&beyond) {
                return false;
            }
            let stretch: Vec<usize> = (0..s.len())
                .rev()
                .take_while(|&i| s[i] == beyond || s[i] == inner)
                .filter(|&i| s[i] == beyond)
                .collect();
            stretch.len() >= r && {
                let first = stretch[r - 1];
                let separators = (s.len() - 1 - first) + 1 - r;
                separators <= m - r
            }
        })
    }

    #[test]
    fn modified_window_is_m_exhaustive() {
        for (r, m) in rm_schemes() {
            let scheme = Scheme::Modified { r, m };
            for s in upto(&BASIC, 6) {
                let window = &s[s.len().saturating_sub(m)..];
                assert_eq!(
                    scheme.fires(window),
                    modified_reference(&s, r, m),
                    "M-{r}/{m} on {s:?}"
                );
            }
        }
    }

    #[test]
    fn mirror_symmetry_exhaustive() {
        for (r, m) in rm_schemes() {
            for scheme in [Scheme::Basic { r, m }, Scheme::Modified { r, m }] {
                for w in upto(&BASIC, m) {
                    let mirrored: Vec<_> = w.iter().map(|l| l.mirrored()).collect();
                    assert_eq!(scheme.fires(&w), scheme.fires(&mirrored));
                }
            }
        }
    }

    #[test]
    fn basic_is_monotone_in_upper_hits() {
        for (r, m) in rm_schemes() {
            let scheme = Scheme::Basic { r, m };
            for w in upto(&BASIC, m) {
                if !scheme.fires(&w) {
                    continue;
                }
                for i in 0..w.len() {
                    let mut v = w.clone();
                    v[i] = U;
                    // turning a lower hit into an upper one can break a lower signal
                    if w[i] != D {
                        assert!(scheme.fires(&v), "{r}/{m}: {w:?} -> {v:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn modified_implies_basic_and_agree_when_r_eq_m() {
        for (r, m) in rm_schemes() {
            let basic = Scheme::Basic { r, m };
            let modified = Scheme::Modified { r, m };
            for w in strings(&BASIC, m) {
                if modified.fires(&w) {
                    assert!(basic.fires(&w));
                }
                if r == m {
                    assert_eq!(basic.fires(&w), modified.fires(&w));
                }
            }
        }
    }

    #[test]
    fn one_of_one_is_beyond_limit() {
        let s = Scheme::Basic { r: 1, m: 1 };
        for l in BASIC {
            assert_eq!(s.fires(&[l]), l == U || l == D);
        }
    }

    #[test]
    fn western_electric_rules() {
        let we = Scheme::western_electric(8).unwrap();
        let up = |band| ZoneLabel::Sigma {
            side: Side::Upper,
            band,
        };
        let lo = |band| ZoneLabel::Sigma {
            side: Side::Lower,
            band,
        };
        assert!(we.fires(&[up(3)]));
        assert!(we.fires(&[up(2), lo(0), up(2)]));
        assert!(!we.fires(&[up(2), lo(2), up(1)]));
        assert!(we.fires(&[up(1), up(1), up(0), up(1), up(2)]));
        assert!(!we.fires(&[up(1), lo(1), up(0), up(1), up(1)]));
        assert!(!we.fires(&[up(0); 7]));
        assert!(we.fires(&[up(0); 8]));
        let mut w = vec![up(0); 7];
        w.push(lo(0));
        assert!(!we.fires(&w));
        let nine = Scheme::western_electric(9).unwrap();
        assert!(!nine.fires(&[up(0); 8]));
        assert!(nine.fires(&[up(0); 9]));
    }

    #[test]
    fn western_electric_alphabet_follows_partition() {
        let we = Scheme::western_electric(8).unwrap();
        let p = we.partition(3.0);
        assert_eq!(p.cuts(), &[-3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0]);
        assert_eq!(
            p.classify(-3.5),
            ZoneLabel::Sigma {
                side: Side::Lower,
                band: 3
            }
        );
        assert_eq!(
            p.classify(0.0),
            ZoneLabel::Sigma {
                side: Side::Lower,
                band: 0
            }
        );
        assert_eq!(
            p.classify(0.5),
            ZoneLabel::Sigma {
                side: Side::Upper,
                band: 0
            }
        );
        assert_eq!(
            p.classify(2.5),
            ZoneLabel::Sigma {
                side: Side::Upper,
                band: 2
            }
        );
    }

    #[test]
    fn spec_rejects_bad_limits() {
        let s = parse_scheme("2/3").unwrap();
        assert!(s.with_limit(0.0).is_err());
        assert!(s.with_limit(f64::NAN).is_err());
        assert!(Scheme::western_electric(8)
            .unwrap()
            .with_limit(2.5)
            .is_err());
        assert_eq!(SchemeSpec::western_electric(9).unwrap().limit(), 3.0);
    }
}
