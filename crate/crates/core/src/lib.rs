//! Exact run-length analysis for Shewhart control charts with supplementary
//! runs rules.
//!
//! A scheme ([`rules::Scheme`]) is compiled into a finite automaton over zone
//! labels ([`automaton`]). Together with the zone probabilities of a shifted
//! normal process ([`gauss`]) this gives an absorbing Markov chain whose
//! absorption time is the run length ([`engine`]). On top of that sit
//! control-limit calibration ([`calibrate`]), a Monte Carlo cross-check
//! ([`mc`]) and the standard comparison tables ([`report`]).

pub mod automaton;
pub mod calibrate;
pub mod engine;
pub mod error;
pub mod gauss;
pub mod mc;
pub mod report;
pub mod rules;

pub use error::{Error, Result};
pub use rules::{parse_scheme, Scheme, SchemeSpec, ZoneLabel};
