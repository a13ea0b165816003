//! Deterministic automata over zone labels whose absorbing condition matches
//! the windowed predicate of a scheme.
//!
//! States carry just enough label history to decide the predicate for every
//! possible next label. Reaching [`Step::Signal`] ends the run.

use std::collections::hash_map::Entry;
use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::rules::{we_rule1, we_rule2, we_rule3, Scheme, ZoneLabel};

/// Outcome of feeding one label to a state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Step {
    Next(u32),
    Signal,
}

/// A complete DFA over a fixed label alphabet with `SIGNAL` as absorbing sink.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledAutomaton {
    alphabet: Vec<ZoneLabel>,
    /// Row-major `state × label` transition table.
    table: Vec<Step>,
    initial: usize,
}

impl LabeledAutomaton {
    pub fn alphabet(&self) -> &[ZoneLabel] {
        &self.alphabet
    }

    pub fn state_count(&self) -> usize {
        self.table.len() / self.alphabet.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    #[inline]
    pub fn step(&self, state: usize, label: usize) -> Step {
        self.table[state * self.alphabet.len() + label]
    }

    pub fn label_index(&self, label: ZoneLabel) -> Option<usize> {
        self.alphabet.iter().position(|&l| l == label)
    }

    /// 1-based index of the observation at which `labels` first signals.
    pub fn first_signal(&self, labels: &[ZoneLabel]) -> Result<Option<usize>> {
        let mut state = self.initial;
        for (t, &label) in labels.iter().enumerate() {
            let idx = self.label_index(label).ok_or(Error::ForeignLabel(label))?;
            match self.step(state, idx) {
                Step::Signal => return Ok(Some(t + 1)),
                Step::Next(s) => state = s as usize,
            }
        }
        Ok(None)
    }

    /// Searches every label sequence up to `max_len` for one on which this
    /// automaton and the scheme's windowed predicate disagree about when the
    /// first signal occurs. Sequences are cut at the first signal, since the
    /// run ends there.
    pub fn find_divergence(&self, scheme: &Scheme, max_len: usize) -> Option<Vec<ZoneLabel>> {
        let mut path = Vec::with_capacity(max_len);
        self.diverge_from(scheme, self.initial, &mut path, max_len)
    }

    fn diverge_from(
        &self,
        scheme: &Scheme,
        state: usize,
        path: &mut Vec<ZoneLabel>,
        max_len: usize,
    ) -> Option<Vec<ZoneLabel>> {
        if path.len() == max_len {
            return None;
        }
        let window = scheme.required_window();
        for (idx, &label) in self.alphabet.iter().enumerate() {
            path.push(label);
            let expected = scheme.fires(&path[path.len().saturating_sub(window)..]);
            let found = match self.step(state, idx) {
                Step::Signal => {
                    if !expected {
                        return Some(path.clone());
                    }
                    None
                }
                Step::Next(next) => {
                    if expected {
                        return Some(path.clone());
                    }
                    self.diverge_from(scheme, next as usize, path, max_len)
                }
            };
            if found.is_some() {
                return found;
            }
            path.pop();
        }
        None
    }
}

/// Breadth-first exploration of a state space keyed by `K`.
///
/// `advance` maps a key and a label index to the successor key, or `None`
/// when that label signals.
fn explore<K, F>(alphabet: Vec<ZoneLabel>, start: K, mut advance: F) -> LabeledAutomaton
where
    K: Clone + Eq + std::hash::Hash,
    F: FnMut(&K, usize) -> Option<K>,
{
    let width = alphabet.len();
    let mut index: HashMap<K, u32> = HashMap::new();
    let mut keys = vec![start.clone()];
    index.insert(start, 0);
    let mut table = Vec::new();
    let mut cursor = 0;
    while cursor < keys.len() {
        let key = keys[cursor].clone();
        for label in 0..width {
            let step = match advance(&key, label) {
                None => Step::Signal,
                Some(next) => {
                    let id = match index.entry(next) {
                        Entry::Occupied(e) => *e.get(),
                        Entry::Vacant(e) => {
                            let id = keys.len() as u32;
                            keys.push(e.key().clone());
                            e.insert(id);
                            id
                        }
                    };
                    Step::Next(id)
                }
            };
            table.push(step);
        }
        cursor += 1;
    }
    LabeledAutomaton {
        alphabet,
        table,
        initial: 0,
    }
}

/// Automaton whose states are the reachable label histories of length at
/// most `window - 1`. Works for any scheme; Western Electric histories grow
/// large, so [`build_we_automaton`] is the practical route there.
pub(crate) fn history_automaton(scheme: &Scheme) -> LabeledAutomaton {
    let alphabet = scheme.alphabet();
    let keep = scheme.required_window() - 1;
    let labels = alphabet.clone();
    let mut window = Vec::with_capacity(keep + 1);
    explore(alphabet, Vec::<u8>::new(), |history, label| {
        window.clear();
        window.extend(history.iter().map(|&i| labels[i as usize]));
        window.push(labels[label]);
        if scheme.fires(&window) {
            return None;
        }
        let mut next = history.clone();
        next.push(label as u8);
        if next.len() > keep {
            next.remove(0);
        }
        Some(next)
    })
}

/// Window automaton for an `r/m` or `M-r/m` scheme.
///
/// States are the reachable histories of at most `m - 1` labels, starting
/// from the empty history; nothing is merged, see [`minimize`].
pub fn build_window_automaton(scheme: &Scheme) -> Result<LabeledAutomaton> {
    match scheme {
        Scheme::Basic { .. } | Scheme::Modified { .. } => Ok(history_automaton(scheme)),
        Scheme::WesternElectric { .. } => Err(Error::Unsupported(
            "use build_we_automaton for Western Electric charts".into(),
        )),
    }
}

/// Compressed automaton for the four Western Electric rules.
///
/// A state is the last (up to) four labels plus the length of the current
/// same-side run. Beyond-three-sigma labels signal at once and are never
/// stored.
pub fn build_we_automaton(run_length: usize) -> Result<LabeledAutomaton> {
    let scheme = Scheme::western_electric(run_length)?;
    let alphabet = scheme.alphabet();
    let labels = alphabet.clone();
    let mut window = Vec::with_capacity(5);
    Ok(explore(
        alphabet,
        (Vec::<u8>::new(), 0usize),
        |(history, run), label| {
            let current = labels[label];
            window.clear();
            window.extend(history.iter().map(|&i| labels[i as usize]));
            window.push(current);
            if we_rule1(&window) || we_rule2(&window) || we_rule3(&window) {
                return None;
            }
            let same_side = history
                .last()
                .is_some_and(|&i| labels[i as usize].side() == current.side());
            let run = if same_side { run + 1 } else { 1 };
            if run >= run_length {
                return None;
            }
            let mut next = history.clone();
            next.push(label as u8);
            if next.len() > 4 {
                next.remove(0);
            }
            Some((next, run))
        },
    ))
}

/// Builds the appropriate automaton for `scheme` and minimizes it.
pub fn compile(scheme: &Scheme) -> LabeledAutomaton {
    let raw = match scheme {
        Scheme::WesternElectric { run_length } => {
            build_we_automaton(*run_length).expect("validated run length")
        }
        _ => history_automaton(scheme),
    };
    minimize(&raw)
}

/// Minimal equivalent automaton by Moore partition refinement, with
/// `SIGNAL` as the only accepting sink. Unreachable states are dropped and
/// the result is numbered in breadth-first order from the initial state.
pub fn minimize(a: &LabeledAutomaton) -> LabeledAutomaton {
    let n = a.state_count();
    let width = a.alphabet.len();
    let mut class = vec![0u32; n];
    let mut classes = 1;
    loop {
        let mut ids: HashMap<Vec<Option<u32>>, u32> = HashMap::with_capacity(classes * 2);
        let mut next_class = vec![0u32; n];
        for s in 0..n {
            let mut signature = Vec::with_capacity(width + 1);
            signature.push(Some(class[s]));
            signature.extend((0..width).map(|l| match a.step(s, l) {
                Step::Signal => None,
                Step::Next(t) => Some(class[t as usize]),
            }));
            let fresh = ids.len() as u32;
            next_class[s] = *ids.entry(signature).or_insert(fresh);
        }
        let refined = ids.len();
        class = next_class;
        if refined == classes {
            break;
        }
        classes = refined;
    }

    // Renumber classes breadth-first from the initial state.
    let representative = {
        let mut rep = vec![usize::MAX; classes];
        for s in (0..n).rev() {
            rep[class[s] as usize] = s;
        }
        rep
    };
    let mut order = vec![u32::MAX; classes];
    let mut queue = vec![class[a.initial] as usize];
    order[queue[0]] = 0;
    let mut table = Vec::new();
    let mut cursor = 0;
    while cursor < queue.len() {
        let c = queue[cursor];
        let s = representative[c];
        for l in 0..width {
            let step = match a.step(s, l) {
                Step::Signal => Step::Signal,
                Step::Next(t) => {
                    let tc = class[t as usize] as usize;
                    if order[tc] == u32::MAX {
                        order[tc] = queue.len() as u32;
                        queue.push(tc);
                    }
                    Step::Next(order[tc])
                }
            };
            table.push(step);
        }
        cursor += 1;
    }
    LabeledAutomaton {
        alphabet: a.alphabet.clone(),
        table,
        initial: 0,
    }
}
