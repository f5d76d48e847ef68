//! Interleaved-alphabet validation.
//!
//! An interleave spec is a local language over alphabet names: the allowed
//! first alphabets, the allowed adjacent pairs, and the allowed last
//! alphabets. Each state of a position automaton is coloured with the
//! alphabet of the symbols that enter it; a machine is valid when every
//! colour sequence along an accepting path belongs to that local language.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::text::decode_escape;
use crate::transducer::{StateId, Transducer};
use crate::types::{RangeLabel, Symbol};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("alphabet `{0}` is used but never defined")]
    Undefined(String),
    #[error("alphabet `{0}` is defined twice")]
    Duplicate(String),
    #[error("initial alphabets `{0}` and `{1}` overlap")]
    InitialOverlap(String, String),
    #[error("alphabets `{1}` and `{2}` may both follow `{0}` but overlap")]
    SuccessorOverlap(String, String, String),
}

/// Initial set `U`, allowed pairs `V` and final set `W` over named alphabets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InterleaveSpec {
    alphabets: BTreeMap<String, Vec<RangeLabel>>,
    initial: BTreeSet<String>,
    pairs: BTreeSet<(String, String)>,
    finals: BTreeSet<String>,
    epsilon_allowed: bool,
}

fn sets_overlap(a: &[RangeLabel], b: &[RangeLabel]) -> bool {
    a.iter().any(|x| b.iter().any(|y| x.overlaps(y)))
}

/// True if the union of `ranges` contains every symbol of `label`.
fn covers(ranges: &[RangeLabel], label: &RangeLabel) -> bool {
    let mut sorted = ranges.to_vec();
    sorted.sort();
    let mut need = label.lo().code();
    for r in sorted {
        if r.lo().code() > need {
            break;
        }
        if r.hi().code() >= need {
            if r.hi() >= label.hi() {
                return true;
            }
            need = r.hi().code() + 1;
        }
    }
    false
}

impl InterleaveSpec {
    pub fn new(
        alphabets: BTreeMap<String, Vec<RangeLabel>>,
        initial: BTreeSet<String>,
        pairs: BTreeSet<(String, String)>,
        finals: BTreeSet<String>,
        epsilon_allowed: bool,
    ) -> Result<Self, SpecError> {
        let names = initial
            .iter()
            .chain(finals.iter())
            .chain(pairs.iter().flat_map(|(a, b)| [a, b]));
        for n in names {
            if !alphabets.contains_key(n) {
                return Err(SpecError::Undefined(n.clone()));
            }
        }
        let u: Vec<&String> = initial.iter().collect();
        for (i, a) in u.iter().enumerate() {
            for b in &u[i + 1..] {
                if sets_overlap(&alphabets[*a], &alphabets[*b]) {
                    return Err(SpecError::InitialOverlap((*a).clone(), (*b).clone()));
                }
            }
        }
        for (from, to1) in &pairs {
            for (from2, to2) in pairs.range((from.clone(), to1.clone())..) {
                if from2 != from {
                    break;
                }
                if to2 != to1 && sets_overlap(&alphabets[to1], &alphabets[to2]) {
                    return Err(SpecError::SuccessorOverlap(
                        from.clone(),
                        to1.clone(),
                        to2.clone(),
                    ));
                }
            }
        }
        Ok(InterleaveSpec {
            alphabets,
            initial,
            pairs,
            finals,
            epsilon_allowed,
        })
    }

    pub fn alphabet(&self, name: &str) -> Option<&[RangeLabel]> {
        self.alphabets.get(name).map(Vec::as_slice)
    }

    pub fn is_initial(&self, name: &str) -> bool {
        self.initial.contains(name)
    }

    pub fn allows_pair(&self, from: &str, to: &str) -> bool {
        self.pairs.contains(&(from.to_string(), to.to_string()))
    }

    pub fn is_final(&self, name: &str) -> bool {
        self.finals.contains(name)
    }

    pub fn epsilon_allowed(&self) -> bool {
        self.epsilon_allowed
    }

    /// Alphabets whose ranges cover `label`.
    pub fn containing(&self, label: &RangeLabel) -> Vec<&str> {
        self.alphabets
            .iter()
            .filter(|(_, rs)| covers(rs, label))
            .map(|(n, _)| n.as_str())
            .collect()
    }

    /// Membership of a colour word in the local language.
    pub fn accepts_word(&self, word: &[&str]) -> bool {
        match (word.first(), word.last()) {
            (None, _) => self.epsilon_allowed,
            (Some(first), Some(last)) => {
                self.is_initial(first)
                    && self.is_final(last)
                    && word.windows(2).all(|w| self.allows_pair(w[0], w[1]))
            }
            _ => unreachable!(),
        }
    }

    /// Parses the line-based spec format:
    ///
    /// ```text
    /// alphabet Sigma = [a-z],[A-Z]
    /// initial: Sigma
    /// pairs: Sigma->Gamma, Gamma->Sigma
    /// final: Gamma
    /// epsilon: allowed
    /// ```
    pub fn parse(text: &str) -> Result<Self, SpecError> {
        let mut alphabets = BTreeMap::new();
        let mut initial = BTreeSet::new();
        let mut pairs = BTreeSet::new();
        let mut finals = BTreeSet::new();
        let mut epsilon = true;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let err = |message: String| SpecError::Syntax { line, message };
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            if let Some(rest) = content.strip_prefix("alphabet ") {
                let (name, ranges) = rest
                    .split_once('=')
                    .ok_or_else(|| err("expected `alphabet <Name> = [lo-hi],...`".into()))?;
                let name = ident(name.trim()).map_err(err)?;
                let ranges = parse_ranges(ranges.trim()).map_err(err)?;
                if alphabets.insert(name.clone(), ranges).is_some() {
                    return Err(SpecError::Duplicate(name));
                }
            } else if let Some(rest) = content.strip_prefix("initial:") {
                for n in rest.split(',') {
                    initial.insert(ident(n.trim()).map_err(err)?);
                }
            } else if let Some(rest) = content.strip_prefix("final:") {
                for n in rest.split(',') {
                    finals.insert(ident(n.trim()).map_err(err)?);
                }
            } else if let Some(rest) = content.strip_prefix("pairs:") {
                for p in rest.split(',') {
                    let (a, b) = p
                        .split_once("->")
                        .ok_or_else(|| err(format!("expected `A->B`, found `{}`", p.trim())))?;
                    pairs.insert((ident(a.trim()).map_err(err)?, ident(b.trim()).map_err(err)?));
                }
            } else if let Some(rest) = content.strip_prefix("epsilon:") {
                epsilon = match rest.trim() {
                    "allowed" => true,
                    "forbidden" => false,
                    other => {
                        return Err(err(format!(
                            "expected `allowed` or `forbidden`, found `{other}`"
                        )))
                    }
                };
            } else {
                return Err(err(format!("unrecognized directive `{content}`")));
            }
        }
        InterleaveSpec::new(alphabets, initial, pairs, finals, epsilon)
    }
}

fn ident(s: &str) -> Result<String, String> {
    if !s.is_empty() && s.chars().all(|c| c.is_alphanumeric() || c == '_') {
        Ok(s.to_string())
    } else {
        Err(format!("invalid alphabet name `{s}`"))
    }
}

fn parse_ranges(s: &str) -> Result<Vec<RangeLabel>, String> {
    let mut out = Vec::new();
    let mut chars = s.chars().peekable();
    loop {
        while chars.peek().is_some_and(|c| c.is_whitespace()) {
            chars.next();
        }
        if chars.next() != Some('[') {
            return Err(format!("expected `[lo-hi]` in `{s}`"));
        }
        let bound = |chars: &mut std::iter::Peekable<std::str::Chars>| -> Result<char, String> {
            match chars.next() {
                Some('\\') => decode_escape(chars),
                Some(c) if c != ']' => Ok(c),
                _ => Err(format!("malformed range in `{s}`")),
            }
        };
        let lo = bound(&mut chars)?;
        if chars.next() != Some('-') {
            return Err(format!("expected `-` in range of `{s}`"));
        }
        let hi = bound(&mut chars)?;
        if chars.next() != Some(']') {
            return Err(format!("expected `]` in `{s}`"));
        }
        out.push(RangeLabel::new(Symbol::new(lo), Symbol::new(hi)).map_err(|e| e.to_string())?);
        while chars.peek().is_some_and(|c| c.is_whitespace()) {
            chars.next();
        }
        match chars.next() {
            None => return Ok(out),
            Some(',') => {}
            Some(c) => return Err(format!("unexpected {c:?} in `{s}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum ColoringViolation {
    /// No unique alphabet contains the state's incoming labels.
    AnnotationRequired {
        state: StateId,
        candidates: Vec<String>,
    },
    UnknownAlphabet {
        state: StateId,
        name: String,
    },
    /// A first symbol comes from an alphabet outside `U`.
    NotInitial {
        transition: usize,
        state: StateId,
        color: String,
    },
    /// Adjacent symbols form a pair outside `V`.
    PairNotAllowed {
        transition: usize,
        from: String,
        to: String,
    },
    /// A word may end in an alphabet outside `W`.
    NotFinal {
        state: StateId,
        color: String,
    },
    /// The empty word is accepted but the spec forbids it.
    EpsilonForbidden,
    LabelOutsideAlphabet {
        transition: usize,
        label: RangeLabel,
        color: String,
    },
}

impl fmt::Display for ColoringViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use ColoringViolation::*;
        match self {
            AnnotationRequired { state, candidates } if candidates.is_empty() => {
                write!(f, "state {state}: no alphabet contains its symbols; annotation required")
            }
            AnnotationRequired { state, candidates } => write!(
                f,
                "state {state}: symbols belong to several alphabets ({}); annotation required",
                candidates.join(", ")
            ),
            UnknownAlphabet { state, name } => write!(f, "state {state}: unknown alphabet `{name}`"),
            NotInitial { transition, state, color } => write!(
                f,
                "transition {transition}: word may start in state {state} of alphabet `{color}`, which is not initial"
            ),
            PairNotAllowed { transition, from, to } => {
                write!(f, "transition {transition}: `{from}` may not be followed by `{to}`")
            }
            NotFinal { state, color } => write!(
                f,
                "state {state}: word may end in alphabet `{color}`, which is not final"
            ),
            EpsilonForbidden => f.write_str("initial state: the empty word is accepted but forbidden"),
            LabelOutsideAlphabet { transition, label, color } => write!(
                f,
                "transition {transition}: label {label} is not within alphabet `{color}`"
            ),
        }
    }
}

/// Colours of every state: explicit annotations where present, otherwise
/// the unique alphabet covering all incoming labels. Unresolvable states are
/// reported and left uncoloured.
pub fn resolve_colors(
    t: &Transducer,
    spec: &InterleaveSpec,
) -> (Vec<Option<String>>, Vec<ColoringViolation>) {
    let mut incoming: Vec<Vec<RangeLabel>> = vec![Vec::new(); t.state_count()];
    for tr in t.transitions() {
        incoming[tr.dst].push(tr.label);
    }
    let mut colors = vec![None; t.state_count()];
    let mut violations = Vec::new();
    for q in 0..t.state_count() {
        if q == t.initial() {
            continue;
        }
        if let Some(name) = t.color(q) {
            if spec.alphabet(name).is_some() {
                colors[q] = Some(name.to_string());
            } else {
                violations.push(ColoringViolation::UnknownAlphabet {
                    state: q,
                    name: name.to_string(),
                });
            }
            continue;
        }
        if incoming[q].is_empty() {
            continue;
        }
        let mut candidates: Option<BTreeSet<&str>> = None;
        for label in &incoming[q] {
            let here: BTreeSet<&str> = spec.containing(label).into_iter().collect();
            candidates = Some(match candidates {
                None => here,
                Some(prev) => prev.intersection(&here).copied().collect(),
            });
        }
        let candidates = candidates.unwrap_or_default();
        if candidates.len() == 1 {
            colors[q] = candidates.into_iter().next().map(str::to_string);
        } else {
            violations.push(ColoringViolation::AnnotationRequired {
                state: q,
                candidates: candidates.into_iter().map(str::to_string).collect(),
            });
        }
    }
    (colors, violations)
}

/// Checks the machine against an interleave spec.
pub fn check_coloring(t: &Transducer, spec: &InterleaveSpec) -> Result<(), Vec<ColoringViolation>> {
    let (colors, mut violations) = resolve_colors(t, spec);
    for (i, tr) in t.transitions().iter().enumerate() {
        let Some(to) = &colors[tr.dst] else {
            continue;
        };
        let ranges = spec.alphabet(to).expect("resolved colours are defined");
        if !covers(ranges, &tr.label) {
            violations.push(ColoringViolation::LabelOutsideAlphabet {
                transition: i,
                label: tr.label,
                color: to.clone(),
            });
        }
        if tr.src == t.initial() {
            if !spec.is_initial(to) {
                violations.push(ColoringViolation::NotInitial {
                    transition: i,
                    state: tr.dst,
                    color: to.clone(),
                });
            }
        } else if let Some(from) = &colors[tr.src] {
            if !spec.allows_pair(from, to) {
                violations.push(ColoringViolation::PairNotAllowed {
                    transition: i,
                    from: from.clone(),
                    to: to.clone(),
                });
            }
        }
    }
    for (q, _) in t.final_states() {
        if q == t.initial() {
            if !spec.epsilon_allowed() {
                violations.push(ColoringViolation::EpsilonForbidden);
            }
        } else if let Some(c) = &colors[q] {
            if !spec.is_final(c) {
                violations.push(ColoringViolation::NotFinal {
                    state: q,
                    color: c.clone(),
                });
            }
        }
    }
    violations.sort();
    violations.dedup();
    if violations.is_empty() {
        Ok(())
    } else {
        Err(violations)
    }
}
