use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use crate::transducer::{StateId, Transducer};
use crate::types::{RangeLabel, Weight};

/// Where two simultaneously reachable states meet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ConflictTarget {
    State(StateId),
    /// Both states accept with equal state-output weight.
    Accept,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ConflictWitness {
    /// Always ordered, `states.0 < states.1`.
    pub states: (StateId, StateId),
    pub target: ConflictTarget,
    /// Overlap of the two transition labels; `None` for [`ConflictTarget::Accept`].
    pub label: Option<RangeLabel>,
    pub weight: Weight,
}

impl fmt::Display for ConflictWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = self.states;
        match (self.target, self.label) {
            (ConflictTarget::State(q), Some(l)) => write!(
                f,
                "states {a} and {b} both reach state {q} on {l} with weight {}",
                self.weight
            ),
            _ => write!(
                f,
                "states {a} and {b} both accept with weight {}",
                self.weight
            ),
        }
    }
}

/// State pairs reachable on a common input with stepwise-equal weights,
/// starting from `(initial, initial)`. Includes diagonal pairs.
pub fn reachable_pairs(t: &Transducer) -> BTreeSet<(StateId, StateId)> {
    let outgoing = t.outgoing();
    let trans = t.transitions();
    let start = (t.initial(), t.initial());
    let mut seen = BTreeSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some((p1, p2)) = queue.pop_front() {
        for &i in &outgoing[p1] {
            for &j in &outgoing[p2] {
                let (a, b) = (&trans[i], &trans[j]);
                if a.effect.weight == b.effect.weight && a.label.overlaps(&b.label) {
                    let pair = (a.dst, b.dst);
                    if seen.insert(pair) {
                        queue.push_back(pair);
                    }
                }
            }
        }
    }
    seen
}

/// Searches for weight-conflicting transitions. An empty result certifies
/// that the machine is functional.
pub fn find_weight_conflicts(t: &Transducer) -> Vec<ConflictWitness> {
    let outgoing = t.outgoing();
    let trans = t.transitions();
    let mut found = BTreeSet::new();
    for (q1, q2) in reachable_pairs(t) {
        if q1 >= q2 {
            continue;
        }
        let mut targets = BTreeSet::new();
        for &i in &outgoing[q1] {
            for &j in &outgoing[q2] {
                let (a, b) = (&trans[i], &trans[j]);
                if a.dst != b.dst || a.effect.weight != b.effect.weight {
                    continue;
                }
                if let Some(overlap) = a.label.intersect(&b.label) {
                    if targets.insert(a.dst) {
                        found.insert(ConflictWitness {
                            states: (q1, q2),
                            target: ConflictTarget::State(a.dst),
                            label: Some(overlap),
                            weight: a.effect.weight,
                        });
                    }
                }
            }
        }
        if let (Some(x), Some(y)) = (t.final_effect(q1), t.final_effect(q2)) {
            if x.weight == y.weight {
                found.insert(ConflictWitness {
                    states: (q1, q2),
                    target: ConflictTarget::Accept,
                    label: None,
                    weight: x.weight,
                });
            }
        }
    }
    found.into_iter().collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Functionality {
    Certified,
    /// Conflicts exist; the machine may still be functional.
    Unknown(Vec<ConflictWitness>),
}

pub fn is_functional(t: &Transducer) -> Functionality {
    let w = find_weight_conflicts(t);
    if w.is_empty() {
        Functionality::Certified
    } else {
        Functionality::Unknown(w)
    }
}
