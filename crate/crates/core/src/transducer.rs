//! The compiled machine: an ε-free ranged weighted transducer with a state
//! output function.

use crate::error::CoreError;
use crate::types::{Effect, Policy, RangeLabel};

pub type StateId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transition {
    pub src: StateId,
    pub label: RangeLabel,
    pub dst: StateId,
    pub effect: Effect,
}

/// Immutable once built. Construct with [`TransducerBuilder`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transducer {
    state_count: usize,
    initial: StateId,
    transitions: Vec<Transition>,
    finals: Vec<Option<Effect>>,
    colors: Vec<Option<String>>,
    policy: Policy,
}

impl Transducer {
    pub fn state_count(&self) -> usize {
        self.state_count
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn final_effect(&self, q: StateId) -> Option<&Effect> {
        self.finals.get(q).and_then(Option::as_ref)
    }

    pub fn color(&self, q: StateId) -> Option<&str> {
        self.colors.get(q).and_then(|c| c.as_deref())
    }

    pub fn policy(&self) -> Policy {
        self.policy
    }

    /// Same machine with a different disambiguation policy.
    pub fn with_policy(mut self, policy: Policy) -> Self {
        self.policy = policy;
        self
    }

    pub fn final_states(&self) -> impl Iterator<Item = (StateId, &Effect)> {
        self.finals
            .iter()
            .enumerate()
            .filter_map(|(q, e)| e.as_ref().map(|e| (q, e)))
    }

    /// Outgoing transition indices grouped by source state.
    pub fn outgoing(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.state_count];
        for (i, t) in self.transitions.iter().enumerate() {
            out[t.src].push(i);
        }
        out
    }

    /// Checks the structural invariants every machine must satisfy.
    pub fn validate(&self) -> Result<(), CoreError> {
        let bad = |msg: String| Err(CoreError::InvalidMachine(msg));
        if self.state_count == 0 {
            return bad("machine has no states".into());
        }
        if self.initial >= self.state_count {
            return bad(format!("initial state {} out of range", self.initial));
        }
        if self.finals.len() != self.state_count || self.colors.len() != self.state_count {
            return bad("per-state tables do not match the state count".into());
        }
        for t in &self.transitions {
            if t.src >= self.state_count || t.dst >= self.state_count {
                return bad(format!("transition {} -> {} out of range", t.src, t.dst));
            }
        }
        Ok(())
    }

    /// Additional shape guarantees of a position automaton: nothing enters
    /// the initial state and all transitions entering a state share one label.
    pub fn validate_position_shape(&self) -> Result<(), CoreError> {
        let mut incoming: Vec<Option<RangeLabel>> = vec![None; self.state_count];
        for t in &self.transitions {
            if t.dst == self.initial {
                return Err(CoreError::InvalidMachine(format!(
                    "transition from {} enters the initial state",
                    t.src
                )));
            }
            match incoming[t.dst] {
                Some(l) if l != t.label => {
                    return Err(CoreError::InvalidMachine(format!(
                        "state {} is entered under labels {} and {}",
                        t.dst, l, t.label
                    )))
                }
                _ => incoming[t.dst] = Some(t.label),
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct TransducerBuilder {
    machine: Transducer,
}

impl TransducerBuilder {
    pub fn new(state_count: usize, initial: StateId) -> Self {
        TransducerBuilder {
            machine: Transducer {
                state_count,
                initial,
                transitions: Vec::new(),
                finals: vec![None; state_count],
                colors: vec![None; state_count],
                policy: Policy::default(),
            },
        }
    }

    pub fn policy(mut self, policy: Policy) -> Self {
        self.machine.policy = policy;
        self
    }

    pub fn transition(
        mut self,
        src: StateId,
        label: RangeLabel,
        dst: StateId,
        effect: Effect,
    ) -> Self {
        self.machine.transitions.push(Transition {
            src,
            label,
            dst,
            effect,
        });
        self
    }

    pub fn push_transition(&mut self, t: Transition) {
        self.machine.transitions.push(t);
    }

    pub fn final_effect(mut self, q: StateId, effect: Effect) -> Self {
        self.set_final_effect(q, effect);
        self
    }

    pub fn set_final_effect(&mut self, q: StateId, effect: Effect) {
        if let Some(slot) = self.machine.finals.get_mut(q) {
            *slot = Some(effect);
        }
    }

    pub fn color(mut self, q: StateId, name: impl Into<String>) -> Self {
        self.set_color(q, name);
        self
    }

    pub fn set_color(&mut self, q: StateId, name: impl Into<String>) {
        if let Some(slot) = self.machine.colors.get_mut(q) {
            *slot = Some(name.into());
        }
    }

    pub fn build(self) -> Result<Transducer, CoreError> {
        self.machine.validate()?;
        Ok(self.machine)
    }
}
