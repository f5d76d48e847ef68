//! Position-automaton construction for weighted output expressions.
//!
//! Every atom occurrence becomes a distinct numbered position. Four
//! recursive functions over the localized tree then describe the machine:
//!
//! * [`empty_effect`]: the effect produced on the empty word, if any.
//! * [`begins`]: positions that can start a word, with the effect produced
//!   before reaching them.
//! * [`ends`]: positions that can end a word, with the effect produced after
//!   leaving them.
//! * [`links`]: adjacent position pairs, with the effect produced between
//!   them.
//!
//! [`assemble`] turns these into a transducer with one state per position
//! plus an initial state, and no ε-transitions.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::error::CoreError;
use crate::regex::{Ast, Atom};
use crate::transducer::{Transducer, TransducerBuilder, Transition};
use crate::types::{Effect, OutputString, Policy, Weight};

/// Position identifier. Positions are numbered from 1 in document order;
/// 0 is reserved for the initial state of the assembled machine.
pub type PosId = usize;

pub type PositionMap = BTreeMap<PosId, Effect>;
pub type LinkMap = BTreeMap<(PosId, PosId), Effect>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GlushkovError {
    #[error("both branches of `{subtree}` match the empty word ({left} and {right}); add input or remove one branch")]
    AmbiguousUnion {
        subtree: String,
        left: Effect,
        right: Effect,
    },
    #[error("the body of `{subtree}` produces {inner} on the empty word, so the loop has unboundedly many outputs")]
    AmbiguousStar { subtree: String, inner: Effect },
    #[error("positions {from} -> {to} in `{subtree}` are linked with both {first} and {second}; add weight annotations to separate them")]
    LinkCollision {
        subtree: String,
        from: PosId,
        to: PosId,
        first: Effect,
        second: Effect,
    },
    #[error(transparent)]
    Core(#[from] CoreError),
}

/// Expression tree whose atoms have been replaced by positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PosTree {
    Epsilon,
    Pos(PosId),
    Union(Box<PosTree>, Box<PosTree>),
    Concat(Box<PosTree>, Box<PosTree>),
    Star(Box<PosTree>),
    Output(Box<PosTree>, OutputString),
    WeightAfter(Box<PosTree>, Weight),
    WeightBefore(Weight, Box<PosTree>),
}

/// A localized expression together with the atom table, mapping each position back to
/// its original atom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Localized {
    pub tree: PosTree,
    atoms: Vec<Atom>,
}

impl Localized {
    pub fn position_count(&self) -> usize {
        self.atoms.len()
    }

    pub fn atom(&self, pos: PosId) -> &Atom {
        &self.atoms[pos - 1]
    }

    /// The atom table as (position, atom) pairs in position order.
    pub fn atom_entries(&self) -> impl Iterator<Item = (PosId, &Atom)> {
        self.atoms.iter().enumerate().map(|(i, a)| (i + 1, a))
    }

    /// Rebuilds the source expression of a subtree, for diagnostics.
    fn to_ast(&self, node: &PosTree) -> Ast {
        let b = |n: &PosTree| Box::new(self.to_ast(n));
        match node {
            PosTree::Epsilon => Ast::Epsilon,
            PosTree::Pos(p) => Ast::Atom(self.atom(*p).clone()),
            PosTree::Union(x, y) => Ast::Union(b(x), b(y)),
            PosTree::Concat(x, y) => Ast::Concat(b(x), b(y)),
            PosTree::Star(x) => Ast::Star(b(x)),
            PosTree::Output(x, d) => Ast::Output(b(x), d.clone()),
            PosTree::WeightAfter(x, w) => Ast::WeightAfter(b(x), *w),
            PosTree::WeightBefore(w, x) => Ast::WeightBefore(*w, b(x)),
        }
    }
}

/// Numbers the atoms of `ast` left to right. Sugar nodes are desugared first.
pub fn localize(ast: &Ast) -> Localized {
    fn go(ast: &Ast, atoms: &mut Vec<Atom>) -> PosTree {
        let b = |o: PosTree| Box::new(o);
        match ast {
            Ast::Epsilon => PosTree::Epsilon,
            Ast::Atom(a) => {
                atoms.push(a.clone());
                PosTree::Pos(atoms.len())
            }
            Ast::Union(x, y) => {
                let l = go(x, atoms);
                PosTree::Union(b(l), b(go(y, atoms)))
            }
            Ast::Concat(x, y) => {
                let l = go(x, atoms);
                PosTree::Concat(b(l), b(go(y, atoms)))
            }
            Ast::Star(x) => PosTree::Star(b(go(x, atoms))),
            Ast::Output(x, d) => PosTree::Output(b(go(x, atoms)), d.clone()),
            Ast::WeightAfter(x, w) => PosTree::WeightAfter(b(go(x, atoms)), *w),
            Ast::WeightBefore(w, x) => PosTree::WeightBefore(*w, b(go(x, atoms))),
            Ast::Plus(_) | Ast::Optional(_) | Ast::Any => go(&ast.desugar(), atoms),
        }
    }
    let mut atoms = Vec::new();
    let tree = go(ast, &mut atoms);
    Localized { tree, atoms }
}

struct Summary {
    empty: Option<Effect>,
    begins: PositionMap,
    ends: PositionMap,
}

fn map_then(map: PositionMap, eff: Option<&Effect>) -> Result<PositionMap, CoreError> {
    let Some(eff) = eff else {
        return Ok(PositionMap::new());
    };
    map.into_iter()
        .map(|(k, v)| Ok((k, v.then(eff)?)))
        .collect()
}

fn then_map(eff: Option<&Effect>, map: PositionMap) -> Result<PositionMap, CoreError> {
    let Some(eff) = eff else {
        return Ok(PositionMap::new());
    };
    map.into_iter()
        .map(|(k, v)| Ok((k, eff.then(&v)?)))
        .collect()
}

/// Union of position maps from disjoint subtrees. Keys never collide because
/// each position occurs exactly once in the tree.
fn disjoint_union(mut a: PositionMap, b: PositionMap) -> PositionMap {
    for (k, v) in b {
        let prev = a.insert(k, v);
        assert!(prev.is_none(), "position {k} reached from two subtrees");
    }
    a
}

struct Builder<'a> {
    loc: &'a Localized,
    links: Option<LinkMap>,
}

impl Builder<'_> {
    fn link(
        &mut self,
        node: &PosTree,
        ends: &PositionMap,
        begins: &PositionMap,
    ) -> Result<(), GlushkovError> {
        let Some(links) = self.links.as_mut() else {
            return Ok(());
        };
        for (&from, e) in ends {
            for (&to, b) in begins {
                let eff = e.then(b)?;
                match links.get(&(from, to)) {
                    None => {
                        links.insert((from, to), eff);
                    }
                    Some(existing) if *existing == eff => {}
                    Some(existing) => {
                        return Err(GlushkovError::LinkCollision {
                            subtree: self.loc.to_ast(node).to_string(),
                            from,
                            to,
                            first: existing.clone(),
                            second: eff,
                        })
                    }
                }
            }
        }
        Ok(())
    }

    fn summarize(&mut self, node: &PosTree) -> Result<Summary, GlushkovError> {
        Ok(match node {
            PosTree::Epsilon => Summary {
                empty: Some(Effect::identity()),
                begins: PositionMap::new(),
                ends: PositionMap::new(),
            },
            PosTree::Pos(p) => Summary {
                empty: None,
                begins: PositionMap::from([(*p, Effect::identity())]),
                ends: PositionMap::from([(*p, Effect::identity())]),
            },
            PosTree::Union(x, y) => {
                let l = self.summarize(x)?;
                let r = self.summarize(y)?;
                let empty = match (l.empty, r.empty) {
                    (Some(left), Some(right)) => {
                        return Err(GlushkovError::AmbiguousUnion {
                            subtree: self.loc.to_ast(node).to_string(),
                            left,
                            right,
                        })
                    }
                    (a, b) => a.or(b),
                };
                Summary {
                    empty,
                    begins: disjoint_union(l.begins, r.begins),
                    ends: disjoint_union(l.ends, r.ends),
                }
            }
            PosTree::Concat(x, y) => {
                let l = self.summarize(x)?;
                let r = self.summarize(y)?;
                self.link(node, &l.ends, &r.begins)?;
                let empty = match (&l.empty, &r.empty) {
                    (Some(a), Some(b)) => Some(a.then(b)?),
                    _ => None,
                };
                Summary {
                    empty,
                    begins: disjoint_union(l.begins, then_map(l.empty.as_ref(), r.begins)?),
                    ends: disjoint_union(map_then(l.ends, r.empty.as_ref())?, r.ends),
                }
            }
            PosTree::Star(x) => {
                let inner = self.summarize(x)?;
                if let Some(eff) = &inner.empty {
                    if !eff.out.is_empty() {
                        return Err(GlushkovError::AmbiguousStar {
                            subtree: self.loc.to_ast(node).to_string(),
                            inner: eff.clone(),
                        });
                    }
                }
                self.link(node, &inner.ends, &inner.begins)?;
                Summary {
                    empty: Some(Effect::identity()),
                    begins: inner.begins,
                    ends: inner.ends,
                }
            }
            PosTree::Output(x, d) => {
                let inner = self.summarize(x)?;
                let eff = Effect::output(d.clone());
                Summary {
                    empty: inner.empty.map(|l| l.then(&eff)).transpose()?,
                    begins: inner.begins,
                    ends: map_then(inner.ends, Some(&eff))?,
                }
            }
            PosTree::WeightAfter(x, w) => {
                let inner = self.summarize(x)?;
                let eff = Effect::weight(*w);
                Summary {
                    empty: inner.empty.map(|l| l.then(&eff)).transpose()?,
                    begins: inner.begins,
                    ends: map_then(inner.ends, Some(&eff))?,
                }
            }
            PosTree::WeightBefore(w, x) => {
                let inner = self.summarize(x)?;
                let eff = Effect::weight(*w);
                Summary {
                    empty: inner.empty.map(|l| eff.then(&l)).transpose()?,
                    begins: then_map(Some(&eff), inner.begins)?,
                    ends: inner.ends,
                }
            }
        })
    }
}

fn summary(loc: &Localized) -> Result<Summary, GlushkovError> {
    Builder { loc, links: None }.summarize(&loc.tree)
}

/// The effect produced on the empty word, or `None` if the empty word
/// is not matched.
pub fn empty_effect(loc: &Localized) -> Result<Option<Effect>, GlushkovError> {
    summary(loc).map(|s| s.empty)
}

/// First positions with the effect produced before reaching them.
pub fn begins(loc: &Localized) -> Result<PositionMap, GlushkovError> {
    summary(loc).map(|s| s.begins)
}

/// Last positions with the effect produced after leaving them.
pub fn ends(loc: &Localized) -> Result<PositionMap, GlushkovError> {
    summary(loc).map(|s| s.ends)
}

/// Adjacent position pairs with the effect produced between them.
pub fn links(loc: &Localized) -> Result<LinkMap, GlushkovError> {
    let mut b = Builder {
        loc,
        links: Some(LinkMap::new()),
    };
    b.summarize(&loc.tree)?;
    Ok(b.links.expect("links requested"))
}

/// All four construction maps, computed in a single pass.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Construction {
    pub empty: Option<Effect>,
    pub begins: PositionMap,
    pub ends: PositionMap,
    pub links: LinkMap,
}

pub fn construct(loc: &Localized) -> Result<Construction, GlushkovError> {
    let mut b = Builder {
        loc,
        links: Some(LinkMap::new()),
    };
    let s = b.summarize(&loc.tree)?;
    Ok(Construction {
        empty: s.empty,
        begins: s.begins,
        ends: s.ends,
        links: b.links.expect("links requested"),
    })
}

/// Builds the machine: state 0 is the initial state and state `p` is the
/// state of position `p`.
pub fn assemble(loc: &Localized, parts: &Construction, policy: Policy) -> Transducer {
    let mut b = TransducerBuilder::new(loc.position_count() + 1, 0).policy(policy);
    for (&to, eff) in &parts.begins {
        b.push_transition(Transition {
            src: 0,
            label: loc.atom(to).label,
            dst: to,
            effect: eff.clone(),
        });
    }
    for (&(from, to), eff) in &parts.links {
        b.push_transition(Transition {
            src: from,
            label: loc.atom(to).label,
            dst: to,
            effect: eff.clone(),
        });
    }
    for (&q, eff) in &parts.ends {
        b.set_final_effect(q, eff.clone());
    }
    if let Some(eff) = &parts.empty {
        b.set_final_effect(0, eff.clone());
    }
    for (pos, atom) in loc.atom_entries() {
        if let Some(name) = &atom.alphabet {
            b.set_color(pos, name.clone());
        }
    }
    b.build().expect("assembled states are in range")
}

/// Localizes, constructs and assembles in one step.
pub fn compile(ast: &Ast, policy: Policy) -> Result<Transducer, GlushkovError> {
    let loc = localize(ast);
    let parts = construct(&loc)?;
    Ok(assemble(&loc, &parts, policy))
}
