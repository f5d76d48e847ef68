//! Brute-force valuation of an expression, truncated to short inputs.
//!
//! This is a test reference only: it enumerates the relation an expression
//! denotes directly from the syntax tree, independent of the automaton
//! construction. Exponential; keep inputs tiny.
//!
//! Each pair records its weights as one slot per input boundary: slot `k`
//! holds the sum of all weight annotations met between input symbol `k-1`
//! and input symbol `k`, and the last slot holds the weights after the final
//! symbol. A pair for an input of length `n` has `n + 1` slots, which is the
//! weight sequence the equivalent path through a compiled machine carries.

use std::collections::BTreeSet;

use thiserror::Error;

use super::ast::Ast;
use crate::error::CoreError;
use crate::types::{lex_compare, OutputString, Policy, Symbol, Weight};

pub const MAX_ORACLE_LEN: usize = 8;
pub const MAX_ORACLE_RANGE: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("oracle truncation bound {0} exceeds {MAX_ORACLE_LEN}")]
    BoundTooLarge(usize),
    #[error("range of {0} symbols is too wide to enumerate")]
    RangeTooWide(u32),
    #[error(transparent)]
    Core(#[from] CoreError),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OraclePair {
    pub input: Vec<Symbol>,
    pub output: OutputString,
    pub weights: Vec<Weight>,
}

impl OraclePair {
    fn unit() -> Self {
        OraclePair {
            input: Vec::new(),
            output: OutputString::empty(),
            weights: vec![Weight::ZERO],
        }
    }

    /// Concatenation: inputs and outputs append, and the boundary slots
    /// where the two pairs meet are summed.
    fn then(&self, other: &OraclePair) -> Result<OraclePair, CoreError> {
        let mut weights = self.weights.clone();
        let seam = weights.last_mut().expect("at least one slot");
        *seam = seam.checked_add(other.weights[0])?;
        weights.extend_from_slice(&other.weights[1..]);
        let mut input = self.input.clone();
        input.extend_from_slice(&other.input);
        Ok(OraclePair {
            input,
            output: self.output.concat(&other.output),
            weights,
        })
    }

    /// Sum of every weight along the pair.
    pub fn total_weight(&self) -> Result<Weight, CoreError> {
        self.weights
            .iter()
            .try_fold(Weight::ZERO, |acc, w| acc.checked_add(*w))
    }
}

/// A truncated relation: all pairs with input length at most `max_len`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub max_len: usize,
    pub pairs: BTreeSet<OraclePair>,
}

impl Relation {
    pub fn matching<'a>(&'a self, input: &'a [Symbol]) -> impl Iterator<Item = &'a OraclePair> {
        self.pairs.iter().filter(move |p| p.input == input)
    }

    /// The sub-relation with inputs of length at most `len`.
    pub fn restrict(&self, len: usize) -> Relation {
        Relation {
            max_len: len.min(self.max_len),
            pairs: self
                .pairs
                .iter()
                .filter(|p| p.input.len() <= len)
                .cloned()
                .collect(),
        }
    }
}

type Pairs = BTreeSet<OraclePair>;

fn product(a: &Pairs, b: &Pairs, max_len: usize) -> Result<Pairs, CoreError> {
    let mut out = Pairs::new();
    for x in a {
        for y in b {
            if x.input.len() + y.input.len() <= max_len {
                out.insert(x.then(y)?);
            }
        }
    }
    Ok(out)
}

fn singleton_effect(output: OutputString, w: Weight) -> Pairs {
    Pairs::from([OraclePair {
        input: Vec::new(),
        output,
        weights: vec![w],
    }])
}

fn valuate(ast: &Ast, max_len: usize) -> Result<Pairs, OracleError> {
    Ok(match ast {
        Ast::Epsilon => Pairs::from([OraclePair::unit()]),
        Ast::Atom(atom) => {
            if atom.label.width() > MAX_ORACLE_RANGE {
                return Err(OracleError::RangeTooWide(atom.label.width()));
            }
            if max_len == 0 {
                Pairs::new()
            } else {
                atom.label
                    .symbols()
                    .map(|s| OraclePair {
                        input: vec![s],
                        output: OutputString::empty(),
                        weights: vec![Weight::ZERO, Weight::ZERO],
                    })
                    .collect()
            }
        }
        Ast::Union(a, b) => {
            let mut l = valuate(a, max_len)?;
            l.extend(valuate(b, max_len)?);
            l
        }
        Ast::Concat(a, b) => product(&valuate(a, max_len)?, &valuate(b, max_len)?, max_len)?,
        Ast::Star(a) => {
            // Iterations that consume no input add nothing observable to a
            // functional machine, so only input-consuming iterations repeat.
            let step: Pairs = valuate(a, max_len)?
                .into_iter()
                .filter(|p| !p.input.is_empty())
                .collect();
            let mut all = Pairs::from([OraclePair::unit()]);
            let mut frontier = all.clone();
            while !frontier.is_empty() {
                let next = product(&frontier, &step, max_len)?;
                frontier = next.into_iter().filter(|p| !all.contains(p)).collect();
                all.extend(frontier.iter().cloned());
            }
            all
        }
        Ast::Output(a, d) => product(
            &valuate(a, max_len)?,
            &singleton_effect(d.clone(), Weight::ZERO),
            max_len,
        )?,
        Ast::WeightAfter(a, w) => product(
            &valuate(a, max_len)?,
            &singleton_effect(OutputString::empty(), *w),
            max_len,
        )?,
        Ast::WeightBefore(w, a) => product(
            &singleton_effect(OutputString::empty(), *w),
            &valuate(a, max_len)?,
            max_len,
        )?,
        Ast::Plus(_) | Ast::Optional(_) | Ast::Any => valuate(&ast.desugar(), max_len)?,
    })
}

/// Enumerates the relation denoted by `ast`, restricted to inputs of length
/// at most `max_len`.
pub fn oracle_valuate(ast: &Ast, max_len: usize) -> Result<Relation, OracleError> {
    if max_len > MAX_ORACLE_LEN {
        return Err(OracleError::BoundTooLarge(max_len));
    }
    Ok(Relation {
        max_len,
        pairs: valuate(ast, max_len)?,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleVerdict {
    Reject,
    Output(OutputString),
    Ambiguous(Vec<OutputString>),
}

/// Picks the best output for `input` under `policy`, comparing the weight
/// slot sequences lexicographically.
pub fn oracle_best(rel: &Relation, input: &[Symbol], policy: Policy) -> OracleVerdict {
    let mut best: Vec<&OraclePair> = Vec::new();
    for p in rel.matching(input) {
        match best.first() {
            None => best.push(p),
            Some(b) => {
                let ord = lex_compare(&p.weights, &b.weights)
                    .expect("equal inputs give equal slot counts");
                if policy.prefers(ord) {
                    best.clear();
                    best.push(p);
                } else if ord.is_eq() {
                    best.push(p);
                }
            }
        }
    }
    let outputs: BTreeSet<&OutputString> = best.iter().map(|p| &p.output).collect();
    match outputs.len() {
        0 => OracleVerdict::Reject,
        1 => OracleVerdict::Output(outputs.into_iter().next().cloned().expect("one output")),
        _ => OracleVerdict::Ambiguous(outputs.into_iter().cloned().collect()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regex::parse;
    use proptest::prelude::*;

    fn pair(input: &str, out: &str, weights: &[i64]) -> OraclePair {
        OraclePair {
            input: input.chars().map(Symbol::new).collect(),
            output: out.into(),
            weights: weights.iter().copied().map(Weight).collect(),
        }
    }

    fn rel(pairs: &[OraclePair]) -> Relation {
        Relation {
            max_len: 4,
            pairs: pairs.iter().cloned().collect(),
        }
    }

    fn syms(s: &str) -> Vec<Symbol> {
        s.chars().map(Symbol::new).collect()
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(
            oracle_valuate(&Ast::Epsilon, 3).unwrap().pairs,
            Pairs::from([pair("", "", &[0])])
        );
        assert_eq!(
            oracle_valuate(&Ast::symbol('a').star(), 2).unwrap().pairs,
            Pairs::from([
                pair("", "", &[0]),
                pair("a", "", &[0, 0]),
                pair("aa", "", &[0, 0, 0])
            ])
        );
        assert_eq!(
            oracle_valuate(&Ast::symbol('a').output("x"), 1)
                .unwrap()
                .pairs,
            Pairs::from([pair("a", "x", &[0, 0])])
        );
    }

    #[test]
    fn weights_land_in_boundary_slots() {
        let ast = parse("1 'a' 2 3 'b' 4").unwrap();
        assert_eq!(
            oracle_valuate(&ast, 2).unwrap().pairs,
            Pairs::from([pair("ab", "", &[1, 5, 4])])
        );
    }

    #[test]
    fn guards() {
        assert!(matches!(
            oracle_valuate(&Ast::Epsilon, 9),
            Err(OracleError::BoundTooLarge(9))
        ));
        assert!(matches!(
            oracle_valuate(&Ast::range('a', 'z').concat(Ast::range('\0', '\u{ff}')), 2),
            Err(OracleError::RangeTooWide(256))
        ));
    }

    #[test]
    fn best_examples() {
        let r = rel(&[pair("a", "x", &[0, 1]), pair("a", "y", &[0, 2])]);
        assert_eq!(
            oracle_best(&r, &syms("a"), Policy::Max),
            OracleVerdict::Output("y".into())
        );
        assert_eq!(
            oracle_best(&r, &syms("a"), Policy::Min),
            OracleVerdict::Output("x".into())
        );
        assert_eq!(
            oracle_best(&rel(&[]), &syms("a"), Policy::Max),
            OracleVerdict::Reject
        );
        let tie = rel(&[pair("a", "x", &[0, 1]), pair("a", "y", &[0, 1])]);
        assert!(matches!(
            oracle_best(&tie, &syms("a"), Policy::Max),
            OracleVerdict::Ambiguous(_)
        ));
        // Same total, different order: the last slot decides.
        let lex = rel(&[pair("ab", "p", &[0, 2, 3]), pair("ab", "q", &[0, 3, 2])]);
        assert_eq!(
            oracle_best(&lex, &syms("ab"), Policy::Min),
            OracleVerdict::Output("q".into())
        );
    }

    #[test]
    fn algebraic_identities() {
        let same = |a: &str, b: &str| {
            for k in 0..=4 {
                let x = oracle_valuate(&parse(a).unwrap(), k).unwrap();
                let y = oracle_valuate(&parse(b).unwrap(), k).unwrap();
                assert_eq!(x, y, "{a} vs {b} at {k}");
            }
        };
        same("('a':'x')('':'y')", "'a':'xy'");
        same("[a-b]*:'u' ('':'v')", "[a-b]*:'uv'");
        same("'a':'xz' | 'b':'yz'", "('a':'x' | 'b':'y')('':'z')");
        same(
            "('a'|'bc')*:'x':'z' | 'c':'yyz'",
            "(('a'|'bc')*:'x' | 'c':'yy')('':'z')",
        );
        // leading shared output: x0:(y'y0) + x1:(y'y1) = (ε:y')(x0:y0 + x1:y1)
        same("'a':'zx' | 'b':'zy'", "('':'z')('a':'x' | 'b':'y')");
    }

    fn arb_ast() -> impl Strategy<Value = Ast> {
        let leaf = prop_oneof![
            Just(Ast::Epsilon),
            Just(Ast::symbol('a')),
            Just(Ast::symbol('b')),
            Just(Ast::range('a', 'b')),
        ];
        leaf.prop_recursive(4, 24, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| a.union(b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| a.concat(b)),
                inner.clone().prop_map(Ast::star),
                (inner.clone(), "[xy]{0,2}").prop_map(|(a, d)| a.output(&d)),
                (inner.clone(), -2i64..3).prop_map(|(a, w)| a.weight_after(w)),
                (inner, -2i64..3).prop_map(|(a, w)| Ast::weight_before(w, a)),
            ]
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn truncation_is_coherent(ast in arb_ast(), j in 0usize..=3) {
            let big = oracle_valuate(&ast, 4).unwrap();
            let small = oracle_valuate(&ast, j).unwrap();
            prop_assert_eq!(big.restrict(j), small);
        }
    }
}
