//! Expression syntax: tree, parser, printer and a brute-force valuation
//! oracle used as a test reference.

mod ast;
pub mod oracle;
mod parse;

pub use ast::{Ast, Atom};
pub use oracle::{oracle_best, oracle_valuate, OraclePair, OracleVerdict, Relation};
pub use parse::{parse, ParseError, ParseErrorKind};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::{RangeLabel, Weight};
    use proptest::prelude::*;

    fn arb_char() -> impl Strategy<Value = char> {
        prop_oneof![
            proptest::char::range('a', 'e'),
            Just('\''),
            Just('\\'),
            Just(']'),
            Just('-'),
            Just(' '),
            Just('\n'),
            Just('é'),
            Just('\u{1F600}'),
        ]
    }

    fn arb_tree() -> impl Strategy<Value = Ast> {
        let atom = (
            arb_char(),
            arb_char(),
            proptest::option::of("[A-Z][a-z]{0,3}"),
        )
            .prop_map(|(a, b, name)| {
                Ast::Atom(Atom {
                    label: RangeLabel::new(a.min(b), a.max(b)).unwrap(),
                    alphabet: name,
                })
            });
        let leaf = prop_oneof![Just(Ast::Epsilon), Just(Ast::Any), atom];
        leaf.prop_recursive(5, 40, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| a.union(b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| a.concat(b)),
                inner.clone().prop_map(Ast::star),
                inner.clone().prop_map(|a| Ast::Plus(Box::new(a))),
                inner.clone().prop_map(|a| Ast::Optional(Box::new(a))),
                (inner.clone(), proptest::collection::vec(arb_char(), 0..3))
                    .prop_map(|(a, d)| a.output(&d.into_iter().collect::<String>())),
                (inner.clone(), any::<i64>())
                    .prop_map(|(a, w)| Ast::WeightAfter(Box::new(a), Weight(w))),
                (inner, any::<i64>()).prop_map(|(a, w)| Ast::WeightBefore(Weight(w), Box::new(a))),
            ]
        })
    }

    proptest! {
        #[test]
        fn print_then_parse_round_trips(ast in arb_tree()) {
            let text = ast.to_string();
            let back = parse(&text).map_err(|e| TestCaseError::fail(format!("{text}: {e}")))?;
            prop_assert_eq!(back, ast);
        }
    }
}
