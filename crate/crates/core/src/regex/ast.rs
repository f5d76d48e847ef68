use std::fmt;

use crate::text::{push_escaped, quote};
use crate::types::{OutputString, RangeLabel, Symbol, Weight};

/// An atomic character: a symbol range with an optional sub-alphabet name.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Atom {
    pub label: RangeLabel,
    pub alphabet: Option<String>,
}

impl Atom {
    pub fn new(label: RangeLabel) -> Self {
        Atom {
            label,
            alphabet: None,
        }
    }

    pub fn annotated(label: RangeLabel, alphabet: impl Into<String>) -> Self {
        Atom {
            label,
            alphabet: Some(alphabet.into()),
        }
    }
}

/// Syntax tree of a weighted output expression.
///
/// The first eight variants are the core language. `Plus`, `Optional` and
/// `Any` are surface sugar removed by [`Ast::desugar`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Ast {
    Epsilon,
    Atom(Atom),
    Union(Box<Ast>, Box<Ast>),
    Concat(Box<Ast>, Box<Ast>),
    Star(Box<Ast>),
    /// `e : 'd'`, appends a fixed output string after `e`.
    Output(Box<Ast>, OutputString),
    WeightAfter(Box<Ast>, Weight),
    WeightBefore(Weight, Box<Ast>),
    Plus(Box<Ast>),
    Optional(Box<Ast>),
    Any,
}

impl Ast {
    pub fn symbol(c: char) -> Ast {
        Ast::Atom(Atom::new(RangeLabel::single(c)))
    }

    pub fn range(lo: char, hi: char) -> Ast {
        Ast::Atom(Atom::new(RangeLabel::new(lo, hi).expect("lo <= hi")))
    }

    pub fn union(self, other: Ast) -> Ast {
        Ast::Union(Box::new(self), Box::new(other))
    }

    pub fn concat(self, other: Ast) -> Ast {
        Ast::Concat(Box::new(self), Box::new(other))
    }

    pub fn star(self) -> Ast {
        Ast::Star(Box::new(self))
    }

    pub fn output(self, out: &str) -> Ast {
        Ast::Output(Box::new(self), OutputString::from(out))
    }

    pub fn weight_after(self, w: i64) -> Ast {
        Ast::WeightAfter(Box::new(self), Weight(w))
    }

    pub fn weight_before(w: i64, inner: Ast) -> Ast {
        Ast::WeightBefore(Weight(w), Box::new(inner))
    }

    /// Concatenation of single-symbol atoms; the empty string is `Epsilon`.
    pub fn literal(symbols: &[Symbol], alphabet: Option<&str>) -> Ast {
        let atom = |s: &Symbol| {
            Ast::Atom(Atom {
                label: RangeLabel::single(*s),
                alphabet: alphabet.map(str::to_string),
            })
        };
        let mut it = symbols.iter();
        match it.next() {
            None => Ast::Epsilon,
            Some(first) => it.fold(atom(first), |acc, s| acc.concat(atom(s))),
        }
    }

    /// True if the tree uses only the eight core node kinds.
    pub fn is_core(&self) -> bool {
        match self {
            Ast::Epsilon | Ast::Atom(_) => true,
            Ast::Union(a, b) | Ast::Concat(a, b) => a.is_core() && b.is_core(),
            Ast::Star(a) | Ast::Output(a, _) | Ast::WeightAfter(a, _) | Ast::WeightBefore(_, a) => {
                a.is_core()
            }
            Ast::Plus(_) | Ast::Optional(_) | Ast::Any => false,
        }
    }

    /// Rewrites `e+` to `e e*`, `e?` to `'' | e`, and `.` to the two ranges
    /// around the surrogate block.
    pub fn desugar(&self) -> Ast {
        match self {
            Ast::Epsilon => Ast::Epsilon,
            Ast::Atom(a) => Ast::Atom(a.clone()),
            Ast::Union(a, b) => a.desugar().union(b.desugar()),
            Ast::Concat(a, b) => a.desugar().concat(b.desugar()),
            Ast::Star(a) => a.desugar().star(),
            Ast::Output(a, d) => Ast::Output(Box::new(a.desugar()), d.clone()),
            Ast::WeightAfter(a, w) => Ast::WeightAfter(Box::new(a.desugar()), *w),
            Ast::WeightBefore(w, a) => Ast::WeightBefore(*w, Box::new(a.desugar())),
            Ast::Plus(a) => {
                let inner = a.desugar();
                inner.clone().concat(inner.star())
            }
            Ast::Optional(a) => Ast::Epsilon.union(a.desugar()),
            Ast::Any => Ast::Atom(Atom::new(
                RangeLabel::new('\0', '\u{D7FF}').expect("ordered"),
            ))
            .union(Ast::Atom(Atom::new(
                RangeLabel::new('\u{E000}', char::MAX).expect("ordered"),
            ))),
        }
    }

    /// Number of atom occurrences.
    pub fn atom_count(&self) -> usize {
        match self {
            Ast::Epsilon | Ast::Any => 0,
            Ast::Atom(_) => 1,
            Ast::Union(a, b) | Ast::Concat(a, b) => a.atom_count() + b.atom_count(),
            Ast::Star(a)
            | Ast::Output(a, _)
            | Ast::WeightAfter(a, _)
            | Ast::WeightBefore(_, a)
            | Ast::Plus(a)
            | Ast::Optional(a) => a.atom_count(),
        }
    }
}

fn write_atom(f: &mut fmt::Formatter<'_>, atom: &Atom) -> fmt::Result {
    let (lo, hi) = (atom.label.lo(), atom.label.hi());
    if lo == hi {
        f.write_str(&quote(&[lo]))?;
    } else {
        let mut s = String::from("[");
        push_escaped(&mut s, lo.as_char(), true);
        s.push('-');
        push_escaped(&mut s, hi.as_char(), true);
        s.push(']');
        f.write_str(&s)?;
    }
    if let Some(name) = &atom.alphabet {
        write!(f, "@{name}")?;
    }
    Ok(())
}

/// Prints in the concrete syntax. Every compound node is parenthesized, so
/// reparsing yields a structurally identical tree.
impl fmt::Display for Ast {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ast::Epsilon => f.write_str("''"),
            Ast::Atom(a) => write_atom(f, a),
            Ast::Union(a, b) => write!(f, "({a} | {b})"),
            Ast::Concat(a, b) => write!(f, "({a} {b})"),
            Ast::Star(a) => write!(f, "({a})*"),
            Ast::Plus(a) => write!(f, "({a})+"),
            Ast::Optional(a) => write!(f, "({a})?"),
            Ast::Output(a, d) => write!(f, "({a}):{}", quote(d.symbols())),
            Ast::WeightAfter(a, w) => write!(f, "({a}) {w}"),
            Ast::WeightBefore(w, a) => write!(f, "({w} ({a}))"),
            Ast::Any => f.write_str("."),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn desugar_examples() {
        let a = Ast::symbol('a');
        assert_eq!(
            Ast::Optional(Box::new(a.clone())).desugar(),
            Ast::Epsilon.union(a.clone())
        );
        assert_eq!(
            Ast::Plus(Box::new(a.clone())).desugar(),
            a.clone().concat(a.clone().star())
        );
        assert_eq!(
            Ast::Any.desugar(),
            Ast::range('\0', '\u{D7FF}').union(Ast::range('\u{E000}', '\u{10FFFF}'))
        );
        assert!(Ast::Any.desugar().is_core());
        assert!(!Ast::Optional(Box::new(a)).is_core());
    }

    #[test]
    fn literal_builds_left_nested_concat() {
        let syms: Vec<Symbol> = "abc".chars().map(Symbol::new).collect();
        assert_eq!(
            Ast::literal(&syms, None),
            Ast::symbol('a')
                .concat(Ast::symbol('b'))
                .concat(Ast::symbol('c'))
        );
        assert_eq!(Ast::literal(&[], None), Ast::Epsilon);
    }
}
