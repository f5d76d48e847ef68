//! Alphabet symbols, ranges, weights, output strings and the effect monoid
//! that every transition and state output carries.

use std::cmp::Ordering;
use std::fmt;

use crate::error::CoreError;

/// A single alphabet symbol: a Unicode scalar value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(char);

impl Symbol {
    pub const MIN: Symbol = Symbol('\0');
    pub const MAX: Symbol = Symbol(char::MAX);

    pub fn new(c: char) -> Self {
        Symbol(c)
    }

    /// Fails for surrogates and values above `0x10FFFF`.
    pub fn from_code(code: u32) -> Result<Self, CoreError> {
        char::from_u32(code)
            .map(Symbol)
            .ok_or(CoreError::InvalidSymbol(code))
    }

    pub fn code(self) -> u32 {
        self.0 as u32
    }

    pub fn as_char(self) -> char {
        self.0
    }
}

impl From<char> for Symbol {
    fn from(c: char) -> Self {
        Symbol(c)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Inclusive interval `[lo, hi]` of symbols labelling a transition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RangeLabel {
    lo: Symbol,
    hi: Symbol,
}

impl RangeLabel {
    pub fn new(lo: impl Into<Symbol>, hi: impl Into<Symbol>) -> Result<Self, CoreError> {
        let (lo, hi) = (lo.into(), hi.into());
        if lo > hi {
            return Err(CoreError::InvertedRange {
                lo: lo.code(),
                hi: hi.code(),
            });
        }
        Ok(RangeLabel { lo, hi })
    }

    pub fn single(s: impl Into<Symbol>) -> Self {
        let s = s.into();
        RangeLabel { lo: s, hi: s }
    }

    pub fn lo(&self) -> Symbol {
        self.lo
    }

    pub fn hi(&self) -> Symbol {
        self.hi
    }

    pub fn contains(&self, s: Symbol) -> bool {
        self.lo <= s && s <= self.hi
    }

    /// True if every symbol of `self` lies in `other`.
    pub fn is_within(&self, other: &RangeLabel) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn intersect(&self, other: &RangeLabel) -> Option<RangeLabel> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(RangeLabel { lo, hi })
    }

    pub fn overlaps(&self, other: &RangeLabel) -> bool {
        self.lo.max(other.lo) <= self.hi.min(other.hi)
    }

    /// Number of code points spanned, surrogates included.
    pub fn width(&self) -> u32 {
        self.hi.code() - self.lo.code() + 1
    }

    /// Iterates over the valid symbols of the range.
    pub fn symbols(&self) -> impl Iterator<Item = Symbol> {
        (self.lo.code()..=self.hi.code()).filter_map(|c| char::from_u32(c).map(Symbol))
    }
}

impl fmt::Display for RangeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}-{}]", self.lo.code(), self.hi.code())
    }
}

/// Free function form of [`RangeLabel::intersect`].
pub fn range_intersect(a: &RangeLabel, b: &RangeLabel) -> Option<RangeLabel> {
    a.intersect(b)
}

/// Integer transition weight. Adjacent weights combine by addition.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Weight(pub i64);

impl Weight {
    pub const ZERO: Weight = Weight(0);

    pub fn checked_add(self, other: Weight) -> Result<Weight, CoreError> {
        self.0
            .checked_add(other.0)
            .map(Weight)
            .ok_or(CoreError::WeightOverflow(self.0, other.0))
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An element of the free monoid over [`Symbol`].
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OutputString(Vec<Symbol>);

impl OutputString {
    pub fn empty() -> Self {
        OutputString(Vec::new())
    }

    pub fn from_symbols(symbols: Vec<Symbol>) -> Self {
        OutputString(symbols)
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn concat(&self, other: &OutputString) -> OutputString {
        let mut v = Vec::with_capacity(self.0.len() + other.0.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        OutputString(v)
    }

    pub fn push_str(&mut self, other: &OutputString) {
        self.0.extend_from_slice(&other.0);
    }
}

impl From<&str> for OutputString {
    fn from(s: &str) -> Self {
        OutputString(s.chars().map(Symbol).collect())
    }
}

impl fmt::Display for OutputString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.iter().try_for_each(|s| write!(f, "{s}"))
    }
}

/// The pair (output, weight) produced along a transition or on acceptance.
///
/// Effects form a monoid: `(y0, w0) · (y1, w1) = (y0 y1, w0 + w1)` with
/// identity `(ε, 0)`. An absent effect (`None` in the `Option` helpers) is
/// the multiplicative zero.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Effect {
    pub out: OutputString,
    pub weight: Weight,
}

impl Effect {
    pub fn identity() -> Self {
        Effect::default()
    }

    pub fn new(out: impl Into<OutputString>, weight: i64) -> Self {
        Effect {
            out: out.into(),
            weight: Weight(weight),
        }
    }

    pub fn output(out: OutputString) -> Self {
        Effect {
            out,
            weight: Weight::ZERO,
        }
    }

    pub fn weight(w: Weight) -> Self {
        Effect {
            out: OutputString::empty(),
            weight: w,
        }
    }

    pub fn then(&self, other: &Effect) -> Result<Effect, CoreError> {
        Ok(Effect {
            out: self.out.concat(&other.out),
            weight: self.weight.checked_add(other.weight)?,
        })
    }
}

impl fmt::Display for Effect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "('{}', {})", self.out, self.weight)
    }
}

/// Effect multiplication with absent operands propagating as zero.
pub fn effect_mul(a: Option<&Effect>, b: Option<&Effect>) -> Result<Option<Effect>, CoreError> {
    match (a, b) {
        (Some(a), Some(b)) => a.then(b).map(Some),
        _ => Ok(None),
    }
}

/// Lexicographic order on equal-length weight sequences. The last element
/// dominates; ties fall back to the prefix.
pub fn lex_compare(a: &[Weight], b: &[Weight]) -> Result<Ordering, CoreError> {
    if a.len() != b.len() {
        return Err(CoreError::LengthMismatch(a.len(), b.len()));
    }
    Ok(a.iter()
        .rev()
        .zip(b.iter().rev())
        .map(|(x, y)| x.cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal))
}

/// Which end of the weight order wins disambiguation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum Policy {
    Min,
    #[default]
    Max,
}

impl Policy {
    /// True if a path ordered `ord` relative to the incumbent should replace it.
    pub fn prefers(self, ord: Ordering) -> bool {
        match self {
            Policy::Min => ord == Ordering::Less,
            Policy::Max => ord == Ordering::Greater,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Policy::Min => "min",
            Policy::Max => "max",
        }
    }
}

impl std::str::FromStr for Policy {
    type Err = CoreError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "min" => Ok(Policy::Min),
            "max" => Ok(Policy::Max),
            other => Err(CoreError::UnknownPolicy(other.to_string())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(xs: &[i64]) -> Vec<Weight> {
        xs.iter().copied().map(Weight).collect()
    }

    #[test]
    fn effect_mul_examples() {
        let d5 = Effect::new("d", 5);
        assert_eq!(
            effect_mul(Some(&Effect::identity()), Some(&d5)).unwrap(),
            Some(d5.clone())
        );
        let got = effect_mul(Some(&Effect::new("x0", 0)), Some(&Effect::new("x1x3", 0))).unwrap();
        assert_eq!(got, Some(Effect::new("x0x1x3", 0)));
        assert_eq!(effect_mul(None, Some(&Effect::new("d", 1))).unwrap(), None);
    }

    #[test]
    fn effect_overflow_is_an_error() {
        let a = Effect::new("", i64::MAX);
        assert!(matches!(
            a.then(&Effect::new("", 1)),
            Err(CoreError::WeightOverflow(..))
        ));
    }

    #[test]
    fn lex_compare_examples() {
        assert_eq!(
            lex_compare(&w(&[2, 3, 1]), &w(&[3, 2, 1])).unwrap(),
            Ordering::Greater
        );
        assert_eq!(lex_compare(&w(&[5]), &w(&[5])).unwrap(), Ordering::Equal);
        assert_eq!(
            lex_compare(&w(&[1, 9]), &w(&[9, 1])).unwrap(),
            Ordering::Greater
        );
        assert_eq!(lex_compare(&[], &[]).unwrap(), Ordering::Equal);
        assert!(matches!(
            lex_compare(&w(&[1]), &w(&[1, 2])),
            Err(CoreError::LengthMismatch(1, 2))
        ));
    }

    #[test]
    fn range_intersect_examples() {
        let r = |a: u32, b: u32| {
            RangeLabel::new(Symbol::from_code(a).unwrap(), Symbol::from_code(b).unwrap()).unwrap()
        };
        assert_eq!(range_intersect(&r(1, 50), &r(20, 80)), Some(r(20, 50)));
        let a = RangeLabel::single('a');
        assert_eq!(range_intersect(&a, &a), Some(a));
        assert_eq!(range_intersect(&r(1, 5), &r(7, 9)), None);
    }

    #[test]
    fn inverted_range_rejected() {
        assert!(RangeLabel::new('z', 'a').is_err());
        assert!(Symbol::from_code(0xD800).is_err());
        assert!(Symbol::from_code(0x110000).is_err());
    }

    fn small_range() -> impl Strategy<Value = RangeLabel> {
        (0u32..40, 0u32..40).prop_map(|(a, b)| {
            let (lo, hi) = (a.min(b), a.max(b));
            RangeLabel::new(
                Symbol::from_code(lo).unwrap(),
                Symbol::from_code(hi).unwrap(),
            )
            .unwrap()
        })
    }

    fn effect() -> impl Strategy<Value = Effect> {
        ("[a-c]{0,3}", -5i64..5).prop_map(|(s, w)| Effect::new(s.as_str(), w))
    }

    proptest! {
        #[test]
        fn lex_compare_is_a_total_order(
            len in 0usize..=6,
            seed in proptest::collection::vec((-3i64..=3, -3i64..=3, -3i64..=3), 6),
        ) {
            let a = w(&seed[..len].iter().map(|t| t.0).collect::<Vec<_>>());
            let b = w(&seed[..len].iter().map(|t| t.1).collect::<Vec<_>>());
            let c = w(&seed[..len].iter().map(|t| t.2).collect::<Vec<_>>());
            let ab = lex_compare(&a, &b).unwrap();
            prop_assert_eq!(ab, lex_compare(&b, &a).unwrap().reverse());
            prop_assert_eq!(ab == Ordering::Equal, a == b);
            let bc = lex_compare(&b, &c).unwrap();
            if ab != Ordering::Greater && bc != Ordering::Greater {
                prop_assert_ne!(lex_compare(&a, &c).unwrap(), Ordering::Greater);
            }
        }

        #[test]
        fn effect_mul_is_a_monoid(a in effect(), b in effect(), c in effect()) {
            let left = a.then(&b).unwrap().then(&c).unwrap();
            let right = a.then(&b.then(&c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
            prop_assert_eq!(Effect::identity().then(&a).unwrap(), a.clone());
            prop_assert_eq!(a.then(&Effect::identity()).unwrap(), a);
        }

        #[test]
        fn intersection_is_pointwise_conjunction(a in small_range(), b in small_range()) {
            let r = range_intersect(&a, &b);
            for code in 0u32..45 {
                let s = Symbol::from_code(code).unwrap();
                let inside = r.is_some_and(|r| r.contains(s));
                prop_assert_eq!(inside, a.contains(s) && b.contains(s));
            }
        }
    }
}
