//! Line-based text serialization of compiled machines.
//!
//! ```text
//! FST1
//! policy min
//! states 4
//! initial 0
//! state 0
//! state 3 tau 'd0' 1 color Latin
//! trans 0 97 97 1 'd0d4' 2
//! ```

use std::fmt::Write as _;

use lexfst::text::{quote, split_quoted};
use lexfst::{
    Effect, Policy, RangeLabel, Symbol, Transducer, TransducerBuilder, Transition, Weight,
};
use thiserror::Error;

pub const MAGIC: &str = "FST1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("artifact line {line}: {message}")]
pub struct ArtifactError {
    pub line: usize,
    pub message: String,
}

pub fn save(t: &Transducer) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{MAGIC}");
    let _ = writeln!(s, "policy {}", t.policy().name());
    let _ = writeln!(s, "states {}", t.state_count());
    let _ = writeln!(s, "initial {}", t.initial());
    for q in 0..t.state_count() {
        let _ = write!(s, "state {q}");
        if let Some(e) = t.final_effect(q) {
            let _ = write!(s, " tau {} {}", quote(e.out.symbols()), e.weight);
        }
        if let Some(c) = t.color(q) {
            let _ = write!(s, " color {c}");
        }
        s.push('\n');
    }
    for tr in t.transitions() {
        let _ = writeln!(
            s,
            "trans {} {} {} {} {} {}",
            tr.src,
            tr.label.lo().code(),
            tr.label.hi().code(),
            tr.dst,
            quote(tr.effect.out.symbols()),
            tr.effect.weight
        );
    }
    s
}

struct Fields<'a> {
    rest: &'a str,
}

impl<'a> Fields<'a> {
    fn word(&mut self) -> Option<&'a str> {
        let r = self.rest.trim_start();
        if r.is_empty() {
            return None;
        }
        let end = r.find(char::is_whitespace).unwrap_or(r.len());
        self.rest = &r[end..];
        Some(&r[..end])
    }

    fn number<T: std::str::FromStr>(&mut self, what: &str) -> Result<T, String> {
        let w = self.word().ok_or_else(|| format!("missing {what}"))?;
        w.parse().map_err(|_| format!("invalid {what} `{w}`"))
    }

    fn effect(&mut self) -> Result<Effect, String> {
        let (out, rest) = split_quoted(self.rest.trim_start())?;
        self.rest = rest;
        let w: i64 = self.number("weight")?;
        Ok(Effect {
            out,
            weight: Weight(w),
        })
    }

    fn end(&mut self) -> Result<(), String> {
        match self.word() {
            None => Ok(()),
            Some(w) => Err(format!("unexpected `{w}`")),
        }
    }
}

fn header<'a, T>(
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
    key: &str,
) -> Result<T, ArtifactError>
where
    T: std::str::FromStr,
    T::Err: std::fmt::Display,
{
    let (line, text) = lines.next().ok_or_else(|| ArtifactError {
        line: 0,
        message: format!("truncated header, missing `{key}`"),
    })?;
    let err = |message: String| ArtifactError { line, message };
    let value = text
        .strip_prefix(key)
        .and_then(|r| r.strip_prefix(' '))
        .ok_or_else(|| err(format!("expected `{key} ...`")))?;
    value
        .trim()
        .parse()
        .map_err(|e| err(format!("invalid {key}: {e}")))
}

pub fn load(text: &str) -> Result<Transducer, ArtifactError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim().is_empty());
    match lines.next() {
        Some((_, l)) if l.trim() == MAGIC => {}
        _ => {
            return Err(ArtifactError {
                line: 1,
                message: format!("missing `{MAGIC}` header"),
            })
        }
    }
    let policy: Policy = header(&mut lines, "policy")?;
    let states: usize = header(&mut lines, "states")?;
    let initial: usize = header(&mut lines, "initial")?;
    let mut b = TransducerBuilder::new(states, initial).policy(policy);
    for (line, text) in lines {
        parse_record(&mut b, states, text).map_err(|message| ArtifactError { line, message })?;
    }
    b.build().map_err(|e| ArtifactError {
        line: 0,
        message: e.to_string(),
    })
}

fn parse_record(b: &mut TransducerBuilder, states: usize, line: &str) -> Result<(), String> {
    let mut f = Fields { rest: line };
    match f.word() {
        Some("state") => {
            let q: usize = f.number("state id")?;
            if q >= states {
                return Err(format!("state {q} out of range"));
            }
            loop {
                match f.word() {
                    None => return Ok(()),
                    Some("tau") => b.set_final_effect(q, f.effect()?),
                    Some("color") => {
                        let name = f.word().ok_or("missing color name")?;
                        b.set_color(q, name);
                    }
                    Some(w) => return Err(format!("unexpected `{w}`")),
                }
            }
        }
        Some("trans") => {
            let src = f.number("source state")?;
            let lo = Symbol::from_code(f.number("lower bound")?).map_err(|e| e.to_string())?;
            let hi = Symbol::from_code(f.number("upper bound")?).map_err(|e| e.to_string())?;
            let label = RangeLabel::new(lo, hi).map_err(|e| e.to_string())?;
            let dst = f.number("target state")?;
            let effect = f.effect()?;
            f.end()?;
            b.push_transition(Transition {
                src,
                label,
                dst,
                effect,
            });
            Ok(())
        }
        Some(w) => Err(format!("unknown record `{w}`")),
        None => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use lexfst::{compile, parse};
    use proptest::prelude::*;

    fn crossed() -> Transducer {
        let e = parse("(('a':'d0d4') 2 ('b':'d3') 3 | ('a':'d3') 3 'b' 2):'d0'").unwrap();
        compile(&e, Policy::Min).unwrap()
    }

    #[test]
    fn layout() {
        let text = save(&crossed());
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(
            &lines[..4],
            &["FST1", "policy min", "states 5", "initial 0"]
        );
        assert_eq!(lines.iter().filter(|l| l.starts_with("state ")).count(), 5);
        assert_eq!(lines.iter().filter(|l| l.starts_with("trans ")).count(), 4);
        assert!(lines.contains(&"trans 1 98 98 2 'd0d4' 2"));
    }

    #[test]
    fn round_trip_with_escapes() {
        let t = TransducerBuilder::new(2, 0)
            .transition(
                0,
                RangeLabel::new('\0', '\u{10FFFF}').unwrap(),
                1,
                Effect::new("it's\n\\ ok", i64::MIN),
            )
            .final_effect(1, Effect::new("", i64::MAX))
            .final_effect(0, Effect::new(" '' ", -1))
            .color(1, "Any_1")
            .build()
            .unwrap();
        assert_eq!(load(&save(&t)).unwrap(), t);
        assert_eq!(load(&save(&crossed())).unwrap(), crossed());
    }

    #[test]
    fn malformed_artifacts() {
        let good = save(&crossed());
        assert!(load("").is_err());
        assert!(load("FST2\n").is_err());
        assert!(load(&good.replace("policy min", "policy mid")).is_err());
        assert!(load(&good.replace("states 5", "states 3")).is_err());
        assert!(load(&good.replace("'d0d4' 2", "'d0d4 2")).is_err());
        assert!(load(&good.replace("trans 0 97 97", "trans 0 98 97")).is_err());
        assert!(load(&good.replace("trans 0 97 97", "trans 0 55296 55296")).is_err());
        assert!(load(&format!("{good}bogus 1\n")).is_err());
        let err = load(&format!("{good}trans 0 1 2 3 '' 4 extra\n")).unwrap_err();
        assert_eq!(err.line, good.lines().count() + 1);
    }

    fn arb_machine() -> impl Strategy<Value = Transducer> {
        let chars = prop_oneof![
            proptest::char::range('a', 'e'),
            Just('\''),
            Just('\\'),
            Just('\n'),
            Just(' '),
            Just('é'),
        ];
        let out =
            proptest::collection::vec(chars, 0..4).prop_map(|v| v.into_iter().collect::<String>());
        let effect = (out, any::<i64>()).prop_map(|(o, w)| Effect::new(o.as_str(), w));
        (1usize..6).prop_flat_map(move |n| {
            let trans =
                proptest::collection::vec((0..n, 0u32..300, 0u32..300, 0..n, effect.clone()), 0..8);
            let finals = proptest::collection::vec(proptest::option::of(effect.clone()), n);
            let colors = proptest::collection::vec(proptest::option::of("[A-Z][a-z0-9_]{0,4}"), n);
            (Just(n), 0..n, any::<bool>(), trans, finals, colors).prop_map(
                |(n, init, min, trans, finals, colors)| {
                    let mut b = TransducerBuilder::new(n, init).policy(if min {
                        Policy::Min
                    } else {
                        Policy::Max
                    });
                    for (src, x, y, dst, eff) in trans {
                        let label = RangeLabel::new(
                            Symbol::from_code(x.min(y)).unwrap(),
                            Symbol::from_code(x.max(y)).unwrap(),
                        )
                        .unwrap();
                        b.push_transition(Transition {
                            src,
                            label,
                            dst,
                            effect: eff,
                        });
                    }
                    for (q, (fin, color)) in finals.into_iter().zip(colors).enumerate() {
                        if let Some(e) = fin {
                            b.set_final_effect(q, e);
                        }
                        if let Some(c) = color {
                            b.set_color(q, c);
                        }
                    }
                    b.build().unwrap()
                },
            )
        })
    }

    proptest! {
        #[test]
        fn save_then_load_is_identity(t in arb_machine()) {
            let text = save(&t);
            prop_assert_eq!(load(&text).unwrap(), t.clone());
            prop_assert_eq!(save(&load(&text).unwrap()), text);
        }
    }
}
