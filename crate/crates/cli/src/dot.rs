use std::fmt::Write as _;

use lexfst::text::quote;
use lexfst::{Effect, Transducer};

fn effect_label(e: &Effect) -> String {
    format!("{} / {}", quote(e.out.symbols()), e.weight)
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\")
        .replace('"', "\\\"")
        .replace('\n', "\\n")
}

/// Graphviz rendering. Accepting states are double circles labelled with
/// their state output; the initial state is drawn bold.
pub fn to_dot(t: &Transducer) -> String {
    let mut s = String::from("digraph fst {\n  rankdir=LR;\n");
    for q in 0..t.state_count() {
        let (shape, label) = match t.final_effect(q) {
            Some(e) => ("doublecircle", format!("{q}\n{}", effect_label(e))),
            None => ("circle", q.to_string()),
        };
        let label = match t.color(q) {
            Some(c) => format!("{label}\n@{c}"),
            None => label,
        };
        let style = if q == t.initial() { ", style=bold" } else { "" };
        let _ = writeln!(
            s,
            "  q{q} [shape={shape}{style}, label=\"{}\"];",
            escape(&label)
        );
    }
    for tr in t.transitions() {
        let label = format!("{} : {}", tr.label, effect_label(&tr.effect));
        let _ = writeln!(
            s,
            "  q{} -> q{} [label=\"{}\"];",
            tr.src,
            tr.dst,
            escape(&label)
        );
    }
    s.push_str("}\n");
    s
}
