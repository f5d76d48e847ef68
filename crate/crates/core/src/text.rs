//! Quoting and unquoting of string literals. Expressions, compiled artifacts
//! and the command-line output all share this escaping.

use crate::types::{OutputString, Symbol};

/// Renders `symbols` as a single-quoted literal, e.g. `'d3d0'` or `''`.
pub fn quote(symbols: &[Symbol]) -> String {
    let mut s = String::with_capacity(symbols.len() + 2);
    s.push('\'');
    for sym in symbols {
        push_escaped(&mut s, sym.as_char(), false);
    }
    s.push('\'');
    s
}

/// Escapes one character for use inside a string literal or a `[..]` class.
pub fn push_escaped(s: &mut String, c: char, in_class: bool) {
    match c {
        '\n' => s.push_str("\\n"),
        '\t' => s.push_str("\\t"),
        '\\' => s.push_str("\\\\"),
        '\'' => s.push_str("\\'"),
        ']' | '[' | '-' if in_class => {
            s.push('\\');
            s.push(c);
        }
        c if c.is_control() || (in_class && c.is_whitespace()) => {
            s.push_str(&format!("\\u{:04X}", c as u32));
        }
        c => s.push(c),
    }
}

/// Decodes the escape sequence following a backslash. `next` yields the
/// characters after the backslash; returns the decoded character.
pub fn decode_escape(next: &mut impl Iterator<Item = char>) -> Result<char, String> {
    match next.next() {
        None => Err("unterminated escape sequence".into()),
        Some('n') => Ok('\n'),
        Some('t') => Ok('\t'),
        Some('u') => {
            let hex: String = next.take(4).collect();
            if hex.len() != 4 || !hex.chars().all(|c| c.is_ascii_hexdigit()) {
                return Err(format!("malformed \\u escape `\\u{hex}`"));
            }
            let code = u32::from_str_radix(&hex, 16).map_err(|e| e.to_string())?;
            char::from_u32(code).ok_or_else(|| format!("\\u{hex} is not a Unicode scalar value"))
        }
        Some(c) if c.is_ascii_alphanumeric() => Err(format!("unknown escape `\\{c}`")),
        Some(c) => Ok(c),
    }
}

/// Parses a quoted literal at the start of `s`. Returns the literal and the
/// remainder of the input after the closing quote.
pub fn split_quoted(s: &str) -> Result<(OutputString, &str), String> {
    let mut chars = s.char_indices();
    match chars.next() {
        Some((_, '\'')) => {}
        _ => return Err(format!("expected a quoted string at `{s}`")),
    }
    let mut out = Vec::new();
    while let Some((i, c)) = chars.next() {
        match c {
            '\'' => return Ok((OutputString::from_symbols(out), &s[i + 1..])),
            '\\' => {
                let mut consumed = 0;
                let decoded =
                    decode_escape(&mut chars.clone().map(|(_, c)| c).inspect(|_| consumed += 1))?;
                for _ in 0..consumed {
                    chars.next();
                }
                out.push(Symbol::new(decoded));
            }
            c => out.push(Symbol::new(c)),
        }
    }
    Err("unterminated string literal".into())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quote_and_split_agree() {
        for raw in [
            "",
            "d3d0",
            "it's",
            "a\\b",
            "tab\there",
            "\u{1}x",
            "żółw",
            "\u{10FFFF}",
        ] {
            let sym: Vec<Symbol> = raw.chars().map(Symbol::new).collect();
            let q = quote(&sym);
            let (back, rest) = split_quoted(&q).unwrap();
            assert_eq!(back.symbols(), &sym[..], "{q}");
            assert_eq!(rest, "");
        }
    }

    #[test]
    fn split_leaves_remainder() {
        let (s, rest) = split_quoted("'ab' 12").unwrap();
        assert_eq!(s, OutputString::from("ab"));
        assert_eq!(rest, " 12");
        assert!(split_quoted("'open").is_err());
        assert!(split_quoted("'\\uD800'").is_err());
        assert!(split_quoted("'\\q'").is_err());
    }
}
