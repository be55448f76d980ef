//! Plain-text poset format and DOT export.
//!
//! ```text
//! elements: e a b G
//! cover: e < a
//! cover: e < b
//! cover: a < G
//! cover: b < G
//! ```
//!
//! Blank lines and `#` comments are ignored. `elements:` may repeat.

use std::collections::HashMap;
use std::fmt::Write;

use super::{FinitePoset, PosetError};

pub fn parse_poset(src: &str) -> Result<FinitePoset, PosetError> {
    let mut labels: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut rel = Vec::new();
    for (no, raw) in src.lines().enumerate() {
        let line_no = no + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| PosetError::Parse { line: line_no, msg };
        let (key, rest) = line
            .split_once(':')
            .ok_or_else(|| err(format!("expected `key: value`, got `{line}`")))?;
        match key.trim() {
            "elements" => {
                for l in rest.split_whitespace() {
                    if index.insert(l.to_string(), labels.len()).is_some() {
                        return Err(err(format!("duplicate element `{l}`")));
                    }
                    labels.push(l.to_string());
                }
            }
            "cover" => {
                // labels may themselves contain `<`, so prefer a spaced separator
                let (a, b) = rest
                    .split_once(" < ")
                    .or_else(|| rest.split_once('<'))
                    .ok_or_else(|| err("cover needs `a < b`".into()))?;
                let look = |s: &str| {
                    index
                        .get(s.trim())
                        .copied()
                        .ok_or_else(|| err(format!("unknown element `{}`", s.trim())))
                };
                let (ia, ib) = (look(a)?, look(b)?);
                if ia == ib {
                    return Err(err(format!("`{}` cannot cover itself", a.trim())));
                }
                rel.push((ia, ib));
            }
            other => return Err(err(format!("unknown key `{other}`"))),
        }
    }
    let p = FinitePoset::from_covers(labels.len(), &rel)?;
    Ok(p.with_labels(labels))
}

pub fn to_text(p: &FinitePoset) -> String {
    let mut s = String::from("elements:");
    for l in p.labels() {
        s.push(' ');
        s.push_str(l);
    }
    s.push('\n');
    for &(a, b) in p.covers() {
        let _ = writeln!(s, "cover: {} < {}", p.label(a), p.label(b));
    }
    s
}

/// Hasse diagram, bottom to top.
pub fn to_dot(p: &FinitePoset, name: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "digraph \"{name}\" {{");
    let _ = writeln!(s, "  rankdir=BT;");
    let _ = writeln!(s, "  node [shape=plaintext];");
    for (i, l) in p.labels().iter().enumerate() {
        let _ = writeln!(s, "  n{i} [label=\"{}\"];", l.replace('"', "\\\""));
    }
    for &(a, b) in p.covers() {
        let _ = writeln!(s, "  n{a} -> n{b};");
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    const DIAMOND: &str = "# C6\nelements: e C2 C3 C6\ncover: e < C2\ncover: e < C3\ncover: C2 < C6\ncover: C3 < C6\n";

    #[test]
    fn angle_bracket_labels() {
        let src = "elements: e <(2,0)> <(1,0)>\ncover: e < <(2,0)>\ncover: <(2,0)> < <(1,0)>\n";
        let p = parse_poset(src).unwrap();
        assert!(p.lt(1, 2));
        assert_eq!(to_text(&parse_poset(&to_text(&p)).unwrap()), to_text(&p));
        assert!(parse_poset("elements: a b\ncover: a<b\n").unwrap().lt(0, 1));
    }

    #[test]
    fn parse_and_round_trip() {
        let p = parse_poset(DIAMOND).unwrap();
        assert_eq!(p.len(), 4);
        assert!(p.leq(0, 3));
        let q = parse_poset(&to_text(&p)).unwrap();
        assert_eq!(p, q);
        assert_eq!(to_text(&p), to_text(&q));
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            parse_poset("elements: a b\ncover: a < c\n"),
            Err(PosetError::Parse { line: 2, .. })
        ));
        assert!(parse_poset("elements: a a\n").is_err());
        assert!(parse_poset("elements: a b\ncover: a < b\ncover: b < a\n").is_err());
        assert!(parse_poset("nonsense\n").is_err());
    }

    #[test]
    fn dot_output() {
        let p = parse_poset(DIAMOND).unwrap();
        let d = to_dot(&p, "hasse");
        assert!(d.contains("n0 -> n1;"));
        assert_eq!(d.matches("->").count(), 4);
    }
}
