//! Minimal N-Triples reader and writer covering what the generator emits:
//! IRIs, blank nodes and plain string literals.

use std::fmt::Write as _;

use crate::error::{Error, Result};

pub const RDF_TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Iri(String),
    Blank(String),
    Literal(String),
}

impl Term {
    pub fn write(&self, out: &mut String) {
        match self {
            Term::Iri(iri) => {
                out.push('<');
                out.push_str(iri);
                out.push('>');
            }
            Term::Blank(label) => {
                out.push_str("_:");
                out.push_str(label);
            }
            Term::Literal(value) => {
                out.push('"');
                escape_literal(value, out);
                out.push('"');
            }
        }
    }
}

pub fn escape_literal(value: &str, out: &mut String) {
    for c in value.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '"' => out.push_str("\\\""),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if c.is_control() => {
                let _ = write!(out, "\\u{:04X}", c as u32);
            }
            c => out.push(c),
        }
    }
}

pub fn triple_line(s: &Term, p: &Term, o: &Term) -> String {
    let mut line = String::new();
    s.write(&mut line);
    line.push(' ');
    p.write(&mut line);
    line.push(' ');
    o.write(&mut line);
    line.push_str(" .");
    line
}

struct Cursor<'a> {
    line: usize,
    rest: &'a str,
}

impl<'a> Cursor<'a> {
    fn err(&self, msg: &str) -> Error {
        Error::syntax(self.line, msg)
    }

    fn skip_ws(&mut self) {
        self.rest = self.rest.trim_start_matches([' ', '\t']);
    }

    fn term(&mut self) -> Result<Term> {
        self.skip_ws();
        if let Some(r) = self.rest.strip_prefix('<') {
            let end = r.find('>').ok_or_else(|| self.err("unterminated IRI"))?;
            let iri = r[..end].to_string();
            self.rest = &r[end + 1..];
            Ok(Term::Iri(iri))
        } else if let Some(r) = self.rest.strip_prefix("_:") {
            let end = r.find([' ', '\t']).unwrap_or(r.len());
            let label = r[..end].to_string();
            if label.is_empty() {
                return Err(self.err("empty blank node label"));
            }
            self.rest = &r[end..];
            Ok(Term::Blank(label))
        } else if let Some(r) = self.rest.strip_prefix('"') {
            let mut value = String::new();
            let mut chars = r.char_indices();
            loop {
                let (i, c) = chars
                    .next()
                    .ok_or_else(|| self.err("unterminated literal"))?;
                match c {
                    '"' => {
                        self.rest = &r[i + 1..];
                        break;
                    }
                    '\\' => {
                        let (_, e) = chars.next().ok_or_else(|| self.err("dangling escape"))?;
                        match e {
                            '\\' => value.push('\\'),
                            '"' => value.push('"'),
                            'n' => value.push('\n'),
                            'r' => value.push('\r'),
                            't' => value.push('\t'),
                            'u' | 'U' => {
                                let width = if e == 'u' { 4 } else { 8 };
                                let hex: String = (0..width)
                                    .filter_map(|_| chars.next().map(|(_, h)| h))
                                    .collect();
                                let code = u32::from_str_radix(&hex, 16)
                                    .ok()
                                    .and_then(char::from_u32)
                                    .ok_or_else(|| self.err("bad unicode escape"))?;
                                value.push(code);
                            }
                            _ => return Err(self.err("unknown escape")),
                        }
                    }
                    c => value.push(c),
                }
            }
            Ok(Term::Literal(value))
        } else {
            Err(self.err("expected IRI, blank node or literal"))
        }
    }
}

/// Parses an N-Triples document into (subject, predicate, object) terms.
pub fn parse(text: &str) -> Result<Vec<(Term, Term, Term)>> {
    let mut triples = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut cur = Cursor {
            line: i + 1,
            rest: trimmed,
        };
        let s = cur.term()?;
        let p = cur.term()?;
        let o = cur.term()?;
        cur.skip_ws();
        if cur.rest != "." {
            return Err(cur.err("expected terminating '.'"));
        }
        if matches!(s, Term::Literal(_)) || !matches!(p, Term::Iri(_)) {
            return Err(cur.err("literal subject or non-IRI predicate"));
        }
        triples.push((s, p, o));
    }
    Ok(triples)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn escapes_round_trip() {
        let value = "tab\there \"quoted\" back\\slash\nnew\u{1}";
        let line = triple_line(
            &Term::Iri("http://x/s".into()),
            &Term::Iri("http://x/p".into()),
            &Term::Literal(value.into()),
        );
        assert!(!line.contains('\n'));
        let parsed = parse(&line).unwrap();
        assert_eq!(parsed[0].2, Term::Literal(value.into()));
    }

    #[test]
    fn parses_blank_nodes() {
        let t = parse("_:b0 <http://x/p> <http://x/o> .\n").unwrap();
        assert_eq!(t[0].0, Term::Blank("b0".into()));
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse("<a> <b> <c>\n").is_err());
        assert!(parse("\"lit\" <b> <c> .\n").is_err());
        assert!(parse("<a> <b> \"open .\n").is_err());
    }
}
