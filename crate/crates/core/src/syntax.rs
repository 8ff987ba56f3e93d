//! Parser and printer for presentations in a fixed ASCII grammar.
//!
//! ```text
//! presentation := "<" gens "|" rels ">"
//! gens         := ident ("," ident)*
//! rels         := ε | rel ("," rel)*
//! rel          := word ("=" word)?
//! word         := "1" | factor+            (factors juxtaposed, "*" optional)
//! factor       := base ("^" int)?
//! base         := ident | "(" word ")"
//! ident        := [A-Za-z][A-Za-z0-9_]*
//! int          := "-"? digits
//! ```
//!
//! Whitespace is insignificant. A relation `u = v` is stored as the
//! relator `u·v⁻¹`. Relators are stored freely reduced but not cyclically
//! reduced. A relator that freely reduces to the empty word is rejected:
//! it is a vacuous relation the downstream construction cannot use.

use crate::presentation::Presentation;
use crate::word::Word;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Byte offsets into the source text, `start <= end`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ParseError {
    pub message: String,
    pub span: SourceSpan,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at {}..{}: {}", self.span.start, self.span.end, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, PartialEq, Eq, Debug)]
enum Tok {
    Lt,
    Gt,
    Pipe,
    Comma,
    Star,
    Caret,
    Eq,
    LParen,
    RParen,
    Ident(String),
    Int(i64),
}

struct Token {
    tok: Tok,
    span: SourceSpan,
}

fn err(message: impl Into<String>, span: SourceSpan) -> ParseError {
    ParseError { message: message.into(), span }
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        let start = i;
        let tok = match b {
            b' ' | b'\t' | b'\r' | b'\n' => {
                i += 1;
                continue;
            }
            b'<' => Tok::Lt,
            b'>' => Tok::Gt,
            b'|' => Tok::Pipe,
            b',' => Tok::Comma,
            b'*' => Tok::Star,
            b'^' => Tok::Caret,
            b'=' => Tok::Eq,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'-' | b'0'..=b'9' => {
                let mut j = i;
                if bytes[j] == b'-' {
                    j += 1;
                }
                let digits_start = j;
                while j < bytes.len() && bytes[j].is_ascii_digit() {
                    j += 1;
                }
                if j == digits_start {
                    return Err(err("expected digits", SourceSpan { start, end: j.max(start + 1) }));
                }
                let value: i64 = text[i..j]
                    .parse()
                    .map_err(|_| err("integer literal out of range", SourceSpan { start, end: j }))?;
                out.push(Token { tok: Tok::Int(value), span: SourceSpan { start, end: j } });
                i = j;
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                let mut j = i + 1;
                while j < bytes.len() && (bytes[j].is_ascii_alphanumeric() || bytes[j] == b'_') {
                    j += 1;
                }
                out.push(Token {
                    tok: Tok::Ident(text[i..j].to_string()),
                    span: SourceSpan { start, end: j },
                });
                i = j;
                continue;
            }
            _ => {
                return Err(err(
                    format!("unexpected character `{}`", text[i..].chars().next().unwrap()),
                    SourceSpan { start, end: start + 1 },
                ))
            }
        };
        out.push(Token { tok, span: SourceSpan { start, end: start + 1 } });
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    end: usize,
    gens: Vec<String>,
    _text: &'a str,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|t| &t.tok)
    }

    fn span(&self) -> SourceSpan {
        self.tokens
            .get(self.pos)
            .map(|t| t.span)
            .unwrap_or(SourceSpan { start: self.end, end: self.end })
    }

    fn bump(&mut self) -> Option<&Token> {
        let t = self.tokens.get(self.pos);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<SourceSpan, ParseError> {
        let span = self.span();
        match self.peek() {
            Some(t) if *t == tok => {
                self.bump();
                Ok(span)
            }
            _ => Err(err(format!("expected {what}"), span)),
        }
    }

    fn parse_ident(&mut self, what: &str) -> Result<(String, SourceSpan), ParseError> {
        let span = self.span();
        match self.peek().cloned() {
            Some(Tok::Ident(name)) => {
                self.bump();
                Ok((name, span))
            }
            _ => Err(err(format!("expected {what}"), span)),
        }
    }

    fn starts_factor(&self) -> bool {
        matches!(self.peek(), Some(Tok::Ident(_)) | Some(Tok::LParen))
    }

    fn parse_base(&mut self) -> Result<Word, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Ident(name)) => {
                let span = self.span();
                self.bump();
                match self.gens.iter().position(|g| *g == name) {
                    Some(index) => Ok(Word::generator(index)),
                    None => Err(err(format!("undeclared generator `{name}`"), span)),
                }
            }
            Some(Tok::LParen) => {
                self.bump();
                let w = self.parse_word()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(w)
            }
            _ => Err(err("expected a word", self.span())),
        }
    }

    fn parse_factor(&mut self) -> Result<Word, ParseError> {
        let base = self.parse_base()?;
        if self.peek() == Some(&Tok::Caret) {
            self.bump();
            let span = self.span();
            match self.peek().cloned() {
                Some(Tok::Int(n)) => {
                    self.bump();
                    Ok(base.pow(n))
                }
                _ => Err(err("expected an integer exponent", span)),
            }
        } else {
            Ok(base)
        }
    }

    fn parse_word(&mut self) -> Result<Word, ParseError> {
        // `1` is the identity word and must stand alone.
        if let Some(Tok::Int(n)) = self.peek() {
            let span = self.span();
            if *n == 1 {
                self.bump();
                return Ok(Word::identity());
            }
            return Err(err("expected a word (`1` or generator letters)", span));
        }
        if !self.starts_factor() {
            return Err(err("expected a word", self.span()));
        }
        let mut w = self.parse_factor()?;
        loop {
            if self.peek() == Some(&Tok::Star) {
                self.bump();
                let f = self.parse_factor()?;
                w = w.multiply(&f);
            } else if self.starts_factor() {
                let f = self.parse_factor()?;
                w = w.multiply(&f);
            } else {
                return Ok(w);
            }
        }
    }

    /// rel := word ("=" word)?, normalized to the relator u·v⁻¹.
    fn parse_relator(&mut self) -> Result<Word, ParseError> {
        let start = self.span().start;
        let u = self.parse_word()?;
        let relator = if self.peek() == Some(&Tok::Eq) {
            self.bump();
            let v = self.parse_word()?;
            u.multiply(&v.inverse())
        } else {
            u
        };
        let end = self
            .tokens
            .get(self.pos.wrapping_sub(1).min(self.tokens.len().saturating_sub(1)))
            .map(|t| t.span.end)
            .unwrap_or(self.end);
        if relator.is_empty() {
            return Err(err(
                "relator freely reduces to the empty word (vacuous relation)",
                SourceSpan { start, end },
            ));
        }
        Ok(relator)
    }
}

/// Parses one presentation. Relators are returned freely reduced; a
/// relation `u = v` becomes the relator `u·v⁻¹`. Generator order is
/// preserved from the source.
pub fn parse_presentation(text: &str) -> Result<Presentation, ParseError> {
    let tokens = lex(text)?;
    let mut p = Parser { tokens, pos: 0, end: text.len(), gens: Vec::new(), _text: text };

    p.expect(Tok::Lt, "`<`")?;
    loop {
        let (name, span) = p.parse_ident("a generator name")?;
        if p.gens.contains(&name) {
            return Err(err(format!("duplicate generator name `{name}`"), span));
        }
        p.gens.push(name);
        if p.peek() == Some(&Tok::Comma) {
            p.bump();
        } else {
            break;
        }
    }
    p.expect(Tok::Pipe, "`|`")?;

    let mut relators = Vec::new();
    if p.peek() != Some(&Tok::Gt) {
        loop {
            relators.push(p.parse_relator()?);
            if p.peek() == Some(&Tok::Comma) {
                p.bump();
            } else {
                break;
            }
        }
    }
    p.expect(Tok::Gt, "`>`")?;
    if p.pos != p.tokens.len() {
        return Err(err("unexpected trailing input", p.span()));
    }

    let gens = std::mem::take(&mut p.gens);
    Presentation::new(gens, relators).map_err(|e| err(e.to_string(), SourceSpan { start: 0, end: text.len() }))
}

/// Prints a word in the canonical form used by [`print_presentation`]:
/// runs of one generator collapse to `g^k`, factors are `*`-separated,
/// the empty word prints as `1`.
pub fn print_word(w: &Word, names: &[String]) -> String {
    if w.is_empty() {
        return "1".to_string();
    }
    let mut parts: Vec<String> = Vec::new();
    let letters = w.letters();
    let mut i = 0;
    while i < letters.len() {
        let l = letters[i];
        let mut j = i + 1;
        while j < letters.len() && letters[j] == l {
            j += 1;
        }
        let count = (j - i) as i64 * l.sign as i64;
        let name = &names[l.gen];
        if count == 1 {
            parts.push(name.clone());
        } else {
            parts.push(format!("{name}^{count}"));
        }
        i = j;
    }
    parts.join("*")
}

/// Canonical string form; `parse_presentation` round-trips it exactly.
pub fn print_presentation(p: &Presentation) -> String {
    let names: Vec<String> = p.generators().iter().map(|g| g.name.clone()).collect();
    let gens = names.join(", ");
    let rels: Vec<String> = p.relators().iter().map(|r| print_word(r, &names)).collect();
    if rels.is_empty() {
        format!("< {gens} | >")
    } else {
        format!("< {gens} | {} >", rels.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::Letter;
    use proptest::prelude::*;

    #[test]
    fn parses_cyclic() {
        let p = parse_presentation("< x | x^4 >").unwrap();
        assert_eq!(p.generator_count(), 1);
        assert_eq!(p.relators(), &[Word::generator(0).pow(4)]);
    }

    #[test]
    fn parses_dihedral_relation_form() {
        let p = parse_presentation("< s, t | s^4, t^2, t^-1*s*t = s^3 >").unwrap();
        assert_eq!(p.generator_count(), 2);
        assert_eq!(p.relator_count(), 3);
        let s = Word::generator(0);
        let t = Word::generator(1);
        let expected = t.inverse().multiply(&s).multiply(&t).multiply(&s.pow(-3));
        assert_eq!(p.relators()[2], expected);
    }

    #[test]
    fn rejects_vacuous_relator() {
        let e = parse_presentation("< x | x*x^-1 >").unwrap_err();
        assert!(e.message.contains("empty word"));
        assert!(e.span.start >= 6 && e.span.end <= 12, "span {:?}", e.span);
    }

    #[test]
    fn rejects_undeclared_generator() {
        let e = parse_presentation("< x | y^2 >").unwrap_err();
        assert!(e.message.contains("undeclared"));
        assert_eq!(e.span.start, 6);
    }

    #[test]
    fn rejects_duplicate_generator() {
        let e = parse_presentation("< x, x | >").unwrap_err();
        assert!(e.message.contains("duplicate"));
    }

    #[test]
    fn power_zero_and_one() {
        let p = parse_presentation("< x | x^0*x^2 >").unwrap();
        assert_eq!(p.relators()[0], Word::generator(0).pow(2));
        assert!(parse_presentation("< x | 1 >").is_err()); // vacuous
        let q = parse_presentation("< x | x^2 = 1 >").unwrap();
        assert_eq!(q.relators()[0], Word::generator(0).pow(2));
    }

    #[test]
    fn parenthesized_words() {
        let p = parse_presentation("< s, t | (t^-1*s*t*s^-3)^2 >").unwrap();
        assert_eq!(p.relators()[0].len(), 12);
    }

    #[test]
    fn empty_relator_list() {
        let p = parse_presentation("< x | >").unwrap();
        assert_eq!(p.relator_count(), 0);
        assert_eq!(print_presentation(&p), "< x | >");
    }

    #[test]
    fn print_examples() {
        let p = parse_presentation("<x|x^4>").unwrap();
        assert_eq!(print_presentation(&p), "< x | x^4 >");
        let d8 = parse_presentation("< s, t | s^4, t^2, t^-1*s*t = s^3 >").unwrap();
        let printed = print_presentation(&d8);
        assert_eq!(printed, "< s, t | s^4, t^2, t^-1*s*t*s^-3 >");
        assert_eq!(parse_presentation(&printed).unwrap(), d8);
    }

    fn arb_presentation() -> impl Strategy<Value = Presentation> {
        let names = prop::sample::subsequence(
            vec!["a", "b", "c", "x", "y", "z_1", "gen0"],
            1..=4,
        );
        names.prop_flat_map(|names| {
            let n = names.len();
            let word = prop::collection::vec((0..n, prop::bool::ANY), 1..10).prop_map(|ls| {
                Word::from_letters(
                    ls.into_iter().map(|(g, s)| Letter::new(g, if s { 1 } else { -1 })),
                )
            });
            let relators = prop::collection::vec(word, 0..5).prop_map(|ws| {
                ws.into_iter().filter(|w| !w.is_empty()).collect::<Vec<_>>()
            });
            relators.prop_map(move |rels| Presentation::new(names.clone(), rels).unwrap())
        })
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(p in arb_presentation()) {
            let text = print_presentation(&p);
            let q = parse_presentation(&text).unwrap();
            prop_assert_eq!(p, q);
        }

        #[test]
        fn parse_is_total(text in "[ <>|,*^=()A-Za-z0-9_-]{0,40}") {
            match parse_presentation(&text) {
                Ok(_) => {}
                Err(e) => {
                    prop_assert!(e.span.start <= e.span.end);
                    prop_assert!(e.span.end <= text.len());
                    prop_assert!(!e.message.is_empty());
                }
            }
        }
    }
}
