use std::sync::Arc;

use super::Formula;
use crate::error::{ParseError, ParseErrorKind};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Top,
    Bot,
    Or,
    And,
    Not,
    LParen,
    RParen,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => s.clone(),
            Tok::Top => "top".into(),
            Tok::Bot => "bot".into(),
            Tok::Or => "|".into(),
            Tok::And => "&".into(),
            Tok::Not => "!".into(),
            Tok::LParen => "(".into(),
            Tok::RParen => ")".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let mut out = Vec::new();
    let mut iter = text.char_indices().peekable();
    while let Some((at, c)) = iter.next() {
        let tok = match c {
            c if c.is_whitespace() => continue,
            '|' | '∨' => Tok::Or,
            '&' | '∧' => Tok::And,
            '!' | '¬' => Tok::Not,
            '⊤' | '1' => Tok::Top,
            '⊥' | '0' => Tok::Bot,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            c if c.is_alphabetic() => {
                let mut end = at + c.len_utf8();
                while let Some(&(i, next)) = iter.peek() {
                    if next.is_alphabetic() || next.is_ascii_digit() || next == '_' {
                        end = i + next.len_utf8();
                        iter.next();
                    } else {
                        break;
                    }
                }
                match &text[at..end] {
                    "top" => Tok::Top,
                    "bot" => Tok::Bot,
                    word => Tok::Ident(word.to_owned()),
                }
            }
            other => {
                return Err(ParseError { kind: ParseErrorKind::UnexpectedChar(other), offset: at })
            }
        };
        out.push((tok, at));
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
    // offsets of currently open parentheses
    open: Vec<usize>,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |&(_, at)| at)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        while self.peek() == Some(&Tok::Or) {
            self.pos += 1;
            let rhs = self.and()?;
            lhs = Formula::Or(Arc::new(lhs), Arc::new(rhs));
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.not()?;
        while self.peek() == Some(&Tok::And) {
            self.pos += 1;
            let rhs = self.not()?;
            lhs = Formula::And(Arc::new(lhs), Arc::new(rhs));
        }
        Ok(lhs)
    }

    fn not(&mut self) -> Result<Formula, ParseError> {
        let mut depth = 0usize;
        while self.peek() == Some(&Tok::Not) {
            self.pos += 1;
            depth += 1;
        }
        let mut f = self.atom()?;
        for _ in 0..depth {
            f = Formula::Not(Arc::new(f));
        }
        Ok(f)
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        let at = self.offset();
        let Some(tok) = self.peek().cloned() else {
            let kind = if self.open.is_empty() {
                ParseErrorKind::UnexpectedEnd
            } else {
                ParseErrorKind::UnbalancedParen
            };
            let offset = self.open.last().copied().unwrap_or(self.end);
            return Err(ParseError { kind, offset });
        };
        self.pos += 1;
        match tok {
            Tok::Ident(name) => Ok(Formula::Var(name)),
            Tok::Top => Ok(Formula::Top),
            Tok::Bot => Ok(Formula::Bot),
            Tok::LParen => {
                self.open.push(at);
                let inner = self.or()?;
                match self.peek() {
                    Some(Tok::RParen) => {
                        self.pos += 1;
                        self.open.pop();
                        Ok(inner)
                    }
                    None => Err(ParseError { kind: ParseErrorKind::UnbalancedParen, offset: at }),
                    Some(other) => Err(ParseError {
                        kind: ParseErrorKind::UnexpectedToken(other.describe()),
                        offset: self.offset(),
                    }),
                }
            }
            Tok::RParen if self.open.is_empty() => {
                Err(ParseError { kind: ParseErrorKind::UnbalancedParen, offset: at })
            }
            other => Err(ParseError { kind: ParseErrorKind::UnexpectedToken(other.describe()), offset: at }),
        }
    }
}

/// Parse formula text. `!` binds tighter than `&`, which binds tighter than
/// `|`; both binary operators associate to the left. Unicode connectives
/// (`¬ ∧ ∨ ⊤ ⊥`) and the constants `1`/`0` are accepted alongside ASCII.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let toks = lex(text)?;
    if toks.is_empty() {
        return Err(ParseError { kind: ParseErrorKind::Empty, offset: 0 });
    }
    let mut p = Parser { toks, pos: 0, end: text.len(), open: Vec::new() };
    let f = p.or()?;
    if let Some(tok) = p.peek() {
        let kind = if *tok == Tok::RParen {
            ParseErrorKind::UnbalancedParen
        } else {
            ParseErrorKind::UnexpectedToken(tok.describe())
        };
        return Err(ParseError { kind, offset: p.offset() });
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(n: &str) -> Formula {
        Formula::var(n)
    }

    #[test]
    fn projection_formula() {
        let f = parse("(a | !b) & b").unwrap();
        assert_eq!(f, Formula::and(Formula::or(v("a"), Formula::not(v("b"))), v("b")));
    }

    #[test]
    fn literals() {
        assert_eq!(parse("top").unwrap(), Formula::Top);
        assert_eq!(parse("⊤").unwrap(), Formula::Top);
        assert_eq!(parse("1").unwrap(), Formula::Top);
        assert_eq!(parse("bot").unwrap(), Formula::Bot);
        assert_eq!(parse(" 0 ").unwrap(), Formula::Bot);
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(parse("a & b | c").unwrap(), Formula::or(Formula::and(v("a"), v("b")), v("c")));
        assert_eq!(parse("a | b & c").unwrap(), Formula::or(v("a"), Formula::and(v("b"), v("c"))));
        assert_eq!(
            parse("a & b & c").unwrap(),
            Formula::and(Formula::and(v("a"), v("b")), v("c"))
        );
        assert_eq!(parse("!a & b").unwrap(), Formula::and(Formula::not(v("a")), v("b")));
        assert_eq!(parse("¬¬a ∨ b ∧ ⊥").unwrap(), parse("!!a | (b & bot)").unwrap());
    }

    #[test]
    fn identifiers_with_digits_and_underscores() {
        assert_eq!(parse("a_s1 & b2").unwrap(), Formula::and(v("a_s1"), v("b2")));
        assert_eq!(parse("topx").unwrap(), v("topx"));
    }

    #[test]
    fn errors() {
        assert_eq!(parse("").unwrap_err().kind, ParseErrorKind::Empty);
        assert_eq!(parse("   ").unwrap_err().kind, ParseErrorKind::Empty);

        let e = parse("(a & b").unwrap_err();
        assert_eq!((e.kind, e.offset), (ParseErrorKind::UnbalancedParen, 0));
        let e = parse("a & b)").unwrap_err();
        assert_eq!((e.kind, e.offset), (ParseErrorKind::UnbalancedParen, 5));
        let e = parse("a & (b | (c)").unwrap_err();
        assert_eq!((e.kind, e.offset), (ParseErrorKind::UnbalancedParen, 4));

        let e = parse("a & ").unwrap_err();
        assert_eq!((e.kind, e.offset), (ParseErrorKind::UnexpectedEnd, 4));
        let e = parse("a b").unwrap_err();
        assert_eq!((e.kind, e.offset), (ParseErrorKind::UnexpectedToken("b".into()), 2));
        let e = parse("a + b").unwrap_err();
        assert_eq!((e.kind, e.offset), (ParseErrorKind::UnexpectedChar('+'), 2));
        let e = parse("_a").unwrap_err();
        assert_eq!(e.offset, 0);
        let e = parse("a & |").unwrap_err();
        assert_eq!((e.kind, e.offset), (ParseErrorKind::UnexpectedToken("|".into()), 4));
        let e = parse("()").unwrap_err();
        assert_eq!(e.offset, 1);
    }

    #[test]
    fn unicode_offsets_are_bytes() {
        let e = parse("¬a ∧ +").unwrap_err();
        assert_eq!(e.offset, "¬a ∧ ".len());
    }
}
