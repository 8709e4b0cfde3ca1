//! The identity mini-language.
//!
//! ```text
//! expr   := poly "==" poly
//! poly   := ["+"|"-"] term (("+"|"-") term)*
//! term   := factor ("*" factor)*
//! factor := scalar | "q" | atom | "comm[" poly "," poly "]" | "qmut[" poly "," poly "]" | "(" poly ")"
//! atom   := "bd(" mode ")" | "b(" mode ")" | "N(" mode "," mode ")" | "J0" | "Jp" | "Jm"
//! mode   := ["+"|"-"] (integer | integer "/2")
//! ```

use std::fmt;

use quon_core::{JLevel, ModeIndex};

use crate::numeric::NumberLiteral;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Position {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}", self.line, self.column)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ParseErrorKind {
    #[error("unexpected character {0:?}")]
    UnexpectedChar(char),
    #[error("invalid number {0:?}")]
    BadNumber(String),
    #[error("unknown identifier {0:?}")]
    UnknownIdent(String),
    #[error("expected {expected}, found {found}")]
    Unexpected {
        expected: &'static str,
        found: String,
    },
    #[error("{0} is not a half-integer mode")]
    BadMode(String),
    #[error("mode {mode} is out of range for j = {level}")]
    ModeOutOfRange { mode: ModeIndex, level: JLevel },
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{at}: {kind}")]
pub struct ParseError {
    pub at: Position,
    pub kind: ParseErrorKind,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Plus,
    Minus,
    Star,
    EqEq,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Num(s) => write!(f, "number {}", s),
            Tok::Ident(s) => write!(f, "{:?}", s),
            Tok::LParen => f.write_str("\"(\""),
            Tok::RParen => f.write_str("\")\""),
            Tok::LBracket => f.write_str("\"[\""),
            Tok::RBracket => f.write_str("\"]\""),
            Tok::Comma => f.write_str("\",\""),
            Tok::Plus => f.write_str("\"+\""),
            Tok::Minus => f.write_str("\"-\""),
            Tok::Star => f.write_str("\"*\""),
            Tok::EqEq => f.write_str("\"==\""),
            Tok::End => f.write_str("end of input"),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, Position)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut column) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let at = Position { line, column };
        let start = i;
        if c == '\n' {
            i += 1;
            line += 1;
            column = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            column += 1;
            continue;
        }
        let tok = if c.is_ascii_digit() || c == '.' {
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && matches!(chars[i], 'e' | 'E') {
                i += 1;
                if i < chars.len() && matches!(chars[i], '+' | '-') {
                    i += 1;
                }
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
            } else if i < chars.len() && chars[i] == '/' {
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
            }
            Tok::Num(chars[start..i].iter().collect())
        } else if c.is_ascii_alphabetic() {
            while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                i += 1;
            }
            Tok::Ident(chars[start..i].iter().collect())
        } else {
            i += 1;
            match c {
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '[' => Tok::LBracket,
                ']' => Tok::RBracket,
                ',' => Tok::Comma,
                '+' => Tok::Plus,
                '-' => Tok::Minus,
                '*' => Tok::Star,
                '=' if chars.get(i) == Some(&'=') => {
                    i += 1;
                    Tok::EqEq
                }
                _ => {
                    return Err(ParseError {
                        at,
                        kind: ParseErrorKind::UnexpectedChar(c),
                    })
                }
            }
        };
        column += i - start;
        out.push((tok, at));
    }
    out.push((Tok::End, Position { line, column }));
    Ok(out)
}

/// `L == R`.
#[derive(Clone, Debug, PartialEq)]
pub struct Identity {
    pub lhs: Poly,
    pub rhs: Poly,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

/// Signed terms; the first sign is `Plus` unless written as a leading `-`.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly {
    pub terms: Vec<(Sign, Term)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub factors: Vec<Factor>,
}

/// A number together with its source spelling.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarLiteral {
    pub text: String,
    pub value: NumberLiteral,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Factor {
    Scalar(ScalarLiteral),
    Q,
    Atom(Atom),
    Comm(Box<Poly>, Box<Poly>),
    QMut(Box<Poly>, Box<Poly>),
    Group(Box<Poly>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Atom {
    Creation(ModeIndex),
    Annihilation(ModeIndex),
    Transition(ModeIndex, ModeIndex),
    J0,
    Jp,
    Jm,
}

struct Parser<'a> {
    toks: &'a [(Tok, Position)],
    pos: usize,
    level: Option<JLevel>,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn at(&self) -> Position {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, Position) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected<T>(&self, expected: &'static str) -> Result<T, ParseError> {
        Err(ParseError {
            at: self.at(),
            kind: ParseErrorKind::Unexpected {
                expected,
                found: self.peek().to_string(),
            },
        })
    }

    fn expect(&mut self, tok: Tok, expected: &'static str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.unexpected(expected)
        }
    }

    fn identity(&mut self) -> Result<Identity, ParseError> {
        let lhs = self.poly()?;
        self.expect(Tok::EqEq, "\"==\"")?;
        let rhs = self.poly()?;
        if *self.peek() != Tok::End {
            return self.unexpected("end of input");
        }
        Ok(Identity { lhs, rhs })
    }

    fn poly(&mut self) -> Result<Poly, ParseError> {
        let mut sign = match self.peek() {
            Tok::Minus => {
                self.bump();
                Sign::Minus
            }
            Tok::Plus => {
                self.bump();
                Sign::Plus
            }
            _ => Sign::Plus,
        };
        let mut terms = Vec::new();
        loop {
            terms.push((sign, self.term()?));
            sign = match self.peek() {
                Tok::Plus => Sign::Plus,
                Tok::Minus => Sign::Minus,
                _ => return Ok(Poly { terms }),
            };
            self.bump();
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let mut factors = vec![self.factor()?];
        while *self.peek() == Tok::Star {
            self.bump();
            factors.push(self.factor()?);
        }
        Ok(Term { factors })
    }

    fn pair(&mut self) -> Result<(Box<Poly>, Box<Poly>), ParseError> {
        self.expect(Tok::LBracket, "\"[\"")?;
        let a = self.poly()?;
        self.expect(Tok::Comma, "\",\"")?;
        let b = self.poly()?;
        self.expect(Tok::RBracket, "\"]\"")?;
        Ok((Box::new(a), Box::new(b)))
    }

    fn factor(&mut self) -> Result<Factor, ParseError> {
        let at = self.at();
        match self.peek().clone() {
            Tok::Num(text) => {
                self.bump();
                let value = text.parse().map_err(|_| ParseError {
                    at,
                    kind: ParseErrorKind::BadNumber(text.clone()),
                })?;
                Ok(Factor::Scalar(ScalarLiteral { text, value }))
            }
            Tok::LParen => {
                self.bump();
                let p = self.poly()?;
                self.expect(Tok::RParen, "\")\"")?;
                Ok(Factor::Group(Box::new(p)))
            }
            Tok::Ident(name) => {
                self.bump();
                match name.as_str() {
                    "q" => Ok(Factor::Q),
                    "J0" => Ok(Factor::Atom(Atom::J0)),
                    "Jp" => Ok(Factor::Atom(Atom::Jp)),
                    "Jm" => Ok(Factor::Atom(Atom::Jm)),
                    "comm" => {
                        let (a, b) = self.pair()?;
                        Ok(Factor::Comm(a, b))
                    }
                    "qmut" => {
                        let (a, b) = self.pair()?;
                        Ok(Factor::QMut(a, b))
                    }
                    "bd" | "b" => {
                        self.expect(Tok::LParen, "\"(\"")?;
                        let m = self.mode()?;
                        self.expect(Tok::RParen, "\")\"")?;
                        Ok(Factor::Atom(if name == "bd" {
                            Atom::Creation(m)
                        } else {
                            Atom::Annihilation(m)
                        }))
                    }
                    "N" => {
                        self.expect(Tok::LParen, "\"(\"")?;
                        let a = self.mode()?;
                        self.expect(Tok::Comma, "\",\"")?;
                        let b = self.mode()?;
                        self.expect(Tok::RParen, "\")\"")?;
                        Ok(Factor::Atom(Atom::Transition(a, b)))
                    }
                    _ => Err(ParseError {
                        at,
                        kind: ParseErrorKind::UnknownIdent(name),
                    }),
                }
            }
            _ => self.unexpected("a scalar, q, an operator, comm[, qmut[ or \"(\""),
        }
    }

    fn mode(&mut self) -> Result<ModeIndex, ParseError> {
        let at = self.at();
        let negative = match self.peek() {
            Tok::Minus => {
                self.bump();
                true
            }
            Tok::Plus => {
                self.bump();
                false
            }
            _ => false,
        };
        let text = match self.peek().clone() {
            Tok::Num(t) => t,
            _ => return self.unexpected("a mode"),
        };
        self.bump();
        let bad = || ParseError {
            at,
            kind: ParseErrorKind::BadMode(text.clone()),
        };
        let twice = match text.split_once('/') {
            Some((p, "2")) => p.parse::<i32>().map_err(|_| bad())?,
            Some(_) => return Err(bad()),
            None => text
                .parse::<i32>()
                .map_err(|_| bad())?
                .checked_mul(2)
                .ok_or_else(bad)?,
        };
        let mode = ModeIndex::from_twice(if negative { -twice } else { twice });
        if let Some(level) = self.level {
            if !level.contains(mode) {
                return Err(ParseError {
                    at,
                    kind: ParseErrorKind::ModeOutOfRange { mode, level },
                });
            }
        }
        Ok(mode)
    }
}

fn parse(text: &str, level: Option<JLevel>) -> Result<Identity, ParseError> {
    let toks = lex(text)?;
    Parser {
        toks: &toks,
        pos: 0,
        level,
    }
    .identity()
}

/// Parses an identity without checking mode ranges.
pub fn parse_identity(text: &str) -> Result<Identity, ParseError> {
    parse(text, None)
}

/// Parses an identity whose modes must belong to `level`.
pub fn parse_identity_for(text: &str, level: JLevel) -> Result<Identity, ParseError> {
    parse(text, Some(level))
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} == {}", self.lhs, self.rhs)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (sign, term)) in self.terms.iter().enumerate() {
            match (i, sign) {
                (0, Sign::Plus) => {}
                (0, Sign::Minus) => f.write_str("-")?,
                (_, Sign::Plus) => f.write_str(" + ")?,
                (_, Sign::Minus) => f.write_str(" - ")?,
            }
            write!(f, "{}", term)?;
        }
        Ok(())
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, x) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            write!(f, "{}", x)?;
        }
        Ok(())
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Factor::Scalar(s) => f.write_str(&s.text),
            Factor::Q => f.write_str("q"),
            Factor::Atom(a) => write!(f, "{}", a),
            Factor::Comm(a, b) => write!(f, "comm[{}, {}]", a, b),
            Factor::QMut(a, b) => write!(f, "qmut[{}, {}]", a, b),
            Factor::Group(p) => write!(f, "({})", p),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Creation(m) => write!(f, "bd({})", m),
            Atom::Annihilation(m) => write!(f, "b({})", m),
            Atom::Transition(a, b) => write!(f, "N({},{})", a, b),
            Atom::J0 => f.write_str("J0"),
            Atom::Jp => f.write_str("Jp"),
            Atom::Jm => f.write_str("Jm"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_examples() {
        for text in [
            "qmut[b(1), bd(1)] == 1",
            "comm[Jp, Jm] == 2*J0",
            "comm[N(1,0), bd(0)] == bd(1)",
            "-Jm == comm[J0, Jm]",
        ] {
            let id = parse_identity(text).unwrap();
            assert_eq!(parse_identity(&id.to_string()).unwrap(), id, "{}", text);
        }
        let id = parse_identity("comm[N(1,0), bd(0)] == bd(1)").unwrap();
        assert_eq!(
            id.rhs.terms,
            vec![(
                Sign::Plus,
                Term {
                    factors: vec![Factor::Atom(Atom::Creation(ModeIndex::integer(1)))]
                }
            )]
        );
    }

    #[test]
    fn half_integer_modes() {
        let id = parse_identity("bd(-1/2)*b(3/2) == N(+1/2, -3/2)").unwrap();
        assert_eq!(id.to_string(), "bd(-1/2)*b(3/2) == N(1/2,-3/2)");
        assert!(matches!(
            parse_identity("bd(1/3) == 0").unwrap_err().kind,
            ParseErrorKind::BadMode(_)
        ));
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_identity("comm[Jp, Jm] ==\n  2 ** J0").unwrap_err();
        assert_eq!(e.at, Position { line: 2, column: 6 });
        let e = parse_identity("bd(1) = 1").unwrap_err();
        assert_eq!(
            (e.at, e.kind),
            (
                Position { line: 1, column: 7 },
                ParseErrorKind::UnexpectedChar('=')
            )
        );
        let e = parse_identity("Jz == 0").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnknownIdent("Jz".into()));
        let e = parse_identity("J0 == J0 J0").unwrap_err();
        assert_eq!(e.at.column, 10);
        let e = parse_identity_for("bd(2) == 0", JLevel::new(2)).unwrap_err();
        assert_eq!(
            e.kind,
            ParseErrorKind::ModeOutOfRange {
                mode: ModeIndex::integer(2),
                level: JLevel::new(2)
            }
        );
        assert_eq!(e.at.column, 4);
    }
}
