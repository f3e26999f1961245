//! A tiny expression language for generator words.
//!
//! Tokens: generators `a`, `b`, `a+`, `a-`, `b+`, `b-`, each optionally
//! followed immediately by `*` for the adjoint; complex literals (`2`,
//! `-1.5`, `3i`, `i`); the binary operators `+` and `*` (juxtaposition also
//! multiplies); parentheses. A `*` glued to a generator is an adjoint, a
//! free-standing `*` multiplies.

use std::fmt;

use num_complex::Complex64;
use suq2_cs::ncpoly::{Gen, Letter, NCPoly};

type C64 = Complex64;

#[derive(Debug, Clone, PartialEq)]
pub enum WordExpr {
    Lit(C64),
    Gen(Letter),
    Sum(Vec<WordExpr>),
    Prod(Vec<WordExpr>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "column {}: {}", self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Gen(Letter),
    Lit(C64),
    Plus,
    Star,
    Open,
    Close,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0usize;
    while i < chars.len() {
        let col = i + 1;
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        match c {
            '(' => {
                out.push((col, Tok::Open));
                i += 1;
            }
            ')' => {
                out.push((col, Tok::Close));
                i += 1;
            }
            '+' => {
                out.push((col, Tok::Plus));
                i += 1;
            }
            '*' => {
                out.push((col, Tok::Star));
                i += 1;
            }
            'a' | 'b' => {
                let base = c;
                i += 1;
                // optional +/- suffix selects the homogeneous piece
                let mut gen = match base {
                    'a' => Gen::Alpha,
                    _ => Gen::Beta,
                };
                if i < chars.len() && (chars[i] == '+' || chars[i] == '-') {
                    // a `+` here is a suffix only when it is not a binary
                    // plus: a digit, space, or operand start after it means
                    // we treat it as part of the generator when glued
                    let suffix = chars[i];
                    let next = chars.get(i + 1).copied();
                    let glued_star = next == Some('*');
                    let ends = next.is_none()
                        || next == Some(' ')
                        || next == Some(')')
                        || glued_star;
                    if suffix == '-' || ends {
                        gen = match (base, suffix) {
                            ('a', '+') => Gen::AlphaPlus,
                            ('a', '-') => Gen::AlphaMinus,
                            ('b', '+') => Gen::BetaPlus,
                            ('b', '-') => Gen::BetaMinus,
                            _ => unreachable!(),
                        };
                        i += 1;
                    }
                }
                let star = i < chars.len() && chars[i] == '*';
                if star {
                    i += 1;
                }
                out.push((col, Tok::Gen(Letter { gen, star })));
            }
            'i' => {
                out.push((col, Tok::Lit(C64::new(0.0, 1.0))));
                i += 1;
            }
            '0'..='9' | '.' | '-' => {
                if c == '-'
                    && !(i + 1 < chars.len()
                        && (chars[i + 1].is_ascii_digit() || chars[i + 1] == '.'))
                {
                    return Err(ParseError {
                        column: col,
                        message: "`-` is only allowed as a sign glued to a number".into(),
                    });
                }
                let start = i;
                i += 1;
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                let v: f64 = text.parse().map_err(|_| ParseError {
                    column: col,
                    message: format!("bad number `{text}`"),
                })?;
                if i < chars.len() && chars[i] == 'i' {
                    i += 1;
                    out.push((col, Tok::Lit(C64::new(0.0, v))));
                } else {
                    out.push((col, Tok::Lit(C64::new(v, 0.0))));
                }
            }
            _ => {
                return Err(ParseError {
                    column: col,
                    message: format!("unknown token `{c}`"),
                })
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end_col: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn col(&self) -> usize {
        self.toks
            .get(self.pos)
            .map(|(c, _)| *c)
            .unwrap_or(self.end_col)
    }

    fn expr(&mut self) -> Result<WordExpr, ParseError> {
        let mut terms = vec![self.term()?];
        while self.peek() == Some(&Tok::Plus) {
            self.pos += 1;
            terms.push(self.term()?);
        }
        Ok(if terms.len() == 1 {
            terms.pop().unwrap()
        } else {
            WordExpr::Sum(terms)
        })
    }

    fn term(&mut self) -> Result<WordExpr, ParseError> {
        let mut factors = vec![self.factor()?];
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    factors.push(self.factor()?);
                }
                Some(Tok::Gen(_)) | Some(Tok::Lit(_)) | Some(Tok::Open) => {
                    factors.push(self.factor()?);
                }
                _ => break,
            }
        }
        Ok(if factors.len() == 1 {
            factors.pop().unwrap()
        } else {
            WordExpr::Prod(factors)
        })
    }

    fn factor(&mut self) -> Result<WordExpr, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Gen(l)) => {
                self.pos += 1;
                Ok(WordExpr::Gen(l))
            }
            Some(Tok::Lit(v)) => {
                self.pos += 1;
                Ok(WordExpr::Lit(v))
            }
            Some(Tok::Open) => {
                let open_col = self.col();
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() == Some(&Tok::Close) {
                    self.pos += 1;
                    Ok(inner)
                } else {
                    Err(ParseError {
                        column: open_col,
                        message: "unbalanced parenthesis".into(),
                    })
                }
            }
            _ => Err(ParseError {
                column: self.col(),
                message: "expected a generator, literal or `(`".into(),
            }),
        }
    }
}

pub fn parse_word(text: &str) -> Result<WordExpr, ParseError> {
    let toks = tokenize(text)?;
    if toks.is_empty() {
        return Err(ParseError {
            column: 1,
            message: "empty expression".into(),
        });
    }
    let end_col = text.chars().count() + 1;
    let mut p = Parser {
        toks,
        pos: 0,
        end_col,
    };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(ParseError {
            column: p.col(),
            message: "trailing input".into(),
        });
    }
    Ok(e)
}

impl WordExpr {
    pub fn eval(&self) -> NCPoly {
        match self {
            WordExpr::Lit(v) => NCPoly::scalar(*v),
            WordExpr::Gen(l) => NCPoly::letter(*l),
            WordExpr::Sum(ts) => ts
                .iter()
                .fold(NCPoly::zero(), |acc, t| acc.add(&t.eval())),
            WordExpr::Prod(fs) => fs
                .iter()
                .fold(NCPoly::one(), |acc, f| acc.mul(&f.eval())),
        }
    }

    pub fn print(&self) -> String {
        match self {
            WordExpr::Lit(v) => {
                if v.im == 0.0 {
                    format!("{}", v.re)
                } else if v.re == 0.0 {
                    format!("{}i", v.im)
                } else {
                    format!("({} + {}i)", v.re, v.im)
                }
            }
            WordExpr::Gen(l) => l.to_string(),
            WordExpr::Sum(ts) => ts
                .iter()
                .map(|t| t.print())
                .collect::<Vec<_>>()
                .join(" + "),
            WordExpr::Prod(fs) => fs
                .iter()
                .map(|f| match f {
                    WordExpr::Sum(_) => format!("({})", f.print()),
                    _ => f.print(),
                })
                .collect::<Vec<_>>()
                .join(" "),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use suq2_cs::ncpoly::word_from_str;

    #[test]
    fn relation_expression() {
        let e = parse_word("a* a + b* b").unwrap();
        let p = e.eval();
        let mut expect = NCPoly::word(word_from_str("a* a").unwrap());
        expect = expect.add(&NCPoly::word(word_from_str("b* b").unwrap()));
        assert_eq!(p, expect);
    }

    #[test]
    fn homogeneous_product() {
        let e = parse_word("a+ a-").unwrap();
        assert_eq!(e.eval(), NCPoly::word(word_from_str("a+ a-").unwrap()));
    }

    #[test]
    fn unbalanced_parens_position() {
        let err = parse_word("((a").unwrap_err();
        assert_eq!(err.column, 2);
        let err = parse_word("a )").unwrap_err();
        assert_eq!(err.column, 3);
    }

    #[test]
    fn unknown_token_position() {
        let err = parse_word("a c").unwrap_err();
        assert_eq!(err.column, 3);
    }

    #[test]
    fn roundtrip_through_printer() {
        for src in ["a* a + b* b", "a+ a-", "2 a (b + b*)", "-1.5i b-*", "a+* b-"] {
            let e = parse_word(src).unwrap();
            let printed = e.print();
            let e2 = parse_word(&printed).unwrap();
            assert_eq!(e.eval(), e2.eval(), "{src} -> {printed}");
        }
    }

    #[test]
    fn literal_arithmetic() {
        let e = parse_word("(2 + 3i) a").unwrap();
        let p = e.eval();
        let w = word_from_str("a").unwrap();
        assert_eq!(p.coeff(&w), Complex64::new(2.0, 3.0));
    }

    #[test]
    fn glued_plus_is_suffix_spaced_plus_is_sum() {
        // `a+ b` is the raising piece times b; `a + b` is a sum
        let prod = parse_word("a+ b").unwrap().eval();
        assert_eq!(prod.num_terms(), 1);
        let sum = parse_word("a + b").unwrap().eval();
        assert_eq!(sum.num_terms(), 2);
    }
}
