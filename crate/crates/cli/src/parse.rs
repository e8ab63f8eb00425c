//! Expressions over `Q(i)` in the variables of a context.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := '-' factor | atom ('^' natural)?
//! atom   := rational | 'i' | identifier | '(' expr ')'
//! ```
//!
//! Unary minus binds looser than `^`, so `-z1^2` is `-(z1^2)`; this is the
//! form the series printer emits.

use std::fmt;
use std::str::FromStr;

use crformal_core::coeff::Coeff;
use crformal_core::context::Ctx;
use crformal_core::error::Error as CoreError;
use crformal_core::series::{Precision, Series};
use num_bigint::BigInt;
use num_rational::BigRational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    /// Zero-based character offset into the input.
    pub position: usize,
    pub message: String,
}

impl ParseError {
    fn new(position: usize, message: impl Into<String>) -> Self {
        ParseError {
            position,
            message: message.into(),
        }
    }

    /// The input with a caret under the offending column.
    pub fn annotate(&self, input: &str) -> String {
        format!("{input}\n{}^", " ".repeat(self.position))
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at position {}: {}", self.position + 1, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigRational),
    Ident(String),
    Op(char),
    End,
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
}

fn lex(input: &str) -> Result<Lexer, ParseError> {
    let chars: Vec<char> = input.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '.') {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            toks.push((Tok::Num(rational_literal(&text, start)?), start));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            toks.push((Tok::Ident(chars[start..i].iter().collect()), start));
        } else if "+-*/^()".contains(c) {
            toks.push((Tok::Op(c), i));
            i += 1;
        } else {
            return Err(ParseError::new(i, format!("unexpected character `{c}`")));
        }
    }
    toks.push((Tok::End, chars.len()));
    Ok(Lexer { toks })
}

/// `12`, `0.25`; anything else that starts with a digit is rejected.
fn rational_literal(text: &str, pos: usize) -> Result<BigRational, ParseError> {
    let bad = || ParseError::new(pos, format!("non-rational literal `{text}`"));
    let (int, frac) = match text.split_once('.') {
        Some((a, b)) => (a, b),
        None => (text, ""),
    };
    let digits = |s: &str| s.chars().all(|c| c.is_ascii_digit());
    if !digits(int) || !digits(frac) || (int.is_empty() && frac.is_empty()) {
        return Err(bad());
    }
    let num = BigInt::from_str(&format!("{int}{frac}").trim_start_matches('0').to_string())
        .unwrap_or_else(|_| BigInt::from(0));
    let den = num_traits::pow(BigInt::from(10), frac.len());
    Ok(BigRational::new(num, den))
}

struct Parser<'a> {
    toks: &'a [(Tok, usize)],
    at: usize,
    ctx: &'a Ctx,
    k: u32,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn cap(&self, s: Series) -> Series {
        if s.is_exact() {
            s
        } else {
            s.truncate(Precision::UpTo(self.k))
        }
    }

    fn expr(&mut self) -> Result<Series, ParseError> {
        let mut acc = self.term()?;
        while let Tok::Op(op @ ('+' | '-')) = *self.peek() {
            self.bump();
            let rhs = self.term()?;
            acc = if op == '+' { acc.add(&rhs) } else { acc.sub(&rhs) }.map_err(|e| self.core(e))?;
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Series, ParseError> {
        let mut acc = self.factor()?;
        while let Tok::Op(op @ ('*' | '/')) = *self.peek() {
            let pos = self.pos();
            self.bump();
            let rhs = self.factor()?;
            acc = if op == '*' {
                acc.mul(&rhs).map_err(|e| self.core(e))?
            } else {
                let inv = rhs.invert_unit(self.k).map_err(|e| match e {
                    CoreError::NotAUnit => ParseError::new(
                        pos,
                        "division by a series with zero constant term",
                    ),
                    e => ParseError::new(pos, e.to_string()),
                })?;
                acc.mul(&inv).map_err(|e| self.core(e))?
            };
            acc = self.cap(acc);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Series, ParseError> {
        if *self.peek() == Tok::Op('-') {
            self.bump();
            return Ok(self.factor()?.neg());
        }
        let base = self.atom()?;
        if *self.peek() != Tok::Op('^') {
            return Ok(base);
        }
        self.bump();
        let pos = self.pos();
        match self.bump().0 {
            Tok::Num(r) if r.is_integer() => {
                let e = u32::try_from(r.to_integer())
                    .map_err(|_| ParseError::new(pos, "exponent is too large"))?;
                Ok(self.cap(base.pow(e)))
            }
            _ => Err(ParseError::new(pos, "expected a natural number exponent")),
        }
    }

    fn atom(&mut self) -> Result<Series, ParseError> {
        let (tok, pos) = self.bump();
        match tok {
            Tok::Num(r) => Ok(Series::constant(self.ctx, Coeff::real(r), Precision::Exact)),
            Tok::Ident(name) if name == "i" => Ok(Series::constant(self.ctx, Coeff::i(), Precision::Exact)),
            Tok::Ident(name) => Series::var_named(self.ctx, &name).ok_or_else(|| {
                ParseError::new(
                    pos,
                    format!("unknown identifier `{name}` (expected one of {})", self.ctx.names().join(", ")),
                )
            }),
            Tok::Op('(') => {
                let inner = self.expr()?;
                match self.bump() {
                    (Tok::Op(')'), _) => Ok(inner),
                    (_, p) => Err(ParseError::new(p, "expected `)`")),
                }
            }
            Tok::End => Err(ParseError::new(pos, "unexpected end of expression")),
            Tok::Op(c) => Err(ParseError::new(pos, format!("unexpected `{c}`"))),
        }
    }

    fn core(&self, e: CoreError) -> ParseError {
        ParseError::new(self.pos(), e.to_string())
    }
}

/// Parses `input` into a series in `ctx`; divisions are expanded through
/// degree `k`.
pub fn parse_expression(input: &str, ctx: &Ctx, k: u32) -> Result<Series, ParseError> {
    let lexer = lex(input)?;
    let mut p = Parser {
        toks: &lexer.toks,
        at: 0,
        ctx,
        k,
    };
    let s = p.expr()?;
    match p.peek() {
        Tok::End => Ok(s),
        Tok::Op(')') => Err(ParseError::new(p.pos(), "unmatched `)`")),
        _ => Err(ParseError::new(p.pos(), "expected an operator")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crformal_core::context::VariableContext;

    fn ctx() -> Ctx {
        VariableContext::from_names(&["z1", "w1", "zb1", "wb1"])
    }

    fn p(s: &str) -> Series {
        parse_expression(s, &ctx(), 8).unwrap()
    }

    #[test]
    fn precedence() {
        assert_eq!(p("-z1^2").to_string(), "-z1^2");
        assert_eq!(p("(-z1)^2").to_string(), "z1^2");
        assert_eq!(p("1 - 2*3").to_string(), "-5");
        assert_eq!(p("1/2*z1").to_string(), "1/2*z1");
        assert_eq!(p("0.25*w1").to_string(), "1/4*w1");
        assert_eq!(p("(1+i)*(1-i)").to_string(), "2");
    }

    #[test]
    fn examples() {
        let q = p("wb1 + 2*i*z1^2*zb1^2");
        assert!(q.is_exact());
        assert_eq!(q.to_string(), "wb1 + 2*i*z1^2*zb1^2");
        let rho = p("w1 - wb1 - 2*i*z1*zb1*w1*wb1");
        assert_eq!(rho.len(), 3);
        let g = p("wb1/(1 - i*z1*zb1)");
        assert!(!g.is_exact());
        assert_eq!(g.precision(), Precision::UpTo(8));
        assert_eq!(
            g.to_string(),
            "wb1 + i*z1*zb1*wb1 - z1^2*zb1^2*wb1 - i*z1^3*zb1^3*wb1"
        );
        assert!(p("z1/2").is_exact());
    }

    #[test]
    fn errors_carry_positions() {
        let e = |s: &str| parse_expression(s, &ctx(), 8).unwrap_err();
        assert_eq!(e("z1 + ").position, 5);
        assert_eq!(e("z1 + x").position, 5);
        assert!(e("z1 + x").message.contains("unknown identifier `x`"));
        assert_eq!(e("w1/z1").position, 2);
        assert_eq!(e("(z1").position, 3);
        assert_eq!(e("z1)").position, 2);
        assert_eq!(e("z1^w1").position, 3);
        assert!(e("1e5").message.contains("non-rational"));
        assert!(e("1.2.3").message.contains("non-rational"));
        assert_eq!(e("z1 $ 2").position, 3);
        assert_eq!(e("z1 z1").position, 3);
        assert_eq!(e("z1 + x").annotate("z1 + x"), "z1 + x\n     ^");
    }
}
