//! Text grammar for rational functions.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' int)?          int may be negative, optionally parenthesised
//! atom   := integer | variable | '(' expr ')'
//! ```
//!
//! Variables are the names of [`Var`]. The output of `Display` for [`Poly`]
//! and [`RatFun`] is accepted, so printing and parsing round-trip.

use num_bigint::BigInt;

use super::{Poly, Rat, RatFun, Var};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable `{name}` at byte {pos}")]
    UnknownVariable { name: String, pos: usize },
    #[error("denominator vanishes at byte {pos}")]
    DenominatorVanishes { pos: usize },
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            out.push((start, Tok::Num(text[start..i].parse().unwrap())));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(text[start..i].to_string())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Op(c)));
            i += 1;
        } else {
            return Err(ParseError::Syntax { pos: i, msg: format!("unexpected character `{}`", &text[i..].chars().next().unwrap()) });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.1)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |t| t.0)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<RatFun, ParseError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<RatFun, ParseError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.unary()?;
            } else if self.peek() == Some(&Tok::Op('/')) {
                self.at += 1;
                let pos = self.pos();
                let d = self.unary()?;
                acc = acc.div(&d).map_err(|_| ParseError::DenominatorVanishes { pos })?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<RatFun, ParseError> {
        if self.eat('-') {
            return Ok(self.unary()?.neg());
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<RatFun, ParseError> {
        let pos = self.pos();
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let paren = self.eat('(');
        let neg = self.eat('-');
        let k = match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.at += 1;
                i32::try_from(n).map_err(|_| ParseError::Syntax { pos: self.pos(), msg: "exponent too large".into() })?
            }
            _ => return Err(ParseError::Syntax { pos: self.pos(), msg: "expected integer exponent".into() }),
        };
        if paren && !self.eat(')') {
            return Err(ParseError::Syntax { pos: self.pos(), msg: "expected `)`".into() });
        }
        let k = if neg { -k } else { k };
        base.pow(k).map_err(|_| ParseError::DenominatorVanishes { pos })
    }

    fn atom(&mut self) -> Result<RatFun, ParseError> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.at += 1;
                Ok(RatFun::constant(Rat::from_integer(n)))
            }
            Some(Tok::Ident(name)) => {
                self.at += 1;
                Var::parse(&name).map(RatFun::var).ok_or(ParseError::UnknownVariable { name, pos })
            }
            Some(Tok::Op('(')) => {
                self.at += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(ParseError::Syntax { pos: self.pos(), msg: "expected `)`".into() });
                }
                Ok(e)
            }
            Some(Tok::Op(c)) => Err(ParseError::Syntax { pos, msg: format!("unexpected `{c}`") }),
            None => Err(ParseError::Syntax { pos, msg: "unexpected end of input".into() }),
        }
    }
}

/// Parse a rational function.
pub fn parse_ratfun(text: &str) -> Result<RatFun, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, at: 0, end: text.len() };
    let e = p.expr()?;
    if p.at != p.toks.len() {
        return Err(ParseError::Syntax { pos: p.pos(), msg: "trailing input".into() });
    }
    Ok(e)
}

/// Parse an expression that must be a polynomial.
pub fn parse_poly(text: &str) -> Result<Poly, ParseError> {
    let f = parse_ratfun(text)?;
    if f.is_poly() {
        Ok(f.into_parts().0)
    } else {
        Err(ParseError::Syntax { pos: 0, msg: "expected a polynomial".into() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paper_potential() {
        let u = parse_ratfun("6*x*(x^3 - 6*t)/(x^3 + 3*t)^2").unwrap();
        assert_eq!(u.num().to_string(), "6*x^4 - 36*x*t");
        assert_eq!(u.den().to_string(), "x^6 + 6*x^3*t + 9*t^2");
        assert_eq!(parse_ratfun(&u.to_string()).unwrap(), u);
    }

    #[test]
    fn errors() {
        assert!(parse_ratfun("0").unwrap().is_zero());
        assert_eq!(parse_ratfun("1/(x - x)"), Err(ParseError::DenominatorVanishes { pos: 2 }));
        assert_eq!(parse_ratfun("y + 1"), Err(ParseError::UnknownVariable { name: "y".into(), pos: 0 }));
        assert!(matches!(parse_ratfun("x +"), Err(ParseError::Syntax { pos: 3, .. })));
        assert!(matches!(parse_ratfun("x $"), Err(ParseError::Syntax { pos: 2, .. })));
        assert!(matches!(parse_ratfun("(x"), Err(ParseError::Syntax { .. })));
    }

    #[test]
    fn precedence() {
        assert_eq!(parse_ratfun("-x^2").unwrap(), parse_ratfun("-(x^2)").unwrap());
        assert_eq!(parse_ratfun("2/3*x").unwrap(), parse_ratfun("(2*x)/3").unwrap());
        assert_eq!(parse_ratfun("x^-2").unwrap(), parse_ratfun("1/x^2").unwrap());
        assert_eq!(parse_ratfun("x^(-2)").unwrap(), parse_ratfun("1/(x*x)").unwrap());
    }
}
