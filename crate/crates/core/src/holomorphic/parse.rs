use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

use super::expr::HoloFunction;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Imag(f64),
    Ident(String),
    Op(char),
    LParen,
    RParen,
}

fn lex(src: &str) -> Result<Vec<Tok>> {
    let cs: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || (c == '.' && cs.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
            let start = i;
            while i < cs.len() && (cs[i].is_ascii_digit() || cs[i] == '.') {
                i += 1;
            }
            if i < cs.len() && (cs[i] == 'e' || cs[i] == 'E') {
                let mut j = i + 1;
                if j < cs.len() && (cs[j] == '+' || cs[j] == '-') {
                    j += 1;
                }
                if j < cs.len() && cs[j].is_ascii_digit() {
                    i = j;
                    while i < cs.len() && cs[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let text: String = cs[start..i].iter().collect();
            let v: f64 = text.parse().map_err(|_| Error::Parse(format!("bad number '{text}'")))?;
            // "2i" is an imaginary literal unless the letter starts a word
            let imag_suffix = i < cs.len() && cs[i] == 'i' && !cs.get(i + 1).is_some_and(|d| d.is_ascii_alphanumeric());
            if imag_suffix {
                out.push(Tok::Imag(v));
                i += 1;
            } else {
                out.push(Tok::Num(v));
            }
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < cs.len() && (cs[i].is_ascii_alphanumeric() || cs[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(cs[start..i].iter().collect()));
        } else if "+-*/^".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else if c == '(' {
            out.push(Tok::LParen);
            i += 1;
        } else if c == ')' {
            out.push(Tok::RParen);
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character '{c}'")));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expect(&mut self, t: Tok) -> Result<()> {
        match self.next() {
            Some(ref got) if *got == t => Ok(()),
            got => Err(Error::Parse(format!("expected {t:?}, found {got:?}"))),
        }
    }

    fn expr<T: Real>(&mut self) -> Result<HoloFunction<T>> {
        let mut lhs = self.term()?;
        while let Some(Tok::Op(c @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.term()?;
            lhs = if c == '+' { lhs + rhs } else { lhs - rhs };
        }
        Ok(lhs)
    }

    fn term<T: Real>(&mut self) -> Result<HoloFunction<T>> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek().cloned() {
                Some(Tok::Op(c @ ('*' | '/'))) => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    lhs = if c == '*' { lhs * rhs } else { lhs / rhs };
                }
                // juxtaposition such as "2z" or "2(z+1)" binds like '*'
                Some(Tok::Ident(_)) | Some(Tok::LParen) | Some(Tok::Num(_)) | Some(Tok::Imag(_)) => {
                    let rhs = self.unary()?;
                    lhs = lhs * rhs;
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary<T: Real>(&mut self) -> Result<HoloFunction<T>> {
        match self.peek() {
            Some(Tok::Op('-')) => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(Tok::Op('+')) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power<T: Real>(&mut self) -> Result<HoloFunction<T>> {
        let base = self.atom()?;
        if let Some(Tok::Op('^')) = self.peek() {
            self.pos += 1;
            let e = self.unary()?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom<T: Real>(&mut self) -> Result<HoloFunction<T>> {
        match self.next() {
            Some(Tok::Num(v)) => Ok(HoloFunction::real(v)),
            Some(Tok::Imag(v)) => Ok(HoloFunction::complex(0.0, v)),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Some(Tok::Ident(name)) => match name.as_str() {
                "z" => Ok(HoloFunction::z()),
                "i" => Ok(HoloFunction::constant(Complex::new(T::zero(), T::one()))),
                "pi" => Ok(HoloFunction::constant(Complex::new(T::PI(), T::zero()))),
                "exp" | "log" | "sin" | "cos" | "sinh" | "cosh" | "sqrt" => {
                    self.expect(Tok::LParen)?;
                    let a = self.expr()?;
                    self.expect(Tok::RParen)?;
                    Ok(match name.as_str() {
                        "exp" => a.exp(),
                        "log" => a.log(),
                        "sin" => a.sin(),
                        "cos" => a.cos(),
                        "sinh" => a.sinh(),
                        "cosh" => a.cosh(),
                        _ => a.pow(HoloFunction::real(0.5)),
                    })
                }
                other => Err(Error::Parse(format!("unknown identifier '{other}'"))),
            },
            t => Err(Error::Parse(format!("unexpected token {t:?}"))),
        }
    }
}

/// Parses the expression grammar used in job configurations.
///
/// Variables and constants: `z`, `i` (complex unit), `pi`, decimal literals
/// with an optional `i` suffix. Operators: `+ - * / ^` with the usual
/// precedence, `^` right associative, juxtaposition as multiplication.
/// Functions: `exp log sin cos sinh cosh sqrt`.
pub fn parse<T: Real>(src: &str) -> Result<HoloFunction<T>> {
    let toks = lex(src)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut p = Parser { toks, pos: 0 };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!(
            "trailing input starting at token {:?}",
            p.toks[p.pos]
        )));
    }
    Ok(e)
}
