//! Canonical text form of polynomials and a parser for it.
//!
//! Terms are written from the largest monomial down, separated by ` + ` or
//! ` - `. A coefficient is printed as a reduced fraction, as `s*sqrt5`, or as
//! `(r+s*sqrt5)` when both parts are present; unit coefficients are elided.
//! The parser accepts that form and, more generally, any expression built from
//! numbers, `sqrt5`, the named variables, `+ - * /`, integer powers and
//! parentheses, so fixtures can be transcribed in a natural layout.

use num_traits::{One, Signed, Zero};

use super::{parse_rational, AlgebraError, Q5Scalar, Rational, SparsePoly};

pub fn format_poly(p: &SparsePoly, names: &[&str]) -> String {
    assert_eq!(names.len(), p.nvars(), "one name per variable");
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (idx, (m, c)) in p.terms().enumerate() {
        let mono: Vec<String> = m
            .exponents()
            .iter()
            .zip(names)
            .filter(|(e, _)| **e > 0)
            .map(|(e, n)| if *e == 1 { n.to_string() } else { format!("{n}^{e}") })
            .collect();
        let mono = mono.join("*");
        let (negative, body) = coefficient_body(c, mono.is_empty());
        let piece = match (body.is_empty(), mono.is_empty()) {
            (true, _) => mono,
            (false, true) => body,
            (false, false) => format!("{body}*{mono}"),
        };
        match (idx, negative) {
            (0, false) => out.push_str(&piece),
            (0, true) => {
                out.push('-');
                out.push_str(&piece);
            }
            (_, false) => {
                out.push_str(" + ");
                out.push_str(&piece);
            }
            (_, true) => {
                out.push_str(" - ");
                out.push_str(&piece);
            }
        }
    }
    out
}

fn coefficient_body(c: &Q5Scalar, constant: bool) -> (bool, String) {
    if c.irr.is_zero() {
        let a = c.rat.abs();
        let body = if a.is_one() && !constant { String::new() } else { a.to_string() };
        (c.rat.is_negative(), body)
    } else if c.rat.is_zero() {
        let a = c.irr.abs();
        let body = if a.is_one() { "sqrt5".to_string() } else { format!("{a}*sqrt5") };
        (c.irr.is_negative(), body)
    } else {
        (false, format!("({c})"))
    }
}

/// Parses `src` as a polynomial in the variables `names` (in that order).
pub fn parse_poly(src: &str, names: &[&str]) -> Result<SparsePoly, AlgebraError> {
    let tokens = tokenize(src)?;
    let mut parser = Parser { tokens, pos: 0, names, src_len: src.len() };
    let p = parser.expr()?;
    if parser.pos != parser.tokens.len() {
        return Err(parser.error("unexpected trailing input"));
    }
    Ok(p)
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Rational),
    Ident(String),
    Op(char),
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>, AlgebraError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < bytes.len() && ((bytes[i] as char).is_ascii_digit() || bytes[i] == b'.') {
                i += 1;
            }
            let q = parse_rational(&src[start..i])
                .ok_or_else(|| AlgebraError::Parse { pos: start, message: "bad number".into() })?;
            out.push((start, Tok::Num(q)));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(src[start..i].to_string())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Op(c)));
            i += 1;
        } else {
            return Err(AlgebraError::Parse { pos: i, message: format!("unexpected character {c:?}") });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<(usize, Tok)>,
    pos: usize,
    names: &'a [&'a str],
    src_len: usize,
}

impl Parser<'_> {
    fn nvars(&self) -> usize {
        self.names.len()
    }

    fn error(&self, message: &str) -> AlgebraError {
        let pos = self.tokens.get(self.pos).map_or(self.src_len, |t| t.0);
        AlgebraError::Parse { pos, message: message.to_string() }
    }

    fn peek_op(&self) -> Option<char> {
        match self.tokens.get(self.pos) {
            Some((_, Tok::Op(c))) => Some(*c),
            _ => None,
        }
    }

    fn expr(&mut self) -> Result<SparsePoly, AlgebraError> {
        let mut acc = match self.peek_op() {
            Some('-') => {
                self.pos += 1;
                -&self.term()?
            }
            Some('+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        while let Some(op @ ('+' | '-')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == '+' { &acc + &rhs } else { &acc - &rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<SparsePoly, AlgebraError> {
        let mut acc = self.power()?;
        while let Some(op @ ('*' | '/')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.power()?;
            if op == '*' {
                acc = &acc * &rhs;
            } else {
                if rhs.degree() != 0 || rhs.is_zero() {
                    return Err(self.error("can only divide by a nonzero constant"));
                }
                acc = acc.scale(&rhs.constant_term().inv()?);
            }
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<SparsePoly, AlgebraError> {
        let base = self.atom()?;
        if self.peek_op() == Some('^') {
            self.pos += 1;
            match self.tokens.get(self.pos) {
                Some((_, Tok::Num(q))) if q.is_integer() && !q.is_negative() => {
                    let e: u32 = q
                        .to_integer()
                        .try_into()
                        .map_err(|_| self.error("exponent too large"))?;
                    self.pos += 1;
                    return Ok(base.pow(e));
                }
                _ => return Err(self.error("expected a non-negative integer exponent")),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<SparsePoly, AlgebraError> {
        let n = self.nvars();
        let Some((_, tok)) = self.tokens.get(self.pos).cloned() else {
            return Err(self.error("unexpected end of input"));
        };
        self.pos += 1;
        match tok {
            Tok::Num(q) => Ok(SparsePoly::constant(n, Q5Scalar::from_rational(q))),
            Tok::Ident(id) if id == "sqrt5" => Ok(SparsePoly::constant(n, Q5Scalar::sqrt5())),
            Tok::Ident(id) => match self.names.iter().position(|v| *v == id) {
                Some(i) => Ok(SparsePoly::var(n, i)),
                None => {
                    self.pos -= 1;
                    Err(self.error(&format!("unknown variable {id}")))
                }
            },
            Tok::Op('(') => {
                let inner = self.expr()?;
                if self.peek_op() != Some(')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Tok::Op('-') => Ok(-&self.power()?),
            Tok::Op(_) => {
                self.pos -= 1;
                Err(self.error("unexpected operator"))
            }
        }
    }
}

/// Default variable names `x1..xn`.
pub fn default_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

/// Parses text that uses the default `x1..xn` names.
pub fn parse_default(src: &str, nvars: usize) -> Result<SparsePoly, AlgebraError> {
    let names = default_names(nvars);
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    parse_poly(src, &refs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ratio;

    #[test]
    fn formats_mixed_coefficients() {
        let p = parse_poly("x^2 + y^2 + z^2 + 2/5*sqrt5*(x*z + y*z - x*y)", &["x", "y", "z"]).unwrap();
        assert_eq!(p.to_text(&["x", "y", "z"]), "x^2 - 2/5*sqrt5*x*y + 2/5*sqrt5*x*z + y^2 + 2/5*sqrt5*y*z + z^2");
        let q = parse_poly("(1+sqrt5)/2*x - 3", &["x"]).unwrap();
        assert_eq!(q.to_string(), "(1/2+1/2*sqrt5)*x1 - 3");
        assert_eq!(SparsePoly::zero(3).to_string(), "0");
        assert_eq!(parse_default("-x1", 1).unwrap().to_string(), "-x1");
    }

    #[test]
    fn parses_what_it_prints() {
        let src = "-7/3*x1^3*x2 + (1/2-3*sqrt5)*x2^2 - sqrt5*x1 + 4";
        let p = parse_default(src, 2).unwrap();
        let again = parse_default(&p.to_string(), 2).unwrap();
        assert_eq!(p, again);
        assert_eq!(p.constant_term(), Q5Scalar::from_int(4));
        assert_eq!(
            p.coefficient(&crate::algebra::Monomial::new(vec![0, 2])),
            Q5Scalar::new(ratio(1, 2), ratio(-3, 1))
        );
    }

    #[test]
    fn rejects_garbage() {
        assert!(matches!(parse_default("x1 + ", 1), Err(AlgebraError::Parse { .. })));
        assert!(matches!(parse_default("x3", 2), Err(AlgebraError::Parse { .. })));
        assert!(matches!(parse_default("x1 / x2", 2), Err(AlgebraError::Parse { .. })));
        assert!(matches!(parse_default("x1 ^ -1", 1), Err(AlgebraError::Parse { .. })));
        assert!(matches!(parse_default("x1 $ 2", 1), Err(AlgebraError::Parse { .. })));
        assert!(matches!(parse_default("(x1", 1), Err(AlgebraError::Parse { .. })));
    }
}
