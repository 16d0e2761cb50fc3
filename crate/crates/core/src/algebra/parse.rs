//! Text format for systems: `[[e, ...], [...]]` where each entry is a rational
//! expression in `z` and the imaginary unit `i`.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := ('+' | '-') unary | power
//! power := atom ('^' ['+' | '-'] integer)?
//! atom  := number | 'z' | 'i' | '(' expr ')'
//! ```
//!
//! Numbers are integers or plain decimals (`0.25`, `1e-3`); both are exact.

use std::fmt::Write as _;

use num_rational::BigRational;
use num_traits::Zero;

use super::field::Field;
use super::gaussian::{decimal_to_rational, GaussianRational};
use super::matrix::{Matrix, RatFuncMatrix};
use super::poly::Poly;
use super::ratfunc::RationalFunction;
use crate::error::{Error, Result};

/// Parse a matrix of rational functions.
pub fn parse_system(text: &str) -> Result<RatFuncMatrix> {
    let mut p = Parser::new(text);
    let m = p.matrix()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(m)
}

/// Parse a single rational expression.
pub fn parse_expr(text: &str) -> Result<RationalFunction> {
    let mut p = Parser::new(text);
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    text: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser {
            src: text.as_bytes(),
            text,
            pos: 0,
        }
    }

    fn error_at(&self, pos: usize, message: impl Into<String>) -> Error {
        let before = &self.text[..pos.min(self.text.len())];
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        Error::Syntax {
            line,
            column,
            message: message.into(),
        }
    }

    fn error(&self, message: impl Into<String>) -> Error {
        self.error_at(self.pos, message)
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, ch: u8) -> Result<()> {
        match self.peek() {
            Some(c) if c == ch => {
                self.pos += 1;
                Ok(())
            }
            Some(c) => Err(self.error(format!("expected '{}', found '{}'", ch as char, c as char))),
            None => Err(self.error(format!("expected '{}', found end of input", ch as char))),
        }
    }

    fn matrix(&mut self) -> Result<RatFuncMatrix> {
        let start = self.pos;
        self.expect(b'[')?;
        let mut rows = Vec::new();
        loop {
            rows.push(self.row()?);
            match self.peek() {
                Some(b',') => self.pos += 1,
                Some(b']') => {
                    self.pos += 1;
                    break;
                }
                _ => return Err(self.error("expected ',' or ']' after a row")),
            }
        }
        Matrix::from_rows(rows).map_err(|e| match e {
            Error::Shape(msg) => self.error_at(start, msg),
            other => other,
        })
    }

    fn row(&mut self) -> Result<Vec<RationalFunction>> {
        self.expect(b'[')?;
        let mut entries = Vec::new();
        loop {
            entries.push(self.expr()?);
            match self.peek() {
                Some(b',') => self.pos += 1,
                Some(b']') => {
                    self.pos += 1;
                    return Ok(entries);
                }
                _ => return Err(self.error("expected ',' or ']' after an entry")),
            }
        }
    }

    fn expr(&mut self) -> Result<RationalFunction> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add_ref(&self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.sub_ref(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<RationalFunction> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = acc.mul_ref(&self.unary()?);
                }
                Some(b'/') => {
                    self.pos += 1;
                    let at = self.pos;
                    let rhs = self.unary()?;
                    let inv = rhs.inv().ok_or_else(|| self.error_at(at, "division by zero"))?;
                    acc = acc.mul_ref(&inv);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<RationalFunction> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(self.unary()?.neg_ref())
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<RationalFunction> {
        let at = self.pos;
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        let negative = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        self.skip_ws();
        let digits_start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if digits_start == self.pos {
            return Err(self.error("expected an integer exponent"));
        }
        let e: i64 = self.text[digits_start..self.pos]
            .parse()
            .map_err(|_| self.error_at(digits_start, "exponent too large"))?;
        if e > 4096 {
            return Err(self.error_at(digits_start, "exponent too large"));
        }
        let e = if negative { -e } else { e };
        base.powi(e)
            .ok_or_else(|| self.error_at(at, "zero raised to a negative power"))
    }

    fn atom(&mut self) -> Result<RationalFunction> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(b'z') => {
                self.pos += 1;
                Ok(RationalFunction::z())
            }
            Some(b'i') => {
                self.pos += 1;
                Ok(RationalFunction::constant(GaussianRational::i()))
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) => Err(self.error(format!("unexpected character '{}'", c as char))),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn number(&mut self) -> Result<RationalFunction> {
        let start = self.pos;
        let digits = |p: &mut Self| {
            while p.pos < p.src.len() && p.src[p.pos].is_ascii_digit() {
                p.pos += 1;
            }
        };
        digits(self);
        if self.src.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            digits(self);
        }
        // exponent only when followed by a digit, so `2e` is rejected cleanly
        if matches!(self.src.get(self.pos), Some(b'e' | b'E')) {
            let save = self.pos;
            self.pos += 1;
            if matches!(self.src.get(self.pos), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            let exp_start = self.pos;
            digits(self);
            if exp_start == self.pos {
                self.pos = save;
            }
        }
        let lit = &self.text[start..self.pos];
        let value: BigRational =
            decimal_to_rational(lit).map_err(|_| self.error_at(start, format!("bad number {lit:?}")))?;
        Ok(RationalFunction::constant(GaussianRational::real(value)))
    }
}

/// Render a polynomial in the grammar, highest degree first.
pub fn format_poly(p: &Poly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, c) in p.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let term = format_term(c, k);
        if out.is_empty() || term.starts_with('-') {
            out.push_str(&term);
        } else {
            out.push('+');
            out.push_str(&term);
        }
    }
    out
}

fn format_term(c: &GaussianRational, k: usize) -> String {
    let monomial = match k {
        0 => return c.to_string(),
        1 => "z".to_string(),
        _ => format!("z^{k}"),
    };
    if c.is_one() {
        return monomial;
    }
    if c.neg_ref().is_one() {
        return format!("-{monomial}");
    }
    let needs_parens = !c.re().is_zero() && !c.im().is_zero();
    if needs_parens {
        format!("({c})*{monomial}")
    } else {
        format!("{c}*{monomial}")
    }
}

/// A product of atoms that can stand as a numerator without parentheses.
fn is_simple_product(s: &str) -> bool {
    let body = s.strip_prefix('-').unwrap_or(s);
    !body.is_empty() && body.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'*' || b == b'^')
}

/// Render a rational function as `num/den`, parenthesizing where needed.
pub fn format_ratfunc(f: &RationalFunction) -> String {
    let num = format_poly(f.numerator());
    if f.is_polynomial() {
        return num;
    }
    let den = format_poly(f.denominator());
    let num = if is_simple_product(&num) { num } else { format!("({num})") };
    let den_is_atom = den.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'^');
    let den = if den_is_atom { den } else { format!("({den})") };
    format!("{num}/{den}")
}

/// Canonical text of a matrix, without whitespace.
pub fn format_matrix(m: &RatFuncMatrix) -> String {
    let mut out = String::from("[");
    for r in 0..m.rows() {
        if r > 0 {
            out.push(',');
        }
        out.push('[');
        for c in 0..m.cols() {
            if c > 0 {
                out.push(',');
            }
            let _ = write!(out, "{}", format_ratfunc(m.get(r, c)));
        }
        out.push(']');
    }
    out.push(']');
    out
}

impl std::fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&format_ratfunc(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_small_examples() {
        let one = parse_system("[[1]]").unwrap();
        assert_eq!(one, Matrix::identity(1));
        let i = parse_system("[[i]]").unwrap();
        assert_eq!(i.get(0, 0).as_constant().unwrap(), GaussianRational::i());
        let m = parse_system("[[1,-1],[1,1]]").unwrap();
        assert_eq!(format_matrix(&m), "[[1,-1],[1,1]]");
    }

    #[test]
    fn precedence_and_powers() {
        let f = parse_expr("2*z^2 - 3/z + (1+i)*z^-1").unwrap();
        assert_eq!(format_ratfunc(&f), "(2*z^3-2+i)/z");
        assert_eq!(parse_expr("-z^2").unwrap(), parse_expr("-(z^2)").unwrap());
        assert_eq!(parse_expr("1/2*z").unwrap(), parse_expr("z/2").unwrap());
    }

    #[test]
    fn canonical_printing() {
        assert_eq!(format_ratfunc(&parse_expr("z/(z-i)").unwrap()), "z/(z-i)");
        assert_eq!(format_ratfunc(&parse_expr("(1/2)/z").unwrap()), "(1/2)/z");
        assert_eq!(format_ratfunc(&parse_expr("(1+i)/z").unwrap()), "(1+i)/z");
        assert_eq!(format_ratfunc(&parse_expr("-1/z^2").unwrap()), "-1/z^2");
        assert_eq!(format_ratfunc(&parse_expr("i*z + 1/2*i").unwrap()), "i*z+1/2*i");
        assert_eq!(format_ratfunc(&parse_expr("0.25").unwrap()), "1/4");
    }

    #[test]
    fn syntax_errors_carry_position() {
        match parse_system("[[1, 2],\n [z, z +]]") {
            Err(Error::Syntax { line, column, .. }) => {
                assert_eq!(line, 2);
                assert_eq!(column, 9);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_system("[[1/0]]"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_system("[[1,2],[3]]"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_system("[[x]]"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_system("[[1]] junk"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_expr("0^-1"), Err(Error::Syntax { .. })));
    }
}
