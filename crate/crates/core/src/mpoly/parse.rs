//! Recursive-descent parser for the polynomial grammar.
//!
//! ```text
//! poly   := sign? term (('+' | '-') term)*
//! term   := power ('*'? power)*
//! power  := atom ('^' nat)?
//! atom   := nat | var | 'u' | '(' poly ')'
//! var    := 'X' nat | 'X' | 'Y' | 'Z' | 'W' | 'x' | 'y'
//! ```
//!
//! `X, Y, Z, W` stand for `X0..X3` and `x, y` for `X0, X1`. The letter `u`
//! is the generator of the field over its prime subfield. Integer literals
//! are reduced modulo `p`. A product may omit `*` between factors.

use std::sync::Arc;

use super::{Monomial, MultiPoly};
use crate::error::{Error, Result};
use crate::gf::FieldSpec;

/// Parses `text` as a polynomial in `nvars` variables over `field`.
pub fn parse_poly(text: &str, nvars: usize, field: &Arc<FieldSpec>) -> Result<MultiPoly> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, nvars, field };
    p.skip_ws();
    if p.at_end() {
        return Err(p.syntax("empty input"));
    }
    let out = p.poly()?;
    p.skip_ws();
    if !p.at_end() {
        return Err(p.syntax(&format!("unexpected '{}'", p.src[p.pos] as char)));
    }
    Ok(out)
}

/// Parses `num/den` (or a bare polynomial, with denominator one). The split
/// happens at the single top-level `/`.
pub fn parse_rational(
    text: &str,
    nvars: usize,
    field: &Arc<FieldSpec>,
) -> Result<(MultiPoly, MultiPoly)> {
    let mut depth = 0i32;
    let mut split = None;
    for (i, b) in text.bytes().enumerate() {
        match b {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b'/' if depth == 0 => {
                if split.is_some() {
                    return Err(Error::Syntax { pos: i, msg: "more than one '/'".into() });
                }
                split = Some(i);
            }
            _ => {}
        }
    }
    match split {
        None => Ok((parse_poly(text, nvars, field)?, MultiPoly::one(field.clone(), nvars))),
        Some(i) => {
            let num = parse_poly(&text[..i], nvars, field)?;
            let den = parse_poly(&text[i + 1..], nvars, field).map_err(|e| match e {
                Error::Syntax { pos, msg } => Error::Syntax { pos: pos + i + 1, msg },
                other => other,
            })?;
            if den.is_zero() {
                return Err(Error::Syntax { pos: i + 1, msg: "zero denominator".into() });
            }
            Ok((num, den))
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    nvars: usize,
    field: &'a Arc<FieldSpec>,
}

impl Parser<'_> {
    fn syntax(&self, msg: &str) -> Error {
        Error::Syntax { pos: self.pos, msg: msg.to_string() }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
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

    fn poly(&mut self) -> Result<MultiPoly> {
        let mut negate = false;
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                negate = true;
            }
            Some(b'+') => self.pos += 1,
            _ => {}
        }
        let first = self.term()?;
        let mut acc = if negate { -&first } else { first };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = &acc * &self.power()?;
                }
                Some(c) if starts_atom(c) => acc = &acc * &self.power()?,
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<MultiPoly> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        self.skip_ws();
        let at = self.pos;
        let e = self.nat()?.ok_or_else(|| self.syntax("expected exponent"))?;
        let e = u64::try_from(e).map_err(|_| Error::Syntax { pos: at, msg: "exponent too large".into() })?;
        let deg = base.total_degree().unwrap_or(0) as u128;
        if deg * e as u128 > u16::MAX as u128 {
            return Err(Error::Syntax { pos: at, msg: "exponent too large".into() });
        }
        if base.is_constant() {
            let c = self.field.pow(base.constant_term(), e);
            return Ok(MultiPoly::constant(self.field.clone(), self.nvars, c));
        }
        Ok(base.pow(e))
    }

    fn atom(&mut self) -> Result<MultiPoly> {
        let start = match self.peek() {
            Some(c) => c,
            None => return Err(self.syntax("unexpected end of input")),
        };
        match start {
            b'(' => {
                self.pos += 1;
                let inner = self.poly()?;
                if self.peek() != Some(b')') {
                    return Err(self.syntax("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            b'0'..=b'9' => {
                let n = self.nat()?.expect("digit present");
                let c = self.field.from_u128(n);
                Ok(MultiPoly::constant(self.field.clone(), self.nvars, c))
            }
            b'u' => {
                if self.field.degree() == 1 {
                    return Err(Error::CoefficientNotInField(format!(
                        "'u' at position {} over the prime field F_{}",
                        self.pos,
                        self.field.order()
                    )));
                }
                self.pos += 1;
                Ok(MultiPoly::constant(self.field.clone(), self.nvars, self.field.generator()))
            }
            b'X' | b'Y' | b'Z' | b'W' | b'x' | b'y' => {
                self.pos += 1;
                let index = match start {
                    b'X' => match self.src.get(self.pos) {
                        Some(d) if d.is_ascii_digit() => {
                            let n = self.nat()?.expect("digit present");
                            usize::try_from(n).unwrap_or(usize::MAX)
                        }
                        _ => 0,
                    },
                    b'Y' | b'y' => 1,
                    b'Z' => 2,
                    b'W' => 3,
                    _ => 0,
                };
                if index >= self.nvars {
                    return Err(Error::VariableOutOfRange { index, nvars: self.nvars });
                }
                Ok(MultiPoly::monomial(
                    self.field.clone(),
                    self.nvars,
                    self.field.one(),
                    Monomial::var(self.nvars, index, 1),
                ))
            }
            c => Err(self.syntax(&format!("unexpected '{}'", c as char))),
        }
    }

    /// Reads a decimal natural number without skipping leading whitespace.
    fn nat(&mut self) -> Result<Option<u128>> {
        let start = self.pos;
        let mut v: u128 = 0;
        while let Some(&d) = self.src.get(self.pos) {
            if !d.is_ascii_digit() {
                break;
            }
            v = v
                .checked_mul(10)
                .and_then(|v| v.checked_add((d - b'0') as u128))
                .ok_or(Error::Syntax { pos: start, msg: "integer literal too large".into() })?;
            self.pos += 1;
        }
        Ok((self.pos > start).then_some(v))
    }
}

fn starts_atom(c: u8) -> bool {
    matches!(c, b'(' | b'0'..=b'9' | b'u' | b'X' | b'Y' | b'Z' | b'W' | b'x' | b'y')
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::make_field;

    #[test]
    fn parses_the_quartic_surface() {
        let f = make_field(5, 1, None).unwrap();
        let g = parse_poly("X0*X1^5 + X1*X2^5 + X0^5*X2 + X3^6", 4, &f).unwrap();
        let a = parse_poly("XY^5+YZ^5+X^5Z+W^6", 4, &f).unwrap();
        assert_eq!(g, a);
        assert_eq!(g.num_terms(), 4);
        assert_eq!(g.to_string(), "X0*X1^5 + X0^5*X2 + X1*X2^5 + X3^6");
    }

    #[test]
    fn zero_and_negatives() {
        let f = make_field(5, 1, None).unwrap();
        assert!(parse_poly("0", 3, &f).unwrap().is_zero());
        let g = parse_poly("X0^2 - X1^2", 2, &f).unwrap();
        assert_eq!(g.coefficient(&Monomial::from_exponents(&[2, 0])), f.one());
        assert_eq!(g.coefficient(&Monomial::from_exponents(&[0, 2])), f.from_int(4));
        assert_eq!(parse_poly("-1 - x*y", 2, &f).unwrap(), parse_poly("4+4xy", 2, &f).unwrap());
        assert!(parse_poly("5*X0", 1, &f).unwrap().is_zero());
    }

    #[test]
    fn grouping_and_implicit_products() {
        let f = make_field(5, 1, None).unwrap();
        let a = parse_poly("(x+y)^5y^5x - y(1+xy)^5", 2, &f).unwrap();
        let b = parse_poly("(x^5+y^5)*y^5*x - y*(1+x^5*y^5)", 2, &f).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn extension_coefficients() {
        let f9 = make_field(3, 2, None).unwrap();
        let g = parse_poly("(2*u+1)*X0 + u^2", 1, &f9).unwrap();
        assert_eq!(g.to_string(), "(2*u+1)*X0 + 2");
        let f5 = make_field(5, 1, None).unwrap();
        assert!(matches!(parse_poly("u*X0", 1, &f5), Err(Error::CoefficientNotInField(_))));
    }

    #[test]
    fn errors_carry_positions() {
        let f = make_field(5, 1, None).unwrap();
        assert_eq!(
            parse_poly("X0 + * X1", 2, &f),
            Err(Error::Syntax { pos: 5, msg: "unexpected '*'".into() })
        );
        assert!(matches!(parse_poly("X0 + (X1", 2, &f), Err(Error::Syntax { pos: 8, .. })));
        assert_eq!(
            parse_poly("X4", 4, &f),
            Err(Error::VariableOutOfRange { index: 4, nvars: 4 })
        );
        assert!(matches!(parse_poly("", 1, &f), Err(Error::Syntax { pos: 0, .. })));
        assert!(matches!(parse_poly("X0^70000", 1, &f), Err(Error::Syntax { .. })));
    }

    #[test]
    fn rational_literals() {
        let f = make_field(5, 1, None).unwrap();
        let (n, d) = parse_rational("(-1-xy)/(x+y)", 2, &f).unwrap();
        assert_eq!(n, parse_poly("4+4*x*y", 2, &f).unwrap());
        assert_eq!(d, parse_poly("x+y", 2, &f).unwrap());
        let (n, d) = parse_rational("x^2", 2, &f).unwrap();
        assert_eq!(n.to_string(), "X0^2");
        assert_eq!(d, MultiPoly::one(f.clone(), 2));
        assert!(parse_rational("x/0", 2, &f).is_err());
    }

    #[test]
    fn print_parse_round_trip() {
        let f9 = make_field(3, 2, None).unwrap();
        let g = parse_poly("(u+2)X0^3X1 + 2X2^4 - uX1 + 1", 3, &f9).unwrap();
        let back = parse_poly(&g.to_string(), 3, &f9).unwrap();
        assert_eq!(g, back);
        assert_eq!(back.to_string(), g.to_string());
    }
}
