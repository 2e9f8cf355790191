//! Text grammar for fields and polynomials.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' integer)?
//! atom   := integer ('/' integer)? | ident | '(' expr ')'
//! ```
//!
//! Over an extension field the identifier `w` denotes the field generator
//! and cannot be used as a variable name.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_bigint::BigInt;

use super::{AlgebraError, Field, MultiPoly, Variables};

/// `Q`, `F<p>` or `F<q>` for a supported prime power `q`.
pub fn parse_field(s: &str) -> Result<Field, AlgebraError> {
    let s = s.trim();
    if s == "Q" || s == "q" {
        return Ok(Field::Rationals);
    }
    let digits = s
        .strip_prefix('F')
        .or_else(|| s.strip_prefix("GF"))
        .ok_or_else(|| AlgebraError::InvalidField(s.to_string()))?;
    let q: u64 = digits
        .parse()
        .map_err(|_| AlgebraError::InvalidField(s.to_string()))?;
    Field::finite(q)
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Int(BigInt),
    Ident(String),
    Sym(char),
}

fn tokenize(s: &str) -> Result<Vec<(usize, Token)>, AlgebraError> {
    let bytes = s.as_bytes();
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
            let n: BigInt = s[start..i].parse().expect("digits");
            out.push((start, Token::Int(n)));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Token::Ident(s[start..i].to_string())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Token::Sym(c)));
            i += 1;
        } else {
            return Err(AlgebraError::Parse {
                pos: i,
                msg: format!("unexpected character {c:?}"),
            });
        }
    }
    Ok(out)
}

fn generator_name(field: &Field) -> Option<&'static str> {
    field.generator().map(|_| "w")
}

/// Variables named `x<i>` become `x0..x<max>`; any other names are taken in
/// sorted order.
fn infer_variables(field: &Field, tokens: &[(usize, Token)]) -> Variables {
    let gen = generator_name(field);
    let mut names = BTreeSet::new();
    for (_, t) in tokens {
        if let Token::Ident(name) = t {
            if Some(name.as_str()) != gen {
                names.insert(name.clone());
            }
        }
    }
    let indexed: Option<Vec<usize>> = names
        .iter()
        .map(|n| n.strip_prefix('x').and_then(|d| d.parse().ok()))
        .collect();
    match indexed {
        Some(idx) if !idx.is_empty() => {
            let max = idx.into_iter().max().unwrap();
            Variables::indexed("x", max + 1)
        }
        _ => Variables::new(names),
    }
}

/// Parses with variables inferred from the text.
pub fn parse_poly(field: &Field, s: &str) -> Result<MultiPoly, AlgebraError> {
    let tokens = tokenize(s)?;
    let vars = infer_variables(field, &tokens);
    Parser::new(field, &vars, tokens, s.len()).run()
}

/// Parses over a fixed variable list.
pub fn parse_poly_in(field: &Field, vars: &Variables, s: &str) -> Result<MultiPoly, AlgebraError> {
    let tokens = tokenize(s)?;
    Parser::new(field, vars, tokens, s.len()).run()
}

struct Parser<'a> {
    field: &'a Field,
    vars: &'a Variables,
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end: usize,
}

impl<'a> Parser<'a> {
    fn new(field: &'a Field, vars: &'a Variables, tokens: Vec<(usize, Token)>, end: usize) -> Self {
        Parser {
            field,
            vars,
            tokens,
            pos: 0,
            end,
        }
    }

    fn run(mut self) -> Result<MultiPoly, AlgebraError> {
        if self.tokens.is_empty() {
            return Err(self.error("empty expression"));
        }
        let p = self.expr()?;
        if self.pos < self.tokens.len() {
            return Err(self.error("trailing input"));
        }
        Ok(p)
    }

    fn offset(&self) -> usize {
        self.tokens
            .get(self.pos)
            .map(|(p, _)| *p)
            .unwrap_or(self.end)
    }

    fn error(&self, msg: &str) -> AlgebraError {
        AlgebraError::Parse {
            pos: self.offset(),
            msg: msg.to_string(),
        }
    }

    fn peek_sym(&self) -> Option<char> {
        match self.tokens.get(self.pos) {
            Some((_, Token::Sym(c))) => Some(*c),
            _ => None,
        }
    }

    fn expr(&mut self) -> Result<MultiPoly, AlgebraError> {
        let mut acc = self.term()?;
        while let Some(c @ ('+' | '-')) = self.peek_sym() {
            self.pos += 1;
            let t = self.term()?;
            acc = if c == '+' { acc.add(&t) } else { acc.sub(&t) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<MultiPoly, AlgebraError> {
        let mut acc = self.unary()?;
        while self.peek_sym() == Some('*') {
            self.pos += 1;
            acc = acc.mul(&self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<MultiPoly, AlgebraError> {
        match self.peek_sym() {
            Some('-') => {
                self.pos += 1;
                Ok(self.unary()?.neg())
            }
            Some('+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<MultiPoly, AlgebraError> {
        let base = self.atom()?;
        if self.peek_sym() != Some('^') {
            return Ok(base);
        }
        self.pos += 1;
        match self.tokens.get(self.pos) {
            Some((_, Token::Int(n))) => {
                let e: u32 = n
                    .try_into()
                    .ok()
                    .filter(|e| *e <= u16::MAX as u32)
                    .ok_or_else(|| self.error("exponent too large"))?;
                self.pos += 1;
                Ok(base.pow(e))
            }
            _ => Err(self.error("expected integer exponent")),
        }
    }

    fn constant(&self, c: crate::algebra::Scalar) -> MultiPoly {
        MultiPoly::constant(self.field.clone(), self.vars.clone(), c)
    }

    fn atom(&mut self) -> Result<MultiPoly, AlgebraError> {
        let Some((_, tok)) = self.tokens.get(self.pos).cloned() else {
            return Err(self.error("unexpected end of input"));
        };
        match tok {
            Token::Int(n) => {
                self.pos += 1;
                let mut c = self.field.from_bigint(&n);
                if self.peek_sym() == Some('/') {
                    self.pos += 1;
                    let Some((_, Token::Int(d))) = self.tokens.get(self.pos).cloned() else {
                        return Err(self.error("expected integer denominator"));
                    };
                    let d = self.field.from_bigint(&d);
                    c = self
                        .field
                        .div(&c, &d)
                        .map_err(|_| self.error("denominator is zero in this field"))?;
                    self.pos += 1;
                }
                Ok(self.constant(c))
            }
            Token::Ident(name) => {
                self.pos += 1;
                if let Some(i) = self.vars.index_of(&name) {
                    return Ok(MultiPoly::var(self.field.clone(), self.vars.clone(), i));
                }
                if Some(name.as_str()) == generator_name(self.field) {
                    return Ok(self.constant(self.field.generator().unwrap()));
                }
                Err(AlgebraError::UnknownVariable(name))
            }
            Token::Sym('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek_sym() != Some(')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Token::Sym(_) => Err(self.error("unexpected symbol")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fields() {
        assert_eq!(parse_field("Q").unwrap(), Field::Rationals);
        assert_eq!(parse_field("F5").unwrap(), Field::Prime(5));
        assert_eq!(parse_field("F16").unwrap().order(), Some(16));
        assert!(parse_field("F6").is_err());
        assert!(parse_field("R").is_err());
    }

    #[test]
    fn indexed_variables_fill_gaps() {
        let f = parse_poly(&Field::Rationals, "x0^3 + x3").unwrap();
        assert_eq!(f.nvars(), 4);
    }

    #[test]
    fn fraction_coefficients() {
        let f = parse_poly(&Field::Rationals, "1/2*x0 - 3/4").unwrap();
        assert_eq!(alloc::format!("{f}"), "1/2*x0 - 3/4");
    }

    #[test]
    fn generator_over_extension() {
        let f4 = Field::finite(4).unwrap();
        let p = parse_poly(&f4, "x0^2 + w*x0 + w^2").unwrap();
        assert_eq!(p.nvars(), 1);
        assert_eq!(alloc::format!("{p}"), "x0^2 + w*x0 + w + 1");
    }

    #[test]
    fn errors_report_position() {
        let e = parse_poly(&Field::Rationals, "x0 + * x1").unwrap_err();
        assert!(matches!(e, AlgebraError::Parse { pos: 5, .. }));
        let vars = Variables::new(["x", "y"]);
        assert_eq!(
            parse_poly_in(&Field::Rationals, &vars, "x + z"),
            Err(AlgebraError::UnknownVariable("z".into()))
        );
        assert!(parse_poly(&Field::Prime(3), "x0/3").is_err());
        assert!(parse_poly(&Field::Prime(3), "1/3*x0").is_err());
    }
}
