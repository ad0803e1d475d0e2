//! Expressions over exterior generators:
//! `expr = term (("+"|"-") term)*`, `term = [coeff "*"] factor ("*" factor)*`,
//! `factor = genname | "(" expr ")"`.

use std::collections::BTreeMap;

use super::multiply_monomials;
use crate::scalar::{parse_scalar, FieldTag, Scalar};

/// Sorted generator-index monomials with coefficients.
pub type Polynomial = BTreeMap<Vec<usize>, Scalar>;

pub(crate) fn add_poly_term(p: &mut Polynomial, mono: Vec<usize>, c: &Scalar) {
    if c.is_zero() {
        return;
    }
    let entry = p.entry(mono.clone()).or_insert_with(Scalar::zero);
    *entry += c;
    if entry.is_zero() {
        p.remove(&mono);
    }
}

fn poly_mul(x: &Polynomial, y: &Polynomial) -> Polynomial {
    let mut out = Polynomial::new();
    for (mx, cx) in x {
        for (my, cy) in y {
            if let Some((m, neg)) = multiply_monomials(mx, my) {
                add_poly_term(&mut out, m, &(cx * cy).signed(neg));
            }
        }
    }
    out
}

fn constant(c: Scalar) -> Polynomial {
    let mut p = Polynomial::new();
    add_poly_term(&mut p, Vec::new(), &c);
    p
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
    names: &'a [&'a str],
    field: FieldTag,
}

type ParseResult<T> = std::result::Result<T, (usize, String)>;

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.text[self.pos..].starts_with(|c: char| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.text[self.pos..].chars().next()
    }

    fn expr(&mut self) -> ParseResult<Polynomial> {
        let mut negate = false;
        match self.peek() {
            Some('-') => {
                negate = true;
                self.pos += 1;
            }
            Some('+') => self.pos += 1,
            _ => {}
        }
        let mut acc = Polynomial::new();
        loop {
            let t = self.term()?;
            for (m, c) in t {
                add_poly_term(&mut acc, m, &c.signed(negate));
            }
            match self.peek() {
                Some('+') => {
                    negate = false;
                    self.pos += 1;
                }
                Some('-') => {
                    negate = true;
                    self.pos += 1;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> ParseResult<Polynomial> {
        let mut acc = self.factor()?;
        while self.peek() == Some('*') {
            self.pos += 1;
            let f = self.factor()?;
            acc = poly_mul(&acc, &f);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> ParseResult<Polynomial> {
        let start = match self.peek() {
            None => return Err((self.pos, "unexpected end of expression".into())),
            Some(_) => self.pos,
        };
        let rest = &self.text[start..];
        if rest.starts_with('(') {
            self.pos += 1;
            let inner = self.expr()?;
            if self.peek() != Some(')') {
                return Err((self.pos, "expected `)`".into()));
            }
            self.pos += 1;
            return Ok(inner);
        }
        let first = rest.chars().next().expect("nonempty");
        if first.is_ascii_digit() {
            let len = rest.find(|c: char| !(c.is_ascii_digit() || c == '/')).unwrap_or(rest.len());
            let mut end = len;
            if rest[len..].starts_with('i') && !rest[len + 1..].starts_with(is_ident_char) {
                end += 1;
            }
            let lit = &rest[..end];
            self.pos += end;
            return parse_scalar(lit, self.field).map(constant).map_err(|e| (start, e.to_string()));
        }
        if first.is_ascii_alphabetic() || first == '_' {
            let len = rest.find(|c: char| !is_ident_char(c)).unwrap_or(rest.len());
            let ident = &rest[..len];
            self.pos += len;
            if let Some(k) = self.names.iter().position(|n| *n == ident) {
                let mut p = Polynomial::new();
                p.insert(vec![k], Scalar::one());
                return Ok(p);
            }
            if ident == "i" {
                return parse_scalar("i", self.field).map(constant).map_err(|e| (start, e.to_string()));
            }
            return Err((start, format!("undeclared generator `{ident}`")));
        }
        Err((start, format!("unexpected character `{first}`")))
    }
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

/// Parses an expression; errors carry the byte offset into `text`.
pub fn parse_expression(text: &str, names: &[&str], field: FieldTag) -> ParseResult<Polynomial> {
    let mut p = Parser { text, pos: 0, names, field };
    let poly = p.expr()?;
    p.skip_ws();
    if p.pos != text.len() {
        return Err((p.pos, format!("unexpected trailing input `{}`", &text[p.pos..])));
    }
    Ok(poly)
}

/// Canonical text: terms in monomial order, real and imaginary parts as separate terms.
pub fn render_polynomial(p: &Polynomial, names: &[&str]) -> String {
    let mut terms: Vec<(&Vec<usize>, &Scalar)> = p.iter().collect();
    terms.sort_by_key(|(m, _)| (m.len(), (*m).clone()));
    let mut out = String::new();
    for (mono, c) in terms {
        let parts = [(Scalar::from_rational(c.re.clone()), false), (Scalar::from_rational(c.im.clone()), true)];
        for (part, imaginary) in parts {
            if part.is_zero() {
                continue;
            }
            let negative = part.re.is_negative();
            let magnitude = Scalar::from_rational(part.re.abs());
            if out.is_empty() {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let mut factors: Vec<String> = Vec::new();
            let coeff = if imaginary {
                if magnitude.is_one() {
                    "i".to_string()
                } else {
                    format!("{magnitude}i")
                }
            } else {
                magnitude.to_string()
            };
            if coeff != "1" || mono.is_empty() {
                factors.push(coeff);
            }
            factors.extend(mono.iter().map(|&k| names[k].to_string()));
            out.push_str(&factors.join("*"));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}
