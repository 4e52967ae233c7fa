//! Plain-text polynomial syntax: `2*x0^2*x1 + x2`, variables `x0..x{n-1}`,
//! coefficients as least non-negative residues.

use super::{Monomial, MonomialOrder, MultiPoly, PolyError};
use crate::ff::Field;

pub fn format_poly(p: &MultiPoly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut terms: Vec<(&Monomial, &u32)> = p.terms().iter().collect();
    terms.sort_by(|a, b| MonomialOrder::GrevLex.cmp(b.0, a.0));
    let parts: Vec<String> = terms
        .into_iter()
        .map(|(m, &c)| {
            let mut factors = Vec::new();
            if c != 1 || m.is_one() {
                factors.push(p.field().format(c));
            }
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(format!("x{i}")),
                    _ => factors.push(format!("x{i}^{e}")),
                }
            }
            factors.join("*")
        })
        .collect();
    parts.join(" + ")
}

struct Lexer<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn err(&self, msg: impl Into<String>) -> PolyError {
        PolyError::Parse { pos: self.pos, msg: msg.into() }
    }

    fn number(&mut self) -> Result<u64, PolyError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        std::str::from_utf8(&self.s[start..self.pos]).unwrap().parse().map_err(|_| self.err("number too large"))
    }
}

pub fn parse_poly(text: &str, field: &Field, nvars: usize) -> Result<MultiPoly, PolyError> {
    let mut lx = Lexer { s: text.as_bytes(), pos: 0 };
    let mut acc = MultiPoly::zero(field, nvars);
    let mut sign_negative = false;
    if lx.peek() == Some(b'-') {
        lx.pos += 1;
        sign_negative = true;
    }
    loop {
        let (m, c) = parse_term(&mut lx, field, nvars)?;
        let c = if sign_negative { field.neg(c) } else { c };
        acc = acc.add(&MultiPoly::monomial(field, m, c));
        match lx.peek() {
            None => break,
            Some(b'+') => {
                lx.pos += 1;
                sign_negative = false;
            }
            Some(b'-') => {
                lx.pos += 1;
                sign_negative = true;
            }
            Some(ch) => return Err(lx.err(format!("unexpected character {:?}", ch as char))),
        }
    }
    Ok(acc)
}

fn parse_term(lx: &mut Lexer<'_>, field: &Field, nvars: usize) -> Result<(Monomial, u32), PolyError> {
    let mut coeff = 1u32;
    let mut exps = vec![0u16; nvars];
    loop {
        match lx.peek() {
            Some(b'x') => {
                lx.pos += 1;
                let idx = lx.number()? as usize;
                if idx >= nvars {
                    return Err(lx.err(format!("variable x{idx} out of range (nvars = {nvars})")));
                }
                let mut e = 1u64;
                if lx.peek() == Some(b'^') {
                    lx.pos += 1;
                    e = lx.number()?;
                }
                let e = u16::try_from(e).map_err(|_| lx.err("exponent too large"))?;
                exps[idx] += e;
            }
            Some(d) if d.is_ascii_digit() => {
                let n = lx.number()?;
                coeff = field.mul(coeff, field.from_int((n % field.characteristic() as u64) as i64));
            }
            _ => return Err(lx.err("expected a coefficient or variable")),
        }
        if lx.peek() == Some(b'*') {
            lx.pos += 1;
        } else {
            break;
        }
    }
    Ok((Monomial(exps), coeff))
}
