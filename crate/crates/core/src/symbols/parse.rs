//! Recursive-descent parser for the symbol DSL.
//!
//! ```text
//! expr    := term ('*' term)*
//! term    := 'chi:' INT
//!          | 'blaschke:[' complex (',' complex)* ']'
//!          | 'sing:[' '(' FLOAT ',' FLOAT ')' (',' '(' FLOAT ',' FLOAT ')')* ']'
//!          | 'expi:' realseries | 'outer:' realseries
//!          | 'fourier:[' complex* ']'
//!          | 'scalar:' complex
//! realseries := 'cos:[' FLOAT* ']' 'sin:[' FLOAT* ']'
//! complex := FLOAT | FLOAT ('+'|'-') FLOAT 'i'
//! ```
//!
//! Whitespace is ignored between tokens; list items may be separated by
//! commas or whitespace. The Unicode minus `−` is accepted wherever `-` is.

use super::{Atom, SymbolExpr};
use crate::circle_fourier::TrigSeries;
use crate::error::{HgeoError, Result};
use crate::linalg::{cx, Cx};

pub fn parse_symbol(text: &str) -> Result<SymbolExpr> {
    let normalized = text.replace('−', "-");
    let mut p = Parser {
        src: normalized.as_bytes(),
        pos: 0,
        map: position_map(text),
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    e.validate()?;
    Ok(e)
}

/// Byte offsets in the normalized text mapped back to character positions of the input.
fn position_map(text: &str) -> Vec<usize> {
    let mut map = Vec::with_capacity(text.len() + 1);
    for (i, ch) in text.chars().enumerate() {
        let width = if ch == '−' { 1 } else { ch.len_utf8() };
        map.extend(std::iter::repeat(i).take(width));
    }
    map.push(text.chars().count());
    map
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    map: Vec<usize>,
}

impl Parser<'_> {
    fn error(&self, msg: impl Into<String>) -> HgeoError {
        HgeoError::Syntax {
            pos: self.map.get(self.pos).copied().unwrap_or(self.pos),
            msg: msg.into(),
        }
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

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected '{}'", c as char)))
        }
    }

    fn keyword(&mut self, kw: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(kw.as_bytes()) {
            self.pos += kw.len();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<SymbolExpr> {
        let mut terms = vec![self.term()?];
        while self.eat(b'*') {
            terms.push(self.term()?);
        }
        Ok(SymbolExpr::product(terms))
    }

    fn term(&mut self) -> Result<SymbolExpr> {
        if self.keyword("chi:") {
            let start = self.pos;
            let v = self.number()?;
            if v.fract() != 0.0 || v.abs() > 1e6 {
                self.pos = start;
                return Err(self.error("chi needs an integer frequency"));
            }
            Ok(SymbolExpr::Chi(v as i64))
        } else if self.keyword("blaschke:") {
            self.expect(b'[')?;
            let zeros = self.list(b']', Self::complex)?;
            if zeros.is_empty() {
                return Err(self.error("blaschke needs at least one zero"));
            }
            Ok(SymbolExpr::Blaschke(zeros))
        } else if self.keyword("sing:") {
            self.expect(b'[')?;
            let atoms = self.list(b']', |p| {
                p.expect(b'(')?;
                let angle = p.number()?;
                p.expect(b',')?;
                let weight = p.number()?;
                p.expect(b')')?;
                Ok(Atom { angle, weight })
            })?;
            if atoms.is_empty() {
                return Err(self.error("sing needs at least one atom"));
            }
            Ok(SymbolExpr::SingularAtomic(atoms))
        } else if self.keyword("expi:") {
            Ok(SymbolExpr::ExpI(self.realseries()?))
        } else if self.keyword("outer:") {
            Ok(SymbolExpr::OuterFromLogModulus(self.realseries()?))
        } else if self.keyword("fourier:") {
            self.expect(b'[')?;
            let start = self.pos;
            let coeffs = self.list(b']', Self::complex)?;
            if coeffs.len() % 2 == 0 {
                self.pos = start;
                return Err(self.error(format!(
                    "fourier needs an odd number of coefficients, got {}",
                    coeffs.len()
                )));
            }
            Ok(SymbolExpr::Raw(TrigSeries::new(coeffs)?))
        } else if self.keyword("scalar:") {
            Ok(SymbolExpr::Scalar(self.complex()?))
        } else {
            Err(self.error("expected one of chi:, blaschke:, sing:, expi:, outer:, fourier:, scalar:"))
        }
    }

    fn realseries(&mut self) -> Result<TrigSeries> {
        if !self.keyword("cos:") {
            return Err(self.error("expected 'cos:['"));
        }
        self.expect(b'[')?;
        let cos = self.list(b']', Self::number)?;
        if !self.keyword("sin:") {
            return Err(self.error("expected 'sin:['"));
        }
        self.expect(b'[')?;
        let sin = self.list(b']', Self::number)?;
        Ok(TrigSeries::real_from_cos_sin(0.0, &cos, &sin))
    }

    /// Items until `close`, separated by commas or whitespace.
    fn list<T>(&mut self, close: u8, mut item: impl FnMut(&mut Self) -> Result<T>) -> Result<Vec<T>> {
        let mut out = Vec::new();
        loop {
            if self.eat(close) {
                return Ok(out);
            }
            if self.peek().is_none() {
                return Err(self.error(format!("expected '{}'", close as char)));
            }
            if !out.is_empty() {
                self.eat(b',');
            }
            out.push(item(self)?);
        }
    }

    fn number(&mut self) -> Result<f64> {
        self.skip_ws();
        let start = self.pos;
        let s = self.src;
        let mut i = self.pos;
        if i < s.len() && (s[i] == b'+' || s[i] == b'-') {
            i += 1;
        }
        if s[i..].starts_with(b"pi") {
            i += 2;
        } else {
            let digits = i;
            while i < s.len() && (s[i].is_ascii_digit() || s[i] == b'.') {
                i += 1;
            }
            if i == digits {
                return Err(self.error("expected a number"));
            }
            if i < s.len() && (s[i] == b'e' || s[i] == b'E') {
                let mut j = i + 1;
                if j < s.len() && (s[j] == b'+' || s[j] == b'-') {
                    j += 1;
                }
                if j < s.len() && s[j].is_ascii_digit() {
                    while j < s.len() && s[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
        }
        let text = std::str::from_utf8(&s[start..i]).unwrap();
        let value = match text.trim_start_matches(['+', '-']) {
            "pi" => {
                let sign = if text.starts_with('-') { -1.0 } else { 1.0 };
                sign * std::f64::consts::PI
            }
            _ => text.parse::<f64>().map_err(|_| self.error(format!("bad number '{text}'")))?,
        };
        self.pos = i;
        Ok(value)
    }

    fn complex(&mut self) -> Result<Cx> {
        let re = self.number()?;
        if self.src.get(self.pos) == Some(&b'i') {
            self.pos += 1;
            return Ok(cx(0.0, re));
        }
        let save = self.pos;
        match self.src.get(self.pos) {
            Some(b'+') | Some(b'-') => {
                let im = self.number()?;
                if self.src.get(self.pos) != Some(&b'i') {
                    self.pos = save;
                    return Err(self.error("expected imaginary part ending in 'i'"));
                }
                self.pos += 1;
                Ok(cx(re, im))
            }
            _ => Ok(cx(re, 0.0)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_character() {
        assert_eq!(parse_symbol("chi:1").unwrap(), SymbolExpr::Chi(1));
        assert_eq!(parse_symbol(" chi:-3 ").unwrap(), SymbolExpr::Chi(-3));
    }

    #[test]
    fn parses_blaschke_list() {
        let e = parse_symbol("blaschke:[0.5, 0.3+0.2i]").unwrap();
        assert_eq!(e, SymbolExpr::Blaschke(vec![cx(0.5, 0.0), cx(0.3, 0.2)]));
    }

    #[test]
    fn parses_product() {
        let e = parse_symbol("chi:-1*blaschke:[0.5]").unwrap();
        assert_eq!(
            e,
            SymbolExpr::Product(vec![SymbolExpr::Chi(-1), SymbolExpr::Blaschke(vec![cx(0.5, 0.0)])])
        );
    }

    #[test]
    fn parses_remaining_terms() {
        let e = parse_symbol("sing:[(0,1),(pi, 0.5)]").unwrap();
        match e {
            SymbolExpr::SingularAtomic(a) => {
                assert_eq!(a.len(), 2);
                assert_eq!(a[1].angle, std::f64::consts::PI);
            }
            _ => panic!("{e:?}"),
        }
        let e = parse_symbol("expi:cos:[1] sin:[]").unwrap();
        assert!(matches!(e, SymbolExpr::ExpI(ref s) if s.bandwidth() == 1));
        let e = parse_symbol("fourier:[1 0 1]").unwrap();
        assert!(matches!(e, SymbolExpr::Raw(ref s) if s.bandwidth() == 1));
        assert_eq!(parse_symbol("scalar:0.6−0.8i").unwrap(), SymbolExpr::Scalar(cx(0.6, -0.8)));
        assert_eq!(parse_symbol("scalar:2e-1").unwrap(), SymbolExpr::Scalar(cx(0.2, 0.0)));
    }

    #[test]
    fn syntax_errors_carry_positions() {
        match parse_symbol("chi:1*foo") {
            Err(HgeoError::Syntax { pos, .. }) => assert_eq!(pos, 6),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_symbol("blaschke:[0.5"), Err(HgeoError::Syntax { .. })));
        assert!(matches!(parse_symbol("fourier:[1,0]"), Err(HgeoError::Syntax { .. })));
        assert!(matches!(parse_symbol("chi:1.5"), Err(HgeoError::Syntax { .. })));
        assert!(matches!(parse_symbol("scalar:1+2"), Err(HgeoError::Syntax { .. })));
    }

    #[test]
    fn semantic_errors() {
        assert!(matches!(parse_symbol("blaschke:[1.5]"), Err(HgeoError::Semantic(_))));
        assert!(matches!(parse_symbol("sing:[(0,0)]"), Err(HgeoError::Semantic(_))));
    }
}
