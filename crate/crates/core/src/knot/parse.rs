use thiserror::Error;

use super::{CuspShape, KnotExpr, ValidationError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("invalid knot: {0}")]
    Invalid(#[from] ValidationError),
}

/// Parses, canonicalizes and validates a knot expression.
pub fn parse(text: &str) -> Result<KnotExpr, ParseError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("trailing input"));
    }
    let e = e.canonical();
    e.validate()?;
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError::Syntax { pos: self.pos, message: message.into() }
    }

    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected '{}'", c as char)))
        }
    }

    fn keyword(&mut self) -> &str {
        self.skip_ws();
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(u8::is_ascii_alphabetic) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("")
    }

    fn expr(&mut self) -> Result<KnotExpr, ParseError> {
        let start = {
            self.skip_ws();
            self.pos
        };
        let word = self.keyword().to_string();
        match word.as_str() {
            "unknot" => Ok(KnotExpr::Unknot),
            "torus" => {
                self.expect(b'(')?;
                let r = self.int()?;
                self.expect(b',')?;
                let s = self.int()?;
                self.expect(b')')?;
                Ok(KnotExpr::Torus { r, s })
            }
            "cable" => {
                self.expect(b'(')?;
                let r = self.int()?;
                self.expect(b',')?;
                let s = self.int()?;
                self.expect(b';')?;
                let companion = self.expr()?;
                self.expect(b')')?;
                Ok(KnotExpr::cable(r, s, companion))
            }
            "sum" => {
                self.expect(b'(')?;
                let mut summands = vec![self.expr()?];
                while self.peek() == Some(b',') {
                    self.pos += 1;
                    summands.push(self.expr()?);
                }
                self.expect(b')')?;
                if summands.len() < 2 {
                    return Err(ValidationError::SumTooShort.into());
                }
                Ok(KnotExpr::Sum { summands })
            }
            "hyp" => self.hyp(),
            "" => Err(self.error("expected a knot expression")),
            w => {
                self.pos = start;
                Err(self.error(format!("unknown constructor {w:?}")))
            }
        }
    }

    fn hyp(&mut self) -> Result<KnotExpr, ParseError> {
        self.expect(b'(')?;
        let name = self.name()?;
        self.expect(b',')?;
        let at = self.pos;
        let cusp_count = u32::try_from(self.int()?).map_err(|_| ParseError::Syntax {
            pos: at,
            message: "cusp count must be a nonnegative 32-bit integer".into(),
        })?;
        let mut reals = Vec::new();
        while self.peek() == Some(b',') {
            self.pos += 1;
            reals.push(self.real()?);
        }
        self.expect(b')')?;
        let cusp_data = if reals.is_empty() {
            None
        } else {
            if reals.len() % 4 != 0 {
                return Err(self.error("cusp data must be four reals per cusp"));
            }
            let shapes = reals
                .chunks(4)
                .map(|c| CuspShape { meridian_translation: [c[0], c[1]], longitude_translation: [c[2], c[3]] })
                .collect();
            Some(shapes)
        };
        Ok(KnotExpr::Hyp { name, cusp_count, cusp_data })
    }

    fn name(&mut self) -> Result<String, ParseError> {
        self.expect(b'"')?;
        let mut out = Vec::new();
        loop {
            match self.src.get(self.pos) {
                None => return Err(self.error("unterminated name")),
                Some(b'"') => {
                    self.pos += 1;
                    break;
                }
                Some(b'\\') => {
                    match self.src.get(self.pos + 1) {
                        Some(&c @ (b'"' | b'\\')) => out.push(c),
                        _ => return Err(self.error("bad escape in name")),
                    }
                    self.pos += 2;
                }
                Some(&c) => {
                    out.push(c);
                    self.pos += 1;
                }
            }
        }
        String::from_utf8(out).map_err(|_| self.error("name is not UTF-8"))
    }

    fn token(&mut self, allowed: impl Fn(u8) -> bool) -> (usize, &str) {
        self.skip_ws();
        let start = self.pos;
        if self.src.get(self.pos) == Some(&b'-') {
            self.pos += 1;
        }
        while self.src.get(self.pos).is_some_and(|&c| allowed(c)) {
            self.pos += 1;
        }
        (start, std::str::from_utf8(&self.src[start..self.pos]).unwrap_or(""))
    }

    fn int(&mut self) -> Result<i64, ParseError> {
        let (start, tok) = self.token(|c| c.is_ascii_digit());
        if tok.is_empty() || tok == "-" {
            return Err(ParseError::Syntax { pos: start, message: "expected an integer".into() });
        }
        tok.parse().map_err(|_| ParseError::Syntax {
            pos: start,
            message: format!("integer {tok} out of range"),
        })
    }

    fn real(&mut self) -> Result<f64, ParseError> {
        let (start, tok) = self.token(|c| c.is_ascii_digit() || matches!(c, b'.' | b'e' | b'E' | b'+' | b'-'));
        let tok = tok.to_string();
        let valid = tok.bytes().any(|c| c.is_ascii_digit());
        match tok.parse::<f64>() {
            Ok(x) if valid && x.is_finite() => Ok(x),
            _ => Err(ParseError::Syntax { pos: start, message: format!("bad real {tok:?}") }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_examples() {
        assert_eq!(parse("torus(3,2)").unwrap(), KnotExpr::torus(3, 2));
        assert_eq!(
            parse("cable(13,2; torus(3,2))").unwrap(),
            KnotExpr::cable(13, 2, KnotExpr::torus(3, 2))
        );
        assert_eq!(
            parse("cable(4,2; torus(3,2))"),
            Err(ParseError::Invalid(ValidationError::CableNotCoprime { r: 4, s: 2 }))
        );
        assert_eq!(parse("  unknot ").unwrap(), KnotExpr::Unknot);
        assert_eq!(parse(" torus ( -3 , 2 ) ").unwrap(), KnotExpr::torus(-3, 2));
    }

    #[test]
    fn cable_of_unknot_normalizes() {
        assert_eq!(parse("cable(5,2;unknot)").unwrap(), KnotExpr::torus(5, 2));
        assert!(parse("cable(1,2;unknot)").is_err());
    }

    #[test]
    fn hyp_with_cusp_data() {
        let e = parse(r#"hyp("fig \"8\"", 1, 1, 0, 0.5, 2.5e0)"#).unwrap();
        match &e {
            KnotExpr::Hyp { name, cusp_count, cusp_data } => {
                assert_eq!(name, "fig \"8\"");
                assert_eq!(*cusp_count, 1);
                let c = cusp_data.as_ref().unwrap()[0];
                assert_eq!(c.meridian_translation, [1.0, 0.0]);
                assert_eq!(c.longitude_translation, [0.5, 2.5]);
            }
            _ => panic!(),
        }
        assert_eq!(e.to_string(), r#"hyp("fig \"8\"",1,1.0,0.0,0.5,2.5)"#);
        assert_eq!(parse(&e.to_string()).unwrap(), e);
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let cases = [
            ("torus(3 2)", 8),
            ("torus(3,2", 9),
            ("knot(3,2)", 0),
            ("torus(3,2) x", 11),
            ("hyp(K,1)", 4),
            ("hyp(\"K\",1,1,2,3)", 16),
            ("torus(99999999999999999999,2)", 6),
            ("", 0),
        ];
        for (text, pos) in cases {
            match parse(text) {
                Err(ParseError::Syntax { pos: p, .. }) => assert_eq!(p, pos, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
        assert!(matches!(parse("sum(torus(3,2))"), Err(ParseError::Invalid(ValidationError::SumTooShort))));
        assert!(matches!(parse("hyp(\"K\",2,1,0,0,1)"), Err(ParseError::Invalid(_))));
    }
}
