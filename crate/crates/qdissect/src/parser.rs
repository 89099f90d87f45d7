//! Text syntax for product specs.
//!
//! ```text
//! product := factor+
//! factor  := "(" term "," term ";" base ")" ("^" uint)?
//! term    := "-"? "q" ("^" uint)?
//! base    := "q" "^" uint
//! ```
//!
//! Whitespace may appear between tokens. The two term exponents must sum to
//! the base exponent; violations are reported at the byte offset of the
//! offending factor.

use std::fmt;

use qdissect_core::series::{PochFactor, ProductSpec};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at byte {}: {}", self.offset, self.message)
    }
}

impl std::error::Error for ParseError {}

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> Result<(), ParseError> {
        if self.peek() == Some(b) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", b as char)))
        }
    }

    fn err(&self, message: &str) -> ParseError {
        ParseError {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn uint(&mut self) -> Result<i64, ParseError> {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected a number"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .expect("digits are ascii")
            .parse::<i64>()
            .map_err(|_| ParseError {
                offset: start,
                message: "number too large".to_string(),
            })
    }

    /// `-? q (^ uint)?`
    fn term(&mut self) -> Result<(i8, i64), ParseError> {
        self.skip_ws();
        let sign = if self.peek() == Some(b'-') {
            self.pos += 1;
            -1
        } else {
            1
        };
        self.eat(b'q')?;
        let exp = if self.peek() == Some(b'^') {
            self.pos += 1;
            self.uint()?
        } else {
            1
        };
        Ok((sign, exp))
    }

    /// `q ^ uint`
    fn base(&mut self) -> Result<i64, ParseError> {
        self.skip_ws();
        self.eat(b'q')?;
        self.eat(b'^')?;
        self.uint()
    }

    fn factor(&mut self) -> Result<PochFactor, ParseError> {
        let start = self.pos;
        self.eat(b'(')?;
        let (s1, e1) = self.term()?;
        self.skip_ws();
        self.eat(b',')?;
        let (s2, e2) = self.term()?;
        self.skip_ws();
        self.eat(b';')?;
        let m = self.base()?;
        self.skip_ws();
        self.eat(b')')?;
        let power = if self.peek() == Some(b'^') {
            self.pos += 1;
            let p = self.uint()?;
            if !(1..=u32::MAX as i64).contains(&p) {
                return Err(ParseError {
                    offset: start,
                    message: "power must be positive".to_string(),
                });
            }
            p as u32
        } else {
            1
        };
        if e1 + e2 != m {
            return Err(ParseError {
                offset: start,
                message: "exponents do not sum to modulus".to_string(),
            });
        }
        PochFactor::pair(s1, s2, e1, m, power).map_err(|e| ParseError {
            offset: start,
            message: e.to_string(),
        })
    }
}

/// Parses a whole product spec; input must consist solely of factors.
pub fn parse_product(src: &str) -> Result<ProductSpec, ParseError> {
    let mut cur = Cursor {
        src: src.as_bytes(),
        pos: 0,
    };
    let mut factors = Vec::new();
    loop {
        cur.skip_ws();
        if cur.peek().is_none() {
            break;
        }
        factors.push(cur.factor()?);
    }
    if factors.is_empty() {
        return Err(ParseError {
            offset: 0,
            message: "empty product".to_string(),
        });
    }
    Ok(ProductSpec::new(factors))
}
