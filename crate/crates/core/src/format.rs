//! Text and JSON formats.
//!
//! A matrix file is a JSON object `{"n": 2, "entries": [["1", "q"], ...]}`
//! whose entries are either JSON integers or strings in the grammar
//!
//! ```text
//! expr  := [sign] term (sign term)*
//! term  := coeff ['*' power] | power
//! power := 'q' ['^' (int | '(' rational ')')]
//! coeff := digits ['/' digits]
//! ```
//!
//! with spaces allowed between tokens. Printing uses the canonical
//! [`Laurent`] display, which this grammar reads back unchanged.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::ser::{SerializeSeq, Serializer};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::exact::{format_rat, Laurent, Matrix, Rat, RatMatrix, RingMatrix};

pub(crate) fn ser_rat_vec<S: Serializer>(v: &[Rat], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for r in v {
        seq.serialize_element(&format_rat(r))?;
    }
    seq.end()
}

pub(crate) fn ser_rat_vecs<S: Serializer>(v: &[Vec<Rat>], s: S) -> Result<S::Ok, S::Error> {
    let rows: Vec<Vec<String>> = v.iter().map(|r| r.iter().map(format_rat).collect()).collect();
    s.collect_seq(rows)
}

pub(crate) fn ser_bigint_vecs<S: Serializer>(v: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
    let rows: Vec<Vec<String>> = v.iter().map(|r| r.iter().map(ToString::to_string).collect()).collect();
    s.collect_seq(rows)
}

pub(crate) fn ser_rat_matrix<S: Serializer>(m: &RatMatrix, s: S) -> Result<S::Ok, S::Error> {
    ser_rat_vecs(&m.to_rows(), s)
}

pub(crate) fn ser_rat<S: Serializer>(r: &Rat, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_rat(r))
}

/// Error at a byte offset inside `expr`, reported as a column (1-based).
struct ExprError {
    offset: usize,
    message: String,
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn fail<T>(&self, message: impl Into<String>) -> std::result::Result<T, ExprError> {
        Err(ExprError {
            offset: self.pos,
            message: message.into(),
        })
    }

    fn digits(&mut self) -> std::result::Result<BigInt, ExprError> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.fail("expected digits");
        }
        Ok(self.text[start..self.pos].parse().expect("ascii digits"))
    }

    /// `digits ['/' digits]`.
    fn rational(&mut self) -> std::result::Result<Rat, ExprError> {
        let n = self.digits()?;
        if self.eat('/') {
            let at = self.pos;
            let d = self.digits()?;
            if d.is_zero() {
                return Err(ExprError {
                    offset: at,
                    message: "zero denominator".into(),
                });
            }
            return Ok(Rat::new(n, d));
        }
        Ok(Rat::from_integer(n))
    }

    fn signed_rational(&mut self) -> std::result::Result<Rat, ExprError> {
        let neg = self.eat('-');
        let r = self.rational()?;
        Ok(if neg { -r } else { r })
    }

    /// `'q' ['^' exponent]`, with the `q` already consumed.
    fn power_tail(&mut self) -> std::result::Result<Rat, ExprError> {
        if !self.eat('^') {
            return Ok(Rat::one());
        }
        if self.eat('(') {
            let e = self.signed_rational()?;
            if !self.eat(')') {
                return self.fail("expected ')'");
            }
            return Ok(e);
        }
        let neg = self.eat('-');
        let k = Rat::from_integer(self.digits()?);
        Ok(if neg { -k } else { k })
    }

    fn term(&mut self) -> std::result::Result<Laurent, ExprError> {
        self.skip_ws();
        if self.eat('q') {
            let e = self.power_tail()?;
            return Ok(Laurent::monomial(Rat::one(), &e));
        }
        if !self.peek().is_some_and(|c| c.is_ascii_digit()) {
            return self.fail("expected a number or q");
        }
        let c = self.rational()?;
        if self.eat('*') {
            if !self.eat('q') {
                return self.fail("expected q after '*'");
            }
            let e = self.power_tail()?;
            return Ok(Laurent::monomial(c, &e));
        }
        Ok(Laurent::constant(c))
    }
}

fn parse_expr_at(text: &str) -> std::result::Result<Laurent, ExprError> {
    let mut cur = Cursor { text, pos: 0 };
    let mut total = Laurent::zero();
    let mut first = true;
    loop {
        cur.skip_ws();
        if cur.pos == text.len() {
            if first {
                return cur.fail("empty expression");
            }
            return Ok(total);
        }
        let negative = if cur.eat('-') {
            true
        } else if cur.eat('+') || first {
            false
        } else {
            return cur.fail("expected '+' or '-'");
        };
        let t = cur.term()?;
        total = if negative { &total - &t } else { &total + &t };
        first = false;
    }
}

/// Parses one entry expression, e.g. `1 - q - q^2` or `3/2*q^(1/2)`.
pub fn parse_expr(text: &str) -> Result<Laurent> {
    parse_expr_at(text).map_err(|e| Error::Parse {
        line: 1,
        column: text[..e.offset].chars().count() + 1,
        message: e.message,
    })
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, col)
}

/// Byte offsets of the scalar tokens inside the `"entries"` array, in
/// document order. String offsets point just past the opening quote.
fn entry_offsets(text: &str) -> Vec<usize> {
    let Some(key) = text.find("\"entries\"") else {
        return Vec::new();
    };
    let bytes = text.as_bytes();
    let mut i = key + "\"entries\"".len();
    let mut depth = 0usize;
    let mut out = Vec::new();
    while i < bytes.len() {
        match bytes[i] {
            b'[' => depth += 1,
            b']' => {
                depth = depth.saturating_sub(1);
                if depth == 0 {
                    break;
                }
            }
            b'"' => {
                out.push(i + 1);
                i += 1;
                while i < bytes.len() && bytes[i] != b'"' {
                    if bytes[i] == b'\\' {
                        i += 1;
                    }
                    i += 1;
                }
            }
            b'-' | b'0'..=b'9' if depth > 0 => {
                out.push(i);
                while i + 1 < bytes.len() && matches!(bytes[i + 1], b'-' | b'0'..=b'9' | b'.' | b'e' | b'E' | b'+') {
                    i += 1;
                }
            }
            _ => {}
        }
        i += 1;
    }
    out
}

fn doc_error(text: &str, offset: usize, message: impl Into<String>) -> Error {
    let (line, column) = line_col(text, offset.min(text.len()));
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Parses a matrix file into a matrix over `Q[q^{±1/D}]`.
pub fn parse_matrix(text: &str) -> Result<RingMatrix> {
    let doc: Value = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let rows = doc
        .get("entries")
        .and_then(Value::as_array)
        .ok_or_else(|| doc_error(text, 0, "missing \"entries\" array"))?;
    let n = rows.len();
    if let Some(declared) = doc.get("n") {
        if declared.as_u64() != Some(n as u64) {
            return Err(doc_error(
                text,
                text.find("\"n\"").unwrap_or(0),
                format!("\"n\" does not match {n} rows"),
            ));
        }
    }
    let offsets = entry_offsets(text);
    let mut entries = Vec::with_capacity(n * n);
    for (i, row) in rows.iter().enumerate() {
        let row = row.as_array().filter(|r| r.len() == n).ok_or_else(|| {
            doc_error(
                text,
                offsets.get(i * n).copied().unwrap_or(0),
                format!("row {} must have {n} entries", i + 1),
            )
        })?;
        for (j, v) in row.iter().enumerate() {
            let at = offsets.get(i * n + j).copied().unwrap_or(0);
            let value = match v {
                Value::String(s) => parse_expr_at(s).map_err(|e| doc_error(text, at + e.offset, e.message))?,
                Value::Number(num) => match num.as_i64() {
                    Some(k) => Laurent::from_int(k),
                    None => {
                        return Err(doc_error(
                            text,
                            at,
                            "numeric entries must be integers; use a string for fractions",
                        ))
                    }
                },
                _ => return Err(doc_error(text, at, "entries must be strings or integers")),
            };
            entries.push(value);
        }
    }
    Ok(Matrix::from_vec(n, n, entries))
}

/// Parses a matrix file whose entries are all constants.
pub fn parse_rat_matrix(text: &str) -> Result<RatMatrix> {
    let m = parse_matrix(text)?;
    let offsets = entry_offsets(text);
    m.try_map(|i, j, v| {
        v.as_constant().ok_or_else(|| {
            doc_error(
                text,
                offsets.get(i * m.cols() + j).copied().unwrap_or(0),
                "expected a constant",
            )
        })
    })
}

/// Canonical matrix file text.
pub fn print_matrix(m: &RingMatrix) -> String {
    let entries: Vec<Vec<String>> = (0..m.rows())
        .map(|i| m.row(i).iter().map(ToString::to_string).collect())
        .collect();
    print_entries(m.rows(), &entries)
}

pub fn print_rat_matrix(m: &RatMatrix) -> String {
    let entries: Vec<Vec<String>> = (0..m.rows())
        .map(|i| m.row(i).iter().map(format_rat).collect())
        .collect();
    print_entries(m.rows(), &entries)
}

fn print_entries(n: usize, entries: &[Vec<String>]) -> String {
    let rows: Vec<String> = entries
        .iter()
        .map(|r| {
            let cells: Vec<String> = r.iter().map(|c| Value::String(c.clone()).to_string()).collect();
            format!("    [{}]", cells.join(", "))
        })
        .collect();
    format!("{{\n  \"n\": {n},\n  \"entries\": [\n{}\n  ]\n}}\n", rows.join(",\n"))
}
