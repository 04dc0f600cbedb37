use crate::model::Sense;
use crate::rational::{parse_rational, Rational};

use super::{ParseDiagnostic, Severity};

#[derive(Clone, Debug, PartialEq)]
pub(crate) enum Tok {
    Ident(String),
    Number(Rational),
    Param(String),
    Plus,
    Minus,
    Colon,
    Rel(Sense),
}

#[derive(Clone, Debug)]
pub(crate) struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

fn ident_start(c: u8) -> bool {
    c.is_ascii_alphabetic() || c == b'_'
}

fn ident_continue(c: u8) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, b'_' | b'.' | b'[' | b']' | b'(' | b')' | b'#' | b'\'')
}

/// Splits LP text into tokens. `line_offset` shifts reported line numbers
/// when the text is an excerpt of a larger file.
pub(crate) fn lex(text: &str, allow_params: bool, line_offset: usize) -> Result<Vec<Token>, ParseDiagnostic> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let (mut pos, mut line, mut line_start) = (0usize, 1 + line_offset, 0usize);
    let err = |line: usize, col: usize, message: String| ParseDiagnostic { line, column: col, severity: Severity::Error, message };

    while pos < bytes.len() {
        let c = bytes[pos];
        let col = pos - line_start + 1;
        if !c.is_ascii() {
            return Err(err(line, col, format!("non-ASCII byte 0x{c:02x}")));
        }
        match c {
            b'\n' => {
                pos += 1;
                line += 1;
                line_start = pos;
            }
            b' ' | b'\t' | b'\r' => pos += 1,
            b'\\' => {
                while pos < bytes.len() && bytes[pos] != b'\n' {
                    if !bytes[pos].is_ascii() {
                        return Err(err(line, pos - line_start + 1, format!("non-ASCII byte 0x{:02x}", bytes[pos])));
                    }
                    pos += 1;
                }
            }
            b'+' => {
                out.push(Token { tok: Tok::Plus, line, col });
                pos += 1;
            }
            b'-' => {
                out.push(Token { tok: Tok::Minus, line, col });
                pos += 1;
            }
            b':' => {
                out.push(Token { tok: Tok::Colon, line, col });
                pos += 1;
            }
            b'<' | b'>' | b'=' => {
                let next = bytes.get(pos + 1).copied();
                let (sense, len) = match (c, next) {
                    (b'<', Some(b'=')) | (b'=', Some(b'<')) => (Sense::Le, 2),
                    (b'>', Some(b'=')) | (b'=', Some(b'>')) => (Sense::Ge, 2),
                    (b'<', _) => (Sense::Lt, 1),
                    (b'>', _) => (Sense::Gt, 1),
                    _ => (Sense::Eq, 1),
                };
                out.push(Token { tok: Tok::Rel(sense), line, col });
                pos += len;
            }
            b'$' => {
                if !allow_params {
                    return Err(err(line, col, "parameter placeholders are only allowed in model templates".into()));
                }
                if bytes.get(pos + 1) != Some(&b'{') {
                    return Err(err(line, col, "expected `{` after `$`".into()));
                }
                let start = pos + 2;
                let mut end = start;
                while end < bytes.len() && (bytes[end].is_ascii_alphanumeric() || bytes[end] == b'_') {
                    end += 1;
                }
                if end == start || bytes.get(end) != Some(&b'}') || !ident_start(bytes[start]) {
                    return Err(err(line, col, "malformed parameter placeholder, expected ${name}".into()));
                }
                out.push(Token { tok: Tok::Param(text[start..end].to_string()), line, col });
                pos = end + 1;
            }
            b'0'..=b'9' | b'.' => {
                let end = scan_number(bytes, pos);
                if end == pos {
                    return Err(err(line, col, "unexpected `.`".into()));
                }
                let lexeme = &text[pos..end];
                let value = parse_rational(lexeme).map_err(|e| err(line, col, e.to_string()))?;
                out.push(Token { tok: Tok::Number(value), line, col });
                pos = end;
            }
            c if ident_start(c) => {
                let mut end = pos + 1;
                while end < bytes.len() && ident_continue(bytes[end]) {
                    end += 1;
                }
                out.push(Token { tok: Tok::Ident(text[pos..end].to_string()), line, col });
                pos = end;
            }
            other => return Err(err(line, col, format!("unexpected character {:?}", other as char))),
        }
    }
    Ok(out)
}

/// End of the numeric literal starting at `start` (exclusive).
fn scan_number(bytes: &[u8], start: usize) -> usize {
    let digits = |mut p: usize| {
        while p < bytes.len() && bytes[p].is_ascii_digit() {
            p += 1;
        }
        p
    };
    let mut p = digits(start);
    let whole_len = p - start;
    let mut decimal = false;
    if p < bytes.len() && bytes[p] == b'.' {
        let after = digits(p + 1);
        if whole_len == 0 && after == p + 1 {
            return start;
        }
        decimal = true;
        p = after;
    }
    if p < bytes.len() && matches!(bytes[p], b'e' | b'E') {
        let mut q = p + 1;
        if q < bytes.len() && matches!(bytes[q], b'+' | b'-') {
            q += 1;
        }
        if q < bytes.len() && bytes[q].is_ascii_digit() {
            return digits(q);
        }
        return p;
    }
    if !decimal && p < bytes.len() && bytes[p] == b'/' && bytes.get(p + 1).is_some_and(u8::is_ascii_digit) {
        p = digits(p + 1);
    }
    p
}
