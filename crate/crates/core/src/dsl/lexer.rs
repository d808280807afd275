use super::DslError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    Number,
    Ident,
    Op,
    LParen,
    RParen,
    Comma,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub kind: TokenKind,
    pub text: String,
    /// Byte offset of the first character in the source.
    pub offset: usize,
}

impl Token {
    pub fn is_op(&self, op: char) -> bool {
        self.kind == TokenKind::Op && self.text.len() == 1 && self.text.starts_with(op)
    }
}

/// Splits `src` into tokens. Numbers are decimal with an optional fraction
/// (at least one digit after the point) and an optional exponent.
pub fn tokenize(src: &str) -> Result<Vec<Token>, DslError> {
    let bytes = src.as_bytes();
    let mut tokens = Vec::new();
    let mut pos = 0;

    while pos < bytes.len() {
        let ch = bytes[pos];
        let start = pos;
        let kind = match ch {
            b' ' | b'\t' | b'\n' | b'\r' => {
                pos += 1;
                continue;
            }
            b'0'..=b'9' => {
                pos = scan_number(bytes, pos)?;
                TokenKind::Number
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                while pos < bytes.len() && (bytes[pos].is_ascii_alphanumeric() || bytes[pos] == b'_') {
                    pos += 1;
                }
                TokenKind::Ident
            }
            b'+' | b'-' | b'*' | b'/' | b'^' => {
                pos += 1;
                TokenKind::Op
            }
            b'(' => {
                pos += 1;
                TokenKind::LParen
            }
            b')' => {
                pos += 1;
                TokenKind::RParen
            }
            b',' => {
                pos += 1;
                TokenKind::Comma
            }
            _ => {
                let bad = src[start..].chars().next().unwrap_or('?');
                return Err(DslError::lex(start, format!("illegal character {bad:?}")));
            }
        };
        tokens.push(Token {
            kind,
            text: src[start..pos].to_string(),
            offset: start,
        });
    }
    Ok(tokens)
}

fn scan_number(bytes: &[u8], mut pos: usize) -> Result<usize, DslError> {
    let digits = |bytes: &[u8], mut p: usize| {
        let s = p;
        while p < bytes.len() && bytes[p].is_ascii_digit() {
            p += 1;
        }
        (p, p - s)
    };
    pos = digits(bytes, pos).0;
    if pos < bytes.len() && bytes[pos] == b'.' {
        let (end, n) = digits(bytes, pos + 1);
        if n == 0 {
            return Err(DslError::lex(pos + 1, "expected digit after decimal point".into()));
        }
        pos = end;
    }
    if pos < bytes.len() && (bytes[pos] == b'e' || bytes[pos] == b'E') {
        let mut p = pos + 1;
        if p < bytes.len() && (bytes[p] == b'+' || bytes[p] == b'-') {
            p += 1;
        }
        let (end, n) = digits(bytes, p);
        if n == 0 {
            return Err(DslError::lex(p, "expected digit in exponent".into()));
        }
        pos = end;
    }
    Ok(pos)
}
