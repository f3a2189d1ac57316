use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;

use super::ExprError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
    Semi,
    DotDot,
    Eq,
    Ne,
    Le,
    Ge,
    Lt,
    Gt,
    End,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        use alloc::string::ToString;
        match self {
            Tok::Int(n) => n.to_string(),
            Tok::Ident(s) => alloc::format!("`{s}`"),
            Tok::End => "end of input".into(),
            other => alloc::format!("`{}`", other.symbol()),
        }
    }

    fn symbol(&self) -> &'static str {
        match self {
            Tok::Plus => "+",
            Tok::Minus => "-",
            Tok::Star => "*",
            Tok::Slash => "/",
            Tok::Caret => "^",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::Comma => ",",
            Tok::Semi => ";",
            Tok::DotDot => "..",
            Tok::Eq => "=",
            Tok::Ne => "!=",
            Tok::Le => "<=",
            Tok::Ge => ">=",
            Tok::Lt => "<",
            Tok::Gt => ">",
            _ => "",
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

/// Tokenize one logical line. Columns are 1-based and counted in chars.
pub(crate) fn tokenize(src: &str, line: usize, first_col: usize) -> Result<Vec<Token>, ExprError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = first_col + i;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c == '#' {
            break;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            let n = digits.parse::<BigInt>().expect("ascii digits");
            out.push(Token { tok: Tok::Int(n), line, col });
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token { tok: Tok::Ident(chars[start..i].iter().collect()), line, col });
            continue;
        }
        let next = chars.get(i + 1).copied();
        let (tok, width) = match (c, next) {
            ('.', Some('.')) => (Tok::DotDot, 2),
            ('!', Some('=')) => (Tok::Ne, 2),
            ('<', Some('=')) => (Tok::Le, 2),
            ('>', Some('=')) => (Tok::Ge, 2),
            ('<', _) => (Tok::Lt, 1),
            ('>', _) => (Tok::Gt, 1),
            ('=', _) => (Tok::Eq, 1),
            ('+', _) => (Tok::Plus, 1),
            ('-', _) => (Tok::Minus, 1),
            ('*', _) => (Tok::Star, 1),
            ('/', _) => (Tok::Slash, 1),
            ('^', _) => (Tok::Caret, 1),
            ('(', _) => (Tok::LParen, 1),
            (')', _) => (Tok::RParen, 1),
            (',', _) => (Tok::Comma, 1),
            (';', _) => (Tok::Semi, 1),
            _ => {
                return Err(ExprError::Syntax { line, col, expected: "a token".into() });
            }
        };
        out.push(Token { tok, line, col });
        i += width;
    }
    out.push(Token { tok: Tok::End, line, col: first_col + chars.len() });
    Ok(out)
}
