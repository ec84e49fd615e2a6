use std::fmt;

/// Location of a token in the source text. Lines and columns are 1-based
/// and counted in characters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SourceSpan {
    pub line: usize,
    pub column: usize,
    pub length: usize,
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenKind {
    Ident(String),
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Colon,
    Arrow,
    Parallel,
    /// A character that starts no token.
    Unknown(char),
    Eof,
}

impl TokenKind {
    pub fn describe(&self) -> String {
        match self {
            TokenKind::Ident(s) => format!("`{s}`"),
            TokenKind::LParen => "`(`".into(),
            TokenKind::RParen => "`)`".into(),
            TokenKind::LBrace => "`{`".into(),
            TokenKind::RBrace => "`}`".into(),
            TokenKind::Comma => "`,`".into(),
            TokenKind::Colon => "`:`".into(),
            TokenKind::Arrow => "`->`".into(),
            TokenKind::Parallel => "`||`".into(),
            TokenKind::Unknown(c) => format!("{c:?}"),
            TokenKind::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub span: SourceSpan,
}

pub fn tokenize(text: &str) -> Vec<Token> {
    let chars: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    // Position of the last character, used to anchor the end-of-input token
    // inside the text.
    let mut last = SourceSpan { line: 1, column: 1, length: 1 };

    while i < chars.len() {
        let c = chars[i];
        let span = |length| SourceSpan { line, column: col, length };
        if c == '\n' {
            last = span(1);
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            last = span(1);
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                last = SourceSpan { line, column: col, length: 1 };
                i += 1;
                col += 1;
            }
            continue;
        }
        let (kind, len) = if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            let mut j = i;
            while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                j += 1;
            }
            (TokenKind::Ident(chars[start..j].iter().collect()), j - start)
        } else if c == '-' && chars.get(i + 1) == Some(&'>') {
            (TokenKind::Arrow, 2)
        } else if c == '|' && chars.get(i + 1) == Some(&'|') {
            (TokenKind::Parallel, 2)
        } else {
            let kind = match c {
                '(' => TokenKind::LParen,
                ')' => TokenKind::RParen,
                '{' => TokenKind::LBrace,
                '}' => TokenKind::RBrace,
                ',' => TokenKind::Comma,
                ':' => TokenKind::Colon,
                other => TokenKind::Unknown(other),
            };
            (kind, 1)
        };
        tokens.push(Token { kind, span: span(len) });
        last = SourceSpan { line, column: col + len - 1, length: 1 };
        i += len;
        col += len;
    }
    tokens.push(Token { kind: TokenKind::Eof, span: last });
    tokens
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spans() {
        let toks = tokenize("pool A {\n  start(enb:a -> b) # c\n}");
        let kinds: Vec<_> = toks.iter().map(|t| t.kind.clone()).collect();
        assert_eq!(kinds[0], TokenKind::Ident("pool".into()));
        assert_eq!(toks[3].kind, TokenKind::Ident("start".into()));
        assert_eq!(toks[3].span, SourceSpan { line: 2, column: 3, length: 5 });
        let arrow = toks.iter().find(|t| t.kind == TokenKind::Arrow).unwrap();
        assert_eq!(arrow.span, SourceSpan { line: 2, column: 15, length: 2 });
        assert_eq!(toks.last().unwrap().kind, TokenKind::Eof);
        assert_eq!(toks.last().unwrap().span, SourceSpan { line: 3, column: 1, length: 1 });
    }
}
