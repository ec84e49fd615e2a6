//! Textual collaboration DSL.
//!
//! ```text
//! pool Customer {
//!   start(enb:e0 -> e1)
//!   receiveTask(e1, msg:Offer -> e2)
//!   end(e2 -> cmp:e3)
//! }
//! ```
//!
//! Keywords are the element constructor names; `#` starts a line comment;
//! `||` between elements or pools is accepted and ignored.

mod lexer;
mod pretty;

use std::fmt;

use thiserror::Error;

use crate::model::{validate, Branch, Collaboration, Diagnostic, Element, Pool, Process};

pub use lexer::SourceSpan;
use lexer::{tokenize, Token, TokenKind};
pub use pretty::pretty;

/// Sub-process nesting deeper than this is rejected, which keeps the
/// recursive descent bounded on adversarial input.
const MAX_NESTING: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyntaxError {
    pub span: SourceSpan,
    pub expected: Vec<String>,
    pub found: String,
}

impl fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: expected ", self.span)?;
        match self.expected.as_slice() {
            [one] => write!(f, "{one}")?,
            many => write!(f, "one of {}", many.join(", "))?,
        }
        write!(f, ", found {}", self.found)
    }
}

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("syntax error at {0}")]
    Syntax(SyntaxError),
    #[error("invalid model: {}", .0.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("; "))]
    Validation(Vec<Diagnostic>),
}

const ELEMENT_KEYWORDS: &[&str] = &[
    "start",
    "end",
    "startMsg",
    "endMsg",
    "terminate",
    "eventBased",
    "andSplit",
    "xorSplit",
    "andJoin",
    "xorJoin",
    "task",
    "receiveTask",
    "sendTask",
    "emptyTask",
    "catchEvent",
    "throwEvent",
    "subProcess",
];

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    depth: usize,
}

type PResult<T> = Result<T, SyntaxError>;

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if t.kind != TokenKind::Eof {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, expected: &[&str]) -> PResult<T> {
        let t = self.peek();
        Err(SyntaxError {
            span: t.span,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: t.kind.describe(),
        })
    }

    fn expect(&mut self, kind: TokenKind) -> PResult<()> {
        if self.peek().kind == kind {
            self.bump();
            Ok(())
        } else {
            self.error(&[&kind.describe()])
        }
    }

    fn ident(&mut self) -> PResult<String> {
        match &self.peek().kind {
            TokenKind::Ident(s) => {
                let s = s.clone();
                self.bump();
                Ok(s)
            }
            _ => self.error(&["identifier"]),
        }
    }

    fn keyword(&mut self, kw: &str) -> PResult<()> {
        match &self.peek().kind {
            TokenKind::Ident(s) if s == kw => {
                self.bump();
                Ok(())
            }
            _ => self.error(&[&format!("`{kw}`")]),
        }
    }

    /// `marker:name`, e.g. `enb:e0`.
    fn marked(&mut self, marker: &str) -> PResult<String> {
        self.keyword(marker)?;
        self.expect(TokenKind::Colon)?;
        self.ident()
    }

    fn skip_parallel(&mut self) {
        while self.peek().kind == TokenKind::Parallel {
            self.bump();
        }
    }

    fn collaboration(&mut self) -> PResult<Collaboration> {
        let mut pools = Vec::new();
        loop {
            self.skip_parallel();
            match &self.peek().kind {
                TokenKind::Eof if !pools.is_empty() => break,
                TokenKind::Ident(s) if s == "pool" => {
                    self.bump();
                    let name = self.ident()?;
                    self.expect(TokenKind::LBrace)?;
                    let process = self.process()?;
                    pools.push(Pool::new(name, process));
                }
                TokenKind::Eof => return self.error(&["`pool`"]),
                _ => return self.error(&["`pool`", "end of input"]),
            }
        }
        Ok(Collaboration::new(pools))
    }

    /// Elements up to and including the closing brace.
    fn process(&mut self) -> PResult<Process> {
        let mut elements = Vec::new();
        loop {
            self.skip_parallel();
            if self.peek().kind == TokenKind::RBrace {
                self.bump();
                return Ok(Process::new(elements));
            }
            elements.push(self.element()?);
        }
    }

    fn edge_set(&mut self) -> PResult<Vec<String>> {
        self.expect(TokenKind::LBrace)?;
        let mut out = vec![self.ident()?];
        while self.peek().kind == TokenKind::Comma {
            self.bump();
            out.push(self.ident()?);
        }
        self.expect(TokenKind::RBrace)?;
        Ok(out)
    }

    /// `in, msg:M -> out`
    fn in_msg_out(&mut self) -> PResult<(String, String, String)> {
        let input = self.ident()?;
        self.expect(TokenKind::Comma)?;
        let msg = self.marked("msg")?;
        self.expect(TokenKind::Arrow)?;
        let out = self.ident()?;
        Ok((input, msg, out))
    }

    fn in_out(&mut self) -> PResult<(String, String)> {
        let input = self.ident()?;
        self.expect(TokenKind::Arrow)?;
        let out = self.ident()?;
        Ok((input, out))
    }

    fn element(&mut self) -> PResult<Element> {
        let kw = match &self.peek().kind {
            TokenKind::Ident(s) if ELEMENT_KEYWORDS.contains(&s.as_str()) => s.clone(),
            _ => {
                let mut expected: Vec<&str> = vec!["`}`"];
                expected.extend(ELEMENT_KEYWORDS.iter().copied());
                return self.error(&expected);
            }
        };
        self.bump();
        self.expect(TokenKind::LParen)?;
        let el = match kw.as_str() {
            "start" => {
                let enb = self.marked("enb")?;
                self.expect(TokenKind::Arrow)?;
                Element::Start { enb, out: self.ident()? }
            }
            "startMsg" => {
                let enb = self.marked("enb")?;
                self.expect(TokenKind::Comma)?;
                let msg = self.marked("msg")?;
                self.expect(TokenKind::Arrow)?;
                Element::StartMsg { enb, msg, out: self.ident()? }
            }
            "end" => {
                let input = self.ident()?;
                self.expect(TokenKind::Arrow)?;
                Element::End { input, cmp: self.marked("cmp")? }
            }
            "endMsg" => {
                let input = self.ident()?;
                self.expect(TokenKind::Comma)?;
                let msg = self.marked("msg")?;
                self.expect(TokenKind::Arrow)?;
                Element::EndMsg { input, msg, cmp: self.marked("cmp")? }
            }
            "terminate" => Element::Terminate { input: self.ident()? },
            "eventBased" => {
                let input = self.ident()?;
                self.expect(TokenKind::Arrow)?;
                self.expect(TokenKind::LBrace)?;
                let mut branches = Vec::new();
                loop {
                    let msg = self.marked("msg")?;
                    self.expect(TokenKind::Arrow)?;
                    branches.push(Branch { msg, out: self.ident()? });
                    if self.peek().kind == TokenKind::Comma {
                        self.bump();
                    } else {
                        break;
                    }
                }
                self.expect(TokenKind::RBrace)?;
                Element::EventBased { input, branches }
            }
            "andSplit" | "xorSplit" => {
                let input = self.ident()?;
                self.expect(TokenKind::Arrow)?;
                let outs = self.edge_set()?;
                if kw == "andSplit" {
                    Element::AndSplit { input, outs }
                } else {
                    Element::XorSplit { input, outs }
                }
            }
            "andJoin" | "xorJoin" => {
                let ins = self.edge_set()?;
                self.expect(TokenKind::Arrow)?;
                let out = self.ident()?;
                if kw == "andJoin" {
                    Element::AndJoin { ins, out }
                } else {
                    Element::XorJoin { ins, out }
                }
            }
            "task" => {
                let (input, out) = self.in_out()?;
                Element::Task { input, out }
            }
            "emptyTask" => {
                let (input, out) = self.in_out()?;
                Element::EmptyTask { input, out }
            }
            "receiveTask" => {
                let (input, msg, out) = self.in_msg_out()?;
                Element::ReceiveTask { input, msg, out }
            }
            "sendTask" => {
                let (input, msg, out) = self.in_msg_out()?;
                Element::SendTask { input, msg, out }
            }
            "catchEvent" => {
                let (input, msg, out) = self.in_msg_out()?;
                Element::CatchEvent { input, msg, out }
            }
            "throwEvent" => {
                let (input, msg, out) = self.in_msg_out()?;
                Element::ThrowEvent { input, msg, out }
            }
            "subProcess" => {
                let (input, out) = self.in_out()?;
                self.expect(TokenKind::RParen)?;
                if self.depth >= MAX_NESTING {
                    return self.error(&["shallower sub-process nesting"]);
                }
                self.expect(TokenKind::LBrace)?;
                self.depth += 1;
                let body = self.process()?;
                self.depth -= 1;
                return Ok(Element::SubProcess { input, body, out });
            }
            _ => unreachable!("keyword list and match arms agree"),
        };
        self.expect(TokenKind::RParen)?;
        Ok(el)
    }
}

/// Parses DSL text without validating the result.
pub fn parse_unvalidated(text: &str) -> Result<Collaboration, SyntaxError> {
    let mut p = Parser { tokens: tokenize(text), pos: 0, depth: 0 };
    p.collaboration()
}

/// Parses DSL text and rejects models with validation errors.
pub fn parse(text: &str) -> Result<Collaboration, ParseError> {
    let model = parse_unvalidated(text).map_err(ParseError::Syntax)?;
    let errors: Vec<_> = validate(&model).into_iter().filter(|d| d.is_error()).collect();
    if errors.is_empty() {
        Ok(model)
    } else {
        Err(ParseError::Validation(errors))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const CUSTOMER: &str = "pool Customer { start(enb:e0 -> e1) xorJoin({e1,e3} -> e2) \
        receiveTask(e2, msg:Offer -> e4) xorSplit(e4 -> {e3,e5}) sendTask(e5, msg:Travel -> e6) \
        catchEvent(e6, msg:Confirmation -> e7) sendTask(e7, msg:Payment -> e8) \
        catchEvent(e8, msg:Ticket -> e9) end(e9 -> cmp:e10) }";

    #[test]
    fn customer_listing() {
        // Alone the pool has unmatched messages, so only the syntax is checked.
        let m = parse_unvalidated(CUSTOMER).unwrap();
        assert_eq!(m.pools.len(), 1);
        assert_eq!(m.pools[0].name, "Customer");
        assert_eq!(m.pools[0].process.elements.len(), 9);
        assert_eq!(
            m.pools[0].process.elements[2],
            Element::ReceiveTask { input: "e2".into(), msg: "Offer".into(), out: "e4".into() }
        );
        assert!(matches!(parse(CUSTOMER), Err(ParseError::Validation(_))));
    }

    #[test]
    fn minimal() {
        let m = parse("pool A { start(enb:a -> b) end(b -> cmp:c) }").unwrap();
        assert_eq!(m.pools.len(), 1);
        assert_eq!(m.pools[0].process.elements.len(), 2);
    }

    #[test]
    fn dangling_edge_rejected() {
        match parse("pool A { start(enb:a -> b) }") {
            Err(ParseError::Validation(d)) => {
                assert!(d.iter().any(|d| d.kind.rule_id() == "missing-end"));
                assert!(d.iter().any(|d| d.kind.rule_id() == "missing-edge-target"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn parallel_sugar_and_comments() {
        let a = parse("# two pools\npool A { start(enb:a -> b) || end(b -> cmp:c) } || pool B { start(enb:x -> y) end(y -> cmp:z) }").unwrap();
        let b = parse("pool A { start(enb:a -> b) end(b -> cmp:c) } pool B { start(enb:x -> y) end(y -> cmp:z) }").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn syntax_errors_point_at_offender() {
        let e = parse_unvalidated("pool A { start(enb a -> b) }").unwrap_err();
        assert_eq!(e.span, SourceSpan { line: 1, column: 20, length: 1 });
        assert_eq!(e.expected, vec!["`:`"]);

        let e = parse_unvalidated("pool A { start(enb:a -> b)").unwrap_err();
        assert_eq!(e.found, "end of input");
        assert_eq!(e.span.column, 26);

        let e = parse_unvalidated("").unwrap_err();
        assert_eq!(e.expected, vec!["`pool`"]);
    }

    #[test]
    fn deep_nesting_is_rejected_not_overflowing() {
        let mut text = String::from("pool A { start(enb:a -> b) ");
        for i in 0..200 {
            text.push_str(&format!("subProcess(x{i} -> y{i}) {{ "));
        }
        assert!(parse_unvalidated(&text).is_err());
    }
}
