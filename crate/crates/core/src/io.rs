//! The line-oriented certificate DSL and the structured (JSON) format.
//!
//! DSL grammar: `#` starts a comment (`# name: X` carries the document
//! name), the first non-comment line is `init ((a,b),(c),...)`, and every
//! following line holds one move: `T1 d` or `T2 i` or `T3 i j` ... `T6 i j`
//! with 1-based decimal indices. Serialization is canonical: single-space
//! separators, no trailing whitespace, newline-terminated lines.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::laws::MoveSequence;
use crate::state::{Move, State};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IoError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("line {line}: {msg}")]
    Domain { line: usize, msg: String },
    #[error("schema error: {0}")]
    Schema(String),
}

/// A move sequence plus its optional document name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceDocument {
    pub name: Option<String>,
    pub seq: MoveSequence,
}

impl SequenceDocument {
    pub fn new(seq: MoveSequence) -> Self {
        SequenceDocument { name: None, seq }
    }

    pub fn named(name: impl Into<String>, seq: MoveSequence) -> Self {
        SequenceDocument {
            name: Some(name.into()),
            seq,
        }
    }
}

fn parse_err(line: usize, msg: impl Into<String>) -> IoError {
    IoError::Parse {
        line,
        msg: msg.into(),
    }
}

fn domain_err(line: usize, msg: impl Into<String>) -> IoError {
    IoError::Domain {
        line,
        msg: msg.into(),
    }
}

struct Scanner<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
}

impl Scanner<'_> {
    fn skip_ws(&mut self) {
        while matches!(self.chars.peek(), Some(c) if c.is_whitespace()) {
            self.chars.next();
        }
    }

    fn expect(&mut self, want: char) -> Result<(), IoError> {
        self.skip_ws();
        match self.chars.next() {
            Some(c) if c == want => Ok(()),
            Some(c) => Err(parse_err(
                self.line,
                format!("expected '{want}', found '{c}'"),
            )),
            None => Err(parse_err(
                self.line,
                format!("expected '{want}', found end of line"),
            )),
        }
    }

    fn peek_is(&mut self, want: char) -> bool {
        self.skip_ws();
        self.chars.peek() == Some(&want)
    }

    fn integer(&mut self) -> Result<i64, IoError> {
        self.skip_ws();
        let negative = if self.chars.peek() == Some(&'-') {
            self.chars.next();
            true
        } else {
            false
        };
        let mut digits = 0usize;
        let mut value: i64 = 0;
        while let Some(&c) = self.chars.peek() {
            let d = match c.to_digit(10) {
                Some(d) => d as i64,
                None => break,
            };
            self.chars.next();
            digits += 1;
            // Accumulate negatively; i64::MIN has no positive mirror.
            value = value
                .checked_mul(10)
                .and_then(|v| v.checked_sub(d))
                .ok_or_else(|| parse_err(self.line, "integer literal out of range"))?;
        }
        if digits == 0 {
            return Err(parse_err(self.line, "expected an integer"));
        }
        if negative {
            Ok(value)
        } else {
            value
                .checked_neg()
                .ok_or_else(|| parse_err(self.line, "integer literal out of range"))
        }
    }

    fn end(&mut self) -> Result<(), IoError> {
        self.skip_ws();
        match self.chars.peek() {
            None => Ok(()),
            Some(c) => Err(parse_err(
                self.line,
                format!("unexpected '{c}' after state"),
            )),
        }
    }
}

fn parse_state(text: &str, line: usize) -> Result<State, IoError> {
    let mut sc = Scanner {
        chars: text.chars().peekable(),
        line,
    };
    sc.expect('(')?;
    let mut tuples = Vec::new();
    loop {
        sc.expect('(')?;
        let mut tuple = Vec::new();
        if !sc.peek_is(')') {
            loop {
                tuple.push(sc.integer()?);
                if sc.peek_is(',') {
                    sc.expect(',')?;
                } else {
                    break;
                }
            }
        }
        sc.expect(')')?;
        tuples.push(tuple);
        if sc.peek_is(',') {
            sc.expect(',')?;
        } else {
            break;
        }
    }
    sc.expect(')')?;
    sc.end()?;
    State::new(tuples).map_err(|e| domain_err(line, e.to_string()))
}

fn parse_index(token: &str, line: usize) -> Result<usize, IoError> {
    token
        .parse::<usize>()
        .map_err(|_| parse_err(line, format!("expected a 1-based index, found '{token}'")))
}

fn parse_move(text: &str, line: usize) -> Result<Move, IoError> {
    let tokens: Vec<&str> = text.split_whitespace().collect();
    let arity = |want: usize| {
        if tokens.len() == want + 1 {
            Ok(())
        } else {
            Err(parse_err(
                line,
                format!("{} takes {want} index argument(s)", tokens[0]),
            ))
        }
    };
    let domain = |e: crate::state::MoveError| domain_err(line, e.to_string());
    match tokens[0] {
        "T1" => {
            arity(1)?;
            Move::t1(parse_index(tokens[1], line)?).map_err(domain)
        }
        "T2" => {
            arity(1)?;
            Move::t2(parse_index(tokens[1], line)?).map_err(domain)
        }
        kw @ ("T3" | "T4" | "T5" | "T6") => {
            arity(2)?;
            let i = parse_index(tokens[1], line)?;
            let j = parse_index(tokens[2], line)?;
            match kw {
                "T3" => Move::t3(i, j),
                "T4" => Move::t4(i, j),
                "T5" => Move::t5(i, j),
                _ => Move::t6(i, j),
            }
            .map_err(domain)
        }
        other => Err(parse_err(
            line,
            format!("expected a move keyword T1..T6, found '{other}'"),
        )),
    }
}

/// Parse the line-oriented DSL.
pub fn parse_sequence(text: &str) -> Result<SequenceDocument, IoError> {
    let mut name = None;
    let mut init = None;
    let mut moves = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(comment) = trimmed.strip_prefix('#') {
            if let Some(n) = comment.trim().strip_prefix("name:") {
                name = Some(n.trim().to_string());
            }
            continue;
        }
        if init.is_none() {
            let rest = trimmed
                .strip_prefix("init")
                .ok_or_else(|| parse_err(line, format!("expected 'init', found '{trimmed}'")))?;
            init = Some(parse_state(rest, line)?);
        } else {
            moves.push(parse_move(trimmed, line)?);
        }
    }
    let init = init.ok_or_else(|| parse_err(text.lines().count() + 1, "missing init line"))?;
    Ok(SequenceDocument {
        name,
        seq: MoveSequence::new(init, moves),
    })
}

/// Canonical DSL text for a document. `parse_sequence` inverts it.
pub fn serialize_sequence(doc: &SequenceDocument) -> String {
    let mut out = String::new();
    if let Some(name) = &doc.name {
        out.push_str(&format!("# name: {name}\n"));
    }
    out.push_str(&format!("init {}\n", doc.seq.init));
    for mv in &doc.seq.moves {
        out.push_str(&format!("{mv}\n"));
    }
    out
}

/// One move in the structured format: `type` 1..=6 with `d` for joins and
/// `i`/`j` for the value moves. Indices are kept wide so that negative
/// inputs surface as schema errors rather than parse failures.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructuredMove {
    #[serde(rename = "type")]
    pub kind: u8,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub i: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructuredDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub init: Vec<Vec<i64>>,
    pub moves: Vec<StructuredMove>,
}

pub fn to_structured(doc: &SequenceDocument) -> StructuredDocument {
    let moves = doc
        .seq
        .moves
        .iter()
        .map(|mv| match *mv {
            Move::T1 { d } => StructuredMove {
                kind: 1,
                d: Some(d as i64),
                i: None,
                j: None,
            },
            Move::T2 { i } => StructuredMove {
                kind: 2,
                d: None,
                i: Some(i as i64),
                j: None,
            },
            Move::T3 { i, j } | Move::T4 { i, j } | Move::T5 { i, j } | Move::T6 { i, j } => {
                StructuredMove {
                    kind: mv.kind(),
                    d: None,
                    i: Some(i as i64),
                    j: Some(j as i64),
                }
            }
        })
        .collect();
    StructuredDocument {
        name: doc.name.clone(),
        init: doc.seq.init.tuples().to_vec(),
        moves,
    }
}

fn structured_index(value: Option<i64>, field: &str, at: usize) -> Result<usize, IoError> {
    match value {
        Some(v) if v >= 1 => Ok(v as usize),
        Some(v) => Err(IoError::Schema(format!(
            "move {at}: index {field} must be a positive integer, found {v}"
        ))),
        None => Err(IoError::Schema(format!("move {at}: missing index {field}"))),
    }
}

pub fn from_structured(doc: &StructuredDocument) -> Result<SequenceDocument, IoError> {
    let init = State::new(doc.init.clone()).map_err(|e| IoError::Schema(format!("init: {e}")))?;
    let mut moves = Vec::with_capacity(doc.moves.len());
    for (idx, sm) in doc.moves.iter().enumerate() {
        let at = idx + 1;
        let mv = match sm.kind {
            1 => Move::t1(structured_index(sm.d, "d", at)?),
            2 => Move::t2(structured_index(sm.i, "i", at)?),
            3..=6 => {
                let i = structured_index(sm.i, "i", at)?;
                let j = structured_index(sm.j, "j", at)?;
                match sm.kind {
                    3 => Move::t3(i, j),
                    4 => Move::t4(i, j),
                    5 => Move::t5(i, j),
                    _ => Move::t6(i, j),
                }
            }
            other => {
                return Err(IoError::Schema(format!(
                    "move {at}: unknown move type {other}"
                )))
            }
        }
        .map_err(|e| IoError::Schema(format!("move {at}: {e}")))?;
        moves.push(mv);
    }
    Ok(SequenceDocument {
        name: doc.name.clone(),
        seq: MoveSequence::new(init, moves),
    })
}

/// Parse the structured format from JSON text.
pub fn parse_structured(text: &str) -> Result<SequenceDocument, IoError> {
    let doc: StructuredDocument =
        serde_json::from_str(text).map_err(|e| IoError::Schema(e.to_string()))?;
    from_structured(&doc)
}

/// Serialize to JSON text, newline-terminated.
pub fn serialize_structured(doc: &SequenceDocument) -> String {
    let mut out = serde_json::to_string(&to_structured(doc)).expect("serialization is total");
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn state(tuples: &[&[i64]]) -> State {
        State::new(tuples.iter().map(|t| t.to_vec()).collect()).unwrap()
    }

    #[test]
    fn parse_basic_document() {
        let doc = parse_sequence("init ((0),(0))\nT1 1\nT3 1 2\n").unwrap();
        assert_eq!(doc.seq.init, state(&[&[0], &[0]]));
        assert_eq!(
            doc.seq.moves,
            vec![Move::T1 { d: 1 }, Move::T3 { i: 1, j: 2 }]
        );
        assert_eq!(doc.name, None);
    }

    #[test]
    fn parse_reference_state_and_metadata() {
        let doc = parse_sequence(
            "# name: reference\n# a comment\ninit ((8,-2,-3,1,-4),(5,-1,-2))\nT2 6\n",
        )
        .unwrap();
        assert_eq!(doc.name.as_deref(), Some("reference"));
        assert_eq!(doc.seq.init, state(&[&[8, -2, -3, 1, -4], &[5, -1, -2]]));
        assert_eq!(doc.seq.moves, vec![Move::T2 { i: 6 }]);
    }

    #[test]
    fn parse_rejects_equal_indices_as_domain_error() {
        assert!(matches!(
            parse_sequence("init ((0))\nT3 1 1\n"),
            Err(IoError::Domain { line: 2, .. })
        ));
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        assert!(matches!(
            parse_sequence("init ((0)\n"),
            Err(IoError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_sequence("init ((0))\nT7 1\n"),
            Err(IoError::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_sequence("init ((0))\nT2\n"),
            Err(IoError::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_sequence("# only a comment\n"),
            Err(IoError::Parse { .. })
        ));
    }

    #[test]
    fn parse_detects_integer_overflow() {
        let too_big = "init ((123456789012345678901234567890))\n";
        assert!(matches!(
            parse_sequence(too_big),
            Err(IoError::Parse { .. })
        ));
        let min_ok = format!("init (({}))\n", i64::MIN);
        assert!(parse_sequence(&min_ok).is_ok());
    }

    #[test]
    fn serialize_is_canonical_and_round_trips() {
        let texts = [
            "init ((0),(0))\nT1 1\nT3 1 2\n",
            "init ((8,-2,-3,1,-4),(5,-1,-2))\nT2 6\n",
            "init ((0))\n",
        ];
        for text in texts {
            let doc = parse_sequence(text).unwrap();
            assert_eq!(serialize_sequence(&doc), text);
        }
        let messy = parse_sequence("init ( ( 0 ) , ( 0 ) )\n  T1   1\n").unwrap();
        assert_eq!(serialize_sequence(&messy), "init ((0),(0))\nT1 1\n");
        let named = SequenceDocument::named("x", MoveSequence::new(state(&[&[0]]), vec![]));
        assert_eq!(parse_sequence(&serialize_sequence(&named)).unwrap(), named);
    }

    #[test]
    fn structured_round_trip() {
        let doc = parse_sequence("init ((0),(0))\nT1 1\nT2 1\nT5 1 2\n").unwrap();
        let structured = to_structured(&doc);
        assert_eq!(from_structured(&structured).unwrap(), doc);
        let json = serialize_structured(&doc);
        assert_eq!(parse_structured(&json).unwrap(), doc);
        assert_eq!(
            json,
            "{\"init\":[[0],[0]],\"moves\":[{\"type\":1,\"d\":1},{\"type\":2,\"i\":1},{\"type\":5,\"i\":1,\"j\":2}]}\n"
        );
    }

    #[test]
    fn structured_schema_errors() {
        assert!(matches!(
            parse_structured("{\"init\":[[0]],\"moves\":[{\"type\":7,\"i\":1}]}"),
            Err(IoError::Schema(_))
        ));
        assert!(matches!(
            parse_structured("{\"init\":[[0]],\"moves\":[{\"type\":2,\"i\":-1}]}"),
            Err(IoError::Schema(_))
        ));
        assert!(matches!(
            parse_structured("{\"init\":[[0]],\"moves\":[{\"type\":3,\"i\":1}]}"),
            Err(IoError::Schema(_))
        ));
        assert!(matches!(
            parse_structured("not json"),
            Err(IoError::Schema(_))
        ));
    }
}
