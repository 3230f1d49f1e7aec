//! Spec-string parsing for constructions and graphs, with byte-offset
//! positions in syntax errors.

use std::path::Path;

use diverge_core::graphs::GraphError;
use diverge_core::streams::StreamError;
use diverge_core::{Construction, GraphSpec};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("cannot parse {input:?} at byte {offset}: {message}")]
pub struct ParseError {
    pub input: String,
    pub offset: usize,
    pub message: String,
}

impl ParseError {
    fn new(input: &str, offset: usize, message: impl Into<String>) -> ParseError {
        ParseError {
            input: input.to_string(),
            offset,
            message: message.into(),
        }
    }
}

fn parse_int<T: std::str::FromStr>(input: &str, offset: usize, text: &str) -> Result<T, ParseError> {
    text.parse()
        .map_err(|_| ParseError::new(input, offset, format!("expected an integer, found {text:?}")))
}

/// Grammar: `identity` | `divergent:<i>` | `colliding:<j1,j2,...>` |
/// `blockswap:<i>` | `residueswap:<q>:<i>`.
pub fn parse_construction(s: &str) -> Result<Construction, ParseError> {
    let (kind, rest) = match s.find(':') {
        Some(pos) => (&s[..pos], Some((&s[pos + 1..], pos + 1))),
        None => (s, None),
    };
    let semantic = |e: StreamError| ParseError::new(s, 0, e.to_string());
    match (kind, rest) {
        ("identity", None) => Ok(Construction::identity()),
        ("identity", Some((_, off))) => {
            Err(ParseError::new(s, off, "identity takes no parameters"))
        }
        ("divergent", Some((arg, off))) => {
            Construction::divergent(parse_int(s, off, arg)?).map_err(semantic)
        }
        ("colliding", Some((args, off))) => {
            let mut exponents = Vec::new();
            let mut cursor = off;
            for piece in args.split(',') {
                exponents.push(parse_int::<u32>(s, cursor, piece)?);
                cursor += piece.len() + 1;
            }
            Construction::colliding(exponents).map_err(semantic)
        }
        ("blockswap", Some((arg, off))) => {
            Construction::block_swap(parse_int(s, off, arg)?).map_err(semantic)
        }
        ("residueswap", Some((args, off))) => {
            let (q_text, i_text, i_off) = match args.find(':') {
                Some(pos) => (&args[..pos], &args[pos + 1..], off + pos + 1),
                None => {
                    return Err(ParseError::new(
                        s,
                        off,
                        "residueswap needs two parameters: <q>:<i>",
                    ))
                }
            };
            let q = parse_int(s, off, q_text)?;
            let i = parse_int(s, i_off, i_text)?;
            Construction::residue_block_swap(q, i).map_err(semantic)
        }
        ("divergent" | "colliding" | "blockswap" | "residueswap", None) => Err(ParseError::new(
            s,
            s.len(),
            format!("{kind} needs a parameter after ':'"),
        )),
        _ => Err(ParseError::new(
            s,
            0,
            "unknown construction; expected identity, divergent:<i>, colliding:<j,...>, \
             blockswap:<i> or residueswap:<q>:<i>",
        )),
    }
}

/// Grammar: `distance:<k>` | `complete` | `residue:<q>` | `file:<path>`.
pub fn parse_graph(s: &str) -> Result<GraphSpec, ParseError> {
    let (kind, rest) = match s.find(':') {
        Some(pos) => (&s[..pos], Some((&s[pos + 1..], pos + 1))),
        None => (s, None),
    };
    let semantic = |e: GraphError| ParseError::new(s, 0, e.to_string());
    match (kind, rest) {
        ("complete", None) => Ok(GraphSpec::complete()),
        ("distance", Some((arg, off))) => {
            GraphSpec::distance(parse_int(s, off, arg)?).map_err(semantic)
        }
        ("residue", Some((arg, off))) => {
            GraphSpec::residue(parse_int(s, off, arg)?).map_err(semantic)
        }
        ("file", Some((path, off))) => {
            let text = std::fs::read_to_string(Path::new(path)).map_err(|e| {
                ParseError::new(s, off, format!("cannot read graph file {path:?}: {e}"))
            })?;
            GraphSpec::parse_finite_edges(&text).map_err(semantic)
        }
        _ => Err(ParseError::new(
            s,
            0,
            "unknown graph; expected distance:<k>, complete, residue:<q> or file:<path>",
        )),
    }
}
