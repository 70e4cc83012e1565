//! Text formats for presentations, labelled oriented graphs and Artin graphs.
//!
//! ```text
//! # Example
//! gens: a b c
//! rel: a^-1 b
//! rel: c^-1 b^-1 c a b a^-1 c^-1 b^-1 c^2
//! ```
//!
//! ```text
//! vertices: a b c
//! edge: a b c      # i lambda t
//! ```
//!
//! An Artin graph uses the same layout with an integer label as the third
//! field of each edge: `edge: s t 3`.

use std::collections::HashMap;
use std::fmt;

use npi_core::logs::{Log, LogEdge, PresentationGraph};
use npi_core::presentation::{is_valid_name, Letter, Presentation, Word};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("line {line}, column {col}: expected {expected}")]
    Syntax { line: usize, col: usize, expected: String },
    #[error("line {line}, column {col}: unknown vertex {name:?}")]
    UnknownVertex { line: usize, col: usize, name: String },
}

fn syntax(line: usize, col: usize, expected: impl Into<String>) -> ParseError {
    ParseError::Syntax { line, col, expected: expected.into() }
}

/// A whitespace-separated token with its 1-based column.
struct Token<'a> {
    text: &'a str,
    col: usize,
}

/// Non-empty lines with comments stripped: (line number, directive, tokens,
/// column after the directive).
struct Line<'a> {
    number: usize,
    directive: &'a str,
    directive_col: usize,
    end_col: usize,
    tokens: Vec<Token<'a>>,
}

fn lines(text: &str) -> Result<Vec<Line<'_>>, ParseError> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let number = idx + 1;
        let body = raw.split('#').next().unwrap_or("");
        if body.trim().is_empty() {
            continue;
        }
        let Some(colon) = body.find(':') else {
            let col = body.len() - body.trim_start().len() + 1;
            return Err(syntax(number, col, "a directive such as `gens:` or `rel:`"));
        };
        let directive_col = body.len() - body.trim_start().len() + 1;
        let directive = body[..colon].trim();
        let mut tokens = Vec::new();
        let rest = &body[colon + 1..];
        let mut offset = colon + 1;
        for piece in rest.split_inclusive(char::is_whitespace) {
            let trimmed = piece.trim_end();
            if !trimmed.is_empty() {
                tokens.push(Token { text: trimmed, col: offset + 1 });
            }
            offset += piece.len();
        }
        out.push(Line { number, directive, directive_col, end_col: body.trim_end().len() + 1, tokens });
    }
    Ok(out)
}

fn parse_names(line: &Line<'_>) -> Result<Vec<String>, ParseError> {
    let mut names: Vec<String> = Vec::new();
    for t in &line.tokens {
        if !is_valid_name(t.text) {
            return Err(syntax(line.number, t.col, "a name (letter followed by letters, digits or _)"));
        }
        if names.iter().any(|n| n == t.text) {
            return Err(syntax(line.number, t.col, format!("a new name, {:?} is repeated", t.text)));
        }
        names.push(t.text.to_string());
    }
    Ok(names)
}

fn parse_letter(t: &Token<'_>, line: usize, index: &HashMap<&str, usize>) -> Result<Vec<Letter>, ParseError> {
    let (name, exp) = match t.text.split_once('^') {
        Some((n, e)) => {
            let k: i64 = e
                .parse()
                .map_err(|_| syntax(line, t.col + n.len() + 1, "an integer exponent"))?;
            if k == 0 {
                return Err(syntax(line, t.col + n.len() + 1, "a nonzero exponent"));
            }
            (n, k)
        }
        None => (t.text, 1),
    };
    let Some(&gen) = index.get(name) else {
        return Err(syntax(line, t.col, format!("a declared generator, found {name:?}")));
    };
    let l = if exp > 0 { Letter::pos(gen) } else { Letter::neg(gen) };
    Ok(vec![l; exp.unsigned_abs() as usize])
}

pub fn parse_presentation(text: &str) -> Result<Presentation, ParseError> {
    let ls = lines(text)?;
    let mut gens: Option<Vec<String>> = None;
    let mut relators = Vec::new();
    for line in &ls {
        match (line.directive, &gens) {
            ("gens", None) => gens = Some(parse_names(line)?),
            ("gens", Some(_)) => return Err(syntax(line.number, line.directive_col, "a single `gens:` line")),
            ("rel", None) => return Err(syntax(line.number, line.directive_col, "`gens:` before any `rel:`")),
            ("rel", Some(names)) => {
                if line.tokens.is_empty() {
                    return Err(syntax(line.number, line.end_col, "at least one letter"));
                }
                let index: HashMap<&str, usize> = names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
                let mut letters = Vec::new();
                for t in &line.tokens {
                    letters.extend(parse_letter(t, line.number, &index)?);
                }
                relators.push(Word::new(letters));
            }
            _ => return Err(syntax(line.number, line.directive_col, "`gens:` or `rel:`")),
        }
    }
    let gens = gens.ok_or_else(|| syntax(ls.last().map_or(1, |l| l.number), 1, "a `gens:` line"))?;
    Ok(Presentation::new(gens, relators))
}

/// Inverse of [`parse_presentation`] up to comments and whitespace.
pub fn print_presentation(p: &Presentation) -> String {
    let mut out = format!("gens: {}\n", p.generators.join(" "));
    for r in &p.relators {
        out.push_str(&format!("rel: {}\n", p.format_word(r)));
    }
    out
}

/// Either kind of graph file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GraphFile {
    Log(Log),
    Artin(PresentationGraph),
}

fn lookup(names: &[String], t: &Token<'_>, line: usize) -> Result<usize, ParseError> {
    names
        .iter()
        .position(|n| n == t.text)
        .ok_or_else(|| ParseError::UnknownVertex { line, col: t.col, name: t.text.to_string() })
}

pub fn parse_graph(text: &str) -> Result<GraphFile, ParseError> {
    let ls = lines(text)?;
    let mut vertices: Option<Vec<String>> = None;
    let mut log_edges = Vec::new();
    let mut artin_edges = Vec::new();
    let mut first_edge: Option<(usize, bool)> = None;
    for line in &ls {
        match (line.directive, &vertices) {
            ("vertices", None) => vertices = Some(parse_names(line)?),
            ("vertices", Some(_)) => {
                return Err(syntax(line.number, line.directive_col, "a single `vertices:` line"))
            }
            ("edge", None) => return Err(syntax(line.number, line.directive_col, "`vertices:` before any `edge:`")),
            ("edge", Some(names)) => {
                if line.tokens.len() != 3 {
                    let col = line.tokens.get(3).map_or(line.end_col, |t| t.col);
                    return Err(syntax(line.number, col, "exactly three fields"));
                }
                let third = &line.tokens[2];
                let numeric = third.text.chars().next().is_some_and(|c| c.is_ascii_digit() || c == '-');
                match first_edge {
                    None => first_edge = Some((line.number, numeric)),
                    Some((_, kind)) if kind != numeric => {
                        return Err(syntax(
                            line.number,
                            third.col,
                            if kind { "an integer label like the earlier edges" } else { "a vertex like the earlier edges" },
                        ))
                    }
                    _ => {}
                }
                let a = lookup(names, &line.tokens[0], line.number)?;
                let b = lookup(names, &line.tokens[1], line.number)?;
                if numeric {
                    let m: u32 = third.text.parse().map_err(|_| syntax(line.number, third.col, "a label m >= 2"))?;
                    artin_edges.push((a, b, m));
                } else {
                    let t = lookup(names, third, line.number)?;
                    log_edges.push(LogEdge { i: a, lambda: b, t });
                }
            }
            _ => return Err(syntax(line.number, line.directive_col, "`vertices:` or `edge:`")),
        }
    }
    let vertices = vertices.ok_or_else(|| syntax(ls.last().map_or(1, |l| l.number), 1, "a `vertices:` line"))?;
    Ok(match first_edge {
        Some((_, true)) => GraphFile::Artin(PresentationGraph { vertices, edges: artin_edges }),
        _ => GraphFile::Log(Log { vertices, edges: log_edges }),
    })
}

pub fn parse_log(text: &str) -> Result<Log, ParseError> {
    match parse_graph(text)? {
        GraphFile::Log(l) => Ok(l),
        GraphFile::Artin(_) => Err(syntax(1, 1, "edges of the form `edge: i lambda t`")),
    }
}

pub fn print_log(l: &Log) -> String {
    let mut out = format!("vertices: {}\n", l.vertices.join(" "));
    for e in &l.edges {
        out.push_str(&format!("edge: {} {} {}\n", l.vertices[e.i], l.vertices[e.lambda], l.vertices[e.t]));
    }
    out
}

/// Any of the three input kinds, detected from the first directive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Input {
    Presentation(Presentation),
    Log(Log),
    Artin(PresentationGraph),
}

impl fmt::Display for Input {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Input::Presentation(_) => write!(f, "presentation"),
            Input::Log(_) => write!(f, "log"),
            Input::Artin(_) => write!(f, "artin"),
        }
    }
}

pub fn parse_input(text: &str) -> Result<Input, ParseError> {
    let first = lines(text)?.into_iter().next().map(|l| l.directive.to_string());
    match first.as_deref() {
        Some("vertices") => Ok(match parse_graph(text)? {
            GraphFile::Log(l) => Input::Log(l),
            GraphFile::Artin(g) => Input::Artin(g),
        }),
        _ => parse_presentation(text).map(Input::Presentation),
    }
}
