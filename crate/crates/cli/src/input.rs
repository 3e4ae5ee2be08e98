//! The `.lg` input format: a line-oriented description of a quiver with
//! relations, an optional coefficient field, and optional Frobenius
//! exponents per arrow.
//!
//! ```text
//! # comment
//! field 2 2 111
//! vertices 1 2 3
//! arrow alpha 1 2 frob 1
//! relations beta*delta delta*epsilon
//! ```
//!
//! Sections may appear in any order and may repeat; `b*a` denotes the
//! length-2 path `a` then `b`.

use std::collections::BTreeMap;
use std::fmt;

use gentle_core::galois::{FiniteField, Sigma};
use gentle_core::quiver::{validate_locally_gentle, LocallyGentlePair, PairError, Quiver};

#[derive(Debug)]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "{}", self.message)
        } else {
            write!(f, "line {}: {}", self.line, self.message)
        }
    }
}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        message: message.into(),
    }
}

/// Parsed but not yet validated content of an `.lg` file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputDocument {
    pub field: Option<(u64, usize, Vec<u64>)>,
    pub vertices: Vec<String>,
    /// `(name, tail, head, frobenius exponent)`.
    pub arrows: Vec<(String, String, String, Option<usize>)>,
    /// `(outer, inner)` pairs.
    pub relations: Vec<(String, String)>,
}

/// Digit string low-degree-first, or comma-separated for large primes.
pub fn parse_coeffs(text: &str) -> Option<Vec<u64>> {
    if text.contains(',') {
        text.split(',').map(|t| t.trim().parse().ok()).collect()
    } else {
        text.chars()
            .map(|c| c.to_digit(10).map(u64::from))
            .collect()
    }
}

pub fn parse(text: &str) -> Result<InputDocument, ParseError> {
    let mut doc = InputDocument {
        field: None,
        vertices: Vec::new(),
        arrows: Vec::new(),
        relations: Vec::new(),
    };
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens[0] {
            "field" => {
                if tokens.len() != 4 {
                    return Err(err(line_no, "expected `field p n coeffs`"));
                }
                let p: u64 = tokens[1]
                    .parse()
                    .map_err(|_| err(line_no, "invalid prime"))?;
                let n: usize = tokens[2]
                    .parse()
                    .map_err(|_| err(line_no, "invalid degree"))?;
                let coeffs = parse_coeffs(tokens[3])
                    .ok_or_else(|| err(line_no, "invalid modulus coefficients"))?;
                if doc.field.is_some() {
                    return Err(err(line_no, "duplicate field line"));
                }
                doc.field = Some((p, n, coeffs));
            }
            "vertices" => {
                doc.vertices
                    .extend(tokens[1..].iter().map(|t| t.to_string()));
            }
            "arrow" => {
                if tokens.len() != 4 && tokens.len() != 6 {
                    return Err(err(line_no, "expected `arrow name tail head [frob k]`"));
                }
                let frob = if tokens.len() == 6 {
                    if tokens[4] != "frob" {
                        return Err(err(line_no, "expected `frob k` after the head vertex"));
                    }
                    Some(
                        tokens[5]
                            .parse()
                            .map_err(|_| err(line_no, "invalid Frobenius exponent"))?,
                    )
                } else {
                    None
                };
                doc.arrows.push((
                    tokens[1].to_string(),
                    tokens[2].to_string(),
                    tokens[3].to_string(),
                    frob,
                ));
            }
            "relations" => {
                for t in &tokens[1..] {
                    let mut parts = t.split('*');
                    match (parts.next(), parts.next(), parts.next()) {
                        (Some(b), Some(a), None) if !b.is_empty() && !a.is_empty() => {
                            doc.relations.push((b.to_string(), a.to_string()));
                        }
                        _ => return Err(err(line_no, format!("malformed relation `{t}`"))),
                    }
                }
            }
            other => {
                return Err(err(line_no, format!("unknown directive `{other}`")));
            }
        }
    }
    if doc.vertices.is_empty() {
        return Err(err(0, "no vertices"));
    }
    Ok(doc)
}

/// Canonical rendering; `parse(render(doc)) == doc`.
#[allow(dead_code)]
pub fn render(doc: &InputDocument) -> String {
    let mut out = String::new();
    if let Some((p, n, coeffs)) = &doc.field {
        let cs: Vec<String> = coeffs.iter().map(|c| c.to_string()).collect();
        let joined = if *p < 10 {
            cs.join("")
        } else {
            cs.join(",")
        };
        out.push_str(&format!("field {p} {n} {joined}\n"));
    }
    out.push_str(&format!("vertices {}\n", doc.vertices.join(" ")));
    for (name, tail, head, frob) in &doc.arrows {
        match frob {
            Some(k) => out.push_str(&format!("arrow {name} {tail} {head} frob {k}\n")),
            None => out.push_str(&format!("arrow {name} {tail} {head}\n")),
        }
    }
    if !doc.relations.is_empty() {
        let rels: Vec<String> = doc
            .relations
            .iter()
            .map(|(b, a)| format!("{b}*{a}"))
            .collect();
        out.push_str(&format!("relations {}\n", rels.join(" ")));
    }
    out
}

pub enum BuildError {
    Parse(String),
    Validation(PairError),
}

/// Validated contents: the pair, the automorphism assignment, and the
/// field when one was declared. Without a field every arrow becomes a free
/// symbolic generator; with one, `frob k` annotations become Frobenius
/// powers (identity by default).
pub struct BuiltInput {
    pub pair: LocallyGentlePair,
    pub sigma: Sigma,
    pub field: Option<FiniteField>,
}

pub fn build(doc: &InputDocument) -> Result<BuiltInput, BuildError> {
    let field = match &doc.field {
        Some((p, n, coeffs)) => Some(
            FiniteField::new(*p, *n, coeffs.clone())
                .map_err(|e| BuildError::Parse(e.to_string()))?,
        ),
        None => None,
    };
    let quiver = Quiver::new(
        doc.vertices.clone(),
        doc.arrows
            .iter()
            .map(|(n, t, h, _)| (n.clone(), t.clone(), h.clone()))
            .collect(),
    )
    .map_err(|e| BuildError::Parse(e.to_string()))?;
    let pair = validate_locally_gentle(quiver, &doc.relations).map_err(BuildError::Validation)?;
    let sigma = match &field {
        Some(f) => {
            let mut exps = BTreeMap::new();
            for (name, _, _, frob) in &doc.arrows {
                if let Some(k) = frob {
                    exps.insert(pair.quiver().arrow_id(name).unwrap(), *k);
                }
            }
            Sigma::from_frobenius_exponents(&pair, &exps, f.degree())
        }
        None => {
            if doc.arrows.iter().any(|(_, _, _, f)| f.is_some()) {
                return Err(BuildError::Parse(
                    "frob annotations need a field line".to_string(),
                ));
            }
            Sigma::free_symbolic(&pair)
        }
    };
    Ok(BuiltInput { pair, sigma, field })
}
