//! Named PD-code corpora (`name: X[..] X[..]` per line).

use crate::error::{Error, Result};
use crate::knot_io::{parse_pd, KnotDiagram};

const KNOTS_LE8: &str = include_str!("../data/knots_le8.txt");
const KNOTS9_SPOT: &str = include_str!("../data/knots9_spot.txt");

/// One corpus entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedDiagram {
    pub name: String,
    pub pd: String,
    pub knot: KnotDiagram,
}

impl NamedDiagram {
    /// Crossing count encoded in a Rolfsen-style name (`7_4` -> 7), falling
    /// back to the diagram's crossing count.
    pub fn crossing_number(&self) -> usize {
        self.name
            .split('_')
            .next()
            .and_then(|p| p.parse().ok())
            .unwrap_or_else(|| self.knot.m())
    }
}

/// Parses a corpus file. Blank lines and `#` comments are skipped. Lines
/// without a `name:` prefix are named by their line number. Error offsets
/// are byte offsets into `text`.
pub fn parse_corpus(text: &str) -> Result<Vec<NamedDiagram>> {
    let mut out = Vec::new();
    let mut offset = 0;
    for (lineno, line) in text.split_inclusive('\n').enumerate() {
        let start = offset;
        offset += line.len();
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let (name, pd, pd_start) = match line.find(':') {
            Some(p) => (line[..p].trim().to_string(), &line[p + 1..], start + p + 1),
            None => (format!("line{}", lineno + 1), line, start),
        };
        let knot = parse_pd(pd).map_err(|e| match e {
            Error::MalformedToken { offset, detail } => Error::MalformedToken { offset: offset + pd_start, detail },
            other => other,
        })?;
        out.push(NamedDiagram { name, pd: pd.trim().to_string(), knot });
    }
    Ok(out)
}

/// Prime knots with at most 8 crossings.
pub fn knots_le8() -> Vec<NamedDiagram> {
    parse_corpus(KNOTS_LE8).expect("bundled corpus parses")
}

/// Entries of [`knots_le8`] with exactly `n` crossings.
pub fn knots_with_crossings(n: usize) -> Vec<NamedDiagram> {
    knots_le8().into_iter().filter(|k| k.crossing_number() == n).collect()
}

/// The single 9-crossing knot used for spot runs.
pub fn spot_nine() -> NamedDiagram {
    parse_corpus(KNOTS9_SPOT).expect("bundled corpus parses").remove(0)
}
