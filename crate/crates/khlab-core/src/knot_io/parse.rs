//! Text and JSON front ends for PD codes.

use std::collections::HashMap;

use super::{edge_occurrences, KnotDiagram};
use crate::error::{Error, Result};

/// Parses Knot-Atlas style text (`X[5,2,4,1] X[3,6,2,5] ...`, optionally
/// wrapped in `PD[...]`) or a JSON array of 4-element arrays.
pub fn parse_pd(text: &str) -> Result<KnotDiagram> {
    let trimmed = text.trim();
    if trimmed.starts_with('[') {
        return parse_pd_json(trimmed);
    }
    KnotDiagram::new(parse_pd_tuples(text)?)
}

/// Parses a JSON array-of-arrays PD code such as `[[1,5,2,4],[3,1,4,6]]`.
pub fn parse_pd_json(text: &str) -> Result<KnotDiagram> {
    let tuples: Vec<[u32; 4]> = serde_json::from_str(text).map_err(|e| Error::MalformedToken {
        offset: e.column().saturating_sub(1),
        detail: e.to_string(),
    })?;
    KnotDiagram::new(tuples)
}

/// Tokenizes `X[a,b,c,d]` groups without validating the diagram.
pub fn parse_pd_tuples(text: &str) -> Result<Vec<[u32; 4]>> {
    let mut lexer = Lexer { bytes: text.as_bytes(), pos: 0 };
    lexer.skip_separators();
    let wrapped = lexer.eat_keyword("PD[");
    let mut tuples = Vec::new();
    loop {
        lexer.skip_separators();
        match lexer.peek() {
            None => break,
            Some(b']') if wrapped => {
                lexer.pos += 1;
                lexer.skip_separators();
                if lexer.peek().is_some() {
                    return Err(lexer.error("trailing input after PD[...]"));
                }
                return Ok(tuples);
            }
            Some(b'X') => {
                lexer.pos += 1;
                lexer.expect(b'[')?;
                let mut tuple = [0u32; 4];
                for (idx, slot) in tuple.iter_mut().enumerate() {
                    if idx > 0 {
                        lexer.expect(b',')?;
                    }
                    *slot = lexer.number()?;
                }
                lexer.expect(b']')?;
                tuples.push(tuple);
            }
            Some(_) => return Err(lexer.error("expected `X[`")),
        }
    }
    if wrapped {
        return Err(lexer.error("unterminated PD["));
    }
    Ok(tuples)
}

struct Lexer<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Lexer<'_> {
    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn skip_separators(&mut self) {
        while matches!(self.peek(), Some(b) if b.is_ascii_whitespace() || b == b',') {
            self.pos += 1;
        }
    }

    fn skip_spaces(&mut self) {
        while matches!(self.peek(), Some(b) if b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn eat_keyword(&mut self, kw: &str) -> bool {
        if self.bytes[self.pos..].starts_with(kw.as_bytes()) {
            self.pos += kw.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, byte: u8) -> Result<()> {
        self.skip_spaces();
        if self.peek() == Some(byte) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected `{}`", byte as char)))
        }
    }

    fn number(&mut self) -> Result<u32> {
        self.skip_spaces();
        let start = self.pos;
        while matches!(self.peek(), Some(b) if b.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an edge label"));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .expect("ascii digits")
            .parse()
            .map_err(|_| Error::MalformedToken { offset: start, detail: "label overflow".into() })
    }

    fn error(&self, detail: &str) -> Error {
        Error::MalformedToken { offset: self.pos, detail: detail.to_string() }
    }
}

/// Renders a diagram back to `X[a,b,c,d]` text.
pub fn render(k: &KnotDiagram) -> String {
    k.crossings()
        .iter()
        .map(|[a, b, c, d]| format!("X[{a},{b},{c},{d}]"))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Relabels arbitrary positive edge labels so that each component carries a
/// consecutive run that increases along the under-strand direction `a -> c`.
///
/// Each label must still occur exactly twice. Components are numbered in
/// order of their smallest original label.
pub fn normalize_labels(tuples: &[[u32; 4]]) -> Result<Vec<[u32; 4]>> {
    let mut dense: HashMap<u32, u32> = HashMap::new();
    let mut originals: Vec<u32> = tuples.iter().flatten().copied().collect();
    originals.sort_unstable();
    originals.dedup();
    for (i, &l) in originals.iter().enumerate() {
        dense.insert(l, i as u32 + 1);
    }
    let compact: Vec<[u32; 4]> =
        tuples.iter().map(|t| t.map(|l| dense[&l])).collect();
    let edges = 2 * compact.len();
    if originals.len() != edges {
        return Err(Error::EdgeCountError {
            label: originals.len() as u32,
            count: 0,
            max: edges as u32,
        });
    }
    let occ = edge_occurrences(&compact);
    if let Some((label, o)) = occ.iter().enumerate().skip(1).find(|(_, o)| o.len() != 2) {
        return Err(Error::EdgeCountError { label: label as u32, count: o.len(), max: edges as u32 });
    }
    // Orientation is solved on the compact code, but its label-run check
    // does not apply yet, so only the sign solver is used here.
    let signs = super::solve_orientation(&compact)?;
    let incoming = |ci: usize, slot: usize| match slot {
        0 => true,
        2 => false,
        3 => signs[ci] == super::Sign::Positive,
        _ => signs[ci] == super::Sign::Negative,
    };
    let mut relabel = vec![0u32; edges + 1];
    let mut next = 1u32;
    for start in 1..=edges {
        if relabel[start] != 0 {
            continue;
        }
        let mut e = start;
        while relabel[e] == 0 {
            relabel[e] = next;
            next += 1;
            let &(ci, slot) = occ[e].iter().find(|&&(ci, s)| incoming(ci, s)).expect("solved");
            e = compact[ci][(slot + 2) % 4] as usize;
        }
    }
    Ok(compact.iter().map(|t| t.map(|l| relabel[l as usize])).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_figure_three_trefoil() {
        let k = parse_pd("X[5,2,4,1] X[3,6,2,5] X[1,4,6,3]").unwrap();
        assert_eq!(k.m(), 3);
        assert_eq!(k.edge_count(), 6);
        assert_eq!(render(&k), "X[5,2,4,1] X[3,6,2,5] X[1,4,6,3]");
    }

    #[test]
    fn empty_input_is_the_unknot() {
        let k = parse_pd("  ").unwrap();
        assert_eq!(k.m(), 0);
        assert_eq!(k.components(), 1);
        assert_eq!(parse_pd("PD[]").unwrap(), k);
    }

    #[test]
    fn accepts_wrappers_and_json() {
        let a = parse_pd("PD[X[1,5,2,4], X[3,1,4,6], X[5,3,6,2]]").unwrap();
        let b = parse_pd("[[1,5,2,4],[3,1,4,6],[5,3,6,2]]").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn malformed_tokens_report_offsets() {
        match parse_pd("X[1,1,2,2] Y[3]") {
            Err(Error::MalformedToken { offset, .. }) => assert_eq!(offset, 11),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_pd("X[1,1,2]"), Err(Error::MalformedToken { .. })));
        assert!(matches!(parse_pd("[[1,2]"), Err(Error::MalformedToken { .. })));
    }

    #[test]
    fn edge_count_errors() {
        assert!(matches!(parse_pd("X[1,1,2,3]"), Err(Error::EdgeCountError { .. })));
        assert!(matches!(parse_pd("X[1,1,2,9]"), Err(Error::EdgeCountError { .. })));
    }

    #[test]
    fn normalization_produces_a_valid_code() {
        let scrambled = [[10, 50, 20, 40], [30, 10, 40, 60], [50, 30, 60, 20]];
        let fixed = normalize_labels(&scrambled).unwrap();
        let k = KnotDiagram::new(fixed).unwrap();
        assert_eq!(k.n_plus(), 3);
    }
}
