//! Resolves the input source of a job into named diagrams.

use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::Args;
use khlab::corpus::{parse_corpus, NamedDiagram};
use khlab::knot_io::{parse_pd, torus_knot_2n, twisted_unknot};

use crate::CliError;

/// Exactly one source of diagrams.
#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false)]
pub struct InputArgs {
    /// Inline PD code, e.g. "X[1,5,2,4] X[3,1,4,6] X[5,3,6,2]".
    #[arg(long)]
    pub pd: Option<String>,
    /// File of `name: X[..] ..` lines.
    #[arg(long)]
    pub pd_file: Option<PathBuf>,
    /// Twisted unknots, `n` or `a..b` (inclusive).
    #[arg(long, value_parser = parse_range)]
    pub tu: Option<RangeInclusive<usize>>,
    /// Torus knots T(2,N), `N` or `a..b` (odd values only).
    #[arg(long, value_parser = parse_range)]
    pub torus: Option<RangeInclusive<usize>>,
}

pub fn parse_range(s: &str) -> Result<RangeInclusive<usize>, String> {
    let num = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("bad number {t:?}: {e}"));
    match s.split_once("..") {
        Some((a, b)) => {
            let (a, b) = (num(a)?, num(b.trim_start_matches('='))?);
            if a > b {
                return Err(format!("empty range {s}"));
            }
            Ok(a..=b)
        }
        None => {
            let n = num(s)?;
            Ok(n..=n)
        }
    }
}

pub fn parse_bidegree(s: &str) -> Result<(i32, i32), String> {
    let (i, j) = s.split_once(',').ok_or_else(|| format!("expected i,j, got {s:?}"))?;
    let p = |t: &str| t.trim().parse::<i32>().map_err(|e| format!("bad integer {t:?}: {e}"));
    Ok((p(i)?, p(j)?))
}

impl InputArgs {
    pub fn diagrams(&self) -> Result<Vec<NamedDiagram>, CliError> {
        if let Some(pd) = &self.pd {
            let knot = parse_pd(pd)?;
            return Ok(vec![NamedDiagram { name: "pd".into(), pd: pd.trim().into(), knot }]);
        }
        if let Some(path) = &self.pd_file {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            return Ok(parse_corpus(&text)?);
        }
        if let Some(r) = &self.tu {
            if *r.start() == 0 {
                return Err(khlab::Error::DomainError("twisted unknots need n >= 1".into()).into());
            }
            return Ok(r
                .clone()
                .map(|n| {
                    let knot = twisted_unknot(n);
                    NamedDiagram { name: format!("TU{n}"), pd: khlab::knot_io::render(&knot), knot }
                })
                .collect());
        }
        if let Some(r) = &self.torus {
            let mut out = Vec::new();
            for n in r.clone().filter(|n| r.start() == r.end() || n % 2 == 1) {
                let knot = torus_knot_2n(n)?;
                out.push(NamedDiagram { name: format!("T2_{n}"), pd: khlab::knot_io::render(&knot), knot });
            }
            return Ok(out);
        }
        unreachable!("clap enforces one input source")
    }
}
