//! Command bodies. Each writes its full output into a byte buffer.

use std::fmt::Write as _;

use khlab::corpus::NamedDiagram;
use khlab::degree_zero_graph::{build_graph, degree_zero_profile, psi_bounds, PsiReport};
use khlab::jones::jones;
use khlab::output::{fmt_opt, fmt_sig, metadata_line};
use khlab::qalg_emulator::{emulate_swap_estimate, gibbs_overlap_from_spectrum};
use khlab::resolution::build_cube;
use khlab::spectral::{dos_histogram, knot_gap_profile, knot_spectra, spectrum_with, GapProfile, GapRow};
use khlab::twist_reduce::gap_reduction_report;
use khlab::{GradingShift, KhovanovComplex, SpectralConfig};
use rayon::prelude::*;
use serde_json::json;

use crate::{CliError, Format};

/// Settings shared by every command.
#[derive(Debug, Clone)]
pub struct Common {
    pub format: Format,
    pub cfg: SpectralConfig,
    pub command: &'static str,
}

impl Common {
    fn metadata(&self, extra: &str) -> String {
        let limits = format!(
            "command={}; cube_limit={}; dense_cutoff={}; gap_dense_cutoff={}; seed={}",
            self.command,
            khlab::resolution::IN_MEMORY_LIMIT,
            self.cfg.dense_cutoff,
            self.cfg.gap_dense_cutoff,
            self.cfg.seed
        );
        if extra.is_empty() {
            metadata_line(&limits)
        } else {
            metadata_line(&format!("{limits}; {extra}"))
        }
    }
}

fn to_json(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn par_knots<T: Send, F>(knots: &[NamedDiagram], f: F) -> Result<Vec<T>, CliError>
where
    F: Fn(&NamedDiagram) -> Result<T, CliError> + Sync + Send,
{
    knots.par_iter().map(f).collect()
}

pub fn betti(c: &Common, knots: &[NamedDiagram]) -> Result<String, CliError> {
    let tables = par_knots(knots, |k| {
        let cube = build_cube(&k.knot)?;
        Ok(KhovanovComplex::new(&k.knot, &cube).betti_table(&k.name)?)
    })?;
    Ok(match c.format {
        Format::Csv => {
            let mut s = format!("{}\nknot,i,j,dim,betti\n", c.metadata(""));
            for t in &tables {
                for (&(i, j), &(dim, b)) in &t.entries {
                    let _ = writeln!(s, "{},{i},{j},{dim},{b}", t.knot);
                }
            }
            s
        }
        Format::Json => to_json(&json!({
            "metadata": c.metadata(""),
            "knots": tables.iter().map(|t| json!({
                "knot": t.knot,
                "entries": t.entries.iter().map(|(&(i, j), &(dim, b))| json!({"i": i, "j": j, "dim": dim, "betti": b})).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })),
    })
}

/// Gap profile, or a single published bidegree when `only` is set.
fn profile(c: &Common, k: &NamedDiagram, only: Option<(i32, i32)>) -> Result<GapProfile, CliError> {
    let cube = build_cube(&k.knot)?;
    let cx = KhovanovComplex::new(&k.knot, &cube);
    let Some((i, j)) = only else {
        return Ok(knot_gap_profile(&cx, &k.name, &c.cfg)?);
    };
    let (ri, rj) = GradingShift::of(&k.knot).raw(i, j);
    let mut rows = Vec::new();
    if cx.dim(ri, rj) > 0 {
        let kernel_dim = cx.betti_raw(ri, rj)?;
        let (gap, max_eig) = khlab::spectral::gap_with(&cx.laplacian(ri, rj), kernel_dim, &c.cfg)?;
        rows.push(GapRow { i, j, dim: cx.dim(ri, rj), kernel_dim, gap, max_eig });
    }
    Ok(GapProfile { knot: k.name.clone(), rows })
}

pub fn gap(c: &Common, knots: &[NamedDiagram], only: Option<(i32, i32)>, summary: bool) -> Result<String, CliError> {
    let profiles = par_knots(knots, |k| profile(c, k, only))?;
    let summary_row = |p: &GapProfile| {
        let (min, at) = p.min_gap().map_or((None, None), |(g, at)| (Some(g), Some(at)));
        (min, at, p.avg_gap())
    };
    Ok(match c.format {
        Format::Csv if summary => {
            let mut s = format!("{}\nknot,min_gap,min_i,min_j,avg_gap\n", c.metadata("summary"));
            for p in &profiles {
                let (min, at, avg) = summary_row(p);
                let (i, j) = at.map_or((String::new(), String::new()), |(i, j)| (i.to_string(), j.to_string()));
                let _ = writeln!(s, "{},{},{i},{j},{}", p.knot, fmt_opt(min), fmt_opt(avg));
            }
            s
        }
        Format::Csv => {
            let mut s = format!("{}\nknot,i,j,dim,kernel_dim,gap,max_eig\n", c.metadata(""));
            for p in &profiles {
                for r in &p.rows {
                    let _ = writeln!(s, "{},{},{},{},{},{},{}", p.knot, r.i, r.j, r.dim, r.kernel_dim, fmt_opt(r.gap), fmt_opt(r.max_eig));
                }
            }
            for p in &profiles {
                let (min, at, avg) = summary_row(p);
                let at = at.map_or(String::new(), |(i, j)| format!(" at ({i},{j})"));
                let _ = writeln!(s, "# {} min_gap={}{at} avg_gap={}", p.knot, fmt_opt(min), fmt_opt(avg));
            }
            s
        }
        Format::Json => to_json(&json!({
            "metadata": c.metadata(""),
            "knots": profiles.iter().map(|p| {
                let (min, at, avg) = summary_row(p);
                json!({"knot": p.knot, "min_gap": min, "min_at": at, "avg_gap": avg, "rows": if summary { json!([]) } else { json!(p.rows) }})
            }).collect::<Vec<_>>(),
        })),
    })
}

pub fn jones_cmd(c: &Common, knots: &[NamedDiagram]) -> Result<String, CliError> {
    let polys: Vec<_> = knots.par_iter().map(|k| (k.name.clone(), jones(&k.knot))).collect();
    Ok(match c.format {
        Format::Csv => {
            let mut s = format!("{}\nknot,jones\n", c.metadata(""));
            for (name, p) in &polys {
                let _ = writeln!(s, "{name},{p}");
            }
            s
        }
        Format::Json => to_json(&json!({
            "metadata": c.metadata(""),
            "knots": polys.iter().map(|(n, p)| json!({"knot": n, "jones": p.to_string(), "coefficients": p.to_json_map()})).collect::<Vec<_>>(),
        })),
    })
}

pub fn dos(c: &Common, knots: &[NamedDiagram], bin: f64) -> Result<String, CliError> {
    if !(bin > 0.0) {
        return Err(khlab::Error::DomainError(format!("bin width must be positive, got {bin}")).into());
    }
    let spectra = par_knots(knots, |k| {
        let cube = build_cube(&k.knot)?;
        Ok((k.name.clone(), knot_spectra(&KhovanovComplex::new(&k.knot, &cube))?))
    })?;
    let h = dos_histogram(&spectra, bin);
    let env = h.envelope_fit().map(|f| f.slope);
    let rise = h.rising_fit().map(|f| f.slope);
    let extra = format!("bin={}; knots={}; states={}; envelope_slope={}; rising_fit_slope={}", fmt_sig(bin), knots.len(), h.total(), fmt_opt(env), fmt_opt(rise));
    Ok(match c.format {
        Format::Csv => {
            let mut out = Vec::new();
            h.write_csv(&mut out, &c.metadata(&extra)).map_err(|e| CliError::Io(e.to_string()))?;
            String::from_utf8(out).expect("utf-8")
        }
        Format::Json => to_json(&json!({
            "metadata": c.metadata(&extra),
            "bin_width": bin,
            "total": h.total(),
            "envelope_slope": env,
            "rising_fit_slope": rise,
            "counts": h.counts.iter().map(|(&k, &n)| json!({"bin_lo": k as f64 * bin, "count": n})).collect::<Vec<_>>(),
        })),
    })
}

pub fn graph_bounds(c: &Common, knots: &[NamedDiagram], k: Option<usize>, edges: Option<&std::path::Path>) -> Result<String, CliError> {
    let mut reports: Vec<(String, PsiReport)> = Vec::new();
    let mut edge_text = Vec::new();
    for kn in knots {
        let cube = build_cube(&kn.knot)?;
        let prof = degree_zero_profile(&cube);
        let ks: Vec<usize> = match k {
            Some(k) if k > prof.ell() => {
                return Err(khlab::Error::DomainError(format!("{}: k = {k} exceeds ell = {}", kn.name, prof.ell())).into())
            }
            Some(k) => vec![k],
            None => (0..=prof.ell()).collect(),
        };
        for kk in ks {
            let g = build_graph(&prof, kk);
            if edges.is_some() {
                let _ = writeln!(edge_text_string(&mut edge_text), "# {} k={kk}", kn.name);
                g.write_edge_list(&mut edge_text).map_err(|e| CliError::Io(e.to_string()))?;
            }
            reports.push((kn.name.clone(), psi_bounds(&g, &prof)));
        }
    }
    if let Some(path) = edges {
        std::fs::write(path, &edge_text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    }
    fn opt<T: std::fmt::Display>(r: Option<T>) -> String {
        r.map_or("UNKNOWN".to_string(), |x| x.to_string())
    }
    Ok(match c.format {
        Format::Csv => {
            let mut s = format!(
                "{}\nknot,ell,k,vertices,p,t,psi_v,psi_v_exact,psi,upsilon_k,d_star,lower_bound,upper_bound,prop_upper,lambda_min\n",
                c.metadata("rationals exact; lower_bound = psi^2/(4 d*), upper_bound = 4 psi_V")
            );
            for (name, r) in &reports {
                let _ = writeln!(
                    s,
                    "{name},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
                    r.ell,
                    r.k,
                    r.vertices,
                    r.p,
                    r.t,
                    r.psi_v,
                    r.psi_v_exact,
                    opt(r.psi_exact),
                    r.upsilon_k,
                    r.d_star,
                    opt(r.lower_bound),
                    r.upper_bound,
                    r.pair_upper,
                    fmt_sig(r.lambda_min)
                );
            }
            s
        }
        Format::Json => to_json(&json!({
            "metadata": c.metadata(""),
            "reports": reports.iter().map(|(n, r)| json!({
                "knot": n, "ell": r.ell, "k": r.k, "vertices": r.vertices, "p": r.p, "t": r.t,
                "psi_v": r.psi_v.to_string(), "psi_v_exact": r.psi_v_exact, "psi": opt(r.psi_exact),
                "upsilon_k": r.upsilon_k, "d_star": r.d_star.to_string(), "lower_bound": opt(r.lower_bound),
                "upper_bound": r.upper_bound.to_string(), "prop_upper": r.pair_upper.to_string(), "lambda_min": r.lambda_min,
            })).collect::<Vec<_>>(),
        })),
    })
}

/// Adapter so `writeln!` can append to a byte buffer.
fn edge_text_string(buf: &mut Vec<u8>) -> ByteWriter<'_> {
    ByteWriter(buf)
}

struct ByteWriter<'a>(&'a mut Vec<u8>);

impl std::fmt::Write for ByteWriter<'_> {
    fn write_str(&mut self, s: &str) -> std::fmt::Result {
        self.0.extend_from_slice(s.as_bytes());
        Ok(())
    }
}

pub fn twist_report(c: &Common, knots: &[NamedDiagram]) -> Result<String, CliError> {
    let ns: Vec<usize> = knots
        .iter()
        .map(|k| k.name.strip_prefix("TU").and_then(|n| n.parse().ok()))
        .collect::<Option<_>>()
        .ok_or_else(|| khlab::Error::DomainError("twist-report takes --tu input only".into()))?;
    let reports = ns.par_iter().map(|&n| gap_reduction_report(n, &c.cfg)).collect::<Result<Vec<_>, _>>()?;
    Ok(match c.format {
        Format::Csv => {
            let mut s = format!("{}\nn,full_min_gap,reduced_min_gap,betti_agree\n", c.metadata("reduced complex: n copies of V(x)V then V"));
            for r in &reports {
                let _ = writeln!(s, "{},{},{},{}", r.n, fmt_opt(r.full_min_gap), fmt_opt(r.reduced_min_gap), r.betti_agree);
            }
            s
        }
        Format::Json => to_json(&json!({
            "metadata": c.metadata(""),
            "reports": reports.iter().map(|r| json!({
                "n": r.n, "full_min_gap": r.full_min_gap, "reduced_min_gap": r.reduced_min_gap, "betti_agree": r.betti_agree,
            })).collect::<Vec<_>>(),
        })),
    })
}

pub struct EmulateArgs {
    pub bidegree: (i32, i32),
    pub temperature: Option<f64>,
    pub shots: u64,
}

pub fn emulate(c: &Common, knots: &[NamedDiagram], a: &EmulateArgs) -> Result<String, CliError> {
    let mut out = Vec::new();
    for k in knots {
        let cube = build_cube(&k.knot)?;
        let cx = KhovanovComplex::new(&k.knot, &cube);
        let (ri, rj) = GradingShift::of(&k.knot).raw(a.bidegree.0, a.bidegree.1);
        let beta_true = cx.betti_raw(ri, rj)?;
        let cfg = SpectralConfig { dense_cutoff: usize::MAX, ..c.cfg };
        let s = spectrum_with(&cx.laplacian(ri, rj), beta_true, &cfg)?;
        // Default temperature: the gap, or 1 when there is none.
        let t = a.temperature.unwrap_or_else(|| s.gap.unwrap_or(1.0));
        let g = gibbs_overlap_from_spectrum(&s, t)?;
        let (beta_hat, stderr, accepted) = emulate_swap_estimate(g.overlap, beta_true, a.shots, c.cfg.seed)?;
        out.push(json!({
            "knot": k.name,
            "bidegree": [a.bidegree.0, a.bidegree.1],
            "T": t,
            "overlap": g.overlap,
            "beta_true": beta_true,
            "beta_hat": beta_hat,
            "stderr": stderr,
            "shots": a.shots,
            "accepted": accepted,
            "seed": c.cfg.seed,
        }));
    }
    Ok(match c.format {
        Format::Json => to_json(&json!({"metadata": c.metadata(""), "runs": out})),
        Format::Csv => {
            let mut s = format!("{}\nknot,i,j,T,overlap,beta_true,beta_hat,stderr,shots,accepted,seed\n", c.metadata(""));
            for r in &out {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{},{},{},{},{},{}",
                    r["knot"].as_str().unwrap_or_default(),
                    a.bidegree.0,
                    a.bidegree.1,
                    fmt_sig(r["T"].as_f64().unwrap_or(f64::NAN)),
                    fmt_sig(r["overlap"].as_f64().unwrap_or(f64::NAN)),
                    r["beta_true"],
                    fmt_sig(r["beta_hat"].as_f64().unwrap_or(f64::NAN)),
                    fmt_sig(r["stderr"].as_f64().unwrap_or(f64::NAN)),
                    a.shots,
                    r["accepted"],
                    c.cfg.seed
                );
            }
            s
        }
    })
}
