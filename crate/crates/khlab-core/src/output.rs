//! Shared formatting for tabular output.

/// Library version stamped into metadata lines.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Conventions recorded in every metadata line.
pub const CONVENTIONS: &str = "sign=over-strand d->b positive; basis=r big-endian then word (smallest loop label most significant, 1<X)";

/// Formats `x` with 10 significant digits, trimming trailing zeros.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..10).contains(&exp) {
        let decimals = (9 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        let s = if s.contains('.') { s.trim_end_matches('0').trim_end_matches('.').to_string() } else { s };
        if s == "-0" {
            "0".into()
        } else {
            s
        }
    } else {
        format!("{x:.9e}")
    }
}

/// Optional float, empty when absent.
pub fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_sig).unwrap_or_default()
}

/// `# khlab <version>; <extra>; <conventions>` metadata line (without the
/// trailing newline).
pub fn metadata_line(extra: &str) -> String {
    if extra.is_empty() {
        format!("# khlab {VERSION}; {CONVENTIONS}")
    } else {
        format!("# khlab {VERSION}; {extra}; {CONVENTIONS}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(fmt_sig(0.5857864376269049), "0.5857864376");
        assert_eq!(fmt_sig(2.0), "2");
        assert_eq!(fmt_sig(10.3732), "10.3732");
        assert_eq!(fmt_sig(-1.0e-7), "-1.000000000e-7");
        assert_eq!(fmt_sig(123456789012.0), "1.234567890e11");
        assert_eq!(fmt_sig(0.0), "0");
    }
}
