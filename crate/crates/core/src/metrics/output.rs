use super::MetricBracket;

/// Shortest round-trip decimal; `inf`, `-inf` and `NaN` spelled out.
pub fn format_real(x: f64) -> String {
    if x == f64::INFINITY {
        "inf".into()
    } else if x == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{x:?}")
    }
}

/// One bracket line for CSV export; `n` is a sequence index, `radius` the truncation N.
#[derive(Debug, Clone, PartialEq)]
pub struct BracketRow {
    pub n: Option<usize>,
    pub radius: Option<f64>,
    pub bracket: MetricBracket,
}

/// Columns `n, N, lower, upper, w_0, ..., w_{d-1}`; missing cells are empty.
pub fn brackets_to_csv(rows: &[BracketRow]) -> String {
    let dim = rows.iter().filter_map(|r| r.bracket.witness.as_ref()).map(|w| w.dim()).max().unwrap_or(0);
    let mut out = String::from("n,N,lower,upper");
    for i in 0..dim {
        out.push_str(&format!(",w_{i}"));
    }
    out.push('\n');
    for r in rows {
        let n = r.n.map(|n| n.to_string()).unwrap_or_default();
        let big_n = r.radius.map(format_real).unwrap_or_default();
        out.push_str(&format!("{n},{big_n},{},{}", format_real(r.bracket.lower), format_real(r.bracket.upper)));
        for i in 0..dim {
            out.push(',');
            if let Some(w) = &r.bracket.witness {
                out.push_str(&format_real(w[i]));
            }
        }
        out.push('\n');
    }
    out
}
