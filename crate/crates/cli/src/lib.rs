//! Job files, reports and the bundled corpus for the `mustab` binary.

pub mod corpus;
pub mod explain;
pub mod job;
pub mod report;
pub mod run;

use job::{Lit, SeriesJson};

/// `c t^e + ... + O(t^prec)` from a serialized series.
pub fn render_series(s: &SeriesJson) -> String {
    let text = |l: &Lit| match l {
        Lit::Int(n) => n.to_string(),
        Lit::Str(s) => s.clone(),
    };
    let mut parts: Vec<String> = s
        .terms
        .iter()
        .map(|(e, c)| {
            let (e, c) = (text(e), text(c));
            match e.as_str() {
                "0" => c,
                "1" if c == "1" => "t".into(),
                _ if c == "1" => format!("t^{e}"),
                "1" => format!("{c}*t"),
                _ => format!("{c}*t^{e}"),
            }
        })
        .collect();
    if parts.is_empty() {
        parts.push("0".into());
    }
    match &s.prec {
        Some(p) if text(p) != mustab::series::HARD_CAP.to_string() => format!("{} + O(t^{})", parts.join(" + "), text(p)),
        _ => parts.join(" + "),
    }
}
