//! Plain-text rendering of reports.

use std::fmt::Write;

use crate::report::{Outcome, Report, StabJson, SubgroupJson};

/// The statement each check instantiates.
fn statement(check: &str) -> &'static str {
    match check {
        "dim_equality" => "dim Stab = dim p for a reduced type",
        "infinite" => "types centered at infinity have infinite stabilizers",
        "solvable" => "the stabilizer is solvable",
        "conjugation" => "Stab(g p) = g Stab(p) g^-1",
        "bounded_trivial" => "bounded types have trivial stabilizer",
        "soundness" => "sampled stabilizer elements preserve the tube",
        _ => "",
    }
}

fn describe(h: &SubgroupJson) -> String {
    let kind = match h.classification.as_deref() {
        Some("trivial") => return "the trivial subgroup".into(),
        Some(c) if c != "unclassified" => format!("{c} subgroup"),
        _ => "subgroup".into(),
    };
    format!("{}-dimensional {kind} <{}>", h.dim, h.ideal.join(", "))
}

pub fn cmd_explain(r: &Report) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "command: {:?}, algorithm: {}, exit code {}", r.job.command, r.algorithm, r.exit_code);
    if let Some(e) = &r.error {
        let _ = writeln!(out, "error [{}]: {}", e.kind, e.message);
    }
    let res = &r.results;
    if let Some(f) = &res.field {
        let _ = writeln!(out, "field: {f}");
    }
    if let Some(bs) = &res.branches {
        let _ = writeln!(out, "{} branch(es) at infinity", bs.len());
        for (i, b) in bs.iter().enumerate() {
            let entries: Vec<String> = b.entries.iter().map(crate::render_series).collect();
            let _ = writeln!(out, "  #{i}: ({})", entries.join(", "));
        }
        if res.trusted_irreducible == Some(true) {
            let _ = writeln!(out, "  irreducibility of the curve was assumed, not certified");
        }
    }
    for (i, s) in res.stabilizers.iter().enumerate() {
        if res.stabilizers.len() > 1 {
            let _ = writeln!(out, "branch #{i}:");
        }
        explain_stab(&mut out, s);
    }
    if let Some(red) = &res.reduction {
        let _ = writeln!(out, "reduction: dim {} -> {}{}", red.dim_before, red.dim_after, if red.changed { "" } else { " (unchanged)" });
        let eps: Vec<String> = red.certificate.correction.iter().map(crate::render_series).collect();
        let _ = writeln!(out, "  correction eps = ({})", eps.join(", "));
    }
    if let Some(iw) = &res.iwasawa {
        let _ = writeln!(
            out,
            "Iwasawa: u b = a {}, u integral {}, b upper triangular {}",
            iw.product_matches, iw.u_integral, iw.b_upper_triangular
        );
    }
    if let Some(v) = &res.verification {
        let verdict = if v.is_subgroup() { "is a subgroup" } else { "is not a subgroup" };
        let _ = writeln!(out, "<{}> {verdict}", v.subgroup.ideal.join(", "));
        for f in &v.failures {
            let _ = writeln!(out, "  failed: {f}");
        }
        if let Some(s) = &v.solvable {
            let _ = writeln!(out, "  solvable: {} ({})", s.status, s.detail);
        }
    }
    out
}

fn explain_stab(out: &mut String, s: &StabJson) {
    let dim_p = s.reduction.as_ref().map(|r| r.dim_after);
    match &s.stabilizer {
        Some(h) => {
            let _ = write!(out, "Stab = {}", describe(h));
            if let Some(d) = dim_p {
                let rel = if d == h.dim { "=" } else { "!=" };
                let _ = write!(out, "; dim p = {d} {rel} dim Stab");
            }
            let _ = writeln!(out);
        }
        None => {
            let _ = writeln!(out, "no stabilizer: {}", s.error.as_ref().map(|e| e.message.as_str()).unwrap_or("unknown"));
        }
    }
    if let Some(r) = &s.reduction {
        if r.changed {
            let _ = writeln!(out, "  reduced first: dim {} -> {}", r.dim_before, r.dim_after);
        }
    }
    if let Some(a) = &s.agreement {
        if a.equal {
            let _ = writeln!(out, "  both algorithms agree");
        } else {
            let _ = writeln!(out, "  the algorithms DISAGREE");
            if let Some(Outcome::Ok(h)) = &s.reparam {
                let _ = writeln!(out, "    reparameterization: <{}>", h.ideal.join(", "));
            }
            if let Some(Outcome::Ok(d)) = &s.degeneration {
                let _ = writeln!(out, "    degeneration:       <{}>", d.stabilizer.ideal.join(", "));
            }
            if let Some(sep) = &a.separating {
                let _ = writeln!(out, "    separating generator: {sep}");
            }
        }
    }
    for (alg, err) in [
        ("reparameterization", s.reparam.as_ref().and_then(|o| if let Outcome::Error(e) = o { Some(e) } else { None })),
        ("degeneration", s.degeneration.as_ref().and_then(|o| if let Outcome::Error(e) = o { Some(e) } else { None })),
    ] {
        if let Some(e) = err {
            let _ = writeln!(out, "  {alg} failed: {}", e.message);
        }
    }
    if let Some(Outcome::Ok(d)) = &s.degeneration {
        let dec = &d.decomposition;
        if !dec.cosets.is_empty() {
            let _ = writeln!(out, "  special fiber: {} components of dimensions {:?}", dec.cosets.len() + 1, dec.component_dims);
        }
        if let Some(n) = &dec.note {
            let _ = writeln!(out, "  decomposition: {n}");
        }
    }
    for (name, c) in &s.checks {
        let _ = writeln!(out, "  [{}] {name}: {} ({})", c.status, statement(name), c.detail);
    }
}
