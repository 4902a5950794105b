//! Key-value report lines printed to stdout. Floats use shortest
//! round-trip formatting so reports are deterministic and re-parseable.

use ncup_core::CertReport;

/// One `key=value` token; strings with spaces are double-quoted.
pub fn kv(key: &str, value: impl std::fmt::Display) -> String {
    let v = value.to_string();
    if v.contains(' ') {
        format!("{key}=\"{v}\"")
    } else {
        format!("{key}={v}")
    }
}

pub fn cert_line(rep: &CertReport, extra: &[(&str, String)]) -> String {
    let mut parts = Vec::new();
    for (k, v) in extra {
        parts.push(kv(k, v));
    }
    parts.push(kv("principle", rep.principle.as_str()));
    parts.push(kv("holds", rep.holds));
    parts.push(kv("lambda_min", rep.lambda_min_herm));
    if let Some(l1) = rep.symplectic_lambda1 {
        parts.push(kv("lambda1", l1));
    }
    if let Some(w) = &rep.witness {
        let ser: Vec<String> = w.iter().map(|z| format!("{},{}", z.re, z.im)).collect();
        parts.push(kv("witness", ser.join(";")));
    }
    if !rep.notes.is_empty() {
        parts.push(kv("notes", &rep.notes));
    }
    parts.join(" ")
}
