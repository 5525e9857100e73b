use std::fmt::Write;

use crate::solution::Archive;

/// `f1,...,fm,cv`
pub fn scatter_header(m: usize) -> String {
    let mut header: Vec<String> = (1..=m).map(|j| format!("f{j}")).collect();
    header.push("cv".into());
    header.join(",")
}

/// One CSV row per archive member: objectives then constraint violation.
pub fn scatter_csv(archive: &Archive, m: usize) -> String {
    let mut out = scatter_header(m);
    out.push('\n');
    for s in archive {
        for v in &s.f {
            write!(out, "{v},").unwrap();
        }
        writeln!(out, "{}", s.cv).unwrap();
    }
    out
}
