//! CSV, JSON and gnuplot renderings of experiment rows, and the table of
//! Hermite constants.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use modphi::hermite_asymptotics::HermiteTable;

use crate::runner::{coloured_literature_constants, ExperimentRow};

/// First line of every experiment CSV.
pub const CSV_SCHEMA: &str = "# modphi-experiment v1";
/// First line of the constants CSV.
pub const CONSTANTS_SCHEMA: &str = "# modphi-constants v1";

const CSV_COLUMNS: [&str; 20] = [
    "model",
    "params",
    "n",
    "lambda",
    "r",
    "kind",
    "measured",
    "error_bar",
    "s",
    "beta",
    "predicted",
    "ratio",
    "predicted_alt",
    "bound",
    "bound_norm",
    "bound_r",
    "chen_steele",
    "le_cam",
    "prohorov",
    "within_bound",
];

fn opt_f(v: Option<f64>) -> String {
    v.map_or_else(|| "n/a".to_string(), |x| x.to_string())
}

fn opt_u(v: Option<usize>) -> String {
    v.map_or_else(|| "n/a".to_string(), |x| x.to_string())
}

/// Quotes a field when it contains a separator or quote.
fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Versioned CSV table. Absent values print as `n/a`; floats use the
/// shortest round-trip representation so that reruns are byte-identical.
pub fn rows_to_csv(rows: &[ExperimentRow]) -> String {
    let mut out = String::new();
    writeln!(out, "{CSV_SCHEMA}").unwrap();
    writeln!(out, "{}", CSV_COLUMNS.join(",")).unwrap();
    for row in rows {
        let cells = [
            csv_field(&row.model),
            csv_field(&row.params),
            row.n.to_string(),
            row.lambda.to_string(),
            row.r.to_string(),
            row.kind.to_string(),
            row.measured.to_string(),
            row.error_bar.to_string(),
            opt_u(row.s),
            opt_f(row.beta),
            opt_f(row.predicted),
            opt_f(row.ratio),
            opt_f(row.predicted_alt),
            opt_f(row.bound),
            opt_f(row.bound_norm),
            opt_u(row.bound_r),
            opt_f(row.chen_steele),
            opt_f(row.le_cam),
            opt_f(row.prohorov),
            row.within_bound().to_string(),
        ];
        writeln!(out, "{}", cells.join(",")).unwrap();
    }
    out
}

/// JSON array of rows (`null` for absent values).
pub fn rows_to_json(rows: &[ExperimentRow]) -> Result<String> {
    Ok(serde_json::to_string_pretty(rows)? + "\n")
}

fn file_stem(model: &str, kind: &str) -> String {
    format!("{model}_{kind}")
}

/// Gnuplot data, one file per `(model, kind)`. Each file holds one block
/// per scheme order (separated by two blank lines, addressable with
/// `index`), with columns `n λ measured predicted`.
///
/// For the coloured-permutation model an extra `_ratio.dat` file per kind
/// tabulates the measured distance rescaled by `(log n)^p` and `λ^p`
/// (`p = 2` for `local`, `1` for `tv`) next to both candidate constants.
pub fn plot_files(rows: &[ExperimentRow]) -> Result<BTreeMap<String, String>> {
    if rows.is_empty() {
        bail!("no rows to plot");
    }
    let mut groups: BTreeMap<(String, &str), BTreeMap<usize, Vec<&ExperimentRow>>> = BTreeMap::new();
    for row in rows {
        groups
            .entry((row.model.clone(), row.kind))
            .or_default()
            .entry(row.r)
            .or_default()
            .push(row);
    }
    let mut files = BTreeMap::new();
    for ((model, kind), by_r) in &groups {
        let mut text = String::new();
        writeln!(text, "# {model} {kind}: columns n lambda measured predicted").unwrap();
        for (i, (r, block)) in by_r.iter().enumerate() {
            if i > 0 {
                text.push_str("\n\n");
            }
            writeln!(text, "# r = {r}").unwrap();
            for row in block {
                writeln!(text, "{} {} {} {}", row.n, row.lambda, row.measured, opt_f(row.predicted)).unwrap();
            }
        }
        files.insert(format!("{}.dat", file_stem(model, kind)), text);

        if model == "coloured-perm" {
            if let Some(block) = by_r.get(&0) {
                files.insert(format!("{}_ratio.dat", file_stem(model, kind)), coloured_ratio_file(kind, block));
            }
        }
    }
    Ok(files)
}

fn coloured_ratio_file(kind: &str, block: &[&ExperimentRow]) -> String {
    let (cl, ctv) = coloured_literature_constants();
    let (p, literature) = if kind == "local" { (2, cl) } else { (1, ctv) };
    let mut text = String::new();
    writeln!(
        text,
        "# coloured-perm {kind}, order 0: measured*(log n)^{p} vs the literature constant {literature}; \
         measured*lambda^{p} vs the direct-substitution constant predicted*lambda^{p}"
    )
    .unwrap();
    writeln!(
        text,
        "# columns n lambda measured*(log n)^{p} literature_constant measured*lambda^{p} direct_constant"
    )
    .unwrap();
    for row in block {
        let ln = (row.n as f64).ln().powi(p);
        let lp = row.lambda.powi(p);
        let direct = row.predicted.map(|v| v * lp);
        writeln!(
            text,
            "{} {} {} {} {} {}",
            row.n,
            row.lambda,
            row.measured * ln,
            literature,
            row.measured * lp,
            opt_f(direct)
        )
        .unwrap();
    }
    text
}

/// Writes [`plot_files`] into `dir`, returning the written paths.
pub fn write_plot_files(rows: &[ExperimentRow], dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut written = Vec::new();
    for (name, text) in plot_files(rows)? {
        let path = dir.join(name);
        std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
        written.push(path);
    }
    Ok(written)
}

/// Largest order listed by [`emit_constants_table`].
pub const CONSTANTS_MAX_ORDER: usize = 10;

/// CSV rows `r, z_{r+1}, M_r, V_r` for `r ≤ 10`.
pub fn emit_constants_table() -> String {
    let t = HermiteTable::global();
    let mut out = String::new();
    writeln!(out, "{CONSTANTS_SCHEMA}").unwrap();
    writeln!(out, "r,z_r+1,M_r,V_r").unwrap();
    for r in 0..=CONSTANTS_MAX_ORDER {
        writeln!(out, "{r},{},{},{}", t.z[r + 1], t.m[r], t.v[r]).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(model: &str, kind: &'static str, n: u64, r: usize) -> ExperimentRow {
        ExperimentRow {
            model: model.into(),
            params: String::new(),
            n,
            lambda: 2.0,
            r,
            kind,
            measured: 0.1,
            error_bar: 0.0,
            s: Some(r),
            beta: Some(-0.5),
            predicted: Some(0.2),
            ratio: Some(0.5),
            predicted_alt: None,
            bound: None,
            bound_norm: None,
            bound_r: None,
            chen_steele: None,
            le_cam: None,
            prohorov: None,
        }
    }

    #[test]
    fn single_row_single_line() {
        let files = plot_files(&[row("ewens", "tv", 10, 0)]).unwrap();
        assert_eq!(files.len(), 1);
        let text = &files["ewens_tv.dat"];
        let data: Vec<&str> = text.lines().filter(|l| !l.starts_with('#') && !l.is_empty()).collect();
        assert_eq!(data, vec!["10 2 0.1 0.2"]);
    }

    #[test]
    fn two_models_two_files() {
        let files = plot_files(&[row("ewens", "tv", 10, 0), row("omega", "tv", 10, 0)]).unwrap();
        assert_eq!(files.len(), 2);
        assert!(plot_files(&[]).is_err());
    }

    #[test]
    fn orders_become_blocks() {
        let files = plot_files(&[row("ewens", "tv", 10, 0), row("ewens", "tv", 10, 1)]).unwrap();
        assert_eq!(files["ewens_tv.dat"].matches("\n\n\n").count(), 1);
    }

    #[test]
    fn coloured_ratio_file_lists_both_constants() {
        let files = plot_files(&[row("coloured-perm", "local", 100, 0)]).unwrap();
        let text = &files["coloured-perm_local_ratio.dat"];
        let line = text.lines().find(|l| !l.starts_with('#')).unwrap();
        let cols: Vec<f64> = line.split(' ').map(|c| c.parse().unwrap()).collect();
        assert!((cols[3] - std::f64::consts::PI / 3.0).abs() < 1e-12);
        assert!((cols[5] - 0.2 * 4.0).abs() < 1e-12);
    }

    #[test]
    fn csv_layout() {
        let csv = rows_to_csv(&[row("ewens", "tv", 10, 0)]);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], CSV_SCHEMA);
        assert_eq!(lines[1].split(',').count(), CSV_COLUMNS.len());
        assert_eq!(lines[2].split(',').count(), CSV_COLUMNS.len());
        assert!(lines[2].contains("n/a"));
        assert_eq!(csv_field("a,b"), "\"a,b\"");
    }

    #[test]
    fn constants_rows() {
        let t = emit_constants_table();
        let lines: Vec<&str> = t.lines().collect();
        assert_eq!(lines.len(), 2 + CONSTANTS_MAX_ORDER + 1);
        let r0: Vec<f64> = lines[2].split(',').map(|c| c.parse().unwrap()).collect();
        assert_eq!(r0[0], 0.0);
        assert!((r0[2] - 1.0).abs() < 1e-12 && (r0[3] - 2.0).abs() < 1e-9);
        let r4: Vec<f64> = lines[6].split(',').map(|c| c.parse().unwrap()).collect();
        assert!((r4[2] - 3.0).abs() < 1e-9);
    }
}
