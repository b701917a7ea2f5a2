//! gnuplot script that redraws concurrence against ε from the sweep CSV.
//! Each (β, outcome) panel holds one curve per collision count, with the
//! fixed-order baseline drawn in red.

use std::io::{self, Write};

use qswitch::experiments::{EngineKind, RecordKind, SweepRecord};

use crate::csv::fmt_float;

fn distinct<T: PartialEq + Copy>(items: impl Iterator<Item = T>) -> Vec<T> {
    let mut out = Vec::new();
    for x in items {
        if !out.contains(&x) {
            out.push(x);
        }
    }
    out
}

/// Text of a gnuplot `using` filter selecting rows by their CSV fields.
fn select(kind: &str, n: u32, beta: &str, engine: &str) -> String {
    format!(
        "using 1:((strcol(4) eq \"{kind}\" && strcol(2) eq \"{n}\" && strcol(3) eq \"{beta}\" && strcol(7) eq \"{engine}\") ? $6 : NaN)"
    )
}

/// `csv_name` is written into the script as given, so pass a path relative
/// to where the script will be run.
pub fn write_plot_script<W: Write>(
    records: &[SweepRecord],
    csv_name: &str,
    overrides: &[String],
    mut out: W,
) -> io::Result<()> {
    let ns = distinct(records.iter().map(|r| r.n));
    let betas = distinct(records.iter().map(|r| r.beta.to_bits())).into_iter().map(f64::from_bits);
    let betas: Vec<f64> = betas.collect();
    let outcomes = distinct(records.iter().filter_map(|r| match r.kind {
        RecordKind::Post(o) => Some(o),
        RecordKind::Definite => None,
    }));
    let has_definite = records.iter().any(|r| r.kind == RecordKind::Definite);
    let engine =
        records.iter().find(|r| r.kind != RecordKind::Definite).map_or(EngineKind::Analytic, |r| r.engine).as_str();

    writeln!(out, "# qswitch sweep plot, data read from {csv_name}")?;
    for o in overrides {
        writeln!(out, "# override: {o}")?;
    }
    let panel_kinds: Vec<RecordKind> = if outcomes.is_empty() {
        vec![RecordKind::Definite]
    } else {
        outcomes.iter().map(|&o| RecordKind::Post(o)).collect()
    };
    let cols = panel_kinds.len();
    writeln!(out, "set datafile separator ','")?;
    writeln!(out, "set terminal pngcairo size {},{} enhanced", 640 * cols, 480 * betas.len())?;
    writeln!(out, "set output 'sweep.png'")?;
    writeln!(out, "set xrange [0:1]")?;
    writeln!(out, "set yrange [0:1]")?;
    writeln!(out, "set xlabel 'monitoring strength {{/Symbol e}}'")?;
    writeln!(out, "set ylabel 'concurrence'")?;
    writeln!(out, "set key top right")?;
    writeln!(out, "set multiplot layout {},{}", betas.len(), cols)?;
    for &beta in &betas {
        let b = fmt_float(beta);
        for kind in &panel_kinds {
            writeln!(out, "set title '{} outcome, beta = {b}'", kind.as_str())?;
            let mut curves = Vec::new();
            if let RecordKind::Post(_) = kind {
                for (i, &n) in ns.iter().enumerate() {
                    curves.push(format!(
                        "'{csv_name}' {} with lines lc {} title 'n = {n}'",
                        select(kind.as_str(), n, &b, engine),
                        i + 2
                    ));
                }
            }
            if has_definite {
                curves.push(format!(
                    "'{csv_name}' {} with lines lw 2 lc rgb 'red' title 'definite'",
                    select("definite", ns[0], &b, EngineKind::Analytic.as_str())
                ));
            }
            writeln!(out, "plot {}", curves.join(", \\\n     "))?;
        }
    }
    writeln!(out, "unset multiplot")?;
    out.flush()
}

pub fn plot_script_string(records: &[SweepRecord], csv_name: &str, overrides: &[String]) -> String {
    let mut buf = Vec::new();
    write_plot_script(records, csv_name, overrides, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("UTF-8 output")
}
