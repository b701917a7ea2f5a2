//! Sweep records as CSV: fixed header, LF endings, shortest round-trip
//! decimals, `inf` for an infinite β and an empty field for an undefined
//! concurrence.

use std::io::{self, Write};

use qswitch::experiments::SweepRecord;

pub const HEADER: &str = "epsilon,n,beta,postselect,p_post,concurrence,engine";

/// Rust's `Display` for `f64` is already the shortest string that parses
/// back to the same value; only the sign of zero and infinity need care.
pub fn fmt_float(x: f64) -> String {
    if x == 0.0 {
        "0".to_string()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        x.to_string()
    }
}

pub fn format_record(r: &SweepRecord) -> String {
    format!(
        "{},{},{},{},{},{},{}",
        fmt_float(r.epsilon),
        r.n,
        fmt_float(r.beta),
        r.kind.as_str(),
        fmt_float(r.p_post),
        r.concurrence.map(fmt_float).unwrap_or_default(),
        r.engine.as_str()
    )
}

pub fn write_csv<W: Write>(records: &[SweepRecord], mut sink: W) -> io::Result<()> {
    sink.write_all(HEADER.as_bytes())?;
    sink.write_all(b"\n")?;
    for r in records {
        sink.write_all(format_record(r).as_bytes())?;
        sink.write_all(b"\n")?;
    }
    sink.flush()
}

pub fn to_csv_string(records: &[SweepRecord]) -> String {
    let mut buf = Vec::new();
    write_csv(records, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("ASCII output")
}
