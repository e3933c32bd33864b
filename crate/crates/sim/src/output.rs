//! CSV and JSON rendering and atomic file output.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::config::Format;
use crate::error::SimError;
use crate::experiment::{OfflineReport, Report, ResultRow, VerifyReport};

pub const CSV_HEADER: &str = "trial,t,reward,cum_reward,cum_opt,alpha_regret,queries";
pub const OFFLINE_CSV_HEADER: &str = "instance,algorithm,value,opt,ratio,queries,std_err";

/// Significant digits in CSV output.
pub const CSV_DIGITS: usize = 12;

/// `x` to `digits` significant digits in the style of C's `%g`: fixed
/// notation for decimal exponents in `[-4, digits)`, scientific otherwise,
/// trailing zeros removed.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    if x == 0.0 {
        // Negative zero prints as 0.
        return "0".into();
    }
    let precision = digits.max(1) - 1;
    // Rounding to `digits` places may bump the exponent, so read it back.
    let sci = format!("{:.*e}", precision, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (precision as i32 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_owned()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn opt_cell(out: &mut String, v: Option<f64>) {
    if let Some(v) = v {
        out.push_str(&format_sig(v, CSV_DIGITS));
    }
}

pub fn rows_csv(rows: &[ResultRow]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        write!(out, "{},{},{},{},", r.trial, r.t, format_sig(r.reward, CSV_DIGITS), format_sig(r.cum_reward, CSV_DIGITS))
            .unwrap();
        opt_cell(&mut out, r.cum_opt);
        out.push(',');
        opt_cell(&mut out, r.alpha_regret);
        writeln!(out, ",{}", r.queries).unwrap();
    }
    out
}

pub fn offline_csv(report: &OfflineReport) -> String {
    let mut out = String::from(OFFLINE_CSV_HEADER);
    out.push('\n');
    for r in &report.rows {
        write!(
            out,
            "{},{},{},{},{},{},",
            r.instance,
            r.algorithm,
            format_sig(r.value, CSV_DIGITS),
            format_sig(r.opt, CSV_DIGITS),
            format_sig(r.ratio, CSV_DIGITS),
            r.queries
        )
        .unwrap();
        opt_cell(&mut out, r.std_err);
        out.push('\n');
    }
    out
}

fn json<T: Serialize>(value: &T) -> Result<String, SimError> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| SimError::Io(format!("encoding json: {e}")))?;
    s.push('\n');
    Ok(s)
}

/// The report in its configured format. Summary-only JSON drops `rows`.
pub fn render_report(report: &Report) -> Result<String, SimError> {
    match report.config.format {
        Format::Csv => Ok(rows_csv(&report.rows)),
        Format::Json if report.config.summary_only => {
            let mut value = serde_json::to_value(report).map_err(|e| SimError::Io(format!("encoding json: {e}")))?;
            value.as_object_mut().expect("report is an object").remove("rows");
            json(&value)
        }
        Format::Json => json(report),
    }
}

pub fn render_offline(report: &OfflineReport) -> Result<String, SimError> {
    match report.config.format {
        Format::Csv => Ok(offline_csv(report)),
        Format::Json => json(report),
    }
}

pub fn render_verify(report: &VerifyReport, format: Format) -> Result<String, SimError> {
    match format {
        Format::Json => json(report),
        Format::Csv => {
            let mut out = String::from("graph,n,mode,submodular,s,t,i,marginal_s,marginal_t\n");
            write!(out, "{},{},{},{},", report.graph, report.n, report.mode, report.submodular).unwrap();
            match &report.witness {
                Some((s, t, i, ms, mt)) => writeln!(
                    out,
                    "\"{s}\",\"{t}\",{i},{},{}",
                    format_sig(*ms, CSV_DIGITS),
                    format_sig(*mt, CSV_DIGITS)
                )
                .unwrap(),
                None => out.push_str(",,,,\n"),
            }
            Ok(out)
        }
    }
}

/// Writes `contents` to `path` through a temporary file in the same
/// directory, so readers never observe a partial file.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), SimError> {
    let io = |e: std::io::Error| SimError::Io(format!("writing {}: {e}", path.display()));
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(contents).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

/// Writes to `path`, or to standard output when absent.
pub fn emit(path: Option<&Path>, contents: &str) -> Result<(), SimError> {
    match path {
        Some(p) => write_atomic(p, contents.as_bytes()),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(contents.as_bytes())
                .and_then(|()| stdout.flush())
                .map_err(|e| SimError::Io(format!("writing standard output: {e}")))
        }
    }
}
