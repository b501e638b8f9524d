//! CSV rows: fixed header, 12 significant digits, blanks for inapplicable columns.

use std::io::{Read, Write};
use std::path::Path;

use telefid::ResourceFamily;

use crate::error::{CliError, CliResult};

pub const HEADER: [&str; 13] = [
    "resource", "r", "tau", "nth", "r2", "gain", "delta_opt", "gamma_opt", "sigma", "beta_re", "beta_im", "method",
    "fidelity",
];

#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub resource: ResourceFamily,
    pub r: f64,
    pub tau: f64,
    pub nth: f64,
    pub r2: f64,
    /// The gain `g` itself, not `g T`.
    pub gain: f64,
    pub delta_opt: Option<f64>,
    pub gamma_opt: Option<f64>,
    pub sigma: Option<f64>,
    pub beta_re: Option<f64>,
    pub beta_im: Option<f64>,
    pub method: String,
    pub fidelity: f64,
}

/// `printf("%.12g")`.
pub fn format_number(x: f64) -> String {
    const DIGITS: i32 = 12;
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..DIGITS).contains(&exp) {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        trim_zeros(&format!("{:.*}", (DIGITS - 1 - exp) as usize, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(format_number).unwrap_or_default()
}

impl ResultRow {
    pub fn record(&self) -> [String; 13] {
        [
            self.resource.name().to_string(),
            format_number(self.r),
            format_number(self.tau),
            format_number(self.nth),
            format_number(self.r2),
            format_number(self.gain),
            opt(self.delta_opt),
            opt(self.gamma_opt),
            opt(self.sigma),
            opt(self.beta_re),
            opt(self.beta_im),
            self.method.clone(),
            format_number(self.fidelity),
        ]
    }

    pub fn from_record(rec: &csv::StringRecord) -> CliResult<Self> {
        if rec.len() != HEADER.len() {
            return Err(CliError::Usage(format!("expected {} fields, found {}", HEADER.len(), rec.len())));
        }
        let num = |i: usize| -> CliResult<f64> {
            rec[i].parse().map_err(|_| CliError::Usage(format!("column {}: not a number: {:?}", HEADER[i], &rec[i])))
        };
        let maybe = |i: usize| -> CliResult<Option<f64>> { if rec[i].is_empty() { Ok(None) } else { num(i).map(Some) } };
        Ok(Self {
            resource: rec[0].parse().map_err(|e: telefid::Error| CliError::Usage(e.to_string()))?,
            r: num(1)?,
            tau: num(2)?,
            nth: num(3)?,
            r2: num(4)?,
            gain: num(5)?,
            delta_opt: maybe(6)?,
            gamma_opt: maybe(7)?,
            sigma: maybe(8)?,
            beta_re: maybe(9)?,
            beta_im: maybe(10)?,
            method: rec[11].to_string(),
            fidelity: num(12)?,
        })
    }
}

pub fn write_rows<W: Write>(out: W, rows: &[ResultRow]) -> CliResult<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(HEADER)?;
    for row in rows {
        w.write_record(row.record())?;
    }
    w.flush().map_err(|source| CliError::Io { path: "<output>".into(), source })?;
    Ok(())
}

pub fn to_string(rows: &[ResultRow]) -> CliResult<String> {
    let mut buf = Vec::new();
    write_rows(&mut buf, rows)?;
    Ok(String::from_utf8(buf).expect("CSV output is UTF-8"))
}

pub fn emit_csv(rows: &[ResultRow], path: &Path) -> CliResult<()> {
    let io = |source| CliError::Io { path: path.display().to_string(), source };
    let mut file = std::fs::File::create(path).map_err(io)?;
    file.write_all(to_string(rows)?.as_bytes()).map_err(io)?;
    Ok(())
}

pub fn read_rows<R: Read>(input: R) -> CliResult<Vec<ResultRow>> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
    let header = rdr.headers()?.clone();
    if header.iter().ne(HEADER.iter().copied()) {
        return Err(CliError::Usage(format!("unexpected header: {:?}", header)));
    }
    rdr.records().map(|rec| ResultRow::from_record(&rec?)).collect()
}
