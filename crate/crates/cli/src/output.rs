//! CSV rows and plot scripts.

use std::io::{Read, Write};
use std::str::FromStr;

use crate::error::{CliError, CliResult};

/// How a row was computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Analytic,
    Spectral,
    Lyapunov,
    Ensemble,
}

impl Method {
    pub const ALL: [Method; 4] = [
        Method::Analytic,
        Method::Spectral,
        Method::Lyapunov,
        Method::Ensemble,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Analytic => "analytic",
            Method::Spectral => "spectral",
            Method::Lyapunov => "lyapunov",
            Method::Ensemble => "ensemble",
        }
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown method `{s}`"))
    }
}

/// One swept point evaluated by one method.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub variable: String,
    pub value: f64,
    /// Name and value of the curve parameter, when the sweep has several.
    pub series_variable: Option<String>,
    pub series_value: Option<f64>,
    pub method: Method,
    pub q2: f64,
    pub p2: f64,
    pub qp_sym: f64,
    pub energy_units: f64,
    pub occupancy: Option<f64>,
    pub contractive: bool,
    pub squeezed: bool,
    /// Only defined for the ring scheme.
    pub entangled: Option<bool>,
}

pub const SWEEP_HEADER: [&str; 13] = [
    "variable",
    "value",
    "series_variable",
    "series_value",
    "method",
    "q2",
    "p2",
    "qp_sym",
    "energy_units",
    "occupancy",
    "contractive",
    "squeezed",
    "entangled",
];

/// 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn opt<T>(v: Option<T>, f: impl Fn(T) -> String) -> String {
    v.map(f).unwrap_or_default()
}

impl SweepRow {
    fn record(&self) -> Vec<String> {
        vec![
            self.variable.clone(),
            fmt_f64(self.value),
            self.series_variable.clone().unwrap_or_default(),
            opt(self.series_value, fmt_f64),
            self.method.name().to_string(),
            fmt_f64(self.q2),
            fmt_f64(self.p2),
            fmt_f64(self.qp_sym),
            fmt_f64(self.energy_units),
            opt(self.occupancy, fmt_f64),
            self.contractive.to_string(),
            self.squeezed.to_string(),
            opt(self.entangled, |b| b.to_string()),
        ]
    }

    fn from_record(r: &csv::StringRecord, line: u64) -> CliResult<Self> {
        let bad = |col: &str, v: &str| {
            CliError::Validation(format!("line {line}: bad value `{v}` in column `{col}`"))
        };
        let field = |i: usize| r.get(i).unwrap_or("");
        let num = |i: usize| -> CliResult<f64> {
            field(i).parse().map_err(|_| bad(SWEEP_HEADER[i], field(i)))
        };
        let opt_num = |i: usize| -> CliResult<Option<f64>> {
            if field(i).is_empty() {
                Ok(None)
            } else {
                num(i).map(Some)
            }
        };
        let flag = |i: usize| -> CliResult<bool> {
            field(i).parse().map_err(|_| bad(SWEEP_HEADER[i], field(i)))
        };
        if r.len() != SWEEP_HEADER.len() {
            return Err(CliError::Validation(format!(
                "line {line}: expected {} columns, found {}",
                SWEEP_HEADER.len(),
                r.len()
            )));
        }
        Ok(Self {
            variable: field(0).to_string(),
            value: num(1)?,
            series_variable: (!field(2).is_empty()).then(|| field(2).to_string()),
            series_value: opt_num(3)?,
            method: field(4).parse().map_err(|_| bad("method", field(4)))?,
            q2: num(5)?,
            p2: num(6)?,
            qp_sym: num(7)?,
            energy_units: num(8)?,
            occupancy: opt_num(9)?,
            contractive: flag(10)?,
            squeezed: flag(11)?,
            entangled: if field(12).is_empty() {
                None
            } else {
                Some(flag(12)?)
            },
        })
    }
}

pub fn write_sweep<W: Write>(out: W, rows: &[SweepRow]) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SWEEP_HEADER)?;
    for r in rows {
        w.write_record(r.record())?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_sweep<R: Read>(input: R) -> CliResult<Vec<SweepRow>> {
    let mut rd = csv::Reader::from_reader(input);
    let header = rd.headers()?.clone();
    if header.iter().ne(SWEEP_HEADER) {
        return Err(CliError::Validation(format!(
            "unexpected header `{}`",
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    rd.records()
        .enumerate()
        .map(|(i, r)| SweepRow::from_record(&r?, i as u64 + 2))
        .collect()
}

/// Point of a figure curve.
#[derive(Debug, Clone, PartialEq)]
pub struct FigurePoint {
    /// Curve label, e.g. `a`.
    pub series: String,
    /// Value of the parameter distinguishing the curves.
    pub parameter: f64,
    pub x: f64,
    pub y: f64,
}

pub const FIGURE_HEADER: [&str; 4] = ["series", "parameter", "x", "y"];

pub fn write_figure<W: Write>(out: W, points: &[FigurePoint]) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(FIGURE_HEADER)?;
    for p in points {
        w.write_record([
            p.series.clone(),
            fmt_f64(p.parameter),
            fmt_f64(p.x),
            fmt_f64(p.y),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_figure<R: Read>(input: R) -> CliResult<Vec<FigurePoint>> {
    let mut rd = csv::Reader::from_reader(input);
    let mut out = Vec::new();
    for (i, r) in rd.records().enumerate() {
        let r = r?;
        let num = |k: usize| -> CliResult<f64> {
            r.get(k).unwrap_or("").parse().map_err(|_| {
                CliError::Validation(format!("line {}: bad number in column {}", i + 2, FIGURE_HEADER[k]))
            })
        };
        out.push(FigurePoint {
            series: r.get(0).unwrap_or("").to_string(),
            parameter: num(1)?,
            x: num(2)?,
            y: num(3)?,
        });
    }
    Ok(out)
}

/// Axis and labelling of a gnuplot script.
#[derive(Debug, Clone, PartialEq)]
pub struct PlotSpec {
    pub title: String,
    pub xlabel: String,
    pub ylabel: String,
    pub logx: bool,
    pub logy: bool,
    /// Horizontal reference line with its label.
    pub reference: Option<(f64, String)>,
}

/// gnuplot script plotting every series of `csv_name`, one curve each.
/// Series must appear in contiguous blocks in the CSV.
pub fn gnuplot_script(spec: &PlotSpec, csv_name: &str, series: &[(String, String)]) -> String {
    let mut s = String::new();
    s.push_str("set datafile separator ','\n");
    s.push_str(&format!("set title \"{}\"\n", spec.title));
    s.push_str(&format!("set xlabel \"{}\"\n", spec.xlabel));
    s.push_str(&format!("set ylabel \"{}\"\n", spec.ylabel));
    if spec.logx {
        s.push_str("set logscale x\nset format x \"10^{%L}\"\n");
    }
    if spec.logy {
        s.push_str("set logscale y\nset format y \"10^{%L}\"\n");
    }
    s.push_str("set key top right\n");
    let mut plots: Vec<String> = series
        .iter()
        .map(|(name, label)| {
            format!(
                "'{csv_name}' skip 1 using 3:(strcol(1) eq '{name}' ? $4 : 1/0) with lines title \"{label}\""
            )
        })
        .collect();
    if let Some((y, label)) = &spec.reference {
        plots.push(format!("{y} with lines dashtype 2 title \"{label}\""));
    }
    s.push_str("plot ");
    s.push_str(&plots.join(", \\\n     "));
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn format_keeps_seventeen_digits() {
        let v = 0.1 + 0.2;
        assert_eq!(fmt_f64(v).parse::<f64>().unwrap(), v);
        assert_eq!(fmt_f64(1.0), "1.0000000000000000e0");
    }

    #[test]
    fn script_mentions_every_series() {
        let spec = PlotSpec {
            title: "t".into(),
            xlabel: "x".into(),
            ylabel: "y".into(),
            logx: true,
            logy: false,
            reference: Some((0.25, "SQL".into())),
        };
        let s = gnuplot_script(&spec, "f.csv", &[("a".into(), "A".into()), ("b".into(), "B".into())]);
        assert!(s.contains("separator ','"));
        assert!(s.contains("'a'") && s.contains("'b'") && s.contains("0.25"));
        assert!(s.contains("logscale x") && !s.contains("logscale y"));
    }
}
