//! The comparison CSV: `axis,value,metric,source,bler,stderr,n,seed`.
//!
//! Floats use C `%.10e` formatting (two-digit exponent at least), lines end in
//! LF and rows are ordered by `(value, metric, source)`, so files are
//! byte-identical for identical inputs.

use std::cmp::Ordering;
use std::fmt;
use std::io::{self, Write};

pub const HEADER: &str = "axis,value,metric,source,bler,stderr,n,seed";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Metric {
    Cu,
    CeuSc,
    CeuMrc,
}

impl Metric {
    pub fn name(self) -> &'static str {
        match self {
            Metric::Cu => "cu",
            Metric::CeuSc => "ceu_sc",
            Metric::CeuMrc => "ceu_mrc",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Source {
    Analytic,
    /// The MRC closed form, a lower bound.
    AnalyticLb,
    Mc,
}

impl Source {
    pub fn name(self) -> &'static str {
        match self {
            Source::Mc => "mc",
            Source::Analytic => "analytic",
            Source::AnalyticLb => "analytic_lb",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub axis: &'static str,
    pub value: f64,
    pub metric: Metric,
    pub source: Source,
    pub bler: f64,
    pub stderr: f64,
    pub n: u64,
    pub seed: u64,
}

impl Row {
    fn order(&self, o: &Row) -> Ordering {
        self.value
            .total_cmp(&o.value)
            .then(self.metric.name().cmp(o.metric.name()))
            .then(self.source.name().cmp(o.source.name()))
    }
}

/// C-style `%.10e`.
pub struct Sci(pub f64);

impl fmt::Display for Sci {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = format!("{:.10e}", self.0);
        let Some((mantissa, exp)) = s.split_once('e') else {
            // inf / NaN
            return f.write_str(&s);
        };
        let exp: i32 = exp.parse().map_err(|_| fmt::Error)?;
        let sign = if exp < 0 { '-' } else { '+' };
        write!(f, "{mantissa}e{sign}{:02}", exp.abs())
    }
}

pub fn sort_rows(rows: &mut [Row]) {
    rows.sort_by(Row::order);
}

/// Sorts `rows` and writes header plus rows.
pub fn write_csv<W: Write>(rows: &mut [Row], mut out: W) -> io::Result<()> {
    sort_rows(rows);
    writeln!(out, "{HEADER}")?;
    for r in rows.iter() {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.axis,
            Sci(r.value),
            r.metric.name(),
            r.source.name(),
            Sci(r.bler),
            Sci(r.stderr),
            r.n,
            r.seed
        )?;
    }
    out.flush()
}

pub fn render_csv(rows: &mut [Row]) -> String {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("ascii output")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn c_style_scientific() {
        assert_eq!(Sci(0.0).to_string(), "0.0000000000e+00");
        assert_eq!(Sci(1.0).to_string(), "1.0000000000e+00");
        assert_eq!(Sci(6.58e-3).to_string(), "6.5800000000e-03");
        assert_eq!(Sci(-12345.678).to_string(), "-1.2345678000e+04");
        assert_eq!(Sci(1.5e-300).to_string(), "1.5000000000e-300");
        assert_eq!(Sci(2e100).to_string(), "2.0000000000e+100");
    }

    #[test]
    fn rows_sort_by_value_metric_source() {
        let row = |value, metric, source| Row {
            axis: "R",
            value,
            metric,
            source,
            bler: 0.5,
            stderr: 0.0,
            n: 0,
            seed: 0,
        };
        let mut rows = vec![
            row(8.0, Metric::Cu, Source::Mc),
            row(2.0, Metric::CeuSc, Source::Mc),
            row(2.0, Metric::CeuMrc, Source::Mc),
            row(2.0, Metric::CeuMrc, Source::AnalyticLb),
            row(2.0, Metric::Cu, Source::Analytic),
        ];
        sort_rows(&mut rows);
        let keys: Vec<_> = rows
            .iter()
            .map(|r| (r.value, r.metric.name(), r.source.name()))
            .collect();
        assert_eq!(
            keys,
            [
                (2.0, "ceu_mrc", "analytic_lb"),
                (2.0, "ceu_mrc", "mc"),
                (2.0, "ceu_sc", "mc"),
                (2.0, "cu", "analytic"),
                (8.0, "cu", "mc"),
            ]
        );
        let text = render_csv(&mut rows);
        assert!(text.starts_with("axis,value,metric,source,bler,stderr,n,seed\n"));
        assert!(!text.contains('\r'));
        assert_eq!(text.lines().count(), 6);
    }
}
