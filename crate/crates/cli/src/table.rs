//! Route comparison tables and their CSV / JSON encodings.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{json, Map, Value};
use xxcorr::exact::Route;
use xxcorr::Lattice;

use crate::{CliError, CliResult};

pub const SCHEMA_VERSION: u32 = 1;

/// Doubles with 17 significant digits, which round-trip exactly.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// `|a - b| / max(|a|, |b|)`, zero when both vanish.
pub fn relative_error(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Meta {
    pub tool: &'static str,
    pub version: &'static str,
    pub generated: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lattice: Option<Lattice>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c0: Option<f64>,
    pub warnings: Vec<String>,
    pub notes: Vec<String>,
}

impl Meta {
    pub fn new() -> Self {
        Meta {
            tool: "xxcorr",
            version: env!("CARGO_PKG_VERSION"),
            generated: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
            lattice: None,
            alpha: None,
            c0: None,
            warnings: Vec::new(),
            notes: Vec::new(),
        }
    }

    /// `# key: value` lines, for the stderr side channel of CSV output.
    pub fn comment_block(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# {} {} generated {}", self.tool, self.version, self.generated);
        if let Some(l) = self.lattice {
            let _ = writeln!(out, "# lattice: {l}");
        }
        if let (Some(a), Some(c)) = (self.alpha, self.c0) {
            let _ = writeln!(out, "# alpha: {a}, c0: {}", fmt_f64(c));
        }
        for w in &self.warnings {
            let _ = writeln!(out, "# warning: {w}");
        }
        for n in &self.notes {
            let _ = writeln!(out, "# note: {n}");
        }
        out
    }
}

impl Default for Meta {
    fn default() -> Self {
        Self::new()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub x: usize,
    /// Aligned with [`Table::routes`].
    pub values: Vec<f64>,
    /// Aligned with [`Table::pairs`].
    pub relerr: Vec<f64>,
}

/// The numeric body of a comparison: one column per route, one per pair.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub routes: Vec<Route>,
    pub pairs: Vec<(Route, Route)>,
    pub rows: Vec<Row>,
}

fn pair_name(a: Route, b: Route) -> String {
    format!("relerr:{}-{}", a.name(), b.name())
}

impl Table {
    /// Every unordered pair of `routes`, in column order.
    pub fn all_pairs(routes: &[Route]) -> Vec<(Route, Route)> {
        let mut pairs = Vec::new();
        for (i, &a) in routes.iter().enumerate() {
            for &b in &routes[i + 1..] {
                pairs.push((a, b));
            }
        }
        pairs
    }

    pub fn header(&self) -> Vec<String> {
        let mut h = vec!["x".to_string()];
        h.extend(self.routes.iter().map(|r| format!("route:{}", r.name())));
        h.extend(self.pairs.iter().map(|&(a, b)| pair_name(a, b)));
        h
    }

    pub fn to_csv(&self) -> CliResult<String> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(self.header())?;
        for row in &self.rows {
            let mut rec = vec![row.x.to_string()];
            rec.extend(row.values.iter().chain(&row.relerr).map(|&v| fmt_f64(v)));
            w.write_record(&rec)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Numerical(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| CliError::Numerical(e.to_string()))
    }

    pub fn from_csv(text: &str) -> CliResult<Table> {
        let bad = |msg: String| CliError::Usage(format!("malformed comparison CSV: {msg}"));
        let mut r = csv::ReaderBuilder::new().from_reader(text.as_bytes());
        let header = r.headers().map_err(|e| bad(e.to_string()))?.clone();
        if header.get(0) != Some("x") {
            return Err(bad("first column must be x".into()));
        }
        let mut routes = Vec::new();
        let mut pairs = Vec::new();
        for name in header.iter().skip(1) {
            if let Some(route) = name.strip_prefix("route:") {
                let route = Route::from_name(route).ok_or_else(|| bad(format!("route {route}")))?;
                routes.push(route);
            } else if let Some(pair) = name.strip_prefix("relerr:") {
                let (a, b) = pair.split_once('-').ok_or_else(|| bad(format!("pair {pair}")))?;
                let a = Route::from_name(a).ok_or_else(|| bad(format!("route {a}")))?;
                let b = Route::from_name(b).ok_or_else(|| bad(format!("route {b}")))?;
                pairs.push((a, b));
            } else {
                return Err(bad(format!("column {name}")));
            }
        }
        let mut rows = Vec::new();
        for rec in r.records() {
            let rec = rec.map_err(|e| bad(e.to_string()))?;
            if rec.len() != 1 + routes.len() + pairs.len() {
                return Err(bad(format!("row has {} fields", rec.len())));
            }
            let x = rec[0].parse().map_err(|_| bad(format!("x = {:?}", &rec[0])))?;
            let nums = rec
                .iter()
                .skip(1)
                .map(|f| f.parse::<f64>().map_err(|_| bad(format!("number {f:?}"))))
                .collect::<CliResult<Vec<f64>>>()?;
            let (values, relerr) = nums.split_at(routes.len());
            rows.push(Row { x, values: values.to_vec(), relerr: relerr.to_vec() });
        }
        Ok(Table { routes, pairs, rows })
    }

    fn rows_json(&self) -> Value {
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let values: Map<String, Value> = self
                    .routes
                    .iter()
                    .zip(&row.values)
                    .map(|(r, &v)| (r.name().to_string(), json!(v)))
                    .collect();
                let relerr: Map<String, Value> = self
                    .pairs
                    .iter()
                    .zip(&row.relerr)
                    .map(|(&(a, b), &v)| (format!("{}-{}", a.name(), b.name()), json!(v)))
                    .collect();
                json!({ "x": row.x, "values": values, "relerr": relerr })
            })
            .collect();
        Value::Array(rows)
    }

    /// Largest entry of each relative-error column.
    pub fn max_relerr(&self) -> Vec<((Route, Route), f64)> {
        self.pairs
            .iter()
            .enumerate()
            .map(|(j, &p)| (p, self.rows.iter().map(|r| r.relerr[j]).fold(0.0, f64::max)))
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct RouteComparison {
    pub lattice: Lattice,
    pub meta: Meta,
    pub table: Table,
}

impl RouteComparison {
    pub fn to_json(&self) -> CliResult<String> {
        let doc = json!({
            "schema_version": SCHEMA_VERSION,
            "command": "correlator",
            "meta": self.meta,
            "rows": self.table.rows_json(),
        });
        Ok(serde_json::to_string_pretty(&doc)? + "\n")
    }
}
