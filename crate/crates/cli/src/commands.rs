//! The `correlator`, `constants` and `finite-size` subcommands.
//!
//! Each command returns an [`Outcome`]: the document for stdout (or
//! `--out`), diagnostics for stderr, and an optional failure that sets the
//! exit status after the document has been written.

use rayon::prelude::*;
use serde_json::json;
use xxcorr::asymptotics::{asym_finite, asym_infinite, AsymptoticParams};
use xxcorr::constants::{amplitude_report, ConstantsReport, MIN_FIT_SIZE};
use xxcorr::exact::{self, Route, DET_GUARD};
use xxcorr::greens::Ring;
use xxcorr::oracle::{ed_ground_state, MAX_ED_LEN};
use xxcorr::Lattice;

use crate::table::{fmt_f64, relative_error, Meta, RouteComparison, Row, Table, SCHEMA_VERSION};
use crate::{usage, CliError, CliResult};

/// Exact routes must agree at least this well.
pub const ROUTE_TOLERANCE: f64 = 1e-9;
/// Largest spread of the four `ln B` routes accepted by `constants`.
pub const CONSTANTS_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug)]
pub struct Outcome {
    pub document: String,
    pub diagnostics: String,
    pub failure: Option<CliError>,
}

pub fn parse_routes(spec: &str) -> CliResult<Vec<Route>> {
    let mut routes = Vec::new();
    for name in spec.split(',').map(str::trim) {
        let route = Route::from_name(name).ok_or_else(|| {
            usage(format!("unknown route {name:?} (expected det, product, ed, asym, asym2)"))
        })?;
        if !routes.contains(&route) {
            routes.push(route);
        }
    }
    Ok(routes)
}

#[derive(Debug, Clone)]
pub struct CorrelatorArgs {
    pub lattice: String,
    pub x_max: usize,
    pub routes: String,
    pub format: Format,
}

pub fn correlator(args: &CorrelatorArgs) -> CliResult<Outcome> {
    let lattice: Lattice = args.lattice.parse()?;
    let mut routes = parse_routes(&args.routes)?;
    let mut meta = Meta::new();
    meta.lattice = Some(lattice);

    if args.x_max == 0 {
        return Err(usage("--x-max must be at least 1"));
    }
    if let Some(len) = lattice.len() {
        if args.x_max > len - 1 {
            return Err(usage(format!("--x-max {} exceeds L - 1 = {}", args.x_max, len - 1)));
        }
    }
    if routes.contains(&Route::Det) && args.x_max > DET_GUARD {
        return Err(usage(format!("the det route is limited to x <= {DET_GUARD}")));
    }
    if routes.contains(&Route::AsymSub) && !lattice.is_infinite() {
        return Err(usage("route asym2 is only defined for --L inf"));
    }
    let ed_len = lattice.len().filter(|&l| l <= MAX_ED_LEN);
    if routes.contains(&Route::Ed) && ed_len.is_none() {
        routes.retain(|&r| r != Route::Ed);
        meta.warnings.push(format!("ED route disabled for L = {lattice} (needs L <= {MAX_ED_LEN})"));
    }
    if routes.len() < 2 {
        return Err(usage("--routes must name at least two usable routes"));
    }
    if let Some(len) = lattice.len() {
        if routes.contains(&Route::Product) && args.x_max == len - 1 {
            meta.notes.push(format!(
                "product column at x = {} uses the determinant (outside 2N <= L - 1)",
                len - 1
            ));
        }
    }

    let params = AsymptoticParams::xx();
    meta.alpha = Some(params.alpha);
    meta.c0 = Some(params.c0);
    let ground = match (routes.contains(&Route::Ed), ed_len) {
        (true, Some(len)) => Some(ed_ground_state(len)?),
        _ => None,
    };

    let value = |route: Route, x: usize| -> CliResult<f64> {
        Ok(match route {
            Route::Det => exact::correlator_det(x, lattice)?,
            Route::Product => exact::correlator(x, lattice)?.value,
            Route::Ed => ground.as_ref().expect("ground state solved above").correlator(x)?,
            Route::AsymLeading => match lattice.len() {
                Some(len) => asym_finite(x, len, &params)?,
                None => asym_infinite(x, &params)?.0,
            },
            Route::AsymSub => asym_infinite(x, &params)?.1,
        })
    };
    let pairs = Table::all_pairs(&routes);
    let rows = (1..=args.x_max)
        .into_par_iter()
        .map(|x| {
            let values = routes.iter().map(|&r| value(r, x)).collect::<CliResult<Vec<_>>>()?;
            let relerr = pairs
                .iter()
                .map(|&(a, b)| {
                    let ia = routes.iter().position(|&r| r == a).expect("route listed");
                    let ib = routes.iter().position(|&r| r == b).expect("route listed");
                    relative_error(values[ia], values[ib])
                })
                .collect();
            Ok(Row { x, values, relerr })
        })
        .collect::<CliResult<Vec<Row>>>()?;
    let cmp = RouteComparison { lattice, meta, table: Table { routes, pairs, rows } };

    let mut diagnostics = String::new();
    let mut failure = None;
    for ((a, b), worst) in cmp.table.max_relerr() {
        diagnostics.push_str(&format!("# max relerr {}-{}: {}\n", a.name(), b.name(), fmt_f64(worst)));
        if a.is_exact() && b.is_exact() && worst > ROUTE_TOLERANCE && failure.is_none() {
            failure = Some(CliError::Numerical(format!(
                "routes {} and {} disagree by {worst:e} (tolerance {ROUTE_TOLERANCE:e})",
                a.name(),
                b.name()
            )));
        }
    }
    let document = match args.format {
        Format::Csv => {
            diagnostics.insert_str(0, &cmp.meta.comment_block());
            cmp.table.to_csv()?
        }
        Format::Json => cmp.to_json()?,
    };
    Ok(Outcome { document, diagnostics, failure })
}

#[derive(Debug, Clone)]
pub struct ConstantsArgs {
    pub n_fit: usize,
    pub x_fit_max: usize,
    pub format: Format,
}

/// Report fields in display order.
pub fn report_fields(r: &ConstantsReport) -> [(&'static str, f64); 12] {
    [
        ("pairwiseMaxDev", r.pairwise_max_dev),
        ("lnB_series", r.ln_b_series),
        ("lnB_integral", r.ln_b_integral),
        ("lnB_gammaProduct", r.ln_b_gamma_product),
        ("lnB_fit", r.ln_b_fit),
        ("glaisherA", r.glaisher_a),
        ("zetaPrimeMinus1", r.zeta_prime_minus1),
        ("bFromGlaisher", r.b_from_glaisher),
        ("c0", r.c0),
        ("amplitudeHalf", r.amplitude_half),
        ("lukyanovIntegral", r.lukyanov_integral),
        ("subCoeffFitted", r.sub_coeff_fitted),
    ]
}

pub fn constants(args: &ConstantsArgs) -> CliResult<Outcome> {
    for (flag, v) in [("--n-fit", args.n_fit), ("--x-fit-max", args.x_fit_max)] {
        if v < MIN_FIT_SIZE {
            return Err(usage(format!("{flag} must be at least {MIN_FIT_SIZE}, got {v}")));
        }
    }
    let report = amplitude_report(args.n_fit, args.x_fit_max)?;
    let mut meta = Meta::new();
    meta.notes.push(format!("n_fit = {}, x_fit_max = {}", args.n_fit, args.x_fit_max));

    let mut diagnostics = format!(
        "pairwiseMaxDev = {} (limit {CONSTANTS_TOLERANCE:e})\n",
        fmt_f64(report.pairwise_max_dev)
    );
    let failure = (report.pairwise_max_dev > CONSTANTS_TOLERANCE).then(|| {
        CliError::Numerical(format!(
            "ln B routes spread by {:e}, above {CONSTANTS_TOLERANCE:e}",
            report.pairwise_max_dev
        ))
    });
    let document = match args.format {
        Format::Csv => {
            diagnostics.insert_str(0, &meta.comment_block());
            let mut out = String::from("name,value\n");
            for (name, v) in report_fields(&report) {
                out.push_str(&format!("{name},{}\n", fmt_f64(v)));
            }
            out
        }
        Format::Json => {
            let doc = json!({
                "schema_version": SCHEMA_VERSION,
                "command": "constants",
                "meta": meta,
                "constants": report,
            });
            serde_json::to_string_pretty(&doc)? + "\n"
        }
    };
    Ok(Outcome { document, diagnostics, failure })
}

#[derive(Debug, Clone)]
pub struct FiniteSizeArgs {
    pub l_list: String,
    pub x_frac: f64,
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingRow {
    pub len: usize,
    pub x: usize,
    pub exact: f64,
    pub asym: f64,
    /// `(exact / asym - 1) · L`
    pub scaled: f64,
    /// `(exact / asym - 1) · L²`
    pub scaled_sq: f64,
}

/// Relative spread `(max - min) / max|·|` of a column.
pub fn spread(values: &[f64]) -> f64 {
    let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    (hi - lo) / hi.abs().max(lo.abs())
}

pub fn parse_lengths(list: &str) -> CliResult<Vec<usize>> {
    let lengths = list
        .split(',')
        .map(|s| {
            let s = s.trim();
            s.parse::<usize>().map_err(|_| usage(format!("malformed --L-list entry {s:?}")))
        })
        .collect::<CliResult<Vec<_>>>()?;
    if lengths.is_empty() {
        return Err(usage("--L-list is empty"));
    }
    Ok(lengths)
}

pub fn finite_size(args: &FiniteSizeArgs) -> CliResult<Outcome> {
    if !(args.x_frac > 0.0 && args.x_frac < 1.0) {
        return Err(usage(format!("--x-frac must lie in (0, 1), got {}", args.x_frac)));
    }
    let requested = parse_lengths(&args.l_list)?;
    let params = AsymptoticParams::xx();
    let mut meta = Meta::new();
    meta.alpha = Some(params.alpha);
    meta.c0 = Some(params.c0);

    let mut rings = Vec::with_capacity(requested.len());
    for &l in &requested {
        let ring = Ring::at_least(l);
        if ring.len() != l {
            meta.notes.push(format!("L = {l} adjusted to {} (L/2 odd)", ring.len()));
        }
        rings.push(ring);
    }
    let rows = rings
        .par_iter()
        .map(|&ring| {
            let len = ring.len();
            let x = ((args.x_frac * len as f64).round() as usize).clamp(1, len - 1);
            let exact = exact::correlator(x, Lattice::Finite(ring))?.value;
            let asym = asym_finite(x, len, &params)?;
            let dev = exact / asym - 1.0;
            let lf = len as f64;
            Ok(ScalingRow { len, x, exact, asym, scaled: dev * lf, scaled_sq: dev * lf * lf })
        })
        .collect::<CliResult<Vec<_>>>()?;

    let verdict = (rows.len() >= 2).then(|| {
        let s1 = spread(&rows.iter().map(|r| r.scaled).collect::<Vec<_>>());
        let s2 = spread(&rows.iter().map(|r| r.scaled_sq).collect::<Vec<_>>());
        (s1, s2)
    });
    if let Some((s1, s2)) = verdict {
        let holds = if s1 <= 0.2 { "constant" } else { "not constant" };
        meta.notes.push(format!(
            "deviation*L {holds} within 20% (spread {:.1}%); deviation*L^2 spread {:.1}%",
            100.0 * s1,
            100.0 * s2
        ));
    }

    let mut diagnostics = String::new();
    let document = match args.format {
        Format::Csv => {
            diagnostics.push_str(&meta.comment_block());
            let mut out = String::from("L,x,exact,asym_finite,deviation_times_L,deviation_times_L2\n");
            for r in &rows {
                out.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    r.len,
                    r.x,
                    fmt_f64(r.exact),
                    fmt_f64(r.asym),
                    fmt_f64(r.scaled),
                    fmt_f64(r.scaled_sq)
                ));
            }
            out
        }
        Format::Json => {
            let json_rows: Vec<_> = rows
                .iter()
                .map(|r| {
                    json!({
                        "L": r.len,
                        "x": r.x,
                        "exact": r.exact,
                        "asymFinite": r.asym,
                        "deviationTimesL": r.scaled,
                        "deviationTimesL2": r.scaled_sq,
                    })
                })
                .collect();
            let verdict = verdict.map(|(s1, s2)| {
                json!({
                    "spreadTimesL": s1,
                    "spreadTimesL2": s2,
                    "constantWithin20Percent": s1 <= 0.2,
                })
            });
            let doc = json!({
                "schema_version": SCHEMA_VERSION,
                "command": "finite-size",
                "meta": meta,
                "rows": json_rows,
                "verdict": verdict,
            });
            serde_json::to_string_pretty(&doc)? + "\n"
        }
    };
    Ok(Outcome { document, diagnostics, failure: None })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn route_list_parsing() {
        assert_eq!(parse_routes("det, product,det").unwrap(), vec![Route::Det, Route::Product]);
        assert!(matches!(parse_routes("det,foo"), Err(CliError::Usage(_))));
    }

    #[test]
    fn length_list_parsing() {
        assert_eq!(parse_lengths("258, 514").unwrap(), vec![258, 514]);
        for bad in ["", "10,,14", "ten", "-6"] {
            assert!(parse_lengths(bad).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn spread_of_constant_column_is_zero() {
        assert_eq!(spread(&[2.0, 2.0, 2.0]), 0.0);
        assert!((spread(&[1.0, 2.0]) - 0.5).abs() < 1e-15);
    }
}
