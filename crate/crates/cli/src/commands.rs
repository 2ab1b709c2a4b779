//! Subcommand implementations: compute with the core library, then render
//! one human table or one JSON envelope on standard out.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use gaplab_core::experiments::{
    envelope_csv, envelope_plot_data, envelope_report, extremal_search, EnvelopeReport,
    SearchConfig, SearchFilters, Strategy, Theorem,
};
use gaplab_core::expsum::{
    divisor_moment, lemma1_bound, lemma3_shape, verify_lemma1_grid, verify_lemma1_instances,
    weyl_sum, Lemma1Grid, Lemma1Report, QuadraticInstance,
};
use gaplab_core::fourier::{detection_count, DetectionInstance};
use gaplab_core::gap::{avoids, AvoidanceVerdict, SymmetricGap};
use gaplab_core::intersective::{certify, CertificateStatus};
use gaplab_core::poly::IntPolynomial;
use gaplab_core::primes::{least_prime_scan, psi, PrimeTable};
use gaplab_core::{Error, InputMode, Limits, Result};

use crate::{BoundKind, Command, Context, ReportKind};

/// Every JSON document the binary prints or writes has this shape.
fn envelope(kind: &str, data: Value) -> String {
    // serde_json maps order keys deterministically, so equal inputs give
    // byte-equal documents regardless of scheduling.
    serde_json::to_string(&json!({
        "schema_version": 1,
        "kind": kind,
        "data": data,
    }))
    .expect("reports contain no non-finite numbers")
}

fn to_value<T: serde::Serialize>(value: &T) -> Value {
    serde_json::to_value(value).expect("reports contain no non-finite numbers")
}

fn emit(json: bool, kind: &str, data: Value, human: String) {
    if json {
        println!("{}", envelope(kind, data));
    } else {
        println!("{human}");
    }
}

fn parse_poly(text: &str, limits: &Limits) -> Result<IntPolynomial> {
    IntPolynomial::parse(text, limits)
}

pub fn dispatch(cmd: Command, ctx: &Context) -> Result<()> {
    match cmd {
        Command::IntersectiveCheck {
            poly,
            mode,
            prime_bound,
        } => intersective_check(ctx, &poly, mode, prime_bound),
        Command::GapAvoids {
            steps,
            widths,
            poly,
            inputs,
        } => gap_avoids(ctx, steps, widths, &poly, inputs),
        Command::Detect {
            steps,
            widths,
            poly,
            inputs,
            report,
        } => detect(ctx, steps, widths, &poly, inputs, report),
        Command::Weyl { poly, n, t, d, bound } => weyl(ctx, &poly, n, t, d, bound),
        Command::WeylVerify {
            grid,
            n_max,
            d_max,
            coeff_bound,
        } => weyl_verify(ctx, grid, n_max, d_max, coeff_bound),
        Command::DivisorMoment { j, range } => divisor_moment_cmd(ctx, j, range),
        Command::Psi { x, a, q } => psi_cmd(ctx, x, a, q),
        Command::LinnikScan { qmin, qmax } => linnik_scan(ctx, qmin, qmax),
        Command::ExtremalSearch {
            ambient,
            dims,
            poly,
            inputs,
            strategy,
            budget,
            restarts,
            require_prime_last_step,
            require_proper,
            out,
        } => extremal_search_cmd(
            ctx,
            ambient,
            dims,
            &poly,
            inputs,
            strategy,
            budget,
            restarts,
            require_prime_last_step,
            require_proper,
            out,
        ),
        Command::EnvelopeReport {
            input,
            theorem,
            c,
            csv,
            plot_data,
        } => envelope_report_cmd(ctx, &input, theorem, c, csv, plot_data),
    }
}

fn intersective_check(ctx: &Context, poly: &str, mode: InputMode, prime_bound: u64) -> Result<()> {
    let h = parse_poly(poly, &ctx.limits)?;
    let cert = certify(&h, mode, prime_bound, &ctx.limits)?;
    let human = match &cert.status {
        CertificateStatus::VerifiedUpTo { prime_bound } => format!(
            "verified: {} has admissible roots at every prime <= {prime_bound} \
             ({} lifting witnesses)",
            cert.poly,
            cert.witnesses.len()
        ),
        CertificateStatus::Refuted {
            prime,
            exponent,
            trace,
        } => format!(
            "refuted: {} has no admissible root modulo {prime}^{exponent} \
             (root counts per level: {trace:?})",
            cert.poly
        ),
    };
    emit(ctx.json, "intersective_check", to_value(&cert), human);
    Ok(())
}

fn gap_avoids(
    ctx: &Context,
    steps: Vec<i64>,
    widths: Vec<i64>,
    poly: &str,
    inputs: InputMode,
) -> Result<()> {
    let h = parse_poly(poly, &ctx.limits)?;
    let gap = SymmetricGap::new(steps, widths)?;
    let verdict = avoids(&gap, &h, inputs, &ctx.limits)?;
    let human = match &verdict {
        AvoidanceVerdict::Avoids => "avoids".to_string(),
        AvoidanceVerdict::Contains { input, value } => {
            format!("contains h({input}) = {value}")
        }
    };
    let data = json!({
        "gap": to_value(&gap),
        "poly": h.to_string(),
        "inputs": to_value(&inputs),
        "result": to_value(&verdict),
    });
    emit(ctx.json, "gap_avoids", data, human);
    Ok(())
}

fn detect(
    ctx: &Context,
    steps: Vec<i64>,
    widths: Vec<i64>,
    poly: &str,
    inputs: InputMode,
    report: ReportKind,
) -> Result<()> {
    let h = parse_poly(poly, &ctx.limits)?;
    let gap = SymmetricGap::new(steps, widths)?;
    let inst = DetectionInstance::new(gap, h, inputs, &ctx.limits)?;
    let rep = detection_count(&inst, &ctx.limits)?;
    let mut human = String::new();
    let _ = writeln!(human, "modulus        = {}", rep.modulus);
    let _ = writeln!(human, "inputs scanned = {}", rep.s_size);
    let _ = writeln!(human, "physical       = {}", rep.physical);
    let _ = writeln!(human, "spectral       = {}", rep.spectral);
    let _ = writeln!(human, "discrepancy    = {:e}", rep.discrepancy);
    let _ = writeln!(human, "main term      = {}", rep.main_term);
    let _ = writeln!(human, "tail sum       = {}", rep.tail_sum);
    if rep.local_obstruction {
        let _ = writeln!(human, "local obstruction: no admissible root, count is 0");
    }
    let _ = match &rep.witness {
        Some(w) => writeln!(
            human,
            "positive: h({}) = {} lies in the progression (coefficients {:?})",
            w.input, w.value, w.coefficients
        ),
        None => writeln!(human, "positive       = {}", rep.positive),
    };
    human.pop();
    emit(
        ctx.json || report == ReportKind::Json,
        "detect",
        to_value(&rep),
        human,
    );
    Ok(())
}

fn weyl(ctx: &Context, poly: &str, n: u64, t: i64, d: u64, bound: Option<BoundKind>) -> Result<()> {
    let h = parse_poly(poly, &ctx.limits)?;
    let w = weyl_sum(&h, n, t, d, &ctx.limits)?;
    let magnitude = w.norm();
    let mut human = format!("W = {} + {}i\n|W| = {magnitude}", w.re, w.im);
    let mut data = json!({
        "poly": h.to_string(),
        "n": n,
        "t": t,
        "d": d,
        "re": w.re,
        "im": w.im,
        "magnitude": magnitude,
    });
    match bound {
        None => {}
        Some(BoundKind::Lemma1) => {
            if h.degree() != Some(2) {
                return Err(Error::InvalidInput(format!(
                    "lemma1_bound applies to quadratics; {} has degree {:?}",
                    h,
                    h.degree()
                )));
            }
            let a2 = i64::try_from(h.coefficient(2)).map_err(|_| {
                Error::InvalidInput("quadratic coefficient exceeds i64".into())
            })?;
            let b = lemma1_bound(n, d, a2, t);
            if magnitude > b + 1e-6 * (b + 1.0) {
                return Err(Error::ConsistencyFailure(format!(
                    "|W| = {magnitude} exceeds the unconditional bound {b}"
                )));
            }
            let _ = write!(human, "\nlemma1_bound = {b}\nratio = {}", magnitude / b);
            data["bound"] = json!(b);
            data["bound_kind"] = json!("lemma1");
            data["ratio"] = json!(magnitude / b);
        }
        Some(BoundKind::Lemma3) => {
            let s = lemma3_shape(&h, n, t, d)?;
            let _ = write!(
                human,
                "\nlemma3_shape = {s}\nratio = {} (shape carries no constant; not asserted)",
                magnitude / s
            );
            data["bound"] = json!(s);
            data["bound_kind"] = json!("lemma3");
            data["ratio"] = json!(magnitude / s);
        }
    }
    emit(ctx.json, "weyl", data, human);
    Ok(())
}

fn parse_grid_file(path: &Path) -> Result<Vec<QuadraticInstance>> {
    let text = std::fs::read_to_string(path)?;
    let mut rows = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 5 {
            return Err(Error::InvalidInput(format!(
                "grid line {} needs `n d a1 a2 t`, got {line:?}",
                idx + 1
            )));
        }
        let parse_u64 = |s: &str, what: &str| {
            s.parse::<u64>().map_err(|_| {
                Error::InvalidInput(format!("grid line {}: bad {what} {s:?}", idx + 1))
            })
        };
        let parse_i64 = |s: &str, what: &str| {
            s.parse::<i64>().map_err(|_| {
                Error::InvalidInput(format!("grid line {}: bad {what} {s:?}", idx + 1))
            })
        };
        rows.push(QuadraticInstance {
            n: parse_u64(fields[0], "n")?,
            d: parse_u64(fields[1], "d")?,
            a1: parse_i64(fields[2], "a1")?,
            a2: parse_i64(fields[3], "a2")?,
            t: parse_i64(fields[4], "t")?,
        });
    }
    Ok(rows)
}

fn render_lemma1_report(report: &Lemma1Report) -> String {
    let mut human = format!(
        "instances = {}\nmax ratio = {}",
        report.instances, report.max_ratio
    );
    if let Some(w) = &report.worst {
        let _ = write!(
            human,
            "\nworst: n={} d={} a1={} a2={} t={}",
            w.n, w.d, w.a1, w.a2, w.t
        );
    }
    human
}

fn weyl_verify(
    ctx: &Context,
    grid: Option<PathBuf>,
    n_max: u64,
    d_max: u64,
    coeff_bound: i64,
) -> Result<()> {
    let report = match grid {
        Some(path) => {
            let rows = parse_grid_file(&path)?;
            verify_lemma1_instances(&rows, &ctx.limits)?
        }
        None => verify_lemma1_grid(
            &Lemma1Grid {
                n_max,
                d_max,
                coeff_bound,
            },
            &ctx.limits,
        )?,
    };
    let human = render_lemma1_report(&report);
    emit(ctx.json, "weyl_verify", to_value(&report), human);
    Ok(())
}

fn divisor_moment_cmd(ctx: &Context, j: u32, range: u64) -> Result<()> {
    let report = divisor_moment(j, range, &ctx.limits)?;
    let mut human = format!(
        "sum of d_{}(m)^{} for m <= {}: {}",
        report.order,
        report.order,
        report.range,
        report.moment
    );
    if let Some(normalized) = report.normalized {
        let _ = write!(human, "\nnormalized by M ln^(j^2-1) M: {normalized}");
    }
    emit(ctx.json, "divisor_moment", to_value(&report), human);
    Ok(())
}

fn psi_cmd(ctx: &Context, x: u64, a: u64, q: u64) -> Result<()> {
    let table = PrimeTable::sieve(x, &ctx.limits)?;
    let value = psi(&table, x, a, q)?;
    let human = format!("psi({x}; {a} mod {q}) = {}", value.to_f64());
    let data = json!({
        "x": x,
        "a": a,
        "q": q,
        "value": value.to_f64(),
        "fixed_point_units": value.units().to_string(),
    });
    emit(ctx.json, "psi", data, human);
    Ok(())
}

fn linnik_scan(ctx: &Context, qmin: u64, qmax: u64) -> Result<()> {
    let rows = least_prime_scan(qmin, qmax, &ctx.limits)?;
    let max_ratio = rows.iter().map(|r| r.ratio).fold(0.0f64, f64::max);
    let mut human = String::from("q\tworst_a\tleast_prime\tratio");
    for r in &rows {
        let _ = write!(human, "\n{}\t{}\t{}\t{}", r.q, r.worst_a, r.least_prime, r.ratio);
    }
    let _ = write!(human, "\nmax ratio = {max_ratio}");
    let data = json!({
        "qmin": qmin,
        "qmax": qmax,
        "rows": to_value(&rows),
        "max_ratio": max_ratio,
    });
    emit(ctx.json, "linnik_scan", data, human);
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn extremal_search_cmd(
    ctx: &Context,
    ambient: Vec<u64>,
    dims: u32,
    poly: &str,
    inputs: InputMode,
    strategy: Strategy,
    budget: u64,
    restarts: u32,
    require_prime_last_step: bool,
    require_proper: bool,
    out: Option<PathBuf>,
) -> Result<()> {
    let h = parse_poly(poly, &ctx.limits)?;
    let cfg = SearchConfig {
        ambient_values: ambient,
        dims,
        poly: h,
        inputs,
        strategy,
        seed: ctx.seed,
        budget,
        restarts,
        filters: SearchFilters {
            require_prime_last_step,
            require_proper,
        },
    };
    let report = extremal_search(&cfg, &ctx.limits)?;
    let document = envelope("extremal_search", to_value(&report));
    if let Some(path) = &out {
        std::fs::write(path, format!("{document}\n"))?;
    }
    let mut human = String::from("N\tbest|A|\tenvelope\tratio\twitness");
    for row in &report.rows {
        let witness = match &row.witness {
            None => "-".to_string(),
            Some(w) => {
                let dims: Vec<String> = w
                    .steps
                    .iter()
                    .zip(&w.widths)
                    .map(|(d, l)| format!("{d}x{l}"))
                    .collect();
                dims.join(",")
            }
        };
        let _ = write!(
            human,
            "\n{}\t{}\t{:.4}\t{:.6}\t{witness}",
            row.ambient, row.best_size, row.envelope, row.ratio
        );
    }
    if let Some(path) = &out {
        let _ = write!(human, "\nreport written to {}", path.display());
    }
    if ctx.json {
        println!("{document}");
    } else {
        println!("{human}");
    }
    Ok(())
}

fn envelope_report_cmd(
    ctx: &Context,
    input: &Path,
    theorem: Theorem,
    c: f64,
    csv: Option<PathBuf>,
    plot_data: Option<PathBuf>,
) -> Result<()> {
    let text = std::fs::read_to_string(input)?;
    let mut value: Value = serde_json::from_str(&text)
        .map_err(|e| Error::InvalidInput(format!("{} is not JSON: {e}", input.display())))?;
    let payload = if let Some(data) = value.get_mut("data") {
        data.take()
    } else {
        value
    };
    let results: EnvelopeReport = serde_json::from_value(payload).map_err(|e| {
        Error::InvalidInput(format!(
            "{} is not an extremal-search report: {e}",
            input.display()
        ))
    })?;
    let table = envelope_report(&results, theorem, c)?;
    if let Some(path) = &csv {
        std::fs::write(path, envelope_csv(&table))?;
    }
    if let Some(path) = &plot_data {
        std::fs::write(path, envelope_plot_data(&table))?;
    }
    let mut human = format!("envelope {} (degree {}, dims {})", table.theorem, table.degree, table.dims);
    if table.c_is_assumed {
        let _ = write!(human, " with assumed constant c = {}", table.c);
    }
    let _ = write!(human, "\nN\tbest|A|\tenvelope\tratio");
    for r in &table.rows {
        let _ = write!(
            human,
            "\n{}\t{}\t{:.4}\t{:.6}",
            r.ambient, r.best_size, r.envelope, r.ratio
        );
    }
    let _ = write!(
        human,
        "\nratio range [{}, {}]; nonincreasing: {}",
        table.min_ratio, table.max_ratio, table.ratios_nonincreasing
    );
    for (label, path) in [("csv", &csv), ("plot data", &plot_data)] {
        if let Some(p) = path {
            let _ = write!(human, "\n{label} written to {}", p.display());
        }
    }
    emit(ctx.json, "envelope_report", to_value(&table), human);
    Ok(())
}
