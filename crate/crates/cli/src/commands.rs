//! Runs a [`Command`] and renders its result as text, CSV or JSON.
//!
//! Integer results are always written in decimal; JSON carries them as
//! strings so no consumer ever sees them through a float.

use std::fmt::Write;

use anyhow::{bail, Context, Result};
use num_bigint::BigInt;
use serde_json::{json, Value};

use nilgrowth::checks::property_suite;
use nilgrowth::growth::{fit_exponent, phi_upper_series, power_grid, theorem_c_report, ExponentFit, GrowthSeries};
use nilgrowth::metric::{coordinate_bounds, enumerate_ball, verify_generating, word_growth_series};
use nilgrowth::quotient::{
    certified_graded_subgroup, detect_ball_certified, detect_ball_exhaustive, min_quotient_search,
    solve_min_weights, DetectionResult, LatticeSubgroup, Witness,
};
use nilgrowth::series::{bass_degree, lower_central_series, nilpotency_class, upper_central_series};
use nilgrowth::{Error as CoreError, GeneratingSet, Group, GroupSpec};

use crate::args::*;
use crate::plot::{render_svg, PlotSeries};

pub const SCHEMA: u32 = 1;

/// A rendered result. `success` is false when the command ran but reports a failed check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub body: String,
    pub format: Format,
    pub success: bool,
    pub plot: Option<String>,
}

impl Output {
    fn ok(body: String, format: Format) -> Self {
        Output {
            body,
            format,
            success: true,
            plot: None,
        }
    }
}

/// Parses a group, pointing at the offending character on failure.
pub fn parse_group(text: &str) -> Result<Group> {
    match Group::parse(text) {
        Ok(g) => Ok(g),
        Err(CoreError::Parse { position, message }) => {
            let col = text.get(..position).map_or(position, |s| s.chars().count());
            bail!(
                "invalid group specification at position {position}: {message}\n  {text}\n  {}^",
                " ".repeat(col)
            )
        }
        Err(e) => Err(e.into()),
    }
}

fn generating_set(group: &Group, gens: Option<&String>) -> Result<GeneratingSet> {
    let Some(text) = gens else {
        return Ok(group.default_gens());
    };
    let set = GeneratingSet::parse(group, text)?;
    match verify_generating(&set, 6, 2_000_000) {
        Ok(()) => Ok(set),
        Err(CoreError::Resource { .. }) => {
            eprintln!("note: generating set '{text}' was not verified (ball too large)");
            Ok(set)
        }
        Err(e) => Err(e.into()),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn json_body(v: Value) -> String {
    let mut s = serde_json::to_string_pretty(&v).expect("json values serialize");
    s.push('\n');
    s
}

fn fit_json(fit: Option<&ExponentFit>) -> Value {
    match fit {
        Some(f) => json!({
            "slope": f.slope,
            "intercept": f.intercept,
            "r2": f.r2,
            "range": [f.range.0, f.range.1],
            "points": f.points,
        }),
        None => Value::Null,
    }
}

fn series_json(s: &GrowthSeries) -> Value {
    Value::Array(
        s.points()
            .iter()
            .map(|(n, v)| json!([n, v.to_string()]))
            .collect(),
    )
}

fn cutoff_json(s: &GrowthSeries) -> Value {
    match &s.cutoff {
        Some(c) => json!({"at": c.at, "reason": c.reason}),
        None => Value::Null,
    }
}

fn names(group: &Group) -> Vec<String> {
    (0..group.dim()).map(|c| group.coord_name(c)).collect()
}

fn parse_moduli(text: &str) -> Result<Vec<BigInt>> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<BigInt>()
                .with_context(|| format!("modulus '{}' is not an integer", t.trim()))
        })
        .collect()
}

pub fn execute(command: &Command) -> Result<Output> {
    match command {
        Command::ListGroups(a) => list_groups(a),
        Command::Ball(a) => ball(a),
        Command::Bounds(a) => bounds(a),
        Command::Series(a) => series(a),
        Command::Solve(a) => solve(a),
        Command::Detect(a) => detect(a),
        Command::Search(a) => search(a),
        Command::Growth(a) => growth(a),
        Command::Certify(a) => certify(a),
        Command::Report(a) => report(a),
    }
}

fn list_groups(a: &ListArgs) -> Result<Output> {
    let mut rows = Vec::new();
    for (name, spec) in GroupSpec::catalog() {
        let g = Group::new(&spec)?;
        rows.push((name, spec.to_string(), g.dim(), nilpotency_class(&g)?, bass_degree(&g)?));
    }
    let body = match a.out {
        Format::Text => {
            let mut s = format!("{:<14} {:<34} {:>4} {:>6} {:>5}\n", "name", "spec", "dim", "class", "bass");
            for (n, sp, d, c, b) in &rows {
                writeln!(s, "{n:<14} {sp:<34} {d:>4} {c:>6} {b:>5}")?;
            }
            s
        }
        Format::Csv => {
            let mut s = String::from("name,spec,dim,class,bass_degree\n");
            for (n, sp, d, c, b) in &rows {
                writeln!(s, "{n},{},{d},{c},{b}", csv_field(sp))?;
            }
            s
        }
        Format::Json => json_body(json!({
            "schema": SCHEMA,
            "groups": rows.iter().map(|(n, sp, d, c, b)| json!({
                "name": n, "spec": sp, "dim": d, "class": c, "bass_degree": b,
            })).collect::<Vec<_>>(),
        })),
    };
    Ok(Output::ok(body, a.out))
}

fn ball(a: &BallArgs) -> Result<Output> {
    let group = parse_group(&a.group)?;
    let gens = generating_set(&group, a.gens.as_ref())?;
    let ball = enumerate_ball(&group, &gens, a.radius, a.limit)?;
    let rows = ball.sorted_entries();
    let cols = names(&group);
    let body = match a.out {
        Format::Csv => {
            let mut s = cols.join(",");
            s.push_str(",length\n");
            for (coords, len) in &rows {
                let vals: Vec<String> = coords.iter().map(|v| v.to_string()).collect();
                writeln!(s, "{},{len}", vals.join(","))?;
            }
            s
        }
        Format::Json => json_body(json!({
            "schema": SCHEMA,
            "group": group.to_string(),
            "radius": a.radius,
            "size": rows.len(),
            "coordinates": cols,
            "elements": rows.iter().map(|(c, l)| json!([
                c.iter().map(|v| v.to_string()).collect::<Vec<_>>(), l
            ])).collect::<Vec<_>>(),
        })),
        Format::Text => {
            let mut s = format!("ball of radius {} in {group}: {} elements\n", a.radius, rows.len());
            for r in 0..=a.radius {
                writeln!(s, "  |B({r})| = {}", ball.size_at(r))?;
            }
            s
        }
    };
    Ok(Output::ok(body, a.out))
}

fn bounds(a: &BoundsArgs) -> Result<Output> {
    let group = parse_group(&a.group)?;
    let gens = generating_set(&group, a.gens.as_ref())?;
    let b = coordinate_bounds(&group, &gens, a.n);
    let series = group.series()?;
    let body = match a.out {
        Format::Csv => {
            let mut s = String::from("coordinate,weight,bound\n");
            for (c, v) in b.bounds.iter().enumerate() {
                writeln!(s, "{},{},{v}", group.coord_name(c), series.weight(c))?;
            }
            s
        }
        Format::Json => json_body(json!({
            "schema": SCHEMA,
            "group": group.to_string(),
            "n": a.n,
            "bounds": b.bounds.iter().enumerate().map(|(c, v)| json!({
                "coordinate": group.coord_name(c), "weight": series.weight(c), "bound": v.to_string(),
            })).collect::<Vec<_>>(),
        })),
        Format::Text => {
            let mut s = format!("coordinate bounds for B({}) in {group}\n", a.n);
            for (c, v) in b.bounds.iter().enumerate() {
                writeln!(s, "  {:<8} {v}", group.coord_name(c))?;
            }
            s
        }
    };
    Ok(Output::ok(body, a.out))
}

fn series(a: &SeriesArgs) -> Result<Output> {
    let group = parse_group(&a.group)?;
    let lower = lower_central_series(&group)?;
    let upper = upper_central_series(&group)?;
    let s = group.series()?;
    let weights: Vec<(String, usize)> = (0..group.dim()).map(|c| (group.coord_name(c), s.weight(c))).collect();
    let body = match a.out {
        Format::Json => json_body(json!({
            "schema": SCHEMA,
            "group": group.to_string(),
            "dim": group.dim(),
            "class": s.class(),
            "bass_degree": s.bass_degree(),
            "lower": lower.iter().map(|t| t.coords().iter().map(|&c| group.coord_name(c)).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "upper": upper.iter().map(|t| t.coords().iter().map(|&c| group.coord_name(c)).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "weights": weights.iter().map(|(n, w)| json!([n, w])).collect::<Vec<_>>(),
        })),
        Format::Csv => {
            let mut out = String::from("coordinate,weight,upper_level\n");
            for c in 0..group.dim() {
                writeln!(out, "{},{},{}", group.coord_name(c), s.weight(c), s.zeta_level(c))?;
            }
            out
        }
        Format::Text => {
            let mut out = format!(
                "{group}\n  dim {}  class {}  bass degree {}\n",
                group.dim(),
                s.class(),
                s.bass_degree()
            );
            for (k, t) in lower.iter().enumerate() {
                writeln!(out, "  γ_{} = {t}  (dim {})", k + 1, t.dim())?;
            }
            for (k, t) in upper.iter().enumerate() {
                writeln!(out, "  ζ_{k} = {t}  (dim {})", t.dim())?;
            }
            let w: Vec<String> = weights.iter().map(|(n, w)| format!("{n}:{w}")).collect();
            writeln!(out, "  weights {}", w.join(" "))?;
            out
        }
    };
    Ok(Output::ok(body, a.out))
}

fn solve(a: &SolveArgs) -> Result<Output> {
    let group = parse_group(&a.group)?;
    let w = solve_min_weights(&group)?;
    let body = match a.out {
        Format::Json => json_body(json!({
            "schema": SCHEMA,
            "group": group.to_string(),
            "exponent": w.exponent,
            "class_times_dim": nilpotency_class(&group)? * group.dim(),
            "weights": (0..group.dim()).map(|c| json!([group.coord_name(c), w.weights[c]])).collect::<Vec<_>>(),
        })),
        Format::Csv => {
            let mut s = String::from("coordinate,weight\n");
            for c in 0..group.dim() {
                writeln!(s, "{},{}", group.coord_name(c), w.weights[c])?;
            }
            s
        }
        Format::Text => {
            let mut s = format!("{group}\nexponent {}\n", w.exponent);
            for c in 0..group.dim() {
                writeln!(s, "  {:<8} {}", group.coord_name(c), w.weights[c])?;
            }
            s
        }
    };
    Ok(Output::ok(body, a.out))
}

fn witness_text(group: &Group, r: &DetectionResult) -> String {
    match &r.witness {
        Witness::Bounds(rows) => {
            let mut s = String::from("  coordinate  bound β(2n)  modulus  ok\n");
            for row in rows {
                let _ = writeln!(
                    s,
                    "  {:<10}  {:>11}  {:>7}  {}",
                    group.coord_name(row.coord),
                    row.bound,
                    row.modulus,
                    row.ok()
                );
            }
            s
        }
        Witness::Collision { element, length } => {
            format!("  witness {element} of length {length} lies in B(2n) ∩ N\n")
        }
        Witness::None => String::new(),
    }
}

fn witness_json(group: &Group, r: &DetectionResult) -> Value {
    match &r.witness {
        Witness::Bounds(rows) => json!({
            "kind": "bounds",
            "rows": rows.iter().map(|row| json!({
                "coordinate": group.coord_name(row.coord),
                "bound": row.bound.to_string(),
                "modulus": row.modulus.to_string(),
                "ok": row.ok(),
            })).collect::<Vec<_>>(),
        }),
        Witness::Collision { element, length } => json!({
            "kind": "collision",
            "element": element.coords().iter().map(|v| v.to_string()).collect::<Vec<_>>(),
            "length": length,
        }),
        Witness::None => Value::Null,
    }
}

fn detection_output(group: &Group, sub: &LatticeSubgroup, r: &DetectionResult, n: u64, out: Format) -> Result<Output> {
    let body = match out {
        Format::Json => json_body(json!({
            "schema": SCHEMA,
            "group": group.to_string(),
            "n": n,
            "moduli": sub.moduli().iter().map(|m| m.to_string()).collect::<Vec<_>>(),
            "index": sub.index().to_string(),
            "detected": r.detected,
            "method": r.method.to_string(),
            "witness": witness_json(group, r),
        })),
        Format::Csv => {
            let mut s = String::from("coordinate,modulus\n");
            for (c, m) in sub.moduli().iter().enumerate() {
                writeln!(s, "{},{m}", group.coord_name(c))?;
            }
            s
        }
        Format::Text => format!(
            "detected: {}\nmethod: {}\nmoduli: {sub}\nindex: {}\n{}",
            r.detected,
            r.method,
            sub.index(),
            witness_text(group, r)
        ),
    };
    Ok(Output::ok(body, out))
}

fn detect(a: &DetectArgs) -> Result<Output> {
    let group = parse_group(&a.group)?;
    let gens = generating_set(&group, a.gens.as_ref())?;
    let sub = LatticeSubgroup::new(&group, parse_moduli(&a.moduli)?)?;
    let r = if a.exhaustive {
        detect_ball_exhaustive(&group, &gens, a.n, &sub, a.limit)?
    } else {
        detect_ball_certified(&group, &gens, a.n as u64, &sub)?
    };
    detection_output(&group, &sub, &r, a.n as u64, a.out)
}

fn certify(a: &CertifyArgs) -> Result<Output> {
    let group = parse_group(&a.group)?;
    let gens = generating_set(&group, a.gens.as_ref())?;
    let sub = certified_graded_subgroup(&group, &gens, a.n)?;
    let r = detect_ball_certified(&group, &gens, a.n, &sub)?;
    let mut out = detection_output(&group, &sub, &r, a.n, a.out)?;
    out.success = r.detected;
    Ok(out)
}

fn search(a: &SearchArgs) -> Result<Output> {
    let group = parse_group(&a.group)?;
    let gens = generating_set(&group, a.gens.as_ref())?;
    let r = min_quotient_search(&group, &gens, a.n, a.cap, a.budget, a.limit)?;
    let body = match a.out {
        Format::Json => json_body(json!({
            "schema": SCHEMA,
            "group": group.to_string(),
            "n": a.n,
            "cap": a.cap,
            "index": r.index.to_string(),
            "moduli": r.subgroup.moduli().iter().map(|m| m.to_string()).collect::<Vec<_>>(),
            "ball_size": r.ball_size,
            "candidates": r.candidates,
            "estimate": "upper estimate within the lattice family",
        })),
        Format::Csv => format!("n,index,ball_size\n{},{},{}\n", a.n, r.index, r.ball_size),
        Format::Text => format!(
            "index {}\nmoduli {}\n|B({})| = {} (lower bound for any detecting quotient)\ncandidates tried {}\nthe index is an upper estimate within the lattice family\n",
            r.index, r.subgroup, a.n, r.ball_size, r.candidates
        ),
    };
    Ok(Output::ok(body, a.out))
}

/// Fits the upper half of a word growth series, where the polynomial regime dominates.
fn word_fit(s: &GrowthSeries) -> Option<ExponentFit> {
    let last = s.points().last()?.0;
    fit_exponent(s, Some((last.div_ceil(2), last)))
        .or_else(|_| fit_exponent(s, None))
        .ok()
}

fn growth(a: &GrowthArgs) -> Result<Output> {
    let group = parse_group(&a.group)?;
    let gens = generating_set(&group, a.gens.as_ref())?;
    let n_max_u32 = u32::try_from(a.n_max).context("n-max too large")?;
    let mut labelled: Vec<(String, GrowthSeries, Option<ExponentFit>)> = Vec::new();
    let mut extra = serde_json::Map::new();
    match a.mode {
        GrowthMode::Word => {
            let s = word_growth_series(&group, &gens, n_max_u32, a.limit)?;
            let f = word_fit(&s);
            labelled.push(("word".into(), s, f));
        }
        GrowthMode::Phi => {
            let s = phi_upper_series(&group, &gens, &power_grid(a.n_min, a.n_max))?;
            let f = fit_exponent(&s, None).ok();
            labelled.push(("phi".into(), s, f));
        }
        GrowthMode::Compare => {
            let report = theorem_c_report(&group, &gens)?;
            let phi = phi_upper_series(&group, &gens, &power_grid(a.n_min, a.n_max))?;
            let pf = fit_exponent(&phi, None).ok();
            let word = word_growth_series(&group, &gens, n_max_u32, a.limit)?;
            let wf = word_fit(&word);
            labelled.push(("phi".into(), phi, pf));
            labelled.push(("word".into(), word, wf));
            extra.insert("bass_degree".into(), json!(report.bass_degree));
            extra.insert("solver_exponent".into(), json!(report.solver_exponent));
            extra.insert("verdict".into(), json!(report.verdict.to_string()));
        }
    }
    let plot = match &a.plot {
        Some(_) => {
            let items: Vec<PlotSeries<'_>> = labelled
                .iter()
                .map(|(_, s, f)| PlotSeries { series: s, fit: f.as_ref() })
                .collect();
            Some(render_svg(&format!("{group}"), &items)?)
        }
        None => None,
    };
    let body = match a.out {
        Format::Csv => {
            let mut s = String::from("series,n,value\n");
            for (label, series, _) in &labelled {
                for (n, v) in series.points() {
                    writeln!(s, "{label},{n},{v}")?;
                }
            }
            s
        }
        Format::Json => {
            let (_, main, main_fit) = &labelled[0];
            let mut obj = serde_json::Map::new();
            obj.insert("schema".into(), json!(SCHEMA));
            obj.insert("group".into(), json!(group.to_string()));
            obj.insert("mode".into(), json!(labelled[0].0));
            obj.insert("provenance".into(), json!(main.provenance));
            obj.insert("series".into(), series_json(main));
            obj.insert("fit".into(), fit_json(main_fit.as_ref()));
            obj.insert("cutoff".into(), cutoff_json(main));
            if let Some((_, word, wf)) = labelled.get(1) {
                obj.insert("mode".into(), json!("compare"));
                obj.insert("word_series".into(), series_json(word));
                obj.insert("word_fit".into(), fit_json(wf.as_ref()));
                obj.insert("word_cutoff".into(), cutoff_json(word));
            }
            obj.extend(extra.clone());
            json_body(Value::Object(obj))
        }
        Format::Text => {
            let mut s = String::new();
            for (label, series, fit) in &labelled {
                writeln!(s, "{label}: {}", series.label)?;
                for (n, v) in series.points() {
                    writeln!(s, "  {n:>6}  {v}")?;
                }
                if let Some(c) = &series.cutoff {
                    writeln!(s, "  cut off at n = {}: {}", c.at, c.reason)?;
                }
                match fit {
                    Some(f) => writeln!(
                        s,
                        "  slope {:.4} (R² {:.6}) over n ∈ [{}, {}]",
                        f.slope, f.r2, f.range.0, f.range.1
                    )?,
                    None => writeln!(s, "  too few points for a fit")?,
                }
            }
            for (k, v) in &extra {
                writeln!(s, "{k}: {}", v.as_str().map_or(v.to_string(), str::to_string))?;
            }
            s
        }
    };
    Ok(Output {
        body,
        format: a.out,
        success: true,
        plot,
    })
}

fn report(a: &ReportArgs) -> Result<Output> {
    let results = property_suite(a.seed, a.limit)?;
    let passed = results.iter().filter(|o| o.passed).count();
    let success = passed == results.len();
    let body = match a.out {
        Format::Json => json_body(json!({
            "schema": SCHEMA,
            "seed": a.seed,
            "passed": passed,
            "total": results.len(),
            "checks": results,
        })),
        Format::Csv => {
            let mut s = String::from("check,passed,cases,detail\n");
            for o in &results {
                writeln!(s, "{},{},{},{}", csv_field(&o.name), o.passed, o.cases, csv_field(&o.detail))?;
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for o in &results {
                writeln!(s, "{o}")?;
            }
            writeln!(s, "{passed} of {} checks passed", results.len())?;
            s
        }
    };
    Ok(Output {
        body,
        format: a.out,
        success,
        plot: None,
    })
}
