use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use cdiff_core::analysis::{bct, c_ddt, c_ddt_table, spectrum_summary, walsh};
use cdiff_core::catalog::{csv_header, parse_grid, parse_manifest, run_manifest, scan, Verdict, DEFAULT_GRID_CAP};
use cdiff_core::funcexpr::{parse, tabulate, FuncTable};
use cdiff_core::switching::{build_switch, pcn_switch_criterion, verify_witness, SwitchSpec, SwitchTerm};
use cdiff_core::{Elem, Error, FieldCtx};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

/// Largest field for which the full c-DDT is printed.
const CDDT_TABLE_CAP: usize = 1 << 10;

#[derive(Parser)]
#[command(
    name = "cdiff",
    version,
    about = "Exhaustive c-differential analysis over finite fields"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Subcommand)]
enum Command {
    /// c-differential uniformity at the selected c values.
    Uniformity {
        #[command(flatten)]
        func: FuncArgs,
        /// `all`, `sub<m>`, or a comma-separated list of element literals.
        #[arg(long, default_value = "all", allow_hyphen_values = true)]
        c: String,
        /// List the (a, b) entries attaining the maximum.
        #[arg(long)]
        witnesses: bool,
    },
    /// Full c-difference distribution table at one c.
    Cddt {
        #[command(flatten)]
        func: FuncArgs,
        #[arg(long, allow_hyphen_values = true)]
        c: String,
        #[arg(long)]
        witnesses: bool,
    },
    /// Boomerang uniformity.
    Bct {
        #[command(flatten)]
        func: FuncArgs,
    },
    /// Walsh spectrum statistics.
    Walsh {
        #[command(flatten)]
        func: FuncArgs,
    },
    /// Permutation flag, uniformities, boomerang and Walsh data in one record.
    Summary {
        #[command(flatten)]
        func: FuncArgs,
    },
    /// Run a catalog manifest and print one JSON line per entry.
    Verify { manifest: PathBuf },
    /// Evaluate a parametrised function over a grid of parameter values.
    Scan {
        #[arg(long)]
        field: String,
        /// Function source using the grid parameters.
        #[arg(long = "fn")]
        source: String,
        /// For example `v=all;tr2!=1` or `u=sub2;nonzero & v={g,g^3}`.
        #[arg(long)]
        grid: String,
        #[arg(long, default_value_t = DEFAULT_GRID_CAP)]
        grid_cap: usize,
    },
}

#[derive(Args)]
struct FuncArgs {
    /// `p^N` or `p^N/c_N...c_0`.
    #[arg(long)]
    field: String,
    #[arg(long = "fn", required_unless_present = "switch_file", conflicts_with = "switch_file")]
    source: Option<String>,
    /// JSON `{"base": ..., "terms": [{"u": ..., "f": ..., "m": ...}]}`.
    #[arg(long)]
    switch_file: Option<PathBuf>,
}

enum Failure {
    /// Bad input or a violated hypothesis.
    Spec(String),
    /// A verdict or an internal cross-check failed.
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Spec(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Spec(e.to_string())
    }
}

/// A function under analysis, with its switch decomposition when given one.
struct Target {
    field: Arc<FieldCtx>,
    table: FuncTable,
    source: String,
    switch: Option<(FuncTable, Vec<SwitchTerm>)>,
}

fn load_field(spec: &str) -> Result<Arc<FieldCtx>, Failure> {
    Ok(Arc::new(FieldCtx::from_spec(spec)?))
}

fn load_target(args: &FuncArgs) -> Result<Target, Failure> {
    let field = load_field(&args.field)?;
    if let Some(path) = &args.switch_file {
        let text = fs::read_to_string(path)?;
        let spec: SwitchSpec =
            serde_json::from_str(&text).map_err(|e| Failure::Spec(format!("{}: {e}", path.display())))?;
        let built = build_switch(&spec, &field)?;
        let mut source = spec.base.clone();
        for t in &spec.terms {
            source.push_str(&format!(" + ({}) * ({})", t.u, t.f));
        }
        return Ok(Target {
            field,
            table: built.h,
            source,
            switch: Some((built.base, built.terms)),
        });
    }
    let src = args.source.as_deref().unwrap_or_default();
    let expr = parse(src, &field)?;
    let table = tabulate(&expr, &field)?;
    Ok(Target {
        source: expr.to_source(&field),
        field,
        table,
        switch: None,
    })
}

fn header(t: &Target) -> Map<String, Value> {
    let f = &t.field;
    let mut m = Map::new();
    m.insert("field".into(), json!(f.spec_string()));
    m.insert("generator".into(), json!(f.coeff_string(f.generator())));
    m.insert("function".into(), json!(t.source));
    m
}

fn elem_json(f: &FieldCtx, x: Elem) -> Value {
    json!({ "label": f.label(x), "coeffs": f.coeff_string(x) })
}

fn select_c(f: &FieldCtx, sel: &str) -> Result<Vec<Elem>, Failure> {
    let sel = sel.trim();
    if sel == "all" {
        return Ok(f.elements().collect());
    }
    if let Some(m) = sel.strip_prefix("sub") {
        let m: u32 = m
            .parse()
            .map_err(|_| Failure::Spec(format!("bad c selector {sel:?}")))?;
        return Ok(f.subfield(m)?.elements);
    }
    let mut cs = sel.split(',').map(|s| f.parse_elem(s)).collect::<Result<Vec<_>, _>>()?;
    cs.sort();
    cs.dedup();
    Ok(cs)
}

struct Report {
    json: Value,
    /// `(header, rows)` for tabular reports.
    csv: Option<(String, Vec<String>)>,
}

fn cmd_uniformity(func: &FuncArgs, sel: &str, witnesses: bool) -> Result<Report, Failure> {
    let t = load_target(func)?;
    let f = &t.field;
    let cs = select_c(f, sel)?;
    let mut results = Vec::new();
    let mut rows = Vec::new();
    for &c in &cs {
        let rep = c_ddt(&t.table, c, witnesses);
        let mut entry = Map::new();
        entry.insert("c".into(), json!(f.label(c)));
        entry.insert("c_coeffs".into(), json!(f.coeff_string(c)));
        entry.insert("uniformity".into(), json!(rep.uniformity));
        if let Some(ws) = &rep.witnesses {
            let ws: Vec<Value> = ws.iter().map(|&(a, b)| json!([f.label(a), f.label(b)])).collect();
            entry.insert("witnesses".into(), json!(ws));
        }
        if let Some((base, terms)) = &t.switch {
            entry.insert("criterion".into(), criterion_json(base, terms, c, rep.uniformity)?);
        }
        rows.push(format!(
            "{},{},{}",
            f.label(c),
            csv_field(&f.coeff_string(c)),
            rep.uniformity
        ));
        results.push(Value::Object(entry));
    }
    let mut out = header(&t);
    out.insert("results".into(), json!(results));
    Ok(Report {
        json: Value::Object(out),
        csv: Some(("c,c_coeffs,uniformity".into(), rows)),
    })
}

/// Runs the switching criterion beside the direct count; disagreement is an
/// internal failure.
fn criterion_json(base: &FuncTable, terms: &[SwitchTerm], c: Elem, measured: u32) -> Result<Value, Failure> {
    let f = base.field();
    match pcn_switch_criterion(base, terms, c) {
        Err(Error::BaseNotPcN(_)) => Ok(json!({ "applicable": false })),
        Err(e) => Err(e.into()),
        Ok(w) => {
            if w.is_some() != (measured >= 2) {
                return Err(Failure::Check(format!(
                    "switching criterion and direct count disagree at c = {}",
                    f.label(c)
                )));
            }
            let witness = match w {
                None => Value::Null,
                Some(w) => {
                    if !verify_witness(base, terms, c, &w) {
                        return Err(Failure::Check(format!(
                            "witness at c = {} does not re-verify",
                            f.label(c)
                        )));
                    }
                    json!({
                        "a": f.label(w.a),
                        "x": f.label(w.x),
                        "y": f.label(w.y),
                        "epsilon": w.epsilon.iter().map(|&e| f.label(e)).collect::<Vec<_>>(),
                    })
                }
            };
            Ok(json!({ "applicable": true, "witness": witness }))
        }
    }
}

fn cmd_cddt(func: &FuncArgs, sel: &str, witnesses: bool) -> Result<Report, Failure> {
    let t = load_target(func)?;
    let f = &t.field;
    let c = f.parse_elem(sel)?;
    if f.size() > CDDT_TABLE_CAP {
        return Err(Error::FieldTooLarge {
            p: f.characteristic() as u64,
            n: f.degree(),
        }
        .into());
    }
    let rep = c_ddt(&t.table, c, witnesses);
    let table = c_ddt_table(&t.table, c);
    let mut out = header(&t);
    out.insert("c".into(), elem_json(f, c));
    out.insert("uniformity".into(), json!(rep.uniformity));
    let dist: Map<String, Value> = rep
        .distribution
        .iter()
        .map(|(k, v)| (k.to_string(), json!(v)))
        .collect();
    out.insert("distribution".into(), Value::Object(dist));
    if let Some(ws) = &rep.witnesses {
        out.insert(
            "witnesses".into(),
            json!(ws
                .iter()
                .map(|&(a, b)| json!([f.label(a), f.label(b)]))
                .collect::<Vec<_>>()),
        );
    }
    out.insert("table".into(), json!(table));
    let head = std::iter::once("a".to_string())
        .chain(f.elements().map(|b| f.label(b)))
        .collect::<Vec<_>>()
        .join(",");
    let rows = f
        .elements()
        .zip(&table)
        .map(|(a, row)| {
            std::iter::once(f.label(a))
                .chain(row.iter().map(|v| v.to_string()))
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect();
    Ok(Report {
        json: Value::Object(out),
        csv: Some((head, rows)),
    })
}

fn cmd_bct(func: &FuncArgs) -> Result<Report, Failure> {
    let t = load_target(func)?;
    let rep = bct(&t.table);
    let mut out = header(&t);
    out.insert("boomerang_uniformity".into(), json!(rep.boomerang_uniformity));
    out.insert(
        "argmax".into(),
        rep.argmax
            .map(|(a, b)| json!([t.field.label(a), t.field.label(b)]))
            .unwrap_or(Value::Null),
    );
    Ok(Report {
        json: Value::Object(out),
        csv: None,
    })
}

fn cmd_walsh(func: &FuncArgs) -> Result<Report, Failure> {
    let t = load_target(func)?;
    let w = walsh(&t.table);
    let mut out = header(&t);
    out.insert("distinct_values".into(), json!(w.distinct_values()));
    out.insert("distinct_magnitudes".into(), json!(w.distinct_magnitudes()));
    out.insert("max_magnitude".into(), json!((w.max_magnitude() * 1e6).round() / 1e6));
    let dist: Map<String, Value> = w
        .magnitude_distribution()
        .into_iter()
        .map(|(k, v)| (format!("{:.6}", k as f64 / 1e6), json!(v)))
        .collect();
    out.insert("magnitude_distribution".into(), Value::Object(dist));
    if t.field.characteristic() == 2 {
        out.insert(
            "nonlinearity".into(),
            json!(cdiff_core::analysis::nonlinearity(&t.table)?),
        );
    }
    Ok(Report {
        json: Value::Object(out),
        csv: None,
    })
}

fn cmd_summary(func: &FuncArgs) -> Result<Report, Failure> {
    let t = load_target(func)?;
    let s = spectrum_summary(&t.table);
    let mut out = header(&t);
    if let Value::Object(m) = serde_json::to_value(&s).map_err(|e| Failure::Check(e.to_string()))? {
        for (k, v) in m {
            out.entry(k).or_insert(v);
        }
    }
    Ok(Report {
        json: Value::Object(out),
        csv: None,
    })
}

fn cmd_scan(field: &str, source: &str, grid: &str, cap: usize) -> Result<Report, Failure> {
    let f = load_field(field)?;
    let axes = parse_grid(grid, &f)?;
    let rows = scan(&f, source, &axes, cap)?;
    let json = json!({
        "field": f.spec_string(),
        "generator": f.coeff_string(f.generator()),
        "source": source,
        "grid": grid,
        "rows": rows,
    });
    let lines = rows.iter().map(|r| r.csv_line()).collect();
    Ok(Report {
        json,
        csv: Some((csv_header(&axes), lines)),
    })
}

/// Returns the bundle and whether any verdict failed.
fn cmd_verify(path: &PathBuf) -> Result<(String, Option<Failure>), Failure> {
    let text = fs::read_to_string(path)?;
    let items = parse_manifest(&text)?;
    let mut out = String::new();
    let mut failure = None;
    let mut spec_error = None;
    for (item, result) in items.iter().zip(run_manifest(&items)) {
        match result {
            Ok(report) => {
                if report.verdict == Verdict::Fail && failure.is_none() {
                    failure = Some(Failure::Check(format!("{} on {} failed", report.entry, report.field)));
                }
                out.push_str(&serde_json::to_string(&report).map_err(|e| Failure::Check(e.to_string()))?);
            }
            Err(e) => {
                if spec_error.is_none() {
                    spec_error = Some(Failure::Spec(format!("{} on {}: {e}", item.entry, item.field)));
                }
                out.push_str(&json!({ "entry": item.entry, "field": item.field, "error": e.to_string() }).to_string());
            }
        }
        out.push('\n');
    }
    Ok((out, spec_error.or(failure)))
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn render(report: Report, format: Format) -> String {
    match format {
        Format::Json => format!("{}\n", report.json),
        Format::Pretty => {
            let mut s = String::new();
            pretty(&report.json, 0, &mut s);
            s
        }
        Format::Csv => match report.csv {
            Some((head, rows)) => {
                let mut s = head + "\n";
                for r in rows {
                    s.push_str(&r);
                    s.push('\n');
                }
                s
            }
            None => {
                let mut s = String::from("key,value\n");
                if let Value::Object(m) = &report.json {
                    for (k, v) in m.iter().filter(|(_, v)| !v.is_object() && !v.is_array()) {
                        let v = v.as_str().map(str::to_string).unwrap_or_else(|| v.to_string());
                        s.push_str(&format!("{k},{}\n", csv_field(&v)));
                    }
                }
                s
            }
        },
    }
}

fn pretty(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(m) => {
            for (k, v) in m {
                match v {
                    Value::Object(_) | Value::Array(_) if !is_flat(v) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        pretty(v, indent + 1, out);
                    }
                    _ => out.push_str(&format!("{pad}{k}: {}\n", inline(v))),
                }
            }
        }
        Value::Array(items) => {
            for item in items {
                if is_flat(item) {
                    out.push_str(&format!("{pad}- {}\n", inline(item)));
                } else {
                    out.push_str(&format!("{pad}-\n"));
                    pretty(item, indent + 1, out);
                }
            }
        }
        _ => out.push_str(&format!("{pad}{}\n", inline(v))),
    }
}

fn is_flat(v: &Value) -> bool {
    match v {
        Value::Array(items) => items.iter().all(|i| !i.is_object() && !i.is_array()),
        Value::Object(m) => m.values().all(|i| !i.is_object() && !i.is_array()) && m.len() <= 4,
        _ => true,
    }
}

fn inline(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) => items.iter().map(inline).collect::<Vec<_>>().join(", "),
        Value::Object(m) => m
            .iter()
            .map(|(k, v)| format!("{k}={}", inline(v)))
            .collect::<Vec<_>>()
            .join(" "),
        other => other.to_string(),
    }
}

fn run(cli: &Cli) -> Result<Option<Failure>, Failure> {
    let (text, pending) = match &cli.command {
        Command::Verify { manifest } => cmd_verify(manifest)?,
        cmd => {
            let report = match cmd {
                Command::Uniformity { func, c, witnesses } => cmd_uniformity(func, c, *witnesses)?,
                Command::Cddt { func, c, witnesses } => cmd_cddt(func, c, *witnesses)?,
                Command::Bct { func } => cmd_bct(func)?,
                Command::Walsh { func } => cmd_walsh(func)?,
                Command::Summary { func } => cmd_summary(func)?,
                Command::Scan {
                    field,
                    source,
                    grid,
                    grid_cap,
                } => cmd_scan(field, source, grid, *grid_cap)?,
                Command::Verify { .. } => unreachable!(),
            };
            (render(report, cli.format), None)
        }
    };
    match &cli.out {
        Some(path) => fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(pending)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let failure = match run(&cli) {
        Ok(None) => return ExitCode::SUCCESS,
        Ok(Some(f)) | Err(f) => f,
    };
    match failure {
        Failure::Spec(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Failure::Check(msg) => {
            eprintln!("failed: {msg}");
            ExitCode::from(1)
        }
    }
}
