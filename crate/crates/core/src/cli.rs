//! Command-line front end. Every subcommand writes deterministic JSON (or CSV
//! for catalogs) and exits with 0 on success, 1 when a checked property
//! fails, 2 on usage, I/O or parse errors.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::ale::{
    adjoint_decomposition, check_compatible_gluing_data, index_report, mutate, p1_coefficients,
    parse_charges, ALEBundleSpec, GluingData, IndexInputs, Mutation,
};
use crate::certify::{certify_unchecked, dihedral_so3_example, obstruction_witness, FlatRep};
use crate::enumeration::{
    enumerate, nogo_scan, parse_list, tau_triple_scan, verify_appendix, OrbitCatalog, ScanMode,
    ScanOptions, TokenTuple,
};
use crate::enumeration::appendix::{SO3_LIST, SO4_LIST};
use crate::error::{Error, Result};
use crate::orbifold::{census_type_counts, singular_census};

#[derive(Parser, Debug)]
#[command(name = "spin7-flat", version, about = "Flat orbifold connections on T^8/Gamma")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Worker threads for enumeration.
    #[arg(long, global = true, env = "SPIN7_JOBS")]
    pub jobs: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run the built-in invariant checks.
    Selftest(OutArgs),
    /// Fixed loci of the involutions and their orbits.
    Census(OutArgs),
    /// Certified orbits of commuting diagonal representations into SO(n).
    Enumerate(EnumerateArgs),
    /// Validate and certify one representation.
    Certify(CertifyArgs),
    /// Check a published list of representations against the enumeration.
    VerifyAppendix(AppendixArgs),
    /// Scans showing that no certified representations exist.
    Nogo(NogoArgs),
    /// ALE-side bundle topology.
    #[command(subcommand)]
    Topology(TopologyCommand),
}

#[derive(Args, Debug, Clone)]
pub struct OutArgs {
    /// Output file (stdout if omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exhaustive,
    Staged,
}

#[derive(Args, Debug)]
pub struct EnumerateArgs {
    /// Structure group, e.g. so3 or SO(3).
    #[arg(long, value_parser = parse_group)]
    pub group: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Scan strategy; exhaustive up to SO(6), staged above.
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    /// Also list orbits that are rigid and unobstructed but reducible.
    #[arg(long)]
    pub include_reducible: bool,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args, Debug)]
pub struct CertifyArgs {
    /// Representation JSON: {"n": .., "images": {"alpha": rows, ..}}.
    #[arg(long, conflicts_with = "tuple")]
    pub input: Option<PathBuf>,
    /// Token tuple "(gamma, delta, tau4, tau5, tau8)", expanded to a representation.
    #[arg(long, requires = "group")]
    pub tuple: Option<String>,
    #[arg(long, value_parser = parse_group)]
    pub group: Option<usize>,
    /// Include the bases of h0, h1, h2.
    #[arg(long)]
    pub bases: bool,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args, Debug)]
pub struct AppendixArgs {
    #[arg(long, value_parser = parse_group)]
    pub group: usize,
    /// List file; the shipped list for the group is used if omitted.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args, Debug)]
pub struct NogoArgs {
    /// Groups to scan; defaults to SO(6) and SO(9)..SO(12). SO(9) and larger
    /// use the translation-part scan.
    #[arg(long = "group", value_parser = parse_group)]
    pub groups: Vec<usize>,
    /// Skip the non-commutative SO(3) example.
    #[arg(long)]
    pub no_dihedral: bool,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Subcommand, Debug)]
pub enum TopologyCommand {
    /// Ad E = s0 R + s1 [L] + s2 [L^2] for E = m[L] + R^k.
    Decompose {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Evaluate the index formula on supplied topological inputs.
    Index {
        #[arg(long)]
        json: PathBuf,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Build gluing data from a representation and check compatibility.
    CheckGluing {
        #[arg(long, conflicts_with = "tuple")]
        rep: Option<PathBuf>,
        #[arg(long, requires = "group")]
        tuple: Option<String>,
        #[arg(long, value_parser = parse_group)]
        group: Option<usize>,
        /// JSON object {"73": charge, ...}.
        #[arg(long)]
        charges: Option<PathBuf>,
        /// Also report the documented mutations of the data.
        #[arg(long)]
        mutations: bool,
        #[command(flatten)]
        out: OutArgs,
    },
}

/// Accepts `so3`, `SO(3)`, `so(3)` or `3`.
pub fn parse_group(s: &str) -> std::result::Result<usize, String> {
    let t = s.trim().to_ascii_lowercase();
    let t = t.strip_prefix("so").unwrap_or(&t);
    let t = t.trim_start_matches('(').trim_end_matches(')');
    let n: usize = t.parse().map_err(|_| format!("not a group: {s:?}"))?;
    if !(2..=crate::enumeration::tokens::MAX_N).contains(&n) {
        return Err(format!("SO({n}) is outside 2..={}", crate::enumeration::tokens::MAX_N));
    }
    Ok(n)
}

/// Parse arguments from the environment and run.
pub fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Validation(_) => 1,
                _ => 2,
            })
        }
    }
}

/// Run a parsed command; `Ok(false)` means a checked property failed.
pub fn run(cli: Cli) -> Result<bool> {
    if let Some(j) = cli.jobs {
        // Only the first call configures the pool; later calls keep it.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global();
    }
    match cli.command {
        Command::Selftest(o) => {
            let r = crate::selftest::run();
            emit_json(&o, &r)?;
            Ok(r.passed)
        }
        Command::Census(o) => {
            let c = singular_census();
            let totals: std::collections::BTreeMap<String, usize> = census_type_counts(&c)
                .into_iter()
                .map(|(k, v)| (serde_json::to_value(k).expect("tag").as_str().unwrap_or("").to_string(), v))
                .collect();
            let strata: Vec<_> = c
                .strata
                .iter()
                .map(|s| {
                    json!({
                        "label": s.label,
                        "type": s.kind,
                        "source": s.source.to_string(),
                        "components": s.components.iter().map(ToString::to_string).collect::<Vec<_>>(),
                    })
                })
                .collect();
            emit_json(&o, &json!({ "rows": c.rows, "totals": totals, "strata": strata }))?;
            Ok(true)
        }
        Command::Enumerate(a) => cmd_enumerate(a),
        Command::Certify(a) => cmd_certify(a),
        Command::VerifyAppendix(a) => {
            let list = match &a.input {
                Some(p) => parse_list(&read(p)?, a.group).map_err(|e| with_path(p, e))?,
                None => match a.group {
                    3 => parse_list(SO3_LIST, 3)?,
                    4 => parse_list(SO4_LIST, 4)?,
                    n => return Err(Error::Unsupported(format!("no shipped list for SO({n}); pass --input"))),
                },
            };
            let r = verify_appendix(&list, a.group)?;
            emit_json(&a.out, &r)?;
            Ok(r.passed)
        }
        Command::Nogo(a) => cmd_nogo(a),
        Command::Topology(t) => cmd_topology(t),
    }
}

fn cmd_enumerate(a: EnumerateArgs) -> Result<bool> {
    let opts = ScanOptions {
        mode: a.mode.map(|m| match m {
            ModeArg::Exhaustive => ScanMode::Exhaustive,
            ModeArg::Staged => ScanMode::Staged,
        }),
        include_reducible: a.include_reducible,
    };
    let cat = enumerate(a.group, opts)?;
    match a.format {
        Format::Json => emit_json(&a.out, &cat)?,
        Format::Csv => emit(&a.out, &catalog_csv(&cat)?)?,
    }
    Ok(true)
}

/// Columns: `status, gamma, delta, tau4, tau5, tau8, key, orbit_size, h0, h1, h2`.
pub const CSV_HEADER: [&str; 11] =
    ["status", "gamma", "delta", "tau4", "tau5", "tau8", "key", "orbit_size", "h0", "h1", "h2"];

pub fn catalog_csv(cat: &OrbitCatalog) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Io(std::io::Error::other(e));
    w.write_record(CSV_HEADER).map_err(io)?;
    let rows = cat
        .records
        .iter()
        .map(|r| ("certified", r))
        .chain(cat.reducible.iter().flatten().map(|r| ("reducible", r)));
    for (status, r) in rows {
        let mut rec: Vec<String> = vec![status.into()];
        rec.extend(r.tuple.tokens().iter().map(|t| t.name()));
        rec.push(r.key.to_string());
        rec.push(r.orbit_size.to_string());
        rec.extend([r.report.h0, r.report.h1, r.report.h2].map(|h| h.to_string()));
        w.write_record(&rec).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(std::io::Error::other(e.to_string())))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn load_rep(input: Option<&Path>, tuple: Option<&str>, group: Option<usize>) -> Result<FlatRep> {
    match (input, tuple) {
        (Some(p), _) => serde_json::from_str(&read(p)?).map_err(|e| with_path(p, e.into())),
        (None, Some(t)) => {
            let n = group.ok_or_else(|| Error::Domain("--tuple needs --group".into()))?;
            Ok(TokenTuple::parse(t, n)?.expand())
        }
        (None, None) => Err(Error::Domain("pass a representation file or --tuple".into())),
    }
}

fn cmd_certify(a: CertifyArgs) -> Result<bool> {
    let rep = load_rep(a.input.as_deref(), a.tuple.as_deref(), a.group)?;
    let violations = rep.validate();
    let valid = violations.is_empty();
    let report = valid.then(|| certify_unchecked(&rep, a.bases));
    let witness = if valid { obstruction_witness(&rep)? } else { None };
    emit_json(
        &a.out,
        &json!({ "n": rep.n(), "valid": valid, "violations": violations, "report": report, "witness": witness }),
    )?;
    Ok(valid)
}

fn cmd_nogo(a: NogoArgs) -> Result<bool> {
    let groups = if a.groups.is_empty() { vec![6, 9, 10, 11, 12] } else { a.groups.clone() };
    let mut scans = Vec::new();
    let mut passed = true;
    for n in groups {
        let v = if n >= 9 {
            let r = tau_triple_scan(n)?;
            passed &= r.passed;
            serde_json::to_value(r)?
        } else {
            let r = nogo_scan(n)?;
            passed &= r.passed;
            serde_json::to_value(r)?
        };
        scans.push(v);
    }
    let dihedral = if a.no_dihedral {
        None
    } else {
        let rep = dihedral_so3_example();
        let violations = rep.validate();
        let report = certify_unchecked(&rep, false);
        let witness = obstruction_witness(&rep)?;
        let ok = violations.is_empty()
            && report.h2 >= 1
            && witness.as_ref().is_some_and(|w| w.verify(&rep));
        passed &= ok;
        Some(json!({ "valid": violations.is_empty(), "report": report, "witness": witness, "passed": ok }))
    };
    emit_json(&a.out, &json!({ "passed": passed, "scans": scans, "dihedral_so3": dihedral }))?;
    Ok(passed)
}

fn cmd_topology(t: TopologyCommand) -> Result<bool> {
    match t {
        TopologyCommand::Decompose { m, k, out } => {
            let spec = ALEBundleSpec::new(m, k)?;
            let d = adjoint_decomposition(spec);
            let n = spec.n();
            emit_json(&out, &json!({ "m": m, "k": k, "n": n, "decomposition": d, "dim_so": n * (n - 1) / 2 }))?;
            Ok(true)
        }
        TopologyCommand::Index { json, out } => {
            let inp: IndexInputs =
                serde_json::from_str(&read(&json)?).map_err(|e| with_path(&json, e.into()))?;
            emit_json(&out, &index_report(inp))?;
            Ok(true)
        }
        TopologyCommand::CheckGluing { rep, tuple, group, charges, mutations, out } => {
            let rep = load_rep(rep.as_deref(), tuple.as_deref(), group)?;
            let charges = match &charges {
                Some(p) => {
                    let v: serde_json::Value =
                        serde_json::from_str(&read(p)?).map_err(|e| with_path(p, e.into()))?;
                    parse_charges(&v).map_err(|e| with_path(p, e))?
                }
                None => Default::default(),
            };
            let data = GluingData::from_rep(rep, charges)?;
            let report = check_compatible_gluing_data(&data);
            let mut body = json!({
                "specs": data.specs,
                "report": report,
                "pontryagin": p1_coefficients(&data),
            });
            if mutations {
                let m: Vec<_> = [Mutation::HolonomyMismatch, Mutation::InjectMonodromy, Mutation::ClearRigidity]
                    .into_iter()
                    .map(|m| {
                        let passed = mutate(&data, m).map(|d| check_compatible_gluing_data(&d).passed);
                        json!({ "mutation": format!("{m:?}"), "passed": passed.ok() })
                    })
                    .collect();
                body["mutations"] = json!(m);
            }
            emit_json(&out, &body)?;
            Ok(report.passed)
        }
    }
}

fn read(p: &Path) -> Result<String> {
    fs::read_to_string(p).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", p.display()))))
}

fn with_path(p: &Path, e: Error) -> Error {
    match e {
        Error::Parse { line, msg } => Error::Parse { line, msg: format!("{}: {msg}", p.display()) },
        Error::Json(j) => Error::Parse { line: j.line(), msg: format!("{}: {j}", p.display()) },
        other => Error::Domain(format!("{}: {other}", p.display())),
    }
}

fn emit_json<T: Serialize>(o: &OutArgs, v: &T) -> Result<()> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    emit(o, &s)
}

fn emit(o: &OutArgs, s: &str) -> Result<()> {
    match &o.out {
        Some(p) => fs::write(p, s)?,
        None => std::io::stdout().lock().write_all(s.as_bytes())?,
    }
    Ok(())
}
