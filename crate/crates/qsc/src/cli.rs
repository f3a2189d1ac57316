//! Argument parsing and the subcommands.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use qsc_core::arith::derive_seed;
use qsc_core::catalog::{self, Kind, Request, Status, Value, VerificationRecord, DEFAULT_TRIALS};
use qsc_core::expr::parse_spec;
use qsc_core::padic::DEFAULT_BUDGET;
use qsc_core::qseries::{check_terminating_identity, IdentityId, IdentityParams, IDENTITY_IDS};
use qsc_core::{BigRat, MChoice};

use crate::config::config_args;
use crate::range::{parse_range, parse_unsigned};
use crate::report::{exit_code, summary, write_report, Format};

#[derive(Debug, Parser)]
#[command(name = "qsc", version, about = "Exact verification of q-supercongruences", args_override_self = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the statements and identities that can be checked.
    List {
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Verify catalog statements over parameter ranges.
    Verify(SweepArgs),
    /// Check terminating summation identities with seeded parameters.
    Identity(IdentityArgs),
    /// Verify the classical congruences modulo prime powers.
    Padic(SweepArgs),
    /// Verify the congruences described in a spec file.
    Check(CheckArgs),
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Write the report here instead of to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "jsonl")]
    pub format: Format,
    /// Worker threads; all cores by default.
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Record the running time of each instance.
    #[arg(long)]
    pub timestamps: bool,
    /// A `key = value` file of flags. Flags given on the command line win.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MChoiceArg {
    First,
    Second,
    Both,
}

impl MChoiceArg {
    fn choices(self) -> &'static [MChoice] {
        match self {
            MChoiceArg::First => &[MChoice::First],
            MChoiceArg::Second => &[MChoice::Second],
            MChoiceArg::Both => &MChoice::BOTH,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    /// Statement ids, comma separated, or `all`.
    #[arg(long)]
    pub id: Option<String>,
    /// Ranges such as `3..15` or `1,4,7`.
    #[arg(long, allow_hyphen_values = true)]
    pub n: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub d: Option<String>,
    /// Defaults to 1, -1 and the admissible negative value nearest zero.
    #[arg(long, allow_hyphen_values = true)]
    pub r: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<String>,
    #[arg(long)]
    pub p: Option<String>,
    #[arg(long)]
    pub s: Option<String>,
    /// Fix the parameter `c` instead of sampling it.
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Seeded specializations per parametric instance.
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    pub trials: u32,
    #[arg(long, value_enum, default_value = "first")]
    pub m_choice: MChoiceArg,
    /// Precision limit for p-adic Gamma values.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    /// Multiply each right side by q; every instance should then fail.
    #[arg(long)]
    pub negative_control: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct IdentityArgs {
    /// Identity ids, comma separated, or `all`.
    #[arg(long, default_value = "all")]
    pub id: String,
    #[arg(long, allow_hyphen_values = true)]
    pub n: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    pub d: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    pub r: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<String>,
    /// Number of seeded checks per identity.
    #[arg(long, default_value_t = 1)]
    pub random: u32,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CheckArgs {
    #[arg(long)]
    pub spec: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    pub trials: u32,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Run the command line and return the process exit code.
pub fn main_with(args: Vec<OsString>) -> i32 {
    let args = match with_config(args) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e:#}");
            return 2;
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            2
        }
    }
}

/// Splice the settings of a `--config` file in front of the flags.
fn with_config(mut args: Vec<OsString>) -> Result<Vec<OsString>> {
    let mut path = None;
    for (i, a) in args.iter().enumerate() {
        let a = a.to_string_lossy();
        if a == "--config" {
            let p = args.get(i + 1).ok_or_else(|| anyhow!("--config needs a file"))?;
            path = Some(PathBuf::from(p));
        } else if let Some(p) = a.strip_prefix("--config=") {
            path = Some(PathBuf::from(p));
        }
    }
    if let Some(path) = path {
        if args.len() < 2 {
            bail!("--config must follow a subcommand");
        }
        let extra = config_args(&path)?;
        args.splice(2..2, extra.into_iter().map(OsString::from));
    }
    Ok(args)
}

pub fn execute(command: Command) -> Result<i32> {
    match command {
        Command::List { format } => list(format),
        Command::Verify(args) => sweep(&args, false),
        Command::Padic(args) => sweep(&args, true),
        Command::Identity(args) => identities(&args),
        Command::Check(args) => check(&args),
    }
}

fn list(format: Option<Format>) -> Result<i32> {
    let mut records = Vec::new();
    for st in catalog::list_statements() {
        let kind = match st.kind {
            Kind::Sum => "sum",
            Kind::Parametric => "parametric",
            Kind::Lemma => "lemma",
            Kind::Exact => "exact",
            Kind::Classical => "classical",
        };
        records.push((st.id, kind, st.params.join(","), st.sampled.join(","), st.conditions, st.description));
    }
    for id in IDENTITY_IDS {
        records.push((id, "identity", String::new(), String::new(), "", "terminating summation, checked exactly"));
    }
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match format {
        None => {
            let args: Vec<String> = records
                .iter()
                .map(|(_, _, p, s, _, _)| if s.is_empty() { p.clone() } else { format!("{p} | {s}") })
                .collect();
            let id_w = records.iter().map(|r| r.0.len()).max().unwrap_or(0);
            let args_w = args.iter().map(String::len).max().unwrap_or(0);
            for ((id, kind, _, _, _, description), args) in records.iter().zip(&args) {
                writeln!(out, "{id:<id_w$} {kind:<10} {args:<args_w$} {description}")?;
            }
        }
        Some(Format::Jsonl) => {
            for (id, kind, params, sampled, conditions, description) in &records {
                let obj = serde_json::json!({
                    "id": id, "kind": kind, "params": params, "sampled": sampled,
                    "conditions": conditions, "description": description,
                });
                writeln!(out, "{obj}")?;
            }
        }
        Some(Format::Csv) => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["id", "kind", "params", "sampled", "conditions", "description"])?;
            for (id, kind, params, sampled, conditions, description) in &records {
                w.write_record([*id, *kind, params, sampled, *conditions, *description])?;
            }
            w.flush()?;
        }
    }
    Ok(0)
}

fn select_ids(spec: Option<&str>, classical_only: bool) -> Result<Vec<&'static str>> {
    let allowed = |k: Kind| !classical_only || k == Kind::Classical;
    let spec = match spec {
        Some(s) => s,
        None if classical_only => "all",
        None => bail!("--id is required"),
    };
    if spec == "all" {
        return Ok(catalog::list_statements().iter().filter(|s| allowed(s.kind)).map(|s| s.id).collect());
    }
    let mut ids = Vec::new();
    for id in spec.split(',').map(str::trim) {
        match catalog::statement(id) {
            Some(st) if allowed(st.kind) => ids.push(st.id),
            Some(_) => bail!("`{id}` is not a classical congruence; use `verify`"),
            None => bail!("unknown statement `{id}`; see `qsc list`"),
        }
    }
    Ok(ids)
}

/// The admissible `r <= -2` nearest zero, if any.
pub fn negative_r(id: &str, n: i64, d: i64, t: Option<i64>) -> Option<i64> {
    (2..=d * n.abs() + d).map(|k| -k).find(|&r| {
        let mut req = Request::new(id).n(n).d(d).r(r);
        req.t = t;
        catalog::resolve(&req).is_ok()
    })
}

/// Every request a sweep covers, in report order.
pub fn sweep_requests(args: &SweepArgs, classical_only: bool) -> Result<Vec<Request>> {
    let ids = select_ids(args.id.as_deref(), classical_only)?;
    let range = |v: &Option<String>, default: &str, what: &str| {
        parse_range(v.as_deref().unwrap_or(default)).with_context(|| format!("--{what}"))
    };
    let ns = range(&args.n, "1..10", "n")?;
    let ds = range(&args.d, "3..5", "d")?;
    let rs = args.r.as_deref().map(parse_range).transpose().context("--r")?;
    let ts = args.t.as_deref().map(parse_range).transpose().context("--t")?;
    let ps: Vec<u64> = parse_unsigned(args.p.as_deref().unwrap_or("5,7,11,13"), "p").context("--p")?;
    let ss: Vec<u32> = parse_unsigned(args.s.as_deref().unwrap_or("1"), "s").context("--s")?;
    let c = args
        .c
        .as_deref()
        .map(|c| c.parse::<BigRat>().map_err(|_| anyhow!("--c: `{c}` is not a rational number")))
        .transpose()?;

    let mut out = Vec::new();
    for id in ids {
        let st = catalog::statement(id).expect("selected ids exist");
        let takes = |p: &str| st.params.contains(&p);
        let base = {
            let mut r = Request::new(id).seed(args.seed).trials(args.trials);
            r.budget = args.budget;
            r.corrupt = args.negative_control;
            r.c = c.clone();
            r
        };
        let mut partial = vec![base];
        let mut expand = |f: &dyn Fn(&Request) -> Vec<Request>| {
            partial = partial.iter().flat_map(f).collect();
        };
        if st.kind == Kind::Classical {
            expand(&|r| ps.iter().map(|&p| r.clone().p(p)).collect());
            if takes("s") {
                expand(&|r| ss.iter().map(|&s| r.clone().s(s)).collect());
            }
            if takes("d") {
                expand(&|r| ds.iter().map(|&d| r.clone().d(d)).collect());
                let rs = rs.clone().unwrap_or(vec![1, -1]);
                expand(&|r| rs.iter().map(|&x| r.clone().r(x)).collect());
            }
        } else {
            expand(&|r| ns.iter().map(|&n| r.clone().n(n)).collect());
            if takes("d") {
                expand(&|r| ds.iter().map(|&d| r.clone().d(d)).collect());
            }
            if takes("t") {
                expand(&|r| {
                    let ts = match &ts {
                        Some(ts) => ts.clone(),
                        None if id == "PROP_5_3" => {
                            let d = r.d.unwrap_or(2);
                            if d == 2 { vec![1] } else { vec![1, d - 1] }
                        }
                        None => vec![1, 2],
                    };
                    ts.iter().map(|&t| r.clone().t(t)).collect()
                });
            }
            if takes("r") {
                expand(&|r| {
                    let rs = rs.clone().unwrap_or_else(|| {
                        let mut v = vec![1, -1];
                        v.extend(negative_r(id, r.n.unwrap(), r.d.unwrap(), r.t));
                        v
                    });
                    rs.iter().map(|&x| r.clone().r(x)).collect()
                });
            }
        }
        if st.two_truncations {
            expand(&|r| args.m_choice.choices().iter().map(|&m| r.clone().m_choice(m)).collect());
        }
        out.extend(partial);
    }
    Ok(out)
}

fn pool(jobs: Option<usize>) -> Result<rayon::ThreadPool> {
    Ok(rayon::ThreadPoolBuilder::new().num_threads(jobs.unwrap_or(0)).build()?)
}

/// Apply `f` to every item in parallel, keeping input order.
fn run_all<T: Sync>(
    items: &[T],
    output: &OutputArgs,
    f: impl Fn(&T) -> Result<VerificationRecord> + Sync,
) -> Result<Vec<VerificationRecord>> {
    pool(output.jobs)?.install(|| {
        items
            .par_iter()
            .map(|item| {
                let start = Instant::now();
                let mut rec = f(item)?;
                if output.timestamps {
                    rec.elapsed_ms = Some(start.elapsed().as_millis() as u64);
                }
                Ok(rec)
            })
            .collect()
    })
}

fn emit(records: &[VerificationRecord], output: &OutputArgs) -> Result<i32> {
    match &output.out {
        Some(path) => {
            let file = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
            write_report(records, output.format, &mut BufWriter::new(file))?;
        }
        None => write_report(records, output.format, &mut std::io::stdout().lock())?,
    }
    eprintln!("{}", summary(records));
    Ok(exit_code(records))
}

fn sweep(args: &SweepArgs, classical_only: bool) -> Result<i32> {
    let requests = sweep_requests(args, classical_only)?;
    let records = run_all(&requests, &args.output, |req| Ok(catalog::run(req)?))?;
    emit(&records, &args.output)
}

fn parse_rat(v: &Option<String>, what: &str) -> Result<Option<BigRat>> {
    v.as_deref()
        .map(|s| s.parse::<BigRat>().map_err(|_| anyhow!("--{what}: `{s}` is not a rational number")))
        .transpose()
}

fn identities(args: &IdentityArgs) -> Result<i32> {
    let ids: Vec<IdentityId> = if args.id == "all" {
        IDENTITY_IDS.iter().map(|s| IdentityId::parse(s).expect("listed id")).collect()
    } else {
        args.id
            .split(',')
            .map(|s| IdentityId::parse(s.trim()).ok_or_else(|| anyhow!("unknown identity `{s}`; see `qsc list`")))
            .collect::<Result<_>>()?
    };
    if args.random == 0 {
        bail!("--random must be at least 1");
    }
    let params = IdentityParams {
        n: args.n,
        t: args.t,
        d: args.d,
        r: args.r,
        b: parse_rat(&args.b, "b")?,
        c: parse_rat(&args.c, "c")?,
    };
    let fixed = params != IdentityParams::default();
    let jobs: Vec<(IdentityId, u32)> = ids.iter().flat_map(|&id| (0..args.random).map(move |i| (id, i))).collect();
    let records = run_all(&jobs, &args.output, |&(id, i)| {
        let check_seed = derive_seed(args.seed, &[&format!("check={i}")]);
        let mut witness = vec![("check".to_string(), Value::Int(i as i64))];
        witness.push(("check_seed".to_string(), Value::Str(check_seed.to_string())));
        let (params, status) = match check_terminating_identity(id, &params, check_seed) {
            Ok(out) => {
                if !out.equal {
                    witness.push(("lhs".into(), Value::Str(out.lhs.to_qrat().to_string())));
                    witness.push(("rhs".into(), Value::Str(out.rhs.to_qrat().to_string())));
                }
                let params = out
                    .params
                    .into_iter()
                    .map(|(k, v)| {
                        let v = v.parse::<i64>().map_or(Value::Str(v), Value::Int);
                        (k, v)
                    })
                    .collect();
                (params, if out.equal { Status::Verified } else { Status::Failed })
            }
            Err(e) if fixed => bail!("{}: {e}", id.name()),
            Err(e) => {
                witness.push(("error".into(), Value::Str(e.to_string())));
                (Vec::new(), Status::Error)
            }
        };
        Ok(VerificationRecord {
            id: id.name().to_string(),
            params,
            modulus: "exact".into(),
            m_choice: None,
            status,
            witness: Value::Map(witness),
            elapsed_ms: None,
            seed: args.seed,
        })
    })?;
    emit(&records, &args.output)
}

fn read_spec(path: &Path) -> Result<qsc_core::expr::CongruenceSpec> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse_spec(&text).with_context(|| format!("in {}", path.display()))
}

fn check(args: &CheckArgs) -> Result<i32> {
    let spec = read_spec(&args.spec)?;
    let instances = spec.instances().with_context(|| format!("in {}", args.spec.display()))?;
    let records = run_all(&instances, &args.output, |inst| {
        Ok(catalog::run_spec_instance(&spec, inst, args.seed, args.trials))
    })?;
    emit(&records, &args.output)
}
