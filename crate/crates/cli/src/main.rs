use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use altder::catalog::{self, Instance, Params};
use altder::derivations::ValuesMode;
use altder::format::{parse_algebra, write_algebra};
use altder::options::{DEFAULT_ENUM_CAP, DEFAULT_SAMPLES, DEFAULT_SEED};
use altder::{Algebra, Check, Error, FieldDescriptor, Identity, Matrix, Options, Provenance, SuiteReport};
use anyhow::Context;
use clap::{Parser, Subcommand};
use serde_json::{json, Value};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_INPUT: u8 = 3;

/// Exact computations on structure-constant algebras and their derivations.
#[derive(Parser, Debug)]
#[command(name = "altder", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Samples per sampled check.
    #[arg(long, global = true, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
    /// Largest search space enumerated exhaustively.
    #[arg(long, global = true, default_value_t = DEFAULT_ENUM_CAP)]
    enum_cap: u64,
    /// Print the JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Ground field for catalog targets, e.g. `gf5`, `q`, `gf2(s,t)`.
    #[arg(long, global = true)]
    field: Option<String>,
    /// The element `a` of GF(4) for `lemma23-Dx` (0, 1, w, w2).
    #[arg(long, global = true)]
    a: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check identities (default: the instance's expected ones, or all for files).
    Identities {
        target: String,
        #[arg(long = "identity")]
        identities: Vec<Identity>,
    },
    /// Derivation algebra.
    Derivations { target: String },
    /// Leibniz-derivations of the given order.
    Leibniz {
        target: String,
        #[arg(long)]
        order: usize,
    },
    /// Quasiderivations and whether they exhaust End(A).
    Quasiderivations { target: String },
    /// Power chain A^1 ⊇ A^2 ⊇ ...
    Powers { target: String },
    /// Whether a derivation is inner.
    Inner {
        target: String,
        #[arg(long)]
        map: Option<PathBuf>,
    },
    /// Whether every nonzero value of a derivation is invertible.
    InvertibleValues {
        target: String,
        #[arg(long)]
        map: Option<PathBuf>,
        #[arg(long, default_value = "sample")]
        mode: ValuesMode,
    },
    /// Emit a catalog instance in the algebra JSON format.
    Build { name: String },
    /// Run a verification suite, or `all`.
    Verify {
        suite: String,
        #[arg(long)]
        parallel: bool,
    },
}

/// Failure that maps to an exit code other than 1.
#[derive(Debug)]
enum Abort {
    Usage(String),
    Input(anyhow::Error),
}

impl From<anyhow::Error> for Abort {
    fn from(e: anyhow::Error) -> Abort {
        Abort::Input(e)
    }
}

impl From<Error> for Abort {
    fn from(e: Error) -> Abort {
        match e {
            Error::UnknownSuite(_) | Error::UnknownInstance(_) | Error::InvalidParams(_) => Abort::Usage(e.to_string()),
            e => Abort::Input(e.into()),
        }
    }
}

enum Target {
    File(Algebra),
    Catalog(Box<Instance>),
}

impl Target {
    fn algebra(&self) -> &Algebra {
        match self {
            Target::File(a) => a,
            Target::Catalog(i) => &i.algebra,
        }
    }

    fn instance(&self) -> Option<&Instance> {
        match self {
            Target::File(_) => None,
            Target::Catalog(i) => Some(i),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(Abort::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Abort::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}

fn run(cli: &Cli) -> Result<u8, Abort> {
    let opts = Options {
        seed: cli.seed,
        samples: cli.samples,
        enum_cap: cli.enum_cap,
    };
    let reports = match &cli.command {
        Command::Build { name } => {
            let instance = catalog::build(name, &params(cli)?)?;
            emit(cli, &write_algebra(&instance.algebra))?;
            return Ok(0);
        }
        Command::Verify { suite, parallel } => {
            let names: Vec<&str> = if suite == "all" {
                catalog::SUITES.to_vec()
            } else {
                vec![suite.as_str()]
            };
            let reports = catalog::run_suites(&names, &opts, *parallel)?;
            if cli.json && suite != "all" {
                emit(cli, &reports[0].to_json())?;
            } else if cli.json {
                emit(cli, &serde_json::to_string_pretty(&reports).expect("reports serialize"))?;
            } else {
                emit(
                    cli,
                    &reports.iter().map(|r| r.to_string()).collect::<Vec<_>>().join("\n"),
                )?;
            }
            return Ok(exit_code(&reports));
        }
        Command::Identities { target, identities } => {
            let t = load(cli, target)?;
            vec![identities_report(&t, identities, &opts)]
        }
        Command::Derivations { target } => {
            let t = load(cli, target)?;
            vec![derivations_report(t.algebra(), &opts)]
        }
        Command::Leibniz { target, order } => {
            let t = load(cli, target)?;
            vec![leibniz_report(t.algebra(), *order, &opts)?]
        }
        Command::Quasiderivations { target } => {
            let t = load(cli, target)?;
            vec![qder_report(t.algebra(), &opts)]
        }
        Command::Powers { target } => {
            let t = load(cli, target)?;
            vec![powers_report(t.algebra(), &opts)]
        }
        Command::Inner { target, map } => {
            let t = load(cli, target)?;
            let d = load_map(&t, map.as_deref())?;
            vec![inner_report(t.algebra(), &d, &opts)?]
        }
        Command::InvertibleValues { target, map, mode } => {
            let t = load(cli, target)?;
            let d = load_map(&t, map.as_deref())?;
            vec![values_report(&t, &d, *mode, &opts)?]
        }
    };
    let report = &reports[0];
    if cli.json {
        emit(cli, &report.to_json())?;
    } else {
        emit(cli, &report.to_string())?;
    }
    Ok(exit_code(&reports))
}

fn exit_code(reports: &[SuiteReport]) -> u8 {
    if reports.iter().all(SuiteReport::passed) {
        0
    } else {
        EXIT_FAIL
    }
}

fn emit(cli: &Cli, text: &str) -> Result<(), Abort> {
    let mut text = text.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match &cli.out {
        Some(path) => fs::write(path, text)
            .with_context(|| format!("cannot write {}", path.display()))
            .map_err(Abort::Input),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn params(cli: &Cli) -> Result<Params, Abort> {
    let field = cli
        .field
        .as_deref()
        .map(|f| f.parse::<FieldDescriptor>())
        .transpose()
        .map_err(|e| Abort::Usage(format!("--field: {e}")))?;
    Ok(Params {
        field,
        a: cli.a.clone(),
    })
}

/// A path to an algebra file if one exists there, otherwise a catalog name.
fn load(cli: &Cli, target: &str) -> Result<Target, Abort> {
    let path = Path::new(target);
    if path.is_file() {
        if cli.field.is_some() || cli.a.is_some() {
            return Err(Abort::Usage("--field and --a apply only to catalog targets".into()));
        }
        let text = fs::read_to_string(path).with_context(|| format!("cannot read {target}"))?;
        let algebra = parse_algebra(&text).with_context(|| format!("in {target}"))?;
        return Ok(Target::File(algebra));
    }
    if !catalog::INSTANCES.contains(&target) {
        return Err(Abort::Usage(format!(
            "`{target}` is neither a file nor a catalog instance ({})",
            catalog::INSTANCES.join(", ")
        )));
    }
    Ok(Target::Catalog(Box::new(catalog::build(target, &params(cli)?)?)))
}

/// A map file holds `[[row], ...]` or `{"map": [[row], ...]}`; column `c` is the image of `e_c`.
fn load_map(t: &Target, path: Option<&Path>) -> Result<Matrix, Abort> {
    let Some(path) = path else {
        return t
            .instance()
            .and_then(|i| i.derivation.clone())
            .ok_or_else(|| Abort::Usage("--map is required for this target".into()));
    };
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let value: Value = serde_json::from_str(&text).with_context(|| format!("in {}", path.display()))?;
    let rows = value.get("map").unwrap_or(&value);
    let m = t
        .algebra()
        .decode_matrix(rows)
        .with_context(|| format!("in {}", path.display()))?;
    Ok(m)
}

fn identities_report(t: &Target, ids: &[Identity], opts: &Options) -> SuiteReport {
    let a = t.algebra();
    let mut r = SuiteReport::new("identities", opts.seed);
    match (ids.is_empty(), t.instance()) {
        (true, Some(instance)) => {
            for c in instance.sanity(opts) {
                r.push(c);
            }
        }
        _ => {
            let ids = if ids.is_empty() { &Identity::ALL[..] } else { ids };
            for &id in ids {
                r.push(a.check_identity(id, opts).to_check(a, id.to_string()));
            }
        }
    }
    r
}

fn derivations_report(a: &Algebra, opts: &Options) -> SuiteReport {
    let mut r = SuiteReport::new("derivations", opts.seed);
    let der = a.derivation_space();
    let law = der
        .maps()
        .iter()
        .all(|m| a.is_derivation(m).map(|c| c.holds).unwrap_or(false));
    r.push(
        Check::new(format!("dim Der = {}", der.dim()), law, Provenance::Certified)
            .with_witness(der.to_json(a))
            .with_detail(format!("{} basis maps satisfy the derivation law", der.dim())),
    );
    r
}

fn leibniz_report(a: &Algebra, order: usize, opts: &Options) -> Result<SuiteReport, Abort> {
    let space = a.leibniz_space(order).map_err(|e| match e {
        Error::InvalidOrder(_) => Abort::Usage(e.to_string()),
        e => e.into(),
    })?;
    let mut r = SuiteReport::new("leibniz", opts.seed);
    let law = space
        .maps()
        .iter()
        .all(|m| a.is_leibniz(m, order).map(|c| c.holds).unwrap_or(false));
    let identity = space.contains(&Matrix::identity(a.field(), a.dim()));
    r.push(
        Check::new(
            format!("dim Leibniz-derivations of order {order} = {}", space.dim()),
            law,
            Provenance::Certified,
        )
        .with_witness(json!({"space": space.to_json(a), "contains_identity": identity}))
        .with_detail(format!(
            "identity {} the space",
            if identity { "lies in" } else { "is not in" }
        )),
    );
    Ok(r)
}

fn qder_report(a: &Algebra, opts: &Options) -> SuiteReport {
    let mut r = SuiteReport::new("quasiderivations", opts.seed);
    let space = a.quasider_space();
    let partners = space.maps().iter().all(|f| a.quasider_witness(f).is_some());
    let equals_end = space.dim() == a.dim() * a.dim();
    r.push(
        Check::new(format!("dim QDer = {}", space.dim()), partners, Provenance::Certified)
            .with_witness(json!({"space": space.to_json(a), "equals_end": equals_end}))
            .with_detail(format!("QDer {} End(A)", if equals_end { "=" } else { "!=" })),
    );
    r
}

fn powers_report(a: &Algebra, opts: &Options) -> SuiteReport {
    let mut r = SuiteReport::new("powers", opts.seed);
    let chain = a.power_chain();
    let dims = chain.dims();
    let monotone = dims.windows(2).all(|w| w[0] >= w[1]);
    let detail = match chain.index {
        Some(s) => format!("dims {dims:?}, nilpotent of index {s}"),
        None => format!("dims {dims:?}, not nilpotent"),
    };
    r.push(
        Check::new("power chain", monotone, Provenance::Certified)
            .with_witness(json!({"dims": dims, "nilpotency_index": chain.index}))
            .with_detail(detail),
    );
    r
}

fn inner_report(a: &Algebra, d: &Matrix, opts: &Options) -> Result<SuiteReport, Abort> {
    let mut r = SuiteReport::new("inner", opts.seed);
    let law = a.is_derivation(d)?;
    let mut c = Check::new("map is a derivation", law.holds, Provenance::Certified);
    if let Some(w) = law.witness_json(a) {
        c = c.with_witness(w);
    }
    r.push(c);
    if law.holds {
        r.push(Check::new("map is inner", a.is_inner(d)?, Provenance::Certified));
    }
    Ok(r)
}

fn values_report(t: &Target, d: &Matrix, mode: ValuesMode, opts: &Options) -> Result<SuiteReport, Abort> {
    let a = t.algebra();
    let certificate = t
        .instance()
        .and_then(|i| i.quadratic.as_ref().zip(i.certificate.as_ref()));
    let verdict = a.invertible_values(d, mode, certificate, opts)?;
    let mut r = SuiteReport::new("invertible-values", opts.seed);
    r.push(
        Check::new(
            "every nonzero value is invertible",
            verdict.passed(),
            verdict.provenance(),
        )
        .with_witness(verdict.to_json(a)),
    );
    Ok(r)
}
