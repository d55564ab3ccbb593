//! `softtop`: command-line front end for finite soft topological spaces.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};
use softtop::document::set_to_document;
use softtop::harness::{
    run_suite, select_suite, status_table, Alg, Env, GenConfig, Mutant, SuiteOptions, Verdict,
};
use softtop::{
    Error, Limits, Membership, MappingDocument, PointSet, ProductContext, SoftSet, SoftSpace,
    SpaceDocument,
};

const EXIT_LAW: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_CAP: u8 = 3;

#[derive(Parser)]
#[command(name = "softtop", version, about = "Finite soft topological spaces")]
struct Cli {
    #[command(flatten)]
    caps: Caps,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Caps {
    /// Largest topology any closure may produce.
    #[arg(long, global = true, env = "SOFTTOP_MAX_OPENS", default_value_t = 4096)]
    max_opens_cap: usize,
    /// Largest universe for component and local-connectedness scans.
    #[arg(long, global = true, env = "SOFTTOP_MAX_COMPONENT_POINTS", default_value_t = 12)]
    max_component_points: usize,
    /// Largest factor topology accepted by `product`.
    #[arg(long, global = true, env = "SOFTTOP_MAX_FACTOR_OPENS", default_value_t = 16)]
    max_factor_opens: usize,
}

impl Caps {
    fn limits(&self) -> Limits {
        Limits {
            max_opens: self.max_opens_cap,
            max_component_points: self.max_component_points,
            max_factor_opens: self.max_factor_opens,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum MembershipArg {
    /// A point belongs to a soft set when every row contains it.
    All,
    /// A point belongs to a soft set when some row contains it.
    Any,
}

impl From<MembershipArg> for Membership {
    fn from(m: MembershipArg) -> Membership {
        match m {
            MembershipArg::All => Membership::AllParams,
            MembershipArg::Any => Membership::AnyParam,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check the topology axioms, or complete the family to a topology.
    Validate {
        space: PathBuf,
        /// Emit the topology generated by the listed opens.
        #[arg(long)]
        complete: bool,
    },
    /// Decide connectedness; a disconnected space comes with a separation.
    Connected { space: PathBuf },
    /// Connected components and orphan points.
    Components { space: PathBuf },
    /// Decide soft T2; a failure names the first inseparable pair.
    Hausdorff {
        space: PathBuf,
        #[arg(long, value_enum, default_value = "all")]
        membership: MembershipArg,
    },
    /// Local connectedness per point and overall.
    LocallyConnected {
        space: PathBuf,
        /// Check weak local connectedness instead.
        #[arg(long)]
        weak: bool,
        #[arg(long, value_enum, default_value = "all")]
        membership: MembershipArg,
    },
    /// Decide pu-continuity of a mapping between two spaces.
    Continuous {
        source: PathBuf,
        target: PathBuf,
        mapping: PathBuf,
        /// Decide on this basis of the target instead of all its opens.
        #[arg(long, value_name = "FILE")]
        basis: Option<PathBuf>,
    },
    /// Product of two spaces.
    Product {
        left: PathBuf,
        right: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Check the theorem suite on generated instances.
    Fuzz(FuzzArgs),
}

#[derive(Args)]
struct FuzzArgs {
    /// `all`, `laws`, `conjectures`, a group name, or comma-separated ids.
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, default_value_t = 1000)]
    instances: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 3)]
    max_universe: usize,
    #[arg(long, default_value_t = 2)]
    max_params: usize,
    /// Largest generated topology.
    #[arg(long, default_value_t = 64)]
    max_opens: usize,
    /// Enumerate every instance when the instance space is small enough.
    #[arg(long)]
    exhaustive: bool,
    #[arg(long, value_enum, default_value = "all")]
    membership: MembershipArg,
    /// Print a status table to stderr after the reports.
    #[arg(long)]
    table: bool,
    /// Write each counterexample witness to DIR/<theorem>.json.
    #[arg(long, value_name = "DIR")]
    artifacts: Option<PathBuf>,
    #[arg(long, hide = true)]
    mutant: Option<Mutant>,
}

enum Failure {
    Core(Error),
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Core(e)
    }
}

type Outcome = Result<u8, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_document(path: &Path) -> Result<SpaceDocument, Failure> {
    Ok(SpaceDocument::parse(&read(path)?)?)
}

fn load_space(path: &Path) -> Result<SoftSpace, Failure> {
    Ok(load_document(path)?.space()?)
}

fn emit(v: Value) {
    println!("{}", serde_json::to_string(&v).expect("values serialize"));
}

fn set_value(f: &SoftSet) -> Value {
    let rows: Map<String, Value> = set_to_document(f)
        .into_iter()
        .map(|(e, xs)| (e, json!(xs)))
        .collect();
    Value::Object(rows)
}

fn names(y: &PointSet) -> Value {
    json!(y.names())
}

fn validate(path: &Path, complete: bool, limits: &Limits) -> Outcome {
    let family = load_document(path)?.family()?;
    if complete {
        let space = SoftSpace::generate(family.context(), family.opens(), limits)?;
        print!("{}", SpaceDocument::from_space(&space).to_json());
        return Ok(0);
    }
    let violations = family.validate();
    emit(json!({
        "valid": violations.is_empty(),
        "violations": violations,
    }));
    Ok(if violations.is_empty() { 0 } else { EXIT_INPUT })
}

fn connected(path: &Path) -> Outcome {
    let space = load_space(path)?;
    match space.find_separation() {
        None => emit(json!({ "connected": true })),
        Some(sep) => emit(json!({
            "connected": false,
            "separation": { "left": set_value(&sep.left), "right": set_value(&sep.right) },
        })),
    }
    Ok(0)
}

fn components(path: &Path, limits: &Limits) -> Outcome {
    let space = load_space(path)?;
    let part = space.components(limits)?;
    let classes: Vec<Value> = part.classes.iter().map(names).collect();
    emit(json!({ "classes": classes, "orphans": names(&part.orphans) }));
    Ok(0)
}

fn hausdorff(path: &Path, membership: Membership) -> Outcome {
    let space = load_space(path)?;
    let ctx = space.context();
    match space.hausdorff_violation_with(membership) {
        None => emit(json!({ "hausdorff": true })),
        Some((x, y)) => emit(json!({
            "hausdorff": false,
            "violation": [ctx.point_name(x), ctx.point_name(y)],
        })),
    }
    Ok(0)
}

fn locally_connected(path: &Path, weak: bool, membership: Membership, limits: &Limits) -> Outcome {
    let space = load_space(path)?;
    let per_point = if weak {
        space.weak_local_connectedness_with(membership, limits)?
    } else {
        space.local_connectedness_with(membership)?
    };
    let points: Map<String, Value> = per_point
        .iter()
        .enumerate()
        .map(|(x, &ok)| (space.context().point_name(x).to_string(), json!(ok)))
        .collect();
    emit(json!({
        "property": if weak { "weakly-locally-connected" } else { "locally-connected" },
        "holds": per_point.iter().all(|&ok| ok),
        "points": points,
    }));
    Ok(0)
}

fn continuous(src: &Path, dst: &Path, map: &Path, basis: Option<&Path>) -> Outcome {
    let (s, t) = (load_space(src)?, load_space(dst)?);
    let f = MappingDocument::parse(&read(map)?)?.mapping(s.context(), t.context())?;
    let witness = match basis {
        None => f.first_discontinuity(&s, &t)?,
        Some(b) => {
            let family = load_document(b)?.family()?;
            f.first_basis_discontinuity(&s, &t, family.opens())?
        }
    };
    match witness {
        None => emit(json!({ "continuous": true })),
        Some(g) => emit(json!({
            "continuous": false,
            "open": set_value(&g),
            "preimage": set_value(&f.preimage(&g)?),
        })),
    }
    Ok(0)
}

fn product(left: &Path, right: &Path, out: &Path, limits: &Limits) -> Outcome {
    let (s1, s2) = (load_space(left)?, load_space(right)?);
    let pc = ProductContext::new(s1.context(), s2.context())?;
    let space = pc.topology(&s1, &s2, limits)?;
    write(out, &SpaceDocument::from_space(&space).to_json())?;
    emit(json!({
        "opens": space.len(),
        "output": out.display().to_string(),
        "params": space.context().n_params(),
        "points": space.context().n_points(),
    }));
    Ok(0)
}

fn fuzz(args: &FuzzArgs, limits: &Limits) -> Outcome {
    let cfg = GenConfig {
        seed: args.seed,
        max_universe: args.max_universe,
        max_params: args.max_params,
        max_opens: args.max_opens,
        instances: args.instances,
    };
    cfg.validate()?;
    let suite = select_suite(&args.suite)?;
    let opts = SuiteOptions {
        exhaustive: args.exhaustive,
        env: Env {
            alg: Alg::new(args.mutant),
            membership: args.membership.into(),
            limits: *limits,
        },
    };
    let reports = run_suite(&cfg, &suite, &opts);
    for r in &reports {
        println!("{}", r.to_json_line());
    }
    if args.table {
        eprint!("{}", status_table(&reports));
    }
    if let Some(dir) = &args.artifacts {
        fs::create_dir_all(dir).map_err(|e| Failure::Input(format!("{}: {e}", dir.display())))?;
        for r in &reports {
            if let Some(w) = &r.witness {
                write(&dir.join(format!("{}.json", r.id)), &w.to_json())?;
            }
        }
    }
    Ok(if reports.iter().any(|r| r.is_law_failure()) {
        EXIT_LAW
    } else if reports.iter().any(|r| r.verdict == Verdict::SkippedCap) {
        EXIT_CAP
    } else {
        0
    })
}

fn run(cli: &Cli) -> Outcome {
    let limits = cli.caps.limits();
    match &cli.command {
        Command::Validate { space, complete } => validate(space, *complete, &limits),
        Command::Connected { space } => connected(space),
        Command::Components { space } => components(space, &limits),
        Command::Hausdorff { space, membership } => hausdorff(space, (*membership).into()),
        Command::LocallyConnected {
            space,
            weak,
            membership,
        } => locally_connected(space, *weak, (*membership).into(), &limits),
        Command::Continuous {
            source,
            target,
            mapping,
            basis,
        } => continuous(source, target, mapping, basis.as_deref()),
        Command::Product {
            left,
            right,
            output,
        } => product(left, right, output, &limits),
        Command::Fuzz(args) => fuzz(args, &limits),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            if let Error::InvalidTopology(vs) = &e {
                for v in vs {
                    eprintln!("  {v}");
                }
            }
            ExitCode::from(if e.is_cap() { EXIT_CAP } else { EXIT_INPUT })
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}
