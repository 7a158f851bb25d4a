mod load;
mod render;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use mtcdef::category::{verify_hexagon, verify_modularity, verify_pentagon, verify_ribbon, MtcData, Report};
use mtcdef::diagram::{evaluate, SlicedDiagram};
use mtcdef::frobenius::{check_algebra, solve_haploid_algebra, trivial_algebra, AlgebraJson, FrobeniusAlgebra};
use mtcdef::homspace::{Cat, SSObject};
use mtcdef::invariants::{
    center_projector, full_center_matrix, sphere_embedding_invariant, t3_invariants, CenterData, Manifold, Side,
};
use rayon::prelude::*;
use serde_json::{json, Value};

use load::{CategoryArgs, VerifyArgs};

pub enum CliError {
    Usage(String),
    Failure(String),
}

pub type CliResult<T> = std::result::Result<T, CliError>;

impl From<mtcdef::Error> for CliError {
    fn from(e: mtcdef::Error) -> Self {
        CliError::Failure(e.to_string())
    }
}

#[derive(Parser)]
#[command(name = "mtcdef", version, about = "Exact modular tensor category and surface defect computations")]
struct Cli {
    /// Worker threads for parallel sections (default: all cores).
    #[arg(long, global = true)]
    parallelism: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a category, verify it and write it as JSON.
    Gen {
        #[arg(long, default_value = "sl2")]
        category: String,
        #[arg(long)]
        level: Option<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        verify: VerifyArgs,
    },
    /// Run axiom checks on a category file.
    Verify {
        file: PathBuf,
        /// Comma-separated subset of pentagon,hexagon,ribbon,modularity.
        #[arg(long, value_delimiter = ',', default_value = "pentagon,hexagon,ribbon,modularity")]
        checks: Vec<Check>,
        #[command(flatten)]
        verify: VerifyArgs,
    },
    /// Solve for or check Frobenius algebras.
    Algebra {
        #[command(subcommand)]
        command: AlgebraCommand,
    },
    /// Evaluate a sliced diagram given as JSON.
    Eval {
        file: PathBuf,
        #[command(flatten)]
        cat: CategoryArgs,
    },
    /// Invariants of surfaces labelled by an algebra.
    Invariant {
        #[command(subcommand)]
        command: InvariantCommand,
    },
    /// Torus invariants for the haploid algebras available at a level.
    Table {
        #[command(flatten)]
        cat: CategoryArgs,
        #[arg(long, value_enum, default_value = "tsv")]
        format: Format,
    },
}

#[derive(Subcommand)]
enum AlgebraCommand {
    /// All gauge-fixed haploid algebra structures on an object such as "0+16".
    Solve {
        #[arg(long)]
        object: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        cat: CategoryArgs,
    },
    /// Re-verify the axioms of stored algebras.
    Check {
        file: PathBuf,
        #[command(flatten)]
        cat: CategoryArgs,
    },
}

#[derive(clap::Args)]
struct AlgebraSource {
    /// Algebra file written by `algebra solve` or a single algebra.
    #[arg(long, conflicts_with = "object")]
    algebra: Option<PathBuf>,
    /// Which solution of a solve file to use.
    #[arg(long, default_value_t = 0)]
    index: usize,
    /// Solve on this object and take the first solution ("0" is the trivial algebra).
    #[arg(long)]
    object: Option<String>,
}

#[derive(Subcommand)]
enum InvariantCommand {
    /// Invariants of the three torus embeddings in T³.
    T3 {
        #[command(flatten)]
        source: AlgebraSource,
        /// Comma-separated subset of iota0+,iota0-,iota1+,iota1-,iota2.
        #[arg(long, value_delimiter = ',')]
        embedding: Option<Vec<String>>,
        #[command(flatten)]
        cat: CategoryArgs,
    },
    /// An embedded sphere in S2xS1 or T3.
    Sphere {
        #[command(flatten)]
        source: AlgebraSource,
        #[arg(long)]
        manifold: String,
        #[command(flatten)]
        cat: CategoryArgs,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Check {
    Pentagon,
    Hexagon,
    Ribbon,
    Modularity,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Tsv,
    Json,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.parallelism {
        if n == 0 {
            eprintln!("error: --parallelism must be at least 1");
            return ExitCode::from(2);
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().expect("thread pool");
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Failure(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(m)) => {
            eprintln!("usage error: {m}");
            ExitCode::from(2)
        }
    }
}

fn run(cmd: Command) -> CliResult<()> {
    match cmd {
        Command::Gen { category, level, output, verify } => cmd_gen(&category, level, output.as_deref(), &verify),
        Command::Verify { file, checks, verify } => cmd_verify(&file, &checks, &verify),
        Command::Algebra { command: AlgebraCommand::Solve { object, output, cat } } => {
            cmd_solve(&object, output.as_deref(), &cat)
        }
        Command::Algebra { command: AlgebraCommand::Check { file, cat } } => cmd_check(&file, &cat),
        Command::Eval { file, cat } => cmd_eval(&file, &cat),
        Command::Invariant { command: InvariantCommand::T3 { source, embedding, cat } } => {
            cmd_t3(&source, embedding.as_deref(), &cat)
        }
        Command::Invariant { command: InvariantCommand::Sphere { source, manifold, cat } } => {
            cmd_sphere(&source, &manifold, &cat)
        }
        Command::Table { cat, format } => cmd_table(&cat, format),
    }
}

fn write_or_print(output: Option<&Path>, v: &Value) -> CliResult<()> {
    match output {
        Some(p) => {
            let text = serde_json::to_string_pretty(v).expect("json") + "\n";
            fs::write(p, text).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", p.display())))
        }
        None => {
            render::print(v);
            Ok(())
        }
    }
}

fn cmd_gen(family: &str, level: Option<usize>, output: Option<&Path>, verify: &VerifyArgs) -> CliResult<()> {
    let c = load::generate(family, level)?;
    let text = load::category_text(&c);
    load::verify_cached(&c, &text, verify.mode())?;
    let v = serde_json::to_value(c.to_json()).expect("category json");
    write_or_print(output, &v)
}

fn cmd_verify(file: &Path, checks: &[Check], verify: &VerifyArgs) -> CliResult<()> {
    let (c, _) = load::read_category(file)?;
    let reports: Vec<Report> = checks
        .iter()
        .map(|ch| match ch {
            Check::Pentagon => verify_pentagon(&c, verify.mode()),
            Check::Hexagon => verify_hexagon(&c),
            Check::Ribbon => verify_ribbon(&c),
            Check::Modularity => verify_modularity(&c),
        })
        .collect();
    let passed = reports.iter().all(|r| r.passed);
    render::print(&json!({
        "category": c.name(),
        "verification": load::mode_json(verify.mode()),
        "passed": passed,
        "reports": reports,
    }));
    match reports.iter().find(|r| !r.passed) {
        Some(r) => Err(CliError::Failure(format!("{} check failed: {}", r.check, load::describe(r)))),
        None => Ok(()),
    }
}

fn parse_object(s: &str) -> CliResult<SSObject> {
    SSObject::parse(s).map_err(|e| CliError::Usage(format!("bad object {s:?}: {e}")))
}

fn check_labels(c: &MtcData, obj: &SSObject) -> CliResult<()> {
    match obj.simples().into_iter().find(|&l| l >= c.rank()) {
        Some(l) => Err(CliError::Usage(format!("label {l} does not exist in {}", c.name()))),
        None => Ok(()),
    }
}

fn cmd_solve(object: &str, output: Option<&Path>, args: &CategoryArgs) -> CliResult<()> {
    let (c, verification) = load::load(args)?;
    let obj = parse_object(object)?;
    check_labels(&c, &obj)?;
    let name = c.name().to_string();
    let cat = Cat::new(c);
    let sols = solve_haploid_algebra(&cat, &obj)?;
    let v = json!({
        "category": name,
        "object": obj.to_string(),
        "verification": verification,
        "solutions": sols.iter().map(|a| serde_json::to_value(a.to_json(&name)).expect("algebra json")).collect::<Vec<_>>(),
    });
    write_or_print(output, &v)
}

fn read_algebras(path: &Path) -> CliResult<Vec<AlgebraJson>> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| CliError::Failure(format!("{}: {e}", path.display())))?;
    let items = match v.get("solutions") {
        Some(Value::Array(a)) => a.clone(),
        _ => vec![v],
    };
    items
        .into_iter()
        .map(|x| serde_json::from_value(x).map_err(|e| CliError::Failure(format!("{}: {e}", path.display()))))
        .collect()
}

fn load_algebra(cat: &Cat, j: &AlgebraJson) -> CliResult<FrobeniusAlgebra> {
    if j.category != cat.name() {
        return Err(CliError::Usage(format!("algebra was built over {} but the category is {}", j.category, cat.name())));
    }
    let (a, rep) = FrobeniusAlgebra::from_json(cat, j)?;
    if !rep.passed() {
        return Err(CliError::Failure(format!("{}: {}", a.name, rep.failures.join("; "))));
    }
    Ok(a)
}

fn cmd_check(file: &Path, args: &CategoryArgs) -> CliResult<()> {
    let (c, _) = load::load(args)?;
    let cat = Cat::new(c);
    let mut out = Vec::new();
    let mut failed = None;
    for j in read_algebras(file)? {
        if j.category != cat.name() {
            return Err(CliError::Usage(format!("algebra was built over {} but the category is {}", j.category, cat.name())));
        }
        let (a, rep) = FrobeniusAlgebra::from_json(&cat, &j)?;
        if !rep.passed() && failed.is_none() {
            failed = Some(format!("{}: {}", a.name, rep.failures.join("; ")));
        }
        out.push(json!({"name": a.name, "passed": rep.passed(), "failures": rep.failures, "flags": rep.flags}));
    }
    render::print(&json!({"category": cat.name(), "algebras": out}));
    match failed {
        Some(m) => Err(CliError::Failure(m)),
        None => Ok(()),
    }
}

fn cmd_eval(file: &Path, args: &CategoryArgs) -> CliResult<()> {
    let text = fs::read_to_string(file).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", file.display())))?;
    let d: SlicedDiagram =
        serde_json::from_str(&text).map_err(|e| CliError::Failure(format!("{}: {e}", file.display())))?;
    let (c, _) = load::load(args)?;
    let cat = Cat::new(c);
    let m = evaluate(&cat, &d)?;
    let v = if d.input.is_empty() && d.output.is_empty() {
        json!({"category": cat.name(), "scalar": render::scalar(&m.as_scalar().expect("closed diagram"))})
    } else {
        json!({"category": cat.name(), "morphism": render::morphism(&m)})
    };
    render::print(&v);
    Ok(())
}

fn resolve_algebra(cat: &Cat, src: &AlgebraSource) -> CliResult<Arc<FrobeniusAlgebra>> {
    match (&src.algebra, &src.object) {
        (Some(p), None) => {
            let js = read_algebras(p)?;
            let j = js
                .get(src.index)
                .ok_or_else(|| CliError::Usage(format!("{} has {} algebras, no index {}", p.display(), js.len(), src.index)))?;
            Ok(Arc::new(load_algebra(cat, j)?))
        }
        (None, Some(o)) => {
            let obj = parse_object(o)?;
            check_labels(cat, &obj)?;
            if obj == SSObject::simple(0) {
                return Ok(Arc::new(trivial_algebra(cat)));
            }
            let mut sols = solve_haploid_algebra(cat, &obj)?;
            if sols.is_empty() {
                return Err(CliError::Failure(format!("no haploid algebra structure on {obj}")));
            }
            Ok(Arc::new(sols.remove(0)))
        }
        _ => Err(CliError::Usage("give exactly one of --algebra or --object".into())),
    }
}

fn center_json(c: &CenterData) -> Value {
    let mults: serde_json::Map<String, Value> =
        c.multiplicities.iter().filter(|(_, &m)| m > 0).map(|(l, m)| (l.to_string(), json!(m))).collect();
    json!({"object": c.object().to_string(), "multiplicities": mults, "qdim": render::scalar(&c.qdim)})
}

const EMBEDDINGS: [&str; 5] = ["iota0+", "iota0-", "iota1+", "iota1-", "iota2"];

fn t3_json(cat: &Cat, a: &Arc<FrobeniusAlgebra>) -> CliResult<Value> {
    let t = t3_invariants(cat, a)?;
    let z = full_center_matrix(cat, a)?;
    let left = center_projector(cat, a, Side::Left)?;
    let right = center_projector(cat, a, Side::Right)?;
    Ok(json!({
        "algebra": a.name,
        "object": a.obj.iter().map(|o| o.to_string()).collect::<Vec<_>>().join("⊗"),
        "dim": render::scalar(&a.dim(cat)),
        "iota0+": render::scalar(&t.iota0_plus),
        "iota0-": render::scalar(&t.iota0_minus),
        "iota1+": t.iota1_plus,
        "iota1-": t.iota1_minus,
        "iota2": t.iota2,
        "center": {"left": center_json(&left), "right": center_json(&right)},
        "convention": {
            "chosen": z.convention.to_string(),
            "passing": z.passing.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        },
        "z": z.z,
    }))
}

fn cmd_t3(src: &AlgebraSource, embedding: Option<&[String]>, args: &CategoryArgs) -> CliResult<()> {
    if let Some(list) = embedding {
        if let Some(bad) = list.iter().find(|e| !EMBEDDINGS.contains(&e.as_str())) {
            return Err(CliError::Usage(format!("unknown embedding {bad:?}; known: {}", EMBEDDINGS.join(","))));
        }
    }
    let (c, verification) = load::load(args)?;
    let cat = Cat::new(c);
    let a = resolve_algebra(&cat, src)?;
    let mut v = t3_json(&cat, &a)?;
    if let Some(list) = embedding {
        for e in EMBEDDINGS {
            if !list.iter().any(|x| x == e) {
                v.as_object_mut().expect("object").remove(e);
            }
        }
    }
    v["category"] = json!(cat.name());
    v["verification"] = verification;
    render::print(&v);
    Ok(())
}

fn cmd_sphere(src: &AlgebraSource, manifold: &str, args: &CategoryArgs) -> CliResult<()> {
    let m: Manifold = manifold.parse().map_err(|e: mtcdef::Error| CliError::Usage(e.to_string()))?;
    let (c, verification) = load::load(args)?;
    let cat = Cat::new(c);
    let a = resolve_algebra(&cat, src)?;
    render::print(&json!({
        "category": cat.name(),
        "algebra": a.name,
        "manifold": m.to_string(),
        "value": render::scalar(&sphere_embedding_invariant(&cat, &a, m)),
        "verification": verification,
    }));
    Ok(())
}

/// Haploid algebras with a known Dynkin label at level k.
fn table_columns(k: usize) -> Vec<(String, Option<&'static str>)> {
    let mut cols = vec![(format!("A{}", k + 1), None)];
    if k.is_multiple_of(4) {
        cols.push((format!("D{}", k / 2 + 2), Some("d")));
    }
    if k == 10 {
        cols.push(("E6".into(), Some("0+6")));
    }
    if k == 16 {
        cols.push(("E7".into(), Some("0+8+16")));
    }
    cols
}

fn table_cell(cat: &Cat, k: usize, obj: Option<&str>) -> CliResult<Value> {
    let a = match obj {
        None => Arc::new(trivial_algebra(cat)),
        Some(s) => {
            let s = if s == "d" { format!("0+{k}") } else { s.to_string() };
            let mut sols = solve_haploid_algebra(cat, &parse_object(&s)?)?;
            if sols.is_empty() {
                return Err(CliError::Failure(format!("the solver found no algebra structure on {s}")));
            }
            let a = sols.remove(0);
            let rep = check_algebra(cat, &a)?;
            if !rep.passed() {
                return Err(CliError::Failure(format!("{}: {}", a.name, rep.failures.join("; "))));
            }
            Arc::new(a)
        }
    };
    t3_json(cat, &a)
}

fn cell_text(v: &Value, key: &str) -> String {
    match &v[key] {
        Value::Number(n) => n.to_string(),
        Value::Object(o) => match o.get("float").and_then(|f| f[0].as_f64()) {
            Some(re) => format!("{re:.6}"),
            None => v[key].to_string(),
        },
        other => other.to_string(),
    }
}

fn cmd_table(args: &CategoryArgs, format: Format) -> CliResult<()> {
    let (c, verification) = load::load(args)?;
    let k = c.rank() - 1;
    let cat = Cat::new(c);
    let cols = table_columns(k);
    let cells: Vec<CliResult<Value>> = cols.par_iter().map(|(_, o)| table_cell(&cat, k, *o)).collect();
    let mut failure = None;
    let mut entries = Vec::new();
    for ((name, _), cell) in cols.iter().zip(cells) {
        match cell {
            Ok(v) => entries.push((name.clone(), Ok(v))),
            Err(CliError::Failure(m)) | Err(CliError::Usage(m)) => {
                failure.get_or_insert_with(|| format!("{name}: {m}"));
                entries.push((name.clone(), Err(m)));
            }
        }
    }
    match format {
        Format::Json => {
            let columns: Vec<Value> = entries
                .iter()
                .map(|(n, e)| match e {
                    Ok(v) => json!({"name": n, "result": v}),
                    Err(m) => json!({"name": n, "error": m}),
                })
                .collect();
            render::print(&json!({"category": cat.name(), "verification": verification, "columns": columns}));
        }
        Format::Tsv => {
            let mut header = vec![String::new()];
            header.extend(entries.iter().map(|(n, _)| n.clone()));
            println!("{}", header.join("\t"));
            for (label, plus, minus) in
                [("iota0±", "iota0+", "iota0-"), ("iota1±", "iota1+", "iota1-"), ("iota2", "iota2", "iota2")]
            {
                let mut row = vec![label.to_string()];
                for (_, e) in &entries {
                    row.push(match e {
                        Ok(v) => {
                            let (p, m) = (cell_text(v, plus), cell_text(v, minus));
                            if p == m {
                                p
                            } else {
                                format!("{p}/{m}")
                            }
                        }
                        Err(_) => "error".into(),
                    });
                }
                println!("{}", row.join("\t"));
            }
            for (n, e) in &entries {
                if let Err(m) = e {
                    eprintln!("{n}: {m}");
                }
            }
        }
    }
    match failure {
        Some(m) => Err(CliError::Failure(m)),
        None => Ok(()),
    }
}
