use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use hbp_core::brpic::{brpic_table, brpic_table_with, BrPicError};
use hbp_core::cocycles::{check_cocycle, coboundary_witness, Cocycle};
use hbp_core::comodalg::{check_freeness, classify, cotensor, is_graded_simple, AlgebraError, CotensorConvention, Reduction, Unreduced};
use hbp_core::duality::{orth_compose, orth_group, OrthogonalMap};
use hbp_core::fusion::fuse;
use hbp_core::groups::{FiniteGroup, GroupError, Subgroup};
use hbp_core::io::{self, Cache, CacheStatus, GroupSpec, IoError};

#[derive(Parser)]
#[command(name = "hbp", version, about = "Brauer-Picard groups and bimodule categories over Rep(G)")]
struct Cli {
    /// Directory for cached enumerations.
    #[arg(long, env = "HBP_CACHE_DIR", global = true)]
    cache_dir: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json", global = true)]
    format: Format,
    /// Recompute cache hits and fail unless they match byte for byte.
    #[arg(long, global = true)]
    verify_cache: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Cmd {
    /// Group queries.
    #[command(subcommand)]
    Group(GroupCmd),
    /// Orthogonal automorphisms of G ⊕ Ĝ.
    #[command(subcommand)]
    Orth(OrthCmd),
    /// Brauer-Picard product tables.
    #[command(subcommand)]
    Brpic(BrpicCmd),
    /// Decompose M(F1, psi1) ⊠ M(F2, psi2) into double-coset summands.
    Fuse(FuseArgs),
    /// Cotensor product of two graded algebras, classified.
    Cotensor(CotensorArgs),
    /// Cocycle checks.
    #[command(subcommand)]
    Cocycle(CocycleCmd),
}

#[derive(Args)]
struct GroupArg {
    /// Group spec as inline JSON or a path to a JSON file.
    #[arg(long)]
    group: String,
}

#[derive(Subcommand)]
enum GroupCmd {
    Info(GroupArg),
}

#[derive(Subcommand)]
enum OrthCmd {
    Enum(GroupArg),
}

#[derive(Subcommand)]
enum BrpicCmd {
    Table {
        #[command(flatten)]
        group: GroupArg,
        /// Use this convention instead of resolving one.
        #[arg(long)]
        convention: Option<String>,
        /// Where to write the diagnostic on a group-law failure.
        #[arg(long)]
        diagnostic: Option<PathBuf>,
    },
}

#[derive(Args)]
struct FuseArgs {
    #[command(flatten)]
    group: GroupArg,
    /// Generators of F1, comma separated element indices.
    #[arg(long, value_delimiter = ',')]
    f1: Vec<usize>,
    /// Cocycle on F1; trivial when omitted.
    #[arg(long)]
    psi1: Option<String>,
    #[arg(long, value_delimiter = ',')]
    f2: Vec<usize>,
    #[arg(long)]
    psi2: Option<String>,
}

#[derive(Args)]
struct CotensorArgs {
    /// Left algebra (JSON or file).
    #[arg(long)]
    s: String,
    /// Right algebra (JSON or file).
    #[arg(long)]
    k: String,
    #[arg(long)]
    convention: Option<String>,
}

#[derive(Subcommand)]
enum CocycleCmd {
    Check(CocycleArgs),
    Cobound(CocycleArgs),
}

#[derive(Args)]
struct CocycleArgs {
    /// Cocycle JSON or file.
    file: String,
    /// Group the domain refers to, when the file does not name one.
    #[arg(long)]
    group: Option<String>,
}

struct Failure {
    code: u8,
    msg: String,
}

impl Failure {
    fn input(msg: impl ToString) -> Self {
        Failure {
            code: 1,
            msg: msg.to_string(),
        }
    }

    fn verify(msg: impl ToString) -> Self {
        Failure {
            code: 2,
            msg: msg.to_string(),
        }
    }
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        match e {
            IoError::CacheMismatch { .. } => Failure::verify(e),
            _ => Failure::input(e),
        }
    }
}

impl From<GroupError> for Failure {
    fn from(e: GroupError) -> Self {
        Failure::input(e)
    }
}

impl From<AlgebraError> for Failure {
    fn from(e: AlgebraError) -> Self {
        match e {
            AlgebraError::ReductionStuck(_) => Failure::verify(e),
            _ => Failure::input(e),
        }
    }
}

type Out = Result<String, Failure>;

/// Inline JSON when the argument looks like an object, otherwise a path.
fn read_arg(arg: &str) -> Result<String, Failure> {
    if arg.trim_start().starts_with('{') {
        Ok(arg.to_string())
    } else {
        fs::read_to_string(arg).map_err(|e| Failure::input(format!("{arg}: {e}")))
    }
}

fn load_group(arg: &GroupArg) -> Result<(GroupSpec, Arc<FiniteGroup>), Failure> {
    Ok(io::parse_group(&read_arg(&arg.group)?)?)
}

fn pretty(v: &impl serde::Serialize) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

struct Ctx {
    cache: Option<Cache>,
    format: Format,
    verify: bool,
}

impl Ctx {
    fn cached(
        &self,
        op: &str,
        spec: &GroupSpec,
        params: Value,
        compute: impl FnOnce() -> Result<Value, Failure>,
    ) -> Result<Value, Failure> {
        match &self.cache {
            None => compute(),
            Some(cache) => {
                let key = io::cache_key(op, spec, &params);
                let (v, status) = cache.get_or_compute(&key, self.verify, compute)?;
                if status == CacheStatus::Verified {
                    eprintln!("cache entry {key} verified");
                }
                Ok(v)
            }
        }
    }
}

fn cmd_group_info(ctx: &Ctx, arg: &GroupArg) -> Out {
    let (_, g) = load_group(arg)?;
    let info = io::group_info(&g);
    Ok(match ctx.format {
        Format::Json => pretty(&info),
        Format::Text => {
            let mut s = format!("order: {}\nabelian: {}\n", info.order, yes(info.abelian));
            if let Some(inv) = &info.invariants {
                writeln!(s, "invariants: {inv:?}").unwrap();
            }
            writeln!(s, "exponent: {}", info.exponent).unwrap();
            s
        }
    })
}

/// The enumeration must contain the identity first, consist of distinct
/// orthogonal maps and be closed under composition.
fn verify_orth(maps: &[OrthogonalMap]) -> Result<(), Failure> {
    if !maps.first().is_some_and(OrthogonalMap::is_identity) {
        return Err(Failure::verify("identity is not the first orthogonal map"));
    }
    let images: std::collections::HashSet<&[usize]> = maps.iter().map(|m| m.image()).collect();
    if images.len() != maps.len() {
        return Err(Failure::verify("orthogonal maps repeat"));
    }
    for a in maps {
        for b in maps {
            if !images.contains(orth_compose(a, b).image()) {
                return Err(Failure::verify("orthogonal maps are not closed under composition"));
            }
        }
    }
    Ok(())
}

fn cmd_orth_enum(ctx: &Ctx, arg: &GroupArg) -> Out {
    let (spec, _) = load_group(arg)?;
    let v = ctx.cached("orth_enum", &spec, Value::Null, || {
        let pair = io::pair_for(&spec)?;
        let maps = orth_group(&pair)?;
        verify_orth(&maps)?;
        Ok(serde_json::to_value(io::orth_list_to_wire(&maps, &spec)).expect("serializable"))
    })?;
    Ok(match ctx.format {
        Format::Json => pretty(&v),
        Format::Text => {
            let maps = v["maps"].as_array().cloned().unwrap_or_default();
            let mut s = format!("count: {}\n", maps.len());
            for (i, m) in maps.iter().enumerate() {
                writeln!(s, "{i}: {m}").unwrap();
            }
            s
        }
    })
}

fn cmd_brpic_table(ctx: &Ctx, arg: &GroupArg, convention: Option<&str>, diagnostic: Option<&PathBuf>) -> Out {
    let (spec, _) = load_group(arg)?;
    let conv = convention.map(read_arg).transpose()?.map(|t| io::parse_convention(&t)).transpose()?;
    let params = conv.map_or(Value::Null, |c| serde_json::to_value(c).expect("serializable"));
    let v = ctx.cached("brpic_table", &spec, params, || {
        let pair = io::pair_for(&spec)?;
        let res = match conv {
            Some(c) => brpic_table_with(&pair, c),
            None => brpic_table(&pair),
        };
        match res {
            Ok(t) => Ok(serde_json::to_value(io::table_to_wire(&t, &spec)).expect("serializable")),
            Err(BrPicError::GroupLawFailure(f)) => {
                let doc = json!({
                    "schema_version": io::SCHEMA_VERSION,
                    "group": spec,
                    "convention": f.convention,
                    "pair": [f.pair.0, f.pair.1],
                    "reason": f.reason,
                    "algebra": f.algebra.as_ref().map(|a| io::algebra_to_wire(a, &spec, true)),
                });
                let path = diagnostic
                    .cloned()
                    .unwrap_or_else(|| std::env::temp_dir().join(format!("hbp-brpic-failure-{}.json", std::process::id())));
                fs::write(&path, pretty(&doc)).map_err(|e| Failure::verify(format!("{}: {e}", path.display())))?;
                Err(Failure::verify(format!(
                    "group law fails for pair {:?}: {}; diagnostic written to {}",
                    f.pair,
                    f.reason,
                    path.display()
                )))
            }
            Err(BrPicError::Group(e)) => Err(e.into()),
            Err(e @ (BrPicError::Cocycle(_) | BrPicError::Algebra(_))) => Err(Failure::input(e)),
            Err(e) => Err(Failure::verify(e)),
        }
    })?;
    Ok(match ctx.format {
        Format::Json => pretty(&v),
        Format::Text => {
            let mut s = format!(
                "convention: {}\norder_flag: {}\n",
                v["convention"], v["order_flag"].as_str().unwrap_or("?")
            );
            let free = v["free"].as_array().is_some_and(|r| r.iter().flat_map(|x| x.as_array().cloned().unwrap_or_default()).all(|b| b == true));
            writeln!(s, "free: {}", yes(free)).unwrap();
            for row in v["product"].as_array().cloned().unwrap_or_default() {
                let cells: Vec<String> = row.as_array().cloned().unwrap_or_default().iter().map(Value::to_string).collect();
                writeln!(s, "{}", cells.join(" ")).unwrap();
            }
            s
        }
    })
}

fn load_psi(g: &Arc<FiniteGroup>, gens: &[usize], file: Option<&str>) -> Result<Cocycle, Failure> {
    let f = Subgroup::generated(g.clone(), gens)?;
    let psi = match file {
        None => Cocycle::zero(f.clone(), 1),
        Some(p) => io::parse_cocycle(&read_arg(p)?, Some(g))?,
    };
    if psi.domain() != &f {
        return Err(Failure::input("cocycle domain differs from the subgroup generated by the given generators"));
    }
    if !check_cocycle(&psi) {
        return Err(Failure::input("input is not a 2-cocycle"));
    }
    Ok(psi)
}

fn cmd_fuse(ctx: &Ctx, a: &FuseArgs) -> Out {
    let (spec, g) = load_group(&a.group)?;
    let psi1 = load_psi(&g, &a.f1, a.psi1.as_deref())?;
    let psi2 = load_psi(&g, &a.f2, a.psi2.as_deref())?;
    let out = fuse(&psi1, &psi2).map_err(|e| Failure::input(e))?;
    Ok(match ctx.format {
        Format::Json => pretty(&io::fusion_to_wire(&out, &spec)),
        Format::Text => {
            let mut s = format!("summands: {}\n", out.len());
            for x in &out {
                writeln!(
                    s,
                    "s={} F_s={:?} trivial={}",
                    x.rep,
                    x.fs.members(),
                    yes(coboundary_witness(&x.psi_s).is_some())
                )
                .unwrap();
            }
            s
        }
    })
}

fn cmd_cotensor(ctx: &Ctx, a: &CotensorArgs) -> Out {
    let (gs, sq_s, s) = io::parse_algebra(&read_arg(&a.s)?)?;
    let (gk, sq_k, k) = io::parse_algebra(&read_arg(&a.k)?)?;
    if gs != gk || !sq_s || !sq_k {
        return Err(Failure::input("both algebras must be graded by the same G x G"));
    }
    let conv = match &a.convention {
        Some(c) => io::parse_convention(&read_arg(c)?)?.cotensor,
        None => CotensorConvention::PIPELINE,
    };
    let c = cotensor(&s, &k, &conv)?;
    let free = check_freeness(&s, &k, &c);
    let (class, blocks) = match classify(&c)? {
        Reduction::Class(cl) => (Some(io::class_to_wire(&cl, &gs)), 1),
        Reduction::Unreduced(Unreduced::Decomposable { blocks }) => (None, blocks),
    };
    let doc = json!({
        "schema_version": io::SCHEMA_VERSION,
        "dim": c.dim(),
        "free": free,
        "graded_simple": is_graded_simple(&c),
        "blocks": blocks,
        "class": class,
        "algebra": io::algebra_to_wire(&c, &gs, true),
    });
    Ok(match ctx.format {
        Format::Json => pretty(&doc),
        Format::Text => format!(
            "dim: {}\nfree: {}\ngraded_simple: {}\nblocks: {}\n",
            c.dim(),
            yes(free),
            yes(doc["graded_simple"] == true),
            blocks
        ),
    })
}

fn cmd_cocycle(ctx: &Ctx, a: &CocycleArgs, cobound: bool) -> Out {
    let group = a.group.as_deref().map(read_arg).transpose()?.map(|t| io::parse_group(&t)).transpose()?;
    let psi = io::parse_cocycle(&read_arg(&a.file)?, group.as_ref().map(|(_, g)| g))?;
    let ok = check_cocycle(&psi);
    let witness = if cobound && ok { coboundary_witness(&psi) } else { None };
    Ok(match ctx.format {
        Format::Json => {
            let mut doc = json!({ "cocycle": ok });
            if cobound && ok {
                doc["witness"] = json!(witness);
            }
            pretty(&doc)
        }
        Format::Text => {
            let mut s = format!("cocycle: {}\n", yes(ok));
            if cobound && ok {
                match &witness {
                    Some(w) => writeln!(s, "witness: {w:?}").unwrap(),
                    None => writeln!(s, "witness: none").unwrap(),
                }
            }
            s
        }
    })
}

fn run(cli: Cli) -> Out {
    let cache = cli.cache_dir.as_ref().map(Cache::open).transpose()?;
    let ctx = Ctx {
        cache,
        format: cli.format,
        verify: cli.verify_cache,
    };
    match &cli.cmd {
        Cmd::Group(GroupCmd::Info(g)) => cmd_group_info(&ctx, g),
        Cmd::Orth(OrthCmd::Enum(g)) => cmd_orth_enum(&ctx, g),
        Cmd::Brpic(BrpicCmd::Table {
            group,
            convention,
            diagnostic,
        }) => cmd_brpic_table(&ctx, group, convention.as_deref(), diagnostic.as_ref()),
        Cmd::Fuse(a) => cmd_fuse(&ctx, a),
        Cmd::Cotensor(a) => cmd_cotensor(&ctx, a),
        Cmd::Cocycle(CocycleCmd::Check(a)) => cmd_cocycle(&ctx, a, false),
        Cmd::Cocycle(CocycleCmd::Cobound(a)) => cmd_cocycle(&ctx, a, true),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            if !out.ends_with('\n') {
                println!();
            }
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
