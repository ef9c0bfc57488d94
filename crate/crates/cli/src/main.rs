mod cache;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use qtchar_core::acceptance::run_all;
use qtchar_core::freeze::{freeze, DiagramInclusion};
use qtchar_core::kl::{chi_q, chi_qt, e_t};
use qtchar_core::text::{
    parse_monomial, parse_signed_monomial, pointed_from_json, pointed_json, pointed_text, twisted_from_json,
    twisted_json, twisted_text,
};
use qtchar_core::tfm::{f_classical, f_t};
use qtchar_core::twisted::{chi_q_twisted, is_sigma_invariant, unfold_expand, FoldingDatum, TwistedPointed};
use qtchar_core::{Engine, Family, LieType, Monomial, Node, PointedElement, DEFAULT_CAP};

use cache::{Cache, CacheKey, ObjectKind};

#[derive(Parser)]
#[command(name = "qtchar", version, about = "Exact q- and (q,t)-characters of simple modules over quantum loop algebras")]
struct Cli {
    /// Upper bound on the size of any monomial closure.
    #[arg(long, global = true, default_value_t = DEFAULT_CAP as u64, value_parser = clap::value_parser!(u64).range(1..))]
    cap: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads (defaults to the number of CPUs).
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    threads: Option<u64>,
    /// Directory of the result cache; caching is off when unset.
    #[arg(long, global = true, env = "QCHAR_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    /// Report cache activity and timings on stderr.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    #[value(name = "A", alias = "a")]
    A,
    #[value(name = "B", alias = "b")]
    B,
    #[value(name = "C", alias = "c")]
    C,
    #[value(name = "D", alias = "d")]
    D,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::A => Family::A,
            FamilyArg::B => Family::B,
            FamilyArg::C => Family::C,
            FamilyArg::D => Family::D,
        }
    }
}

#[derive(Args)]
struct TypeArgs {
    #[arg(long = "type", value_enum)]
    family: FamilyArg,
    #[arg(long)]
    rank: usize,
}

impl TypeArgs {
    fn lie_type(&self) -> Result<LieType> {
        Ok(LieType::new(self.family.into(), self.rank)?)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ObjectArg {
    Chiq,
    Chiqt,
    Ft,
    Et,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Labeling {
    /// Signed labels `-l..=l` for type A, `1..=n` for type D.
    Signed,
    /// Labels `1..=n`.
    Standard,
}

#[derive(Subcommand)]
enum Command {
    /// Print gamma_ij(u) and c'_ij(u), one per line.
    Gamma {
        #[command(flatten)]
        ty: TypeArgs,
        #[arg(long)]
        i: Node,
        #[arg(long)]
        j: Node,
        #[arg(long, allow_hyphen_values = true)]
        u: i32,
    },
    /// The t-deformed Frenkel-Mukhin output F_t(m).
    ChiFt {
        #[command(flatten)]
        ty: TypeArgs,
        #[arg(long)]
        monomial: String,
        /// Run the classical algorithm instead (coefficients at t = 1).
        #[arg(long)]
        t1: bool,
    },
    /// The (q,t)-character of the simple module L(m).
    ChiQt {
        #[command(flatten)]
        ty: TypeArgs,
        #[arg(long)]
        monomial: String,
    },
    /// The q-character of the simple module L(m).
    ChiQ {
        #[command(flatten)]
        ty: TypeArgs,
        #[arg(long)]
        monomial: String,
    },
    /// Dimension of L(m).
    Dim {
        #[command(flatten)]
        ty: TypeArgs,
        #[arg(long)]
        monomial: String,
    },
    /// Compute an object in the larger rank and freeze it to the smaller one.
    Freeze {
        #[arg(long, value_enum)]
        from_type: FamilyArg,
        #[arg(long)]
        from_rank: usize,
        #[arg(long)]
        to_rank: usize,
        #[arg(long)]
        monomial: String,
        #[arg(long, value_enum)]
        object: ObjectArg,
        /// Also compute the object of the restricted monomial directly and compare.
        #[arg(long)]
        verify: bool,
    },
    /// Twisted q-character of the simple module attached to m, via folding.
    Fold {
        #[command(flatten)]
        ty: TypeArgs,
        #[arg(long)]
        monomial: String,
        #[arg(long, value_enum, default_value_t = Labeling::Signed)]
        labeling: Labeling,
        /// Also print the expansion in unfolded variables.
        #[arg(long)]
        unfold: bool,
        /// Check that the unfolded expansion is fixed by sigma.
        #[arg(long)]
        verify_sigma: bool,
    },
    /// Run the acceptance suite.
    Selftest {
        /// Only criteria whose id or name contains this string.
        #[arg(long)]
        filter: Option<String>,
    },
}

/// A check requested on the command line did not hold.
#[derive(Debug)]
struct VerificationFailed(String);

impl std::fmt::Display for VerificationFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for VerificationFailed {}

struct RunConfig {
    cap: usize,
    format: Format,
    cache: Option<Cache>,
    verbose: u8,
}

impl RunConfig {
    fn engine(&self, ty: LieType) -> Result<Engine> {
        Ok(Engine::new(ty)?.with_cap(self.cap))
    }

    fn note(&self, msg: &str) {
        if self.verbose > 0 {
            eprintln!("{msg}");
        }
    }

    fn cached(&self, key: CacheKey, compute: impl FnOnce() -> Result<Value>) -> Result<Value> {
        match &self.cache {
            None => compute(),
            Some(c) => {
                let start = Instant::now();
                let mut computed = false;
                let v = c.get_or_compute(&key, |w| eprintln!("warning: {w}"), || {
                    computed = true;
                    compute()
                })?;
                self.note(&format!(
                    "cache {} {} ({:.2?})",
                    if computed { "miss" } else { "hit" },
                    key.digest(),
                    start.elapsed()
                ));
                Ok(v)
            }
        }
    }

    /// A pointed element of the given kind, through the cache.
    fn pointed(&self, engine: &Engine, kind: ObjectKind, m: &Monomial) -> Result<PointedElement> {
        let ty = engine.lie_type();
        let key = CacheKey::new(ty.family.letter(), ty.rank, kind, m.to_string());
        let v = self.cached(key, || {
            let (x, t1) = match kind {
                ObjectKind::ChiQt => (chi_qt(engine, m)?, false),
                ObjectKind::Ft => (f_t(engine, m)?, false),
                ObjectKind::Et => (e_t(engine, m)?, false),
                ObjectKind::ChiQ => (PointedElement::new(engine.cartan(), m.clone(), chi_q(engine, m)?)?, true),
                ObjectKind::Twisted => unreachable!("twisted objects are not pointed elements"),
            };
            Ok(pointed_json(engine.cartan(), &x, t1))
        })?;
        Ok(pointed_from_json(engine.cartan(), &v)?)
    }

    fn twisted(&self, fd: &FoldingDatum, engine: &Engine, m: &Monomial) -> Result<TwistedPointed> {
        let ty = fd.lie_type();
        let key = CacheKey::new(ty.family.letter(), ty.rank, ObjectKind::Twisted, m.to_string());
        let v = self.cached(key, || Ok(twisted_json(fd, &chi_q_twisted(fd, engine, m)?, false)))?;
        Ok(twisted_from_json(fd, &v, false)?)
    }

    fn emit_pointed(&self, engine: &Engine, x: &PointedElement, t1: bool, extra: &[(&str, Value)]) -> String {
        match self.format {
            Format::Json => {
                let mut v = pointed_json(engine.cartan(), x, t1);
                for (k, e) in extra {
                    v[*k] = e.clone();
                }
                pretty(&v)
            }
            Format::Text => {
                let mut s = pointed_text(engine.cartan(), x, t1);
                for (k, e) in extra {
                    s.push_str(&format!("{k}: {e}\n"));
                }
                s
            }
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn kind_of(o: ObjectArg) -> ObjectKind {
    match o {
        ObjectArg::Chiq => ObjectKind::ChiQ,
        ObjectArg::Chiqt => ObjectKind::ChiQt,
        ObjectArg::Ft => ObjectKind::Ft,
        ObjectArg::Et => ObjectKind::Et,
    }
}

fn run(cli: Cli) -> Result<String> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n as usize).build_global()?;
    }
    let cfg = RunConfig {
        cap: cli.cap as usize,
        format: cli.format,
        cache: cli.cache_dir.as_deref().map(Cache::open).transpose()?,
        verbose: cli.verbose,
    };
    match cli.cmd {
        Command::Gamma { ty, i, j, u } => {
            let e = cfg.engine(ty.lie_type()?)?;
            e.cartan().check_node(i)?;
            e.cartan().check_node(j)?;
            let (g, c) = (e.gamma().gamma_ij(i, j, u), e.gamma().cprime_coeff(i, j, u));
            Ok(match cfg.format {
                Format::Json => pretty(&json!({ "gamma": g, "cprime": c })),
                Format::Text => format!("{g}\n{c}\n"),
            })
        }
        Command::ChiFt { ty, monomial, t1 } => {
            let e = cfg.engine(ty.lie_type()?)?;
            let m = parse_monomial(&monomial, e.lie_type())?;
            let x = if t1 {
                PointedElement::new(e.cartan(), m.clone(), f_classical(&e, &m)?)?
            } else {
                cfg.pointed(&e, ObjectKind::Ft, &m)?
            };
            Ok(cfg.emit_pointed(&e, &x, t1, &[]))
        }
        Command::ChiQt { ty, monomial } => {
            let e = cfg.engine(ty.lie_type()?)?;
            let m = parse_monomial(&monomial, e.lie_type())?;
            let x = cfg.pointed(&e, ObjectKind::ChiQt, &m)?;
            Ok(cfg.emit_pointed(&e, &x, false, &[]))
        }
        Command::ChiQ { ty, monomial } => {
            let e = cfg.engine(ty.lie_type()?)?;
            let m = parse_monomial(&monomial, e.lie_type())?;
            let x = cfg.pointed(&e, ObjectKind::ChiQ, &m)?;
            Ok(cfg.emit_pointed(&e, &x, true, &[]))
        }
        Command::Dim { ty, monomial } => {
            let e = cfg.engine(ty.lie_type()?)?;
            let m = parse_monomial(&monomial, e.lie_type())?;
            let d = cfg.pointed(&e, ObjectKind::ChiQ, &m)?.body().coefficient_sum();
            Ok(match cfg.format {
                Format::Json => pretty(&json!({ "top": m.to_string(), "dim": d })),
                Format::Text => format!("{d}\n"),
            })
        }
        Command::Freeze { from_type, from_rank, to_rank, monomial, object, verify } => {
            let big_ty = LieType::new(from_type.into(), from_rank)?;
            let small_ty = LieType::new(from_type.into(), to_rank)?;
            let inc = DiagramInclusion::standard(small_ty, big_ty)?;
            let big = cfg.engine(big_ty)?;
            let small = cfg.engine(small_ty)?;
            let m = parse_monomial(&monomial, big_ty)?;
            let kind = kind_of(object);
            let r = inc.res_monomial(&m);
            let (frozen, direct) = rayon::join(
                || -> Result<PointedElement> { Ok(freeze(&inc, &cfg.pointed(&big, kind, &m)?)?) },
                || if verify { Some(cfg.pointed(&small, kind, &r)) } else { None },
            );
            let frozen = frozen?;
            let t1 = object == ObjectArg::Chiq;
            match direct {
                None => Ok(cfg.emit_pointed(&small, &frozen, t1, &[])),
                Some(direct) => {
                    let equal = direct? == frozen;
                    let out = cfg.emit_pointed(&small, &frozen, t1, &[("verified", json!(equal))]);
                    if equal {
                        Ok(out)
                    } else {
                        print!("{out}");
                        Err(VerificationFailed(format!("frozen object differs from the direct computation at {r}")).into())
                    }
                }
            }
        }
        Command::Fold { ty, monomial, labeling, unfold, verify_sigma } => {
            let fd = FoldingDatum::new(ty.lie_type()?)?;
            let e = cfg.engine(fd.lie_type())?;
            let signed = labeling == Labeling::Signed;
            let m = if signed { parse_signed_monomial(&monomial, &fd, "Y")? } else { parse_monomial(&monomial, fd.lie_type())? };
            let x = cfg.twisted(&fd, &e, &m)?;
            let unfolded = unfold_expand(&fd, x.body());
            let invariant = is_sigma_invariant(&fd, &unfolded);
            let label = |i: Node| if signed { fd.label(i) } else { i as i64 };
            let unfolded_terms: Vec<(String, i64)> = unfolded
                .iter()
                .map(|(u, c)| {
                    let s: String = u
                        .factors()
                        .iter()
                        .map(|&(v, e)| {
                            let exp = if e == 1 { String::new() } else { format!("^{e}") };
                            format!("Y[{},{},{}]{exp}", label(v.node), v.p, v.eps)
                        })
                        .collect();
                    (if s.is_empty() { "1".into() } else { s }, *c)
                })
                .collect();
            let out = match cfg.format {
                Format::Json => {
                    let mut v = twisted_json(&fd, &x, signed);
                    if unfold {
                        v["unfolded"] = unfolded_terms.iter().map(|(u, c)| json!({ "m": u, "c": c })).collect();
                    }
                    if verify_sigma {
                        v["sigma_invariant"] = json!(invariant);
                    }
                    pretty(&v)
                }
                Format::Text => {
                    let mut s = twisted_text(&fd, &x, signed);
                    if unfold {
                        s.push_str("unfolded:\n");
                        for (u, c) in &unfolded_terms {
                            s.push_str(&format!("{u}  {c}\n"));
                        }
                    }
                    if verify_sigma {
                        s.push_str(&format!("sigma-invariant: {invariant}\n"));
                    }
                    s
                }
            };
            if verify_sigma && !invariant {
                print!("{out}");
                return Err(VerificationFailed("unfolded character is not sigma-invariant".into()).into());
            }
            Ok(out)
        }
        Command::Selftest { filter } => {
            let reports = run_all(filter.as_deref());
            if reports.is_empty() {
                return Err(anyhow!("no criterion matches the filter"));
            }
            let out = match cfg.format {
                Format::Json => pretty(&Value::Array(
                    reports
                        .iter()
                        .map(|r| {
                            json!({
                                "id": r.id,
                                "name": r.name,
                                "passed": r.passed,
                                "detail": r.detail,
                                "seconds": r.elapsed.as_secs_f64(),
                            })
                        })
                        .collect(),
                )),
                Format::Text => reports.iter().map(|r| format!("{r}\n")).collect(),
            };
            let failed: Vec<u8> = reports.iter().filter(|r| !r.passed).map(|r| r.id).collect();
            if failed.is_empty() {
                Ok(out)
            } else {
                print!("{out}");
                Err(VerificationFailed(format!("failing criteria: {failed:?}")).into())
            }
        }
    }
}

fn error_name(e: &anyhow::Error) -> &'static str {
    if let Some(core) = e.downcast_ref::<qtchar_core::Error>() {
        core.name()
    } else if e.is::<VerificationFailed>() {
        "VerificationFailed"
    } else {
        "IoError"
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {}: {e}", error_name(&e));
            ExitCode::from(1)
        }
    }
}
