use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use planar3::equivalence::catalog::Catalog;
use planar3::equivalence::classify::{classify, Candidate};
use planar3::equivalence::linear_equivalent;
use planar3::equivalence::orbits::right_orbits;
use planar3::equivalence::profile::{invariant_profile, ProfileOptions};
use planar3::families::{self, FamilyId, FamilySpec};
use planar3::fixtures::{self, VerifyOptions};
use planar3::isotopy::split_check;
use planar3::search::{dedupe, run_search, SearchConfig, SearchReport};
use planar3::semifield::nuclei_orders;
use planar3::{cyclotomic_equivalent, make_field, PlanarFn};

#[derive(Parser)]
#[command(name = "planar3", version, about = "Planar functions and commutative semifields over GF(3^n)")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// More logging; repeat for debug output.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args)]
struct FnArg {
    /// Extension degree; required unless the file has an `n=` line.
    #[arg(long)]
    n: Option<usize>,
    /// Function text such as "x^90 + x^2", or a file containing it.
    function: String,
}

#[derive(Subcommand)]
enum Command {
    /// Planarity test.
    Planar(FnArg),
    /// Orders of the left and middle nuclei of the associated semifield.
    Nuclei(FnArg),
    /// Right orbit multiset and orbit representatives.
    Orbits {
        #[command(flatten)]
        f: FnArg,
        /// Allow the stabilizer-chain computation above n = 7.
        #[arg(long)]
        allow_long_running: bool,
    },
    /// Linear (= CCZ) equivalence of two planar functions.
    Equiv {
        #[arg(long)]
        n: Option<usize>,
        first: String,
        second: String,
    },
    /// Whether the isotopy class splits into two CCZ classes.
    SplitCheck(FnArg),
    /// Expansion search around base monomials.
    Search(SearchArgs),
    /// Classify family instances (or functions from a file) up to equivalence.
    Classify {
        #[arg(long)]
        n: usize,
        /// One function per line; default: every admissible family instance.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Seed catalog in the catalog line format.
        #[arg(long)]
        seed: Option<PathBuf>,
        /// Use right-orbit multisets in the invariant gate.
        #[arg(long)]
        orbits: bool,
    },
    /// List or generate family instances.
    Families {
        #[command(subcommand)]
        cmd: FamiliesCmd,
    },
    /// Recompute the bundled class tables.
    FixtureVerify {
        #[arg(long)]
        n: usize,
        /// Run every check regardless of cost.
        #[arg(long)]
        full: bool,
    },
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    n: usize,
    /// Base exponents, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    base: Vec<u64>,
    /// Maximum number of added terms.
    #[arg(long)]
    terms: usize,
    /// Degree m of the coefficient subfield GF(3^m).
    #[arg(long, default_value_t = 1)]
    coeff_subfield: usize,
    /// Exponent pool, comma separated (default: all 3^j + 3^i).
    #[arg(long, value_delimiter = ',')]
    pool: Option<Vec<u64>>,
    /// Resume file; with several bases one file per base gets a `.<d>` suffix.
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    /// Catalog to dedupe against (default: the bundled table for n, if any).
    #[arg(long)]
    catalog: Option<PathBuf>,
    /// Print the hits instead of classifying them.
    #[arg(long)]
    no_dedupe: bool,
}

#[derive(Subcommand)]
enum FamiliesCmd {
    /// Family ids, or the admissible instances at degree n.
    List {
        #[arg(long)]
        n: Option<usize>,
    },
    /// Generate one instance, e.g. `gen --n 6 "BH s=2"`.
    Gen {
        #[arg(long)]
        n: usize,
        spec: String,
    },
}

enum Outcome {
    Yes,
    No,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    if let Some(j) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli.cmd) {
        Ok(Outcome::Yes) => ExitCode::SUCCESS,
        Ok(Outcome::No) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn verdict(ok: bool) -> Outcome {
    if ok {
        Outcome::Yes
    } else {
        Outcome::No
    }
}

fn strip_comments(text: &str) -> String {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .collect::<Vec<_>>()
        .join(" ")
}

fn load_fn(arg: &str, n: Option<usize>) -> Result<PlanarFn> {
    let path = Path::new(arg);
    let text = if path.is_file() {
        fs::read_to_string(path).with_context(|| format!("reading {arg}"))?
    } else {
        arg.to_string()
    };
    let has_context = text.lines().any(|l| {
        let l: String = l.split('#').next().unwrap_or("").chars().filter(|c| !c.is_whitespace()).collect();
        l.starts_with("n=")
    });
    let f = if has_context {
        let f = PlanarFn::parse_file(&text)?;
        if let Some(n) = n {
            if n != f.n() {
                bail!("--n {n} disagrees with n={} in {arg}", f.n());
            }
        }
        f
    } else {
        let Some(n) = n else { bail!("--n is required for `{arg}`") };
        PlanarFn::parse(make_field(n)?, &strip_comments(&text))?
    };
    Ok(f.without_constant())
}

fn run(cmd: Command) -> Result<Outcome> {
    match cmd {
        Command::Planar(a) => {
            let f = load_fn(&a.function, a.n)?;
            let p = f.is_planar()?;
            println!("planar: {}", if p { "yes" } else { "no" });
            Ok(verdict(p))
        }
        Command::Nuclei(a) => {
            let f = load_fn(&a.function, a.n)?;
            if !f.is_do() {
                println!("nuclei: NA (not Dembowski-Ostrom)");
                return Ok(Outcome::Yes);
            }
            if !f.is_planar()? {
                println!("not planar");
                return Ok(Outcome::No);
            }
            let (nu, nm) = nuclei_orders(&f)?;
            println!("N: {nu}");
            println!("Nm: {nm}");
            Ok(Outcome::Yes)
        }
        Command::Orbits { f, allow_long_running } => {
            let f = load_fn(&f.function, f.n)?;
            if f.n() >= 8 && !allow_long_running && !f.is_monomial() {
                bail!("orbits over GF(3^{}) can take hours; pass --allow-long-running", f.n());
            }
            if !f.is_monomial() && !f.is_planar()? {
                println!("not planar");
                return Ok(Outcome::No);
            }
            let ro = right_orbits(&f)?;
            let reps: Vec<String> = ro.representative_logs(f.ctx()).iter().map(u32::to_string).collect();
            println!("orbits: {}", ro.multiset);
            println!("representatives: {}", reps.join(","));
            Ok(Outcome::Yes)
        }
        Command::Equiv { n, first, second } => {
            let f = load_fn(&first, n)?;
            let g = load_fn(&second, n.or(Some(f.n())))?;
            if f.n() != g.n() {
                bail!("functions live over different fields (n = {} and n = {})", f.n(), g.n());
            }
            equiv(&f, &g)
        }
        Command::SplitCheck(a) => {
            let f = load_fn(&a.function, a.n)?;
            if !f.is_do() {
                bail!("split check needs a Dembowski-Ostrom polynomial");
            }
            if !f.is_planar()? {
                println!("not planar");
                return Ok(Outcome::No);
            }
            let r = split_check(&f)?;
            let ctx = f.ctx();
            println!("verdict: {}", r.verdict);
            println!("nuclei: {}, {}", r.nucleus_order, r.middle_order);
            println!("cosets: {}", r.coset_count);
            for t in &r.tested {
                println!(
                    "beta {}: square {}, equivalent {}",
                    ctx.format_elem(t.beta),
                    if t.is_square { "yes" } else { "no" },
                    if t.equivalent { "yes" } else { "no" }
                );
            }
            if let Some(p) = &r.partner {
                println!("partner: {p}");
            }
            Ok(Outcome::Yes)
        }
        Command::Search(a) => search(a),
        Command::Classify { n, input, seed, orbits } => {
            let ctx = make_field(n)?;
            let cands = match input {
                Some(path) => {
                    let text = fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
                    text.lines()
                        .map(|l| l.split('#').next().unwrap_or("").trim())
                        .filter(|l| !l.is_empty())
                        .map(|l| Ok(Candidate::new(PlanarFn::parse(ctx.clone(), l)?, Vec::<String>::new())))
                        .collect::<Result<Vec<_>>>()?
                }
                None => families::instances(n)?
                    .into_iter()
                    .map(|(spec, f)| Candidate::new(f, [spec.family.tag()]))
                    .collect(),
            };
            let seed = match seed {
                Some(p) => Catalog::parse(&fs::read_to_string(&p).with_context(|| format!("reading {}", p.display()))?)?,
                None => Catalog::new(),
            };
            let opts = ProfileOptions {
                orbits,
                allow_long_running: false,
            };
            let out = classify(&cands, seed, opts)?;
            print!("{}", out.catalog.to_text());
            println!("# {} candidates, {} classes", cands.len(), out.catalog.restricted(n).len());
            Ok(Outcome::Yes)
        }
        Command::Families { cmd } => match cmd {
            FamiliesCmd::List { n: None } => {
                for f in FamilyId::ALL {
                    println!("{}", f.name());
                }
                Ok(Outcome::Yes)
            }
            FamiliesCmd::List { n: Some(n) } => {
                for spec in families::admissible(n) {
                    let nuclei = match families::expected_nuclei(&spec)? {
                        Some((a, b)) => format!("{a}, {b}"),
                        None => "NA".to_string(),
                    };
                    println!("{spec} | {nuclei}");
                }
                Ok(Outcome::Yes)
            }
            FamiliesCmd::Gen { n, spec } => {
                let spec = FamilySpec::parse(n, &spec)?;
                println!("{}", families::generate(&spec)?);
                Ok(Outcome::Yes)
            }
        },
        Command::FixtureVerify { n, full } => {
            let catalog = fixtures::table(n)?;
            let opts = if full {
                VerifyOptions {
                    nuclei: true,
                    orbits: true,
                    pairwise: true,
                    splits: true,
                }
            } else {
                VerifyOptions::for_degree(n)
            };
            let res = fixtures::verify(&catalog, opts)?;
            for r in &res {
                println!("{r}");
            }
            let bad = res.iter().filter(|r| !r.ok).count();
            println!("n={n}: {} checks, {bad} mismatches", res.len());
            Ok(verdict(bad == 0))
        }
    }
}

fn equiv(f: &PlanarFn, g: &PlanarFn) -> Result<Outcome> {
    let (f, g) = (f.ea_normal(), g.ea_normal());
    if let (Some(d), Some(e)) = (f.single_exponent(), g.single_exponent()) {
        let eq = cyclotomic_equivalent(d, e, f.n());
        println!("{} (cyclotomic)", if eq { "equivalent" } else { "inequivalent" });
        return Ok(verdict(eq));
    }
    let (pf, pg) = (
        invariant_profile(&f, ProfileOptions::default())?,
        invariant_profile(&g, ProfileOptions::default())?,
    );
    if pf.do_flag != pg.do_flag || pf.degree != pg.degree {
        println!("inequivalent (algebraic degree)");
        return Ok(Outcome::No);
    }
    if !pf.do_flag {
        bail!("no equivalence test for non-Dembowski-Ostrom polynomials");
    }
    if pf.nuclei != pg.nuclei {
        println!("inequivalent (nuclei)");
        return Ok(Outcome::No);
    }
    match linear_equivalent(&f, &g)? {
        Some(w) => {
            let ctx = f.ctx();
            let images = |m: &planar3::equivalence::LinearMap| -> String {
                (0..ctx.n())
                    .map(|i| ctx.format_elem(m.apply(ctx.basis(i))))
                    .collect::<Vec<_>>()
                    .join(", ")
            };
            println!("equivalent (witness)");
            println!("L1 basis images: {}", images(&w.l1));
            println!("L2 basis images: {}", images(&w.l2));
            Ok(Outcome::Yes)
        }
        None => {
            println!("inequivalent (exhaustive search)");
            Ok(Outcome::No)
        }
    }
}

fn search(a: SearchArgs) -> Result<Outcome> {
    let mut runs = Vec::new();
    let several = a.base.len() > 1;
    for &d in &a.base {
        let mut cfg = SearchConfig::new(a.n, d, a.terms, a.coeff_subfield);
        if let Some(p) = &a.pool {
            cfg = cfg.with_pool(p.clone());
        }
        if let Some(c) = &a.checkpoint {
            let path = if several {
                PathBuf::from(format!("{}.{d}", c.display()))
            } else {
                c.clone()
            };
            cfg = cfg.with_checkpoint(path);
        }
        runs.push(run_search(&cfg)?);
    }
    let hits: Vec<PlanarFn> = runs.iter().flat_map(|r| r.hits.iter().cloned()).collect();
    if a.no_dedupe {
        for h in &hits {
            println!("{h}");
        }
        println!("# {} planar hits", hits.len());
        return Ok(Outcome::Yes);
    }
    let catalog = match &a.catalog {
        Some(p) => Catalog::parse(&fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?)?,
        None => fixtures::table(a.n).unwrap_or_default(),
    };
    let t = Instant::now();
    let d = dedupe(&hits, &catalog)?;
    println!("{}", SearchReport::new(&runs, &d, t.elapsed()));
    Ok(Outcome::Yes)
}
