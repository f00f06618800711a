use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use houghton::bfs::{generating_letters, word_length_bounded, DEFAULT_MAX_NODES};
use houghton::growth::{theorem_expectation, DEFAULT_MAX_K};
use houghton::mono::{mono_profile_ordered, DEFAULT_MAX_LEVEL};
use houghton::presentation::DEFAULT_K_MAX;
use houghton::{
    element_to_word, growth_report, word_length_lower_bound, EndoConfig, Endomorphism, Error,
    GrowthOptions, KernelClass, Letter, Limits, MonoProfile, Point, Word, WordLength,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const MAX_BFS_LIMIT: usize = 40;
const MAX_RELATION_K: i64 = 1000;

#[derive(Parser, Debug)]
#[command(name = "houghton", version, about = "Endomorphisms of Houghton's groups: relations, structure, trees and growth")]
struct Cli {
    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check that a config defines an endomorphism (every defining relation holds on the images).
    Verify {
        config: PathBuf,
        /// Largest |k| tried in the relation families.
        #[arg(long, default_value_t = DEFAULT_K_MAX)]
        max_k: i64,
        /// Random words to spot-check apply(word) against apply(evaluate(word)).
        #[arg(long, default_value_t = 0)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Kernel class, abelianization matrix and, for monomorphism candidates, ℓ, δ and D.
    Analyze {
        config: PathBuf,
        #[arg(long)]
        json: bool,
        /// Override the order of the diverging points, e.g. "2,1;1,2".
        #[arg(long)]
        diverging: Option<String>,
        /// Half-width of the printed partial-translation windows.
        #[arg(long, default_value_t = 3)]
        window: i64,
    },
    /// Export the labelled tree T_P to the given depth.
    Tree {
        config: PathBuf,
        #[arg(long, value_parser = parse_point)]
        point: Point,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[arg(long)]
        diverging: Option<String>,
    },
    /// Growth table as CSV: lower and upper bounds on max_i |φ^k(g_i)| for k = 1..K.
    Growth {
        config: PathBuf,
        #[arg(long, default_value_t = DEFAULT_MAX_K)]
        max_k: u32,
        /// BFS is attempted when the upper bound is at most this.
        #[arg(long, default_value_t = 6)]
        bfs_limit: usize,
        /// γ with φ = inner(γ), used as an extra upper-bound candidate.
        #[arg(long)]
        conjugator: Option<String>,
    },
    /// Evaluate a word in H_n.
    Eval {
        word: String,
        #[arg(long, default_value_t = 3)]
        n: usize,
        /// Also print a word for the element.
        #[arg(long)]
        rewrite: bool,
    },
    /// Word length of the element a word evaluates to.
    Wordlen {
        word: String,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Method::Bfs)]
        method: Method,
        #[arg(long, default_value_t = 12)]
        bfs_limit: usize,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Method {
    /// Exact length by bidirectional breadth-first search.
    Bfs,
    /// Lower bound from the translation vector.
    Lower,
    /// Length of the word produced by the rewriter: an upper bound.
    Upper,
}

fn parse_point(s: &str) -> std::result::Result<Point, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_points(s: &str) -> Result<Vec<Point>> {
    s.split(';')
        .filter(|t| !t.trim().is_empty())
        .map(|t| t.parse::<Point>().map_err(anyhow::Error::from))
        .collect()
}

fn load(path: &Path) -> Result<Endomorphism> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let cfg = EndoConfig::parse(&text).with_context(|| format!("in {}", path.display()))?;
    Ok(cfg.build()?)
}

fn load_with(path: &Path, max_k: i64) -> Result<Endomorphism> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let cfg = EndoConfig::parse(&text).with_context(|| format!("in {}", path.display()))?;
    Ok(Endomorphism::build_with(cfg.images()?, max_k, Limits::from_env())?)
}

fn capped(what: &'static str, size: usize, cap: usize) -> Result<()> {
    if size > cap {
        Err(Error::ResourceLimit { what, size, cap }.into())
    } else {
        Ok(())
    }
}

fn profile(phi: &Endomorphism, diverging: Option<&str>) -> Result<MonoProfile> {
    let order = diverging.map(parse_points).transpose()?;
    Ok(mono_profile_ordered(phi, order.as_deref())?)
}

fn random_word(rng: &mut ChaCha8Rng, letters: &[Letter], len: usize) -> Word {
    (0..len).map(|_| letters[rng.gen_range(0..letters.len())]).collect()
}

fn verify(config: &Path, max_k: i64, samples: usize, seed: u64) -> Result<String> {
    capped("relation range", max_k.unsigned_abs() as usize, MAX_RELATION_K as usize)?;
    let phi = load_with(config, max_k)?;
    let r = phi.report();
    let mut out = String::new();
    writeln!(out, "ok: H_{} relations hold for |k| <= {max_k}", r.n)?;
    writeln!(out, "evaluated={}", r.evaluated)?;
    if let (Some(t), Some(p)) = (r.threshold, r.period) {
        writeln!(out, "periodic beyond |k| = {t} with period {p}")?;
    }
    writeln!(out, "alpha -> {}", phi.alpha_image())?;
    if samples > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let letters = generating_letters(phi.n());
        for s in 0..samples {
            let len = rng.gen_range(0..=8);
            let w = random_word(&mut rng, &letters, len);
            let direct = phi.apply(&w.evaluate(phi.n())?)?;
            if phi.apply_word(&w)? != direct {
                anyhow::bail!("sample {s}: images of `{w}` disagree");
            }
        }
        writeln!(out, "samples={samples} seed={seed}: consistent")?;
    }
    Ok(out)
}

fn delta_string(delta: &[usize]) -> String {
    if delta.iter().enumerate().all(|(i, &r)| r == i + 1) {
        "identity".into()
    } else {
        format!("{delta:?}")
    }
}

fn analyze(config: &Path, json: bool, diverging: Option<&str>, window: i64) -> Result<String> {
    capped("window", window.unsigned_abs() as usize, 1000)?;
    let phi = load(config)?;
    let class = phi.classify_kernel()?;
    let a = phi.abelianization_matrix();
    let (tag, expected) = theorem_expectation(&phi)?;
    let prof = if class == KernelClass::MonoCandidate {
        Some(profile(&phi, diverging)?)
    } else {
        None
    };
    if json {
        let mut v = serde_json::json!({
            "n": phi.n(),
            "kernel": class.to_string(),
            "matrix": a.rows(),
            "spectral_radius": a.spectral_radius(),
            "tag": tag.to_string(),
            "expected_growth": expected,
        });
        if let Some(p) = &prof {
            v["profile"] = serde_json::json!({
                "ell": p.ell,
                "source": p.source,
                "delta": p.delta,
                "d": p.d,
                "diverging": p.diverging.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
                "t_alpha": p.t_alpha.iter().map(|(x, y)| format!("({x},{y})")).collect::<Vec<_>>(),
                "violations": p.violations,
            });
        }
        return Ok(serde_json::to_string_pretty(&v)? + "\n");
    }
    let mut out = String::new();
    writeln!(out, "n={}", phi.n())?;
    writeln!(out, "kernel={class}")?;
    writeln!(out, "matrix={a}")?;
    writeln!(out, "spectral_radius={:.6}", a.spectral_radius())?;
    match expected {
        Some(e) => writeln!(out, "expected_growth={e:.6} ({tag})")?,
        None => writeln!(out, "expected_growth=none ({tag})")?,
    }
    if let Some(p) = &prof {
        writeln!(out, "ell={}", p.ell)?;
        writeln!(out, "source=R{}", p.source)?;
        writeln!(out, "delta={}", delta_string(&p.delta))?;
        writeln!(out, "d={}", p.d)?;
        for (l, d) in p.diverging.iter().enumerate() {
            writeln!(out, "D_{}={d}", l + 1)?;
        }
        let t: Vec<String> = p.t_alpha.iter().map(|(x, y)| format!("({x},{y})")).collect();
        writeln!(out, "phi(alpha)={}", t.join(""))?;
        for l in 1..=p.diverging.len() {
            for i in 2..=p.n {
                let pts: Vec<String> = p.partial(l, i).window(-window, window).iter().map(|x| x.to_string()).collect();
                writeln!(out, "pt_{{{l},{i}}}[{}..{}]: {}", -window, window, pts.join(" "))?;
            }
        }
        if p.violations.is_empty() {
            writeln!(out, "violations=none")?;
        } else {
            for v in &p.violations {
                writeln!(out, "violation: {v}")?;
            }
        }
    }
    Ok(out)
}

fn tree(config: &Path, point: Point, depth: usize, diverging: Option<&str>) -> Result<String> {
    capped("tree depth", depth, 64)?;
    let phi = load(config)?;
    let p = profile(&phi, diverging)?;
    let t = houghton::mono::build_tree(&p, point, depth, DEFAULT_MAX_LEVEL)?;
    Ok(t.export())
}

fn growth(config: &Path, max_k: u32, bfs_limit: usize, conjugator: Option<&str>) -> Result<String> {
    capped("BFS depth", bfs_limit, MAX_BFS_LIMIT)?;
    let phi = load(config)?;
    let opts = GrowthOptions {
        bfs_depth: bfs_limit,
        conjugator: conjugator.map(Word::parse).transpose()?,
        ..GrowthOptions::default()
    };
    Ok(growth_report(&phi, max_k, &opts)?.to_csv())
}

fn eval(word: &str, n: usize, rewrite: bool) -> Result<String> {
    let g = Word::parse(word)?.evaluate(n)?;
    let mut out = format!("{g}\n");
    if rewrite {
        writeln!(out, "word={}", element_to_word(&g))?;
    }
    Ok(out)
}

fn wordlen(word: &str, n: usize, method: Method, bfs_limit: usize) -> Result<String> {
    capped("BFS depth", bfs_limit, MAX_BFS_LIMIT)?;
    let g = Word::parse(word)?.evaluate(n)?;
    Ok(match method {
        Method::Bfs => match word_length_bounded(&g, bfs_limit, DEFAULT_MAX_NODES)? {
            WordLength::Exact(d) => format!("{d}\n"),
            WordLength::Exceeded => format!(">{bfs_limit}\n"),
        },
        Method::Lower => format!("{}\n", word_length_lower_bound(&g)),
        Method::Upper => format!("{}\n", element_to_word(&g).len()),
    })
}

fn run(cli: &Cli) -> Result<String> {
    match &cli.command {
        Command::Verify { config, max_k, samples, seed } => verify(config, *max_k, *samples, *seed),
        Command::Analyze { config, json, diverging, window } => analyze(config, *json, diverging.as_deref(), *window),
        Command::Tree { config, point, depth, diverging } => tree(config, *point, *depth, diverging.as_deref()),
        Command::Growth { config, max_k, bfs_limit, conjugator } => {
            growth(config, *max_k, *bfs_limit, conjugator.as_deref())
        }
        Command::Eval { word, n, rewrite } => eval(word, *n, *rewrite),
        Command::Wordlen { word, n, method, bfs_limit } => wordlen(word, *n, *method, *bfs_limit),
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::RelationFailure { .. }) => 2,
        Some(Error::ResourceLimit { .. }) => 3,
        Some(Error::Parse { .. }) => 4,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|text| match &cli.out {
        Some(path) => std::fs::write(path, &text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
