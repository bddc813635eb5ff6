//! Command-line front end for the `fbc` library.
//!
//! [`run`] parses arguments, dispatches a subcommand and returns the exit code with the
//! captured output, so the binary and the golden tests share one code path.
//! Exit codes: 0 success, 1 validation or domain error, 2 usage error.

use clap::{Args, Parser, Subcommand};
use fbc::coverings::{
    build_b, build_zb, check_covering, check_morphism, deck_group, is_regular, lift_walk,
    universal_cover_truncated, Morphism, TruncatedCover,
};
use fbc::format::{self, FormatError, SyntaxError};
use fbc::groups::{abelianize, tietze_simplify, Presentation};
use fbc::pipeline::{pi1_bc, PipelineError};
use fbc::quiver::{self, QuiverWithRelations};
use fbc::walks::{alpha, normalize_ms, DEFAULT_BUDGET};
use fbc::{Angle, Fbc, FbcClass};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

/// Default truncation radius for explored covers.
pub const DEFAULT_RADIUS: usize = 6;

#[derive(Parser, Debug)]
#[command(
    name = "fbc",
    version,
    about = "Fractional Brauer configurations: walks, coverings and fundamental groups"
)]
struct Cli {
    /// Homotopy search budget in rewrite layers.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: usize,
    /// Truncation radius for explored covers.
    #[arg(long, global = true, default_value_t = DEFAULT_RADIUS)]
    radius: usize,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug)]
struct FileArg {
    /// Configuration file (text format or JSON mirror).
    file: PathBuf,
}

#[derive(Args, Debug)]
struct WalkArgs {
    file: PathBuf,
    /// Walk such as "e1 g g t:e4 G".
    #[arg(long)]
    walk: String,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Check the axioms and print a summary.
    Validate(FileArg),
    /// Print the most specific class: MS, S or general.
    Classify(FileArg),
    /// Print the quiver with relations.
    Quiver(FileArg),
    /// Print the reduced quiver with relations and the arrow substitution.
    Reduce(FileArg),
    /// Fundamental group of a Brauer configuration, or of a type S configuration via its quiver.
    Pi1 {
        file: PathBuf,
        /// Also print the reduction trace as JSON.
        #[arg(long)]
        trace_json: bool,
    },
    /// Fundamental group of the quiver with relations.
    #[command(name = "pi1-quiver")]
    Pi1Quiver {
        file: PathBuf,
        /// Use the unreduced quiver.
        #[arg(long)]
        full: bool,
    },
    /// Check a covering-map file.
    #[command(name = "cover-check")]
    CoverCheck { cover: PathBuf },
    /// Lift a codomain walk through a covering.
    Lift {
        cover: PathBuf,
        #[arg(long)]
        walk: String,
        /// Domain angle over the walk source.
        #[arg(long)]
        start: String,
    },
    /// List the deck transformations of a covering.
    Deck { cover: PathBuf },
    /// Quotient by a group action file.
    Quotient { action: PathBuf },
    /// Type MS normal form of a walk.
    Normalize(WalkArgs),
    /// Explore a cover from a base angle.
    Ucover {
        file: PathBuf,
        #[arg(long)]
        base: String,
        /// Which cover: universal, b or zb.
        #[arg(long, default_value = "universal")]
        kind: String,
    },
    /// Emit the quiver as DOT.
    #[command(name = "emit-dot")]
    EmitDot {
        file: PathBuf,
        #[arg(long)]
        reduced: bool,
    },
    /// Run golden cases `name.cmd` against `name.out` in a directory.
    Corpus {
        dir: PathBuf,
        /// Rewrite the expected outputs.
        #[arg(long)]
        bless: bool,
    },
}

/// Output of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Failure(String);

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        Failure(e.to_string())
    }
}

impl From<PipelineError> for Failure {
    fn from(e: PipelineError) -> Self {
        Failure(e.to_string())
    }
}

impl From<String> for Failure {
    fn from(e: String) -> Self {
        Failure(e)
    }
}

type Res = Result<String, Failure>;

struct Ctx {
    cwd: PathBuf,
    budget: usize,
    radius: usize,
}

impl Ctx {
    fn read(&self, path: &Path) -> Result<String, Failure> {
        std::fs::read_to_string(self.cwd.join(path))
            .map_err(|e| Failure(format!("{}: {e}", path.display())))
    }

    fn config(&self, path: &Path) -> Result<Fbc, Failure> {
        let text = self.read(path)?;
        format::parse_config(&text).map_err(|e| Failure(format!("{}: {e}", path.display())))
    }

    fn syntax<T>(path: &Path, r: Result<T, SyntaxError>) -> Result<T, Failure> {
        r.map_err(|e| Failure(format!("{}: {e}", path.display())))
    }

    /// Nested paths are relative to the directory of `path`.
    fn nested(path: &Path, rel: &str) -> PathBuf {
        path.parent().unwrap_or_else(|| Path::new("")).join(rel)
    }

    fn cover(&self, path: &Path) -> Result<(Fbc, Fbc, Vec<Angle>), Failure> {
        let cf = Ctx::syntax(path, format::parse_cover(&self.read(path)?))?;
        let dom = self.config(&Ctx::nested(path, &cf.domain))?;
        let cod = self.config(&Ctx::nested(path, &cf.codomain))?;
        let map = format::resolve_map(&dom, &cod, &cf.map)
            .map_err(|e| Failure(format!("{}: {e}", path.display())))?;
        Ok((dom, cod, map))
    }
}

fn angle(cfg: &Fbc, name: &str) -> Result<Angle, Failure> {
    cfg.index_of(name)
        .ok_or_else(|| Failure(format!("unknown angle `{name}`")))
}

fn walk(cfg: &Fbc, text: &str) -> Result<fbc::Walk, Failure> {
    format::parse_walk(cfg, text).map_err(|e| Failure(format!("walk: {e}")))
}

fn summary(cfg: &Fbc) -> String {
    format!(
        "type {}; {} angles, {} vertices, {} polygons",
        cfg.classify(),
        cfg.len(),
        cfg.orbits().num_blocks(),
        cfg.polygons().num_blocks()
    )
}

fn print_quiver(q: &QuiverWithRelations) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "vertices: {}", q.vertices.join(" "));
    for a in &q.arrows {
        let _ = writeln!(
            s,
            "arrow {}: {} -> {} [{}]",
            a.name, q.vertices[a.source], q.vertices[a.target], a.label
        );
    }
    for z in &q.zero_relations {
        let _ = writeln!(s, "zero: {}", q.path_string(z));
    }
    for (u, v) in &q.binomial_relations {
        let _ = writeln!(s, "equal: {} = {}", q.path_string(u), q.path_string(v));
    }
    s
}

fn print_group(label: &str, p: &Presentation) -> String {
    let t = tietze_simplify(p, p.gens.len() + 1);
    format!(
        "{label}: {p}\nsimplified: {t}\ninvariants: {}\n",
        abelianize(p)
    )
}

fn cycles(cfg: &Fbc, perm: &[Angle]) -> String {
    let mut seen = vec![false; perm.len()];
    let mut parts = Vec::new();
    for s in 0..perm.len() {
        if seen[s] || perm[s] == s {
            continue;
        }
        let mut c = Vec::new();
        let mut x = s;
        while !seen[x] {
            seen[x] = true;
            c.push(cfg.name(x).to_string());
            x = perm[x];
        }
        parts.push(format!("({})", c.join(" ")));
    }
    if parts.is_empty() {
        "()".into()
    } else {
        parts.join("")
    }
}

fn cmd_pi1(ctx: &Ctx, file: &Path, trace_json: bool) -> Res {
    let cfg = ctx.config(file)?;
    if cfg.is_brauer_configuration() {
        let res = pi1_bc(&cfg)?;
        let mut s = String::from("route: closed form and split spanning tree\n");
        s.push_str(&print_group("presentation", &res.presentation));
        let _ = writeln!(s, "pipeline: {}", res.pipeline.presentation);
        let _ = writeln!(
            s,
            "relators verified on walks: {}",
            res.pipeline.equations.len()
        );
        s.push_str("trace:\n");
        for line in res.trace.summary().lines() {
            let _ = writeln!(s, "  {line}");
        }
        if trace_json {
            let _ = writeln!(
                s,
                "{}",
                serde_json::to_string(&res.trace).expect("serializable")
            );
        }
        return Ok(s);
    }
    if cfg.classify() == FbcClass::General {
        return Err(Failure(
            "configuration is neither a Brauer configuration nor of type S".into(),
        ));
    }
    if !cfg.is_connected() {
        return Err(Failure("configuration is not connected".into()));
    }
    let red = quiver::reduce_presentation(&cfg).map_err(|e| Failure(e.to_string()))?;
    let q = &red.quiver;
    let p = quiver::pi1_quiver(q, &q.binomial_relations, 0).map_err(|e| Failure(e.to_string()))?;
    Ok(format!(
        "route: reduced quiver\n{}",
        print_group("presentation", &p)
    ))
}

fn cmd_pi1_quiver(ctx: &Ctx, file: &Path, full: bool) -> Res {
    let cfg = ctx.config(file)?;
    if !cfg.is_connected() {
        return Err(Failure("configuration is not connected".into()));
    }
    let q = if full {
        quiver::quiver_of(&cfg)
    } else {
        quiver::reduce_presentation(&cfg)
            .map_err(|e| Failure(e.to_string()))?
            .quiver
    };
    let p = quiver::pi1_quiver(&q, &q.binomial_relations, 0).map_err(|e| Failure(e.to_string()))?;
    Ok(print_group("presentation", &p))
}

fn cmd_cover_check(ctx: &Ctx, path: &Path) -> Res {
    let (dom, cod, map) = ctx.cover(path)?;
    let m = Morphism::new(&dom, &cod, map);
    let mut s = String::new();
    if let Err(v) = check_morphism(&m) {
        let _ = writeln!(s, "morphism: no ({v})");
        return Ok(s);
    }
    s.push_str("morphism: yes\n");
    match check_covering(&m) {
        Err(v) => {
            let _ = writeln!(s, "covering: no ({v})");
        }
        Ok(cov) => {
            s.push_str("covering: yes\n");
            if dom.is_connected() {
                let deck = deck_group(&cov).map_err(|e| Failure(e.to_string()))?;
                let reg = is_regular(&cov).map_err(|e| Failure(e.to_string()))?;
                let _ = writeln!(s, "regular: {}", if reg { "yes" } else { "no" });
                let _ = writeln!(s, "deck group order: {}", deck.len());
            }
            let _ = writeln!(s, "classes: {} -> {}", dom.classify(), cod.classify());
        }
    }
    Ok(s)
}

fn cmd_lift(ctx: &Ctx, path: &Path, w: &str, start: &str) -> Res {
    let (dom, cod, map) = ctx.cover(path)?;
    let m = Morphism::new(&dom, &cod, map);
    let cov = check_covering(&m).map_err(|v| Failure(format!("not a covering: {v}")))?;
    let w = walk(&cod, w)?;
    let e = angle(&dom, start)?;
    let lifted = lift_walk(&cov, &w, e).map_err(|e| Failure(e.to_string()))?;
    Ok(format!("{}\n", lifted.display(&dom)))
}

fn cmd_deck(ctx: &Ctx, path: &Path) -> Res {
    let (dom, cod, map) = ctx.cover(path)?;
    let m = Morphism::new(&dom, &cod, map);
    let cov = check_covering(&m).map_err(|v| Failure(format!("not a covering: {v}")))?;
    let deck = deck_group(&cov).map_err(|e| Failure(e.to_string()))?;
    let mut s = format!("order: {}\n", deck.len());
    for p in &deck {
        let _ = writeln!(s, "{}", cycles(&dom, p));
    }
    Ok(s)
}

fn cmd_quotient(ctx: &Ctx, path: &Path) -> Res {
    let af = Ctx::syntax(path, format::parse_action(&ctx.read(path)?))?;
    let cfg = ctx.config(&Ctx::nested(path, &af.config))?;
    let gens = af
        .generators
        .iter()
        .map(|g| format::resolve_permutation(&cfg, g))
        .collect::<Result<Vec<_>, _>>()?;
    let q = fbc::config::quotient(&cfg, &gens).map_err(|e| Failure(e.to_string()))?;
    let mut s = format!("group order: {}\n", q.group.len());
    s.push_str(&format::print_config(&q.cfg));
    let proj: Vec<String> = (0..cfg.len())
        .map(|e| format!("{} {}", cfg.name(e), q.cfg.name(q.projection[e])))
        .collect();
    let _ = writeln!(s, "projection: {}", proj.join(", "));
    Ok(s)
}

fn cmd_normalize(ctx: &Ctx, file: &Path, w: &str) -> Res {
    let cfg = ctx.config(file)?;
    let w = walk(&cfg, w)?;
    let nf = normalize_ms(&cfg, &w).map_err(|e| Failure(e.to_string()))?;
    let special = nf.special.to_walk(&cfg);
    let a = alpha(&cfg, &w).map_err(|e| Failure(e.to_string()))?;
    Ok(format!(
        "special: {}\nturns: {}\nalpha: {}\nrepresentative: {}\n",
        special.display(&cfg),
        nf.turns,
        a,
        nf.representative(&cfg).display(&cfg)
    ))
}

fn cover_summary(cfg: &Fbc, tc: &TruncatedCover) -> String {
    let interior = tc.interior().count();
    let mut s = format!(
        "states: {}\ninterior: {}\nboundary: {}\npolygons: {}\n",
        tc.len(),
        interior,
        tc.len() - interior,
        tc.num_polygons()
    );
    let _ = writeln!(
        s,
        "complete: {}",
        if tc.is_complete(cfg) { "yes" } else { "no" }
    );
    let check = match tc.check_covering_interior(cfg) {
        Ok(()) => "yes".to_string(),
        Err(e) => format!("no ({e})"),
    };
    let _ = writeln!(s, "interior covering check: {check}");
    s
}

fn cmd_ucover(ctx: &Ctx, file: &Path, base: &str, kind: &str) -> Res {
    let cfg = ctx.config(file)?;
    let e = angle(&cfg, base)?;
    let tc = match kind {
        "universal" => universal_cover_truncated(&cfg, e, ctx.radius, ctx.budget),
        "b" => build_b(&cfg, e, ctx.radius),
        "zb" => build_zb(&cfg, e, ctx.radius),
        other => {
            return Err(Failure(format!(
                "unknown cover kind `{other}` (expected universal, b or zb)"
            )))
        }
    }
    .map_err(|e| Failure(e.to_string()))?;
    Ok(format!(
        "kind: {kind}\nradius: {}\n{}",
        ctx.radius,
        cover_summary(&cfg, &tc)
    ))
}

fn cmd_corpus(dir: &Path, bless: bool, ctx: &Ctx) -> Res {
    let root = ctx.cwd.join(dir);
    let mut cases: Vec<PathBuf> = std::fs::read_dir(&root)
        .map_err(|e| Failure(format!("{}: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "cmd"))
        .collect();
    cases.sort();
    let mut s = String::new();
    let mut failed = 0;
    for case in &cases {
        let name = case
            .file_stem()
            .expect("file name")
            .to_string_lossy()
            .to_string();
        let line = std::fs::read_to_string(case).map_err(|e| Failure(format!("{name}: {e}")))?;
        let args = split_args(line.trim());
        let out = run(args.iter().map(String::as_str), &root);
        let got = render_case(&out);
        let expected_path = case.with_extension("out");
        if bless {
            std::fs::write(&expected_path, &got).map_err(|e| Failure(format!("{name}: {e}")))?;
            let _ = writeln!(s, "BLESS {name}");
            continue;
        }
        let expected = std::fs::read_to_string(&expected_path).unwrap_or_default();
        if expected == got {
            let _ = writeln!(s, "PASS {name}");
        } else {
            failed += 1;
            let _ = writeln!(s, "FAIL {name}");
        }
    }
    let _ = writeln!(s, "{} cases, {} failed", cases.len(), failed);
    if failed > 0 {
        Err(Failure(s))
    } else {
        Ok(s)
    }
}

/// Golden-file rendering of an outcome: exit code, then stdout, then stderr.
pub fn render_case(out: &Outcome) -> String {
    format!(
        "exit: {}\n--- stdout\n{}--- stderr\n{}",
        out.code, out.stdout, out.stderr
    )
}

/// Splits a command line on whitespace, honouring double quotes.
pub fn split_args(line: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut quoted = false;
    let mut any = false;
    for c in line.chars() {
        match c {
            '"' => {
                quoted = !quoted;
                any = true;
            }
            c if c.is_whitespace() && !quoted => {
                if any {
                    out.push(std::mem::take(&mut cur));
                    any = false;
                }
            }
            c => {
                cur.push(c);
                any = true;
            }
        }
    }
    if any {
        out.push(cur);
    }
    out
}

fn dispatch(cli: Cli, cwd: &Path) -> Res {
    let ctx = Ctx {
        cwd: cwd.to_path_buf(),
        budget: cli.budget,
        radius: cli.radius,
    };
    match cli.cmd {
        Cmd::Validate(f) => Ok(format!("valid: {}\n", summary(&ctx.config(&f.file)?))),
        Cmd::Classify(f) => Ok(format!("type {}\n", ctx.config(&f.file)?.classify())),
        Cmd::Quiver(f) => Ok(print_quiver(&quiver::quiver_of(&ctx.config(&f.file)?))),
        Cmd::Reduce(f) => {
            let cfg = ctx.config(&f.file)?;
            let red = quiver::reduce_presentation(&cfg).map_err(|e| Failure(e.to_string()))?;
            let mut s = print_quiver(&red.quiver);
            for (a, arrow) in red.full.arrows.iter().enumerate() {
                if red.reduced[a] {
                    let img = red.quiver.path_string(&red.mu[a]);
                    let _ = writeln!(s, "substitute {} -> {}", arrow.name, img);
                }
            }
            Ok(s)
        }
        Cmd::Pi1 { file, trace_json } => cmd_pi1(&ctx, &file, trace_json),
        Cmd::Pi1Quiver { file, full } => cmd_pi1_quiver(&ctx, &file, full),
        Cmd::CoverCheck { cover } => cmd_cover_check(&ctx, &cover),
        Cmd::Lift { cover, walk, start } => cmd_lift(&ctx, &cover, &walk, &start),
        Cmd::Deck { cover } => cmd_deck(&ctx, &cover),
        Cmd::Quotient { action } => cmd_quotient(&ctx, &action),
        Cmd::Normalize(w) => cmd_normalize(&ctx, &w.file, &w.walk),
        Cmd::Ucover { file, base, kind } => cmd_ucover(&ctx, &file, &base, &kind),
        Cmd::EmitDot { file, reduced } => {
            let cfg = ctx.config(&file)?;
            let q = if reduced {
                quiver::reduce_presentation(&cfg)
                    .map_err(|e| Failure(e.to_string()))?
                    .quiver
            } else {
                quiver::quiver_of(&cfg)
            };
            Ok(quiver::emit_dot(&q))
        }
        Cmd::Corpus { dir, bless } => cmd_corpus(&dir, bless, &ctx),
    }
}

/// Runs one invocation; `args` excludes the program name and files resolve against `cwd`.
pub fn run<'a>(args: impl IntoIterator<Item = &'a str>, cwd: &Path) -> Outcome {
    let argv = std::iter::once("fbc").chain(args);
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    match dispatch(cli, cwd) {
        Ok(stdout) => Outcome {
            code: 0,
            stdout,
            stderr: String::new(),
        },
        Err(Failure(msg)) => Outcome {
            code: 1,
            stdout: String::new(),
            stderr: format!("error: {}\n", msg.trim_end()),
        },
    }
}
