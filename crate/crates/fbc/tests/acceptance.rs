//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
//!
//! Oracles here are written independently of the library: walk reduction, the rewrite
//! closure, lift uniqueness and expected presentations are all computed locally.

use fbc::builders;
use fbc::config::quotient;
use fbc::coverings::{
    build_b, build_zb, check_covering, check_morphism, deck_group, is_regular, lift_walk,
    project_walk, Morphism, MorphismViolation,
};
use fbc::format::{load_action, load_config, load_cover, LoadedCover};
use fbc::groups::{abelianize, tietze_simplify, AbelianInvariants, Presentation};
use fbc::pipeline::{pi1_bc, verify_relators, BcResult};
use fbc::quiver::{pi1_quiver, reduce_presentation};
use fbc::walks::{alpha, homotopic, normalize_ms, MsNormalForm};
use fbc::{Angle, Fbc, Step, Walk};
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustc_hash::FxHashMap;
use std::collections::{BTreeSet, HashMap, VecDeque};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

const BUDGET: usize = 64;
const TIETZE_BUDGET: usize = 64;
/// Longest reduced word kept by the rewrite closure: walk length 6 plus slack 6.
const REWRITE_BOUND: usize = 12;

type Outcome = Result<String, String>;
/// Name, check and runtime limit.
type Criterion = (&'static str, fn() -> Outcome, Duration);

fn corpus() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Every corpus configuration file that loads, sorted by name.
fn corpus_configs() -> Vec<(String, Fbc)> {
    let mut names: Vec<PathBuf> = std::fs::read_dir(corpus())
        .expect("corpus directory")
        .map(|e| e.expect("dir entry").path())
        .filter(|p| p.extension().is_some_and(|x| x == "fbc"))
        .collect();
    names.sort();
    names
        .into_iter()
        .filter_map(|p| {
            let name = p.file_stem()?.to_string_lossy().into_owned();
            load_config(&p).ok().map(|c| (name, c))
        })
        .collect()
}

/// A corpus covering: the two `.cover` coverings plus the projection of every admissible action.
struct CorpusCovering {
    name: String,
    dom: Fbc,
    cod: Fbc,
    map: Vec<Angle>,
}

fn corpus_coverings() -> Result<Vec<CorpusCovering>, String> {
    let mut out = Vec::new();
    for name in ["example_covering", "star_double"] {
        let LoadedCover {
            domain,
            codomain,
            map,
        } = load_cover(&corpus().join(format!("{name}.cover"))).map_err(|e| e.to_string())?;
        out.push(CorpusCovering {
            name: name.into(),
            dom: domain,
            cod: codomain,
            map,
        });
    }
    {
        let name = "rotation";
        let act =
            load_action(&corpus().join(format!("{name}.action"))).map_err(|e| e.to_string())?;
        let q = quotient(&act.config, &act.generators).map_err(|e| e.to_string())?;
        out.push(CorpusCovering {
            name: format!("{name} quotient"),
            dom: act.config,
            cod: q.cfg,
            map: q.projection,
        });
    }
    Ok(out)
}

fn random_walk(cfg: &Fbc, rng: &mut ChaCha8Rng, start: Angle, len: usize) -> Walk {
    let mut w = Walk::trivial(start);
    for _ in 0..len {
        let e = w.target();
        let p = cfg.polygon(e);
        let k = rng.gen_range(0..2 + p.len());
        let s = match k {
            0 => Step::Fwd,
            1 => Step::Bwd,
            _ => Step::Tau(p[k - 2]),
        };
        w.push(cfg, s).expect("random step is valid");
    }
    w
}

/// Steps of `w` with a null-homotopic loop spliced in at step index `at`.
fn with_null_loop(cfg: &Fbc, w: &Walk, at: usize, kind: usize) -> Walk {
    let x = w.path()[at];
    let lp: Vec<Step> = match kind % 3 {
        0 => vec![Step::Fwd, Step::Bwd],
        1 => vec![Step::Tau(x)],
        _ => {
            let z = *cfg.polygon(x).iter().max().expect("nonempty polygon");
            h3_loop(cfg, x, z, false)
        }
    };
    let mut steps = w.steps()[..at].to_vec();
    steps.extend(lp);
    steps.extend_from_slice(&w.steps()[at..]);
    Walk::new(cfg, w.source(), steps).expect("spliced walk is valid")
}

/// The closed walk at `x` that one (h3) move plus (h1)/(h2) cancellation makes trivial.
///
/// Not inverted: `g^{-d(x0)}`, jump to `z0`, `g^{d(z0)}`, jump to `x`, where `σ(x0) = x` and
/// `σ(z0) = z`. Inverted: `g^{d(x)}`, jump to `σ(z)`, `g^{-d(z)}`, jump to `x`.
fn h3_loop(cfg: &Fbc, x: Angle, z: Angle, inverted: bool) -> Vec<Step> {
    let mut s = Vec::new();
    if !inverted {
        let x0 = cfg.sigma_inv(x);
        let z0 = cfg.sigma_inv(z);
        s.extend(std::iter::repeat_n(Step::Bwd, cfg.degree(x0)));
        s.push(Step::Tau(z0));
        s.extend(std::iter::repeat_n(Step::Fwd, cfg.degree(z0)));
    } else {
        s.extend(std::iter::repeat_n(Step::Fwd, cfg.degree(x)));
        s.push(Step::Tau(cfg.sigma(z)));
        s.extend(std::iter::repeat_n(Step::Bwd, cfg.degree(z)));
    }
    s.push(Step::Tau(x));
    s
}

// ---------------------------------------------------------------------------
// Rewrite oracle for criterion 9
// ---------------------------------------------------------------------------

/// Step code: `0` is `g`, `1` is `g⁻¹`, `2 + t` is a jump to `t`.
type Code = u8;

fn encode(s: Step) -> Code {
    match s {
        Step::Fwd => 0,
        Step::Bwd => 1,
        Step::Tau(t) => 2 + t as Code,
    }
}

/// Reduction under (h1) and (h2) plus the bounded closure under spliced (h3) loops.
///
/// A reduced word has no `g g⁻¹`, no `g⁻¹ g`, no adjacent jumps and no self jump; it is
/// stored as the source angle followed by step codes. Each move splices a null-homotopic
/// loop (or its inverse) at any position and reduces; type MS makes (h4) trivial.
struct RewriteClosure {
    g: Vec<Code>,
    g_inv: Vec<Code>,
    loops: Vec<Vec<Vec<Code>>>,
    max_len: usize,
    component: FxHashMap<Vec<Code>, usize>,
    classes: usize,
}

impl RewriteClosure {
    fn new(cfg: &Fbc, max_len: usize) -> Self {
        let n = cfg.len();
        let loops = (0..n)
            .map(|x| {
                let mut out = Vec::new();
                for &z in cfg.polygon(x).iter().filter(|&&z| z != x) {
                    for inverted in [false, true] {
                        let lp = h3_loop(cfg, x, z, inverted);
                        let inv = Walk::new(cfg, x, lp.clone()).expect("valid loop").invert();
                        out.push(lp.into_iter().map(encode).collect());
                        out.push(inv.steps().iter().copied().map(encode).collect());
                    }
                }
                out
            })
            .collect();
        RewriteClosure {
            g: (0..n).map(|e| cfg.g(e) as Code).collect(),
            g_inv: (0..n).map(|e| cfg.g_inv(e) as Code).collect(),
            loops,
            max_len,
            component: FxHashMap::default(),
            classes: 0,
        }
    }

    fn target(&self, e: Code, c: Code) -> Code {
        match c {
            0 => self.g[e as usize],
            1 => self.g_inv[e as usize],
            t => t - 2,
        }
    }

    /// Appends `c` to the reduced word `word` whose angle path is `at`.
    fn push(&self, word: &mut Vec<Code>, at: &mut Vec<Code>, c: Code) {
        let cur = *at.last().expect("path is never empty");
        let last = if word.len() > 1 {
            Some(word[word.len() - 1])
        } else {
            None
        };
        match (last, c) {
            (Some(0), 1) | (Some(1), 0) => {
                word.pop();
                at.pop();
            }
            (Some(l), t) if l >= 2 && t >= 2 => {
                word.pop();
                at.pop();
                if *at.last().expect("nonempty") != t - 2 {
                    word.push(t);
                    at.push(t - 2);
                }
            }
            (_, t) if t >= 2 && t - 2 == cur => {}
            _ => {
                word.push(c);
                at.push(self.target(cur, c));
            }
        }
    }

    fn reduce(&self, source: Angle, steps: impl IntoIterator<Item = Code>) -> Vec<Code> {
        let mut word = vec![source as Code];
        let mut at = vec![source as Code];
        for c in steps {
            self.push(&mut word, &mut at, c);
        }
        word
    }

    fn path(&self, word: &[Code]) -> Vec<Code> {
        let mut p = vec![word[0]];
        for &c in &word[1..] {
            p.push(self.target(*p.last().expect("nonempty"), c));
        }
        p
    }

    /// The component id of the reduced form of `w`, exploring its component when new.
    fn class_of(&mut self, w: &Walk) -> usize {
        let start = self.reduce(w.source(), w.steps().iter().copied().map(encode));
        if let Some(&c) = self.component.get(&start) {
            return c;
        }
        let id = self.classes;
        self.classes += 1;
        self.component.insert(start.clone(), id);
        let mut queue = VecDeque::from([start]);
        let (mut word, mut at) = (Vec::new(), Vec::new());
        while let Some(u) = queue.pop_front() {
            let path = self.path(&u);
            for (i, &x) in path.iter().enumerate() {
                for lp in &self.loops[x as usize] {
                    word.clear();
                    word.extend_from_slice(&u[..=i]);
                    at.clear();
                    at.extend_from_slice(&path[..=i]);
                    for &c in lp.iter().chain(&u[i + 1..]) {
                        self.push(&mut word, &mut at, c);
                    }
                    if word.len() - 1 <= self.max_len && !self.component.contains_key(&word) {
                        self.component.insert(word.clone(), id);
                        queue.push_back(word.clone());
                    }
                }
            }
        }
        id
    }
}

// ---------------------------------------------------------------------------
// Criteria
// ---------------------------------------------------------------------------

fn expected_invariants(m: usize) -> AbelianInvariants {
    let x = vec!["x"; m].join(" ");
    let xi = vec!["X"; m].join(" ");
    abelianize(
        &Presentation::parse(&format!("gens: x y; rels: {x} y {xi} Y"))
            .expect("valid presentation"),
    )
}

fn check_bc_relators(res: &BcResult) -> Result<(), String> {
    verify_relators(&res.split, &res.pipeline).map_err(|e| e.to_string())
}

fn criterion_1() -> Outcome {
    for m in 1..=3 {
        let cfg = builders::loop_bg(m);
        let res = pi1_bc(&cfg).map_err(|e| e.to_string())?;
        let want = expected_invariants(m);
        ensure(want == AbelianInvariants::free(2), || {
            format!("oracle for m={m} is {want}")
        })?;
        for p in [&res.presentation, &res.pipeline.presentation] {
            let got = abelianize(p);
            ensure(got == want, || {
                format!("m={m}: invariants {got}, expected {want}")
            })?;
        }
        check_bc_relators(&res)?;
    }
    Ok("m=1,2,3 give Z^2 with relators verified".into())
}

fn criterion_2() -> Outcome {
    let cfg = builders::loop_pendant();
    let res = pi1_bc(&cfg).map_err(|e| e.to_string())?;
    let want = expected_invariants(2);
    for (route, p) in [
        ("formula", &res.presentation),
        ("pipeline", &res.pipeline.presentation),
    ] {
        let s = tietze_simplify(p, TIETZE_BUDGET);
        ensure(s.gens.len() == 2, || {
            format!("{route} route simplifies to {s}")
        })?;
        let got = abelianize(&s);
        ensure(got == want, || {
            format!("{route} route: invariants {got}, expected {want}")
        })?;
    }
    check_bc_relators(&res)?;
    Ok(format!("both routes reduce to 2 generators with {want}"))
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut seen = BTreeSet::new();
    let mut tried = 0;
    while seen.len() < 24 {
        tried += 1;
        if tried > 100_000 {
            return Err(format!("only {} configurations generated", seen.len()));
        }
        let n = rng.gen_range(2..=10);
        let vs: Vec<usize> = (0..n).map(|_| rng.gen_range(0..4)).collect();
        let ps: Vec<usize> = (0..n).map(|_| rng.gen_range(0..5)).collect();
        let degs: Vec<usize> = (0..4).map(|_| rng.gen_range(1..=3)).collect();
        let Some(cfg) = builders::bc_from_labels(&vs, &ps, &degs) else {
            continue;
        };
        if !seen.insert(fbc::format::print_config(&cfg)) {
            continue;
        }
        let res = pi1_bc(&cfg).map_err(|e| format!("{}: {e}", fbc::format::print_config(&cfg)))?;
        let red = reduce_presentation(&cfg).map_err(|e| e.to_string())?;
        let q = &red.quiver;
        let quiver =
            abelianize(&pi1_quiver(q, &q.binomial_relations, 0).map_err(|e| e.to_string())?);
        ensure(quiver == res.invariants, || {
            format!(
                "{}: pi1_bc gives {}, quiver gives {quiver}",
                fbc::format::print_config(&cfg),
                res.invariants
            )
        })?;
    }
    Ok(format!(
        "{} random connected configurations agree",
        seen.len()
    ))
}

fn criterion_4() -> Outcome {
    let ok = load_cover(&corpus().join("example_covering.cover")).map_err(|e| e.to_string())?;
    let m = Morphism::new(&ok.domain, &ok.codomain, ok.map.clone());
    check_covering(&m).map_err(|e| format!("example covering rejected: {e}"))?;
    let bad =
        load_cover(&corpus().join("example_non_covering.cover")).map_err(|e| e.to_string())?;
    let m = Morphism::new(&bad.domain, &bad.codomain, bad.map.clone());
    check_morphism(&m).map_err(|e| format!("non-covering rejected as a morphism: {e}"))?;
    match check_covering(&m) {
        Ok(_) => Err("non-covering accepted as a covering".into()),
        Err(MorphismViolation::LayerNotBijective { e, image }) if e == "1" && image == "x" => {
            Ok("covering accepted; non-covering rejected with L(1) -> L(x)".into())
        }
        Err(v) => Err(format!("unexpected witness: {v}")),
    }
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut pairs = 0;
    let coverings = corpus_coverings()?;
    for c in &coverings {
        let m = Morphism::new(&c.dom, &c.cod, c.map.clone());
        let cert = check_covering(&m).map_err(|e| format!("{}: {e}", c.name))?;
        let ms = c.dom.is_ms() && c.cod.is_ms();
        let base = c.map[0];
        let fiber: Vec<Angle> = (0..c.dom.len()).filter(|&x| c.map[x] == base).collect();
        let mut prev: Option<(Walk, Walk)> = None;
        for _ in 0..500 {
            let len = rng.gen_range(0..=8);
            let w = random_walk(&c.cod, &mut rng, base, len);
            let start = fiber[rng.gen_range(0..fiber.len())];
            // uniqueness: exactly one domain step lies over each codomain step
            let mut cur = start;
            for (i, s) in w.steps().iter().enumerate() {
                let over: Vec<Angle> = match *s {
                    Step::Fwd => vec![c.dom.g(cur)],
                    Step::Bwd => vec![c.dom.g_inv(cur)],
                    Step::Tau(t) => c
                        .dom
                        .polygon(cur)
                        .iter()
                        .copied()
                        .filter(|&h| c.map[h] == t)
                        .collect(),
                };
                ensure(over.len() == 1, || {
                    format!("{}: {} lifts at step {i}", c.name, over.len())
                })?;
                cur = over[0];
            }
            let lift = lift_walk(&cert, &w, start).map_err(|e| format!("{}: {e}", c.name))?;
            ensure(lift.target() == cur && lift.source() == start, || {
                format!("{}: lift endpoints", c.name)
            })?;
            ensure(project_walk(&m, &lift) == w, || {
                format!("{}: projection of lift differs", c.name)
            })?;
            if !ms {
                continue;
            }
            let at = rng.gen_range(0..=w.len());
            let v = with_null_loop(&c.cod, &w, at, rng.gen_range(0..3));
            let mut others = vec![v];
            if let Some((pw, _)) = &prev {
                others.push(pw.clone());
            }
            for v in others {
                let lv = lift_walk(&cert, &v, start).map_err(|e| format!("{}: {e}", c.name))?;
                let down = homotopic(&c.cod, &w, &v, BUDGET);
                let up = homotopic(&c.dom, &lift, &lv, BUDGET);
                ensure(down == up, || {
                    format!("{}: homotopy {up:?} upstairs, {down:?} downstairs", c.name)
                })?;
                pairs += 1;
            }
            prev = Some((w, lift));
        }
    }
    Ok(format!(
        "{} coverings x 500 walks, {pairs} homotopy pairs",
        coverings.len()
    ))
}

fn criterion_6() -> Outcome {
    let mut walks = 0usize;
    let mut configs = 0;
    for (name, cfg) in corpus_configs()
        .into_iter()
        .filter(|(_, c)| c.is_ms() && c.is_connected())
    {
        configs += 1;
        let mut rep_checked: HashMap<MsNormalForm, ()> = HashMap::new();
        for w in fbc::walks::enumerate_closed_walks(&cfg, 0, 8) {
            walks += 1;
            let nf = normalize_ms(&cfg, &w).map_err(|e| e.to_string())?;
            let a_w = alpha(&cfg, &w).map_err(|e| e.to_string())?;
            let a_v = alpha(&cfg, &nf.special.to_walk(&cfg)).map_err(|e| e.to_string())?;
            ensure(Ratio::from_integer(nf.turns) == a_w - a_v, || {
                format!(
                    "{name}: {} has n={} but alpha difference {}",
                    w.display(&cfg),
                    nf.turns,
                    a_w - a_v
                )
            })?;
            if nf.special.is_trivial() {
                ensure(Ratio::from_integer(nf.turns) == a_w, || {
                    format!("{name}: n differs from alpha")
                })?;
            }
            if rep_checked.insert(nf.clone(), ()).is_none() {
                let rep = nf.representative(&cfg);
                let again = normalize_ms(&cfg, &rep).map_err(|e| e.to_string())?;
                ensure(again == nf, || {
                    format!(
                        "{name}: representative of {} renormalizes differently",
                        w.display(&cfg)
                    )
                })?;
            }
        }
        let zb = build_zb(&cfg, 0, 6).map_err(|e| e.to_string())?;
        zb.check_covering_interior(&cfg)
            .map_err(|e| format!("{name}: {e}"))?;
    }
    Ok(format!(
        "{configs} configurations, {walks} closed walks, ZB interior coverings at radius 6"
    ))
}

fn criterion_7() -> Outcome {
    let act = load_action(&corpus().join("rotation.action")).map_err(|e| e.to_string())?;
    let q = quotient(&act.config, &act.generators).map_err(|e| e.to_string())?;
    let m = Morphism::new(&act.config, &q.cfg, q.projection.clone());
    let cert = check_covering(&m).map_err(|e| format!("projection is not a covering: {e}"))?;
    ensure(is_regular(&cert).map_err(|e| e.to_string())?, || {
        "projection is not regular".into()
    })?;
    let mut deck = deck_group(&cert).map_err(|e| e.to_string())?;
    deck.sort();
    // the input group, closed under composition locally
    let n = act.config.len();
    let mut group: BTreeSet<Vec<Angle>> = BTreeSet::from([(0..n).collect()]);
    loop {
        let mut next = group.clone();
        for p in &group {
            for s in &act.generators {
                next.insert(p.iter().map(|&x| s[x]).collect());
            }
        }
        if next.len() == group.len() {
            break;
        }
        group = next;
    }
    let group: Vec<Vec<Angle>> = group.into_iter().collect();
    ensure(deck == group, || {
        format!(
            "deck group of order {} differs from the acting group of order {}",
            deck.len(),
            group.len()
        )
    })?;
    let fiber = q
        .projection
        .iter()
        .filter(|&&x| x == q.projection[0])
        .count();
    ensure(deck.len() == fiber, || {
        format!("|deck| = {} but fiber size {fiber}", deck.len())
    })?;
    Ok(format!(
        "regular, deck group equals the acting group, order {fiber}"
    ))
}

fn criterion_8() -> Outcome {
    let mut cases = Vec::new();
    for n in 1..=4 {
        for m in 1..=3 {
            cases.push((format!("path({n},{m})"), builders::brauer_path(n, m), n, m));
            cases.push((format!("star({n},{m})"), builders::brauer_star(n, m), n, m));
        }
    }
    let tree = load_config(&corpus().join("brauer_tree.fbc")).map_err(|e| e.to_string())?;
    let edges = tree.polygons().num_blocks();
    let m = (0..tree.orbits().num_blocks())
        .map(|v| tree.f_degree(v).to_integer() as usize)
        .max()
        .unwrap_or(1);
    cases.push(("brauer_tree.fbc".into(), tree, edges, m));
    for (name, cfg, n, m) in &cases {
        let b = build_b(cfg, 0, 4 * n * m + 4).map_err(|e| e.to_string())?;
        ensure(b.is_complete(cfg), || {
            format!("{name}: cover not complete within the radius")
        })?;
        ensure(b.num_polygons() == m * n, || {
            format!("{name}: {} edges, expected {}", b.num_polygons(), m * n)
        })?;
        let full = b
            .to_fbc(cfg)
            .ok_or_else(|| format!("{name}: complete cover is not a configuration"))?;
        ensure(
            full.polygons().blocks().iter().all(|p| p.len() == 2),
            || format!("{name}: non-edge polygon"),
        )?;
    }
    Ok(format!("{} Brauer trees give m*n edges", cases.len()))
}

fn criterion_9() -> Outcome {
    let mut pairs = 0usize;
    let mut used = Vec::new();
    let mut explored = 0;
    for (name, cfg) in corpus_configs()
        .into_iter()
        .filter(|(_, c)| c.is_ms() && c.len() <= 8)
    {
        let mut closure = RewriteClosure::new(&cfg, REWRITE_BOUND);
        let mut groups: HashMap<(Angle, Angle), Vec<(MsNormalForm, usize)>> = HashMap::new();
        for base in 0..cfg.len() {
            for len in 0..=6 {
                for w in fbc::walks::walks_of_length(&cfg, base, len) {
                    let nf = normalize_ms(&cfg, &w).map_err(|e| e.to_string())?;
                    let class = closure.class_of(&w);
                    groups
                        .entry((w.source(), w.target()))
                        .or_default()
                        .push((nf, class));
                }
            }
        }
        // the two labelings must induce the same partition in every endpoint group
        for ((s, t), members) in &groups {
            let mut nf_to_class: HashMap<&MsNormalForm, usize> = HashMap::new();
            let mut class_to_nf: HashMap<usize, &MsNormalForm> = HashMap::new();
            for (nf, class) in members {
                let a = *nf_to_class.entry(nf).or_insert(*class);
                let b = *class_to_nf.entry(*class).or_insert(nf);
                ensure(a == *class && b == nf, || {
                    format!(
                        "{name}: walks {} -> {} disagree",
                        cfg.name(*s),
                        cfg.name(*t)
                    )
                })?;
            }
            pairs += members.len() * (members.len() - 1) / 2;
        }
        explored += closure.component.len();
        used.push(name);
    }
    ensure(!used.is_empty(), || {
        "no MS configuration with at most 8 angles".into()
    })?;
    Ok(format!(
        "{} configurations ({}), {pairs} walk pairs, {explored} reduced words explored",
        used.len(),
        used.join(" ")
    ))
}

fn criterion_10() -> Outcome {
    let coverings = corpus_coverings()?;
    let mut checked = 0;
    for c in &coverings {
        if !c.cod.is_connected() {
            continue;
        }
        check_covering(&Morphism::new(&c.dom, &c.cod, c.map.clone()))
            .map_err(|e| format!("{}: {e}", c.name))?;
        let (a, b) = (c.dom.classify(), c.cod.classify());
        ensure(a == b, || {
            format!("{}: domain is {a}, codomain is {b}", c.name)
        })?;
        ensure(c.dom.axiom_violations().is_empty(), || {
            format!("{}: domain violates an axiom", c.name)
        })?;
        checked += 1;
    }
    Ok(format!("{checked} coverings preserve the classification"))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("loop BG presentations", criterion_1, Duration::from_secs(1)),
        (
            "loop with pendant edge, both routes",
            criterion_2,
            Duration::from_secs(1),
        ),
        (
            "cross-pipeline oracle",
            criterion_3,
            Duration::from_secs(30),
        ),
        ("covering verification", criterion_4, Duration::from_secs(1)),
        (
            "unique lifting and homotopy lifting",
            criterion_5,
            Duration::from_secs(10),
        ),
        ("ZB consistency", criterion_6, Duration::from_secs(10)),
        (
            "quotient and deck duality",
            criterion_7,
            Duration::from_secs(5),
        ),
        (
            "Brauer tree cover counts",
            criterion_8,
            Duration::from_secs(1),
        ),
        (
            "normal form vs rewrite oracle",
            criterion_9,
            Duration::from_secs(60),
        ),
        (
            "classification across coverings",
            criterion_10,
            Duration::from_secs(5),
        ),
    ];
    let mut failed = 0;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let result = run();
        let took = t.elapsed();
        let result = match result {
            Ok(msg) if took > *limit => {
                Err(format!("{msg}, but took {took:.2?} (limit {limit:?})"))
            }
            r => r,
        };
        match result {
            Ok(msg) => println!("PASS {:>2} {name}: {msg} ({took:.2?})", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {msg} ({took:.2?})", i + 1);
            }
        }
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
