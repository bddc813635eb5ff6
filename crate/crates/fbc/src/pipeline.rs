//! The Brauer configuration reduction pipeline: polygon splitting, angle removal,
//! admissible-union checks, the spanning-tree Brauer graph presentation and the
//! closed-form Brauer configuration presentation.

use crate::config::{
    sub_intersection, sub_union, Angle, Fbc, Partition, SubFbc, SubFbcError, Violation,
};
use crate::groups::{
    abelianize, certified_trivial, collapse, inverse, power, AbelianInvariants,
    GroupoidPresentation, Letter, Presentation, Word,
};
use crate::walks::{homotopic, Homotopy, Step, Walk, DEFAULT_BUDGET};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, VecDeque};
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum PipelineError {
    #[error("not a Brauer configuration: {0}")]
    NotBrauer(String),
    #[error("configuration is not connected")]
    Disconnected,
    #[error("polygon of {0} has fewer than two angles")]
    SmallPolygon(String),
    #[error("polygon of {0} is not a 2-gon")]
    NotTwoGon(String),
    #[error("removed set is not closed under the Nakayama automorphism at {0}")]
    NotSigmaClosed(String),
    #[error("removed angle {0} does not form a singleton polygon")]
    NotSingleton(String),
    #[error("removed set contains every angle")]
    RemovesEverything,
    #[error("angle index {0} is out of range")]
    OutOfRange(usize),
    #[error("walk endpoint {0} lies in the removed set")]
    EndpointRemoved(String),
    #[error("parts {0} and {1} intersect outside the family")]
    NotIntersectionClosed(usize, usize),
    #[error("the union of the parts is not the whole configuration")]
    UnionMismatch,
    #[error("sub-configuration error: {0}")]
    Sub(#[from] SubFbcError),
    #[error("constructed configuration is invalid: {0}")]
    Invalid(String),
    #[error("a decomposition is not an admissible union at polygon of {0}")]
    NotAdmissible(String),
    #[error("a component of part {0} misses the base angle set")]
    BaseMissesComponent(usize),
    #[error("relator {0} does not hold on walks")]
    RelatorUnsound(String),
    #[error("routes disagree: direct {direct}, pipeline {pipeline}")]
    RouteMismatch { direct: String, pipeline: String },
    #[error("trace replay mismatch at step {0}")]
    ReplayMismatch(usize),
}

fn invalid(errs: Vec<Violation>) -> PipelineError {
    PipelineError::Invalid(
        errs.iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join("; "),
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum StepKind {
    /// Polygons of size `l ≥ 3` split into `l − 1` edges.
    Split,
    /// Polygon and layer partitions made discrete.
    Discretize,
    /// Angles mapped to `None` removed.
    Remove,
}

/// One reduction with its angle map from input to output.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub kind: StepKind,
    pub input: Vec<String>,
    pub output: Vec<String>,
    pub map: Vec<Option<usize>>,
}

/// Ordered reductions applied by the pipeline.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionTrace {
    pub steps: Vec<TraceStep>,
}

impl ReductionTrace {
    /// The composite angle map from the first input to the last output.
    pub fn angle_map(&self) -> Vec<Option<usize>> {
        let Some(first) = self.steps.first() else {
            return Vec::new();
        };
        let mut map: Vec<Option<usize>> = (0..first.input.len()).map(Some).collect();
        for s in &self.steps {
            map = map.iter().map(|m| m.and_then(|i| s.map[i])).collect();
        }
        map
    }

    /// Re-applies every step to `cfg`, checking angle names along the way.
    pub fn replay(&self, cfg: &Fbc) -> Result<Fbc, PipelineError> {
        let mut cur = cfg.clone();
        for (i, s) in self.steps.iter().enumerate() {
            if cur.names() != s.input.as_slice() {
                return Err(PipelineError::ReplayMismatch(i));
            }
            cur = match s.kind {
                StepKind::Split => split_polygons(&cur)?.0,
                StepKind::Discretize => discretize(&cur)?,
                StepKind::Remove => {
                    let d: Vec<Angle> = (0..s.map.len()).filter(|&a| s.map[a].is_none()).collect();
                    remove_angles(&cur, &d)?.result
                }
            };
            if cur.names() != s.output.as_slice() {
                return Err(PipelineError::ReplayMismatch(i));
            }
        }
        Ok(cur)
    }

    /// One line per step: kind and angle counts.
    pub fn summary(&self) -> String {
        self.steps
            .iter()
            .map(|s| {
                format!(
                    "{:?}: {} -> {} angles",
                    s.kind,
                    s.input.len(),
                    s.output.len()
                )
            })
            .collect::<Vec<_>>()
            .join("\n")
    }
}

fn identity_step(kind: StepKind, from: &Fbc, to: &Fbc) -> TraceStep {
    TraceStep {
        kind,
        input: from.names().to_vec(),
        output: to.names().to_vec(),
        map: (0..from.len()).map(Some).collect(),
    }
}

/// Checks the Brauer configuration preconditions shared by the pipeline.
fn require_bc(cfg: &Fbc) -> Result<(), PipelineError> {
    for b in cfg.polygons().blocks() {
        if b.len() < 2 {
            return Err(PipelineError::SmallPolygon(cfg.name(b[0]).to_string()));
        }
    }
    if !cfg.is_ms() {
        return Err(PipelineError::NotBrauer("layers are not trivial".into()));
    }
    for v in 0..cfg.orbits().num_blocks() {
        if !cfg.f_degree(v).is_integer() {
            let e = cfg.cycle(v)[0];
            return Err(PipelineError::NotBrauer(format!(
                "vertex of {} has f-degree {}",
                cfg.name(e),
                cfg.f_degree(v)
            )));
        }
    }
    Ok(())
}

/// The same configuration with discrete polygon and layer partitions.
pub fn discretize(cfg: &Fbc) -> Result<Fbc, PipelineError> {
    let n = cfg.len();
    cfg.with_partitions(Partition::discrete(n), Partition::discrete(n))
        .map_err(invalid)
}

fn fresh_name(names: &[String], base: &str) -> String {
    let mut s = format!("{base}'");
    while names.contains(&s) {
        s.push('\'');
    }
    s
}

/// Splits each `l`-gon `{e₁ < ⋯ < e_l}` (`l ≥ 3`) into the edges
/// `{e₁,e₂}, {e₂′,e₃}, …, {e′_{l−1},e_l}`.
///
/// The inserted angle `e_i′` follows `e_i` in its cycle; it is appended after the original
/// angles, so original indices are kept. Degrees scale with orbit growth.
pub fn split_polygons(bc: &Fbc) -> Result<(Fbc, ReductionTrace), PipelineError> {
    require_bc(bc)?;
    let mut names = bc.names().to_vec();
    let mut g: Vec<usize> = (0..bc.len()).map(|e| bc.g(e)).collect();
    let mut origin: Vec<Angle> = (0..bc.len()).collect();
    let mut polys: Vec<Vec<usize>> = Vec::new();
    for b in bc.polygons().blocks() {
        let l = b.len();
        if l == 2 {
            polys.push(b.clone());
            continue;
        }
        polys.push(vec![b[0], b[1]]);
        for i in 1..l - 1 {
            let e = b[i];
            let new = names.len();
            names.push(fresh_name(&names, bc.name(e)));
            g.push(g[e]);
            g[e] = new;
            origin.push(e);
            polys.push(vec![new, b[i + 1]]);
        }
    }
    let n = names.len();
    // orbit sizes in the split configuration
    let mut csize = vec![0usize; n];
    for start in 0..n {
        let mut len = 1;
        let mut x = g[start];
        while x != start {
            len += 1;
            x = g[x];
        }
        csize[start] = len;
    }
    let degree: Vec<usize> = (0..n)
        .map(|x| {
            let e = origin[x];
            bc.degree(e) * csize[x] / bc.orbit_size(e)
        })
        .collect();
    let poly =
        Partition::from_blocks(n, polys).map_err(|e| PipelineError::Invalid(format!("{e:?}")))?;
    let c = Fbc::from_parts(names, g, poly, Partition::discrete(n), degree).map_err(invalid)?;
    let step = TraceStep {
        kind: StepKind::Split,
        input: bc.names().to_vec(),
        output: c.names().to_vec(),
        map: (0..bc.len()).map(Some).collect(),
    };
    Ok((c, ReductionTrace { steps: vec![step] }))
}

/// The result of removing a set of angles, with the walk transport maps.
#[derive(Clone, Debug)]
pub struct Removal {
    pub parent: Fbc,
    pub result: Fbc,
    /// Parent angle to result angle.
    pub embed: Vec<Option<Angle>>,
    /// Result angle to parent angle.
    pub back: Vec<Angle>,
}

impl Removal {
    fn removed(&self, e: Angle) -> bool {
        self.embed[e].is_none()
    }

    /// Least `N ≥ 1` with `g^{±N}·e` kept.
    fn skip(&self, e: Angle, dir: i64) -> usize {
        let mut n = 1;
        while self.removed(self.parent.g_pow(e, dir * n as i64)) {
            n += 1;
        }
        n
    }

    /// `f`: a walk of the result as a parent walk, each step expanded over skipped angles.
    pub fn f(&self, w: &Walk) -> Walk {
        let p = &self.parent;
        let mut out = Walk::trivial(self.back[w.source()]);
        for (i, s) in w.steps().iter().enumerate() {
            let here = self.back[w.path()[i]];
            match *s {
                Step::Fwd => {
                    for _ in 0..self.skip(here, 1) {
                        out.push(p, Step::Fwd).expect("g-step");
                    }
                }
                Step::Bwd => {
                    for _ in 0..self.skip(here, -1) {
                        out.push(p, Step::Bwd).expect("g-step");
                    }
                }
                Step::Tau(t) => out.push(p, Step::Tau(self.back[t])).expect("same polygon"),
            }
        }
        out
    }

    /// `φ`: a parent walk with kept endpoints, each excursion through removed angles
    /// collapsed to one step by its net turning.
    pub fn phi(&self, w: &Walk) -> Result<Walk, PipelineError> {
        let p = &self.parent;
        for e in [w.source(), w.target()] {
            if self.removed(e) {
                return Err(PipelineError::EndpointRemoved(p.name(e).to_string()));
            }
        }
        let mut out = Walk::trivial(self.embed[w.source()].expect("kept"));
        let mut net = 0i64;
        for (i, s) in w.steps().iter().enumerate() {
            let here = w.path()[i];
            let next = w.path()[i + 1];
            match *s {
                Step::Fwd => net += 1,
                Step::Bwd => net -= 1,
                Step::Tau(t) => {
                    if self.removed(here) {
                        // singleton polygon: the jump stays put
                        continue;
                    }
                    let t = self.embed[t].expect("polygon mates of kept angles are kept");
                    out.push(&self.result, Step::Tau(t))
                        .map_err(|e| PipelineError::Invalid(e.to_string()))?;
                    continue;
                }
            }
            if !self.removed(next) {
                let step = match net.signum() {
                    1 => Some(Step::Fwd),
                    -1 => Some(Step::Bwd),
                    _ => None,
                };
                if let Some(st) = step {
                    out.push(&self.result, st).expect("g-step");
                }
                net = 0;
            }
        }
        debug_assert_eq!(Some(out.target()), self.embed[w.target()]);
        Ok(out)
    }
}

/// Removes `d` from `cfg`: `g′` skips removed angles and
/// `d′(h) = d(h) − #{1 ≤ i ≤ d(h) − 1 : gⁱ·h ∈ D}`.
pub fn remove_angles(cfg: &Fbc, d: &[Angle]) -> Result<Removal, PipelineError> {
    let n = cfg.len();
    let mut del = vec![false; n];
    for &e in d {
        if e >= n {
            return Err(PipelineError::OutOfRange(e));
        }
        del[e] = true;
    }
    for &e in d {
        if !del[cfg.sigma(e)] || !del[cfg.sigma_inv(e)] {
            return Err(PipelineError::NotSigmaClosed(cfg.name(e).to_string()));
        }
        if cfg.polygon(e).len() != 1 {
            return Err(PipelineError::NotSingleton(cfg.name(e).to_string()));
        }
    }
    let back: Vec<Angle> = (0..n).filter(|&e| !del[e]).collect();
    if back.is_empty() {
        return Err(PipelineError::RemovesEverything);
    }
    let mut embed = vec![None; n];
    for (i, &e) in back.iter().enumerate() {
        embed[e] = Some(i);
    }
    let names = back.iter().map(|&e| cfg.name(e).to_string()).collect();
    let g = back
        .iter()
        .map(|&e| {
            let mut x = cfg.g(e);
            while del[x] {
                x = cfg.g(x);
            }
            embed[x].expect("kept")
        })
        .collect();
    let degree = back
        .iter()
        .map(|&e| {
            let de = cfg.degree(e);
            de - (1..de).filter(|&i| del[cfg.g_pow(e, i as i64)]).count()
        })
        .collect();
    let restrict = |p: &Partition| {
        Partition::from_blocks_unchecked(
            back.len(),
            p.blocks()
                .iter()
                .filter(|b| !del[b[0]])
                .map(|b| b.iter().map(|&x| embed[x].expect("kept")).collect())
                .collect(),
        )
    };
    let result = Fbc::from_parts(
        names,
        g,
        restrict(cfg.polygons()),
        restrict(cfg.layers()),
        degree,
    )
    .map_err(invalid)?;
    Ok(Removal {
        parent: cfg.clone(),
        result,
        embed,
        back,
    })
}

/// The complex `K_e` on one polygon and its edge-path group.
#[derive(Clone, Debug)]
pub struct PolygonComplex {
    pub polygon: Vec<Angle>,
    /// Distinct generating simplices, sorted.
    pub simplices: Vec<Vec<Angle>>,
    pub connected: bool,
    /// Edge-path group at the least angle; `None` when disconnected.
    pub group: Option<Presentation>,
    pub simply_connected: bool,
}

#[derive(Clone, Debug)]
pub struct AdmissibleReport {
    pub complexes: Vec<PolygonComplex>,
}

impl AdmissibleReport {
    pub fn admissible(&self) -> bool {
        self.complexes.iter().all(|c| c.simply_connected)
    }

    /// The first polygon whose complex is not simply connected.
    pub fn failure(&self) -> Option<&PolygonComplex> {
        self.complexes.iter().find(|c| !c.simply_connected)
    }
}

type Canon = (Vec<Angle>, Vec<Vec<Angle>>, Vec<Vec<Angle>>);

fn canon(s: &SubFbc) -> Canon {
    let sorted = |bs: &[Vec<Angle>]| {
        let mut v: Vec<Vec<Angle>> = bs
            .iter()
            .map(|b| {
                let mut b = b.clone();
                b.sort_unstable();
                b
            })
            .collect();
        v.sort();
        v
    };
    (
        s.angles().to_vec(),
        sorted(s.polygons()),
        sorted(s.layers()),
    )
}

fn subsets(s: &[Angle], k: usize) -> Vec<Vec<Angle>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if s.len() < k {
        return Vec::new();
    }
    let mut out: Vec<Vec<Angle>> = subsets(&s[1..], k - 1)
        .into_iter()
        .map(|mut t| {
            t.insert(0, s[0]);
            t
        })
        .collect();
    out.extend(subsets(&s[1..], k));
    out
}

/// Builds `K_e` from its generating simplices and decides simple connectivity via the
/// edge-path group: spanning tree of the 1-skeleton plus one relator per 2-simplex.
pub fn polygon_complex(cfg: &Fbc, polygon: &[Angle], simplices: Vec<Vec<Angle>>) -> PolygonComplex {
    let mut edges: Vec<Vec<Angle>> = simplices.iter().flat_map(|s| subsets(s, 2)).collect();
    edges.sort();
    edges.dedup();
    let mut tris: Vec<Vec<Angle>> = simplices.iter().flat_map(|s| subsets(s, 3)).collect();
    tris.sort();
    tris.dedup();
    let local = |a: Angle| polygon.iter().position(|&x| x == a).expect("in polygon");
    let edge_id: BTreeMap<(Angle, Angle), usize> = edges
        .iter()
        .enumerate()
        .map(|(i, e)| ((e[0], e[1]), i))
        .collect();
    let gp = GroupoidPresentation {
        objects: polygon.iter().map(|&a| cfg.name(a).to_string()).collect(),
        arrows: edges
            .iter()
            .enumerate()
            .map(|(i, e)| (format!("s{i}"), local(e[0]), local(e[1])))
            .collect(),
        rels: tris
            .iter()
            .map(|t| {
                let l = |a, b| Letter::new(edge_id[&(a, b)]);
                (vec![l(t[0], t[1]), l(t[1], t[2])], vec![l(t[0], t[2])])
            })
            .collect(),
    };
    let group = collapse(&gp, 0).ok().map(|c| c.presentation);
    let connected = group.is_some();
    let simply_connected = group.as_ref().is_some_and(certified_trivial);
    PolygonComplex {
        polygon: polygon.to_vec(),
        simplices,
        connected,
        group,
        simply_connected,
    }
}

/// Verifies that `cfg` is the union of `parts` (closed under pairwise intersection) and
/// reports the complex `K_e` of every polygon.
pub fn check_admissible_union(
    cfg: &Fbc,
    parts: &[SubFbc],
) -> Result<AdmissibleReport, PipelineError> {
    if canon(&sub_union(cfg, parts)?) != canon(&SubFbc::full(cfg)) {
        return Err(PipelineError::UnionMismatch);
    }
    let family: Vec<Canon> = parts.iter().map(canon).collect();
    for i in 0..parts.len() {
        for j in i + 1..parts.len() {
            let common = parts[i].angles().iter().any(|&a| parts[j].contains(a));
            if !common {
                continue;
            }
            let meet = sub_intersection(cfg, &[parts[i].clone(), parts[j].clone()])
                .map_err(|_| PipelineError::NotIntersectionClosed(i, j))?;
            if !family.contains(&canon(&meet)) {
                return Err(PipelineError::NotIntersectionClosed(i, j));
            }
        }
    }
    let complexes = cfg
        .polygons()
        .blocks()
        .iter()
        .map(|poly| {
            let mut simplices: Vec<Vec<Angle>> = parts
                .iter()
                .flat_map(|p| p.polygons().iter())
                .filter(|b| b.iter().any(|x| poly.contains(x)))
                .map(|b| {
                    let mut b = b.clone();
                    b.sort_unstable();
                    b
                })
                .collect();
            simplices.sort();
            simplices.dedup();
            polygon_complex(cfg, poly, simplices)
        })
        .collect();
    Ok(AdmissibleReport { complexes })
}

/// The decomposition of a Brauer graph into one part per edge plus the discrete part.
pub fn edge_decomposition(cfg: &Fbc) -> Result<Vec<SubFbc>, PipelineError> {
    let mut parts = Vec::new();
    for b in cfg.polygons().blocks() {
        parts.push(SubFbc::with_polygons(cfg, std::slice::from_ref(b))?);
    }
    parts.push(SubFbc::with_polygons(cfg, &[])?);
    Ok(parts)
}

/// The decomposition of a Brauer configuration into consecutive pairs `{e_i, e_{i+1}}` of
/// each polygon plus the discrete part.
pub fn chain_decomposition(cfg: &Fbc) -> Result<Vec<SubFbc>, PipelineError> {
    let mut parts = Vec::new();
    for b in cfg.polygons().blocks() {
        for w in b.windows(2) {
            parts.push(SubFbc::with_polygons(cfg, &[w.to_vec()])?);
        }
    }
    parts.push(SubFbc::with_polygons(cfg, &[])?);
    Ok(parts)
}

/// A Brauer graph presentation with its walk dictionary.
#[derive(Clone, Debug)]
pub struct BgPresentation {
    pub presentation: Presentation,
    /// Base angle `h₁`: the least angle of the first vertex.
    pub base: Angle,
    /// Closed walk at `base` of each generator.
    pub dictionary: Vec<Walk>,
    /// Relators as equations between words.
    pub equations: Vec<(Word, Word)>,
    /// Per polygon: whether its edge is in the spanning tree.
    pub tree: Vec<bool>,
}

impl BgPresentation {
    /// The walk of a word: letters in traversal order.
    pub fn walk_of(&self, w: &[Letter]) -> Walk {
        let mut acc = Walk::trivial(self.base);
        for l in w {
            let piece = &self.dictionary[l.gen];
            let piece = if l.inv { piece.invert() } else { piece.clone() };
            acc = Walk::compose(&piece, &acc).expect("closed at base");
        }
        acc
    }
}

fn edge_walk(cfg: &Fbc, x: Angle, y: Angle) -> Walk {
    let vx = cfg.orbits().block_of(x);
    let vy = cfg.orbits().block_of(y);
    let hx = cfg.cycle(vx)[0];
    let px = cfg
        .cycle(vx)
        .iter()
        .position(|&a| a == x)
        .expect("in cycle") as i64;
    let py = cfg
        .cycle(vy)
        .iter()
        .position(|&a| a == y)
        .expect("in cycle") as i64;
    let mut w = Walk::turn(cfg, hx, px);
    w.push(cfg, Step::Tau(y)).expect("same polygon");
    Walk::compose(&Walk::turn(cfg, y, -py), &w).expect("chained")
}

fn gen_names(n: usize, r: usize) -> Vec<String> {
    (1..=n)
        .map(|i| format!("a{i}"))
        .chain((1..=r).map(|j| format!("b{j}")))
        .collect()
}

/// `F⟨a₁…a_n, b₁…b_r⟩ / ⟨a₁^{d₁} = a_l^{d_l}, a₁^{d₁} b_j = b_j a₁^{d₁}⟩` as equations.
fn closed_form_equations(degrees: &[usize], r: usize) -> Vec<(Word, Word)> {
    let n = degrees.len();
    let z = power(0, degrees[0] as i64);
    let mut eqs: Vec<(Word, Word)> = (1..n)
        .map(|l| (z.clone(), power(l, degrees[l] as i64)))
        .collect();
    for j in 0..r {
        let b = vec![Letter::new(n + j)];
        eqs.push(([z.clone(), b.clone()].concat(), [b, z.clone()].concat()));
    }
    eqs
}

fn presentation_of(gens: Vec<String>, eqs: &[(Word, Word)]) -> Presentation {
    let rels = eqs
        .iter()
        .map(|(u, v)| [u.clone(), inverse(v)].concat())
        .collect();
    Presentation::new(gens, rels)
}

fn f_degrees(cfg: &Fbc) -> Vec<usize> {
    (0..cfg.orbits().num_blocks())
        .map(|v| *cfg.f_degree(v).numer() as usize / *cfg.f_degree(v).denom() as usize)
        .collect()
}

/// Fundamental group of a connected Brauer graph via the spanning-tree construction.
///
/// The tree is a BFS from the least vertex with edges in polygon order. Every relator is
/// checked on walks with the exact type-MS homotopy test.
pub fn pi1_bg(bg: &Fbc) -> Result<BgPresentation, PipelineError> {
    require_bc(bg)?;
    if !bg.is_connected() {
        return Err(PipelineError::Disconnected);
    }
    for b in bg.polygons().blocks() {
        if b.len() != 2 {
            return Err(PipelineError::NotTwoGon(bg.name(b[0]).to_string()));
        }
    }
    let n = bg.orbits().num_blocks();
    let edges = bg.polygons().blocks();
    // orient each edge from the lower vertex
    let ends: Vec<(Angle, Angle)> = edges
        .iter()
        .map(|b| {
            let (x, y) = (b[0], b[1]);
            if bg.orbits().block_of(x) <= bg.orbits().block_of(y) {
                (x, y)
            } else {
                (y, x)
            }
        })
        .collect();
    let vert = |a: Angle| bg.orbits().block_of(a);
    let head = |v: usize| bg.cycle(v)[0];
    let mut path_to: Vec<Option<Walk>> = vec![None; n];
    path_to[0] = Some(Walk::trivial(head(0)));
    let mut tree = vec![false; edges.len()];
    let mut queue = VecDeque::from([0usize]);
    while let Some(v) = queue.pop_front() {
        for (i, &(x, y)) in ends.iter().enumerate() {
            let (p, q) = (vert(x), vert(y));
            let here = path_to[v].clone().expect("reached");
            if p == v && path_to[q].is_none() {
                path_to[q] = Some(Walk::compose(&edge_walk(bg, x, y), &here).expect("chained"));
            } else if q == v && path_to[p].is_none() {
                path_to[p] =
                    Some(Walk::compose(&edge_walk(bg, x, y).invert(), &here).expect("chained"));
            } else {
                continue;
            }
            tree[i] = true;
            queue.push_back(if p == v { q } else { p });
        }
    }
    let w: Vec<Walk> = path_to.into_iter().map(|p| p.expect("connected")).collect();
    let conj = |l: usize, loop_: &Walk| {
        Walk::compose(
            &w[l].invert(),
            &Walk::compose(loop_, &w[l]).expect("chained"),
        )
        .expect("chained")
    };
    let mut dictionary: Vec<Walk> = (0..n)
        .map(|l| conj(l, &Walk::turn(bg, head(l), bg.cycle(l).len() as i64)))
        .collect();
    for (i, &(x, y)) in ends.iter().enumerate() {
        if !tree[i] {
            let (p, q) = (vert(x), vert(y));
            let g = Walk::compose(&edge_walk(bg, x, y), &w[p]).expect("chained");
            dictionary.push(Walk::compose(&w[q].invert(), &g).expect("chained"));
        }
    }
    let r = dictionary.len() - n;
    let equations = closed_form_equations(&f_degrees(bg), r);
    let presentation = presentation_of(gen_names(n, r), &equations);
    let out = BgPresentation {
        presentation,
        base: head(0),
        dictionary,
        equations,
        tree,
    };
    verify_relators(bg, &out)?;
    Ok(out)
}

/// Each equation `u = v` becomes a pair of walks at the base; both must be homotopic.
pub fn verify_relators(cfg: &Fbc, p: &BgPresentation) -> Result<(), PipelineError> {
    for (u, v) in &p.equations {
        if homotopic(cfg, &p.walk_of(u), &p.walk_of(v), DEFAULT_BUDGET) != Homotopy::Yes {
            let rel = [u.clone(), inverse(v)].concat();
            return Err(PipelineError::RelatorUnsound(
                p.presentation.word_to_string(&rel),
            ));
        }
    }
    Ok(())
}

/// Edge count `Σ_{l≥2} (l − 1)·k_l` of the split configuration.
pub fn split_edge_count(bc: &Fbc) -> usize {
    bc.polygons().blocks().iter().map(|b| b.len() - 1).sum()
}

/// The closed form `F⟨a₁…a_n, b₁…b_r⟩ / ⟨a_i^{d_i} all equal, central⟩` with
/// `r = Σ(l − 1)k_l − n + 1`.
pub fn pi1_bc_formula(bc: &Fbc) -> Result<Presentation, PipelineError> {
    require_bc(bc)?;
    if !bc.is_connected() {
        return Err(PipelineError::Disconnected);
    }
    let n = bc.orbits().num_blocks();
    let r = split_edge_count(bc) + 1 - n;
    Ok(presentation_of(
        gen_names(n, r),
        &closed_form_equations(&f_degrees(bc), r),
    ))
}

/// Both routes for a connected Brauer configuration.
#[derive(Clone, Debug)]
pub struct BcResult {
    /// The closed-form presentation.
    pub presentation: Presentation,
    /// The split plus spanning-tree presentation, with its walk dictionary on the split graph.
    pub pipeline: BgPresentation,
    pub split: Fbc,
    pub trace: ReductionTrace,
    pub invariants: AbelianInvariants,
}

fn require_admissible(cfg: &Fbc, parts: &[SubFbc]) -> Result<(), PipelineError> {
    let report = check_admissible_union(cfg, parts)?;
    if let Some(c) = report.failure() {
        return Err(PipelineError::NotAdmissible(
            cfg.name(c.polygon[0]).to_string(),
        ));
    }
    Ok(())
}

/// Van Kampen needs the base set to meet every component of every part.
fn require_base_meets(cfg: &Fbc, parts: &[SubFbc], base: &[bool]) -> Result<(), PipelineError> {
    for (i, p) in parts.iter().enumerate() {
        let local = p.to_fbc(cfg)?;
        let comps = local.components();
        for b in comps.blocks() {
            if !b.iter().any(|&x| base[p.angles()[x]]) {
                return Err(PipelineError::BaseMissesComponent(i));
            }
        }
    }
    Ok(())
}

/// Fundamental group of a connected Brauer configuration along both routes.
///
/// The pipeline route splits polygons, checks both decompositions are admissible unions
/// with base set `E`, records the removal of the inserted angles, and applies [`pi1_bg`].
/// Abelian invariants of the two routes must agree.
pub fn pi1_bc(bc: &Fbc) -> Result<BcResult, PipelineError> {
    let presentation = pi1_bc_formula(bc)?;
    let (c, mut trace) = split_polygons(bc)?;
    let base: Vec<bool> = (0..c.len()).map(|x| x < bc.len()).collect();
    let c_parts = edge_decomposition(&c)?;
    require_admissible(&c, &c_parts)?;
    require_base_meets(&c, &c_parts, &base)?;
    let e_parts = chain_decomposition(bc)?;
    require_admissible(bc, &e_parts)?;
    let c_disc = discretize(&c)?;
    trace
        .steps
        .push(identity_step(StepKind::Discretize, &c, &c_disc));
    let inserted: Vec<Angle> = (bc.len()..c.len()).collect();
    let removal = remove_angles(&c_disc, &inserted)?;
    if removal.result != discretize(bc)? {
        return Err(PipelineError::Invalid(
            "removing inserted angles does not restore the configuration".into(),
        ));
    }
    trace.steps.push(TraceStep {
        kind: StepKind::Remove,
        input: c_disc.names().to_vec(),
        output: removal.result.names().to_vec(),
        map: removal.embed.clone(),
    });
    let pipeline = pi1_bg(&c)?;
    let invariants = abelianize(&presentation);
    let other = abelianize(&pipeline.presentation);
    if invariants != other {
        return Err(PipelineError::RouteMismatch {
            direct: invariants.to_string(),
            pipeline: other.to_string(),
        });
    }
    Ok(BcResult {
        presentation,
        pipeline,
        split: c,
        trace,
        invariants,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders;
    use crate::groups::tietze_simplify;
    use crate::quiver::{pi1_quiver, quiver_of, reduce_presentation};
    use crate::walks::{normalize_ms, walks_of_length};
    use proptest::prelude::*;

    fn pres(s: &str) -> Presentation {
        Presentation::parse(s).unwrap()
    }

    #[test]
    fn two_gons_split_to_themselves() {
        let e = builders::loop_pendant();
        let (c, trace) = split_polygons(&e).unwrap();
        assert_eq!(c, e);
        assert_eq!(
            trace.angle_map(),
            (0..e.len()).map(Some).collect::<Vec<_>>()
        );
    }

    #[test]
    fn triangle_splits_into_two_edges() {
        let e = builders::triangle();
        let (c, _) = split_polygons(&e).unwrap();
        assert_eq!(c.polygons().num_blocks(), 2);
        assert_eq!(c.orbits().num_blocks(), 3);
        for v in 0..3 {
            assert_eq!(c.f_degree(v), e.f_degree(v));
        }
        assert!(c.polygons().blocks().iter().all(|b| b.len() == 2));
    }

    #[test]
    fn small_polygons_are_rejected() {
        let e = builders::build(&["x"], &[], &[&["x"]], None, &[("x", 1)]);
        assert!(matches!(
            split_polygons(&e),
            Err(PipelineError::SmallPolygon(_))
        ));
    }

    #[test]
    fn empty_removal_is_identity() {
        let e = builders::three_edges();
        let r = remove_angles(&e, &[]).unwrap();
        assert_eq!(r.result, e);
    }

    #[test]
    fn removal_preconditions_have_witnesses() {
        let e = builders::one_edge();
        assert!(matches!(
            remove_angles(&e, &[0]),
            Err(PipelineError::NotSingleton(_))
        ));
        let d = discretize(&e).unwrap();
        assert!(matches!(
            remove_angles(&d, &[0, 1]),
            Err(PipelineError::RemovesEverything)
        ));
        let h = builders::build(
            &["a", "b"],
            &[&["a", "b"]],
            &[&["a"], &["b"]],
            None,
            &[("a", 1)],
        );
        assert!(matches!(
            remove_angles(&h, &[0]),
            Err(PipelineError::NotSigmaClosed(_))
        ));
    }

    #[test]
    fn removing_inserted_angles_restores_degrees() {
        for e in [builders::triangle(), square_bc()] {
            let (c, _) = split_polygons(&e).unwrap();
            let c = discretize(&c).unwrap();
            let inserted: Vec<Angle> = (e.len()..c.len()).collect();
            for &x in &inserted {
                assert!(c.orbit_size(x) > e.orbit_size(c.g_inv(x)));
            }
            let r = remove_angles(&c, &inserted).unwrap();
            let ed = discretize(&e).unwrap();
            assert_eq!(r.result, ed);
            for x in 0..e.len() {
                assert_eq!(r.result.orbit_size(x), e.orbit_size(x));
                assert_eq!(r.result.degree(x), e.degree(x));
            }
        }
    }

    /// A 4-gon on two vertices, f-degrees 1 and 2.
    fn square_bc() -> Fbc {
        let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
        builders::brauer(
            &[(s(&["p", "q", "r"]), 1), (s(&["t"]), 2)],
            &[s(&["p", "q", "r", "t"])],
        )
    }

    #[test]
    fn transport_round_trip() {
        let e = square_bc();
        let (c, _) = split_polygons(&e).unwrap();
        let c = discretize(&c).unwrap();
        let inserted: Vec<Angle> = (e.len()..c.len()).collect();
        let r = remove_angles(&c, &inserted).unwrap();
        for base in 0..r.result.len() {
            for len in 0..=4 {
                for w in walks_of_length(&r.result, base, len) {
                    let fw = r.f(&w);
                    assert_eq!(r.phi(&fw).unwrap(), w);
                }
            }
        }
        // walks of the parent with kept endpoints come back up to homotopy
        for len in 0..=5 {
            for w in walks_of_length(&c, 0, len) {
                if r.embed[w.target()].is_some() {
                    let back = r.f(&r.phi(&w).unwrap());
                    assert_eq!(homotopic(&c, &back, &w, DEFAULT_BUDGET), Homotopy::Yes);
                }
            }
        }
    }

    #[test]
    fn edge_decomposition_of_a_graph_is_admissible() {
        let e = builders::loop_pendant();
        let report = check_admissible_union(&e, &edge_decomposition(&e).unwrap()).unwrap();
        assert!(report.admissible());
        assert!(report.complexes.iter().all(|c| c.simplices.len() <= 3));
    }

    #[test]
    fn chain_decomposition_is_admissible() {
        let e = square_bc();
        let report = check_admissible_union(&e, &chain_decomposition(&e).unwrap()).unwrap();
        assert!(report.admissible());
        let k = &report.complexes[0];
        assert_eq!(k.simplices.iter().filter(|s| s.len() == 2).count(), 3);
    }

    #[test]
    fn cycle_complex_is_not_simply_connected() {
        let e = builders::triangle();
        let (a, b, c) = (0, 1, 2);
        let mut parts: Vec<SubFbc> = [[a, b], [b, c], [a, c]]
            .iter()
            .map(|p| SubFbc::with_polygons(&e, &[p.to_vec()]).unwrap())
            .collect();
        parts.push(SubFbc::with_polygons(&e, &[]).unwrap());
        let report = check_admissible_union(&e, &parts).unwrap();
        assert!(!report.admissible());
        let k = report.failure().unwrap();
        assert!(k.connected);
        assert_eq!(
            abelianize(k.group.as_ref().unwrap()),
            AbelianInvariants::free(1)
        );
    }

    #[test]
    fn family_errors_are_reported() {
        let e = builders::loop_pendant();
        let parts = edge_decomposition(&e).unwrap();
        // without the discrete part two edge parts meet outside the family
        let r = check_admissible_union(&e, &parts[..2]);
        assert_eq!(r.unwrap_err(), PipelineError::NotIntersectionClosed(0, 1));
        let r = check_admissible_union(&e, &parts[1..]);
        assert_eq!(r.unwrap_err(), PipelineError::UnionMismatch);
    }

    #[test]
    fn loop_graph_gives_central_power() {
        for m in 1..=3 {
            let p = pi1_bg(&builders::loop_bg(m)).unwrap();
            let x = "a1 ".repeat(m);
            let xi = "A1 ".repeat(m);
            assert_eq!(
                p.presentation,
                pres(&format!("gens: a1 b1; rels: {x}b1 {xi}B1"))
            );
            assert_eq!(abelianize(&p.presentation), AbelianInvariants::free(2));
        }
    }

    #[test]
    fn single_edge_gives_amalgam() {
        let p = pi1_bg(&builders::single_edge(2, 3)).unwrap();
        assert_eq!(p.presentation, pres("gens: a1 a2; rels: a1 a1 A2 A2 A2"));
        assert_eq!(abelianize(&p.presentation), AbelianInvariants::free(1));
    }

    #[test]
    fn loop_pendant_matches_the_example() {
        let res = pi1_bc(&builders::loop_pendant()).unwrap();
        let target = abelianize(&pres("gens: x y; rels: x x y X X Y"));
        assert_eq!(res.invariants, target);
        for p in [&res.presentation, &res.pipeline.presentation] {
            let t = tietze_simplify(p, 8);
            assert_eq!(t.gens.len(), 2);
            assert_eq!(abelianize(&t), target);
        }
    }

    #[test]
    fn trees_and_triangles_give_z() {
        for e in [
            builders::brauer_path(3, 1),
            builders::brauer_star(3, 1),
            builders::triangle(),
        ] {
            let res = pi1_bc(&e).unwrap();
            assert_eq!(res.invariants, AbelianInvariants::free(1));
            assert_eq!(
                res.presentation
                    .gens
                    .iter()
                    .filter(|g| g.starts_with('b'))
                    .count(),
                0
            );
        }
    }

    #[test]
    fn relators_hold_on_walks() {
        let p = pi1_bg(&builders::loop_pendant()).unwrap();
        for w in &p.dictionary {
            assert!(w.is_closed());
            assert_eq!(w.source(), p.base);
        }
        for (u, v) in &p.equations {
            let a = normalize_ms(&builders::loop_pendant(), &p.walk_of(u)).unwrap();
            let b = normalize_ms(&builders::loop_pendant(), &p.walk_of(v)).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn trace_replays_and_composes() {
        let e = square_bc();
        let res = pi1_bc(&e).unwrap();
        assert_eq!(res.trace.steps.len(), 3);
        assert_eq!(res.trace.replay(&e).unwrap(), discretize(&e).unwrap());
        assert_eq!(
            res.trace.angle_map(),
            (0..e.len()).map(Some).collect::<Vec<_>>()
        );
        let json = serde_json::to_string(&res.trace).unwrap();
        let back: ReductionTrace = serde_json::from_str(&json).unwrap();
        assert_eq!(back, res.trace);
    }

    fn quiver_invariants(e: &Fbc) -> AbelianInvariants {
        let red = reduce_presentation(e).unwrap();
        let q = &red.quiver;
        abelianize(&pi1_quiver(q, &q.binomial_relations, 0).unwrap())
    }

    #[test]
    fn quiver_route_agrees_on_examples() {
        for e in [
            builders::loop_bg(2),
            builders::loop_pendant(),
            builders::single_edge(2, 3),
            builders::triangle(),
            square_bc(),
            builders::brauer_path(3, 2),
        ] {
            let res = pi1_bc(&e).unwrap();
            assert_eq!(quiver_invariants(&e), res.invariants);
            let full = quiver_of(&e);
            assert_eq!(
                abelianize(&pi1_quiver(&full, &full.binomial_relations, 0).unwrap()),
                res.invariants
            );
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn split_invariants_and_routes(
            labels in proptest::collection::vec((0usize..4, 0usize..4), 2..=9),
            degs in proptest::collection::vec(1usize..=3, 4),
        ) {
            let (vs, ps): (Vec<usize>, Vec<usize>) = labels.into_iter().unzip();
            let Some(e) = builders::bc_from_labels(&vs, &ps, &degs) else { return Ok(()) };
            let (c, _) = split_polygons(&e).unwrap();
            prop_assert_eq!(c.polygons().num_blocks(), split_edge_count(&e));
            prop_assert_eq!(c.orbits().num_blocks(), e.orbits().num_blocks());
            for v in 0..e.orbits().num_blocks() {
                prop_assert_eq!(c.f_degree(v), e.f_degree(v));
            }
            let res = pi1_bc(&e).unwrap();
            prop_assert_eq!(abelianize(&res.pipeline.presentation), res.invariants.clone());
            prop_assert_eq!(quiver_invariants(&e), res.invariants);
        }
    }
}
