//! The quiver with relations `(Q_E, I_E)`, its reduction `(Q′_E, I′_E)`, fundamental
//! groups of quivers with relations, quiver coverings and DOT output.
//!
//! Paths are stored in execution order: `arrows[0]` is traversed first.

use crate::config::{Fbc, FbcClass, UnionFind};
use crate::coverings::{Morphism, TruncatedCover};
use crate::groups::{self, GroupError, GroupoidPresentation, Letter, Presentation, Word};
use crate::walks::{Step, Walk};
use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    /// Generator-safe name `a<id>`.
    pub name: String,
    /// Layer label `L(x)` with `x` the least member.
    pub label: String,
    pub source: usize,
    pub target: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QPath {
    pub source: usize,
    pub arrows: Vec<usize>,
}

impl QPath {
    pub fn trivial(x: usize) -> QPath {
        QPath {
            source: x,
            arrows: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuiverWithRelations {
    pub vertices: Vec<String>,
    pub arrows: Vec<Arrow>,
    pub zero_relations: Vec<QPath>,
    /// Pairs `(u, v)` standing for `u − v`.
    pub binomial_relations: Vec<(QPath, QPath)>,
}

/// A walk of a quiver: arrows and formal inverses in traversal order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuiverWalk {
    pub start: usize,
    pub letters: Vec<Letter>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum QuiverError {
    #[error("configuration must be of type S")]
    NotTypeS,
    #[error("arrow {0} has no non-reduced replacement path")]
    NoReplacement(String),
}

impl QuiverWithRelations {
    pub fn target(&self, p: &QPath) -> usize {
        p.arrows.last().map_or(p.source, |&a| self.arrows[a].target)
    }

    /// True when consecutive arrows chain.
    pub fn is_path(&self, p: &QPath) -> bool {
        let mut cur = p.source;
        for &a in &p.arrows {
            if a >= self.arrows.len() || self.arrows[a].source != cur {
                return false;
            }
            cur = self.arrows[a].target;
        }
        true
    }

    pub fn out_arrows(&self, x: usize) -> Vec<usize> {
        (0..self.arrows.len())
            .filter(|&a| self.arrows[a].source == x)
            .collect()
    }

    pub fn in_arrows(&self, x: usize) -> Vec<usize> {
        (0..self.arrows.len())
            .filter(|&a| self.arrows[a].target == x)
            .collect()
    }

    pub fn path_string(&self, p: &QPath) -> String {
        if p.arrows.is_empty() {
            return format!("1@{}", self.vertices[p.source]);
        }
        p.arrows
            .iter()
            .map(|&a| self.arrows[a].name.as_str())
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn walk_target(&self, w: &QuiverWalk) -> usize {
        w.letters.iter().fold(w.start, |_, l| {
            let a = &self.arrows[l.gen];
            if l.inv {
                a.source
            } else {
                a.target
            }
        })
    }

    fn groupoid(&self, pairs: &[(QPath, QPath)]) -> GroupoidPresentation {
        let word = |p: &QPath| -> Word { p.arrows.iter().map(|&a| Letter::new(a)).collect() };
        GroupoidPresentation {
            objects: self.vertices.clone(),
            arrows: self
                .arrows
                .iter()
                .map(|a| (a.name.clone(), a.source, a.target))
                .collect(),
            rels: pairs.iter().map(|(u, v)| (word(u), word(v))).collect(),
        }
    }
}

/// Local data of a (possibly truncated) configuration. Missing `g`-images mark the boundary.
struct View {
    names: Vec<String>,
    g: Vec<Option<usize>>,
    vertex: Vec<Option<usize>>,
    layer: Vec<usize>,
    degree: Vec<usize>,
    arrow_of: Vec<Option<usize>>,
    /// Members of each arrow's layer.
    members: Vec<Vec<usize>>,
    vertex_names: Vec<String>,
    arrows: Vec<Arrow>,
}

impl View {
    /// `vertex_label[i] = None` excludes state `i`; labels are block keys.
    fn new(
        names: Vec<String>,
        g: Vec<Option<usize>>,
        vertex_label: Vec<Option<usize>>,
        layer_label: Vec<usize>,
        degree: Vec<usize>,
    ) -> View {
        let n = names.len();
        let mut vkey: BTreeMap<usize, usize> = BTreeMap::new();
        let mut vertex = vec![None; n];
        let mut vertex_names = Vec::new();
        for i in 0..n {
            if let Some(l) = vertex_label[i] {
                let id = *vkey.entry(l).or_insert_with(|| {
                    vertex_names.push(format!("P({})", names[i]));
                    vertex_names.len() - 1
                });
                vertex[i] = Some(id);
            }
        }
        let mut lkey: HashMap<usize, Vec<usize>> = HashMap::new();
        let mut order = Vec::new();
        for i in (0..n).filter(|&i| vertex[i].is_some()) {
            let e = lkey.entry(layer_label[i]).or_default();
            if e.is_empty() {
                order.push(layer_label[i]);
            }
            e.push(i);
        }
        let mut arrow_of = vec![None; n];
        let mut members = Vec::new();
        let mut arrows = Vec::new();
        for key in order {
            let block = &lkey[&key];
            let m = block[0];
            let Some(t) = g[m].and_then(|t| vertex[t]) else {
                continue;
            };
            let id = arrows.len();
            arrows.push(Arrow {
                name: format!("a{id}"),
                label: format!("L({})", names[m]),
                source: vertex[m].expect("included"),
                target: t,
            });
            for &x in block {
                arrow_of[x] = Some(id);
            }
            members.push(block.clone());
        }
        View {
            names,
            g,
            vertex,
            layer: layer_label,
            degree,
            arrow_of,
            members,
            vertex_names,
            arrows,
        }
    }

    fn of_fbc(cfg: &Fbc) -> View {
        let n = cfg.len();
        View::new(
            cfg.names().to_vec(),
            (0..n).map(|e| Some(cfg.g(e))).collect(),
            (0..n).map(|e| Some(cfg.polygons().block_of(e))).collect(),
            (0..n).map(|e| cfg.layers().block_of(e)).collect(),
            cfg.degrees().to_vec(),
        )
    }

    fn of_cover(tc: &TruncatedCover) -> View {
        let n = tc.len();
        // polygon labels are block ids; keep blocks that contain an interior state
        let mut block_has_interior: HashMap<usize, bool> = HashMap::new();
        for i in 0..n {
            *block_has_interior.entry(tc.polygon[i]).or_default() |= tc.is_interior(i);
        }
        View::new(
            tc.labels.clone(),
            tc.g.clone(),
            (0..n)
                .map(|i| block_has_interior[&tc.polygon[i]].then_some(tc.polygon[i]))
                .collect(),
            tc.layer.clone(),
            tc.degree.clone(),
        )
    }

    fn step(&self, x: usize) -> Option<usize> {
        self.g[x].filter(|&y| self.vertex[y].is_some())
    }

    /// Quiver path `L(g^{len-1}e)⋯L(e)`, when every needed state is present.
    fn seq_path(&self, e: usize, len: usize) -> Option<QPath> {
        let source = self.vertex[e]?;
        let mut arrows = Vec::with_capacity(len);
        let mut cur = e;
        for _ in 0..len {
            arrows.push(self.arrow_of[cur]?);
            cur = self.step(cur)?;
        }
        Some(QPath { source, arrows })
    }

    fn pow(&self, e: usize, k: usize) -> Option<usize> {
        (0..k).try_fold(e, |x, _| self.step(x))
    }

    /// Start angles of the threads through `p`, or `None` when the boundary interferes.
    fn threads(&self, p: &QPath) -> Option<Vec<usize>> {
        let first = *p.arrows.first()?;
        let mut live: Vec<(usize, usize)> = self.members[first].iter().map(|&x| (x, x)).collect();
        for &a in &p.arrows[1..] {
            let mut next = Vec::new();
            for (s, c) in live {
                let y = self.step(c)?;
                if self.arrow_of[y] == Some(a) {
                    next.push((s, y));
                }
            }
            live = next;
        }
        Some(live.into_iter().map(|(s, _)| s).collect())
    }

    /// Whether `p` is the path of a standard sequence.
    fn in_e(&self, p: &QPath) -> Option<bool> {
        if p.arrows.is_empty() {
            return Some(true);
        }
        Some(self.threads(p)?.iter().any(|&h| p.len() <= self.degree[h]))
    }

    fn included(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.names.len()).filter(|&i| self.vertex[i].is_some())
    }

    /// Nontrivial paths of standard sequences.
    fn paths_e(&self) -> BTreeSet<QPath> {
        let mut out = BTreeSet::new();
        for e in self.included() {
            for len in 1..=self.degree[e] {
                match self.seq_path(e, len) {
                    Some(p) => {
                        out.insert(p);
                    }
                    None => break,
                }
            }
        }
        out
    }

    /// Minimal zero paths: not in ℰ with both maximal proper subpaths in ℰ.
    fn zero_relations(
        &self,
        paths: &BTreeSet<QPath>,
        allowed: &dyn Fn(usize) -> bool,
    ) -> Vec<QPath> {
        let mut out = BTreeSet::new();
        for p in paths
            .iter()
            .filter(|p| p.arrows.iter().all(|&a| allowed(a)))
        {
            let t = self.arrows[*p.arrows.last().expect("nonempty")].target;
            for a in (0..self.arrows.len()).filter(|&a| self.arrows[a].source == t && allowed(a)) {
                let mut q = p.clone();
                q.arrows.push(a);
                let suffix = QPath {
                    source: self.arrows[q.arrows[0]].target,
                    arrows: q.arrows[1..].to_vec(),
                };
                if self.in_e(&q) == Some(false) && self.in_e(&suffix) == Some(true) {
                    out.insert(q);
                }
            }
        }
        out.into_iter().collect()
    }

    /// (fR1) pairs with `u != v`, each ordered and deduplicated.
    fn fr1_pairs(&self) -> Vec<(QPath, QPath)> {
        let mut by_vertex: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for e in self.included() {
            by_vertex
                .entry(self.vertex[e].expect("included"))
                .or_default()
                .push(e);
        }
        let mut out = BTreeSet::new();
        for block in by_vertex.values() {
            for (i, &e) in block.iter().enumerate() {
                for &h in &block[i + 1..] {
                    let (de, dh) = (self.degree[e], self.degree[h]);
                    for k in 0..de.min(dh) {
                        if k > 0 {
                            let x = self.pow(e, de - k);
                            let y = self.pow(h, dh - k);
                            match (x, y) {
                                (Some(x), Some(y)) if self.layer[x] == self.layer[y] => {}
                                _ => break,
                            }
                        }
                        if let (Some(u), Some(v)) =
                            (self.seq_path(e, de - k), self.seq_path(h, dh - k))
                        {
                            if u != v {
                                out.insert(if u < v { (u, v) } else { (v, u) });
                            }
                        }
                    }
                }
            }
        }
        out.into_iter().collect()
    }

    /// The classes of `R` on paths of standard sequences: `u R v` when some `p`, `q`
    /// with `L(p) = u`, `L(q) = v` have identical complements `∧p ≡ ∧q`.
    fn r_classes(&self) -> Vec<Vec<QPath>> {
        let mut nodes: BTreeMap<QPath, usize> = BTreeMap::new();
        let mut by_hat: HashMap<QPath, Vec<usize>> = HashMap::new();
        let mut ids = Vec::new();
        for e in self.included() {
            let d = self.degree[e];
            for len in 1..=d {
                let (Some(p), Some(t)) = (self.seq_path(e, len), self.pow(e, len)) else {
                    break;
                };
                let Some(hat) = self.seq_path(t, d - len) else {
                    continue;
                };
                let next = nodes.len();
                let id = *nodes.entry(p).or_insert(next);
                by_hat.entry(hat).or_default().push(id);
                ids.push(id);
            }
        }
        let mut uf = UnionFind::new(nodes.len());
        for group in by_hat.values() {
            for &x in &group[1..] {
                uf.union(group[0], x);
            }
        }
        let mut classes: BTreeMap<usize, Vec<QPath>> = BTreeMap::new();
        for (p, &id) in &nodes {
            classes.entry(uf.find(id)).or_default().push(p.clone());
        }
        let mut out: Vec<Vec<QPath>> = classes.into_values().collect();
        out.sort();
        out
    }

    fn quiver(&self) -> QuiverWithRelations {
        let paths = self.paths_e();
        QuiverWithRelations {
            vertices: self.vertex_names.clone(),
            arrows: self.arrows.clone(),
            zero_relations: self.zero_relations(&paths, &|_| true),
            binomial_relations: self.fr1_pairs(),
        }
    }

    fn reduce(&self) -> Result<Reduction, QuiverError> {
        let q = self.quiver();
        let classes = self.r_classes();
        let mut class_of: HashMap<QPath, usize> = HashMap::new();
        for (i, c) in classes.iter().enumerate() {
            for p in c {
                class_of.insert(p.clone(), i);
            }
        }
        let na = self.arrows.len();
        let arrow_path = |a: usize| QPath {
            source: self.arrows[a].source,
            arrows: vec![a],
        };
        let arrow_class: Vec<Option<usize>> = (0..na)
            .map(|a| class_of.get(&arrow_path(a)).copied())
            .collect();
        let reduced: Vec<bool> = arrow_class
            .iter()
            .map(|c| c.is_some_and(|c| classes[c].iter().any(|p| p.len() >= 2)))
            .collect();
        // representative: least arrow id of the class; arrows outside every class stand alone
        let rep: Vec<usize> = (0..na)
            .map(|a| match arrow_class[a] {
                Some(c) => (0..na)
                    .find(|&b| arrow_class[b] == Some(c))
                    .expect("a itself"),
                None => a,
            })
            .collect();
        let kept: Vec<usize> = (0..na).filter(|&a| !reduced[a] && rep[a] == a).collect();
        let new_id: HashMap<usize, usize> = kept.iter().enumerate().map(|(i, &a)| (a, i)).collect();
        let mut mu = Vec::with_capacity(na);
        for a in 0..na {
            let arrows = if reduced[a] {
                let c = &classes[arrow_class[a].expect("reduced arrows have a class")];
                let longest = c.iter().max_by(|x, y| x.len().cmp(&y.len()).then(y.cmp(x)));
                let u = longest.expect("nonempty class");
                u.arrows
                    .iter()
                    .map(|&b| {
                        if reduced[b] {
                            Err(QuiverError::NoReplacement(self.arrows[a].label.clone()))
                        } else {
                            Ok(new_id[&rep[b]])
                        }
                    })
                    .collect::<Result<Vec<_>, _>>()?
            } else {
                vec![new_id[&rep[a]]]
            };
            mu.push(QPath {
                source: self.arrows[a].source,
                arrows,
            });
        }
        let is_kept = |a: usize| new_id.contains_key(&a);
        let remap = |p: &QPath| QPath {
            source: p.source,
            arrows: p.arrows.iter().map(|a| new_id[a]).collect(),
        };
        let paths = self.paths_e();
        let zero: Vec<QPath> = self
            .zero_relations(&paths, &is_kept)
            .iter()
            .map(remap)
            .collect();
        let mut pairs = BTreeSet::new();
        for c in &classes {
            let inside: Vec<&QPath> = c
                .iter()
                .filter(|p| !p.is_empty() && p.arrows.iter().all(|&a| is_kept(a)))
                .collect();
            for (i, u) in inside.iter().enumerate() {
                for v in &inside[i + 1..] {
                    pairs.insert((remap(u), remap(v)));
                }
            }
        }
        let arrows = kept
            .iter()
            .map(|&a| q.arrows[a].clone())
            .collect::<Vec<_>>();
        Ok(Reduction {
            full: q,
            quiver: QuiverWithRelations {
                vertices: self.vertex_names.clone(),
                arrows,
                zero_relations: zero,
                binomial_relations: pairs.into_iter().collect(),
            },
            reduced,
            mu,
            kept,
        })
    }
}

/// `(Q′_E, I′_E)` together with the substitution from `Q_E`.
#[derive(Clone, Debug)]
pub struct Reduction {
    /// `(Q_E, I_E)`.
    pub full: QuiverWithRelations,
    /// `(Q′_E, I′_E)`; arrows keep their `Q_E` names.
    pub quiver: QuiverWithRelations,
    /// Per `Q_E` arrow: whether it is reduced.
    pub reduced: Vec<bool>,
    /// Per `Q_E` arrow: its image path in `Q′_E`.
    pub mu: Vec<QPath>,
    /// `Q′_E` arrow index to `Q_E` arrow index.
    pub kept: Vec<usize>,
}

impl Reduction {
    /// The image of a `Q_E` walk in `Q′_E`.
    pub fn map_walk(&self, w: &QuiverWalk) -> QuiverWalk {
        let mut letters = Vec::new();
        for l in &w.letters {
            let img: Word = self.mu[l.gen]
                .arrows
                .iter()
                .map(|&a| Letter::new(a))
                .collect();
            if l.inv {
                letters.extend(groups::inverse(&img));
            } else {
                letters.extend(img);
            }
        }
        QuiverWalk {
            start: w.start,
            letters,
        }
    }
}

/// `(Q_E, I_E)` with the minimal (fR2)/(fR3) zero paths and the (fR1) pairs.
pub fn quiver_of(cfg: &Fbc) -> QuiverWithRelations {
    View::of_fbc(cfg).quiver()
}

/// `(Q′_E, I′_E)`: one arrow per `R`-class of non-reduced arrows, with the substitution `μ`.
pub fn reduce_presentation(cfg: &Fbc) -> Result<Reduction, QuiverError> {
    if cfg.classify() == FbcClass::General {
        return Err(QuiverError::NotTypeS);
    }
    View::of_fbc(cfg).reduce()
}

/// The quiver with relations of the polygons of a truncated cover that meet the interior.
///
/// Relations whose sequences reach past the explored region are omitted.
pub fn quiver_of_cover(tc: &TruncatedCover) -> QuiverWithRelations {
    View::of_cover(tc).quiver()
}

/// [`reduce_presentation`] on the explored part of a truncated cover of a type S configuration.
pub fn reduce_cover(tc: &TruncatedCover) -> Result<Reduction, QuiverError> {
    View::of_cover(tc).reduce()
}

/// Reduction at the quiver level, with `R` generated by the binomial pairs.
///
/// Arrows paired with a longer path are dropped; the rest are merged to their least
/// `R`-equivalent arrow; relations are rewritten and deduplicated.
pub fn reduce_quiver(q: &QuiverWithRelations) -> QuiverWithRelations {
    let mut nodes: BTreeMap<QPath, usize> = BTreeMap::new();
    for a in 0..q.arrows.len() {
        let n = nodes.len();
        nodes
            .entry(QPath {
                source: q.arrows[a].source,
                arrows: vec![a],
            })
            .or_insert(n);
    }
    for (u, v) in &q.binomial_relations {
        for p in [u, v] {
            let n = nodes.len();
            nodes.entry(p.clone()).or_insert(n);
        }
    }
    let mut uf = UnionFind::new(nodes.len());
    for (u, v) in &q.binomial_relations {
        uf.union(nodes[u], nodes[v]);
    }
    let na = q.arrows.len();
    let mut long = vec![false; nodes.len()];
    for (p, &id) in &nodes {
        if p.len() >= 2 {
            let r = uf.find(id);
            long[r] = true;
        }
    }
    let root: Vec<usize> = (0..na)
        .map(|a| {
            uf.find(
                nodes[&QPath {
                    source: q.arrows[a].source,
                    arrows: vec![a],
                }],
            )
        })
        .collect();
    let reduced: Vec<bool> = (0..na).map(|a| long[root[a]]).collect();
    let rep: Vec<usize> = (0..na)
        .map(|a| (0..na).find(|&b| root[b] == root[a]).expect("a itself"))
        .collect();
    let kept: Vec<usize> = (0..na).filter(|&a| !reduced[a] && rep[a] == a).collect();
    let new_id: HashMap<usize, usize> = kept.iter().enumerate().map(|(i, &a)| (a, i)).collect();
    let rewrite = |p: &QPath| -> Option<QPath> {
        let arrows = p
            .arrows
            .iter()
            .map(|&a| (!reduced[a]).then(|| new_id[&rep[a]]))
            .collect::<Option<Vec<_>>>()?;
        Some(QPath {
            source: p.source,
            arrows,
        })
    };
    let zero: BTreeSet<QPath> = q.zero_relations.iter().filter_map(rewrite).collect();
    let mut pairs = BTreeSet::new();
    for (u, v) in &q.binomial_relations {
        if let (Some(u), Some(v)) = (rewrite(u), rewrite(v)) {
            if u != v {
                pairs.insert(if u < v { (u, v) } else { (v, u) });
            }
        }
    }
    QuiverWithRelations {
        vertices: q.vertices.clone(),
        arrows: kept.iter().map(|&a| q.arrows[a].clone()).collect(),
        zero_relations: zero.into_iter().collect(),
        binomial_relations: pairs.into_iter().collect(),
    }
}

/// `f(w)`: `g` steps give `L(e)`, `g⁻¹` steps give `L(g⁻¹·e)⁻¹`, jumps give identities.
pub fn walk_to_quiver_walk(cfg: &Fbc, w: &Walk) -> QuiverWalk {
    let mut letters = Vec::new();
    for (i, s) in w.steps().iter().enumerate() {
        let here = w.path()[i];
        match s {
            Step::Fwd => letters.push(Letter::new(cfg.layers().block_of(here))),
            Step::Bwd => letters.push(Letter {
                gen: cfg.layers().block_of(cfg.g_inv(here)),
                inv: true,
            }),
            Step::Tau(_) => {}
        }
    }
    QuiverWalk {
        start: cfg.polygons().block_of(w.source()),
        letters,
    }
}

/// `Π(Q, I)` at `base`: one generator per non-tree arrow, one relator per pair.
pub fn pi1_quiver(
    q: &QuiverWithRelations,
    pairs: &[(QPath, QPath)],
    base: usize,
) -> Result<Presentation, GroupError> {
    groups::groupoid_to_group(&q.groupoid(pairs), base)
}

/// The group word of a closed quiver walk in the presentation of [`pi1_quiver`].
pub fn quiver_walk_word(
    q: &QuiverWithRelations,
    pairs: &[(QPath, QPath)],
    w: &QuiverWalk,
) -> Result<(Presentation, Word), GroupError> {
    let c = groups::collapse(&q.groupoid(pairs), w.start)?;
    let word = c.image(&w.letters);
    Ok((c.presentation, word))
}

/// Vertex and arrow maps between quivers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuiverMap {
    pub vertex: Vec<usize>,
    pub arrow: Vec<usize>,
}

impl QuiverMap {
    pub fn apply(&self, p: &QPath) -> QPath {
        QPath {
            source: self.vertex[p.source],
            arrows: p.arrows.iter().map(|&a| self.arrow[a]).collect(),
        }
    }
}

/// The map `P(e) ↦ P′(f(e))`, `L(e) ↦ L′(f(e))` induced by an f-BC morphism.
pub fn induced_quiver_map(m: &Morphism) -> QuiverMap {
    let (dom, cod) = (m.dom, m.cod);
    let vertex = dom
        .polygons()
        .blocks()
        .iter()
        .map(|b| cod.polygons().block_of(m.map[b[0]]))
        .collect();
    let arrow = dom
        .layers()
        .blocks()
        .iter()
        .map(|b| cod.layers().block_of(m.map[b[0]]))
        .collect();
    QuiverMap { vertex, arrow }
}

fn canonical_pair(u: QPath, v: QPath) -> (QPath, QPath) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

/// Lifts `p` along `f` from `x` through the out-star bijections.
fn lift_from(dom: &QuiverWithRelations, f: &QuiverMap, x: usize, p: &QPath) -> Option<QPath> {
    let mut cur = x;
    let mut arrows = Vec::new();
    for &a in &p.arrows {
        let b = dom.out_arrows(cur).into_iter().find(|&b| f.arrow[b] == a)?;
        arrows.push(b);
        cur = dom.arrows[b].target;
    }
    Some(QPath { source: x, arrows })
}

/// Lifts `p` along `f` ending at `y` through the in-star bijections.
fn lift_to(dom: &QuiverWithRelations, f: &QuiverMap, y: usize, p: &QPath) -> Option<QPath> {
    let mut cur = y;
    let mut rev = Vec::new();
    for &a in p.arrows.iter().rev() {
        let b = dom.in_arrows(cur).into_iter().find(|&b| f.arrow[b] == a)?;
        rev.push(b);
        cur = dom.arrows[b].source;
    }
    rev.reverse();
    Some(QPath {
        source: cur,
        arrows: rev,
    })
}

/// Checks star bijections and lifting of the supplied relations, anchored at both ends.
///
/// Returns the list of violations; empty means `f` is a covering of quivers with relations.
pub fn check_quiver_covering(
    dom: &QuiverWithRelations,
    cod: &QuiverWithRelations,
    f: &QuiverMap,
) -> Vec<String> {
    let mut bad = Vec::new();
    if f.vertex.len() != dom.vertices.len() || f.arrow.len() != dom.arrows.len() {
        bad.push("map sizes do not match the domain".to_string());
        return bad;
    }
    for (a, arr) in dom.arrows.iter().enumerate() {
        let img = &cod.arrows[f.arrow[a]];
        if img.source != f.vertex[arr.source] || img.target != f.vertex[arr.target] {
            bad.push(format!(
                "arrow {} is not sent to an arrow between the image vertices",
                arr.label
            ));
        }
    }
    for x in 0..dom.vertices.len() {
        for (what, mine, theirs) in [
            ("out", dom.out_arrows(x), cod.out_arrows(f.vertex[x])),
            ("in", dom.in_arrows(x), cod.in_arrows(f.vertex[x])),
        ] {
            let mut img: Vec<usize> = mine.iter().map(|&a| f.arrow[a]).collect();
            img.sort_unstable();
            if img != theirs {
                bad.push(format!(
                    "{what}-star of {} does not map bijectively onto that of {}",
                    dom.vertices[x], cod.vertices[f.vertex[x]]
                ));
            }
        }
    }
    if !bad.is_empty() {
        return bad;
    }
    let zero: BTreeSet<&QPath> = dom.zero_relations.iter().collect();
    let pairs: BTreeSet<(QPath, QPath)> = dom.binomial_relations.iter().cloned().collect();
    let over = |v: usize| (0..dom.vertices.len()).filter(move |&x| f.vertex[x] == v);
    for z in &cod.zero_relations {
        for x in over(z.source) {
            if !lift_from(dom, f, x, z).is_some_and(|l| zero.contains(&l)) {
                bad.push(format!(
                    "zero relation {} does not lift at {}",
                    cod.path_string(z),
                    dom.vertices[x]
                ));
            }
        }
        for y in over(cod.target(z)) {
            if !lift_to(dom, f, y, z).is_some_and(|l| zero.contains(&l)) {
                bad.push(format!(
                    "zero relation {} does not lift into {}",
                    cod.path_string(z),
                    dom.vertices[y]
                ));
            }
        }
    }
    for (u, v) in &cod.binomial_relations {
        let name = format!("{} = {}", cod.path_string(u), cod.path_string(v));
        for x in over(u.source) {
            let ok = match (lift_from(dom, f, x, u), lift_from(dom, f, x, v)) {
                (Some(a), Some(b)) => pairs.contains(&canonical_pair(a, b)),
                _ => false,
            };
            if !ok {
                bad.push(format!(
                    "relation {name} does not lift at {}",
                    dom.vertices[x]
                ));
            }
        }
        for y in over(cod.target(u)) {
            let ok = match (lift_to(dom, f, y, u), lift_to(dom, f, y, v)) {
                (Some(a), Some(b)) => a.source == b.source && pairs.contains(&canonical_pair(a, b)),
                _ => false,
            };
            if !ok {
                bad.push(format!(
                    "relation {name} does not lift into {}",
                    dom.vertices[y]
                ));
            }
        }
    }
    let cod_pairs: BTreeSet<(QPath, QPath)> = cod.binomial_relations.iter().cloned().collect();
    for (u, v) in &dom.binomial_relations {
        if !cod_pairs.contains(&canonical_pair(f.apply(u), f.apply(v))) {
            bad.push(format!(
                "image of relation {} = {} is not a relation",
                dom.path_string(u),
                dom.path_string(v)
            ));
        }
    }
    bad
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SimplyConnectedReport {
    pub no_oriented_cycles: bool,
    pub unique_path_per_arrow: bool,
    /// True only when Tietze elimination removes every generator.
    pub pi1_trivial: bool,
}

impl SimplyConnectedReport {
    pub fn all(&self) -> bool {
        self.no_oriented_cycles && self.unique_path_per_arrow && self.pi1_trivial
    }
}

/// Topological order of the vertices, or `None` when an oriented cycle exists.
fn topological_order(q: &QuiverWithRelations) -> Option<Vec<usize>> {
    let n = q.vertices.len();
    let mut indeg = vec![0usize; n];
    for a in &q.arrows {
        indeg[a.target] += 1;
    }
    let mut queue: VecDeque<usize> = (0..n).filter(|&x| indeg[x] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(x) = queue.pop_front() {
        order.push(x);
        for a in q.out_arrows(x) {
            let t = q.arrows[a].target;
            indeg[t] -= 1;
            if indeg[t] == 0 {
                queue.push_back(t);
            }
        }
    }
    (order.len() == n).then_some(order)
}

/// The three hypotheses of the simple-connectedness criterion.
pub fn simply_connected_check(
    q: &QuiverWithRelations,
    pairs: &[(QPath, QPath)],
) -> SimplyConnectedReport {
    let order = topological_order(q);
    let unique_path_per_arrow = order.as_ref().is_some_and(|order| {
        let n = q.vertices.len();
        (0..n).all(|x| {
            // path counts from x, capped at 2
            let mut count = vec![0u8; n];
            count[x] = 1;
            for &v in order {
                if count[v] == 0 {
                    continue;
                }
                for a in q.out_arrows(v) {
                    let t = q.arrows[a].target;
                    count[t] = (count[t] + count[v]).min(2);
                }
            }
            q.out_arrows(x)
                .iter()
                .all(|&a| count[q.arrows[a].target] == 1)
        })
    });
    let pi1_trivial = !q.vertices.is_empty()
        && pi1_quiver(q, pairs, 0).is_ok_and(|p| groups::certified_trivial(&p));
    SimplyConnectedReport {
        no_oriented_cycles: order.is_some(),
        unique_path_per_arrow,
        pi1_trivial,
    }
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Deterministic DOT digraph; relations appear as comments.
pub fn emit_dot(q: &QuiverWithRelations) -> String {
    let mut out = String::from("digraph Q {\n");
    for (i, v) in q.vertices.iter().enumerate() {
        let _ = writeln!(out, "  v{i} [label=\"{}\"];", dot_escape(v));
    }
    for a in &q.arrows {
        let _ = writeln!(
            out,
            "  v{} -> v{} [label=\"{}: {}\"];",
            a.source,
            a.target,
            a.name,
            dot_escape(&a.label)
        );
    }
    for z in &q.zero_relations {
        let _ = writeln!(out, "  // zero: {}", q.path_string(z));
    }
    for (u, v) in &q.binomial_relations {
        let _ = writeln!(
            out,
            "  // equal: {} = {}",
            q.path_string(u),
            q.path_string(v)
        );
    }
    out.push_str("}\n");
    out
}
