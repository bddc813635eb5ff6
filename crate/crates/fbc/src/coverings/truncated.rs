//! Radius-truncated covers: `B_(E,e)`, `ℤB_(E,e)` and the homotopy-class universal cover.
//!
//! States are explored breadth-first by step distance from the base. States at distance
//! below the radius are interior: their g-images, g⁻¹-images and polygons are present.

use super::CoverError;
use crate::config::{Angle, Fbc, Partition, UnionFind};
use crate::walks::{
    homotopic, normalize_ms, zb_g, zb_g_inv, zb_project, Homotopy, MsNormalForm, SpecialWalk, Step,
    Walk, ZbAngle,
};
use std::collections::{HashMap, VecDeque};
use std::hash::Hash;

/// A partially explored, possibly infinite configuration with a projection to the base.
#[derive(Clone, Debug)]
pub struct TruncatedCover {
    pub labels: Vec<String>,
    pub projection: Vec<Angle>,
    pub dist: Vec<usize>,
    pub radius: usize,
    pub g: Vec<Option<usize>>,
    pub g_inv: Vec<Option<usize>>,
    /// Polygon block id per state (blocks of boundary states may be incomplete).
    pub polygon: Vec<usize>,
    pub layer: Vec<usize>,
    pub degree: Vec<usize>,
}

impl TruncatedCover {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn is_interior(&self, i: usize) -> bool {
        self.dist[i] < self.radius
    }

    pub fn interior(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(|&i| self.is_interior(i))
    }

    /// Boundary states: those at distance equal to the radius.
    pub fn boundary(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| !self.is_interior(i)).collect()
    }

    fn members(&self, block: &[usize], i: usize) -> Vec<usize> {
        (0..self.len()).filter(|&j| block[j] == block[i]).collect()
    }

    /// True when every g-image and polygon is present, so the structure is a finite f-BC.
    pub fn is_complete(&self, base: &Fbc) -> bool {
        (0..self.len()).all(|i| {
            self.g[i].is_some()
                && self.g_inv[i].is_some()
                && self.members(&self.polygon, i).len() == base.polygon(self.projection[i]).len()
        })
    }

    /// Number of distinct polygon blocks.
    pub fn num_polygons(&self) -> usize {
        let mut ids = self.polygon.clone();
        ids.sort_unstable();
        ids.dedup();
        ids.len()
    }

    /// The covering conditions of the projection, checked on interior states.
    pub fn check_covering_interior(&self, base: &Fbc) -> Result<(), String> {
        for i in self.interior() {
            let p = self.projection[i];
            let (Some(gi), Some(gv)) = (self.g[i], self.g_inv[i]) else {
                return Err(format!("interior state {} lacks a g-image", self.labels[i]));
            };
            if self.projection[gi] != base.g(p) || self.projection[gv] != base.g_inv(p) {
                return Err(format!(
                    "projection does not commute with g at {}",
                    self.labels[i]
                ));
            }
            if self.degree[i] != base.degree(p) {
                return Err(format!("degree changes at {}", self.labels[i]));
            }
            for (block, target, what) in [
                (&self.polygon, base.polygon(p), "polygon"),
                (&self.layer, base.layer(p), "layer"),
            ] {
                let mut img: Vec<Angle> = self
                    .members(block, i)
                    .iter()
                    .map(|&j| self.projection[j])
                    .collect();
                img.sort_unstable();
                if img != target {
                    return Err(format!(
                        "{what} of {} does not map bijectively",
                        self.labels[i]
                    ));
                }
            }
        }
        Ok(())
    }

    /// Axioms (f1)-(f5) on interior states wherever the needed images are present.
    pub fn check_axioms_interior(&self) -> Result<(), String> {
        let interior: Vec<usize> = self.interior().collect();
        let sigma = |i: usize| -> Option<usize> {
            let mut x = i;
            for _ in 0..self.degree[i] {
                x = self.g[x]?;
            }
            Some(x)
        };
        for &i in &interior {
            let gi = self.g[i].expect("interior");
            if self.degree[gi] != self.degree[i] {
                return Err(format!("(f3) fails at {}", self.labels[i]));
            }
            for &j in &interior {
                if self.layer[i] == self.layer[j] {
                    if self.polygon[i] != self.polygon[j] {
                        return Err(format!("(f1) fails at {}", self.labels[i]));
                    }
                    let gj = self.g[j].expect("interior");
                    if self.polygon[gi] != self.polygon[gj] {
                        return Err(format!("(f2) fails at {}", self.labels[i]));
                    }
                }
                if let (Some(si), Some(sj)) = (sigma(i), sigma(j)) {
                    // blocks are only complete around interior states
                    if !self.is_interior(si) && !self.is_interior(sj) {
                        continue;
                    }
                    if (self.polygon[i] == self.polygon[j])
                        != (self.polygon[si] == self.polygon[sj])
                    {
                        return Err(format!("(f4) fails at {}", self.labels[i]));
                    }
                    if (self.layer[i] == self.layer[j]) != (self.layer[si] == self.layer[sj]) {
                        return Err(format!("(f5) fails at {}", self.labels[i]));
                    }
                }
            }
        }
        Ok(())
    }

    /// The finite configuration, when [`TruncatedCover::is_complete`] holds.
    ///
    /// State `i` becomes angle `s{i}`, since labels are walks and not valid ids.
    pub fn to_fbc(&self, base: &Fbc) -> Option<Fbc> {
        if !self.is_complete(base) {
            return None;
        }
        let n = self.len();
        let g = self.g.iter().map(|x| x.expect("complete")).collect();
        Fbc::from_parts(
            (0..n).map(|i| format!("s{i}")).collect(),
            g,
            Partition::from_labels(&self.polygon),
            Partition::from_labels(&self.layer),
            self.degree.clone(),
        )
        .ok()
        .filter(|c| c.len() == n)
    }
}

/// Breadth-first exploration of a state machine up to `radius` steps.
struct Explorer<S> {
    states: Vec<S>,
    index: HashMap<S, usize>,
    dist: Vec<usize>,
}

impl<S: Clone + Eq + Hash> Explorer<S> {
    fn new(start: S) -> Self {
        Explorer {
            states: vec![start.clone()],
            index: HashMap::from([(start, 0)]),
            dist: vec![0],
        }
    }

    fn id(&mut self, s: S, dist: usize) -> usize {
        if let Some(&i) = self.index.get(&s) {
            return i;
        }
        let i = self.states.len();
        self.states.push(s.clone());
        self.index.insert(s, i);
        self.dist.push(dist);
        i
    }
}

/// Explores `g`, `g⁻¹` and polygon jumps; `polygon(s)` lists the full block with its
/// canonical key first; layers are singletons.
#[allow(clippy::too_many_arguments)]
fn explore_ms<S, G, V, P>(
    start: S,
    radius: usize,
    g: G,
    g_inv: V,
    polygon: P,
    degree: impl Fn(&S) -> usize,
    project: impl Fn(&S) -> Angle,
    label: impl Fn(&S) -> String,
) -> TruncatedCover
where
    S: Clone + Eq + Hash,
    G: Fn(&S) -> S,
    V: Fn(&S) -> S,
    P: Fn(&S) -> Vec<S>,
{
    let mut ex = Explorer::new(start);
    let mut gm: Vec<Option<usize>> = Vec::new();
    let mut gv: Vec<Option<usize>> = Vec::new();
    let mut uf_pairs = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let d = ex.dist[i];
        if d >= radius {
            continue;
        }
        let s = ex.states[i].clone();
        let before = ex.states.len();
        let a = ex.id(g(&s), d + 1);
        let b = ex.id(g_inv(&s), d + 1);
        let block: Vec<usize> = polygon(&s).into_iter().map(|x| ex.id(x, d + 1)).collect();
        for &m in &block {
            uf_pairs.push((block[0], m));
        }
        gm.resize(ex.states.len(), None);
        gv.resize(ex.states.len(), None);
        gm[i] = Some(a);
        gv[i] = Some(b);
        gv[a] = Some(i);
        gm[b] = Some(i);
        queue.extend(before..ex.states.len());
    }
    let n = ex.states.len();
    gm.resize(n, None);
    gv.resize(n, None);
    let mut uf = UnionFind::new(n);
    for (x, y) in uf_pairs {
        uf.union(x, y);
    }
    let poly = uf.into_partition();
    TruncatedCover {
        labels: ex.states.iter().map(&label).collect(),
        projection: ex.states.iter().map(&project).collect(),
        dist: ex.dist,
        radius,
        g: gm,
        g_inv: gv,
        polygon: (0..n).map(|i| poly.block_of(i)).collect(),
        layer: (0..n).collect(),
        degree: ex.states.iter().map(&degree).collect(),
    }
}

fn special_label(cfg: &Fbc, w: &SpecialWalk) -> String {
    if w.is_trivial() {
        return format!("({}||{})", cfg.name(w.start()), cfg.name(w.start()));
    }
    w.to_walk(cfg).display(cfg).to_string()
}

/// `B_(E,e)`: special walks from `base`, projected to their terminal angle.
pub fn build_b(cfg: &Fbc, base: Angle, radius: usize) -> Result<TruncatedCover, CoverError> {
    if !cfg.is_ms() {
        return Err(CoverError::NotMs);
    }
    Ok(explore_ms(
        SpecialWalk::trivial(base),
        radius,
        |w| w.g_act(cfg).0,
        |w| w.g_inv_act(cfg).0,
        |w| w.polygon(cfg),
        |w| cfg.degree(w.target()),
        |w| w.target(),
        |w| special_label(cfg, w),
    ))
}

/// `ℤB_(E,e)`: pairs `(w, n)` with projection `q(w, n) = g^{n·d(t(w))}·t(w)`.
pub fn build_zb(cfg: &Fbc, base: Angle, radius: usize) -> Result<TruncatedCover, CoverError> {
    if !cfg.is_ms() {
        return Err(CoverError::NotMs);
    }
    let start: ZbAngle = (SpecialWalk::trivial(base), 0);
    Ok(explore_ms(
        start,
        radius,
        |a| zb_g(cfg, a),
        |a| zb_g_inv(cfg, a),
        |a| a.0.polygon(cfg).into_iter().map(|w| (w, a.1)).collect(),
        |a| cfg.degree(a.0.target()),
        |a| zb_project(cfg, a),
        |a| format!("{}@{}", special_label(cfg, &a.0), a.1),
    ))
}

/// Homotopy classes of walks from `base` of length at most `radius`.
///
/// Type MS classes are keyed by their normal form; otherwise new walks are compared with
/// known classes by bounded search and an undecided comparison is an error.
pub fn universal_cover_truncated(
    cfg: &Fbc,
    base: Angle,
    radius: usize,
    budget: usize,
) -> Result<TruncatedCover, CoverError> {
    let ms = cfg.is_ms();
    let mut reps: Vec<Walk> = vec![Walk::trivial(base)];
    let mut dist = vec![0usize];
    let mut by_nf: HashMap<MsNormalForm, usize> = HashMap::new();
    if ms {
        by_nf.insert(normalize_ms(cfg, &reps[0]).expect("MS"), 0);
    }
    let mut classify = |w: Walk, d: usize, reps: &mut Vec<Walk>, dist: &mut Vec<usize>| {
        if ms {
            let nf = normalize_ms(cfg, &w).expect("MS");
            if let Some(&i) = by_nf.get(&nf) {
                return Ok(i);
            }
            by_nf.insert(nf, reps.len());
        } else {
            for (i, r) in reps.iter().enumerate() {
                if r.target() != w.target() {
                    continue;
                }
                match homotopic(cfg, r, &w, budget) {
                    Homotopy::Yes => return Ok(i),
                    Homotopy::No => {}
                    Homotopy::Unknown(b) => return Err(CoverError::Unknown(b)),
                }
            }
        }
        reps.push(w);
        dist.push(d);
        Ok(reps.len() - 1)
    };
    let mut g: Vec<Option<usize>> = vec![None];
    let mut gv: Vec<Option<usize>> = vec![None];
    let mut poly_pairs = Vec::new();
    let mut layer_pairs = Vec::new();
    let mut i = 0;
    while i < reps.len() {
        if dist[i] < radius {
            let r = reps[i].clone();
            let t = r.target();
            let d = dist[i] + 1;
            let ext = |s: Step| {
                let mut w = r.clone();
                w.push(cfg, s).expect("valid step");
                w
            };
            let a = classify(ext(Step::Fwd), d, &mut reps, &mut dist)?;
            let b = classify(ext(Step::Bwd), d, &mut reps, &mut dist)?;
            g.resize(reps.len(), None);
            gv.resize(reps.len(), None);
            g[i] = Some(a);
            gv[i] = Some(b);
            g[b] = Some(i);
            gv[a] = Some(i);
            for &z in cfg.polygon(t) {
                let c = classify(ext(Step::Tau(z)), d, &mut reps, &mut dist)?;
                poly_pairs.push((i, c));
                if cfg.layers().same(z, t) {
                    layer_pairs.push((i, c));
                }
            }
        }
        i += 1;
    }
    let n = reps.len();
    g.resize(n, None);
    gv.resize(n, None);
    let block = |pairs: &[(usize, usize)]| {
        let mut uf = UnionFind::new(n);
        for &(x, y) in pairs {
            uf.union(x, y);
        }
        let p = uf.into_partition();
        (0..n).map(|i| p.block_of(i)).collect::<Vec<_>>()
    };
    Ok(TruncatedCover {
        labels: reps.iter().map(|w| w.display(cfg).to_string()).collect(),
        projection: reps.iter().map(|w| w.target()).collect(),
        dist,
        radius,
        g,
        g_inv: gv,
        polygon: block(&poly_pairs),
        layer: block(&layer_pairs),
        degree: reps.iter().map(|w| cfg.degree(w.target())).collect(),
    })
}
