//! Morphisms and coverings of f-BCs: verification, walk lifting, deck groups,
//! the lifting criterion and truncated universal covers.

mod truncated;

pub use truncated::{build_b, build_zb, universal_cover_truncated, TruncatedCover};

use crate::config::{Angle, Fbc};
use crate::walks::{Step, Walk};
use std::collections::VecDeque;
use std::fmt;
use thiserror::Error;

/// A violated morphism or covering condition, with witness angle names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MorphismViolation {
    WrongLength { expected: usize, got: usize },
    OutOfRange { e: String },
    NotBijective { e: String },
    NotCommuting { e: String },
    PolygonNotPreserved { e: String, h: String },
    LayerNotPreserved { e: String, h: String },
    DegreeChanged { e: String },
    PolygonNotBijective { e: String, image: String },
    LayerNotBijective { e: String, image: String },
}

impl fmt::Display for MorphismViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use MorphismViolation::*;
        match self {
            WrongLength { expected, got } => {
                write!(f, "map has {got} entries, expected {expected}")
            }
            OutOfRange { e } => write!(f, "image of {e} is not an angle of the codomain"),
            NotBijective { e } => write!(f, "map is not bijective at {e}"),
            NotCommuting { e } => write!(f, "f(g.{e}) != g.f({e})"),
            PolygonNotPreserved { e, h } => {
                write!(
                    f,
                    "P({e}) = P({h}) but their images lie in different polygons"
                )
            }
            LayerNotPreserved { e, h } => {
                write!(
                    f,
                    "L({e}) = L({h}) but their images lie in different layers"
                )
            }
            DegreeChanged { e } => write!(f, "d(f({e})) != d({e})"),
            PolygonNotBijective { e, image } => {
                write!(f, "P({e}) -> P({image}) is not a bijection")
            }
            LayerNotBijective { e, image } => write!(f, "L({e}) -> L({image}) is not a bijection"),
        }
    }
}

impl std::error::Error for MorphismViolation {}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CoverError {
    #[error("the domain is not connected")]
    Disconnected,
    #[error("start angle {start} does not lie over {origin}")]
    StartMismatch { start: String, origin: String },
    #[error("homotopy undecided within budget {0}")]
    Unknown(usize),
    #[error("configuration must be of type MS")]
    NotMs,
    #[error("lifted map is not a morphism: {0}")]
    NotMorphism(MorphismViolation),
}

/// A candidate angle map `dom → cod`.
#[derive(Clone, Debug)]
pub struct Morphism<'a> {
    pub dom: &'a Fbc,
    pub cod: &'a Fbc,
    pub map: Vec<Angle>,
}

impl<'a> Morphism<'a> {
    pub fn new(dom: &'a Fbc, cod: &'a Fbc, map: Vec<Angle>) -> Self {
        Morphism { dom, cod, map }
    }

    pub fn identity(cfg: &'a Fbc) -> Self {
        Morphism::new(cfg, cfg, (0..cfg.len()).collect())
    }

    pub fn apply(&self, e: Angle) -> Angle {
        self.map[e]
    }
}

/// A verified covering with its per-polygon block bijections `(dom angle, cod angle)`.
#[derive(Clone, Debug)]
pub struct CoveringCert<'a> {
    pub morphism: Morphism<'a>,
    pub polygon_bijections: Vec<Vec<(Angle, Angle)>>,
}

impl CoveringCert<'_> {
    /// The unique angle of `P(e)` over `target`.
    pub fn lift_tau(&self, e: Angle, target: Angle) -> Option<Angle> {
        let dom = self.morphism.dom;
        self.polygon_bijections[dom.polygons().block_of(e)]
            .iter()
            .find(|p| p.1 == target)
            .map(|p| p.0)
    }
}

/// Checks the three morphism conditions: commuting with g, block preservation, degree.
pub fn check_morphism(m: &Morphism) -> Result<(), MorphismViolation> {
    let (dom, cod) = (m.dom, m.cod);
    let nm = |e: Angle| dom.name(e).to_string();
    if m.map.len() != dom.len() {
        return Err(MorphismViolation::WrongLength {
            expected: dom.len(),
            got: m.map.len(),
        });
    }
    if let Some(e) = (0..dom.len()).find(|&e| m.map[e] >= cod.len()) {
        return Err(MorphismViolation::OutOfRange { e: nm(e) });
    }
    for e in 0..dom.len() {
        if m.map[dom.g(e)] != cod.g(m.map[e]) {
            return Err(MorphismViolation::NotCommuting { e: nm(e) });
        }
    }
    for b in dom.polygons().blocks() {
        if let Some(&h) = b
            .iter()
            .find(|&&h| !cod.polygons().same(m.map[h], m.map[b[0]]))
        {
            return Err(MorphismViolation::PolygonNotPreserved {
                e: nm(b[0]),
                h: nm(h),
            });
        }
    }
    for b in dom.layers().blocks() {
        if let Some(&h) = b
            .iter()
            .find(|&&h| !cod.layers().same(m.map[h], m.map[b[0]]))
        {
            return Err(MorphismViolation::LayerNotPreserved {
                e: nm(b[0]),
                h: nm(h),
            });
        }
    }
    if let Some(e) = (0..dom.len()).find(|&e| cod.degree(m.map[e]) != dom.degree(e)) {
        return Err(MorphismViolation::DegreeChanged { e: nm(e) });
    }
    Ok(())
}

/// True when `block` maps injectively onto `target` under `map`.
fn maps_bijectively(map: &[Angle], block: &[Angle], target: &[Angle]) -> bool {
    let mut img: Vec<Angle> = block.iter().map(|&x| map[x]).collect();
    img.sort_unstable();
    img == target
}

/// Checks the morphism conditions and the polygon and layer block bijections.
pub fn check_covering<'a>(m: &Morphism<'a>) -> Result<CoveringCert<'a>, MorphismViolation> {
    check_morphism(m)?;
    let (dom, cod) = (m.dom, m.cod);
    let mut bij = Vec::new();
    for b in dom.polygons().blocks() {
        let image = cod.polygon(m.map[b[0]]);
        if !maps_bijectively(&m.map, b, image) {
            return Err(MorphismViolation::PolygonNotBijective {
                e: dom.name(b[0]).to_string(),
                image: cod.name(m.map[b[0]]).to_string(),
            });
        }
        bij.push(b.iter().map(|&x| (x, m.map[x])).collect());
    }
    for b in dom.layers().blocks() {
        if !maps_bijectively(&m.map, b, cod.layer(m.map[b[0]])) {
            return Err(MorphismViolation::LayerNotBijective {
                e: dom.name(b[0]).to_string(),
                image: cod.name(m.map[b[0]]).to_string(),
            });
        }
    }
    Ok(CoveringCert {
        morphism: m.clone(),
        polygon_bijections: bij,
    })
}

/// Checks that `map` is an isomorphism `dom → cod`.
pub fn check_automorphism(dom: &Fbc, cod: &Fbc, map: &[Angle]) -> Result<(), MorphismViolation> {
    let m = Morphism::new(dom, cod, map.to_vec());
    check_morphism(&m)?;
    let mut hit = vec![false; cod.len()];
    for (e, &x) in map.iter().enumerate() {
        if dom.len() != cod.len() || hit[x] {
            return Err(MorphismViolation::NotBijective {
                e: dom.name(e).to_string(),
            });
        }
        hit[x] = true;
    }
    check_covering(&m).map(|_| ())
}

fn lift_step(cov: &CoveringCert, z: Angle, step: Step) -> Option<Angle> {
    let dom = cov.morphism.dom;
    match step {
        Step::Fwd => Some(dom.g(z)),
        Step::Bwd => Some(dom.g_inv(z)),
        Step::Tau(t) => cov.lift_tau(z, t),
    }
}

/// The unique lift of a codomain walk starting at `start`.
pub fn lift_walk(cov: &CoveringCert, w: &Walk, start: Angle) -> Result<Walk, CoverError> {
    let m = &cov.morphism;
    if m.map[start] != w.source() {
        return Err(CoverError::StartMismatch {
            start: m.dom.name(start).to_string(),
            origin: m.cod.name(w.source()).to_string(),
        });
    }
    let mut out = Walk::trivial(start);
    for &s in w.steps() {
        let z = out.target();
        let step = match s {
            Step::Tau(t) => Step::Tau(cov.lift_tau(z, t).expect("covering bijection")),
            other => other,
        };
        out.push(m.dom, step).expect("lifted steps are valid");
    }
    Ok(out)
}

/// Image of a domain walk.
pub fn project_walk(m: &Morphism, w: &Walk) -> Walk {
    let mut out = Walk::trivial(m.map[w.source()]);
    for &s in w.steps() {
        let step = match s {
            Step::Tau(t) => Step::Tau(m.map[t]),
            other => other,
        };
        out.push(m.cod, step).expect("morphisms preserve steps");
    }
    out
}

/// Propagates `φ(root) = image` along g, g⁻¹ and the covering's jump bijections.
fn propagate(cov: &CoveringCert, root: Angle, image: Angle) -> Option<Vec<Angle>> {
    let dom = cov.morphism.dom;
    let f = &cov.morphism.map;
    let mut phi = vec![usize::MAX; dom.len()];
    phi[root] = image;
    let mut queue = VecDeque::from([root]);
    while let Some(x) = queue.pop_front() {
        let px = phi[x];
        let mut targets = vec![(dom.g(x), dom.g(px)), (dom.g_inv(x), dom.g_inv(px))];
        for &y in dom.polygon(x) {
            targets.push((y, cov.lift_tau(px, f[y])?));
        }
        for (y, py) in targets {
            if phi[y] == usize::MAX {
                phi[y] = py;
                queue.push_back(y);
            } else if phi[y] != py {
                return None;
            }
        }
    }
    Some(phi)
}

/// All deck transformations, found by propagation from angle `0` over its fiber in angle order.
pub fn deck_group(cov: &CoveringCert) -> Result<Vec<Vec<Angle>>, CoverError> {
    let dom = cov.morphism.dom;
    if !dom.is_connected() {
        return Err(CoverError::Disconnected);
    }
    let f = &cov.morphism.map;
    let mut out = Vec::new();
    for c in (0..dom.len()).filter(|&c| f[c] == f[0]) {
        if let Some(phi) = propagate(cov, 0, c) {
            if check_automorphism(dom, dom, &phi).is_ok() {
                out.push(phi);
            }
        }
    }
    Ok(out)
}

/// Regular iff the deck group acts transitively on the fiber over `f(0)`.
pub fn is_regular(cov: &CoveringCert) -> Result<bool, CoverError> {
    let deck = deck_group(cov)?;
    let f = &cov.morphism.map;
    let fiber = f.iter().filter(|&&x| x == f[0]).count();
    Ok(deck.len() == fiber)
}

/// Outcome of the lifting criterion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LiftOutcome {
    /// The lift `φ: E1 → E2` with `f2 ∘ φ = f1` and `φ(e1) = e2`.
    Lifted(Vec<Angle>),
    /// A closed walk at `e1` whose image does not lift to a closed walk at `e2`.
    Obstruction(Walk),
}

/// Lifts `f1: E1 → E` through the covering `f2: E2 → E` with `φ(e1) = e2`.
///
/// Tree walks from `e1` are transported through `f2`; every non-tree step edge is a
/// generator whose closed lift is checked exactly.
pub fn lift_morphism(
    f1: &Morphism,
    f2: &CoveringCert,
    e1: Angle,
    e2: Angle,
) -> Result<LiftOutcome, CoverError> {
    let e1cfg = f1.dom;
    if !e1cfg.is_connected() {
        return Err(CoverError::Disconnected);
    }
    if f1.map[e1] != f2.morphism.map[e2] {
        return Err(CoverError::StartMismatch {
            start: f2.morphism.dom.name(e2).to_string(),
            origin: f1.cod.name(f1.map[e1]).to_string(),
        });
    }
    let image_step = |s: Step| match s {
        Step::Tau(y) => Step::Tau(f1.map[y]),
        other => other,
    };
    let n = e1cfg.len();
    let mut phi = vec![usize::MAX; n];
    let mut tree: Vec<Option<Walk>> = vec![None; n];
    phi[e1] = e2;
    tree[e1] = Some(Walk::trivial(e1));
    let mut queue = VecDeque::from([e1]);
    let mut edges = Vec::new();
    while let Some(x) = queue.pop_front() {
        for s in crate::walks::steps_from(e1cfg, x) {
            let y = match s {
                Step::Fwd => e1cfg.g(x),
                Step::Bwd => e1cfg.g_inv(x),
                Step::Tau(t) => t,
            };
            let py = lift_step(f2, phi[x], image_step(s)).expect("covering bijection");
            if phi[y] == usize::MAX {
                phi[y] = py;
                let mut w = tree[x].clone().expect("reached");
                w.push(e1cfg, s).expect("valid step");
                tree[y] = Some(w);
                queue.push_back(y);
            } else {
                edges.push((x, s, y, py));
            }
        }
    }
    for (x, s, y, py) in edges {
        if py != phi[y] {
            let mut w = tree[x].clone().expect("reached");
            w.push(e1cfg, s).expect("valid step");
            let back = tree[y].as_ref().expect("reached").invert();
            let closed = Walk::compose(&back, &w).expect("endpoints match");
            return Ok(LiftOutcome::Obstruction(closed));
        }
    }
    let m = Morphism::new(e1cfg, f2.morphism.dom, phi.clone());
    check_morphism(&m).map_err(CoverError::NotMorphism)?;
    Ok(LiftOutcome::Lifted(phi))
}
