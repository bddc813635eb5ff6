//! Finite fractional Brauer configurations: data model, axiom validation and classification.
//!
//! Angles are stored as indices `0..n` into the ordered angle list; names are kept for I/O.
//! Every iteration order in the crate derives from this index order.

mod partition;
mod quotient;
mod sequences;
mod sub;

pub use partition::{Partition, PartitionError, UnionFind};
pub use quotient::{generate_group, quotient, Quotient, QuotientError};
pub use sequences::{f7_witness, StandardSequence, Word};
pub use sub::{sub_intersection, sub_union, SubFbc, SubFbcError};

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt;

/// Angle index into [`Fbc::names`].
pub type Angle = usize;

/// Unvalidated configuration description, mirroring the file format sections.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawFbc {
    pub angles: Vec<String>,
    /// Cycles of the g-permutation; angles not listed are fixed.
    pub g: Vec<Vec<String>>,
    pub polygons: Vec<Vec<String>>,
    /// Layer blocks; `None` means all layers are singletons.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub layers: Option<Vec<Vec<String>>>,
    /// Pairs of (angle, degree); every orbit needs at least one entry.
    pub degree: Vec<(String, i64)>,
}

/// A violated well-formedness condition or axiom, with witness angle names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    InvalidId {
        id: String,
    },
    DuplicateAngle {
        id: String,
    },
    UnknownAngle {
        id: String,
        section: &'static str,
    },
    NotBijection {
        id: String,
    },
    NotPartition {
        section: &'static str,
        id: String,
        defect: &'static str,
    },
    MissingDegree {
        id: String,
    },
    NonPositiveDegree {
        id: String,
        value: i64,
    },
    /// Same layer, different polygons.
    F1 {
        e: String,
        h: String,
    },
    /// Same layer, but `g·e1` and `g·e2` lie in different polygons.
    F2 {
        e1: String,
        e2: String,
    },
    /// Same orbit, different degree.
    F3 {
        e1: String,
        e2: String,
    },
    /// Polygon equality of `e1, e2` differs from that of their Nakayama images.
    F4 {
        e1: String,
        e2: String,
    },
    /// Layer equality of `e1, e2` differs from that of their Nakayama images.
    F5 {
        e1: String,
        e2: String,
    },
    /// The full-turn layer word at `e` is a proper initial segment of the one at `h`.
    F6 {
        e: String,
        h: String,
    },
}

impl Violation {
    /// Short axiom tag such as `f3` or `structure`.
    pub fn axiom(&self) -> &'static str {
        match self {
            Violation::F1 { .. } => "f1",
            Violation::F2 { .. } => "f2",
            Violation::F3 { .. } => "f3",
            Violation::F4 { .. } => "f4",
            Violation::F5 { .. } => "f5",
            Violation::F6 { .. } => "f6",
            _ => "structure",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::InvalidId { id } => write!(f, "invalid angle id {id:?}"),
            Violation::DuplicateAngle { id } => write!(f, "duplicate angle {id}"),
            Violation::UnknownAngle { id, section } => {
                write!(f, "unknown angle {id} in section {section}")
            }
            Violation::NotBijection { id } => {
                write!(
                    f,
                    "g is not a bijection: {id} appears in two cycle positions"
                )
            }
            Violation::NotPartition {
                section,
                id,
                defect,
            } => {
                write!(f, "{section} is not a partition: angle {id} {defect}")
            }
            Violation::MissingDegree { id } => write!(f, "no degree given for the orbit of {id}"),
            Violation::NonPositiveDegree { id, value } => {
                write!(f, "degree of {id} must be positive, got {value}")
            }
            Violation::F1 { e, h } => write!(f, "(f1) L({e}) = L({h}) but P({e}) != P({h})"),
            Violation::F2 { e1, e2 } => {
                write!(f, "(f2) L({e1}) = L({e2}) but P(g.{e1}) != P(g.{e2})")
            }
            Violation::F3 { e1, e2 } => {
                write!(
                    f,
                    "(f3) {e1} and {e2} share an orbit but have different degrees"
                )
            }
            Violation::F4 { e1, e2 } => write!(
                f,
                "(f4) polygon equality of {e1}, {e2} differs from that of their Nakayama images"
            ),
            Violation::F5 { e1, e2 } => write!(
                f,
                "(f5) layer equality of {e1}, {e2} differs from that of their Nakayama images"
            ),
            Violation::F6 { e, h } => write!(
                f,
                "(f6) full-turn layer word at {e} is a proper initial segment of the one at {h}"
            ),
        }
    }
}

/// Classification of a valid configuration; the most specific class is reported.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum FbcClass {
    General,
    TypeS,
    TypeMS,
}

impl fmt::Display for FbcClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FbcClass::General => "general",
            FbcClass::TypeS => "S",
            FbcClass::TypeMS => "MS",
        })
    }
}

/// A validated finite f-BC. Immutable after construction.
#[derive(Clone, Debug)]
pub struct Fbc {
    names: Vec<String>,
    index: HashMap<String, usize>,
    g: Vec<usize>,
    ginv: Vec<usize>,
    poly: Partition,
    layer: Partition,
    degree: Vec<usize>,
    orbits: Partition,
    /// Orbit cycles in g-order starting at the least member.
    cycles: Vec<Vec<usize>>,
    pos: Vec<usize>,
}

impl PartialEq for Fbc {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names
            && self.g == other.g
            && self.poly == other.poly
            && self.layer == other.layer
            && self.degree == other.degree
    }
}

impl Eq for Fbc {}

fn valid_id(id: &str) -> bool {
    !id.is_empty() && !id.chars().any(char::is_whitespace)
}

impl Fbc {
    /// Validates a raw description; returns every violation found.
    pub fn from_raw(raw: &RawFbc) -> Result<Fbc, Vec<Violation>> {
        let cfg = Fbc::from_raw_unchecked(raw)?;
        let errs = cfg.axiom_violations();
        if errs.is_empty() {
            Ok(cfg)
        } else {
            Err(errs)
        }
    }

    /// Parses a raw description with structural checks only; axioms (f1)-(f6) are not checked.
    ///
    /// Listed degrees apply to their angle; unlisted angles take the first listed degree of
    /// their orbit, so conflicting entries surface as (f3) violations.
    pub fn from_raw_unchecked(raw: &RawFbc) -> Result<Fbc, Vec<Violation>> {
        let mut errs = Vec::new();
        let mut index = HashMap::new();
        for a in &raw.angles {
            if !valid_id(a) {
                errs.push(Violation::InvalidId { id: a.clone() });
            } else if index.insert(a.clone(), index.len()).is_some() {
                errs.push(Violation::DuplicateAngle { id: a.clone() });
            }
        }
        if !errs.is_empty() {
            return Err(errs);
        }
        let n = raw.angles.len();
        let lookup = |id: &str, section: &'static str, errs: &mut Vec<Violation>| {
            let r = index.get(id).copied();
            if r.is_none() {
                errs.push(Violation::UnknownAngle {
                    id: id.to_string(),
                    section,
                });
            }
            r
        };
        let mut g: Vec<Option<usize>> = vec![None; n];
        let mut has_pre = vec![false; n];
        for cyc in &raw.g {
            let ids: Vec<Option<usize>> = cyc.iter().map(|a| lookup(a, "g", &mut errs)).collect();
            if ids.iter().any(Option::is_none) {
                continue;
            }
            let ids: Vec<usize> = ids.into_iter().flatten().collect();
            for (k, &a) in ids.iter().enumerate() {
                let b = ids[(k + 1) % ids.len()];
                if g[a].is_some() || has_pre[b] {
                    let bad = if g[a].is_some() { a } else { b };
                    let v = Violation::NotBijection {
                        id: raw.angles[bad].clone(),
                    };
                    if !errs.contains(&v) {
                        errs.push(v);
                    }
                    continue;
                }
                g[a] = Some(b);
                has_pre[b] = true;
            }
        }
        if g.iter().zip(&has_pre).any(|(x, &p)| x.is_some() != p) && errs.is_empty() {
            let bad = (0..n)
                .find(|&i| g[i].is_some() != has_pre[i])
                .expect("exists");
            errs.push(Violation::NotBijection {
                id: raw.angles[bad].clone(),
            });
        }
        let read_blocks =
            |blocks: &[Vec<String>], section: &'static str, errs: &mut Vec<Violation>| {
                let mut out = Vec::new();
                for b in blocks {
                    out.push(b.iter().filter_map(|a| lookup(a, section, errs)).collect());
                }
                match Partition::from_blocks(n, out) {
                    Ok(p) => Some(p),
                    Err(e) => {
                        let (x, defect) = match e {
                            PartitionError::Repeated(x) => (x, "appears in two blocks"),
                            PartitionError::Missing(x) => (x, "is in no block"),
                            PartitionError::OutOfRange(x) => (x, "is out of range"),
                        };
                        errs.push(Violation::NotPartition {
                            section,
                            id: raw.angles[x].clone(),
                            defect,
                        });
                        None
                    }
                }
            };
        let poly = read_blocks(&raw.polygons, "polygons", &mut errs);
        let layer = match &raw.layers {
            Some(l) => read_blocks(l, "layers", &mut errs),
            None => Some(Partition::discrete(n)),
        };
        let mut listed: Vec<Option<usize>> = vec![None; n];
        for (a, v) in &raw.degree {
            if let Some(i) = lookup(a, "degree", &mut errs) {
                if *v <= 0 {
                    errs.push(Violation::NonPositiveDegree {
                        id: a.clone(),
                        value: *v,
                    });
                } else if listed[i].is_none() {
                    listed[i] = Some(*v as usize);
                }
            }
        }
        if !errs.is_empty() {
            return Err(errs);
        }
        let g: Vec<usize> = g.iter().enumerate().map(|(i, x)| x.unwrap_or(i)).collect();
        let orbits = orbit_partition(&g);
        let mut degree = vec![0usize; n];
        for b in orbits.blocks() {
            let default = raw
                .degree
                .iter()
                .filter_map(|(a, _)| index.get(a.as_str()).copied())
                .find(|i| orbits.same(*i, b[0]))
                .and_then(|i| listed[i]);
            match default {
                None => errs.push(Violation::MissingDegree {
                    id: raw.angles[b[0]].clone(),
                }),
                Some(d) => {
                    for &x in b {
                        degree[x] = listed[x].unwrap_or(d);
                    }
                }
            }
        }
        if !errs.is_empty() {
            return Err(errs);
        }
        Fbc::assemble(
            raw.angles.clone(),
            g,
            poly.expect("checked"),
            layer.expect("checked"),
            degree,
        )
    }

    /// Builds and validates a configuration from index data.
    pub fn from_parts(
        names: Vec<String>,
        g: Vec<usize>,
        poly: Partition,
        layer: Partition,
        degree: Vec<usize>,
    ) -> Result<Fbc, Vec<Violation>> {
        let cfg = Fbc::assemble(names, g, poly, layer, degree)?;
        let errs = cfg.axiom_violations();
        if errs.is_empty() {
            Ok(cfg)
        } else {
            Err(errs)
        }
    }

    /// Builds the structure with structural checks only (bijection, ids, degree positivity).
    pub fn assemble(
        names: Vec<String>,
        g: Vec<usize>,
        poly: Partition,
        layer: Partition,
        degree: Vec<usize>,
    ) -> Result<Fbc, Vec<Violation>> {
        let n = names.len();
        assert!(g.len() == n && poly.len() == n && layer.len() == n && degree.len() == n);
        let mut errs = Vec::new();
        let mut index = HashMap::new();
        for (i, a) in names.iter().enumerate() {
            if !valid_id(a) {
                errs.push(Violation::InvalidId { id: a.clone() });
            } else if index.insert(a.clone(), i).is_some() {
                errs.push(Violation::DuplicateAngle { id: a.clone() });
            }
        }
        let mut ginv = vec![usize::MAX; n];
        for (i, &t) in g.iter().enumerate() {
            if t >= n || ginv[t] != usize::MAX {
                errs.push(Violation::NotBijection {
                    id: names[i].clone(),
                });
            } else {
                ginv[t] = i;
            }
        }
        for (i, &d) in degree.iter().enumerate() {
            if d == 0 {
                errs.push(Violation::NonPositiveDegree {
                    id: names[i].clone(),
                    value: 0,
                });
            }
        }
        if !errs.is_empty() {
            return Err(errs);
        }
        let orbits = orbit_partition(&g);
        let mut cycles = Vec::new();
        let mut pos = vec![0; n];
        for b in orbits.blocks() {
            let mut cyc = vec![b[0]];
            let mut x = g[b[0]];
            while x != b[0] {
                cyc.push(x);
                x = g[x];
            }
            for (k, &y) in cyc.iter().enumerate() {
                pos[y] = k;
            }
            cycles.push(cyc);
        }
        Ok(Fbc {
            names,
            index,
            g,
            ginv,
            poly,
            layer,
            degree,
            orbits,
            cycles,
            pos,
        })
    }

    /// Checks (f1)-(f6); one witness per violated axiom.
    pub fn axiom_violations(&self) -> Vec<Violation> {
        let n = self.len();
        let nm = |i: usize| self.names[i].clone();
        let mut errs = Vec::new();
        let first_pair = |pred: &dyn Fn(usize, usize) -> bool| {
            (0..n).find_map(|a| (0..n).find(|&b| pred(a, b)).map(|b| (a, b)))
        };
        if let Some((e, h)) = first_pair(&|a, b| self.layer.same(a, b) && !self.poly.same(a, b)) {
            errs.push(Violation::F1 { e: nm(e), h: nm(h) });
        }
        if let Some((a, b)) =
            first_pair(&|a, b| self.layer.same(a, b) && !self.poly.same(self.g[a], self.g[b]))
        {
            errs.push(Violation::F2 {
                e1: nm(a),
                e2: nm(b),
            });
        }
        if let Some((a, b)) =
            first_pair(&|a, b| self.orbits.same(a, b) && self.degree[a] != self.degree[b])
        {
            errs.push(Violation::F3 {
                e1: nm(a),
                e2: nm(b),
            });
        }
        let sigma = self.nakayama();
        if let Some((a, b)) =
            first_pair(&|a, b| self.poly.same(a, b) != self.poly.same(sigma[a], sigma[b]))
        {
            errs.push(Violation::F4 {
                e1: nm(a),
                e2: nm(b),
            });
        }
        if let Some((a, b)) =
            first_pair(&|a, b| self.layer.same(a, b) != self.layer.same(sigma[a], sigma[b]))
        {
            errs.push(Violation::F5 {
                e1: nm(a),
                e2: nm(b),
            });
        }
        if let Some((e, h)) = first_pair(&|e, h| self.f6_prefix(e, h)) {
            errs.push(Violation::F6 { e: nm(e), h: nm(h) });
        }
        errs
    }

    /// True when `d(e) < d(h)` and the layer words agree on the first `d(e)` steps.
    fn f6_prefix(&self, e: usize, h: usize) -> bool {
        let de = self.degree[e];
        if de >= self.degree[h] {
            return false;
        }
        let (mut x, mut y) = (e, h);
        for _ in 0..de {
            if !self.layer.same(x, y) {
                return false;
            }
            x = self.g[x];
            y = self.g[y];
        }
        true
    }

    /// Re-checks that a reported axiom violation holds on this (possibly invalid) structure.
    pub fn confirms(&self, v: &Violation) -> bool {
        let ix = |s: &str| self.index_of(s);
        let pair = |a: &str, b: &str| ix(a).zip(ix(b));
        let sigma = self.nakayama();
        match v {
            Violation::F1 { e, h } => {
                pair(e, h).is_some_and(|(a, b)| self.layer.same(a, b) && !self.poly.same(a, b))
            }
            Violation::F2 { e1, e2 } => pair(e1, e2).is_some_and(|(a, b)| {
                self.layer.same(a, b) && !self.poly.same(self.g[a], self.g[b])
            }),
            Violation::F3 { e1, e2 } => pair(e1, e2)
                .is_some_and(|(a, b)| self.orbits.same(a, b) && self.degree[a] != self.degree[b]),
            Violation::F4 { e1, e2 } => pair(e1, e2)
                .is_some_and(|(a, b)| self.poly.same(a, b) != self.poly.same(sigma[a], sigma[b])),
            Violation::F5 { e1, e2 } => pair(e1, e2)
                .is_some_and(|(a, b)| self.layer.same(a, b) != self.layer.same(sigma[a], sigma[b])),
            Violation::F6 { e, h } => pair(e, h).is_some_and(|(a, b)| self.f6_prefix(a, b)),
            _ => false,
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, e: Angle) -> &str {
        &self.names[e]
    }

    pub fn index_of(&self, name: &str) -> Option<Angle> {
        self.index.get(name).copied()
    }

    pub fn g(&self, e: Angle) -> Angle {
        self.g[e]
    }

    pub fn g_inv(&self, e: Angle) -> Angle {
        self.ginv[e]
    }

    pub fn g_perm(&self) -> &[usize] {
        &self.g
    }

    /// `g^k · e` for any integer `k`.
    pub fn g_pow(&self, e: Angle, k: i64) -> Angle {
        let cyc = &self.cycles[self.orbits.block_of(e)];
        let len = cyc.len() as i64;
        let p = (self.pos[e] as i64 + k).rem_euclid(len);
        cyc[p as usize]
    }

    pub fn degree(&self, e: Angle) -> usize {
        self.degree[e]
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degree
    }

    pub fn polygons(&self) -> &Partition {
        &self.poly
    }

    pub fn layers(&self) -> &Partition {
        &self.layer
    }

    /// Vertex partition (g-orbits).
    pub fn orbits(&self) -> &Partition {
        &self.orbits
    }

    pub fn polygon(&self, e: Angle) -> &[usize] {
        self.poly.block_containing(e)
    }

    pub fn layer(&self, e: Angle) -> &[usize] {
        self.layer.block_containing(e)
    }

    pub fn orbit_size(&self, e: Angle) -> usize {
        self.orbits.block_containing(e).len()
    }

    /// Orbit cycle of vertex `v` (block id of [`Fbc::orbits`]) in g-order.
    pub fn cycle(&self, v: usize) -> &[usize] {
        &self.cycles[v]
    }

    /// The Nakayama automorphism `e ↦ g^{d(e)}·e` as a permutation vector.
    pub fn nakayama(&self) -> Vec<usize> {
        (0..self.len()).map(|e| self.sigma(e)).collect()
    }

    pub fn sigma(&self, e: Angle) -> Angle {
        self.g_pow(e, self.degree[e] as i64)
    }

    pub fn sigma_inv(&self, e: Angle) -> Angle {
        self.g_pow(e, -(self.degree[e] as i64))
    }

    /// f-degree `d(v)/|v|` of the vertex with block id `v`.
    pub fn f_degree(&self, v: usize) -> Ratio<i64> {
        let b = self.orbits.block(v);
        Ratio::new(self.degree[b[0]] as i64, b.len() as i64)
    }

    /// Most specific class: MS when all layers are singletons, S when (f7) holds.
    pub fn classify(&self) -> FbcClass {
        if self.layer.is_discrete() {
            FbcClass::TypeMS
        } else if f7_witness(self).is_none() {
            FbcClass::TypeS
        } else {
            FbcClass::General
        }
    }

    pub fn is_ms(&self) -> bool {
        self.layer.is_discrete()
    }

    /// Connected components of the step graph (g-steps and polygon jumps) as a partition.
    pub fn components(&self) -> Partition {
        let mut uf = UnionFind::new(self.len());
        for e in 0..self.len() {
            uf.union(e, self.g[e]);
        }
        for b in self.poly.blocks() {
            for &x in b {
                uf.union(b[0], x);
            }
        }
        uf.into_partition()
    }

    pub fn is_connected(&self) -> bool {
        !self.is_empty() && self.components().num_blocks() == 1
    }

    /// True when this is a Brauer configuration: layers trivial and integer f-degrees.
    pub fn is_brauer_configuration(&self) -> bool {
        self.is_ms()
            && (0..self.orbits.num_blocks()).all(|v| self.f_degree(v).is_integer())
            && self.poly.blocks().iter().all(|b| b.len() >= 2)
    }

    /// Canonical raw description: cycles and blocks ordered by least member.
    pub fn to_raw(&self) -> RawFbc {
        let nm = |b: &[usize]| b.iter().map(|&i| self.names[i].clone()).collect::<Vec<_>>();
        RawFbc {
            angles: self.names.clone(),
            g: self.cycles.iter().map(|c| nm(c)).collect(),
            polygons: self.poly.blocks().iter().map(|b| nm(b)).collect(),
            layers: if self.layer.is_discrete() {
                None
            } else {
                Some(self.layer.blocks().iter().map(|b| nm(b)).collect())
            },
            degree: self
                .cycles
                .iter()
                .map(|c| (self.names[c[0]].clone(), self.degree[c[0]] as i64))
                .collect(),
        }
    }

    /// Same angle set and g with new partitions; degrees are kept.
    pub fn with_partitions(
        &self,
        poly: Partition,
        layer: Partition,
    ) -> Result<Fbc, Vec<Violation>> {
        Fbc::from_parts(
            self.names.clone(),
            self.g.clone(),
            poly,
            layer,
            self.degree.clone(),
        )
    }
}

pub(crate) fn orbit_partition(g: &[usize]) -> Partition {
    let mut uf = UnionFind::new(g.len());
    for (i, &t) in g.iter().enumerate() {
        uf.union(i, t);
    }
    uf.into_partition()
}
