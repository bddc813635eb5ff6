//! Sub-configurations, unions and intersections.

use super::{Angle, Fbc, Partition, UnionFind, Violation};
use thiserror::Error;

/// A g-closed subset of a parent configuration with refined partitions.
///
/// Partitions are stored over parent angle indices restricted to `angles`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubFbc {
    angles: Vec<Angle>,
    member: Vec<bool>,
    polygons: Vec<Vec<Angle>>,
    layers: Vec<Vec<Angle>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SubFbcError {
    #[error("angle {0} is not closed under g in the sub-configuration")]
    NotGClosed(String),
    #[error("blocks do not partition the sub-configuration: angle {0}")]
    NotPartition(String),
    #[error("block of {0} is not contained in the corresponding parent block")]
    NotRefining(String),
    #[error("sub-configuration violates an axiom: {0}")]
    Axiom(Violation),
    #[error("no parts given")]
    Empty,
}

impl SubFbc {
    /// Validates the sub-configuration conditions against `parent`.
    pub fn new(
        parent: &Fbc,
        angles: Vec<Angle>,
        polygons: Vec<Vec<Angle>>,
        layers: Vec<Vec<Angle>>,
    ) -> Result<SubFbc, SubFbcError> {
        let mut angles = angles;
        angles.sort_unstable();
        angles.dedup();
        let mut member = vec![false; parent.len()];
        for &a in &angles {
            member[a] = true;
        }
        for &a in &angles {
            if !member[parent.g(a)] {
                return Err(SubFbcError::NotGClosed(parent.name(a).to_string()));
            }
        }
        let norm = |blocks: Vec<Vec<Angle>>| -> Result<Vec<Vec<Angle>>, SubFbcError> {
            let mut seen = vec![false; parent.len()];
            let mut out = Vec::new();
            for mut b in blocks {
                b.sort_unstable();
                for &x in &b {
                    if !member[x] || seen[x] {
                        return Err(SubFbcError::NotPartition(parent.name(x).to_string()));
                    }
                    seen[x] = true;
                }
                if !b.is_empty() {
                    out.push(b);
                }
            }
            if let Some(&x) = angles.iter().find(|&&x| !seen[x]) {
                return Err(SubFbcError::NotPartition(parent.name(x).to_string()));
            }
            out.sort_by_key(|b| b[0]);
            Ok(out)
        };
        let polygons = norm(polygons)?;
        let layers = norm(layers)?;
        for b in &polygons {
            if b.iter().any(|&x| !parent.polygons().same(x, b[0])) {
                return Err(SubFbcError::NotRefining(parent.name(b[0]).to_string()));
            }
        }
        for b in &layers {
            if b.iter().any(|&x| !parent.layers().same(x, b[0])) {
                return Err(SubFbcError::NotRefining(parent.name(b[0]).to_string()));
            }
        }
        let sub = SubFbc {
            angles,
            member,
            polygons,
            layers,
        };
        sub.to_fbc(parent)?;
        Ok(sub)
    }

    /// The whole parent as a sub-configuration of itself.
    pub fn full(parent: &Fbc) -> SubFbc {
        SubFbc {
            angles: (0..parent.len()).collect(),
            member: vec![true; parent.len()],
            polygons: parent.polygons().blocks().to_vec(),
            layers: parent.layers().blocks().to_vec(),
        }
    }

    /// Parent angle set with the given polygon blocks and all other polygons singletons;
    /// layers are singletons.
    pub fn with_polygons(parent: &Fbc, blocks: &[Vec<Angle>]) -> Result<SubFbc, SubFbcError> {
        let mut covered = vec![false; parent.len()];
        let mut polys: Vec<Vec<Angle>> = blocks.to_vec();
        for b in blocks {
            for &x in b {
                covered[x] = true;
            }
        }
        for (x, &c) in covered.iter().enumerate() {
            if !c {
                polys.push(vec![x]);
            }
        }
        let layers = (0..parent.len()).map(|x| vec![x]).collect();
        SubFbc::new(parent, (0..parent.len()).collect(), polys, layers)
    }

    pub fn angles(&self) -> &[Angle] {
        &self.angles
    }

    pub fn contains(&self, a: Angle) -> bool {
        self.member[a]
    }

    pub fn polygons(&self) -> &[Vec<Angle>] {
        &self.polygons
    }

    pub fn layers(&self) -> &[Vec<Angle>] {
        &self.layers
    }

    /// Sub-polygon containing `a`, if `a` is in the sub-configuration.
    pub fn polygon_of(&self, a: Angle) -> Option<&[Angle]> {
        self.polygons
            .iter()
            .find(|b| b.contains(&a))
            .map(|b| b.as_slice())
    }

    /// The sub-configuration as a standalone validated configuration, in parent angle order.
    pub fn to_fbc(&self, parent: &Fbc) -> Result<Fbc, SubFbcError> {
        let mut local = vec![usize::MAX; parent.len()];
        for (i, &a) in self.angles.iter().enumerate() {
            local[a] = i;
        }
        let names = self
            .angles
            .iter()
            .map(|&a| parent.name(a).to_string())
            .collect();
        let g = self.angles.iter().map(|&a| local[parent.g(a)]).collect();
        let map = |blocks: &[Vec<Angle>]| {
            Partition::from_blocks_unchecked(
                self.angles.len(),
                blocks
                    .iter()
                    .map(|b| b.iter().map(|&x| local[x]).collect())
                    .collect(),
            )
        };
        let degree = self.angles.iter().map(|&a| parent.degree(a)).collect();
        Fbc::from_parts(names, g, map(&self.polygons), map(&self.layers), degree)
            .map_err(|mut v| SubFbcError::Axiom(v.remove(0)))
    }
}

/// Union of parts: angle union with transitively closed block equivalences.
pub fn sub_union(parent: &Fbc, parts: &[SubFbc]) -> Result<SubFbc, SubFbcError> {
    if parts.is_empty() {
        return Err(SubFbcError::Empty);
    }
    let n = parent.len();
    let mut angles: Vec<Angle> = parts
        .iter()
        .flat_map(|p| p.angles.iter().copied())
        .collect();
    angles.sort_unstable();
    angles.dedup();
    let close = |pick: &dyn Fn(&SubFbc) -> &[Vec<Angle>]| {
        let mut uf = UnionFind::new(n);
        for p in parts {
            for b in pick(p) {
                for &x in b {
                    uf.union(b[0], x);
                }
            }
        }
        let part = uf.into_partition();
        part.blocks()
            .iter()
            .filter(|b| angles.binary_search(&b[0]).is_ok())
            .cloned()
            .collect::<Vec<_>>()
    };
    let polys = close(&|p| &p.polygons);
    let layers = close(&|p| &p.layers);
    SubFbc::new(parent, angles, polys, layers)
}

/// Intersection of parts: common angles with intersected blocks.
pub fn sub_intersection(parent: &Fbc, parts: &[SubFbc]) -> Result<SubFbc, SubFbcError> {
    if parts.is_empty() {
        return Err(SubFbcError::Empty);
    }
    let angles: Vec<Angle> = parts[0]
        .angles
        .iter()
        .copied()
        .filter(|&a| parts.iter().all(|p| p.contains(a)))
        .collect();
    let meet = |pick: &dyn Fn(&SubFbc) -> &[Vec<Angle>]| {
        // label each angle by the tuple of its block indices across parts
        let labels: Vec<Vec<usize>> = angles
            .iter()
            .map(|&a| {
                parts
                    .iter()
                    .map(|p| pick(p).iter().position(|b| b.contains(&a)).expect("member"))
                    .collect()
            })
            .collect();
        let part = Partition::from_labels(&labels);
        part.blocks()
            .iter()
            .map(|b| b.iter().map(|&i| angles[i]).collect())
            .collect::<Vec<Vec<Angle>>>()
    };
    let polys = meet(&|p| &p.polygons);
    let layers = meet(&|p| &p.layers);
    SubFbc::new(parent, angles, polys, layers)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders;

    fn edge_parts(cfg: &Fbc) -> Vec<SubFbc> {
        cfg.polygons()
            .blocks()
            .iter()
            .map(|b| SubFbc::with_polygons(cfg, std::slice::from_ref(b)).unwrap())
            .collect()
    }

    #[test]
    fn union_of_edge_parts_rebuilds_polygons() {
        let cfg = builders::brauer_path(3, 2);
        let parts = edge_parts(&cfg);
        let u = sub_union(&cfg, &parts).unwrap();
        assert_eq!(u.polygons(), cfg.polygons().blocks());
        assert_eq!(u, SubFbc::full(&cfg));
    }

    #[test]
    fn intersection_of_edge_parts_is_discrete() {
        let cfg = builders::brauer_path(3, 2);
        let parts = edge_parts(&cfg);
        let i = sub_intersection(&cfg, &parts).unwrap();
        assert!(i.polygons().iter().all(|b| b.len() == 1));
        assert_eq!(i.angles().len(), cfg.len());
    }

    #[test]
    fn union_of_single_part_is_that_part() {
        let cfg = builders::brauer_star(3, 1);
        let parts = edge_parts(&cfg);
        assert_eq!(sub_union(&cfg, &parts[..1]).unwrap(), parts[0]);
    }

    #[test]
    fn non_refining_block_rejected() {
        let cfg = builders::three_edges();
        let one = cfg.index_of("1").unwrap();
        let two = cfg.index_of("2").unwrap();
        let err = SubFbc::with_polygons(&cfg, &[vec![one, two]]).unwrap_err();
        assert!(matches!(err, SubFbcError::NotRefining(_)));
    }
}
