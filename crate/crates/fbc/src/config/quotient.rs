//! Quotients by admissible groups of automorphisms.

use super::{Angle, Fbc, Partition, UnionFind, Violation};
use crate::coverings::{check_automorphism, MorphismViolation};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum QuotientError {
    #[error("map {index} is not an automorphism: {violation}")]
    NotAutomorphism {
        index: usize,
        violation: MorphismViolation,
    },
    #[error("orbit of {orbit} meets polygon of {a} twice (at {a} and {b})")]
    NotAdmissible { orbit: String, a: String, b: String },
    #[error("quotient is not a valid configuration: {0}")]
    Invalid(Violation),
}

/// Quotient configuration with its projection `e ↦ [e]`.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub cfg: Fbc,
    pub projection: Vec<Angle>,
    /// The full group generated by the input maps, sorted.
    pub group: Vec<Vec<Angle>>,
}

/// Closes a set of permutations under composition; the identity is always included.
pub fn generate_group(n: usize, gens: &[Vec<Angle>]) -> Vec<Vec<Angle>> {
    let id: Vec<Angle> = (0..n).collect();
    let mut seen: BTreeSet<Vec<Angle>> = BTreeSet::new();
    seen.insert(id.clone());
    let mut frontier = vec![id];
    while let Some(p) = frontier.pop() {
        for s in gens {
            let q: Vec<Angle> = p.iter().map(|&x| s[x]).collect();
            if seen.insert(q.clone()) {
                frontier.push(q);
            }
        }
    }
    seen.into_iter().collect()
}

/// Quotient of `cfg` by the group generated by `maps`.
///
/// Orbit classes are ordered and named by their least member.
pub fn quotient(cfg: &Fbc, maps: &[Vec<Angle>]) -> Result<Quotient, QuotientError> {
    for (index, m) in maps.iter().enumerate() {
        check_automorphism(cfg, cfg, m).map_err(|v| QuotientError::NotAutomorphism {
            index,
            violation: v,
        })?;
    }
    let n = cfg.len();
    let group = generate_group(n, maps);
    let mut class = vec![usize::MAX; n];
    let mut reps = Vec::new();
    for e in 0..n {
        if class[e] != usize::MAX {
            continue;
        }
        let id = reps.len();
        reps.push(e);
        for p in &group {
            class[p[e]] = id;
        }
    }
    for b in cfg.polygons().blocks() {
        for (i, &a) in b.iter().enumerate() {
            if let Some(&c) = b[i + 1..].iter().find(|&&c| class[c] == class[a]) {
                return Err(QuotientError::NotAdmissible {
                    orbit: cfg.name(reps[class[a]]).to_string(),
                    a: cfg.name(a).to_string(),
                    b: cfg.name(c).to_string(),
                });
            }
        }
    }
    let m = reps.len();
    let names = reps.iter().map(|&r| cfg.name(r).to_string()).collect();
    let g = reps.iter().map(|&r| class[cfg.g(r)]).collect();
    // for automorphisms the image blocks {[h] : h ∈ B} are disjoint or equal
    let push = |p: &Partition| {
        let mut uf = UnionFind::new(m);
        for (i, &r) in reps.iter().enumerate() {
            for &h in p.block_containing(r) {
                uf.union(i, class[h]);
            }
        }
        uf.into_partition()
    };
    let poly = push(cfg.polygons());
    let layer = push(cfg.layers());
    let degree = reps.iter().map(|&r| cfg.degree(r)).collect();
    let q = Fbc::from_parts(names, g, poly, layer, degree)
        .map_err(|mut v| QuotientError::Invalid(v.remove(0)))?;
    Ok(Quotient {
        cfg: q,
        projection: class,
        group,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders;
    use crate::coverings::{check_covering, is_regular, Morphism};

    #[test]
    fn trivial_group_gives_isomorphic_copy() {
        let cfg = builders::three_edges();
        let q = quotient(&cfg, &[]).unwrap();
        assert_eq!(q.cfg, cfg);
    }

    #[test]
    fn rotation_quotient_is_single_edge() {
        let cfg = builders::three_edges();
        let rot = cfg.g_perm().to_vec();
        let q = quotient(&cfg, &[rot]).unwrap();
        assert_eq!(q.cfg.len(), 2);
        assert_eq!(q.cfg.polygons().num_blocks(), 1);
        assert_eq!(q.group.len(), 3);
        let cov = check_covering(&Morphism::new(&cfg, &q.cfg, q.projection.clone())).unwrap();
        assert!(is_regular(&cov).unwrap());
    }

    #[test]
    fn orbit_meeting_polygon_twice_is_rejected() {
        // swapping the two half-edges of the single edge puts both in one orbit
        let cfg = builders::one_edge();
        let swap = vec![1, 0];
        let err = quotient(&cfg, &[swap]).unwrap_err();
        assert!(matches!(err, QuotientError::NotAdmissible { .. }));
    }
}
