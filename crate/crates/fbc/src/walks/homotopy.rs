//! Homotopy decision: exact for type MS, bounded bidirectional search otherwise.

use super::{alpha_unchecked, normalize_ms, Reduced, Walk};
use crate::config::Fbc;
use std::collections::HashSet;

/// Default number of breadth-first rewrite layers.
pub const DEFAULT_BUDGET: usize = 64;

/// Upper bound on explored states across both search sides.
const STATE_CAP: usize = 20_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Homotopy {
    Yes,
    No,
    /// The search exhausted the given budget without deciding.
    Unknown(usize),
}

/// True when `d(e) = d(h)` whenever `L(e) = L(h)`; then α is invariant under (h4).
fn alpha_is_invariant(cfg: &Fbc) -> bool {
    cfg.layers()
        .blocks()
        .iter()
        .all(|b| b.iter().all(|&x| cfg.degree(x) == cfg.degree(b[0])))
}

/// Decides `u ∼ v`.
pub fn homotopic(cfg: &Fbc, u: &Walk, v: &Walk, budget: usize) -> Homotopy {
    if u.source() != v.source() || u.target() != v.target() {
        return Homotopy::No;
    }
    if cfg.is_ms() {
        let a = normalize_ms(cfg, u).expect("type MS");
        let b = normalize_ms(cfg, v).expect("type MS");
        return if a == b { Homotopy::Yes } else { Homotopy::No };
    }
    if alpha_is_invariant(cfg) && alpha_unchecked(cfg, u) != alpha_unchecked(cfg, v) {
        return Homotopy::No;
    }
    let (ru, rv) = (Reduced::of(cfg, u), Reduced::of(cfg, v));
    if ru == rv {
        return Homotopy::Yes;
    }
    let mut seen = [HashSet::from([ru.clone()]), HashSet::from([rv.clone()])];
    let mut frontier = [vec![ru], vec![rv]];
    for _ in 0..budget {
        // expand the smaller side
        let side = if frontier[0].len() <= frontier[1].len() {
            0
        } else {
            1
        };
        if frontier[side].is_empty() {
            // this side's class is exhausted without meeting the other
            return Homotopy::No;
        }
        let mut next = Vec::new();
        for r in &frontier[side] {
            for n in r.neighbours(cfg) {
                if seen[1 - side].contains(&n) {
                    return Homotopy::Yes;
                }
                if seen[side].insert(n.clone()) {
                    next.push(n);
                }
            }
            if seen[0].len() + seen[1].len() > STATE_CAP {
                return Homotopy::Unknown(budget);
            }
        }
        frontier[side] = next;
    }
    Homotopy::Unknown(budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders;
    use crate::walks::Step;

    #[test]
    fn inserted_cancellation_is_homotopic() {
        let cfg = builders::one_edge_layered();
        let x = cfg.index_of("x").unwrap();
        let y = cfg.index_of("y").unwrap();
        let w = Walk::new(&cfg, x, vec![Step::Fwd, Step::Tau(y)]).unwrap();
        let w2 = Walk::new(&cfg, x, vec![Step::Fwd, Step::Bwd, Step::Fwd, Step::Tau(y)]).unwrap();
        assert_eq!(homotopic(&cfg, &w, &w2, DEFAULT_BUDGET), Homotopy::Yes);
    }

    #[test]
    fn h3_instance_is_homotopic() {
        let cfg = builders::three_edges();
        let e = cfg.index_of("1").unwrap();
        let h = cfg.index_of("1'").unwrap();
        // (σh|τ|σe)(σe|g^d|e) vs (σh|g^d|h)(h|τ|e)
        let mut lhs = Walk::turn(&cfg, e, cfg.degree(e) as i64);
        lhs.push(&cfg, Step::Tau(cfg.sigma(h))).unwrap();
        let tau = Walk::new(&cfg, e, vec![Step::Tau(h)]).unwrap();
        let rhs = Walk::compose(&Walk::turn(&cfg, h, cfg.degree(h) as i64), &tau).unwrap();
        assert_eq!(homotopic(&cfg, &lhs, &rhs, DEFAULT_BUDGET), Homotopy::Yes);
    }

    #[test]
    fn full_turn_at_f_degree_two_loop_is_not_trivial() {
        let cfg = builders::loop_bg(2);
        let e = cfg.index_of("e").unwrap();
        let turn = Walk::turn(&cfg, e, cfg.degree(e) as i64);
        assert_eq!(
            homotopic(&cfg, &turn, &Walk::trivial(e), DEFAULT_BUDGET),
            Homotopy::No
        );
    }

    #[test]
    fn endpoint_mismatch_is_no() {
        let cfg = builders::three_edges();
        let a = Walk::turn(&cfg, 0, 1);
        assert_eq!(homotopic(&cfg, &a, &Walk::trivial(0), 4), Homotopy::No);
    }

    #[test]
    fn non_ms_search_finds_h4_move() {
        let cfg = builders::one_edge_layered();
        let x = cfg.index_of("x").unwrap();
        let y = cfg.index_of("y").unwrap();
        // (gy|τ|gx)(gx|g|x) vs (gy|g|y)(y|τ|x) with L(x) = L(y); g fixes both angles
        let lhs = Walk::new(&cfg, x, vec![Step::Fwd, Step::Tau(y)]).unwrap();
        let rhs = Walk::new(&cfg, x, vec![Step::Tau(y), Step::Fwd]).unwrap();
        assert_eq!(homotopic(&cfg, &lhs, &rhs, DEFAULT_BUDGET), Homotopy::Yes);
    }
}
