//! Walks, the α-invariant, homotopy and the exact type-MS normal form.
//!
//! Steps are stored in execution order. [`Walk::compose`]`(u, v)` runs `v` first.

mod homotopy;
mod reduced;
mod special;

pub use homotopy::{homotopic, Homotopy, DEFAULT_BUDGET};
pub use reduced::Reduced;
pub use special::{
    normalize_ms, zb_g, zb_g_inv, zb_project, zb_tau, MsNormalForm, SpecialWalk, ZbAngle,
};

use crate::config::{Angle, Fbc};
use num_rational::Ratio;
use std::fmt;
use thiserror::Error;

/// One step of a walk.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Step {
    /// `e ↦ g·e`.
    Fwd,
    /// `e ↦ g⁻¹·e`.
    Bwd,
    /// Jump to another angle of the current polygon.
    Tau(Angle),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum WalkError {
    #[error("step {index} jumps from {from} to {to}, which lie in different polygons")]
    InvalidTau {
        index: usize,
        from: String,
        to: String,
    },
    #[error("cannot compose: first walk ends at {end}, second starts at {start}")]
    EndpointMismatch { end: String, start: String },
    #[error("operation requires a type MS configuration")]
    NotMs,
}

/// A walk: a source angle and a list of steps, with the visited angles cached.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Walk {
    path: Vec<Angle>,
    steps: Vec<Step>,
}

impl Walk {
    pub fn trivial(e: Angle) -> Walk {
        Walk {
            path: vec![e],
            steps: Vec::new(),
        }
    }

    /// Validates `steps` from `source`.
    pub fn new(cfg: &Fbc, source: Angle, steps: Vec<Step>) -> Result<Walk, WalkError> {
        let mut w = Walk::trivial(source);
        for s in steps {
            w.push(cfg, s)?;
        }
        Ok(w)
    }

    /// `g^k` from `e` (backward steps for negative `k`).
    pub fn turn(cfg: &Fbc, e: Angle, k: i64) -> Walk {
        let step = if k >= 0 { Step::Fwd } else { Step::Bwd };
        let mut w = Walk::trivial(e);
        for _ in 0..k.unsigned_abs() {
            w.push(cfg, step).expect("g-steps are always valid");
        }
        w
    }

    /// Appends one step after the current end.
    pub fn push(&mut self, cfg: &Fbc, s: Step) -> Result<(), WalkError> {
        let cur = self.target();
        let next = match s {
            Step::Fwd => cfg.g(cur),
            Step::Bwd => cfg.g_inv(cur),
            Step::Tau(t) => {
                if !cfg.polygons().same(cur, t) {
                    return Err(WalkError::InvalidTau {
                        index: self.steps.len(),
                        from: cfg.name(cur).to_string(),
                        to: cfg.name(t).to_string(),
                    });
                }
                t
            }
        };
        self.steps.push(s);
        self.path.push(next);
        Ok(())
    }

    pub fn source(&self) -> Angle {
        self.path[0]
    }

    pub fn target(&self) -> Angle {
        *self.path.last().expect("nonempty path")
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    /// Visited angles, `len() + 1` entries.
    pub fn path(&self) -> &[Angle] {
        &self.path
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn is_closed(&self) -> bool {
        self.source() == self.target()
    }

    /// `u ∘ v`: `v` first, then `u`.
    pub fn compose(u: &Walk, v: &Walk) -> Result<Walk, WalkError> {
        if v.target() != u.source() {
            return Err(WalkError::EndpointMismatch {
                end: v.target().to_string(),
                start: u.source().to_string(),
            });
        }
        let mut w = v.clone();
        w.steps.extend_from_slice(&u.steps);
        w.path.extend_from_slice(&u.path[1..]);
        Ok(w)
    }

    /// Reverse walk: steps reversed, `g ↔ g⁻¹`, each jump sent back to its origin.
    pub fn invert(&self) -> Walk {
        let n = self.steps.len();
        let mut steps = Vec::with_capacity(n);
        for i in (0..n).rev() {
            steps.push(match self.steps[i] {
                Step::Fwd => Step::Bwd,
                Step::Bwd => Step::Fwd,
                Step::Tau(_) => Step::Tau(self.path[i]),
            });
        }
        let path = self.path.iter().rev().copied().collect();
        Walk { path, steps }
    }

    /// Text form: source name followed by `g`, `G` and `t:<angle>` tokens.
    pub fn display<'a>(&'a self, cfg: &'a Fbc) -> WalkDisplay<'a> {
        WalkDisplay { cfg, walk: self }
    }
}

pub struct WalkDisplay<'a> {
    cfg: &'a Fbc,
    walk: &'a Walk,
}

impl fmt::Display for WalkDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.cfg.name(self.walk.source()))?;
        for s in &self.walk.steps {
            match s {
                Step::Fwd => write!(f, " g")?,
                Step::Bwd => write!(f, " G")?,
                Step::Tau(t) => write!(f, " t:{}", self.cfg.name(*t))?,
            }
        }
        Ok(())
    }
}

/// α without the type check: `+1/d` per forward step at the pre-step angle, `-1/d` per
/// backward step at the pre-step angle's orbit, `0` per jump.
pub fn alpha_unchecked(cfg: &Fbc, w: &Walk) -> Ratio<i64> {
    let mut a = Ratio::from_integer(0);
    for (i, s) in w.steps.iter().enumerate() {
        let d = cfg.degree(w.path[i]) as i64;
        match s {
            Step::Fwd => a += Ratio::new(1, d),
            Step::Bwd => a -= Ratio::new(1, d),
            Step::Tau(_) => {}
        }
    }
    a
}

/// The α-invariant of a walk in a type MS configuration.
pub fn alpha(cfg: &Fbc, w: &Walk) -> Result<Ratio<i64>, WalkError> {
    if !cfg.is_ms() {
        return Err(WalkError::NotMs);
    }
    Ok(alpha_unchecked(cfg, w))
}

/// Possible steps from `e` in alphabet order `g < G < t:` by target.
pub fn steps_from(cfg: &Fbc, e: Angle) -> impl Iterator<Item = Step> + '_ {
    [Step::Fwd, Step::Bwd]
        .into_iter()
        .chain(cfg.polygon(e).iter().map(|&t| Step::Tau(t)))
}

/// All walks of exactly `len` steps from `base`, in lexicographic step order.
pub fn walks_of_length(cfg: &Fbc, base: Angle, len: usize) -> Vec<Walk> {
    let mut out = Vec::new();
    let mut stack = vec![Walk::trivial(base)];
    // depth-first with children pushed in reverse to keep lexicographic order
    while let Some(w) = stack.pop() {
        if w.len() == len {
            out.push(w);
            continue;
        }
        let children: Vec<Walk> = steps_from(cfg, w.target())
            .map(|s| {
                let mut c = w.clone();
                c.push(cfg, s).expect("generated steps are valid");
                c
            })
            .collect();
        stack.extend(children.into_iter().rev());
    }
    out
}

/// Closed walks at `base` of length at most `max_len`, in shortlex order.
pub fn enumerate_closed_walks(
    cfg: &Fbc,
    base: Angle,
    max_len: usize,
) -> impl Iterator<Item = Walk> + '_ {
    (0..=max_len).flat_map(move |len| {
        walks_of_length(cfg, base, len)
            .into_iter()
            .filter(|w| w.is_closed())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders;

    fn w(cfg: &Fbc, src: &str, steps: &[Step]) -> Walk {
        Walk::new(cfg, cfg.index_of(src).unwrap(), steps.to_vec()).unwrap()
    }

    #[test]
    fn compose_with_trivial_is_identity() {
        let cfg = builders::three_edges();
        let a = w(
            &cfg,
            "1",
            &[Step::Fwd, Step::Tau(cfg.index_of("2'").unwrap()), Step::Bwd],
        );
        assert_eq!(Walk::compose(&a, &Walk::trivial(a.source())).unwrap(), a);
        assert_eq!(Walk::compose(&Walk::trivial(a.target()), &a).unwrap(), a);
    }

    #[test]
    fn invert_is_an_involution() {
        let cfg = builders::three_edges();
        let a = w(
            &cfg,
            "1",
            &[Step::Fwd, Step::Tau(cfg.index_of("2'").unwrap()), Step::Bwd],
        );
        let inv = a.invert();
        assert_eq!(inv.source(), a.target());
        assert_eq!(inv.target(), a.source());
        assert_eq!(inv.invert(), a);
        assert_eq!(inv.steps()[1], Step::Tau(cfg.index_of("2").unwrap()));
    }

    #[test]
    fn invalid_jump_is_rejected() {
        let cfg = builders::three_edges();
        let e = cfg.index_of("1").unwrap();
        let err = Walk::new(&cfg, e, vec![Step::Tau(cfg.index_of("2").unwrap())]).unwrap_err();
        assert!(matches!(err, WalkError::InvalidTau { index: 0, .. }));
    }

    #[test]
    fn alpha_of_full_turns() {
        let cfg = builders::loop_bg(2);
        let e = cfg.index_of("e").unwrap();
        for n in -2i64..=2 {
            let walk = Walk::turn(&cfg, e, n * cfg.degree(e) as i64);
            assert_eq!(alpha(&cfg, &walk).unwrap(), Ratio::from_integer(n));
        }
        assert_eq!(
            alpha(&cfg, &Walk::trivial(e)).unwrap(),
            Ratio::from_integer(0)
        );
        assert_eq!(
            alpha(&builders::one_edge_layered(), &Walk::trivial(0)),
            Err(WalkError::NotMs)
        );
    }

    #[test]
    fn closed_walk_enumeration_is_shortlex_and_monotone() {
        let cfg = builders::single_edge(1, 1);
        let x = cfg.index_of("x").unwrap();
        let zero: Vec<Walk> = enumerate_closed_walks(&cfg, x, 0).collect();
        assert_eq!(zero, vec![Walk::trivial(x)]);
        // g fixes x: g, G and the self-jump are closed; the jump to y is not
        let one: Vec<String> = enumerate_closed_walks(&cfg, x, 1)
            .map(|w| w.display(&cfg).to_string())
            .collect();
        assert_eq!(one, vec!["x", "x g", "x G", "x t:x"]);
        let mut last = 0;
        for len in 0..5 {
            let c = enumerate_closed_walks(&cfg, x, len).count();
            assert!(c >= last);
            last = c;
        }
    }
}
