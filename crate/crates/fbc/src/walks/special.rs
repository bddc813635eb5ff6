//! Special walks, the covers `B` and `ℤB` on them, and the type-MS normal form.

use super::{Step, Walk, WalkError};
use crate::config::{Angle, Fbc};

/// Special walk `g^{i_k} τ g^{i_{k-1}} τ ⋯ τ g^{i_0}` from `start`.
///
/// `runs = [i_0, …, i_k]`, `jumps = [e_1, …, e_k]` (jump targets).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpecialWalk {
    start: Angle,
    runs: Vec<usize>,
    jumps: Vec<Angle>,
    end: Angle,
}

/// An angle `(w, n)` of `ℤB`.
pub type ZbAngle = (SpecialWalk, i64);

impl SpecialWalk {
    pub fn trivial(e: Angle) -> SpecialWalk {
        SpecialWalk {
            start: e,
            runs: vec![0],
            jumps: Vec::new(),
            end: e,
        }
    }

    /// Validates the shape conditions of a special walk.
    pub fn new(
        cfg: &Fbc,
        start: Angle,
        runs: Vec<usize>,
        jumps: Vec<Angle>,
    ) -> Result<SpecialWalk, String> {
        if runs.len() != jumps.len() + 1 {
            return Err("runs and jumps do not alternate".into());
        }
        let k = jumps.len();
        let mut cur = start;
        for (l, &i) in runs.iter().enumerate() {
            let d = cfg.degree(cur);
            if i >= d || (l > 0 && l < k && i == 0) {
                return Err(format!("run {l} has length {i} outside the allowed range"));
            }
            cur = cfg.g_pow(cur, i as i64);
            if l < k {
                let t = jumps[l];
                if t == cur || !cfg.polygons().same(cur, t) {
                    return Err(format!(
                        "jump {} is not to another angle of the polygon",
                        l + 1
                    ));
                }
                cur = t;
            }
        }
        Ok(SpecialWalk {
            start,
            runs,
            jumps,
            end: cur,
        })
    }

    pub fn start(&self) -> Angle {
        self.start
    }

    pub fn target(&self) -> Angle {
        self.end
    }

    pub fn runs(&self) -> &[usize] {
        &self.runs
    }

    pub fn jumps(&self) -> &[Angle] {
        &self.jumps
    }

    pub fn is_trivial(&self) -> bool {
        self.jumps.is_empty() && self.runs[0] == 0
    }

    /// Step length as a walk.
    pub fn len(&self) -> usize {
        self.runs.iter().sum::<usize>() + self.jumps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.is_trivial()
    }

    fn last_run(&self) -> usize {
        *self.runs.last().expect("nonempty")
    }

    /// Start of the last run: the last jump target or the start angle.
    fn last_run_start(&self) -> Angle {
        self.jumps.last().copied().unwrap_or(self.start)
    }

    fn with_last_run(&self, cfg: &Fbc, i: usize) -> SpecialWalk {
        let mut w = self.clone();
        *w.runs.last_mut().expect("nonempty") = i;
        w.end = cfg.g_pow(w.last_run_start(), i as i64);
        w
    }

    pub fn to_walk(&self, cfg: &Fbc) -> Walk {
        let mut w = Walk::trivial(self.start);
        for (l, &i) in self.runs.iter().enumerate() {
            for _ in 0..i {
                w.push(cfg, Step::Fwd).expect("valid");
            }
            if l < self.jumps.len() {
                w.push(cfg, Step::Tau(self.jumps[l])).expect("valid");
            }
        }
        w
    }

    /// The g-action of `B`: returns the image and the carry into the turn counter.
    pub fn g_act(&self, cfg: &Fbc) -> (SpecialWalk, i64) {
        let d = cfg.degree(self.end);
        let i = self.last_run();
        if i + 1 < d {
            (self.with_last_run(cfg, i + 1), 0)
        } else {
            (self.with_last_run(cfg, 0), 1)
        }
    }

    /// The inverse g-action of `B` with its carry.
    pub fn g_inv_act(&self, cfg: &Fbc) -> (SpecialWalk, i64) {
        let i = self.last_run();
        if i > 0 {
            (self.with_last_run(cfg, i - 1), 0)
        } else {
            // the run start has degree d; last run becomes d - 1
            let d = cfg.degree(self.last_run_start());
            (self.with_last_run(cfg, d - 1), -1)
        }
    }

    /// The walk `u` with `P'(w) = {u} ∪ {τ_h u}`: drops a trailing `τ` after a zero run.
    pub fn polygon_base(&self, cfg: &Fbc) -> SpecialWalk {
        if self.last_run() == 0 && !self.jumps.is_empty() {
            let mut u = self.clone();
            u.runs.pop();
            u.jumps.pop();
            u.end = cfg.g_pow(u.last_run_start(), u.last_run() as i64);
            u
        } else {
            self.clone()
        }
    }

    /// Members of the `B`-polygon of this walk: `u` first, then `τ_h u` in angle order.
    pub fn polygon(&self, cfg: &Fbc) -> Vec<SpecialWalk> {
        let u = self.polygon_base(cfg);
        let mut out = vec![u.clone()];
        for &h in cfg.polygon(u.end) {
            if h != u.end {
                out.push(u.jump_to(h));
            }
        }
        out
    }

    /// `τ_h u` for `h` in the polygon of the end of `u`, `h != t(u)`.
    fn jump_to(&self, h: Angle) -> SpecialWalk {
        let mut w = self.clone();
        w.jumps.push(h);
        w.runs.push(0);
        w.end = h;
        w
    }

    /// The `B`-jump to the polygon member ending at `h`.
    pub fn tau_to(&self, cfg: &Fbc, h: Angle) -> SpecialWalk {
        let u = self.polygon_base(cfg);
        debug_assert!(cfg.polygons().same(u.end, h));
        if h == u.end {
            u
        } else {
            u.jump_to(h)
        }
    }
}

pub fn zb_g(cfg: &Fbc, a: &ZbAngle) -> ZbAngle {
    let (w, c) = a.0.g_act(cfg);
    (w, a.1 + c)
}

pub fn zb_g_inv(cfg: &Fbc, a: &ZbAngle) -> ZbAngle {
    let (w, c) = a.0.g_inv_act(cfg);
    (w, a.1 + c)
}

/// The projection `q(w, n) = g^{n·d(t(w))}·t(w)`.
pub fn zb_project(cfg: &Fbc, a: &ZbAngle) -> Angle {
    let t = a.0.target();
    cfg.g_pow(t, a.1 * cfg.degree(t) as i64)
}

/// The `ℤB`-jump from `a` to the polygon member projecting to `target`.
pub fn zb_tau(cfg: &Fbc, a: &ZbAngle, target: Angle) -> ZbAngle {
    let h = cfg.g_pow(target, -a.1 * cfg.degree(target) as i64);
    (a.0.tau_to(cfg, h), a.1)
}

/// Normal form `w ∼ (t(w)|g^{n·d(t(w))}|t(v)) v`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MsNormalForm {
    pub special: SpecialWalk,
    pub turns: i64,
}

impl MsNormalForm {
    /// The walk `(t(w)|g^{n·d}|t(v)) v`.
    pub fn representative(&self, cfg: &Fbc) -> Walk {
        let v = self.special.to_walk(cfg);
        let t = v.target();
        let turn = Walk::turn(cfg, t, self.turns * cfg.degree(t) as i64);
        Walk::compose(&turn, &v).expect("endpoints match")
    }
}

/// Lifts `w` into `ℤB` from `((s(w)||s(w)), 0)` and reads off the terminal angle.
pub fn normalize_ms(cfg: &Fbc, w: &Walk) -> Result<MsNormalForm, WalkError> {
    if !cfg.is_ms() {
        return Err(WalkError::NotMs);
    }
    let mut a: ZbAngle = (SpecialWalk::trivial(w.source()), 0);
    for (i, s) in w.steps().iter().enumerate() {
        a = match *s {
            Step::Fwd => zb_g(cfg, &a),
            Step::Bwd => zb_g_inv(cfg, &a),
            Step::Tau(t) => zb_tau(cfg, &a, t),
        };
        debug_assert_eq!(zb_project(cfg, &a), w.path()[i + 1]);
    }
    Ok(MsNormalForm {
        special: a.0,
        turns: a.1,
    })
}
