//! Walks modulo (h1) and (h2): alternating g-runs and polygon jumps.

use super::{Step, Walk};
use crate::config::{Angle, Fbc};

/// Reduced form `g^{r_k} τ … τ g^{r_0}` from `start`.
///
/// `runs.len() == jumps.len() + 1`, interior runs are nonzero and no jump is a self-jump.
/// This form is unique within each (h1)/(h2) class.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Reduced {
    pub start: Angle,
    pub runs: Vec<i64>,
    /// `(from, to)` for each jump.
    pub jumps: Vec<(Angle, Angle)>,
}

/// The move applied at one jump of a reduced walk.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JumpMove {
    /// (h3) read right to left: a full turn before the jump moves after it.
    H3Forward,
    H3Backward,
    /// (h4) read right to left: one g-step before the jump moves after it.
    H4Forward,
    H4Backward,
}

pub const JUMP_MOVES: [JumpMove; 4] = [
    JumpMove::H3Forward,
    JumpMove::H3Backward,
    JumpMove::H4Forward,
    JumpMove::H4Backward,
];

struct Builder<'a> {
    cfg: &'a Fbc,
    cur: Angle,
    out: Reduced,
}

impl<'a> Builder<'a> {
    fn new(cfg: &'a Fbc, start: Angle) -> Self {
        Builder {
            cfg,
            cur: start,
            out: Reduced {
                start,
                runs: vec![0],
                jumps: Vec::new(),
            },
        }
    }

    fn run(&mut self, k: i64) {
        *self.out.runs.last_mut().expect("nonempty") += k;
        self.cur = self.cfg.g_pow(self.cur, k);
    }

    fn jump(&mut self, t: Angle) {
        debug_assert!(self.cfg.polygons().same(self.cur, t));
        if t == self.cur {
            return;
        }
        if *self.out.runs.last().expect("nonempty") == 0 && !self.out.jumps.is_empty() {
            self.out.runs.pop();
            let (from, _) = self.out.jumps.pop().expect("nonempty");
            if from != t {
                self.out.jumps.push((from, t));
                self.out.runs.push(0);
            }
        } else {
            self.out.jumps.push((self.cur, t));
            self.out.runs.push(0);
        }
        self.cur = t;
    }
}

impl Reduced {
    pub fn of(cfg: &Fbc, w: &Walk) -> Reduced {
        let mut b = Builder::new(cfg, w.source());
        for s in w.steps() {
            match *s {
                Step::Fwd => b.run(1),
                Step::Bwd => b.run(-1),
                Step::Tau(t) => b.jump(t),
            }
        }
        b.out
    }

    /// Re-reduces an arbitrary alternating list of runs and jump targets.
    fn rebuild(cfg: &Fbc, start: Angle, runs: &[i64], targets: &[Angle]) -> Reduced {
        let mut b = Builder::new(cfg, start);
        for (i, &r) in runs.iter().enumerate() {
            b.run(r);
            if i < targets.len() {
                b.jump(targets[i]);
            }
        }
        b.out
    }

    pub fn target(&self, cfg: &Fbc) -> Angle {
        match self.jumps.last() {
            Some(&(_, t)) => cfg.g_pow(t, *self.runs.last().expect("nonempty")),
            None => cfg.g_pow(self.start, self.runs[0]),
        }
    }

    pub fn to_walk(&self, cfg: &Fbc) -> Walk {
        let mut w = Walk::trivial(self.start);
        for (i, &r) in self.runs.iter().enumerate() {
            let step = if r >= 0 { Step::Fwd } else { Step::Bwd };
            for _ in 0..r.unsigned_abs() {
                w.push(cfg, step).expect("g-steps are valid");
            }
            if i < self.jumps.len() {
                w.push(cfg, Step::Tau(self.jumps[i].1))
                    .expect("reduced jumps are valid");
            }
        }
        w
    }

    /// Step length of the reduced walk.
    pub fn len(&self) -> usize {
        self.runs
            .iter()
            .map(|r| r.unsigned_abs() as usize)
            .sum::<usize>()
            + self.jumps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_trivial(&self) -> bool {
        self.jumps.is_empty() && self.runs[0] == 0
    }

    /// Applies `mv` at the jump `j` of the run/target lists, if its side condition holds.
    fn apply(
        cfg: &Fbc,
        start: Angle,
        runs: &[i64],
        jumps: &[(Angle, Angle)],
        j: usize,
        mv: JumpMove,
    ) -> Option<Reduced> {
        let (x, y) = jumps[j];
        let (dx, dy) = (cfg.degree(x) as i64, cfg.degree(y) as i64);
        let (da, ny, db) = match mv {
            JumpMove::H3Forward => (-dx, cfg.sigma_inv(y), dy),
            JumpMove::H3Backward => (dx, cfg.sigma(y), -dy),
            JumpMove::H4Forward => {
                if !cfg.layers().same(cfg.g_inv(x), cfg.g_inv(y)) {
                    return None;
                }
                (-1, cfg.g_inv(y), 1)
            }
            JumpMove::H4Backward => {
                if !cfg.layers().same(x, y) {
                    return None;
                }
                (1, cfg.g(y), -1)
            }
        };
        let mut r = runs.to_vec();
        let mut t: Vec<Angle> = jumps.iter().map(|p| p.1).collect();
        r[j] += da;
        r[j + 1] += db;
        t[j] = ny;
        Some(Reduced::rebuild(cfg, start, &r, &t))
    }

    /// All walks one (h3) or (h4) move away, including moves on a jump pair
    /// `τ τ⁻¹` inserted at any point of a run. Results are reduced and deduplicated.
    pub fn neighbours(&self, cfg: &Fbc) -> Vec<Reduced> {
        let mut out = Vec::new();
        for j in 0..self.jumps.len() {
            for mv in JUMP_MOVES {
                out.extend(Reduced::apply(
                    cfg,
                    self.start,
                    &self.runs,
                    &self.jumps,
                    j,
                    mv,
                ));
            }
        }
        let mut run_start = self.start;
        for (ri, &a) in self.runs.iter().enumerate() {
            let sign = if a >= 0 { 1 } else { -1 };
            for i in 0..=a.unsigned_abs() as i64 {
                let off = sign * i;
                let c = cfg.g_pow(run_start, off);
                for &y in cfg.polygon(c) {
                    if y == c {
                        continue;
                    }
                    let mut runs = self.runs[..ri].to_vec();
                    runs.extend([off, 0, a - off]);
                    runs.extend_from_slice(&self.runs[ri + 1..]);
                    let mut jumps = self.jumps[..ri].to_vec();
                    jumps.extend([(c, y), (y, c)]);
                    jumps.extend_from_slice(&self.jumps[ri..]);
                    for j in [ri, ri + 1] {
                        for mv in JUMP_MOVES {
                            out.extend(Reduced::apply(cfg, self.start, &runs, &jumps, j, mv));
                        }
                    }
                }
            }
            if ri < self.jumps.len() {
                run_start = self.jumps[ri].1;
            }
        }
        out.sort();
        out.dedup();
        out.retain(|r| r != self);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders;

    #[test]
    fn cancellation_and_jump_merging() {
        let cfg = builders::three_edges();
        let ix = |s: &str| cfg.index_of(s).unwrap();
        let w = Walk::new(
            &cfg,
            ix("1"),
            vec![
                Step::Fwd,
                Step::Bwd,
                Step::Tau(ix("1'")),
                Step::Tau(ix("1")),
                Step::Fwd,
            ],
        )
        .unwrap();
        let r = Reduced::of(&cfg, &w);
        assert_eq!(r.runs, vec![1]);
        assert!(r.jumps.is_empty());
        assert_eq!(r.to_walk(&cfg).target(), w.target());
    }

    #[test]
    fn reduction_matches_inverse_composition() {
        let cfg = builders::three_edges();
        let ix = |s: &str| cfg.index_of(s).unwrap();
        let w = Walk::new(
            &cfg,
            ix("2"),
            vec![Step::Fwd, Step::Tau(ix("3'")), Step::Bwd, Step::Bwd],
        )
        .unwrap();
        let loop_ = Walk::compose(&w.invert(), &w).unwrap();
        assert!(Reduced::of(&cfg, &loop_).is_trivial());
    }

    #[test]
    fn h3_move_preserves_endpoints() {
        let cfg = builders::loop_bg(1);
        let e = cfg.index_of("e").unwrap();
        let w = Walk::new(&cfg, e, vec![Step::Fwd, Step::Tau(e), Step::Fwd]).unwrap();
        let r = Reduced::of(&cfg, &w);
        for n in r.neighbours(&cfg) {
            assert_eq!(n.start, r.start);
            assert_eq!(n.target(&cfg), r.target(&cfg));
        }
    }
}
