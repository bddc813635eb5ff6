//! Standard sequences, their complementary turns and the type S condition (f7).

use super::{Angle, Fbc};
use std::collections::{BTreeSet, HashMap};

/// The standard sequence `(g^{len-1}·start, …, g·start, start)`, with `0 <= len <= d(start)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StandardSequence {
    pub start: Angle,
    pub len: usize,
}

/// Formal layer word of a standard sequence, listed from the start angle upward.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Word {
    /// `1_{P(e)}`, identified by polygon block id.
    Identity(usize),
    /// Layer block ids of `e, g·e, …, g^{n-1}·e`.
    Layers(Vec<usize>),
}

impl StandardSequence {
    pub fn new(cfg: &Fbc, start: Angle, len: usize) -> Self {
        assert!(
            len <= cfg.degree(start),
            "standard sequence longer than d(start)"
        );
        StandardSequence { start, len }
    }

    /// Terminal angle `g^len · start`.
    pub fn terminal(&self, cfg: &Fbc) -> Angle {
        cfg.g_pow(self.start, self.len as i64)
    }

    /// `∧p = (g^{d-1}·e, …, g^n·e)`.
    pub fn hat(&self, cfg: &Fbc) -> Self {
        let d = cfg.degree(self.start);
        StandardSequence {
            start: cfg.g_pow(self.start, self.len as i64),
            len: d - self.len,
        }
    }

    /// `p∧ = (g^{-1}·e, …, g^{n-d}·e)`.
    pub fn cohat(&self, cfg: &Fbc) -> Self {
        let d = cfg.degree(self.start) as i64;
        StandardSequence {
            start: cfg.g_pow(self.start, self.len as i64 - d),
            len: (d - self.len as i64) as usize,
        }
    }

    pub fn word(&self, cfg: &Fbc) -> Word {
        if self.len == 0 {
            return Word::Identity(cfg.polygons().block_of(self.start));
        }
        Word::Layers(
            (0..self.len)
                .map(|i| cfg.layers().block_of(cfg.g_pow(self.start, i as i64)))
                .collect(),
        )
    }

    /// All standard sequences with the same layer word.
    pub fn identical_class(&self, cfg: &Fbc) -> Vec<StandardSequence> {
        let w = self.word(cfg);
        all_sequences(cfg)
            .into_iter()
            .filter(|q| q.word(cfg) == w)
            .collect()
    }
}

/// Every standard sequence of `cfg`, ordered by start angle then length.
pub fn all_sequences(cfg: &Fbc) -> Vec<StandardSequence> {
    (0..cfg.len())
        .flat_map(|e| (0..=cfg.degree(e)).map(move |n| StandardSequence { start: e, len: n }))
        .collect()
}

/// Finds identical standard sequences `p ≡ q` violating (f7), if any.
pub fn f7_witness(cfg: &Fbc) -> Option<(StandardSequence, StandardSequence)> {
    let seqs = all_sequences(cfg);
    let mut by_word: HashMap<Word, Vec<StandardSequence>> = HashMap::new();
    for &p in &seqs {
        by_word.entry(p.word(cfg)).or_default().push(p);
    }
    let class_words =
        |set: &[StandardSequence]| -> BTreeSet<Word> { set.iter().map(|p| p.word(cfg)).collect() };
    // [X] is determined by the word set of X, so sets of words stand for sets of sequences
    let class_of = |p: &StandardSequence| by_word[&p.word(cfg)].clone();
    let left = |p: &StandardSequence| -> BTreeSet<Word> {
        let hats: Vec<StandardSequence> =
            class_of(&p.hat(cfg)).iter().map(|x| x.cohat(cfg)).collect();
        class_words(&hats)
    };
    let right = |p: &StandardSequence| -> BTreeSet<Word> {
        let co: Vec<StandardSequence> =
            class_of(&p.cohat(cfg)).iter().map(|x| x.hat(cfg)).collect();
        class_words(&co)
    };
    let mut groups: Vec<&Vec<StandardSequence>> = by_word.values().collect();
    groups.sort();
    for group in groups {
        let lr: Vec<(BTreeSet<Word>, BTreeSet<Word>)> =
            group.iter().map(|p| (left(p), right(p))).collect();
        for i in 0..group.len() {
            for j in i + 1..group.len() {
                if lr[i].0 != lr[j].0 && lr[i].1 != lr[j].1 {
                    return Some((group[i], group[j]));
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders;

    #[test]
    fn hat_and_cohat_lengths_complement() {
        let cfg = builders::three_edges();
        for p in all_sequences(&cfg) {
            let d = cfg.degree(p.start);
            assert_eq!(p.hat(&cfg).len + p.len, d);
            assert_eq!(p.cohat(&cfg).len + p.len, d);
            // ∧p starts where p ends
            assert_eq!(p.hat(&cfg).start, p.terminal(&cfg));
            // p∧ ends at g^{-1} … i.e. its terminal is p's start
            assert_eq!(p.cohat(&cfg).terminal(&cfg), p.start);
        }
    }

    #[test]
    fn trivial_and_full_sequences() {
        let cfg = builders::three_edges();
        let e = cfg.index_of("1").unwrap();
        let triv = StandardSequence::new(&cfg, e, 0);
        assert_eq!(triv.word(&cfg), Word::Identity(cfg.polygons().block_of(e)));
        assert_eq!(triv.hat(&cfg).len, cfg.degree(e));
        let full = StandardSequence::new(&cfg, e, cfg.degree(e));
        assert_eq!(
            full.hat(&cfg),
            StandardSequence {
                start: cfg.sigma(e),
                len: 0
            }
        );
    }

    #[test]
    fn identical_class_is_singleton_in_three_edges() {
        let cfg = builders::three_edges();
        let p = StandardSequence::new(&cfg, cfg.index_of("1").unwrap(), 1);
        assert_eq!(p.identical_class(&cfg), vec![p]);
    }

    #[test]
    fn ms_configurations_satisfy_f7() {
        for cfg in [
            builders::three_edges(),
            builders::loop_bg(2),
            builders::one_edge(),
        ] {
            assert!(f7_witness(&cfg).is_none());
        }
    }
}
