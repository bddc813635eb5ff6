//! Free words, group and groupoid presentations, Tietze simplification and
//! abelianization via integer Smith normal form.
//!
//! Words are read left to right in traversal order.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use thiserror::Error;

/// A generator or its formal inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: usize,
    pub inv: bool,
}

impl Letter {
    pub fn new(gen: usize) -> Letter {
        Letter { gen, inv: false }
    }

    pub fn inverse(self) -> Letter {
        Letter {
            gen: self.gen,
            inv: !self.inv,
        }
    }
}

/// A word over generator ids.
pub type Word = Vec<Letter>;

pub fn inverse(w: &[Letter]) -> Word {
    w.iter().rev().map(|l| l.inverse()).collect()
}

/// `g^k` as a word.
pub fn power(gen: usize, k: i64) -> Word {
    let l = Letter { gen, inv: k < 0 };
    vec![l; k.unsigned_abs() as usize]
}

/// Concatenation of words.
pub fn concat(parts: &[&[Letter]]) -> Word {
    let mut w = Word::new();
    for p in parts {
        w.extend_from_slice(p);
    }
    free_reduce(&w)
}

/// Cancels adjacent inverse pairs.
pub fn free_reduce(w: &[Letter]) -> Word {
    let mut out: Word = Vec::with_capacity(w.len());
    for &l in w {
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

/// Free reduction followed by cancellation of inverse letters at both ends.
pub fn cyclic_reduce(w: &[Letter]) -> Word {
    let w = free_reduce(w);
    let mut lo = 0;
    let mut hi = w.len();
    while hi - lo >= 2 && w[lo] == w[hi - 1].inverse() {
        lo += 1;
        hi -= 1;
    }
    w[lo..hi].to_vec()
}

/// Least rotation of the word or of its inverse; equal keys mean equal normal closures.
fn cyclic_key(w: &[Letter]) -> Word {
    let mut best: Option<Word> = None;
    for cand in [w.to_vec(), inverse(w)] {
        for i in 0..cand.len().max(1) {
            let mut r = cand[i..].to_vec();
            r.extend_from_slice(&cand[..i]);
            if best.as_ref().is_none_or(|b| r < *b) {
                best = Some(r);
            }
        }
    }
    best.unwrap_or_default()
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("generator name {0:?} must start with a lowercase letter")]
    BadGenerator(String),
    #[error("unknown generator token {0:?}")]
    UnknownToken(String),
    #[error("malformed presentation: {0}")]
    Malformed(String),
    #[error("the groupoid graph is not connected")]
    Disconnected,
}

/// A finite group presentation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub gens: Vec<String>,
    pub rels: Vec<Word>,
}

fn inverse_name(name: &str) -> String {
    let mut c = name.chars();
    let first = c.next().expect("nonempty name");
    first.to_uppercase().chain(c).collect()
}

impl Presentation {
    /// Builds a presentation; relators are freely and cyclically reduced and empty ones dropped.
    pub fn new(gens: Vec<String>, rels: Vec<Word>) -> Presentation {
        let rels = rels
            .iter()
            .map(|r| cyclic_reduce(r))
            .filter(|r| !r.is_empty())
            .collect();
        Presentation { gens, rels }
    }

    pub fn word_to_string(&self, w: &[Letter]) -> String {
        if w.is_empty() {
            return "1".into();
        }
        w.iter()
            .map(|l| {
                let n = &self.gens[l.gen];
                if l.inv {
                    inverse_name(n)
                } else {
                    n.clone()
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Parses a word of generator tokens; `1` is the empty word.
    pub fn parse_word(&self, s: &str) -> Result<Word, GroupError> {
        let mut w = Word::new();
        for tok in s.split_whitespace() {
            if tok == "1" {
                continue;
            }
            if let Some(i) = self.gens.iter().position(|g| g == tok) {
                w.push(Letter::new(i));
            } else if let Some(i) = self.gens.iter().position(|g| inverse_name(g) == tok) {
                w.push(Letter { gen: i, inv: true });
            } else {
                return Err(GroupError::UnknownToken(tok.to_string()));
            }
        }
        Ok(w)
    }

    /// Parses `gens: a b; rels: a b A B, a a`.
    pub fn parse(s: &str) -> Result<Presentation, GroupError> {
        let s = s.trim();
        let (g, r) = s
            .split_once(';')
            .ok_or_else(|| GroupError::Malformed("expected `gens: …; rels: …`".into()))?;
        let g = g
            .trim()
            .strip_prefix("gens:")
            .ok_or_else(|| GroupError::Malformed("missing `gens:`".into()))?;
        let r = r
            .trim()
            .strip_prefix("rels:")
            .ok_or_else(|| GroupError::Malformed("missing `rels:`".into()))?;
        let gens: Vec<String> = g.split_whitespace().map(str::to_string).collect();
        for n in &gens {
            if !n.chars().next().is_some_and(|c| c.is_ascii_lowercase()) {
                return Err(GroupError::BadGenerator(n.clone()));
            }
        }
        let mut p = Presentation {
            gens,
            rels: Vec::new(),
        };
        let mut rels = Vec::new();
        for part in r.split(',') {
            if part.trim().is_empty() {
                continue;
            }
            rels.push(p.parse_word(part)?);
        }
        p = Presentation::new(p.gens, rels);
        Ok(p)
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rels: Vec<String> = self.rels.iter().map(|r| self.word_to_string(r)).collect();
        write!(
            f,
            "gens: {}; rels: {}",
            self.gens.join(" "),
            rels.join(", ")
        )
    }
}

/// Free rank plus torsion divisibility chain.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AbelianInvariants {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl AbelianInvariants {
    pub fn free(rank: usize) -> AbelianInvariants {
        AbelianInvariants {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join(" x "))
        }
    }
}

/// Diagonal of the Smith normal form of an integer matrix (nonzero entries, divisibility chain).
pub fn smith_diagonal(mut m: Vec<Vec<BigInt>>, cols: usize) -> Vec<BigInt> {
    let rows = m.len();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // pivot: smallest nonzero absolute value in the remaining block
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !m[i][j].is_zero()
                    && pivot.is_none_or(|(pi, pj)| m[i][j].abs() < m[pi][pj].abs())
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        m.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut done = true;
            for i in t + 1..rows {
                if m[i][t].is_zero() {
                    continue;
                }
                let q = &m[i][t] / &m[t][t];
                let pivot_row = m[t].clone();
                for (x, p) in m[i].iter_mut().zip(&pivot_row).skip(t) {
                    *x -= &q * p;
                }
                if !m[i][t].is_zero() {
                    done = false;
                }
            }
            for j in t + 1..cols {
                if m[t][j].is_zero() {
                    continue;
                }
                let q = &m[t][j] / &m[t][t];
                for row in m.iter_mut().skip(t) {
                    let v = &q * &row[t];
                    row[j] -= v;
                }
                if !m[t][j].is_zero() {
                    done = false;
                }
            }
            if !done {
                // move the smallest remaining entry of row/column t to the pivot
                let mut best = (t, t);
                for i in t..rows {
                    if !m[i][t].is_zero() && m[i][t].abs() < m[best.0][best.1].abs() {
                        best = (i, t);
                    }
                }
                for j in t..cols {
                    if !m[t][j].is_zero() && m[t][j].abs() < m[best.0][best.1].abs() {
                        best = (t, j);
                    }
                }
                m.swap(t, best.0);
                for row in m.iter_mut() {
                    row.swap(t, best.1);
                }
                continue;
            }
            // divisibility: fold a non-divisible entry into row t and repeat
            let bad =
                (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !(&m[i][j] % &m[t][t]).is_zero()));
            match bad {
                Some(i) => {
                    let row = m[i].clone();
                    for (x, v) in m[t].iter_mut().zip(row).skip(t) {
                        *x += v;
                    }
                }
                None => break,
            }
        }
        diag.push(m[t][t].abs());
        t += 1;
    }
    diag
}

/// Abelian invariants of the presented group.
pub fn abelianize(p: &Presentation) -> AbelianInvariants {
    let n = p.gens.len();
    let m: Vec<Vec<BigInt>> = p
        .rels
        .iter()
        .map(|r| {
            let mut row = vec![BigInt::zero(); n];
            for l in r {
                if l.inv {
                    row[l.gen] -= 1;
                } else {
                    row[l.gen] += 1;
                }
            }
            row
        })
        .collect();
    let diag = smith_diagonal(m, n);
    AbelianInvariants {
        free_rank: n - diag.len(),
        torsion: diag.into_iter().filter(|d| !d.is_one()).collect(),
    }
}

/// True when `w` is trivial in the abelianization of `p`.
///
/// Finitely generated abelian groups are Hopfian, so adding `w` as a relator leaves the
/// invariants unchanged exactly when its image is already zero.
pub fn abelian_image_trivial(p: &Presentation, w: &[Letter]) -> bool {
    let mut rels = p.rels.clone();
    rels.push(w.to_vec());
    abelianize(&Presentation::new(p.gens.clone(), rels)) == abelianize(p)
}

/// Repeated generator elimination and relator cleanup, at most `budget` eliminations.
///
/// A generator occurring exactly once in some relator is solved for and substituted away;
/// the shortest such relator (then least generator) is used first.
pub fn tietze_simplify(p: &Presentation, budget: usize) -> Presentation {
    let mut gens: Vec<Option<String>> = p.gens.iter().cloned().map(Some).collect();
    let mut rels: Vec<Word> = p.rels.clone();
    let cleanup = |rels: &mut Vec<Word>| {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for r in rels.iter() {
            let c = cyclic_reduce(r);
            if !c.is_empty() && seen.insert(cyclic_key(&c)) {
                out.push(c);
            }
        }
        *rels = out;
    };
    cleanup(&mut rels);
    for _ in 0..budget {
        let mut choice: Option<(usize, usize, usize)> = None; // (len, relator, generator)
        for (ri, r) in rels.iter().enumerate() {
            let mut count = std::collections::BTreeMap::new();
            for l in r {
                *count.entry(l.gen).or_insert(0usize) += 1;
            }
            if let Some((&g, _)) = count.iter().find(|(_, &c)| c == 1) {
                let key = (r.len(), ri, g);
                if choice.is_none_or(|c| key < c) {
                    choice = Some(key);
                }
            }
        }
        let Some((_, ri, g)) = choice else { break };
        let r = rels.remove(ri);
        let pos = r.iter().position(|l| l.gen == g).expect("present");
        // rotate so the generator comes first: r ~ x^ε w
        let mut rot = r[pos..].to_vec();
        rot.extend_from_slice(&r[..pos]);
        let eps_inv = rot[0].inv;
        let w = &rot[1..];
        // x w = 1 gives x = w⁻¹; x⁻¹ w = 1 gives x = w
        let image: Word = if eps_inv { w.to_vec() } else { inverse(w) };
        let image_inv = inverse(&image);
        for rel in rels.iter_mut() {
            let mut out = Word::new();
            for &l in rel.iter() {
                if l.gen == g {
                    out.extend_from_slice(if l.inv { &image_inv } else { &image });
                } else {
                    out.push(l);
                }
            }
            *rel = out;
        }
        gens[g] = None;
        cleanup(&mut rels);
    }
    // renumber surviving generators
    let mut map = vec![usize::MAX; gens.len()];
    let mut names = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        if let Some(n) = g {
            map[i] = names.len();
            names.push(n.clone());
        }
    }
    let rels = rels
        .iter()
        .map(|r| {
            r.iter()
                .map(|l| Letter {
                    gen: map[l.gen],
                    inv: l.inv,
                })
                .collect()
        })
        .collect();
    Presentation::new(names, rels)
}

/// True when Tietze elimination removes every generator.
pub fn certified_trivial(p: &Presentation) -> bool {
    tietze_simplify(p, p.gens.len() + 1).gens.is_empty()
}

/// A groupoid presentation: objects, generating morphisms with endpoints and word relations.
///
/// Relation words are read in traversal order; a letter's inverse swaps its endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupoidPresentation {
    pub objects: Vec<String>,
    /// `(name, source, target)`.
    pub arrows: Vec<(String, usize, usize)>,
    pub rels: Vec<(Word, Word)>,
}

impl GroupoidPresentation {
    pub fn letter_endpoints(&self, l: Letter) -> (usize, usize) {
        let (_, s, t) = self.arrows[l.gen];
        if l.inv {
            (t, s)
        } else {
            (s, t)
        }
    }

    /// Endpoints of a nonempty word, or `None` when letters do not chain.
    pub fn word_endpoints(&self, w: &[Letter]) -> Option<(usize, usize)> {
        let (s, mut t) = self.letter_endpoints(*w.first()?);
        for &l in &w[1..] {
            let (a, b) = self.letter_endpoints(l);
            if a != t {
                return None;
            }
            t = b;
        }
        Some((s, t))
    }
}

/// A spanning-tree contraction of a groupoid presentation.
#[derive(Clone, Debug)]
pub struct Collapse {
    pub presentation: Presentation,
    /// Tree membership per groupoid arrow.
    pub tree: Vec<bool>,
    index: Vec<usize>,
}

impl Collapse {
    /// The group word of a groupoid word: tree arrows dropped, the rest renamed.
    pub fn image(&self, w: &[Letter]) -> Word {
        w.iter()
            .filter(|l| !self.tree[l.gen])
            .map(|l| Letter {
                gen: self.index[l.gen],
                inv: l.inv,
            })
            .collect()
    }
}

/// Spanning-tree contraction at `base`: BFS over objects with arrows in id order.
///
/// Generators are the non-tree arrows (names kept); each relation `(u, v)` becomes the
/// relator `ū v̄⁻¹` where bars drop tree arrows.
pub fn collapse(gp: &GroupoidPresentation, base: usize) -> Result<Collapse, GroupError> {
    let n = gp.objects.len();
    if base >= n {
        return Err(GroupError::Disconnected);
    }
    let mut reached = vec![false; n];
    let mut tree = vec![false; gp.arrows.len()];
    reached[base] = true;
    let mut queue = VecDeque::from([base]);
    while let Some(o) = queue.pop_front() {
        for (i, &(_, s, t)) in gp.arrows.iter().enumerate() {
            let other = if s == o {
                t
            } else if t == o {
                s
            } else {
                continue;
            };
            if !reached[other] {
                reached[other] = true;
                tree[i] = true;
                queue.push_back(other);
            }
        }
    }
    if reached.iter().any(|r| !r) {
        return Err(GroupError::Disconnected);
    }
    let mut index = vec![usize::MAX; gp.arrows.len()];
    let mut gens = Vec::new();
    for (i, (name, _, _)) in gp.arrows.iter().enumerate() {
        if !tree[i] {
            index[i] = gens.len();
            gens.push(name.clone());
        }
    }
    let mut c = Collapse {
        presentation: Presentation::new(gens, Vec::new()),
        tree,
        index,
    };
    let rels = gp
        .rels
        .iter()
        .map(|(u, v)| concat(&[&c.image(u), &inverse(&c.image(v))]))
        .collect();
    c.presentation = Presentation::new(c.presentation.gens, rels);
    Ok(c)
}

/// The vertex group at `base` of a groupoid presentation, via [`collapse`].
pub fn groupoid_to_group(
    gp: &GroupoidPresentation,
    base: usize,
) -> Result<Presentation, GroupError> {
    collapse(gp, base).map(|c| c.presentation)
}
