//! Partitions of an index set with blocks in canonical order.

use std::collections::BTreeMap;

/// A partition of `0..n` with blocks sorted internally and ordered by least member.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Partition {
    block_of: Vec<usize>,
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    /// Builds a partition from a labelling `label[i]`; angles sharing a label share a block.
    pub fn from_labels<L: Ord + Clone>(labels: &[L]) -> Self {
        let mut first: BTreeMap<L, usize> = BTreeMap::new();
        let mut raw: Vec<Vec<usize>> = Vec::new();
        for (i, l) in labels.iter().enumerate() {
            let id = *first.entry(l.clone()).or_insert_with(|| {
                raw.push(Vec::new());
                raw.len() - 1
            });
            raw[id].push(i);
        }
        Self::from_blocks_unchecked(labels.len(), raw)
    }

    /// Builds a partition from blocks that are known to be disjoint and to cover `0..n`.
    pub fn from_blocks_unchecked(n: usize, mut blocks: Vec<Vec<usize>>) -> Self {
        for b in &mut blocks {
            b.sort_unstable();
        }
        blocks.retain(|b| !b.is_empty());
        blocks.sort_by_key(|b| b[0]);
        let mut block_of = vec![usize::MAX; n];
        for (id, b) in blocks.iter().enumerate() {
            for &x in b {
                block_of[x] = id;
            }
        }
        Partition { block_of, blocks }
    }

    /// Builds a partition from blocks, returning the first element that is repeated or missing.
    pub fn from_blocks(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self, PartitionError> {
        let mut seen = vec![false; n];
        for b in &blocks {
            for &x in b {
                if x >= n {
                    return Err(PartitionError::OutOfRange(x));
                }
                if seen[x] {
                    return Err(PartitionError::Repeated(x));
                }
                seen[x] = true;
            }
        }
        if let Some(x) = seen.iter().position(|s| !s) {
            return Err(PartitionError::Missing(x));
        }
        Ok(Self::from_blocks_unchecked(n, blocks))
    }

    /// The discrete partition with one singleton per element.
    pub fn discrete(n: usize) -> Self {
        Self::from_blocks_unchecked(n, (0..n).map(|i| vec![i]).collect())
    }

    pub fn len(&self) -> usize {
        self.block_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.block_of.is_empty()
    }

    /// Block id of element `x`.
    pub fn block_of(&self, x: usize) -> usize {
        self.block_of[x]
    }

    /// Members of block `id`, sorted.
    pub fn block(&self, id: usize) -> &[usize] {
        &self.blocks[id]
    }

    /// Members of the block containing `x`.
    pub fn block_containing(&self, x: usize) -> &[usize] {
        &self.blocks[self.block_of[x]]
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn same(&self, x: usize, y: usize) -> bool {
        self.block_of[x] == self.block_of[y]
    }

    /// True when every block of `self` lies inside a block of `coarser`.
    pub fn refines(&self, coarser: &Partition) -> bool {
        self.blocks
            .iter()
            .all(|b| b.iter().all(|&x| coarser.same(x, b[0])))
    }

    pub fn is_discrete(&self) -> bool {
        self.blocks.len() == self.block_of.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PartitionError {
    OutOfRange(usize),
    Repeated(usize),
    Missing(usize),
}

/// Union-find over `0..n`, used for transitive closures.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let next = self.parent[y];
            self.parent[y] = r;
            y = next;
        }
        r
    }

    /// Merges the classes of `x` and `y`; returns true when they were distinct.
    pub fn union(&mut self, x: usize, y: usize) -> bool {
        let (a, b) = (self.find(x), self.find(y));
        if a == b {
            return false;
        }
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        self.parent[hi] = lo;
        true
    }

    pub fn into_partition(mut self) -> Partition {
        let n = self.parent.len();
        let labels: Vec<usize> = (0..n).map(|i| self.find(i)).collect();
        Partition::from_labels(&labels)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blocks_ordered_by_least_member() {
        let p = Partition::from_labels(&['b', 'a', 'b', 'c']);
        assert_eq!(p.blocks(), &[vec![0, 2], vec![1], vec![3]]);
        assert!(p.same(0, 2));
        assert!(!p.same(0, 1));
    }

    #[test]
    fn from_blocks_reports_defects() {
        assert_eq!(
            Partition::from_blocks(3, vec![vec![0, 1], vec![1, 2]]),
            Err(PartitionError::Repeated(1))
        );
        assert_eq!(
            Partition::from_blocks(3, vec![vec![0, 1]]),
            Err(PartitionError::Missing(2))
        );
    }

    #[test]
    fn union_find_closure() {
        let mut uf = UnionFind::new(5);
        uf.union(0, 3);
        uf.union(3, 4);
        let p = uf.into_partition();
        assert_eq!(p.blocks(), &[vec![0, 3, 4], vec![1], vec![2]]);
        assert!(Partition::discrete(5).refines(&p));
    }
}
