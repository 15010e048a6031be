//! Permutations of `{0, .., n-1}`, commuting tuples, orbits and block restrictions.
//!
//! Everything here is 0-based. Text forms (`Display`, [`Permutation::parse`])
//! are 1-based image sequences, so the cycle `(1 2 3)` reads `"2 3 1"`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n).collect(),
        }
    }

    /// Builds a permutation from 0-based images, checking bijectivity.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(Error::NotAPermutation(format!("{:?}", images)));
            }
            seen[x] = true;
        }
        Ok(Permutation { images })
    }

    pub(crate) fn from_images_unchecked(images: Vec<usize>) -> Self {
        debug_assert!(Self::from_images(images.clone()).is_ok());
        Permutation { images }
    }

    /// Builds a permutation from 1-based images.
    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        let shifted = images
            .iter()
            .map(|&x| {
                x.checked_sub(1)
                    .ok_or_else(|| Error::NotAPermutation(format!("{:?}", images)))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_images(shifted)
    }

    /// Builds a permutation of `n` points from 1-based disjoint cycles.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut images: Vec<usize> = (0..n).collect();
        let mut touched = vec![false; n];
        for cycle in cycles {
            for (i, &x) in cycle.iter().enumerate() {
                let y = cycle[(i + 1) % cycle.len()];
                if x == 0 || x > n || y == 0 || y > n || touched[x - 1] {
                    return Err(Error::NotAPermutation(format!("cycles {:?} on {}", cycles, n)));
                }
                touched[x - 1] = true;
                images[x - 1] = y - 1;
            }
        }
        Self::from_images(images)
    }

    /// Parses a whitespace-separated 1-based image sequence such as `"2 3 1"`.
    pub fn parse(s: &str) -> Result<Self> {
        let images = s
            .split_whitespace()
            .map(|tok| {
                tok.parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad image {:?}", tok)))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_one_based(&images)
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn to_one_based(&self) -> Vec<usize> {
        self.images.iter().map(|&x| x + 1).collect()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// `self ∘ other`, i.e. `i ↦ self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        check_sizes(self, other)?;
        Ok(Permutation {
            images: other.images.iter().map(|&x| self.images[x]).collect(),
        })
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.n()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x] = i;
        }
        Permutation { images: inv }
    }

    pub fn pow(&self, e: usize) -> Permutation {
        let mut images: Vec<usize> = (0..self.n()).collect();
        for _ in 0..e {
            for x in images.iter_mut() {
                *x = self.images[*x];
            }
        }
        Permutation { images }
    }

    pub fn commutes(&self, other: &Permutation) -> Result<bool> {
        check_sizes(self, other)?;
        Ok(self.commutes_unchecked(other))
    }

    /// Commutation test without the size check and without allocating.
    #[inline]
    pub(crate) fn commutes_unchecked(&self, other: &Permutation) -> bool {
        let (a, b) = (&self.images, &other.images);
        (0..a.len()).all(|i| a[b[i]] == b[a[i]])
    }
}

fn check_sizes(a: &Permutation, b: &Permutation) -> Result<()> {
    if a.n() != b.n() {
        return Err(Error::SizeMismatch {
            left: a.n(),
            right: b.n(),
        });
    }
    Ok(())
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;

    fn try_from(one_based: Vec<usize>) -> Result<Self> {
        Permutation::from_one_based(&one_based)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Vec<usize> {
        p.to_one_based()
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, &x) in self.images.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}", x + 1)?;
        }
        Ok(())
    }
}

/// `a ∘ b`.
pub fn compose(a: &Permutation, b: &Permutation) -> Result<Permutation> {
    a.compose(b)
}

pub fn commutes(a: &Permutation, b: &Permutation) -> Result<bool> {
    a.commutes(b)
}

/// An ordered tuple of pairwise commuting permutations of the same `n` points.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CommutingTuple {
    n: usize,
    perms: Vec<Permutation>,
}

impl CommutingTuple {
    pub fn new(n: usize, perms: Vec<Permutation>) -> Result<Self> {
        for perm in &perms {
            if perm.n() != n {
                return Err(Error::SizeMismatch {
                    left: n,
                    right: perm.n(),
                });
            }
        }
        for i in 0..perms.len() {
            for j in i + 1..perms.len() {
                if !perms[i].commutes_unchecked(&perms[j]) {
                    return Err(Error::NotCommuting(i, j));
                }
            }
        }
        Ok(CommutingTuple { n, perms })
    }

    /// Skips the pairwise commutation check; sizes must still agree.
    pub fn new_unchecked(n: usize, perms: Vec<Permutation>) -> Self {
        debug_assert!(perms.iter().all(|s| s.n() == n));
        CommutingTuple { n, perms }
    }

    pub fn empty(n: usize) -> Self {
        CommutingTuple { n, perms: Vec::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.perms.len()
    }

    pub fn perms(&self) -> &[Permutation] {
        &self.perms
    }

    pub fn into_perms(self) -> Vec<Permutation> {
        self.perms
    }

    pub fn orbit_partition(&self) -> OrbitPartition {
        orbits_of(self.n, &self.perms)
    }

    pub fn is_transitive(&self) -> bool {
        self.orbit_partition().len() == 1
    }
}

impl fmt::Display for CommutingTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, s) in self.perms.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "[{}]", s)?;
        }
        f.write_str(")")
    }
}

/// Set partition of `{0, .., n-1}` with sorted blocks ordered by minimum.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OrbitPartition {
    n: usize,
    blocks: Vec<Vec<usize>>,
    block_of: Vec<usize>,
}

impl OrbitPartition {
    /// Validates and canonicalizes: blocks get sorted and renumbered by minimum.
    pub fn from_blocks(n: usize, mut blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut block_of = vec![usize::MAX; n];
        for block in blocks.iter_mut() {
            if block.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            block.sort_unstable();
        }
        blocks.sort_unstable_by_key(|b| b[0]);
        for (idx, block) in blocks.iter().enumerate() {
            for &x in block {
                if x >= n || block_of[x] != usize::MAX {
                    return Err(Error::InvalidPartition(format!(
                        "element {} out of range or repeated",
                        x + 1
                    )));
                }
                block_of[x] = idx;
            }
        }
        if block_of.contains(&usize::MAX) {
            return Err(Error::InvalidPartition("blocks do not cover the ground set".into()));
        }
        Ok(OrbitPartition {
            n,
            blocks,
            block_of,
        })
    }

    pub fn singletons(n: usize) -> Self {
        OrbitPartition {
            n,
            blocks: (0..n).map(|i| vec![i]).collect(),
            block_of: (0..n).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of blocks.
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block(&self, idx: usize) -> &[usize] {
        &self.blocks[idx]
    }

    pub fn block_index(&self, x: usize) -> usize {
        self.block_of[x]
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(Vec::len).collect()
    }

    /// 1-based rendering, e.g. `{1,2} {3}`.
    pub fn to_one_based(&self) -> Vec<Vec<usize>> {
        self.blocks
            .iter()
            .map(|b| b.iter().map(|&x| x + 1).collect())
            .collect()
    }
}

impl fmt::Display for OrbitPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, block) in self.blocks.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str("{")?;
            for (j, &x) in block.iter().enumerate() {
                if j > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{}", x + 1)?;
            }
            f.write_str("}")?;
        }
        Ok(())
    }
}

struct DisjointSets {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
    }
}

/// Orbits of the group generated by `perms` (commutation not required).
pub fn orbits_of(n: usize, perms: &[Permutation]) -> OrbitPartition {
    let mut sets = DisjointSets::new(n);
    for sigma in perms {
        for i in 0..n {
            sets.union(i, sigma.apply(i));
        }
    }
    // Scanning in increasing order numbers blocks by their minimum.
    let mut root_block = vec![usize::MAX; n];
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut block_of = vec![0; n];
    for i in 0..n {
        let root = sets.find(i);
        if root_block[root] == usize::MAX {
            root_block[root] = blocks.len();
            blocks.push(Vec::new());
        }
        let b = root_block[root];
        blocks[b].push(i);
        block_of[i] = b;
    }
    OrbitPartition {
        n,
        blocks,
        block_of,
    }
}

/// Number of orbits, without materializing the blocks.
pub fn orbit_count(n: usize, perms: &[Permutation]) -> usize {
    let mut sets = DisjointSets::new(n);
    for sigma in perms {
        for i in 0..n {
            sets.union(i, sigma.apply(i));
        }
    }
    (0..n).filter(|&i| sets.find(i) == i).count()
}

pub fn orbit_partition(t: &CommutingTuple) -> OrbitPartition {
    t.orbit_partition()
}

pub fn is_transitive(t: &CommutingTuple) -> bool {
    t.is_transitive()
}

/// A bijection between two equal-sized subsets of the ground set.
///
/// Pairs are kept sorted by source element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BlockMap {
    pairs: Vec<(usize, usize)>,
}

impl BlockMap {
    pub fn from_pairs(mut pairs: Vec<(usize, usize)>) -> Result<Self> {
        pairs.sort_unstable();
        let mut targets: Vec<usize> = pairs.iter().map(|&(_, y)| y).collect();
        targets.sort_unstable();
        let distinct = |v: &[usize]| v.windows(2).all(|w| w[0] != w[1]);
        let sources: Vec<usize> = pairs.iter().map(|&(x, _)| x).collect();
        if !distinct(&sources) || !distinct(&targets) {
            return Err(Error::InvalidWitness(format!("block map {:?} is not a bijection", pairs)));
        }
        Ok(BlockMap { pairs })
    }

    pub fn identity(block: &[usize]) -> Self {
        let mut pairs: Vec<(usize, usize)> = block.iter().map(|&x| (x, x)).collect();
        pairs.sort_unstable();
        BlockMap { pairs }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn source(&self) -> Vec<usize> {
        self.pairs.iter().map(|&(x, _)| x).collect()
    }

    /// Sorted image set.
    pub fn target(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.pairs.iter().map(|&(_, y)| y).collect();
        t.sort_unstable();
        t
    }

    pub fn apply(&self, x: usize) -> Option<usize> {
        self.pairs
            .binary_search_by_key(&x, |&(s, _)| s)
            .ok()
            .map(|i| self.pairs[i].1)
    }

    pub fn inverse(&self) -> BlockMap {
        let mut pairs: Vec<(usize, usize)> = self.pairs.iter().map(|&(x, y)| (y, x)).collect();
        pairs.sort_unstable();
        BlockMap { pairs }
    }

    /// `self ∘ inner`; `inner`'s target must be `self`'s source.
    pub fn after(&self, inner: &BlockMap) -> Result<BlockMap> {
        let pairs = inner
            .pairs
            .iter()
            .map(|&(x, y)| {
                self.apply(y).map(|z| (x, z)).ok_or_else(|| {
                    Error::InvalidWitness(format!("block maps not composable at {}", y + 1))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(BlockMap { pairs })
    }
}

/// Restriction of `sigma` to `block`, with the target computed from the images.
pub fn restrict(sigma: &Permutation, block: &[usize]) -> BlockMap {
    let mut pairs: Vec<(usize, usize)> = block.iter().map(|&x| (x, sigma.apply(x))).collect();
    pairs.sort_unstable();
    BlockMap { pairs }
}
