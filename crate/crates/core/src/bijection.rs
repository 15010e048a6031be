//! The `p+1 → p` bijection for transitive commuting tuples.
//!
//! Given a transitive `(σ_1, …, σ_{p+1})`, let `X_1, …, X_r` be the orbits of
//! `(σ_1, …, σ_p)` numbered by minimal element. `σ_{p+1}` permutes these blocks
//! in a single `r`-cycle, so all blocks have the same size `s` and the tuple is
//! encoded by
//!
//! * `σ̃`: the restrictions of `σ_1, …, σ_p` to `X_1`, a transitive commuting `p`-tuple;
//! * `γ`: the block cycle, `γ(i)` being the `i`-th block visited from `X_1` (so `γ(1) = 1`);
//! * `τ_i`: `σ_{p+1}` restricted to `X_{γ(i)} → X_{γ(i+1)}` for `i < r`;
//! * `z = σ_{p+1}^r(1) ∈ X_1`, the twist of the return map.
//!
//! [`reconstruct`] rebuilds the tuple: the `σ_j` on `X_{γ(i)}` are conjugates of
//! `σ̃_j` through the `τ` chain, and `σ_{p+1}` on the last block is
//! `g ∘ τ_1^{-1} ∘ … ∘ τ_{r-1}^{-1}` with `g` the unique element of `⟨σ̃⟩`
//! sending the first point to `z`.
//!
//! `σ̃` is stored on `{0, …, s-1}`, identifying `X_1` with it in increasing order.

use std::collections::{HashSet, VecDeque};

use num_bigint::BigUint;
use serde::Serialize;

use crate::check::CheckReport;
use crate::counting::factorial;
use crate::error::{Error, Result};
use crate::oracle::{all_permutations, enumerate_transitive};
use crate::perm::{orbit_count, orbits_of, restrict, BlockMap, CommutingTuple, OrbitPartition, Permutation};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BijectionWitness {
    pub blocks: OrbitPartition,
    pub sigma_tilde: CommutingTuple,
    pub gamma: Permutation,
    pub tau: Vec<BlockMap>,
    pub z: usize,
}

impl BijectionWitness {
    pub fn r(&self) -> usize {
        self.blocks.len()
    }

    pub fn s(&self) -> usize {
        self.blocks.block(0).len()
    }

    /// Checks every structural invariant of the witness.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidWitness(msg));
        let r = self.blocks.len();
        if r == 0 {
            return bad("no blocks".into());
        }
        let s = self.s();
        if self.blocks.blocks().iter().any(|b| b.len() != s) {
            return bad(format!("blocks {} are not all of size {}", self.blocks, s));
        }
        if self.gamma.n() != r || self.gamma.apply(0) != 0 {
            return bad(format!("gamma [{}] must permute 1..{} and fix 1", self.gamma, r));
        }
        if self.tau.len() != r - 1 {
            return bad(format!("expected {} gluing maps, got {}", r - 1, self.tau.len()));
        }
        for (i, t) in self.tau.iter().enumerate() {
            let from = self.blocks.block(self.gamma.apply(i));
            let to = self.blocks.block(self.gamma.apply(i + 1));
            if t.source() != from || t.target() != to {
                return bad(format!("gluing map {} does not go X_gamma({}) -> X_gamma({})", i + 1, i + 1, i + 2));
            }
        }
        if self.blocks.block(0).binary_search(&self.z).is_err() {
            return bad(format!("z = {} is not in the first block", self.z + 1));
        }
        if self.sigma_tilde.n() != s {
            return bad(format!("restricted tuple acts on {} points, block has {}", self.sigma_tilde.n(), s));
        }
        CommutingTuple::new(s, self.sigma_tilde.perms().to_vec())
            .map_err(|e| Error::InvalidWitness(format!("restricted tuple: {}", e)))?;
        if orbit_count(s, self.sigma_tilde.perms()) != 1 {
            return bad("restricted tuple is not transitive on the first block".into());
        }
        Ok(())
    }
}

/// The map `f̂` on block indices with `f(X_α) ⊆ X_{f̂(α)}`.
pub fn induced_block_perm(f: &Permutation, blocks: &OrbitPartition) -> Result<Permutation> {
    if f.n() != blocks.n() {
        return Err(Error::SizeMismatch {
            left: f.n(),
            right: blocks.n(),
        });
    }
    let images = blocks
        .blocks()
        .iter()
        .enumerate()
        .map(|(alpha, block)| {
            let beta = blocks.block_index(f.apply(block[0]));
            if block.iter().any(|&y| blocks.block_index(f.apply(y)) != beta) {
                return Err(Error::StraddlingBlock { block: alpha + 1 });
            }
            Ok(beta)
        })
        .collect::<Result<Vec<_>>>()?;
    Permutation::from_images(images)
        .map_err(|_| Error::InvalidPartition("induced block map is not a permutation".into()))
}

/// Encodes a transitive commuting `(p+1)`-tuple as `(σ̃, γ, τ, z)`.
pub fn decompose(t: &CommutingTuple) -> Result<BijectionWitness> {
    let q = t.p();
    if q == 0 {
        return Err(Error::NotPositive("tuple length"));
    }
    let n = t.n();
    if orbit_count(n, t.perms()) != 1 {
        return Err(Error::NotTransitive);
    }
    let (head, last) = t.perms().split_at(q - 1);
    let last = &last[0];
    let blocks = orbits_of(n, head);
    let r = blocks.len();
    let induced = induced_block_perm(last, &blocks)?;

    let mut cycle = vec![0];
    let mut a = induced.apply(0);
    while a != 0 {
        cycle.push(a);
        a = induced.apply(a);
    }
    // The union of the blocks on this cycle is invariant, so it must be everything.
    assert_eq!(cycle.len(), r, "block cycle through X_1 misses blocks of a transitive tuple");
    let gamma = Permutation::from_images(cycle)?;

    let s = blocks.block(0).len();
    assert!(
        blocks.blocks().iter().all(|b| b.len() == s),
        "blocks permuted cyclically must have equal sizes"
    );

    let tau = (0..r - 1)
        .map(|i| restrict(last, blocks.block(gamma.apply(i))))
        .collect();

    let first = blocks.block(0);
    let local = |x: usize| first.binary_search(&x).expect("X_1 is invariant under the first p permutations");
    let sigma_tilde = CommutingTuple::new_unchecked(
        s,
        head.iter()
            .map(|sigma| Permutation::from_images_unchecked(first.iter().map(|&x| local(sigma.apply(x))).collect()))
            .collect(),
    );

    let z = last.pow(r).apply(0);
    Ok(BijectionWitness {
        blocks,
        sigma_tilde,
        gamma,
        tau,
        z,
    })
}

/// The unique `g ∈ ⟨σ̃⟩` with `g(0) = z`, by breadth-first search over the group.
pub fn find_g(sigma_tilde: &CommutingTuple, z: usize) -> Result<Permutation> {
    let s = sigma_tilde.n();
    if z >= s {
        return Err(Error::InvalidRange(format!("z = {} outside 1..{}", z + 1, s)));
    }
    let start = Permutation::identity(s);
    let mut seen: HashSet<Permutation> = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some(g) = queue.pop_front() {
        if g.apply(0) == z {
            return Ok(g);
        }
        for sigma in sigma_tilde.perms() {
            let h = sigma.compose(&g)?;
            if seen.insert(h.clone()) {
                queue.push_back(h);
            }
        }
    }
    Err(Error::NotTransitive)
}

/// Rebuilds the `(p+1)`-tuple encoded by a witness.
pub fn reconstruct(w: &BijectionWitness) -> Result<CommutingTuple> {
    w.validate()?;
    let (r, s, p) = (w.r(), w.s(), w.sigma_tilde.p());
    let n = r * s;
    let first = w.blocks.block(0);

    // chain[i][l]: image of the l-th point of X_1 under τ_i ∘ … ∘ τ_1, in X_{γ(i+1)}.
    let mut chain: Vec<Vec<usize>> = vec![first.to_vec()];
    for t in &w.tau {
        let prev = chain.last().unwrap();
        let next = prev
            .iter()
            .map(|&x| t.apply(x).expect("validated gluing map"))
            .collect();
        chain.push(next);
    }

    let g = find_g(&w.sigma_tilde, first.binary_search(&w.z).expect("validated z"))?;

    let mut images = vec![vec![usize::MAX; n]; p + 1];
    for (i, points) in chain.iter().enumerate() {
        for (l, &x) in points.iter().enumerate() {
            for (j, sigma) in w.sigma_tilde.perms().iter().enumerate() {
                images[j][x] = points[sigma.apply(l)];
            }
            images[p][x] = if i + 1 < r { chain[i + 1][l] } else { first[g.apply(l)] };
        }
    }

    let perms = images
        .into_iter()
        .map(Permutation::from_images)
        .collect::<Result<Vec<_>>>()
        .map_err(|e| Error::InvalidWitness(format!("reconstruction is not bijective: {}", e)))?;
    let tuple = CommutingTuple::new(n, perms)
        .map_err(|e| Error::InvalidWitness(format!("reconstruction does not commute: {}", e)))?;
    if !tuple.is_transitive() {
        return Err(Error::InvalidWitness("reconstruction is not transitive".into()));
    }
    Ok(tuple)
}

/// All set partitions of `{0, …, n-1}` into blocks of size `s`.
pub fn equal_block_partitions(n: usize, s: usize) -> Vec<OrbitPartition> {
    if s == 0 || !n.is_multiple_of(s) {
        return Vec::new();
    }
    fn grow(
        used: &mut Vec<bool>,
        s: usize,
        blocks: &mut Vec<Vec<usize>>,
        out: &mut Vec<OrbitPartition>,
    ) {
        let n = used.len();
        let Some(min) = used.iter().position(|&u| !u) else {
            out.push(OrbitPartition::from_blocks(n, blocks.clone()).expect("complete partition"));
            return;
        };
        used[min] = true;
        let free: Vec<usize> = (min + 1..n).filter(|&x| !used[x]).collect();
        for rest in combinations(&free, s - 1) {
            for &x in &rest {
                used[x] = true;
            }
            let mut block = vec![min];
            block.extend(&rest);
            blocks.push(block);
            grow(used, s, blocks, out);
            blocks.pop();
            for &x in &rest {
                used[x] = false;
            }
        }
        used[min] = false;
    }
    let mut out = Vec::new();
    grow(&mut vec![false; n], s, &mut Vec::new(), &mut out);
    out
}

fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if items.len() < k {
        return Vec::new();
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        for mut tail in combinations(&items[i + 1..], k - 1) {
            tail.insert(0, x);
            out.push(tail);
        }
    }
    out
}

/// Witness counts for one fixed partition, one entry per factor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessCounts {
    pub sigma_tilde: usize,
    pub gamma: usize,
    pub tau: usize,
    pub z: usize,
    pub total: usize,
}

/// Every witness with the given blocks, enumerated factor by factor:
/// transitive `σ̃` on `X_1`, `γ` fixing the first block, gluing maps, `z ∈ X_1`.
pub fn enumerate_witnesses(p: usize, blocks: &OrbitPartition) -> Result<(Vec<BijectionWitness>, WitnessCounts)> {
    let r = blocks.len();
    if r == 0 {
        return Ok((Vec::new(), WitnessCounts { sigma_tilde: 0, gamma: 0, tau: 0, z: 0, total: 0 }));
    }
    let s = blocks.block(0).len();
    if blocks.blocks().iter().any(|b| b.len() != s) {
        return Err(Error::InvalidPartition(format!("blocks {} have unequal sizes", blocks)));
    }
    let sigmas: Vec<CommutingTuple> = enumerate_transitive(p, s)?.collect();
    let gammas: Vec<Permutation> = all_permutations(r).into_iter().filter(|g| g.apply(0) == 0).collect();
    let local_bijections = all_permutations(s);

    let mut witnesses = Vec::new();
    let mut tau_count = 0;
    for gamma in &gammas {
        // all gluing tuples for this γ
        let mut taus: Vec<Vec<BlockMap>> = vec![Vec::new()];
        for i in 0..r - 1 {
            let from = blocks.block(gamma.apply(i));
            let to = blocks.block(gamma.apply(i + 1));
            let maps: Vec<BlockMap> = local_bijections
                .iter()
                .map(|pi| BlockMap::from_pairs((0..s).map(|l| (from[l], to[pi.apply(l)])).collect()))
                .collect::<Result<_>>()?;
            taus = taus
                .into_iter()
                .flat_map(|prefix| {
                    maps.iter().map(move |m| {
                        let mut v = prefix.clone();
                        v.push(m.clone());
                        v
                    })
                })
                .collect();
        }
        tau_count = taus.len();
        for sigma in &sigmas {
            for tau in &taus {
                for &z in blocks.block(0) {
                    witnesses.push(BijectionWitness {
                        blocks: blocks.clone(),
                        sigma_tilde: sigma.clone(),
                        gamma: gamma.clone(),
                        tau: tau.clone(),
                        z,
                    });
                }
            }
        }
    }
    let counts = WitnessCounts {
        sigma_tilde: sigmas.len(),
        gamma: gammas.len(),
        tau: tau_count,
        z: s,
        total: witnesses.len(),
    };
    Ok((witnesses, counts))
}

/// Exhaustive `reconstruct ∘ decompose = id` over the transitive commuting
/// `(p+1)`-tuples on `n` points.
pub fn verify_round_trip(p: usize, n: usize) -> Result<CheckReport> {
    let mut report = CheckReport::new(format!("round trip p+1={} n={}", p + 1, n));
    for t in enumerate_transitive(p + 1, n)? {
        let w = decompose(&t)?;
        match reconstruct(&w) {
            Ok(back) => {
                report.compare(|| format!("tuple {}", t), &back, &t);
            }
            Err(e) => report.fail(format!("tuple {}", t), e.to_string(), "a valid reconstruction".into()),
        }
    }
    Ok(report)
}

/// One `r · s = n` line of the cardinality check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorRow {
    pub r: usize,
    pub s: usize,
    pub partitions: usize,
    pub counts: WitnessCounts,
}

#[derive(Clone, Debug, Serialize)]
pub struct CardinalityReport {
    pub check: CheckReport,
    pub rows: Vec<FactorRow>,
    pub witnesses: usize,
    pub transitive_tuples: usize,
}

/// Generates every witness for every equal-size partition of `n` points,
/// reconstructs it, and checks
///
/// * each factor count: `A(p,s,1)` (by enumeration), `(r-1)!`, `s!^{r-1}`, `s`;
/// * the number of partitions, `n!/(r! s!^r)`;
/// * `decompose(reconstruct(w)) = w` for every witness;
/// * the reconstructed tuples are pairwise distinct and are exactly the
///   enumerated transitive `(p+1)`-tuples.
pub fn verify_cardinality(p: usize, n: usize) -> Result<CardinalityReport> {
    let mut check = CheckReport::new(format!("witness cardinality p={} n={}", p, n));
    let mut rows = Vec::new();
    let mut rebuilt: HashSet<CommutingTuple> = HashSet::new();
    let mut witnesses = 0;
    for s in (1..=n).filter(|s| n.is_multiple_of(*s)) {
        let r = n / s;
        let partitions = equal_block_partitions(n, s);
        let expected_partitions = factorial(n) / (factorial(r) * factorial(s).pow(r as u32));
        check.compare(
            || format!("partitions r={} s={}", r, s),
            &BigUint::from(partitions.len()),
            &expected_partitions,
        );
        let transitive_small = enumerate_transitive(p, s)?.count();
        let mut row_counts = None;
        for blocks in &partitions {
            let (ws, counts) = enumerate_witnesses(p, blocks)?;
            let loc = |what: &str| format!("{} r={} s={} X={}", what, r, s, blocks);
            check.compare(|| loc("sigma choices"), &counts.sigma_tilde, &transitive_small);
            check.compare(|| loc("gamma choices"), &BigUint::from(counts.gamma), &factorial(r - 1));
            check.compare(|| loc("tau choices"), &BigUint::from(counts.tau), &factorial(s).pow(r as u32 - 1));
            check.compare(|| loc("z choices"), &counts.z, &s);
            check.compare(
                || loc("witness total"),
                &counts.total,
                &(counts.sigma_tilde * counts.gamma * counts.tau * counts.z),
            );
            for w in ws {
                match reconstruct(&w) {
                    Ok(t) => {
                        let back = decompose(&t)?;
                        check.compare(|| loc("decompose(reconstruct(w))"), &back.to_string_one_based(), &w.to_string_one_based());
                        if !rebuilt.insert(t.clone()) {
                            check.fail(loc("injectivity"), format!("{} produced twice", t), "distinct tuples".into());
                        }
                    }
                    Err(e) => check.fail(loc("reconstruct"), e.to_string(), "a valid tuple".into()),
                }
                witnesses += 1;
            }
            row_counts = Some(counts);
        }
        if let Some(counts) = row_counts {
            rows.push(FactorRow {
                r,
                s,
                partitions: partitions.len(),
                counts,
            });
        }
    }
    let transitive: HashSet<CommutingTuple> = enumerate_transitive(p + 1, n)?.collect();
    check.compare(|| "witnesses vs transitive tuples".into(), &witnesses, &transitive.len());
    if rebuilt != transitive {
        check.fail(
            "reconstructed set".into(),
            format!("{} tuples", rebuilt.len()),
            format!("{} enumerated transitive tuples", transitive.len()),
        );
    } else {
        check.checked += 1;
    }
    Ok(CardinalityReport {
        check,
        rows,
        witnesses,
        transitive_tuples: transitive.len(),
    })
}

impl BijectionWitness {
    /// 1-based text form: blocks, `γ` images, `τ` pair lists, `z`.
    pub fn to_string_one_based(&self) -> String {
        let tau: Vec<String> = self
            .tau
            .iter()
            .map(|t| {
                let pairs: Vec<String> = t.pairs().iter().map(|&(a, b)| format!("{}->{}", a + 1, b + 1)).collect();
                format!("[{}]", pairs.join(","))
            })
            .collect();
        format!(
            "blocks={} sigma~={} gamma=[{}] tau=[{}] z={}",
            self.blocks,
            self.sigma_tilde,
            self.gamma,
            tau.join(" "),
            self.z + 1
        )
    }
}
