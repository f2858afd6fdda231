//! Set partitions of `[k]`, interval partitions, and the four categories
//! `I_s`, `I_o`, `I_h`, `I_b`.
//!
//! A [`SetPartition`] is stored as its restricted growth string: element `r`
//! carries the index of its block, and blocks are numbered in order of their
//! minima. Equal partitions therefore have equal representations.

use std::fmt;
use std::str::FromStr;

use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SetPartition {
    labels: Vec<u32>,
}

impl SetPartition {
    /// Canonicalizes an arbitrary labelling: positions with equal labels
    /// share a block.
    pub fn from_labels<T: PartialEq>(labels: &[T]) -> Self {
        let mut seen: Vec<&T> = Vec::new();
        let labels = labels
            .iter()
            .map(|l| match seen.iter().position(|s| *s == l) {
                Some(p) => p as u32,
                None => {
                    seen.push(l);
                    (seen.len() - 1) as u32
                }
            })
            .collect();
        SetPartition { labels }
    }

    /// Builds a partition of `[k]` from 1-based blocks.
    pub fn from_blocks(k: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        let mut labels = vec![u32::MAX; k];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            for &e in block {
                if e == 0 || e > k {
                    return Err(Error::InvalidPartition(format!("element {e} outside [1, {k}]")));
                }
                if labels[e - 1] != u32::MAX {
                    return Err(Error::InvalidPartition(format!("element {e} appears twice")));
                }
                labels[e - 1] = b as u32;
            }
        }
        if let Some(missing) = labels.iter().position(|&l| l == u32::MAX) {
            return Err(Error::InvalidPartition(format!("element {} not covered", missing + 1)));
        }
        Ok(Self::from_labels(&labels))
    }

    /// `1_k`, the one-block partition.
    pub fn one(k: usize) -> Self {
        SetPartition { labels: vec![0; k] }
    }

    /// The partition of `[k]` into singletons.
    pub fn singletons(k: usize) -> Self {
        SetPartition {
            labels: (0..k as u32).collect(),
        }
    }

    /// `⊓^{⊗m}` on `[2m]`.
    pub fn pairs(m: usize) -> Self {
        SetPartition {
            labels: (0..2 * m as u32).map(|r| r / 2).collect(),
        }
    }

    /// Interval partition with the given consecutive block sizes.
    pub fn from_composition(sizes: &[usize]) -> Self {
        let labels = sizes
            .iter()
            .enumerate()
            .flat_map(|(b, &s)| std::iter::repeat_n(b as u32, s))
            .collect();
        SetPartition { labels }
    }

    pub fn ground_size(&self) -> usize {
        self.labels.len()
    }

    pub fn num_blocks(&self) -> usize {
        self.labels.iter().max().map_or(0, |&m| m as usize + 1)
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    /// Blocks as sorted 1-based sets, ordered by minimum.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut blocks = vec![Vec::new(); self.num_blocks()];
        for (r, &l) in self.labels.iter().enumerate() {
            blocks[l as usize].push(r + 1);
        }
        blocks
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.num_blocks()];
        for &l in &self.labels {
            sizes[l as usize] += 1;
        }
        sizes
    }

    /// Same block test for 1-based positions.
    pub fn same_block(&self, r: usize, s: usize) -> bool {
        self.labels[r - 1] == self.labels[s - 1]
    }

    /// Every block consists of consecutive integers.
    pub fn is_interval(&self) -> bool {
        // with canonical labels a block is contiguous iff labels never
        // return to an earlier value
        self.labels.windows(2).all(|w| w[1] == w[0] || w[1] == w[0] + 1)
    }

    fn check_ground(&self, other: &Self) -> Result<()> {
        if self.ground_size() != other.ground_size() {
            return Err(Error::GroundMismatch {
                left: self.ground_size(),
                right: other.ground_size(),
            });
        }
        Ok(())
    }

    /// Refinement order: each block of `self` lies inside a block of `other`.
    pub fn leq(&self, other: &Self) -> Result<bool> {
        self.check_ground(other)?;
        Ok(self.leq_unchecked(other))
    }

    pub(crate) fn leq_unchecked(&self, other: &Self) -> bool {
        let mut image = vec![u32::MAX; self.num_blocks()];
        for (a, b) in self.labels.iter().zip(&other.labels) {
            let slot = &mut image[*a as usize];
            if *slot == u32::MAX {
                *slot = *b;
            } else if *slot != *b {
                return false;
            }
        }
        true
    }

    /// Least upper bound in the lattice of all partitions.
    pub fn join(&self, other: &Self) -> Result<Self> {
        self.check_ground(other)?;
        Ok(self.join_unchecked(other))
    }

    pub(crate) fn join_unchecked(&self, other: &Self) -> Self {
        let k = self.ground_size();
        let mut parent: Vec<usize> = (0..k).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for p in [self, other] {
            let mut first = vec![usize::MAX; p.num_blocks()];
            for (r, &l) in p.labels.iter().enumerate() {
                let f = &mut first[l as usize];
                if *f == usize::MAX {
                    *f = r;
                } else {
                    let (a, b) = (find(&mut parent, *f), find(&mut parent, r));
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        let roots: Vec<usize> = (0..k).map(|r| find(&mut parent, r)).collect();
        Self::from_labels(&roots)
    }

    /// Horizontal concatenation.
    pub fn tensor(&self, other: &Self) -> Self {
        let shift = self.num_blocks() as u32;
        let mut labels = self.labels.clone();
        labels.extend(other.labels.iter().map(|l| l + shift));
        SetPartition { labels }
    }

    /// Restriction to the 1-based positions `lo..=hi`, relabelled onto `[hi-lo+1]`.
    pub fn restrict(&self, lo: usize, hi: usize) -> Self {
        Self::from_labels(&self.labels[lo - 1..hi])
    }

    /// Maximal runs of consecutive positions lying in a common block.
    pub fn consecutive_runs(&self) -> Self {
        let mut labels = Vec::with_capacity(self.labels.len());
        let mut run = 0u32;
        for (r, l) in self.labels.iter().enumerate() {
            if r > 0 && *l != self.labels[r - 1] {
                run += 1;
            }
            labels.push(run);
        }
        SetPartition { labels }
    }
}

impl fmt::Display for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for block in self.blocks() {
            write!(f, "{{")?;
            for e in block {
                write!(f, "{e}")?;
            }
            write!(f, "}}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for SetPartition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.blocks().serialize(s)
    }
}

impl<'de> Deserialize<'de> for SetPartition {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let blocks = Vec::<Vec<usize>>::deserialize(d)?;
        let k = blocks.iter().map(Vec::len).sum();
        SetPartition::from_blocks(k, &blocks).map_err(de::Error::custom)
    }
}

/// One of the four blockwise categories of interval partitions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CategoryId {
    /// all interval partitions
    #[serde(rename = "s")]
    S,
    /// interval pair partitions
    #[serde(rename = "o")]
    O,
    /// interval partitions with even blocks
    #[serde(rename = "h")]
    H,
    /// interval partitions with blocks of size at most two
    #[serde(rename = "b")]
    B,
}

impl CategoryId {
    pub const ALL: [CategoryId; 4] = [CategoryId::S, CategoryId::O, CategoryId::H, CategoryId::B];

    pub fn tag(self) -> char {
        match self {
            CategoryId::S => 's',
            CategoryId::O => 'o',
            CategoryId::H => 'h',
            CategoryId::B => 'b',
        }
    }

    /// Membership of `m` in `L_D`, i.e. whether `1_m` belongs to the category.
    pub fn allows_block(self, m: usize) -> bool {
        match self {
            CategoryId::S => m >= 1,
            CategoryId::O => m == 2,
            CategoryId::H => m >= 2 && m.is_multiple_of(2),
            CategoryId::B => m == 1 || m == 2,
        }
    }

    pub fn contains(self, p: &SetPartition) -> bool {
        p.ground_size() >= 1
            && p.is_interval()
            && p.block_sizes().into_iter().all(|m| self.allows_block(m))
    }

    /// Whether `inf_{I_x}` is defined (the category is join-stable).
    pub fn is_join_stable(self) -> bool {
        !matches!(self, CategoryId::B)
    }
}

impl fmt::Display for CategoryId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "I_{}", self.tag())
    }
}

impl FromStr for CategoryId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "s" | "I" | "I_s" => Ok(CategoryId::S),
            "o" | "I_o" | "I_2" => Ok(CategoryId::O),
            "h" | "I_h" => Ok(CategoryId::H),
            "b" | "I_b" => Ok(CategoryId::B),
            other => Err(Error::Parse(format!("unknown category {other:?}"))),
        }
    }
}

/// A multi-index `j ∈ [n]^k` with 1-based entries.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex {
    n: usize,
    entries: Vec<usize>,
}

impl MultiIndex {
    pub fn new(n: usize, entries: Vec<usize>) -> Result<Self> {
        if let Some(&bad) = entries.iter().find(|&&e| e == 0 || e > n) {
            return Err(Error::IndexOutOfRange { entry: bad, n });
        }
        Ok(MultiIndex { n, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    /// `ker j`: positions with equal entries share a block.
    pub fn kernel(&self) -> SetPartition {
        SetPartition::from_labels(&self.entries)
    }

    /// Row-major position in `[n]^k` (0-based).
    pub fn flat_index(&self) -> usize {
        self.entries.iter().fold(0, |acc, &e| acc * self.n + (e - 1))
    }

    pub fn from_flat(n: usize, k: usize, mut flat: usize) -> Self {
        let mut entries = vec![0; k];
        for slot in entries.iter_mut().rev() {
            *slot = flat % n + 1;
            flat /= n;
        }
        MultiIndex { n, entries }
    }

    /// Concatenation `self ⨿ other`.
    pub fn concat(&self, other: &Self) -> Self {
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        MultiIndex {
            n: self.n.max(other.n),
            entries,
        }
    }
}

/// Iterates over all of `[n]^k` in row-major order.
pub fn all_indices(n: usize, k: usize) -> impl Iterator<Item = MultiIndex> {
    let total = n.checked_pow(k as u32).expect("n^k overflows usize");
    (0..total).map(move |f| MultiIndex::from_flat(n, k, f))
}

/// `ker j` for a raw slice of entries.
pub fn kernel(entries: &[usize]) -> SetPartition {
    SetPartition::from_labels(entries)
}

/// All interval partitions of `[k]` in canonical order: lexicographic on
/// the restricted growth string, so `1_k` comes first.
pub fn enumerate_interval(k: usize) -> Vec<SetPartition> {
    if k == 0 {
        return Vec::new();
    }
    let mut out: Vec<SetPartition> = (0u64..1 << (k - 1))
        .map(|cuts| {
            let mut labels = Vec::with_capacity(k);
            let mut b = 0u32;
            labels.push(0);
            for r in 1..k {
                if cuts >> (r - 1) & 1 == 1 {
                    b += 1;
                }
                labels.push(b);
            }
            SetPartition { labels }
        })
        .collect();
    out.sort();
    out
}

/// `D(k)` for the given category, in canonical order.
pub fn enumerate_category(x: CategoryId, k: usize) -> Vec<SetPartition> {
    enumerate_interval(k)
        .into_iter()
        .filter(|p| x.contains(p))
        .collect()
}

/// All set partitions of `[k]` (restricted growth strings, lexicographic).
pub fn enumerate_all(k: usize) -> Vec<SetPartition> {
    let mut out = Vec::new();
    if k == 0 {
        return out;
    }
    let mut labels = vec![0u32; k];
    loop {
        out.push(SetPartition {
            labels: labels.clone(),
        });
        // next restricted growth string
        let mut r = k - 1;
        loop {
            if r == 0 {
                return out;
            }
            let max_prefix = *labels[..r].iter().max().unwrap();
            if labels[r] <= max_prefix {
                labels[r] += 1;
                for l in &mut labels[r + 1..] {
                    *l = 0;
                }
                break;
            }
            r -= 1;
        }
    }
}

/// The multi-indices of `[n]^k` with a fixed kernel.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelClass {
    pub kernel: SetPartition,
    /// the lexicographically smallest member: block `b` gets value `b + 1`
    pub representative: Vec<usize>,
    /// `n (n-1) ⋯ (n - |κ| + 1)`
    pub size: u128,
}

/// Every nonempty kernel class of `[n]^k`, i.e. one per set partition with
/// at most `n` blocks.
pub fn kernel_classes(k: usize, n: usize) -> Vec<KernelClass> {
    enumerate_all(k)
        .into_iter()
        .filter(|p| p.num_blocks() <= n)
        .map(|kernel| {
            let representative = kernel.labels().iter().map(|&l| l as usize + 1).collect();
            let size = (0..kernel.num_blocks()).map(|t| (n - t) as u128).product();
            KernelClass {
                kernel,
                representative,
                size,
            }
        })
        .collect()
}

/// [`kernel_classes`], computed once per `(k, n)`.
pub fn shared_kernel_classes(k: usize, n: usize) -> std::sync::Arc<Vec<KernelClass>> {
    use std::collections::HashMap;
    use std::sync::{Arc, Mutex, OnceLock};
    type Cache = Mutex<HashMap<(usize, usize), Arc<Vec<KernelClass>>>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(c) = cache.lock().unwrap().get(&(k, n)) {
        return c.clone();
    }
    let built = Arc::new(kernel_classes(k, n));
    cache.lock().unwrap().entry((k, n)).or_insert(built).clone()
}

pub fn tensor(p1: &SetPartition, p2: &SetPartition) -> SetPartition {
    p1.tensor(p2)
}

pub fn leq(p1: &SetPartition, p2: &SetPartition) -> Result<bool> {
    p1.leq(p2)
}

pub fn join(p1: &SetPartition, p2: &SetPartition) -> Result<SetPartition> {
    p1.join(p2)
}

/// `inf_{I_x} σ = max{π ∈ I_x(k) : π ≤ σ}` for join-stable categories.
pub fn inf_category(x: CategoryId, sigma: &SetPartition) -> Result<SetPartition> {
    match x {
        CategoryId::S => Ok(sigma.consecutive_runs()),
        CategoryId::B => Err(Error::UnsupportedCategory(x)),
        CategoryId::O | CategoryId::H => {
            let k = sigma.ground_size();
            let below: Vec<SetPartition> = enumerate_category(x, k)
                .into_iter()
                .filter(|p| p.leq_unchecked(sigma))
                .collect();
            below
                .iter()
                .find(|cand| below.iter().all(|p| p.leq_unchecked(cand)))
                .cloned()
                .ok_or(Error::EmptyDownSet { category: x, k })
        }
    }
}

/// (D1): `π ∈ D(k)` iff `π` is an interval partition whose blocks, viewed
/// as one-block partitions, all belong to `D`.
pub fn check_block_stable(x: CategoryId, max_k: usize) -> bool {
    (1..=max_k).all(|k| {
        enumerate_interval(k).into_iter().all(|p| {
            let blockwise = p
                .block_sizes()
                .into_iter()
                .all(|m| x.contains(&SetPartition::one(m)));
            blockwise == x.contains(&p)
        })
    })
}

/// (D2): for `p ≤ r ≤ q` with `p, q ∈ D(k)` and `r ∈ I(k)`, `r ∈ D(k)`.
pub fn check_interval_closed(x: CategoryId, max_k: usize) -> bool {
    (1..=max_k).all(|k| {
        let all = enumerate_interval(k);
        let members = enumerate_category(x, k);
        members.iter().all(|p| {
            members.iter().all(|q| {
                all.iter()
                    .filter(|r| p.leq_unchecked(r) && r.leq_unchecked(q))
                    .all(|r| x.contains(r))
            })
        })
    })
}

/// (D3): `D(l) ≠ ∅` whenever `D(k + l) ≠ ∅` for some `k ∈ L_D`.
pub fn check_enough_partitions(x: CategoryId, max_total: usize) -> bool {
    (1..max_total).all(|l| {
        let witnessed = (1..=max_total - l)
            .filter(|&k| x.allows_block(k))
            .any(|k| !enumerate_category(x, k + l).is_empty());
        !witnessed || !enumerate_category(x, l).is_empty()
    })
}

/// Join-stability of `D(k)` for every `k ≤ max_k`.
pub fn check_join_stable(x: CategoryId, max_k: usize) -> bool {
    (1..=max_k).all(|k| {
        let members = enumerate_category(x, k);
        members
            .iter()
            .all(|p| members.iter().all(|q| x.contains(&p.join_unchecked(q))))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(k: usize, blocks: &[&[usize]]) -> SetPartition {
        let blocks: Vec<Vec<usize>> = blocks.iter().map(|b| b.to_vec()).collect();
        SetPartition::from_blocks(k, &blocks).unwrap()
    }

    #[test]
    fn interval_enumeration() {
        assert_eq!(enumerate_interval(1), vec![p(1, &[&[1]])]);
        assert_eq!(
            enumerate_interval(3),
            vec![
                p(3, &[&[1, 2, 3]]),
                p(3, &[&[1, 2], &[3]]),
                p(3, &[&[1], &[2, 3]]),
                p(3, &[&[1], &[2], &[3]]),
            ]
        );
        assert_eq!(enumerate_interval(6).len(), 32);
        for k in 1..=12 {
            assert_eq!(enumerate_interval(k).len(), 1 << (k - 1));
        }
    }

    #[test]
    fn category_enumeration() {
        assert_eq!(enumerate_category(CategoryId::O, 4), vec![p(4, &[&[1, 2], &[3, 4]])]);
        assert_eq!(
            enumerate_category(CategoryId::H, 4),
            vec![p(4, &[&[1, 2, 3, 4]]), p(4, &[&[1, 2], &[3, 4]])]
        );
        let mut b3 = enumerate_category(CategoryId::B, 3);
        b3.sort_by_key(|q| std::cmp::Reverse(q.num_blocks()));
        assert_eq!(b3.len(), 3);
        assert!(b3.contains(&p(3, &[&[1], &[2], &[3]])));
        assert!(b3.contains(&p(3, &[&[1, 2], &[3]])));
        assert!(b3.contains(&p(3, &[&[1], &[2, 3]])));
        assert!(enumerate_category(CategoryId::O, 3).is_empty());
    }

    #[test]
    fn tensor_examples() {
        assert_eq!(tensor(&p(2, &[&[1, 2]]), &p(1, &[&[1]])), p(3, &[&[1, 2], &[3]]));
        assert_eq!(tensor(&SetPartition::pairs(1), &SetPartition::pairs(1)), SetPartition::pairs(2));
        assert_eq!(
            tensor(&SetPartition::one(2), &SetPartition::one(3)),
            p(5, &[&[1, 2], &[3, 4, 5]])
        );
    }

    #[test]
    fn order_and_join() {
        assert!(leq(&SetPartition::singletons(3), &SetPartition::one(3)).unwrap());
        assert!(!leq(&p(3, &[&[1, 2], &[3]]), &p(3, &[&[1], &[2, 3]])).unwrap());
        let q = p(3, &[&[1, 3], &[2]]);
        assert!(leq(&q, &q).unwrap());
        assert_eq!(
            leq(&SetPartition::one(2), &SetPartition::one(3)),
            Err(Error::GroundMismatch { left: 2, right: 3 })
        );

        assert_eq!(
            join(&p(3, &[&[1, 2], &[3]]), &p(3, &[&[1], &[2, 3]])).unwrap(),
            SetPartition::one(3)
        );
        assert_eq!(join(&q, &q).unwrap(), q);
        assert_eq!(
            join(&SetPartition::singletons(2), &SetPartition::one(2)).unwrap(),
            SetPartition::one(2)
        );
        assert!(join(&SetPartition::one(2), &SetPartition::one(4)).is_err());
    }

    #[test]
    fn kernels() {
        assert_eq!(kernel(&[1, 1, 2]), p(3, &[&[1, 2], &[3]]));
        assert_eq!(kernel(&[1, 2, 1]), p(3, &[&[1, 3], &[2]]));
        assert_eq!(kernel(&[4, 4, 4, 4]), SetPartition::one(4));
        assert!(MultiIndex::new(3, vec![1, 4]).is_err());
        let j = MultiIndex::new(3, vec![3, 1, 2]).unwrap();
        assert_eq!(MultiIndex::from_flat(3, 3, j.flat_index()), j);
    }

    #[test]
    fn inf_examples() {
        assert_eq!(
            inf_category(CategoryId::S, &p(3, &[&[1, 3], &[2]])).unwrap(),
            SetPartition::singletons(3)
        );
        assert_eq!(inf_category(CategoryId::S, &SetPartition::one(5)).unwrap(), SetPartition::one(5));
        let sigma = kernel(&[1, 1, 2, 2]);
        assert_eq!(inf_category(CategoryId::H, &sigma).unwrap(), SetPartition::pairs(2));
        assert_eq!(
            inf_category(CategoryId::O, &SetPartition::singletons(2)),
            Err(Error::EmptyDownSet { category: CategoryId::O, k: 2 })
        );
        assert_eq!(
            inf_category(CategoryId::B, &SetPartition::one(2)),
            Err(Error::UnsupportedCategory(CategoryId::B))
        );
    }

    #[test]
    fn inf_matches_brute_force() {
        for x in [CategoryId::S, CategoryId::O, CategoryId::H] {
            for k in 1..=7 {
                let members = enumerate_category(x, k);
                for sigma in enumerate_all(k) {
                    let below: Vec<_> = members.iter().filter(|m| m.leq_unchecked(&sigma)).collect();
                    let brute = below
                        .iter()
                        .find(|c| below.iter().all(|m| m.leq_unchecked(c)))
                        .map(|c| (*c).clone());
                    assert_eq!(inf_category(x, &sigma).ok(), brute, "{x} {sigma}");
                }
            }
        }
    }

    #[test]
    fn inf_s_of_kernel_merges_equal_runs() {
        let j = [2usize, 2, 1, 2, 2, 2, 3];
        let runs = inf_category(CategoryId::S, &kernel(&j)).unwrap();
        assert_eq!(runs, SetPartition::from_composition(&[2, 1, 3, 1]));
    }

    #[test]
    fn all_partitions_are_bell_numbers() {
        let bell = [1usize, 1, 2, 5, 15, 52, 203, 877];
        for (k, &b) in bell.iter().enumerate().skip(1) {
            assert_eq!(enumerate_all(k).len(), b);
        }
    }

    #[test]
    fn blockwise_flags() {
        for x in CategoryId::ALL {
            assert!(check_block_stable(x, 8), "{x}");
            assert!(check_interval_closed(x, 8), "{x}");
            assert!(check_enough_partitions(x, 8), "{x}");
        }
        for x in [CategoryId::S, CategoryId::O, CategoryId::H] {
            assert!(check_join_stable(x, 8));
        }
        assert!(!check_join_stable(CategoryId::B, 3));
    }

    #[test]
    fn kernel_classes_cover_the_cube() {
        for (k, n) in [(1, 3), (3, 2), (4, 3), (3, 5)] {
            let classes = kernel_classes(k, n);
            let total: u128 = classes.iter().map(|c| c.size).sum();
            assert_eq!(total, (n as u128).pow(k as u32));
            for c in &classes {
                assert_eq!(kernel(&c.representative), c.kernel);
                let count = all_indices(n, k).filter(|j| j.kernel() == c.kernel).count();
                assert_eq!(count as u128, c.size);
            }
        }
    }

    #[test]
    fn json_encoding() {
        let q = p(3, &[&[1, 2], &[3]]);
        assert_eq!(serde_json::to_string(&q).unwrap(), "[[1,2],[3]]");
        let back: SetPartition = serde_json::from_str("[[3],[1,2]]").unwrap();
        assert_eq!(back, q);
        assert!(serde_json::from_str::<SetPartition>("[[1],[1]]").is_err());
    }
}
