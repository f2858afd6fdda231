//! Finite posets of partitions under refinement: δ, ζ and the Möbius function.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::partitions::{enumerate_category, enumerate_interval, CategoryId, SetPartition};

/// A set of partitions of `[k]` ordered by refinement.
///
/// Möbius values are memoized one row `μ(p, ·)` at a time; the memo sits
/// behind a mutex so a poset can be shared across threads.
pub struct PartitionPoset {
    k: usize,
    elements: Vec<SetPartition>,
    index: HashMap<SetPartition, usize>,
    // above[a] lists every b with elements[a] ≤ elements[b]
    above: Vec<Vec<usize>>,
    mobius_rows: Mutex<HashMap<usize, Arc<Vec<BigInt>>>>,
}

impl PartitionPoset {
    pub fn new(k: usize, elements: Vec<SetPartition>) -> Result<Self> {
        let mut index = HashMap::with_capacity(elements.len());
        for (a, p) in elements.iter().enumerate() {
            if p.ground_size() != k {
                return Err(Error::GroundMismatch {
                    left: k,
                    right: p.ground_size(),
                });
            }
            if index.insert(p.clone(), a).is_some() {
                return Err(Error::InvalidArgument(format!("duplicate element {p}")));
            }
        }
        let above = elements
            .iter()
            .map(|p| {
                (0..elements.len())
                    .filter(|&b| p.leq_unchecked(&elements[b]))
                    .collect()
            })
            .collect();
        Ok(PartitionPoset {
            k,
            elements,
            index,
            above,
            mobius_rows: Mutex::new(HashMap::new()),
        })
    }

    /// `I(k)`.
    pub fn interval(k: usize) -> Self {
        Self::new(k, enumerate_interval(k)).expect("interval partitions are distinct")
    }

    /// `D(k)` for a category.
    pub fn category(x: CategoryId, k: usize) -> Self {
        Self::new(k, enumerate_category(x, k)).expect("category elements are distinct")
    }

    pub fn ground_size(&self) -> usize {
        self.k
    }

    pub fn elements(&self) -> &[SetPartition] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn position(&self, p: &SetPartition) -> Result<usize> {
        self.index.get(p).copied().ok_or(Error::NotAnElement)
    }

    pub fn contains(&self, p: &SetPartition) -> bool {
        self.index.contains_key(p)
    }

    pub fn delta(&self, p1: &SetPartition, p2: &SetPartition) -> Result<u8> {
        Ok(u8::from(self.position(p1)? == self.position(p2)?))
    }

    pub fn zeta(&self, p1: &SetPartition, p2: &SetPartition) -> Result<u8> {
        let (a, b) = (self.position(p1)?, self.position(p2)?);
        Ok(u8::from(self.above[a].contains(&b)))
    }

    /// `μ(p1, p2)`; always an integer.
    pub fn mobius_int(&self, p1: &SetPartition, p2: &SetPartition) -> Result<BigInt> {
        let (a, b) = (self.position(p1)?, self.position(p2)?);
        Ok(self.mobius_row(a)[b].clone())
    }

    pub fn mobius(&self, p1: &SetPartition, p2: &SetPartition) -> Result<BigRational> {
        self.mobius_int(p1, p2).map(BigRational::from_integer)
    }

    /// `μ(elements[a], ·)` over the whole poset, zero off the up-set of `a`.
    pub fn mobius_row(&self, a: usize) -> Arc<Vec<BigInt>> {
        if let Some(row) = self.mobius_rows.lock().unwrap().get(&a) {
            return row.clone();
        }
        // μ(a,a) = 1 and μ(a,c) = −Σ_{a ≤ r < c} μ(a,r); visiting the up-set
        // from finer to coarser guarantees every r < c is already known
        let mut up = self.above[a].clone();
        up.sort_by_key(|&c| std::cmp::Reverse(self.elements[c].num_blocks()));
        let mut row = vec![BigInt::zero(); self.len()];
        for &c in &up {
            if c == a {
                row[c] = BigInt::one();
                continue;
            }
            let mut acc = BigInt::zero();
            for &r in &up {
                if r != c && self.above[r].contains(&c) {
                    acc += &row[r];
                }
            }
            row[c] = -acc;
        }
        let row = Arc::new(row);
        self.mobius_rows.lock().unwrap().insert(a, row.clone());
        row
    }
}

/// Shared `I(k)` posets, built once per `k`.
pub fn interval_poset(k: usize) -> Arc<PartitionPoset> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<PartitionPoset>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&k) {
        return p.clone();
    }
    let poset = Arc::new(PartitionPoset::interval(k));
    cache.lock().unwrap().entry(k).or_insert(poset).clone()
}

/// `μ_{I(k)}(p1, p2)` through the shared interval poset.
pub fn interval_mobius(p1: &SetPartition, p2: &SetPartition) -> Result<BigInt> {
    if p1.ground_size() != p2.ground_size() {
        return Err(Error::GroundMismatch {
            left: p1.ground_size(),
            right: p2.ground_size(),
        });
    }
    interval_poset(p1.ground_size()).mobius_int(p1, p2)
}
