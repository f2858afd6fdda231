//! `T_π` vectors, Gram and Weingarten matrices, and the projection
//! `H^{D(k)}` onto `Span{T_π : π ∈ D(k)}`.
//!
//! Two independent routes to `H` live here. [`Projector`] uses the double
//! Weingarten sum; [`ProjectionOracle`] builds the vectors `T_π` explicitly
//! and solves the normal equations. They must agree exactly.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{invert_matrix, nullspace_basis, rank, solve_linear, ExactMatrix};
use crate::partitions::{
    enumerate_category, kernel, kernel_classes, CategoryId, KernelClass, MultiIndex, SetPartition,
};
use crate::posets::interval_mobius;
use crate::scalar::{pow_int, ExactScalar};

/// Default cap on `n^k` for materializing a full projection matrix.
pub const DEFAULT_MATERIALIZE_CAP: usize = 4096;

/// `T_π = Σ_{π ≤ ker j} e_j` in `(ℂ^n)^{⊗k}`, as a 0/1 vector in row-major order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionVector {
    pub k: usize,
    pub n: usize,
    pub coefficients: Vec<bool>,
}

impl PartitionVector {
    pub fn new(pi: &SetPartition, n: usize) -> Self {
        let k = pi.ground_size();
        let coefficients = crate::partitions::all_indices(n, k)
            .map(|j| pi.leq_unchecked(&j.kernel()))
            .collect();
        PartitionVector { k, n, coefficients }
    }

    pub fn dot(&self, other: &Self) -> usize {
        self.coefficients
            .iter()
            .zip(&other.coefficients)
            .filter(|(a, b)| **a && **b)
            .count()
    }

    pub fn to_rationals(&self) -> Vec<BigRational> {
        self.coefficients
            .iter()
            .map(|&c| if c { BigRational::one() } else { BigRational::zero() })
            .collect()
    }
}

/// A square matrix indexed by `D(k)` in canonical order.
#[derive(Clone, Debug, Serialize)]
pub struct LabelledMatrix {
    pub category: CategoryId,
    pub k: usize,
    pub n: usize,
    pub labels: Vec<SetPartition>,
    pub matrix: ExactMatrix,
}

impl LabelledMatrix {
    pub fn entry(&self, p1: &SetPartition, p2: &SetPartition) -> Result<&ExactScalar> {
        let find = |p: &SetPartition| self.labels.iter().position(|l| l == p).ok_or(Error::NotAnElement);
        Ok(self.matrix.get(find(p1)?, find(p2)?))
    }
}

pub type GramMatrix = LabelledMatrix;
pub type WeingartenMatrix = LabelledMatrix;

fn nonempty_category(x: CategoryId, k: usize) -> Result<Vec<SetPartition>> {
    let elements = enumerate_category(x, k);
    if elements.is_empty() {
        return Err(Error::EmptyCategory { category: x, k });
    }
    Ok(elements)
}

/// `G(π, σ) = n^{|π ∨ σ|}`, join taken among all partitions of `[k]`.
pub fn gram(x: CategoryId, k: usize, n: usize) -> Result<GramMatrix> {
    let labels = nonempty_category(x, k)?;
    let matrix = ExactMatrix::from_fn(labels.len(), labels.len(), |a, b| {
        ExactScalar::from_rational(pow_int(n, labels[a].join_unchecked(&labels[b]).num_blocks()))
    });
    Ok(LabelledMatrix {
        category: x,
        k,
        n,
        labels,
        matrix,
    })
}

/// `W = G^{-1}`.
pub fn weingarten(x: CategoryId, k: usize, n: usize) -> Result<WeingartenMatrix> {
    let mut g = gram(x, k, n)?;
    g.matrix = invert_matrix(&g.matrix)?;
    Ok(g)
}

/// Smallest `n ≤ max_n` at which the Gram matrix of `D(k)` is invertible.
pub fn invertibility_threshold(x: CategoryId, k: usize, max_n: usize) -> Option<usize> {
    (1..=max_n).find(|&n| weingarten(x, k, n).is_ok())
}

type Mask = u128;

/// Entries of `H^{D(k)}` through `H_{ij} = Σ_{π ≤ ker i} Σ_{σ ≤ ker j} W(π, σ)`.
///
/// The double sum only depends on which elements of `D(k)` lie below
/// `ker i` and `ker j`, so values are memoized on that pair of bitmasks.
pub struct Projector {
    x: CategoryId,
    k: usize,
    n: usize,
    elements: Vec<SetPartition>,
    w: Vec<Vec<BigRational>>,
    memo: Mutex<HashMap<(Mask, Mask), BigRational>>,
}

impl Projector {
    pub fn new(x: CategoryId, k: usize, n: usize) -> Result<Self> {
        let elements = enumerate_category(x, k);
        if elements.len() > Mask::BITS as usize {
            return Err(Error::InvalidArgument(format!("|{x}({k})| too large")));
        }
        let w = if elements.is_empty() {
            Vec::new()
        } else {
            weingarten(x, k, n)?.matrix.to_rationals()?
        };
        Ok(Projector {
            x,
            k,
            n,
            elements,
            w,
            memo: Mutex::new(HashMap::new()),
        })
    }

    pub fn category(&self) -> CategoryId {
        self.x
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn elements(&self) -> &[SetPartition] {
        &self.elements
    }

    pub fn weingarten_rows(&self) -> &[Vec<BigRational>] {
        &self.w
    }

    fn mask_of_kernel(&self, ker: &SetPartition) -> Mask {
        self.elements
            .iter()
            .enumerate()
            .filter(|(_, p)| p.leq_unchecked(ker))
            .fold(0, |m, (a, _)| m | 1 << a)
    }

    fn check(&self, entries: &[usize]) -> Result<()> {
        if entries.len() != self.k {
            return Err(Error::LengthMismatch {
                left: self.k,
                right: entries.len(),
            });
        }
        if let Some(&bad) = entries.iter().find(|&&e| e == 0 || e > self.n) {
            return Err(Error::IndexOutOfRange { entry: bad, n: self.n });
        }
        Ok(())
    }

    fn masked_sum(&self, mi: Mask, mj: Mask) -> BigRational {
        if let Some(v) = self.memo.lock().unwrap().get(&(mi, mj)) {
            return v.clone();
        }
        let mut acc = BigRational::zero();
        for a in (0..self.elements.len()).filter(|a| mi >> a & 1 == 1) {
            for b in (0..self.elements.len()).filter(|b| mj >> b & 1 == 1) {
                acc += &self.w[a][b];
            }
        }
        self.memo.lock().unwrap().insert((mi, mj), acc.clone());
        acc
    }

    /// `H_{ij}` for raw 1-based entries.
    pub fn entry(&self, i: &[usize], j: &[usize]) -> Result<BigRational> {
        self.check(i)?;
        self.check(j)?;
        Ok(self.entry_by_kernel(&kernel(i), &kernel(j)))
    }

    /// `H_{ij}` depends on `i`, `j` only through their kernels.
    pub fn entry_by_kernel(&self, ker_i: &SetPartition, ker_j: &SetPartition) -> BigRational {
        self.masked_sum(self.mask_of_kernel(ker_i), self.mask_of_kernel(ker_j))
    }

    /// `H e_j` as a dense vector over `[n]^k`.
    pub fn column(&self, j: &[usize]) -> Result<Vec<BigRational>> {
        self.check(j)?;
        let mj = self.mask_of_kernel(&kernel(j));
        Ok(crate::partitions::all_indices(self.n, self.k)
            .map(|i| self.masked_sum(self.mask_of_kernel(&i.kernel()), mj))
            .collect())
    }

    /// `Σ_{s : ker s = λ} H_{rs}` for `r` in class `κ`: the matrix of `H`
    /// restricted to kernel-class indicator vectors.
    pub fn class_matrix(&self, classes: &[KernelClass]) -> Vec<Vec<BigRational>> {
        classes
            .iter()
            .map(|kappa| {
                classes
                    .iter()
                    .map(|lambda| {
                        self.entry_by_kernel(&kappa.kernel, &lambda.kernel)
                            * BigRational::from_integer(BigInt::from(lambda.size))
                    })
                    .collect()
            })
            .collect()
    }
}

/// Shared projectors, computed once per `(x, k, n)`.
pub fn projector(x: CategoryId, k: usize, n: usize) -> Result<Arc<Projector>> {
    type Cache = Mutex<HashMap<(CategoryId, usize, usize), Result<Arc<Projector>>>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&(x, k, n)) {
        return p.clone();
    }
    let built = Projector::new(x, k, n).map(Arc::new);
    cache.lock().unwrap().entry((x, k, n)).or_insert(built).clone()
}

fn check_pair(i: &MultiIndex, j: &MultiIndex, n: usize) -> Result<()> {
    if i.len() != j.len() {
        return Err(Error::LengthMismatch {
            left: i.len(),
            right: j.len(),
        });
    }
    for e in i.entries().iter().chain(j.entries()) {
        if *e > n {
            return Err(Error::IndexOutOfRange { entry: *e, n });
        }
    }
    Ok(())
}

/// `H^{D(k)}_{ij}` via the Weingarten double sum.
pub fn projection_entry(x: CategoryId, k: usize, n: usize, i: &MultiIndex, j: &MultiIndex) -> Result<BigRational> {
    check_pair(i, j, n)?;
    projector(x, k, n)?.entry(i.entries(), j.entries())
}

/// `H^{D(k)}` by explicit vectors: the Gram matrix is assembled from dot
/// products of the `T_π` and `H e_j = Σ α_π T_π` with `G α = (⟨T_π, e_j⟩)_π`.
pub struct ProjectionOracle {
    k: usize,
    n: usize,
    vectors: Vec<PartitionVector>,
    gram: ExactMatrix,
    solves: Mutex<HashMap<Vec<bool>, Vec<BigRational>>>,
}

impl ProjectionOracle {
    pub fn new(x: CategoryId, k: usize, n: usize) -> Result<Self> {
        let vectors: Vec<PartitionVector> = enumerate_category(x, k)
            .iter()
            .map(|p| PartitionVector::new(p, n))
            .collect();
        let gram = ExactMatrix::from_fn(vectors.len(), vectors.len(), |a, b| {
            ExactScalar::from_int(vectors[a].dot(&vectors[b]) as i64)
        });
        if !vectors.is_empty() && rank(&gram)? < vectors.len() {
            return Err(Error::Singular);
        }
        Ok(ProjectionOracle {
            k,
            n,
            vectors,
            gram,
            solves: Mutex::new(HashMap::new()),
        })
    }

    pub fn gram(&self) -> &ExactMatrix {
        &self.gram
    }

    fn coefficients(&self, flat_j: usize) -> Result<Vec<BigRational>> {
        let rhs_key: Vec<bool> = self.vectors.iter().map(|t| t.coefficients[flat_j]).collect();
        if let Some(alpha) = self.solves.lock().unwrap().get(&rhs_key) {
            return Ok(alpha.clone());
        }
        let rhs: Vec<BigRational> = rhs_key
            .iter()
            .map(|&c| if c { BigRational::one() } else { BigRational::zero() })
            .collect();
        let alpha = solve_linear(&self.gram, &rhs)?;
        self.solves.lock().unwrap().insert(rhs_key, alpha.clone());
        Ok(alpha)
    }

    /// `H e_j` as a dense vector.
    pub fn column(&self, j: &MultiIndex) -> Result<Vec<BigRational>> {
        let total = self.n.pow(self.k as u32);
        if self.vectors.is_empty() {
            return Ok(vec![BigRational::zero(); total]);
        }
        let alpha = self.coefficients(j.flat_index())?;
        Ok((0..total)
            .map(|i| {
                self.vectors
                    .iter()
                    .zip(&alpha)
                    .filter(|(t, _)| t.coefficients[i])
                    .map(|(_, a)| a.clone())
                    .sum()
            })
            .collect())
    }

    pub fn entry(&self, i: &MultiIndex, j: &MultiIndex) -> Result<BigRational> {
        if self.vectors.is_empty() {
            return Ok(BigRational::zero());
        }
        let alpha = self.coefficients(j.flat_index())?;
        let fi = i.flat_index();
        Ok(self
            .vectors
            .iter()
            .zip(&alpha)
            .filter(|(t, _)| t.coefficients[fi])
            .map(|(_, a)| a.clone())
            .sum())
    }
}

/// `⟨e_i, H e_j⟩` through the explicit-vector construction.
pub fn projection_oracle(x: CategoryId, k: usize, n: usize, i: &MultiIndex, j: &MultiIndex) -> Result<BigRational> {
    check_pair(i, j, n)?;
    if i.len() != k {
        return Err(Error::LengthMismatch { left: k, right: i.len() });
    }
    let i = MultiIndex::new(n, i.entries().to_vec())?;
    let j = MultiIndex::new(n, j.entries().to_vec())?;
    ProjectionOracle::new(x, k, n)?.entry(&i, &j)
}

/// A fully materialized `H^{D(k)}`.
#[derive(Clone, Debug, Serialize)]
pub struct ProjectionMatrix {
    pub category: CategoryId,
    pub k: usize,
    pub n: usize,
    pub matrix: ExactMatrix,
}

pub fn projection_matrix(x: CategoryId, k: usize, n: usize, cap: usize) -> Result<ProjectionMatrix> {
    let size = n
        .checked_pow(k as u32)
        .filter(|&s| s <= cap)
        .ok_or_else(|| Error::InvalidArgument(format!("n^k exceeds the materialization cap {cap}")))?;
    let proj = projector(x, k, n)?;
    let kernels: Vec<SetPartition> = crate::partitions::all_indices(n, k).map(|i| i.kernel()).collect();
    let matrix = ExactMatrix::from_fn(size, size, |a, b| {
        ExactScalar::from_rational(proj.entry_by_kernel(&kernels[a], &kernels[b]))
    });
    Ok(ProjectionMatrix {
        category: x,
        k,
        n,
        matrix,
    })
}

fn lift(classes: &[KernelClass], coords: &[BigRational], n: usize, k: usize) -> Vec<BigRational> {
    let position: HashMap<&SetPartition, usize> =
        classes.iter().enumerate().map(|(c, cl)| (&cl.kernel, c)).collect();
    crate::partitions::all_indices(n, k)
        .map(|i| coords[position[&i.kernel()]].clone())
        .collect()
}

fn class_coordinates_of_t(pi: &SetPartition, classes: &[KernelClass]) -> Vec<BigRational> {
    classes
        .iter()
        .map(|c| {
            if pi.leq_unchecked(&c.kernel) {
                BigRational::one()
            } else {
                BigRational::zero()
            }
        })
        .collect()
}

/// Basis of the eigenspace of `H` at 1, in kernel-class coordinates.
///
/// The range of `H` is spanned by the `T_π`, each of which is a sum of
/// kernel-class indicators, so the eigenspace lives in their span and the
/// eigenproblem can be solved on the class matrix.
fn fixed_space_classes(x: CategoryId, k: usize, n: usize) -> Result<(Vec<KernelClass>, Vec<Vec<BigRational>>)> {
    let proj = projector(x, k, n)?;
    let classes = kernel_classes(k, n);
    let mut m = proj.class_matrix(&classes);
    for (c, row) in m.iter_mut().enumerate() {
        row[c] -= BigRational::one();
    }
    let basis = nullspace_basis(&ExactMatrix::from_rationals(m)?)?;
    Ok((classes, basis))
}

/// Basis of `{v : H^{D(k)} v = v}` as vectors over `[n]^k`.
pub fn fixed_space(x: CategoryId, k: usize, n: usize) -> Result<Vec<Vec<BigRational>>> {
    let (classes, basis) = fixed_space_classes(x, k, n)?;
    Ok(basis.iter().map(|v| lift(&classes, v, n, k)).collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixedSpaceReport {
    pub dimension: usize,
    pub category_size: usize,
    /// every `T_π` lies in the eigenspace
    pub contains_all_t: bool,
    /// the eigenspace lies in `Span{T_π}`
    pub inside_span: bool,
}

impl FixedSpaceReport {
    pub fn passed(&self) -> bool {
        self.dimension == self.category_size && self.contains_all_t && self.inside_span
    }
}

fn span_rank(vectors: &[Vec<BigRational>]) -> Result<usize> {
    if vectors.is_empty() {
        return Ok(0);
    }
    rank(&ExactMatrix::from_rationals(vectors.to_vec())?)
}

pub fn fixed_space_report(x: CategoryId, k: usize, n: usize) -> Result<FixedSpaceReport> {
    let (classes, basis) = fixed_space_classes(x, k, n)?;
    let ts: Vec<Vec<BigRational>> = enumerate_category(x, k)
        .iter()
        .map(|p| class_coordinates_of_t(p, &classes))
        .collect();
    let r_basis = span_rank(&basis)?;
    let r_t = span_rank(&ts)?;
    let r_both = span_rank(&[basis.clone(), ts.clone()].concat())?;
    Ok(FixedSpaceReport {
        dimension: basis.len(),
        category_size: ts.len(),
        contains_all_t: r_both == r_basis,
        inside_span: r_both == r_t,
    })
}

/// `|n^{|p1|} W(p1, p2) − μ_{I(k)}(p1, p2)|`.
pub fn weingarten_estimate_residual(
    x: CategoryId,
    k: usize,
    n: usize,
    p1: &SetPartition,
    p2: &SetPartition,
) -> Result<BigRational> {
    let w = weingarten(x, k, n)?;
    let value = w.entry(p1, p2)?.to_rational().ok_or(Error::NotRational)?;
    let mu = BigRational::from_integer(interval_mobius(p1, p2)?);
    Ok((pow_int(n, p1.num_blocks()) * value - mu).abs())
}

/// `H^{D(k+l)}(T_{1_k} ⊗ e_j) = T_{1_k} ⊗ H^{D(l)} e_j`, checked entrywise
/// on `[n]^{k+l}` with the left side applied to the explicit sparse vector.
pub fn tensor_column_check(x: CategoryId, k: usize, l: usize, n: usize, j: &MultiIndex) -> Result<bool> {
    if !x.allows_block(k) {
        return Err(Error::InvalidArgument(format!("{k} is not a block size of {x}")));
    }
    if j.len() != l {
        return Err(Error::LengthMismatch { left: l, right: j.len() });
    }
    if enumerate_category(x, l).is_empty() {
        return Err(Error::EmptyCategory { category: x, k: l });
    }
    let big = projector(x, k + l, n)?;
    let small = projector(x, l, n)?;
    let support: Vec<Vec<usize>> = (1..=n)
        .map(|c| {
            let mut s = vec![c; k];
            s.extend_from_slice(j.entries());
            s
        })
        .collect();
    for i in crate::partitions::all_indices(n, k + l) {
        let e = i.entries();
        let lhs: BigRational = support
            .iter()
            .map(|s| big.entry(e, s))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .sum();
        let rhs = if e[..k].iter().all(|&v| v == e[0]) {
            small.entry(&e[k..], j.entries())?
        } else {
            BigRational::zero()
        };
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `Σ_{s : π ≤ ker s} H_{rs} = ζ(π, ker r)` for all `π ∈ D(k)` and all `r`,
/// summing over kernel classes of `s` and one representative `r` per class.
pub fn row_sum_identity_holds(x: CategoryId, k: usize, n: usize) -> Result<bool> {
    let proj = projector(x, k, n)?;
    let classes = kernel_classes(k, n);
    for pi in enumerate_category(x, k) {
        for r in &classes {
            let sum: BigRational = classes
                .iter()
                .filter(|s| pi.leq_unchecked(&s.kernel))
                .map(|s| proj.entry_by_kernel(&r.kernel, &s.kernel) * BigRational::from_integer(s.size.into()))
                .sum();
            let expected = if pi.leq_unchecked(&r.kernel) {
                BigRational::one()
            } else {
                BigRational::zero()
            };
            if sum != expected {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
