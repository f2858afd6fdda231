//! Finite models of the generators.
//!
//! `π_s` acts on `L²(S_n)` by rank-one projections `Q(P̂_ij)` and `Q(1̂)`;
//! only the inner products of the vectors `P̂_ij`, `1̂` are ever used.
//! `π_o` acts on `ℂ^{n+1} ⊗ ℂ^{n+1}` by `F_ij / √n` and `P^o = R ⊗ R`, and
//! `π_h` is the tensor product of the two kinds of factor.
//!
//! Since every `π(p)` is the rank-one projection onto a unit vector `ξ`,
//! an identity `X π(p) = c π(p)` is equivalent to `X ξ = c ξ`, and the state
//! of a word `w` is `⟨ξ, π(w) ξ⟩`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::haar::{random_words, GeneratorWord};
use crate::matrix::ExactMatrix;
use crate::partitions::{all_indices, enumerate_category, inf_category, kernel, CategoryId, MultiIndex};
use crate::scalar::ExactScalar;

/// `1̂` or `P̂_ij : σ ↦ δ_{i, σ(j)}` in `L²(S_n)` (normalized counting measure).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum PermLabel {
    One,
    P(usize, usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PermVector {
    pub n: usize,
    pub label: PermLabel,
}

impl PermVector {
    pub fn one(n: usize) -> Self {
        PermVector { n, label: PermLabel::One }
    }

    pub fn p(n: usize, i: usize, j: usize) -> Self {
        PermVector {
            n,
            label: PermLabel::P(i, j),
        }
    }

    pub fn inner(&self, other: &Self) -> BigRational {
        perm_inner(self.n, self.label, other.label)
    }
}

/// `#{σ admissible for both} / n!`.
pub fn perm_inner(n: usize, a: PermLabel, b: PermLabel) -> BigRational {
    let n_big = BigInt::from(n);
    match (a, b) {
        (PermLabel::One, PermLabel::One) => BigRational::one(),
        (PermLabel::One, PermLabel::P(..)) | (PermLabel::P(..), PermLabel::One) => {
            BigRational::new(BigInt::one(), n_big)
        }
        (PermLabel::P(i1, j1), PermLabel::P(i2, j2)) => match (i1 == i2, j1 == j2) {
            (true, true) => BigRational::new(BigInt::one(), n_big),
            (false, false) => BigRational::new(BigInt::one(), &n_big * (&n_big - 1)),
            _ => BigRational::zero(),
        },
    }
}

/// `Σ_t c_t v_t` with `v_t` permutation vectors, as a map label → coefficient.
pub type PermCombination = BTreeMap<PermLabel, BigRational>;

/// `‖Σ_t c_t v_t‖²` from the combinatorial inner products.
pub fn perm_norm_squared(n: usize, combo: &PermCombination) -> BigRational {
    let mut acc = BigRational::zero();
    for (a, ca) in combo {
        for (b, cb) in combo {
            acc += perm_inner(n, *a, *b) * ca * cb;
        }
    }
    acc
}

/// `Σ_i P̂_ij = 1̂` and `Σ_j P̂_ij = 1̂` for every fixed index.
pub fn sums_to_one(n: usize) -> bool {
    (1..=n).all(|fixed| {
        [true, false].iter().all(|&over_rows| {
            let mut combo = PermCombination::new();
            for free in 1..=n {
                let label = if over_rows { PermLabel::P(free, fixed) } else { PermLabel::P(fixed, free) };
                combo.insert(label, BigRational::one());
            }
            combo.insert(PermLabel::One, -BigRational::one());
            perm_norm_squared(n, &combo).is_zero()
        })
    })
}

/// `Q(v) Q(w) = ⟨v, w⟩ / (⟨v,v⟩⟨w,w⟩) |v⟩⟨w|`; returns that coefficient.
fn rank_one_product(n: usize, v: PermLabel, w: PermLabel) -> BigRational {
    perm_inner(n, v, w) / (perm_inner(n, v, v) * perm_inner(n, w, w))
}

/// `a |v⟩⟨w| = b |v⟩⟨v|` as operators, decided by `‖a w − b v‖ = 0`.
fn rank_one_equal(n: usize, v: PermLabel, a: &BigRational, w: PermLabel, b: &BigRational) -> bool {
    let mut combo = PermCombination::new();
    *combo.entry(w).or_insert_with(BigRational::zero) += a;
    *combo.entry(v).or_insert_with(BigRational::zero) -= b;
    perm_norm_squared(n, &combo).is_zero()
}

/// The three relations satisfied by `Q(P̂_ij)`, `Q(1̂)`:
/// `Q(P̂_{i j1}) Q(P̂_{i j2}) = δ_{j1 j2} Q(P̂_{i j1})`, its transpose, and
/// `Q(P̂_ij) Q(1̂) = |P̂_ij⟩⟨1̂|`.
pub fn verify_rank_one_relations(n: usize) -> bool {
    let q_coeff = |v: PermLabel| perm_inner(n, v, v).recip();
    let delta = |a: usize, b: usize| if a == b { BigRational::one() } else { BigRational::zero() };
    for i in 1..=n {
        for j1 in 1..=n {
            for j2 in 1..=n {
                let (v, w) = (PermLabel::P(i, j1), PermLabel::P(i, j2));
                if !rank_one_equal(n, v, &rank_one_product(n, v, w), w, &(delta(j1, j2) * q_coeff(v))) {
                    return false;
                }
                let (v, w) = (PermLabel::P(j1, i), PermLabel::P(j2, i));
                if !rank_one_equal(n, v, &rank_one_product(n, v, w), w, &(delta(j1, j2) * q_coeff(v))) {
                    return false;
                }
            }
            if rank_one_product(n, PermLabel::P(i, j1), PermLabel::One) != BigRational::one() {
                return false;
            }
        }
    }
    true
}

type SparseVec = BTreeMap<usize, ExactScalar>;

/// A vector of `L²(S_n) ⊗ ℂ^d` written as `Σ_L v̂_L ⊗ x_L`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FusedVector {
    terms: BTreeMap<PermLabel, SparseVec>,
}

impl FusedVector {
    fn single(label: PermLabel, idx: usize, c: ExactScalar) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(label, SparseVec::from([(idx, c)]));
        }
        FusedVector { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.values().all(|v| v.values().all(ExactScalar::is_zero))
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (label, vec) in &other.terms {
            let slot = self.terms.entry(*label).or_default();
            for (idx, c) in vec {
                let e = slot.entry(*idx).or_insert_with(ExactScalar::zero);
                *e = &*e + c;
            }
        }
    }

    pub fn scaled(&self, c: &ExactScalar) -> Self {
        FusedVector {
            terms: self
                .terms
                .iter()
                .map(|(l, v)| (*l, v.iter().map(|(i, x)| (*i, x * c)).collect()))
                .collect(),
        }
    }
}

/// Which of the three representations.
#[derive(Clone, Debug)]
pub struct RepModel {
    x: CategoryId,
    n: usize,
    perm_factor: bool,
    // dimension of the matrix factor: 1 for π_s, (n+1)² otherwise
    dim: usize,
    u_scale: ExactScalar,
}

impl RepModel {
    pub fn new(x: CategoryId, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("n must be positive".into()));
        }
        let m = (n + 1) * (n + 1);
        match x {
            CategoryId::S => Ok(RepModel {
                x,
                n,
                perm_factor: true,
                dim: 1,
                u_scale: ExactScalar::one(),
            }),
            CategoryId::O => Ok(RepModel {
                x,
                n,
                perm_factor: false,
                dim: m,
                // 1/√n = √n / n
                u_scale: ExactScalar::new(
                    BigRational::zero(),
                    BigRational::new(BigInt::one(), BigInt::from(n)),
                    n as u64,
                ),
            }),
            CategoryId::H => Ok(RepModel {
                x,
                n,
                perm_factor: true,
                dim: m,
                u_scale: ExactScalar::one(),
            }),
            CategoryId::B => Err(Error::UnsupportedCategory(x)),
        }
    }

    pub fn category(&self) -> CategoryId {
        self.x
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Basis index of `e_{n+1} ⊗ e_{n+1}`.
    fn xi_index(&self) -> usize {
        self.dim - 1
    }

    /// `ξ`, the unit vector onto which `π(p)` projects.
    pub fn xi(&self) -> FusedVector {
        FusedVector::single(PermLabel::One, self.xi_index(), ExactScalar::one())
    }

    /// `F_i e_a` on `ℂ^{n+1}` with 0-based basis indices; `n` stands for `n+1`.
    fn f_basis(&self, i: usize, a: usize) -> Option<usize> {
        if a == i - 1 {
            Some(self.n)
        } else if a == self.n {
            Some(i - 1)
        } else {
            None
        }
    }

    fn matrix_u(&self, i: usize, j: usize, idx: usize) -> Option<usize> {
        if self.dim == 1 {
            return Some(0);
        }
        let w = self.n + 1;
        let (a, b) = (idx / w, idx % w);
        Some(self.f_basis(i, a)? * w + self.f_basis(j, b)?)
    }

    fn perm_project(&self, onto: PermLabel, vec: &FusedVector) -> FusedVector {
        // Q(v) Σ_L L ⊗ x_L = v ⊗ Σ_L (⟨v,L⟩/⟨v,v⟩) x_L
        let mut out = SparseVec::new();
        let norm = perm_inner(self.n, onto, onto);
        for (label, x) in &vec.terms {
            let c = perm_inner(self.n, onto, *label) / &norm;
            if c.is_zero() {
                continue;
            }
            for (idx, v) in x {
                let e = out.entry(*idx).or_insert_with(ExactScalar::zero);
                *e = &*e + &v.scale(&c);
            }
        }
        FusedVector {
            terms: BTreeMap::from([(onto, out)]),
        }
    }

    /// `π(u_ij) v`.
    pub fn apply_u(&self, i: usize, j: usize, v: &FusedVector) -> FusedVector {
        let v = if self.perm_factor {
            self.perm_project(PermLabel::P(i, j), v)
        } else {
            v.clone()
        };
        let mut terms = BTreeMap::new();
        for (label, x) in &v.terms {
            let mut out = SparseVec::new();
            for (idx, c) in x {
                if let Some(t) = self.matrix_u(i, j, *idx) {
                    out.insert(t, c * &self.u_scale);
                }
            }
            terms.insert(*label, out);
        }
        FusedVector { terms }
    }

    /// `π(p) v`.
    pub fn apply_p(&self, v: &FusedVector) -> FusedVector {
        let v = if self.perm_factor {
            self.perm_project(PermLabel::One, v)
        } else {
            v.clone()
        };
        let xi = self.xi_index();
        FusedVector {
            terms: v
                .terms
                .into_iter()
                .map(|(l, x)| (l, x.into_iter().filter(|(idx, _)| *idx == xi).collect()))
                .collect(),
        }
    }

    /// `π(u_{i1 j1} ⋯ u_{ik jk}) v`, rightmost factor first.
    pub fn apply_product(&self, i: &[usize], j: &[usize], v: &FusedVector) -> FusedVector {
        i.iter().zip(j).rev().fold(v.clone(), |acc, (a, b)| self.apply_u(*a, *b, &acc))
    }

    /// `π(w) ξ`.
    pub fn apply_word(&self, w: &GeneratorWord) -> FusedVector {
        let mut v = self.apply_p(&self.xi());
        for seg in w.segments().iter().rev() {
            let (i, j): (Vec<usize>, Vec<usize>) = seg.iter().copied().unzip();
            v = self.apply_p(&self.apply_product(&i, &j, &v));
        }
        v
    }

    pub fn inner(&self, a: &FusedVector, b: &FusedVector) -> ExactScalar {
        let mut acc = ExactScalar::zero();
        for (la, xa) in &a.terms {
            for (lb, xb) in &b.terms {
                let overlap = perm_inner(self.n, *la, *lb);
                if overlap.is_zero() {
                    continue;
                }
                for (idx, ca) in xa {
                    if let Some(cb) = xb.get(idx) {
                        acc = &acc + &(ca * cb).scale(&overlap);
                    }
                }
            }
        }
        acc
    }

    /// `⟨ξ, π(w) ξ⟩`.
    pub fn state(&self, w: &GeneratorWord) -> ExactScalar {
        self.inner(&self.xi(), &self.apply_word(w))
    }

    fn equals_multiple_of_xi(&self, v: &FusedVector, c: bool) -> bool {
        let mut diff = v.clone();
        if c {
            diff.add_assign(&self.xi().scaled(&-ExactScalar::one()));
        }
        self.inner(&diff, &diff).is_zero()
    }
}

/// `ω(π_s(w))` evaluated by chains of rank-one projections.
pub fn chain_state_value(w: &GeneratorWord) -> BigRational {
    let model = RepModel::new(CategoryId::S, w.n()).expect("π_s exists for n ≥ 1");
    model.state(w).to_rational().expect("π_s only involves rationals")
}

/// `ω_x(π_x(p u_{ij} p))` for `x ∈ {o, h}`.
pub fn omega_value(x: CategoryId, i: &MultiIndex, j: &MultiIndex, n: usize) -> Result<BigRational> {
    if !matches!(x, CategoryId::O | CategoryId::H) {
        return Err(Error::UnsupportedCategory(x));
    }
    let w = GeneratorWord::segment(i, j)?;
    let model = RepModel::new(x, n)?;
    model.state(&w).to_rational().ok_or(Error::NotRational)
}

/// `ω_x(π_x(w))` for any of the three models.
pub fn rep_state(x: CategoryId, w: &GeneratorWord) -> Result<BigRational> {
    RepModel::new(x, w.n())?.state(w).to_rational().ok_or(Error::NotRational)
}

/// Named pass/fail checks.
#[derive(Clone, Debug, Default, Serialize)]
pub struct RelationReport {
    pub checks: Vec<(String, bool)>,
}

impl RelationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|(_, ok)| *ok)
    }

    fn push(&mut self, name: impl Into<String>, ok: bool) {
        self.checks.push((name.into(), ok));
    }
}

fn sum_products(model: &RepModel, pairs: impl Iterator<Item = (Vec<usize>, Vec<usize>)>) -> FusedVector {
    let xi = model.xi();
    let mut acc = FusedVector::default();
    for (i, j) in pairs {
        acc.add_assign(&model.apply_product(&i, &j, &xi));
    }
    acc
}

/// The defining relations for `k ∈ L_{I_x}` and their `π`-indexed
/// generalization for every `π ∈ I_x(k)`, in the model of `x`.
pub fn verify_semigroup_relations(x: CategoryId, n: usize, k: usize) -> Result<RelationReport> {
    if !x.allows_block(k) {
        return Err(Error::InvalidArgument(format!("{k} is not a block size of {x}")));
    }
    let model = RepModel::new(x, n)?;
    let mut report = RelationReport::default();
    let mut row_ok = true;
    let mut col_ok = true;
    for fixed in all_indices(n, k) {
        let f = fixed.entries().to_vec();
        let constant = f.iter().all(|&v| v == f[0]);
        // Σ_i u_{i j1} ⋯ u_{i jk} p = δ(j constant) p
        let rows = sum_products(&model, (1..=n).map(|i| (vec![i; k], f.clone())));
        row_ok &= model.equals_multiple_of_xi(&rows, constant);
        let cols = sum_products(&model, (1..=n).map(|j| (f.clone(), vec![j; k])));
        col_ok &= model.equals_multiple_of_xi(&cols, constant);
    }
    report.push(format!("sum over rows, k={k}"), row_ok);
    report.push(format!("sum over columns, k={k}"), col_ok);
    for kk in 1..=k {
        for pi in enumerate_category(x, kk) {
            let mut ok = true;
            let free: Vec<Vec<usize>> = all_indices(n, kk)
                .filter(|i| pi.leq_unchecked(&i.kernel()))
                .map(|i| i.entries().to_vec())
                .collect();
            for fixed in all_indices(n, kk) {
                let f = fixed.entries().to_vec();
                let below = pi.leq_unchecked(&kernel(&f));
                let rows = sum_products(&model, free.iter().map(|i| (i.clone(), f.clone())));
                let cols = sum_products(&model, free.iter().map(|j| (f.clone(), j.clone())));
                ok &= model.equals_multiple_of_xi(&rows, below) && model.equals_multiple_of_xi(&cols, below);
            }
            report.push(format!("partition sums for {pi}"), ok);
        }
    }
    Ok(report)
}

/// `Σ_{r : inf ker r = π} π(u_{r j}) ξ = δ(π, inf ker j) ξ` and the column
/// version, for `π ∈ D(k)`; for `o`, `h` the fixed index must satisfy
/// `⊓^{⊗m} ≤ ker j`.
pub fn verify_kernel_class_relations(x: CategoryId, n: usize, k: usize) -> Result<bool> {
    let model = RepModel::new(x, n)?;
    let infs: Vec<(Vec<usize>, Option<crate::partitions::SetPartition>)> = all_indices(n, k)
        .map(|r| {
            let inf = inf_category(x, &r.kernel()).ok();
            (r.entries().to_vec(), inf)
        })
        .collect();
    for pi in enumerate_category(x, k) {
        let class: Vec<&Vec<usize>> = infs
            .iter()
            .filter(|(_, inf)| inf.as_ref() == Some(&pi))
            .map(|(r, _)| r)
            .collect();
        for (f, inf_f) in &infs {
            let Some(inf_f) = inf_f else { continue };
            let hit = *inf_f == pi;
            let rows = sum_products(&model, class.iter().map(|r| ((*r).clone(), f.clone())));
            let cols = sum_products(&model, class.iter().map(|s| (f.clone(), (*s).clone())));
            if !model.equals_multiple_of_xi(&rows, hit) || !model.equals_multiple_of_xi(&cols, hit) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `R`, `F_i` on `ℂ^{n+1}`.
pub fn r_matrix(n: usize) -> ExactMatrix {
    ExactMatrix::from_fn(n + 1, n + 1, |a, b| {
        if a == n && b == n {
            ExactScalar::one()
        } else {
            ExactScalar::zero()
        }
    })
}

pub fn f_matrix(n: usize, i: usize) -> ExactMatrix {
    ExactMatrix::from_fn(n + 1, n + 1, |a, b| {
        if (a == i - 1 && b == n) || (a == n && b == i - 1) {
            ExactScalar::one()
        } else {
            ExactScalar::zero()
        }
    })
}

/// Kronecker product.
pub fn kron(a: &ExactMatrix, b: &ExactMatrix) -> ExactMatrix {
    ExactMatrix::from_fn(a.rows() * b.rows(), a.cols() * b.cols(), |r, c| {
        a.get(r / b.rows(), c / b.cols()) * b.get(r % b.rows(), c % b.cols())
    })
}

/// `U^o_ij = F_ij / √n` as a dense matrix.
pub fn u_o_matrix(n: usize, i: usize, j: usize) -> ExactMatrix {
    let s = RepModel::new(CategoryId::O, n).expect("n ≥ 1").u_scale;
    let f = kron(&f_matrix(n, i), &f_matrix(n, j));
    ExactMatrix::from_fn(f.rows(), f.cols(), |r, c| f.get(r, c) * &s)
}

/// `R F_i² = R`, `R F_i F_r = 0` (`i ≠ r`), `P^o` an orthogonal projection,
/// `U^o_ij` self-adjoint.
pub fn matrix_invariants_hold(n: usize) -> bool {
    let r = r_matrix(n);
    let mul = |a: &ExactMatrix, b: &ExactMatrix| a.checked_mul(b).expect("same size");
    for i in 1..=n {
        let fi = f_matrix(n, i);
        if mul(&r, &mul(&fi, &fi)) != r {
            return false;
        }
        for s in (1..=n).filter(|&s| s != i) {
            if !mul(&r, &mul(&fi, &f_matrix(n, s))).is_zero() {
                return false;
            }
        }
    }
    let p = kron(&r, &r);
    if mul(&p, &p) != p || !p.is_symmetric() {
        return false;
    }
    (1..=n).all(|i| (1..=n).all(|j| u_o_matrix(n, i, j).is_symmetric()))
}

/// Searches random combinations for `ω(π(a* a)) < 0`; returns the minimum.
pub fn positivity_minimum(x: CategoryId, n: usize, trials: usize, seed: u64) -> Result<BigRational> {
    use rand::Rng;
    let model = RepModel::new(x, n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut min: Option<BigRational> = None;
    for _ in 0..trials {
        let terms = rng.gen_range(1..=3);
        let words = random_words(&mut rng, n, terms, 2, 3);
        let coeffs: Vec<i64> = (0..terms).map(|_| rng.gen_range(-3..=3)).collect();
        let mut value = BigRational::zero();
        for (v, cv) in words.iter().zip(&coeffs) {
            for (w, cw) in words.iter().zip(&coeffs) {
                let s = model.state(&v.adjoint().concat(w)).to_rational().ok_or(Error::NotRational)?;
                value += s * BigRational::from_integer((cv * cw).into());
            }
        }
        if min.as_ref().is_none_or(|m| value < *m) {
            min = Some(value);
        }
    }
    Ok(min.unwrap_or_else(BigRational::zero))
}

/// `true` when no negative value turned up.
pub fn positivity_holds(x: CategoryId, n: usize, trials: usize, seed: u64) -> Result<bool> {
    Ok(!positivity_minimum(x, n, trials, seed)?.is_negative())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::haar::{haar_h_closed, haar_o_closed, haar_s_closed};
    use crate::scalar::rational;

    fn mi(n: usize, e: &[usize]) -> MultiIndex {
        MultiIndex::new(n, e.to_vec()).unwrap()
    }

    /// `L²(S_n)` materialized: permutations as images of `0..n`.
    fn permutations(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        for p in permutations(n - 1) {
            for pos in 0..n {
                let mut q = p.clone();
                q.insert(pos, n - 1);
                out.push(q);
            }
        }
        out
    }

    fn as_function(n: usize, l: PermLabel) -> Vec<BigRational> {
        permutations(n)
            .iter()
            .map(|s| match l {
                PermLabel::One => BigRational::one(),
                PermLabel::P(i, j) => {
                    if s[j - 1] == i - 1 {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                }
            })
            .collect()
    }

    #[test]
    fn inner_products_match_materialized_l2() {
        for n in 1..=4 {
            let mut labels = vec![PermLabel::One];
            for i in 1..=n {
                for j in 1..=n {
                    labels.push(PermLabel::P(i, j));
                }
            }
            let count = BigRational::from_integer(BigInt::from(permutations(n).len()));
            for a in &labels {
                for b in &labels {
                    let fa = as_function(n, *a);
                    let fb = as_function(n, *b);
                    let direct: BigRational = fa.iter().zip(&fb).map(|(x, y)| x * y).sum::<BigRational>() / &count;
                    assert_eq!(direct, perm_inner(n, *a, *b), "n={n} {a:?} {b:?}");
                }
            }
        }
    }

    #[test]
    fn chain_examples() {
        for n in 2..6i64 {
            let nu = n as usize;
            assert_eq!(chain_state_value(&GeneratorWord::p(nu)), BigRational::one());
            assert_eq!(chain_state_value(&GeneratorWord::parse(nu, "p;11;p").unwrap()), rational(1, n));
            assert_eq!(
                chain_state_value(&GeneratorWord::parse(nu, "p;11,22;p").unwrap()),
                rational(1, n * (n - 1))
            );
        }
    }

    #[test]
    fn chain_matches_closed_form() {
        for n in 1..=3 {
            for k in 1..=3 {
                for i in all_indices(n, k) {
                    for j in all_indices(n, k) {
                        let w = GeneratorWord::segment(&i, &j).unwrap();
                        assert_eq!(chain_state_value(&w), haar_s_closed(&i, &j, n).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn omega_examples() {
        assert_eq!(omega_value(CategoryId::O, &mi(2, &[1, 1]), &mi(2, &[2, 2]), 2).unwrap(), rational(1, 2));
        assert_eq!(omega_value(CategoryId::O, &mi(3, &[1]), &mi(3, &[2]), 3).unwrap(), rational(0, 1));
        assert_eq!(omega_value(CategoryId::O, &mi(3, &[1, 2, 3]), &mi(3, &[1, 1, 2]), 3).unwrap(), rational(0, 1));
        let i = mi(3, &[1, 1, 2, 2]);
        assert_eq!(omega_value(CategoryId::H, &i, &i, 3).unwrap(), rational(1, 6));
        assert!(omega_value(CategoryId::S, &i, &i, 3).is_err());
    }

    #[test]
    fn omega_matches_closed_forms() {
        for n in 1..=3 {
            for k in 1..=4 {
                for i in all_indices(n, k) {
                    for j in all_indices(n, k) {
                        assert_eq!(omega_value(CategoryId::O, &i, &j, n).unwrap(), haar_o_closed(&i, &j, n).unwrap());
                        assert_eq!(omega_value(CategoryId::H, &i, &j, n).unwrap(), haar_h_closed(&i, &j, n).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn sparse_action_matches_dense_matrices() {
        for n in 1..=3 {
            let model = RepModel::new(CategoryId::O, n).unwrap();
            let dim = (n + 1) * (n + 1);
            for i in 1..=n {
                for j in 1..=n {
                    let dense = u_o_matrix(n, i, j);
                    for idx in 0..dim {
                        let v = FusedVector::single(PermLabel::One, idx, ExactScalar::one());
                        let got = model.apply_u(i, j, &v);
                        let e: Vec<ExactScalar> = (0..dim)
                            .map(|t| if t == idx { ExactScalar::one() } else { ExactScalar::zero() })
                            .collect();
                        let col = dense.mul_vec(&e).unwrap();
                        for (t, c) in col.iter().enumerate() {
                            let g = got.terms.get(&PermLabel::One).and_then(|x| x.get(&t)).cloned();
                            assert_eq!(g.unwrap_or_else(ExactScalar::zero), *c);
                        }
                    }
                }
            }
            let p = kron(&r_matrix(n), &r_matrix(n));
            assert_eq!(p.get(dim - 1, dim - 1), &ExactScalar::one());
        }
    }

    #[test]
    fn relations() {
        for n in 2..=4 {
            assert!(verify_rank_one_relations(n));
            assert!(sums_to_one(n));
            assert!(matrix_invariants_hold(n));
        }
        assert_eq!(perm_inner(4, PermLabel::P(1, 1), PermLabel::P(1, 2)), BigRational::zero());
        assert!(verify_semigroup_relations(CategoryId::O, 3, 2).unwrap().passed());
        assert!(verify_semigroup_relations(CategoryId::S, 3, 1).unwrap().passed());
        assert!(verify_semigroup_relations(CategoryId::H, 2, 2).unwrap().passed());
        assert!(verify_semigroup_relations(CategoryId::O, 3, 3).is_err());
    }

    #[test]
    fn a_broken_relation_is_detected() {
        // Σ_i u_{i1} u_{i2} p ≠ p in π_s
        let model = RepModel::new(CategoryId::S, 3).unwrap();
        let v = sum_products(&model, (1..=3).map(|i| (vec![i, i], vec![1, 2])));
        assert!(!model.equals_multiple_of_xi(&v, true));
        assert!(model.equals_multiple_of_xi(&v, false));
    }

    #[test]
    fn kernel_class_relations() {
        for n in 2..=3 {
            for k in 1..=3 {
                assert!(verify_kernel_class_relations(CategoryId::S, n, k).unwrap());
            }
            assert!(verify_kernel_class_relations(CategoryId::O, n, 2).unwrap());
            assert!(verify_kernel_class_relations(CategoryId::H, n, 4).unwrap());
        }
    }

    #[test]
    fn states_are_positive() {
        for x in [CategoryId::S, CategoryId::O, CategoryId::H] {
            assert!(positivity_holds(x, 3, 50, 11).unwrap());
        }
    }
}
