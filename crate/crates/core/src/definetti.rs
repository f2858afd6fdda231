//! Conditional expectations `E_n = (id ⊗ h) ∘ Ψ_n` on noncommutative
//! polynomials and the finite ingredients of the de Finetti theorem.
//!
//! Only coefficient-level objects appear: `E_n` acts on monomials through
//! the projection `H^{D(k)}`, and invariance of a moment vector means it is
//! fixed by `H^{D(k)}`. Norms are coefficient 1-norms, which bound operator
//! norms when every variable has norm at most 1. Limits in `n` are observed
//! on finite sweeps, not proved.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::cumulants::CumulantSpec;
use crate::error::{Error, Result};
use crate::partitions::{all_indices, enumerate_category, kernel, kernel_classes, CategoryId, SetPartition};
use crate::posets::interval_poset;
use crate::scalar::{pow_int, serde_rational_vec};
use crate::weingarten::projector;

/// Finite linear combination of nonempty words in `X_1, X_2, …`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NCPoly {
    terms: BTreeMap<Vec<usize>, BigRational>,
}

impl NCPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `X_{w_1} ⋯ X_{w_k}`.
    pub fn monomial(word: &[usize]) -> Result<Self> {
        Self::zero().plus_term(word, BigRational::one())
    }

    fn plus_term(mut self, word: &[usize], c: BigRational) -> Result<Self> {
        self.add_term(word, c)?;
        Ok(self)
    }

    pub fn add_term(&mut self, word: &[usize], c: BigRational) -> Result<()> {
        if word.is_empty() {
            return Err(Error::InvalidArgument("constant terms are not allowed".into()));
        }
        if word.contains(&0) {
            return Err(Error::InvalidArgument("variables are labelled from 1".into()));
        }
        if c.is_zero() {
            return Ok(());
        }
        let slot = self.terms.entry(word.to_vec()).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(word);
        }
        Ok(())
    }

    pub fn coefficient(&self, word: &[usize]) -> BigRational {
        self.terms.get(word).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &BigRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scaled(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        NCPoly {
            terms: self.terms.iter().map(|(w, v)| (w.clone(), v * c)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w, c.clone()).expect("terms of a valid polynomial");
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scaled(&-BigRational::one()))
    }

    /// `Σ |coefficient|`.
    pub fn l1_norm(&self) -> BigRational {
        self.terms.values().map(|c| c.abs()).sum()
    }
}

/// `X_π = Σ_{π ≤ ker i} X_{i_1} ⋯ X_{i_k}` over `i ∈ [n]^k`.
pub fn partition_polynomial(pi: &SetPartition, n: usize) -> NCPoly {
    let mut out = NCPoly::zero();
    for i in all_indices(n, pi.ground_size()).filter(|i| pi.leq_unchecked(&i.kernel())) {
        out.add_term(i.entries(), BigRational::one()).expect("nonempty word");
    }
    out
}

/// `E_n[X_{j_1} ⋯ X_{j_k}] = Σ_i X_{i_1} ⋯ X_{i_k} H^{D(k)}_{ij}`.
pub fn conditional_expectation_en(x: CategoryId, n: usize, word: &[usize]) -> Result<NCPoly> {
    let k = word.len();
    if k == 0 {
        return Err(Error::InvalidArgument("empty word".into()));
    }
    let h = projector(x, k, n)?;
    let ker_j = kernel(word);
    // entry() validates the labels of `word`
    h.entry(word, word)?;
    let mut out = NCPoly::zero();
    for i in all_indices(n, k) {
        out.add_term(i.entries(), h.entry_by_kernel(&i.kernel(), &ker_j))?;
    }
    Ok(out)
}

/// `E_n` extended linearly.
pub fn apply_en(x: CategoryId, n: usize, poly: &NCPoly) -> Result<NCPoly> {
    let mut out = NCPoly::zero();
    for (w, c) in poly.terms() {
        out = out.add(&conditional_expectation_en(x, n, w)?.scaled(c));
    }
    Ok(out)
}

fn require_member(x: CategoryId, pi: &SetPartition) -> Result<()> {
    if x.contains(pi) {
        Ok(())
    } else {
        Err(Error::NotAnElement)
    }
}

/// `E_n^π[X_1, …, X_1] = n^{−|π|} Σ_{π ≤ ker i} X_{i_1} ⋯ X_{i_k}`.
pub fn partitioned_en(x: CategoryId, n: usize, pi: &SetPartition) -> Result<NCPoly> {
    require_member(x, pi)?;
    Ok(partition_polynomial(pi, n).scaled(&pow_int(n, pi.num_blocks()).recip()))
}

/// `K^{E_n}_σ[X_1, …, X_1] = Σ_{π ∈ D(k)} E_n^π[X_1, …, X_1] μ_{I(k)}(π, σ)`.
pub fn cumulant_en(x: CategoryId, n: usize, sigma: &SetPartition) -> Result<NCPoly> {
    far_cumulant(x, 1, n, sigma)
}

/// `f^{n0,n}_σ`: the cumulant above with indices restricted to `{n0, …, n}`.
pub fn far_cumulant(x: CategoryId, n0: usize, n: usize, sigma: &SetPartition) -> Result<NCPoly> {
    require_member(x, sigma)?;
    if n0 == 0 || n0 > n {
        return Err(Error::InvalidArgument(format!("need 1 ≤ n0 ≤ n, got n0={n0}, n={n}")));
    }
    let k = sigma.ground_size();
    let poset = interval_poset(k);
    let target = poset.position(sigma)?;
    let mut out = NCPoly::zero();
    for pi in enumerate_category(x, k) {
        let mu = &poset.mobius_row(poset.position(&pi)?)[target];
        if mu.is_zero() {
            continue;
        }
        let c = BigRational::from_integer(mu.clone()) / pow_int(n, pi.num_blocks());
        for i in all_indices(n, k) {
            if i.entries().iter().all(|&e| e >= n0) && pi.leq_unchecked(&i.kernel()) {
                out.add_term(i.entries(), c.clone())?;
            }
        }
    }
    Ok(out)
}

/// Identical-distribution residuals for one `j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdCumulantResidual {
    #[serde(with = "crate::scalar::serde_rational")]
    pub residual: BigRational,
    /// residual with `f^{n0,n}_σ` in place of `K^{E_n}_σ`, when `n0` is given
    #[serde(serialize_with = "serialize_opt_rational")]
    pub far_residual: Option<BigRational>,
}

fn serialize_opt_rational<S: serde::Serializer>(q: &Option<BigRational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match q {
        Some(q) => s.serialize_str(&crate::scalar::format_rational(q)),
        None => s.serialize_none(),
    }
}

fn falling(m: usize, b: usize) -> BigRational {
    (0..b).fold(BigRational::one(), |acc, t| {
        if t >= m {
            BigRational::zero()
        } else {
            acc * BigRational::from_integer(BigInt::from(m - t))
        }
    })
}

/// `‖E_n[X_j] − Σ_{σ ∈ D(k), σ ≤ ker j} K^{E_n}_σ[X_1, …, X_1]‖_1` and, for
/// `n0`, the same with `f^{n0,n}_σ`.
///
/// Every coefficient depends on the monomial only through its kernel, so
/// the sum runs over kernel classes weighted by their sizes.
pub fn id_cumulant_residual(x: CategoryId, n: usize, j: &[usize], n0: Option<usize>) -> Result<IdCumulantResidual> {
    let k = j.len();
    let h = projector(x, k, n)?;
    h.entry(j, j)?;
    if let Some(n0) = n0 {
        if n0 == 0 || n0 > n {
            return Err(Error::InvalidArgument(format!("need 1 ≤ n0 ≤ n, got n0={n0}, n={n}")));
        }
    }
    let ker_j = kernel(j);
    let elements = enumerate_category(x, k);
    let poset = interval_poset(k);
    let sigmas: Vec<usize> = elements
        .iter()
        .filter(|s| s.leq_unchecked(&ker_j))
        .map(|s| poset.position(s))
        .collect::<Result<_>>()?;
    // weight(π) = Σ_σ μ_{I(k)}(π, σ) / n^{|π|}
    let weights: Vec<BigRational> = elements
        .iter()
        .map(|pi| {
            let row = poset.mobius_row(poset.position(pi)?);
            let mu: BigInt = sigmas.iter().map(|&s| row[s].clone()).sum();
            Ok(BigRational::from_integer(mu) / pow_int(n, pi.num_blocks()))
        })
        .collect::<Result<_>>()?;
    let mut residual = BigRational::zero();
    let mut far = BigRational::zero();
    for class in kernel_classes(k, n) {
        let e = h.entry_by_kernel(&class.kernel, &ker_j);
        let c: BigRational = elements
            .iter()
            .zip(&weights)
            .filter(|(pi, _)| pi.leq_unchecked(&class.kernel))
            .map(|(_, w)| w.clone())
            .sum();
        let size = BigRational::from_integer(BigInt::from(class.size));
        residual += (&e - &c).abs() * &size;
        if let Some(n0) = n0 {
            let inside = falling(n + 1 - n0, class.kernel.num_blocks());
            far += (&e - &c).abs() * &inside + e.abs() * (&size - &inside);
        }
    }
    Ok(IdCumulantResidual {
        residual,
        far_residual: n0.map(|_| far),
    })
}

/// `j ↦ φ(x_{j_1} ⋯ x_{j_k})` on `[n]^k`, flattened row-major.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantMomentVector {
    pub category: CategoryId,
    pub k: usize,
    pub n: usize,
    #[serde(with = "serde_rational_vec")]
    pub values: Vec<BigRational>,
}

impl InvariantMomentVector {
    pub fn new(category: CategoryId, k: usize, n: usize, values: Vec<BigRational>) -> Result<Self> {
        let expected = n.checked_pow(k as u32).ok_or_else(|| Error::InvalidArgument("n^k overflows".into()))?;
        if values.len() != expected {
            return Err(Error::SizeMismatch {
                expected,
                got: values.len(),
            });
        }
        Ok(InvariantMomentVector { category, k, n, values })
    }

    pub fn get(&self, j: &[usize]) -> &BigRational {
        &self.values[j.iter().fold(0, |acc, &e| acc * self.n + (e - 1))]
    }
}

/// Moment vectors for several orders, all at the same `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MomentFamily {
    pub category: CategoryId,
    pub vectors: Vec<InvariantMomentVector>,
}

/// `Π_{V ∈ π} κ_{|V|}`.
fn kappa_product(spec: &CumulantSpec, pi: &SetPartition) -> BigRational {
    pi.block_sizes().into_iter().map(|m| spec.get(m)).product()
}

/// `φ(j) = Σ_{π ∈ I_x(k), π ≤ ker j} Π_{V ∈ π} κ_{|V|}`.
pub fn boolean_iid_vector(spec: &CumulantSpec, k: usize, n: usize) -> Result<InvariantMomentVector> {
    spec.validate()?;
    let elements = enumerate_category(spec.category, k);
    let products: Vec<BigRational> = elements.iter().map(|p| kappa_product(spec, p)).collect();
    let values = all_indices(n, k)
        .map(|j| {
            let ker = j.kernel();
            elements
                .iter()
                .zip(&products)
                .filter(|(p, _)| p.leq_unchecked(&ker))
                .map(|(_, v)| v.clone())
                .sum()
        })
        .collect();
    InvariantMomentVector::new(spec.category, k, n, values)
}

/// `‖H^{D(k)} φ − φ‖_1` for an arbitrary vector on `[n]^k`.
pub fn invariance_defect(v: &InvariantMomentVector) -> Result<BigRational> {
    let h = projector(v.category, v.k, v.n)?;
    let kernels: Vec<SetPartition> = all_indices(v.n, v.k).map(|i| i.kernel()).collect();
    let mut total = BigRational::zero();
    for (a, ka) in kernels.iter().enumerate() {
        let mut hv = BigRational::zero();
        for (b, kb) in kernels.iter().enumerate() {
            if !v.values[b].is_zero() {
                hv += h.entry_by_kernel(ka, kb) * &v.values[b];
            }
        }
        total += (hv - &v.values[a]).abs();
    }
    Ok(total)
}

/// `‖H^{D(k)} φ − φ‖_1` for a vector given on kernel classes.
fn class_defect(x: CategoryId, k: usize, n: usize, phi: impl Fn(&SetPartition) -> BigRational) -> Result<BigRational> {
    let h = projector(x, k, n)?;
    let classes = kernel_classes(k, n);
    let values: Vec<BigRational> = classes.iter().map(|c| phi(&c.kernel)).collect();
    let m = h.class_matrix(&classes);
    let mut total = BigRational::zero();
    for (a, class) in classes.iter().enumerate() {
        let hv: BigRational = m[a].iter().zip(&values).map(|(h, p)| h * p).sum();
        total += (hv - &values[a]).abs() * BigRational::from_integer(BigInt::from(class.size));
    }
    Ok(total)
}

/// `‖H^{D(k)} φ − φ‖_1` for the Boolean i.i.d. moment vector of `spec`.
///
/// `φ` is constant on kernel classes, so `H φ` is evaluated on class
/// representatives through the class matrix.
pub fn forward_invariance_check(spec: &CumulantSpec, k: usize, n: usize) -> Result<BigRational> {
    spec.validate()?;
    let elements = enumerate_category(spec.category, k);
    class_defect(spec.category, k, n, |ker| {
        elements
            .iter()
            .filter(|p| p.leq_unchecked(ker))
            .map(|p| kappa_product(spec, p))
            .sum()
    })
}

/// Cumulants read off an invariant family, with the consistency checks
/// that were run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Recovery {
    pub spec: CumulantSpec,
    pub orders: Vec<usize>,
    pub classes_checked: usize,
}

fn inconsistent(msg: String) -> Error {
    Error::InconsistentMoments(msg)
}

/// Inverts `φ(j) = Σ_{π ∈ I_x(k), π ≤ ker j} Π κ_{|V|}` order by order.
///
/// Each vector must be fixed by `H^{D(k)}` and depend on `j` only through
/// `{π ∈ D(k) : π ≤ ker j}`; `κ_k` is read from a constant index and every
/// other class is checked against the recovered values.
pub fn recover_cumulants(family: &MomentFamily) -> Result<Recovery> {
    let x = family.category;
    let mut vectors: Vec<&InvariantMomentVector> = family.vectors.iter().collect();
    vectors.sort_by_key(|v| v.k);
    let mut kappa: BTreeMap<usize, BigRational> = BTreeMap::new();
    let mut classes_checked = 0;
    let mut orders = Vec::new();
    for v in vectors {
        if v.category != x {
            return Err(inconsistent(format!("vector of order {} has category {}", v.k, v.category)));
        }
        if orders.contains(&v.k) {
            continue;
        }
        let expected_orders: Vec<usize> = (1..v.k).collect();
        if !expected_orders.iter().all(|m| orders.contains(m)) {
            return Err(Error::InvalidArgument(format!("order {} given without all lower orders", v.k)));
        }
        let elements = enumerate_category(x, v.k);
        let mut by_class: BTreeMap<Vec<bool>, (Vec<usize>, BigRational)> = BTreeMap::new();
        for j in all_indices(v.n, v.k) {
            let ker = j.kernel();
            let key: Vec<bool> = elements.iter().map(|p| p.leq_unchecked(&ker)).collect();
            let value = v.get(j.entries()).clone();
            match by_class.get(&key) {
                Some((rep, seen)) if *seen != value => {
                    return Err(inconsistent(format!(
                        "order {}: values {} at {:?} and {} at {:?} differ",
                        v.k,
                        seen,
                        rep,
                        value,
                        j.entries()
                    )))
                }
                Some(_) => {}
                None => {
                    by_class.insert(key, (j.entries().to_vec(), value));
                }
            }
        }
        // constant on kernel classes from here on
        let defect = class_defect(x, v.k, v.n, |ker| {
            let key: Vec<bool> = elements.iter().map(|p| p.leq_unchecked(ker)).collect();
            by_class[&key].1.clone()
        })?;
        if !defect.is_zero() {
            return Err(inconsistent(format!("order {} is not fixed by the projection (defect {defect})", v.k)));
        }
        let partial = CumulantSpec::new(x, kappa.clone());
        let one = SetPartition::one(v.k);
        let lower: BigRational = elements.iter().filter(|p| **p != one).map(|p| kappa_product(&partial, p)).sum();
        let top = v.get(&vec![1; v.k]) - lower;
        if x.allows_block(v.k) {
            kappa.insert(v.k, top);
        } else if !top.is_zero() {
            return Err(inconsistent(format!("order {} would need a cumulant outside the category", v.k)));
        }
        let spec = CumulantSpec::new(x, kappa.clone());
        for (key, (rep, value)) in &by_class {
            let predicted: BigRational = elements
                .iter()
                .zip(key)
                .filter(|(_, below)| **below)
                .map(|(p, _)| kappa_product(&spec, p))
                .sum();
            if predicted != *value {
                return Err(inconsistent(format!("order {}: class of {:?} is {value}, expected {predicted}", v.k, rep)));
            }
            classes_checked += 1;
        }
        orders.push(v.k);
    }
    Ok(Recovery {
        spec: CumulantSpec::new(x, kappa),
        orders,
        classes_checked,
    })
}

/// Boolean i.i.d. moment vectors for orders `1..=max_k` at `n`.
pub fn forward_family(spec: &CumulantSpec, max_k: usize, n: usize) -> Result<MomentFamily> {
    Ok(MomentFamily {
        category: spec.category,
        vectors: (1..=max_k).map(|k| boolean_iid_vector(spec, k, n)).collect::<Result<_>>()?,
    })
}
