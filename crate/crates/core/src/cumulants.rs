//! Boolean cumulants over interval partitions.
//!
//! `K_π = Σ_{σ ∈ I(k), σ ≤ π} E^σ μ_{I(k)}(σ, π)` where `E^σ` is the ordered
//! product of block moments. The coefficient algebra is either the rationals
//! or exact square matrices with a corner expectation `E(y) = e y e`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::ExactMatrix;
use crate::partitions::{enumerate_category, enumerate_interval, kernel, CategoryId, SetPartition};
use crate::posets::interval_poset;
use crate::scalar::{rational, ExactScalar};

/// Values a moment functional can take.
pub trait Coefficient: Clone + PartialEq + std::fmt::Debug {
    fn mul(&self, other: &Self) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn scale(&self, c: &BigInt) -> Self;
    fn zero_like(&self) -> Self;
    fn vanishes(&self) -> bool;
}

impl Coefficient for BigRational {
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn scale(&self, c: &BigInt) -> Self {
        self * BigRational::from_integer(c.clone())
    }
    fn zero_like(&self) -> Self {
        BigRational::zero()
    }
    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }
}

impl Coefficient for ExactMatrix {
    fn mul(&self, other: &Self) -> Self {
        self.checked_mul(other).expect("conformable matrices")
    }
    fn add(&self, other: &Self) -> Self {
        ExactMatrix::from_fn(self.rows(), self.cols(), |r, c| self.get(r, c) + other.get(r, c))
    }
    fn scale(&self, c: &BigInt) -> Self {
        let c = BigRational::from_integer(c.clone());
        ExactMatrix::from_fn(self.rows(), self.cols(), |r, col| self.get(r, col).scale(&c))
    }
    fn zero_like(&self) -> Self {
        ExactMatrix::zeros(self.rows(), self.cols())
    }
    fn vanishes(&self) -> bool {
        ExactMatrix::is_zero(self)
    }
}

/// `E[y_1 ⋯ y_m]` for words of variables.
pub trait MomentFunctional {
    type Var;
    type Value: Coefficient;

    fn expectation(&self, ys: &[&Self::Var]) -> Self::Value;
}

/// A single variable with prescribed moments `m_1, m_2, …`; labels are ignored.
#[derive(Clone, Debug)]
pub struct ScalarMoments {
    pub moments: Vec<BigRational>,
}

impl MomentFunctional for ScalarMoments {
    type Var = usize;
    type Value = BigRational;

    fn expectation(&self, ys: &[&usize]) -> BigRational {
        self.moments
            .get(ys.len() - 1)
            .cloned()
            .unwrap_or_else(|| panic!("moment of order {} not supplied", ys.len()))
    }
}

/// Boolean independent copies `x_1, x_2, …` of one variable, built from
/// kernel data: `E[x_{j1} ⋯ x_{jk}]` is the product of single variable
/// moments over the blocks of `inf_I ker j`.
#[derive(Clone, Debug)]
pub struct BooleanIid {
    moments: Vec<BigRational>,
}

impl BooleanIid {
    pub fn new(spec: &CumulantSpec, max_order: usize) -> Self {
        let moments = (1..=max_order)
            .map(|m| moments_from_kappa(&spec.kappa, &enumerate_interval(m)))
            .collect();
        BooleanIid { moments }
    }

    pub fn single_moment(&self, m: usize) -> &BigRational {
        &self.moments[m - 1]
    }
}

impl MomentFunctional for BooleanIid {
    type Var = usize;
    type Value = BigRational;

    fn expectation(&self, ys: &[&usize]) -> BigRational {
        let labels: Vec<usize> = ys.iter().map(|y| **y).collect();
        kernel(&labels)
            .consecutive_runs()
            .block_sizes()
            .into_iter()
            .map(|m| self.moments[m - 1].clone())
            .product()
    }
}

/// `E(y) = e y e` on square matrices.
#[derive(Clone, Debug)]
pub struct CornerExpectation {
    pub e: ExactMatrix,
}

impl MomentFunctional for CornerExpectation {
    type Var = ExactMatrix;
    type Value = ExactMatrix;

    fn expectation(&self, ys: &[&ExactMatrix]) -> ExactMatrix {
        let mut acc = self.e.clone();
        for y in ys {
            acc = acc.mul(y);
        }
        acc.mul(&self.e)
    }
}

fn check_args<V>(pi: &SetPartition, ys: &[V]) -> Result<()> {
    if ys.len() != pi.ground_size() {
        return Err(Error::SizeMismatch {
            expected: pi.ground_size(),
            got: ys.len(),
        });
    }
    if !pi.is_interval() {
        return Err(Error::NotInterval);
    }
    Ok(())
}

/// `E^π[y_1, …, y_k]`: the ordered product over blocks of the block moments.
pub fn partitioned_expectation<E: MomentFunctional>(e: &E, pi: &SetPartition, ys: &[E::Var]) -> Result<E::Value> {
    check_args(pi, ys)?;
    Ok(partitioned_unchecked(e, pi, ys))
}

fn partitioned_unchecked<E: MomentFunctional>(e: &E, pi: &SetPartition, ys: &[E::Var]) -> E::Value {
    let mut acc: Option<E::Value> = None;
    for block in pi.blocks() {
        let word: Vec<&E::Var> = block.iter().map(|&r| &ys[r - 1]).collect();
        let v = e.expectation(&word);
        acc = Some(match acc {
            None => v,
            Some(a) => a.mul(&v),
        });
    }
    acc.expect("a partition of a nonempty set has a block")
}

/// `K_π[y_1, …, y_k] = Σ_{σ ≤ π} E^σ[y] μ_{I(k)}(σ, π)`.
pub fn cumulant<E: MomentFunctional>(e: &E, pi: &SetPartition, ys: &[E::Var]) -> Result<E::Value> {
    check_args(pi, ys)?;
    let k = pi.ground_size();
    let poset = interval_poset(k);
    let target = poset.position(pi)?;
    let mut acc: Option<E::Value> = None;
    for (a, sigma) in poset.elements().iter().enumerate() {
        let mu = &poset.mobius_row(a)[target];
        if mu.is_zero() {
            continue;
        }
        let term = partitioned_unchecked(e, sigma, ys).scale(mu);
        acc = Some(match acc {
            None => term,
            Some(s) => s.add(&term),
        });
    }
    Ok(acc.expect("the diagonal Möbius value is 1"))
}

/// Cumulant orders `m ↦ κ_m` attached to a category.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CumulantSpec {
    pub category: CategoryId,
    #[serde(with = "kappa_serde")]
    pub kappa: BTreeMap<usize, BigRational>,
}

mod kappa_serde {
    use std::collections::BTreeMap;

    use num_rational::BigRational;
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::scalar::{format_rational, parse_rational};

    pub fn serialize<S: Serializer>(m: &BTreeMap<usize, BigRational>, s: S) -> Result<S::Ok, S::Error> {
        m.iter()
            .map(|(k, v)| (k.to_string(), format_rational(v)))
            .collect::<BTreeMap<_, _>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<usize, BigRational>, D::Error> {
        BTreeMap::<String, String>::deserialize(d)?
            .into_iter()
            .map(|(k, v)| {
                let k = k.parse().map_err(D::Error::custom)?;
                Ok((k, parse_rational(&v).map_err(D::Error::custom)?))
            })
            .collect()
    }
}

impl CumulantSpec {
    /// Builds a spec, dropping zero entries.
    pub fn new(category: CategoryId, kappa: impl IntoIterator<Item = (usize, BigRational)>) -> Self {
        let kappa = kappa.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        CumulantSpec { category, kappa }
    }

    pub fn get(&self, m: usize) -> BigRational {
        self.kappa.get(&m).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Orders carrying a nonzero cumulant outside `L_{I_x}`.
    pub fn violations(&self) -> Vec<usize> {
        self.kappa
            .iter()
            .filter(|(m, v)| !v.is_zero() && !self.category.allows_block(**m))
            .map(|(m, _)| *m)
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        match self.violations().first() {
            Some(&order) => Err(Error::SupportViolation {
                category: self.category,
                order,
            }),
            None => Ok(()),
        }
    }

    /// Random spec supported in `L_{I_x}` with orders up to `max_order`.
    pub fn random(x: CategoryId, max_order: usize, rng: &mut impl Rng) -> Self {
        let kappa = (1..=max_order)
            .filter(|&m| x.allows_block(m))
            .map(|m| (m, rational(rng.gen_range(-9..=9), rng.gen_range(1..=5))));
        Self::new(x, kappa)
    }
}

fn moments_from_kappa(kappa: &BTreeMap<usize, BigRational>, partitions: &[SetPartition]) -> BigRational {
    partitions
        .iter()
        .map(|p| {
            p.block_sizes()
                .into_iter()
                .map(|m| kappa.get(&m).cloned().unwrap_or_else(BigRational::zero))
                .product::<BigRational>()
        })
        .sum()
}

/// `Σ_{π ∈ I_x(k)} Π_{V ∈ π} κ_{|V|}`.
pub fn moments_from_cumulants(spec: &CumulantSpec, k: usize) -> BigRational {
    moments_from_kappa(&spec.kappa, &enumerate_category(spec.category, k))
}

/// Cumulants recovered from moments together with the orders that break
/// the support condition of the category.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CumulantReport {
    pub spec: CumulantSpec,
    pub violations: Vec<usize>,
}

/// Solves `m_k = Σ_{π ∈ I(k)} Π κ_{|V|}` for `κ_1, …, κ_K`, one order at a
/// time: `1_k` is the only interval partition containing `κ_k`.
pub fn cumulants_from_moments(moments: &[BigRational], x: CategoryId) -> CumulantReport {
    let mut kappa: BTreeMap<usize, BigRational> = BTreeMap::new();
    for k in 1..=moments.len() {
        let lower: Vec<SetPartition> = enumerate_interval(k).into_iter().filter(|p| p.num_blocks() > 1).collect();
        let value = &moments[k - 1] - moments_from_kappa(&kappa, &lower);
        kappa.insert(k, value);
    }
    let spec = CumulantSpec::new(x, kappa);
    let violations = spec.violations();
    CumulantReport { spec, violations }
}

/// Boolean Bernoulli law with mean `μ` and variance `σ²`: atoms at the two
/// roots `α`, `−β` of `Z² − μZ − σ² = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BernoulliParams {
    #[serde(with = "crate::scalar::serde_rational")]
    pub mean: BigRational,
    #[serde(with = "crate::scalar::serde_rational")]
    pub variance: BigRational,
}

impl BernoulliParams {
    pub fn new(mean: BigRational, variance: BigRational) -> Result<Self> {
        if !variance.is_positive() {
            return Err(Error::InvalidArgument("variance must be positive".into()));
        }
        Ok(BernoulliParams { mean, variance })
    }

    /// `μ² + 4σ²`.
    pub fn discriminant(&self) -> BigRational {
        &self.mean * &self.mean + BigRational::from_integer(4.into()) * &self.variance
    }

    fn sqrt_discriminant(&self) -> Result<ExactScalar> {
        // √(p/q) = √(pq)/q
        let d = self.discriminant();
        let pq = (d.numer() * d.denom())
            .to_u64()
            .ok_or_else(|| Error::InvalidArgument("discriminant too large for a radicand".into()))?;
        Ok(ExactScalar::new(
            BigRational::zero(),
            BigRational::new(BigInt::one(), d.denom().clone()),
            pq,
        ))
    }

    /// `(α, β)` with `α − β = μ`, `αβ = σ²`.
    pub fn roots(&self) -> Result<(ExactScalar, ExactScalar)> {
        let root = self.sqrt_discriminant()?;
        let half = rational(1, 2);
        let mu = ExactScalar::from_rational(self.mean.clone());
        Ok(((&mu + &root).scale(&half), (&root - &mu).scale(&half)))
    }

    pub fn has_rational_roots(&self) -> bool {
        self.roots().is_ok_and(|(a, _)| a.is_rational())
    }

    /// As a cumulant spec for `I_b`: `κ_1 = μ`, `κ_2 = σ²`.
    pub fn spec(&self) -> CumulantSpec {
        CumulantSpec::new(CategoryId::B, [(1, self.mean.clone()), (2, self.variance.clone())])
    }
}

/// `m_m = μ m_{m−1} + σ² m_{m−2}` with `m_0 = 1`, `m_1 = μ`.
pub fn bernoulli_moment_recurrence(params: &BernoulliParams, m: usize) -> BigRational {
    let (mut prev, mut cur) = (BigRational::one(), params.mean.clone());
    for _ in 1..m {
        let next = &params.mean * &cur + &params.variance * &prev;
        prev = cur;
        cur = next;
    }
    if m == 0 {
        prev
    } else {
        cur
    }
}

/// `(α^{m+1} − (−β)^{m+1}) / (α + β)`, evaluated in `Q(√(μ² + 4σ²))`.
pub fn bernoulli_moment_closed(params: &BernoulliParams, m: usize) -> Result<BigRational> {
    let (alpha, beta) = params.roots()?;
    let neg_beta = -&beta;
    let pow = |x: &ExactScalar| (0..=m).fold(ExactScalar::one(), |acc, _| &acc * x);
    let num = &pow(&alpha) - &pow(&neg_beta);
    let value = &num * &(&alpha + &beta).inverse()?;
    value.to_rational().ok_or(Error::NotRational)
}

/// The `m`-th moment: the closed form when the roots are rational,
/// otherwise the rational recurrence.
pub fn bernoulli_moment(params: &BernoulliParams, m: usize) -> BigRational {
    if params.has_rational_roots() {
        bernoulli_moment_closed(params, m).expect("rational roots give a rational closed form")
    } else {
        bernoulli_moment_recurrence(params, m)
    }
}

/// Result of comparing mixed moments against the kernel expansion.
#[derive(Clone, Debug, Serialize)]
pub struct MixedCheckReport {
    pub checked: usize,
    pub failures: Vec<Vec<usize>>,
}

impl MixedCheckReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// `E[x_{j1} ⋯ x_{jk}] = Σ_{π ∈ I(k), π ≤ ker j} K_π[x, …, x]` on sampled
/// multi-indices over `n` variables, with the single-variable cumulants
/// taken from the Möbius formula applied to `E` itself.
pub fn mixed_cumulant_check(e: &BooleanIid, k: usize, n: usize, samples: usize, seed: u64) -> Result<MixedCheckReport> {
    let diagonal = vec![1usize; k];
    let mut k_pi = Vec::new();
    for pi in enumerate_interval(k) {
        let v = cumulant(e, &pi, &diagonal)?;
        k_pi.push((pi, v));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for _ in 0..samples {
        let j: Vec<usize> = (0..k).map(|_| rng.gen_range(1..=n)).collect();
        let ker = kernel(&j);
        let expected: BigRational = k_pi
            .iter()
            .filter(|(p, _)| p.leq_unchecked(&ker))
            .map(|(_, v)| v.clone())
            .sum();
        let refs: Vec<&usize> = j.iter().collect();
        if e.expectation(&refs) != expected {
            failures.push(j);
        }
    }
    Ok(MixedCheckReport {
        checked: samples,
        failures,
    })
}

fn random_rational_matrix(dim: usize, rng: &mut impl Rng) -> ExactMatrix {
    ExactMatrix::from_fn(dim, dim, |_, _| {
        ExactScalar::from_rational(rational(rng.gen_range(-4..=4), rng.gen_range(1..=3)))
    })
}

/// Random instance of the corner-insertion identity: for `E(y) = e y e`,
/// `b = e b' e` and every interval `π` with `l ∼_π l+1`,
/// `K_π[y_1, …, y_l b, y_{l+1}, …, y_k]` is the zero matrix.
pub fn corner_insertion_vanishing(dim: usize, seed: u64) -> Result<bool> {
    if dim < 2 {
        return Err(Error::InvalidArgument("dimension must be at least 2".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rank = rng.gen_range(1..dim);
    let mut diag: Vec<bool> = (0..dim).map(|r| r < rank).collect();
    for r in (1..dim).rev() {
        diag.swap(r, rng.gen_range(0..=r));
    }
    let e = ExactMatrix::from_fn(dim, dim, |r, c| {
        if r == c && diag[r] {
            ExactScalar::one()
        } else {
            ExactScalar::zero()
        }
    });
    let corner = CornerExpectation { e: e.clone() };
    let k = rng.gen_range(2..=4);
    let ys: Vec<ExactMatrix> = (0..k).map(|_| random_rational_matrix(dim, &mut rng)).collect();
    let b = e.mul(&random_rational_matrix(dim, &mut rng)).mul(&e);
    for pi in enumerate_interval(k) {
        for l in 1..k {
            if !pi.same_block(l, l + 1) {
                continue;
            }
            let mut args = ys.clone();
            args[l - 1] = args[l - 1].mul(&b);
            if !cumulant(&corner, &pi, &args)?.vanishes() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn ber12() -> BernoulliParams {
        BernoulliParams::new(int(1), int(2)).unwrap()
    }

    fn scalar(ms: &[i64]) -> ScalarMoments {
        ScalarMoments {
            moments: ms.iter().map(|&m| int(m)).collect(),
        }
    }

    #[test]
    fn partitioned_examples() {
        let e = scalar(&[1, 3, 5]);
        let p = SetPartition::from_composition(&[2, 1]);
        assert_eq!(partitioned_expectation(&e, &p, &[1, 1, 1]).unwrap(), int(3));
        assert_eq!(partitioned_expectation(&e, &SetPartition::one(3), &[1, 1, 1]).unwrap(), int(5));
        assert_eq!(
            partitioned_expectation(&e, &p, &[1, 1]).unwrap_err(),
            Error::SizeMismatch { expected: 3, got: 2 }
        );
        let crossing = SetPartition::from_labels(&[0, 1, 0]);
        assert_eq!(cumulant(&e, &crossing, &[1, 1, 1]).unwrap_err(), Error::NotInterval);
    }

    #[test]
    fn cumulant_examples() {
        let e = scalar(&[1, 3, 5]);
        assert_eq!(cumulant(&e, &SetPartition::one(3), &[1, 1, 1]).unwrap(), int(0));
        assert_eq!(cumulant(&e, &SetPartition::one(2), &[1, 1]).unwrap(), int(3 - 1));
    }

    #[test]
    fn k2_of_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let corner = CornerExpectation {
            e: ExactMatrix::from_ints(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 0]]),
        };
        let y1 = random_rational_matrix(3, &mut rng);
        let y2 = random_rational_matrix(3, &mut rng);
        let k2 = cumulant(&corner, &SetPartition::one(2), &[y1.clone(), y2.clone()]).unwrap();
        let direct = corner
            .expectation(&[&y1, &y2])
            .add(&corner.expectation(&[&y1]).mul(&corner.expectation(&[&y2])).scale(&BigInt::from(-1)));
        assert_eq!(k2, direct);
    }

    #[test]
    fn block_multiplicativity() {
        let e = scalar(&[2, -1, 7, 3, 11]);
        for k in 1..=5 {
            for pi in enumerate_interval(k) {
                let whole = cumulant(&e, &pi, &vec![1; k]).unwrap();
                let product: BigRational = pi
                    .block_sizes()
                    .into_iter()
                    .map(|m| cumulant(&e, &SetPartition::one(m), &vec![1; m]).unwrap())
                    .product();
                assert_eq!(whole, product);
            }
        }
    }

    #[test]
    fn moments_from_cumulants_examples() {
        let o = CumulantSpec::new(CategoryId::O, [(2, rational(3, 2))]);
        for k in [1, 3, 5] {
            assert_eq!(moments_from_cumulants(&o, k), int(0));
        }
        assert_eq!(moments_from_cumulants(&o, 4), rational(9, 4));
        let b = CumulantSpec::new(CategoryId::B, [(1, int(1)), (2, int(2))]);
        assert_eq!(moments_from_cumulants(&b, 3), int(5));
        let s = CumulantSpec::new(CategoryId::S, []);
        assert_eq!(moments_from_cumulants(&s, 4), int(0));
    }

    #[test]
    fn cumulants_from_moments_examples() {
        let ms: Vec<BigRational> = (1..=6).map(|m| bernoulli_moment(&ber12(), m)).collect();
        let report = cumulants_from_moments(&ms, CategoryId::B);
        assert_eq!(report.spec, ber12().spec());
        assert!(report.violations.is_empty());

        let centered: Vec<BigRational> = (1..=6).map(|m| if m % 2 == 0 { int(5).pow(m / 2) } else { int(0) }).collect();
        let report = cumulants_from_moments(&centered, CategoryId::O);
        assert_eq!(report.spec.kappa, BTreeMap::from([(2, int(5))]));
        assert!(report.violations.is_empty());

        let ones = vec![int(1); 4];
        let report = cumulants_from_moments(&ones, CategoryId::O);
        assert_eq!(report.spec.kappa, BTreeMap::from([(1, int(1))]));
        assert_eq!(report.violations, vec![1]);
    }

    #[test]
    fn triangular_solve_matches_first_block_recurrence() {
        let ms: Vec<BigRational> = [3, -2, 5, 1, 0, 7, -4].iter().map(|&m| int(m)).collect();
        let kappa = cumulants_from_moments(&ms, CategoryId::S).spec;
        // m_k = Σ_j κ_j m_{k−j}, m_0 = 1
        for k in 1..=ms.len() {
            let rhs: BigRational = (1..=k)
                .map(|j| kappa.get(j) * if j == k { int(1) } else { ms[k - j - 1].clone() })
                .sum();
            assert_eq!(rhs, ms[k - 1]);
        }
    }

    #[test]
    fn bernoulli_examples() {
        let expected = [1, 3, 5, 11, 21, 43];
        for (m, v) in expected.iter().enumerate() {
            assert_eq!(bernoulli_moment(&ber12(), m + 1), int(*v));
        }
        let sym = BernoulliParams::new(int(0), rational(4, 9)).unwrap();
        for m in [1, 3, 5, 7] {
            assert_eq!(bernoulli_moment(&sym, m), int(0));
        }
        let irrational = BernoulliParams::new(int(1), int(1)).unwrap();
        assert!(!irrational.has_rational_roots());
        for m in 1..=10 {
            assert_eq!(bernoulli_moment(&irrational, m), bernoulli_moment_closed(&irrational, m).unwrap());
            assert_eq!(
                bernoulli_moment(&irrational, m),
                moments_from_cumulants(&irrational.spec(), m)
            );
        }
        let p = BernoulliParams::new(rational(2, 3), rational(5, 7)).unwrap();
        assert_eq!(bernoulli_moment(&p, 1), rational(2, 3));
        assert!(BernoulliParams::new(int(1), int(0)).is_err());
    }

    #[test]
    fn roots_relations() {
        let (a, b) = ber12().roots().unwrap();
        assert_eq!(a.to_rational(), Some(int(2)));
        assert_eq!(b.to_rational(), Some(int(1)));
        let p = BernoulliParams::new(rational(1, 2), rational(3, 5)).unwrap();
        let (a, b) = p.roots().unwrap();
        assert_eq!((&a - &b).to_rational(), Some(p.mean.clone()));
        assert_eq!((&a * &b).to_rational(), Some(p.variance.clone()));
    }

    #[test]
    fn mixed_examples() {
        let spec = CumulantSpec::new(CategoryId::S, [(1, int(2)), (2, int(3)), (3, int(-1))]);
        let e = BooleanIid::new(&spec, 6);
        assert_eq!(e.expectation(&[&1, &2]), int(4));
        assert_eq!(e.expectation(&[&1, &1, &2]), (int(3) + int(4)) * int(2));
        for k in 1..=5 {
            assert!(mixed_cumulant_check(&e, k, 3, 40, k as u64).unwrap().passed());
        }
    }

    #[test]
    fn corner_examples() {
        for seed in 0..10 {
            for dim in 2..=3 {
                assert!(corner_insertion_vanishing(dim, seed).unwrap());
            }
        }
        assert!(corner_insertion_vanishing(1, 0).is_err());
    }

    #[test]
    fn spec_json() {
        let spec = CumulantSpec::new(CategoryId::B, [(1, int(1)), (2, rational(2, 3))]);
        let text = serde_json::to_string(&spec).unwrap();
        assert_eq!(text, r#"{"category":"b","kappa":{"1":"1/1","2":"2/3"}}"#);
        let back: CumulantSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back, spec);
        assert_eq!(
            CumulantSpec::new(CategoryId::O, [(1, int(1))]).validate(),
            Err(Error::SupportViolation { category: CategoryId::O, order: 1 })
        );
    }
}
