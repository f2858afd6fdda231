//! Batch checks, one per acceptance criterion.
//!
//! Grids over `[n]^k` use every row index and one column index per kernel
//! class once `n^k` exceeds [`EXHAUSTIVE_SIDE`]: `H^{D(k)}` commutes with
//! relabelling the values `1..n`, so a column is determined by the column
//! of its class representative.

use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cumulants::{
    bernoulli_moment, bernoulli_moment_closed, corner_insertion_vanishing, cumulants_from_moments,
    moments_from_cumulants, BernoulliParams, CumulantSpec,
};
use crate::definetti::{forward_family, forward_invariance_check, id_cumulant_residual, recover_cumulants};
use crate::error::{Error, Result};
use crate::haar::{closed_form, haar_value, haar_value_with, invariance_residual, random_words, HaarMode};
use crate::partitions::{
    all_indices, check_block_stable, check_enough_partitions, check_interval_closed, check_join_stable,
    enumerate_category, enumerate_interval, shared_kernel_classes, CategoryId, MultiIndex, SetPartition,
};
use crate::posets::{interval_mobius, interval_poset, PartitionPoset};
use crate::representations::{
    chain_state_value, matrix_invariants_hold, omega_value, rep_state, sums_to_one, verify_kernel_class_relations,
    verify_rank_one_relations, verify_semigroup_relations,
};
use crate::scalar::{format_rational, int, rational};
use crate::weingarten::{fixed_space_report, invertibility_threshold, projector, weingarten_estimate_residual, ProjectionOracle};

/// Above this many multi-indices, column indices are reduced to kernel
/// class representatives.
pub const EXHAUSTIVE_SIDE: usize = 1296;

/// Default cap on `n^k` per grid cell.
pub const DEFAULT_MAX_CELLS: usize = 65536;

/// Ranges for every criterion.
#[derive(Clone, Debug, Serialize)]
pub struct Grid {
    pub max_k: usize,
    /// even orders allowed for `o`, `h`
    pub max_even_k: usize,
    pub max_n: usize,
    pub chain_k: usize,
    pub chain_n: usize,
    pub omega_k: usize,
    pub omega_n: usize,
    pub relation_k: usize,
    pub relation_n: usize,
    pub rank_one_n: usize,
    pub fixed_k: usize,
    pub fixed_n: usize,
    pub definetti_k: usize,
    pub definetti_n: usize,
    pub specs_per_category: usize,
    pub random_words: usize,
    pub max_cells: usize,
    pub seed: u64,
}

impl Grid {
    pub fn full() -> Self {
        Grid {
            max_k: 4,
            max_even_k: 6,
            max_n: 6,
            chain_k: 4,
            chain_n: 5,
            omega_k: 4,
            omega_n: 3,
            relation_k: 4,
            relation_n: 4,
            rank_one_n: 5,
            fixed_k: 4,
            fixed_n: 5,
            definetti_k: 5,
            definetti_n: 6,
            specs_per_category: 20,
            random_words: 200,
            max_cells: DEFAULT_MAX_CELLS,
            seed: 2024,
        }
    }

    /// The full grid with every order clamped to `max_k` and every `n` to `max_n`.
    pub fn capped(max_k: usize, max_n: usize) -> Self {
        let g = Self::full();
        Grid {
            max_k: g.max_k.min(max_k),
            max_even_k: g.max_even_k.min(max_k),
            max_n: g.max_n.min(max_n),
            chain_k: g.chain_k.min(max_k),
            chain_n: g.chain_n.min(max_n),
            omega_k: g.omega_k.min(max_k),
            omega_n: g.omega_n.min(max_n),
            relation_k: g.relation_k.min(max_k),
            relation_n: g.relation_n.min(max_n),
            rank_one_n: g.rank_one_n.min(max_n),
            fixed_k: g.fixed_k.min(max_k),
            fixed_n: g.fixed_n.min(max_n),
            definetti_k: g.definetti_k.min(max_k),
            definetti_n: g.definetti_n.min(max_n),
            ..g
        }
    }

    fn orders(&self, x: CategoryId) -> Vec<usize> {
        let mut ks: Vec<usize> = (1..=self.max_k).collect();
        if matches!(x, CategoryId::O | CategoryId::H) {
            ks.extend((self.max_k + 1..=self.max_even_k).filter(|k| k % 2 == 0));
        }
        ks
    }

    /// `(x, k, n)` with `n` from the invertibility threshold (1 for an
    /// empty category) up to `max_n`, and the number of skipped cells.
    fn cells(&self, x: CategoryId, ks: &[usize], max_n: usize) -> (Vec<(usize, usize)>, usize) {
        let mut cells = Vec::new();
        let mut skipped = 0;
        for &k in ks {
            let start = start_n(x, k, max_n);
            for n in start..=max_n {
                if side(n, k).is_none_or(|s| s > self.max_cells) {
                    skipped += 1;
                } else {
                    cells.push((k, n));
                }
            }
        }
        (cells, skipped)
    }
}

fn side(n: usize, k: usize) -> Option<usize> {
    n.checked_pow(k as u32)
}

fn start_n(x: CategoryId, k: usize, max_n: usize) -> usize {
    if enumerate_category(x, k).is_empty() {
        1
    } else {
        invertibility_threshold(x, k, max_n).unwrap_or(max_n + 1)
    }
}

/// Column indices for a grid cell: all of `[n]^k`, or one per kernel class.
fn columns(n: usize, k: usize) -> Vec<Vec<usize>> {
    if side(n, k).is_some_and(|s| s <= EXHAUSTIVE_SIDE) {
        all_indices(n, k).map(|j| j.entries().to_vec()).collect()
    } else {
        shared_kernel_classes(k, n).iter().map(|c| c.representative.clone()).collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

pub const CRITERIA: [(u8, &str); 11] = [
    (1, "projection equivalence"),
    (2, "haar closed forms vs weingarten"),
    (3, "representation consistency"),
    (4, "haar invariance and multiplicativity"),
    (5, "weingarten estimate"),
    (6, "mobius function"),
    (7, "cumulant algebra"),
    (8, "fixed space"),
    (9, "de finetti forward"),
    (10, "de finetti converse ingredients"),
    (11, "category combinatorics"),
];

/// Pass/fail with a description of what was checked or what failed.
type Outcome = Result<(bool, String)>;

fn fail(msg: String) -> Outcome {
    Ok((false, msg))
}

pub fn run_criterion(id: u8, grid: &Grid) -> Result<CriterionResult> {
    let name = CRITERIA
        .iter()
        .find(|(i, _)| *i == id)
        .map(|(_, n)| *n)
        .ok_or_else(|| Error::InvalidArgument(format!("no criterion {id}")))?;
    let start = Instant::now();
    let outcome = match id {
        1 => projection_equivalence(grid),
        2 => closed_forms(grid),
        3 => representation_consistency(grid),
        4 => haar_invariance(grid),
        5 => weingarten_estimate(),
        6 => mobius_checks(),
        7 => cumulant_algebra(grid),
        8 => fixed_space(grid),
        9 => definetti_forward(grid),
        10 => definetti_converse(grid),
        _ => category_combinatorics(),
    };
    let (passed, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
    Ok(CriterionResult {
        id,
        name,
        passed,
        detail,
        seconds: start.elapsed().as_secs_f64(),
    })
}

pub fn run_all(grid: &Grid) -> Vec<CriterionResult> {
    CRITERIA
        .iter()
        .map(|(id, _)| run_criterion(*id, grid).expect("known criterion"))
        .collect()
}

fn projection_equivalence(grid: &Grid) -> Outcome {
    let mut entries = 0usize;
    let mut skipped = 0;
    for x in CategoryId::ALL {
        let (cells, s) = grid.cells(x, &grid.orders(x), grid.max_n);
        skipped += s;
        for (k, n) in cells {
            let fast = projector(x, k, n)?;
            let oracle = ProjectionOracle::new(x, k, n)?;
            for j in columns(n, k) {
                let a = fast.column(&j)?;
                let b = oracle.column(&MultiIndex::new(n, j.clone())?)?;
                if a != b {
                    return fail(format!("{x} k={k} n={n}: columns differ at j={j:?}"));
                }
                entries += a.len();
            }
        }
    }
    Ok((true, format!("{entries} entries equal, {skipped} cells over the cap")))
}

fn closed_forms(grid: &Grid) -> Outcome {
    let mut entries = 0usize;
    let mut skipped = 0;
    for x in [CategoryId::S, CategoryId::O, CategoryId::H] {
        let (cells, s) = grid.cells(x, &grid.orders(x), grid.max_n);
        skipped += s;
        for (k, n) in cells {
            let h = projector(x, k, n)?;
            let rows: Vec<Vec<usize>> = all_indices(n, k).map(|i| i.entries().to_vec()).collect();
            for j in columns(n, k) {
                let col = h.column(&j)?;
                for (i, v) in rows.iter().zip(&col) {
                    let c = closed_form(x, i, &j, n).expect("closed form exists for s, o, h");
                    if c != *v {
                        return fail(format!("{x} k={k} n={n} i={i:?} j={j:?}: closed {c}, projection {v}"));
                    }
                    entries += 1;
                }
            }
        }
    }
    Ok((true, format!("{entries} entries equal, {skipped} cells over the cap")))
}

fn representation_consistency(grid: &Grid) -> Outcome {
    let mut count = 0usize;
    for n in 1..=grid.chain_n {
        for k in 1..=grid.chain_k {
            for i in all_indices(n, k) {
                for j in all_indices(n, k) {
                    let w = crate::haar::GeneratorWord::segment(&i, &j)?;
                    let chain = chain_state_value(&w);
                    let closed = crate::haar::haar_s_closed(&i, &j, n)?;
                    if chain != closed {
                        return fail(format!("chain vs closed form at n={n} i={i:?} j={j:?}: {chain} vs {closed}"));
                    }
                    count += 1;
                }
            }
        }
    }
    for n in 1..=grid.omega_n {
        for k in 1..=grid.omega_k {
            for i in all_indices(n, k) {
                for j in all_indices(n, k) {
                    let o = omega_value(CategoryId::O, &i, &j, n)?;
                    let h = omega_value(CategoryId::H, &i, &j, n)?;
                    if o != crate::haar::haar_o_closed(&i, &j, n)? || h != crate::haar::haar_h_closed(&i, &j, n)? {
                        return fail(format!("matrix state differs from closed form at n={n} i={i:?} j={j:?}"));
                    }
                    count += 2;
                }
            }
        }
    }
    let mut relations = 0usize;
    for x in [CategoryId::S, CategoryId::O, CategoryId::H] {
        for k in (1..=grid.relation_k).filter(|&k| x.allows_block(k)) {
            for n in 1..=grid.relation_n {
                let report = verify_semigroup_relations(x, n, k)?;
                if let Some((name, _)) = report.checks.iter().find(|(_, ok)| !ok) {
                    return fail(format!("{x} k={k} n={n}: relation failed: {name}"));
                }
                relations += report.checks.len();
            }
        }
        for n in 1..=grid.relation_n {
            let max_k = if x == CategoryId::S { grid.relation_k.min(3) } else { grid.relation_k };
            for k in 1..=max_k {
                if !verify_kernel_class_relations(x, n, k)? {
                    return fail(format!("{x} k={k} n={n}: kernel-class relation failed"));
                }
                relations += 1;
            }
        }
    }
    for n in 1..=grid.rank_one_n {
        if n >= 2 && !verify_rank_one_relations(n) {
            return fail(format!("rank-one relations fail at n={n}"));
        }
        if !sums_to_one(n) {
            return fail(format!("Σ_i P̂_ij ≠ 1̂ at n={n}"));
        }
        if n <= grid.relation_n && !matrix_invariants_hold(n) {
            return fail(format!("matrix invariants fail at n={n}"));
        }
    }
    Ok((true, format!("{count} state values equal, {relations} relation families hold")))
}

fn haar_invariance(grid: &Grid) -> Outcome {
    let mut residuals = 0usize;
    let mut skipped = 0;
    for x in CategoryId::ALL {
        let (cells, s) = grid.cells(x, &grid.orders(x), grid.max_n);
        skipped += s;
        for (k, n) in cells {
            let exhaustive = side(n, k).is_some_and(|s| s <= EXHAUSTIVE_SIDE);
            let rows: Vec<Vec<usize>> = if exhaustive {
                all_indices(n, k).map(|i| i.entries().to_vec()).collect()
            } else {
                columns(n, k)
            };
            // relabelling i and j by the same permutation leaves the residual unchanged
            let reps: Vec<Vec<usize>> = shared_kernel_classes(k, n).iter().map(|c| c.representative.clone()).collect();
            for j in reps {
                let jm = MultiIndex::new(n, j.clone())?;
                for i in &rows {
                    let r = invariance_residual(x, &MultiIndex::new(n, i.clone())?, &jm, n)?;
                    if !r.is_zero() {
                        return fail(format!("{x} k={k} n={n} i={i:?} j={j:?}: residual {r}"));
                    }
                    residuals += 1;
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(grid.seed);
    let mut products = 0usize;
    for t in 0..grid.random_words {
        let x = CategoryId::ALL[t % 4];
        let n = rng.gen_range(2..=4);
        let ws = random_words(&mut rng, n, 2, 2, 3);
        let joined = ws[0].concat(&ws[1]);
        let whole = haar_value_with(x, &joined, HaarMode::Weingarten)?;
        let split = haar_value_with(x, &ws[0], HaarMode::Weingarten)? * haar_value_with(x, &ws[1], HaarMode::Weingarten)?;
        if whole != split || haar_value(x, &joined)? != whole {
            return fail(format!("{x}: h({joined}) = {whole}, product {split}"));
        }
        if x != CategoryId::B {
            // the representation evaluates the whole word as one chain
            let rep = rep_state(x, &joined)?;
            if rep != whole {
                return fail(format!("{x}: representation gives {rep} on {joined}, Haar value {whole}"));
            }
        }
        products += 1;
    }
    Ok((
        true,
        format!("{residuals} residuals zero, {skipped} cells over the cap, {products} random products multiplicative"),
    ))
}

fn weingarten_estimate() -> Outcome {
    let x = CategoryId::S;
    let mut pairs = 0usize;
    let ratio = rational(3, 5);
    for k in 1..=4 {
        let elems = enumerate_category(x, k);
        for p in &elems {
            for q in &elems {
                let r: Vec<BigRational> = [8, 16, 32]
                    .iter()
                    .map(|&n| weingarten_estimate_residual(x, k, n, p, q))
                    .collect::<Result<_>>()?;
                if r[1] > &r[0] * &ratio || r[2] > &r[1] * &ratio {
                    return fail(format!(
                        "k={k} {p} {q}: residuals {}, {}, {}",
                        format_rational(&r[0]),
                        format_rational(&r[1]),
                        format_rational(&r[2])
                    ));
                }
                pairs += 1;
            }
        }
    }
    let elems = enumerate_category(x, 2);
    for n in 2..=32usize {
        for p in &elems {
            for q in &elems {
                let r = weingarten_estimate_residual(x, 2, n, p, q)?;
                if r != rational(1, n as i64 - 1) {
                    return fail(format!("k=2 n={n} {p} {q}: residual {r}, expected 1/{}", n - 1));
                }
            }
        }
    }
    Ok((true, format!("{pairs} pairs decay by 3/5 per doubling; k=2 residual is 1/(n-1) for n ≤ 32")))
}

fn mobius_checks() -> Outcome {
    let mut pairs = 0usize;
    for k in 1..=7 {
        let poset = interval_poset(k);
        let elems = poset.elements().to_vec();
        let mu: Vec<std::sync::Arc<Vec<BigInt>>> = (0..elems.len()).map(|a| poset.mobius_row(a)).collect();
        for (a, p) in elems.iter().enumerate() {
            for (b, q) in elems.iter().enumerate() {
                let delta = if a == b { BigInt::one() } else { BigInt::zero() };
                if !p.leq_unchecked(q) {
                    if !mu[a][b].is_zero() {
                        return fail(format!("μ({p}, {q}) ≠ 0 off the order"));
                    }
                    continue;
                }
                let between: Vec<usize> = (0..elems.len())
                    .filter(|&c| p.leq_unchecked(&elems[c]) && elems[c].leq_unchecked(q))
                    .collect();
                let left: BigInt = between.iter().map(|&c| mu[a][c].clone()).sum();
                let right: BigInt = between.iter().map(|&c| mu[c][b].clone()).sum();
                if left != delta || right != delta {
                    return fail(format!("Möbius sums fail on [{p}, {q}]"));
                }
                let sign = if (p.num_blocks() - q.num_blocks()) % 2 == 0 { 1 } else { -1 };
                if mu[a][b] != BigInt::from(sign) {
                    return fail(format!("μ({p}, {q}) = {}, expected {sign}", mu[a][b]));
                }
                pairs += 1;
            }
        }
        for x in CategoryId::ALL {
            let sub = PartitionPoset::category(x, k);
            for p in sub.elements() {
                for q in sub.elements() {
                    if sub.mobius_int(p, q)? != interval_mobius(p, q)? {
                        return fail(format!("μ_{x} differs from μ_I at ({p}, {q})"));
                    }
                }
            }
        }
    }
    Ok((true, format!("{pairs} comparable pairs checked for k ≤ 7")))
}

fn bernoulli_cases() -> Vec<BernoulliParams> {
    [(1, 1, 2, 1), (0, 1, 1, 1), (1, 1, 1, 1), (1, 2, 3, 4), (-2, 3, 5, 2), (3, 1, 1, 7)]
        .iter()
        .map(|&(a, b, c, d)| BernoulliParams::new(rational(a, b), rational(c, d)).expect("positive variance"))
        .collect()
}

fn cumulant_algebra(grid: &Grid) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(grid.seed ^ 7);
    let mut trips = 0;
    for x in CategoryId::ALL {
        for _ in 0..10 {
            let spec = CumulantSpec::random(x, 8, &mut rng);
            let moments: Vec<BigRational> = (1..=8).map(|k| moments_from_cumulants(&spec, k)).collect();
            let back = cumulants_from_moments(&moments, x);
            if back.spec != spec || !back.violations.is_empty() {
                return fail(format!("round trip changed {:?} into {:?}", spec.kappa, back.spec.kappa));
            }
            trips += 1;
        }
    }
    for params in bernoulli_cases() {
        for m in 1..=10 {
            let closed = bernoulli_moment_closed(&params, m)?;
            let sum = moments_from_cumulants(&params.spec(), m);
            if closed != sum || bernoulli_moment(&params, m) != sum {
                return fail(format!("Bernoulli({}, {}) m={m}: closed {closed}, partition sum {sum}", params.mean, params.variance));
            }
        }
    }
    let ber12 = BernoulliParams::new(int(1), int(2))?;
    for m in 1..=10u32 {
        let expected = (BigInt::from(2).pow(m + 1) - BigInt::from(if m % 2 == 0 { -1 } else { 1 })) / BigInt::from(3);
        if bernoulli_moment(&ber12, m as usize) != BigRational::from_integer(expected.clone()) {
            return fail(format!("Ber(1,2) moment {m} is not {expected}"));
        }
    }
    for seed in 0..100u64 {
        if !corner_insertion_vanishing(2 + (seed % 3) as usize, seed)? {
            return fail(format!("corner insertion does not vanish for seed {seed}"));
        }
    }
    Ok((true, format!("{trips} round trips, 6 Bernoulli laws to order 10, 100 corner instances")))
}

fn fixed_space(grid: &Grid) -> Outcome {
    let mut cells = 0;
    for x in CategoryId::ALL {
        let ks: Vec<usize> = (1..=grid.fixed_k).collect();
        let (list, _) = grid.cells(x, &ks, grid.fixed_n);
        for (k, n) in list {
            let report = fixed_space_report(x, k, n)?;
            if !report.passed() {
                return fail(format!("{x} k={k} n={n}: {report:?}"));
            }
            cells += 1;
        }
    }
    Ok((true, format!("{cells} cells: eigenspace at 1 is Span{{T_π}}")))
}

/// Random specs plus the named families of each category.
pub fn definetti_specs(x: CategoryId, count: usize, max_order: usize, seed: u64) -> Vec<CumulantSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ x.tag() as u64);
    let mut specs: Vec<CumulantSpec> = (0..count).map(|_| CumulantSpec::random(x, max_order, &mut rng)).collect();
    match x {
        CategoryId::O => specs.push(CumulantSpec::new(x, [(2, rational(9, 4))])),
        CategoryId::H => specs.push(CumulantSpec::new(x, [(2, rational(1, 2)), (4, rational(-1, 3))])),
        CategoryId::B => specs.push(BernoulliParams::new(rational(1, 2), rational(3, 4)).expect("positive").spec()),
        CategoryId::S => specs.push(CumulantSpec::new(x, [(1, int(1)), (2, int(1))])),
    }
    let named = specs.pop().expect("pushed above");
    specs.push(CumulantSpec::new(x, named.kappa.into_iter().filter(|(m, _)| *m <= max_order)));
    specs
}

fn definetti_forward(grid: &Grid) -> Outcome {
    let mut checks = 0;
    for x in CategoryId::ALL {
        let ks: Vec<usize> = (1..=grid.definetti_k).collect();
        let (cells, _) = grid.cells(x, &ks, grid.definetti_n);
        for spec in definetti_specs(x, grid.specs_per_category, grid.definetti_k, grid.seed) {
            for &(k, n) in &cells {
                let r = forward_invariance_check(&spec, k, n)?;
                if !r.is_zero() {
                    return fail(format!("{x} {:?} k={k} n={n}: residual {r}", spec.kappa));
                }
                checks += 1;
            }
        }
    }
    Ok((true, format!("{checks} (spec, k, n) cells invariant")))
}

fn definetti_converse(grid: &Grid) -> Outcome {
    for n in 2..=32usize {
        let r = id_cumulant_residual(CategoryId::S, n, &[1, 2], None)?.residual;
        if r != rational(2, n as i64) {
            return fail(format!("residual at n={n} is {r}, expected 2/{n}"));
        }
    }
    let mut trips = 0;
    for x in CategoryId::ALL {
        let start = (1..=grid.definetti_k)
            .map(|k| start_n(x, k, grid.definetti_n))
            .max()
            .unwrap_or(1)
            .max(2);
        for spec in definetti_specs(x, grid.specs_per_category, grid.definetti_k, grid.seed) {
            for n in start..=grid.definetti_n {
                if side(n, grid.definetti_k).is_none_or(|s| s > grid.max_cells) {
                    continue;
                }
                let family = forward_family(&spec, grid.definetti_k, n)?;
                let got = recover_cumulants(&family)?;
                if got.spec != spec {
                    return fail(format!("{x} n={n}: recovered {:?} from {:?}", got.spec.kappa, spec.kappa));
                }
                trips += 1;
            }
        }
        let spec = definetti_specs(x, 1, grid.definetti_k.max(2), grid.seed).remove(0);
        let mut family = forward_family(&spec, grid.definetti_k.max(2), start)?;
        family.vectors[1].values[1] += BigRational::one();
        match recover_cumulants(&family) {
            Err(Error::InconsistentMoments(_)) => {}
            other => return fail(format!("{x}: perturbed vector not rejected: {other:?}")),
        }
    }
    Ok((true, format!("residual 2/n for n ≤ 32, {trips} round trips, 4 perturbations rejected")))
}

fn category_combinatorics() -> Outcome {
    for k in 1..=12 {
        let count = enumerate_interval(k).len();
        if count != 1 << (k - 1) {
            return fail(format!("|I({k})| = {count}"));
        }
    }
    let mut flags = BTreeMap::new();
    for x in CategoryId::ALL {
        let f = [check_block_stable(x, 8), check_interval_closed(x, 8), check_enough_partitions(x, 8)];
        if f.contains(&false) {
            return fail(format!("{x}: blockwise flags {f:?}"));
        }
        flags.insert(x.tag(), check_join_stable(x, 8));
    }
    if flags.values().filter(|v| **v).count() != 3 || flags[&'b'] {
        return fail(format!("join stability {flags:?}"));
    }
    let left = SetPartition::from_blocks(3, &[vec![1, 2], vec![3]])?;
    let right = SetPartition::from_blocks(3, &[vec![1], vec![2, 3]])?;
    let joined = left.join(&right)?;
    let in_b = CategoryId::B.contains(&left) && CategoryId::B.contains(&right);
    if !in_b || joined != SetPartition::one(3) || CategoryId::B.contains(&joined) {
        return fail(format!("{left} ∨ {right} = {joined}"));
    }
    Ok((true, format!("|I(k)| = 2^(k-1) for k ≤ 12; blockwise for k ≤ 8; {left} ∨ {right} = {joined} ∉ I_b(3)")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_grid_passes() {
        let grid = Grid {
            specs_per_category: 3,
            random_words: 20,
            ..Grid::capped(2, 3)
        };
        for id in [1, 2, 3, 4, 8, 9, 10] {
            let r = run_criterion(id, &grid).unwrap();
            assert!(r.passed, "{}: {}", r.name, r.detail);
        }
    }

    #[test]
    fn cells_start_at_threshold() {
        let grid = Grid::full();
        let (cells, skipped) = grid.cells(CategoryId::S, &[1, 2], 3);
        assert_eq!(cells, vec![(1, 1), (1, 2), (1, 3), (2, 2), (2, 3)]);
        assert_eq!(skipped, 0);
        let (cells, _) = grid.cells(CategoryId::O, &[1], 2);
        assert_eq!(cells, vec![(1, 1), (1, 2)]);
        let capped = Grid { max_cells: 8, ..Grid::full() };
        assert_eq!(capped.cells(CategoryId::S, &[2], 3).1, 1);
    }

    #[test]
    fn columns_reduce_on_large_cells() {
        assert_eq!(columns(3, 2).len(), 9);
        assert_eq!(columns(6, 6).len(), 203);
    }
}
