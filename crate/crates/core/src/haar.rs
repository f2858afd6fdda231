//! Haar functionals on words `p u_{i j} ⋯ p ⋯ p`.
//!
//! On a single segment `p u_{i1 j1} ⋯ u_{ik jk} p` the functional is the
//! projection entry `H^{D(k)}_{ij}`; on longer words it is the product over
//! segments.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::partitions::{enumerate_category, inf_category, kernel, kernel_classes, shared_kernel_classes, CategoryId, MultiIndex, SetPartition};
use crate::scalar::pow_int;
use crate::weingarten::projector;

/// `p ⟨seg₁⟩ p ⟨seg₂⟩ p ⋯ p` over `[n]`; an empty segment is a bare `p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GeneratorWord {
    n: usize,
    segments: Vec<Vec<(usize, usize)>>,
}

impl GeneratorWord {
    pub fn new(n: usize, segments: Vec<Vec<(usize, usize)>>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::InvalidArgument("a word needs at least one segment".into()));
        }
        for &(r, c) in segments.iter().flatten() {
            for e in [r, c] {
                if e == 0 || e > n {
                    return Err(Error::IndexOutOfRange { entry: e, n });
                }
            }
        }
        Ok(GeneratorWord { n, segments })
    }

    /// The word `p`.
    pub fn p(n: usize) -> Self {
        GeneratorWord {
            n,
            segments: vec![Vec::new()],
        }
    }

    /// `p u_{i1 j1} ⋯ u_{ik jk} p`.
    pub fn segment(i: &MultiIndex, j: &MultiIndex) -> Result<Self> {
        if i.len() != j.len() {
            return Err(Error::LengthMismatch {
                left: i.len(),
                right: j.len(),
            });
        }
        let n = i.n().max(j.n());
        let pairs = i.entries().iter().copied().zip(j.entries().iter().copied()).collect();
        Self::new(n, vec![pairs])
    }

    /// Parses e.g. `"p:11,12;p;21,22:p"`. Tokens are split on `;` and `:`;
    /// `p` tokens separate segments and every other token is a segment of
    /// comma separated pairs written `ij` (single digits) or `i-j`.
    pub fn parse(n: usize, s: &str) -> Result<Self> {
        let mut segments = Vec::new();
        for token in s.split([';', ':']).map(str::trim).filter(|t| !t.is_empty()) {
            if token == "p" {
                continue;
            }
            let pairs = token
                .split(',')
                .map(|pair| parse_pair(pair.trim()))
                .collect::<Result<Vec<_>>>()?;
            segments.push(pairs);
        }
        if segments.is_empty() {
            if !s.split([';', ':']).any(|t| t.trim() == "p") {
                return Err(Error::Parse(format!("empty word {s:?}")));
            }
            segments.push(Vec::new());
        }
        Self::new(n, segments)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn segments(&self) -> &[Vec<(usize, usize)>] {
        &self.segments
    }

    /// `w*`: generators are self-adjoint, so the order of everything reverses.
    pub fn adjoint(&self) -> Self {
        GeneratorWord {
            n: self.n,
            segments: self
                .segments
                .iter()
                .rev()
                .map(|s| s.iter().rev().copied().collect())
                .collect(),
        }
    }

    /// `self · other`; the meeting `p p` collapses to `p`.
    pub fn concat(&self, other: &Self) -> Self {
        let mut segments = self.segments.clone();
        segments.extend(other.segments.iter().cloned());
        GeneratorWord {
            n: self.n.max(other.n),
            segments,
        }
    }

    /// Row and column multi-indices of each segment.
    pub fn segment_indices(&self) -> Vec<(Vec<usize>, Vec<usize>)> {
        self.segments
            .iter()
            .map(|s| s.iter().copied().unzip())
            .collect()
    }
}

fn parse_pair(pair: &str) -> Result<(usize, usize)> {
    let bad = || Error::Parse(format!("bad generator {pair:?}"));
    let (a, b) = match pair.split_once('-') {
        Some((a, b)) => (a, b),
        None if pair.len() == 2 && pair.is_char_boundary(1) => pair.split_at(1),
        None => return Err(bad()),
    };
    Ok((a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?))
}

impl fmt::Display for GeneratorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p")?;
        for seg in &self.segments {
            if seg.is_empty() {
                continue;
            }
            let body: Vec<String> = seg
                .iter()
                .map(|(r, c)| if *r < 10 && *c < 10 { format!("{r}{c}") } else { format!("{r}-{c}") })
                .collect();
            write!(f, ";{};p", body.join(","))?;
        }
        Ok(())
    }
}

/// How a segment value is obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize)]
pub enum HaarMode {
    /// closed forms for s, o, h; Weingarten for b
    #[default]
    ClosedForm,
    Weingarten,
    /// both, failing on disagreement
    Verify,
}

impl FromStr for HaarMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "closed" | "closed-form" => Ok(HaarMode::ClosedForm),
            "weingarten" => Ok(HaarMode::Weingarten),
            "verify" => Ok(HaarMode::Verify),
            other => Err(Error::Parse(format!("unknown mode {other:?}"))),
        }
    }
}

fn check_lengths(i: &[usize], j: &[usize]) -> Result<()> {
    if i.len() != j.len() {
        return Err(Error::LengthMismatch {
            left: i.len(),
            right: j.len(),
        });
    }
    Ok(())
}

fn inverse_chain_weight(n: usize, blocks: usize) -> BigRational {
    // 1 / (n (n-1)^{b-1})
    let den = BigInt::from(n) * BigInt::from(n - 1).pow(blocks as u32 - 1);
    BigRational::new(BigInt::one(), den)
}

fn s_closed(i: &[usize], j: &[usize], n: usize) -> BigRational {
    let a = kernel(i).consecutive_runs();
    if a != kernel(j).consecutive_runs() {
        return BigRational::zero();
    }
    inverse_chain_weight(n, a.num_blocks())
}

fn pairs_below(e: &[usize]) -> bool {
    e.chunks(2).all(|c| c[0] == c[1])
}

fn o_closed(i: &[usize], j: &[usize], n: usize) -> BigRational {
    if i.len() % 2 == 1 || !pairs_below(i) || !pairs_below(j) {
        return BigRational::zero();
    }
    pow_int(n, i.len() / 2).recip()
}

fn h_closed(i: &[usize], j: &[usize], n: usize) -> BigRational {
    if i.len() % 2 == 1 || !pairs_below(i) || !pairs_below(j) {
        return BigRational::zero();
    }
    let a = inf_category(CategoryId::H, &kernel(i)).expect("pairs lie below ker i");
    let b = inf_category(CategoryId::H, &kernel(j)).expect("pairs lie below ker j");
    if a != b {
        return BigRational::zero();
    }
    inverse_chain_weight(n, a.num_blocks())
}

fn validate(i: &MultiIndex, j: &MultiIndex, n: usize) -> Result<()> {
    check_lengths(i.entries(), j.entries())?;
    for e in i.entries().iter().chain(j.entries()) {
        if *e == 0 || *e > n {
            return Err(Error::IndexOutOfRange { entry: *e, n });
        }
    }
    Ok(())
}

/// `δ(inf_I ker i, inf_I ker j) / (n (n−1)^{b−1})` with `b = |inf_I ker i|`.
pub fn haar_s_closed(i: &MultiIndex, j: &MultiIndex, n: usize) -> Result<BigRational> {
    validate(i, j, n)?;
    if i.is_empty() {
        return Ok(BigRational::one());
    }
    Ok(s_closed(i.entries(), j.entries(), n))
}

/// `ζ(⊓^{⊗m}, ker i) ζ(⊓^{⊗m}, ker j) / n^m` on length `2m`; zero on odd length.
pub fn haar_o_closed(i: &MultiIndex, j: &MultiIndex, n: usize) -> Result<BigRational> {
    validate(i, j, n)?;
    Ok(o_closed(i.entries(), j.entries(), n))
}

/// The `I_h` closed form: pair conditions, then the `I_s`-type weight on
/// `inf_{I_h}` kernels.
pub fn haar_h_closed(i: &MultiIndex, j: &MultiIndex, n: usize) -> Result<BigRational> {
    validate(i, j, n)?;
    Ok(h_closed(i.entries(), j.entries(), n))
}

/// Closed form for one segment, if the category has one.
pub fn closed_form(x: CategoryId, i: &[usize], j: &[usize], n: usize) -> Option<BigRational> {
    if i.is_empty() {
        return Some(BigRational::one());
    }
    match x {
        CategoryId::S => Some(s_closed(i, j, n)),
        CategoryId::O => Some(o_closed(i, j, n)),
        CategoryId::H => Some(h_closed(i, j, n)),
        CategoryId::B => None,
    }
}

fn weingarten_segment(x: CategoryId, i: &[usize], j: &[usize], n: usize) -> Result<BigRational> {
    if i.is_empty() {
        return Ok(BigRational::one());
    }
    projector(x, i.len(), n)?.entry(i, j)
}

/// `h_D(p u_{i1 j1} ⋯ u_{ik jk} p)` for raw index slices.
pub fn segment_value(x: CategoryId, i: &[usize], j: &[usize], n: usize, mode: HaarMode) -> Result<BigRational> {
    check_lengths(i, j)?;
    match (mode, closed_form(x, i, j, n)) {
        (HaarMode::ClosedForm, Some(v)) => Ok(v),
        (HaarMode::Verify, Some(v)) => {
            let w = weingarten_segment(x, i, j, n)?;
            if v != w {
                return Err(Error::InvalidArgument(format!(
                    "closed form {v} disagrees with Weingarten value {w} at i={i:?} j={j:?}"
                )));
            }
            Ok(v)
        }
        _ => weingarten_segment(x, i, j, n),
    }
}

/// `h_D(w)` as the product of its segment values.
pub fn haar_value_with(x: CategoryId, w: &GeneratorWord, mode: HaarMode) -> Result<BigRational> {
    let mut acc = BigRational::one();
    for (i, j) in w.segment_indices() {
        let v = segment_value(x, &i, &j, w.n(), mode)?;
        if v.is_zero() {
            return Ok(v);
        }
        acc *= v;
    }
    Ok(acc)
}

pub fn haar_value(x: CategoryId, w: &GeneratorWord) -> Result<BigRational> {
    haar_value_with(x, w, HaarMode::default())
}

/// `|Σ_s h(p u_{is} p) h(p u_{sj} p) − h(p u_{ij} p)|`.
///
/// The summand depends on `s` only through `ker s`, so the sum runs over
/// kernel classes weighted by their sizes.
pub fn invariance_residual(x: CategoryId, i: &MultiIndex, j: &MultiIndex, n: usize) -> Result<BigRational> {
    validate(i, j, n)?;
    let (i, j) = (i.entries(), j.entries());
    let mut sum = BigRational::zero();
    for class in shared_kernel_classes(i.len(), n).iter() {
        let s = &class.representative;
        let left = segment_value(x, i, s, n, HaarMode::ClosedForm)?;
        if left.is_zero() {
            continue;
        }
        let right = segment_value(x, s, j, n, HaarMode::ClosedForm)?;
        sum += left * right * BigRational::from_integer(class.size.into());
    }
    Ok((sum - segment_value(x, i, j, n, HaarMode::ClosedForm)?).abs())
}

/// The same residual summed over every `s ∈ [n]^k` one by one.
pub fn invariance_residual_exhaustive(x: CategoryId, i: &MultiIndex, j: &MultiIndex, n: usize) -> Result<BigRational> {
    validate(i, j, n)?;
    let (i, j) = (i.entries(), j.entries());
    let mut sum = BigRational::zero();
    for s in crate::partitions::all_indices(n, i.len()) {
        sum += segment_value(x, i, s.entries(), n, HaarMode::ClosedForm)?
            * segment_value(x, s.entries(), j, n, HaarMode::ClosedForm)?;
    }
    Ok((sum - segment_value(x, i, j, n, HaarMode::ClosedForm)?).abs())
}

fn category_inf(x: CategoryId, entries: &[usize]) -> Option<SetPartition> {
    inf_category(x, &kernel(entries)).ok()
}

/// Applies the state to the kernel-class relations: for every `π ∈ D(k)`
/// and admissible `i`,
/// `Σ_{s : inf ker s = π} h(p u_{is} p) = δ(inf ker i, π)` and the
/// same with rows and columns exchanged. For `o` and `h`, `i` ranges over
/// indices with `⊓^{⊗m} ≤ ker i`.
pub fn kernel_class_sums_hold(x: CategoryId, k: usize, n: usize) -> Result<bool> {
    if !x.is_join_stable() {
        return Err(Error::UnsupportedCategory(x));
    }
    let classes = kernel_classes(k, n);
    let infs: Vec<Option<SetPartition>> = classes.iter().map(|c| category_inf(x, &c.representative)).collect();
    for pi in enumerate_category(x, k) {
        for (ci, ic) in classes.iter().enumerate() {
            let Some(inf_i) = &infs[ci] else { continue };
            let expected = if *inf_i == pi { BigRational::one() } else { BigRational::zero() };
            let mut row = BigRational::zero();
            let mut col = BigRational::zero();
            for (cs, sc) in classes.iter().enumerate() {
                if infs[cs].as_ref() != Some(&pi) {
                    continue;
                }
                let size = BigRational::from_integer(sc.size.into());
                let i = &ic.representative;
                let s = &sc.representative;
                row += segment_value(x, i, s, n, HaarMode::ClosedForm)? * &size;
                col += segment_value(x, s, i, n, HaarMode::ClosedForm)? * size;
            }
            if row != expected || col != expected {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Outcome of a random search for `h(a* a) < 0`.
#[derive(Clone, Debug, Serialize)]
pub struct PositivityReport {
    pub category: CategoryId,
    pub n: usize,
    pub trials: usize,
    #[serde(with = "crate::scalar::serde_rational")]
    pub minimum: BigRational,
    /// `(a, h(a* a))` for every negative value found
    pub negatives: Vec<(String, String)>,
}

/// A random real combination of short words.
pub fn random_words(rng: &mut impl Rng, n: usize, count: usize, max_segments: usize, max_len: usize) -> Vec<GeneratorWord> {
    (0..count)
        .map(|_| {
            let segs = rng.gen_range(1..=max_segments);
            let segments = (0..segs)
                .map(|_| {
                    let len = rng.gen_range(0..=max_len);
                    (0..len).map(|_| (rng.gen_range(1..=n), rng.gen_range(1..=n))).collect()
                })
                .collect();
            GeneratorWord { n, segments }
        })
        .collect()
}

/// Samples `a = Σ c_w w` with small integer coefficients and evaluates
/// `h(a* a) = Σ c_v c_w h(v* w)`.
pub fn positivity_search(x: CategoryId, n: usize, trials: usize, seed: u64) -> Result<PositivityReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut minimum: Option<BigRational> = None;
    let mut negatives = Vec::new();
    for _ in 0..trials {
        let terms = rng.gen_range(1..=3);
        let words = random_words(&mut rng, n, terms, 2, 3);
        let coeffs: Vec<i64> = (0..terms).map(|_| rng.gen_range(-3..=3)).collect();
        let mut value = BigRational::zero();
        for (v, cv) in words.iter().zip(&coeffs) {
            for (w, cw) in words.iter().zip(&coeffs) {
                value += haar_value(x, &v.adjoint().concat(w))? * BigRational::from_integer((cv * cw).into());
            }
        }
        if value.is_negative() {
            let desc: Vec<String> = words.iter().zip(&coeffs).map(|(w, c)| format!("{c}*[{w}]")).collect();
            negatives.push((desc.join(" + "), crate::scalar::format_rational(&value)));
        }
        if minimum.as_ref().is_none_or(|m| value < *m) {
            minimum = Some(value);
        }
    }
    Ok(PositivityReport {
        category: x,
        n,
        trials,
        minimum: minimum.unwrap_or_else(BigRational::zero),
        negatives,
    })
}
