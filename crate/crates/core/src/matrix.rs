//! Dense exact matrices and fraction-free linear algebra.
//!
//! Elimination runs on integer matrices (rows scaled by the lcm of their
//! denominators) with Bareiss' update, so every intermediate entry is a
//! minor of the input and exact division is guaranteed. Linear algebra is
//! only defined for matrices whose entries are rational.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::ExactScalar;

#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<ExactScalar>,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix {
            rows,
            cols,
            entries: vec![ExactScalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, ExactScalar::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> ExactScalar) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                entries.push(f(r, c));
            }
        }
        let m = ExactMatrix { rows, cols, entries };
        debug_assert!(m.radicand().is_ok());
        m
    }

    pub fn from_rationals(rows: Vec<Vec<BigRational>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(nrows * ncols);
        for row in rows {
            if row.len() != ncols {
                return Err(Error::DimensionMismatch {
                    expected: ncols,
                    got: row.len(),
                });
            }
            entries.extend(row.into_iter().map(ExactScalar::from_rational));
        }
        Ok(ExactMatrix {
            rows: nrows,
            cols: ncols,
            entries,
        })
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&v| crate::scalar::int(v)).collect())
            .collect();
        Self::from_rationals(rows).expect("ragged integer matrix")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &ExactScalar {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: ExactScalar) {
        self.entries[r * self.cols + c] = v;
    }

    /// Common radicand of the entries (0 when all are rational).
    pub fn radicand(&self) -> Result<u64> {
        let mut found = 0;
        for e in &self.entries {
            match (found, e.radicand()) {
                (_, 0) => {}
                (0, r) => found = r,
                (a, b) if a == b => {}
                (a, b) => return Err(Error::RadicandMismatch { left: a, right: b }),
            }
        }
        Ok(found)
    }

    pub fn is_rational(&self) -> bool {
        self.entries.iter().all(ExactScalar::is_rational)
    }

    pub fn to_rationals(&self) -> Result<Vec<Vec<BigRational>>> {
        (0..self.rows)
            .map(|r| {
                (0..self.cols)
                    .map(|c| self.get(r, c).to_rational().ok_or(Error::NotRational))
                    .collect()
            })
            .collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.get(r, c).checked_add(&a.checked_mul(b)?)?;
                    out.set(r, c, v);
                }
            }
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::DimensionMismatch {
                expected: self.rows * self.cols,
                got: other.rows * other.cols,
            });
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.checked_sub(b))
            .collect::<Result<_>>()?;
        Ok(ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn mul_vec(&self, v: &[ExactScalar]) -> Result<Vec<ExactScalar>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: v.len(),
            });
        }
        let mut out = vec![ExactScalar::zero(); self.rows];
        for (r, slot) in out.iter_mut().enumerate() {
            for (c, x) in v.iter().enumerate() {
                let a = self.get(r, c);
                if a.is_zero() || x.is_zero() {
                    continue;
                }
                *slot = slot.checked_add(&a.checked_mul(x)?)?;
            }
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(ExactScalar::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|r| (0..r).all(|c| self.get(r, c) == self.get(c, r)))
    }
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ExactMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Scales each row to integers; returns the scaled rows.
fn integer_rows(rows: &[Vec<BigRational>]) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|row| {
            let l = row
                .iter()
                .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
            row.iter()
                .map(|q| q.numer() * (&l / q.denom()))
                .collect()
        })
        .collect()
}

/// Fraction-free row echelon form over the first `pivot_cols` columns.
/// Returns the pivot column of each nonzero row, in order.
fn bareiss_echelon(m: &mut [Vec<BigInt>], pivot_cols: usize) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..pivot_cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&p| !m[p][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let (top, rest) = m.split_at_mut(r + 1);
        let pivot_row = &top[r];
        for row in rest.iter_mut() {
            let factor = row[c].clone();
            for j in c + 1..cols {
                let num = &pivot_row[c] * &row[j] - &factor * &pivot_row[j];
                let (q, rem) = num.div_rem(&prev);
                debug_assert!(rem.is_zero(), "Bareiss division must be exact");
                row[j] = q;
            }
            row[c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Reduced row echelon form (rational) of an integer echelon matrix.
fn reduce(m: &[Vec<BigInt>], pivots: &[usize]) -> Vec<Vec<BigRational>> {
    let mut q: Vec<Vec<BigRational>> = m
        .iter()
        .take(pivots.len())
        .map(|row| row.iter().map(|v| BigRational::from_integer(v.clone())).collect())
        .collect();
    for (r, &c) in pivots.iter().enumerate().rev() {
        let p = q[r][c].clone();
        for v in q[r].iter_mut() {
            *v = &*v / &p;
        }
        for above in 0..r {
            let f = q[above][c].clone();
            if f.is_zero() {
                continue;
            }
            let (head, tail) = q.split_at_mut(r);
            for (a, b) in head[above].iter_mut().zip(tail[0].iter()) {
                *a = &*a - &f * b;
            }
        }
    }
    q
}

fn rational_entries(m: &ExactMatrix) -> Result<Vec<Vec<BigRational>>> {
    m.to_rationals()
}

/// Exact inverse of a square rational matrix.
pub fn invert_matrix(m: &ExactMatrix) -> Result<ExactMatrix> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let n = m.rows;
    let rows = rational_entries(m)?;
    // [A | I] with each row scaled by its own factor; the scaling of the
    // identity block keeps the solution equal to A^{-1}.
    let mut aug: Vec<Vec<BigRational>> = rows;
    for (r, row) in aug.iter_mut().enumerate() {
        row.extend((0..n).map(|c| if c == r { BigRational::one() } else { BigRational::zero() }));
    }
    let mut ints = integer_rows(&aug);
    let pivots = bareiss_echelon(&mut ints, n);
    if pivots.len() < n {
        return Err(Error::Singular);
    }
    let red = reduce(&ints, &pivots);
    ExactMatrix::from_rationals(red.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Basis of the right nullspace, one vector per free column.
pub fn nullspace_basis(m: &ExactMatrix) -> Result<Vec<Vec<BigRational>>> {
    let cols = m.cols;
    let rows = rational_entries(m)?;
    if rows.is_empty() {
        return Ok((0..cols)
            .map(|c| unit(cols, c))
            .collect());
    }
    let mut ints = integer_rows(&rows);
    let pivots = bareiss_echelon(&mut ints, cols);
    let red = reduce(&ints, &pivots);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    Ok(free
        .iter()
        .map(|&f| {
            let mut v = unit(cols, f);
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -red[r][f].clone();
            }
            v
        })
        .collect())
}

fn unit(len: usize, at: usize) -> Vec<BigRational> {
    (0..len)
        .map(|i| if i == at { BigRational::one() } else { BigRational::zero() })
        .collect()
}

/// Solves `m x = rhs`. Errors with `Inconsistent` when no solution exists
/// and `Singular` when the solution is not unique.
pub fn solve_linear(m: &ExactMatrix, rhs: &[BigRational]) -> Result<Vec<BigRational>> {
    if rhs.len() != m.rows {
        return Err(Error::DimensionMismatch {
            expected: m.rows,
            got: rhs.len(),
        });
    }
    let cols = m.cols;
    let mut aug = rational_entries(m)?;
    for (row, b) in aug.iter_mut().zip(rhs) {
        row.push(b.clone());
    }
    let mut ints = integer_rows(&aug);
    let pivots = bareiss_echelon(&mut ints, cols);
    if ints[pivots.len()..].iter().any(|row| !row[cols].is_zero()) {
        return Err(Error::Inconsistent);
    }
    if pivots.len() < cols {
        return Err(Error::Singular);
    }
    let red = reduce(&ints, &pivots);
    Ok(red.into_iter().map(|row| row[cols].clone()).collect())
}

/// Rank of a rational matrix.
pub fn rank(m: &ExactMatrix) -> Result<usize> {
    let rows = rational_entries(m)?;
    let mut ints = integer_rows(&rows);
    Ok(bareiss_echelon(&mut ints, m.cols).len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rational};
    use proptest::prelude::*;

    fn q(rows: &[&[i64]]) -> ExactMatrix {
        ExactMatrix::from_ints(rows)
    }

    fn rat_matrix(rows: Vec<Vec<BigRational>>) -> ExactMatrix {
        ExactMatrix::from_rationals(rows).unwrap()
    }

    #[test]
    fn invert_examples() {
        assert_eq!(invert_matrix(&q(&[&[1, 0], &[0, 1]])).unwrap(), ExactMatrix::identity(2));
        let inv = invert_matrix(&q(&[&[4, 2], &[2, 2]])).unwrap();
        let expected = rat_matrix(vec![
            vec![rational(1, 2), rational(-1, 2)],
            vec![rational(-1, 2), int(1)],
        ]);
        assert_eq!(inv, expected);
        assert_eq!(invert_matrix(&q(&[&[1, 1], &[1, 1]])), Err(Error::Singular));
        assert!(matches!(
            invert_matrix(&q(&[&[1, 2, 3]])),
            Err(Error::NotSquare { .. })
        ));
    }

    #[test]
    fn nullspace_examples() {
        assert!(nullspace_basis(&ExactMatrix::identity(3)).unwrap().is_empty());
        let basis = nullspace_basis(&q(&[&[1, -1]])).unwrap();
        assert_eq!(basis, vec![vec![int(1), int(1)]]);

        // H^{I(1)} - Id for n = 3
        let third = ExactScalar::from_rational(rational(1, 3));
        let h = ExactMatrix::from_fn(3, 3, |_, _| third.clone());
        let basis = nullspace_basis(&h.checked_sub(&ExactMatrix::identity(3)).unwrap()).unwrap();
        assert_eq!(basis.len(), 1);
        assert!(basis[0].iter().all(|v| *v == basis[0][0]) && !basis[0][0].is_zero());
    }

    #[test]
    fn solve_examples() {
        assert_eq!(
            solve_linear(&ExactMatrix::identity(2), &[int(2), int(3)]).unwrap(),
            vec![int(2), int(3)]
        );
        assert_eq!(
            solve_linear(&q(&[&[4, 2], &[2, 2]]), &[int(2), int(2)]).unwrap(),
            vec![int(0), int(1)]
        );
        assert_eq!(
            solve_linear(&q(&[&[1, 1], &[1, 1]]), &[int(1), int(0)]),
            Err(Error::Inconsistent)
        );
        assert_eq!(
            solve_linear(&q(&[&[1, 1], &[1, 1]]), &[int(1), int(1)]),
            Err(Error::Singular)
        );
    }

    #[test]
    fn radical_entries_are_rejected_by_linalg() {
        let m = ExactMatrix::from_fn(1, 1, |_, _| ExactScalar::sqrt_of(2));
        assert_eq!(invert_matrix(&m), Err(Error::NotRational));
    }

    #[test]
    fn rank_deficient_nullspace_has_right_dimension() {
        let m = q(&[&[1, 2, 3, 4], &[2, 4, 6, 8], &[0, 1, 1, 0]]);
        let basis = nullspace_basis(&m).unwrap();
        assert_eq!(basis.len(), 2);
        for v in &basis {
            let col: Vec<ExactScalar> = v.iter().cloned().map(ExactScalar::from).collect();
            assert!(m.mul_vec(&col).unwrap().iter().all(ExactScalar::is_zero));
        }
        assert_eq!(rank(&m).unwrap(), 2);
    }

    fn arb_matrix(max: usize) -> impl Strategy<Value = Vec<Vec<(i64, i64)>>> {
        (1..=max).prop_flat_map(|n| {
            proptest::collection::vec(proptest::collection::vec((-9i64..10, 1i64..6), n), n)
        })
    }

    fn build(raw: &[Vec<(i64, i64)>]) -> ExactMatrix {
        rat_matrix(
            raw.iter()
                .map(|r| r.iter().map(|&(a, b)| rational(a, b)).collect())
                .collect(),
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn inverse_times_matrix_is_identity(raw in arb_matrix(12)) {
            let m = build(&raw);
            match invert_matrix(&m) {
                Ok(inv) => {
                    let n = m.rows();
                    prop_assert_eq!(inv.checked_mul(&m).unwrap(), ExactMatrix::identity(n));
                    prop_assert_eq!(m.checked_mul(&inv).unwrap(), ExactMatrix::identity(n));
                }
                Err(e) => {
                    prop_assert_eq!(e, Error::Singular);
                    prop_assert!(rank(&m).unwrap() < m.rows());
                }
            }
        }

        #[test]
        fn solve_then_multiply_back(raw in arb_matrix(8), b in proptest::collection::vec(-20i64..20, 8)) {
            let m = build(&raw);
            let rhs: Vec<BigRational> = b[..m.rows()].iter().map(|&v| int(v)).collect();
            if let Ok(x) = solve_linear(&m, &rhs) {
                let xs: Vec<ExactScalar> = x.into_iter().map(ExactScalar::from).collect();
                let back = m.mul_vec(&xs).unwrap();
                let want: Vec<ExactScalar> = rhs.into_iter().map(ExactScalar::from).collect();
                prop_assert_eq!(back, want);
            }
        }
    }
}
