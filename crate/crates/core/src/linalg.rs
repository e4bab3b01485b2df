//! Exact integer linear algebra.
//!
//! Matrices are small and dense (at most a few dozen rows), so everything
//! works on `BigInt` entries with straightforward elimination. Pivots are
//! chosen by minimal absolute value to keep intermediate entries small.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Dense integer matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch { expected: rows * cols, found: data.len() });
        }
        Ok(IntMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows of equal length. An empty list gives a
    /// `0 x 0` matrix.
    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch { expected: cols, found: row.len() });
            }
            data.extend(row);
        }
        Ok(IntMatrix { rows: n, cols, data })
    }

    /// Convenience constructor from small integers. Panics on ragged input.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let rows = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        Self::from_rows(rows).expect("ragged rows")
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

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<BigInt> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.rows });
        }
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * &other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, found: v.len() });
        }
        Ok((0..self.rows).map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum()).collect())
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|r| (0..self.cols).all(|c| r == c || self[(r, c)].is_zero()))
    }

    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].clone()).collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// row[dst] += factor * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, factor: &BigInt) {
        for c in 0..self.cols {
            let v = &self[(src, c)] * factor;
            self[(dst, c)] += v;
        }
    }

    /// col[dst] += factor * col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, factor: &BigInt) {
        for r in 0..self.rows {
            let v = &self[(r, src)] * factor;
            self[(r, dst)] += v;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let v = -&self[(r, c)];
            self[(r, c)] = v;
        }
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;

    fn index(&self, (r, c): (usize, usize)) -> &BigInt {
        assert!(r < self.rows && c < self.cols, "index ({r}, {c}) out of bounds");
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut BigInt {
        assert!(r < self.rows && c < self.cols, "index ({r}, {c}) out of bounds");
        &mut self.data[r * self.cols + c]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self[(r, c)])?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Row-style Hermite normal form.
///
/// Returns `(H, U)` with `H = U * M` and `U` unimodular. `H` is in row
/// echelon form: each pivot is positive, and the entries above a pivot lie
/// in `[0, pivot)`. Zero rows (when `M` is rank deficient) come last.
pub fn hermite_normal_form(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let mut h = m.clone();
    let mut u = IntMatrix::identity(m.rows);
    let mut pivot_row = 0;
    for c in 0..m.cols {
        if pivot_row == m.rows {
            break;
        }
        while let Some(p) = min_abs_in_column(&h, c, pivot_row) {
            h.swap_rows(pivot_row, p);
            u.swap_rows(pivot_row, p);
            let mut cleared = true;
            for i in pivot_row + 1..m.rows {
                if h[(i, c)].is_zero() {
                    continue;
                }
                let q = h[(i, c)].div_floor(&h[(pivot_row, c)]);
                let neg_q = -q;
                h.add_row_multiple(i, pivot_row, &neg_q);
                u.add_row_multiple(i, pivot_row, &neg_q);
                if !h[(i, c)].is_zero() {
                    cleared = false;
                }
            }
            if cleared {
                break;
            }
        }
        if h[(pivot_row, c)].is_zero() {
            continue;
        }
        if h[(pivot_row, c)].is_negative() {
            h.negate_row(pivot_row);
            u.negate_row(pivot_row);
        }
        for i in 0..pivot_row {
            let q = h[(i, c)].div_floor(&h[(pivot_row, c)]);
            if !q.is_zero() {
                let neg_q = -q;
                h.add_row_multiple(i, pivot_row, &neg_q);
                u.add_row_multiple(i, pivot_row, &neg_q);
            }
        }
        pivot_row += 1;
    }
    (h, u)
}

fn min_abs_in_column(m: &IntMatrix, c: usize, from_row: usize) -> Option<usize> {
    (from_row..m.rows).filter(|&r| !m[(r, c)].is_zero()).min_by(|&a, &b| m[(a, c)].abs().cmp(&m[(b, c)].abs()))
}

/// `U * M * W = D` with `U`, `W` unimodular and `D` diagonal with
/// nonnegative entries `d_1 | d_2 | ...`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub w: IntMatrix,
    pub d: IntMatrix,
}

impl SmithDecomposition {
    /// Diagonal entries of `D`, in divisibility order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.d.diagonal()
    }
}

/// Smith normal form of a square nonsingular matrix.
pub fn smith_normal_form(m: &IntMatrix) -> Result<SmithDecomposition> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows, cols: m.cols });
    }
    let snf = smith_decompose(m);
    if snf.d.diagonal().iter().any(Zero::is_zero) {
        return Err(Error::SingularMatrix);
    }
    Ok(snf)
}

/// Smith normal form of an arbitrary (possibly rectangular or singular)
/// integer matrix. Zero invariant factors trail the nonzero ones.
pub fn smith_decompose(m: &IntMatrix) -> SmithDecomposition {
    let mut a = m.clone();
    let mut u = IntMatrix::identity(m.rows);
    let mut w = IntMatrix::identity(m.cols);
    let steps = m.rows.min(m.cols);
    for t in 0..steps {
        loop {
            let pivot = (t..m.rows)
                .flat_map(|r| (t..m.cols).map(move |c| (r, c)))
                .filter(|&(r, c)| !a[(r, c)].is_zero())
                .min_by(|&(r1, c1), &(r2, c2)| a[(r1, c1)].abs().cmp(&a[(r2, c2)].abs()));
            let Some((pr, pc)) = pivot else {
                // remaining block is zero
                return SmithDecomposition { u, w, d: a };
            };
            a.swap_rows(t, pr);
            u.swap_rows(t, pr);
            a.swap_cols(t, pc);
            w.swap_cols(t, pc);

            let mut cleared = true;
            for i in t + 1..m.rows {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let q = -a[(i, t)].div_floor(&a[(t, t)]);
                a.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                cleared &= a[(i, t)].is_zero();
            }
            for j in t + 1..m.cols {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let q = -a[(t, j)].div_floor(&a[(t, t)]);
                a.add_col_multiple(j, t, &q);
                w.add_col_multiple(j, t, &q);
                cleared &= a[(t, j)].is_zero();
            }
            if !cleared {
                continue;
            }
            // enforce d_t | every entry of the trailing block
            let offender = (t + 1..m.rows).find(|&i| (t + 1..m.cols).any(|j| !a[(i, j)].is_multiple_of(&a[(t, t)])));
            match offender {
                Some(i) => {
                    let one = BigInt::one();
                    a.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if a[(t, t)].is_negative() {
            a.negate_row(t);
            u.negate_row(t);
        }
    }
    SmithDecomposition { u, w, d: a }
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn det(m: &IntMatrix) -> Result<BigInt> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows, cols: m.cols });
    }
    let n = m.rows;
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut a = m.clone();
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[(k, k)].is_zero() {
            match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                Some(i) => {
                    a.swap_rows(k, i);
                    negate = !negate;
                }
                None => return Ok(BigInt::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                a[(i, j)] = v;
            }
        }
        prev = a[(k, k)].clone();
    }
    let d = a[(n - 1, n - 1)].clone();
    Ok(if negate { -d } else { d })
}

/// Exact solution of `M x = b` for square nonsingular `M`.
pub fn solve_rational(m: &IntMatrix, b: &[BigInt]) -> Result<Vec<BigRational>> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows, cols: m.cols });
    }
    let n = m.rows;
    if b.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: b.len() });
    }
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|r| m.row(r).iter().chain(std::iter::once(&b[r])).map(|x| BigRational::from_integer(x.clone())).collect())
        .collect();
    for k in 0..n {
        let p = (k..n).find(|&i| !a[i][k].is_zero()).ok_or(Error::SingularMatrix)?;
        a.swap(k, p);
        let pivot = a[k][k].clone();
        for x in &mut a[k][k..=n] {
            *x = &*x / &pivot;
        }
        let pivot_row = a[k].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == k || row[k].is_zero() {
                continue;
            }
            let f = row[k].clone();
            for (x, v) in row[k..=n].iter_mut().zip(&pivot_row[k..=n]) {
                *x -= v * &f;
            }
        }
    }
    Ok(a.into_iter().map(|row| row[n].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Laplace expansion along the first row; independent of Bareiss.
    fn cofactor_det(m: &IntMatrix) -> BigInt {
        let n = m.rows();
        if n == 0 {
            return BigInt::one();
        }
        let mut total = BigInt::zero();
        for c in 0..n {
            if m[(0, c)].is_zero() {
                continue;
            }
            let minor_rows: Vec<Vec<BigInt>> =
                (1..n).map(|r| (0..n).filter(|&j| j != c).map(|j| m[(r, j)].clone()).collect()).collect();
            let minor = IntMatrix::from_rows(minor_rows).unwrap();
            let term = &m[(0, c)] * cofactor_det(&minor);
            if c % 2 == 0 {
                total += term;
            } else {
                total -= term;
            }
        }
        total
    }

    fn prop43_homogenized() -> IntMatrix {
        // columns: 0, e1..e4, (1,4,7,8,9), each with a trailing 1
        IntMatrix::from_i64(&[
            &[0, 1, 0, 0, 0, 1],
            &[0, 0, 1, 0, 0, 4],
            &[0, 0, 0, 1, 0, 7],
            &[0, 0, 0, 0, 1, 8],
            &[0, 0, 0, 0, 0, 9],
            &[1, 1, 1, 1, 1, 1],
        ])
    }

    fn is_row_hnf(h: &IntMatrix) -> bool {
        let mut last_pivot: Option<usize> = None;
        let mut seen_zero_row = false;
        for r in 0..h.rows() {
            let lead = (0..h.cols()).find(|&c| !h[(r, c)].is_zero());
            match lead {
                None => seen_zero_row = true,
                Some(c) => {
                    if seen_zero_row || last_pivot.is_some_and(|p| c <= p) {
                        return false;
                    }
                    if !h[(r, c)].is_positive() {
                        return false;
                    }
                    for i in 0..r {
                        if h[(i, c)].is_negative() || h[(i, c)] >= h[(r, c)] {
                            return false;
                        }
                    }
                    last_pivot = Some(c);
                }
            }
        }
        true
    }

    #[test]
    fn hnf_identity() {
        let id = IntMatrix::identity(3);
        let (h, u) = hermite_normal_form(&id);
        assert_eq!(h, id);
        assert_eq!(u, id);
    }

    #[test]
    fn hnf_diagonal_is_fixed() {
        let m = IntMatrix::from_i64(&[&[2, 0], &[0, 3]]);
        let (h, u) = hermite_normal_form(&m);
        assert_eq!(h, m);
        assert_eq!(u, IntMatrix::identity(2));
    }

    #[test]
    fn hnf_prop43_homogenized() {
        let m = prop43_homogenized();
        assert_eq!(cofactor_det(&m).abs(), BigInt::from(9));
        let (h, u) = hermite_normal_form(&m);
        assert!(is_row_hnf(&h));
        assert_eq!(u.mul(&m).unwrap(), h);
        assert_eq!(det(&h).unwrap().abs(), BigInt::from(9));
        assert_eq!(det(&u).unwrap().abs(), BigInt::one());
    }

    #[test]
    fn snf_examples() {
        let snf = smith_normal_form(&IntMatrix::identity(4)).unwrap();
        assert_eq!(snf.d, IntMatrix::identity(4));

        let m = IntMatrix::from_i64(&[&[2, 0], &[0, 4]]);
        let snf = smith_normal_form(&m).unwrap();
        assert_eq!(snf.invariant_factors(), vec![BigInt::from(2), BigInt::from(4)]);

        // homogenized conv((0,0),(1,0),(1,2))
        let m = IntMatrix::from_i64(&[&[0, 1, 1], &[0, 0, 2], &[1, 1, 1]]);
        assert_eq!(cofactor_det(&m).abs(), BigInt::from(2));
        let snf = smith_normal_form(&m).unwrap();
        let ones = |x: i64| BigInt::from(x);
        assert_eq!(snf.invariant_factors(), vec![ones(1), ones(1), ones(2)]);
        let umw = snf.u.mul(&m).unwrap().mul(&snf.w).unwrap();
        assert_eq!(umw, snf.d);
    }

    #[test]
    fn snf_fixes_divisibility() {
        let m = IntMatrix::from_i64(&[&[2, 0], &[0, 3]]);
        let snf = smith_normal_form(&m).unwrap();
        assert_eq!(snf.invariant_factors(), vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn snf_singular_rejected() {
        let m = IntMatrix::from_i64(&[&[1, 2], &[2, 4]]);
        assert_eq!(smith_normal_form(&m), Err(Error::SingularMatrix));
    }

    #[test]
    fn snf_rectangular() {
        let m = IntMatrix::from_i64(&[&[0, 4, 7, 8, 9]]);
        let snf = smith_decompose(&m);
        assert_eq!(snf.invariant_factors(), vec![BigInt::one()]);
        assert_eq!(snf.u.mul(&m).unwrap().mul(&snf.w).unwrap(), snf.d);
    }

    #[test]
    fn det_examples() {
        assert_eq!(det(&IntMatrix::identity(5)).unwrap(), BigInt::one());
        assert_eq!(det(&IntMatrix::from_i64(&[&[2, 0], &[0, 3]])).unwrap(), BigInt::from(6));
        assert_eq!(det(&prop43_homogenized()).unwrap().abs(), BigInt::from(9));
        assert_eq!(det(&IntMatrix::zeros(0, 0)).unwrap(), BigInt::one());
        assert!(det(&IntMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn solve_examples() {
        let b: Vec<BigInt> = [3, -1, 7].iter().map(|&x| BigInt::from(x)).collect();
        let x = solve_rational(&IntMatrix::identity(3), &b).unwrap();
        assert_eq!(x, b.iter().cloned().map(BigRational::from_integer).collect::<Vec<_>>());

        let x = solve_rational(&IntMatrix::from_i64(&[&[2]]), &[BigInt::one()]).unwrap();
        assert_eq!(x, vec![BigRational::new(1.into(), 2.into())]);

        let m = IntMatrix::from_i64(&[&[0, 1, 1], &[0, 0, 2], &[1, 1, 1]]);
        let ones = vec![BigInt::one(); 3];
        let x = solve_rational(&m, &ones).unwrap();
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(x, vec![BigRational::zero(), half.clone(), half]);

        let singular = IntMatrix::from_i64(&[&[1, 2], &[2, 4]]);
        assert_eq!(solve_rational(&singular, &[BigInt::one(), BigInt::one()]), Err(Error::SingularMatrix));
    }

    fn small_matrix(max_n: usize) -> impl Strategy<Value = IntMatrix> {
        (1..=max_n, 1..=max_n).prop_flat_map(|(r, c)| {
            proptest::collection::vec(-6i64..=6, r * c)
                .prop_map(move |v| IntMatrix::new(r, c, v.into_iter().map(BigInt::from).collect()).unwrap())
        })
    }

    fn square_matrix(max_n: usize) -> impl Strategy<Value = IntMatrix> {
        (1..=max_n).prop_flat_map(|n| {
            proptest::collection::vec(-6i64..=6, n * n)
                .prop_map(move |v| IntMatrix::new(n, n, v.into_iter().map(BigInt::from).collect()).unwrap())
        })
    }

    proptest! {
        #[test]
        fn smith_reconstructs(m in small_matrix(5)) {
            let snf = smith_decompose(&m);
            prop_assert_eq!(snf.u.mul(&m).unwrap().mul(&snf.w).unwrap(), snf.d.clone());
            prop_assert!(snf.d.is_diagonal());
            prop_assert_eq!(det(&snf.u).unwrap().abs(), BigInt::one());
            prop_assert_eq!(det(&snf.w).unwrap().abs(), BigInt::one());
            let diag = snf.invariant_factors();
            prop_assert!(diag.iter().all(|x| !x.is_negative()));
            for pair in diag.windows(2) {
                prop_assert!(pair[1].is_multiple_of(&pair[0]) || pair[0].is_zero() && pair[1].is_zero());
            }
        }

        #[test]
        fn det_matches_cofactor_and_smith(m in square_matrix(5)) {
            let d = det(&m).unwrap();
            prop_assert_eq!(&d, &cofactor_det(&m));
            let prod: BigInt = smith_decompose(&m).invariant_factors().iter().product();
            prop_assert_eq!(d.abs(), prod);
        }

        #[test]
        fn hnf_is_idempotent(m in small_matrix(5)) {
            let (h, u) = hermite_normal_form(&m);
            prop_assert!(is_row_hnf(&h));
            prop_assert_eq!(u.mul(&m).unwrap(), h.clone());
            prop_assert_eq!(det(&u).unwrap().abs(), BigInt::one());
            let (h2, _) = hermite_normal_form(&h);
            prop_assert_eq!(h2, h);
        }

        #[test]
        fn solve_substitutes_back(m in square_matrix(4), b in proptest::collection::vec(-9i64..=9, 4)) {
            let b: Vec<BigInt> = b.into_iter().take(m.rows()).map(BigInt::from).collect();
            match solve_rational(&m, &b) {
                Ok(x) => {
                    for (r, br) in b.iter().enumerate() {
                        let lhs: BigRational = m.row(r).iter().zip(&x)
                            .map(|(a, xi)| BigRational::from_integer(a.clone()) * xi)
                            .sum();
                        prop_assert_eq!(lhs, BigRational::from_integer(br.clone()));
                    }
                }
                Err(e) => {
                    prop_assert_eq!(e, Error::SingularMatrix);
                    prop_assert!(det(&m).unwrap().is_zero());
                }
            }
        }
    }
}
