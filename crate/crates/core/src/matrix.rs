//! Integer matrix normal forms (Hermite, Smith) and exact rational solving.
//!
//! Lattices are stored as *row spans* of integer matrices. The Hermite
//! normal form used here is the row-style upper echelon form: pivots move
//! strictly right, pivots are positive, and entries above a pivot are
//! reduced into `[0, pivot)`.

use crate::rat::{QQ, ZZ};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZMat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<ZZ>,
}

impl ZMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        ZMat { rows, cols, data: vec![ZZ::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = ZMat::zero(n, n);
        for i in 0..n {
            m[(i, i)] = ZZ::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<ZZ>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |v| v.len());
        assert!(rows.iter().all(|v| v.len() == c), "ragged rows");
        ZMat { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn row(&self, i: usize) -> &[ZZ] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for c in 0..self.cols {
            let idx = i * self.cols + c;
            let v = std::mem::take(&mut self.data[idx]);
            self.data[idx] = -v;
        }
    }

    /// row[i] -= q * row[j]
    fn submul_row(&mut self, i: usize, j: usize, q: &ZZ) {
        if q.is_zero() {
            return;
        }
        for c in 0..self.cols {
            let sub = q * &self.data[j * self.cols + c];
            self.data[i * self.cols + c] -= sub;
        }
    }

    pub fn is_zero_row(&self, i: usize) -> bool {
        self.row(i).iter().all(|x| x.is_zero())
    }

    /// Row Hermite normal form together with a unimodular transform `U`
    /// such that `U * self == hnf` (as row operations).
    pub fn hnf_with_transform(&self) -> (ZMat, ZMat) {
        let mut h = self.clone();
        let mut u = ZMat::identity(self.rows);
        let mut r = 0usize;
        for c in 0..h.cols {
            if r == h.rows {
                break;
            }
            // gcd-reduce column c below row r
            loop {
                let mut piv: Option<usize> = None;
                for i in r..h.rows {
                    if !h[(i, c)].is_zero() {
                        piv = match piv {
                            Some(p) if h[(p, c)].abs() <= h[(i, c)].abs() => Some(p),
                            _ => Some(i),
                        };
                    }
                }
                let Some(p) = piv else { break };
                h.swap_rows(r, p);
                u.swap_rows(r, p);
                let mut again = false;
                for i in (r + 1)..h.rows {
                    if !h[(i, c)].is_zero() {
                        let q = h[(i, c)].div_floor(&h[(r, c)]);
                        h.submul_row(i, r, &q);
                        u.submul_row(i, r, &q);
                        if !h[(i, c)].is_zero() {
                            again = true;
                        }
                    }
                }
                if !again {
                    break;
                }
            }
            if r < h.rows && !h[(r, c)].is_zero() {
                if h[(r, c)].is_negative() {
                    h.negate_row(r);
                    u.negate_row(r);
                }
                for i in 0..r {
                    let q = h[(i, c)].div_floor(&h[(r, c)]);
                    h.submul_row(i, r, &q);
                    u.submul_row(i, r, &q);
                }
                r += 1;
            }
        }
        (h, u)
    }

    pub fn hnf(&self) -> ZMat {
        self.hnf_with_transform().0
    }

    /// Nonzero rows of the HNF: a canonical basis of the row span.
    pub fn hnf_basis(&self) -> ZMat {
        let h = self.hnf();
        let rows: Vec<Vec<ZZ>> = (0..h.rows)
            .filter(|&i| !h.is_zero_row(i))
            .map(|i| h.row(i).to_vec())
            .collect();
        if rows.is_empty() {
            ZMat::zero(0, h.cols)
        } else {
            ZMat::from_rows(rows)
        }
    }

    pub fn rank(&self) -> usize {
        self.hnf_basis().rows
    }

    /// Basis of the left kernel `{ x : x * self = 0 }`.
    pub fn left_kernel(&self) -> ZMat {
        let (h, u) = self.hnf_with_transform();
        let rows: Vec<Vec<ZZ>> = (0..h.rows)
            .filter(|&i| h.is_zero_row(i))
            .map(|i| u.row(i).to_vec())
            .collect();
        if rows.is_empty() {
            ZMat::zero(0, self.rows)
        } else {
            ZMat::from_rows(rows)
        }
    }

    /// Solve `x * self == v` in integers, `self` in row HNF with no zero rows.
    pub fn solve_echelon(&self, v: &[ZZ]) -> Option<Vec<ZZ>> {
        assert_eq!(v.len(), self.cols);
        let mut v = v.to_vec();
        let mut x = vec![ZZ::zero(); self.rows];
        for i in 0..self.rows {
            let p = (0..self.cols).find(|&c| !self[(i, c)].is_zero())?;
            let (q, rem) = v[p].div_rem(&self[(i, p)]);
            if !rem.is_zero() {
                return None;
            }
            for c in 0..self.cols {
                let sub = &q * &self[(i, c)];
                v[c] -= sub;
            }
            x[i] = q;
        }
        if v.iter().all(|t| t.is_zero()) {
            Some(x)
        } else {
            None
        }
    }

    /// Solve `x * self == v` over the rationals, `self` in row HNF with no
    /// zero rows (rank = rows). `v` must lie in the rational row span.
    pub fn solve_echelon_q(&self, v: &[QQ]) -> Option<Vec<QQ>> {
        assert_eq!(v.len(), self.cols);
        let mut v = v.to_vec();
        let mut x = vec![QQ::zero(); self.rows];
        for i in 0..self.rows {
            let p = (0..self.cols).find(|&c| !self[(i, c)].is_zero())?;
            let q = &v[p] / QQ::from_integer(self[(i, p)].clone());
            for c in 0..self.cols {
                let sub = &q * QQ::from_integer(self[(i, c)].clone());
                v[c] -= sub;
            }
            x[i] = q;
        }
        if v.iter().all(|t| t.is_zero()) {
            Some(x)
        } else {
            None
        }
    }

    /// Solve `x * self == v` for `x` in `Z^rows`: returns a particular
    /// solution together with a basis of the homogeneous solutions
    /// (the left kernel).
    pub fn solve_left(&self, v: &[ZZ]) -> Option<(Vec<ZZ>, ZMat)> {
        let (h, u) = self.hnf_with_transform();
        let nonzero: Vec<usize> = (0..h.rows).filter(|&i| !h.is_zero_row(i)).collect();
        let kernel_rows: Vec<Vec<ZZ>> = (0..h.rows)
            .filter(|&i| h.is_zero_row(i))
            .map(|i| u.row(i).to_vec())
            .collect();
        let basis = if nonzero.is_empty() {
            if !v.iter().all(|t| t.is_zero()) {
                return None;
            }
            let kernel = if kernel_rows.is_empty() {
                ZMat::zero(0, self.rows)
            } else {
                ZMat::from_rows(kernel_rows)
            };
            return Some((vec![ZZ::zero(); self.rows], kernel));
        } else {
            ZMat::from_rows(nonzero.iter().map(|&i| h.row(i).to_vec()).collect())
        };
        let z = basis.solve_echelon(v)?;
        let mut x = vec![ZZ::zero(); self.rows];
        for (k, &i) in nonzero.iter().enumerate() {
            for c in 0..self.rows {
                let add = &z[k] * &u[(i, c)];
                x[c] += add;
            }
        }
        let kernel = if kernel_rows.is_empty() {
            ZMat::zero(0, self.rows)
        } else {
            ZMat::from_rows(kernel_rows)
        };
        Some((x, kernel))
    }

    /// Smith normal form: returns `(d, u, v)` with `u * self * v` diagonal
    /// with entries `d[0] | d[1] | ...`, `u`, `v` unimodular.
    pub fn snf_with_transforms(&self) -> (Vec<ZZ>, ZMat, ZMat) {
        let mut a = self.clone();
        let mut u = ZMat::identity(a.rows);
        let mut v = ZMat::identity(a.cols);
        let n = a.rows.min(a.cols);
        let mut t = 0usize;
        while t < n {
            // find a nonzero pivot in the remaining block
            let mut piv: Option<(usize, usize)> = None;
            for i in t..a.rows {
                for j in t..a.cols {
                    if !a[(i, j)].is_zero() {
                        piv = match piv {
                            Some((pi, pj)) if a[(pi, pj)].abs() <= a[(i, j)].abs() => Some((pi, pj)),
                            _ => Some((i, j)),
                        };
                    }
                }
            }
            let Some((pi, pj)) = piv else { break };
            a.swap_rows(t, pi);
            u.swap_rows(t, pi);
            a.swap_cols(t, pj);
            v.swap_cols_of_right_transform(t, pj);
            // clear row and column t
            let mut dirty = true;
            while dirty {
                dirty = false;
                for i in (t + 1)..a.rows {
                    if !a[(i, t)].is_zero() {
                        let q = a[(i, t)].div_floor(&a[(t, t)]);
                        a.submul_row(i, t, &q);
                        u.submul_row(i, t, &q);
                        if !a[(i, t)].is_zero() {
                            // remainder smaller than pivot: swap up and retry
                            a.swap_rows(t, i);
                            u.swap_rows(t, i);
                            dirty = true;
                        }
                    }
                }
                for j in (t + 1)..a.cols {
                    if !a[(t, j)].is_zero() {
                        let q = a[(t, j)].div_floor(&a[(t, t)]);
                        a.submul_col(j, t, &q);
                        v.submul_col(j, t, &q);
                        if !a[(t, j)].is_zero() {
                            a.swap_cols(t, j);
                            v.swap_cols_of_right_transform(t, j);
                            dirty = true;
                        }
                    }
                }
            }
            if a[(t, t)].is_negative() {
                a.negate_row(t);
                u.negate_row(t);
            }
            t += 1;
        }
        // enforce divisibility d[i] | d[j] for i < j by replacing each bad
        // pair with (gcd, lcm) through explicit unimodular operations:
        //   R_i += R_j;  C_i, C_j Bezout-mixed;  R_j -= (y*d_j/g) R_i
        let mut changed = true;
        while changed {
            changed = false;
            for i in 0..t {
                for j in (i + 1)..t {
                    let di = a[(i, i)].clone();
                    let dj = a[(j, j)].clone();
                    if di.is_zero() || (&dj % &di).is_zero() {
                        continue;
                    }
                    changed = true;
                    let e = di.extended_gcd(&dj);
                    let (g, x, y) = (e.gcd, e.x, e.y);
                    let l = &di * &dj / &g;
                    // row i += row j
                    for c in 0..a.cols {
                        let add = a[(j, c)].clone();
                        a[(i, c)] += add;
                    }
                    for c in 0..u.cols {
                        let add = u[(j, c)].clone();
                        u[(i, c)] += add;
                    }
                    // columns: new c_i = x c_i + y c_j, new c_j = (-dj/g) c_i + (di/g) c_j
                    let (ci_coef, cj_coef) = (-(&dj / &g), &di / &g);
                    for r in 0..a.rows {
                        let old_i = a[(r, i)].clone();
                        let old_j = a[(r, j)].clone();
                        a[(r, i)] = &x * &old_i + &y * &old_j;
                        a[(r, j)] = &ci_coef * &old_i + &cj_coef * &old_j;
                    }
                    for r in 0..v.rows {
                        let old_i = v[(r, i)].clone();
                        let old_j = v[(r, j)].clone();
                        v[(r, i)] = &x * &old_i + &y * &old_j;
                        v[(r, j)] = &ci_coef * &old_i + &cj_coef * &old_j;
                    }
                    // row j -= (y*dj/g) * row i
                    let q = &y * &dj / &g;
                    a.submul_row(j, i, &q);
                    u.submul_row(j, i, &q);
                    debug_assert_eq!(a[(i, i)], g);
                    debug_assert_eq!(a[(j, j)], l);
                    debug_assert!(a[(i, j)].is_zero() && a[(j, i)].is_zero());
                }
            }
        }
        let d = (0..n).map(|i| a[(i, i)].clone()).collect();
        (d, u, v)
    }

    pub fn snf_diagonal(&self) -> Vec<ZZ> {
        self.snf_with_transforms().0
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + i, r * self.cols + j);
        }
    }

    fn swap_cols_of_right_transform(&mut self, i: usize, j: usize) {
        self.swap_cols(i, j);
    }

    /// col[i] -= q * col[j]
    fn submul_col(&mut self, i: usize, j: usize, q: &ZZ) {
        if q.is_zero() {
            return;
        }
        for r in 0..self.rows {
            let sub = q * &self.data[r * self.cols + j];
            self.data[r * self.cols + i] -= sub;
        }
    }

    pub fn matmul(&self, other: &ZMat) -> ZMat {
        assert_eq!(self.cols, other.rows);
        let mut out = ZMat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let add = &self[(i, k)] * &other[(k, j)];
                    out[(i, j)] += add;
                }
            }
        }
        out
    }

    /// Absolute determinant of a square full-rank matrix via HNF pivots.
    pub fn abs_det(&self) -> ZZ {
        assert_eq!(self.rows, self.cols);
        let h = self.hnf();
        let mut d = ZZ::one();
        for i in 0..h.rows {
            d *= &h[(i, i)];
        }
        d.abs()
    }
}

impl std::ops::Index<(usize, usize)> for ZMat {
    type Output = ZZ;
    fn index(&self, (i, j): (usize, usize)) -> &ZZ {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ZMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut ZZ {
        &mut self.data[i * self.cols + j]
    }
}

/// Exact Gaussian elimination determinant of a square rational matrix.
pub fn q_det(m: &[Vec<QQ>]) -> QQ {
    let n = m.len();
    let mut a: Vec<Vec<QQ>> = m.to_vec();
    let mut det = QQ::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
            return QQ::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= a[c][c].clone();
        let inv = a[c][c].clone();
        for r in (c + 1)..n {
            if a[r][c].is_zero() {
                continue;
            }
            let f = &a[r][c] / &inv;
            for k in c..n {
                let sub = &f * &a[c][k];
                a[r][k] -= sub;
            }
        }
    }
    det
}

/// Solve the square rational system `A x = b`; `None` when `A` is singular.
pub fn q_solve(a: &[Vec<QQ>], b: &[QQ]) -> Option<Vec<QQ>> {
    let n = a.len();
    assert_eq!(b.len(), n);
    let mut m: Vec<Vec<QQ>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !m[r][c].is_zero())?;
        m.swap(p, c);
        let inv = m[c][c].clone();
        for k in c..=n {
            m[c][k] = &m[c][k] / &inv;
        }
        for r in 0..n {
            if r != c && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                for k in c..=n {
                    let sub = &f * &m[c][k];
                    m[r][k] -= sub;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[n].clone()).collect())
}
