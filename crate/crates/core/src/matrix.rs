//! 2x2 matrices over a field, plus small dense linear algebra on
//! `Vec<Vec<Scalar>>` (row-major).

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num::BigRational;

use crate::field::{Field, Scalar};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat2 {
    pub a: Scalar,
    pub b: Scalar,
    pub c: Scalar,
    pub d: Scalar,
}

impl Mat2 {
    pub fn new(a: Scalar, b: Scalar, c: Scalar, d: Scalar) -> Mat2 {
        Mat2 { a, b, c, d }
    }

    pub fn from_rationals(field: &Field, e: [BigRational; 4]) -> Mat2 {
        let [a, b, c, d] = e;
        Mat2::new(
            field.from_rational(a),
            field.from_rational(b),
            field.from_rational(c),
            field.from_rational(d),
        )
    }

    pub fn from_ints(field: &Field, e: [i64; 4]) -> Mat2 {
        Mat2::new(
            field.int(e[0]),
            field.int(e[1]),
            field.int(e[2]),
            field.int(e[3]),
        )
    }

    pub fn identity(field: &Field) -> Mat2 {
        Mat2::from_ints(field, [1, 0, 0, 1])
    }

    pub fn zero(field: &Field) -> Mat2 {
        Mat2::from_ints(field, [0, 0, 0, 0])
    }

    pub fn scalar(x: &Scalar) -> Mat2 {
        let z = x.field().zero();
        Mat2::new(x.clone(), z.clone(), z, x.clone())
    }

    /// Matrix unit `e_ij` (0-based).
    pub fn unit(field: &Field, i: usize, j: usize) -> Mat2 {
        let mut e = [0; 4];
        e[2 * i + j] = 1;
        Mat2::from_ints(field, e)
    }

    pub fn field(&self) -> &Field {
        self.a.field()
    }

    pub fn trace(&self) -> Scalar {
        &self.a + &self.d
    }

    pub fn det(&self) -> Scalar {
        &(&self.a * &self.d) - &(&self.b * &self.c)
    }

    pub fn inv(&self) -> Option<Mat2> {
        let det = self.det().inv()?;
        Some(Mat2::new(
            &self.d * &det,
            -&(&self.b * &det),
            -&(&self.c * &det),
            &self.a * &det,
        ))
    }

    pub fn scale(&self, x: &Scalar) -> Mat2 {
        Mat2::new(&self.a * x, &self.b * x, &self.c * x, &self.d * x)
    }

    pub fn is_central(&self) -> bool {
        self.b.is_zero() && self.c.is_zero() && self.a == self.d
    }

    /// Integral over the valuation ring: trace and determinant integral.
    pub fn is_integral(&self) -> bool {
        self.trace().is_integral() && self.det().is_integral()
    }

    /// Entries `(a, b, c, d)` as a vector in the 4-dimensional algebra.
    pub fn to_vec(&self) -> Vec<Scalar> {
        vec![
            self.a.clone(),
            self.b.clone(),
            self.c.clone(),
            self.d.clone(),
        ]
    }

    pub fn from_vec(v: &[Scalar]) -> Mat2 {
        Mat2::new(v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone())
    }

    /// Matrix-vector product.
    pub fn apply(&self, x: &[Scalar]) -> Vec<Scalar> {
        vec![
            &(&self.a * &x[0]) + &(&self.b * &x[1]),
            &(&self.c * &x[0]) + &(&self.d * &x[1]),
        ]
    }

    pub fn map(&self, f: impl Fn(&Scalar) -> Scalar) -> Mat2 {
        Mat2::new(f(&self.a), f(&self.b), f(&self.c), f(&self.d))
    }

    /// Matrix whose columns are `x` and `y`.
    pub fn from_columns(x: &[Scalar], y: &[Scalar]) -> Mat2 {
        Mat2::new(x[0].clone(), y[0].clone(), x[1].clone(), y[1].clone())
    }

    pub fn columns(&self) -> [Vec<Scalar>; 2] {
        [
            vec![self.a.clone(), self.c.clone()],
            vec![self.b.clone(), self.d.clone()],
        ]
    }
}

impl fmt::Debug for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

impl Mul for &Mat2 {
    type Output = Mat2;
    fn mul(self, o: &Mat2) -> Mat2 {
        Mat2::new(
            &(&self.a * &o.a) + &(&self.b * &o.c),
            &(&self.a * &o.b) + &(&self.b * &o.d),
            &(&self.c * &o.a) + &(&self.d * &o.c),
            &(&self.c * &o.b) + &(&self.d * &o.d),
        )
    }
}

impl Add for &Mat2 {
    type Output = Mat2;
    fn add(self, o: &Mat2) -> Mat2 {
        Mat2::new(
            &self.a + &o.a,
            &self.b + &o.b,
            &self.c + &o.c,
            &self.d + &o.d,
        )
    }
}

impl Sub for &Mat2 {
    type Output = Mat2;
    fn sub(self, o: &Mat2) -> Mat2 {
        Mat2::new(
            &self.a - &o.a,
            &self.b - &o.b,
            &self.c - &o.c,
            &self.d - &o.d,
        )
    }
}

/// Inverse of a square matrix by Gauss-Jordan elimination.
pub fn inverse(m: &[Vec<Scalar>]) -> Option<Vec<Vec<Scalar>>> {
    let n = m.len();
    let field = m[0][0].field().clone();
    let mut a: Vec<Vec<Scalar>> = m.to_vec();
    let mut inv: Vec<Vec<Scalar>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { field.one() } else { field.zero() })
                .collect()
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        inv.swap(col, piv);
        let s = a[col][col].inv()?;
        for j in 0..n {
            a[col][j] = &a[col][j] * &s;
            inv[col][j] = &inv[col][j] * &s;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for j in 0..n {
                let t = &f * &a[col][j];
                a[r][j] = &a[r][j] - &t;
                let t = &f * &inv[col][j];
                inv[r][j] = &inv[r][j] - &t;
            }
        }
    }
    Some(inv)
}

/// Rank of a list of vectors.
pub fn rank(vectors: &[Vec<Scalar>]) -> usize {
    let mut rows: Vec<Vec<Scalar>> = vectors.to_vec();
    let Some(n) = rows.first().map(|r| r.len()) else {
        return 0;
    };
    let mut r = 0;
    for col in 0..n {
        let Some(piv) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, piv);
        let s = rows[r][col].inv().unwrap();
        for i in 0..rows.len() {
            if i == r || rows[i][col].is_zero() {
                continue;
            }
            let f = &rows[i][col] * &s;
            for j in col..n {
                let t = &f * &rows[r][j];
                rows[i][j] = &rows[i][j] - &t;
            }
        }
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    r
}

/// Product of row-major matrices.
pub fn mat_mul(a: &[Vec<Scalar>], b: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    let field = a[0][0].field().clone();
    let (n, k, m) = (a.len(), b.len(), b[0].len());
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let mut s = field.zero();
                    for t in 0..k {
                        if !a[i][t].is_zero() && !b[t][j].is_zero() {
                            s = &s + &(&a[i][t] * &b[t][j]);
                        }
                    }
                    s
                })
                .collect()
        })
        .collect()
}

pub fn transpose(a: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    let (n, m) = (a.len(), a[0].len());
    (0..m)
        .map(|j| (0..n).map(|i| a[i][j].clone()).collect())
        .collect()
}

/// Determinant by elimination.
pub fn det(m: &[Vec<Scalar>]) -> Scalar {
    let n = m.len();
    let field = m[0][0].field().clone();
    let mut a = m.to_vec();
    let mut out = field.one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return field.zero();
        };
        if piv != col {
            a.swap(col, piv);
            out = -&out;
        }
        out = &out * &a[col][col];
        let s = a[col][col].inv().unwrap();
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] * &s;
            for j in col..n {
                let t = &f * &a[col][j];
                a[r][j] = &a[r][j] - &t;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mat2_arithmetic() {
        let k = Field::base(3).unwrap();
        let u = Mat2::from_ints(&k, [0, 1, 3, 0]);
        assert_eq!(&u * &u, Mat2::scalar(&k.int(3)));
        assert_eq!(u.det(), k.int(-3));
        assert_eq!(&u * &u.inv().unwrap(), Mat2::identity(&k));
        assert!(Mat2::scalar(&k.int(2)).is_central());
    }

    #[test]
    fn dense_inverse_and_det() {
        let k = Field::base(2).unwrap();
        let m: Vec<Vec<Scalar>> = [[2, 1, 0], [0, 1, 4], [1, 0, 1]]
            .iter()
            .map(|r| r.iter().map(|&x| k.int(x)).collect())
            .collect();
        let inv = inverse(&m).unwrap();
        let id = mat_mul(&m, &inv);
        for (i, row) in id.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                assert_eq!(*x, k.int((i == j) as i64));
            }
        }
        // 2*(1-0) - 1*(0-4) + 0 = 6
        assert_eq!(det(&m), k.int(6));
        assert_eq!(rank(&m), 3);
        assert_eq!(rank(&[m[0].clone(), m[0].clone()]), 1);
    }
}
