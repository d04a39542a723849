//! Full lattices over the valuation ring in canonical column-Hermite form.
//!
//! The basis is stored by columns. Column `j` has zeros below row `j`, its
//! diagonal entry is `π^{a_j}`, and every entry above the diagonal in row
//! `i` is the canonical representative modulo `π^{a_i}`.

use std::fmt;
use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::matrix;

pub type Vector = Vec<Scalar>;

#[derive(Clone, PartialEq, Eq)]
pub struct Lattice {
    field: Field,
    basis: Vec<Vector>,
}

impl Hash for Lattice {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.basis.hash(state);
    }
}

impl PartialOrd for Lattice {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Lattice {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.basis.cmp(&other.basis)
    }
}

impl fmt::Debug for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.basis.iter()).finish()
    }
}

fn axpy(y: &mut [Scalar], a: &Scalar, x: &[Scalar]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        if !xi.is_zero() {
            *yi = &*yi + &(a * xi);
        }
    }
}

/// Canonical column-Hermite basis of the lattice spanned by `gens` in
/// dimension `n`.
pub fn hnf(field: &Field, n: usize, gens: &[Vector]) -> Result<Lattice> {
    for g in gens {
        if g.len() != n {
            return Err(Error::DimensionMismatch(g.len(), n));
        }
    }
    let mut work: Vec<Vector> = gens
        .iter()
        .filter(|g| g.iter().any(|x| !x.is_zero()))
        .cloned()
        .collect();
    let mut cols: Vec<Option<Vector>> = vec![None; n];
    let mut diag = vec![0i64; n];
    for i in (0..n).rev() {
        let best = work
            .iter()
            .enumerate()
            .filter_map(|(k, g)| g[i].val().map(|v| (v, k)))
            .min();
        let Some((v, k)) = best else {
            return Err(Error::NotFullRank);
        };
        let mut piv = work.swap_remove(k);
        let s = &field.pi_pow(v) * &piv[i].inv().unwrap();
        for x in piv.iter_mut() {
            *x = &*x * &s;
        }
        let piv_inv = piv[i].inv().unwrap();
        for g in work.iter_mut() {
            if g[i].is_zero() {
                continue;
            }
            let c = -&(&g[i] * &piv_inv);
            axpy(g, &c, &piv);
            g[i] = field.zero();
        }
        work.retain(|g| g.iter().any(|x| !x.is_zero()));
        diag[i] = v;
        cols[i] = Some(piv);
    }
    let mut basis: Vec<Vector> = cols.into_iter().map(Option::unwrap).collect();
    for j in 1..n {
        for i in (0..j).rev() {
            let c = basis[j][i].clone();
            if c.is_zero() {
                continue;
            }
            let r = c.mod_pi_pow(diag[i]);
            if r == c {
                continue;
            }
            let q = -&(&c - &r).div(&basis[i][i]);
            let (left, right) = basis.split_at_mut(j);
            axpy(&mut right[0], &q, &left[i]);
            right[0][i] = r;
        }
    }
    Ok(Lattice {
        field: field.clone(),
        basis,
    })
}

impl Lattice {
    /// `O^n`.
    pub fn standard(field: &Field, n: usize) -> Lattice {
        let basis = (0..n)
            .map(|j| {
                (0..n)
                    .map(|i| if i == j { field.one() } else { field.zero() })
                    .collect()
            })
            .collect();
        Lattice {
            field: field.clone(),
            basis,
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Basis columns.
    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    /// Exponents `a_i` of the diagonal entries `π^{a_i}`.
    pub fn diagonal_valuations(&self) -> Vec<i64> {
        (0..self.dim())
            .map(|i| self.basis[i][i].val().unwrap())
            .collect()
    }

    /// Coordinates of `x` in the basis, if `x` lies in the span (always).
    pub fn coordinates(&self, x: &[Scalar]) -> Vector {
        let n = self.dim();
        let mut x = x.to_vec();
        let mut c = vec![self.field.zero(); n];
        for i in (0..n).rev() {
            if x[i].is_zero() {
                continue;
            }
            let ci = x[i].div(&self.basis[i][i]);
            let neg = -&ci;
            axpy(&mut x[..=i], &neg, &self.basis[i][..=i]);
            c[i] = ci;
        }
        c
    }

    pub fn member(&self, x: &[Scalar]) -> bool {
        if x.len() != self.dim() {
            return false;
        }
        let n = self.dim();
        let mut x = x.to_vec();
        for i in (0..n).rev() {
            if x[i].is_zero() {
                continue;
            }
            let ci = x[i].div(&self.basis[i][i]);
            if !ci.is_integral() {
                return false;
            }
            let neg = -&ci;
            axpy(&mut x[..=i], &neg, &self.basis[i][..=i]);
        }
        true
    }

    /// Whether `other ⊆ self`.
    pub fn contains(&self, other: &Lattice) -> bool {
        other.dim() == self.dim() && other.basis.iter().all(|b| self.member(b))
    }

    fn check_dims(&self, other: &Lattice) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(self.dim(), other.dim()));
        }
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    pub fn sum(&self, other: &Lattice) -> Result<Lattice> {
        self.check_dims(other)?;
        let gens: Vec<Vector> = self.basis.iter().chain(&other.basis).cloned().collect();
        hnf(&self.field, self.dim(), &gens)
    }

    pub fn intersect(&self, other: &Lattice) -> Result<Lattice> {
        self.check_dims(other)?;
        if self == other {
            return Ok(self.clone());
        }
        let n = self.dim();
        let zero = vec![self.field.zero(); n];
        let mut gens = Vec::with_capacity(2 * n);
        for x in &self.basis {
            gens.push([x.clone(), x.clone()].concat());
        }
        for y in &other.basis {
            gens.push([zero.clone(), y.clone()].concat());
        }
        let stacked = hnf(&self.field, 2 * n, &gens)?;
        let top: Vec<Vector> = stacked.basis[..n].iter().map(|c| c[..n].to_vec()).collect();
        hnf(&self.field, n, &top)
    }

    /// `π^k L`.
    pub fn scale(&self, k: i64) -> Lattice {
        if k == 0 {
            return self.clone();
        }
        self.scale_by(&self.field.pi_pow(k))
    }

    /// `x L` for a nonzero scalar `x`.
    pub fn scale_by(&self, x: &Scalar) -> Lattice {
        let gens: Vec<Vector> = self
            .basis
            .iter()
            .map(|c| c.iter().map(|e| e * x).collect())
            .collect();
        hnf(&self.field, self.dim(), &gens).expect("scaling keeps full rank")
    }

    /// Length of `self / sub` in units of the residue field, i.e. the valuation
    /// of the determinant of the transition matrix.
    pub fn index_valuation(&self, sub: &Lattice) -> Result<i64> {
        self.check_dims(sub)?;
        if !self.contains(sub) {
            return Err(Error::NotContained);
        }
        let a: i64 = self.diagonal_valuations().iter().sum();
        let b: i64 = sub.diagonal_valuations().iter().sum();
        Ok(b - a)
    }

    /// Dual lattice under the bilinear form with Gram matrix `pairing` on the
    /// ambient coordinates: `{x : xᵀ P b ∈ O for all b ∈ L}`.
    pub fn dual(&self, pairing: &[Vec<Scalar>]) -> Lattice {
        let n = self.dim();
        let bt = self.basis.clone(); // rows of Bᵀ
        let m = matrix::mat_mul(&bt, pairing); // Bᵀ P
        let inv = matrix::inverse(&m).expect("nondegenerate pairing");
        let cols = matrix::transpose(&inv);
        hnf(&self.field, n, &cols).expect("full rank")
    }

    /// The lattice spanned by the columns of `m` (row-major).
    pub fn from_matrix(field: &Field, m: &[Vec<Scalar>]) -> Result<Lattice> {
        let cols = matrix::transpose(m);
        hnf(field, m.len(), &cols)
    }

    /// Basis as a row-major matrix with the basis vectors as columns.
    pub fn matrix(&self) -> Vec<Vec<Scalar>> {
        matrix::transpose(&self.basis)
    }

    /// Minimum valuation over all nonzero basis entries.
    pub fn min_entry_valuation(&self) -> i64 {
        self.basis
            .iter()
            .flatten()
            .filter_map(|x| x.val())
            .min()
            .unwrap_or(0)
    }
}

/// Trace form `tr(xy)` on the algebra of 2x2 matrices in coordinates `(a, b, c, d)`.
pub fn trace_pairing(field: &Field) -> Vec<Vec<Scalar>> {
    let p = [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]];
    p.iter()
        .map(|r| r.iter().map(|&x| field.int(x)).collect())
        .collect()
}

/// `{x ∈ M₂(K) : tr(x L) ⊆ O}`.
pub fn trace_dual(l: &Lattice) -> Result<Lattice> {
    if l.dim() != 4 {
        return Err(Error::DimensionMismatch(l.dim(), 4));
    }
    Ok(l.dual(&trace_pairing(l.field())))
}
