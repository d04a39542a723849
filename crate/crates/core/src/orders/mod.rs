//! Full orders in the algebra of 2x2 matrices, stored as rank-4 lattices in
//! the coordinates `(a, b, c, d)` of `[[a, b], [c, d]]`.

mod bass;
mod closure;
mod subalgebra;

pub use bass::{
    abstract_e1, abstract_e2, classify_bass, intersect_vertices, make_bass, spread_out,
    tubular_order, BassClass, BassParams,
};
pub use closure::gorenstein_closure;
pub use subalgebra::{analyze_matrix, branch_matrix, QuadraticSubalgebra, SubalgebraKind};

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::lattice::{hnf, Lattice, Vector};
use crate::matrix::{self, Mat2};
use crate::tree::{shape, BranchDescriptor, Stem, Vertex};

pub struct Order {
    lattice: Lattice,
    disc: OnceLock<i64>,
    closure: OnceLock<(u64, Lattice)>,
    branch: OnceLock<BranchDescriptor>,
}

impl Clone for Order {
    fn clone(&self) -> Self {
        let o = Order::from_lattice_unchecked(self.lattice.clone());
        if let Some(d) = self.disc.get() {
            let _ = o.disc.set(*d);
        }
        if let Some(c) = self.closure.get() {
            let _ = o.closure.set(c.clone());
        }
        if let Some(b) = self.branch.get() {
            let _ = o.branch.set(b.clone());
        }
        o
    }
}

impl PartialEq for Order {
    fn eq(&self, other: &Self) -> bool {
        self.lattice == other.lattice
    }
}

impl Eq for Order {}

impl fmt::Debug for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.basis_matrices()).finish()
    }
}

fn vec_of(m: &Mat2) -> Vector {
    m.to_vec()
}

/// `tr(x y)` on coordinate vectors.
fn trace_product(x: &[Scalar], y: &[Scalar]) -> Scalar {
    &(&(&x[0] * &y[0]) + &(&x[1] * &y[2])) + &(&(&x[2] * &y[1]) + &(&x[3] * &y[3]))
}

/// Valuation of the determinant of the trace Gram matrix of a basis.
fn gram_valuation(l: &Lattice) -> Option<i64> {
    let b = l.basis();
    let g: Vec<Vec<Scalar>> = b
        .iter()
        .map(|x| b.iter().map(|y| trace_product(x, y)).collect())
        .collect();
    matrix::det(&g).val()
}

impl Order {
    pub(crate) fn from_lattice_unchecked(lattice: Lattice) -> Order {
        Order {
            lattice,
            disc: OnceLock::new(),
            closure: OnceLock::new(),
            branch: OnceLock::new(),
        }
    }

    /// Wraps a lattice after checking the order axioms.
    pub fn from_lattice(lattice: Lattice) -> Result<Order> {
        if lattice.dim() != 4 {
            return Err(Error::DimensionMismatch(lattice.dim(), 4));
        }
        let o = Order::from_lattice_unchecked(lattice);
        if !o.lattice.member(&Mat2::identity(o.field()).to_vec()) {
            return Err(Error::VerificationFailed("identity not in lattice".into()));
        }
        if !o.basis_matrices().iter().all(Mat2::is_integral) {
            return Err(Error::NonIntegral);
        }
        if !o.is_closed() {
            return Err(Error::VerificationFailed(
                "not multiplicatively closed".into(),
            ));
        }
        Ok(o)
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn field(&self) -> &Field {
        self.lattice.field()
    }

    pub fn basis_matrices(&self) -> Vec<Mat2> {
        self.lattice
            .basis()
            .iter()
            .map(|v| Mat2::from_vec(v))
            .collect()
    }

    pub fn contains_matrix(&self, m: &Mat2) -> bool {
        self.lattice.member(&m.to_vec())
    }

    /// Whether `other ⊆ self`.
    pub fn contains(&self, other: &Order) -> bool {
        self.lattice.contains(&other.lattice)
    }

    fn is_closed(&self) -> bool {
        let b = self.basis_matrices();
        b.iter()
            .all(|x| b.iter().all(|y| self.contains_matrix(&(x * y))))
    }

    /// Reduced discriminant valuation: half the valuation of the trace Gram
    /// determinant (0 for maximal orders, `n` for Eichler orders of level `n`).
    pub fn disc_valuation(&self) -> i64 {
        *self
            .disc
            .get_or_init(|| gram_valuation(&self.lattice).expect("nondegenerate trace form") / 2)
    }

    /// The Gorenstein exponent and the Gorenstein closure.
    pub fn closure(&self) -> (u64, Order) {
        let (r, l) = self.closure.get_or_init(|| {
            let (r, c) = closure::compute(self);
            (r, c.lattice)
        });
        (*r, Order::from_lattice_unchecked(l.clone()))
    }

    /// The branch of a full order: a finite tube.
    pub fn branch(&self) -> BranchDescriptor {
        self.branch.get_or_init(|| branch_of_order(self)).clone()
    }

    /// `O1 + π^r R`.
    pub fn scale(&self, r: u64) -> Order {
        if r == 0 {
            return self.clone();
        }
        let field = self.field();
        let pr = field.pi_pow(r as i64);
        let mut gens = vec![Mat2::identity(field).to_vec()];
        for b in self.lattice.basis() {
            gens.push(b.iter().map(|x| x * &pr).collect());
        }
        Order::from_lattice_unchecked(hnf(field, 4, &gens).unwrap())
    }

    pub fn intersect(&self, other: &Order) -> Result<Order> {
        Ok(Order::from_lattice_unchecked(
            self.lattice.intersect(&other.lattice)?,
        ))
    }

    pub fn is_gorenstein(&self) -> bool {
        self.closure().0 == 0
    }

    pub fn is_bass(&self) -> bool {
        matches!(
            self.branch(),
            BranchDescriptor::Tube {
                stem: Stem::Finite(_),
                width: 0
            }
        )
    }

    /// `Some(level)` when the order is the intersection of the two maximal
    /// orders at the ends of its stem.
    pub fn eichler_level(&self) -> Option<u64> {
        let BranchDescriptor::Tube {
            stem: Stem::Finite(path),
            width: 0,
        } = self.branch()
        else {
            return None;
        };
        let e = vertex_order(path.first())
            .intersect(&vertex_order(path.last()))
            .unwrap();
        (e == *self).then_some(path.len() as u64)
    }

    /// The codifferent `{x : tr(xR) ⊆ O}`.
    pub fn codifferent(&self) -> Lattice {
        crate::lattice::trace_dual(&self.lattice).unwrap()
    }
}

/// Smallest order containing the given matrices.
pub fn order_from_generators(field: &Field, mats: &[Mat2]) -> Result<Order> {
    for m in mats {
        if m.field() != field {
            return Err(Error::FieldMismatch);
        }
        if !m.is_integral() {
            return Err(Error::NonIntegral);
        }
    }
    // K-span of the generated algebra, recording products as extra generators
    let mut gens: Vec<Mat2> = vec![Mat2::identity(field)];
    gens.extend(mats.iter().cloned());
    let mut span: Vec<Mat2> = Vec::new();
    for g in &gens {
        push_if_independent(&mut span, g);
    }
    loop {
        let before = span.len();
        let cur = span.clone();
        for x in &cur {
            for y in &cur {
                let z = x * y;
                if push_if_independent(&mut span, &z) {
                    gens.push(z);
                }
            }
        }
        if span.len() == before || span.len() == 4 {
            break;
        }
    }
    if span.len() < 4 {
        return Err(Error::NotFull);
    }
    let vecs: Vec<Vector> = gens.iter().map(vec_of).collect();
    let mut lat = hnf(field, 4, &vecs)?;
    loop {
        match gram_valuation(&lat) {
            Some(v) if v >= 0 => {}
            _ => return Err(Error::NonIntegral),
        }
        let b: Vec<Mat2> = lat.basis().iter().map(|v| Mat2::from_vec(v)).collect();
        if !b.iter().all(Mat2::is_integral) {
            return Err(Error::NonIntegral);
        }
        let mut extra: Vec<Vector> = lat.basis().to_vec();
        for x in &b {
            for y in &b {
                let z = (x * y).to_vec();
                if !lat.member(&z) {
                    extra.push(z);
                }
            }
        }
        if extra.len() == 4 {
            return Ok(Order::from_lattice_unchecked(lat));
        }
        lat = hnf(field, 4, &extra)?;
    }
}

fn push_if_independent(span: &mut Vec<Mat2>, m: &Mat2) -> bool {
    let mut vs: Vec<Vector> = span.iter().map(vec_of).collect();
    vs.push(m.to_vec());
    if matrix::rank(&vs) > span.len() {
        span.push(m.clone());
        true
    } else {
        false
    }
}

/// The maximal order `End(Λ) = B M₂(O) B⁻¹` of a vertex.
pub fn vertex_order(v: &Vertex) -> Order {
    let field = v.field();
    let b = v.matrix();
    let bi = b.inv().unwrap();
    let gens: Vec<Vector> = (0..2)
        .flat_map(|i| (0..2).map(move |j| (i, j)))
        .map(|(i, j)| (&(&b * &Mat2::unit(field, i, j)) * &bi).to_vec())
        .collect();
    Order::from_lattice_unchecked(hnf(field, 4, &gens).unwrap())
}

/// Whether `m` preserves the lattice of `v`.
pub fn vertex_contains_matrix(v: &Vertex, m: &Mat2) -> bool {
    let b = v.matrix();
    let c = &(&b.inv().unwrap() * m) * &b;
    [&c.a, &c.b, &c.c, &c.d].iter().all(|x| x.is_integral())
}

/// Whether the maximal order of `v` contains the order `h`.
pub fn order_vertex_contains(v: &Vertex, h: &Order) -> bool {
    h.basis_matrices()
        .iter()
        .all(|m| vertex_contains_matrix(v, m))
}

/// Something whose branch can be scanned: an order or a single matrix.
pub enum BranchTarget<'a> {
    Order(&'a Order),
    Matrix(&'a Mat2),
}

impl BranchTarget<'_> {
    pub fn contained_in(&self, v: &Vertex) -> bool {
        match self {
            BranchTarget::Order(o) => order_vertex_contains(v, o),
            BranchTarget::Matrix(m) => vertex_contains_matrix(v, m),
        }
    }
}

/// Exhaustive scan of `ball(center, radius)` for vertices containing `h`.
/// Results keep the ball's breadth-first order; `jobs > 1` splits the scan
/// across threads.
pub fn branch_oracle(
    h: &BranchTarget<'_>,
    center: &Vertex,
    radius: u64,
    jobs: usize,
) -> Vec<Vertex> {
    let ball = center.ball(radius);
    let jobs = jobs.max(1).min(ball.len().max(1));
    if jobs == 1 {
        return ball.into_iter().filter(|v| h.contained_in(v)).collect();
    }
    let chunk = ball.len().div_ceil(jobs);
    let parts: Vec<Vec<Vertex>> = std::thread::scope(|s| {
        let handles: Vec<_> = ball
            .chunks(chunk)
            .map(|c| {
                s.spawn(move || {
                    c.iter()
                        .filter(|v| h.contained_in(v))
                        .cloned()
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    parts.concat()
}

/// A vertex whose maximal order contains `r`: the class of `R·w`.
fn seed_vertex(r: &Order) -> Vertex {
    let field = r.field();
    let candidates = [
        vec![field.one(), field.zero()],
        vec![field.zero(), field.one()],
        vec![field.one(), field.one()],
    ];
    for w in candidates {
        let gens: Vec<Vector> = r.basis_matrices().iter().map(|m| m.apply(&w)).collect();
        if let Ok(v) = Vertex::from_generators(field, &gens) {
            return v;
        }
    }
    unreachable!("a full order acts irreducibly on some cyclic vector")
}

fn branch_of_order(r: &Order) -> BranchDescriptor {
    let seed = seed_vertex(r);
    debug_assert!(order_vertex_contains(&seed, r));
    let mut seen: HashSet<Vertex> = HashSet::from([seed.clone()]);
    let mut members = vec![seed.clone()];
    let mut queue = VecDeque::from([seed]);
    while let Some(v) = queue.pop_front() {
        for w in v.neighbors() {
            if seen.insert(w.clone()) && order_vertex_contains(&w, r) {
                members.push(w.clone());
                queue.push_back(w);
            }
        }
    }
    shape(&members).expect("branches of full orders are finite tubes")
}

/// Checks `1 ∈ R`, integrality and multiplicative closure.
pub fn validate(r: &Order) -> Result<()> {
    Order::from_lattice(r.lattice.clone()).map(|_| ())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::{rat, rat_frac};

    fn m(k: &Field, e: [i64; 4]) -> Mat2 {
        Mat2::from_ints(k, e)
    }

    #[test]
    fn generators() {
        let k = Field::base(3).unwrap();
        let e1 = order_from_generators(
            &k,
            &[
                m(&k, [1, 0, 0, 0]),
                m(&k, [0, 1, 0, 0]),
                m(&k, [0, 0, 3, 0]),
            ],
        )
        .unwrap();
        assert_eq!(e1.disc_valuation(), 1);
        validate(&e1).unwrap();
        assert_eq!(order_from_generators(&k, &[]), Err(Error::NotFull));
        let bad = Mat2::from_rationals(&k, [rat_frac(1, 3), rat(0), rat(0), rat(0)]);
        assert_eq!(order_from_generators(&k, &[bad]), Err(Error::NonIntegral));
        // an integral nilpotent with a denominator generates a rank-2 ring
        let nil = Mat2::from_rationals(&k, [rat(0), rat_frac(1, 3), rat(0), rat(0)]);
        assert_eq!(order_from_generators(&k, &[nil]), Err(Error::NotFull));
    }

    #[test]
    fn non_integral_ring() {
        // both generators are integral but their product is not
        let k = Field::base(2).unwrap();
        let a = Mat2::from_rationals(&k, [rat(0), rat_frac(1, 2), rat(0), rat(0)]);
        let b = m(&k, [0, 0, 1, 0]);
        assert_eq!(order_from_generators(&k, &[a, b]), Err(Error::NonIntegral));
    }

    #[test]
    fn vertex_orders() {
        let k = Field::base(2).unwrap();
        let s = Vertex::standard(&k);
        let m2 = vertex_order(&s);
        assert_eq!(m2.lattice(), &Lattice::standard(&k, 4));
        assert_eq!(m2.disc_valuation(), 0);
        assert!(vertex_contains_matrix(&s, &m(&k, [0, 0, 0, 2])));
        let v1 = Vertex::from_matrix(&m(&k, [1, 0, 0, 2])).unwrap();
        let d1 = vertex_order(&v1);
        assert!(d1.contains_matrix(&Mat2::from_rationals(
            &k,
            [rat(0), rat_frac(1, 2), rat(0), rat(0)]
        )));
        assert!(d1.contains_matrix(&m(&k, [0, 0, 2, 0])));
        assert!(!d1.contains_matrix(&m(&k, [0, 0, 1, 0])));
        validate(&d1).unwrap();
    }

    #[test]
    fn scaling() {
        let k = Field::base(2).unwrap();
        let m2 = vertex_order(&Vertex::standard(&k));
        assert_eq!(m2.scale(0), m2);
        assert_eq!(m2.scale(1).scale(2), m2.scale(3));
        assert_eq!(
            m2.lattice().index_valuation(m2.scale(1).lattice()).unwrap(),
            3
        );
        validate(&m2.scale(2)).unwrap();
    }

    #[test]
    fn branches_of_scaled_maximal_orders() {
        let k = Field::base(2).unwrap();
        let s = Vertex::standard(&k);
        let m2 = vertex_order(&s);
        assert_eq!(
            m2.scale(1).branch(),
            BranchDescriptor::Tube {
                stem: Stem::Finite(crate::tree::Path(vec![s.clone()])),
                width: 1
            }
        );
        let oracle = branch_oracle(&BranchTarget::Order(&m2.scale(1)), &s, 2, 1);
        assert_eq!(oracle.len(), 4);
        let par = branch_oracle(&BranchTarget::Order(&m2.scale(1)), &s, 2, 3);
        assert_eq!(oracle, par);
        assert!(m2.is_bass() && !m2.scale(1).is_bass());
        assert_eq!(m2.eichler_level(), Some(0));
    }

    #[test]
    fn codifferent_contains_order() {
        let k = Field::base(3).unwrap();
        let r = vertex_order(&Vertex::standard(&k)).scale(1);
        let c = r.codifferent();
        assert!(c.contains(r.lattice()));
    }
}
