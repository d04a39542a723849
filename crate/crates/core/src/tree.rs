//! The Bruhat-Tits tree of `PGL_2` over a local field.
//!
//! A vertex is the homothety class of a rank-2 lattice, stored as the
//! canonical Hermite basis scaled so that its entries have minimum
//! valuation 0.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt::{self, Write as _};

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::lattice::{hnf, Lattice, Vector};
use crate::matrix::Mat2;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex {
    lattice: Lattice,
}

impl fmt::Debug for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Vertex{}", self.label())
    }
}

impl Vertex {
    /// The class of a rank-2 lattice.
    pub fn from_lattice(l: &Lattice) -> Vertex {
        debug_assert_eq!(l.dim(), 2);
        let m = l.min_entry_valuation();
        Vertex {
            lattice: l.scale(-m),
        }
    }

    /// The class of the lattice spanned by `gens`.
    pub fn from_generators(field: &Field, gens: &[Vector]) -> Result<Vertex> {
        Ok(Vertex::from_lattice(&hnf(field, 2, gens)?))
    }

    /// The class of the lattice spanned by the columns of `m`.
    pub fn from_matrix(m: &Mat2) -> Result<Vertex> {
        let [x, y] = m.columns();
        Vertex::from_generators(m.field(), &[x, y])
    }

    pub fn standard(field: &Field) -> Vertex {
        Vertex {
            lattice: Lattice::standard(field, 2),
        }
    }

    pub fn field(&self) -> &Field {
        self.lattice.field()
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    /// Canonical basis as a matrix with the basis vectors as columns.
    pub fn matrix(&self) -> Mat2 {
        let b = self.lattice.basis();
        Mat2::from_columns(&b[0], &b[1])
    }

    /// Node label `[π^a b; 0 π^c]`.
    pub fn label(&self) -> String {
        let a = self.lattice.diagonal_valuations();
        format!("[π^{} {}; 0 π^{}]", a[0], self.lattice.basis()[1][0], a[1])
    }

    /// The `q + 1` adjacent vertices, one per point of the projective line
    /// over the residue field: `(1 : y)` for each residue `y`, then `(0 : 1)`.
    pub fn neighbors(&self) -> Vec<Vertex> {
        let field = self.field();
        let b = self.lattice.basis();
        let pi = field.uniformizer();
        let pb0: Vector = b[0].iter().map(|x| x * &pi).collect();
        let pb1: Vector = b[1].iter().map(|x| x * &pi).collect();
        let mut out = Vec::with_capacity(field.q() as usize + 1);
        for r in field.residue_elements() {
            let y = field.residue_lift(&r);
            let x: Vector = b[0].iter().zip(&b[1]).map(|(u, w)| u + &(&y * w)).collect();
            out.push(Vertex::from_generators(field, &[x, pb0.clone(), pb1.clone()]).unwrap());
        }
        out.push(Vertex::from_generators(field, &[b[1].clone(), pb0, pb1]).unwrap());
        out
    }

    /// Transition matrix `B_self⁻¹ B_other`.
    fn transition(&self, other: &Vertex) -> Mat2 {
        &self.matrix().inv().unwrap() * &other.matrix()
    }

    pub fn distance(&self, other: &Vertex) -> Result<u64> {
        if self.field() != other.field() {
            return Err(Error::FieldMismatch);
        }
        Ok(self.distance_unchecked(other))
    }

    pub(crate) fn distance_unchecked(&self, other: &Vertex) -> u64 {
        if self == other {
            return 0;
        }
        let t = self.transition(other);
        let m = min_val(&[&t.a, &t.b, &t.c, &t.d]);
        (t.det().val().unwrap() - 2 * m) as u64
    }

    pub fn is_adjacent(&self, other: &Vertex) -> bool {
        self.distance_unchecked(other) == 1
    }

    /// The vertices from `self` to `other`, both included.
    pub fn geodesic(&self, other: &Vertex) -> Result<Path> {
        let d = self.distance(other)?;
        let t = self.transition(other);
        let m = min_val(&[&t.a, &t.b, &t.c, &t.d]);
        let w = other.lattice.scale(-m);
        let mut path = Vec::with_capacity(d as usize + 1);
        for k in 0..=d as i64 {
            let s = w.sum(&self.lattice.scale(k)).unwrap();
            path.push(Vertex::from_lattice(&s));
        }
        Ok(Path(path))
    }

    /// All vertices at distance at most `r`, in breadth-first order.
    pub fn ball(&self, r: u64) -> Vec<Vertex> {
        let mut seen: HashSet<Vertex> = HashSet::from([self.clone()]);
        let mut out = vec![self.clone()];
        let mut frontier = vec![self.clone()];
        for _ in 0..r {
            let mut next = Vec::new();
            for v in &frontier {
                for w in v.neighbors() {
                    if seen.insert(w.clone()) {
                        next.push(w);
                    }
                }
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out
    }

    /// The vertex at distance `r` from `self` on the ray toward the visual
    /// limit `z`.
    pub fn vertex_on_ray(&self, z: &ProjPoint, r: u64) -> Vertex {
        let y = self.primitive_on_line(z);
        let field = self.field();
        let mut gens = vec![y];
        for b in self.lattice.scale(r as i64).basis() {
            gens.push(b.clone());
        }
        Vertex::from_generators(field, &gens).unwrap()
    }

    /// A generator of `Λ ∩ K z` for the representative `Λ`.
    fn primitive_on_line(&self, z: &ProjPoint) -> Vector {
        let zv = z.vector();
        let c = self.lattice.coordinates(&zv);
        let m = min_val(&[&c[0], &c[1]]);
        let s = self.field().pi_pow(-m);
        zv.iter().map(|x| x * &s).collect()
    }

    /// Distance to the line with visual limits `z1 ≠ z2`.
    pub fn distance_to_line(&self, z1: &ProjPoint, z2: &ProjPoint) -> u64 {
        let y1 = self.primitive_on_line(z1);
        let y2 = self.primitive_on_line(z2);
        let m = Mat2::from_columns(&y1, &y2);
        (m.det().val().unwrap() - self.matrix().det().val().unwrap()) as u64
    }

    /// `(j, h)`: index of the nearest vertex on the ray from `self` toward
    /// `z`, and the distance of `v` to it.
    pub fn project_to_ray(&self, z: &ProjPoint, v: &Vertex) -> (u64, u64) {
        let d = self.distance_unchecked(v);
        let far = self.vertex_on_ray(z, d);
        let dd = far.distance_unchecked(v);
        let j = (2 * d - dd) / 2;
        (j, d - j)
    }
}

fn min_val(xs: &[&Scalar]) -> i64 {
    xs.iter()
        .filter_map(|x| x.val())
        .min()
        .expect("nonzero matrix")
}

/// A point of the projective line over the field, i.e. a visual limit of
/// the tree.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint {
    x: Scalar,
    y: Scalar,
}

impl fmt::Debug for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} : {})", self.x, self.y)
    }
}

impl ProjPoint {
    /// The canonical form of `(x : y)`: `(1 : y/x)` when `v(x) <= v(y)`,
    /// else `(x/y : 1)`.
    pub fn new(x: Scalar, y: Scalar) -> Result<ProjPoint> {
        match (x.val(), y.val()) {
            (None, None) => Err(Error::BadParams("zero vector".into())),
            (Some(a), b) if b.is_none_or(|b| a <= b) => {
                let one = x.field().one();
                Ok(ProjPoint {
                    y: y.div(&x),
                    x: one,
                })
            }
            _ => {
                let one = y.field().one();
                Ok(ProjPoint {
                    x: x.div(&y),
                    y: one,
                })
            }
        }
    }

    pub fn from_vector(v: &[Scalar]) -> Result<ProjPoint> {
        ProjPoint::new(v[0].clone(), v[1].clone())
    }

    pub fn x(&self) -> &Scalar {
        &self.x
    }

    pub fn y(&self) -> &Scalar {
        &self.y
    }

    pub fn vector(&self) -> Vector {
        vec![self.x.clone(), self.y.clone()]
    }

    pub fn field(&self) -> &Field {
        self.x.field()
    }

    pub fn map(&self, f: impl Fn(&Scalar) -> Scalar) -> ProjPoint {
        ProjPoint::new(f(&self.x), f(&self.y)).unwrap()
    }
}

/// A sequence of consecutively adjacent vertices.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Path(pub Vec<Vertex>);

impl Path {
    pub fn len(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    pub fn first(&self) -> &Vertex {
        &self.0[0]
    }

    pub fn last(&self) -> &Vertex {
        self.0.last().unwrap()
    }

    pub fn distance_to(&self, v: &Vertex) -> u64 {
        self.0
            .iter()
            .map(|w| w.distance_unchecked(v))
            .min()
            .unwrap()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Stem {
    Finite(Path),
    /// The line between two visual limits.
    Infinite(ProjPoint, ProjPoint),
    /// The ray from a vertex toward a visual limit.
    Ray(Vertex, ProjPoint),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BranchDescriptor {
    Tube { stem: Stem, width: u64 },
    Foliage { limit: ProjPoint, anchor: Vertex },
}

impl BranchDescriptor {
    pub fn contains(&self, v: &Vertex) -> bool {
        match self {
            BranchDescriptor::Tube { stem, width } => {
                let d = match stem {
                    Stem::Finite(p) => p.distance_to(v),
                    Stem::Infinite(z1, z2) => v.distance_to_line(z1, z2),
                    Stem::Ray(a, z) => a.project_to_ray(z, v).1,
                };
                d <= *width
            }
            BranchDescriptor::Foliage { limit, anchor } => foliage_member(anchor, limit, v),
        }
    }

    pub fn width(&self) -> Option<u64> {
        match self {
            BranchDescriptor::Tube { width, .. } => Some(*width),
            BranchDescriptor::Foliage { .. } => None,
        }
    }

    /// The finite stem, if any.
    pub fn finite_stem(&self) -> Option<&Path> {
        match self {
            BranchDescriptor::Tube {
                stem: Stem::Finite(p),
                ..
            } => Some(p),
            _ => None,
        }
    }
}

/// Membership in the union of the balls `ball(v_i, i)`, `i >= 1`, along the
/// ray `v_0 = anchor, v_1, …` toward `limit`.
pub fn foliage_member(anchor: &Vertex, limit: &ProjPoint, v: &Vertex) -> bool {
    let (j, h) = anchor.project_to_ray(limit, v);
    h <= j
}

/// Induced adjacency of a finite vertex set.
fn induced_adjacency(set: &HashSet<Vertex>) -> HashMap<Vertex, Vec<Vertex>> {
    set.iter()
        .map(|v| {
            let nb = v
                .neighbors()
                .into_iter()
                .filter(|w| set.contains(w))
                .collect();
            (v.clone(), nb)
        })
        .collect()
}

/// Recognizes a finite vertex set as a tubular neighborhood of a finite line.
pub fn shape(vertices: &[Vertex]) -> Result<BranchDescriptor> {
    let set: HashSet<Vertex> = vertices.iter().cloned().collect();
    let Some(start) = set.iter().min().cloned() else {
        return Err(Error::EmptySet);
    };
    let adj = induced_adjacency(&set);
    let mut seen = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        for w in &adj[&v] {
            if seen.insert(w.clone()) {
                queue.push_back(w.clone());
            }
        }
    }
    if seen.len() != set.len() {
        return Err(Error::Disconnected);
    }

    let mut current = set.clone();
    let mut width = 0u64;
    let degree =
        |v: &Vertex, cur: &HashSet<Vertex>| adj[v].iter().filter(|w| cur.contains(*w)).count();
    loop {
        if current.iter().all(|v| degree(v, &current) <= 2) {
            break;
        }
        let leaves: Vec<Vertex> = current
            .iter()
            .filter(|v| degree(v, &current) <= 1)
            .cloned()
            .collect();
        for l in leaves {
            current.remove(&l);
        }
        width += 1;
    }

    // walk the line from its smaller endpoint
    let ends: BTreeSet<&Vertex> = current
        .iter()
        .filter(|v| degree(v, &current) <= 1)
        .collect();
    let first = (*ends.iter().next().unwrap()).clone();
    let mut path = vec![first.clone()];
    let mut prev: Option<Vertex> = None;
    let mut cur = first;
    loop {
        let next = adj[&cur]
            .iter()
            .find(|w| current.contains(*w) && Some(*w) != prev.as_ref())
            .cloned();
        match next {
            Some(n) => {
                prev = Some(cur);
                path.push(n.clone());
                cur = n;
            }
            None => break,
        }
    }
    let stem = Path(path);

    if tube(&stem, width) != set {
        return Err(Error::NotATube);
    }
    Ok(BranchDescriptor::Tube {
        stem: Stem::Finite(stem),
        width,
    })
}

/// All vertices within distance `r` of a finite path.
pub fn tube(stem: &Path, r: u64) -> HashSet<Vertex> {
    let mut seen: HashSet<Vertex> = stem.0.iter().cloned().collect();
    let mut frontier: Vec<Vertex> = stem.0.clone();
    for _ in 0..r {
        let mut next = Vec::new();
        for v in &frontier {
            for w in v.neighbors() {
                if seen.insert(w.clone()) {
                    next.push(w);
                }
            }
        }
        frontier = next;
    }
    seen
}

/// Graphviz rendering of a finite vertex set; `marked` vertices are filled.
pub fn to_dot(vertices: &[Vertex], marked: &HashSet<Vertex>) -> String {
    let mut sorted: Vec<(String, &Vertex)> = vertices.iter().map(|v| (v.label(), v)).collect();
    sorted.sort();
    sorted.dedup_by(|a, b| a.0 == b.0);
    let mut out = String::from("graph branch {\n");
    for (i, (label, v)) in sorted.iter().enumerate() {
        let style = if marked.contains(*v) {
            ", style=filled"
        } else {
            ""
        };
        writeln!(out, "  n{i} [label=\"{label}\"{style}];").unwrap();
    }
    for i in 0..sorted.len() {
        for j in i + 1..sorted.len() {
            if sorted[i].1.is_adjacent(sorted[j].1) {
                writeln!(out, "  n{i} -- n{j};").unwrap();
            }
        }
    }
    out.push_str("}\n");
    out
}
