//! Extension of scalars to a quadratic field `L`, descent back to the base,
//! and ghost intersections `M₂(K) ∩ ⋂ D_i` of maximal orders over `L`.

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::lattice::{hnf, Lattice, Vector};
use crate::matrix::Mat2;
use crate::orders::{
    analyze_matrix, branch_matrix, classify_bass, spread_out, vertex_order, BassClass, Order,
    QuadraticSubalgebra, SubalgebraKind,
};
use crate::padic::{self, rat};
use crate::tree::{BranchDescriptor, ProjPoint, Vertex};

/// A base field `K` together with `L`, which is either `K` itself or a
/// quadratic extension of it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionContext {
    k: Field,
    l: Field,
}

impl ExtensionContext {
    pub fn new(l: &Field) -> ExtensionContext {
        ExtensionContext {
            k: l.base_field(),
            l: l.clone(),
        }
    }

    /// `L = K`.
    pub fn trivial(k: &Field) -> ExtensionContext {
        ExtensionContext {
            k: k.clone(),
            l: k.clone(),
        }
    }

    pub fn base(&self) -> &Field {
        &self.k
    }

    pub fn ext(&self) -> &Field {
        &self.l
    }

    pub fn e(&self) -> u32 {
        self.l.e()
    }

    pub fn is_trivial(&self) -> bool {
        self.l.is_base()
    }

    pub fn embed(&self, x: &Scalar) -> Scalar {
        if self.is_trivial() {
            x.clone()
        } else {
            self.l.embed(x)
        }
    }

    pub fn embed_matrix(&self, m: &Mat2) -> Mat2 {
        m.map(|x| self.embed(x))
    }

    pub fn extend_lattice(&self, lat: &Lattice) -> Lattice {
        let gens: Vec<Vector> = lat
            .basis()
            .iter()
            .map(|c| c.iter().map(|x| self.embed(x)).collect())
            .collect();
        hnf(&self.l, lat.dim(), &gens).unwrap()
    }

    pub fn extend_vertex(&self, v: &Vertex) -> Vertex {
        Vertex::from_lattice(&self.extend_lattice(v.lattice()))
    }

    /// `O_L R` as an order over `L`.
    pub fn extend_order(&self, r: &Order) -> Order {
        Order::from_lattice(self.extend_lattice(r.lattice())).expect("extension of an order")
    }

    /// `M ∩ K^n` for an `O_L`-lattice `M`, computed as a rank-`2n` lattice
    /// over `O_K` in the coordinates of the integral basis `{1, ω}`.
    pub fn restrict(&self, m: &Lattice) -> Lattice {
        if self.is_trivial() {
            return m.clone();
        }
        let n = m.dim();
        let omega = self.l.omega();
        let mut gens: Vec<Vector> = Vec::with_capacity(2 * n);
        for col in m.basis() {
            for mult in [self.l.one(), omega.clone()] {
                let mut v = Vec::with_capacity(2 * n);
                let prods: Vec<Scalar> = col.iter().map(|x| x * &mult).collect();
                v.extend(
                    prods
                        .iter()
                        .map(|x| self.k.from_rational(x.coords().0.clone())),
                );
                v.extend(
                    prods
                        .iter()
                        .map(|x| self.k.from_rational(x.coords().1.clone())),
                );
                gens.push(v);
            }
        }
        let big = hnf(&self.k, 2 * n, &gens).unwrap();
        let top: Vec<Vector> = big.basis()[..n].iter().map(|c| c[..n].to_vec()).collect();
        hnf(&self.k, n, &top).unwrap()
    }

    pub fn galois_vertex(&self, v: &Vertex) -> Vertex {
        if self.is_trivial() {
            return v.clone();
        }
        let gens: Vec<Vector> = v
            .lattice()
            .basis()
            .iter()
            .map(|c| c.iter().map(|x| x.conj().unwrap()).collect())
            .collect();
        Vertex::from_generators(&self.l, &gens).unwrap()
    }

    /// Whether an `L`-vertex lies on the image of the tree of `K`.
    pub fn is_defined_over_base(&self, v: &Vertex) -> bool {
        if self.is_trivial() {
            return true;
        }
        let pi = self.l.uniformizer();
        [v.lattice().clone(), v.lattice().scale_by(&pi)]
            .iter()
            .any(|lat| {
                let down = self.restrict(lat);
                self.extend_lattice(&down) == *lat
            })
    }

    /// `M₂(K) ∩ ⋂ End(Λ_i)`.
    pub fn ghost_intersection(&self, vs: &[Vertex]) -> Result<Order> {
        let (first, rest) = vs.split_first().ok_or(Error::EmptyList)?;
        let mut acc = vertex_order(first).lattice().clone();
        for v in rest {
            acc = acc.intersect(vertex_order(v).lattice())?;
        }
        Order::from_lattice(self.restrict(&acc))
    }

    /// Eigenvalues `λ, σ(λ)` in `L` of a matrix over `K` whose characteristic
    /// polynomial has the same splitting field as `L`.
    pub fn eigenvalues(&self, u: &Mat2) -> Result<(Scalar, Scalar)> {
        let (g0, g1) = self.l.defining_poly().ok_or(Error::ExtensionMismatch)?;
        let tr = u.trace().as_rational().unwrap().clone();
        let det = u.det().as_rational().unwrap().clone();
        let disc_u = &tr * &tr - rat(4) * &det;
        let disc_l = &g1 * &g1 - rat(4) * &g0;
        let b = padic::rational_sqrt(&(disc_u / disc_l)).ok_or(Error::ExtensionMismatch)?;
        // √disc_L = 2θ + g1
        let sq = self.l.from_theta_coords(&b * &g1, &b * rat(2))?;
        let half = self
            .l
            .from_rational(num::BigRational::new(1.into(), 2.into()));
        let t = self.l.from_rational(tr);
        let l1 = &(&t + &sq) * &half;
        let l2 = &(&t - &sq) * &half;
        Ok((l1, l2))
    }

    /// Eigenlines `(z, σ(z))` over `L` of a matrix over `K`.
    pub fn eigenlines(&self, u: &Mat2) -> Result<(ProjPoint, ProjPoint)> {
        let (l1, _) = self.eigenvalues(u)?;
        let ul = self.embed_matrix(u);
        let n = &ul - &Mat2::scalar(&l1);
        let z = if !n.a.is_zero() || !n.b.is_zero() {
            vec![-&n.b, n.a.clone()]
        } else {
            vec![-&n.d, n.c.clone()]
        };
        let z = ProjPoint::from_vector(&z)?;
        let zb = z.map(|x| x.conj().unwrap());
        Ok((z, zb))
    }
}

/// The midpoint `D̂` of the extended edge of a ramified `Λ` and its distance
/// `d_w` to the stem of the branch of `O_Λ` over `L`.
#[derive(Clone, Debug)]
pub struct MidpointReport {
    pub midpoint: Vertex,
    pub stem: (ProjPoint, ProjPoint),
    pub d_w: u64,
}

pub fn midpoint_report(
    ctx: &ExtensionContext,
    lambda: &QuadraticSubalgebra,
) -> Result<MidpointReport> {
    if lambda.kind != SubalgebraKind::Ramified || !ctx.ext().is_ramified() {
        return Err(Error::ExtensionMismatch);
    }
    let edge = match branch_matrix(&lambda.omega)? {
        BranchDescriptor::Tube { stem, .. } => match stem {
            crate::tree::Stem::Finite(p) if p.len() == 1 => p,
            _ => return Err(Error::ExtensionMismatch),
        },
        _ => return Err(Error::ExtensionMismatch),
    };
    let a = ctx.extend_vertex(edge.first());
    let b = ctx.extend_vertex(edge.last());
    let midpoint = a.geodesic(&b)?.vertices()[1].clone();
    let stem = ctx.eigenlines(&lambda.u)?;
    let d_w = midpoint.distance_to_line(&stem.0, &stem.1);
    Ok(MidpointReport {
        midpoint,
        stem,
        d_w,
    })
}

/// A claimed equality `R = M₂(K) ∩ ⋂ D_i` with `D_i` maximal over `L`.
#[derive(Clone, Debug)]
pub struct GhostPresentation {
    pub ctx: ExtensionContext,
    pub vertices: Vec<Vertex>,
    pub claimed: Order,
}

impl GhostPresentation {
    pub fn verify(&self) -> bool {
        self.ctx
            .ghost_intersection(&self.vertices)
            .is_ok_and(|o| o == self.claimed)
    }

    fn checked(self) -> Result<GhostPresentation> {
        if self.verify() {
            Ok(self)
        } else {
            Err(Error::VerificationFailed(
                "ghost intersection differs from the claimed order".into(),
            ))
        }
    }
}

/// A verified ghost presentation of a Bass order.
pub fn bass_ghost_presentation(b: &Order, class: &BassClass) -> Result<GhostPresentation> {
    let k = b.field();
    let p = match class {
        BassClass::Eichler { ends, .. } => {
            let mut vertices = vec![ends.0.clone()];
            if ends.1 != ends.0 {
                vertices.push(ends.1.clone());
            }
            GhostPresentation {
                ctx: ExtensionContext::trivial(k),
                vertices,
                claimed: b.clone(),
            }
        }
        BassClass::E1 { lambda, r, vertex } => {
            let ctx =
                ExtensionContext::new(lambda.extension.as_ref().ok_or(Error::ExtensionMismatch)?);
            let (z, _) = ctx.eigenlines(&lambda.u)?;
            let d = ctx.extend_vertex(vertex);
            let far = d.vertex_on_ray(&z, *r);
            let mut vertices = vec![d.clone()];
            if far != d {
                vertices.push(far);
            }
            GhostPresentation {
                ctx,
                vertices,
                claimed: b.clone(),
            }
        }
        BassClass::E2 { lambda, r, edge } => {
            let ctx =
                ExtensionContext::new(lambda.extension.as_ref().ok_or(Error::ExtensionMismatch)?);
            let (z, _) = ctx.eigenlines(&lambda.u)?;
            let d0 = ctx.extend_vertex(&edge.0);
            let d1 = ctx.extend_vertex(&edge.1);
            let mid = d0.geodesic(&d1)?.vertices()[1].clone();
            let far = mid.vertex_on_ray(&z, *r);
            let mut vertices = vec![d0, d1];
            if !vertices.contains(&far) {
                vertices.push(far);
            }
            GhostPresentation {
                ctx,
                vertices,
                claimed: b.clone(),
            }
        }
    };
    p.checked()
}

/// A ghost presentation of `O1 + π^r R` from one of `R`.
pub fn ghost_presentation_of_scaled(p: &GhostPresentation, r: u64) -> Result<GhostPresentation> {
    if r == 0 {
        return Ok(p.clone());
    }
    let radius = p.ctx.e() as u64 * r;
    let mut vertices = Vec::new();
    for d in &p.vertices {
        for v in spread_out(d, radius) {
            if !vertices.contains(&v) {
                vertices.push(v);
            }
        }
    }
    GhostPresentation {
        ctx: p.ctx.clone(),
        vertices,
        claimed: p.claimed.scale(r),
    }
    .checked()
}

#[derive(Clone, Debug)]
pub enum GhostReport {
    GhostRealized {
        exponent: u64,
        presentation: GhostPresentation,
    },
    /// The Gorenstein closure is not Bass: its branch has positive width.
    NotGhost { exponent: u64, closure_width: u64 },
}

pub fn ghost_check(r: &Order) -> Result<GhostReport> {
    let (e, closure) = r.closure();
    if !closure.is_bass() {
        let closure_width = closure.branch().width().unwrap_or(0);
        return Ok(GhostReport::NotGhost {
            exponent: e,
            closure_width,
        });
    }
    let class = classify_bass(&closure)?;
    let base = bass_ghost_presentation(&closure, &class)?;
    let presentation = ghost_presentation_of_scaled(&base, e)?;
    debug_assert!(presentation.claimed == *r);
    Ok(GhostReport::GhostRealized {
        exponent: e,
        presentation,
    })
}

/// The quadratic subalgebra generated by `u`, with its field.
pub fn subalgebra_field(u: &Mat2) -> Result<(QuadraticSubalgebra, ExtensionContext)> {
    let a = analyze_matrix(u)?;
    let l = a.extension.clone().ok_or(Error::ExtensionMismatch)?;
    Ok((a, ExtensionContext::new(&l)))
}
