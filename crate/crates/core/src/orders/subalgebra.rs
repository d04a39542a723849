use num::{BigRational, Zero};

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::matrix::Mat2;
use crate::padic::{self, p_pow, rat};
use crate::tree::{BranchDescriptor, Path, ProjPoint, Stem, Vertex};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubalgebraKind {
    NilpotentTranslate,
    Split,
    Unramified,
    Ramified,
}

impl SubalgebraKind {
    pub fn name(&self) -> &'static str {
        match self {
            SubalgebraKind::NilpotentTranslate => "nilpotent",
            SubalgebraKind::Split => "split",
            SubalgebraKind::Unramified => "unramified",
            SubalgebraKind::Ramified => "ramified",
        }
    }
}

/// The commutative algebra `K[u]` generated by a non-central integral `u`,
/// with its maximal order `O_Λ = O1 + Oω` and the conductor exponent `r`,
/// `O[u] = O1 + π^r O_Λ`.
#[derive(Clone, Debug)]
pub struct QuadraticSubalgebra {
    pub u: Mat2,
    pub kind: SubalgebraKind,
    pub trace: BigRational,
    pub det: BigRational,
    /// Second basis element of `O_Λ`; for the nilpotent case `u - λ`.
    pub omega: Mat2,
    pub r: u64,
    /// Uniformizer of `O_Λ` in the ramified case.
    pub pi_lambda: Option<Mat2>,
    /// Eigenlines (split: two; nilpotent: one).
    pub eigen: Vec<ProjPoint>,
    /// `K[u]` as a field, for the two field cases; its `θ` maps to `u`.
    pub extension: Option<Field>,
}

impl QuadraticSubalgebra {
    pub fn o_lambda(&self) -> [Mat2; 2] {
        [Mat2::identity(self.u.field()), self.omega.clone()]
    }

    /// Image of a scalar of `extension` under `θ ↦ u`.
    pub fn embed(&self, x: &Scalar) -> Mat2 {
        let (a, b) = x.to_theta_coords();
        let k = self.u.field();
        &Mat2::scalar(&k.from_rational(a)) + &self.u.scale(&k.from_rational(b))
    }
}

/// A nonzero vector in the kernel of a singular nonzero matrix.
pub(crate) fn kernel_vector(n: &Mat2) -> Vec<Scalar> {
    if !n.a.is_zero() || !n.b.is_zero() {
        vec![-&n.b, n.a.clone()]
    } else {
        vec![-&n.d, n.c.clone()]
    }
}

pub fn analyze_matrix(u: &Mat2) -> Result<QuadraticSubalgebra> {
    let k = u.field().clone();
    if !k.is_base() {
        return Err(Error::FieldMismatch);
    }
    if u.is_central() {
        return Err(Error::Central);
    }
    if !u.is_integral() {
        return Err(Error::NonIntegral);
    }
    let p = k.p();
    let tr = u.trace().as_rational().unwrap().clone();
    let det = u.det().as_rational().unwrap().clone();
    let disc = &tr * &tr - rat(4) * &det;
    let mut out = QuadraticSubalgebra {
        u: u.clone(),
        kind: SubalgebraKind::NilpotentTranslate,
        trace: tr.clone(),
        det: det.clone(),
        omega: u.clone(),
        r: 0,
        pi_lambda: None,
        eigen: vec![],
        extension: None,
    };
    if disc.is_zero() {
        let lambda = k.from_rational(&tr / rat(2));
        let n = u - &Mat2::scalar(&lambda);
        out.eigen = vec![ProjPoint::from_vector(&kernel_vector(&n))?];
        out.omega = n;
        return Ok(out);
    }
    if padic::is_padic_square(&disc, p) {
        let s = padic::rational_sqrt(&disc).ok_or(Error::NonRationalEigenvalues)?;
        let l1 = k.from_rational((&tr + &s) / rat(2));
        let l2 = k.from_rational((&tr - &s) / rat(2));
        let diff = &l1 - &l2;
        let e1 = (u - &Mat2::scalar(&l2)).scale(&diff.inv().unwrap());
        out.kind = SubalgebraKind::Split;
        out.r = diff.val().unwrap() as u64;
        out.eigen = vec![
            ProjPoint::from_vector(&kernel_vector(&(u - &Mat2::scalar(&l1))))?,
            ProjPoint::from_vector(&kernel_vector(&(u - &Mat2::scalar(&l2))))?,
        ];
        out.omega = e1;
        return Ok(out);
    }
    let l = Field::quadratic(&k, det.clone(), -tr.clone())?;
    let (offset, shift) = l.integral_generator_shift().unwrap();
    let omega = (u - &Mat2::scalar(&k.from_rational(offset)))
        .scale(&k.from_rational(p_pow(p, -(shift as i64))));
    out.r = shift as u64;
    out.omega = omega.clone();
    if l.is_ramified() {
        out.kind = SubalgebraKind::Ramified;
        out.pi_lambda = Some(omega);
    } else {
        out.kind = SubalgebraKind::Unramified;
    }
    out.extension = Some(l);
    Ok(out)
}

/// The branch of a single non-central integral matrix.
pub fn branch_matrix(u: &Mat2) -> Result<BranchDescriptor> {
    let a = analyze_matrix(u)?;
    let k = u.field();
    let e1 = vec![k.one(), k.zero()];
    let e2 = vec![k.zero(), k.one()];
    Ok(match a.kind {
        SubalgebraKind::NilpotentTranslate => {
            let n = &a.omega;
            let w = if n.apply(&e1).iter().all(Scalar::is_zero) {
                e2
            } else {
                e1
            };
            let anchor = Vertex::from_generators(k, &[w.clone(), n.apply(&w)])?;
            BranchDescriptor::Foliage {
                limit: a.eigen[0].clone(),
                anchor,
            }
        }
        SubalgebraKind::Split => BranchDescriptor::Tube {
            stem: Stem::Infinite(a.eigen[0].clone(), a.eigen[1].clone()),
            width: a.r,
        },
        SubalgebraKind::Unramified => {
            let v = Vertex::from_generators(k, &[e1.clone(), a.omega.apply(&e1)])?;
            BranchDescriptor::Tube {
                stem: Stem::Finite(Path(vec![v])),
                width: a.r,
            }
        }
        SubalgebraKind::Ramified => {
            let pw = a.omega.apply(&e1);
            let v0 = Vertex::from_generators(k, &[e1.clone(), pw.clone()])?;
            let v1 = Vertex::from_generators(k, &[pw.clone(), a.omega.apply(&pw)])?;
            BranchDescriptor::Tube {
                stem: Stem::Finite(Path(vec![v0, v1])),
                width: a.r,
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orders::{branch_oracle, BranchTarget};

    #[test]
    fn kinds() {
        let k = Field::base(2).unwrap();
        let nil = analyze_matrix(&Mat2::from_ints(&k, [0, 1, 0, 0])).unwrap();
        assert_eq!(nil.kind, SubalgebraKind::NilpotentTranslate);
        assert_eq!(nil.eigen[0], ProjPoint::new(k.one(), k.zero()).unwrap());
        let split = analyze_matrix(&Mat2::from_ints(&k, [0, 0, 0, 2])).unwrap();
        assert_eq!((split.kind, split.r), (SubalgebraKind::Split, 1));
        let unr = analyze_matrix(&Mat2::from_ints(&k, [0, -1, 1, 1])).unwrap();
        assert_eq!((unr.kind, unr.r), (SubalgebraKind::Unramified, 0));
        let ram = analyze_matrix(&Mat2::from_ints(&k, [0, 1, 2, 0])).unwrap();
        assert_eq!((ram.kind, ram.r), (SubalgebraKind::Ramified, 0));
        // x^2 + 12 at p = 2: u = 2√-3 = 4ω - 2 with ω^2 - ω + 1 = 0
        let c = analyze_matrix(&Mat2::from_ints(&k, [0, -4, 3, 0])).unwrap();
        assert_eq!((c.kind, c.r), (SubalgebraKind::Unramified, 2));
        assert_eq!(
            analyze_matrix(&Mat2::identity(&k)).unwrap_err(),
            Error::Central
        );
        // diag(0, 1) + unit: √17 is 2-adic but irrational
        let s17 = Mat2::from_ints(&k, [0, 1, 4, 1]);
        assert_eq!(
            analyze_matrix(&s17).unwrap_err(),
            Error::NonRationalEigenvalues
        );
    }

    #[test]
    fn conductor_identity() {
        // u = a + b ω with a integral and v(b) = r, i.e. O[u] = O1 + π^r O_Λ
        let k = Field::base(2).unwrap();
        for e in [
            [0, -4, 3, 0],
            [0, 0, 0, 2],
            [0, 1, 8, 0],
            [1, 2, -6, 3],
            [0, -1, 1, 1],
        ] {
            let u = Mat2::from_ints(&k, e);
            let a = analyze_matrix(&u).unwrap();
            assert!(a.omega.is_integral());
            let w = &a.omega;
            let b = if !w.b.is_zero() {
                u.b.div(&w.b)
            } else if !w.c.is_zero() {
                u.c.div(&w.c)
            } else {
                (&u.a - &u.d).div(&(&w.a - &w.d))
            };
            let c = &u.a - &(&b * &w.a);
            assert_eq!(&Mat2::scalar(&c) + &w.scale(&b), u);
            assert!(c.is_integral());
            assert_eq!(b.val(), Some(a.r as i64), "{e:?}");
        }
    }

    #[test]
    fn matrix_branches_against_oracle() {
        let k = Field::base(2).unwrap();
        let s = Vertex::standard(&k);
        for e in [
            [0, -1, 1, 1],
            [0, 1, 2, 0],
            [0, 0, 0, 2],
            [0, 1, 0, 0],
            [2, 1, 0, 2],
            [0, 2, 4, 0],
        ] {
            let u = Mat2::from_ints(&k, e);
            let d = branch_matrix(&u).unwrap();
            let oracle = branch_oracle(&BranchTarget::Matrix(&u), &s, 3, 1);
            for v in s.ball(3) {
                assert_eq!(d.contains(&v), oracle.contains(&v), "{e:?} {v:?}");
            }
        }
        let one_vertex = branch_oracle(
            &BranchTarget::Matrix(&Mat2::from_ints(&k, [0, -1, 1, 1])),
            &s,
            3,
            1,
        );
        assert_eq!(one_vertex, vec![s.clone()]);
    }
}
