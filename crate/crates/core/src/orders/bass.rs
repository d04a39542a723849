use num::{BigRational, One, Zero};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::lattice::{hnf, Vector};
use crate::matrix::Mat2;
use crate::padic::{self, rat};
use crate::tree::{BranchDescriptor, ProjPoint, Stem, Vertex};

use super::{
    analyze_matrix, order_from_generators, vertex_order, Order, QuadraticSubalgebra, SubalgebraKind,
};

/// Parameters of the three generator families of non-maximal Bass orders.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BassParams {
    /// `1, x11, x12, π^n x21`.
    J1 { n: u64 },
    /// `1, x11 + x12 - ε x21, π^n x11, π^n x12`.
    J2 { n: u64, eps: BigRational },
    /// `1, α1 x11 + α2 x12 - π x21, π^n x11, π^(n+p̄) x21`.
    J3 {
        n: u64,
        pbar: u8,
        alpha1: BigRational,
        alpha2: BigRational,
    },
}

#[derive(Clone, Debug)]
pub enum BassClass {
    Eichler {
        level: u64,
        ends: (Vertex, Vertex),
    },
    /// `B = O_Λ + π^r D` with `Λ` unramified.
    E1 {
        lambda: QuadraticSubalgebra,
        r: u64,
        vertex: Vertex,
    },
    /// `B = O_Λ + π_Λ^r (D ∩ D')` with `Λ` ramified.
    E2 {
        lambda: QuadraticSubalgebra,
        r: u64,
        edge: (Vertex, Vertex),
    },
}

impl BassClass {
    pub fn tag(&self) -> &'static str {
        match self {
            BassClass::Eichler { .. } => "eichler",
            BassClass::E1 { .. } => "E1",
            BassClass::E2 { .. } => "E2",
        }
    }

    pub fn exponent(&self) -> u64 {
        match self {
            BassClass::Eichler { level, .. } => *level,
            BassClass::E1 { r, .. } | BassClass::E2 { r, .. } => *r,
        }
    }
}

pub fn make_bass(params: &BassParams, field: &Field) -> Result<Order> {
    if !field.is_base() {
        return Err(Error::BadParams(
            "Bass families are built over the base field".into(),
        ));
    }
    let p = field.p();
    let pi = |k: u64| field.pi_pow(k as i64);
    let unit = |i, j| Mat2::unit(field, i, j);
    let gens = match params {
        BassParams::J1 { n } => vec![unit(0, 0), unit(0, 1), unit(1, 0).scale(&pi(*n))],
        BassParams::J2 { n, eps } => {
            if padic::val(eps, p) != Some(0) {
                return Err(Error::BadParams("ε must be a unit".into()));
            }
            let disc = BigRational::one() - rat(4) * eps;
            if disc.is_zero() || padic::is_padic_square(&disc, p) {
                return Err(Error::BadParams("t^2 - t + ε is reducible".into()));
            }
            let u = Mat2::new(
                field.one(),
                field.one(),
                field.from_rational(-eps.clone()),
                field.zero(),
            );
            vec![u, unit(0, 0).scale(&pi(*n)), unit(0, 1).scale(&pi(*n))]
        }
        BassParams::J3 {
            n,
            pbar,
            alpha1,
            alpha2,
        } => {
            if *pbar > 1 {
                return Err(Error::BadParams("p̄ must be 0 or 1".into()));
            }
            if padic::val(alpha1, p).is_some_and(|v| v < 1) {
                return Err(Error::BadParams("α1 must have positive valuation".into()));
            }
            if padic::val(alpha2, p) != Some(0) {
                return Err(Error::BadParams("α2 must be a unit".into()));
            }
            let pm = Mat2::new(
                field.from_rational(alpha1.clone()),
                field.from_rational(alpha2.clone()),
                -&field.uniformizer(),
                field.zero(),
            );
            vec![
                pm,
                unit(0, 0).scale(&pi(*n)),
                unit(1, 0).scale(&pi(n + *pbar as u64)),
            ]
        }
    };
    order_from_generators(field, &gens)
}

/// `O_Λ + π^r D`.
pub fn abstract_e1(lambda: &QuadraticSubalgebra, r: u64, d: &Order) -> Order {
    let field = d.field();
    let pr = field.pi_pow(r as i64);
    let mut gens: Vec<Vector> = lambda.o_lambda().iter().map(Mat2::to_vec).collect();
    gens.extend(d.basis_matrices().iter().map(|m| m.scale(&pr).to_vec()));
    Order::from_lattice_unchecked(hnf(field, 4, &gens).unwrap())
}

/// `O_Λ + π_Λ^r E`.
pub fn abstract_e2(lambda: &QuadraticSubalgebra, r: u64, e: &Order) -> Order {
    let field = e.field();
    let pi = lambda.pi_lambda.clone().expect("ramified subalgebra");
    let mut pr = Mat2::identity(field);
    for _ in 0..r {
        pr = &pr * &pi;
    }
    let mut gens: Vec<Vector> = lambda.o_lambda().iter().map(Mat2::to_vec).collect();
    gens.extend(e.basis_matrices().iter().map(|m| (&pr * m).to_vec()));
    Order::from_lattice_unchecked(hnf(field, 4, &gens).unwrap())
}

/// First element `Σ c_i b_i` (digits `c_i` in canonical order) generating a
/// maximal quadratic order of the requested kind.
fn scan_subalgebra(b: &Order, want: SubalgebraKind) -> Option<QuadraticSubalgebra> {
    let field = b.field();
    let p = field.p();
    let basis = b.basis_matrices();
    let total = p.pow(basis.len() as u32);
    for idx in 1..total {
        let mut u = Mat2::zero(field);
        let mut rest = idx;
        for m in &basis {
            let c = rest % p;
            rest /= p;
            if c != 0 {
                u = &u + &m.scale(&field.int(c as i64));
            }
        }
        if u.is_central() {
            continue;
        }
        if let Ok(a) = analyze_matrix(&u) {
            if a.kind == want && a.r == 0 {
                return Some(a);
            }
        }
    }
    None
}

pub fn classify_bass(b: &Order) -> Result<BassClass> {
    let BranchDescriptor::Tube {
        stem: Stem::Finite(path),
        width: 0,
    } = b.branch()
    else {
        return Err(Error::NotBass);
    };
    let (first, last) = (path.first().clone(), path.last().clone());
    let e = vertex_order(&first).intersect(&vertex_order(&last))?;
    if e == *b {
        return Ok(BassClass::Eichler {
            level: path.len() as u64,
            ends: (first, last),
        });
    }
    match path.len() {
        0 => {
            let lambda = scan_subalgebra(b, SubalgebraKind::Unramified).ok_or_else(|| {
                Error::VerificationFailed("no unramified maximal subalgebra".into())
            })?;
            let idx = e.lattice().index_valuation(b.lattice())?;
            let r = (idx / 2) as u64;
            if abstract_e1(&lambda, r, &e) != *b {
                return Err(Error::VerificationFailed("E1 presentation".into()));
            }
            Ok(BassClass::E1 {
                lambda,
                r,
                vertex: first,
            })
        }
        1 => {
            let lambda = scan_subalgebra(b, SubalgebraKind::Ramified).ok_or_else(|| {
                Error::VerificationFailed("no ramified maximal subalgebra".into())
            })?;
            let r = e.lattice().index_valuation(b.lattice())? as u64;
            if abstract_e2(&lambda, r, &e) != *b {
                return Err(Error::VerificationFailed("E2 presentation".into()));
            }
            Ok(BassClass::E2 {
                lambda,
                r,
                edge: (first, last),
            })
        }
        _ => Err(Error::VerificationFailed(
            "long stem without Eichler identity".into(),
        )),
    }
}

pub fn intersect_vertices(vs: &[Vertex]) -> Result<Order> {
    let (first, rest) = vs.split_first().ok_or(Error::EmptyList)?;
    let mut acc = vertex_order(first);
    for v in rest {
        acc = acc.intersect(&vertex_order(v))?;
    }
    Ok(acc)
}

/// Three vertices at distance `r` from `v` in the first three directions
/// `(1 : y)`, `(0 : 1)` of the residue projective line.
pub fn spread_out(v: &Vertex, r: u64) -> [Vertex; 3] {
    let field = v.field();
    let b = v.lattice().basis();
    let mut dirs: Vec<Vector> = field
        .residue_elements()
        .iter()
        .take(3)
        .map(|res| {
            let y = field.residue_lift(res);
            b[0].iter().zip(&b[1]).map(|(x, w)| x + &(&y * w)).collect()
        })
        .collect();
    dirs.push(b[1].clone());
    let out: Vec<Vertex> = dirs
        .iter()
        .take(3)
        .map(|d| v.vertex_on_ray(&ProjPoint::from_vector(d).unwrap(), r))
        .collect();
    [out[0].clone(), out[1].clone(), out[2].clone()]
}

/// `(D_a ∩ D_b)^[r]`.
pub fn tubular_order(a: &Vertex, b: &Vertex, r: u64) -> Result<Order> {
    Ok(vertex_order(a).intersect(&vertex_order(b))?.scale(r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orders::validate;
    use crate::tree::Path;

    fn k(p: u64) -> Field {
        Field::base(p).unwrap()
    }

    #[test]
    fn j1_is_eichler() {
        let f = k(3);
        let e2 = make_bass(&BassParams::J1 { n: 2 }, &f).unwrap();
        let d2 = Vertex::from_matrix(&Mat2::from_ints(&f, [1, 0, 0, 9])).unwrap();
        assert_eq!(e2, intersect_vertices(&[Vertex::standard(&f), d2]).unwrap());
        assert_eq!(e2.eichler_level(), Some(2));
        assert_eq!(e2.disc_valuation(), 2);
        assert!(matches!(
            classify_bass(&e2).unwrap(),
            BassClass::Eichler { level: 2, .. }
        ));
        let m = vertex_order(&Vertex::standard(&f));
        assert!(matches!(
            classify_bass(&m).unwrap(),
            BassClass::Eichler { level: 0, .. }
        ));
    }

    #[test]
    fn j2_is_e1() {
        let f = k(2);
        let b = make_bass(&BassParams::J2 { n: 1, eps: rat(1) }, &f).unwrap();
        validate(&b).unwrap();
        let s = Vertex::standard(&f);
        assert_eq!(
            b.branch(),
            BranchDescriptor::Tube {
                stem: Stem::Finite(Path(vec![s])),
                width: 0
            }
        );
        match classify_bass(&b).unwrap() {
            BassClass::E1 { r, .. } => assert_eq!(r, 1),
            c => panic!("{c:?}"),
        }
        assert!(make_bass(&BassParams::J2 { n: 1, eps: rat(-2) }, &k(3)).is_err());
    }

    #[test]
    fn j3_is_e2() {
        for p in [2, 3] {
            let f = k(p);
            let b = make_bass(
                &BassParams::J3 {
                    n: 2,
                    pbar: 0,
                    alpha1: rat(p as i64),
                    alpha2: rat(1),
                },
                &f,
            )
            .unwrap();
            assert!(b.is_bass());
            assert_eq!(b.eichler_level(), None);
            match classify_bass(&b).unwrap() {
                BassClass::E2 { r, .. } => assert_eq!(r, 3),
                c => panic!("{c:?}"),
            }
        }
    }

    #[test]
    fn not_bass() {
        let f = k(2);
        let m = vertex_order(&Vertex::standard(&f)).scale(1);
        assert!(matches!(classify_bass(&m), Err(Error::NotBass)));
    }

    #[test]
    fn spread_out_vertices() {
        for p in [2, 3] {
            let f = k(p);
            let s = Vertex::standard(&f);
            for r in 1..3 {
                let vs = spread_out(&s, r);
                for (i, a) in vs.iter().enumerate() {
                    assert_eq!(a.distance(&s).unwrap(), r);
                    for b in &vs[i + 1..] {
                        assert_eq!(a.distance(b).unwrap(), 2 * r);
                    }
                }
                assert_eq!(intersect_vertices(&vs).unwrap(), vertex_order(&s).scale(r));
            }
        }
        assert!(matches!(intersect_vertices(&[]), Err(Error::EmptyList)));
    }
}
