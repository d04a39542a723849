use crate::field::Scalar;
use crate::lattice::{hnf, Lattice, Vector};
use crate::matrix::Mat2;
use crate::padic::rat_frac;

use super::Order;

/// The unique `(r, R̃)` with `R = O1 + π^r R̃` and `R̃` Gorenstein.
pub fn gorenstein_closure(r: &Order) -> (u64, Order) {
    r.closure()
}

/// Image of `R` in `M₂(K)/K` through `(a, b, c, d) ↦ (a - d, b, c)`.
fn projection(r: &Order) -> Lattice {
    let gens: Vec<Vector> = r
        .lattice()
        .basis()
        .iter()
        .map(|v| vec![&v[0] - &v[3], v[1].clone(), v[2].clone()])
        .collect();
    hnf(r.field(), 3, &gens).expect("full orders project onto a full rank-3 lattice")
}

/// The order `O1 + Σ O x_i` where the `x_i` lift a basis of `π^{-k} M`,
/// if some choice of scalar adjustments makes it an order.
fn lift(m: &Lattice, k: u64) -> Option<Order> {
    let field = m.field();
    let s = field.pi_pow(-(k as i64));
    let half = field.from_rational(rat_frac(1, 2));
    let shifts: Vec<Scalar> = if field.p() == 2 {
        vec![field.zero(), half.clone()]
    } else {
        vec![field.zero()]
    };
    let targets: Vec<[Scalar; 3]> = m
        .basis()
        .iter()
        .map(|v| [&v[0] * &s, &v[1] * &s, &v[2] * &s])
        .collect();
    let combos = shifts.len().pow(targets.len() as u32);
    for idx in 0..combos {
        let mut gens = vec![Mat2::identity(field).to_vec()];
        let mut rest = idx;
        for t in &targets {
            let z = &-&(&t[0] * &half) + &shifts[rest % shifts.len()];
            rest /= shifts.len();
            gens.push(Mat2::new(&t[0] + &z, t[1].clone(), t[2].clone(), z).to_vec());
        }
        let lat = hnf(field, 4, &gens).ok()?;
        if let Ok(o) = Order::from_lattice(lat) {
            return Some(o);
        }
    }
    None
}

pub(super) fn compute(r: &Order) -> (u64, Order) {
    let m = projection(r);
    let bound = (r.disc_valuation().max(0) / 3) as u64;
    let mut best = (0, r.clone());
    for k in 1..=bound {
        match lift(&m, k) {
            Some(o) if o.scale(k) == *r => best = (k, o),
            _ => break,
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::orders::vertex_order;
    use crate::tree::Vertex;

    #[test]
    fn scaled_maximal_orders() {
        for p in [2, 3, 5] {
            let k = Field::base(p).unwrap();
            let m2 = vertex_order(&Vertex::standard(&k));
            for r in 0..3 {
                let (e, c) = gorenstein_closure(&m2.scale(r));
                assert_eq!((e, &c), (r, &m2));
            }
        }
    }

    #[test]
    fn eichler_orders_are_gorenstein() {
        let k = Field::base(2).unwrap();
        let s = Vertex::standard(&k);
        let far = Vertex::from_matrix(&Mat2::from_ints(&k, [1, 0, 0, 4])).unwrap();
        let e2 = vertex_order(&s).intersect(&vertex_order(&far)).unwrap();
        assert_eq!(gorenstein_closure(&e2).0, 0);
        let (r, c) = gorenstein_closure(&e2.scale(1));
        assert_eq!((r, c), (1, e2));
    }
}
