#![allow(dead_code)]

use btorders_core::matrix::Mat2;
use btorders_core::orders::{order_from_generators, Order};
use btorders_core::padic::{rat, rat_frac};
use btorders_core::tree::Vertex;
use btorders_core::{Field, Scalar};
use num::BigRational;
use proptest::prelude::*;

pub fn prime() -> impl Strategy<Value = u64> {
    prop_oneof![Just(2u64), Just(3), Just(5)]
}

pub fn rational() -> impl Strategy<Value = BigRational> {
    (-60i64..60, 1i64..40).prop_map(|(n, d)| rat_frac(n, d))
}

/// Base fields and one unramified and one ramified quadratic field per prime.
pub fn field() -> impl Strategy<Value = Field> {
    (prime(), 0u8..3).prop_map(|(p, kind)| {
        let k = Field::base(p).unwrap();
        match kind {
            0 => k,
            1 => {
                let g0 = if p == 3 { 2 } else { 1 };
                Field::quadratic(&k, rat(g0), rat(-1)).unwrap()
            }
            _ => Field::quadratic(&k, rat(-(p as i64)), rat(0)).unwrap(),
        }
    })
}

pub fn scalar(f: &Field) -> impl Strategy<Value = Scalar> {
    let f = f.clone();
    (rational(), rational()).prop_map(move |(a, b)| {
        if f.is_base() {
            f.from_rational(a)
        } else {
            f.scalar(a, b)
        }
    })
}

pub fn walk(k: &Field, steps: &[usize]) -> Vertex {
    let mut v = Vertex::standard(k);
    for s in steps {
        let ns = v.neighbors();
        v = ns[s % ns.len()].clone();
    }
    v
}

pub fn steps(max: usize) -> impl Strategy<Value = Vec<usize>> {
    proptest::collection::vec(0usize..7, 0..=max)
}

pub fn int_matrix(k: &Field, e: [i64; 4]) -> Mat2 {
    Mat2::from_ints(k, e)
}

/// The order generated by two small integral matrices, when it is full.
pub fn small_order(p: u64, a: [i64; 4], b: [i64; 4]) -> Option<Order> {
    let k = Field::base(p).unwrap();
    order_from_generators(&k, &[int_matrix(&k, a), int_matrix(&k, b)]).ok()
}

pub fn entries() -> impl Strategy<Value = [i64; 4]> {
    [-8i64..9, -8i64..9, -8i64..9, -8i64..9]
}
