//! JSON encodings. Rationals are strings `"a/b"`; elements of a quadratic
//! field are pairs `["a", "b"]` meaning `a + bθ`.

use num::BigRational;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::ghost::{ExtensionContext, GhostPresentation};
use crate::lattice::Lattice;
use crate::matrix::Mat2;
use crate::orders::{classify_bass, BassClass, Order};
use crate::padic::{format_rational, parse_rational};
use crate::tree::{BranchDescriptor, ProjPoint, Stem, Vertex};

fn perr(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

pub fn rational_from_json(v: &Value) -> Result<BigRational> {
    match v {
        Value::String(s) => parse_rational(s).ok_or_else(|| perr(format!("bad rational {s:?}"))),
        Value::Number(n) => n
            .as_i64()
            .map(crate::padic::rat)
            .ok_or_else(|| perr(format!("bad number {n}"))),
        _ => Err(perr(format!("expected a rational, got {v}"))),
    }
}

pub fn scalar_to_json(x: &Scalar) -> Value {
    let (a, b) = x.to_theta_coords();
    if x.field().is_base() {
        json!(format_rational(&a))
    } else {
        json!([format_rational(&a), format_rational(&b)])
    }
}

pub fn scalar_from_json(field: &Field, v: &Value) -> Result<Scalar> {
    match v {
        Value::Array(xs) if xs.len() == 2 => {
            let a = rational_from_json(&xs[0])?;
            let b = rational_from_json(&xs[1])?;
            field
                .from_theta_coords(a, b)
                .map_err(|_| perr("pair scalar over the base field"))
        }
        _ => Ok(field.from_rational(rational_from_json(v)?)),
    }
}

pub fn field_to_json(f: &Field) -> Value {
    match f.defining_poly() {
        None => json!({"p": f.p(), "g": null}),
        Some((g0, g1)) => json!({"p": f.p(), "g": [format_rational(&g0), format_rational(&g1)]}),
    }
}

pub fn field_from_json(v: &Value) -> Result<Field> {
    let p = v
        .get("p")
        .and_then(Value::as_u64)
        .ok_or_else(|| perr("field needs an integer \"p\""))?;
    let k = Field::base(p)?;
    match v.get("g") {
        None | Some(Value::Null) => Ok(k),
        Some(Value::Array(g)) if g.len() == 2 => {
            Field::quadratic(&k, rational_from_json(&g[0])?, rational_from_json(&g[1])?)
        }
        Some(other) => Err(perr(format!("bad polynomial {other}"))),
    }
}

/// `[[a, b], [c, d]]`.
pub fn mat_to_json(m: &Mat2) -> Value {
    json!([
        [scalar_to_json(&m.a), scalar_to_json(&m.b)],
        [scalar_to_json(&m.c), scalar_to_json(&m.d)]
    ])
}

pub fn mat_from_json(field: &Field, v: &Value) -> Result<Mat2> {
    let rows = v
        .as_array()
        .filter(|r| r.len() == 2)
        .ok_or_else(|| perr("matrix needs 2 rows"))?;
    let mut e = Vec::with_capacity(4);
    for row in rows {
        let row = row
            .as_array()
            .filter(|r| r.len() == 2)
            .ok_or_else(|| perr("matrix rows need 2 entries"))?;
        for x in row {
            e.push(scalar_from_json(field, x)?);
        }
    }
    Ok(Mat2::from_vec(&e))
}

pub fn lattice_to_json(l: &Lattice) -> Value {
    let basis: Vec<Value> = l
        .basis()
        .iter()
        .map(|c| Value::Array(c.iter().map(scalar_to_json).collect()))
        .collect();
    json!({"n": l.dim(), "basis": basis})
}

/// A vertex as its canonical basis matrix (basis vectors are the columns).
pub fn vertex_to_json(v: &Vertex) -> Value {
    mat_to_json(&v.matrix())
}

pub fn vertex_from_json(field: &Field, v: &Value) -> Result<Vertex> {
    Vertex::from_matrix(&mat_from_json(field, v)?).map_err(|_| perr("singular vertex basis"))
}

pub fn proj_to_json(z: &ProjPoint) -> Value {
    json!([scalar_to_json(z.x()), scalar_to_json(z.y())])
}

pub fn descriptor_to_json(d: &BranchDescriptor) -> Value {
    match d {
        BranchDescriptor::Tube { stem, width } => {
            let stem = match stem {
                Stem::Finite(p) => json!({
                    "type": "finite",
                    "length": p.len(),
                    "vertices": p.vertices().iter().map(vertex_to_json).collect::<Vec<_>>(),
                }),
                Stem::Infinite(a, b) => {
                    json!({"type": "line", "limits": [proj_to_json(a), proj_to_json(b)]})
                }
                Stem::Ray(v, z) => {
                    json!({"type": "ray", "start": vertex_to_json(v), "limit": proj_to_json(z)})
                }
            };
            json!({"kind": "tube", "stem": stem, "width": width})
        }
        BranchDescriptor::Foliage { limit, anchor } => {
            json!({"kind": "foliage", "limit": proj_to_json(limit), "anchor": vertex_to_json(anchor)})
        }
    }
}

pub fn order_basis_json(o: &Order) -> Value {
    Value::Array(o.basis_matrices().iter().map(mat_to_json).collect())
}

pub fn classification_to_json(c: &BassClass) -> Value {
    match c {
        BassClass::Eichler { level, .. } => json!({"type": "eichler", "level": level}),
        BassClass::E1 { lambda, r, vertex } => json!({
            "type": "E1",
            "r": r,
            "generator": mat_to_json(&lambda.u),
            "vertex": vertex_to_json(vertex),
        }),
        BassClass::E2 { lambda, r, edge } => json!({
            "type": "E2",
            "r": r,
            "generator": mat_to_json(&lambda.u),
            "edge": [vertex_to_json(&edge.0), vertex_to_json(&edge.1)],
        }),
    }
}

/// Full report for an order: basis, invariants, closure, classification
/// and branch.
pub fn order_report(o: &Order) -> Result<Value> {
    let (r, closure) = o.closure();
    let branch = o.branch();
    let bass = o.is_bass();
    let classification = if bass {
        classification_to_json(&classify_bass(o)?)
    } else {
        Value::Null
    };
    let eichler = match o.eichler_level() {
        Some(level) => json!({"level": level}),
        None => Value::Null,
    };
    Ok(json!({
        "field": field_to_json(o.field()),
        "basis": order_basis_json(o),
        "disc_valuation": o.disc_valuation(),
        "gorenstein": {"r": r, "is_gorenstein": r == 0, "closure_basis": order_basis_json(&closure)},
        "bass": bass,
        "eichler": eichler,
        "classification": classification,
        "branch": descriptor_to_json(&branch),
    }))
}

/// Reads `{"field": …, "generators": [...]}` (or `"basis"`) into an order.
pub fn order_from_json(v: &Value) -> Result<Order> {
    let field = field_from_json(v.get("field").ok_or_else(|| perr("missing \"field\""))?)?;
    let gens = v
        .get("generators")
        .or_else(|| v.get("basis"))
        .and_then(Value::as_array)
        .ok_or_else(|| perr("missing \"generators\""))?;
    let mats = gens
        .iter()
        .map(|g| mat_from_json(&field, g))
        .collect::<Result<Vec<_>>>()?;
    crate::orders::order_from_generators(&field, &mats)
}

pub fn presentation_to_json(p: &GhostPresentation) -> Value {
    json!({
        "extension": field_to_json(p.ctx.ext()),
        "vertices": p.vertices.iter().map(vertex_to_json).collect::<Vec<_>>(),
        "claimed_order": {"field": field_to_json(p.claimed.field()), "basis": order_basis_json(&p.claimed)},
        "verified": p.verify(),
    })
}

pub fn presentation_from_json(v: &Value) -> Result<GhostPresentation> {
    let l = field_from_json(
        v.get("extension")
            .ok_or_else(|| perr("missing \"extension\""))?,
    )?;
    let ctx = if l.is_base() {
        ExtensionContext::trivial(&l)
    } else {
        ExtensionContext::new(&l)
    };
    let vertices = v
        .get("vertices")
        .and_then(Value::as_array)
        .ok_or_else(|| perr("missing \"vertices\""))?
        .iter()
        .map(|x| vertex_from_json(&l, x))
        .collect::<Result<Vec<_>>>()?;
    let claimed = order_from_json(
        v.get("claimed_order")
            .ok_or_else(|| perr("missing \"claimed_order\""))?,
    )?;
    Ok(GhostPresentation {
        ctx,
        vertices,
        claimed,
    })
}
