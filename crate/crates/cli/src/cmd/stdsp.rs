//! Standard subspaces and their modular data.

use std::path::Path;

use serde::Deserialize;
use serde_json::json;

use eulerwedge::stdsp::{
    intersect_family, is_cyclic, is_separating, is_standard, modular_from_subspace, subspace_from_modular,
    symplectic_complement, tensor, ModularPair,
};

use super::Outcome;
use crate::input::{complex_matrix, complex_rows, matrix, rows, subspace_value, ComplexRows, Context, OpJson, Rows, SubspaceJson};

#[derive(Deserialize)]
struct ModularJson {
    delta: ComplexRows,
    j: Rows,
}

#[derive(Deserialize)]
struct IntersectJson {
    subspace: SubspaceJson,
    ops: Vec<OpJson>,
}

#[derive(Deserialize)]
struct TensorJson {
    a: SubspaceJson,
    b: SubspaceJson,
}

fn flags(v: &eulerwedge::linalg::Subspace) -> serde_json::Value {
    json!({ "cyclic": is_cyclic(v), "separating": is_separating(v), "standard": is_standard(v) })
}

pub fn from_modular(ctx: &mut Context, path: &Path) -> Outcome {
    let m: ModularJson = ctx.read_json(path)?;
    let p = ModularPair::new(complex_matrix(&m.delta)?, matrix(&m.j)?, ctx.tol.max(1e-10))?;
    let v = subspace_from_modular(&p)?;
    Ok((json!({ "subspace": subspace_value(&v), "flags": flags(&v) }), 0))
}

pub fn to_modular(ctx: &mut Context, path: &Path) -> Outcome {
    let v = ctx.read_json::<SubspaceJson>(path)?.build(ctx.tol)?;
    let p = modular_from_subspace(&v)?;
    Ok((json!({ "delta": complex_rows(&p.delta), "j": rows(&p.j) }), 0))
}

pub fn complement(ctx: &mut Context, path: &Path) -> Outcome {
    let v = ctx.read_json::<SubspaceJson>(path)?.build(ctx.tol)?;
    let c = symplectic_complement(&v);
    Ok((json!({ "subspace": subspace_value(&c), "flags": flags(&c) }), 0))
}

pub fn intersect(ctx: &mut Context, path: &Path) -> Outcome {
    let input: IntersectJson = ctx.read_json(path)?;
    let v = input.subspace.build(ctx.tol)?;
    let ops = input.ops.iter().map(|o| o.build(ctx.tol.max(1e-9))).collect::<anyhow::Result<Vec<_>>>()?;
    let w = intersect_family(&v, &ops, ctx.tol);
    Ok((json!({ "subspace": subspace_value(&w), "flags": flags(&w) }), 0))
}

pub fn tensor_product(ctx: &mut Context, path: &Path) -> Outcome {
    let input: TensorJson = ctx.read_json(path)?;
    let t = tensor(&input.a.build(ctx.tol)?, &input.b.build(ctx.tol)?)?;
    Ok((json!({ "subspace": subspace_value(&t), "flags": flags(&t) }), 0))
}
