//! Cone membership and graded parts.

use std::path::Path;

use nalgebra::DVector;
use serde_json::json;

use eulerwedge::cones::{graded_cone_parts, lie_wedge_lsw, SampleOptions};
use eulerwedge::liealg;

use super::Outcome;
use crate::input::{columns, load_algebra, parse_list, ConeJson, Context};

pub fn member(ctx: &mut Context, cone: &Path, x: &str) -> Outcome {
    let c = ctx.read_json::<ConeJson>(cone)?.build()?;
    let x = DVector::from_vec(parse_list(x)?);
    Ok((json!({ "member": c.member(&x, ctx.tol)? }), 0))
}

pub fn parts(ctx: &mut Context, cone: &Path, algebra: &str, h: &str) -> Outcome {
    let c = ctx.read_json::<ConeJson>(cone)?.build()?;
    let l = load_algebra(ctx, algebra)?;
    let h = l.element(&parse_list(h)?)?;
    let g = liealg::grading(&l, &h, ctx.eigen_tol)?;
    let opts = SampleOptions { seed: ctx.seed, ..SampleOptions::default() };
    let p = graded_cone_parts(&c, &l, &h, &g, opts)?;
    let w = lie_wedge_lsw(&g.zero, &p.plus, &p.minus)?;
    let gens = |c: &eulerwedge::cones::PolyhedralCone| c.generators().iter().map(|v| v.iter().cloned().collect::<Vec<f64>>()).collect::<Vec<_>>();
    Ok((
        json!({
            "plus": gens(&p.plus),
            "minus": gens(&p.minus),
            "g0_basis": columns(&g.zero),
            "lie_wedge_edge_dim": w.edge.dim(),
        }),
        0,
    ))
}
