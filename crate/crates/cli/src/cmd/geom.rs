//! Wedge regions, boost flows and compressions in Minkowski and de Sitter space.

use std::path::Path;

use nalgebra::DVector;
use serde_json::json;

use eulerwedge::causal::{
    self, compression_member_poincare, flow, in_wedge_wr, positivity_region_member, sampled_compression_check,
    EulerFlow, SampleVerdict, Space, SpacetimePoint, WedgeRegion,
};

use super::Outcome;
use crate::input::{parse_list, Context, IsometryJson};

pub fn wedge_member(x: &str) -> Outcome {
    let m = SpacetimePoint::new(&parse_list(x)?);
    Ok((json!({ "member": in_wedge_wr(&m) }), 0))
}

pub fn flow_point(x: &str, t: f64) -> Outcome {
    let x = DVector::from_vec(parse_list(x)?);
    let y = flow(EulerFlow::Boost01, x.len(), t).apply(&x);
    Ok((json!({ "image": y.iter().cloned().collect::<Vec<f64>>(), "in_wedge": causal::in_wedge_wr(&SpacetimePoint { coords: y }) }), 0))
}

pub fn positivity(space: Space, x: &str) -> Outcome {
    let m = SpacetimePoint::new(&parse_list(x)?);
    let field = causal::modular_vector_field(EulerFlow::Boost01, &m);
    Ok((
        json!({
            "member": positivity_region_member(space, &m)?,
            "field": field.iter().cloned().collect::<Vec<f64>>(),
        }),
        0,
    ))
}

pub fn compress(ctx: &mut Context, path: &Path, samples: usize) -> Outcome {
    let g = ctx.read_json::<IsometryJson>(path)?.build()?;
    let exact = compression_member_poincare(&g, ctx.tol)?;
    let region = WedgeRegion::standard(g.dim());
    let sampled = match sampled_compression_check(&g, &region, samples, ctx.seed, ctx.exec)? {
        SampleVerdict::ConsistentIn => json!({ "verdict": "consistent_in" }),
        SampleVerdict::WitnessOut(x) => {
            json!({ "verdict": "witness_out", "witness": x.iter().cloned().collect::<Vec<f64>>() })
        }
    };
    Ok((json!({ "member": exact, "sampled": sampled, "samples": samples }), 0))
}
