//! Full Euler analysis of elements of a Lie algebra.

use anyhow::Result;
use serde_json::json;

use eulerwedge::liealg::euler_report;
use eulerwedge::par;

use super::Outcome;
use crate::input::{load_algebra, parse_list, Context};

pub fn run(ctx: &mut Context, algebra: &str, hs: &[String]) -> Outcome {
    let l = load_algebra(ctx, algebra)?;
    let elements = hs.iter().map(|h| Ok(l.element(&parse_list(h)?)?)).collect::<Result<Vec<_>>>()?;
    let tol = ctx.eigen_tol;
    let reports = par::map_slice(ctx.exec, &elements, |h| euler_report(&l, h, tol))
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    let mut values = reports.iter().map(serde_json::to_value).collect::<Result<Vec<_>, _>>()?;
    let v = if values.len() == 1 {
        let mut r = values.remove(0);
        r["algebra_dim"] = json!(l.dim());
        r
    } else {
        json!({ "algebra_dim": l.dim(), "batch": values })
    };
    Ok((v, 0))
}
