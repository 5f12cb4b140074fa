//! Euler couples: the group action, duality and the wedge order.

use std::path::Path;

use nalgebra::DVector;
use serde::Deserialize;
use serde_json::{json, Value};

use eulerwedge::liealg::LieAlgebra;
use eulerwedge::wedgespace::{
    act_on_wedge, dual_wedge, wedge_leq, EulerCouple, GradedGroupElement, OrderVerdict, SearchOptions, WedgeOrderConfig,
};

use super::Outcome;
use crate::input::{load_algebra, matrix, rows, ConeJson, Context, GroupJson, Rows};

#[derive(Deserialize)]
struct TauJson {
    matrix: Rows,
}

#[derive(Deserialize)]
struct CoupleInput {
    algebra: String,
    h: Vec<f64>,
    /// `Ad(tau)`; defaults to `tau_h`.
    tau: Option<TauJson>,
    g: Option<GroupJson>,
}

#[derive(Deserialize)]
#[serde(rename_all = "snake_case")]
enum ConfigJson {
    Poincare(usize),
    Custom { algebra: String, h: Vec<f64>, cone: ConeJson },
}

#[derive(Deserialize)]
struct LeqInput {
    config: ConfigJson,
    g1: GroupJson,
    g2: GroupJson,
}

fn couple(ctx: &mut Context, input: &CoupleInput) -> anyhow::Result<(LieAlgebra, EulerCouple)> {
    let l = load_algebra(ctx, &input.algebra)?;
    let h = l.element(&input.h)?;
    let w = match &input.tau {
        Some(t) => EulerCouple::new(h, GradedGroupElement::new(matrix(&t.matrix)?, -1), ctx.tol.max(1e-8))?,
        None => EulerCouple::standard(&l, &h, ctx.eigen_tol)?,
    };
    Ok((l, w))
}

fn couple_value(l: &LieAlgebra, w: &EulerCouple, tol: f64) -> anyhow::Result<Value> {
    Ok(json!({
        "h": w.h.iter().cloned().collect::<Vec<f64>>(),
        "tau": rows(&w.tau.matrix),
        "is_euler_couple": w.is_euler_couple(l, tol)?,
    }))
}

pub fn act(ctx: &mut Context, path: &Path) -> Outcome {
    let input: CoupleInput = ctx.read_json(path)?;
    let (l, w) = couple(ctx, &input)?;
    let g = match &input.g {
        Some(g) => g.build(&l, ctx.tol)?,
        None => GradedGroupElement::identity(l.dim()),
    };
    let moved = act_on_wedge(&g, &w)?;
    Ok((json!({ "couple": couple_value(&l, &moved, ctx.eigen_tol)?, "parity": g.parity }), 0))
}

pub fn dual(ctx: &mut Context, path: &Path) -> Outcome {
    let input: CoupleInput = ctx.read_json(path)?;
    let (l, w) = couple(ctx, &input)?;
    Ok((json!({ "couple": couple_value(&l, &dual_wedge(&w), ctx.eigen_tol)? }), 0))
}

pub fn leq(ctx: &mut Context, path: &Path) -> Outcome {
    let input: LeqInput = ctx.read_json(path)?;
    let cfg = match &input.config {
        ConfigJson::Poincare(d) => WedgeOrderConfig::poincare(*d)?,
        ConfigJson::Custom { algebra, h, cone } => {
            let l = load_algebra(ctx, algebra)?;
            let h: DVector<f64> = l.element(h)?;
            let base = EulerCouple::standard(&l, &h, ctx.eigen_tol)?;
            WedgeOrderConfig::new(&l, base, cone.build()?, ctx.tol)?
        }
    };
    let search = SearchOptions { seed: ctx.seed, exec: ctx.exec, ..SearchOptions::default() };
    let cfg = cfg.with_search(search);
    let g1 = input.g1.build(&cfg.algebra, ctx.tol)?;
    let g2 = input.g2.build(&cfg.algebra, ctx.tol)?;
    let verdict = match wedge_leq(&cfg, &g1, &g2)? {
        OrderVerdict::True => "true",
        OrderVerdict::False => "false",
        OrderVerdict::Unknown => "unknown",
    };
    Ok((json!({ "leq": verdict }), 0))
}
