//! Maximal and minimal nets on a finite wedge family.

use std::path::Path;

use serde::Deserialize;
use serde_json::json;

use eulerwedge::nets::{direct_net_report, graph_toy, h_max, h_min, NetConfig, WedgeFamily};

use super::Outcome;
use crate::input::{subspace_value, Context, IsometryJson, OpJson, RegionJson, SubspaceJson};

#[derive(Deserialize)]
struct ToyJson {
    lambda: f64,
    #[serde(default)]
    counterexample: bool,
    #[serde(default)]
    seed: u64,
}

#[derive(Deserialize)]
#[serde(rename_all = "snake_case")]
enum SceneJson {
    GraphToy(ToyJson),
    Explicit { spacetime_dim: usize, members: Vec<IsometryJson>, ops: Vec<OpJson>, v: SubspaceJson },
}

#[derive(Deserialize)]
struct FileJson {
    scene: SceneJson,
    #[serde(default)]
    regions: Vec<RegionJson>,
}

fn load(ctx: &mut Context, path: &Path) -> anyhow::Result<(NetConfig, Vec<RegionJson>)> {
    let file: FileJson = ctx.read_json(path)?;
    let cfg = match file.scene {
        SceneJson::GraphToy(t) => graph_toy(t.lambda, t.counterexample, t.seed)?,
        SceneJson::Explicit { spacetime_dim, members, ops, v } => {
            let members = members.iter().map(IsometryJson::build).collect::<anyhow::Result<_>>()?;
            let ops = ops.iter().map(|o| o.build(ctx.tol.max(1e-9))).collect::<anyhow::Result<_>>()?;
            NetConfig::new(WedgeFamily { spacetime_dim, members }, ops, v.build(ctx.tol)?, ctx.tol.max(1e-9))?
        }
    };
    Ok((cfg, file.regions))
}

pub fn hmax(ctx: &mut Context, path: &Path) -> Outcome {
    let (cfg, regions) = load(ctx, path)?;
    let out = regions
        .iter()
        .map(|r| Ok(subspace_value(&h_max(&cfg, &r.build()?)?)))
        .collect::<anyhow::Result<Vec<_>>>()?;
    Ok((json!({ "h_max": out }), 0))
}

pub fn hmin(ctx: &mut Context, path: &Path) -> Outcome {
    let (cfg, regions) = load(ctx, path)?;
    let out = regions
        .iter()
        .map(|r| Ok(subspace_value(&h_min(&cfg, &r.build()?)?)))
        .collect::<anyhow::Result<Vec<_>>>()?;
    Ok((json!({ "h_min": out }), 0))
}

pub fn report(ctx: &mut Context, path: &Path) -> Outcome {
    let (cfg, _) = load(ctx, path)?;
    let r = direct_net_report(&cfg)?;
    Ok((json!({ "report": serde_json::to_value(&r)?, "verdicts": r.verdicts(), "symmetries": cfg.symmetries() }), 0))
}
