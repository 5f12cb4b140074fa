//! Euler nodes, symmetry flags and grading dimensions of a root system.

use anyhow::Result;
use serde_json::{json, Value};

use eulerwedge::par;
use eulerwedge::rootsys::{build_root_system, Family, RootSystemSpec};

use super::Outcome;
use crate::input::{input_error, Context};

/// `N` or an inclusive range `A-B`.
fn parse_ranks(s: &str) -> Result<Vec<usize>> {
    let bad = || input_error(format!("`{s}` is not a rank or a range A-B"));
    let parse = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
    match s.split_once('-') {
        Some((a, b)) => {
            let (a, b) = (parse(a)?, parse(b)?);
            if a > b {
                return Err(bad());
            }
            Ok((a..=b).collect())
        }
        None => Ok(vec![parse(s)?]),
    }
}

pub fn classify_one(family: Family, rank: usize) -> Result<Value> {
    let rs = build_root_system(RootSystemSpec::new(family, rank)?)?;
    let mut nodes = Vec::new();
    for j in 1..=rank {
        let euler = rs.is_euler_node(j)?;
        let (symmetric, dims) = if euler {
            let (p, z, m) = rs.grading_dimensions(j)?;
            (json!(rs.is_symmetric_euler(j)?), json!([p, z, m]))
        } else {
            (json!(false), Value::Null)
        };
        nodes.push(json!({ "j": j, "euler": euler, "symmetric": symmetric, "dims": dims }));
    }
    Ok(json!({ "family": family.to_string(), "rank": rank, "nodes": nodes }))
}

pub fn run(ctx: &Context, family: &str, ranks: &str) -> Outcome {
    let family: Family = family.parse().map_err(|_| input_error(format!("unknown family `{family}`")))?;
    let ranks = parse_ranks(ranks)?;
    let mut out = par::map_slice(ctx.exec, &ranks, |&n| classify_one(family, n))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let v = if out.len() == 1 { out.remove(0) } else { json!({ "batch": out }) };
    Ok((v, 0))
}

/// Plain table for `--format text`.
pub fn text_table(results: &Value) -> Option<String> {
    let one = |r: &Value| -> Option<String> {
        let mut s = format!("{}{}\n  j  euler  symmetric  dims\n", r["family"].as_str()?, r["rank"]);
        for n in r["nodes"].as_array()? {
            let dims = match n["dims"].as_array() {
                Some(d) => d.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","),
                None => "-".into(),
            };
            s.push_str(&format!("{:>3}  {:<5}  {:<9}  {}\n", n["j"], n["euler"], n["symmetric"], dims));
        }
        Some(s)
    };
    match results.get("batch") {
        Some(b) => b.as_array()?.iter().map(one).collect::<Option<Vec<_>>>().map(|v| v.join("\n")),
        None => one(results),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_ranks("3").unwrap(), vec![3]);
        assert_eq!(parse_ranks("2-4").unwrap(), vec![2, 3, 4]);
        assert!(parse_ranks("4-2").is_err());
    }

    #[test]
    fn b3_has_one_euler_node() {
        let v = classify_one(Family::B, 3).unwrap();
        let euler: Vec<u64> =
            v["nodes"].as_array().unwrap().iter().filter(|n| n["euler"] == true).map(|n| n["j"].as_u64().unwrap()).collect();
        assert_eq!(euler, vec![1]);
    }
}
