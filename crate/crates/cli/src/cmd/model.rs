//! Grid model diagnostics at two resolutions with a trend verdict.

use serde_json::json;

use eulerwedge::models::{
    self, build_aff_rep, build_u1_current, codim_study, commutator_residual, flatness_refinement, kms_refinement,
    regularity_demo, ModelError, ModelKind,
};

use super::Outcome;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Demo {
    Kms,
    Codim,
    Regularity,
    Commutator,
    Flatness,
}

const REGULARITY_SAMPLE: [(f64, f64); 4] = [(0.05, 1.0), (-0.05, 1.0), (0.0, 1.2), (0.0, 0.8)];
const REGULARITY_SCALES: [f64; 3] = [1.0, 0.1, 0.01];
const REGULARITY_TOL: f64 = 1e-6;

pub fn u1(n: usize, demo: Demo) -> Outcome {
    let v = match demo {
        Demo::Kms => {
            let r = kms_refinement(n, models::U1_P_RANGE.0, models::U1_P_RANGE.1)?;
            json!({ "coarse": r.coarse, "fine": r.fine, "coarse_n": r.coarse_n, "fine_n": r.fine_n, "ratio": r.ratio,
                    "trend": if r.halves() { "converging" } else { "not_converging" } })
        }
        Demo::Codim => {
            let coarse = codim_study(n, (-1.0, 1.0), &models::CODIM_PAIRS)?;
            let fine = codim_study(2 * n, (-1.0, 1.0), &models::CODIM_PAIRS)?;
            let stable = coarse.iter().zip(&fine).all(|(a, b)| a.codim == b.codim && a.codim == a.l - a.k);
            json!({ "coarse_n": n, "fine_n": 2 * n, "coarse": coarse, "fine": fine,
                    "trend": if stable { "stable" } else { "unstable" } })
        }
        Demo::Regularity => {
            let run = |n: usize| -> Result<_, ModelError> {
                regularity_demo(&build_u1_current(n, 1e-3, 1e3)?, &REGULARITY_SAMPLE, &REGULARITY_SCALES, REGULARITY_TOL)
            };
            let (coarse, fine) = (run(n)?, run(2 * n)?);
            let recovers = |pts: &[models::RegularityPoint]| pts.windows(2).all(|w| w[1].cyclic_rank >= w[0].cyclic_rank);
            json!({ "coarse_n": n, "fine_n": 2 * n, "coarse": coarse, "fine": fine, "sample": REGULARITY_SAMPLE,
                    "trend": if recovers(&coarse) && recovers(&fine) { "rank_recovers" } else { "rank_drops" } })
        }
        Demo::Commutator | Demo::Flatness => return Err(ModelError::WrongModel(ModelKind::Affine).into()),
    };
    Ok((v, 0))
}

pub fn aff(n: usize, l: f64, demo: Demo) -> Outcome {
    let v = match demo {
        Demo::Commutator => {
            let (a, b) = (commutator_residual(&build_aff_rep(n, l)?), commutator_residual(&build_aff_rep(2 * n, l)?));
            json!({ "coarse_n": n, "fine_n": 2 * n, "coarse": a, "fine": b, "ratio": b / a,
                    "trend": if b <= 0.5 * a { "converging" } else { "not_converging" } })
        }
        Demo::Flatness => {
            let (a, b) = flatness_refinement(n, l)?;
            let flat = a.flat && b.flat;
            json!({ "coarse": a, "fine": b, "limit": models::FLATNESS_LIMIT,
                    "trend": if flat { "no_isolated_eigenvectors" } else { "localized" } })
        }
        Demo::Kms | Demo::Codim | Demo::Regularity => return Err(ModelError::WrongModel(ModelKind::U1Current).into()),
    };
    Ok((v, 0))
}
