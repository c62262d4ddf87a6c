//! Parameter sweeps producing figure-ready tables.

use serde::Serialize;

use crate::analytic::omega;
use crate::geometry::{classify, CaseId, CylinderScene};
use crate::oracle::{quad_omega, OracleEstimate};

/// Scene parameter varied by a sweep.
///
/// `L1` moves the near end plane (z1) while keeping z2 fixed; for scenes
/// axially beyond the source this is the near-cap distance of the closed
/// forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SweepParam {
    Alpha,
    D,
    L1,
    Z2,
}

impl SweepParam {
    pub fn name(&self) -> &'static str {
        match self {
            SweepParam::Alpha => "alpha",
            SweepParam::D => "d",
            SweepParam::L1 => "l1",
            SweepParam::Z2 => "z2",
        }
    }
}

impl std::str::FromStr for SweepParam {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "alpha" => Ok(SweepParam::Alpha),
            "d" => Ok(SweepParam::D),
            "l1" | "z1" => Ok(SweepParam::L1),
            "z2" => Ok(SweepParam::Z2),
            other => Err(format!("unknown sweep parameter '{other}' (alpha|d|l1|z2)")),
        }
    }
}

/// One evaluated grid point. Invalid points carry the error code instead of
/// aborting the sweep.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub param_name: &'static str,
    pub param_value: f64,
    pub case: Option<CaseId>,
    pub omega: Option<f64>,
    pub omega_cyl: Option<f64>,
    pub omega_circ: Option<f64>,
    pub error: Option<&'static str>,
    pub oracle: Option<OracleEstimate>,
}

fn apply(template: &CylinderScene, param: SweepParam, v: f64) -> CylinderScene {
    let mut s = *template;
    match param {
        SweepParam::Alpha => s.alpha = v,
        SweepParam::D => s.d = v,
        SweepParam::L1 => s.z1 = v,
        SweepParam::Z2 => s.z2 = v,
    }
    s
}

/// Evaluate the analytic emission fraction over a parameter grid.
pub fn sweep(template: &CylinderScene, param: SweepParam, values: &[f64]) -> Vec<SweepRow> {
    sweep_rows(template, param, values, None)
}

/// Like [`sweep`], optionally attaching a quadrature estimate per row at the
/// given absolute tolerance.
pub fn sweep_rows(
    template: &CylinderScene,
    param: SweepParam,
    values: &[f64],
    oracle_abs_tol: Option<f64>,
) -> Vec<SweepRow> {
    values
        .iter()
        .map(|&v| {
            let name = param.name();
            let scene = apply(template, param, v);
            let case = match classify(&scene) {
                Ok(c) => c,
                Err(e) => {
                    return SweepRow {
                        param_name: name,
                        param_value: v,
                        case: None,
                        omega: None,
                        omega_cyl: None,
                        omega_circ: None,
                        error: Some(e.code()),
                        oracle: None,
                    }
                }
            };
            let sa = match omega(&case) {
                Ok(sa) => sa,
                Err(e) => {
                    return SweepRow {
                        param_name: name,
                        param_value: v,
                        case: Some(case.case_id),
                        omega: None,
                        omega_cyl: None,
                        omega_circ: None,
                        error: Some(e.code()),
                        oracle: None,
                    }
                }
            };
            // Split by the contributing surface: case i is all lateral,
            // case iii is all near-disk.
            let (cyl, circ) = match (case.case_id, sa.breakdown) {
                (_, Some(b)) => (b.cyl, b.circ),
                (CaseId::I, None) => (sa.value, 0.0),
                (CaseId::III, None) => (0.0, sa.value),
                (CaseId::II, None) => unreachable!("case ii always splits"),
            };
            let oracle = oracle_abs_tol.and_then(|tol| quad_omega(&case, tol).ok());
            SweepRow {
                param_name: name,
                param_value: v,
                case: Some(case.case_id),
                omega: Some(sa.value),
                omega_cyl: Some(cyl),
                omega_circ: Some(circ),
                error: None,
                oracle,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_point_matches_omega() {
        let template = CylinderScene { r: 1.0, d: 2.0, z1: 5.0, z2: 15.0, alpha: 0.0 };
        let rows = sweep(&template, SweepParam::Alpha, &[0.5]);
        assert_eq!(rows.len(), 1);
        let c = classify(&apply(&template, SweepParam::Alpha, 0.5)).unwrap();
        assert_eq!(rows[0].omega.unwrap(), omega(&c).unwrap().value);
        assert_eq!(rows[0].param_name, "alpha");
    }

    #[test]
    fn invalid_points_are_flagged_not_fatal() {
        // Sweeping d across the radius with a straddling cylinder walks into
        // source-inside territory.
        let template = CylinderScene { r: 1.0, d: 2.0, z1: -1.0, z2: 1.0, alpha: 0.0 };
        let rows = sweep(&template, SweepParam::D, &[0.2, 0.9, 1.5, 2.0]);
        assert_eq!(rows[0].error, Some("SourceInsideDetector"));
        assert_eq!(rows[1].error, Some("SourceInsideDetector"));
        assert!(rows[2].error.is_none() && rows[3].error.is_none());
    }

    #[test]
    fn surface_split_by_case() {
        let t3 = CylinderScene { r: 1.0, d: 0.5, z1: 2.0, z2: 12.0, alpha: 0.0 };
        let row = &sweep(&t3, SweepParam::Alpha, &[0.3])[0];
        assert_eq!(row.omega_cyl, Some(0.0));
        assert_eq!(row.omega_circ, row.omega);

        let t1 = CylinderScene { r: 1.0, d: 2.0, z1: -5.0, z2: 5.0, alpha: 0.0 };
        let row = &sweep(&t1, SweepParam::Alpha, &[0.3])[0];
        assert_eq!(row.omega_circ, Some(0.0));
        assert_eq!(row.omega_cyl, row.omega);
    }

    #[test]
    fn oracle_column_on_request() {
        let t = CylinderScene { r: 1.0, d: 2.0, z1: 5.0, z2: 15.0, alpha: 0.4 };
        let rows = sweep_rows(&t, SweepParam::Alpha, &[0.4], Some(1e-9));
        let est = rows[0].oracle.expect("oracle requested");
        assert!((est.value - rows[0].omega.unwrap()).abs() < 1e-8);
    }
}
