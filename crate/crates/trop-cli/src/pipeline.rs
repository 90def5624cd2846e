//! The single-matrix verdict pipeline shared by `analyze` and `campaign`:
//! profile, schemes, measured transients, bound evaluations, anomalies.

use serde::Serialize;
use trop_core::bounds::{t1_bounds_profiled, t2_bounds_profiled, BoundReport};
use trop_core::graph::profile;
use trop_core::rank::Factorization;
use trop_core::schemes::{self, SchemeChoice};
use trop_core::thresholds::{walk_reduction_threshold_with, ThresholdQuery};
use trop_core::transient::TransientLab;
use trop_core::{Result, TropMatrix, TropScalar};

#[derive(Serialize, Clone)]
pub struct BoundVerdict {
    #[serde(flatten)]
    pub report: BoundReport,
    pub pass: bool,
}

#[derive(Serialize, Clone)]
pub struct SchemeVerdict {
    pub scheme: String,
    pub removed_nodes: Vec<usize>,
    pub threshold: Option<String>,
    pub t1: u64,
    pub t2: u64,
    pub t1_certified: bool,
    pub t2_certified: bool,
    pub t1_bounds: Vec<BoundVerdict>,
    pub t2_bounds: Vec<BoundVerdict>,
}

#[derive(Serialize, Clone)]
pub struct VerdictRow {
    pub matrix_id: usize,
    pub dim: u64,
    pub gamma: u64,
    pub g_hat: u64,
    pub sigma: u64,
    pub sigma_hat: u64,
    pub rank: Option<u64>,
    pub t: u64,
    pub t_certified: bool,
    pub schemes: Vec<SchemeVerdict>,
    pub anomalies: Vec<String>,
}

fn attach_verdicts(bounds: Vec<BoundReport>, measured: u64) -> Vec<BoundVerdict> {
    bounds
        .into_iter()
        .map(|report| {
            let pass = report.admits(measured);
            BoundVerdict { report, pass }
        })
        .collect()
}

/// Walk reduction thresholds of the critical components, feeding the sharp
/// `T2` bound.
fn critical_twr(a: &TropMatrix, mult: u64) -> Result<Vec<u64>> {
    let prof = profile(a)?;
    let lambda = prof.require_lambda()?.clone();
    let norm = TropMatrix::scalar_mul(&TropScalar::Finite(-lambda), a)?;
    let mut out = Vec::new();
    for comp in &prof.critical()?.components {
        let q = ThresholdQuery::new(
            comp.nodes.iter().copied().collect(),
            comp.arcs.iter().copied().collect(),
            comp.cyclicity,
        );
        out.push(walk_reduction_threshold_with(&norm, &q, mult)?);
    }
    Ok(out)
}

/// Runs the full pipeline for one matrix.
pub fn verdict_row(
    matrix_id: usize,
    a: &TropMatrix,
    schemes_wanted: &[SchemeChoice],
    fac: Option<&Factorization>,
    mult: u64,
) -> Result<VerdictRow> {
    let mut lab = TransientLab::with_mult(a, mult)?;
    let crit = lab.prof.critical()?;
    let (g_hat, sigma, sigma_hat) = (crit.g_hat, crit.sigma, crit.sigma_hat);
    let gamma = lab.prof.cyclicity.expect("irreducible matrices have cycles");
    let rank = match fac {
        None => None,
        Some(f) => {
            if !trop_core::rank::verify_factorization(a, f)? {
                return Err(trop_core::TropError::Factorization);
            }
            Some(f.rank_bound)
        }
    };
    let twr = critical_twr(a, mult)?;

    let t_res = lab.measure_t()?;
    let mut rows = Vec::new();
    let mut anomalies = Vec::new();
    for &scheme in schemes_wanted {
        let exp = schemes::build(scheme, a)?;
        let t1 = lab.measure_t1(&exp)?;
        let t2 = lab.measure_t2(&exp)?;
        let t1_bounds = attach_verdicts(
            t1_bounds_profiled(&lab.prof, scheme, rank)?,
            t1.value,
        );
        let t2_bounds = attach_verdicts(
            t2_bounds_profiled(a, &lab.prof, &exp, rank, Some(&twr))?,
            t2.value,
        );
        for b in t1_bounds.iter().chain(t2_bounds.iter()) {
            if b.report.applicable && !b.pass {
                anomalies.push(format!(
                    "matrix {matrix_id} scheme {scheme}: bound {} = {} violated",
                    b.report.name, b.report.value
                ));
            }
        }
        if t_res.value > t1.value.max(t2.value) {
            anomalies.push(format!(
                "matrix {matrix_id} scheme {scheme}: T = {} exceeds max(T1, T2) = {}",
                t_res.value,
                t1.value.max(t2.value)
            ));
        }
        if !t1.certified || !t2.certified {
            anomalies.push(format!(
                "matrix {matrix_id} scheme {scheme}: uncertified measurement"
            ));
        }
        rows.push(SchemeVerdict {
            scheme: scheme.short().to_string(),
            removed_nodes: exp.removed_nodes.iter().copied().collect(),
            threshold: exp.threshold.as_ref().map(|t| t.to_string()),
            t1: t1.value,
            t2: t2.value,
            t1_certified: t1.certified,
            t2_certified: t2.certified,
            t1_bounds,
            t2_bounds,
        });
    }
    Ok(VerdictRow {
        matrix_id,
        dim: a.rows() as u64,
        gamma,
        g_hat,
        sigma,
        sigma_hat,
        rank,
        t: t_res.value,
        t_certified: t_res.certified,
        schemes: rows,
        anomalies,
    })
}

/// One CSV line per (matrix, scheme, bound), long format, versioned.
pub const CSV_HEADER: &str = "fmt_version,matrix_id,scheme,dim,gamma,g_hat,sigma,sigma_hat,rank,t,t1,t2,t_certified,t1_certified,t2_certified,bound,value,applicable,reason,pass";

pub fn csv_lines(row: &VerdictRow, out: &mut String) {
    let rank = row
        .rank
        .map(|r| r.to_string())
        .unwrap_or_else(|| "".to_string());
    for sv in &row.schemes {
        for b in sv.t1_bounds.iter().chain(sv.t2_bounds.iter()) {
            out.push_str(&format!(
                "1,{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
                row.matrix_id,
                sv.scheme,
                row.dim,
                row.gamma,
                row.g_hat,
                row.sigma,
                row.sigma_hat,
                rank,
                row.t,
                sv.t1,
                sv.t2,
                row.t_certified,
                sv.t1_certified,
                sv.t2_certified,
                b.report.name,
                b.report.value,
                b.report.applicable,
                b.report.reason.clone().unwrap_or_default().replace(',', ";"),
                b.pass,
            ));
        }
    }
}
