//! `trop analyze`: one-matrix dump with verdicts.

use crate::pipeline::{verdict_row, VerdictRow};
use crate::SchemeArg;
use std::path::Path;
use trop_core::graph::profile;
use trop_core::io;
use trop_core::rank::{lift, Factorization};
use trop_core::schemes::SchemeChoice;
use trop_core::transient::{measure_t1, TransientLab};
use trop_core::{Result, TropError, TropMatrix};

pub fn schemes_for(arg: SchemeArg) -> Vec<SchemeChoice> {
    match arg {
        SchemeArg::N => vec![SchemeChoice::Nachtigall],
        SchemeArg::Ha => vec![SchemeChoice::HartmannArguelles],
        SchemeArg::Ct => vec![SchemeChoice::CycleThreshold],
        SchemeArg::All => SchemeChoice::ALL.to_vec(),
    }
}

fn print_profile(a: &TropMatrix) -> Result<()> {
    let prof = profile(a)?;
    println!("matrix ({}x{}):", a.rows(), a.cols());
    print!("{a}");
    println!("strongly connected: {}", prof.is_strongly_connected);
    match &prof.lambda {
        None => println!("lambda: none (acyclic)"),
        Some(l) => println!("lambda: {l}"),
    }
    if let Some(g) = prof.cyclicity {
        println!("cyclicity: {g}");
    }
    if let (Some(g), Some(c)) = (prof.girth, prof.circumference) {
        println!("girth: {g}, circumference: {c}");
    }
    if let Ok(crit) = prof.critical() {
        println!(
            "critical graph: {} nodes, {} arcs, sigma = {}, sigma_hat = {}, g_hat = {}",
            crit.nodes.len(),
            crit.arcs.len(),
            crit.sigma,
            crit.sigma_hat,
            crit.g_hat
        );
        for (k, comp) in crit.components.iter().enumerate() {
            println!(
                "  component {k}: nodes {:?}, cyclicity {}, girth {}",
                comp.nodes.iter().map(|v| v + 1).collect::<Vec<_>>(),
                comp.cyclicity,
                comp.girth
            );
        }
    }
    Ok(())
}

fn print_row(row: &VerdictRow) {
    println!(
        "T = {} (certified: {}), sigma = {}",
        row.t, row.t_certified, row.sigma
    );
    for sv in &row.schemes {
        println!("scheme {}:", sv.scheme);
        println!(
            "  removed nodes: {:?}{}",
            sv.removed_nodes.iter().map(|v| v + 1).collect::<Vec<_>>(),
            match &sv.threshold {
                None => String::new(),
                Some(mu) => format!(", threshold mu = {mu}"),
            }
        );
        println!(
            "  T1 = {} (certified: {}), T2 = {} (certified: {})",
            sv.t1, sv.t1_certified, sv.t2, sv.t2_certified
        );
        for (kind, bounds) in [("T1", &sv.t1_bounds), ("T2", &sv.t2_bounds)] {
            for b in bounds {
                if b.report.applicable {
                    println!(
                        "  {kind} bound {:<22} = {:<12} {}",
                        b.report.name,
                        b.report.value.to_string(),
                        if b.pass { "pass" } else { "FAIL" }
                    );
                } else {
                    println!(
                        "  {kind} bound {:<22}   inapplicable: {}",
                        b.report.name,
                        b.report.reason.as_deref().unwrap_or("")
                    );
                }
            }
        }
    }
}

fn rank_section(a: &TropMatrix, fac: &Factorization) -> Result<usize> {
    let pair = lift(a, fac)?;
    println!(
        "factorization: width r = {}, swapped product is {}x{}",
        fac.rank_bound,
        pair.a_check.rows(),
        pair.a_check.cols()
    );
    let t1a = measure_t1(a, &trop_core::schemes::b_nachtigall(a)?)?.value;
    let t1c = measure_t1(
        &pair.a_check,
        &trop_core::schemes::b_nachtigall(&pair.a_check)?,
    )?
    .value;
    let ok = t1a.abs_diff(t1c) <= 1;
    println!(
        "T1,N of product = {t1a}, of swapped product = {t1c}: |difference| <= 1 {}",
        if ok { "pass" } else { "FAIL" }
    );
    Ok(usize::from(!ok))
}

/// In the regime `d < 2 gamma` the powers agree with the rescaled CSR terms
/// from `t = d rem gamma` on; verify it directly over several periods.
fn small_dimension_check(a: &TropMatrix) -> Result<usize> {
    let prof = profile(a)?;
    let d = prof.node_count as u64;
    let gamma = prof.cyclicity.expect("irreducible matrix has cycles");
    if d >= 2 * gamma {
        return Ok(0);
    }
    let lambda = prof.require_lambda()?.clone();
    let triple = trop_core::csr::csr_of(a)?;
    let start = d % gamma;
    let mut ok = true;
    for t in start..=start + 4 * gamma {
        let term = triple.term(t);
        let expect = if t == 0 {
            term
        } else {
            let shift = trop_core::TropScalar::Finite(
                &lambda * num_rational::BigRational::from_integer(t.into()),
            );
            TropMatrix::scalar_mul(&shift, &term)?
        };
        if a.pow(t)? != expect {
            ok = false;
        }
    }
    println!(
        "small-dimension regime (d = {d} < 2*gamma = {}): A^t = lambda^t o C S^t R for t >= {start} ... {}",
        2 * gamma,
        if ok { "pass" } else { "FAIL" }
    );
    Ok(usize::from(!ok))
}

pub fn run(file: &Path, scheme: SchemeArg, rank_file: Option<&Path>) -> Result<usize> {
    let a = io::read_matrix(file)?;
    let fac = match rank_file {
        None => None,
        Some(p) => {
            let f = io::read_factorization(p)?;
            if !trop_core::rank::verify_factorization(&a, &f)? {
                return Err(TropError::Factorization);
            }
            Some(f)
        }
    };
    print_profile(&a)?;
    // make sure the matrix qualifies before the heavy work, for clean errors
    TransientLab::new(&a)?;
    let row = verdict_row(0, &a, &schemes_for(scheme), fac.as_ref(), crate::horizon_mult())?;
    print_row(&row);
    let mut anomalies = row.anomalies.len();
    for a in &row.anomalies {
        println!("anomaly: {a}");
    }
    anomalies += small_dimension_check(&a)?;
    if let Some(f) = &fac {
        anomalies += rank_section(&a, f)?;
    }
    println!(
        "verdict: {}",
        if anomalies == 0 {
            "all applicable bounds hold"
        } else {
            "BOUND VIOLATIONS FOUND"
        }
    );
    Ok(anomalies)
}
