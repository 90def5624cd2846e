//! `trop campaign`: seeded random generation, parallel per-matrix
//! verdicts, deterministic CSV and JSON reports.

use crate::pipeline::{csv_lines, verdict_row, VerdictRow, CSV_HEADER};
use crate::CampaignArgs;
use num_rational::BigRational;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use serde::Serialize;
use serde_json::json;
use std::path::Path;
use trop_core::generate::{
    random_irreducible, random_rank_cyclic, random_with_cyclicity, WeightRange,
};
use trop_core::rank::{generate_with_rank_from, Factorization};
use trop_core::schemes::SchemeChoice;
use trop_core::{Result, TropError, TropMatrix};

#[derive(Serialize, Clone)]
struct ConfigEcho {
    dim: usize,
    samples: usize,
    seed: u64,
    gamma: Option<usize>,
    rank: Option<usize>,
    weights: String,
    rational_weights: bool,
    density: f64,
    schemes: Vec<String>,
    horizon_mult: u64,
}

fn parse_weights(spec: &str, rational: bool) -> Result<WeightRange> {
    let (lo, hi) = spec
        .split_once("..")
        .ok_or_else(|| TropError::Parse(format!("weights must look like LO..HI, got {spec:?}")))?;
    let parse = |s: &str| -> Result<BigRational> {
        match s.trim().split_once('/') {
            Some((n, d)) => Ok(BigRational::new(
                n.parse()
                    .map_err(|e| TropError::Parse(format!("bad weight bound {s:?}: {e}")))?,
                d.parse()
                    .map_err(|e| TropError::Parse(format!("bad weight bound {s:?}: {e}")))?,
            )),
            None => Ok(BigRational::from_integer(s.trim().parse().map_err(
                |e| TropError::Parse(format!("bad weight bound {s:?}: {e}")),
            )?)),
        }
    };
    let (lo, hi) = (parse(lo)?, parse(hi)?);
    if lo > hi {
        return Err(TropError::Parse(format!("empty weight range {spec:?}")));
    }
    Ok(if rational {
        WeightRange::rationals(lo, hi)
    } else {
        WeightRange {
            lo,
            hi,
            integer_only: true,
        }
    })
}

pub fn parse_scheme_set(spec: &str) -> Result<Vec<SchemeChoice>> {
    if spec.eq_ignore_ascii_case("all") {
        return Ok(SchemeChoice::ALL.to_vec());
    }
    let mut out = Vec::new();
    for part in spec.split(',') {
        let scheme = match part.trim().to_ascii_uppercase().as_str() {
            "N" => SchemeChoice::Nachtigall,
            "HA" => SchemeChoice::HartmannArguelles,
            "CT" => SchemeChoice::CycleThreshold,
            other => {
                return Err(TropError::Parse(format!("unknown scheme {other:?}")));
            }
        };
        if !out.contains(&scheme) {
            out.push(scheme);
        }
    }
    if out.is_empty() {
        return Err(TropError::Parse("empty scheme set".into()));
    }
    Ok(out)
}

fn seed_for(master: u64, idx: u64) -> u64 {
    let mut z = master ^ idx.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn generate(
    args: &CampaignArgs,
    range: &WeightRange,
    idx: usize,
) -> Result<(TropMatrix, Option<Factorization>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed_for(args.seed, idx as u64));
    match (args.gamma, args.rank) {
        (None, None) => Ok((random_irreducible(args.dim, args.density, range, &mut rng), None)),
        (Some(g), None) => Ok((
            random_with_cyclicity(args.dim, g, args.density, range, &mut rng)?,
            None,
        )),
        (None, Some(r)) => {
            let (a, fac) = generate_with_rank_from(args.dim, r, range, &mut rng);
            Ok((a, Some(fac)))
        }
        (Some(g), Some(r)) => {
            let (a, fac) = random_rank_cyclic(args.dim, r, g, range, &mut rng)?;
            Ok((a, Some(fac)))
        }
    }
}

fn validate(args: &CampaignArgs) -> Result<()> {
    if args.dim == 0 || args.dim > 32 {
        return Err(TropError::Parse("dimension must be in 1..=32".into()));
    }
    if !(args.density > 0.0 && args.density <= 1.0) {
        return Err(TropError::Parse("density must be in (0, 1]".into()));
    }
    if let Some(g) = args.gamma {
        if g == 0 || g > args.dim {
            return Err(TropError::Parse("gamma must be in 1..=dim".into()));
        }
    }
    if let Some(r) = args.rank {
        if r == 0 || r > args.dim {
            return Err(TropError::Parse("rank must be in 1..=dim".into()));
        }
        if let Some(g) = args.gamma {
            if r < g {
                return Err(TropError::Parse("rank must be at least gamma".into()));
            }
        }
    }
    Ok(())
}

pub fn run(args: &CampaignArgs) -> Result<usize> {
    validate(args)?;
    let schemes = parse_scheme_set(&args.scheme)?;
    let range = parse_weights(&args.weights, args.rational_weights)?;
    let mult = crate::horizon_mult_or(args.horizon_mult);

    let workers = args
        .jobs
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(4)
        })
        .max(1);
    let mut rows: Vec<Option<Result<VerdictRow>>> = (0..args.samples).map(|_| None).collect();
    if args.samples > 0 {
        let chunk = args.samples.div_ceil(workers);
        std::thread::scope(|scope| {
            for (w, slice) in rows.chunks_mut(chunk).enumerate() {
                let schemes = &schemes;
                let range = &range;
                scope.spawn(move || {
                    for (k, slot) in slice.iter_mut().enumerate() {
                        let idx = w * chunk + k;
                        let res = generate(args, range, idx).and_then(|(a, fac)| {
                            verdict_row(idx, &a, schemes, fac.as_ref(), mult)
                        });
                        *slot = Some(res);
                    }
                });
            }
        });
    }
    let rows: Vec<VerdictRow> = rows
        .into_iter()
        .map(|r| r.expect("worker filled every slot"))
        .collect::<Result<_>>()?;

    let anomaly_count: usize = rows.iter().map(|r| r.anomalies.len()).sum();
    let config = ConfigEcho {
        dim: args.dim,
        samples: args.samples,
        seed: args.seed,
        gamma: args.gamma,
        rank: args.rank,
        weights: args.weights.clone(),
        rational_weights: args.rational_weights,
        density: args.density,
        schemes: schemes.iter().map(|s| s.short().to_string()).collect(),
        horizon_mult: mult,
    };

    let mut csv = String::from(CSV_HEADER);
    csv.push('\n');
    for row in &rows {
        csv_lines(row, &mut csv);
    }
    let json = serde_json::to_string_pretty(&json!({
        "format_version": 1,
        "config": config,
        "rows": rows,
        "anomaly_count": anomaly_count,
    }))
    .expect("report serialization");

    write_report(&args.out.with_extension("csv"), &csv)?;
    write_report(&args.out.with_extension("json"), &json)?;
    println!(
        "campaign: {} matrices, {} schemes, {} anomalies -> {}.{{csv,json}}",
        args.samples,
        schemes.len(),
        anomaly_count,
        args.out.display()
    );
    for row in &rows {
        for a in &row.anomalies {
            println!("anomaly: {a}");
        }
    }
    Ok(anomaly_count)
}

fn write_report(path: &Path, body: &str) -> Result<()> {
    std::fs::write(path, body)
        .map_err(|e| TropError::Parse(format!("cannot write {}: {e}", path.display())))
}
