//! Seeded random instance generators for the verification campaigns.

use crate::error::{Result, TropError};
use crate::graph::profile;
use crate::matrix::TropMatrix;
use crate::rank::Factorization;
use crate::scalar::TropScalar;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Inclusive weight range; rational sampling draws numerators over a small
/// grid of denominators so all weights stay exact.
#[derive(Clone, Debug)]
pub struct WeightRange {
    pub lo: BigRational,
    pub hi: BigRational,
    pub integer_only: bool,
}

impl WeightRange {
    pub fn ints(lo: i64, hi: i64) -> Self {
        WeightRange {
            lo: BigRational::from_integer(lo.into()),
            hi: BigRational::from_integer(hi.into()),
            integer_only: true,
        }
    }

    pub fn rationals(lo: BigRational, hi: BigRational) -> Self {
        WeightRange {
            lo,
            hi,
            integer_only: false,
        }
    }

    pub fn sample(&self, rng: &mut ChaCha8Rng) -> BigRational {
        let den: i64 = if self.integer_only {
            1
        } else {
            rng.random_range(1..=4)
        };
        let denom = BigRational::from_integer(den.into());
        let lo = (&self.lo * &denom).ceil().to_integer().to_i64().unwrap();
        let hi = (&self.hi * &denom).floor().to_integer().to_i64().unwrap();
        let num = rng.random_range(lo..=hi.max(lo));
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
}

/// Arbitrary random matrix with the given arc density.
pub fn random_matrix(d: usize, density: f64, range: &WeightRange, rng: &mut ChaCha8Rng) -> TropMatrix {
    TropMatrix::from_fn(d, d, |_, _| {
        if rng.random_bool(density) {
            TropScalar::Finite(range.sample(rng))
        } else {
            TropScalar::NegInf
        }
    })
}

fn random_permutation(d: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..d).collect();
    for i in (1..d).rev() {
        let j = rng.random_range(0..=i);
        perm.swap(i, j);
    }
    perm
}

/// Random irreducible matrix; after a few rejected draws a random
/// permutation cycle is overlaid to force strong connectivity.
pub fn random_irreducible(
    d: usize,
    density: f64,
    range: &WeightRange,
    rng: &mut ChaCha8Rng,
) -> TropMatrix {
    for attempt in 0..usize::MAX {
        let mut a = random_matrix(d, density, range, rng);
        if attempt >= 20 {
            let perm = random_permutation(d, rng);
            for i in 0..d {
                a.set(perm[i], perm[(i + 1) % d], TropScalar::Finite(range.sample(rng)));
            }
        }
        if let Ok(p) = profile(&a) {
            if p.is_strongly_connected && p.lambda.is_some() {
                return a;
            }
        }
    }
    unreachable!()
}

/// Cyclic class sizes for dimension `d` and cyclicity `gamma`: the first
/// `d rem gamma` classes get the extra node.
fn class_sizes(d: usize, gamma: usize) -> Vec<usize> {
    let m = d / gamma;
    (0..gamma)
        .map(|i| if i < d % gamma { m + 1 } else { m })
        .collect()
}

fn contiguous_classes(d: usize, gamma: usize) -> Vec<Vec<usize>> {
    let sizes = class_sizes(d, gamma);
    let mut classes = Vec::with_capacity(gamma);
    let mut next = 0;
    for s in sizes {
        classes.push((next..next + s).collect());
        next += s;
    }
    classes
}

/// Random irreducible matrix whose digraph has cyclicity exactly `gamma`,
/// built from random blocks mapping each cyclic class to the next and
/// hidden behind a random relabeling of the nodes.
pub fn random_with_cyclicity(
    d: usize,
    gamma: usize,
    density: f64,
    range: &WeightRange,
    rng: &mut ChaCha8Rng,
) -> Result<TropMatrix> {
    if gamma == 0 || gamma > d {
        return Err(TropError::Domain(format!(
            "cyclicity {gamma} impossible at dimension {d}"
        )));
    }
    let classes = contiguous_classes(d, gamma);
    for attempt in 0..200 {
        let dense = attempt >= 60;
        let mut a = TropMatrix::all_neg_inf(d, d);
        for i in 0..gamma {
            let from = &classes[i];
            let to = &classes[(i + 1) % gamma];
            for &v in from {
                // backbone arc so every node has a successor
                let w = to[rng.random_range(0..to.len())];
                a.set(v, w, TropScalar::Finite(range.sample(rng)));
            }
            for &w in to {
                let v = from[rng.random_range(0..from.len())];
                a.set(v, w, TropScalar::Finite(range.sample(rng)));
            }
            for &v in from {
                for &w in to {
                    if (dense || rng.random_bool(density)) && !a.get(v, w).is_finite() {
                        a.set(v, w, TropScalar::Finite(range.sample(rng)));
                    }
                }
            }
        }
        let p = profile(&a)?;
        if p.is_strongly_connected && p.cyclicity == Some(gamma as u64) {
            let perm = random_permutation(d, rng);
            return a.permute(&perm);
        }
    }
    Err(TropError::Structure(format!(
        "could not hit cyclicity {gamma} at dimension {d}"
    )))
}

/// Width-`r` factorization composed with the block-cyclic structure: the
/// factor nodes split into `gamma` groups, `U` maps class `i` into group
/// `i` and `L` maps group `i` into class `i+1`, so the product has
/// cyclicity exactly `gamma` with full blocks.
pub fn random_rank_cyclic(
    d: usize,
    r: usize,
    gamma: usize,
    range: &WeightRange,
    rng: &mut ChaCha8Rng,
) -> Result<(TropMatrix, Factorization)> {
    if gamma == 0 || r < gamma || r > d || gamma > d {
        return Err(TropError::Domain(format!(
            "need gamma <= r <= d, got d={d} r={r} gamma={gamma}"
        )));
    }
    let classes = contiguous_classes(d, gamma);
    let groups = contiguous_classes(r, gamma);
    let u = TropMatrix::from_fn(d, r, |v, k| {
        let ci = classes.iter().position(|c| c.contains(&v)).unwrap();
        if groups[ci].contains(&k) {
            TropScalar::Finite(range.sample(rng))
        } else {
            TropScalar::NegInf
        }
    });
    let l = TropMatrix::from_fn(r, d, |k, w| {
        let gi = groups.iter().position(|g| g.contains(&k)).unwrap();
        if classes[(gi + 1) % gamma].contains(&w) {
            TropScalar::Finite(range.sample(rng))
        } else {
            TropScalar::NegInf
        }
    });
    let a = u.mul(&l)?;
    let fac = Factorization::new(u, l)?;
    debug_assert!(profile(&a)?.cyclicity == Some(gamma as u64));
    Ok((a, fac))
}

/// A factorized instance whose critical graph is a single elementary cycle
/// of length `gamma * floor(r / gamma)` (equal to `r` when `gamma = 1`), so
/// the max-girth equals that length. Returns the matrix, the factorization
/// and the critical cycle.
pub fn structured_max_girth_instance(
    d: usize,
    r: usize,
    gamma: usize,
    rng: &mut ChaCha8Rng,
) -> Result<(TropMatrix, Factorization, Vec<usize>)> {
    if gamma == 0 || r < gamma || r > d || gamma > d {
        return Err(TropError::Domain(format!(
            "need gamma <= r <= d, got d={d} r={r} gamma={gamma}"
        )));
    }
    let m = r / gamma;
    let classes = contiguous_classes(d, gamma);
    let groups = contiguous_classes(r, gamma);
    if classes.iter().any(|c| c.len() < m) {
        return Err(TropError::Domain(
            "every cyclic class needs at least floor(r/gamma) nodes".into(),
        ));
    }
    // the critical cycle visits the classes cyclically m times, using the
    // q-th lane node of each class on round q
    let mut cycle = Vec::with_capacity(gamma * m);
    for q in 0..m {
        for c in classes.iter() {
            cycle.push(c[q]);
        }
    }
    let neg = |rng: &mut ChaCha8Rng| -> TropScalar {
        TropScalar::ratio(-(rng.random_range(1..=8)), rng.random_range(1..=2))
    };
    let mut u = TropMatrix::from_fn(d, r, |v, k| {
        let ci = classes.iter().position(|c| c.contains(&v)).unwrap();
        if groups[ci].contains(&k) {
            neg(rng)
        } else {
            TropScalar::NegInf
        }
    });
    let mut l = TropMatrix::from_fn(r, d, |k, w| {
        let gi = groups.iter().position(|g| g.contains(&k)).unwrap();
        if classes[(gi + 1) % gamma].contains(&w) {
            neg(rng)
        } else {
            TropScalar::NegInf
        }
    });
    // zero out one factor lane per cycle arc so exactly the cycle arcs
    // carry weight zero
    for pos in 0..cycle.len() {
        let v = cycle[pos];
        let w = cycle[(pos + 1) % cycle.len()];
        let ci = classes.iter().position(|c| c.contains(&v)).unwrap();
        let lane = groups[ci][(pos / gamma) % m];
        u.set(v, lane, TropScalar::one());
        l.set(lane, w, TropScalar::one());
    }
    let a = u.mul(&l)?;
    let fac = Factorization::new(u, l)?;
    Ok((a, fac, cycle))
}
