//! Factorizations `A = U o L` of bounded width, the swapped product
//! `A_check = L o U`, and the block lift `F = [[-inf, U], [L, -inf]]` whose
//! square carries `A` and `A_check` on its diagonal. The critical
//! components of the two products are related one to one through the lift,
//! with matching girths and cyclicities.

use crate::error::{Result, TropError};
use crate::generate::WeightRange;
use crate::graph::profile;
use crate::matrix::TropMatrix;
use crate::scalar::TropScalar;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

/// A width-`r` factorization; the width is an upper bound on the factor
/// rank of the product.
#[derive(Clone, Debug)]
pub struct Factorization {
    pub u: TropMatrix,
    pub l: TropMatrix,
    pub rank_bound: u64,
}

impl Factorization {
    pub fn new(u: TropMatrix, l: TropMatrix) -> Result<Self> {
        if u.cols() != l.rows() {
            return Err(TropError::Dimension(format!(
                "factor widths disagree: U is {}x{}, L is {}x{}",
                u.rows(),
                u.cols(),
                l.rows(),
                l.cols()
            )));
        }
        let rank_bound = u.cols() as u64;
        Ok(Factorization { u, l, rank_bound })
    }

    /// The trivial width-`d` factorization `A = A o I`.
    pub fn trivial(a: &TropMatrix) -> Self {
        Factorization {
            u: a.clone(),
            l: TropMatrix::identity(a.cols()),
            rank_bound: a.cols() as u64,
        }
    }
}

#[derive(Clone, Debug)]
pub struct LiftPair {
    /// `L o U`, square of the factor width.
    pub a_check: TropMatrix,
    /// The block lift on `d + r` nodes.
    pub f: TropMatrix,
}

/// `true` when `U o L` reproduces `a` entry for entry.
pub fn verify_factorization(a: &TropMatrix, fac: &Factorization) -> Result<bool> {
    if fac.u.rows() != a.rows() || fac.l.cols() != a.cols() {
        return Err(TropError::Dimension(format!(
            "factorization of a {}x{} matrix must have U rows {} and L cols {}",
            a.rows(),
            a.cols(),
            fac.u.rows(),
            fac.l.cols()
        )));
    }
    Ok(&fac.u.mul(&fac.l)? == a)
}

/// Builds the swapped product and the block lift of a verified
/// factorization.
pub fn lift(a: &TropMatrix, fac: &Factorization) -> Result<LiftPair> {
    if !verify_factorization(a, fac)? {
        return Err(TropError::Factorization);
    }
    let d = a.rows();
    let r = fac.rank_bound as usize;
    let a_check = fac.l.mul(&fac.u)?;
    let f = TropMatrix::from_fn(d + r, d + r, |i, j| {
        if i < d && j >= d {
            fac.u.get(i, j - d).clone()
        } else if i >= d && j < d {
            fac.l.get(i - d, j).clone()
        } else {
            TropScalar::NegInf
        }
    });
    Ok(LiftPair { a_check, f })
}

/// A matched pair of critical components: one of the product `A`, one of
/// the swapped product, joined by a critical component of the lift.
#[derive(Clone, Debug)]
pub struct RelatedPair {
    pub a_component: Vec<usize>,
    pub check_component: Vec<usize>,
}

/// Matches the critical components of `A` and `A_check` through those of
/// the lift: every critical component of `F` must project onto exactly one
/// component on each side, bijectively.
pub fn related_components(a: &TropMatrix, pair: &LiftPair) -> Result<Vec<RelatedPair>> {
    let d = a.rows();
    let prof_a = profile(a)?;
    let prof_c = profile(&pair.a_check)?;
    let prof_f = profile(&pair.f)?;
    let comps_a: Vec<BTreeSet<usize>> = prof_a
        .critical()?
        .components
        .iter()
        .map(|c| c.nodes.iter().copied().collect())
        .collect();
    let comps_c: Vec<BTreeSet<usize>> = prof_c
        .critical()?
        .components
        .iter()
        .map(|c| c.nodes.iter().copied().collect())
        .collect();
    let comps_f = &prof_f.critical()?.components;

    let mut used_a = vec![false; comps_a.len()];
    let mut used_c = vec![false; comps_c.len()];
    let mut out = Vec::new();
    for fc in comps_f {
        let a_side: BTreeSet<usize> = fc.nodes.iter().copied().filter(|&v| v < d).collect();
        let c_side: BTreeSet<usize> = fc
            .nodes
            .iter()
            .copied()
            .filter(|&v| v >= d)
            .map(|v| v - d)
            .collect();
        let ia = comps_a.iter().position(|s| *s == a_side).ok_or_else(|| {
            TropError::Structure("lift component does not project onto a critical component".into())
        })?;
        let ic = comps_c.iter().position(|s| *s == c_side).ok_or_else(|| {
            TropError::Structure(
                "lift component does not project onto a critical component of the swapped product"
                    .into(),
            )
        })?;
        if used_a[ia] || used_c[ic] {
            return Err(TropError::Structure(
                "two lift components project onto the same critical component".into(),
            ));
        }
        used_a[ia] = true;
        used_c[ic] = true;
        out.push(RelatedPair {
            a_component: comps_a[ia].iter().copied().collect(),
            check_component: comps_c[ic].iter().copied().collect(),
        });
    }
    if used_a.iter().any(|u| !u) || used_c.iter().any(|u| !u) {
        return Err(TropError::Structure(
            "critical components left unmatched by the lift".into(),
        ));
    }
    Ok(out)
}

/// The subgraph of the swapped product related to a cycle `z` of `A`: per
/// cycle position, the factor indices attaining the arc weight, with arcs
/// between consecutive attaining sets.
pub fn related_cycle_subgraph(
    a: &TropMatrix,
    fac: &Factorization,
    z: &[usize],
) -> Result<(BTreeSet<usize>, BTreeSet<(usize, usize)>)> {
    let r = fac.rank_bound as usize;
    let len = z.len();
    let mut attain: Vec<Vec<usize>> = Vec::with_capacity(len);
    for k in 0..len {
        let (i, j) = (z[k], z[(k + 1) % len]);
        let aij = a.get(i, j);
        if aij.is_neg_inf() {
            return Err(TropError::InvalidSubgraph(format!(
                "({i},{j}) is not an arc of the matrix"
            )));
        }
        let hits: Vec<usize> = (0..r)
            .filter(|&k2| &(fac.u.get(i, k2) * fac.l.get(k2, j)) == aij)
            .collect();
        if hits.is_empty() {
            return Err(TropError::Factorization);
        }
        attain.push(hits);
    }
    let mut nodes = BTreeSet::new();
    let mut arcs = BTreeSet::new();
    for k in 0..len {
        for &x in &attain[k] {
            nodes.insert(x);
            for &y in &attain[(k + 1) % len] {
                arcs.insert((x, y));
            }
        }
    }
    Ok((nodes, arcs))
}

/// Draws finite `U` (`d x r`) and `L` (`r x d`) from the weight range and
/// returns the (always irreducible) product with its factorization.
pub fn generate_with_rank(
    d: usize,
    r: usize,
    range: &WeightRange,
    seed: u64,
) -> (TropMatrix, Factorization) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    generate_with_rank_from(d, r, range, &mut rng)
}

pub fn generate_with_rank_from(
    d: usize,
    r: usize,
    range: &WeightRange,
    rng: &mut ChaCha8Rng,
) -> (TropMatrix, Factorization) {
    assert!(r >= 1 && r <= d, "need 1 <= r <= d");
    let u = TropMatrix::from_fn(d, r, |_, _| TropScalar::Finite(range.sample(rng)));
    let l = TropMatrix::from_fn(r, d, |_, _| TropScalar::Finite(range.sample(rng)));
    let a = u.mul(&l).unwrap();
    let fac = Factorization::new(u, l).unwrap();
    (a, fac)
}
