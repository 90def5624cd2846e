//! Walk thresholds over a marked subgraph.
//!
//! For a subgraph `G` of the digraph of `A` and a modulus `sigma`, consider
//! for every node pair `(i, j)` the walks from `i` to `j` that visit a node
//! of `G`, bucketed by length mod `sigma`.
//!
//! * `walk_existence_threshold` is the least `T` such that whenever a
//!   bucket has a walk longer than `T`, it also has one of length at most
//!   `T`. This is a certified lower bound for the cycle removal threshold:
//!   surgery on a long walk always leaves its bucket, so the removal
//!   threshold admits short representatives wherever this one requires them.
//! * `walk_reduction_threshold` additionally requires the short
//!   representative to carry at least the weight of any longer walk in the
//!   bucket; it needs the matrix normalized to maximum cycle mean zero.
//! * `exploration_penalty` is the least `T` such that every multiple of
//!   `sigma` at least `T` is a closed-walk length at a chosen node of `G`.

use crate::bounds::cr_subgraph;
use crate::error::{Result, TropError};
use crate::matrix::TropMatrix;
use crate::scalar::TropScalar;
use num_integer::Integer;
use num_traits::Zero;
use std::collections::{BTreeSet, HashMap};

/// A subgraph of the digraph of a matrix, plus the length modulus.
#[derive(Clone, Debug)]
pub struct ThresholdQuery {
    pub nodes: BTreeSet<usize>,
    pub arcs: BTreeSet<(usize, usize)>,
    pub sigma: u64,
}

impl ThresholdQuery {
    pub fn new(nodes: BTreeSet<usize>, arcs: BTreeSet<(usize, usize)>, sigma: u64) -> Self {
        ThresholdQuery { nodes, arcs, sigma }
    }

    /// A cycle given as a node sequence (closing arc implied), with the
    /// modulus set to its length.
    pub fn from_cycle(seq: &[usize]) -> Self {
        let nodes = seq.iter().copied().collect();
        let arcs = (0..seq.len())
            .map(|k| (seq[k], seq[(k + 1) % seq.len()]))
            .collect();
        ThresholdQuery {
            nodes,
            arcs,
            sigma: seq.len() as u64,
        }
    }

    pub fn validate(&self, a: &TropMatrix) -> Result<()> {
        let d = a.require_square()?;
        if self.sigma == 0 {
            return Err(TropError::InvalidSubgraph("modulus must be positive".into()));
        }
        if self.nodes.is_empty() {
            return Err(TropError::InvalidSubgraph("empty subgraph".into()));
        }
        if let Some(&v) = self.nodes.iter().find(|&&v| v >= d) {
            return Err(TropError::InvalidSubgraph(format!("node {v} out of range")));
        }
        for &(i, j) in &self.arcs {
            if !self.nodes.contains(&i) || !self.nodes.contains(&j) {
                return Err(TropError::InvalidSubgraph(format!(
                    "arc ({i},{j}) leaves the subgraph node set"
                )));
            }
            if !a.get(i, j).is_finite() {
                return Err(TropError::InvalidSubgraph(format!(
                    "arc ({i},{j}) is not an arc of the matrix"
                )));
            }
        }
        Ok(())
    }
}

/// Length-indexed walk data for a query: for every `(source, target,
/// length)` up to a horizon, whether a walk exists and the best weight,
/// both for unrestricted walks (`through = false`) and walks visiting a
/// node of the subgraph (`through = true`).
pub struct WalkTable {
    d: usize,
    pub sigma: u64,
    pub horizon: u64,
    // [t][i][2*j + through]
    weights: Vec<Vec<Vec<TropScalar>>>,
}

impl WalkTable {
    pub fn build(a: &TropMatrix, q: &ThresholdQuery, horizon: u64) -> Result<WalkTable> {
        q.validate(a)?;
        let d = a.rows();
        let mut weights = Vec::with_capacity(horizon as usize + 1);
        let mut cur = vec![vec![TropScalar::NegInf; 2 * d]; d];
        for (i, row) in cur.iter_mut().enumerate() {
            row[start_state(i, &q.nodes)] = TropScalar::one();
        }
        weights.push(cur.clone());
        for _ in 0..horizon {
            let mut next = vec![vec![TropScalar::NegInf; 2 * d]; d];
            for i in 0..d {
                for u in 0..d {
                    for f in 0..2 {
                        let TropScalar::Finite(w) = &cur[i][2 * u + f] else { continue };
                        for (v, arc_w) in
                            (0..d).filter_map(|v| a.get(u, v).as_rational().map(|aw| (v, aw)))
                        {
                            let nf = f | usize::from(q.nodes.contains(&v));
                            let cand = w + arc_w;
                            match &next[i][2 * v + nf] {
                                TropScalar::Finite(c) if *c >= cand => {}
                                _ => next[i][2 * v + nf] = TropScalar::Finite(cand),
                            }
                        }
                    }
                }
            }
            weights.push(next.clone());
            cur = next;
        }
        Ok(WalkTable {
            d,
            sigma: q.sigma,
            horizon,
            weights,
        })
    }

    /// Best weight of a length-`t` walk from `i` to `j`; with `through`,
    /// only walks visiting the subgraph count. `-inf` when none exists.
    pub fn best_weight(&self, i: usize, j: usize, t: u64, through: bool) -> TropScalar {
        let row = &self.weights[t as usize][i];
        if through {
            row[2 * j + 1].clone()
        } else {
            &row[2 * j] + &row[2 * j + 1]
        }
    }

    pub fn achievable(&self, i: usize, j: usize, t: u64, through: bool) -> bool {
        self.best_weight(i, j, t, through).is_finite()
    }

    /// Achievable through-walk lengths congruent to `r` mod `sigma`, up to
    /// the horizon.
    pub fn achievable_lengths(&self, i: usize, j: usize, r: u64) -> Vec<u64> {
        (0..=self.horizon)
            .filter(|&t| t % self.sigma == r % self.sigma && self.achievable(i, j, t, true))
            .collect()
    }

    pub fn dim(&self) -> usize {
        self.d
    }
}

/// Square Boolean matrix over at most 64 indices, one word per row.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
struct BoolMat {
    n: usize,
    rows: Vec<u64>,
}

impl BoolMat {
    fn empty(n: usize) -> Self {
        assert!(n <= 64);
        BoolMat { n, rows: vec![0; n] }
    }

    fn identity(n: usize) -> Self {
        let mut m = Self::empty(n);
        for i in 0..n {
            m.rows[i] = 1 << i;
        }
        m
    }

    fn set(&mut self, i: usize, j: usize) {
        self.rows[i] |= 1 << j;
    }

    fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i] & (1 << j) != 0
    }

    fn mul(&self, other: &BoolMat) -> BoolMat {
        let mut out = Self::empty(self.n);
        for i in 0..self.n {
            let mut row = 0u64;
            let mut bits = self.rows[i];
            while bits != 0 {
                let k = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                row |= other.rows[k];
            }
            out.rows[i] = row;
        }
        out
    }
}

/// Powers of a Boolean matrix up to (and including) the first exact
/// repetition; returns `(powers, t0, p)` with `powers[t0 + p] == powers[t0]`.
fn bool_powers_to_repetition(q: &BoolMat, cap: u64) -> Result<(Vec<BoolMat>, usize, usize)> {
    let mut powers = vec![BoolMat::identity(q.n)];
    let mut seen: HashMap<BoolMat, usize> = HashMap::new();
    seen.insert(powers[0].clone(), 0);
    loop {
        let next = powers.last().unwrap().mul(q);
        let t = powers.len();
        if let Some(&t0) = seen.get(&next) {
            powers.push(next);
            return Ok((powers, t0, t - t0));
        }
        seen.insert(next.clone(), t);
        powers.push(next);
        if t as u64 > cap {
            return Err(TropError::Horizon {
                what: "boolean reachability did not settle".into(),
                horizon: cap,
            });
        }
    }
}

fn flagged_transition(a: &TropMatrix, nodes: &BTreeSet<usize>) -> BoolMat {
    let d = a.rows();
    let mut q = BoolMat::empty(2 * d);
    for (u, v, _) in a.arcs() {
        let vflag = usize::from(nodes.contains(&v));
        for f in 0..2 {
            q.set(2 * u + f, 2 * v + (f | vflag));
        }
    }
    q
}

fn start_state(i: usize, nodes: &BTreeSet<usize>) -> usize {
    2 * i + usize::from(nodes.contains(&i))
}

/// Least `T` such that in every `(i, j, residue)` bucket of through-`G`
/// walk lengths, anything above `T` has a representative at most `T`:
/// equivalently, the largest over nonempty buckets of the least achievable
/// length.
pub fn walk_existence_threshold(a: &TropMatrix, q: &ThresholdQuery) -> Result<u64> {
    q.validate(a)?;
    let d = a.rows();
    if 2 * d > 64 {
        return Err(TropError::SizeLimit {
            what: "walk existence threshold",
            limit: 32,
            actual: d,
        });
    }
    let sigma = q.sigma;
    let cap = cr_subgraph(sigma, d as u64, q.nodes.len() as u64) + 2 * d as u64 * sigma + 4096;
    let trans = flagged_transition(a, &q.nodes);
    let (powers, t0, p) = bool_powers_to_repetition(&trans, cap)?;
    let horizon = t0 as u64 + (p as u64).lcm(&sigma);
    let power_at = |t: u64| -> &BoolMat {
        let t = t as usize;
        if t < powers.len() {
            &powers[t]
        } else {
            &powers[t0 + (t - t0) % p]
        }
    };
    let mut best = 0u64;
    let mut found: HashMap<(usize, usize, u64), u64> = HashMap::new();
    for t in 0..=horizon {
        let pw = power_at(t);
        for i in 0..d {
            let si = start_state(i, &q.nodes);
            for j in 0..d {
                if pw.get(si, 2 * j + 1) {
                    found.entry((i, j, t % sigma)).or_insert(t);
                }
            }
        }
    }
    for &t in found.values() {
        best = best.max(t);
    }
    Ok(best)
}

/// Least `T` such that in every bucket, the maximal weight over lengths
/// above `T` is already attained at some length at most `T`: the largest
/// over buckets of the first length where the bucket's optimum appears.
/// Requires `lambda(A) = 0` so the optima are attained at bounded lengths;
/// stabilization over the final window is asserted.
pub fn walk_reduction_threshold(a: &TropMatrix, q: &ThresholdQuery) -> Result<u64> {
    walk_reduction_threshold_with(a, q, 1)
}

pub fn walk_reduction_threshold_with(a: &TropMatrix, q: &ThresholdQuery, mult: u64) -> Result<u64> {
    q.validate(a)?;
    let d = a.rows();
    let lam = crate::graph::profile(a)?.lambda;
    if lam != Some(num_rational::BigRational::zero()) {
        return Err(TropError::Domain(
            "walk reduction threshold needs lambda(A) = 0; normalize first".into(),
        ));
    }
    let sigma = q.sigma;
    let window = 2 * d as u64 * sigma;
    let horizon = mult.max(1) * (cr_subgraph(sigma, d as u64, q.nodes.len() as u64) + window);

    let states = 2 * d;
    let mut best: HashMap<(usize, usize, u64), (TropScalar, u64)> = HashMap::new();
    let mut last_change = 0u64;
    for i in 0..d {
        let mut cur = vec![TropScalar::NegInf; states];
        cur[start_state(i, &q.nodes)] = TropScalar::one();
        for t in 0..=horizon {
            for j in 0..d {
                let val = &cur[2 * j + 1];
                if val.is_finite() {
                    let key = (i, j, t % sigma);
                    match best.get(&key) {
                        Some((b, _)) if b >= val => {}
                        _ => {
                            best.insert(key, (val.clone(), t));
                            last_change = last_change.max(t);
                        }
                    }
                }
            }
            if t == horizon {
                break;
            }
            let mut next = vec![TropScalar::NegInf; states];
            for u in 0..d {
                for f in 0..2 {
                    let TropScalar::Finite(w) = &cur[2 * u + f] else { continue };
                    for (v, arc_w) in
                        (0..d).filter_map(|v| a.get(u, v).as_rational().map(|aw| (v, aw)))
                    {
                        let nf = f | usize::from(q.nodes.contains(&v));
                        let cand = w + arc_w;
                        match &next[2 * v + nf] {
                            TropScalar::Finite(c) if *c >= cand => {}
                            _ => next[2 * v + nf] = TropScalar::Finite(cand),
                        }
                    }
                }
            }
            cur = next;
        }
    }
    if last_change + window > horizon {
        return Err(TropError::Horizon {
            what: "walk reduction pattern still improving in the final window".into(),
            horizon,
        });
    }
    Ok(best.values().map(|(_, t)| *t).max().unwrap_or(0))
}

/// Least `T` such that every multiple of `sigma` at least `T` is the length
/// of a closed walk at `node` inside the subgraph `(nodes, arcs)`.
pub fn exploration_penalty(
    nodes: &BTreeSet<usize>,
    arcs: &BTreeSet<(usize, usize)>,
    sigma: u64,
    node: usize,
) -> Result<u64> {
    if !nodes.contains(&node) {
        return Err(TropError::Domain(format!(
            "node {node} is not in the subgraph"
        )));
    }
    if sigma == 0 {
        return Err(TropError::Domain("modulus must be positive".into()));
    }
    let index: Vec<usize> = nodes.iter().copied().collect();
    let pos: HashMap<usize, usize> = index.iter().enumerate().map(|(k, &v)| (v, k)).collect();
    let n = index.len();
    if n > 64 {
        return Err(TropError::SizeLimit {
            what: "exploration penalty",
            limit: 64,
            actual: n,
        });
    }
    let mut q = BoolMat::empty(n);
    for &(u, v) in arcs {
        q.set(pos[&u], pos[&v]);
    }
    let me = pos[&node];
    let cap = (n as u64 * n as u64 + sigma) * 4 + 4096;
    let (powers, t0, p) = bool_powers_to_repetition(&q, cap)?;
    let closed = |t: u64| -> bool {
        let t = t as usize;
        if t < powers.len() {
            powers[t].get(me, me)
        } else {
            powers[t0 + (t - t0) % p].get(me, me)
        }
    };
    if !(1..=(t0 + p) as u64).any(closed) {
        return Err(TropError::NoClosedWalk { node });
    }
    // first multiple of sigma inside the periodic regime; one lcm window of
    // multiples past it covers every residue the multiples keep revisiting
    let lcm_ps = (p as u64).lcm(&sigma);
    let t_start = {
        let t0 = t0 as u64;
        t0 + (sigma - t0 % sigma) % sigma
    };
    let mut t = t_start;
    while t < t_start + lcm_ps {
        if !closed(t) {
            // this residue recurs unachievable forever
            return Err(TropError::NoClosedWalk { node });
        }
        t += sigma;
    }
    let mut last_missing: Option<u64> = None;
    let mut t = 0u64;
    while t < t_start {
        if !closed(t) {
            last_missing = Some(t);
        }
        t += sigma;
    }
    Ok(match last_missing {
        None => 0,
        Some(l) => l + 1,
    })
}
