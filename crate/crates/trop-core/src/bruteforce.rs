//! Exhaustive reference implementations.
//!
//! Everything here trades speed for obviousness: plain DFS over simple
//! paths, length-indexed walk tables, direct power iteration. The main
//! algorithms are cross-checked against these on small instances.

use crate::matrix::TropMatrix;
use crate::scalar::TropScalar;
use num_rational::BigRational;
use std::collections::BTreeSet;

/// All elementary cycles found by DFS over simple paths, as
/// `(node sequence, total weight, mean weight)`. The start of each cycle is
/// its smallest node; the closing arc back to the start is implied.
pub fn elementary_cycles(a: &TropMatrix) -> Vec<(Vec<usize>, BigRational, BigRational)> {
    let d = a.rows();
    let mut out = Vec::new();
    let mut path: Vec<usize> = Vec::new();
    let mut on_path = vec![false; d];

    fn dfs(
        a: &TropMatrix,
        start: usize,
        v: usize,
        path: &mut Vec<usize>,
        on_path: &mut Vec<bool>,
        out: &mut Vec<(Vec<usize>, BigRational, BigRational)>,
    ) {
        for w in 0..a.rows() {
            if !a.get(v, w).is_finite() {
                continue;
            }
            if w == start {
                let mut total = BigRational::from_integer(0.into());
                for k in 0..path.len() {
                    let from = path[k];
                    let to = if k + 1 < path.len() { path[k + 1] } else { start };
                    total += a.get(from, to).as_rational().unwrap();
                }
                let len = BigRational::from_integer((path.len() as i64).into());
                out.push((path.clone(), total.clone(), total / len));
            } else if w > start && !on_path[w] {
                path.push(w);
                on_path[w] = true;
                dfs(a, start, w, path, on_path, out);
                on_path[w] = false;
                path.pop();
            }
        }
    }

    for s in 0..d {
        path.push(s);
        on_path[s] = true;
        dfs(a, s, s, &mut path, &mut on_path, &mut out);
        on_path[s] = false;
        path.pop();
    }
    out.sort_by(|(p, _, _), (q, _, _)| p.len().cmp(&q.len()).then(p.cmp(q)));
    out
}

/// Maximum cycle mean by enumerating every elementary cycle.
pub fn max_cycle_mean(a: &TropMatrix) -> Option<BigRational> {
    elementary_cycles(a).into_iter().map(|(_, _, m)| m).max()
}

/// Length of the longest node-simple path, in arcs, by DFS enumeration.
pub fn longest_simple_path(a: &TropMatrix) -> u64 {
    let d = a.rows();
    fn dfs(a: &TropMatrix, v: usize, on_path: &mut Vec<bool>) -> u64 {
        let mut best = 0;
        for w in 0..a.rows() {
            if a.get(v, w).is_finite() && !on_path[w] {
                on_path[w] = true;
                best = best.max(1 + dfs(a, w, on_path));
                on_path[w] = false;
            }
        }
        best
    }
    let mut best = 0;
    for s in 0..d {
        let mut on_path = vec![false; d];
        on_path[s] = true;
        best = best.max(dfs(a, s, &mut on_path));
    }
    best
}

/// `table[t][i][j]` = best weight of a length-`t` walk from `i` to `j` that
/// visits at least one node of `through` (endpoints count), for `t` up to
/// `horizon` inclusive.
pub fn walk_table_through(
    a: &TropMatrix,
    through: &BTreeSet<usize>,
    horizon: usize,
) -> Vec<Vec<Vec<TropScalar>>> {
    let d = a.rows();
    // state: (target node, flag "visited `through` already")
    // cur[i][j][f] = best weight of a t-walk i -> j with flag f
    let mut cur = vec![vec![[TropScalar::NegInf, TropScalar::NegInf]; d]; d];
    for (i, row) in cur.iter_mut().enumerate() {
        let f = usize::from(through.contains(&i));
        row[i][f] = TropScalar::one();
    }
    let project = |cur: &Vec<Vec<[TropScalar; 2]>>| -> Vec<Vec<TropScalar>> {
        cur.iter()
            .map(|row| row.iter().map(|e| e[1].clone()).collect())
            .collect()
    };
    let mut out = vec![project(&cur)];
    for _ in 0..horizon {
        let mut next = vec![vec![[TropScalar::NegInf, TropScalar::NegInf]; d]; d];
        for i in 0..d {
            for j in 0..d {
                for f in 0..2 {
                    let TropScalar::Finite(w) = &cur[i][j][f] else { continue };
                    for k in 0..d {
                        if let Some(wjk) = a.get(j, k).as_rational() {
                            let nf = if f == 1 || through.contains(&k) { 1 } else { 0 };
                            let cand = w + wjk;
                            match &next[i][k][nf] {
                                TropScalar::Finite(c) if *c >= cand => {}
                                _ => next[i][k][nf] = TropScalar::Finite(cand),
                            }
                        }
                    }
                }
            }
        }
        cur = next;
        out.push(project(&cur));
    }
    out
}

/// `p(W^{t,sigma}(i -> through -> j))`: the best weight over walks from `i`
/// to `j` of any length congruent to `t` mod `sigma` that pass through the
/// given node set. Requires all cycle weights of `a` to be nonpositive so
/// the supremum is attained within `horizon`.
pub fn best_walk_mod_sigma(
    table: &[Vec<Vec<TropScalar>>],
    i: usize,
    j: usize,
    t: u64,
    sigma: u64,
) -> TropScalar {
    let mut best = TropScalar::NegInf;
    let mut len = (t % sigma) as usize;
    if t == 0 {
        len = 0; // include the empty walk class
    }
    while len < table.len() {
        if table[len][i][j] > best {
            best = table[len][i][j].clone();
        }
        len += sigma as usize;
    }
    best
}

/// Plain power iteration: returns the least `t >= low` such that
/// `A^(s+sigma) = A^s` for all `s` in `[t, cap]`, scanning the literal
/// normalized powers. Panics if the sequence has not settled by `cap`.
pub fn transient_by_iteration(a_norm: &TropMatrix, sigma: u64, cap: u64) -> u64 {
    let d = a_norm.rows();
    let mut pows = Vec::with_capacity(cap as usize + sigma as usize + 2);
    pows.push(TropMatrix::identity(d));
    for _ in 0..(cap + sigma + 1) {
        let last = pows.last().unwrap().mul(a_norm).unwrap();
        pows.push(last);
    }
    let mut t = cap;
    loop {
        let ok = pows[t as usize + sigma as usize] == pows[t as usize];
        if !ok {
            return t + 1;
        }
        if t == 0 {
            return 0;
        }
        t -= 1;
    }
}
