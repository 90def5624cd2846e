//! Structural analysis of the digraph of a max-plus matrix: strongly
//! connected components, cyclicity and cyclic classes, girth and
//! circumference, the maximum cycle mean, and the critical graph.

use crate::error::{Result, TropError};
use crate::matrix::TropMatrix;
use crate::scalar::TropScalar;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

const EXHAUSTIVE_PATH_LIMIT: usize = 20;
const CYCLE_ENUM_LIMIT: usize = 14;
// profile() computes the circumference eagerly only at desk scale; the
// simple-path DFS behind it is exponential in the worst case
const EAGER_CIRCUMFERENCE_LIMIT: usize = 10;

/// One strongly connected component of the critical graph, with its
/// cyclicity, girth, and a witness cycle attaining the girth.
#[derive(Clone, Debug)]
pub struct CriticalComponent {
    pub nodes: Vec<usize>,
    pub arcs: Vec<(usize, usize)>,
    pub cyclicity: u64,
    pub girth: u64,
    /// A shortest cycle of the component, as a node sequence without the
    /// repeated endpoint.
    pub shortest_cycle: Vec<usize>,
}

/// The critical graph: nodes and arcs lying on cycles whose mean attains
/// the maximum cycle mean.
#[derive(Clone, Debug)]
pub struct CriticalGraph {
    pub nodes: BTreeSet<usize>,
    pub arcs: BTreeSet<(usize, usize)>,
    pub components: Vec<CriticalComponent>,
    /// Cyclicity of the whole critical graph: lcm of component cyclicities.
    pub sigma: u64,
    /// Greatest component cyclicity.
    pub sigma_hat: u64,
    /// Greatest component girth.
    pub g_hat: u64,
}

/// Structural summary of the digraph of a square matrix.
#[derive(Clone, Debug)]
pub struct DigraphProfile {
    pub node_count: usize,
    pub sccs: Vec<Vec<usize>>,
    pub is_strongly_connected: bool,
    /// Maximum cycle mean; `None` when the digraph is acyclic.
    pub lambda: Option<BigRational>,
    /// gcd of cycle lengths per component, combined by lcm; `None` when
    /// acyclic.
    pub cyclicity: Option<u64>,
    pub girth: Option<u64>,
    /// Longest elementary cycle length; `None` when acyclic or the instance
    /// is too large for exhaustive search.
    pub circumference: Option<u64>,
    pub critical: Option<CriticalGraph>,
}

impl DigraphProfile {
    pub fn lambda_scalar(&self) -> TropScalar {
        match &self.lambda {
            None => TropScalar::NegInf,
            Some(r) => TropScalar::Finite(r.clone()),
        }
    }

    pub fn require_lambda(&self) -> Result<&BigRational> {
        self.lambda.as_ref().ok_or(TropError::Acyclic)
    }

    pub fn require_irreducible(&self) -> Result<()> {
        if self.is_strongly_connected {
            Ok(())
        } else {
            Err(TropError::Irreducibility)
        }
    }

    pub fn critical(&self) -> Result<&CriticalGraph> {
        self.critical.as_ref().ok_or(TropError::Acyclic)
    }
}

pub(crate) fn adjacency(a: &TropMatrix) -> Vec<Vec<usize>> {
    let d = a.rows();
    let mut adj = vec![Vec::new(); d];
    for (i, j, _) in a.arcs() {
        adj[i].push(j);
    }
    adj
}

/// Tarjan's strongly connected components, iterative. Components are
/// returned sorted by their smallest node for determinism.
pub fn tarjan_scc(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = adj.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut next_index = 0usize;
    let mut comps: Vec<Vec<usize>> = Vec::new();

    // explicit DFS frames: (node, next child position)
    let mut call: Vec<(usize, usize)> = Vec::new();
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        call.push((root, 0));
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;
        while !call.is_empty() {
            let (v, ci) = *call.last().unwrap();
            if ci < adj[v].len() {
                let w = adj[v][ci];
                call.last_mut().unwrap().1 += 1;
                if index[w] == usize::MAX {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    comps.push(comp);
                }
            }
        }
    }
    comps.sort_by_key(|c| c[0]);
    comps
}

/// Maximum cycle mean of a strongly connected arc set by Karp's dynamic
/// program over walk lengths `0..=n` from a fixed source.
fn karp_max_cycle_mean(nodes: &[usize], arcs: &[(usize, usize, BigRational)]) -> Option<BigRational> {
    let n = nodes.len();
    if arcs.is_empty() {
        return None;
    }
    let pos: BTreeMap<usize, usize> = nodes.iter().enumerate().map(|(k, &v)| (v, k)).collect();
    let local: Vec<(usize, usize, &BigRational)> = arcs
        .iter()
        .map(|(u, v, w)| (pos[u], pos[v], w))
        .collect();
    let mut f: Vec<Vec<Option<BigRational>>> = vec![vec![None; n]; n + 1];
    f[0][0] = Some(BigRational::zero());
    for k in 1..=n {
        for &(u, v, w) in &local {
            if let Some(fu) = &f[k - 1][u] {
                let cand = fu + w;
                match &f[k][v] {
                    Some(cur) if *cur >= cand => {}
                    _ => f[k][v] = Some(cand),
                }
            }
        }
    }
    let mut best: Option<BigRational> = None;
    for v in 0..n {
        let Some(fnv) = &f[n][v] else { continue };
        let mut inner: Option<BigRational> = None;
        for k in 0..n {
            if let Some(fkv) = &f[k][v] {
                let val = (fnv - fkv) / BigRational::from_integer(((n - k) as i64).into());
                match &inner {
                    Some(cur) if *cur <= val => {}
                    _ => inner = Some(val),
                }
            }
        }
        if let Some(val) = inner {
            match &best {
                Some(cur) if *cur >= val => {}
                _ => best = Some(val),
            }
        }
    }
    best
}

/// BFS levels from the component's smallest node, following arcs inside the
/// component only.
fn bfs_levels(nodes: &[usize], adj: &[Vec<usize>], in_comp: &[bool]) -> HashMap<usize, u64> {
    let root = nodes[0];
    let mut level = HashMap::new();
    level.insert(root, 0u64);
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        let lv = level[&v];
        for &w in &adj[v] {
            if in_comp[w] && !level.contains_key(&w) {
                level.insert(w, lv + 1);
                queue.push_back(w);
            }
        }
    }
    level
}

/// gcd of `level(u) + 1 - level(v)` over the component's arcs: the
/// cyclicity of a strongly connected digraph.
fn component_cyclicity(nodes: &[usize], adj: &[Vec<usize>], d: usize) -> Option<u64> {
    let mut in_comp = vec![false; d];
    for &v in nodes {
        in_comp[v] = true;
    }
    let has_arc = nodes.iter().any(|&v| adj[v].iter().any(|&w| in_comp[w]));
    if !has_arc {
        return None;
    }
    let level = bfs_levels(nodes, adj, &in_comp);
    let mut g: i64 = 0;
    for &v in nodes {
        for &w in &adj[v] {
            if in_comp[w] {
                let diff = level[&v] as i64 + 1 - level[&w] as i64;
                g = g.gcd(&diff);
            }
        }
    }
    Some(g.unsigned_abs())
}

/// Shortest cycle through `v` within the given arc filter, as
/// `(length, node sequence)`.
fn shortest_cycle_through(
    d: usize,
    v: usize,
    arc_ok: &impl Fn(usize, usize) -> bool,
) -> Option<(u64, Vec<usize>)> {
    let mut dist = vec![u64::MAX; d];
    let mut parent = vec![usize::MAX; d];
    let mut queue = VecDeque::new();
    for w in 0..d {
        if arc_ok(v, w) {
            if w == v {
                return Some((1, vec![v]));
            }
            if dist[w] == u64::MAX {
                dist[w] = 1;
                parent[w] = v;
                queue.push_back(w);
            }
        }
    }
    while let Some(u) = queue.pop_front() {
        for w in 0..d {
            if !arc_ok(u, w) {
                continue;
            }
            if w == v {
                let mut seq = vec![u];
                let mut cur = u;
                while parent[cur] != v {
                    cur = parent[cur];
                    seq.push(cur);
                }
                seq.push(v);
                seq.reverse();
                return Some((dist[u] + 1, seq));
            }
            if dist[w] == u64::MAX {
                dist[w] = dist[u] + 1;
                parent[w] = u;
                queue.push_back(w);
            }
        }
    }
    None
}

/// Critical nodes and arcs of `a` given its maximum cycle mean: normalize,
/// take the Kleene star, and read criticality off zero diagonal entries of
/// `A~ (A~)*` and zero closed-walk weights through each arc.
pub(crate) fn critical_subgraph(
    a: &TropMatrix,
    lambda: &BigRational,
) -> Result<(BTreeSet<usize>, BTreeSet<(usize, usize)>)> {
    let d = a.rows();
    let norm = TropMatrix::scalar_mul(&TropScalar::Finite(-lambda.clone()), a)?;
    let star = norm.kleene_star().map_err(|e| match e {
        TropError::PositiveCycle => {
            TropError::Structure("normalized matrix still has a positive cycle".into())
        }
        other => other,
    })?;
    let plus = norm.mul(&star)?;
    let zero = TropScalar::one();
    let mut nodes = BTreeSet::new();
    for i in 0..d {
        if plus.get(i, i) == &zero {
            nodes.insert(i);
        }
    }
    let mut arcs = BTreeSet::new();
    for (i, j, _) in norm.arcs() {
        if nodes.contains(&i) && nodes.contains(&j) {
            let back = norm.get(i, j) * star.get(j, i);
            if back == zero {
                arcs.insert((i, j));
            }
        }
    }
    Ok((nodes, arcs))
}

fn critical_graph(a: &TropMatrix, lambda: &BigRational) -> Result<CriticalGraph> {
    let d = a.rows();
    let (nodes, arcs) = critical_subgraph(a, lambda)?;
    let mut adj = vec![Vec::new(); d];
    for &(i, j) in &arcs {
        adj[i].push(j);
    }
    let comps_all = tarjan_scc(&adj);
    let mut components = Vec::new();
    for comp in comps_all {
        if !comp.iter().all(|v| nodes.contains(v)) {
            continue;
        }
        let comp_set: BTreeSet<usize> = comp.iter().copied().collect();
        let comp_arcs: Vec<(usize, usize)> = arcs
            .iter()
            .copied()
            .filter(|(i, j)| comp_set.contains(i) && comp_set.contains(j))
            .collect();
        if comp_arcs.is_empty() {
            continue;
        }
        let cyclicity = component_cyclicity(&comp, &adj, d)
            .ok_or_else(|| TropError::Structure("critical component without a cycle".into()))?;
        let arc_ok = |u: usize, w: usize| comp_arcs.contains(&(u, w));
        let mut girth = u64::MAX;
        let mut witness = Vec::new();
        for &v in &comp {
            if let Some((len, seq)) = shortest_cycle_through(d, v, &arc_ok) {
                if len < girth {
                    girth = len;
                    witness = seq;
                }
            }
        }
        components.push(CriticalComponent {
            nodes: comp,
            arcs: comp_arcs,
            cyclicity,
            girth,
            shortest_cycle: witness,
        });
    }
    if components.is_empty() {
        return Err(TropError::Structure("empty critical graph".into()));
    }
    let sigma = components.iter().fold(1u64, |acc, c| acc.lcm(&c.cyclicity));
    let sigma_hat = components.iter().map(|c| c.cyclicity).max().unwrap();
    let g_hat = components.iter().map(|c| c.girth).max().unwrap();
    Ok(CriticalGraph {
        nodes,
        arcs,
        components,
        sigma,
        sigma_hat,
        g_hat,
    })
}

/// Full structural profile of the digraph of `a`.
pub fn profile(a: &TropMatrix) -> Result<DigraphProfile> {
    let d = a.require_square()?;
    let adj = adjacency(a);
    let sccs = tarjan_scc(&adj);
    let is_strongly_connected = sccs.len() == 1;

    // lambda per component, by Karp
    let mut lambda: Option<BigRational> = None;
    for comp in &sccs {
        let comp_set: BTreeSet<usize> = comp.iter().copied().collect();
        let arcs: Vec<(usize, usize, BigRational)> = a
            .arcs()
            .filter(|(i, j, _)| comp_set.contains(i) && comp_set.contains(j))
            .map(|(i, j, w)| (i, j, w.clone()))
            .collect();
        if let Some(mean) = karp_max_cycle_mean(comp, &arcs) {
            match &lambda {
                Some(cur) if *cur >= mean => {}
                _ => lambda = Some(mean),
            }
        }
    }

    // cyclicity: lcm over components that contain a cycle
    let mut cyclicity: Option<u64> = None;
    for comp in &sccs {
        if let Some(c) = component_cyclicity(comp, &adj, d) {
            cyclicity = Some(match cyclicity {
                None => c,
                Some(acc) => acc.lcm(&c),
            });
        }
    }

    let arc_ok = |u: usize, w: usize| a.get(u, w).is_finite();
    let girth = (0..d)
        .filter_map(|v| shortest_cycle_through(d, v, &arc_ok).map(|(len, _)| len))
        .min();

    let circumference = if girth.is_none() {
        None
    } else if d <= EAGER_CIRCUMFERENCE_LIMIT {
        Some(longest_cycle_len(a))
    } else {
        None
    };

    let critical = match &lambda {
        None => None,
        Some(l) => Some(critical_graph(a, l)?),
    };

    Ok(DigraphProfile {
        node_count: d,
        sccs,
        is_strongly_connected,
        lambda,
        cyclicity,
        girth,
        circumference,
        critical,
    })
}

/// Longest elementary cycle length by DFS over simple paths. Exponential;
/// callers gate the dimension.
pub(crate) fn longest_cycle_len(a: &TropMatrix) -> u64 {
    let d = a.rows();
    let mut best = 0u64;
    // paths confined to nodes >= start so each cycle is found at its
    // smallest node
    fn dfs(a: &TropMatrix, start: usize, v: usize, mask: &mut Vec<bool>, len: u64, best: &mut u64) {
        for w in start..a.rows() {
            if !a.get(v, w).is_finite() {
                continue;
            }
            if w == start {
                *best = (*best).max(len + 1);
            } else if !mask[w] {
                mask[w] = true;
                dfs(a, start, w, mask, len + 1, best);
                mask[w] = false;
            }
        }
    }
    for s in 0..d {
        let mut mask = vec![false; d];
        mask[s] = true;
        dfs(a, s, s, &mut mask, 0, &mut best);
    }
    best
}

/// Longest elementary cycle length within an explicit arc set on `d` nodes.
pub fn circumference_of(d: usize, arcs: &BTreeSet<(usize, usize)>) -> u64 {
    let probe = TropMatrix::from_fn(d, d, |i, j| {
        if arcs.contains(&(i, j)) {
            TropScalar::one()
        } else {
            TropScalar::NegInf
        }
    });
    longest_cycle_len(&probe)
}

/// Length of the longest node-simple path (in arcs), by exhaustive DFS with
/// memoization on `(node, visited set)`.
pub fn longest_elementary_path(a: &TropMatrix) -> Result<u64> {
    let d = a.require_square()?;
    if d > EXHAUSTIVE_PATH_LIMIT {
        return Err(TropError::SizeLimit {
            what: "longest elementary path",
            limit: EXHAUSTIVE_PATH_LIMIT,
            actual: d,
        });
    }
    let adj = adjacency(a);
    fn go(v: usize, mask: u32, adj: &[Vec<usize>], memo: &mut HashMap<(usize, u32), u64>) -> u64 {
        if let Some(&hit) = memo.get(&(v, mask)) {
            return hit;
        }
        let mut best = 0;
        for &w in &adj[v] {
            if mask & (1 << w) == 0 {
                best = best.max(1 + go(w, mask | (1 << w), adj, memo));
            }
        }
        memo.insert((v, mask), best);
        best
    }
    let mut memo = HashMap::new();
    let mut best = 0;
    for s in 0..d {
        best = best.max(go(s, 1 << s, &adj, &mut memo));
    }
    Ok(best)
}

/// Every elementary cycle with its exact mean weight, by Johnson's blocked
/// search. Cycles are node sequences without the repeated endpoint, starting
/// at their smallest node; self-loops count as cycles of length 1.
pub fn enumerate_elementary_cycles(a: &TropMatrix) -> Result<Vec<(Vec<usize>, BigRational)>> {
    let d = a.require_square()?;
    if d > CYCLE_ENUM_LIMIT {
        return Err(TropError::SizeLimit {
            what: "elementary cycle enumeration",
            limit: CYCLE_ENUM_LIMIT,
            actual: d,
        });
    }
    let adj = adjacency(a);
    let mut cycles: Vec<Vec<usize>> = Vec::new();

    for start in 0..d {
        let neighbors = |v: usize| -> Vec<usize> {
            adj[v].iter().copied().filter(|&w| w >= start).collect()
        };
        let mut blocked = vec![false; d];
        blocked[start] = true;
        let mut blist: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); d];
        let mut path = vec![start];
        let mut stack: Vec<(usize, Vec<usize>)> = vec![(start, neighbors(start))];
        let mut closed: Vec<bool> = vec![false; d];

        fn unblock(v: usize, blocked: &mut Vec<bool>, blist: &mut Vec<BTreeSet<usize>>) {
            let mut todo = vec![v];
            while let Some(u) = todo.pop() {
                blocked[u] = false;
                for w in std::mem::take(&mut blist[u]) {
                    if blocked[w] {
                        todo.push(w);
                    }
                }
            }
        }

        while let Some((v, next)) = stack.last_mut() {
            let v = *v;
            if let Some(w) = next.pop() {
                if w == start {
                    cycles.push(path.clone());
                    for &u in &path {
                        closed[u] = true;
                    }
                } else if !blocked[w] {
                    path.push(w);
                    blocked[w] = true;
                    closed[w] = false;
                    stack.push((w, neighbors(w)));
                }
                continue;
            }
            if closed[v] {
                unblock(v, &mut blocked, &mut blist);
            } else {
                for w in neighbors(v) {
                    blist[w].insert(v);
                }
            }
            stack.pop();
            path.pop();
        }
    }

    let mut out: Vec<(Vec<usize>, BigRational)> = cycles
        .into_iter()
        .map(|seq| {
            let mut total = BigRational::zero();
            for k in 0..seq.len() {
                let from = seq[k];
                let to = seq[(k + 1) % seq.len()];
                total += a.get(from, to).as_rational().expect("cycle arc must be finite");
            }
            let mean = total / BigRational::from_integer((seq.len() as i64).into());
            (seq, mean)
        })
        .collect();
    out.sort_by(|(p, _), (q, _)| p.len().cmp(&q.len()).then(p.cmp(q)));
    Ok(out)
}

/// The cyclic classes of an irreducible matrix: nodes grouped by BFS level
/// mod the cyclicity, numbered starting from the class of node 0.
#[derive(Clone, Debug)]
pub struct CyclicClassDecomposition {
    pub gamma: u64,
    /// `classes[i]` holds the original node indices of class `N_{i+1}`;
    /// every arc goes from class `i` to class `i+1 mod gamma`.
    pub classes: Vec<Vec<usize>>,
}

impl CyclicClassDecomposition {
    /// Concatenation of the classes: the permutation (new index -> old
    /// index) that puts the matrix into block-cyclic form.
    pub fn permutation(&self) -> Vec<usize> {
        self.classes.iter().flatten().copied().collect()
    }

    pub fn class_of(&self, node: usize) -> usize {
        self.classes
            .iter()
            .position(|c| c.contains(&node))
            .expect("node outside decomposition")
    }

    /// The block of `m` mapping class `row_class` to class `col_class`.
    pub fn block_of(&self, m: &TropMatrix, row_class: usize, col_class: usize) -> TropMatrix {
        let g = self.classes.len();
        m.submatrix(&self.classes[row_class % g], &self.classes[col_class % g])
    }

    /// The block row `i` of `A^t`, which maps class `i` to class `i+t`.
    pub fn power_block(&self, a: &TropMatrix, t: u64, i: usize) -> Result<TropMatrix> {
        let g = self.classes.len() as u64;
        let pw = a.pow(t)?;
        Ok(self.block_of(&pw, i, i + (t % g) as usize))
    }

    /// Merge classes modulo `gamma_form` (a divisor of `gamma`), producing a
    /// coarser block-cyclic structure.
    pub fn merge_classes(&self, gamma_form: u64) -> Result<CyclicClassDecomposition> {
        if gamma_form == 0 || self.gamma % gamma_form != 0 {
            return Err(TropError::Domain(format!(
                "{} does not divide cyclicity {}",
                gamma_form, self.gamma
            )));
        }
        let gf = gamma_form as usize;
        let mut classes = vec![Vec::new(); gf];
        for (i, c) in self.classes.iter().enumerate() {
            classes[i % gf].extend(c.iter().copied());
        }
        for c in &mut classes {
            c.sort_unstable();
        }
        Ok(CyclicClassDecomposition {
            gamma: gamma_form,
            classes,
        })
    }
}

/// BFS-level partition of an irreducible matrix into its cyclic classes.
pub fn cyclic_classes(a: &TropMatrix) -> Result<CyclicClassDecomposition> {
    let d = a.require_square()?;
    let prof = profile(a)?;
    prof.require_irreducible()?;
    let gamma = prof
        .cyclicity
        .ok_or(TropError::Acyclic)?;
    let adj = adjacency(a);
    let in_comp = vec![true; d];
    let nodes: Vec<usize> = (0..d).collect();
    let level = bfs_levels(&nodes, &adj, &in_comp);
    let mut classes = vec![Vec::new(); gamma as usize];
    for v in 0..d {
        classes[(level[&v] % gamma) as usize].push(v);
    }
    for c in &mut classes {
        c.sort_unstable();
    }
    Ok(CyclicClassDecomposition { gamma, classes })
}

/// The diagonal blocks of `A^gamma`: block `i` is the product
/// `A_i A_{i+1} ... A_{i+gamma-1}` of the cyclic-class blocks.
pub fn diagonal_blocks(a: &TropMatrix, dec: &CyclicClassDecomposition) -> Result<Vec<TropMatrix>> {
    let g = dec.classes.len();
    let mut out = Vec::with_capacity(g);
    for i in 0..g {
        let mut acc = dec.block_of(a, i, i + 1);
        for k in 1..g {
            acc = acc.mul(&dec.block_of(a, i + k, i + k + 1))?;
        }
        out.push(acc);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bruteforce;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn m(s: &str) -> TropMatrix {
        s.parse().unwrap()
    }

    fn random_irreducible(d: usize, rng: &mut ChaCha8Rng) -> TropMatrix {
        loop {
            let a = TropMatrix::from_fn(d, d, |_, _| {
                if rng.random_bool(0.55) {
                    TropScalar::int(rng.random_range(-5..=5))
                } else {
                    TropScalar::NegInf
                }
            });
            if let Ok(p) = profile(&a) {
                if p.is_strongly_connected && p.lambda.is_some() {
                    return a;
                }
            }
        }
    }

    #[test]
    fn profile_two_node_example() {
        // loop at 1 of weight 0 (mean 0) and a 2-cycle of mean (3-1)/2 = 1
        let a = m("0 3; -1 -inf");
        let p = profile(&a).unwrap();
        assert_eq!(p.lambda, Some(BigRational::from_integer(1.into())));
        assert_eq!(p.cyclicity, Some(1));
        let crit = p.critical.as_ref().unwrap();
        assert_eq!(crit.nodes, BTreeSet::from([0, 1]));
        assert_eq!(crit.arcs, BTreeSet::from([(0, 1), (1, 0)]));
    }

    #[test]
    fn profile_zero_weight_three_cycle() {
        let a = m("-inf 0 -inf; -inf -inf 0; 0 -inf -inf");
        let p = profile(&a).unwrap();
        assert_eq!(p.lambda, Some(BigRational::zero()));
        assert_eq!(p.cyclicity, Some(3));
        assert_eq!(p.girth, Some(3));
        assert_eq!(p.circumference, Some(3));
        let crit = p.critical.as_ref().unwrap();
        assert_eq!(crit.nodes.len(), 3);
        assert_eq!(crit.sigma, 3);
    }

    #[test]
    fn lambda_matches_cycle_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..40 {
            let a = random_irreducible(6, &mut rng);
            let p = profile(&a).unwrap();
            assert_eq!(p.lambda, bruteforce::max_cycle_mean(&a));
        }
    }

    #[test]
    fn lambda_invariant_under_similarity() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..25 {
            let a = random_irreducible(5, &mut rng);
            let lam = profile(&a).unwrap().lambda;
            // diagonal similarity
            let diag: Vec<i64> = (0..5).map(|_| rng.random_range(-4..=4)).collect();
            let sim = TropMatrix::from_fn(5, 5, |i, j| match a.get(i, j) {
                TropScalar::NegInf => TropScalar::NegInf,
                TropScalar::Finite(w) => {
                    TropScalar::Finite(w + BigRational::from_integer((diag[j] - diag[i]).into()))
                }
            });
            assert_eq!(profile(&sim).unwrap().lambda, lam);
            // permutation similarity
            let mut perm: Vec<usize> = (0..5).collect();
            for i in (1..5).rev() {
                let j = rng.random_range(0..=i);
                perm.swap(i, j);
            }
            assert_eq!(profile(&a.permute(&perm).unwrap()).unwrap().lambda, lam);
        }
    }

    #[test]
    fn acyclic_matrix_has_no_lambda() {
        let a = m("-inf 1; -inf -inf");
        let p = profile(&a).unwrap();
        assert_eq!(p.lambda, None);
        assert!(matches!(p.require_lambda(), Err(TropError::Acyclic)));
        let empty = TropMatrix::all_neg_inf(3, 3);
        assert_eq!(profile(&empty).unwrap().lambda, None);
    }

    #[test]
    fn cyclic_classes_four_cycle() {
        let a = m("-inf 0 -inf -inf; -inf -inf 0 -inf; -inf -inf -inf 0; 0 -inf -inf -inf");
        let dec = cyclic_classes(&a).unwrap();
        assert_eq!(dec.gamma, 4);
        assert_eq!(dec.classes, vec![vec![0], vec![1], vec![2], vec![3]]);
    }

    #[test]
    fn cyclic_classes_primitive_graph() {
        let a = m("0 0; 0 -inf");
        let dec = cyclic_classes(&a).unwrap();
        assert_eq!(dec.gamma, 1);
        assert_eq!(dec.classes, vec![vec![0, 1]]);
    }

    #[test]
    fn cyclic_classes_bipartite_five_nodes() {
        // classes {0,1,2} and {3,4}: all arcs cross between the two sides
        let a = m(
            "-inf -inf -inf 0 1; -inf -inf -inf 0 -inf; -inf -inf -inf -inf 0; \
             0 1 -inf -inf -inf; -inf 0 1 -inf -inf",
        );
        let dec = cyclic_classes(&a).unwrap();
        assert_eq!(dec.gamma, 2);
        let sizes: Vec<usize> = dec.classes.iter().map(|c| c.len()).collect();
        assert_eq!(sizes, vec![3, 2]);
    }

    #[test]
    fn cyclic_classes_reject_reducible() {
        let a = m("0 0; -inf 0");
        assert!(matches!(cyclic_classes(&a), Err(TropError::Irreducibility)));
    }

    #[test]
    fn diagonal_blocks_examples() {
        let a = m("-inf 1; -1 -inf");
        let dec = cyclic_classes(&a).unwrap();
        let blocks = diagonal_blocks(&a, &dec).unwrap();
        assert_eq!(blocks, vec![m("0"), m("0")]);

        let b = m("0 3; -1 -inf");
        let dec1 = cyclic_classes(&b).unwrap();
        assert_eq!(diagonal_blocks(&b, &dec1).unwrap(), vec![b.clone()]);
    }

    #[test]
    fn diagonal_blocks_match_power_extraction() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        // 9 nodes in 3 classes of 3, full blocks
        let classes = [vec![0usize, 1, 2], vec![3, 4, 5], vec![6, 7, 8]];
        let a = TropMatrix::from_fn(9, 9, |i, j| {
            let ci = classes.iter().position(|c| c.contains(&i)).unwrap();
            let cj = classes.iter().position(|c| c.contains(&j)).unwrap();
            if cj == (ci + 1) % 3 {
                TropScalar::int(rng.random_range(-5..=5))
            } else {
                TropScalar::NegInf
            }
        });
        let dec = cyclic_classes(&a).unwrap();
        assert_eq!(dec.gamma, 3);
        let blocks = diagonal_blocks(&a, &dec).unwrap();
        let a3 = a.pow(3).unwrap();
        for i in 0..3 {
            assert_eq!(blocks[i], dec.block_of(&a3, i, i));
        }
    }

    #[test]
    fn longest_path_examples() {
        assert_eq!(longest_elementary_path(&m("0")).unwrap(), 0);
        let chain = m("-inf 0 -inf; -inf -inf 0; -inf -inf -inf");
        assert_eq!(longest_elementary_path(&chain).unwrap(), 2);
    }

    #[test]
    fn longest_path_matches_enumeration_on_random_dags() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..30 {
            let a = TropMatrix::from_fn(5, 5, |i, j| {
                if i < j && rng.random_bool(0.5) {
                    TropScalar::int(rng.random_range(-3..=3))
                } else {
                    TropScalar::NegInf
                }
            });
            assert_eq!(
                longest_elementary_path(&a).unwrap(),
                bruteforce::longest_simple_path(&a)
            );
        }
    }

    #[test]
    fn cycle_enumeration_examples() {
        let two = m("-inf 2; 3 -inf");
        let cycles = enumerate_elementary_cycles(&two).unwrap();
        assert_eq!(cycles.len(), 1);
        assert_eq!(cycles[0].1, BigRational::new(5.into(), 2.into()));

        let dag = m("-inf 0; -inf -inf");
        assert!(enumerate_elementary_cycles(&dag).unwrap().is_empty());

        // complete digraph on 4 nodes without loops: 20 elementary cycles
        let k4 = TropMatrix::from_fn(4, 4, |i, j| {
            if i != j {
                TropScalar::one()
            } else {
                TropScalar::NegInf
            }
        });
        assert_eq!(enumerate_elementary_cycles(&k4).unwrap().len(), 20);
    }

    #[test]
    fn cycle_enumeration_matches_dfs_reference() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..20 {
            let a = TropMatrix::from_fn(5, 5, |_, _| {
                if rng.random_bool(0.45) {
                    TropScalar::int(rng.random_range(-4..=4))
                } else {
                    TropScalar::NegInf
                }
            });
            let mine: Vec<Vec<usize>> = enumerate_elementary_cycles(&a)
                .unwrap()
                .into_iter()
                .map(|(seq, _)| seq)
                .collect();
            let reference: Vec<Vec<usize>> = bruteforce::elementary_cycles(&a)
                .into_iter()
                .map(|(seq, _, _)| seq)
                .collect();
            assert_eq!(mine, reference);
        }
    }

    #[test]
    fn girth_divides_by_cyclicity_when_strongly_connected() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for _ in 0..20 {
            let a = random_irreducible(6, &mut rng);
            let p = profile(&a).unwrap();
            let g = p.girth.unwrap();
            let c = p.circumference.unwrap();
            let gamma = p.cyclicity.unwrap();
            assert!(g <= c && c <= 6);
            assert_eq!(g % gamma, 0);
            assert_eq!(c % gamma, 0);
        }
    }
}
