//! Exact conditional probability of "all target edges present" given a
//! history of failed copy tests ("not all of these edges present"), in
//! exact rational arithmetic.
//!
//! Edges of K_n (n <= 16) are bit positions in a u128 mask, so clause
//! manipulation is bitwise. The engine conditions by ratio: numerator and
//! denominator are instances of E[prod_i f_i] over independent
//! Bernoulli(p) edges, where f_i = 1 when failed set i is not fully
//! present and beta when it is (beta = 0 plain; beta = 1-c in thinned
//! mode, which integrates each copy's private coin out first - the coin
//! appears in exactly one constraint). Evaluation is Shannon expansion on
//! the most-shared edge with component splitting and memoization keyed on
//! the residual clause set.

use num_traits::{One, Zero};
use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph::Edge;
use crate::prob::{rat_pow, Rat};

/// Default variable cap per connected component for the Shannon engine.
pub const ENGINE_VAR_CAP: usize = 40;
/// Default variable cap for the brute-force oracle.
pub const BRUTE_VAR_CAP: usize = 24;

/// Maps edges of K_n to bit positions (lexicographic order), n <= 16.
#[derive(Clone, Debug)]
pub struct EdgeSpace {
    n: usize,
    offsets: Vec<usize>,
}

impl EdgeSpace {
    pub fn new(n: usize) -> Result<EdgeSpace> {
        if n * (n.saturating_sub(1)) / 2 > 128 {
            return Err(Error::GraphTooLarge { got: n, cap: 16 });
        }
        let mut offsets = Vec::with_capacity(n);
        let mut acc = 0usize;
        for u in 0..n {
            offsets.push(acc);
            acc += n - u - 1;
        }
        Ok(EdgeSpace { n, offsets })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_bits(&self) -> usize {
        self.n * (self.n - 1) / 2
    }

    pub fn bit(&self, e: Edge) -> u32 {
        debug_assert!(e.v() < self.n);
        (self.offsets[e.u()] + (e.v() - e.u() - 1)) as u32
    }

    pub fn mask_of(&self, edges: &[Edge]) -> u128 {
        edges.iter().fold(0u128, |m, &e| m | (1u128 << self.bit(e)))
    }

    pub fn edge_of_bit(&self, bit: u32) -> Edge {
        let bit = bit as usize;
        let u = (0..self.n)
            .rev()
            .find(|&u| self.offsets[u] <= bit)
            .expect("bit in range");
        Edge::new(u, u + 1 + (bit - self.offsets[u]))
    }
}

/// The revealed history a query conditions on: failed residual sets
/// E_i' = E_i \ R (nonempty, disjoint from R by construction) and the
/// thinning constant when each failed test carried a private coin.
#[derive(Clone, Debug)]
pub struct HistoryConstraint {
    pub failed: Vec<u128>,
    pub thinning: Option<Rat>,
}

impl HistoryConstraint {
    pub fn plain(failed: Vec<u128>) -> HistoryConstraint {
        HistoryConstraint {
            failed,
            thinning: None,
        }
    }

    pub fn thinned(failed: Vec<u128>, c: Rat) -> HistoryConstraint {
        HistoryConstraint {
            failed,
            thinning: Some(c),
        }
    }
}

/// A conditional query: probability that all `target` edges are present
/// (and, in thinned mode, that the target's own coin succeeds) given that
/// no failed set is fully present (with its coin, in thinned mode).
#[derive(Clone, Debug)]
pub struct ConditionalQuery {
    pub target: u128,
    pub constraint: HistoryConstraint,
    pub p: Rat,
}

/// Memoizing exact evaluator. One engine per trial; the cache persists
/// across that trial's queries and is never shared between threads.
pub struct ConditionalEngine {
    p: Rat,
    /// Per-clause factor when a clause becomes fully present: 0 in plain
    /// mode, 1-c in thinned mode.
    beta: Rat,
    thinning: Option<Rat>,
    var_cap: usize,
    cache: HashMap<Vec<u128>, Rat>,
}

impl ConditionalEngine {
    pub fn new(p: Rat, thinning: Option<Rat>) -> ConditionalEngine {
        let beta = match &thinning {
            Some(c) => Rat::one() - c.clone(),
            None => Rat::zero(),
        };
        ConditionalEngine {
            p,
            beta,
            thinning,
            var_cap: ENGINE_VAR_CAP,
            cache: HashMap::new(),
        }
    }

    pub fn with_var_cap(mut self, cap: usize) -> ConditionalEngine {
        self.var_cap = cap;
        self
    }

    pub fn p(&self) -> &Rat {
        &self.p
    }

    pub fn thinning(&self) -> Option<&Rat> {
        self.thinning.as_ref()
    }

    /// Exact pi_j = P(target fully present | no failed set fully present).
    /// Constraints outside the target's edge-connected component cancel in
    /// the ratio and are dropped before evaluation.
    pub fn conditional(&mut self, target: u128, failed: &[u128]) -> Result<Rat> {
        debug_assert!(failed.iter().all(|&f| f != 0), "failed sets are nonempty");
        // For p < 1 the all-absent assignment satisfies every constraint,
        // so inconsistency arises exactly when p = 1 with a failed set.
        if self.p.is_one() && !failed.is_empty() {
            return Err(Error::ZeroProbabilityCondition);
        }
        let (in_comp, comp_vars) = target_component(target, failed);
        if comp_vars.count_ones() as usize > self.var_cap {
            return Err(Error::ComponentTooLarge {
                vars: comp_vars.count_ones() as usize,
                cap: self.var_cap,
            });
        }
        let denom = self.eval_set(in_comp.clone());
        if denom.is_zero() {
            return Err(Error::ZeroProbabilityCondition);
        }
        // Numerator: condition on the target being present.
        let mut numer = rat_pow(&self.p, target.count_ones() as usize);
        let mut reduced = Vec::with_capacity(in_comp.len());
        for &cl in &in_comp {
            let m = cl & !target;
            if m == 0 {
                if self.beta.is_zero() {
                    numer = Rat::zero();
                    break;
                }
                numer *= &self.beta;
            } else {
                reduced.push(m);
            }
        }
        if !numer.is_zero() {
            numer *= self.eval_set(reduced);
        }
        let mut ratio = numer / denom;
        if let Some(c) = &self.thinning {
            ratio *= c;
        }
        Ok(ratio)
    }

    /// E[prod_i f_i] over the given clauses (any dependency structure):
    /// split into edge-connected components and multiply.
    fn eval_set(&mut self, clauses: Vec<u128>) -> Rat {
        if clauses.is_empty() {
            return Rat::one();
        }
        let mut value = Rat::one();
        for comp in split_components(clauses) {
            value *= self.eval_connected(comp);
            if value.is_zero() {
                break;
            }
        }
        value
    }

    /// Evaluates one edge-connected clause component by Shannon expansion.
    fn eval_connected(&mut self, mut clauses: Vec<u128>) -> Rat {
        if clauses.is_empty() {
            return Rat::one();
        }
        if clauses.len() == 1 {
            // f = 1 unless fully present (prob p^k), then beta.
            let k = clauses[0].count_ones() as usize;
            let full = rat_pow(&self.p, k);
            return Rat::one() - full * (Rat::one() - self.beta.clone());
        }
        clauses.sort_unstable();
        if self.beta.is_zero() {
            clauses.dedup();
            drop_supersets(&mut clauses);
            if clauses.len() == 1 {
                let k = clauses[0].count_ones() as usize;
                return Rat::one() - rat_pow(&self.p, k);
            }
        }
        if let Some(v) = self.cache.get(&clauses) {
            return v.clone();
        }
        let var = most_shared_bit(&clauses);
        let bit = 1u128 << var;
        // Present branch: remove the edge from clauses; emptied clauses
        // are fully present and contribute beta each.
        let mut present_factor = self.p.clone();
        let mut present_clauses = Vec::with_capacity(clauses.len());
        for &cl in &clauses {
            if cl & bit == 0 {
                present_clauses.push(cl);
                continue;
            }
            let m = cl & !bit;
            if m == 0 {
                if self.beta.is_zero() {
                    present_factor = Rat::zero();
                    break;
                }
                present_factor *= &self.beta;
            } else {
                present_clauses.push(m);
            }
        }
        let present = if present_factor.is_zero() {
            Rat::zero()
        } else {
            present_factor * self.eval_set(present_clauses)
        };
        // Absent branch: clauses containing the edge are satisfied.
        let absent_clauses: Vec<u128> =
            clauses.iter().copied().filter(|cl| cl & bit == 0).collect();
        let absent = (Rat::one() - self.p.clone()) * self.eval_set(absent_clauses);
        let value = present + absent;
        self.cache.insert(clauses, value.clone());
        value
    }

    pub fn cache_len(&self) -> usize {
        self.cache.len()
    }
}

/// Clauses in the target's component: grow the variable set from the
/// target through clauses that share a variable, to a fixpoint. Returns
/// (clauses inside, union of variables including the target's).
fn target_component(target: u128, failed: &[u128]) -> (Vec<u128>, u128) {
    let mut vars = target;
    let mut in_comp = vec![false; failed.len()];
    loop {
        let mut grew = false;
        for (i, &cl) in failed.iter().enumerate() {
            if !in_comp[i] && cl & vars != 0 {
                in_comp[i] = true;
                vars |= cl;
                grew = true;
            }
        }
        if !grew {
            break;
        }
    }
    let clauses = failed
        .iter()
        .enumerate()
        .filter(|(i, _)| in_comp[*i])
        .map(|(_, &cl)| cl)
        .collect();
    (clauses, vars)
}

/// Partitions clauses into edge-connected components.
fn split_components(mut clauses: Vec<u128>) -> Vec<Vec<u128>> {
    let mut out = Vec::new();
    while let Some(seed) = clauses.pop() {
        let mut comp = vec![seed];
        let mut vars = seed;
        loop {
            let mut grew = false;
            let mut rest = Vec::with_capacity(clauses.len());
            for cl in clauses.drain(..) {
                if cl & vars != 0 {
                    vars |= cl;
                    comp.push(cl);
                    grew = true;
                } else {
                    rest.push(cl);
                }
            }
            clauses = rest;
            if !grew {
                break;
            }
        }
        out.push(comp);
    }
    out
}

/// Drops clauses that are strict supersets of another clause. Sound only
/// when beta = 0: in every assignment with a nonzero product the subset is
/// not fully present, hence neither is the superset.
fn drop_supersets(clauses: &mut Vec<u128>) {
    let snapshot = clauses.clone();
    clauses.retain(|&cl| {
        !snapshot
            .iter()
            .any(|&other| other != cl && other & cl == other)
    });
}

/// The variable occurring in the most clauses (ties: lowest bit).
fn most_shared_bit(clauses: &[u128]) -> u32 {
    let mut best_bit = 0u32;
    let mut best_count = 0u32;
    let all: u128 = clauses.iter().fold(0, |a, &c| a | c);
    let mut m = all;
    while m != 0 {
        let bit = m.trailing_zeros();
        m &= m - 1;
        let count = clauses.iter().filter(|&&c| c & (1u128 << bit) != 0).count() as u32;
        if count > best_count {
            best_count = count;
            best_bit = bit;
        }
    }
    best_bit
}

/// Independent oracle: direct weighted enumeration over every assignment
/// of the in-scope variables (union of target and all failed sets). No
/// component dropping, no caching; exact.
pub fn brute_force_conditional(query: &ConditionalQuery) -> Result<Rat> {
    let scope: u128 = query
        .constraint
        .failed
        .iter()
        .fold(query.target, |a, &c| a | c);
    let vars: Vec<u32> = bits_of(scope);
    let m = vars.len();
    if m > BRUTE_VAR_CAP {
        return Err(Error::ScopeTooLarge {
            vars: m,
            cap: BRUTE_VAR_CAP,
        });
    }
    // Remap clauses and target onto local bits 0..m.
    let local = |mask: u128| -> u32 {
        let mut out = 0u32;
        for (i, &b) in vars.iter().enumerate() {
            if mask & (1u128 << b) != 0 {
                out |= 1 << i;
            }
        }
        out
    };
    let clauses: Vec<u32> = query.constraint.failed.iter().map(|&c| local(c)).collect();
    let target = local(query.target);
    // Count assignments grouped by (popcount, number of fully-present
    // failed sets); weights applied once per group.
    let rows = m + 1;
    let cols = clauses.len() + 1;
    let mut denom_counts = vec![0u64; rows * cols];
    let mut numer_counts = vec![0u64; rows * cols];
    for assign in 0u64..(1u64 << m) {
        let a = assign as u32;
        let ones = a.count_ones() as usize;
        let full = clauses.iter().filter(|&&c| a & c == c).count();
        denom_counts[ones * cols + full] += 1;
        if a & target == target {
            numer_counts[ones * cols + full] += 1;
        }
    }
    let beta = match &query.constraint.thinning {
        Some(c) => Rat::one() - c.clone(),
        None => Rat::zero(),
    };
    let weigh = |counts: &[u64]| -> Rat {
        let mut total = Rat::zero();
        for ones in 0..rows {
            for full in 0..cols {
                let count = counts[ones * cols + full];
                if count == 0 {
                    continue;
                }
                if full > 0 && beta.is_zero() {
                    continue;
                }
                let mut w = rat_pow(&query.p, ones)
                    * rat_pow(&(Rat::one() - query.p.clone()), m - ones)
                    * Rat::from_integer(count.into());
                if full > 0 {
                    w *= rat_pow(&beta, full);
                }
                total += w;
            }
        }
        total
    };
    let denom = weigh(&denom_counts);
    if denom.is_zero() {
        return Err(Error::ZeroProbabilityCondition);
    }
    let mut ratio = weigh(&numer_counts) / denom;
    if let Some(c) = &query.constraint.thinning {
        ratio *= c;
    }
    Ok(ratio)
}

/// Runs the memoizing engine on a query (fresh engine, default caps).
pub fn conditional_probability(query: &ConditionalQuery) -> Result<Rat> {
    let mut engine = ConditionalEngine::new(query.p.clone(), query.constraint.thinning.clone());
    engine.conditional(query.target, &query.constraint.failed)
}

/// Q_j = sum over failed residuals e intersecting the target residual t
/// of p^{|e \ t|}. Exact.
pub fn q_statistic(p: &Rat, target_residual: u128, failed_residuals: &[u128]) -> Rat {
    let mut q = Rat::zero();
    for &e in failed_residuals {
        if e & target_residual != 0 {
            q += rat_pow(p, (e & !target_residual).count_ones() as usize);
        }
    }
    q
}

/// The closed-form lower bound on pi_j: p^{|t|} (1 - Q) in plain mode,
/// c p^{|t|} (1 - c Q) in thinned mode. May be negative; not clamped.
pub fn pi_lower_bound(p: &Rat, thinning: Option<&Rat>, target_residual: u128, q: &Rat) -> Rat {
    let base = rat_pow(p, target_residual.count_ones() as usize);
    match thinning {
        None => base * (Rat::one() - q.clone()),
        Some(c) => c.clone() * base * (Rat::one() - c.clone() * q.clone()),
    }
}

/// Line-oriented diagnostic dump of a query: target, clauses, and the
/// component partition.
pub fn dump_query(query: &ConditionalQuery, space: &EdgeSpace) -> String {
    let fmt_mask = |mask: u128| -> String {
        bits_of(mask)
            .into_iter()
            .map(|b| {
                let e = space.edge_of_bit(b);
                format!("{}-{}", e.u(), e.v())
            })
            .collect::<Vec<_>>()
            .join(",")
    };
    let mut out = format!("target {}\n", fmt_mask(query.target));
    for (i, &f) in query.constraint.failed.iter().enumerate() {
        out.push_str(&format!("failed[{i}] {}\n", fmt_mask(f)));
    }
    let (in_comp, vars) = target_component(query.target, &query.constraint.failed);
    out.push_str(&format!(
        "component vars={} clauses={}\n",
        vars.count_ones(),
        in_comp.len()
    ));
    out
}

fn bits_of(mask: u128) -> Vec<u32> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    let mut m = mask;
    while m != 0 {
        out.push(m.trailing_zeros());
        m &= m - 1;
    }
    out
}
