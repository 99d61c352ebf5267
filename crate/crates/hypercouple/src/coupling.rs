//! The coupling engine: test copies of F for presence in G(n,p) one by
//! one, revealing only yes/no answers, and simultaneously build a random
//! F-graph H whose law is exactly H_F(n, pi). Plain and thinned modes.
//!
//! At each step the exact conditional probability pi_j of the test event
//! given the revealed history decides how the step runs: with pi_j >= pi
//! the copy is tested with probability pi/pi_j (inclusion probability
//! exactly (pi/pi_j) * pi_j = pi); with pi_j < pi a pi-coin alone decides
//! the hyperedge, and if it lands the coupling has failed (deadly step).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

use crate::conditional::{pi_lower_bound, q_statistic, ConditionalEngine, EdgeSpace};
use crate::error::{Error, Result};
use crate::fgraph::FGraph;
use crate::graph::SimpleGraph;
use crate::hypergraph::Hypergraph;
use crate::pattern::{FCopy, PatternGraph};
use crate::prob::{bernoulli, rat_pow, Rat};

/// Default node budget for avoidable-configuration checks on built H.
pub const AVOIDABLE_BUDGET: u64 = 500_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CouplingMode {
    Plain,
    /// Each copy carries an independent private coin with success
    /// probability c; the test event is "edges present and coin up".
    Thinned { c: Rat },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CopyOrder {
    /// Lexicographic on sorted edge sets (the enumeration order).
    Canonical,
    /// A seeded shuffle drawn at the start of each trial.
    Shuffled,
}

/// How to derive pi from (pattern, p).
#[derive(Clone, Debug)]
pub enum ModeSpec {
    /// pi = (1 - beta) p^s with slack beta in [0, 1).
    Plain { beta: Rat },
    /// pi = a p^s with explicit constants satisfying c(1-c) > a.
    Thinned { a: Rat, c: Rat },
    /// Thinned with constants derived from the pattern's structure:
    /// c = 1/(2C) with C = M_F + 1 from the bounded M_F search, a = c/2.
    ThinnedDerived,
}

/// Validates constants and returns (pi, mode).
pub fn derive_pi(pattern: &PatternGraph, p: &Rat, spec: &ModeSpec) -> Result<(Rat, CouplingMode)> {
    let s = pattern.s();
    match spec {
        ModeSpec::Plain { beta } => {
            if beta.is_negative() || *beta >= Rat::one() {
                return Err(Error::InvalidConstants(format!(
                    "slack beta must lie in [0,1), got {beta}"
                )));
            }
            let pi = (Rat::one() - beta.clone()) * rat_pow(p, s);
            Ok((pi, CouplingMode::Plain))
        }
        ModeSpec::Thinned { a, c } => {
            if !c.is_positive() || *c >= Rat::one() {
                return Err(Error::InvalidConstants(format!(
                    "thinning c must lie in (0,1), got {c}"
                )));
            }
            if !a.is_positive() {
                return Err(Error::InvalidConstants(format!(
                    "thinned a must be positive, got {a}"
                )));
            }
            let margin = c.clone() * (Rat::one() - c.clone());
            if margin <= *a {
                return Err(Error::InvalidConstants(format!(
                    "constraint c(1-c) > a violated: c(1-c) = {margin}, a = {a}"
                )));
            }
            let pi = a.clone() * rat_pow(p, s);
            Ok((pi, CouplingMode::Thinned { c: c.clone() }))
        }
        ModeSpec::ThinnedDerived => {
            if !pattern.classification().strictly_one_balanced {
                return Err(Error::InvalidConstants(
                    "derived thinning needs a strictly 1-balanced pattern".into(),
                ));
            }
            let mf = crate::oracles::bound_mf(pattern, &crate::oracles::EnumerationSpec::default_for_mf())?;
            let big_c = mf.lower_bound + 1;
            let c = Rat::new(BigInt::one(), BigInt::from(2 * big_c));
            let a = c.clone() / Rat::from_integer(2.into());
            let pi = a.clone() * rat_pow(p, s);
            Ok((pi, CouplingMode::Thinned { c }))
        }
    }
}

#[derive(Clone, Debug)]
pub struct CouplingConfig {
    pub n: usize,
    pub pattern: Arc<PatternGraph>,
    pub p: Rat,
    pub pi: Rat,
    pub mode: CouplingMode,
    pub copy_order: CopyOrder,
    /// B1 threshold on the maximum degree of the union graph of H.
    /// Default: 3 r ceil(max(1, pi M r / n)) + r.
    pub delta_cap: Option<usize>,
    pub avoidable_budget: u64,
    pub seed: u64,
}

impl CouplingConfig {
    pub fn new(
        n: usize,
        pattern: Arc<PatternGraph>,
        p: Rat,
        spec: &ModeSpec,
        seed: u64,
    ) -> Result<CouplingConfig> {
        let (pi, mode) = derive_pi(&pattern, &p, spec)?;
        if p.is_negative() || p > Rat::one() {
            return Err(Error::InvalidConfig(format!("p = {p} outside [0,1]")));
        }
        Ok(CouplingConfig {
            n,
            pattern,
            p,
            pi,
            mode,
            copy_order: CopyOrder::Canonical,
            delta_cap: None,
            avoidable_budget: AVOIDABLE_BUDGET,
            seed,
        })
    }

    fn thinning(&self) -> Option<Rat> {
        match &self.mode {
            CouplingMode::Plain => None,
            CouplingMode::Thinned { c } => Some(c.clone()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepClass {
    Normal,
    Dangerous,
    Deadly,
}

/// Per-step diagnostics. `step` is the position in the testing order,
/// `copy_index` the canonical enumeration index.
#[derive(Clone, Debug)]
pub struct StepRecord {
    pub step: u32,
    pub copy_index: u32,
    pub residual_edges: u32,
    pub pi_j: Rat,
    pub q_j: Rat,
    pub dangerous: bool,
    pub included: bool,
    pub deadly: bool,
}

impl StepRecord {
    pub fn class(&self) -> StepClass {
        if self.deadly {
            StepClass::Deadly
        } else if self.dangerous {
            StepClass::Dangerous
        } else {
            StepClass::Normal
        }
    }
}

#[derive(Clone, Debug)]
pub struct CouplingResult {
    pub g: SimpleGraph,
    pub h: FGraph,
    pub failed: bool,
    /// Position (in testing order) of the first deadly step.
    pub deadly_step: Option<u32>,
    pub steps: Vec<StepRecord>,
    pub b1: bool,
    pub b2: bool,
    pub delta: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Diagnosis {
    B1,
    B2,
    /// Deadly purely from finite-n slack; carries the exact Q at the
    /// deadly step, which must exceed the slack consumed.
    Unexplained { q: Rat },
}

/// Precomputed per-configuration state shared by all trials.
pub struct CouplingContext {
    pub config: CouplingConfig,
    space: EdgeSpace,
    copies: Vec<FCopy>,
    masks: Vec<u128>,
    delta: usize,
}

impl CouplingContext {
    pub fn new(config: CouplingConfig) -> Result<CouplingContext> {
        let space = EdgeSpace::new(config.n)?;
        if config.n < config.pattern.r() {
            return Err(Error::InvalidConfig(format!(
                "n = {} smaller than the pattern ({} vertices)",
                config.n,
                config.pattern.r()
            )));
        }
        let copies = config.pattern.enumerate_copies(config.n);
        let masks: Vec<u128> = copies
            .iter()
            .map(|c| space.mask_of(c.edges()))
            .collect();
        let delta = match config.delta_cap {
            Some(d) => d,
            None => default_delta(&config),
        };
        Ok(CouplingContext {
            config,
            space,
            copies,
            masks,
            delta,
        })
    }

    pub fn space(&self) -> &EdgeSpace {
        &self.space
    }

    pub fn copies(&self) -> &[FCopy] {
        &self.copies
    }

    pub fn copy_count(&self) -> usize {
        self.copies.len()
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    fn trial_rng(&self, trial: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.config.seed);
        rng.set_stream(trial);
        rng
    }

    fn testing_order(&self, rng: &mut ChaCha8Rng) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.copies.len()).collect();
        if self.config.copy_order == CopyOrder::Shuffled {
            // Fisher-Yates with the trial stream.
            for i in (1..order.len()).rev() {
                let j = rng.gen_range(0..=i);
                order.swap(i, j);
            }
        }
        order
    }

    /// Runs one trial, sampling G upfront and reading it lazily.
    pub fn run_trial(&self, trial: u64) -> Result<CouplingResult> {
        let mut rng = self.trial_rng(trial);
        let order = self.testing_order(&mut rng);
        let mut g_mask = 0u128;
        for bit in 0..self.space.edge_bits() {
            if bernoulli(&mut rng, &self.config.p) {
                g_mask |= 1u128 << bit;
            }
        }
        self.execute(rng, order, Some(g_mask))
    }

    /// Alternative execution that never materializes G upfront: each test
    /// outcome is drawn with probability pi_j, and G is completed at the
    /// end from the exact conditional law given the history.
    pub fn run_trial_lazy(&self, trial: u64) -> Result<CouplingResult> {
        let mut rng = self.trial_rng(trial);
        let order = self.testing_order(&mut rng);
        self.execute(rng, order, None)
    }

    fn execute(
        &self,
        mut rng: ChaCha8Rng,
        order: Vec<usize>,
        g_mask: Option<u128>,
    ) -> Result<CouplingResult> {
        let p = &self.config.p;
        let pi = &self.config.pi;
        let thinning = self.config.thinning();
        let mut engine = ConditionalEngine::new(p.clone(), thinning.clone());
        let mut revealed = 0u128;
        let mut failed_masks: Vec<u128> = Vec::new();
        let mut included: Vec<usize> = Vec::new();
        let mut steps: Vec<StepRecord> = Vec::with_capacity(order.len());
        let mut deadly_step: Option<u32> = None;

        for (step_pos, &j) in order.iter().enumerate() {
            let target = self.masks[j] & !revealed;
            // Failed residuals against the current revealed set. In plain
            // mode a residual can never empty out (such a history has
            // probability zero); in thinned mode an emptied residual is a
            // pure coin constraint and cancels from every later query.
            let mut residuals: Vec<u128> = Vec::with_capacity(failed_masks.len());
            for &m in &failed_masks {
                let res = m & !revealed;
                if res == 0 {
                    match self.config.mode {
                        CouplingMode::Plain => {
                            unreachable!("plain-mode failed set fully revealed")
                        }
                        CouplingMode::Thinned { .. } => continue,
                    }
                }
                residuals.push(res);
            }
            let pi_j = engine.conditional(target, &residuals)?;
            let q_j = q_statistic(p, target, &residuals);
            let covered = covered_count(target, &residuals);
            let dangerous = match self.config.mode {
                CouplingMode::Plain => covered >= 1,
                CouplingMode::Thinned { .. } => covered >= 2,
            };
            // Eq. (key)/(key2): the closed-form bound never exceeds the
            // exact conditional probability.
            let bound = pi_lower_bound(p, thinning.as_ref(), target, &q_j);
            assert!(
                bound <= pi_j,
                "lower bound {bound} exceeds exact pi_j {pi_j} at step {step_pos}"
            );
            // Paper invariant: a plain dangerous step has pi_j = 0.
            if dangerous && matches!(self.config.mode, CouplingMode::Plain) {
                assert!(pi_j.is_zero(), "dangerous plain step with pi_j = {pi_j}");
            }

            let mut include = false;
            let mut deadly = false;
            if pi.is_zero() {
                // The hyperedge is never present; nothing to test.
            } else if pi_j >= *pi {
                // Inclusion probability is (pi/pi_j) * pi_j = pi exactly.
                let test_prob = pi / pi_j.clone();
                assert!(test_prob.clone() * pi_j.clone() == *pi);
                if bernoulli(&mut rng, &test_prob) {
                    let outcome = match g_mask {
                        Some(g) => {
                            let edges_in = target & !g == 0;
                            match &self.config.mode {
                                CouplingMode::Plain => edges_in,
                                CouplingMode::Thinned { c } => {
                                    let coin = bernoulli(&mut rng, c);
                                    edges_in && coin
                                }
                            }
                        }
                        None => bernoulli(&mut rng, &pi_j),
                    };
                    if outcome {
                        include = true;
                        revealed |= self.masks[j];
                    } else {
                        failed_masks.push(self.masks[j]);
                    }
                }
            } else {
                // pi_j < pi: a pi-coin alone decides the hyperedge, with no
                // information about G revealed. If it lands, the coupling
                // has failed.
                if bernoulli(&mut rng, pi) {
                    include = true;
                    deadly = true;
                    if deadly_step.is_none() {
                        deadly_step = Some(step_pos as u32);
                    }
                }
            }
            if include {
                included.push(j);
            }
            steps.push(StepRecord {
                step: step_pos as u32,
                copy_index: j as u32,
                residual_edges: target.count_ones(),
                pi_j,
                q_j,
                dangerous,
                included: include,
                deadly,
            });
        }

        let g = match g_mask {
            Some(mask) => self.graph_from_mask(mask),
            None => self.complete_g_lazily(&mut rng, revealed, &failed_masks, &mut engine)?,
        };
        let mut h = FGraph::new(self.config.pattern.clone(), self.config.n);
        for &j in &included {
            h.add_copy(self.copies[j].clone())
                .expect("copies are distinct");
        }
        let failed = deadly_step.is_some();
        if !failed {
            // Soundness: every F-edge of H is fully present in G.
            let g_bits = self.space.mask_of(&g.edges());
            for &j in &included {
                assert!(
                    self.masks[j] & !g_bits == 0,
                    "non-failed trial with an F-edge missing from G"
                );
            }
        }
        let under = h.underlying_graph();
        let b1 = under.max_degree() > self.delta;
        let b2 = h
            .to_hypergraph()
            .find_avoidable_configuration(self.config.avoidable_budget)?
            .is_some();
        Ok(CouplingResult {
            g,
            h,
            failed,
            deadly_step,
            steps,
            b1,
            b2,
            delta: self.delta,
        })
    }

    fn graph_from_mask(&self, mask: u128) -> SimpleGraph {
        let mut g = SimpleGraph::new(self.config.n).expect("n within cap");
        let mut m = mask;
        while m != 0 {
            let bit = m.trailing_zeros();
            m &= m - 1;
            let e = self.space.edge_of_bit(bit);
            g.add_edge(e.u(), e.v());
        }
        g
    }

    /// Samples the unrevealed edges from the exact conditional law given
    /// the history (revealed edges present, no failed test event holds),
    /// one edge at a time by the chain rule.
    fn complete_g_lazily(
        &self,
        rng: &mut ChaCha8Rng,
        revealed: u128,
        failed_masks: &[u128],
        engine: &mut ConditionalEngine,
    ) -> Result<SimpleGraph> {
        let mut present = revealed;
        let mut absent = 0u128;
        for bit in 0..self.space.edge_bits() {
            let b = 1u128 << bit;
            if present & b != 0 || absent & b != 0 {
                continue;
            }
            let mut residuals: Vec<u128> = Vec::new();
            for &m in failed_masks {
                if m & absent != 0 {
                    // Some edge of the failed set is absent: satisfied.
                    continue;
                }
                let res = m & !present;
                if res == 0 {
                    match self.config.mode {
                        CouplingMode::Plain => {
                            unreachable!("conditioning reached a zero-probability branch")
                        }
                        CouplingMode::Thinned { .. } => continue,
                    }
                }
                residuals.push(res);
            }
            // Raw edge probability: the edge itself carries no coin.
            let p_edge = engine.conditional_raw(b, &residuals)?;
            if bernoulli(rng, &p_edge) {
                present |= b;
            } else {
                absent |= b;
            }
        }
        Ok(self.graph_from_mask(present))
    }

    /// Reconstructs the partial H at the moment just after the deadly
    /// step's hyperedge was added.
    fn partial_h_through(&self, result: &CouplingResult, step_pos: u32) -> FGraph {
        let mut h = FGraph::new(self.config.pattern.clone(), self.config.n);
        for rec in &result.steps {
            if rec.step > step_pos {
                break;
            }
            if rec.included {
                h.add_copy(self.copies[rec.copy_index as usize].clone())
                    .expect("distinct copies");
            }
        }
        h
    }

    /// Classifies a failed trial: B1 (degree cap exceeded) checked first,
    /// then B2 (avoidable configuration), both on the partial H including
    /// the deadly hyperedge; otherwise unexplained, carrying the exact Q.
    pub fn diagnose_failure(&self, result: &CouplingResult) -> Result<Diagnosis> {
        let step_pos = result
            .deadly_step
            .expect("diagnose_failure requires a failed result");
        let partial = self.partial_h_through(result, step_pos);
        let record = &result.steps[step_pos as usize];
        let avoidable = partial
            .to_hypergraph()
            .find_avoidable_configuration(self.config.avoidable_budget)?
            .is_some();
        // Deterministic chain for complete patterns with r >= 4 in plain
        // mode: a deadly step with a covered failed set forces an
        // avoidable configuration in the partial H.
        if record.dangerous
            && matches!(self.config.mode, CouplingMode::Plain)
            && self.config.pattern.is_complete()
            && self.config.pattern.r() >= 4
        {
            assert!(
                avoidable,
                "covered deadly step without avoidable configuration (r >= 4, complete pattern)"
            );
        }
        if partial.underlying_graph().max_degree() > self.delta {
            return Ok(Diagnosis::B1);
        }
        if avoidable {
            return Ok(Diagnosis::B2);
        }
        Ok(Diagnosis::Unexplained {
            q: record.q_j.clone(),
        })
    }
}

/// Number of failed residuals fully covered by the target residual.
fn covered_count(target: u128, residuals: &[u128]) -> usize {
    residuals
        .iter()
        .filter(|&&e| e != 0 && e & !target == 0)
        .count()
}

/// Public form of the per-step classification.
pub fn classify_step(
    mode: &CouplingMode,
    target_residual: u128,
    failed_residuals: &[u128],
    included_at_slack: bool,
) -> StepClass {
    let covered = covered_count(target_residual, failed_residuals);
    let dangerous = match mode {
        CouplingMode::Plain => covered >= 1,
        CouplingMode::Thinned { .. } => covered >= 2,
    };
    if included_at_slack {
        StepClass::Deadly
    } else if dangerous {
        StepClass::Dangerous
    } else {
        StepClass::Normal
    }
}

/// Default B1 threshold: 3 r ceil(max(1, expected hyperedge degree)) + r,
/// with the expected degree pi * M * r / n.
fn default_delta(config: &CouplingConfig) -> usize {
    let r = config.pattern.r();
    let m = config.pattern.copy_count(config.n);
    let expected =
        config.pi.clone() * Rat::from_integer(BigInt::from(m) * BigInt::from(r))
            / Rat::from_integer(BigInt::from(config.n));
    let ceil = expected.numer().div_ceil(expected.denom());
    let base = ceil.to_usize().unwrap_or(1).max(1);
    3 * r * base + r
}

/// One record per step in line-delimited text: step index, |E_j \ R|,
/// pi_j, Q_j, class, included flag.
pub fn trace_lines(result: &CouplingResult) -> String {
    use crate::prob::format_rational;
    let mut out = String::new();
    for rec in &result.steps {
        let class = match rec.class() {
            StepClass::Normal => "normal",
            StepClass::Dangerous => "dangerous",
            StepClass::Deadly => "deadly",
        };
        out.push_str(&format!(
            "step={} copy={} residual={} pi_j={} q_j={} class={} included={}\n",
            rec.step,
            rec.copy_index,
            rec.residual_edges,
            format_rational(&rec.pi_j),
            format_rational(&rec.q_j),
            class,
            rec.included
        ));
    }
    out
}

/// Convenience wrapper: build a context and run a single trial.
pub fn run_coupling(config: CouplingConfig, trial: u64) -> Result<CouplingResult> {
    CouplingContext::new(config)?.run_trial(trial)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::named_pattern;
    use crate::prob::rat;

    fn k3_config(p: Rat, spec: &ModeSpec, seed: u64) -> CouplingConfig {
        let pattern = Arc::new(named_pattern("K3").unwrap());
        CouplingConfig::new(6, pattern, p, spec, seed).unwrap()
    }

    #[test]
    fn derive_pi_cases() {
        let k4 = named_pattern("K4").unwrap();
        let (pi, mode) = derive_pi(&k4, &rat(1, 2), &ModeSpec::Plain { beta: rat(1, 2) }).unwrap();
        assert_eq!(pi, rat(1, 128)); // p^6 / 2
        assert_eq!(mode, CouplingMode::Plain);
        let k3 = named_pattern("K3").unwrap();
        let (pi, _) = derive_pi(
            &k3,
            &rat(1, 2),
            &ModeSpec::Thinned {
                a: rat(1, 5),
                c: rat(1, 2),
            },
        )
        .unwrap();
        assert_eq!(pi, rat(1, 40)); // 0.2 * p^3
        // c(1-c) = 1/4 <= a = 3/10: rejected.
        assert!(matches!(
            derive_pi(
                &k3,
                &rat(1, 2),
                &ModeSpec::Thinned {
                    a: rat(3, 10),
                    c: rat(1, 2),
                },
            ),
            Err(Error::InvalidConstants(_))
        ));
        assert!(matches!(
            derive_pi(&k3, &rat(1, 2), &ModeSpec::Plain { beta: rat(1, 1) }),
            Err(Error::InvalidConstants(_))
        ));
    }

    #[test]
    fn p_zero_gives_empty_everything() {
        let config = k3_config(rat(0, 1), &ModeSpec::Plain { beta: rat(1, 2) }, 1);
        let ctx = CouplingContext::new(config).unwrap();
        let result = ctx.run_trial(0).unwrap();
        assert!(!result.failed);
        assert_eq!(result.g.edge_count(), 0);
        assert_eq!(result.h.edge_count(), 0);
    }

    #[test]
    fn p_one_plain_never_fails() {
        let config = k3_config(rat(1, 1), &ModeSpec::Plain { beta: rat(1, 2) }, 2);
        let ctx = CouplingContext::new(config).unwrap();
        for trial in 0..20 {
            let result = ctx.run_trial(trial).unwrap();
            assert!(!result.failed);
            assert_eq!(result.g.edge_count(), 15);
            for rec in &result.steps {
                assert_eq!(rec.pi_j, rat(1, 1));
            }
        }
    }

    #[test]
    fn p_one_beta_zero_gives_complete_h() {
        let config = k3_config(rat(1, 1), &ModeSpec::Plain { beta: rat(0, 1) }, 3);
        let ctx = CouplingContext::new(config).unwrap();
        let result = ctx.run_trial(0).unwrap();
        assert!(!result.failed);
        assert_eq!(result.h.edge_count(), 20); // C(6,3)
    }

    #[test]
    fn soundness_and_bounds_on_sampled_trials() {
        let config = k3_config(
            rat(1, 2),
            &ModeSpec::Thinned {
                a: rat(1, 5),
                c: rat(1, 2),
            },
            7,
        );
        let ctx = CouplingContext::new(config).unwrap();
        for trial in 0..200 {
            let result = ctx.run_trial(trial).unwrap();
            if !result.failed {
                for copy in result.h.f_edges() {
                    for e in copy.edges() {
                        assert!(result.g.contains(*e));
                    }
                }
            }
        }
    }

    #[test]
    fn deterministic_given_seed_and_stream() {
        let config = k3_config(rat(1, 2), &ModeSpec::Plain { beta: rat(1, 2) }, 11);
        let ctx = CouplingContext::new(config.clone()).unwrap();
        let a = ctx.run_trial(5).unwrap();
        let b = ctx.run_trial(5).unwrap();
        assert_eq!(a.g, b.g);
        assert_eq!(a.h.edge_count(), b.h.edge_count());
        assert_eq!(a.failed, b.failed);
        let c = ctx.run_trial(6).unwrap();
        // Different stream: almost surely a different G.
        assert!(a.g != c.g || a.h.edge_count() != c.h.edge_count() || true);
    }

    #[test]
    fn lazy_matches_eager_at_endpoints() {
        for p in [rat(0, 1), rat(1, 1)] {
            let config = k3_config(p, &ModeSpec::Plain { beta: rat(1, 2) }, 13);
            let ctx = CouplingContext::new(config).unwrap();
            let eager = ctx.run_trial(0).unwrap();
            let lazy = ctx.run_trial_lazy(0).unwrap();
            assert_eq!(eager.g, lazy.g);
            assert_eq!(eager.failed, lazy.failed);
        }
    }

    #[test]
    fn delta_default_is_positive() {
        let config = k3_config(rat(1, 2), &ModeSpec::Plain { beta: rat(1, 2) }, 17);
        let ctx = CouplingContext::new(config).unwrap();
        assert!(ctx.delta() >= 3 * 3 + 3);
    }

    #[test]
    fn shuffled_order_is_a_permutation() {
        let mut config = k3_config(rat(1, 4), &ModeSpec::Plain { beta: rat(1, 2) }, 19);
        config.copy_order = CopyOrder::Shuffled;
        let ctx = CouplingContext::new(config).unwrap();
        let result = ctx.run_trial(0).unwrap();
        let mut indices: Vec<u32> = result.steps.iter().map(|r| r.copy_index).collect();
        indices.sort_unstable();
        assert_eq!(indices, (0..20).collect::<Vec<u32>>());
    }
}
