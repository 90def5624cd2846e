//! Certified measurement of the periodicity transients.
//!
//! All three quantities are measured on the normalized matrix
//! `A~ = (-lambda) o A` and quantified over `t >= 1`; the degenerate
//! `t = 0` case (`A^0 = I`) is evaluated literally and only lowers a
//! reported transient from 1 to 0 when it also holds there.
//!
//! * `measure_t`: least `T` with `A~^(t+sigma) = A~^t` for all `t >= T`,
//!   certified by exact state repetition of the power sequence.
//! * `measure_t1`: least `T` from which `A~^t = C S^t R (+) B~^t` holds
//!   forever, certified by combining the power repetition with the `T2`
//!   certificate below.
//! * `measure_t2`: least `T` from which `C S^t R >= B~^t` holds forever.
//!   On entries where the periodic CSR value is finite, a per-entry
//!   envelope `t lambda(B~) + cd_B (max b~ - lambda(B~))` bounds the
//!   subordinate powers, so violations provably stop at a computable
//!   horizon; on entries where it is `-inf`, the Boolean support of the
//!   subordinate powers is certified by exact repetition.

use crate::bounds::default_horizon;
use crate::csr::{csr_of_profiled, CsrTriple};
use crate::error::{Result, TropError};
use crate::graph::{longest_elementary_path, profile, DigraphProfile};
use crate::matrix::TropMatrix;
use crate::scalar::TropScalar;
use crate::schemes::{b_nachtigall_profiled, is_subordinate, WeakExpansion};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use std::collections::HashMap;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransientResult {
    pub value: u64,
    /// Cyclicity of the critical graph: the period the transient refers to.
    pub sigma: u64,
    /// Whether the defining property was verified over a full period beyond
    /// the last violation with the tail proven periodic.
    pub certified: bool,
    pub horizon_used: u64,
}

/// Shared measurement state for one matrix: the normalized powers with
/// their detected repetition, and the CSR period terms.
pub struct TransientLab<'a> {
    a: &'a TropMatrix,
    pub prof: DigraphProfile,
    pub csr: CsrTriple,
    terms: Vec<TropMatrix>,
    term0: TropMatrix,
    norm: TropMatrix,
    powers: Vec<TropMatrix>,
    seen: HashMap<TropMatrix, usize>,
    rep: Option<(usize, usize)>,
    mult: u64,
}

impl<'a> TransientLab<'a> {
    pub fn new(a: &'a TropMatrix) -> Result<Self> {
        Self::with_mult(a, 1)
    }

    pub fn with_mult(a: &'a TropMatrix, mult: u64) -> Result<Self> {
        let prof = profile(a)?;
        prof.require_irreducible()?;
        let lambda = prof.require_lambda()?.clone();
        let csr = csr_of_profiled(a, &prof)?;
        let terms = csr.period_terms();
        let term0 = csr.term_literal(0);
        let norm = TropMatrix::scalar_mul(&TropScalar::Finite(-lambda), a)?;
        let identity = TropMatrix::identity(a.rows());
        let mut seen = HashMap::new();
        seen.insert(identity.clone(), 0);
        Ok(TransientLab {
            a,
            prof,
            csr,
            terms,
            term0,
            norm,
            powers: vec![identity],
            seen,
            rep: None,
            mult: mult.max(1),
        })
    }

    pub fn sigma(&self) -> u64 {
        self.csr.sigma
    }

    fn term_at(&self, t: u64) -> &TropMatrix {
        if t == 0 {
            &self.term0
        } else {
            &self.terms[((t - 1) % self.sigma()) as usize]
        }
    }

    fn power(&mut self, t: usize) -> &TropMatrix {
        while self.powers.len() <= t {
            let next = self.powers.last().unwrap().mul(&self.norm).unwrap();
            if self.rep.is_none() {
                let idx = self.powers.len();
                if let Some(&t0) = self.seen.get(&next) {
                    self.rep = Some((t0, idx - t0));
                } else {
                    self.seen.insert(next.clone(), idx);
                }
            }
            self.powers.push(next);
        }
        &self.powers[t]
    }

    /// First exact repetition `A~^(t0+p) = A~^t0` of the normalized powers.
    fn repetition(&mut self) -> Result<(usize, usize)> {
        if let Some(r) = self.rep {
            return Ok(r);
        }
        let nacht = b_nachtigall_profiled(self.a, &self.prof)?;
        let cap = default_horizon(self.a, &self.prof, &nacht, self.mult)? as usize + 2;
        let mut t = self.powers.len();
        while self.rep.is_none() {
            if t > cap {
                return Err(TropError::Horizon {
                    what: "power sequence did not repeat".into(),
                    horizon: cap as u64,
                });
            }
            self.power(t);
            t += 1;
        }
        Ok(self.rep.unwrap())
    }

    /// Applies the `t >= 1` convention: `tail_start` is the least `t >= 1`
    /// such that the property holds on `[t, end)`; reports 0 only when
    /// `holds_at_zero` and the property held from 1.
    fn convention_value(tail_start: u64, holds_at_zero: bool) -> u64 {
        if tail_start <= 1 && holds_at_zero {
            0
        } else {
            tail_start.max(1)
        }
    }

    /// The transient of the matrix itself.
    pub fn measure_t(&mut self) -> Result<TransientResult> {
        let sigma = self.sigma() as usize;
        let (t0, p) = self.repetition()?;
        let end = t0 + p;
        self.power(end + sigma);
        // the equality pattern is p-periodic from t0 on, so it must hold on
        // all of [t0, end) or the sequence would never settle; violations
        // live strictly below t0
        let eq_at = |lab: &Self, t: usize| lab.powers[t + sigma] == lab.powers[t];
        for t in t0..end {
            if !eq_at(self, t) {
                return Err(TropError::Structure(
                    "repeating power sequence with no periodic tail".into(),
                ));
            }
        }
        let mut last_violation = 0usize;
        for t in 1..t0 {
            if !eq_at(self, t) {
                last_violation = t;
            }
        }
        let value = Self::convention_value(last_violation as u64 + 1, eq_at(self, 0));
        Ok(TransientResult {
            value,
            sigma: sigma as u64,
            certified: true,
            horizon_used: (end + sigma) as u64,
        })
    }

    fn check_subordinate(&self, exp: &WeakExpansion) -> Result<()> {
        if !is_subordinate(self.a, exp) {
            return Err(TropError::Domain(
                "expansion is not subordinate to the matrix".into(),
            ));
        }
        Ok(())
    }

    /// Dominance transient: least `T` with `C S^t R >= B~^t` for `t >= T`.
    pub fn measure_t2(&mut self, exp: &WeakExpansion) -> Result<TransientResult> {
        self.check_subordinate(exp)?;
        let d = self.a.rows();
        let sigma = self.sigma();
        let lambda = self.prof.require_lambda()?.clone();
        let b_norm = if exp.b.has_arcs() {
            TropMatrix::scalar_mul(&TropScalar::Finite(-lambda.clone()), &exp.b)?
        } else {
            exp.b.clone()
        };
        let holds_at_zero = self.term0.ge(&TropMatrix::identity(d));

        if !b_norm.has_arcs() {
            // B^t is empty for every t >= 1
            return Ok(TransientResult {
                value: Self::convention_value(1, holds_at_zero),
                sigma,
                certified: true,
                horizon_used: 1,
            });
        }

        let bprof = profile(&b_norm)?;
        let cd_b = longest_elementary_path(&b_norm)?;
        let horizon = match &bprof.lambda {
            None => cd_b,
            Some(lb) if lb.is_zero() => {
                return self.measure_t2_degenerate(exp, &b_norm, holds_at_zero)
            }
            Some(lb) => {
                debug_assert!(lb.is_negative());
                let max_b = b_norm.max_finite_entry().unwrap().clone();
                let slack = BigRational::from_integer(cd_b.into()) * (&max_b - lb);
                // per-entry envelope horizon: beyond it the subordinate
                // powers sit below every finite periodic CSR value
                let mut h_env = 1u64;
                let mut v_floor: Option<BigRational> = None;
                for i in 0..d {
                    for j in 0..d {
                        let vmin = (1..=sigma)
                            .filter_map(|t| self.term_at(t).get(i, j).as_rational())
                            .min();
                        if let Some(v) = vmin {
                            let need = (&slack - v) / (-lb.clone());
                            if need > BigRational::zero() {
                                let t = need.ceil().to_integer().to_u64().unwrap_or(u64::MAX);
                                h_env = h_env.max(t);
                            }
                            v_floor = match v_floor {
                                Some(cur) if cur <= *v => Some(cur),
                                _ => Some(v.clone()),
                            };
                        }
                    }
                }
                // Boolean support certification for the entries whose CSR
                // value is -inf in some residue class
                let (supp_powers, tb, pb) = bool_support_powers(&b_norm)?;
                let supp_at = |t: u64| -> &Vec<u64> {
                    let t = t as usize;
                    if t < supp_powers.len() {
                        &supp_powers[t]
                    } else {
                        &supp_powers[tb + (t - tb) % pb]
                    }
                };
                let supp_h = tb as u64 + (pb as u64).lcm(&sigma);
                for t in tb as u64..supp_h {
                    if t == 0 {
                        continue;
                    }
                    let supp = supp_at(t);
                    for i in 0..d {
                        for j in 0..d {
                            if supp[i] & (1 << j) != 0 && self.term_at(t).get(i, j).is_neg_inf() {
                                // recurs forever: the comparison can never
                                // settle, which subordination rules out
                                return Err(TropError::Structure(format!(
                                    "subordinate support outlives the CSR support at ({i},{j})"
                                )));
                            }
                        }
                    }
                }
                // once all subordinate entries sit a full growth slack
                // below every finite CSR value, they can never climb back
                let exit_level = v_floor.map(|v| v - &slack);
                let cap = h_env.max(supp_h).max(sigma);
                let mut last_violation = 0u64;
                let mut bp = b_norm.clone();
                let mut t = 1u64;
                let horizon = loop {
                    if !self.term_at(t).ge(&bp) {
                        last_violation = t;
                    }
                    if t >= cap {
                        break t;
                    }
                    if t >= supp_h {
                        let settled = match (&exit_level, bp.max_finite_entry()) {
                            (_, None) => true,
                            (Some(level), Some(top)) => top <= level,
                            (None, Some(_)) => false,
                        };
                        if settled {
                            break t;
                        }
                    }
                    t += 1;
                    bp = bp.mul(&b_norm)?;
                };
                let value = Self::convention_value(last_violation + 1, holds_at_zero);
                return Ok(TransientResult {
                    value,
                    sigma,
                    certified: true,
                    horizon_used: horizon,
                });
            }
        };

        let mut last_violation = 0u64;
        let mut bp = b_norm.clone();
        for t in 1..=horizon {
            if t > 1 {
                bp = bp.mul(&b_norm)?;
            }
            if !self.term_at(t).ge(&bp) {
                last_violation = t;
            }
        }
        let value = Self::convention_value(last_violation + 1, holds_at_zero);
        Ok(TransientResult {
            value,
            sigma,
            certified: true,
            horizon_used: horizon,
        })
    }

    /// Fallback for subordinate inputs with `lambda(B) = lambda(A)` (never
    /// produced by the three schemes): joint exact repetition of both power
    /// sequences, or a horizon error when the pair never settles.
    fn measure_t2_degenerate(
        &mut self,
        _exp: &WeakExpansion,
        b_norm: &TropMatrix,
        holds_at_zero: bool,
    ) -> Result<TransientResult> {
        let sigma = self.sigma();
        // the weight-dependent bounds are undefined at zero spectral gap;
        // guard with the horizon of the always-defined Nachtigall expansion
        let nacht = b_nachtigall_profiled(self.a, &self.prof)?;
        let cap = default_horizon(self.a, &self.prof, &nacht, self.mult)? as usize + 2;
        let mut b_powers = vec![TropMatrix::identity(self.a.rows()), b_norm.clone()];
        let mut seen: HashMap<(TropMatrix, TropMatrix), usize> = HashMap::new();
        let mut found: Option<(usize, usize)> = None;
        for t in 1..=cap {
            while b_powers.len() <= t {
                let next = b_powers.last().unwrap().mul(b_norm)?;
                b_powers.push(next);
            }
            let key = (self.power(t).clone(), b_powers[t].clone());
            if let Some(&t0) = seen.get(&key) {
                found = Some((t0, t - t0));
                break;
            }
            seen.insert(key, t);
        }
        let Some((t0, p)) = found else {
            return Err(TropError::Horizon {
                what: "degenerate subordinate pair never repeated".into(),
                horizon: cap as u64,
            });
        };
        let horizon = t0 as u64 + (p as u64).lcm(&sigma);
        while b_powers.len() <= horizon as usize {
            let next = b_powers.last().unwrap().mul(b_norm)?;
            b_powers.push(next);
        }
        let mut last_violation = 0u64;
        for t in 1..=horizon {
            if !self.term_at(t).ge(&b_powers[t as usize]) {
                last_violation = t;
            }
        }
        if last_violation > t0 as u64 {
            return Err(TropError::Structure(
                "dominance violation inside the periodic regime".into(),
            ));
        }
        Ok(TransientResult {
            value: Self::convention_value(last_violation + 1, holds_at_zero),
            sigma,
            certified: true,
            horizon_used: horizon,
        })
    }

    /// Weak expansion transient: least `T` from which
    /// `A~^t = C S^t R (+) B~^t` holds forever.
    pub fn measure_t1(&mut self, exp: &WeakExpansion) -> Result<TransientResult> {
        self.check_subordinate(exp)?;
        let d = self.a.rows();
        let sigma = self.sigma();
        let t_res = self.measure_t()?;
        let tail = t_res.value.max(1);
        // beyond the transient the normalized powers coincide with the CSR
        // terms; verify over one period so the tail argument is self-contained
        for t in tail..tail + sigma {
            let pw = self.power(t as usize).clone();
            if &pw != self.term_at(t) {
                return Err(TropError::Structure(format!(
                    "normalized power at t={t} differs from the periodic CSR term"
                )));
            }
        }
        let t2 = self.measure_t2(exp)?;
        let lambda = self.prof.require_lambda()?.clone();
        let b_norm = if exp.b.has_arcs() {
            TropMatrix::scalar_mul(&TropScalar::Finite(-lambda), &exp.b)?
        } else {
            exp.b.clone()
        };
        let horizon = (tail + sigma).max(t2.horizon_used).max(t2.value);
        let mut last_violation = 0u64;
        let mut bp = TropMatrix::identity(d);
        for t in 1..=horizon {
            bp = bp.mul(&b_norm)?;
            let rhs = self.term_at(t).add(&bp)?;
            if self.power(t as usize) != &rhs {
                last_violation = t;
            }
        }
        let holds_at_zero = {
            let rhs = self.term0.add(&TropMatrix::identity(d))?;
            rhs == TropMatrix::identity(d)
        };
        Ok(TransientResult {
            value: Self::convention_value(last_violation + 1, holds_at_zero),
            sigma,
            certified: t2.certified,
            horizon_used: horizon,
        })
    }
}

/// Boolean support powers of a matrix up to their exact repetition, as bit
/// rows; sound because an exact matrix repetition propagates forever.
fn bool_support_powers(b: &TropMatrix) -> Result<(Vec<Vec<u64>>, usize, usize)> {
    let d = b.rows();
    if d > 64 {
        return Err(TropError::SizeLimit {
            what: "boolean support certification",
            limit: 64,
            actual: d,
        });
    }
    let mut step = vec![0u64; d];
    for (i, j, _) in b.arcs() {
        step[i] |= 1 << j;
    }
    let mut powers: Vec<Vec<u64>> = vec![(0..d).map(|i| 1u64 << i).collect()];
    let mut seen: HashMap<Vec<u64>, usize> = HashMap::new();
    seen.insert(powers[0].clone(), 0);
    loop {
        let last = powers.last().unwrap();
        let mut next = vec![0u64; d];
        for i in 0..d {
            let mut bits = last[i];
            while bits != 0 {
                let k = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                next[i] |= step[k];
            }
        }
        let t = powers.len();
        if let Some(&t0) = seen.get(&next) {
            powers.push(next);
            return Ok((powers, t0, t - t0));
        }
        seen.insert(next.clone(), t);
        powers.push(next);
        if t > 1 << 20 {
            return Err(TropError::Structure("support powers never repeated".into()));
        }
    }
}

pub fn measure_t(a: &TropMatrix) -> Result<TransientResult> {
    TransientLab::new(a)?.measure_t()
}

pub fn measure_t1(a: &TropMatrix, exp: &WeakExpansion) -> Result<TransientResult> {
    TransientLab::new(a)?.measure_t1(exp)
}

pub fn measure_t2(a: &TropMatrix, exp: &WeakExpansion) -> Result<TransientResult> {
    TransientLab::new(a)?.measure_t2(exp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bruteforce;
    use crate::schemes::{b_nachtigall, build, SchemeChoice};
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
    fn two_cycle_has_zero_transient() {
        let a = m("-inf 1; -1 -inf");
        let r = measure_t(&a).unwrap();
        assert_eq!((r.value, r.sigma), (0, 2));
        assert!(r.certified);
    }

    #[test]
    fn one_by_one_has_zero_transient() {
        let r = measure_t(&m("5")).unwrap();
        assert_eq!((r.value, r.sigma), (0, 1));
    }

    #[test]
    fn wielandt_digraph_attains_the_wielandt_number() {
        // zero-weight cycle 0->1->2->0 plus the chord 2->1: girth 2,
        // transient (d-1)^2 + 1 = 5
        let a = m("-inf 0 -inf; -inf -inf 0; 0 0 -inf");
        let r = measure_t(&a).unwrap();
        assert_eq!((r.value, r.sigma), (5, 1));
        assert_eq!(bruteforce::transient_by_iteration(&a, 1, 30), 5);
    }

    #[test]
    fn transient_matches_plain_iteration() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..20 {
            let a = random_irreducible(5, &mut rng);
            let lam = profile(&a).unwrap().lambda.unwrap();
            let norm = TropMatrix::scalar_mul(&TropScalar::Finite(-lam), &a).unwrap();
            let r = measure_t(&a).unwrap();
            assert_eq!(
                r.value,
                bruteforce::transient_by_iteration(&norm, r.sigma, 120),
                "matrix:\n{a}"
            );
        }
    }

    #[test]
    fn t1_on_fully_critical_two_cycle() {
        let a = m("-inf 1; -1 -inf");
        let exp = b_nachtigall(&a).unwrap();
        let r = measure_t1(&a, &exp).unwrap();
        assert_eq!(r.value, 0);
    }

    #[test]
    fn t2_on_empty_b_is_zero_when_star_dominates_identity() {
        let a = m("-inf 1; -1 -inf");
        let exp = b_nachtigall(&a).unwrap();
        assert!(!exp.b.has_arcs());
        let r = measure_t2(&a, &exp).unwrap();
        assert_eq!(r.value, 0);
    }

    #[test]
    fn t2_two_node_example_within_its_bound() {
        let a = m("0 0; -1 -1");
        let exp = b_nachtigall(&a).unwrap();
        let r = measure_t2(&a, &exp).unwrap();
        assert!(r.value <= 3, "measured {}", r.value);
        assert!(r.certified);
    }

    #[test]
    fn acyclic_b_settles_within_path_length() {
        // critical loop at 0; removing it leaves the single arc 1 -> 2
        let a = m("0 -1 -inf; -inf -inf -2; -3 -inf -inf");
        let exp = b_nachtigall(&a).unwrap();
        assert!(exp.b.has_arcs());
        assert_eq!(profile(&exp.b).unwrap().lambda, None);
        let cd = longest_elementary_path(&exp.b).unwrap();
        let r = measure_t2(&a, &exp).unwrap();
        assert!(r.value <= cd + 1);

        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..40 {
            let a = random_irreducible(5, &mut rng);
            let exp = b_nachtigall(&a).unwrap();
            let bprof = profile(&exp.b).unwrap();
            if bprof.lambda.is_none() && exp.b.has_arcs() {
                let cd = longest_elementary_path(&exp.b).unwrap();
                let r = measure_t2(&a, &exp).unwrap();
                assert!(r.value <= cd + 1);
            }
        }
    }

    #[test]
    fn weak_expansion_holds_from_t1_on() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for _ in 0..12 {
            let a = random_irreducible(5, &mut rng);
            let lam = profile(&a).unwrap().lambda.unwrap();
            let norm = TropMatrix::scalar_mul(&TropScalar::Finite(-lam.clone()), &a).unwrap();
            for scheme in SchemeChoice::ALL {
                let exp = build(scheme, &a).unwrap();
                let b_norm = if exp.b.has_arcs() {
                    TropMatrix::scalar_mul(&TropScalar::Finite(-lam.clone()), &exp.b).unwrap()
                } else {
                    exp.b.clone()
                };
                let r = measure_t1(&a, &exp).unwrap();
                let triple = crate::csr::csr_of(&a).unwrap();
                let from = r.value.max(1);
                for t in from..from + 12 {
                    let rhs = triple.term(t).add(&b_norm.pow(t).unwrap()).unwrap();
                    assert_eq!(norm.pow(t).unwrap(), rhs, "scheme {scheme} t={t}\n{a}");
                }
                if r.value >= 2 {
                    let t = r.value - 1;
                    let rhs = triple.term(t).add(&b_norm.pow(t).unwrap()).unwrap();
                    assert_ne!(norm.pow(t).unwrap(), rhs, "T1 not tight at {t}\n{a}");
                }
            }
        }
    }

    #[test]
    fn t2_is_tight_and_monotone() {
        let mut rng = ChaCha8Rng::seed_from_u64(44);
        for _ in 0..12 {
            let a = random_irreducible(5, &mut rng);
            let lam = profile(&a).unwrap().lambda.unwrap();
            for scheme in SchemeChoice::ALL {
                let exp = build(scheme, &a).unwrap();
                let b_norm = if exp.b.has_arcs() {
                    TropMatrix::scalar_mul(&TropScalar::Finite(-lam.clone()), &exp.b).unwrap()
                } else {
                    exp.b.clone()
                };
                let triple = crate::csr::csr_of(&a).unwrap();
                let r = measure_t2(&a, &exp).unwrap();
                let from = r.value.max(1);
                for t in from..from + 10 {
                    assert!(
                        triple.term(t).ge(&b_norm.pow(t).unwrap()),
                        "scheme {scheme} t={t}\n{a}"
                    );
                }
                if r.value >= 2 {
                    let t = r.value - 1;
                    assert!(!triple.term(t).ge(&b_norm.pow(t).unwrap()));
                }
            }
        }
    }

    #[test]
    fn global_transient_below_max_of_t1_t2() {
        let mut rng = ChaCha8Rng::seed_from_u64(45);
        for _ in 0..15 {
            let a = random_irreducible(4, &mut rng);
            let mut lab = TransientLab::new(&a).unwrap();
            let t = lab.measure_t().unwrap().value;
            for scheme in SchemeChoice::ALL {
                let exp = build(scheme, &a).unwrap();
                let t1 = lab.measure_t1(&exp).unwrap().value;
                let t2 = lab.measure_t2(&exp).unwrap().value;
                assert!(t <= t1.max(t2), "T={t} T1={t1} T2={t2}\n{a}");
            }
        }
    }

    #[test]
    fn transients_invariant_under_scalar_shift() {
        let mut rng = ChaCha8Rng::seed_from_u64(46);
        for _ in 0..10 {
            let a = random_irreducible(4, &mut rng);
            let mu = TropScalar::int(rng.random_range(-3..=3));
            let shifted = TropMatrix::scalar_mul(&mu, &a).unwrap();
            for scheme in SchemeChoice::ALL {
                let e1 = build(scheme, &a).unwrap();
                let e2 = build(scheme, &shifted).unwrap();
                assert_eq!(
                    measure_t1(&a, &e1).unwrap().value,
                    measure_t1(&shifted, &e2).unwrap().value
                );
                assert_eq!(
                    measure_t2(&a, &e1).unwrap().value,
                    measure_t2(&shifted, &e2).unwrap().value
                );
            }
        }
    }

    #[test]
    fn high_cyclicity_instances_settle_by_d_rem_gamma() {
        // with d < 2 gamma the expansion holds from d rem gamma on
        use crate::generate::{random_with_cyclicity, WeightRange};
        let range = WeightRange::ints(-5, 5);
        let mut rng = ChaCha8Rng::seed_from_u64(48);
        for (d, gamma) in [(5usize, 3usize), (7, 4), (4, 4), (8, 5)] {
            let a = random_with_cyclicity(d, gamma, 0.6, &range, &mut rng).unwrap();
            for scheme in SchemeChoice::ALL {
                let exp = build(scheme, &a).unwrap();
                let t1 = measure_t1(&a, &exp).unwrap().value;
                assert!(
                    t1 <= (d % gamma) as u64,
                    "T1={t1} > d rem gamma = {} at d={d} gamma={gamma}",
                    d % gamma
                );
            }
        }
    }

    #[test]
    fn nachtigall_dominance_threshold_equals_t1() {
        // under the Nachtigall scheme, A~^t >= C S^t R holds exactly from
        // T1 on
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        for _ in 0..12 {
            let a = random_irreducible(5, &mut rng);
            let lam = profile(&a).unwrap().lambda.unwrap();
            let norm = TropMatrix::scalar_mul(&TropScalar::Finite(-lam), &a).unwrap();
            let exp = b_nachtigall(&a).unwrap();
            let t1 = measure_t1(&a, &exp).unwrap().value;
            let triple = crate::csr::csr_of(&a).unwrap();
            let horizon = t1 + 2 * triple.sigma + 4;
            for t in 1..=horizon {
                let dominated = norm.pow(t).unwrap().ge(&triple.term(t));
                assert_eq!(dominated, t >= t1.max(1), "t={t} T1={t1}\n{a}");
            }
        }
    }

    #[test]
    fn degenerate_gap_falls_back_to_joint_repetition() {
        // two disjoint critical 2-cycles; removing only the first leaves a
        // subordinate B with lambda(B) = lambda(A), which none of the three
        // schemes would produce
        let a = m(
            "-inf 0 -inf -inf; 0 -inf -1 -inf; -inf -inf -inf 0; -1 -inf 0 -inf",
        );
        let prof = profile(&a).unwrap();
        assert!(prof.is_strongly_connected);
        assert_eq!(prof.lambda, Some(num_rational::BigRational::zero()));
        assert_eq!(prof.critical().unwrap().components.len(), 2);
        let removed: std::collections::BTreeSet<usize> = [0, 1].into();
        let b = TropMatrix::from_fn(4, 4, |i, j| {
            if removed.contains(&i) || removed.contains(&j) {
                TropScalar::NegInf
            } else {
                a.get(i, j).clone()
            }
        });
        let exp = crate::schemes::WeakExpansion {
            scheme: SchemeChoice::Nachtigall,
            removed_nodes: removed,
            b,
            threshold: None,
        };
        assert_eq!(profile(&exp.b).unwrap().lambda, prof.lambda);
        let r = measure_t2(&a, &exp).unwrap();
        assert!(r.certified);
        // dominance still settles: B^t <= A^t = CSR from the transient on
        let triple = crate::csr::csr_of(&a).unwrap();
        for t in r.value.max(1)..r.value.max(1) + 8 {
            assert!(triple.term(t).ge(&exp.b.pow(t).unwrap()));
        }
    }

    #[test]
    fn rejects_non_subordinate_expansion() {
        let a = m("-inf 1; -1 -inf");
        let mut exp = b_nachtigall(&a).unwrap();
        exp.b = m("-inf 2; -1 -inf");
        exp.removed_nodes.clear();
        assert!(matches!(
            measure_t1(&a, &exp),
            Err(TropError::Domain(_))
        ));
    }
}
