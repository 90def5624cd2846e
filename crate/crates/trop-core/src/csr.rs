//! CSR decomposition of an irreducible max-plus matrix.
//!
//! With `sigma` the cyclicity of the critical graph and
//! `M = ((-lambda o A)^sigma)*`, the triple keeps the critical columns of
//! `M` in `C`, the critical rows in `R`, and the normalized critical arcs
//! in `S`. The sequence `C S^t R` is periodic in `t` with period `sigma`
//! and describes the tail of the normalized powers of `A`.

use crate::error::Result;
use crate::graph::{profile, DigraphProfile};
use crate::matrix::TropMatrix;
use crate::scalar::TropScalar;
use num_rational::BigRational;

#[derive(Clone, Debug)]
pub struct CsrTriple {
    pub c: TropMatrix,
    pub s: TropMatrix,
    pub r: TropMatrix,
    /// Cyclicity of the critical graph; the period of `C S^t R`.
    pub sigma: u64,
    /// Maximum cycle mean of the original matrix. The triple itself is
    /// normalized: callers wanting `lambda^t o C S^t R` rescale.
    pub lambda: BigRational,
}

/// Builds the CSR triple of an irreducible matrix.
pub fn csr_of(a: &TropMatrix) -> Result<CsrTriple> {
    let prof = profile(a)?;
    csr_of_profiled(a, &prof)
}

pub fn csr_of_profiled(a: &TropMatrix, prof: &DigraphProfile) -> Result<CsrTriple> {
    prof.require_irreducible()?;
    let lambda = prof.require_lambda()?.clone();
    let crit = prof.critical()?;
    let sigma = crit.sigma;
    let d = a.rows();

    let norm = TropMatrix::scalar_mul(&TropScalar::Finite(-lambda.clone()), a)?;
    let m = norm.pow(sigma)?.kleene_star()?;

    let c = TropMatrix::from_fn(d, d, |i, j| {
        if crit.nodes.contains(&j) {
            m.get(i, j).clone()
        } else {
            TropScalar::NegInf
        }
    });
    let r = TropMatrix::from_fn(d, d, |i, j| {
        if crit.nodes.contains(&i) {
            m.get(i, j).clone()
        } else {
            TropScalar::NegInf
        }
    });
    let s = TropMatrix::from_fn(d, d, |i, j| {
        if crit.arcs.contains(&(i, j)) {
            norm.get(i, j).clone()
        } else {
            TropScalar::NegInf
        }
    });
    Ok(CsrTriple {
        c,
        s,
        r,
        sigma,
        lambda,
    })
}

impl CsrTriple {
    /// `C S^t R`, with the exponent reduced into `[1, sigma]` for `t >= 1`
    /// using the period; `t = 0` is evaluated literally.
    pub fn term(&self, t: u64) -> TropMatrix {
        let reduced = if t == 0 {
            0
        } else {
            (t - 1) % self.sigma + 1
        };
        self.term_literal(reduced)
    }

    /// `C S^t R` with no exponent reduction.
    pub fn term_literal(&self, t: u64) -> TropMatrix {
        let st = self.s.pow(t).expect("S is square");
        self.c.mul(&st).unwrap().mul(&self.r).unwrap()
    }

    /// The terms for `t = 1..=sigma`; `terms[(t-1) % sigma]` is `C S^t R`
    /// for any `t >= 1`.
    pub fn period_terms(&self) -> Vec<TropMatrix> {
        let mut out = Vec::with_capacity(self.sigma as usize);
        let mut st = self.s.clone();
        for _ in 0..self.sigma {
            out.push(self.c.mul(&st).unwrap().mul(&self.r).unwrap());
            st = st.mul(&self.s).unwrap();
        }
        out
    }

    /// Convenience lookup into [`Self::period_terms`] semantics.
    pub fn term_from_period(&self, terms: &[TropMatrix], t: u64) -> TropMatrix {
        if t == 0 {
            self.term_literal(0)
        } else {
            terms[((t - 1) % self.sigma) as usize].clone()
        }
    }
}

/// Rejects matrices the decomposition is not defined for.
pub fn check_csr_input(prof: &DigraphProfile) -> Result<()> {
    prof.require_irreducible()?;
    prof.require_lambda()?;
    Ok(())
}
