//! E-polynomials of Hilbert schemes of points via Göttsche's product formula.
//!
//! For a surface with even Betti numbers `b_0, b_2, b_4` the generating
//! function is
//!
//! ```text
//! Σ_n e(Hilb^n X) z^n = ∏_{m ≥ 1} ∏_i (1 − t^{m−1+i} z^m)^{−b_{2i}}
//! ```
//!
//! Rank-one moduli `M_H(1, c1, χ)` are Hilbert schemes after twisting by
//! `O(−c1)`, which supplies the rank-one base rows of the recursion engine.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ktheory::PairingContext;
use crate::qpoly::{Poly, ZSeries};
use crate::scalar::{Coeff, LatticeInt};
use crate::surface::Divisor;

/// Even Betti numbers `(b_0, b_2, b_4)` of a surface.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiData {
    pub b: Vec<u64>,
}

impl BettiData {
    pub fn new(b: Vec<u64>) -> Self {
        Self { b }
    }

    pub fn p2() -> Self {
        Self::new(vec![1, 1, 1])
    }

    pub fn p1xp1() -> Self {
        Self::new(vec![1, 2, 1])
    }

    /// `(1, ρ, 1)` for a rational surface of Picard rank `ρ`.
    pub fn rational(rho: usize) -> Self {
        Self::new(vec![1, rho as u64, 1])
    }

    pub fn epoly<C: Coeff>(&self) -> Poly<C> {
        Poly::from_coeffs(self.b.iter().map(|&b| C::from_u64(b).expect("Betti number fits")).collect())
    }
}

/// `e(Hilb^n X)` on the `t = xy` diagonal.
pub fn hilb_epoly<C: Coeff>(betti: &BettiData, n: usize) -> Poly<C> {
    let mut series = ZSeries::one(n);
    for m in 1..=n {
        for (i, &b) in betti.b.iter().enumerate() {
            series.mul_inverse_power(m - 1 + i, m, b);
        }
    }
    series.coeff(n)
}

/// Colength `ℓ = χ(O(c1)) − χ` of the ideal sheaf twisted into
/// `M_H(1, c1, χ)`.
pub fn rank1_colength<I: LatticeInt>(ctx: &PairingContext<I>, c1: &Divisor<I>, chi: I) -> Result<I> {
    let line = ctx.twist(&ctx.structure_sheaf(), c1)?;
    Ok(line.chi - chi)
}

/// `e(M_H(1, c1, χ)) = e(Hilb^ℓ X)`, and zero when `ℓ < 0` (empty moduli).
pub fn rank1_moduli_epoly<I: LatticeInt, C: Coeff>(
    ctx: &PairingContext<I>,
    c1: &Divisor<I>,
    chi: I,
) -> Result<Poly<C>> {
    let ell = rank1_colength(ctx, c1, chi)?;
    if ell < I::zero() {
        return Ok(Poly::zero());
    }
    let ell = usize::try_from(ell.as_i64()).map_err(|_| Error::InvalidArgument("colength too large".into()))?;
    Ok(hilb_epoly(&BettiData::rational(ctx.rho()), ell))
}
