//! Classes `(r, c1, χ)` in the numerical Grothendieck group and the Euler form.
//!
//! On a rational surface `K(X) → Z ⊕ NS(X) ⊕ Z` is an isomorphism, so a class
//! is determined by its rank, first Chern class and Euler characteristic. The
//! Euler pairing is evaluated by the integral Riemann–Roch expression
//!
//! ```text
//! χ(x, y) = r_x χ_y + r_y χ_x − r_x r_y − (c_x · c_y) + r_y (K · c_x)
//! ```
//!
//! which keeps every computation in integers.

use std::cmp::Ordering;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::LatticeInt;
use crate::surface::{Divisor, Surface};

/// A numerical K-theory class. Ranks may be zero or negative.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Class<I> {
    pub r: I,
    pub c1: Divisor<I>,
    pub chi: I,
}

impl<I: LatticeInt> Class<I> {
    pub fn new(r: I, c1: Divisor<I>, chi: I) -> Self {
        Self { r, c1, chi }
    }

    pub fn zero(rho: usize) -> Self {
        Self { r: I::zero(), c1: Divisor::zero(rho), chi: I::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.r.is_zero() && self.chi.is_zero() && self.c1.is_zero()
    }

    pub fn scale(&self, k: I) -> Self {
        Self { r: self.r * k, c1: self.c1.scale(k), chi: self.chi * k }
    }

    /// Flattened coordinates `(r, c1[0], …, c1[ρ−1], χ)`.
    pub fn to_vec(&self) -> Vec<I> {
        let mut v = Vec::with_capacity(self.c1.rank() + 2);
        v.push(self.r);
        v.extend_from_slice(self.c1.coords());
        v.push(self.chi);
        v
    }

    /// Inverse of [`Class::to_vec`].
    pub fn from_slice(v: &[I]) -> Self {
        assert!(v.len() >= 2, "a class needs at least rank and Euler characteristic");
        let n = v.len();
        Self { r: v[0], c1: Divisor::new(v[1..n - 1].to_vec()), chi: v[n - 1] }
    }
}

impl<I: LatticeInt> Add for &Class<I> {
    type Output = Class<I>;
    fn add(self, rhs: Self) -> Class<I> {
        Class { r: self.r + rhs.r, c1: &self.c1 + &rhs.c1, chi: self.chi + rhs.chi }
    }
}

impl<I: LatticeInt> Sub for &Class<I> {
    type Output = Class<I>;
    fn sub(self, rhs: Self) -> Class<I> {
        Class { r: self.r - rhs.r, c1: &self.c1 - &rhs.c1, chi: self.chi - rhs.chi }
    }
}

impl<I: LatticeInt> Neg for &Class<I> {
    type Output = Class<I>;
    fn neg(self) -> Class<I> {
        Class { r: -self.r, c1: -&self.c1, chi: -self.chi }
    }
}

impl<I: LatticeInt> Add for Class<I> {
    type Output = Class<I>;
    fn add(self, rhs: Self) -> Class<I> {
        &self + &rhs
    }
}

impl<I: LatticeInt> Sub for Class<I> {
    type Output = Class<I>;
    fn sub(self, rhs: Self) -> Class<I> {
        &self - &rhs
    }
}

impl<I: LatticeInt> Neg for Class<I> {
    type Output = Class<I>;
    fn neg(self) -> Class<I> {
        -&self
    }
}

/// `G`-twisted rank, degree and Euler characteristic of a class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TwistedInvariants<I> {
    pub rank: I,
    pub degree: I,
    pub chi: I,
}

/// Binds classes to a surface and evaluates everything that needs `K_X` or
/// the intersection form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairingContext<I> {
    surface: Surface<I>,
}

impl<I: LatticeInt> PairingContext<I> {
    pub fn new(surface: Surface<I>) -> Self {
        Self { surface }
    }

    pub fn surface(&self) -> &Surface<I> {
        &self.surface
    }

    pub fn rho(&self) -> usize {
        self.surface.rho()
    }

    pub fn check(&self, x: &Class<I>) -> Result<()> {
        self.surface.check(&x.c1)
    }

    pub fn class(&self, r: i64, c1: &[i64], chi: i64) -> Result<Class<I>> {
        let x = Class::new(I::lit(r), Divisor::new(c1.iter().map(|&c| I::lit(c)).collect()), I::lit(chi));
        self.check(&x)?;
        Ok(x)
    }

    /// `γ(O_X) = (1, 0, 1)`.
    pub fn structure_sheaf(&self) -> Class<I> {
        Class::new(I::one(), Divisor::zero(self.rho()), self.surface.chi_o())
    }

    /// Intersection number of two divisors.
    pub fn intersect(&self, d1: &Divisor<I>, d2: &Divisor<I>) -> Result<I> {
        self.surface.intersect(d1, d2)
    }

    fn k_dot(&self, d: &Divisor<I>) -> I {
        self.surface.dot(self.surface.canonical(), d)
    }

    fn h_dot(&self, d: &Divisor<I>) -> I {
        self.surface.dot(self.surface.polarization(), d)
    }

    /// The Euler form `χ(x, y)`.
    pub fn euler_pairing(&self, x: &Class<I>, y: &Class<I>) -> Result<I> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.pair(x, y))
    }

    pub(crate) fn pair(&self, x: &Class<I>, y: &Class<I>) -> I {
        x.r * y.chi + y.r * x.chi - x.r * y.r - self.surface.dot(&x.c1, &y.c1) + y.r * self.k_dot(&x.c1)
    }

    /// `χ(x, y) − χ(y, x)`, which equals `(K, r_y c_x − r_x c_y)`.
    pub fn symmetry_defect(&self, x: &Class<I>, y: &Class<I>) -> Result<I> {
        Ok(self.euler_pairing(x, y)? - self.euler_pairing(y, x)?)
    }

    /// Class of the derived dual: `(r, −c1, χ + c1·K)`.
    pub fn dual(&self, x: &Class<I>) -> Result<Class<I>> {
        self.check(x)?;
        Ok(Class::new(x.r, -&x.c1, x.chi + self.k_dot(&x.c1)))
    }

    /// Tensor product with the line bundle `O(D)`.
    pub fn twist(&self, x: &Class<I>, d: &Divisor<I>) -> Result<Class<I>> {
        self.check(x)?;
        self.surface.check(d)?;
        let two = I::lit(2);
        let dd = self.surface.dot(d, d);
        let dk = self.k_dot(d);
        // characteristic K makes D·(D−K) even
        debug_assert!((dd - dk) % two == I::zero());
        let chi = x.chi + self.surface.dot(&x.c1, d) + x.r * ((dd - dk) / two);
        Ok(Class::new(x.r, &x.c1 + &d.scale(x.r), chi))
    }

    /// `ω = γ(C_P) = (0, 0, 1)`.
    pub fn point_class(&self) -> Class<I> {
        Class::new(I::zero(), Divisor::zero(self.rho()), I::one())
    }

    /// Class of the structure sheaf of a curve in `|D|`: `(0, D, −(D·D + D·K)/2)`.
    pub fn curve_structure_class(&self, d: &Divisor<I>) -> Result<Class<I>> {
        self.surface.check(d)?;
        let two = I::lit(2);
        let q = self.surface.dot(d, d) + self.k_dot(d);
        assert!(q % two == I::zero(), "D·(D+K) is odd; surface validation should rule this out");
        Ok(Class::new(I::zero(), d.clone(), -(q / two)))
    }

    /// `γ(𝓔_x) = rk(E0)·γ(E0) − ω`, the kernel of evaluation at a point.
    pub fn kernel_bundle_class(&self, e0: &Class<I>) -> Result<Class<I>> {
        self.check(e0)?;
        positive_rank(e0.r)?;
        Ok(&e0.scale(e0.r) - &self.point_class())
    }

    /// `L_{e0}(x) = x − χ(x, e0)·e0`.
    pub fn reflect_left(&self, e0: &Class<I>, x: &Class<I>) -> Result<Class<I>> {
        let c = self.euler_pairing(x, e0)?;
        Ok(x - &e0.scale(c))
    }

    /// `R_{e0}(x) = x − χ(e0, x)·e0`.
    pub fn reflect_right(&self, e0: &Class<I>, x: &Class<I>) -> Result<Class<I>> {
        let c = self.euler_pairing(e0, x)?;
        Ok(x - &e0.scale(c))
    }

    /// Rank, degree and Euler characteristic of `G^∨ ⊗ x`.
    pub fn twisted_invariants(&self, g: &Class<I>, x: &Class<I>) -> Result<TwistedInvariants<I>> {
        self.check(g)?;
        self.check(x)?;
        positive_rank(g.r)?;
        Ok(TwistedInvariants {
            rank: g.r * x.r,
            degree: g.r * self.h_dot(&x.c1) - x.r * self.h_dot(&g.c1),
            chi: self.pair(g, x),
        })
    }

    /// Twice the coefficients `[n^0, n^1, n^2]` of `n ↦ χ_G(x(nH))`.
    ///
    /// The polynomial has degree two with half-integral coefficients, so it
    /// is recovered exactly from its values at `n = 0, 1, 2`.
    fn twisted_hilbert_doubled(&self, g: &Class<I>, x: &Class<I>) -> Result<[I; 3]> {
        let h = self.surface.polarization();
        let f0 = self.pair(g, x);
        let f1 = self.pair(g, &self.twist(x, h)?);
        let f2 = self.pair(g, &self.twist(x, &h.scale(I::lit(2)))?);
        let two = I::lit(2);
        let three = I::lit(3);
        let four = I::lit(4);
        Ok([two * f0, four * f1 - three * f0 - f2, f2 - two * f1 + f0])
    }

    /// Compares the reduced twisted Hilbert polynomials
    /// `χ_G(x(nH)) / rk_G(x)` and `χ_G(y(nH)) / rk_G(y)` for `n ≫ 0`.
    pub fn twisted_order(&self, g: &Class<I>, x: &Class<I>, y: &Class<I>) -> Result<Ordering> {
        self.check(g)?;
        self.check(x)?;
        self.check(y)?;
        positive_rank(g.r)?;
        positive_rank(x.r)?;
        positive_rank(y.r)?;
        let px = self.twisted_hilbert_doubled(g, x)?;
        let py = self.twisted_hilbert_doubled(g, y)?;
        // rk_G = r_G r and r_G > 0 cancels from the cross-multiplication.
        for i in (0..3).rev() {
            match (px[i] * y.r).cmp(&(py[i] * x.r)) {
                Ordering::Equal => continue,
                other => return Ok(other),
            }
        }
        Ok(Ordering::Equal)
    }

    /// Compares twisted slopes `deg_G / rk_G` only.
    pub fn mu_order(&self, g: &Class<I>, x: &Class<I>, y: &Class<I>) -> Result<Ordering> {
        positive_rank(x.r)?;
        positive_rank(y.r)?;
        let tx = self.twisted_invariants(g, x)?;
        let ty = self.twisted_invariants(g, y)?;
        Ok((tx.degree * ty.rank).cmp(&(ty.degree * tx.rank)))
    }
}

pub(crate) fn positive_rank<I: LatticeInt>(r: I) -> Result<()> {
    if r > I::zero() {
        Ok(())
    } else {
        Err(Error::NonPositiveRank(r.as_i64()))
    }
}
