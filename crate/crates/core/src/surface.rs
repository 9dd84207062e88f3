//! Néron–Severi lattices of rational surfaces.
//!
//! A [`Surface`] stores the intersection form in a fixed integral basis
//! together with the canonical class and a polarization. Coordinates are never
//! reduced or changed: divisors are plain integer vectors in the supplied
//! basis.

use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::LatticeInt;

/// A divisor class, written in the surface's chosen NS basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Divisor<I> {
    coords: Vec<I>,
}

impl<I: LatticeInt> Divisor<I> {
    pub fn new(coords: Vec<I>) -> Self {
        Self { coords }
    }

    pub fn zero(rho: usize) -> Self {
        Self { coords: vec![I::zero(); rho] }
    }

    /// The `i`-th basis vector of a rank `rho` lattice.
    pub fn unit(rho: usize, i: usize) -> Self {
        let mut coords = vec![I::zero(); rho];
        coords[i] = I::one();
        Self { coords }
    }

    pub fn coords(&self) -> &[I] {
        &self.coords
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn scale(&self, k: I) -> Self {
        Self { coords: self.coords.iter().map(|&c| c * k).collect() }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(I, I) -> I) -> Self {
        assert_eq!(self.rank(), other.rank(), "divisors live on different lattices");
        Self { coords: self.coords.iter().zip(&other.coords).map(|(&a, &b)| f(a, b)).collect() }
    }
}

impl<I: LatticeInt> Add for &Divisor<I> {
    type Output = Divisor<I>;
    fn add(self, rhs: Self) -> Divisor<I> {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl<I: LatticeInt> Sub for &Divisor<I> {
    type Output = Divisor<I>;
    fn sub(self, rhs: Self) -> Divisor<I> {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl<I: LatticeInt> Neg for &Divisor<I> {
    type Output = Divisor<I>;
    fn neg(self) -> Divisor<I> {
        Divisor { coords: self.coords.iter().map(|&c| -c).collect() }
    }
}

impl<I: LatticeInt> Add for Divisor<I> {
    type Output = Divisor<I>;
    fn add(self, rhs: Self) -> Divisor<I> {
        &self + &rhs
    }
}

impl<I: LatticeInt> Sub for Divisor<I> {
    type Output = Divisor<I>;
    fn sub(self, rhs: Self) -> Divisor<I> {
        &self - &rhs
    }
}

impl<I: LatticeInt> Neg for Divisor<I> {
    type Output = Divisor<I>;
    fn neg(self) -> Divisor<I> {
        -&self
    }
}

/// Numerical model of a smooth rational surface with an ample class.
///
/// Invariants checked at construction:
/// the Gram matrix is symmetric, `H·H > 0`, `(K, H) < 0`, and the canonical
/// class is characteristic (`D·D ≡ D·K mod 2`), so that Riemann–Roch produces
/// integers for every integral divisor.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Surface<I> {
    gram: Vec<Vec<I>>,
    canonical: Divisor<I>,
    polarization: Divisor<I>,
}

impl<I: LatticeInt> Surface<I> {
    /// The projective plane with `H` the line class.
    pub fn p2() -> Self {
        Self {
            gram: vec![vec![I::one()]],
            canonical: Divisor::new(vec![I::lit(-3)]),
            polarization: Divisor::new(vec![I::one()]),
        }
    }

    /// `P^1 x P^1` in the basis of the two rulings, polarized by `O(1, n)`.
    pub fn p1xp1(n: I) -> Result<Self> {
        if n < I::one() {
            return Err(Error::InvalidArgument(format!("polarization O(1,n) needs n >= 1, got {n}")));
        }
        Ok(Self {
            gram: vec![vec![I::zero(), I::one()], vec![I::one(), I::zero()]],
            canonical: Divisor::new(vec![I::lit(-2), I::lit(-2)]),
            polarization: Divisor::new(vec![I::one(), n]),
        })
    }

    /// Builds a validated model from raw lattice data.
    pub fn custom(
        rho: usize,
        gram: Vec<Vec<I>>,
        canonical: Divisor<I>,
        polarization: Divisor<I>,
    ) -> Result<Self> {
        if rho == 0 {
            return Err(Error::InvalidSurface("Picard rank must be positive".into()));
        }
        if gram.len() != rho {
            return Err(Error::DimensionMismatch { expected: rho, found: gram.len() });
        }
        for row in &gram {
            if row.len() != rho {
                return Err(Error::DimensionMismatch { expected: rho, found: row.len() });
            }
        }
        for d in [&canonical, &polarization] {
            if d.rank() != rho {
                return Err(Error::DimensionMismatch { expected: rho, found: d.rank() });
            }
        }
        for i in 0..rho {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::InvalidSurface(format!(
                        "intersection matrix is not symmetric at ({i},{j})"
                    )));
                }
            }
        }
        let surface = Self { gram, canonical, polarization };
        let h = &surface.polarization;
        if surface.dot(h, h) <= I::zero() {
            return Err(Error::InvalidSurface("polarization must satisfy H.H > 0".into()));
        }
        if surface.dot(&surface.canonical, h) >= I::zero() {
            return Err(Error::InvalidSurface("canonical class must satisfy (K,H) < 0".into()));
        }
        // D.D - D.K is linear mod 2, so checking the basis suffices.
        let two = I::lit(2);
        for i in 0..rho {
            let e = Divisor::unit(rho, i);
            if (surface.dot(&e, &e) - surface.dot(&e, &surface.canonical)) % two != I::zero() {
                return Err(Error::InvalidSurface(format!(
                    "canonical class is not characteristic on basis vector {i}"
                )));
            }
        }
        Ok(surface)
    }

    pub fn rho(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<I>] {
        &self.gram
    }

    pub fn canonical(&self) -> &Divisor<I> {
        &self.canonical
    }

    pub fn polarization(&self) -> &Divisor<I> {
        &self.polarization
    }

    /// `χ(O_X)`, which is 1 for every rational surface.
    pub fn chi_o(&self) -> I {
        I::one()
    }

    pub fn check(&self, d: &Divisor<I>) -> Result<()> {
        if d.rank() == self.rho() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: self.rho(), found: d.rank() })
        }
    }

    /// The intersection number `d1ᵀ · G · d2`.
    pub fn intersect(&self, d1: &Divisor<I>, d2: &Divisor<I>) -> Result<I> {
        self.check(d1)?;
        self.check(d2)?;
        Ok(self.dot(d1, d2))
    }

    /// Unchecked pairing; callers have validated both lengths.
    pub(crate) fn dot(&self, d1: &Divisor<I>, d2: &Divisor<I>) -> I {
        let mut acc = I::zero();
        for (row, &x) in self.gram.iter().zip(d1.coords()) {
            if x.is_zero() {
                continue;
            }
            for (&g, &y) in row.iter().zip(d2.coords()) {
                acc = acc + x * g * y;
            }
        }
        acc
    }

    /// `(K, H)`, negative by construction.
    pub fn k_dot_h(&self) -> I {
        self.dot(&self.canonical, &self.polarization)
    }

    /// Virtual Betti numbers `(b0, b2, b4)` of the surface.
    pub fn betti(&self) -> Vec<u64> {
        vec![1, self.rho() as u64, 1]
    }
}
