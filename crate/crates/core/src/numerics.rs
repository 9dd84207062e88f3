//! Dimension counts, existence tests and distinguished lattice classes
//! attached to an exceptional class `e0`.
//!
//! Two dimension conventions appear and are kept apart by name:
//! [`moduli_dim`] is the coarse dimension `1 − χ(e, e)` of a moduli space of
//! stable sheaves, while [`ExceptionalPair::stack_dim_mu_ss`] is the stack
//! dimension `−χ(e, e)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ktheory::{positive_rank, Class, PairingContext};
use crate::lattice::kernel_basis;
use crate::scalar::LatticeInt;

/// `dim M_H(e) = 1 − χ(e, e)`.
pub fn moduli_dim<I: LatticeInt>(ctx: &PairingContext<I>, e: &Class<I>) -> Result<I> {
    Ok(I::one() - ctx.euler_pairing(e, e)?)
}

/// `dim Quot^a_{L/X} = (rk L + 1)·a`.
pub fn quot_dim<I: LatticeInt>(rk_l: I, a: I) -> Result<I> {
    if rk_l < I::one() || a < I::zero() {
        return Err(Error::InvalidArgument(format!("quot_dim needs rk L >= 1 and a >= 0, got ({rk_l}, {a})")));
    }
    Ok((rk_l + I::one()) * a)
}

/// Whether μ-stable sheaves of class `r·e0 − a·ω` exist.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Existence {
    Exists,
    Empty,
}

/// `Gr(ambient, sub)`-bundle structure of a Brill–Noether stratum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GrassmannBundle<I> {
    pub ambient: I,
    pub sub: I,
    /// The class whose moduli space is the base of the bundle.
    pub base: Class<I>,
    /// Set when `rk γ < n·rk γ0` and the base is the dual system class
    /// `n·γ0^∨ − γ^∨`.
    pub dual: bool,
}

impl<I: LatticeInt> GrassmannBundle<I> {
    /// `dim Gr(N, k) = k(N − k)`.
    pub fn fiber_dim(&self) -> I {
        self.sub * (self.ambient - self.sub)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BirationalFiber<I> {
    pub k: I,
    pub s: I,
    /// `dim M(e) − dim M(L_{e0}(e))`.
    pub dim_drop: I,
    /// True when `dim_drop = k(s − k) = dim Gr(s, k)`.
    pub matches_grassmannian: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NefRays<I> {
    pub alpha: Class<I>,
    pub beta: Class<I>,
    /// The rays are only claimed for `e0 = O_X`, `rk e > 0`, `χ(e, e0) < 0`.
    pub applicable: bool,
}

/// Integral basis (Hermite normal form) of `e^⊥ = {x : χ(e, x) = 0}`.
pub fn perp_basis<I: LatticeInt>(ctx: &PairingContext<I>, e: &Class<I>) -> Result<Vec<Class<I>>> {
    ctx.check(e)?;
    if e.is_zero() {
        return Err(Error::InvalidArgument("e^⊥ of the zero class is the whole lattice".into()));
    }
    let n = ctx.rho() + 2;
    let functional: Vec<I> = (0..n)
        .map(|i| {
            let mut v = vec![I::zero(); n];
            v[i] = I::one();
            ctx.pair(e, &Class::from_slice(&v))
        })
        .collect();
    Ok(kernel_basis(&[functional], n).iter().map(|v| Class::from_slice(v)).collect())
}

fn alpha_unchecked<I: LatticeInt>(ctx: &PairingContext<I>, e: &Class<I>) -> Result<Class<I>> {
    let o_h = ctx.curve_structure_class(ctx.surface().polarization())?;
    let c = ctx.euler_pairing(e, &o_h)?;
    Ok(&o_h.scale(-e.r) + &ctx.point_class().scale(c))
}

/// `α_e = −(rk e)·γ(O_H) + χ(e, O_H)·ω`, a class in `e^⊥`.
pub fn alpha_class<I: LatticeInt>(ctx: &PairingContext<I>, e: &Class<I>) -> Result<Class<I>> {
    ctx.check(e)?;
    positive_rank(e.r)?;
    alpha_unchecked(ctx, e)
}

/// A numerically exceptional class `e0` (`χ(e0, e0) = 1`, `rk e0 ≥ 1`) on a
/// fixed surface.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExceptionalPair<I> {
    ctx: PairingContext<I>,
    e0: Class<I>,
}

impl<I: LatticeInt> ExceptionalPair<I> {
    pub fn new(ctx: PairingContext<I>, e0: Class<I>) -> Result<Self> {
        let chi = ctx.euler_pairing(&e0, &e0)?;
        if chi != I::one() {
            return Err(Error::NotExceptional(chi.as_i64()));
        }
        positive_rank(e0.r)?;
        Ok(Self { ctx, e0 })
    }

    /// The pair `(X, O_X)`.
    pub fn structure_sheaf(ctx: PairingContext<I>) -> Self {
        let e0 = ctx.structure_sheaf();
        Self { ctx, e0 }
    }

    pub fn ctx(&self) -> &PairingContext<I> {
        &self.ctx
    }

    pub fn e0(&self) -> &Class<I> {
        &self.e0
    }

    pub fn rk_e0(&self) -> I {
        self.e0.r
    }

    /// Whether `e0` is the class of `O_X`.
    pub fn is_structure_sheaf(&self) -> bool {
        self.e0 == self.ctx.structure_sheaf()
    }

    /// `r·e0 − a·ω`.
    pub fn class_of(&self, r: I, a: I) -> Class<I> {
        &self.e0.scale(r) - &self.ctx.point_class().scale(a)
    }

    /// `s = −(K, c1(e0^∨ ⊗ e))`.
    pub fn s_of(&self, e: &Class<I>) -> Result<I> {
        let mixed = &e.c1.scale(self.e0.r) - &self.e0.c1.scale(e.r);
        Ok(-self.ctx.intersect(self.ctx.surface().canonical(), &mixed)?)
    }

    /// Stack dimension `2·r·a·rk(e0) − r²` of μ-semistable sheaves of class
    /// `r·e0 − a·ω`.
    pub fn stack_dim_mu_ss(&self, r: I, a: I) -> Result<I> {
        if r < I::one() {
            return Err(Error::InvalidArgument(format!("r must be at least 1, got {r}")));
        }
        Ok(I::lit(2) * r * a * self.e0.r - r * r)
    }

    /// μ-stable sheaves of class `r·e0 − a·ω` exist iff `r ≤ a·rk(e0)` or
    /// `(r, a) = (1, 0)`.
    pub fn mu_stable_exists(&self, r: I, a: I) -> Result<Existence> {
        if r < I::one() {
            return Err(Error::InvalidArgument(format!("r must be at least 1, got {r}")));
        }
        if a < I::zero() {
            return Err(Error::InvalidArgument(format!("μ-semistable classes r·e0 − a·ω need a >= 0, got {a}")));
        }
        let rigid = r == I::one() && a.is_zero();
        Ok(if rigid || r <= a * self.e0.r { Existence::Exists } else { Existence::Empty })
    }

    /// Lower bound `n² + (r·rk(e0) − 1)(a + p)` for the codimension of the
    /// Brill–Noether substack with `n` extra sections, `a` points on the
    /// quotient and `p` on the double dual.
    pub fn codim_bound(&self, n: I, r: I, a: I, p: I) -> Result<I> {
        if [n, r, a, p].iter().any(|v| *v < I::zero()) {
            return Err(Error::InvalidArgument("codim_bound arguments must be nonnegative".into()));
        }
        Ok(n * n + (r * self.e0.r - I::one()) * (a + p))
    }

    /// `dim Syst(E0^{⊕n}, γ) = dim M_H(γ) − n(n − χ(γ0, γ))`.
    pub fn syst_dim(&self, gamma: &Class<I>, n: I) -> Result<I> {
        if n < I::zero() {
            return Err(Error::InvalidArgument(format!("n must be nonnegative, got {n}")));
        }
        let h = self.ctx.euler_pairing(&self.e0, gamma)?;
        Ok(moduli_dim(&self.ctx, gamma)? - n * (n - h))
    }

    /// The Grassmannian bundle `Syst(E0^{⊕n}, γ) → M_H(base)` with fiber
    /// `Gr(m + n, n)`, `m = −χ(γ, γ0)`.
    pub fn gr_bundle_params(&self, gamma: &Class<I>, n: I) -> Result<GrassmannBundle<I>> {
        if n < I::one() {
            return Err(Error::InvalidArgument(format!("n must be at least 1, got {n}")));
        }
        let m = -self.ctx.euler_pairing(gamma, &self.e0)?;
        let (base, dual) = if gamma.r >= n * self.e0.r {
            (gamma - &self.e0.scale(n), false)
        } else {
            let e0v = self.ctx.dual(&self.e0)?;
            (&e0v.scale(n) - &self.ctx.dual(gamma)?, true)
        };
        Ok(GrassmannBundle { ambient: m + n, sub: n, base, dual })
    }

    /// With `χ(e, e0) = −k` and `0 < k ≤ s`, the map
    /// `M(e) → M(L_{e0}(e))` is generically a `Gr(s, k)`-bundle; returns `k`,
    /// `s` and the dimension drop.
    pub fn birational_fiber_check(&self, e: &Class<I>) -> Result<BirationalFiber<I>> {
        let k = -self.ctx.euler_pairing(e, &self.e0)?;
        let s = self.s_of(e)?;
        if k <= I::zero() || k > s {
            return Err(Error::InvalidArgument(format!("need 0 < k <= s, got k = {k}, s = {s}")));
        }
        let reflected = self.ctx.reflect_left(&self.e0, e)?;
        let dim_drop = moduli_dim(&self.ctx, e)? - moduli_dim(&self.ctx, &reflected)?;
        Ok(BirationalFiber { k, s, dim_drop, matches_grassmannian: dim_drop == k * (s - k) })
    }

    /// `β_e = R_{e0}(α_{L_{e0}(e)})`.
    pub fn beta_class(&self, e: &Class<I>) -> Result<Class<I>> {
        self.ctx.check(e)?;
        positive_rank(e.r)?;
        let tilde = self.ctx.reflect_left(&self.e0, e)?;
        let alpha = alpha_unchecked(&self.ctx, &tilde)?;
        self.ctx.reflect_right(&self.e0, &alpha)
    }

    pub fn nef_rays(&self, e: &Class<I>) -> Result<NefRays<I>> {
        let alpha = alpha_class(&self.ctx, e)?;
        let beta = self.beta_class(e)?;
        let applicable = self.is_structure_sheaf() && self.ctx.euler_pairing(e, &self.e0)? < I::zero();
        Ok(NefRays { alpha, beta, applicable })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::Surface;

    type Ctx = PairingContext<i64>;

    fn p2() -> Ctx {
        Ctx::new(Surface::p2())
    }

    fn c(ctx: &Ctx, r: i64, c1: &[i64], chi: i64) -> Class<i64> {
        ctx.class(r, c1, chi).unwrap()
    }

    fn omega1() -> ExceptionalPair<i64> {
        let ctx = p2();
        let e0 = c(&ctx, 2, &[-1], 0);
        ExceptionalPair::new(ctx, e0).unwrap()
    }

    #[test]
    fn moduli_dimensions() {
        let x = p2();
        assert_eq!(moduli_dim(&x, &c(&x, 2, &[1], 1)).unwrap(), 8);
        assert_eq!(moduli_dim(&x, &c(&x, 9, &[-4], -1)).unwrap(), 8);
        assert_eq!(moduli_dim(&x, &x.structure_sheaf()).unwrap(), 0);
    }

    #[test]
    fn pair_validation() {
        let x = p2();
        assert_eq!(ExceptionalPair::new(x.clone(), c(&x, 1, &[0], 0)), Err(Error::NotExceptional(-1)));
        // −O_X pairs to 1 with itself but has negative rank
        assert_eq!(ExceptionalPair::new(x.clone(), c(&x, -1, &[0], -1)), Err(Error::NonPositiveRank(-1)));
        assert!(ExceptionalPair::structure_sheaf(x).is_structure_sheaf());
    }

    #[test]
    fn stack_dimensions() {
        let o = ExceptionalPair::structure_sheaf(p2());
        assert_eq!(o.stack_dim_mu_ss(1, 1).unwrap(), 1);
        assert_eq!(o.stack_dim_mu_ss(1, 0).unwrap(), -1);
        assert_eq!(omega1().stack_dim_mu_ss(1, 1).unwrap(), 3);
        assert!(o.stack_dim_mu_ss(0, 1).is_err());
    }

    #[test]
    fn existence() {
        let o = ExceptionalPair::structure_sheaf(p2());
        assert_eq!(o.mu_stable_exists(2, 1).unwrap(), Existence::Empty);
        assert_eq!(o.mu_stable_exists(2, 2).unwrap(), Existence::Exists);
        assert_eq!(o.mu_stable_exists(1, 0).unwrap(), Existence::Exists);
        assert_eq!(omega1().mu_stable_exists(2, 1).unwrap(), Existence::Exists);
        assert_eq!(omega1().mu_stable_exists(3, 1).unwrap(), Existence::Empty);
        assert!(o.mu_stable_exists(1, -1).is_err());
    }

    #[test]
    fn codimension_and_quot() {
        let o = ExceptionalPair::structure_sheaf(p2());
        let w = omega1();
        assert_eq!(w.codim_bound(1, 1, 0, 0).unwrap(), 1);
        assert_eq!(o.codim_bound(0, 3, 2, 1).unwrap(), 2 * 3);
        assert_eq!(w.codim_bound(2, 1, 1, 0).unwrap(), 5);
        assert!(o.codim_bound(-1, 1, 0, 0).is_err());
        assert_eq!(quot_dim(1, 5).unwrap(), 10);
        assert_eq!(quot_dim(4, 0).unwrap(), 0);
        assert_eq!(quot_dim(3, 2).unwrap(), 8);
        assert!(quot_dim(0, 1).is_err());
    }

    #[test]
    fn syst_dimensions() {
        let x = p2();
        let o = ExceptionalPair::structure_sheaf(x.clone());
        let g = c(&x, 2, &[1], 1);
        assert_eq!(o.syst_dim(&g, 0).unwrap(), 8);
        assert_eq!(x.euler_pairing(o.e0(), &g).unwrap(), 1);
        assert_eq!(o.syst_dim(&g, 1).unwrap(), 8);
        let g2 = c(&x, 3, &[1], 4);
        let h = x.euler_pairing(o.e0(), &g2).unwrap();
        assert_eq!(o.syst_dim(&g2, h).unwrap(), moduli_dim(&x, &g2).unwrap());
    }

    #[test]
    fn grassmannian_bundles() {
        for n0 in 1..=4i64 {
            let ctx = Ctx::new(Surface::p1xp1(n0).unwrap());
            let o = ExceptionalPair::structure_sheaf(ctx.clone());
            for r in 1..=2 * n0 {
                let gamma = c(&ctx, 1 + r, &[-1, n0 + 1], r);
                let b = o.gr_bundle_params(&gamma, r).unwrap();
                assert_eq!((b.ambient, b.sub, b.dual), (2 * n0, r, false));
                assert_eq!(b.base, c(&ctx, 1, &[-1, n0 + 1], 0));
                assert_eq!(moduli_dim(&ctx, &b.base).unwrap(), 0);
                assert_eq!(b.fiber_dim(), r * (2 * n0 - r));
                assert_eq!(moduli_dim(&ctx, &gamma).unwrap(), b.fiber_dim());
            }
        }
        let x = p2();
        let o = ExceptionalPair::structure_sheaf(x.clone());
        let b = o.gr_bundle_params(&c(&x, 1, &[1], 0), 2).unwrap();
        assert!(b.dual);
        assert_eq!(b.base, &x.structure_sheaf().scale(2) - &x.dual(&c(&x, 1, &[1], 0)).unwrap());
        // m = 0 gives point fibers
        let g = c(&x, 2, &[1], 3);
        assert_eq!(x.euler_pairing(&g, o.e0()).unwrap(), 0);
        assert_eq!(o.gr_bundle_params(&g, 1).unwrap().fiber_dim(), 0);
    }

    #[test]
    fn birational_fibers() {
        let x = p2();
        let o = ExceptionalPair::structure_sheaf(x.clone());
        // χ(e, O) = −3 = −s: birational
        let f = o.birational_fiber_check(&c(&x, 1, &[1], 0)).unwrap();
        assert_eq!((f.k, f.s, f.dim_drop), (3, 3, 0));
        // χ(e, O) = −1: P^2-bundle generically, drop 2 = dim Gr(3, 1)
        let f = o.birational_fiber_check(&c(&x, 1, &[1], 2)).unwrap();
        assert_eq!((f.k, f.s, f.dim_drop), (1, 3, 2));
        assert!(f.matches_grassmannian);
        for n in 1..=4 {
            let ctx = Ctx::new(Surface::p1xp1(n).unwrap());
            let o = ExceptionalPair::structure_sheaf(ctx.clone());
            // χ(e, O) = χ(e) + K·c1(e); pick χ(e) so that k = 1
            let d = crate::surface::Divisor::new(vec![-1, n + 1]);
            let kd = ctx.intersect(ctx.surface().canonical(), &d).unwrap();
            let e = Class::new(1, d, -1 - kd);
            let f = o.birational_fiber_check(&e).unwrap();
            assert_eq!((f.k, f.s, f.dim_drop), (1, -kd, -kd - 1));
            assert!(f.matches_grassmannian);
        }
        assert!(o.birational_fiber_check(&x.structure_sheaf()).is_err());
    }

    #[test]
    fn perp_lattices() {
        let x = p2();
        let basis = perp_basis(&x, &x.structure_sheaf()).unwrap();
        assert_eq!(basis, vec![c(&x, 1, &[0], 0), c(&x, 0, &[1], 0)]);
        let e = c(&x, 2, &[1], 1);
        let basis = perp_basis(&x, &e).unwrap();
        assert_eq!(basis.len(), 2);
        for v in &basis {
            assert_eq!(x.euler_pairing(&e, v).unwrap(), 0);
        }
        assert!(perp_basis(&x, &Class::zero(1)).is_err());
    }

    #[test]
    fn alpha_beta_classes() {
        let x = p2();
        let o = ExceptionalPair::structure_sheaf(x.clone());
        let e = c(&x, 2, &[1], 1);
        assert_eq!(alpha_class(&x, &e).unwrap(), c(&x, 0, &[-2], -1));
        assert_eq!(alpha_class(&x, &x.structure_sheaf()).unwrap(), c(&x, 0, &[-1], 0));
        assert!(alpha_class(&x, &x.point_class()).is_err());
        let beta = o.beta_class(&e).unwrap();
        assert_eq!(x.euler_pairing(&e, &beta).unwrap(), 0);
        // ẽ = (4, H, 3), α_ẽ = (0, −4H, −1), χ(O, α_ẽ) = −1
        assert_eq!(beta, c(&x, 1, &[-4], 0));
    }

    #[test]
    fn beta_with_orthogonal_e0() {
        // χ(e, e0) = 0 means ẽ = e, so β_e = R_{e0}(α_e) = α_e − χ(e0, α_e)·e0
        let x = p2();
        let o = ExceptionalPair::structure_sheaf(x.clone());
        let e = c(&x, 1, &[1], 3);
        assert_eq!(x.euler_pairing(&e, o.e0()).unwrap(), 0);
        let alpha = alpha_class(&x, &e).unwrap();
        let shift = x.euler_pairing(o.e0(), &alpha).unwrap();
        assert_eq!(o.beta_class(&e).unwrap(), &alpha - &o.e0().scale(shift));
    }

    #[test]
    fn nef_ray_applicability() {
        let x = p2();
        let o = ExceptionalPair::structure_sheaf(x.clone());
        assert!(o.nef_rays(&c(&x, 2, &[1], 0)).unwrap().applicable);
        assert!(!omega1().nef_rays(&c(&x, 2, &[1], 0)).unwrap().applicable);
        assert!(!o.nef_rays(&c(&x, 1, &[1], 3)).unwrap().applicable);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn class_strategy() -> impl Strategy<Value = Class<i64>> {
            (1i64..15, -10i64..10, -15i64..15).prop_map(|(r, d, chi)| Class::new(r, crate::surface::Divisor::new(vec![d]), chi))
        }

        proptest! {
            #[test]
            fn alpha_beta_in_perp(e in class_strategy(), use_omega in any::<bool>()) {
                let pair = if use_omega { omega1() } else { ExceptionalPair::structure_sheaf(p2()) };
                let x = pair.ctx();
                prop_assert_eq!(x.euler_pairing(&e, &alpha_class(x, &e).unwrap()).unwrap(), 0);
                prop_assert_eq!(x.euler_pairing(&e, &pair.beta_class(&e).unwrap()).unwrap(), 0);
            }

            #[test]
            fn reflection_maps_perp_lattices(e in class_strategy()) {
                let pair = omega1();
                let x = pair.ctx();
                let tilde = x.reflect_left(pair.e0(), &e).unwrap();
                prop_assume!(!tilde.is_zero());
                for v in perp_basis(x, &tilde).unwrap() {
                    let image = x.reflect_right(pair.e0(), &v).unwrap();
                    prop_assert_eq!(x.euler_pairing(&e, &image).unwrap(), 0);
                }
            }

            #[test]
            fn duality_preserves_dimension(e in class_strategy()) {
                let x = Ctx::new(Surface::p1xp1(2).unwrap());
                let e = Class::new(e.r, crate::surface::Divisor::new(vec![e.c1.coords()[0], e.chi % 5]), e.chi);
                prop_assert_eq!(moduli_dim(&x, &e).unwrap(), moduli_dim(&x, &x.dual(&e).unwrap()).unwrap());
            }

            #[test]
            fn stack_dim_matches_pairing(r in 1i64..10, a in 0i64..10, use_omega in any::<bool>()) {
                let pair = if use_omega { omega1() } else { ExceptionalPair::structure_sheaf(p2()) };
                let e = pair.class_of(r, a);
                prop_assert_eq!(pair.stack_dim_mu_ss(r, a).unwrap(), -pair.ctx().euler_pairing(&e, &e).unwrap());
            }

            #[test]
            fn existence_monotone_in_a(r in 1i64..10, a in 0i64..10, use_omega in any::<bool>()) {
                let pair = if use_omega { omega1() } else { ExceptionalPair::structure_sheaf(p2()) };
                if pair.mu_stable_exists(r, a).unwrap() == Existence::Exists && (r, a) != (1, 0) {
                    prop_assert_eq!(pair.mu_stable_exists(r, a + 1).unwrap(), Existence::Exists);
                }
            }
        }
    }
}
