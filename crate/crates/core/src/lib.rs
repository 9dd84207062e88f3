//! Numerical invariants of moduli of sheaves on rational surfaces and a
//! Brill–Noether recursion for their E-polynomials.
//!
//! The lattice layer (`surface`, `ktheory`, `numerics`, `strata`) is generic
//! over a [`LatticeInt`] integer width; polynomials (`qpoly`, `goettsche`,
//! `series`) are generic over an exact coefficient ring [`Coeff`]. The
//! aliases below fix the defaults used by the CLI and file formats:
//! `i64` lattice coordinates and arbitrary-precision coefficients.
//!
//! ```
//! use ratmod::{KClass, PairingCtx, SurfaceModel};
//!
//! let ctx = PairingCtx::new(SurfaceModel::p2());
//! let o = ctx.structure_sheaf();
//! let e: KClass = ctx.class(2, &[1], 1).unwrap();
//! assert_eq!(ctx.euler_pairing(&o, &o).unwrap(), 1);
//! assert_eq!(ratmod::numerics::moduli_dim(&ctx, &e).unwrap(), 8);
//! ```

pub mod error;
pub mod goettsche;
pub mod io;
pub mod ktheory;
pub mod lattice;
pub mod numerics;
pub mod qpoly;
pub mod scalar;
pub mod series;
pub mod strata;
pub mod surface;

use num_bigint::BigInt;

pub use error::{Error, Result};
pub use goettsche::{hilb_epoly, BettiData};
pub use ktheory::{Class, PairingContext};
pub use numerics::ExceptionalPair;
pub use qpoly::{gauss_binom, Poly};
pub use scalar::{Coeff, LatticeInt};
pub use series::{extend_series, SeriesResult};
pub use surface::{Divisor, Surface};

pub type DivisorClass = Divisor<i64>;
pub type SurfaceModel = Surface<i64>;
pub type KClass = Class<i64>;
pub type PairingCtx = PairingContext<i64>;
pub type Pair = ExceptionalPair<i64>;
pub type QPoly = Poly<BigInt>;
pub type SeriesSpec = series::SeriesSpec<i64, BigInt>;
pub type SeriesOutput = SeriesResult<BigInt>;
pub type StratumType = strata::StratumType<i64>;
