//! Dense univariate polynomials in `t` with exact integer coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::scalar::Coeff;

/// A polynomial `Σ c_i t^i`, stored in ascending degree with no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly<C> {
    coeffs: Vec<C>,
}

impl<C: Coeff> Poly<C> {
    pub fn from_coeffs(mut coeffs: Vec<C>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| C::from_int(c)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    pub fn constant(c: C) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// `c · t^k`.
    pub fn monomial(c: C, k: usize) -> Self {
        let mut coeffs = vec![C::zero(); k];
        coeffs.push(c);
        Self::from_coeffs(coeffs)
    }

    /// `t^k`.
    pub fn t_pow(k: usize) -> Self {
        Self::monomial(C::one(), k)
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> C {
        self.coeffs.get(i).cloned().unwrap_or_else(C::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&C> {
        self.coeffs.last()
    }

    pub fn scalar_mul(&self, k: &C) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|c| c.clone() * k.clone()).collect())
    }

    /// Multiplication by `t^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![C::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Self { coeffs }
    }

    pub fn eval(&self, t: &C) -> C {
        self.coeffs.iter().rev().fold(C::zero(), |acc, c| acc * t.clone() + c.clone())
    }

    pub fn is_palindrome(&self) -> bool {
        self.coeffs.iter().eq(self.coeffs.iter().rev())
    }

    /// Exact division; fails unless the divisor divides `self` over the
    /// coefficient ring.
    pub fn div_exact(&self, divisor: &Self) -> Result<Self> {
        let lead = divisor.leading().ok_or(Error::InexactDivision)?.clone();
        let dd = divisor.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return if self.is_zero() { Ok(Self::zero()) } else { Err(Error::InexactDivision) };
        }
        let mut quot = vec![C::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let top = rem[i + dd].clone();
            if top.is_zero() {
                continue;
            }
            if !(top.clone() % lead.clone()).is_zero() {
                return Err(Error::InexactDivision);
            }
            let q = top / lead.clone();
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[i + j] = rem[i + j].clone() - q.clone() * d.clone();
            }
            quot[i] = q;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return Err(Error::InexactDivision);
        }
        Ok(Self::from_coeffs(quot))
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }
}

impl<C: Coeff> Default for Poly<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Coeff> Add for &Poly<C> {
    type Output = Poly<C>;
    fn add(self, rhs: Self) -> Poly<C> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::from_coeffs((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<C: Coeff> Sub for &Poly<C> {
    type Output = Poly<C>;
    fn sub(self, rhs: Self) -> Poly<C> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::from_coeffs((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<C: Coeff> Mul for &Poly<C> {
    type Output = Poly<C>;
    fn mul(self, rhs: Self) -> Poly<C> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![C::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::from_coeffs(out)
    }
}

impl<C: Coeff> Neg for &Poly<C> {
    type Output = Poly<C>;
    fn neg(self) -> Poly<C> {
        Poly { coeffs: self.coeffs.iter().map(|c| -c.clone()).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<C: Coeff> $tr for Poly<C> {
            type Output = Poly<C>;
            fn $m(self, rhs: Self) -> Poly<C> {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<C: Coeff> Neg for Poly<C> {
    type Output = Poly<C>;
    fn neg(self) -> Poly<C> {
        -&self
    }
}

impl<C: Coeff> std::iter::Sum for Poly<C> {
    fn sum<It: Iterator<Item = Self>>(iter: It) -> Self {
        iter.fold(Self::zero(), |acc, p| &acc + &p)
    }
}

/// Renders as `1+2t+5t^2`, ascending, with `0` for the zero polynomial.
impl<C: Coeff> fmt::Display for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if neg {
                f.write_str("-")?;
            } else if !first {
                f.write_str("+")?;
            }
            first = false;
            let unit = mag.is_one();
            match i {
                0 => write!(f, "{mag}")?,
                1 if unit => f.write_str("t")?,
                1 => write!(f, "{mag}t")?,
                _ if unit => write!(f, "t^{i}")?,
                _ => write!(f, "{mag}t^{i}")?,
            }
        }
        Ok(())
    }
}

/// Parses the format produced by `Display`, tolerating whitespace, `*`
/// between coefficient and variable, and repeated exponents (which add).
impl<C: Coeff + FromStr> FromStr for Poly<C> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let text: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if text.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let mut terms = Vec::new();
        let mut start = 0;
        for (i, ch) in text.char_indices() {
            if (ch == '+' || ch == '-') && i > start {
                terms.push(&text[start..i]);
                start = i;
            }
        }
        terms.push(&text[start..]);

        let mut coeffs: Vec<C> = Vec::new();
        for term in terms {
            let (neg, body) = match term.as_bytes().first() {
                Some(b'-') => (true, &term[1..]),
                Some(b'+') => (false, &term[1..]),
                _ => (false, term),
            };
            let bad = || Error::Parse(format!("bad term `{term}` in `{s}`"));
            let (num, exp) = match body.find('t') {
                None => (body, 0usize),
                Some(p) => {
                    let exp = match &body[p + 1..] {
                        "" => 1,
                        rest => rest.strip_prefix('^').ok_or_else(bad)?.parse().map_err(|_| bad())?,
                    };
                    (body[..p].trim_end_matches('*'), exp)
                }
            };
            let mut c = if num.is_empty() {
                if exp == 0 {
                    return Err(bad());
                }
                C::one()
            } else {
                num.parse::<C>().map_err(|_| bad())?
            };
            if neg {
                c = -c;
            }
            if coeffs.len() <= exp {
                coeffs.resize(exp + 1, C::zero());
            }
            coeffs[exp] = coeffs[exp].clone() + c;
        }
        Ok(Self::from_coeffs(coeffs))
    }
}

/// `[n] = 1 + t + … + t^{n−1}`.
pub fn q_int<C: Coeff>(n: i64) -> Result<Poly<C>> {
    if n < 0 {
        return Err(Error::InvalidArgument(format!("q-integer of negative n = {n}")));
    }
    Ok(Poly::from_coeffs(vec![C::one(); n as usize]))
}

/// `[n]! = [n][n−1]⋯[1]`.
pub fn q_factorial<C: Coeff>(n: i64) -> Result<Poly<C>> {
    if n < 0 {
        return Err(Error::InvalidArgument(format!("q-factorial of negative n = {n}")));
    }
    let mut acc = Poly::one();
    for i in 1..=n {
        acc = &acc * &q_int(i)?;
    }
    Ok(acc)
}

/// Gaussian binomial `[n]! / ([k]! [n−k]!)`, zero outside `0 ≤ k ≤ n`.
///
/// Computed by exact division, so an arithmetic slip in the factorials
/// surfaces as [`Error::InexactDivision`] rather than a wrong answer.
pub fn gauss_binom<C: Coeff>(n: i64, k: i64) -> Poly<C> {
    if k < 0 || k > n {
        return Poly::zero();
    }
    let k = k.min(n - k);
    // [n]!/[n−k]! = [n][n−1]⋯[n−k+1]
    let mut num = Poly::one();
    for i in (n - k + 1)..=n {
        num = &num * &q_int(i).expect("positive index");
    }
    let den = q_factorial(k).expect("nonnegative index");
    num.div_exact(&den).expect("q-factorial quotient must be exact")
}

/// `Σ_{j=0}^{n} (−1)^j t^{j(j−1)/2} [n choose j]_t`, equal to `δ_{n,0}`.
pub fn gauss_alternating_sum<C: Coeff>(n: i64) -> Result<Poly<C>> {
    if n < 0 {
        return Err(Error::InvalidArgument(format!("negative n = {n}")));
    }
    Ok((0..=n)
        .map(|j| {
            let term = gauss_binom::<C>(n, j).shift((j * (j - 1) / 2) as usize);
            if j % 2 == 0 { term } else { -term }
        })
        .sum())
}

/// `e(Gr(n, k))`, the Gaussian binomial under its geometric name.
pub fn grassmannian<C: Coeff>(n: i64, k: i64) -> Poly<C> {
    gauss_binom(n, k)
}

/// `e(P^n) = [n+1]`.
pub fn projective_space<C: Coeff>(n: i64) -> Result<Poly<C>> {
    q_int(n + 1)
}

/// Power series in `z` truncated above `z^order`, with polynomial
/// coefficients in `t`. Used for plethystic products.
pub(crate) struct ZSeries<C> {
    terms: Vec<Poly<C>>,
}

impl<C: Coeff> ZSeries<C> {
    pub(crate) fn one(order: usize) -> Self {
        let mut terms = vec![Poly::zero(); order + 1];
        terms[0] = Poly::one();
        Self { terms }
    }

    pub(crate) fn order(&self) -> usize {
        self.terms.len() - 1
    }

    /// Multiplies by `(1 − t^a z^m)^{−mult}`.
    pub(crate) fn mul_inverse_power(&mut self, a: usize, m: usize, mult: u64) {
        assert!(m >= 1);
        if mult == 0 {
            return;
        }
        let order = self.order();
        // (1 − u)^{−b} = Σ_k C(b+k−1, k) u^k
        let mut factor: Vec<(usize, Poly<C>)> = Vec::new();
        let mut binom = C::one();
        let b = C::from_u64(mult).expect("multiplicity fits in coefficient ring");
        let mut k = 0usize;
        while k * m <= order {
            factor.push((k * m, Poly::monomial(binom.clone(), k * a)));
            // C(b+k, k+1) = C(b+k−1, k) · (b+k) / (k+1)
            let kk = C::from_usize(k).expect("index fits");
            binom = binom * (b.clone() + kk.clone()) / (kk + C::one());
            k += 1;
        }
        let mut out = vec![Poly::zero(); order + 1];
        for (i, p) in self.terms.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            for (shift, f) in &factor {
                if i + shift > order {
                    break;
                }
                out[i + shift] = &out[i + shift] + &(p * f);
            }
        }
        self.terms = out;
    }

    pub(crate) fn coeff(&self, n: usize) -> Poly<C> {
        self.terms[n].clone()
    }
}

fn betti_multiplicities<C: Coeff>(base: &Poly<C>) -> Result<Vec<u64>> {
    base.coeffs()
        .iter()
        .map(|c| {
            if c.is_negative() {
                Err(Error::NegativeCoefficient(c.to_string()))
            } else {
                c.to_u64().ok_or_else(|| Error::InvalidArgument(format!("coefficient {c} too large")))
            }
        })
        .collect()
}

/// E-polynomial of the symmetric product `S^n Z` from `e(Z) = Σ b_d t^d`:
/// the coefficient of `z^n` in `∏_d (1 − t^d z)^{−b_d}`.
pub fn symmetric_product_epoly<C: Coeff>(base: &Poly<C>, n: i64) -> Result<Poly<C>> {
    if n < 0 {
        return Err(Error::InvalidArgument(format!("negative symmetric power {n}")));
    }
    let b = betti_multiplicities(base)?;
    let mut series = ZSeries::one(n as usize);
    for (d, &mult) in b.iter().enumerate() {
        series.mul_inverse_power(d, 1, mult);
    }
    Ok(series.coeff(n as usize))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    type P = Poly<BigInt>;

    fn p(c: &[i64]) -> P {
        P::from_ints(c)
    }

    #[test]
    fn normalization() {
        assert_eq!(p(&[1, 2, 0, 0]).coeffs().len(), 2);
        assert!(p(&[0, 0]).is_zero());
        assert_eq!(p(&[]).degree(), None);
        assert_eq!(p(&[3, 0, 1]).degree(), Some(2));
    }

    #[test]
    fn ring_examples() {
        let a = p(&[1, 1]);
        assert_eq!(&a * &a, p(&[1, 2, 1]));
        assert!((&a * &P::zero()).is_zero());
        let lhs = &p(&[1, 1, 1]) * &p(&[1, 2, 5, 6, 5, 2, 1]);
        assert_eq!(lhs, p(&[1, 3, 8, 13, 16, 13, 8, 3, 1]));
        assert_eq!(&a - &a, P::zero());
        assert_eq!(a.scalar_mul(&BigInt::from(-3)), p(&[-3, -3]));
        assert_eq!(a.pow(3), p(&[1, 3, 3, 1]));
        assert_eq!(p(&[1, 2]).shift(2), p(&[0, 0, 1, 2]));
    }

    #[test]
    fn display_and_parse() {
        let x = p(&[1, 2, 5]);
        assert_eq!(x.to_string(), "1+2t+5t^2");
        assert_eq!(p(&[0, -1, 0, 3]).to_string(), "-t+3t^3");
        assert_eq!(P::zero().to_string(), "0");
        assert_eq!("1+2t+5t^2".parse::<P>().unwrap(), x);
        assert_eq!("t^2 - 3*t + 4".parse::<P>().unwrap(), p(&[4, -3, 1]));
        assert_eq!("-t".parse::<P>().unwrap(), p(&[0, -1]));
        // repeated exponents accumulate
        assert_eq!("1+2t+3t^3+2t^3+t^4".parse::<P>().unwrap(), p(&[1, 2, 0, 5, 1]));
        assert!("1+x".parse::<P>().is_err());
        assert!("".parse::<P>().is_err());
        assert!("t^".parse::<P>().is_err());
    }

    #[test]
    fn exact_division() {
        let a = p(&[1, 2, 2, 1]);
        assert_eq!(a.div_exact(&p(&[1, 1])).unwrap(), p(&[1, 1, 1]));
        assert_eq!(a.div_exact(&p(&[1, 3])), Err(Error::InexactDivision));
        assert_eq!(p(&[2, 4]).div_exact(&p(&[2])).unwrap(), p(&[1, 2]));
        assert_eq!(p(&[1, 4]).div_exact(&p(&[2])), Err(Error::InexactDivision));
        assert_eq!(a.div_exact(&P::zero()), Err(Error::InexactDivision));
    }

    #[test]
    fn q_integers() {
        assert!(q_int::<BigInt>(0).unwrap().is_zero());
        assert_eq!(q_int::<BigInt>(3).unwrap(), p(&[1, 1, 1]));
        assert_eq!(projective_space::<BigInt>(2).unwrap(), p(&[1, 1, 1]));
        assert!(q_int::<BigInt>(-1).is_err());
        assert_eq!(q_factorial::<BigInt>(0).unwrap(), P::one());
        assert_eq!(q_factorial::<BigInt>(2).unwrap(), p(&[1, 1]));
        assert_eq!(q_factorial::<BigInt>(3).unwrap(), p(&[1, 2, 2, 1]));
        assert!(q_factorial::<BigInt>(-2).is_err());
    }

    #[test]
    fn gaussian_binomials() {
        assert_eq!(gauss_binom::<BigInt>(6, 2), p(&[1, 1, 2, 2, 3, 2, 2, 1, 1]));
        assert_eq!(gauss_binom::<BigInt>(7, 0), P::one());
        assert_eq!(gauss_binom::<BigInt>(4, 2), p(&[1, 1, 2, 1, 1]));
        assert!(gauss_binom::<BigInt>(3, 4).is_zero());
        assert!(gauss_binom::<BigInt>(3, -1).is_zero());
        assert_eq!(grassmannian::<BigInt>(6, 2), gauss_binom(6, 2));
    }

    #[test]
    fn alternating_sums() {
        assert_eq!(gauss_alternating_sum::<BigInt>(0).unwrap(), P::one());
        assert!(gauss_alternating_sum::<BigInt>(1).unwrap().is_zero());
        assert!(gauss_alternating_sum::<BigInt>(5).unwrap().is_zero());
    }

    #[test]
    fn symmetric_products() {
        let p1 = p(&[1, 1]);
        // S^2 P^1 = P^2; brute force: z^2 coefficient of 1/((1−z)(1−tz)) is 1+t+t^2
        assert_eq!(symmetric_product_epoly(&p1, 2).unwrap(), p(&[1, 1, 1]));
        assert_eq!(symmetric_product_epoly(&p1, 0).unwrap(), P::one());
        let p2 = p(&[1, 1, 1]);
        assert_eq!(symmetric_product_epoly(&p2, 1).unwrap(), p2);
        // S^2 P^2: pairs {i<=j} of cells, weight t^{i+j}
        assert_eq!(symmetric_product_epoly(&p2, 2).unwrap(), p(&[1, 1, 2, 1, 1]));
        assert!(matches!(symmetric_product_epoly(&p(&[1, -1]), 2), Err(Error::NegativeCoefficient(_))));
    }

    #[test]
    fn palindromes() {
        assert!(p(&[1, 2, 1]).is_palindrome());
        assert!(p(&[1, 2, 6, 9, 12, 9, 6, 2, 1]).is_palindrome());
        assert!(!p(&[1, 2]).is_palindrome());
    }

    #[test]
    fn works_over_machine_integers() {
        let g: Poly<i64> = gauss_binom(6, 2);
        assert_eq!(g, Poly::from_ints(&[1, 1, 2, 2, 3, 2, 2, 1, 1]));
        assert_eq!(g.eval(&1), 15);
        let s: Poly<i128> = symmetric_product_epoly(&Poly::from_ints(&[1, 1]), 3).unwrap();
        assert_eq!(s, Poly::from_ints(&[1, 1, 1, 1]));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn binom(n: i64, k: i64) -> i64 {
            (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
        }

        fn poly_strategy() -> impl Strategy<Value = P> {
            prop::collection::vec(-30i64..30, 0..8).prop_map(|v| P::from_ints(&v))
        }

        #[test]
        fn gauss_binomial_tables() {
            for n in 0..=12i64 {
                assert_eq!(q_factorial::<BigInt>(n + 1).unwrap(), &q_factorial(n).unwrap() * &q_int(n + 1).unwrap());
                for k in 0..=n {
                    let g = gauss_binom::<BigInt>(n, k);
                    assert_eq!(g, gauss_binom(n, n - k));
                    assert_eq!(g.eval(&BigInt::from(1)), BigInt::from(binom(n, k)));
                    assert!(g.is_palindrome());
                    assert_eq!(g.degree(), Some((k * (n - k)) as usize));
                    assert!(g.coeffs().iter().all(|c| *c >= BigInt::from(0)));
                    if n >= 1 {
                        let pascal = &gauss_binom::<BigInt>(n - 1, k - 1) + &gauss_binom(n - 1, k).shift(k as usize);
                        assert_eq!(g, pascal, "Pascal recurrence at ({n},{k})");
                    }
                }
            }
            for n in 1..=20 {
                assert!(gauss_alternating_sum::<BigInt>(n).unwrap().is_zero());
            }
        }

        proptest! {
            #[test]
            fn ring_axioms(a in poly_strategy(), b in poly_strategy(), c in poly_strategy()) {
                prop_assert_eq!(&a * &b, &b * &a);
                prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
                prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
                prop_assert_eq!(&(&a + &b) - &b, a.clone());
            }

            #[test]
            fn display_parse_roundtrip(a in poly_strategy()) {
                prop_assert_eq!(a.to_string().parse::<P>().unwrap(), a);
            }

            #[test]
            fn division_inverts_multiplication(a in poly_strategy(), n in 1i64..6) {
                let d = q_factorial::<BigInt>(n).unwrap();
                prop_assert_eq!((&a * &d).div_exact(&d).unwrap(), a);
            }
        }
    }
}
