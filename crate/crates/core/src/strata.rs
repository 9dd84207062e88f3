//! S-equivalence stratum types of the contracted Brill–Noether moduli space
//! `M̄_H(r·e0 − a·ω)`, i.e. the pieces
//! `∏_i S^{n_i} M_H(r_i e0 − a_i ω)^{μ-s, lf} × S^l X`.

use std::cmp::Ordering;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::LatticeInt;

/// One factor `S^{n} M_H(r·e0 − a·ω)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Part<I> {
    pub r: I,
    pub a: I,
    pub n: I,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct StratumType<I> {
    /// Sorted by `(r, a)`, which are pairwise distinct.
    pub parts: Vec<Part<I>>,
    /// Number of punctual factors.
    pub l: I,
}

impl<I: LatticeInt> StratumType<I> {
    /// `Σ n_i r_i`.
    pub fn total_rank(&self) -> I {
        self.parts.iter().fold(I::zero(), |acc, p| acc + p.n * p.r)
    }

    /// `l + Σ n_i a_i`.
    pub fn total_a(&self) -> I {
        self.parts.iter().fold(self.l, |acc, p| acc + p.n * p.a)
    }

    /// Checks the three defining constraints plus canonical form.
    pub fn is_valid(&self, rk_e0: I, a: I, r: I) -> bool {
        let parts_ok = self.parts.iter().all(|p| p.r >= I::one() && p.n >= I::one() && p.a * rk_e0 >= p.r);
        let sorted = self.parts.windows(2).all(|w| (w[0].r, w[0].a) < (w[1].r, w[1].a));
        parts_ok && sorted && self.l >= I::zero() && self.total_a() == a && self.total_rank() <= r
    }

    /// Renders as `{(r,a,n),...}+l`.
    pub fn label(&self) -> String {
        let parts: Vec<String> = self.parts.iter().map(|p| format!("({},{},{})", p.r, p.a, p.n)).collect();
        format!("{{{}}}+{}", parts.join(","), self.l)
    }
}

impl<I: LatticeInt> PartialOrd for StratumType<I> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical order: `Σ n_i r_i`, then parts lexicographically, then `l`.
impl<I: LatticeInt> Ord for StratumType<I> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_rank()
            .cmp(&other.total_rank())
            .then_with(|| self.parts.cmp(&other.parts))
            .then_with(|| self.l.cmp(&other.l))
    }
}

fn check_inputs<I: LatticeInt>(rk_e0: I, a: I, r: I) -> Result<()> {
    if rk_e0 < I::one() {
        return Err(Error::NonPositiveRank(rk_e0.as_i64()));
    }
    if a < I::zero() {
        return Err(Error::InvalidArgument(format!("a must be nonnegative, got {a}")));
    }
    if r < I::one() {
        return Err(Error::InvalidArgument(format!("r must be at least 1, got {r}")));
    }
    Ok(())
}

/// All stratum types for `r·e0 − a·ω`, in canonical order.
///
/// Only `rk(e0)` enters. Valid for any `a ≥ 0`, `r ≥ 1`; whether the
/// Brill–Noether index `a·rk(e0) − r` is nonnegative is reported by
/// [`strata_report`].
pub fn enumerate_strata<I: LatticeInt>(rk: I, a: I, r: I) -> Result<Vec<StratumType<I>>> {
    check_inputs(rk, a, r)?;
    let mut slots = Vec::new();
    let mut ri = I::one();
    while ri <= r {
        let mut ai = I::one();
        while ai <= a {
            if ai * rk >= ri {
                slots.push((ri, ai));
            }
            ai = ai + I::one();
        }
        ri = ri + I::one();
    }
    let mut out = Vec::new();
    descend(&slots, 0, a, r, &mut Vec::new(), &mut out);
    out.sort();
    Ok(out)
}

fn descend<I: LatticeInt>(
    slots: &[(I, I)],
    from: usize,
    a_left: I,
    r_left: I,
    parts: &mut Vec<Part<I>>,
    out: &mut Vec<StratumType<I>>,
) {
    out.push(StratumType { parts: parts.clone(), l: a_left });
    for (idx, &(r, a)) in slots.iter().enumerate().skip(from) {
        let mut n = I::one();
        while n * a <= a_left && n * r <= r_left {
            parts.push(Part { r, a, n });
            descend(slots, idx + 1, a_left - n * a, r_left - n * r, parts, out);
            parts.pop();
            n = n + I::one();
        }
    }
}

/// `Σ n_i (2 r_i a_i rk(e0) − r_i² + 1) + 2l`.
pub fn stratum_dim<I: LatticeInt>(rk: I, st: &StratumType<I>) -> I {
    let parts = st.parts.iter().fold(I::zero(), |acc, p| {
        acc + p.n * (I::lit(2) * p.r * p.a * rk - p.r * p.r + I::one())
    });
    parts + I::lit(2) * st.l
}

/// `dim Hom(F, E0) = a·rk(e0) − Σ n_i r_i` for a polystable `F` of the given type.
pub fn hom_dim<I: LatticeInt>(rk_e0: I, st: &StratumType<I>, a: I) -> I {
    a * rk_e0 - st.total_rank()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StratumRow<I> {
    pub stratum: StratumType<I>,
    pub label: String,
    pub dim: I,
    pub hom_dim: I,
}

/// A boundary stratum whose dimension is not below that of some
/// single-part top stratum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrderingViolation {
    pub boundary: String,
    pub top: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StrataReport<I> {
    pub rk_e0: I,
    pub a: I,
    pub r: I,
    /// `n = a·rk(e0) − r`.
    pub index: I,
    /// False when `n < 0`, outside the Brill–Noether range.
    pub index_ok: bool,
    /// False when `r·rk(e0) < 2`, where the normality statement is not claimed.
    pub hypothesis_ok: bool,
    pub rows: Vec<StratumRow<I>>,
    /// Pairs breaking "every boundary stratum is smaller than every
    /// single-part top stratum". Informational only.
    pub ordering_violations: Vec<OrderingViolation>,
}

pub fn strata_report<I: LatticeInt>(rk_e0: I, a: I, r: I) -> Result<StrataReport<I>> {
    let strata = enumerate_strata(rk_e0, a, r)?;
    let rows: Vec<StratumRow<I>> = strata
        .into_iter()
        .map(|st| StratumRow { dim: stratum_dim(rk_e0, &st), hom_dim: hom_dim(rk_e0, &st, a), label: st.label(), stratum: st })
        .collect();
    let tops: Vec<&StratumRow<I>> =
        rows.iter().filter(|row| row.stratum.total_rank() == r && row.stratum.parts.len() == 1).collect();
    let mut ordering_violations = Vec::new();
    for b in rows.iter().filter(|row| row.stratum.total_rank() < r) {
        for t in &tops {
            if b.dim >= t.dim {
                ordering_violations.push(OrderingViolation { boundary: b.label.clone(), top: t.label.clone() });
            }
        }
    }
    let index = a * rk_e0 - r;
    Ok(StrataReport {
        rk_e0,
        a,
        r,
        index,
        index_ok: index >= I::zero(),
        hypothesis_ok: r * rk_e0 >= I::lit(2),
        rows,
        ordering_violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn st(parts: &[(i64, i64, i64)], l: i64) -> StratumType<i64> {
        StratumType { parts: parts.iter().map(|&(r, a, n)| Part { r, a, n }).collect(), l }
    }

    #[test]
    fn small_case() {
        let p = 1;
        let got = enumerate_strata(p, 2, 1).unwrap();
        assert_eq!(got, vec![st(&[], 2), st(&[(1, 1, 1)], 1), st(&[(1, 2, 1)], 0)]);
        let dims: Vec<i64> = got.iter().map(|s| stratum_dim(p, s)).collect();
        assert_eq!(dims, vec![4, 4, 4]);
        assert_eq!(hom_dim(p, &got[1], 2), 1);
        assert_eq!(got[1].label(), "{(1,1,1)}+1");
    }

    #[test]
    fn zero_a() {
        for r in 1..=4 {
            for rk in 1..=2 {
                assert_eq!(enumerate_strata(rk, 0, r).unwrap(), vec![st(&[], 0)]);
            }
        }
    }

    #[test]
    fn rank_two_e0() {
        let p = 2;
        let got = enumerate_strata(p, 1, 2).unwrap();
        assert_eq!(got, vec![st(&[], 1), st(&[(1, 1, 1)], 0), st(&[(2, 1, 1)], 0)]);
        assert!(got.iter().all(|s| s.is_valid(2, 1, 2)));
    }

    #[test]
    fn punctual_stratum() {
        let p = 1;
        assert_eq!(stratum_dim(p, &st(&[], 3)), 6);
        assert_eq!(hom_dim(p, &st(&[], 3), 3), 3);
        assert_eq!(stratum_dim(p, &st(&[(1, 2, 1)], 0)), 4);
    }

    #[test]
    fn report_flags() {
        let rep = strata_report(1, 2, 1).unwrap();
        assert!(!rep.hypothesis_ok);
        assert!(rep.index_ok);
        assert_eq!(rep.index, 1);
        assert!(!rep.ordering_violations.is_empty());
        let rep = strata_report(1, 1, 3).unwrap();
        assert!(rep.hypothesis_ok);
        assert!(!rep.index_ok);
        assert!(enumerate_strata(1, -1, 1).is_err());
        assert!(enumerate_strata(1, 1, 0).is_err());
        assert_eq!(enumerate_strata(0, 1, 1), Err(Error::NonPositiveRank(0)));
    }

    #[test]
    fn canonical_order() {
        let got = enumerate_strata(2, 4, 5).unwrap();
        assert!(got.windows(2).all(|w| w[0] < w[1]));
        assert!(got.windows(2).all(|w| w[0].total_rank() <= w[1].total_rank()));
    }
}
