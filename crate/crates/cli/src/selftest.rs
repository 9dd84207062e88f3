//! Bundled consistency checks. The shipped configs and base-case table are
//! compiled in, so `ratmod selftest` needs no files at runtime.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use ratmod::io::{build_spec, parse_label, BaseCaseTable, CaseSource, SeriesConfig};
use ratmod::numerics::moduli_dim;
use ratmod::qpoly::{gauss_alternating_sum, gauss_binom};
use ratmod::series::{closed_form_p2, extend_series, reassemble, relation_residual};
use ratmod::strata::{enumerate_strata, hom_dim};
use ratmod::{hilb_epoly, BettiData, Divisor, KClass, PairingCtx, QPoly, SeriesOutput, SeriesSpec, SurfaceModel};

use crate::{paint, Emit, Outcome, EXIT_INCONSISTENT, EXIT_OK};

const BASE_CASES: &str = include_str!("../../../data/base_cases.json");
const CONFIGS: [(&str, &str); 4] = [
    ("a", include_str!("../../../data/series/p2_series_a.json")),
    ("b", include_str!("../../../data/series/p2_series_b.json")),
    ("c", include_str!("../../../data/series/p2_series_c.json")),
    ("sanity", include_str!("../../../data/series/p2_sanity.json")),
];

type Check = Result<(), String>;
/// A stratum as `(parts (r, a, n), l)`.
type RawStratum = (Vec<(i64, i64, i64)>, i64);
type Visit<'a> = &'a mut dyn FnMut(&[(i64, i64, i64)]);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn q(c: &[i64]) -> QPoly {
    QPoly::from_ints(c)
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn p2() -> PairingCtx {
    PairingCtx::new(SurfaceModel::p2())
}

fn label(s: &str) -> Result<KClass, String> {
    parse_label(&p2(), s).map_err(err)
}

fn series(name: &str) -> Result<(SeriesSpec, SeriesOutput), String> {
    let text = CONFIGS.iter().find(|(n, _)| *n == name).map(|(_, t)| *t).ok_or("unknown series")?;
    let table: BaseCaseTable = serde_json::from_str(BASE_CASES).map_err(err)?;
    let spec = build_spec(&SeriesConfig::parse(text, false).map_err(err)?, Some(&table)).map_err(err)?;
    let out = extend_series(&spec).map_err(err)?;
    ensure!(out.is_consistent(), "series {name}: {:?}", out.diagnostics);
    Ok((spec, out))
}

fn rows(out: &SeriesOutput, spec: &SeriesSpec, expected: &[(i64, &str, &[i64])]) -> Check {
    for &(k, lab, coeffs) in expected {
        ensure!(spec.class_at(k) == label(lab)?, "index {k} is not {lab}");
        ensure!(out.values[&k] == q(coeffs), "{lab}: got {}", out.values[&k]);
    }
    Ok(())
}

fn partitions(n: usize, max: usize) -> usize {
    if n == 0 {
        return 1;
    }
    (1..=max.min(n)).map(|f| partitions(n - f, f)).sum()
}

/// Betti numbers of Hilb^n P^2 from torus-fixed points (triples of
/// partitions, cell dimension `n + ℓ(α) − ℓ(γ)`), grouped by lengths.
fn hilb_cells(n: usize) -> QPoly {
    // p(m, l): partitions of m with exactly l parts
    let p = |m: usize, l: usize| -> i64 {
        fn go(m: usize, l: usize, max: usize) -> i64 {
            if l == 0 {
                return (m == 0) as i64;
            }
            (1..=max.min(m)).map(|f| go(m - f, l - 1, f)).sum()
        }
        if m == 0 && l == 0 { 1 } else { go(m, l, m) }
    };
    let mut c = vec![0i64; 2 * n + 1];
    for na in 0..=n {
        for nb in 0..=n - na {
            let nc = n - na - nb;
            let mid = partitions(nb, nb) as i64;
            for la in 0..=na {
                for lg in 0..=nc {
                    c[n + la - lg] += p(na, la) * mid * p(nc, lg);
                }
            }
        }
    }
    q(&c)
}

fn c1() -> Check {
    let expected: [&[i64]; 3] = [&[1, 2, 3, 2, 1], &[1, 2, 5, 6, 5, 2, 1], &[1, 2, 6, 10, 13, 10, 6, 2, 1]];
    for (n, want) in (2..=4).zip(expected) {
        let got: QPoly = hilb_epoly(&BettiData::p2(), n);
        ensure!(got == q(want), "Hilb^{n} = {got}");
        ensure!(got == hilb_cells(n), "Hilb^{n} disagrees with the cell count");
    }
    let table: BaseCaseTable = serde_json::from_str(BASE_CASES).map_err(err)?;
    for (lab, case) in &table.cases {
        if case.source == CaseSource::Goettsche {
            let c = label(lab)?;
            let got: QPoly = ratmod::goettsche::rank1_moduli_epoly(&p2(), &c.c1, c.chi).map_err(err)?;
            ensure!(table.get(lab).map_err(err)?.1 == got, "table row {lab}");
        }
    }
    Ok(())
}

fn c2() -> Check {
    let (spec, out) = series("a")?;
    rows(
        &out,
        &spec,
        &[(1, "(2,H,1)", &[1, 2, 6, 9, 12, 9, 6, 2, 1]), (2, "(3,H,2)", &[1, 2, 5, 8, 10, 8, 5, 2, 1]), (3, "(4,H,3)", &[1, 1, 3, 3, 3, 1, 1])],
    )
}

fn c3() -> Check {
    let (spec, out) = series("b")?;
    rows(
        &out,
        &spec,
        &[
            (2, "(3,H,1)", &[1, 2, 6, 12, 24, 38, 54, 59, 54, 38, 24, 12, 6, 2, 1]),
            (3, "(4,H,2)", &[1, 2, 5, 10, 18, 28, 38, 42, 38, 28, 18, 10, 5, 2, 1]),
            (4, "(5,H,3)", &[1, 1, 3, 5, 8, 10, 12, 10, 8, 5, 3, 1, 1]),
        ],
    )
}

fn c4() -> Check {
    let (spec, out) = series("c")?;
    rows(
        &out,
        &spec,
        &[
            (2, "(5,-2H,-1)", &[1, 2, 5, 8, 13, 14, 13, 8, 5, 2, 1]),
            (3, "(7,-3H,-1)", &[1, 2, 4, 6, 9, 10, 9, 6, 4, 2, 1]),
            (4, "(9,-4H,-1)", &[1, 1, 2, 2, 3, 2, 2, 1, 1]),
        ],
    )?;
    ensure!(out.values[&4] == gauss_binom(6, 2), "values[4] is not e(Gr(6,2))");
    Ok(())
}

fn c5() -> Check {
    let (_, out) = series("sanity")?;
    ensure!(out.values[&0] == hilb_cells(2), "values[0] = {}", out.values[&0]);
    ensure!(out.values[&2] == q(&[1, 1, 1]), "values[2] = {}", out.values[&2]);
    Ok(())
}

fn c6() -> Check {
    let (_, a) = series("a")?;
    let (_, c) = series("c")?;
    let exc = q(&[0, 1, 1, 1]);
    ensure!(a.values[&0] == &a.values[&3] + &(&q(&[1, 1, 1]) * &exc), "M(1,H,0) blow-up identity");
    ensure!(c.values[&1] == &gauss_binom::<BigInt>(6, 2) + &(&hilb_cells(2) * &exc), "M(3,-H,-1) blow-up identity");
    Ok(())
}

fn c7() -> Check {
    for n in 1..=20 {
        ensure!(gauss_alternating_sum::<BigInt>(n).map_err(err)?.is_zero(), "alternating sum n = {n}");
    }
    for n in 1..=12i64 {
        for k in 1..n {
            let g: QPoly = gauss_binom(n, k);
            let pascal = &gauss_binom::<BigInt>(n - 1, k - 1) + &gauss_binom::<BigInt>(n - 1, k).shift(k as usize);
            ensure!(g == pascal, "Pascal [{n} {k}]");
            ensure!(g == gauss_binom(n, n - k), "symmetry [{n} {k}]");
            ensure!(g.eval(&BigInt::from(1)) == BigInt::from(binom(n, k)), "t = 1 at [{n} {k}]");
        }
    }
    Ok(())
}

fn binom(n: i64, k: i64) -> i64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn c8() -> Check {
    for (name, _) in CONFIGS {
        let (spec, out) = series(name)?;
        let p = spec.params();
        for l in (p.a - p.s + 1).max(spec.k_min())..=p.a {
            ensure!(relation_residual(&spec, &out, l).map_err(err)?.is_zero(), "{name}: residual at l = {l}");
        }
        for (&k, v) in &out.values {
            ensure!(&reassemble(&spec, &out, k).map_err(err)? == v, "{name}: reassembly at k = {k}");
        }
    }
    Ok(())
}

fn c9() -> Check {
    let ctx = p2();
    for (name, _) in CONFIGS {
        let (spec, out) = series(name)?;
        for (&k, v) in out.values.iter().filter(|(_, v)| !v.is_zero()) {
            let dim = moduli_dim(&ctx, &spec.class_at(k)).map_err(err)?;
            ensure!(v.is_palindrome(), "{name} k = {k}: not palindromic");
            ensure!(v.coeff(0) == BigInt::from(1), "{name} k = {k}: constant term");
            ensure!(v.degree() == Some(dim as usize), "{name} k = {k}: degree vs dim {dim}");
        }
    }
    Ok(())
}

fn c10() -> Check {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    for surface in [SurfaceModel::p2(), SurfaceModel::p1xp1(1).map_err(err)?, SurfaceModel::p1xp1(3).map_err(err)?] {
        let ctx = PairingCtx::new(surface.clone());
        let rho = surface.rho();
        let mut draw = || {
            let c: Vec<i64> = (0..rho).map(|_| rng.random_range(-20..20)).collect();
            KClass::new(rng.random_range(-20..20), Divisor::new(c), rng.random_range(-40..40))
        };
        for _ in 0..10_000 {
            let (e0, x, y) = (draw(), draw(), draw());
            let lhs = ctx.euler_pairing(&x, &ctx.reflect_right(&e0, &y).map_err(err)?).map_err(err)?;
            let rhs = ctx.euler_pairing(&ctx.reflect_left(&e0, &x).map_err(err)?, &y).map_err(err)?;
            ensure!(lhs == rhs, "adjunction fails at {x:?}, {y:?}, {e0:?}");
            let mixed = &x.c1.scale(y.r) - &y.c1.scale(x.r);
            let defect = ctx.intersect(surface.canonical(), &mixed).map_err(err)?;
            ensure!(ctx.symmetry_defect(&x, &y).map_err(err)? == defect, "defect identity fails at {x:?}, {y:?}");
        }
    }
    Ok(())
}

fn c11() -> Check {
    for n in 1..=4i64 {
        let ctx = PairingCtx::new(SurfaceModel::p1xp1(n).map_err(err)?);
        let l = Divisor::new(vec![-1, n + 1]);
        ensure!(ctx.intersect(&l, ctx.surface().polarization()).map_err(err)? == 1, "L.H at n = {n}");
        ensure!(-ctx.intersect(&l, ctx.surface().canonical()).map_err(err)? == 2 * n, "s at n = {n}");
        ensure!(ctx.twist(&ctx.structure_sheaf(), &l).map_err(err)?.chi == 0, "chi(L) at n = {n}");
        for r in 1..=2 * n {
            let e = ctx.class(1 + r, &[-1, n + 1], r).map_err(err)?;
            ensure!(moduli_dim(&ctx, &e).map_err(err)? == r * (2 * n - r), "dim at n = {n}, r = {r}");
        }
    }
    Ok(())
}

fn c12() -> Check {
    for rk in 1..=2i64 {
        for a in 0..=5i64 {
            for r in 1..=5i64 {
                let got = enumerate_strata(rk, a, r).map_err(err)?;
                let brute = brute_strata(rk, a, r);
                let mut mine: Vec<_> = got.iter().map(|s| (s.parts.iter().map(|p| (p.r, p.a, p.n)).collect::<Vec<_>>(), s.l)).collect();
                mine.sort();
                ensure!(mine == brute, "strata differ at rk {rk}, a {a}, r {r}");
                for st in &got {
                    let h = hom_dim(rk, st, a);
                    ensure!(h >= a * rk - r && st.total_rank() <= r, "membership at {}", st.label());
                }
            }
        }
    }
    Ok(())
}

/// All canonical multisets of parts `(r_i, a_i, n_i)`, `r_i ≤ r`, `a_i ≤ a`,
/// `n_i ≤ a`, filtered by the stratum constraints (`Σ n_i ≤ a` bounds the
/// search since valid parts have `a_i ≥ 1`).
fn brute_strata(rk: i64, a: i64, r: i64) -> Vec<RawStratum> {
    let slots: Vec<(i64, i64)> = (1..=r).flat_map(|ri| (0..=a).map(move |ai| (ri, ai))).collect();
    let mut out = Vec::new();
    fn walk(i: usize, budget: i64, slots: &[(i64, i64)], cur: &mut Vec<(i64, i64, i64)>, f: Visit) {
        if i == slots.len() {
            f(cur);
            return;
        }
        walk(i + 1, budget, slots, cur, f);
        for n in 1..=budget {
            cur.push((slots[i].0, slots[i].1, n));
            walk(i + 1, budget - n, slots, cur, f);
            cur.pop();
        }
    }
    walk(0, a, &slots, &mut Vec::new(), &mut |parts| {
        let sa: i64 = parts.iter().map(|p| p.2 * p.1).sum();
        let sr: i64 = parts.iter().map(|p| p.2 * p.0).sum();
        if parts.iter().all(|p| p.1 * rk >= p.0) && sa <= a && sr <= r {
            out.push((parts.to_vec(), a - sa));
        }
    });
    out.sort();
    out
}

fn c13() -> Check {
    for name in ["a", "b", "c"] {
        let (spec, out) = series(name)?;
        let a = spec.params().a;
        let base: BTreeMap<i64, QPoly> = out.values.range(..=a - 3).map(|(k, v)| (*k, v.clone())).collect();
        let forms = closed_form_p2(&spec, &base).map_err(err)?;
        for (i, f) in forms.iter().enumerate() {
            let k = a - 2 + i as i64;
            ensure!(f == &out.values[&k], "series {name}: closed form at k = {k}");
        }
    }
    Ok(())
}

pub type Criterion = (&'static str, fn() -> Check);

pub const CRITERIA: [Criterion; 13] = [
    ("Goettsche base cases", c1),
    ("series A table rows", c2),
    ("series B table rows", c3),
    ("series C table rows and Gr(6,2)", c4),
    ("sanity series", c5),
    ("blow-up identities", c6),
    ("q-identities", c7),
    ("relation residuals and reassembly", c8),
    ("palindromic, constant term 1, degree = dim", c9),
    ("pairing adjunction and defect identity", c10),
    ("P1xP1 Grassmannian example", c11),
    ("strata enumerator vs brute force", c12),
    ("closed forms agree with the recursion", c13),
];

#[derive(Debug, Clone, Serialize)]
pub struct CheckLine {
    pub criterion: usize,
    pub title: &'static str,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

pub fn results() -> Vec<CheckLine> {
    CRITERIA
        .iter()
        .enumerate()
        .map(|(i, (title, f))| {
            let r = f();
            CheckLine { criterion: i + 1, title, passed: r.is_ok(), detail: r.err() }
        })
        .collect()
}

pub fn run(emit: Emit, color: bool) -> Outcome {
    let lines = results();
    let all = lines.iter().all(|l| l.passed);
    let stdout = match emit {
        Emit::Json => crate::to_json(&lines),
        Emit::Csv => crate::csv_string(
            &["criterion", "title", "passed", "detail"],
            lines.iter().map(|l| {
                vec![l.criterion.to_string(), l.title.to_string(), l.passed.to_string(), l.detail.clone().unwrap_or_default()]
            }),
        )
        .unwrap_or_default(),
        Emit::Text => {
            let mut out = String::new();
            for l in &lines {
                let tag = paint(if l.passed { "PASS" } else { "FAIL" }, l.passed, color);
                let _ = write!(out, "{tag} {:>2} {}", l.criterion, l.title);
                if let Some(d) = &l.detail {
                    let _ = write!(out, ": {d}");
                }
                out.push('\n');
            }
            let passed = lines.iter().filter(|l| l.passed).count();
            let _ = writeln!(out, "{passed}/{} checks passed", lines.len());
            out
        }
    };
    Outcome { code: if all { EXIT_OK } else { EXIT_INCONSISTENT }, stdout, stderr: String::new() }
}
