//! The closed-form pairing, dual and twist against an independent
//! Chern-character model: a class is `(r, c1, ch2)` with `ch2` kept doubled,
//! `χ(x, y) = ∫ ch(x)^∨ ch(y) td(X)`, `ch(x ⊗ O(D)) = ch(x)·e^D`.

use proptest::prelude::*;

use ratmod::{Divisor, KClass, PairingCtx, SurfaceModel};

#[derive(Debug, Clone, PartialEq)]
struct Ch {
    r: i64,
    c1: Vec<i64>,
    ch2x2: i64,
}

struct Model {
    gram: Vec<Vec<i64>>,
    k: Vec<i64>,
}

impl Model {
    fn of(s: &SurfaceModel) -> Self {
        Self { gram: s.gram().to_vec(), k: s.canonical().coords().to_vec() }
    }

    fn dot(&self, u: &[i64], v: &[i64]) -> i64 {
        let n = u.len();
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| u[i] * self.gram[i][j] * v[j]).sum()
    }

    fn ch(&self, x: &KClass) -> Ch {
        // χ = r + c1·(−K)/2 + ch2
        Ch { r: x.r, c1: x.c1.coords().to_vec(), ch2x2: 2 * x.chi - 2 * x.r + self.dot(x.c1.coords(), &self.k) }
    }

    fn chi_doubled(&self, x: &Ch) -> i64 {
        2 * x.r - self.dot(&x.c1, &self.k) + x.ch2x2
    }

    /// `2∫ ch(x)^∨ ch(y) td`.
    fn pairing_doubled(&self, x: &Ch, y: &Ch) -> i64 {
        let prod = Ch {
            r: x.r * y.r,
            c1: (0..x.c1.len()).map(|i| x.r * y.c1[i] - y.r * x.c1[i]).collect(),
            ch2x2: x.r * y.ch2x2 + y.r * x.ch2x2 - 2 * self.dot(&x.c1, &y.c1),
        };
        self.chi_doubled(&prod)
    }

    fn twist(&self, x: &Ch, d: &[i64]) -> Ch {
        Ch {
            r: x.r,
            c1: (0..d.len()).map(|i| x.c1[i] + x.r * d[i]).collect(),
            ch2x2: x.ch2x2 + 2 * self.dot(&x.c1, d) + x.r * self.dot(d, d),
        }
    }

    fn dual(&self, x: &Ch) -> Ch {
        Ch { r: x.r, c1: x.c1.iter().map(|c| -c).collect(), ch2x2: x.ch2x2 }
    }
}

fn surfaces() -> Vec<SurfaceModel> {
    let f1 = SurfaceModel::custom(
        2,
        vec![vec![-1, 1], vec![1, 0]],
        Divisor::new(vec![-2, -3]),
        Divisor::new(vec![1, 2]),
    )
    .expect("F_1 with H = C + 2F");
    vec![SurfaceModel::p2(), SurfaceModel::p1xp1(1).unwrap(), SurfaceModel::p1xp1(4).unwrap(), f1]
}

fn class_on(rho: usize) -> impl Strategy<Value = KClass> {
    (-12i64..12, prop::collection::vec(-12i64..12, rho), -30i64..30).prop_map(|(r, c, chi)| KClass::new(r, Divisor::new(c), chi))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn pairing_matches_riemann_roch(
        (idx, x, y) in (0usize..4).prop_flat_map(|i| {
            let rho = surfaces()[i].rho();
            (Just(i), class_on(rho), class_on(rho))
        })
    ) {
        let s = &surfaces()[idx];
        let ctx = PairingCtx::new(s.clone());
        let m = Model::of(s);
        prop_assert_eq!(2 * ctx.euler_pairing(&x, &y).unwrap(), m.pairing_doubled(&m.ch(&x), &m.ch(&y)));
        prop_assert_eq!(2 * x.chi, m.chi_doubled(&m.ch(&x)));
    }

    #[test]
    fn twist_and_dual_match_chern_characters(x in class_on(2), d in prop::collection::vec(-6i64..6, 2), idx in 1usize..4) {
        let s = &surfaces()[idx];
        let ctx = PairingCtx::new(s.clone());
        let m = Model::of(s);
        let twisted = ctx.twist(&x, &Divisor::new(d.clone())).unwrap();
        prop_assert_eq!(m.ch(&twisted), m.twist(&m.ch(&x), &d));
        prop_assert_eq!(m.ch(&ctx.dual(&x).unwrap()), m.dual(&m.ch(&x)));
    }

    #[test]
    fn exceptional_line_bundles(d in prop::collection::vec(-6i64..6, 2), idx in 1usize..4) {
        let s = &surfaces()[idx];
        let ctx = PairingCtx::new(s.clone());
        let line = ctx.twist(&ctx.structure_sheaf(), &Divisor::new(d)).unwrap();
        prop_assert_eq!(ctx.euler_pairing(&line, &line).unwrap(), 1);
    }
}

#[test]
fn p2_small_values() {
    let s = SurfaceModel::p2();
    let ctx = PairingCtx::new(s.clone());
    let m = Model::of(&s);
    let o = ctx.structure_sheaf();
    // ch(O(n)) = (1, n, n²)
    for n in -4..=4 {
        let line = ctx.twist(&o, &Divisor::new(vec![n])).unwrap();
        assert_eq!(m.ch(&line), Ch { r: 1, c1: vec![n], ch2x2: n * n });
        assert_eq!(line.chi, (n + 1) * (n + 2) / 2);
    }
    // the point class has ch = (0, 0, 1)
    assert_eq!(m.ch(&ctx.point_class()), Ch { r: 0, c1: vec![0], ch2x2: 2 });
}
