//! Integer kernels and Hermite normal forms for small dense matrices.

use crate::scalar::LatticeInt;

/// Applies `(col_a, col_b) ← (s·col_a + t·col_b, u·col_a + v·col_b)` to every row.
fn combine_columns<I: LatticeInt>(m: &mut [Vec<I>], a: usize, b: usize, [s, t, u, v]: [I; 4]) {
    for row in m.iter_mut() {
        let (x, y) = (row[a], row[b]);
        row[a] = s * x + t * y;
        row[b] = u * x + v * y;
    }
}

/// A basis of `{x ∈ Z^n : A x = 0}` for the `m × n` matrix `rows`.
///
/// Column operations reduce `A` to lower echelon form while the same
/// unimodular operations accumulate in `U`; the columns of `U` beyond the
/// pivots span the kernel. The result is returned in Hermite normal form.
pub fn kernel_basis<I: LatticeInt>(rows: &[Vec<I>], n: usize) -> Vec<Vec<I>> {
    let mut a: Vec<Vec<I>> = rows.to_vec();
    let mut u: Vec<Vec<I>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { I::one() } else { I::zero() }).collect())
        .collect();
    let mut pivot = 0;
    for i in 0..a.len() {
        if pivot == n {
            break;
        }
        for j in pivot + 1..n {
            let (x, y) = (a[i][pivot], a[i][j]);
            if y.is_zero() {
                continue;
            }
            let eg = x.extended_gcd(&y);
            let (g, s, t) = (eg.gcd, eg.x, eg.y);
            let ops = [s, t, -(y / g), x / g];
            combine_columns(&mut a, pivot, j, ops);
            combine_columns(&mut u, pivot, j, ops);
        }
        if !a[i][pivot].is_zero() {
            pivot += 1;
        }
    }
    let kernel: Vec<Vec<I>> = (pivot..n).map(|c| u.iter().map(|row| row[c]).collect()).collect();
    hermite_rows(kernel)
}

/// Row-style Hermite normal form: pivots positive and strictly increasing,
/// entries above each pivot reduced into `[0, pivot)`, zero rows dropped.
pub fn hermite_rows<I: LatticeInt>(mut m: Vec<Vec<I>>) -> Vec<Vec<I>> {
    let ncols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        for i in r + 1..m.len() {
            let (x, y) = (m[r][c], m[i][c]);
            if y.is_zero() {
                continue;
            }
            let eg = x.extended_gcd(&y);
            let (g, s, t) = (eg.gcd, eg.x, eg.y);
            let (p, q) = (-(y / g), x / g);
            for k in 0..ncols {
                let (a, b) = (m[r][k], m[i][k]);
                m[r][k] = s * a + t * b;
                m[i][k] = p * a + q * b;
            }
        }
        if m[r][c].is_zero() {
            continue;
        }
        if m[r][c] < I::zero() {
            for v in m[r].iter_mut() {
                *v = -*v;
            }
        }
        let piv = m[r][c];
        for i in 0..r {
            let f = m[i][c].div_floor(&piv);
            if !f.is_zero() {
                for k in 0..ncols {
                    let d = m[r][k];
                    m[i][k] = m[i][k] - f * d;
                }
            }
        }
        r += 1;
    }
    m.truncate(r);
    m
}
