//! Standalone mod-p arithmetic used as an oracle against the library's
//! exact linear algebra. Nothing here calls back into the solver.

#![allow(dead_code, clippy::needless_range_loop)]

use altder::Algebra;

/// Structure constants `c[i][j][k]` reduced mod `p`; the library only
/// supplies the table.
pub fn table_mod_p(a: &Algebra, p: u64) -> Vec<Vec<Vec<u64>>> {
    let d = a.dim();
    let mut c = vec![vec![vec![0; d]; d]; d];
    for i in 0..d {
        for j in 0..d {
            for (k, coef) in a.entries(i, j) {
                let r = coef
                    .residue()
                    .or_else(|| {
                        let q = coef.as_rational()?;
                        let num = i64::try_from(q.numer()).ok()?;
                        let den = i64::try_from(q.denom()).ok()?;
                        Some(mul(reduce(num, p), inv(reduce(den, p), p), p))
                    })
                    .expect("prime field or small rational constants");
                c[i][j][*k] = r;
            }
        }
    }
    c
}

pub fn reduce(x: i64, p: u64) -> u64 {
    x.rem_euclid(p as i64) as u64
}

pub fn mul(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn inv(a: u64, p: u64) -> u64 {
    let mut result = 1;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = mul(result, base, p);
        }
        base = mul(base, base, p);
        e >>= 1;
    }
    result
}

/// Plain Gaussian elimination.
pub fn rank(mut rows: Vec<Vec<u64>>, p: u64) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(pivot) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, pivot);
        let s = inv(rows[r][c], p);
        for x in rows[r].iter_mut() {
            *x = mul(*x, s, p);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row[c] != 0 {
                let f = row[c];
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x = (*x + p - mul(f, *y, p)) % p;
                }
            }
        }
        r += 1;
    }
    r
}

fn permute_columns(rows: Vec<Vec<u64>>, perm: &[usize]) -> Vec<Vec<u64>> {
    rows.into_iter()
        .map(|row| perm.iter().map(|&j| row[j]).collect())
        .collect()
}

/// `dim Der(A)` mod `p`, with the `d²` unknowns `D[r][c]` presented to the
/// eliminator in the order `perm`.
pub fn der_dim(c: &[Vec<Vec<u64>>], p: u64, perm: &[usize]) -> usize {
    let d = c.len();
    let var = |r: usize, col: usize| r * d + col;
    let mut rows = Vec::new();
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                let mut row = vec![0u64; d * d];
                for m in 0..d {
                    let add = |row: &mut Vec<u64>, v: usize, x: u64, neg: bool| {
                        let x = if neg { (p - x % p) % p } else { x % p };
                        row[v] = (row[v] + x) % p;
                    };
                    add(&mut row, var(k, m), c[i][j][m], false);
                    add(&mut row, var(m, i), c[m][j][k], true);
                    add(&mut row, var(m, j), c[i][m][k], true);
                }
                rows.push(row);
            }
        }
    }
    d * d - rank(permute_columns(rows, perm), p)
}

/// `dim` of the `f`-projection of `{(f, g) : g(xy) = f(x)y + x f(y)}`, the
/// `2d²` unknowns presented in the order `perm`.
pub fn qder_dim(c: &[Vec<Vec<u64>>], p: u64, perm: &[usize]) -> usize {
    let d = c.len();
    let n = d * d;
    let f = |r: usize, col: usize| r * d + col;
    let g = |r: usize, col: usize| n + r * d + col;
    let mut rows = Vec::new();
    let mut g_rows = Vec::new();
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                let mut row = vec![0u64; 2 * n];
                let mut grow = vec![0u64; n];
                for m in 0..d {
                    row[g(k, m)] = (row[g(k, m)] + c[i][j][m]) % p;
                    grow[k * d + m] = (grow[k * d + m] + c[i][j][m]) % p;
                    row[f(m, i)] = (row[f(m, i)] + p - c[m][j][k] % p) % p;
                    row[f(m, j)] = (row[f(m, j)] + p - c[i][m][k] % p) % p;
                }
                rows.push(row);
                g_rows.push(grow);
            }
        }
    }
    let total = 2 * n - rank(permute_columns(rows, perm), p);
    let g_only = n - rank(g_rows, p);
    total - g_only
}

/// Fixed pseudo-random permutation `u ↦ (u·a + b) mod n` (needs `gcd(a, n) = 1`).
pub fn affine_perm(n: usize, a: usize, b: usize) -> Vec<usize> {
    let perm: Vec<usize> = (0..n).map(|u| (u * a + b) % n).collect();
    let mut seen = vec![false; n];
    for &x in &perm {
        assert!(!seen[x], "not a permutation");
        seen[x] = true;
    }
    perm
}

/// The split-octonion vector-matrix product, written out directly on
/// `(α, u, v, β)` with integer coordinates mod `p`.
pub fn zorn_mul(x: &[u64; 8], y: &[u64; 8], p: u64) -> [u64; 8] {
    let (a, u, v, b) = (x[0], [x[2], x[3], x[4]], [x[5], x[6], x[7]], x[1]);
    let (g, t, w, dd) = (y[0], [y[2], y[3], y[4]], [y[5], y[6], y[7]], y[1]);
    let dot = |l: [u64; 3], r: [u64; 3]| (0..3).fold(0, |s, i| (s + mul(l[i], r[i], p)) % p);
    let cross = |l: [u64; 3], r: [u64; 3]| {
        [
            (mul(l[1], r[2], p) + p - mul(l[2], r[1], p)) % p,
            (mul(l[2], r[0], p) + p - mul(l[0], r[2], p)) % p,
            (mul(l[0], r[1], p) + p - mul(l[1], r[0], p)) % p,
        ]
    };
    let vw = cross(v, w);
    let ut = cross(u, t);
    let mut out = [0; 8];
    out[0] = (mul(a, g, p) + dot(u, w)) % p;
    out[1] = (mul(b, dd, p) + dot(v, t)) % p;
    for i in 0..3 {
        out[2 + i] = (mul(a, t[i], p) + mul(dd, u[i], p) + p - vw[i]) % p;
        out[5 + i] = (mul(g, v[i], p) + mul(b, w[i], p) + ut[i]) % p;
    }
    out
}

/// `n = αβ − (u, v)` on the same coordinates.
pub fn zorn_norm(x: &[u64; 8], p: u64) -> u64 {
    let uv = (0..3).fold(0, |s, i| (s + mul(x[2 + i], x[5 + i], p)) % p);
    (mul(x[0], x[1], p) + p - uv) % p
}
