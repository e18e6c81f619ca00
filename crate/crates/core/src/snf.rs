//! Smith normal form over ℤ and linear congruence systems `A x ≡ r (mod M)`.

use num_integer::Integer;

/// Result of reducing an integer matrix: `U · A · V = S` with `S` diagonal
/// and each diagonal entry dividing the next.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub diagonal: Vec<i128>,
    pub u: Vec<Vec<i128>>,
    pub v: Vec<Vec<i128>>,
    pub rows: usize,
    pub cols: usize,
}

fn identity(n: usize) -> Vec<Vec<i128>> {
    (0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect()
}

fn swap_rows(m: &mut [Vec<i128>], a: usize, b: usize) {
    m.swap(a, b);
}

fn swap_cols(m: &mut [Vec<i128>], a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

/// row[dst] -= q * row[src]
fn add_row(m: &mut [Vec<i128>], dst: usize, src: usize, q: i128) {
    let (s, d) = if src < dst {
        let (lo, hi) = m.split_at_mut(dst);
        (&lo[src], &mut hi[0])
    } else {
        let (lo, hi) = m.split_at_mut(src);
        (&hi[0], &mut lo[dst])
    };
    for (x, y) in d.iter_mut().zip(s.iter()) {
        *x -= q * y;
    }
}

/// col[dst] -= q * col[src]
fn add_col(m: &mut [Vec<i128>], dst: usize, src: usize, q: i128) {
    for row in m.iter_mut() {
        let s = row[src];
        row[dst] -= q * s;
    }
}

/// Computes the Smith normal form with unimodular transforms.
pub fn smith_normal_form(a: &[Vec<i64>]) -> SmithForm {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut s: Vec<Vec<i128>> = a.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut u = identity(rows);
    let mut v = identity(cols);
    let steps = rows.min(cols);
    let mut t = 0;
    while t < steps {
        // pivot: smallest nonzero magnitude in the trailing block
        let mut pivot = None;
        for i in t..rows {
            for j in t..cols {
                if s[i][j] != 0 && pivot.is_none_or(|(pi, pj): (usize, usize)| s[i][j].abs() < s[pi][pj].abs()) {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        swap_rows(&mut s, t, pi);
        swap_rows(&mut u, t, pi);
        swap_cols(&mut s, t, pj);
        swap_cols(&mut v, t, pj);

        let mut dirty = false;
        for i in t + 1..rows {
            if s[i][t] != 0 {
                let q = Integer::div_floor(&s[i][t], &s[t][t]);
                add_row(&mut s, i, t, q);
                add_row(&mut u, i, t, q);
                dirty |= s[i][t] != 0;
            }
        }
        for j in t + 1..cols {
            if s[t][j] != 0 {
                let q = Integer::div_floor(&s[t][j], &s[t][t]);
                add_col(&mut s, j, t, q);
                add_col(&mut v, j, t, q);
                dirty |= s[t][j] != 0;
            }
        }
        if dirty {
            continue;
        }
        // divisibility of the trailing block by the pivot
        let p = s[t][t];
        let offending = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| s[i][j] % p != 0));
        if let Some(i) = offending {
            add_row(&mut s, t, i, -1);
            add_row(&mut u, t, i, -1);
            continue;
        }
        if p < 0 {
            for x in s[t].iter_mut() {
                *x = -*x;
            }
            for x in u[t].iter_mut() {
                *x = -*x;
            }
        }
        t += 1;
    }
    let diagonal = (0..steps).map(|k| s[k][k]).collect();
    SmithForm { diagonal, u, v, rows, cols }
}

/// Solves `A x ≡ r (mod m)`; returns one solution with entries in `[0, m)`.
pub fn solve_congruences(a: &[Vec<i64>], r: &[i64], m: i64) -> Option<Vec<i64>> {
    assert!(m > 0, "modulus must be positive");
    let rows = a.len();
    assert_eq!(rows, r.len(), "right-hand side length");
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let snf = smith_normal_form(a);
    let m128 = m as i128;
    let ur: Vec<i128> = snf
        .u
        .iter()
        .map(|row| {
            row.iter().zip(r).map(|(x, y)| (x.rem_euclid(m128) * (*y as i128).rem_euclid(m128)) % m128).sum::<i128>()
                % m128
        })
        .collect();
    let mut y = vec![0i128; cols];
    for i in 0..rows {
        let d = if i < snf.diagonal.len() { snf.diagonal[i].rem_euclid(m128) } else { 0 };
        let c = ur[i];
        if d == 0 {
            if c != 0 {
                return None;
            }
            continue;
        }
        let g = d.gcd(&m128);
        if c % g != 0 {
            return None;
        }
        let mg = m128 / g;
        let inv = mod_inverse(d / g, mg)?;
        y[i] = ((c / g) % mg * inv).rem_euclid(mg);
    }
    let x = (0..cols)
        .map(|i| {
            let acc: i128 = (0..cols).map(|j| snf.v[i][j].rem_euclid(m128) * y[j] % m128).sum();
            acc.rem_euclid(m128) as i64
        })
        .collect();
    Some(x)
}

fn mod_inverse(a: i128, m: i128) -> Option<i128> {
    if m == 1 {
        return Some(0);
    }
    let e = a.rem_euclid(m).extended_gcd(&m);
    if e.gcd != 1 {
        return None;
    }
    Some(e.x.rem_euclid(m))
}
