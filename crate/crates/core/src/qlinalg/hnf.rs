//! Hermite and Smith normal forms over the integers.

use super::int::Int;
use super::matrix::IntMatrix;

fn col_combine(a: &mut IntMatrix, i: usize, c: usize, j: usize) {
    // unimodular 2-column step zeroing a[i][j] against a[i][c]
    let (g, x, y) = a[(i, c)].ext_gcd(&a[(i, j)]);
    let u = a[(i, c)].div_exact(&g);
    let v = a[(i, j)].div_exact(&g);
    for r in 0..a.rows() {
        let ac = a[(r, c)].clone();
        let aj = a[(r, j)].clone();
        if ac.is_zero() && aj.is_zero() {
            continue;
        }
        a[(r, c)] = &(&x * &ac) + &(&y * &aj);
        a[(r, j)] = &(&u * &aj) - &(&v * &ac);
    }
}

fn col_axpy(a: &mut IntMatrix, dst: usize, q: &Int, src: usize, from_row: usize) {
    // dst -= q * src
    for r in from_row..a.rows() {
        if !a[(r, src)].is_zero() {
            let t = q * &a[(r, src)];
            a[(r, dst)] -= &t;
        }
    }
}

/// Column Hermite normal form: the returned matrix has `rank` columns spanning
/// the same lattice, in lower echelon shape. Each column's first nonzero entry
/// (its pivot) is positive and sits strictly below the previous column's
/// pivot; entries to the left of a pivot lie in `[0, pivot)`.
pub fn column_hnf(m: &IntMatrix) -> IntMatrix {
    let mut a = m.clone();
    let (rows, cols) = (a.rows(), a.cols());
    let mut c = 0;
    for i in 0..rows {
        if c == cols {
            break;
        }
        for j in c + 1..cols {
            if !a[(i, j)].is_zero() {
                if a[(i, c)].is_zero() {
                    a.swap_cols(c, j);
                } else {
                    col_combine(&mut a, i, c, j);
                }
            }
        }
        if a[(i, c)].is_zero() {
            continue;
        }
        if a[(i, c)].is_negative() {
            for r in i..rows {
                a[(r, c)] = -&a[(r, c)];
            }
        }
        let piv = a[(i, c)].clone();
        for j in 0..c {
            let q = a[(i, j)].div_floor(&piv);
            if !q.is_zero() {
                col_axpy(&mut a, j, &q, c, i);
            }
        }
        c += 1;
    }
    IntMatrix::from_fn(rows, c, |r, j| a[(r, j)].clone())
}

/// Column HNF of the full-rank lattice spanned by `gens` together with
/// `moduli[i] * e_i`. Intermediate entries are kept reduced modulo the row's
/// modulus, so nothing grows past the moduli.
pub fn modular_hnf(gens: &[Vec<Int>], moduli: &[Int]) -> IntMatrix {
    let k = moduli.len();
    let mut pool: Vec<Vec<Int>> = gens
        .iter()
        .map(|g| {
            assert_eq!(g.len(), k, "generator length mismatch");
            g.iter().zip(moduli).map(|(v, n)| v.mod_floor(n)).collect()
        })
        .filter(|g: &Vec<Int>| g.iter().any(|v| !v.is_zero()))
        .collect();
    let mut basis = IntMatrix::zeros(k, k);
    for i in 0..k {
        let mut piv: Vec<Int> = vec![Int::ZERO; k];
        piv[i] = moduli[i].clone();
        for col in pool.iter_mut() {
            if col[i].is_zero() {
                continue;
            }
            let (g, x, y) = piv[i].ext_gcd(&col[i]);
            let u = piv[i].div_exact(&g);
            let v = col[i].div_exact(&g);
            for r in i..k {
                let (p, c) = (piv[r].clone(), col[r].clone());
                piv[r] = (&(&x * &p) + &(&y * &c)).mod_floor(&moduli[r]);
                col[r] = (&(&u * &c) - &(&v * &p)).mod_floor(&moduli[r]);
            }
            // row i of the pivot is the gcd, which divides moduli[i]
            piv[i] = g;
        }
        pool.retain(|c| c.iter().any(|v| !v.is_zero()));
        for (r, v) in piv.into_iter().enumerate() {
            basis[(r, i)] = v;
        }
    }
    reduce_lower(&mut basis);
    basis
}

/// Reduces a square lower-triangular basis with positive diagonal so that
/// every entry left of a pivot lies in `[0, pivot)`.
pub fn reduce_lower(b: &mut IntMatrix) {
    let k = b.rows();
    for i in 0..k {
        let piv = b[(i, i)].clone();
        debug_assert!(!piv.is_negative() && !piv.is_zero());
        for j in 0..i {
            let q = b[(i, j)].div_floor(&piv);
            if !q.is_zero() {
                col_axpy(b, j, &q, i, i);
            }
        }
    }
}

/// Solves `l x = b` over the integers for square lower-triangular `l` with
/// nonzero diagonal; `None` when the solution is not integral.
pub fn solve_lower_triangular(l: &IntMatrix, b: &[Int]) -> Option<Vec<Int>> {
    let k = l.rows();
    assert_eq!(b.len(), k);
    let mut x: Vec<Int> = Vec::with_capacity(k);
    for i in 0..k {
        let mut rhs = b[i].clone();
        for (j, xj) in x.iter().enumerate() {
            if !l[(i, j)].is_zero() && !xj.is_zero() {
                rhs -= &(&l[(i, j)] * xj);
            }
        }
        let d = &l[(i, i)];
        if !d.divides(&rhs) {
            return None;
        }
        x.push(rhs.div_exact(d));
    }
    Some(x)
}

/// Smith normal form diagonal `d_1 | d_2 | ...`, of length `min(rows, cols)`,
/// non-negative, zeros last.
pub fn smith_normal_form(m: &IntMatrix) -> Vec<Int> {
    let mut a = m.clone();
    let (rows, cols) = (a.rows(), a.cols());
    let n = rows.min(cols);
    let mut diag = Vec::with_capacity(n);
    for t in 0..n {
        let Some((pi, pj)) = min_abs_entry(&a, t) else {
            break;
        };
        a.swap_rows(t, pi);
        a.swap_cols(t, pj);
        loop {
            let mut changed = false;
            // clear column t below the pivot
            for i in t + 1..rows {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let q = a[(i, t)].div_floor(&a[(t, t)]);
                for j in t..cols {
                    let s = &q * &a[(t, j)];
                    a[(i, j)] -= &s;
                }
                if !a[(i, t)].is_zero() {
                    a.swap_rows(t, i);
                    changed = true;
                }
            }
            // clear row t right of the pivot
            for j in t + 1..cols {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let q = a[(t, j)].div_floor(&a[(t, t)]);
                for i in t..rows {
                    let s = &q * &a[(i, t)];
                    a[(i, j)] -= &s;
                }
                if !a[(t, j)].is_zero() {
                    a.swap_cols(t, j);
                    changed = true;
                }
            }
            if changed {
                continue;
            }
            // divisibility: fold an offending row into row t
            let piv = a[(t, t)].clone();
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !piv.divides(&a[(i, j)])));
            match bad {
                Some(i) => {
                    for j in t..cols {
                        let v = a[(i, j)].clone();
                        a[(t, j)] += &v;
                    }
                }
                None => break,
            }
        }
        diag.push(a[(t, t)].abs());
    }
    diag.resize(n, Int::ZERO);
    diag
}

fn min_abs_entry(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            let v = &a[(i, j)];
            if v.is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| v.abs() < a[(bi, bj)].abs()) {
                best = Some((i, j));
                if v.is_unit() {
                    return best;
                }
            }
        }
    }
    best
}

/// The invariant factors greater than one.
pub fn nontrivial_invariants(m: &IntMatrix) -> Vec<Int> {
    smith_normal_form(m)
        .into_iter()
        .filter(|d| !d.is_one())
        .collect()
}
