//! Exact linear programs in a handful of variables, solved by enumerating
//! every vertex of the feasible polytope.
//!
//! Callers must make the feasible region bounded (or at least bound the
//! objective); no unboundedness detection is attempted.

/// `coef · x <= bound`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Row<const D: usize> {
    pub coef: [f64; D],
    pub bound: f64,
}

impl<const D: usize> Row<D> {
    pub fn new(coef: [f64; D], bound: f64) -> Self {
        Row { coef, bound }
    }

    fn slack(&self, x: &[f64; D]) -> f64 {
        self.bound - dot(&self.coef, x)
    }
}

const FEAS_TOL: f64 = 1e-10;
const PIVOT_TOL: f64 = 1e-12;

fn dot<const D: usize>(a: &[f64; D], b: &[f64; D]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Solves the square system formed by the selected rows held at equality.
fn solve<const D: usize>(rows: &[Row<D>], pick: &[usize; D]) -> Option<[f64; D]> {
    let mut m = [[0.0; D]; D];
    let mut rhs = [0.0; D];
    for (i, &r) in pick.iter().enumerate() {
        m[i] = rows[r].coef;
        rhs[i] = rows[r].bound;
    }
    for col in 0..D {
        let piv = (col..D).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))?;
        if m[piv][col].abs() < PIVOT_TOL {
            return None;
        }
        m.swap(col, piv);
        rhs.swap(col, piv);
        for r in 0..D {
            if r != col {
                let f = m[r][col] / m[col][col];
                if f != 0.0 {
                    for c in col..D {
                        m[r][c] -= f * m[col][c];
                    }
                    rhs[r] -= f * rhs[col];
                }
            }
        }
    }
    let mut x = [0.0; D];
    for i in 0..D {
        x[i] = rhs[i] / m[i][i];
    }
    Some(x)
}

/// Advances `idx` to the next `D`-subset of `0..n` in lexicographic order.
fn next_combination<const D: usize>(idx: &mut [usize; D], n: usize) -> bool {
    let mut i = D;
    while i > 0 {
        i -= 1;
        if idx[i] < n - D + i {
            idx[i] += 1;
            for j in i + 1..D {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Maximizes `objective · x` subject to `rows`. Returns `None` when the
/// polytope has no vertex (empty, or too few independent rows).
///
/// Among vertices with equal objective the first one in lexicographic
/// row-subset order wins.
pub(crate) fn maximize<const D: usize>(
    objective: &[f64; D],
    rows: &[Row<D>],
) -> Option<(f64, [f64; D])> {
    let n = rows.len();
    if n < D {
        return None;
    }
    let mut idx = [0usize; D];
    for (i, v) in idx.iter_mut().enumerate() {
        *v = i;
    }
    let mut best: Option<(f64, [f64; D])> = None;
    loop {
        if let Some(x) = solve(rows, &idx) {
            let feasible = rows
                .iter()
                .all(|r| r.slack(&x) >= -FEAS_TOL * (1.0 + r.bound.abs()));
            if feasible {
                let v = dot(objective, &x);
                if best.is_none_or(|(b, _)| v > b + 1e-13) {
                    best = Some((v, x));
                }
            }
        }
        if !next_combination(&mut idx, n) {
            break;
        }
    }
    best
}
