//! Exact Gaussian elimination over the rationals.

use num_traits::{One, Zero};

use crate::rational::Rational;

pub type Vector = Vec<Rational>;

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

pub fn is_zero_vector(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// Reduced row echelon form in place; returns the pivot columns.
///
/// Pivots are the first nonzero entry found scanning rows top to bottom.
pub fn rref(rows: &mut [Vector], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = Rational::one() / &rows[r][c];
        for x in rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x = &*x - &factor * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(rows: &[Vector]) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut m = rows.to_vec();
    rref(&mut m, ncols).len()
}

/// Basis of `{x : rows · x = 0}` in `Q^ncols`, one vector per free column in
/// increasing order, with that free variable set to 1 and the others to 0.
pub fn nullspace(rows: &[Vector], ncols: usize) -> Vec<Vector> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![Rational::zero(); ncols];
            x[f] = Rational::one();
            for (r, &pc) in pivots.iter().enumerate() {
                x[pc] = -m[r][f].clone();
            }
            x
        })
        .collect()
}

/// Coefficients `c` with `sum_i c_i * basis[i] = target`, if `target` lies in
/// the span. When `basis` is dependent the free coefficients are zero.
pub fn express_in_span(basis: &[Vector], target: &[Rational]) -> Option<Vector> {
    let k = basis.len();
    let m = target.len();
    // Columns are basis vectors, last column is the target.
    let mut rows: Vec<Vector> = (0..m)
        .map(|i| {
            let mut row: Vector = basis.iter().map(|b| b[i].clone()).collect();
            row.push(target[i].clone());
            row
        })
        .collect();
    let pivots = rref(&mut rows, k + 1);
    if pivots.contains(&k) {
        return None;
    }
    let mut c = vec![Rational::zero(); k];
    for (r, &pc) in pivots.iter().enumerate() {
        c[pc] = rows[r][k].clone();
    }
    Some(c)
}

/// Incrementally maintained row space, used for greedy basis selection.
#[derive(Debug, Clone)]
pub struct RowSpace {
    ncols: usize,
    // Echelon rows with their pivot column; each row's pivot entry is 1.
    rows: Vec<(usize, Vector)>,
}

impl RowSpace {
    pub fn new(ncols: usize) -> Self {
        Self {
            ncols,
            rows: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &[Rational]) -> Vector {
        let mut r = v.to_vec();
        for (pc, row) in &self.rows {
            if r[*pc].is_zero() {
                continue;
            }
            let f = r[*pc].clone();
            for (x, p) in r.iter_mut().zip(row) {
                if !p.is_zero() {
                    *x = &*x - &f * p;
                }
            }
        }
        r
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        is_zero_vector(&self.reduce(v))
    }

    /// Adds `v` if it is independent of the current rows; returns whether it was added.
    pub fn insert(&mut self, v: &[Rational]) -> bool {
        assert_eq!(v.len(), self.ncols);
        let mut r = self.reduce(v);
        let Some(pc) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = Rational::one() / &r[pc];
        for x in r.iter_mut() {
            *x = &*x * &inv;
        }
        self.rows.push((pc, r));
        true
    }
}
