//! Gaussian elimination over the rational-function field.
//!
//! Every answer is generic: it holds away from the zero set of the pivots,
//! which are reported alongside the result.

use super::rational::Scalar;
use crate::error::{Error, Result};

/// A dense matrix of scalars, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    n: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize, n: usize) -> Self {
        Matrix {
            rows,
            cols,
            n,
            data: vec![Scalar::zero(n); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>, n: usize) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Malformed("ragged matrix rows".into()));
        }
        if rows.iter().flatten().any(|s| s.chart_dim() != n) {
            return Err(Error::Malformed("matrix entry from another chart".into()));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            n,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn chart_dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows, self.n);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                Scalar::sum_in(
                    self.n,
                    self.row(i)
                        .iter()
                        .zip(v)
                        .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                        .map(|(a, b)| a * b),
                )
            })
            .collect()
    }
}

/// `matrix · c = rhs`.
#[derive(Clone, Debug)]
pub struct LinearSystem {
    pub matrix: Matrix,
    pub rhs: Vec<Scalar>,
}

impl LinearSystem {
    pub fn new(matrix: Matrix, rhs: Vec<Scalar>) -> Result<Self> {
        if rhs.len() != matrix.rows() {
            return Err(Error::Malformed(format!(
                "right-hand side has {} entries for {} rows",
                rhs.len(),
                matrix.rows()
            )));
        }
        if rhs.iter().any(|s| s.chart_dim() != matrix.chart_dim()) {
            return Err(Error::Malformed("right-hand side from another chart".into()));
        }
        Ok(LinearSystem { matrix, rhs })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub particular: Vec<Scalar>,
    /// Basis of the homogeneous solution space.
    pub nullspace: Vec<Vec<Scalar>>,
    /// Non-constant pivots divided by; the solution is valid where none vanish.
    pub denominators: Vec<Scalar>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveOutcome {
    Solved(Solution),
    /// Inconsistent: elimination produced the equation `0 = residual`.
    NoSolution { residual: Scalar },
}

impl SolveOutcome {
    pub fn solution(&self) -> Option<&Solution> {
        match self {
            SolveOutcome::Solved(s) => Some(s),
            SolveOutcome::NoSolution { .. } => None,
        }
    }
}

struct Echelon {
    /// reduced rows (augmented with rhs column if present)
    rows: Vec<Vec<Scalar>>,
    /// pivot column for each of the first `pivots.len()` rows
    pivots: Vec<usize>,
    denominators: Vec<Scalar>,
}

/// Reduced row echelon form over the first `ncols` columns of `rows`.
fn reduce(mut rows: Vec<Vec<Scalar>>, ncols: usize) -> Echelon {
    let mut pivots = Vec::new();
    let mut denominators: Vec<Scalar> = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == rows.len() {
            break;
        }
        // choose the simplest nonzero entry as the pivot
        let best = (r..rows.len())
            .filter(|&i| !rows[i][col].is_zero())
            .min_by_key(|&i| rows[i][col].complexity());
        let Some(p) = best else { continue };
        rows.swap(r, p);
        let piv = rows[r][col].clone();
        if !piv.is_constant() && !denominators.contains(&piv) {
            denominators.push(piv.clone());
        }
        let inv = piv.inv().expect("pivot is nonzero");
        if !inv.is_one() {
            rows[r] = rows[r]
                .iter()
                .map(|x| if x.is_zero() { x.clone() } else { x * &inv })
                .collect();
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x = &*x - &(&factor * p);
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    Echelon {
        rows,
        pivots,
        denominators,
    }
}

/// Solves the system; see [`SolveOutcome`].
pub fn solve_linear(sys: &LinearSystem) -> SolveOutcome {
    let m = &sys.matrix;
    let n = m.chart_dim();
    let ncols = m.cols();
    let rows: Vec<Vec<Scalar>> = (0..m.rows())
        .map(|i| {
            let mut row = m.row(i).to_vec();
            row.push(sys.rhs[i].clone());
            row
        })
        .collect();
    let ech = reduce(rows, ncols);
    let rank = ech.pivots.len();
    if let Some(row) = ech.rows[rank..].iter().find(|row| !row[ncols].is_zero()) {
        return SolveOutcome::NoSolution {
            residual: row[ncols].clone(),
        };
    }
    let mut particular = vec![Scalar::zero(n); ncols];
    for (k, &pc) in ech.pivots.iter().enumerate() {
        particular[pc] = ech.rows[k][ncols].clone();
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !ech.pivots.contains(c)).collect();
    let nullspace = free
        .iter()
        .map(|&fc| {
            let mut v = vec![Scalar::zero(n); ncols];
            v[fc] = Scalar::one(n);
            for (k, &pc) in ech.pivots.iter().enumerate() {
                v[pc] = -&ech.rows[k][fc];
            }
            v
        })
        .collect();
    SolveOutcome::Solved(Solution {
        particular,
        nullspace,
        denominators: ech.denominators,
    })
}

/// Rank over the rational-function field, i.e. at a generic point of the chart.
pub fn generic_rank(m: &Matrix) -> usize {
    rank_with_pivots(m).0
}

/// Generic rank together with the non-constant pivots used to reach it.
/// The rank can only drop where one of those pivots vanishes.
pub fn rank_with_pivots(m: &Matrix) -> (usize, Vec<Scalar>) {
    let rows: Vec<Vec<Scalar>> = (0..m.rows()).map(|i| m.row(i).to_vec()).collect();
    let ech = reduce(rows, m.cols());
    (ech.pivots.len(), ech.denominators)
}

/// Basis of `{ v : m v = 0 }`.
pub fn nullspace(m: &Matrix) -> Vec<Vec<Scalar>> {
    let sys = LinearSystem {
        matrix: m.clone(),
        rhs: vec![Scalar::zero(m.chart_dim()); m.rows()],
    };
    match solve_linear(&sys) {
        SolveOutcome::Solved(s) => s.nullspace,
        SolveOutcome::NoSolution { .. } => unreachable!("homogeneous systems are consistent"),
    }
}
