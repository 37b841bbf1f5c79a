//! Small dense complex matrices. Only the verification oracles use these;
//! the simulator itself never builds a full operator.

use num_complex::Complex64;
use std::f64::consts::PI;

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

/// Square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(dim: usize) -> Self {
        CMatrix {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = ONE;
        }
        m
    }

    /// Builds a matrix from rows; panics if the rows are not square.
    pub fn from_rows(rows: &[Vec<C64>]) -> Self {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            assert_eq!(row.len(), dim, "matrix rows must be square");
            data.extend_from_slice(row);
        }
        CMatrix { dim, data }
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Self {
        let rows: Vec<Vec<C64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.data[row * self.dim + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: C64) {
        self.data[row * self.dim + col] = value;
    }

    #[inline]
    pub fn add_to(&mut self, row: usize, col: usize, value: C64) {
        self.data[row * self.dim + col] += value;
    }

    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    pub fn column(&self, col: usize) -> Vec<C64> {
        (0..self.dim).map(|r| self.get(r, col)).collect()
    }

    pub fn set_column(&mut self, col: usize, values: &[C64]) {
        for (r, v) in values.iter().enumerate() {
            self.set(r, col, *v);
        }
    }

    /// `self · rhs`. Zero entries of `self` are skipped, which keeps products
    /// of permutation and Kronecker-structured factors cheap.
    pub fn mul(&self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, rhs.dim);
        let n = self.dim;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            let out_row = &mut out.data[i * n..(i + 1) * n];
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                let rhs_row = &rhs.data[k * n..(k + 1) * n];
                for (o, b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.dim, v.len());
        (0..self.dim)
            .map(|i| {
                self.data[i * self.dim..(i + 1) * self.dim]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    pub fn adjoint(&self) -> CMatrix {
        let n = self.dim;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        out
    }

    pub fn kron(&self, rhs: &CMatrix) -> CMatrix {
        let (a, b) = (self.dim, rhs.dim);
        let n = a * b;
        let mut out = CMatrix::zeros(n);
        for i in 0..a {
            for j in 0..a {
                let x = self.get(i, j);
                if x == ZERO {
                    continue;
                }
                for k in 0..b {
                    for l in 0..b {
                        out.data[(i * b + k) * n + (j * b + l)] = x * rhs.get(k, l);
                    }
                }
            }
        }
        out
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// max |(U†U − I)_{ij}|.
    pub fn unitarity_error(&self) -> f64 {
        self.adjoint()
            .mul(self)
            .max_abs_diff(&CMatrix::identity(self.dim))
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_error() <= tol
    }

    /// True when every row and every column holds exactly one entry equal to 1
    /// and all others are exactly 0.
    pub fn is_permutation(&self) -> bool {
        let n = self.dim;
        let mut col_hits = vec![0usize; n];
        for i in 0..n {
            let mut row_hits = 0;
            for j in 0..n {
                let v = self.get(i, j);
                if v == ONE {
                    row_hits += 1;
                    col_hits[j] += 1;
                } else if v != ZERO {
                    return false;
                }
            }
            if row_hits != 1 {
                return false;
            }
        }
        col_hits.iter().all(|&c| c == 1)
    }

    /// Phase-insensitive distance, see [`phase_distance`].
    pub fn phase_distance(&self, other: &CMatrix) -> f64 {
        assert_eq!(self.dim, other.dim);
        phase_distance(&self.data, &other.data)
    }
}

fn max_dist_at(a: &[C64], b: &[C64], phase: f64) -> f64 {
    let w = C64::from_polar(1.0, phase);
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - w * y).norm())
        .fold(0.0, f64::max)
}

/// `min_φ max_k |a_k − e^{iφ} b_k|`.
///
/// The minimum is located from the overlap phase `arg Σ conj(b_k) a_k`, a
/// 720-point scan of the circle, and a golden-section refinement around the
/// best candidate.
pub fn phase_distance(a: &[C64], b: &[C64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let overlap: C64 = a.iter().zip(b).map(|(x, y)| y.conj() * x).sum();
    let mut best_phase = overlap.arg();
    let mut best = max_dist_at(a, b, best_phase);
    if best == 0.0 {
        return 0.0;
    }
    const GRID: usize = 720;
    let h = 2.0 * PI / GRID as f64;
    for k in 0..GRID {
        let phase = k as f64 * h;
        let d = max_dist_at(a, b, phase);
        if d < best {
            best = d;
            best_phase = phase;
        }
    }
    let (mut lo, mut hi) = (best_phase - h, best_phase + h);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..80 {
        let m1 = hi - g * (hi - lo);
        let m2 = lo + g * (hi - lo);
        if max_dist_at(a, b, m1) < max_dist_at(a, b, m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    best.min(max_dist_at(a, b, 0.5 * (lo + hi)))
}
