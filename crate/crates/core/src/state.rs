//! Small dense state vectors and matrices for the conserved quantities.
//!
//! Systems here are tiny (N = 1 or 2 for every built-in model), so states
//! are stack-allocated up to N = 4 and all linear algebra is direct.

use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Sub};

use smallvec::SmallVec;

/// A point u in the state space Ω ⊂ R^N.
#[derive(Clone, PartialEq)]
pub struct State(SmallVec<[f64; 4]>);

impl State {
    pub fn new(components: &[f64]) -> Self {
        State(SmallVec::from_slice(components))
    }

    pub fn zeros(dim: usize) -> Self {
        State(smallvec::smallvec![0.0; dim])
    }

    pub fn scalar(u: f64) -> Self {
        State(smallvec::smallvec![u])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn dot(&self, other: &State) -> f64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.0.iter().zip(other.0.iter()).map(|(a, b)| a * b).sum()
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn norm_inf(&self) -> f64 {
        self.0.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Sum of absolute components; the jump weight used for total variation.
    pub fn norm_l1(&self) -> f64 {
        self.0.iter().map(|x| x.abs()).sum()
    }

    pub fn normalized(&self) -> State {
        let n = self.norm();
        self * (1.0 / n)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|x| x.is_finite())
    }

    /// Linear interpolation (1-θ)·self + θ·other.
    pub fn lerp(&self, other: &State, theta: f64) -> State {
        let mut out = self.clone();
        for (o, b) in out.0.iter_mut().zip(other.0.iter()) {
            *o += theta * (b - *o);
        }
        out
    }
}

impl fmt::Debug for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "State{:?}", self.as_slice())
    }
}

impl Index<usize> for State {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl IndexMut<usize> for State {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.0[i]
    }
}

impl Add for &State {
    type Output = State;
    fn add(self, rhs: &State) -> State {
        let mut out = self.clone();
        for (o, b) in out.0.iter_mut().zip(rhs.0.iter()) {
            *o += b;
        }
        out
    }
}

impl Sub for &State {
    type Output = State;
    fn sub(self, rhs: &State) -> State {
        let mut out = self.clone();
        for (o, b) in out.0.iter_mut().zip(rhs.0.iter()) {
            *o -= b;
        }
        out
    }
}

impl Mul<f64> for &State {
    type Output = State;
    fn mul(self, k: f64) -> State {
        let mut out = self.clone();
        for o in out.0.iter_mut() {
            *o *= k;
        }
        out
    }
}

impl AddAssign<&State> for State {
    fn add_assign(&mut self, rhs: &State) {
        for (o, b) in self.0.iter_mut().zip(rhs.0.iter()) {
            *o += b;
        }
    }
}

/// Axpy-style update: self += k·rhs.
impl State {
    pub fn add_scaled(&mut self, k: f64, rhs: &State) {
        for (o, b) in self.0.iter_mut().zip(rhs.0.iter()) {
            *o += k * b;
        }
    }
}

/// Dense row-major N×N matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat {
    n: usize,
    data: SmallVec<[f64; 16]>,
}

impl Mat {
    pub fn zeros(n: usize) -> Self {
        Mat {
            n,
            data: smallvec::smallvec![0.0; n * n],
        }
    }

    pub fn from_rows(rows: &[&[f64]]) -> Self {
        let n = rows.len();
        let mut m = Mat::zeros(n);
        for (i, r) in rows.iter().enumerate() {
            for (j, v) in r.iter().enumerate() {
                m[(i, j)] = *v;
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn matvec(&self, v: &State) -> State {
        let mut out = State::zeros(self.n);
        for i in 0..self.n {
            let mut s = 0.0;
            for j in 0..self.n {
                s += self[(i, j)] * v[j];
            }
            out[i] = s;
        }
        out
    }

    /// Row i as a covector.
    pub fn row(&self, i: usize) -> State {
        let mut out = State::zeros(self.n);
        for j in 0..self.n {
            out[j] = self[(i, j)];
        }
        out
    }

    pub fn col(&self, j: usize) -> State {
        let mut out = State::zeros(self.n);
        for i in 0..self.n {
            out[i] = self[(i, j)];
        }
        out
    }

    pub fn set_col(&mut self, j: usize, v: &State) {
        for i in 0..self.n {
            self[(i, j)] = v[i];
        }
    }

    /// Solves A·x = b by Gaussian elimination with partial pivoting.
    /// Returns None when the pivot falls below 1e-300 (singular).
    pub fn solve(&self, b: &State) -> Option<State> {
        let n = self.n;
        let mut a = self.clone();
        let mut x = b.clone();
        for k in 0..n {
            let mut piv = k;
            for i in (k + 1)..n {
                if a[(i, k)].abs() > a[(piv, k)].abs() {
                    piv = i;
                }
            }
            if a[(piv, k)].abs() < 1e-300 {
                return None;
            }
            if piv != k {
                for j in 0..n {
                    let t = a[(k, j)];
                    a[(k, j)] = a[(piv, j)];
                    a[(piv, j)] = t;
                }
                let t = x[k];
                x[k] = x[piv];
                x[piv] = t;
            }
            for i in (k + 1)..n {
                let f = a[(i, k)] / a[(k, k)];
                for j in k..n {
                    a[(i, j)] -= f * a[(k, j)];
                }
                x[i] -= f * x[k];
            }
        }
        for k in (0..n).rev() {
            let mut s = x[k];
            for j in (k + 1)..n {
                s -= a[(k, j)] * x[j];
            }
            x[k] = s / a[(k, k)];
        }
        Some(x)
    }

    /// Matrix inverse via column-wise solves.
    pub fn inverse(&self) -> Option<Mat> {
        let n = self.n;
        let mut out = Mat::zeros(n);
        for j in 0..n {
            let mut e = State::zeros(n);
            e[j] = 1.0;
            let col = self.solve(&e)?;
            out.set_col(j, &col);
        }
        Some(out)
    }
}

impl Index<(usize, usize)> for Mat {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n + j]
    }
}
