//! Square matrices over `Z_p`, `p` prime.

use std::fmt;

use rand::Rng;

use super::modular::{inv_mod_prime, mul_mod};
use crate::error::{Error, Result};

/// Rejection-sampling budget for invertible draws.
pub const INVERTIBLE_RETRY_BUDGET: usize = 100;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matrix {
    n: usize,
    p: u64,
    entries: Vec<u64>,
}

impl Matrix {
    pub fn new(n: usize, p: u64, entries: Vec<u64>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::Parse(format!("expected {} entries, got {}", n * n, entries.len())));
        }
        if let Some(e) = entries.iter().find(|&&e| e >= p) {
            return Err(Error::Parse(format!("entry {e} not reduced mod {p}")));
        }
        Ok(Self { n, p, entries })
    }

    pub fn identity(n: usize, p: u64) -> Self {
        let mut entries = vec![0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1;
        }
        Self { n, p, entries }
    }

    pub fn zero(n: usize, p: u64) -> Self {
        Self { n, p, entries: vec![0; n * n] }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.entries[i * self.n + j] = v % self.p;
    }

    fn check(&self, other: &Matrix) {
        assert!(self.n == other.n && self.p == other.p, "matrix shape or modulus mismatch");
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        self.check(other);
        let n = self.n;
        let p = self.p;
        let mut entries = vec![0u64; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i * n + k];
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    let e = &mut entries[i * n + j];
                    *e = (*e + mul_mod(a, other.entries[k * n + j], p)) % p;
                }
            }
        }
        Matrix { n, p, entries }
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        self.check(other);
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| (a + b) % self.p).collect();
        Matrix { n: self.n, p: self.p, entries }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        self.check(other);
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| (a + self.p - b) % self.p).collect();
        Matrix { n: self.n, p: self.p, entries }
    }

    pub fn scale(&self, c: u64) -> Matrix {
        let entries = self.entries.iter().map(|&a| mul_mod(a, c % self.p, self.p)).collect();
        Matrix { n: self.n, p: self.p, entries }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    pub fn is_identity(&self) -> bool {
        *self == Matrix::identity(self.n, self.p)
    }

    /// Gauss-Jordan inverse; `None` when singular.
    pub fn inverse(&self) -> Option<Matrix> {
        let n = self.n;
        let p = self.p;
        let mut a = self.entries.clone();
        let mut inv = Matrix::identity(n, p).entries;
        for col in 0..n {
            let pivot = (col..n).find(|&r| a[r * n + col] != 0)?;
            if pivot != col {
                for j in 0..n {
                    a.swap(pivot * n + j, col * n + j);
                    inv.swap(pivot * n + j, col * n + j);
                }
            }
            let f = inv_mod_prime(a[col * n + col], p)?;
            for j in 0..n {
                a[col * n + j] = mul_mod(a[col * n + j], f, p);
                inv[col * n + j] = mul_mod(inv[col * n + j], f, p);
            }
            for r in 0..n {
                if r == col || a[r * n + col] == 0 {
                    continue;
                }
                let m = a[r * n + col];
                for j in 0..n {
                    a[r * n + j] = (a[r * n + j] + p - mul_mod(m, a[col * n + j], p)) % p;
                    inv[r * n + j] = (inv[r * n + j] + p - mul_mod(m, inv[col * n + j], p)) % p;
                }
            }
        }
        Some(Matrix { n, p, entries: inv })
    }

    pub fn is_invertible(&self) -> bool {
        self.inverse().is_some()
    }

    pub fn random<R: Rng + ?Sized>(n: usize, p: u64, rng: &mut R) -> Matrix {
        Matrix { n, p, entries: (0..n * n).map(|_| rng.gen_range(0..p)).collect() }
    }

    /// Uniform invertible matrix by rejection, within the retry budget.
    pub fn random_invertible<R: Rng + ?Sized>(n: usize, p: u64, rng: &mut R) -> Result<Matrix> {
        for _ in 0..INVERTIBLE_RETRY_BUDGET {
            let m = Matrix::random(n, p, rng);
            if m.is_invertible() {
                return Ok(m);
            }
        }
        Err(Error::Sampling(format!("no invertible {n}x{n} matrix mod {p} in {INVERTIBLE_RETRY_BUDGET} draws")))
    }

    /// `diag(upper, lower)`.
    pub fn block_diag(upper: &Matrix, lower: &Matrix) -> Matrix {
        assert_eq!(upper.p, lower.p, "modulus mismatch");
        let n = upper.n + lower.n;
        let mut out = Matrix::zero(n, upper.p);
        for i in 0..upper.n {
            for j in 0..upper.n {
                out.entries[i * n + j] = upper.get(i, j);
            }
        }
        for i in 0..lower.n {
            for j in 0..lower.n {
                out.entries[(upper.n + i) * n + upper.n + j] = lower.get(i, j);
            }
        }
        out
    }

    /// True when the matrix is `diag(X, I)` with `X` of size `upper`.
    pub fn is_upper_block(&self, upper: usize) -> bool {
        let n = self.n;
        (0..n).all(|i| {
            (0..n).all(|j| {
                let v = self.get(i, j);
                if i < upper && j < upper {
                    true
                } else if i == j {
                    v == 1
                } else {
                    v == 0
                }
            })
        })
    }

    /// True when the matrix is `diag(I, Y)` with the identity block of size `upper`.
    pub fn is_lower_block(&self, upper: usize) -> bool {
        let n = self.n;
        (0..n).all(|i| {
            (0..n).all(|j| {
                let v = self.get(i, j);
                if i >= upper && j >= upper {
                    true
                } else if i == j {
                    v == 1
                } else {
                    v == 0
                }
            })
        })
    }

    /// Row-major space-separated entries.
    pub fn parse(text: &str, n: usize, p: u64) -> Result<Matrix> {
        let entries = text
            .split_whitespace()
            .map(|t| t.parse::<u64>().map_err(|_| Error::Parse(format!("bad entry `{t}`"))))
            .collect::<Result<Vec<_>>>()?;
        Matrix::new(n, p, entries)
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix[{}x{} mod {}: {}]", self.n, self.n, self.p, self)
    }
}

/// Basis of the nullspace of the `rows × cols` system `a` over `Z_p`.
pub(crate) fn nullspace(mut a: Vec<Vec<u64>>, cols: usize, p: u64) -> Vec<Vec<u64>> {
    let rows = a.len();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..rows).find(|&i| a[i][c] != 0) else { continue };
        a.swap(r, piv);
        let f = inv_mod_prime(a[r][c], p).expect("nonzero pivot");
        for v in a[r].iter_mut() {
            *v = mul_mod(*v, f, p);
        }
        for i in 0..rows {
            if i != r && a[i][c] != 0 {
                let m = a[i][c];
                let pivot_row = a[r].clone();
                for (x, &y) in a[i].iter_mut().zip(&pivot_row) {
                    *x = (*x + p - mul_mod(m, y, p)) % p;
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivot_cols.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![0u64; cols];
            v[fc] = 1;
            for (row, &pc) in pivot_cols.iter().enumerate() {
                v[pc] = (p - a[row][fc]) % p;
            }
            v
        })
        .collect()
}
