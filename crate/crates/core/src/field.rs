//! Exact arithmetic and linear algebra over a prime field F_p.
//!
//! Everything downstream (composition tables, hom-space solvers, axiom
//! checkers) reduces to the handful of routines in this module, so they are
//! deliberately boring: dense row-major matrices, deterministic Gaussian
//! elimination, no floating point anywhere.

use std::fmt;

/// A validated prime modulus. Small by design; idempotent enumeration and
/// the brute-force oracles need `p^dim` to stay finite.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Prime(u64);

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FieldError {
    NotPrime(u64),
    TooLarge(u64),
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldError::NotPrime(p) => write!(f, "{p} is not prime"),
            FieldError::TooLarge(p) => write!(f, "prime {p} too large for this workbench"),
        }
    }
}

impl std::error::Error for FieldError {}

impl Prime {
    pub fn new(p: u64) -> Result<Prime, FieldError> {
        if p > 1 << 20 {
            return Err(FieldError::TooLarge(p));
        }
        if p < 2 || (2..p).take_while(|d| d * d <= p).any(|d| p % d == 0) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(Prime(p))
    }

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn reduce(self, v: i64) -> u64 {
        v.rem_euclid(self.0 as i64) as u64
    }

    pub fn add(self, a: u64, b: u64) -> u64 {
        (a + b) % self.0
    }

    pub fn sub(self, a: u64, b: u64) -> u64 {
        (a + self.0 - b % self.0) % self.0
    }

    pub fn mul(self, a: u64, b: u64) -> u64 {
        (a * b) % self.0
    }

    pub fn neg(self, a: u64) -> u64 {
        (self.0 - a % self.0) % self.0
    }

    /// Multiplicative inverse by Fermat; panics on zero.
    pub fn inv(self, a: u64) -> u64 {
        assert!(a % self.0 != 0, "inverse of zero in F_{}", self.0);
        self.pow(a, self.0 - 2)
    }

    pub fn pow(self, mut base: u64, mut exp: u64) -> u64 {
        base %= self.0;
        let mut acc = 1;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// The sign (-1)^k as a field element.
    pub fn sign(self, k: usize) -> u64 {
        if k % 2 == 0 {
            1 % self.0
        } else {
            self.neg(1)
        }
    }
}

/// Dense matrix over F_p. Zero-dimensional matrices are legal and show up
/// constantly (hom spaces of the zero object).
#[derive(Clone, PartialEq, Eq)]
pub struct FMatrix {
    p: Prime,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl fmt::Debug for FMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FMatrix{}x{}[", self.rows, self.cols)?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", self.at(r, c))?;
            }
        }
        write!(f, "]")
    }
}

impl FMatrix {
    pub fn zeros(p: Prime, rows: usize, cols: usize) -> FMatrix {
        FMatrix { p, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(p: Prime, n: usize) -> FMatrix {
        let mut m = FMatrix::zeros(p, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(p: Prime, rows: &[&[i64]]) -> FMatrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = FMatrix::zeros(p, r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, p.reduce(v));
            }
        }
        m
    }

    pub fn column(p: Prime, entries: &[i64]) -> FMatrix {
        let mut m = FMatrix::zeros(p, entries.len(), 1);
        for (i, &v) in entries.iter().enumerate() {
            m.set(i, 0, p.reduce(v));
        }
        m
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> u64 {
        debug_assert!(r < self.rows && c < self.cols);
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        debug_assert!(r < self.rows && c < self.cols);
        self.data[r * self.cols + c] = v % self.p.get();
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn add(&self, other: &FMatrix) -> FMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| self.p.add(a, b))
            .collect();
        FMatrix { p: self.p, rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &FMatrix) -> FMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| self.p.sub(a, b))
            .collect();
        FMatrix { p: self.p, rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, k: u64) -> FMatrix {
        let data = self.data.iter().map(|&a| self.p.mul(a, k)).collect();
        FMatrix { p: self.p, rows: self.rows, cols: self.cols, data }
    }

    pub fn neg(&self) -> FMatrix {
        self.scale(self.p.neg(1))
    }

    pub fn mul(&self, other: &FMatrix) -> FMatrix {
        assert_eq!(self.cols, other.rows, "matrix shape mismatch");
        let mut out = FMatrix::zeros(self.p, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = self.p.add(out.at(i, j), self.p.mul(a, other.at(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> FMatrix {
        let mut out = FMatrix::zeros(self.p, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.at(r, c));
            }
        }
        out
    }

    /// Stack `self` on top of `other`.
    pub fn vstack(&self, other: &FMatrix) -> FMatrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        FMatrix { p: self.p, rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn hstack(&self, other: &FMatrix) -> FMatrix {
        assert_eq!(self.rows, other.rows);
        let mut out = FMatrix::zeros(self.p, self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(r, c, self.at(r, c));
            }
            for c in 0..other.cols {
                out.set(r, self.cols + c, other.at(r, c));
            }
        }
        out
    }

    pub fn col_slice(&self, from: usize, count: usize) -> FMatrix {
        assert!(from + count <= self.cols);
        let mut out = FMatrix::zeros(self.p, self.rows, count);
        for r in 0..self.rows {
            for c in 0..count {
                out.set(r, c, self.at(r, from + c));
            }
        }
        out
    }

    pub fn get_col(&self, c: usize) -> Vec<u64> {
        (0..self.rows).map(|r| self.at(r, c)).collect()
    }

    pub fn entries(&self) -> &[u64] {
        &self.data
    }

    /// Reduced row echelon form with deterministic pivoting: first nonzero
    /// entry in column order, no row exchanges beyond the required swap.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let p = self.p;
        let mut pivots = Vec::new();
        let mut lead = 0usize;
        for col in 0..m.cols {
            let Some(pivot_row) = (lead..m.rows).find(|&r| m.at(r, col) != 0) else {
                continue;
            };
            if pivot_row != lead {
                for c in 0..m.cols {
                    let a = m.at(lead, c);
                    let b = m.at(pivot_row, c);
                    m.set(lead, c, b);
                    m.set(pivot_row, c, a);
                }
            }
            let inv = p.inv(m.at(lead, col));
            for c in 0..m.cols {
                m.set(lead, c, p.mul(m.at(lead, c), inv));
            }
            for r in 0..m.rows {
                if r == lead {
                    continue;
                }
                let factor = m.at(r, col);
                if factor == 0 {
                    continue;
                }
                for c in 0..m.cols {
                    let v = p.sub(m.at(r, c), p.mul(factor, m.at(lead, c)));
                    m.set(r, c, v);
                }
            }
            pivots.push(col);
            lead += 1;
            if lead == m.rows {
                break;
            }
        }
        Rref { rank: pivots.len(), pivots, matrix: m }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Basis of the right kernel `{x : self*x = 0}`, returned as the columns
    /// of a matrix (cols = nullity). Deterministic: free variables in
    /// ascending column order.
    pub fn kernel(&self) -> FMatrix {
        let red = self.rref();
        let free: Vec<usize> =
            (0..self.cols).filter(|c| !red.pivots.contains(c)).collect();
        let mut basis = FMatrix::zeros(self.p, self.cols, free.len());
        for (k, &fc) in free.iter().enumerate() {
            basis.set(fc, k, 1);
            for (prow, &pc) in red.pivots.iter().enumerate() {
                basis.set(pc, k, self.p.neg(red.matrix.at(prow, fc)));
            }
        }
        basis
    }

    /// Inverse if it exists; `None` for non-square or rank-deficient input.
    /// A returned inverse has been re-verified by multiplication both ways.
    pub fn inverse(&self) -> Option<FMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let aug = self.hstack(&FMatrix::identity(self.p, n));
        let red = aug.rref();
        if red.rank < n || red.pivots.iter().take(n).ne((0..n).by_ref()) {
            return None;
        }
        let inv = red.matrix.col_slice(n, n);
        let id = FMatrix::identity(self.p, n);
        assert!(self.mul(&inv) == id && inv.mul(self) == id);
        Some(inv)
    }

    /// Solve `self * x = rhs` for all columns of `rhs` at once.
    pub fn solve(&self, rhs: &FMatrix) -> Solve {
        assert_eq!(self.rows, rhs.rows, "solve: row mismatch");
        let aug = self.hstack(rhs);
        let red = aug.rref();
        if red.pivots.iter().any(|&c| c >= self.cols) {
            return Solve::NoSolution;
        }
        let mut particular = FMatrix::zeros(self.p, self.cols, rhs.cols);
        for (prow, &pc) in red.pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                particular.set(pc, j, red.matrix.at(prow, self.cols + j));
            }
        }
        Solve::Solution(LinearSolution { particular, kernel: self.kernel() })
    }
}

/// Outcome of [`FMatrix::rref`].
pub struct Rref {
    pub matrix: FMatrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

/// Full solution set of a linear system: one particular solution plus a
/// kernel basis (columns). `NoSolution` is a meaningful verdict upstream —
/// it is how fill-in and factorization failures become axiom witnesses.
pub enum Solve {
    Solution(LinearSolution),
    NoSolution,
}

pub struct LinearSolution {
    pub particular: FMatrix,
    pub kernel: FMatrix,
}

impl LinearSolution {
    /// Number of solutions per right-hand column is `p^dim`; this is the dim.
    pub fn kernel_dim(&self) -> usize {
        self.kernel.cols()
    }

    /// The `idx`-th solution column vector (for single-column systems),
    /// enumerated deterministically over kernel coefficients.
    pub fn nth(&self, idx: u64) -> FMatrix {
        let p = self.particular.prime().get();
        let mut x = self.particular.clone();
        let mut rest = idx;
        for k in 0..self.kernel.cols() {
            let coeff = rest % p;
            rest /= p;
            if coeff != 0 {
                x = x.add(&self.kernel.col_slice(k, 1).scale(coeff));
            }
        }
        x
    }

    pub fn count(&self) -> Option<u64> {
        let p = self.particular.prime().get();
        let mut total: u64 = 1;
        for _ in 0..self.kernel.cols() {
            total = total.checked_mul(p)?;
        }
        Some(total)
    }
}

/// Deterministic enumeration of all vectors in F_p^n (lexicographic from 0).
pub fn enumerate_vectors(p: Prime, n: usize) -> impl Iterator<Item = Vec<u64>> {
    let total = (p.get() as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    (0..total).map(move |mut idx| {
        (0..n)
            .map(|_| {
                let v = (idx % p.get() as u128) as u64;
                idx /= p.get() as u128;
                v
            })
            .collect()
    })
}

/// `p^n` if it fits a u64 budget comparison.
pub fn space_size(p: Prime, n: usize) -> Option<u64> {
    let mut total: u64 = 1;
    for _ in 0..n {
        total = total.checked_mul(p.get())?;
    }
    Some(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f2() -> Prime {
        Prime::new(2).unwrap()
    }

    #[test]
    fn prime_validation() {
        assert!(Prime::new(2).is_ok());
        assert!(Prime::new(3).is_ok());
        assert!(Prime::new(1).is_err());
        assert!(Prime::new(4).is_err());
        assert!(Prime::new(91).is_err()); // 7 * 13
    }

    #[test]
    fn rref_identity_is_itself() {
        let id = FMatrix::identity(f2(), 2);
        let red = id.rref();
        assert_eq!(red.matrix, id);
        assert_eq!(red.rank, 2);
    }

    #[test]
    fn rref_zero_is_zero() {
        let z = FMatrix::zeros(f2(), 3, 3);
        let red = z.rref();
        assert_eq!(red.matrix, z);
        assert_eq!(red.rank, 0);
    }

    #[test]
    fn rref_rank_one_example() {
        // hand row-reduced: r2 := r2 - r1 over F_2
        let m = FMatrix::from_rows(f2(), &[&[1, 1], &[1, 1]]);
        let red = m.rref();
        assert_eq!(red.matrix, FMatrix::from_rows(f2(), &[&[1, 1], &[0, 0]]));
        assert_eq!(red.rank, 1);
        // row space unchanged: every original row solves against rref rows
        // and vice versa (both spaces are {00, 11})
        for v in enumerate_vectors(f2(), 2) {
            let in_orig = v == [0, 0] || v == [1, 1];
            let spanned = {
                let col = FMatrix::column(f2(), &[v[0] as i64, v[1] as i64]);
                matches!(red.matrix.transpose().solve(&col), Solve::Solution(_))
            };
            assert_eq!(in_orig, spanned);
        }
    }

    #[test]
    fn solve_identity() {
        let a = FMatrix::identity(f2(), 2);
        let b = FMatrix::column(f2(), &[1, 0]);
        match a.solve(&b) {
            Solve::Solution(s) => {
                assert_eq!(s.particular, b);
                assert_eq!(s.kernel_dim(), 0);
            }
            Solve::NoSolution => panic!("identity system must solve"),
        }
    }

    #[test]
    fn solve_zero_full_kernel() {
        let a = FMatrix::zeros(f2(), 2, 2);
        let b = FMatrix::zeros(f2(), 2, 1);
        match a.solve(&b) {
            Solve::Solution(s) => {
                assert!(s.particular.is_zero());
                assert_eq!(s.kernel_dim(), 2);
            }
            Solve::NoSolution => panic!(),
        }
    }

    #[test]
    fn solve_upper_triangular() {
        // a = [[1,1],[0,1]], b = [1,0]^t over F_2: substitute back, a*x = b
        let a = FMatrix::from_rows(f2(), &[&[1, 1], &[0, 1]]);
        let b = FMatrix::column(f2(), &[1, 0]);
        match a.solve(&b) {
            Solve::Solution(s) => {
                assert_eq!(s.particular, FMatrix::column(f2(), &[1, 0]));
                assert_eq!(a.mul(&s.particular), b);
            }
            Solve::NoSolution => panic!(),
        }
    }

    #[test]
    fn inverse_examples() {
        let id = FMatrix::identity(f2(), 3);
        assert_eq!(id.inverse().unwrap(), id);
        // [[1,1],[0,1]] squares to the identity over F_2, so it is self-inverse
        let m = FMatrix::from_rows(f2(), &[&[1, 1], &[0, 1]]);
        assert_eq!(m.inverse().unwrap(), m);
        // rank 1, not invertible
        let s = FMatrix::from_rows(f2(), &[&[1, 1], &[1, 1]]);
        assert!(s.inverse().is_none());
        // non-square
        let r = FMatrix::zeros(f2(), 2, 3);
        assert!(r.inverse().is_none());
    }

    #[test]
    fn zero_dimensional_matrices_are_legal() {
        let p = f2();
        let a = FMatrix::zeros(p, 0, 3);
        let b = FMatrix::zeros(p, 3, 0);
        assert_eq!(a.mul(&b).rows(), 0);
        assert_eq!(b.mul(&a), FMatrix::zeros(p, 3, 3));
        assert_eq!(a.rank(), 0);
        assert_eq!(a.kernel().cols(), 3);
        match a.solve(&FMatrix::zeros(p, 0, 1)) {
            Solve::Solution(s) => assert_eq!(s.kernel_dim(), 3),
            Solve::NoSolution => panic!(),
        }
        assert!(FMatrix::zeros(p, 0, 0).inverse().is_some());
    }

    fn arb_matrix(p: u64, max_dim: usize) -> impl Strategy<Value = FMatrix> {
        (0..=max_dim, 0..=max_dim).prop_flat_map(move |(r, c)| {
            proptest::collection::vec(0..p, r * c).prop_map(move |data| {
                let prime = Prime::new(p).unwrap();
                let mut m = FMatrix::zeros(prime, r, c);
                for i in 0..r {
                    for j in 0..c {
                        m.set(i, j, data[i * c + j]);
                    }
                }
                m
            })
        })
    }

    proptest! {
        #[test]
        fn rref_is_idempotent(m in arb_matrix(2, 5)) {
            let once = m.rref().matrix;
            let twice = once.rref().matrix;
            prop_assert_eq!(once, twice);
        }

        #[test]
        fn rref_is_idempotent_f3(m in arb_matrix(3, 4)) {
            let once = m.rref().matrix;
            let twice = once.rref().matrix;
            prop_assert_eq!(once, twice);
        }

        #[test]
        fn inverse_round_trip(m in arb_matrix(3, 4)) {
            if let Some(inv) = m.inverse() {
                let id = FMatrix::identity(m.prime(), m.rows());
                prop_assert_eq!(m.mul(&inv), id.clone());
                prop_assert_eq!(inv.mul(&m), id);
            }
        }

        // solve agrees with exhaustive enumeration over F_p^cols (p^cols <= 2^12)
        #[test]
        fn solve_matches_enumeration(m in arb_matrix(2, 4), bits in proptest::collection::vec(0u64..2, 4)) {
            let b = {
                let mut col = FMatrix::zeros(m.prime(), m.rows(), 1);
                for r in 0..m.rows() {
                    col.set(r, 0, bits[r.min(bits.len() - 1)]);
                }
                col
            };
            let brute = enumerate_vectors(m.prime(), m.cols()).find(|v| {
                let x = FMatrix::column(m.prime(), &v.iter().map(|&u| u as i64).collect::<Vec<_>>());
                m.mul(&x) == b
            });
            match m.solve(&b) {
                Solve::Solution(s) => {
                    prop_assert!(brute.is_some());
                    prop_assert_eq!(m.mul(&s.particular), b);
                    // every kernel column really is in the kernel
                    for k in 0..s.kernel.cols() {
                        prop_assert!(m.mul(&s.kernel.col_slice(k, 1)).is_zero());
                    }
                }
                Solve::NoSolution => prop_assert!(brute.is_none()),
            }
        }
    }
}
