//! Arithmetic modulo a prime and dense linear algebra over `F_p`.
//!
//! Every slice computation in the crate ends up here: ideal slices are kernels
//! of evaluation matrices, syzygies are kernels of multiplication maps, and the
//! smoothness certificate is a determinant. Matrices are dense and row-major.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The prime used when nothing else is requested.
pub const DEFAULT_PRIME: u32 = 10007;

/// The field `Z/pZ` for an odd prime `p < 2^31`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self> {
        if !(3..(1 << 31)).contains(&p) || !is_prime(p) {
            return Err(Error::InvalidPrime(p));
        }
        Ok(Self { p })
    }

    #[inline]
    pub fn modulus(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn reduce(&self, v: u64) -> u32 {
        (v % self.p as u64) as u32
    }

    #[inline]
    pub fn from_i64(&self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    /// Symmetric representative in `(-p/2, p/2]`.
    pub fn to_i64(&self, v: u32) -> i64 {
        if v > self.p / 2 {
            v as i64 - self.p as i64
        } else {
            v as i64
        }
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let s = a as u64 + b as u64;
        if s >= self.p as u64 {
            (s - self.p as u64) as u32
        } else {
            s as u32
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            (a as u64 + self.p as u64 - b as u64) as u32
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    pub fn pow(&self, mut base: u32, mut exp: u64) -> u32 {
        let mut acc = 1u32;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self, a: u32) -> u32 {
        assert!(!a.is_multiple_of(self.p), "inverse of zero in F_{}", self.p);
        let (mut r0, mut r1) = (self.p as i64, a as i64);
        let (mut s0, mut s1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        self.from_i64(s0)
    }

    pub fn div(&self, a: u32, b: u32) -> u32 {
        self.mul(a, self.inv(b))
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        rng.gen_range(0..self.p)
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        rng.gen_range(1..self.p)
    }

    /// Dot product of two equal-length vectors.
    pub fn dot(&self, a: &[u32], b: &[u32]) -> u32 {
        debug_assert_eq!(a.len(), b.len());
        let p = self.p as u64;
        let mut acc = 0u64;
        for (x, y) in a.iter().zip(b) {
            acc = (acc + *x as u64 * *y as u64) % p;
        }
        acc as u32
    }

    /// `dst += c * src`
    pub fn axpy(&self, dst: &mut [u32], c: u32, src: &[u32]) {
        if c == 0 {
            return;
        }
        for (d, s) in dst.iter_mut().zip(src) {
            *d = self.add(*d, self.mul(c, *s));
        }
    }

    pub fn scale(&self, v: &mut [u32], c: u32) {
        for x in v.iter_mut() {
            *x = self.mul(*x, c);
        }
    }
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let n = n as u64;
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// A dense matrix over `F_p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeFieldMatrix {
    prime: u32,
    rows: usize,
    cols: usize,
    entries: Vec<u32>,
}

impl PrimeFieldMatrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        Self {
            prime: field.p,
            rows,
            cols,
            entries: vec![0; rows * cols],
        }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.entries[i * n + i] = 1;
        }
        m
    }

    /// Builds a matrix from rows; entries are reduced modulo `p`.
    pub fn from_rows(field: PrimeField, rows: &[Vec<u32>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            entries.extend(r.iter().map(|&v| v % field.p));
        }
        Self {
            prime: field.p,
            rows: rows.len(),
            cols,
            entries,
        }
    }

    pub fn from_i64_rows(field: PrimeField, rows: &[Vec<i64>]) -> Self {
        let conv: Vec<Vec<u32>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| field.from_i64(v)).collect())
            .collect();
        Self::from_rows(field, &conv)
    }

    pub fn from_fn(field: PrimeField, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> u32) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j) % field.p);
            }
        }
        Self {
            prime: field.p,
            rows,
            cols,
            entries,
        }
    }

    pub fn random<R: Rng + ?Sized>(field: PrimeField, rows: usize, cols: usize, rng: &mut R) -> Self {
        Self::from_fn(field, rows, cols, |_, _| field.random(rng))
    }

    pub fn field(&self) -> PrimeField {
        PrimeField { p: self.prime }
    }

    pub fn prime(&self) -> u32 {
        self.prime
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.entries[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.entries[i * self.cols + j] = v % self.prime;
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&v| v == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.field(), self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.entries[j * self.rows + i] = self.entries[i * self.cols + j];
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.cols);
        let f = self.field();
        (0..self.rows).map(|i| f.dot(self.row(i), v)).collect()
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        assert_eq!(self.prime, other.prime);
        let p = self.prime as u64;
        let mut out = Self::zeros(self.field(), self.rows, other.cols);
        let mut acc = vec![0u64; other.cols];
        for i in 0..self.rows {
            acc.iter_mut().for_each(|a| *a = 0);
            for k in 0..self.cols {
                let a = self.entries[i * self.cols + k] as u64;
                if a == 0 {
                    continue;
                }
                let orow = other.row(k);
                for (slot, &b) in acc.iter_mut().zip(orow) {
                    *slot = (*slot + a * b as u64) % p;
                }
            }
            for (j, v) in acc.iter().enumerate() {
                out.entries[i * other.cols + j] = *v as u32;
            }
        }
        out
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        Self {
            prime: self.prime,
            rows: self.rows + other.rows,
            cols: self.cols,
            entries,
        }
    }

    pub fn rank(&self) -> usize {
        let mut work = Eliminator::new(self);
        work.run(false);
        work.pivots.len()
    }

    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut work = Eliminator::new(self);
        work.run(true);
        let pivots = work.pivots.clone();
        (work.into_matrix(), pivots)
    }

    /// Basis of the right kernel `{v : M v = 0}`, one vector per free column.
    pub fn kernel(&self) -> Vec<Vec<u32>> {
        let (r, pivots) = self.rref();
        kernel_from_rref(&r, &pivots)
    }

    /// Basis of the left kernel `{w : w M = 0}`.
    pub fn left_kernel(&self) -> Vec<Vec<u32>> {
        self.transpose().kernel()
    }

    /// Some `x` with `M x = b`, or `None` when `b` is outside the column span.
    pub fn solve(&self, b: &[u32]) -> Option<Vec<u32>> {
        assert_eq!(b.len(), self.rows, "right-hand side has wrong length");
        let f = self.field();
        let aug = Self::from_fn(f, self.rows, self.cols + 1, |i, j| {
            if j < self.cols {
                self.get(i, j)
            } else {
                b[i] % self.prime
            }
        });
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![0u32; self.cols];
        for (i, &c) in pivots.iter().enumerate() {
            x[c] = r.get(i, self.cols);
        }
        Some(x)
    }

    /// Inverse of a square matrix, `None` when singular.
    pub fn inverse(&self) -> Option<Self> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let n = self.rows;
        let f = self.field();
        let aug = Self::from_fn(
            f,
            n,
            2 * n,
            |i, j| {
                if j < n {
                    self.get(i, j)
                } else {
                    u32::from(j - n == i)
                }
            },
        );
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        Some(Self::from_fn(f, n, n, |i, j| r.get(i, n + j)))
    }

    pub fn determinant(&self) -> u32 {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let f = self.field();
        let n = self.rows;
        let mut a = self.entries.clone();
        let mut det = 1u32;
        for c in 0..n {
            let Some(piv) = (c..n).find(|&i| a[i * n + c] != 0) else {
                return 0;
            };
            if piv != c {
                for k in 0..n {
                    a.swap(piv * n + k, c * n + k);
                }
                det = f.neg(det);
            }
            let lead = a[c * n + c];
            det = f.mul(det, lead);
            let inv = f.inv(lead);
            for i in c + 1..n {
                let factor = f.mul(a[i * n + c], inv);
                if factor == 0 {
                    continue;
                }
                for k in c..n {
                    let v = f.mul(factor, a[c * n + k]);
                    a[i * n + k] = f.sub(a[i * n + k], v);
                }
            }
        }
        det
    }
}

fn kernel_from_rref(r: &PrimeFieldMatrix, pivots: &[usize]) -> Vec<Vec<u32>> {
    let f = r.field();
    let mut is_pivot = vec![false; r.cols];
    for &c in pivots {
        is_pivot[c] = true;
    }
    let mut basis = Vec::new();
    for free in (0..r.cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![0u32; r.cols];
        v[free] = 1;
        for (i, &c) in pivots.iter().enumerate() {
            v[c] = f.neg(r.get(i, free));
        }
        basis.push(v);
    }
    basis
}

/// Gaussian elimination on `u64` rows with delayed modular reduction.
///
/// Each row carries a counter of unreduced `a + m*b` updates; a row is reduced
/// before the counter could overflow `u64`.
struct Eliminator {
    p: u64,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
    pending: Vec<u64>,
    limit: u64,
    pivots: Vec<usize>,
}

impl Eliminator {
    fn new(m: &PrimeFieldMatrix) -> Self {
        let p = m.prime as u64;
        let sq = (p - 1) * (p - 1);
        Self {
            p,
            rows: m.rows,
            cols: m.cols,
            data: m.entries.iter().map(|&v| v as u64).collect(),
            pending: vec![0; m.rows],
            limit: ((u64::MAX - p) / sq).max(1),
            pivots: Vec::new(),
        }
    }

    fn reduce_row(&mut self, i: usize, from: usize) {
        let p = self.p;
        for v in &mut self.data[i * self.cols + from..(i + 1) * self.cols] {
            *v %= p;
        }
        self.pending[i] = 0;
    }

    fn run(&mut self, reduced: bool) {
        let (p, cols) = (self.p, self.cols);
        let field = PrimeField { p: p as u32 };
        let mut r = 0;
        let mut pivot_row = vec![0u64; cols];
        for c in 0..cols {
            if r == self.rows {
                break;
            }
            let Some(i) = (r..self.rows).find(|&i| !self.data[i * cols + c].is_multiple_of(p)) else {
                continue;
            };
            if i != r {
                for k in 0..cols {
                    self.data.swap(i * cols + k, r * cols + k);
                }
                self.pending.swap(i, r);
            }
            self.reduce_row(r, c);
            let inv = field.inv(self.data[r * cols + c] as u32) as u64;
            for v in &mut self.data[r * cols + c..(r + 1) * cols] {
                *v = *v * inv % p;
            }
            pivot_row[c..].copy_from_slice(&self.data[r * cols + c..(r + 1) * cols]);
            let start = if reduced { 0 } else { r + 1 };
            for j in start..self.rows {
                if j == r {
                    continue;
                }
                let lead = self.data[j * cols + c] % p;
                if lead == 0 {
                    self.data[j * cols + c] = 0;
                    continue;
                }
                if self.pending[j] >= self.limit {
                    self.reduce_row(j, c);
                }
                let m = p - lead;
                let row = &mut self.data[j * cols + c..(j + 1) * cols];
                for (x, &y) in row.iter_mut().zip(&pivot_row[c..]) {
                    *x += m * y;
                }
                self.pending[j] += 1;
            }
            self.pivots.push(c);
            r += 1;
        }
    }

    fn into_matrix(self) -> PrimeFieldMatrix {
        let p = self.p;
        PrimeFieldMatrix {
            prime: p as u32,
            rows: self.rows,
            cols: self.cols,
            entries: self.data.into_iter().map(|v| (v % p) as u32).collect(),
        }
    }
}

/// Row space kept in reduced echelon form, grown one vector at a time.
///
/// Used to pick deterministic complement representatives: a vector is reduced
/// against the current basis and, if something survives, becomes a new row.
#[derive(Debug, Clone)]
pub struct EchelonBasis {
    field: PrimeField,
    dim: usize,
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl EchelonBasis {
    pub fn new(field: PrimeField, dim: usize) -> Self {
        Self {
            field,
            dim,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn from_vectors<'a>(field: PrimeField, dim: usize, vs: impl IntoIterator<Item = &'a Vec<u32>>) -> Self {
        let mut b = Self::new(field, dim);
        for v in vs {
            b.insert(v);
        }
        b
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn vectors(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn reduce(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.dim);
        let f = self.field;
        let mut out = v.to_vec();
        for (row, &c) in self.rows.iter().zip(&self.pivots) {
            let lead = out[c];
            if lead != 0 {
                f.axpy(&mut out, f.neg(lead), row);
            }
        }
        out
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Inserts `v`; returns the normalized reduced vector when it was new.
    pub fn insert(&mut self, v: &[u32]) -> Option<Vec<u32>> {
        let f = self.field;
        let mut r = self.reduce(v);
        let c = r.iter().position(|&x| x != 0)?;
        let inv = f.inv(r[c]);
        f.scale(&mut r, inv);
        for row in &mut self.rows {
            let lead = row[c];
            if lead != 0 {
                f.axpy(row, f.neg(lead), &r);
            }
        }
        let pos = self.pivots.partition_point(|&p| p < c);
        self.pivots.insert(pos, c);
        self.rows.insert(pos, r.clone());
        Some(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn fp() -> PrimeField {
        PrimeField::new(DEFAULT_PRIME).unwrap()
    }

    #[test]
    fn rejects_composite_modulus() {
        assert!(PrimeField::new(10005).is_err());
        assert!(PrimeField::new(2).is_err());
        assert!(PrimeField::new(101).is_ok());
    }

    #[test]
    fn inverse_roundtrip() {
        let f = fp();
        for a in [1u32, 2, 17, 5003, 10006] {
            assert_eq!(f.mul(a, f.inv(a)), 1);
        }
    }

    #[test]
    fn rank_examples() {
        let f = fp();
        assert_eq!(PrimeFieldMatrix::identity(f, 3).rank(), 3);
        assert_eq!(PrimeFieldMatrix::zeros(f, 4, 2).rank(), 0);
        let m = PrimeFieldMatrix::from_rows(f, &[vec![1, 2], vec![2, 4]]);
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn kernel_examples() {
        let f = fp();
        assert!(PrimeFieldMatrix::identity(f, 3).kernel().is_empty());

        let row = PrimeFieldMatrix::from_rows(f, &[vec![1, 1]]);
        let k = row.kernel();
        assert_eq!(k.len(), 1);
        // proportional to (1, p-1)
        let v = &k[0];
        assert_eq!(f.mul(v[0], DEFAULT_PRIME - 1), v[1]);

        let m = PrimeFieldMatrix::from_rows(f, &[vec![1, 2], vec![2, 4]]);
        let k = m.kernel();
        assert_eq!(k.len(), 1);
        assert!(m.mul_vec(&k[0]).iter().all(|&x| x == 0));
    }

    #[test]
    fn solve_examples() {
        let f = fp();
        let id = PrimeFieldMatrix::identity(f, 3);
        assert_eq!(id.solve(&[4, 5, 6]), Some(vec![4, 5, 6]));

        let z = PrimeFieldMatrix::zeros(f, 2, 2);
        assert_eq!(z.solve(&[1, 0]), None);

        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = PrimeFieldMatrix::random(f, 6, 6, &mut rng);
        let x0: Vec<u32> = (0..6).map(|_| f.random(&mut rng)).collect();
        let b = m.mul_vec(&x0);
        let x = m.solve(&b).expect("constructed right-hand side");
        assert_eq!(m.mul_vec(&x), b);
    }

    #[test]
    fn determinant_matches_rank_deficiency() {
        let f = fp();
        let m = PrimeFieldMatrix::from_rows(f, &[vec![1, 2], vec![2, 4]]);
        assert_eq!(m.determinant(), 0);
        let m = PrimeFieldMatrix::from_rows(f, &[vec![2, 1], vec![1, 1]]);
        assert_eq!(m.determinant(), 1);
    }

    #[test]
    fn delayed_reduction_with_large_prime() {
        // p close to 2^31 leaves room for only a couple of unreduced updates.
        let f = PrimeField::new(2147483629).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = PrimeFieldMatrix::random(f, 12, 5, &mut rng);
        let b = PrimeFieldMatrix::random(f, 5, 12, &mut rng);
        let m = a.mul(&b);
        assert_eq!(m.rank(), 5);
        for v in m.kernel() {
            assert!(m.mul_vec(&v).iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn echelon_basis_tracks_span() {
        let f = fp();
        let mut b = EchelonBasis::new(f, 3);
        assert!(b.insert(&[1, 2, 3]).is_some());
        assert!(b.insert(&[2, 4, 6]).is_none());
        assert!(b.insert(&[0, 1, 0]).is_some());
        assert!(b.contains(&[1, 5, 3]));
        assert!(!b.contains(&[0, 0, 1]));
        assert_eq!(b.rank(), 2);
    }

    fn small_matrix() -> impl Strategy<Value = (u32, Vec<Vec<u32>>)> {
        (prop::sample::select(vec![7u32, 101, 10007]), 1usize..7, 1usize..7)
            .prop_flat_map(|(p, r, c)| (Just(p), prop::collection::vec(prop::collection::vec(0..p, c), r)))
    }

    proptest! {
        #[test]
        fn rank_nullity((p, rows) in small_matrix()) {
            let f = PrimeField::new(p).unwrap();
            let m = PrimeFieldMatrix::from_rows(f, &rows);
            let k = m.kernel();
            prop_assert_eq!(m.rank() + k.len(), m.cols());
            for v in &k {
                prop_assert!(m.mul_vec(v).iter().all(|&x| x == 0));
            }
            prop_assert_eq!(m.rank(), m.transpose().rank());
        }

        #[test]
        fn solve_is_exact((p, rows) in small_matrix(), seed in 0u64..1000) {
            let f = PrimeField::new(p).unwrap();
            let m = PrimeFieldMatrix::from_rows(f, &rows);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let x0: Vec<u32> = (0..m.cols()).map(|_| f.random(&mut rng)).collect();
            let b = m.mul_vec(&x0);
            let x = m.solve(&b);
            prop_assert!(x.is_some());
            prop_assert_eq!(m.mul_vec(&x.unwrap()), b);
        }
    }
}
