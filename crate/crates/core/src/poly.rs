//! Polynomials over `F_p`: sparse multivariate forms and dense univariate
//! polynomials with root finding.

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::ffield::PrimeField;

/// Exponent vectors of all degree-`d` monomials in `n` variables, in
/// lexicographically descending order (`x0^d` first).
pub fn monomials(n: usize, d: u32) -> Vec<Vec<u32>> {
    fn rec(n: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 1 {
            prefix.push(d);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=d).rev() {
            prefix.push(e);
            rec(n - 1, d - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if d == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(n, d, &mut Vec::with_capacity(n), &mut out);
    out
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc = 1u64;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Powers `v^0..=v^max` of each coordinate of a point.
pub fn power_table(field: PrimeField, point: &[u32], max: u32) -> Vec<Vec<u32>> {
    point
        .iter()
        .map(|&v| {
            let mut row = Vec::with_capacity(max as usize + 1);
            let mut acc = 1u32;
            for _ in 0..=max {
                row.push(acc);
                acc = field.mul(acc, v);
            }
            row
        })
        .collect()
}

pub fn eval_monomial(field: PrimeField, exps: &[u32], powers: &[Vec<u32>]) -> u32 {
    exps.iter()
        .enumerate()
        .fold(1u32, |acc, (i, &e)| field.mul(acc, powers[i][e as usize]))
}

/// Sparse polynomial in a fixed number of variables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "PolyRepr", try_from = "PolyRepr")]
pub struct Poly {
    field: PrimeField,
    nvars: usize,
    terms: BTreeMap<Vec<u32>, u32>,
}

/// Serialized form: the prime, the number of variables and a term list.
#[derive(Serialize, Deserialize)]
struct PolyRepr {
    prime: u32,
    nvars: usize,
    terms: Vec<(Vec<u32>, u32)>,
}

impl From<Poly> for PolyRepr {
    fn from(p: Poly) -> Self {
        Self {
            prime: p.field.modulus(),
            nvars: p.nvars,
            terms: p.terms.into_iter().collect(),
        }
    }
}

impl TryFrom<PolyRepr> for Poly {
    type Error = crate::error::Error;

    fn try_from(r: PolyRepr) -> crate::error::Result<Self> {
        let mut p = Poly::zero(PrimeField::new(r.prime)?, r.nvars);
        for (e, c) in r.terms {
            if e.len() != r.nvars {
                return Err(crate::error::Error::InvalidInput("exponent length".into()));
            }
            p.add_term(e, c);
        }
        Ok(p)
    }
}

impl Poly {
    pub fn zero(field: PrimeField, nvars: usize) -> Self {
        Self {
            field,
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: PrimeField, nvars: usize, c: u32) -> Self {
        let mut p = Self::zero(field, nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn monomial(field: PrimeField, exps: Vec<u32>, c: u32) -> Self {
        let mut p = Self::zero(field, exps.len());
        p.add_term(exps, c);
        p
    }

    pub fn var(field: PrimeField, nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(field, e, 1)
    }

    /// Form with the given coefficients on a monomial list.
    pub fn from_coeffs(field: PrimeField, mons: &[Vec<u32>], coeffs: &[u32]) -> Self {
        assert_eq!(mons.len(), coeffs.len());
        let nvars = mons.first().map_or(0, Vec::len);
        let mut p = Self::zero(field, nvars);
        for (m, &c) in mons.iter().zip(coeffs) {
            p.add_term(m.clone(), c);
        }
        p
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &u32)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exps: &[u32]) -> u32 {
        self.terms.get(exps).copied().unwrap_or(0)
    }

    /// Coefficient vector on a monomial list; terms outside the list are an error.
    pub fn coeffs_on(&self, mons: &[Vec<u32>]) -> Option<Vec<u32>> {
        let out: Vec<u32> = mons.iter().map(|m| self.coeff(m)).collect();
        let hit = out.iter().filter(|&&c| c != 0).count();
        (hit == self.terms.len()).then_some(out)
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: u32) {
        assert_eq!(exps.len(), self.nvars);
        let c = c % self.field.modulus();
        if c == 0 {
            return;
        }
        let f = self.field;
        let entry = self.terms.entry(exps);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = f.add(*o.get(), c);
                if s == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, &c) in &other.terms {
            out.add_term(e.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(self.field.neg(1))
    }

    pub fn scale(&self, c: u32) -> Self {
        let f = self.field;
        let mut out = Self::zero(f, self.nvars);
        for (e, &v) in &self.terms {
            out.add_term(e.clone(), f.mul(v, c));
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let f = self.field;
        let mut out = Self::zero(f, self.nvars);
        for (ea, &ca) in &self.terms {
            for (eb, &cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, f.mul(ca, cb));
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::constant(self.field, self.nvars, 1);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|x| x == d),
        }
    }

    pub fn eval(&self, point: &[u32]) -> u32 {
        assert_eq!(point.len(), self.nvars);
        let f = self.field;
        let max = self.terms.keys().flat_map(|e| e.iter().copied()).max().unwrap_or(0);
        let powers = power_table(f, point, max);
        self.terms
            .iter()
            .fold(0u32, |acc, (e, &c)| f.add(acc, f.mul(c, eval_monomial(f, e, &powers))))
    }

    pub fn derivative(&self, i: usize) -> Self {
        let f = self.field;
        let mut out = Self::zero(f, self.nvars);
        for (e, &c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[i] -= 1;
            out.add_term(e2, f.mul(c, e[i] % f.modulus()));
        }
        out
    }

    /// Substitutes `x_i -> subs[i]` (all in a possibly different ring).
    pub fn compose(&self, subs: &[Poly]) -> Poly {
        assert_eq!(subs.len(), self.nvars);
        let f = self.field;
        let target = subs.first().map_or(0, |p| p.nvars);
        let mut out = Poly::zero(f, target);
        let max = self.terms.keys().flat_map(|e| e.iter().copied()).max().unwrap_or(0);
        let powers: Vec<Vec<Poly>> = subs
            .iter()
            .map(|s| {
                let mut v = vec![Poly::constant(f, target, 1)];
                for k in 1..=max as usize {
                    let next = v[k - 1].mul(s);
                    v.push(next);
                }
                v
            })
            .collect();
        for (e, &c) in &self.terms {
            let mut term = Poly::constant(f, target, c);
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    term = term.mul(&powers[i][k as usize]);
                }
            }
            out = out.add(&term);
        }
        out
    }
}

/// Dense univariate polynomial, coefficients from low to high degree, trimmed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniPoly {
    field: PrimeField,
    coeffs: Vec<u32>,
}

impl UniPoly {
    pub fn new(field: PrimeField, mut coeffs: Vec<u32>) -> Self {
        for c in coeffs.iter_mut() {
            *c %= field.modulus();
        }
        let mut p = Self { field, coeffs };
        p.trim();
        p
    }

    pub fn zero(field: PrimeField) -> Self {
        Self::new(field, Vec::new())
    }

    pub fn x(field: PrimeField) -> Self {
        Self::new(field, vec![0, 1])
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> u32 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn eval(&self, x: u32) -> u32 {
        let f = self.field;
        self.coeffs.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }

    pub fn add(&self, other: &Self) -> Self {
        let f = self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n)
            .map(|i| f.add(*self.coeffs.get(i).unwrap_or(&0), *other.coeffs.get(i).unwrap_or(&0)))
            .collect();
        Self::new(f, c)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let f = self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n)
            .map(|i| f.sub(*self.coeffs.get(i).unwrap_or(&0), *other.coeffs.get(i).unwrap_or(&0)))
            .collect();
        Self::new(f, c)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.field);
        }
        let f = self.field;
        let mut c = vec![0u32; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                c[i + j] = f.add(c[i + j], f.mul(a, b));
            }
        }
        Self::new(f, c)
    }

    pub fn derivative(&self) -> Self {
        let f = self.field;
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &v)| f.mul(v, (i as u64 % f.modulus() as u64) as u32))
            .collect();
        Self::new(f, c)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let f = self.field;
        let inv = f.inv(self.leading());
        Self::new(f, self.coeffs.iter().map(|&c| f.mul(c, inv)).collect())
    }

    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let f = self.field;
        let dd = d.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return (Self::zero(f), self.clone());
        }
        let inv = f.inv(d.leading());
        let mut r = self.coeffs.clone();
        let mut q = vec![0u32; r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = f.mul(r[k + dd], inv);
            q[k] = c;
            if c != 0 {
                for (j, &dv) in d.coeffs.iter().enumerate() {
                    r[k + j] = f.sub(r[k + j], f.mul(c, dv));
                }
            }
        }
        r.truncate(dd);
        (Self::new(f, q), Self::new(f, r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.divrem(d).1
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn powmod(&self, mut e: u64, m: &Self) -> Self {
        let f = self.field;
        let mut base = self.rem(m);
        let mut acc = Self::new(f, vec![1]).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e >>= 1;
        }
        acc
    }

    /// Resultant `Res(self, other)` by the Euclidean recursion
    /// `Res(a, b) = (-1)^(deg a deg b) lc(b)^(deg a - deg r) Res(b, r)` with `r = a mod b`.
    pub fn resultant(&self, other: &Self) -> u32 {
        let f = self.field;
        let (mut a, mut b) = (self.clone(), other.clone());
        let mut acc = 1u32;
        loop {
            let (Some(da), Some(db)) = (a.degree(), b.degree()) else {
                return 0;
            };
            if db == 0 {
                return f.mul(acc, f.pow(b.leading(), da as u64));
            }
            if da == 0 {
                return f.mul(acc, f.pow(a.leading(), db as u64));
            }
            let r = a.rem(&b);
            let Some(dr) = r.degree() else {
                return 0;
            };
            if (da * db) % 2 == 1 {
                acc = f.neg(acc);
            }
            acc = f.mul(acc, f.pow(b.leading(), (da - dr) as u64));
            a = b;
            b = r;
        }
    }

    /// Squarefree part (characteristic larger than the degree).
    pub fn squarefree(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.divrem(&g).0.monic()
    }

    /// Lagrange interpolation through `(xs[i], ys[i])` with distinct `xs`.
    pub fn interpolate(field: PrimeField, xs: &[u32], ys: &[u32]) -> Self {
        assert_eq!(xs.len(), ys.len());
        let f = field;
        let mut acc = Self::zero(f);
        for (i, (&xi, &yi)) in xs.iter().zip(ys).enumerate() {
            if yi == 0 {
                continue;
            }
            let mut basis = Self::new(f, vec![1]);
            let mut denom = 1u32;
            for (j, &xj) in xs.iter().enumerate() {
                if i == j {
                    continue;
                }
                basis = basis.mul(&Self::new(f, vec![f.neg(xj), 1]));
                denom = f.mul(denom, f.sub(xi, xj));
            }
            let c = f.div(yi, denom);
            acc = acc.add(&Self::new(f, basis.coeffs.iter().map(|&v| f.mul(v, c)).collect()));
        }
        acc
    }

    /// Distinct roots in `F_p`, sorted ascending.
    pub fn roots<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<u32> {
        let f = self.field;
        if self.is_zero() {
            return Vec::new();
        }
        let p = f.modulus() as u64;
        let x = Self::x(f);
        let m = self.monic();
        // product of the distinct linear factors
        let xp = x.powmod(p, &m);
        let g = m.gcd(&xp.sub(&x));
        let mut out = Vec::new();
        split_linear(&g, rng, &mut out);
        out.sort_unstable();
        out.dedup();
        out
    }
}

fn split_linear<R: Rng + ?Sized>(g: &UniPoly, rng: &mut R, out: &mut Vec<u32>) {
    let f = g.field;
    match g.degree() {
        None | Some(0) => {}
        Some(1) => {
            let g = g.monic();
            out.push(f.neg(g.coeffs[0]));
        }
        Some(_) => {
            let p = f.modulus() as u64;
            loop {
                let a = f.random(rng);
                let shift = UniPoly::new(f, vec![a, 1]);
                let h = shift.powmod((p - 1) / 2, g).sub(&UniPoly::new(f, vec![1]));
                let d = g.gcd(&h);
                let dd = d.degree().unwrap_or(0);
                if dd > 0 && dd < g.degree().unwrap() {
                    let (q, _) = g.divrem(&d);
                    split_linear(&d, rng, out);
                    split_linear(&q, rng, out);
                    return;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::DEFAULT_PRIME;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn fp() -> PrimeField {
        PrimeField::new(DEFAULT_PRIME).unwrap()
    }

    proptest! {
        #[test]
        fn resultant_is_product_over_roots(
            roots in proptest::collection::vec(0u32..DEFAULT_PRIME, 1..5),
            g in proptest::collection::vec(0u32..DEFAULT_PRIME, 1..6),
        ) {
            let f = fp();
            let mut a = UniPoly::new(f, vec![1]);
            for &r in &roots {
                a = a.mul(&UniPoly::new(f, vec![f.neg(r), 1]));
            }
            let g = UniPoly::new(f, g);
            let expect = roots.iter().fold(1, |acc, &r| f.mul(acc, g.eval(r)));
            prop_assert_eq!(a.resultant(&g), expect);
        }
    }

    #[test]
    fn squarefree_part() {
        let f = fp();
        let a = UniPoly::new(f, vec![f.neg(2), 1]);
        let b = UniPoly::new(f, vec![f.neg(5), 1]);
        let p = a.mul(&a).mul(&a).mul(&b);
        assert_eq!(p.squarefree(), a.mul(&b));
    }

    #[test]
    fn monomial_counts() {
        assert_eq!(monomials(3, 8).len(), 45);
        assert_eq!(monomials(4, 4).len(), 35);
        assert_eq!(monomials(4, 9).len(), 220);
        assert_eq!(monomials(3, 0), vec![vec![0, 0, 0]]);
        assert_eq!(monomials(2, 1), vec![vec![1, 0], vec![0, 1]]);
    }

    #[test]
    fn poly_arithmetic() {
        let f = fp();
        let x = Poly::var(f, 2, 0);
        let y = Poly::var(f, 2, 1);
        let s = x.add(&y);
        let sq = s.mul(&s);
        assert_eq!(sq.coeff(&[1, 1]), 2);
        assert_eq!(sq.eval(&[3, 4]), 49);
        assert_eq!(sq.derivative(0).eval(&[3, 4]), 14);
        assert!(s.sub(&s).is_zero());
        let c = sq.compose(&[y.clone(), x.clone()]);
        assert_eq!(c, sq);
    }

    #[test]
    fn poly_json_roundtrip() {
        let f = fp();
        let p = Poly::var(f, 3, 0)
            .mul(&Poly::var(f, 3, 2))
            .add(&Poly::constant(f, 3, 5));
        let s = serde_json::to_string(&p).unwrap();
        let q: Poly = serde_json::from_str(&s).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn roots_of_split_polynomial() {
        let f = fp();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut p = UniPoly::new(f, vec![1]);
        for r in [3u32, 17, 10000] {
            p = p.mul(&UniPoly::new(f, vec![f.neg(r), 1]));
        }
        // an irreducible quadratic factor x^2 - c with c a non-residue contributes nothing
        let nonres = (2..f.modulus())
            .find(|&c| f.pow(c, (f.modulus() as u64 - 1) / 2) != 1)
            .unwrap();
        p = p.mul(&UniPoly::new(f, vec![f.neg(nonres), 0, 1]));
        assert_eq!(p.roots(&mut rng), vec![3, 17, 10000]);
    }

    #[test]
    fn interpolation_roundtrip() {
        let f = fp();
        let p = UniPoly::new(f, vec![5, 0, 7, 1]);
        let xs: Vec<u32> = (1..=4).collect();
        let ys: Vec<u32> = xs.iter().map(|&x| p.eval(x)).collect();
        assert_eq!(UniPoly::interpolate(f, &xs, &ys), p);
    }

    proptest! {
        #[test]
        fn divrem_identity(a in prop::collection::vec(0u32..101, 0..8), b in prop::collection::vec(0u32..101, 1..5)) {
            let f = PrimeField::new(101).unwrap();
            let a = UniPoly::new(f, a);
            let b = UniPoly::new(f, b);
            prop_assume!(!b.is_zero());
            let (q, r) = a.divrem(&b);
            prop_assert_eq!(q.mul(&b).add(&r), a);
            prop_assert!(r.degree() < b.degree());
        }

        #[test]
        fn roots_are_roots(c in prop::collection::vec(0u32..101, 2..7), seed in 0u64..50) {
            let f = PrimeField::new(101).unwrap();
            let p = UniPoly::new(f, c);
            prop_assume!(!p.is_zero());
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let roots = p.roots(&mut rng);
            for &r in &roots {
                prop_assert_eq!(p.eval(r), 0);
            }
            let brute: Vec<u32> = (0..101).filter(|&x| p.eval(x) == 0).collect();
            prop_assert_eq!(roots, brute);
        }
    }
}
