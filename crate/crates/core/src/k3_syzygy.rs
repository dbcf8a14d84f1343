//! Syzygy schemes of linear syzygies: K3 surfaces `S` with `C ⊂ S ⊂ P(E)`,
//! their Pfaffian presentation and intersection numbers.

use num_rational::Ratio;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ffield::{EchelonBasis, PrimeField, PrimeFieldMatrix};
use crate::poly::Poly;
use crate::rational::{self, q, Q};
use crate::resolution::{minimal_generators, resolve_from, BigradedBettiTable, Generator, Resolution, BOUNDARY_B};
use crate::scroll::{CoxMonomial, CoxRing};

/// An element of the pencil of linear syzygies among the six `(2,-1)`
/// generators; each coordinate lies in the 4-dimensional slice `(1,-1)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SyzygyVector {
    pub coordinates: Vec<Vec<u32>>,
    pub parameters: [u32; 2],
}

/// Basis of the linear syzygies together with the generators they relate.
#[derive(Debug, Clone)]
pub struct LinearSyzygySpace {
    pub field: PrimeField,
    /// Level-one generators in slice `(2,-1)`.
    pub generators: Vec<Vec<u32>>,
    pub basis: Vec<Vec<Vec<u32>>>,
}

impl LinearSyzygySpace {
    /// `λ s₁ + μ s₂`.
    pub fn member(&self, lambda: u32, mu: u32) -> SyzygyVector {
        let f = self.field;
        let coordinates = self.basis[0]
            .iter()
            .zip(&self.basis[1])
            .map(|(u, v)| {
                u.iter()
                    .zip(v)
                    .map(|(&x, &y)| f.add(f.mul(lambda, x), f.mul(mu, y)))
                    .collect()
            })
            .collect();
        SyzygyVector {
            coordinates,
            parameters: [lambda, mu],
        }
    }

    pub fn random_member<R: Rng + ?Sized>(&self, rng: &mut R) -> SyzygyVector {
        let (l, m) = (self.field.random(rng), self.field.random_nonzero(rng));
        self.member(l, m)
    }
}

/// Linear syzygies read off the second level of a curve resolution: the
/// generators in slice `(3,-2)`, restricted to the `(2,-1)` generators.
pub fn linear_syzygy_space(ring: &CoxRing, res: &Resolution) -> Result<LinearSyzygySpace> {
    let level1 = &res.levels[1];
    let idx: Vec<usize> = (0..level1.gens.len()).filter(|&j| level1.gens[j].b == -1).collect();
    if idx.len() != 6 {
        return Err(Error::WrongDimension {
            what: "generators of twist (2,-1)",
            expected: 6,
            found: idx.len(),
        });
    }
    let basis: Vec<Vec<Vec<u32>>> = res.levels[2]
        .gens
        .iter()
        .filter(|g| g.a == 3 && g.b == -2)
        .map(|g| idx.iter().map(|&j| g.components[j].clone()).collect())
        .collect();
    if basis.len() != 2 {
        return Err(Error::WrongDimension {
            what: "linear syzygy space",
            expected: 2,
            found: basis.len(),
        });
    }
    Ok(LinearSyzygySpace {
        field: ring.field(),
        generators: idx.iter().map(|&j| level1.gens[j].components[0].clone()).collect(),
        basis,
    })
}

/// `sum s_i f_i` in slice `(3,-2)`.
pub fn pair_with_generators(ring: &CoxRing, s: &SyzygyVector, gens: &[Vec<u32>]) -> Vec<u32> {
    let f = ring.field();
    let mut acc = vec![0u32; ring.dim(3, -2)];
    for (si, gi) in s.coordinates.iter().zip(gens) {
        for (x, y) in acc.iter_mut().zip(ring.mul((1, -1, si), (2, -1, gi))) {
            *x = f.add(*x, y);
        }
    }
    acc
}

/// Dimension of the span of the entries.
pub fn syzygy_rank(field: PrimeField, s: &SyzygyVector) -> usize {
    if s.coordinates.is_empty() {
        return 0;
    }
    PrimeFieldMatrix::from_rows(field, &s.coordinates).rank()
}

/// The ideal `<f1'..f4'>` of a syzygy scheme, after the base change that
/// moves the syzygy to `(l1, l2, l3, l4, 0, 0)`.
#[derive(Debug, Clone, Serialize)]
pub struct SyzygyScheme {
    /// `f1'..f4'` in slice `(2,-1)`.
    pub forms: Vec<Vec<u32>>,
    /// `l1..l4` in slice `(1,-1)`, with `sum l_i f_i' = 0`.
    pub linear: Vec<Vec<u32>>,
    pub parameters: [u32; 2],
}

pub fn syzygy_scheme(ring: &CoxRing, s: &SyzygyVector, gens: &[Vec<u32>]) -> Result<SyzygyScheme> {
    let f = ring.field();
    let r = syzygy_rank(f, s);
    if r < 4 {
        return Err(Error::RankDeficient(r));
    }
    let n = s.coordinates.len();
    let ms = PrimeFieldMatrix::from_rows(f, &s.coordinates);
    // rows of T: a complement of the left kernel, then the kernel itself
    let kernel = ms.left_kernel();
    let mut span = EchelonBasis::from_vectors(f, n, kernel.iter());
    let mut rows = Vec::new();
    for i in 0..n {
        let mut e = vec![0u32; n];
        e[i] = 1;
        if span.insert(&e).is_some() {
            rows.push(e);
        }
    }
    rows.extend(kernel);
    let t = PrimeFieldMatrix::from_rows(f, &rows);
    let s_new = t.mul(&ms);
    let t_inv = t.inverse().ok_or(Error::RankDeficient(n))?;
    // f' = f T^{-1}
    let dim = ring.dim(2, -1);
    let mut forms = Vec::new();
    for i in 0..4 {
        let mut v = vec![0u32; dim];
        for (j, g) in gens.iter().enumerate() {
            f.axpy(&mut v, t_inv.get(j, i), g);
        }
        forms.push(v);
    }
    debug_assert!((4..n).all(|i| s_new.row(i).iter().all(|&x| x == 0)));
    let linear: Vec<Vec<u32>> = (0..4).map(|i| s_new.row(i).to_vec()).collect();
    let out = SyzygyScheme {
        forms,
        linear,
        parameters: s.parameters,
    };
    let check = SyzygyVector {
        coordinates: out.linear.clone(),
        parameters: s.parameters,
    };
    if pair_with_generators(ring, &check, &out.forms).iter().any(|&x| x != 0) {
        return Err(Error::InconsistentSystem("base-changed syzygy does not annihilate"));
    }
    Ok(out)
}

/// Span of `forms` (each `(a, b, vector)`) times all monomials, in slice `(a, b)`.
pub fn ideal_span(ring: &CoxRing, forms: &[(u32, i32, Vec<u32>)], a: u32, b: i32) -> EchelonBasis {
    let mut span = EchelonBasis::new(ring.field(), ring.dim(a as i64, b as i64));
    for (fa, fb, v) in forms {
        if *fa > a {
            continue;
        }
        let src = (a - fa, b - fb);
        if ring.dim(src.0 as i64, src.1 as i64) == 0 {
            continue;
        }
        let m = ring.mul_matrix((*fa, *fb), v, src);
        for c in 0..m.cols() {
            let col: Vec<u32> = (0..m.rows()).map(|r| m.get(r, c)).collect();
            span.insert(&col);
        }
    }
    span
}

/// `{F in S_(a,b) : x_i F in <forms> for i = 1..4}`.
pub fn colon_slice(ring: &CoxRing, forms: &[(u32, i32, Vec<u32>)], a: u32, b: i32) -> Vec<Vec<u32>> {
    let f = ring.field();
    let dim = ring.dim(a as i64, b as i64);
    if dim == 0 {
        return Vec::new();
    }
    let target = ideal_span(ring, forms, a + 1, b - 1);
    let tdim = ring.dim(a as i64 + 1, b as i64 - 1);
    let annihilator = if target.rank() == 0 {
        PrimeFieldMatrix::identity(f, tdim).to_rows()
    } else {
        PrimeFieldMatrix::from_rows(f, target.vectors()).kernel()
    };
    if annihilator.is_empty() {
        return PrimeFieldMatrix::identity(f, dim).to_rows();
    }
    let n = PrimeFieldMatrix::from_rows(f, &annihilator);
    let x1 = ring.slice(1, -1);
    let mut stacked: Option<PrimeFieldMatrix> = None;
    for i in 0..4 {
        let pos = x1.index_of(&CoxMonomial::x(i)).expect("x_i has twist (1,-1)");
        let mut xv = vec![0u32; x1.dim()];
        xv[pos] = 1;
        let block = n.mul(&ring.mul_matrix((1, -1), &xv, (a, b)));
        stacked = Some(match stacked {
            None => block,
            Some(s) => s.vstack(&block),
        });
    }
    stacked.expect("four blocks").kernel()
}

/// Expected `dim I_S(2,b) = dim S_(2,b) - chi(O_S(2H+bR))` for a K3 with
/// `H^2 = 14, H.R = 5, R^2 = 0`.
pub fn expected_surface_slice_dim(ring: &CoxRing, b: i32) -> i64 {
    ring.dim(2, b as i64) as i64 - (30 + 10 * b as i64)
}

/// The surface ideal in H-degree 2.
#[derive(Debug, Clone)]
pub struct SurfaceIdeal {
    pub scheme: SyzygyScheme,
    /// `(b, basis of I_S(2,b))` for `b = -2..=BOUNDARY_B`.
    pub slices: Vec<(i32, Vec<Vec<u32>>)>,
}

impl SurfaceIdeal {
    pub fn slice(&self, b: i32) -> &[Vec<u32>] {
        &self.slices.iter().find(|s| s.0 == b).expect("slice in window").1
    }

    /// The fifth generator: an element of `I_S(2,0)` outside `t·<f'>`.
    pub fn fifth_generator(&self, ring: &CoxRing) -> Option<Vec<u32>> {
        let gens = self.scheme_forms();
        let mut span = ideal_span(ring, &gens, 2, 0);
        self.slice(0).iter().find_map(|v| span.insert(v).map(|_| v.clone()))
    }

    fn scheme_forms(&self) -> Vec<(u32, i32, Vec<u32>)> {
        self.scheme.forms.iter().map(|v| (2, -1, v.clone())).collect()
    }

    /// All five generators `f1'..f4', q5` as `(a, b, vector)`.
    pub fn generators(&self, ring: &CoxRing) -> Result<Vec<(u32, i32, Vec<u32>)>> {
        let mut g = self.scheme_forms();
        let q5 = self.fifth_generator(ring).ok_or(Error::WrongDimension {
            what: "surface generators in slice (2,0)",
            expected: 1,
            found: 0,
        })?;
        g.push((2, 0, q5));
        Ok(g)
    }
}

/// Saturates `<f1'..f4'>` by one colon step in each slice of H-degree 2 and
/// checks the dimensions against Riemann–Roch on the surface.
pub fn surface_ideal(ring: &CoxRing, scheme: &SyzygyScheme) -> Result<SurfaceIdeal> {
    let forms: Vec<(u32, i32, Vec<u32>)> = scheme.forms.iter().map(|v| (2, -1, v.clone())).collect();
    let mut slices = Vec::new();
    for b in -2..=BOUNDARY_B {
        let basis = colon_slice(ring, &forms, 2, b);
        let expected = expected_surface_slice_dim(ring, b).max(0) as usize;
        if basis.len() != expected {
            return Err(Error::WrongDimension {
                what: "surface ideal slice",
                expected,
                found: basis.len(),
            });
        }
        slices.push((b, basis));
    }
    let out = SurfaceIdeal {
        scheme: scheme.clone(),
        slices,
    };
    // a second colon step with the enlarged ideal must not grow any slice
    let all = out.generators(ring)?;
    for (b, basis) in &out.slices {
        if colon_slice(ring, &all, 2, *b).len() != basis.len() {
            return Err(Error::WrongDimension {
                what: "stable colon",
                expected: basis.len(),
                found: usize::MAX,
            });
        }
    }
    Ok(out)
}

/// The Betti table `F_1 = O(-2H+R)^4 + O(-2H)`, `F_2 = O(-3H+2R) + O(-3H+R)^4`,
/// `F_3 = O(-5H+2R)`.
pub fn expected_k3_table() -> BigradedBettiTable {
    BigradedBettiTable::from_list(
        9,
        6,
        &[(1, 2, 1, 4), (1, 2, 0, 1), (2, 3, 2, 1), (2, 3, 1, 4), (3, 5, 2, 1)],
    )
}

pub fn is_k3_self_dual(table: &BigradedBettiTable) -> bool {
    table.is_self_dual(3, 5, 2)
}

/// Resolution of `O_S` over `P(E)` from the surface ideal slices.
pub fn k3_resolution(ring: &CoxRing, ideal: &SurfaceIdeal) -> Result<Resolution> {
    let first: Vec<Generator> = minimal_generators(ring, 2, &ideal.slices);
    if first.iter().any(|g| g.b == BOUNDARY_B) {
        return Err(Error::WindowExhausted {
            level: 1,
            a: 2,
            b: BOUNDARY_B,
        });
    }
    resolve_from(ring, 9, 6, first, &[3, 5], &[(3, 4)])
}

pub fn k3_betti_shape(ring: &CoxRing, ideal: &SurfaceIdeal) -> Result<BigradedBettiTable> {
    let table = k3_resolution(ring, ideal)?.table;
    if table.entries != expected_k3_table().entries {
        return Err(Error::ShapeMismatch(serde_json::to_string(&table).unwrap_or_default()));
    }
    Ok(table)
}

/// `2 b2 + b1 - a1 = 2` for a `5x5` presentation with `a1 + a2 = b1 + b2 = 5`.
pub fn chern_balance(a1: u32, a2: u32, b1: u32, b2: u32) -> Result<bool> {
    if a1 + a2 != 5 || b1 + b2 != 5 {
        return Err(Error::NotFiveByFive(format!("({a1},{a2}) and ({b1},{b2})")));
    }
    Ok(2 * b2 as i64 + b1 as i64 - a1 as i64 == 2)
}

fn check_skew(m: &[Vec<Poly>]) -> Result<()> {
    let n = m.len();
    for (i, row) in m.iter().enumerate() {
        if row.len() != n || !row[i].is_zero() {
            return Err(Error::NotSkew);
        }
        for j in 0..i {
            if !row[j].add(&m[j][i]).is_zero() {
                return Err(Error::NotSkew);
            }
        }
    }
    Ok(())
}

/// Pfaffian by expansion along the first row.
pub fn pfaffian(m: &[Vec<Poly>]) -> Result<Poly> {
    check_skew(m)?;
    let n = m.len();
    if n == 0 {
        return Err(Error::NotSkew);
    }
    let field = m[0][0].field();
    let nvars = m[0][0].nvars();
    if n % 2 == 1 {
        return Ok(Poly::zero(field, nvars));
    }
    Ok(pf_rec(m, &(0..n).collect::<Vec<_>>(), field, nvars))
}

fn pf_rec(m: &[Vec<Poly>], idx: &[usize], field: PrimeField, nvars: usize) -> Poly {
    if idx.is_empty() {
        return Poly::constant(field, nvars, 1);
    }
    let first = idx[0];
    let mut acc = Poly::zero(field, nvars);
    for (pos, &j) in idx.iter().enumerate().skip(1) {
        let entry = &m[first][j];
        if entry.is_zero() {
            continue;
        }
        let rest: Vec<usize> = idx.iter().copied().filter(|&k| k != first && k != j).collect();
        let term = entry.mul(&pf_rec(m, &rest, field, nvars));
        acc = if pos % 2 == 1 { acc.add(&term) } else { acc.sub(&term) };
    }
    acc
}

/// Signed principal sub-Pfaffians `(-1)^i Pf(M without row/column i)`.
pub fn signed_subpfaffians(m: &[Vec<Poly>]) -> Result<Vec<Poly>> {
    check_skew(m)?;
    let n = m.len();
    let field = m[0][0].field();
    let nvars = m[0][0].nvars();
    Ok((0..n)
        .map(|i| {
            let idx: Vec<usize> = (0..n).filter(|&k| k != i).collect();
            let p = pf_rec(m, &idx, field, nvars);
            if i % 2 == 0 {
                p
            } else {
                p.neg()
            }
        })
        .collect())
}

/// The skew matrix `psi` with first row `(0, -l1, .., -l4)` and lower block
/// built from `A`, plus the data that produced it.
#[derive(Debug, Clone, Serialize)]
pub struct SkewPresentation {
    pub psi: Vec<Vec<Poly>>,
    /// Upper-triangular entries `a_ij` (`i < j`) in slice `(1,0)`, row-major.
    pub a: Vec<Vec<u32>>,
    pub q5: Vec<u32>,
    /// Dimension of the homogeneous solution space for `A`.
    pub kernel_dim: usize,
    /// Dimension of the Koszul image inside that space.
    pub koszul_dim: usize,
}

const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

fn pair_index(i: usize, j: usize) -> usize {
    PAIRS.iter().position(|&p| p == (i, j)).expect("i < j")
}

/// Solves `q_i = sum_j a_ij l_j` for skew `A` with entries in slice `(1,0)`
/// and assembles `psi`.
pub fn pfaffian_reconstruct(ring: &CoxRing, qs: &[Vec<u32>], ls: &[Vec<u32>]) -> Result<SkewPresentation> {
    let f = ring.field();
    if qs.len() != 4 || ls.len() != 4 {
        return Err(Error::ShapeMismatch("need four forms and four linear entries".into()));
    }
    let na = ring.dim(1, 0);
    let nq = ring.dim(2, -1);
    let mut m = PrimeFieldMatrix::zeros(f, 4 * nq, 6 * na);
    for (p, &(r, c)) in PAIRS.iter().enumerate() {
        // a_rc contributes a_rc l_c to row r and -a_rc l_r to row c
        for (row, other, sign) in [(r, c, 1u32), (c, r, f.neg(1))] {
            let blk = ring.mul_matrix((1, -1), &ls[other], (1, 0));
            for i in 0..nq {
                for j in 0..na {
                    let v = blk.get(i, j);
                    if v != 0 {
                        let cur = m.get(row * nq + i, p * na + j);
                        m.set(row * nq + i, p * na + j, f.add(cur, f.mul(sign, v)));
                    }
                }
            }
        }
    }
    let rhs: Vec<u32> = qs.iter().flatten().copied().collect();
    let sol = m.solve(&rhs).ok_or(Error::InconsistentSystem("no skew matrix A"))?;
    let kernel = m.kernel();

    // Koszul image: (i,j,k) and t -> a_jk += t l_i, a_ik -= t l_j, a_ij += t l_k
    let mut koszul = EchelonBasis::new(f, 6 * na);
    for (i, j, k) in [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)] {
        for t in 0..2 {
            let mut tv = vec![0u32; 2];
            tv[t] = 1;
            let mut v = vec![0u32; 6 * na];
            for (pair, lin, sign) in [((j, k), i, 1u32), ((i, k), j, f.neg(1)), ((i, j), k, 1u32)] {
                let prod = ring.mul((0, 1, &tv), (1, -1, &ls[lin]));
                let off = pair_index(pair.0, pair.1) * na;
                for (x, y) in v[off..off + na].iter_mut().zip(prod) {
                    *x = f.add(*x, f.mul(sign, y));
                }
            }
            koszul.insert(&v);
        }
    }
    let kernel_basis = EchelonBasis::from_vectors(f, 6 * na, kernel.iter());
    if !koszul.vectors().iter().all(|v| kernel_basis.contains(v)) {
        return Err(Error::InconsistentSystem("Koszul image outside the solution kernel"));
    }

    let a: Vec<Vec<u32>> = (0..6).map(|p| sol[p * na..(p + 1) * na].to_vec()).collect();
    let ap = |i: usize, j: usize| ring.to_poly(1, 0, &a[pair_index(i, j)]);
    let lp: Vec<Poly> = ls.iter().map(|l| ring.to_poly(1, -1, l)).collect();
    let z = Poly::zero(f, 7);
    // lower block b_ij = sgn(i j k l) a_kl, so that deleting row i leaves
    // (-1)^i q_i; this flips the first row of the block relative to the
    // commonly printed layout, whose second sub-Pfaffian is not q2
    let mut psi = vec![vec![z.clone(); 5]; 5];
    for i in 0..4 {
        psi[0][i + 1] = lp[i].neg();
        psi[i + 1][0] = lp[i].clone();
    }
    let lower = [
        (1, 2, ap(2, 3)),
        (1, 3, ap(1, 3).neg()),
        (1, 4, ap(1, 2)),
        (2, 3, ap(0, 3)),
        (2, 4, ap(0, 2).neg()),
        (3, 4, ap(0, 1)),
    ];
    for (r, c, p) in lower {
        psi[r][c] = p.clone();
        psi[c][r] = p.neg();
    }
    let amat: Vec<Vec<Poly>> = (0..4)
        .map(|i| {
            (0..4)
                .map(|j| match i.cmp(&j) {
                    std::cmp::Ordering::Less => ap(i, j),
                    std::cmp::Ordering::Greater => ap(j, i).neg(),
                    std::cmp::Ordering::Equal => z.clone(),
                })
                .collect()
        })
        .collect();
    let q5p = pfaffian(&amat)?;
    let q5 = ring
        .from_poly(2, 0, &q5p)
        .ok_or(Error::InconsistentSystem("Pf(A) outside slice (2,0)"))?;
    let out = SkewPresentation {
        psi,
        a,
        q5,
        kernel_dim: kernel.len(),
        koszul_dim: koszul.rank(),
    };
    if !psi_annihilates_pfaffians(&out.psi)? {
        return Err(Error::InconsistentSystem("psi does not annihilate its Pfaffians"));
    }
    Ok(out)
}

/// `psi · pf = 0` coefficientwise.
pub fn psi_annihilates_pfaffians(psi: &[Vec<Poly>]) -> Result<bool> {
    let pf = signed_subpfaffians(psi)?;
    Ok(psi.iter().all(|row| {
        row.iter()
            .zip(&pf)
            .fold(Poly::zero(pf[0].field(), pf[0].nvars()), |acc, (x, y)| {
                acc.add(&x.mul(y))
            })
            .is_zero()
    }))
}

/// Whether the five Pfaffians of `psi` span the same slices `(2,-1)` and
/// `(2,0)` as the surface ideal generators.
pub fn pfaffians_generate(ring: &CoxRing, psi: &[Vec<Poly>], ideal: &SurfaceIdeal) -> Result<bool> {
    let pf = signed_subpfaffians(psi)?;
    let mut forms = Vec::new();
    for p in &pf {
        let (a, b) = if ring.from_poly(2, -1, p).is_some() && !p.is_zero() {
            (2, -1)
        } else {
            (2, 0)
        };
        match ring.from_poly(a, b, p) {
            Some(v) => forms.push((a, b, v)),
            None => return Ok(false),
        }
    }
    for b in -1..=BOUNDARY_B {
        let span = ideal_span(ring, &forms, 2, b);
        let target = ideal.slice(b);
        if span.rank() != target.len() || !target.iter().all(|v| span.contains(v)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Intersection numbers on the surface read from the Hilbert polynomial.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct IntersectionNumbers {
    pub h_squared: i64,
    pub h_dot_n: i64,
    pub n_squared: i64,
    pub chi_structure_sheaf: i64,
    /// Coefficients of `a` and `b` in the fitted `chi(aH + bN)`.
    pub linear_terms: [String; 2],
    pub c_dot_h: i64,
    pub c_dot_n: i64,
}

fn to_int(x: Q) -> Result<i64> {
    if x.is_integer() {
        Ok(*x.numer() as i64)
    } else {
        Err(Error::NonQuadratic)
    }
}

/// Exact fit of `chi(O_S(aH+bR))` over `a in {5,6,7}`, `b in {0,1,2}` by a
/// quadratic, and of `chi(O_C(aH+bR))` over `a in {2,3,4}` by a linear form.
pub fn intersection_numbers_from_resolution(
    k3: &BigradedBettiTable,
    curve: &BigradedBettiTable,
    e: &[u32],
) -> Result<IntersectionNumbers> {
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for a in 5..=7i128 {
        for b in 0..=2i128 {
            rows.push(vec![q(a * a), q(a * b), q(b * b), q(a), q(b), q(1)]);
            rhs.push(q(k3.euler_characteristic(e, a as i32, b as i32) as i128));
        }
    }
    let c = fit(&rows, &rhs)?;
    let two = q(2);
    let mut crow = Vec::new();
    let mut crhs = Vec::new();
    for a in 2..=4i128 {
        for b in 0..=2i128 {
            crow.push(vec![q(a), q(b), q(1)]);
            crhs.push(q(curve.euler_characteristic(e, a as i32, b as i32) as i128));
        }
    }
    let cc = fit(&crow, &crhs)?;
    Ok(IntersectionNumbers {
        h_squared: to_int(c[0] * two)?,
        h_dot_n: to_int(c[1])?,
        n_squared: to_int(c[2] * two)?,
        chi_structure_sheaf: to_int(c[5])?,
        linear_terms: [c[3].to_string(), c[4].to_string()],
        c_dot_h: to_int(cc[0])?,
        c_dot_n: to_int(cc[1])?,
    })
}

fn fit(rows: &[Vec<Q>], rhs: &[Q]) -> Result<Vec<Q>> {
    let x = rational::solve(rows, rhs).ok_or(Error::NonQuadratic)?;
    if rational::kernel(rows).is_empty() {
        Ok(x)
    } else {
        Err(Error::NonQuadratic)
    }
}

/// Linear terms of the fitted surface polynomial vanish, as they must on a
/// surface with trivial canonical class.
pub fn linear_terms_vanish(n: &IntersectionNumbers) -> bool {
    n.linear_terms
        .iter()
        .all(|s| s.parse::<Ratio<i128>>().is_ok_and(|x| x == q(0)))
}

/// Everything built from one member of the pencil.
#[derive(Debug, Clone)]
pub struct K3Surface {
    pub syzygy: SyzygyVector,
    pub ideal: SurfaceIdeal,
}

pub fn k3_from_syzygy(ring: &CoxRing, space: &LinearSyzygySpace, s: SyzygyVector) -> Result<K3Surface> {
    let scheme = syzygy_scheme(ring, &s, &space.generators)?;
    let ideal = surface_ideal(ring, &scheme)?;
    Ok(K3Surface { syzygy: s, ideal })
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::DEFAULT_PRIME;
    use crate::rng::stage_rng;
    use proptest::prelude::*;

    fn fp() -> PrimeField {
        PrimeField::new(DEFAULT_PRIME).unwrap()
    }

    fn constant_matrix(f: PrimeField, rows: &[Vec<u32>]) -> Vec<Vec<Poly>> {
        rows.iter()
            .map(|r| r.iter().map(|&c| Poly::constant(f, 0, c)).collect())
            .collect()
    }

    #[test]
    fn chern_balance_examples() {
        assert!(chern_balance(4, 1, 4, 1).unwrap());
        assert!(!chern_balance(5, 0, 5, 0).unwrap());
        assert!(!chern_balance(3, 2, 3, 2).unwrap());
        assert!(chern_balance(4, 2, 4, 1).is_err());
    }

    #[test]
    fn pfaffian_small_cases() {
        let f = fp();
        let m = constant_matrix(f, &[vec![0, 7], vec![f.neg(7), 0]]);
        assert_eq!(pfaffian(&m).unwrap(), Poly::constant(f, 0, 7));
        let (a12, a13, a14, a23, a24, a34) = (2u32, 3, 5, 7, 11, 13);
        let n = |x: u32| f.neg(x);
        let m = constant_matrix(
            f,
            &[
                vec![0, a12, a13, a14],
                vec![n(a12), 0, a23, a24],
                vec![n(a13), n(a23), 0, a34],
                vec![n(a14), n(a24), n(a34), 0],
            ],
        );
        let expect = f.add(f.sub(f.mul(a12, a34), f.mul(a13, a24)), f.mul(a14, a23));
        assert_eq!(pfaffian(&m).unwrap(), Poly::constant(f, 0, expect));
        let bad = constant_matrix(f, &[vec![0, 1], vec![1, 0]]);
        assert!(matches!(pfaffian(&bad), Err(Error::NotSkew)));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn pfaffian_squared_is_determinant(seed in any::<u64>(), half in 1usize..4) {
            let f = fp();
            let mut rng = stage_rng(seed, "pf", 0);
            let n = 2 * half;
            let mut rows = vec![vec![0u32; n]; n];
            for i in 0..n {
                for j in i + 1..n {
                    let v = f.random(&mut rng);
                    rows[i][j] = v;
                    rows[j][i] = f.neg(v);
                }
            }
            let pf = pfaffian(&constant_matrix(f, &rows)).unwrap().coeff(&[]);
            let det = PrimeFieldMatrix::from_rows(f, &rows).determinant();
            prop_assert_eq!(f.mul(pf, pf), det);
        }
    }

    #[test]
    fn syzygy_rank_trivial_cases() {
        let f = fp();
        let zero = SyzygyVector {
            coordinates: vec![vec![0; 4]; 6],
            parameters: [0, 1],
        };
        assert_eq!(syzygy_rank(f, &zero), 0);
        let equal = SyzygyVector {
            coordinates: vec![vec![1, 2, 3, 4]; 6],
            parameters: [0, 1],
        };
        assert_eq!(syzygy_rank(f, &equal), 1);
    }

    #[test]
    fn rank_three_syzygy_has_no_scheme() {
        let fx = fixture::nonic();
        let mut coordinates = vec![vec![0u32; 4]; 6];
        for i in 0..3 {
            coordinates[i][i] = 1;
        }
        let s = SyzygyVector {
            coordinates,
            parameters: [0, 1],
        };
        let space = linear_syzygy_space(&fx.ring, &fx.res).unwrap();
        assert!(matches!(
            syzygy_scheme(&fx.ring, &s, &space.generators),
            Err(Error::RankDeficient(3))
        ));
    }

    #[test]
    fn linear_syzygies_of_nonic() {
        let fx = fixture::nonic();
        let f = fx.ring.field();
        let space = linear_syzygy_space(&fx.ring, &fx.res).unwrap();
        assert_eq!(space.basis.len(), 2);
        for (l, m) in [(1, 0), (0, 1)] {
            let s = space.member(l, m);
            assert!(pair_with_generators(&fx.ring, &s, &space.generators)
                .iter()
                .all(|&x| x == 0));
        }
        let s = space.random_member(&mut stage_rng(1, "pencil", 0));
        assert_eq!(syzygy_rank(f, &s), 4);
        assert_eq!(syzygy_rank(f, &space.member(1, 0)), 4);
    }

    #[test]
    fn k3_from_generic_syzygy() {
        let fx = fixture::nonic();
        let ring = &fx.ring;
        let f = ring.field();
        let space = linear_syzygy_space(ring, &fx.res).unwrap();
        let s = space.random_member(&mut stage_rng(1, "pencil", 0));
        let k3 = k3_from_syzygy(ring, &space, s).unwrap();

        // every generator vanishes on the curve
        for v in &k3.ideal.scheme.forms {
            let mons = crate::scroll::cox_monomials(ring.e(), 2, -1);
            for pt in fx.data.values.iter().take(100) {
                let val = mons
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (m, &c)| f.add(acc, f.mul(c, m.eval(f, pt))));
                assert_eq!(val, 0);
            }
        }
        let dims: Vec<usize> = k3.ideal.slices.iter().map(|s| s.1.len()).collect();
        assert_eq!(dims, vec![0, 4, 9, 14]);

        let table = k3_betti_shape(ring, &k3.ideal).unwrap();
        assert!(is_k3_self_dual(&table));
        assert!(chern_balance(4, 1, 4, 1).unwrap());

        let nums = intersection_numbers_from_resolution(&table, &fx.res.table, ring.e()).unwrap();
        assert_eq!((nums.h_squared, nums.h_dot_n, nums.n_squared), (14, 5, 0));
        assert_eq!(nums.chi_structure_sheaf, 2);
        assert!(linear_terms_vanish(&nums));
        assert_eq!((nums.c_dot_h, nums.c_dot_n), (16, 6));

        let sc = &k3.ideal.scheme;
        let pres = pfaffian_reconstruct(ring, &sc.forms, &sc.linear).unwrap();
        assert_eq!(pres.kernel_dim, 8);
        assert_eq!(pres.koszul_dim, 8);
        assert!(psi_annihilates_pfaffians(&pres.psi).unwrap());
        assert!(k3.ideal.slice(0).iter().any(|_| true));
        let in_slice = EchelonBasis::from_vectors(f, ring.dim(2, 0), k3.ideal.slice(0).iter());
        assert!(in_slice.contains(&pres.q5));
        assert!(pfaffians_generate(ring, &pres.psi, &k3.ideal).unwrap());
    }

    #[test]
    fn reconstruction_rejects_non_syzygy() {
        let fx = fixture::nonic();
        let ring = &fx.ring;
        let space = linear_syzygy_space(ring, &fx.res).unwrap();
        let s = space.member(1, 0);
        let sc = syzygy_scheme(ring, &s, &space.generators).unwrap();
        let mut ls = sc.linear.clone();
        ls.swap(0, 1);
        assert!(pfaffian_reconstruct(ring, &sc.forms, &ls).is_err());
    }
}
