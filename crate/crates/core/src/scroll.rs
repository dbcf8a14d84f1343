//! The scroll swept out by the pencil, its bigraded Cox ring, and restriction
//! of Cox monomials to the curve by point evaluation.
//!
//! Grading: `t0, t1` have degree `(0,1)` and `x_i` has degree `(1, -e_i)`. A
//! summand `O(-aH + cR)` of a resolution has its generator in slice `(a, -c)`.
//! Under restriction `x_i -> Q_i` (`i <= 4`), `x_5 -> Phi`, `t_j -> l_j`, every
//! monomial of slice `(a, b)` becomes a plane form of degree `(d-3)a + b`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ffield::{EchelonBasis, PrimeField, PrimeFieldMatrix};
use crate::plane_curve::{linear_system, PlaneCurveModel, Point};
use crate::poly::{monomials, Poly};

pub const GENERAL_TYPE: [u32; 5] = [1, 1, 1, 1, 0];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScrollType {
    pub e: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pencil {
    /// Two linear forms through `q`, as coefficients on `monomials(3, 1)`.
    pub lines: [Vec<u32>; 2],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CanonicalCoordinates {
    pub prime: u32,
    pub curve_degree: u32,
    pub lines: [Vec<u32>; 2],
    /// The four sections of `omega - L`, of plane degree `d - 4`.
    pub quartics: Vec<Vec<u32>>,
    /// Adjoint of degree `d - 3` completing the products to a basis.
    pub phi: Vec<u32>,
    pub basis_order: Vec<String>,
}

impl CanonicalCoordinates {
    pub fn field(&self) -> PrimeField {
        PrimeField::new(self.prime).expect("valid prime")
    }

    fn plane_form(&self, deg: u32, c: &[u32]) -> Poly {
        Poly::from_coeffs(self.field(), &monomials(3, deg), c)
    }

    pub fn line_forms(&self) -> [Poly; 2] {
        [self.plane_form(1, &self.lines[0]), self.plane_form(1, &self.lines[1])]
    }

    pub fn quartic_forms(&self) -> Vec<Poly> {
        self.quartics
            .iter()
            .map(|q| self.plane_form(self.curve_degree - 4, q))
            .collect()
    }

    pub fn phi_form(&self) -> Poly {
        self.plane_form(self.curve_degree - 3, &self.phi)
    }

    /// The nine canonical sections in basis order.
    pub fn canonical_forms(&self) -> Vec<Poly> {
        let [l0, l1] = self.line_forms();
        let mut out = Vec::with_capacity(9);
        for q in self.quartic_forms() {
            out.push(q.mul(&l0));
            out.push(q.mul(&l1));
        }
        out.push(self.phi_form());
        out
    }

    /// Values `[Q1..Q4, Phi, l0, l1]` at a plane point.
    pub fn cox_values(&self, pt: &Point) -> [u32; 7] {
        let qs = self.quartic_forms();
        let [l0, l1] = self.line_forms();
        [
            qs[0].eval(pt),
            qs[1].eval(pt),
            qs[2].eval(pt),
            qs[3].eval(pt),
            self.phi_form().eval(pt),
            l0.eval(pt),
            l1.eval(pt),
        ]
    }
}

pub fn pencil_from_node(model: &PlaneCurveModel) -> Pencil {
    let f = model.field();
    let basis = linear_system(f, 1, &[(model.q_point(), 1)]);
    Pencil {
        lines: [basis[0].clone(), basis[1].clone()],
    }
}

/// `h^0(omega - jL)` for `j = 0, 1, ...` until it vanishes.
pub fn adjoint_dimensions(model: &PlaneCurveModel) -> Vec<usize> {
    let f = model.field();
    let mut dims = Vec::new();
    let mut j = 0u32;
    while model.degree >= 3 + j {
        let dim = linear_system(f, model.degree - 3 - j, &model.adjoint_conditions(j)).len();
        dims.push(dim);
        if dim == 0 {
            break;
        }
        j += 1;
    }
    if dims.last() != Some(&0) {
        dims.push(0);
    }
    dims
}

/// Dual partition of the jumps of `h^0(omega - jL)`.
pub fn scroll_type_from_dimensions(dims: &[usize]) -> ScrollType {
    let parts = dims[0] - dims.get(1).copied().unwrap_or(0);
    let jumps: Vec<usize> = (1..dims.len())
        .map(|j| dims[j] - dims.get(j + 1).copied().unwrap_or(0))
        .collect();
    let e = (1..=parts)
        .map(|i| jumps.iter().filter(|&&c| c >= i).count() as u32)
        .collect();
    ScrollType { e }
}

pub fn scroll_type(model: &PlaneCurveModel) -> Result<ScrollType> {
    let t = scroll_type_from_dimensions(&adjoint_dimensions(model));
    let expected = model.genus() - model.gonality() as i64 + 1;
    if t.e.iter().sum::<u32>() as i64 != expected {
        return Err(Error::UnexpectedScrollType(t.e));
    }
    Ok(t)
}

pub fn canonical_coordinates(model: &PlaneCurveModel, pencil: &Pencil) -> Result<CanonicalCoordinates> {
    let f = model.field();
    let d = model.degree;
    let canon = linear_system(f, d - 3, &model.adjoint_conditions(0));
    if canon.len() != 9 {
        return Err(Error::WrongDimension {
            what: "canonical system",
            expected: 9,
            found: canon.len(),
        });
    }
    let quartics = linear_system(f, d - 4, &model.adjoint_conditions(1));
    if quartics.len() != 4 {
        return Err(Error::UnexpectedScrollType(scroll_type(model)?.e));
    }
    let mons = monomials(3, d - 3);
    let lines: Vec<Poly> = pencil
        .lines
        .iter()
        .map(|l| Poly::from_coeffs(f, &monomials(3, 1), l))
        .collect();
    let canon_span = EchelonBasis::from_vectors(f, mons.len(), canon.iter());
    let mut products = EchelonBasis::new(f, mons.len());
    for q in &quartics {
        let qf = Poly::from_coeffs(f, &monomials(3, d - 4), q);
        for l in &lines {
            let v = qf.mul(l).coeffs_on(&mons).expect("homogeneous product");
            if !canon_span.contains(&v) {
                return Err(Error::MultiplicationMapDegenerate(products.rank()));
            }
            products.insert(&v);
        }
    }
    if products.rank() != 8 {
        return Err(Error::MultiplicationMapDegenerate(products.rank()));
    }
    let phi = canon
        .iter()
        .find(|v| !products.contains(v))
        .expect("canonical system exceeds the product span")
        .clone();
    let mut basis_order = Vec::with_capacity(9);
    for i in 1..=4 {
        for j in 1..=2 {
            basis_order.push(format!("Q{i}l{j}"));
        }
    }
    basis_order.push("Phi".into());
    Ok(CanonicalCoordinates {
        prime: model.prime,
        curve_degree: d,
        lines: pencil.lines.clone(),
        quartics,
        phi,
        basis_order,
    })
}

/// Checks the basis invariants: nine independent adjoints, all vanishing at
/// every singular point.
pub fn verify_coordinates(model: &PlaneCurveModel, coords: &CanonicalCoordinates) -> bool {
    let f = model.field();
    let forms = coords.canonical_forms();
    let mons = monomials(3, model.degree - 3);
    let vecs: Vec<Vec<u32>> = forms.iter().filter_map(|p| p.coeffs_on(&mons)).collect();
    if vecs.len() != 9 || PrimeFieldMatrix::from_rows(f, &vecs).rank() != 9 {
        return false;
    }
    forms.iter().all(|p| model.nodes.iter().all(|n| p.eval(n) == 0))
}

/// Index of the canonical coordinate `Q_j l_i` in basis order, for the 2x4
/// scroll matrix.
pub fn scroll_matrix() -> [[usize; 4]; 2] {
    let mut m = [[0usize; 4]; 2];
    for (i, row) in m.iter_mut().enumerate() {
        for (j, slot) in row.iter_mut().enumerate() {
            *slot = 2 * j + i;
        }
    }
    m
}

/// The six 2x2 minors of the scroll matrix, as quadrics on `P^8`.
pub fn scroll_minors(field: PrimeField) -> Vec<Poly> {
    let m = scroll_matrix();
    let var = |k: usize| Poly::var(field, 9, k);
    let mut out = Vec::new();
    for a in 0..4 {
        for b in a + 1..4 {
            let p = var(m[0][a]).mul(&var(m[1][b]));
            let q = var(m[0][b]).mul(&var(m[1][a]));
            out.push(p.sub(&q));
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CoxMonomial {
    pub alpha: [u32; 5],
    pub beta: [u32; 2],
}

impl CoxMonomial {
    pub fn bidegree(&self, e: &[u32]) -> (u32, i32) {
        let a: u32 = self.alpha.iter().sum();
        let w: u32 = self.alpha.iter().zip(e).map(|(x, y)| x * y).sum();
        (a, (self.beta[0] + self.beta[1]) as i32 - w as i32)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut alpha = self.alpha;
        for (x, y) in alpha.iter_mut().zip(other.alpha) {
            *x += y;
        }
        Self {
            alpha,
            beta: [self.beta[0] + other.beta[0], self.beta[1] + other.beta[1]],
        }
    }

    pub fn t(j: usize) -> Self {
        let mut beta = [0; 2];
        beta[j] = 1;
        Self { alpha: [0; 5], beta }
    }

    pub fn x(i: usize) -> Self {
        let mut alpha = [0; 5];
        alpha[i] = 1;
        Self { alpha, beta: [0; 2] }
    }

    /// Exponent vector `(x1..x5, t0, t1)`.
    pub fn exponents(&self) -> Vec<u32> {
        let mut v = self.alpha.to_vec();
        v.extend_from_slice(&self.beta);
        v
    }

    pub fn eval(&self, field: PrimeField, values: &[u32; 7]) -> u32 {
        self.exponents()
            .iter()
            .zip(values)
            .fold(1, |acc, (&k, &v)| field.mul(acc, field.pow(v, k as u64)))
    }
}

/// All monomials of slice `(a, b)`, alpha descending, then beta descending in `t0`.
pub fn cox_monomials(e: &[u32], a: u32, b: i32) -> Vec<CoxMonomial> {
    assert_eq!(e.len(), 5);
    let mut out = Vec::new();
    for alpha in monomials(5, a) {
        let w: i32 = alpha.iter().zip(e).map(|(x, y)| (x * y) as i32).sum();
        let tb = b + w;
        if tb < 0 {
            continue;
        }
        let alpha: [u32; 5] = alpha.try_into().unwrap();
        for b0 in (0..=tb as u32).rev() {
            out.push(CoxMonomial {
                alpha,
                beta: [b0, tb as u32 - b0],
            });
        }
    }
    out
}

/// `sum over |alpha| = a of (b + alpha.e + 1)`, the Euler characteristic of
/// `O(aH + bR)` for `a >= 0`; zero for `-4 <= a < 0`.
pub fn euler_scroll(e: &[u32], a: i32, b: i32) -> i64 {
    if a < 0 {
        let r = e.len() as i32;
        assert!(a > -r, "Euler characteristic outside the vanishing range");
        return 0;
    }
    monomials(e.len(), a as u32)
        .iter()
        .map(|alpha| {
            let w: i64 = alpha.iter().zip(e).map(|(x, y)| (x * y) as i64).sum();
            b as i64 + w + 1
        })
        .sum()
}

/// Restriction matrix: entry (monomial, point) is the monomial evaluated at
/// the point through the canonical coordinates.
pub fn evaluate_monomials(field: PrimeField, e: &[u32], values: &[[u32; 7]], a: u32, b: i32) -> PrimeFieldMatrix {
    let mons = cox_monomials(e, a, b);
    PrimeFieldMatrix::from_fn(field, mons.len(), values.len(), |i, j| mons[i].eval(field, &values[j]))
}

/// `h^0(omega^a L^b)` bound used for sample sizes: exact when nonspecial.
pub fn curve_section_bound(a: u32, b: i32) -> usize {
    let deg = 16 * a as i64 + 6 * b as i64;
    if deg < 0 {
        0
    } else {
        (deg - 8).max(9).max(deg / 2 + 1) as usize
    }
}

/// One graded piece of the Cox ring with a monomial index.
#[derive(Debug)]
pub struct Slice {
    pub a: u32,
    pub b: i32,
    pub monomials: Vec<CoxMonomial>,
    index: HashMap<CoxMonomial, usize>,
}

impl Slice {
    pub fn dim(&self) -> usize {
        self.monomials.len()
    }

    pub fn index_of(&self, m: &CoxMonomial) -> Option<usize> {
        self.index.get(m).copied()
    }
}

/// Bigraded Cox ring of `P(E)` with cached slices.
#[derive(Debug)]
pub struct CoxRing {
    field: PrimeField,
    e: Vec<u32>,
    cache: Mutex<HashMap<(u32, i32), Arc<Slice>>>,
}

impl CoxRing {
    pub fn new(field: PrimeField, e: &[u32]) -> Self {
        Self {
            field,
            e: e.to_vec(),
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn e(&self) -> &[u32] {
        &self.e
    }

    pub fn slice(&self, a: u32, b: i32) -> Arc<Slice> {
        let mut cache = self.cache.lock().expect("slice cache poisoned");
        cache
            .entry((a, b))
            .or_insert_with(|| {
                let monomials = cox_monomials(&self.e, a, b);
                let index = monomials.iter().enumerate().map(|(i, m)| (*m, i)).collect();
                Arc::new(Slice { a, b, monomials, index })
            })
            .clone()
    }

    pub fn dim(&self, a: i64, b: i64) -> usize {
        if a < 0 {
            return 0;
        }
        self.slice(a as u32, b as i32).dim()
    }

    /// Product of `f` in slice `(a1,b1)` and `g` in slice `(a2,b2)`.
    pub fn mul(&self, f: (u32, i32, &[u32]), g: (u32, i32, &[u32])) -> Vec<u32> {
        let (sf, sg) = (self.slice(f.0, f.1), self.slice(g.0, g.1));
        let target = self.slice(f.0 + g.0, f.1 + g.1);
        let fld = self.field;
        let mut out = vec![0u32; target.dim()];
        for (i, &cf) in f.2.iter().enumerate() {
            if cf == 0 {
                continue;
            }
            for (j, &cg) in g.2.iter().enumerate() {
                if cg == 0 {
                    continue;
                }
                let k = target
                    .index_of(&sf.monomials[i].mul(&sg.monomials[j]))
                    .expect("product lands in the target slice");
                out[k] = fld.add(out[k], fld.mul(cf, cg));
            }
        }
        out
    }

    /// Matrix of multiplication by `g` (in slice `g_deg`) from slice `src`;
    /// columns are indexed by the monomials of `src`.
    pub fn mul_matrix(&self, g_deg: (u32, i32), g: &[u32], src: (u32, i32)) -> PrimeFieldMatrix {
        let s = self.slice(src.0, src.1);
        let sg = self.slice(g_deg.0, g_deg.1);
        let target = self.slice(src.0 + g_deg.0, src.1 + g_deg.1);
        let mut m = PrimeFieldMatrix::zeros(self.field, target.dim(), s.dim());
        for (col, mon) in s.monomials.iter().enumerate() {
            for (j, &c) in g.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                let row = target
                    .index_of(&mon.mul(&sg.monomials[j]))
                    .expect("product lands in the target slice");
                let v = self.field.add(m.get(row, col), c);
                m.set(row, col, v);
            }
        }
        m
    }

    /// Converts a slice vector into a sparse polynomial in `(x1..x5, t0, t1)`.
    pub fn to_poly(&self, a: u32, b: i32, v: &[u32]) -> Poly {
        let s = self.slice(a, b);
        let mut p = Poly::zero(self.field, 7);
        for (m, &c) in s.monomials.iter().zip(v) {
            p.add_term(m.exponents(), c);
        }
        p
    }

    /// Inverse of [`CoxRing::to_poly`]; `None` if the polynomial is not in the slice.
    pub fn from_poly(&self, a: u32, b: i32, p: &Poly) -> Option<Vec<u32>> {
        let s = self.slice(a, b);
        let mut out = vec![0u32; s.dim()];
        for (exps, &c) in p.terms() {
            let m = CoxMonomial {
                alpha: exps[..5].try_into().unwrap(),
                beta: [exps[5], exps[6]],
            };
            out[s.index_of(&m)?] = c;
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::DEFAULT_PRIME;
    use crate::plane_curve::{construct_nodal_octic, construct_nonic_model, sample_smooth_points};
    use crate::rng::stage_rng;
    use proptest::prelude::*;

    const E: [u32; 5] = GENERAL_TYPE;

    #[test]
    fn monomial_counts() {
        assert_eq!(cox_monomials(&E, 1, 0).len(), 9);
        assert_eq!(cox_monomials(&E, 0, 2).len(), 3);
        assert_eq!(cox_monomials(&E, 2, -1).len(), 24);
        assert_eq!(cox_monomials(&E, 1, -1).len(), 4);
    }

    #[test]
    fn euler_values() {
        assert_eq!(euler_scroll(&E, 0, 5), 6);
        assert_eq!(euler_scroll(&E, 1, 0), 9);
        assert_eq!(euler_scroll(&E, 2, 0), 39);
        assert_eq!(euler_scroll(&E, -3, 7), 0);
    }

    #[test]
    fn scroll_type_of_general_models() {
        let nonic = construct_nonic_model(DEFAULT_PRIME, 1).unwrap();
        let dims = adjoint_dimensions(&nonic);
        assert_eq!(&dims[..2], &[9, 4]);
        assert_eq!(scroll_type(&nonic).unwrap().e, GENERAL_TYPE.to_vec());

        let octic = construct_nodal_octic(DEFAULT_PRIME, 1).unwrap();
        assert_eq!(&adjoint_dimensions(&octic)[..2], &[9, 4]);
        assert_eq!(scroll_type(&octic).unwrap().e.iter().sum::<u32>(), 4);
    }

    #[test]
    fn dual_partition() {
        assert_eq!(scroll_type_from_dimensions(&[9, 4, 0]).e, vec![1, 1, 1, 1, 0]);
        assert_eq!(scroll_type_from_dimensions(&[9, 4, 1, 0]).e, vec![2, 1, 1, 0, 0]);
    }

    fn setup() -> (PlaneCurveModel, CanonicalCoordinates, Vec<[u32; 7]>) {
        let m = construct_nonic_model(DEFAULT_PRIME, 2).unwrap();
        let c = canonical_coordinates(&m, &pencil_from_node(&m)).unwrap();
        let mut rng = stage_rng(2, "scroll-test", 0);
        let pts = sample_smooth_points(&m, 160, &mut rng).unwrap();
        let vals = pts.iter().map(|p| c.cox_values(p)).collect();
        (m, c, vals)
    }

    #[test]
    fn pencil_cuts_degree_six() {
        let m = construct_nonic_model(DEFAULT_PRIME, 2).unwrap();
        let f = m.field();
        let pencil = pencil_from_node(&m);
        let lines: Vec<Poly> = pencil
            .lines
            .iter()
            .map(|l| Poly::from_coeffs(f, &monomials(3, 1), l))
            .collect();
        for l in &lines {
            assert_eq!(l.eval(&m.q_point()), 0);
        }
        // parametrize a member of the pencil through q and a random direction
        let mut rng = stage_rng(2, "pencil", 0);
        let dir = [f.random(&mut rng), f.random(&mut rng), f.random(&mut rng)];
        let g = crate::plane_curve::restrict_to_line(f, &m.form(), m.q_point(), dir);
        // s = 0 is q, a root of order 3 (the multiplicity); 6 further intersections
        assert_eq!(g.degree(), Some(9));
        assert!(g.coeffs()[..3].iter().all(|&c| c == 0));
        assert_ne!(g.coeffs()[3], 0);
    }

    #[test]
    fn coordinates_are_valid() {
        let (m, c, _) = setup();
        assert!(verify_coordinates(&m, &c));
        let mut broken = c.clone();
        let forms = c.canonical_forms();
        broken.phi = forms[0].coeffs_on(&monomials(3, m.degree - 3)).unwrap();
        assert!(!verify_coordinates(&m, &broken));
    }

    #[test]
    fn minors_vanish_on_curve() {
        let (m, c, _) = setup();
        let f = m.field();
        let minors = scroll_minors(f);
        let mut rng = stage_rng(9, "minors", 0);
        let pts = sample_smooth_points(&m, 50, &mut rng).unwrap();
        let forms = c.canonical_forms();
        for p in &pts {
            let img: Vec<u32> = forms.iter().map(|g| g.eval(p)).collect();
            for q in &minors {
                assert_eq!(q.eval(&img), 0);
            }
        }
        let rand_pt: Vec<u32> = (0..9).map(|_| f.random(&mut rng)).collect();
        assert!(minors.iter().any(|q| q.eval(&rand_pt) != 0));
        let mons = monomials(9, 2);
        let rows: Vec<Vec<u32>> = minors.iter().map(|q| q.coeffs_on(&mons).unwrap()).collect();
        assert_eq!(PrimeFieldMatrix::from_rows(f, &rows).rank(), 6);
    }

    #[test]
    fn restriction_ranks_follow_riemann_roch() {
        let (m, _, vals) = setup();
        let f = m.field();
        assert_eq!(evaluate_monomials(f, &E, &vals[..14], 1, 0).rank(), 9);
        assert_eq!(evaluate_monomials(f, &E, &vals[..5], 0, 1).rank(), 2);
        let m21 = evaluate_monomials(f, &E, &vals[..30], 2, -1);
        assert_eq!(m21.rank(), 18);
        assert_eq!(m21.transpose().kernel().len(), 6);
        for (a, b) in [(1u32, 1i32), (2, 0), (2, 1), (3, 0), (3, 1), (3, 2)] {
            let h0 = (16 * a as i32 + 6 * b + 1 - 9) as usize;
            let ev = evaluate_monomials(f, &E, &vals[..h0 + 10], a, b);
            assert_eq!(ev.rank(), h0, "slice ({a},{b})");
        }
    }

    #[test]
    fn kernel_does_not_depend_on_sample() {
        let (m, _, vals) = setup();
        let f = m.field();
        let k1 = evaluate_monomials(f, &E, &vals[..50], 2, 0).left_kernel();
        let k2 = evaluate_monomials(f, &E, &vals[50..100], 2, 0).left_kernel();
        assert_eq!(k1.len(), 15);
        let b1 = EchelonBasis::from_vectors(f, 39, k1.iter());
        assert!(k2.iter().all(|v| b1.contains(v)));
    }

    #[test]
    fn ring_multiplication_matches_polynomials() {
        let f = PrimeField::new(DEFAULT_PRIME).unwrap();
        let ring = CoxRing::new(f, &E);
        let s1 = ring.slice(1, -1).dim();
        let s2 = ring.slice(1, 0).dim();
        let a: Vec<u32> = (0..s1 as u32).map(|i| i + 1).collect();
        let b: Vec<u32> = (0..s2 as u32).map(|i| 3 * i + 2).collect();
        let prod = ring.mul((1, -1, &a), (1, 0, &b));
        let expect = ring.to_poly(1, -1, &a).mul(&ring.to_poly(1, 0, &b));
        assert_eq!(ring.to_poly(2, -1, &prod), expect);
        assert_eq!(ring.from_poly(2, -1, &expect), Some(prod.clone()));
        let m = ring.mul_matrix((1, -1), &a, (1, 0));
        assert_eq!(m.mul_vec(&b), prod);
    }

    proptest! {
        #[test]
        fn euler_counts_monomials(a in 0u32..4, b in -1i32..4) {
            let all_nonneg = monomials(5, a).iter().all(|al| {
                b + al.iter().zip(&E).map(|(x, y)| (x * y) as i32).sum::<i32>() >= 0
            });
            prop_assume!(all_nonneg);
            prop_assert_eq!(euler_scroll(&E, a as i32, b), cox_monomials(&E, a, b).len() as i64);
        }

        #[test]
        fn monomials_have_requested_bidegree(a in 0u32..4, b in -3i32..3) {
            for m in cox_monomials(&E, a, b) {
                prop_assert_eq!(m.bidegree(&E), (a, b));
            }
        }
    }
}
