//! The residual model `C' ⊂ P^3`, its net of quartics, the plane cubic `Γ`
//! traced by the pencil of syzygy-scheme surfaces, and the smoothness test
//! for the quartic over the singular point of `Γ`.

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ffield::{EchelonBasis, PrimeField, PrimeFieldMatrix};
use crate::k3_syzygy::{ideal_span, k3_from_syzygy, LinearSyzygySpace, SurfaceIdeal};
use crate::plane_curve::{restrict_to_line, PlaneCurveModel, Point};
use crate::poly::{monomials, Poly, UniPoly};
use crate::scroll::{CanonicalCoordinates, CoxMonomial, CoxRing};

pub type P3Point = [u32; 4];

fn normalize_vec(f: PrimeField, v: &mut [u32]) -> bool {
    let Some(k) = v.iter().rposition(|&x| x != 0) else {
        return false;
    };
    let inv = f.inv(v[k]);
    f.scale(v, inv);
    true
}

/// Images `(Q1:..:Q4)` of curve points, normalized.
pub fn residual_image(coords: &CanonicalCoordinates, points: &[Point]) -> Result<Vec<P3Point>> {
    let f = coords.field();
    let qs = coords.quartic_forms();
    points
        .iter()
        .map(|pt| {
            let mut v = [qs[0].eval(pt), qs[1].eval(pt), qs[2].eval(pt), qs[3].eval(pt)];
            if normalize_vec(f, &mut v) {
                Ok(v)
            } else {
                Err(Error::BasepointHit)
            }
        })
        .collect()
}

fn random_invertible<R: Rng + ?Sized>(f: PrimeField, n: usize, rng: &mut R) -> PrimeFieldMatrix {
    loop {
        let m = PrimeFieldMatrix::random(f, n, n, rng);
        if m.determinant() != 0 {
            return m;
        }
    }
}

/// `p(M x)` for a linear change of coordinates `M`.
fn transform(p: &Poly, m: &PrimeFieldMatrix) -> Poly {
    let f = p.field();
    let n = m.rows();
    let subs: Vec<Poly> = (0..n)
        .map(|i| {
            let mut l = Poly::zero(f, n);
            for j in 0..n {
                let mut e = vec![0; n];
                e[j] = 1;
                l.add_term(e, m.get(i, j));
            }
            l
        })
        .collect();
    p.compose(&subs)
}

/// `x`-coordinate of `M^{-1} P` in the chart `z = 1`, if finite.
fn chart_x(f: PrimeField, minv: &PrimeFieldMatrix, p: Point) -> Option<u32> {
    let v = minv.mul_vec(&p);
    (v[2] != 0).then(|| f.div(v[0], v[2]))
}

/// `Res_y(a(x,y,1), b(x,y,1))` as a polynomial in `x`, by interpolation.
fn resultant_in_x(f: PrimeField, a: &Poly, b: &Poly, degree_bound: usize) -> UniPoly {
    let xs: Vec<u32> = (1..=degree_bound as u32 + 1).collect();
    let ys: Vec<u32> = xs
        .iter()
        .map(|&x0| {
            let ua = restrict_to_line(f, a, [x0, 0, 1], [0, 1, 0]);
            let ub = restrict_to_line(f, b, [x0, 0, 1], [0, 1, 0]);
            ua.resultant(&ub)
        })
        .collect();
    UniPoly::interpolate(f, &xs, &ys)
}

/// Degree of `C'`: intersections of `C` with the pullback of a random plane,
/// minus the base-point contributions at the singular points of the model.
pub fn residual_degree<R: Rng + ?Sized>(
    model: &PlaneCurveModel,
    coords: &CanonicalCoordinates,
    rng: &mut R,
) -> Result<usize> {
    let f = model.field();
    let qs = coords.quartic_forms();
    for _ in 0..10 {
        let c: Vec<u32> = (0..4).map(|_| f.random(rng)).collect();
        let g = qs
            .iter()
            .zip(&c)
            .fold(Poly::zero(f, 3), |acc, (q, &ci)| acc.add(&q.scale(ci)));
        let m = random_invertible(f, 3, rng);
        let minv = m.inverse().expect("invertible by construction");
        let (ft, gt) = (transform(&model.form(), &m), transform(&g, &m));
        let (df, dg) = (model.degree as usize, g.total_degree().unwrap_or(0) as usize);
        // leading coefficients in y must be constants
        if ft.eval(&[0, 1, 0]) == 0 || gt.eval(&[0, 1, 0]) == 0 {
            continue;
        }
        let mut r = resultant_in_x(f, &ft, &gt, df * dg);
        let mut base_xs = Vec::new();
        let mut ok = true;
        for (i, &p) in model.nodes.iter().enumerate() {
            let mc = model.multiplicity_at(i);
            let madj = if i == model.q { model.q_multiplicity - 2 } else { 1 };
            let Some(x0) = chart_x(f, &minv, p) else {
                ok = false;
                break;
            };
            if base_xs.contains(&x0) {
                ok = false;
                break;
            }
            base_xs.push(x0);
            for _ in 0..mc * madj {
                let (quot, rem) = r.divrem(&UniPoly::new(f, vec![f.neg(x0), 1]));
                if !rem.is_zero() {
                    return Err(Error::DegenerateConfiguration(
                        "base point without expected order".into(),
                    ));
                }
                r = quot;
            }
        }
        if !ok || base_xs.iter().any(|&x0| r.eval(x0) == 0) {
            continue;
        }
        return Ok(r.degree().unwrap_or(0));
    }
    Err(Error::DegenerateConfiguration("no generic projection found".into()))
}

/// Exponents on `monomials(4, 4)`.
pub fn quartic_monomials() -> Vec<Vec<u32>> {
    monomials(4, 4)
}

fn evaluation_matrix(f: PrimeField, d: u32, points: &[P3Point]) -> PrimeFieldMatrix {
    let mons = monomials(4, d);
    PrimeFieldMatrix::from_fn(f, points.len(), mons.len(), |i, j| {
        mons[j]
            .iter()
            .zip(points[i])
            .fold(1, |acc, (&e, v)| f.mul(acc, f.pow(v, e as u64)))
    })
}

/// Forms of degree `d` in four variables vanishing at all points.
pub fn forms_through(f: PrimeField, d: u32, points: &[P3Point]) -> Vec<Vec<u32>> {
    evaluation_matrix(f, d, points).kernel()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct QuarticNet {
    pub prime: u32,
    /// Three quartics, coefficients on `monomials(4, 4)`.
    pub basis: Vec<Vec<u32>>,
    pub coordinate_frame: Vec<String>,
}

impl QuarticNet {
    pub fn field(&self) -> PrimeField {
        PrimeField::new(self.prime).expect("valid prime")
    }

    pub fn vanishes_on(&self, points: &[P3Point]) -> bool {
        let m = evaluation_matrix(self.field(), 4, points);
        self.basis.iter().all(|b| m.mul_vec(b).iter().all(|&x| x == 0))
    }

    /// Coordinates of a quartic in the net basis.
    pub fn coordinates(&self, quartic: &[u32]) -> Option<[u32; 3]> {
        let f = self.field();
        let m = PrimeFieldMatrix::from_fn(f, 35, 3, |i, j| self.basis[j][i]);
        m.solve(quartic).map(|c| [c[0], c[1], c[2]])
    }

    pub fn quartic_at(&self, c: &[u32; 3]) -> Vec<u32> {
        let f = self.field();
        let mut v = vec![0u32; 35];
        for (b, &ci) in self.basis.iter().zip(c) {
            f.axpy(&mut v, ci, b);
        }
        v
    }
}

/// The quartics through `C'`, which must form a net. `points` and `check`
/// are disjoint samples.
pub fn quartic_net(f: PrimeField, points: &[P3Point], check: &[P3Point]) -> Result<QuarticNet> {
    if points.len() < 45 {
        return Err(Error::InsufficientRationalPoints {
            wanted: 45,
            found: points.len(),
        });
    }
    let basis = forms_through(f, 4, points);
    if basis.len() != 3 {
        return Err(Error::UnexpectedNetDimension(basis.len()));
    }
    let net = QuarticNet {
        prime: f.modulus(),
        basis,
        coordinate_frame: ["Q1", "Q2", "Q3", "Q4"].map(String::from).to_vec(),
    };
    if !net.vanishes_on(check) {
        return Err(Error::SampleDisagreement { a: 4, b: -4 });
    }
    Ok(net)
}

/// The quartic `F` with `F(x1..x4)` in the surface ideal, on `monomials(4,4)`:
/// the kernel of `F -> t0^3 F` modulo the span of the generators in slice `(4,-1)`.
pub fn image_quartic(ring: &CoxRing, ideal: &SurfaceIdeal) -> Result<Vec<u32>> {
    let f = ring.field();
    let gens = ideal.generators(ring)?;
    let span = ideal_span(ring, &gens, 4, -1);
    let dim = ring.dim(4, -1);
    let annihilator = PrimeFieldMatrix::from_rows(f, span.vectors()).kernel();
    let src = ring.slice(4, -4);
    let dst = ring.slice(4, -1);
    let t3 = CoxMonomial {
        alpha: [0; 5],
        beta: [3, 0],
    };
    let mut times_t3 = PrimeFieldMatrix::zeros(f, dim, src.dim());
    for (j, m) in src.monomials.iter().enumerate() {
        times_t3.set(dst.index_of(&m.mul(&t3)).expect("t0^3 multiple"), j, 1);
    }
    let relations = if annihilator.is_empty() {
        PrimeFieldMatrix::identity(f, src.dim()).to_rows()
    } else {
        PrimeFieldMatrix::from_rows(f, &annihilator).mul(&times_t3).kernel()
    };
    if relations.len() != 1 {
        return Err(Error::RelationSpaceDimension(relations.len()));
    }
    // reindex onto monomials(4,4)
    let mons = quartic_monomials();
    let mut out = vec![0u32; mons.len()];
    for (m, &c) in src.monomials.iter().zip(&relations[0]) {
        let idx = mons
            .iter()
            .position(|e| e[..] == m.alpha[..4])
            .expect("quartic in x1..x4");
        out[idx] = c;
    }
    normalize_vec(f, &mut out);
    Ok(out)
}

/// Point of `P(V)` for one member `(λ:μ)` of the pencil.
pub fn pencil_point(ring: &CoxRing, space: &LinearSyzygySpace, net: &QuarticNet, param: [u32; 2]) -> Result<[u32; 3]> {
    let k3 = k3_from_syzygy(ring, space, space.member(param[0], param[1]))?;
    let quartic = image_quartic(ring, &k3.ideal)?;
    let mut c = net
        .coordinates(&quartic)
        .ok_or(Error::InconsistentSystem("quartic outside the net"))?;
    normalize_vec(ring.field(), &mut c);
    Ok(c)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GammaSample {
    pub parameter: [u32; 2],
    pub point: [u32; 3],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct GammaCurve {
    pub prime: u32,
    /// Coefficients on `monomials(3, 3)`.
    pub cubic: Vec<u32>,
    pub samples: Vec<GammaSample>,
    /// Samples used for fitting; the rest are holdouts.
    pub fitted: usize,
}

impl GammaCurve {
    pub fn form(&self) -> Poly {
        let f = PrimeField::new(self.prime).expect("valid prime");
        Poly::from_coeffs(f, &monomials(3, 3), &self.cubic)
    }
}

fn plane_evaluation(f: PrimeField, d: u32, pts: &[[u32; 3]]) -> PrimeFieldMatrix {
    let mons = monomials(3, d);
    PrimeFieldMatrix::from_fn(f, pts.len(), mons.len(), |i, j| {
        mons[j]
            .iter()
            .zip(pts[i])
            .fold(1, |acc, (&e, v)| f.mul(acc, f.pow(v, e as u64)))
    })
}

/// Fits the cubic through the first 12 samples and checks the rest.
pub fn fit_gamma(f: PrimeField, samples: Vec<GammaSample>) -> Result<GammaCurve> {
    const FIT: usize = 12;
    if samples.len() < FIT {
        return Err(Error::InsufficientRationalPoints {
            wanted: FIT,
            found: samples.len(),
        });
    }
    let pts: Vec<[u32; 3]> = samples.iter().map(|s| s.point).collect();
    for d in 1..=2 {
        if !plane_evaluation(f, d, &pts[..FIT]).kernel().is_empty() {
            return Err(Error::DegreeTooLow(d as usize));
        }
    }
    let kernel = plane_evaluation(f, 3, &pts[..FIT]).kernel();
    if kernel.is_empty() {
        return Err(Error::NoCubic);
    }
    if kernel.len() > 1 {
        return Err(Error::NonUnique(kernel.len()));
    }
    let mut cubic = kernel[0].clone();
    normalize_vec(f, &mut cubic);
    let holdout = plane_evaluation(f, 3, &pts[FIT..]);
    if pts.len() > FIT && holdout.mul_vec(&cubic).iter().any(|&x| x != 0) {
        return Err(Error::SampleDisagreement { a: 3, b: 0 });
    }
    Ok(GammaCurve {
        prime: f.modulus(),
        cubic,
        samples,
        fitted: FIT,
    })
}

/// A line whose restriction of the cubic has no root in `F_p` certifies
/// that the cubic has no linear factor over `F_p`.
pub fn irreducibility_witness<R: Rng + ?Sized>(cubic: &Poly, rng: &mut R, tries: usize) -> Option<[Point; 2]> {
    let f = cubic.field();
    for _ in 0..tries {
        let a = [f.random(rng), f.random(rng), f.random(rng)];
        let b = [f.random(rng), f.random(rng), f.random(rng)];
        let g = restrict_to_line(f, cubic, a, b);
        // the point b itself is s = infinity
        if g.degree() == Some(3) && g.roots(rng).is_empty() {
            return Some([a, b]);
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SingularPoint {
    pub point: [u32; 3],
    /// Singular points over the algebraic closure.
    pub count: usize,
    /// Rank of the Hessian at the point: 2 for a node.
    pub hessian_rank: usize,
    /// Tangent directions, when rational, as points on a complementary line.
    pub tangents: Vec<[u32; 2]>,
    /// Basis `(e, f)` of the complementary line used for directions.
    pub frame: [[u32; 3]; 2],
}

fn hessian_at(g: &Poly, p: &[u32; 3]) -> PrimeFieldMatrix {
    let f = g.field();
    PrimeFieldMatrix::from_fn(f, 3, 3, |i, j| g.derivative(i).derivative(j).eval(p))
}

fn complement_frame(f: PrimeField, p: &[u32; 3]) -> [[u32; 3]; 2] {
    let e = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let m = PrimeFieldMatrix::from_rows(f, &[p.to_vec(), e[i].to_vec(), e[j].to_vec()]);
        if m.determinant() != 0 {
            return [e[i], e[j]];
        }
    }
    unreachable!("a nonzero point extends to a basis")
}

/// Direction `(u0:u1)` of the line from `p` to `q` in the frame `(e, f)`.
fn direction(f: PrimeField, p: &[u32; 3], frame: &[[u32; 3]; 2], q: &[u32; 3]) -> Option<[u32; 2]> {
    let m = PrimeFieldMatrix::from_fn(f, 3, 3, |i, j| [*p, frame[0], frame[1]][j][i]);
    let c = m.solve(q)?;
    let mut u = [c[1], c[2]];
    normalize_vec(f, &mut u).then_some(u)
}

/// The singular points of a plane cubic, via resultants of its partials in
/// random coordinates; exactly one is expected.
pub fn gamma_singular_point<R: Rng + ?Sized>(cubic: &Poly, rng: &mut R) -> Result<SingularPoint> {
    let f = cubic.field();
    let partials: Vec<Poly> = (0..3).map(|i| cubic.derivative(i)).collect();
    for _ in 0..8 {
        let m = random_invertible(f, 3, rng);
        let g = transform(cubic, &m);
        let (gx, gy) = (g.derivative(0), g.derivative(1));
        if [&g, &gx, &gy].iter().any(|p| p.eval(&[0, 1, 0]) == 0) {
            continue;
        }
        // nothing singular on z = 0 in the new coordinates
        let at_infinity = |h: &Poly| restrict_to_line(f, h, [1, 0, 0], [0, 1, 0]);
        let inf = at_infinity(&g.derivative(0))
            .gcd(&at_infinity(&g.derivative(1)))
            .gcd(&at_infinity(&g.derivative(2)));
        if inf.degree().unwrap_or(0) > 0 || (0..3).all(|i| g.derivative(i).eval(&[0, 1, 0]) == 0) {
            continue;
        }
        let r1 = resultant_in_x(f, &gx, &gy, 4);
        let r2 = resultant_in_x(f, &g, &gx, 6);
        if r1.is_zero() || r2.is_zero() {
            return Err(Error::UnexpectedSingularCount(usize::MAX));
        }
        let h = r1.gcd(&r2).squarefree();
        let count = h.degree().unwrap_or(0);
        if count == 0 {
            return Err(Error::UnexpectedSingularCount(0));
        }
        let mut found = Vec::new();
        let mut spurious = false;
        for x0 in h.roots(rng) {
            let line = |p: &Poly| restrict_to_line(f, p, [x0, 0, 1], [0, 1, 0]);
            let common = line(&gx).gcd(&line(&gy)).gcd(&line(&g));
            match common.degree() {
                Some(1) => {
                    let y0 = f.neg(common.coeffs()[0]);
                    let mut pt: Vec<u32> = m.mul_vec(&[x0, y0, 1]);
                    normalize_vec(f, &mut pt);
                    let pt = [pt[0], pt[1], pt[2]];
                    if partials.iter().all(|d| d.eval(&pt) == 0) {
                        found.push(pt);
                    } else {
                        spurious = true;
                    }
                }
                _ => spurious = true,
            }
        }
        if spurious {
            continue;
        }
        if found.is_empty() {
            return Err(Error::SingularPointNotRational);
        }
        if count != 1 {
            return Err(Error::UnexpectedSingularCount(count));
        }
        let point = found[0];
        let hess = hessian_at(cubic, &point);
        let frame = complement_frame(f, &point);
        // tangent cone on the complementary line: Q(u) = (u0 e + u1 f)^T Hess (u0 e + u1 f)
        let q = |a: &[u32; 3], b: &[u32; 3]| f.dot(a, &hess.mul_vec(b));
        let (c00, c01, c11) = (
            q(&frame[0], &frame[0]),
            q(&frame[0], &frame[1]),
            q(&frame[1], &frame[1]),
        );
        let mut tangents = Vec::new();
        if c00 != 0 {
            // c00 u0^2 + 2 c01 u0 u1 + c11 u1^2, with u1 = 1
            let quad = UniPoly::new(f, vec![c11, f.mul(2, c01), c00]);
            for r in quad.roots(rng) {
                tangents.push([r, 1]);
            }
        } else {
            tangents.push([1, 0]);
            let lin = UniPoly::new(f, vec![c11, f.mul(2, c01)]);
            for r in lin.roots(rng) {
                tangents.push([r, 1]);
            }
        }
        return Ok(SingularPoint {
            point,
            count,
            hessian_rank: hess.rank(),
            tangents,
            frame,
        });
    }
    Err(Error::SingularPointNotRational)
}

/// The two pencil parameters over the node: the parameter-to-direction map
/// is fitted as a Möbius transformation and inverted at the two tangents.
pub fn singular_fiber_parameters(gamma: &GammaCurve, sing: &SingularPoint) -> Result<[[u32; 2]; 2]> {
    let f = PrimeField::new(gamma.prime)?;
    if sing.tangents.len() != 2 {
        return Err(Error::PreimageCount(sing.tangents.len()));
    }
    let mut rows = Vec::new();
    for s in &gamma.samples {
        let Some(u) = direction(f, &sing.point, &sing.frame, &s.point) else {
            continue;
        };
        let [l, m] = s.parameter;
        // u0 (γλ + δμ) - u1 (αλ + βμ) = 0 in unknowns (α, β, γ, δ)
        rows.push(vec![
            f.neg(f.mul(u[1], l)),
            f.neg(f.mul(u[1], m)),
            f.mul(u[0], l),
            f.mul(u[0], m),
        ]);
    }
    let kernel = PrimeFieldMatrix::from_rows(f, &rows).kernel();
    if kernel.len() != 1 {
        return Err(Error::NonUnique(kernel.len()));
    }
    let [a, b, c, d] = [kernel[0][0], kernel[0][1], kernel[0][2], kernel[0][3]];
    if f.sub(f.mul(a, d), f.mul(b, c)) == 0 {
        return Err(Error::DegenerateConfiguration("Möbius fit is singular".into()));
    }
    let mut out = [[0u32; 2]; 2];
    for (k, u) in sing.tangents.iter().enumerate() {
        let mut lm = [
            f.sub(f.mul(d, u[0]), f.mul(b, u[1])),
            f.sub(f.mul(a, u[1]), f.mul(c, u[0])),
        ];
        normalize_vec(f, &mut lm);
        out[k] = lm;
    }
    if out[0] == out[1] {
        return Err(Error::PreimageCount(1));
    }
    Ok(out)
}

fn projectively_equal(f: PrimeField, a: &[u32], b: &[u32]) -> bool {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    normalize_vec(f, &mut a) && normalize_vec(f, &mut b) && a == b
}

pub fn same_point(f: PrimeField, a: &[u32; 3], b: &[u32; 3]) -> bool {
    projectively_equal(f, a, b)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SmoothnessVerdict {
    pub smooth: bool,
    /// `"determinant-ratio"` or `"rank"`.
    pub method: String,
    pub attempts: usize,
}

/// Rows `(m / x_i^3) ∂_i F` of the Macaulay matrix in degree 9, one per
/// degree-9 monomial, assigned to the first `i` with `x_i^3 | m`.
fn macaulay_matrices(partials: &[Poly]) -> (PrimeFieldMatrix, PrimeFieldMatrix) {
    let f = partials[0].field();
    let mons = monomials(4, 9);
    let index = |e: &[u32]| mons.iter().position(|m| m[..] == e[..]).expect("degree 9");
    let n = mons.len();
    let mut m = PrimeFieldMatrix::zeros(f, n, n);
    let mut nonreduced = Vec::new();
    for (r, mon) in mons.iter().enumerate() {
        let i = (0..4).find(|&i| mon[i] >= 3).expect("degree 9 in 4 variables");
        let mut shift = mon.clone();
        shift[i] -= 3;
        for (e, &c) in partials[i].terms() {
            let prod: Vec<u32> = e.iter().zip(&shift).map(|(a, b)| a + b).collect();
            m.set(r, index(&prod), c);
        }
        if mon.iter().filter(|&&x| x >= 3).count() >= 2 {
            nonreduced.push(r);
        }
    }
    let sub = PrimeFieldMatrix::from_fn(f, nonreduced.len(), nonreduced.len(), |i, j| {
        m.get(nonreduced[i], nonreduced[j])
    });
    (m, sub)
}

/// Partials have a common zero over the closure iff the degree-9 part of
/// their ideal is not everything.
fn rank_criterion(partials: &[Poly]) -> bool {
    let f = partials[0].field();
    let mons9 = monomials(4, 9);
    let mut span = EchelonBasis::new(f, mons9.len());
    for p in partials {
        for s in monomials(4, 6) {
            let mut v = vec![0u32; mons9.len()];
            for (e, &c) in p.terms() {
                let prod: Vec<u32> = e.iter().zip(&s).map(|(a, b)| a + b).collect();
                let k = mons9.iter().position(|m| *m == prod).expect("degree 9");
                v[k] = f.add(v[k], c);
            }
            span.insert(&v);
        }
    }
    span.rank() == mons9.len()
}

/// Smoothness of a quartic surface: nonvanishing of the resultant of its
/// four partials, as `det M / det M'`, retrying in random coordinates when
/// `det M'` vanishes, with the rank criterion as the last resort.
pub fn macaulay_resultant_smooth<R: Rng + ?Sized>(quartic: &Poly, rng: &mut R) -> Result<SmoothnessVerdict> {
    if quartic.nvars() != 4 || quartic.is_zero() || quartic.total_degree() != Some(4) || !quartic.is_homogeneous() {
        return Err(Error::InvalidInput(
            "expected a nonzero quartic form in four variables".into(),
        ));
    }
    let f = quartic.field();
    let mut current = quartic.clone();
    for attempt in 1..=4 {
        let partials: Vec<Poly> = (0..4).map(|i| current.derivative(i)).collect();
        if partials.iter().all(Poly::is_zero) {
            return Ok(SmoothnessVerdict {
                smooth: false,
                method: "determinant-ratio".into(),
                attempts: attempt,
            });
        }
        let (m, sub) = macaulay_matrices(&partials);
        if sub.rows() == 0 || sub.determinant() != 0 {
            return Ok(SmoothnessVerdict {
                smooth: m.determinant() != 0,
                method: "determinant-ratio".into(),
                attempts: attempt,
            });
        }
        current = transform(quartic, &random_invertible(f, 4, rng));
    }
    let partials: Vec<Poly> = (0..4).map(|i| quartic.derivative(i)).collect();
    Ok(SmoothnessVerdict {
        smooth: rank_criterion(&partials),
        method: "rank".into(),
        attempts: 5,
    })
}

/// Quartic on `monomials(4,4)` as a polynomial.
pub fn quartic_poly(f: PrimeField, coeffs: &[u32]) -> Poly {
    Poly::from_coeffs(f, &quartic_monomials(), coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::DEFAULT_PRIME;
    use crate::k3_syzygy::{fixture, linear_syzygy_space};
    use crate::plane_curve::sample_smooth_points;
    use crate::rng::stage_rng;

    fn fp() -> PrimeField {
        PrimeField::new(DEFAULT_PRIME).unwrap()
    }

    fn var(i: usize, n: usize) -> Poly {
        Poly::var(fp(), n, i)
    }

    #[test]
    fn fermat_quartic_is_smooth() {
        let q = (0..4).fold(Poly::zero(fp(), 4), |acc, i| acc.add(&var(i, 4).pow(4)));
        let v = macaulay_resultant_smooth(&q, &mut stage_rng(0, "t", 0)).unwrap();
        assert!(v.smooth);
        assert!(rank_criterion(&(0..4).map(|i| q.derivative(i)).collect::<Vec<_>>()));
    }

    #[test]
    fn fourth_power_is_singular() {
        let q = var(0, 4).pow(4);
        assert!(!macaulay_resultant_smooth(&q, &mut stage_rng(0, "t", 0)).unwrap().smooth);
    }

    #[test]
    fn cone_over_plane_quartic_is_singular() {
        // x^4 + y^4 + z^4 is singular at (0:0:0:1)
        let q = (0..3).fold(Poly::zero(fp(), 4), |acc, i| acc.add(&var(i, 4).pow(4)));
        let v = macaulay_resultant_smooth(&q, &mut stage_rng(0, "t", 0)).unwrap();
        assert!(!v.smooth);
        assert!(!rank_criterion(&(0..4).map(|i| q.derivative(i)).collect::<Vec<_>>()));
    }

    #[test]
    fn random_quartic_agrees_with_rank_criterion() {
        let f = fp();
        let mut rng = stage_rng(3, "t", 0);
        let coeffs: Vec<u32> = (0..35).map(|_| f.random(&mut rng)).collect();
        let q = quartic_poly(f, &coeffs);
        let v = macaulay_resultant_smooth(&q, &mut rng).unwrap();
        assert!(v.smooth);
        assert_eq!(
            v.smooth,
            rank_criterion(&(0..4).map(|i| q.derivative(i)).collect::<Vec<_>>())
        );
    }

    #[test]
    fn nodal_cubic_singular_point() {
        // x y z + x^3 + y^3 has a node at (0:0:1)
        let f = fp();
        let (x, y, z) = (var(0, 3), var(1, 3), var(2, 3));
        let g = x.mul(&y).mul(&z).add(&x.pow(3)).add(&y.pow(3));
        let s = gamma_singular_point(&g, &mut stage_rng(1, "t", 0)).unwrap();
        assert!(same_point(f, &s.point, &[0, 0, 1]));
        assert_eq!(s.count, 1);
        assert_eq!(s.hessian_rank, 2);
        assert_eq!(s.tangents.len(), 2);
    }

    #[test]
    fn smooth_cubic_has_no_singular_point() {
        let g = (0..3).fold(Poly::zero(fp(), 3), |acc, i| acc.add(&var(i, 3).pow(3)));
        assert!(matches!(
            gamma_singular_point(&g, &mut stage_rng(1, "t", 0)),
            Err(Error::UnexpectedSingularCount(0))
        ));
    }

    #[test]
    fn reducible_cubic_has_no_witness() {
        let (x, y, z) = (var(0, 3), var(1, 3), var(2, 3));
        let g = x.mul(&y.pow(2).add(&z.pow(2)).add(&x.pow(2)));
        assert!(irreducibility_witness(&g, &mut stage_rng(1, "t", 0), 40).is_none());
    }

    #[test]
    fn conic_samples_are_rejected() {
        let f = fp();
        let samples: Vec<GammaSample> = (1..=14u32)
            .map(|t| GammaSample {
                parameter: [t, 1],
                point: [f.mul(t, t), t, 1],
            })
            .collect();
        assert!(matches!(fit_gamma(f, samples), Err(Error::DegreeTooLow(2))));
    }

    #[test]
    fn nonic_pipeline() {
        let fx = fixture::nonic();
        let ring = &fx.ring;
        let f = ring.field();
        let model = &fx.data.model;
        let coords = &fx.data.coords;
        let mut rng = stage_rng(1, "residual", 0);
        let pts = sample_smooth_points(model, 120, &mut rng).unwrap();
        let img = residual_image(coords, &pts).unwrap();
        let mut distinct = img.clone();
        distinct.sort();
        distinct.dedup();
        assert_eq!(distinct.len(), img.len());
        assert_eq!(residual_degree(model, coords, &mut rng).unwrap(), 10);
        assert!(forms_through(f, 3, &img).is_empty());
        let net = quartic_net(f, &img[..60], &img[60..]).unwrap();

        let space = linear_syzygy_space(ring, &fx.res).unwrap();
        let mut prng = stage_rng(1, "pencil", 0);
        let mut samples = Vec::new();
        while samples.len() < 16 {
            let param = [f.random(&mut prng), 1];
            samples.push(GammaSample {
                parameter: param,
                point: pencil_point(ring, &space, &net, param).unwrap(),
            });
        }
        assert!(!same_point(f, &samples[0].point, &samples[1].point));
        let gamma = fit_gamma(f, samples).unwrap();
        let cubic = gamma.form();
        assert!(irreducibility_witness(&cubic, &mut rng, 30).is_some());
        let sing = gamma_singular_point(&cubic, &mut rng).unwrap();
        eprintln!("singular point {:?}", sing);
        let params = singular_fiber_parameters(&gamma, &sing).unwrap();
        for p in params {
            assert!(same_point(
                f,
                &pencil_point(ring, &space, &net, p).unwrap(),
                &sing.point
            ));
        }
        let q = quartic_poly(f, &net.quartic_at(&sing.point));
        assert!(macaulay_resultant_smooth(&q, &mut rng).unwrap().smooth);
    }

    /// The octic's residual curve has the right degree but sits on four
    /// independent quartics, which is why the pipeline runs on the nonic.
    #[test]
    fn octic_residual_curve_is_special() {
        for seed in 1..4 {
            let model = crate::plane_curve::construct_nodal_octic(DEFAULT_PRIME, seed).unwrap();
            let pencil = crate::scroll::pencil_from_node(&model);
            let coords = crate::scroll::canonical_coordinates(&model, &pencil).unwrap();
            let mut rng = stage_rng(seed, "residual", 0);
            let pts = sample_smooth_points(&model, 120, &mut rng).unwrap();
            let img = residual_image(&coords, &pts).unwrap();
            assert_eq!(residual_degree(&model, &coords, &mut rng).unwrap(), 10);
            assert!(forms_through(fp(), 3, &img).is_empty());
            assert!(matches!(
                quartic_net(fp(), &img[..60], &img[60..]),
                Err(Error::UnexpectedNetDimension(4))
            ));
        }
    }
}
