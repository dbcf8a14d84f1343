//! Plane models of genus-9 curves with a marked singular point `q`.
//!
//! A model is a plane curve of degree `d` with an ordinary singular point `q`
//! of multiplicity `d - 6` and ordinary nodes elsewhere; the lines through `q`
//! cut the degree-6 pencil. Two shapes are provided: the octic with 12 nodes
//! (q is one of them) and the nonic with an ordinary triple point and 16 nodes.
//!
//! Multiplicity `m` at a point is imposed through the Taylor coefficients of
//! order `< m` in an affine chart around the point. For `p > d` this is the
//! scheme-theoretic condition.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ffield::{PrimeField, PrimeFieldMatrix};
use crate::poly::{binomial, monomials, Poly, UniPoly};
use crate::rng::stage_rng;

pub type Point = [u32; 3];

/// Scales a nonzero point so its last nonzero coordinate is 1.
pub fn normalize(field: PrimeField, p: Point) -> Point {
    let k = (0..3).rev().find(|&i| p[i] != 0).expect("zero vector is not a point");
    let inv = field.inv(p[k]);
    [field.mul(p[0], inv), field.mul(p[1], inv), field.mul(p[2], inv)]
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaneCurveModel {
    pub prime: u32,
    pub degree: u32,
    /// Coefficients on `monomials(3, degree)`.
    pub coeffs: Vec<u32>,
    /// All singular points, `q` included, normalized.
    pub nodes: Vec<Point>,
    pub q: usize,
    pub q_multiplicity: u32,
    pub seed: u64,
}

/// The octic shape keeps its historical name.
pub type NodalOcticModel = PlaneCurveModel;

impl PlaneCurveModel {
    pub fn field(&self) -> PrimeField {
        PrimeField::new(self.prime).expect("model carries a valid prime")
    }

    pub fn form(&self) -> Poly {
        Poly::from_coeffs(self.field(), &monomials(3, self.degree), &self.coeffs)
    }

    pub fn q_point(&self) -> Point {
        self.nodes[self.q]
    }

    pub fn multiplicity_at(&self, idx: usize) -> u32 {
        if idx == self.q {
            self.q_multiplicity
        } else {
            2
        }
    }

    pub fn arithmetic_genus(&self) -> i64 {
        let d = self.degree as i64;
        (d - 1) * (d - 2) / 2
    }

    /// Geometric genus assuming the listed points are the only singularities.
    pub fn genus(&self) -> i64 {
        let delta: i64 = (0..self.nodes.len())
            .map(|i| {
                let m = self.multiplicity_at(i) as i64;
                m * (m - 1) / 2
            })
            .sum();
        self.arithmetic_genus() - delta
    }

    /// Degree of the pencil cut by lines through `q`.
    pub fn gonality(&self) -> u32 {
        self.degree - self.q_multiplicity
    }

    /// Conditions `(point, multiplicity)` of the adjoint system of degree
    /// `degree - 3 - j`, whose sections are `omega - j L`. Removing `j` lines
    /// through `q` lowers the order only at `q`.
    pub fn adjoint_conditions(&self, j: u32) -> Vec<(Point, u32)> {
        self.nodes
            .iter()
            .enumerate()
            .filter_map(|(i, &p)| {
                let m = if i == self.q {
                    (self.q_multiplicity - 1).saturating_sub(j)
                } else {
                    1
                };
                (m > 0).then_some((p, m))
            })
            .collect()
    }
}

/// Taylor coefficient rows: for a point `P`, pick an affine chart where the last
/// nonzero coordinate is 1 and expand `F(P + s e_u + t e_v)`. The row for
/// `(i, j)` gives the coefficient of `s^i t^j` as a linear form in the
/// coefficients of `F`.
pub fn taylor_row(field: PrimeField, degree: u32, point: Point, i: u32, j: u32) -> Vec<u32> {
    let p = normalize(field, point);
    let k = (0..3).rev().find(|&c| p[c] != 0).unwrap();
    let others: Vec<usize> = (0..3).filter(|&c| c != k).collect();
    let (u, v) = (others[0], others[1]);
    monomials(3, degree)
        .iter()
        .map(|e| {
            if e[u] < i || e[v] < j {
                return 0;
            }
            let b = (binomial(e[u] as u64, i as u64) * binomial(e[v] as u64, j as u64)) % field.modulus() as u64;
            let val = field.mul(field.pow(p[u], (e[u] - i) as u64), field.pow(p[v], (e[v] - j) as u64));
            field.mul(b as u32, val)
        })
        .collect()
}

fn condition_rows(field: PrimeField, degree: u32, conditions: &[(Point, u32)]) -> Vec<Vec<u32>> {
    let mut rows = Vec::new();
    for &(pt, m) in conditions {
        for total in 0..m {
            for i in 0..=total {
                rows.push(taylor_row(field, degree, pt, i, total - i));
            }
        }
    }
    rows
}

/// Basis (coefficient vectors on `monomials(3, d)`) of the degree-`d` forms with
/// the given multiplicities.
pub fn linear_system(field: PrimeField, d: u32, conditions: &[(Point, u32)]) -> Vec<Vec<u32>> {
    let n = monomials(3, d).len();
    let rows = condition_rows(field, d, conditions);
    if rows.is_empty() {
        return (0..n)
            .map(|i| {
                let mut v = vec![0; n];
                v[i] = 1;
                v
            })
            .collect();
    }
    PrimeFieldMatrix::from_rows(field, &rows).kernel()
}

/// Coefficients `c_{i, m-i}` of the order-`m` Taylor part at a point.
pub fn tangent_cone(field: PrimeField, form: &Poly, point: Point, m: u32) -> Vec<u32> {
    let d = form.total_degree().unwrap_or(0);
    let coeffs = form.coeffs_on(&monomials(3, d)).expect("plane form is homogeneous");
    (0..=m)
        .map(|i| field.dot(&taylor_row(field, d, point, i, m - i), &coeffs))
        .collect()
}

/// Does `F` vanish to order at least `m` at the point?
pub fn has_multiplicity(field: PrimeField, form: &Poly, point: Point, m: u32) -> bool {
    let d = form.total_degree().unwrap_or(0);
    let Some(coeffs) = form.coeffs_on(&monomials(3, d)) else {
        return false;
    };
    condition_rows(field, d, &[(point, m)])
        .iter()
        .all(|r| field.dot(r, &coeffs) == 0)
}

/// A binary form `sum c_i s^i t^(m-i)` is squarefree (distinct tangents).
pub fn binary_form_squarefree(field: PrimeField, c: &[u32]) -> bool {
    let m = c.len() - 1;
    let f = UniPoly::new(field, c.to_vec());
    match f.degree() {
        None => false,
        Some(deg) if deg + 1 < m => false,
        Some(_) => f.gcd(&f.derivative()).degree() == Some(0),
    }
}

/// Checks vanishing orders and ordinariness at every listed point.
pub fn validate_model(model: &PlaneCurveModel) -> Result<()> {
    let f = model.field();
    let form = model.form();
    for (i, &pt) in model.nodes.iter().enumerate() {
        let m = model.multiplicity_at(i);
        if !has_multiplicity(f, &form, pt, m) {
            return Err(Error::DegenerateConfiguration(format!(
                "form does not vanish to order {m} at point {i}"
            )));
        }
        let cone = tangent_cone(f, &form, pt, m);
        if !binary_form_squarefree(f, &cone) {
            return Err(Error::DegenerateConfiguration(format!(
                "singular point {i} is not ordinary"
            )));
        }
    }
    Ok(())
}

/// Interpolates a random curve of degree `degree` with multiplicity `q_mult`
/// at a random point `q` and ordinary nodes at `n_nodes` further random points.
pub fn construct_plane_model(
    prime: u32,
    seed: u64,
    degree: u32,
    q_mult: u32,
    n_nodes: usize,
) -> Result<PlaneCurveModel> {
    let field = PrimeField::new(prime)?;
    let mut rng = stage_rng(seed, "plane-model", 0);
    let mut nodes: Vec<Point> = Vec::with_capacity(n_nodes + 1);
    while nodes.len() < n_nodes + 1 {
        let p = [field.random(&mut rng), field.random(&mut rng), 1];
        if !nodes.contains(&p) {
            nodes.push(p);
        }
    }
    let q = 0;
    let conditions: Vec<(Point, u32)> = nodes
        .iter()
        .enumerate()
        .map(|(i, &p)| (p, if i == q { q_mult } else { 2 }))
        .collect();
    let rows = condition_rows(field, degree, &conditions);
    let m = PrimeFieldMatrix::from_rows(field, &rows);
    let rank = m.rank();
    if rank < rows.len() {
        return Err(Error::DegenerateConfiguration(format!(
            "condition matrix has rank {rank} < {}",
            rows.len()
        )));
    }
    let basis = m.kernel();
    if basis.is_empty() {
        return Err(Error::DegenerateConfiguration("no curve through the points".into()));
    }
    let n = basis[0].len();
    let mut coeffs = vec![0u32; n];
    for b in &basis {
        let c = field.random_nonzero(&mut rng);
        field.axpy(&mut coeffs, c, b);
    }
    let model = PlaneCurveModel {
        prime,
        degree,
        coeffs,
        nodes,
        q,
        q_multiplicity: q_mult,
        seed,
    };
    validate_model(&model)?;
    Ok(model)
}

/// Plane octic with 12 ordinary nodes; `q` is node 0.
pub fn construct_nodal_octic(prime: u32, seed: u64) -> Result<NodalOcticModel> {
    if prime < 10007 {
        return Err(Error::InvalidInput(format!("prime {prime} below 10007")));
    }
    construct_plane_model(prime, seed, 8, 2, 11)
}

/// Plane nonic with an ordinary triple point `q` and 16 ordinary nodes.
pub fn construct_nonic_model(prime: u32, seed: u64) -> Result<PlaneCurveModel> {
    if prime < 10007 {
        return Err(Error::InvalidInput(format!("prime {prime} below 10007")));
    }
    construct_plane_model(prime, seed, 9, 3, 16)
}

/// Dimension of the solution space of the octic node conditions.
pub fn octic_solution_dimension(model: &NodalOcticModel) -> usize {
    let f = model.field();
    let conds: Vec<(Point, u32)> = model
        .nodes
        .iter()
        .enumerate()
        .map(|(i, &p)| (p, model.multiplicity_at(i)))
        .collect();
    linear_system(f, model.degree, &conds).len()
}

/// Restriction of the curve equation to the line `a + s b`, as a polynomial in `s`.
pub fn restrict_to_line(field: PrimeField, form: &Poly, a: Point, b: Point) -> UniPoly {
    let d = form.total_degree().unwrap_or(0);
    let xs: Vec<u32> = (0..=d).collect();
    let ys: Vec<u32> = xs
        .iter()
        .map(|&s| {
            let pt = [
                field.add(a[0], field.mul(s, b[0])),
                field.add(a[1], field.mul(s, b[1])),
                field.add(a[2], field.mul(s, b[2])),
            ];
            form.eval(&pt)
        })
        .collect();
    UniPoly::interpolate(field, &xs, &ys)
}

pub fn is_smooth_point(form: &Poly, pt: Point) -> bool {
    (0..3).any(|i| form.derivative(i).eval(&pt) != 0)
}

/// Distinct smooth `F_p`-points of the curve, found on random lines.
pub fn sample_smooth_points<R: Rng + ?Sized>(model: &PlaneCurveModel, count: usize, rng: &mut R) -> Result<Vec<Point>> {
    let f = model.field();
    let form = model.form();
    let partials: Vec<Poly> = (0..3).map(|i| form.derivative(i)).collect();
    let mut out: Vec<Point> = Vec::with_capacity(count);
    let budget = 20 * count + 50;
    for _ in 0..budget {
        if out.len() >= count {
            break;
        }
        let a = [f.random(rng), f.random(rng), f.random(rng)];
        let b = [f.random(rng), f.random(rng), f.random(rng)];
        let g = restrict_to_line(f, &form, a, b);
        if g.is_zero() {
            continue;
        }
        for s in g.roots(rng) {
            let pt = [
                f.add(a[0], f.mul(s, b[0])),
                f.add(a[1], f.mul(s, b[1])),
                f.add(a[2], f.mul(s, b[2])),
            ];
            if pt == [0, 0, 0] {
                continue;
            }
            let pt = normalize(f, pt);
            if model.nodes.contains(&pt) || out.contains(&pt) {
                continue;
            }
            if partials.iter().all(|d| d.eval(&pt) == 0) {
                continue;
            }
            out.push(pt);
            if out.len() >= count {
                break;
            }
        }
    }
    if out.len() < count {
        return Err(Error::InsufficientRationalPoints {
            wanted: count,
            found: out.len(),
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct NodeReport {
    pub vanishing: Vec<bool>,
    pub ordinary: Vec<bool>,
    pub arithmetic_genus: i64,
    pub genus: i64,
    pub expected_genus: i64,
    pub failures: Vec<String>,
}

impl NodeReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Re-checks the model invariants without failing early.
pub fn verify_node_report(model: &PlaneCurveModel) -> NodeReport {
    let f = model.field();
    let form = model.form();
    let mut failures = Vec::new();
    let mut vanishing = Vec::new();
    let mut ordinary = Vec::new();
    for (i, &pt) in model.nodes.iter().enumerate() {
        let m = model.multiplicity_at(i);
        let v = has_multiplicity(f, &form, pt, m);
        let o = v && binary_form_squarefree(f, &tangent_cone(f, &form, pt, m));
        if !v {
            failures.push(format!("point {i}: order of vanishing below {m}"));
        } else if !o {
            failures.push(format!("point {i}: not ordinary"));
        }
        vanishing.push(v);
        ordinary.push(o);
    }
    let genus = model.genus();
    if genus != 9 {
        failures.push(format!("genus {genus} differs from 9"));
    }
    NodeReport {
        vanishing,
        ordinary,
        arithmetic_genus: model.arithmetic_genus(),
        genus,
        expected_genus: 9,
        failures,
    }
}
