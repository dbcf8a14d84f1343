//! Even lattices of signature `(1, n-1)`: inertia, determinants, root and
//! isotropic class enumeration, positivity tests for divisor classes and
//! the dimension bookkeeping of the moduli spaces.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{q, Q};

pub type Class = Vec<i64>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GramLattice {
    pub gram: Vec<Vec<i64>>,
    pub basis_labels: Vec<String>,
}

impl GramLattice {
    pub fn new(gram: Vec<Vec<i64>>, labels: &[&str]) -> Result<Self> {
        let n = gram.len();
        if gram.iter().any(|r| r.len() != n) || (!labels.is_empty() && labels.len() != n) {
            return Err(Error::InvalidInput("Gram matrix must be square".into()));
        }
        for i in 0..n {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::InvalidInput("Gram matrix must be symmetric".into()));
                }
            }
        }
        let basis_labels = if labels.is_empty() {
            (1..=n).map(|i| format!("e{i}")).collect()
        } else {
            labels.iter().map(|s| s.to_string()).collect()
        };
        Ok(Self { gram, basis_labels })
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn pair(&self, v: &[i64], w: &[i64]) -> i64 {
        let mut acc = 0i128;
        for (i, &vi) in v.iter().enumerate() {
            if vi == 0 {
                continue;
            }
            for (j, &wj) in w.iter().enumerate() {
                acc += vi as i128 * self.gram[i][j] as i128 * wj as i128;
            }
        }
        acc as i64
    }

    pub fn norm(&self, v: &[i64]) -> i64 {
        self.pair(v, v)
    }

    pub fn unit(&self, i: usize) -> Class {
        let mut v = vec![0; self.rank()];
        v[i] = 1;
        v
    }
}

/// `𝔥` in the basis `(H, C, N)`.
pub fn h_lattice() -> GramLattice {
    GramLattice::new(vec![vec![14, 16, 5], vec![16, 16, 6], vec![5, 6, 0]], &["H", "C", "N"]).expect("valid")
}

/// `𝔥'` in the basis `(H', C, Q1, Q2)`.
pub fn hprime_lattice() -> GramLattice {
    GramLattice::new(
        vec![
            vec![4, 10, 1, 1],
            vec![10, 16, 0, 0],
            vec![1, 0, -2, 0],
            vec![1, 0, 0, -2],
        ],
        &["H'", "C", "Q1", "Q2"],
    )
    .expect("valid")
}

/// `𝔫` in the basis `(n1, n2)`.
pub fn n_lattice() -> GramLattice {
    GramLattice::new(vec![vec![4, 10], vec![10, 16]], &["n1", "n2"]).expect("valid")
}

/// The rank-4 lattice in the basis `(H1, C, N1, H2)` with `H1.H2 = a`, `N1.H2 = b`.
pub fn hprime_template(a: i64, b: i64) -> GramLattice {
    GramLattice::new(
        vec![
            vec![14, 16, 5, a],
            vec![16, 16, 6, 16],
            vec![5, 6, 0, b],
            vec![a, 16, b, 14],
        ],
        &["H1", "C", "N1", "H2"],
    )
    .expect("valid")
}

/// Columns `H1 - N1, C, C - H1, C - H2` in the basis `(H1, C, N1, H2)`.
pub fn hprime_change_matrix() -> Vec<Vec<i64>> {
    vec![
        vec![1, 0, -1, 0],
        vec![0, 1, 1, 1],
        vec![-1, 0, 0, 0],
        vec![0, 0, 0, -1],
    ]
}

/// The embedding `𝔥 -> 𝔥'`: columns are the images of `H, C, N`.
pub fn h_into_hprime() -> Vec<Vec<i64>> {
    // H -> C - Q1, C -> C, N -> C - Q1 - H'
    vec![vec![0, 0, -1], vec![1, 1, 1], vec![-1, 0, -1], vec![0, 0, 0]]
}

/// `(positive, negative, zero)` by rational symmetric reduction.
pub fn signature(g: &GramLattice) -> (usize, usize, usize) {
    let n = g.rank();
    let mut m: Vec<Vec<Q>> = g
        .gram
        .iter()
        .map(|r| r.iter().map(|&x| q(x as i128)).collect())
        .collect();
    let (mut pos, mut neg) = (0, 0);
    let mut active: Vec<usize> = (0..n).collect();
    while !active.is_empty() {
        let pivot = active.iter().copied().find(|&i| !m[i][i].is_zero());
        let p = match pivot {
            Some(p) => p,
            None => {
                // all active diagonals vanish: add e_j to e_i for a nonzero m_ij
                let pair = active
                    .iter()
                    .flat_map(|&i| active.iter().map(move |&j| (i, j)))
                    .find(|&(i, j)| i != j && !m[i][j].is_zero());
                let Some((i, j)) = pair else {
                    break;
                };
                for k in 0..n {
                    let v = m[j][k];
                    m[i][k] += v;
                }
                for k in 0..n {
                    let v = m[k][j];
                    m[k][i] += v;
                }
                i
            }
        };
        let d = m[p][p];
        if d.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        active.retain(|&i| i != p);
        let pivot_row = m[p].clone();
        for &i in &active {
            let factor = m[i][p] / d;
            if factor.is_zero() {
                continue;
            }
            for &k in &active {
                m[i][k] -= pivot_row[k] * factor;
            }
        }
    }
    (pos, neg, n - pos - neg)
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn determinant(m: &[Vec<i64>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            let Some(s) = (k + 1..n).find(|&i| a[i][k] != 0) else {
                return 0;
            };
            a.swap(k, s);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

/// Laplace expansion along the first row; an independent check on [`determinant`].
pub fn cofactor_determinant(m: &[Vec<i64>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    (0..n)
        .map(|j| {
            let minor: Vec<Vec<i64>> = m[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect())
                .collect();
            let s = if j % 2 == 0 { 1 } else { -1 };
            s * m[0][j] as i128 * cofactor_determinant(&minor)
        })
        .sum()
}

pub fn discriminant(g: &GramLattice) -> i128 {
    determinant(&g.gram)
}

/// Picard–Lefschetz reflection `v + (v.d) d` in a root `d`.
pub fn reflect(g: &GramLattice, v: &[i64], d: &[i64]) -> Result<Class> {
    if g.norm(d) != -2 {
        return Err(Error::NotARoot);
    }
    let c = g.pair(v, d);
    Ok(v.iter().zip(d).map(|(&x, &y)| x + c * y).collect())
}

/// Unimodular `U` (columns) with `a U = (gcd, 0, .., 0)`.
fn column_reduce(a: &[i128]) -> (i128, Vec<Vec<i128>>) {
    let n = a.len();
    let mut row = a.to_vec();
    let mut u: Vec<Vec<i128>> = (0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect();
    for j in 1..n {
        // combine columns 0 and j
        let (x, y) = (row[0], row[j]);
        if y == 0 {
            continue;
        }
        let e = x.extended_gcd(&y);
        let (g, s, t) = (e.gcd, e.x, e.y);
        let (p, r) = (-y / g, x / g);
        // new col0 = s c0 + t cj, new colj = p c0 + r cj; det = s r - t p = 1
        for row_u in u.iter_mut() {
            let (c0, cj) = (row_u[0], row_u[j]);
            row_u[0] = s * c0 + t * cj;
            row_u[j] = p * c0 + r * cj;
        }
        row[0] = g;
        row[j] = 0;
    }
    if row[0] < 0 {
        row[0] = -row[0];
        for r in u.iter_mut() {
            r[0] = -r[0];
        }
    }
    (row[0], u)
}

/// Rows of `(Q_ii, Q_ij / Q_ii)`: `x^T P x = sum_i Q_ii (x_i + sum_{j>i} Q_ij x_j)^2`.
fn definite_decomposition(p: &[Vec<Q>]) -> Option<Vec<Vec<Q>>> {
    let n = p.len();
    let mut m = p.to_vec();
    for i in 0..n {
        if !m[i][i].is_positive() {
            return None;
        }
        for j in i + 1..n {
            m[j][i] = m[i][j];
            m[i][j] = m[i][j] / m[i][i];
        }
        for k in i + 1..n {
            for l in k..n {
                let v = m[k][i] * m[i][l];
                m[k][l] -= v;
            }
        }
    }
    Some(m)
}

fn floor_q(x: Q) -> i128 {
    x.floor().to_integer()
}

/// Integers `t` with `d (t - z)^2 <= b` for `d > 0`, `b >= 0`.
fn integer_window(d: Q, z: Q, b: Q) -> Vec<i128> {
    if b.is_negative() {
        return Vec::new();
    }
    let approx = ((*b.numer() as f64 / *b.denom() as f64) / (*d.numer() as f64 / *d.denom() as f64)).sqrt();
    let lo = floor_q(z) - approx.ceil() as i128 - 2;
    let hi = floor_q(z) + approx.ceil() as i128 + 3;
    (lo..=hi)
        .filter(|&t| {
            let s = q(t) - z;
            d * s * s <= b
        })
        .collect()
}

/// Integer points `k` with `(k - center)^T P (k - center) <= radius`.
fn fincke_pohst(dec: &[Vec<Q>], center: &[Q], radius: Q) -> Vec<Vec<i128>> {
    let n = dec.len();
    let mut out = Vec::new();
    let mut k = vec![0i128; n];
    fn rec(dec: &[Vec<Q>], center: &[Q], i: usize, budget: Q, k: &mut Vec<i128>, out: &mut Vec<Vec<i128>>) {
        let n = dec.len();
        let s: Q = (i + 1..n).fold(Q::zero(), |acc, j| acc + dec[i][j] * (q(k[j]) - center[j]));
        let z = center[i] - s;
        for t in integer_window(dec[i][i], z, budget) {
            k[i] = t;
            let d = q(t) - z;
            let rest = budget - dec[i][i] * d * d;
            if i == 0 {
                out.push(k.clone());
            } else {
                rec(dec, center, i - 1, rest, k, out);
            }
        }
    }
    if n == 0 {
        if !radius.is_negative() {
            out.push(Vec::new());
        }
        return out;
    }
    rec(dec, center, n - 1, radius, &mut k, &mut out);
    out
}

/// Certificate data for an enumeration: the squared radius of the
/// ellipsoid in `v`-perp that was searched exhaustively.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Enumeration {
    pub classes: Vec<Class>,
    pub radius: String,
    pub candidates: usize,
}

/// All `D` with `D^2 = c` and `D.v = m`, for `v^2 > 0` in a lattice whose
/// `v`-perp is negative definite. `scale` multiplies the search radius.
pub fn enum_classes_scaled(g: &GramLattice, c: i64, v: &[i64], m: i64, scale: i64) -> Result<Enumeration> {
    let n = g.rank();
    let v2 = g.norm(v);
    if v2 <= 0 {
        return Err(Error::AnchorNotPositive);
    }
    let gv: Vec<i128> = (0..n).map(|i| g.pair(&g.unit(i), v) as i128).collect();
    let (gcd, u) = column_reduce(&gv);
    let empty = Enumeration {
        classes: Vec::new(),
        radius: "0".into(),
        candidates: 0,
    };
    if gcd == 0 || (m as i128) % gcd != 0 {
        return Ok(empty);
    }
    let d0: Vec<i128> = (0..n).map(|i| u[i][0] * (m as i128 / gcd)).collect();
    let w: Vec<Vec<i128>> = (1..n).map(|j| (0..n).map(|i| u[i][j]).collect()).collect();
    let gq = |x: &[i128], y: &[i128]| -> Q {
        let mut acc = 0i128;
        for i in 0..n {
            for j in 0..n {
                acc += x[i] * g.gram[i][j] as i128 * y[j];
            }
        }
        q(acc)
    };
    // P = -W^T G W, b = W^T G d0; -(D^2) = k^T P k - 2 b.k - d0^2
    let p: Vec<Vec<Q>> = w.iter().map(|wi| w.iter().map(|wj| -gq(wi, wj)).collect()).collect();
    let b: Vec<Q> = w.iter().map(|wi| gq(wi, &d0)).collect();
    let dec = definite_decomposition(&p).ok_or(Error::IndefiniteComplement)?;
    let center = if w.is_empty() {
        Vec::new()
    } else {
        crate::rational::solve(&p, &b).ok_or(Error::IndefiniteComplement)?
    };
    // with k* = P^{-1} b this is (k - k*)^T P (k - k*) - k*^T P k* - d0^2 = -c
    let kpk: Q = (0..w.len()).fold(Q::zero(), |acc, i| {
        acc + (0..w.len()).fold(Q::zero(), |a2, j| a2 + center[i] * p[i][j] * center[j])
    });
    let radius = (q(-c as i128) + kpk + gq(&d0, &d0)) * q(scale as i128);
    let points = fincke_pohst(&dec, &center, radius);
    let mut classes: Vec<Class> = points
        .iter()
        .map(|k| {
            (0..n)
                .map(|i| (d0[i] + k.iter().zip(&w).map(|(kj, wj)| kj * wj[i]).sum::<i128>()) as i64)
                .collect::<Class>()
        })
        .filter(|d| g.norm(d) == c && g.pair(d, v) == m)
        .collect();
    classes.sort();
    classes.dedup();
    Ok(Enumeration {
        classes,
        radius: radius.to_string(),
        candidates: points.len(),
    })
}

pub fn enum_classes(g: &GramLattice, c: i64, v: &[i64], m: i64) -> Result<Vec<Class>> {
    Ok(enum_classes_scaled(g, c, v, m, 1)?.classes)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AmpleCertificate {
    pub ample: bool,
    pub self_intersection: i64,
    /// Roots orthogonal to the class; empty when ample.
    pub orthogonal_roots: Vec<Class>,
    pub radius: String,
}

/// `h^2 > 0` and no root orthogonal to `h`.
pub fn is_ample(g: &GramLattice, h: &[i64]) -> Result<AmpleCertificate> {
    let h2 = g.norm(h);
    if h2 <= 0 {
        return Ok(AmpleCertificate {
            ample: false,
            self_intersection: h2,
            orthogonal_roots: Vec::new(),
            radius: "-".into(),
        });
    }
    let e = enum_classes_scaled(g, -2, h, 0, 1)?;
    Ok(AmpleCertificate {
        ample: e.classes.is_empty(),
        self_intersection: h2,
        orthogonal_roots: e.classes,
        radius: e.radius,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct NefCertificate {
    pub nef: bool,
    pub reason: String,
    /// Pairs `(D.h, -D.L)` that were searched.
    pub pairs_checked: usize,
    pub obstruction: Option<Class>,
}

/// Nefness of `L` relative to the chamber of the ample class `h`: `L^2 >= 0`,
/// `L.h > 0` and no root `D` with `D.h > 0 > D.L`. For such a root put
/// `k = D.h`, `m = -D.L`. Projecting `D` to the hyperbolic plane spanned by `h`
/// and `L` gives `L^2 k^2 + 2 (h.L) k m + h^2 m^2 <= 2 Δ`, `Δ = (h.L)^2 - h^2 L^2`,
/// which leaves finitely many `(k, m)`; each is an enumeration anchored at `h`.
pub fn is_nef(g: &GramLattice, h: &[i64], l: &[i64]) -> Result<NefCertificate> {
    let cert = |nef: bool, reason: &str, pairs: usize, obstruction: Option<Class>| NefCertificate {
        nef,
        reason: reason.into(),
        pairs_checked: pairs,
        obstruction,
    };
    if !is_ample(g, h)?.ample {
        return Err(Error::BoundComputationFailed("reference class is not ample"));
    }
    let (a, b, c) = (g.norm(h) as i128, g.pair(h, l) as i128, g.norm(l) as i128);
    if c < 0 {
        return Ok(cert(false, "negative self-intersection", 0, None));
    }
    if b <= 0 {
        return Ok(cert(false, "non-positive degree against the ample class", 0, None));
    }
    let delta = b * b - a * c;
    if delta < 0 {
        return Err(Error::BoundComputationFailed("Hodge index violated"));
    }
    if delta == 0 {
        return Ok(cert(true, "proportional to the ample class", 0, None));
    }
    let mut pairs = 0;
    let mut m = 1i128;
    while a * m * m <= 2 * delta {
        let mut k = 1i128;
        while c * k * k + 2 * b * k * m + a * m * m <= 2 * delta {
            pairs += 1;
            for d in enum_classes(g, -2, h, k as i64)? {
                if g.pair(&d, l) as i128 == -m {
                    return Ok(cert(
                        false,
                        "root separating the class from the ample chamber",
                        pairs,
                        Some(d),
                    ));
                }
            }
            k += 1;
        }
        m += 1;
    }
    Ok(cert(true, "no separating root in the certified window", pairs, None))
}

/// Base-point freeness of a nef class: for `L^2 > 0`, no `E` with `E^2 = 0`
/// and `E.L = 1`; a nef isotropic class is a multiple of an elliptic pencil
/// and is base point free.
pub fn is_basepoint_free(g: &GramLattice, h: &[i64], l: &[i64]) -> Result<bool> {
    if !is_nef(g, h, l)?.nef {
        return Err(Error::NotNef);
    }
    if g.norm(l) == 0 {
        return Ok(true);
    }
    Ok(enum_classes(g, 0, l, 1)?.is_empty())
}

/// All classes of the given norm and degree against `h` that are nef.
pub fn unique_polarization_classes(g: &GramLattice, h: &[i64], norm: i64, pairing: i64) -> Result<Vec<Class>> {
    let mut out = Vec::new();
    for v in enum_classes(g, norm, h, pairing)? {
        if norm >= 0 && is_nef(g, h, &v)?.nef {
            out.push(v);
        }
    }
    Ok(out)
}

/// Roots `D` with `D.h = 1` and `D.c = 0`.
pub fn roots_against(g: &GramLattice, h: &[i64], c: &[i64]) -> Result<Vec<Class>> {
    Ok(enum_classes(g, -2, h, 1)?
        .into_iter()
        .filter(|d| g.pair(d, c) == 0)
        .collect())
}

/// Classes `(C, Q1, Q2)` realizing the full Gram matrix of `𝔥'` against the
/// first basis vector `H'`: `C` nef with `C^2 = 16`, `C.H' = 10`, and effective
/// roots `Q1`, `Q2` with `Q.H' = 1`, `Q.C = 0`, `Q1.Q2 = 0`. Unordered in `Q`.
pub fn hprime_marked_classes(g: &GramLattice) -> Result<Vec<[Class; 3]>> {
    let h = g.unit(0);
    let mut out = Vec::new();
    for c in unique_polarization_classes(g, &h, 16, 10)? {
        let roots = roots_against(g, &h, &c)?;
        for (i, q1) in roots.iter().enumerate() {
            for q2 in &roots[i + 1..] {
                if g.pair(q1, q2) == 0 {
                    out.push([c.clone(), q1.clone(), q2.clone()]);
                }
            }
        }
    }
    Ok(out)
}

pub type Constraint = (&'static str, fn(&GramLattice) -> bool);

/// The four effectivity constraints on `(a, b)`, as predicates on the template.
pub fn hprime_constraints() -> Vec<Constraint> {
    vec![
        ("(C-H1).(C-H2) >= 0", |g| g.pair(&[-1, 1, 0, 0], &[0, 1, 0, -1]) >= 0),
        ("H2.(C-H1) >= 0", |g| g.pair(&[0, 0, 0, 1], &[-1, 1, 0, 0]) >= 0),
        ("(C-H2).(H1-N1) >= 0", |g| g.pair(&[0, 1, 0, -1], &[1, 0, -1, 0]) >= 0),
        ("(C-H2).N1 >= 0", |g| g.pair(&[0, 1, 0, -1], &[0, 0, 1, 0]) >= 0),
    ]
}

/// Integer `(a, b)` in `[-bound, bound]^2` satisfying the selected constraints.
pub fn hprime_solutions(bound: i64, active: &[usize]) -> Vec<(i64, i64)> {
    let cons = hprime_constraints();
    let mut out = Vec::new();
    for a in -bound..=bound {
        for b in -bound..=bound {
            let g = hprime_template(a, b);
            if active.iter().all(|&i| (cons[i].1)(&g)) {
                out.push((a, b));
            }
        }
    }
    out
}

pub fn derive_hprime_entries() -> Result<(i64, i64)> {
    let sols = hprime_solutions(100, &[0, 1, 2, 3]);
    match sols.as_slice() {
        [one] => Ok(*one),
        _ => Err(Error::NonUnique(sols.len())),
    }
}

/// `M^T G M` for a basis change given by the columns of `M`.
pub fn basis_change_gram(g: &GramLattice, m: &[Vec<i64>], labels: &[&str]) -> Result<GramLattice> {
    let d = determinant(m);
    if d.abs() != 1 {
        return Err(Error::NotUnimodular(d));
    }
    transform_gram(g, m, labels)
}

fn transform_gram(g: &GramLattice, m: &[Vec<i64>], labels: &[&str]) -> Result<GramLattice> {
    let n = g.rank();
    if m.len() != n {
        return Err(Error::ShapeMismatch("map rows must match the lattice rank".into()));
    }
    let k = m.first().map_or(0, Vec::len);
    let col = |j: usize| -> Class { (0..n).map(|i| m[i][j]).collect() };
    let gram = (0..k)
        .map(|i| (0..k).map(|j| g.pair(&col(i), &col(j))).collect())
        .collect();
    GramLattice::new(gram, labels)
}

/// Diagonal of the Smith normal form of an integer matrix.
pub fn elementary_divisors(m: &[Vec<i64>]) -> Vec<i128> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut out = Vec::new();
    for t in 0..rows.min(cols) {
        // move the smallest nonzero entry to (t, t) until it divides its row and column
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if a[i][j] != 0 && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                return out;
            };
            a.swap(t, bi);
            for r in a.iter_mut() {
                r.swap(t, bj);
            }
            let p = a[t][t];
            let mut clean = true;
            for i in t + 1..rows {
                let f = Integer::div_floor(&a[i][t], &p);
                for j in t..cols {
                    let v = a[t][j];
                    a[i][j] -= f * v;
                }
                clean &= a[i][t] == 0;
            }
            for j in t + 1..cols {
                let f = Integer::div_floor(&a[t][j], &p);
                for row in a.iter_mut().skip(t) {
                    let v = row[t];
                    row[j] -= f * v;
                }
                clean &= a[t][j] == 0;
            }
            if !clean {
                continue;
            }
            // the pivot must divide the remaining block
            if let Some(i) = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| a[i][j] % p != 0)) {
                for j in t..cols {
                    let v = a[i][j];
                    a[t][j] += v;
                }
                continue;
            }
            out.push(p.abs());
            break;
        }
    }
    out
}

/// `M^T G' M = G` and all elementary divisors of `M` equal to one.
pub fn verify_primitive_embedding(source: &GramLattice, target: &GramLattice, m: &[Vec<i64>]) -> Result<bool> {
    let labels: Vec<&str> = source.basis_labels.iter().map(String::as_str).collect();
    let pulled = transform_gram(target, m, &labels)?;
    if pulled.gram != source.gram {
        return Err(Error::GramMismatch);
    }
    let divisors = elementary_divisors(m);
    if divisors.len() != source.rank() || divisors.iter().any(|d| !d.is_one()) {
        return Err(Error::NotPrimitive(divisors));
    }
    Ok(true)
}

/// `19 - (rank - 1)`.
pub fn moduli_dimension(lattice_rank: i64) -> Result<i64> {
    if lattice_rank < 1 {
        return Err(Error::OutOfRange(format!("lattice rank {lattice_rank}")));
    }
    Ok(20 - lattice_rank)
}

/// `g - (r + 1)(g - d + r)`.
pub fn brill_noether_rho(g: i64, r: i64, d: i64) -> i64 {
    g - (r + 1) * (g - d + r)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AuditItem {
    pub name: String,
    pub lhs: i64,
    pub rhs: i64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DimensionAudit {
    pub items: Vec<AuditItem>,
    /// Rank of `𝔫` forced by `(20 - r) + 9 = dim W + 2`.
    pub n_rank: i64,
}

impl DimensionAudit {
    pub fn passed(&self) -> bool {
        self.items.iter().all(|i| i.holds)
    }
}

pub fn dimension_audit() -> Result<DimensionAudit> {
    let item = |name: &str, lhs: i64, rhs: i64| AuditItem {
        name: name.into(),
        lhs,
        rhs,
        holds: lhs == rhs,
    };
    let (g, k) = (9, 6);
    // dim |C| = C^2 / 2 + 1 on a K3 surface
    let c2 = h_lattice().gram[1][1];
    let linear_system = c2 / 2 + 1;
    let f_h = moduli_dimension(3)?;
    let rho = brill_noether_rho(g, 1, k);
    let w = 3 * g - 3 + rho;
    let p_h = f_h + linear_system;
    // (20 - r) + 9 = w + 2
    let n_rank = 20 + linear_system - (w + 2);
    let f_hprime = moduli_dimension(4)?;
    let items = vec![
        item("dim F^h = 19 - 2", f_h, 17),
        item("rho(9,1,6)", rho, 1),
        item("dim W^1_{9,6} = 3g - 3 + rho", w, 25),
        item("dim P^h_8 = dim F^h + dim |C|", p_h, 26),
        item("dim P^h_8 = dim W^1_{9,6} + 1", p_h, w + 1),
        item(
            "(20 - rank n) + 9 = dim W^1_{9,6} + 2",
            (20 - n_rank) + linear_system,
            27,
        ),
        item("rank n", n_rank, 2),
        item("dim P^h'_3 = dim F^h' + dim |C|", f_hprime + linear_system, 25),
        item("dim F^h'", f_hprime, 16),
    ];
    Ok(DimensionAudit { items, n_rank })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn signatures_and_discriminants() {
        assert_eq!(signature(&h_lattice()), (1, 2, 0));
        assert_eq!(signature(&hprime_lattice()), (1, 3, 0));
        let id = GramLattice::new(vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]], &[]).unwrap();
        assert_eq!(signature(&id), (3, 0, 0));
        assert_eq!(discriminant(&h_lattice()), 56);
        assert_eq!(cofactor_determinant(&h_lattice().gram), 56);
        assert_eq!(discriminant(&hprime_lattice()), -80);
        assert_eq!(cofactor_determinant(&hprime_lattice().gram), -80);
        assert_eq!(discriminant(&id), 1);
        let u = GramLattice::new(vec![vec![0, 1], vec![1, 0]], &[]).unwrap();
        assert_eq!(signature(&u), (1, 1, 0));
    }

    proptest! {
        #[test]
        fn signature_counts_diagonal_signs(d in proptest::collection::vec(-3i64..=3, 1..5), ops in proptest::collection::vec((0usize..4, 0usize..4, -2i64..=2), 0..6)) {
            // congruent to diag(d) by unimodular column operations
            let n = d.len();
            let mut m: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
            for (i, j, a) in ops {
                let (i, j) = (i % n, j % n);
                if i != j {
                    for row in m.iter_mut() {
                        row[j] += a * row[i];
                    }
                }
            }
            let diag = GramLattice::new((0..n).map(|i| (0..n).map(|j| if i == j { d[i] } else { 0 }).collect()).collect(), &[]).unwrap();
            let g = basis_change_gram(&diag, &m, &[]).unwrap();
            let want = (d.iter().filter(|&&x| x > 0).count(), d.iter().filter(|&&x| x < 0).count(), d.iter().filter(|&&x| x == 0).count());
            prop_assert_eq!(signature(&g), want);
        }

        #[test]
        fn bareiss_matches_cofactors(entries in proptest::collection::vec(-20i64..20, 16), n in 1usize..5) {
            let m: Vec<Vec<i64>> = (0..n).map(|i| entries[i * 4..i * 4 + n].to_vec()).collect();
            prop_assert_eq!(determinant(&m), cofactor_determinant(&m));
        }

        #[test]
        fn reflections_are_isometric_involutions(v in proptest::collection::vec(-9i64..9, 3), w in proptest::collection::vec(-9i64..9, 3)) {
            let g = h_lattice();
            // C - H is a root of 𝔥
            let d = vec![-1, 1, 0];
            let (rv, rw) = (reflect(&g, &v, &d).unwrap(), reflect(&g, &w, &d).unwrap());
            prop_assert_eq!(g.pair(&rv, &rw), g.pair(&v, &w));
            prop_assert_eq!(reflect(&g, &rv, &d).unwrap(), v);
        }

        #[test]
        fn unimodular_change_keeps_discriminant(a in -3i64..3, b in -3i64..3, c in -3i64..3) {
            let g = h_lattice();
            let m = vec![vec![1, a, b], vec![0, 1, c], vec![0, 0, 1]];
            let h = basis_change_gram(&g, &m, &[]).unwrap();
            prop_assert_eq!(discriminant(&h), discriminant(&g));
        }
    }

    #[test]
    fn reflection_examples() {
        let g = h_lattice();
        let d = vec![-1, 1, 0];
        assert_eq!(reflect(&g, &d, &d).unwrap(), vec![1, -1, 0]);
        // N.(C - H) = 1, so pick a class orthogonal to d: C + ... check v.d = 0 stays put
        let v = vec![0, 0, 0];
        assert_eq!(reflect(&g, &v, &d).unwrap(), v);
        assert!(matches!(reflect(&g, &v, &[1, 0, 0]), Err(Error::NotARoot)));
    }

    #[test]
    fn enumeration_is_complete_and_correct() {
        for g in [h_lattice(), hprime_lattice()] {
            let h = g.unit(0);
            for (c, m) in [(-2, 0), (-2, 1), (-2, 3), (0, 5), (0, 0), (16, 16)] {
                let e1 = enum_classes_scaled(&g, c, &h, m, 1).unwrap();
                let e2 = enum_classes_scaled(&g, c, &h, m, 2).unwrap();
                assert_eq!(e1.classes, e2.classes);
                for d in &e1.classes {
                    assert_eq!((g.norm(d), g.pair(d, &h)), (c, m));
                }
            }
        }
        let g = h_lattice();
        assert!(enum_classes(&g, -2, &[1, 0, 0], 0).unwrap().is_empty());
        assert_eq!(enum_classes(&g, 0, &[1, 0, 0], 0).unwrap(), vec![vec![0, 0, 0]]);
        assert!(matches!(
            enum_classes(&g, -2, &[0, 0, 1], 0),
            Err(Error::AnchorNotPositive)
        ));
    }

    #[test]
    fn brute_force_agrees_on_small_box() {
        let g = h_lattice();
        let h = [1, 0, 0];
        for m in 0..4 {
            let listed = enum_classes(&g, -2, &h, m).unwrap();
            let mut brute = Vec::new();
            for x in -12..=12 {
                for y in -12..=12 {
                    for z in -12..=12 {
                        let d = vec![x, y, z];
                        if g.norm(&d) == -2 && g.pair(&d, &h) == m {
                            brute.push(d);
                        }
                    }
                }
            }
            assert!(brute.iter().all(|d| listed.contains(d)), "m = {m}");
        }
    }

    #[test]
    fn ampleness() {
        let g = h_lattice();
        assert!(is_ample(&g, &[1, 0, 0]).unwrap().ample);
        assert!(is_ample(&g, &[1, 0, -1]).unwrap().ample);
        let c = is_ample(&g, &[0, 1, 0]).unwrap();
        assert!(!c.ample);
        assert!(c.orthogonal_roots.contains(&vec![-1, 1, 0]) || c.orthogonal_roots.contains(&vec![1, -1, 0]));
        assert!(is_ample(&hprime_lattice(), &[1, 0, 0, 0]).unwrap().ample);
    }

    #[test]
    fn nef_and_basepoint_free_table() {
        let g = h_lattice();
        let h = [1, 0, 0];
        for l in [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 0, -1]] {
            assert!(is_nef(&g, &h, &l).unwrap().nef, "{l:?}");
            assert!(is_basepoint_free(&g, &h, &l).unwrap(), "{l:?}");
        }
        assert!(!is_nef(&g, &h, &[1, -1, 0]).unwrap().nef);
    }

    #[test]
    fn hyperbolic_plane_basepoint_examples() {
        let u = GramLattice::new(vec![vec![0, 1], vec![1, 0]], &["e", "f"]).unwrap();
        // L = e + 2f has L^2 = 4 and f.L = 1
        assert!(!is_basepoint_free(&u, &[1, 2], &[1, 2]).unwrap());
        // the isotropic class e is nef against 2e + f and is an elliptic pencil
        assert!(is_nef(&u, &[2, 1], &[1, 0]).unwrap().nef);
        assert!(is_basepoint_free(&u, &[2, 1], &[1, 0]).unwrap());
    }

    #[test]
    fn polarization_uniqueness() {
        let g = h_lattice();
        let h = [1, 0, 0];
        assert_eq!(
            unique_polarization_classes(&g, &h, 16, 16).unwrap(),
            vec![vec![0, 1, 0]]
        );
        assert_eq!(unique_polarization_classes(&g, &h, 0, 5).unwrap(), vec![vec![0, 0, 1]]);
        assert!(enum_classes(&g, -2, &h, 0).unwrap().is_empty());
        let gp = hprime_lattice();
        let hp = [1, 0, 0, 0];
        // the numbers (16, 10) alone leave several nef classes
        assert!(unique_polarization_classes(&gp, &hp, 16, 10).unwrap().len() > 1);
        // with all intersection numbers fixed there are two triples, swapped by
        // the integral reflection in v = C' - C (v^2 = -16) which fixes H', Q1, Q2
        let marked = hprime_marked_classes(&gp).unwrap();
        assert_eq!(marked.len(), 2);
        assert_eq!(marked[0], [vec![0, 1, 0, 0], vec![0, 0, 0, 1], vec![0, 0, 1, 0]]);
        let (c, c2) = (&marked[0][0], &marked[1][0]);
        let v: Class = c2.iter().zip(c).map(|(a, b)| a - b).collect();
        assert_eq!(gp.norm(&v), -16);
        let s = |x: &Class| -> Class {
            let t = gp.pair(x, &v);
            assert_eq!(t % 8, 0);
            x.iter().zip(&v).map(|(a, b)| a + t / 8 * b).collect()
        };
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(gp.pair(&s(&gp.unit(i)), &s(&gp.unit(j))), gp.gram[i][j]);
            }
        }
        assert_eq!(&s(c), c2);
        for fixed in [&hp.to_vec(), &marked[0][1], &marked[0][2]] {
            assert_eq!(&s(fixed), fixed);
        }
        assert_eq!(
            roots_against(&gp, &hp, &[0, 1, 0, 0]).unwrap(),
            vec![vec![0, 0, 0, 1], vec![0, 0, 1, 0]]
        );
    }

    #[test]
    fn hprime_entries() {
        assert_eq!(derive_hprime_entries().unwrap(), (16, 6));
        let g = hprime_template(16, 6);
        assert_eq!(g.norm(&[0, 1, 0, -1]), -2);
        assert!(hprime_solutions(100, &[0, 1, 2]).len() > 1);
        assert!(hprime_solutions(100, &[1, 2, 3]).len() > 1);
    }

    #[test]
    fn basis_change_to_hprime() {
        let m = hprime_change_matrix();
        assert_eq!(determinant(&m).abs(), 1);
        let target = hprime_lattice();
        // entries of the displayed matrix come out with N1.H2 = 7
        assert_eq!(
            basis_change_gram(&hprime_template(16, 7), &m, &[]).unwrap().gram,
            target.gram
        );
        let derived = basis_change_gram(&hprime_template(16, 6), &m, &[]).unwrap();
        assert_eq!(derived.gram[0][3], 0);
        assert_eq!(
            basis_change_gram(&h_lattice(), &[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]], &[])
                .unwrap()
                .gram,
            h_lattice().gram
        );
        assert!(matches!(
            basis_change_gram(&h_lattice(), &[vec![2, 0, 0], vec![0, 1, 0], vec![0, 0, 1]], &[]),
            Err(Error::NotUnimodular(2))
        ));
    }

    #[test]
    fn primitive_embeddings() {
        let m = h_into_hprime();
        assert!(verify_primitive_embedding(&h_lattice(), &hprime_lattice(), &m).unwrap());
        let id = vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]];
        assert!(verify_primitive_embedding(&h_lattice(), &h_lattice(), &id).unwrap());
        let doubled: Vec<Vec<i64>> = m.iter().map(|r| r.iter().map(|x| 2 * x).collect()).collect();
        let scaled = GramLattice::new(
            h_lattice()
                .gram
                .iter()
                .map(|r| r.iter().map(|x| 4 * x).collect())
                .collect(),
            &["H", "C", "N"],
        )
        .unwrap();
        assert!(matches!(
            verify_primitive_embedding(&scaled, &hprime_lattice(), &doubled),
            Err(Error::NotPrimitive(_))
        ));
        assert!(matches!(
            verify_primitive_embedding(&h_lattice(), &hprime_lattice(), &doubled),
            Err(Error::GramMismatch)
        ));
    }

    #[test]
    fn smith_form_examples() {
        assert_eq!(elementary_divisors(&[vec![2, 4], vec![6, 8]]), vec![2, 4]);
        assert_eq!(elementary_divisors(&[vec![1, 0], vec![0, 1], vec![5, 7]]), vec![1, 1]);
    }

    #[test]
    fn audit() {
        assert_eq!(moduli_dimension(3).unwrap(), 17);
        assert_eq!(moduli_dimension(4).unwrap(), 16);
        assert_eq!(brill_noether_rho(9, 1, 6), 1);
        let a = dimension_audit().unwrap();
        assert!(a.passed(), "{a:?}");
        assert_eq!(a.n_rank, 2);
    }
}
