//! Relative canonical resolutions by bidegree slices.
//!
//! The resolution `F_i = sum O(-a H + c R)` is computed one homological level
//! at a time as a module over `k[t0, t1]`: pushing forward along the scroll
//! projection turns each `F_i(A H)` into a vector bundle on the line whose
//! sections in slice `(A, b)` are direct sums of Cox ring slices. The kernel of
//! the pushed-forward differential at the right H-degree is then a free
//! `k[t]`-module, whose minimal generators are the next level's summands.
//!
//! Level-one generators come from ideal slices of degree 2, computed by
//! evaluation at curve points (or by a colon computation for the K3 surface).

use std::collections::BTreeMap;

use num_rational::Ratio;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ffield::{EchelonBasis, PrimeField, PrimeFieldMatrix};
use crate::plane_curve::{sample_smooth_points, PlaneCurveModel, Point};
use crate::poly::binomial;
use crate::scroll::{
    canonical_coordinates, curve_section_bound, euler_scroll, evaluate_monomials, pencil_from_node, scroll_type,
    CanonicalCoordinates, CoxRing, ScrollType, GENERAL_TYPE,
};

/// Largest slice index `b` probed for new generators; generators there mean
/// the window was too small.
pub const BOUNDARY_B: i32 = 1;

/// Size of the pool of curve points drawn once per model.
pub const POINT_POOL: usize = 200;

/// A free generator: summand `O(-aH - bR)` whose generator sits in slice
/// `(a, b)`, with one component per generator of the previous level.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub a: u32,
    pub b: i32,
    /// `components[j]` lies in slice `(a - a_j, b - b_j)` of the previous level's `j`-th generator.
    pub components: Vec<Vec<u32>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Level {
    pub gens: Vec<Generator>,
}

impl Level {
    /// The structure sheaf, a single generator in slice `(0, 0)`.
    pub fn unit() -> Self {
        Self {
            gens: vec![Generator {
                a: 0,
                b: 0,
                components: Vec::new(),
            }],
        }
    }
}

/// Syzygies of one homological index grouped by twist.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SyzygyBlock {
    pub index: usize,
    pub a: u32,
    pub b: i32,
    pub basis: Vec<Vec<Vec<u32>>>,
}

pub fn blocks(index: usize, level: &Level) -> Vec<SyzygyBlock> {
    let mut map: BTreeMap<(u32, i32), Vec<Vec<Vec<u32>>>> = BTreeMap::new();
    for g in &level.gens {
        map.entry((g.a, g.b)).or_default().push(g.components.clone());
    }
    map.into_iter()
        .map(|((a, b), basis)| SyzygyBlock { index, a, b, basis })
        .collect()
}

/// Multiset of `(i, a, c)` with summands `O(-aH + cR)` at homological index `i`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BigradedBettiTable {
    pub g: u32,
    pub k: u32,
    pub entries: BTreeMap<(usize, u32, i32), usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiEntry {
    pub i: usize,
    pub a: u32,
    pub b: i32,
    pub multiplicity: usize,
}

impl Serialize for BigradedBettiTable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_entries().serialize(s)
    }
}

impl BigradedBettiTable {
    pub fn new(g: u32, k: u32) -> Self {
        Self {
            g,
            k,
            entries: BTreeMap::new(),
        }
    }

    pub fn from_list(g: u32, k: u32, list: &[(usize, u32, i32, usize)]) -> Self {
        let mut t = Self::new(g, k);
        for &(i, a, c, m) in list {
            t.add(i, a, c, m);
        }
        t
    }

    pub fn add(&mut self, i: usize, a: u32, c: i32, mult: usize) {
        if mult > 0 {
            *self.entries.entry((i, a, c)).or_default() += mult;
        }
    }

    pub fn from_levels(g: u32, k: u32, levels: &[Level]) -> Self {
        let mut t = Self::new(g, k);
        for (idx, level) in levels.iter().enumerate().skip(1) {
            for gen in &level.gens {
                t.add(idx, gen.a, -gen.b, 1);
            }
        }
        t
    }

    /// Entries as `{i, a, b, multiplicity}` where `b` is the R-twist of `O(-aH + bR)`.
    pub fn to_entries(&self) -> Vec<BettiEntry> {
        self.entries
            .iter()
            .map(|(&(i, a, b), &multiplicity)| BettiEntry { i, a, b, multiplicity })
            .collect()
    }

    pub fn max_index(&self) -> usize {
        self.entries.keys().map(|k| k.0).max().unwrap_or(0)
    }

    pub fn rank(&self, i: usize) -> usize {
        self.entries.iter().filter(|(k, _)| k.0 == i).map(|(_, &m)| m).sum()
    }

    /// Degree of `N_i`: sum of R-twists with multiplicity.
    pub fn degree(&self, i: usize) -> i64 {
        self.entries
            .iter()
            .filter(|(k, _)| k.0 == i)
            .map(|(k, &m)| k.2 as i64 * m as i64)
            .sum()
    }

    /// R-twists at index `i`, descending, with multiplicity.
    pub fn splitting_type(&self, i: usize) -> Vec<i32> {
        let mut out: Vec<i32> = self
            .entries
            .iter()
            .filter(|(k, _)| k.0 == i)
            .flat_map(|(k, &m)| std::iter::repeat_n(k.2, m))
            .collect();
        out.sort_unstable_by(|a, b| b.cmp(a));
        out
    }

    /// Image under `(i, a, c) -> (n - i, top_a - a, top_c - c)` for the
    /// entries with `1 <= i < n`, where `(top_a, top_c)` is the last twist.
    pub fn dual(&self, n: usize, top_a: u32, top_c: i32) -> BTreeMap<(usize, u32, i32), usize> {
        self.entries
            .iter()
            .filter(|(k, _)| k.0 >= 1 && k.0 < n)
            .map(|(&(i, a, c), &m)| ((n - i, top_a - a, top_c - c), m))
            .collect()
    }

    /// Self-duality for a resolution of length `n` ending in a single
    /// summand `O(-top_a H + top_c R)`.
    pub fn is_self_dual(&self, n: usize, top_a: u32, top_c: i32) -> bool {
        let inner: BTreeMap<_, _> = self
            .entries
            .iter()
            .filter(|(k, _)| k.0 >= 1 && k.0 < n)
            .map(|(k, v)| (*k, *v))
            .collect();
        if self.entries.keys().any(|k| k.1 > top_a) {
            return false;
        }
        let last: Vec<_> = self.entries.iter().filter(|(k, _)| k.0 == n).collect();
        last.len() == 1 && *last[0].0 == (n, top_a, top_c) && *last[0].1 == 1 && self.dual(n, top_a, top_c) == inner
    }

    /// Curve duality `(i,(a,c)) -> (k-2-i, (k-a, g-k-1-c))`.
    pub fn is_curve_self_dual(&self) -> bool {
        let n = (self.k - 2) as usize;
        self.is_self_dual(n, self.k, self.g as i32 - self.k as i32 - 1)
    }

    /// Alternating sum `sum (-1)^i chi(F_i(aH + bR))`, including `F_0 = O`.
    pub fn euler_characteristic(&self, e: &[u32], a: i32, b: i32) -> i64 {
        let mut chi = euler_scroll(e, a, b);
        for (&(i, ai, ci), &m) in &self.entries {
            let sign = if i % 2 == 0 { 1 } else { -1 };
            chi += sign * m as i64 * euler_scroll(e, a - ai as i32, b + ci);
        }
        chi
    }
}

pub fn is_balanced(twists: &[i32]) -> bool {
    match (twists.iter().max(), twists.iter().min()) {
        (Some(hi), Some(lo)) => hi - lo <= 1,
        _ => true,
    }
}

/// `k/(i+1) (k-2-i) binom(k-2, i-1)` for `1 <= i <= k-3`.
pub fn schreyer_rank(k: u32, i: u32) -> Result<u64> {
    if i < 1 || k < 4 || i > k - 3 {
        return Err(Error::OutOfRange(format!("schreyer_rank(k={k}, i={i})")));
    }
    let (k, i) = (k as u64, i as u64);
    Ok(k * (k - 2 - i) * binomial(k - 2, i - 1) / (i + 1))
}

/// `(g-k-1)(i+1)/k`.
pub fn syzygy_slope(g: u32, k: u32, i: u32) -> Ratio<i64> {
    assert!(k >= 3, "slope needs k >= 3");
    Ratio::new((g as i64 - k as i64 - 1) * (i as i64 + 1), k as i64)
}

/// The table every general genus-9 curve with a `g^1_6` should produce.
pub fn expected_curve_table() -> BigradedBettiTable {
    BigradedBettiTable::from_list(
        9,
        6,
        &[
            (1, 2, 1, 6),
            (1, 2, 0, 3),
            (2, 3, 2, 2),
            (2, 3, 1, 12),
            (2, 3, 0, 2),
            (3, 4, 2, 3),
            (3, 4, 1, 6),
            (4, 6, 2, 1),
        ],
    )
}

/// A curve model together with its scroll data and a pool of sample points.
#[derive(Debug, Clone)]
pub struct CurveData {
    pub model: PlaneCurveModel,
    pub coords: CanonicalCoordinates,
    pub scroll: ScrollType,
    pub points: Vec<Point>,
    pub values: Vec<[u32; 7]>,
}

impl CurveData {
    pub fn new<R: Rng + ?Sized>(model: PlaneCurveModel, rng: &mut R) -> Result<Self> {
        let scroll = scroll_type(&model)?;
        if scroll.e != GENERAL_TYPE {
            return Err(Error::UnexpectedScrollType(scroll.e));
        }
        let coords = canonical_coordinates(&model, &pencil_from_node(&model))?;
        let points = sample_smooth_points(&model, POINT_POOL, rng)?;
        let values: Vec<[u32; 7]> = points.iter().map(|p| coords.cox_values(p)).collect();
        if values.iter().any(|v| v[..5].iter().all(|&x| x == 0)) {
            return Err(Error::BasepointHit);
        }
        Ok(Self {
            model,
            coords,
            scroll,
            points,
            values,
        })
    }

    pub fn field(&self) -> PrimeField {
        self.model.field()
    }
}

/// Basis of `I_C` in slice `(a, b)`: the kernel of restriction at
/// `h^0 + 10` points, cross-checked on a disjoint second sample.
pub fn ideal_slice(data: &CurveData, a: u32, b: i32) -> Result<Vec<Vec<u32>>> {
    let f = data.field();
    let m = curve_section_bound(a, b) + 10;
    if data.values.len() < 2 * m {
        return Err(Error::InsufficientRationalPoints {
            wanted: 2 * m,
            found: data.values.len(),
        });
    }
    let e = &data.scroll.e;
    let k1 = evaluate_monomials(f, e, &data.values[..m], a, b).left_kernel();
    let k2 = evaluate_monomials(f, e, &data.values[m..2 * m], a, b).left_kernel();
    let dim = crate::scroll::cox_monomials(e, a, b).len();
    let b1 = EchelonBasis::from_vectors(f, dim, k1.iter());
    if k1.len() != k2.len() || !k2.iter().all(|v| b1.contains(v)) {
        return Err(Error::SampleDisagreement { a, b });
    }
    Ok(b1.vectors().to_vec())
}

/// `v` (in slice `(a, b-1)`) times `t_j`, in slice `(a, b)`.
fn times_t(ring: &CoxRing, a: u32, b: i32, j: usize, v: &[u32]) -> Vec<u32> {
    let src = ring.slice(a, b - 1);
    let dst = ring.slice(a, b);
    let tj = crate::scroll::CoxMonomial::t(j);
    let mut out = vec![0u32; dst.dim()];
    for (i, &c) in v.iter().enumerate() {
        if c != 0 {
            out[dst.index_of(&src.monomials[i].mul(&tj)).unwrap()] = c;
        }
    }
    out
}

/// A direct sum of Cox slices `(a_j, b_j)`; blocks with `a_j < 0` are zero.
type Layout = Vec<(i64, i64)>;

fn block_dim(ring: &CoxRing, (a, b): (i64, i64)) -> usize {
    ring.dim(a, b)
}

fn layout_dim(ring: &CoxRing, layout: &[(i64, i64)]) -> usize {
    layout.iter().map(|&blk| block_dim(ring, blk)).sum()
}

/// New minimal generators of a free `k[t]`-module in one slice: the part of
/// `basis` (the module in `layout`) not reached by `t0, t1` times `prev_basis`
/// (the module one step lower, in `layout_prev`). Representatives are reduced
/// against the span in echelon order.
fn minimal_new(
    ring: &CoxRing,
    layout_prev: &[(i64, i64)],
    layout: &[(i64, i64)],
    prev_basis: &[Vec<u32>],
    basis: &[Vec<u32>],
) -> Vec<Vec<u32>> {
    let f = ring.field();
    let mut span = EchelonBasis::new(f, layout_dim(ring, layout));
    for v in prev_basis {
        for j in 0..2 {
            let mut out = Vec::new();
            let mut off = 0;
            for (&blk, &pblk) in layout.iter().zip(layout_prev) {
                let (n, n_prev) = (block_dim(ring, blk), block_dim(ring, pblk));
                if n_prev == 0 {
                    out.extend(std::iter::repeat_n(0, n));
                } else {
                    out.extend(times_t(ring, blk.0 as u32, blk.1 as i32, j, &v[off..off + n_prev]));
                }
                off += n_prev;
            }
            span.insert(&out);
        }
    }
    basis.iter().filter_map(|v| span.insert(v)).collect()
}

/// Minimal generators of level one from ideal slices `(a, b)` for consecutive `b`.
pub fn minimal_generators(ring: &CoxRing, a: u32, slices: &[(i32, Vec<Vec<u32>>)]) -> Vec<Generator> {
    let mut gens = Vec::new();
    let mut prev: Option<&(i32, Vec<Vec<u32>>)> = None;
    for s in slices {
        let (b, basis) = s;
        let prev_basis: &[Vec<u32>] = match prev {
            Some((pb, pv)) if *pb == b - 1 => pv,
            _ => &[],
        };
        let lp = [(a as i64, *b as i64 - 1)];
        let l = [(a as i64, *b as i64)];
        for v in minimal_new(ring, &lp, &l, prev_basis, basis) {
            gens.push(Generator {
                a,
                b: *b,
                components: vec![v],
            });
        }
        prev = Some(s);
    }
    gens
}

fn layout_for(level: &Level, a: u32, b: i32) -> Layout {
    level
        .gens
        .iter()
        .map(|g| (a as i64 - g.a as i64, b as i64 - g.b as i64))
        .collect()
}

/// Matrix of the pushed-forward differential from `level` to `prev` in slice
/// `(a, b)`; columns follow `layout_for(level, a, b)`.
fn differential(ring: &CoxRing, level: &Level, prev: &Level, a: u32, b: i32) -> PrimeFieldMatrix {
    let f = ring.field();
    let dom = layout_for(level, a, b);
    let cod = layout_for(prev, a, b);
    let mut m = PrimeFieldMatrix::zeros(f, layout_dim(ring, &cod), layout_dim(ring, &dom));
    let mut col = 0;
    for (g, &d) in level.gens.iter().zip(&dom) {
        let dc = block_dim(ring, d);
        if dc == 0 {
            continue;
        }
        let mut row = 0;
        for (j, (h, &c)) in prev.gens.iter().zip(&cod).enumerate() {
            let dr = block_dim(ring, c);
            if dr == 0 {
                continue;
            }
            let comp = &g.components[j];
            if comp.iter().any(|&x| x != 0) {
                let block = ring.mul_matrix((g.a - h.a, g.b - h.b), comp, (d.0 as u32, d.1 as i32));
                for r in 0..dr {
                    for cc in 0..dc {
                        let v = block.get(r, cc);
                        if v != 0 {
                            m.set(row + r, col + cc, v);
                        }
                    }
                }
            }
            row += dr;
        }
        col += dc;
    }
    m
}

fn split_components(ring: &CoxRing, layout: &[(i64, i64)], v: &[u32]) -> Vec<Vec<u32>> {
    let mut off = 0;
    layout
        .iter()
        .map(|&blk| {
            let n = block_dim(ring, blk);
            let c = v[off..off + n].to_vec();
            off += n;
            c
        })
        .collect()
}

/// Generators of the kernel of `level -> prev` at H-degree `a`, scanning
/// `b` upward to [`BOUNDARY_B`].
pub fn next_syzygies(ring: &CoxRing, level: &Level, prev: &Level, a: u32, index: usize) -> Result<Vec<Generator>> {
    assert!(
        level.gens.iter().all(|g| g.a < a),
        "kernel degree must exceed the level's degrees"
    );
    let b_lo = level
        .gens
        .iter()
        .map(|g| g.b - (a - g.a) as i32)
        .min()
        .unwrap_or(BOUNDARY_B);
    let mut gens = Vec::new();
    let mut prev_kernel: Vec<Vec<u32>> = Vec::new();
    for b in b_lo..=BOUNDARY_B {
        let m = differential(ring, level, prev, a, b);
        let kernel = if m.cols() == 0 { Vec::new() } else { m.kernel() };
        let layout = layout_for(level, a, b);
        let new = minimal_new(ring, &layout_for(level, a, b - 1), &layout, &prev_kernel, &kernel);
        if !new.is_empty() && b == BOUNDARY_B {
            return Err(Error::WindowExhausted { level: index, a, b });
        }
        for v in new {
            gens.push(Generator {
                a,
                b,
                components: split_components(ring, &layout, &v),
            });
        }
        prev_kernel = kernel;
    }
    Ok(gens)
}

/// Checks that each level composed with the previous differential vanishes.
pub fn compositions_vanish(ring: &CoxRing, levels: &[Level]) -> bool {
    let f = ring.field();
    for l in 2..levels.len() {
        for g in &levels[l].gens {
            for (kk, h2) in levels[l - 2].gens.iter().enumerate() {
                let (ta, tb) = (g.a - h2.a, g.b - h2.b);
                let mut acc = vec![0u32; ring.dim(ta as i64, tb as i64)];
                for (j, h1) in levels[l - 1].gens.iter().enumerate() {
                    let c1 = &g.components[j];
                    let c2 = &h1.components[kk];
                    if c1.is_empty() || c2.is_empty() || g.a < h1.a || h1.a < h2.a {
                        continue;
                    }
                    let p = ring.mul((g.a - h1.a, g.b - h1.b, c1), (h1.a - h2.a, h1.b - h2.b, c2));
                    for (x, y) in acc.iter_mut().zip(p) {
                        *x = f.add(*x, y);
                    }
                }
                if acc.iter().any(|&x| x != 0) {
                    return false;
                }
            }
        }
    }
    true
}

/// A computed resolution: levels `0..=n` with level 0 the structure sheaf.
#[derive(Debug, Clone)]
pub struct Resolution {
    pub levels: Vec<Level>,
    pub table: BigradedBettiTable,
}

/// Resolves from given level-one generators. `degrees[i]` is the H-degree
/// at which level `i + 2` is computed; `zero_checks` lists `(level, a)`
/// pairs whose kernel must be empty.
pub fn resolve_from(
    ring: &CoxRing,
    g: u32,
    k: u32,
    first: Vec<Generator>,
    degrees: &[u32],
    zero_checks: &[(usize, u32)],
) -> Result<Resolution> {
    let mut levels = vec![Level::unit(), Level { gens: first }];
    for (offset, &a) in degrees.iter().enumerate() {
        let index = offset + 2;
        for &(lvl, za) in zero_checks {
            if lvl == index {
                let extra = next_syzygies(ring, &levels[index - 1], &levels[index - 2], za, index)?;
                if !extra.is_empty() {
                    return Err(Error::UnexpectedLevel { level: index, a: za });
                }
            }
        }
        let gens = next_syzygies(ring, &levels[index - 1], &levels[index - 2], a, index)?;
        levels.push(Level { gens });
    }
    let table = BigradedBettiTable::from_levels(g, k, &levels);
    Ok(Resolution { levels, table })
}

/// Full relative canonical resolution of a genus-9 curve with its `g^1_6`.
pub fn resolve_curve(ring: &CoxRing, data: &CurveData) -> Result<Resolution> {
    let mut slices = Vec::new();
    for b in -2..=BOUNDARY_B {
        slices.push((b, ideal_slice(data, 2, b)?));
    }
    let first = minimal_generators(ring, 2, &slices);
    if first.iter().any(|g| g.b == BOUNDARY_B) {
        return Err(Error::WindowExhausted {
            level: 1,
            a: 2,
            b: BOUNDARY_B,
        });
    }
    resolve_from(ring, 9, 6, first, &[3, 4, 6], &[(4, 5)])
}

/// Betti table of a model, building all intermediate data.
pub fn betti_table<R: Rng + ?Sized>(model: &PlaneCurveModel, rng: &mut R) -> Result<BigradedBettiTable> {
    let data = CurveData::new(model.clone(), rng)?;
    let ring = CoxRing::new(data.field(), &data.scroll.e);
    Ok(resolve_curve(&ring, &data)?.table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::DEFAULT_PRIME;
    use crate::plane_curve::construct_nonic_model;
    use crate::rng::stage_rng;

    #[test]
    fn rank_formula() {
        assert_eq!(schreyer_rank(6, 1).unwrap(), 9);
        assert_eq!(schreyer_rank(6, 2).unwrap(), 16);
        assert_eq!(schreyer_rank(6, 3).unwrap(), 9);
        assert_eq!(schreyer_rank(5, 1).unwrap(), 5);
        assert!(schreyer_rank(6, 4).is_err());
        assert!(schreyer_rank(6, 0).is_err());
    }

    #[test]
    fn slopes() {
        assert_eq!(syzygy_slope(9, 6, 2), Ratio::from_integer(1));
        assert_eq!(syzygy_slope(9, 6, 1), Ratio::new(2, 3));
        assert_eq!(syzygy_slope(7, 6, 3), Ratio::from_integer(0));
    }

    #[test]
    fn expected_table_properties() {
        let t = expected_curve_table();
        assert!(t.is_curve_self_dual());
        assert_eq!(
            t.splitting_type(2),
            vec![2, 2, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 0, 0]
        );
        assert!(!is_balanced(&t.splitting_type(2)));
        assert!(is_balanced(&t.splitting_type(1)));
        assert!(is_balanced(&[0, 0, 0]));
        for (a, b) in [(2, 0), (2, 3), (3, -1), (4, 2), (5, 5)] {
            assert_eq!(
                t.euler_characteristic(&GENERAL_TYPE, a, b),
                16 * a as i64 + 6 * b as i64 - 8
            );
        }
    }

    #[test]
    fn broken_table_is_not_self_dual() {
        let mut t = expected_curve_table();
        // (2,3,1) is its own dual; (1,2,1) is paired with (3,4,1)
        t.add(2, 3, 1, 1);
        assert!(t.is_curve_self_dual());
        t.add(1, 2, 1, 1);
        assert!(!t.is_curve_self_dual());
    }

    #[test]
    fn ideal_slices_of_nonic() {
        let model = construct_nonic_model(DEFAULT_PRIME, 4).unwrap();
        let mut rng = stage_rng(4, "points", 0);
        let data = CurveData::new(model, &mut rng).unwrap();
        assert_eq!(ideal_slice(&data, 2, -1).unwrap().len(), 6);
        assert_eq!(ideal_slice(&data, 2, 0).unwrap().len(), 15);
        assert_eq!(ideal_slice(&data, 1, 0).unwrap().len(), 0);
    }

    #[test]
    fn nonic_resolution_matches_expected_table() {
        let model = construct_nonic_model(DEFAULT_PRIME, 1).unwrap();
        let mut rng = stage_rng(1, "points", 0);
        let data = CurveData::new(model, &mut rng).unwrap();
        let ring = CoxRing::new(data.field(), &data.scroll.e);
        let t0 = std::time::Instant::now();
        let res = resolve_curve(&ring, &data).unwrap();
        eprintln!("resolution took {:?}", t0.elapsed());
        eprintln!("{:?}", res.table.entries);
        assert_eq!(res.table, expected_curve_table());
        assert!(compositions_vanish(&ring, &res.levels));
    }

    #[test]
    fn minimal_generators_of_zero_ideal() {
        let f = PrimeField::new(DEFAULT_PRIME).unwrap();
        let ring = CoxRing::new(f, &GENERAL_TYPE);
        assert!(minimal_generators(&ring, 2, &[(-1, vec![]), (0, vec![])]).is_empty());
    }
}
