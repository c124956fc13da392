//! Evaluation of simplicial cones: determinants, the lattice points of the
//! semi-open parallelotope, excluded facets of the Stanley decomposition,
//! series numerators, degree 1 points and local Hilbert basis candidates.
//!
//! Points of the parallelotope are handled through their coordinates with
//! respect to the generators: `p = (r_1 v_1 + ... + r_d v_d) / N` with
//! `0 <= r_k < N`, where `N = |det G|`.

use std::collections::{BTreeMap, HashSet};

use num_bigint::BigInt;

use crate::linalg::{det_rows, solve_scaled, trigonal_diagonal, LinalgError};
use crate::scalar::{Checked, Overflow, Scalar};

/// A simplicial cone of the triangulation. `key` holds sorted indices into
/// the generator list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialCone<T> {
    pub key: Vec<usize>,
    /// `|det|` when already known (inherited or computed).
    pub det: Option<T>,
    /// Height of the generator it was added with over the opposite facet;
    /// zero for first simplices.
    pub height: T,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Tasks {
    pub volume: bool,
    pub series: bool,
    pub basis: bool,
    pub deg1: bool,
    pub keep_keys: bool,
    /// Recompute inherited determinants and compare.
    pub verify: bool,
}

impl Tasks {
    pub fn needs_points(&self) -> bool {
        self.series || self.basis || self.deg1
    }

    pub fn needs_classes(&self) -> bool {
        self.series || self.volume
    }
}

/// Data shared by all simplex evaluations of one run.
#[derive(Clone, Debug)]
pub struct EvalContext<T> {
    pub gens: Vec<Vec<T>>,
    pub degrees: Option<Vec<usize>>,
    pub order_vector: Vec<T>,
    pub tasks: Tasks,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EvalStats {
    pub simplices: u64,
    pub unimodular: u64,
    pub potentially_unimodular: u64,
    pub nongeneric: u64,
    pub inherited_dets: u64,
    pub det_mismatches: u64,
}

impl EvalStats {
    fn merge(&mut self, o: &EvalStats) {
        self.simplices += o.simplices;
        self.unimodular += o.unimodular;
        self.potentially_unimodular += o.potentially_unimodular;
        self.nongeneric += o.nongeneric;
        self.inherited_dets += o.inherited_dets;
        self.det_mismatches += o.det_mismatches;
    }
}

/// Accumulated contributions of all simplices with one sorted degree vector.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DenominatorClass {
    /// Coefficients of the numerator by exponent.
    pub numerator: Vec<BigInt>,
    pub det_sum: BigInt,
}

/// Results of evaluating a batch of simplices. Merging is commutative, so
/// the final state does not depend on evaluation order.
#[derive(Clone, Debug)]
pub struct Collector<T> {
    pub det_sum: BigInt,
    pub classes: BTreeMap<Vec<usize>, DenominatorClass>,
    pub candidates: HashSet<Vec<T>>,
    pub deg1: HashSet<Vec<T>>,
    pub keys: Vec<(Vec<usize>, T)>,
    pub stats: EvalStats,
}

impl<T: Scalar> Default for Collector<T> {
    fn default() -> Self {
        Collector {
            det_sum: BigInt::default(),
            classes: BTreeMap::new(),
            candidates: HashSet::new(),
            deg1: HashSet::new(),
            keys: Vec::new(),
            stats: EvalStats::default(),
        }
    }
}

impl<T: Scalar> Collector<T> {
    pub fn merge(&mut self, other: Collector<T>) {
        self.det_sum += other.det_sum;
        for (k, c) in other.classes {
            let e = self.classes.entry(k).or_default();
            e.det_sum += c.det_sum;
            if e.numerator.len() < c.numerator.len() {
                e.numerator.resize(c.numerator.len(), BigInt::default());
            }
            for (a, b) in e.numerator.iter_mut().zip(c.numerator) {
                *a += b;
            }
        }
        self.candidates.extend(other.candidates);
        self.deg1.extend(other.deg1);
        self.keys.extend(other.keys);
        self.stats.merge(&other.stats);
    }
}

/// Local scratch collector with machine counters, folded into a
/// [`Collector`] at the end of a batch.
struct LocalClass {
    numerator: Vec<u64>,
    det_sum: BigInt,
}

/// Evaluates a batch of simplices into a fresh collector.
pub fn evaluate_batch<T: Scalar>(
    ctx: &EvalContext<T>,
    batch: &[SimplicialCone<T>],
) -> Result<Collector<T>, LinalgError> {
    let mut col = Collector::default();
    let mut local: BTreeMap<Vec<usize>, LocalClass> = BTreeMap::new();
    for s in batch {
        evaluate_simplex(ctx, s, &mut col, &mut local)?;
    }
    for (k, c) in local {
        let e = col.classes.entry(k).or_default();
        e.det_sum += c.det_sum;
        if e.numerator.len() < c.numerator.len() {
            e.numerator.resize(c.numerator.len(), BigInt::default());
        }
        for (a, b) in e.numerator.iter_mut().zip(c.numerator) {
            *a += b;
        }
    }
    Ok(col)
}

/// `|det|` divided by the product of the degrees.
pub fn simplex_volume<T: Scalar>(det: &T, degrees: &[usize]) -> num_rational::BigRational {
    let prod: BigInt = degrees.iter().map(|&g| BigInt::from(g)).product();
    num_rational::BigRational::new(det.to_bigint(), prod)
}

/// Determinant of a simplex sharing a facet with a unimodular partner.
pub fn inherit_det<T: Scalar>(height: &T, partner_det: &T) -> Option<T> {
    partner_det.is_one().then(|| height.clone())
}

/// Screens for unimodularity: height at most 1 and coprime degrees.
pub fn pu_tests<T: Scalar>(height: &T, degrees: Option<&[usize]>) -> bool {
    if height > &T::one() {
        return false;
    }
    match degrees {
        Some(g) => g.iter().fold(0usize, |a, &b| num_integer::gcd(a, b)) == 1,
        None => true,
    }
}

/// Indicator `I` with `G^tr I = O_C`: numerators and the common denominator
/// `|det G|`.
pub fn indicator<T: Scalar>(rows: &[Vec<T>], order_vector: &[T]) -> Result<(Vec<T>, T), LinalgError> {
    let gt = transpose(rows);
    let (mut cols, n) = solve_scaled(&gt, &[order_vector.to_vec()])?;
    Ok((cols.pop().unwrap_or_default(), n))
}

/// For each index with a zero indicator entry, decides by the
/// lexicographic perturbation rule whether the opposite facet is excluded:
/// the support form is computed from `G x = e_i`, and the facet is excluded
/// iff its first nonzero coefficient is negative.
pub fn resolve_nongeneric<T: Scalar>(rows: &[Vec<T>], zero_indices: &[usize]) -> Result<Vec<bool>, LinalgError> {
    let d = rows.len();
    let rhs: Vec<Vec<T>> = zero_indices.iter().map(|&i| unit(d, i)).collect();
    let (forms, _) = solve_scaled(rows, &rhs)?;
    Ok(forms
        .iter()
        .map(|f| f.iter().find(|x| !x.is_zero()).is_some_and(Scalar::is_negative))
        .collect())
}

/// All vectors `b_1 e_1 + ... + b_d e_d` with `0 <= b_i < a_i`, in mixed
/// radix order with the last index running fastest.
pub fn residue_reps(diagonal: &[usize]) -> Vec<Vec<usize>> {
    let total: usize = diagonal.iter().product();
    let mut out = Vec::with_capacity(total);
    let mut b = vec![0usize; diagonal.len()];
    for _ in 0..total {
        out.push(b.clone());
        for j in (0..b.len()).rev() {
            b[j] += 1;
            if b[j] < diagonal[j] {
                break;
            }
            b[j] = 0;
        }
    }
    out
}

/// Lattice points of the semi-open parallelotope, as coordinate numerators
/// `r` over the common denominator `N = |det G|`, with the zero vector first.
///
/// Residue classes are the vectors `Σ b_i e_i` with `0 <= b_i < a_i` where
/// `a_i` is the diagonal of a unimodular trigonalization; their coordinates
/// come from `G^tr x_i = e_i` and are reduced modulo `N`.
pub fn parallelotope_points<T: Scalar>(rows: &[Vec<T>]) -> Result<(Vec<Vec<T>>, T), LinalgError> {
    let d = rows.len();
    let diag = trigonal_diagonal(rows)?;
    let big: Vec<usize> = (0..d).filter(|&i| !diag[i].is_one()).collect();
    if big.is_empty() {
        return Ok((vec![vec![T::zero(); d]], T::one()));
    }
    let gt = transpose(rows);
    let rhs: Vec<Vec<T>> = big.iter().map(|&i| unit(d, i)).collect();
    let (cols, n) = solve_scaled(&gt, &rhs)?;
    let steps: Vec<Vec<T>> = cols
        .iter()
        .map(|c| c.iter().map(|x| x.try_rem_floor(&n)).collect::<Checked<Vec<T>>>())
        .collect::<Checked<_>>()?;
    let radix: Vec<T> = big.iter().map(|&i| diag[i].clone()).collect();
    Ok((enumerate_mixed_radix(&steps, &radix, &n)?, n))
}

fn enumerate_mixed_radix<T: Scalar>(steps: &[Vec<T>], radix: &[T], n: &T) -> Checked<Vec<Vec<T>>> {
    let d = steps.first().map_or(0, Vec::len);
    let total = n.to_i64().ok_or(Overflow)? as usize;
    // Going from digit a_j - 1 back to 0 subtracts (a_j - 1) * step_j.
    let wraps: Vec<Vec<T>> = steps
        .iter()
        .zip(radix)
        .map(|(s, a)| {
            let m = a.try_sub(&T::one())?;
            s.iter().map(|x| x.try_mul(&m)?.try_rem_floor(n)).collect()
        })
        .collect::<Checked<_>>()?;
    let mut digits = vec![T::zero(); radix.len()];
    let mut r = vec![T::zero(); d];
    let mut out = Vec::with_capacity(total);
    for _ in 0..total {
        out.push(r.clone());
        for j in (0..radix.len()).rev() {
            digits[j] = digits[j].try_add(&T::one())?;
            if digits[j] < radix[j] {
                for (x, s) in r.iter_mut().zip(&steps[j]) {
                    *x = x.try_add(s)?;
                    if *x >= *n {
                        *x = x.try_sub(n)?;
                    }
                }
                break;
            }
            digits[j] = T::zero();
            for (x, w) in r.iter_mut().zip(&wraps[j]) {
                *x = x.try_sub(w)?;
                if x.is_negative() {
                    *x = x.try_add(n)?;
                }
            }
        }
    }
    Ok(out)
}

/// The point `Σ r_k v_k / N`.
pub fn point_of<T: Scalar>(r: &[T], rows: &[Vec<T>], n: &T) -> Checked<Vec<T>> {
    let d = rows[0].len();
    let mut p = vec![T::zero(); d];
    for (rk, v) in r.iter().zip(rows) {
        if rk.is_zero() {
            continue;
        }
        for (x, y) in p.iter_mut().zip(v) {
            *x = x.try_add(&rk.try_mul(y)?)?;
        }
    }
    if !n.is_one() {
        for x in p.iter_mut() {
            *x = x.try_div(n)?;
        }
    }
    Ok(p)
}

/// Degree of `Σ r_k v_k / N` from the generator degrees.
fn degree_of<T: Scalar>(r: &[T], degrees: &[usize], n: &T) -> Checked<usize> {
    let mut acc = T::zero();
    for (rk, g) in r.iter().zip(degrees) {
        if !rk.is_zero() {
            acc = acc.try_add(&rk.try_mul(&T::from_i64(*g as i64))?)?;
        }
    }
    let deg = acc.try_div(n)?;
    deg.to_i64().and_then(|x| usize::try_from(x).ok()).ok_or(Overflow)
}

/// Numerator of the series of the semi-open cone `σ \ S`: for each point the
/// exponent `deg x + deg ε(x)`, where `ε(x)` sums the generators with zero
/// coefficient whose opposite facet is excluded.
pub fn semi_open_numerator<T: Scalar>(
    points: &[Vec<T>],
    excluded: &[bool],
    degrees: &[usize],
    n: &T,
) -> Checked<Vec<u64>> {
    let mut num: Vec<u64> = Vec::new();
    for r in points {
        let mut e = degree_of(r, degrees, n)?;
        for (k, rk) in r.iter().enumerate() {
            if rk.is_zero() && excluded[k] {
                e += degrees[k];
            }
        }
        if num.len() <= e {
            num.resize(e + 1, 0);
        }
        num[e] += 1;
    }
    Ok(num)
}

/// Points of degree 1 among the parallelotope points.
pub fn degree1_points<T: Scalar>(points: &[Vec<T>], rows: &[Vec<T>], degrees: &[usize], n: &T) -> Checked<Vec<Vec<T>>> {
    let mut out = Vec::new();
    for r in points {
        if degree_of(r, degrees, n)? == 1 {
            out.push(point_of(r, rows, n)?);
        }
    }
    Ok(out)
}

/// Nonzero parallelotope points that are irreducible in the monoid of the
/// simplex, returned as points. A point `x` is reducible by `y` iff `x - y`
/// lies in the simplex, that is, iff `r(y) <= r(x)` coordinatewise. The
/// generators themselves are never needed as reducers, since all
/// coordinates of parallelotope points are below `N`.
pub fn local_hilbert_candidates<T: Scalar>(points: &[Vec<T>], rows: &[Vec<T>], n: &T) -> Checked<Vec<Vec<T>>> {
    let mut items: Vec<(T, &Vec<T>)> = Vec::with_capacity(points.len());
    for r in points {
        if r.iter().all(Scalar::is_zero) {
            continue;
        }
        let mut s = T::zero();
        for x in r {
            s = s.try_add(x)?;
        }
        items.push((s, r));
    }
    items.sort();
    let mut irreducible: Vec<(T, &Vec<T>)> = Vec::new();
    for (s, r) in items {
        let reducible = irreducible
            .iter()
            .take_while(|(t, _)| *t < s)
            .any(|(_, y)| y.iter().zip(r.iter()).all(|(a, b)| a <= b));
        if !reducible {
            irreducible.push((s, r));
        }
    }
    irreducible.into_iter().map(|(_, r)| point_of(r, rows, n)).collect()
}

fn transpose<T: Scalar>(rows: &[Vec<T>]) -> Vec<Vec<T>> {
    let d = rows.len();
    let w = rows.first().map_or(0, Vec::len);
    (0..w).map(|j| (0..d).map(|i| rows[i][j].clone()).collect()).collect()
}

fn unit<T: Scalar>(d: usize, i: usize) -> Vec<T> {
    let mut e = vec![T::zero(); d];
    e[i] = T::one();
    e
}

fn record_class<T: Scalar>(
    local: &mut BTreeMap<Vec<usize>, LocalClass>,
    degrees: &[usize],
    det: &T,
    num: Option<Vec<u64>>,
) {
    let mut key = degrees.to_vec();
    key.sort_unstable();
    let e = local.entry(key).or_insert_with(|| LocalClass {
        numerator: Vec::new(),
        det_sum: BigInt::default(),
    });
    e.det_sum += det.to_bigint();
    if let Some(num) = num {
        if e.numerator.len() < num.len() {
            e.numerator.resize(num.len(), 0);
        }
        for (a, b) in e.numerator.iter_mut().zip(num) {
            *a += b;
        }
    }
}

fn evaluate_simplex<T: Scalar>(
    ctx: &EvalContext<T>,
    s: &SimplicialCone<T>,
    col: &mut Collector<T>,
    local: &mut BTreeMap<Vec<usize>, LocalClass>,
) -> Result<(), LinalgError> {
    let tasks = ctx.tasks;
    let rows: Vec<Vec<T>> = s.key.iter().map(|&k| ctx.gens[k].clone()).collect();
    let degs: Option<Vec<usize>> = ctx.degrees.as_ref().map(|g| s.key.iter().map(|&k| g[k]).collect());
    col.stats.simplices += 1;

    let mut det: Option<T> = None;
    let mut points: Option<(Vec<Vec<T>>, T)> = None;
    let mut excluded: Option<Vec<bool>> = None;

    if tasks.series {
        let degs = degs.as_deref().ok_or(LinalgError::Shape("series needs a grading"))?;
        let pu = pu_tests(&s.height, Some(degs));
        let mut ind: Option<(Vec<T>, T)> = None;
        if pu {
            col.stats.potentially_unimodular += 1;
            let (i, n) = indicator(&rows, &ctx.order_vector)?;
            if n.is_one() {
                points = Some((vec![vec![T::zero(); rows.len()]], T::one()));
            }
            ind = Some((i, n));
        }
        if points.is_none() {
            points = Some(parallelotope_points(&rows)?);
        }
        let (ind, n) = match ind {
            Some(x) => x,
            None => indicator(&rows, &ctx.order_vector)?,
        };
        det = Some(n);
        let zero_idx: Vec<usize> = (0..ind.len()).filter(|&k| ind[k].is_zero()).collect();
        let mut ex: Vec<bool> = ind.iter().map(Scalar::is_negative).collect();
        if !zero_idx.is_empty() {
            col.stats.nongeneric += 1;
            for (k, e) in zero_idx.iter().zip(resolve_nongeneric(&rows, &zero_idx)?) {
                ex[*k] = e;
            }
        }
        excluded = Some(ex);
    } else if tasks.basis || tasks.deg1 {
        let p = parallelotope_points(&rows)?;
        det = Some(p.1.clone());
        points = Some(p);
    }

    let det = match det {
        Some(d) => {
            if let Some(inh) = &s.det {
                col.stats.inherited_dets += 1;
                if tasks.verify && *inh != d {
                    col.stats.det_mismatches += 1;
                }
            }
            d
        }
        None => match &s.det {
            Some(inh) => {
                col.stats.inherited_dets += 1;
                if tasks.verify {
                    let d = det_rows(&rows)?.try_abs()?;
                    if d != *inh {
                        col.stats.det_mismatches += 1;
                    }
                }
                inh.clone()
            }
            None => det_rows(&rows)?.try_abs()?,
        },
    };
    if det.is_one() {
        col.stats.unimodular += 1;
    }
    col.det_sum += det.to_bigint();
    if tasks.keep_keys {
        col.keys.push((s.key.clone(), det.clone()));
    }

    let num = match (&points, &excluded, &degs) {
        (Some((pts, n)), Some(ex), Some(g)) => Some(semi_open_numerator(pts, ex, g, n)?),
        _ => None,
    };
    if tasks.needs_classes() {
        if let Some(g) = &degs {
            record_class(local, g, &det, num);
        }
    }
    if let Some((pts, n)) = &points {
        if tasks.deg1 {
            if let Some(g) = &degs {
                col.deg1.extend(degree1_points(pts, &rows, g, n)?);
            }
        }
        if tasks.basis && !n.is_one() {
            col.candidates.extend(local_hilbert_candidates(pts, &rows, n)?);
        }
    }
    Ok(())
}
