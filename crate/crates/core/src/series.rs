//! Hilbert series: summation of denominator classes, cyclotomic reduction,
//! the standard form with denominator `(1 - t^{e_1}) ... (1 - t^{e_d})`,
//! and the Hilbert quasipolynomial.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use serde::{Deserialize, Serialize};

use crate::poly::{self, add_assign, div_exact, geometric, mul, mul_one_minus, trim, Cyclotomics, Poly};
use crate::report::dec;

/// `R(t) / Π (1 - t^{s_j})`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawSeries {
    #[serde(with = "dec")]
    pub numerator: Poly,
    /// Sorted ascending.
    pub denominator: Vec<usize>,
}

/// `Z(t) / Π ζ_z^{m_z}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclotomicSeries {
    #[serde(with = "dec")]
    pub numerator: Poly,
    /// `(order, multiplicity)`, ascending order, positive multiplicities.
    pub factors: Vec<(usize, usize)>,
}

/// `F(t) / Π_{k=1..d} (1 - t^{e_k})` with `e_1 | ... | e_d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StandardSeries {
    #[serde(with = "dec")]
    pub numerator: Poly,
    pub denominator: Vec<usize>,
}

/// `H(k) = Σ_j q_j(k mod π) k^j`, stored as integer numerators over one
/// common denominator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Quasipolynomial {
    pub period: usize,
    /// `coefficients[r][j]` is the numerator of `q_j` for residue `r`.
    #[serde(with = "dec")]
    pub coefficients: Vec<Vec<BigInt>>,
    #[serde(with = "dec")]
    pub denominator: BigInt,
}

impl Quasipolynomial {
    pub fn coefficient(&self, residue: usize, j: usize) -> BigRational {
        BigRational::new(self.coefficients[residue][j].clone(), self.denominator.clone())
    }

    pub fn evaluate(&self, k: usize) -> BigRational {
        let row = &self.coefficients[k % self.period];
        let kk = BigInt::from(k);
        let num = row.iter().rev().fold(BigInt::zero(), |acc, c| acc * &kk + c);
        BigRational::new(num, self.denominator.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertSeries {
    pub raw: RawSeries,
    pub cyclotomic: CyclotomicSeries,
    pub standard: Option<StandardSeries>,
    pub quasipolynomial: Option<Quasipolynomial>,
}

/// Limits on the size of the derived presentations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SeriesLimits {
    pub max_standard_degree: usize,
    pub max_period: usize,
}

impl Default for SeriesLimits {
    fn default() -> Self {
        SeriesLimits {
            max_standard_degree: 10_000,
            max_period: 1_000_000,
        }
    }
}

/// Adds a numerator into the class of the given degrees.
pub fn accumulate(classes: &mut BTreeMap<Vec<usize>, Poly>, degrees: &[usize], numerator: &Poly) {
    let mut key = degrees.to_vec();
    key.sort_unstable();
    add_assign(classes.entry(key).or_default(), numerator);
}

/// Sums the class fractions over a common denominator that is extended
/// whenever a class does not fit into it. A class exponent `g` fits into a
/// common exponent `s` when `g | s`.
pub fn sum_raw(classes: &BTreeMap<Vec<usize>, Poly>) -> RawSeries {
    let mut order: Vec<(Vec<usize>, &Poly)> = classes
        .iter()
        .map(|(k, v)| {
            let mut desc = k.clone();
            desc.sort_unstable_by(|a, b| b.cmp(a));
            (desc, v)
        })
        .collect();
    order.sort_by(|a, b| b.0.cmp(&a.0));

    let mut denom: Vec<usize> = Vec::new();
    let mut total: Poly = Vec::new();
    for (degs, num) in order {
        let mut used = vec![false; denom.len()];
        let mut multiplier: Poly = vec![BigInt::one()];
        let mut extra: Vec<usize> = Vec::new();
        for &g in &degs {
            let slot = (0..denom.len())
                .filter(|&j| !used[j] && denom[j].is_multiple_of(g))
                .min_by_key(|&j| (denom[j], j));
            match slot {
                Some(j) => {
                    used[j] = true;
                    multiplier = mul(&multiplier, &geometric(g, denom[j]));
                }
                None => extra.push(g),
            }
        }
        for (j, &s) in denom.iter().enumerate() {
            if !used[j] {
                multiplier = mul_one_minus(&multiplier, s);
            }
        }
        for &s in &extra {
            total = mul_one_minus(&total, s);
            denom.push(s);
        }
        add_assign(&mut total, &mul(num, &multiplier));
    }
    // Keep the denominator sorted; the numerator does not depend on order.
    denom.sort_unstable();
    trim(&mut total);
    RawSeries {
        numerator: total,
        denominator: denom,
    }
}

/// Multiplicities `m_e` of `ζ_e` in `Π (1 - t^{s})`.
fn cyclotomic_multiplicities(denominator: &[usize]) -> BTreeMap<usize, usize> {
    let mut m = BTreeMap::new();
    for &s in denominator {
        for e in poly::divisors(s) {
            *m.entry(e).or_insert(0) += 1;
        }
    }
    m
}

/// Rewrites the denominator as a product of cyclotomic polynomials and
/// cancels every factor that divides the numerator.
pub fn cyclotomic_reduce(raw: &RawSeries, cyc: &mut Cyclotomics) -> CyclotomicSeries {
    let mut mult = cyclotomic_multiplicities(&raw.denominator);
    let mut num = raw.numerator.clone();
    for (&z, m) in mult.iter_mut() {
        if num.is_empty() {
            break;
        }
        let phi = cyc.get(z);
        while *m > 0 {
            match div_exact(&num, &phi) {
                Some(q) => {
                    num = q;
                    *m -= 1;
                }
                None => break,
            }
        }
    }
    CyclotomicSeries {
        numerator: num,
        factors: mult.into_iter().filter(|&(_, m)| m > 0).collect(),
    }
}

/// The standard form with `d` denominator factors, if the numerator degree
/// stays within `max_degree`.
pub fn standardize(c: &CyclotomicSeries, d: usize, max_degree: usize, cyc: &mut Cyclotomics) -> Option<StandardSeries> {
    if c.factors.iter().any(|&(_, m)| m > d) {
        return None;
    }
    let mut exps = Vec::with_capacity(d);
    for k in 1..=d {
        let need = d - k + 1;
        let e = c
            .factors
            .iter()
            .filter(|&&(_, m)| m >= need)
            .try_fold(1usize, |acc, &(z, _)| checked_lcm(acc, z))?;
        exps.push(e);
    }
    // Π (1 - t^{e_k}) has degree Σ e_k; the numerator grows by the part
    // not already in the cyclotomic denominator.
    let mut total = 0usize;
    for &e in &exps {
        total = total.checked_add(e)?;
    }
    let have_degree: usize = c.factors.iter().map(|&(z, m)| m * euler_phi(z)).sum();
    let extra_degree = total.checked_sub(have_degree)?;
    let num_degree = poly::degree(&c.numerator).unwrap_or(0);
    if num_degree + extra_degree > max_degree {
        return None;
    }
    let target = cyclotomic_multiplicities(&exps);
    let have: BTreeMap<usize, usize> = c.factors.iter().copied().collect();
    let mut f = c.numerator.clone();
    for (&z, &m) in &target {
        let h = have.get(&z).copied().unwrap_or(0);
        let phi = cyc.get(z);
        for _ in h..m {
            f = mul(&f, &phi);
        }
    }
    Some(StandardSeries {
        numerator: f,
        denominator: exps,
    })
}

fn checked_lcm(a: usize, b: usize) -> Option<usize> {
    (a / a.gcd(&b)).checked_mul(b)
}

/// Period of the Hilbert quasipolynomial: the lcm of the cyclotomic
/// indices, `None` if it does not fit in `usize`.
pub fn period(c: &CyclotomicSeries) -> Option<usize> {
    c.factors.iter().try_fold(1usize, |acc, &(z, _)| checked_lcm(acc, z))
}

fn euler_phi(n: usize) -> usize {
    let (mut x, mut phi) = (n, n);
    let mut p = 2;
    while p * p <= x {
        if x % p == 0 {
            while x % p == 0 {
                x /= p;
            }
            phi -= phi / p;
        }
        p += 1;
    }
    if x > 1 {
        phi -= phi / x;
    }
    phi
}

/// Power series coefficients `H(0), ..., H(k_max)` of `num / Π (1 - t^{s})`.
pub fn series_coefficients(numerator: &Poly, denominator: &[usize], k_max: usize) -> Vec<BigInt> {
    let mut c = vec![BigInt::zero(); k_max + 1];
    for (k, x) in numerator.iter().enumerate().take(k_max + 1) {
        c[k] = x.clone();
    }
    for &s in denominator {
        for k in s..=k_max {
            let prev = c[k - s].clone();
            c[k] += prev;
        }
    }
    c
}

/// Expansion of a cyclotomic presentation, through an equivalent
/// presentation with denominator factors `1 - t^z`.
pub fn cyclotomic_coefficients(c: &CyclotomicSeries, k_max: usize, cyc: &mut Cyclotomics) -> Vec<BigInt> {
    let mut num = c.numerator.clone();
    let mut denom = Vec::new();
    for &(z, m) in &c.factors {
        // 1 / ζ_z = (Π_{e | z, e < z} ζ_e) / (1 - t^z)
        for _ in 0..m {
            for e in poly::divisors(z) {
                if e != z {
                    num = mul(&num, &cyc.get(e));
                }
            }
            denom.push(z);
        }
    }
    series_coefficients(&num, &denom, k_max)
}

/// Interpolates the Hilbert quasipolynomial of a rank `d` cone from the
/// series coefficients and checks it against `d` further values per
/// residue class. Returns `None` if the period exceeds `max_period`.
pub fn quasipolynomial(raw: &RawSeries, c: &CyclotomicSeries, d: usize, max_period: usize) -> Option<Quasipolynomial> {
    let period = period(c)?;
    if period > max_period || d == 0 {
        return None;
    }
    // Each residue class is sampled at 2d points: d to fit, d to verify.
    let k_max = period * (2 * d);
    let (rows, denominator) = match small_coefficients(&raw.numerator, &raw.denominator, k_max) {
        Some(h) => match residue_polynomials(&h, period, d) {
            Ok((rows, den)) => (
                rows.into_iter()
                    .map(|r| r.into_iter().map(BigInt::from).collect())
                    .collect(),
                BigInt::from(den),
            ),
            Err(Fit::Mismatch) => return None,
            Err(Fit::Overflow) => big_residue_polynomials(raw, period, d, k_max)?,
        },
        None => big_residue_polynomials(raw, period, d, k_max)?,
    };
    Some(Quasipolynomial {
        period,
        coefficients: rows,
        denominator,
    })
}

fn big_residue_polynomials(
    raw: &RawSeries,
    period: usize,
    d: usize,
    k_max: usize,
) -> Option<(Vec<Vec<BigInt>>, BigInt)> {
    let h = series_coefficients(&raw.numerator, &raw.denominator, k_max);
    residue_polynomials(&h, period, d).ok()
}

/// Like [`series_coefficients`] in `i128`, `None` on overflow.
fn small_coefficients(numerator: &Poly, denominator: &[usize], k_max: usize) -> Option<Vec<i128>> {
    let mut c = vec![0i128; k_max + 1];
    for (k, x) in numerator.iter().enumerate().take(k_max + 1) {
        c[k] = num_traits::ToPrimitive::to_i128(x)?;
    }
    for &s in denominator {
        for k in s..=k_max {
            c[k] = c[k].checked_add(c[k - s])?;
        }
    }
    Some(c)
}

enum Fit {
    Overflow,
    Mismatch,
}

trait Exact:
    Clone + Integer + num_traits::CheckedAdd + num_traits::CheckedSub + num_traits::CheckedMul + From<i64>
{
}
impl<T: Clone + Integer + num_traits::CheckedAdd + num_traits::CheckedSub + num_traits::CheckedMul + From<i64>> Exact
    for T
{
}

fn checked<T>(x: Option<T>) -> Result<T, Fit> {
    x.ok_or(Fit::Overflow)
}

/// Polynomials in `k` through `h(r), h(r + P), ...` for every residue `r`,
/// scaled to integers over one common denominator in lowest terms.
///
/// With `u = (k - r) / P` the class polynomial is `Σ Δ^i y_0 · C(u, i)`,
/// where the forward differences `Δ^i y_0` are integers. Multiplying by
/// `(d-1)! P^{d-1}` clears every denominator.
fn residue_polynomials<T: Exact>(h: &[T], period: usize, d: usize) -> Result<(Vec<Vec<T>>, T), Fit> {
    let p = T::from(period as i64);
    // scale[i] = (d-1)!/i! · P^{d-1-i}
    let mut scale = vec![T::one(); d];
    for i in (0..d.saturating_sub(1)).rev() {
        let next = checked(scale[i + 1].checked_mul(&T::from((i + 1) as i64)))?;
        scale[i] = checked(next.checked_mul(&p))?;
    }
    let denominator = scale[0].clone();

    let mut rows = Vec::with_capacity(period);
    for r in 0..period {
        let mut diffs: Vec<T> = (0..2 * d).map(|j| h[r + j * period].clone()).collect();
        let mut leading = Vec::with_capacity(d);
        for level in 0..d {
            leading.push(diffs[0].clone());
            for j in 0..diffs.len() - 1 {
                diffs[j] = checked(diffs[j + 1].checked_sub(&diffs[j]))?;
            }
            diffs.pop();
            if level + 1 == d && diffs.iter().any(|x| !x.is_zero()) {
                return Err(Fit::Mismatch);
            }
        }
        // Σ leading[i] · scale[i] · Π_{m<i} (k - r - mP)
        let mut acc = vec![T::zero(); d];
        let mut basis = vec![T::one()];
        for i in 0..d {
            let f = checked(leading[i].checked_mul(&scale[i]))?;
            for (a, b) in acc.iter_mut().zip(&basis) {
                *a = checked(a.checked_add(&checked(f.checked_mul(b))?))?;
            }
            if i + 1 < d {
                let shift = T::from((r + i * period) as i64);
                let mut next = vec![T::zero(); basis.len() + 1];
                for (j, b) in basis.iter().enumerate() {
                    next[j + 1] = checked(next[j + 1].checked_add(b))?;
                    next[j] = checked(next[j].checked_sub(&checked(b.checked_mul(&shift))?))?;
                }
                basis = next;
            }
        }
        rows.push(acc);
    }
    let g = rows.iter().flatten().fold(denominator.clone(), |g, x| g.gcd(x));
    let rows = rows
        .into_iter()
        .map(|row| row.into_iter().map(|x| x.div_floor(&g)).collect())
        .collect();
    Ok((rows, denominator.div_floor(&g)))
}

/// The leading quasipolynomial coefficient `q_{d-1}` without the
/// quasipolynomial: `Z(1) / (Π_{z>1} ζ_z(1)^{m_z} (d-1)!)`, where `ζ_z(1)`
/// is `p` for a prime power `z = p^k` and 1 otherwise. `None` unless the
/// pole at `t = 1` has order `d`.
pub fn leading_coefficient(c: &CyclotomicSeries, d: usize) -> Option<BigRational> {
    if d == 0 || !c.factors.contains(&(1, d)) {
        return None;
    }
    let mut den: BigInt = (1..d).map(BigInt::from).product();
    for &(z, m) in &c.factors {
        if let Some(p) = prime_power_base(z) {
            den *= BigInt::from(p).pow(m as u32);
        }
    }
    Some(BigRational::new(numerator_at_one(&c.numerator), den))
}

fn prime_power_base(z: usize) -> Option<usize> {
    if z < 2 {
        return None;
    }
    let p = (2..=z).find(|&q| z.is_multiple_of(q))?;
    let mut x = z;
    while x.is_multiple_of(p) {
        x /= p;
    }
    (x == 1).then_some(p)
}

/// Checks `q_{d-1} = vol / (d-1)!` for every residue class.
pub fn multiplicity_check(q: &Quasipolynomial, volume: &BigRational, d: usize) -> bool {
    if d == 0 {
        return false;
    }
    let fact: BigInt = (1..d).map(BigInt::from).product();
    let expected = volume / BigRational::from_integer(fact);
    // c / D == a / b  <=>  c b == a D
    let lhs = |c: &BigInt| c * expected.denom();
    let rhs = expected.numer() * &q.denominator;
    q.coefficients.iter().all(|row| lhs(&row[d - 1]) == rhs)
}

/// Full analysis of the summed classes of a rank `d` cone.
pub fn analyze(classes: &BTreeMap<Vec<usize>, Poly>, d: usize, limits: SeriesLimits) -> HilbertSeries {
    let mut cyc = Cyclotomics::new();
    let raw = sum_raw(classes);
    let cyclotomic = cyclotomic_reduce(&raw, &mut cyc);
    let standard = standardize(&cyclotomic, d, limits.max_standard_degree, &mut cyc);
    let quasipolynomial = quasipolynomial(&raw, &cyclotomic, d, limits.max_period);
    HilbertSeries {
        raw,
        cyclotomic,
        standard,
        quasipolynomial,
    }
}

/// `(1 - t^{s_1})(1 - t^{s_2})...` as text.
pub fn format_denominator(exps: &[usize]) -> String {
    if exps.is_empty() {
        return "1".to_string();
    }
    exps.iter()
        .map(|&s| {
            if s == 1 {
                "(1 - t)".to_string()
            } else {
                format!("(1 - t^{s})")
            }
        })
        .collect::<Vec<_>>()
        .join("")
}

pub fn format_cyclotomic_denominator(factors: &[(usize, usize)]) -> String {
    if factors.is_empty() {
        return "1".to_string();
    }
    factors
        .iter()
        .map(|&(n, m)| if m == 1 { format!("Φ{n}") } else { format!("Φ{n}^{m}") })
        .collect::<Vec<_>>()
        .join(" ")
}

/// `F(1)`, the numerator evaluated at `t = 1`.
pub fn numerator_at_one(p: &Poly) -> BigInt {
    p.iter().fold(BigInt::zero(), |a, c| a + c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::from_i64;

    fn one_class(degs: &[usize]) -> BTreeMap<Vec<usize>, Poly> {
        let mut m = BTreeMap::new();
        accumulate(&mut m, degs, &from_i64(&[1]));
        m
    }

    #[test]
    fn raw_sums() {
        let r = sum_raw(&one_class(&[2, 3]));
        assert_eq!(
            r,
            RawSeries {
                numerator: from_i64(&[1]),
                denominator: vec![2, 3]
            }
        );

        let mut m = BTreeMap::new();
        accumulate(&mut m, &[1], &from_i64(&[1]));
        accumulate(&mut m, &[1], &from_i64(&[1]));
        assert_eq!(
            sum_raw(&m),
            RawSeries {
                numerator: from_i64(&[2]),
                denominator: vec![1]
            }
        );

        let mut m = BTreeMap::new();
        accumulate(&mut m, &[1, 1], &from_i64(&[1]));
        accumulate(&mut m, &[2, 1], &from_i64(&[1]));
        assert_eq!(
            sum_raw(&m),
            RawSeries {
                numerator: from_i64(&[2, 1]),
                denominator: vec![1, 2]
            }
        );
    }

    #[test]
    fn cyclotomic_forms() {
        let mut cyc = Cyclotomics::new();
        let raw = sum_raw(&one_class(&[2, 3]));
        let c = cyclotomic_reduce(&raw, &mut cyc);
        assert_eq!(c.numerator, from_i64(&[1]));
        assert_eq!(c.factors, vec![(1, 2), (2, 1), (3, 1)]);

        let c = cyclotomic_reduce(
            &RawSeries {
                numerator: from_i64(&[1, -1]),
                denominator: vec![1, 1],
            },
            &mut cyc,
        );
        assert_eq!((c.numerator, c.factors), (from_i64(&[1]), vec![(1, 1)]));

        let c = cyclotomic_reduce(
            &RawSeries {
                numerator: from_i64(&[1, 0, -1]),
                denominator: vec![6],
            },
            &mut cyc,
        );
        assert_eq!((c.numerator, c.factors), (from_i64(&[1]), vec![(3, 1), (6, 1)]));
    }

    #[test]
    fn standard_forms() {
        let mut cyc = Cyclotomics::new();
        let c = CyclotomicSeries {
            numerator: from_i64(&[1]),
            factors: vec![(1, 2), (2, 1), (3, 1)],
        };
        let s = standardize(&c, 2, 100, &mut cyc).unwrap();
        assert_eq!(
            s,
            StandardSeries {
                numerator: from_i64(&[1, -1, 1]),
                denominator: vec![1, 6]
            }
        );

        let c = CyclotomicSeries {
            numerator: from_i64(&[1]),
            factors: vec![(1, 3)],
        };
        assert_eq!(standardize(&c, 3, 100, &mut cyc).unwrap().denominator, vec![1, 1, 1]);

        let c = CyclotomicSeries {
            numerator: from_i64(&[1]),
            factors: vec![(1, 2), (2, 1)],
        };
        let s = standardize(&c, 2, 100, &mut cyc).unwrap();
        assert_eq!(
            s,
            StandardSeries {
                numerator: from_i64(&[1]),
                denominator: vec![1, 2]
            }
        );
        assert_eq!(
            standardize(&c, 2, 0, &mut cyc).map(|s| s.numerator),
            Some(from_i64(&[1]))
        );
    }

    #[test]
    fn quasipolynomials() {
        let mut cyc = Cyclotomics::new();
        let raw = RawSeries {
            numerator: from_i64(&[1]),
            denominator: vec![1, 1],
        };
        let c = cyclotomic_reduce(&raw, &mut cyc);
        let q = quasipolynomial(&raw, &c, 2, 100).unwrap();
        assert_eq!(q.period, 1);
        assert_eq!(q.coefficients, vec![vec![BigInt::from(1), BigInt::from(1)]]);

        let raw = sum_raw(&one_class(&[2, 3]));
        let c = cyclotomic_reduce(&raw, &mut cyc);
        let q = quasipolynomial(&raw, &c, 2, 100).unwrap();
        assert_eq!(q.period, 6);
        let sixth = BigRational::new(1.into(), 6.into());
        for r in 0..6 {
            assert_eq!(q.coefficient(r, 1), sixth);
        }
        let h: Vec<BigRational> = (0..7).map(|k| q.evaluate(k)).collect();
        let expect: Vec<BigRational> = [1, 0, 1, 1, 1, 1, 2]
            .iter()
            .map(|&x| BigRational::from_integer(x.into()))
            .collect();
        assert_eq!(h, expect);
        assert!(multiplicity_check(&q, &sixth, 2));
        assert_eq!(leading_coefficient(&c, 2), Some(sixth.clone()));
        assert!(quasipolynomial(&raw, &c, 2, 5).is_none());

        // degrees 4, 9: ζ_2, ζ_4, ζ_3, ζ_9 contribute 2, 2, 3, 3
        let raw = sum_raw(&one_class(&[4, 9]));
        let c = cyclotomic_reduce(&raw, &mut cyc);
        assert_eq!(leading_coefficient(&c, 2), Some(BigRational::new(1.into(), 36.into())));
        let q = quasipolynomial(&raw, &c, 2, 100).unwrap();
        assert_eq!(q.coefficient(7, 1), BigRational::new(1.into(), 36.into()));

        // the lcm of these degrees exceeds 2^64
        let primes = [53, 59, 61, 67, 71, 73, 79, 83, 89, 97, 101];
        let raw = sum_raw(&one_class(&primes));
        let c = cyclotomic_reduce(&raw, &mut cyc);
        assert_eq!(period(&c), None);
        assert!(quasipolynomial(&raw, &c, primes.len(), usize::MAX).is_none());
        assert!(standardize(&c, primes.len(), usize::MAX, &mut cyc).is_none());
        assert_eq!(euler_phi(36), 12);
        assert_eq!(euler_phi(97), 96);

        let raw = RawSeries {
            numerator: from_i64(&[1]),
            denominator: vec![1, 2],
        };
        let c = cyclotomic_reduce(&raw, &mut cyc);
        let q = quasipolynomial(&raw, &c, 2, 100).unwrap();
        assert_eq!(q.period, 2);
        for k in 0..20 {
            assert_eq!(q.evaluate(k), BigRational::from_integer(BigInt::from(k / 2 + 1)));
        }
    }

    #[test]
    fn coefficients() {
        assert!(series_coefficients(&from_i64(&[1]), &[1], 10)
            .iter()
            .all(|c| c.is_one()));
        let c = series_coefficients(&from_i64(&[1, -1, 1]), &[1, 6], 6);
        assert_eq!(c, from_i64(&[1, 0, 1, 1, 1, 1, 2]));
        let c = series_coefficients(&from_i64(&[1]), &[1, 1, 1], 8);
        for (k, x) in c.iter().enumerate() {
            assert_eq!(*x, BigInt::from((k + 1) * (k + 2) / 2));
        }
    }
}
