//! Brute-force oracles shared by the integration tests. Nothing here uses
//! the engine's own geometry.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn det_i128(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    if n == 1 {
        return m[0][0];
    }
    let mut total = 0;
    for j in 0..n {
        if m[0][j] == 0 {
            continue;
        }
        let minor: Vec<Vec<i128>> = m[1..]
            .iter()
            .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect())
            .collect();
        let s = if j % 2 == 0 { 1 } else { -1 };
        total += s * m[0][j] * det_i128(&minor);
    }
    total
}

pub fn rank_i128(rows: &[Vec<i128>]) -> usize {
    let mut m: Vec<Vec<i128>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, p);
        let pivot = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && row[c] != 0 {
                let (a, b) = (pivot[c], row[c]);
                for (x, p) in row.iter_mut().zip(&pivot) {
                    *x = *x * a - p * b;
                }
                let g = row.iter().fold(0i128, |g, &x| gcd(g, x));
                if g > 1 {
                    for x in row.iter_mut() {
                        *x /= g;
                    }
                }
            }
        }
        r += 1;
    }
    r
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Facets of a full-dimensional cone by checking every normal spanned by
/// `d - 1` generators: primitive forms, sorted.
pub fn facets(gens: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let d = gens[0].len();
    let g: Vec<Vec<i128>> = gens.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut out: Vec<Vec<i64>> = Vec::new();
    for s in subsets(g.len(), d - 1) {
        let rows: Vec<Vec<i128>> = s.iter().map(|&i| g[i].clone()).collect();
        if rank_i128(&rows) != d - 1 {
            continue;
        }
        // Generalized cross product by cofactors.
        let mut n: Vec<i128> = (0..d)
            .map(|j| {
                let minor: Vec<Vec<i128>> = rows
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect())
                    .collect();
                if j % 2 == 0 {
                    det_i128(&minor)
                } else {
                    -det_i128(&minor)
                }
            })
            .collect();
        let vals: Vec<i128> = g.iter().map(|x| x.iter().zip(&n).map(|(a, b)| a * b).sum()).collect();
        let pos = vals.iter().any(|&v| v > 0);
        let neg = vals.iter().any(|&v| v < 0);
        if pos && neg {
            continue;
        }
        if neg {
            n.iter_mut().for_each(|x| *x = -*x);
        }
        let c = n.iter().fold(0, |a, &b| gcd(a, b));
        let f: Vec<i64> = n.iter().map(|x| (x / c) as i64).collect();
        if !out.contains(&f) {
            out.push(f);
        }
    }
    out.sort();
    out
}

pub fn inside(facets: &[Vec<i64>], x: &[i64]) -> bool {
    facets
        .iter()
        .all(|f| f.iter().zip(x).map(|(a, b)| a * b).sum::<i64>() >= 0)
}

/// All nonnegative integer vectors of length `d` with coordinate sum `k`.
pub fn compositions(d: usize, k: usize) -> Vec<Vec<i64>> {
    if d == 1 {
        return vec![vec![k as i64]];
    }
    let mut out = Vec::new();
    for first in 0..=k {
        for mut rest in compositions(d - 1, k - first) {
            rest.insert(0, first as i64);
            out.push(rest);
        }
    }
    out
}

/// `H(C, k)` for a cone in the nonnegative orthant graded by the coordinate
/// sum.
pub fn count_by_sum(facets: &[Vec<i64>], d: usize, k: usize) -> u64 {
    compositions(d, k).iter().filter(|x| inside(facets, x)).count() as u64
}

/// Hilbert basis of a cone in the nonnegative orthant: lattice points of the
/// cone inside the box bounding all parallelotopes, processed by increasing
/// coordinate sum. A point is irreducible iff subtracting no smaller
/// irreducible stays in the cone.
pub fn hilbert_basis_naive(gens: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let d = gens[0].len();
    let f = facets(gens);
    // Any Hilbert basis element lies in the half-open parallelotope of a
    // simplex of d generators, or is a generator.
    let bound: Vec<i64> = (0..d)
        .map(|j| {
            let mut col: Vec<i64> = gens.iter().map(|g| g[j]).collect();
            col.sort_unstable_by(|a, b| b.cmp(a));
            col.iter().take(d).sum::<i64>()
        })
        .collect();
    let mut pts: Vec<Vec<i64>> = Vec::new();
    let mut x = vec![0i64; d];
    loop {
        if x.iter().any(|&v| v != 0) && inside(&f, &x) {
            pts.push(x.clone());
        }
        let mut j = 0;
        loop {
            if j == d {
                break;
            }
            x[j] += 1;
            if x[j] <= bound[j] {
                break;
            }
            x[j] = 0;
            j += 1;
        }
        if j == d {
            break;
        }
    }
    pts.sort_by_key(|p| p.iter().sum::<i64>());
    let mut hb: Vec<Vec<i64>> = Vec::new();
    for p in pts {
        let reducible = hb.iter().any(|h| {
            let diff: Vec<i64> = p.iter().zip(h).map(|(a, b)| a - b).collect();
            diff.iter().all(|&v| v >= 0) && inside(&f, &diff)
        });
        if !reducible {
            hb.push(p);
        }
    }
    hb.sort();
    hb
}

/// Random full-dimensional cone in the nonnegative orthant with `d`
/// coordinates, at most `max_gens` generators, entries in `[0, 7]`.
pub fn random_cone(rng: &mut ChaCha8Rng, d: usize, max_gens: usize) -> Vec<Vec<i64>> {
    loop {
        let n = rng.gen_range(d..=max_gens);
        let gens: Vec<Vec<i64>> = (0..n).map(|_| (0..d).map(|_| rng.gen_range(0..=7)).collect()).collect();
        if gens.iter().any(|g| g.iter().all(|&x| x == 0)) {
            continue;
        }
        let rows: Vec<Vec<i128>> = gens.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
        if rank_i128(&rows) == d {
            return gens;
        }
    }
}

/// Random lattice polytope in `[0, 7]^{d-1}` lifted to height 1.
pub fn random_polytope_cone(rng: &mut ChaCha8Rng, d: usize, max_gens: usize) -> Vec<Vec<i64>> {
    loop {
        let n = rng.gen_range(d..=max_gens);
        let gens: Vec<Vec<i64>> = (0..n)
            .map(|_| {
                let mut v: Vec<i64> = (0..d - 1).map(|_| rng.gen_range(0..=7)).collect();
                v.push(1);
                v
            })
            .collect();
        let rows: Vec<Vec<i128>> = gens.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
        if rank_i128(&rows) == d {
            return gens;
        }
    }
}

pub fn to_i64(v: &[Vec<BigInt>]) -> Vec<Vec<i64>> {
    v.iter()
        .map(|r| r.iter().map(|x| x.to_i64().expect("small entry")).collect())
        .collect()
}

/// Series coefficients `H(0..=k)` of the standard form in a report.
pub fn expand(num: &[BigInt], denom: &[usize], k: usize) -> Vec<i64> {
    conenorm::series::series_coefficients(&num.to_vec(), denom, k)
        .iter()
        .map(|x| x.to_i64().unwrap())
        .collect()
}
