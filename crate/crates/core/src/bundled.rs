//! Bundled example families.

use num_bigint::BigInt;

use crate::input::{ConeInput, InputKind};
use crate::poly::{self, Cyclotomics};

/// Cone over the `n`-dimensional cross polytope: `(±e_i, 1)` in `Z^{n+1}`.
pub fn cross(n: usize) -> ConeInput {
    let mut rows = Vec::with_capacity(2 * n);
    for i in 0..n {
        for s in [1i64, -1] {
            let mut v = vec![0i64; n + 1];
            v[i] = s;
            v[n] = 1;
            rows.push(v);
        }
    }
    ConeInput::from_i64(&rows, InputKind::Gens)
}

/// Magic squares of size `n`: nonnegative `n × n` matrices (row major) whose
/// rows, columns and both diagonals have a common sum. Each equation is
/// given as a pair of opposite inequalities.
pub fn magic(n: usize) -> ConeInput {
    let d = n * n;
    let mut rows: Vec<Vec<i64>> = (0..d)
        .map(|i| {
            let mut v = vec![0; d];
            v[i] = 1;
            v
        })
        .collect();
    let line = |cells: &mut dyn Iterator<Item = usize>| {
        let mut v = vec![0i64; d];
        for c in cells {
            v[c] += 1;
        }
        v
    };
    let first_row = line(&mut (0..n));
    let mut lines = Vec::new();
    for i in 1..n {
        lines.push(line(&mut (0..n).map(|j| i * n + j)));
    }
    for j in 0..n {
        lines.push(line(&mut (0..n).map(|i| i * n + j)));
    }
    lines.push(line(&mut (0..n).map(|i| i * n + i)));
    lines.push(line(&mut (0..n).map(|i| i * n + n - 1 - i)));
    for l in lines {
        let eq: Vec<i64> = l.iter().zip(&first_row).map(|(a, b)| a - b).collect();
        rows.push(eq.iter().map(|x| -x).collect());
        rows.push(eq);
    }
    ConeInput::from_i64(&rows, InputKind::Ineqs)
}

/// Cone over the `n`-th roots of unity: `(ζ^k, 1)` for `k = 0..n`, with
/// `ζ^k` written in the power basis `1, ζ, ..., ζ^{φ(n)-1}` of the
/// cyclotomic integers.
pub fn cyclo(n: usize) -> ConeInput {
    let phi = Cyclotomics::new().get(n.max(1));
    let deg = poly::degree(&phi).unwrap_or(0);
    let mut rows = Vec::with_capacity(n);
    for k in 0..n {
        // t^k mod Φ_n
        let mut p = vec![BigInt::from(0); k + 1];
        p[k] = BigInt::from(1);
        for top in (deg..=k).rev() {
            let c = std::mem::take(&mut p[top]);
            if c == BigInt::from(0) {
                continue;
            }
            // Φ_n is monic of degree `deg`.
            for (j, a) in phi.iter().enumerate().take(deg) {
                p[top - deg + j] -= &c * a;
            }
        }
        p.resize(deg, BigInt::from(0));
        p.push(BigInt::from(1));
        rows.push(p);
    }
    ConeInput::generators(rows, deg + 1)
}
