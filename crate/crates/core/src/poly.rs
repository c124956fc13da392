//! Dense integer polynomials in one variable, lowest degree first.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type Poly = Vec<BigInt>;

pub fn trim(p: &mut Poly) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

pub fn from_i64(c: &[i64]) -> Poly {
    let mut p: Poly = c.iter().map(|&x| BigInt::from(x)).collect();
    trim(&mut p);
    p
}

pub fn degree(p: &Poly) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

pub fn add_assign(a: &mut Poly, b: &Poly) {
    if a.len() < b.len() {
        a.resize(b.len(), BigInt::zero());
    }
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
    trim(a);
}

pub fn mul(a: &Poly, b: &Poly) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

/// `a * (1 - t^s)`.
pub fn mul_one_minus(a: &Poly, s: usize) -> Poly {
    let mut out = vec![BigInt::zero(); a.len() + s];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
        out[i + s] -= x;
    }
    trim(&mut out);
    out
}

/// `1 + t^g + t^{2g} + ... + t^{s-g}`, the quotient `(1 - t^s) / (1 - t^g)`
/// for `g | s`.
pub fn geometric(g: usize, s: usize) -> Poly {
    let mut out = vec![BigInt::zero(); s - g + 1];
    for k in (0..=s - g).step_by(g) {
        out[k] = BigInt::one();
    }
    out
}

/// Exact quotient `a / b`, or `None` if `b` does not divide `a` over the
/// integers.
pub fn div_exact(a: &Poly, b: &Poly) -> Option<Poly> {
    let db = degree(b)?;
    let lead = &b[db];
    let mut rem = a.clone();
    trim(&mut rem);
    if rem.is_empty() {
        return Some(Vec::new());
    }
    let da = rem.len() - 1;
    if da < db {
        return None;
    }
    let mut q = vec![BigInt::zero(); da - db + 1];
    for k in (0..=da - db).rev() {
        let c = &rem[k + db];
        if c.is_zero() {
            continue;
        }
        let (f, r) = c.div_rem(lead);
        if !r.is_zero() {
            return None;
        }
        for (j, y) in b.iter().enumerate().take(db + 1) {
            if !y.is_zero() {
                rem[k + j] -= &f * y;
            }
        }
        q[k] = f;
    }
    if rem.iter().any(|c| !c.is_zero()) {
        return None;
    }
    trim(&mut q);
    Some(q)
}

/// Cyclotomic polynomials with the sign convention `ζ_1 = 1 - t` and
/// `ζ_n = Φ_n` for `n > 1`, so that `1 - t^s` is the product of the `ζ_e`
/// over the divisors `e` of `s`.
#[derive(Default)]
pub struct Cyclotomics {
    memo: HashMap<usize, Poly>,
}

impl Cyclotomics {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&mut self, n: usize) -> Poly {
        if let Some(p) = self.memo.get(&n) {
            return p.clone();
        }
        let p = if n == 1 {
            from_i64(&[1, -1])
        } else {
            // Φ_n = (t^n - 1) / Π_{e | n, e < n} Φ_e
            let mut num = vec![BigInt::zero(); n + 1];
            num[0] = BigInt::from(-1);
            num[n] = BigInt::one();
            let mut q = num;
            for e in divisors(n) {
                if e == n {
                    continue;
                }
                let mut phi = self.get(e);
                if e == 1 {
                    phi = phi.iter().map(|c| -c).collect();
                }
                q = div_exact(&q, &phi).expect("cyclotomic division is exact");
            }
            q
        };
        self.memo.insert(n, p.clone());
        p
    }
}

pub fn divisors(n: usize) -> Vec<usize> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut k = 1;
    while k * k <= n {
        if n.is_multiple_of(k) {
            small.push(k);
            if k * k != n {
                large.push(n / k);
            }
        }
        k += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Evaluates at an integer point.
pub fn eval(p: &Poly, t: &BigInt) -> BigInt {
    p.iter().rev().fold(BigInt::zero(), |acc, c| acc * t + c)
}

/// Human readable form such as `1 - t + t^2`.
pub fn format(p: &Poly, var: &str) -> String {
    let mut out = String::new();
    for (k, c) in p.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let a = c.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mono = match k {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{k}"),
        };
        if k == 0 || !a.is_one() {
            out.push_str(&a.to_string());
        }
        out.push_str(&mono);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}
