//! Global reduction of Hilbert basis candidates.
//!
//! A candidate `x` is reducible iff `x - y` lies in the cone for some other
//! candidate `y`, which is tested on the values of the support forms:
//! `λ(y) <= λ(x)` for every support form `λ`. Candidates are processed by
//! increasing degree; an element of degree `k` can only be reduced by
//! irreducibles of smaller degree.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::scalar::{Checked, Scalar};

/// A candidate with its support form values.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Entry<T> {
    values: Vec<T>,
    vector: Vec<T>,
}

fn values_of<T: Scalar>(x: &[T], forms: &[Vec<T>]) -> Checked<Vec<T>> {
    forms
        .iter()
        .map(|f| {
            f.iter()
                .zip(x)
                .try_fold(T::zero(), |acc, (a, b)| acc.try_add(&a.try_mul(b)?))
        })
        .collect()
}

fn dominated<T: Scalar>(y: &[T], x: &[T]) -> bool {
    y.iter().zip(x).all(|(a, b)| a <= b)
}

/// Whether `x` is reducible by some element of `pool` other than itself.
pub fn is_reducible<T: Scalar>(x: &[T], pool: &[Vec<T>], forms: &[Vec<T>]) -> Checked<bool> {
    let vx = values_of(x, forms)?;
    for y in pool {
        if y.as_slice() == x || y.iter().all(Scalar::is_zero) {
            continue;
        }
        if dominated(&values_of(y, forms)?, &vx) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// The minimal generating set among `candidates`, sorted lexicographically.
/// Candidates must lie in the cone. The degree is given by `grading` or,
/// without one, by the sum of the support form values. Zero vectors and
/// duplicates are dropped.
pub fn global_reduce<T: Scalar>(
    candidates: impl IntoIterator<Item = Vec<T>>,
    forms: &[Vec<T>],
    grading: Option<&[T]>,
    parallel: bool,
) -> Checked<Vec<Vec<T>>> {
    let mut buckets: BTreeMap<T, Vec<Entry<T>>> = BTreeMap::new();
    for x in candidates {
        if x.iter().all(Scalar::is_zero) {
            continue;
        }
        let values = values_of(&x, forms)?;
        let deg = match grading {
            Some(g) => values_of(&x, std::slice::from_ref(&g.to_vec()))?
                .pop()
                .unwrap_or_else(T::zero),
            None => values.iter().try_fold(T::zero(), |a, b| a.try_add(b))?,
        };
        buckets.entry(deg).or_default().push(Entry { values, vector: x });
    }
    let mut irreducible: Vec<Entry<T>> = Vec::new();
    for (_, mut bucket) in buckets {
        bucket.sort_unstable();
        bucket.dedup();
        let frozen = &irreducible;
        let keep = |e: &Entry<T>| !frozen.iter().any(|y| dominated(&y.values, &e.values));
        let kept: Vec<Entry<T>> = if parallel && bucket.len() > 64 {
            bucket.into_par_iter().filter(keep).collect()
        } else {
            bucket.into_iter().filter(keep).collect()
        };
        irreducible.extend(kept);
    }
    let mut out: Vec<Vec<T>> = irreducible.into_iter().map(|e| e.vector).collect();
    out.sort_unstable();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reducibility() {
        let forms = vec![vec![5i64, -1], vec![0, 1]];
        let pool: Vec<Vec<i64>> = (0..=5).map(|k| vec![1, k]).collect();
        assert!(is_reducible(&[2, 3], &pool, &forms).unwrap());
        assert!(!is_reducible(&[1, 3], &pool, &forms).unwrap());
        let orthant = vec![vec![1i64, 0], vec![0, 1]];
        assert!(is_reducible(&[2, 0], &[vec![1, 0]], &orthant).unwrap());
        assert!(!is_reducible(&[1, 0], &[vec![0, 1]], &orthant).unwrap());
    }

    #[test]
    fn reduce_examples() {
        let forms = vec![vec![5i64, -1], vec![0, 1]];
        let mut cands: Vec<Vec<i64>> = (0..=5).map(|k| vec![1, k]).collect();
        cands.extend([vec![2, 3], vec![2, 10], vec![0, 0], vec![1, 2]]);
        let hb = global_reduce(cands, &forms, Some(&[1, 0]), false).unwrap();
        assert_eq!(hb, (0..=5).map(|k| vec![1, k]).collect::<Vec<_>>());

        let orthant = vec![vec![1i64, 0, 0], vec![0, 1, 0], vec![0, 0, 1]];
        let cands = vec![
            vec![1i64, 1, 0],
            vec![0, 0, 1],
            vec![1, 0, 0],
            vec![0, 1, 0],
            vec![2, 0, 1],
        ];
        let hb = global_reduce(cands, &orthant, None, true).unwrap();
        assert_eq!(hb, vec![vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0]]);
    }
}
