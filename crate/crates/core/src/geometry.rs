//! Support hyperplanes, visibility, extreme rays and gradings.

use fixedbitset::FixedBitSet;
use rayon::prelude::*;

use crate::linalg::{primitivize, primitivize_in_place, solve_scaled, IncrementalBasis, LinalgError};
use crate::scalar::{content, Checked, Scalar};

/// A support hyperplane given by its primitive form, together with the set of
/// (local) generator positions lying on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hyperplane<T> {
    pub form: Vec<T>,
    pub zeros: FixedBitSet,
}

/// Result of classifying hyperplanes against a generator.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Partition {
    pub neg: Vec<usize>,
    pub zero: Vec<usize>,
    pub pos: Vec<usize>,
}

/// Forms of the simplicial cone spanned by the rows of `g`, one per
/// generator (`λ_i` is positive on row `i` and vanishes on the others),
/// together with `|det g|`.
pub fn initial_simplex_hyperplanes<T: Scalar>(g: &[Vec<T>]) -> Result<(Vec<Vec<T>>, T), LinalgError> {
    let d = g.len();
    let unit: Vec<Vec<T>> = (0..d)
        .map(|i| {
            let mut e = vec![T::zero(); d];
            e[i] = T::one();
            e
        })
        .collect();
    let (cols, det) = solve_scaled(g, &unit)?;
    let forms = cols.iter().map(|c| primitivize(c)).collect::<Result<Vec<_>, _>>()?;
    Ok((forms, det))
}

/// Classifies hyperplanes by the sign of their value at `x`. Returns the
/// partition and the values.
pub fn partition<T: Scalar>(forms: &[&[T]], x: &[T]) -> Checked<(Partition, Vec<T>)> {
    let mut p = Partition::default();
    let mut values = Vec::with_capacity(forms.len());
    for (k, f) in forms.iter().enumerate() {
        let v = T::dot(f, x)?;
        match v.sign() {
            std::cmp::Ordering::Less => p.neg.push(k),
            std::cmp::Ordering::Equal => p.zero.push(k),
            std::cmp::Ordering::Greater => p.pos.push(k),
        }
        values.push(v);
    }
    Ok((p, values))
}

/// Lattice height of `x` over the hyperplane of `form`.
pub fn height<T: Scalar>(form: &[T], x: &[T]) -> Checked<T> {
    T::dot(form, x)?.try_abs()
}

/// Rank of the vectors selected by `set`, stopping once `cap` is reached.
fn rank_of_selection<T: Scalar>(vectors: &[&[T]], set: &FixedBitSet, cap: usize) -> Checked<usize> {
    let mut basis = IncrementalBasis::new();
    for j in set.ones() {
        basis.insert(vectors[j])?;
        if basis.rank() >= cap {
            break;
        }
    }
    Ok(basis.rank())
}

/// Fourier–Motzkin step. Given the hyperplanes of `C_{i-1}` (zero sets over
/// local positions `0..i`), the values `λ(x_i)` and the partition, returns
/// the new hyperplanes through `x_i`. Their zero sets include position `i`.
pub fn find_new_hyp<T: Scalar>(
    hyps: &[Hyperplane<T>],
    gens: &[&[T]],
    i: usize,
    values: &[T],
    part: &Partition,
    dim: usize,
    parallel: bool,
) -> Checked<Vec<Hyperplane<T>>> {
    if part.neg.is_empty() || part.pos.is_empty() {
        return Ok(Vec::new());
    }
    let counts: Vec<usize> = hyps.iter().map(|h| h.zeros.count_ones(..i)).collect();
    // The combinatorial test scans all hyperplanes; the rank test works on the
    // common generators. Pick the cheaper one.
    let use_rank = hyps.len() > dim * dim * 2;
    let work = |&n: &usize| -> Checked<Vec<Hyperplane<T>>> {
        let mut out = Vec::new();
        let hn = &hyps[n];
        let an = values[n].try_neg()?;
        for &p in &part.pos {
            let hp = &hyps[p];
            let common = hn.zeros.intersection_count(&hp.zeros);
            if common + 2 < dim {
                continue;
            }
            let adjacent = if counts[n] + 1 == dim || counts[p] + 1 == dim {
                common + 2 == dim
            } else {
                let mut s = hn.zeros.clone();
                s.intersect_with(&hp.zeros);
                if use_rank {
                    rank_of_selection(gens, &s, dim - 2)? + 2 == dim
                } else {
                    !hyps
                        .iter()
                        .enumerate()
                        .any(|(k, h)| k != n && k != p && counts[k] >= common && s.is_subset(&h.zeros))
                }
            };
            if !adjacent {
                continue;
            }
            let bp = &values[p];
            let mut form: Vec<T> = Vec::with_capacity(hn.form.len());
            for (a, b) in hn.form.iter().zip(&hp.form) {
                form.push(a.try_mul_add(bp, &an, b)?);
            }
            primitivize_in_place(&mut form)?;
            let mut zeros = hn.zeros.clone();
            zeros.intersect_with(&hp.zeros);
            zeros.insert(i);
            out.push(Hyperplane { form, zeros });
        }
        Ok(out)
    };
    let chunks: Vec<Vec<Hyperplane<T>>> = if parallel && part.neg.len() > 1 {
        part.neg.par_iter().map(work).collect::<Checked<_>>()?
    } else {
        part.neg.iter().map(work).collect::<Checked<_>>()?
    };
    Ok(chunks.into_iter().flatten().collect())
}

/// Filters the support hyperplanes of a recursive pyramid to those that are
/// support hyperplanes of `C_i`: nonnegative on all earlier generators of
/// the parent and positive on those outside the pyramid.
///
/// `earlier` are the parent generators `x_1..x_{i-1}` and `in_pyramid` flags
/// which of them belong to the pyramid.
pub fn pyramid_supported_hyperplanes<T: Scalar>(
    earlier: &[&[T]],
    in_pyramid: &[bool],
    pyramid_hyps: Vec<Vec<T>>,
) -> Checked<Vec<Vec<T>>> {
    let mut out = Vec::new();
    'outer: for form in pyramid_hyps {
        for (x, &inside) in earlier.iter().zip(in_pyramid) {
            let v = T::dot(&form, x)?;
            if v.is_negative() || (v.is_zero() && !inside) {
                continue 'outer;
            }
        }
        out.push(form);
    }
    Ok(out)
}

/// Zero set of `form` over the given generators.
pub fn zero_set<T: Scalar>(form: &[T], gens: &[&[T]], capacity: usize) -> Checked<FixedBitSet> {
    let mut z = FixedBitSet::with_capacity(capacity);
    for (j, x) in gens.iter().enumerate() {
        if T::dot(form, x)?.is_zero() {
            z.insert(j);
        }
    }
    Ok(z)
}

/// Flags the generators spanning extreme rays: those on which the vanishing
/// hyperplanes have rank `dim - 1`.
pub fn extreme_rays<T: Scalar>(gens: &[Vec<T>], forms: &[Vec<T>], dim: usize) -> Checked<Vec<bool>> {
    gens.iter()
        .map(|x| {
            let mut basis = IncrementalBasis::new();
            for f in forms {
                if T::dot(f, x)?.is_zero() {
                    basis.insert(f)?;
                    if basis.rank() + 1 >= dim {
                        break;
                    }
                }
            }
            Ok(basis.rank() + 1 == dim)
        })
        .collect()
}

/// A cone given by its support forms is pointed iff the forms span the dual.
pub fn detect_pointed<T: Scalar>(forms: &[Vec<T>], dim: usize) -> Checked<bool> {
    Ok(crate::linalg::rank_of_rows(forms.iter().map(Vec::as_slice))? == dim)
}

/// Primitive integral form taking one common positive value on all the
/// given (primitive) extreme generators, if there is one.
pub fn implicit_grading<T: Scalar>(extreme: &[Vec<T>], dim: usize) -> Checked<Option<Vec<T>>> {
    let mut basis = IncrementalBasis::new();
    let mut rows = Vec::new();
    for x in extreme {
        if basis.insert(x)? {
            rows.push(x.clone());
            if rows.len() == dim {
                break;
            }
        }
    }
    if rows.len() < dim {
        return Ok(None);
    }
    let ones = vec![T::one(); dim];
    let (sol, _) = match solve_scaled(&rows, &[ones]) {
        Ok(s) => s,
        Err(LinalgError::Overflow(o)) => return Err(o),
        Err(_) => return Ok(None),
    };
    let mut form = sol.into_iter().next().unwrap_or_default();
    if content(&form)?.is_zero() {
        return Ok(None);
    }
    primitivize_in_place(&mut form)?;
    let value = T::dot(&form, &extreme[0])?;
    if !value.is_positive() {
        return Ok(None);
    }
    for x in extreme {
        if T::dot(&form, x)? != value {
            return Ok(None);
        }
    }
    Ok(Some(form))
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DualizeError {
    #[error("the inequalities define a cone containing a line")]
    NotPointed,
    #[error("the inequalities define the zero cone")]
    ZeroCone,
    #[error(transparent)]
    Overflow(#[from] crate::scalar::Overflow),
}

/// Extreme rays of `{x : a·x >= 0 for all rows a}` by the double description
/// method. The cone must be pointed.
pub fn dualize<T: Scalar>(ineqs: &[Vec<T>], dim: usize) -> Result<Vec<Vec<T>>, DualizeError> {
    let mut lineality: Vec<Vec<T>> = (0..dim)
        .map(|i| {
            let mut e = vec![T::zero(); dim];
            e[i] = T::one();
            e
        })
        .collect();
    let m = ineqs.len();
    let mut rays: Vec<(Vec<T>, FixedBitSet)> = Vec::new();
    for (k, a) in ineqs.iter().enumerate() {
        let lin_vals: Vec<T> = lineality.iter().map(|l| T::dot(a, l)).collect::<Checked<_>>()?;
        if let Some(p) = lin_vals.iter().position(|v| !v.is_zero()) {
            let mut l0 = lineality.remove(p);
            let mut v0 = lin_vals[p].clone();
            if v0.is_negative() {
                for x in l0.iter_mut() {
                    *x = x.try_neg()?;
                }
                v0 = v0.try_neg()?;
            }
            let project = |x: &mut Vec<T>, vx: &T| -> Checked<()> {
                if vx.is_zero() {
                    return Ok(());
                }
                let nvx = vx.try_neg()?;
                for (y, z) in x.iter_mut().zip(&l0) {
                    *y = y.try_mul_add(&v0, &nvx, z)?;
                }
                primitivize_in_place(x)
            };
            let mut rest_vals = lin_vals;
            rest_vals.remove(p);
            for (l, v) in lineality.iter_mut().zip(&rest_vals) {
                project(l, v)?;
            }
            for (r, z) in rays.iter_mut() {
                let v = T::dot(a, r)?;
                project(r, &v)?;
                z.insert(k);
            }
            let mut z0 = FixedBitSet::with_capacity(m);
            z0.insert_range(..k);
            rays.push((l0, z0));
            continue;
        }
        let vals: Vec<T> = rays.iter().map(|(r, _)| T::dot(a, r)).collect::<Checked<_>>()?;
        let pos: Vec<usize> = (0..rays.len()).filter(|&j| vals[j].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&j| vals[j].is_negative()).collect();
        if neg.is_empty() {
            for (j, (_, z)) in rays.iter_mut().enumerate() {
                if vals[j].is_zero() {
                    z.insert(k);
                }
            }
            continue;
        }
        let pointed_dim = dim - lineality.len();
        let mut new_rays = Vec::new();
        for &n in &neg {
            for &p in &pos {
                let s_count = rays[n].1.intersection_count(&rays[p].1);
                if s_count + 2 < pointed_dim {
                    continue;
                }
                let mut s = rays[n].1.clone();
                s.intersect_with(&rays[p].1);
                let adjacent = !rays
                    .iter()
                    .enumerate()
                    .any(|(j, (_, z))| j != n && j != p && s.is_subset(z));
                if !adjacent {
                    continue;
                }
                let vn = vals[n].try_neg()?;
                let mut r: Vec<T> = Vec::with_capacity(dim);
                for (x, y) in rays[n].0.iter().zip(&rays[p].0) {
                    r.push(x.try_mul_add(&vals[p], &vn, y)?);
                }
                primitivize_in_place(&mut r)?;
                s.insert(k);
                new_rays.push((r, s));
            }
        }
        let mut kept = Vec::with_capacity(rays.len() - neg.len() + new_rays.len());
        for (j, (r, mut z)) in rays.into_iter().enumerate() {
            if vals[j].is_negative() {
                continue;
            }
            if vals[j].is_zero() {
                z.insert(k);
            }
            kept.push((r, z));
        }
        kept.extend(new_rays);
        rays = kept;
    }
    if !lineality.is_empty() {
        return Err(DualizeError::NotPointed);
    }
    if rays.is_empty() {
        return Err(DualizeError::ZeroCone);
    }
    Ok(rays.into_iter().map(|(r, _)| r).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[i64]) -> Vec<i64> {
        x.to_vec()
    }

    #[test]
    fn initial_simplex_examples() {
        let id: Vec<Vec<i64>> = vec![v(&[1, 0, 0]), v(&[0, 1, 0]), v(&[0, 0, 1])];
        assert_eq!(initial_simplex_hyperplanes(&id).unwrap(), (id.clone(), 1));
        let (f, det) = initial_simplex_hyperplanes(&[v(&[1, 0]), v(&[1, 2])]).unwrap();
        assert_eq!(f, vec![v(&[2, -1]), v(&[0, 1])]);
        assert_eq!(det, 2);
        let (f, _) = initial_simplex_hyperplanes(&[v(&[2, 0]), v(&[0, 3])]).unwrap();
        assert_eq!(f, vec![v(&[1, 0]), v(&[0, 1])]);
    }

    #[test]
    fn partition_and_height() {
        let (p, _) = partition(&[&[0i64, 1][..]], &[5, 0]).unwrap();
        assert_eq!(p.zero, vec![0]);
        let (p, _) = partition(&[&[1i64, 0][..]], &[-2, 1]).unwrap();
        assert_eq!(p.neg, vec![0]);
        let (p, _) = partition(&[&[1i64, 0][..], &[0, 1]], &[1, -1]).unwrap();
        assert_eq!((p.neg, p.zero, p.pos), (vec![1], vec![], vec![0]));
        assert_eq!(height(&[0i64, 0, 1], &[2, 5, 7]).unwrap(), 7);
        assert_eq!(height(&[2i64, -1], &[1, 5]).unwrap(), 3);
    }

    #[test]
    fn pyramid_filter() {
        // Parent generators (1,0), (0,1); pyramid over the facet x = 0 with
        // apex (-1, 1): key {(0,1), (-1,1)}.
        let earlier: Vec<&[i64]> = vec![&[1, 0], &[0, 1]];
        let hyps = vec![v(&[0, 1]), v(&[-1, 0]), v(&[1, 1])];
        let kept = pyramid_supported_hyperplanes(&earlier, &[false, true], hyps).unwrap();
        assert_eq!(kept, vec![v(&[1, 1])]);
    }

    #[test]
    fn extreme_and_pointed() {
        let gens = vec![v(&[1, 0]), v(&[0, 1]), v(&[1, 1])];
        let forms = vec![v(&[1, 0]), v(&[0, 1])];
        assert_eq!(extreme_rays(&gens, &forms, 2).unwrap(), vec![true, true, false]);
        assert!(detect_pointed(&forms, 2).unwrap());
        assert!(!detect_pointed(&[v(&[1, 0])], 2).unwrap());
    }

    #[test]
    fn grading_examples() {
        let e = vec![v(&[1, 0, 0]), v(&[0, 1, 0]), v(&[0, 0, 1])];
        assert_eq!(implicit_grading(&e, 3).unwrap(), Some(v(&[1, 1, 1])));
        assert_eq!(
            implicit_grading(&[v(&[1, 0]), v(&[1, 2])], 2).unwrap(),
            Some(v(&[1, 0]))
        );
        assert_eq!(
            implicit_grading(&[v(&[1, 0]), v(&[0, 1])], 2).unwrap(),
            Some(v(&[1, 1]))
        );
        assert_eq!(
            implicit_grading(&[v(&[1, 0]), v(&[0, 1]), v(&[1, 2])], 2).unwrap(),
            None
        );
    }

    #[test]
    fn dualize_square_cone() {
        // |x| <= z, |y| <= z
        let ineqs = vec![v(&[1, 0, 1]), v(&[-1, 0, 1]), v(&[0, 1, 1]), v(&[0, -1, 1])];
        let mut rays = dualize(&ineqs, 3).unwrap();
        rays.sort();
        assert_eq!(
            rays,
            vec![v(&[-1, -1, 1]), v(&[-1, 1, 1]), v(&[1, -1, 1]), v(&[1, 1, 1])]
        );
        assert_eq!(dualize(&[v(&[1, 0])], 2), Err(DualizeError::NotPointed));
    }

    #[test]
    fn dualize_with_equation() {
        // x + y - z = 0 as two inequalities, x, y >= 0
        let ineqs = vec![v(&[1, 1, -1]), v(&[-1, -1, 1]), v(&[1, 0, 0]), v(&[0, 1, 0])];
        let mut rays = dualize(&ineqs, 3).unwrap();
        rays.sort();
        assert_eq!(rays, vec![v(&[0, 1, 1]), v(&[1, 0, 1])]);
    }
}
