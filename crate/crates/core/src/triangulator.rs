//! Lexicographic triangulation through pyramid decomposition.
//!
//! [`Triangulator::build_cone`] processes the generators of a cone one by
//! one. Depending on two sticky flags each step either extends the local
//! triangulation directly, spawns recursive pyramids (which also deliver
//! support hyperplanes), or stores nonrecursive pyramids for later
//! evaluation level by level. All strategies produce the same set of
//! simplicial cones.

use std::collections::HashSet;
use std::sync::Mutex;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;

use crate::basis::global_reduce;
use crate::eval::{evaluate_batch, Collector, EvalContext, SimplicialCone};
use crate::geometry::{
    find_new_hyp, initial_simplex_hyperplanes, partition, pyramid_supported_hyperplanes, zero_set, Hyperplane,
    Partition,
};
use crate::linalg::{IncrementalBasis, LinalgError};
use crate::scalar::Scalar;

/// Thresholds and switches of the mixed strategy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Strategy {
    /// Recursive pyramids once `|neg| * |pos|` exceeds this.
    pub supp_bound: usize,
    /// Stored pyramids once `|neg| * |triangulation|` exceeds this.
    pub tri_bound: usize,
    /// Stored pyramids once the local triangulation exceeds this size.
    pub memory_bound: usize,
    /// Simplices are evaluated once this many have been collected.
    pub buffer_size: usize,
    /// Pyramids of a level are evaluated early once this many are stored.
    pub level_capacity: usize,
    /// Skip height 1 pyramids and simplices (Hilbert basis and degree 1
    /// points only).
    pub partial: bool,
    /// Cones on levels below this use pyramids from the start in partial mode.
    pub partial_levels: usize,
    pub recursion: bool,
    pub parallel: bool,
}

impl Default for Strategy {
    fn default() -> Self {
        Strategy {
            supp_bound: 1_000_000,
            tri_bound: 100_000,
            memory_bound: 500_000,
            buffer_size: 500_000,
            level_capacity: 200_000,
            partial: false,
            partial_levels: 1,
            recursion: true,
            parallel: true,
        }
    }
}

impl Strategy {
    /// Plain lexicographic triangulation, no pyramids at all.
    pub fn pure_lex() -> Self {
        Strategy {
            supp_bound: usize::MAX,
            tri_bound: usize::MAX,
            memory_bound: usize::MAX,
            ..Strategy::default()
        }
    }

    /// Pyramids at every step that sees a visible facet.
    pub fn pure_pyramid() -> Self {
        Strategy {
            supp_bound: 0,
            tri_bound: 0,
            ..Strategy::default()
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TriStats {
    /// Stored (nonrecursive) pyramids per level; index 0 is unused.
    pub pyramids_per_level: Vec<u64>,
    pub recursive_pyramids: u64,
    pub discarded_height_one: u64,
    pub skipped_height_one_simplices: u64,
}

/// Collects simplices and evaluates them in batches.
pub struct SimplexSink<'a, T> {
    ctx: &'a EvalContext<T>,
    capacity: usize,
    buffer: Mutex<Vec<SimplicialCone<T>>>,
    collector: Mutex<Collector<T>>,
    reduction: Option<Reduction<T>>,
}

/// Inequalities valid on the cone, used to shrink the Hilbert basis
/// candidates while the triangulation is still running.
struct Reduction<T> {
    forms: Vec<Vec<T>>,
    threshold: Mutex<usize>,
}

const REDUCTION_START: usize = 100_000;

const EVAL_CHUNK: usize = 512;

impl<'a, T: Scalar> SimplexSink<'a, T> {
    pub fn new(ctx: &'a EvalContext<T>, capacity: usize) -> Self {
        SimplexSink {
            ctx,
            capacity: capacity.max(1),
            buffer: Mutex::new(Vec::new()),
            collector: Mutex::new(Collector::default()),
            reduction: None,
        }
    }

    /// Enables intermediate reduction of the candidates by `forms`, which
    /// must cut out the cone (redundant forms are fine).
    pub fn with_reduction(mut self, forms: Vec<Vec<T>>) -> Self {
        self.reduction = Some(Reduction {
            forms,
            threshold: Mutex::new(REDUCTION_START),
        });
        self
    }

    pub fn push(&self, simplices: Vec<SimplicialCone<T>>, parallel: bool) -> Result<(), LinalgError> {
        if simplices.is_empty() {
            return Ok(());
        }
        let full = {
            let mut b = self.buffer.lock().expect("simplex buffer poisoned");
            b.extend(simplices);
            (b.len() >= self.capacity).then(|| std::mem::take(&mut *b))
        };
        match full {
            Some(batch) => self.evaluate(batch, parallel),
            None => Ok(()),
        }
    }

    fn evaluate(&self, batch: Vec<SimplicialCone<T>>, parallel: bool) -> Result<(), LinalgError> {
        let col = if parallel && batch.len() > EVAL_CHUNK {
            batch
                .par_chunks(EVAL_CHUNK)
                .map(|c| evaluate_batch(self.ctx, c))
                .try_reduce(Collector::default, |mut a, b| {
                    a.merge(b);
                    Ok(a)
                })?
        } else {
            evaluate_batch(self.ctx, &batch)?
        };
        let mut c = self.collector.lock().expect("collector poisoned");
        c.merge(col);
        if let Some(red) = &self.reduction {
            let mut threshold = red.threshold.lock().expect("threshold poisoned");
            if c.candidates.len() > *threshold {
                // Irreducible elements never get dropped, so the final
                // reduction still sees every Hilbert basis element.
                let cands = std::mem::take(&mut c.candidates);
                let kept = global_reduce(cands, &red.forms, None, parallel)?;
                *threshold = (2 * kept.len()).max(REDUCTION_START);
                c.candidates = kept.into_iter().collect();
            }
        }
        Ok(())
    }

    pub fn flush(&self, parallel: bool) -> Result<(), LinalgError> {
        let batch = std::mem::take(&mut *self.buffer.lock().expect("simplex buffer poisoned"));
        if batch.is_empty() {
            return Ok(());
        }
        self.evaluate(batch, parallel)
    }

    fn over_capacity(&self) -> bool {
        self.buffer.lock().expect("simplex buffer poisoned").len() >= self.capacity
    }

    pub fn into_collector(self) -> Collector<T> {
        self.collector.into_inner().expect("collector poisoned")
    }
}

struct LocalSimplex<T> {
    /// Sorted local positions.
    key: Vec<usize>,
    det: Option<T>,
    height: T,
    /// Local position of the generator it was added with; `None` for the
    /// first simplex.
    added_with: Option<usize>,
    ship: bool,
}

/// Shared state of one triangulation run.
pub struct Triangulator<'a, T> {
    gens: &'a [Vec<T>],
    dim: usize,
    strategy: &'a Strategy,
    sink: Option<&'a SimplexSink<'a, T>>,
    pyramids: Mutex<Vec<Vec<Vec<usize>>>>,
    stats: Mutex<TriStats>,
}

impl<'a, T: Scalar> Triangulator<'a, T> {
    pub fn new(gens: &'a [Vec<T>], dim: usize, strategy: &'a Strategy, sink: Option<&'a SimplexSink<'a, T>>) -> Self {
        Triangulator {
            gens,
            dim,
            strategy,
            sink,
            pyramids: Mutex::new(Vec::new()),
            stats: Mutex::new(TriStats::default()),
        }
    }

    pub fn stats(&self) -> TriStats {
        self.stats.lock().expect("stats poisoned").clone()
    }

    /// Builds the cone over all generators: support hyperplanes, and the
    /// full triangulation streamed into the sink if `triangulate` is set.
    pub fn run(&self, triangulate: bool) -> Result<Vec<Vec<T>>, LinalgError> {
        let key: Vec<usize> = (0..self.gens.len()).collect();
        let par = self.strategy.parallel;
        let forms = self.build_cone(&key, self.strategy.recursion, triangulate, 0, par)?;
        if triangulate {
            self.evaluate_pyrs(1)?;
            if let Some(s) = self.sink {
                s.flush(par)?;
            }
        }
        Ok(forms)
    }

    /// Indices of the first `dim` linearly independent generators of `key`
    /// in key order, followed by the remaining ones in key order.
    fn reorder(&self, key: &[usize]) -> Result<Vec<usize>, LinalgError> {
        let mut basis = IncrementalBasis::new();
        let mut first = Vec::with_capacity(self.dim);
        let mut rest = Vec::with_capacity(key.len());
        for &k in key {
            if first.len() < self.dim && basis.insert(&self.gens[k])? {
                first.push(k);
            } else {
                rest.push(k);
            }
        }
        if first.len() < self.dim {
            return Err(LinalgError::Singular);
        }
        first.extend(rest);
        Ok(first)
    }

    /// Processes the cone spanned by the generators in `key` and returns its
    /// support forms. Pyramids created here on the nonrecursive branch are
    /// stored at `level + 1`.
    pub fn build_cone(
        &self,
        key: &[usize],
        recursion: bool,
        triangulate: bool,
        level: usize,
        parallel: bool,
    ) -> Result<Vec<Vec<T>>, LinalgError> {
        let d = self.dim;
        let order = self.reorder(key)?;
        let n = order.len();
        let lg: Vec<&[T]> = order.iter().map(|&k| self.gens[k].as_slice()).collect();
        let first: Vec<Vec<T>> = lg[..d].iter().map(|x| x.to_vec()).collect();
        let (forms, det) = initial_simplex_hyperplanes(&first)?;
        let mut hyps: Vec<Hyperplane<T>> = forms
            .into_iter()
            .enumerate()
            .map(|(i, form)| {
                let mut zeros = FixedBitSet::with_capacity(n);
                zeros.insert_range(..d);
                zeros.set(i, false);
                Hyperplane { form, zeros }
            })
            .collect();

        let st = self.strategy;
        let partial_start = st.partial && triangulate && level < st.partial_levels;
        let mut make_supp = false;
        let mut make_tri = partial_start;
        let mut tri: Vec<LocalSimplex<T>> = Vec::new();
        if triangulate {
            tri.push(LocalSimplex {
                key: (0..d).collect(),
                det: Some(det),
                height: T::zero(),
                added_with: None,
                ship: true,
            });
            if make_tri {
                self.ship(&mut tri, &order, parallel)?;
            }
        }

        for i in d..n {
            let refs: Vec<&[T]> = hyps.iter().map(|h| h.form.as_slice()).collect();
            let (part, values) = partition(&refs, lg[i])?;
            drop(refs);
            if part.neg.is_empty() {
                for &z in &part.zero {
                    hyps[z].zeros.insert(i);
                }
                continue;
            }
            if recursion && !make_supp && part.neg.len().saturating_mul(part.pos.len()) > st.supp_bound {
                make_supp = true;
            }
            if make_supp && recursion {
                if triangulate {
                    self.ship(&mut tri, &order, parallel)?;
                }
                let new = self.process_pyrs_rec(&hyps, &part, &values, &order, &lg, i, triangulate, level, parallel)?;
                hyps = assemble(hyps, &part, i, new);
                continue;
            }
            if triangulate {
                if !make_tri && (part.neg.len().saturating_mul(tri.len()) > st.tri_bound || tri.len() > st.memory_bound)
                {
                    make_tri = true;
                    self.ship(&mut tri, &order, parallel)?;
                }
                if make_tri {
                    self.process_pyrs(&hyps, &part, &values, &order, i, level)?;
                } else {
                    extend_tri(&mut tri, &hyps, &part, &values, i, d, st.partial)?;
                }
            }
            if recursion || i + 1 < n {
                let new = find_new_hyp(&hyps, &lg, i, &values, &part, d, parallel)?;
                hyps = assemble(hyps, &part, i, new);
            }
        }
        if triangulate {
            self.ship(&mut tri, &order, parallel)?;
        }
        Ok(hyps.into_iter().map(|h| h.form).collect())
    }

    /// Sends the local triangulation to the sink and clears it.
    fn ship(&self, tri: &mut Vec<LocalSimplex<T>>, order: &[usize], parallel: bool) -> Result<(), LinalgError> {
        if tri.is_empty() {
            return Ok(());
        }
        let mut skipped = 0;
        let out: Vec<SimplicialCone<T>> = tri
            .drain(..)
            .filter(|s| {
                skipped += u64::from(!s.ship);
                s.ship
            })
            .map(|s| {
                let mut key: Vec<usize> = s.key.iter().map(|&p| order[p]).collect();
                key.sort_unstable();
                SimplicialCone {
                    key,
                    det: s.det,
                    height: s.height,
                }
            })
            .collect();
        if skipped > 0 {
            self.stats.lock().expect("stats poisoned").skipped_height_one_simplices += skipped;
        }
        match self.sink {
            Some(sink) => sink.push(out, parallel),
            None => Ok(()),
        }
    }

    fn pyramid_key(&self, h: &Hyperplane<T>, order: &[usize], i: usize) -> Vec<usize> {
        let mut key: Vec<usize> = h.zeros.ones().take_while(|&p| p < i).map(|p| order[p]).collect();
        key.sort_unstable();
        key.push(order[i]);
        key
    }

    #[allow(clippy::too_many_arguments)]
    fn process_pyrs_rec(
        &self,
        hyps: &[Hyperplane<T>],
        part: &Partition,
        values: &[T],
        order: &[usize],
        lg: &[&[T]],
        i: usize,
        triangulate: bool,
        level: usize,
        parallel: bool,
    ) -> Result<Vec<Hyperplane<T>>, LinalgError> {
        let n = order.len();
        let mut seen: HashSet<Vec<T>> = HashSet::new();
        let mut new = Vec::new();
        for &h in &part.neg {
            let key = self.pyramid_key(&hyps[h], order, i);
            let height_one = values[h].try_abs()?.is_one();
            let tri = triangulate && !(self.strategy.partial && height_one);
            let forms = self.build_cone(&key, true, tri, level, parallel)?;
            let in_pyr: Vec<bool> = (0..i).map(|p| hyps[h].zeros.contains(p)).collect();
            for f in pyramid_supported_hyperplanes(&lg[..i], &in_pyr, forms)? {
                if seen.insert(f.clone()) {
                    let zeros = zero_set(&f, &lg[..=i], n)?;
                    new.push(Hyperplane { form: f, zeros });
                }
            }
        }
        self.stats.lock().expect("stats poisoned").recursive_pyramids += part.neg.len() as u64;
        Ok(new)
    }

    fn process_pyrs(
        &self,
        hyps: &[Hyperplane<T>],
        part: &Partition,
        values: &[T],
        order: &[usize],
        i: usize,
        level: usize,
    ) -> Result<(), LinalgError> {
        let mut stored = Vec::new();
        let mut discarded = 0;
        for &h in &part.neg {
            if self.strategy.partial && values[h].try_abs()?.is_one() {
                discarded += 1;
                continue;
            }
            stored.push(self.pyramid_key(&hyps[h], order, i));
        }
        {
            let mut st = self.stats.lock().expect("stats poisoned");
            st.discarded_height_one += discarded;
            if st.pyramids_per_level.len() <= level + 1 {
                st.pyramids_per_level.resize(level + 2, 0);
            }
            st.pyramids_per_level[level + 1] += stored.len() as u64;
        }
        let mut lists = self.pyramids.lock().expect("pyramid lists poisoned");
        if lists.len() <= level + 1 {
            lists.resize_with(level + 2, Vec::new);
        }
        lists[level + 1].extend(stored);
        Ok(())
    }

    fn stored_at(&self, level: usize) -> usize {
        self.pyramids
            .lock()
            .expect("pyramid lists poisoned")
            .get(level)
            .map_or(0, Vec::len)
    }

    /// Evaluates the stored pyramids of `level`, descending to deeper levels
    /// when their lists fill up and at the end.
    pub fn evaluate_pyrs(&self, level: usize) -> Result<(), LinalgError> {
        let parallel = self.strategy.parallel;
        loop {
            let list = {
                let mut lists = self.pyramids.lock().expect("pyramid lists poisoned");
                match lists.get_mut(level) {
                    Some(l) => std::mem::take(l),
                    None => Vec::new(),
                }
            };
            if list.is_empty() {
                break;
            }
            let chunk = self.strategy.level_capacity.clamp(1, 4096);
            for part in list.chunks(chunk) {
                if parallel {
                    part.par_iter()
                        .try_for_each(|k| self.build_cone(k, false, true, level, false).map(|_| ()))?;
                } else {
                    for k in part {
                        self.build_cone(k, false, true, level, false)?;
                    }
                }
                if let Some(s) = self.sink {
                    if s.over_capacity() {
                        s.flush(parallel)?;
                    }
                }
                if self.stored_at(level + 1) > self.strategy.level_capacity {
                    self.evaluate_pyrs(level + 1)?;
                }
            }
        }
        if self.stored_at(level + 1) > 0 {
            self.evaluate_pyrs(level + 1)?;
        }
        Ok(())
    }
}

/// New hyperplane list after adding generator `i`: those through `x_i`
/// (gaining `i` in their zero sets), the positive ones, and the new ones.
fn assemble<T: Scalar>(
    hyps: Vec<Hyperplane<T>>,
    part: &Partition,
    i: usize,
    new: Vec<Hyperplane<T>>,
) -> Vec<Hyperplane<T>> {
    let mut keep = vec![0u8; hyps.len()];
    for &z in &part.zero {
        keep[z] = 1;
    }
    for &p in &part.pos {
        keep[p] = 2;
    }
    let mut out = Vec::with_capacity(part.zero.len() + part.pos.len() + new.len());
    for (mut h, k) in hyps.into_iter().zip(keep) {
        match k {
            1 => {
                h.zeros.insert(i);
                out.push(h);
            }
            2 => out.push(h),
            _ => {}
        }
    }
    out.extend(new);
    out
}

/// Cones the visible part of the local triangulation to generator `i`.
fn extend_tri<T: Scalar>(
    tri: &mut Vec<LocalSimplex<T>>,
    hyps: &[Hyperplane<T>],
    part: &Partition,
    values: &[T],
    i: usize,
    d: usize,
    partial: bool,
) -> Result<(), LinalgError> {
    let old = tri.len();
    for &h in &part.neg {
        let zh = &hyps[h].zeros;
        let height = values[h].try_abs()?;
        let ship = !(partial && height.is_one());
        if zh.count_ones(..i) + 1 == d {
            let mut key: Vec<usize> = zh.ones().take_while(|&p| p < i).collect();
            key.push(i);
            tri.push(LocalSimplex {
                key,
                det: None,
                height,
                added_with: Some(i),
                ship,
            });
            continue;
        }
        for s in 0..old {
            let sigma = &tri[s];
            if let Some(a) = sigma.added_with {
                if !zh.contains(a) {
                    continue;
                }
            }
            let on = sigma.key.iter().filter(|&&p| zh.contains(p)).count();
            if on + 1 != d {
                continue;
            }
            let mut key: Vec<usize> = sigma.key.iter().copied().filter(|&p| zh.contains(p)).collect();
            key.push(i);
            let det = sigma.det.as_ref().filter(|x| x.is_one()).map(|_| height.clone());
            tri.push(LocalSimplex {
                key,
                det,
                height: height.clone(),
                added_with: Some(i),
                ship,
            });
        }
    }
    Ok(())
}
