//! Orchestration of a full run: input normalization, dimension reduction,
//! grading, the triangulation pass with simplex evaluation, series and
//! Hilbert basis post-processing, and the report.
//!
//! Everything is first computed with checked `i64` arithmetic. On overflow
//! the whole run is repeated with `BigInt`.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::basis::global_reduce;
use crate::error::Error;
use crate::eval::{EvalContext, Tasks};
use crate::geometry::{detect_pointed, dualize, extreme_rays, implicit_grading, DualizeError};
use crate::input::{ConeInput, InputKind};
use crate::linalg::{primitivize, rank_of_rows, saturation, IncrementalBasis, LatticeEmbedding, LinalgError};
use crate::matrix::Matrix;
use crate::poly::{Cyclotomics, Poly};
use crate::report::{EvalCounts, RunInfo, RunReport, SimplexRecord, TriangulationSummary};
use crate::scalar::{vec_from_bigint, vec_to_bigint, Overflow, Scalar};
use crate::series::{self, SeriesLimits};
use crate::triangulator::{SimplexSink, Strategy, Triangulator};

/// Requested outputs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TaskSet {
    pub supp: bool,
    pub tri: bool,
    pub volume: bool,
    pub series: bool,
    pub basis: bool,
    pub deg1: bool,
}

impl Default for TaskSet {
    fn default() -> Self {
        TaskSet {
            supp: true,
            tri: false,
            volume: false,
            series: false,
            basis: true,
            deg1: false,
        }
    }
}

impl TaskSet {
    pub fn none() -> Self {
        TaskSet {
            supp: false,
            tri: false,
            volume: false,
            series: false,
            basis: false,
            deg1: false,
        }
    }

    pub fn all() -> Self {
        TaskSet {
            supp: true,
            tri: true,
            volume: true,
            series: true,
            basis: true,
            deg1: true,
        }
    }

    pub fn is_empty(&self) -> bool {
        *self == TaskSet::none()
    }

    pub fn names(&self) -> Vec<String> {
        [
            (self.supp, "supp"),
            (self.tri, "tri"),
            (self.volume, "volume"),
            (self.series, "series"),
            (self.basis, "basis"),
            (self.deg1, "deg1"),
        ]
        .iter()
        .filter(|(on, _)| *on)
        .map(|(_, n)| n.to_string())
        .collect()
    }

    fn needs_grading(&self) -> bool {
        self.volume || self.series || self.deg1
    }

    fn needs_triangulation(&self) -> bool {
        self.tri || self.volume || self.series || self.basis || self.deg1
    }
}

#[derive(Clone, Debug, Default)]
pub struct Options {
    pub tasks: TaskSet,
    pub strategy: Strategy,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
    /// Recompute inherited determinants and cross-check all series forms.
    pub verify: bool,
    /// List the simplices of the triangulation in the report.
    pub keep_triangulation: bool,
    pub limits: SeriesLimits,
    /// Skip the machine integer attempt.
    pub force_bigint: bool,
}

impl Options {
    pub fn with_tasks(tasks: TaskSet) -> Self {
        Options {
            tasks,
            ..Options::default()
        }
    }
}

enum Stop {
    Overflow,
    Fail(Error),
}

impl From<Overflow> for Stop {
    fn from(_: Overflow) -> Self {
        Stop::Overflow
    }
}

impl From<LinalgError> for Stop {
    fn from(e: LinalgError) -> Self {
        match e {
            LinalgError::Overflow(_) => Stop::Overflow,
            other => Stop::Fail(other.into()),
        }
    }
}

impl From<Error> for Stop {
    fn from(e: Error) -> Self {
        Stop::Fail(e)
    }
}

fn config(msg: impl Into<String>) -> Stop {
    Stop::Fail(Error::Config(msg.into()))
}

/// Runs all requested computations on the cone.
pub fn run(input: &ConeInput, opts: &Options) -> Result<RunReport, Error> {
    match opts.threads {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| Error::Internal(e.to_string()))?;
            pool.install(|| run_any(input, opts))
        }
        None => run_any(input, opts),
    }
}

fn run_any(input: &ConeInput, opts: &Options) -> Result<RunReport, Error> {
    validate(input, opts)?;
    if !opts.force_bigint {
        match run_typed::<i64>(input, opts) {
            Ok(r) => return Ok(r),
            Err(Stop::Fail(e)) => return Err(e),
            Err(Stop::Overflow) => {}
        }
    }
    match run_typed::<BigInt>(input, opts) {
        Ok(r) => Ok(r),
        Err(Stop::Fail(e)) => Err(e),
        Err(Stop::Overflow) => Err(Error::Internal(
            "a simplicial cone has too many lattice points to enumerate".into(),
        )),
    }
}

fn validate(input: &ConeInput, opts: &Options) -> Result<(), Error> {
    if opts.tasks.is_empty() {
        return Err(Error::Config("no task selected".into()));
    }
    if input.rows.is_empty() || input.dim == 0 {
        return Err(Error::Config("empty input".into()));
    }
    if input.rows.iter().any(|r| r.len() != input.dim) {
        return Err(Error::Config("rows of unequal length".into()));
    }
    if let Some(g) = &input.grading {
        if g.len() != input.dim {
            return Err(Error::Config("grading has the wrong length".into()));
        }
    }
    let t = opts.tasks;
    if opts.strategy.partial && (t.tri || t.volume || t.series) {
        return Err(Error::Config(
            "partial triangulation only supports the Hilbert basis and degree 1 elements".into(),
        ));
    }
    Ok(())
}

fn dot<T: Scalar>(a: &[T], b: &[T]) -> Result<T, Stop> {
    Ok(T::dot(a, b)?)
}

fn degree<T: Scalar>(grading: &[T], x: &[T]) -> Result<usize, Stop> {
    let v = dot(grading, x)?;
    v.to_i64().and_then(|v| usize::try_from(v).ok()).ok_or(Stop::Overflow)
}

fn run_typed<T: Scalar>(input: &ConeInput, opts: &Options) -> Result<RunReport, Stop> {
    let start = Instant::now();
    let mut seconds = BTreeMap::new();
    let tasks = opts.tasks;
    let dim = input.dim;
    let rows: Vec<Vec<T>> = input
        .rows
        .iter()
        .map(|r| vec_from_bigint(r))
        .collect::<Result<_, _>>()?;
    let input_grading: Option<Vec<T>> = match &input.grading {
        Some(g) => Some(vec_from_bigint(g)?),
        None => None,
    };

    // Primitive nonzero generators without repetition, in input order.
    let raw_gens = match input.kind {
        InputKind::Gens => rows.clone(),
        InputKind::Ineqs => match dualize(&rows, dim) {
            Ok(g) => g,
            Err(DualizeError::Overflow(_)) => return Err(Stop::Overflow),
            Err(DualizeError::NotPointed) => return Err(config("the cone is not pointed")),
            Err(DualizeError::ZeroCone) => return Err(config("the inequalities define the zero cone")),
        },
    };
    if input.kind == InputKind::Ineqs {
        seconds.insert("dualize".to_string(), start.elapsed().as_secs_f64());
    }
    let mut seen = HashSet::new();
    let mut gens: Vec<Vec<T>> = Vec::new();
    for g in raw_gens {
        if g.iter().all(Scalar::is_zero) {
            continue;
        }
        let p = primitivize(&g)?;
        if seen.insert(p.clone()) {
            gens.push(p);
        }
    }
    if gens.is_empty() {
        return Err(config("the cone is zero"));
    }

    if let Some(g) = &input_grading {
        for x in &gens {
            if !dot(g, x)?.is_positive() {
                return Err(config("the grading is not positive on all generators"));
            }
        }
    }

    // Coordinates in span(C) ∩ Z^d.
    let r = rank_of_rows(gens.iter().map(Vec::as_slice))?;
    let emb: Option<LatticeEmbedding<T>> = if r < dim {
        Some(saturation(&Matrix::from_rows(gens.clone()))?)
    } else {
        None
    };
    let work: Vec<Vec<T>> = match &emb {
        Some(e) => gens.iter().map(|x| e.to_sub(x)).collect::<Result<_, _>>()?,
        None => gens.clone(),
    };
    let to_ambient = |c: &[T]| -> Result<Vec<T>, Stop> {
        Ok(match &emb {
            Some(e) => e.to_ambient(c)?,
            None => c.to_vec(),
        })
    };

    let mut strategy = opts.strategy.clone();
    strategy.parallel = strategy.parallel && rayon::current_num_threads() > 1;
    let parallel = strategy.parallel;

    // Grading on the working lattice.
    let mut grading_source = None;
    let mut grading: Option<Vec<T>> = match &input_grading {
        Some(g) => {
            grading_source = Some("input");
            Some(primitivize(&match &emb {
                Some(e) => e.restrict_form(g)?,
                None => g.clone(),
            })?)
        }
        None => {
            let g = implicit_grading(&work, r)?;
            if g.is_some() {
                grading_source = Some("implicit");
            }
            g
        }
    };
    let mut phase_one: Option<Vec<Vec<T>>> = None;
    if grading.is_none() && tasks.needs_grading() {
        let t = Triangulator::new(&work, r, &strategy, None);
        let forms = t.run(false)?;
        phase_one = Some(forms.clone());
        let ext = extreme_rays(&work, &forms, r)?;
        let rays: Vec<Vec<T>> = work
            .iter()
            .zip(&ext)
            .filter(|(_, e)| **e)
            .map(|(x, _)| x.clone())
            .collect();
        grading = implicit_grading(&rays, r)?;
        if grading.is_none() {
            return Err(config("no grading given and no implicit grading exists"));
        }
        grading_source = Some("implicit");
    }

    let degrees: Option<Vec<usize>> = match &grading {
        Some(g) => Some(work.iter().map(|x| degree(g, x)).collect::<Result<_, _>>()?),
        None => None,
    };

    // Order vector: sum of the generators of the first simplex.
    let mut basis = IncrementalBasis::new();
    let mut order_vector = vec![T::zero(); r];
    for x in &work {
        if basis.rank() == r {
            break;
        }
        if basis.insert(x)? {
            for (o, v) in order_vector.iter_mut().zip(x) {
                *o = o.try_add(v)?;
            }
        }
    }

    let ctx = EvalContext {
        gens: work.clone(),
        degrees: degrees.clone(),
        order_vector,
        tasks: Tasks {
            volume: tasks.volume || tasks.series,
            series: tasks.series,
            basis: tasks.basis,
            deg1: tasks.deg1,
            keep_keys: opts.keep_triangulation,
            verify: opts.verify,
        },
    };
    let triangulate = tasks.needs_triangulation();
    // Cone inequalities known before the triangulation, for shrinking the
    // candidate pool on the way.
    let reduction_forms: Option<Vec<Vec<T>>> = if !tasks.basis {
        None
    } else if input.kind == InputKind::Ineqs {
        let mut fs = Vec::new();
        for a in &rows {
            let f = match &emb {
                Some(e) => e.restrict_form(a)?,
                None => a.clone(),
            };
            if !f.iter().all(Scalar::is_zero) {
                fs.push(f);
            }
        }
        Some(fs)
    } else if strategy.partial {
        match phase_one {
            Some(f) => Some(f),
            None => Some(Triangulator::new(&work, r, &strategy, None).run(false)?),
        }
    } else {
        None
    };
    let mut sink = SimplexSink::new(&ctx, strategy.buffer_size);
    if let Some(f) = reduction_forms {
        sink = sink.with_reduction(f);
    }
    let t_tri = Instant::now();
    let triangulator = Triangulator::new(&work, r, &strategy, triangulate.then_some(&sink));
    let forms = triangulator.run(triangulate)?;
    let tri_stats = triangulator.stats();
    drop(triangulator);
    seconds.insert("build".to_string(), t_tri.elapsed().as_secs_f64());
    let mut forms = forms;
    forms.sort_unstable();
    forms.dedup();
    if !detect_pointed(&forms, r)? {
        return Err(config("the cone is not pointed"));
    }
    let ext = extreme_rays(&work, &forms, r)?;
    let rays: Vec<Vec<T>> = work
        .iter()
        .zip(&ext)
        .filter(|(_, e)| **e)
        .map(|(x, _)| x.clone())
        .collect();
    if grading.is_none() {
        grading = implicit_grading(&rays, r)?;
        if grading.is_some() {
            grading_source = Some("implicit");
        }
    }

    let collector = sink.into_collector();
    let stats = &collector.stats;
    if opts.verify && stats.det_mismatches > 0 {
        return Err(Stop::Fail(Error::Internal(format!(
            "{} inherited determinants differ from recomputed ones",
            stats.det_mismatches
        ))));
    }

    let volume = if tasks.volume || tasks.series {
        let mut v = BigRational::zero();
        for (degs, c) in &collector.classes {
            let prod: BigInt = degs.iter().map(|&g| BigInt::from(g)).product();
            v += BigRational::new(c.det_sum.clone(), prod);
        }
        Some(v)
    } else {
        None
    };

    let t_series = Instant::now();
    let mut multiplicity_check = None;
    let hilbert_series = if tasks.series {
        let classes: BTreeMap<Vec<usize>, Poly> = collector
            .classes
            .iter()
            .map(|(k, c)| {
                (k.clone(), {
                    let mut p = c.numerator.clone();
                    crate::poly::trim(&mut p);
                    p
                })
            })
            .collect();
        let hs = series::analyze(&classes, r, opts.limits);
        if let Some(v) = &volume {
            // Without the quasipolynomial its leading coefficient still
            // follows from the cyclotomic form.
            let (ok, leading) = match &hs.quasipolynomial {
                Some(q) => (series::multiplicity_check(q, v, r), q.coefficient(0, r - 1)),
                None => {
                    let lc = series::leading_coefficient(&hs.cyclotomic, r);
                    let fact: BigInt = (1..r).map(BigInt::from).product();
                    let expected = v / BigRational::from_integer(fact);
                    (lc.as_ref() == Some(&expected), lc.unwrap_or_default())
                }
            };
            if !ok {
                return Err(Stop::Fail(Error::Internal(format!(
                    "multiplicity check failed: leading quasipolynomial coefficient {leading} vs volume {v}"
                ))));
            }
            multiplicity_check = Some(ok);
        }
        if opts.verify {
            verify_series(&hs)?;
        }
        seconds.insert("series".to_string(), t_series.elapsed().as_secs_f64());
        Some(hs)
    } else {
        None
    };

    let t_basis = Instant::now();
    let hilbert_basis = if tasks.basis {
        let mut cands: HashSet<Vec<T>> = collector.candidates.iter().cloned().collect();
        cands.extend(work.iter().cloned());
        let hb = global_reduce(cands, &forms, grading.as_deref(), parallel)?;
        seconds.insert("reduce".to_string(), t_basis.elapsed().as_secs_f64());
        Some(hb)
    } else {
        None
    };

    let degree1 = if tasks.deg1 {
        let g = grading.as_ref().expect("grading checked above");
        let mut set: HashSet<Vec<T>> = collector.deg1.iter().cloned().collect();
        for x in &work {
            if dot(g, x)?.is_one() {
                set.insert(x.clone());
            }
        }
        let mut v: Vec<Vec<T>> = set.into_iter().collect();
        v.sort_unstable();
        Some(v)
    } else {
        None
    };

    // Back to ambient coordinates.
    let lift_all = |vs: &[Vec<T>]| -> Result<Vec<Vec<BigInt>>, Stop> {
        let mut out: Vec<Vec<BigInt>> = vs
            .iter()
            .map(|v| to_ambient(v).map(|a| vec_to_bigint(&a)))
            .collect::<Result<_, _>>()?;
        out.sort_unstable();
        Ok(out)
    };
    let ambient_forms: Vec<Vec<BigInt>> = {
        // Facets of inequality input are reported as the input inequalities.
        let mut given: HashMap<Vec<T>, Vec<T>> = HashMap::new();
        if let (InputKind::Ineqs, Some(e)) = (input.kind, &emb) {
            for a in &rows {
                let sub = e.restrict_form(a)?;
                if sub.iter().any(|x| !x.is_zero()) {
                    given.entry(primitivize(&sub)?).or_insert(primitivize(a)?);
                }
            }
        }
        let mut out = Vec::with_capacity(forms.len());
        for f in &forms {
            let a = match (&emb, given.get(f)) {
                (_, Some(a)) => a.clone(),
                (Some(e), None) => primitivize(&e.extend_form(f)?)?,
                (None, None) => f.clone(),
            };
            out.push(vec_to_bigint(&a));
        }
        out.sort_unstable();
        out
    };
    let ambient_grading = match (&input_grading, &grading) {
        (Some(g), _) => Some(vec_to_bigint(g)),
        (None, Some(g)) => Some(vec_to_bigint(&match &emb {
            Some(e) => primitivize(&e.extend_form(g)?)?,
            None => g.clone(),
        })),
        (None, None) => None,
    };

    let triangulation = if triangulate {
        let simplices = opts.keep_triangulation.then(|| {
            let mut keys: Vec<SimplexRecord> = collector
                .keys
                .iter()
                .map(|(k, d)| SimplexRecord {
                    key: k.clone(),
                    det: d.to_bigint(),
                })
                .collect();
            keys.sort_unstable_by(|a, b| a.key.cmp(&b.key));
            keys
        });
        Some(TriangulationSummary {
            size: stats.simplices,
            stanley_components: collector.det_sum.clone(),
            partial: strategy.partial,
            simplices,
        })
    } else {
        None
    };

    seconds.insert("total".to_string(), start.elapsed().as_secs_f64());
    Ok(RunReport {
        ambient_dim: dim,
        rank: r,
        input_kind: input.kind,
        tasks: tasks.names(),
        sublattice_basis: emb
            .as_ref()
            .map(|e| e.basis.rows().iter().map(|b| vec_to_bigint(b)).collect()),
        grading: ambient_grading,
        grading_source: grading_source.map(str::to_string),
        generators: gens.iter().map(|g| vec_to_bigint(g)).collect(),
        num_extreme_rays: rays.len(),
        extreme_rays: lift_all(&rays)?,
        num_support_hyperplanes: ambient_forms.len(),
        support_hyperplanes: tasks.supp.then_some(ambient_forms),
        triangulation,
        volume,
        num_denominator_classes: tasks.series.then_some(collector.classes.len()),
        hilbert_series,
        multiplicity_check,
        hilbert_basis: match &hilbert_basis {
            Some(hb) => Some(lift_all(hb)?),
            None => None,
        },
        degree1_elements: match &degree1 {
            Some(v) => Some(lift_all(v)?),
            None => None,
        },
        evaluation: EvalCounts {
            simplices: stats.simplices,
            unimodular: stats.unimodular,
            potentially_unimodular: stats.potentially_unimodular,
            nongeneric: stats.nongeneric,
            inherited_dets: stats.inherited_dets,
            det_mismatches: stats.det_mismatches,
        },
        info: RunInfo {
            arithmetic: std::any::type_name::<T>().rsplit("::").next().unwrap_or("").to_string(),
            threads: rayon::current_num_threads(),
            seconds,
            pyramids_per_level: tri_stats.pyramids_per_level.iter().skip(1).copied().collect(),
            recursive_pyramids: tri_stats.recursive_pyramids,
            discarded_height_one: tri_stats.discarded_height_one,
            skipped_height_one_simplices: tri_stats.skipped_height_one_simplices,
        },
    })
}

/// Raw, cyclotomic and standard forms must expand to the same coefficients.
fn verify_series(hs: &series::HilbertSeries) -> Result<(), Stop> {
    const K: usize = 50;
    let raw = series::series_coefficients(&hs.raw.numerator, &hs.raw.denominator, K);
    let cyc = series::cyclotomic_coefficients(&hs.cyclotomic, K, &mut Cyclotomics::new());
    if raw != cyc {
        return Err(Stop::Fail(Error::Internal(
            "cyclotomic form differs from raw series".into(),
        )));
    }
    if let Some(st) = &hs.standard {
        if series::series_coefficients(&st.numerator, &st.denominator, K) != raw {
            return Err(Stop::Fail(Error::Internal(
                "standard form differs from raw series".into(),
            )));
        }
    }
    if let Some(q) = &hs.quasipolynomial {
        for (k, h) in raw.iter().enumerate() {
            if q.evaluate(k) != BigRational::from_integer(h.clone()) {
                return Err(Stop::Fail(Error::Internal(
                    "quasipolynomial differs from raw series".into(),
                )));
            }
        }
    }
    Ok(())
}
