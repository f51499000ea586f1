//! The counting engine: exhaustive enumeration of the `F_{q^m}`-points of the
//! degree-`e` section spaces, with two interchangeable strategies (direct
//! coefficient scan and interpolation through cone-point values), exact orbit
//! reduction under the weighted scalar action, accumulator exclusions, and the
//! bounded-height counting series built from them.

use rayon::prelude::*;
use thiserror::Error;

use crate::field::{Field, FieldError, FqElem};
use crate::forms::{
    lagrange_coeff_matrix, CoeffLayout, FormsError, MultiForm, UniPoly,
};
use crate::variety::{VarietyError, VarietySpec};

/// Default cap on candidate evaluations per scan.
pub const DEFAULT_BUDGET: u64 = 1 << 34;

#[derive(Debug, Error)]
pub enum MorError {
    #[error("enumeration budget exceeded: {cost}")]
    Budget { cost: String },
    #[error("interpolation needs {needed} distinct nodes but the field has only {q} elements")]
    NodeShortage { q: u64, needed: u64 },
    #[error(transparent)]
    Variety(#[from] VarietyError),
    #[error(transparent)]
    Forms(#[from] FormsError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum Strategy {
    Naive,
    Interpolation,
}

impl Strategy {
    pub fn name(self) -> &'static str {
        match self {
            Strategy::Naive => "naive",
            Strategy::Interpolation => "interpolation",
        }
    }
}

#[derive(Copy, Clone, Debug)]
pub struct EngineConfig {
    pub strategy: Strategy,
    pub budget: u64,
    /// Worker threads; 0 uses the global rayon pool.
    pub threads: usize,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            strategy: Strategy::Naive,
            budget: DEFAULT_BUDGET,
            threads: 0,
        }
    }
}

/// A candidate morphism `P^1 -> X` of height degree `e`, written as the
/// `N+1` coordinate sections over `F_{q^m}`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SectionTuple {
    pub polys: Vec<UniPoly>,
    pub e: u32,
    pub m: u32,
}

impl SectionTuple {
    /// Check all section invariants against a (base-changed) spec: degree
    /// caps, attained maximum, coprimality, and identical vanishing on every
    /// defining form.
    pub fn is_valid(&self, spec: &VarietySpec) -> bool {
        let field = &spec.field;
        if self.polys.len() != spec.nvars() {
            return false;
        }
        let mut attained = false;
        for (i, p) in self.polys.iter().enumerate() {
            let cap = (spec.weights[i] * self.e) as usize;
            match p.degree() {
                Some(d) if d > cap => return false,
                Some(d) if d == cap => attained = true,
                _ => {}
            }
        }
        if self.e == 0 {
            attained = self.polys.iter().any(|p| !p.is_zero());
        }
        if !attained {
            return false;
        }
        let mut gcd: Option<UniPoly> = None;
        for p in &self.polys {
            if p.is_zero() {
                continue;
            }
            gcd = Some(match gcd {
                None => p.monic(field),
                Some(g) => UniPoly::gcd(field, &g, p).expect("nonzero input"),
            });
            if gcd.as_ref().unwrap().degree() == Some(0) {
                break;
            }
        }
        match gcd {
            None => return false,
            Some(g) => {
                if g.degree() != Some(0) {
                    return false;
                }
            }
        }
        spec.forms.iter().all(|f| {
            f.compose_with_sections(field, &self.polys, self.e)
                .map(|c| c.is_zero())
                .unwrap_or(false)
        })
    }
}

/// Image-containment test: does the section land inside some component of the
/// exclusion set?  A component is given by its list of defining forms; the
/// image lies in it iff every generator composes to the zero polynomial.
pub fn exclusion_test(
    field: &Field,
    tuple: &SectionTuple,
    components: &[Vec<MultiForm>],
) -> bool {
    components.iter().any(|gens| {
        gens.iter().all(|g| {
            g.compose_with_sections(field, &tuple.polys, tuple.e)
                .map(|c| c.is_zero())
                .unwrap_or(false)
        })
    })
}

/// Counters for a single height degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeCount {
    pub e: u32,
    /// Number of valid coefficient tuples before orbit reduction.
    pub raw: u64,
    /// Number of scalar-action orbits: the point count of the section space.
    pub orbits: u64,
    /// Sum of orbit sizes over canonical representatives; equals `raw`.
    pub orbit_size_sum: u64,
    /// Orbits whose image lies inside some excluded component.
    pub excluded_orbits: u64,
    /// `orbits - excluded_orbits`.
    pub n_u: u64,
}

/// A counting run over a range of degrees, with cumulative totals.
#[derive(Clone, Debug)]
pub struct CountSeries {
    pub label: String,
    pub base_q: u64,
    pub m: u32,
    pub ext_q: u64,
    pub strategy: Strategy,
    pub exclusion_mode: String,
    pub degrees: Vec<DegreeCount>,
    /// Cumulative `N_U(q^e) = sum_{k <= e} N_U(k)`, including the constant
    /// `e = 0` term.
    pub cumulative: Vec<(u32, u64)>,
}

// ----- compiled evaluation of coefficient systems -----

/// One polynomial system compiled for fast repeated evaluation at coefficient
/// vectors: flattened terms, shared variable-index pool.
struct CompiledEq {
    coefs: Vec<FqElem>,
    term_start: Vec<u32>,
    var_idx: Vec<u32>,
}

impl CompiledEq {
    fn compile(form: &MultiForm) -> CompiledEq {
        let mut coefs = Vec::new();
        let mut term_start = vec![0u32];
        let mut var_idx = Vec::new();
        for (expo, c) in form.terms() {
            coefs.push(*c);
            for (v, &e) in expo.iter().enumerate() {
                for _ in 0..e {
                    var_idx.push(v as u32);
                }
            }
            term_start.push(var_idx.len() as u32);
        }
        CompiledEq {
            coefs,
            term_start,
            var_idx,
        }
    }

    #[inline]
    fn eval(&self, field: &Field, x: &[FqElem]) -> FqElem {
        let mut acc = field.zero();
        for t in 0..self.coefs.len() {
            let mut prod = self.coefs[t];
            let lo = self.term_start[t] as usize;
            let hi = self.term_start[t + 1] as usize;
            for &v in &self.var_idx[lo..hi] {
                prod = field.mul(prod, x[v as usize]);
                if prod.is_zero() {
                    break;
                }
            }
            acc = field.add(acc, prod);
        }
        acc
    }
}

/// The full on-variety check, equations ordered top degree first per form so
/// that failing candidates exit quickly.
struct CompiledSystem {
    equations: Vec<CompiledEq>,
}

impl CompiledSystem {
    fn for_containment(systems: &[Vec<MultiForm>]) -> CompiledSystem {
        let mut equations = Vec::new();
        for sys in systems {
            for form in sys.iter().rev() {
                equations.push(CompiledEq::compile(form));
            }
        }
        CompiledSystem { equations }
    }

    #[inline]
    fn all_zero(&self, field: &Field, x: &[FqElem]) -> bool {
        self.equations.iter().all(|eq| eq.eval(field, x).is_zero())
    }
}

// ----- scan context -----

struct ScanCtx<'a> {
    field: &'a Field,
    layout: &'a CoeffLayout,
    on_variety: CompiledSystem,
    /// One containment system per excluded component.
    exclusions: Vec<CompiledSystem>,
    e: u32,
    /// Distinct coordinate weights, and each variable's index into that set.
    weight_set: Vec<u32>,
    var_weight_slot: Vec<usize>,
}

impl<'a> ScanCtx<'a> {
    /// Orbit bookkeeping for a valid tuple. Returns `(is_canonical,
    /// orbit_size)`; the orbit size is only meaningful for the canonical
    /// representative.
    fn canonical_info(&self, coeffs: &[FqElem]) -> (bool, u64) {
        let field = self.field;
        let mut stab = 0u64;
        for lam in field.elements().skip(1) {
            // Scale by lambda coordinate-weight-wise and compare lexicographically.
            let mut powers = [field.one(); 8];
            for (wi, &w) in self.weight_set.iter().enumerate() {
                powers[wi] = field.pow(lam, w as u64);
            }
            let mut cmp = std::cmp::Ordering::Equal;
            for (v, &c) in coeffs.iter().enumerate() {
                let scaled = field.mul(powers[self.var_weight_slot[v]], c);
                cmp = scaled.repr().cmp(&c.repr());
                if cmp != std::cmp::Ordering::Equal {
                    break;
                }
            }
            match cmp {
                std::cmp::Ordering::Less => return (false, 0),
                std::cmp::Ordering::Equal => stab += 1,
                std::cmp::Ordering::Greater => {}
            }
        }
        let q1 = (field.q() - 1) as u64;
        (true, q1 / stab)
    }

    fn excluded(&self, coeffs: &[FqElem]) -> bool {
        self.exclusions
            .iter()
            .any(|sys| sys.all_zero(self.field, coeffs))
    }

    /// Degree caps are structural; exactness means some coordinate attains
    /// its cap (for e = 0: some coordinate is nonzero).
    #[inline]
    fn exactness(&self, coeffs: &[FqElem]) -> bool {
        if self.e == 0 {
            return coeffs.iter().any(|c| !c.is_zero());
        }
        (0..self.layout.offsets.len())
            .any(|i| !coeffs[self.layout.var(i, self.layout.caps[i])].is_zero())
    }

    fn coprime(&self, coeffs: &[FqElem]) -> bool {
        let field = self.field;
        let mut gcd: Option<UniPoly> = None;
        for i in 0..self.layout.offsets.len() {
            let lo = self.layout.var(i, 0);
            let hi = self.layout.var(i, self.layout.caps[i]);
            let poly = UniPoly::from_coeffs(coeffs[lo..=hi].to_vec());
            if poly.is_zero() {
                continue;
            }
            let g = match gcd {
                None => poly.monic(field),
                Some(g) => UniPoly::gcd(field, &g, &poly).expect("nonzero input"),
            };
            if g.degree() == Some(0) {
                return true;
            }
            gcd = Some(g);
        }
        // No nonzero coordinate, or a common factor of positive degree.
        false
    }
}

#[derive(Clone, Default)]
struct Accum {
    raw: u64,
    orbits: u64,
    orbit_size_sum: u64,
    excluded_orbits: u64,
    collected: Vec<(u64, Vec<FqElem>)>,
}

impl Accum {
    fn merge(mut self, mut other: Accum) -> Accum {
        self.raw += other.raw;
        self.orbits += other.orbits;
        self.orbit_size_sum += other.orbit_size_sum;
        self.excluded_orbits += other.excluded_orbits;
        self.collected.append(&mut other.collected);
        self
    }

    fn visit(&mut self, ctx: &ScanCtx, idx: u64, coeffs: &[FqElem], collect: bool) {
        self.raw += 1;
        let (canonical, orbit_size) = ctx.canonical_info(coeffs);
        if canonical {
            self.orbits += 1;
            self.orbit_size_sum += orbit_size;
            if ctx.excluded(coeffs) {
                self.excluded_orbits += 1;
            }
            if collect {
                self.collected.push((idx, coeffs.to_vec()));
            }
        }
    }
}

// ----- the scan proper -----

struct ScanOutput {
    count: DegreeCount,
    tuples: Vec<Vec<FqElem>>,
}

fn run_in_pool<T: Send>(threads: usize, job: impl FnOnce() -> T + Send) -> T {
    if threads == 0 {
        job()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .expect("thread pool");
        pool.install(job)
    }
}

/// Count (and optionally collect canonical representatives of) all valid
/// sections of one degree over `F_{q^m}`.
fn scan_degree(
    spec: &VarietySpec,
    e: u32,
    m: u32,
    exclusions: &[Vec<MultiForm>],
    cfg: &EngineConfig,
    collect: bool,
) -> Result<ScanOutput, MorError> {
    let (ext_spec, emb) = spec.base_change(m)?;
    let field: &Field = &ext_spec.field;
    let (layout, fij) = ext_spec.fij_system(e);
    let excl_systems: Vec<Vec<Vec<MultiForm>>> = exclusions
        .iter()
        .map(|gens| {
            let gens_ext: Vec<MultiForm> = gens.iter().map(|g| g.embed(&emb)).collect();
            crate::forms::fij_system(field, &ext_spec.weights, &gens_ext, e).1
        })
        .collect();
    let mut weight_set: Vec<u32> = ext_spec.weights.clone();
    weight_set.sort_unstable();
    weight_set.dedup();
    assert!(weight_set.len() <= 8, "more than 8 distinct weights");
    let var_weight_slot: Vec<usize> = layout
        .var_weights
        .iter()
        .map(|w| weight_set.iter().position(|x| x == w).unwrap())
        .collect();
    let ctx = ScanCtx {
        field,
        layout: &layout,
        on_variety: CompiledSystem::for_containment(&fij),
        exclusions: excl_systems
            .iter()
            .map(|sys| CompiledSystem::for_containment(sys))
            .collect(),
        e,
        weight_set,
        var_weight_slot,
    };

    let accum = match cfg.strategy {
        Strategy::Naive => scan_naive(&ext_spec, &ctx, cfg, collect)?,
        Strategy::Interpolation => scan_interpolation(&ext_spec, &ctx, cfg, collect)?,
    };

    let mut collected = accum.collected;
    collected.sort_by_key(|(idx, _)| *idx);
    Ok(ScanOutput {
        count: DegreeCount {
            e,
            raw: accum.raw,
            orbits: accum.orbits,
            orbit_size_sum: accum.orbit_size_sum,
            excluded_orbits: accum.excluded_orbits,
            n_u: accum.orbits - accum.excluded_orbits,
        },
        tuples: collected.into_iter().map(|(_, t)| t).collect(),
    })
}

fn scan_naive(
    ext_spec: &VarietySpec,
    ctx: &ScanCtx,
    cfg: &EngineConfig,
    collect: bool,
) -> Result<Accum, MorError> {
    let field = &*ext_spec.field;
    let q = field.q() as u64;
    let total = checked_pow(q, ctx.layout.total as u32).filter(|&t| t <= cfg.budget);
    let Some(total) = total else {
        return Err(MorError::Budget {
            cost: format!(
                "naive scan costs q^V = {}^{} candidate evaluations (budget {})",
                q, ctx.layout.total, cfg.budget
            ),
        });
    };
    let min_len = (total / 1024).clamp(1, 1 << 16);
    Ok(run_in_pool(cfg.threads, || {
        (0..total as usize)
            .into_par_iter()
            .with_min_len(min_len as usize)
            .fold(
                || (Accum::default(), vec![field.zero(); ctx.layout.total]),
                |(mut acc, mut coeffs), idx| {
                    let idx = idx as u64;
                    // Decode base-q digits; the first coordinate's
                    // coefficients are the most significant block.
                    let mut rest = idx;
                    for v in (0..ctx.layout.total).rev() {
                        coeffs[v] = field.from_repr((rest % q) as u32);
                        rest /= q;
                    }
                    if ctx.exactness(&coeffs)
                        && ctx.on_variety.all_zero(field, &coeffs)
                        && ctx.coprime(&coeffs)
                    {
                        acc.visit(ctx, idx, &coeffs, collect);
                    }
                    (acc, coeffs)
                },
            )
            .map(|(acc, _)| acc)
            .reduce(Accum::default, Accum::merge)
    }))
}

fn scan_interpolation(
    ext_spec: &VarietySpec,
    ctx: &ScanCtx,
    cfg: &EngineConfig,
    collect: bool,
) -> Result<Accum, MorError> {
    let field = &*ext_spec.field;
    let q = field.q() as u64;
    let n = ext_spec.nvars();
    let w_max = *ext_spec.weights.iter().max().unwrap();
    let n_nodes = (w_max * ctx.e + 1) as usize;
    if q < n_nodes as u64 {
        return Err(MorError::NodeShortage {
            q,
            needed: n_nodes as u64,
        });
    }
    // Nonzero cone points, in ambient vector enumeration order.
    let cone_budget = checked_pow(q, n as u32).filter(|&c| c <= cfg.budget);
    if cone_budget.is_none() {
        return Err(MorError::Budget {
            cost: format!(
                "cone enumeration costs q^(N+1) = {q}^{n} evaluations (budget {})",
                cfg.budget
            ),
        });
    }
    let eval_forms: Vec<CompiledEq> = ext_spec.forms.iter().map(CompiledEq::compile).collect();
    let mut cone: Vec<FqElem> = Vec::new();
    let mut v = vec![field.zero(); n];
    let total_vecs = q.pow(n as u32);
    for idx in 1..total_vecs {
        let mut rest = idx;
        for slot in (0..n).rev() {
            v[slot] = field.from_repr((rest % q) as u32);
            rest /= q;
        }
        if eval_forms.iter().all(|f| f.eval(field, &v).is_zero()) {
            cone.extend_from_slice(&v);
        }
    }
    let npts = (cone.len() / n) as u64;
    let total = checked_pow(npts, n_nodes as u32).filter(|&t| t <= cfg.budget);
    let Some(total) = total else {
        return Err(MorError::Budget {
            cost: format!(
                "interpolation scan costs (cone points)^nodes = {npts}^{n_nodes} candidates (budget {})",
                cfg.budget
            ),
        });
    };
    if total == 0 {
        return Ok(Accum::default());
    }
    let nodes: Vec<FqElem> = field.elements().take(n_nodes).collect();
    let lagrange = lagrange_coeff_matrix(field, &nodes)?;
    // Flatten: lag[j * n_nodes + i] = coeff of t^j in basis polynomial L_i.
    let mut lag: Vec<FqElem> = Vec::with_capacity(n_nodes * n_nodes);
    for row in &lagrange {
        lag.extend_from_slice(row);
    }

    let min_len = (total / 1024).clamp(1, 1 << 16);
    let cone = &cone;
    let lag = &lag;
    Ok(run_in_pool(cfg.threads, || {
        (0..total as usize)
            .into_par_iter()
            .with_min_len(min_len as usize)
            .fold(
                || {
                    (
                        Accum::default(),
                        vec![field.zero(); ctx.layout.total],
                        vec![0usize; n_nodes],
                    )
                },
                |(mut acc, mut coeffs, mut pts), idx| {
                    let idx = idx as u64;
                    // Decode the tuple of cone-point indices; the first node's
                    // point is the most significant digit.
                    let mut rest = idx;
                    for slot in (0..n_nodes).rev() {
                        pts[slot] = (rest % npts) as usize;
                        rest /= npts;
                    }
                    // Interpolate each coordinate and enforce its degree cap.
                    let mut ok = true;
                    'coords: for i in 0..n {
                        let cap = ctx.layout.caps[i];
                        for j in 0..n_nodes {
                            let mut c = field.zero();
                            for (s, &pt) in pts.iter().enumerate() {
                                let value = cone[pt * n + i];
                                c = field.add(c, field.mul(lag[j * n_nodes + s], value));
                            }
                            if j > cap {
                                if !c.is_zero() {
                                    ok = false;
                                    break 'coords;
                                }
                            } else {
                                coeffs[ctx.layout.var(i, j)] = c;
                            }
                        }
                    }
                    if ok
                        && ctx.exactness(&coeffs)
                        && ctx.on_variety.all_zero(field, &coeffs)
                        && ctx.coprime(&coeffs)
                    {
                        acc.visit(ctx, idx, &coeffs, collect);
                    }
                    (acc, coeffs, pts)
                },
            )
            .map(|(acc, _, _)| acc)
            .reduce(Accum::default, Accum::merge)
    }))
}

fn checked_pow(base: u64, exp: u32) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

// ----- public operations -----

/// Count the sections of one height degree: raw tuples and orbits.
pub fn count_mor(
    spec: &VarietySpec,
    e: u32,
    m: u32,
    cfg: &EngineConfig,
) -> Result<DegreeCount, MorError> {
    Ok(scan_degree(spec, e, m, &[], cfg, false)?.count)
}

/// Count with exclusions, one degree.
pub fn count_mor_excluded(
    spec: &VarietySpec,
    e: u32,
    m: u32,
    exclusions: &[Vec<MultiForm>],
    cfg: &EngineConfig,
) -> Result<DegreeCount, MorError> {
    Ok(scan_degree(spec, e, m, exclusions, cfg, false)?.count)
}

/// Collect the canonical representative tuples of one degree, in the
/// strategy's deterministic order.
pub fn collect_sections(
    spec: &VarietySpec,
    e: u32,
    m: u32,
    cfg: &EngineConfig,
) -> Result<Vec<SectionTuple>, MorError> {
    let out = scan_degree(spec, e, m, &[], cfg, true)?;
    let layout = CoeffLayout::new(&spec.weights, e);
    Ok(out
        .tuples
        .into_iter()
        .map(|coeffs| SectionTuple {
            polys: (0..spec.nvars())
                .map(|i| {
                    let lo = layout.var(i, 0);
                    let hi = layout.var(i, layout.caps[i]);
                    UniPoly::from_coeffs(coeffs[lo..=hi].to_vec())
                })
                .collect(),
            e,
            m,
        })
        .collect())
}

/// The bounded-height counting series `N_U(q^e)` for `e` up to `e_max`,
/// including the `e = 0` constant-section term.
pub fn count_points_bounded_height(
    spec: &VarietySpec,
    e_max: u32,
    m: u32,
    exclusions: &[Vec<MultiForm>],
    exclusion_mode: String,
    cfg: &EngineConfig,
) -> Result<CountSeries, MorError> {
    let mut degrees = Vec::new();
    let mut cumulative = Vec::new();
    let mut running = 0u64;
    for e in 0..=e_max {
        let count = scan_degree(spec, e, m, exclusions, cfg, false)?.count;
        running += count.n_u;
        cumulative.push((e, running));
        degrees.push(count);
    }
    let ext_q = (spec.field.q() as u64).pow(m);
    Ok(CountSeries {
        label: spec.label.clone(),
        base_q: spec.field.q() as u64,
        m,
        ext_q,
        strategy: cfg.strategy,
        exclusion_mode,
        degrees,
        cumulative,
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::forms::{default_var_names, parse_form};
    use crate::variety::preset;

    fn line_in_p2(q: u32) -> VarietySpec {
        let field = Arc::new(Field::prime(q).unwrap());
        let names = default_var_names(3);
        let f = parse_form("x2", &field, &names, &[1, 1, 1]).unwrap();
        VarietySpec::new(field, vec![1, 1, 1], names, vec![f], format!("line-p2-q{q}"))
    }

    fn line_in_p2_ext(p: u32, k: u32) -> VarietySpec {
        let field = Arc::new(
            Field::extension(p, k, &Field::default_modulus(p, k)).unwrap(),
        );
        let names = default_var_names(3);
        let f = parse_form("x2", &field, &names, &[1, 1, 1]).unwrap();
        VarietySpec::new(field, vec![1, 1, 1], names, vec![f], "line-p2-f4".into())
    }

    fn conic(q: u32) -> VarietySpec {
        let field = Arc::new(Field::prime(q).unwrap());
        let names = default_var_names(3);
        let f = parse_form("x0*x2 - x1^2", &field, &names, &[1, 1, 1]).unwrap();
        VarietySpec::new(field, vec![1, 1, 1], names, vec![f], format!("conic-q{q}"))
    }

    #[test]
    fn line_degree_one_counts_match_pgl2() {
        // Degree-1 sections of a line are the automorphisms of P^1:
        // q^3 - q orbits.
        for (spec, q) in [(line_in_p2(2), 2u64), (line_in_p2(3), 3)] {
            let c = count_mor(&spec, 1, 1, &EngineConfig::default()).unwrap();
            assert_eq!(c.orbits, q * q * q - q, "q={q}");
            assert_eq!(c.raw, c.orbits * (q - 1));
            assert_eq!(c.orbit_size_sum, c.raw);
        }
        let spec4 = line_in_p2_ext(2, 2);
        let c = count_mor(&spec4, 1, 1, &EngineConfig::default()).unwrap();
        assert_eq!(c.orbits, 60);
    }

    #[test]
    fn conic_has_no_lines_and_six_conic_parameterizations() {
        let spec = conic(2);
        let c = count_mor(&spec, 1, 1, &EngineConfig::default()).unwrap();
        assert_eq!(c.raw, 0);
        let c = count_mor(&spec, 2, 1, &EngineConfig::default()).unwrap();
        assert_eq!(c.orbits, 6); // the degree-2 parameterizations, = #PGL_2(F_2)
    }

    #[test]
    fn strategies_agree_on_small_fleet() {
        let fleet: Vec<(VarietySpec, u32)> = vec![
            (line_in_p2(2), 1),
            (line_in_p2(3), 1),
            (conic(2), 2),
            (
                preset("dp3-fermat", Arc::new(Field::prime(2).unwrap())).unwrap(),
                1,
            ),
        ];
        for (spec, e) in fleet {
            let naive = count_mor(&spec, e, 1, &EngineConfig::default()).unwrap();
            let interp = count_mor(
                &spec,
                e,
                1,
                &EngineConfig {
                    strategy: Strategy::Interpolation,
                    ..Default::default()
                },
            )
            .unwrap();
            assert_eq!(naive.raw, interp.raw, "{} e={e}", spec.label);
            assert_eq!(naive.orbits, interp.orbits, "{} e={e}", spec.label);
        }
    }

    #[test]
    fn collected_tuples_are_valid_and_strategies_agree_as_multisets() {
        let spec = line_in_p2(2);
        let naive = collect_sections(&spec, 1, 1, &EngineConfig::default()).unwrap();
        let interp = collect_sections(
            &spec,
            1,
            1,
            &EngineConfig {
                strategy: Strategy::Interpolation,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(naive.len(), 6);
        for t in &naive {
            assert!(t.is_valid(&spec));
        }
        let mut a: Vec<_> = naive.iter().map(|t| t.polys.clone()).collect();
        let mut b: Vec<_> = interp.iter().map(|t| t.polys.clone()).collect();
        a.sort();
        b.sort();
        assert_eq!(a, b);
    }

    #[test]
    fn galois_consistency_base_counts_below_extension_counts() {
        let spec = line_in_p2(2);
        let c1 = count_mor(&spec, 1, 1, &EngineConfig::default()).unwrap();
        let c2 = count_mor(&spec, 1, 2, &EngineConfig::default()).unwrap();
        assert!(c1.raw <= c2.raw);
        assert_eq!(c2.orbits, 60); // PGL_2(F_4)
    }

    #[test]
    fn constant_sections_count_the_variety_points() {
        // e = 0 orbits equal the direct point count, via an independent path.
        let spec = conic(3);
        let c = count_mor(&spec, 0, 1, &EngineConfig::default()).unwrap();
        assert_eq!(c.orbits, spec.points_on_x().len() as u64);
        assert_eq!(c.orbits, 4); // smooth conic has q+1 points

        let dp2 = preset("dp2", Arc::new(Field::prime(3).unwrap())).unwrap();
        let c = count_mor(&dp2, 0, 1, &EngineConfig::default()).unwrap();
        assert_eq!(c.orbits, dp2.count_points_direct());
    }

    #[test]
    fn exclusion_examples() {
        let field = Arc::new(Field::prime(2).unwrap());
        let names = default_var_names(4);
        // Z = the line x2 = x3 = 0 in P^3.
        let z = vec![vec![
            parse_form("x2", &field, &names, &[1; 4]).unwrap(),
            parse_form("x3", &field, &names, &[1; 4]).unwrap(),
        ]];
        let mk = |coeff_polys: Vec<UniPoly>| SectionTuple {
            polys: coeff_polys,
            e: 1,
            m: 1,
        };
        let one = UniPoly::constant(field.one());
        let t = UniPoly::monomial(&field, field.one(), 1);
        let inside = mk(vec![one.clone(), t.clone(), UniPoly::zero(), UniPoly::zero()]);
        assert!(exclusion_test(&field, &inside, &z));
        let outside = mk(vec![one.clone(), t.clone(), one.clone(), UniPoly::zero()]);
        assert!(!exclusion_test(&field, &outside, &z));
        let inside2 = mk(vec![t, one, UniPoly::zero(), UniPoly::zero()]);
        assert!(exclusion_test(&field, &inside2, &z));
    }

    #[test]
    fn excluded_multiple_covers_match_self_map_count() {
        // Sections of the line inside P^2 at degree 2 are exactly the
        // degree-2 self-maps of the line: q^5 - q^3 orbits. Excluding the
        // line itself must remove them all.
        let spec = line_in_p2(2);
        let field = &spec.field;
        let names = default_var_names(3);
        let z = vec![vec![parse_form("x2", field, &names, &[1, 1, 1]).unwrap()]];
        let with_excl = count_mor_excluded(&spec, 2, 1, &z, &EngineConfig::default()).unwrap();
        assert_eq!(with_excl.orbits, 24); // q^5 - q^3 at q = 2
        assert_eq!(with_excl.excluded_orbits, 24);
        assert_eq!(with_excl.n_u, 0);
    }

    #[test]
    fn exclusion_monotonicity() {
        // Excluding more components cannot increase N_U.
        let f2 = Arc::new(Field::prime(2).unwrap());
        let spec = preset("dp3-fermat", f2).unwrap();
        let names = default_var_names(4);
        let line1 = vec![
            parse_form("x0 + x1", &spec.field, &names, &[1; 4]).unwrap(),
            parse_form("x2 + x3", &spec.field, &names, &[1; 4]).unwrap(),
        ];
        let line2 = vec![
            parse_form("x0 + x2", &spec.field, &names, &[1; 4]).unwrap(),
            parse_form("x1 + x3", &spec.field, &names, &[1; 4]).unwrap(),
        ];
        let cfg = EngineConfig::default();
        let small = count_mor_excluded(&spec, 1, 1, &[line1.clone()], &cfg).unwrap();
        let large = count_mor_excluded(&spec, 1, 1, &[line1, line2], &cfg).unwrap();
        assert!(large.n_u <= small.n_u);
        assert_eq!(large.orbits, small.orbits);
    }

    #[test]
    fn budget_refusal_names_the_cost() {
        let spec = line_in_p2(7);
        let cfg = EngineConfig {
            budget: 1000,
            ..Default::default()
        };
        match count_mor(&spec, 2, 1, &cfg) {
            Err(MorError::Budget { cost }) => assert!(cost.contains("7^9")),
            other => panic!("expected budget refusal, got {other:?}"),
        }
    }

    #[test]
    fn interpolation_node_shortage() {
        let spec = line_in_p2(2);
        let cfg = EngineConfig {
            strategy: Strategy::Interpolation,
            ..Default::default()
        };
        match count_mor(&spec, 2, 1, &cfg) {
            Err(MorError::NodeShortage { q: 2, needed: 3 }) => {}
            other => panic!("expected node shortage, got {other:?}"),
        }
    }

    #[test]
    fn weighted_orbit_arithmetic_is_exact() {
        // dP2 over F_3: weight-2 action; orbit sizes must sum back to raw.
        let dp2 = preset("dp2", Arc::new(Field::prime(3).unwrap())).unwrap();
        let c = count_mor(&dp2, 1, 1, &EngineConfig::default()).unwrap();
        assert_eq!(c.orbit_size_sum, c.raw);
        assert!(c.orbits > 0);
    }

    #[test]
    fn bounded_height_series_accumulates() {
        let spec = line_in_p2(2);
        let series = count_points_bounded_height(
            &spec,
            2,
            1,
            &[],
            "none".into(),
            &EngineConfig::default(),
        )
        .unwrap();
        assert_eq!(series.degrees.len(), 3);
        // No exclusions: N_U = orbits at every degree.
        for d in &series.degrees {
            assert_eq!(d.n_u, d.orbits);
        }
        let total: u64 = series.degrees.iter().map(|d| d.n_u).sum();
        assert_eq!(series.cumulative.last().unwrap().1, total);
        // e=0 term is #P^1(F_2) = 3.
        assert_eq!(series.degrees[0].n_u, 3);
    }

    #[test]
    fn dp2_on_variety_invariant_restated() {
        // Every collected dP2 tuple satisfies y^2 = f(u,v,w) identically.
        let dp2 = preset("dp2", Arc::new(Field::prime(3).unwrap())).unwrap();
        let tuples = collect_sections(&dp2, 1, 1, &EngineConfig::default()).unwrap();
        assert!(!tuples.is_empty());
        for t in &tuples {
            assert!(t.is_valid(&dp2));
        }
    }
}
