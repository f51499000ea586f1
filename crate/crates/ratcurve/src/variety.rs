//! Variety specifications: ambient weights, defining forms, validation, the
//! del Pezzo model presets, and the closed-form constants (Bezout products,
//! cone degree bounds, expected dimensions, threshold degree) every
//! certificate is built from.

use std::sync::Arc;

use num_bigint::BigUint;
use thiserror::Error;

use crate::field::{Embedding, Field, FieldError, FqElem};
use crate::forms::{
    self, default_var_names, parse_form, CoeffLayout, FormsError, MultiForm,
};
use crate::matrix::Matrix;

#[derive(Debug, Error)]
pub enum VarietyError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Forms(#[from] FormsError),
    #[error("spec file line {line}: {msg}")]
    SpecFile { line: usize, msg: String },
    #[error("unknown preset `{0}` (expected dp1, dp2, dp3-fermat or dp4-default)")]
    UnknownPreset(String),
    #[error("preset `{preset}` has no built-in equations: {reason}")]
    PresetUnavailable { preset: String, reason: String },
    #[error("spec is invalid: {0}")]
    Invalid(String),
    #[error("operation needs Fano slack N+1-d >= {needs}, but N+1-d = {got}")]
    SlackTooSmall { needs: i64, got: i64 },
    #[error("operation supports only {expected}, got {got}")]
    WrongShape { expected: String, got: String },
    #[error("scan budget exceeded: {cost}")]
    BudgetExceeded { cost: String },
}

/// A projective (possibly weighted) complete-intersection specification:
/// ambient weights `w_0..w_N`, defining forms of weighted degrees
/// `d_1..d_R`, over a concrete finite field.
#[derive(Clone)]
pub struct VarietySpec {
    pub field: Arc<Field>,
    pub weights: Vec<u32>,
    pub var_names: Vec<String>,
    pub forms: Vec<MultiForm>,
    pub label: String,
}

/// Expected dimensions attached to degree-`e` morphism counting.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct ExpectedDims {
    /// Expected dimension of the morphism space: `e(N+1-d) + dim X`.
    pub mor: i64,
    /// Expected dimension of an evaluation fibre at a general point:
    /// `e(N+1-d) - 2` (the finite exceptional set adds one).
    pub fibre: i64,
}

/// Threshold degree of the induction underlying the dimension statements.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct ThresholdDegree {
    pub e0: u32,
    /// Whether `(e0+1)(N+1-d) - 1 >= N - R` holds (it always should).
    pub inequality_holds: bool,
}

/// A singular point found by the sampled smoothness scan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularPoint {
    /// Extension index: the point is defined over `F_{q^m}`.
    pub m: u32,
    /// Canonical homogeneous coordinates over that extension.
    pub coords: Vec<FqElem>,
}

impl VarietySpec {
    pub fn new(
        field: Arc<Field>,
        weights: Vec<u32>,
        var_names: Vec<String>,
        forms: Vec<MultiForm>,
        label: String,
    ) -> VarietySpec {
        VarietySpec {
            field,
            weights,
            var_names,
            forms,
            label,
        }
    }

    /// Number of coordinates, `N + 1`.
    #[inline]
    pub fn nvars(&self) -> usize {
        self.weights.len()
    }

    /// The ambient projective dimension `N`.
    #[inline]
    pub fn big_n(&self) -> usize {
        self.nvars() - 1
    }

    /// Number of defining forms `R`.
    #[inline]
    pub fn r(&self) -> usize {
        self.forms.len()
    }

    /// Weighted degrees `d_1..d_R`.
    pub fn degrees(&self) -> Vec<u32> {
        self.forms.iter().map(|f| f.wdeg()).collect()
    }

    /// Total degree `d = sum d_i`.
    pub fn total_degree(&self) -> u32 {
        self.degrees().iter().sum()
    }

    /// `dim X = N - R`.
    pub fn dim_x(&self) -> i64 {
        self.big_n() as i64 - self.r() as i64
    }

    /// Fano slack `N + 1 - d`.
    pub fn fano_slack(&self) -> i64 {
        self.nvars() as i64 - self.total_degree() as i64
    }

    pub fn is_weighted(&self) -> bool {
        self.weights.iter().any(|&w| w != 1)
    }

    /// Structural validation. Empty diagnostics means the spec is usable.
    pub fn validate(&self) -> Vec<String> {
        let mut diags = Vec::new();
        if self.weights.is_empty() || self.weights.iter().any(|&w| w == 0) {
            diags.push("weights must be positive integers".to_string());
        }
        if self.var_names.len() != self.nvars() {
            diags.push(format!(
                "declared {} variable names for {} weights",
                self.var_names.len(),
                self.nvars()
            ));
        }
        let mut sorted = self.var_names.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != self.var_names.len() {
            diags.push("variable names must be distinct".to_string());
        }
        if self.forms.is_empty() {
            diags.push("at least one defining form is required".to_string());
        }
        for (i, f) in self.forms.iter().enumerate() {
            if f.nvars() != self.nvars() {
                diags.push(format!("form {} uses {} variables, ambient has {}", i + 1, f.nvars(), self.nvars()));
            }
            if f.weights() != self.weights {
                diags.push(format!("form {} was built for different weights", i + 1));
            }
            if f.is_zero() {
                diags.push(format!("form {} is zero (degree d_{} >= 1 required)", i + 1, i + 1));
            }
            for (expo, c) in f.terms() {
                if c.field_id() != self.field.id() {
                    diags.push(format!(
                        "form {} has coefficients from a different field (monomial {})",
                        i + 1,
                        forms::render_monomial(expo, &self.var_names)
                    ));
                    break;
                }
            }
        }
        if self.r() >= self.big_n() {
            diags.push(format!(
                "R = {} forms in P^{} give dim X = {} <= 0; R < N is required",
                self.r(),
                self.big_n(),
                self.dim_x()
            ));
        }
        diags
    }

    pub fn ensure_valid(&self) -> Result<(), VarietyError> {
        let diags = self.validate();
        if diags.is_empty() {
            Ok(())
        } else {
            Err(VarietyError::Invalid(diags.join("; ")))
        }
    }

    /// `C = prod d_i^{d_i}`.
    pub fn bezout_constant(&self) -> BigUint {
        let mut c = BigUint::from(1u32);
        for d in self.degrees() {
            c *= BigUint::from(d).pow(d);
        }
        c
    }

    /// Degree bound for the affine cone of the coefficient variety:
    /// `prod_i d_i^{d_i e + 1}`.
    pub fn cone_degree_bound(&self, e: u32) -> BigUint {
        let mut c = BigUint::from(1u32);
        for d in self.degrees() {
            c *= BigUint::from(d).pow(d * e + 1);
        }
        c
    }

    /// Expected dimensions for degree-`e` counting.
    pub fn expected_dims(&self, e: u32) -> Result<ExpectedDims, VarietyError> {
        let slack = self.fano_slack();
        if slack < 1 {
            return Err(VarietyError::SlackTooSmall { needs: 1, got: slack });
        }
        Ok(ExpectedDims {
            mor: e as i64 * slack + self.dim_x(),
            fibre: e as i64 * slack - 2,
        })
    }

    /// Threshold degree `e_0 = ceil((d - R) / (N + 1 - d))`, with the
    /// induction-base inequality check `(e_0+1)(N+1-d) - 1 >= N - R`.
    pub fn threshold_degree(&self) -> Result<ThresholdDegree, VarietyError> {
        let slack = self.fano_slack();
        if slack < 1 {
            return Err(VarietyError::SlackTooSmall { needs: 1, got: slack });
        }
        let num = self.total_degree() as i64 - self.r() as i64;
        let e0 = if num <= 0 { 0 } else { (num + slack - 1) / slack };
        let inequality_holds = (e0 + 1) * slack - 1 >= self.dim_x();
        Ok(ThresholdDegree {
            e0: e0 as u32,
            inequality_holds,
        })
    }

    /// The coefficient system of `F_i(x(t))`: per form, the `d_i e + 1`
    /// forms in the section-coefficient variables.
    pub fn fij_system(&self, e: u32) -> (CoeffLayout, Vec<Vec<MultiForm>>) {
        forms::fij_system(&self.field, &self.weights, &self.forms, e)
    }

    /// Base change to the canonical degree-`m` extension.
    pub fn base_change(&self, m: u32) -> Result<(VarietySpec, Embedding), VarietyError> {
        if m == 1 {
            let emb = Embedding::identity(&self.field);
            return Ok((self.clone(), emb));
        }
        let ext = Arc::new(self.field.auto_extension(m)?);
        let emb = Embedding::new(&self.field, &ext)?;
        let forms = self.forms.iter().map(|f| f.embed(&emb)).collect();
        Ok((
            VarietySpec {
                field: ext,
                weights: self.weights.clone(),
                var_names: self.var_names.clone(),
                forms,
                label: format!("{}/ext{}", self.label, m),
                },
            emb,
        ))
    }

    /// Enumerate the canonical representatives of the points of the ambient
    /// projective space over the spec's own field (all weights 1 only).
    pub fn ambient_points(&self) -> Vec<Vec<FqElem>> {
        assert!(!self.is_weighted());
        let n = self.nvars();
        let field = &self.field;
        let mut out = Vec::new();
        for pivot in 0..n {
            let free = n - pivot - 1;
            let count = (field.q() as u64).pow(free as u32);
            for idx in 0..count {
                let mut v = vec![field.zero(); n];
                v[pivot] = field.one();
                let mut rest = idx;
                for slot in 0..free {
                    v[pivot + 1 + slot] = field.from_repr((rest % field.q() as u64) as u32);
                    rest /= field.q() as u64;
                }
                out.push(v);
            }
        }
        out
    }

    /// Points of `X` over the spec's own field (all weights 1 only).
    pub fn points_on_x(&self) -> Vec<Vec<FqElem>> {
        self.ambient_points()
            .into_iter()
            .filter(|p| {
                self.forms
                    .iter()
                    .all(|f| f.evaluate_unchecked(&self.field, p).is_zero())
            })
            .collect()
    }

    /// Direct point count of `X` over the spec's own field, by enumerating
    /// nonzero cone vectors and keeping the lexicographically least member of
    /// each weighted scalar orbit. Works for weighted ambients; independent
    /// of the section-counting machinery.
    pub fn count_points_direct(&self) -> u64 {
        let field = &self.field;
        let q = field.q() as u64;
        let n = self.nvars();
        let total = q.pow(n as u32);
        let mut count = 0u64;
        let mut v = vec![field.zero(); n];
        let mut scaled = vec![0u32; n];
        'vectors: for idx in 1..total {
            let mut rest = idx;
            for slot in (0..n).rev() {
                v[slot] = field.from_repr((rest % q) as u32);
                rest /= q;
            }
            if !self
                .forms
                .iter()
                .all(|f| f.evaluate_unchecked(field, &v).is_zero())
            {
                continue;
            }
            // Canonical iff no scaling is lexicographically smaller.
            for lam in field.elements().skip(1) {
                for i in 0..n {
                    scaled[i] = field.mul(field.pow(lam, self.weights[i] as u64), v[i]).repr();
                }
                let orig: Vec<u32> = v.iter().map(|c| c.repr()).collect();
                if scaled < orig {
                    continue 'vectors;
                }
            }
            count += 1;
        }
        count
    }

    /// Is the given cone point a smooth point of `X`? (Jacobian rank `R`.)
    pub fn is_smooth_at(&self, point: &[FqElem]) -> bool {
        let rows: Vec<Vec<FqElem>> = self
            .forms
            .iter()
            .map(|f| {
                (0..self.nvars())
                    .map(|i| {
                        f.partial_derivative(&self.field, i)
                            .evaluate_unchecked(&self.field, point)
                    })
                    .collect()
            })
            .collect();
        Matrix::from_rows(&rows).rank(&self.field) == self.r()
    }

    /// Sampled smoothness scan: all singular `F_{q^m}`-points for `m` up to
    /// `m_max`. An empty result is only a partial certificate. For weighted
    /// ambients the scan covers the affine charts of the weight-1
    /// coordinates, i.e. the locus where not all weight-1 coordinates vanish.
    pub fn smoothness_scan(&self, m_max: u32, budget: u64) -> Result<Vec<SingularPoint>, VarietyError> {
        let mut out = Vec::new();
        for m in 1..=m_max {
            let (ext_spec, _) = self.base_change(m)?;
            let q = ext_spec.field.q() as u64;
            let cost = q
                .checked_pow(self.big_n() as u32)
                .and_then(|c| c.checked_mul(self.nvars() as u64));
            match cost {
                Some(c) if c <= budget => {}
                _ => {
                    return Err(VarietyError::BudgetExceeded {
                        cost: format!(
                            "smoothness scan at m={m} needs ~q^N = {q}^{} point evaluations (budget {budget})",
                            self.big_n()
                        ),
                    })
                }
            }
            if ext_spec.is_weighted() {
                ext_spec.scan_weighted_charts(m, &mut out);
            } else {
                for p in ext_spec.points_on_x() {
                    if !ext_spec.is_smooth_at(&p) {
                        out.push(SingularPoint { m, coords: p });
                    }
                }
            }
        }
        Ok(out)
    }

    /// Weighted chart scan: for each weight-1 coordinate `j`, the chart
    /// `x_j = 1` with every earlier weight-1 coordinate zero. The affine
    /// Jacobian leaves out the pinned coordinate.
    fn scan_weighted_charts(&self, m: u32, out: &mut Vec<SingularPoint>) {
        let field = &self.field;
        let n = self.nvars();
        let weight1: Vec<usize> = (0..n).filter(|&i| self.weights[i] == 1).collect();
        let partials: Vec<Vec<MultiForm>> = self
            .forms
            .iter()
            .map(|f| (0..n).map(|i| f.partial_derivative(field, i)).collect())
            .collect();
        for (chart_pos, &j) in weight1.iter().enumerate() {
            let pinned_zero: Vec<usize> = weight1[..chart_pos].to_vec();
            let free: Vec<usize> = (0..n).filter(|i| *i != j && !pinned_zero.contains(i)).collect();
            let count = (field.q() as u64).pow(free.len() as u32);
            let mut point = vec![field.zero(); n];
            point[j] = field.one();
            for idx in 0..count {
                let mut rest = idx;
                for &slot in &free {
                    point[slot] = field.from_repr((rest % field.q() as u64) as u32);
                    rest /= field.q() as u64;
                }
                if !self
                    .forms
                    .iter()
                    .all(|f| f.evaluate_unchecked(field, &point).is_zero())
                {
                    continue;
                }
                // Affine Jacobian in the chart: all coordinates except x_j.
                let rows: Vec<Vec<FqElem>> = partials
                    .iter()
                    .map(|row| {
                        (0..n)
                            .filter(|&i| i != j)
                            .map(|i| row[i].evaluate_unchecked(field, &point))
                            .collect()
                    })
                    .collect();
                if Matrix::from_rows(&rows).rank(field) < self.r() {
                    out.push(SingularPoint {
                        m,
                        coords: point.clone(),
                    });
                }
            }
        }
    }
}

// ----- del Pezzo presets -----

/// An anticanonical del Pezzo model of the standard shape for its degree.
pub struct DelPezzoModel {
    pub degree: u8,
    pub spec: VarietySpec,
}

impl DelPezzoModel {
    /// Check that a spec has the catalogue shape for the claimed dP degree.
    pub fn new(degree: u8, spec: VarietySpec) -> Result<DelPezzoModel, VarietyError> {
        let shape_err = |expected: &str, spec: &VarietySpec| VarietyError::WrongShape {
            expected: expected.to_string(),
            got: format!(
                "weights {:?}, {} forms of degrees {:?}",
                spec.weights,
                spec.r(),
                spec.degrees()
            ),
        };
        let ok = match degree {
            3 => spec.weights == [1, 1, 1, 1] && spec.degrees() == [3],
            4 => spec.weights == [1; 5] && spec.degrees() == [2, 2],
            5 => spec.weights == [1; 6] && spec.degrees() == [2; 5],
            2 => spec.weights == [2, 1, 1, 1] && spec.degrees() == [4],
            1 => spec.weights == [3, 2, 1, 1] && spec.degrees() == [6],
            _ => false,
        };
        if !ok {
            let expected = match degree {
                3 => "a cubic surface in P^3",
                4 => "two quadrics in P^4",
                5 => "five quadrics in P^5",
                2 => "a quartic in P(2,1,1,1)",
                1 => "a sextic in P(3,2,1,1)",
                _ => "dP degree in 1..=5",
            };
            return Err(shape_err(expected, &spec));
        }
        Ok(DelPezzoModel { degree, spec })
    }
}

/// Names of the built-in presets.
pub const PRESET_NAMES: [&str; 4] = ["dp1", "dp2", "dp3-fermat", "dp4-default"];

/// Instantiate a built-in preset over the given field.
pub fn preset(name: &str, field: Arc<Field>) -> Result<VarietySpec, VarietyError> {
    let make = |weights: &[u32],
                names: &[&str],
                form_texts: &[&str],
                label: &str,
                field: Arc<Field>|
     -> Result<VarietySpec, VarietyError> {
        let var_names: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        let forms = form_texts
            .iter()
            .map(|t| parse_form(t, &field, &var_names, weights))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(VarietySpec::new(
            field,
            weights.to_vec(),
            var_names,
            forms,
            label.to_string(),
        ))
    };
    match name {
        "dp3-fermat" => make(
            &[1, 1, 1, 1],
            &["x0", "x1", "x2", "x3"],
            &["x0^3 + x1^3 + x2^3 + x3^3"],
            "dp3-fermat",
            field,
        ),
        "dp4-default" => {
            // Q1 is the full square sum; Q2 depends on the characteristic so
            // that the pair is a smooth intersection (the pencil has five
            // distinct degenerate members for p >= 5; the p=2 and p=3 pairs
            // were verified by an exact singular-scheme computation).
            let names = ["x0", "x1", "x2", "x3", "x4"];
            match field.p() {
                2 => make(
                    &[1; 5],
                    &names,
                    &["x0*x1 + x2*x3 + x4^2", "x0*x3 + x0*x4 + x1*x2 + x2^2 + x3*x4"],
                    "dp4-default",
                    field,
                ),
                3 => make(
                    &[1; 5],
                    &names,
                    &[
                        "x0^2 + x1^2 + x2^2 + x3^2 + x4^2",
                        "2*x0*x1 + 2*x1*x2 + 2*x2*x3 + 2*x3*x4 + x4^2",
                    ],
                    "dp4-default",
                    field,
                ),
                _ => make(
                    &[1; 5],
                    &names,
                    &[
                        "x0^2 + x1^2 + x2^2 + x3^2 + x4^2",
                        "x1^2 + 2*x2^2 + 3*x3^2 + 4*x4^2",
                    ],
                    "dp4-default",
                    field,
                ),
            }
        }
        "dp2" => make(
            &[2, 1, 1, 1],
            &["y", "u", "v", "w"],
            &["y^2 - u^4 - v^4 - w^4"],
            "dp2-default",
            field,
        ),
        "dp1" => make(
            &[3, 2, 1, 1],
            &["x", "y", "u", "v"],
            &["x^2 - y^3 - u^6 - v^6"],
            "dp1-default",
            field,
        ),
        "dp5" => Err(VarietyError::PresetUnavailable {
            preset: "dp5".to_string(),
            reason: "a degree-5 anticanonical model has no canonical defaults; supply the five quadrics yourself".to_string(),
        }),
        other => Err(VarietyError::UnknownPreset(other.to_string())),
    }
}

// ----- spec files -----

/// Parse the structured spec-file format:
///
/// ```text
/// label = my-surface
/// field = p=7
/// preset = dp3-fermat        # either a preset...
/// weights = [1,1,1,1]        # ...or explicit geometry
/// vars = [x0,x1,x2,x3]
/// form = x0^3 + x1^3 + x2^3 + x3^3
/// ```
///
/// `form` lines repeat, one per defining form. `#` starts a comment.
pub fn parse_spec_file(text: &str) -> Result<VarietySpec, VarietyError> {
    let mut label = None;
    let mut field_lit = None;
    let mut preset_name = None;
    let mut weights: Option<Vec<u32>> = None;
    let mut vars: Option<Vec<String>> = None;
    let mut form_texts: Vec<String> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: &str| VarietyError::SpecFile {
            line: lineno + 1,
            msg: msg.to_string(),
        };
        let (key, value) = line.split_once('=').ok_or_else(|| err("expected `key = value`"))?;
        let value = value.trim();
        match key.trim() {
            "label" => label = Some(value.to_string()),
            "field" => field_lit = Some(value.to_string()),
            "preset" => preset_name = Some(value.to_string()),
            "weights" => {
                let inner = value
                    .strip_prefix('[')
                    .and_then(|v| v.strip_suffix(']'))
                    .ok_or_else(|| err("weights must look like [1,1,1,1]"))?;
                let parsed: Result<Vec<u32>, _> =
                    inner.split(',').map(|w| w.trim().parse::<u32>()).collect();
                weights = Some(parsed.map_err(|_| err("weights must be positive integers"))?);
            }
            "vars" => {
                let inner = value
                    .strip_prefix('[')
                    .and_then(|v| v.strip_suffix(']'))
                    .ok_or_else(|| err("vars must look like [x0,x1,x2]"))?;
                vars = Some(inner.split(',').map(|v| v.trim().to_string()).collect());
            }
            "form" => form_texts.push(value.to_string()),
            other => return Err(err(&format!("unknown key `{other}`"))),
        }
    }
    let field_lit = field_lit.ok_or(VarietyError::SpecFile {
        line: 0,
        msg: "missing `field =` entry".to_string(),
    })?;
    let field = Arc::new(crate::field::parse_field_literal(&field_lit)?);
    if let Some(name) = preset_name {
        let mut spec = preset(&name, field)?;
        if let Some(label) = label {
            spec.label = label;
        }
        return Ok(spec);
    }
    let weights = weights.ok_or(VarietyError::SpecFile {
        line: 0,
        msg: "missing `weights =` (or `preset =`)".to_string(),
    })?;
    let var_names = vars.unwrap_or_else(|| default_var_names(weights.len()));
    if var_names.len() != weights.len() {
        return Err(VarietyError::SpecFile {
            line: 0,
            msg: format!("{} vars for {} weights", var_names.len(), weights.len()),
        });
    }
    let forms = form_texts
        .iter()
        .map(|t| parse_form(t, &field, &var_names, &weights))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(VarietySpec::new(
        field,
        weights,
        var_names,
        forms,
        label.unwrap_or_else(|| "unlabeled".to_string()),
    ))
}

/// Canonical rendering of a spec; stable under a parse/render round trip.
pub fn render_spec_file(spec: &VarietySpec) -> String {
    let mut out = String::new();
    out.push_str(&format!("label = {}\n", spec.label));
    out.push_str(&format!("field = {}\n", spec.field.literal()));
    let weights: Vec<String> = spec.weights.iter().map(|w| w.to_string()).collect();
    out.push_str(&format!("weights = [{}]\n", weights.join(",")));
    out.push_str(&format!("vars = [{}]\n", spec.var_names.join(",")));
    for f in &spec.forms {
        out.push_str(&format!("form = {}\n", f.render(&spec.field, &spec.var_names)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fermat_over(p: u32) -> VarietySpec {
        preset("dp3-fermat", Arc::new(Field::prime(p).unwrap())).unwrap()
    }

    #[test]
    fn validate_good_and_bad_specs() {
        let spec = fermat_over(7);
        assert!(spec.validate().is_empty());

        // R = N: zero-dimensional, rejected.
        let field = Arc::new(Field::prime(7).unwrap());
        let names = default_var_names(3);
        let forms = vec![
            parse_form("x0^2", &field, &names, &[1, 1, 1]).unwrap(),
            parse_form("x1^2", &field, &names, &[1, 1, 1]).unwrap(),
        ];
        let bad = VarietySpec::new(field, vec![1, 1, 1], names, forms, "bad".to_string());
        assert!(bad.validate().iter().any(|d| d.contains("R < N")));
    }

    #[test]
    fn closed_form_constants_match_tables() {
        // Exhaustive table test for e = 1..10 over all presets.
        let f7 = Arc::new(Field::prime(7).unwrap());
        let cases: Vec<(VarietySpec, u64, Vec<u32>)> = vec![
            (preset("dp3-fermat", f7.clone()).unwrap(), 27, vec![3]),
            (preset("dp4-default", f7.clone()).unwrap(), 16, vec![2, 2]),
            (preset("dp2", f7.clone()).unwrap(), 256, vec![4]),
            (preset("dp1", f7.clone()).unwrap(), 46656, vec![6]),
        ];
        for (spec, c_expected, degs) in cases {
            assert_eq!(spec.degrees(), degs);
            assert_eq!(spec.bezout_constant(), BigUint::from(c_expected));
            for e in 1..=10u32 {
                let mut expected = BigUint::from(1u32);
                for &d in &degs {
                    expected *= BigUint::from(d).pow(d * e + 1);
                }
                assert_eq!(spec.cone_degree_bound(e), expected);
            }
        }
        // dP5 shape: five quadrics, C = 1024.
        let names = default_var_names(6);
        let quadric_texts = ["x0*x1", "x1*x2", "x2*x3", "x3*x4", "x4*x5"];
        let forms: Vec<MultiForm> = quadric_texts
            .iter()
            .map(|t| parse_form(t, &f7, &names, &[1; 6]).unwrap())
            .collect();
        let dp5 = VarietySpec::new(f7, vec![1; 6], names, forms, "dp5-shape".to_string());
        assert_eq!(dp5.bezout_constant(), BigUint::from(1024u32));
    }

    #[test]
    fn expected_dims_and_threshold() {
        let f7 = Arc::new(Field::prime(7).unwrap());
        // Cubic threefold in P^4.
        let names = default_var_names(5);
        let cubic = parse_form(
            "x0^3 + x1^3 + x2^3 + x3^3 + x4^3",
            &f7,
            &names,
            &[1; 5],
        )
        .unwrap();
        let threefold = VarietySpec::new(f7.clone(), vec![1; 5], names, vec![cubic], "c3".into());
        let dims = threefold.expected_dims(1).unwrap();
        assert_eq!(dims.mor, 5);
        assert_eq!(dims.fibre, 0);
        let th = threefold.threshold_degree().unwrap();
        assert_eq!(th.e0, 1);
        assert!(th.inequality_holds);

        // Two quadrics in P^5.
        let names6 = default_var_names(6);
        let q1 = parse_form("x0^2+x1^2+x2^2+x3^2+x4^2+x5^2", &f7, &names6, &[1; 6]).unwrap();
        let q2 = parse_form(
            "x0^2+2*x1^2+3*x2^2+4*x3^2+5*x4^2+6*x5^2",
            &f7,
            &names6,
            &[1; 6],
        )
        .unwrap();
        let tq = VarietySpec::new(f7.clone(), vec![1; 6], names6, vec![q1, q2], "q2".into());
        assert_eq!(tq.expected_dims(2).unwrap().mor, 7);
        assert_eq!(tq.threshold_degree().unwrap().e0, 1);

        // Cubic surface: slack 1, e0 = ceil(2/1) = 2.
        let surf = fermat_over(7);
        let th = surf.threshold_degree().unwrap();
        assert_eq!(th.e0, 2);
        assert!(th.inequality_holds);
    }

    #[test]
    fn smoothness_scan_examples() {
        // Fermat cubic surface over F_7: no singular point for m <= 2.
        let spec = fermat_over(7);
        let sing = spec.smoothness_scan(2, 1 << 34).unwrap();
        assert!(sing.is_empty());

        // x3^3 - x0 x1 x2: singular at the coordinate points like (1:0:0:0).
        let field = Arc::new(Field::prime(7).unwrap());
        let names = default_var_names(4);
        let f = parse_form("x3^3 - x0*x1*x2", &field, &names, &[1; 4]).unwrap();
        let spec = VarietySpec::new(field.clone(), vec![1; 4], names, vec![f], "cone".into());
        let sing = spec.smoothness_scan(1, 1 << 34).unwrap();
        let e0: Vec<u32> = vec![1, 0, 0, 0];
        assert!(sing
            .iter()
            .any(|s| s.coords.iter().map(|c| c.repr()).collect::<Vec<_>>() == e0));

        // Double hyperplane: every point singular.
        let names3 = default_var_names(3);
        let f = parse_form("x0^2", &field, &names3, &[1; 3]).unwrap();
        let spec = VarietySpec::new(field, vec![1; 3], names3, vec![f], "double".into());
        let sing = spec.smoothness_scan(1, 1 << 34).unwrap();
        assert_eq!(sing.len(), spec.points_on_x().len());
        assert_eq!(sing.len(), 8); // the points of the hyperplane x0 = 0 in P^2
    }

    #[test]
    fn fermat_is_singular_in_characteristic_three() {
        let spec = fermat_over(3);
        let sing = spec.smoothness_scan(1, 1 << 34).unwrap();
        assert!(!sing.is_empty());
    }

    #[test]
    fn weighted_presets_scan_clean() {
        let f3 = Arc::new(Field::prime(3).unwrap());
        let dp2 = preset("dp2", f3.clone()).unwrap();
        assert!(dp2.smoothness_scan(2, 1 << 34).unwrap().is_empty());
        let f7 = Arc::new(Field::prime(7).unwrap());
        let dp1 = preset("dp1", f7).unwrap();
        assert!(dp1.smoothness_scan(1, 1 << 34).unwrap().is_empty());
    }

    #[test]
    fn dp4_presets_scan_clean_at_small_primes() {
        for p in [2u32, 3, 5, 7] {
            let field = Arc::new(Field::prime(p).unwrap());
            let spec = preset("dp4-default", field).unwrap();
            let m_max = if p == 2 { 3 } else { 2 };
            let sing = spec.smoothness_scan(m_max, 1 << 34).unwrap();
            assert!(sing.is_empty(), "dp4-default singular at p={p}: {sing:?}");
        }
    }

    #[test]
    fn spec_file_round_trip() {
        let text = "label = fermat\nfield = p=7\nweights = [1,1,1,1]\nvars = [x0,x1,x2,x3]\nform = x0^3 + x1^3 + x2^3 + x3^3\n";
        let spec = parse_spec_file(text).unwrap();
        assert_eq!(render_spec_file(&spec), text);
        let via_preset = parse_spec_file("field = p=7\npreset = dp3-fermat\n").unwrap();
        assert_eq!(
            via_preset.forms[0].render(&via_preset.field, &via_preset.var_names),
            spec.forms[0].render(&spec.field, &spec.var_names)
        );
    }

    #[test]
    fn base_change_preserves_form_shape() {
        let spec = fermat_over(7);
        let (ext, emb) = spec.base_change(2).unwrap();
        assert_eq!(ext.field.q(), 49);
        assert_eq!(ext.forms[0].terms().len(), 4);
        // Coefficients map through the embedding.
        assert_eq!(ext.forms[0].terms()[0].1, emb.map(spec.forms[0].terms()[0].1));
    }

    #[test]
    fn dp5_preset_requires_user_forms() {
        let f7 = Arc::new(Field::prime(7).unwrap());
        assert!(matches!(
            preset("dp5", f7),
            Err(VarietyError::PresetUnavailable { .. })
        ));
    }
}
