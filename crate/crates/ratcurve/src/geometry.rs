//! Pointwise line geometry of cubic hypersurfaces and quadric pairs: the
//! lines contained in `X`, normal forms at smooth points, the Eckardt cone
//! criterion, Eckardt scans over extensions, and the rank dichotomy that
//! classifies lines by their normal-bundle type.

use rayon::prelude::*;
use thiserror::Error;

use crate::field::{Embedding, Field, FieldError, FqElem};
use crate::forms::{FormsError, MultiForm};
use crate::matrix::Matrix;
use crate::variety::{VarietyError, VarietySpec};

#[derive(Debug, Error)]
pub enum GeoError {
    #[error("operation requires an ordinary projective ambient (all weights 1)")]
    WeightedAmbient,
    #[error("line-space budget exceeded: {cost}")]
    Budget { cost: String },
    #[error("point does not lie on the variety")]
    NotOnVariety,
    #[error("point is a singular point of the variety")]
    SingularPoint,
    #[error("operation supports {expected}, got {got}")]
    WrongShape { expected: String, got: String },
    #[error("point does not lie on the hyperplane")]
    NotOnHyperplane,
    #[error("hyperplane section is singular at a sampled point; no claim is made")]
    SectionSingular,
    #[error("line is not contained in the variety")]
    LineNotOnVariety,
    #[error("restricted Jacobian has rank {rank}, which contradicts smoothness along the line")]
    RankAnomaly { rank: usize },
    #[error(transparent)]
    Forms(#[from] FormsError),
    #[error(transparent)]
    Variety(#[from] VarietyError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A line in `P^N` over `F_{q^m}`, stored as the reduced row-echelon basis of
/// its spanning plane; two equal lines have identical representations.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct LineRep {
    pub m: u32,
    pub rows: [Vec<FqElem>; 2],
}

impl LineRep {
    /// Canonicalize a spanning pair.
    pub fn from_span(
        field: &Field,
        p: &[FqElem],
        q: &[FqElem],
        m: u32,
    ) -> Result<LineRep, GeoError> {
        let (rref, pivots) = Matrix::from_rows(&[p.to_vec(), q.to_vec()]).rref(field);
        if pivots.len() != 2 {
            return Err(GeoError::Forms(FormsError::DependentPoints));
        }
        Ok(LineRep {
            m,
            rows: [rref.row(0).to_vec(), rref.row(1).to_vec()],
        })
    }

    /// Do all defining forms of the spec vanish on this line?
    pub fn lies_on(&self, spec: &VarietySpec) -> bool {
        spec.forms.iter().all(|f| {
            f.restrict_to_line(&spec.field, &self.rows[0], &self.rows[1])
                .map(|b| b.is_zero())
                .unwrap_or(false)
        })
    }

    /// Is the (projective) point on this line?
    pub fn contains_point(&self, field: &Field, x: &[FqElem]) -> bool {
        let m = Matrix::from_rows(&[self.rows[0].clone(), self.rows[1].clone(), x.to_vec()]);
        m.rank(field) == 2
    }

    /// Base change through an embedding, keeping the representation in RREF.
    pub fn embed(&self, emb: &Embedding, m: u32) -> LineRep {
        LineRep {
            m,
            rows: [
                self.rows[0].iter().map(|&c| emb.map(c)).collect(),
                self.rows[1].iter().map(|&c| emb.map(c)).collect(),
            ],
        }
    }
}

/// Number of lines in `P^n` over a field with `q` elements (the Gaussian
/// binomial `[n+1 choose 2]_q`), used for budget checks.
pub fn line_space_size(q: u64, n: usize) -> Option<u128> {
    let mut total: u128 = 0;
    for j1 in 0..n {
        for j2 in (j1 + 1)..=n {
            let free = (n - j1 - 1) + (n - j2);
            let cell = (q as u128).checked_pow(free as u32)?;
            total = total.checked_add(cell)?;
        }
    }
    Some(total)
}

/// All lines over `F_{q^m}` contained in `X`, each exactly once, in a
/// deterministic order (RREF cell decomposition order).
pub fn enumerate_lines(
    spec: &VarietySpec,
    m: u32,
    budget: u64,
) -> Result<Vec<LineRep>, GeoError> {
    if spec.is_weighted() {
        return Err(GeoError::WeightedAmbient);
    }
    let (ext, _) = spec.base_change(m)?;
    let field = &*ext.field;
    let q = field.q() as u64;
    let n = ext.big_n();
    match line_space_size(q, n) {
        Some(size) if size <= budget as u128 => {}
        _ => {
            return Err(GeoError::Budget {
                cost: format!(
                    "P^{n} over a field with {q} elements has ~{} lines (budget {budget})",
                    line_space_size(q, n)
                        .map(|s| s.to_string())
                        .unwrap_or_else(|| "overflow".to_string())
                ),
            })
        }
    }
    let mut out = Vec::new();
    // RREF cells: pivot columns j1 < j2; row0 has free entries in the columns
    // after j1 other than j2, row1 in the columns after j2.
    for j1 in 0..n {
        for j2 in (j1 + 1)..=n {
            let free0: Vec<usize> = ((j1 + 1)..=n).filter(|&c| c != j2).collect();
            let free1: Vec<usize> = ((j2 + 1)..=n).collect();
            let nfree = free0.len() + free1.len();
            let count = q.pow(nfree as u32);
            let mut cell: Vec<LineRep> = (0..count)
                .into_par_iter()
                .filter_map(|idx| {
                    let mut row0 = vec![field.zero(); n + 1];
                    let mut row1 = vec![field.zero(); n + 1];
                    row0[j1] = field.one();
                    row1[j2] = field.one();
                    let mut rest = idx;
                    for &c in &free0 {
                        row0[c] = field.from_repr((rest % q) as u32);
                        rest /= q;
                    }
                    for &c in &free1 {
                        row1[c] = field.from_repr((rest % q) as u32);
                        rest /= q;
                    }
                    let line = LineRep {
                        m,
                        rows: [row0, row1],
                    };
                    line.lies_on(&ext).then_some(line)
                })
                .collect();
            out.append(&mut cell);
        }
    }
    Ok(out)
}

/// Normal form of the defining equations at a smooth point moved to
/// `(1:0:...:0)`.
pub struct PointNormalForm {
    /// The point, in the coordinates of the (base-changed) spec.
    pub point: Vec<FqElem>,
    /// Change of variables `M` with normalized form(s) `F o M^{-1}`.
    pub change: Matrix,
    /// `M^{-1}`: its columns are the adapted basis (point, transversal,
    /// tangent frame).
    pub inv_change: Matrix,
    pub kind: NormalKind,
}

pub enum NormalKind {
    /// `F o M^{-1} = x0^2 x1 + x0 q + c` with `q` quadratic and `c` cubic in
    /// `x1..xN`.
    Cubic { q: MultiForm, c: MultiForm },
    /// `Q_i o M^{-1} = x0 x_i + q_i` with `q_i` quadratic in `x1..xN`.
    QuadricPair { q1: MultiForm, q2: MultiForm },
}

/// Shape gate for the normal-form machinery: one cubic, or exactly two
/// quadrics.
fn normal_form_shape(spec: &VarietySpec) -> Result<bool, GeoError> {
    if spec.is_weighted() {
        return Err(GeoError::WeightedAmbient);
    }
    let degs = spec.degrees();
    if degs == [3] {
        Ok(true)
    } else if degs == [2, 2] {
        Ok(false)
    } else {
        Err(GeoError::WrongShape {
            expected: "a single cubic or exactly two quadrics".to_string(),
            got: format!("degrees {degs:?}"),
        })
    }
}

/// Build the adapted basis at a smooth point and return the normal form. The
/// construction is deterministic: pivots are chosen lexicographically.
pub fn normalize_at_point(
    spec: &VarietySpec,
    x: &[FqElem],
) -> Result<PointNormalForm, GeoError> {
    let is_cubic = normal_form_shape(spec)?;
    let field = &*spec.field;
    let n1 = spec.nvars();
    if !spec
        .forms
        .iter()
        .all(|f| f.evaluate_unchecked(field, x).is_zero())
    {
        return Err(GeoError::NotOnVariety);
    }
    if !spec.is_smooth_at(x) {
        return Err(GeoError::SingularPoint);
    }
    // Gradient rows at x.
    let grads: Vec<Vec<FqElem>> = spec
        .forms
        .iter()
        .map(|f| {
            (0..n1)
                .map(|i| f.partial_derivative(field, i).evaluate_unchecked(field, x))
                .collect()
        })
        .collect();
    let r = grads.len();
    // Transversal columns b_1..b_r with grad_i . b_j = delta_ij: solve
    // G^T-free: pick the solution of G b = e_j with deterministic pivoting.
    let g = Matrix::from_rows(&grads);
    let mut cols: Vec<Vec<FqElem>> = vec![x.to_vec()];
    for j in 0..r {
        let mut rhs = vec![field.zero(); r];
        rhs[j] = field.one();
        let b = g.solve(field, &rhs).expect("smooth point has full-rank Jacobian");
        cols.push(b);
    }
    // Tangent frame: kernel vectors of G extending x (x is in the kernel by
    // the Euler identity on X).
    let kernel = g.kernel_basis(field);
    let mut rows_so_far: Vec<Vec<FqElem>> = vec![x.to_vec()];
    let mut tangent: Vec<Vec<FqElem>> = Vec::new();
    for v in kernel {
        if tangent.len() == n1 - 1 - r {
            break;
        }
        rows_so_far.push(v.clone());
        if Matrix::from_rows(&rows_so_far).rank(field) == rows_so_far.len() {
            tangent.push(v);
        } else {
            rows_so_far.pop();
        }
    }
    cols.extend(tangent);
    let inv_change = Matrix::from_cols(field, &cols);
    let change = inv_change
        .inverse(field)
        .expect("adapted basis is invertible");
    // Normalized forms G_i(y) = F_i(B y).
    let normalized: Vec<MultiForm> = spec
        .forms
        .iter()
        .map(|f| f.substitute_matrix(field, &inv_change))
        .collect::<Result<_, _>>()?;
    let kind = if is_cubic {
        let parts = normalized[0].parts_by_var_degree(field, 0);
        let q = parts
            .get(&1)
            .cloned()
            .unwrap_or_else(|| MultiForm::zero(normalized[0].weights()));
        let c = parts
            .get(&0)
            .cloned()
            .unwrap_or_else(|| MultiForm::zero(normalized[0].weights()));
        debug_assert!(parts.get(&3).is_none());
        NormalKind::Cubic { q, c }
    } else {
        let extract = |idx: usize| -> MultiForm {
            normalized[idx]
                .parts_by_var_degree(field, 0)
                .get(&0)
                .cloned()
                .unwrap_or_else(|| MultiForm::zero(normalized[idx].weights()))
        };
        NormalKind::QuadricPair {
            q1: extract(0),
            q2: extract(1),
        }
    };
    Ok(PointNormalForm {
        point: x.to_vec(),
        change,
        inv_change,
        kind,
    })
}

/// The Eckardt criterion for a cubic: the quadratic part of the normal form
/// vanishes identically once the tangent coordinate is cleared. A pure
/// coefficient check, exact in every characteristic.
pub fn eckardt_test(spec: &VarietySpec, x: &[FqElem]) -> Result<bool, GeoError> {
    let nf = normalize_at_point(spec, x)?;
    match &nf.kind {
        NormalKind::Cubic { q, .. } => Ok(q.set_var_zero(&spec.field, 1).is_zero()),
        NormalKind::QuadricPair { .. } => Err(GeoError::WrongShape {
            expected: "a single cubic".to_string(),
            got: "two quadrics".to_string(),
        }),
    }
}

/// Independent brute-force oracle: is `X ∩ T_x X` a cone with vertex `x`, as
/// witnessed by the rational points of the section? Used to certify the
/// coefficient test on scanned examples.
pub fn cone_oracle(spec: &VarietySpec, x: &[FqElem]) -> Result<bool, GeoError> {
    if normal_form_shape(spec)? {
        // fallthrough: single cubic
    } else {
        return Err(GeoError::WrongShape {
            expected: "a single cubic".to_string(),
            got: "two quadrics".to_string(),
        });
    }
    let field = &*spec.field;
    let f = &spec.forms[0];
    let grad: Vec<FqElem> = (0..spec.nvars())
        .map(|i| f.partial_derivative(field, i).evaluate_unchecked(field, x))
        .collect();
    for y in spec.points_on_x() {
        let tangent_val = grad
            .iter()
            .zip(&y)
            .fold(field.zero(), |acc, (&g, &yi)| field.add(acc, field.mul(g, yi)));
        if !tangent_val.is_zero() {
            continue;
        }
        // y in X ∩ T_x, distinct from x?
        if Matrix::from_rows(&[x.to_vec(), y.clone()]).rank(field) != 2 {
            continue;
        }
        // The full line xy must lie in X and in T_x.
        let on_x = f.restrict_to_line(field, x, &y)?.is_zero();
        let lin = MultiForm::from_terms(
            &vec![1; spec.nvars()],
            grad.iter()
                .enumerate()
                .filter(|(_, g)| !g.is_zero())
                .map(|(i, &g)| {
                    let mut expo = vec![0u16; spec.nvars()];
                    expo[i] = 1;
                    (expo, g)
                })
                .collect(),
        )
        .expect("linear form");
        let on_t = lin.restrict_to_line(field, x, &y)?.is_zero();
        if !(on_x && on_t) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// All Eckardt points of `X` defined over `F_{q^m}`.
pub fn eckardt_scan(
    spec: &VarietySpec,
    m: u32,
    budget: u64,
) -> Result<Vec<Vec<FqElem>>, GeoError> {
    let (ext, _) = spec.base_change(m)?;
    let q = ext.field.q() as u64;
    let cost = (0..=ext.big_n() as u32).map(|i| q.saturating_pow(i)).sum::<u64>();
    if cost > budget {
        return Err(GeoError::Budget {
            cost: format!("Eckardt scan needs ~{cost} point visits (budget {budget})"),
        });
    }
    let mut out = Vec::new();
    for x in ext.points_on_x() {
        if !ext.is_smooth_at(&x) {
            continue;
        }
        if eckardt_test(&ext, &x)? {
            out.push(x);
        }
    }
    Ok(out)
}

/// The Fano fibre at a point: the directions solving the normalized system,
/// and the certified lines through the point.
pub struct FibreReport {
    /// Solution directions in the normalized coordinates, as canonical
    /// representatives of the coordinate subspace they live in.
    pub directions: Vec<Vec<FqElem>>,
    pub lines: Vec<LineRep>,
}

/// Lines through a point of a cubic hypersurface or a smooth intersection of
/// two quadrics, over `F_{q^m}` (the point must already have coordinates in
/// that extension: pass the base-changed spec's field elements).
pub fn lines_through_point(
    spec: &VarietySpec,
    m: u32,
    x_ext: &[FqElem],
) -> Result<FibreReport, GeoError> {
    let (ext, _) = spec.base_change(m)?;
    let is_cubic = normal_form_shape(&ext)?;
    let field = &*ext.field;
    let nf = normalize_at_point(&ext, x_ext)?;
    let n1 = ext.nvars();
    // Directions live in P(F^{n1}/x) = {y_0 = 0}; the linear conditions of
    // the normal form pin the first r direction coordinates to zero.
    let pinned = if is_cubic { 1 } else { 2 };
    let conditions: Vec<MultiForm> = match &nf.kind {
        NormalKind::Cubic { q, c } => vec![q.clone(), c.clone()],
        NormalKind::QuadricPair { q1, q2 } => vec![q1.clone(), q2.clone()],
    };
    // Enumerate canonical representatives of the subspace
    // {y_0 = y_1 = .. = y_pinned = 0} of P^{n1-1}.
    let free = n1 - 1 - pinned;
    let q = field.q() as u64;
    let mut directions = Vec::new();
    let mut lines = Vec::new();
    for pivot in 0..free {
        let tail = free - pivot - 1;
        let count = q.pow(tail as u32);
        for idx in 0..count {
            let mut y = vec![field.zero(); n1];
            y[1 + pinned + pivot] = field.one();
            let mut rest = idx;
            for slot in 0..tail {
                y[1 + pinned + pivot + 1 + slot] = field.from_repr((rest % q) as u32);
                rest /= q;
            }
            if !conditions
                .iter()
                .all(|cond| cond.evaluate_unchecked(field, &y).is_zero())
            {
                continue;
            }
            // Back to the original coordinates; certify the actual line.
            let v = nf.inv_change.mul_vec(field, &y);
            let line = LineRep::from_span(field, x_ext, &v, m)?;
            if !line.lies_on(&ext) {
                // The normalized system is exact; failure here would be a bug.
                continue;
            }
            directions.push(y);
            lines.push(line);
        }
    }
    Ok(FibreReport { directions, lines })
}

/// The normal-bundle dichotomy for a line on a cubic hypersurface.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum LineType {
    TypeI,
    TypeII,
}

/// Classify a line by the rank of the restricted Jacobian: move `L` to
/// `{x2 = .. = xN = 0}` and read off, for each transverse coordinate, the
/// binary quadric `dF/dx_i` restricted to `L`; rank 3 is type I, rank 2 is
/// type II. Rank below 2 contradicts smoothness along the line and is
/// reported as an anomaly.
pub fn classify_line(spec: &VarietySpec, line: &LineRep) -> Result<LineType, GeoError> {
    if spec.degrees() != [3] {
        return Err(GeoError::WrongShape {
            expected: "a single cubic".to_string(),
            got: format!("degrees {:?}", spec.degrees()),
        });
    }
    if !line.lies_on(spec) {
        return Err(GeoError::LineNotOnVariety);
    }
    let field = &*spec.field;
    let n1 = spec.nvars();
    let basis = Matrix::complete_basis(field, &[line.rows[0].clone(), line.rows[1].clone()], &[]);
    // Columns of B are the basis; B's first two columns span L.
    let cols: Vec<Vec<FqElem>> = (0..n1).map(|i| basis.row(i).to_vec()).collect();
    let b = Matrix::from_cols(field, &cols);
    let g = spec.forms[0].substitute_matrix(field, &b)?;
    let mut rows = Vec::new();
    for i in 2..n1 {
        let partial = g.partial_derivative(field, i);
        // Restrict to the standard line: clear all variables >= 2 and read
        // the coefficients of x0^2, x0 x1, x1^2.
        let mut restricted = partial;
        for j in 2..n1 {
            restricted = restricted.set_var_zero(field, j);
        }
        let mut row = vec![field.zero(); 3];
        for (expo, c) in restricted.terms() {
            let (a0, a1) = (expo[0], expo[1]);
            debug_assert_eq!(a0 + a1, 2);
            row[a1 as usize] = *c;
        }
        rows.push(row);
    }
    let rank = Matrix::from_rows(&rows).rank(field);
    match rank {
        3 => Ok(LineType::TypeI),
        2 => Ok(LineType::TypeII),
        r => Err(GeoError::RankAnomaly { rank: r }),
    }
}

/// Restrict a cubic to a hyperplane through an Eckardt point and test whether
/// the point stays Eckardt on the section (it must, when the section is
/// smooth there).
pub fn eckardt_on_hyperplane_check(
    spec: &VarietySpec,
    x: &[FqElem],
    hyperplane: &[FqElem],
) -> Result<bool, GeoError> {
    if spec.degrees() != [3] {
        return Err(GeoError::WrongShape {
            expected: "a single cubic".to_string(),
            got: format!("degrees {:?}", spec.degrees()),
        });
    }
    let field = &*spec.field;
    let n1 = spec.nvars();
    let dot = hyperplane
        .iter()
        .zip(x)
        .fold(field.zero(), |acc, (&h, &xi)| field.add(acc, field.mul(h, xi)));
    if !dot.is_zero() {
        return Err(GeoError::NotOnHyperplane);
    }
    // Coordinates on H: a kernel basis of the defining functional.
    let h = Matrix::from_rows(&[hyperplane.to_vec()]);
    let kernel = h.kernel_basis(field);
    assert_eq!(kernel.len(), n1 - 1);
    let b = Matrix::from_cols(field, &kernel);
    let restricted = spec.forms[0].substitute_matrix(field, &b)?;
    let section = VarietySpec::new(
        spec.field.clone(),
        vec![1; n1 - 1],
        crate::forms::default_var_names(n1 - 1),
        vec![restricted],
        format!("{}|section", spec.label),
    );
    // x in the section coordinates.
    let x_new = b
        .solve(field, &x.to_vec())
        .expect("x lies on the hyperplane");
    if !section.is_smooth_at(&x_new) {
        return Err(GeoError::SectionSingular);
    }
    eckardt_test(&section, &x_new)
}
