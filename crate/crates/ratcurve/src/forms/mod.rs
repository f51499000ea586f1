//! Sparse multivariate homogeneous forms over `F_q`: the defining equations of
//! a variety, their restrictions to lines and sections, and the expansion of
//! `F(x(t))` into the forms `f_{ij}` in the section coefficients whose degrees
//! drive every Bezout bound.

mod parse;
mod uni;

pub use parse::parse_form;
pub use uni::{lagrange_coeff_matrix, lagrange_interpolate, UniPoly};

use std::collections::BTreeMap;

use thiserror::Error;

use crate::field::{Embedding, Field, FqElem};
use crate::matrix::Matrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormsError {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("coefficient `{0}` is not an element of the field")]
    CoefficientNotInField(String),
    #[error("form is not homogeneous for the given weights: monomials `{0}` and `{1}` have different weighted degrees")]
    Inhomogeneous(String, String),
    #[error("form simplified to zero; write an explicit `0` if that is intended")]
    EmptyForm,
    #[error("point has {got} coordinates, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("operation requires an ordinary projective ambient (all weights 1)")]
    WeightedAmbient,
    #[error("change-of-variables matrix is singular")]
    SingularMatrix,
    #[error("the two points are projectively dependent and do not span a line")]
    DependentPoints,
    #[error("coordinate {coord} has degree {deg}, exceeding its cap {cap}")]
    DegreeCapExceeded { coord: usize, deg: usize, cap: usize },
    #[error("division by the zero polynomial")]
    DivisionByZeroPoly,
    #[error("gcd of two zero polynomials is undefined")]
    GcdOfZeroPolys,
    #[error("interpolation nodes are not distinct")]
    RepeatedNodes,
}

/// Exponent vector of a monomial, one entry per variable.
pub type Expo = Vec<u16>;

/// Sparse term accumulator keyed by exponent vector.
pub(crate) type TermMap = BTreeMap<Expo, FqElem>;

pub(crate) fn map_add_term(field: &Field, map: &mut TermMap, expo: Expo, c: FqElem) {
    if c.is_zero() {
        return;
    }
    match map.get_mut(&expo) {
        Some(existing) => {
            let sum = field.add(*existing, c);
            if sum.is_zero() {
                map.remove(&expo);
            } else {
                *existing = sum;
            }
        }
        None => {
            map.insert(expo, c);
        }
    }
}

pub(crate) fn map_mul(field: &Field, a: &TermMap, b: &TermMap) -> TermMap {
    let mut out = TermMap::new();
    for (ea, &ca) in a {
        for (eb, &cb) in b {
            let expo: Expo = ea.iter().zip(eb).map(|(&x, &y)| x + y).collect();
            map_add_term(field, &mut out, expo, field.mul(ca, cb));
        }
    }
    out
}

/// Descending graded-lexicographic comparison of exponent vectors.
fn cmp_graded_lex_desc(a: &Expo, b: &Expo) -> std::cmp::Ordering {
    let da: u32 = a.iter().map(|&e| e as u32).sum();
    let db: u32 = b.iter().map(|&e| e as u32).sum();
    db.cmp(&da).then_with(|| b.cmp(a))
}

/// Default variable names `x0..x{n-1}`.
pub fn default_var_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("x{i}")).collect()
}

/// A multivariate form, homogeneous with respect to a weight vector. Every
/// stored coefficient is nonzero and all monomials share the weighted degree.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MultiForm {
    nvars: usize,
    weights: Vec<u32>,
    wdeg: u32,
    /// Terms in descending graded-lex order.
    terms: Vec<(Expo, FqElem)>,
}

impl MultiForm {
    /// Build a form from a term map, checking weighted homogeneity. The zero
    /// form is permitted here; whether it is acceptable is the caller's
    /// concern (the parser insists on a literal `0`).
    pub fn from_terms(weights: &[u32], map: TermMap) -> Result<MultiForm, FormsError> {
        let nvars = weights.len();
        let mut terms: Vec<(Expo, FqElem)> = Vec::with_capacity(map.len());
        for (expo, c) in map {
            if c.is_zero() {
                continue;
            }
            debug_assert_eq!(expo.len(), nvars);
            terms.push((expo, c));
        }
        terms.sort_by(|a, b| cmp_graded_lex_desc(&a.0, &b.0));
        let mut wdeg = 0;
        if let Some((first, _)) = terms.first() {
            wdeg = weighted_degree(first, weights);
            for (expo, _) in &terms {
                let d = weighted_degree(expo, weights);
                if d != wdeg {
                    return Err(FormsError::Inhomogeneous(
                        render_monomial(&terms[0].0, &default_var_names(nvars)),
                        render_monomial(expo, &default_var_names(nvars)),
                    ));
                }
            }
        }
        Ok(MultiForm {
            nvars,
            weights: weights.to_vec(),
            wdeg,
            terms,
        })
    }

    pub fn zero(weights: &[u32]) -> MultiForm {
        MultiForm {
            nvars: weights.len(),
            weights: weights.to_vec(),
            wdeg: 0,
            terms: Vec::new(),
        }
    }

    /// The single monomial `c * x^expo`.
    pub fn monomial(field: &Field, weights: &[u32], expo: Expo, c: FqElem) -> MultiForm {
        let mut map = TermMap::new();
        map_add_term(field, &mut map, expo, c);
        MultiForm::from_terms(weights, map).expect("single monomial is homogeneous")
    }

    #[inline]
    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    /// Common weighted degree of the monomials (0 for the zero form).
    #[inline]
    pub fn wdeg(&self) -> u32 {
        self.wdeg
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[(Expo, FqElem)] {
        &self.terms
    }

    pub fn term_map(&self) -> TermMap {
        self.terms.iter().cloned().collect()
    }

    pub fn add(&self, field: &Field, other: &MultiForm) -> Result<MultiForm, FormsError> {
        let mut map = self.term_map();
        for (expo, c) in &other.terms {
            map_add_term(field, &mut map, expo.clone(), *c);
        }
        MultiForm::from_terms(&self.weights, map)
    }

    pub fn scale(&self, field: &Field, c: FqElem) -> MultiForm {
        if c.is_zero() {
            return MultiForm::zero(&self.weights);
        }
        let mut out = self.clone();
        for (_, coeff) in &mut out.terms {
            *coeff = field.mul(*coeff, c);
        }
        out
    }

    /// Exact evaluation at a point of the same (or an embedded) field.
    pub fn evaluate(&self, field: &Field, point: &[FqElem]) -> Result<FqElem, FormsError> {
        if point.len() != self.nvars {
            return Err(FormsError::LengthMismatch {
                expected: self.nvars,
                got: point.len(),
            });
        }
        Ok(self.evaluate_unchecked(field, point))
    }

    /// Evaluation without the length check, for enumeration inner loops.
    #[inline]
    pub fn evaluate_unchecked(&self, field: &Field, point: &[FqElem]) -> FqElem {
        let mut acc = field.zero();
        'terms: for (expo, c) in &self.terms {
            let mut prod = *c;
            for (i, &e) in expo.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if point[i].is_zero() {
                    continue 'terms;
                }
                prod = field.mul(prod, field.pow(point[i], e as u64));
            }
            acc = field.add(acc, prod);
        }
        acc
    }

    /// Formal partial derivative with respect to variable `i`. Terms whose
    /// exponent is divisible by the characteristic drop out.
    pub fn partial_derivative(&self, field: &Field, i: usize) -> MultiForm {
        assert!(i < self.nvars);
        let mut map = TermMap::new();
        for (expo, c) in &self.terms {
            let e = expo[i];
            if e == 0 {
                continue;
            }
            let factor = field.from_int(e as i64);
            let coeff = field.mul(*c, factor);
            if coeff.is_zero() {
                continue;
            }
            let mut new_expo = expo.clone();
            new_expo[i] -= 1;
            map_add_term(field, &mut map, new_expo, coeff);
        }
        MultiForm::from_terms(&self.weights, map).expect("derivative stays homogeneous")
    }

    /// General substitution `x_i := row_i(m) . y` for an `nvars x new_nvars`
    /// matrix. The result lives in `new_nvars` weight-1 variables.
    pub fn substitute_matrix(&self, field: &Field, m: &Matrix) -> Result<MultiForm, FormsError> {
        if self.weights.iter().any(|&w| w != 1) {
            return Err(FormsError::WeightedAmbient);
        }
        assert_eq!(m.rows(), self.nvars);
        let new_n = m.cols();
        let new_weights = vec![1u32; new_n];
        // Linear form for each old variable, as a term map over the new ones.
        let linears: Vec<TermMap> = (0..self.nvars)
            .map(|i| {
                let mut map = TermMap::new();
                for j in 0..new_n {
                    let c = m.get(i, j);
                    if !c.is_zero() {
                        let mut expo = vec![0u16; new_n];
                        expo[j] = 1;
                        map.insert(expo, c);
                    }
                }
                map
            })
            .collect();
        let mut out = TermMap::new();
        for (expo, c) in &self.terms {
            let mut prod = TermMap::new();
            prod.insert(vec![0u16; new_n], field.one());
            for (i, &e) in expo.iter().enumerate() {
                for _ in 0..e {
                    prod = map_mul(field, &prod, &linears[i]);
                }
            }
            for (pe, pc) in prod {
                map_add_term(field, &mut out, pe, field.mul(pc, *c));
            }
        }
        MultiForm::from_terms(&new_weights, out)
    }

    /// Linear change of variables `f . M` by an invertible square matrix; only
    /// meaningful in ordinary projective space.
    pub fn substitute_linear(&self, field: &Field, m: &Matrix) -> Result<MultiForm, FormsError> {
        if self.weights.iter().any(|&w| w != 1) {
            return Err(FormsError::WeightedAmbient);
        }
        if m.rows() != self.nvars || m.cols() != self.nvars || m.inverse(field).is_none() {
            return Err(FormsError::SingularMatrix);
        }
        self.substitute_matrix(field, m)
    }

    /// Restriction `f(sP + tQ)` to the line spanned by two independent points,
    /// as a degree-`wdeg` binary form.
    pub fn restrict_to_line(
        &self,
        field: &Field,
        p: &[FqElem],
        q: &[FqElem],
    ) -> Result<BinaryForm, FormsError> {
        if self.weights.iter().any(|&w| w != 1) {
            return Err(FormsError::WeightedAmbient);
        }
        if p.len() != self.nvars || q.len() != self.nvars {
            return Err(FormsError::LengthMismatch {
                expected: self.nvars,
                got: p.len().min(q.len()),
            });
        }
        let span = Matrix::from_rows(&[p.to_vec(), q.to_vec()]);
        if span.rank(field) != 2 {
            return Err(FormsError::DependentPoints);
        }
        let d = self.wdeg as usize;
        let mut acc = vec![field.zero(); d + 1];
        let mut scratch = Vec::with_capacity(d + 1);
        for (expo, c) in &self.terms {
            // Convolve the linear factors (P_i s + Q_i t)^{e_i}.
            let mut term = vec![*c];
            for (i, &e) in expo.iter().enumerate() {
                for _ in 0..e {
                    scratch.clear();
                    scratch.resize(term.len() + 1, field.zero());
                    for (j, &tc) in term.iter().enumerate() {
                        if tc.is_zero() {
                            continue;
                        }
                        scratch[j] = field.add(scratch[j], field.mul(tc, p[i]));
                        scratch[j + 1] = field.add(scratch[j + 1], field.mul(tc, q[i]));
                    }
                    std::mem::swap(&mut term, &mut scratch);
                }
            }
            debug_assert_eq!(term.len(), d + 1);
            for (j, &tc) in term.iter().enumerate() {
                acc[j] = field.add(acc[j], tc);
            }
        }
        Ok(BinaryForm { coeffs: acc })
    }

    /// Compose with a tuple of sections: the univariate polynomial
    /// `f(x_0(t), ..., x_N(t))` of degree at most `wdeg * e`.
    pub fn compose_with_sections(
        &self,
        field: &Field,
        sections: &[UniPoly],
        e: u32,
    ) -> Result<UniPoly, FormsError> {
        if sections.len() != self.nvars {
            return Err(FormsError::LengthMismatch {
                expected: self.nvars,
                got: sections.len(),
            });
        }
        for (i, s) in sections.iter().enumerate() {
            let cap = (self.weights[i] * e) as usize;
            if let Some(d) = s.degree() {
                if d > cap {
                    return Err(FormsError::DegreeCapExceeded { coord: i, deg: d, cap });
                }
            }
        }
        let mut acc = UniPoly::zero();
        for (expo, c) in &self.terms {
            let mut prod = UniPoly::constant(*c);
            for (i, &exp) in expo.iter().enumerate() {
                for _ in 0..exp {
                    prod = prod.mul(field, &sections[i]);
                    if prod.is_zero() {
                        break;
                    }
                }
                if prod.is_zero() {
                    break;
                }
            }
            acc = acc.add(field, &prod);
        }
        Ok(acc)
    }

    /// Split into parts by the degree of one variable: the returned map sends
    /// `d` to the coefficient form of `x_i^d`, with that variable cleared.
    pub fn parts_by_var_degree(&self, field: &Field, var: usize) -> BTreeMap<u16, MultiForm> {
        let mut buckets: BTreeMap<u16, TermMap> = BTreeMap::new();
        for (expo, c) in &self.terms {
            let d = expo[var];
            let mut stripped = expo.clone();
            stripped[var] = 0;
            map_add_term(field, buckets.entry(d).or_default(), stripped, *c);
        }
        buckets
            .into_iter()
            .map(|(d, map)| {
                // Entries are parts of a weighted-homogeneous form with x_var
                // cleared, so they stay homogeneous.
                (d, MultiForm::from_terms(&self.weights, map).unwrap())
            })
            .filter(|(_, f)| !f.is_zero())
            .collect()
    }

    /// The form with variable `i` set to zero.
    pub fn set_var_zero(&self, field: &Field, var: usize) -> MultiForm {
        let mut map = TermMap::new();
        for (expo, c) in &self.terms {
            if expo[var] == 0 {
                map_add_term(field, &mut map, expo.clone(), *c);
            }
        }
        MultiForm::from_terms(&self.weights, map).unwrap()
    }

    /// Map coefficients through a field embedding.
    pub fn embed(&self, emb: &Embedding) -> MultiForm {
        MultiForm {
            nvars: self.nvars,
            weights: self.weights.clone(),
            wdeg: self.wdeg,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), emb.map(*c)))
                .collect(),
        }
    }

    /// Canonical rendering; parses back to an equal form.
    pub fn render(&self, field: &Field, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (expo, c) in &self.terms {
            let mono = render_monomial(expo, names);
            let cs = field.fmt_elem(*c);
            let part = if mono.is_empty() {
                if field.is_prime_field() || !cs.contains('+') {
                    cs
                } else {
                    format!("({cs})")
                }
            } else if cs == "1" {
                mono
            } else if field.is_prime_field() || !cs.contains('+') {
                format!("{cs}*{mono}")
            } else {
                format!("({cs})*{mono}")
            };
            parts.push(part);
        }
        parts.join(" + ")
    }
}

pub(crate) fn weighted_degree(expo: &Expo, weights: &[u32]) -> u32 {
    expo.iter()
        .zip(weights)
        .map(|(&e, &w)| e as u32 * w)
        .sum()
}

pub(crate) fn render_monomial(expo: &Expo, names: &[String]) -> String {
    let mut parts = Vec::new();
    for (i, &e) in expo.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(names[i].clone()),
            _ => parts.push(format!("{}^{e}", names[i])),
        }
    }
    parts.join("*")
}

/// A binary form in `(s, t)`: `coeffs[j]` is the coefficient of
/// `s^(d-j) t^j`. Identically zero iff all coefficients vanish.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BinaryForm {
    pub coeffs: Vec<FqElem>,
}

impl BinaryForm {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn eval(&self, field: &Field, s: FqElem, t: FqElem) -> FqElem {
        let d = self.degree();
        let mut acc = field.zero();
        for (j, &c) in self.coeffs.iter().enumerate() {
            let term = field.mul(
                c,
                field.mul(field.pow(s, (d - j) as u64), field.pow(t, j as u64)),
            );
            acc = field.add(acc, term);
        }
        acc
    }
}

/// Layout of the coefficient variables of a section tuple: coordinate `i`
/// contributes `w_i * e + 1` variables, ascending powers of `t`.
#[derive(Clone, Debug)]
pub struct CoeffLayout {
    pub e: u32,
    pub offsets: Vec<usize>,
    pub caps: Vec<usize>,
    pub total: usize,
    /// Weight of each coefficient variable (that of its coordinate), making
    /// the `f_{ij}` weighted-homogeneous.
    pub var_weights: Vec<u32>,
}

impl CoeffLayout {
    pub fn new(weights: &[u32], e: u32) -> CoeffLayout {
        let mut offsets = Vec::with_capacity(weights.len());
        let mut caps = Vec::with_capacity(weights.len());
        let mut var_weights = Vec::new();
        let mut total = 0usize;
        for &w in weights {
            offsets.push(total);
            let cap = (w * e) as usize;
            caps.push(cap);
            total += cap + 1;
            var_weights.extend(std::iter::repeat(w).take(cap + 1));
        }
        CoeffLayout {
            e,
            offsets,
            caps,
            total,
            var_weights,
        }
    }

    #[inline]
    pub fn var(&self, coord: usize, power: usize) -> usize {
        debug_assert!(power <= self.caps[coord]);
        self.offsets[coord] + power
    }
}

/// Expand `F(x(t)) = sum_j f_j(a) t^j` for each defining form, where `a` is
/// the coefficient vector of the section tuple. Returns, per form, exactly
/// `wdeg(F) * e + 1` forms in the `CoeffLayout` variables; each is
/// weighted-homogeneous of degree `wdeg(F)` for the inherited variable
/// weights.
pub fn fij_system(
    field: &Field,
    weights: &[u32],
    forms: &[MultiForm],
    e: u32,
) -> (CoeffLayout, Vec<Vec<MultiForm>>) {
    let layout = CoeffLayout::new(weights, e);
    let systems = forms
        .iter()
        .map(|form| fij_for_form(field, form, &layout))
        .collect();
    (layout, systems)
}

fn fij_for_form(field: &Field, form: &MultiForm, layout: &CoeffLayout) -> Vec<MultiForm> {
    let deg_t = (form.wdeg() * layout.e) as usize;
    let mut acc: Vec<TermMap> = vec![TermMap::new(); deg_t + 1];
    for (expo, c) in form.terms() {
        // Product over coordinates of (sum_j a_{i,j} t^j)^{e_i}, tracked as a
        // t-polynomial with sparse multivariate coefficients.
        let mut prod: Vec<TermMap> = vec![TermMap::new()];
        prod[0].insert(vec![0u16; layout.total], field.one());
        for (i, &exp) in expo.iter().enumerate() {
            let cap = layout.caps[i];
            for _ in 0..exp {
                let mut next: Vec<TermMap> = vec![TermMap::new(); prod.len() + cap];
                for (tdeg, terms) in prod.iter().enumerate() {
                    for (te, &tc) in terms {
                        for j in 0..=cap {
                            let mut ne = te.clone();
                            ne[layout.var(i, j)] += 1;
                            map_add_term(field, &mut next[tdeg + j], ne, tc);
                        }
                    }
                }
                prod = next;
            }
        }
        for (tdeg, terms) in prod.into_iter().enumerate() {
            for (te, tc) in terms {
                map_add_term(field, &mut acc[tdeg], te, field.mul(tc, *c));
            }
        }
    }
    acc.into_iter()
        .map(|map| {
            MultiForm::from_terms(&layout.var_weights, map)
                .expect("f_ij inherits weighted homogeneity")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;

    fn names(n: usize) -> Vec<String> {
        default_var_names(n)
    }

    fn form(field: &Field, weights: &[u32], text: &str) -> MultiForm {
        let nm = names(weights.len());
        parse_form(text, field, &nm, weights).unwrap()
    }

    #[test]
    fn fermat_cubic_vanishes_at_known_point() {
        let f7 = Field::prime(7).unwrap();
        let f = form(&f7, &[1, 1, 1, 1], "x0^3 + x1^3 + x2^3 + x3^3");
        let pt = [f7.from_int(1), f7.from_int(1), f7.from_int(3), f7.from_int(3)];
        // 1 + 1 + 27 + 27 = 56 = 0 mod 7
        assert!(f.evaluate(&f7, &pt).unwrap().is_zero());
        let zero = [f7.zero(), f7.zero(), f7.zero(), f7.zero()];
        assert!(f.evaluate(&f7, &zero).unwrap().is_zero());
    }

    #[test]
    fn weighted_scaling_law() {
        let f5 = Field::prime(5).unwrap();
        let nm = vec!["y".to_string(), "u".to_string()];
        let f = parse_form("y^2 - u^4", &f5, &nm, &[2, 1]).unwrap();
        assert_eq!(f.wdeg(), 4);
        for lam in f5.elements() {
            for y in f5.elements() {
                for u in f5.elements() {
                    let v0 = f.evaluate(&f5, &[y, u]).unwrap();
                    let scaled = [f5.mul(f5.pow(lam, 2), y), f5.mul(lam, u)];
                    let v1 = f.evaluate(&f5, &scaled).unwrap();
                    assert_eq!(v1, f5.mul(f5.pow(lam, 4), v0));
                }
            }
        }
    }

    #[test]
    fn partial_derivative_examples() {
        let f7 = Field::prime(7).unwrap();
        let cube = form(&f7, &[1, 1], "x0^3");
        let d = cube.partial_derivative(&f7, 0);
        assert_eq!(d.render(&f7, &names(2)), "3*x0^2");
        let f3 = Field::prime(3).unwrap();
        let cube3 = form(&f3, &[1, 1], "x0^3");
        assert!(cube3.partial_derivative(&f3, 0).is_zero());
        let prod = form(&f7, &[1, 1], "x0*x1");
        assert_eq!(prod.partial_derivative(&f7, 1).render(&f7, &names(2)), "x0");
    }

    #[test]
    fn substitute_linear_examples() {
        let f7 = Field::prime(7).unwrap();
        let sq = form(&f7, &[1, 1], "x0^2");
        let id = Matrix::identity(&f7, 2);
        assert_eq!(sq.substitute_linear(&f7, &id).unwrap(), sq);

        let prod = form(&f7, &[1, 1], "x0*x1");
        let swap = Matrix::from_rows(&[
            vec![f7.zero(), f7.one()],
            vec![f7.one(), f7.zero()],
        ]);
        assert_eq!(prod.substitute_linear(&f7, &swap).unwrap(), prod);

        // x0 -> x0 + x1: x0^2 becomes x0^2 + 2 x0 x1 + x1^2.
        let shear = Matrix::from_rows(&[
            vec![f7.one(), f7.one()],
            vec![f7.zero(), f7.one()],
        ]);
        let sub = sq.substitute_linear(&f7, &shear).unwrap();
        assert_eq!(sub.render(&f7, &names(2)), "x0^2 + 2*x0*x1 + x1^2");

        let singular = Matrix::from_rows(&[
            vec![f7.one(), f7.one()],
            vec![f7.one(), f7.one()],
        ]);
        assert!(matches!(
            sq.substitute_linear(&f7, &singular),
            Err(FormsError::SingularMatrix)
        ));
    }

    #[test]
    fn substitute_composition_law() {
        let f5 = Field::prime(5).unwrap();
        let f = form(&f5, &[1, 1, 1], "x0^2*x1 + 3*x1*x2^2 + x0*x1*x2");
        let m1 = Matrix::from_rows(&[
            vec![f5.from_int(1), f5.from_int(2), f5.from_int(0)],
            vec![f5.from_int(0), f5.from_int(1), f5.from_int(3)],
            vec![f5.from_int(1), f5.from_int(0), f5.from_int(1)],
        ]);
        let m2 = Matrix::from_rows(&[
            vec![f5.from_int(2), f5.from_int(0), f5.from_int(1)],
            vec![f5.from_int(1), f5.from_int(1), f5.from_int(0)],
            vec![f5.from_int(0), f5.from_int(4), f5.from_int(1)],
        ]);
        let lhs = f.substitute_linear(&f5, &m1.mul(&f5, &m2)).unwrap();
        let rhs = f
            .substitute_linear(&f5, &m1)
            .unwrap()
            .substitute_linear(&f5, &m2)
            .unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn substitute_preserves_evaluation() {
        let f7 = Field::prime(7).unwrap();
        let f = form(&f7, &[1, 1, 1], "x0^3 + 2*x1^2*x2 + x0*x1*x2");
        let m = Matrix::from_rows(&[
            vec![f7.from_int(1), f7.from_int(2), f7.from_int(3)],
            vec![f7.from_int(0), f7.from_int(1), f7.from_int(4)],
            vec![f7.from_int(5), f7.from_int(0), f7.from_int(1)],
        ]);
        let sub = f.substitute_linear(&f7, &m).unwrap();
        for a in 0..7 {
            for b in 0..7 {
                let x = [f7.from_int(a), f7.from_int(b), f7.from_int(a + 2 * b + 1)];
                let mx = m.mul_vec(&f7, &x);
                assert_eq!(
                    sub.evaluate(&f7, &x).unwrap(),
                    f.evaluate(&f7, &mx).unwrap()
                );
            }
        }
    }

    #[test]
    fn restrict_to_line_examples() {
        let f7 = Field::prime(7).unwrap();
        let names3 = names(3);
        let x2 = parse_form("x2", &f7, &names3, &[1, 1, 1]).unwrap();
        let x0 = parse_form("x0", &f7, &names3, &[1, 1, 1]).unwrap();
        let p = [f7.one(), f7.zero(), f7.zero()];
        let q = [f7.zero(), f7.one(), f7.zero()];
        assert!(x2.restrict_to_line(&f7, &p, &q).unwrap().is_zero());
        let r = x0.restrict_to_line(&f7, &p, &q).unwrap();
        assert_eq!(r.coeffs, vec![f7.one(), f7.zero()]); // the form `s`
        assert!(matches!(
            x0.restrict_to_line(&f7, &p, &p),
            Err(FormsError::DependentPoints)
        ));
    }

    #[test]
    fn fermat_line_lies_on_cubic() {
        let f7 = Field::prime(7).unwrap();
        let f = form(&f7, &[1, 1, 1, 1], "x0^3 + x1^3 + x2^3 + x3^3");
        let p = [f7.from_int(1), f7.from_int(6), f7.zero(), f7.zero()];
        let q = [f7.zero(), f7.zero(), f7.from_int(1), f7.from_int(6)];
        // s^3 (1 + 216) + t^3 (1 + 216) = 0 mod 7; mixed terms vanish too.
        let r = f.restrict_to_line(&f7, &p, &q).unwrap();
        assert!(r.is_zero());
    }

    #[test]
    fn compose_with_sections_examples() {
        let f5 = Field::prime(5).unwrap();
        // Conic parameterization: x0 x2 - x1^2 at (1, t, t^2) is zero.
        let conic = form(&f5, &[1, 1, 1], "x0*x2 - x1^2");
        let one = UniPoly::constant(f5.one());
        let t = UniPoly::monomial(&f5, f5.one(), 1);
        let t2 = UniPoly::monomial(&f5, f5.one(), 2);
        let out = conic
            .compose_with_sections(&f5, &[one.clone(), t.clone(), t2.clone()], 2)
            .unwrap();
        assert!(out.is_zero());

        let x0 = form(&f5, &[1, 1, 1], "x0");
        let out = x0
            .compose_with_sections(&f5, &[t.clone(), one.clone(), UniPoly::zero()], 1)
            .unwrap();
        assert_eq!(out, t);

        // Weighted: y^2 - u^4 at (t^2, t), e = 1.
        let nm = vec!["y".to_string(), "u".to_string()];
        let wf = parse_form("y^2 - u^4", &f5, &nm, &[2, 1]).unwrap();
        let out = wf.compose_with_sections(&f5, &[t2, t], 1).unwrap();
        assert!(out.is_zero());

        // Degree-cap violation.
        let too_big = UniPoly::monomial(&f5, f5.one(), 3);
        assert!(matches!(
            x0.compose_with_sections(&f5, &[too_big, one, UniPoly::zero()], 1),
            Err(FormsError::DegreeCapExceeded { .. })
        ));
    }

    #[test]
    fn fij_conic_degree_one() {
        let f5 = Field::prime(5).unwrap();
        let conic = form(&f5, &[1, 1, 1], "x0*x2 - x1^2");
        let (layout, sys) = fij_system(&f5, &[1, 1, 1], &[conic], 1);
        assert_eq!(layout.total, 6);
        assert_eq!(sys[0].len(), 3);
        // Variables: a0 a1 b0 b1 c0 c1. Expected: a0c0 - b0^2,
        // a0c1 + a1c0 - 2 b0 b1, a1c1 - b1^2.
        let nm: Vec<String> = ["a0", "a1", "b0", "b1", "c0", "c1"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        assert_eq!(sys[0][0].render(&f5, &nm), "a0*c0 + 4*b0^2");
        assert_eq!(sys[0][1].render(&f5, &nm), "a0*c1 + a1*c0 + 3*b0*b1");
        assert_eq!(sys[0][2].render(&f5, &nm), "a1*c1 + 4*b1^2");
    }

    #[test]
    fn fij_single_variable() {
        let f5 = Field::prime(5).unwrap();
        let x0 = form(&f5, &[1, 1, 1], "x0");
        let (_, sys) = fij_system(&f5, &[1, 1, 1], &[x0], 1);
        assert_eq!(sys[0].len(), 2);
        let nm: Vec<String> = ["a0", "a1", "b0", "b1", "c0", "c1"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        assert_eq!(sys[0][0].render(&f5, &nm), "a0");
        assert_eq!(sys[0][1].render(&f5, &nm), "a1");
    }

    #[test]
    fn fij_count_for_cubic_degree_two() {
        let f7 = Field::prime(7).unwrap();
        let cubic = form(&f7, &[1, 1, 1, 1], "x0^3 + x1^3 + x2^3 + x3^3");
        let (_, sys) = fij_system(&f7, &[1, 1, 1, 1], &[cubic], 2);
        assert_eq!(sys[0].len(), 7); // 3*2 + 1 equations
    }

    #[test]
    fn fij_matches_compose_on_random_vectors() {
        let f7 = Field::prime(7).unwrap();
        let forms = vec![
            form(&f7, &[1, 1, 1], "x0*x2 - x1^2"),
            form(&f7, &[1, 1, 1], "x0^2 + 3*x1*x2"),
        ];
        let e = 2;
        let (layout, sys) = fij_system(&f7, &[1, 1, 1], &forms, e);
        let mut state = 77u64;
        let mut next = || {
            state = state.wrapping_mul(2862933555777941757).wrapping_add(3037000493);
            f7.from_int((state >> 33) as i64)
        };
        for _ in 0..100 {
            let coeffs: Vec<_> = (0..layout.total).map(|_| next()).collect();
            let sections: Vec<UniPoly> = (0..3)
                .map(|i| {
                    UniPoly::from_coeffs(
                        (0..=layout.caps[i]).map(|j| coeffs[layout.var(i, j)]).collect(),
                    )
                })
                .collect();
            for (fi, f) in forms.iter().enumerate() {
                let composed = f.compose_with_sections(&f7, &sections, e).unwrap();
                for (j, fij) in sys[fi].iter().enumerate() {
                    assert_eq!(
                        fij.evaluate(&f7, &coeffs).unwrap(),
                        composed.coeff(&f7, j),
                        "form {fi}, t^{j}"
                    );
                }
            }
        }
    }

    #[test]
    fn restrict_agrees_with_compose_along_parameterization() {
        let f7 = Field::prime(7).unwrap();
        let f = form(&f7, &[1, 1, 1, 1], "x0^3 + x1^3 + x2^3 + x3^3");
        let p = [f7.from_int(1), f7.from_int(6), f7.zero(), f7.zero()];
        let q = [f7.zero(), f7.from_int(2), f7.from_int(1), f7.from_int(0)];
        let restricted = f.restrict_to_line(&f7, &p, &q).unwrap();
        // Sections s*P + t*Q with s = 1 (affine chart): x_i(t) = P_i + Q_i t.
        let sections: Vec<UniPoly> = (0..4)
            .map(|i| UniPoly::from_coeffs(vec![p[i], q[i]]))
            .collect();
        let composed = f.compose_with_sections(&f7, &sections, 1).unwrap();
        assert_eq!(restricted.is_zero(), composed.is_zero());
        for (j, &c) in restricted.coeffs.iter().enumerate() {
            assert_eq!(composed.coeff(&f7, j), c);
        }
    }
}
