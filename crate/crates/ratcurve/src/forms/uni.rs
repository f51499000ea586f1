//! Univariate polynomials over a finite field: the sections `x_i(t)` of a
//! candidate morphism, plus the gcd/resultant/root machinery used to decide
//! coprimality conditions.

use crate::field::{Embedding, Field, FqElem};

use super::FormsError;

/// Dense univariate polynomial, ascending coefficients, no trailing zeros.
/// The zero polynomial is the empty coefficient vector; its degree is the
/// `None` sentinel, which satisfies every degree cap.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct UniPoly {
    coeffs: Vec<FqElem>,
}

impl UniPoly {
    pub fn zero() -> UniPoly {
        UniPoly { coeffs: Vec::new() }
    }

    /// Build from ascending coefficients, trimming trailing zeros.
    pub fn from_coeffs(coeffs: Vec<FqElem>) -> UniPoly {
        let mut p = UniPoly { coeffs };
        p.trim();
        p
    }

    pub fn constant(c: FqElem) -> UniPoly {
        UniPoly::from_coeffs(vec![c])
    }

    /// `c * t^n`.
    pub fn monomial(field: &Field, c: FqElem, n: usize) -> UniPoly {
        if c.is_zero() {
            return UniPoly::zero();
        }
        let mut coeffs = vec![field.zero(); n + 1];
        coeffs[n] = c;
        UniPoly { coeffs }
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` as the zero polynomial's minus-infinity.
    #[inline]
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[FqElem] {
        &self.coeffs
    }

    /// Coefficient of `t^n` (zero beyond the stored length).
    pub fn coeff(&self, field: &Field, n: usize) -> FqElem {
        self.coeffs.get(n).copied().unwrap_or_else(|| field.zero())
    }

    pub fn leading_coeff(&self) -> Option<FqElem> {
        self.coeffs.last().copied()
    }

    pub fn add(&self, field: &Field, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(field.add(self.coeff(field, i), other.coeff(field, i)));
        }
        UniPoly::from_coeffs(out)
    }

    pub fn sub(&self, field: &Field, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(field.sub(self.coeff(field, i), other.coeff(field, i)));
        }
        UniPoly::from_coeffs(out)
    }

    pub fn scale(&self, field: &Field, c: FqElem) -> UniPoly {
        if c.is_zero() {
            return UniPoly::zero();
        }
        UniPoly {
            coeffs: self.coeffs.iter().map(|&a| field.mul(a, c)).collect(),
        }
    }

    pub fn mul(&self, field: &Field, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = field.add(out[i + j], field.mul(a, b));
            }
        }
        UniPoly { coeffs: out }
    }

    pub fn eval(&self, field: &Field, x: FqElem) -> FqElem {
        let mut acc = field.zero();
        for &c in self.coeffs.iter().rev() {
            acc = field.add(field.mul(acc, x), c);
        }
        acc
    }

    /// Monic rescaling of a nonzero polynomial.
    pub fn monic(&self, field: &Field) -> UniPoly {
        match self.leading_coeff() {
            None => UniPoly::zero(),
            Some(lc) => {
                let inv = field.inv(lc).expect("nonzero leading coefficient");
                self.scale(field, inv)
            }
        }
    }

    /// Euclidean division: `self = q * div + r` with `deg r < deg div`.
    pub fn divrem(&self, field: &Field, div: &UniPoly) -> Result<(UniPoly, UniPoly), FormsError> {
        let dd = div.degree().ok_or(FormsError::DivisionByZeroPoly)?;
        let lc_inv = field.inv(div.leading_coeff().unwrap()).unwrap();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![field.zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd {
            let lead = *rem.last().unwrap();
            let shift = rem.len() - 1 - dd;
            if !lead.is_zero() {
                let factor = field.mul(lead, lc_inv);
                quot[shift] = factor;
                for (j, &dc) in div.coeffs.iter().enumerate() {
                    let t = field.sub(rem[shift + j], field.mul(factor, dc));
                    rem[shift + j] = t;
                }
            }
            rem.pop();
        }
        Ok((UniPoly::from_coeffs(quot), UniPoly::from_coeffs(rem)))
    }

    /// Monic gcd. Errors when both inputs are zero (the gcd is undefined).
    pub fn gcd(field: &Field, a: &UniPoly, b: &UniPoly) -> Result<UniPoly, FormsError> {
        if a.is_zero() && b.is_zero() {
            return Err(FormsError::GcdOfZeroPolys);
        }
        let mut a = a.clone();
        let mut b = b.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(field, &b)?;
            a = b;
            b = r;
        }
        Ok(a.monic(field))
    }

    /// Resultant via the Euclidean recurrence. Zero iff the (nonzero) inputs
    /// share a root over the algebraic closure; zero by convention when either
    /// input is the zero polynomial.
    pub fn resultant(field: &Field, a: &UniPoly, b: &UniPoly) -> FqElem {
        let mut a = a.clone();
        let mut b = b.clone();
        let (Some(mut da), Some(mut db)) = (a.degree(), b.degree()) else {
            return field.zero();
        };
        let mut acc = field.one();
        // res(a, b) = (-1)^(da db) lc(b)^(da - dr) res(b, r) with r = a mod b.
        while db > 0 {
            if da == 0 {
                // Constant against positive degree: res = a^db.
                return field.mul(acc, field.pow(a.coeffs[0], db as u64));
            }
            let (_, r) = a.divrem(field, &b).expect("nonzero divisor");
            if da % 2 == 1 && db % 2 == 1 {
                acc = field.neg(acc);
            }
            let dr = r.degree();
            let drop = da - dr.unwrap_or(0);
            acc = field.mul(acc, field.pow(b.leading_coeff().unwrap(), drop as u64));
            a = b;
            da = db;
            match dr {
                None => return field.zero(),
                Some(d) => {
                    b = r;
                    db = d;
                }
            }
        }
        // b is a nonzero constant: res(a, c) = c^da.
        field.mul(acc, field.pow(b.coeffs[0], da as u64))
    }

    /// All roots in `field`, found by exhaustive scan, in enumeration order.
    pub fn roots(&self, field: &Field) -> Vec<FqElem> {
        field
            .elements()
            .filter(|&x| self.eval(field, x).is_zero())
            .collect()
    }

    /// Map coefficients through an embedding into an extension field.
    pub fn embed(&self, emb: &Embedding) -> UniPoly {
        UniPoly {
            coeffs: self.coeffs.iter().map(|&c| emb.map(c)).collect(),
        }
    }

    /// Render as `t`-polynomial, descending powers.
    pub fn render(&self, field: &Field) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (e, &c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let cs = field.fmt_elem(c);
            let coef = if cs == "1" && e > 0 {
                String::new()
            } else if field.is_prime_field() || !cs.contains('+') {
                format!("{cs}{}", if e > 0 { "*" } else { "" })
            } else {
                format!("({cs}){}", if e > 0 { "*" } else { "" })
            };
            let var = match e {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{e}"),
            };
            parts.push(format!("{coef}{var}"));
        }
        parts.join(" + ")
    }
}

/// Lagrange interpolation through distinct nodes.
pub fn lagrange_interpolate(
    field: &Field,
    nodes: &[FqElem],
    values: &[FqElem],
) -> Result<UniPoly, FormsError> {
    let m = lagrange_coeff_matrix(field, nodes)?;
    let n = nodes.len();
    let mut coeffs = vec![field.zero(); n];
    for (j, row) in m.iter().enumerate() {
        for (i, &w) in row.iter().enumerate() {
            coeffs[j] = field.add(coeffs[j], field.mul(w, values[i]));
        }
    }
    Ok(UniPoly::from_coeffs(coeffs))
}

/// Matrix `M` with `M[j][i]` the coefficient of `t^j` in the i-th Lagrange
/// basis polynomial, so interpolated coefficients are `M . values`.
pub fn lagrange_coeff_matrix(
    field: &Field,
    nodes: &[FqElem],
) -> Result<Vec<Vec<FqElem>>, FormsError> {
    let n = nodes.len();
    for (i, &a) in nodes.iter().enumerate() {
        for &b in &nodes[i + 1..] {
            if a == b {
                return Err(FormsError::RepeatedNodes);
            }
        }
    }
    let mut m = vec![vec![field.zero(); n]; n];
    for (i, &ti) in nodes.iter().enumerate() {
        // L_i(t) = prod_{s != i} (t - t_s) / (t_i - t_s)
        let mut num = UniPoly::constant(field.one());
        let mut den = field.one();
        for (s, &ts) in nodes.iter().enumerate() {
            if s == i {
                continue;
            }
            let lin = UniPoly::from_coeffs(vec![field.neg(ts), field.one()]);
            num = num.mul(field, &lin);
            den = field.mul(den, field.sub(ti, ts));
        }
        let den_inv = field.inv(den).expect("distinct nodes");
        for j in 0..n {
            m[j][i] = field.mul(num.coeff(field, j), den_inv);
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;

    fn poly(field: &Field, coeffs: &[i64]) -> UniPoly {
        UniPoly::from_coeffs(coeffs.iter().map(|&c| field.from_int(c)).collect())
    }

    #[test]
    fn gcd_examples() {
        let f5 = Field::prime(5).unwrap();
        // gcd(t^2 - 1, t - 1) = t - 1
        let a = poly(&f5, &[-1, 0, 1]);
        let b = poly(&f5, &[-1, 1]);
        let g = UniPoly::gcd(&f5, &a, &b).unwrap();
        assert_eq!(g, poly(&f5, &[-1, 1]));
        assert!(matches!(
            UniPoly::gcd(&f5, &UniPoly::zero(), &UniPoly::zero()),
            Err(FormsError::GcdOfZeroPolys)
        ));
    }

    #[test]
    fn resultant_examples() {
        let f2 = Field::prime(2).unwrap();
        // res(t, t+1) = 1 (coprime)
        let a = poly(&f2, &[0, 1]);
        let b = poly(&f2, &[1, 1]);
        assert_eq!(UniPoly::resultant(&f2, &a, &b), f2.one());
        // Shared factor: res(t^2-1, t-1) = 0 over F_5.
        let f5 = Field::prime(5).unwrap();
        let c = poly(&f5, &[-1, 0, 1]);
        let d = poly(&f5, &[-1, 1]);
        assert!(UniPoly::resultant(&f5, &c, &d).is_zero());
    }

    /// Independent oracle: the Sylvester matrix determinant.
    fn sylvester_resultant(field: &Field, a: &UniPoly, b: &UniPoly) -> FqElem {
        let (Some(da), Some(db)) = (a.degree(), b.degree()) else {
            return field.zero();
        };
        let n = da + db;
        if n == 0 {
            return field.one();
        }
        let mut m = vec![vec![field.zero(); n]; n];
        for row in 0..db {
            for (j, &c) in a.coeffs().iter().enumerate() {
                m[row][row + da - j] = c;
            }
        }
        for row in 0..da {
            for (j, &c) in b.coeffs().iter().enumerate() {
                m[db + row][row + db - j] = c;
            }
        }
        // Gaussian elimination determinant.
        let mut det = field.one();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !m[r][col].is_zero());
            let Some(pr) = pivot else {
                return field.zero();
            };
            if pr != col {
                m.swap(pr, col);
                det = field.neg(det);
            }
            det = field.mul(det, m[col][col]);
            let inv = field.inv(m[col][col]).unwrap();
            for r in col + 1..n {
                let factor = field.mul(m[r][col], inv);
                if factor.is_zero() {
                    continue;
                }
                for c in col..n {
                    let t = field.sub(m[r][c], field.mul(factor, m[col][c]));
                    m[r][c] = t;
                }
            }
        }
        det
    }

    #[test]
    fn resultant_matches_sylvester_determinant() {
        let f7 = Field::prime(7).unwrap();
        let mut state = 11u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 33) as i64
        };
        for _ in 0..200 {
            let da = (next().unsigned_abs() % 4) as usize;
            let db = (next().unsigned_abs() % 4) as usize;
            let a = UniPoly::from_coeffs((0..=da).map(|_| f7.from_int(next())).collect());
            let b = UniPoly::from_coeffs((0..=db).map(|_| f7.from_int(next())).collect());
            if a.is_zero() || b.is_zero() {
                continue;
            }
            assert_eq!(
                UniPoly::resultant(&f7, &a, &b),
                sylvester_resultant(&f7, &a, &b),
                "a={:?} b={:?}",
                a,
                b
            );
        }
    }

    #[test]
    fn roots_over_extension() {
        let f3 = Field::prime(3).unwrap();
        let p = poly(&f3, &[1, 0, 1]); // t^2 + 1
        assert!(p.roots(&f3).is_empty());
        let f9 = f3.auto_extension(2).unwrap();
        let emb = crate::field::Embedding::new(&f3, &f9).unwrap();
        let roots = p.embed(&emb).roots(&f9);
        assert_eq!(roots.len(), 2);
    }

    #[test]
    fn divrem_round_trip() {
        let f7 = Field::prime(7).unwrap();
        let a = poly(&f7, &[3, 1, 4, 1, 5]);
        let b = poly(&f7, &[2, 0, 1]);
        let (q, r) = a.divrem(&f7, &b).unwrap();
        let back = q.mul(&f7, &b).add(&f7, &r);
        assert_eq!(back, a);
        assert!(r.degree() < b.degree());
    }

    #[test]
    fn lagrange_recovers_polynomial() {
        let f7 = Field::prime(7).unwrap();
        let p = poly(&f7, &[2, 0, 3]);
        let nodes: Vec<_> = f7.elements().take(3).collect();
        let values: Vec<_> = nodes.iter().map(|&t| p.eval(&f7, t)).collect();
        let q = lagrange_interpolate(&f7, &nodes, &values).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn zero_degree_sentinel() {
        assert_eq!(UniPoly::zero().degree(), None);
        let f2 = Field::prime(2).unwrap();
        assert_eq!(poly(&f2, &[1]).degree(), Some(0));
    }
}
