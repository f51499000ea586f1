//! Exact arithmetic and exhaustive enumeration for small finite fields `F_{p^k}`.
//!
//! Fields are capped at `q = p^k <= 2^20` so that every downstream scan can
//! afford to enumerate all elements. Multiplication, inversion and powers go
//! through discrete-log tables built once per field; addition uses direct
//! modular arithmetic for prime fields and a small table for extensions.

use std::fmt;

use thiserror::Error;

/// Default cap on the field size. Enumeration-based counting is infeasible far
/// below this, so it mostly guards against typos in spec files.
pub const DEFAULT_Q_CAP: u32 = 1 << 20;

/// Largest prime accepted for the characteristic.
pub const MAX_PRIME: u32 = 1 << 16;

/// Extensions with q up to this size get a full q-by-q addition table.
const ADD_TABLE_MAX_Q: u32 = 1024;

static NEXT_FIELD_ID: AtomicU32 = AtomicU32::new(1);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("prime {0} exceeds the supported maximum {MAX_PRIME}")]
    PrimeTooLarge(u32),
    #[error("field size {q} exceeds the cap {cap}")]
    FieldTooLarge { q: u64, cap: u32 },
    #[error("modulus must be monic of degree {expected}, got degree {got}")]
    BadModulusDegree { expected: u32, got: u32 },
    #[error("modulus is reducible: divisible by {factor}")]
    ReducibleModulus { factor: String },
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    MismatchedFields,
    #[error("element does not belong to this field")]
    ForeignElement,
    #[error("cannot embed F_{{{src_p}^{src_k}}} into F_{{{dst_p}^{dst_k}}}: {reason}")]
    BadEmbedding {
        src_p: u32,
        src_k: u32,
        dst_p: u32,
        dst_k: u32,
        reason: &'static str,
    },
    #[error("invalid field literal `{0}`: {1}")]
    BadLiteral(String, String),
}

/// Identifies the field an element was created in. Cheap to compare, never
/// reused within a process.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct FieldId(u32);

/// An element of `F_{p^k}`, stored as the base-p packing of its coefficient
/// vector: `repr = c_0 + c_1 p + ... + c_{k-1} p^{k-1}` where the element is
/// `c_0 + c_1 g + ... + c_{k-1} g^{k-1}` for the residue class `g` of the
/// modulus variable. Elements of `F_p` occupy reprs `0..p`.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct FqElem {
    field: FieldId,
    repr: u32,
}

impl FqElem {
    #[inline]
    pub fn repr(self) -> u32 {
        self.repr
    }

    #[inline]
    pub fn field_id(self) -> FieldId {
        self.field
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.repr == 0
    }
}

#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow(u64),
    Frobenius,
}

/// A concrete finite field with its arithmetic tables.
pub struct Field {
    id: FieldId,
    p: u32,
    k: u32,
    q: u32,
    /// Monic modulus, `k + 1` coefficients, ascending powers. For prime
    /// fields this is `[0, 1]` (the polynomial `g`).
    modulus: Vec<u32>,
    /// Least generator of the multiplicative group, as a repr.
    generator: u32,
    /// `exp[i] = generator^i` for `i in 0..2(q-1)` (doubled to skip a mod).
    exp: Vec<u32>,
    /// `log[r]` with `exp[log[r]] == r`; `log[0]` is a sentinel.
    log: Vec<u32>,
    /// Negation table, `q` entries.
    neg: Vec<u32>,
    /// Full addition table for small extensions, row-major `q * q`.
    add: Option<Vec<u32>>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Field({})", self.literal())
    }
}

impl Field {
    /// The prime field `F_p`.
    pub fn prime(p: u32) -> Result<Field, FieldError> {
        Field::new(p, 1, &[0, 1], DEFAULT_Q_CAP)
    }

    /// The extension `F_p[g]/(modulus)` with `modulus` monic of degree `k`,
    /// coefficients ascending.
    pub fn extension(p: u32, k: u32, modulus: &[u32]) -> Result<Field, FieldError> {
        Field::new(p, k, modulus, DEFAULT_Q_CAP)
    }

    /// Full constructor with an explicit size cap.
    pub fn new(p: u32, k: u32, modulus: &[u32], cap: u32) -> Result<Field, FieldError> {
        if p > MAX_PRIME {
            return Err(FieldError::PrimeTooLarge(p));
        }
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        let q = (p as u64).checked_pow(k).filter(|&q| q <= cap as u64);
        let q = match q {
            Some(q) => q as u32,
            None => {
                return Err(FieldError::FieldTooLarge {
                    q: (p as u64).saturating_pow(k),
                    cap,
                })
            }
        };
        let modulus: Vec<u32> = modulus.iter().map(|&c| c % p).collect();
        if modulus.len() != k as usize + 1 || modulus[k as usize] != 1 {
            let got = modulus
                .iter()
                .rposition(|&c| c != 0)
                .map(|d| d as u32)
                .unwrap_or(0);
            return Err(FieldError::BadModulusDegree { expected: k, got });
        }
        if k > 1 {
            if let Some(factor) = find_poly_factor(p, &modulus) {
                return Err(FieldError::ReducibleModulus {
                    factor: render_g_poly(&factor),
                });
            }
        }

        let mut field = Field {
            id: FieldId(NEXT_FIELD_ID.fetch_add(1, Ordering::Relaxed)),
            p,
            k,
            q,
            modulus,
            generator: 0,
            exp: Vec::new(),
            log: Vec::new(),
            neg: Vec::new(),
            add: None,
        };
        field.build_tables();
        Ok(field)
    }

    /// Least monic irreducible polynomial of degree `k` over `F_p`, in packed
    /// coefficient order. Used for canonically constructed extensions.
    pub fn default_modulus(p: u32, k: u32) -> Vec<u32> {
        if k == 1 {
            return vec![0, 1];
        }
        let lower = (p as u64).pow(k);
        for packed in 0..lower {
            let mut coeffs = unpack_digits(packed as u32, p, k);
            coeffs.push(1);
            if find_poly_factor(p, &coeffs).is_none() {
                return coeffs;
            }
        }
        unreachable!("an irreducible polynomial of every degree exists over F_p")
    }

    /// The canonical degree-`m` extension of this field: `F_{p^{km}}` with the
    /// least irreducible modulus.
    pub fn auto_extension(&self, m: u32) -> Result<Field, FieldError> {
        let km = self.k * m;
        Field::extension(self.p, km, &Field::default_modulus(self.p, km))
    }

    fn build_tables(&mut self) {
        let q = self.q;
        self.neg = (0..q).map(|r| self.slow_neg(r)).collect();
        // Multiplicative tables.
        let g = self.find_generator();
        self.generator = g;
        let order = (q - 1).max(1) as usize;
        let mut exp = vec![0u32; 2 * order];
        let mut log = vec![u32::MAX; q as usize];
        let mut acc = 1u32;
        for i in 0..order {
            exp[i] = acc;
            exp[i + order] = acc;
            if log[acc as usize] == u32::MAX {
                log[acc as usize] = i as u32;
            }
            acc = self.slow_mul(acc, g);
        }
        self.exp = exp;
        self.log = log;
        if self.k > 1 && q <= ADD_TABLE_MAX_Q {
            let mut add = vec![0u32; (q as usize) * (q as usize)];
            for a in 0..q {
                for b in 0..q {
                    add[(a as usize) * (q as usize) + b as usize] = self.slow_add(a, b);
                }
            }
            self.add = Some(add);
        }
    }

    /// Least repr generating the multiplicative group.
    fn find_generator(&self) -> u32 {
        if self.q == 2 {
            return 1;
        }
        let order = self.q - 1;
        let prime_factors = prime_factors(order);
        'cand: for c in 2..self.q {
            for &l in &prime_factors {
                if self.slow_pow(c, (order / l) as u64) == 1 {
                    continue 'cand;
                }
            }
            return c;
        }
        unreachable!("multiplicative group of a finite field is cyclic")
    }

    // ----- raw digit arithmetic, used to bootstrap the tables -----

    fn slow_add(&self, a: u32, b: u32) -> u32 {
        if self.k == 1 {
            let s = a + b;
            return if s >= self.p { s - self.p } else { s };
        }
        let (p, k) = (self.p, self.k);
        let mut out = 0u32;
        let mut mult = 1u32;
        let (mut a, mut b) = (a, b);
        for _ in 0..k {
            let s = a % p + b % p;
            out += (if s >= p { s - p } else { s }) * mult;
            a /= p;
            b /= p;
            mult *= p;
        }
        out
    }

    fn slow_neg(&self, a: u32) -> u32 {
        if self.k == 1 {
            return if a == 0 { 0 } else { self.p - a };
        }
        let (p, k) = (self.p, self.k);
        let mut out = 0u32;
        let mut mult = 1u32;
        let mut a = a;
        for _ in 0..k {
            let d = a % p;
            out += (if d == 0 { 0 } else { p - d }) * mult;
            a /= p;
            mult *= p;
        }
        out
    }

    fn slow_mul(&self, a: u32, b: u32) -> u32 {
        let p = self.p as u64;
        if self.k == 1 {
            return ((a as u64 * b as u64) % p) as u32;
        }
        let k = self.k as usize;
        let da = unpack_digits(a, self.p, self.k);
        let db = unpack_digits(b, self.p, self.k);
        let mut prod = vec![0u64; 2 * k - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        // Reduce modulo the monic modulus.
        for i in (k..2 * k - 1).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            prod[i] = 0;
            for j in 0..k {
                let m = self.modulus[j] as u64;
                if m != 0 {
                    let idx = i - k + j;
                    prod[idx] = (prod[idx] + (p - m) * c) % p;
                }
            }
        }
        let mut out = 0u32;
        for i in (0..k).rev() {
            out = out * self.p + prod[i] as u32;
        }
        out
    }

    fn slow_pow(&self, a: u32, mut n: u64) -> u32 {
        let mut base = a;
        let mut acc = 1u32;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.slow_mul(acc, base);
            }
            base = self.slow_mul(base, base);
            n >>= 1;
        }
        acc
    }

    // ----- public parameters -----

    #[inline]
    pub fn id(&self) -> FieldId {
        self.id
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn k(&self) -> u32 {
        self.k
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn is_prime_field(&self) -> bool {
        self.k == 1
    }

    /// Canonical literal, e.g. `p=7` or `p=2,k=2,mod=g^2+g+1`.
    pub fn literal(&self) -> String {
        if self.k == 1 {
            format!("p={}", self.p)
        } else {
            format!("p={},k={},mod={}", self.p, self.k, render_g_poly(&self.modulus))
        }
    }

    // ----- element construction -----

    #[inline]
    pub fn zero(&self) -> FqElem {
        FqElem { field: self.id, repr: 0 }
    }

    #[inline]
    pub fn one(&self) -> FqElem {
        FqElem { field: self.id, repr: 1 }
    }

    /// The residue class of the modulus variable `g` (for `k > 1`), i.e. the
    /// canonical generator of the extension as an `F_p`-algebra.
    pub fn gen_g(&self) -> FqElem {
        FqElem {
            field: self.id,
            repr: if self.k == 1 { 0 } else { self.p },
        }
    }

    /// Map an integer into the prime subfield.
    pub fn from_int(&self, n: i64) -> FqElem {
        let p = self.p as i64;
        let r = n.rem_euclid(p) as u32;
        FqElem { field: self.id, repr: r }
    }

    pub(crate) fn from_repr(&self, repr: u32) -> FqElem {
        debug_assert!(repr < self.q);
        FqElem { field: self.id, repr }
    }

    /// Build an element from its coefficient vector (length `k`, entries
    /// reduced mod p).
    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FqElem, FieldError> {
        if coeffs.len() != self.k as usize {
            return Err(FieldError::ForeignElement);
        }
        let mut repr = 0u32;
        for &c in coeffs.iter().rev() {
            repr = repr * self.p + c % self.p;
        }
        Ok(FqElem { field: self.id, repr })
    }

    /// Coefficient vector of an element, ascending powers of `g`, length `k`.
    pub fn coeffs(&self, x: FqElem) -> Vec<u32> {
        debug_assert_eq!(x.field, self.id);
        unpack_digits(x.repr, self.p, self.k)
    }

    #[inline]
    fn check(&self, x: FqElem) {
        debug_assert_eq!(x.field, self.id, "element used with a foreign field");
    }

    // ----- arithmetic -----

    #[inline]
    pub fn add(&self, a: FqElem, b: FqElem) -> FqElem {
        self.check(a);
        self.check(b);
        let repr = if self.k == 1 {
            let s = a.repr + b.repr;
            if s >= self.p {
                s - self.p
            } else {
                s
            }
        } else if let Some(t) = &self.add {
            t[(a.repr as usize) * (self.q as usize) + b.repr as usize]
        } else {
            self.slow_add(a.repr, b.repr)
        };
        FqElem { field: self.id, repr }
    }

    #[inline]
    pub fn neg(&self, a: FqElem) -> FqElem {
        self.check(a);
        FqElem {
            field: self.id,
            repr: self.neg[a.repr as usize],
        }
    }

    #[inline]
    pub fn sub(&self, a: FqElem, b: FqElem) -> FqElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FqElem, b: FqElem) -> FqElem {
        self.check(a);
        self.check(b);
        if a.repr == 0 || b.repr == 0 {
            return self.zero();
        }
        let i = self.log[a.repr as usize] + self.log[b.repr as usize];
        FqElem {
            field: self.id,
            repr: self.exp[i as usize],
        }
    }

    pub fn inv(&self, a: FqElem) -> Result<FqElem, FieldError> {
        self.check(a);
        if a.repr == 0 {
            return Err(FieldError::DivisionByZero);
        }
        let order = self.q - 1;
        let i = order - self.log[a.repr as usize];
        Ok(FqElem {
            field: self.id,
            repr: self.exp[i as usize],
        })
    }

    pub fn div(&self, a: FqElem, b: FqElem) -> Result<FqElem, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^n` with the convention `0^0 = 1`.
    #[inline]
    pub fn pow(&self, a: FqElem, n: u64) -> FqElem {
        self.check(a);
        if a.repr == 0 {
            return if n == 0 { self.one() } else { self.zero() };
        }
        if self.q == 2 {
            return self.one();
        }
        let order = (self.q - 1) as u64;
        let i = (self.log[a.repr as usize] as u64 * (n % order)) % order;
        FqElem {
            field: self.id,
            repr: self.exp[i as usize],
        }
    }

    /// The Frobenius `a -> a^p`.
    pub fn frobenius(&self, a: FqElem) -> FqElem {
        self.pow(a, self.p as u64)
    }

    /// Checked entry point covering the whole operation table.
    pub fn arith(&self, a: FqElem, b: FqElem, op: ArithOp) -> Result<FqElem, FieldError> {
        let unary = matches!(op, ArithOp::Pow(_) | ArithOp::Frobenius);
        if a.field != self.id || (!unary && b.field != self.id) {
            return Err(FieldError::MismatchedFields);
        }
        if a.repr >= self.q || (!unary && b.repr >= self.q) {
            return Err(FieldError::ForeignElement);
        }
        Ok(match op {
            ArithOp::Add => self.add(a, b),
            ArithOp::Sub => self.sub(a, b),
            ArithOp::Mul => self.mul(a, b),
            ArithOp::Div => self.div(a, b)?,
            ArithOp::Pow(n) => self.pow(a, n),
            ArithOp::Frobenius => self.frobenius(a),
        })
    }

    /// All field elements in packed-repr order (the enumeration order used by
    /// every deterministic scan).
    pub fn elements(&self) -> impl Iterator<Item = FqElem> + '_ {
        let id = self.id;
        (0..self.q).map(move |repr| FqElem { field: id, repr })
    }

    /// Multiplicative order of a nonzero element.
    pub fn mult_order(&self, a: FqElem) -> Result<u32, FieldError> {
        self.check(a);
        if a.repr == 0 {
            return Err(FieldError::DivisionByZero);
        }
        if self.q == 2 {
            return Ok(1);
        }
        let order = self.q - 1;
        let l = self.log[a.repr as usize];
        Ok(order / gcd_u32(order, l))
    }

    /// Display an element: a decimal residue for prime fields, a polynomial in
    /// `g` otherwise.
    pub fn fmt_elem(&self, x: FqElem) -> String {
        self.check(x);
        if self.k == 1 {
            return x.repr.to_string();
        }
        let mut coeffs = self.coeffs(x);
        coeffs.push(0);
        render_g_poly_terms(&coeffs)
    }
}

/// An `F_p`-algebra embedding of one field into an extension.
///
/// The image of the source generator is the lexicographically least root of
/// the source modulus in the target, so the embedding is deterministic.
pub struct Embedding {
    src: FieldId,
    dst: FieldId,
    table: Vec<FqElem>,
}

impl Embedding {
    pub fn new(src: &Field, dst: &Field) -> Result<Embedding, FieldError> {
        let err = |reason: &'static str| FieldError::BadEmbedding {
            src_p: src.p(),
            src_k: src.k(),
            dst_p: dst.p(),
            dst_k: dst.k(),
            reason,
        };
        if src.p() != dst.p() {
            return Err(err("different characteristics"));
        }
        if dst.k() % src.k() != 0 {
            return Err(err("target degree is not a multiple of source degree"));
        }
        // Image of g: least root of the source modulus in the target.
        let gen_image = if src.k() == 1 {
            dst.zero()
        } else {
            let mut found = None;
            for x in dst.elements() {
                let mut acc = dst.zero();
                for &c in src.modulus().iter().rev() {
                    acc = dst.add(dst.mul(acc, x), dst.from_int(c as i64));
                }
                if acc.is_zero() {
                    found = Some(x);
                    break;
                }
            }
            found.ok_or_else(|| err("source modulus has no root in target"))?
        };
        let table = (0..src.q())
            .map(|repr| {
                let coeffs = unpack_digits(repr, src.p(), src.k());
                let mut acc = dst.zero();
                for &c in coeffs.iter().rev() {
                    acc = dst.add(dst.mul(acc, gen_image), dst.from_int(c as i64));
                }
                acc
            })
            .collect();
        Ok(Embedding {
            src: src.id(),
            dst: dst.id(),
            table,
        })
    }

    /// Identity embedding of a field into itself.
    pub fn identity(field: &Field) -> Embedding {
        Embedding {
            src: field.id(),
            dst: field.id(),
            table: field.elements().collect(),
        }
    }

    #[inline]
    pub fn map(&self, x: FqElem) -> FqElem {
        debug_assert_eq!(x.field, self.src, "embedding applied to a foreign element");
        self.table[x.repr as usize]
    }

    pub fn src_id(&self) -> FieldId {
        self.src
    }

    pub fn dst_id(&self) -> FieldId {
        self.dst
    }
}

// ----- field literals -----

/// Parse a field literal: `p=7` or `p=2,k=2,mod=g^2+g+1`.
pub fn parse_field_literal(text: &str) -> Result<Field, FieldError> {
    let bad = |msg: &str| FieldError::BadLiteral(text.to_string(), msg.to_string());
    let mut p = None;
    let mut k = 1u32;
    let mut modulus_text: Option<&str> = None;
    for part in text.split(',') {
        let part = part.trim();
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| bad("expected key=value entries"))?;
        match key.trim() {
            "p" => {
                p = Some(
                    value
                        .trim()
                        .parse::<u32>()
                        .map_err(|_| bad("p must be a positive integer"))?,
                )
            }
            "k" => {
                k = value
                    .trim()
                    .parse::<u32>()
                    .map_err(|_| bad("k must be a positive integer"))?
            }
            "mod" => modulus_text = Some(value),
            other => return Err(bad(&format!("unknown key `{other}`"))),
        }
    }
    let p = p.ok_or_else(|| bad("missing p"))?;
    if k == 0 {
        return Err(bad("k must be at least 1"));
    }
    if k == 1 {
        if modulus_text.is_some() {
            return Err(bad("mod= is only meaningful for k > 1"));
        }
        return Field::prime(p);
    }
    let modulus = match modulus_text {
        Some(text) => parse_g_poly(text, p).map_err(|msg| bad(&msg))?,
        None => Field::default_modulus(p, k),
    };
    if modulus.len() != k as usize + 1 {
        return Err(bad(&format!("mod must have degree {k}")));
    }
    Field::extension(p, k, &modulus)
}

/// Parse a polynomial in `g` with nonnegative integer coefficients, e.g.
/// `g^2+g+1` or `g^3+2*g+5`. Returns ascending coefficients reduced mod p.
fn parse_g_poly(text: &str, p: u32) -> Result<Vec<u32>, String> {
    let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if cleaned.is_empty() {
        return Err("empty modulus".to_string());
    }
    let mut coeffs: Vec<u32> = Vec::new();
    for term in cleaned.split('+') {
        if term.is_empty() {
            return Err("empty term in modulus".to_string());
        }
        let (coef_text, exp) = match term.find('g') {
            None => (term, 0u32),
            Some(pos) => {
                let coef = &term[..pos];
                let rest = &term[pos + 1..];
                let exp = if rest.is_empty() {
                    1
                } else if let Some(e) = rest.strip_prefix('^') {
                    e.parse::<u32>().map_err(|_| format!("bad exponent in `{term}`"))?
                } else {
                    return Err(format!("malformed term `{term}`"));
                };
                (coef.trim_end_matches('*'), exp)
            }
        };
        let coef = if coef_text.is_empty() {
            1
        } else {
            coef_text
                .parse::<u64>()
                .map_err(|_| format!("bad coefficient in `{term}`"))?
        };
        let exp = exp as usize;
        if coeffs.len() <= exp {
            coeffs.resize(exp + 1, 0);
        }
        coeffs[exp] = ((coeffs[exp] as u64 + coef) % p as u64) as u32;
    }
    Ok(coeffs)
}

/// Render ascending coefficients as a `g`-polynomial, descending powers.
fn render_g_poly(coeffs: &[u32]) -> String {
    render_g_poly_terms(coeffs)
}

fn render_g_poly_terms(coeffs: &[u32]) -> String {
    let mut parts: Vec<String> = Vec::new();
    for (e, &c) in coeffs.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let part = match (c, e) {
            (_, 0) => c.to_string(),
            (1, 1) => "g".to_string(),
            (1, _) => format!("g^{e}"),
            (_, 1) => format!("{c}*g"),
            (_, _) => format!("{c}*g^{e}"),
        };
        parts.push(part);
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join("+")
    }
}

// ----- small number theory helpers -----

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn gcd_u32(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn unpack_digits(mut repr: u32, p: u32, k: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(k as usize);
    for _ in 0..k {
        out.push(repr % p);
        repr /= p;
    }
    out
}

/// Search for a monic factor of degree `1..=deg/2`; `None` means irreducible.
fn find_poly_factor(p: u32, poly: &[u32]) -> Option<Vec<u32>> {
    let deg = poly.len() - 1;
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for packed in 0..count {
            let mut cand = unpack_digits(packed as u32, p, d as u32);
            cand.push(1);
            if poly_divides(p, &cand, poly) {
                return Some(cand);
            }
        }
    }
    None
}

/// Does monic `d` divide `f` over `F_p`?
fn poly_divides(p: u32, d: &[u32], f: &[u32]) -> bool {
    let p64 = p as u64;
    let mut rem: Vec<u64> = f.iter().map(|&c| c as u64).collect();
    let dd = d.len() - 1;
    while rem.len() > dd {
        let lead = rem[rem.len() - 1];
        if lead != 0 {
            let shift = rem.len() - 1 - dd;
            for (j, &dc) in d.iter().enumerate() {
                let idx = shift + j;
                rem[idx] = (rem[idx] + (p64 - dc as u64) * lead) % p64;
            }
        }
        rem.pop();
    }
    rem.iter().all(|&c| c == 0)
}
