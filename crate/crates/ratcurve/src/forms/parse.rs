//! Recursive-descent parser for the form grammar: declared variable names (or
//! the default `x0..x31`), integer literals reduced into the field, the
//! extension generator `g`, operators `+ - * ^` and parentheses. Whitespace
//! insensitive.

use crate::field::{Field, FqElem};

use super::{map_add_term, map_mul, FormsError, MultiForm, TermMap};

/// Parse a form and verify homogeneity against the weight vector.
pub fn parse_form(
    text: &str,
    field: &Field,
    var_names: &[String],
    weights: &[u32],
) -> Result<MultiForm, FormsError> {
    assert_eq!(var_names.len(), weights.len());
    let poly = parse_poly(text, field, var_names)?;
    if poly.is_empty() && text.trim() != "0" {
        return Err(FormsError::EmptyForm);
    }
    let form = MultiForm::from_terms(weights, poly);
    // Re-render the inhomogeneity diagnostic with the declared names.
    match form {
        Err(FormsError::Inhomogeneous(_, _)) => {
            let poly = parse_poly(text, field, var_names)?;
            let mut seen: Option<(super::Expo, u32)> = None;
            for (expo, _) in &poly {
                let d = super::weighted_degree(expo, weights);
                match &seen {
                    None => seen = Some((expo.clone(), d)),
                    Some((first, d0)) if *d0 != d => {
                        return Err(FormsError::Inhomogeneous(
                            super::render_monomial(first, var_names),
                            super::render_monomial(expo, var_names),
                        ));
                    }
                    _ => {}
                }
            }
            unreachable!("from_terms reported inhomogeneity")
        }
        other => other,
    }
}

/// Parse into a raw term map without any homogeneity requirement.
pub(crate) fn parse_poly(
    text: &str,
    field: &Field,
    var_names: &[String],
) -> Result<TermMap, FormsError> {
    let mut p = Parser {
        tokens: tokenize(text, var_names, field)?,
        pos: 0,
        field,
        nvars: var_names.len(),
    };
    let poly = p.expr()?;
    if p.pos != p.tokens.len() {
        return Err(FormsError::Parse {
            pos: p.tokens[p.pos].1,
            msg: "unexpected trailing input".to_string(),
        });
    }
    Ok(poly)
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    Int(u64),
    Var(usize),
    Gen,
}

fn tokenize(text: &str, var_names: &[String], field: &Field) -> Result<Vec<(Tok, usize)>, FormsError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                out.push((Tok::Plus, i));
                i += 1;
            }
            '-' => {
                out.push((Tok::Minus, i));
                i += 1;
            }
            '*' => {
                out.push((Tok::Star, i));
                i += 1;
            }
            '^' => {
                out.push((Tok::Caret, i));
                i += 1;
            }
            '(' => {
                out.push((Tok::LParen, i));
                i += 1;
            }
            ')' => {
                out.push((Tok::RParen, i));
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let lit = &text[start..i];
                let n = lit.parse::<u64>().map_err(|_| FormsError::Parse {
                    pos: start,
                    msg: format!("integer literal `{lit}` is too large"),
                })?;
                out.push((Tok::Int(n), start));
            }
            c if c.is_ascii_alphabetic() => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                let name = &text[start..i];
                if let Some(idx) = var_names.iter().position(|v| v == name) {
                    out.push((Tok::Var(idx), start));
                } else if name == "g" {
                    if field.k() == 1 {
                        return Err(FormsError::CoefficientNotInField("g".to_string()));
                    }
                    out.push((Tok::Gen, start));
                } else {
                    return Err(FormsError::UnknownVariable(name.to_string()));
                }
            }
            other => {
                return Err(FormsError::Parse {
                    pos: i,
                    msg: format!("unexpected character `{other}`"),
                })
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<(Tok, usize)>,
    pos: usize,
    field: &'a Field,
    nvars: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    fn here(&self) -> usize {
        self.tokens
            .get(self.pos)
            .or_else(|| self.tokens.last())
            .map(|(_, p)| *p)
            .unwrap_or(0)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.tokens.get(self.pos).map(|(t, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    /// expr := ['-'] term (('+'|'-') term)*
    fn expr(&mut self) -> Result<TermMap, FormsError> {
        let mut negate_first = false;
        if self.peek() == Some(&Tok::Minus) {
            self.bump();
            negate_first = true;
        }
        let mut acc = self.term()?;
        if negate_first {
            acc = self.negate(acc);
        }
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    let t = self.term()?;
                    acc = self.combine(acc, t, false);
                }
                Some(Tok::Minus) => {
                    self.bump();
                    let t = self.term()?;
                    acc = self.combine(acc, t, true);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    /// term := factor ('*' factor)*
    fn term(&mut self) -> Result<TermMap, FormsError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(&Tok::Star) {
            self.bump();
            let f = self.factor()?;
            acc = map_mul(self.field, &acc, &f);
        }
        Ok(acc)
    }

    /// factor := atom ['^' uint]
    fn factor(&mut self) -> Result<TermMap, FormsError> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.bump();
            let pos = self.here();
            match self.bump() {
                Some(Tok::Int(n)) => {
                    if n > 512 {
                        return Err(FormsError::Parse {
                            pos,
                            msg: format!("exponent {n} is unreasonably large"),
                        });
                    }
                    Ok(self.pow(base, n))
                }
                _ => Err(FormsError::Parse {
                    pos,
                    msg: "expected a nonnegative integer exponent after `^`".to_string(),
                }),
            }
        } else {
            Ok(base)
        }
    }

    /// atom := '(' expr ')' | var | int | 'g'
    fn atom(&mut self) -> Result<TermMap, FormsError> {
        let pos = self.here();
        match self.bump() {
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                match self.bump() {
                    Some(Tok::RParen) => Ok(inner),
                    _ => Err(FormsError::Parse {
                        pos,
                        msg: "unclosed parenthesis".to_string(),
                    }),
                }
            }
            Some(Tok::Var(i)) => {
                let mut expo = vec![0u16; self.nvars];
                expo[i] = 1;
                Ok(self.singleton(expo, self.field.one()))
            }
            Some(Tok::Int(n)) => {
                let c = self.field.from_int((n % self.field.p() as u64) as i64);
                Ok(self.singleton(vec![0u16; self.nvars], c))
            }
            Some(Tok::Gen) => Ok(self.singleton(vec![0u16; self.nvars], self.field.gen_g())),
            _ => Err(FormsError::Parse {
                pos,
                msg: "expected a variable, number, `g` or parenthesized expression".to_string(),
            }),
        }
    }

    fn singleton(&self, expo: Vec<u16>, c: FqElem) -> TermMap {
        let mut map = TermMap::new();
        if !c.is_zero() {
            map.insert(expo, c);
        }
        map
    }

    fn negate(&self, map: TermMap) -> TermMap {
        map.into_iter()
            .map(|(e, c)| (e, self.field.neg(c)))
            .collect()
    }

    fn combine(&self, mut acc: TermMap, other: TermMap, subtract: bool) -> TermMap {
        for (e, c) in other {
            let c = if subtract { self.field.neg(c) } else { c };
            map_add_term(self.field, &mut acc, e, c);
        }
        acc
    }

    fn pow(&self, base: TermMap, n: u64) -> TermMap {
        let mut acc = self.singleton(vec![0u16; self.nvars], self.field.one());
        for _ in 0..n {
            acc = map_mul(self.field, &acc, &base);
        }
        acc
    }
}
