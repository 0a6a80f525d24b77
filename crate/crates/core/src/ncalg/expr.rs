use std::collections::BTreeMap;

use num_rational::BigRational;

use super::alphabet::{Alphabet, GenId};
use crate::coeff::QRat;
use crate::error::Result;

pub type Word = Vec<GenId>;

/// Finite Q(q)-linear combination of words. Zero coefficients are never
/// stored. Products here are plain concatenation; reduction lives in
/// [`super::RewriteSystem`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct NCExpr {
    terms: BTreeMap<Word, QRat>,
}

impl NCExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::scalar(QRat::one())
    }

    pub fn scalar(c: QRat) -> Self {
        Self::term(c, Vec::new())
    }

    pub fn term(c: QRat, word: Word) -> Self {
        let mut e = Self::zero();
        e.add_term(word, c);
        e
    }

    pub fn word(word: Word) -> Self {
        Self::term(QRat::one(), word)
    }

    pub fn gen(g: GenId) -> Self {
        Self::word(vec![g])
    }

    pub fn from_terms<I: IntoIterator<Item = (QRat, Word)>>(terms: I) -> Self {
        let mut e = Self::zero();
        for (c, w) in terms {
            e.add_term(w, c);
        }
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &QRat)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Word, QRat)> {
        self.terms.into_iter()
    }

    pub fn coeff(&self, word: &[GenId]) -> QRat {
        self.terms.get(word).cloned().unwrap_or_else(QRat::zero)
    }

    /// The scalar value when the expression has only the empty word.
    pub fn as_scalar(&self) -> Option<QRat> {
        match self.terms.len() {
            0 => Some(QRat::zero()),
            1 => self.terms.get(&Vec::new()).cloned(),
            _ => None,
        }
    }

    pub fn add_term(&mut self, word: Word, c: QRat) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&word) {
            Some(v) => {
                *v += &c;
                if v.is_zero() {
                    self.terms.remove(&word);
                }
            }
            None => {
                self.terms.insert(word, c);
            }
        }
    }

    pub fn add_scaled(&mut self, other: &NCExpr, c: &QRat) {
        if c.is_zero() {
            return;
        }
        for (w, v) in &other.terms {
            self.add_term(w.clone(), v * c);
        }
    }

    pub fn scale(&self, c: &QRat) -> NCExpr {
        if c.is_zero() {
            return NCExpr::zero();
        }
        NCExpr { terms: self.terms.iter().map(|(w, v)| (w.clone(), v * c)).collect() }
    }

    /// Concatenation product without reduction.
    pub fn concat(&self, other: &NCExpr) -> NCExpr {
        let mut out = NCExpr::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let mut w = a.clone();
                w.extend_from_slice(b);
                out.add_term(w, ca * cb);
            }
        }
        out
    }

    pub fn map_coeffs<F: Fn(&QRat) -> Result<QRat>>(&self, f: F) -> Result<NCExpr> {
        let mut out = NCExpr::zero();
        for (w, c) in &self.terms {
            out.add_term(w.clone(), f(c)?);
        }
        Ok(out)
    }

    pub fn specialize(&self, q0: &BigRational) -> Result<NCExpr> {
        self.map_coeffs(|c| c.specialize(q0))
    }

    /// Keeps only the terms whose words satisfy `keep`.
    pub fn filter_words<F: Fn(&[GenId]) -> bool>(&self, keep: F) -> NCExpr {
        NCExpr {
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| keep(w))
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    /// Letter-wise substitution; words are rebuilt by concatenation.
    pub fn substitute<F: Fn(GenId) -> NCExpr>(&self, f: F) -> NCExpr {
        let mut out = NCExpr::zero();
        for (w, c) in &self.terms {
            let mut acc = NCExpr::scalar(c.clone());
            for g in w {
                acc = acc.concat(&f(*g));
                if acc.is_zero() {
                    break;
                }
            }
            out.add_scaled(&acc, &QRat::one());
        }
        out
    }

    /// Form degrees present in the expression, ascending.
    pub fn degrees(&self, alphabet: &Alphabet) -> Vec<usize> {
        let mut d: Vec<usize> = self.terms.keys().map(|w| alphabet.degree(w)).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    /// Text in the expression grammar accepted by the CLI parser.
    pub fn render(&self, alphabet: &Alphabet) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (w, c)) in self.terms.iter().enumerate() {
            let negative = leading_sign_negative(c);
            let mag = if negative { -c } else { c.clone() };
            if i == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let coeff = render_coeff(&mag);
            let word = if w.is_empty() { String::new() } else { alphabet.render_word(w) };
            match (coeff.is_empty(), word.is_empty()) {
                (true, true) => out.push('1'),
                (true, false) => out.push_str(&word),
                (false, true) => out.push_str(&coeff),
                (false, false) => {
                    out.push_str(&coeff);
                    out.push(' ');
                    out.push_str(&word);
                }
            }
        }
        out
    }
}

fn leading_sign_negative(c: &QRat) -> bool {
    let s = c.to_string();
    s.starts_with('-') || s.starts_with("(-")
}

/// Coefficient text: empty for 1, parenthesized for multi-term Laurent
/// polynomials. Fractions need no parentheses since products associate left.
fn render_coeff(c: &QRat) -> String {
    if c.is_one() {
        return String::new();
    }
    if c.is_laurent() && !c.is_monomial() {
        return format!("({c})");
    }
    c.to_string()
}

impl From<QRat> for NCExpr {
    fn from(c: QRat) -> Self {
        NCExpr::scalar(c)
    }
}

impl std::ops::Add for &NCExpr {
    type Output = NCExpr;
    fn add(self, rhs: &NCExpr) -> NCExpr {
        let mut out = self.clone();
        out.add_scaled(rhs, &QRat::one());
        out
    }
}

impl std::ops::Sub for &NCExpr {
    type Output = NCExpr;
    fn sub(self, rhs: &NCExpr) -> NCExpr {
        let mut out = self.clone();
        out.add_scaled(rhs, &-QRat::one());
        out
    }
}

impl std::ops::Neg for &NCExpr {
    type Output = NCExpr;
    fn neg(self) -> NCExpr {
        self.scale(&-QRat::one())
    }
}

impl std::ops::Add for NCExpr {
    type Output = NCExpr;
    fn add(self, rhs: NCExpr) -> NCExpr {
        &self + &rhs
    }
}

impl std::ops::Sub for NCExpr {
    type Output = NCExpr;
    fn sub(self, rhs: NCExpr) -> NCExpr {
        &self - &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abc() -> (Alphabet, GenId, GenId) {
        let mut a = Alphabet::new();
        let x = a.even("x");
        let y = a.even("y");
        (a, x, y)
    }

    #[test]
    fn zero_coefficients_vanish() {
        let (_, x, _) = abc();
        let e = NCExpr::gen(x);
        assert!((&e - &e).is_zero());
        assert_eq!((&e + &e).coeff(&[x]), QRat::int(2));
    }

    #[test]
    fn concat_is_word_concatenation() {
        let (_, x, y) = abc();
        let e = NCExpr::gen(x).concat(&NCExpr::term(QRat::q_pow(2), vec![y]));
        assert_eq!(e.coeff(&[x, y]), QRat::q_pow(2));
    }

    #[test]
    fn rendering() {
        let (a, x, y) = abc();
        let mut e = NCExpr::term(QRat::q_pow(-2), vec![y, x]);
        e.add_term(vec![x, x], -QRat::laurent(&[(1, 4), (-1, 0)]));
        e.add_term(vec![], QRat::one());
        assert_eq!(e.render(&a), "1 - (q^4 - 1) x^2 + q^-2 y x");
        assert_eq!(NCExpr::zero().render(&a), "0");
    }
}
