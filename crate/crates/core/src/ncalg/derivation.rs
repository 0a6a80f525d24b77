use std::collections::HashMap;

use super::alphabet::GenId;
use super::expr::NCExpr;
use super::rewrite::RewriteSystem;
use crate::coeff::QRat;
use crate::error::{Error, Result};

/// A linear map defined on generators and extended by the Leibniz rule.
///
/// With `graded` set, the term that differentiates position `i` carries the
/// sign `(-1)^k` where `k` is the form degree of the prefix before `i`.
#[derive(Clone, Debug)]
pub struct Derivation {
    images: HashMap<GenId, NCExpr>,
    graded: bool,
}

impl Derivation {
    pub fn graded() -> Self {
        Derivation { images: HashMap::new(), graded: true }
    }

    pub fn ungraded() -> Self {
        Derivation { images: HashMap::new(), graded: false }
    }

    pub fn set(mut self, g: GenId, image: NCExpr) -> Self {
        self.images.insert(g, image);
        self
    }

    pub fn insert(&mut self, g: GenId, image: NCExpr) {
        self.images.insert(g, image);
    }

    pub fn image(&self, g: GenId) -> Option<&NCExpr> {
        self.images.get(&g)
    }

    /// Unreduced Leibniz expansion.
    pub fn expand(&self, e: &NCExpr, sys: &RewriteSystem) -> Result<NCExpr> {
        let alphabet = sys.alphabet();
        let mut out = NCExpr::zero();
        for (w, c) in e.terms() {
            let mut odd_prefix = 0usize;
            for (i, &g) in w.iter().enumerate() {
                let image = self
                    .images
                    .get(&g)
                    .ok_or_else(|| Error::UnknownGenerator(format!("{} (no image)", alphabet.name(g))))?;
                if !image.is_zero() {
                    let sign = if self.graded && odd_prefix % 2 == 1 { -c } else { c.clone() };
                    let left = NCExpr::word(w[..i].to_vec());
                    let right = NCExpr::word(w[i + 1..].to_vec());
                    out.add_scaled(&left.concat(image).concat(&right), &sign);
                }
                if alphabet.is_odd(g) {
                    odd_prefix += 1;
                }
            }
        }
        Ok(out)
    }

    /// Leibniz expansion followed by reduction.
    pub fn apply(&self, e: &NCExpr, sys: &RewriteSystem) -> Result<NCExpr> {
        sys.reduce(&self.expand(&sys.reduce(e)?, sys)?)
    }

    /// For every rule `L -> R` of `sys`, the rendered `L` and the normal form
    /// of `D(L - R)`.
    /// A derivation is compatible with the presentation when all vanish.
    pub fn rule_residuals(&self, sys: &RewriteSystem) -> Result<Vec<(String, NCExpr)>> {
        let alphabet = sys.alphabet();
        let mut out = Vec::new();
        for rule in sys.rules() {
            let lhs = NCExpr::word(vec![rule.lhs.0, rule.lhs.1]);
            let diff = &lhs - &rule.rhs;
            let residual = sys.reduce(&self.expand(&diff, sys)?)?;
            out.push((alphabet.render_word(&[rule.lhs.0, rule.lhs.1]), residual));
        }
        Ok(out)
    }
}

/// `-g⁻¹ · dg · g⁻¹`, the image of an inverse generator under `d`.
pub fn inverse_image(inv: GenId, dg: &NCExpr) -> NCExpr {
    NCExpr::gen(inv).concat(dg).concat(&NCExpr::gen(inv)).scale(&-QRat::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncalg::Alphabet;
    use std::sync::Arc;

    #[test]
    fn graded_sign_on_odd_prefix() {
        let mut a = Alphabet::new();
        let x = a.even("x");
        let dx = a.odd("dx");
        let sys = RewriteSystem::free(Arc::new(a));
        let d = Derivation::graded().set(x, NCExpr::gen(dx)).set(dx, NCExpr::zero());
        let e = NCExpr::word(vec![dx, x]);
        let got = d.apply(&e, &sys).unwrap();
        assert_eq!(got, NCExpr::term(-QRat::one(), vec![dx, dx]));
        let e = NCExpr::word(vec![x, x]);
        let got = d.apply(&e, &sys).unwrap();
        assert_eq!(got.coeff(&[dx, x]), QRat::one());
        assert_eq!(got.coeff(&[x, dx]), QRat::one());
    }

    #[test]
    fn missing_image_is_an_error() {
        let mut a = Alphabet::new();
        let x = a.even("x");
        let sys = RewriteSystem::free(Arc::new(a));
        let d = Derivation::graded();
        assert!(d.apply(&NCExpr::gen(x), &sys).is_err());
    }
}
