use crate::coeff::QRat;
use crate::error::Result;
use crate::ncalg::{Alphabet, Derivation, NCExpr, RewriteSystem};

/// 2×2 matrix with entries `a¹ a²; a³ a⁴` in a graded algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormMatrix {
    pub a: [NCExpr; 4],
}

impl FormMatrix {
    pub fn new(a1: NCExpr, a2: NCExpr, a3: NCExpr, a4: NCExpr) -> Self {
        FormMatrix { a: [a1, a2, a3, a4] }
    }

    pub fn identity() -> Self {
        Self::diag(NCExpr::one(), NCExpr::one())
    }

    pub fn zero() -> Self {
        Self::diag(NCExpr::zero(), NCExpr::zero())
    }

    pub fn diag(a1: NCExpr, a4: NCExpr) -> Self {
        Self::new(a1, NCExpr::zero(), NCExpr::zero(), a4)
    }

    pub fn scalar_diag(c1: QRat, c4: QRat) -> Self {
        Self::diag(NCExpr::scalar(c1), NCExpr::scalar(c4))
    }

    /// Entry by 1-based index as in `a¹..a⁴`.
    pub fn entry(&self, k: usize) -> &NCExpr {
        &self.a[k - 1]
    }

    pub fn map<F: FnMut(&NCExpr) -> Result<NCExpr>>(&self, mut f: F) -> Result<FormMatrix> {
        Ok(FormMatrix {
            a: [f(&self.a[0])?, f(&self.a[1])?, f(&self.a[2])?, f(&self.a[3])?],
        })
    }

    pub fn reduce(&self, sys: &RewriteSystem) -> Result<FormMatrix> {
        self.map(|e| sys.reduce(e))
    }

    pub fn add(&self, other: &FormMatrix) -> FormMatrix {
        FormMatrix {
            a: [
                &self.a[0] + &other.a[0],
                &self.a[1] + &other.a[1],
                &self.a[2] + &other.a[2],
                &self.a[3] + &other.a[3],
            ],
        }
    }

    pub fn sub(&self, other: &FormMatrix) -> FormMatrix {
        self.add(&other.scale(&-QRat::one()))
    }

    pub fn scale(&self, c: &QRat) -> FormMatrix {
        FormMatrix { a: [self.a[0].scale(c), self.a[1].scale(c), self.a[2].scale(c), self.a[3].scale(c)] }
    }

    /// Row scaling by a scalar diagonal matrix on the left.
    pub fn left_diag(&self, c1: &QRat, c4: &QRat) -> FormMatrix {
        FormMatrix { a: [self.a[0].scale(c1), self.a[1].scale(c1), self.a[2].scale(c4), self.a[3].scale(c4)] }
    }

    pub fn mul(&self, other: &FormMatrix, sys: &RewriteSystem) -> Result<FormMatrix> {
        let [a1, a2, a3, a4] = &self.a;
        let [b1, b2, b3, b4] = &other.a;
        let e = |x: &NCExpr, y: &NCExpr, u: &NCExpr, v: &NCExpr| -> Result<NCExpr> {
            sys.reduce(&(x.concat(y) + u.concat(v)))
        };
        Ok(FormMatrix {
            a: [e(a1, b1, a2, b3)?, e(a1, b2, a2, b4)?, e(a3, b1, a4, b3)?, e(a3, b2, a4, b4)?],
        })
    }

    pub fn differential(&self, d: &Derivation, sys: &RewriteSystem) -> Result<FormMatrix> {
        self.map(|e| d.apply(e, sys))
    }

    /// `q² a¹ + a⁴`, reduced.
    pub fn q_trace(&self, sys: &RewriteSystem) -> Result<NCExpr> {
        sys.reduce(&(self.a[0].scale(&QRat::q_pow(2)) + self.a[3].clone()))
    }

    /// `a¹ a⁴ - q a² a³`, reduced.
    pub fn q_det(&self, sys: &RewriteSystem) -> Result<NCExpr> {
        let e = self.a[0].concat(&self.a[3]) - self.a[1].concat(&self.a[2]).scale(&QRat::q_pow(1));
        sys.reduce(&e)
    }

    pub fn is_zero(&self) -> bool {
        self.a.iter().all(NCExpr::is_zero)
    }

    pub fn render(&self, alphabet: &Alphabet) -> String {
        format!(
            "[[{}, {}], [{}, {}]]",
            self.a[0].render(alphabet),
            self.a[1].render(alphabet),
            self.a[2].render(alphabet),
            self.a[3].render(alphabet)
        )
    }

    /// Applies a word filter to every entry; used for substitutions that set
    /// generators to zero.
    pub fn filter<F: Fn(&[crate::ncalg::GenId]) -> bool + Copy>(&self, keep: F) -> FormMatrix {
        FormMatrix {
            a: [
                self.a[0].filter_words(keep),
                self.a[1].filter_words(keep),
                self.a[2].filter_words(keep),
                self.a[3].filter_words(keep),
            ],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncalg::Alphabet;
    use std::sync::Arc;

    #[test]
    fn scalar_traces() {
        let sys = RewriteSystem::free(Arc::new(Alphabet::new()));
        assert_eq!(
            FormMatrix::identity().q_trace(&sys).unwrap(),
            NCExpr::scalar(QRat::laurent(&[(1, 2), (1, 0)]))
        );
        assert!(FormMatrix::scalar_diag(QRat::one(), -QRat::q_pow(2)).q_trace(&sys).unwrap().is_zero());
        assert_eq!(FormMatrix::identity().q_det(&sys).unwrap(), NCExpr::one());
    }
}
