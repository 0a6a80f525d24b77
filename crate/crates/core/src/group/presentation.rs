use std::sync::Arc;

use num_rational::BigRational;

use crate::coeff::QRat;
use crate::error::Result;
use crate::ncalg::{inverse_image, Alphabet, Derivation, GenId, NCExpr, Parity, RewriteSystem, RewriteSystemBuilder};

/// Generator handles of the Gauss-coordinate presentation, in canonical
/// order `f- < f+ < r < r^-1 < df- < df+ < dr`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Gens {
    pub m: GenId,
    pub p: GenId,
    pub r: GenId,
    pub ri: GenId,
    pub dm: GenId,
    pub dp: GenId,
    pub dr: GenId,
}

impl Gens {
    pub fn even(&self) -> [GenId; 4] {
        [self.m, self.p, self.r, self.ri]
    }

    pub fn odd(&self) -> [GenId; 3] {
        [self.dm, self.dp, self.dr]
    }
}

/// Which rule table to load for the two second-order relations that
/// involve `df+`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    /// Confluent and compatible with `d`: `df+ df+` is not nilpotent and
    /// the last term of `dr df+` carries a minus sign.
    Consistent,
    /// The printed table read literally: `dr df+` with a plus sign on its
    /// last term and `df+ df+ -> 0`.
    AsPrinted,
}

pub(crate) fn q(k: i64) -> QRat {
    QRat::q_pow(k)
}

/// `Σ c q^e`.
pub(crate) fn lp(terms: &[(i64, i64)]) -> QRat {
    QRat::laurent(terms)
}

pub(crate) fn ex(terms: Vec<(QRat, Vec<GenId>)>) -> NCExpr {
    NCExpr::from_terms(terms)
}

/// Adds the generators of the group presentation to `a`. The differentials
/// of `f+` and `r` weigh 4 so that `df+ f+ -> ... + f+^3 df-` decreases.
pub fn push_group_gens(a: &mut Alphabet) -> Result<Gens> {
    Ok(Gens {
        m: a.push("f-", Parity::Even, 1)?,
        p: a.push("f+", Parity::Even, 1)?,
        r: a.push("r", Parity::Even, 1)?,
        ri: a.push("r^-1", Parity::Even, 1)?,
        dm: a.push("df-", Parity::Odd, 1)?,
        dp: a.push("df+", Parity::Odd, 4)?,
        dr: a.push("dr", Parity::Odd, 4)?,
    })
}

/// Commutation rules among `f-, f+, r, r^-1`.
pub fn even_rules(b: RewriteSystemBuilder, g: &Gens) -> RewriteSystemBuilder {
    coordinate_rules(b, &g.coords())
}

/// [`even_rules`] for a bare coordinate set.
pub fn coordinate_rules(b: RewriteSystemBuilder, g: &super::Coords) -> RewriteSystemBuilder {
    b.commute(g.p, g.m, q(-2))
        .commute(g.r, g.m, q(1))
        .commute(g.r, g.p, q(1))
        .commute(g.ri, g.m, q(-1))
        .commute(g.ri, g.p, q(-1))
        .inverse_pair(g.r, g.ri)
}

/// First-order rules between differentials and coordinates.
pub fn first_order_rules(b: RewriteSystemBuilder, g: &Gens) -> RewriteSystemBuilder {
    let Gens { m, p, r, ri, dm, dp, dr } = *g;
    b.commute(dr, r, q(-2))
        .rule(dp, p, ex(vec![(q(-2), vec![p, dp]), (lp(&[(1, 4), (-1, 0)]), vec![p, p, p, dm])]))
        .commute(dm, m, q(2))
        .commute(dr, m, q(1))
        .commute(dp, m, q(-2))
        .commute(dm, p, q(2))
        .commute(dm, r, q(-1))
        .rule(dp, r, ex(vec![(q(-1), vec![r, dp]), (-lp(&[(1, 3), (-1, 1)]), vec![p, p, r, dm])]))
        .rule(dr, p, ex(vec![(q(1), vec![p, dr]), (-lp(&[(1, 4), (-1, 2)]), vec![p, p, r, dm])]))
        .commute(dr, ri, q(2))
        .commute(dm, ri, q(1))
        .rule(dp, ri, ex(vec![(q(1), vec![ri, dp]), (lp(&[(1, 3), (-1, 1)]), vec![p, p, ri, dm])]))
}

/// Rules among differentials.
pub fn second_order_rules(b: RewriteSystemBuilder, g: &Gens, variant: Variant) -> RewriteSystemBuilder {
    let Gens { m: _, p, r, ri: _, dm, dp, dr } = *g;
    let last = lp(&[(1, 1), (-1, -3)]);
    let last = match variant {
        Variant::Consistent => -last,
        Variant::AsPrinted => last,
    };
    let b = b
        .commute(dr, dm, -q(1))
        .commute(dp, dm, -q(-2))
        .rule(
            dr,
            dp,
            ex(vec![
                (-q(1), vec![dp, dr]),
                (-lp(&[(1, 5), (-1, 3)]), vec![p, p, dm, dr]),
                (last, vec![p, r, dm, dp]),
            ]),
        )
        .nilpotent(dm)
        .nilpotent(dr);
    match variant {
        Variant::Consistent => b.rule(dp, dp, ex(vec![(lp(&[(1, 2), (-1, -4)]), vec![p, p, dm, dp])])),
        Variant::AsPrinted => b.nilpotent(dp),
    }
}

/// The exterior derivative on the group generators.
pub fn exterior_derivative(g: &Gens) -> Derivation {
    Derivation::graded()
        .set(g.m, NCExpr::gen(g.dm))
        .set(g.p, NCExpr::gen(g.dp))
        .set(g.r, NCExpr::gen(g.dr))
        .set(g.ri, inverse_image(g.ri, &NCExpr::gen(g.dr)))
        .set(g.dm, NCExpr::zero())
        .set(g.dp, NCExpr::zero())
        .set(g.dr, NCExpr::zero())
}

/// SL_q(2,R) in Gauss coordinates with its left-invariant differential
/// calculus.
#[derive(Debug)]
pub struct GroupPresentation {
    pub sys: RewriteSystem,
    pub gens: Gens,
    pub d: Derivation,
    pub variant: Variant,
}

impl GroupPresentation {
    pub fn new() -> Result<Self> {
        Self::with_variant(Variant::Consistent)
    }

    pub fn with_variant(variant: Variant) -> Result<Self> {
        let mut a = Alphabet::new();
        let gens = push_group_gens(&mut a)?;
        let b = RewriteSystem::builder(Arc::new(a));
        let b = second_order_rules(first_order_rules(even_rules(b, &gens), &gens), &gens, variant);
        Ok(GroupPresentation { sys: b.build()?, gens, d: exterior_derivative(&gens), variant })
    }

    pub fn specialize(&self, q0: &BigRational) -> Result<Self> {
        Ok(GroupPresentation {
            sys: self.sys.specialize(q0)?,
            gens: self.gens,
            d: self.d.clone(),
            variant: self.variant,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.sys.alphabet()
    }

    pub fn reduce(&self, e: &NCExpr) -> Result<NCExpr> {
        self.sys.reduce(e)
    }

    pub fn mul(&self, a: &NCExpr, b: &NCExpr) -> Result<NCExpr> {
        self.sys.multiply(a, b)
    }

    pub fn diff(&self, e: &NCExpr) -> Result<NCExpr> {
        self.d.apply(e, &self.sys)
    }

    pub fn g(&self, id: GenId) -> NCExpr {
        NCExpr::gen(id)
    }

    pub fn word(&self, w: &[GenId]) -> NCExpr {
        NCExpr::word(w.to_vec())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loads_and_orients() {
        let g = GroupPresentation::new().unwrap();
        assert!(g.sys.orientation_violations().is_empty());
        let lit = GroupPresentation::with_variant(Variant::AsPrinted).unwrap();
        assert!(lit.sys.orientation_violations().is_empty());
    }

    #[test]
    fn basic_reductions() {
        let g = GroupPresentation::new().unwrap();
        let Gens { m, p, r, ri, dm, dp, .. } = g.gens;
        assert_eq!(g.reduce(&g.word(&[p, m])).unwrap(), NCExpr::term(q(-2), vec![m, p]));
        assert_eq!(g.reduce(&g.word(&[r, ri])).unwrap(), NCExpr::one());
        let got = g.reduce(&g.word(&[dp, p])).unwrap();
        let want = ex(vec![(q(-2), vec![p, dp]), (lp(&[(1, 4), (-1, 0)]), vec![p, p, p, dm])]);
        assert_eq!(got, want);
        assert_eq!(g.mul(&g.g(r), &g.g(m)).unwrap(), NCExpr::term(q(1), vec![m, r]));
    }
}
