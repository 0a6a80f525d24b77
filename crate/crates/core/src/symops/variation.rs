//! Infinitesimal transformations `X δ = Σ_n (X ∇_n) R^n` and the relations
//! they are claimed to satisfy.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{exchange, first_failure, Param, RightOperator, VectorFields, OperatorRelation};
use crate::coeff::QRat;
use crate::error::Result;
use crate::group::{lp, q, Coords};
use crate::ncalg::{NCExpr, Word};
use crate::verify::{Checks, Outcome};
use crate::wznw::Field;

/// The printed variations of the three coordinates, in the `R` triple.
pub fn printed_variation(v: &VectorFields, f: Field) -> NCExpr {
    let Coords { p, r, ri, .. } = v.coords;
    let [r1, r2, r3] = RightOperator::ALL.map(|op| v.param(Param::R, op));
    match f {
        Field::Rho => NCExpr::from_terms([(QRat::one(), vec![r, r1]), (-QRat::one(), vec![p, r, r, r, r2])]),
        Field::Minus => NCExpr::term(q(-1), vec![r, r, r2]),
        Field::Plus => NCExpr::from_terms([(q(1), vec![p, p, r, r, r2]), (q(1), vec![ri, ri, r3])]),
    }
}

/// `(X δ) Y = κ Y (X δ) + c Z (W δ)`.
#[derive(Clone, Debug)]
pub struct VariationRelation {
    pub varied: Field,
    pub other: Field,
    pub kappa: QRat,
    pub extra: Option<(QRat, Field, Field)>,
}

impl VariationRelation {
    pub fn label(&self) -> String {
        format!("({}d){}", self.varied.name(), self.other.name())
    }
}

/// The nine printed exchange relations between variations and coordinates.
pub fn variation_relations() -> Vec<VariationRelation> {
    use Field::*;
    let plain = |varied, other, kappa| VariationRelation { varied, other, kappa, extra: None };
    vec![
        plain(Rho, Rho, q(-2)),
        plain(Minus, Rho, q(-1)),
        VariationRelation {
            varied: Plus,
            other: Rho,
            kappa: q(-1),
            extra: Some((-lp(&[(1, 1), (-1, -1)]), Plus, Rho)),
        },
        plain(Rho, Minus, QRat::one()),
        plain(Minus, Minus, QRat::one()),
        plain(Plus, Minus, QRat::one()),
        plain(Rho, Plus, QRat::one()),
        plain(Minus, Plus, QRat::one()),
        plain(Plus, Plus, QRat::one()),
    ]
}

/// The operator relations read with `∇ → δ`.
pub fn compatibility_relations() -> [OperatorRelation; 3] {
    let [a, b, _] = super::printed_operator_relations();
    [a, b, super::corrected_third_relation()]
}

/// `κ` with `lhs = κ base`, if one exists.
pub fn fit_scalar(lhs: &NCExpr, base: &NCExpr) -> Option<QRat> {
    let (w, c) = base.terms().next()?;
    let kappa = lhs.coeff(w).checked_div(c).ok()?;
    (lhs - &base.scale(&kappa)).is_zero().then_some(kappa)
}

struct RelationSides {
    lhs: NCExpr,
    base: NCExpr,
}

fn relation_sides(v: &VectorFields, rel: &VariationRelation) -> Result<RelationSides> {
    let sys = &v.variations;
    let c = &v.coords;
    let xd = v.variation(&NCExpr::gen(rel.varied.coord(c)), Param::R)?;
    let y = NCExpr::gen(rel.other.coord(c));
    let mut lhs = sys.multiply(&xd, &y)?;
    if let Some((k, z, w)) = &rel.extra {
        let wd = v.variation(&NCExpr::gen(w.coord(c)), Param::R)?;
        lhs.add_scaled(&sys.multiply(&NCExpr::gen(z.coord(c)), &wd)?, &-k.clone());
    }
    Ok(RelationSides { lhs: sys.reduce(&lhs)?, base: sys.multiply(&y, &xd)? })
}

pub(super) fn variation_checks(v: &VectorFields, rng: &mut ChaCha8Rng, checks: &mut Checks) {
    let a = v.alphabet().clone();
    let c = v.coords;
    let sys = &v.variations;

    let tag = "infinitesimal-transformations";
    checks.run("symops.variation.commutator", tag, || {
        // [X, ∇_n R^n] = (X ∇_n) R^n needs a_n(X) c_n(X) = 1, where
        // X R^n = c_n(X) R^n X.
        let mut bad = Vec::new();
        for op in RightOperator::ALL {
            for f in Field::ALL {
                let cn = if f == Field::Rho { q(op.parameter_exponent()) } else { QRat::one() };
                let prod = sys.scalar(&(exchange(op, f, &c).a * cn))?;
                if !prod.is_one() {
                    bad.push(format!("{},{}", op.name(), f.name()));
                }
            }
        }
        Ok(Outcome::flag(bad.is_empty(), format!("exponents cancel for all pairs except [{}]", bad.join(" "))))
    });
    for f in Field::ALL {
        checks.run(&format!("symops.variation[{}]", f.name()), tag, || {
            let got = v.variation(&NCExpr::gen(f.coord(&c)), Param::R)?;
            let res = sys.reduce(&(&got - &printed_variation(v, f)))?;
            Ok(Outcome::zero(&res, &a).with_detail(format!("{}d = {}", f.name(), got.render(&a))))
        });
    }
    let letters = v.coord_letters();
    let mut sample: Vec<Word> = letters.iter().map(|g| vec![*g]).collect();
    for _ in 0..100 {
        let len = rng.gen_range(2..=4);
        sample.push((0..len).map(|_| letters[rng.gen_range(0..letters.len())]).collect());
    }
    checks.run("symops.variation.leibniz", tag, || {
        first_failure(&sample, &a, |w| {
            sys.reduce(&(&v.variation(w, Param::R)? - &v.variation_leibniz(w, Param::R)?))
        })
    });

    let tag = "variation-exchange-relations";
    for rel in variation_relations() {
        let id = format!("symops.variation.cr[{}]", rel.label());
        let sides = relation_sides(v, &rel);
        checks.run(&id, tag, || {
            let s = sides.as_ref().map_err(|e| crate::Error::Inconsistent(e.to_string()))?;
            let res = sys.reduce(&(&s.lhs - &s.base.scale(&sys.scalar(&rel.kappa)?)))?;
            Ok(Outcome::zero(&res, &a).with_detail(format!("printed coefficient {}", rel.kappa)))
        });
        checks.run(&format!("{id}.fit"), tag, || {
            let s = sides.as_ref().map_err(|e| crate::Error::Inconsistent(e.to_string()))?;
            Ok(match fit_scalar(&s.lhs, &s.base) {
                Some(k) => Outcome::scalar(&k, &sys.scalar(&rel.kappa)?).informational(),
                None => Outcome::flag(false, "no scalar coefficient fits".into()).informational(),
            })
        });
    }

    let tag = "compatibility-algebra";
    let mut words: Vec<Word> = vec![Vec::new()];
    words.extend(sample.iter().cloned());
    checks.run("symops.compat.assumptions", tag, || {
        Ok(Outcome::flag(
            true,
            "two independent parameter triples R, S; both obey r P^n = q^k P^n r with k = (2, 1, 1) and commute \
             with f-, f+; S^b R^a = R^a S^b; X(d_R d_S) := (X d_R) d_S"
                .into(),
        ))
    });
    for (i, rel) in compatibility_relations().iter().enumerate() {
        checks.run(&format!("symops.compat[{}]", i + 1), tag, || {
            first_failure(&words, &a, |w| v.compatibility_residual(rel, w))
        });
    }
}
