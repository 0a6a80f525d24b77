//! Time derivatives of the coordinates and of the transformation parameters.

use std::sync::Arc;

use num_rational::BigRational;

use super::RightOperator;
use crate::coeff::QRat;
use crate::error::Result;
use crate::group::{coordinate_rules, q, Coords};
use crate::ncalg::{critical_pairs, inverse_image, Alphabet, Derivation, GenId, NCExpr, Parity, RewriteSystem};
use crate::verify::{Checks, Outcome};
use crate::wznw::Field;

/// Which exchange table between `r` and the parameter derivatives to load.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DotTable {
    /// `r R1' = R1' r`, as printed.
    Printed,
    /// `r R1' = q² R1' r`, the coefficient of `r R1`.
    Consistent,
}

impl DotTable {
    pub fn id(self) -> &'static str {
        match self {
            DotTable::Printed => "printed",
            DotTable::Consistent => "consistent",
        }
    }

    /// `j` in `r Rn' = q^j Rn' r`.
    fn exponent(self, op: RightOperator) -> i64 {
        match (self, op) {
            (DotTable::Printed, RightOperator::Hat1) => 0,
            _ => op.parameter_exponent(),
        }
    }
}

/// Coordinates, their time derivatives, the parameters `R^n` and their time
/// derivatives.
///
/// Beyond the `r` rows of the table, `f±'` commute with `R^n` and `R^n'`
/// and `f±` commute with `R^n'`; these are the rows obtained from
/// `f± R^n = R^n f±` when derivatives of like order are exchanged like
/// their undifferentiated counterparts.
#[derive(Debug)]
pub struct TimeExtended {
    pub sys: RewriteSystem,
    pub coords: Coords,
    pub dots: Coords,
    pub params: [GenId; 3],
    pub param_dots: [GenId; 3],
    pub dt: Derivation,
    pub table: DotTable,
}

impl TimeExtended {
    pub fn new(table: DotTable) -> Result<Self> {
        let mut a = Alphabet::new();
        let coords = Coords {
            m: a.push("f-", Parity::Even, 1)?,
            p: a.push("f+", Parity::Even, 1)?,
            r: a.push("r", Parity::Even, 1)?,
            ri: a.push("r^-1", Parity::Even, 1)?,
        };
        let dm = a.push("f-'", Parity::Even, 1)?;
        let dp = a.push("f+'", Parity::Even, 1)?;
        let dr = a.push("r'", Parity::Even, 1)?;
        let mut params = [GenId(0); 3];
        let mut param_dots = [GenId(0); 3];
        for op in RightOperator::ALL {
            params[op.index()] = a.push(&format!("R{}", op.index() + 1), Parity::Even, 1)?;
        }
        for op in RightOperator::ALL {
            param_dots[op.index()] = a.push(&format!("R{}'", op.index() + 1), Parity::Even, 1)?;
        }
        let a = Arc::new(a);
        let one = QRat::one;
        let mut b = coordinate_rules(RewriteSystem::builder(a), &coords);
        for op in RightOperator::ALL {
            let k = op.parameter_exponent();
            let j = table.exponent(op);
            let (pn, pd) = (params[op.index()], param_dots[op.index()]);
            b = b
                .commute(pn, coords.r, q(-k))
                .commute(pn, coords.ri, q(k))
                .commute(pn, coords.m, one())
                .commute(pn, coords.p, one())
                .commute(pn, dr, q(-k))
                .commute(pn, dm, one())
                .commute(pn, dp, one())
                .commute(pd, dr, q(-k))
                .commute(pd, dm, one())
                .commute(pd, dp, one())
                .commute(pd, coords.r, q(-j))
                .commute(pd, coords.ri, q(j))
                .commute(pd, coords.m, one())
                .commute(pd, coords.p, one());
        }
        let mut dt = Derivation::ungraded()
            .set(coords.m, NCExpr::gen(dm))
            .set(coords.p, NCExpr::gen(dp))
            .set(coords.r, NCExpr::gen(dr))
            .set(coords.ri, inverse_image(coords.ri, &NCExpr::gen(dr)));
        for n in 0..3 {
            dt.insert(params[n], NCExpr::gen(param_dots[n]));
        }
        Ok(TimeExtended {
            sys: b.build()?,
            coords,
            dots: Coords { m: dm, p: dp, r: dr, ri: coords.ri },
            params,
            param_dots,
            dt,
            table,
        })
    }

    pub fn specialize(self, q0: Option<&BigRational>) -> Result<Self> {
        let Some(q0) = q0 else { return Ok(self) };
        Ok(TimeExtended { sys: self.sys.specialize(q0)?, ..self })
    }

    /// `X R^n − c R^n X`, one per coordinate and parameter.
    pub fn parameter_relations(&self) -> Vec<(String, NCExpr)> {
        let mut out = Vec::new();
        for f in Field::ALL {
            for op in RightOperator::ALL {
                let c = if f == Field::Rho { q(op.parameter_exponent()) } else { QRat::one() };
                let (x, pn) = (f.coord(&self.coords), self.params[op.index()]);
                let rel = NCExpr::from_terms([(QRat::one(), vec![x, pn]), (-c, vec![pn, x])]);
                out.push((format!("{},R{}", f.name(), op.index() + 1), rel));
            }
        }
        out
    }

    /// Normal form of `d/dt` applied to an unreduced relation.
    pub fn differentiate(&self, rel: &NCExpr) -> Result<NCExpr> {
        self.sys.reduce(&self.dt.expand(rel, &self.sys)?)
    }

    /// The printed rows among derivatives: `r' Rn' = q^k Rn' r'` and
    /// `f±' Rn' = Rn' f±'`.
    pub fn printed_dot_rows(&self) -> Vec<(String, NCExpr)> {
        let mut out = Vec::new();
        for op in RightOperator::ALL {
            let pd = self.param_dots[op.index()];
            for (name, x, c) in [
                ("r'", self.dots.r, q(op.parameter_exponent())),
                ("f-'", self.dots.m, QRat::one()),
                ("f+'", self.dots.p, QRat::one()),
            ] {
                let rel = NCExpr::from_terms([(QRat::one(), vec![x, pd]), (-c, vec![pd, x])]);
                out.push((format!("{name},R{}'", op.index() + 1), rel));
            }
        }
        out
    }
}

pub(super) fn time_checks(q0: Option<&BigRational>, checks: &mut Checks) {
    for table in [DotTable::Printed, DotTable::Consistent] {
        let tag = "time-derivatives";
        let id = table.id();
        let t = match TimeExtended::new(table).and_then(|t| t.specialize(q0)) {
            Ok(t) => t,
            Err(e) => {
                checks.run(&format!("symops.dt.{id}.presentation"), tag, || Err(e));
                continue;
            }
        };
        let a = t.sys.alphabet().clone();
        checks.run(&format!("symops.dt.{id}.confluence"), tag, || {
            let rep = critical_pairs(&t.sys)?;
            Ok(Outcome::flag(rep.is_confluent(), format!("{} overlaps", rep.overlaps_checked)))
        });
        for (label, rel) in t.parameter_relations() {
            checks.run(&format!("symops.dt.{id}.consistency[{label}]"), tag, || {
                Ok(Outcome::zero(&t.differentiate(&rel)?, &a))
            });
        }
        checks.run(&format!("symops.dt.{id}.derivative-rows"), tag, || {
            let mut total = NCExpr::zero();
            for (_, rel) in t.printed_dot_rows() {
                total = total + t.sys.reduce(&rel)?;
            }
            Ok(Outcome::zero(&total, &a))
        });
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn consistent_table_differentiates_cleanly() {
        let t = TimeExtended::new(DotTable::Consistent).unwrap();
        for (label, rel) in t.parameter_relations() {
            assert!(t.differentiate(&rel).unwrap().is_zero(), "{label}");
        }
    }

    #[test]
    fn printed_table_breaks_on_r_r1() {
        let t = TimeExtended::new(DotTable::Printed).unwrap();
        let bad: Vec<String> = t
            .parameter_relations()
            .into_iter()
            .filter(|(_, rel)| !t.differentiate(rel).unwrap().is_zero())
            .map(|(l, _)| l)
            .collect();
        assert_eq!(bad, vec!["r,R1".to_string()]);
    }
}
