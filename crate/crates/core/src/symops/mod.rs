//! Left vector fields as operators acting from the right on functions of the
//! group coordinates, and the variational calculus they generate.
//!
//! An operator is known only through its exchange relations with the
//! coordinates, `x ∇ = a ∇ x + b`. To apply `∇` to `e`, the word `e ∇` is
//! reduced until `∇` stands leftmost; the counit then drops every term that
//! still carries `∇`, and what is left is `e ∇`.

mod time;
mod variation;

use std::sync::Arc;

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coeff::{q_number, QRat};
use crate::error::{Error, Result};
use crate::group::{coordinate_rules, q, Coords};
use crate::ncalg::{critical_pairs, Alphabet, GenId, NCExpr, Parity, RewriteSystem, Word};
use crate::verify::{Checks, Outcome};
use crate::wznw::Field;

pub use time::{DotTable, TimeExtended};
pub use variation::{compatibility_relations, fit_scalar, printed_variation, variation_relations, VariationRelation};

/// `∇̂₁ = ∇₁ − q²∇₄`, `∇₂`, `∇₃`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RightOperator {
    Hat1,
    Two,
    Three,
}

impl RightOperator {
    pub const ALL: [RightOperator; 3] = [RightOperator::Hat1, RightOperator::Two, RightOperator::Three];

    pub fn name(self) -> &'static str {
        match self {
            RightOperator::Hat1 => "N1^",
            RightOperator::Two => "N2",
            RightOperator::Three => "N3",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    /// `k` in `r P = q^k P r` for the transformation parameter `P` paired
    /// with this operator.
    pub fn parameter_exponent(self) -> i64 {
        match self {
            RightOperator::Hat1 => 2,
            _ => 1,
        }
    }
}

/// `x ∇ = a ∇ x + b`.
#[derive(Clone, Debug)]
pub struct Exchange {
    pub a: QRat,
    pub b: NCExpr,
}

/// Exchange relation of `op` with the coordinate `f`.
pub fn exchange(op: RightOperator, f: Field, c: &Coords) -> Exchange {
    use Field::*;
    use RightOperator::*;
    let Coords { p, r, ri, .. } = *c;
    let (a, b) = match (op, f) {
        (Hat1, Rho) => (q(-2), NCExpr::gen(r)),
        (Hat1, _) => (QRat::one(), NCExpr::zero()),
        (Two, Rho) => (q(-1), NCExpr::term(-QRat::one(), vec![p, r, r, r])),
        (Two, Minus) => (QRat::one(), NCExpr::term(q(-1), vec![r, r])),
        (Two, Plus) => (QRat::one(), NCExpr::term(q(1), vec![p, p, r, r])),
        (Three, Rho) => (q(-1), NCExpr::zero()),
        (Three, Minus) => (QRat::one(), NCExpr::zero()),
        (Three, Plus) => (QRat::one(), NCExpr::term(q(1), vec![ri, ri])),
    };
    Exchange { a, b }
}

/// Which of the two independent parameter triples a variation uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Param {
    R,
    S,
}

/// The coordinates, one operator symbol per vector field and two triples of
/// transformation parameters, over a single alphabet.
#[derive(Debug)]
pub struct VectorFields {
    pub coords: Coords,
    nabla: [GenId; 3],
    params: [[GenId; 3]; 2],
    base: RewriteSystem,
    ops: Vec<RewriteSystem>,
    pub variations: RewriteSystem,
}

impl VectorFields {
    pub fn new() -> Result<Self> {
        let mut a = Alphabet::new();
        // Operator symbols come first and weigh more than anything they are
        // exchanged with, so `x ∇ -> a ∇ x + b` is decreasing.
        let mut nabla = [GenId(0); 3];
        for op in RightOperator::ALL {
            nabla[op.index()] = a.push(op.name(), Parity::Even, 10)?;
        }
        let coords = Coords {
            m: a.push("f-", Parity::Even, 1)?,
            p: a.push("f+", Parity::Even, 1)?,
            r: a.push("r", Parity::Even, 1)?,
            ri: a.push("r^-1", Parity::Even, 1)?,
        };
        let mut params = [[GenId(0); 3]; 2];
        for (set, prefix) in [(0, "R"), (1, "S")] {
            for n in 0..3 {
                params[set][n] = a.push(&format!("{prefix}{}", n + 1), Parity::Even, 1)?;
            }
        }
        let a = Arc::new(a);
        let base = coordinate_rules(RewriteSystem::builder(a.clone()), &coords).build()?;

        let mut ops = Vec::new();
        for op in RightOperator::ALL {
            let n = nabla[op.index()];
            let mut b = coordinate_rules(RewriteSystem::builder(a.clone()), &coords);
            for f in Field::ALL {
                let Exchange { a: c, b: rest } = exchange(op, f, &coords);
                let x = f.coord(&coords);
                let mut rhs = NCExpr::term(c.clone(), vec![n, x]);
                rhs = rhs + rest.clone();
                b = b.rule(x, n, rhs);
                if f == Field::Rho {
                    // Conjugating by r^-1: r^-1 ∇ = a⁻¹ ∇ r^-1 − a⁻¹ r^-1 b r^-1.
                    let ci = c.inv()?;
                    let wrapped = NCExpr::gen(coords.ri).concat(&rest).concat(&NCExpr::gen(coords.ri));
                    let mut rhs = NCExpr::term(ci.clone(), vec![n, coords.ri]);
                    rhs.add_scaled(&base.reduce(&wrapped)?, &-ci);
                    b = b.rule(coords.ri, n, rhs);
                }
            }
            ops.push(b.build()?);
        }

        let mut b = coordinate_rules(RewriteSystem::builder(a.clone()), &coords);
        for set in params {
            for op in RightOperator::ALL {
                let k = op.parameter_exponent();
                let pn = set[op.index()];
                b = b
                    .commute(pn, coords.r, q(-k))
                    .commute(pn, coords.ri, q(k))
                    .commute(pn, coords.m, QRat::one())
                    .commute(pn, coords.p, QRat::one());
            }
        }
        for s in params[1] {
            for r in params[0] {
                b = b.commute(s, r, QRat::one());
            }
        }
        let variations = b.build()?;
        Ok(VectorFields { coords, nabla, params, base, ops, variations })
    }

    pub fn specialize(self, q0: Option<&BigRational>) -> Result<Self> {
        let Some(q0) = q0 else { return Ok(self) };
        Ok(VectorFields {
            coords: self.coords,
            nabla: self.nabla,
            params: self.params,
            base: self.base.specialize(q0)?,
            ops: self.ops.iter().map(|s| s.specialize(q0)).collect::<Result<_>>()?,
            variations: self.variations.specialize(q0)?,
        })
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        self.base.alphabet()
    }

    /// The coordinate presentation.
    pub fn base(&self) -> &RewriteSystem {
        &self.base
    }

    /// The coordinate presentation extended by the exchange relations of `op`.
    pub fn operator_system(&self, op: RightOperator) -> &RewriteSystem {
        &self.ops[op.index()]
    }

    pub fn nabla(&self, op: RightOperator) -> GenId {
        self.nabla[op.index()]
    }

    pub fn param(&self, set: Param, op: RightOperator) -> GenId {
        self.params[set as usize][op.index()]
    }

    pub fn coord_letters(&self) -> [GenId; 4] {
        [self.coords.m, self.coords.p, self.coords.r, self.coords.ri]
    }

    /// `e ∇` for `e` a polynomial in the coordinates.
    pub fn apply(&self, op: RightOperator, e: &NCExpr) -> Result<NCExpr> {
        let n = self.nabla(op);
        let nf = self.ops[op.index()].reduce(&e.concat(&NCExpr::gen(n)))?;
        let mut out = NCExpr::zero();
        for (w, c) in nf.terms() {
            match w.iter().position(|g| *g == n) {
                None => out.add_term(w.clone(), c.clone()),
                Some(0) => {}
                Some(_) => {
                    return Err(Error::Inconsistent(format!(
                        "operator {} did not reach the left end of {}",
                        op.name(),
                        self.alphabet().render_word(w)
                    )))
                }
            }
        }
        Ok(out)
    }

    /// `e (first second)`: right action, `first` acts before `second`.
    pub fn compose(&self, first: RightOperator, second: RightOperator, e: &NCExpr) -> Result<NCExpr> {
        self.apply(second, &self.apply(first, e)?)
    }

    /// `Σ c · e(A B) − c' · e C` for a relation among the operators.
    pub fn relation_residual(&self, rel: &OperatorRelation, e: &NCExpr) -> Result<NCExpr> {
        let mut out = NCExpr::zero();
        for (c, a, b) in &rel.lhs {
            out.add_scaled(&self.compose(*a, *b, e)?, c);
        }
        out.add_scaled(&self.apply(rel.rhs.1, e)?, &-rel.rhs.0.clone());
        self.base.reduce(&out)
    }

    /// `e δ = Σ_n (e ∇_n) P^n`, with `P` the chosen parameter triple.
    pub fn variation(&self, e: &NCExpr, set: Param) -> Result<NCExpr> {
        let mut out = NCExpr::zero();
        for op in RightOperator::ALL {
            let v = self.apply(op, e)?;
            out = out + v.concat(&NCExpr::gen(self.param(set, op)));
        }
        self.variations.reduce(&out)
    }

    /// `e δ` computed letter by letter: every coordinate letter `x` is
    /// replaced in turn by `x δ`, parameters are left alone.
    pub fn variation_leibniz(&self, e: &NCExpr, set: Param) -> Result<NCExpr> {
        let coords = self.coord_letters();
        let mut images = Vec::new();
        for x in coords {
            images.push(self.variation(&NCExpr::gen(x), set)?);
        }
        let mut out = NCExpr::zero();
        for (w, c) in e.terms() {
            for (i, g) in w.iter().enumerate() {
                let Some(k) = coords.iter().position(|x| x == g) else { continue };
                let left = NCExpr::word(w[..i].to_vec());
                let right = NCExpr::word(w[i + 1..].to_vec());
                out.add_scaled(&left.concat(&images[k]).concat(&right), c);
            }
        }
        self.variations.reduce(&out)
    }

    /// The part of `e δ_P` linear in `P^a`, with the parameter removed.
    pub fn single(&self, e: &NCExpr, a: RightOperator) -> Result<NCExpr> {
        let v = self.variation(e, Param::R)?;
        Ok(self.extract(&v, &[self.param(Param::R, a)]))
    }

    /// `e (δ_{R^a} δ_{S^b})`: `(e δ_R) δ_S` restricted to the monomial
    /// `R^a S^b`, with both parameters removed.
    pub fn composed(&self, e: &NCExpr, a: RightOperator, b: RightOperator) -> Result<NCExpr> {
        let first = self.variation(e, Param::R)?;
        let both = self.variation_leibniz(&first, Param::S)?;
        Ok(self.extract(&both, &[self.param(Param::R, a), self.param(Param::S, b)]))
    }

    /// Terms whose parameter letters are exactly `wanted`, in order, with
    /// those letters deleted.
    fn extract(&self, e: &NCExpr, wanted: &[GenId]) -> NCExpr {
        let all: Vec<GenId> = self.params.iter().flatten().copied().collect();
        let mut out = NCExpr::zero();
        for (w, c) in e.terms() {
            let found: Word = w.iter().copied().filter(|g| all.contains(g)).collect();
            if found == wanted {
                out.add_term(w.iter().copied().filter(|g| !all.contains(g)).collect(), c.clone());
            }
        }
        out
    }

    /// `Σ c · e(δ_A δ_B) − c' · e δ_C`.
    pub fn compatibility_residual(&self, rel: &OperatorRelation, e: &NCExpr) -> Result<NCExpr> {
        let mut out = NCExpr::zero();
        for (c, a, b) in &rel.lhs {
            out.add_scaled(&self.composed(e, *a, *b)?, c);
        }
        out.add_scaled(&self.single(e, rel.rhs.1)?, &-rel.rhs.0.clone());
        self.base.reduce(&out)
    }

    /// Normal words in the coordinates of length `1..=max_len`.
    pub fn normal_words(&self, max_len: usize) -> Vec<Word> {
        let letters = self.coord_letters();
        let mut layer: Vec<Word> = vec![Vec::new()];
        let mut out = Vec::new();
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &layer {
                for &g in &letters {
                    if let Some(&last) = w.last() {
                        if self.base.rule_rhs(last, g).is_some() {
                            continue;
                        }
                    }
                    let mut v = w.clone();
                    v.push(g);
                    next.push(v);
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }
}

/// `Σ c · (A then B) = c' · C` among the vector fields.
#[derive(Clone, Debug)]
pub struct OperatorRelation {
    pub id: &'static str,
    pub lhs: [(QRat, RightOperator, RightOperator); 2],
    pub rhs: (QRat, RightOperator),
}

/// The three relations among the vector fields as printed.
pub fn printed_operator_relations() -> [OperatorRelation; 3] {
    use RightOperator::*;
    let two_plus = QRat::laurent(&[(1, 2), (1, 0)]);
    [
        OperatorRelation {
            id: "hat1-three",
            lhs: [(q(2), Hat1, Three), (-q(-2), Three, Hat1)],
            rhs: (two_plus.clone(), Three),
        },
        OperatorRelation {
            id: "two-hat1",
            lhs: [(q(2), Two, Hat1), (-q(-2), Hat1, Two)],
            rhs: (two_plus, Two),
        },
        OperatorRelation { id: "three-two", lhs: [(QRat::one(), Three, Two), (-q(-2), Two, Three)], rhs: (QRat::one(), Hat1) },
    ]
}

/// The third relation with the coefficient the right action requires.
pub fn corrected_third_relation() -> OperatorRelation {
    use RightOperator::*;
    OperatorRelation { id: "three-two", lhs: [(QRat::one(), Three, Two), (-q(2), Two, Three)], rhs: (QRat::one(), Hat1) }
}

fn first_failure<F>(words: &[Word], alphabet: &Alphabet, mut residual: F) -> Result<Outcome>
where
    F: FnMut(&NCExpr) -> Result<NCExpr>,
{
    for w in words {
        let r = residual(&NCExpr::word(w.clone()))?;
        if !r.is_zero() {
            return Ok(Outcome::zero(&r, alphabet).with_detail(format!(
                "witness {} after {} of {} words",
                alphabet.render_word(w),
                words.iter().position(|x| x == w).unwrap_or(0),
                words.len()
            )));
        }
    }
    Ok(Outcome::flag(true, format!("{} words", words.len())))
}

/// Options for [`symops_suite`].
#[derive(Clone, Debug)]
pub struct SymopsOptions {
    pub seed: u64,
    /// Exhaustive word length for the operator algebra.
    pub max_len: usize,
    pub random_words: usize,
}

impl Default for SymopsOptions {
    fn default() -> Self {
        SymopsOptions { seed: 1, max_len: 5, random_words: 200 }
    }
}

pub fn symops_suite(q0: Option<&BigRational>, opts: &SymopsOptions) -> Checks {
    let mut checks = Checks::new();
    let v = match VectorFields::new().and_then(|v| v.specialize(q0)) {
        Ok(v) => v,
        Err(e) => {
            checks.run("symops.presentation", "vector-fields", || Err(e));
            return checks;
        }
    };
    let a = v.alphabet().clone();
    let c = v.coords;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);

    let tag = "vector-fields";
    for op in RightOperator::ALL {
        checks.run(&format!("symops.vf.confluence[{}]", op.name()), tag, || {
            let rep = critical_pairs(v.operator_system(op))?;
            let detail = match rep.violations.first() {
                Some(w) => format!("{} overlaps, witness {}", rep.overlaps_checked, w.witness),
                None => format!("{} overlaps", rep.overlaps_checked),
            };
            Ok(Outcome::flag(rep.is_confluent(), detail))
        });
        checks.run(&format!("symops.vf.counit[{}]", op.name()), tag, || {
            Ok(Outcome::zero(&v.apply(op, &NCExpr::one())?, &a))
        });
        for f in Field::ALL {
            checks.run(&format!("symops.vf.inhomogeneous[{},{}]", op.name(), f.name()), tag, || {
                let got = v.apply(op, &NCExpr::gen(f.coord(&c)))?;
                let want = exchange(op, f, &c).b;
                Ok(Outcome::zero(&v.base().reduce(&(&got - &want))?, &a)
                    .with_detail(format!("{} {} = {}", f.name(), op.name(), got.render(&a))))
            });
        }
    }

    let tag = "vector-field-algebra";
    let mut words = v.normal_words(opts.max_len);
    words.insert(0, Vec::new());
    let letters = v.coord_letters();
    for _ in 0..opts.random_words {
        let len = rng.gen_range(opts.max_len + 1..=opts.max_len + 3);
        words.push((0..len).map(|_| letters[rng.gen_range(0..letters.len())]).collect());
    }
    for (i, rel) in printed_operator_relations().iter().enumerate() {
        checks.run(&format!("symops.vf.algebra[{}]", i + 1), tag, || {
            first_failure(&words, &a, |w| v.relation_residual(rel, w))
        });
    }
    checks.run("symops.vf.algebra[3].corrected", tag, || {
        first_failure(&words, &a, |w| v.relation_residual(&corrected_third_relation(), w))
    });

    let tag = "vector-field-coordinates";
    checks.run("symops.vf.jackson[N1^]", tag, || {
        let mut total = NCExpr::zero();
        for k in -4i64..=6 {
            let pow = r_power(&c, k);
            let want = pow.scale(&(q(1 - k) * q_number(k)));
            total = total + (&v.apply(RightOperator::Hat1, &pow)? - &want);
        }
        Ok(Outcome::zero(&v.base().reduce(&total)?, &a).with_detail("r^k N1^ = q^(1-k)[k] r^k for -4 <= k <= 6"))
    });
    checks.run("symops.vf.jackson[N3]", tag, || {
        let mut total = NCExpr::zero();
        for k in 1i64..=6 {
            let pow = NCExpr::word(vec![c.p; k as usize]);
            let mut w = vec![c.p; k as usize - 1];
            w.extend([c.ri, c.ri]);
            let want = NCExpr::term(q(2 - k) * q_number(k), w);
            total = total + (&v.apply(RightOperator::Three, &pow)? - &want);
        }
        Ok(Outcome::zero(&v.base().reduce(&total)?, &a).with_detail("f+^k N3 = q^(2-k)[k] f+^(k-1) r^-2 for 1 <= k <= 6"))
    });
    checks.run("symops.vf.classical-derivative[N1^]", tag, || {
        let mut total = NCExpr::zero();
        for k in -4i64..=6 {
            let pow = r_power(&c, k);
            total = total + (&v.apply(RightOperator::Hat1, &pow)? - &pow.scale(&QRat::int(k)));
        }
        Ok(Outcome::zero_informational(&v.base().reduce(&total)?, &a).with_detail("r^k N1^ = k r^k"))
    });

    variation::variation_checks(&v, &mut rng, &mut checks);
    time::time_checks(q0, &mut checks);
    checks
}

/// `r^k`, using `r^-1` for negative `k`.
pub fn r_power(c: &Coords, k: i64) -> NCExpr {
    let g = if k < 0 { c.ri } else { c.r };
    NCExpr::word(vec![g; k.unsigned_abs() as usize])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn printed_values() {
        let v = VectorFields::new().unwrap();
        let c = v.coords;
        let got = v.apply(RightOperator::Three, &NCExpr::gen(c.p)).unwrap();
        assert_eq!(got, NCExpr::term(q(1), vec![c.ri, c.ri]));
        let got = v.apply(RightOperator::Two, &NCExpr::gen(c.m)).unwrap();
        assert_eq!(got, NCExpr::term(q(-1), vec![c.r, c.r]));
        assert!(v.apply(RightOperator::Hat1, &NCExpr::one()).unwrap().is_zero());
    }

    #[test]
    fn first_relation_on_f_plus() {
        let v = VectorFields::new().unwrap();
        let p = NCExpr::gen(v.coords.p);
        let rel = &printed_operator_relations()[0];
        assert!(v.relation_residual(rel, &p).unwrap().is_zero());
        let lhs = &v.compose(RightOperator::Hat1, RightOperator::Three, &p).unwrap().scale(&q(2))
            - &v.compose(RightOperator::Three, RightOperator::Hat1, &p).unwrap().scale(&q(-2));
        let rhs = v.apply(RightOperator::Three, &p).unwrap().scale(&QRat::laurent(&[(1, 2), (1, 0)]));
        assert_eq!(v.base().reduce(&(&lhs - &rhs)).unwrap(), NCExpr::zero());
    }

    #[test]
    fn variation_routes_agree() {
        let v = VectorFields::new().unwrap();
        let c = v.coords;
        let w = NCExpr::word(vec![c.m, c.p, c.r, c.ri, c.r]);
        assert_eq!(v.variation(&w, Param::R).unwrap(), v.variation_leibniz(&w, Param::R).unwrap());
    }
}
