//! SL_q(2,R) in Gauss coordinates: the matrix `g`, its inverse, the
//! Cartan form `g⁻¹dg`, and the identities they satisfy.

mod matrix;
mod presentation;

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use matrix::FormMatrix;
pub(crate) use presentation::{ex, lp, q};
pub use presentation::{
    coordinate_rules, even_rules, exterior_derivative, first_order_rules, push_group_gens, second_order_rules, Gens,
    GroupPresentation, Variant,
};

use crate::coeff::QRat;
use crate::error::{Error, Result};
use crate::ncalg::{
    check_local_confluence, critical_pairs, random_word, Alphabet, Derivation, GenId, NCExpr, Parity, RewriteSystem,
};
use crate::verify::{Checks, Outcome, Status};

/// The even coordinates `f-, f+, r, r^-1` of some presentation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Coords {
    pub m: GenId,
    pub p: GenId,
    pub r: GenId,
    pub ri: GenId,
}

impl Gens {
    pub fn coords(&self) -> Coords {
        Coords { m: self.m, p: self.p, r: self.r, ri: self.ri }
    }
}

/// `g = L(f-) U(f+) D(r)`, entries reduced.
pub fn gauss_matrix(g: &GroupPresentation) -> Result<FormMatrix> {
    gauss_in(&g.gens.coords(), &g.sys)
}

/// The Gauss matrix over any presentation containing the coordinates.
pub fn gauss_in(c: &Coords, sys: &RewriteSystem) -> Result<FormMatrix> {
    let (l, u, d) = gauss_factors(c);
    l.mul(&u, sys)?.mul(&d, sys)
}

/// The three Gauss factors `L(f-)`, `U(f+)`, `D(r)`.
pub fn gauss_factors(g: &Coords) -> (FormMatrix, FormMatrix, FormMatrix) {
    let l = FormMatrix::new(NCExpr::one(), NCExpr::gen(g.m), NCExpr::zero(), NCExpr::one());
    let u = FormMatrix::new(NCExpr::one(), NCExpr::zero(), NCExpr::gen(g.p), NCExpr::one());
    let d = FormMatrix::diag(NCExpr::gen(g.r), NCExpr::gen(g.ri));
    (l, u, d)
}

fn factor_inverses(g: &Coords) -> (FormMatrix, FormMatrix, FormMatrix) {
    let li = FormMatrix::new(NCExpr::one(), -&NCExpr::gen(g.m), NCExpr::zero(), NCExpr::one());
    let ui = FormMatrix::new(NCExpr::one(), NCExpr::zero(), -&NCExpr::gen(g.p), NCExpr::one());
    let di = FormMatrix::diag(NCExpr::gen(g.ri), NCExpr::gen(g.r));
    (li, ui, di)
}

/// `g⁻¹ = D⁻¹ U⁻¹ L⁻¹`, checked against `g⁻¹g = gg⁻¹ = 1`.
pub fn gauss_inverse(g: &GroupPresentation) -> Result<FormMatrix> {
    gauss_inverse_in(&g.gens.coords(), &g.sys)
}

pub fn gauss_inverse_in(gens: &Coords, sys: &RewriteSystem) -> Result<FormMatrix> {
    let (li, ui, di) = factor_inverses(gens);
    let inv = di.mul(&ui, sys)?.mul(&li, sys)?;
    let (l, u, d) = gauss_factors(gens);
    let gm = l.mul(&u, sys)?.mul(&d, sys)?;
    let id = FormMatrix::identity();
    if inv.mul(&gm, sys)? != id || gm.mul(&inv, sys)? != id {
        return Err(Error::Inconsistent("Gauss inverse does not invert g".into()));
    }
    Ok(inv)
}

/// `ω = g⁻¹ dg`.
pub fn cartan_form(g: &GroupPresentation) -> Result<FormMatrix> {
    let gm = gauss_matrix(g)?;
    gauss_inverse(g)?.mul(&gm.differential(&g.d, &g.sys)?, &g.sys)
}

/// The closed forms of `ω¹..ω⁴` in normal order.
pub fn cartan_targets(g: &GroupPresentation) -> Result<FormMatrix> {
    let Gens { p, r, ri, dm, dp, dr, .. } = g.gens;
    let w1 = ex(vec![(QRat::one(), vec![ri, dr]), (QRat::one(), vec![p, dm])]);
    let w2 = ex(vec![(q(1), vec![ri, ri, dm])]);
    let w3 = ex(vec![(q(-1), vec![r, r, dp]), (-q(5), vec![p, p, r, r, dm])]);
    let w4 = w1.scale(&-q(2));
    FormMatrix::new(w1, w2, w3, w4).reduce(&g.sys)
}

/// Verified iff every entry of `m` is zero.
pub(crate) fn zero_matrix(m: &FormMatrix, a: &Alphabet) -> Outcome {
    let mut o = Outcome::flag(m.is_zero(), String::new());
    o.residual = m.render(a);
    o.detail = None;
    o
}

fn zero(res: NCExpr, a: &Alphabet) -> Result<Outcome> {
    Ok(Outcome::zero(&res, a))
}

/// `x y - c y x`.
fn qcomm(x: &NCExpr, y: &NCExpr, c: &QRat) -> NCExpr {
    x.concat(y) - y.concat(x).scale(c)
}

/// Quantum-matrix relations among the Gauss entries, the q-determinant,
/// the Gauss inverse and the diagonal substitution.
pub fn entry_checks(g: &GroupPresentation, checks: &mut Checks) {
    let a = g.alphabet().clone();
    let tag = "quantum-matrix-relations";
    let gm = match gauss_matrix(g) {
        Ok(m) => m,
        Err(e) => {
            checks.run("group.gauss-matrix", tag, || Err(e));
            return;
        }
    };
    let [a1, a2, a3, a4] = gm.a.clone();
    let rels: [(&str, NCExpr); 6] = [
        ("a1a2=q.a2a1", qcomm(&a1, &a2, &q(1))),
        ("a1a3=q.a3a1", qcomm(&a1, &a3, &q(1))),
        ("a2a4=q.a4a2", qcomm(&a2, &a4, &q(1))),
        ("a3a4=q.a4a3", qcomm(&a3, &a4, &q(1))),
        ("a2a3=a3a2", qcomm(&a2, &a3, &QRat::one())),
        (
            "a1a4=a4a1+(q-1/q)a2a3",
            qcomm(&a1, &a4, &QRat::one()) - a2.concat(&a3).scale(&lp(&[(1, 1), (-1, -1)])),
        ),
    ];
    for (id, rel) in rels {
        checks.run(&format!("group.entry.{id}"), tag, || zero(g.reduce(&rel)?, &a));
    }
    checks.run("group.entry.a2a3=a3a4(as-printed)", tag, || {
        let res = g.reduce(&(a2.concat(&a3) - a3.concat(&a4)))?;
        Ok(Outcome::zero_informational(&res, &a)
            .with_detail("literal reading of the sixth relation; a2a3=a3a2 is the one that holds"))
    });
    checks.run("group.qdet", tag, || zero(gm.q_det(&g.sys)? - NCExpr::one(), &a));
    checks.run("group.entry.a3", tag, || zero(gm.a[2].clone() - NCExpr::word(vec![g.gens.p, g.gens.r]), &a));
    checks.run("group.diagonal-substitution", tag, || {
        let (m, p) = (g.gens.m, g.gens.p);
        let sub = gm.filter(|w: &[GenId]| !w.contains(&m) && !w.contains(&p));
        let want = FormMatrix::diag(NCExpr::gen(g.gens.r), NCExpr::gen(g.gens.ri));
        Ok(Outcome::flag(sub == want, format!("g at f-=f+=0: {}", sub.render(&a))))
    });
    checks.run("group.gauss-inverse", tag, || {
        let inv = gauss_inverse(g)?;
        Ok(Outcome::flag(true, format!("g^-1 = {}", inv.render(&a))))
    });
    checks.run("group.qdet.diagonal", tag, || {
        let dg = FormMatrix::diag(NCExpr::gen(g.gens.r), NCExpr::gen(g.gens.ri));
        zero(dg.q_det(&g.sys)? - NCExpr::one(), &a)
    });
}

/// Compatibility of `d` with every rule, `d² = 0`, and confluence.
pub fn calculus_checks(g: &GroupPresentation, seed: u64, checks: &mut Checks) {
    let a = g.alphabet().clone();
    let tag = "differential-calculus";
    match g.d.rule_residuals(&g.sys) {
        Ok(list) => {
            for (label, res) in list {
                checks.run(&format!("calculus.d-compatible[{label}]"), tag, || zero(res, &a));
            }
        }
        Err(e) => checks.run("calculus.d-compatible", tag, || Err(e)),
    }
    checks.run("calculus.d2.generators", tag, || {
        let mut total = NCExpr::zero();
        for x in a.ids() {
            let dd = g.diff(&g.diff(&NCExpr::gen(x))?)?;
            total = total + dd;
        }
        zero(total, &a)
    });
    checks.run("calculus.d2.random-words", tag, || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let letters = g.gens.even();
        for _ in 0..200 {
            let w = random_word(&mut rng, &letters, 5);
            let dd = g.diff(&g.diff(&NCExpr::word(w.clone()))?)?;
            if !dd.is_zero() {
                return Ok(Outcome::zero(&dd, &a).with_detail(format!("witness {}", a.render_word(&w))));
            }
        }
        Ok(Outcome::flag(true, "200 random even words".into()))
    });
    checks.run("calculus.d-of-relation.f+f- - q^-2 f-f+", tag, || {
        let Gens { m, p, .. } = g.gens;
        let rel = ex(vec![(QRat::one(), vec![p, m]), (-q(-2), vec![m, p])]);
        zero(g.diff(&rel)?, &a)
    });
    checks.run("calculus.local-confluence", tag, || {
        let rep = check_local_confluence(&g.sys, 6, 500, seed)?;
        let detail = format!(
            "{} overlaps, {} sampled words, {} violations",
            rep.overlaps_checked,
            rep.words_sampled,
            rep.violations.len()
        );
        let mut o = Outcome::flag(rep.is_confluent(), detail);
        if let Some(v) = rep.violations.first() {
            o.residual = format!("{}: {} vs {}", v.witness, v.left, v.right);
        }
        Ok(o)
    });
}

/// The printed rule table read literally: its non-resolvable overlaps and
/// rules incompatible with `d`, and the printed `dr df+` relation inside the
/// consistent presentation.
pub fn printed_table_checks(g: &GroupPresentation, checks: &mut Checks) {
    let tag = "differential-calculus.as-printed";
    let lit = match g.sys.q0() {
        Some(q0) => GroupPresentation::with_variant(Variant::AsPrinted).and_then(|l| l.specialize(q0)),
        None => GroupPresentation::with_variant(Variant::AsPrinted),
    };
    let lit = match lit {
        Ok(l) => l,
        Err(e) => {
            checks.run("as-printed.load", tag, || Err(e));
            return;
        }
    };
    checks.run("as-printed.confluence", tag, || {
        let rep = critical_pairs(&lit.sys)?;
        let witnesses: Vec<String> = rep.violations.iter().map(|v| v.witness.clone()).collect();
        let mut o = Outcome::flag(rep.is_confluent(), format!("unresolved overlaps: [{}]", witnesses.join(", ")));
        if !rep.is_confluent() {
            o.residual = format!("{} unresolved overlaps", rep.violations.len());
        }
        Ok(o)
    });
    checks.run("as-printed.d-compatible", tag, || {
        let bad: Vec<String> = lit
            .d
            .rule_residuals(&lit.sys)?
            .into_iter()
            .filter(|(_, r)| !r.is_zero())
            .map(|(l, _)| l)
            .collect();
        let mut o = Outcome::flag(bad.is_empty(), format!("incompatible rules: [{}]", bad.join("; ")));
        if !bad.is_empty() {
            o.residual = format!("{} incompatible rules", bad.len());
        }
        Ok(o)
    });
    let a = g.alphabet().clone();
    checks.run("as-printed.dr-df+-relation", tag, || {
        let Gens { p, r, dm, dp, dr, .. } = g.gens;
        let rel = ex(vec![
            (QRat::one(), vec![dr, dp]),
            (q(1), vec![dp, dr]),
            (lp(&[(1, 5), (-1, 3)]), vec![p, p, dm, dr]),
            (-lp(&[(1, 1), (-1, -3)]), vec![p, r, dm, dp]),
        ]);
        Ok(Outcome::zero(&g.reduce(&rel)?, &a).with_detail("the relation holds with the sign of its last term reversed"))
    });
    checks.run("as-printed.df+-nilpotent", tag, || {
        let Gens { dp, .. } = g.gens;
        Ok(Outcome::zero(&g.reduce(&NCExpr::word(vec![dp, dp]))?, &a)
            .with_detail("d(df+ f+ - ...) forces a non-zero square"))
    });
}

/// Cartan form entries, `Tr_q ω = 0`, the coordinate commutation relations
/// of `ω`, the wedge relations and the structure equation.
pub fn cartan_checks(g: &GroupPresentation, checks: &mut Checks) {
    let a = g.alphabet().clone();
    let w = match cartan_form(g) {
        Ok(w) => w,
        Err(e) => {
            checks.run("cartan.form", "cartan-form", || Err(e));
            return;
        }
    };
    let tag = "cartan-form";
    let targets = cartan_targets(g);
    for k in 1..=4 {
        let w = &w;
        let targets = &targets;
        checks.run(&format!("cartan.omega{k}"), tag, || {
            let t = targets.as_ref().map_err(|e| Error::Inconsistent(e.to_string()))?;
            zero(w.entry(k).clone() - t.entry(k).clone(), &a)
        });
    }
    checks.run("cartan.omega4+q^2.omega1", tag, || {
        zero(g.reduce(&(w.a[3].clone() + w.a[0].scale(&q(2))))?, &a)
    });
    checks.run("cartan.qtrace", tag, || zero(w.q_trace(&g.sys)?, &a));

    let Gens { m, p, r, .. } = g.gens;
    let (rr, pp, mm) = (NCExpr::gen(r), NCExpr::gen(p), NCExpr::gen(m));
    let tag = "cartan-form.coordinate-relations";
    let exps = [(1usize, -2i64), (2, -1), (3, -1)];
    for (k, e) in exps {
        checks.run(&format!("cartan.omega{k}.r"), tag, || zero(g.reduce(&qcomm(w.entry(k), &rr, &q(e)))?, &a));
        for (nm, x) in [("f-", &mm), ("f+", &pp)] {
            checks.run(&format!("cartan.omega{k}.{nm}"), tag, || {
                zero(g.reduce(&qcomm(w.entry(k), x, &QRat::one()))?, &a)
            });
        }
    }
    let tag = "cartan-form.coordinate-relations.derived";
    checks.run("cartan.omega4.r", tag, || zero(g.reduce(&qcomm(w.entry(4), &rr, &q(-2)))?, &a));
    for (nm, x) in [("f-", &mm), ("f+", &pp)] {
        checks.run(&format!("cartan.omega4.{nm}"), tag, || {
            zero(g.reduce(&qcomm(w.entry(4), x, &QRat::one()))?, &a)
        });
    }

    let tag = "cartan-form.wedge-relations";
    let [w1, w2, w3, w4] = &w.a;
    let wedge: [(&str, NCExpr); 7] = [
        ("(omega1)^2", w1.concat(w1)),
        ("(omega2)^2", w2.concat(w2)),
        ("(omega3)^2", w3.concat(w3)),
        ("omega4=-q^2.omega1", w4 + &w1.scale(&q(2))),
        ("omega1omega2+q^4.omega2omega1", w1.concat(w2) + w2.concat(w1).scale(&q(4))),
        ("omega1omega3+q^-4.omega3omega1", w1.concat(w3) + w3.concat(w1).scale(&q(-4))),
        ("omega2omega3+q^-2.omega3omega2", w2.concat(w3) + w3.concat(w2).scale(&q(-2))),
    ];
    for (id, e) in wedge {
        checks.run(&format!("cartan.{id}"), tag, || zero(g.reduce(&e)?, &a));
    }

    let tag = "cartan-form.structure-equation";
    checks.run("cartan.d-omega+omega.omega", tag, || {
        let dw = w.differential(&g.d, &g.sys)?;
        let ww = w.mul(&w, &g.sys)?;
        let s = dw.add(&ww).reduce(&g.sys)?;
        Ok(Outcome::flag(s.is_zero(), s.render(&a)))
    });
    checks.run("cartan.qtrace(omega.omega)", tag, || zero(w.mul(&w, &g.sys)?.q_trace(&g.sys)?, &a));

    let tag = "cartan-form.invariance";
    checks.run("cartan.left-invariance", tag, || {
        let dbl = Doubled::new(g.sys.q0())?;
        Ok(Outcome::flag(dbl.left_invariance()?, "(g0 g)^-1 d(g0 g) = g^-1 dg with d g0 = 0".into()))
    });
    checks.run("cartan.qtrace-conjugation-invariance", tag, || {
        let dbl = Doubled::new(g.sys.q0())?;
        let res = dbl.trace_conjugation_residual()?;
        Ok(Outcome::zero(&res, dbl.sys.alphabet()))
    });
}

/// Two commuting copies of the group: a primed constant copy `g0` and the
/// unprimed calculus.
pub struct Doubled {
    pub sys: RewriteSystem,
    pub gens: Gens,
    pub primed: Coords,
    pub d: Derivation,
}

impl Doubled {
    pub fn new(q0: Option<&num_rational::BigRational>) -> Result<Doubled> {
        let mut a = Alphabet::new();
        let primed = Coords {
            m: a.push("f-'", Parity::Even, 1)?,
            p: a.push("f+'", Parity::Even, 1)?,
            r: a.push("r'", Parity::Even, 1)?,
            ri: a.push("r^-1'", Parity::Even, 1)?,
        };
        let gens = push_group_gens(&mut a)?;
        let mut b = RewriteSystem::builder(Arc::new(a));
        b = coordinate_rules(b, &primed);
        b = second_order_rules(first_order_rules(even_rules(b, &gens), &gens), &gens, Variant::Consistent);
        let all: Vec<GenId> = gens.even().into_iter().chain(gens.odd()).collect();
        for x in all {
            for y in [primed.m, primed.p, primed.r, primed.ri] {
                b = b.commute(x, y, QRat::one());
            }
        }
        let mut sys = b.build()?;
        if let Some(q0) = q0 {
            sys = sys.specialize(q0)?;
        }
        let mut d = exterior_derivative(&gens);
        for y in [primed.m, primed.p, primed.r, primed.ri] {
            d.insert(y, NCExpr::zero());
        }
        Ok(Doubled { sys, gens, primed, d })
    }

    fn gauss(&self, c: &Coords) -> Result<FormMatrix> {
        gauss_in(c, &self.sys)
    }

    pub fn left_invariance(&self) -> Result<bool> {
        let g0 = self.gauss(&self.primed)?;
        let g0i = gauss_inverse_in(&self.primed, &self.sys)?;
        let g = self.gauss(&self.gens.coords())?;
        let gi = gauss_inverse_in(&self.gens.coords(), &self.sys)?;
        let h = g0.mul(&g, &self.sys)?;
        let hi = gi.mul(&g0i, &self.sys)?;
        let lhs = hi.mul(&h.differential(&self.d, &self.sys)?, &self.sys)?;
        let rhs = gi.mul(&g.differential(&self.d, &self.sys)?, &self.sys)?;
        Ok(lhs.sub(&rhs).reduce(&self.sys)?.is_zero())
    }

    /// `Tr_q(g0⁻¹ ω g0) - Tr_q(ω)`.
    pub fn trace_conjugation_residual(&self) -> Result<NCExpr> {
        let g0 = self.gauss(&self.primed)?;
        let g0i = gauss_inverse_in(&self.primed, &self.sys)?;
        let g = self.gauss(&self.gens.coords())?;
        let gi = gauss_inverse_in(&self.gens.coords(), &self.sys)?;
        let w = gi.mul(&g.differential(&self.d, &self.sys)?, &self.sys)?;
        let conj = g0i.mul(&w, &self.sys)?.mul(&g0, &self.sys)?;
        self.sys.reduce(&(conj.q_trace(&self.sys)? - w.q_trace(&self.sys)?))
    }
}

/// Every check of the group suite.
pub fn group_suite(g: &GroupPresentation, seed: u64) -> Checks {
    let mut c = Checks::new();
    entry_checks(g, &mut c);
    calculus_checks(g, seed, &mut c);
    printed_table_checks(g, &mut c);
    c
}

pub fn cartan_suite(g: &GroupPresentation) -> Checks {
    let mut c = Checks::new();
    cartan_checks(g, &mut c);
    c
}

/// Statuses by id, for tests.
pub fn status_of(checks: &Checks, id: &str) -> Option<Status> {
    checks.entries().iter().find(|c| c.id == id).map(|c| c.status)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_entries() {
        let g = GroupPresentation::new().unwrap();
        let gm = gauss_matrix(&g).unwrap();
        let Gens { m, p, r, ri, .. } = g.gens;
        assert_eq!(gm.a[0], ex(vec![(QRat::one(), vec![r]), (QRat::one(), vec![m, p, r])]));
        assert_eq!(gm.a[1], NCExpr::word(vec![m, ri]));
        assert_eq!(gm.a[2], NCExpr::word(vec![p, r]));
        assert_eq!(gm.a[3], NCExpr::word(vec![ri]));
        assert_eq!(gm.q_det(&g.sys).unwrap(), NCExpr::one());
    }

    #[test]
    fn inverse_matches_closed_form() {
        let g = GroupPresentation::new().unwrap();
        let inv = gauss_inverse(&g).unwrap();
        let Gens { m, p, r, ri, .. } = g.gens;
        let want = FormMatrix::new(
            NCExpr::gen(ri),
            -&NCExpr::word(vec![ri, m]),
            -&NCExpr::word(vec![r, p]),
            ex(vec![(QRat::one(), vec![r, p, m]), (QRat::one(), vec![r])]),
        )
        .reduce(&g.sys)
        .unwrap();
        assert_eq!(inv, want);
    }

    #[test]
    fn cartan_form_matches_targets() {
        let g = GroupPresentation::new().unwrap();
        assert_eq!(cartan_form(&g).unwrap(), cartan_targets(&g).unwrap());
    }
}
