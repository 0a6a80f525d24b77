//! Sigma models on the quantum plane, realized as the Borel subgroup
//! `g = [[x, 0], [y, x⁻¹]]` of the quantum group.

mod series;

use std::sync::Arc;

use num_rational::BigRational;

pub use series::{BiSeries, TSeries, Var};

use crate::coeff::QRat;
use crate::error::{Error, Result};
use crate::group::{cartan_form, lp, q, zero_matrix, FormMatrix, GroupPresentation};
use crate::ncalg::{critical_pairs, inverse_image, Alphabet, Derivation, GenId, NCExpr, Parity, RewriteSystem};
use crate::symops::fit_scalar;
use crate::verify::{Checks, Outcome};

/// Borel coordinates and their first and second time derivatives.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BorelGens {
    pub y: GenId,
    pub x: GenId,
    pub xi: GenId,
    pub xd: GenId,
    pub xdd: GenId,
    pub yd: GenId,
}

#[derive(Debug)]
pub struct BorelPresentation {
    pub sys: RewriteSystem,
    pub gens: BorelGens,
    /// `d/dt`, defined on everything but `x''` and `y'`.
    pub dt: Derivation,
}

impl BorelPresentation {
    pub fn new() -> Result<Self> {
        let mut a = Alphabet::new();
        let gens = BorelGens {
            y: a.push("y", Parity::Even, 1)?,
            x: a.push("x", Parity::Even, 1)?,
            xi: a.push("x^-1", Parity::Even, 1)?,
            xd: a.push("x'", Parity::Even, 1)?,
            xdd: a.push("x''", Parity::Even, 1)?,
            yd: a.push("y'", Parity::Even, 4)?,
        };
        let BorelGens { y, x, xi, xd, yd, .. } = gens;
        let sys = RewriteSystem::builder(Arc::new(a))
            .commute(x, y, q(1))
            .commute(xi, y, q(-1))
            .inverse_pair(x, xi)
            .commute(xd, x, q(-2))
            .commute(yd, y, q(-2))
            .commute(xd, y, q(-1))
            .rule(
                yd,
                x,
                NCExpr::from_terms([(q(-1), vec![x, yd]), (-lp(&[(1, 0), (-1, -2)]), vec![y, xd])]),
            )
            // Conjugates of the two rules above by x.
            .commute(xd, xi, q(2))
            .rule(
                yd,
                xi,
                NCExpr::from_terms([(q(1), vec![xi, yd]), (lp(&[(1, 2), (-1, 0)]), vec![y, xi, xi, xd])]),
            )
            .build()?;
        let dt = Derivation::ungraded()
            .set(x, NCExpr::gen(xd))
            .set(xi, inverse_image(xi, &NCExpr::gen(xd)))
            .set(y, NCExpr::gen(yd))
            .set(xd, NCExpr::gen(gens.xdd));
        Ok(BorelPresentation { sys, gens, dt })
    }

    pub fn specialize(self, q0: Option<&BigRational>) -> Result<Self> {
        let Some(q0) = q0 else { return Ok(self) };
        Ok(BorelPresentation { sys: self.sys.specialize(q0)?, ..self })
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        self.sys.alphabet()
    }

    pub fn g(&self) -> FormMatrix {
        let BorelGens { y, x, xi, .. } = self.gens;
        FormMatrix::new(NCExpr::gen(x), NCExpr::zero(), NCExpr::gen(y), NCExpr::gen(xi))
    }

    /// `g⁻¹ = [[x⁻¹, 0], [−q y, x]]`, checked on both sides.
    pub fn g_inverse(&self) -> Result<FormMatrix> {
        let BorelGens { y, x, xi, .. } = self.gens;
        let inv = FormMatrix::new(NCExpr::gen(xi), NCExpr::zero(), NCExpr::term(-q(1), vec![y]), NCExpr::gen(x));
        let id = FormMatrix::identity();
        if inv.mul(&self.g(), &self.sys)? != id || self.g().mul(&inv, &self.sys)? != id {
            return Err(Error::Inconsistent("Borel inverse does not invert g".into()));
        }
        Ok(inv)
    }

    /// `ω = g⁻¹ ġ`.
    pub fn omega(&self) -> Result<FormMatrix> {
        self.g_inverse()?.mul(&self.g().differential(&self.dt, &self.sys)?, &self.sys)
    }

    pub fn omega_printed(&self) -> FormMatrix {
        let BorelGens { y, x, xi, xd, yd, .. } = self.gens;
        FormMatrix::new(
            NCExpr::word(vec![xi, xd]),
            NCExpr::zero(),
            NCExpr::from_terms([(QRat::one(), vec![x, yd]), (-q(1), vec![y, xd])]),
            NCExpr::term(-q(2), vec![xi, xd]),
        )
    }

    /// `½ Tr_q(ω ω)`.
    pub fn lagrangian(&self) -> Result<NCExpr> {
        let w = self.omega()?;
        Ok(w.mul(&w, &self.sys)?.q_trace(&self.sys)?.scale(&QRat::ratio(1, 2)))
    }

    /// `x⁻² x'²`, the only monomial of the Lagrangian.
    pub fn kinetic_word(&self) -> Vec<GenId> {
        let BorelGens { xi, xd, .. } = self.gens;
        vec![xi, xi, xd, xd]
    }

    /// `d/dt (x⁻¹ x')`.
    pub fn conservation(&self) -> Result<NCExpr> {
        let BorelGens { xi, xd, .. } = self.gens;
        self.dt.apply(&NCExpr::word(vec![xi, xd]), &self.sys)
    }
}

/// `q⁴(q²+1)/2`.
pub fn printed_kinetic_coefficient() -> QRat {
    lp(&[(1, 6), (1, 4)]) * QRat::ratio(1, 2)
}

/// Maps the Borel rules into the group presentation under `x ↦ r`,
/// `y ↦ f+ r`, derivatives to differentials, then sets `f-` and `df-` to
/// zero. Returns the rule label and its residual.
pub fn embedding_residuals(b: &BorelPresentation, g: &GroupPresentation) -> Result<Vec<(String, NCExpr)>> {
    let bg = b.gens;
    let gg = g.gens;
    let image = |id: GenId| -> NCExpr {
        match id {
            i if i == bg.x => NCExpr::gen(gg.r),
            i if i == bg.xi => NCExpr::gen(gg.ri),
            i if i == bg.y => NCExpr::word(vec![gg.p, gg.r]),
            i if i == bg.xd => NCExpr::gen(gg.dr),
            i if i == bg.yd => NCExpr::from_terms([(QRat::one(), vec![gg.dp, gg.r]), (QRat::one(), vec![gg.p, gg.dr])]),
            _ => NCExpr::gen(id),
        }
    };
    let mut out = Vec::new();
    for rule in b.sys.rules() {
        let lhs = NCExpr::word(vec![rule.lhs.0, rule.lhs.1]);
        let diff = (&lhs - &rule.rhs).substitute(image);
        let reduced = g.reduce(&diff)?;
        let projected = reduced.filter_words(|w| !w.iter().any(|l| *l == gg.m || *l == gg.dm));
        let label = format!(
            "{} -> {}",
            b.alphabet().render_word(&[rule.lhs.0, rule.lhs.1]),
            rule.rhs.render(b.alphabet())
        );
        out.push((label, projected));
    }
    Ok(out)
}

/// `g⁻¹dg` of the group at `f- = df- = 0`.
pub fn projected_cartan(g: &GroupPresentation) -> Result<FormMatrix> {
    let m = g.gens.m;
    let dm = g.gens.dm;
    Ok(cartan_form(g)?.filter(|w| !w.iter().any(|l| *l == m || *l == dm)))
}

/// `[[r^-1 dr, 0], [q^-1 r^2 df+, -q^2 r^-1 dr]]`.
pub fn projected_cartan_printed(g: &GroupPresentation) -> FormMatrix {
    let gg = g.gens;
    FormMatrix::new(
        NCExpr::word(vec![gg.ri, gg.dr]),
        NCExpr::zero(),
        NCExpr::term(q(-1), vec![gg.r, gg.r, gg.dp]),
        NCExpr::term(-q(2), vec![gg.ri, gg.dr]),
    )
}

/// The `α, α⁻¹, β` algebra with `αβ = q²βα`.
#[derive(Debug)]
pub struct SolutionAlgebra {
    pub sys: RewriteSystem,
    pub alpha: GenId,
    pub alpha_inv: GenId,
    pub beta: GenId,
}

impl SolutionAlgebra {
    pub fn new() -> Result<Self> {
        let mut a = Alphabet::new();
        let alpha = a.push("a", Parity::Even, 1)?;
        let alpha_inv = a.push("a^-1", Parity::Even, 1)?;
        let beta = a.push("b", Parity::Even, 1)?;
        let sys = RewriteSystem::builder(Arc::new(a))
            .commute(beta, alpha, q(-2))
            .commute(beta, alpha_inv, q(2))
            .inverse_pair(alpha, alpha_inv)
            .build()?;
        Ok(SolutionAlgebra { sys, alpha, alpha_inv, beta })
    }

    pub fn specialize(self, q0: Option<&BigRational>) -> Result<Self> {
        let Some(q0) = q0 else { return Ok(self) };
        Ok(SolutionAlgebra { sys: self.sys.specialize(q0)?, ..self })
    }

    /// `ρ(t) = α exp(βt)` to order `n`.
    pub fn rho(&self, n: usize) -> Result<TSeries> {
        TSeries::exp(&NCExpr::gen(self.beta), n, &self.sys)?.left_mul(&NCExpr::gen(self.alpha), &self.sys)
    }

    /// `ρ(t)⁻¹`, from the series inverse.
    pub fn rho_inverse(&self, n: usize) -> Result<TSeries> {
        self.rho(n)?.inverse(&NCExpr::gen(self.alpha_inv), &self.sys)
    }
}

/// Checks on the classical solution to order `n`.
pub struct SolutionChecks {
    /// `ρ'ρ − q⁻²ρρ'`.
    pub exchange: TSeries,
    /// `ρ⁻¹ρ' − β`.
    pub conserved: TSeries,
    /// `ρ⁻¹ρ'' − ρ⁻¹ρ'ρ⁻¹ρ'`.
    pub conservation_law: TSeries,
    /// `ρ⁻¹ρ'' − q²ρ⁻¹ρ'ρ'`, read literally.
    pub printed_literal: TSeries,
    /// `ρ⁻¹ρ'' − q²ρ⁻²ρ'ρ'`.
    pub printed_inverse_square: TSeries,
}

pub fn solution_checks(s: &SolutionAlgebra, n: usize) -> Result<SolutionChecks> {
    let sys = &s.sys;
    // Two extra orders so that the second derivative is still exact to `n`.
    let rho = s.rho(n + 2)?;
    let inv = s.rho_inverse(n + 2)?;
    let d1 = rho.derivative();
    let d2 = d1.derivative();
    let exchange = d1.mul(&rho, sys)?.sub(&rho.mul(&d1, sys)?.scale(&q(-2))).reduce(sys)?;
    let u = inv.mul(&d1, sys)?;
    let conserved = u.sub(&TSeries::constant(NCExpr::gen(s.beta), n)).reduce(sys)?;
    let acc = inv.mul(&d2, sys)?;
    let conservation_law = acc.sub(&u.mul(&u, sys)?).reduce(sys)?;
    let printed_literal = acc.sub(&inv.mul(&d1, sys)?.mul(&d1, sys)?.scale(&q(2))).reduce(sys)?;
    let inv2 = inv.mul(&inv, sys)?;
    let printed_inverse_square = acc.sub(&inv2.mul(&d1, sys)?.mul(&d1, sys)?.scale(&q(2))).reduce(sys)?;
    Ok(SolutionChecks {
        exchange: exchange.truncate(n),
        conserved: conserved.truncate(n),
        conservation_law: conservation_law.truncate(n),
        printed_literal: printed_literal.truncate(n),
        printed_inverse_square: printed_inverse_square.truncate(n),
    })
}

/// `ρ(t)ρ(t')` against `ρ(q²t')ρ(q⁻²t)`, and the exponent `λ = λ_t t + λ_t' t'`
/// with `ρ(t)ρ(t') = exp(λβ) ρ(t')ρ(t)`.
pub struct UnequalTime {
    pub rescaled: BiSeries,
    pub lambda_t: QRat,
    pub lambda_tp: QRat,
    pub with_lambda: BiSeries,
}

pub fn unequal_time(s: &SolutionAlgebra, n: usize) -> Result<UnequalTime> {
    let sys = &s.sys;
    let rho = s.rho(n)?;
    let lhs = BiSeries::outer(&rho, Var::T, &rho, Var::TPrime, sys)?;
    let rescaled_rhs = BiSeries::outer(&rho.rescale(&q(2))?, Var::TPrime, &rho.rescale(&q(-2))?, Var::T, sys)?;
    let rescaled = lhs.sub(&rescaled_rhs).reduce(sys)?;

    let swapped = BiSeries::outer(&rho, Var::TPrime, &rho, Var::T, sys)?;
    let beta = NCExpr::gen(s.beta);
    let base = sys.multiply(&beta, swapped.coeff(0, 0))?;
    let solve = |i: usize, j: usize| -> Result<QRat> {
        let target = sys.reduce(&(lhs.coeff(i, j) - swapped.coeff(i, j)))?;
        fit_scalar(&target, &base).ok_or_else(|| Error::Inconsistent("no scalar exponent fits at first order".into()))
    };
    let lambda_t = solve(1, 0)?;
    let lambda_tp = solve(0, 1)?;
    let e = BiSeries::exp_linear(&lambda_t, &lambda_tp, &beta, n, sys)?;
    let with_lambda = lhs.sub(&e.mul(&swapped, sys)?).reduce(sys)?;
    Ok(UnequalTime { rescaled, lambda_t, lambda_tp, with_lambda })
}

/// `q²(q²−1)`, the printed coefficient of `β(t − t')`.
pub fn printed_lambda() -> QRat {
    lp(&[(1, 4), (-1, 2)])
}

/// Two-dimensional model: `x`, `x⁻¹` and the first and second derivatives
/// along two directions.
#[derive(Debug)]
pub struct PlaneField2d {
    pub sys: RewriteSystem,
    pub x: GenId,
    pub xi: GenId,
    pub first: [GenId; 2],
    pub second: [GenId; 2],
}

impl PlaneField2d {
    pub fn new() -> Result<Self> {
        let mut a = Alphabet::new();
        let x = a.push("x", Parity::Even, 1)?;
        let xi = a.push("x^-1", Parity::Even, 1)?;
        let first = [a.push("d0x", Parity::Even, 1)?, a.push("d1x", Parity::Even, 1)?];
        let second = [a.push("d0d0x", Parity::Even, 1)?, a.push("d1d1x", Parity::Even, 1)?];
        let mut b = RewriteSystem::builder(Arc::new(a)).inverse_pair(x, xi);
        for d in first {
            b = b.commute(d, x, q(-2)).commute(d, xi, q(2));
        }
        Ok(PlaneField2d { sys: b.build()?, x, xi, first, second })
    }

    pub fn specialize(self, q0: Option<&BigRational>) -> Result<Self> {
        let Some(q0) = q0 else { return Ok(self) };
        Ok(PlaneField2d { sys: self.sys.specialize(q0)?, ..self })
    }

    fn partial(&self, mu: usize) -> Derivation {
        Derivation::ungraded()
            .set(self.x, NCExpr::gen(self.first[mu]))
            .set(self.xi, inverse_image(self.xi, &NCExpr::gen(self.first[mu])))
            .set(self.first[mu], NCExpr::gen(self.second[mu]))
    }

    /// `Σ_μ η^{μμ} f(μ)` with `η = diag(1, −1)`.
    fn contract<F: Fn(usize) -> Result<NCExpr>>(&self, f: F) -> Result<NCExpr> {
        let e = &f(0)? - &f(1)?;
        self.sys.reduce(&e)
    }

    /// `∂_μ(x⁻¹ ∂^μ x)`.
    pub fn conservation(&self) -> Result<NCExpr> {
        self.contract(|mu| self.partial(mu).apply(&NCExpr::word(vec![self.xi, self.first[mu]]), &self.sys))
    }

    /// `x⁻¹ ∂_μ∂^μ x − q² x⁻² ∂_μx ∂^μx`.
    pub fn expected_conservation(&self) -> Result<NCExpr> {
        self.contract(|mu| {
            Ok(NCExpr::from_terms([
                (QRat::one(), vec![self.xi, self.second[mu]]),
                (-q(2), vec![self.xi, self.xi, self.first[mu], self.first[mu]]),
            ]))
        })
    }

    /// `∂_μ∂^μ x − q² x⁻¹ ∂_μx ∂^μx`.
    pub fn printed_eom(&self) -> Result<NCExpr> {
        self.contract(|mu| {
            Ok(NCExpr::from_terms([
                (QRat::one(), vec![self.second[mu]]),
                (-q(2), vec![self.xi, self.first[mu], self.first[mu]]),
            ]))
        })
    }

    /// `½ Tr_q(ω_μ ω^μ)` with `ω_μ = diag(x⁻¹∂_μx, −q² x⁻¹∂_μx)`.
    pub fn lagrangian(&self) -> Result<NCExpr> {
        self.contract(|mu| {
            let w1 = NCExpr::word(vec![self.xi, self.first[mu]]);
            let w = FormMatrix::diag(w1.clone(), w1.scale(&-q(2)));
            Ok(w.mul(&w, &self.sys)?.q_trace(&self.sys)?.scale(&QRat::ratio(1, 2)))
        })
    }
}

/// `L` with the variation of `x'` moved to the right by
/// `δx' x' = q⁻² x' δx'`: returns `Π` with `δ_{x'} L = Π δx'`.
pub fn momentum(b: &BorelPresentation) -> Result<NCExpr> {
    let mut a = (**b.alphabet()).clone();
    let delta = a.push("dx'", Parity::Even, 1)?;
    let mut builder = RewriteSystem::builder(Arc::new(a));
    for r in b.sys.rules() {
        builder = builder.rule(r.lhs.0, r.lhs.1, r.rhs.clone());
    }
    let sys = builder.commute(delta, b.gens.xd, q(-2)).build()?;
    let sys = match b.sys.q0() {
        Some(q0) => sys.specialize(q0)?,
        None => sys,
    };
    let l = b.lagrangian()?;
    let vary = Derivation::ungraded()
        .set(b.gens.xd, NCExpr::gen(delta))
        .set(b.gens.xi, NCExpr::zero())
        .set(b.gens.x, NCExpr::zero())
        .set(b.gens.y, NCExpr::zero());
    let dl = vary.apply(&l, &sys)?;
    let mut pi = NCExpr::zero();
    for (w, c) in dl.terms() {
        match w.split_last() {
            Some((last, rest)) if *last == delta && !rest.contains(&delta) => pi.add_term(rest.to_vec(), c.clone()),
            _ => return Err(Error::Inconsistent("variation does not stand on the right".into())),
        }
    }
    Ok(pi)
}

/// Options for [`qplane_suite`].
#[derive(Clone, Debug)]
pub struct QplaneOptions {
    pub order: usize,
}

impl Default for QplaneOptions {
    fn default() -> Self {
        QplaneOptions { order: 8 }
    }
}

fn series_outcome(s: &TSeries, a: &Alphabet) -> Outcome {
    match s.coeffs().iter().position(|c| !c.is_zero()) {
        None => Outcome::flag(true, format!("zero to order {}", s.order())),
        Some(k) => Outcome::zero(s.coeff(k), a).with_detail(format!("first nonzero coefficient at t^{k}")),
    }
}

fn bi_outcome(s: &BiSeries, a: &Alphabet) -> Outcome {
    match s.first_nonzero() {
        None => Outcome::flag(true, format!("zero to bi-order {}", s.order())),
        Some((i, j, c)) => Outcome::zero(c, a).with_detail(format!("first nonzero coefficient at t^{i} t'^{j}")),
    }
}

pub fn qplane_suite(q0: Option<&BigRational>, g: &GroupPresentation, opts: &QplaneOptions) -> Checks {
    let mut checks = Checks::new();
    let n = opts.order.max(2);
    let (b, sol, plane) = match (|| {
        Ok::<_, Error>((
            BorelPresentation::new()?.specialize(q0)?,
            SolutionAlgebra::new()?.specialize(q0)?,
            PlaneField2d::new()?.specialize(q0)?,
        ))
    })() {
        Ok(x) => x,
        Err(e) => {
            checks.run("qplane.presentation", "borel-presentation", || Err(e));
            return checks;
        }
    };
    let a = b.alphabet().clone();

    let tag = "borel-presentation";
    checks.run("qplane.borel.confluence", tag, || {
        let rep = critical_pairs(&b.sys)?;
        Ok(Outcome::flag(rep.is_confluent(), format!("{} overlaps", rep.overlaps_checked)))
    });
    checks.run("qplane.borel.embedding", tag, || {
        let mut bad = Vec::new();
        let mut total = NCExpr::zero();
        for (label, r) in embedding_residuals(&b, g)? {
            if !r.is_zero() {
                bad.push(label);
            }
            total = total + r;
        }
        let detail = if bad.is_empty() { "every rule maps to 0".to_string() } else { bad.join("; ") };
        Ok(Outcome::zero(&total, g.alphabet()).with_detail(detail))
    });
    checks.run("qplane.borel.inverse", tag, || {
        b.g_inverse()?;
        Ok(Outcome::flag(true, "g^-1 = [[x^-1, 0], [-q y, x]]".into()))
    });
    checks.run("qplane.omega", tag, || {
        Ok(zero_matrix(&b.omega()?.sub(&b.omega_printed()).reduce(&b.sys)?, &a))
    });
    checks.run("qplane.omega.group-coordinates", tag, || {
        Ok(zero_matrix(&projected_cartan(g)?.sub(&projected_cartan_printed(g)).reduce(&g.sys)?, g.alphabet()))
    });

    let tag = "quantum-plane-lagrangian";
    checks.run("qplane.lagrangian", tag, || {
        let l = b.lagrangian()?;
        let res = b.sys.reduce(&(&l - &NCExpr::term(printed_kinetic_coefficient(), b.kinetic_word())))?;
        Ok(Outcome::zero(&res, &a).with_detail(format!("L = {}", l.render(&a))))
    });
    checks.run("qplane.lagrangian.classical", tag, || {
        let l = b.lagrangian()?;
        let c = l.coeff(&b.kinetic_word()).eval_at(&BigRational::from_integer(1.into()))?;
        Ok(Outcome::flag(c == BigRational::from_integer(1.into()), format!("coefficient at q = 1 is {c}")))
    });
    checks.run("qplane.eom.conservation", tag, || {
        let BorelGens { xi, xd, xdd, .. } = b.gens;
        let want = NCExpr::from_terms([(QRat::one(), vec![xi, xdd]), (-q(2), vec![xi, xi, xd, xd])]);
        let res = b.sys.reduce(&(&b.conservation()? - &want))?;
        Ok(Outcome::zero(&res, &a).with_detail("d/dt(x^-1 x') = x^-1 x'' - q^2 x^-2 x'^2"))
    });
    checks.run("qplane.eom.printed-literal", tag, || {
        let BorelGens { xi, xd, xdd, .. } = b.gens;
        let printed = NCExpr::from_terms([(QRat::one(), vec![xi, xdd]), (-q(2), vec![xi, xd, xd])]);
        Ok(Outcome::zero_informational(&b.sys.reduce(&(&b.conservation()? - &printed))?, &a)
            .with_detail("printed x^-1 x'' - q^2 x^-1 x'^2"))
    });
    checks.run("qplane.lagrangian.momentum", tag, || {
        let pi = momentum(&b)?;
        let BorelGens { xi, xd, .. } = b.gens;
        let want = NCExpr::term(printed_kinetic_coefficient() * lp(&[(1, 0), (1, -2)]), vec![xi, xi, xd]);
        Ok(Outcome::zero(&b.sys.reduce(&(&pi - &want))?, &a).with_detail(format!("Pi = {}", pi.render(&a))))
    });

    let tag = "classical-solution";
    let sa = sol.sys.alphabet().clone();
    checks.run("qplane.series.inverse", tag, || {
        let rho = sol.rho(n)?;
        let inv = sol.rho_inverse(n)?;
        let prod = rho.mul(&inv, &sol.sys)?.sub(&TSeries::constant(NCExpr::one(), n)).reduce(&sol.sys)?;
        Ok(series_outcome(&prod, &sa))
    });
    match solution_checks(&sol, n) {
        Ok(s) => {
            checks.run("qplane.solution.exchange", tag, || Ok(series_outcome(&s.exchange, &sa)));
            checks.run("qplane.solution.conserved", tag, || Ok(series_outcome(&s.conserved, &sa)));
            checks.run("qplane.solution.conservation-law", tag, || Ok(series_outcome(&s.conservation_law, &sa)));
            checks.run("qplane.solution.printed-literal", tag, || {
                Ok(series_outcome(&s.printed_literal, &sa).informational())
            });
            checks.run("qplane.solution.printed-inverse-square", tag, || {
                Ok(series_outcome(&s.printed_inverse_square, &sa))
            });
        }
        Err(e) => checks.run("qplane.solution", tag, || Err(e)),
    }

    let tag = "unequal-time";
    match unequal_time(&sol, n) {
        Ok(u) => {
            checks.run("qplane.unequal-time.rescaled", tag, || Ok(bi_outcome(&u.rescaled, &sa)));
            checks.run("qplane.unequal-time.lambda", tag, || {
                let antisym = (&u.lambda_t + &u.lambda_tp).is_zero();
                Ok(Outcome::flag(antisym, format!("lambda = ({}) t + ({}) t'", u.lambda_t, u.lambda_tp)))
            });
            checks.run("qplane.unequal-time.exponential", tag, || Ok(bi_outcome(&u.with_lambda, &sa)));
            checks.run("qplane.unequal-time.printed-lambda", tag, || {
                Ok(Outcome::scalar(&u.lambda_t, &sol.sys.scalar(&printed_lambda())?).informational())
            });
        }
        Err(e) => checks.run("qplane.unequal-time", tag, || Err(e)),
    }

    let tag = "two-dimensional-model";
    let pa = plane.sys.alphabet().clone();
    checks.run("qplane.eom2d.lagrangian", tag, || {
        let l = plane.lagrangian()?;
        let want = plane.contract(|mu| {
            Ok(NCExpr::term(printed_kinetic_coefficient(), vec![plane.xi, plane.xi, plane.first[mu], plane.first[mu]]))
        })?;
        Ok(Outcome::zero(&plane.sys.reduce(&(&l - &want))?, &pa))
    });
    checks.run("qplane.eom2d.conservation", tag, || {
        let res = plane.sys.reduce(&(&plane.conservation()? - &plane.expected_conservation()?))?;
        Ok(Outcome::zero(&res, &pa))
    });
    checks.run("qplane.eom2d.printed", tag, || {
        let lhs = plane.sys.multiply(&NCExpr::gen(plane.x), &plane.conservation()?)?;
        let res = plane.sys.reduce(&(&lhs - &plane.printed_eom()?))?;
        Ok(Outcome::zero_informational(&res, &pa).with_detail("x times the conservation law"))
    });
    checks
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lagrangian_coefficient() {
        let b = BorelPresentation::new().unwrap();
        let l = b.lagrangian().unwrap();
        assert_eq!(l, NCExpr::term(printed_kinetic_coefficient(), b.kinetic_word()));
    }

    #[test]
    fn omega_entry_two_two() {
        let b = BorelPresentation::new().unwrap();
        let w = b.omega().unwrap();
        assert_eq!(w.entry(4), &NCExpr::term(-q(2), vec![b.gens.xi, b.gens.xd]));
    }

    #[test]
    fn series_leading_terms() {
        let s = SolutionAlgebra::new().unwrap();
        let rho = s.rho(4).unwrap();
        assert_eq!(rho.coeff(0), &NCExpr::gen(s.alpha));
        assert_eq!(rho.coeff(1), &NCExpr::word(vec![s.alpha, s.beta]));
        let inv = s.rho_inverse(4).unwrap();
        assert_eq!(inv.coeff(0), &NCExpr::gen(s.alpha_inv));
        assert_eq!(inv.coeff(1), &s.sys.reduce(&NCExpr::term(-QRat::one(), vec![s.beta, s.alpha_inv])).unwrap());
    }
}
