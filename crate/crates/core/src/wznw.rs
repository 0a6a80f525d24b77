//! Spacetime derivatives of the group coordinates: the q-deformed WZNW
//! kinetic term, the Wess–Zumino 3-form and the background fields
//! `G_AB`, `B_AB` read off from them.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::coeff::{q_number, QRat};
use crate::error::{Error, Result};
use crate::group::{
    cartan_form, gauss_in, gauss_inverse_in, lp, q, Coords, FormMatrix, Gens, GroupPresentation,
};
use crate::ncalg::{critical_pairs, inverse_image, Alphabet, Derivation, GenId, NCExpr, Parity, RewriteSystem, Word};
use crate::verify::{Checks, Outcome};

/// A group coordinate, listed in the order `X^A = (r, f-, f+)` used for the
/// background tables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Field {
    Rho,
    Minus,
    Plus,
}

impl Field {
    pub const ALL: [Field; 3] = [Field::Rho, Field::Minus, Field::Plus];

    pub fn name(self) -> &'static str {
        match self {
            Field::Rho => "r",
            Field::Minus => "f-",
            Field::Plus => "f+",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn coord(self, c: &Coords) -> GenId {
        match self {
            Field::Rho => c.r,
            Field::Minus => c.m,
            Field::Plus => c.p,
        }
    }

    fn differential(self, g: &Gens) -> GenId {
        match self {
            Field::Rho => g.dr,
            Field::Minus => g.dm,
            Field::Plus => g.dp,
        }
    }

    fn of_differential(g: &Gens, id: GenId) -> Option<Field> {
        match id {
            x if x == g.dr => Some(Field::Rho),
            x if x == g.dm => Some(Field::Minus),
            x if x == g.dp => Some(Field::Plus),
            _ => None,
        }
    }
}

/// How products of two derivative generators are treated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Layer {
    /// No relations among derivative generators; `∂A ∂B` and `∂B ∂A` stay
    /// distinct, which is what the metric is read from.
    Free,
    /// Only the `ε`-contracted combinations `∂₀X∂₁Y - ∂₁X∂₀Y` obey the
    /// `dX dY` rules, which is all that `dX = ∂_μX dz^μ` implies.
    Antisymmetric,
    /// Every `∂_μX ∂_νY` with `X ≠ Y` obeys the `dX dY` rule with the sign
    /// of the odd `dz` swap; for `X = Y` only the antisymmetric part is
    /// constrained. Not confluent for generic `q`.
    Componentwise,
}

/// A form presentation with each differential `dX` replaced by two even
/// derivative generators `∂₀X`, `∂₁X`. Coordinates keep their names;
/// `∂_μX` is named `d{μ}X`.
#[derive(Debug)]
pub struct Lifted {
    pub sys: RewriteSystem,
    pub layer: Layer,
    coord: HashMap<GenId, GenId>,
    partial: HashMap<GenId, [GenId; 2]>,
    origin: HashMap<GenId, (GenId, usize)>,
    dz: Option<[GenId; 2]>,
}

impl Lifted {
    /// Lifts `source`. With `with_dz` two odd central symbols `dz0`, `dz1`
    /// are added so derivative rules can be contracted back into form rules.
    pub fn new(source: &RewriteSystem, layer: Layer, with_dz: bool) -> Result<Lifted> {
        let sa = source.alphabet();
        let mut a = Alphabet::new();
        let mut coord = HashMap::new();
        for x in sa.ids().filter(|x| !sa.is_odd(*x)) {
            coord.insert(x, a.push(sa.name(x), Parity::Even, sa.get(x).weight)?);
        }
        let mut partial = HashMap::new();
        let mut origin = HashMap::new();
        for x in sa.ids().filter(|x| sa.is_odd(*x)) {
            let base = sa.name(x).strip_prefix('d').unwrap_or(sa.name(x));
            let w = sa.get(x).weight;
            let ids = [a.push(&format!("d0{base}"), Parity::Even, w)?, a.push(&format!("d1{base}"), Parity::Even, w)?];
            partial.insert(x, ids);
            origin.insert(ids[0], (x, 0));
            origin.insert(ids[1], (x, 1));
        }
        let dz = if with_dz {
            Some([a.push("dz0", Parity::Odd, 1)?, a.push("dz1", Parity::Odd, 1)?])
        } else {
            None
        };
        let all: Vec<GenId> = a.ids().collect();
        let mut b = RewriteSystem::builder(Arc::new(a));

        // Replaces the k-th differential letter of `w` by `∂_{mus[k]}`.
        let lift = |w: &[GenId], mus: &[usize]| -> Result<Word> {
            let mut k = 0;
            w.iter()
                .map(|x| match (coord.get(x), partial.get(x)) {
                    (Some(y), _) => Ok(*y),
                    (None, Some(ds)) => {
                        let mu = *mus.get(k).ok_or_else(|| Error::Inconsistent("too many differentials".into()))?;
                        k += 1;
                        Ok(ds[mu])
                    }
                    _ => Err(Error::Inconsistent("unknown generator in rule".into())),
                })
                .collect()
        };
        let lift_expr = |e: &NCExpr, mus: &[usize], c: &QRat| -> Result<NCExpr> {
            let mut out = NCExpr::zero();
            for (w, v) in e.terms() {
                out.add_term(lift(w, mus)?, v * c);
            }
            Ok(out)
        };

        for rule in source.rules() {
            let (x, y) = rule.lhs;
            match (coord.get(&x), partial.get(&x), coord.get(&y), partial.get(&y)) {
                (Some(&cx), _, Some(&cy), _) => b = b.rule(cx, cy, lift_expr(&rule.rhs, &[], &QRat::one())?),
                (_, Some(dx), Some(&cy), _) => {
                    for mu in 0..2 {
                        b = b.rule(dx[mu], cy, lift_expr(&rule.rhs, &[mu], &QRat::one())?);
                    }
                }
                (_, Some(dx), _, Some(dy)) if layer == Layer::Componentwise && x != y => {
                    for mu in 0..2 {
                        for nu in 0..2 {
                            b = b.rule(dx[mu], dy[nu], lift_expr(&rule.rhs, &[nu, mu], &-QRat::one())?);
                        }
                    }
                }
                (_, Some(dx), _, Some(dy)) if layer != Layer::Free => {
                    // ∂₀X∂₁Y - ∂₁X∂₀Y = Σ c w (∂₀U∂₁V - ∂₁U∂₀V)
                    let mut rhs = NCExpr::word(vec![dx[0], dy[1]]);
                    rhs = rhs - lift_expr(&rule.rhs, &[0, 1], &QRat::one())?;
                    rhs = rhs + lift_expr(&rule.rhs, &[1, 0], &QRat::one())?;
                    b = b.rule(dx[1], dy[0], rhs);
                }
                _ => {}
            }
        }
        if let Some([z0, z1]) = dz {
            for &x in &all {
                if x != z0 && x != z1 {
                    b = b.commute(z0, x, QRat::one()).commute(z1, x, QRat::one());
                }
            }
            b = b.nilpotent(z0).nilpotent(z1).commute(z1, z0, -QRat::one());
        }
        Ok(Lifted { sys: b.build()?, layer, coord, partial, origin, dz })
    }

    pub fn specialize(self, q0: Option<&BigRational>) -> Result<Self> {
        match q0 {
            Some(q0) => Ok(Lifted { sys: self.sys.specialize(q0)?, ..self }),
            None => Ok(self),
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.sys.alphabet()
    }

    /// The lifted copy of a source coordinate.
    pub fn coord(&self, x: GenId) -> Option<GenId> {
        self.coord.get(&x).copied()
    }

    /// `∂_μX` for a source differential `dX`.
    pub fn partial_of(&self, dx: GenId, mu: usize) -> Option<GenId> {
        self.partial.get(&dx).map(|d| d[mu])
    }

    /// Source differential and index of a derivative generator.
    pub fn origin(&self, id: GenId) -> Option<(GenId, usize)> {
        self.origin.get(&id).copied()
    }

    /// Replaces every `dX` of a source expression by `∂_μX`, reduced.
    pub fn at_index(&self, e: &NCExpr, mu: usize) -> Result<NCExpr> {
        let image = |x: GenId| match (self.coord.get(&x), self.partial.get(&x)) {
            (Some(c), _) => NCExpr::gen(*c),
            (_, Some(d)) => NCExpr::gen(d[mu]),
            _ => NCExpr::zero(),
        };
        self.sys.reduce(&e.substitute(image))
    }

    /// `dX ↦ ∂₀X dz0 + ∂₁X dz1` on a source expression, reduced.
    pub fn contract(&self, e: &NCExpr) -> Result<NCExpr> {
        let [z0, z1] = self.dz.ok_or_else(|| Error::Inconsistent("presentation has no dz symbols".into()))?;
        let image = |x: GenId| match (self.coord.get(&x), self.partial.get(&x)) {
            (Some(c), _) => NCExpr::gen(*c),
            (_, Some(d)) => NCExpr::word(vec![d[0], z0]) + NCExpr::word(vec![d[1], z1]),
            _ => NCExpr::zero(),
        };
        self.sys.reduce(&e.substitute(image))
    }
}

/// The group coordinates together with `∂₀X, ∂₁X` for each coordinate.
#[derive(Debug)]
pub struct DerivativePresentation {
    pub lifted: Lifted,
    pub coords: Coords,
    gens: Gens,
}

impl std::ops::Deref for DerivativePresentation {
    type Target = Lifted;
    fn deref(&self) -> &Lifted {
        &self.lifted
    }
}

impl DerivativePresentation {
    pub fn new(layer: Layer) -> Result<Self> {
        Self::build(layer, false)
    }

    /// See [`Lifted::new`].
    pub fn with_dz(layer: Layer) -> Result<Self> {
        Self::build(layer, true)
    }

    fn build(layer: Layer, with_dz: bool) -> Result<Self> {
        let group = GroupPresentation::new()?;
        let lifted = Lifted::new(&group.sys, layer, with_dz)?;
        let gens = group.gens;
        let c = |x: GenId| lifted.coord(x).ok_or_else(|| Error::Inconsistent("coordinate not lifted".into()));
        let coords = Coords { m: c(gens.m)?, p: c(gens.p)?, r: c(gens.r)?, ri: c(gens.ri)? };
        Ok(DerivativePresentation { lifted, coords, gens })
    }

    pub fn specialize(self, q0: Option<&BigRational>) -> Result<Self> {
        Ok(DerivativePresentation { lifted: self.lifted.specialize(q0)?, ..self })
    }

    pub fn partial(&self, f: Field, mu: usize) -> GenId {
        self.lifted.partial_of(f.differential(&self.gens), mu).expect("every differential is lifted")
    }

    /// Field and index of a derivative generator.
    pub fn field_of(&self, id: GenId) -> Option<(Field, usize)> {
        let (d, mu) = self.origin(id)?;
        Field::of_differential(&self.gens, d).map(|f| (f, mu))
    }

    /// `∂_μ` as an ungraded derivation on the coordinates.
    pub fn derivation(&self, mu: usize) -> Derivation {
        let c = &self.coords;
        let dr = NCExpr::gen(self.partial(Field::Rho, mu));
        Derivation::ungraded()
            .set(c.m, NCExpr::gen(self.partial(Field::Minus, mu)))
            .set(c.p, NCExpr::gen(self.partial(Field::Plus, mu)))
            .set(c.ri, inverse_image(c.ri, &dr))
            .set(c.r, dr)
    }

    /// `ω_μ = g⁻¹ ∂_μ g`.
    pub fn omega(&self, mu: usize) -> Result<FormMatrix> {
        let g = gauss_in(&self.coords, &self.sys)?;
        let dg = g.differential(&self.derivation(mu), &self.sys)?;
        gauss_inverse_in(&self.coords, &self.sys)?.mul(&dg, &self.sys)
    }

    /// `Tr_q(ω_μ ω_μ)` for one index.
    pub fn kinetic_component(&self, mu: usize) -> Result<NCExpr> {
        let w = self.omega(mu)?;
        w.mul(&w, &self.sys)?.q_trace(&self.sys)
    }

    /// `Σ_μ η_μ Tr_q(ω_μ ω_μ)` for a diagonal metric `η`.
    pub fn kinetic(&self, eta: [i64; 2]) -> Result<NCExpr> {
        let mut out = NCExpr::zero();
        for (mu, s) in eta.iter().enumerate() {
            out.add_scaled(&self.kinetic_component(mu)?, &QRat::int(*s));
        }
        Ok(out)
    }

    /// The printed kinetic term for one index, split into its four
    /// coefficient groups, each reduced.
    pub fn printed_kinetic_groups(&self, mu: usize) -> Result<Vec<(&'static str, NCExpr)>> {
        let Coords { p, ri, .. } = self.coords;
        let (dr, dm, dp) = (self.partial(Field::Rho, mu), self.partial(Field::Minus, mu), self.partial(Field::Plus, mu));
        let c = q(5) * q_number(2);
        let groups = vec![
            ("r-r", NCExpr::term(c.clone(), vec![ri, ri, dr, dr])),
            (
                "r-f-",
                NCExpr::from_terms([(c.clone(), vec![ri, p, dm, dr]), (&c * &q(-1), vec![ri, p, dr, dm])]),
            ),
            ("f--f+", NCExpr::from_terms([(QRat::one(), vec![dm, dp]), (q(2), vec![dp, dm])])),
            ("f--f-", NCExpr::term(-(q(2) * lp(&[(1, 4), (-1, 0)])), vec![p, p, dm, dm])),
        ];
        groups.into_iter().map(|(n, e)| Ok((n, self.sys.reduce(&e)?))).collect()
    }

    /// Unordered field pair of the two derivative letters closing `w`.
    fn pair_of(&self, w: &[GenId]) -> Option<(Field, Field)> {
        let ds: Vec<Field> = w.iter().filter_map(|x| self.field_of(*x).map(|(f, _)| f)).collect();
        match ds.as_slice() {
            [a, b] => Some((*a.min(b), *a.max(b))),
            _ => None,
        }
    }
}

/// Background tables over `X^A = (r, f-, f+)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetricTable {
    pub g: [[NCExpr; 3]; 3],
    pub b: [[NCExpr; 3]; 3],
}

/// JSON form of [`MetricTable`], keyed by `"A,B"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetricJson {
    #[serde(rename = "G")]
    pub g: BTreeMap<String, String>,
    #[serde(rename = "B")]
    pub b: BTreeMap<String, String>,
}

impl MetricTable {
    pub fn zero() -> Self {
        MetricTable { g: Default::default(), b: Default::default() }
    }

    pub fn to_json(&self, a: &Alphabet) -> MetricJson {
        let table = |t: &[[NCExpr; 3]; 3]| {
            let mut out = BTreeMap::new();
            for x in Field::ALL {
                for y in Field::ALL {
                    out.insert(format!("{},{}", x.name(), y.name()), t[x.index()][y.index()].render(a));
                }
            }
            out
        };
        MetricJson { g: table(&self.g), b: table(&self.b) }
    }
}

/// The tables as printed, with entries reduced in `dp`.
pub fn printed_backgrounds(dp: &DerivativePresentation) -> Result<MetricTable> {
    let Coords { p, ri, .. } = dp.coords;
    let b2 = q_number(2);
    let mut t = MetricTable::zero();
    t.g[0][0] = NCExpr::term(q(5) * b2.clone(), vec![ri, ri]);
    t.g[0][1] = NCExpr::term(q(4) * b2.clone(), vec![ri, p]);
    t.g[1][0] = NCExpr::term(q(5) * b2, vec![ri, p]);
    t.g[1][1] = NCExpr::term(-(q(2) * lp(&[(1, 4), (-1, 0)])), vec![p, p]);
    t.g[1][2] = NCExpr::one();
    t.g[2][1] = NCExpr::scalar(q(2));
    let pref = q(3) * q_number(2) * q_number(3) * QRat::ratio(1, 6);
    t.b[0][1] = NCExpr::term(pref.clone(), vec![p, ri]);
    t.b[1][0] = NCExpr::term(-pref, vec![p, ri]);
    for row in t.g.iter_mut().chain(t.b.iter_mut()) {
        for e in row.iter_mut() {
            *e = dp.sys.reduce(e)?;
        }
    }
    Ok(t)
}

/// Reads `G_AB` off the `μ = 0` component of the kinetic term in the free
/// layer: the coefficient function left of `∂₀A ∂₀B`.
pub fn extract_metric(free: &DerivativePresentation) -> Result<[[NCExpr; 3]; 3]> {
    let kin = free.kinetic_component(0)?;
    let mut g: [[NCExpr; 3]; 3] = Default::default();
    for (w, c) in kin.terms() {
        let n = w.len();
        let split = if n >= 2 { (free.field_of(w[n - 2]), free.field_of(w[n - 1])) } else { (None, None) };
        match split {
            (Some((a, 0)), Some((b, 0))) if w[..n - 2].iter().all(|x| free.field_of(*x).is_none()) => {
                g[a.index()][b.index()].add_term(w[..n - 2].to_vec(), c.clone());
            }
            _ => {
                return Err(Error::Inconsistent(format!(
                    "kinetic term has a monomial without two trailing derivatives: {}",
                    free.alphabet().render_word(w)
                )))
            }
        }
    }
    Ok(g)
}

/// `Σ_μ η_μ Σ_AB G_AB ∂_μX^A ∂_μX^B`, reduced.
pub fn reassemble(free: &DerivativePresentation, g: &[[NCExpr; 3]; 3], eta: [i64; 2]) -> Result<NCExpr> {
    let mut out = NCExpr::zero();
    for (mu, s) in eta.iter().enumerate() {
        for x in Field::ALL {
            for y in Field::ALL {
                let d = NCExpr::word(vec![free.partial(x, mu), free.partial(y, mu)]);
                out.add_scaled(&g[x.index()][y.index()].concat(&d), &QRat::int(*s));
            }
        }
    }
    free.sys.reduce(&out)
}

/// `E_AB = ∂₀A ∂₁B - ∂₁A ∂₀B`, reduced.
fn antisym(ex: &DerivativePresentation, a: Field, b: Field) -> Result<NCExpr> {
    let e = NCExpr::word(vec![ex.partial(a, 0), ex.partial(b, 1)]) - NCExpr::word(vec![ex.partial(a, 1), ex.partial(b, 0)]);
    ex.sys.reduce(&e)
}

/// Decomposes an antisymmetric-layer 2-form potential `W` (already contracted
/// with `ε^{μν}`) as `Σ_{A<B} B_AB E_AB`, with `B_BA = -B_AB`. Pairs are
/// eliminated from the heaviest leading word down. Returns the table and
/// whatever part of `W` the decomposition could not absorb.
pub fn extract_two_form(ex: &DerivativePresentation, w: &NCExpr) -> Result<([[NCExpr; 3]; 3], NCExpr)> {
    let a = ex.alphabet().clone();
    let is_coord = |x: &GenId| ex.field_of(*x).is_none();
    let mut pairs = Vec::new();
    for (i, x) in Field::ALL.iter().enumerate() {
        for y in &Field::ALL[i + 1..] {
            let e = antisym(ex, *x, *y)?;
            let lead = e
                .terms()
                .map(|(w, _)| w.clone())
                .filter(|w| w.iter().all(|l| !is_coord(l)))
                .max_by(|u, v| a.compare(u, v))
                .ok_or_else(|| Error::Inconsistent("antisymmetric pair has no pure derivative word".into()))?;
            pairs.push((*x, *y, e, lead));
        }
    }
    pairs.sort_by(|u, v| a.compare(&v.3, &u.3));
    let mut rest = ex.sys.reduce(w)?;
    let mut b: [[NCExpr; 3]; 3] = Default::default();
    for (x, y, e, lead) in pairs {
        let lc = e.coeff(&lead);
        let mut coef = NCExpr::zero();
        for (w, c) in rest.terms() {
            let n = w.len();
            if n >= 2 && w[n - 2..] == lead[..] && w[..n - 2].iter().all(is_coord) {
                coef.add_term(w[..n - 2].to_vec(), c.checked_div(&lc)?);
            }
        }
        rest = ex.sys.reduce(&(rest.clone() - coef.concat(&e)))?;
        b[y.index()][x.index()] = -&coef;
        b[x.index()][y.index()] = coef;
    }
    Ok((b, rest))
}

/// `(Tr_q(ω ω ω), d(r^-1 dr df- f+))` in the group calculus.
pub fn wz_three_form(g: &GroupPresentation) -> Result<(NCExpr, NCExpr)> {
    let w = cartan_form(g)?;
    let www = w.mul(&w, &g.sys)?.mul(&w, &g.sys)?;
    let t = www.q_trace(&g.sys)?;
    let Gens { p, ri, dm, dr, .. } = g.gens;
    let pot = g.diff(&NCExpr::word(vec![ri, dr, dm, p]))?;
    Ok((t, pot))
}

/// The scalar `c` with `t = c·p`, if one exists.
pub fn proportionality(t: &NCExpr, p: &NCExpr) -> Result<Option<QRat>> {
    let Some((w, pc)) = p.terms().next() else {
        return Ok(t.is_zero().then(QRat::zero));
    };
    let c = t.coeff(w).checked_div(pc)?;
    Ok((t - &p.scale(&c)).is_zero().then_some(c))
}

/// `c/6 · ε^{μν} r^-1 ∂_μr ∂_νf- f+` in the antisymmetric layer.
pub fn wz_potential(ex: &DerivativePresentation, c: &QRat) -> Result<NCExpr> {
    let Coords { p, ri, .. } = ex.coords;
    let (r0, r1) = (ex.partial(Field::Rho, 0), ex.partial(Field::Rho, 1));
    let (m0, m1) = (ex.partial(Field::Minus, 0), ex.partial(Field::Minus, 1));
    let e = NCExpr::word(vec![ri, r0, m1, p]) - NCExpr::word(vec![ri, r1, m0, p]);
    ex.sys.reduce(&e.scale(&(c * &QRat::ratio(1, 6))))
}

/// Every computed quantity of the suite, for callers that want the
/// objects rather than the report.
pub struct WznwData {
    pub free: DerivativePresentation,
    pub exchange: DerivativePresentation,
    pub kinetic: NCExpr,
    pub c: QRat,
    pub table: MetricTable,
}

fn presentations(q0: Option<&BigRational>) -> Result<(DerivativePresentation, DerivativePresentation)> {
    Ok((
        DerivativePresentation::new(Layer::Free)?.specialize(q0)?,
        DerivativePresentation::new(Layer::Antisymmetric)?.specialize(q0)?,
    ))
}

/// Kinetic term, `c(q)` and the extracted tables.
pub fn compute(g: &GroupPresentation) -> Result<WznwData> {
    let (free, exchange) = presentations(g.sys.q0())?;
    let kinetic = free.kinetic([1, 1])?;
    let (t, p) = wz_three_form(g)?;
    let c = proportionality(&t, &p)?.ok_or_else(|| Error::Inconsistent("3-forms are not proportional".into()))?;
    let (b, _) = extract_two_form(&exchange, &wz_potential(&exchange, &c)?)?;
    let table = MetricTable { g: extract_metric(&free)?, b };
    Ok(WznwData { free, exchange, kinetic, c, table })
}

/// Borrows a precomputed result inside a later check; the error is
/// repeated in every dependent entry.
fn share<T>(r: &Result<T>) -> Result<&T> {
    r.as_ref().map_err(|e| Error::Inconsistent(e.to_string()))
}

fn zero(res: &NCExpr, a: &Alphabet) -> Result<Outcome> {
    Ok(Outcome::zero(res, a))
}

fn confluence_outcome(sys: &RewriteSystem) -> Result<Outcome> {
    let rep = critical_pairs(sys)?;
    let mut o = Outcome::flag(rep.is_confluent(), format!("{} overlaps", rep.overlaps_checked));
    if let Some(v) = rep.violations.first() {
        o.residual = format!("{}: {} vs {}", v.witness, v.left, v.right);
    }
    Ok(o)
}

pub fn wznw_suite(g: &GroupPresentation) -> Checks {
    let mut checks = Checks::new();
    let q0 = g.sys.q0();
    let (free, exchange) = match presentations(q0) {
        Ok(x) => x,
        Err(e) => {
            checks.run("wznw.presentation", "derivative-presentation", || Err(e));
            return checks;
        }
    };
    let fa = free.alphabet().clone();
    let xa = exchange.alphabet().clone();

    let tag = "derivative-presentation";
    checks.run("wznw.free.confluence", tag, || confluence_outcome(&free.sys));
    checks.run("wznw.antisymmetric.confluence", tag, || confluence_outcome(&exchange.sys));
    checks.run("wznw.componentwise.confluence", tag, || {
        let cw = DerivativePresentation::new(Layer::Componentwise)?.specialize(q0)?;
        Ok(confluence_outcome(&cw.sys)?
            .informational()
            .with_detail("per-component sign-flip rules; same-index products clash with the first-order rules"))
    });
    checks.run("wznw.componentwise.confluence.classical", tag, || {
        let one = BigRational::from_integer(1.into());
        confluence_outcome(&DerivativePresentation::new(Layer::Componentwise)?.specialize(Some(&one))?.sys)
    });
    for (name, layer) in [("antisymmetric", Layer::Antisymmetric), ("componentwise", Layer::Componentwise)] {
        match DerivativePresentation::with_dz(layer).and_then(|d| d.specialize(q0)) {
            Ok(dz) => {
                for rule in g.sys.rules() {
                    let (x, y) = rule.lhs;
                    if !g.alphabet().is_odd(x) {
                        continue;
                    }
                    let label = g.alphabet().render_word(&[x, y]);
                    checks.run(&format!("wznw.{name}.contraction[{label}]"), tag, || {
                        let lhs = NCExpr::word(vec![x, y]);
                        let res = dz.contract(&(lhs - rule.rhs.clone()))?;
                        zero(&res, dz.alphabet())
                    });
                }
            }
            Err(e) => checks.run(&format!("wznw.{name}.contraction"), tag, || Err(e)),
        }
    }

    let tag = "wznw-kinetic";
    let kinetic = free.kinetic([1, 1]);
    checks.run("wznw.kinetic.two-derivatives", tag, || {
        let k = share(&kinetic)?;
        let bad = k.filter_words(|w| free.pair_of(w).is_none() || fa.degree(w) != 0);
        Ok(Outcome::zero(&bad, &fa).with_detail(format!("{} monomials", k.len())))
    });
    let printed: Result<Vec<Vec<(&str, NCExpr)>>> = (0..2).map(|mu| free.printed_kinetic_groups(mu)).collect();
    let pairs = [
        ("r-r", (Field::Rho, Field::Rho)),
        ("r-f-", (Field::Rho, Field::Minus)),
        ("f--f+", (Field::Minus, Field::Plus)),
        ("f--f-", (Field::Minus, Field::Minus)),
    ];
    for (name, pair) in pairs {
        checks.run(&format!("wznw.kinetic.group[{name}]"), tag, || {
            let k = share(&kinetic)?;
            let pr = share(&printed)?;
            let mut res = k.filter_words(|w| free.pair_of(w) == Some(pair));
            for groups in pr {
                let (_, e) = groups.iter().find(|(n, _)| *n == name).expect("group listed");
                res = res - e.clone();
            }
            zero(&res, &fa)
        });
    }
    checks.run("wznw.kinetic.other-pairs", tag, || {
        let k = share(&kinetic)?;
        let known: Vec<_> = pairs.iter().map(|(_, p)| Some(*p)).collect();
        zero(&k.filter_words(|w| !known.contains(&free.pair_of(w))), &fa)
    });
    for (name, eta) in [("euclidean", [1, 1]), ("lorentzian", [-1, 1])] {
        checks.run(&format!("wznw.kinetic.total.{name}"), tag, || {
            let pr = share(&printed)?;
            let mut res = free.kinetic(eta)?;
            for (mu, groups) in pr.iter().enumerate() {
                for (_, e) in groups {
                    res.add_scaled(e, &QRat::int(-eta[mu]));
                }
            }
            zero(&res, &fa)
        });
    }
    checks.run("wznw.kinetic.coefficient[r^-2 dr dr]", tag, || {
        let k = share(&kinetic)?;
        let (ri, r0) = (free.coords.ri, free.partial(Field::Rho, 0));
        let got = k.coeff(&[ri, ri, r0, r0]);
        Ok(Outcome::scalar(&got, &free.sys.scalar(&(q(5) * q_number(2)))?))
    });
    checks.run("wznw.kinetic.coefficient[f+^2 df- df-]", tag, || {
        let k = share(&kinetic)?;
        let (p, m0) = (free.coords.p, free.partial(Field::Minus, 0));
        let got = k.coeff(&[p, p, m0, m0]);
        Ok(Outcome::scalar(&got, &free.sys.scalar(&-(q(2) * lp(&[(1, 4), (-1, 0)])))?))
    });
    checks.run("wznw.kinetic.classical", "wznw-kinetic.classical-limit", || {
        let one = BigRational::from_integer(1.into());
        let cl = DerivativePresentation::new(Layer::Componentwise)?.specialize(Some(&one))?;
        let Coords { p, ri, .. } = cl.coords;
        let mut want = NCExpr::zero();
        for mu in 0..2 {
            let (r, m, pp) = (cl.partial(Field::Rho, mu), cl.partial(Field::Minus, mu), cl.partial(Field::Plus, mu));
            want = want
                + NCExpr::from_terms([
                    (QRat::int(2), vec![ri, ri, r, r]),
                    (QRat::int(2), vec![ri, p, m, r]),
                    (QRat::int(2), vec![ri, p, r, m]),
                    (QRat::int(2), vec![m, pp]),
                ]);
        }
        let res = cl.sys.reduce(&(cl.kinetic([1, 1])? - want))?;
        zero(&res, cl.alphabet())
    });

    let ga = g.alphabet().clone();
    let tag = "wess-zumino";
    let three = wz_three_form(g);
    checks.run("wz.closed", tag, || {
        let (t, _) = share(&three)?;
        zero(&g.diff(t)?, &ga)
    });
    let c = share(&three).and_then(|(t, p)| proportionality(t, p));
    checks.run("wz.proportional", tag, || {
        let c = share(&c)?;
        let (t, p) = share(&three)?;
        Ok(match c {
            Some(c) => Outcome::flag(true, format!("c = {c}; Tr_q(w w w) = {}", t.render(&ga))),
            None => Outcome::flag(false, format!("Tr_q(w w w) = {}, d(...) = {}", t.render(&ga), p.render(&ga))),
        })
    });
    let c = c.ok().flatten();
    let numerator = q(1) * q_number(2) * q_number(3);
    checks.run("wz.coefficient", tag, || {
        let c = c.as_ref().ok_or_else(|| Error::Inconsistent("no proportionality constant".into()))?;
        Ok(Outcome::scalar(c, &g.sys.scalar(&numerator)?))
    });
    checks.run("wz.coefficient.classical", tag, || {
        let c = c.as_ref().ok_or_else(|| Error::Inconsistent("no proportionality constant".into()))?;
        let one = BigRational::from_integer(1.into());
        let v = c.eval_at(&one)?;
        Ok(Outcome::flag(v == BigRational::from_integer(6.into()), format!("c(1) = {v}")))
    });
    checks.run("wz.printed-prefactor", tag, || {
        let c = c.as_ref().ok_or_else(|| Error::Inconsistent("no proportionality constant".into()))?;
        let printed = g.sys.scalar(&(numerator.clone() * QRat::ratio(1, 6)))?;
        Ok(Outcome::scalar(c, &printed).informational().with_detail(
            "the displayed 1/6 is a normalization of the component form; the 2-form B below uses the same convention",
        ))
    });

    let tag = "background-fields";
    let metric = extract_metric(&free);
    let printed_tables = printed_backgrounds(&free);
    let two_form = c
        .as_ref()
        .ok_or_else(|| Error::Inconsistent("no proportionality constant".into()))
        .and_then(|c| extract_two_form(&exchange, &wz_potential(&exchange, c)?));
    for x in Field::ALL {
        for y in Field::ALL {
            let id = format!("{},{}", x.name(), y.name());
            checks.run(&format!("metric.G[{id}]"), tag, || {
                let gm = share(&metric)?;
                let pt = share(&printed_tables)?;
                let res = &gm[x.index()][y.index()] - &pt.g[x.index()][y.index()];
                Ok(Outcome::zero_informational(&res, &fa)
                    .with_detail(format!("engine {}", gm[x.index()][y.index()].render(&fa))))
            });
        }
    }
    for x in Field::ALL {
        for y in Field::ALL {
            let id = format!("{},{}", x.name(), y.name());
            checks.run(&format!("metric.B[{id}]"), tag, || {
                let (b, _) = share(&two_form)?;
                let pt = share(&printed_tables)?;
                let res = exchange.sys.reduce(&(&b[x.index()][y.index()] - &pt.b[x.index()][y.index()]))?;
                Ok(Outcome::zero_informational(&res, &xa)
                    .with_detail(format!("engine {}", b[x.index()][y.index()].render(&xa))))
            });
        }
    }
    checks.run("metric.B.decomposition", tag, || {
        let (_, rest) = share(&two_form)?;
        zero(rest, &xa)
    });
    checks.run("metric.B.antisymmetric", tag, || {
        let (b, _) = share(&two_form)?;
        let mut res = NCExpr::zero();
        for x in Field::ALL {
            for y in Field::ALL {
                res = res + b[x.index()][y.index()].clone() + b[y.index()][x.index()].clone();
            }
        }
        zero(&res, &xa)
    });
    for (name, eta) in [("euclidean", [1, 1]), ("lorentzian", [-1, 1])] {
        checks.run(&format!("metric.G.reassembly.{name}"), tag, || {
            let gm = share(&metric)?;
            let res = reassemble(&free, gm, eta)? - free.kinetic(eta)?;
            zero(&res, &fa)
        });
    }
    checks
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layers_are_oriented() {
        for layer in [Layer::Free, Layer::Antisymmetric, Layer::Componentwise] {
            let d = DerivativePresentation::new(layer).unwrap();
            assert!(d.sys.orientation_violations().is_empty());
        }
    }

    #[test]
    fn derivative_rules_copy_form_rules() {
        let d = DerivativePresentation::new(Layer::Free).unwrap();
        let g = GroupPresentation::new().unwrap();
        let Coords { m, .. } = d.coords;
        let rhs = d.sys.rule_rhs(d.partial(Field::Plus, 1), m).unwrap();
        let grhs = g.sys.rule_rhs(g.gens.dp, g.gens.m).unwrap();
        assert_eq!(rhs.terms().next().unwrap().1, grhs.terms().next().unwrap().1);
    }

    #[test]
    fn proportionality_detects_mismatch() {
        let mut a = Alphabet::new();
        let x = a.even("x");
        let y = a.even("y");
        let t = NCExpr::from_terms([(QRat::int(2), vec![x]), (QRat::int(4), vec![y])]);
        let p = NCExpr::from_terms([(QRat::one(), vec![x]), (QRat::int(2), vec![y])]);
        assert_eq!(proportionality(&t, &p).unwrap(), Some(QRat::int(2)));
        let p2 = NCExpr::from_terms([(QRat::one(), vec![x]), (QRat::int(3), vec![y])]);
        assert_eq!(proportionality(&t, &p2).unwrap(), None);
    }
}
