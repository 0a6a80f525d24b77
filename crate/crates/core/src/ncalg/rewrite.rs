use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};
use std::sync::{Arc, Mutex};

use num_rational::BigRational;
use rand::Rng;
use sha2::{Digest, Sha256};

use super::alphabet::{Alphabet, GenId};
use super::expr::{NCExpr, Word};
use crate::coeff::QRat;
use crate::error::{Error, Result};

pub const DEFAULT_STEP_BUDGET: u64 = 1_000_000;

/// Environment variable overriding [`DEFAULT_STEP_BUDGET`].
pub const STEP_BUDGET_ENV: &str = "QCALC_STEP_BUDGET";

pub fn default_budget() -> u64 {
    std::env::var(STEP_BUDGET_ENV)
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_STEP_BUDGET)
}

/// A rule `a b -> rhs` on an adjacent pair of generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub lhs: (GenId, GenId),
    pub rhs: NCExpr,
}

type Cache = HashMap<(Word, GenId), NCExpr>;

/// An algebra presentation by length-two rewrite rules. Normal forms are
/// memoized per (normal word, appended letter).
#[derive(Debug)]
pub struct RewriteSystem {
    alphabet: Arc<Alphabet>,
    table: Vec<Option<NCExpr>>,
    rules: Vec<Rule>,
    q0: Option<BigRational>,
    budget: u64,
    cache: Mutex<Cache>,
}

pub struct RewriteSystemBuilder {
    alphabet: Arc<Alphabet>,
    rules: Vec<Rule>,
    budget: u64,
}

impl RewriteSystemBuilder {
    pub fn rule(mut self, a: GenId, b: GenId, rhs: NCExpr) -> Self {
        self.rules.push(Rule { lhs: (a, b), rhs });
        self
    }

    /// Adds `g g -> 0`.
    pub fn nilpotent(self, g: GenId) -> Self {
        self.rule(g, g, NCExpr::zero())
    }

    /// Adds `a b -> c b a`.
    pub fn commute(self, a: GenId, b: GenId, c: QRat) -> Self {
        self.rule(a, b, NCExpr::term(c, vec![b, a]))
    }

    /// Adds `a b -> 1` and `b a -> 1`.
    pub fn inverse_pair(self, a: GenId, b: GenId) -> Self {
        self.rule(a, b, NCExpr::one()).rule(b, a, NCExpr::one())
    }

    pub fn budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub fn push(&mut self, a: GenId, b: GenId, rhs: NCExpr) {
        self.rules.push(Rule { lhs: (a, b), rhs });
    }

    /// Builds the system after checking that every right-hand side is
    /// strictly smaller than its left-hand side.
    pub fn build(self) -> Result<RewriteSystem> {
        let sys = self.build_unchecked()?;
        if let Some((rule, w)) = sys.orientation_violations().into_iter().next() {
            return Err(Error::Orientation {
                lhs: sys.alphabet.render_word(&[rule.lhs.0, rule.lhs.1]),
                rhs: sys.alphabet.render_word(&w),
            });
        }
        Ok(sys)
    }

    /// Builds without the orientation check; termination is then guarded
    /// only by cycle detection and the step budget.
    pub fn build_unchecked(self) -> Result<RewriteSystem> {
        let n = self.alphabet.len();
        let mut table = vec![None; n * n];
        for r in &self.rules {
            let slot = &mut table[r.lhs.0.index() * n + r.lhs.1.index()];
            if slot.is_some() {
                return Err(Error::DuplicateRule(
                    self.alphabet.render_word(&[r.lhs.0, r.lhs.1]),
                ));
            }
            *slot = Some(r.rhs.clone());
        }
        Ok(RewriteSystem {
            alphabet: self.alphabet,
            table,
            rules: self.rules,
            q0: None,
            budget: self.budget,
            cache: Mutex::new(HashMap::new()),
        })
    }
}

/// One step of a reduction trace.
#[derive(Clone, Debug)]
pub struct TraceStep {
    pub rule: String,
    pub result: NCExpr,
}

struct Reducer<'a> {
    sys: &'a RewriteSystem,
    in_progress: HashSet<(Word, GenId)>,
    steps: u64,
}

impl<'a> Reducer<'a> {
    fn new(sys: &'a RewriteSystem) -> Self {
        Reducer { sys, in_progress: HashSet::new(), steps: 0 }
    }

    fn tick(&mut self, word: &[GenId], x: GenId) -> Result<()> {
        self.steps += 1;
        if self.steps > self.sys.budget {
            let mut w = word.to_vec();
            w.push(x);
            return Err(Error::BudgetExceeded {
                budget: self.sys.budget,
                word: self.sys.alphabet.render_word(&w),
            });
        }
        Ok(())
    }

    /// Normal form of `u x` for a normal word `u`.
    fn append(&mut self, u: &[GenId], x: GenId) -> Result<NCExpr> {
        let Some(&last) = u.last() else {
            return Ok(NCExpr::gen(x));
        };
        let Some(rhs) = self.sys.rule_rhs(last, x) else {
            let mut w = u.to_vec();
            w.push(x);
            return Ok(NCExpr::word(w));
        };
        let key = (u.to_vec(), x);
        if let Some(hit) = self.sys.cache.lock().expect("cache poisoned").get(&key) {
            return Ok(hit.clone());
        }
        if !self.in_progress.insert(key.clone()) {
            let mut w = u.to_vec();
            w.push(x);
            return Err(Error::NonTerminating(self.sys.alphabet.render_word(&w)));
        }
        self.tick(u, x)?;
        let prefix = &u[..u.len() - 1];
        let mut out = NCExpr::zero();
        for (v, c) in rhs.terms() {
            let tail = self.concat_word(prefix, v)?;
            out.add_scaled(&tail, c);
        }
        self.in_progress.remove(&key);
        self.sys.cache.lock().expect("cache poisoned").insert(key, out.clone());
        Ok(out)
    }

    /// Normal form of `u v` for a normal word `u` and any word `v`.
    fn concat_word(&mut self, u: &[GenId], v: &[GenId]) -> Result<NCExpr> {
        let mut cur = NCExpr::word(u.to_vec());
        for &y in v {
            let mut next = NCExpr::zero();
            for (w, c) in cur.terms() {
                let part = self.append(w, y)?;
                next.add_scaled(&part, c);
            }
            cur = next;
            if cur.is_zero() {
                break;
            }
        }
        Ok(cur)
    }
}

impl RewriteSystem {
    pub fn builder(alphabet: Arc<Alphabet>) -> RewriteSystemBuilder {
        RewriteSystemBuilder { alphabet, rules: Vec::new(), budget: default_budget() }
    }

    /// The free algebra on `alphabet`.
    pub fn free(alphabet: Arc<Alphabet>) -> RewriteSystem {
        Self::builder(alphabet).build_unchecked().expect("no rules")
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn rule_rhs(&self, a: GenId, b: GenId) -> Option<&NCExpr> {
        self.table[a.index() * self.alphabet.len() + b.index()].as_ref()
    }

    pub fn q0(&self) -> Option<&BigRational> {
        self.q0.as_ref()
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    pub fn with_budget(&self, budget: u64) -> RewriteSystem {
        RewriteSystem {
            alphabet: self.alphabet.clone(),
            table: self.table.clone(),
            rules: self.rules.clone(),
            q0: self.q0.clone(),
            budget,
            cache: Mutex::new(HashMap::new()),
        }
    }

    /// Rules whose right-hand side contains a word not smaller than the
    /// left-hand side, with the offending word.
    pub fn orientation_violations(&self) -> Vec<(Rule, Word)> {
        let mut out = Vec::new();
        for r in &self.rules {
            let lhs = [r.lhs.0, r.lhs.1];
            for (w, _) in r.rhs.terms() {
                if self.alphabet.compare(w, &lhs) != Ordering::Less {
                    out.push((r.clone(), w.clone()));
                }
            }
        }
        out
    }

    pub fn is_normal(&self, word: &[GenId]) -> bool {
        word.windows(2).all(|p| self.rule_rhs(p[0], p[1]).is_none())
    }

    /// The same presentation with every coefficient evaluated at `q = q0`.
    /// Inputs to [`RewriteSystem::reduce`] are specialized on entry.
    pub fn specialize(&self, q0: &BigRational) -> Result<RewriteSystem> {
        let rules = self
            .rules
            .iter()
            .map(|r| Ok(Rule { lhs: r.lhs, rhs: r.rhs.specialize(q0)? }))
            .collect::<Result<Vec<_>>>()?;
        let n = self.alphabet.len();
        let mut table = vec![None; n * n];
        for r in &rules {
            table[r.lhs.0.index() * n + r.lhs.1.index()] = Some(r.rhs.clone());
        }
        Ok(RewriteSystem {
            alphabet: self.alphabet.clone(),
            table,
            rules,
            q0: Some(q0.clone()),
            budget: self.budget,
            cache: Mutex::new(HashMap::new()),
        })
    }

    /// A scalar as seen by this system: specialized when the system is.
    pub fn scalar(&self, c: &QRat) -> Result<QRat> {
        match &self.q0 {
            Some(q0) => c.specialize(q0),
            None => Ok(c.clone()),
        }
    }

    fn prepare(&self, e: &NCExpr) -> Result<NCExpr> {
        match &self.q0 {
            Some(q0) => e.specialize(q0),
            None => Ok(e.clone()),
        }
    }

    /// Unique normal form of `e`.
    pub fn reduce(&self, e: &NCExpr) -> Result<NCExpr> {
        let e = self.prepare(e)?;
        let mut r = Reducer::new(self);
        let mut out = NCExpr::zero();
        for (w, c) in e.terms() {
            let nf = r.concat_word(&[], w)?;
            out.add_scaled(&nf, c);
        }
        Ok(out)
    }

    /// Normal form of the product `a b`.
    pub fn multiply(&self, a: &NCExpr, b: &NCExpr) -> Result<NCExpr> {
        let a = self.reduce(a)?;
        let b = self.prepare(b)?;
        let mut r = Reducer::new(self);
        let mut out = NCExpr::zero();
        for (u, cu) in a.terms() {
            for (v, cv) in b.terms() {
                let nf = r.concat_word(u, v)?;
                out.add_scaled(&nf, &(cu * cv));
            }
        }
        Ok(out)
    }

    pub fn product(&self, factors: &[&NCExpr]) -> Result<NCExpr> {
        let mut acc = NCExpr::one();
        for f in factors {
            acc = self.multiply(&acc, f)?;
        }
        Ok(acc)
    }

    /// Reduction by applying a rule at a uniformly random redex until no
    /// redex remains. No memoization; used to test confluence.
    pub fn reduce_random<R: Rng>(&self, e: &NCExpr, rng: &mut R) -> Result<NCExpr> {
        let e = self.prepare(e)?;
        let mut pending: Vec<(Word, QRat)> = e.into_terms().collect();
        let mut out = NCExpr::zero();
        let mut steps = 0u64;
        while let Some((w, c)) = pending.pop() {
            let redexes: Vec<usize> = (0..w.len().saturating_sub(1))
                .filter(|&i| self.rule_rhs(w[i], w[i + 1]).is_some())
                .collect();
            if redexes.is_empty() {
                out.add_term(w, c);
                continue;
            }
            steps += 1;
            if steps > self.budget {
                return Err(Error::BudgetExceeded {
                    budget: self.budget,
                    word: self.alphabet.render_word(&w),
                });
            }
            let i = redexes[rng.gen_range(0..redexes.len())];
            let rhs = self.rule_rhs(w[i], w[i + 1]).expect("redex");
            for (v, cv) in rhs.terms() {
                let mut nw = w[..i].to_vec();
                nw.extend_from_slice(v);
                nw.extend_from_slice(&w[i + 2..]);
                pending.push((nw, &c * cv));
            }
        }
        Ok(out)
    }

    /// Leftmost-redex rewriting that records every step.
    pub fn reduce_trace(&self, e: &NCExpr) -> Result<Vec<TraceStep>> {
        let mut cur = self.prepare(e)?;
        let mut steps = Vec::new();
        loop {
            let mut found = None;
            for (w, _) in cur.terms() {
                if let Some(i) = (0..w.len().saturating_sub(1))
                    .find(|&i| self.rule_rhs(w[i], w[i + 1]).is_some())
                {
                    found = Some((w.clone(), i));
                    break;
                }
            }
            let Some((w, i)) = found else {
                return Ok(steps);
            };
            if steps.len() as u64 >= self.budget {
                return Err(Error::BudgetExceeded {
                    budget: self.budget,
                    word: self.alphabet.render_word(&w),
                });
            }
            let c = cur.coeff(&w);
            let rhs = self.rule_rhs(w[i], w[i + 1]).expect("redex");
            let mut next = cur.clone();
            next.add_term(w.clone(), -&c);
            for (v, cv) in rhs.terms() {
                let mut nw = w[..i].to_vec();
                nw.extend_from_slice(v);
                nw.extend_from_slice(&w[i + 2..]);
                next.add_term(nw, &c * cv);
            }
            let rule = format!(
                "{} -> {}",
                self.alphabet.render_word(&w[i..i + 2]),
                rhs.render(&self.alphabet)
            );
            steps.push(TraceStep { rule, result: next.clone() });
            cur = next;
        }
    }

    /// Stable hash of the generator table and rules.
    pub fn fingerprint(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.alphabet.describe().as_bytes());
        let mut lines: Vec<String> = self
            .rules
            .iter()
            .map(|r| {
                format!(
                    "{} -> {}",
                    self.alphabet.render_word(&[r.lhs.0, r.lhs.1]),
                    r.rhs.render(&self.alphabet)
                )
            })
            .collect();
        lines.sort();
        for l in lines {
            h.update(b"\n");
            h.update(l.as_bytes());
        }
        if let Some(q0) = &self.q0 {
            h.update(format!("\nq0={q0}").as_bytes());
        }
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn qplane() -> (RewriteSystem, GenId, GenId) {
        let mut a = Alphabet::new();
        let y = a.even("y");
        let x = a.even("x");
        let sys = RewriteSystem::builder(Arc::new(a))
            .commute(x, y, QRat::q_pow(1))
            .build()
            .unwrap();
        (sys, x, y)
    }

    #[test]
    fn quantum_plane_ordering() {
        let (sys, x, y) = qplane();
        let e = NCExpr::word(vec![x, x, y]);
        let nf = sys.reduce(&e).unwrap();
        assert_eq!(nf, NCExpr::term(QRat::q_pow(2), vec![y, x, x]));
        assert_eq!(sys.reduce(&nf).unwrap(), nf);
    }

    #[test]
    fn random_strategy_agrees() {
        let (sys, x, y) = qplane();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let e = NCExpr::word(vec![x, y, x, y, y, x]);
        assert_eq!(sys.reduce(&e).unwrap(), sys.reduce_random(&e, &mut rng).unwrap());
    }

    #[test]
    fn misoriented_pair_cycles() {
        let mut a = Alphabet::new();
        let m = a.even("f-");
        let r = a.even("r");
        let sys = RewriteSystem::builder(Arc::new(a))
            .commute(r, m, QRat::q_pow(1))
            .commute(m, r, QRat::q_pow(-1))
            .build_unchecked()
            .unwrap();
        let err = sys.reduce(&NCExpr::word(vec![r, m])).unwrap_err();
        assert!(matches!(err, Error::NonTerminating(_)), "{err}");
    }

    #[test]
    fn orientation_is_checked() {
        let mut a = Alphabet::new();
        let m = a.even("f-");
        let r = a.even("r");
        let res = RewriteSystem::builder(Arc::new(a)).commute(m, r, QRat::one()).build();
        assert!(matches!(res, Err(Error::Orientation { .. })));
    }

    #[test]
    fn budget_is_enforced() {
        let (sys, x, y) = qplane();
        let sys = sys.with_budget(3);
        let e = NCExpr::word(vec![x, x, x, y, y]);
        assert!(matches!(sys.reduce(&e), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn trace_ends_in_normal_form() {
        let (sys, x, y) = qplane();
        let e = NCExpr::word(vec![x, x, y]);
        let steps = sys.reduce_trace(&e).unwrap();
        assert_eq!(steps.len(), 2);
        assert_eq!(steps.last().unwrap().result, sys.reduce(&e).unwrap());
    }
}
