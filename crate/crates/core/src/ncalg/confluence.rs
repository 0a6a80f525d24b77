use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::alphabet::GenId;
use super::expr::{NCExpr, Word};
use super::rewrite::RewriteSystem;
use crate::error::Result;

#[derive(Clone, Debug, Serialize)]
pub struct Violation {
    pub witness: String,
    pub left: String,
    pub right: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ConfluenceReport {
    pub overlaps_checked: usize,
    pub words_sampled: usize,
    pub violations: Vec<Violation>,
}

impl ConfluenceReport {
    pub fn is_confluent(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Resolves every overlap `a b c` where both `a b` and `b c` are rule
/// left-hand sides.
pub fn critical_pairs(sys: &RewriteSystem) -> Result<ConfluenceReport> {
    let alphabet = sys.alphabet().clone();
    let mut report = ConfluenceReport::default();
    for a in alphabet.ids() {
        for b in alphabet.ids() {
            let Some(ab) = sys.rule_rhs(a, b) else { continue };
            for c in alphabet.ids() {
                let Some(bc) = sys.rule_rhs(b, c) else { continue };
                report.overlaps_checked += 1;
                let left = sys.reduce(&ab.concat(&NCExpr::gen(c)))?;
                let right = sys.reduce(&NCExpr::gen(a).concat(bc))?;
                if left != right {
                    report.violations.push(Violation {
                        witness: alphabet.render_word(&[a, b, c]),
                        left: left.render(&alphabet),
                        right: right.render(&alphabet),
                    });
                }
            }
        }
    }
    Ok(report)
}

pub fn random_word<R: Rng>(rng: &mut R, letters: &[GenId], max_len: usize) -> Word {
    let len = rng.gen_range(1..=max_len);
    (0..len).map(|_| letters[rng.gen_range(0..letters.len())]).collect()
}

/// Critical-pair resolution plus `samples` random words of length up to
/// `max_len`, each reduced by two independently seeded random strategies
/// and by the memoized strategy.
pub fn check_local_confluence(
    sys: &RewriteSystem,
    max_len: usize,
    samples: usize,
    seed: u64,
) -> Result<ConfluenceReport> {
    let mut report = critical_pairs(sys)?;
    let alphabet = sys.alphabet().clone();
    let letters: Vec<GenId> = alphabet.ids().collect();
    if letters.is_empty() {
        return Ok(report);
    }
    let mut words = ChaCha8Rng::seed_from_u64(seed);
    let mut left = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut right = ChaCha8Rng::seed_from_u64(seed.rotate_left(17) ^ 0x5851_f42d_4c95_7f2d);
    for _ in 0..samples {
        let w = random_word(&mut words, &letters, max_len.max(1));
        let e = NCExpr::word(w.clone());
        let a = sys.reduce_random(&e, &mut left)?;
        let b = sys.reduce_random(&e, &mut right)?;
        let m = sys.reduce(&e)?;
        report.words_sampled += 1;
        if a != b || a != m {
            let other = if a != b { b } else { m };
            report.violations.push(Violation {
                witness: alphabet.render_word(&w),
                left: a.render(&alphabet),
                right: other.render(&alphabet),
            });
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::QRat;
    use crate::error::Error;
    use crate::ncalg::Alphabet;
    use std::sync::Arc;

    #[test]
    fn free_algebra_is_confluent() {
        let mut a = Alphabet::new();
        a.even("x");
        a.even("y");
        let sys = RewriteSystem::free(Arc::new(a));
        let r = check_local_confluence(&sys, 6, 100, 1).unwrap();
        assert!(r.is_confluent());
        assert_eq!(r.overlaps_checked, 0);
    }

    #[test]
    fn unresolvable_overlap_is_reported() {
        // x y -> y x and y z -> 0 but x z stays: x y z has two normal forms.
        let mut a = Alphabet::new();
        let x = a.even("x");
        let y = a.even("y");
        let z = a.even("z");
        let sys = RewriteSystem::builder(Arc::new(a))
            .commute(y, x, QRat::one())
            .rule(z, y, NCExpr::zero())
            .build()
            .unwrap();
        let r = critical_pairs(&sys).unwrap();
        assert_eq!(r.overlaps_checked, 1);
        assert_eq!(r.violations.len(), 1);
        assert_eq!(r.violations[0].witness, "z y x");
        let _ = (x, z);
    }

    #[test]
    fn two_cycle_is_an_error() {
        let mut a = Alphabet::new();
        let m = a.even("f-");
        let r = a.even("r");
        let sys = RewriteSystem::builder(Arc::new(a))
            .commute(r, m, QRat::q_pow(1))
            .commute(m, r, QRat::q_pow(-1))
            .build_unchecked()
            .unwrap();
        let res = check_local_confluence(&sys, 6, 10, 3);
        assert!(matches!(res, Err(Error::NonTerminating(_))));
    }
}
