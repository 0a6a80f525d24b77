//! Property tests for the coefficient field, the rewriting engine, the
//! exterior derivative, the right-invariant operators, truncated series and
//! the expression grammar.

use std::sync::OnceLock;

use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qcalc::cli::parse_expr;
use qcalc::group::GroupPresentation;
use qcalc::ncalg::{GenId, NCExpr};
use qcalc::qplane::{BorelPresentation, SolutionAlgebra, TSeries};
use qcalc::symops::{RightOperator, VectorFields};
use qcalc::{q_number, QRat};

fn group() -> &'static GroupPresentation {
    static G: OnceLock<GroupPresentation> = OnceLock::new();
    G.get_or_init(|| GroupPresentation::new().unwrap())
}

fn solution() -> &'static SolutionAlgebra {
    static S: OnceLock<SolutionAlgebra> = OnceLock::new();
    S.get_or_init(|| SolutionAlgebra::new().unwrap())
}

fn borel() -> &'static BorelPresentation {
    static B: OnceLock<BorelPresentation> = OnceLock::new();
    B.get_or_init(|| BorelPresentation::new().unwrap())
}

fn fields() -> &'static VectorFields {
    static V: OnceLock<VectorFields> = OnceLock::new();
    V.get_or_init(|| VectorFields::new().unwrap())
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// `Σ c q^e` evaluated directly at `q0`.
fn eval_terms(terms: &[(i64, i64)], q0: &BigRational) -> BigRational {
    terms.iter().fold(BigRational::zero(), |acc, &(c, e)| {
        let p = if e >= 0 { q0.pow(e as i32) } else { q0.pow(-e as i32).recip() };
        acc + BigRational::from_integer(c.into()) * p
    })
}

/// `(coefficient, exponent)` pairs of a Laurent polynomial.
type Terms = Vec<(i64, i64)>;

fn laurent_terms() -> impl Strategy<Value = Terms> {
    prop::collection::vec((-4i64..=4, -3i64..=3), 0..4)
}

/// A quotient of two small Laurent polynomials, with the terms kept for
/// the evaluation oracle.
fn qrat() -> impl Strategy<Value = (QRat, Terms, Terms)> {
    (laurent_terms(), laurent_terms()).prop_map(|(n, d)| {
        let den = QRat::laurent(&d);
        let (d, den) = if den.is_zero() { (vec![(1, 0)], QRat::one()) } else { (d, den) };
        let v = QRat::laurent(&n).checked_div(&den).unwrap();
        (v, n, d)
    })
}

fn sample_point() -> impl Strategy<Value = BigRational> {
    prop::sample::select(vec![rat(2, 1), rat(3, 2), rat(-5, 3), rat(7, 4)])
}

fn expr_over(letters: Vec<GenId>, max_len: usize) -> impl Strategy<Value = NCExpr> {
    let word = prop::collection::vec(prop::sample::select(letters), 0..=max_len);
    prop::collection::vec((laurent_terms(), word), 1..4).prop_map(|terms| {
        NCExpr::from_terms(terms.into_iter().map(|(c, w)| (QRat::laurent(&c), w)))
    })
}

fn group_letters() -> Vec<GenId> {
    let g = &group().gens;
    vec![g.m, g.p, g.r, g.ri, g.dm, g.dp, g.dr]
}

fn group_word(max_len: usize) -> impl Strategy<Value = Vec<GenId>> {
    prop::collection::vec(prop::sample::select(group_letters()), 0..=max_len)
}

fn series(order: usize) -> impl Strategy<Value = TSeries> {
    let s = solution();
    let letters = vec![s.alpha, s.alpha_inv, s.beta];
    prop::collection::vec(expr_over(letters, 3), order + 1)
        .prop_map(|c| TSeries::from_coeffs(c).unwrap().reduce(&solution().sys).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn field_axioms((a, ..) in qrat(), (b, ..) in qrat(), (c, ..) in qrat()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn evaluation_matches_direct_arithmetic((v, n, d) in qrat(), q0 in sample_point()) {
        let den = eval_terms(&d, &q0);
        prop_assume!(!den.is_zero());
        prop_assert_eq!(v.eval_at(&q0).unwrap(), eval_terms(&n, &q0) / den);
    }

    #[test]
    fn evaluation_is_a_ring_map((a, ..) in qrat(), (b, ..) in qrat(), q0 in sample_point()) {
        let (Ok(x), Ok(y)) = (a.eval_at(&q0), b.eval_at(&q0)) else { return Ok(()) };
        prop_assert_eq!((&a * &b).eval_at(&q0).unwrap(), &x * &y);
        prop_assert_eq!((&a + &b).eval_at(&q0).unwrap(), &x + &y);
    }

    #[test]
    fn q_numbers_match_their_closed_form(n in -8i64..=8, q0 in sample_point()) {
        let qn = q0.pow(n as i32);
        let want = (&qn - qn.recip()) / (&q0 - q0.recip());
        prop_assert_eq!(q_number(n).eval_at(&q0).unwrap(), want);
        prop_assert_eq!(q_number(n).eval_at(&BigRational::one()).unwrap(), BigRational::from_integer(n.into()));
    }

    #[test]
    fn reduction_is_idempotent(e in expr_over(group_letters(), 5)) {
        let sys = &group().sys;
        let nf = sys.reduce(&e).unwrap();
        prop_assert_eq!(sys.reduce(&nf).unwrap(), nf.clone());
        for (w, _) in nf.terms() {
            prop_assert!(sys.is_normal(w));
        }
    }

    #[test]
    fn reduction_ignores_strategy(e in expr_over(group_letters(), 5), seed in any::<u64>()) {
        let sys = &group().sys;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        prop_assert_eq!(sys.reduce_random(&e, &mut rng).unwrap(), sys.reduce(&e).unwrap());
    }

    #[test]
    fn product_is_associative(
        a in expr_over(group_letters(), 3),
        b in expr_over(group_letters(), 3),
        c in expr_over(group_letters(), 3),
    ) {
        let sys = &group().sys;
        let left = sys.multiply(&sys.multiply(&a, &b).unwrap(), &c).unwrap();
        let right = sys.multiply(&a, &sys.multiply(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn d_is_a_graded_derivation(u in group_word(3), v in group_word(3)) {
        let g = group();
        let (a, b) = (NCExpr::word(u.clone()), NCExpr::word(v));
        let whole = g.diff(&g.mul(&a, &b).unwrap()).unwrap();
        let sign = if g.alphabet().degree(&u) % 2 == 1 { -QRat::one() } else { QRat::one() };
        let split = &g.mul(&g.diff(&a).unwrap(), &b).unwrap() + &g.mul(&a, &g.diff(&b).unwrap()).unwrap().scale(&sign);
        prop_assert_eq!(whole, g.reduce(&split).unwrap());
    }

    #[test]
    fn d_squares_to_zero(e in expr_over(group_letters(), 4)) {
        let g = group();
        prop_assert!(g.diff(&g.diff(&e).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn specialization_commutes_with_reduction(e in expr_over(group_letters(), 4), q0 in sample_point()) {
        let g = group();
        let Ok(special) = g.specialize(&q0) else { return Ok(()) };
        let Ok(first) = g.reduce(&e).and_then(|nf| nf.specialize(&q0)) else { return Ok(()) };
        prop_assert_eq!(special.reduce(&e).unwrap(), first);
    }

    #[test]
    fn render_then_parse_round_trips(e in expr_over(group_letters(), 5)) {
        let g = group();
        let nf = g.reduce(&e).unwrap();
        let text = nf.render(g.alphabet());
        prop_assert_eq!(parse_expr(&text, g.alphabet()).unwrap(), nf);
    }

    #[test]
    fn fractional_coefficients_round_trip((a, ..) in qrat(), (b, ..) in qrat(), u in group_word(3), v in group_word(3)) {
        let g = group();
        let e = NCExpr::from_terms([(a, u), (b, v)]);
        prop_assert_eq!(parse_expr(&e.render(g.alphabet()), g.alphabet()).unwrap(), e);
    }

    #[test]
    fn normalize_output_is_a_fixed_point(e in expr_over(group_letters(), 5)) {
        let g = group();
        let text = g.reduce(&e).unwrap().render(g.alphabet());
        let again = g.reduce(&parse_expr(&text, g.alphabet()).unwrap()).unwrap();
        prop_assert_eq!(again.render(g.alphabet()), text);
    }

    #[test]
    fn round_trip_with_primed_names(e in expr_over(borel().alphabet().ids().collect(), 4)) {
        let b = borel();
        let nf = b.sys.reduce(&e).unwrap();
        prop_assert_eq!(parse_expr(&nf.render(b.alphabet()), b.alphabet()).unwrap(), nf);
    }

    #[test]
    fn right_operators_are_linear(
        a in expr_over(fields().coord_letters().to_vec(), 4),
        b in expr_over(fields().coord_letters().to_vec(), 4),
        (c, ..) in qrat(),
        k in 0usize..3,
    ) {
        let v = fields();
        let op = RightOperator::ALL[k];
        let lhs = v.apply(op, &(&a + &b.scale(&c))).unwrap();
        let rhs = &v.apply(op, &a).unwrap() + &v.apply(op, &b).unwrap().scale(&c);
        prop_assert_eq!(lhs, v.base().reduce(&rhs).unwrap());
    }

    #[test]
    fn right_operators_ignore_strategy(
        e in expr_over(fields().coord_letters().to_vec(), 5),
        k in 0usize..3,
        seed in any::<u64>(),
    ) {
        let v = fields();
        let op = RightOperator::ALL[k];
        let sys = v.operator_system(op);
        let x = e.concat(&NCExpr::gen(v.nabla(op)));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        prop_assert_eq!(sys.reduce_random(&x, &mut rng).unwrap(), sys.reduce(&x).unwrap());
    }

    #[test]
    fn series_ring_axioms(a in series(4), b in series(4), c in series(4)) {
        let sys = &solution().sys;
        let ab_c = a.mul(&b, sys).unwrap().mul(&c, sys).unwrap();
        let a_bc = a.mul(&b.mul(&c, sys).unwrap(), sys).unwrap();
        prop_assert_eq!(ab_c, a_bc);
        let left = a.mul(&b.add(&c), sys).unwrap();
        let right = a.mul(&b, sys).unwrap().add(&a.mul(&c, sys).unwrap()).reduce(sys).unwrap();
        prop_assert_eq!(left, right);
        prop_assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn series_derivative_is_a_derivation(a in series(5), b in series(5)) {
        let sys = &solution().sys;
        let whole = a.mul(&b, sys).unwrap().derivative();
        let split = a.derivative().mul(&b, sys).unwrap().add(&a.mul(&b.derivative(), sys).unwrap());
        prop_assert_eq!(whole, split.reduce(sys).unwrap());
    }

    #[test]
    fn series_inverse_is_two_sided(tail in series(4)) {
        let s = solution();
        let mut coeffs = tail.coeffs().to_vec();
        coeffs[0] = NCExpr::gen(s.alpha);
        let f = TSeries::from_coeffs(coeffs).unwrap();
        let inv = f.inverse(&NCExpr::gen(s.alpha_inv), &s.sys).unwrap();
        let one = TSeries::constant(NCExpr::one(), 4);
        prop_assert_eq!(f.mul(&inv, &s.sys).unwrap(), one.clone());
        prop_assert_eq!(inv.mul(&f, &s.sys).unwrap(), one);
    }
}
