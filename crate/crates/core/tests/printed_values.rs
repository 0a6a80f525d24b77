//! Printed closed forms, entered as text through the expression grammar and
//! compared with what the engine computes, plus hand-derived oracles for
//! values the engine solves for.

use qcalc::cli::parse_expr;
use qcalc::group::{cartan_form, GroupPresentation};
use qcalc::ncalg::NCExpr;
use qcalc::qplane::{unequal_time, BorelPresentation, SolutionAlgebra};
use qcalc::symops::{RightOperator, VectorFields};
use qcalc::wznw::compute;
use qcalc::{q_number, QRat};

fn q(k: i64) -> QRat {
    QRat::q_pow(k)
}

#[test]
fn cartan_forms_from_text() {
    let g = GroupPresentation::new().unwrap();
    let a = g.alphabet();
    let w = cartan_form(&g).unwrap();
    let printed = [
        "r^-1 dr + f+ df-",
        "q r^-2 df-",
        "1/q r^2 df+ - q^5 f+^2 r^2 df-",
        "-q^2 (r^-1 dr + f+ df-)",
    ];
    for (k, text) in printed.iter().enumerate() {
        let want = g.reduce(&parse_expr(text, a).unwrap()).unwrap();
        assert_eq!(w.entry(k + 1), &want, "entry {}", k + 1);
    }
}

#[test]
fn wz_coefficient_is_q_times_two_times_three() {
    let g = GroupPresentation::new().unwrap();
    let data = compute(&g).unwrap();
    assert_eq!(data.c, q(1) * q_number(2) * q_number(3));
}

#[test]
fn quantum_plane_lagrangian_from_text() {
    let b = BorelPresentation::new().unwrap();
    let want = parse_expr("(q^6 + q^4)/2 x^-2 x'^2", b.alphabet()).unwrap();
    assert_eq!(b.lagrangian().unwrap(), b.sys.reduce(&want).unwrap());
}

/// `α exp(βt) α exp(βt') = α² exp(β(q⁻²t + t'))` because `exp(βt) α =
/// α exp(q⁻²βt)`. Moving `exp(λβ)` past `α²` rescales it by `q⁻⁴`, so
/// `q⁻⁴λ = (q⁻² − 1)(t − t')`.
#[test]
fn unequal_time_exponent_matches_hand_derivation() {
    let s = SolutionAlgebra::new().unwrap();
    let u = unequal_time(&s, 6).unwrap();
    let lambda = q(4) * (q(-2) - QRat::one());
    assert_eq!(u.lambda_t, lambda);
    assert_eq!(u.lambda_tp, -lambda);
}

/// The Jackson derivative of `r^k` with balanced q-integers:
/// `r^k ∇̂₁ = q^{1−k} [k] r^k`.
#[test]
fn hat_operator_on_powers_of_r() {
    let v = VectorFields::new().unwrap();
    let c = v.coords;
    for k in -4i64..=6 {
        let letter = if k >= 0 { c.r } else { c.ri };
        let rk = NCExpr::word(vec![letter; k.unsigned_abs() as usize]);
        let got = v.apply(RightOperator::Hat1, &rk).unwrap();
        assert_eq!(got, rk.scale(&(q(1 - k) * q_number(k))), "k = {k}");
    }
}
