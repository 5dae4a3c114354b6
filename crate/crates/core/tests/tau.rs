use num_complex::Complex64;
use painleve_core::quadrature::gauss_hermite;
use painleve_core::tau::*;
use std::f64::consts::PI;

const S0: f64 = -0.7701449782;

#[test]
fn gamma_zero_gives_one() {
    for &s in &[-3.0, 0.0, 2.5] {
        for &n in &[1usize, 7, 20] {
            assert_eq!(tau(&TauParams::new(s, 0.0, n).unwrap()).unwrap(), 1.0);
        }
    }
}

#[test]
fn far_left_is_one() {
    let t = tau(&TauParams::new(-8.0, 0.5, 30).unwrap()).unwrap();
    assert!((t - 1.0).abs() < 1e-6);
}

#[test]
fn small_realness_case() {
    let r = aat_realness(&TauParams::new(-2.0, 0.5, 4).unwrap()).unwrap();
    assert!(r.entrywise < 1e-12, "{r:?}");
}

#[test]
fn single_pair_entry_by_formula() {
    // order-2 rule at Λ = 1/2: nodes ±1, weights √(π/2)
    let rule = tau_rule(1).unwrap();
    assert!((rule.nodes[0] + 1.0).abs() < 1e-15 && (rule.weights[0] - (PI / 2.0).sqrt()).abs() < 1e-15);
    let (s, g, eps) = (-0.3, 0.4, 0.7);
    let p = TauParams::with_epsilon(s, g, 1, eps).unwrap();
    let a = assemble_a_matrix(&p, &rule).unwrap();
    let w = (PI / 2.0).sqrt();
    let xj = -1.0f64;
    for (l, &xl) in [-1.0f64, 1.0].iter().enumerate() {
        let i = Complex64::i();
        let left = xj.abs().powf(g / 2.0) * w.sqrt() * (-(s / 2.0) * xj).exp();
        let right = (i * xl + eps).powf(-g / 2.0) * (i * (xl / 2.0) * (s + eps)).exp() * w.sqrt();
        let want = left * right / (xj - eps - i * xl);
        assert!((a[(0, l)] - want).norm() < 1e-15 * want.norm(), "{l}");
    }
}

#[test]
fn kernel_symmetric() {
    for &(s, g) in &[(-2.0, 0.5), (1.0, 0.1), (3.0, 0.9)] {
        let p = TauParams::new(s, g, 25).unwrap();
        let k = kernel_matrix(&p, &tau_rule(25).unwrap()).unwrap();
        let scale = k.amax();
        assert!((&k - k.transpose()).amax() <= 1e-10 * scale);
    }
}

#[test]
fn limit_bound_on_the_left() {
    for &g in &[0.1, 0.5, 0.9] {
        for &s in &[-5.0, -6.0, -8.0] {
            let n = 30;
            let t = tau(&TauParams::new(s, g, n).unwrap()).unwrap();
            let b = norm_bound(s, g).unwrap().exact;
            // (1 + o(1)) slack
            assert!((t - 1.0).abs() <= 1.01 * n as f64 * b + 1e-15, "γ={g} s={s}: {} vs {}", (t - 1.0).abs(), b);
        }
    }
}

#[test]
fn positive_below_threshold() {
    for &g in &[0.1, 0.5, 0.9] {
        for &n in &[30usize, 80] {
            let ser = tau_scan(g, n, -8.0, S0, 0.05, EpsilonPolicy::default()).unwrap();
            assert!(ser.tau.iter().all(|&t| t > 0.0), "γ={g} n={n}");
        }
    }
}

/// |τ₈₀ − τ₁₅₀| < |τ₃₀ − τ₈₀| at every grid point of [−4, 4]. The discretization error decays
/// only algebraically and the two differences cross zero at different s, so this fails at a
/// handful of points.
#[test]
fn nystrom_error_decreases_pointwise() {
    let p = EpsilonPolicy::default();
    let a = tau_scan(0.1, 30, -4.0, 4.0, 0.05, p).unwrap();
    let b = tau_scan(0.1, 80, -4.0, 4.0, 0.05, p).unwrap();
    let c = tau_scan(0.1, 150, -4.0, 4.0, 0.05, p).unwrap();
    let bad: Vec<f64> = (0..a.s.len())
        .filter(|&i| !((b.tau[i] - c.tau[i]).abs() < (a.tau[i] - b.tau[i]).abs()))
        .map(|i| a.s[i])
        .collect();
    assert!(bad.is_empty(), "{} violations, e.g. s = {:?}", bad.len(), &bad[..bad.len().min(6)]);
}

#[test]
fn nystrom_error_decreases_in_max_norm() {
    let p = EpsilonPolicy::default();
    let a = tau_scan(0.1, 30, -4.0, 4.0, 0.05, p).unwrap();
    let b = tau_scan(0.1, 80, -4.0, 4.0, 0.05, p).unwrap();
    let c = tau_scan(0.1, 150, -4.0, 4.0, 0.05, p).unwrap();
    let d1 = a.tau.iter().zip(&b.tau).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    let d2 = b.tau.iter().zip(&c.tau).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    assert!(d2 < d1, "{d2} vs {d1}");
}

#[test]
fn epsilon_independence_for_positive_s() {
    let n = 600;
    let rule = tau_rule(n).unwrap();
    for &s in &[0.5, 1.5, 3.0] {
        let a = tau_with_rule(&TauParams::with_epsilon(s, 0.1, n, 0.25).unwrap(), &rule).unwrap();
        let b = tau_with_rule(&TauParams::with_epsilon(s, 0.1, n, 0.5).unwrap(), &rule).unwrap();
        assert!((a - b).abs() < 1e-8, "s={s}: {a} vs {b}");
    }
}

#[test]
fn zero_shift_is_biased_for_positive_s() {
    // the ε = 0 contour runs through the branch point; documented, not a defect of the default
    let n = 80;
    let unfloored = tau(&TauParams::with_policy(1.0, 0.1, n, EpsilonPolicy::Unfloored).unwrap()).unwrap();
    let floored = tau(&TauParams::new(1.0, 0.1, n).unwrap()).unwrap();
    assert!((unfloored - floored).abs() > 1e-2);
}

#[test]
fn flat_scan() {
    let ser = tau_scan(0.0, 10, -5.0, 5.0, 0.5, EpsilonPolicy::default()).unwrap();
    assert_eq!(ser.s.len(), 21);
    assert!(ser.tau.iter().all(|&t| t == 1.0));
    assert!(ser.brackets.is_empty());
}

#[test]
fn extended_range_has_a_zero_and_it_is_stable() {
    let ser = tau_scan(0.1, 150, -5.0, 30.0, 0.05, EpsilonPolicy::default()).unwrap();
    let br = ser.first_bracket_above(S0).expect("a sign change beyond s₀");
    let z150 = refine_tau_zero(0.1, 150, br, EpsilonPolicy::default()).unwrap();
    assert!(z150 > S0);
    let ser80 = tau_scan(0.1, 80, br.0 - 0.5, br.1 + 0.5, 0.05, EpsilonPolicy::default()).unwrap();
    let z80 = refine_tau_zero(0.1, 80, ser80.first_bracket_above(S0).unwrap(), EpsilonPolicy::default()).unwrap();
    assert!((z80 - z150).abs() < 1e-3, "{z80} vs {z150}");
}

#[test]
fn gamma_half_first_zero_across_resolutions() {
    let p = EpsilonPolicy::default();
    let a = tau_scan(0.5, 30, -2.0, 6.0, 0.05, p).unwrap();
    let b = tau_scan(0.5, 80, -2.0, 6.0, 0.05, p).unwrap();
    let ba = a.first_bracket_above(S0).unwrap();
    let bb = b.first_bracket_above(S0).unwrap();
    assert!((ba.0 - bb.0).abs() <= 2.0 * 0.05 + 1e-12);
    let z80 = refine_tau_zero(0.5, 80, bb, p).unwrap();
    let c = tau_scan(0.5, 150, bb.0 - 0.5, bb.1 + 0.5, 0.05, p).unwrap();
    let z150 = refine_tau_zero(0.5, 150, c.first_bracket_above(S0).unwrap(), p).unwrap();
    // drift 80 → 150 is ≈1.3e−3 at this γ
    assert!((z80 - z150).abs() < 2e-3, "{z80} vs {z150}");
}

#[test]
fn bisection_sanity() {
    let r = bisect(|s| Ok(s), -1.0, 2.0, 1e-12).unwrap();
    assert!(r.abs() < 1e-12);
    assert!(bisect(|s| Ok(s * s + 1.0), -1.0, 1.0, 1e-9).is_err());
}

#[test]
fn norm_bound_examples() {
    let b = norm_bound(-2.0, 0.5).unwrap();
    let want = (PI * 0.5).sin() / PI * (2.0 * PI).sqrt() * (-2.0f64).exp() / 2f64.powf(1.5);
    assert!((b.exact - want).abs() < 1e-15 && (b.exact - 0.03817).abs() < 1e-5);
    assert!(norm_bound(-2.0, 1e-9).unwrap().exact < 1e-8);
    assert!((norm_bound(S0, 0.3).unwrap().relaxed - 1.0).abs() < 1e-8);
    assert!(norm_bound(S0 - 0.1, 0.3).unwrap().relaxed < 1.0);
    assert!(norm_bound(S0 + 0.1, 0.3).unwrap().relaxed > 1.0);
    assert!(norm_bound(0.0, 0.5).unwrap_err().is_input());
}

#[test]
fn threshold_value() {
    assert!((pole_free_threshold() - S0).abs() < 1e-9);
}

#[test]
fn operator_norm_respects_bound() {
    assert_eq!(operator_norm_estimate(&TauParams::new(-2.0, 0.0, 10).unwrap()).unwrap(), 0.0);
    let v = operator_norm_estimate(&TauParams::new(-2.0, 0.5, 40).unwrap()).unwrap();
    assert!(v <= norm_bound(-2.0, 0.5).unwrap().exact);
    let w = operator_norm_estimate(&TauParams::new(-6.0, 0.9, 40).unwrap()).unwrap();
    assert!(w < 1e-5);
}

#[test]
fn parameter_validation() {
    assert!(TauParams::new(0.0, 1.0, 10).unwrap_err().is_input());
    assert!(TauParams::new(0.0, -0.1, 10).unwrap_err().is_input());
    assert!(TauParams::new(0.0, 0.5, 0).unwrap_err().is_input());
    assert!(TauParams::with_epsilon(0.0, 0.5, 3, -1.0).unwrap_err().is_input());
    assert!(tau_scan(0.1, 10, 1.0, 0.0, 0.1, EpsilonPolicy::default()).unwrap_err().is_input());
    // even-order rules have no zero node, so ε = 0 is admissible
    assert!(tau(&TauParams::with_epsilon(1.0, 0.5, 5, 0.0).unwrap()).is_ok());
    let _ = gauss_hermite(2, 0.5).unwrap();
}
