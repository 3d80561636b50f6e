use proptest::prelude::*;
use yukawa_core::hydrogenic::{self, superpotential};
use yukawa_core::perturbation::{
    self, first_order_superpotential, node_factor_polynomials, node_factor_ratio, second_order_superpotential,
    SuperpotentialMode,
};
use yukawa_core::{PhysicalContext, RadialFunction, StateLabel};

fn ctx(hbar: f64, m: f64, a: f64, alpha: f64) -> PhysicalContext {
    PhysicalContext::new(hbar, m, a, alpha).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs())
}

#[test]
fn quadrature_matches_closed_forms() {
    for m in [0.5, 1.0] {
        for a in [1.0, 4.0, 16.0] {
            for alpha in [0.01, 0.1, 0.2] {
                let c = ctx(1.0, m, a, alpha);
                for l in 0..=3 {
                    for n in 0..=4 {
                        let s = StateLabel::new(n, l);
                        let q1 = perturbation::first_order_energy_by_quadrature(&c, s).unwrap();
                        let q2 = perturbation::second_order_energy_by_quadrature(&c, s).unwrap();
                        let e1 = perturbation::first_order_energy(&c, s);
                        let e2 = perturbation::second_order_energy(&c, s);
                        assert!(rel(q1, e1) < 1e-8, "m={m} A={a} alpha={alpha} {s:?}: {q1} vs {e1}");
                        assert!(rel(q2, e2) < 1e-8, "m={m} A={a} alpha={alpha} {s:?}: {q2} vs {e2}");
                    }
                }
            }
        }
    }
}

#[test]
fn coefficient_identities() {
    for l in 0..=6 {
        for n in 0..=2 {
            let s = StateLabel::new(n, l);
            assert_eq!(
                Some(perturbation::first_order_coefficient(s)),
                perturbation::factored_first_order_coefficient(s),
                "{s:?}"
            );
            assert_eq!(
                Some(perturbation::second_order_coefficients(s)),
                perturbation::factored_second_order_coefficients(s),
                "{s:?}"
            );
        }
    }
}

#[test]
fn coefficients_reproduce_energies() {
    let c = ctx(1.1, 0.7, 2.3, 0.13);
    let (h, m, a, al) = (c.hbar, c.mass, c.coupling, c.screening);
    for l in 0..=4 {
        for n in 0..=4 {
            let s = StateLabel::new(n, l);
            let c1 = perturbation::first_order_coefficient(s) as f64;
            let (c3, c4) = perturbation::second_order_coefficients(s);
            let de1 = -h * h * al * al * c1 / (4.0 * m);
            let de2 = h.powi(4) * al.powi(3) * c3 as f64 / (12.0 * a * m * m)
                - h.powi(6) * al.powi(4) * c4 as f64 / (16.0 * a * a * m.powi(3));
            assert!(rel(de1, perturbation::first_order_energy(&c, s)) < 1e-13);
            assert!(rel(de2, perturbation::second_order_energy(&c, s)) < 1e-12);
        }
    }
}

fn slope(f: impl Fn(f64) -> f64) -> f64 {
    let (x0, x1) = (1e-3f64, 1e-1f64);
    (f(x1).abs().ln() - f(x0).abs().ln()) / (x1.ln() - x0.ln())
}

#[test]
fn scaling_laws() {
    for (n, l) in [(0, 0), (1, 1), (2, 0)] {
        let s = StateLabel::new(n, l);
        let at = |alpha: f64| ctx(1.0, 1.0, 1.0, alpha);
        assert!((slope(|al| perturbation::first_order_energy(&at(al), s)) - 2.0).abs() < 1e-3);
        let r2 = hydrogenic::expectation_r2(&at(0.0), s);
        let cubic = |al: f64| al.powi(3) * r2 / 6.0;
        let de2 = |al: f64| perturbation::second_order_energy(&at(al), s);
        assert!((slope(cubic) - 3.0).abs() < 1e-3);
        assert!((slope(|al| de2(al) - cubic(al)) - 4.0).abs() < 1e-3);
    }
}

#[test]
fn first_order_defining_relation_ground_state() {
    for c in [ctx(1.0, 1.0, 1.0, 0.1), ctx(1.0, 0.5, 16.0, 0.2), ctx(1.3, 0.8, 2.1, 0.05)] {
        let a = c.bohr_radius();
        for l in 0..=3 {
            let s = StateLabel::new(0, l);
            let w = superpotential(&c, s).unwrap();
            let dw = first_order_superpotential(&c, s, SuperpotentialMode::Exact).unwrap();
            let de1 = perturbation::first_order_energy(&c, s);
            for r in [0.5 * a, a, 3.0 * a, 9.0 * a] {
                let dv1 = -0.5 * c.coupling * c.screening.powi(2) * r;
                let terms = [
                    2.0 * w.eval(r).unwrap() * dw.eval(r).unwrap(),
                    -c.riccati_scale() * dw.derivative(r).unwrap(),
                    -dv1,
                    de1,
                ];
                let residual: f64 = terms.iter().sum();
                let scale = terms.iter().fold(0.0f64, |m, t| m.max(t.abs()));
                assert!(residual.abs() <= 1e-8 * scale, "l={l} r={r}: {residual}");
            }
        }
    }
}

fn second_order_residual(c: &PhysicalContext, s: StateLabel, r: f64, analytic: bool) -> (f64, f64) {
    let w = superpotential(c, s).unwrap();
    let dw1 = first_order_superpotential(c, s, SuperpotentialMode::Approximate).unwrap();
    let dw2 = second_order_superpotential(c, s).unwrap();
    let d2 = if analytic {
        dw2.derivative(r).unwrap()
    } else {
        let h = 1e-4 * c.bohr_radius();
        (dw2.eval(r + h).unwrap() - dw2.eval(r - h).unwrap()) / (2.0 * h)
    };
    let dv2 = c.coupling * c.screening.powi(3) / 6.0 * r * r;
    let w1 = dw1.eval(r).unwrap();
    let terms = [
        2.0 * w.eval(r).unwrap() * dw2.eval(r).unwrap(),
        w1 * w1,
        -c.riccati_scale() * d2,
        -dv2,
        perturbation::second_order_energy(c, s),
    ];
    let residual: f64 = terms.iter().sum();
    let scale = terms.iter().fold(0.0f64, |m, t| m.max(t.abs()));
    (residual, scale)
}

#[test]
fn second_order_defining_relation_ground_state() {
    for c in [ctx(1.0, 1.0, 1.0, 0.1), ctx(1.0, 0.5, 16.0, 0.2), ctx(1.3, 0.8, 2.1, 0.05)] {
        let a = c.bohr_radius();
        for l in 0..=3 {
            for r in [0.5 * a, a, 3.0 * a] {
                let (res, scale) = second_order_residual(&c, StateLabel::new(0, l), r, true);
                assert!(res.abs() <= 1e-8 * scale, "l={l} r={r}: {res} (scale {scale})");
            }
        }
    }
}

#[test]
fn second_order_defining_relation_excited_states() {
    let c = ctx(1.0, 1.0, 1.0, 0.1);
    let a = c.bohr_radius();
    for (n, l) in [(1, 0), (1, 1), (2, 0)] {
        let s = StateLabel::new(n, l);
        let nodes = hydrogenic::chi(&c, s).unwrap().nodes();
        for r in [0.5 * a, 1.3 * a, 5.0 * a, 15.0 * a] {
            if nodes.iter().any(|&x| (x - r).abs() < 0.2 * a) {
                continue;
            }
            let (res, scale) = second_order_residual(&c, s, r, false);
            assert!(res.abs() <= 1e-6 * scale, "{s:?} r={r}: {res} (scale {scale})");
        }
    }
}

#[test]
fn node_factor_diagnostic() {
    for l in 0..=6 {
        let (lhs, rhs) = node_factor_polynomials(l);
        assert_eq!(lhs[0], rhs[0]);
        // the constant terms differ, so the quadratics are not identical
        assert_ne!(lhs, rhs);
    }
    let c = ctx(1.0, 1.0, 1.0, 0.0);
    assert!((node_factor_ratio(&c, 0, 10.0).unwrap() - 64.0 / 58.0).abs() < 1e-12);
    for l in 0..=3 {
        assert!((node_factor_ratio(&c, l, 1e8).unwrap() - 1.0).abs() < 1e-6);
    }
}

#[test]
fn continuity_at_zero_screening() {
    for (n, l) in [(0, 0), (1, 0), (0, 2), (3, 1)] {
        let s = StateLabel::new(n, l);
        let base = ctx(1.0, 1.0, 2.0, 0.0);
        let exact = perturbation::total_energy(&base, s);
        assert_eq!(exact.total, hydrogenic::coulomb_energy(&base, s));
        assert_eq!((exact.constant_shift, exact.de1, exact.de2), (0.0, 0.0, 0.0));
        let mut prev = f64::INFINITY;
        for k in 1..8 {
            let alpha = 10f64.powi(-k);
            let e = perturbation::total_energy(&base.with_screening(alpha).unwrap(), s).total;
            let gap = (e - exact.total).abs();
            assert!(gap < prev);
            prev = gap;
        }
        assert!(prev < 1e-6);
    }
}

proptest! {
    #[test]
    fn breakdown_invariants(
        hbar in 0.5f64..2.0,
        m in 0.3f64..3.0,
        a in 0.5f64..30.0,
        alpha in 0.0f64..0.5,
        n in 0u32..6,
        l in 0u32..5,
    ) {
        let c = ctx(hbar, m, a, alpha);
        let s = StateLabel::new(n, l);
        let b = perturbation::total_energy(&c, s);
        prop_assert!(b.de1 <= 0.0);
        prop_assert_eq!(b.total, b.epsilon + b.constant_shift + b.de1 + b.de2);
        prop_assert!(b.constant_shift >= 0.0);
    }

    #[test]
    fn first_order_is_quadratic_in_screening(a in 0.5f64..30.0, alpha in 1e-3f64..0.5, n in 0u32..5, l in 0u32..4) {
        let s = StateLabel::new(n, l);
        let one = perturbation::first_order_energy(&ctx(1.0, 1.0, a, alpha), s);
        let two = perturbation::first_order_energy(&ctx(1.0, 1.0, a, 2.0 * alpha), s);
        prop_assert!(rel(two, 4.0 * one) < 1e-13);
    }

    #[test]
    fn expansion_terms_alternate(a in 0.5f64..30.0, alpha in 1e-3f64..2.0) {
        let terms = perturbation::delta_v_terms(&ctx(1.0, 1.0, a, alpha), 6).unwrap();
        for (k, t) in terms.iter().enumerate() {
            prop_assert_eq!(t.power as usize, k);
            prop_assert_eq!(t.coefficient > 0.0, k % 2 == 0);
        }
    }
}
