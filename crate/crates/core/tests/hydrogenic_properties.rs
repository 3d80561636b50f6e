use yukawa_core::hydrogenic::{self, chi, superpotential};
use yukawa_core::numerov::count_nodes;
use yukawa_core::quadrature::{integrate_halfline, IntegrationSpec};
use yukawa_core::{PhysicalContext, RadialFunction, StateLabel};

fn contexts() -> Vec<PhysicalContext> {
    vec![
        PhysicalContext::new(1.0, 1.0, 1.0, 0.0).unwrap(),
        PhysicalContext::new(1.0, 0.5, 16.0, 0.0).unwrap(),
        PhysicalContext::new(1.3, 0.8, 2.1, 0.0).unwrap(),
    ]
}

#[test]
fn orthonormality() {
    for ctx in contexts() {
        for l in 0..=3 {
            for n in 0..=4 {
                let a = chi(&ctx, StateLabel::new(n, l)).unwrap();
                for m in n..=4 {
                    let b = chi(&ctx, StateLabel::new(m, l)).unwrap();
                    let scale = a.density_decay_scale().max(b.density_decay_scale());
                    let spec = IntegrationSpec::new(scale, 1e-11, 2000).unwrap();
                    let overlap = integrate_halfline(|r| a.value(r) * b.value(r), &spec).unwrap();
                    let expected = if n == m { 1.0 } else { 0.0 };
                    assert!(
                        (overlap - expected).abs() < 1e-8,
                        "l={l} n={n} m={m}: {overlap}"
                    );
                }
            }
        }
    }
}

#[test]
fn eigen_residual() {
    for ctx in contexts() {
        let a = ctx.bohr_radius();
        let h = a / 1e4;
        for l in 0..=3u32 {
            for n in 0..=3 {
                let s = StateLabel::new(n, l);
                let f = chi(&ctx, s).unwrap();
                let eps = hydrogenic::coulomb_energy(&ctx, s);
                let k = ctx.hbar * ctx.hbar / (2.0 * ctx.mass);
                for r in [0.5 * a, a, 3.0 * a, 8.0 * a] {
                    let second = (f.value(r + h) - 2.0 * f.value(r) + f.value(r - h)) / (h * h);
                    let pot = -ctx.coupling / r + k * (l * (l + 1)) as f64 / (r * r) - eps;
                    let kinetic = k * second;
                    let potential = pot * f.value(r);
                    // near a classical turning point both sides are small; measure
                    // against the natural kinetic scale ħ²χ/(2ma²) instead
                    let scale = kinetic.abs().max(potential.abs()).max((k * f.value(r) / (a * a)).abs());
                    assert!(
                        (kinetic - potential).abs() <= 1e-6 * scale,
                        "n={n} l={l} r={r}: {kinetic} vs {potential}"
                    );
                }
            }
        }
    }
}

#[test]
fn riccati_identity() {
    for ctx in contexts() {
        let a = ctx.bohr_radius();
        let s_scale = ctx.riccati_scale();
        for l in 0..=3u32 {
            for n in 0..=3 {
                let s = StateLabel::new(n, l);
                let w = superpotential(&ctx, s).unwrap();
                let eps = hydrogenic::coulomb_energy(&ctx, s);
                let barrier = ctx.hbar * ctx.hbar * (l * (l + 1)) as f64 / (2.0 * ctx.mass);
                for r in [0.37 * a, 1.3 * a, 4.1 * a, 11.7 * a] {
                    if w.nodes().iter().any(|&x| (x - r).abs() < 0.05 * a) {
                        continue;
                    }
                    let wv = w.eval(r).unwrap();
                    let lhs = wv * wv - s_scale * w.derivative(r).unwrap();
                    let rhs = -ctx.coupling / r + barrier / (r * r) - eps;
                    let scale = lhs.abs().max(rhs.abs()).max((wv * wv).abs());
                    assert!(
                        (lhs - rhs).abs() <= 1e-8 * scale,
                        "n={n} l={l} r={r}: {lhs} vs {rhs}"
                    );
                }
            }
        }
    }
}

#[test]
fn node_counts() {
    for ctx in contexts() {
        let a = ctx.bohr_radius();
        for l in 0..=3 {
            for n in 0..=5 {
                let s = StateLabel::new(n, l);
                let f = chi(&ctx, s).unwrap();
                assert_eq!(f.nodes().len(), n as usize);
                let upper = 60.0 * s.principal() as f64 * a;
                let samples: Vec<f64> = (1..20_000).map(|i| f.value(upper * i as f64 / 20_000.0)).collect();
                assert_eq!(count_nodes(&samples), n as usize, "n={n} l={l}");
            }
        }
    }
}

#[test]
fn moments_match_quadrature() {
    for ctx in contexts() {
        for l in 0..=3 {
            for n in 0..=4 {
                let s = StateLabel::new(n, l);
                let f = chi(&ctx, s).unwrap();
                let spec = IntegrationSpec::new(f.density_decay_scale(), 1e-12, 2000).unwrap();
                let r1 = integrate_halfline(|r| r * f.value(r).powi(2), &spec).unwrap();
                let r2 = integrate_halfline(|r| r * r * f.value(r).powi(2), &spec).unwrap();
                let e1 = hydrogenic::expectation_r(&ctx, s);
                let e2 = hydrogenic::expectation_r2(&ctx, s);
                assert!(((r1 - e1) / e1).abs() < 1e-9, "n={n} l={l}: {r1} vs {e1}");
                assert!(((r2 - e2) / e2).abs() < 1e-9, "n={n} l={l}: {r2} vs {e2}");
            }
        }
    }
}

#[test]
fn moments_do_not_depend_on_screening() {
    let ctx = PhysicalContext::new(1.0, 1.0, 1.0, 0.0).unwrap();
    let screened = ctx.with_screening(0.3).unwrap();
    let s = StateLabel::new(2, 1);
    assert_eq!(hydrogenic::expectation_r(&ctx, s), hydrogenic::expectation_r(&screened, s));
    assert_eq!(hydrogenic::expectation_r2(&ctx, s), hydrogenic::expectation_r2(&screened, s));
}
