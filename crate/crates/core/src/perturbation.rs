//! Superpotential perturbation theory for the screened Coulomb potential.
//!
//! The screening factor is expanded as
//!
//! ```text
//! -(A/r) e^{-αr} = -A/r + Aα - (Aα²/2) r + (Aα³/6) r² - …
//! ```
//!
//! The constant `Aα` shifts every level, the linear term is the first-order
//! perturbation and the quadratic term enters at second order. Writing
//! `ψ = χ φ` and expanding the logarithmic derivative of `φ` in the same
//! parameter gives, order by order,
//!
//! ```text
//! Δε₁ = ∫ χ² (-(Aα²/2) r) dr
//! Δε₂ = ∫ χ² [(Aα³/6) r² - ΔW₁²] dr
//! ΔWₖ(r) = (√2m/ħ) χ(r)⁻² ∫_0^r χ² (…) dz
//! ```
//!
//! For excited states the exact first-order correction has double poles at
//! the nodes of `χ`. The second order is built on the node-free linear
//! approximation `ΔW₁ ≈ -n'ħα² r / (2√2m)`, which reduces both energy
//! corrections to the Coulomb moments `⟨r⟩` and `⟨r²⟩`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hydrogenic::{self, CoulombEigenfunction, PhysicalContext, StateLabel};
use crate::quadrature::{integrate_halfline, integrate_partial, IntegrationSpec};
use crate::RadialFunction;

/// Number of screening expansion terms kept in the energy.
pub const DEFAULT_EXPANSION_ORDER: u32 = 3;

/// One term `coefficient · r^power` of the expansion of the screening correction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpansionTerm {
    pub order: u32,
    pub coefficient: f64,
    pub power: u32,
}

/// First `max_order` terms of `A/r - (A/r) e^{-αr}`.
pub fn delta_v_terms(ctx: &PhysicalContext, max_order: u32) -> Result<Vec<ExpansionTerm>> {
    if max_order == 0 {
        return Err(Error::Domain("expansion order must be at least 1".into()));
    }
    let mut terms = Vec::with_capacity(max_order as usize);
    // (-1)^{k+1} A α^k / k!
    let mut coefficient = ctx.coupling;
    for k in 1..=max_order {
        coefficient *= ctx.screening / k as f64;
        if k > 1 {
            coefficient = -coefficient;
        }
        terms.push(ExpansionTerm {
            order: k,
            coefficient,
            power: k - 1,
        });
    }
    Ok(terms)
}

/// Perturbative energy of one level, with every contribution kept apart.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyBreakdown {
    pub epsilon: f64,
    pub constant_shift: f64,
    pub de1: f64,
    pub de2: f64,
    pub total: f64,
}

impl EnergyBreakdown {
    pub fn new(epsilon: f64, constant_shift: f64, de1: f64, de2: f64) -> Self {
        Self {
            epsilon,
            constant_shift,
            de1,
            de2,
            total: epsilon + constant_shift + de1 + de2,
        }
    }
}

/// `Δε₁ = -(Aα²/2)⟨r⟩`.
pub fn first_order_energy(ctx: &PhysicalContext, s: StateLabel) -> f64 {
    let alpha = ctx.screening;
    -0.5 * ctx.coupling * alpha * alpha * hydrogenic::expectation_r(ctx, s)
}

/// Slope of the linear first-order superpotential, `-n'ħα²/(2√2m)`.
fn linear_slope(ctx: &PhysicalContext, s: StateLabel) -> f64 {
    let alpha = ctx.screening;
    -(s.principal() as f64) * ctx.hbar * alpha * alpha / (2.0 * (2.0 * ctx.mass).sqrt())
}

/// `Δε₂ = [Aα³/6 - n'²ħ²α⁴/(8m)]⟨r²⟩`, using the linear first-order superpotential.
pub fn second_order_energy(ctx: &PhysicalContext, s: StateLabel) -> f64 {
    let alpha = ctx.screening;
    let np = s.principal() as f64;
    let quadratic = ctx.coupling * alpha.powi(3) / 6.0;
    let squared = np * np * ctx.hbar * ctx.hbar * alpha.powi(4) / (8.0 * ctx.mass);
    (quadratic - squared) * hydrogenic::expectation_r2(ctx, s)
}

/// `E = ε + Aα + Δε₁ + Δε₂`.
pub fn total_energy(ctx: &PhysicalContext, s: StateLabel) -> EnergyBreakdown {
    EnergyBreakdown::new(
        hydrogenic::coulomb_energy(ctx, s),
        ctx.coupling * ctx.screening,
        first_order_energy(ctx, s),
        second_order_energy(ctx, s),
    )
}

fn basis_spec(chi: &CoulombEigenfunction) -> Result<IntegrationSpec> {
    IntegrationSpec::new(chi.density_decay_scale(), 1e-12, 400)
}

/// `Δε₁` by direct half-line quadrature of its defining integral.
pub fn first_order_energy_by_quadrature(ctx: &PhysicalContext, s: StateLabel) -> Result<f64> {
    let chi = hydrogenic::chi(ctx, s)?;
    let c = -0.5 * ctx.coupling * ctx.screening * ctx.screening;
    integrate_halfline(|r| chi.value(r).powi(2) * c * r, &basis_spec(&chi)?)
}

/// `Δε₂` by direct half-line quadrature of its defining integral.
pub fn second_order_energy_by_quadrature(ctx: &PhysicalContext, s: StateLabel) -> Result<f64> {
    let chi = hydrogenic::chi(ctx, s)?;
    let quadratic = ctx.coupling * ctx.screening.powi(3) / 6.0;
    let slope = linear_slope(ctx, s);
    integrate_halfline(
        |r| {
            let dw = slope * r;
            chi.value(r).powi(2) * (quadratic * r * r - dw * dw)
        },
        &basis_spec(&chi)?,
    )
}

/// Integer coefficient `C` in `Δε₁ = -ħ²α² C / (4m)`, from the moment `⟨r⟩`.
pub fn first_order_coefficient(s: StateLabel) -> i64 {
    hydrogenic::moment_r_units(s)
}

/// Integer coefficients `(C₃, C₄)` in
/// `Δε₂ = ħ⁴α³ C₃/(12Am²) - ħ⁶α⁴ C₄/(16A²m³)`, from the moment `⟨r²⟩`.
pub fn second_order_coefficients(s: StateLabel) -> (i64, i64) {
    let k = hydrogenic::moment_r2_units(s);
    let np = s.principal() as i64;
    (k, np * np * k)
}

/// Factored first-order coefficients of the closed forms for `n ≤ 2`.
pub fn factored_first_order_coefficient(s: StateLabel) -> Option<i64> {
    let l = s.ell as i64;
    match s.n {
        0 => Some((l + 1) * (2 * l + 3)),
        1 => Some((l + 4) * (2 * l + 3)),
        2 => Some(2 * l * l + 17 * l + 27),
        _ => None,
    }
}

/// Factored second-order coefficients `(C₃, C₄)` of the closed forms for `n ≤ 2`.
pub fn factored_second_order_coefficients(s: StateLabel) -> Option<(i64, i64)> {
    let l = s.ell as i64;
    match s.n {
        0 => Some((
            (l + 1).pow(2) * (l + 2) * (2 * l + 3),
            (l + 1).pow(4) * (l + 2) * (2 * l + 3),
        )),
        1 => Some((
            (l + 2).pow(2) * (l + 7) * (2 * l + 3),
            (l + 2).pow(4) * (l + 7) * (2 * l + 3),
        )),
        2 => Some((
            (l + 2) * (l + 3).pow(2) * (2 * l + 23),
            (l + 2) * (l + 3).pow(4) * (2 * l + 23),
        )),
        _ => None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SuperpotentialMode {
    /// Closed form of the defining integral (ground and first excited state only).
    Exact,
    /// Node-free linear form `-n'ħα² r/(2√2m)`, valid for every state.
    Approximate,
}

#[derive(Debug, Clone)]
enum FirstOrderKind {
    Linear {
        slope: f64,
    },
    /// `prefactor · r (x² - b x + c) / (x - x₀)²` with `x = Amr/ħ²`.
    FirstExcited {
        prefactor: f64,
        x_per_r: f64,
        b: f64,
        c: f64,
        x0: f64,
        node: f64,
        guard: f64,
    },
}

/// First-order superpotential correction `ΔW₁`.
#[derive(Debug, Clone)]
pub struct FirstOrderSuperpotential {
    kind: FirstOrderKind,
}

pub fn first_order_superpotential(
    ctx: &PhysicalContext,
    s: StateLabel,
    mode: SuperpotentialMode,
) -> Result<FirstOrderSuperpotential> {
    let kind = match (mode, s.n) {
        (SuperpotentialMode::Approximate, _) | (SuperpotentialMode::Exact, 0) => {
            FirstOrderKind::Linear {
                slope: linear_slope(ctx, s),
            }
        }
        (SuperpotentialMode::Exact, 1) => {
            let l = s.ell as f64;
            let h2 = ctx.hbar * ctx.hbar;
            let alpha = ctx.screening;
            let x0 = (l + 1.0) * (l + 2.0);
            let node = x0 * ctx.bohr_radius();
            FirstOrderKind::FirstExcited {
                prefactor: -(l + 2.0) * ctx.hbar * alpha * alpha / (2.0 * (2.0 * ctx.mass).sqrt()),
                x_per_r: ctx.mass * ctx.coupling / h2,
                b: (l + 1.0) * (2.0 * l + 5.0),
                c: (l + 1.0).powi(2) * (l + 2.0) * (l + 4.0),
                x0,
                node,
                guard: 1e-12 * ctx.bohr_radius(),
            }
        }
        (SuperpotentialMode::Exact, n) => {
            return Err(Error::UnsupportedState {
                n,
                what: "exact first-order superpotential",
            })
        }
    };
    Ok(FirstOrderSuperpotential { kind })
}

impl FirstOrderSuperpotential {
    /// Slope when the correction is linear in `r`.
    pub fn slope(&self) -> Option<f64> {
        match self.kind {
            FirstOrderKind::Linear { slope } => Some(slope),
            FirstOrderKind::FirstExcited { .. } => None,
        }
    }

    pub fn derivative(&self, r: f64) -> Result<f64> {
        match self.kind {
            FirstOrderKind::Linear { slope } => Ok(slope),
            FirstOrderKind::FirstExcited {
                prefactor,
                x_per_r,
                b,
                c,
                x0,
                node,
                guard,
            } => {
                if (r - node).abs() <= guard {
                    return Err(Error::Pole { r, node });
                }
                // d/dr [r q(x)/(x-x0)²] with x = κ r
                let x = x_per_r * r;
                let q = x * x - b * x + c;
                let dq = 2.0 * x - b;
                let d = x - x0;
                let f = q / (d * d);
                let df = (dq * d - 2.0 * q) / (d * d * d);
                Ok(prefactor * (f + x * df))
            }
        }
    }
}

impl RadialFunction for FirstOrderSuperpotential {
    fn eval(&self, r: f64) -> Result<f64> {
        match self.kind {
            FirstOrderKind::Linear { slope } => Ok(slope * r),
            FirstOrderKind::FirstExcited {
                prefactor,
                x_per_r,
                b,
                c,
                x0,
                node,
                guard,
            } => {
                if (r - node).abs() <= guard {
                    return Err(Error::Pole { r, node });
                }
                let x = x_per_r * r;
                let d = x - x0;
                Ok(prefactor * r * (x * x - b * x + c) / (d * d))
            }
        }
    }
}

/// Integer coefficients, in powers of `x = Amr/ħ²`, of the squared node factor
/// `(x - (ℓ+1)(ℓ+2))²` and of the numerator quadratic of the exact first
/// excited-state correction. Both are `[x², x¹, x⁰]`.
pub fn node_factor_polynomials(ell: u32) -> ([i64; 3], [i64; 3]) {
    let l = ell as i64;
    let root = (l + 1) * (l + 2);
    (
        [1, -2 * root, root * root],
        [1, -(l + 1) * (2 * l + 5), (l + 1).pow(2) * (l + 2) * (l + 4)],
    )
}

/// Ratio of the squared node factor to the numerator quadratic at `r`.
///
/// Tends to 1 at large `r`; the linear approximation of the excited-state
/// correction amounts to replacing this ratio by 1.
pub fn node_factor_ratio(ctx: &PhysicalContext, ell: u32, r: f64) -> Result<f64> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::Domain(format!("ratio needs finite r > 0, got {r}")));
    }
    let (lhs, rhs) = node_factor_polynomials(ell);
    let x = ctx.mass * ctx.coupling * r / (ctx.hbar * ctx.hbar);
    let eval = |p: [i64; 3]| (p[0] as f64 * x + p[1] as f64) * x + p[2] as f64;
    let denominator = eval(rhs);
    if denominator == 0.0 {
        return Err(Error::Domain(format!("numerator quadratic vanishes at r = {r}")));
    }
    Ok(eval(lhs) / denominator)
}

#[derive(Debug, Clone)]
enum SecondOrderKind {
    /// `K r (mA r + (ℓ+1)(ℓ+2)ħ²)`
    GroundClosedForm { k: f64, linear: f64, constant: f64 },
    Integral(Box<IntegralCorrection>),
}

#[derive(Debug, Clone)]
struct IntegralCorrection {
    chi: CoulombEigenfunction,
    de2: f64,
    slope: f64,
    quadratic: f64,
    inv_scale: f64,
    split: f64,
    nodes: Vec<f64>,
    guard: f64,
    spec: IntegrationSpec,
}

impl IntegralCorrection {
    fn source(&self, z: f64) -> f64 {
        let dw = self.slope * z;
        self.de2 + dw * dw - self.quadratic * z * z
    }

    fn value(&self, r: f64) -> Result<f64> {
        let log_ref = self.chi.log_abs_value(r);
        // χ²(z)/χ²(r) · source(z); the ratio form avoids underflow far out
        let weight = |z: f64| {
            if z <= 0.0 {
                return 0.0;
            }
            (2.0 * (self.chi.log_abs_value(z) - log_ref)).exp() * self.source(z)
        };
        let j = if r <= self.split {
            integrate_partial(weight, r, &self.spec)?
        } else {
            // the full-range integral vanishes by the choice of Δε₂
            -integrate_halfline(|t| weight(r + t), &self.spec)?
        };
        Ok(self.inv_scale * j)
    }
}

/// Second-order superpotential correction `ΔW₂`.
#[derive(Debug, Clone)]
pub struct SecondOrderSuperpotential {
    kind: SecondOrderKind,
}

/// `ΔW₂` for any state: closed form for the ground state, quadrature of the
/// defining integral otherwise.
pub fn second_order_superpotential(
    ctx: &PhysicalContext,
    s: StateLabel,
) -> Result<SecondOrderSuperpotential> {
    if s.n == 0 {
        let l = s.ell as f64;
        let alpha = ctx.screening;
        let h2 = ctx.hbar * ctx.hbar;
        let ma = ctx.mass * ctx.coupling;
        let k = (l + 1.0) * ctx.hbar * alpha.powi(3) * (4.0 * ma - 3.0 * alpha * h2 * (l + 1.0).powi(2))
            / (24.0 * (2.0 * ctx.mass).sqrt() * ma * ma);
        return Ok(SecondOrderSuperpotential {
            kind: SecondOrderKind::GroundClosedForm {
                k,
                linear: ma,
                constant: (l + 1.0) * (l + 2.0) * h2,
            },
        });
    }
    second_order_superpotential_by_quadrature(ctx, s)
}

/// `ΔW₂` evaluated through quadrature of its defining integral for every state.
pub fn second_order_superpotential_by_quadrature(
    ctx: &PhysicalContext,
    s: StateLabel,
) -> Result<SecondOrderSuperpotential> {
    let chi = hydrogenic::chi(ctx, s)?;
    let nodes = chi.nodes();
    let spec = IntegrationSpec::new(chi.density_decay_scale(), 1e-12, 400)?;
    Ok(SecondOrderSuperpotential {
        kind: SecondOrderKind::Integral(Box::new(IntegralCorrection {
            de2: second_order_energy(ctx, s),
            slope: linear_slope(ctx, s),
            quadratic: ctx.coupling * ctx.screening.powi(3) / 6.0,
            inv_scale: 1.0 / ctx.riccati_scale(),
            split: hydrogenic::expectation_r(ctx, s),
            guard: 1e-12 * chi.bohr_radius(),
            chi,
            nodes,
            spec,
        })),
    })
}

impl SecondOrderSuperpotential {
    /// Analytic derivative; available for the ground-state closed form.
    pub fn derivative(&self, r: f64) -> Option<f64> {
        match &self.kind {
            SecondOrderKind::GroundClosedForm { k, linear, constant } => {
                Some(k * (2.0 * linear * r + constant))
            }
            SecondOrderKind::Integral(_) => None,
        }
    }

    /// `∫_0^r ΔW₂ dz` for the ground-state closed form.
    fn antiderivative(&self, r: f64) -> Option<f64> {
        match &self.kind {
            SecondOrderKind::GroundClosedForm { k, linear, constant } => {
                Some(k * (linear * r.powi(3) / 3.0 + constant * r * r / 2.0))
            }
            SecondOrderKind::Integral(_) => None,
        }
    }

    pub fn nodes(&self) -> &[f64] {
        match &self.kind {
            SecondOrderKind::GroundClosedForm { .. } => &[],
            SecondOrderKind::Integral(c) => &c.nodes,
        }
    }
}

impl RadialFunction for SecondOrderSuperpotential {
    fn eval(&self, r: f64) -> Result<f64> {
        match &self.kind {
            SecondOrderKind::GroundClosedForm { k, linear, constant } => {
                Ok(k * r * (linear * r + constant))
            }
            SecondOrderKind::Integral(c) => {
                if r == 0.0 {
                    return Ok(0.0);
                }
                if !(r > 0.0 && r.is_finite()) {
                    return Err(Error::Domain(format!("superpotential needs r > 0, got {r}")));
                }
                if let Some(&node) = c.nodes.iter().find(|&&x| (r - x).abs() <= c.guard) {
                    return Err(Error::Pole { r, node });
                }
                c.value(r)
            }
        }
    }
}

/// `ψ = χ φ` with `φ = exp(-(√2m/ħ) ∫_0^r (ΔW₁ + ΔW₂) dz)`, renormalized.
#[derive(Debug, Clone)]
pub struct PerturbedWavefunction {
    chi: CoulombEigenfunction,
    /// Coefficients of `r²` and `r³` in `ln φ`.
    exponent: [f64; 2],
    log_norm: f64,
}

pub fn perturbed_wavefunction(ctx: &PhysicalContext, s: StateLabel) -> Result<PerturbedWavefunction> {
    let chi = hydrogenic::chi(ctx, s)?;
    if ctx.screening == 0.0 {
        return Ok(PerturbedWavefunction {
            chi,
            exponent: [0.0, 0.0],
            log_norm: 0.0,
        });
    }
    if s.n > 0 {
        // the second-order correction of an excited state has a non-integrable
        // double pole at every node of χ, so φ cannot be continued through it
        let node = chi.nodes()[0];
        return Err(Error::Pole { r: node, node });
    }
    let w1 = first_order_superpotential(ctx, s, SuperpotentialMode::Exact)?;
    let w2 = second_order_superpotential(ctx, s)?;
    let slope = w1.slope().expect("ground-state correction is linear");
    // ∫ΔW₁ = slope r²/2; ∫ΔW₂ is a cubic without constant or linear term
    let probe = 1.0;
    let w2_r2 = w2.antiderivative(probe).expect("closed form");
    let w2_r3 = w2.antiderivative(2.0 * probe).expect("closed form");
    // solve c2 + c3 = F(1), 4 c2 + 8 c3 = F(2)
    let c3 = (w2_r3 - 4.0 * w2_r2) / 4.0;
    let c2 = w2_r2 - c3;
    let inv = 1.0 / ctx.riccati_scale();
    let exponent = [-inv * (0.5 * slope + c2), -inv * c3];
    if exponent[1] >= 0.0 {
        return Err(Error::NotNormalizable(format!(
            "ln φ grows like {:e} r³ at large r",
            exponent[1]
        )));
    }
    let spec = basis_spec(&chi)?;
    let norm = integrate_halfline(
        |r| {
            let v = chi.value(r);
            v * v * (2.0 * (exponent[0] * r * r + exponent[1] * r.powi(3))).exp()
        },
        &spec,
    )?;
    Ok(PerturbedWavefunction {
        chi,
        exponent,
        log_norm: 0.5 * norm.ln(),
    })
}

impl PerturbedWavefunction {
    /// Un-normalized moderating factor `φ(r)`.
    pub fn moderating(&self, r: f64) -> f64 {
        (self.exponent[0] * r * r + self.exponent[1] * r.powi(3)).exp()
    }

    /// Coefficients of `r²` and `r³` in `ln φ`.
    pub fn exponent_coefficients(&self) -> [f64; 2] {
        self.exponent
    }

    pub fn value(&self, r: f64) -> f64 {
        self.chi.value(r) * (self.exponent[0] * r * r + self.exponent[1] * r.powi(3) - self.log_norm).exp()
    }

    pub fn unperturbed(&self) -> &CoulombEigenfunction {
        &self.chi
    }
}

impl RadialFunction for PerturbedWavefunction {
    fn eval(&self, r: f64) -> Result<f64> {
        Ok(self.value(r))
    }
}

/// Effective angular momentum `Λ = (N + 2ℓ - 3)/2` for `N` spatial dimensions.
pub fn effective_ell_ndim(dimensions: u32, ell: u32) -> Result<f64> {
    if dimensions < 2 {
        return Err(Error::Domain(format!("need at least 2 dimensions, got {dimensions}")));
    }
    Ok((dimensions as f64 + 2.0 * ell as f64 - 3.0) / 2.0)
}
