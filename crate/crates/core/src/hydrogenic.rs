//! The exactly solvable Coulomb problem that serves as the zeroth order.
//!
//! Radial functions here are `χ(r) = r R(r)`, normalized on the half-line.
//! With `a = ħ²/(mA)` and principal number `n' = n + ℓ + 1`,
//!
//! ```text
//! χ_{nℓ}(r) = N r^{ℓ+1} exp(-r/(n'a)) L_n^{2ℓ+1}(2r/(n'a))
//! ```
//!
//! where `N` is fixed from the Laguerre orthogonality integral rather than
//! copied from a printed prefactor.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::{self, PolynomialIndex};
use crate::RadialFunction;

/// Largest supported principal quantum number.
pub const MAX_PRINCIPAL: u32 = 20;

/// Units and parameters of the screened Coulomb problem
/// `V(r) = -(A/r) e^{-αr}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalContext {
    pub hbar: f64,
    pub mass: f64,
    pub coupling: f64,
    pub screening: f64,
}

impl PhysicalContext {
    pub fn new(hbar: f64, mass: f64, coupling: f64, screening: f64) -> Result<Self> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if !positive(hbar) {
            return Err(Error::InvalidContext(format!("hbar must be positive, got {hbar}")));
        }
        if !positive(mass) {
            return Err(Error::InvalidContext(format!("mass must be positive, got {mass}")));
        }
        if !positive(coupling) {
            return Err(Error::InvalidContext(format!("coupling A must be positive, got {coupling}")));
        }
        if !(screening.is_finite() && screening >= 0.0) {
            return Err(Error::InvalidContext(format!(
                "screening alpha must be non-negative, got {screening}"
            )));
        }
        Ok(Self {
            hbar,
            mass,
            coupling,
            screening,
        })
    }

    /// Same units and coupling with a different screening parameter.
    pub fn with_screening(&self, screening: f64) -> Result<Self> {
        Self::new(self.hbar, self.mass, self.coupling, screening)
    }

    /// Bohr length `a = ħ²/(mA)`.
    pub fn bohr_radius(&self) -> f64 {
        self.hbar * self.hbar / (self.mass * self.coupling)
    }

    /// `ħ/√(2m)`, the scale between superpotentials and logarithmic derivatives.
    pub fn riccati_scale(&self) -> f64 {
        self.hbar / (2.0 * self.mass).sqrt()
    }
}

/// Radial quantum number `n` (node count) and angular momentum `ℓ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StateLabel {
    pub n: u32,
    pub ell: u32,
}

const ORBITAL_LETTERS: &[u8] = b"spdfghiklmnoqrtuv";

impl StateLabel {
    pub fn new(n: u32, ell: u32) -> Self {
        Self { n, ell }
    }

    /// `n' = n + ℓ + 1`.
    pub fn principal(&self) -> u32 {
        self.n + self.ell + 1
    }

    /// Spectroscopic label such as `3p` (principal number, then the letter for ℓ).
    pub fn spectroscopic(&self) -> String {
        match ORBITAL_LETTERS.get(self.ell as usize) {
            Some(&c) => format!("{}{}", self.principal(), c as char),
            None => format!("{}[l={}]", self.principal(), self.ell),
        }
    }

    /// Parses labels like `1s` or `3d` back into `(n, ℓ)`.
    pub fn from_spectroscopic(label: &str) -> Option<Self> {
        let label = label.trim();
        let letter = label.chars().last()?.to_ascii_lowercase();
        let principal: u32 = label[..label.len() - letter.len_utf8()].parse().ok()?;
        let ell = ORBITAL_LETTERS.iter().position(|&c| c as char == letter)? as u32;
        if principal < ell + 1 {
            return None;
        }
        Some(Self {
            n: principal - ell - 1,
            ell,
        })
    }
}

/// `ε_n = -mA²/(2ħ²n'²)`.
pub fn coulomb_energy(ctx: &PhysicalContext, s: StateLabel) -> f64 {
    let np = s.principal() as f64;
    -ctx.mass * ctx.coupling * ctx.coupling / (2.0 * ctx.hbar * ctx.hbar * np * np)
}

/// `⟨r⟩ = (a/2)[3n'² - ℓ(ℓ+1)]`.
pub fn expectation_r(ctx: &PhysicalContext, s: StateLabel) -> f64 {
    0.5 * ctx.bohr_radius() * moment_r_units(s) as f64
}

/// `⟨r²⟩ = (a²n'²/2)[5n'² + 1 - 3ℓ(ℓ+1)]`.
pub fn expectation_r2(ctx: &PhysicalContext, s: StateLabel) -> f64 {
    let a = ctx.bohr_radius();
    0.5 * a * a * moment_r2_units(s) as f64
}

/// `2⟨r⟩/a` as an exact integer.
pub fn moment_r_units(s: StateLabel) -> i64 {
    let np = s.principal() as i64;
    let l = s.ell as i64;
    3 * np * np - l * (l + 1)
}

/// `2⟨r²⟩/a²` as an exact integer.
pub fn moment_r2_units(s: StateLabel) -> i64 {
    let np = s.principal() as i64;
    let l = s.ell as i64;
    np * np * (5 * np * np + 1 - 3 * l * (l + 1))
}

fn check_principal(s: StateLabel) -> Result<()> {
    if s.principal() > MAX_PRINCIPAL {
        return Err(Error::StateTooHigh {
            principal: s.principal(),
        });
    }
    Ok(())
}

/// Normalized Coulomb radial eigenfunction `χ_{nℓ}`.
#[derive(Debug, Clone)]
pub struct CoulombEigenfunction {
    state: StateLabel,
    index: PolynomialIndex,
    /// `1/(n'a)`
    inv_length: f64,
    log_norm: f64,
    bohr: f64,
}

/// Builds the evaluator for `χ_{nℓ}`.
pub fn chi(ctx: &PhysicalContext, s: StateLabel) -> Result<CoulombEigenfunction> {
    check_principal(s)?;
    let a = ctx.bohr_radius();
    let np = s.principal() as f64;
    let index = PolynomialIndex::new(s.n, 2 * s.ell + 1)?;
    let n = s.n as u64;
    let l = s.ell as u64;
    // ∫ ρ^{2ℓ+2} e^{-ρ} [L_n^{2ℓ+1}(ρ)]² dρ = 2n' (n+2ℓ+1)!/n!, with r = n'aρ/2
    let log_norm = -0.5
        * ((2 * l + 3) as f64 * (0.5 * np * a).ln()
            + (2.0 * np).ln()
            + special::log_factorial(n + 2 * l + 1)
            - special::log_factorial(n));
    Ok(CoulombEigenfunction {
        state: s,
        index,
        inv_length: 1.0 / (np * a),
        log_norm,
        bohr: a,
    })
}

impl CoulombEigenfunction {
    pub fn state(&self) -> StateLabel {
        self.state
    }

    pub fn value(&self, r: f64) -> f64 {
        if r <= 0.0 {
            return 0.0;
        }
        let rho = 2.0 * r * self.inv_length;
        let envelope =
            (self.log_norm + (self.state.ell + 1) as f64 * r.ln() - r * self.inv_length).exp();
        envelope * special::laguerre(self.index, rho)
    }

    /// `ln|χ(r)|`, finite wherever `χ ≠ 0` even after `χ` itself underflows.
    pub fn log_abs_value(&self, r: f64) -> f64 {
        if r <= 0.0 {
            return f64::NEG_INFINITY;
        }
        let rho = 2.0 * r * self.inv_length;
        self.log_norm + (self.state.ell + 1) as f64 * r.ln() - r * self.inv_length
            + special::laguerre(self.index, rho).abs().ln()
    }

    /// `χ'(r)/χ(r)`; infinite at nodes.
    pub fn log_derivative(&self, r: f64) -> f64 {
        let rho = 2.0 * r * self.inv_length;
        let lag = special::laguerre(self.index, rho);
        let dlag = special::laguerre_derivative(self.index, rho);
        (self.state.ell + 1) as f64 / r - self.inv_length + 2.0 * self.inv_length * dlag / lag
    }

    /// `d/dr [χ'/χ]`, from the Laguerre derivative identities.
    pub fn log_derivative_slope(&self, r: f64) -> f64 {
        let rho = 2.0 * r * self.inv_length;
        let lag = special::laguerre(self.index, rho);
        let d1 = special::laguerre_derivative(self.index, rho) / lag;
        let d2 = special::laguerre_second_derivative(self.index, rho) / lag;
        let b2 = 4.0 * self.inv_length * self.inv_length;
        -((self.state.ell + 1) as f64) / (r * r) + b2 * (d2 - d1 * d1)
    }

    /// Interior zeros of `χ`, located by sign-change scan and bisection.
    pub fn nodes(&self) -> Vec<f64> {
        if self.state.n == 0 {
            return Vec::new();
        }
        let np = self.state.principal() as f64;
        let upper = 60.0 * np * self.bohr;
        const SCAN: usize = 4096;
        let step = upper / SCAN as f64;
        // the polynomial factor carries all sign changes and avoids underflow
        let g = |r: f64| special::laguerre(self.index, 2.0 * r * self.inv_length);
        let mut nodes = Vec::with_capacity(self.state.n as usize);
        let mut prev_r = step * 1e-3;
        let mut prev = g(prev_r);
        for i in 1..=SCAN {
            let r = i as f64 * step;
            let cur = g(r);
            if prev != 0.0 && cur.signum() != prev.signum() {
                nodes.push(bisect(&g, prev_r, r));
            }
            prev = cur;
            prev_r = r;
        }
        nodes
    }

    pub fn bohr_radius(&self) -> f64 {
        self.bohr
    }

    /// Decay length of `χ²`, used as the quadrature scale.
    pub fn density_decay_scale(&self) -> f64 {
        0.5 / self.inv_length
    }
}

impl RadialFunction for CoulombEigenfunction {
    fn eval(&self, r: f64) -> Result<f64> {
        Ok(self.value(r))
    }
}

pub(crate) fn bisect(g: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut f_lo = g(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = g(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Unperturbed superpotential `W_n = -(ħ/√2m) χ'/χ`.
#[derive(Debug, Clone)]
pub struct Superpotential {
    chi: CoulombEigenfunction,
    scale: f64,
    nodes: Vec<f64>,
    pole_guard: f64,
}

pub fn superpotential(ctx: &PhysicalContext, s: StateLabel) -> Result<Superpotential> {
    let chi = chi(ctx, s)?;
    let nodes = chi.nodes();
    Ok(Superpotential {
        pole_guard: 1e-12 * chi.bohr_radius(),
        chi,
        scale: ctx.riccati_scale(),
        nodes,
    })
}

impl Superpotential {
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    fn check(&self, r: f64) -> Result<()> {
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::Domain(format!("superpotential needs r > 0, got {r}")));
        }
        if let Some(&node) = self.nodes.iter().find(|&&x| (r - x).abs() <= self.pole_guard) {
            return Err(Error::Pole { r, node });
        }
        Ok(())
    }

    pub fn derivative(&self, r: f64) -> Result<f64> {
        self.check(r)?;
        Ok(-self.scale * self.chi.log_derivative_slope(r))
    }
}

impl RadialFunction for Superpotential {
    fn eval(&self, r: f64) -> Result<f64> {
        self.check(r)?;
        Ok(-self.scale * self.chi.log_derivative(r))
    }
}
