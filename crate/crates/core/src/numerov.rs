//! Numerov shooting solver for the full screened-Coulomb radial equation.
//!
//! Solves `u'' = (2m/ħ²)[V_eff(r) - E] u` with
//! `V_eff = -(A/r)e^{-αr} + ℓ(ℓ+1)ħ²/(2mr²)` by integrating outward from the
//! origin and inward from a far boundary, and adjusting `E` until the two
//! pieces join smoothly. This does not use any of the perturbative machinery.

use crate::error::{Error, Result};
use crate::hydrogenic::{self, PhysicalContext, StateLabel};
use crate::RadialFunction;

/// Points per Bohr radius (or per screening length, if shorter) on the default grid.
const STEPS_PER_LENGTH: f64 = 400.0;
/// Minimum number of steps across the width of the most compact state.
const MIN_STEPS_PER_WIDTH: f64 = 50.0;
const SCAN_POINTS: usize = 200;
const OVERFLOW: f64 = 1e200;
const RESCALE: f64 = 1e-200;

/// Tolerance on `|mismatch · a|` for a solve to count as converged.
pub const MISMATCH_TOLERANCE: f64 = 1e-6;

/// Uniform radial grid `r_i = r_min + i·step`, `r_i ≤ r_max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialGrid {
    pub r_min: f64,
    pub r_max: f64,
    pub step: f64,
}

impl RadialGrid {
    // negated comparisons also reject NaN
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn new(r_min: f64, r_max: f64, step: f64) -> Result<Self> {
        if !(r_min > 0.0 && r_min.is_finite()) {
            return Err(Error::InvalidGrid(format!("r_min must be positive, got {r_min}")));
        }
        if !(r_max > r_min && r_max.is_finite()) {
            return Err(Error::InvalidGrid(format!("r_max {r_max} must exceed r_min {r_min}")));
        }
        if !(step > 0.0) {
            return Err(Error::InvalidGrid(format!("step must be positive, got {step}")));
        }
        if (r_max - r_min) / step < 1000.0 {
            return Err(Error::InvalidGrid(format!(
                "grid has fewer than 1000 steps ({:.1})",
                (r_max - r_min) / step
            )));
        }
        Ok(Self { r_min, r_max, step })
    }

    /// Default grid for the state with `n` nodes and angular momentum `ℓ`.
    ///
    /// The far boundary sits at `60 n'² a`, where even the weakest-bound
    /// states in range have decayed by many orders of magnitude.
    pub fn default_for(ctx: &PhysicalContext, s: StateLabel) -> Result<Self> {
        let a = ctx.bohr_radius();
        let np = s.principal() as f64;
        let mut length = a;
        if ctx.screening > 0.0 {
            length = length.min(1.0 / ctx.screening);
        }
        let mut step = length / STEPS_PER_LENGTH;
        // the ground state is about one Bohr radius wide
        step = step.min(a / MIN_STEPS_PER_WIDTH);
        Self::new(1e-6 * a, 60.0 * np * np * a, step)
    }

    pub fn len(&self) -> usize {
        ((self.r_max - self.r_min) / self.step).floor() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn radius(&self, i: usize) -> f64 {
        self.r_min + i as f64 * self.step
    }

    /// Same extent, step divided by `factor`.
    pub fn refined(&self, factor: f64) -> Result<Self> {
        Self::new(self.r_min, self.r_max, self.step / factor)
    }
}

/// Outcome of one bound-state solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShootingResult {
    pub energy: f64,
    pub node_count: usize,
    /// `(u'/u)_out - (u'/u)_in` at the matching point, by forward differences.
    pub log_derivative_mismatch: f64,
    pub converged: bool,
}

/// `V_eff(r) = -(A/r)e^{-αr} + ℓ(ℓ+1)ħ²/(2mr²)`.
#[derive(Debug, Clone, Copy)]
pub struct EffectivePotential {
    coupling: f64,
    screening: f64,
    barrier: f64,
}

pub fn effective_potential(ctx: &PhysicalContext, ell: u32) -> EffectivePotential {
    let l = ell as f64;
    EffectivePotential {
        coupling: ctx.coupling,
        screening: ctx.screening,
        barrier: l * (l + 1.0) * ctx.hbar * ctx.hbar / (2.0 * ctx.mass),
    }
}

impl EffectivePotential {
    fn at(&self, r: f64) -> f64 {
        -self.coupling / r * (-self.screening * r).exp() + self.barrier / (r * r)
    }
}

impl RadialFunction for EffectivePotential {
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    fn eval(&self, r: f64) -> Result<f64> {
        if !(r > 0.0) {
            return Err(Error::Domain(format!("effective potential needs r > 0, got {r}")));
        }
        Ok(self.at(r))
    }
}

/// Number of strict sign changes, skipping samples below `1e-13 · max|u|`.
pub fn count_nodes(u: &[f64]) -> usize {
    let max = u.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if max == 0.0 {
        return 0;
    }
    let threshold = 1e-13 * max;
    let mut last = 0.0f64;
    let mut count = 0;
    for &v in u {
        if v.abs() <= threshold {
            continue;
        }
        if last != 0.0 && (v > 0.0) != (last > 0.0) {
            count += 1;
        }
        last = v;
    }
    count
}

struct Shooter {
    r: Vec<f64>,
    v: Vec<f64>,
    h: f64,
    /// `2m/ħ²`
    k: f64,
    ell: f64,
    coupling: f64,
    screening: f64,
}

impl Shooter {
    fn new(ctx: &PhysicalContext, ell: u32, grid: &RadialGrid) -> Self {
        let pot = effective_potential(ctx, ell);
        let r: Vec<f64> = (0..grid.len()).map(|i| grid.radius(i)).collect();
        let v = r.iter().map(|&x| pot.at(x)).collect();
        Self {
            r,
            v,
            h: grid.step,
            k: 2.0 * ctx.mass / (ctx.hbar * ctx.hbar),
            ell: ell as f64,
            coupling: ctx.coupling,
            screening: ctx.screening,
        }
    }

    fn len(&self) -> usize {
        self.r.len()
    }

    #[inline]
    fn w(&self, i: usize, e: f64) -> f64 {
        1.0 - self.h * self.h * self.k * (self.v[i] - e) / 12.0
    }

    /// Power-series start `r^{ℓ+1}(1 + c₁r + c₂r²)`.
    fn series(&self, r: f64, e: f64) -> f64 {
        let beta = self.k * self.coupling;
        let c1 = -beta / (2.0 * (self.ell + 1.0));
        let k2 = self.k * (self.coupling * self.screening - e);
        let c2 = (-beta * c1 + k2) / (4.0 * self.ell + 6.0);
        r.powf(self.ell + 1.0) * (1.0 + r * (c1 + r * c2))
    }

    /// Nodes of the outward solution over the whole grid.
    fn outward_nodes(&self, e: f64) -> usize {
        let mut u0 = self.series(self.r[0], e);
        let mut u1 = self.series(self.r[1], e);
        let mut w0 = self.w(0, e);
        let mut w1 = self.w(1, e);
        let mut nodes = 0;
        for i in 1..self.len() - 1 {
            let w2 = self.w(i + 1, e);
            let u2 = ((12.0 - 10.0 * w1) * u1 - w0 * u0) / w2;
            if (u2 < 0.0 && u1 > 0.0) || (u2 > 0.0 && u1 < 0.0) {
                nodes += 1;
            }
            u0 = u1;
            u1 = u2;
            if u1.abs() > OVERFLOW {
                u0 *= RESCALE;
                u1 *= RESCALE;
            }
            w0 = w1;
            w1 = w2;
        }
        nodes
    }

    /// Outward solution on `[0, upto]`.
    fn outward(&self, e: f64, upto: usize) -> Vec<f64> {
        let mut u = Vec::with_capacity(upto + 1);
        u.push(self.series(self.r[0], e));
        u.push(self.series(self.r[1], e));
        for i in 1..upto {
            let next = ((12.0 - 10.0 * self.w(i, e)) * u[i] - self.w(i - 1, e) * u[i - 1])
                / self.w(i + 1, e);
            u.push(next);
            if next.abs() > OVERFLOW {
                u.iter_mut().for_each(|x| *x *= RESCALE);
            }
        }
        u
    }

    /// Inward solution on `[from, N)`, indexed from `from`.
    fn inward(&self, e: f64, from: usize) -> Vec<f64> {
        let n = self.len();
        let last = n - 1;
        let kappa = (self.k * (self.v[last] - e)).max(0.0).sqrt();
        let mut rev = Vec::with_capacity(n - from);
        rev.push(1e-30);
        rev.push(1e-30 * (kappa * self.h).exp());
        for j in 1..(last - from) {
            let i = last - j;
            let next = ((12.0 - 10.0 * self.w(i, e)) * rev[j] - self.w(i + 1, e) * rev[j - 1])
                / self.w(i - 1, e);
            rev.push(next);
            if next.abs() > OVERFLOW {
                rev.iter_mut().for_each(|x| *x *= RESCALE);
            }
        }
        rev.reverse();
        rev
    }

    /// Outermost classical turning point, or the grid midpoint.
    fn matching_index(&self, e: f64) -> usize {
        let n = self.len();
        let mut m = None;
        for i in (1..n).rev() {
            if self.v[i] - e < 0.0 {
                m = Some(i);
                break;
            }
        }
        match m {
            Some(i) if i >= 2 && i + 3 < n => i,
            _ => n / 2,
        }
    }

    /// Casoratian of outward and inward solutions at `m`, plus the mismatch.
    fn casoratian(&self, e: f64, m: usize) -> (f64, f64) {
        let out = self.outward(e, m + 1);
        let inw = self.inward(e, m);
        let d = out[m] * inw[1] - out[m + 1] * inw[0];
        let mismatch = (out[m + 1] / out[m] - inw[1] / inw[0]) / self.h;
        (d, mismatch)
    }

    fn combined(&self, e: f64, m: usize) -> Vec<f64> {
        let mut out = self.outward(e, m);
        let inw = self.inward(e, m);
        let scale = out[m] / inw[0];
        out.extend(inw[1..].iter().map(|x| x * scale));
        out
    }
}

/// Bound state of `V_eff` with exactly `target_nodes` interior nodes.
pub fn solve_bound_state(
    ctx: &PhysicalContext,
    ell: u32,
    target_nodes: u32,
    grid: &RadialGrid,
) -> Result<ShootingResult> {
    let sh = Shooter::new(ctx, ell, grid);
    let target = target_nodes as usize;
    let coulomb = hydrogenic::coulomb_energy(ctx, StateLabel::new(target_nodes, ell));
    let lower = 1.5 * coulomb;

    // coarse scan: node count is non-decreasing in E
    let mut lo = None;
    let mut hi = None;
    for j in 0..SCAN_POINTS {
        let e = lower * (1.0 - j as f64 / SCAN_POINTS as f64);
        let nodes = sh.outward_nodes(e);
        if nodes <= target {
            lo = Some((e, nodes));
        } else {
            hi = Some((e, nodes));
            break;
        }
    }
    let (Some((mut e_lo, _)), Some((mut e_hi, _))) = (lo, hi) else {
        return Err(Error::NoBoundState {
            target_nodes,
            lower,
            upper: 0.0,
        });
    };

    // narrow until the bracket holds exactly one level
    let mut n_lo = sh.outward_nodes(e_lo);
    let mut n_hi = sh.outward_nodes(e_hi);
    let mut guard = 0;
    while !(n_lo == target && n_hi == target + 1) {
        let mid = 0.5 * (e_lo + e_hi);
        let nodes = sh.outward_nodes(mid);
        if nodes <= target {
            e_lo = mid;
            n_lo = nodes;
        } else {
            e_hi = mid;
            n_hi = nodes;
        }
        guard += 1;
        if guard > 200 || (e_hi - e_lo).abs() <= f64::EPSILON * e_lo.abs() {
            return Err(Error::NoBoundState {
                target_nodes,
                lower: e_lo,
                upper: e_hi,
            });
        }
    }

    let m = sh.matching_index(0.5 * (e_lo + e_hi));
    let (d_lo, _) = sh.casoratian(e_lo, m);
    let (d_hi, _) = sh.casoratian(e_hi, m);
    let by_casoratian = d_lo.signum() != d_hi.signum();
    while (e_hi - e_lo).abs() > 1e-10 * e_lo.abs().max(e_hi.abs()) {
        let mid = 0.5 * (e_lo + e_hi);
        let go_up = if by_casoratian {
            let (d, _) = sh.casoratian(mid, m);
            if d == 0.0 {
                e_lo = mid;
                e_hi = mid;
                break;
            }
            d.signum() == d_lo.signum()
        } else {
            // fall back to the Dirichlet level at the far boundary
            sh.outward_nodes(mid) <= target
        };
        if go_up {
            e_lo = mid;
        } else {
            e_hi = mid;
        }
    }
    let energy = 0.5 * (e_lo + e_hi);
    let (_, mismatch) = sh.casoratian(energy, m);
    let node_count = count_nodes(&sh.combined(energy, m));
    if node_count != target {
        return Err(Error::Bracketing {
            expected: target_nodes,
            found: node_count as u32,
            energy,
        });
    }
    Ok(ShootingResult {
        energy,
        node_count,
        log_derivative_mismatch: mismatch,
        converged: (mismatch * ctx.bohr_radius()).abs() < MISMATCH_TOLERANCE,
    })
}

/// Solve on the default grid for the state.
pub fn solve_state(ctx: &PhysicalContext, s: StateLabel) -> Result<ShootingResult> {
    solve_bound_state(ctx, s.ell, s.n, &RadialGrid::default_for(ctx, s)?)
}
