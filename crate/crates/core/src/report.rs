//! Comparison tables: perturbative energies next to printed reference values
//! and the shooting oracle, with human, CSV and JSON output.

use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hydrogenic::{PhysicalContext, StateLabel};
use crate::numerov::{self, ShootingResult};
use crate::perturbation::{self, EnergyBreakdown, PerturbedWavefunction};

/// Environment variable that replaces the embedded golden data file.
pub const GOLDEN_PATH_VAR: &str = "YUKAWA_GOLDEN_PATH";

const EMBEDDED_GOLDEN: &str = include_str!("../data/golden.csv");

/// Fixed screening of tables 2 and 3.
pub const TABLE23_SCREENING: f64 = 0.2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RegimeName {
    Table1,
    Table23,
    Custom,
}

/// Unit system plus the rule that fills in `A` and `α` when not given.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitRegime {
    pub name: RegimeName,
    pub hbar: f64,
    pub mass: f64,
}

/// Screening given either directly or as `g = α/A`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Screening {
    Alpha(f64),
    G(f64),
}

impl UnitRegime {
    /// `ħ = m = 1`, `A = √2`, `α = gA`.
    pub fn table1() -> Self {
        Self {
            name: RegimeName::Table1,
            hbar: 1.0,
            mass: 1.0,
        }
    }

    /// `ħ = 2m = 1`, `α = 0.2`.
    pub fn table23() -> Self {
        Self {
            name: RegimeName::Table23,
            hbar: 1.0,
            mass: 0.5,
        }
    }

    pub fn custom(hbar: f64, mass: f64) -> Self {
        Self {
            name: RegimeName::Custom,
            hbar,
            mass,
        }
    }

    pub fn by_name(name: RegimeName) -> Self {
        match name {
            RegimeName::Table1 => Self::table1(),
            RegimeName::Table23 => Self::table23(),
            RegimeName::Custom => Self::custom(1.0, 1.0),
        }
    }

    /// Resolves the physical parameters, applying the regime defaults.
    pub fn context(&self, coupling: Option<f64>, screening: Option<Screening>) -> Result<PhysicalContext> {
        let coupling = match (coupling, self.name) {
            (Some(a), _) => a,
            (None, RegimeName::Table1) => std::f64::consts::SQRT_2,
            (None, _) => {
                return Err(Error::InvalidContext("coupling A is required in this regime".into()))
            }
        };
        let alpha = match (screening, self.name) {
            (Some(Screening::Alpha(a)), _) => a,
            (Some(Screening::G(g)), _) => g * coupling,
            (None, RegimeName::Table23) => TABLE23_SCREENING,
            (None, _) => {
                return Err(Error::InvalidContext("screening (alpha or g) is required in this regime".into()))
            }
        };
        PhysicalContext::new(self.hbar, self.mass, coupling, alpha)
    }
}

/// A value as typeset, with its number of decimals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrintedValue {
    pub value: f64,
    pub decimals: u32,
}

/// Slack absorbing binary representation error in tie comparisons.
const TIE_SLACK: f64 = 1e-12;

impl PrintedValue {
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        let value: f64 = text
            .parse()
            .map_err(|_| Error::Golden(format!("not a number: {text:?}")))?;
        let decimals = text.split_once('.').map_or(0, |(_, frac)| frac.len() as u32);
        Ok(Self { value, decimals })
    }

    /// Half a unit in the last printed place.
    pub fn half_unit(&self) -> f64 {
        0.5 * 10f64.powi(-(self.decimals as i32))
    }

    /// `x` rounded half away from zero to this value's precision.
    pub fn round(&self, x: f64) -> f64 {
        let scale = 10f64.powi(self.decimals as i32);
        (x * scale).round() / scale
    }

    /// Whether `x` could have been typeset as this value.
    pub fn is_rounding_of(&self, x: f64) -> bool {
        (x - self.value).abs() <= self.half_unit() + TIE_SLACK
    }

    /// `round(x) - printed`, exactly zero when `x` rounds to the printed value.
    pub fn deviation(&self, x: f64) -> f64 {
        if self.is_rounding_of(x) {
            return 0.0;
        }
        let scale = 10f64.powi(self.decimals as i32);
        ((x * scale).round() - (self.value * scale).round()) / scale
    }

    /// Raw `|x - printed| ≤ tol`; the default tolerance is half a printed unit.
    pub fn within(&self, x: f64, tol: Option<f64>) -> bool {
        let tol = tol.unwrap_or_else(|| self.half_unit());
        (x - self.value).abs() <= tol + TIE_SLACK
    }
}

/// One row of the golden data file.
#[derive(Debug, Clone)]
pub struct GoldenRow {
    pub table: u8,
    pub label: String,
    pub state: StateLabel,
    pub coupling: f64,
    pub g: Option<f64>,
    pub alpha: Option<f64>,
    pub present: Option<PrintedValue>,
    pub reference: Option<PrintedValue>,
    pub analytic: [Option<PrintedValue>; 2],
}

impl GoldenRow {
    pub fn regime(&self) -> UnitRegime {
        if self.table == 1 {
            UnitRegime::table1()
        } else {
            UnitRegime::table23()
        }
    }

    pub fn context(&self) -> Result<PhysicalContext> {
        let screening = match (self.alpha, self.g) {
            (Some(a), _) => Some(Screening::Alpha(a)),
            (None, Some(g)) => Some(Screening::G(g)),
            (None, None) => None,
        };
        self.regime().context(Some(self.coupling), screening)
    }
}

#[derive(Debug, Deserialize)]
struct RawGolden {
    table: u8,
    label: String,
    n: u32,
    ell: u32,
    coupling: f64,
    g: Option<f64>,
    alpha: Option<f64>,
    present: String,
    reference: String,
    ref_analytic_1: String,
    ref_analytic_2: String,
}

fn optional_printed(text: &str) -> Result<Option<PrintedValue>> {
    if text.trim().is_empty() {
        Ok(None)
    } else {
        PrintedValue::parse(text).map(Some)
    }
}

/// Parses golden data in the embedded file's format.
pub fn parse_golden(text: &str) -> Result<Vec<GoldenRow>> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for (i, record) in reader.deserialize::<RawGolden>().enumerate() {
        let raw = record.map_err(|e| Error::Golden(format!("record {}: {e}", i + 1)))?;
        let state = StateLabel::new(raw.n, raw.ell);
        if !raw.label.is_empty() && StateLabel::from_spectroscopic(&raw.label) != Some(state) {
            return Err(Error::Golden(format!(
                "record {}: label {} does not match n={} ell={}",
                i + 1,
                raw.label,
                raw.n,
                raw.ell
            )));
        }
        rows.push(GoldenRow {
            table: raw.table,
            label: raw.label,
            state,
            coupling: raw.coupling,
            g: raw.g,
            alpha: raw.alpha,
            present: optional_printed(&raw.present)?,
            reference: optional_printed(&raw.reference)?,
            analytic: [optional_printed(&raw.ref_analytic_1)?, optional_printed(&raw.ref_analytic_2)?],
        });
    }
    Ok(rows)
}

/// Golden rows from `YUKAWA_GOLDEN_PATH` if set, otherwise the embedded file.
pub fn load_golden() -> Result<Vec<GoldenRow>> {
    match std::env::var_os(GOLDEN_PATH_VAR) {
        Some(path) => load_golden_from(Path::new(&path)),
        None => parse_golden(EMBEDDED_GOLDEN),
    }
}

pub fn load_golden_from(path: &Path) -> Result<Vec<GoldenRow>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Golden(format!("{}: {e}", path.display())))?;
    parse_golden(&text)
}

/// Perturbative energy next to the oracle and printed values for one state.
#[derive(Debug, Clone)]
pub struct ComparisonRow {
    pub table: Option<u8>,
    pub label: String,
    pub state: StateLabel,
    pub context: PhysicalContext,
    pub g: Option<f64>,
    pub perturbative: EnergyBreakdown,
    pub oracle: Option<std::result::Result<ShootingResult, String>>,
    pub present: Option<PrintedValue>,
    pub reference: Option<PrintedValue>,
}

impl ComparisonRow {
    fn compute(
        table: Option<u8>,
        label: String,
        ctx: PhysicalContext,
        s: StateLabel,
        g: Option<f64>,
        with_oracle: bool,
    ) -> Self {
        let oracle = with_oracle.then(|| {
            numerov::solve_state(&ctx, s).map_err(|e| format!("{} (A={}, alpha={}): {e}", label, ctx.coupling, ctx.screening))
        });
        Self {
            table,
            label,
            state: s,
            context: ctx,
            g,
            perturbative: perturbation::total_energy(&ctx, s),
            oracle,
            present: None,
            reference: None,
        }
    }

    pub fn oracle_energy(&self) -> Option<f64> {
        match &self.oracle {
            Some(Ok(r)) => Some(r.energy),
            _ => None,
        }
    }

    pub fn oracle_error(&self) -> Option<&str> {
        match &self.oracle {
            Some(Err(e)) => Some(e),
            _ => None,
        }
    }

    /// Rounded perturbative total minus the printed perturbative value.
    pub fn dev_present(&self) -> Option<f64> {
        self.present.map(|p| p.deviation(self.perturbative.total))
    }

    /// Rounded oracle energy minus the printed reference value.
    pub fn dev_exact(&self) -> Option<f64> {
        match (self.reference, self.oracle_energy()) {
            (Some(p), Some(e)) => Some(p.deviation(e)),
            _ => None,
        }
    }

    /// Whether the perturbative total matches the printed value within `tol`.
    pub fn present_ok(&self, tol: Option<f64>) -> Option<bool> {
        self.present.map(|p| p.within(self.perturbative.total, tol))
    }

    pub fn record(&self) -> RowRecord {
        RowRecord {
            state: self.label.clone(),
            n: self.state.n,
            ell: self.state.ell,
            coupling: self.context.coupling,
            alpha: self.context.screening,
            epsilon: self.perturbative.epsilon,
            shift: self.perturbative.constant_shift,
            de1: self.perturbative.de1,
            de2: self.perturbative.de2,
            total: self.perturbative.total,
            oracle: self.oracle_energy(),
            ref_present: self.present.map(|p| p.value),
            ref_exact: self.reference.map(|p| p.value),
            dev_present: self.dev_present(),
            dev_exact: self.dev_exact(),
        }
    }
}

/// Flat row layout shared by the CSV and JSON outputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RowRecord {
    pub state: String,
    pub n: u32,
    pub ell: u32,
    #[serde(rename = "A")]
    pub coupling: f64,
    pub alpha: f64,
    pub epsilon: f64,
    pub shift: f64,
    pub de1: f64,
    pub de2: f64,
    pub total: f64,
    pub oracle: Option<f64>,
    pub ref_present: Option<f64>,
    pub ref_exact: Option<f64>,
    pub dev_present: Option<f64>,
    pub dev_exact: Option<f64>,
}

/// Column order of the CSV output.
pub const CSV_HEADER: &str =
    "state,n,ell,A,alpha,epsilon,shift,de1,de2,total,oracle,ref_present,ref_exact,dev_present,dev_exact";

/// One state in a given regime.
pub fn compute_state(
    regime: UnitRegime,
    coupling: Option<f64>,
    screening: Option<Screening>,
    s: StateLabel,
    with_oracle: bool,
) -> Result<ComparisonRow> {
    let ctx = regime.context(coupling, screening)?;
    crate::hydrogenic::chi(&ctx, s)?;
    let g = match screening {
        Some(Screening::G(g)) => Some(g),
        _ => None,
    };
    Ok(ComparisonRow::compute(None, s.spectroscopic(), ctx, s, g, with_oracle))
}

/// Every row of table 1, 2 or 3, in printed order.
pub fn reproduce_table(table_id: u8, with_oracle: bool) -> Result<Vec<ComparisonRow>> {
    reproduce_table_from(&load_golden()?, table_id, with_oracle)
}

pub fn reproduce_table_from(golden: &[GoldenRow], table_id: u8, with_oracle: bool) -> Result<Vec<ComparisonRow>> {
    if !(1..=3).contains(&table_id) {
        return Err(Error::InvalidSpec(format!("no table {table_id}; expected 1, 2 or 3")));
    }
    let rows: Vec<&GoldenRow> = golden.iter().filter(|r| r.table == table_id).collect();
    if rows.is_empty() {
        return Err(Error::EmptyRows);
    }
    let contexts = rows
        .iter()
        .map(|r| r.context())
        .collect::<Result<Vec<_>>>()?;
    // collect() on an indexed parallel iterator keeps the input order
    Ok(rows
        .par_iter()
        .zip(contexts.par_iter())
        .map(|(r, ctx)| {
            let mut row = ComparisonRow::compute(Some(r.table), r.label.clone(), *ctx, r.state, r.g, with_oracle);
            row.present = r.present;
            row.reference = r.reference;
            row
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Human,
    Csv,
    Json,
}

pub fn emit(rows: &[ComparisonRow], format: Format) -> Result<String> {
    if rows.is_empty() {
        return Err(Error::EmptyRows);
    }
    match format {
        Format::Human => Ok(emit_human(rows)),
        Format::Csv => emit_csv(rows),
        Format::Json => {
            let records: Vec<RowRecord> = rows.iter().map(ComparisonRow::record).collect();
            let mut text = serde_json::to_string_pretty(&records).map_err(|e| Error::Output(e.to_string()))?;
            text.push('\n');
            Ok(text)
        }
    }
}

fn emit_csv(rows: &[ComparisonRow]) -> Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in rows {
        writer.serialize(row.record()).map_err(|e| Error::Output(e.to_string()))?;
    }
    let bytes = writer.into_inner().map_err(|e| Error::Output(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Output(e.to_string()))
}

fn emit_human(rows: &[ComparisonRow]) -> String {
    let mut out = String::new();
    let with_g = rows.iter().any(|r| r.g.is_some());
    let _ = writeln!(
        out,
        "{:<6} {:>9} {:>8} {:>14} {:>12} {:>12} {:>12} {:>14} {:>14} {:>12} {:>12}",
        "state",
        if with_g { "g" } else { "A" },
        "alpha",
        "epsilon",
        "A*alpha",
        "de1",
        "de2",
        "total",
        "oracle",
        "printed",
        "reference"
    );
    for r in rows {
        let param = match r.g {
            Some(g) if with_g => format!("{g}"),
            _ => format!("{}", r.context.coupling),
        };
        let printed = r.present.map_or_else(|| "-".to_string(), |p| format!("{:.*}", p.decimals as usize, p.value));
        let reference = r.reference.map_or_else(|| "-".to_string(), |p| format!("{:.*}", p.decimals as usize, p.value));
        let oracle = match &r.oracle {
            Some(Ok(s)) => format!("{:.8}", s.energy),
            Some(Err(_)) => "failed".to_string(),
            None => "-".to_string(),
        };
        let _ = writeln!(
            out,
            "{:<6} {:>9} {:>8.5} {:>14.8} {:>12.8} {:>12.8} {:>12.8} {:>14.8} {:>14} {:>12} {:>12}",
            r.label,
            param,
            r.context.screening,
            r.perturbative.epsilon,
            r.perturbative.constant_shift,
            r.perturbative.de1,
            r.perturbative.de2,
            r.perturbative.total,
            oracle,
            printed,
            reference
        );
    }
    out
}

/// Outcome flags for a set of rows, as used by the command-line exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Verdict {
    pub golden_failures: usize,
    pub oracle_failures: usize,
}

pub fn verdict(rows: &[ComparisonRow], tol: Option<f64>) -> Verdict {
    let mut v = Verdict::default();
    for r in rows {
        if r.present_ok(tol) == Some(false) {
            v.golden_failures += 1;
        }
        if r.oracle_error().is_some() {
            v.oracle_failures += 1;
        }
    }
    v
}

/// Samples of `χ` and `ψ` on `points` equally spaced radii in `(0, r_max]`.
///
/// `order` 0 gives `ψ = χ`; order 2 includes both superpotential corrections.
pub fn sample_wavefunction(
    ctx: &PhysicalContext,
    s: StateLabel,
    r_max: f64,
    points: usize,
    order: u32,
) -> Result<Vec<(f64, f64, f64)>> {
    if !(r_max > 0.0 && r_max.is_finite()) {
        return Err(Error::Domain(format!("r_max must be positive, got {r_max}")));
    }
    if points == 0 {
        return Err(Error::Domain("need at least one sample point".into()));
    }
    let chi = crate::hydrogenic::chi(ctx, s)?;
    let psi: Option<PerturbedWavefunction> = match order {
        0 => None,
        2 => Some(perturbation::perturbed_wavefunction(ctx, s)?),
        _ => {
            return Err(Error::Domain(format!(
                "wavefunction order must be 0 or 2, got {order}"
            )))
        }
    };
    Ok((1..=points)
        .map(|i| {
            let r = r_max * i as f64 / points as f64;
            let c = chi.value(r);
            (r, c, psi.as_ref().map_or(c, |p| p.value(r)))
        })
        .collect())
}

/// CSV text for [`sample_wavefunction`] output.
pub fn wavefunction_csv(samples: &[(f64, f64, f64)]) -> String {
    let mut out = String::from("r,chi,psi\n");
    for (r, c, p) in samples {
        let _ = writeln!(out, "{r},{c},{p}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn printed_value_parsing() {
        let p = PrintedValue::parse("-0.1014").unwrap();
        assert_eq!(p.decimals, 4);
        assert_eq!(p.half_unit(), 5e-5);
        let p = PrintedValue::parse(" -139.2590 ").unwrap();
        assert_eq!(p.decimals, 4);
        assert!(PrintedValue::parse("x").is_err());
    }

    #[test]
    fn rounding_half_away_from_zero() {
        let p = PrintedValue::parse("-0.9036").unwrap();
        assert_eq!(p.round(-0.90365), -0.9037);
        assert_eq!(p.round(-0.903649), -0.9036);
        assert_eq!(p.deviation(-0.90362), 0.0);
        assert!((p.deviation(-0.90372) - -1e-4).abs() < 1e-15);
    }

    #[test]
    fn golden_counts() {
        let g = parse_golden(EMBEDDED_GOLDEN).unwrap();
        for (t, n) in [(1, 30), (2, 8), (3, 12)] {
            assert_eq!(g.iter().filter(|r| r.table == t).count(), n);
        }
    }

    #[test]
    fn golden_label_mismatch_rejected() {
        let text = "table,label,n,ell,coupling,g,alpha,present,reference,ref_analytic_1,ref_analytic_2\n1,2s,0,0,1.4,0.01,,-1,,,\n";
        assert!(matches!(parse_golden(text), Err(Error::Golden(_))));
    }

    #[test]
    fn regime_defaults() {
        let c = UnitRegime::table1().context(None, Some(Screening::G(0.05))).unwrap();
        assert_eq!(c.coupling, std::f64::consts::SQRT_2);
        assert_eq!(c.screening, 0.05 * std::f64::consts::SQRT_2);
        let c = UnitRegime::table23().context(Some(4.0), None).unwrap();
        assert_eq!((c.hbar, c.mass, c.screening), (1.0, 0.5, 0.2));
        assert!(UnitRegime::custom(1.0, 1.0).context(Some(1.0), None).is_err());
        assert!(UnitRegime::table23().context(None, None).is_err());
    }

    #[test]
    fn empty_rows_rejected() {
        assert!(matches!(emit(&[], Format::Csv), Err(Error::EmptyRows)));
    }
}
