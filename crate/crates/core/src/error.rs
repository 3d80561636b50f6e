use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("Laguerre index out of supported range: n = {n}, k = {k} (max n = 20, k = 41)")]
    LaguerreIndex { n: u32, k: u32 },

    #[error("invalid physical context: {0}")]
    InvalidContext(String),

    #[error("principal quantum number {principal} exceeds the supported maximum of 20")]
    StateTooHigh { principal: u32 },

    #[error("superpotential pole: r = {r} lies on the node at r = {node}")]
    Pole { r: f64, node: f64 },

    #[error("state n = {n} is not supported in {what}")]
    UnsupportedState { n: u32, what: &'static str },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("quadrature did not converge after {subdivisions} subdivisions (estimate {estimate:e}, error {error:e})")]
    NonConvergence {
        estimate: f64,
        error: f64,
        subdivisions: usize,
    },

    #[error("invalid integration spec: {0}")]
    InvalidSpec(String),

    #[error("perturbed wavefunction is not normalizable: {0}")]
    NotNormalizable(String),

    #[error("invalid radial grid: {0}")]
    InvalidGrid(String),

    #[error("no bound state with {target_nodes} nodes in the energy window [{lower}, {upper}]")]
    NoBoundState {
        target_nodes: u32,
        lower: f64,
        upper: f64,
    },

    #[error("bracketing failed: expected {expected} nodes, found {found} at E = {energy}")]
    Bracketing {
        expected: u32,
        found: u32,
        energy: f64,
    },

    #[error("golden data: {0}")]
    Golden(String),

    #[error("no rows to emit")]
    EmptyRows,

    #[error("output: {0}")]
    Output(String),
}

pub type Result<T> = std::result::Result<T, Error>;
