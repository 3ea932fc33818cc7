//! Generalized Fibonacci numbers `F_n^(d)` (each term the sum of the previous
//! `d`) computed three ways: exactly with big integers, as the nearest integer
//! to `c_d q^-(n-1)` with a certified error budget, and through the renewal
//! process whose lifetimes have `P(X = i) = q^i`.
//!
//! Here `q` is the root in `(1/2, 1)` of `q + q^2 + ... + q^d = 1` and
//! `c_d = 1 / E[X]`.

pub mod closedform;
pub mod combinatorics;
pub mod config;
pub mod dyadic;
pub mod error;
pub mod exact;
pub mod interval;
pub mod order;
pub mod renewal;
pub mod roots;
pub mod suite;

pub use closedform::{
    approx_value, certified_error_term, error_term, fib_closed, required_precision,
    ClosedFormValue, ErrorRecord,
};
pub use combinatorics::{
    composition_log_probability, count_compositions, enumerate_compositions, CompositionSet,
};
pub use config::{Config, DEFAULT_PRECISION_BITS};
pub use dyadic::{DecimalMode, Dyadic, Rounding};
pub use error::{Error, Result};
pub use exact::{fib_at, fib_sequence, BigIntegerSequence};
pub use interval::{CertifiedReal, Verdict};
pub use order::Order;
pub use renewal::{
    blackwell_rate_check, build_distribution, nbu_check, renewal_mass_dp, simulate_first_passage,
    LifetimeDistribution, RenewalMass, SimulationReport,
};
pub use roots::{
    blackwell_constant, characteristic_residual, derived_constants, mean_lifetime, solve_q,
    ConstantMethod, DerivedConstants, RootEnclosure,
};
