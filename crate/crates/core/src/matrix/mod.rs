//! Dense matrices, eigen-decomposition, matrix Laguerre coefficients `S_n`, error certificates
//! and an independent quadrature oracle for the true L2 error.

mod bounds;
mod dense;
mod eigen;
mod expm;
mod oracle;
mod quadrature;
mod series;

pub use bounds::{error_report, spectrum_report, ErrorBounds};
pub use dense::{DenseMatrix, Lu, M_MAX};
pub use eigen::{eigendecompose, is_stable, EigenOptions, EigenSystem, StabilityReport};
pub use expm::{expm, expm_t};
pub use oracle::{direct_error_oracle, OracleOptions, OracleResult};
pub use quadrature::{gauss_laguerre_rule, gauss_legendre_rule, GaussLaguerreRule, RULE_MAX};
pub use series::{eval_series, series_coeffs_alpha0, series_coeffs_general, LaguerreSeries, StabilityCheck};
