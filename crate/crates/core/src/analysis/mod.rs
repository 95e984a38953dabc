//! Closed-form coverage analysis.

pub mod coverage;
pub mod distance;
pub mod laplace;
pub mod scenario;

pub use coverage::{
    coverage, coverage_mobile_harp, coverage_mobile_nearest, coverage_static_harp, coverage_static_nearest,
    mobility_adjusted_coverage, Association, CoverageResult, Mobility,
};
pub use distance::{
    altitude_cdf, altitude_exposure, altitude_pdf, altitude_quantile, equivalent_3d_distance_pdf,
    harp_distance_cdf, harp_distance_pdf, nearest_distance_pdf,
};
pub use laplace::{
    conditional_coverage, gamma_exponent, laplace_with_derivatives, InterferenceField, InterferenceMode,
};
pub use scenario::{Deployment, MobileProfile, Scenario, UavProfile};
