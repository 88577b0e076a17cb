//! Exact computations on finitely generated nilpotent matrix groups: word
//! metric balls, central series, coordinate-lattice quotients, and the
//! growth of the smallest finite quotients that separate a whole ball.

#![forbid(unsafe_code)]

mod arith;
pub mod checks;
pub mod error;
pub mod group;
pub mod growth;
pub mod metric;
pub mod quotient;
pub mod series;
pub mod spec;

pub use error::{Error, Result};
pub use group::{Block, Coordinate, Element, GeneratingSet, Group};
pub use growth::{
    fit_exponent, invariance_and_product_checks, phi_upper_series, theorem_c_report, Cutoff, ExponentFit,
    GrowthSeries, Verdict,
};
pub use metric::{coordinate_bounds, distortion_series, enumerate_ball, word_growth_series, Ball, BoundVector, DEFAULT_LIMIT};
pub use quotient::{
    detect_ball_certified, detect_ball_exhaustive, inject_check, lattice_subgroup, min_quotient_search,
    solve_min_weights, DetectionResult, LatticeSubgroup, MinWeights,
};
pub use series::{
    bass_degree, center, coordinate_weight, element_weight, lower_central_series, nilpotency_class,
    terraced_bound, upper_central_series, validate_terraced, CoordinateSubgroup, TerracedFiltration,
};
pub use spec::GroupSpec;
