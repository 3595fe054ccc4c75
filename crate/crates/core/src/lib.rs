//! Rotational symmetry of numerical ranges: certification, boundary
//! geometry and explicit families.

pub mod boundary;
pub mod cert;
pub mod error;
pub mod families;
pub mod io;
pub mod linalg;
pub mod poly;
pub mod trig;

pub use num_complex::Complex64;

pub use boundary::{
    boundary_curve, detect_flat_parts, detect_polygon, polar_radius, support, support_derivative,
    validate_geometry, BoundarySample, FlatSegment, GeometryReport, PolygonReport, SampleFlag,
};
pub use cert::{
    certify, extended_harmonic_check, extract_P, normalize, simplified_conditions, ExtractedP,
    SymmetryCertificate,
};
pub use error::{Error, Result};
pub use families::{
    d3_charpoly_closed, d3_structure_check, d4_family, d4_invariance_residuals, d4_params,
    disk_counterexample, perm_family, resultant_closed, D4FamilySpec, D4Params, PermFamilySpec,
    ResultantReport,
};
pub use io::MatrixFile;
pub use linalg::{
    determinant, hermitian_eigenvalues, hermitian_part, singular_values, spectral_norm, ComplexMatrix,
    ComplexScalar, HermitianSpectrum,
};
pub use poly::{sylvester_resultant, RealPolynomial};
pub use trig::{charpoly_theta, newton_to_elementary, power_sums, ThetaCharPoly, TrigPolynomial};
