//! Fixed inputs shared by the benchmarks.

use rotrange_core::{perm_family, ComplexMatrix, D4FamilySpec, PermFamilySpec};

/// `M(1, 2, ..., d)`, certified for every `d`.
pub fn ramp(d: usize) -> ComplexMatrix {
    let alphas: Vec<f64> = (1..=d).map(|k| k as f64).collect();
    perm_family(&PermFamilySpec::real(&alphas)).expect("positive weights")
}

pub fn a_plus() -> ComplexMatrix {
    rotrange_core::d4_family(&D4FamilySpec::APlus { a: 1.0 }).expect("in domain")
}
