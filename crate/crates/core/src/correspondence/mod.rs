//! Orthogonality criteria for coherent states on periodic orbits, the
//! minimum spin meeting them, and `(j, κ)` survival scans.

mod criteria;
mod scan;

pub use criteria::{
    criteria_report, max_half_angle_cosine, min_j_for_orthogonality, symmetry_partners,
    CriteriaReport,
};
pub use scan::{
    linspace, spin_range, survival_heatmap, survival_slice, ScanOptions, SurvivalGrid,
};
