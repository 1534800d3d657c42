//! Numerical toolkit for the seven-dimensional solvable Lie algebras built on the
//! nilradical `[X1,X2]=X4, [X1,X3]=X5`: brackets, spectra, the coadjoint action,
//! generic orbit classification and the foliation they form.

pub mod errata;
pub mod error;
pub mod exp_action;
pub mod expm;
pub mod families;
pub mod foliation;
pub mod lie;
pub mod orbits;
pub mod phi;
pub mod reference;
pub mod sampling;
pub mod spectral;
pub mod verify;

pub use error::{Error, Result};
pub use families::{
    build_algebra, derived_ideal_dimension, list_families, Algebra, FamilyId, FamilySpec,
    FamilyTag, FamilyTemplate, Studied,
};
pub use exp_action::{coadjoint_point, coadjoint_point_closed, exp_ad, exp_ad_closed};
pub use foliation::{
    closed_flow, fibration_p, homeo_apply, homeo_inverse, integrate_flow, jacobian_constancy,
    leaf_correspondence_check, s_g_eval, Homeomorphism, VectorField,
};
pub use orbits::{
    classify, cross_section, invariant, leaf_id, orbit_dimension, same_leaf, sample_orbit, LeafId,
    OrbitClass, OrbitKind, Quadrant,
};
pub use spectral::{eigenvalues_closed, eigenvalues_numeric, is_exponential, EigenvalueMultiset, Exponentiality};
pub use verify::{run_verify, Scope, VerifyConfig, VerifyReport};
pub use lie::{
    ad_matrix, bracket, kirillov_form, skew_rank, AlgebraElement, Covector, Matrix7,
    StructureConstants,
};
