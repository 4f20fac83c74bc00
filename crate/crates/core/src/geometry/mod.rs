//! Recession cones, slices and rotundity diagnostics.

pub mod cone;
pub mod gamma;
pub mod lur;
pub mod slice;

pub use cone::{
    cone_equal, cone_is_trivial, cones_intersection_trivial, minimal_set_bounded, recession_cone, recession_contains,
    set_is_bounded, ConeDescription,
};
pub use gamma::{gamma_adversarial, gamma_bound_check, gamma_corpus, sphere_segment_exit, GammaSummary, GAMMA};
pub use lur::{lur_modulus, LurProfile};
pub use slice::{slice, slice_diameter, strongly_exposes_check, ExposureTrend};
