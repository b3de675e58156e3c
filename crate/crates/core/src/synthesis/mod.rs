//! Curve synthesis from prescribed curvature and torsion, the Mannheim and
//! partner-torsion conditions as constructive equations, and rigid alignment.

mod align;
mod extract;
mod integrate;
mod profile;
mod torsion;

pub use align::{rigid_align, Alignment};
pub use extract::profile_from_curve;
pub use integrate::{integrate_frame, SynthesizedCurve, Synthesis};
pub use profile::{Branch, CurvatureProfile, CustomFn, FramePose, ProfileSpec, ScalarFn, ScalarSpec, TableFn};
pub use torsion::{
    kappa_from_mannheim_condition, partner_torsion_closed_form, partner_torsion_ode, pole_distance, BlowUp,
    TorsionSolution, CHECK_NODES, DEFAULT_BLOW_UP_CAP,
};
