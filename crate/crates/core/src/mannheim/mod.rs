//! Mannheim partners and conjugates: construction, verification and
//! classification.
//!
//! A pair `(φ, ψ)` satisfies `ψ = φ + c n_φ` with `n_φ = ε b_ψ`;
//! equivalently `φ = ψ + a b_ψ` with `a = -εc`.

mod classify;
mod offset;
mod pair;
mod residuals;
mod verify;

pub use classify::{classify_fm, is_generalized_helix, planar_fm_conjugate, FmClass, PlanarConjugate, CLASSIFY_NODES};
pub use offset::{OffsetCurve, OffsetDirection};
pub use pair::{construct_conjugate, construct_partner, Correspondence, MannheimPair, PairSample, Side, CORRESPONDENCE_TOL};
pub use residuals::{derivative5, mannheim_residual, partner_residual, RESIDUAL_NODES};
pub use verify::{correspondence_table, verify_pair, AngleResiduals, Check, CorrespondenceRow, PairReport, SPEED_THRESHOLD};
