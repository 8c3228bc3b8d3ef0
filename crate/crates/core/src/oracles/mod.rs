//! Independent reference computations, random inputs and identity checks.

mod identities;
mod laurent;
mod random;
mod states;

pub use identities::{check_identities, CheckOutcome, IdentityReport};
pub use laurent::LaurentPoly;
pub use random::{braid_closure, random_diagram, random_knot_diagram};
pub use states::{even_khovanov_f2, jones_unnormalized};

use crate::homology::{mod2_dimensions, BigradedGroups, GradedCounts};

/// Reduction of integral groups to GF(2) dimensions.
pub fn mod2_reduce(g: &BigradedGroups) -> GradedCounts {
    mod2_dimensions(g)
}

/// The Jones-type polynomial read off as the graded Euler characteristic
/// `Σ (-1)^h rank H^{h,q} q^q`.
pub fn euler_characteristic(g: &BigradedGroups) -> LaurentPoly {
    LaurentPoly::from_terms(g.graded_euler())
}
