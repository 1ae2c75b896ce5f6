//! Decision procedures showing that permuting the values of a structured
//! problem can leave its problem class. Each procedure either returns an
//! instance realizing a table or a certificate that none exists.

mod max2sat;
mod semantics;
mod tsp;

pub use max2sat::{max2sat_realizable, max2sat_table, Clause, Literal, Max2SatInstance};
pub use semantics::{
    boolgp_objective, boolgp_realizable, duplicated_semantics_check, spheres_intersect, squared_distances,
    truth_table, SemanticsVerdict, SphereIntersection,
};
pub use tsp::{
    all_tours, tour_length, tour_space, tour_table, tsp_realizable, two_opt_neighbors, two_opt_neighbors_within,
    Tour, TourConstraint, TspInstance,
};

/// Every candidate in a finite search space was ruled out.
/// `examined == search_space` when the certificate is complete.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Exhaustion {
    pub examined: u128,
    pub search_space: u128,
}

impl Exhaustion {
    pub fn is_complete(&self) -> bool {
        self.examined == self.search_space
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Realizability<W, C = Exhaustion> {
    Realizable(W),
    Unrealizable(C),
}

impl<W, C> Realizability<W, C> {
    pub fn is_realizable(&self) -> bool {
        matches!(self, Realizability::Realizable(_))
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            Realizability::Realizable(w) => Some(w),
            Realizability::Unrealizable(_) => None,
        }
    }

    pub fn certificate(&self) -> Option<&C> {
        match self {
            Realizability::Realizable(_) => None,
            Realizability::Unrealizable(c) => Some(c),
        }
    }
}
