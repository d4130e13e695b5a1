//! Two-dimensional placement of an environment's cosine graph.

mod compose;
mod distance;
mod kamada_kawai;

pub use compose::{compose_components, ComponentLayout};
pub use distance::{all_pairs_distances, edge_distance, edge_distance_with_floor, DistanceMatrix, MIN_EDGE_DISTANCE};
pub use kamada_kawai::{kamada_kawai_from, kamada_kawai_solve, Layout, Point, SolverOptions, SpringSystem};

use crate::error::Result;
use crate::num::Scalar;
use crate::similarity::SimilarityEdge;

/// Layout diameter used to pick the spring length unit.
pub const DEFAULT_DIAMETER: f64 = 1000.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LayoutOptions<T> {
    pub solver: SolverOptions<T>,
    /// Longest graph distance maps to this many display units.
    pub diameter: T,
    /// Spring constant `K` in `k = K/d²`.
    pub strength: T,
    pub min_edge_distance: T,
}

impl<T: Scalar> Default for LayoutOptions<T> {
    fn default() -> Self {
        LayoutOptions {
            solver: SolverOptions::default(),
            diameter: T::lit(DEFAULT_DIAMETER),
            strength: T::one(),
            min_edge_distance: T::lit(MIN_EDGE_DISTANCE),
        }
    }
}

/// Solves each connected component and composes them; isolated members
/// go on the outer ring.
pub fn layout_graph<T: Scalar>(n: usize, edges: &[SimilarityEdge<T>], options: &LayoutOptions<T>) -> Result<Layout<T>> {
    let weighted: Vec<(usize, usize, T)> = edges
        .iter()
        .map(|e| (e.a_index, e.b_index, edge_distance_with_floor(e.cosine, options.min_edge_distance)))
        .collect();
    let distances = all_pairs_distances(n, &weighted);
    let system = SpringSystem::with_diameter(distances, options.diameter, options.strength);

    let mut solved = Vec::new();
    let mut isolated = Vec::new();
    for (k, members) in system.components().iter().enumerate() {
        if members.len() == 1 {
            isolated.push(members[0]);
            continue;
        }
        let sub = system.restrict(members);
        let solver = SolverOptions {
            seed: options.solver.seed.wrapping_add(k as u64),
            ..options.solver
        };
        solved.push(ComponentLayout {
            nodes: members.clone(),
            layout: kamada_kawai_solve(&sub, &solver)?,
        });
    }
    Ok(compose_components(n, &solved, &isolated, options.solver.seed, options.diameter))
}
