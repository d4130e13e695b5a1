use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::kamada_kawai::{Layout, Point};
use crate::num::Scalar;

/// A solved component: global node indices and its layout in the same order.
#[derive(Debug, Clone)]
pub struct ComponentLayout<T> {
    pub nodes: Vec<usize>,
    pub layout: Layout<T>,
}

/// Places solved components on a grid and isolated nodes on a ring around it.
///
/// A single component with no isolates is returned unchanged. Ring placement
/// starts at a seeded angle so the result is reproducible.
pub fn compose_components<T: Scalar>(
    n: usize,
    components: &[ComponentLayout<T>],
    isolated: &[usize],
    seed: u64,
    default_extent: T,
) -> Layout<T> {
    let mut positions = vec![[T::zero(), T::zero()]; n];
    let final_max_gradient = components
        .iter()
        .map(|c| c.layout.final_max_gradient)
        .fold(T::zero(), T::max);
    let iterations = components.iter().map(|c| c.layout.iterations).sum();
    let converged = components.iter().all(|c| c.layout.converged);

    if components.len() == 1 && isolated.is_empty() {
        for (&node, &p) in components[0].nodes.iter().zip(&components[0].layout.positions) {
            positions[node] = p;
        }
        return Layout {
            positions,
            final_max_gradient,
            iterations,
            converged,
        };
    }

    let boxes: Vec<(Point<T>, Point<T>)> = components.iter().map(|c| bounding_box(&c.layout.positions)).collect();
    let max_extent = boxes
        .iter()
        .map(|(lo, hi)| (hi[0] - lo[0]).max(hi[1] - lo[1]))
        .fold(T::zero(), T::max);
    let extent = if max_extent > T::zero() { max_extent } else { default_extent };
    let cell = extent * T::lit(1.2);
    let cols = (components.len() as f64).sqrt().ceil().max(1.0) as usize;

    for (k, (comp, (lo, hi))) in components.iter().zip(&boxes).enumerate() {
        let cell_center = [
            cell * T::lit((k % cols) as f64 + 0.5),
            -cell * T::lit((k / cols) as f64 + 0.5),
        ];
        let half = T::lit(0.5);
        let center = [(lo[0] + hi[0]) * half, (lo[1] + hi[1]) * half];
        for (&node, p) in comp.nodes.iter().zip(&comp.layout.positions) {
            positions[node] = [
                p[0] - center[0] + cell_center[0],
                p[1] - center[1] + cell_center[1],
            ];
        }
    }

    if !isolated.is_empty() {
        let placed: Vec<Point<T>> = components
            .iter()
            .flat_map(|c| c.nodes.iter().map(|&i| positions[i]))
            .collect();
        let (center, radius) = if placed.is_empty() {
            ([T::zero(), T::zero()], default_extent * T::lit(0.5))
        } else {
            let (lo, hi) = bounding_box(&placed);
            let half = T::lit(0.5);
            let center = [(lo[0] + hi[0]) * half, (lo[1] + hi[1]) * half];
            let half_diag = (hi[0] - lo[0]).hypot(hi[1] - lo[1]) * half;
            (center, half_diag + cell * T::lit(0.1))
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let offset: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let count = isolated.len();
        for (k, &node) in isolated.iter().enumerate() {
            let angle = offset + std::f64::consts::TAU * k as f64 / count as f64;
            positions[node] = [
                center[0] + radius * T::lit(angle.cos()),
                center[1] + radius * T::lit(angle.sin()),
            ];
        }
    }

    Layout {
        positions,
        final_max_gradient,
        iterations,
        converged,
    }
}

pub(crate) fn bounding_box<T: Scalar>(points: &[Point<T>]) -> (Point<T>, Point<T>) {
    let mut lo = [T::infinity(), T::infinity()];
    let mut hi = [T::neg_infinity(), T::neg_infinity()];
    for p in points {
        lo = [lo[0].min(p[0]), lo[1].min(p[1])];
        hi = [hi[0].max(p[0]), hi[1].max(p[1])];
    }
    if points.is_empty() {
        return ([T::zero(), T::zero()], [T::zero(), T::zero()]);
    }
    (lo, hi)
}
