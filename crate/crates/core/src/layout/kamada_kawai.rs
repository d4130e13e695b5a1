//! Kamada-Kawai spring layout.
//!
//! Every pair of nodes is joined by a spring whose rest length is
//! proportional to their graph distance `d` and whose stiffness falls off as
//! `1/d²`. Energy `E = Σ_{i<j} ½·k·(‖pᵢ − pⱼ‖ − l)²` is reduced one node at a
//! time: the node with the largest gradient is moved by a Newton step on its
//! own 2×2 system.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::distance::DistanceMatrix;
use crate::error::{Error, Result};
use crate::num::Scalar;

pub type Point<T> = [T; 2];

#[derive(Debug, Clone, PartialEq)]
pub struct SpringSystem<T> {
    n: usize,
    distances: DistanceMatrix<T>,
    /// Rest lengths `L·d`; zero where `d` is infinite.
    lengths: Vec<T>,
    /// Strengths `K/d²`; zero where `d` is infinite.
    strengths: Vec<T>,
    length_unit: T,
}

impl<T: Scalar> SpringSystem<T> {
    pub fn new(distances: DistanceMatrix<T>, length_unit: T, strength: T) -> Self {
        let n = distances.dim();
        let mut lengths = vec![T::zero(); n * n];
        let mut strengths = vec![T::zero(); n * n];
        for i in 0..n {
            for j in 0..n {
                let d = distances.get(i, j);
                if i != j && d.is_finite() && d > T::zero() {
                    lengths[i * n + j] = length_unit * d;
                    strengths[i * n + j] = strength / (d * d);
                }
            }
        }
        SpringSystem {
            n,
            distances,
            lengths,
            strengths,
            length_unit,
        }
    }

    /// Picks `L` so the longest finite graph distance maps to `diameter`.
    pub fn with_diameter(distances: DistanceMatrix<T>, diameter: T, strength: T) -> Self {
        let max_d = distances.max_finite();
        let unit = if max_d > T::zero() { diameter / max_d } else { T::one() };
        Self::new(distances, unit, strength)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn distances(&self) -> &DistanceMatrix<T> {
        &self.distances
    }

    pub fn components(&self) -> &[Vec<usize>] {
        self.distances.components()
    }

    pub fn length_unit(&self) -> T {
        self.length_unit
    }

    pub fn rest_length(&self, i: usize, j: usize) -> T {
        self.lengths[i * self.n + j]
    }

    pub fn strength(&self, i: usize, j: usize) -> T {
        self.strengths[i * self.n + j]
    }

    /// Subsystem over `members` keeping this system's length unit.
    pub fn restrict(&self, members: &[usize]) -> Self {
        let n = members.len();
        let mut lengths = vec![T::zero(); n * n];
        let mut strengths = vec![T::zero(); n * n];
        for (a, &i) in members.iter().enumerate() {
            for (b, &j) in members.iter().enumerate() {
                lengths[a * n + b] = self.rest_length(i, j);
                strengths[a * n + b] = self.strength(i, j);
            }
        }
        SpringSystem {
            n,
            distances: self.distances.restrict(members),
            lengths,
            strengths,
            length_unit: self.length_unit,
        }
    }

    pub fn energy(&self, positions: &[Point<T>]) -> T {
        let half = T::lit(0.5);
        let mut e = T::zero();
        for i in 0..self.n {
            for j in i + 1..self.n {
                let k = self.strength(i, j);
                if k == T::zero() {
                    continue;
                }
                let dist = norm(sub(positions[i], positions[j]));
                let stretch = dist - self.rest_length(i, j);
                e = e + half * k * stretch * stretch;
            }
        }
        e
    }

    /// Terms of the energy that involve node `m` placed at `at`.
    fn node_energy(&self, positions: &[Point<T>], m: usize, at: Point<T>) -> T {
        let half = T::lit(0.5);
        let mut e = T::zero();
        for i in 0..self.n {
            let k = self.strength(m, i);
            if i == m || k == T::zero() {
                continue;
            }
            let stretch = norm(sub(at, positions[i])) - self.rest_length(m, i);
            e = e + half * k * stretch * stretch;
        }
        e
    }

    /// Contribution of spring `(m, i)` to `∂E/∂p_m` with `m` at `at`.
    fn pair_gradient(&self, m: usize, i: usize, at: Point<T>, other: Point<T>) -> Point<T> {
        let k = self.strength(m, i);
        if k == T::zero() {
            return [T::zero(), T::zero()];
        }
        let delta = sub(at, other);
        let dist = norm(delta);
        if dist == T::zero() {
            return [T::zero(), T::zero()];
        }
        let scale = k * (T::one() - self.rest_length(m, i) / dist);
        [scale * delta[0], scale * delta[1]]
    }

    pub fn node_gradient(&self, positions: &[Point<T>], m: usize) -> Point<T> {
        let mut g = [T::zero(), T::zero()];
        for i in 0..self.n {
            if i != m {
                let c = self.pair_gradient(m, i, positions[m], positions[i]);
                g = add(g, c);
            }
        }
        g
    }

    /// `∂E/∂p` for every node.
    pub fn gradient(&self, positions: &[Point<T>]) -> Vec<Point<T>> {
        (0..self.n).map(|m| self.node_gradient(positions, m)).collect()
    }

    /// Hessian block `[[∂²/∂x², ∂²/∂x∂y], [·, ∂²/∂y²]]` of node `m`.
    fn node_hessian(&self, positions: &[Point<T>], m: usize) -> (T, T, T) {
        let (mut xx, mut xy, mut yy) = (T::zero(), T::zero(), T::zero());
        for i in 0..self.n {
            let k = self.strength(m, i);
            if i == m || k == T::zero() {
                continue;
            }
            let [dx, dy] = sub(positions[m], positions[i]);
            let dist = norm([dx, dy]);
            if dist == T::zero() {
                continue;
            }
            let l = self.rest_length(m, i);
            let d3 = dist * dist * dist;
            xx = xx + k * (T::one() - l * dy * dy / d3);
            xy = xy + k * l * dx * dy / d3;
            yy = yy + k * (T::one() - l * dx * dx / d3);
        }
        (xx, xy, yy)
    }

    fn total_strength(&self, m: usize) -> T {
        (0..self.n).fold(T::zero(), |acc, i| acc + self.strength(m, i))
    }

    /// Circle of radius `L·max(d)/2` in node order with seeded jitter.
    pub fn initial_positions(&self, seed: u64) -> Vec<Point<T>> {
        let n = self.n;
        if n == 1 {
            return vec![[T::zero(), T::zero()]];
        }
        let radius = self.length_unit * self.distances.max_finite() * T::lit(0.5);
        let jitter = radius * T::lit(JITTER_FRACTION);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|i| {
                let angle = std::f64::consts::TAU * i as f64 / n as f64;
                let jx = T::lit(rng.gen_range(-1.0..1.0));
                let jy = T::lit(rng.gen_range(-1.0..1.0));
                [
                    radius * T::lit(angle.cos()) + jitter * jx,
                    radius * T::lit(angle.sin()) + jitter * jy,
                ]
            })
            .collect()
    }

    /// Uniform positions in the square of side `L·max(d)` around the origin.
    pub fn random_positions(&self, seed: u64) -> Vec<Point<T>> {
        let half = (self.length_unit * self.distances.max_finite() * T::lit(0.5)).as_f64();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..self.n)
            .map(|_| [T::lit(rng.gen_range(-half..=half)), T::lit(rng.gen_range(-half..=half))])
            .collect()
    }
}

const JITTER_FRACTION: f64 = 0.02;
const MAX_HALVINGS: usize = 60;

fn sub<T: Scalar>(a: Point<T>, b: Point<T>) -> Point<T> {
    [a[0] - b[0], a[1] - b[1]]
}

fn add<T: Scalar>(a: Point<T>, b: Point<T>) -> Point<T> {
    [a[0] + b[0], a[1] + b[1]]
}

fn norm<T: Scalar>(p: Point<T>) -> T {
    p[0].hypot(p[1])
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions<T> {
    pub seed: u64,
    /// Stop once every node's gradient norm is below this.
    pub tolerance: T,
    /// Node moves allowed per start; `None` means `1000·n`.
    pub max_outer: Option<usize>,
    /// Extra seeded random starts tried after the circle start; the
    /// lowest-energy result wins.
    pub restarts: usize,
}

impl<T: Scalar> Default for SolverOptions<T> {
    fn default() -> Self {
        SolverOptions {
            seed: 42,
            tolerance: T::lit(1e-4),
            max_outer: None,
            restarts: 16,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Layout<T> {
    pub positions: Vec<Point<T>>,
    pub final_max_gradient: T,
    pub iterations: usize,
    pub converged: bool,
}

/// Minimizes the spring energy of a connected system from the seeded circle
/// start and `options.restarts` seeded random starts, keeping the lowest energy.
pub fn kamada_kawai_solve<T: Scalar>(system: &SpringSystem<T>, options: &SolverOptions<T>) -> Result<Layout<T>> {
    if system.components().len() > 1 {
        return Err(Error::Consistency(format!(
            "spring system has {} components; solve each separately",
            system.components().len()
        )));
    }
    let mut best = kamada_kawai_from(system, system.initial_positions(options.seed), options)?;
    if system.len() <= 2 {
        return Ok(best);
    }
    let mut best_energy = system.energy(&best.positions);
    for k in 0..options.restarts {
        let start = system.random_positions(restart_seed(options.seed, k));
        let candidate = kamada_kawai_from(system, start, options)?;
        let energy = system.energy(&candidate.positions);
        if energy < best_energy {
            best = candidate;
            best_energy = energy;
        }
    }
    Ok(best)
}

fn restart_seed(seed: u64, k: usize) -> u64 {
    seed ^ (k as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Same as [`kamada_kawai_solve`] from caller-supplied starting positions.
pub fn kamada_kawai_from<T: Scalar>(
    system: &SpringSystem<T>,
    mut positions: Vec<Point<T>>,
    options: &SolverOptions<T>,
) -> Result<Layout<T>> {
    let n = system.len();
    assert_eq!(positions.len(), n, "one position per node");
    if n <= 1 {
        return Ok(Layout {
            positions,
            final_max_gradient: T::zero(),
            iterations: 0,
            converged: true,
        });
    }
    let max_outer = options.max_outer.unwrap_or(1000 * n);
    let mut grads = system.gradient(&positions);
    let mut iterations = 0;
    let mut since_refresh = 0;

    let fail = |message: &str, iteration: usize, positions: &[Point<T>]| Error::Numerical {
        message: message.to_string(),
        iteration,
        energy: system.energy(positions).as_f64(),
    };
    if !system.energy(&positions).is_finite() {
        return Err(fail("non-finite initial energy", 0, &positions));
    }

    loop {
        let (m, delta) = argmax_norm(&grads);
        if delta < options.tolerance {
            // Confirm against a fresh gradient before accepting convergence.
            grads = system.gradient(&positions);
            let (_, fresh) = argmax_norm(&grads);
            if fresh < options.tolerance {
                break;
            }
            continue;
        }
        if iterations >= max_outer {
            break;
        }

        let old = positions[m];
        let Some(new) = node_step(system, &positions, m, grads[m]) else {
            // No decrease found in any direction: numerically stationary.
            break;
        };
        if !(new[0].is_finite() && new[1].is_finite()) {
            return Err(fail("non-finite position", iterations, &positions));
        }
        positions[m] = new;
        iterations += 1;
        since_refresh += 1;

        if since_refresh >= n {
            grads = system.gradient(&positions);
            since_refresh = 0;
        } else {
            for (i, g) in grads.iter_mut().enumerate() {
                if i == m {
                    continue;
                }
                let before = system.pair_gradient(i, m, positions[i], old);
                let after = system.pair_gradient(i, m, positions[i], new);
                *g = add(sub(*g, before), after);
            }
            grads[m] = system.node_gradient(&positions, m);
        }
    }

    let grads = system.gradient(&positions);
    let (_, final_max_gradient) = argmax_norm(&grads);
    let energy = system.energy(&positions);
    if !energy.is_finite() {
        return Err(fail("non-finite final energy", iterations, &positions));
    }
    Ok(Layout {
        positions,
        final_max_gradient,
        iterations,
        converged: final_max_gradient < options.tolerance,
    })
}

fn argmax_norm<T: Scalar>(grads: &[Point<T>]) -> (usize, T) {
    let mut best = (0, T::zero());
    for (i, g) in grads.iter().enumerate() {
        let v = norm(*g);
        if v > best.1 || v.is_nan() {
            best = (i, v);
        }
    }
    best
}

/// Newton step for node `m`, falling back to a scaled gradient step when
/// the local Hessian is not positive definite. The step is halved until
/// the node's energy does not increase.
fn node_step<T: Scalar>(system: &SpringSystem<T>, positions: &[Point<T>], m: usize, grad: Point<T>) -> Option<Point<T>> {
    let at = positions[m];
    let current = system.node_energy(positions, m, at);
    let (xx, xy, yy) = system.node_hessian(positions, m);
    let det = xx * yy - xy * xy;

    let mut directions = Vec::with_capacity(2);
    if xx > T::zero() && det > T::zero() {
        let dx = -(yy * grad[0] - xy * grad[1]) / det;
        let dy = -(xx * grad[1] - xy * grad[0]) / det;
        directions.push([dx, dy]);
    }
    let total = system.total_strength(m);
    if total > T::zero() {
        directions.push([-grad[0] / total, -grad[1] / total]);
    }

    let half = T::lit(0.5);
    for mut step in directions {
        for _ in 0..MAX_HALVINGS {
            let candidate = add(at, step);
            let e = system.node_energy(positions, m, candidate);
            if e < current {
                return Some(candidate);
            }
            step = [step[0] * half, step[1] * half];
        }
    }
    None
}
