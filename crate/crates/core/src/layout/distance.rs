use crate::num::Scalar;

/// Shortest spring length a cosine edge may ask for.
pub const MIN_EDGE_DISTANCE: f64 = 1e-3;

/// Graph distance of a retained cosine edge: `max(1 − cosine, 1e-3)`.
pub fn edge_distance<T: Scalar>(cosine: T) -> T {
    edge_distance_with_floor(cosine, T::lit(MIN_EDGE_DISTANCE))
}

pub fn edge_distance_with_floor<T: Scalar>(cosine: T, floor: T) -> T {
    (T::one() - cosine).max(floor)
}

/// All-pairs shortest path lengths with the connected components they imply.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix<T> {
    n: usize,
    d: Vec<T>,
    components: Vec<Vec<usize>>,
}

impl<T: Scalar> DistanceMatrix<T> {
    /// Wraps a dense matrix; `T::infinity()` marks disconnected pairs.
    pub fn from_dense(rows: Vec<Vec<T>>) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "square distance matrix");
        let d: Vec<T> = rows.into_iter().flatten().collect();
        let components = components_of(n, |i, j| d[i * n + j].is_finite());
        DistanceMatrix { n, d, components }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.d[i * self.n + j]
    }

    /// Components ordered by smallest member, members ascending.
    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    /// Largest finite entry, 0 when there is none.
    pub fn max_finite(&self) -> T {
        self.d
            .iter()
            .copied()
            .filter(|x| x.is_finite())
            .fold(T::zero(), T::max)
    }

    /// Restriction to `members`, in the given order.
    pub fn restrict(&self, members: &[usize]) -> Self {
        let rows = members
            .iter()
            .map(|&i| members.iter().map(|&j| self.get(i, j)).collect())
            .collect();
        DistanceMatrix::from_dense(rows)
    }
}

fn components_of(n: usize, linked: impl Fn(usize, usize) -> bool) -> Vec<Vec<usize>> {
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut comp = vec![start];
        seen[start] = true;
        let mut k = 0;
        while k < comp.len() {
            let i = comp[k];
            for j in 0..n {
                if !seen[j] && linked(i, j) {
                    seen[j] = true;
                    comp.push(j);
                }
            }
            k += 1;
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Floyd-Warshall over undirected weighted edges `(i, j, length)`.
///
/// Lengths must be nonnegative. Parallel edges keep the shortest.
pub fn all_pairs_distances<T: Scalar>(n: usize, edges: &[(usize, usize, T)]) -> DistanceMatrix<T> {
    let inf = T::infinity();
    let mut d = vec![inf; n * n];
    for i in 0..n {
        d[i * n + i] = T::zero();
    }
    for &(i, j, w) in edges {
        if i == j {
            continue;
        }
        if w < d[i * n + j] {
            d[i * n + j] = w;
            d[j * n + i] = w;
        }
    }
    for k in 0..n {
        for i in 0..n {
            let dik = d[i * n + k];
            if !dik.is_finite() {
                continue;
            }
            for j in 0..n {
                let via = dik + d[k * n + j];
                if via < d[i * n + j] {
                    d[i * n + j] = via;
                }
            }
        }
    }
    let components = components_of(n, |i, j| d[i * n + j].is_finite());
    DistanceMatrix { n, d, components }
}
