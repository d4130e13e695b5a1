//! Salton cosine between citation patterns and the thresholded undirected edge set.

use serde::Serialize;
use thiserror::Error;

use crate::environment::{Environment, Mode};
use crate::num::Scalar;
use crate::store::JournalId;

/// Which vectors of the local matrix are compared.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Orientation {
    /// Rows: whom each journal cites.
    RowCiting,
    /// Columns: who cites each journal.
    ColumnCited,
}

impl Orientation {
    pub fn default_for(mode: Mode) -> Self {
        match mode {
            Mode::Citing => Orientation::RowCiting,
            Mode::Cited => Orientation::ColumnCited,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PatternVector<T> {
    pub owner: JournalId,
    pub orientation: Orientation,
    pub values: Vec<T>,
}

/// Pattern vectors for every member, diagonal cells included.
pub fn pattern_vectors<T: Scalar>(env: &Environment, orientation: Orientation) -> Vec<PatternVector<T>> {
    let n = env.len();
    (0..n)
        .map(|k| {
            let values = match orientation {
                Orientation::RowCiting => env.local.row(k).iter().map(|&c| T::from_count(c)).collect(),
                Orientation::ColumnCited => env.local.column(k).map(T::from_count).collect(),
            };
            PatternVector {
                owner: env.members[k].clone(),
                orientation,
                values,
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum SimilarityError {
    #[error("cosine undefined for a zero vector")]
    ZeroVector,
    #[error("vector lengths differ ({0} vs {1})")]
    LengthMismatch(usize, usize),
}

/// `Σ uᵢvᵢ / (‖u‖‖v‖)`, clamped to [0, 1].
pub fn cosine<T: Scalar>(u: &[T], v: &[T]) -> Result<T, SimilarityError> {
    if u.len() != v.len() {
        return Err(SimilarityError::LengthMismatch(u.len(), v.len()));
    }
    let mut dot = T::zero();
    let mut uu = T::zero();
    let mut vv = T::zero();
    for (&a, &b) in u.iter().zip(v) {
        dot = dot + a * b;
        uu = uu + a * a;
        vv = vv + b * b;
    }
    if uu == T::zero() || vv == T::zero() {
        return Err(SimilarityError::ZeroVector);
    }
    let mut norm = (uu * vv).sqrt();
    if !norm.is_finite() || norm == T::zero() {
        norm = uu.sqrt() * vv.sqrt();
    }
    let c = dot / norm;
    Ok(c.max(T::zero()).min(T::one()))
}

/// Symmetric member × member cosine matrix with unit diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct CosineMatrix<T> {
    labels: Vec<JournalId>,
    values: Vec<T>,
    zero_members: Vec<usize>,
}

impl<T: Scalar> CosineMatrix<T> {
    /// Computes all pairwise cosines. Pairs involving a zero vector get 0
    /// and are excluded from edges; those members are listed in
    /// [`zero_members`](Self::zero_members).
    pub fn from_vectors(labels: Vec<JournalId>, vectors: &[Vec<T>]) -> Self {
        let n = vectors.len();
        assert_eq!(labels.len(), n, "one label per vector");
        let mut values = vec![T::zero(); n * n];
        let zero_members: Vec<usize> = (0..n)
            .filter(|&i| vectors[i].iter().all(|&x| x == T::zero()))
            .collect();
        for i in 0..n {
            values[i * n + i] = T::one();
            for j in i + 1..n {
                let c = cosine(&vectors[i], &vectors[j]).unwrap_or(T::zero());
                values[i * n + j] = c;
                values[j * n + i] = c;
            }
        }
        CosineMatrix {
            labels,
            values,
            zero_members,
        }
    }

    /// Wraps precomputed values; `values` must be square and symmetric.
    pub fn from_values(labels: Vec<JournalId>, values: Vec<Vec<T>>) -> Self {
        let n = labels.len();
        assert!(values.len() == n && values.iter().all(|r| r.len() == n));
        CosineMatrix {
            labels,
            values: values.into_iter().flatten().collect(),
            zero_members: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[JournalId] {
        &self.labels
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.values[i * self.dim() + j]
    }

    pub fn zero_members(&self) -> &[usize] {
        &self.zero_members
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        let n = self.dim();
        (0..n).map(|i| self.values[i * n..(i + 1) * n].to_vec()).collect()
    }
}

/// Cosines among the environment's members for the given orientation.
pub fn pairwise_cosines<T: Scalar>(env: &Environment, orientation: Orientation) -> CosineMatrix<T> {
    let vectors: Vec<Vec<T>> = pattern_vectors(env, orientation)
        .into_iter()
        .map(|p| p.values)
        .collect();
    CosineMatrix::from_vectors(env.members.clone(), &vectors)
}

/// Undirected edge between two members, `a < b` by id.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimilarityEdge<T> {
    pub a: JournalId,
    pub b: JournalId,
    /// Positions of `a` and `b` in the member list.
    #[serde(skip)]
    pub a_index: usize,
    #[serde(skip)]
    pub b_index: usize,
    pub cosine: T,
}

/// One edge per unordered pair with cosine ≥ `min_cosine`, sorted by `(a, b)`.
pub fn threshold_edges<T: Scalar>(matrix: &CosineMatrix<T>, min_cosine: T) -> Vec<SimilarityEdge<T>> {
    let n = matrix.dim();
    let mut edges = Vec::new();
    for i in 0..n {
        if matrix.zero_members.contains(&i) {
            continue;
        }
        for j in i + 1..n {
            if matrix.zero_members.contains(&j) {
                continue;
            }
            let c = matrix.get(i, j);
            if c >= min_cosine {
                let (ai, bi) = if matrix.labels[i] <= matrix.labels[j] { (i, j) } else { (j, i) };
                edges.push(SimilarityEdge {
                    a: matrix.labels[ai].clone(),
                    b: matrix.labels[bi].clone(),
                    a_index: ai,
                    b_index: bi,
                    cosine: c,
                });
            }
        }
    }
    edges.sort_by(|x, y| (&x.a, &x.b).cmp(&(&y.a, &y.b)));
    edges
}
