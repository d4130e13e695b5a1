/// Dense square matrix of whole citation counts, rows citing, columns cited.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CountMatrix {
    n: usize,
    cells: Vec<u64>,
}

impl CountMatrix {
    pub fn zeros(n: usize) -> Self {
        CountMatrix {
            n,
            cells: vec![0; n * n],
        }
    }

    /// Builds from rows; every row must have `rows.len()` entries.
    pub fn from_rows(rows: &[Vec<u64>]) -> Option<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return None;
        }
        Some(CountMatrix {
            n,
            cells: rows.iter().flatten().copied().collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.cells[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: u64) {
        self.cells[i * self.n + j] = value;
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.cells[i * self.n..(i + 1) * self.n]
    }

    pub fn column(&self, j: usize) -> impl Iterator<Item = u64> + '_ {
        (0..self.n).map(move |i| self.get(i, j))
    }

    pub fn row_sum(&self, i: usize) -> u64 {
        self.row(i).iter().sum()
    }

    pub fn column_sum(&self, j: usize) -> u64 {
        self.column(j).sum()
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u64]> {
        self.cells.chunks(self.n.max(1)).take(self.n)
    }

    pub fn total(&self) -> u64 {
        self.cells.iter().sum()
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        self.rows().map(<[u64]>::to_vec).collect()
    }
}
