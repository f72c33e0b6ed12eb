use std::collections::BTreeMap;

/// 1-based lattice coordinates of one basis site. One-dimensional families
/// use `row = 1`; the ladder uses `row ∈ {1, 2}` for its two legs; the
/// cylinder uses `row ∈ 1..=M_rows`, `col ∈ 1..=2·N_cells`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct SiteLabel {
    pub row: usize,
    pub col: usize,
}

/// Lattice connectivity kind, used to decide how hop attachment indexes wrap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Topology {
    /// Periodic one-dimensional chain (site 2N+1 ≡ site 1).
    Ring,
    /// Open one-dimensional chain.
    OpenChain,
    /// Two periodic legs.
    Ladder,
    /// Rows periodic, columns open.
    Cylinder,
    /// No spatial structure (the two-level system).
    Dot,
}

/// Bijection between matrix indices (0-based, internal) and lattice
/// coordinates (1-based, user-facing). The single source of truth for where
/// amplitude `i` of a state vector lives on the lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SiteMap {
    labels: Vec<SiteLabel>,
    reverse: BTreeMap<(usize, usize), usize>,
    topology: Topology,
}

impl SiteMap {
    fn from_labels(labels: Vec<SiteLabel>, topology: Topology) -> Self {
        let reverse = labels
            .iter()
            .enumerate()
            .map(|(i, l)| ((l.row, l.col), i))
            .collect();
        Self { labels, reverse, topology }
    }

    /// Sites 1..=n in a single row.
    pub fn chain(n: usize, topology: Topology) -> Self {
        let labels = (1..=n).map(|col| SiteLabel { row: 1, col }).collect();
        Self::from_labels(labels, topology)
    }

    /// Ladder layout: rung j (1-based) occupies indices 2(j−1) for leg `row 1`
    /// and 2(j−1)+1 for leg `row 2`.
    pub fn ladder(n_rungs: usize) -> Self {
        let mut labels = Vec::with_capacity(2 * n_rungs);
        for j in 1..=n_rungs {
            labels.push(SiteLabel { row: 1, col: j });
            labels.push(SiteLabel { row: 2, col: j });
        }
        Self::from_labels(labels, Topology::Ladder)
    }

    /// Row-major grid: index = (row−1)·cols + (col−1).
    pub fn grid(rows: usize, cols: usize, topology: Topology) -> Self {
        let mut labels = Vec::with_capacity(rows * cols);
        for row in 1..=rows {
            for col in 1..=cols {
                labels.push(SiteLabel { row, col });
            }
        }
        Self::from_labels(labels, topology)
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn topology(&self) -> Topology {
        self.topology
    }

    pub fn label(&self, index: usize) -> SiteLabel {
        self.labels[index]
    }

    pub fn index_of(&self, row: usize, col: usize) -> Option<usize> {
        self.reverse.get(&(row, col)).copied()
    }
}
