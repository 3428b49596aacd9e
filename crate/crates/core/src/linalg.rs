//! Exact linear algebra over the Gaussian rationals: dense rank/kernel and an
//! incremental sparse row reducer for large staircase computations.

use crate::num::GaussianRational;

/// Dense matrix rank by Gaussian elimination.
pub fn rank(rows: &[Vec<GaussianRational>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let ncols = rows[0].len();
    let mut m: Vec<Vec<GaussianRational>> = rows.to_vec();
    let mut r = 0usize;
    for c in 0..ncols {
        let pivot = (r..m.len()).find(|&i| !m[i][c].is_zero());
        let Some(p) = pivot else { continue };
        m.swap(r, p);
        let inv = m[r][c].inv().unwrap();
        for j in c..ncols {
            m[r][j] = &m[r][j] * &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..ncols {
                    let s = &m[r][j] * &f;
                    m[i][j] = &m[i][j] - &s;
                }
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

/// Basis of the right kernel `{x : M x = 0}` of a dense matrix.
pub fn kernel_basis(rows: &[Vec<GaussianRational>], ncols: usize) -> Vec<Vec<GaussianRational>> {
    let mut m: Vec<Vec<GaussianRational>> = rows
        .iter()
        .map(|r| {
            assert_eq!(r.len(), ncols);
            r.clone()
        })
        .collect();
    // Reduced row echelon form, tracking pivot columns.
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0usize;
    for c in 0..ncols {
        let pivot = (r..m.len()).find(|&i| !m[i][c].is_zero());
        let Some(p) = pivot else { continue };
        m.swap(r, p);
        let inv = m[r][c].inv().unwrap();
        for j in 0..ncols {
            m[r][j] = &m[r][j] * &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..ncols {
                    let s = &m[r][j] * &f;
                    m[i][j] = &m[i][j] - &s;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    let mut basis = Vec::new();
    for free in 0..ncols {
        if pivots.contains(&free) {
            continue;
        }
        let mut v = vec![GaussianRational::zero(); ncols];
        v[free] = GaussianRational::one();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = -&m[row][free];
        }
        basis.push(v);
    }
    basis
}

/// Solve `M x = b` exactly; returns one solution if the system is consistent.
pub fn solve(
    rows: &[Vec<GaussianRational>],
    b: &[GaussianRational],
) -> Option<Vec<GaussianRational>> {
    assert_eq!(rows.len(), b.len());
    if rows.is_empty() {
        return Some(Vec::new());
    }
    let ncols = rows[0].len();
    let mut m: Vec<Vec<GaussianRational>> = rows
        .iter()
        .zip(b)
        .map(|(r, bi)| {
            let mut row = r.clone();
            row.push(bi.clone());
            row
        })
        .collect();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0usize;
    for c in 0..ncols {
        let pivot = (r..m.len()).find(|&i| !m[i][c].is_zero());
        let Some(p) = pivot else { continue };
        m.swap(r, p);
        let inv = m[r][c].inv().unwrap();
        for j in 0..=ncols {
            m[r][j] = &m[r][j] * &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..=ncols {
                    let s = &m[r][j] * &f;
                    m[i][j] = &m[i][j] - &s;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    // Inconsistent if a zero row has nonzero rhs.
    for row in m.iter().skip(pivots.len()) {
        if row[..ncols].iter().all(|x| x.is_zero()) && !row[ncols].is_zero() {
            return None;
        }
    }
    let mut x = vec![GaussianRational::zero(); ncols];
    for (row, &pc) in pivots.iter().enumerate() {
        x[pc] = m[row][ncols].clone();
    }
    Some(x)
}

/// A sparse row: sorted `(column, coefficient)` pairs, coefficients nonzero.
pub type SparseRow = Vec<(usize, GaussianRational)>;

/// Incremental row-echelon accumulator keyed by leading column.
///
/// Rows are inserted one at a time and reduced against the current pivots;
/// a surviving nonzero row becomes a new pivot. Column order is the natural
/// `usize` order, so callers control the elimination priority by their column
/// numbering.
#[derive(Default)]
pub struct RowReducer {
    /// pivot column -> normalized row (leading coefficient 1).
    pivots: std::collections::BTreeMap<usize, SparseRow>,
}

impl RowReducer {
    pub fn new() -> Self {
        RowReducer { pivots: Default::default() }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots.keys().copied()
    }

    pub fn has_pivot(&self, col: usize) -> bool {
        self.pivots.contains_key(&col)
    }

    /// Reduce `row` against the pivots; if a nonzero residue remains, install
    /// it as a new pivot and return `true`.
    pub fn insert(&mut self, mut row: SparseRow) -> bool {
        loop {
            row.retain(|(_, c)| !c.is_zero());
            let Some(&(lead, _)) = row.first() else { return false };
            match self.pivots.get(&lead) {
                None => {
                    let inv = row[0].1.inv().unwrap();
                    for (_, c) in row.iter_mut() {
                        *c = &*c * &inv;
                    }
                    self.pivots.insert(lead, row);
                    return true;
                }
                Some(pivot) => {
                    let f = row[0].1.clone();
                    row = sub_scaled(&row, pivot, &f);
                }
            }
        }
    }

    /// Fully reduce a row without inserting; returns the residue.
    pub fn reduce(&self, row: &SparseRow) -> SparseRow {
        let mut row: SparseRow = row.iter().filter(|(_, c)| !c.is_zero()).cloned().collect();
        loop {
            let Some(&(lead, _)) = row.first() else { return row };
            match self.pivots.get(&lead) {
                None => return row,
                Some(pivot) => {
                    let f = row[0].1.clone();
                    row = sub_scaled(&row, pivot, &f);
                }
            }
        }
    }
}

/// `a - f * b` for sorted sparse rows.
fn sub_scaled(a: &SparseRow, b: &SparseRow, f: &GaussianRational) -> SparseRow {
    let mut out = SparseRow::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => {
                out.push(a[i].clone());
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                let c = -&(f * &b[j].1);
                if !c.is_zero() {
                    out.push((b[j].0, c));
                }
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                let s = f * &b[j].1;
                let c = &a[i].1 - &s;
                if !c.is_zero() {
                    out.push((a[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    for (col, c) in &b[j..] {
        let v = -&(f * c);
        if !v.is_zero() {
            out.push((*col, v));
        }
    }
    out
}
