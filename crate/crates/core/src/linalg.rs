//! Exact dense linear algebra over the scalar layer.
//!
//! Everything reduces to the reduced row echelon form, which is unique per
//! row space and therefore doubles as a canonical subspace representation:
//! two subspaces are equal iff their RREF rows are identical. Over Q, pivots
//! are chosen by smallest numerator/denominator bit size to keep coefficient
//! growth down on large eliminations.

use crate::scalar::{Field, FieldElem};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("ambient dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("operands over different fields")]
    MixedField,
}

/// A dense row-major matrix over an exact field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScalarMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    entries: Vec<FieldElem>,
}

impl ScalarMatrix {
    pub fn zero(field: Field, rows: usize, cols: usize) -> ScalarMatrix {
        ScalarMatrix {
            field,
            rows,
            cols,
            entries: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> ScalarMatrix {
        let mut m = ScalarMatrix::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(field: Field, cols: usize, rows: Vec<Vec<FieldElem>>) -> ScalarMatrix {
        let mut entries = Vec::with_capacity(rows.len() * cols);
        let n_rows = rows.len();
        for row in rows {
            assert_eq!(row.len(), cols, "ragged row");
            entries.extend(row);
        }
        ScalarMatrix {
            field,
            rows: n_rows,
            cols,
            entries,
        }
    }

    /// Builds a matrix column by column (the layout used for operator
    /// matrices, whose columns are images of basis elements).
    pub fn from_columns(
        field: Field,
        rows: usize,
        cols: usize,
        mut column: impl FnMut(usize) -> Vec<FieldElem>,
    ) -> ScalarMatrix {
        let mut m = ScalarMatrix::zero(field, rows, cols);
        for j in 0..cols {
            let col = column(j);
            assert_eq!(col.len(), rows, "ragged column");
            for (i, v) in col.into_iter().enumerate() {
                if !v.is_zero() {
                    m.set(i, j, v);
                }
            }
        }
        m
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &FieldElem {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: FieldElem) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[FieldElem] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<FieldElem>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn mat_vec(&self, v: &[FieldElem]) -> Vec<FieldElem> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        (0..self.rows)
            .map(|r| {
                let mut acc = self.field.zero();
                for (c, x) in v.iter().enumerate() {
                    if !x.is_zero() {
                        let e = self.get(r, c);
                        if !e.is_zero() {
                            acc = acc.add(&e.mul(x));
                        }
                    }
                }
                acc
            })
            .collect()
    }
}

/// In-place Gauss-Jordan elimination. Pivot search is limited to the first
/// `pivot_limit` columns (the rest ride along, which is how the solver keeps
/// its transform). Returns the pivot columns; rows are left sorted with all
/// non-pivot rows, zero up to `pivot_limit`, at the bottom.
/// `target -= factor * source`, skipping zero source entries.
fn eliminate(target: &mut [FieldElem], factor: &FieldElem, source: &[FieldElem]) {
    for (t, s) in target.iter_mut().zip(source) {
        if !s.is_zero() {
            *t = t.sub(&factor.mul(s));
        }
    }
}

fn rref_in_place(rows: &mut [Vec<FieldElem>], pivot_limit: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut next = 0usize;
    for col in 0..pivot_limit {
        let mut best: Option<(usize, u64)> = None;
        for (i, row) in rows.iter().enumerate().skip(next) {
            if !row[col].is_zero() {
                let size = row[col].pivot_size();
                if best.is_none_or(|(_, s)| size < s) {
                    best = Some((i, size));
                }
            }
        }
        let Some((chosen, _)) = best else { continue };
        rows.swap(next, chosen);
        if !rows[next][col].is_one() {
            let inv = rows[next][col].inv().expect("pivot is nonzero");
            for entry in rows[next][col..].iter_mut() {
                if !entry.is_zero() {
                    *entry = entry.mul(&inv);
                }
            }
        }
        let pivot_row = std::mem::take(&mut rows[next]);
        for (i, row) in rows.iter_mut().enumerate() {
            if i == next || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            eliminate(&mut row[col..], &factor, &pivot_row[col..]);
        }
        rows[next] = pivot_row;
        pivots.push(col);
        next += 1;
        if next == rows.len() {
            break;
        }
    }
    pivots
}

/// The canonical reduced-row-echelon basis of a subspace. Rows are in RREF
/// with strictly increasing pivot columns; equality of bases is equality of
/// subspaces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubspaceBasis {
    field: Field,
    ambient_dim: usize,
    rows: Vec<Vec<FieldElem>>,
    pivots: Vec<usize>,
}

impl SubspaceBasis {
    pub fn empty(field: Field, ambient_dim: usize) -> SubspaceBasis {
        SubspaceBasis {
            field,
            ambient_dim,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<FieldElem>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduces `v` against the basis in place, leaving the residual.
    fn reduce(&self, v: &mut [FieldElem]) {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let factor = v[p].clone();
            eliminate(&mut v[p..], &factor, &row[p..]);
        }
    }

    /// Adds a vector to the span, keeping the rows in canonical RREF.
    /// Returns true when the span grew.
    pub fn insert(&mut self, mut v: Vec<FieldElem>) -> bool {
        assert_eq!(v.len(), self.ambient_dim, "vector length mismatch");
        self.reduce(&mut v);
        let Some(lead) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        if !v[lead].is_one() {
            let inv = v[lead].inv().expect("leading entry is nonzero");
            for entry in v[lead..].iter_mut() {
                if !entry.is_zero() {
                    *entry = entry.mul(&inv);
                }
            }
        }
        for row in &mut self.rows {
            if row[lead].is_zero() {
                continue;
            }
            let factor = row[lead].clone();
            eliminate(&mut row[lead..], &factor, &v[lead..]);
        }
        let at = self.pivots.partition_point(|&p| p < lead);
        self.pivots.insert(at, lead);
        self.rows.insert(at, v);
        true
    }

    fn check_ambient(&self, other: &SubspaceBasis) -> Result<(), LinalgError> {
        if self.field != other.field {
            return Err(LinalgError::MixedField);
        }
        if self.ambient_dim != other.ambient_dim {
            return Err(LinalgError::DimensionMismatch {
                left: self.ambient_dim,
                right: other.ambient_dim,
            });
        }
        Ok(())
    }

    /// Membership: true iff `v` reduces to zero against the rows.
    pub fn contains(&self, v: &[FieldElem]) -> Result<bool, LinalgError> {
        if v.len() != self.ambient_dim {
            return Err(LinalgError::DimensionMismatch {
                left: self.ambient_dim,
                right: v.len(),
            });
        }
        let mut copy = v.to_vec();
        self.reduce(&mut copy);
        Ok(copy.iter().all(|x| x.is_zero()))
    }

    /// Subspace equality: identical canonical rows.
    pub fn equals(&self, other: &SubspaceBasis) -> Result<bool, LinalgError> {
        self.check_ambient(other)?;
        Ok(self.pivots == other.pivots && self.rows == other.rows)
    }

    /// Containment of whole subspaces.
    pub fn contains_subspace(&self, other: &SubspaceBasis) -> Result<bool, LinalgError> {
        self.check_ambient(other)?;
        for row in &other.rows {
            if !self.contains(row)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Canonical RREF of the row space of `m`.
pub fn rref(m: &ScalarMatrix) -> SubspaceBasis {
    let mut rows = m.row_vecs();
    let pivots = rref_in_place(&mut rows, m.cols());
    rows.truncate(pivots.len());
    SubspaceBasis {
        field: m.field(),
        ambient_dim: m.cols(),
        rows,
        pivots,
    }
}

/// Basis of the null space `{v : m v = 0}`. Every returned basis vector is
/// re-verified by multiplication before being handed out.
pub fn kernel(m: &ScalarMatrix) -> SubspaceBasis {
    let reduced = rref(m);
    let mut is_pivot = vec![false; m.cols()];
    for &p in reduced.pivots() {
        is_pivot[p] = true;
    }
    let mut basis = SubspaceBasis::empty(m.field(), m.cols());
    for free in 0..m.cols() {
        if is_pivot[free] {
            continue;
        }
        let mut v = vec![m.field().zero(); m.cols()];
        v[free] = m.field().one();
        for (row, &p) in reduced.rows().iter().zip(reduced.pivots()) {
            v[p] = row[free].neg();
        }
        let image = m.mat_vec(&v);
        assert!(
            image.iter().all(|x| x.is_zero()),
            "kernel vector failed re-verification"
        );
        basis.insert(v);
    }
    assert_eq!(basis.dim(), m.cols() - reduced.dim(), "rank-nullity violated");
    basis
}

/// A reusable solver for `m w = b` with many right-hand sides: row-reduces
/// `[m | I]`, recording the transform `T` with `T m = R`.
#[derive(Debug, Clone)]
pub struct LinearSolver {
    field: Field,
    rows: usize,
    cols: usize,
    rank: usize,
    pivots: Vec<usize>,
    /// `rows x (cols + rows)` reduced augmented matrix; the right block is
    /// the transform.
    augmented: Vec<Vec<FieldElem>>,
}

impl LinearSolver {
    pub fn new(m: &ScalarMatrix) -> LinearSolver {
        let field = m.field();
        let mut augmented: Vec<Vec<FieldElem>> = Vec::with_capacity(m.rows());
        for r in 0..m.rows() {
            let mut row = m.row(r).to_vec();
            row.extend((0..m.rows()).map(|i| {
                if i == r {
                    field.one()
                } else {
                    field.zero()
                }
            }));
            augmented.push(row);
        }
        let pivots = rref_in_place(&mut augmented, m.cols());
        LinearSolver {
            field,
            rows: m.rows(),
            cols: m.cols(),
            rank: pivots.len(),
            pivots,
            augmented,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// A particular solution with all free coordinates zero, or `None` when
    /// the system is inconsistent.
    pub fn solve(&self, rhs: &[FieldElem]) -> Option<Vec<FieldElem>> {
        assert_eq!(rhs.len(), self.rows, "right-hand side length mismatch");
        let transformed: Vec<FieldElem> = (0..self.rows)
            .map(|i| {
                let mut acc = self.field.zero();
                for (j, b) in rhs.iter().enumerate() {
                    if !b.is_zero() {
                        let t = &self.augmented[i][self.cols + j];
                        if !t.is_zero() {
                            acc = acc.add(&t.mul(b));
                        }
                    }
                }
                acc
            })
            .collect();
        if transformed[self.rank..].iter().any(|x| !x.is_zero()) {
            return None;
        }
        let mut solution = vec![self.field.zero(); self.cols];
        for (i, &p) in self.pivots.iter().enumerate() {
            solution[p] = transformed[i].clone();
        }
        Some(solution)
    }
}
