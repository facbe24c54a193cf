//! Dense exact matrices over a [`Field`]: rank, kernels, row/column spans,
//! orthogonal complements, Kronecker products, and canonical enumeration of
//! r-dimensional subspaces of F^n.
//!
//! The bilinear index convention is fixed once and used everywhere: the
//! tensor coordinate of (i, j) with i in an n-sized factor and j in an
//! m-sized factor is `i*m + j` (0-based). Matrices reshape to vectors
//! row-major under the same rule.

use crate::error::{Error, Result};
use crate::gf::{FElem, Field};

/// A dense rows x cols matrix over a finite field, row-major, immutable in
/// spirit: mutation is confined to construction helpers.
#[derive(Clone, PartialEq, Eq)]
pub struct FMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<FElem>,
}

impl std::fmt::Debug for FMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "FMatrix {}x{} over {:?}", self.rows, self.cols, self.field)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| self.field.elem_to_string(self.get(i, j)))
                .collect();
            writeln!(f, "  [{}]", row.join(" "))?;
        }
        Ok(())
    }
}

impl FMatrix {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> FMatrix {
        FMatrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![FElem::ZERO; rows * cols],
        }
    }

    pub fn identity(field: &Field, n: usize) -> FMatrix {
        let mut m = FMatrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, FElem::ONE);
        }
        m
    }

    pub fn from_fn(field: &Field, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> FElem) -> FMatrix {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        FMatrix { field: field.clone(), rows, cols, data }
    }

    /// Builds from integer entries, each reduced into the field via its
    /// canonical index encoding.
    pub fn from_rows(field: &Field, rows: &[&[u64]]) -> FMatrix {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c);
            for &v in *row {
                data.push(field.elem(v));
            }
        }
        FMatrix { field: field.clone(), rows: r, cols: c, data }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> FElem {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: FElem) {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| e.is_zero())
    }

    pub fn transpose(&self) -> FMatrix {
        FMatrix::from_fn(&self.field, self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn mul(&self, other: &FMatrix) -> FMatrix {
        assert_eq!(self.field, other.field, "field mismatch in matrix product");
        assert_eq!(self.cols, other.rows, "shape mismatch in matrix product");
        let f = &self.field;
        let mut out = FMatrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = f.add(out.get(i, j), f.mul(a, other.get(l, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &FMatrix) -> FMatrix {
        assert_eq!(self.field, other.field);
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = &self.field;
        FMatrix::from_fn(f, self.rows, self.cols, |i, j| f.add(self.get(i, j), other.get(i, j)))
    }

    pub fn scale(&self, c: FElem) -> FMatrix {
        let f = &self.field;
        FMatrix::from_fn(f, self.rows, self.cols, |i, j| f.mul(c, self.get(i, j)))
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &FMatrix) -> FMatrix {
        assert_eq!(self.field, other.field);
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        FMatrix { field: self.field.clone(), rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Concatenates `self` with `other` side by side.
    pub fn hstack(&self, other: &FMatrix) -> FMatrix {
        assert_eq!(self.field, other.field);
        assert_eq!(self.rows, other.rows);
        FMatrix::from_fn(&self.field, self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j)
            } else {
                other.get(i, j - self.cols)
            }
        })
    }

    /// Flattens row-major into a 1 x (rows*cols) row vector, the fixed
    /// matrix-to-vector reshape.
    pub fn flatten_row(&self) -> FMatrix {
        FMatrix { field: self.field.clone(), rows: 1, cols: self.rows * self.cols, data: self.data.clone() }
    }

    /// Inverse reshape of [`FMatrix::flatten_row`].
    pub fn reshape(&self, rows: usize, cols: usize) -> FMatrix {
        assert_eq!(self.rows * self.cols, rows * cols);
        FMatrix { field: self.field.clone(), rows, cols, data: self.data.clone() }
    }

    /// Row rank via exact Gaussian elimination.
    pub fn rank(&self) -> usize {
        let mut work = self.clone();
        gaussian_rank(&mut work)
    }

    /// Reduced row echelon form (pivot columns leftmost, pivots 1, zeros
    /// above and below), the canonical representative of the row span.
    pub fn rref(&self) -> FMatrix {
        let mut work = self.clone();
        rref_in_place(&mut work);
        work
    }

    /// RREF with zero rows dropped: a canonical basis of the row span.
    pub fn row_basis(&self) -> FMatrix {
        let work = self.rref();
        let rank = (0..work.rows)
            .take_while(|&i| (0..work.cols).any(|j| !work.get(i, j).is_zero()))
            .count();
        FMatrix {
            field: work.field.clone(),
            rows: rank,
            cols: work.cols,
            data: work.data[..rank * work.cols].to_vec(),
        }
    }

    /// Basis of the right null space `{v : Mv = 0}`, one basis vector per
    /// column of the result (cols = self.cols - rank).
    pub fn kernel(&self) -> FMatrix {
        let f = &self.field;
        let mut work = self.clone();
        rref_in_place(&mut work);
        let mut pivot_cols = Vec::new();
        let mut row = 0;
        for j in 0..work.cols {
            if row < work.rows && work.get(row, j) == FElem::ONE && pivot_cols.len() == row {
                // confirm pivot: first nonzero of this row is at j
                let leading = (0..work.cols).find(|&c| !work.get(row, c).is_zero());
                if leading == Some(j) {
                    pivot_cols.push(j);
                    row += 1;
                }
            }
        }
        let rank = pivot_cols.len();
        let free_cols: Vec<usize> = (0..work.cols).filter(|c| !pivot_cols.contains(c)).collect();
        let mut basis = FMatrix::zeros(f, self.cols, free_cols.len());
        for (bi, &fc) in free_cols.iter().enumerate() {
            basis.set(fc, bi, FElem::ONE);
            for (ri, &pc) in pivot_cols.iter().enumerate().take(rank) {
                basis.set(pc, bi, f.neg(work.get(ri, fc)));
            }
        }
        #[cfg(debug_assertions)]
        {
            let check = self.mul(&basis);
            debug_assert!(check.is_zero(), "kernel columns must satisfy Mv = 0");
        }
        basis
    }

    /// Basis (as rows, in RREF) of the orthogonal complement of the row span
    /// of `self` under the standard bilinear dot product. Errors if the rows
    /// are dependent.
    pub fn orthogonal_complement(&self) -> Result<FMatrix> {
        if self.rank() != self.rows {
            return Err(Error::DependentRows);
        }
        Ok(self.complement_of_row_span())
    }

    /// Same as [`FMatrix::orthogonal_complement`] but of the row *span*, with
    /// no independence requirement.
    pub fn complement_of_row_span(&self) -> FMatrix {
        self.kernel().transpose().rref()
    }

    /// Kronecker product: for `self` n x r and `other` m x s the result is
    /// nm x rs with entry ((i,j),(a,b)) at (i*m+j, a*s+b) equal to
    /// self[i,a]*other[j,b].
    pub fn tensor(&self, other: &FMatrix) -> Result<FMatrix> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        let f = &self.field;
        let (n, r) = (self.rows, self.cols);
        let (m, s) = (other.rows, other.cols);
        let mut out = FMatrix::zeros(f, n * m, r * s);
        for i in 0..n {
            for a in 0..r {
                let v = self.get(i, a);
                if v.is_zero() {
                    continue;
                }
                for j in 0..m {
                    for b in 0..s {
                        out.set(i * m + j, a * s + b, f.mul(v, other.get(j, b)));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Writes the matrix file body (field header, dims, rows); see the file
    /// format in [`crate::io`].
    pub fn row_strings(&self) -> Vec<String> {
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| self.field.elem_to_string(self.get(i, j)))
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect()
    }
}

fn gaussian_rank(m: &mut FMatrix) -> usize {
    let f = m.field.clone();
    let mut rank = 0;
    for col in 0..m.cols {
        if rank == m.rows {
            break;
        }
        let pivot = (rank..m.rows).find(|&i| !m.get(i, col).is_zero());
        let Some(pivot) = pivot else { continue };
        if pivot != rank {
            for j in col..m.cols {
                let tmp = m.get(pivot, j);
                m.set(pivot, j, m.get(rank, j));
                m.set(rank, j, tmp);
            }
        }
        let inv = f.inv(m.get(rank, col)).expect("pivot nonzero");
        for j in col..m.cols {
            m.set(rank, j, f.mul(inv, m.get(rank, j)));
        }
        for i in rank + 1..m.rows {
            let factor = m.get(i, col);
            if factor.is_zero() {
                continue;
            }
            for j in col..m.cols {
                let v = f.sub(m.get(i, j), f.mul(factor, m.get(rank, j)));
                m.set(i, j, v);
            }
        }
        rank += 1;
    }
    rank
}

fn rref_in_place(m: &mut FMatrix) {
    let f = m.field.clone();
    let mut row = 0;
    for col in 0..m.cols {
        if row == m.rows {
            break;
        }
        let pivot = (row..m.rows).find(|&i| !m.get(i, col).is_zero());
        let Some(pivot) = pivot else { continue };
        if pivot != row {
            for j in 0..m.cols {
                let tmp = m.get(pivot, j);
                m.set(pivot, j, m.get(row, j));
                m.set(row, j, tmp);
            }
        }
        let inv = f.inv(m.get(row, col)).expect("pivot nonzero");
        for j in 0..m.cols {
            m.set(row, j, f.mul(inv, m.get(row, j)));
        }
        for i in 0..m.rows {
            if i == row {
                continue;
            }
            let factor = m.get(i, col);
            if factor.is_zero() {
                continue;
            }
            for j in 0..m.cols {
                let v = f.sub(m.get(i, j), f.mul(factor, m.get(row, j)));
                m.set(i, j, v);
            }
        }
        row += 1;
    }
}

/// Exact Gaussian binomial: the number of r-dimensional subspaces of F_q^n.
pub fn count_subspaces(field: &Field, n: usize, r: usize) -> Result<u128> {
    if r > n {
        return Err(Error::InvalidParams(format!("r={r} > n={n}")));
    }
    let q = field.q() as u128;
    let mut num = 1u128;
    let mut den = 1u128;
    for i in 0..r {
        num = num
            .checked_mul(q.pow((n - i) as u32) - 1)
            .ok_or_else(|| Error::InvalidParams("subspace count overflows u128".into()))?;
        den *= q.pow((i + 1) as u32) - 1;
        // keep intermediate products small; the running quotient is integral
        let g = gcd(num, den);
        num /= g;
        den /= g;
    }
    debug_assert_eq!(den, 1);
    Ok(num / den)
}

fn gcd(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Enumerates every r-dimensional subspace of F^n exactly once, as the unique
/// reduced-row-echelon-form basis matrix (r x n, rank r).
///
/// The order is deterministic: pivot-column sets in lexicographic order, and
/// within each set the free entries as a base-q odometer (last free position
/// fastest). Shards own disjoint index sub-ranges via [`SubspaceIter::range`].
pub struct SubspaceIter {
    field: Field,
    n: usize,
    r: usize,
    /// current pivot columns (0-based, strictly increasing); None when done
    pivots: Option<Vec<usize>>,
    /// free-slot positions (row, col) for the current pivot set
    free_slots: Vec<(usize, usize)>,
    /// odometer over free slots, values in [0, q), last slot fastest
    counters: Vec<u64>,
    /// whether the current odometer state has already been yielded
    consumed: bool,
    remaining: u128,
}

impl SubspaceIter {
    pub fn new(field: &Field, n: usize, r: usize) -> SubspaceIter {
        let total = count_subspaces(field, n, r).unwrap_or(0);
        let mut it = SubspaceIter::with_budget(field, n, r, total);
        it.reset_slots();
        it
    }

    /// Iterator over the index sub-range `start..end` of the canonical order.
    pub fn range(field: &Field, n: usize, r: usize, start: u128, end: u128) -> SubspaceIter {
        let mut it = SubspaceIter::with_budget(field, n, r, end.saturating_sub(start));
        it.reset_slots();
        it.skip_to(start);
        it
    }

    fn with_budget(field: &Field, n: usize, r: usize, remaining: u128) -> SubspaceIter {
        let pivots: Option<Vec<usize>> = if r <= n { Some((0..r).collect()) } else { None };
        SubspaceIter {
            field: field.clone(),
            n,
            r,
            pivots,
            free_slots: Vec::new(),
            counters: Vec::new(),
            consumed: false,
            remaining,
        }
    }

    fn reset_slots(&mut self) {
        self.free_slots.clear();
        if let Some(pivots) = &self.pivots {
            for (i, &pi) in pivots.iter().enumerate() {
                for j in pi + 1..self.n {
                    if !pivots.contains(&j) {
                        self.free_slots.push((i, j));
                    }
                }
            }
        }
        self.counters = vec![0; self.free_slots.len()];
        self.consumed = false;
    }

    fn block_size(&self) -> u128 {
        (self.field.q() as u128).pow(self.free_slots.len() as u32)
    }

    fn advance_pivots(&mut self) -> bool {
        let Some(pivots) = &mut self.pivots else { return false };
        let (r, n) = (self.r, self.n);
        if r == 0 {
            self.pivots = None;
            return false;
        }
        // next r-combination of {0..n-1} in lexicographic order
        let mut i = r;
        loop {
            if i == 0 {
                self.pivots = None;
                return false;
            }
            i -= 1;
            if pivots[i] < n - (r - i) {
                pivots[i] += 1;
                for j in i + 1..r {
                    pivots[j] = pivots[j - 1] + 1;
                }
                break;
            }
        }
        self.reset_slots();
        true
    }

    fn skip_to(&mut self, mut index: u128) {
        while self.pivots.is_some() {
            let block = self.block_size();
            if index < block {
                let q = self.field.q() as u128;
                let mut rem = index;
                for c in self.counters.iter_mut().rev() {
                    *c = (rem % q) as u64;
                    rem /= q;
                }
                self.consumed = false;
                return;
            }
            index -= block;
            if !self.advance_pivots() {
                return;
            }
        }
    }

    fn bump(&mut self) -> bool {
        let q = self.field.q();
        for c in self.counters.iter_mut().rev() {
            *c += 1;
            if *c < q {
                return true;
            }
            *c = 0;
        }
        false
    }

    fn materialize(&self) -> FMatrix {
        let pivots = self.pivots.as_ref().expect("active pivot set");
        let mut m = FMatrix::zeros(&self.field, self.r, self.n);
        for (i, &pi) in pivots.iter().enumerate() {
            m.set(i, pi, FElem::ONE);
        }
        for (slot, &(i, j)) in self.free_slots.iter().enumerate() {
            m.set(i, j, self.field.elem(self.counters[slot]));
        }
        m
    }
}

impl Iterator for SubspaceIter {
    type Item = FMatrix;

    fn next(&mut self) -> Option<FMatrix> {
        if self.remaining == 0 {
            return None;
        }
        self.pivots.as_ref()?;
        if self.consumed && !self.bump() && !self.advance_pivots() {
            return None;
        }
        self.consumed = true;
        self.remaining -= 1;
        Some(self.materialize())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_examples() {
        let f5 = Field::new(5, 1).unwrap();
        assert_eq!(FMatrix::identity(&f5, 3).rank(), 3);
        let f2 = Field::new(2, 1).unwrap();
        assert_eq!(FMatrix::zeros(&f2, 2, 4).rank(), 0);
        let m = FMatrix::from_rows(&f2, &[&[1, 1], &[1, 1]]);
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn kernel_examples() {
        let f3 = Field::new(3, 1).unwrap();
        assert_eq!(FMatrix::identity(&f3, 4).kernel().cols(), 0);
        let z = FMatrix::zeros(&f3, 2, 3);
        let k = z.kernel();
        assert_eq!(k.cols(), 3);
        assert_eq!(k.transpose().rank(), 3);
        let f2 = Field::new(2, 1).unwrap();
        let m = FMatrix::from_rows(&f2, &[&[1, 1, 0]]);
        let k = m.kernel();
        assert_eq!(k.cols(), 2);
        assert!(m.mul(&k).is_zero());
        // kernel contains (1,1,0) and (0,0,1) as a span
        let expected = FMatrix::from_rows(&f2, &[&[1, 1, 0], &[0, 0, 1]]).rref();
        assert_eq!(k.transpose().rref(), expected);
    }

    #[test]
    fn orthogonal_complement_examples() {
        let f2 = Field::new(2, 1).unwrap();
        let e1 = FMatrix::from_rows(&f2, &[&[1, 0, 0]]);
        let comp = e1.orthogonal_complement().unwrap();
        let expected = FMatrix::from_rows(&f2, &[&[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(comp, expected.rref());

        let full = FMatrix::identity(&f2, 3);
        assert_eq!(full.orthogonal_complement().unwrap().rows(), 0);

        let f3 = Field::new(3, 1).unwrap();
        let v = FMatrix::from_rows(&f3, &[&[1, 1]]);
        let comp = v.orthogonal_complement().unwrap();
        assert_eq!(comp, FMatrix::from_rows(&f3, &[&[1, 2]]));

        let dep = FMatrix::from_rows(&f3, &[&[1, 1], &[2, 2]]);
        assert!(matches!(dep.orthogonal_complement(), Err(Error::DependentRows)));
    }

    #[test]
    fn complement_dimension_and_involution() {
        for field in [Field::new(2, 1).unwrap(), Field::new(3, 1).unwrap()] {
            let n = if field.q() == 2 { 4 } else { 3 };
            for r in 0..=n {
                for basis in SubspaceIter::new(&field, n, r) {
                    let comp = basis.orthogonal_complement().unwrap();
                    assert_eq!(comp.rows(), n - r);
                    // every row orthogonal to every row of the basis
                    for i in 0..comp.rows() {
                        for bi in 0..basis.rows() {
                            let mut dot = FElem::ZERO;
                            for j in 0..n {
                                dot = field.add(dot, field.mul(comp.get(i, j), basis.get(bi, j)));
                            }
                            assert!(dot.is_zero());
                        }
                    }
                    let back = comp.complement_of_row_span();
                    assert_eq!(back, basis.rref());
                }
            }
        }
    }

    #[test]
    fn tensor_examples() {
        let f2 = Field::new(2, 1).unwrap();
        // e1 (x) e1 with n=m=2 lands on the first coordinate of F^4
        let e1 = FMatrix::from_rows(&f2, &[&[1], &[0]]);
        let t = e1.tensor(&e1).unwrap();
        assert_eq!(t, FMatrix::from_rows(&f2, &[&[1], &[0], &[0], &[0]]));

        let a = FMatrix::from_rows(&f2, &[&[1, 1], &[0, 1]]);
        let b = FMatrix::from_rows(&f2, &[&[1], &[1]]);
        let ab = a.tensor(&b).unwrap();
        assert_eq!(ab, FMatrix::from_rows(&f2, &[&[1, 1], &[1, 1], &[0, 1], &[0, 1]]));

        let f3 = Field::new(3, 1).unwrap();
        let c = FMatrix::identity(&f3, 2);
        assert!(matches!(a.tensor(&c), Err(Error::FieldMismatch)));
    }

    #[test]
    fn tensor_rank_multiplies_exhaustively_f2() {
        // all shapes up to 3x3 over F_2
        let f2 = Field::new(2, 1).unwrap();
        let mut shapes = Vec::new();
        for r in 1..=3usize {
            for c in 1..=3usize {
                shapes.push((r, c));
            }
        }
        let enumerate = |r: usize, c: usize| -> Vec<FMatrix> {
            let total = 1u64 << (r * c);
            (0..total)
                .map(|bits| {
                    FMatrix::from_fn(&f2, r, c, |i, j| {
                        if bits >> (i * c + j) & 1 == 1 {
                            FElem::ONE
                        } else {
                            FElem::ZERO
                        }
                    })
                })
                .collect()
        };
        for &(ra, ca) in &shapes {
            let mats_a = enumerate(ra, ca);
            for &(rb, cb) in &shapes {
                if ra * ca + rb * cb > 13 {
                    continue; // keep the exhaustive sweep around a quarter-billion ops
                }
                let mats_b = enumerate(rb, cb);
                for a in &mats_a {
                    let rank_a = a.rank();
                    for b in &mats_b {
                        let t = a.tensor(b).unwrap();
                        assert_eq!(t.rank(), rank_a * b.rank());
                    }
                }
            }
        }
        // and the large square case with a fixed rank-graded sample
        let mats = enumerate(3, 3);
        for a in mats.iter().step_by(7) {
            for b in mats.iter().step_by(11) {
                let t = a.tensor(b).unwrap();
                assert_eq!(t.rank(), a.rank() * b.rank());
            }
        }
    }

    #[test]
    fn count_subspaces_examples() {
        let f2 = Field::new(2, 1).unwrap();
        assert_eq!(count_subspaces(&f2, 4, 2).unwrap(), 35);
        assert_eq!(count_subspaces(&f2, 3, 1).unwrap(), 7);
        let f7 = Field::new(7, 1).unwrap();
        assert_eq!(count_subspaces(&f7, 5, 0).unwrap(), 1);
        assert!(count_subspaces(&f7, 3, 4).is_err());
    }

    #[test]
    fn count_subspaces_matches_brute_force_f2_4_2() {
        // oracle: enumerate all 2x4 matrices over F_2, keep those that are in
        // RREF with rank 2, count them
        let f2 = Field::new(2, 1).unwrap();
        let mut count = 0u32;
        for bits in 0..(1u32 << 8) {
            let m = FMatrix::from_fn(&f2, 2, 4, |i, j| {
                if bits >> (i * 4 + j) & 1 == 1 {
                    FElem::ONE
                } else {
                    FElem::ZERO
                }
            });
            if m.rank() == 2 && m == m.rref() {
                count += 1;
            }
        }
        assert_eq!(count, 35);
        assert_eq!(count_subspaces(&f2, 4, 2).unwrap(), 35);
    }

    #[test]
    fn subspace_iter_f2_4_2() {
        let f2 = Field::new(2, 1).unwrap();
        let all: Vec<FMatrix> = SubspaceIter::new(&f2, 4, 2).collect();
        assert_eq!(all.len(), 35);
        for m in &all {
            assert_eq!(m.rank(), 2);
            assert_eq!(m, &m.rref());
        }
        for i in 0..all.len() {
            for j in i + 1..all.len() {
                assert_ne!(all[i], all[j]);
            }
        }
    }

    #[test]
    fn subspace_iter_ranges_cover_whole_enumeration() {
        let f3 = Field::new(3, 1).unwrap();
        let total = count_subspaces(&f3, 4, 2).unwrap();
        let all: Vec<FMatrix> = SubspaceIter::new(&f3, 4, 2).collect();
        assert_eq!(all.len() as u128, total);
        let mid = total / 3;
        let mut pieced: Vec<FMatrix> = SubspaceIter::range(&f3, 4, 2, 0, mid).collect();
        pieced.extend(SubspaceIter::range(&f3, 4, 2, mid, 2 * mid));
        pieced.extend(SubspaceIter::range(&f3, 4, 2, 2 * mid, total));
        assert_eq!(pieced, all);
    }

    #[test]
    fn rank_product_bound_sampled() {
        use rand::{Rng, SeedableRng};
        let f5 = Field::new(5, 1).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let e = FMatrix::from_fn(&f5, 3, 4, |_, _| f5.elem(rng.gen_range(0..5)));
            let m = FMatrix::from_fn(&f5, 4, 2, |_, _| f5.elem(rng.gen_range(0..5)));
            assert!(e.mul(&m).rank() <= e.rank().min(m.rank()));
        }
    }
}
