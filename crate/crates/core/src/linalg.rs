//! Sparse operator matrices between particle-number sectors and small dense
//! elimination routines.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;
use crate::scalar::{Real, Scalar};

/// Column-sparse matrix mapping coefficients on sector `source` to
/// coefficients on sector `target`.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix<S> {
    source: usize,
    target: usize,
    rows: usize,
    /// Per column: `(row, value)` with strictly increasing rows and no zeros.
    columns: Vec<Vec<(usize, S)>>,
}

impl<S: Scalar> OperatorMatrix<S> {
    pub fn zeros(source: usize, target: usize, rows: usize, cols: usize) -> Self {
        OperatorMatrix {
            source,
            target,
            rows,
            columns: vec![Vec::new(); cols],
        }
    }

    pub fn identity(sector: usize, dim: usize) -> Self {
        let columns = (0..dim).map(|i| vec![(i, S::one())]).collect();
        OperatorMatrix {
            source: sector,
            target: sector,
            rows: dim,
            columns,
        }
    }

    /// Builds from per-column maps; zero entries are dropped.
    pub fn from_columns(
        source: usize,
        target: usize,
        rows: usize,
        cols: Vec<BTreeMap<usize, S>>,
    ) -> Self {
        let columns = cols
            .into_iter()
            .map(|c| c.into_iter().filter(|(_, v)| !v.is_zero()).collect())
            .collect();
        OperatorMatrix {
            source,
            target,
            rows,
            columns,
        }
    }

    pub fn source(&self) -> usize {
        self.source
    }
    pub fn target(&self) -> usize {
        self.target
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, j: usize) -> &[(usize, S)] {
        &self.columns[j]
    }

    pub fn get(&self, row: usize, col: usize) -> S {
        self.columns[col]
            .binary_search_by_key(&row, |(r, _)| *r)
            .map(|k| self.columns[col][k].1.clone())
            .unwrap_or_else(|_| S::zero())
    }

    pub fn nonzeros(&self) -> impl Iterator<Item = (usize, usize, &S)> {
        self.columns
            .iter()
            .enumerate()
            .flat_map(|(j, col)| col.iter().map(move |(i, v)| (*i, j, v)))
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    pub fn apply(&self, v: &[S]) -> Result<Vec<S>, Error> {
        if v.len() != self.cols() {
            return Err(Error::DimensionMismatch);
        }
        let mut out = vec![S::zero(); self.rows];
        for (j, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (i, a) in &self.columns[j] {
                out[*i] = out[*i].clone() + a.clone() * x.clone();
            }
        }
        Ok(out)
    }

    /// `self ∘ rhs`: apply `rhs` first.
    pub fn compose(&self, rhs: &Self) -> Result<Self, Error> {
        if rhs.rows != self.cols() || rhs.target != self.source {
            return Err(Error::DimensionMismatch);
        }
        let cols = rhs
            .columns
            .iter()
            .map(|col| {
                let mut acc: BTreeMap<usize, S> = BTreeMap::new();
                for (k, x) in col {
                    for (i, a) in &self.columns[*k] {
                        let e = acc.entry(*i).or_insert_with(S::zero);
                        *e = e.clone() + a.clone() * x.clone();
                    }
                }
                acc
            })
            .collect();
        Ok(Self::from_columns(rhs.source, self.target, self.rows, cols))
    }

    fn combine(&self, rhs: &Self, sign: S) -> Result<Self, Error> {
        if self.rows != rhs.rows
            || self.cols() != rhs.cols()
            || self.source != rhs.source
            || self.target != rhs.target
        {
            return Err(Error::DimensionMismatch);
        }
        let cols = self
            .columns
            .iter()
            .zip(&rhs.columns)
            .map(|(a, b)| {
                let mut acc: BTreeMap<usize, S> = a.iter().cloned().collect();
                for (i, v) in b {
                    let e = acc.entry(*i).or_insert_with(S::zero);
                    *e = e.clone() + sign.clone() * v.clone();
                }
                acc
            })
            .collect();
        Ok(Self::from_columns(
            self.source,
            self.target,
            self.rows,
            cols,
        ))
    }

    pub fn add(&self, rhs: &Self) -> Result<Self, Error> {
        self.combine(rhs, S::one())
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self, Error> {
        self.combine(rhs, -S::one())
    }

    pub fn scale(&self, s: &S) -> Self {
        let cols = self
            .columns
            .iter()
            .map(|c| c.iter().map(|(i, v)| (*i, v.clone() * s.clone())).collect())
            .collect();
        Self::from_columns(self.source, self.target, self.rows, cols)
    }

    pub fn transpose(&self) -> Self {
        let mut cols: Vec<BTreeMap<usize, S>> = vec![BTreeMap::new(); self.rows];
        for (i, j, v) in self.nonzeros() {
            cols[i].insert(j, v.clone());
        }
        Self::from_columns(self.target, self.source, self.cols(), cols)
    }

    pub fn frobenius_norm(&self) -> f64 {
        crate::scalar::norm(self.nonzeros().map(|(_, _, v)| v.clone()))
    }

    pub fn to_dense(&self) -> Vec<Vec<S>> {
        let mut out = vec![vec![S::zero(); self.cols()]; self.rows];
        for (i, j, v) in self.nonzeros() {
            out[i][j] = v.clone();
        }
        out
    }
}

/// An operator realised on every particle-number sector where it fits under
/// the truncation: one [`OperatorMatrix`] per source sector, all shifting the
/// particle number by the same amount.
///
/// Source sectors whose image would lie below the vacuum are kept in a
/// separate `vanishing` set: the operator is defined there and equals zero.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockOperator<S> {
    shift: isize,
    /// Dimension of each sector `0..=n_max`.
    dims: Vec<usize>,
    blocks: BTreeMap<usize, OperatorMatrix<S>>,
    vanishing: BTreeSet<usize>,
}

impl<S: Scalar> BlockOperator<S> {
    pub fn new(
        shift: isize,
        dims: Vec<usize>,
        blocks: BTreeMap<usize, OperatorMatrix<S>>,
        vanishing: BTreeSet<usize>,
    ) -> Self {
        BlockOperator {
            shift,
            dims,
            blocks,
            vanishing,
        }
    }

    /// The zero operator with the given shift on every admissible sector.
    pub fn zero(shift: isize, dims: Vec<usize>) -> Self {
        let mut blocks = BTreeMap::new();
        let mut vanishing = BTreeSet::new();
        for n in 0..dims.len() {
            let t = n as isize + shift;
            if t < 0 {
                vanishing.insert(n);
            } else if (t as usize) < dims.len() {
                blocks.insert(
                    n,
                    OperatorMatrix::zeros(n, t as usize, dims[t as usize], dims[n]),
                );
            }
        }
        BlockOperator {
            shift,
            dims,
            blocks,
            vanishing,
        }
    }

    pub fn identity(dims: Vec<usize>) -> Self {
        let blocks = dims
            .iter()
            .enumerate()
            .map(|(n, &d)| (n, OperatorMatrix::identity(n, d)))
            .collect();
        BlockOperator {
            shift: 0,
            dims,
            blocks,
            vanishing: BTreeSet::new(),
        }
    }

    pub fn shift(&self) -> isize {
        self.shift
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Source sectors on which the operator is defined, ascending.
    pub fn domain(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self
            .blocks
            .keys()
            .chain(self.vanishing.iter())
            .copied()
            .collect();
        d.sort_unstable();
        d
    }

    pub fn block(&self, source: usize) -> Option<&OperatorMatrix<S>> {
        self.blocks.get(&source)
    }

    /// Non-vanishing blocks keyed by source sector.
    pub fn blocks(&self) -> impl Iterator<Item = (usize, &OperatorMatrix<S>)> {
        self.blocks.iter().map(|(k, v)| (*k, v))
    }

    fn place(
        &self,
        n: usize,
        shift: isize,
        blocks: &mut BTreeMap<usize, OperatorMatrix<S>>,
        vanishing: &mut BTreeSet<usize>,
    ) {
        let t = n as isize + shift;
        if t < 0 {
            vanishing.insert(n);
        } else if (t as usize) < self.dims.len() {
            let t = t as usize;
            blocks.insert(n, OperatorMatrix::zeros(n, t, self.dims[t], self.dims[n]));
        }
    }

    /// `self ∘ rhs` on every sector where both factors are defined.
    pub fn compose(&self, rhs: &Self) -> Result<Self, Error> {
        if self.dims != rhs.dims {
            return Err(Error::DimensionMismatch);
        }
        let shift = self.shift + rhs.shift;
        let mut blocks = BTreeMap::new();
        let mut vanishing = BTreeSet::new();
        for n in &rhs.vanishing {
            self.place(*n, shift, &mut blocks, &mut vanishing);
        }
        for (n, r) in &rhs.blocks {
            if let Some(l) = self.blocks.get(&r.target()) {
                blocks.insert(*n, l.compose(r)?);
            } else if self.vanishing.contains(&r.target()) {
                self.place(*n, shift, &mut blocks, &mut vanishing);
            }
        }
        Ok(BlockOperator {
            shift,
            dims: self.dims.clone(),
            blocks,
            vanishing,
        })
    }

    fn combine(
        &self,
        rhs: &Self,
        f: impl Fn(&OperatorMatrix<S>, &OperatorMatrix<S>) -> Result<OperatorMatrix<S>, Error>,
    ) -> Result<Self, Error> {
        if self.shift != rhs.shift {
            return Err(Error::NonUniformShift);
        }
        if self.dims != rhs.dims {
            return Err(Error::DimensionMismatch);
        }
        let mut blocks = BTreeMap::new();
        for (n, a) in &self.blocks {
            if let Some(b) = rhs.blocks.get(n) {
                blocks.insert(*n, f(a, b)?);
            }
        }
        let vanishing = self
            .vanishing
            .intersection(&rhs.vanishing)
            .copied()
            .collect();
        Ok(BlockOperator {
            shift: self.shift,
            dims: self.dims.clone(),
            blocks,
            vanishing,
        })
    }

    /// Sum on the common domain.
    pub fn add(&self, rhs: &Self) -> Result<Self, Error> {
        self.combine(rhs, |a, b| a.add(b))
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self, Error> {
        self.combine(rhs, |a, b| a.sub(b))
    }

    pub fn scale(&self, s: &S) -> Self {
        BlockOperator {
            shift: self.shift,
            dims: self.dims.clone(),
            blocks: self.blocks.iter().map(|(n, m)| (*n, m.scale(s))).collect(),
            vanishing: self.vanishing.clone(),
        }
    }

    /// `[self, rhs]`.
    pub fn commutator(&self, rhs: &Self) -> Result<Self, Error> {
        self.compose(rhs)?.sub(&rhs.compose(self)?)
    }

    /// `self·rhs − q·rhs·self`.
    pub fn q_mutator(&self, rhs: &Self, q: &S) -> Result<Self, Error> {
        self.compose(rhs)?.sub(&rhs.compose(self)?.scale(q))
    }

    /// Restricts to source sectors `≤ max_source`.
    pub fn restrict(&self, max_source: usize) -> Self {
        BlockOperator {
            shift: self.shift,
            dims: self.dims.clone(),
            blocks: self
                .blocks
                .range(..=max_source)
                .map(|(k, v)| (*k, v.clone()))
                .collect(),
            vanishing: self.vanishing.range(..=max_source).copied().collect(),
        }
    }
}

/// Residual of one sector in an identity check.
#[derive(Clone, Debug, PartialEq)]
pub struct SectorResidual {
    pub sector: usize,
    /// `‖L − R‖_F / max(1, ‖L‖_F, ‖R‖_F)`.
    pub residual: f64,
    /// Every entry of `L − R` is exactly zero.
    pub exact_zero: bool,
}

/// Compares two block operators sector by sector on their common domain.
pub fn compare<S: Scalar>(
    lhs: &BlockOperator<S>,
    rhs: &BlockOperator<S>,
) -> Result<Vec<SectorResidual>, Error> {
    if lhs.shift() != rhs.shift() {
        return Err(Error::NonUniformShift);
    }
    let mut out = Vec::new();
    for (n, l) in lhs.blocks() {
        if let Some(r) = rhs.block(n) {
            let diff = l.sub(r)?;
            let scale = l.frobenius_norm().max(r.frobenius_norm()).max(1.0);
            out.push(SectorResidual {
                sector: n,
                residual: diff.frobenius_norm() / scale,
                exact_zero: diff.is_zero(),
            });
        }
    }
    if out.is_empty() {
        return Err(Error::EmptyDomain);
    }
    Ok(out)
}

/// Rank by Gaussian elimination with partial pivoting. Entries with
/// `|x| ≤ tol` count as zero (`tol = 0` for exact scalars).
pub fn rank<S: Real>(mut m: Vec<Vec<S>>, tol: &S) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let (p, best) = (r..rows)
            .map(|i| (i, m[i][c].abs()))
            .fold((r, S::zero()), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best <= *tol {
            continue;
        }
        m.swap(r, p);
        for i in r + 1..rows {
            if m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone() / m[r][c].clone();
            for k in c..cols {
                m[i][k] = m[i][k].clone() - f.clone() * m[r][k].clone();
            }
        }
        r += 1;
    }
    r
}

/// Pivots of the `LDLᵀ` factorisation without pivoting. A symmetric matrix
/// is positive definite iff all pivots exist and are positive; `None` when a
/// zero pivot stops the factorisation.
pub fn ldl_pivots<S: Real>(mut m: Vec<Vec<S>>) -> Option<Vec<S>> {
    let n = m.len();
    let mut pivots = Vec::with_capacity(n);
    for k in 0..n {
        let p = m[k][k].clone();
        if p.is_zero() {
            return None;
        }
        for i in k + 1..n {
            if m[i][k].is_zero() {
                continue;
            }
            let f = m[i][k].clone() / p.clone();
            for j in k..n {
                m[i][j] = m[i][j].clone() - f.clone() * m[k][j].clone();
            }
        }
        pivots.push(p);
    }
    Some(pivots)
}

/// Incrementally reduced row echelon form of an augmented system `A x = b`.
/// Rows are streamed in; only independent rows are kept.
#[derive(Clone, Debug)]
pub struct Echelon<S> {
    unknowns: usize,
    /// `(pivot column, row)`, each row normalised to pivot 1.
    rows: Vec<(usize, Vec<S>)>,
    inconsistent: bool,
    tol: S,
}

impl<S: Real> Echelon<S> {
    /// `tol` is relative to the largest entry of each incoming row, or
    /// absolute when that entry is below one.
    pub fn new(unknowns: usize, tol: S) -> Self {
        Echelon {
            unknowns,
            rows: Vec::new(),
            inconsistent: false,
            tol,
        }
    }

    /// Adds the equation `coeffs · x = rhs`.
    pub fn push(&mut self, coeffs: &[S], rhs: S) {
        debug_assert_eq!(coeffs.len(), self.unknowns);
        let mut row: Vec<S> = coeffs.to_vec();
        row.push(rhs);
        let scale = row
            .iter()
            .map(Real::abs)
            .fold(S::zero(), |a, b| if b > a { b } else { a });
        if scale.is_zero() {
            return;
        }
        let cutoff = if scale > S::one() {
            self.tol.clone() * scale
        } else {
            self.tol.clone()
        };
        for (p, basis) in &self.rows {
            let f = row[*p].clone();
            if f.is_zero() {
                continue;
            }
            for k in 0..row.len() {
                row[k] = row[k].clone() - f.clone() * basis[k].clone();
            }
        }
        let pivot = (0..self.unknowns).find(|&c| row[c].abs() > cutoff);
        match pivot {
            Some(p) => {
                let inv = S::one() / row[p].clone();
                for x in row.iter_mut() {
                    *x = x.clone() * inv.clone();
                }
                for (_, basis) in self.rows.iter_mut() {
                    let f = basis[p].clone();
                    if f.is_zero() {
                        continue;
                    }
                    for k in 0..basis.len() {
                        basis[k] = basis[k].clone() - f.clone() * row[k].clone();
                    }
                }
                self.rows.push((p, row));
            }
            None => {
                if row[self.unknowns].abs() > cutoff {
                    self.inconsistent = true;
                }
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_consistent(&self) -> bool {
        !self.inconsistent
    }

    /// A solution with all free variables set to zero.
    pub fn solution(&self) -> Option<Vec<S>> {
        if self.inconsistent {
            return None;
        }
        let mut x = vec![S::zero(); self.unknowns];
        for (p, row) in &self.rows {
            x[*p] = row[self.unknowns].clone();
        }
        Some(x)
    }
}
