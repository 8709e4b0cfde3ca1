//! Truncated Fock space in the word basis.
//!
//! The `n`-particle sector is spanned by the `(2j+1)ⁿ` words
//! `|(j₁,…,jₙ)⟩ = b†_{j₁}⋯b†_{jₙ}|0⟩`, enumerated lexicographically in the
//! projection. The basis is not orthogonal for `q ≠ 0`; the metric is the
//! Gram matrix.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;

use crate::algebra::{Deformation, OperatorPolynomial, Term};
use crate::error::Error;
use crate::linalg::{self, BlockOperator, OperatorMatrix};
use crate::mode::{JLevel, ModeIndex, Word};
use crate::scalar::{Real, Scalar};

/// Words of a fixed length over one level.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Sector {
    level: JLevel,
    n: usize,
}

impl Sector {
    pub fn new(level: JLevel, n: usize) -> Self {
        Sector { level, n }
    }

    pub fn particles(self) -> usize {
        self.n
    }

    pub fn level(self) -> JLevel {
        self.level
    }

    pub fn dim(self) -> usize {
        self.level.mode_count().pow(self.n as u32)
    }

    pub fn word(self, index: usize) -> Word {
        let d = self.level.mode_count();
        let mut modes = vec![ModeIndex::from_twice(0); self.n];
        let mut rest = index;
        for slot in modes.iter_mut().rev() {
            *slot = self.level.mode_at(rest % d);
            rest /= d;
        }
        Word(modes)
    }

    /// Position of `word` in the enumeration; panics on foreign modes.
    pub fn index(self, word: &[ModeIndex]) -> usize {
        debug_assert_eq!(word.len(), self.n);
        let d = self.level.mode_count();
        word.iter()
            .fold(0, |acc, m| acc * d + self.level.position(*m))
    }

    pub fn words(self) -> impl Iterator<Item = Word> {
        (0..self.dim()).map(move |i| self.word(i))
    }
}

/// Coefficients of a state in the word basis of one sector.
#[derive(Clone, Debug, PartialEq)]
pub struct FockVector<S> {
    pub sector: usize,
    pub coeffs: Vec<S>,
}

impl<S: Scalar> FockVector<S> {
    pub fn zero(space: &FockSpace<S>, n: usize) -> Self {
        FockVector {
            sector: n,
            coeffs: vec![S::zero(); space.sector(n).dim()],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }
}

/// `⟨w₁|w₂⟩ = Σ_σ q^{inv(σ)}` over bijections `σ` with `w₁[k] = w₂[σ(k)]`.
pub fn inner_product<S: Scalar>(w1: &[ModeIndex], w2: &[ModeIndex], q: &Deformation<S>) -> S {
    if w1.len() != w2.len() {
        return S::zero();
    }
    let mut a = w1.to_vec();
    let mut b = w2.to_vec();
    a.sort_unstable();
    b.sort_unstable();
    if a != b {
        return S::zero();
    }
    // Histogram of inversion counts, then Σ count·q^k.
    let mut counts = vec![0u64; w1.len() * w1.len() / 2 + 1];
    let mut used = vec![false; w1.len()];
    let mut image = Vec::with_capacity(w1.len());
    match_positions(w1, w2, &mut used, &mut image, 0, &mut counts);
    counts
        .iter()
        .enumerate()
        .filter(|(_, c)| **c > 0)
        .fold(S::zero(), |acc, (k, c)| {
            acc + S::from_integer(*c as i64) * q.pow(k as u32)
        })
}

fn match_positions(
    w1: &[ModeIndex],
    w2: &[ModeIndex],
    used: &mut [bool],
    image: &mut Vec<usize>,
    inversions: usize,
    counts: &mut [u64],
) {
    let k = image.len();
    if k == w1.len() {
        counts[inversions] += 1;
        return;
    }
    for j in 0..w2.len() {
        if used[j] || w2[j] != w1[k] {
            continue;
        }
        let added = image.iter().filter(|&&p| p > j).count();
        used[j] = true;
        image.push(j);
        match_positions(w1, w2, used, image, inversions + added, counts);
        image.pop();
        used[j] = false;
    }
}

/// Gram matrix of one sector.
#[derive(Clone, Debug, PartialEq)]
pub struct GramMatrix<S> {
    pub sector: usize,
    pub matrix: OperatorMatrix<S>,
}

impl<S: Scalar> GramMatrix<S> {
    /// Diagonal blocks: words grouped by their multiset of modes. Entries
    /// between different groups vanish.
    pub fn blocks(&self, space: &FockSpace<S>) -> Vec<(Vec<usize>, Vec<Vec<S>>)> {
        let sector = space.sector(self.sector);
        let mut groups: BTreeMap<Vec<ModeIndex>, Vec<usize>> = BTreeMap::new();
        for (i, w) in sector.words().enumerate() {
            groups.entry(w.content()).or_default().push(i);
        }
        groups
            .into_values()
            .map(|idx| {
                let block = idx
                    .iter()
                    .map(|&i| idx.iter().map(|&j| self.matrix.get(i, j)).collect())
                    .collect();
                (idx, block)
            })
            .collect()
    }
}

/// Outcome of a positivity check on one sector.
#[derive(Clone, Debug, PartialEq)]
pub struct PositivityReport {
    pub sector: usize,
    pub dimension: usize,
    pub rank: usize,
    /// Smallest eigenvalue, from a floating-point diagonalisation.
    pub min_eigenvalue: f64,
    pub positive_definite: bool,
}

/// Singular-value cut-off for float rank decisions, relative to the largest.
pub const FLOAT_RANK_THRESHOLD: f64 = 1e-10;

/// Fock space over one level, truncated at `n_max` particles, at fixed `q`.
#[derive(Clone, Debug)]
pub struct FockSpace<S> {
    level: JLevel,
    n_max: usize,
    q: Deformation<S>,
}

impl<S: Scalar> FockSpace<S> {
    pub fn new(level: JLevel, n_max: usize, q: Deformation<S>) -> Self {
        FockSpace { level, n_max, q }
    }

    pub fn level(&self) -> JLevel {
        self.level
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn q(&self) -> &Deformation<S> {
        &self.q
    }

    pub fn sector(&self, n: usize) -> Sector {
        Sector::new(self.level, n)
    }

    pub fn dims(&self) -> Vec<usize> {
        (0..=self.n_max).map(|n| self.sector(n).dim()).collect()
    }

    pub fn vacuum(&self) -> FockVector<S> {
        FockVector {
            sector: 0,
            coeffs: vec![S::one()],
        }
    }

    pub fn basis_vector(&self, word: &Word) -> Result<FockVector<S>, Error> {
        if word.len() > self.n_max {
            return Err(Error::Truncation {
                requested: word.len(),
                n_max: self.n_max,
            });
        }
        for m in word.modes() {
            self.level.check(*m)?;
        }
        let mut v = FockVector::zero(self, word.len());
        v.coeffs[self.sector(word.len()).index(word.modes())] = S::one();
        Ok(v)
    }

    /// `b†_m`: prepends `m` to every word.
    pub fn apply_creation(&self, m: ModeIndex, v: &FockVector<S>) -> Result<FockVector<S>, Error> {
        self.level.check(m)?;
        if v.sector >= self.n_max {
            return Err(Error::Truncation {
                requested: v.sector + 1,
                n_max: self.n_max,
            });
        }
        let m_mat = self.creation_matrix(m, v.sector);
        Ok(FockVector {
            sector: v.sector + 1,
            coeffs: m_mat.apply(&v.coeffs)?,
        })
    }

    /// `b_m (j₁,…,jₙ) = Σₖ q^{k−1} δ_{m,jₖ} (j₁,…,ĵₖ,…,jₙ)`; zero on the vacuum.
    pub fn apply_annihilation(
        &self,
        m: ModeIndex,
        v: &FockVector<S>,
    ) -> Result<FockVector<S>, Error> {
        self.level.check(m)?;
        if v.sector == 0 {
            // b_m|0⟩ = 0, reported in the vacuum sector.
            return Ok(FockVector::zero(self, 0));
        }
        let m_mat = self.annihilation_matrix(m, v.sector);
        Ok(FockVector {
            sector: v.sector - 1,
            coeffs: m_mat.apply(&v.coeffs)?,
        })
    }

    /// Matrix of `b†_m` from sector `n` to `n + 1` (no truncation check).
    pub fn creation_matrix(&self, m: ModeIndex, n: usize) -> OperatorMatrix<S> {
        let src = self.sector(n);
        let dst = self.sector(n + 1);
        let offset = self.level.position(m) * src.dim();
        let cols = (0..src.dim())
            .map(|i| {
                let mut c = BTreeMap::new();
                c.insert(offset + i, S::one());
                c
            })
            .collect();
        OperatorMatrix::from_columns(n, n + 1, dst.dim(), cols)
    }

    /// Matrix of `b_m` from sector `n ≥ 1` to `n − 1`.
    pub fn annihilation_matrix(&self, m: ModeIndex, n: usize) -> OperatorMatrix<S> {
        debug_assert!(n >= 1);
        let src = self.sector(n);
        let dst = self.sector(n - 1);
        let cols = src
            .words()
            .map(|w| {
                let mut c: BTreeMap<usize, S> = BTreeMap::new();
                for (k, jk) in w.modes().iter().enumerate() {
                    if *jk != m {
                        continue;
                    }
                    let mut rest = w.0.clone();
                    rest.remove(k);
                    let e = c.entry(dst.index(&rest)).or_insert_with(S::zero);
                    *e = e.clone() + self.q.pow(k as u32);
                }
                c
            })
            .collect();
        OperatorMatrix::from_columns(n, n - 1, dst.dim(), cols)
    }

    pub fn creation_operator(&self, m: ModeIndex) -> Result<BlockOperator<S>, Error> {
        self.level.check(m)?;
        let blocks = (0..self.n_max)
            .map(|n| (n, self.creation_matrix(m, n)))
            .collect();
        Ok(BlockOperator::new(1, self.dims(), blocks, BTreeSet::new()))
    }

    pub fn annihilation_operator(&self, m: ModeIndex) -> Result<BlockOperator<S>, Error> {
        self.level.check(m)?;
        let blocks = (1..=self.n_max)
            .map(|n| (n, self.annihilation_matrix(m, n)))
            .collect();
        Ok(BlockOperator::new(
            -1,
            self.dims(),
            blocks,
            core::iter::once(0).collect(),
        ))
    }

    pub fn identity_operator(&self) -> BlockOperator<S> {
        BlockOperator::identity(self.dims())
    }

    /// Matrix of a normal-ordered term on sector `n`; `None` when the term
    /// removes more particles than `n` holds (the term vanishes there).
    fn term_matrix(&self, term: &Term, n: usize) -> Result<Option<OperatorMatrix<S>>, Error> {
        if term.annihilators.len() > n {
            return Ok(None);
        }
        let mut m = OperatorMatrix::identity(n, self.sector(n).dim());
        let mut cur = n;
        for a in term.annihilators.iter().rev() {
            self.level.check(*a)?;
            m = self.annihilation_matrix(*a, cur).compose(&m)?;
            cur -= 1;
        }
        for c in term.creators.iter().rev() {
            self.level.check(*c)?;
            if cur >= self.n_max {
                return Err(Error::Truncation {
                    requested: cur + 1,
                    n_max: self.n_max,
                });
            }
            m = self.creation_matrix(*c, cur).compose(&m)?;
            cur += 1;
        }
        Ok(Some(m))
    }

    /// Matrix of `p` on the sector with `source` particles.
    pub fn operator_matrix(
        &self,
        p: &OperatorPolynomial<S>,
        source: usize,
    ) -> Result<OperatorMatrix<S>, Error> {
        let shift = if p.is_zero() {
            0
        } else {
            p.uniform_shift().ok_or(Error::NonUniformShift)?
        };
        let target = source as isize + shift;
        if target < 0 {
            return Err(Error::DimensionMismatch);
        }
        let target = target as usize;
        if target > self.n_max || source > self.n_max {
            return Err(Error::Truncation {
                requested: target.max(source),
                n_max: self.n_max,
            });
        }
        let mut out = OperatorMatrix::zeros(
            source,
            target,
            self.sector(target).dim(),
            self.sector(source).dim(),
        );
        for (term, c) in p.terms() {
            if let Some(m) = self.term_matrix(term, source)? {
                out = out.add(&m.scale(c))?;
            }
        }
        Ok(out)
    }

    /// `p` realised on every sector where the source, the target and every
    /// intermediate stage fit under `n_max`.
    pub fn block_operator(&self, p: &OperatorPolynomial<S>) -> Result<BlockOperator<S>, Error> {
        let shift = if p.is_zero() {
            0
        } else {
            p.uniform_shift().ok_or(Error::NonUniformShift)?
        };
        let peak = p
            .terms()
            .map(|(t, _)| t.creators.len() as isize - t.annihilators.len() as isize)
            .max()
            .unwrap_or(0)
            .max(0);
        let mut blocks = BTreeMap::new();
        let mut vanishing = BTreeSet::new();
        for n in 0..=self.n_max {
            let target = n as isize + shift;
            if target < 0 {
                vanishing.insert(n);
                continue;
            }
            if n as isize + peak > self.n_max as isize {
                continue;
            }
            blocks.insert(n, self.operator_matrix(p, n)?);
        }
        Ok(BlockOperator::new(shift, self.dims(), blocks, vanishing))
    }

    pub fn gram_matrix(&self, n: usize) -> GramMatrix<S> {
        let sector = self.sector(n);
        let words: Vec<Word> = sector.words().collect();
        let mut by_content: BTreeMap<Vec<ModeIndex>, Vec<usize>> = BTreeMap::new();
        for (i, w) in words.iter().enumerate() {
            by_content.entry(w.content()).or_default().push(i);
        }
        let mut cols: Vec<BTreeMap<usize, S>> = vec![BTreeMap::new(); words.len()];
        for idx in by_content.values() {
            for &j in idx {
                for &i in idx {
                    cols[j].insert(
                        i,
                        inner_product(words[i].modes(), words[j].modes(), &self.q),
                    );
                }
            }
        }
        GramMatrix {
            sector: n,
            matrix: OperatorMatrix::from_columns(n, n, words.len(), cols),
        }
    }
}

impl<S: Real> FockSpace<S> {
    /// Positivity of the Gram form on sector `n`.
    ///
    /// Exact scalars decide definiteness from `LDLᵀ` pivots and rank by
    /// elimination; float scalars use the eigenvalues with a relative
    /// cut-off of [`FLOAT_RANK_THRESHOLD`]. The smallest eigenvalue is always
    /// reported from an `f64` diagonalisation.
    pub fn check_positivity(&self, n: usize) -> PositivityReport {
        let gram = self.gram_matrix(n);
        let blocks = gram.blocks(self);
        let eigen: Vec<Vec<f64>> = blocks.iter().map(|(_, b)| block_eigenvalues(b)).collect();
        let min_eigenvalue = eigen
            .iter()
            .flatten()
            .copied()
            .fold(f64::INFINITY, f64::min);
        let max_abs = eigen.iter().flatten().map(|x| x.abs()).fold(0.0, f64::max);
        let dimension = self.sector(n).dim();
        let (rank, positive_definite) = if S::EXACT {
            let rank = blocks
                .iter()
                .map(|(_, b)| linalg::rank(b.clone(), &S::zero()))
                .sum();
            let pd = blocks.iter().all(|(_, b)| {
                linalg::ldl_pivots(b.clone()).is_some_and(|p| p.iter().all(|x| *x > S::zero()))
            });
            (rank, pd)
        } else {
            let cut = FLOAT_RANK_THRESHOLD * max_abs;
            let rank = eigen.iter().flatten().filter(|x| x.abs() > cut).count();
            (rank, rank == dimension && min_eigenvalue > 0.0)
        };
        PositivityReport {
            sector: n,
            dimension,
            rank,
            min_eigenvalue,
            positive_definite,
        }
    }
}

fn block_eigenvalues<S: Scalar>(block: &[Vec<S>]) -> Vec<f64> {
    let n = block.len();
    let m = DMatrix::from_fn(n, n, |i, j| block[i][j].to_f64());
    m.symmetric_eigen().eigenvalues.iter().copied().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::QuonAlgebra;
    use crate::scalar::{ratio, Rational};

    fn space(twice_j: u32, n_max: usize, q: Rational) -> FockSpace<Rational> {
        FockSpace::new(JLevel::new(twice_j), n_max, Deformation::new(q).unwrap())
    }

    fn w(t: &[i32]) -> Word {
        Word::from_twice(t)
    }

    #[test]
    fn creation_prepends() {
        let s = space(2, 3, ratio(1, 2));
        let v = s
            .apply_creation(ModeIndex::integer(1), &s.vacuum())
            .unwrap();
        assert_eq!(v, s.basis_vector(&w(&[2])).unwrap());
        let two = s.basis_vector(&Word(vec![ModeIndex::integer(0)])).unwrap();
        let out = s.apply_creation(ModeIndex::integer(1), &two).unwrap();
        assert_eq!(
            out,
            s.basis_vector(&Word(vec![ModeIndex::integer(1), ModeIndex::integer(0)]))
                .unwrap()
        );
    }

    #[test]
    fn creation_truncates() {
        let s = space(1, 1, ratio(0, 1));
        let v = s.basis_vector(&w(&[1])).unwrap();
        assert_eq!(
            s.apply_creation(ModeIndex::from_twice(1), &v),
            Err(Error::Truncation {
                requested: 2,
                n_max: 1
            })
        );
    }

    #[test]
    fn annihilation_examples() {
        let q = ratio(1, 3);
        let s = space(2, 3, q.clone());
        let one = ModeIndex::integer(1);
        let zero = ModeIndex::integer(0);
        // b_1 |(0,1)⟩ = q |(0)⟩
        let v = s.basis_vector(&Word(vec![zero, one])).unwrap();
        let out = s.apply_annihilation(one, &v).unwrap();
        let mut expected = s.basis_vector(&Word(vec![zero])).unwrap();
        expected.coeffs[s.sector(1).index(&[zero])] = q.clone();
        assert_eq!(out, expected);
        // b_m |(m,m)⟩ = (1+q) |(m)⟩
        let v = s.basis_vector(&Word(vec![one, one])).unwrap();
        let out = s.apply_annihilation(one, &v).unwrap();
        let mut expected = FockVector::zero(&s, 1);
        expected.coeffs[s.sector(1).index(&[one])] = ratio(1, 1) + q;
        assert_eq!(out, expected);
        // vacuum
        assert!(s.apply_annihilation(one, &s.vacuum()).unwrap().is_zero());
    }

    #[test]
    fn inner_product_examples() {
        let q = Deformation::new(ratio(2, 5)).unwrap();
        let a = [ModeIndex::integer(1), ModeIndex::integer(2)];
        let b = [ModeIndex::integer(2), ModeIndex::integer(1)];
        assert_eq!(inner_product(&a, &a, &q), ratio(1, 1));
        assert_eq!(inner_product(&a, &b, &q), ratio(2, 5));
        let mm = [ModeIndex::integer(1); 2];
        assert_eq!(inner_product(&mm, &mm, &q), ratio(7, 5));
        assert_eq!(inner_product(&a, &mm, &q), ratio(0, 1));
        assert_eq!(inner_product(&a[..1], &a, &q), ratio(0, 1));
        // three identical modes: [3]_q! = (1)(1+q)(1+q+q²)
        let mmm = [ModeIndex::integer(0); 3];
        let qq = ratio(2, 5);
        let expected = (ratio(1, 1) + qq.clone()) * (ratio(1, 1) + qq.clone() + qq.clone() * qq);
        assert_eq!(inner_product(&mmm, &mmm, &q), expected);
    }

    #[test]
    fn gram_at_q_zero_is_identity() {
        let s = space(2, 3, ratio(0, 1));
        for n in 0..=3 {
            let g = s.gram_matrix(n);
            assert_eq!(g.matrix, OperatorMatrix::identity(n, s.sector(n).dim()));
        }
    }

    #[test]
    fn positivity_examples() {
        let s = FockSpace::new(JLevel::new(1), 2, Deformation::new(0.5f64).unwrap());
        let r = s.check_positivity(2);
        assert!(r.positive_definite);
        assert!((r.min_eigenvalue - 0.5).abs() < 1e-12);

        let r = space(1, 2, ratio(1, 1)).check_positivity(2);
        assert_eq!((r.rank, r.dimension, r.positive_definite), (3, 4, false));
        let r = space(1, 2, ratio(-1, 1)).check_positivity(2);
        assert_eq!((r.rank, r.dimension, r.positive_definite), (1, 4, false));

        let f = FockSpace::new(JLevel::new(1), 2, Deformation::new(1.0f64).unwrap());
        assert_eq!(f.check_positivity(2).rank, 3);
        let f = FockSpace::new(JLevel::new(1), 2, Deformation::new(-1.0f64).unwrap());
        assert_eq!(f.check_positivity(2).rank, 1);
    }

    #[test]
    fn operator_matrix_examples() {
        let s = space(2, 3, ratio(1, 2));
        let alg = QuonAlgebra::new(s.q().clone());
        for n in 0..=3 {
            let id = s.operator_matrix(&OperatorPolynomial::one(), n).unwrap();
            assert_eq!(id, OperatorMatrix::identity(n, s.sector(n).dim()));
        }
        let m = ModeIndex::integer(0);
        let num = alg.multiply(
            &OperatorPolynomial::creation(m),
            &OperatorPolynomial::annihilation(m),
        );
        let mat = s.operator_matrix(&num, 1).unwrap();
        let k = s.sector(1).index(&[m]);
        for i in 0..3 {
            for j in 0..3 {
                let expected = if i == k && j == k {
                    ratio(1, 1)
                } else {
                    ratio(0, 1)
                };
                assert_eq!(mat.get(i, j), expected);
            }
        }
        assert_eq!(
            s.operator_matrix(&OperatorPolynomial::creation(m), 3),
            Err(Error::Truncation {
                requested: 4,
                n_max: 3
            })
        );
        let mixed = OperatorPolynomial::creation(m).add(&OperatorPolynomial::one());
        assert_eq!(s.operator_matrix(&mixed, 1), Err(Error::NonUniformShift));
    }
}
