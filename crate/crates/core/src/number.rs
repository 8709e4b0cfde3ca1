//! Transition number operators `N_{αβ}`.
//!
//! Two constructions are provided:
//!
//! - the direct one, from `[N_{αβ}, b†_μ] = δ_{βμ} b†_α` and `N_{αβ}|0⟩ = 0`:
//!   on a word, `N_{αβ}` replaces one occurrence of `β` by `α`, summed over
//!   positions, independently of `q`;
//! - the series `b†_α b_β + Σₙ Σ_{(i₁…iₙ)} Σ_π c_π (Y_{α π(i)})† Y_{β i}` with
//!   coefficients solved order by order against the direct action.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::{Deformation, OperatorPolynomial, QuonAlgebra};
use crate::check::{check_identity, Check, Tolerance};
use crate::error::Error;
use crate::fock::{FockSpace, FockVector};
use crate::linalg::{BlockOperator, Echelon, OperatorMatrix};
use crate::mode::{JLevel, ModeIndex, Word};
use crate::scalar::{Real, Scalar};

/// Matrix of the direct `N_{αβ}` on sector `n`.
pub fn direct_n_matrix<S: Scalar>(
    space: &FockSpace<S>,
    alpha: ModeIndex,
    beta: ModeIndex,
    n: usize,
) -> OperatorMatrix<S> {
    let sector = space.sector(n);
    let cols = sector
        .words()
        .map(|w| {
            let mut c: BTreeMap<usize, S> = BTreeMap::new();
            for (k, m) in w.modes().iter().enumerate() {
                if *m == beta {
                    let mut out = w.0.clone();
                    out[k] = alpha;
                    let e = c.entry(sector.index(&out)).or_insert_with(S::zero);
                    *e = e.clone() + S::one();
                }
            }
            c
        })
        .collect();
    OperatorMatrix::from_columns(n, n, sector.dim(), cols)
}

/// `N_{αβ}|v⟩` via the direct action.
pub fn apply_direct_n<S: Scalar>(
    space: &FockSpace<S>,
    alpha: ModeIndex,
    beta: ModeIndex,
    v: &FockVector<S>,
) -> Result<FockVector<S>, Error> {
    space.level().check(alpha)?;
    space.level().check(beta)?;
    let m = direct_n_matrix(space, alpha, beta, v.sector);
    Ok(FockVector {
        sector: v.sector,
        coeffs: m.apply(&v.coeffs)?,
    })
}

/// `N_{αβ}` on every sector `0..=n_max`.
#[derive(Clone, Debug, PartialEq)]
pub struct TransitionOperator<S> {
    pub alpha: ModeIndex,
    pub beta: ModeIndex,
    pub op: BlockOperator<S>,
}

impl<S: Scalar> TransitionOperator<S> {
    pub fn direct(space: &FockSpace<S>, alpha: ModeIndex, beta: ModeIndex) -> Result<Self, Error> {
        space.level().check(alpha)?;
        space.level().check(beta)?;
        let blocks = (0..=space.n_max())
            .map(|n| (n, direct_n_matrix(space, alpha, beta, n)))
            .collect();
        let op = BlockOperator::new(0, space.dims(), blocks, Default::default());
        Ok(TransitionOperator { alpha, beta, op })
    }
}

/// All `(2j+1)²` direct transition operators of a space.
#[derive(Clone, Debug)]
pub struct TransitionTable<S> {
    level: JLevel,
    ops: Vec<BlockOperator<S>>,
}

impl<S: Scalar> TransitionTable<S> {
    pub fn new(space: &FockSpace<S>) -> Self {
        let level = space.level();
        let mut ops = Vec::with_capacity(level.mode_count() * level.mode_count());
        for a in level.modes() {
            for b in level.modes() {
                ops.push(
                    TransitionOperator::direct(space, a, b)
                        .expect("modes of the level")
                        .op,
                );
            }
        }
        TransitionTable { level, ops }
    }

    pub fn get(&self, alpha: ModeIndex, beta: ModeIndex) -> &BlockOperator<S> {
        let d = self.level.mode_count();
        &self.ops[self.level.position(alpha) * d + self.level.position(beta)]
    }
}

/// `Y_{k i₁…iₙ}`, a combination of words of `n + 1` annihilators.
#[derive(Clone, Debug, PartialEq)]
pub struct YOperator<S> {
    pub head: ModeIndex,
    pub tail: Word,
    pub expansion: OperatorPolynomial<S>,
}

impl<S: Scalar> YOperator<S> {
    pub fn adjoint(&self) -> OperatorPolynomial<S> {
        self.expansion.adjoint()
    }
}

/// `Y_{ki} = b_k b_i − q b_i b_k`,
/// `Y_{k i₁…i_{n+1}} = Y_{k i₁…iₙ} b_{i_{n+1}} − q^{n+1} b_{i_{n+1}} Y_{k i₁…iₙ}`.
pub fn build_y<S: Scalar>(
    alg: &QuonAlgebra<S>,
    head: ModeIndex,
    tail: &[ModeIndex],
) -> Result<YOperator<S>, Error> {
    if tail.is_empty() {
        return Err(Error::EmptyTail);
    }
    let mut y = OperatorPolynomial::annihilation(head);
    for (n, &i) in tail.iter().enumerate() {
        let b = OperatorPolynomial::annihilation(i);
        let right = alg.multiply(&y, &b);
        let left = alg.multiply(&b, &y);
        y = right.sub(&left.scale(&alg.q().pow(n as u32 + 1)));
    }
    Ok(YOperator {
        head,
        tail: Word(tail.to_vec()),
        expansion: y,
    })
}

/// All permutations of `0..n` in lexicographic order (one-line notation).
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..n).collect();
    loop {
        out.push(current.clone());
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| current[i - 1] < current[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| current[j] > current[i - 1]).unwrap();
        current.swap(i - 1, j);
        current[i..].reverse();
    }
}

/// Ordered tuples of length `n` over `modes`, lexicographic.
fn tuples(modes: &[ModeIndex], n: usize) -> Vec<Vec<ModeIndex>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|t| {
                modes.iter().map(move |m| {
                    let mut t = t.clone();
                    t.push(*m);
                    t
                })
            })
            .collect();
    }
    out
}

fn permute(tuple: &[ModeIndex], perm: &[usize]) -> Vec<ModeIndex> {
    perm.iter().map(|&p| tuple[p]).collect()
}

/// Coefficient `c_π` of one order of the series.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesCoefficient<S> {
    pub order: usize,
    /// One-line notation, zero-based: slot `k` of `π(i)` holds `i[permutation[k]]`.
    pub permutation: Vec<usize>,
    pub value: S,
}

/// Coefficients of one order and how they were determined.
#[derive(Clone, Debug, PartialEq)]
pub struct OrderSolution<S> {
    pub order: usize,
    /// Number of modes in the alphabet whose `(order+1)`-particle words fixed
    /// the coefficients.
    pub alphabet: usize,
    pub rank: usize,
    /// Unknowns left undetermined (set to zero).
    pub free_parameters: usize,
    pub coefficients: Vec<SeriesCoefficient<S>>,
}

/// Solved series coefficients through some order.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesCoefficients<S> {
    q: Deformation<S>,
    orders: Vec<OrderSolution<S>>,
}

impl<S: Scalar> SeriesCoefficients<S> {
    /// The leading term only.
    pub fn leading(q: Deformation<S>) -> Self {
        SeriesCoefficients {
            q,
            orders: Vec::new(),
        }
    }

    pub fn q(&self) -> &Deformation<S> {
        &self.q
    }

    /// Highest solved order.
    pub fn max_order(&self) -> usize {
        self.orders.len()
    }

    pub fn orders(&self) -> &[OrderSolution<S>] {
        &self.orders
    }

    pub fn get(&self, order: usize, permutation: &[usize]) -> Option<&S> {
        self.orders
            .get(order.checked_sub(1)?)?
            .coefficients
            .iter()
            .find(|c| c.permutation == permutation)
            .map(|c| &c.value)
    }

    /// `b†_α b_β + Σ_{n ≤ k} Σ_i Σ_π c_π (Y_{α π(i)})† Y_{β i}` over the modes
    /// of `level`.
    pub fn series_polynomial(
        &self,
        level: JLevel,
        alpha: ModeIndex,
        beta: ModeIndex,
        k: usize,
    ) -> Result<OperatorPolynomial<S>, Error> {
        if k > self.max_order() {
            return Err(Error::Unsolved {
                requested: k,
                solved: self.max_order(),
            });
        }
        let alg = QuonAlgebra::new(self.q.clone());
        let modes: Vec<ModeIndex> = level.modes().collect();
        let mut out = alg.multiply(
            &OperatorPolynomial::creation(alpha),
            &OperatorPolynomial::annihilation(beta),
        );
        for sol in &self.orders[..k] {
            out = out.add(&self.order_sum(&alg, &modes, sol, alpha, beta)?);
        }
        Ok(out)
    }

    fn order_sum(
        &self,
        alg: &QuonAlgebra<S>,
        modes: &[ModeIndex],
        sol: &OrderSolution<S>,
        alpha: ModeIndex,
        beta: ModeIndex,
    ) -> Result<OperatorPolynomial<S>, Error> {
        let mut out = OperatorPolynomial::zero();
        for tail in tuples(modes, sol.order) {
            let y = build_y(alg, beta, &tail)?;
            let mut left = OperatorPolynomial::zero();
            for c in &sol.coefficients {
                if c.value.is_zero() {
                    continue;
                }
                let yd = build_y(alg, alpha, &permute(&tail, &c.permutation))?.adjoint();
                left = left.add(&yd.scale(&c.value));
            }
            out = out.add(&alg.multiply(&left, &y.expansion));
        }
        Ok(out)
    }
}

/// Matrix of the order-`k` truncated series for `N_{αβ}` on sector `n`.
pub fn series_n<S: Scalar>(
    space: &FockSpace<S>,
    coeffs: &SeriesCoefficients<S>,
    alpha: ModeIndex,
    beta: ModeIndex,
    k: usize,
    n: usize,
) -> Result<OperatorMatrix<S>, Error> {
    space.level().check(alpha)?;
    space.level().check(beta)?;
    let p = coeffs.series_polynomial(space.level(), alpha, beta, k)?;
    space.operator_matrix(&p, n)
}

/// Series `N_{αβ}` truncated at order `k` on every sector.
pub fn series_operator<S: Scalar>(
    space: &FockSpace<S>,
    coeffs: &SeriesCoefficients<S>,
    alpha: ModeIndex,
    beta: ModeIndex,
    k: usize,
) -> Result<BlockOperator<S>, Error> {
    space.level().check(alpha)?;
    space.level().check(beta)?;
    space.block_operator(&coeffs.series_polynomial(space.level(), alpha, beta, k)?)
}

/// Inverse of the relative pivot cut-off used by the float coefficient solver.
const FLOAT_SOLVE_TOLERANCE_INV: i64 = 1_000_000_000;

type SparseVectors<S> = BTreeMap<(ModeIndex, Vec<ModeIndex>), Vec<(usize, S)>>;

/// Solves the series coefficients of orders `1..=order`.
///
/// At order `n` the order-`n` terms are the only new contribution on the
/// `(n+1)`-particle sector, where each `Y_{β i}` maps to the vacuum; matching
/// the direct action there gives an overdetermined linear system with one
/// unknown per permutation. The system is built on words over a small
/// alphabet, starting with two modes and widening until it has full rank.
pub fn solve_series_coefficients<S: Real>(
    order: usize,
    q: &Deformation<S>,
) -> Result<SeriesCoefficients<S>, Error> {
    if q.is_endpoint() {
        return Err(Error::Endpoint);
    }
    let mut coeffs = SeriesCoefficients::leading(q.clone());
    for n in 1..=order {
        let unknowns = permutations(n).len();
        let mut best = None;
        for alphabet in 2..=(n + 1).max(2) {
            let sol = solve_order(&coeffs, n, alphabet)?;
            let full = sol.rank == unknowns;
            best = Some(sol);
            if full {
                break;
            }
        }
        coeffs
            .orders
            .push(best.expect("at least one alphabet tried"));
    }
    Ok(coeffs)
}

fn solve_order<S: Real>(
    coeffs: &SeriesCoefficients<S>,
    n: usize,
    alphabet: usize,
) -> Result<OrderSolution<S>, Error> {
    let q = coeffs.q().clone();
    let level = JLevel::new(alphabet as u32 - 1);
    let space = FockSpace::new(level, n + 1, q.clone());
    let alg = QuonAlgebra::new(q);
    let modes: Vec<ModeIndex> = level.modes().collect();
    let perms = permutations(n);
    let tol = if S::EXACT {
        S::zero()
    } else {
        S::from_rational(&crate::scalar::ratio(1, FLOAT_SOLVE_TOLERANCE_INV))
    };
    let mut system = Echelon::new(perms.len(), tol);

    // ⟨0|Y_{k t}|w⟩ rows and Y†_{k t}|0⟩ columns on the (n+1)-sector.
    let mut rows: SparseVectors<S> = BTreeMap::new();
    let mut cols: SparseVectors<S> = BTreeMap::new();
    let all_tails = tuples(&modes, n);
    for &k in &modes {
        for t in &all_tails {
            let y = build_y(&alg, k, t)?;
            let row = space.operator_matrix(&y.expansion, n + 1)?;
            let col = space.operator_matrix(&y.adjoint(), 0)?;
            let row_entries = (0..row.cols())
                .filter_map(|c| row.column(c).first().map(|(_, v)| (c, v.clone())))
                .collect();
            rows.insert((k, t.clone()), row_entries);
            cols.insert((k, t.clone()), col.column(0).to_vec());
        }
    }

    for &alpha in &modes {
        for &beta in &modes {
            let direct = direct_n_matrix(&space, alpha, beta, n + 1);
            let lower = series_n(&space, coeffs, alpha, beta, n - 1, n + 1)?;
            let residual = direct.sub(&lower)?;
            let mut entries: BTreeMap<(usize, usize), (Vec<S>, S)> = BTreeMap::new();
            for (r, c, v) in residual.nonzeros() {
                entries
                    .entry((r, c))
                    .or_insert_with(|| (vec![S::zero(); perms.len()], S::zero()))
                    .1 = v.clone();
            }
            for (p_idx, perm) in perms.iter().enumerate() {
                for t in &all_tails {
                    let row = &rows[&(beta, t.clone())];
                    let col = &cols[&(alpha, permute(t, perm))];
                    for (r, cv) in col {
                        for (c, rv) in row {
                            let e = entries
                                .entry((*r, *c))
                                .or_insert_with(|| (vec![S::zero(); perms.len()], S::zero()));
                            e.0[p_idx] = e.0[p_idx].clone() + cv.clone() * rv.clone();
                        }
                    }
                }
            }
            for (lhs, rhs) in entries.into_values() {
                system.push(&lhs, rhs);
            }
        }
    }

    if !system.is_consistent() {
        return Err(Error::IllPosed { order: n });
    }
    let values = system.solution().ok_or(Error::IllPosed { order: n })?;
    let coefficients = perms
        .into_iter()
        .zip(values)
        .map(|(permutation, value)| SeriesCoefficient {
            order: n,
            permutation,
            value,
        })
        .collect::<Vec<_>>();
    Ok(OrderSolution {
        order: n,
        alphabet,
        rank: system.rank(),
        free_parameters: coefficients.len() - system.rank(),
        coefficients,
    })
}

fn delta<S: Scalar>(a: ModeIndex, b: ModeIndex) -> S {
    if a == b {
        S::one()
    } else {
        S::zero()
    }
}

fn scaled_or_zero<S: Scalar>(op: &BlockOperator<S>, c: S) -> BlockOperator<S> {
    if c.is_zero() {
        BlockOperator::zero(op.shift(), op.dims().to_vec())
    } else {
        op.scale(&c)
    }
}

/// `[N_{αβ}, b†_μ] = δ_{βμ} b†_α` and `[N_{αβ}, b_μ] = −δ_{αμ} b_β`.
pub fn verify_transition_relations<S: Scalar>(
    space: &FockSpace<S>,
    n_op: &BlockOperator<S>,
    alpha: ModeIndex,
    beta: ModeIndex,
    mu: ModeIndex,
    tol: Tolerance,
) -> Result<[Check; 2], Error> {
    let params = format!("alpha={} beta={} mu={}", alpha, beta, mu);
    let bd_mu = space.creation_operator(mu)?;
    let b_mu = space.annihilation_operator(mu)?;
    let lhs = n_op.commutator(&bd_mu)?;
    let rhs = scaled_or_zero(&space.creation_operator(alpha)?, delta(beta, mu));
    let c1 = check_identity("eq2_creation", params.clone(), &lhs, &rhs, tol)?;
    let lhs = n_op.commutator(&b_mu)?;
    let rhs = scaled_or_zero(&space.annihilation_operator(beta)?, -delta::<S>(alpha, mu));
    let c2 = check_identity("eq2_annihilation", params, &lhs, &rhs, tol)?;
    Ok([c1, c2])
}

/// `[N_{αβ}, Y†_{α' i₁…iₙ}] = Σₖ δ_{β iₖ} Y†_{α' i₁…α…iₙ} + δ_{βα'} Y†_{α i₁…iₙ}`.
pub fn verify_y_commutator<S: Scalar>(
    space: &FockSpace<S>,
    table: &TransitionTable<S>,
    alpha: ModeIndex,
    beta: ModeIndex,
    head: ModeIndex,
    tail: &[ModeIndex],
    tol: Tolerance,
) -> Result<Check, Error> {
    let alg = QuonAlgebra::new(space.q().clone());
    let yd = build_y(&alg, head, tail)?.adjoint();
    let lhs = table
        .get(alpha, beta)
        .commutator(&space.block_operator(&yd)?)?;
    let mut rhs = OperatorPolynomial::zero();
    for (k, &ik) in tail.iter().enumerate() {
        if ik == beta {
            let mut t = tail.to_vec();
            t[k] = alpha;
            rhs = rhs.add(&build_y(&alg, head, &t)?.adjoint());
        }
    }
    if head == beta {
        rhs = rhs.add(&build_y(&alg, alpha, tail)?.adjoint());
    }
    let rhs = if rhs.is_zero() {
        BlockOperator::zero(lhs.shift(), space.dims())
    } else {
        space.block_operator(&rhs)?
    };
    let params = format!(
        "alpha={} beta={} head={} tail={}",
        alpha,
        beta,
        head,
        Word(tail.to_vec())
    );
    check_identity("eq6", params, &lhs, &rhs, tol)
}

/// `Σ_{i} (Y_{α' π(i)})† Y_{β' i}` over ordered tuples `i` of length
/// `permutation.len()`.
pub fn y_pair_sum<S: Scalar>(
    alg: &QuonAlgebra<S>,
    level: JLevel,
    alpha: ModeIndex,
    beta: ModeIndex,
    permutation: &[usize],
) -> Result<OperatorPolynomial<S>, Error> {
    let modes: Vec<ModeIndex> = level.modes().collect();
    let mut out = OperatorPolynomial::zero();
    for tail in tuples(&modes, permutation.len()) {
        let yd = build_y(alg, alpha, &permute(&tail, permutation))?.adjoint();
        let y = build_y(alg, beta, &tail)?;
        out = out.add(&alg.multiply(&yd, &y.expansion));
    }
    Ok(out)
}

/// `[N_{αβ}, S_{α'β'}] = δ_{βα'} S_{αβ'} − δ_{αβ'} S_{α'β}` with
/// `S_{α'β'} = Σ_i (Y_{α' π(i)})† Y_{β' i}`.
#[allow(clippy::too_many_arguments)]
pub fn verify_y_pair_commutator<S: Scalar>(
    space: &FockSpace<S>,
    table: &TransitionTable<S>,
    alpha: ModeIndex,
    beta: ModeIndex,
    alpha2: ModeIndex,
    beta2: ModeIndex,
    permutation: &[usize],
    tol: Tolerance,
) -> Result<Check, Error> {
    let alg = QuonAlgebra::new(space.q().clone());
    let level = space.level();
    let s = y_pair_sum(&alg, level, alpha2, beta2, permutation)?;
    let lhs = table
        .get(alpha, beta)
        .commutator(&space.block_operator(&s)?)?;
    let mut rhs = OperatorPolynomial::zero();
    if beta == alpha2 {
        rhs = rhs.add(&y_pair_sum(&alg, level, alpha, beta2, permutation)?);
    }
    if alpha == beta2 {
        rhs = rhs.sub(&y_pair_sum(&alg, level, alpha2, beta, permutation)?);
    }
    let rhs = if rhs.is_zero() {
        BlockOperator::zero(0, space.dims())
    } else {
        space.block_operator(&rhs)?
    };
    let perm: Vec<usize> = permutation.iter().map(|p| p + 1).collect();
    let params = format!(
        "alpha={} beta={} alpha'={} beta'={} pi={:?}",
        alpha, beta, alpha2, beta2, perm
    );
    check_identity("eq7", params, &lhs, &rhs, tol)
}

/// `[N_{αβ}, N_{α'β'}] = δ_{βα'} N_{αβ'} − δ_{αβ'} N_{α'β}`.
pub fn verify_su2jp1_closure<S: Scalar>(
    space: &FockSpace<S>,
    table: &TransitionTable<S>,
    alpha: ModeIndex,
    beta: ModeIndex,
    alpha2: ModeIndex,
    beta2: ModeIndex,
    tol: Tolerance,
) -> Result<Check, Error> {
    let lhs = table
        .get(alpha, beta)
        .commutator(table.get(alpha2, beta2))?;
    let mut rhs = BlockOperator::zero(0, space.dims());
    if beta == alpha2 {
        rhs = rhs.add(table.get(alpha, beta2))?;
    }
    if alpha == beta2 {
        rhs = rhs.sub(table.get(alpha2, beta))?;
    }
    let params = format!(
        "alpha={} beta={} alpha'={} beta'={}",
        alpha, beta, alpha2, beta2
    );
    check_identity("eq8", params, &lhs, &rhs, tol)
}
