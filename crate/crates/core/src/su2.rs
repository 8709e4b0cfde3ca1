//! su(2) generators built from transition operators, the irreducible-tensor
//! property of `b†_μ`, and Clebsch-Gordan coupling of quon pairs.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::check::{check_identity, Check, Tolerance};
use crate::error::Error;
use crate::fock::{FockSpace, FockVector};
use crate::linalg::{BlockOperator, SectorResidual};
use crate::mode::{JLevel, ModeIndex};
use crate::number::TransitionTable;
use crate::scalar::{ratio, Rational, Scalar, SqrtScalar, Surd};

/// `√((j∓m)(j±m+1))` as a rational radicand, in doubled units.
fn ladder_radicand(twice_j: i32, twice_m: i32, raise: bool) -> Rational {
    let (a, b) = if raise {
        (twice_j - twice_m, twice_j + twice_m + 2)
    } else {
        (twice_j + twice_m, twice_j - twice_m + 2)
    };
    ratio(i64::from(a) * i64::from(b), 4)
}

/// `J₀`, `J₊`, `J₋` on every sector of a space.
#[derive(Clone, Debug, PartialEq)]
pub struct Su2Generators<S> {
    pub level: JLevel,
    pub j0: BlockOperator<S>,
    pub jplus: BlockOperator<S>,
    pub jminus: BlockOperator<S>,
}

/// `J₀ = Σ_ν ν N_{νν}`, `J± = Σ_ν √((j∓ν)(j±ν+1)) N_{ν±1,ν}`.
pub fn build_generators<S: SqrtScalar>(
    space: &FockSpace<S>,
    table: &TransitionTable<S>,
) -> Result<Su2Generators<S>, Error> {
    let level = space.level();
    let tj = level.twice_j() as i32;
    let mut j0 = BlockOperator::zero(0, space.dims());
    let mut jplus = BlockOperator::zero(0, space.dims());
    let mut jminus = BlockOperator::zero(0, space.dims());
    for nu in level.modes() {
        let tn = nu.twice_m();
        if tn != 0 {
            j0 = j0.add(
                &table
                    .get(nu, nu)
                    .scale(&S::from_rational(&ratio(tn.into(), 2))),
            )?;
        }
        if tn < tj {
            let w = S::sqrt_rational(&ladder_radicand(tj, tn, true));
            jplus = jplus.add(&table.get(nu.shifted(1), nu).scale(&w))?;
        }
        if tn > -tj {
            let w = S::sqrt_rational(&ladder_radicand(tj, tn, false));
            jminus = jminus.add(&table.get(nu.shifted(-1), nu).scale(&w))?;
        }
    }
    Ok(Su2Generators {
        level,
        j0,
        jplus,
        jminus,
    })
}

/// `[J₀, J±] = ±J±` and `[J₊, J₋] = 2J₀`.
pub fn verify_su2_closure<S: Scalar>(
    g: &Su2Generators<S>,
    tol: Tolerance,
) -> Result<[Check; 3], Error> {
    let params = format!("j={}", g.level);
    Ok([
        check_identity(
            "eq10_j0_jplus",
            params.clone(),
            &g.j0.commutator(&g.jplus)?,
            &g.jplus,
            tol,
        )?,
        check_identity(
            "eq10_j0_jminus",
            params.clone(),
            &g.j0.commutator(&g.jminus)?,
            &g.jminus.scale(&-S::one()),
            tol,
        )?,
        check_identity(
            "eq10_jplus_jminus",
            params,
            &g.jplus.commutator(&g.jminus)?,
            &g.j0.scale(&S::from_integer(2)),
            tol,
        )?,
    ])
}

/// `[J₀, b†_μ] = μ b†_μ` and `[J±, b†_μ] = √((j∓μ)(j±μ+1)) b†_{μ±1}`.
pub fn verify_tensor_relations<S: SqrtScalar>(
    space: &FockSpace<S>,
    g: &Su2Generators<S>,
    mu: ModeIndex,
    tol: Tolerance,
) -> Result<[Check; 3], Error> {
    let level = space.level();
    let tj = level.twice_j() as i32;
    let tm = mu.twice_m();
    let bd = space.creation_operator(mu)?;
    let params = format!("j={} mu={}", level, mu);
    let ladder_rhs = |raise: bool| -> Result<BlockOperator<S>, Error> {
        let target = mu.shifted(if raise { 1 } else { -1 });
        if level.contains(target) {
            let w = S::sqrt_rational(&ladder_radicand(tj, tm, raise));
            Ok(space.creation_operator(target)?.scale(&w))
        } else {
            Ok(BlockOperator::zero(1, space.dims()))
        }
    };
    let j0_rhs = if tm == 0 {
        BlockOperator::zero(1, space.dims())
    } else {
        bd.scale(&S::from_rational(&ratio(tm.into(), 2)))
    };
    Ok([
        check_identity(
            "eq9_j0",
            params.clone(),
            &g.j0.commutator(&bd)?,
            &j0_rhs,
            tol,
        )?,
        check_identity(
            "eq9_jplus",
            params.clone(),
            &g.jplus.commutator(&bd)?,
            &ladder_rhs(true)?,
            tol,
        )?,
        check_identity(
            "eq9_jminus",
            params,
            &g.jminus.commutator(&bd)?,
            &ladder_rhs(false)?,
            tol,
        )?,
    ])
}

/// `J² = J₀² + (J₊J₋ + J₋J₊)/2`.
pub fn casimir<S: Scalar>(g: &Su2Generators<S>) -> Result<BlockOperator<S>, Error> {
    let sym = g
        .jplus
        .compose(&g.jminus)?
        .add(&g.jminus.compose(&g.jplus)?)?;
    g.j0.compose(&g.j0)?
        .add(&sym.scale(&S::from_rational(&ratio(1, 2))))
}

/// `sign · √radicand`: an exact Clebsch-Gordan value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedSurd {
    /// `-1`, `0` or `1`.
    pub sign: i8,
    pub radicand: Rational,
}

impl SignedSurd {
    pub fn zero() -> Self {
        SignedSurd {
            sign: 0,
            radicand: Rational::zero(),
        }
    }

    pub fn to_surd(&self) -> Surd {
        let s = Surd::sqrt_rational(&self.radicand);
        match self.sign {
            0 => Surd::zero(),
            1 => s,
            _ => -s,
        }
    }

    pub fn to_scalar<S: SqrtScalar>(&self) -> S {
        let s = S::sqrt_rational(&self.radicand);
        match self.sign {
            0 => S::zero(),
            1 => s,
            _ => -s,
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.to_scalar::<f64>()
    }
}

fn factorial(n: i32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

fn half_ok(twice_j: i32, twice_m: i32) -> bool {
    twice_j >= 0 && twice_m.abs() <= twice_j && (twice_j - twice_m) % 2 == 0
}

/// `⟨j₁ m₁; j₂ m₂ | J M⟩` (Condon-Shortley phase) by the Racah sum. All
/// arguments are doubled. Invalid projections or triangles give zero.
pub fn clebsch_gordan(tj1: i32, tm1: i32, tj2: i32, tm2: i32, tj: i32, tm: i32) -> SignedSurd {
    if tm != tm1 + tm2 || !half_ok(tj1, tm1) || !half_ok(tj2, tm2) || !half_ok(tj, tm) {
        return SignedSurd::zero();
    }
    let (a2, b2, c2) = (tj1 + tj2 - tj, tj1 - tj2 + tj, -tj1 + tj2 + tj);
    if a2 < 0 || b2 < 0 || c2 < 0 || a2 % 2 != 0 {
        return SignedSurd::zero();
    }
    let (a, b, c) = (a2 / 2, b2 / 2, c2 / 2);
    let s = (tj1 + tj2 + tj) / 2 + 1;
    let (jpm, jmm) = ((tj + tm) / 2, (tj - tm) / 2);
    let (j1m, j1p) = ((tj1 - tm1) / 2, (tj1 + tm1) / 2);
    let (j2m, j2p) = ((tj2 - tm2) / 2, (tj2 + tm2) / 2);

    let prefactor = Rational::new(
        BigInt::from(tj + 1) * factorial(a) * factorial(b) * factorial(c),
        factorial(s),
    ) * Rational::from_integer(
        factorial(jpm)
            * factorial(jmm)
            * factorial(j1m)
            * factorial(j1p)
            * factorial(j2m)
            * factorial(j2p),
    );

    // k runs over all values keeping every factorial argument non-negative.
    let e1 = (tj - tj2 + tm1) / 2;
    let e2 = (tj - tj1 - tm2) / 2;
    let k_min = 0.max(-e1).max(-e2);
    let k_max = a.min(j1m).min(j2p);
    let mut sum = Rational::zero();
    for k in k_min..=k_max {
        let den = factorial(k)
            * factorial(a - k)
            * factorial(j1m - k)
            * factorial(j2p - k)
            * factorial(e1 + k)
            * factorial(e2 + k);
        let term = Rational::new(BigInt::one(), den);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    if sum.is_zero() {
        return SignedSurd::zero();
    }
    let sign = if sum.is_negative() { -1 } else { 1 };
    SignedSurd {
        sign,
        radicand: prefactor * sum.clone() * sum,
    }
}

/// One entry of a coupling table, doubled quantum numbers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CgEntry {
    pub twice_j1: i32,
    pub twice_m1: i32,
    pub twice_j2: i32,
    pub twice_m2: i32,
    pub twice_j: i32,
    pub twice_m: i32,
    pub value: SignedSurd,
}

/// All non-zero coefficients coupling `j₁ ⊗ j₂`, ordered by `(J, M, m₁)`.
pub fn cg_table(twice_j1: u32, twice_j2: u32) -> Vec<CgEntry> {
    let (tj1, tj2) = (twice_j1 as i32, twice_j2 as i32);
    let mut out = Vec::new();
    let mut tj = (tj1 - tj2).abs();
    while tj <= tj1 + tj2 {
        for tm in (-tj..=tj).step_by(2) {
            for tm1 in (-tj1..=tj1).step_by(2) {
                let tm2 = tm - tm1;
                let value = clebsch_gordan(tj1, tm1, tj2, tm2, tj, tm);
                if value.sign != 0 {
                    out.push(CgEntry {
                        twice_j1: tj1,
                        twice_m1: tm1,
                        twice_j2: tj2,
                        twice_m2: tm2,
                        twice_j: tj,
                        twice_m: tm,
                        value,
                    });
                }
            }
        }
        tj += 2;
    }
    out
}

/// `Σ_{m₁+m₂=M} ⟨j m₁; j m₂|J M⟩ |(m₁, m₂)⟩` in the two-particle sector.
#[derive(Clone, Debug, PartialEq)]
pub struct CoupledState<S> {
    pub twice_total: i32,
    pub twice_projection: i32,
    pub vector: FockVector<S>,
}

pub fn couple_pair<S: SqrtScalar>(
    space: &FockSpace<S>,
    twice_total: i32,
    twice_projection: i32,
) -> Result<CoupledState<S>, Error> {
    if space.q().is_endpoint() {
        return Err(Error::Endpoint);
    }
    if space.n_max() < 2 {
        return Err(Error::Truncation {
            requested: 2,
            n_max: space.n_max(),
        });
    }
    let tj = space.level().twice_j() as i32;
    if twice_total < 0
        || twice_total > 2 * tj
        || twice_total % 2 != 0
        || !half_ok(twice_total, twice_projection)
    {
        return Err(Error::InvalidCoupling);
    }
    let sector = space.sector(2);
    let mut vector = FockVector::zero(space, 2);
    for m1 in space.level().modes() {
        let m2 = ModeIndex::from_twice(twice_projection - m1.twice_m());
        if !space.level().contains(m2) {
            continue;
        }
        let c = clebsch_gordan(
            tj,
            m1.twice_m(),
            tj,
            m2.twice_m(),
            twice_total,
            twice_projection,
        );
        vector.coeffs[sector.index(&[m1, m2])] = c.to_scalar();
    }
    Ok(CoupledState {
        twice_total,
        twice_projection,
        vector,
    })
}

fn vector_check<S: Scalar>(
    name: &str,
    params: &str,
    lhs: &[S],
    rhs: &[S],
    sector: usize,
    tol: Tolerance,
) -> Check {
    let diff: Vec<S> = lhs
        .iter()
        .zip(rhs)
        .map(|(a, b)| a.clone() - b.clone())
        .collect();
    let scale = crate::scalar::norm(lhs.iter().cloned())
        .max(crate::scalar::norm(rhs.iter().cloned()))
        .max(1.0);
    let residual = crate::scalar::norm(diff.iter().cloned()) / scale;
    let exact_zero = diff.iter().all(Scalar::is_zero);
    Check::new(
        name,
        params,
        vec![SectorResidual {
            sector,
            residual,
            exact_zero,
        }],
        tol,
    )
}

/// Eigen-relations and norm of one coupled pair state.
#[derive(Clone, Debug, PartialEq)]
pub struct CouplingReport {
    pub j0: Check,
    pub casimir: Check,
    /// `⟨v|v⟩` in the Gram metric.
    pub norm_squared: f64,
    pub nonzero: bool,
}

impl CouplingReport {
    pub fn passed(&self) -> bool {
        self.j0.passed && self.casimir.passed && self.nonzero
    }
}

/// `J₀ v = M v`, `J² v = J(J+1) v` and `⟨v|v⟩ > 0`.
pub fn verify_coupled_state<S: SqrtScalar>(
    space: &FockSpace<S>,
    g: &Su2Generators<S>,
    j2: &BlockOperator<S>,
    state: &CoupledState<S>,
    tol: Tolerance,
) -> Result<CouplingReport, Error> {
    let v = &state.vector.coeffs;
    let params = format!(
        "j={} J={} M={}",
        space.level(),
        ModeIndex::from_twice(state.twice_total),
        ModeIndex::from_twice(state.twice_projection)
    );
    let j0v = g.j0.block(2).ok_or(Error::EmptyDomain)?.apply(v)?;
    let mv: Vec<S> = v
        .iter()
        .map(|x| x.clone() * S::from_rational(&ratio(state.twice_projection.into(), 2)))
        .collect();
    let j0 = vector_check("coupling_j0", &params, &j0v, &mv, 2, tol);
    let jj = j2.block(2).ok_or(Error::EmptyDomain)?.apply(v)?;
    let tj = i64::from(state.twice_total);
    let eig = S::from_rational(&ratio(tj * (tj + 2), 4));
    let ev: Vec<S> = v.iter().map(|x| x.clone() * eig.clone()).collect();
    let casimir = vector_check("coupling_casimir", &params, &jj, &ev, 2, tol);
    let gram = space.gram_matrix(2);
    let gv = gram.matrix.apply(v)?;
    let norm = v
        .iter()
        .zip(&gv)
        .fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone());
    let norm_squared = norm.to_f64();
    let nonzero = !norm.is_zero() && norm_squared > 0.0;
    Ok(CouplingReport {
        j0,
        casimir,
        norm_squared,
        nonzero,
    })
}

/// `J₊ |J, M⟩ = √((J−M)(J+M+1)) |J, M+1⟩` for coupled pair states.
pub fn verify_ladder<S: SqrtScalar>(
    space: &FockSpace<S>,
    g: &Su2Generators<S>,
    twice_total: i32,
    twice_projection: i32,
    tol: Tolerance,
) -> Result<Check, Error> {
    let lower = couple_pair(space, twice_total, twice_projection)?;
    let lhs = g
        .jplus
        .block(2)
        .ok_or(Error::EmptyDomain)?
        .apply(&lower.vector.coeffs)?;
    let rhs = if twice_projection + 2 <= twice_total {
        let upper = couple_pair(space, twice_total, twice_projection + 2)?;
        let w: S = S::sqrt_rational(&ladder_radicand(twice_total, twice_projection, true));
        upper
            .vector
            .coeffs
            .into_iter()
            .map(|x| x * w.clone())
            .collect()
    } else {
        vec![S::zero(); lhs.len()]
    };
    let params = format!(
        "j={} J={} M={}",
        space.level(),
        ModeIndex::from_twice(twice_total),
        ModeIndex::from_twice(twice_projection)
    );
    Ok(vector_check("coupling_ladder", &params, &lhs, &rhs, 2, tol))
}
