//! Named verification suites over a q-sweep.

use std::fmt::Display;

use rayon::prelude::*;

use quon_core::check::{check_identity, Check, Tolerance};
use quon_core::number::{
    permutations, series_operator, solve_series_coefficients, verify_su2jp1_closure,
    verify_transition_relations, verify_y_commutator, verify_y_pair_commutator, SeriesCoefficients,
    TransitionTable,
};
use quon_core::su2::{
    build_generators, casimir, couple_pair, verify_coupled_state, verify_ladder,
    verify_su2_closure, verify_tensor_relations,
};
use quon_core::{
    Deformation, Error, FockSpace, ModeIndex, Rational, Real, Scalar, SqrtScalar, Surd,
};

use crate::config::{Plan, QList, Suite};
use crate::numeric::BackendKind;
use crate::report::{Record, Report};

/// Scalar types of one backend: an ordered field for Gram matrices and
/// coefficient solves, and a field with square roots for su(2).
pub trait Backend {
    type Real: Real + Display + Send + Sync;
    type Sqrt: SqrtScalar + Display + Send + Sync;
    const KIND: BackendKind;

    fn lift(q: &Self::Real) -> Self::Sqrt;
}

pub struct Exact;

pub struct Float;

impl Backend for Exact {
    type Real = Rational;
    type Sqrt = Surd;
    const KIND: BackendKind = BackendKind::Exact;

    fn lift(q: &Rational) -> Surd {
        Surd::from_rational(q)
    }
}

impl Backend for Float {
    type Real = f64;
    type Sqrt = f64;
    const KIND: BackendKind = BackendKind::Float;

    fn lift(q: &f64) -> f64 {
        *q
    }
}

/// Parameters shared by every job of a run.
struct Job<'a, B: Backend> {
    plan: &'a Plan,
    suite: Suite,
    q: &'a B::Real,
    label: &'a str,
    tol: Tolerance,
}

impl<B: Backend> Job<'_, B> {
    fn real_space(&self) -> Result<FockSpace<B::Real>, Error> {
        Ok(FockSpace::new(
            self.plan.level,
            self.plan.n_max,
            Deformation::new(self.q.clone())?,
        ))
    }

    fn sqrt_space(&self, n_max: usize) -> Result<FockSpace<B::Sqrt>, Error> {
        Ok(FockSpace::new(
            self.plan.level,
            n_max,
            Deformation::new(B::lift(self.q))?,
        ))
    }

    fn record(&self, c: &Check) -> Record {
        Record::from_check(self.suite, self.label, c)
    }

    fn run(&self) -> Vec<Record> {
        let out = match self.suite {
            Suite::Positivity => self.positivity(),
            Suite::Eq2 => self.eq2(),
            Suite::Eq6 => self.eq6(),
            Suite::Eq7 => self.eq7(),
            Suite::Eq8 => self.eq8(),
            Suite::Eq9 => self.eq9(),
            Suite::Eq10 => self.eq10(),
            Suite::Series => self.series(),
            Suite::Coupling => self.coupling(),
        };
        out.unwrap_or_else(|e| vec![Record::error(self.suite, self.label, e)])
    }

    fn modes(&self) -> Vec<ModeIndex> {
        self.plan.level.modes().collect()
    }

    fn positivity(&self) -> Result<Vec<Record>, Error> {
        let space = self.real_space()?;
        let endpoint = space.q().is_endpoint();
        let mut out = Vec::new();
        for n in 0..=self.plan.n_max {
            let r = space.check_positivity(n);
            let params = format!("n={}", n);
            let detail = format!(
                "min eigenvalue {:.6e}, rank {}/{}",
                r.min_eigenvalue, r.rank, r.dimension
            );
            // At |q| = 1 the metric degenerates; only semidefiniteness is expected.
            let passed = if endpoint {
                r.min_eigenvalue >= -self.plan.tolerance
            } else {
                r.positive_definite
            };
            let name = if endpoint {
                "gram_semidefinite"
            } else {
                "gram_positive_definite"
            };
            out.push(Record::outcome(
                self.suite, self.label, name, params, passed, detail,
            ));
        }
        Ok(out)
    }

    fn eq2(&self) -> Result<Vec<Record>, Error> {
        let space = self.real_space()?;
        let table = TransitionTable::new(&space);
        let mut out = Vec::new();
        for a in self.modes() {
            for b in self.modes() {
                for mu in self.modes() {
                    out.extend(
                        verify_transition_relations(&space, table.get(a, b), a, b, mu, self.tol)?
                            .iter()
                            .map(|c| self.record(c)),
                    );
                }
            }
        }
        Ok(out)
    }

    /// Tails up to length two, as far as the truncation allows.
    fn tail_lengths(&self) -> Result<std::ops::RangeInclusive<usize>, Error> {
        if self.plan.n_max < 2 {
            return Err(Error::Truncation {
                requested: 2,
                n_max: self.plan.n_max,
            });
        }
        Ok(1..=(self.plan.n_max - 1).min(2))
    }

    fn eq6(&self) -> Result<Vec<Record>, Error> {
        let space = self.real_space()?;
        let table = TransitionTable::new(&space);
        let modes = self.modes();
        let mut tails: Vec<Vec<ModeIndex>> = vec![Vec::new()];
        let mut all = Vec::new();
        for _ in self.tail_lengths()? {
            tails = tails
                .iter()
                .flat_map(|t| modes.iter().map(move |m| [t.as_slice(), &[*m]].concat()))
                .collect();
            all.extend(tails.clone());
        }
        let mut out = Vec::new();
        for &a in &modes {
            for &b in &modes {
                for &head in &modes {
                    for tail in &all {
                        out.push(self.record(&verify_y_commutator(
                            &space, &table, a, b, head, tail, self.tol,
                        )?));
                    }
                }
            }
        }
        Ok(out)
    }

    fn eq7(&self) -> Result<Vec<Record>, Error> {
        let space = self.real_space()?;
        let table = TransitionTable::new(&space);
        let modes = self.modes();
        let perms: Vec<Vec<usize>> = self.tail_lengths()?.flat_map(permutations).collect();
        let mut out = Vec::new();
        for &a in &modes {
            for &b in &modes {
                for &a2 in &modes {
                    for &b2 in &modes {
                        for p in &perms {
                            out.push(self.record(&verify_y_pair_commutator(
                                &space, &table, a, b, a2, b2, p, self.tol,
                            )?));
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    fn eq8(&self) -> Result<Vec<Record>, Error> {
        let space = self.real_space()?;
        let table = TransitionTable::new(&space);
        let modes = self.modes();
        let mut out = Vec::new();
        for &a in &modes {
            for &b in &modes {
                for &a2 in &modes {
                    for &b2 in &modes {
                        out.push(self.record(&verify_su2jp1_closure(
                            &space, &table, a, b, a2, b2, self.tol,
                        )?));
                    }
                }
            }
        }
        Ok(out)
    }

    fn eq9(&self) -> Result<Vec<Record>, Error> {
        let space = self.sqrt_space(self.plan.n_max)?;
        let g = build_generators(&space, &TransitionTable::new(&space))?;
        let mut out = Vec::new();
        for mu in self.modes() {
            out.extend(
                verify_tensor_relations(&space, &g, mu, self.tol)?
                    .iter()
                    .map(|c| self.record(c)),
            );
        }
        Ok(out)
    }

    fn eq10(&self) -> Result<Vec<Record>, Error> {
        let space = self.sqrt_space(self.plan.n_max)?;
        let g = build_generators(&space, &TransitionTable::new(&space))?;
        let mut out: Vec<Record> = verify_su2_closure(&g, self.tol)?
            .iter()
            .map(|c| self.record(c))
            .collect();
        let free = FockSpace::new(
            self.plan.level,
            self.plan.n_max,
            Deformation::new(<B::Sqrt as Scalar>::zero())?,
        );
        let g0 = build_generators(&free, &TransitionTable::new(&free))?;
        let same = g.j0 == g0.j0 && g.jplus == g0.jplus && g.jminus == g0.jminus;
        out.push(self.record(&Check::scalar(
            "eq10_q_independent",
            "reference q=0",
            if same { 0.0 } else { 1.0 },
            same,
            self.tol,
        )));
        Ok(out)
    }

    fn series(&self) -> Result<Vec<Record>, Error> {
        let k = self.plan.series_order;
        let q = Deformation::new(self.q.clone())?;
        if q.is_endpoint() {
            return Err(Error::Endpoint);
        }
        let coeffs = if k == 0 {
            SeriesCoefficients::leading(q.clone())
        } else {
            solve_series_coefficients(k, &q)?
        };
        let mut out = Vec::new();
        for order in coeffs.orders() {
            let detail = format!(
                "alphabet {} modes, rank {}, {} free",
                order.alphabet, order.rank, order.free_parameters
            );
            out.push(Record::outcome(
                self.suite,
                self.label,
                "series_solve",
                format!("order={}", order.order),
                order.free_parameters == 0,
                detail,
            ));
        }
        if let Some(c1) = coeffs.get(1, &[0]) {
            let one = <B::Real as quon_core::Scalar>::one();
            let expected = one.clone() / (one - self.q.clone() * self.q.clone());
            let d = c1.clone() - expected.clone();
            let residual = d.abs().to_f64() / expected.abs().to_f64().max(1.0);
            let c = Check::scalar(
                "series_order1",
                format!("c={} expected={}", c1, expected),
                residual,
                d.is_zero(),
                self.tol,
            );
            out.push(self.record(&c));
        }
        let space = self.real_space()?;
        let table = TransitionTable::new(&space);
        let top = (k + 1).min(self.plan.n_max);
        for a in self.modes() {
            for b in self.modes() {
                let lhs = series_operator(&space, &coeffs, a, b, k)?.restrict(top);
                let rhs = table.get(a, b).restrict(top);
                let params = format!("K={} alpha={} beta={} sectors<={}", k, a, b, top);
                out.push(self.record(&check_identity(
                    "series_reproduces_direct",
                    params,
                    &lhs,
                    &rhs,
                    self.tol,
                )?));
            }
        }
        Ok(out)
    }

    fn coupling(&self) -> Result<Vec<Record>, Error> {
        let space = self.sqrt_space(self.plan.n_max.max(2))?;
        if self.plan.n_max < 2 {
            return Err(Error::Truncation {
                requested: 2,
                n_max: self.plan.n_max,
            });
        }
        let g = build_generators(&space, &TransitionTable::new(&space))?;
        let j2 = casimir(&g)?;
        let tj = self.plan.level.twice_j() as i32;
        let mut out = Vec::new();
        for total in (0..=2 * tj).step_by(2) {
            for m in (-total..=total).step_by(2) {
                let state = couple_pair(&space, total, m)?;
                let r = verify_coupled_state(&space, &g, &j2, &state, self.tol)?;
                out.push(self.record(&r.j0));
                out.push(self.record(&r.casimir));
                let params = format!(
                    "J={} M={}",
                    ModeIndex::from_twice(total),
                    ModeIndex::from_twice(m)
                );
                out.push(Record::outcome(
                    self.suite,
                    self.label,
                    "coupling_norm",
                    params,
                    r.nonzero,
                    format!("<v|v> = {:.6e}", r.norm_squared),
                ));
                out.push(self.record(&verify_ladder(&space, &g, total, m, self.tol)?));
            }
        }
        Ok(out)
    }
}

fn run_backend<B: Backend>(plan: &Plan, qs: &[B::Real]) -> Vec<Record> {
    let labels: Vec<String> = qs.iter().map(|q| label::<B>(q)).collect();
    let tol = Tolerance::for_scalar::<B::Real>(plan.tolerance);
    let jobs: Vec<(Suite, usize)> = plan
        .checks
        .iter()
        .flat_map(|s| (0..qs.len()).map(move |i| (*s, i)))
        .collect();
    let mut results: Vec<((Suite, usize), Vec<Record>)> = jobs
        .into_par_iter()
        .map(|(suite, i)| {
            let job = Job::<B> {
                plan,
                suite,
                q: &qs[i],
                label: &labels[i],
                tol,
            };
            ((suite, i), job.run())
        })
        .collect();
    results.sort_by_key(|(key, _)| *key);
    results.into_iter().flat_map(|(_, r)| r).collect()
}

fn label<B: Backend>(q: &B::Real) -> String {
    match B::KIND {
        BackendKind::Exact => q.to_string(),
        BackendKind::Float => format!("{:?}", q.to_f64()),
    }
}

/// Runs every selected suite at every q; records are ordered by suite, then
/// by position in the q list, whatever the execution schedule.
pub fn run_plan(plan: &Plan) -> Report {
    let records = match &plan.q {
        QList::Exact(qs) => run_backend::<Exact>(plan, qs),
        QList::Float(qs) => run_backend::<Float>(plan, qs),
    };
    Report {
        backend: plan.q.backend(),
        twice_j: plan.level.twice_j(),
        n_max: plan.n_max,
        series_order: plan.series_order,
        q: plan.q.labels(),
        tolerance: plan.tolerance,
        summary: Report::summarize(&records),
        records,
    }
}
