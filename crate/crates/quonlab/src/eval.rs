//! Evaluation of parsed identities as per-sector matrices.

use quon_core::check::{check_identity, Check, Tolerance};
use quon_core::number::TransitionTable;
use quon_core::su2::{build_generators, Su2Generators};
use quon_core::{BlockOperator, Error, FockSpace, SqrtScalar};

use crate::expr::{Atom, Factor, Identity, Poly, Sign, Term};

#[derive(Debug, thiserror::Error)]
pub enum EvalError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("cannot add operators that change the particle number by {0} and {1}")]
    ShiftMismatch(isize, isize),
    #[error(
        "truncation overflow: no sector <= N_max = {0} keeps both sides inside the truncated space"
    )]
    Truncation(usize),
}

/// A space together with the operators atoms refer to.
pub struct Context<S> {
    space: FockSpace<S>,
    table: TransitionTable<S>,
    generators: Su2Generators<S>,
}

impl<S: SqrtScalar> Context<S> {
    pub fn new(space: FockSpace<S>) -> Result<Self, Error> {
        let table = TransitionTable::new(&space);
        let generators = build_generators(&space, &table)?;
        Ok(Context {
            space,
            table,
            generators,
        })
    }

    pub fn space(&self) -> &FockSpace<S> {
        &self.space
    }

    /// Both sides realised on the truncated space and compared sector by
    /// sector.
    pub fn check(&self, identity: &Identity, tol: Tolerance) -> Result<Check, EvalError> {
        let params = identity.to_string();
        let lhs = self.poly(&identity.lhs)?;
        let rhs = self.poly(&identity.rhs)?;
        match (lhs, rhs) {
            (Value::Scalar(a), Value::Scalar(b)) => {
                let d = a.clone() - b.clone();
                let scale = a.to_f64().abs().max(b.to_f64().abs()).max(1.0);
                Ok(Check::scalar(
                    "identity",
                    params,
                    d.to_f64().abs() / scale,
                    d.is_zero(),
                    tol,
                ))
            }
            (l, r) => {
                let shift = match (&l, &r) {
                    (Value::Op(o), _) | (_, Value::Op(o)) => o.shift(),
                    _ => unreachable!(),
                };
                let (l, r) = (self.as_operator(l, shift)?, self.as_operator(r, shift)?);
                if l.shift() != r.shift() {
                    return Err(EvalError::ShiftMismatch(l.shift(), r.shift()));
                }
                check_identity("identity", params, &l, &r, tol).map_err(|e| match e {
                    Error::EmptyDomain => EvalError::Truncation(self.space.n_max()),
                    e => EvalError::Core(e),
                })
            }
        }
    }

    fn as_operator(&self, v: Value<S>, shift: isize) -> Result<BlockOperator<S>, EvalError> {
        match v {
            Value::Op(o) => Ok(o),
            Value::Scalar(c) if c.is_zero() => Ok(BlockOperator::zero(shift, self.space.dims())),
            Value::Scalar(c) if shift == 0 => Ok(self.space.identity_operator().scale(&c)),
            Value::Scalar(_) => Err(EvalError::ShiftMismatch(0, shift)),
        }
    }

    fn add(&self, a: Value<S>, b: Value<S>, sign: Sign) -> Result<Value<S>, EvalError> {
        let b = match sign {
            Sign::Plus => b,
            Sign::Minus => b.neg(),
        };
        Ok(match (a, b) {
            (Value::Scalar(x), Value::Scalar(y)) => Value::Scalar(x + y),
            (Value::Op(o), Value::Scalar(c)) | (Value::Scalar(c), Value::Op(o)) => {
                let c = self.as_operator(Value::Scalar(c), o.shift())?;
                Value::Op(o.add(&c)?)
            }
            (Value::Op(x), Value::Op(y)) => {
                if x.shift() != y.shift() {
                    return Err(EvalError::ShiftMismatch(x.shift(), y.shift()));
                }
                Value::Op(x.add(&y)?)
            }
        })
    }

    fn mul(&self, a: Value<S>, b: Value<S>) -> Result<Value<S>, EvalError> {
        Ok(match (a, b) {
            (Value::Scalar(x), Value::Scalar(y)) => Value::Scalar(x * y),
            (Value::Op(o), Value::Scalar(c)) | (Value::Scalar(c), Value::Op(o)) => {
                Value::Op(o.scale(&c))
            }
            (Value::Op(x), Value::Op(y)) => Value::Op(x.compose(&y)?),
        })
    }

    fn poly(&self, p: &Poly) -> Result<Value<S>, EvalError> {
        let mut acc = Value::Scalar(S::zero());
        for (sign, t) in &p.terms {
            let v = self.term(t)?;
            acc = self.add(acc, v, *sign)?;
        }
        Ok(acc)
    }

    fn term(&self, t: &Term) -> Result<Value<S>, EvalError> {
        let mut acc = Value::Scalar(S::one());
        for f in &t.factors {
            let v = self.factor(f)?;
            acc = self.mul(acc, v)?;
        }
        Ok(acc)
    }

    fn factor(&self, f: &Factor) -> Result<Value<S>, EvalError> {
        Ok(match f {
            Factor::Scalar(s) => Value::Scalar(S::from_rational(&s.value.to_rational())),
            Factor::Q => Value::Scalar(self.space.q().value().clone()),
            Factor::Atom(a) => Value::Op(self.atom(*a)?),
            Factor::Group(p) => self.poly(p)?,
            Factor::Comm(a, b) | Factor::QMut(a, b) => {
                let (a, b) = (self.poly(a)?, self.poly(b)?);
                let ab = self.mul(a.clone(), b.clone())?;
                let mut ba = self.mul(b, a)?;
                if matches!(f, Factor::QMut(..)) {
                    ba = self.mul(Value::Scalar(self.space.q().value().clone()), ba)?;
                }
                self.add(ab, ba, Sign::Minus)?
            }
        })
    }

    fn atom(&self, a: Atom) -> Result<BlockOperator<S>, EvalError> {
        let level = self.space.level();
        Ok(match a {
            Atom::Creation(m) => self.space.creation_operator(m)?,
            Atom::Annihilation(m) => self.space.annihilation_operator(m)?,
            Atom::Transition(x, y) => {
                level.check(x)?;
                level.check(y)?;
                self.table.get(x, y).clone()
            }
            Atom::J0 => self.generators.j0.clone(),
            Atom::Jp => self.generators.jplus.clone(),
            Atom::Jm => self.generators.jminus.clone(),
        })
    }
}

#[derive(Clone)]
enum Value<S> {
    Scalar(S),
    Op(BlockOperator<S>),
}

impl<S: SqrtScalar> Value<S> {
    fn neg(self) -> Self {
        match self {
            Value::Scalar(c) => Value::Scalar(-c),
            Value::Op(o) => Value::Op(o.scale(&-S::one())),
        }
    }
}
