//! Quon operator polynomials and the normal-ordering rewrite engine.
//!
//! The only relation of the algebra is
//!
//! ```text
//! b_m b†_n − q b†_n b_m = δ_{mn}
//! ```
//!
//! so rewriting `b_m b†_n → q b†_n b_m + δ_{mn}` brings every word into normal
//! order (all creators left of all annihilators). Creators among themselves,
//! and annihilators among themselves, obey no relation: a normal-ordered term
//! is a pair of free words and the normal form is unique for fixed `q`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::error::Error;
use crate::mode::{Generator, ModeIndex, Word};
use crate::scalar::Scalar;

/// The deformation parameter `q`, `|q| ≤ 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct Deformation<S> {
    value: S,
}

impl<S: Scalar> Deformation<S> {
    pub fn new(value: S) -> Result<Self, Error> {
        if value.exceeds_unit() {
            return Err(Error::DeformationOutOfRange);
        }
        Ok(Deformation { value })
    }

    pub fn value(&self) -> &S {
        &self.value
    }

    /// `q = ±1`, where the Fock space degenerates.
    pub fn is_endpoint(&self) -> bool {
        self.value.is_unit_magnitude()
    }

    pub fn pow(&self, exp: u32) -> S {
        self.value.pow(exp)
    }
}

/// A normal-ordered word `b†_{c₁}⋯b†_{cₖ} b_{a₁}⋯b_{aₗ}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Term {
    pub creators: Vec<ModeIndex>,
    pub annihilators: Vec<ModeIndex>,
}

impl Term {
    pub fn identity() -> Self {
        Term::default()
    }

    pub fn degree(&self) -> usize {
        self.creators.len() + self.annihilators.len()
    }

    pub fn is_identity(&self) -> bool {
        self.creators.is_empty() && self.annihilators.is_empty()
    }

    /// Net change of particle number.
    pub fn shift(&self) -> isize {
        self.creators.len() as isize - self.annihilators.len() as isize
    }

    pub fn generators(&self) -> impl Iterator<Item = Generator> + '_ {
        self.creators.iter().map(|&m| Generator::creation(m)).chain(
            self.annihilators
                .iter()
                .map(|&m| Generator::annihilation(m)),
        )
    }
}

fn cmp_descending(a: &[ModeIndex], b: &[ModeIndex]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match y.cmp(x) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    a.len().cmp(&b.len())
}

impl Ord for Term {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| cmp_descending(&self.creators, &other.creators))
            .then_with(|| cmp_descending(&self.annihilators, &other.annihilators))
    }
}

impl PartialOrd for Term {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A scalar-weighted word of generators in arbitrary order.
#[derive(Clone, Debug, PartialEq)]
pub struct Monomial<S> {
    pub coeff: S,
    pub factors: Vec<Generator>,
}

impl<S: Scalar> Monomial<S> {
    pub fn new(coeff: S, factors: Vec<Generator>) -> Self {
        Monomial { coeff, factors }
    }

    pub fn unit(factors: Vec<Generator>) -> Self {
        Monomial {
            coeff: S::one(),
            factors,
        }
    }
}

/// Element of the quon algebra in canonical normal-ordered form.
#[derive(Clone, PartialEq)]
pub struct OperatorPolynomial<S> {
    terms: BTreeMap<Term, S>,
}

impl<S: Scalar> Default for OperatorPolynomial<S> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<S: Scalar> OperatorPolynomial<S> {
    pub fn zero() -> Self {
        OperatorPolynomial {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(S::one())
    }

    pub fn constant(c: S) -> Self {
        Self::from_term(Term::identity(), c)
    }

    pub fn creation(mode: ModeIndex) -> Self {
        Self::from_term(
            Term {
                creators: alloc::vec![mode],
                annihilators: Vec::new(),
            },
            S::one(),
        )
    }

    pub fn annihilation(mode: ModeIndex) -> Self {
        Self::from_term(
            Term {
                creators: Vec::new(),
                annihilators: alloc::vec![mode],
            },
            S::one(),
        )
    }

    /// `b†_{j₁}⋯b†_{jₙ}`, the operator that creates `word` from the vacuum.
    pub fn word(word: &Word) -> Self {
        Self::from_term(
            Term {
                creators: word.0.clone(),
                annihilators: Vec::new(),
            },
            S::one(),
        )
    }

    pub fn from_term(term: Term, coeff: S) -> Self {
        let mut p = Self::zero();
        p.add_term(term, coeff);
        p
    }

    pub fn add_term(&mut self, term: Term, coeff: S) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&term) {
            Some(existing) => {
                let sum = existing.clone() + coeff;
                if sum.is_zero() {
                    self.terms.remove(&term);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(term, coeff);
            }
        }
    }

    /// Terms in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&Term, &S)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, term: &Term) -> S {
        self.terms.get(term).cloned().unwrap_or_else(S::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (t, c) in &other.terms {
            out.add_term(t.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (t, c) in &other.terms {
            out.add_term(t.clone(), -c.clone());
        }
        out
    }

    pub fn scale(&self, s: &S) -> Self {
        let mut out = Self::zero();
        for (t, c) in &self.terms {
            out.add_term(t.clone(), c.clone() * s.clone());
        }
        out
    }

    /// Anti-linear involution: reverses each word and swaps `b ↔ b†`.
    /// Coefficients are real, so they are left unchanged.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zero();
        for (t, c) in &self.terms {
            let creators = t.annihilators.iter().rev().copied().collect();
            let annihilators = t.creators.iter().rev().copied().collect();
            out.add_term(
                Term {
                    creators,
                    annihilators,
                },
                c.clone(),
            );
        }
        out
    }

    /// `⟨0|p|0⟩`: the constant term, since every other normal-ordered term
    /// annihilates the vacuum on one side.
    pub fn vacuum_expectation(&self) -> S {
        self.coefficient(&Term::identity())
    }

    /// Common particle-number shift of all terms, `None` for mixed or zero
    /// polynomials.
    pub fn uniform_shift(&self) -> Option<isize> {
        let mut shifts = self.terms.keys().map(Term::shift);
        let first = shifts.next()?;
        shifts.all(|s| s == first).then_some(first)
    }
}

impl<S: Scalar + fmt::Display> fmt::Display for OperatorPolynomial<S> {
    /// `coeff * bd(m1) bd(m2) b(m3) + …`, terms in canonical order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (t, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{}", c)?;
            if !t.is_identity() {
                f.write_str(" *")?;
                for g in t.generators() {
                    write!(f, " {}", g)?;
                }
            }
        }
        Ok(())
    }
}

impl<S: fmt::Debug> fmt::Debug for OperatorPolynomial<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

/// The quon algebra at a fixed deformation parameter.
#[derive(Clone, Debug)]
pub struct QuonAlgebra<S> {
    q: Deformation<S>,
}

impl<S: Scalar> QuonAlgebra<S> {
    pub fn new(q: Deformation<S>) -> Self {
        QuonAlgebra { q }
    }

    pub fn q(&self) -> &Deformation<S> {
        &self.q
    }

    /// Normal form of a monomial by single-step rewriting, always rewriting
    /// the leftmost `b b†` inversion.
    pub fn normal_order(&self, m: &Monomial<S>) -> OperatorPolynomial<S> {
        self.normal_order_by(m, |_| 0)
    }

    /// Normal form by single-step rewriting; `choose` receives the positions
    /// `i` of all adjacent inversions `factors[i] = b`, `factors[i+1] = b†`
    /// and returns the index (into that slice) of the one to rewrite.
    ///
    /// Each rewrite lowers the number of annihilator-before-creator pairs,
    /// so the loop terminates for any choice.
    pub fn normal_order_by<F>(&self, m: &Monomial<S>, mut choose: F) -> OperatorPolynomial<S>
    where
        F: FnMut(&[usize]) -> usize,
    {
        let q = self.q.value();
        let mut out = OperatorPolynomial::zero();
        let mut pending: BTreeMap<Vec<Generator>, S> = BTreeMap::new();
        push_pending(&mut pending, m.factors.clone(), m.coeff.clone());
        let mut inversions = Vec::new();
        while let Some((word, coeff)) = pending.pop_first() {
            inversions.clear();
            inversions.extend(
                word.windows(2)
                    .enumerate()
                    .filter(|(_, w)| !w[0].is_creation() && w[1].is_creation())
                    .map(|(i, _)| i),
            );
            if inversions.is_empty() {
                let split = word.iter().take_while(|g| g.is_creation()).count();
                let term = Term {
                    creators: word[..split].iter().map(|g| g.mode).collect(),
                    annihilators: word[split..].iter().map(|g| g.mode).collect(),
                };
                out.add_term(term, coeff);
                continue;
            }
            let i = inversions[choose(&inversions).min(inversions.len() - 1)];
            let (a, c) = (word[i], word[i + 1]);
            if a.mode == c.mode {
                let mut contracted = word.clone();
                contracted.drain(i..i + 2);
                push_pending(&mut pending, contracted, coeff.clone());
            }
            let mut swapped = word;
            swapped.swap(i, i + 1);
            push_pending(&mut pending, swapped, coeff * q.clone());
        }
        out
    }

    /// Product `a·b` in normal form.
    ///
    /// Pushing a creator through a block of annihilators has the closed form
    /// `b_{a₁}⋯b_{aₖ} b†_c = qᵏ b†_c b_{a₁}⋯b_{aₖ} + Σᵢ q^{k−i} δ_{aᵢ c} b_{a₁}⋯b̂_{aᵢ}⋯b_{aₖ}`,
    /// which this routine applies one creator at a time.
    pub fn multiply(
        &self,
        a: &OperatorPolynomial<S>,
        b: &OperatorPolynomial<S>,
    ) -> OperatorPolynomial<S> {
        let mut out = OperatorPolynomial::zero();
        for (ta, ca) in a.terms() {
            for (tb, cb) in b.terms() {
                let middle = self.reorder(&ta.annihilators, &tb.creators);
                let coeff = ca.clone() * cb.clone();
                for (t, c) in middle.terms() {
                    let mut creators = ta.creators.clone();
                    creators.extend_from_slice(&t.creators);
                    let mut annihilators = t.annihilators.clone();
                    annihilators.extend_from_slice(&tb.annihilators);
                    out.add_term(
                        Term {
                            creators,
                            annihilators,
                        },
                        coeff.clone() * c.clone(),
                    );
                }
            }
        }
        out
    }

    /// Normal form of `b_{a₁}⋯b_{aₖ} b†_{c₁}⋯b†_{cₗ}`.
    fn reorder(&self, annihilators: &[ModeIndex], creators: &[ModeIndex]) -> OperatorPolynomial<S> {
        let mut current = OperatorPolynomial::from_term(
            Term {
                creators: Vec::new(),
                annihilators: annihilators.to_vec(),
            },
            S::one(),
        );
        for &c in creators {
            let mut next = OperatorPolynomial::zero();
            for (t, coeff) in current.terms() {
                let k = t.annihilators.len();
                let mut passed = t.creators.clone();
                passed.push(c);
                next.add_term(
                    Term {
                        creators: passed,
                        annihilators: t.annihilators.clone(),
                    },
                    coeff.clone() * self.q.pow(k as u32),
                );
                for (i, &a) in t.annihilators.iter().enumerate() {
                    if a == c {
                        let mut rest = t.annihilators.clone();
                        rest.remove(i);
                        next.add_term(
                            Term {
                                creators: t.creators.clone(),
                                annihilators: rest,
                            },
                            coeff.clone() * self.q.pow((k - 1 - i) as u32),
                        );
                    }
                }
            }
            current = next;
        }
        current
    }

    /// Normal form of an arbitrary product of generators.
    pub fn product(&self, factors: &[Generator]) -> OperatorPolynomial<S> {
        factors.iter().fold(OperatorPolynomial::one(), |acc, g| {
            let single = match g.kind {
                crate::mode::GeneratorKind::Creation => OperatorPolynomial::creation(g.mode),
                crate::mode::GeneratorKind::Annihilation => {
                    OperatorPolynomial::annihilation(g.mode)
                }
            };
            self.multiply(&acc, &single)
        })
    }

    /// `a·b − q·b·a`.
    pub fn q_mutator(
        &self,
        a: &OperatorPolynomial<S>,
        b: &OperatorPolynomial<S>,
    ) -> OperatorPolynomial<S> {
        self.multiply(a, b)
            .sub(&self.multiply(b, a).scale(self.q.value()))
    }

    /// `a·b − b·a`.
    pub fn commutator(
        &self,
        a: &OperatorPolynomial<S>,
        b: &OperatorPolynomial<S>,
    ) -> OperatorPolynomial<S> {
        self.multiply(a, b).sub(&self.multiply(b, a))
    }
}

fn push_pending<S: Scalar>(
    pending: &mut BTreeMap<Vec<Generator>, S>,
    word: Vec<Generator>,
    coeff: S,
) {
    if coeff.is_zero() {
        return;
    }
    match pending.get_mut(&word) {
        Some(existing) => {
            let sum = existing.clone() + coeff;
            if sum.is_zero() {
                pending.remove(&word);
            } else {
                *existing = sum;
            }
        }
        None => {
            pending.insert(word, coeff);
        }
    }
}
