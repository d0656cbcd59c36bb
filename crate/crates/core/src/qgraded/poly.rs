use std::fmt;

use super::{Coefficient, QSeries};
use crate::exactnum::Rational;

/// Polynomial `Σ cᵢ wⁱ` in an auxiliary variable `w`, trailing zeros trimmed.
#[derive(Clone)]
pub struct Poly<C: Coefficient> {
    ctx: C::Ctx,
    coeffs: Vec<C>,
}

impl<C: Coefficient> PartialEq for Poly<C> {
    fn eq(&self, other: &Poly<C>) -> bool {
        self.coeffs == other.coeffs
    }
}

impl<C: Coefficient> fmt::Debug for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.coeffs).finish()
    }
}

impl<C: Coefficient> Poly<C> {
    pub fn new(ctx: &C::Ctx, mut coeffs: Vec<C>) -> Poly<C> {
        while coeffs.last().is_some_and(C::is_zero_elem) {
            coeffs.pop();
        }
        Poly { ctx: ctx.clone(), coeffs }
    }

    pub fn constant(c: C) -> Poly<C> {
        let ctx = c.ctx();
        Poly::new(&ctx, vec![c])
    }

    /// The variable `w`.
    pub fn variable(ctx: &C::Ctx) -> Poly<C> {
        Poly::new(ctx, vec![C::zero_in(ctx), C::one_in(ctx)])
    }

    pub fn coefficients(&self) -> &[C] {
        &self.coeffs
    }

    /// Degree, with the zero polynomial at `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coefficient(&self, i: usize) -> C {
        self.coeffs.get(i).cloned().unwrap_or_else(|| C::zero_in(&self.ctx))
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(C::is_one_elem)
    }

    /// Horner evaluation at a series.
    pub fn eval_series(&self, x: &QSeries<C>) -> QSeries<C> {
        let mut acc = QSeries::zero(&self.ctx);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(&QSeries::constant(c.clone()));
        }
        acc
    }
}

impl<C: Coefficient> Coefficient for Poly<C> {
    type Ctx = C::Ctx;

    fn ctx(&self) -> C::Ctx {
        self.ctx.clone()
    }
    fn zero_in(ctx: &C::Ctx) -> Poly<C> {
        Poly::new(ctx, Vec::new())
    }
    fn one_in(ctx: &C::Ctx) -> Poly<C> {
        Poly::new(ctx, vec![C::one_in(ctx)])
    }
    fn is_zero_elem(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn plus(&self, other: &Poly<C>) -> Poly<C> {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new(&self.ctx, (0..n).map(|i| self.coefficient(i).plus(&other.coefficient(i))).collect())
    }
    fn negated(&self) -> Poly<C> {
        Poly::new(&self.ctx, self.coeffs.iter().map(C::negated).collect())
    }
    fn times(&self, other: &Poly<C>) -> Poly<C> {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Poly::zero_in(&self.ctx);
        }
        let mut out = vec![C::zero_in(&self.ctx); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].plus(&a.times(b));
            }
        }
        Poly::new(&self.ctx, out)
    }
    fn scaled(&self, r: &Rational) -> Poly<C> {
        Poly::new(&self.ctx, self.coeffs.iter().map(|c| c.scaled(r)).collect())
    }
}
