use super::{Coefficient, QError};
use crate::exactnum::Rational;

/// `Σ_{n ≤ order} aₙ tⁿ` in a formal variable `t`, all listed degrees exact.
#[derive(Clone, Debug)]
pub struct TSeries<A: Coefficient> {
    ctx: A::Ctx,
    coeffs: Vec<A>,
}

impl<A: Coefficient> PartialEq for TSeries<A> {
    fn eq(&self, other: &TSeries<A>) -> bool {
        self.coeffs == other.coeffs
    }
}

impl<A: Coefficient> TSeries<A> {
    /// Pads with zeros or drops degrees so that exactly `0..=order` is stored.
    pub fn new(ctx: &A::Ctx, mut coeffs: Vec<A>, order: usize) -> TSeries<A> {
        coeffs.resize_with(order + 1, || A::zero_in(ctx));
        TSeries { ctx: ctx.clone(), coeffs }
    }

    pub fn zero(ctx: &A::Ctx, order: usize) -> TSeries<A> {
        TSeries::new(ctx, Vec::new(), order)
    }

    pub fn one(ctx: &A::Ctx, order: usize) -> TSeries<A> {
        TSeries::new(ctx, vec![A::one_in(ctx)], order)
    }

    /// `c·tᵈ`.
    pub fn monomial(c: A, degree: usize, order: usize) -> TSeries<A> {
        let ctx = c.ctx();
        let mut s = TSeries::zero(&ctx, order);
        if degree <= order {
            s.coeffs[degree] = c;
        }
        s
    }

    pub fn ctx(&self) -> &A::Ctx {
        &self.ctx
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// The least degree not known.
    pub fn t_known_below(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coefficient(&self, n: usize) -> &A {
        &self.coeffs[n]
    }

    pub fn coefficients(&self) -> &[A] {
        &self.coeffs
    }

    pub fn truncate(&self, order: usize) -> TSeries<A> {
        TSeries::new(&self.ctx, self.coeffs.iter().take(order + 1).cloned().collect(), order.min(self.order()))
    }

    pub fn map<B: Coefficient>(&self, ctx: &B::Ctx, f: impl Fn(&A) -> B) -> TSeries<B> {
        TSeries { ctx: ctx.clone(), coeffs: self.coeffs.iter().map(f).collect() }
    }

    pub fn try_map<B: Coefficient, E>(&self, ctx: &B::Ctx, f: impl Fn(&A) -> Result<B, E>) -> Result<TSeries<B>, E> {
        Ok(TSeries { ctx: ctx.clone(), coeffs: self.coeffs.iter().map(f).collect::<Result<_, E>>()? })
    }

    pub fn add(&self, other: &TSeries<A>) -> TSeries<A> {
        let order = self.order().min(other.order());
        let coeffs = (0..=order).map(|n| self.coeffs[n].plus(&other.coeffs[n])).collect();
        TSeries { ctx: self.ctx.clone(), coeffs }
    }

    pub fn sub(&self, other: &TSeries<A>) -> TSeries<A> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> TSeries<A> {
        self.map(&self.ctx, A::negated)
    }

    pub fn scale(&self, r: &Rational) -> TSeries<A> {
        self.map(&self.ctx, |c| c.scaled(r))
    }

    pub fn mul(&self, other: &TSeries<A>) -> TSeries<A> {
        let order = self.order().min(other.order());
        let mut coeffs: Vec<A> = (0..=order).map(|_| A::zero_in(&self.ctx)).collect();
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero_elem() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(order + 1 - i) {
                if b.is_zero_elem() {
                    continue;
                }
                coeffs[i + j] = coeffs[i + j].plus(&a.times(b));
            }
        }
        TSeries { ctx: self.ctx.clone(), coeffs }
    }

    /// `t ↦ tᵏ`, keeping the order.
    pub fn substitute_power(&self, k: usize) -> TSeries<A> {
        assert!(k >= 1);
        let order = self.order();
        let mut coeffs: Vec<A> = (0..=order).map(|_| A::zero_in(&self.ctx)).collect();
        for (n, c) in self.coeffs.iter().enumerate() {
            if n * k > order {
                break;
            }
            coeffs[n * k] = c.clone();
        }
        TSeries { ctx: self.ctx.clone(), coeffs }
    }

    /// `t ↦ −t`.
    pub fn negate_variable(&self) -> TSeries<A> {
        let coeffs = self.coeffs.iter().enumerate().map(|(n, c)| if n % 2 == 1 { c.negated() } else { c.clone() }).collect();
        TSeries { ctx: self.ctx.clone(), coeffs }
    }

    /// `exp(f)` for `f` with vanishing constant term: `n bₙ = Σ_{m=1..n} m aₘ b_{n−m}`.
    pub fn exp(&self) -> Result<TSeries<A>, QError> {
        if !self.coeffs[0].is_zero_elem() {
            return Err(QError::Precondition("exp needs constant term 0".into()));
        }
        let order = self.order();
        let mut b: Vec<A> = vec![A::one_in(&self.ctx)];
        for n in 1..=order {
            let mut acc = A::zero_in(&self.ctx);
            for m in 1..=n {
                if self.coeffs[m].is_zero_elem() {
                    continue;
                }
                acc = acc.plus(&self.coeffs[m].times(&b[n - m]).scaled(&Rational::from(m)));
            }
            b.push(acc.scaled(&Rational::new(1, n as i64)));
        }
        Ok(TSeries { ctx: self.ctx.clone(), coeffs: b })
    }

    /// `log(f)` for `f` with constant term 1.
    pub fn log(&self) -> Result<TSeries<A>, QError> {
        if !self.coeffs[0].is_one_elem() {
            return Err(QError::Precondition("log needs constant term 1".into()));
        }
        let order = self.order();
        let mut l: Vec<A> = vec![A::zero_in(&self.ctx)];
        for n in 1..=order {
            let mut acc = A::zero_in(&self.ctx);
            for j in 1..n {
                if self.coeffs[j].is_zero_elem() {
                    continue;
                }
                acc = acc.plus(&l[n - j].times(&self.coeffs[j]).scaled(&Rational::from(n - j)));
            }
            l.push(self.coeffs[n].minus(&acc.scaled(&Rational::new(1, n as i64))));
        }
        Ok(TSeries { ctx: self.ctx.clone(), coeffs: l })
    }

    /// `f⁻¹` for `f` with a unit constant term.
    pub fn invert(&self) -> Result<TSeries<A>, QError> {
        let c0 = &self.coeffs[0];
        let c_inv = if c0.is_one_elem() { c0.clone() } else { c0.try_inverse().ok_or(QError::NonUnit)? };
        let order = self.order();
        let mut v: Vec<A> = vec![c_inv.clone()];
        for n in 1..=order {
            let mut acc = A::zero_in(&self.ctx);
            for m in 1..=n {
                if self.coeffs[m].is_zero_elem() {
                    continue;
                }
                acc = acc.plus(&self.coeffs[m].times(&v[n - m]));
            }
            v.push(c_inv.times(&acc).negated());
        }
        Ok(TSeries { ctx: self.ctx.clone(), coeffs: v })
    }
}
