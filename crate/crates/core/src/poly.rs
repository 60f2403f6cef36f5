//! Dense univariate polynomials in monomial form, used for exact segment
//! arithmetic and for the closed-form monomial representations.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Largest degree for which binomial coefficients are formed.
pub const BINOMIAL_GUARD: usize = 60;

/// `C(n, k)` by pairwise multiplication of rationals; guards against `n > 60`.
pub fn binomial<T: Real>(n: usize, k: usize) -> Result<T> {
    if n > BINOMIAL_GUARD {
        return Err(Error::DegreeTooLarge {
            n,
            max: BINOMIAL_GUARD,
        });
    }
    if k > n {
        return Ok(T::zero());
    }
    let k = k.min(n - k);
    let mut acc = T::one();
    for i in 0..k {
        acc = acc * T::of_usize(n - k + 1 + i) / T::of_usize(i + 1);
    }
    Ok(acc)
}

/// Coefficients in increasing degree; the zero polynomial is an empty list.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial<T> {
    pub coeffs: Vec<T>,
}

impl<T: Real> Polynomial<T> {
    pub fn new(coeffs: Vec<T>) -> Self {
        let mut p = Self { coeffs };
        p.trim();
        p
    }

    pub fn zero() -> Self {
        Self { coeffs: vec![] }
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `u^n`.
    pub fn unit(n: usize) -> Self {
        let mut c = vec![T::zero(); n + 1];
        c[n] = T::one();
        Self { coeffs: c }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn trim(&mut self) {
        while let Some(&last) = self.coeffs.last() {
            if last == T::zero() {
                self.coeffs.pop();
            } else {
                break;
            }
        }
    }

    pub fn eval(&self, u: T) -> T {
        let mut acc = T::zero();
        for &c in self.coeffs.iter().rev() {
            acc = acc * u + c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &a)| a * T::of_usize(i))
            .collect();
        Self::new(c)
    }

    /// k-th derivative.
    pub fn derivative_n(&self, k: usize) -> Self {
        let mut p = self.clone();
        for _ in 0..k {
            p = p.derivative();
        }
        p
    }

    /// Antiderivative with zero constant term.
    pub fn antiderivative(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = Vec::with_capacity(self.coeffs.len() + 1);
        c.push(T::zero());
        for (i, &a) in self.coeffs.iter().enumerate() {
            c.push(a / T::of_usize(i + 1));
        }
        Self::new(c)
    }

    /// Definite integral over `[lo, hi]` in the polynomial's own variable.
    pub fn integral(&self, lo: T, hi: T) -> T {
        let f = self.antiderivative();
        f.eval(hi) - f.eval(lo)
    }

    pub fn scale(&self, s: T) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut c = vec![T::zero(); n];
        for (i, &a) in self.coeffs.iter().enumerate() {
            c[i] = c[i] + a;
        }
        for (i, &b) in other.coeffs.iter().enumerate() {
            c[i] = c[i] + b;
        }
        Self::new(c)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-T::one()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut c = vec![T::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                c[i + j] = c[i + j] + a * b;
            }
        }
        Self::new(c)
    }

    /// Substitute an affine argument: returns `q` with `q(u) = p(alpha + beta*u)`.
    pub fn compose_affine(&self, alpha: T, beta: T) -> Self {
        // Horner with a linear polynomial argument.
        let mut acc = Self::zero();
        let arg = Self::new(vec![alpha, beta]);
        for &c in self.coeffs.iter().rev() {
            acc = acc.mul(&arg).add(&Self::constant(c));
        }
        acc
    }

    /// Rewrite around a shifted origin: returns `q` with `q(u) = p(u + shift)`.
    pub fn taylor_shift(&self, shift: T) -> Self {
        self.compose_affine(shift, T::one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_values() {
        assert_eq!(binomial::<f64>(5, 2).unwrap(), 10.0);
        assert_eq!(binomial::<f64>(0, 0).unwrap(), 1.0);
        assert_eq!(binomial::<f64>(6, 6).unwrap(), 1.0);
        assert_eq!(binomial::<f64>(4, 7).unwrap(), 0.0);
        assert!(matches!(
            binomial::<f64>(61, 2),
            Err(Error::DegreeTooLarge { .. })
        ));
        // C(60,30) to full double precision via the pairwise product
        let c = binomial::<f64>(60, 30).unwrap();
        assert!((c / 1.18264581564861424e17 - 1.0).abs() < 1e-14);
    }

    #[test]
    fn arithmetic_and_calculus() {
        let p = Polynomial::new(vec![1.0, -2.0, 3.0]); // 1 - 2u + 3u^2
        assert_eq!(p.eval(2.0), 1.0 - 4.0 + 12.0);
        assert_eq!(p.derivative().coeffs, vec![-2.0, 6.0]);
        assert_eq!(p.antiderivative().eval(1.0), 1.0 - 1.0 + 1.0);
        assert!((p.integral(0.0, 1.0) - 1.0).abs() < 1e-15);

        let q = Polynomial::new(vec![0.0, 1.0]);
        assert_eq!(p.mul(&q).coeffs, vec![0.0, 1.0, -2.0, 3.0]);
        assert_eq!(p.add(&q).coeffs, vec![1.0, -1.0, 3.0]);
    }

    #[test]
    fn affine_composition() {
        // p(u) = u^2, q(u) = p(1 + 2u) = 1 + 4u + 4u^2
        let p = Polynomial::<f64>::unit(2);
        let q = p.compose_affine(1.0, 2.0);
        assert_eq!(q.coeffs, vec![1.0, 4.0, 4.0]);
        // Taylor shift inverts itself
        let r = q.taylor_shift(0.5).taylor_shift(-0.5);
        for (a, b) in r.coeffs.iter().zip(q.coeffs.iter()) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}
