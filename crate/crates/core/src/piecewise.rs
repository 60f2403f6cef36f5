//! Piecewise polynomials in the `x` variable with the left-continuous
//! convention: segment `i` owns `(breaks[i], breaks[i+1]]` (the first segment
//! also owns its left endpoint) and is stored in the local variable
//! `u = x - breaks[i]`.

use crate::derivator::Derivator;
use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq)]
pub struct PiecewisePolynomial<T> {
    breaks: Vec<T>,
    segments: Vec<Polynomial<T>>,
}

impl<T: Real> PiecewisePolynomial<T> {
    pub fn new(breaks: Vec<T>, segments: Vec<Polynomial<T>>) -> Self {
        assert!(breaks.len() >= 2, "need at least one segment");
        assert_eq!(breaks.len(), segments.len() + 1);
        debug_assert!(breaks.windows(2).all(|w| w[0] < w[1]));
        Self { breaks, segments }
    }

    pub fn constant(a: T, b: T, c: T) -> Self {
        Self::new(vec![a, b], vec![Polynomial::constant(c)])
    }

    pub fn breaks(&self) -> &[T] {
        &self.breaks
    }

    pub fn domain(&self) -> (T, T) {
        (self.breaks[0], *self.breaks.last().unwrap())
    }

    fn segment_index(&self, x: T) -> usize {
        if x <= self.breaks[0] {
            return 0;
        }
        let i = self.breaks.partition_point(|&u| u < x);
        (i - 1).min(self.segments.len() - 1)
    }

    pub fn eval(&self, x: T) -> T {
        let i = self.segment_index(x);
        self.segments[i].eval(x - self.breaks[i])
    }

    /// Right-hand limit; undefined at the right end of the domain.
    pub fn eval_right(&self, x: T) -> Result<T> {
        let (_, b) = self.domain();
        if x >= b {
            return Err(Error::RightLimitAtEnd { b: b.lossy() });
        }
        let i = self
            .breaks
            .partition_point(|&u| u <= x)
            .saturating_sub(1)
            .min(self.segments.len() - 1);
        Ok(self.segments[i].eval(x - self.breaks[i]))
    }

    /// Rewrites on a refinement of the break set (which must contain the
    /// current breaks and share the endpoints).
    fn refine(&self, breaks: &[T]) -> Self {
        let mut segments = Vec::with_capacity(breaks.len() - 1);
        for w in breaks.windows(2) {
            let i = self.segment_index((w[0] + w[1]) / (T::one() + T::one()));
            segments.push(self.segments[i].taylor_shift(w[0] - self.breaks[i]));
        }
        Self::new(breaks.to_vec(), segments)
    }

    fn merged_breaks(&self, other: &Self) -> Vec<T> {
        let mut b: Vec<T> = self
            .breaks
            .iter()
            .chain(other.breaks.iter())
            .copied()
            .collect();
        b.sort_by(|p, q| p.partial_cmp(q).unwrap());
        b.dedup();
        b
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&Polynomial<T>, &Polynomial<T>) -> Polynomial<T>) -> Self {
        let breaks = self.merged_breaks(other);
        let a = self.refine(&breaks);
        let b = other.refine(&breaks);
        let segments = a
            .segments
            .iter()
            .zip(b.segments.iter())
            .map(|(p, q)| f(p, q))
            .collect();
        Self::new(breaks, segments)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |p, q| p.add(q))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |p, q| p.sub(q))
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.zip_with(other, |p, q| p.mul(q))
    }

    pub fn scale(&self, s: T) -> Self {
        Self {
            breaks: self.breaks.clone(),
            segments: self.segments.iter().map(|p| p.scale(s)).collect(),
        }
    }

    pub fn map_segments(&self, f: impl Fn(&Polynomial<T>) -> Polynomial<T>) -> Self {
        Self {
            breaks: self.breaks.clone(),
            segments: self.segments.iter().map(f).collect(),
        }
    }

    /// Exact `\int_{[c,e)} f d mu_{g^C}`: per linear segment of `g^C`, the
    /// integrand times the slope has a closed-form antiderivative. Atoms are
    /// not included here.
    pub fn integrate_against_gc(&self, d: &Derivator<T>, c: T, e: T) -> T {
        if c >= e {
            return T::zero();
        }
        let mut cuts: Vec<T> = self
            .breaks
            .iter()
            .copied()
            .chain(d.breakpoints().iter().map(|&(x, _)| x))
            .filter(|&x| x > c && x < e)
            .collect();
        cuts.push(c);
        cuts.push(e);
        cuts.sort_by(|p, q| p.partial_cmp(q).unwrap());
        cuts.dedup();
        let mut total = T::zero();
        for w in cuts.windows(2) {
            let (u, v) = (w[0], w[1]);
            let slope = (d.gc_at(v) - d.gc_at(u)) / (v - u);
            if slope == T::zero() {
                continue;
            }
            let i = self.segment_index((u + v) / (T::one() + T::one()));
            let lo = u - self.breaks[i];
            let hi = v - self.breaks[i];
            total = total + self.segments[i].integral(lo, hi) * slope;
        }
        total
    }
}
