//! Derivators: nondecreasing, left-continuous functions `g` on `[a, b]` with a
//! continuous piecewise-linear part and finitely many jumps. The derivator is
//! the single source of truth for the measure `mu_g`, the pseudometric `d_g`,
//! the jump set `D_g` and the flat set `C_g`.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// `g = g^C + g^B` with `g^C` continuous piecewise linear (given by its graph)
/// and `g^B` a finite sum of unit steps scaled by positive gaps.
///
/// Construction normalizes `g(a) = 0` by shifting the continuous part.
#[derive(Debug, Clone, PartialEq)]
pub struct Derivator<T> {
    breakpoints: Vec<(T, T)>,
    jumps: Vec<(T, T)>,
}

/// One piece of the jump partition: the first piece is `[x_0, x_1]`, later
/// pieces are `(x_{j-1}, x_j]`. `y_lo`/`y_hi` carry the image under `g^C`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Piece<T> {
    pub index: usize,
    pub x_lo: T,
    pub x_hi: T,
    pub closed_left: bool,
    pub y_lo: T,
    pub y_hi: T,
}

impl<T: Real> Piece<T> {
    pub fn is_degenerate_x(&self) -> bool {
        self.x_lo == self.x_hi
    }

    pub fn is_degenerate_y(&self) -> bool {
        self.y_lo == self.y_hi
    }
}

impl<T: Real> Derivator<T> {
    /// Validates and normalizes a derivator specification.
    pub fn new(interval: (T, T), gc_breakpoints: Vec<(T, T)>, jumps: Vec<(T, T)>) -> Result<Self> {
        let (a, b) = interval;
        if !(a.is_finite() && b.is_finite()) || a > b {
            return Err(Error::InvalidDerivator(format!(
                "bad interval [{}, {}]",
                a, b
            )));
        }
        if gc_breakpoints.is_empty() {
            return Err(Error::InvalidDerivator("no breakpoints".into()));
        }
        for &(x, y) in &gc_breakpoints {
            if !(x.is_finite() && y.is_finite()) {
                return Err(Error::InvalidDerivator("non-finite breakpoint".into()));
            }
        }
        if gc_breakpoints.first().unwrap().0 != a || gc_breakpoints.last().unwrap().0 != b {
            return Err(Error::InvalidDerivator(
                "breakpoints do not span [a, b]".into(),
            ));
        }
        for w in gc_breakpoints.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(Error::InvalidDerivator(
                    "breakpoint abscissas not strictly increasing".into(),
                ));
            }
            if w[1].1 < w[0].1 {
                return Err(Error::InvalidDerivator(
                    "breakpoint values not nondecreasing".into(),
                ));
            }
        }
        let mut prev: Option<T> = None;
        for &(x, d) in &jumps {
            if !(x.is_finite() && d.is_finite()) {
                return Err(Error::InvalidDerivator("non-finite jump".into()));
            }
            if d <= T::zero() {
                return Err(Error::NonpositiveGap {
                    at: x.lossy(),
                    gap: d.lossy(),
                });
            }
            if x < a || x >= b {
                return Err(Error::InvalidDerivator(format!(
                    "jump abscissa {} outside [a, b)",
                    x
                )));
            }
            if let Some(p) = prev {
                if x <= p {
                    return Err(Error::InvalidDerivator(
                        "jump abscissas not strictly increasing".into(),
                    ));
                }
            }
            prev = Some(x);
        }
        let shift = gc_breakpoints[0].1;
        let breakpoints = gc_breakpoints.into_iter().map(|(x, y)| (x, y - shift)).collect();
        Ok(Self { breakpoints, jumps })
    }

    pub fn a(&self) -> T {
        self.breakpoints[0].0
    }

    pub fn b(&self) -> T {
        self.breakpoints.last().unwrap().0
    }

    pub fn breakpoints(&self) -> &[(T, T)] {
        &self.breakpoints
    }

    pub fn jumps(&self) -> &[(T, T)] {
        &self.jumps
    }

    fn check_domain(&self, x: T) -> Result<()> {
        if x < self.a() || x > self.b() || x.is_nan() {
            Err(Error::OutOfDomain {
                x: x.lossy(),
                a: self.a().lossy(),
                b: self.b().lossy(),
            })
        } else {
            Ok(())
        }
    }

    /// `g^C(x)` by linear interpolation; assumes `x` in domain.
    pub(crate) fn gc_at(&self, x: T) -> T {
        let bp = &self.breakpoints;
        if x <= bp[0].0 {
            return bp[0].1;
        }
        if x >= bp[bp.len() - 1].0 {
            return bp[bp.len() - 1].1;
        }
        // last k with bp[k].0 <= x
        let k = bp.partition_point(|&(u, _)| u <= x) - 1;
        let (x0, y0) = bp[k];
        let (x1, y1) = bp[k + 1];
        if x == x0 {
            return y0;
        }
        y0 + (y1 - y0) / (x1 - x0) * (x - x0)
    }

    /// Sum of gaps strictly below `x`.
    pub(crate) fn jump_sum_before(&self, x: T) -> T {
        let mut s = T::zero();
        for &(u, d) in &self.jumps {
            if u < x {
                s = s + d;
            } else {
                break;
            }
        }
        s
    }

    /// Sum of gaps `x_i` with `c <= x_i < e`.
    pub(crate) fn jump_sum_in(&self, c: T, e: T) -> T {
        let mut s = T::zero();
        for &(u, d) in &self.jumps {
            if u >= e {
                break;
            }
            if u >= c {
                s = s + d;
            }
        }
        s
    }

    /// `g(x)` without a domain check.
    pub(crate) fn g_at(&self, x: T) -> T {
        self.gc_at(x) + self.jump_sum_before(x)
    }

    /// `g(x)` with the left-continuous convention; `g(a) = 0`.
    pub fn eval(&self, x: T) -> Result<T> {
        self.check_domain(x)?;
        Ok(self.g_at(x))
    }

    /// Right-hand limit `g(x^+) = g(x) + gap(x)`; undefined at `b`.
    pub fn eval_right(&self, x: T) -> Result<T> {
        self.check_domain(x)?;
        if x == self.b() {
            return Err(Error::RightLimitAtEnd { b: x.lossy() });
        }
        Ok(self.g_at(x) + self.gap_at(x))
    }

    pub(crate) fn gap_at(&self, x: T) -> T {
        match self.jumps.binary_search_by(|&(u, _)| u.partial_cmp(&x).unwrap()) {
            Ok(i) => self.jumps[i].1,
            Err(_) => T::zero(),
        }
    }

    /// `Delta g(x)`: the stored gap at a jump abscissa, zero elsewhere.
    pub fn gap(&self, x: T) -> Result<T> {
        self.check_domain(x)?;
        Ok(self.gap_at(x))
    }

    /// `mu_g([c, e)) = g(e) - g(c)`, computed as continuous part plus gaps so
    /// the split additivity is exact.
    pub fn measure(&self, c: T, e: T) -> Result<T> {
        self.check_domain(c)?;
        self.check_domain(e)?;
        if c > e {
            return Err(Error::ReversedInterval {
                c: c.lossy(),
                e: e.lossy(),
            });
        }
        Ok(self.gc_at(e) - self.gc_at(c) + self.jump_sum_in(c, e))
    }

    /// Pseudometric `d_g(x, y) = |g(x) - g(y)|`.
    pub fn pseudo_distance(&self, x: T, y: T) -> Result<T> {
        Ok((self.eval(x)? - self.eval(y)?).abs())
    }

    /// Splits into `(continuous part, pure-jump part)`; the parts recompose
    /// `g` exactly.
    pub fn split_parts(&self) -> (Self, Self) {
        let cont = Self {
            breakpoints: self.breakpoints.clone(),
            jumps: vec![],
        };
        let zero_graph = if self.a() == self.b() {
            vec![(self.a(), T::zero())]
        } else {
            vec![(self.a(), T::zero()), (self.b(), T::zero())]
        };
        let jump = Self {
            breakpoints: zero_graph,
            jumps: self.jumps.clone(),
        };
        (cont, jump)
    }

    /// The ordered jump partition: jump abscissas cut `[a, b]` into
    /// `m + 1` pieces, the first closed on the left and degenerate when
    /// `a` itself carries a jump.
    pub fn pieces(&self) -> Vec<Piece<T>> {
        let mut cuts = Vec::with_capacity(self.jumps.len() + 2);
        cuts.push(self.a());
        for &(u, _) in &self.jumps {
            cuts.push(u);
        }
        cuts.push(self.b());
        let mut out = Vec::with_capacity(cuts.len() - 1);
        for i in 0..cuts.len() - 1 {
            out.push(Piece {
                index: i,
                x_lo: cuts[i],
                x_hi: cuts[i + 1],
                closed_left: i == 0,
                y_lo: self.gc_at(cuts[i]),
                y_hi: self.gc_at(cuts[i + 1]),
            });
        }
        out
    }

    /// Index of the piece containing `x` under the left-continuous convention.
    pub(crate) fn piece_index(&self, x: T) -> usize {
        // pieces end at the jump abscissas; count jumps strictly below x
        self.jumps.partition_point(|&(u, _)| u < x)
    }

    /// Largest `z` in `[a, b]` with `g(z) <= level`; requires `level >= 0`.
    pub(crate) fn last_x_with_g_at_most(&self, level: T) -> T {
        if self.g_at(self.b()) <= level {
            return self.b();
        }
        let crits = self.critical_points();
        let mut best = self.a();
        for w in crits.windows(2) {
            let (c0, c1) = (w[0], w[1]);
            let v0p = self.g_at(c0) + self.gap_at(c0);
            if v0p > level {
                return best;
            }
            let v1 = self.g_at(c1);
            if v1 <= level {
                best = c1;
                continue;
            }
            // affine with positive slope on (c0, c1]
            let m = (v1 - v0p) / (c1 - c0);
            return c0 + (level - v0p) / m;
        }
        best
    }

    /// Sorted union of breakpoint and jump abscissas; `g` is affine on each
    /// open gap between consecutive entries.
    pub(crate) fn critical_points(&self) -> Vec<T> {
        let mut pts: Vec<T> = self.breakpoints.iter().map(|&(x, _)| x).collect();
        pts.extend(self.jumps.iter().map(|&(x, _)| x));
        pts.sort_by(|p, q| p.partial_cmp(q).unwrap());
        pts.dedup();
        pts
    }

    /// Rightmost `x` with `g^C(x) = y`; `y` is clamped to the range of `g^C`.
    pub(crate) fn gc_rightmost_preimage(&self, y: T) -> T {
        let bp = &self.breakpoints;
        let last = bp.len() - 1;
        if y >= bp[last].1 {
            return bp[last].0;
        }
        if y < bp[0].1 {
            return bp[0].0;
        }
        // last k with ys[k] <= y, then extend right through flats
        let mut k = bp.partition_point(|&(_, v)| v <= y) - 1;
        while k + 1 < bp.len() && bp[k + 1].1 == bp[k].1 {
            k += 1;
        }
        if bp[k].1 == y || k == last {
            return bp[k].0;
        }
        let (x0, y0) = bp[k];
        let (x1, y1) = bp[k + 1];
        x0 + (y - y0) / (y1 - y0) * (x1 - x0)
    }

    /// Leftmost `x` with `g^C(x) = y`.
    pub(crate) fn gc_leftmost_preimage(&self, y: T) -> T {
        let bp = &self.breakpoints;
        if y <= bp[0].1 {
            return bp[0].0;
        }
        if y > bp[bp.len() - 1].1 {
            return bp[bp.len() - 1].0;
        }
        // first k with ys[k] >= y, then extend left through flats
        let mut k = bp.partition_point(|&(_, v)| v < y);
        while k > 0 && bp[k - 1].1 == bp[k].1 {
            k -= 1;
        }
        if bp[k].1 == y || k == 0 {
            return bp[k].0;
        }
        let (x0, y0) = bp[k - 1];
        let (x1, y1) = bp[k];
        x0 + (y - y0) / (y1 - y0) * (x1 - x0)
    }

    /// The open component `(a_n, b_n)` of the flat set `C_g` containing `t`,
    /// or `None` when `g` is not locally constant at `t`.
    pub(crate) fn flat_component(&self, t: T) -> Option<(T, T)> {
        let y = self.gc_at(t);
        let mut hi = self.gc_rightmost_preimage(y);
        if let Some(&(u, _)) = self
            .jumps
            .iter()
            .find(|&&(u, _)| u >= t && u < hi)
        {
            hi = u;
        }
        let mut lo = self.gc_leftmost_preimage(y);
        if let Some(&(u, _)) = self
            .jumps
            .iter()
            .rev()
            .find(|&&(u, _)| u < t && u >= lo)
        {
            lo = u;
        }
        let left_ok = lo < t || t == self.a();
        let right_ok = hi > t || t == self.b();
        if left_ok && right_ok && (lo < t || hi > t) {
            Some((lo, hi))
        } else {
            None
        }
    }
}

/// Spec-facing constructor alias.
pub fn make_derivator<T: Real>(
    interval: (T, T),
    gc_breakpoints: Vec<(T, T)>,
    jumps: Vec<(T, T)>,
) -> Result<Derivator<T>> {
    Derivator::new(interval, gc_breakpoints, jumps)
}
