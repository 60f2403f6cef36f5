//! Lebesgue–Stieltjes integration against `mu_g` and the `L^2_g` inner
//! product. The measure splits exactly into the continuous part (handled by
//! Gauss–Legendre quadrature per linear segment, or in closed form when an
//! exact piecewise-polynomial tag is available) and a finite atom sum.

use std::sync::Arc;

use crate::derivator::Derivator;
use crate::error::{Error, Result};
use crate::piecewise::PiecewisePolynomial;
use crate::poly::Polynomial;
use crate::scalar::Real;

/// Default quadrature tolerance.
pub const DEFAULT_TOL: f64 = 1e-10;
/// Refinement cap: at most `2^20` subintervals per integral.
pub const MAX_SUBINTERVALS: usize = 1 << 20;

const GL16_NODES: [f64; 16] = [
    -9.89400934991649939e-1,
    -9.44575023073232600e-1,
    -8.65631202387831755e-1,
    -7.55404408355002999e-1,
    -6.17876244402643771e-1,
    -4.58016777657227370e-1,
    -2.81603550779258915e-1,
    -9.50125098376374544e-2,
    9.50125098376374544e-2,
    2.81603550779258915e-1,
    4.58016777657227370e-1,
    6.17876244402643771e-1,
    7.55404408355002999e-1,
    8.65631202387831755e-1,
    9.44575023073232600e-1,
    9.89400934991649939e-1,
];
const GL16_WEIGHTS: [f64; 16] = [
    2.71524594117540374e-2,
    6.22535239386477063e-2,
    9.51585116824925914e-2,
    1.24628971255534030e-1,
    1.49595988816576764e-1,
    1.69156519395002619e-1,
    1.82603415044923612e-1,
    1.89450610455068585e-1,
    1.89450610455068585e-1,
    1.82603415044923612e-1,
    1.69156519395002619e-1,
    1.49595988816576764e-1,
    1.24628971255534030e-1,
    9.51585116824925914e-2,
    6.22535239386477063e-2,
    2.71524594117540374e-2,
];

/// A scalar function on `[a, b]`, evaluated with the left-continuous
/// convention at jump abscissas. The evaluator must be re-entrant. An
/// optional exact piecewise-polynomial tag unlocks closed-form integration.
#[derive(Clone)]
pub struct Integrand<T> {
    eval: Arc<dyn Fn(T) -> T + Send + Sync>,
    exact: Option<PiecewisePolynomial<T>>,
}

impl<T: Real> Integrand<T> {
    pub fn from_fn(f: impl Fn(T) -> T + Send + Sync + 'static) -> Self {
        Self {
            eval: Arc::new(f),
            exact: None,
        }
    }

    pub fn from_exact(p: PiecewisePolynomial<T>) -> Self {
        let q = p.clone();
        Self {
            eval: Arc::new(move |x| q.eval(x)),
            exact: Some(p),
        }
    }

    pub fn with_exact(f: impl Fn(T) -> T + Send + Sync + 'static, p: PiecewisePolynomial<T>) -> Self {
        Self {
            eval: Arc::new(f),
            exact: Some(p),
        }
    }

    pub fn eval(&self, x: T) -> T {
        (self.eval)(x)
    }

    pub fn exact(&self) -> Option<&PiecewisePolynomial<T>> {
        self.exact.as_ref()
    }

    /// Right-hand limit: exact when tagged, sampled otherwise. `hint` bounds
    /// the sampling offset from above.
    pub fn eval_right(&self, x: T, hint: T) -> T {
        if let Some(p) = &self.exact {
            if let Ok(v) = p.eval_right(x) {
                return v;
            }
        }
        right_limit(|u| self.eval(u), x, hint)
    }

    /// Pointwise product, combining exact tags when both are present.
    pub fn product(&self, other: &Self) -> Self {
        let f = self.eval.clone();
        let g = other.eval.clone();
        let exact = match (&self.exact, &other.exact) {
            (Some(p), Some(q)) => Some(p.mul(q)),
            _ => None,
        };
        Self {
            eval: Arc::new(move |x| f(x) * g(x)),
            exact,
        }
    }

    /// Worst disagreement between the evaluator and the exact tag at segment
    /// midpoints (the tag's consistency invariant).
    pub fn tag_spread(&self) -> Option<T> {
        let p = self.exact.as_ref()?;
        let two = T::one() + T::one();
        let mut worst = T::zero();
        for w in p.breaks().windows(2) {
            let m = (w[0] + w[1]) / two;
            worst = worst.max((self.eval(m) - p.eval(m)).abs());
        }
        Some(worst)
    }
}

impl<T: Real> core::fmt::Debug for Integrand<T> {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("Integrand")
            .field("exact", &self.exact.is_some())
            .finish()
    }
}

/// Samples `f(x + h)` with geometrically shrinking `h` until stable.
pub fn right_limit<T: Real>(f: impl Fn(T) -> T, x: T, hint: T) -> T {
    let half = T::of(0.5);
    let mut h = hint * T::of(2f64.powi(-8));
    let mut prev = f(x + h);
    for _ in 0..36 {
        h = h * half;
        let cur = f(x + h);
        let tol = T::of(1e-13) * (T::one() + cur.abs());
        if (cur - prev).abs() <= tol {
            return cur;
        }
        prev = cur;
    }
    prev
}

fn gauss16<T: Real>(f: &impl Fn(T) -> T, u: T, v: T) -> T {
    let two = T::one() + T::one();
    let mid = (u + v) / two;
    let half = (v - u) / two;
    let mut s = T::zero();
    for i in 0..16 {
        s = s + T::of(GL16_WEIGHTS[i]) * f(mid + half * T::of(GL16_NODES[i]));
    }
    s * half
}

fn adaptive<T: Real>(
    f: &impl Fn(T) -> T,
    u: T,
    v: T,
    whole: T,
    tol: T,
    used: &mut usize,
) -> Result<T> {
    let two = T::one() + T::one();
    let mid = (u + v) / two;
    let left = gauss16(f, u, mid);
    let right = gauss16(f, mid, v);
    let refined = left + right;
    let spread = (refined - whole).abs();
    if spread <= tol || mid <= u || mid >= v {
        return Ok(refined);
    }
    *used += 2;
    if *used > MAX_SUBINTERVALS {
        return Err(Error::ToleranceNotReached {
            requested: tol.lossy(),
            achieved: spread.lossy(),
            subintervals: *used,
        });
    }
    let half_tol = tol / two;
    Ok(adaptive(f, u, mid, left, half_tol, used)? + adaptive(f, mid, v, right, half_tol, used)?)
}

/// `\int_{[c,e)} f d mu_g`: exact atoms plus the continuous part, the latter
/// in closed form when `f` carries an exact tag and by adaptive composite
/// Gauss–Legendre otherwise.
pub fn ls_integrate<T: Real>(
    d: &Derivator<T>,
    f: &Integrand<T>,
    c: T,
    e: T,
    tol: T,
) -> Result<T> {
    if c > e {
        return Err(Error::ReversedInterval {
            c: c.lossy(),
            e: e.lossy(),
        });
    }
    d.eval(c)?;
    d.eval(e)?;
    let mut atoms = T::zero();
    for &(x, delta) in d.jumps() {
        if x >= e {
            break;
        }
        if x >= c {
            atoms = atoms + f.eval(x) * delta;
        }
    }
    if c == e {
        return Ok(T::zero());
    }
    let continuous = if let Some(p) = f.exact() {
        p.integrate_against_gc(d, c, e)
    } else {
        quadrature_against_gc(d, |x| f.eval(x), c, e, tol)?
    };
    Ok(continuous + atoms)
}

/// Adaptive quadrature of `f` against `mu_{g^C}` over `[c, e]`, split at every
/// critical point of the derivator.
pub(crate) fn quadrature_against_gc<T: Real>(
    d: &Derivator<T>,
    f: impl Fn(T) -> T,
    c: T,
    e: T,
    tol: T,
) -> Result<T> {
    let mut cuts: Vec<T> = d
        .critical_points()
        .into_iter()
        .filter(|&x| x > c && x < e)
        .collect();
    cuts.push(c);
    cuts.push(e);
    cuts.sort_by(|p, q| p.partial_cmp(q).unwrap());
    cuts.dedup();
    let spans: Vec<(T, T, T)> = cuts
        .windows(2)
        .filter_map(|w| {
            let slope = (d.gc_at(w[1]) - d.gc_at(w[0])) / (w[1] - w[0]);
            (slope != T::zero()).then_some((w[0], w[1], slope))
        })
        .collect();
    if spans.is_empty() {
        return Ok(T::zero());
    }
    let span_tol = tol / T::of_usize(spans.len());
    let mut used = spans.len();
    let mut total = T::zero();
    for (u, v, slope) in spans {
        let fs = |x: T| f(x) * slope;
        let whole = gauss16(&fs, u, v);
        total = total + adaptive(&fs, u, v, whole, span_tol, &mut used)?;
    }
    Ok(total)
}

/// `<f, h>` in `L^2_g` over `[a, b)`.
pub fn l2_inner<T: Real>(d: &Derivator<T>, f: &Integrand<T>, h: &Integrand<T>, tol: T) -> Result<T> {
    ls_integrate(d, &f.product(h), d.a(), d.b(), tol)
}

/// `L^2_g` norm.
pub fn l2_norm<T: Real>(d: &Derivator<T>, f: &Integrand<T>, tol: T) -> Result<T> {
    Ok(l2_inner(d, f, f, tol)?.max(T::zero()).sqrt())
}

/// Ramp profile approximating the indicator of `[x1, x2)`: the uniformly
/// g-continuous composition `f o g` where `f` rises from 0 to 1 across
/// `(g(x1) - 1/n, g(x1))`, holds 1 up to `g(x2) - 1/n`, and falls back to 0
/// at `g(x2)`.
pub fn plateau_approx<T: Real>(
    d: &Derivator<T>,
    x1: T,
    x2: T,
    n: usize,
) -> Result<Integrand<T>> {
    let g1 = d.eval(x1)?;
    let g2 = d.eval(x2)?;
    if g2 - g1 <= T::zero() {
        return Err(Error::NullMeasure {
            x1: x1.lossy(),
            x2: x2.lossy(),
        });
    }
    let nn = T::of_usize(n.max(1));
    let inv = T::one() / nn;
    let l0 = g1 - inv;
    let l3 = g2;
    let ramp = move |y: T| {
        let up = nn * (y - l0);
        let down = nn * (l3 - y);
        up.min(down).max(T::zero()).min(T::one())
    };
    let dd = d.clone();
    let evaluator = move |x: T| ramp(dd.g_at(x));

    // exact representation: cut wherever g crosses a corner level
    let two = T::one() + T::one();
    let levels = [l0, g1, g2 - inv, l3, (l0 + l3) / two];
    let mut breaks: Vec<T> = d.critical_points();
    let crits = breaks.clone();
    for w in crits.windows(2) {
        let (u, v) = (w[0], w[1]);
        let base = d.g_at(u) + d.gap_at(u);
        let m = (d.g_at(v) - base) / (v - u);
        if m <= T::zero() {
            continue;
        }
        for &level in &levels {
            let x = u + (level - base) / m;
            if x > u && x < v {
                breaks.push(x);
            }
        }
    }
    breaks.sort_by(|p, q| p.partial_cmp(q).unwrap());
    breaks.dedup();
    let mut segments = Vec::with_capacity(breaks.len() - 1);
    for w in breaks.windows(2) {
        let (u, v) = (w[0], w[1]);
        let base = d.g_at(u) + d.gap_at(u);
        let m = (d.g_at(v) - base) / (v - u);
        let ym = base + m * (v - u) / two;
        let up = nn * (ym - l0);
        let down = nn * (l3 - ym);
        let seg = if up.min(down) >= T::one() {
            Polynomial::constant(T::one())
        } else if up.min(down) <= T::zero() {
            Polynomial::zero()
        } else if up <= down {
            // n*(base + m*(x-u) - l0) in the local variable x-u
            Polynomial::new(vec![nn * (base - l0), nn * m])
        } else {
            Polynomial::new(vec![nn * (l3 - base), -(nn * m)])
        };
        segments.push(seg);
    }
    let exact = PiecewisePolynomial::new(breaks, segments);
    Ok(Integrand::with_exact(evaluator, exact))
}

/// A numerical derivative value together with its estimated error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivativeEstimate<T> {
    pub value: T,
    pub error_estimate: T,
}

/// Stieltjes derivative of `f` at `t`: the jump quotient on `D_g`, the
/// right-end quotient of the flat component on `C_g`, and a shrinking
/// difference quotient in `d_g` elsewhere.
pub fn stieltjes_derivative<T: Real>(
    d: &Derivator<T>,
    f: &Integrand<T>,
    t: T,
) -> Result<DerivativeEstimate<T>> {
    d.eval(t)?;
    if t >= d.b() {
        return Err(Error::OutOfDomain {
            x: t.lossy(),
            a: d.a().lossy(),
            b: d.b().lossy(),
        });
    }
    if d.gap_at(t) > T::zero() {
        return right_quotient(d, f, t);
    }
    if let Some((_, hi)) = d.flat_component(t) {
        if hi >= d.b() {
            return Err(Error::FlatReachesEnd { at: t.lossy() });
        }
        return right_quotient(d, f, hi);
    }
    symmetric_quotient(d, f, t)
}

fn right_quotient<T: Real>(d: &Derivator<T>, f: &Integrand<T>, t: T) -> Result<DerivativeEstimate<T>> {
    let half = T::of(0.5);
    let ft = f.eval(t);
    let gt = d.g_at(t);
    let mut h = (d.b() - t) * T::of(0.25);
    let mut best: Option<(T, T)> = None;
    let mut prev: Option<T> = None;
    for _ in 0..52 {
        let s = t + h;
        let denom = d.g_at(s) - gt;
        if denom > T::zero() {
            let q = (f.eval(s) - ft) / denom;
            if let Some(p) = prev {
                let spread = (q - p).abs();
                if best.map_or(true, |(_, e)| spread < e) {
                    best = Some((q, spread));
                }
                if spread <= T::of(1e-12) * (T::one() + q.abs()) {
                    return Ok(DerivativeEstimate {
                        value: q,
                        error_estimate: spread,
                    });
                }
            }
            prev = Some(q);
        }
        h = h * half;
        if h <= T::epsilon() * (T::one() + t.abs()) {
            break;
        }
    }
    finish_quotient(best, t)
}

fn symmetric_quotient<T: Real>(
    d: &Derivator<T>,
    f: &Integrand<T>,
    t: T,
) -> Result<DerivativeEstimate<T>> {
    if t <= d.a() {
        return right_quotient(d, f, t);
    }
    let half = T::of(0.5);
    let room = (t - d.a()).min(d.b() - t);
    let mut h = room * half;
    let mut best: Option<(T, T)> = None;
    let mut prev: Option<T> = None;
    for _ in 0..45 {
        let denom = d.g_at(t + h) - d.g_at(t - h);
        if denom > T::zero() {
            let q = (f.eval(t + h) - f.eval(t - h)) / denom;
            if let Some(p) = prev {
                let spread = (q - p).abs();
                if best.map_or(true, |(_, e)| spread < e) {
                    best = Some((q, spread));
                }
            }
            prev = Some(q);
        }
        h = h * half;
        if h <= T::epsilon() * (T::one() + t.abs()) {
            break;
        }
    }
    finish_quotient(best, t)
}

fn finish_quotient<T: Real>(best: Option<(T, T)>, t: T) -> Result<DerivativeEstimate<T>> {
    match best {
        Some((value, error_estimate))
            if error_estimate <= T::of(1e-2) * (T::one() + value.abs()) =>
        {
            Ok(DerivativeEstimate {
                value,
                error_estimate,
            })
        }
        Some((_, spread)) => Err(Error::NonConvergentQuotient {
            at: t.lossy(),
            spread: spread.lossy(),
        }),
        None => Err(Error::NonConvergentQuotient {
            at: t.lossy(),
            spread: f64::INFINITY,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;

    fn tol() -> f64 {
        DEFAULT_TOL
    }

    #[test]
    fn total_mass_and_atoms() {
        let a = fixture_a();
        let one = Integrand::from_fn(|_| 1.0);
        assert!((ls_integrate(&a, &one, 0.0, 1.0, tol()).unwrap() - 2.0).abs() < 1e-12);

        let c = fixture_c();
        let sq = Integrand::from_fn(|x: f64| x * x);
        assert!((ls_integrate(&c, &sq, 0.0, 1.0, tol()).unwrap() - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn identity_integrand_on_fixture_a() {
        // continuous part 1/2 plus the atom f(0.5)*1 = 1/2
        let a = fixture_a();
        let f = Integrand::from_fn(|x: f64| x);
        let got = ls_integrate(&a, &f, 0.0, 1.0, tol()).unwrap();
        assert!((got - 1.0).abs() < 1e-12);
        let exact = Integrand::from_exact(PiecewisePolynomial::new(
            vec![0.0, 1.0],
            vec![Polynomial::new(vec![0.0, 1.0])],
        ));
        let got2 = ls_integrate(&a, &exact, 0.0, 1.0, tol()).unwrap();
        assert!((got2 - 1.0).abs() < 1e-15);
    }

    #[test]
    fn inner_products() {
        let c = fixture_c();
        let g1 = Integrand::from_fn(|x: f64| x);
        assert!((l2_inner(&c, &g1, &g1, tol()).unwrap() - 1.0 / 3.0).abs() < 1e-12);

        let b = fixture_bprime();
        let ind0 = Integrand::from_fn(|x: f64| if x == 0.0 { 1.0 } else { 0.0 });
        assert!((l2_inner(&b, &ind0, &ind0, tol()).unwrap() - 1.0).abs() < 1e-15);

        let a = fixture_a();
        let one = Integrand::from_fn(|_| 1.0);
        assert!((l2_norm(&a, &one, tol()).unwrap().powi(2) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn sub_range_additivity() {
        let a = fixture_a();
        let f = Integrand::from_fn(|x: f64| (3.0 * x).sin() + 1.0);
        let whole = ls_integrate(&a, &f, 0.0, 1.0, tol()).unwrap();
        let left = ls_integrate(&a, &f, 0.0, 0.6, tol()).unwrap();
        let right = ls_integrate(&a, &f, 0.6, 1.0, tol()).unwrap();
        assert!((left + right - whole).abs() < 2.0 * tol());
    }

    #[test]
    fn plateau_profile_values() {
        let c = fixture_c();
        let f = plateau_approx(&c, 0.25, 0.75, 10).unwrap();
        assert_eq!(f.eval(0.5), 1.0);
        assert_eq!(f.eval(0.1), 0.0);
        assert!((f.eval(0.2) - 0.5).abs() < 1e-12);
        assert!(f.tag_spread().unwrap() < 1e-12);
        assert!(matches!(
            plateau_approx(&fixture_flat(), 0.45, 0.55, 3),
            Err(Error::NullMeasure { .. })
        ));
    }

    #[test]
    fn plateau_l2_bound() {
        // || f o g - 1_{[x1,x2)} ||^2 <= 8/n, computed exactly
        for d in [fixture_a(), fixture_c()] {
            let (x1, x2) = (0.25, 0.75);
            for n in [1usize, 2, 5, 17, 60, 100] {
                let f = plateau_approx(&d, x1, x2, n).unwrap();
                let f2 = ls_integrate(&d, &f.product(&f), d.a(), d.b(), tol()).unwrap();
                let cross = ls_integrate(&d, &f, x1, x2, tol()).unwrap();
                let mass = d.measure(x1, x2).unwrap();
                let err2 = f2 - 2.0 * cross + mass;
                assert!(
                    err2 <= 8.0 / n as f64 + 1e-12,
                    "n={n} err2={err2} bound={}",
                    8.0 / n as f64
                );
                assert!(err2 >= -1e-12);
            }
        }
    }

    #[test]
    fn derivative_classical_point() {
        let c = fixture_c();
        let sq = Integrand::from_fn(|x: f64| x * x);
        let est = stieltjes_derivative(&c, &sq, 0.5).unwrap();
        assert!((est.value - 1.0).abs() < 1e-6);
    }

    #[test]
    fn derivative_at_jump() {
        let a = fixture_a();
        let ind = Integrand::from_fn(|x: f64| if x == 0.5 { 1.0 } else { 0.0 });
        let est = stieltjes_derivative(&a, &ind, 0.5).unwrap();
        assert!((est.value + 1.0).abs() < 1e-9);
    }

    #[test]
    fn derivative_on_flat_component() {
        let d = fixture_flat();
        // f = G(g) with G(y) = y^2 is g-differentiable; on the flat component
        // [0.4, 0.6] the derivative is taken at the right end 0.6
        let dd = d.clone();
        let f = Integrand::from_fn(move |x| dd.eval(x).unwrap().powi(2));
        let est = stieltjes_derivative(&d, &f, 0.5).unwrap();
        assert!((est.value - 2.0 * 0.4).abs() < 1e-5, "got {}", est.value);

        let e = Derivator::new((0.0, 1.0), vec![(0.0, 0.0), (0.5, 0.5), (1.0, 0.5)], vec![])
            .unwrap();
        let f = Integrand::from_fn(|_| 1.0);
        assert!(matches!(
            stieltjes_derivative(&e, &f, 0.7),
            Err(Error::FlatReachesEnd { .. })
        ));
    }

    use crate::derivator::Derivator;

    #[test]
    fn exact_vs_quadrature_paths() {
        let d = fixture_a();
        let p = PiecewisePolynomial::new(
            vec![0.0, 0.4, 1.0],
            vec![
                Polynomial::new(vec![1.0, -2.0, 0.5, 3.0]),
                Polynomial::new(vec![0.2, 1.0, -1.0]),
            ],
        );
        let tagged = Integrand::from_exact(p.clone());
        let untagged = Integrand::from_fn(move |x| p.eval(x));
        let a = ls_integrate(&d, &tagged, 0.0, 1.0, tol()).unwrap();
        let b = ls_integrate(&d, &untagged, 0.0, 1.0, tol()).unwrap();
        assert!((a - b).abs() <= 1e-8 * (1.0 + a.abs()));
    }

    #[test]
    fn fundamental_theorem_recovery() {
        // F(t) = \int_{[a,t)} phi dmu_g with piecewise-polynomial phi:
        // the Stieltjes derivative recovers phi at jumps exactly and at
        // continuity points within 1e-5
        let d = fixture_a();
        let phi = Integrand::from_exact(PiecewisePolynomial::new(
            vec![0.0, 0.5, 1.0],
            vec![
                Polynomial::new(vec![1.0, 1.0]),
                Polynomial::new(vec![0.25, -0.5]),
            ],
        ));
        let dd = d.clone();
        let phi2 = phi.clone();
        let big_f = Integrand::from_fn(move |t| {
            ls_integrate(&dd, &phi2, 0.0, t, DEFAULT_TOL).unwrap()
        });
        let at_jump = stieltjes_derivative(&d, &big_f, 0.5).unwrap();
        assert!((at_jump.value - phi.eval(0.5)).abs() < 1e-12);
        for t in [0.1, 0.3, 0.7, 0.9] {
            let est = stieltjes_derivative(&d, &big_f, t).unwrap();
            assert!(
                (est.value - phi.eval(t)).abs() < 1e-5,
                "t={t} got {} want {}",
                est.value,
                phi.eval(t)
            );
        }
    }
}
