//! Adaptive explicit Runge–Kutta integration with dense output and terminal events.
//!
//! The integrator is the Dormand–Prince 5(4) pair with the PI step-size
//! controller and the fourth-order continuous extension described by Hairer,
//! Nørsett and Wanner (`DOPRI5`). All controller constants are fixed, so a
//! given problem always produces the same sequence of steps.

use thiserror::Error;

use crate::roots::{find_root_with, RootOptions};
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OdeError {
    #[error("step size underflow at t = {t} (h = {h}); singularity on the integration path?")]
    StepFailure { t: f64, h: f64 },
    #[error("right-hand side is not finite at t = {t}")]
    NonFiniteRhs { t: f64 },
    #[error("maximum number of steps ({max_steps}) exceeded at t = {t}")]
    TooManySteps { t: f64, max_steps: usize },
    #[error("invalid problem: {0}")]
    InvalidProblem(&'static str),
}

/// Which sign changes of an event function stop the integration, judged in
/// the order the integrator visits them (so reversed for backward runs in `t`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Crossing {
    Any,
    /// negative to positive
    Rising,
    /// positive to negative
    Falling,
}

impl Crossing {
    fn accepts<T: Real>(self, before: T) -> bool {
        match self {
            Crossing::Any => true,
            Crossing::Rising => before < T::zero(),
            Crossing::Falling => before > T::zero(),
        }
    }
}

pub type EventFn<'a, T> = Box<dyn Fn(T, &[T]) -> T + Send + Sync + 'a>;

/// Terminal event: integration stops at the first accepted zero of `g`.
pub struct Event<'a, T> {
    pub g: EventFn<'a, T>,
    pub crossing: Crossing,
}

impl<'a, T> Event<'a, T> {
    pub fn new(g: impl Fn(T, &[T]) -> T + Send + Sync + 'a, crossing: Crossing) -> Self {
        Self {
            g: Box::new(g),
            crossing,
        }
    }
}

/// An initial value problem `y' = rhs(t, y)`, `y(t0) = y0`, integrated towards `t_end`.
pub struct IvpProblem<'a, T, F> {
    pub rhs: F,
    pub t0: T,
    pub t_end: T,
    pub y0: Vec<T>,
    pub rel_tol: T,
    pub abs_tol: T,
    pub events: Vec<Event<'a, T>>,
    /// Upper bound on |h|; `None` means `|t_end - t0|`.
    pub max_step: Option<T>,
    pub first_step: Option<T>,
    pub max_steps: usize,
}

impl<'a, T, F> IvpProblem<'a, T, F>
where
    T: Real,
    F: Fn(T, &[T], &mut [T]),
{
    pub fn new(rhs: F, t0: T, t_end: T, y0: Vec<T>) -> Self {
        Self {
            rhs,
            t0,
            t_end,
            y0,
            rel_tol: T::lit(1e-10),
            abs_tol: T::lit(1e-10),
            events: Vec::new(),
            max_step: None,
            first_step: None,
            max_steps: 200_000,
        }
    }

    pub fn tolerances(mut self, rel_tol: T, abs_tol: T) -> Self {
        self.rel_tol = rel_tol;
        self.abs_tol = abs_tol;
        self
    }

    pub fn event(mut self, event: Event<'a, T>) -> Self {
        self.events.push(event);
        self
    }

    pub fn max_step(mut self, h: T) -> Self {
        self.max_step = Some(h);
        self
    }

    pub fn first_step(mut self, h: T) -> Self {
        self.first_step = Some(h);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    Completed,
    Event(usize),
}

/// One accepted step with the coefficients of its continuous extension.
#[derive(Debug, Clone)]
struct DenseStep<T> {
    t_old: T,
    h: T,
    /// Valid up to this time (less than `t_old + h` for the event-truncated last step).
    t_stop: T,
    rcont: [Vec<T>; 5],
}

impl<T: Real> DenseStep<T> {
    fn eval_into(&self, t: T, out: &mut [T]) {
        let theta = (t - self.t_old) / self.h;
        let theta1 = T::one() - theta;
        let [r1, r2, r3, r4, r5] = &self.rcont;
        for i in 0..out.len() {
            out[i] = r1[i] + theta * (r2[i] + theta1 * (r3[i] + theta * (r4[i] + theta1 * r5[i])));
        }
    }
}

#[derive(Debug, Clone)]
pub struct IvpSolution<T> {
    /// Accepted points, strictly monotone in `t` along the integration direction.
    pub samples: Vec<(T, Vec<T>)>,
    pub terminated_by: Termination,
    steps: Vec<DenseStep<T>>,
    forward: bool,
}

impl<T: Real> IvpSolution<T> {
    pub fn t_first(&self) -> T {
        self.samples[0].0
    }

    pub fn t_last(&self) -> T {
        self.samples[self.samples.len() - 1].0
    }

    pub fn y_last(&self) -> &[T] {
        &self.samples[self.samples.len() - 1].1
    }

    pub fn dim(&self) -> usize {
        self.samples[0].1.len()
    }

    pub fn contains(&self, t: T) -> bool {
        let (lo, hi) = self.span();
        t >= lo && t <= hi
    }

    /// `(min t, max t)` covered by the solution.
    pub fn span(&self) -> (T, T) {
        let a = self.t_first();
        let b = self.t_last();
        if a <= b {
            (a, b)
        } else {
            (b, a)
        }
    }

    fn locate(&self, t: T) -> Option<&DenseStep<T>> {
        if self.steps.is_empty() || !self.contains(t) {
            return None;
        }
        // partition_point needs a predicate that is true on a prefix
        let idx = if self.forward {
            self.steps.partition_point(|s| s.t_stop < t)
        } else {
            self.steps.partition_point(|s| s.t_stop > t)
        };
        self.steps.get(idx.min(self.steps.len() - 1))
    }

    /// Dense evaluation on the covered interval.
    pub fn eval(&self, t: T) -> Option<Vec<T>> {
        if self.steps.is_empty() {
            return if t == self.t_first() {
                Some(self.samples[0].1.clone())
            } else {
                None
            };
        }
        let step = self.locate(t)?;
        let mut out = vec![T::zero(); self.dim()];
        step.eval_into(t, &mut out);
        Some(out)
    }

    pub fn eval_component(&self, t: T, i: usize) -> Option<T> {
        self.eval(t).map(|y| y[i])
    }

    /// Step boundaries, useful for building sampling tables.
    pub fn step_times(&self) -> Vec<T> {
        self.samples.iter().map(|(t, _)| *t).collect()
    }
}

// Dormand–Prince 5(4) tableau.
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

struct Tableau<T> {
    c: [T; 4],
    a2: T,
    a3: [T; 2],
    a4: [T; 3],
    a5: [T; 4],
    a6: [T; 5],
    a7: [T; 5],
    e: [T; 6],
    d: [T; 6],
}

impl<T: Real> Tableau<T> {
    fn new() -> Self {
        let l = T::lit;
        Self {
            c: [l(C2), l(C3), l(C4), l(C5)],
            a2: l(A21),
            a3: [l(A31), l(A32)],
            a4: [l(A41), l(A42), l(A43)],
            a5: [l(A51), l(A52), l(A53), l(A54)],
            a6: [l(A61), l(A62), l(A63), l(A64), l(A65)],
            a7: [l(A71), l(A73), l(A74), l(A75), l(A76)],
            e: [l(E1), l(E3), l(E4), l(E5), l(E6), l(E7)],
            d: [l(D1), l(D3), l(D4), l(D5), l(D6), l(D7)],
        }
    }
}

fn eval_rhs<T: Real, F: Fn(T, &[T], &mut [T])>(
    rhs: &F,
    t: T,
    y: &[T],
    out: &mut [T],
) -> Result<(), OdeError> {
    rhs(t, y, out);
    if out.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(OdeError::NonFiniteRhs { t: t.as_f64() })
    }
}

/// Initial step guess (Hairer–Wanner `hinit`).
fn initial_step<T: Real, F: Fn(T, &[T], &mut [T])>(
    rhs: &F,
    t0: T,
    y0: &[T],
    f0: &[T],
    dir: T,
    hmax: T,
    rtol: T,
    atol: T,
) -> Result<T, OdeError> {
    let n = y0.len();
    let nf = T::lit(n as f64);
    let mut dnf = T::zero();
    let mut dny = T::zero();
    for i in 0..n {
        let sk = atol + rtol * y0[i].abs();
        dnf = dnf + (f0[i] / sk).powi(2);
        dny = dny + (y0[i] / sk).powi(2);
    }
    dnf = (dnf / nf).sqrt();
    dny = (dny / nf).sqrt();
    let mut h = if dnf <= T::lit(1e-10) || dny <= T::lit(1e-10) {
        T::lit(1e-6)
    } else {
        T::lit(0.01) * dny / dnf
    };
    h = h.min(hmax);
    let y1: Vec<T> = (0..n).map(|i| y0[i] + dir * h * f0[i]).collect();
    let mut f1 = vec![T::zero(); n];
    eval_rhs(rhs, t0 + dir * h, &y1, &mut f1)?;
    let mut der2 = T::zero();
    for i in 0..n {
        let sk = atol + rtol * y0[i].abs();
        der2 = der2 + ((f1[i] - f0[i]) / sk).powi(2);
    }
    der2 = (der2 / nf).sqrt() / h;
    let der12 = der2.abs().max(dnf);
    let h1 = if der12 <= T::lit(1e-15) {
        T::lit(1e-6).max(h * T::lit(1e-3))
    } else {
        (T::lit(0.01) / der12).powf(T::lit(0.2))
    };
    Ok((T::lit(100.0) * h).min(h1).min(hmax))
}

/// Integrates `problem` from `t0` towards `t_end`.
pub fn integrate<T, F>(problem: &IvpProblem<'_, T, F>) -> Result<IvpSolution<T>, OdeError>
where
    T: Real,
    F: Fn(T, &[T], &mut [T]),
{
    let p = problem;
    if !(p.rel_tol > T::zero() && p.abs_tol > T::zero()) {
        return Err(OdeError::InvalidProblem("tolerances must be positive"));
    }
    if p.t0 == p.t_end || !p.t0.is_finite() || !p.t_end.is_finite() {
        return Err(OdeError::InvalidProblem("t0 must differ from t_end"));
    }
    if p.y0.is_empty() || p.y0.iter().any(|v| !v.is_finite()) {
        return Err(OdeError::InvalidProblem("y0 must be non-empty and finite"));
    }

    let tab = Tableau::<T>::new();
    let n = p.y0.len();
    let span = (p.t_end - p.t0).abs();
    let dir = (p.t_end - p.t0).signum();
    let forward = dir > T::zero();
    let hmax = p.max_step.map(|h| h.abs()).unwrap_or(span).min(span);
    let hmin = T::lit(1e-14) * span;
    let (rtol, atol) = (p.rel_tol, p.abs_tol);

    // controller constants
    let beta = T::lit(0.04);
    let expo1 = T::lit(0.2) - beta * T::lit(0.75);
    let facc1 = T::lit(1.0 / 0.2);
    let facc2 = T::lit(1.0 / 10.0);
    let safe = T::lit(0.9);
    let mut facold = T::lit(1e-4);

    let mut t = p.t0;
    let mut y = p.y0.clone();
    let mut k1 = vec![T::zero(); n];
    eval_rhs(&p.rhs, t, &y, &mut k1)?;
    let mut h = match p.first_step {
        Some(h0) => h0.abs().min(hmax),
        None => initial_step(&p.rhs, t, &y, &k1, dir, hmax, rtol, atol)?,
    };

    let mut k2 = vec![T::zero(); n];
    let mut k3 = vec![T::zero(); n];
    let mut k4 = vec![T::zero(); n];
    let mut k5 = vec![T::zero(); n];
    let mut k6 = vec![T::zero(); n];
    let mut k7 = vec![T::zero(); n];
    let mut ytmp = vec![T::zero(); n];
    let mut ynew = vec![T::zero(); n];

    let mut g_prev: Vec<T> = p.events.iter().map(|e| (e.g)(t, &y)).collect();

    let mut samples = vec![(t, y.clone())];
    let mut steps: Vec<DenseStep<T>> = Vec::new();
    let mut rejected_last = false;

    for _ in 0..p.max_steps {
        let remaining = (p.t_end - t).abs();
        let last = h >= remaining * (T::one() - T::lit(4.0) * T::epsilon());
        if last {
            h = remaining;
        }
        if h < hmin {
            return Err(OdeError::StepFailure {
                t: t.as_f64(),
                h: h.as_f64(),
            });
        }
        let hs = dir * h;

        for i in 0..n {
            ytmp[i] = y[i] + hs * tab.a2 * k1[i];
        }
        eval_rhs(&p.rhs, t + tab.c[0] * hs, &ytmp, &mut k2)?;
        for i in 0..n {
            ytmp[i] = y[i] + hs * (tab.a3[0] * k1[i] + tab.a3[1] * k2[i]);
        }
        eval_rhs(&p.rhs, t + tab.c[1] * hs, &ytmp, &mut k3)?;
        for i in 0..n {
            ytmp[i] = y[i] + hs * (tab.a4[0] * k1[i] + tab.a4[1] * k2[i] + tab.a4[2] * k3[i]);
        }
        eval_rhs(&p.rhs, t + tab.c[2] * hs, &ytmp, &mut k4)?;
        for i in 0..n {
            ytmp[i] = y[i]
                + hs * (tab.a5[0] * k1[i] + tab.a5[1] * k2[i] + tab.a5[2] * k3[i] + tab.a5[3] * k4[i]);
        }
        eval_rhs(&p.rhs, t + tab.c[3] * hs, &ytmp, &mut k5)?;
        for i in 0..n {
            ytmp[i] = y[i]
                + hs * (tab.a6[0] * k1[i]
                    + tab.a6[1] * k2[i]
                    + tab.a6[2] * k3[i]
                    + tab.a6[3] * k4[i]
                    + tab.a6[4] * k5[i]);
        }
        let t_new = if last { p.t_end } else { t + hs };
        eval_rhs(&p.rhs, t_new, &ytmp, &mut k6)?;
        for i in 0..n {
            ynew[i] = y[i]
                + hs * (tab.a7[0] * k1[i]
                    + tab.a7[1] * k3[i]
                    + tab.a7[2] * k4[i]
                    + tab.a7[3] * k5[i]
                    + tab.a7[4] * k6[i]);
        }
        eval_rhs(&p.rhs, t_new, &ynew, &mut k7)?;

        let mut err = T::zero();
        for i in 0..n {
            let e = hs
                * (tab.e[0] * k1[i]
                    + tab.e[1] * k3[i]
                    + tab.e[2] * k4[i]
                    + tab.e[3] * k5[i]
                    + tab.e[4] * k6[i]
                    + tab.e[5] * k7[i]);
            let sk = atol + rtol * y[i].abs().max(ynew[i].abs());
            err = err + (e / sk).powi(2);
        }
        err = (err / T::lit(n as f64)).sqrt();
        if !err.is_finite() {
            return Err(OdeError::NonFiniteRhs { t: t.as_f64() });
        }

        let fac11 = err.powf(expo1);
        if err <= T::one() {
            let fac = (fac11 / facold.powf(beta)) / safe;
            let fac = facc2.max(facc1.min(fac));
            let mut hnew = (h / fac).min(hmax);
            if rejected_last {
                hnew = hnew.min(h);
            }
            facold = err.max(T::lit(1e-4));
            rejected_last = false;

            // continuous extension
            let mut rcont: [Vec<T>; 5] = [
                y.clone(),
                vec![T::zero(); n],
                vec![T::zero(); n],
                vec![T::zero(); n],
                vec![T::zero(); n],
            ];
            for i in 0..n {
                let ydiff = ynew[i] - y[i];
                let bspl = hs * k1[i] - ydiff;
                rcont[1][i] = ydiff;
                rcont[2][i] = bspl;
                rcont[3][i] = ydiff - hs * k7[i] - bspl;
                rcont[4][i] = hs
                    * (tab.d[0] * k1[i]
                        + tab.d[1] * k3[i]
                        + tab.d[2] * k4[i]
                        + tab.d[3] * k5[i]
                        + tab.d[4] * k6[i]
                        + tab.d[5] * k7[i]);
            }
            let step = DenseStep {
                t_old: t,
                h: hs,
                t_stop: t_new,
                rcont,
            };

            // events: earliest accepted sign change in this step
            let mut hit: Option<(T, usize)> = None;
            let mut g_new = Vec::with_capacity(p.events.len());
            for (idx, ev) in p.events.iter().enumerate() {
                let gn = (ev.g)(t_new, &ynew);
                let gp = g_prev[idx];
                let crossed = gp != T::zero()
                    && (gn == T::zero() || gn.signum() != gp.signum())
                    && ev.crossing.accepts(gp);
                if crossed {
                    let mut buf = vec![T::zero(); n];
                    let opts = RootOptions {
                        xtol_abs: T::epsilon() * (t.abs() + h),
                        xtol_rel: T::zero(),
                        ftol: atol,
                        max_iter: 200,
                    };
                    let te = find_root_with(
                        |tau| {
                            step.eval_into(tau, &mut buf);
                            (ev.g)(tau, &buf)
                        },
                        t,
                        t_new,
                        &opts,
                    )
                    .unwrap_or(t_new);
                    let earlier = match hit {
                        None => true,
                        Some((tb, _)) => (te - tb) * dir < T::zero(),
                    };
                    if earlier {
                        hit = Some((te, idx));
                    }
                }
                g_new.push(gn);
            }

            if let Some((te, idx)) = hit {
                let mut ye = vec![T::zero(); n];
                step.eval_into(te, &mut ye);
                let mut step = step;
                step.t_stop = te;
                if (te - t) * dir > T::zero() {
                    samples.push((te, ye));
                    steps.push(step);
                }
                return Ok(IvpSolution {
                    samples,
                    terminated_by: Termination::Event(idx),
                    steps,
                    forward,
                });
            }

            steps.push(step);
            std::mem::swap(&mut y, &mut ynew);
            std::mem::swap(&mut k1, &mut k7);
            t = t_new;
            samples.push((t, y.clone()));
            g_prev = g_new;

            if last {
                return Ok(IvpSolution {
                    samples,
                    terminated_by: Termination::Completed,
                    steps,
                    forward,
                });
            }
            h = hnew;
        } else {
            let hnew = h / facc1.min(fac11 / safe);
            rejected_last = true;
            h = hnew;
        }
    }
    Err(OdeError::TooManySteps {
        t: t.as_f64(),
        max_steps: p.max_steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{E, PI};

    #[test]
    fn zero_field_is_constant() {
        let prob = IvpProblem::new(|_t: f64, _y: &[f64], dy: &mut [f64]| dy[0] = 0.0, 0.0, 1.0, vec![1.0]);
        let sol = integrate(&prob).unwrap();
        assert!(sol.samples.iter().all(|(_, y)| y[0] == 1.0));
        assert_eq!(sol.terminated_by, Termination::Completed);
    }

    #[test]
    fn exponential_growth() {
        let prob = IvpProblem::new(|_t: f64, y: &[f64], dy: &mut [f64]| dy[0] = y[0], 0.0, 1.0, vec![1.0]);
        let sol = integrate(&prob).unwrap();
        assert!((sol.y_last()[0] - E).abs() < 1e-8);
        // dense output in the interior
        let mid = sol.eval(0.5).unwrap()[0];
        assert!((mid - 0.5f64.exp()).abs() < 1e-8);
    }

    #[test]
    fn backward_integration() {
        let prob = IvpProblem::new(|_t: f64, y: &[f64], dy: &mut [f64]| dy[0] = y[0], 1.0, 0.0, vec![E]);
        let sol = integrate(&prob).unwrap();
        assert!((sol.y_last()[0] - 1.0).abs() < 1e-8);
        assert!(sol.samples.windows(2).all(|w| w[1].0 < w[0].0));
        assert!((sol.eval(0.25).unwrap()[0] - 0.25f64.exp()).abs() < 1e-8);
    }

    fn oscillator(_t: f64, y: &[f64], dy: &mut [f64]) {
        dy[0] = -y[1];
        dy[1] = y[0];
    }

    #[test]
    fn oscillator_event_at_pi() {
        let prob = IvpProblem::new(oscillator, 0.0, 10.0, vec![1.0, 0.0])
            .event(Event::new(|_t, y: &[f64]| y[1], Crossing::Falling));
        let sol = integrate(&prob).unwrap();
        assert_eq!(sol.terminated_by, Termination::Event(0));
        assert!((sol.t_last() - PI).abs() < 1e-8);
        assert!(sol.y_last()[1].abs() <= prob.abs_tol);
    }

    #[test]
    fn oscillator_returns_after_one_period() {
        let prob = IvpProblem::new(oscillator, 0.0, 2.0 * PI, vec![1.0, 0.0]);
        let sol = integrate(&prob).unwrap();
        let y = sol.y_last();
        let err = (y[0] - 1.0).abs().max(y[1].abs());
        assert!(err <= 100.0 * prob.rel_tol, "err = {err}");
    }

    #[test]
    fn samples_strictly_monotone_and_deterministic() {
        let prob = IvpProblem::new(oscillator, 0.0, 20.0, vec![1.0, 0.0]);
        let a = integrate(&prob).unwrap();
        let b = integrate(&prob).unwrap();
        assert!(a.samples.windows(2).all(|w| w[1].0 > w[0].0));
        assert_eq!(a.samples.len(), b.samples.len());
        for (sa, sb) in a.samples.iter().zip(&b.samples) {
            assert_eq!(sa.0.to_bits(), sb.0.to_bits());
            for (u, v) in sa.1.iter().zip(&sb.1) {
                assert_eq!(u.to_bits(), v.to_bits());
            }
        }
    }

    #[test]
    fn singularity_reports_step_failure() {
        // y' = y^2 blows up at t = 1
        let prob = IvpProblem::new(|_t: f64, y: &[f64], dy: &mut [f64]| dy[0] = y[0] * y[0], 0.0, 2.0, vec![1.0]);
        let err = integrate(&prob).unwrap_err();
        assert!(matches!(err, OdeError::StepFailure { .. } | OdeError::NonFiniteRhs { .. }), "{err:?}");
    }

    #[test]
    fn non_finite_rhs() {
        let prob = IvpProblem::new(
            |t: f64, _y: &[f64], dy: &mut [f64]| dy[0] = if t > 0.5 { f64::NAN } else { 1.0 },
            0.0,
            1.0,
            vec![0.0],
        );
        assert!(matches!(integrate(&prob), Err(OdeError::NonFiniteRhs { .. })));
    }

    #[test]
    fn single_precision_instance() {
        let prob = IvpProblem::new(|_t: f32, y: &[f32], dy: &mut [f32]| dy[0] = y[0], 0.0f32, 1.0, vec![1.0])
            .tolerances(1e-6, 1e-6);
        let sol = integrate(&prob).unwrap();
        assert!((sol.y_last()[0] - std::f32::consts::E).abs() < 1e-4);
    }

    #[test]
    fn rejects_bad_tolerances() {
        let prob = IvpProblem::new(oscillator, 0.0, 1.0, vec![1.0, 0.0]).tolerances(0.0, 1e-8);
        assert!(matches!(integrate(&prob), Err(OdeError::InvalidProblem(_))));
    }
}
