//! Heteroclinic orbits of the standard planar system
//!
//! ```text
//! dx/dζ = (G(x) - y) / (ν x),    dy/dζ = ν (1 - x²) / 2
//! ```
//!
//! connecting the saddles `P₋ = (-1, -1)` and `P₊ = (1, 1)`.
//!
//! The unstable branch of `P₋` is followed as a graph `y = φ₋(x)` on
//! `[-1, 0)`. The stable branch of `P₊` is obtained from the same routine
//! applied to the reflected field `G̃(X) = -G(-X)`, using the symmetry
//! `(x, y, ζ) -> (-x, -y, -ζ)`. Near the singular line `x = 0` each branch
//! switches to the blow-up coordinates `s = ln|x|`, `v = (φ - G(0))/x`, in
//! which the critical point `P₀ = (0, G(0))` is resolved: a branch either
//! settles on the slow eigendirection (it reaches `P₀`) or `v` diverges, in
//! which case `φ(0) ≠ G(0)` and the orbit must jump.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ode::{integrate, Crossing, Event, IvpProblem, IvpSolution, Termination};
use crate::reduction::ReducedSystem;
use crate::roots::{find_root_with, RootOptions};

type Rs = ReducedSystem<f64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Minus,
    Plus,
}

impl Side {
    fn sign(self) -> f64 {
        match self {
            Side::Minus => 1.0,
            Side::Plus => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolverOptions {
    /// Distance from the saddle at which integration starts.
    pub offset: f64,
    /// Relative tolerance of every ODE integration.
    pub tol_int: f64,
    /// Relative tolerance on `x_left + x_right = 0` at a jump.
    pub tol_match: f64,
    /// Jumps with `|x_left|` below this are flagged as weak in the connection record.
    pub tol_connect: f64,
    /// Truncation of the orbit at `|ζ| <= zeta_max` (measured from the connection).
    pub zeta_max: f64,
    /// Number of orbit samples on each side of the connection.
    pub samples_per_side: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            offset: 1e-6,
            tol_int: 1e-10,
            tol_match: 1e-8,
            tol_connect: 1e-6,
            zeta_max: f64::INFINITY,
            samples_per_side: 2000,
        }
    }
}

impl SolverOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.offset > 0.0 && self.offset <= 1e-3) {
            return Err(Error::InvalidParameter {
                name: "offset",
                reason: format!("saddle offset must lie in (0, 1e-3] (got {})", self.offset),
            });
        }
        for (name, v) in [
            ("tol_int", self.tol_int),
            ("tol_match", self.tol_match),
            ("tol_connect", self.tol_connect),
        ] {
            if !(v > 0.0 && v < 1e-2) {
                return Err(Error::InvalidParameter {
                    name,
                    reason: format!("tolerance must lie in (0, 1e-2) (got {v})"),
                });
            }
        }
        if !(self.zeta_max > 0.0) {
            return Err(Error::NonPositiveInput {
                name: "zeta_max",
                value: self.zeta_max,
            });
        }
        if self.samples_per_side < 16 {
            return Err(Error::InvalidParameter {
                name: "samples_per_side",
                reason: "need at least 16 samples per side".into(),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SaddleData {
    pub point: (f64, f64),
    pub jacobian: [[f64; 2]; 2],
    /// `(unstable, stable)` eigenvalues
    pub eigenvalues: (f64, f64),
    /// `dy/dx` of the branch of interest at the saddle
    pub branch_tangent_slope: f64,
    /// growth rate of `|x ∓ 1|` along the branch, in ζ
    pub rate: f64,
}

pub fn saddle_linearization(rs: &Rs, side: Side) -> SaddleData {
    let nu = rs.nu;
    let s = side.sign();
    let a = rs.g_prime(-s);
    // (1/ν)(±G'(±1), ∓1; ∓ν², 0) with the upper sign at P₊
    let jacobian = [[-s * a / nu, s / nu], [s * nu, 0.0]];
    let root = (a * a + 4.0 * nu * nu).sqrt();
    let mu = 2.0 * nu / (a + root);
    let (unstable, stable) = match side {
        Side::Minus => (mu, (-a - root) / (2.0 * nu)),
        Side::Plus => ((a + root) / (2.0 * nu), -mu),
    };
    SaddleData {
        point: (-s, -s),
        jacobian,
        eigenvalues: (unstable, stable),
        branch_tangent_slope: nu / mu,
        rate: mu,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum P0Kind {
    AttractiveSpiral,
    RepulsiveSpiral,
    Source,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct P0Data {
    pub point: (f64, f64),
    pub kind: P0Kind,
    /// `G'(0)² - 2ν²`; eigenvalues of the rescaled field are real iff positive
    pub discriminant: f64,
    /// `(μ₀⁺, ν/(2μ₀⁺))` when the eigenvalues are real and positive
    pub fast_eigen: Option<(f64, f64)>,
}

/// Type of `P₀` for the field rescaled by `x d/dζ = d/dη`.
///
/// `kind` follows the trichotomy `G'(0) < 0`, `0 < G'(0) < 2ν²`,
/// `2ν² < G'(0)`; the eigenvalues themselves are real iff the
/// discriminant is positive, which is what the orbit construction uses.
pub fn classify_p0(rs: &Rs) -> Result<P0Data> {
    let a0 = rs.g_prime(0.0);
    let two_nu_sq = 2.0 * rs.nu * rs.nu;
    let scale = 1e-10 * two_nu_sq.max(1.0);
    if a0.abs() <= 1e-10 || (a0 - two_nu_sq).abs() <= scale {
        return Err(Error::DegenerateP0 {
            g_prime0: a0,
            two_nu_sq,
        });
    }
    let kind = if a0 < 0.0 {
        P0Kind::AttractiveSpiral
    } else if a0 < two_nu_sq {
        P0Kind::RepulsiveSpiral
    } else {
        P0Kind::Source
    };
    let discriminant = a0 * a0 - two_nu_sq;
    let fast_eigen = (discriminant > 0.0 && a0 > 0.0).then(|| {
        let mu = (a0 + discriminant.sqrt()) / (2.0 * rs.nu);
        (mu, rs.nu / (2.0 * mu))
    });
    Ok(P0Data {
        point: (0.0, rs.g(0.0)),
        kind,
        discriminant,
        fast_eigen,
    })
}

/// `G` (sign = 1) or the reflected `G̃(X) = -G(-X)` (sign = -1).
#[derive(Clone, Copy)]
struct Field<'a> {
    rs: &'a Rs,
    sign: f64,
}

impl Field<'_> {
    fn g(&self, x: f64) -> f64 {
        self.sign * self.rs.g(self.sign * x)
    }
    fn gp(&self, x: f64) -> f64 {
        self.rs.g_prime(self.sign * x)
    }
    fn gpp(&self, x: f64) -> f64 {
        self.sign * self.rs.g_second(self.sign * x)
    }
    fn d(&self, x: f64) -> f64 {
        self.rs.divided_difference(self.sign * x)
    }
}

/// Point of a branch in its own (possibly reflected) frame.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Pt {
    x: f64,
    /// `φ - G̃(0)`
    w: f64,
    /// reduced time, zero at the start offset
    zeta: f64,
}

#[derive(Debug, Clone)]
enum Piece {
    /// Linearized manifold inside the start offset, parametrized by ζ ≤ 0.
    Tail,
    /// State `[φ - G(x), ζ]` over `x`.
    X(IvpSolution<f64>),
    /// State `[v, ζ]` over `p = -s = -ln|x|`; `back` holds `ζ - zeta_end`.
    S { sol: IvpSolution<f64>, back: IvpSolution<f64>, zeta_end: f64 },
    /// State `[w, ζ]` over `x` up to `x = 0`, both scaled by `scale`.
    W { sol: IvpSolution<f64>, scale: f64 },
    /// Final approach to `P₀` along the slow eigendirection, over `x`.
    Cap { x0: f64, v: f64, zeta0: f64, dzeta_dx: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Arrival {
    /// `φ(0) = G(0)`
    ReachesP0 { slope: f64 },
    /// `φ(0) = G(0) + gap` with `gap > 0` (in the branch's own frame)
    Misses { gap: f64 },
}

/// Unstable branch of `P₋` for a field `g`, as a chain of pieces ordered by increasing `x`.
#[derive(Debug, Clone)]
struct MinusType {
    rs: Rs,
    sign: f64,
    g0: f64,
    offset: f64,
    slope: f64,
    curvature: f64,
    rate: f64,
    pieces: Vec<(Piece, f64, f64)>,
    arrival: Arrival,
}

/// `x` below which the branch is continued in blow-up coordinates.
const X_SWITCH: f64 = 0.25;
/// `|x|` at which an arrival at `P₀` is accepted.
const LOG_X_DECIDE: f64 = -41.446_531_673_892_82; // ln(1e-18)
/// Smallest resolvable `ln|x|`.
const LOG_X_MIN: f64 = -700.0;

impl MinusType {
    fn build(field: Field<'_>, nu: f64, opts: &SolverOptions) -> Result<Self> {
        let rtol = opts.tol_int;
        let atol = opts.tol_int * 1e-3;
        let a = field.gp(-1.0);
        let b = field.gpp(-1.0);
        let root = (a * a + 4.0 * nu * nu).sqrt();
        let slope = 0.5 * (a + root);
        let curvature = (3.0 * nu * nu - slope * b) / (2.0 * a - 3.0 * slope);
        let rate = nu / slope;
        let off = opts.offset;
        let g0 = field.g(0.0);
        let a0 = field.gp(0.0);

        let mut pieces = Vec::new();
        let dist_floor = 1e-8 / slope.max(1.0);
        let zeta_lo = if dist_floor < off {
            (dist_floor / off).ln() / rate
        } else {
            0.0
        };
        pieces.push((Piece::Tail, zeta_lo, 0.0));

        // graph form away from x = 0, in the deviation d = φ - G(x) so that
        // the small denominator near the saddle carries no cancellation
        let x0 = -1.0 + off;
        let d0 = (slope - a) * off + 0.5 * (curvature - b) * off * off;
        let rhs_x = |x: f64, y: &[f64], dy: &mut [f64]| {
            dy[0] = -nu * nu * x * (1.0 - x * x) / (2.0 * y[0]) - field.gp(x);
            dy[1] = -nu * x / y[0];
        };
        let mut prob = IvpProblem::new(rhs_x, x0, -X_SWITCH, vec![d0, 0.0])
            .tolerances(rtol, atol * d0.abs().min(1.0))
            .first_step(off * 1e-2)
            .event(Event::new(|_, y: &[f64]| y[0], Crossing::Falling));
        prob.max_steps = 1_000_000;
        let sol = integrate(&prob)?;
        if let Termination::Event(_) = sol.terminated_by {
            return Err(Error::RegionViolation { x: field.sign * sol.t_last() });
        }
        let mut y1 = sol.y_last().to_vec();
        y1[0] += field.g(-X_SWITCH);
        pieces.push((Piece::X(sol), x0, -X_SWITCH));

        // blow-up coordinates, p = -ln|x| increasing
        let disc = a0 * a0 - 2.0 * nu * nu;
        let v_small = (disc > 0.0).then(|| 0.5 * (a0 - disc.sqrt()));
        // far below v₋ (or anywhere in the spiral case) the branch has escaped
        let v_big = 10.0 * (1.0 + a0.abs() + nu);
        let margin = 1e-9 * (1.0 + v_small.map_or(0.0, f64::abs));
        let p_start = -X_SWITCH.ln();
        let v1 = (y1[0] - g0) / -X_SWITCH;
        let rhs_s = |p: f64, y: &[f64], dy: &mut [f64]| {
            let x = -(-p).exp();
            let den = field.d(x) - y[0];
            // d/dp = -d/ds
            dy[0] = -(nu * nu * (1.0 - x * x) / (2.0 * den) - y[0]);
            dy[1] = -(nu * x / den);
        };
        let mut prob = IvpProblem::new(rhs_s, p_start, -LOG_X_MIN, vec![v1, y1[1]])
            .tolerances(rtol, atol)
            .event(Event::new(move |_, y: &[f64]| y[0] + v_big, Crossing::Falling))
            .event(Event::new(
                move |p, y: &[f64]| field.d(-(-p).exp()) - y[0],
                Crossing::Falling,
            ));
        if let Some(vs) = v_small {
            prob = prob.event(Event::new(
                move |p, y: &[f64]| (p + LOG_X_DECIDE).min(y[0] - vs - margin),
                Crossing::Rising,
            ));
        }
        prob.max_steps = 1_000_000;
        let sol = integrate(&prob)?;
        let p_end = sol.t_last();
        let y2 = sol.y_last().to_vec();
        let x2 = -(-p_end).exp();
        let term = sol.terminated_by;
        // ζ again, backward from the far end, so that it carries an error
        // relative to the remaining increment where the samples crowd
        let rhs_q = |p: f64, _: &[f64], dy: &mut [f64]| {
            let x = -(-p).exp();
            let v = sol.eval_component(p, 0).expect("inside piece");
            dy[0] = -(nu * x / (field.d(x) - v));
        };
        let back = IvpProblem::new(rhs_q, p_end, p_start, vec![0.0])
            .tolerances(rtol, atol * (-p_end).exp());
        let back = integrate(&back)?;
        pieces.push((Piece::S { sol, back, zeta_end: y2[1] }, p_start, p_end));

        let arrival = match term {
            Termination::Event(0) => {
                // (x, w) scaled by |x2|, which may be far below f64 step resolution
                let scale = -x2;
                let rhs_w = move |r: f64, y: &[f64], dy: &mut [f64]| {
                    let x = scale * r;
                    let den = r * field.d(x) - y[0];
                    dy[0] = nu * nu * r * (1.0 - x * x) / (2.0 * den);
                    dy[1] = nu * r / den;
                };
                let prob = IvpProblem::new(rhs_w, -1.0, 0.0, vec![-y2[0], y2[1]])
                    .tolerances(rtol, atol * y2[0].abs())
                    .event(Event::new(
                        move |r, y: &[f64]| r * field.d(scale * r) - y[0],
                        Crossing::Rising,
                    ));
                let sol = integrate(&prob)?;
                if let Termination::Event(_) = sol.terminated_by {
                    return Err(Error::RegionViolation { x: field.sign * scale * sol.t_last() });
                }
                let gap = scale * sol.y_last()[0];
                pieces.push((Piece::W { sol, scale }, x2, 0.0));
                Arrival::Misses { gap }
            }
            Termination::Event(1) => return Err(Error::RegionViolation { x: field.sign * x2 }),
            Termination::Event(_) => {
                let v = y2[0];
                let dzeta_dx = nu / (a0 - v);
                pieces.push((
                    Piece::Cap {
                        x0: x2,
                        v,
                        zeta0: y2[1],
                        dzeta_dx,
                    },
                    x2,
                    0.0,
                ));
                Arrival::ReachesP0 { slope: v }
            }
            Termination::Completed => {
                return Err(match v_small {
                    None => Error::JumpBelowResolution { log_x: LOG_X_MIN },
                    Some(vs) => Error::AmbiguousConnection(format!(
                        "branch stays on the fast direction of P0 (v = {}, fast slope {vs}) down to |x| = e^{LOG_X_MIN}",
                        y2[0]
                    )),
                })
            }
        };

        Ok(Self {
            rs: *field.rs,
            sign: field.sign,
            g0,
            offset: off,
            slope,
            curvature,
            rate,
            pieces,
            arrival,
        })
    }

    fn eval(&self, idx: usize, p: f64) -> Pt {
        match &self.pieces[idx].0 {
            Piece::Tail => {
                let t = self.offset * (self.rate * p).exp();
                let phi = -1.0 + self.slope * t + 0.5 * self.curvature * t * t;
                Pt {
                    x: -1.0 + t,
                    w: phi - self.g0,
                    zeta: p,
                }
            }
            Piece::X(sol) => {
                let y = sol.eval(p).expect("inside piece");
                Pt {
                    x: p,
                    w: y[0] + p * self.rs.divided_difference(self.sign * p),
                    zeta: y[1],
                }
            }
            Piece::S { sol, back, zeta_end } => {
                let v = sol.eval_component(p, 0).expect("inside piece");
                let x = -(-p).exp();
                Pt {
                    x,
                    w: v * x,
                    zeta: zeta_end + back.eval_component(p, 0).expect("inside piece"),
                }
            }
            Piece::W { sol, scale } => {
                let y = sol.eval(p / scale).expect("inside piece");
                Pt {
                    x: p,
                    w: scale * y[0],
                    zeta: y[1],
                }
            }
            Piece::Cap { x0, v, zeta0, dzeta_dx } => Pt {
                x: p,
                w: v * p,
                zeta: zeta0 + dzeta_dx * (p - x0),
            },
        }
    }

    fn start(&self, idx: usize) -> Pt {
        self.eval(idx, self.pieces[idx].1)
    }

    fn end(&self, idx: usize) -> Pt {
        self.eval(idx, self.pieces[idx].2)
    }

    fn gap(&self) -> f64 {
        match self.arrival {
            Arrival::ReachesP0 { .. } => 0.0,
            Arrival::Misses { gap } => gap,
        }
    }

    fn w_range(&self) -> (f64, f64) {
        (self.start(0).w, self.gap())
    }

    /// Parameter in piece `idx` at which `key(eval) = target`, for a key increasing along the piece.
    fn solve_in(&self, idx: usize, target: f64, key: impl Fn(&Pt) -> f64) -> Result<f64> {
        let (lo, hi) = (self.pieces[idx].1, self.pieces[idx].2);
        let opts = RootOptions {
            xtol_abs: 0.0,
            xtol_rel: 4.0 * f64::EPSILON,
            ftol: 0.0,
            max_iter: 400,
        };
        Ok(find_root_with(|p| key(&self.eval(idx, p)) - target, lo, hi, &opts)?)
    }

    /// Locates `(piece, parameter)` where `key` reaches `target`.
    fn locate(&self, target: f64, key: impl Fn(&Pt) -> f64 + Copy) -> Result<(usize, f64)> {
        for idx in 0..self.pieces.len() {
            let (a, b) = (key(&self.start(idx)), key(&self.end(idx)));
            if target >= a && target <= b {
                if target == a {
                    return Ok((idx, self.pieces[idx].1));
                }
                if target == b {
                    return Ok((idx, self.pieces[idx].2));
                }
                return Ok((idx, self.solve_in(idx, target, key)?));
            }
        }
        Err(Error::InvalidParameter {
            name: "target",
            reason: format!("value {target} outside the branch"),
        })
    }

    /// Inverse `x = ψ(w)` on `[w_min, gap]`.
    fn psi(&self, w: f64) -> Result<f64> {
        let (idx, p) = self.locate(w, |pt| pt.w)?;
        Ok(self.eval(idx, p).x)
    }

    fn at_x(&self, x: f64) -> Result<Pt> {
        if x >= -1.0 + self.offset {
            // pieces past the tail are parametrized monotonically in x
            for idx in 1..self.pieces.len() {
                let (a, b) = (self.start(idx).x, self.end(idx).x);
                if x >= a && x <= b {
                    return match &self.pieces[idx].0 {
                        Piece::S { .. } => Ok(self.eval(idx, -(-x).ln())),
                        _ => Ok(self.eval(idx, x)),
                    };
                }
            }
        }
        let (idx, p) = self.locate(x, |pt| pt.x)?;
        Ok(self.eval(idx, p))
    }

    /// Pilot points `(piece, parameter)` from the integrator's accepted steps.
    fn pilot(&self) -> Vec<(usize, f64)> {
        let mut out = Vec::new();
        for (idx, (piece, lo, hi)) in self.pieces.iter().enumerate() {
            let params: Vec<f64> = match piece {
                Piece::Tail | Piece::Cap { .. } => {
                    (0..=32).map(|k| lo + (hi - lo) * f64::from(k) / 32.0).collect()
                }
                Piece::X(sol) | Piece::S { sol, .. } => sol.step_times(),
                Piece::W { sol, scale } => sol.step_times().into_iter().map(|r| scale * r).collect(),
            };
            for w in params.windows(2) {
                for k in 0..4 {
                    out.push((idx, w[0] + (w[1] - w[0]) * f64::from(k) / 4.0));
                }
            }
            out.push((idx, *params.last().unwrap_or(hi)));
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct ManifoldBranch {
    pub side: Side,
    inner: MinusType,
}

impl ManifoldBranch {
    /// `φ(0) - G(0)`: zero when the branch reaches `P₀`.
    pub fn gap_at_zero(&self) -> f64 {
        self.side.sign() * self.inner.gap()
    }

    /// Limit of `φ` at `x = 0`.
    pub fn value_at_zero(&self, rs: &Rs) -> f64 {
        rs.g(0.0) + self.gap_at_zero()
    }

    pub fn reaches_p0(&self) -> bool {
        matches!(self.inner.arrival, Arrival::ReachesP0 { .. })
    }

    pub fn arrival(&self) -> Arrival {
        self.inner.arrival
    }

    /// Exponential rate of approach to the saddle in ζ.
    pub fn saddle_rate(&self) -> f64 {
        self.inner.rate
    }

    fn to_own(&self, x: f64) -> f64 {
        self.side.sign() * x
    }

    /// `φ(x)` on the branch domain (`[-1, 0]` or `[0, 1]`).
    pub fn phi(&self, x: f64) -> Result<f64> {
        let s = self.side.sign();
        let pt = self.inner.at_x(self.to_own(x))?;
        Ok(s * (pt.w + self.inner.g0))
    }

    /// Inverse of `φ` written in `w = y - G(0)`.
    pub fn psi(&self, w: f64) -> Result<f64> {
        let s = self.side.sign();
        Ok(s * self.inner.psi(s * w)?)
    }

    /// Range of `w = y - G(0)` covered by the branch.
    pub fn w_range(&self) -> (f64, f64) {
        let (lo, hi) = self.inner.w_range();
        match self.side {
            Side::Minus => (lo, hi),
            Side::Plus => (-hi, -lo),
        }
    }

    /// Accepted integration points `(x, y)`, ordered by increasing `x`.
    pub fn samples(&self) -> Vec<(f64, f64)> {
        let s = self.side.sign();
        let mut out: Vec<(f64, f64)> = self
            .inner
            .pilot()
            .into_iter()
            .map(|(i, p)| {
                let pt = self.inner.eval(i, p);
                (s * pt.x, s * (pt.w + self.inner.g0))
            })
            .collect();
        out.sort_by(|a, b| a.0.total_cmp(&b.0));
        out.dedup_by(|a, b| a.0 == b.0);
        // next to P₀ consecutive values of y round to the same double; keep
        // the sample nearest x = 0 of each such run
        if self.side == Side::Minus {
            out.reverse();
        }
        out.dedup_by(|a, b| a.1 == b.1);
        if self.side == Side::Minus {
            out.reverse();
        }
        out
    }

    /// Strict monotonicity of the sampled branch.
    pub fn monotone(&self) -> bool {
        self.samples().windows(2).all(|w| w[1].1 > w[0].1)
    }
}

pub fn integrate_branch(rs: &Rs, side: Side, opts: &SolverOptions) -> Result<ManifoldBranch> {
    opts.validate()?;
    let field = Field { rs, sign: side.sign() };
    Ok(ManifoldBranch {
        side,
        inner: MinusType::build(field, rs.nu, opts)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Connection {
    Continuous {
        y: f64,
    },
    Jump {
        x_left: f64,
        x_right: f64,
        y_c: f64,
        /// `y_c - G(0)`
        w_c: f64,
        /// `|x_left| < tol_connect`
        weak: bool,
    },
}

impl Connection {
    pub fn is_jump(&self) -> bool {
        matches!(self, Connection::Jump { .. })
    }
}

/// One orbit sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrbitPoint {
    pub zeta: f64,
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone)]
pub struct HeteroclinicOrbit {
    pub branch_minus: ManifoldBranch,
    pub branch_plus: ManifoldBranch,
    pub connection: Connection,
    /// Left piece (ending at the connection, ζ ≤ 0) and right piece (starting there, ζ ≥ 0).
    pub zeta_param: Option<(Vec<OrbitPoint>, Vec<OrbitPoint>)>,
}

pub fn match_branches(rs: &Rs, bm: ManifoldBranch, bp: ManifoldBranch, opts: &SolverOptions) -> Result<HeteroclinicOrbit> {
    let g0 = rs.g(0.0);
    if bm.reaches_p0() && bp.reaches_p0() {
        return Ok(HeteroclinicOrbit {
            branch_minus: bm,
            branch_plus: bp,
            connection: Connection::Continuous { y: g0 },
            zeta_param: None,
        });
    }
    let (m_lo, m_hi) = bm.w_range();
    let (p_lo, p_hi) = bp.w_range();
    let lo = m_lo.max(p_lo);
    let hi = m_hi.min(p_hi);
    let h = |w: f64| -> f64 {
        match (bm.psi(w), bp.psi(w)) {
            (Ok(a), Ok(b)) => a + b,
            _ => f64::NAN,
        }
    };
    if !(lo < hi) || !(h(lo) < 0.0) || !(h(hi) > 0.0) {
        return Err(Error::NoIntersection { lo, hi });
    }
    let ropts = RootOptions {
        xtol_abs: 0.0,
        xtol_rel: 4.0 * f64::EPSILON,
        ftol: 0.0,
        max_iter: 400,
    };
    let w_c = find_root_with(h, lo, hi, &ropts)?;
    let x_left = bm.psi(w_c)?;
    let x_right = bp.psi(w_c)?;
    if !(x_left < 0.0 && x_right > 0.0) || (x_left + x_right).abs() > opts.tol_match * x_left.abs() {
        return Err(Error::AmbiguousConnection(format!(
            "jump points do not balance: x_left = {x_left}, x_right = {x_right}"
        )));
    }
    Ok(HeteroclinicOrbit {
        branch_minus: bm,
        branch_plus: bp,
        connection: Connection::Jump {
            x_left,
            x_right,
            y_c: g0 + w_c,
            w_c,
            weak: x_left.abs() < opts.tol_connect,
        },
        zeta_param: None,
    })
}

/// Samples one side of the orbit: `n` points equidistributed in a blend of
/// normalized ζ-length and phase-plane arc length, from the truncated saddle
/// tail to the connection point `x_conn` (branch frame).
fn sample_side(b: &MinusType, x_conn: f64, zeta_span: f64, n: usize) -> Result<Vec<Pt>> {
    let (ci, cp) = if x_conn >= 0.0 {
        let last = b.pieces.len() - 1;
        (last, b.pieces[last].2)
    } else {
        let (i, p) = b.locate(x_conn, |pt| pt.x)?;
        (i, p)
    };
    let conn = b.eval(ci, cp);
    // truncation in ζ
    let zeta_min = conn.zeta - zeta_span;
    let (si, sp) = if b.start(0).zeta >= zeta_min {
        (0, b.pieces[0].1)
    } else {
        b.locate(zeta_min, |pt| pt.zeta)?
    };

    let mut pilot: Vec<(usize, f64)> = b
        .pilot()
        .into_iter()
        .filter(|&(i, p)| (i > si || (i == si && p > sp)) && (i < ci || (i == ci && p < cp)))
        .collect();
    pilot.insert(0, (si, sp));
    pilot.push((ci, cp));
    let pts: Vec<Pt> = pilot.iter().map(|&(i, p)| b.eval(i, p)).collect();
    let lz = (conn.zeta - pts[0].zeta).max(f64::MIN_POSITIVE);
    // near a jump at small |x| the orbit varies on the scale |x|, resolved by
    // a logarithmic term; jumps below 1e-6 are sampled like a continuous passage
    let eps = if x_conn.abs() < 1e-6 { 0.0 } else { x_conn.abs() };
    let lx = |x: f64| if eps > 0.0 { (x.abs() + eps).ln() / (1.0 + eps).ln().max(-eps.ln()) } else { 0.0 };
    let mut arc = vec![0.0; pts.len()];
    for k in 1..pts.len() {
        let dz = 2.0 * (pts[k].zeta - pts[k - 1].zeta) / lz;
        let dx = pts[k].x - pts[k - 1].x;
        let dw = pts[k].w - pts[k - 1].w;
        let dl = lx(pts[k].x) - lx(pts[k - 1].x);
        // slope w/x: the approach to P₀ can turn inside a thin layer in x.
        // Damped below |x| ~ 1e-6, where a slowly drifting slope would
        // otherwise pack samples closer than differencing can resolve.
        let dv = if pts[k].x != 0.0 && pts[k - 1].x != 0.0 {
            let ax = pts[k].x.abs().max(pts[k - 1].x.abs());
            (pts[k].w / pts[k].x - pts[k - 1].w / pts[k - 1].x) * ax / (ax + 1e-6)
        } else {
            0.0
        };
        arc[k] = arc[k - 1] + (dz * dz + dx * dx + dw * dw + dl * dl + dv * dv).sqrt();
    }
    let total = arc[arc.len() - 1];
    let mut out = Vec::with_capacity(n);
    out.push(pts[0]);
    let mut k = 1;
    for j in 1..n - 1 {
        let target = total * j as f64 / (n - 1) as f64;
        while k < arc.len() - 1 && arc[k] < target {
            k += 1;
        }
        let (i0, p0) = pilot[k - 1];
        let (i1, p1) = pilot[k];
        let span = arc[k] - arc[k - 1];
        let pt = if i0 == i1 && span > 0.0 {
            let f = ((target - arc[k - 1]) / span).clamp(0.0, 1.0);
            b.eval(i0, p0 + f * (p1 - p0))
        } else {
            pts[k]
        };
        out.push(pt);
    }
    out.push(conn);
    out.dedup_by(|a, b| a.zeta <= b.zeta);
    Ok(out)
}

/// Attaches the ζ-parametrization: `ζ = 0` at the connection, `ζ < 0` on the
/// left. Each side is truncated where it comes within `1e-8` of its saddle or
/// at `min(zeta_max, 50/rate)` from the connection.
pub fn reparametrize(rs: &Rs, mut orbit: HeteroclinicOrbit, opts: &SolverOptions) -> Result<HeteroclinicOrbit> {
    let _ = rs;
    let (xl, xr, yc) = match orbit.connection {
        Connection::Continuous { y } => (0.0, 0.0, y),
        Connection::Jump { x_left, x_right, y_c, .. } => (x_left, x_right, y_c),
    };
    let n = opts.samples_per_side;
    let m = &orbit.branch_minus.inner;
    let p = &orbit.branch_plus.inner;
    let span_m = opts.zeta_max.min(50.0 / m.rate);
    let span_p = opts.zeta_max.min(50.0 / p.rate);
    let left = sample_side(m, xl, span_m, n)?;
    let right = sample_side(p, -xr, span_p, n)?;
    let zl = left[left.len() - 1].zeta;
    let zr = right[right.len() - 1].zeta;
    let mut left: Vec<OrbitPoint> = left
        .iter()
        .map(|pt| OrbitPoint {
            zeta: pt.zeta - zl,
            x: pt.x,
            y: pt.w + m.g0,
        })
        .collect();
    let mut right: Vec<OrbitPoint> = right
        .iter()
        .rev()
        .map(|pt| OrbitPoint {
            zeta: zr - pt.zeta,
            x: -pt.x,
            y: -(pt.w + p.g0),
        })
        .collect();
    // both branches meet the connection at the matched y up to rounding
    if let Some(q) = left.last_mut() {
        q.y = yc;
    }
    right[0].y = yc;
    if left.iter().chain(right.iter()).any(|q| !q.zeta.is_finite()) {
        return Err(Error::QuadratureFailure("non-finite reduced time along the orbit".into()));
    }
    orbit.zeta_param = Some((left, right));
    Ok(orbit)
}

/// Full construction: branches, matching and ζ-parametrization.
pub fn solve_orbit(rs: &Rs, opts: &SolverOptions) -> Result<HeteroclinicOrbit> {
    opts.validate()?;
    let a0 = rs.g_prime(0.0);
    if !(a0 > 0.0) {
        return Err(Error::UnsupportedRegime { g_prime0: a0 });
    }
    let bm = integrate_branch(rs, Side::Minus, opts)?;
    let bp = integrate_branch(rs, Side::Plus, opts)?;
    let orbit = match_branches(rs, bm, bp, opts)?;
    reparametrize(rs, orbit, opts)
}

/// Exit abscissa `x₊ ∈ (0, 1]` of the fast unstable trajectory of `P₀` from
/// `Ω₊ = {0 < x < 1, y < G(x)}`; `None` unless `P₀` has real positive eigenvalues.
pub fn fast_trajectory_exit(rs: &Rs, tol: f64) -> Result<Option<f64>> {
    let nu = rs.nu;
    let a0 = rs.g_prime(0.0);
    let disc = a0 * a0 - 2.0 * nu * nu;
    if !(a0 > 0.0 && disc > 0.0) {
        return Ok(None);
    }
    let v_fast = 0.5 * (a0 - disc.sqrt());
    let g0 = rs.g(0.0);
    // the rescaled field x d/dζ = d/dη is regular, so the exit through the
    // graph of G (a turning point in x) is an ordinary crossing
    let rhs = |_: f64, u: &[f64], du: &mut [f64]| {
        du[0] = (rs.g(u[0]) - u[1]) / nu;
        du[1] = 0.5 * nu * u[0] * (1.0 - u[0] * u[0]);
    };
    let eps = 1e-9;
    // slowest growth rate of the source is the smaller eigenvalue of the rescaled field
    let lam = (a0 - disc.sqrt()) / (2.0 * nu);
    let eta_end = 200.0 / lam;
    let mut prob = IvpProblem::new(rhs, 0.0, eta_end, vec![eps, g0 + v_fast * eps])
        .tolerances(tol, tol * 1e-3)
        .event(Event::new(move |_, u: &[f64]| rs.g(u[0]) - u[1], Crossing::Falling))
        .event(Event::new(|_, u: &[f64]| u[0] - 1.0, Crossing::Rising));
    prob.max_steps = 1_000_000;
    let sol = integrate(&prob)?;
    match sol.terminated_by {
        Termination::Event(0) => Ok(Some(sol.y_last()[0])),
        Termination::Event(_) => Ok(Some(1.0)),
        Termination::Completed => Err(Error::AmbiguousConnection(
            "fast trajectory of P0 neither leaves through the graph of G nor reaches x = 1".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gas::{build_shock, GasParams, RadiationParams};
    use crate::reduction::{reduce_hamer, reduce_radhydro};
    use approx::assert_relative_eq;

    fn hamer_linear(jump: f64) -> Rs {
        reduce_hamer(jump / 2.0, -jump / 2.0, 1.0, 1).unwrap()
    }

    fn radhydro(u_c: f64, delta: f64) -> Rs {
        let gas = GasParams::new(5.0 / 3.0, 8.31).unwrap();
        let s = build_shock(gas, 0.1, u_c, delta, 0.0).unwrap();
        reduce_radhydro(s, RadiationParams::new(1.0, 1.0, 1.0, 2.0).unwrap()).unwrap()
    }

    #[test]
    fn saddle_of_linear_hamer() {
        let rs = hamer_linear(2.0);
        let sd = saddle_linearization(&rs, Side::Minus);
        let golden = (1.0 + 5f64.sqrt()) / 2.0;
        assert_relative_eq!(sd.branch_tangent_slope, golden, max_relative = 1e-14);
        assert_relative_eq!(sd.eigenvalues.0, 2.0 / (1.0 + 5f64.sqrt()), max_relative = 1e-14);
        let j = sd.jacobian;
        assert!((j[0][0] * j[1][1] - j[0][1] * j[1][0] + 1.0).abs() < 1e-12);
        let sp = saddle_linearization(&rs, Side::Plus);
        assert_relative_eq!(sp.branch_tangent_slope, golden, max_relative = 1e-14);
        assert!(sp.eigenvalues.1 < 0.0 && sp.eigenvalues.0 > 0.0);
    }

    #[test]
    fn saddle_eigenpairs_are_consistent() {
        let rs = radhydro(10.0, 0.9);
        for side in [Side::Minus, Side::Plus] {
            let sd = saddle_linearization(&rs, side);
            let j = sd.jacobian;
            assert!((j[0][0] * j[1][1] - j[0][1] * j[1][0] + 1.0).abs() < 1e-12);
            for lam in [sd.eigenvalues.0, sd.eigenvalues.1] {
                // characteristic polynomial
                let tr = j[0][0] + j[1][1];
                assert!((lam * lam - tr * lam - 1.0).abs() < 1e-12);
            }
            // branch eigenvector (1, slope)
            let lam = match side {
                Side::Minus => sd.eigenvalues.0,
                Side::Plus => sd.eigenvalues.1,
            };
            let r = j[0][0] + j[0][1] * sd.branch_tangent_slope - lam;
            assert!(r.abs() < 1e-12);
        }
    }

    #[test]
    fn p0_classification() {
        assert_eq!(classify_p0(&hamer_linear(2.0)).unwrap().kind, P0Kind::RepulsiveSpiral);
        let src = classify_p0(&hamer_linear(1.0)).unwrap();
        assert_eq!(src.kind, P0Kind::Source);
        assert!(src.fast_eigen.is_some());
        assert_eq!(classify_p0(&radhydro(50.0, 0.6)).unwrap().kind, P0Kind::Source);
        assert!(matches!(
            classify_p0(&hamer_linear(2f64.sqrt())),
            Err(Error::DegenerateP0 { .. })
        ));
    }

    #[test]
    fn linear_hamer_continuous_below_threshold() {
        let rs = hamer_linear(1.0);
        let opts = SolverOptions::default();
        let bm = integrate_branch(&rs, Side::Minus, &opts).unwrap();
        let bp = integrate_branch(&rs, Side::Plus, &opts).unwrap();
        assert!(bm.reaches_p0() && bp.reaches_p0());
        assert!(bm.value_at_zero(&rs).abs() < 1e-9);
        assert!(bm.monotone() && bp.monotone());
        let orbit = solve_orbit(&rs, &opts).unwrap();
        assert!(!orbit.connection.is_jump());
    }

    #[test]
    fn linear_hamer_jump_above_threshold() {
        let rs = hamer_linear(2.0);
        let opts = SolverOptions::default();
        let orbit = solve_orbit(&rs, &opts).unwrap();
        assert!(orbit.branch_minus.value_at_zero(&rs) > 0.0);
        assert!(orbit.branch_plus.value_at_zero(&rs) < 0.0);
        match orbit.connection {
            Connection::Jump { x_left, x_right, y_c, .. } => {
                assert!(y_c.abs() < 1e-10);
                assert!((x_left + x_right).abs() < 1e-8 * x_left.abs());
                assert!(x_left < 0.0 && x_left > -1.0);
            }
            _ => panic!("expected a jump"),
        }
    }

    #[test]
    fn branches_live_in_their_regions() {
        let rs = radhydro(10.0, 0.6);
        let opts = SolverOptions::default();
        let bm = integrate_branch(&rs, Side::Minus, &opts).unwrap();
        for (x, y) in bm.samples() {
            if x > -1.0 && x < 0.0 {
                assert!(y > rs.g(x), "x={x}");
            }
        }
        let bp = integrate_branch(&rs, Side::Plus, &opts).unwrap();
        for (x, y) in bp.samples() {
            if x > 0.0 && x < 1.0 {
                assert!(y < rs.g(x), "x={x}");
            }
        }
    }

    #[test]
    fn fast_exit_in_unit_interval() {
        let rs = radhydro(50.0, 0.6);
        let x = fast_trajectory_exit(&rs, 1e-10).unwrap().unwrap();
        assert!(x > 0.0 && x <= 1.0);
        assert!(fast_trajectory_exit(&radhydro(10.0, 0.6), 1e-10).unwrap().is_none());
    }
}
