//! Adaptive trajectory integration for the three model variants.
//!
//! The stepper is an embedded Dormand-Prince 5(4) pair with PI step-size
//! control. The dynamics have no limit cycles, so every trajectory ends at an
//! equilibrium; integration terminates early when the state comes within a
//! configured distance of a known closed-form equilibrium or the right-hand
//! side norm drops below a threshold, whichever happens first. A fixed-step
//! classical RK4 ([`rk4_fixed`]) is kept alongside as a verification oracle.

use crate::equilibria::{self, EquilibriumKind};
use crate::error::{Error, Result};
use crate::model::{
    rhs_basic_raw, rhs_direct_raw, rhs_opportunistic_raw, BasicState, DirectIntervention,
    OpportunisticParams, OpportunisticState, PopulationSplit, RateParams, ReducedState,
};

/// Overshoot beyond the valid state box that is clipped as roundoff; anything
/// larger aborts the run as solver misbehavior.
pub const BOX_OVERSHOOT_TOL: f64 = 1e-7;

const MAX_STEPS: usize = 5_000_000;

/// Integrator tolerances and horizon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub t_max: f64,
    /// Right-hand-side max-norm below which the state counts as converged.
    pub convergence_eps: f64,
    /// Euclidean distance to a known closed-form equilibrium that also
    /// counts as convergence (proximity wins ties).
    pub equilibrium_proximity: f64,
    /// Record every n-th accepted step (the initial and final states are
    /// always kept).
    pub record_stride: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-8,
            abs_tol: 1e-10,
            t_max: 1e4,
            convergence_eps: 1e-10,
            equilibrium_proximity: 1e-8,
            record_stride: 1,
        }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("rel_tol", self.rel_tol),
            ("abs_tol", self.abs_tol),
            ("t_max", self.t_max),
            ("convergence_eps", self.convergence_eps),
            ("equilibrium_proximity", self.equilibrium_proximity),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParameter {
                    name,
                    requirement: "finite and > 0",
                    value: v,
                });
            }
        }
        if self.record_stride == 0 {
            return Err(Error::InvalidParameter {
                name: "record_stride",
                requirement: ">= 1",
                value: 0.0,
            });
        }
        Ok(())
    }

    /// Same configuration but recording only the initial and final states.
    pub fn sparse(mut self) -> Self {
        self.record_stride = usize::MAX;
        self
    }
}

/// Model variant selector with its parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Model {
    Basic {
        split: PopulationSplit,
        rates: RateParams,
    },
    Direct {
        split: PopulationSplit,
        rates: RateParams,
        intervention: DirectIntervention,
    },
    Opportunistic {
        rates: RateParams,
        switching: OpportunisticParams,
    },
}

/// Initial condition for [`integrate`], typed per variant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitState {
    Reduced(ReducedState),
    Opportunistic(OpportunisticState),
}

impl From<ReducedState> for InitState {
    fn from(s: ReducedState) -> Self {
        InitState::Reduced(s)
    }
}

impl From<OpportunisticState> for InitState {
    fn from(s: OpportunisticState) -> Self {
        InitState::Opportunistic(s)
    }
}

impl Model {
    /// Number of dynamic coordinates (2, or 3 with an opportunistic
    /// population).
    pub fn dim(&self) -> usize {
        match self {
            Model::Opportunistic { .. } => 3,
            _ => 2,
        }
    }

    pub fn rates(&self) -> &RateParams {
        match self {
            Model::Basic { rates, .. }
            | Model::Direct { rates, .. }
            | Model::Opportunistic { rates, .. } => rates,
        }
    }

    /// Raw right-hand side on `(SB, CR, S)` coordinates. For the
    /// two-variable variants the third component is carried unchanged.
    pub fn rhs_raw(&self, y: &[f64; 3]) -> [f64; 3] {
        match self {
            Model::Basic { split, rates } => {
                let (d_sb, d_cr) = rhs_basic_raw(y[0], y[1], split.s(), rates);
                [d_sb, d_cr, 0.0]
            }
            Model::Direct {
                split,
                rates,
                intervention,
            } => {
                let (d_sb, d_cr) = rhs_direct_raw(
                    y[0],
                    y[1],
                    split.s(),
                    rates,
                    intervention.a_s(rates),
                    intervention.a_c(rates),
                );
                [d_sb, d_cr, 0.0]
            }
            Model::Opportunistic { rates, switching } => {
                let (d_sb, d_cr, d_s) =
                    rhs_opportunistic_raw(y[0], y[1], y[2], rates, switching.alpha());
                [d_sb, d_cr, d_s]
            }
        }
    }

    /// Default interior initial condition: both forces entrenched mostly in
    /// friendly territory (`SB_0 = 0.9 S`, `CR_0 = 0.9 C`), which keeps both
    /// presences positive as the outcome results require. The opportunistic
    /// default starts from an even split.
    pub fn default_init(&self) -> InitState {
        match self {
            Model::Basic { split, .. } | Model::Direct { split, .. } => InitState::Reduced(
                ReducedState::new(0.9 * split.s(), 0.9 * split.c(), split)
                    .expect("scaled interior point is valid"),
            ),
            Model::Opportunistic { .. } => InitState::Opportunistic(
                OpportunisticState::new(0.45, 0.45, 0.5).expect("interior point is valid"),
            ),
        }
    }

    /// Initial coordinates after checking variant compatibility and state
    /// invariants.
    fn init_coords(&self, init: &InitState) -> Result<[f64; 3]> {
        match (self, init) {
            (Model::Basic { split, .. } | Model::Direct { split, .. }, InitState::Reduced(st)) => {
                let st = ReducedState::new(st.sb(), st.cr(), split)?;
                Ok([st.sb(), st.cr(), split.s()])
            }
            (Model::Opportunistic { .. }, InitState::Opportunistic(st)) => {
                let st = OpportunisticState::new(st.sb(), st.cr(), st.s())?;
                Ok([st.sb(), st.cr(), st.s()])
            }
            _ => Err(Error::InvalidState(
                "initial state variant does not match the model variant".into(),
            )),
        }
    }

    /// Known closed-form equilibria in `(SB, CR, S)` coordinates. Saddles are
    /// included; interior stalemates only when they exist in the unit box.
    pub fn known_equilibria(&self) -> Vec<(EquilibriumKind, [f64; 3])> {
        match self {
            Model::Basic { split, rates } => {
                let s = split.s();
                let mut out = vec![
                    (EquilibriumKind::HostileControl, [0.0, 0.0, s]),
                    (EquilibriumKind::BlueVictory, [s, 0.0, s]),
                    (EquilibriumKind::RedVictory, [0.0, split.c(), s]),
                ];
                if let Ok(st) = equilibria::stalemate_basic(split, rates) {
                    out.push((EquilibriumKind::Stalemate, [st.sb(), st.cr(), s]));
                }
                out
            }
            Model::Direct {
                split,
                rates,
                intervention,
            } => {
                let s = split.s();
                let mut out = vec![(EquilibriumKind::BlueVictory, [s, 0.0, s])];
                if intervention.lambda_s() == 0.0 {
                    out.push((EquilibriumKind::HostileControl, [0.0, 0.0, s]));
                    if intervention.lambda_c() == 0.0 {
                        out.push((EquilibriumKind::RedVictory, [0.0, split.c(), s]));
                    }
                }
                if let Ok(st) = equilibria::stalemate_direct(split, rates, intervention) {
                    out.push((EquilibriumKind::Stalemate, [st.sb(), st.cr(), s]));
                }
                out
            }
            Model::Opportunistic { rates, .. } => {
                let bal = equilibria::balanced_stalemate(rates);
                vec![
                    (EquilibriumKind::BlueVictory, [1.0, 0.0, 1.0]),
                    (EquilibriumKind::RedVictory, [0.0, 1.0, 0.0]),
                    (EquilibriumKind::DisarmedStalemate, [0.0, 0.0, 0.5]),
                    (
                        EquilibriumKind::BalancedStalemate,
                        [bal.sb(), bal.cr(), bal.s()],
                    ),
                ]
            }
        }
    }

    /// Clamps a state onto the valid box, returning the largest violation
    /// found before clamping.
    fn clip(&self, y: &mut [f64; 3]) -> f64 {
        let mut overshoot: f64 = 0.0;
        let mut clamp = |v: &mut f64, lo: f64, hi: f64| {
            if *v < lo {
                overshoot = overshoot.max(lo - *v);
                *v = lo;
            } else if *v > hi {
                overshoot = overshoot.max(*v - hi);
                *v = hi;
            }
        };
        match self {
            Model::Basic { split, .. } | Model::Direct { split, .. } => {
                clamp(&mut y[0], 0.0, split.s());
                clamp(&mut y[1], 0.0, split.c());
            }
            Model::Opportunistic { .. } => {
                clamp(&mut y[2], 0.0, 1.0);
                let s = y[2];
                clamp(&mut y[0], 0.0, s);
                clamp(&mut y[1], 0.0, 1.0 - s);
            }
        }
        overshoot
    }
}

/// One recorded trajectory point in `(SB, CR, S)` coordinates; for the
/// fixed-population variants `S` is the constant split.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub sb: f64,
    pub cr: f64,
    pub s: f64,
}

impl Sample {
    pub fn sr(&self) -> f64 {
        self.s - self.sb
    }

    pub fn cb(&self) -> f64 {
        1.0 - self.s - self.cr
    }

    /// Fraction controlled by Blue, `SB + CB`.
    pub fn blue_controlled(&self) -> f64 {
        self.sb + self.cb()
    }

    /// Expands to the four-variable state, allowing integrator drift.
    pub fn to_basic(&self) -> Result<BasicState> {
        BasicState::with_sum_tol(self.sb, self.sr(), self.cr, self.cb(), BOX_OVERSHOOT_TOL)
    }
}

/// Why the integration stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Terminal {
    ConvergedToEquilibrium(EquilibriumKind),
    HorizonReached,
}

/// Result of one integration run.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    pub terminal: Terminal,
    pub steps_accepted: usize,
    pub steps_rejected: usize,
}

impl Trajectory {
    pub fn final_sample(&self) -> &Sample {
        self.samples
            .last()
            .expect("trajectory records at least the initial state")
    }
}

// Dormand-Prince 5(4) tableau. The systems are autonomous, so the stage
// times are never needed.
const A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

const SAFETY: f64 = 0.9;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 10.0;
const BETA: f64 = 0.04;

fn max_norm(v: &[f64; 3], dim: usize) -> f64 {
    v[..dim].iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn distance(a: &[f64; 3], b: &[f64; 3], dim: usize) -> f64 {
    (0..dim).map(|i| (a[i] - b[i]).powi(2)).sum::<f64>().sqrt()
}

/// Integrates the model from `init` until convergence or the horizon.
pub fn integrate(model: &Model, init: &InitState, cfg: &IntegratorConfig) -> Result<Trajectory> {
    cfg.validate()?;
    let dim = model.dim();
    let mut y = model.init_coords(init)?;
    let equilibria_list = model.known_equilibria();

    let nearest = |y: &[f64; 3]| -> (EquilibriumKind, f64) {
        equilibria_list
            .iter()
            .map(|(kind, p)| (*kind, distance(y, p, dim)))
            .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            .expect("every variant has at least one known equilibrium")
    };

    let mut samples = vec![Sample {
        t: 0.0,
        sb: y[0],
        cr: y[1],
        s: y[2],
    }];
    let mut k1 = model.rhs_raw(&y);

    // Immediate convergence: starting at (or within proximity of) an
    // equilibrium yields a length-1 trajectory.
    let (kind0, dist0) = nearest(&y);
    if dist0 <= cfg.equilibrium_proximity || max_norm(&k1, dim) < cfg.convergence_eps {
        return Ok(Trajectory {
            samples,
            terminal: Terminal::ConvergedToEquilibrium(kind0),
            steps_accepted: 0,
            steps_rejected: 0,
        });
    }

    let mut t = 0.0;
    let f0 = max_norm(&k1, dim);
    let mut h = if f0 > 0.0 {
        (0.01 / f0).min(cfg.t_max * 1e-3).max(1e-10)
    } else {
        cfg.t_max * 1e-3
    };

    let mut facold: f64 = 1e-4;
    let mut accepted = 0usize;
    let mut rejected = 0usize;
    let mut last_rejected = false;
    let mut since_record = 0usize;
    let expo1 = 0.2 - BETA * 0.75;

    let terminal = loop {
        if accepted + rejected >= MAX_STEPS {
            return Err(Error::IntegrationFailure {
                what: format!("step budget of {MAX_STEPS} exhausted"),
                t,
            });
        }
        let remaining = cfg.t_max - t;
        if remaining <= cfg.t_max * 1e-14 {
            break Terminal::HorizonReached;
        }
        // Underflow is judged on the controller's step, before the landing
        // cap: the last stretch to the horizon may legitimately be tiny.
        if h < 1e-14 * t.max(1.0) {
            return Err(Error::IntegrationFailure {
                what: format!("step size underflow (h={h:e})"),
                t,
            });
        }
        h = h.min(remaining);

        // Stage evaluations (FSAL: k[0] carried over from the last accept).
        let mut k = [[0.0f64; 3]; 7];
        k[0] = k1;
        for stage in 1..7 {
            let mut yi = y;
            for (j, kj) in k.iter().enumerate().take(stage) {
                let a = A[stage][j];
                if a != 0.0 {
                    for d in 0..dim {
                        yi[d] += h * a * kj[d];
                    }
                }
            }
            k[stage] = model.rhs_raw(&yi);
        }
        // Stage 7 input is the 5th-order solution itself.
        let mut y_new = y;
        for (j, kj) in k.iter().enumerate().take(6) {
            let a = A[6][j];
            if a != 0.0 {
                for d in 0..dim {
                    y_new[d] += h * a * kj[d];
                }
            }
        }

        let mut err_sq = 0.0;
        for d in 0..dim {
            let e: f64 = (0..7).map(|j| E[j] * k[j][d]).sum();
            let scale = cfg.abs_tol + cfg.rel_tol * y[d].abs().max(y_new[d].abs());
            err_sq += (h * e / scale).powi(2);
        }
        let err = (err_sq / dim as f64).sqrt();

        if !err.is_finite() {
            rejected += 1;
            last_rejected = true;
            h *= 0.1;
            continue;
        }

        if err <= 1.0 {
            // Accept.
            let overshoot = model.clip(&mut y_new);
            if overshoot > BOX_OVERSHOOT_TOL {
                return Err(Error::IntegrationFailure {
                    what: format!(
                        "state left the valid box by {overshoot:e} (allowed {BOX_OVERSHOOT_TOL:e})"
                    ),
                    t,
                });
            }
            let k_new = if overshoot > 0.0 {
                model.rhs_raw(&y_new)
            } else {
                k[6]
            };

            t += h;
            y = y_new;
            k1 = k_new;
            accepted += 1;
            since_record += 1;
            if since_record >= cfg.record_stride {
                since_record = 0;
                samples.push(Sample {
                    t,
                    sb: y[0],
                    cr: y[1],
                    s: y[2],
                });
            }

            // Convergence detection: proximity to a known equilibrium wins
            // ties over the slower RHS-norm criterion.
            let (kind, dist) = nearest(&y);
            if dist <= cfg.equilibrium_proximity || max_norm(&k1, dim) < cfg.convergence_eps {
                break Terminal::ConvergedToEquilibrium(kind);
            }

            let fac11 = err.powf(expo1);
            let fac = (fac11 / facold.powf(BETA) / SAFETY).clamp(1.0 / FAC_MAX, 1.0 / FAC_MIN);
            facold = err.max(1e-4);
            let mut h_new = h / fac;
            if last_rejected {
                h_new = h_new.min(h);
                last_rejected = false;
            }
            h = h_new;
        } else {
            rejected += 1;
            last_rejected = true;
            let fac11 = err.powf(expo1);
            h /= (fac11 / SAFETY).min(1.0 / FAC_MIN);
        }
    };

    let last = *samples.last().expect("initial sample present");
    if last.t != t {
        samples.push(Sample {
            t,
            sb: y[0],
            cr: y[1],
            s: y[2],
        });
    }
    Ok(Trajectory {
        samples,
        terminal,
        steps_accepted: accepted,
        steps_rejected: rejected,
    })
}

/// Maps a converged trajectory to an outcome: Blue victory when Red's
/// controlled mass is below `tol`, Red victory when Blue's is, and otherwise
/// a stalemate carrying the terminal state. A horizon-reached trajectory is
/// an [`Error::Inconclusive`].
pub fn outcome_from_trajectory(traj: &Trajectory, tol: f64) -> Result<equilibria::Outcome> {
    let last = traj.final_sample();
    match traj.terminal {
        Terminal::HorizonReached => Err(Error::Inconclusive {
            t: last.t,
            sb: last.sb,
            cr: last.cr,
            s: last.s,
        }),
        Terminal::ConvergedToEquilibrium(_) => {
            let red_mass = last.sr() + last.cr;
            let blue_mass = last.sb + last.cb();
            if red_mass < tol {
                Ok(equilibria::Outcome::BlueVictory)
            } else if blue_mass < tol {
                Ok(equilibria::Outcome::RedVictory)
            } else {
                Ok(equilibria::Outcome::Stalemate(last.to_basic()?))
            }
        }
    }
}

/// Classical fixed-step RK4 on a raw autonomous right-hand side; the
/// verification oracle for the adaptive stepper. Integrates from `y0` for
/// `steps` steps of size `h` and returns the final state.
pub fn rk4_fixed<F, const N: usize>(f: F, y0: [f64; N], h: f64, steps: usize) -> [f64; N]
where
    F: Fn(&[f64; N]) -> [f64; N],
{
    let mut y = y0;
    for _ in 0..steps {
        let k1 = f(&y);
        let mut y2 = y;
        for d in 0..N {
            y2[d] = y[d] + 0.5 * h * k1[d];
        }
        let k2 = f(&y2);
        let mut y3 = y;
        for d in 0..N {
            y3[d] = y[d] + 0.5 * h * k2[d];
        }
        let k3 = f(&y3);
        let mut y4 = y;
        for d in 0..N {
            y4[d] = y[d] + h * k3[d];
        }
        let k4 = f(&y4);
        for d in 0..N {
            y[d] += h / 6.0 * (k1[d] + 2.0 * k2[d] + 2.0 * k3[d] + k4[d]);
        }
    }
    y
}
