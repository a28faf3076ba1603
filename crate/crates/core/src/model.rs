//! State and parameter types for the revolt model and the right-hand sides of
//! its three variants: fixed population, direct foreign intervention, and
//! opportunistic (shifting) population.
//!
//! All types are immutable values validated at construction; all operations
//! are pure functions, safe to call from any number of threads.

use crate::error::{Error, Result};

/// Tolerance on population sums checked at state construction.
pub const STATE_SUM_TOL: f64 = 1e-12;

fn require_positive(name: &'static str, value: f64) -> Result<()> {
    if !(value.is_finite() && value > 0.0) {
        return Err(Error::InvalidParameter {
            name,
            requirement: "finite and > 0",
            value,
        });
    }
    Ok(())
}

fn require_non_negative(name: &'static str, value: f64) -> Result<()> {
    if !(value.is_finite() && value >= 0.0) {
        return Err(Error::InvalidParameter {
            name,
            requirement: "finite and >= 0",
            value,
        });
    }
    Ok(())
}

/// Attrition rates of the four engagement types.
///
/// `f_s` and `f_c` are the liberation rates of Blue and Red in friendly
/// regions; `h_c` and `h_s` the subjugation rates of Blue and Red in hostile
/// regions. All four are strictly positive. Outcomes depend on the rates only
/// through the liberation-subjugation effectiveness ratios (LSERs)
/// `r_S = f_S/h_S` and `r_C = f_C/h_C`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateParams {
    f_s: f64,
    h_s: f64,
    f_c: f64,
    h_c: f64,
}

impl RateParams {
    pub fn new(f_s: f64, h_s: f64, f_c: f64, h_c: f64) -> Result<Self> {
        require_positive("f_S", f_s)?;
        require_positive("h_S", h_s)?;
        require_positive("f_C", f_c)?;
        require_positive("h_C", h_c)?;
        Ok(Self { f_s, h_s, f_c, h_c })
    }

    pub fn f_s(&self) -> f64 {
        self.f_s
    }
    pub fn h_s(&self) -> f64 {
        self.h_s
    }
    pub fn f_c(&self) -> f64 {
        self.f_c
    }
    pub fn h_c(&self) -> f64 {
        self.h_c
    }

    /// Blue's LSER `r_S = f_S / h_S`.
    pub fn r_s(&self) -> f64 {
        self.f_s / self.h_s
    }

    /// Red's LSER `r_C = f_C / h_C`.
    pub fn r_c(&self) -> f64 {
        self.f_c / self.h_c
    }

    /// Dominance assumption: each force fights better in friendly territory
    /// (`f_S > h_C` and `f_C > h_S`, strict). Implies `r_S * r_C > 1`.
    pub fn dominant(&self) -> bool {
        self.f_s > self.h_c && self.f_c > self.h_s
    }

    /// Errors with [`Error::DominanceViolation`] unless `dominant()` holds.
    pub fn require_dominant(&self) -> Result<()> {
        if self.dominant() {
            Ok(())
        } else {
            Err(Error::DominanceViolation {
                f_s: self.f_s,
                h_s: self.h_s,
                f_c: self.f_c,
                h_c: self.h_c,
            })
        }
    }

    /// Rates with every entry multiplied by `c > 0`. Leaves both LSERs, and
    /// therefore every outcome, unchanged.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        require_positive("scale", c)?;
        Self::new(self.f_s * c, self.h_s * c, self.f_c * c, self.h_c * c)
    }
}

/// Fixed split of the population into supporters of Blue (`S`) and
/// contrarians (`C = 1 - S`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PopulationSplit {
    s: f64,
}

impl PopulationSplit {
    pub fn new(s: f64) -> Result<Self> {
        if !(s.is_finite() && (0.0..=1.0).contains(&s)) {
            return Err(Error::InvalidParameter {
                name: "S",
                requirement: "within [0, 1]",
                value: s,
            });
        }
        Ok(Self { s })
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    /// Contrarian fraction, `1 - S` by construction.
    pub fn c(&self) -> f64 {
        1.0 - self.s
    }

    /// Errors with [`Error::DegenerateSplit`] when `S` is 0 or 1.
    pub fn require_interior(&self) -> Result<()> {
        if self.s > 0.0 && self.s < 1.0 {
            Ok(())
        } else {
            Err(Error::DegenerateSplit { s: self.s })
        }
    }
}

/// Full four-variable state: fractions of the population by loyalty and by
/// controlling force (supporters/contrarians under Blue/Red).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasicState {
    sb: f64,
    sr: f64,
    cr: f64,
    cb: f64,
}

impl BasicState {
    /// Validates component ranges and that the four fractions sum to 1
    /// within [`STATE_SUM_TOL`].
    pub fn new(sb: f64, sr: f64, cr: f64, cb: f64) -> Result<Self> {
        Self::with_sum_tol(sb, sr, cr, cb, STATE_SUM_TOL)
    }

    /// Same as [`BasicState::new`] with a caller-chosen sum tolerance (used
    /// when recording trajectories, where integrator drift is permitted up
    /// to a documented bound).
    pub fn with_sum_tol(sb: f64, sr: f64, cr: f64, cb: f64, tol: f64) -> Result<Self> {
        for (name, v) in [("SB", sb), ("SR", sr), ("CR", cr), ("CB", cb)] {
            if !(v.is_finite() && (-tol..=1.0 + tol).contains(&v)) {
                return Err(Error::InvalidState(format!(
                    "component {name}={v} outside [0, 1]"
                )));
            }
        }
        let sum = sb + sr + cr + cb;
        if (sum - 1.0).abs() > tol {
            return Err(Error::InvalidState(format!(
                "components sum to {sum}, expected 1 within {tol}"
            )));
        }
        Ok(Self { sb, sr, cr, cb })
    }

    pub fn sb(&self) -> f64 {
        self.sb
    }
    pub fn sr(&self) -> f64 {
        self.sr
    }
    pub fn cr(&self) -> f64 {
        self.cr
    }
    pub fn cb(&self) -> f64 {
        self.cb
    }

    /// Supporter fraction implied by this state.
    pub fn s(&self) -> f64 {
        self.sb + self.sr
    }

    /// Fraction of the population controlled by Blue.
    pub fn blue_controlled(&self) -> f64 {
        self.sb + self.cb
    }

    /// Fraction of the population controlled by Red.
    pub fn red_controlled(&self) -> f64 {
        self.sr + self.cr
    }

    /// Checks consistency with a split: `SB + SR = S` and `CR + CB = C`.
    pub fn check_split(&self, split: &PopulationSplit, tol: f64) -> Result<()> {
        if (self.s() - split.s()).abs() > tol || (self.cr + self.cb - split.c()).abs() > tol {
            return Err(Error::InvalidState(format!(
                "state implies S={}, expected {}",
                self.s(),
                split.s()
            )));
        }
        Ok(())
    }

    /// Explicitly rescales the four components so they sum to exactly 1.
    /// Never applied silently: integrator drift must stay visible to tests.
    pub fn renormalized(&self) -> Self {
        let sum = self.sb + self.sr + self.cr + self.cb;
        Self {
            sb: self.sb / sum,
            sr: self.sr / sum,
            cr: self.cr / sum,
            cb: self.cb / sum,
        }
    }

    /// The two independent coordinates `(SB, CR)`.
    pub fn reduced(&self) -> (f64, f64) {
        (self.sb, self.cr)
    }
}

/// Two-variable reduction of the fixed-population model: `SB` and `CR` are
/// independent, `SR = S - SB` and `CB = C - CR` are derived.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedState {
    sb: f64,
    cr: f64,
}

impl ReducedState {
    pub fn new(sb: f64, cr: f64, split: &PopulationSplit) -> Result<Self> {
        if !(sb.is_finite() && (0.0..=split.s()).contains(&sb)) {
            return Err(Error::InvalidState(format!(
                "SB={sb} outside [0, S={}]",
                split.s()
            )));
        }
        if !(cr.is_finite() && (0.0..=split.c()).contains(&cr)) {
            return Err(Error::InvalidState(format!(
                "CR={cr} outside [0, C={}]",
                split.c()
            )));
        }
        Ok(Self { sb, cr })
    }

    pub fn sb(&self) -> f64 {
        self.sb
    }
    pub fn cr(&self) -> f64 {
        self.cr
    }

    /// Expands to the full four-variable state under the given split.
    pub fn to_basic(&self, split: &PopulationSplit) -> Result<BasicState> {
        BasicState::new(self.sb, split.s() - self.sb, self.cr, split.c() - self.cr)
    }
}

/// State of the opportunistic-population variant, where the supporter
/// fraction `S` is itself dynamic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OpportunisticState {
    sb: f64,
    cr: f64,
    s: f64,
}

impl OpportunisticState {
    pub fn new(sb: f64, cr: f64, s: f64) -> Result<Self> {
        if !(s.is_finite() && (0.0..=1.0).contains(&s)) {
            return Err(Error::InvalidState(format!("S={s} outside [0, 1]")));
        }
        if !(sb.is_finite() && (0.0..=s).contains(&sb)) {
            return Err(Error::InvalidState(format!("SB={sb} outside [0, S={s}]")));
        }
        if !(cr.is_finite() && (0.0..=1.0 - s).contains(&cr)) {
            return Err(Error::InvalidState(format!(
                "CR={cr} outside [0, 1-S={}]",
                1.0 - s
            )));
        }
        Ok(Self { sb, cr, s })
    }

    pub fn sb(&self) -> f64 {
        self.sb
    }
    pub fn cr(&self) -> f64 {
        self.cr
    }
    pub fn s(&self) -> f64 {
        self.s
    }
}

/// Direct foreign intervention on Blue's side: additive combat power with
/// negligible attrition, `lambda_s` in supporter regions and `lambda_c` in
/// contrarian regions. Either may be zero (no intervention of that kind);
/// there is no upper bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirectIntervention {
    lambda_s: f64,
    lambda_c: f64,
}

impl DirectIntervention {
    pub fn new(lambda_s: f64, lambda_c: f64) -> Result<Self> {
        require_non_negative("lambda_S", lambda_s)?;
        require_non_negative("lambda_C", lambda_c)?;
        Ok(Self { lambda_s, lambda_c })
    }

    /// No intervention at all; reduces the model to the basic variant.
    pub fn none() -> Self {
        Self {
            lambda_s: 0.0,
            lambda_c: 0.0,
        }
    }

    pub fn lambda_s(&self) -> f64 {
        self.lambda_s
    }
    pub fn lambda_c(&self) -> f64 {
        self.lambda_c
    }

    /// Normalized strength in supporter regions, `A_S = lambda_S / f_S`.
    pub fn a_s(&self, rates: &RateParams) -> f64 {
        self.lambda_s / rates.f_s()
    }

    /// Normalized strength in contrarian regions, `A_C = lambda_C / h_C`.
    pub fn a_c(&self, rates: &RateParams) -> f64 {
        self.lambda_c / rates.h_c()
    }

    pub fn is_none(&self) -> bool {
        self.lambda_s == 0.0 && self.lambda_c == 0.0
    }
}

/// Indirect intervention: force multipliers `mu_S >= 1` on Blue's liberation
/// rate `f_S` and `mu_C >= 1` on Blue's subjugation rate `h_C`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IndirectIntervention {
    mu_s: f64,
    mu_c: f64,
}

impl IndirectIntervention {
    pub fn new(mu_s: f64, mu_c: f64) -> Result<Self> {
        for (name, v) in [("mu_S", mu_s), ("mu_C", mu_c)] {
            if !(v.is_finite() && v >= 1.0) {
                return Err(Error::InvalidParameter {
                    name,
                    requirement: "finite and >= 1",
                    value: v,
                });
            }
        }
        Ok(Self { mu_s, mu_c })
    }

    pub fn mu_s(&self) -> f64 {
        self.mu_s
    }
    pub fn mu_c(&self) -> f64 {
        self.mu_c
    }
}

/// Allegiance-switching rate of an opportunistic population. A single scalar:
/// the population drifts toward whichever side visibly controls more of it at
/// the same rate in both directions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OpportunisticParams {
    alpha: f64,
}

impl OpportunisticParams {
    pub fn new(alpha: f64) -> Result<Self> {
        require_positive("alpha", alpha)?;
        Ok(Self { alpha })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

// ---------------------------------------------------------------------------
// Right-hand sides.
//
// The `*_raw` kernels are the bare arithmetic on unvalidated coordinates;
// the integrator calls them directly because mid-step stage values may sit
// slightly outside the state box. The public operations validate their
// preconditions first.
// ---------------------------------------------------------------------------

pub(crate) fn rhs_basic_raw(sb: f64, cr: f64, s: f64, p: &RateParams) -> (f64, f64) {
    let d_sb = p.f_s() * sb * (s - sb) - p.h_s() * cr * sb;
    let d_cr = p.f_c() * cr * (1.0 - s - cr) - p.h_c() * sb * cr;
    (d_sb, d_cr)
}

pub(crate) fn rhs_direct_raw(
    sb: f64,
    cr: f64,
    s: f64,
    p: &RateParams,
    a_s: f64,
    a_c: f64,
) -> (f64, f64) {
    let d_sb = p.f_s() * (sb + a_s) * (s - sb) - p.h_s() * cr * sb;
    let d_cr = p.f_c() * cr * (1.0 - s - cr) - p.h_c() * (sb + a_c) * cr;
    (d_sb, d_cr)
}

pub(crate) fn rhs_opportunistic_raw(
    sb: f64,
    cr: f64,
    s: f64,
    p: &RateParams,
    alpha: f64,
) -> (f64, f64, f64) {
    let d_sb = p.f_s() * sb * (s - sb) - p.h_s() * cr * sb;
    let d_cr = p.f_c() * cr * (1.0 - s - cr) - p.h_c() * sb * cr;
    // Blue controls SB + CB = SB + 1 - S - CR; Red controls CR + SR = CR + S - SB.
    let blue = sb + 1.0 - s - cr;
    let red = cr + s - sb;
    let d_s = alpha * blue * (1.0 - s) - alpha * red * s;
    (d_sb, d_cr, d_s)
}

/// Time derivatives `(SB', CR')` of the two-variable fixed-population model.
pub fn rhs_basic(
    state: &ReducedState,
    split: &PopulationSplit,
    rates: &RateParams,
) -> Result<(f64, f64)> {
    ReducedState::new(state.sb(), state.cr(), split)?;
    Ok(rhs_basic_raw(state.sb(), state.cr(), split.s(), rates))
}

/// Time derivatives of all four population fractions.
///
/// `SB' + SR'` and `CR' + CB'` cancel exactly: each exchange term is computed
/// once and negated, so the total population is conserved bit-for-bit.
pub fn rhs_full_basic(state: &BasicState, rates: &RateParams) -> Result<[f64; 4]> {
    // Constructors enforce the invariants; re-check the ranges cheaply in
    // case the value was produced by arithmetic on accessors.
    BasicState::new(state.sb(), state.sr(), state.cr(), state.cb())?;
    let liberation_s = rates.f_s() * state.sb() * state.sr();
    let subjugation_s = rates.h_s() * state.cr() * state.sb();
    let liberation_c = rates.f_c() * state.cr() * state.cb();
    let subjugation_c = rates.h_c() * state.sb() * state.cr();
    let d_sb = liberation_s - subjugation_s;
    let d_cr = liberation_c - subjugation_c;
    Ok([d_sb, -d_sb, d_cr, -d_cr])
}

/// Two-variable model with direct foreign intervention for Blue. With both
/// powers zero this is bit-identical to [`rhs_basic`].
pub fn rhs_direct(
    state: &ReducedState,
    split: &PopulationSplit,
    rates: &RateParams,
    iv: &DirectIntervention,
) -> Result<(f64, f64)> {
    ReducedState::new(state.sb(), state.cr(), split)?;
    Ok(rhs_direct_raw(
        state.sb(),
        state.cr(),
        split.s(),
        rates,
        iv.a_s(rates),
        iv.a_c(rates),
    ))
}

/// Three-variable model with an opportunistic population: `(SB', CR', S')`.
pub fn rhs_opportunistic(
    state: &OpportunisticState,
    rates: &RateParams,
    op: &OpportunisticParams,
) -> Result<(f64, f64, f64)> {
    OpportunisticState::new(state.sb(), state.cr(), state.s())?;
    Ok(rhs_opportunistic_raw(
        state.sb(),
        state.cr(),
        state.s(),
        rates,
        op.alpha(),
    ))
}

/// Applies indirect intervention: `f_S <- mu_S * f_S`, `h_C <- mu_C * h_C`.
/// The LSERs become `mu_S * r_S` and `r_C / mu_C`; Red's rates are untouched.
pub fn apply_indirect(rates: &RateParams, iv: &IndirectIntervention) -> RateParams {
    RateParams::new(
        iv.mu_s() * rates.f_s(),
        rates.h_s(),
        rates.f_c(),
        iv.mu_c() * rates.h_c(),
    )
    .expect("positive multipliers on positive rates stay positive")
}
