//! Closed-form equilibria, Jacobians, eigenvalue stability reports, and
//! analytic outcome classification for the three model variants.
//!
//! Outcomes of the fixed-population model are decided entirely by the LSERs
//! and the split: Blue wins iff `r_C < S/(1-S)`, Red wins iff
//! `r_S < (1-S)/S`, otherwise the conflict settles into an interior
//! stalemate. The classifiers below implement those conditions together with
//! the intervention and opportunistic-population extensions, and back every
//! verdict with an explicit eigenvalue report.

mod eigen;

pub use eigen::{eig2, eig3, real_eigenvector3};

use crate::error::{Error, Result};
use crate::model::{
    BasicState, DirectIntervention, OpportunisticParams, OpportunisticState, PopulationSplit,
    RateParams, ReducedState,
};
use num_complex::Complex64;

/// Tolerances for classification decisions.
///
/// `boundary` controls when a parameter combination is reported as sitting on
/// a victory/stalemate boundary instead of being silently assigned a side;
/// `fixed_point` is the residual allowed when a closed-form equilibrium is
/// checked against its right-hand side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub boundary: f64,
    pub fixed_point: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            boundary: 1e-12,
            fixed_point: 1e-10,
        }
    }
}

/// Which theorem boundary a marginal classification sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    /// `r_C = S/(1-S)`: edge of the Blue-victory region.
    BlueVictory,
    /// `r_S = (1-S)/S`: edge of the Red-victory region.
    RedVictory,
    /// `lambda_C = f_C(1-S) - h_C*S`: edge of victory under direct intervention.
    DirectIntervention,
}

/// Predicted end state of the conflict.
#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    /// Blue ends up controlling the entire population (`SB + CB = 1`).
    BlueVictory,
    /// Red ends up controlling the entire population (`SR + CR = 1`).
    RedVictory,
    /// Both sides retain control of part of the population; carries the
    /// equilibrium point.
    Stalemate(BasicState),
    /// Parameters lie on a victory boundary within tolerance; the equilibrium
    /// structure is degenerate there and no side is picked.
    MarginalBoundary(Boundary),
}

impl Outcome {
    pub fn is_stalemate(&self) -> bool {
        matches!(self, Outcome::Stalemate(_))
    }
}

/// Labels for the equilibria of the model variants.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EquilibriumKind {
    /// `SB = CR = 0`: each force holds only hostile territory. Never stable.
    HostileControl,
    BlueVictory,
    RedVictory,
    /// Interior stalemate of the fixed-population or intervention model.
    Stalemate,
    /// Opportunistic variant: `SB = CR = 0`, `S = 1/2`. Never stable.
    DisarmedStalemate,
    /// Opportunistic variant: the interior saddle on the basin boundary.
    BalancedStalemate,
}

impl std::fmt::Display for EquilibriumKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            EquilibriumKind::HostileControl => "hostile-control",
            EquilibriumKind::BlueVictory => "blue-victory",
            EquilibriumKind::RedVictory => "red-victory",
            EquilibriumKind::Stalemate => "stalemate",
            EquilibriumKind::DisarmedStalemate => "disarmed-stalemate",
            EquilibriumKind::BalancedStalemate => "balanced-stalemate",
        };
        f.write_str(name)
    }
}

/// Jacobian of the reduced (2x2) or opportunistic (3x3) system.
#[derive(Debug, Clone, PartialEq)]
pub enum Jacobian {
    Two([[f64; 2]; 2]),
    Three([[f64; 3]; 3]),
}

impl Jacobian {
    pub fn dim(&self) -> usize {
        match self {
            Jacobian::Two(_) => 2,
            Jacobian::Three(_) => 3,
        }
    }
}

/// Eigenvalue analysis of one equilibrium.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilityReport {
    pub kind: EquilibriumKind,
    /// Reduced coordinates of the equilibrium: `(SB, CR)` or `(SB, CR, S)`.
    /// In victory regimes the algebraic stalemate point can leave the unit
    /// box; it is reported as computed.
    pub equilibrium: Vec<f64>,
    pub jacobian: Jacobian,
    pub eigenvalues: Vec<Complex64>,
    /// All eigenvalue real parts strictly negative (and not marginal).
    pub stable: bool,
    /// Largest real part within tolerance of zero.
    pub marginal: bool,
}

impl StabilityReport {
    pub fn max_real_part(&self) -> f64 {
        self.eigenvalues
            .iter()
            .map(|e| e.re)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

fn report2(
    kind: EquilibriumKind,
    sb: f64,
    cr: f64,
    j: [[f64; 2]; 2],
    tol: &Tolerances,
) -> StabilityReport {
    let eigenvalues = eig2(&j).to_vec();
    finish_report(kind, vec![sb, cr], Jacobian::Two(j), eigenvalues, tol)
}

fn report3(
    kind: EquilibriumKind,
    point: [f64; 3],
    j: [[f64; 3]; 3],
    tol: &Tolerances,
) -> StabilityReport {
    let eigenvalues = eig3(&j).to_vec();
    finish_report(kind, point.to_vec(), Jacobian::Three(j), eigenvalues, tol)
}

fn finish_report(
    kind: EquilibriumKind,
    equilibrium: Vec<f64>,
    jacobian: Jacobian,
    eigenvalues: Vec<Complex64>,
    tol: &Tolerances,
) -> StabilityReport {
    let max_re = eigenvalues
        .iter()
        .map(|e| e.re)
        .fold(f64::NEG_INFINITY, f64::max);
    let marginal = max_re.abs() <= tol.boundary;
    StabilityReport {
        kind,
        equilibrium,
        jacobian,
        eigenvalues,
        stable: max_re < 0.0 && !marginal,
        marginal,
    }
}

// ---------------------------------------------------------------------------
// Fixed-population model.
// ---------------------------------------------------------------------------

/// The LSER thresholds below which each side wins outright.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasicThresholds {
    /// Blue victory iff `r_C` is below this (`S/(1-S)`).
    pub blue_if_rc_below: f64,
    /// Red victory iff `r_S` is below this (`(1-S)/S`).
    pub red_if_rs_below: f64,
}

pub fn basic_thresholds(split: &PopulationSplit) -> Result<BasicThresholds> {
    split.require_interior()?;
    Ok(BasicThresholds {
        blue_if_rc_below: split.s() / split.c(),
        red_if_rs_below: split.c() / split.s(),
    })
}

/// Analytic outcome of the fixed-population model.
pub fn classify_basic(split: &PopulationSplit, rates: &RateParams) -> Result<Outcome> {
    classify_basic_with(split, rates, &Tolerances::default())
}

pub fn classify_basic_with(
    split: &PopulationSplit,
    rates: &RateParams,
    tol: &Tolerances,
) -> Result<Outcome> {
    rates.require_dominant()?;
    let th = basic_thresholds(split)?;
    let d_blue = rates.r_c() - th.blue_if_rc_below;
    let d_red = rates.r_s() - th.red_if_rs_below;
    if d_blue.abs() <= tol.boundary || d_red.abs() <= tol.boundary {
        let boundary = if d_blue.abs() <= d_red.abs() {
            Boundary::BlueVictory
        } else {
            Boundary::RedVictory
        };
        return Ok(Outcome::MarginalBoundary(boundary));
    }
    if d_blue < 0.0 {
        return Ok(Outcome::BlueVictory);
    }
    if d_red < 0.0 {
        return Ok(Outcome::RedVictory);
    }
    Ok(Outcome::Stalemate(stalemate_basic(split, rates)?))
}

/// Closed-form interior stalemate of the fixed-population model:
/// `CB = (S(1+r_S)-1)/(r_S r_C - 1)`, `SR = (r_C - S(1+r_C))/(r_S r_C - 1)`,
/// `SB = r_C*CB`, `CR = r_S*SR`.
pub fn stalemate_basic(split: &PopulationSplit, rates: &RateParams) -> Result<BasicState> {
    rates.require_dominant()?;
    split.require_interior()?;
    let (sb, sr, cr, cb) = stalemate_basic_raw(split.s(), rates.r_s(), rates.r_c());
    if cb <= 0.0 || sr <= 0.0 {
        return Err(Error::RegionError(format!(
            "no interior stalemate: CB={cb}, SR={sr}; parameters lie in a victory regime"
        )));
    }
    BasicState::new(sb, sr, cr, cb)
}

/// The algebraic stalemate point without region checks; components go
/// negative in victory regimes, where the point is still needed as a saddle
/// for the stability survey.
fn stalemate_basic_raw(s: f64, r_s: f64, r_c: f64) -> (f64, f64, f64, f64) {
    let den = r_s * r_c - 1.0;
    let cb = (s * (1.0 + r_s) - 1.0) / den;
    let sr = (r_c - s * (1.0 + r_c)) / den;
    (r_c * cb, sr, r_s * sr, cb)
}

pub(crate) fn jacobian_basic_raw(sb: f64, cr: f64, s: f64, rates: &RateParams) -> [[f64; 2]; 2] {
    [
        [
            rates.f_s() * (s - 2.0 * sb) - rates.h_s() * cr,
            -rates.h_s() * sb,
        ],
        [
            -rates.h_c() * cr,
            rates.f_c() * (1.0 - s - 2.0 * cr) - rates.h_c() * sb,
        ],
    ]
}

/// Jacobian of the reduced fixed-population right-hand side at a state.
pub fn jacobian_basic(
    state: &ReducedState,
    split: &PopulationSplit,
    rates: &RateParams,
) -> Result<[[f64; 2]; 2]> {
    ReducedState::new(state.sb(), state.cr(), split)?;
    Ok(jacobian_basic_raw(state.sb(), state.cr(), split.s(), rates))
}

/// Stability reports for all four equilibria of the fixed-population model:
/// hostile-control, Blue victory, Red victory, and the (algebraic) stalemate.
/// For dominant rates away from the boundaries exactly one is stable, and it
/// coincides with [`classify_basic`].
pub fn stability_basic(
    split: &PopulationSplit,
    rates: &RateParams,
) -> Result<Vec<StabilityReport>> {
    stability_basic_with(split, rates, &Tolerances::default())
}

pub fn stability_basic_with(
    split: &PopulationSplit,
    rates: &RateParams,
    tol: &Tolerances,
) -> Result<Vec<StabilityReport>> {
    rates.require_dominant()?;
    split.require_interior()?;
    let s = split.s();
    let (sb_b, _, cr_b, _) = stalemate_basic_raw(s, rates.r_s(), rates.r_c());
    let points = [
        (EquilibriumKind::HostileControl, 0.0, 0.0),
        (EquilibriumKind::BlueVictory, s, 0.0),
        (EquilibriumKind::RedVictory, 0.0, split.c()),
        (EquilibriumKind::Stalemate, sb_b, cr_b),
    ];
    Ok(points
        .into_iter()
        .map(|(kind, sb, cr)| report2(kind, sb, cr, jacobian_basic_raw(sb, cr, s, rates), tol))
        .collect())
}

// ---------------------------------------------------------------------------
// Direct foreign intervention.
// ---------------------------------------------------------------------------

/// Firepower threshold in contrarian regions above which Blue wins:
/// `lambda_C* = f_C(1-S) - h_C*S`. Non-positive when Blue already wins on
/// its own.
pub fn direct_victory_threshold(split: &PopulationSplit, rates: &RateParams) -> f64 {
    rates.f_c() * split.c() - rates.h_c() * split.s()
}

/// Analytic outcome under direct intervention. With any support present Red
/// cannot win: the only outcomes are Blue victory (above the threshold) and
/// stalemate. With both powers zero this defers to [`classify_basic`].
pub fn classify_direct(
    split: &PopulationSplit,
    rates: &RateParams,
    iv: &DirectIntervention,
) -> Result<Outcome> {
    classify_direct_with(split, rates, iv, &Tolerances::default())
}

pub fn classify_direct_with(
    split: &PopulationSplit,
    rates: &RateParams,
    iv: &DirectIntervention,
    tol: &Tolerances,
) -> Result<Outcome> {
    rates.require_dominant()?;
    split.require_interior()?;
    if iv.is_none() {
        return classify_basic_with(split, rates, tol);
    }
    let d = iv.lambda_c() - direct_victory_threshold(split, rates);
    if d.abs() <= tol.boundary {
        return Ok(Outcome::MarginalBoundary(Boundary::DirectIntervention));
    }
    if d > 0.0 {
        return Ok(Outcome::BlueVictory);
    }
    Ok(Outcome::Stalemate(stalemate_direct(split, rates, iv)?))
}

/// Closed-form stalemate under direct intervention. `SB` is the positive
/// root of the quadratic obtained by eliminating `CR` from the two
/// equilibrium conditions; the other components follow from
/// `CB = (SB + A_C)/r_C` and the population identities.
///
/// With `lambda_S = 0` the root can sit exactly on `SB = 0` (Blue holds
/// contrarian territory by foreign firepower alone); negative `SR` or `CR`
/// means the parameters are in a victory regime and is reported as a
/// region error.
pub fn stalemate_direct(
    split: &PopulationSplit,
    rates: &RateParams,
    iv: &DirectIntervention,
) -> Result<BasicState> {
    rates.require_dominant()?;
    split.require_interior()?;
    let s = split.s();
    let r_s = rates.r_s();
    let r_c = rates.r_c();
    let den = r_s * r_c - 1.0;
    let a_s = iv.a_s(rates);
    let a_c = iv.a_c(rates);
    let (sb_b, _, _, _) = stalemate_basic_raw(s, r_s, r_c);

    let t = 0.5 * sb_b - 0.5 * a_s + (a_c - a_s) / (2.0 * den);
    let disc = t * t + r_s * r_c * a_s * s / den;
    let sb = t + disc.sqrt();
    let sr = s - sb;
    let cb = (sb + a_c) / r_c;
    let cr = 1.0 - s - cb;
    if sr < 0.0 || cr < 0.0 {
        return Err(Error::RegionError(format!(
            "no intervention stalemate: SR={sr}, CR={cr}; parameters lie in a victory regime"
        )));
    }
    BasicState::new(sb, sr, cr, cb)
}

pub(crate) fn jacobian_direct_raw(
    sb: f64,
    cr: f64,
    s: f64,
    rates: &RateParams,
    a_s: f64,
    a_c: f64,
) -> [[f64; 2]; 2] {
    [
        [
            rates.f_s() * (s - 2.0 * sb - a_s) - rates.h_s() * cr,
            -rates.h_s() * sb,
        ],
        [
            -rates.h_c() * cr,
            rates.f_c() * (1.0 - s - 2.0 * cr) - rates.h_c() * (sb + a_c),
        ],
    ]
}

/// Jacobian of the direct-intervention right-hand side at a state.
pub fn jacobian_direct(
    state: &ReducedState,
    split: &PopulationSplit,
    rates: &RateParams,
    iv: &DirectIntervention,
) -> Result<[[f64; 2]; 2]> {
    ReducedState::new(state.sb(), state.cr(), split)?;
    Ok(jacobian_direct_raw(
        state.sb(),
        state.cr(),
        split.s(),
        rates,
        iv.a_s(rates),
        iv.a_c(rates),
    ))
}

/// Stability reports for the equilibria of the direct-intervention model:
/// Blue victory always, the intervention stalemate when it exists, and the
/// degenerate extra equilibria when the corresponding powers are zero. The
/// stalemate verdict is conjectural (eigenvalues, not a proof).
pub fn stability_direct(
    split: &PopulationSplit,
    rates: &RateParams,
    iv: &DirectIntervention,
) -> Result<Vec<StabilityReport>> {
    stability_direct_with(split, rates, iv, &Tolerances::default())
}

pub fn stability_direct_with(
    split: &PopulationSplit,
    rates: &RateParams,
    iv: &DirectIntervention,
    tol: &Tolerances,
) -> Result<Vec<StabilityReport>> {
    rates.require_dominant()?;
    split.require_interior()?;
    let s = split.s();
    let a_s = iv.a_s(rates);
    let a_c = iv.a_c(rates);

    let mut points = vec![(EquilibriumKind::BlueVictory, s, 0.0)];
    if iv.lambda_s() == 0.0 {
        points.push((EquilibriumKind::HostileControl, 0.0, 0.0));
        if iv.lambda_c() == 0.0 {
            points.push((EquilibriumKind::RedVictory, 0.0, split.c()));
        }
    }
    if let Ok(st) = stalemate_direct(split, rates, iv) {
        // With zero powers the closed form can collapse onto one of the
        // victory points; report each equilibrium once.
        let distinct = points
            .iter()
            .all(|(_, sb, cr)| (sb - st.sb()).abs() + (cr - st.cr()).abs() > 1e-12);
        if distinct {
            points.push((EquilibriumKind::Stalemate, st.sb(), st.cr()));
        }
    }
    Ok(points
        .into_iter()
        .map(|(kind, sb, cr)| {
            report2(
                kind,
                sb,
                cr,
                jacobian_direct_raw(sb, cr, s, rates, a_s, a_c),
                tol,
            )
        })
        .collect())
}

/// One numerical probe of the intervention-stalemate stability conjecture:
/// the stalemate is believed stable exactly when `(r_C - A_C)/(1 + r_C) > S`.
/// The claim is conjectural, so the check reports both verdicts instead of
/// asserting their equality.
#[derive(Debug, Clone, PartialEq)]
pub struct ConjectureCheck {
    /// `(r_C - A_C)/(1 + r_C) > S`.
    pub condition_holds: bool,
    /// All eigenvalues of the intervention Jacobian at the stalemate have
    /// negative real parts.
    pub numerically_stable: bool,
    /// Within tolerance of either the condition boundary or an eigenvalue
    /// sign change; such draws are inconclusive by construction.
    pub marginal: bool,
    /// Condition and eigenvalues agree (or the draw is marginal).
    pub agrees: bool,
    pub point: BasicState,
    pub eigenvalues: [Complex64; 2],
}

pub fn check_conjecture(
    split: &PopulationSplit,
    rates: &RateParams,
    iv: &DirectIntervention,
) -> Result<ConjectureCheck> {
    let point = stalemate_direct(split, rates, iv)?;
    let (sb, cr) = point.reduced();
    let a_c = iv.a_c(rates);
    let cond_lhs = (rates.r_c() - a_c) / (1.0 + rates.r_c());
    let condition_holds = cond_lhs > split.s();

    let j = jacobian_direct_raw(sb, cr, split.s(), rates, iv.a_s(rates), a_c);
    let eigenvalues = eig2(&j);
    let max_re = eigenvalues[0].re.max(eigenvalues[1].re);
    let spectral = eigenvalues[0].norm().max(eigenvalues[1].norm());
    let numerically_stable = max_re < 0.0;
    let marginal = max_re.abs() <= 1e-9 * spectral.max(1.0) || (cond_lhs - split.s()).abs() <= 1e-9;
    Ok(ConjectureCheck {
        condition_holds,
        numerically_stable,
        marginal,
        agrees: marginal || condition_holds == numerically_stable,
        point,
        eigenvalues,
    })
}

// ---------------------------------------------------------------------------
// Indirect intervention.
// ---------------------------------------------------------------------------

/// Force multipliers Blue needs: `mu_S >= (1-S)/(r_S*S)` to avoid defeat and
/// `mu_C > r_C(1-S)/S` to win, both clamped below at 1 (no support needed).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IndirectThresholds {
    pub mu_s_min: f64,
    pub mu_c_min: f64,
    /// Whether securing a win requires any multiplier at all
    /// (`S < r_C/(1+r_C)`).
    pub needed: bool,
}

pub fn indirect_thresholds(
    split: &PopulationSplit,
    rates: &RateParams,
) -> Result<IndirectThresholds> {
    rates.require_dominant()?;
    split.require_interior()?;
    let s = split.s();
    let mu_s_min = (split.c() / (rates.r_s() * s)).max(1.0);
    let mu_c_min = (rates.r_c() * split.c() / s).max(1.0);
    Ok(IndirectThresholds {
        mu_s_min,
        mu_c_min,
        needed: s < rates.r_c() / (1.0 + rates.r_c()),
    })
}

// ---------------------------------------------------------------------------
// Opportunistic population.
// ---------------------------------------------------------------------------

pub(crate) fn jacobian_opportunistic_raw(
    sb: f64,
    cr: f64,
    s: f64,
    rates: &RateParams,
    alpha: f64,
) -> [[f64; 3]; 3] {
    [
        [
            rates.f_s() * (s - 2.0 * sb) - rates.h_s() * cr,
            -rates.h_s() * sb,
            rates.f_s() * sb,
        ],
        [
            -rates.h_c() * cr,
            rates.f_c() * (1.0 - s - 2.0 * cr) - rates.h_c() * sb,
            -rates.f_c() * cr,
        ],
        [alpha, -alpha, -2.0 * alpha],
    ]
}

/// Jacobian of the opportunistic right-hand side at a state.
pub fn jacobian_opportunistic(
    state: &OpportunisticState,
    rates: &RateParams,
    op: &OpportunisticParams,
) -> Result<[[f64; 3]; 3]> {
    OpportunisticState::new(state.sb(), state.cr(), state.s())?;
    Ok(jacobian_opportunistic_raw(
        state.sb(),
        state.cr(),
        state.s(),
        rates,
        op.alpha(),
    ))
}

/// Balanced stalemate of the opportunistic model:
/// `(SB*, CR*, S*) = (r_C, r_S, 1 + r_C) / (2 + r_S + r_C)`.
pub fn balanced_stalemate(rates: &RateParams) -> OpportunisticState {
    let den = 2.0 + rates.r_s() + rates.r_c();
    OpportunisticState::new(
        rates.r_c() / den,
        rates.r_s() / den,
        (1.0 + rates.r_c()) / den,
    )
    .expect("balanced stalemate is always interior")
}

/// Equilibrium survey of the opportunistic model.
#[derive(Debug, Clone, PartialEq)]
pub struct OpportunisticEquilibria {
    pub balanced: OpportunisticState,
    /// Reports for Blue victory, Red victory, disarmed stalemate, and the
    /// balanced stalemate, in that order. The victories are stable for every
    /// parameter choice; both stalemates never are.
    pub reports: Vec<StabilityReport>,
}

pub fn opportunistic_equilibria(
    rates: &RateParams,
    op: &OpportunisticParams,
) -> OpportunisticEquilibria {
    opportunistic_equilibria_with(rates, op, &Tolerances::default())
}

pub fn opportunistic_equilibria_with(
    rates: &RateParams,
    op: &OpportunisticParams,
    tol: &Tolerances,
) -> OpportunisticEquilibria {
    let balanced = balanced_stalemate(rates);
    let alpha = op.alpha();
    let points = [
        (EquilibriumKind::BlueVictory, [1.0, 0.0, 1.0]),
        (EquilibriumKind::RedVictory, [0.0, 1.0, 0.0]),
        (EquilibriumKind::DisarmedStalemate, [0.0, 0.0, 0.5]),
        (
            EquilibriumKind::BalancedStalemate,
            [balanced.sb(), balanced.cr(), balanced.s()],
        ),
    ];
    let reports = points
        .into_iter()
        .map(|(kind, p)| {
            let j = jacobian_opportunistic_raw(p[0], p[1], p[2], rates, alpha);
            report3(kind, p, j, tol)
        })
        .collect();
    OpportunisticEquilibria { balanced, reports }
}

/// Closed form for the determinant of the opportunistic Jacobian at the
/// balanced stalemate; positive for every parameter choice, which forces a
/// positive eigenvalue and hence instability.
pub fn balanced_stalemate_jacobian_det(rates: &RateParams, op: &OpportunisticParams) -> f64 {
    let den = 2.0 + rates.r_s() + rates.r_c();
    op.alpha()
        * rates.r_s()
        * rates.r_c()
        * (rates.h_s() * rates.f_c() + rates.f_s() * rates.h_c() + 2.0 * rates.h_s() * rates.h_c())
        / (den * den)
}
