//! Parameter sweeps, basin-of-attraction maps, and the Monte Carlo harness
//! for the intervention-stalemate stability conjecture.
//!
//! Sweep cells are independent pure computations; they are evaluated in
//! parallel but assembled in grid order, so results are bit-identical
//! regardless of scheduling.

use crate::equilibria::{
    check_conjecture, classify_basic, classify_direct, Boundary, ConjectureCheck, Outcome,
};
use crate::error::{Error, Result};
use crate::integrate::{integrate, outcome_from_trajectory, IntegratorConfig, Model, Terminal};
use crate::model::{
    apply_indirect, DirectIntervention, IndirectIntervention, OpportunisticParams,
    OpportunisticState, PopulationSplit, RateParams,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

// ---------------------------------------------------------------------------
// Outcome maps.
// ---------------------------------------------------------------------------

/// Parameters a sweep axis may range over.
///
/// Sweeping an LSER (`RS`/`RC`) replaces the rate set per cell with the
/// canonical dominant representative of the target ratios (`h_S = 1`,
/// `f_S = r_S`, `h_C = sqrt(r_S/r_C)`, `f_C = r_C h_C`), which exists exactly
/// when `r_S r_C > 1`; cells without one are excluded. Outcomes and control
/// fractions depend on the rates only through the ratios, so the
/// representative is faithful.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    S,
    RS,
    RC,
    FS,
    HS,
    FC,
    HC,
    LambdaS,
    LambdaC,
    MuS,
    MuC,
}

impl SweepParam {
    pub fn name(&self) -> &'static str {
        match self {
            SweepParam::S => "S",
            SweepParam::RS => "r_S",
            SweepParam::RC => "r_C",
            SweepParam::FS => "f_S",
            SweepParam::HS => "h_S",
            SweepParam::FC => "f_C",
            SweepParam::HC => "h_C",
            SweepParam::LambdaS => "lambda_S",
            SweepParam::LambdaC => "lambda_C",
            SweepParam::MuS => "mu_S",
            SweepParam::MuC => "mu_C",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxisScale {
    Linear,
    Log,
}

/// One sweep axis: `count` points from `min` to `max` inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisSpec {
    pub param: SweepParam,
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub scale: AxisScale,
}

impl AxisSpec {
    pub fn linear(param: SweepParam, min: f64, max: f64, count: usize) -> Self {
        Self {
            param,
            min,
            max,
            count,
            scale: AxisScale::Linear,
        }
    }

    pub fn values(&self) -> Vec<f64> {
        let n = self.count;
        (0..n)
            .map(|i| {
                // Endpoints land on the bounds exactly.
                if i == 0 {
                    return self.min;
                }
                if i == n - 1 {
                    return self.max;
                }
                let frac = i as f64 / (n - 1) as f64;
                match self.scale {
                    AxisScale::Linear => self.min + (self.max - self.min) * frac,
                    AxisScale::Log => {
                        (self.min.ln() + (self.max.ln() - self.min.ln()) * frac).exp()
                    }
                }
            })
            .collect()
    }

    fn validate(&self) -> Result<()> {
        if self.count < 2 {
            return Err(Error::ConfigError(format!(
                "axis {} needs at least 2 points, got {}",
                self.param.name(),
                self.count
            )));
        }
        if !(self.min.is_finite() && self.max.is_finite() && self.min < self.max) {
            return Err(Error::ConfigError(format!(
                "axis {} needs min < max, got [{}, {}]",
                self.param.name(),
                self.min,
                self.max
            )));
        }
        if self.scale == AxisScale::Log && self.min <= 0.0 {
            return Err(Error::ConfigError(format!(
                "log axis {} needs min > 0",
                self.param.name()
            )));
        }
        let range_ok = match self.param {
            SweepParam::S => self.min > 0.0 && self.max < 1.0,
            SweepParam::RS | SweepParam::RC => self.min > 0.0,
            SweepParam::FS | SweepParam::HS | SweepParam::FC | SweepParam::HC => self.min > 0.0,
            SweepParam::LambdaS | SweepParam::LambdaC => self.min >= 0.0,
            SweepParam::MuS | SweepParam::MuC => self.min >= 1.0,
        };
        if !range_ok {
            return Err(Error::ConfigError(format!(
                "axis {} range [{}, {}] is outside the parameter's domain",
                self.param.name(),
                self.min,
                self.max
            )));
        }
        Ok(())
    }
}

/// Which model family a sweep classifies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVariant {
    Basic,
    Direct,
    Indirect,
}

impl SweepVariant {
    fn allows(&self, p: SweepParam) -> bool {
        use SweepParam::*;
        match p {
            S | RS | RC | FS | HS | FC | HC => true,
            LambdaS | LambdaC => *self == SweepVariant::Direct,
            MuS | MuC => *self == SweepVariant::Indirect,
        }
    }
}

/// Fixed values for every parameter not on an axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepBase {
    pub split: PopulationSplit,
    pub rates: RateParams,
    pub intervention: DirectIntervention,
    pub indirect: Option<IndirectIntervention>,
}

impl SweepBase {
    pub fn basic(split: PopulationSplit, rates: RateParams) -> Self {
        Self {
            split,
            rates,
            intervention: DirectIntervention::none(),
            indirect: None,
        }
    }
}

/// Full sweep specification: variant, base point, and two axes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub variant: SweepVariant,
    pub base: SweepBase,
    pub x: AxisSpec,
    pub y: AxisSpec,
}

impl SweepSpec {
    fn validate(&self) -> Result<()> {
        self.x.validate()?;
        self.y.validate()?;
        if self.x.param == self.y.param {
            return Err(Error::ConfigError(format!(
                "both axes sweep {}",
                self.x.param.name()
            )));
        }
        for axis in [&self.x, &self.y] {
            if !self.variant.allows(axis.param) {
                return Err(Error::ConfigError(format!(
                    "parameter {} is not part of the {:?} variant",
                    axis.param.name(),
                    self.variant
                )));
            }
        }
        self.base.split.require_interior()?;
        Ok(())
    }
}

/// Analytic verdict for one sweep cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellOutcome {
    BlueVictory,
    RedVictory,
    Stalemate,
    /// Within boundary tolerance of a victory condition.
    Marginal,
    /// No dominant rate assignment exists for this cell; no outcome is
    /// fabricated for it.
    Excluded,
}

impl CellOutcome {
    pub fn tag(&self) -> &'static str {
        match self {
            CellOutcome::BlueVictory => "blue",
            CellOutcome::RedVictory => "red",
            CellOutcome::Stalemate => "stalemate",
            CellOutcome::Marginal => "marginal",
            CellOutcome::Excluded => "excluded",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepCell {
    pub x: f64,
    pub y: f64,
    pub outcome: CellOutcome,
    /// Fraction of the population Blue controls at the attractor: 1 or 0 for
    /// victories, the stalemate value otherwise; absent on excluded cells.
    pub blue_fraction: Option<f64>,
}

/// Integration cross-check summary for an outcome map.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossCheckReport {
    pub checked: usize,
    pub agreements: usize,
    pub inconclusive: usize,
    /// `(x, y, analytic, integrated)` for every disagreeing cell.
    pub mismatches: Vec<(f64, f64, CellOutcome, CellOutcome)>,
}

/// Populated outcome map, cells in row-major order (`y` outer, `x` inner).
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeMap {
    pub spec: SweepSpec,
    pub cells: Vec<SweepCell>,
    pub cross_check: Option<CrossCheckReport>,
}

impl OutcomeMap {
    pub fn cell(&self, ix: usize, iy: usize) -> &SweepCell {
        &self.cells[iy * self.spec.x.count + ix]
    }
}

/// Concrete parameters of one cell after applying the axis values.
#[derive(Debug, Clone, Copy)]
struct CellPoint {
    split: PopulationSplit,
    rates: RateParams,
    intervention: DirectIntervention,
}

fn realize_cell(spec: &SweepSpec, x: f64, y: f64) -> Result<Option<CellPoint>> {
    let base = &spec.base;
    let mut s = base.split.s();
    let mut f_s = base.rates.f_s();
    let mut h_s = base.rates.h_s();
    let mut f_c = base.rates.f_c();
    let mut h_c = base.rates.h_c();
    let mut lambda_s = base.intervention.lambda_s();
    let mut lambda_c = base.intervention.lambda_c();
    let mut mu_s = base.indirect.map_or(1.0, |m| m.mu_s());
    let mut mu_c = base.indirect.map_or(1.0, |m| m.mu_c());
    let mut rs_target = None;
    let mut rc_target = None;

    for (param, v) in [(spec.x.param, x), (spec.y.param, y)] {
        match param {
            SweepParam::S => s = v,
            SweepParam::RS => rs_target = Some(v),
            SweepParam::RC => rc_target = Some(v),
            SweepParam::FS => f_s = v,
            SweepParam::HS => h_s = v,
            SweepParam::FC => f_c = v,
            SweepParam::HC => h_c = v,
            SweepParam::LambdaS => lambda_s = v,
            SweepParam::LambdaC => lambda_c = v,
            SweepParam::MuS => mu_s = v,
            SweepParam::MuC => mu_c = v,
        }
    }

    let mut rates = if rs_target.is_some() || rc_target.is_some() {
        let r_s = rs_target.unwrap_or(base.rates.r_s());
        let r_c = rc_target.unwrap_or(base.rates.r_c());
        if r_s * r_c <= 1.0 {
            return Ok(None); // no dominant representative exists
        }
        let h_c = (r_s / r_c).sqrt();
        RateParams::new(r_s, 1.0, r_c * h_c, h_c)?
    } else {
        RateParams::new(f_s, h_s, f_c, h_c)?
    };
    if mu_s != 1.0 || mu_c != 1.0 {
        rates = apply_indirect(&rates, &IndirectIntervention::new(mu_s, mu_c)?);
    }
    if !rates.dominant() {
        return Ok(None);
    }
    Ok(Some(CellPoint {
        split: PopulationSplit::new(s)?,
        rates,
        intervention: DirectIntervention::new(lambda_s, lambda_c)?,
    }))
}

fn classify_cell(point: &CellPoint) -> Result<(CellOutcome, Option<f64>)> {
    let outcome = if point.intervention.is_none() {
        classify_basic(&point.split, &point.rates)?
    } else {
        classify_direct(&point.split, &point.rates, &point.intervention)?
    };
    Ok(match outcome {
        Outcome::BlueVictory => (CellOutcome::BlueVictory, Some(1.0)),
        Outcome::RedVictory => (CellOutcome::RedVictory, Some(0.0)),
        Outcome::Stalemate(st) => (CellOutcome::Stalemate, Some(st.blue_controlled())),
        // Fractions extend continuously onto the boundaries: the stalemate
        // fraction reaches 1 on the Blue and intervention boundaries and 0
        // on the Red boundary.
        Outcome::MarginalBoundary(b) => (
            CellOutcome::Marginal,
            Some(match b {
                Boundary::BlueVictory | Boundary::DirectIntervention => 1.0,
                Boundary::RedVictory => 0.0,
            }),
        ),
    })
}

/// Classifies every cell of the grid analytically.
pub fn outcome_map(spec: &SweepSpec) -> Result<OutcomeMap> {
    outcome_map_impl(spec, None)
}

/// Classifies every cell analytically and re-derives each non-marginal,
/// non-excluded cell by integrating from the default initial condition.
pub fn outcome_map_cross_checked(spec: &SweepSpec, cfg: &IntegratorConfig) -> Result<OutcomeMap> {
    outcome_map_impl(spec, Some(cfg))
}

fn outcome_map_impl(spec: &SweepSpec, cross: Option<&IntegratorConfig>) -> Result<OutcomeMap> {
    spec.validate()?;
    let xs = spec.x.values();
    let ys = spec.y.values();

    let indices: Vec<(usize, usize)> = (0..ys.len())
        .flat_map(|iy| (0..xs.len()).map(move |ix| (ix, iy)))
        .collect();

    let evaluated: Result<Vec<(SweepCell, Option<CellPoint>)>> = indices
        .par_iter()
        .map(|&(ix, iy)| {
            let (x, y) = (xs[ix], ys[iy]);
            match realize_cell(spec, x, y)? {
                None => Ok((
                    SweepCell {
                        x,
                        y,
                        outcome: CellOutcome::Excluded,
                        blue_fraction: None,
                    },
                    None,
                )),
                Some(point) => {
                    let (outcome, blue_fraction) = classify_cell(&point)?;
                    Ok((
                        SweepCell {
                            x,
                            y,
                            outcome,
                            blue_fraction,
                        },
                        Some(point),
                    ))
                }
            }
        })
        .collect();
    let evaluated = evaluated?;

    // (x, y, analytic tag, integrated tag if conclusive)
    type CheckedCell = (f64, f64, CellOutcome, Option<CellOutcome>);

    let cross_check = match cross {
        None => None,
        Some(cfg) => {
            let cfg = cfg.sparse();
            let results: Vec<Option<CheckedCell>> = evaluated
                .par_iter()
                .map(|(cell, point)| {
                    let point = point.as_ref()?;
                    if matches!(cell.outcome, CellOutcome::Marginal | CellOutcome::Excluded) {
                        return None;
                    }
                    let model = if point.intervention.is_none() {
                        Model::Basic {
                            split: point.split,
                            rates: point.rates,
                        }
                    } else {
                        Model::Direct {
                            split: point.split,
                            rates: point.rates,
                            intervention: point.intervention,
                        }
                    };
                    let integrated = integrate(&model, &model.default_init(), &cfg)
                        .ok()
                        .and_then(|traj| match traj.terminal {
                            Terminal::HorizonReached => None,
                            _ => outcome_from_trajectory(&traj, 1e-6).ok(),
                        })
                        .map(|o| match o {
                            Outcome::BlueVictory => CellOutcome::BlueVictory,
                            Outcome::RedVictory => CellOutcome::RedVictory,
                            Outcome::Stalemate(_) => CellOutcome::Stalemate,
                            Outcome::MarginalBoundary(_) => CellOutcome::Marginal,
                        });
                    Some((cell.x, cell.y, cell.outcome, integrated))
                })
                .collect();

            let mut report = CrossCheckReport {
                checked: 0,
                agreements: 0,
                inconclusive: 0,
                mismatches: Vec::new(),
            };
            for r in results.into_iter().flatten() {
                report.checked += 1;
                match r.3 {
                    None => report.inconclusive += 1,
                    Some(tag) if tag == r.2 => report.agreements += 1,
                    Some(tag) => report.mismatches.push((r.0, r.1, r.2, tag)),
                }
            }
            Some(report)
        }
    };

    Ok(OutcomeMap {
        spec: *spec,
        cells: evaluated.into_iter().map(|(c, _)| c).collect(),
        cross_check,
    })
}

/// The Blue-controlled-fraction surface over the same grid; victory cells
/// carry exactly 1 or 0 and stalemate cells the closed-form value.
pub fn blue_control_surface(spec: &SweepSpec) -> Result<OutcomeMap> {
    outcome_map(spec)
}

// ---------------------------------------------------------------------------
// Basin-of-attraction maps.
// ---------------------------------------------------------------------------

/// Initial-condition coordinates of the opportunistic model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasinCoord {
    Sb0,
    Cr0,
    S0,
}

impl BasinCoord {
    pub fn name(&self) -> &'static str {
        match self {
            BasinCoord::Sb0 => "SB0",
            BasinCoord::Cr0 => "CR0",
            BasinCoord::S0 => "S0",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasinAxis {
    pub coord: BasinCoord,
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

/// A 2-D slice through the 3-D space of initial conditions: two coordinates
/// vary, the third is pinned.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasinSpec {
    pub x: BasinAxis,
    pub y: BasinAxis,
    pub fixed: BasinCoord,
    pub fixed_value: f64,
}

impl BasinSpec {
    /// Default slice: vary `SB0` and `CR0` over the unit square at fixed `S0`.
    pub fn sb_cr_slice(s0: f64, count: usize) -> Self {
        Self {
            x: BasinAxis {
                coord: BasinCoord::Sb0,
                min: 0.0,
                max: 1.0,
                count,
            },
            y: BasinAxis {
                coord: BasinCoord::Cr0,
                min: 0.0,
                max: 1.0,
                count,
            },
            fixed: BasinCoord::S0,
            fixed_value: s0,
        }
    }

    fn validate(&self) -> Result<()> {
        for axis in [&self.x, &self.y] {
            if axis.count < 2 || axis.min >= axis.max || !axis.min.is_finite() {
                return Err(Error::ConfigError(format!(
                    "basin axis {} needs count >= 2 and min < max",
                    axis.coord.name()
                )));
            }
        }
        let mut seen = [self.x.coord, self.y.coord, self.fixed];
        seen.sort_by_key(|c| *c as u8);
        if seen != [BasinCoord::Sb0, BasinCoord::Cr0, BasinCoord::S0] {
            return Err(Error::ConfigError(
                "basin slice must use each of SB0, CR0, S0 exactly once".into(),
            ));
        }
        Ok(())
    }

    fn state_at(&self, x: f64, y: f64) -> Result<OpportunisticState> {
        let mut sb = 0.0;
        let mut cr = 0.0;
        let mut s = 0.0;
        for (coord, v) in [
            (self.x.coord, x),
            (self.y.coord, y),
            (self.fixed, self.fixed_value),
        ] {
            match coord {
                BasinCoord::Sb0 => sb = v,
                BasinCoord::Cr0 => cr = v,
                BasinCoord::S0 => s = v,
            }
        }
        OpportunisticState::new(sb, cr, s)
    }

    fn axis_values(axis: &BasinAxis) -> Vec<f64> {
        (0..axis.count)
            .map(|i| axis.min + (axis.max - axis.min) * i as f64 / (axis.count - 1) as f64)
            .collect()
    }
}

/// Attractor reached from one initial cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasinTag {
    BlueVictory,
    RedVictory,
    /// Converged to one of the unstable stalemates: the cell sits on the
    /// basin boundary itself.
    OnBoundary,
    /// Horizon reached (or the solver gave up); not guessed.
    Inconclusive,
    /// The coordinates do not form a valid state on this slice.
    OutOfDomain,
}

impl BasinTag {
    pub fn tag(&self) -> &'static str {
        match self {
            BasinTag::BlueVictory => "blue",
            BasinTag::RedVictory => "red",
            BasinTag::OnBoundary => "boundary",
            BasinTag::Inconclusive => "inconclusive",
            BasinTag::OutOfDomain => "out-of-domain",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasinCell {
    pub x: f64,
    pub y: f64,
    pub tag: BasinTag,
}

/// One separatrix point located by bisection along a grid row: the basin
/// boundary crosses `[lo, hi]` (width below the bracket tolerance) at height
/// `y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeparatrixSample {
    pub x: f64,
    pub y: f64,
    pub lo: f64,
    pub hi: f64,
}

/// Width below which a separatrix bracket is accepted.
pub const SEPARATRIX_BRACKET_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct BasinMap {
    pub spec: BasinSpec,
    /// Row-major (`y` outer, `x` inner).
    pub cells: Vec<BasinCell>,
    pub separatrix: Vec<SeparatrixSample>,
    /// Brackets abandoned because a probe was inconclusive.
    pub unresolved_brackets: usize,
}

/// Maps the basins of attraction of the two victory equilibria over a slice
/// of initial conditions, then locates the separatrix along each grid row by
/// bisection.
pub fn basin_map(
    rates: &RateParams,
    op: &OpportunisticParams,
    spec: &BasinSpec,
    cfg: &IntegratorConfig,
) -> Result<BasinMap> {
    spec.validate()?;
    cfg.validate()?;
    let cfg = cfg.sparse();
    let model = Model::Opportunistic {
        rates: *rates,
        switching: *op,
    };

    let probe = |x: f64, y: f64| -> BasinTag {
        let Ok(state) = spec.state_at(x, y) else {
            return BasinTag::OutOfDomain;
        };
        match integrate(&model, &state.into(), &cfg) {
            Err(_) => BasinTag::Inconclusive,
            Ok(traj) => match traj.terminal {
                Terminal::HorizonReached => BasinTag::Inconclusive,
                Terminal::ConvergedToEquilibrium(kind) => match kind {
                    crate::equilibria::EquilibriumKind::BlueVictory => BasinTag::BlueVictory,
                    crate::equilibria::EquilibriumKind::RedVictory => BasinTag::RedVictory,
                    _ => BasinTag::OnBoundary,
                },
            },
        }
    };

    let xs = BasinSpec::axis_values(&spec.x);
    let ys = BasinSpec::axis_values(&spec.y);

    let cells: Vec<BasinCell> = ys
        .par_iter()
        .flat_map_iter(|&y| xs.iter().map(move |&x| (x, y)))
        .map(|(x, y)| BasinCell {
            x,
            y,
            tag: probe(x, y),
        })
        .collect();

    // Bisect between adjacent cells of a row that reach different victories.
    // A cell that converges to a saddle needs no bisection: it sits on the
    // separatrix itself and is recorded as a zero-width bracket.
    let row_results: Vec<(Vec<SeparatrixSample>, usize)> = ys
        .par_iter()
        .enumerate()
        .map(|(iy, &y)| {
            let mut samples = Vec::new();
            let mut unresolved = 0usize;
            let row = &cells[iy * xs.len()..(iy + 1) * xs.len()];
            for cell in row {
                if cell.tag == BasinTag::OnBoundary {
                    samples.push(SeparatrixSample {
                        x: cell.x,
                        y,
                        lo: cell.x,
                        hi: cell.x,
                    });
                }
            }
            for w in row.windows(2) {
                let (left, right) = (w[0], w[1]);
                let victory_pair = matches!(
                    (left.tag, right.tag),
                    (BasinTag::BlueVictory, BasinTag::RedVictory)
                        | (BasinTag::RedVictory, BasinTag::BlueVictory)
                );
                if !victory_pair {
                    continue;
                }
                let mut lo = left.x;
                let mut hi = right.x;
                let lo_tag = left.tag;
                let mut resolved = true;
                let mut on_boundary = None;
                while hi - lo > SEPARATRIX_BRACKET_TOL {
                    let mid = 0.5 * (lo + hi);
                    match probe(mid, y) {
                        BasinTag::OnBoundary => {
                            // Landed on the separatrix itself.
                            on_boundary = Some(mid);
                            break;
                        }
                        tag if tag == lo_tag => lo = mid,
                        BasinTag::BlueVictory | BasinTag::RedVictory => hi = mid,
                        _ => {
                            resolved = false;
                            break;
                        }
                    }
                }
                if let Some(mid) = on_boundary {
                    samples.push(SeparatrixSample {
                        x: mid,
                        y,
                        lo: mid,
                        hi: mid,
                    });
                } else if resolved {
                    samples.push(SeparatrixSample {
                        x: 0.5 * (lo + hi),
                        y,
                        lo,
                        hi,
                    });
                } else {
                    unresolved += 1;
                }
            }
            (samples, unresolved)
        })
        .collect();

    let mut separatrix = Vec::new();
    let mut unresolved_brackets = 0;
    for (samples, unresolved) in row_results {
        separatrix.extend(samples);
        unresolved_brackets += unresolved;
    }

    Ok(BasinMap {
        spec: *spec,
        cells,
        separatrix,
        unresolved_brackets,
    })
}

// ---------------------------------------------------------------------------
// Conjecture harness.
// ---------------------------------------------------------------------------

/// Sampling ranges for [`conjecture_sweep`]. Rates are drawn log-uniformly
/// (they are ratio-scaled quantities) and re-drawn until dominant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConjectureRanges {
    /// Log10 bounds for each of the four rates.
    pub rate_log10: (f64, f64),
    /// Uniform bounds for the split `S`.
    pub s_range: (f64, f64),
    /// Intervention powers are uniform on `[0, lambda_max]`.
    pub lambda_max: f64,
    /// Probability that each power is forced to exactly zero, exercising the
    /// reductions to the basic model.
    pub zero_lambda_prob: f64,
}

impl Default for ConjectureRanges {
    fn default() -> Self {
        Self {
            rate_log10: (-1.0, 1.0),
            s_range: (0.05, 0.95),
            lambda_max: 2.0,
            zero_lambda_prob: 0.1,
        }
    }
}

/// One fully reproducible draw together with its conjecture verdicts.
#[derive(Debug, Clone, PartialEq)]
pub struct ConjectureCase {
    pub index: usize,
    pub s: f64,
    pub f_s: f64,
    pub h_s: f64,
    pub f_c: f64,
    pub h_c: f64,
    pub lambda_s: f64,
    pub lambda_c: f64,
    pub check: ConjectureCheck,
}

/// Aggregate result of the Monte Carlo conjecture probe.
#[derive(Debug, Clone, PartialEq)]
pub struct ConjectureReport {
    pub n_samples: usize,
    pub seed: u64,
    pub ranges: ConjectureRanges,
    /// Draws where the analytic condition and the eigenvalue verdict agree.
    pub agreements: usize,
    /// Draws too close to a boundary to call either way.
    pub marginal: usize,
    /// Draws whose parameters fall in a victory regime with no stalemate
    /// point to examine.
    pub skipped_region: usize,
    /// Every disagreement, with full parameters for reproduction. Any entry
    /// here is a counterexample to the conjecture.
    pub disagreements: Vec<ConjectureCase>,
}

impl ConjectureReport {
    pub fn all_agree(&self) -> bool {
        self.disagreements.is_empty()
    }
}

/// Draws `n_samples` dominant parameter sets and compares the conjectured
/// stability condition against the eigenvalues of the intervention stalemate.
/// Deterministic for a fixed seed.
pub fn conjecture_sweep(
    n_samples: usize,
    ranges: &ConjectureRanges,
    seed: u64,
) -> ConjectureReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = ConjectureReport {
        n_samples,
        seed,
        ranges: *ranges,
        agreements: 0,
        marginal: 0,
        skipped_region: 0,
        disagreements: Vec::new(),
    };

    let (lo, hi) = ranges.rate_log10;
    let draw_rate = |rng: &mut ChaCha8Rng| 10f64.powf(rng.gen_range(lo..hi));

    for index in 0..n_samples {
        let rates = loop {
            let candidate = RateParams::new(
                draw_rate(&mut rng),
                draw_rate(&mut rng),
                draw_rate(&mut rng),
                draw_rate(&mut rng),
            )
            .expect("positive by construction");
            if candidate.dominant() {
                break candidate;
            }
        };
        let s = rng.gen_range(ranges.s_range.0..ranges.s_range.1);
        let split = PopulationSplit::new(s).expect("in range");
        let draw_lambda = |rng: &mut ChaCha8Rng| {
            if rng.gen::<f64>() < ranges.zero_lambda_prob {
                0.0
            } else {
                rng.gen_range(0.0..ranges.lambda_max)
            }
        };
        let lambda_s = draw_lambda(&mut rng);
        let lambda_c = draw_lambda(&mut rng);
        let iv = DirectIntervention::new(lambda_s, lambda_c).expect("non-negative");

        match check_conjecture(&split, &rates, &iv) {
            Err(_) => report.skipped_region += 1,
            Ok(check) => {
                if check.marginal {
                    report.marginal += 1;
                } else if check.agrees {
                    report.agreements += 1;
                } else {
                    report.disagreements.push(ConjectureCase {
                        index,
                        s,
                        f_s: rates.f_s(),
                        h_s: rates.h_s(),
                        f_c: rates.f_c(),
                        h_c: rates.h_c(),
                        lambda_s,
                        lambda_c,
                        check,
                    });
                }
            }
        }
    }
    report
}
