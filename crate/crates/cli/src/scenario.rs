//! The `.scn` scenario file format: a flat key-value format with sections
//! `[model]`, `[rates]`, `[intervention]`, `[opportunistic]`, `[init]`, and
//! `[integrator]`. Keys are the model's symbol names (`S`, `f_S`, `h_C`,
//! `lambda_C`, `mu_S`, `alpha`, `SB0`, ...). Parsing reports the line and key
//! of every problem; rendering and parsing round-trip exactly.

use revolt_core::{
    apply_indirect, DirectIntervention, IndirectIntervention, InitState, IntegratorConfig, Model,
    OpportunisticParams, OpportunisticState, PopulationSplit, RateParams, ReducedState,
};
use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioError {
    pub line: Option<usize>,
    pub message: String,
}

impl ScenarioError {
    fn at(line: usize, message: impl Into<String>) -> Self {
        Self {
            line: Some(line),
            message: message.into(),
        }
    }

    fn general(message: impl Into<String>) -> Self {
        Self {
            line: None,
            message: message.into(),
        }
    }
}

impl fmt::Display for ScenarioError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "line {line}: {}", self.message),
            None => write!(f, "{}", self.message),
        }
    }
}

impl std::error::Error for ScenarioError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    Basic,
    Direct,
    Indirect,
    Opportunistic,
}

impl Variant {
    pub fn name(&self) -> &'static str {
        match self {
            Variant::Basic => "basic",
            Variant::Direct => "direct",
            Variant::Indirect => "indirect",
            Variant::Opportunistic => "opportunistic",
        }
    }
}

/// Initial condition as written in a scenario; `s0` only for the
/// opportunistic variant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitSpec {
    pub sb0: f64,
    pub cr0: f64,
    pub s0: Option<f64>,
}

/// Partial overrides of [`IntegratorConfig`].
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct IntegratorOverrides {
    pub rel_tol: Option<f64>,
    pub abs_tol: Option<f64>,
    pub t_max: Option<f64>,
    pub convergence_eps: Option<f64>,
    pub record_stride: Option<usize>,
}

impl IntegratorOverrides {
    pub fn is_empty(&self) -> bool {
        *self == Self::default()
    }
}

/// A validated scenario: model variant, parameters, and optional initial
/// state and integrator overrides.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub variant: Variant,
    /// Present for every variant except opportunistic, where the supporter
    /// fraction is dynamic and its start value lives in `[init]` as `S0`.
    pub split: Option<PopulationSplit>,
    pub rates: RateParams,
    pub direct: Option<DirectIntervention>,
    pub indirect: Option<IndirectIntervention>,
    pub opportunistic: Option<OpportunisticParams>,
    pub init: Option<InitSpec>,
    pub integrator: IntegratorOverrides,
}

impl Scenario {
    /// The core model this scenario describes. Indirect intervention is a
    /// rate transformation, so it maps onto the basic model with multiplied
    /// rates.
    pub fn model(&self) -> Model {
        match self.variant {
            Variant::Basic => Model::Basic {
                split: self.split.expect("validated: basic has a split"),
                rates: self.rates,
            },
            Variant::Direct => Model::Direct {
                split: self.split.expect("validated: direct has a split"),
                rates: self.rates,
                intervention: self.direct.unwrap_or_else(DirectIntervention::none),
            },
            Variant::Indirect => Model::Basic {
                split: self.split.expect("validated: indirect has a split"),
                rates: self.effective_rates(),
            },
            Variant::Opportunistic => Model::Opportunistic {
                rates: self.rates,
                switching: self.opportunistic.expect("validated: alpha present"),
            },
        }
    }

    /// Rates after applying any indirect-intervention multipliers.
    pub fn effective_rates(&self) -> RateParams {
        match self.indirect {
            Some(iv) => apply_indirect(&self.rates, &iv),
            None => self.rates,
        }
    }

    /// The scenario's initial state, or the model default when none is given.
    pub fn initial_state(&self) -> Result<InitState, ScenarioError> {
        let model = self.model();
        match &self.init {
            None => Ok(model.default_init()),
            Some(init) => match &model {
                Model::Opportunistic { .. } => {
                    let s0 = init.s0.expect("validated: opportunistic init has S0");
                    OpportunisticState::new(init.sb0, init.cr0, s0)
                        .map(InitState::from)
                        .map_err(|e| ScenarioError::general(format!("[init]: {e}")))
                }
                Model::Basic { split, .. } | Model::Direct { split, .. } => {
                    ReducedState::new(init.sb0, init.cr0, split)
                        .map(InitState::from)
                        .map_err(|e| ScenarioError::general(format!("[init]: {e}")))
                }
            },
        }
    }

    /// Default integrator configuration with this scenario's overrides.
    pub fn integrator_config(&self) -> IntegratorConfig {
        let mut cfg = IntegratorConfig::default();
        let o = &self.integrator;
        if let Some(v) = o.rel_tol {
            cfg.rel_tol = v;
        }
        if let Some(v) = o.abs_tol {
            cfg.abs_tol = v;
        }
        if let Some(v) = o.t_max {
            cfg.t_max = v;
        }
        if let Some(v) = o.convergence_eps {
            cfg.convergence_eps = v;
        }
        if let Some(v) = o.record_stride {
            cfg.record_stride = v;
        }
        cfg
    }

    /// Renders the scenario in the `.scn` format; `parse_scenario` returns an
    /// equal value.
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str("[model]\n");
        out.push_str(&format!("name = {}\n", self.name));
        out.push_str(&format!("variant = {}\n", self.variant.name()));
        if let Some(split) = &self.split {
            out.push_str(&format!("S = {}\n", split.s()));
        }
        out.push_str("\n[rates]\n");
        out.push_str(&format!("f_S = {}\n", self.rates.f_s()));
        out.push_str(&format!("h_S = {}\n", self.rates.h_s()));
        out.push_str(&format!("f_C = {}\n", self.rates.f_c()));
        out.push_str(&format!("h_C = {}\n", self.rates.h_c()));
        if let Some(iv) = &self.direct {
            out.push_str("\n[intervention]\n");
            out.push_str(&format!("lambda_S = {}\n", iv.lambda_s()));
            out.push_str(&format!("lambda_C = {}\n", iv.lambda_c()));
        }
        if let Some(iv) = &self.indirect {
            out.push_str("\n[intervention]\n");
            out.push_str(&format!("mu_S = {}\n", iv.mu_s()));
            out.push_str(&format!("mu_C = {}\n", iv.mu_c()));
        }
        if let Some(op) = &self.opportunistic {
            out.push_str("\n[opportunistic]\n");
            out.push_str(&format!("alpha = {}\n", op.alpha()));
        }
        if let Some(init) = &self.init {
            out.push_str("\n[init]\n");
            out.push_str(&format!("SB0 = {}\n", init.sb0));
            out.push_str(&format!("CR0 = {}\n", init.cr0));
            if let Some(s0) = init.s0 {
                out.push_str(&format!("S0 = {s0}\n"));
            }
        }
        if !self.integrator.is_empty() {
            out.push_str("\n[integrator]\n");
            let o = &self.integrator;
            if let Some(v) = o.rel_tol {
                out.push_str(&format!("rel_tol = {v}\n"));
            }
            if let Some(v) = o.abs_tol {
                out.push_str(&format!("abs_tol = {v}\n"));
            }
            if let Some(v) = o.t_max {
                out.push_str(&format!("t_max = {v}\n"));
            }
            if let Some(v) = o.convergence_eps {
                out.push_str(&format!("convergence_eps = {v}\n"));
            }
            if let Some(v) = o.record_stride {
                out.push_str(&format!("record_stride = {v}\n"));
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Section {
    Model,
    Rates,
    Intervention,
    Opportunistic,
    Init,
    Integrator,
}

impl Section {
    fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "model" => Section::Model,
            "rates" => Section::Rates,
            "intervention" => Section::Intervention,
            "opportunistic" => Section::Opportunistic,
            "init" => Section::Init,
            "integrator" => Section::Integrator,
            _ => return None,
        })
    }
}

#[derive(Default)]
struct Raw {
    name: Option<String>,
    variant: Option<Variant>,
    s: Option<f64>,
    f_s: Option<f64>,
    h_s: Option<f64>,
    f_c: Option<f64>,
    h_c: Option<f64>,
    saw_intervention: bool,
    lambda_s: Option<f64>,
    lambda_c: Option<f64>,
    mu_s: Option<f64>,
    mu_c: Option<f64>,
    alpha: Option<f64>,
    sb0: Option<f64>,
    cr0: Option<f64>,
    s0: Option<f64>,
    integrator: IntegratorOverrides,
}

fn parse_number(line: usize, key: &str, value: &str) -> Result<f64, ScenarioError> {
    value
        .parse::<f64>()
        .map_err(|_| ScenarioError::at(line, format!("key {key}: `{value}` is not a number")))
}

fn set<T>(slot: &mut Option<T>, value: T, line: usize, key: &str) -> Result<(), ScenarioError> {
    if slot.is_some() {
        return Err(ScenarioError::at(line, format!("duplicate key {key}")));
    }
    *slot = Some(value);
    Ok(())
}

/// Parses and validates a scenario file.
pub fn parse_scenario(text: &str) -> Result<Scenario, ScenarioError> {
    let mut raw = Raw::default();
    let mut section: Option<Section> = None;

    for (idx, line_text) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = line_text.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if let Some(inner) = trimmed.strip_prefix('[') {
            let Some(name) = inner.strip_suffix(']') else {
                return Err(ScenarioError::at(line, "unterminated section header"));
            };
            let Some(sec) = Section::from_name(name) else {
                return Err(ScenarioError::at(line, format!("unknown section [{name}]")));
            };
            if sec == Section::Intervention {
                raw.saw_intervention = true;
            }
            section = Some(sec);
            continue;
        }
        let Some((key, value)) = trimmed.split_once('=') else {
            return Err(ScenarioError::at(line, "expected `key = value`"));
        };
        let key = key.trim();
        let value = value.trim();
        let Some(sec) = section else {
            return Err(ScenarioError::at(
                line,
                format!("key {key} appears before any section"),
            ));
        };

        match (sec, key) {
            (Section::Model, "name") => set(&mut raw.name, value.to_string(), line, key)?,
            (Section::Model, "variant") => {
                let v = match value {
                    "basic" => Variant::Basic,
                    "direct" => Variant::Direct,
                    "indirect" => Variant::Indirect,
                    "opportunistic" => Variant::Opportunistic,
                    _ => {
                        return Err(ScenarioError::at(
                            line,
                            format!(
                                "variant `{value}` is not one of basic, direct, indirect, \
                                 opportunistic"
                            ),
                        ))
                    }
                };
                set(&mut raw.variant, v, line, key)?;
            }
            (Section::Model, "S") => {
                let v = parse_number(line, key, value)?;
                PopulationSplit::new(v)
                    .map_err(|e| ScenarioError::at(line, format!("key S: {e}")))?;
                set(&mut raw.s, v, line, key)?;
            }
            (Section::Rates, "f_S") => {
                set(&mut raw.f_s, parse_number(line, key, value)?, line, key)?
            }
            (Section::Rates, "h_S") => {
                set(&mut raw.h_s, parse_number(line, key, value)?, line, key)?
            }
            (Section::Rates, "f_C") => {
                set(&mut raw.f_c, parse_number(line, key, value)?, line, key)?
            }
            (Section::Rates, "h_C") => {
                set(&mut raw.h_c, parse_number(line, key, value)?, line, key)?
            }
            (Section::Intervention, "lambda_S") => set(
                &mut raw.lambda_s,
                parse_number(line, key, value)?,
                line,
                key,
            )?,
            (Section::Intervention, "lambda_C") => set(
                &mut raw.lambda_c,
                parse_number(line, key, value)?,
                line,
                key,
            )?,
            (Section::Intervention, "mu_S") => {
                set(&mut raw.mu_s, parse_number(line, key, value)?, line, key)?
            }
            (Section::Intervention, "mu_C") => {
                set(&mut raw.mu_c, parse_number(line, key, value)?, line, key)?
            }
            (Section::Opportunistic, "alpha") => {
                set(&mut raw.alpha, parse_number(line, key, value)?, line, key)?
            }
            (Section::Init, "SB0") => {
                set(&mut raw.sb0, parse_number(line, key, value)?, line, key)?
            }
            (Section::Init, "CR0") => {
                set(&mut raw.cr0, parse_number(line, key, value)?, line, key)?
            }
            (Section::Init, "S0") => set(&mut raw.s0, parse_number(line, key, value)?, line, key)?,
            (Section::Integrator, "rel_tol") => set(
                &mut raw.integrator.rel_tol,
                parse_number(line, key, value)?,
                line,
                key,
            )?,
            (Section::Integrator, "abs_tol") => set(
                &mut raw.integrator.abs_tol,
                parse_number(line, key, value)?,
                line,
                key,
            )?,
            (Section::Integrator, "t_max") => set(
                &mut raw.integrator.t_max,
                parse_number(line, key, value)?,
                line,
                key,
            )?,
            (Section::Integrator, "convergence_eps") => set(
                &mut raw.integrator.convergence_eps,
                parse_number(line, key, value)?,
                line,
                key,
            )?,
            (Section::Integrator, "record_stride") => {
                let v = value.parse::<usize>().map_err(|_| {
                    ScenarioError::at(line, format!("key record_stride: `{value}` is not a count"))
                })?;
                set(&mut raw.integrator.record_stride, v, line, key)?;
            }
            (sec, key) => {
                let sec_name = match sec {
                    Section::Model => "model",
                    Section::Rates => "rates",
                    Section::Intervention => "intervention",
                    Section::Opportunistic => "opportunistic",
                    Section::Init => "init",
                    Section::Integrator => "integrator",
                };
                return Err(ScenarioError::at(
                    line,
                    format!("unknown key {key} in [{sec_name}]"),
                ));
            }
        }
    }

    assemble(raw)
}

fn assemble(raw: Raw) -> Result<Scenario, ScenarioError> {
    let name = raw
        .name
        .ok_or_else(|| ScenarioError::general("missing key name in [model]"))?;
    let variant = raw
        .variant
        .ok_or_else(|| ScenarioError::general("missing key variant in [model]"))?;

    let rates = match (raw.f_s, raw.h_s, raw.f_c, raw.h_c) {
        (Some(f_s), Some(h_s), Some(f_c), Some(h_c)) => RateParams::new(f_s, h_s, f_c, h_c)
            .map_err(|e| ScenarioError::general(format!("[rates]: {e}")))?,
        _ => {
            return Err(ScenarioError::general(
                "section [rates] must set all of f_S, h_S, f_C, h_C",
            ))
        }
    };

    let split = match (variant, raw.s) {
        (Variant::Opportunistic, Some(_)) => {
            return Err(ScenarioError::general(
                "key S is not valid for the opportunistic variant; set S0 under [init]",
            ))
        }
        (Variant::Opportunistic, None) => None,
        (_, Some(s)) => Some(PopulationSplit::new(s).expect("range-checked at parse")),
        (_, None) => {
            return Err(ScenarioError::general(
                "missing key S in [model] (required for this variant)",
            ))
        }
    };

    let mut direct = None;
    let mut indirect = None;
    match variant {
        Variant::Direct => {
            if !raw.saw_intervention {
                return Err(ScenarioError::general(
                    "variant direct requires an [intervention] section",
                ));
            }
            if raw.mu_s.is_some() || raw.mu_c.is_some() {
                return Err(ScenarioError::general(
                    "keys mu_S/mu_C belong to the indirect variant",
                ));
            }
            direct = Some(
                DirectIntervention::new(raw.lambda_s.unwrap_or(0.0), raw.lambda_c.unwrap_or(0.0))
                    .map_err(|e| ScenarioError::general(format!("[intervention]: {e}")))?,
            );
        }
        Variant::Indirect => {
            if !raw.saw_intervention {
                return Err(ScenarioError::general(
                    "variant indirect requires an [intervention] section",
                ));
            }
            if raw.lambda_s.is_some() || raw.lambda_c.is_some() {
                return Err(ScenarioError::general(
                    "keys lambda_S/lambda_C belong to the direct variant",
                ));
            }
            indirect = Some(
                IndirectIntervention::new(raw.mu_s.unwrap_or(1.0), raw.mu_c.unwrap_or(1.0))
                    .map_err(|e| ScenarioError::general(format!("[intervention]: {e}")))?,
            );
        }
        Variant::Basic | Variant::Opportunistic => {
            if raw.saw_intervention {
                return Err(ScenarioError::general(format!(
                    "variant {} does not take an [intervention] section",
                    variant.name()
                )));
            }
        }
    }

    let opportunistic = match (variant, raw.alpha) {
        (Variant::Opportunistic, Some(alpha)) => Some(
            OpportunisticParams::new(alpha)
                .map_err(|e| ScenarioError::general(format!("[opportunistic]: {e}")))?,
        ),
        (Variant::Opportunistic, None) => {
            return Err(ScenarioError::general(
                "variant opportunistic requires alpha in [opportunistic]",
            ))
        }
        (_, Some(_)) => {
            return Err(ScenarioError::general(format!(
                "variant {} does not take an [opportunistic] section",
                variant.name()
            )))
        }
        (_, None) => None,
    };

    let init = match (raw.sb0, raw.cr0) {
        (None, None) => {
            if raw.s0.is_some() {
                return Err(ScenarioError::general(
                    "key S0 requires SB0 and CR0 alongside it",
                ));
            }
            None
        }
        (Some(sb0), Some(cr0)) => {
            let s0 = match (variant, raw.s0) {
                (Variant::Opportunistic, Some(s0)) => Some(s0),
                (Variant::Opportunistic, None) => {
                    return Err(ScenarioError::general(
                        "opportunistic [init] must set S0 as well",
                    ))
                }
                (_, Some(_)) => {
                    return Err(ScenarioError::general(
                        "key S0 is only valid for the opportunistic variant",
                    ))
                }
                (_, None) => None,
            };
            Some(InitSpec { sb0, cr0, s0 })
        }
        _ => {
            return Err(ScenarioError::general(
                "section [init] must set both SB0 and CR0",
            ))
        }
    };

    let scenario = Scenario {
        name,
        variant,
        split,
        rates,
        direct,
        indirect,
        opportunistic,
        init,
        integrator: raw.integrator,
    };

    // An explicit initial state must satisfy the variant's invariants.
    scenario.initial_state()?;
    scenario
        .integrator_config()
        .validate()
        .map_err(|e| ScenarioError::general(format!("[integrator]: {e}")))?;
    Ok(scenario)
}
