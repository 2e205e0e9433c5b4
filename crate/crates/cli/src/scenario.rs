//! Scenario files: one JSON document per run, naming the command, the
//! symbol/potential pair and the numeric parameters. A scenario resolves to
//! itself with every default filled in, and the resolved form is embedded in
//! every report, so a report always reproduces its run.

use serde::{Deserialize, Serialize};
use specgap_core::model::{PotentialSpec, SymbolSpec};
use specgap_core::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    Spectrum,
    BsRoot,
    WeakCoupling,
    Quadform,
    Shoot,
    ConstructWell,
    ConstructEssSpec,
    ConstructSpots,
    ConstructSparse,
    Diagnostics,
    SpecfunTable,
}

impl CommandKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            CommandKind::Spectrum => "spectrum",
            CommandKind::BsRoot => "bs-root",
            CommandKind::WeakCoupling => "weak-coupling",
            CommandKind::Quadform => "quadform",
            CommandKind::Shoot => "shoot",
            CommandKind::ConstructWell => "construct-well",
            CommandKind::ConstructEssSpec => "construct-ess-spec",
            CommandKind::ConstructSpots => "construct-spots",
            CommandKind::ConstructSparse => "construct-sparse",
            CommandKind::Diagnostics => "diagnostics",
            CommandKind::SpecfunTable => "specfun-table",
        }
    }
}

/// Numeric parameters; anything absent takes the command's default during
/// `resolve`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma_sweep: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid_half_width: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid_points: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    /// construct-well: target eigenvalue λ < 0 and radius δ.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    /// construct-ess-spec: L¹ budget, λ-window and range end.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_window: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_max: Option<u32>,
    /// construct-sparse: starting index and truncation.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n0: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_terms: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub betas: Option<Vec<f64>>,
    /// shoot: integration horizon and trace samples.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    /// spots / sparse: ambient dimension (>= 3).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dimension: Option<usize>,
    /// specfun-table: argument range and step.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table_step: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub command: CommandKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub symbol: Option<SymbolSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub potential: Option<PotentialSpec>,
    #[serde(default)]
    pub params: Params,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<OutputFormat>,
}

impl Scenario {
    pub fn from_path(path: &std::path::Path) -> Result<Self, Error> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            Error::invalid(vec![format!("cannot read scenario {}: {e}", path.display())])
        })?;
        let scenario: Scenario = serde_json::from_str(&text)
            .map_err(|e| Error::invalid(vec![format!("scenario parse error: {e}")]))?;
        scenario.validate()?;
        Ok(scenario)
    }

    /// Collects every violated constraint rather than stopping at the first.
    pub fn validate(&self) -> Result<(), Error> {
        let mut violations = Vec::new();
        if let Some(sym) = &self.symbol {
            if let Err(Error::InvalidSpec { violations: v }) = sym.validate() {
                violations.extend(v.into_iter().map(|m| format!("symbol: {m}")));
            }
        }
        if let Some(pot) = &self.potential {
            if let Err(Error::InvalidSpec { violations: v }) = pot.validate() {
                violations.extend(v.into_iter().map(|m| format!("potential: {m}")));
            }
        }
        if let (Some(sym), Some(pot)) = (&self.symbol, &self.potential) {
            if sym.dimension != pot.dimension {
                violations.push(format!(
                    "symbol dimension {} does not match potential dimension {}",
                    sym.dimension, pot.dimension
                ));
            }
        }
        let needs_pair = matches!(
            self.command,
            CommandKind::Spectrum | CommandKind::BsRoot | CommandKind::WeakCoupling | CommandKind::Quadform
        );
        if needs_pair {
            if self.symbol.is_none() {
                violations.push(format!("{} needs a symbol", self.command.as_str()));
            }
            if self.potential.is_none() {
                violations.push(format!("{} needs a potential", self.command.as_str()));
            }
        }
        if matches!(self.command, CommandKind::Shoot | CommandKind::Diagnostics)
            && self.potential.is_none()
        {
            violations.push(format!("{} needs a potential", self.command.as_str()));
        }
        if let Some(n) = self.params.grid_points {
            if !n.is_power_of_two() {
                violations.push(format!("grid points {n} must be a power of two"));
            }
        }
        if violations.is_empty() {
            Ok(())
        } else {
            Err(Error::invalid(violations))
        }
    }

    /// Fills defaults; the result embeds in reports and round-trips through
    /// serialization unchanged.
    pub fn resolve(mut self, cli_seed: Option<u64>, cli_format: Option<OutputFormat>) -> Scenario {
        let p = &mut self.params;
        p.sigma.get_or_insert(1.0);
        p.grid_half_width.get_or_insert(40.0);
        p.grid_points.get_or_insert(4096);
        p.count.get_or_insert(1);
        p.tolerance.get_or_insert(1e-8);
        match self.command {
            CommandKind::WeakCoupling => {
                p.sigma_sweep.get_or_insert_with(|| vec![0.5, 1.0, 2.0]);
            }
            CommandKind::ConstructWell => {
                p.lambda.get_or_insert(-1.0);
                p.delta.get_or_insert(1.0);
            }
            CommandKind::ConstructEssSpec => {
                p.epsilon.get_or_insert(0.1);
                p.lambda_window.get_or_insert(1.0);
                p.n_max.get_or_insert(18);
            }
            CommandKind::ConstructSpots => {
                p.dimension.get_or_insert(3);
            }
            CommandKind::ConstructSparse => {
                p.dimension.get_or_insert(3);
                p.n0.get_or_insert(8);
                p.n_terms.get_or_insert(60);
                p.betas.get_or_insert_with(|| vec![0.5, 1.0, 2.0]);
            }
            CommandKind::Shoot => {
                p.samples.get_or_insert(4096);
            }
            CommandKind::SpecfunTable => {
                p.table_max.get_or_insert(50.0);
                p.table_step.get_or_insert(0.5);
            }
            _ => {}
        }
        if self.command == CommandKind::Quadform || self.command == CommandKind::WeakCoupling {
            p.alpha.get_or_insert(match &self.symbol {
                Some(s) => match s.variant {
                    specgap_core::model::SymbolVariant::PowerLaw { alpha } => alpha,
                    _ => 2.0,
                },
                None => 2.0,
            });
        }
        self.seed = Some(cli_seed.or(self.seed).unwrap_or(42));
        self.format = Some(cli_format.or(self.format).unwrap_or(OutputFormat::Json));
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_spectrum_scenario_fills_defaults() {
        let json = r#"{
            "command": "spectrum",
            "symbol": {"dimension": 1, "variant": {"type": "power_law", "alpha": 2.0}},
            "potential": {"dimension": 1, "variant": {"type": "radial_well", "height": 1.0, "radius": 1.0}}
        }"#;
        let s: Scenario = serde_json::from_str(json).unwrap();
        s.validate().unwrap();
        let r = s.resolve(None, None);
        assert_eq!(r.params.grid_points, Some(4096));
        assert_eq!(r.params.sigma, Some(1.0));
        assert_eq!(r.seed, Some(42));
    }

    #[test]
    fn resolved_scenario_round_trips() {
        let json = r#"{
            "command": "bs-root",
            "symbol": {"dimension": 1, "variant": {"type": "power_law", "alpha": 2.0}},
            "potential": {"dimension": 1, "variant": {"type": "radial_well", "height": 1.0, "radius": 1.0}},
            "params": {"sigma": 2.0}
        }"#;
        let s: Scenario = serde_json::from_str(json).unwrap();
        let r = s.resolve(Some(7), None);
        let text = serde_json::to_string_pretty(&r).unwrap();
        let back: Scenario = serde_json::from_str(&text).unwrap();
        assert_eq!(r, back);
    }

    #[test]
    fn dimension_mismatch_names_both_fields() {
        let json = r#"{
            "command": "spectrum",
            "symbol": {"dimension": 2, "variant": {"type": "power_law", "alpha": 2.0}},
            "potential": {"dimension": 1, "variant": {"type": "radial_well", "height": 1.0, "radius": 1.0}}
        }"#;
        let s: Scenario = serde_json::from_str(json).unwrap();
        let err = s.validate().unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("symbol dimension 2"), "{msg}");
        assert!(msg.contains("potential dimension 1"), "{msg}");
    }

    #[test]
    fn unknown_command_lists_valid_ones() {
        let json = r#"{"command": "explode"}"#;
        let err = serde_json::from_str::<Scenario>(json).unwrap_err().to_string();
        assert!(err.contains("unknown variant"), "{err}");
        assert!(err.contains("spectrum"), "{err}");
    }
}
