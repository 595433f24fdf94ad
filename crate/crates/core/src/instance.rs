use crate::beta::{build_automaton, BetaSystem, LanguageAutomaton};
use crate::error::Result;
use crate::measures::{measure_pair, parry_measure, pushforward_mu, MeasurePair, ParryMeasure, PushforwardMeasure};
use crate::specification::{build_gluing_table, GluingTable};

/// Everything derived once from a system: automaton, gluing table, `nu`,
/// `mu` and the tracked digit pair.
#[derive(Debug, Clone)]
pub struct Instance {
    pub system: BetaSystem,
    pub automaton: LanguageAutomaton,
    pub table: GluingTable,
    pub nu: ParryMeasure,
    pub mu: PushforwardMeasure,
    pub pair: MeasurePair,
}

impl Instance {
    pub fn new(system: BetaSystem) -> Result<Self> {
        let automaton = build_automaton(&system)?;
        automaton.validate()?;
        let table = build_gluing_table(&automaton)?;
        let nu = parry_measure(&system)?;
        let mu = pushforward_mu(&nu)?;
        let pair = measure_pair(&nu, &mu)?;
        Ok(Self { system, automaton, table, nu, mu, pair })
    }

    /// Entropy of `nu`, which is `log beta`.
    pub fn entropy(&self) -> f64 {
        self.system.entropy()
    }

    /// `max(C, 1)`.
    pub fn glue_cost(&self) -> usize {
        self.table.constant().max(1)
    }
}
