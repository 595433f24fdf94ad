//! Beta-expansions, the expansion of 1, Parry's admissibility criterion and
//! the follower automaton of the beta-shift.

mod admissible;
mod automaton;
mod expansion;
mod field;
mod system;

pub use admissible::is_admissible;
pub use automaton::{build_automaton, LanguageAutomaton, Profile, State, StateSet, MAX_STATES};
pub use expansion::{beta_expand, evaluate_digits, parse_rational};
pub use field::{rational_to_f64, FieldElem, NumberField};
pub use system::{BetaSystem, ExpansionOfOne, SystemDescriptor, DEFAULT_MAX_LEN};
