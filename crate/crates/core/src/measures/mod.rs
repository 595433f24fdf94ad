//! The Parry measure, its pushforward, entropy, the information function and
//! generic words.

mod bernoulli;
mod entropy;
mod generic;
mod information;
mod parry;
mod pushforward;

pub use bernoulli::BernoulliMeasure;
pub use entropy::{entropy, topological_entropy};
pub(crate) use entropy::log_biguint;
pub use generic::{balanced_word, generic_word_mu, generic_word_nu, FixedWord};
pub use information::{information_function, InformationFunction};
pub use parry::{parry_measure, ParryMeasure};
pub use pushforward::{measure_pair, pushforward_mu, MeasurePair, PushforwardMeasure};
