//! Words over a finite alphabet, the shift map, empirical measures and the
//! truncated weak-star metric.

mod empirical;
mod metric;
mod word;

pub use empirical::{empirical, EmpiricalMeasure};
pub use metric::{measure_distance, measure_distance_exact, CylinderMeasure, DEFAULT_NORM_DEPTH};
pub use word::{all_words, shift, Alphabet, AllWords, Letter, Word};
