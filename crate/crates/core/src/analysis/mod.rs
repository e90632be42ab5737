//! Human-rating ingestion and aggregation, rating-weighted target blending
//! and reconstruction metrics.

mod aggregate;
mod blend;
mod metrics;
mod ratings;

pub use aggregate::{aggregate, AggregateReport, AlgorithmStats, GroupStats, Level};
pub use blend::blend_targets;
pub use metrics::{
    compare_to_references, mel_l1, mse, reconstruction_metrics, stft_loss, MetricReport, ReferenceComparison, LOG_EPS,
    MEL_BANDS, MEL_FFT, MEL_HOP, STFT_SIZES,
};
pub use ratings::{load_ratings, load_ratings_with_map, ColumnMap, RatingRecord, RatingsTable, RATING_MAX, RATING_MIN};
