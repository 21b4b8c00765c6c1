//! Dataset handling: CSV records, splits, summary statistics, importance
//! weights, accuracy metrics, parameter sweeps and hyperparameter search.

mod dataset;
mod heatmap;
mod kde;
mod metrics;
mod search;
mod split;
mod stats;

pub use dataset::{load_dataset, save_dataset, Dataset, FeatureSpec, Field, LabelMode, Provenance, SampleRecord};
pub use heatmap::{heatmap_grid, Heatmap};
pub use kde::{dataset_importance_weights, kde_importance_weights, scott_bandwidth, WEIGHT_CLIP};
pub use metrics::{absolute_error_stats, evaluate, evaluate_weighted, mape_percent, predict_dataset, Evaluation};
pub use search::{random_search, search_csv, SearchSpace, Trial};
pub use split::{split, split_indices};
pub use stats::{
    correlation_csv, correlation_matrix, correlation_of, percentile_sorted, stats_summary, summarize, summary_csv,
    ColumnSummary, PERCENTILES,
};
