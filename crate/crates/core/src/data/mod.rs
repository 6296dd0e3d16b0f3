//! Dataset ingestion, synthetic generators and dataset statistics.

mod csv_io;
mod datasets;
mod generate;
mod stats;

pub use csv_io::{format_sig, load_rating_csv, read_rating_csv, write_graph_csv, write_scores_csv};
pub use datasets::{data_dir_from_env, Dataset, DatasetProfile, DATA_DIR_ENV};
pub use generate::{
    complete_positive, generate, generate_gadget, generate_min_k_neighbour, random_erdos,
    stabilised_star, GeneratorKind, GeneratorSpec,
};
pub use stats::{
    compute_stats, fair_fraction_at, goodness_fraction_ge, goodness_fraction_le, DatasetStats,
    StatsThresholds,
};
