//! The three public rating networks and their published reference values.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::wsn::{RatingScale, Wsn};

pub const DATA_DIR_ENV: &str = "FGA_DATA_DIR";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Dataset {
    BitcoinOtc,
    BitcoinAlpha,
    /// Wikipedia requests-for-adminship votes, pre-converted to
    /// `source,target,vote[,timestamp]` with votes in {-1, 0, 1}.
    RfaNet,
}

/// Reference values for a dataset: counts, positive share, and the
/// target-search parameters used by the scaled indirect campaign.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DatasetProfile {
    pub nodes: usize,
    pub edges: usize,
    pub positive_edge_fraction: f64,
    pub target_max_indeg: usize,
    pub target_min_goodness: f64,
    pub scaled_samples: usize,
    pub scaled_attackers: usize,
    /// Smallest per-k sample count used for direct/indirect campaigns.
    pub campaign_samples: usize,
    /// Smallest per-cell sample count used for mixed campaigns.
    pub mixed_samples: usize,
}

impl Dataset {
    pub const ALL: [Dataset; 3] = [Dataset::BitcoinOtc, Dataset::BitcoinAlpha, Dataset::RfaNet];

    pub fn file_name(self) -> &'static str {
        match self {
            Dataset::BitcoinOtc => "soc-sign-bitcoinotc.csv",
            Dataset::BitcoinAlpha => "soc-sign-bitcoinalpha.csv",
            Dataset::RfaNet => "rfa-net.csv",
        }
    }

    pub fn scale(self) -> RatingScale {
        match self {
            Dataset::BitcoinOtc | Dataset::BitcoinAlpha => {
                RatingScale::new(10.0).expect("positive scale")
            }
            Dataset::RfaNet => RatingScale::UNIT,
        }
    }

    pub fn profile(self) -> DatasetProfile {
        match self {
            Dataset::BitcoinOtc => DatasetProfile {
                nodes: 5881,
                edges: 35592,
                positive_edge_fraction: 0.8990,
                target_max_indeg: 10,
                target_min_goodness: 0.8,
                scaled_samples: 20,
                scaled_attackers: 20,
                campaign_samples: 21,
                mixed_samples: 26,
            },
            Dataset::BitcoinAlpha => DatasetProfile {
                nodes: 3783,
                edges: 24186,
                positive_edge_fraction: 0.9364,
                target_max_indeg: 13,
                target_min_goodness: 0.5,
                scaled_samples: 30,
                scaled_attackers: 20,
                campaign_samples: 24,
                mixed_samples: 12,
            },
            Dataset::RfaNet => DatasetProfile {
                nodes: 9654,
                edges: 104554,
                positive_edge_fraction: 0.84,
                target_max_indeg: 10,
                target_min_goodness: 0.5,
                scaled_samples: 27,
                scaled_attackers: 20,
                campaign_samples: 25,
                mixed_samples: 17,
            },
        }
    }

    pub fn parse(name: &str) -> Option<Dataset> {
        match name.to_ascii_lowercase().as_str() {
            "otc" | "bitcoin-otc" | "bitcoinotc" => Some(Dataset::BitcoinOtc),
            "alpha" | "bitcoin-alpha" | "bitcoinalpha" => Some(Dataset::BitcoinAlpha),
            "rfa" | "rfa-net" | "rfanet" => Some(Dataset::RfaNet),
            _ => None,
        }
    }

    /// Path of the dataset file under `dir`, if present.
    pub fn locate(self, dir: &Path) -> Option<PathBuf> {
        let p = dir.join(self.file_name());
        p.is_file().then_some(p)
    }

    pub fn load(self, dir: &Path) -> Result<Wsn> {
        super::load_rating_csv(dir.join(self.file_name()), self.scale())
    }
}

/// The directory named by `FGA_DATA_DIR`, if set.
pub fn data_dir_from_env() -> Option<PathBuf> {
    std::env::var_os(DATA_DIR_ENV).map(PathBuf::from)
}
