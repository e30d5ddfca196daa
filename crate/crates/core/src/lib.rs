//! Automated lexicostatistics.
//!
//! Words are compared with a length-normalized Levenshtein distance, averaged
//! into language-to-language distances, and used to rank meanings by how
//! slowly they change across a family. The ranking drives the list-length
//! analysis (distance correlation and tree agreement as functions of list
//! length), and distances are turned into divergence times and UPGMA trees.

pub mod chrono;
pub mod editdist;
pub mod lexstat;
pub mod matrix;
pub mod phylo;
pub mod synth;
pub mod wordlist;

pub use chrono::{calibrate, divergence_time, CalibrationPoint, ChronoError, TimeMatrix};
pub use editdist::{levenshtein, normalize, normalized_distance, Word, WordError};
pub use lexstat::{
    cell_distance, correlation, correlation_curve, full_distance, language_distance,
    rank_meanings, stability, truncated_distance, DistanceMatrix, FamilyDataset, LexError,
    StabilityTable, SynonymPolicy,
};
pub use matrix::Pairwise;
pub use phylo::{newick_parse, newick_serialize, rf_curve, rf_difference, upgma, PhyloError, Tree};
pub use wordlist::{parse_wordlist, read_wordlist_file, write_wordlist, WordlistError};
