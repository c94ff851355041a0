//! Canonical commit data model and dataset persistence shared by the rest
//! of the comet workspace.
//!
//! A dataset is a JSON Lines file with one [`CommitRecord`] per line. Records
//! are immutable values: readers and writers of distinct files may run
//! concurrently, a single file has at most one writer.

mod dataset;
mod diff;
mod error;
mod record;

pub use dataset::{read_dataset, write_dataset, DatasetReader};
pub use diff::render_diff;
pub use error::DatasetError;
pub use record::{ChangeType, CommitRecord, DatasetSplit, FileModification};
