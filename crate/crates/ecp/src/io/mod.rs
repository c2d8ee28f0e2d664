//! Dataset, embedding and parameter files.

mod embeddings;
mod params;
mod tasks;

pub use embeddings::{
    load_embeddings, read_embeddings, save_embeddings, write_embeddings_binary, write_embeddings_text, Encoding, MAGIC,
};
pub use params::{load_params, read_params, save_params};
pub use tasks::{load_tasks, read_tasks, save_tasks, write_tasks, Parsing, TaskFile, UnknownField};
