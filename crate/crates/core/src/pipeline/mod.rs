//! Project, solve, lift; and the one-pass streaming engine.

mod lift;
mod stream;

pub use lift::{cluster_via_projection, PipelineConfig, PipelineOutcome, Refit};
pub use stream::{BufferSketch, SpaceLedger, StreamConfig, StreamSketch, StreamState, BUFFER_MAGIC, BUFFER_VERSION};
