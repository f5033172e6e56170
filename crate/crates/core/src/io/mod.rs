//! File formats, configuration and synthetic scenes.

mod config;
mod format;
mod synth;

pub use config::{Mode, ToolConfig};
pub use format::{
    frames_to_string, load_frames, parse_frames, save_frames, CameraRecord, LaneFileFrame,
    LaneRecord,
};
pub use synth::{synth_scene, u_turn, SceneKind};
