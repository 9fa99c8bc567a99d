//! Measurement-based quantum computation in the measurement calculus:
//! patterns and fan-out circuits as data, the translations between them,
//! classically controlled schemes, and a dense simulator used to check that
//! every translation preserves the computed channel.

pub mod angle;
pub mod circuit;
pub mod diagonal;
pub mod error;
pub mod exec;
pub mod layering;
pub mod pattern;
pub mod random;
pub mod report;
pub mod schemes;
pub mod simulate;
pub mod text;
pub mod transpile;

pub use angle::{Alpha0, Angle};
pub use circuit::{Circuit, Gate};
pub use error::{Error, Result};
pub use exec::Execution;
pub use pattern::{Command, Pattern, QubitId, Signal};
