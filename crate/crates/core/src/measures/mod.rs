//! Negativity, trace-distance discord and negativity of quantumness.

pub mod correlation;
pub mod discord;
pub mod negativity;
pub mod optimize;
pub mod quantumness;

pub use correlation::{correlation_matrix, discord_bell_diagonal, CorrelationMatrix};
pub use discord::{discord_numeric, discord_numeric_detailed, DiscordEstimate, DiscordOptions};
pub use negativity::{negativity, negativity_offdiag, negativity_theory, Bipartition};
pub use quantumness::{negativity_of_quantumness, MeasureResult, Method};
