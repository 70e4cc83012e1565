//! Non-positive immersion checks for group presentations.

pub mod braid;
pub mod cover;
pub mod homology;
pub mod logs;
pub mod minima;
pub mod oracle;
pub mod orders;
pub mod presentation;
pub mod verdict;

pub use presentation::{Letter, Presentation, Word};
