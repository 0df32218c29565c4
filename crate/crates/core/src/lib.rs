//! Wonderful blowups of finite linear group actions, computed exactly over `Q`.
//!
//! A finite group `G ⊂ GL_d(Q)` acting on `V = Q^d` is the local model of a
//! smooth variety with a group action. This crate builds the stabilizer and Y
//! stratifications of such an action, the maximal and minimal wonderful models
//! attached to them (through their embedding in `V × ∏ P(V/U)`), the staged
//! abelianization trace, and suites that check the stabilizer statements on
//! these models exhaustively and by sampling.

pub mod batyrev;
pub mod error;
pub mod export;
pub mod group;
pub mod linalg;
pub mod par;
pub mod presets;
pub mod stratification;
pub mod verify;
pub mod wonderful;

pub use error::{Result, WonderError};
