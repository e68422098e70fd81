// mdbook cannot run Rust listings against a local crate, so every chapter
// is pulled in here as a module doc and `cargo test --doc` runs the code
// blocks. One module per chapter keeps failure names traceable.

#[doc = include_str!("src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("src/scenarios.md")]
pub mod scenarios {}
#[doc = include_str!("src/power-model.md")]
pub mod power_model {}
#[doc = include_str!("src/constraints.md")]
pub mod constraints {}
#[doc = include_str!("src/optimizers.md")]
pub mod optimizers {}
#[doc = include_str!("src/strategies.md")]
pub mod strategies {}
#[doc = include_str!("src/experiments.md")]
pub mod experiments {}
