//! Acceptance run for `spectre-core`.
//!
//! The run lives in `tests/acceptance.rs` (`cargo test -p spectre-suite
//! --test acceptance`). It prints one line per criterion and exits nonzero
//! when any criterion fails. Helpers shared with the core integration tests
//! are included from `crates/core/tests/support`.
