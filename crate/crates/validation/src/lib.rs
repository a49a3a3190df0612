//! Holds the acceptance harness in `tests/acceptance.rs`; run it with
//! `cargo test -p mmit-validation --test acceptance`.
