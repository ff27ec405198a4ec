//! Acceptance checks for the `wavebench` workspace.
//!
//! Everything lives in the `acceptance` test target; run it with
//! `cargo test -p wavebench-validation --test acceptance`.
