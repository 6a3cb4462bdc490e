//! Acceptance suite for `fxpremia`. Everything lives in `tests/acceptance.rs`;
//! run it with `cargo test -p fxpremia-validation --test acceptance`.
