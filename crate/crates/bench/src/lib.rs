//! Shared fixtures for the benchmarks.

use ellmot::cycle::{Context, FunId};
use ellmot::report::{fixture_config, Config};

/// The 37a1 fixture with its functions registered in a fresh context.
pub fn fixture() -> (Config, Context, Vec<FunId>) {
    let cfg = fixture_config().validate().expect("fixture validates");
    let mut ctx = Context::new(cfg.curve.clone());
    let ids = cfg.functions.iter().map(|f| ctx.register(f.clone()).expect("registers")).collect();
    (cfg, ctx, ids)
}
