//! Helpers shared by the integration suites.
#![allow(dead_code)]

use incidence::certify::{eval_statement, run_recipe, TheoremSpec, Verdict};
use incidence::geom::{join2, meet2, Configuration};
use incidence::translate::DerivedMeet;
use num_traits::Zero;

/// Instance drawn from `seed` that satisfies the spec's nondegeneracy
/// list, hypotheses, and conclusion exactly; `None` when the draw
/// degenerates.
pub fn try_certified(spec: &TheoremSpec, seed: u64) -> Option<Configuration> {
    let config = run_recipe(spec, seed).ok()?;
    for nd in &spec.nondeg {
        match config.bracket(nd) {
            Ok(v) if !v.is_zero() => {}
            _ => return None,
        }
    }
    let stmts = spec
        .hypotheses
        .iter()
        .chain(std::iter::once(&spec.conclusion));
    for stmt in stmts {
        match eval_statement(&config, stmt) {
            Ok(Verdict::Holds) => {}
            _ => return None,
        }
    }
    Some(config)
}

/// First certified instance at or after `from_seed`.
pub fn certified_instance(spec: &TheoremSpec, from_seed: u64) -> Configuration {
    (from_seed..from_seed + 200)
        .find_map(|seed| try_certified(spec, seed))
        .unwrap_or_else(|| panic!("no certified instance for {} within 200 seeds", spec.name))
}

/// The first `n` certified instances on seeds counting up from `from_seed`.
pub fn certified_instances(spec: &TheoremSpec, from_seed: u64, n: usize) -> Vec<Configuration> {
    let mut out = Vec::new();
    let mut seed = from_seed;
    while out.len() < n {
        assert!(
            seed < from_seed + 10_000,
            "not enough certified instances for {}",
            spec.name
        );
        if let Some(c) = try_certified(spec, seed) {
            out.push(c);
        }
        seed += 1;
    }
    out
}

/// Insert the meet points recorded by a translation into an instance.
pub fn with_derived(mut config: Configuration, derived: &[DerivedMeet]) -> Option<Configuration> {
    for d in derived {
        let la = join2(config.point(&d.line_a.0).ok()?, config.point(&d.line_a.1).ok()?).ok()?;
        let lb = join2(config.point(&d.line_b.0).ok()?, config.point(&d.line_b.1).ok()?).ok()?;
        let z = meet2(&la, &lb).ok()?;
        config.insert(d.label.clone(), z).ok()?;
    }
    Some(config)
}
