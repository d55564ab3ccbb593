//! Seeded random instances.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use super::GenConfig;
use crate::context::{Context, PointSet};
use crate::error::{Error, Result};
use crate::mapping::SoftMapping;
use crate::soft_set::SoftSet;
use crate::topology::{Limits, SoftSpace};

const TOPOLOGY_RETRIES: usize = 16;

/// Point and parameter name prefixes for the two sides of an instance.
pub fn prefixes(group: u8) -> (&'static str, &'static str) {
    if group == 0 {
        ("x", "e")
    } else {
        ("y", "d")
    }
}

pub fn named_context(group: u8, n: usize, m: usize) -> Result<Arc<Context>> {
    let (p, q) = prefixes(group);
    Context::new((0..n).map(|i| format!("{p}{i}")), (0..m).map(|e| format!("{q}{e}")))
}

pub fn gen_context<R: Rng>(rng: &mut R, cfg: &GenConfig, group: u8) -> Result<Arc<Context>> {
    let n = rng.gen_range(1..=cfg.max_universe);
    let m = rng.gen_range(1..=cfg.max_params);
    named_context(group, n, m)
}

/// Random table bits at a density picked per call.
pub fn gen_soft_set<R: Rng>(rng: &mut R, ctx: &Arc<Context>) -> SoftSet {
    let density = [0.25, 0.5, 0.75][rng.gen_range(0..3)];
    let rows = (0..ctx.n_params())
        .map(|_| {
            (0..ctx.n_points())
                .filter(|_| rng.gen_bool(density))
                .fold(0u64, |acc, x| acc | 1 << x)
        })
        .collect::<Vec<_>>();
    SoftSet::from_rows(ctx, rows).expect("rows are in range")
}

/// Non-empty random carrier.
pub fn gen_carrier<R: Rng>(rng: &mut R, ctx: &Arc<Context>) -> PointSet {
    let n = ctx.n_points();
    let bits = rng.gen_range(1..(1u64 << n));
    PointSet::from_bits(ctx, bits).expect("bits are in range")
}

fn gen_seed<R: Rng>(rng: &mut R, ctx: &Arc<Context>) -> SoftSet {
    if rng.gen_bool(0.3) {
        SoftSet::crisp_lift(&gen_carrier(rng, ctx))
    } else {
        gen_soft_set(rng, ctx)
    }
}

/// `generate` over a few random seeds plus `extra`, re-rolled while the
/// result has more than `cfg.max_opens` opens.
pub fn gen_topology_with<R: Rng>(
    rng: &mut R,
    cfg: &GenConfig,
    ctx: &Arc<Context>,
    extra: &[SoftSet],
) -> Result<SoftSpace> {
    let limits = Limits {
        max_opens: cfg.max_opens,
        ..Limits::default()
    };
    for _ in 0..TOPOLOGY_RETRIES {
        let k = rng.gen_range(0..=3);
        let mut seeds: Vec<SoftSet> = (0..k).map(|_| gen_seed(rng, ctx)).collect();
        seeds.extend_from_slice(extra);
        match SoftSpace::generate(ctx, &seeds, &limits) {
            Ok(space) => return Ok(space),
            Err(e) if e.is_cap() => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::CapExceeded {
        what: "generated topology",
        cap: cfg.max_opens,
    })
}

pub fn gen_topology<R: Rng>(rng: &mut R, cfg: &GenConfig, ctx: &Arc<Context>) -> Result<SoftSpace> {
    gen_topology_with(rng, cfg, ctx, &[])
}

/// A topology in which every crisp singleton is open, hence soft T2.
pub fn gen_hausdorff<R: Rng>(rng: &mut R, cfg: &GenConfig, ctx: &Arc<Context>) -> Result<SoftSpace> {
    let singletons: Vec<SoftSet> = (0..ctx.n_points())
        .map(|x| SoftSet::crisp_lift(&PointSet::singleton(ctx, x)))
        .collect();
    gen_topology_with(rng, cfg, ctx, &singletons)
}

pub fn gen_mapping<R: Rng>(rng: &mut R, src: &Arc<Context>, dst: &Arc<Context>) -> SoftMapping {
    let u = (0..src.n_points())
        .map(|_| rng.gen_range(0..dst.n_points()))
        .collect();
    let p = (0..src.n_params())
        .map(|_| rng.gen_range(0..dst.n_params()))
        .collect();
    SoftMapping::new(src, dst, u, p).expect("images are in range")
}

fn onto<R: Rng>(rng: &mut R, from: usize, to: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..from).collect();
    order.shuffle(rng);
    let mut map = vec![0; from];
    for (k, &i) in order.iter().enumerate() {
        map[i] = if k < to { k } else { rng.gen_range(0..to) };
    }
    map
}

/// A mapping with both `u` and `p` onto, or `None` when the sizes forbid it.
pub fn gen_surjection<R: Rng>(
    rng: &mut R,
    src: &Arc<Context>,
    dst: &Arc<Context>,
) -> Option<SoftMapping> {
    if src.n_points() < dst.n_points() || src.n_params() < dst.n_params() {
        return None;
    }
    let u = onto(rng, src.n_points(), dst.n_points());
    let p = onto(rng, src.n_params(), dst.n_params());
    SoftMapping::new(src, dst, u, p).ok()
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;

    fn cfg() -> GenConfig {
        GenConfig {
            seed: 7,
            max_universe: 4,
            max_params: 2,
            max_opens: 64,
            instances: 1,
        }
    }

    #[test]
    fn generated_topologies_validate() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..1000 {
            let ctx = gen_context(&mut rng, &cfg(), 0).unwrap();
            match gen_topology(&mut rng, &cfg(), &ctx) {
                Ok(s) => {
                    assert!(s.validate().is_empty());
                    assert!(s.len() <= 64);
                }
                Err(e) => assert!(e.is_cap()),
            }
        }
    }

    #[test]
    fn same_seed_same_stream() {
        let draw = || {
            let mut rng = ChaCha8Rng::seed_from_u64(99);
            (0..50)
                .map(|_| {
                    let ctx = gen_context(&mut rng, &cfg(), 0).unwrap();
                    gen_topology(&mut rng, &cfg(), &ctx).ok()
                })
                .collect::<Vec<_>>()
        };
        assert_eq!(draw(), draw());
    }

    #[test]
    fn single_point_universe() {
        let one = GenConfig {
            max_universe: 1,
            ..cfg()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let ctx = gen_context(&mut rng, &one, 0).unwrap();
            assert_eq!(ctx.n_points(), 1);
            assert_eq!(gen_topology(&mut rng, &one, &ctx).unwrap().context().n_points(), 1);
        }
    }

    #[test]
    fn hausdorff_and_surjection_generators() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let ctx = gen_context(&mut rng, &cfg(), 0).unwrap();
            if let Ok(s) = gen_hausdorff(&mut rng, &cfg(), &ctx) {
                assert!(s.is_hausdorff());
            }
            let dst = gen_context(&mut rng, &cfg(), 1).unwrap();
            match gen_surjection(&mut rng, &ctx, &dst) {
                Some(f) => assert!(f.is_surjective()),
                None => assert!(
                    ctx.n_points() < dst.n_points() || ctx.n_params() < dst.n_params()
                ),
            }
        }
    }
}
