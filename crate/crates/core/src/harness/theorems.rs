//! The theorem table: instance shapes, samplers and checks.

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::gen::{
    gen_carrier, gen_context, gen_hausdorff, gen_mapping, gen_soft_set, gen_surjection,
    gen_topology, gen_topology_with, named_context,
};
use super::{Env, GenConfig, Instance, Outcome, Tier, EXHAUSTIVE_LIMIT};
use crate::context::{Context, PointSet};
use crate::error::Result;
use crate::mapping::SoftMapping;
use crate::product::ProductContext;
use crate::soft_set::SoftSet;
use crate::topology::{Limits, SoftSpace};

/// One component of an instance. The number is the side (`0` for `X`,
/// `1` for `Y`); `Map` always runs from side 0 to side 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slot {
    Space(u8),
    Set(u8),
    Carrier(u8),
    Map,
}

type Sampler = fn(&mut ChaCha8Rng, &GenConfig) -> Result<Instance>;
type Check = fn(&Instance, &Env) -> Result<Outcome>;

pub struct Theorem {
    pub id: &'static str,
    pub tier: Tier,
    pub groups: &'static [&'static str],
    pub claim: &'static str,
    pub slots: &'static [Slot],
    sampler: Option<Sampler>,
    /// Keep resampling an instance while its hypothesis is unmet.
    pub(crate) retry_vacuous: bool,
    /// Product theorems keep each factor at or below the factor cap.
    factors: bool,
    pub(crate) check: Check,
}

impl std::fmt::Debug for Theorem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Theorem").field("id", &self.id).finish()
    }
}

impl Theorem {
    pub fn sample(&self, rng: &mut ChaCha8Rng, cfg: &GenConfig) -> Result<Instance> {
        let cfg = if self.factors {
            GenConfig {
                max_opens: cfg.max_opens.min(Limits::default().max_factor_opens),
                ..*cfg
            }
        } else {
            *cfg
        };
        match self.sampler {
            Some(s) => s(rng, &cfg),
            None => sample_slots(self.slots, rng, &cfg),
        }
    }
}

pub fn theorem(id: &str) -> Option<&'static Theorem> {
    THEOREMS.iter().find(|t| t.id == id)
}

fn uses_side_one(slots: &[Slot]) -> bool {
    slots.iter().any(|s| {
        matches!(s, Slot::Map | Slot::Space(1) | Slot::Set(1) | Slot::Carrier(1))
    })
}

/// Spaces in slot order, then an indiscrete placeholder for each side
/// that has no space slot.
fn assemble(
    ctxs: &[Arc<Context>],
    spaces: Vec<SoftSpace>,
    sets: Vec<SoftSet>,
    carriers: Vec<PointSet>,
    mapping: Option<SoftMapping>,
) -> Instance {
    let mut spaces = spaces;
    for c in ctxs {
        if !spaces.iter().any(|s| Arc::ptr_eq(s.context(), c)) {
            spaces.push(SoftSpace::indiscrete(c));
        }
    }
    Instance {
        spaces,
        sets,
        carriers,
        mapping,
    }
}

fn sample_slots(slots: &[Slot], rng: &mut ChaCha8Rng, cfg: &GenConfig) -> Result<Instance> {
    let mut ctxs = vec![gen_context(rng, cfg, 0)?];
    if uses_side_one(slots) {
        ctxs.push(gen_context(rng, cfg, 1)?);
    }
    let (mut spaces, mut sets, mut carriers, mut mapping) = (vec![], vec![], vec![], None);
    for slot in slots {
        match *slot {
            Slot::Space(g) => spaces.push(gen_topology(rng, cfg, &ctxs[g as usize])?),
            Slot::Set(g) => sets.push(gen_soft_set(rng, &ctxs[g as usize])),
            Slot::Carrier(g) => carriers.push(gen_carrier(rng, &ctxs[g as usize])),
            Slot::Map => mapping = Some(gen_mapping(rng, &ctxs[0], &ctxs[1])),
        }
    }
    Ok(assemble(&ctxs, spaces, sets, carriers, mapping))
}

// ---------------------------------------------------------------------------
// Exhaustive enumeration

enum Domain {
    Spaces(Vec<SoftSpace>),
    Sets(Vec<SoftSet>),
    Carriers(Vec<PointSet>),
    Maps(Vec<SoftMapping>),
}

impl Domain {
    fn len(&self) -> u64 {
        (match self {
            Domain::Spaces(v) => v.len(),
            Domain::Sets(v) => v.len(),
            Domain::Carriers(v) => v.len(),
            Domain::Maps(v) => v.len(),
        }) as u64
    }
}

/// Every instance over one fixed choice of contexts, indexed in mixed
/// radix with the first slot varying slowest.
pub(crate) struct Block {
    ctxs: Vec<Arc<Context>>,
    domains: Vec<Domain>,
    count: u64,
}

impl Block {
    pub(crate) fn count(&self) -> u64 {
        self.count
    }

    pub(crate) fn instance(&self, mut k: u64) -> Instance {
        let mut picks = vec![0usize; self.domains.len()];
        for (i, d) in self.domains.iter().enumerate().rev() {
            picks[i] = (k % d.len()) as usize;
            k /= d.len();
        }
        let (mut spaces, mut sets, mut carriers, mut mapping) = (vec![], vec![], vec![], None);
        for (d, &p) in self.domains.iter().zip(&picks) {
            match d {
                Domain::Spaces(v) => spaces.push(v[p].clone()),
                Domain::Sets(v) => sets.push(v[p].clone()),
                Domain::Carriers(v) => carriers.push(v[p].clone()),
                Domain::Maps(v) => mapping = Some(v[p].clone()),
            }
        }
        assemble(&self.ctxs, spaces, sets, carriers, mapping)
    }
}

fn slot_size(slot: Slot, ctxs: &[Arc<Context>]) -> Option<u64> {
    let cells = |c: &Context| c.n_points() * c.n_params();
    match slot {
        Slot::Space(g) => SoftSpace::enumerate_all(&ctxs[g as usize])
            .ok()
            .map(|v| v.len() as u64),
        Slot::Set(g) => {
            let c = cells(&ctxs[g as usize]);
            (c < 40).then(|| 1u64 << c)
        }
        Slot::Carrier(g) => Some((1u64 << ctxs[g as usize].n_points()) - 1),
        Slot::Map => {
            let (s, t) = (&ctxs[0], &ctxs[1]);
            let u = (t.n_points() as u64).checked_pow(s.n_points() as u32)?;
            let p = (t.n_params() as u64).checked_pow(s.n_params() as u32)?;
            u.checked_mul(p)
        }
    }
}

fn all_maps(from: usize, to: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..from {
        out = out
            .into_iter()
            .flat_map(|m| {
                (0..to).map(move |v| {
                    let mut m = m.clone();
                    m.push(v);
                    m
                })
            })
            .collect();
    }
    out
}

fn slot_domain(slot: Slot, ctxs: &[Arc<Context>]) -> Result<Domain> {
    Ok(match slot {
        Slot::Space(g) => Domain::Spaces(SoftSpace::enumerate_all(&ctxs[g as usize])?),
        Slot::Set(g) => Domain::Sets(SoftSet::enumerate(&ctxs[g as usize])?.collect()),
        Slot::Carrier(g) => {
            let c = &ctxs[g as usize];
            Domain::Carriers(
                (1..(1u64 << c.n_points()))
                    .map(|b| PointSet::from_bits(c, b))
                    .collect::<Result<_>>()?,
            )
        }
        Slot::Map => {
            let (s, t) = (&ctxs[0], &ctxs[1]);
            let mut maps = Vec::new();
            for u in all_maps(s.n_points(), t.n_points()) {
                for p in all_maps(s.n_params(), t.n_params()) {
                    maps.push(SoftMapping::new(s, t, u.clone(), p)?);
                }
            }
            Domain::Maps(maps)
        }
    })
}

/// Full enumeration plan, or `None` when some slot cannot be enumerated
/// or the instance space exceeds [`EXHAUSTIVE_LIMIT`].
pub(crate) fn enumeration(th: &Theorem, cfg: &GenConfig) -> Option<Vec<Block>> {
    let shapes: Vec<(usize, usize)> = (1..=cfg.max_universe)
        .flat_map(|n| (1..=cfg.max_params).map(move |m| (n, m)))
        .collect();
    let mut choices: Vec<Vec<Arc<Context>>> = Vec::new();
    for &(n, m) in &shapes {
        let c0 = named_context(0, n, m).ok()?;
        if uses_side_one(th.slots) {
            for &(n1, m1) in &shapes {
                choices.push(vec![c0.clone(), named_context(1, n1, m1).ok()?]);
            }
        } else {
            choices.push(vec![c0]);
        }
    }
    let mut total = 0u64;
    for ctxs in &choices {
        let mut count = 1u64;
        for &slot in th.slots {
            count = count.checked_mul(slot_size(slot, ctxs)?)?;
        }
        total = total.checked_add(count)?;
        if total > EXHAUSTIVE_LIMIT {
            return None;
        }
    }
    choices
        .into_iter()
        .map(|ctxs| {
            let domains = th
                .slots
                .iter()
                .map(|&s| slot_domain(s, &ctxs))
                .collect::<Result<Vec<_>>>()
                .ok()?;
            let count = domains.iter().map(Domain::len).product();
            Some(Block {
                ctxs,
                domains,
                count,
            })
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Samplers for theorems whose hypotheses random instances rarely meet

/// A space with a separation built in: some `F` and `F'` are both seeds.
fn sample_prop_4(rng: &mut ChaCha8Rng, cfg: &GenConfig) -> Result<Instance> {
    let ctx = gen_context(rng, cfg, 0)?;
    let space = if rng.gen_bool(0.7) {
        let f = gen_soft_set(rng, &ctx);
        gen_topology_with(rng, cfg, &ctx, &[f.complement(), f])?
    } else {
        gen_topology(rng, cfg, &ctx)?
    };
    let y = gen_carrier(rng, &ctx);
    Ok(assemble(&[ctx], vec![space], vec![], vec![y], None))
}

/// `τ1` is usually generated by some opens of `τ2`, so `τ1 ⊆ τ2`.
fn sample_coarser(rng: &mut ChaCha8Rng, cfg: &GenConfig) -> Result<Instance> {
    let ctx = gen_context(rng, cfg, 0)?;
    let fine = gen_topology(rng, cfg, &ctx)?;
    let coarse = if rng.gen_bool(0.75) {
        let picked: Vec<SoftSet> = fine
            .opens()
            .iter()
            .filter(|_| rng.gen_bool(0.4))
            .cloned()
            .collect();
        SoftSpace::generate(&ctx, &picked, &Limits::default())?
    } else {
        gen_topology(rng, cfg, &ctx)?
    };
    Ok(assemble(&[ctx], vec![coarse, fine], vec![], vec![], None))
}

/// Source topology generated by preimages of some target opens, so the
/// mapping is usually continuous.
fn pullback_source(
    rng: &mut ChaCha8Rng,
    cfg: &GenConfig,
    f: &SoftMapping,
    dst: &SoftSpace,
    extra: usize,
) -> Result<SoftSpace> {
    let mut seeds = Vec::new();
    for g in dst.opens() {
        if rng.gen_bool(0.6) {
            seeds.push(f.preimage(g)?);
        }
    }
    for _ in 0..extra {
        seeds.push(gen_soft_set(rng, f.source()));
    }
    let limits = Limits {
        max_opens: cfg.max_opens,
        ..Limits::default()
    };
    SoftSpace::generate(f.source(), &seeds, &limits)
}

fn sample_basis_cont(rng: &mut ChaCha8Rng, cfg: &GenConfig) -> Result<Instance> {
    let c0 = gen_context(rng, cfg, 0)?;
    let c1 = gen_context(rng, cfg, 1)?;
    let dst = gen_topology(rng, cfg, &c1)?;
    let f = gen_mapping(rng, &c0, &c1);
    let src = if rng.gen_bool(0.6) {
        let extra = rng.gen_range(0..=1);
        pullback_source(rng, cfg, &f, &dst, extra)?
    } else {
        gen_topology(rng, cfg, &c0)?
    };
    Ok(assemble(&[c0, c1], vec![src, dst], vec![], vec![], Some(f)))
}

fn sample_cont_image(rng: &mut ChaCha8Rng, cfg: &GenConfig) -> Result<Instance> {
    let c1 = gen_context(rng, cfg, 1)?;
    let n = rng.gen_range(c1.n_points()..=cfg.max_universe);
    let m = rng.gen_range(c1.n_params()..=cfg.max_params);
    let c0 = named_context(0, n, m)?;
    let dst = gen_topology(rng, cfg, &c1)?;
    let f = gen_surjection(rng, &c0, &c1).expect("source is at least as large");
    let extra = rng.gen_range(0..=2);
    let src = pullback_source(rng, cfg, &f, &dst, extra)?;
    Ok(assemble(&[c0, c1], vec![src, dst], vec![], vec![], Some(f)))
}

fn sample_closed_prod(rng: &mut ChaCha8Rng, cfg: &GenConfig) -> Result<Instance> {
    let c0 = gen_context(rng, cfg, 0)?;
    let c1 = gen_context(rng, cfg, 1)?;
    let s1 = gen_topology(rng, cfg, &c0)?;
    let s2 = gen_topology(rng, cfg, &c1)?;
    let f = s1.opens()[rng.gen_range(0..s1.len())].complement();
    let g = s2.opens()[rng.gen_range(0..s2.len())].complement();
    Ok(assemble(&[c0, c1], vec![s1, s2], vec![f, g], vec![], None))
}

/// Carriers sharing a random point.
fn sample_union(rng: &mut ChaCha8Rng, cfg: &GenConfig) -> Result<Instance> {
    let ctx = gen_context(rng, cfg, 0)?;
    let space = gen_topology(rng, cfg, &ctx)?;
    let x = rng.gen_range(0..ctx.n_points());
    let carriers = (0..3)
        .map(|_| PointSet::from_bits(&ctx, gen_carrier(rng, &ctx).bits() | 1 << x))
        .collect::<Result<Vec<_>>>()?;
    Ok(assemble(&[ctx], vec![space], vec![], carriers, None))
}

fn sample_prod_hausdorff(rng: &mut ChaCha8Rng, cfg: &GenConfig) -> Result<Instance> {
    let c0 = gen_context(rng, cfg, 0)?;
    let c1 = gen_context(rng, cfg, 1)?;
    let s1 = gen_hausdorff(rng, cfg, &c0)?;
    let s2 = gen_hausdorff(rng, cfg, &c1)?;
    Ok(assemble(&[c0, c1], vec![s1, s2], vec![], vec![], None))
}

// ---------------------------------------------------------------------------
// Checks

fn verdict(ok: bool, detail: impl FnOnce() -> String) -> Result<Outcome> {
    Ok(if ok { Outcome::Holds } else { Outcome::Fails(detail()) })
}

fn ctx0(i: &Instance) -> &Arc<Context> {
    i.spaces[0].context()
}

fn product_ctx(i: &Instance) -> Result<ProductContext> {
    ProductContext::new(i.spaces[0].context(), i.spaces[1].context())
}

fn mapping(i: &Instance) -> &SoftMapping {
    i.mapping.as_ref().expect("theorem has a mapping slot")
}

fn prop_1_i(i: &Instance, env: &Env) -> Result<Outcome> {
    let a = &env.alg;
    let f = &i.sets[0];
    let lhs = a.union(f, &a.complement(f))?;
    verdict(lhs.is_absolute(), || format!("F ∪ F' = {lhs} for F = {f}"))
}

fn prop_1_ii(i: &Instance, env: &Env) -> Result<Outcome> {
    let a = &env.alg;
    let f = &i.sets[0];
    let lhs = a.intersect(f, &a.complement(f))?;
    verdict(lhs.is_null(), || format!("F ∩ F' = {lhs} for F = {f}"))
}

fn prop_1_iii(i: &Instance, env: &Env) -> Result<Outcome> {
    let f = &i.sets[0];
    let lhs = env.alg.intersect(f, &SoftSet::absolute(ctx0(i)))?;
    verdict(&lhs == f, || format!("F ∩ X̃ = {lhs} for F = {f}"))
}

fn prop_6_i(i: &Instance, env: &Env) -> Result<Outcome> {
    let a = &env.alg;
    let (f, g, h) = (&i.sets[0], &i.sets[1], &i.sets[2]);
    let lhs = a.intersect(f, &a.union(g, h)?)?;
    let rhs = a.union(&a.intersect(f, g)?, &a.intersect(f, h)?)?;
    verdict(lhs == rhs, || {
        format!("F ∩ (G ∪ H) = {lhs} but (F ∩ G) ∪ (F ∩ H) = {rhs} for F = {f}, G = {g}, H = {h}")
    })
}

fn prop_6_ii(i: &Instance, env: &Env) -> Result<Outcome> {
    let a = &env.alg;
    let (f, g) = (&i.sets[0], &i.sets[1]);
    let sub = a.is_subset(f, g)?;
    let meet = a.intersect(f, g)? == *f;
    verdict(sub == meet, || {
        format!("F ⊆ G is {sub} but F ∩ G = F is {meet} for F = {f}, G = {g}")
    })
}

fn prop_7_i(i: &Instance, env: &Env) -> Result<Outcome> {
    let a = &env.alg;
    let (f, g, h) = (&i.sets[0], &i.sets[1], &i.sets[2]);
    let lhs = a.intersect(&a.intersect(f, g)?, h)?;
    let rhs = a.intersect(f, &a.intersect(g, h)?)?;
    verdict(lhs == rhs, || format!("(F ∩ G) ∩ H = {lhs} but F ∩ (G ∩ H) = {rhs}"))
}

fn prop_7_ii(i: &Instance, env: &Env) -> Result<Outcome> {
    let a = &env.alg;
    let (f, g, h) = (&i.sets[0], &i.sets[1], &i.sets[2]);
    let lhs = a.union(&a.union(f, g)?, h)?;
    let rhs = a.union(f, &a.union(g, h)?)?;
    verdict(lhs == rhs, || format!("(F ∪ G) ∪ H = {lhs} but F ∪ (G ∪ H) = {rhs}"))
}

fn prop_3_i(i: &Instance, env: &Env) -> Result<Outcome> {
    let a = &env.alg;
    let ctx = ctx0(i);
    let f = &i.sets[0];
    let family = &i.sets[1..];
    let lhs = a.intersect(f, &a.family_union(ctx, family)?)?;
    let parts = family
        .iter()
        .map(|g| a.intersect(f, g))
        .collect::<Result<Vec<_>>>()?;
    let rhs = a.family_union(ctx, &parts)?;
    verdict(lhs == rhs, || {
        format!("F ∩ ∪Gᵢ = {lhs} but ∪(F ∩ Gᵢ) = {rhs} for F = {f}")
    })
}

fn prop_3_ii(i: &Instance, env: &Env) -> Result<Outcome> {
    let a = &env.alg;
    let (g, h) = (&i.sets[0], &i.sets[1]);
    let f = a.union(g, h)?;
    verdict(a.is_subset(g, &f)? && a.is_subset(h, &f)?, || {
        format!("F = G ∪ H = {f} does not contain both G = {g} and H = {h}")
    })
}

fn thm_clopen(i: &Instance, env: &Env) -> Result<Outcome> {
    let s = &i.spaces[0];
    let by_pairs = s.find_separation().is_none();
    let by_clopens = s.is_connected_clopen();
    let by_complements = env.alg.is_connected(s)?;
    verdict(by_pairs == by_clopens && by_clopens == by_complements, || {
        format!(
            "no separation: {by_pairs}; only trivial clopens: {by_clopens}; \
             no open with open complement: {by_complements}"
        )
    })
}

fn prop_4(i: &Instance, env: &Env) -> Result<Outcome> {
    let a = &env.alg;
    let s = &i.spaces[0];
    let y = &i.carriers[0];
    if !a.subspace_connected(s, y)? {
        return Ok(Outcome::Vacuous);
    }
    let whole = SoftSet::absolute(s.context());
    let lift = a.crisp_lift(y);
    let mut separated = false;
    for f in s.opens().iter().filter(|f| !f.is_null()) {
        for g in s.opens().iter().filter(|g| !g.is_null()) {
            if a.union(f, g)? != whole || !a.intersect(f, g)?.is_null() {
                continue;
            }
            separated = true;
            if !(a.is_subset(&lift, f)? || a.is_subset(&lift, g)?) {
                return Ok(Outcome::Fails(format!(
                    "connected Y = {y} lies in neither side of the separation ({f}, {g})"
                )));
            }
        }
    }
    Ok(if separated { Outcome::Holds } else { Outcome::Vacuous })
}

fn lemma_5(i: &Instance, env: &Env) -> Result<Outcome> {
    let a = &env.alg;
    let s = &i.spaces[0];
    let y = &i.carriers[1];
    let z = i.carriers[0].union(y)?;
    let nested: BTreeSet<SoftSet> = s.subspace(&z)?.subspace(y)?.opens().iter().cloned().collect();
    let direct: BTreeSet<SoftSet> = s.subspace(y)?.opens().iter().cloned().collect();
    let alg_nested = s
        .opens()
        .iter()
        .map(|f| a.restrict(&a.restrict(f, &z)?, y))
        .collect::<Result<BTreeSet<_>>>()?;
    let alg_direct = a.traces(s, y)?;
    verdict(nested == direct && alg_nested == alg_direct, || {
        format!(
            "relative topology of Y = {y} inside Z = {z} has {} opens, directly {} \
             (recomputed: {} vs {})",
            nested.len(),
            direct.len(),
            alg_nested.len(),
            alg_direct.len()
        )
    })
}

fn coarser_connected(i: &Instance, env: &Env) -> Result<Outcome> {
    let a = &env.alg;
    let (coarse, fine) = (&i.spaces[0], &i.spaces[1]);
    for f in coarse.opens() {
        let mut found = false;
        for g in fine.opens() {
            if a.is_subset(f, g)? && a.is_subset(g, f)? {
                found = true;
                break;
            }
        }
        if !found {
            return Ok(Outcome::Vacuous);
        }
    }
    if !a.is_connected(fine)? {
        return Ok(Outcome::Vacuous);
    }
    verdict(a.is_connected(coarse)?, || {
        format!("τ2 is connected, τ1 ⊆ τ2 has {} opens and is not", coarse.len())
    })
}

fn thm_components(i: &Instance, env: &Env) -> Result<Outcome> {
    let a = &env.alg;
    let s = &i.spaces[0];
    let ctx = s.context();
    let part = s.components(&env.limits)?;
    for (k, c) in part.classes.iter().enumerate() {
        for d in &part.classes[k + 1..] {
            if c.bits() & d.bits() != 0 {
                return Ok(Outcome::Fails(format!("classes {c} and {d} overlap")));
            }
        }
        if c.bits() & part.orphans.bits() != 0 {
            return Ok(Outcome::Fails(format!("class {c} contains an orphan")));
        }
        if !a.subspace_connected(s, c)? {
            return Ok(Outcome::Fails(format!("class {c} is not connected")));
        }
    }
    for bits in 1..(1u64 << ctx.n_points()) {
        let y = PointSet::from_bits(ctx, bits)?;
        if !a.subspace_connected(s, &y)? {
            continue;
        }
        let holders = part
            .classes
            .iter()
            .filter(|c| bits & !c.bits() == 0)
            .count();
        if holders != 1 {
            return Ok(Outcome::Fails(format!(
                "connected subspace {y} lies in {holders} classes"
            )));
        }
    }
    Ok(Outcome::Holds)
}

fn prop_babak_i(i: &Instance, env: &Env) -> Result<Outcome> {
    let a = &env.alg;
    let f = mapping(i);
    let (g, h) = (&i.sets[0], &i.sets[1]);
    let lhs = a.preimage(f, &a.union(g, h)?)?;
    let rhs = a.union(&a.preimage(f, g)?, &a.preimage(f, h)?)?;
    verdict(lhs == rhs, || {
        format!("f⁻¹(G ∪ H) = {lhs} but f⁻¹(G) ∪ f⁻¹(H) = {rhs} for G = {g}, H = {h}")
    })
}

fn prop_babak_ii(i: &Instance, env: &Env) -> Result<Outcome> {
    let f = mapping(i);
    let lhs = env.alg.preimage(f, &SoftSet::absolute(f.target()))?;
    verdict(lhs.is_absolute(), || format!("f⁻¹(Ṽ) = {lhs}"))
}

fn prop_babak_iii(i: &Instance, env: &Env) -> Result<Outcome> {
    let a = &env.alg;
    let f = mapping(i);
    let (p, q) = (&i.sets[0], &i.sets[1]);
    let lhs = a.image(f, &a.intersect(p, q)?)?;
    let rhs = a.intersect(&a.image(f, p)?, &a.image(f, q)?)?;
    verdict(a.is_subset(&lhs, &rhs)?, || {
        format!("f(F ∩ G) = {lhs} is not inside f(F) ∩ f(G) = {rhs} for F = {p}, G = {q}")
    })
}

fn prop_babak_iv(i: &Instance, env: &Env) -> Result<Outcome> {
    let a = &env.alg;
    let f = mapping(i);
    let (g, h) = (&i.sets[0], &i.sets[1]);
    let lhs = a.preimage(f, &a.intersect(g, h)?)?;
    let rhs = a.intersect(&a.preimage(f, g)?, &a.preimage(f, h)?)?;
    verdict(lhs == rhs, || {
        format!("f⁻¹(G ∩ H) = {lhs} but f⁻¹(G) ∩ f⁻¹(H) = {rhs} for G = {g}, H = {h}")
    })
}

fn prop_babak_v(i: &Instance, env: &Env) -> Result<Outcome> {
    let f = mapping(i);
    let lhs = env.alg.preimage(f, &SoftSet::null(f.target()))?;
    verdict(lhs.is_null(), || format!("f⁻¹(Φ) = {lhs}"))
}

fn prop_8(i: &Instance, env: &Env) -> Result<Outcome> {
    let a = &env.alg;
    let f = mapping(i);
    let lhs = a.preimage(f, &a.family_union(f.target(), &i.sets)?)?;
    let parts = i
        .sets
        .iter()
        .map(|g| a.preimage(f, g))
        .collect::<Result<Vec<_>>>()?;
    let rhs = a.family_union(f.source(), &parts)?;
    verdict(lhs == rhs, || format!("f⁻¹(∪Gᵢ) = {lhs} but ∪f⁻¹(Gᵢ) = {rhs}"))
}

fn lemma_basis_cont(i: &Instance, env: &Env) -> Result<Outcome> {
    let a = &env.alg;
    let f = mapping(i);
    let (src, dst) = (&i.spaces[0], &i.spaces[1]);
    let basis = dst.minimal_basis();
    let open_preimages = |family: &[SoftSet]| -> Result<bool> {
        for g in family {
            if !src.is_open(&a.preimage(f, g)?)? {
                return Ok(false);
            }
        }
        Ok(true)
    };
    let full = open_preimages(dst.opens())?;
    let via_basis = open_preimages(&basis)?;
    let lib_full = f.is_pu_continuous(src, dst)?;
    let lib_basis = f.is_pu_continuous_via_basis(src, dst, &basis)?;
    verdict(full == via_basis && lib_full == lib_basis && full == lib_full, || {
        format!(
            "all opens: {full}, basis of {} sets: {via_basis} \
             (library: {lib_full} vs {lib_basis})",
            basis.len()
        )
    })
}

fn thm_cont_image(i: &Instance, _env: &Env) -> Result<Outcome> {
    let f = mapping(i);
    let (src, dst) = (&i.spaces[0], &i.spaces[1]);
    if !f.is_surjective() || !f.is_pu_continuous(src, dst)? || !src.is_connected() {
        return Ok(Outcome::Vacuous);
    }
    verdict(dst.is_connected(), || {
        let sep = dst.find_separation().expect("disconnected");
        format!("image space splits as ({}, {})", sep.left, sep.right)
    })
}

fn prop_babak1_i(i: &Instance, env: &Env) -> Result<Outcome> {
    let pc = product_ctx(i)?;
    let (f, g) = (&i.sets[0], &i.sets[1]);
    let left = env.alg.product(&pc, &SoftSet::null(pc.left()), g)?;
    let right = env.alg.product(&pc, f, &SoftSet::null(pc.right()))?;
    verdict(left.is_null() && right.is_null(), || {
        format!("Φ × G = {left}, F × Φ = {right}")
    })
}

fn prop_babak1_ii(i: &Instance, env: &Env) -> Result<Outcome> {
    let a = &env.alg;
    let pc = product_ctx(i)?;
    let (f1, g1, f2, g2) = (&i.sets[0], &i.sets[1], &i.sets[2], &i.sets[3]);
    let lhs = a.intersect(&a.product(&pc, f1, f2)?, &a.product(&pc, g1, g2)?)?;
    let rhs = a.product(&pc, &a.intersect(f1, g1)?, &a.intersect(f2, g2)?)?;
    verdict(lhs == rhs, || {
        format!("(F1×F2) ∩ (G1×G2) = {lhs} but (F1∩G1) × (F2∩G2) = {rhs}")
    })
}

fn prop_prod_topology(i: &Instance, env: &Env) -> Result<Outcome> {
    let (s1, s2) = (&i.spaces[0], &i.spaces[1]);
    if s1.len() > env.limits.max_factor_opens || s2.len() > env.limits.max_factor_opens {
        return Ok(Outcome::Skipped);
    }
    let pc = product_ctx(i)?;
    let mut basis = BTreeSet::new();
    for f in s1.opens() {
        for g in s2.opens() {
            basis.insert(env.alg.product(&pc, f, g)?);
        }
    }
    let basis: Vec<SoftSet> = basis.into_iter().collect();
    let space = SoftSpace::generate_unions(pc.context(), &basis, &env.limits)?;
    let violations = space.validate();
    let library = pc.topology(s1, s2, &env.limits);
    verdict(violations.is_empty() && library.is_ok(), || match violations.first() {
        Some(v) => format!("union closure of the rectangles is not a topology: {v}"),
        None => format!("library product failed: {}", library.unwrap_err()),
    })
}

fn prop_babak2(i: &Instance, env: &Env) -> Result<Outcome> {
    let a = &env.alg;
    let pc = product_ctx(i)?;
    let (f, g) = (&i.sets[0], &i.sets[1]);
    let lhs = a.complement(&a.product(&pc, f, g)?);
    let rhs = a.union(
        &a.product(&pc, &a.complement(f), &SoftSet::absolute(pc.right()))?,
        &a.product(&pc, &SoftSet::absolute(pc.left()), &a.complement(g))?,
    )?;
    verdict(lhs == rhs, || {
        format!("(F×G)' = {lhs} but (F'×Ỹ) ∪ (X̃×G') = {rhs} for F = {f}, G = {g}")
    })
}

fn cor_closed_prod(i: &Instance, env: &Env) -> Result<Outcome> {
    let (s1, s2) = (&i.spaces[0], &i.spaces[1]);
    let (f, g) = (&i.sets[0], &i.sets[1]);
    if !s1.is_closed(f)? || !s2.is_closed(g)? {
        return Ok(Outcome::Vacuous);
    }
    let pc = product_ctx(i)?;
    let space = pc.topology(s1, s2, &env.limits)?;
    let rect = env.alg.product(&pc, f, g)?;
    verdict(space.is_open(&env.alg.complement(&rect))?, || {
        format!("F × G = {rect} is not closed for closed F = {f}, G = {g}")
    })
}

fn prop_10(i: &Instance, env: &Env) -> Result<Outcome> {
    let a = &env.alg;
    let pc = product_ctx(i)?;
    let (f, g) = (&i.sets[0], &i.sets[1]);
    let rect = a.product(&pc, f, g)?;
    let m = env.membership;
    for x in 0..pc.left().n_points() {
        for y in 0..pc.right().n_points() {
            let lhs = a.contains(&rect, pc.pair_point(x, y), m);
            let rhs = a.contains(f, x, m) && a.contains(g, y, m);
            if lhs != rhs {
                return Ok(Outcome::Fails(format!(
                    "({},{}) ∈ F × G is {lhs} but membership in the factors gives {rhs}",
                    pc.left().point_name(x),
                    pc.right().point_name(y)
                )));
            }
        }
    }
    Ok(Outcome::Holds)
}

fn prop_prod_hausdorff(i: &Instance, env: &Env) -> Result<Outcome> {
    let (s1, s2) = (&i.spaces[0], &i.spaces[1]);
    let m = env.membership;
    if s1.hausdorff_violation_with(m).is_some() || s2.hausdorff_violation_with(m).is_some() {
        return Ok(Outcome::Vacuous);
    }
    let pc = product_ctx(i)?;
    let space = pc.topology(s1, s2, &env.limits)?;
    match space.hausdorff_violation_with(m) {
        None => Ok(Outcome::Holds),
        Some((x, y)) => Ok(Outcome::Fails(format!(
            "product points {} and {} have no disjoint neighbourhoods",
            pc.context().point_name(x),
            pc.context().point_name(y)
        ))),
    }
}

fn thm_prod_connected(i: &Instance, env: &Env) -> Result<Outcome> {
    let (s1, s2) = (&i.spaces[0], &i.spaces[1]);
    if !s1.is_connected() || !s2.is_connected() {
        return Ok(Outcome::Vacuous);
    }
    let pc = product_ctx(i)?;
    let space = pc.topology(s1, s2, &env.limits)?;
    verdict(space.is_connected_clopen(), || {
        let c = space
            .clopens()
            .into_iter()
            .find(|c| !c.is_null() && !c.is_absolute())
            .expect("disconnected");
        format!("product has the non-trivial clopen {c}")
    })
}

fn thm_union(i: &Instance, _env: &Env) -> Result<Outcome> {
    let s = &i.spaces[0];
    let common = i.carriers.iter().fold(u64::MAX, |acc, y| acc & y.bits());
    if common == 0 {
        return Ok(Outcome::Vacuous);
    }
    for y in &i.carriers {
        if !s.is_connected_subspace(y)? {
            return Ok(Outcome::Vacuous);
        }
    }
    let union = i
        .carriers
        .iter()
        .try_fold(PointSet::empty(s.context()), |acc, y| acc.union(y))?;
    verdict(s.is_connected_subspace(&union)?, || {
        format!("union {union} of connected subspaces with a common point is disconnected")
    })
}

fn thm_9(i: &Instance, env: &Env) -> Result<Outcome> {
    let s = &i.spaces[0];
    let ctx = s.context();
    let local = s.local_connectedness_with(env.membership)?;
    let locally_connected = local.iter().all(|&ok| ok);
    let table = s.connectivity_table(&env.limits)?;
    let mut open_components = true;
    let mut witness = String::new();
    'carriers: for bits in 1..(1u64 << ctx.n_points()) {
        let y = PointSet::from_bits(ctx, bits)?;
        if !s.is_open(&SoftSet::crisp_lift(&y))? {
            continue;
        }
        for c in table.components_within(&y).classes {
            if !s.is_open(&SoftSet::crisp_lift(&c))? {
                open_components = false;
                witness = format!("component {c} of open {y} is not open");
                break 'carriers;
            }
        }
    }
    verdict(locally_connected == open_components, || {
        if locally_connected {
            format!("locally connected, but {witness}")
        } else {
            let x = local.iter().position(|&ok| !ok).unwrap_or(0);
            format!(
                "components of open subspaces are open, but the space is not locally \
                 connected at {}",
                ctx.point_name(x)
            )
        }
    })
}

fn thm_weak_local(i: &Instance, env: &Env) -> Result<Outcome> {
    let s = &i.spaces[0];
    let weak = s.weak_local_connectedness_with(env.membership, &env.limits)?;
    if !weak.iter().all(|&ok| ok) {
        return Ok(Outcome::Vacuous);
    }
    let local = s.local_connectedness_with(env.membership)?;
    match local.iter().position(|&ok| !ok) {
        None => Ok(Outcome::Holds),
        Some(x) => Ok(Outcome::Fails(format!(
            "weakly locally connected, not locally connected at {}",
            s.context().point_name(x)
        ))),
    }
}

use Slot::{Carrier, Map, Set, Space};

const CORE: &[&str] = &["core-laws"];
const TOPO: &[&str] = &["topology"];
const MAP: &[&str] = &["mapping"];
const PROD: &[&str] = &["product"];

macro_rules! thm {
    ($id:expr, $tier:ident, $groups:expr, $claim:expr, $slots:expr, $check:expr) => {
        thm!($id, $tier, $groups, $claim, $slots, $check, None, false, false)
    };
    ($id:expr, $tier:ident, $groups:expr, $claim:expr, $slots:expr, $check:expr,
     $sampler:expr, $retry:expr, $factors:expr) => {
        Theorem {
            id: $id,
            tier: Tier::$tier,
            groups: $groups,
            claim: $claim,
            slots: $slots,
            sampler: $sampler,
            retry_vacuous: $retry,
            factors: $factors,
            check: $check,
        }
    };
}

pub static THEOREMS: &[Theorem] = &[
    thm!("prop-1-i", Law, CORE, "F ∪ F' = X̃", &[Set(0)], prop_1_i),
    thm!("prop-1-ii", Law, CORE, "F ∩ F' = Φ", &[Set(0)], prop_1_ii),
    thm!("prop-1-iii", Law, CORE, "F ∩ X̃ = F", &[Set(0)], prop_1_iii),
    thm!(
        "prop-6-i",
        Law,
        CORE,
        "F ∩ (G ∪ H) = (F ∩ G) ∪ (F ∩ H)",
        &[Set(0), Set(0), Set(0)],
        prop_6_i
    ),
    thm!("prop-6-ii", Law, CORE, "F ⊆ G iff F ∩ G = F", &[Set(0), Set(0)], prop_6_ii),
    thm!(
        "prop-7-i",
        Law,
        CORE,
        "intersection is associative",
        &[Set(0), Set(0), Set(0)],
        prop_7_i
    ),
    thm!(
        "prop-7-ii",
        Law,
        CORE,
        "union is associative",
        &[Set(0), Set(0), Set(0)],
        prop_7_ii
    ),
    thm!(
        "prop-3-i",
        Law,
        CORE,
        "intersection distributes over a finite family union",
        &[Set(0), Set(0), Set(0), Set(0)],
        prop_3_i
    ),
    thm!(
        "prop-3-ii",
        Law,
        CORE,
        "both operands lie inside their union",
        &[Set(0), Set(0)],
        prop_3_ii
    ),
    thm!(
        "thm-clopen",
        Law,
        TOPO,
        "connected iff only Φ and X̃ are clopen",
        &[Space(0)],
        thm_clopen
    ),
    thm!(
        "prop-babak-i",
        Law,
        MAP,
        "preimage preserves binary unions",
        &[Map, Set(1), Set(1)],
        prop_babak_i
    ),
    thm!("prop-babak-ii", Law, MAP, "preimage of Ṽ is Ũ", &[Map], prop_babak_ii),
    thm!(
        "prop-babak-iii",
        Law,
        MAP,
        "f(F ∩ G) ⊆ f(F) ∩ f(G)",
        &[Map, Set(0), Set(0)],
        prop_babak_iii
    ),
    thm!(
        "prop-babak-iv",
        Law,
        MAP,
        "preimage preserves binary intersections",
        &[Map, Set(1), Set(1)],
        prop_babak_iv
    ),
    thm!("prop-babak-v", Law, MAP, "preimage of Φ is Φ", &[Map], prop_babak_v),
    thm!(
        "prop-8",
        Law,
        MAP,
        "preimage preserves family unions",
        &[Map, Set(1), Set(1), Set(1)],
        prop_8
    ),
    thm!(
        "lemma-basis-cont",
        Law,
        MAP,
        "continuity can be decided on a basis",
        &[Space(0), Space(1), Map],
        lemma_basis_cont,
        Some(sample_basis_cont),
        false,
        false
    ),
    thm!(
        "thm-cont-image",
        Conjecture,
        MAP,
        "a continuous onto image of a connected space is connected",
        &[Space(0), Space(1), Map],
        thm_cont_image,
        Some(sample_cont_image),
        true,
        false
    ),
    thm!(
        "prop-4",
        Law,
        TOPO,
        "a connected subspace lies on one side of a separation",
        &[Space(0), Carrier(0)],
        prop_4,
        Some(sample_prop_4),
        true,
        false
    ),
    thm!(
        "lemma-5",
        Law,
        TOPO,
        "relative topologies compose",
        &[Space(0), Carrier(0), Carrier(0)],
        lemma_5
    ),
    thm!(
        "thm-union",
        Conjecture,
        TOPO,
        "connected subspaces with a common point have a connected union",
        &[Space(0), Carrier(0), Carrier(0), Carrier(0)],
        thm_union,
        Some(sample_union),
        true,
        false
    ),
    thm!(
        "prop-babak1-i",
        Law,
        PROD,
        "Φ × G = F × Φ = Φ",
        &[Set(0), Set(1)],
        prop_babak1_i
    ),
    thm!(
        "prop-babak1-ii",
        Law,
        PROD,
        "rectangles intersect componentwise",
        &[Set(0), Set(0), Set(1), Set(1)],
        prop_babak1_ii
    ),
    thm!(
        "prop-prod-topology",
        Law,
        PROD,
        "unions of open rectangles form a topology",
        &[Space(0), Space(1)],
        prop_prod_topology,
        None,
        false,
        true
    ),
    thm!(
        "prop-babak2",
        Law,
        PROD,
        "(F × G)' = (F' × Ỹ) ∪ (X̃ × G')",
        &[Set(0), Set(1)],
        prop_babak2
    ),
    thm!(
        "cor-closed-prod",
        Law,
        PROD,
        "a product of closed sets is closed",
        &[Space(0), Space(1), Set(0), Set(1)],
        cor_closed_prod,
        Some(sample_closed_prod),
        true,
        true
    ),
    thm!(
        "prop-10",
        Law,
        PROD,
        "(x,y) ∈ F × G iff x ∈ F and y ∈ G",
        &[Set(0), Set(1)],
        prop_10
    ),
    thm!(
        "prop-prod-hausdorff",
        Conjecture,
        PROD,
        "a product of Hausdorff spaces is Hausdorff",
        &[Space(0), Space(1)],
        prop_prod_hausdorff,
        Some(sample_prod_hausdorff),
        true,
        true
    ),
    thm!(
        "thm-prod-connected",
        Conjecture,
        PROD,
        "a product of connected spaces is connected",
        &[Space(0), Space(1)],
        thm_prod_connected,
        None,
        true,
        true
    ),
    thm!(
        "prop-coarser-connected",
        Law,
        TOPO,
        "a topology coarser than a connected one is connected",
        &[Space(0), Space(0)],
        coarser_connected,
        Some(sample_coarser),
        true,
        false
    ),
    thm!(
        "thm-components",
        Law,
        &["topology", "components"],
        "components are disjoint, connected, and absorb every connected subspace",
        &[Space(0)],
        thm_components
    ),
    thm!(
        "thm-9",
        Conjecture,
        &["topology", "components"],
        "locally connected iff components of open subspaces are open",
        &[Space(0)],
        thm_9
    ),
    thm!(
        "thm-weak-local",
        Conjecture,
        TOPO,
        "weakly locally connected implies locally connected",
        &[Space(0)],
        thm_weak_local,
        None,
        true,
        false
    ),
];
