//! Theorem instances, their JSON form, and greedy shrinking.

use std::collections::HashSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::context::{bits, Context, PointSet};
use crate::document::{set_from_document, set_to_document, SetDocument, SpaceDocument};
use crate::error::{Error, Result};
use crate::mapping::SoftMapping;
use crate::soft_set::SoftSet;
use crate::topology::SoftSpace;

/// Everything a check reads. Every set, carrier and mapping end lives in
/// the context of one of `spaces`; slots a theorem does not use as a
/// topology hold the indiscrete space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub spaces: Vec<SoftSpace>,
    pub sets: Vec<SoftSet>,
    pub carriers: Vec<PointSet>,
    pub mapping: Option<SoftMapping>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetEntry {
    /// Index of the space whose context the set lives in.
    pub space: usize,
    pub set: SetDocument,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CarrierEntry {
    pub space: usize,
    pub points: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MappingEntry {
    pub source: usize,
    pub target: usize,
    pub u: Vec<(String, String)>,
    pub p: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDocument {
    pub spaces: Vec<SpaceDocument>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sets: Vec<SetEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub carriers: Vec<CarrierEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mapping: Option<MappingEntry>,
}

/// A counterexample as stored on disk.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Witness {
    pub theorem: String,
    pub instance: InstanceDocument,
}

impl Witness {
    pub fn parse(text: &str) -> Result<Witness> {
        serde_json::from_str(text).map_err(|e| Error::Document(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("witness serializes");
        let mut out = serde_json::to_string_pretty(&value).expect("witness serializes");
        out.push('\n');
        out
    }
}

impl Instance {
    /// Distinct contexts in order of first appearance among `spaces`.
    pub fn contexts(&self) -> Vec<Arc<Context>> {
        let mut out: Vec<Arc<Context>> = Vec::new();
        for s in &self.spaces {
            if !out.iter().any(|c| Arc::ptr_eq(c, s.context())) {
                out.push(s.context().clone());
            }
        }
        out
    }

    fn space_of(&self, ctx: &Arc<Context>) -> usize {
        self.spaces
            .iter()
            .position(|s| Arc::ptr_eq(s.context(), ctx))
            .expect("every context belongs to a space")
    }

    pub fn to_document(&self) -> InstanceDocument {
        let mapping = self.mapping.as_ref().map(|f| {
            let (s, t) = (f.source(), f.target());
            MappingEntry {
                source: self.space_of(s),
                target: self.space_of(t),
                u: f.point_map()
                    .iter()
                    .enumerate()
                    .map(|(x, &v)| (s.point_name(x).into(), t.point_name(v).into()))
                    .collect(),
                p: f.param_map()
                    .iter()
                    .enumerate()
                    .map(|(a, &b)| (s.param_name(a).into(), t.param_name(b).into()))
                    .collect(),
            }
        });
        InstanceDocument {
            spaces: self.spaces.iter().map(SpaceDocument::from_space).collect(),
            sets: self
                .sets
                .iter()
                .map(|f| SetEntry {
                    space: self.space_of(f.context()),
                    set: set_to_document(f),
                })
                .collect(),
            carriers: self
                .carriers
                .iter()
                .map(|y| CarrierEntry {
                    space: self.space_of(y.context()),
                    points: y.names(),
                })
                .collect(),
            mapping,
        }
    }

    /// Rebuild an instance; structurally equal contexts are shared.
    pub fn from_document(doc: &InstanceDocument) -> Result<Instance> {
        let mut contexts: Vec<Arc<Context>> = Vec::new();
        let mut spaces = Vec::new();
        for sd in &doc.spaces {
            let parsed = sd.space()?;
            let ctx = match contexts.iter().find(|c| ***c == **parsed.context()) {
                Some(c) => c.clone(),
                None => {
                    contexts.push(parsed.context().clone());
                    parsed.context().clone()
                }
            };
            spaces.push(SoftSpace::from_opens(&ctx, parsed.opens().to_vec())?);
        }
        let ctx_of = |i: usize| -> Result<Arc<Context>> {
            spaces
                .get(i)
                .map(|s: &SoftSpace| s.context().clone())
                .ok_or_else(|| Error::Document(format!("no space #{i}")))
        };
        let sets = doc
            .sets
            .iter()
            .map(|e| set_from_document(&ctx_of(e.space)?, &e.set))
            .collect::<Result<Vec<_>>>()?;
        let carriers = doc
            .carriers
            .iter()
            .map(|e| PointSet::from_names(&ctx_of(e.space)?, &e.points))
            .collect::<Result<Vec<_>>>()?;
        let mapping = match &doc.mapping {
            None => None,
            Some(m) => Some(SoftMapping::from_names(
                &ctx_of(m.source)?,
                &ctx_of(m.target)?,
                &m.u,
                &m.p,
            )?),
        };
        Ok(Instance {
            spaces,
            sets,
            carriers,
            mapping,
        })
    }

    /// Total size used to order witnesses: points, then parameters, then
    /// opens.
    pub fn size(&self) -> (usize, usize, usize) {
        let ctxs = self.contexts();
        (
            ctxs.iter().map(|c| c.n_points()).sum(),
            ctxs.iter().map(|c| c.n_params()).sum(),
            self.spaces.iter().map(|s| s.len()).sum(),
        )
    }

    /// Drop points and parameters. `keep[c]` lists the kept point mask and
    /// parameter mask of context `c`. Source entries whose image is dropped
    /// are dropped too. Returns `None` when a context would become empty.
    fn reduce(&self, mut keep: Vec<(u64, u64)>) -> Option<Instance> {
        let ctxs = self.contexts();
        let index = |ctx: &Arc<Context>| ctxs.iter().position(|c| Arc::ptr_eq(c, ctx)).unwrap();
        if let Some(f) = &self.mapping {
            let (si, ti) = (index(f.source()), index(f.target()));
            if si != ti {
                for (x, &v) in f.point_map().iter().enumerate() {
                    if keep[ti].0 & (1 << v) == 0 {
                        keep[si].0 &= !(1 << x);
                    }
                }
                for (a, &b) in f.param_map().iter().enumerate() {
                    if keep[ti].1 & (1 << b) == 0 {
                        keep[si].1 &= !(1 << a);
                    }
                }
            }
        }
        let mut new_ctxs = Vec::with_capacity(ctxs.len());
        for (c, &(pk, ek)) in ctxs.iter().zip(&keep) {
            if pk == 0 || ek == 0 {
                return None;
            }
            let points = bits(pk).map(|x| c.point_name(x).to_string());
            let params = bits(ek).map(|e| c.param_name(e).to_string());
            new_ctxs.push(Context::new(points, params).ok()?);
        }
        let squeeze = |row: u64, mask: u64| -> u64 {
            bits(mask)
                .enumerate()
                .filter(|&(_, x)| row & (1 << x) != 0)
                .fold(0, |acc, (k, _)| acc | 1 << k)
        };
        let new_index = |mask: u64, x: usize| (mask & ((1u64 << x) - 1)).count_ones() as usize;
        let move_set = |f: &SoftSet| -> SoftSet {
            let c = index(f.context());
            let (pk, ek) = keep[c];
            let rows: Vec<u64> = bits(ek).map(|e| squeeze(f.row(e), pk)).collect();
            SoftSet::from_rows_unchecked(&new_ctxs[c], rows.into())
        };
        let spaces = self
            .spaces
            .iter()
            .map(|s| {
                let c = index(s.context());
                let mut seen = HashSet::new();
                let rows: Vec<Box<[u64]>> = s
                    .opens()
                    .iter()
                    .map(|f| Box::<[u64]>::from(move_set(f).rows()))
                    .filter(|r| seen.insert(r.clone()))
                    .collect();
                SoftSpace::from_rows_trusted(&new_ctxs[c], rows)
            })
            .collect();
        let sets = self.sets.iter().map(move_set).collect();
        let carriers = self
            .carriers
            .iter()
            .map(|y| {
                let c = index(y.context());
                PointSet::from_bits(&new_ctxs[c], squeeze(y.bits(), keep[c].0))
                    .expect("squeezed into range")
            })
            .collect();
        let mapping = self.mapping.as_ref().map(|f| {
            let (si, ti) = (index(f.source()), index(f.target()));
            let u = bits(keep[si].0)
                .map(|x| new_index(keep[ti].0, f.point_map()[x]))
                .collect();
            let p = bits(keep[si].1)
                .map(|a| new_index(keep[ti].1, f.param_map()[a]))
                .collect();
            SoftMapping::new(&new_ctxs[si], &new_ctxs[ti], u, p).expect("kept images survive")
        });
        Some(Instance {
            spaces,
            sets,
            carriers,
            mapping,
        })
    }

    /// One-step reductions in shrink order: single points, then single
    /// parameters, then single opens (only where the family stays a
    /// topology).
    pub fn shrink_candidates(&self) -> Vec<Instance> {
        let ctxs = self.contexts();
        let full: Vec<(u64, u64)> = ctxs
            .iter()
            .map(|c| (c.full_row(), (1u64 << c.n_params()) - 1))
            .collect();
        let mut out = Vec::new();
        for (c, ctx) in ctxs.iter().enumerate() {
            for x in 0..ctx.n_points() {
                let mut keep = full.clone();
                keep[c].0 &= !(1 << x);
                out.extend(self.reduce(keep));
            }
        }
        for (c, ctx) in ctxs.iter().enumerate() {
            for e in 0..ctx.n_params() {
                let mut keep = full.clone();
                keep[c].1 &= !(1 << e);
                out.extend(self.reduce(keep));
            }
        }
        for (i, s) in self.spaces.iter().enumerate() {
            for j in 0..s.len() {
                let f = &s.opens()[j];
                if f.is_null() || f.is_absolute() {
                    continue;
                }
                let mut opens = s.opens().to_vec();
                opens.remove(j);
                let Ok(smaller) = SoftSpace::from_opens(s.context(), opens) else {
                    continue;
                };
                if smaller.validate().is_empty() {
                    let mut next = self.clone();
                    next.spaces[i] = smaller;
                    out.push(next);
                }
            }
        }
        out
    }

    /// Greedy shrink: take the first candidate that still fails, repeat
    /// until none does.
    pub fn shrink(&self, fails: impl Fn(&Instance) -> bool) -> Instance {
        let mut current = self.clone();
        'outer: loop {
            for cand in current.shrink_candidates() {
                if fails(&cand) {
                    current = cand;
                    continue 'outer;
                }
            }
            return current;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::gen::named_context;

    fn sample() -> Instance {
        let u = named_context(0, 3, 2).unwrap();
        let v = named_context(1, 2, 2).unwrap();
        let f = SoftMapping::new(&u, &v, vec![0, 1, 1], vec![1, 0]).unwrap();
        let a = SoftSet::from_rows(&u, vec![0b011, 0b110]).unwrap();
        let b = SoftSet::from_rows(&v, vec![0b01, 0b10]).unwrap();
        let su = SoftSpace::generate(&u, std::slice::from_ref(&a), &Default::default()).unwrap();
        Instance {
            spaces: vec![su, SoftSpace::indiscrete(&v)],
            sets: vec![a, b],
            carriers: vec![PointSet::from_bits(&u, 0b101).unwrap()],
            mapping: Some(f),
        }
    }

    #[test]
    fn document_round_trip() {
        let inst = sample();
        let doc = inst.to_document();
        let w = Witness {
            theorem: "t".into(),
            instance: doc.clone(),
        };
        let back = Witness::parse(&w.to_json()).unwrap();
        assert_eq!(back, w);
        assert_eq!(Instance::from_document(&back.instance).unwrap(), inst);
    }

    #[test]
    fn dropping_a_target_point_drops_its_fiber() {
        let inst = sample();
        let mut keep = vec![(0b111, 0b11), (0b01, 0b11)];
        let r = inst.reduce(keep.clone()).unwrap();
        assert_eq!(r.contexts()[0].points(), &["x0".to_string()]);
        assert_eq!(r.mapping.as_ref().unwrap().point_map(), &[0]);
        assert!(r.spaces.iter().all(|s| s.validate().is_empty()));
        keep[1].0 = 0b10;
        keep[0].0 = 0b001;
        assert!(inst.reduce(keep).is_none());
    }

    #[test]
    fn reductions_keep_topologies_valid() {
        let inst = sample();
        for cand in inst.shrink_candidates() {
            for s in &cand.spaces {
                assert!(s.validate().is_empty());
            }
            assert!(cand.size() < inst.size());
        }
    }

    #[test]
    fn shrink_reaches_a_fixpoint() {
        let inst = sample();
        let small = inst.shrink(|i| i.contexts()[0].n_points() >= 1);
        assert_eq!(small.size().0, 2);
        assert_eq!(small.shrink(|i| i.contexts()[0].n_points() >= 1), small);
    }
}
