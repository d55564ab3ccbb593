//! The operations the law checks are phrased in, with optional seeded
//! mutants so the checks themselves can be tested.

use std::collections::BTreeSet;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::context::{Context, PointSet};
use crate::error::Result;
use crate::mapping::SoftMapping;
use crate::product::ProductContext;
use crate::soft_set::{Membership, SoftSet};
use crate::topology::SoftSpace;

/// A deliberate defect in one operation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mutant {
    ComplementDropsElement,
    ComplementAddsElement,
    UnionDropsElement,
    IntersectDropsElement,
    SubsetStrict,
    SubsetFirstRowOnly,
    RestrictDropsElement,
    CrispLiftFillsFirstRow,
    PreimageDropsElement,
    PreimageAddsElement,
    ImageXorsFiber,
    ProductDropsElement,
    ProductAddsCorner,
    ContainsSkipsLastParam,
}

impl Mutant {
    pub const ALL: [Mutant; 14] = [
        Mutant::ComplementDropsElement,
        Mutant::ComplementAddsElement,
        Mutant::UnionDropsElement,
        Mutant::IntersectDropsElement,
        Mutant::SubsetStrict,
        Mutant::SubsetFirstRowOnly,
        Mutant::RestrictDropsElement,
        Mutant::CrispLiftFillsFirstRow,
        Mutant::PreimageDropsElement,
        Mutant::PreimageAddsElement,
        Mutant::ImageXorsFiber,
        Mutant::ProductDropsElement,
        Mutant::ProductAddsCorner,
        Mutant::ContainsSkipsLastParam,
    ];

    pub fn name(self) -> String {
        serde_json::to_value(self)
            .ok()
            .and_then(|v| v.as_str().map(str::to_string))
            .unwrap_or_default()
    }
}

impl FromStr for Mutant {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        serde_json::from_value(serde_json::Value::String(s.to_string()))
            .map_err(|_| format!("unknown mutant `{s}`"))
    }
}

/// Clear the lowest bit of the first non-empty row.
fn drop_element(f: &SoftSet) -> SoftSet {
    let mut done = false;
    f.map_rows(|r| {
        if !done && r != 0 {
            done = true;
            r & (r - 1)
        } else {
            r
        }
    })
}

fn set_lowest(f: &SoftSet) -> SoftSet {
    let mut first = true;
    f.map_rows(|r| {
        let out = if first { r | 1 } else { r };
        first = false;
        out
    })
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Alg {
    mutant: Option<Mutant>,
}

impl Alg {
    pub fn new(mutant: Option<Mutant>) -> Alg {
        Alg { mutant }
    }

    pub fn mutant(&self) -> Option<Mutant> {
        self.mutant
    }

    fn is(&self, m: Mutant) -> bool {
        self.mutant == Some(m)
    }

    pub fn complement(&self, f: &SoftSet) -> SoftSet {
        let c = f.complement();
        match self.mutant {
            Some(Mutant::ComplementDropsElement) => drop_element(&c),
            Some(Mutant::ComplementAddsElement) => set_lowest(&c),
            _ => c,
        }
    }

    pub fn union(&self, f: &SoftSet, g: &SoftSet) -> Result<SoftSet> {
        let u = f.union(g)?;
        Ok(if self.is(Mutant::UnionDropsElement) {
            drop_element(&u)
        } else {
            u
        })
    }

    pub fn intersect(&self, f: &SoftSet, g: &SoftSet) -> Result<SoftSet> {
        let i = f.intersect(g)?;
        Ok(if self.is(Mutant::IntersectDropsElement) {
            drop_element(&i)
        } else {
            i
        })
    }

    pub fn is_subset(&self, f: &SoftSet, g: &SoftSet) -> Result<bool> {
        let sub = f.is_subset(g)?;
        Ok(match self.mutant {
            Some(Mutant::SubsetStrict) => sub && f != g,
            Some(Mutant::SubsetFirstRowOnly) => f.row(0) & !g.row(0) == 0,
            _ => sub,
        })
    }

    pub fn restrict(&self, f: &SoftSet, y: &PointSet) -> Result<SoftSet> {
        let r = f.restrict(y)?;
        Ok(if self.is(Mutant::RestrictDropsElement) {
            drop_element(&r)
        } else {
            r
        })
    }

    pub fn crisp_lift(&self, y: &PointSet) -> SoftSet {
        let lift = SoftSet::crisp_lift(y);
        if self.is(Mutant::CrispLiftFillsFirstRow) {
            let full = y.context().full_row();
            let mut first = true;
            lift.map_rows(|r| {
                let out = if first { full } else { r };
                first = false;
                out
            })
        } else {
            lift
        }
    }

    pub fn image(&self, m: &SoftMapping, f: &SoftSet) -> Result<SoftSet> {
        if !self.is(Mutant::ImageXorsFiber) {
            return m.image(f);
        }
        let target = m.target();
        let mut rows = vec![0u64; target.n_params()];
        for (a, &b) in m.param_map().iter().enumerate() {
            let mapped = crate::context::bits(f.row(a))
                .fold(0u64, |acc, x| acc | 1 << m.point_map()[x]);
            rows[b] ^= mapped;
        }
        SoftSet::from_rows(target, rows)
    }

    pub fn preimage(&self, m: &SoftMapping, g: &SoftSet) -> Result<SoftSet> {
        let p = m.preimage(g)?;
        Ok(match self.mutant {
            Some(Mutant::PreimageDropsElement) => drop_element(&p),
            Some(Mutant::PreimageAddsElement) => set_lowest(&p),
            _ => p,
        })
    }

    pub fn product(&self, pc: &ProductContext, f: &SoftSet, g: &SoftSet) -> Result<SoftSet> {
        let p = pc.soft_set(f, g)?;
        Ok(match self.mutant {
            Some(Mutant::ProductDropsElement) => drop_element(&p),
            Some(Mutant::ProductAddsCorner) => set_lowest(&p),
            _ => p,
        })
    }

    pub fn contains(&self, f: &SoftSet, x: usize, membership: Membership) -> bool {
        if self.is(Mutant::ContainsSkipsLastParam) && f.rows().len() > 1 {
            let rows = &f.rows()[..f.rows().len() - 1];
            return match membership {
                Membership::AllParams => rows.iter().all(|r| r & (1 << x) != 0),
                Membership::AnyParam => rows.iter().any(|r| r & (1 << x) != 0),
            };
        }
        f.contains_with(x, membership)
    }

    /// Union of a family, folded from `Φ_E`.
    pub fn family_union(&self, ctx: &std::sync::Arc<Context>, family: &[SoftSet]) -> Result<SoftSet> {
        family
            .iter()
            .try_fold(SoftSet::null(ctx), |acc, f| self.union(&acc, f))
    }

    /// Connectedness by the clopen route: no open other than `Φ_E` and `X̃`
    /// has an open complement.
    pub fn is_connected(&self, space: &SoftSpace) -> Result<bool> {
        for f in space.opens() {
            if f.is_null() || f.is_absolute() {
                continue;
            }
            if space.is_open(&self.complement(f))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Relative opens `F ∩ Ỹ`, deduplicated.
    pub fn traces(&self, space: &SoftSpace, y: &PointSet) -> Result<BTreeSet<SoftSet>> {
        space.opens().iter().map(|f| self.restrict(f, y)).collect()
    }

    /// Subspace connectedness by the literal pair scan over relative opens.
    pub fn subspace_connected(&self, space: &SoftSpace, y: &PointSet) -> Result<bool> {
        let whole = self.crisp_lift(y);
        let traces: Vec<SoftSet> = self.traces(space, y)?.into_iter().collect();
        for a in traces.iter().filter(|a| !a.is_null()) {
            for b in traces.iter().filter(|b| !b.is_null()) {
                if self.union(a, b)? == whole && self.intersect(a, b)?.is_null() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}
