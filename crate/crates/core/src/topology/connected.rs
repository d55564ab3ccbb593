//! Soft separations, relative topologies, and soft components.

use std::collections::HashSet;

use super::{Limits, SoftSpace};
use crate::context::{bits, ensure_same, PointSet};
use crate::error::{Error, Result};
use crate::soft_set::SoftSet;

/// A pair of non-null open sets that cover the (relative) absolute soft set
/// and meet in the (relative) null soft set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Separation {
    pub left: SoftSet,
    pub right: SoftSet,
}

impl Separation {
    /// Check the four defining conditions against the carrier `whole`.
    pub fn separates(&self, whole: &SoftSet) -> Result<bool> {
        Ok(!self.left.is_null()
            && !self.right.is_null()
            && self.left.union(&self.right)? == *whole
            && self.left.intersect(&self.right)?.is_null())
    }
}

/// First ordered pair `(F, G)` of `family` (in the given order) with both
/// non-null, `F ∪ G = whole` and `F ∩ G = Φ`.
fn first_separation(family: &[SoftSet], whole: &[u64]) -> Option<(usize, usize)> {
    let covers = |a: &[u64], b: &[u64]| {
        a.iter()
            .zip(b)
            .zip(whole)
            .all(|((x, y), w)| x | y == *w && x & y == 0)
    };
    for (i, f) in family.iter().enumerate() {
        if f.is_null() {
            continue;
        }
        for (j, g) in family.iter().enumerate() {
            if !g.is_null() && covers(f.rows(), g.rows()) {
                return Some((i, j));
            }
        }
    }
    None
}

impl SoftSpace {
    /// Lexicographically first soft separation of `X̃`, scanning ordered
    /// pairs of opens in canonical order. `None` exactly when the space is
    /// soft connected.
    pub fn find_separation(&self) -> Option<Separation> {
        let whole = SoftSet::absolute(self.context());
        first_separation(self.opens(), whole.rows()).map(|(i, j)| Separation {
            left: self.opens()[i].clone(),
            right: self.opens()[j].clone(),
        })
    }

    pub fn is_connected(&self) -> bool {
        self.find_separation().is_none()
    }

    /// Connectedness through clopen sets: no open other than `Φ_E` and `X̃`
    /// has an open complement.
    pub fn is_connected_clopen(&self) -> bool {
        self.opens().iter().all(|f| {
            f.is_null() || f.is_absolute() || !self.contains_rows(f.complement().rows())
        })
    }

    /// Non-trivial clopen sets, canonical order.
    pub fn clopens(&self) -> Vec<SoftSet> {
        self.opens()
            .iter()
            .filter(|f| {
                !f.is_null() && !f.is_absolute() && self.contains_rows(f.complement().rows())
            })
            .cloned()
            .collect()
    }

    /// The soft relative topology on a non-empty crisp `Y`.
    pub fn subspace(&self, y: &PointSet) -> Result<SubspaceView<'_>> {
        ensure_same(self.context(), y.context())?;
        if y.is_empty() {
            return Err(Error::EmptyCarrier);
        }
        Ok(SubspaceView::build(self, y.clone(), self.opens()))
    }

    /// Connectedness of `(Y, τ_Y, E)`, decided inside the relative topology.
    pub fn is_connected_subspace(&self, y: &PointSet) -> Result<bool> {
        Ok(self.subspace(y)?.is_connected())
    }

    /// Connectedness of `(Y, τ_Y, E)` decided with ambient opens only: no
    /// opens `A`, `B` with `Ỹ ⊆ A ∪ B`, `A ∩ B ∩ Ỹ = Φ` and both `A ∩ Ỹ`,
    /// `B ∩ Ỹ` non-null.
    pub fn is_connected_subspace_ambient(&self, y: &PointSet) -> Result<bool> {
        ensure_same(self.context(), y.context())?;
        if y.is_empty() {
            return Err(Error::EmptyCarrier);
        }
        self.soft_set_connected_by_pairs(&SoftSet::crisp_lift(y))
    }

    /// Connectedness of an arbitrary soft set `W` relative to the ambient
    /// opens: `W` is connected unless some trace `A ∩ W` other than `Φ` and
    /// `W` has its relative complement `W − (A ∩ W)` among the traces.
    pub fn soft_set_connected(&self, w: &SoftSet) -> Result<bool> {
        ensure_same(self.context(), w.context())?;
        let traces: HashSet<Box<[u64]>> = self
            .opens()
            .iter()
            .map(|a| a.rows().iter().zip(w.rows()).map(|(x, y)| x & y).collect())
            .collect();
        Ok(traces.iter().all(|t| {
            let trivial = t.iter().all(|&r| r == 0) || **t == *w.rows();
            if trivial {
                return true;
            }
            let rest: Box<[u64]> = w.rows().iter().zip(t.iter()).map(|(x, y)| x & !y).collect();
            !traces.contains(&rest)
        }))
    }

    /// [`SoftSpace::soft_set_connected`] by the literal pair scan over
    /// ambient opens.
    pub fn soft_set_connected_by_pairs(&self, w: &SoftSet) -> Result<bool> {
        ensure_same(self.context(), w.context())?;
        let whole = w.rows();
        let traces: Vec<Box<[u64]>> = self
            .opens()
            .iter()
            .map(|a| a.rows().iter().zip(whole).map(|(x, y)| x & y).collect())
            .collect();
        for a in &traces {
            if a.iter().all(|&r| r == 0) {
                continue;
            }
            for b in &traces {
                if b.iter().all(|&r| r == 0) {
                    continue;
                }
                let splits = a
                    .iter()
                    .zip(b.iter())
                    .zip(whole)
                    .all(|((x, y), w)| x | y == *w && x & y == 0);
                if splits {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Connectedness of every non-empty carrier `Y ⊆ X`, computed once.
    pub fn connectivity_table(&self, limits: &Limits) -> Result<ConnectivityTable> {
        let n = self.context().n_points();
        if n > limits.max_component_points {
            return Err(Error::CapExceeded {
                what: "universe size for carrier enumeration",
                cap: limits.max_component_points,
            });
        }
        let mut connected = vec![false; 1 << n];
        for (mask, slot) in connected.iter_mut().enumerate().skip(1) {
            let y = PointSet::from_bits(self.context(), mask as u64)?;
            *slot = self.is_connected_subspace(&y)?;
        }
        Ok(ConnectivityTable { connected })
    }

    /// Soft components of the whole space.
    pub fn components(&self, limits: &Limits) -> Result<ComponentPartition> {
        let table = self.connectivity_table(limits)?;
        Ok(table.components_within(&PointSet::full(self.context())))
    }

    /// Soft components of the subspace on `y`. Connected subspaces of
    /// `(Y, τ_Y)` are exactly the connected subspaces of the whole space that
    /// lie inside `Y`, since relative topologies compose.
    pub fn components_within(&self, y: &PointSet, limits: &Limits) -> Result<ComponentPartition> {
        ensure_same(self.context(), y.context())?;
        let table = self.connectivity_table(limits)?;
        Ok(table.components_within(y))
    }
}

/// Memoized connectedness verdicts indexed by carrier bitmask.
#[derive(Debug, Clone)]
pub struct ConnectivityTable {
    connected: Vec<bool>,
}

impl ConnectivityTable {
    pub fn is_connected(&self, carrier: u64) -> bool {
        self.connected[carrier as usize]
    }

    /// Union-find over every connected carrier inside `y`: each one merges
    /// all of its points. Points covered by no connected carrier are
    /// orphans.
    pub fn components_within(&self, y: &PointSet) -> ComponentPartition {
        let ctx = y.context();
        let n = ctx.n_points();
        let within = y.bits();
        let mut uf = UnionFind::new(n);
        let mut covered = 0u64;
        let mut sub = within;
        // Walk every non-empty submask of `within`.
        while sub != 0 {
            if self.connected[sub as usize] {
                covered |= sub;
                let mut members = bits(sub);
                if let Some(first) = members.next() {
                    for other in members {
                        uf.union(first, other);
                    }
                }
            }
            sub = (sub - 1) & within;
        }
        let mut classes: Vec<u64> = Vec::new();
        let mut root_of = vec![usize::MAX; n];
        for x in bits(covered) {
            let r = uf.find(x);
            if root_of[r] == usize::MAX {
                root_of[r] = classes.len();
                classes.push(0);
            }
            classes[root_of[r]] |= 1 << x;
        }
        ComponentPartition {
            classes: classes
                .into_iter()
                .map(|c| PointSet::from_bits(ctx, c).expect("class within universe"))
                .collect(),
            orphans: PointSet::from_bits(ctx, within & !covered).expect("orphans within universe"),
        }
    }
}

/// Soft components plus the points that lie in no connected subspace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentPartition {
    /// Ordered by smallest member.
    pub classes: Vec<PointSet>,
    pub orphans: PointSet,
}

impl ComponentPartition {
    pub fn class_of(&self, x: usize) -> Option<&PointSet> {
        self.classes.iter().find(|c| c.contains(x))
    }
}

#[derive(Debug)]
struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
    }
}

/// `(Y, τ_Y, E)`: the opens of the parent restricted to `Y`, deduplicated
/// and in canonical order.
#[derive(Debug, Clone)]
pub struct SubspaceView<'a> {
    parent: &'a SoftSpace,
    carrier: PointSet,
    opens: Vec<SoftSet>,
}

impl<'a> SubspaceView<'a> {
    fn build(parent: &'a SoftSpace, carrier: PointSet, source: &[SoftSet]) -> Self {
        let mask = carrier.bits();
        let mut opens: Vec<SoftSet> = source.iter().map(|f| f.map_rows(|r| r & mask)).collect();
        opens.sort();
        opens.dedup();
        SubspaceView {
            parent,
            carrier,
            opens,
        }
    }

    pub fn parent(&self) -> &'a SoftSpace {
        self.parent
    }

    pub fn carrier(&self) -> &PointSet {
        &self.carrier
    }

    pub fn opens(&self) -> &[SoftSet] {
        &self.opens
    }

    /// `Ỹ`, the absolute soft set of the subspace.
    pub fn relative_absolute(&self) -> SoftSet {
        SoftSet::crisp_lift(&self.carrier)
    }

    pub fn is_open(&self, f: &SoftSet) -> Result<bool> {
        ensure_same(self.parent.context(), f.context())?;
        Ok(self.opens.binary_search(f).is_ok())
    }

    pub fn find_separation(&self) -> Option<Separation> {
        let whole = self.relative_absolute();
        first_separation(&self.opens, whole.rows()).map(|(i, j)| Separation {
            left: self.opens[i].clone(),
            right: self.opens[j].clone(),
        })
    }

    pub fn is_connected(&self) -> bool {
        self.find_separation().is_none()
    }

    /// Relative topology of `Y ⊆ carrier` taken inside this subspace.
    pub fn subspace(&self, y: &PointSet) -> Result<SubspaceView<'a>> {
        ensure_same(self.parent.context(), y.context())?;
        if y.is_empty() {
            return Err(Error::EmptyCarrier);
        }
        if !y.is_subset(&self.carrier)? {
            return Err(Error::MalformedSet(format!(
                "carrier {y} is not contained in {}",
                self.carrier
            )));
        }
        Ok(SubspaceView::build(self.parent, y.clone(), &self.opens))
    }
}
