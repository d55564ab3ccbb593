//! Soft topological spaces over finite contexts.
//!
//! A [`SoftSpace`] is an explicit list of open soft sets kept in canonical
//! (row-lexicographic) order. For a finite family, closure under arbitrary
//! unions is the same as closure under pairwise unions, so every check here
//! is a finite scan.

mod connected;
mod local;

use std::collections::HashSet;
use std::hash::Hash;
use std::fmt;
use std::sync::Arc;

use rustc_hash::FxHashSet;
use serde::Serialize;

use crate::context::{ensure_same, Context};
use crate::error::{Error, Result};
use crate::soft_set::{rows_subset, SoftSet};

pub use connected::{ComponentPartition, ConnectivityTable, Separation, SubspaceView};

/// Largest `|X|·|E|` for which [`SoftSpace::enumerate_all`] is allowed.
pub const MAX_TOPOLOGY_ENUM_CELLS: usize = 4;

/// Enumeration and closure limits. Exceeding one is always a hard error.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest topology a closure computation may produce.
    pub max_opens: usize,
    /// Largest universe for which per-carrier connectivity is enumerated.
    pub max_component_points: usize,
    /// Largest factor topology accepted by product operations.
    pub max_factor_opens: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_opens: 4096,
            max_component_points: 12,
            max_factor_opens: 16,
        }
    }
}

/// One reason a family of soft sets fails to be a soft topology. Indices
/// refer to [`SoftSpace::opens`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Violation {
    MissingNull,
    MissingAbsolute,
    UnionAbsent { left: usize, right: usize },
    IntersectionAbsent { left: usize, right: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::MissingNull => write!(f, "null soft set absent"),
            Violation::MissingAbsolute => write!(f, "absolute soft set absent"),
            Violation::UnionAbsent { left, right } => {
                write!(f, "union absent: open #{left} ∪ open #{right}")
            }
            Violation::IntersectionAbsent { left, right } => {
                write!(f, "intersection absent: open #{left} ∩ open #{right}")
            }
        }
    }
}

#[derive(Clone)]
pub struct SoftSpace {
    ctx: Arc<Context>,
    opens: Vec<SoftSet>,
    lookup: HashSet<Box<[u64]>>,
}

impl SoftSpace {
    /// Collect a family of open sets without checking the topology axioms.
    /// Duplicates and foreign contexts are rejected; call
    /// [`SoftSpace::validate`] to check the axioms.
    pub fn from_opens(ctx: &Arc<Context>, opens: Vec<SoftSet>) -> Result<SoftSpace> {
        let mut lookup = HashSet::with_capacity(opens.len());
        for (i, f) in opens.iter().enumerate() {
            ensure_same(f.context(), ctx)?;
            if !lookup.insert(Box::<[u64]>::from(f.rows())) {
                return Err(Error::DuplicateOpen(i));
            }
        }
        let mut opens: Vec<SoftSet> = opens
            .into_iter()
            .map(|f| SoftSet::from_rows_unchecked(ctx, f.rows().into()))
            .collect();
        opens.sort();
        Ok(SoftSpace {
            ctx: ctx.clone(),
            opens,
            lookup,
        })
    }

    /// Like [`SoftSpace::from_opens`], but the family must be a topology.
    pub fn new(ctx: &Arc<Context>, opens: Vec<SoftSet>) -> Result<SoftSpace> {
        let space = SoftSpace::from_opens(ctx, opens)?;
        let violations = space.validate();
        if violations.is_empty() {
            Ok(space)
        } else {
            Err(Error::InvalidTopology(violations))
        }
    }

    /// `{Φ_E, X̃}`.
    pub fn indiscrete(ctx: &Arc<Context>) -> SoftSpace {
        SoftSpace::from_rows_trusted(
            ctx,
            vec![
                SoftSet::null(ctx).rows().into(),
                SoftSet::absolute(ctx).rows().into(),
            ],
        )
    }

    /// Every soft set of the context is open.
    pub fn discrete(ctx: &Arc<Context>, limits: &Limits) -> Result<SoftSpace> {
        let cells = ctx.n_points() * ctx.n_params();
        if cells >= 63 || (1usize << cells) > limits.max_opens {
            return Err(Error::CapExceeded {
                what: "discrete topology size",
                cap: limits.max_opens,
            });
        }
        let rows = SoftSet::enumerate(ctx)?
            .map(|f| f.rows().into())
            .collect();
        Ok(SoftSpace::from_rows_trusted(ctx, rows))
    }

    /// Smallest topology containing `seeds`: the fixpoint of pairwise union
    /// and intersection starting from `seeds ∪ {Φ_E, X̃}`.
    pub fn generate(ctx: &Arc<Context>, seeds: &[SoftSet], limits: &Limits) -> Result<SoftSpace> {
        let start = [SoftSet::null(ctx), SoftSet::absolute(ctx)];
        let rows = closure(ctx, start.iter().chain(seeds), true, limits.max_opens)?;
        Ok(SoftSpace::from_rows_trusted(ctx, rows))
    }

    /// Closure of `seeds ∪ {Φ_E}` under pairwise unions only. This is a
    /// topology exactly when `seeds` is a basis for one.
    pub fn generate_unions(
        ctx: &Arc<Context>,
        seeds: &[SoftSet],
        limits: &Limits,
    ) -> Result<SoftSpace> {
        let start = [SoftSet::null(ctx)];
        let rows = closure(ctx, start.iter().chain(seeds), false, limits.max_opens)?;
        Ok(SoftSpace::from_rows_trusted(ctx, rows))
    }

    /// Every soft topology of a context with `|X|·|E| ≤ 4`, found by
    /// scanning all families that contain `Φ_E` and `X̃`.
    pub fn enumerate_all(ctx: &Arc<Context>) -> Result<Vec<SoftSpace>> {
        let cells = ctx.n_points() * ctx.n_params();
        if cells > MAX_TOPOLOGY_ENUM_CELLS {
            return Err(Error::CapExceeded {
                what: "topology enumeration (|X|·|E|)",
                cap: MAX_TOPOLOGY_ENUM_CELLS,
            });
        }
        let full_code = (1u64 << cells) - 1;
        // Packed codes concatenate rows, so bitwise OR/AND on codes are soft
        // union/intersection.
        let inner: Vec<u64> = (1..full_code).collect();
        let mut out = Vec::new();
        for mask in 0u64..(1u64 << inner.len()) {
            let mut family = vec![0u64, full_code];
            family.extend(
                inner
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| mask & (1 << i) != 0)
                    .map(|(_, &c)| c),
            );
            let mut present = 0u64;
            for &c in &family {
                present |= 1 << c;
            }
            let closed = family.iter().all(|&a| {
                family
                    .iter()
                    .all(|&b| present & (1 << (a | b)) != 0 && present & (1 << (a & b)) != 0)
            });
            if closed {
                let rows = family
                    .iter()
                    .map(|&c| SoftSet::from_code(ctx, c).rows().into())
                    .collect();
                out.push(SoftSpace::from_rows_trusted(ctx, rows));
            }
        }
        Ok(out)
    }

    pub(crate) fn from_rows_trusted(ctx: &Arc<Context>, rows: Vec<Box<[u64]>>) -> SoftSpace {
        let lookup: HashSet<Box<[u64]>> = rows.iter().cloned().collect();
        debug_assert_eq!(lookup.len(), rows.len());
        let mut opens: Vec<SoftSet> = rows
            .into_iter()
            .map(|r| SoftSet::from_rows_unchecked(ctx, r))
            .collect();
        opens.sort();
        SoftSpace {
            ctx: ctx.clone(),
            opens,
            lookup,
        }
    }

    pub fn context(&self) -> &Arc<Context> {
        &self.ctx
    }

    /// Open sets in canonical order.
    pub fn opens(&self) -> &[SoftSet] {
        &self.opens
    }

    pub fn len(&self) -> usize {
        self.opens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.opens.is_empty()
    }

    pub(crate) fn contains_rows(&self, rows: &[u64]) -> bool {
        self.lookup.contains(rows)
    }

    /// Check the soft topology axioms. An empty list means the family is a
    /// topology.
    pub fn validate(&self) -> Vec<Violation> {
        let mut violations = Vec::new();
        if !self.contains_rows(SoftSet::null(&self.ctx).rows()) {
            violations.push(Violation::MissingNull);
        }
        if !self.contains_rows(SoftSet::absolute(&self.ctx).rows()) {
            violations.push(Violation::MissingAbsolute);
        }
        let n = self.opens.len();
        let mut check = |i: usize, j: usize, union: bool, intersection: bool| {
            if !union {
                violations.push(Violation::UnionAbsent { left: i, right: j });
            }
            if !intersection {
                violations.push(Violation::IntersectionAbsent { left: i, right: j });
            }
        };
        if self.ctx.n_points() * self.ctx.n_params() <= 64 {
            let codes: Vec<u64> = self.opens.iter().map(SoftSet::code).collect();
            let present: FxHashSet<u64> = codes.iter().copied().collect();
            for i in 0..n {
                for j in i + 1..n {
                    let (a, b) = (codes[i], codes[j]);
                    check(i, j, present.contains(&(a | b)), present.contains(&(a & b)));
                }
            }
        } else {
            let m = self.ctx.n_params();
            let mut join = vec![0u64; m];
            let mut meet = vec![0u64; m];
            for i in 0..n {
                for j in i + 1..n {
                    let (a, b) = (&self.opens[i], &self.opens[j]);
                    for e in 0..m {
                        join[e] = a.row(e) | b.row(e);
                        meet[e] = a.row(e) & b.row(e);
                    }
                    check(i, j, self.lookup.contains(&join[..]), self.lookup.contains(&meet[..]));
                }
            }
        }
        violations
    }

    pub fn is_open(&self, f: &SoftSet) -> Result<bool> {
        ensure_same(&self.ctx, f.context())?;
        Ok(self.contains_rows(f.rows()))
    }

    /// Soft closed: the complement is open.
    pub fn is_closed(&self, f: &SoftSet) -> Result<bool> {
        ensure_same(&self.ctx, f.context())?;
        Ok(self.contains_rows(f.complement().rows()))
    }

    /// `self` is soft finer than `other` when every open of `other` is open
    /// in `self`.
    pub fn is_finer_than(&self, other: &SoftSpace) -> Result<bool> {
        ensure_same(&self.ctx, &other.ctx)?;
        Ok(other.opens.iter().all(|f| self.contains_rows(f.rows())))
    }

    pub fn is_comparable(&self, other: &SoftSpace) -> Result<bool> {
        Ok(self.is_finer_than(other)? || other.is_finer_than(self)?)
    }

    /// `family` is a soft basis of this topology: its members are open and
    /// every open set is the union of the members it contains.
    pub fn is_basis(&self, family: &[SoftSet]) -> Result<bool> {
        for b in family {
            if !self.is_open(b)? {
                return Ok(false);
            }
        }
        let m = self.ctx.n_params();
        Ok(self.opens.iter().all(|open| {
            let mut acc = vec![0u64; m];
            for b in family.iter().filter(|b| rows_subset(b.rows(), open.rows())) {
                for (a, r) in acc.iter_mut().zip(b.rows()) {
                    *a |= r;
                }
            }
            acc.as_slice() == open.rows()
        }))
    }

    /// Open sets that are not the union of the opens strictly below them.
    /// This is the smallest basis of the topology.
    pub fn minimal_basis(&self) -> Vec<SoftSet> {
        let m = self.ctx.n_params();
        self.opens
            .iter()
            .filter(|open| {
                if open.is_null() {
                    return false;
                }
                let mut acc = vec![0u64; m];
                for below in &self.opens {
                    if below.rows() != open.rows() && rows_subset(below.rows(), open.rows()) {
                        for (a, r) in acc.iter_mut().zip(below.rows()) {
                            *a |= r;
                        }
                    }
                }
                acc.as_slice() != open.rows()
            })
            .cloned()
            .collect()
    }
}

/// Worklist fixpoint: every new element is combined with all elements found
/// before it, so each unordered pair is visited exactly once.
#[allow(clippy::borrowed_box)]
fn closure<'a>(
    ctx: &Arc<Context>,
    start: impl Iterator<Item = &'a SoftSet>,
    with_intersections: bool,
    cap: usize,
) -> Result<Vec<Box<[u64]>>> {
    let start: Vec<&SoftSet> = start.collect();
    for s in &start {
        ensure_same(s.context(), ctx)?;
    }
    if ctx.n_points() * ctx.n_params() <= 64 {
        let seeds: Vec<u64> = start.iter().map(|s| s.code()).collect();
        let codes = close(seeds, with_intersections, cap, |a, b| a | b, |a, b| a & b)?;
        return Ok(codes
            .into_iter()
            .map(|c| SoftSet::from_code(ctx, c).rows().into())
            .collect());
    }
    let seeds: Vec<Box<[u64]>> = start.iter().map(|s| s.rows().into()).collect();
    let zip = |op: fn(u64, u64) -> u64| {
        move |a: &Box<[u64]>, b: &Box<[u64]>| -> Box<[u64]> {
            a.iter().zip(b.iter()).map(|(&x, &y)| op(x, y)).collect()
        }
    };
    close(seeds, with_intersections, cap, zip(|a, b| a | b), zip(|a, b| a & b))
}

/// Closure of `seeds` under `meet` (optional) and then `join`. Every
/// finite meet is reached by meeting one seed at a time, and every join of
/// meets by joining one generator at a time.
fn close<T: Clone + Eq + Hash>(
    seeds: Vec<T>,
    with_meets: bool,
    cap: usize,
    join: impl Fn(&T, &T) -> T,
    meet: impl Fn(&T, &T) -> T,
) -> Result<Vec<T>> {
    let over_cap = || Error::CapExceeded {
        what: "number of open sets",
        cap,
    };
    let mut seen: FxHashSet<T> = FxHashSet::default();
    let mut list: Vec<T> = Vec::new();
    for s in seeds {
        if seen.insert(s.clone()) {
            list.push(s);
        }
    }
    if list.len() > cap {
        return Err(over_cap());
    }
    let grow = |list: &mut Vec<T>, seen: &mut FxHashSet<T>, gens: &[T], op: &dyn Fn(&T, &T) -> T| {
        let mut i = 0;
        while i < list.len() {
            for g in gens {
                let t = op(&list[i], g);
                if !seen.contains(&t) {
                    seen.insert(t.clone());
                    list.push(t);
                    if list.len() > cap {
                        return Err(over_cap());
                    }
                }
            }
            i += 1;
        }
        Ok(())
    };
    if with_meets {
        let seeds = list.clone();
        grow(&mut list, &mut seen, &seeds, &meet)?;
    }
    let gens = list.clone();
    grow(&mut list, &mut seen, &gens, &join)?;
    Ok(list)
}

impl PartialEq for SoftSpace {
    fn eq(&self, other: &Self) -> bool {
        self.opens == other.opens && self.ctx == other.ctx
    }
}

impl Eq for SoftSpace {}

impl fmt::Debug for SoftSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SoftSpace")
            .field("points", &self.ctx.points())
            .field("params", &self.ctx.params())
            .field("opens", &self.opens)
            .finish()
    }
}
