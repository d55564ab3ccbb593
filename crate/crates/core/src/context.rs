//! Universes, parameter sets, and crisp subsets of a universe.
//!
//! Point and parameter names are mapped to dense indices when a [`Context`]
//! is built. Everything downstream works on indices; names only reappear at
//! the serialization boundary.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::MAX_POINTS;

/// A finite universe `X` together with a finite parameter set `E`.
#[derive(Clone)]
pub struct Context {
    points: Vec<String>,
    params: Vec<String>,
    point_index: HashMap<String, usize>,
    param_index: HashMap<String, usize>,
}

impl Context {
    pub fn new<P, Q>(points: P, params: Q) -> Result<Arc<Context>>
    where
        P: IntoIterator,
        P::Item: Into<String>,
        Q: IntoIterator,
        Q::Item: Into<String>,
    {
        let points: Vec<String> = points.into_iter().map(Into::into).collect();
        let params: Vec<String> = params.into_iter().map(Into::into).collect();
        if points.is_empty() {
            return Err(Error::InvalidContext("universe is empty".into()));
        }
        if params.is_empty() {
            return Err(Error::InvalidContext("parameter set is empty".into()));
        }
        if points.len() > MAX_POINTS {
            return Err(Error::UniverseTooLarge(points.len()));
        }
        let point_index = index_names(&points, "point")?;
        let param_index = index_names(&params, "parameter")?;
        Ok(Arc::new(Context {
            points,
            params,
            point_index,
            param_index,
        }))
    }

    /// Context with points `x0..x{n-1}` and parameters `e0..e{m-1}`.
    pub fn numbered(n: usize, m: usize) -> Result<Arc<Context>> {
        Context::new(
            (0..n).map(|i| format!("x{i}")),
            (0..m).map(|i| format!("e{i}")),
        )
    }

    pub fn n_points(&self) -> usize {
        self.points.len()
    }

    pub fn n_params(&self) -> usize {
        self.params.len()
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    pub fn point_name(&self, i: usize) -> &str {
        &self.points[i]
    }

    pub fn param_name(&self, e: usize) -> &str {
        &self.params[e]
    }

    pub fn point(&self, name: &str) -> Result<usize> {
        self.point_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownPoint(name.to_string()))
    }

    pub fn param(&self, name: &str) -> Result<usize> {
        self.param_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownParam(name.to_string()))
    }

    /// Bit-row with every point of the universe set.
    pub fn full_row(&self) -> u64 {
        full_mask(self.points.len())
    }

    /// Context obtained by deleting one point; used when shrinking witnesses.
    pub fn without_point(&self, i: usize) -> Result<Arc<Context>> {
        let points = self
            .points
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, p)| p.clone());
        Context::new(points, self.params.iter().cloned())
    }

    pub fn without_param(&self, e: usize) -> Result<Arc<Context>> {
        let params = self
            .params
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != e)
            .map(|(_, p)| p.clone());
        Context::new(self.points.iter().cloned(), params)
    }
}

fn index_names(names: &[String], kind: &str) -> Result<HashMap<String, usize>> {
    let mut index = HashMap::with_capacity(names.len());
    for (i, name) in names.iter().enumerate() {
        if name.is_empty() {
            return Err(Error::InvalidContext(format!("empty {kind} name")));
        }
        if index.insert(name.clone(), i).is_some() {
            return Err(Error::InvalidContext(format!("duplicate {kind} name `{name}`")));
        }
    }
    Ok(index)
}

pub(crate) fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

impl PartialEq for Context {
    fn eq(&self, other: &Self) -> bool {
        self.points == other.points && self.params == other.params
    }
}

impl Eq for Context {}

impl fmt::Debug for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Context")
            .field("points", &self.points)
            .field("params", &self.params)
            .finish()
    }
}

pub(crate) fn same_context(a: &Arc<Context>, b: &Arc<Context>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

pub(crate) fn ensure_same(a: &Arc<Context>, b: &Arc<Context>) -> Result<()> {
    if same_context(a, b) {
        Ok(())
    } else {
        Err(Error::ContextMismatch)
    }
}

/// Iterate the indices of set bits in ascending order.
pub(crate) fn bits(mut row: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if row == 0 {
            None
        } else {
            let i = row.trailing_zeros() as usize;
            row &= row - 1;
            Some(i)
        }
    })
}

/// A crisp subset `Y ⊆ X`.
#[derive(Clone)]
pub struct PointSet {
    ctx: Arc<Context>,
    members: u64,
}

impl PointSet {
    pub fn from_bits(ctx: &Arc<Context>, members: u64) -> Result<PointSet> {
        if members & !ctx.full_row() != 0 {
            return Err(Error::MalformedSet(format!(
                "point index out of range in mask {members:#b}"
            )));
        }
        Ok(PointSet {
            ctx: ctx.clone(),
            members,
        })
    }

    pub fn from_names<S: AsRef<str>>(ctx: &Arc<Context>, names: &[S]) -> Result<PointSet> {
        let mut members = 0u64;
        for name in names {
            members |= 1 << ctx.point(name.as_ref())?;
        }
        Ok(PointSet {
            ctx: ctx.clone(),
            members,
        })
    }

    pub fn empty(ctx: &Arc<Context>) -> PointSet {
        PointSet {
            ctx: ctx.clone(),
            members: 0,
        }
    }

    pub fn full(ctx: &Arc<Context>) -> PointSet {
        PointSet {
            ctx: ctx.clone(),
            members: ctx.full_row(),
        }
    }

    pub fn singleton(ctx: &Arc<Context>, i: usize) -> PointSet {
        assert!(i < ctx.n_points(), "point index {i} out of range");
        PointSet {
            ctx: ctx.clone(),
            members: 1 << i,
        }
    }

    pub fn context(&self) -> &Arc<Context> {
        &self.ctx
    }

    pub fn bits(&self) -> u64 {
        self.members
    }

    pub fn contains(&self, i: usize) -> bool {
        i < 64 && self.members & (1 << i) != 0
    }

    pub fn is_empty(&self) -> bool {
        self.members == 0
    }

    pub fn len(&self) -> usize {
        self.members.count_ones() as usize
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> {
        bits(self.members)
    }

    pub fn names(&self) -> Vec<String> {
        self.indices()
            .map(|i| self.ctx.point_name(i).to_string())
            .collect()
    }

    pub fn is_subset(&self, other: &PointSet) -> Result<bool> {
        ensure_same(&self.ctx, &other.ctx)?;
        Ok(self.members & !other.members == 0)
    }

    pub fn union(&self, other: &PointSet) -> Result<PointSet> {
        ensure_same(&self.ctx, &other.ctx)?;
        Ok(PointSet {
            ctx: self.ctx.clone(),
            members: self.members | other.members,
        })
    }

    pub fn intersect(&self, other: &PointSet) -> Result<PointSet> {
        ensure_same(&self.ctx, &other.ctx)?;
        Ok(PointSet {
            ctx: self.ctx.clone(),
            members: self.members & other.members,
        })
    }
}

impl PartialEq for PointSet {
    fn eq(&self, other: &Self) -> bool {
        self.members == other.members && same_context(&self.ctx, &other.ctx)
    }
}

impl Eq for PointSet {}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.names().join(","))
    }
}
