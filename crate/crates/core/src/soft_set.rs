//! Soft sets over a fixed context and their algebra.
//!
//! A soft set `(F, E)` assigns a subset `F(e) ⊆ X` to every parameter. It is
//! stored as one `u64` bit-row per parameter, so every operation here is a
//! word-wise loop over `m` rows.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::context::{bits, ensure_same, same_context, Context, PointSet};
use crate::error::{Error, Result};

/// Largest `|X|·|E|` for which all soft sets of a context may be enumerated.
pub const MAX_ENUMERABLE_CELLS: usize = 24;

#[derive(Clone)]
pub struct SoftSet {
    ctx: Arc<Context>,
    rows: Box<[u64]>,
}

impl SoftSet {
    /// The null soft set `Φ_E`: every row empty.
    pub fn null(ctx: &Arc<Context>) -> SoftSet {
        SoftSet {
            ctx: ctx.clone(),
            rows: vec![0; ctx.n_params()].into(),
        }
    }

    /// The absolute soft set `X̃`: every row is the whole universe.
    pub fn absolute(ctx: &Arc<Context>) -> SoftSet {
        SoftSet {
            ctx: ctx.clone(),
            rows: vec![ctx.full_row(); ctx.n_params()].into(),
        }
    }

    /// The crisp lift `Ỹ` of a point set: every row equals `Y`.
    pub fn crisp_lift(y: &PointSet) -> SoftSet {
        let ctx = y.context();
        SoftSet {
            ctx: ctx.clone(),
            rows: vec![y.bits(); ctx.n_params()].into(),
        }
    }

    pub fn from_rows(ctx: &Arc<Context>, rows: Vec<u64>) -> Result<SoftSet> {
        if rows.len() != ctx.n_params() {
            return Err(Error::MalformedSet(format!(
                "expected {} rows, got {}",
                ctx.n_params(),
                rows.len()
            )));
        }
        let full = ctx.full_row();
        if rows.iter().any(|r| r & !full != 0) {
            return Err(Error::MalformedSet("point index out of range".into()));
        }
        Ok(SoftSet {
            ctx: ctx.clone(),
            rows: rows.into(),
        })
    }

    /// Rows are trusted to be in range.
    pub(crate) fn from_rows_unchecked(ctx: &Arc<Context>, rows: Box<[u64]>) -> SoftSet {
        debug_assert_eq!(rows.len(), ctx.n_params());
        SoftSet {
            ctx: ctx.clone(),
            rows,
        }
    }

    /// Build from `(parameter, points)` pairs; parameters not listed get an
    /// empty row.
    pub fn from_names<P, S>(ctx: &Arc<Context>, rows: &[(P, &[S])]) -> Result<SoftSet>
    where
        P: AsRef<str>,
        S: AsRef<str>,
    {
        let mut table = vec![0u64; ctx.n_params()];
        for (param, points) in rows {
            let e = ctx.param(param.as_ref())?;
            for p in points.iter() {
                table[e] |= 1 << ctx.point(p.as_ref())?;
            }
        }
        SoftSet::from_rows(ctx, table)
    }

    /// Decode a soft set from its packed code: row `e` occupies bits
    /// `[e·n, (e+1)·n)`.
    pub fn from_code(ctx: &Arc<Context>, code: u64) -> SoftSet {
        let n = ctx.n_points();
        let full = ctx.full_row();
        let rows = (0..ctx.n_params())
            .map(|e| (code >> (e * n)) & full)
            .collect::<Vec<_>>();
        SoftSet::from_rows_unchecked(ctx, rows.into())
    }

    /// Packed code, the inverse of [`SoftSet::from_code`]. Only meaningful
    /// when `n·m ≤ 64`.
    pub fn code(&self) -> u64 {
        let n = self.ctx.n_points();
        self.rows
            .iter()
            .enumerate()
            .fold(0u64, |acc, (e, &r)| acc | (r << (e * n)))
    }

    /// Every soft set of the context, in code order.
    pub fn enumerate(ctx: &Arc<Context>) -> Result<impl Iterator<Item = SoftSet>> {
        let cells = ctx.n_points() * ctx.n_params();
        if cells > MAX_ENUMERABLE_CELLS {
            return Err(Error::CapExceeded {
                what: "soft-set enumeration (|X|·|E|)",
                cap: MAX_ENUMERABLE_CELLS,
            });
        }
        let ctx = ctx.clone();
        Ok((0..1u64 << cells).map(move |code| SoftSet::from_code(&ctx, code)))
    }

    pub fn context(&self) -> &Arc<Context> {
        &self.ctx
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    pub fn row(&self, e: usize) -> u64 {
        self.rows[e]
    }

    pub fn union(&self, other: &SoftSet) -> Result<SoftSet> {
        ensure_same(&self.ctx, &other.ctx)?;
        Ok(self.zip_with(other, |a, b| a | b))
    }

    pub fn intersect(&self, other: &SoftSet) -> Result<SoftSet> {
        ensure_same(&self.ctx, &other.ctx)?;
        Ok(self.zip_with(other, |a, b| a & b))
    }

    /// Row-wise complement `F'(e) = X − F(e)`.
    pub fn complement(&self) -> SoftSet {
        let full = self.ctx.full_row();
        self.map_rows(|r| full & !r)
    }

    /// Row-wise relative complement `W(e) − F(e)`.
    pub fn difference(&self, other: &SoftSet) -> Result<SoftSet> {
        ensure_same(&self.ctx, &other.ctx)?;
        Ok(self.zip_with(other, |a, b| a & !b))
    }

    pub fn is_subset(&self, other: &SoftSet) -> Result<bool> {
        ensure_same(&self.ctx, &other.ctx)?;
        Ok(rows_subset(&self.rows, &other.rows))
    }

    pub fn is_null(&self) -> bool {
        self.rows.iter().all(|&r| r == 0)
    }

    pub fn is_absolute(&self) -> bool {
        let full = self.ctx.full_row();
        self.rows.iter().all(|&r| r == full)
    }

    /// `x ∈ (F, E)`: the point lies in `F(e)` for every parameter.
    pub fn contains_point(&self, name: &str) -> Result<bool> {
        Ok(self.contains_index(self.ctx.point(name)?))
    }

    pub fn contains_index(&self, x: usize) -> bool {
        self.contains_with(x, Membership::AllParams)
    }

    pub fn contains_with(&self, x: usize, membership: Membership) -> bool {
        let bit = 1u64 << x;
        match membership {
            Membership::AllParams => self.rows.iter().all(|r| r & bit != 0),
            Membership::AnyParam => self.rows.iter().any(|r| r & bit != 0),
        }
    }

    /// Points that lie in every row, `∩_e F(e)`.
    pub fn core(&self) -> PointSet {
        let bits = self.rows.iter().fold(self.ctx.full_row(), |acc, r| acc & r);
        PointSet::from_bits(&self.ctx, bits).expect("core stays in range")
    }

    /// Sub-soft-set over `Y`: row `e` becomes `Y ∩ F(e)`.
    pub fn restrict(&self, y: &PointSet) -> Result<SoftSet> {
        ensure_same(&self.ctx, y.context())?;
        let mask = y.bits();
        Ok(self.map_rows(|r| r & mask))
    }

    /// `∪_e F(e)`.
    pub fn support(&self) -> PointSet {
        let bits = self.rows.iter().fold(0, |acc, r| acc | r);
        PointSet::from_bits(&self.ctx, bits).expect("support stays in range")
    }

    fn zip_with(&self, other: &SoftSet, f: impl Fn(u64, u64) -> u64) -> SoftSet {
        let rows = self
            .rows
            .iter()
            .zip(other.rows.iter())
            .map(|(&a, &b)| f(a, b))
            .collect();
        SoftSet {
            ctx: self.ctx.clone(),
            rows,
        }
    }

    pub(crate) fn map_rows(&self, mut f: impl FnMut(u64) -> u64) -> SoftSet {
        SoftSet {
            ctx: self.ctx.clone(),
            rows: self.rows.iter().map(|&r| f(r)).collect(),
        }
    }

    /// Named rendering: one `(param, points)` entry per parameter.
    pub fn named_rows(&self) -> Vec<(String, Vec<String>)> {
        self.rows
            .iter()
            .enumerate()
            .map(|(e, &r)| {
                let points = bits(r)
                    .map(|i| self.ctx.point_name(i).to_string())
                    .collect();
                (self.ctx.param_name(e).to_string(), points)
            })
            .collect()
    }
}

/// How `x ∈ (F, E)` is read. [`Membership::AllParams`] is the reading used
/// throughout; the other one exists for investigation runs only.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum Membership {
    #[default]
    AllParams,
    AnyParam,
}

pub(crate) fn rows_subset(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

/// Row-wise union of a family; the empty family yields `Φ_E`.
pub fn family_union(ctx: &Arc<Context>, family: &[SoftSet]) -> Result<SoftSet> {
    family
        .iter()
        .try_fold(SoftSet::null(ctx), |acc, f| acc.union(f))
}

/// Row-wise intersection of a non-empty family.
pub fn family_intersect(family: &[SoftSet]) -> Result<SoftSet> {
    let (first, rest) = family.split_first().ok_or(Error::EmptyFamily)?;
    rest.iter().try_fold(first.clone(), |acc, f| acc.intersect(f))
}

impl PartialEq for SoftSet {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows && same_context(&self.ctx, &other.ctx)
    }
}

impl Eq for SoftSet {}

impl Hash for SoftSet {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.rows.hash(state);
    }
}

/// Canonical order: lexicographic on the bit-rows, row 0 first. Only
/// meaningful between soft sets of the same context.
impl Ord for SoftSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rows.cmp(&other.rows)
    }
}

impl PartialOrd for SoftSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for SoftSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, (param, points)) in self.named_rows().into_iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{param}↦{{{}}}", points.join(","))?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for SoftSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx_ab(params: &[&str]) -> Arc<Context> {
        Context::new(["a", "b"], params.iter().copied()).unwrap()
    }

    fn set(ctx: &Arc<Context>, rows: &[(&str, &[&str])]) -> SoftSet {
        SoftSet::from_names(ctx, rows).unwrap()
    }

    /// Every soft set over every context with |X| ≤ 2, |E| ≤ 2.
    fn small_contexts() -> Vec<Arc<Context>> {
        let mut out = Vec::new();
        for n in 1..=2 {
            for m in 1..=2 {
                out.push(Context::numbered(n, m).unwrap());
            }
        }
        out
    }

    #[test]
    fn null_and_absolute() {
        let ctx = ctx_ab(&["e1", "e2"]);
        let phi = SoftSet::null(&ctx);
        assert_eq!(phi.rows(), &[0, 0]);
        assert!(phi.is_null());
        assert_eq!(phi, SoftSet::absolute(&ctx).complement());
        assert_eq!(SoftSet::absolute(&ctx).complement(), phi);
        assert_eq!(phi.complement(), SoftSet::absolute(&ctx));

        let ctx1 = ctx_ab(&["e1"]);
        assert_eq!(
            SoftSet::absolute(&ctx1),
            set(&ctx1, &[("e1", &["a", "b"])])
        );
    }

    #[test]
    fn union_and_intersection_two_points() {
        let ctx = ctx_ab(&["e1"]);
        let f = set(&ctx, &[("e1", &["a"])]);
        let g = set(&ctx, &[("e1", &["b"])]);
        assert_eq!(f.union(&g).unwrap(), SoftSet::absolute(&ctx));
        assert_eq!(f.intersect(&g).unwrap(), SoftSet::null(&ctx));
        let phi = SoftSet::null(&ctx);
        assert_eq!(f.union(&phi).unwrap(), f);
        assert_eq!(f.intersect(&phi).unwrap(), phi);
    }

    #[test]
    fn complement_pair_covers_and_is_disjoint() {
        let ctx = ctx_ab(&["e1", "e2"]);
        let f = set(&ctx, &[("e1", &["a"]), ("e2", &["a", "b"])]);
        let fc = f.complement();
        assert_eq!(fc, set(&ctx, &[("e1", &["b"])]));
        assert_eq!(f.union(&fc).unwrap(), SoftSet::absolute(&ctx));
        assert_eq!(f.intersect(&fc).unwrap(), SoftSet::null(&ctx));
        assert_eq!(fc.complement(), f);
    }

    #[test]
    fn mixed_contexts_are_rejected() {
        let c1 = ctx_ab(&["e1"]);
        let c2 = ctx_ab(&["e2"]);
        let f = SoftSet::null(&c1);
        let g = SoftSet::null(&c2);
        assert_eq!(f.union(&g), Err(Error::ContextMismatch));
        assert_eq!(f.intersect(&g), Err(Error::ContextMismatch));
        assert_eq!(f.is_subset(&g), Err(Error::ContextMismatch));
        // Structurally equal contexts built separately are the same context.
        let c3 = ctx_ab(&["e1"]);
        assert!(f.union(&SoftSet::null(&c3)).is_ok());
    }

    #[test]
    fn subset_examples() {
        let ctx = ctx_ab(&["e1", "e2"]);
        let f = set(&ctx, &[("e1", &["a"])]);
        let g = set(&ctx, &[("e1", &["a", "b"]), ("e2", &["b"])]);
        assert!(f.is_subset(&g).unwrap());
        assert!(!g.is_subset(&f).unwrap());
        for h in SoftSet::enumerate(&ctx).unwrap() {
            assert!(SoftSet::null(&ctx).is_subset(&h).unwrap());
            assert!(h.is_subset(&SoftSet::absolute(&ctx)).unwrap());
        }
    }

    #[test]
    fn subset_iff_intersection_exhaustive() {
        let ctx = ctx_ab(&["e1", "e2"]);
        let all: Vec<_> = SoftSet::enumerate(&ctx).unwrap().collect();
        assert_eq!(all.len(), 16);
        for f in &all {
            for g in &all {
                // Oracle: per-point, per-parameter containment.
                let oracle = (0..2).all(|e| {
                    (0..2).all(|x| f.row(e) & (1 << x) == 0 || g.row(e) & (1 << x) != 0)
                });
                assert_eq!(f.is_subset(g).unwrap(), oracle);
                assert_eq!(f.is_subset(g).unwrap(), f.intersect(g).unwrap() == *f);
            }
        }
    }

    #[test]
    fn is_null_examples() {
        let ctx = ctx_ab(&["e1", "e2"]);
        assert!(!set(&ctx, &[("e2", &["a"])]).is_null());
        for f in SoftSet::enumerate(&ctx).unwrap() {
            assert!(f.intersect(&f.complement()).unwrap().is_null());
        }
    }

    #[test]
    fn membership_reads_all_parameters() {
        let ctx = ctx_ab(&["e1", "e2"]);
        let f = set(&ctx, &[("e1", &["a"]), ("e2", &["a", "b"])]);
        assert!(f.contains_point("a").unwrap());
        assert!(!f.contains_point("b").unwrap());
        assert!(f.contains_with(1, Membership::AnyParam));
        assert_eq!(f.contains_point("z"), Err(Error::UnknownPoint("z".into())));
        let abs = SoftSet::absolute(&ctx);
        assert!(abs.contains_point("a").unwrap() && abs.contains_point("b").unwrap());
    }

    #[test]
    fn restrict_and_crisp_lift() {
        let ctx = ctx_ab(&["e1"]);
        let f = set(&ctx, &[("e1", &["a", "b"])]);
        let y = PointSet::from_names(&ctx, &["a"]).unwrap();
        assert_eq!(f.restrict(&y).unwrap(), set(&ctx, &[("e1", &["a"])]));
        assert_eq!(f.restrict(&PointSet::full(&ctx)).unwrap(), f);
        assert_eq!(
            SoftSet::null(&ctx).restrict(&y).unwrap(),
            SoftSet::null(&ctx)
        );

        let ctx2 = ctx_ab(&["e1", "e2"]);
        let y2 = PointSet::from_names(&ctx2, &["a"]).unwrap();
        assert_eq!(
            SoftSet::crisp_lift(&y2),
            set(&ctx2, &[("e1", &["a"]), ("e2", &["a"])])
        );
        assert_eq!(
            SoftSet::crisp_lift(&PointSet::empty(&ctx2)),
            SoftSet::null(&ctx2)
        );
        assert_eq!(
            SoftSet::crisp_lift(&PointSet::full(&ctx2)),
            SoftSet::absolute(&ctx2)
        );
    }

    #[test]
    fn support_examples() {
        let ctx = ctx_ab(&["e1", "e2"]);
        let f = set(&ctx, &[("e1", &["a"]), ("e2", &["b"])]);
        assert_eq!(f.support(), PointSet::full(&ctx));
        assert!(SoftSet::null(&ctx).support().is_empty());
        let y = PointSet::from_names(&ctx, &["b"]).unwrap();
        assert_eq!(SoftSet::crisp_lift(&y).support(), y);
    }

    #[test]
    fn families() {
        let ctx = ctx_ab(&["e1", "e2"]);
        assert_eq!(family_union(&ctx, &[]).unwrap(), SoftSet::null(&ctx));
        assert_eq!(family_intersect(&[]), Err(Error::EmptyFamily));
        for f in SoftSet::enumerate(&ctx).unwrap() {
            assert_eq!(
                family_union(&ctx, &[f.clone(), f.complement()]).unwrap(),
                SoftSet::absolute(&ctx)
            );
            assert_eq!(family_intersect(std::slice::from_ref(&f)).unwrap(), f);
        }
    }

    #[test]
    fn complement_laws_exhaustive() {
        for ctx in small_contexts() {
            let abs = SoftSet::absolute(&ctx);
            let phi = SoftSet::null(&ctx);
            for f in SoftSet::enumerate(&ctx).unwrap() {
                assert_eq!(f.union(&f.complement()).unwrap(), abs);
                assert_eq!(f.intersect(&f.complement()).unwrap(), phi);
                assert_eq!(f.intersect(&abs).unwrap(), f);
                assert_eq!(f.complement().complement(), f);
                assert_eq!(f.union(&f).unwrap(), f);
                assert_eq!(f.intersect(&f).unwrap(), f);
            }
        }
    }

    #[test]
    fn distributivity_exhaustive() {
        for (params, expected) in [(&["e1"][..], 64), (&["e1", "e2"][..], 4096)] {
            let ctx = ctx_ab(params);
            let all: Vec<_> = SoftSet::enumerate(&ctx).unwrap().collect();
            let mut triples = 0;
            for f in &all {
                for g in &all {
                    for h in &all {
                        let lhs = f.intersect(&g.union(h).unwrap()).unwrap();
                        let rhs = f
                            .intersect(g)
                            .unwrap()
                            .union(&f.intersect(h).unwrap())
                            .unwrap();
                        assert_eq!(lhs, rhs);
                        triples += 1;
                    }
                }
            }
            assert_eq!(triples, expected);
        }
    }

    #[test]
    fn code_round_trip() {
        let ctx = Context::numbered(3, 2).unwrap();
        for f in SoftSet::enumerate(&ctx).unwrap() {
            assert_eq!(SoftSet::from_code(&ctx, f.code()), f);
        }
        assert!(SoftSet::enumerate(&Context::numbered(5, 5).unwrap()).is_err());
    }

    #[test]
    fn display() {
        let ctx = ctx_ab(&["e1", "e2"]);
        let f = set(&ctx, &[("e1", &["a"]), ("e2", &["a", "b"])]);
        assert_eq!(f.to_string(), "(e1↦{a}, e2↦{a,b})");
    }
}
