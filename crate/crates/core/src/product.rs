//! Soft products over `X×Y` with parameters `E1×E2`.
//!
//! Pairs are encoded row-major: point `(i, j)` has index `i·|Y| + j` and
//! parameter `(e1, e2)` has index `e1·|E2| + e2`. Names render as `(x,y)`.

use std::sync::Arc;

use crate::context::{bits, ensure_same, Context};
use crate::error::{Error, Result};
use crate::mapping::SoftMapping;
use crate::soft_set::SoftSet;
use crate::topology::{Limits, SoftSpace};
use crate::MAX_POINTS;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductContext {
    left: Arc<Context>,
    right: Arc<Context>,
    product: Arc<Context>,
}

impl ProductContext {
    pub fn new(left: &Arc<Context>, right: &Arc<Context>) -> Result<ProductContext> {
        let n = left.n_points() * right.n_points();
        if n > MAX_POINTS {
            return Err(Error::UniverseTooLarge(n));
        }
        let points = left
            .points()
            .iter()
            .flat_map(|x| right.points().iter().map(move |y| format!("({x},{y})")));
        let params = left
            .params()
            .iter()
            .flat_map(|a| right.params().iter().map(move |b| format!("({a},{b})")));
        let product = Context::new(points, params)?;
        Ok(ProductContext {
            left: left.clone(),
            right: right.clone(),
            product,
        })
    }

    pub fn left(&self) -> &Arc<Context> {
        &self.left
    }

    pub fn right(&self) -> &Arc<Context> {
        &self.right
    }

    pub fn context(&self) -> &Arc<Context> {
        &self.product
    }

    pub fn pair_point(&self, i: usize, j: usize) -> usize {
        i * self.right.n_points() + j
    }

    pub fn unpair_point(&self, k: usize) -> (usize, usize) {
        let n2 = self.right.n_points();
        (k / n2, k % n2)
    }

    pub fn pair_param(&self, e1: usize, e2: usize) -> usize {
        e1 * self.right.n_params() + e2
    }

    pub fn unpair_param(&self, k: usize) -> (usize, usize) {
        let m2 = self.right.n_params();
        (k / m2, k % m2)
    }

    fn row_product(&self, r1: u64, r2: u64) -> u64 {
        let n2 = self.right.n_points();
        bits(r1).fold(0, |acc, i| acc | r2 << (i * n2))
    }

    /// `(F×G)(e1,e2) = F(e1) × G(e2)`.
    pub fn soft_set(&self, f: &SoftSet, g: &SoftSet) -> Result<SoftSet> {
        ensure_same(&self.left, f.context())?;
        ensure_same(&self.right, g.context())?;
        let rows = f
            .rows()
            .iter()
            .flat_map(|&r1| g.rows().iter().map(move |&r2| (r1, r2)))
            .map(|(r1, r2)| self.row_product(r1, r2))
            .collect::<Vec<_>>();
        Ok(SoftSet::from_rows_unchecked(&self.product, rows.into()))
    }

    fn check_factors(&self, s1: &SoftSpace, s2: &SoftSpace) -> Result<()> {
        ensure_same(&self.left, s1.context())?;
        ensure_same(&self.right, s2.context())
    }

    /// Every rectangle `F×G` with `F`, `G` open, deduplicated and sorted.
    pub fn basis(&self, s1: &SoftSpace, s2: &SoftSpace) -> Result<Vec<SoftSet>> {
        self.check_factors(s1, s2)?;
        let mut out = Vec::with_capacity(s1.len() * s2.len());
        for f in s1.opens() {
            for g in s2.opens() {
                out.push(self.soft_set(f, g)?);
            }
        }
        out.sort();
        out.dedup();
        Ok(out)
    }

    /// Union closure of the rectangle basis. Rectangles are closed under
    /// intersection, so unions alone give a topology; the result is still
    /// validated.
    pub fn topology(&self, s1: &SoftSpace, s2: &SoftSpace, limits: &Limits) -> Result<SoftSpace> {
        for s in [s1, s2] {
            if s.len() > limits.max_factor_opens {
                return Err(Error::CapExceeded {
                    what: "factor opens",
                    cap: limits.max_factor_opens,
                });
            }
        }
        let basis = self.basis(s1, s2)?;
        let space = SoftSpace::generate_unions(&self.product, &basis, limits)?;
        let violations = space.validate();
        if violations.is_empty() {
            Ok(space)
        } else {
            Err(Error::InvalidTopology(violations))
        }
    }

    /// Both sides of `(F×G)' = (F'×Ỹ) ∪ (X̃×G')`.
    pub fn complement_identity(&self, f: &SoftSet, g: &SoftSet) -> Result<ComplementIdentity> {
        let lhs = self.soft_set(f, g)?.complement();
        let left = self.soft_set(&f.complement(), &SoftSet::absolute(&self.right))?;
        let right = self.soft_set(&SoftSet::absolute(&self.left), &g.complement())?;
        let rhs = left.union(&right)?;
        Ok(ComplementIdentity { lhs, rhs })
    }

    /// Whether `(x,y)` belongs to `F×G`, looked up by point names.
    pub fn membership(&self, x: &str, y: &str, f: &SoftSet, g: &SoftSet) -> Result<bool> {
        let k = self.pair_point(self.left.point(x)?, self.right.point(y)?);
        Ok(self.soft_set(f, g)?.contains_index(k))
    }

    /// `u(x,y) = x`, `p(e1,e2) = e1`.
    pub fn projection_left(&self) -> SoftMapping {
        let points = (0..self.product.n_points())
            .map(|k| self.unpair_point(k).0)
            .collect();
        let params = (0..self.product.n_params())
            .map(|k| self.unpair_param(k).0)
            .collect();
        SoftMapping::new(&self.product, &self.left, points, params).expect("projection is total")
    }

    /// `u(x,y) = y`, `p(e1,e2) = e2`.
    pub fn projection_right(&self) -> SoftMapping {
        let points = (0..self.product.n_points())
            .map(|k| self.unpair_point(k).1)
            .collect();
        let params = (0..self.product.n_params())
            .map(|k| self.unpair_param(k).1)
            .collect();
        SoftMapping::new(&self.product, &self.right, points, params).expect("projection is total")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplementIdentity {
    pub lhs: SoftSet,
    pub rhs: SoftSet,
}

impl ComplementIdentity {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// Product space of two validated factors.
pub fn product_topology(
    s1: &SoftSpace,
    s2: &SoftSpace,
    limits: &Limits,
) -> Result<(ProductContext, SoftSpace)> {
    let pc = ProductContext::new(s1.context(), s2.context())?;
    let space = pc.topology(s1, s2, limits)?;
    Ok((pc, space))
}
