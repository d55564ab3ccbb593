//! Soft T2 and (weak) local connectedness.

use super::{Limits, SoftSpace};
use crate::error::Result;
use crate::soft_set::{rows_subset, Membership, SoftSet};

impl SoftSpace {
    /// Intersection of every open containing `x` (all-parameter reading).
    /// In a topology this is the smallest open neighbourhood of `x`.
    fn minimal_neighbourhood(&self, x: usize) -> Vec<u64> {
        let mut acc = vec![self.context().full_row(); self.context().n_params()];
        for f in self.opens().iter().filter(|f| f.contains_index(x)) {
            for (a, r) in acc.iter_mut().zip(f.rows()) {
                *a &= r;
            }
        }
        acc
    }

    pub fn is_hausdorff(&self) -> bool {
        self.hausdorff_violation().is_none()
    }

    /// First pair `x < y` that no two disjoint opens separate.
    pub fn hausdorff_violation(&self) -> Option<(usize, usize)> {
        self.hausdorff_violation_with(Membership::AllParams)
    }

    pub fn hausdorff_violation_with(&self, membership: Membership) -> Option<(usize, usize)> {
        let n = self.context().n_points();
        match membership {
            Membership::AllParams => {
                // Disjoint neighbourhoods exist iff the minimal ones are
                // disjoint.
                let hoods: Vec<Vec<u64>> = (0..n).map(|x| self.minimal_neighbourhood(x)).collect();
                for x in 0..n {
                    for y in x + 1..n {
                        let meet = hoods[x].iter().zip(&hoods[y]).any(|(a, b)| a & b != 0);
                        if meet {
                            return Some((x, y));
                        }
                    }
                }
                None
            }
            Membership::AnyParam => {
                let around: Vec<Vec<&SoftSet>> = (0..n)
                    .map(|x| {
                        self.opens()
                            .iter()
                            .filter(|f| f.contains_with(x, membership))
                            .collect()
                    })
                    .collect();
                for x in 0..n {
                    for y in x + 1..n {
                        let separated = around[x].iter().any(|f| {
                            around[y].iter().any(|g| {
                                f.rows().iter().zip(g.rows()).all(|(a, b)| a & b == 0)
                            })
                        });
                        if !separated {
                            return Some((x, y));
                        }
                    }
                }
                None
            }
        }
    }

    pub fn is_locally_connected(&self) -> Result<bool> {
        Ok(self
            .local_connectedness_with(Membership::AllParams)?
            .into_iter()
            .all(|ok| ok))
    }

    pub fn is_locally_connected_at(&self, x: usize) -> Result<bool> {
        Ok(self.local_connectedness_with(Membership::AllParams)?[x])
    }

    /// Per-point verdicts: `x` passes when every open `F ∋ x` contains an
    /// open `G ∋ x` that is connected as a soft set.
    pub fn local_connectedness_with(&self, membership: Membership) -> Result<Vec<bool>> {
        let connected: Vec<bool> = self
            .opens()
            .iter()
            .map(|g| self.soft_set_connected(g))
            .collect::<Result<_>>()?;
        let n = self.context().n_points();
        Ok((0..n)
            .map(|x| {
                let around: Vec<usize> = (0..self.len())
                    .filter(|&i| self.opens()[i].contains_with(x, membership))
                    .collect();
                around.iter().all(|&fi| {
                    let f = self.opens()[fi].rows();
                    around
                        .iter()
                        .any(|&gi| connected[gi] && rows_subset(self.opens()[gi].rows(), f))
                })
            })
            .collect())
    }

    pub fn is_weakly_locally_connected(&self, limits: &Limits) -> Result<bool> {
        Ok(self
            .weak_local_connectedness_with(Membership::AllParams, limits)?
            .into_iter()
            .all(|ok| ok))
    }

    /// Per-point verdicts: `x` passes when every open `F ∋ x` contains the
    /// crisp lift of some connected subspace `Z` which in turn contains an
    /// open `G ∋ x`.
    pub fn weak_local_connectedness_with(
        &self,
        membership: Membership,
        limits: &Limits,
    ) -> Result<Vec<bool>> {
        let table = self.connectivity_table(limits)?;
        let n = self.context().n_points();
        Ok((0..n)
            .map(|x| {
                let around: Vec<&SoftSet> = self
                    .opens()
                    .iter()
                    .filter(|f| f.contains_with(x, membership))
                    .collect();
                let supports: Vec<u64> = around.iter().map(|g| g.support().bits()).collect();
                around.iter().all(|f| {
                    // Z̃ ⊆ F means Z lies in every row of F.
                    let core = f.core().bits();
                    let mut z = core;
                    while z != 0 {
                        if table.is_connected(z) && supports.iter().any(|&s| s != 0 && s & !z == 0)
                        {
                            return true;
                        }
                        z = (z - 1) & core;
                    }
                    false
                })
            })
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::context::Context;

    fn ctx(points: &[&str], params: &[&str]) -> Arc<Context> {
        Context::new(points.iter().copied(), params.iter().copied()).unwrap()
    }

    /// Literal definition: some pair of disjoint opens holds x and y.
    fn hausdorff_oracle(s: &SoftSpace) -> bool {
        let n = s.context().n_points();
        (0..n).all(|x| {
            (0..n).filter(|&y| y != x).all(|y| {
                s.opens().iter().any(|f| {
                    f.contains_index(x)
                        && s.opens().iter().any(|g| {
                            g.contains_index(y) && f.intersect(g).unwrap().is_null()
                        })
                })
            })
        })
    }

    #[test]
    fn hausdorff_examples() {
        let limits = Limits::default();
        let c1 = ctx(&["a"], &["e1", "e2"]);
        assert!(SoftSpace::indiscrete(&c1).is_hausdorff());
        let c2 = ctx(&["a", "b"], &["e"]);
        assert!(SoftSpace::discrete(&c2, &limits).unwrap().is_hausdorff());
        assert_eq!(SoftSpace::indiscrete(&c2).hausdorff_violation(), Some((0, 1)));
    }

    #[test]
    fn hausdorff_matches_definition_exhaustively() {
        for (n, m) in [(2, 1), (1, 2), (2, 2), (3, 1), (4, 1)] {
            let c = Context::numbered(n, m).unwrap();
            for s in SoftSpace::enumerate_all(&c).unwrap() {
                assert_eq!(s.is_hausdorff(), hausdorff_oracle(&s), "{s:?}");
            }
        }
    }

    #[test]
    fn local_connectedness_examples() {
        let limits = Limits::default();
        let c = ctx(&["a", "b", "c"], &["e1", "e2"]);
        let ind = SoftSpace::indiscrete(&c);
        assert!(ind.is_locally_connected().unwrap());
        assert!(ind.is_weakly_locally_connected(&limits).unwrap());

        let c1 = ctx(&["a", "b"], &["e"]);
        let d = SoftSpace::discrete(&c1, &limits).unwrap();
        assert!(d.is_locally_connected().unwrap());
        assert!(d.is_weakly_locally_connected(&limits).unwrap());

        // One point, two parameters, every soft set open: the only open
        // containing the point is X̃, which splits.
        let c2 = ctx(&["a"], &["e1", "e2"]);
        let d2 = SoftSpace::discrete(&c2, &limits).unwrap();
        assert!(!d2.is_locally_connected().unwrap());
        assert!(!d2.is_locally_connected_at(0).unwrap());
        assert!(!d2.is_weakly_locally_connected(&limits).unwrap());
    }

}
