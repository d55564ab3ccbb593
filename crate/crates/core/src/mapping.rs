//! Soft mappings `f_pu : SS(U)_A → SS(V)_B` induced by a point map
//! `u : U → V` and a parameter map `p : A → B`.

use std::sync::Arc;

use crate::context::{bits, ensure_same, Context};
use crate::error::{Error, Result};
use crate::soft_set::SoftSet;
use crate::topology::SoftSpace;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SoftMapping {
    source: Arc<Context>,
    target: Arc<Context>,
    point_map: Vec<usize>,
    param_map: Vec<usize>,
    /// `p⁻¹(b)` for every target parameter.
    param_fibers: Vec<Vec<usize>>,
    /// `u⁻¹({v})` as a bit-row, for every target point.
    point_fibers: Vec<u64>,
}

impl SoftMapping {
    pub fn new(
        source: &Arc<Context>,
        target: &Arc<Context>,
        point_map: Vec<usize>,
        param_map: Vec<usize>,
    ) -> Result<SoftMapping> {
        if point_map.len() != source.n_points() {
            return Err(Error::InvalidMapping(format!(
                "point map has {} entries, source universe has {}",
                point_map.len(),
                source.n_points()
            )));
        }
        if param_map.len() != source.n_params() {
            return Err(Error::InvalidMapping(format!(
                "parameter map has {} entries, source has {} parameters",
                param_map.len(),
                source.n_params()
            )));
        }
        if let Some(&v) = point_map.iter().find(|&&v| v >= target.n_points()) {
            return Err(Error::InvalidMapping(format!("point image {v} out of range")));
        }
        if let Some(&b) = param_map.iter().find(|&&b| b >= target.n_params()) {
            return Err(Error::InvalidMapping(format!("parameter image {b} out of range")));
        }
        let mut param_fibers = vec![Vec::new(); target.n_params()];
        for (a, &b) in param_map.iter().enumerate() {
            param_fibers[b].push(a);
        }
        let mut point_fibers = vec![0u64; target.n_points()];
        for (x, &v) in point_map.iter().enumerate() {
            point_fibers[v] |= 1 << x;
        }
        Ok(SoftMapping {
            source: source.clone(),
            target: target.clone(),
            point_map,
            param_map,
            param_fibers,
            point_fibers,
        })
    }

    /// Build from `(source name, target name)` pairs; both maps must be
    /// total over the source context.
    pub fn from_names<S: AsRef<str>>(
        source: &Arc<Context>,
        target: &Arc<Context>,
        points: &[(S, S)],
        params: &[(S, S)],
    ) -> Result<SoftMapping> {
        let mut point_map = vec![None; source.n_points()];
        for (from, to) in points {
            let x = source.point(from.as_ref())?;
            point_map[x] = Some(target.point(to.as_ref())?);
        }
        let mut param_map = vec![None; source.n_params()];
        for (from, to) in params {
            let a = source.param(from.as_ref())?;
            param_map[a] = Some(target.param(to.as_ref())?);
        }
        let point_map = point_map
            .into_iter()
            .enumerate()
            .map(|(x, v)| {
                v.ok_or_else(|| {
                    Error::InvalidMapping(format!("u is undefined at `{}`", source.point_name(x)))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let param_map = param_map
            .into_iter()
            .enumerate()
            .map(|(a, b)| {
                b.ok_or_else(|| {
                    Error::InvalidMapping(format!("p is undefined at `{}`", source.param_name(a)))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        SoftMapping::new(source, target, point_map, param_map)
    }

    pub fn identity(ctx: &Arc<Context>) -> SoftMapping {
        SoftMapping::new(
            ctx,
            ctx,
            (0..ctx.n_points()).collect(),
            (0..ctx.n_params()).collect(),
        )
        .expect("identity is total")
    }

    pub fn source(&self) -> &Arc<Context> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Context> {
        &self.target
    }

    pub fn point_map(&self) -> &[usize] {
        &self.point_map
    }

    pub fn param_map(&self) -> &[usize] {
        &self.param_map
    }

    fn map_points(&self, row: u64) -> u64 {
        bits(row).fold(0, |acc, x| acc | 1 << self.point_map[x])
    }

    fn pull_points(&self, row: u64) -> u64 {
        bits(row).fold(0, |acc, v| acc | self.point_fibers[v])
    }

    /// Row `b` of the image is `∪ { u(F(a)) : a ∈ p⁻¹(b) }`, empty when the
    /// fiber is empty.
    pub fn image(&self, f: &SoftSet) -> Result<SoftSet> {
        ensure_same(&self.source, f.context())?;
        let rows = self
            .param_fibers
            .iter()
            .map(|fiber| {
                fiber
                    .iter()
                    .fold(0, |acc, &a| acc | self.map_points(f.row(a)))
            })
            .collect::<Vec<_>>();
        Ok(SoftSet::from_rows_unchecked(&self.target, rows.into()))
    }

    /// Row `a` of the preimage is `u⁻¹(G(p(a)))`.
    pub fn preimage(&self, g: &SoftSet) -> Result<SoftSet> {
        ensure_same(&self.target, g.context())?;
        let rows = self
            .param_map
            .iter()
            .map(|&b| self.pull_points(g.row(b)))
            .collect::<Vec<_>>();
        Ok(SoftSet::from_rows_unchecked(&self.source, rows.into()))
    }

    /// Both `u` and `p` are onto.
    pub fn is_surjective(&self) -> bool {
        self.point_fibers.iter().all(|&f| f != 0) && self.param_fibers.iter().all(|f| !f.is_empty())
    }

    fn check_spaces(&self, src: &SoftSpace, dst: &SoftSpace) -> Result<()> {
        ensure_same(&self.source, src.context())?;
        ensure_same(&self.target, dst.context())
    }

    /// Soft pu-continuity: the preimage of every open of `dst` is open in
    /// `src`.
    pub fn is_pu_continuous(&self, src: &SoftSpace, dst: &SoftSpace) -> Result<bool> {
        Ok(self.first_discontinuity(src, dst)?.is_none())
    }

    /// First open of `dst` (canonical order) whose preimage is not open.
    pub fn first_discontinuity(&self, src: &SoftSpace, dst: &SoftSpace) -> Result<Option<SoftSet>> {
        self.check_spaces(src, dst)?;
        for g in dst.opens() {
            if !src.is_open(&self.preimage(g)?)? {
                return Ok(Some(g.clone()));
            }
        }
        Ok(None)
    }

    /// Continuity decided on a basis of `dst` only. The basis is verified
    /// first.
    pub fn is_pu_continuous_via_basis(
        &self,
        src: &SoftSpace,
        dst: &SoftSpace,
        basis: &[SoftSet],
    ) -> Result<bool> {
        Ok(self.first_basis_discontinuity(src, dst, basis)?.is_none())
    }

    pub fn first_basis_discontinuity(
        &self,
        src: &SoftSpace,
        dst: &SoftSpace,
        basis: &[SoftSet],
    ) -> Result<Option<SoftSet>> {
        self.check_spaces(src, dst)?;
        if !dst.is_basis(basis)? {
            return Err(Error::NotABasis);
        }
        for b in basis {
            if !src.is_open(&self.preimage(b)?)? {
                return Ok(Some(b.clone()));
            }
        }
        Ok(None)
    }
}
