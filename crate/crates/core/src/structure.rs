//! Critical curves, their face partition and caustics computed together.

use crate::caustics::{map_caustic, Caustic};
use crate::critical::{build_partition, check_nondegenerate, trace_critical_curves, CriticalCurve, Nondegeneracy, RegionPartition};
use crate::{RationalFn, Result, Tolerances};

#[derive(Debug, Clone)]
pub struct CriticalStructure {
    pub r: RationalFn,
    pub tol: Tolerances,
    pub curves: Vec<CriticalCurve>,
    pub partition: RegionPartition,
    pub caustics: Vec<Caustic>,
    pub nondegeneracy: Nondegeneracy,
}

impl CriticalStructure {
    pub fn build(r: &RationalFn, tol: &Tolerances) -> Result<Self> {
        let curves = trace_critical_curves(r, tol)?;
        let partition = build_partition(r, &curves, tol)?;
        let caustics = curves.iter().map(|c| map_caustic(r, c)).collect::<Result<Vec<_>>>()?;
        let nondegeneracy = check_nondegenerate(r, &curves, tol);
        Ok(Self { r: r.clone(), tol: *tol, curves, partition, caustics, nondegeneracy })
    }

    pub fn cusp_count(&self) -> usize {
        self.curves.iter().map(|c| c.cusps.len()).sum()
    }
}
