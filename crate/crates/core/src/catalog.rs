//! Regression catalog of known defective and non-defective cases.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::terracini::{secant_dimension, CohomologyConfig, SecantDimension};
use crate::variety::{basis_size, BundleDegree, MultiProjectiveFormat};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub name: String,
    pub format: MultiProjectiveFormat,
    pub bundle: BundleDegree,
    pub z: usize,
    pub expected_defect: usize,
    /// Where the expected value comes from.
    pub provenance: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogOutcome {
    pub entry: CatalogEntry,
    pub observed: SecantDimension,
    pub matches: bool,
}

fn entry(
    name: String,
    dims: &[usize],
    degrees: &[u32],
    z: usize,
    defect: usize,
    provenance: &str,
) -> CatalogEntry {
    CatalogEntry {
        name,
        format: MultiProjectiveFormat::new(dims.to_vec()).expect("catalog formats are valid"),
        bundle: BundleDegree::new(degrees.to_vec()),
        z,
        expected_defect: defect,
        provenance: provenance.into(),
    }
}

pub fn default_catalog() -> Vec<CatalogEntry> {
    let mut out = Vec::new();
    // P1 x P1 in O(2a, 2): the square of the (a, 1) curve through 2a+1
    // general points is singular at all of them, so sigma_{2a+1} misses its
    // expected dimension by one.
    for a in 1..=3u32 {
        let x = MultiProjectiveFormat::new(vec![1, 1]).expect("valid");
        let l = BundleDegree::new(vec![2 * a, 2]);
        let n_sections = basis_size(&x, &l).expect("small");
        for z in 1.. {
            if 3 * z > n_sections + 2 {
                break;
            }
            let defect = usize::from(z == 2 * a as usize + 1);
            out.push(entry(
                format!("P1xP1 O({},2) z={z}", 2 * a),
                &[1, 1],
                &[2 * a, 2],
                z,
                defect,
                "double curve of bidegree (a,1) on P1xP1",
            ));
        }
    }
    out.push(entry(
        "P2 conics z=1".into(),
        &[2],
        &[2],
        1,
        0,
        "direct count",
    ));
    out.push(entry(
        "P2 conics z=2".into(),
        &[2],
        &[2],
        2,
        1,
        "derived: brute-force rank of the explicit 6x6 matrix",
    ));
    for (name, dims, d, z) in [
        ("P2 quartics z=5", vec![2], 4, 5),
        ("P3 quartics z=9", vec![3], 4, 9),
        ("P4 cubics z=7", vec![4], 3, 7),
        ("P4 quartics z=14", vec![4], 4, 14),
    ] {
        out.push(entry(
            name.into(),
            &dims,
            &[d],
            z,
            1,
            "Alexander-Hirschowitz exception",
        ));
    }
    out.push(entry(
        "P2xP2 O(1,1) z=2".into(),
        &[2, 2],
        &[1, 1],
        2,
        1,
        "3x3 matrices of rank <= 2 form a hypersurface",
    ));
    for (name, dims, degrees, z) in [
        ("(P1)^3 O(3,3,2) z=12", vec![1, 1, 1], vec![3, 3, 2], 12),
        ("P2xP1xP1 O(3,3,2) z=24", vec![2, 1, 1], vec![3, 3, 2], 24),
        (
            "(P1)^4 O(3,3,2,2) z=29",
            vec![1, 1, 1, 1],
            vec![3, 3, 2, 2],
            29,
        ),
    ] {
        out.push(entry(
            name.into(),
            &dims,
            &degrees,
            z,
            0,
            "P1-product theorem, d_i >= 2",
        ));
    }
    out
}

/// Runs the entries concurrently; outcomes keep the catalog order.
pub fn run_catalog(
    entries: &[CatalogEntry],
    config: &CohomologyConfig,
) -> Result<Vec<CatalogOutcome>> {
    entries
        .par_iter()
        .map(|e| {
            let observed = secant_dimension(&e.format, &e.bundle, e.z, config)?;
            Ok(CatalogOutcome {
                matches: observed.defect == e.expected_defect,
                entry: e.clone(),
                observed,
            })
        })
        .collect()
}
