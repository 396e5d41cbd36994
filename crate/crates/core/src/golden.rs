//! Reference data shipped with the crate, embedded at compile time.
//!
//! The files under `data/` are transcribed by hand and are never
//! regenerated from computed output.

use std::collections::BTreeMap;

use serde::Deserialize;

use crate::exact::{int, ExponentMatrix, Matrix};
use crate::perm::Perm;

pub const APPENDIX_A_JSON: &str = include_str!("../data/appendix_a.json");
pub const EX4_JSON: &str = include_str!("../data/ex4.json");
pub const TABLE1_JSON: &str = include_str!("../data/table1.json");
pub const TABLE2_JSON: &str = include_str!("../data/table2.json");

#[derive(Deserialize)]
struct AppendixBlock {
    order: Vec<String>,
    targets: Vec<Vec<i64>>,
}

#[derive(Deserialize)]
struct AppendixFile {
    n3: AppendixBlock,
    n4: AppendixBlock,
}

/// Target vectors listed for one size, in the listed permutation order.
#[derive(Clone, Debug)]
pub struct AppendixTargets {
    pub order: Vec<Perm>,
    pub targets: Vec<Vec<i64>>,
}

impl AppendixTargets {
    /// The same vectors re-indexed so that entry `k` belongs to `perms[k]`.
    pub fn reindexed(&self, perms: &[Perm]) -> Vec<Vec<i64>> {
        let pos: Vec<usize> = perms
            .iter()
            .map(|p| {
                self.order
                    .iter()
                    .position(|o| o == p)
                    .expect("listed order covers the group")
            })
            .collect();
        self.targets
            .iter()
            .map(|b| pos.iter().map(|&k| b[k]).collect())
            .collect()
    }
}

/// Listed consistent targets for `n ∈ {3, 4}`.
pub fn appendix_targets(n: usize) -> Option<AppendixTargets> {
    let file: AppendixFile = serde_json::from_str(APPENDIX_A_JSON).expect("embedded appendix data");
    let block = match n {
        3 => file.n3,
        4 => file.n4,
        _ => return None,
    };
    let order = block
        .order
        .iter()
        .map(|c| Perm::from_cycles(n, c).expect("embedded cycle notation"))
        .collect();
    Some(AppendixTargets {
        order,
        targets: block.targets,
    })
}

fn int_matrix(rows: &[Vec<i64>]) -> ExponentMatrix {
    let n = rows.len();
    Matrix::from_fn(n, rows.first().map_or(0, Vec::len), |i, j| int(rows[i][j]))
}

/// The displayed mixed exponent matrices for `n ∈ {2, 3, 4}`.
pub fn mixed_examples(n: usize) -> Option<ExponentMatrix> {
    let file: BTreeMap<String, Vec<Vec<i64>>> = serde_json::from_str(EX4_JSON).expect("embedded example data");
    file.get(&format!("n{n}")).map(|rows| int_matrix(rows))
}

#[derive(Deserialize)]
struct Table1File {
    base_matrices: BTreeMap<String, Vec<Vec<i64>>>,
}

/// The six tabulated `n = 3` converter base matrices, keyed by permutation.
pub fn table1() -> Vec<(Perm, ExponentMatrix)> {
    let file: Table1File = serde_json::from_str(TABLE1_JSON).expect("embedded table data");
    let mut out: Vec<(Perm, ExponentMatrix)> = file
        .base_matrices
        .iter()
        .map(|(k, rows)| {
            (
                Perm::from_cycles(3, k).expect("embedded cycle notation"),
                int_matrix(rows),
            )
        })
        .collect();
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

/// One row of the sign-matrix spectra table.
#[derive(Clone, Debug, Deserialize, PartialEq, Eq)]
pub struct SpectraRow {
    pub n: usize,
    pub det: Vec<i64>,
    pub per: Vec<i64>,
    pub trace: Vec<i64>,
}

#[derive(Deserialize)]
struct Table2File {
    rows: Vec<SpectraRow>,
}

pub fn table2() -> Vec<SpectraRow> {
    let file: Table2File = serde_json::from_str(TABLE2_JSON).expect("embedded table data");
    file.rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::enumerate_sn;

    #[test]
    fn listed_orders_are_lexicographic() {
        for n in [3, 4] {
            assert_eq!(appendix_targets(n).unwrap().order, enumerate_sn(n).unwrap());
        }
    }

    #[test]
    fn shapes() {
        assert_eq!(appendix_targets(3).unwrap().targets.len(), 15);
        assert_eq!(appendix_targets(4).unwrap().targets.len(), 8);
        assert_eq!(mixed_examples(4).unwrap()[(0, 3)], int(8));
        assert_eq!(table1().len(), 6);
        assert!(table1()[0].0.is_identity());
        assert_eq!(table2().len(), 3);
    }
}
