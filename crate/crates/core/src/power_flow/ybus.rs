use num_complex::Complex64;

use crate::grid::{Branch, GridCase};

/// Two-port admittances of one pi-model branch, per unit.
#[derive(Debug, Clone, Copy)]
pub(crate) struct BranchPrimitive {
    pub yff: Complex64,
    pub yft: Complex64,
    pub ytf: Complex64,
    pub ytt: Complex64,
}

pub(crate) fn branch_primitive(br: &Branch) -> BranchPrimitive {
    let ys = Complex64::new(1.0, 0.0) / Complex64::new(br.r, br.x);
    let charging = Complex64::new(0.0, br.b_charging / 2.0);
    let tap = Complex64::from_polar(br.tap_ratio, br.phase_shift.to_radians());
    let ytt = ys + charging;
    BranchPrimitive {
        yff: ytt / (tap * tap.conj()),
        yft: -ys / tap.conj(),
        ytf: -ys / tap,
        ytt,
    }
}

/// Sparse complex nodal admittance matrix, one sorted row per bus position.
#[derive(Debug, Clone, PartialEq)]
pub struct AdmittanceMatrix {
    rows: Vec<Vec<(usize, Complex64)>>,
}

impl AdmittanceMatrix {
    pub fn dimension(&self) -> usize {
        self.rows.len()
    }

    /// Stored entries of row `i` as `(column, value)`, ascending by column.
    pub fn row(&self, i: usize) -> &[(usize, Complex64)] {
        &self.rows[i]
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        match self.rows[i].binary_search_by_key(&j, |&(c, _)| c) {
            Ok(k) => self.rows[i][k].1,
            Err(_) => Complex64::new(0.0, 0.0),
        }
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        self.rows
            .iter()
            .map(|row| row.iter().map(|&(j, y)| y * v[j]).sum())
            .collect()
    }

    fn add(&mut self, i: usize, j: usize, y: Complex64) {
        let row = &mut self.rows[i];
        match row.binary_search_by_key(&j, |&(c, _)| c) {
            Ok(k) => row[k].1 += y,
            Err(k) => row.insert(k, (j, y)),
        }
    }
}

/// Assembles the bus admittance matrix from in-service branches and bus
/// shunts.
pub fn build_ybus(case: &GridCase) -> AdmittanceMatrix {
    let n = case.buses.len();
    let mut y = AdmittanceMatrix {
        rows: (0..n)
            .map(|i| vec![(i, Complex64::new(0.0, 0.0))])
            .collect(),
    };
    let idx = case.bus_index();
    for br in case.branches.iter().filter(|b| b.in_service()) {
        let (f, t) = (idx.of(br.from_bus), idx.of(br.to_bus));
        let p = branch_primitive(br);
        y.add(f, f, p.yff);
        y.add(f, t, p.yft);
        y.add(t, f, p.ytf);
        y.add(t, t, p.ytt);
    }
    for (i, bus) in case.buses.iter().enumerate() {
        y.add(
            i,
            i,
            Complex64::new(bus.shunt_g, bus.shunt_b) / case.base_mva,
        );
    }
    y
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::testing::two_bus;
    use crate::grid::{bundled, BranchStatus};
    use std::collections::BTreeSet;

    #[test]
    fn single_reactance_branch() {
        let mut case = two_bus(0.0);
        case.branches[0].r = 0.0;
        case.branches[0].x = 0.1;
        let y = build_ybus(&case);
        assert!((y.get(0, 0) - Complex64::new(0.0, -10.0)).norm() < 1e-12);
        assert!((y.get(1, 1) - Complex64::new(0.0, -10.0)).norm() < 1e-12);
        assert!((y.get(0, 1) - Complex64::new(0.0, 10.0)).norm() < 1e-12);
        assert!((y.get(1, 0) - Complex64::new(0.0, 10.0)).norm() < 1e-12);
    }

    #[test]
    fn out_branch_equals_deleted_branch() {
        let mut with_out = bundled::case14();
        with_out.branches[3].status = BranchStatus::Out;
        let mut deleted = bundled::case14();
        deleted.branches.remove(3);
        let (a, b) = (build_ybus(&with_out), build_ybus(&deleted));
        for i in 0..14 {
            for j in 0..14 {
                assert!((a.get(i, j) - b.get(i, j)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn row_pattern_is_neighbors_plus_diagonal() {
        let case = bundled::case14();
        let y = build_ybus(&case);
        let idx = case.bus_index();
        for i in 0..case.buses.len() {
            let mut expect: BTreeSet<usize> = [i].into();
            for br in &case.branches {
                let (f, t) = (idx.of(br.from_bus), idx.of(br.to_bus));
                if f == i {
                    expect.insert(t);
                }
                if t == i {
                    expect.insert(f);
                }
            }
            let got: BTreeSet<usize> = y.row(i).iter().map(|&(c, _)| c).collect();
            assert_eq!(got, expect, "row {i}");
        }
    }

    #[test]
    fn symmetric_pattern_without_taps() {
        let case = bundled::case30();
        let y = build_ybus(&case);
        for i in 0..y.dimension() {
            for &(j, _) in y.row(i) {
                assert!(y.row(j).iter().any(|&(c, _)| c == i));
            }
        }
    }
}
