//! Regression drivers: worked `d3` values, signature cross-validation on
//! random and diagram matrices, the closed-form sweep and the obstruction
//! scan, bundled into one report.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::cosmetic::{rot_range, scan, CellStatus, SlopePair, SolverSummary};
use crate::error::Result;
use crate::exact_arith::{rat, rational_serde, Rational};
use crate::exact_linalg::appendix::{self, verify_appendix_perturbed, AppendixReport};
use crate::exact_linalg::{determinant, signature_congruence, signature_descartes, IntMatrix};
use crate::invariants::d3_spectrum;
use crate::surgery_diagram::LegendrianData;

/// A published `d3` spectrum. `rot = None` takes the union over every
/// admissible rotation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WorkedD3 {
    pub tb: i64,
    pub rot: Option<i64>,
    #[serde(with = "rational_serde")]
    pub slope: Rational,
    #[serde(with = "rational_serde::vec")]
    pub expected: Vec<Rational>,
}

pub fn worked_values() -> Vec<WorkedD3> {
    let w = |tb, rot, slope, expected: &[Rational]| WorkedD3 { tb, rot, slope, expected: expected.to_vec() };
    vec![
        w(-1, Some(0), rat(-1, 2), &[rat(1, 1)]),
        w(-1, Some(0), rat(1, 2), &[rat(0, 1)]),
        w(-1, Some(0), rat(-1, 3), &[rat(1, 1)]),
        w(-1, Some(0), rat(1, 3), &[rat(0, 1)]),
        w(-1, Some(0), rat(-2, 1), &[rat(1, 4)]),
        w(-1, Some(0), rat(2, 1), &[rat(1, 4)]),
        w(-2, Some(1), rat(-1, 1), &[rat(1, 1)]),
        w(-2, Some(-1), rat(-1, 1), &[rat(1, 1)]),
        w(-2, Some(1), rat(1, 1), &[rat(0, 1), rat(2, 1)]),
        w(-2, Some(1), rat(-1, 2), &[rat(-1, 1), rat(1, 1)]),
        w(-3, None, rat(-2, 1), &[rat(3, 4), rat(5, 4)]),
        w(-3, None, rat(2, 1), &[rat(1, 4), rat(7, 4), rat(17, 4)]),
    ]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WorkedCheck {
    pub case: WorkedD3,
    #[serde(with = "rational_serde::vec")]
    pub computed: Vec<Rational>,
    pub ok: bool,
}

pub fn check_worked_values() -> Result<Vec<WorkedCheck>> {
    worked_values()
        .into_iter()
        .map(|case| {
            let rots = match case.rot {
                Some(r) => vec![r],
                None => rot_range(case.tb)?,
            };
            let mut computed = BTreeSet::new();
            for r in rots {
                computed.extend(d3_spectrum(&LegendrianData::new(case.tb, r, None)?, &case.slope)?);
            }
            let computed: Vec<Rational> = computed.into_iter().collect();
            let ok = computed == case.expected;
            Ok(WorkedCheck { case, computed, ok })
        })
        .collect()
}

/// `count` nonsingular symmetric matrices of size `1..=max_size` with
/// entries in `[-bound, bound]`, reproducible from `seed`.
pub fn random_symmetric_matrices(seed: u64, count: usize, max_size: usize, bound: i64) -> Vec<IntMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let n = rng.gen_range(1..=max_size);
        let mut rows = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in i..n {
                let v = rng.gen_range(-bound..=bound);
                rows[i][j] = v;
                rows[j][i] = v;
            }
        }
        let m = IntMatrix::from_rows(&rows);
        if determinant(&m) != 0.into() {
            out.push(m);
        }
    }
    out
}

/// Intersection forms of the standard diagrams for `3 <= k <= k_max`,
/// `1 <= n <= n_max`, plus the `tb = -1, -2` chains.
pub fn diagram_matrices(k_max: i64, n_max: i64) -> Vec<IntMatrix> {
    let mut out = Vec::new();
    for n in 3..=n_max.max(3) as usize {
        out.push(appendix::tb1_minus_inv_n_matrix(n));
    }
    for n in 2..=n_max.max(2) as usize {
        out.push(appendix::tb2_minus_inv_n_matrix(n));
    }
    for k in 3..=k_max {
        if k >= 4 {
            out.push(appendix::tbk_minus_two_matrix(k));
        }
        out.push(appendix::tbk_plus_two_matrix(k));
        out.push(appendix::tbk_minus_one_matrix(k));
        out.push(appendix::tbk_plus_one_matrix(k));
        for n in 2..=n_max {
            out.push(appendix::tbk_minus_inv_n_matrix(k, n));
            out.push(appendix::tbk_plus_inv_n_matrix(k, n));
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SignatureDisagreement {
    pub matrix: IntMatrix,
    pub congruence: String,
    pub descartes: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SignatureReport {
    pub checked: usize,
    pub disagreements: Vec<SignatureDisagreement>,
}

/// Compares congruence diagonalization with the Descartes count.
pub fn cross_validate_signatures(mats: &[IntMatrix]) -> SignatureReport {
    let disagreements = mats
        .par_iter()
        .filter_map(|m| {
            let c = signature_congruence(m);
            let d = signature_descartes(m);
            (c != d).then(|| SignatureDisagreement {
                matrix: m.clone(),
                congruence: format!("{c:?}"),
                descartes: format!("{d:?}"),
            })
        })
        .collect();
    SignatureReport { checked: mats.len(), disagreements }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanSummary {
    pub cells: usize,
    pub obstructed: usize,
    pub contact_zero: Vec<(i64, i64, SlopePair)>,
    pub not_obstructed: Vec<(i64, i64, SlopePair)>,
    pub only_expected_exception: bool,
    pub solver: Vec<SolverSummary>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub appendix: AppendixReport,
    pub worked: Vec<WorkedCheck>,
    pub signatures: SignatureReport,
    pub scan: ScanSummary,
}

impl VerifyReport {
    /// First failed check, described in one line.
    pub fn first_failure(&self) -> Option<String> {
        if let Some(m) = self.appendix.mismatches.first() {
            return Some(format!(
                "closed form {} {}: expected {}, computed {} at {:?}",
                m.family, m.quantity, m.expected, m.computed, m.params
            ));
        }
        if let Some(w) = self.worked.iter().find(|w| !w.ok) {
            return Some(format!(
                "d3 at tb {} rot {:?} slope {}: expected {:?}, computed {:?}",
                w.case.tb,
                w.case.rot,
                w.case.slope,
                w.case.expected.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
                w.computed.iter().map(|r| r.to_string()).collect::<Vec<_>>()
            ));
        }
        if let Some(d) = self.signatures.disagreements.first() {
            return Some(format!("signature disagreement {} vs {} on\n{}", d.congruence, d.descartes, d.matrix));
        }
        if !self.scan.only_expected_exception {
            return Some(format!("unexpected unobstructed cells {:?}", self.scan.not_obstructed));
        }
        if let Some(s) = self.scan.solver.iter().find(|s| !s.agree || !s.solutions.is_empty()) {
            return Some(format!(
                "d3 equation at tb {} {:?}: {} solutions, solver and spectra agree: {}",
                s.tb,
                s.family,
                s.solutions.len(),
                s.agree
            ));
        }
        None
    }

    pub fn passed(&self) -> bool {
        self.first_failure().is_none()
    }
}

/// Runs every check. `corrupt` perturbs one closed-form family so that the
/// sweep must fail.
pub fn verify(k_max: i64, n_max: i64, seed: u64, corrupt: Option<&str>) -> Result<VerifyReport> {
    let k_max = k_max.max(3);
    let n_max = n_max.max(2);
    let appendix = verify_appendix_perturbed(k_max, n_max, corrupt);
    let worked = check_worked_values()?;
    let mut mats = random_symmetric_matrices(seed, 1000, 8, 9);
    mats.extend(diagram_matrices(k_max, n_max));
    let signatures = cross_validate_signatures(&mats);
    let report = scan(-k_max, -1, n_max)?;
    let pick = |st: CellStatus| -> Vec<(i64, i64, SlopePair)> {
        report.cells.iter().filter(|c| c.status == st).map(|c| (c.tb, c.rot, c.pair)).collect()
    };
    let scan = ScanSummary {
        cells: report.cells.len(),
        obstructed: pick(CellStatus::Obstructed).len(),
        contact_zero: pick(CellStatus::ContactZero),
        not_obstructed: report.not_obstructed.clone(),
        only_expected_exception: report.only_expected_exception,
        solver: report.solver,
    };
    Ok(VerifyReport { seed, appendix, worked, signatures, scan })
}
