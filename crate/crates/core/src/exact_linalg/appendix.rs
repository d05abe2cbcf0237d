//! Closed-form determinant, signature, inverse-entry and `c1^2` formulas for
//! the intersection forms of the standard surgery diagrams, checked against
//! the generic exact routines.
//!
//! Notation: the knot has `tb = -k` and rotation `i`; `e = ±1` is the sign
//! of the stabilization on the second push-off, `j` the rotation of the
//! `tb = -2` chain unknot and `s` that of the final `tb = -n` unknot.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::{chain_matrix, determinant, inverse, is_negative_definite, signature, IntMatrix};
use crate::exact_arith::{rat, Rational};

/// Formula families checked by [`verify_appendix`].
pub const FAMILIES: &[&str] = &[
    "chain_det",
    "chain_prime_det",
    "bordered_block_det",
    "tb1_minus_inv_n",
    "tb2_minus_inv_n",
    "tbk_minus_two",
    "tbk_plus_two",
    "tbk_minus_one",
    "tbk_plus_one",
    "tbk_minus_inv_n",
    "tbk_plus_inv_n",
];

fn big(x: i64) -> BigInt {
    BigInt::from(x)
}

fn int(x: i64) -> Rational {
    Rational::from_integer(big(x))
}

fn pow_m1(e: i64) -> i64 {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// `I'_n`: the chain matrix with first row `(-1, -1, 0, ...)` and first
/// column `(-1, 0, ..., 0)`. Not symmetric.
pub fn chain_prime_matrix(n: usize) -> IntMatrix {
    let mut m = chain_matrix(n);
    m.set(0, 0, big(-1));
    if n > 1 {
        m.set(1, 0, big(0));
    }
    m
}

/// `[[a, b], [b, c]]` bordered onto the chain `I_n`, joined by a single `-1`
/// between the second row and the first chain entry.
pub fn bordered_block_matrix(a: i64, b: i64, c: i64, n: usize) -> IntMatrix {
    let mut m = IntMatrix::zeros(n + 2);
    m.set(0, 0, big(a));
    m.set_sym(0, 1, big(b));
    m.set(1, 1, big(c));
    for t in 0..n {
        m.set(t + 2, t + 2, big(-2));
        if t + 1 < n {
            m.set_sym(t + 2, t + 3, big(-1));
        }
    }
    if n > 0 {
        m.set_sym(1, 2, big(-1));
    }
    m
}

/// Form of smooth `-1/n` surgery on a `tb = -1` knot (`n >= 3`).
pub fn tb1_minus_inv_n_matrix(n: usize) -> IntMatrix {
    assert!(n >= 3);
    let mut m = IntMatrix::zeros(n);
    let head = [[0, -1, -1], [-1, 0, -1], [-1, -1, -3]];
    for (i, row) in head.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            m.set(i, j, big(*v));
        }
    }
    for t in 3..n {
        m.set(t, t, big(-2));
        m.set_sym(t - 1, t, big(-1));
    }
    m
}

/// Form of smooth `-1/n` surgery on a `tb = -2` knot (`n >= 2`).
pub fn tb2_minus_inv_n_matrix(n: usize) -> IntMatrix {
    assert!(n >= 2);
    let mut m = IntMatrix::zeros(n);
    m.set(0, 0, big(-1));
    m.set_sym(0, 1, big(-2));
    m.set(1, 1, big(-5));
    for t in 2..n {
        m.set(t, t, big(-2));
        m.set_sym(t - 1, t, big(-1));
    }
    m
}

/// The `tb = -k` family: head `[[-k+1, -k], [-k, -k-2]]` followed by a `-2`
/// chain, `size` components in total, with diagonal overrides.
pub fn tbk_matrix(k: i64, size: usize, overrides: &[(usize, i64)]) -> IntMatrix {
    let mut m = IntMatrix::zeros(size);
    m.set(0, 0, big(-k + 1));
    if size > 1 {
        m.set_sym(0, 1, big(-k));
        m.set(1, 1, big(-k - 2));
    }
    for t in 2..size {
        m.set(t, t, big(-2));
        m.set_sym(t - 1, t, big(-1));
    }
    for &(idx, v) in overrides {
        m.set(idx, idx, big(v));
    }
    m
}

pub fn tbk_minus_two_matrix(k: i64) -> IntMatrix {
    tbk_matrix(k, (k - 2) as usize, &[])
}

pub fn tbk_plus_two_matrix(k: i64) -> IntMatrix {
    tbk_matrix(k, (k + 2) as usize, &[])
}

pub fn tbk_minus_one_matrix(k: i64) -> IntMatrix {
    tbk_matrix(k, (k - 1) as usize, &[])
}

pub fn tbk_plus_one_matrix(k: i64) -> IntMatrix {
    tbk_matrix(k, (k + 1) as usize, &[])
}

/// `-3` in the `k`-th diagonal slot; `n >= 2`.
pub fn tbk_minus_inv_n_matrix(k: i64, n: i64) -> IntMatrix {
    tbk_matrix(k, (k + n - 2) as usize, &[((k - 1) as usize, -3)])
}

/// Last diagonal entry `-n-1`.
pub fn tbk_plus_inv_n_matrix(k: i64, n: i64) -> IntMatrix {
    tbk_matrix(k, (k + 1) as usize, &[(k as usize, -n - 1)])
}

/// Rotations `k-1, k-3, ..., -k+1` of a knot with `tb = -k` and `tau = 0`.
pub fn rotation_range(k: i64) -> Vec<i64> {
    (0..k).map(|t| k - 1 - 2 * t).collect()
}

/// Closed forms, keyed by quantity.
pub mod closed_form {
    use super::*;

    pub fn chain_det(n: i64) -> BigInt {
        big(pow_m1(n) * (n + 1))
    }

    pub fn bordered_block_det(a: i64, b: i64, c: i64, n: i64) -> BigInt {
        big(pow_m1(n) * ((a * (c + 1) - b * b) * n + (a * c - b * b)))
    }

    /// The same determinant as printed with `(ac - b) n` in place of
    /// `(ac - b^2)`; kept only to report where it diverges.
    pub fn bordered_block_det_variant(a: i64, b: i64, c: i64, n: i64) -> BigInt {
        big(pow_m1(n) * ((a * (c + 1) - b * b) * n + (a * c - b) * n))
    }

    pub fn tbk_minus_two_q(k: i64) -> [Rational; 3] {
        [rat(-k * k + 2 * k + 2, 2), rat(k * k - 3 * k, 2), rat(-k * k + 4 * k - 3, 2)]
    }

    pub fn tbk_minus_two_c2(k: i64, i: i64, e: i64) -> Rational {
        rat(-i * i, 2) + int(e * (k - 3) * i) + rat(-k * k + 4 * k - 3, 2)
    }

    pub fn tbk_plus_two_q(k: i64) -> [Rational; 3] {
        [rat(k * k + 2 * k + 2, 2), rat(-(k * k + k), 2), rat(k * k - 1, 2)]
    }

    /// Here the `±` runs opposite to the stabilization sign.
    pub fn tbk_plus_two_c2(k: i64, i: i64, e: i64) -> Rational {
        rat(i * i, 2) - int(e * (k + 1) * i) + rat(k * k - 1, 2)
    }

    pub fn tbk_minus_one_q(k: i64) -> [Rational; 3] {
        [int(-k * k + k + 1), int(k * k - 2 * k), int(-k * k + 3 * k - 2)]
    }

    pub fn tbk_minus_one_c2(k: i64, i: i64, e: i64) -> Rational {
        int(-i * i + 2 * e * (k - 2) * i - k * k + 3 * k - 2)
    }

    pub fn tbk_plus_one_q(k: i64) -> [Rational; 3] {
        [int(k * k + k + 1), int(-k * k), int(k * k - k)]
    }

    pub fn tbk_plus_one_c2(k: i64, i: i64, e: i64) -> Rational {
        int(i * i - 2 * e * k * i + k * k - k)
    }

    /// `q'_{11}, q'_{12}, q'_{22}, q'_{1k}, q'_{2k}, q'_{kk}`.
    pub fn tbk_minus_inv_n_q(k: i64, n: i64) -> [Rational; 6] {
        let sk = pow_m1(k);
        [
            int(-k * k * n + k + 1),
            int(k * (k * n - 1 - n)),
            int((1 - k) * (k * n - 1 - n)),
            int(sk * k * (n - 1)),
            int(sk * (1 - k) * (n - 1)),
            int(1 - n),
        ]
    }

    pub fn tbk_minus_inv_n_c2(k: i64, n: i64, i: i64, e: i64, j: i64) -> Rational {
        let sk = pow_m1(k);
        int(-n + 1 + (1 - k) * (-1 + (k - 1) * n) - j * 2 * sk * (n - 1) * (-i + e * k - e)
            + e * 2 * i * (-1 + n * (k - 1))
            - n * i * i)
    }

    /// `q'_{11}, q'_{12}, q'_{22}, q'_{1,k+1}, q'_{2,k+1}, q'_{k+1,k+1}`.
    pub fn tbk_plus_inv_n_q(k: i64, n: i64) -> [Rational; 6] {
        let sk = pow_m1(k);
        [
            int(k * k * n + k + 1),
            int(-k * k * n + k * n - k),
            int((k - 1) * (k - 1) * n + k - 1),
            int(sk * k),
            int(sk * (1 - k)),
            int(0),
        ]
    }

    /// `c1^2` obtained by expanding the quadratic form in the inverse entries.
    pub fn tbk_plus_inv_n_c2(k: i64, n: i64, i: i64, e: i64, s: i64) -> Rational {
        let sk = pow_m1(k);
        let d = i - e * (k - 1);
        int(k - 1 - 2 * e * i + n * d * d + 2 * s * sk * (i - e * k + e))
    }

    /// A circulating expanded form of the previous quantity whose `n`-part
    /// does not follow from the inverse entries; reported, never trusted.
    pub fn tbk_plus_inv_n_c2_variant(k: i64, n: i64, i: i64, e: i64, s: i64) -> Rational {
        let sk = pow_m1(k);
        int(-1 + k - 2 * k * n * (2 * i * i + e * 3 * i + 1)
            + n * k * k * (1 + e * 2 * i) * (1 + e * 2 * i)
            + 2 * s * sk * (i - e * k + e)
            + n * (i + e) * (i + e)
            - e * 2 * i)
    }

    pub fn tb2_minus_inv_n_q(n: i64) -> [Rational; 3] {
        [int(3 - 4 * n), int(2 * n - 2), int(1 - n)]
    }
}

/// One failed comparison between a closed form and a direct computation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub family: String,
    pub params: BTreeMap<String, i64>,
    pub quantity: String,
    pub expected: String,
    pub computed: String,
    pub matrix: IntMatrix,
}

/// A formula variant that is known not to hold, with counterexamples.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Erratum {
    pub family: String,
    pub description: String,
    pub checked: u64,
    pub disagreements: u64,
    pub examples: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct FamilySummary {
    pub family: String,
    pub checks: u64,
    pub mismatches: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AppendixReport {
    pub k_max: i64,
    pub n_max: i64,
    pub checks: u64,
    pub families: Vec<FamilySummary>,
    pub mismatches: Vec<Mismatch>,
    pub errata: Vec<Erratum>,
}

impl AppendixReport {
    pub fn is_clean(&self) -> bool {
        self.mismatches.is_empty()
    }
}

#[derive(Default)]
struct Cell {
    family: &'static str,
    checks: u64,
    mismatches: Vec<Mismatch>,
    errata: BTreeMap<&'static str, (String, u64, u64, Vec<String>)>,
    perturb: bool,
}

impl Cell {
    fn new(family: &'static str, perturb: Option<&str>) -> Self {
        Cell { family, perturb: perturb == Some(family), ..Default::default() }
    }

    fn check<T: PartialEq + ToString>(
        &mut self,
        params: &[(&str, i64)],
        quantity: &str,
        expected: T,
        computed: T,
        matrix: &IntMatrix,
    ) where
        T: Clone + std::ops::Add<Output = T> + One,
    {
        self.checks += 1;
        let expected = if self.perturb { expected + T::one() } else { expected };
        if expected != computed {
            self.mismatches.push(Mismatch {
                family: self.family.to_string(),
                params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
                quantity: quantity.to_string(),
                expected: expected.to_string(),
                computed: computed.to_string(),
                matrix: matrix.clone(),
            });
        }
    }

    fn erratum(&mut self, key: &'static str, description: &str, agrees: bool, example: impl FnOnce() -> String) {
        let entry = self.errata.entry(key).or_insert_with(|| (description.to_string(), 0, 0, Vec::new()));
        entry.1 += 1;
        if !agrees {
            entry.2 += 1;
            if entry.3.len() < 3 {
                entry.3.push(example());
            }
        }
    }
}

fn q_entries(inv: &super::Inverse, idx: &[(usize, usize)]) -> Vec<Rational> {
    idx.iter().map(|&(a, b)| inv.entry(a, b)).collect()
}

fn rot_vector(size: usize, entries: &[(usize, i64)]) -> Vec<BigInt> {
    let mut r = vec![BigInt::zero(); size];
    for &(idx, v) in entries {
        r[idx] = big(v);
    }
    r
}

#[derive(Clone, Copy, Debug)]
enum Job {
    ChainDet(i64),
    ChainPrimeDet(i64),
    BorderedBlock(i64),
    Tb1MinusInvN(i64),
    Tb2MinusInvN(i64),
    TbkMinusTwo(i64),
    TbkPlusTwo(i64),
    TbkMinusOne(i64),
    TbkPlusOne(i64),
    TbkMinusInvN(i64, i64),
    TbkPlusInvN(i64, i64),
}

fn run_job(job: Job, perturb: Option<&str>) -> Cell {
    use closed_form as cf;
    match job {
        Job::ChainDet(n) => {
            let mut c = Cell::new("chain_det", perturb);
            let m = chain_matrix(n as usize);
            c.check(&[("n", n)], "det", cf::chain_det(n), determinant(&m), &m);
            c.check(&[("n", n)], "negative_definite", BigInt::one(), big(is_negative_definite(&m) as i64), &m);
            c
        }
        Job::ChainPrimeDet(n) => {
            let mut c = Cell::new("chain_prime_det", perturb);
            let m = chain_prime_matrix(n as usize);
            c.check(&[("n", n)], "det", -determinant(&chain_matrix(n as usize - 1)), determinant(&m), &m);
            c
        }
        Job::BorderedBlock(n) => {
            let mut c = Cell::new("bordered_block_det", perturb);
            for a in -6..=6 {
                for b in -6..=6 {
                    for cc in -6..=6 {
                        let m = bordered_block_matrix(a, b, cc, n as usize);
                        let d = determinant(&m);
                        let p = [("a", a), ("b", b), ("c", cc), ("n", n)];
                        c.check(&p, "det", cf::bordered_block_det(a, b, cc, n), d.clone(), &m);
                        let variant = cf::bordered_block_det_variant(a, b, cc, n);
                        c.erratum(
                            "det_variant",
                            "determinant printed with (ac - b) n in place of (ac - b^2)",
                            variant == d,
                            || format!("a={a} b={b} c={cc} n={n}: variant {variant}, det {d}"),
                        );
                        if a * cc - b * b > 0 && a * (cc + 1) - b * b >= 0 {
                            let nd = is_negative_definite(&m);
                            c.erratum(
                                "definite_without_sign",
                                "ac - b^2 > 0 and a(c+1) - b^2 >= 0 imply negative definite (fails unless a < 0)",
                                nd,
                                || format!("a={a} b={b} c={cc} n={n} is not negative definite"),
                            );
                            if a < 0 {
                                c.check(&p, "negative_definite", BigInt::one(), big(nd as i64), &m);
                            }
                        }
                    }
                }
            }
            c
        }
        Job::Tb1MinusInvN(n) => {
            let mut c = Cell::new("tb1_minus_inv_n", perturb);
            let m = tb1_minus_inv_n_matrix(n as usize);
            let p = [("n", n)];
            c.check(&p, "det", big(pow_m1(n - 1)), determinant(&m), &m);
            c.check(&p, "sigma", big(-n + 2), sig(&m), &m);
            let inv = inverse(&m).expect("nonsingular");
            for x in [-1, 1] {
                let r = rot_vector(n as usize, &[(2, x)]);
                c.check(&[("n", n), ("rot", x)], "c1^2", int(2 - n), inv.quadratic_form(&r), &m);
            }
            c
        }
        Job::Tb2MinusInvN(n) => {
            let mut c = Cell::new("tb2_minus_inv_n", perturb);
            let m = tb2_minus_inv_n_matrix(n as usize);
            let p = [("n", n)];
            c.check(&p, "negative_definite", BigInt::one(), big(is_negative_definite(&m) as i64), &m);
            c.check(&p, "sigma", big(-n), sig(&m), &m);
            let inv = inverse(&m).expect("nonsingular");
            let got = q_entries(&inv, &[(0, 0), (1, 0), (1, 1)]);
            for (name, (want, got)) in ["q11", "q21", "q22"].iter().zip(cf::tb2_minus_inv_n_q(n).into_iter().zip(got)) {
                c.check(&p, name, want, got, &m);
            }
            for i in [-1, 1] {
                for j in [i - 2, i, i + 2] {
                    let v = inv.quadratic_form(&rot_vector(n as usize, &[(0, i), (1, j)]));
                    let ok = v == int(-9 * n + 8) || v == int(-n);
                    // A value outside {-9n+8, -n} is reported as a miss on the nearer one.
                    let want = if ok { v.clone() } else { int(-n) };
                    c.check(&[("n", n), ("i", i), ("j", j)], "c1^2 in {-9n+8, -n}", want, v, &m);
                }
            }
            c
        }
        Job::TbkMinusTwo(k) => tbk_basic(
            "tbk_minus_two",
            k,
            tbk_minus_two_matrix(k),
            -k + 2,
            cf::tbk_minus_two_q(k),
            cf::tbk_minus_two_c2,
            perturb,
        ),
        Job::TbkPlusTwo(k) => tbk_basic(
            "tbk_plus_two",
            k,
            tbk_plus_two_matrix(k),
            -k,
            cf::tbk_plus_two_q(k),
            cf::tbk_plus_two_c2,
            perturb,
        ),
        Job::TbkMinusOne(k) => tbk_basic(
            "tbk_minus_one",
            k,
            tbk_minus_one_matrix(k),
            -k + 1,
            cf::tbk_minus_one_q(k),
            cf::tbk_minus_one_c2,
            perturb,
        ),
        Job::TbkPlusOne(k) => tbk_basic(
            "tbk_plus_one",
            k,
            tbk_plus_one_matrix(k),
            -k + 1,
            cf::tbk_plus_one_q(k),
            cf::tbk_plus_one_c2,
            perturb,
        ),
        Job::TbkMinusInvN(k, n) => {
            let mut c = Cell::new("tbk_minus_inv_n", perturb);
            let m = tbk_minus_inv_n_matrix(k, n);
            let size = m.size();
            let kk = (k - 1) as usize;
            let p = [("k", k), ("n", n)];
            c.check(&p, "negative_definite", BigInt::one(), big(is_negative_definite(&m) as i64), &m);
            c.check(&p, "sigma", big(-k - n + 2), sig(&m), &m);
            let inv = inverse(&m).expect("nonsingular");
            let got = q_entries(&inv, &[(0, 0), (0, 1), (1, 1), (0, kk), (1, kk), (kk, kk)]);
            let names = ["q11", "q12", "q22", "q1k", "q2k", "qkk"];
            for (name, (want, got)) in names.iter().zip(cf::tbk_minus_inv_n_q(k, n).into_iter().zip(got)) {
                c.check(&p, name, want, got, &m);
            }
            for i in rotation_range(k) {
                for e in [-1, 1] {
                    for j in [-1, 1] {
                        let r = rot_vector(size, &[(0, i), (1, i + e), (kk, j)]);
                        let pp = [("k", k), ("n", n), ("i", i), ("e", e), ("j", j)];
                        c.check(&pp, "c1^2", cf::tbk_minus_inv_n_c2(k, n, i, e, j), inv.quadratic_form(&r), &m);
                    }
                }
            }
            c
        }
        Job::TbkPlusInvN(k, n) => {
            let mut c = Cell::new("tbk_plus_inv_n", perturb);
            let m = tbk_plus_inv_n_matrix(k, n);
            let size = m.size();
            let last = k as usize;
            let p = [("k", k), ("n", n)];
            c.check(&p, "sigma", big(-k + 1), sig(&m), &m);
            let inv = inverse(&m).expect("nonsingular");
            let got = q_entries(&inv, &[(0, 0), (0, 1), (1, 1), (0, last), (1, last), (last, last)]);
            let names = ["q11", "q12", "q22", "q1,k+1", "q2,k+1", "qk+1,k+1"];
            for (name, (want, got)) in names.iter().zip(cf::tbk_plus_inv_n_q(k, n).into_iter().zip(got)) {
                c.check(&p, name, want, got, &m);
            }
            for i in rotation_range(k) {
                for e in [-1, 1] {
                    for s in rotation_range(n) {
                        let r = rot_vector(size, &[(0, i), (1, i + e), (last, s)]);
                        let direct = inv.quadratic_form(&r);
                        let pp = [("k", k), ("n", n), ("i", i), ("e", e), ("s", s)];
                        c.check(&pp, "c1^2", cf::tbk_plus_inv_n_c2(k, n, i, e, s), direct.clone(), &m);
                        let variant = cf::tbk_plus_inv_n_c2_variant(k, n, i, e, s);
                        c.erratum(
                            "c2_expanded_variant",
                            "expanded c1^2 with n-part -2kn(2i^2 ± 3i + 1) + nk^2(1 ± 2i)^2 + n(i ± 1)^2",
                            variant == direct,
                            || format!("k={k} n={n} i={i} e={e} s={s}: variant {variant}, direct {direct}"),
                        );
                    }
                }
            }
            c
        }
    }
}

fn sig(m: &IntMatrix) -> BigInt {
    big(signature(m).expect("nondegenerate form with consistent signature"))
}

fn tbk_basic(
    family: &'static str,
    k: i64,
    m: IntMatrix,
    sigma: i64,
    q: [Rational; 3],
    c2: fn(i64, i64, i64) -> Rational,
    perturb: Option<&str>,
) -> Cell {
    let mut c = Cell::new(family, perturb);
    let p = [("k", k)];
    c.check(&p, "sigma", big(sigma), sig(&m), &m);
    let inv = inverse(&m).expect("nonsingular");
    let size = m.size();
    if size >= 2 {
        let got = q_entries(&inv, &[(0, 0), (0, 1), (1, 1)]);
        for (name, (want, got)) in ["q11", "q12", "q22"].iter().zip(q.into_iter().zip(got)) {
            c.check(&p, name, want, got, &m);
        }
    } else {
        c.check(&p, "q11", q[0].clone(), inv.entry(0, 0), &m);
    }
    for i in rotation_range(k) {
        for e in [-1, 1] {
            let mut entries = vec![(0, i)];
            if size >= 2 {
                entries.push((1, i + e));
            }
            let r = rot_vector(size, &entries);
            c.check(&[("k", k), ("i", i), ("e", e)], "c1^2", c2(k, i, e), inv.quadratic_form(&r), &m);
        }
    }
    c
}

/// Checks every closed form for `3 <= k <= k_max`, `1 <= n <= n_max` and all
/// admissible rotation data.
pub fn verify_appendix(k_max: i64, n_max: i64) -> AppendixReport {
    verify_appendix_perturbed(k_max, n_max, None)
}

/// As [`verify_appendix`], but shifts every expected value of the named
/// family by one. Used as a negative control.
pub fn verify_appendix_perturbed(k_max: i64, n_max: i64, perturb: Option<&str>) -> AppendixReport {
    let mut jobs = Vec::new();
    let size_max = (k_max + n_max).max(3);
    for n in 1..=size_max {
        jobs.push(Job::ChainDet(n));
    }
    for n in 2..=size_max {
        jobs.push(Job::ChainPrimeDet(n));
    }
    for n in 1..=n_max.min(10) {
        jobs.push(Job::BorderedBlock(n));
    }
    for n in 3..=n_max.max(3) {
        jobs.push(Job::Tb1MinusInvN(n));
    }
    for n in 2..=n_max.max(2) {
        jobs.push(Job::Tb2MinusInvN(n));
    }
    for k in 3..=k_max.max(3) {
        jobs.push(Job::TbkMinusTwo(k));
        jobs.push(Job::TbkPlusTwo(k));
        jobs.push(Job::TbkMinusOne(k));
        jobs.push(Job::TbkPlusOne(k));
        for n in 1..=n_max {
            if n >= 2 {
                jobs.push(Job::TbkMinusInvN(k, n));
            }
            jobs.push(Job::TbkPlusInvN(k, n));
        }
    }
    let cells: Vec<Cell> = jobs.par_iter().map(|&j| run_job(j, perturb)).collect();

    let mut families: BTreeMap<&str, FamilySummary> = BTreeMap::new();
    let mut mismatches = Vec::new();
    let mut errata: BTreeMap<(&str, &str), Erratum> = BTreeMap::new();
    let mut checks = 0;
    for cell in cells {
        checks += cell.checks;
        let f = families.entry(cell.family).or_insert_with(|| FamilySummary {
            family: cell.family.to_string(),
            ..Default::default()
        });
        f.checks += cell.checks;
        f.mismatches += cell.mismatches.len() as u64;
        mismatches.extend(cell.mismatches);
        for (key, (desc, checked, bad, ex)) in cell.errata {
            let e = errata.entry((cell.family, key)).or_insert_with(|| Erratum {
                family: cell.family.to_string(),
                description: desc,
                checked: 0,
                disagreements: 0,
                examples: Vec::new(),
            });
            e.checked += checked;
            e.disagreements += bad;
            for x in ex {
                if e.examples.len() < 3 {
                    e.examples.push(x);
                }
            }
        }
    }
    let order = |name: &str| FAMILIES.iter().position(|f| *f == name).unwrap_or(usize::MAX);
    let mut families: Vec<FamilySummary> = families.into_values().collect();
    families.sort_by_key(|f| order(&f.family));
    AppendixReport {
        k_max,
        n_max,
        checks,
        families,
        mismatches,
        errata: errata.into_values().collect(),
    }
}
