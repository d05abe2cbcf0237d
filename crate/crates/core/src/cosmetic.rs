//! Cosmetic contact surgery: candidate slope pairs, `d3` obstructions,
//! exact searches for coincidences of `d3`, and the classification of
//! contact surgeries on Legendrian unknots.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::exact_arith::{cs_set, lens_parameters, mod_inverse, rat, rational_serde, Rational, Slope};
use crate::exact_linalg::appendix::closed_form as cf;
use crate::exact_linalg::IntMatrix;
use crate::farey::{
    class_key, class_representatives, count_classes, minimal_path, shorten, Boundary, ClassKey,
    DecoratedPath, Direction, Sign, Tightness,
};
use crate::invariants::{d3_from_parts, d3_table};
use crate::surgery_diagram::LegendrianData;

/// A pair of smooth slopes `{-r, r}` that could be cosmetic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum SlopePair {
    PmTwo,
    /// `±1/n`; `n = 1` is the pair `±1`.
    PmOneOver { n: i64 },
}

impl SlopePair {
    pub fn negative(self) -> Rational {
        match self {
            SlopePair::PmTwo => rat(-2, 1),
            SlopePair::PmOneOver { n } => rat(-1, n),
        }
    }

    pub fn positive(self) -> Rational {
        -self.negative()
    }

    pub fn label(self) -> String {
        match self {
            SlopePair::PmTwo => "±2".into(),
            SlopePair::PmOneOver { n: 1 } => "±1".into(),
            SlopePair::PmOneOver { n } => format!("±1/{n}"),
        }
    }
}

/// Slope pairs that can be purely cosmetic for a nontrivial knot of the
/// given genus, with `n <= n_max`. `±2` needs genus 2.
pub fn candidate_slopes(genus: i64, n_max: i64) -> Vec<SlopePair> {
    let mut out = Vec::new();
    if genus == 2 {
        out.push(SlopePair::PmTwo);
    }
    out.extend((1..=n_max).map(|n| SlopePair::PmOneOver { n }));
    out
}

/// Rotation numbers allowed for `tau = 0`: `tb + 1, tb + 3, ..., -tb - 1`.
pub fn rot_range(tb: i64) -> Result<Vec<i64>> {
    if tb >= 0 {
        return domain(format!("tb {tb} >= 0 is settled by the tau bound and is not enumerated"));
    }
    Ok((0..-tb).map(|m| tb + 1 + 2 * m).collect())
}

/// Knot properties under which `±2` surgery on a `tb = -1` knot survives
/// the `d3` obstruction.
pub const EXCEPTION_PREDICATES: &[&str] =
    &["tau=0", "tbb=-1", "genus=2", "slice_genus=0", "prime", "quasi_positive", "lagrangian_slice"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Obstructed,
    NotObstructed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosmeticVerdict {
    pub knot: LegendrianData,
    pub pair: SlopePair,
    #[serde(with = "rational_serde::vec")]
    pub slope_pair: Vec<Rational>,
    #[serde(with = "rational_serde::vec")]
    pub spectrum_neg: Vec<Rational>,
    #[serde(with = "rational_serde::vec")]
    pub spectrum_pos: Vec<Rational>,
    pub outcome: Outcome,
    pub exception_flags: Vec<String>,
    pub matrix_neg: IntMatrix,
    pub matrix_pos: IntMatrix,
}

/// Compares the `d3` spectra of the two surgeries of a pair.
pub fn check_pair(knot: &LegendrianData, pair: SlopePair) -> Result<CosmeticVerdict> {
    let neg = d3_table(knot, &pair.negative())?;
    let pos = d3_table(knot, &pair.positive())?;
    let (sn, sp) = (neg.spectrum(), pos.spectrum());
    let outcome = if sn.is_disjoint(&sp) { Outcome::Obstructed } else { Outcome::NotObstructed };
    let exception_flags = if outcome == Outcome::NotObstructed && knot.tb == -1 && pair == SlopePair::PmTwo {
        EXCEPTION_PREDICATES.iter().map(|s| s.to_string()).collect()
    } else {
        Vec::new()
    };
    Ok(CosmeticVerdict {
        knot: knot.clone(),
        pair,
        slope_pair: vec![pair.negative(), pair.positive()],
        spectrum_neg: sn.into_iter().collect(),
        spectrum_pos: sp.into_iter().collect(),
        outcome,
        exception_flags,
        matrix_neg: neg.matrix,
        matrix_pos: pos.matrix,
    })
}

/// Slope families of the `d3` equation for `tb = -k`, `k >= 3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    PmOne,
    PmTwo,
    PmOneOverN,
}

/// An integer point where the two `d3` values coincide. `e_neg` and `e_pos`
/// are the stabilization signs on each side; `j` and `s` are the rotations
/// of the last chain unknot on the negative and positive side.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct D3Solution {
    pub k: i64,
    pub i: i64,
    pub n: Option<i64>,
    pub e_neg: i64,
    pub e_pos: i64,
    pub j: Option<i64>,
    pub s: Option<i64>,
}

fn q(x: i64) -> Rational {
    Rational::from_integer(BigInt::from(x))
}

/// `d3` on each side in closed form. Sizes, signatures and `l = 1` are those
/// of the standard diagrams.
pub mod closed_d3 {
    use super::*;

    pub fn minus_two(k: i64, i: i64, e: i64) -> Rational {
        d3_from_parts(k - 1, -k + 2, &cf::tbk_minus_two_c2(k, i, e), 1)
    }

    pub fn plus_two(k: i64, i: i64, e: i64) -> Rational {
        d3_from_parts(k + 3, -k, &cf::tbk_plus_two_c2(k, i, e), 1)
    }

    pub fn minus_one(k: i64, i: i64, e: i64) -> Rational {
        d3_from_parts(k, -k + 1, &cf::tbk_minus_one_c2(k, i, e), 1)
    }

    pub fn plus_one(k: i64, i: i64, e: i64) -> Rational {
        d3_from_parts(k + 2, -k + 1, &cf::tbk_plus_one_c2(k, i, e), 1)
    }

    pub fn minus_inv_n(k: i64, n: i64, i: i64, e: i64, j: i64) -> Rational {
        d3_from_parts(k + n - 1, -k - n + 2, &cf::tbk_minus_inv_n_c2(k, n, i, e, j), 1)
    }

    pub fn plus_inv_n(k: i64, n: i64, i: i64, e: i64, s: i64) -> Rational {
        d3_from_parts(k + 2, -k + 1, &cf::tbk_plus_inv_n_c2(k, n, i, e, s), 1)
    }
}

/// Integer roots of `a x^2 + b x + c` with rational coefficients, or `None`
/// when the polynomial vanishes identically.
fn integer_roots(a: &Rational, b: &Rational, c: &Rational) -> Option<Vec<BigInt>> {
    let l = a.denom().lcm(b.denom()).lcm(c.denom());
    let f = |x: &Rational| (x * Rational::from_integer(l.clone())).to_integer();
    let (a, b, c) = (f(a), f(b), f(c));
    if a.is_zero() {
        if b.is_zero() {
            return if c.is_zero() { None } else { Some(vec![]) };
        }
        let (x, r) = (-&c).div_rem(&b);
        return Some(if r.is_zero() { vec![x] } else { vec![] });
    }
    let disc = &b * &b - BigInt::from(4) * &a * &c;
    if disc.is_negative() {
        return Some(vec![]);
    }
    let root = disc.sqrt();
    if &root * &root != disc {
        return Some(vec![]);
    }
    let mut out = Vec::new();
    for num in [-&b + &root, -&b - &root] {
        let (x, r) = num.div_rem(&(BigInt::from(2) * &a));
        if r.is_zero() && !out.contains(&x) {
            out.push(x);
        }
    }
    Some(out)
}

/// Solves `d3(negative side) = d3(positive side)` over admissible integers.
/// For `±1` and `±2` the equation is quadratic in `i` for each choice of
/// stabilization signs; for `±1/n` it is linear in `n` once `(i, e, j, s)`
/// are fixed. Only `2 <= n <= n_max` and `|s| < n`, `s = n + 1 (mod 2)` are
/// admissible.
pub fn solve_d3_equation(tb: i64, family: Family, n_max: i64) -> Result<Vec<D3Solution>> {
    let k = -tb;
    if k < 3 || (family == Family::PmTwo && k < 4) {
        return domain(format!("no closed-form d3 equation for tb {tb} and {family:?}"));
    }
    let rots = rot_range(tb)?;
    let mut out = Vec::new();
    let signs = [-1i64, 1];
    match family {
        Family::PmOne | Family::PmTwo => {
            let (neg, pos): (fn(i64, i64, i64) -> Rational, fn(i64, i64, i64) -> Rational) = match family {
                Family::PmOne => (closed_d3::minus_one, closed_d3::plus_one),
                _ => (closed_d3::minus_two, closed_d3::plus_two),
            };
            for e_neg in signs {
                for e_pos in signs {
                    let g = |i: i64| neg(k, i, e_neg) - pos(k, i, e_pos);
                    let (g0, g1, g2) = (g(0), g(1), g(2));
                    let a = (&g2 - &g1 * q(2) + &g0) / q(2);
                    let b = &g1 - &g0 - &a;
                    let roots = integer_roots(&a, &b, &g0);
                    let candidates: Vec<i64> = match roots {
                        None => rots.clone(),
                        Some(r) => r.iter().filter_map(|x| x.to_i64()).filter(|x| rots.contains(x)).collect(),
                    };
                    for i in candidates {
                        debug_assert!(g(i).is_zero());
                        out.push(D3Solution { k, i, n: None, e_neg, e_pos, j: None, s: None });
                    }
                }
            }
        }
        Family::PmOneOverN => {
            for &i in &rots {
                for e_neg in signs {
                    for j in signs {
                        for e_pos in signs {
                            for s in -(n_max - 1)..=(n_max - 1) {
                                let g = |n: i64| {
                                    closed_d3::minus_inv_n(k, n, i, e_neg, j) - closed_d3::plus_inv_n(k, n, i, e_pos, s)
                                };
                                let alpha = g(0);
                                let beta = g(1) - &alpha;
                                let ns: Vec<i64> = if beta.is_zero() {
                                    if alpha.is_zero() {
                                        (2..=n_max).collect()
                                    } else {
                                        vec![]
                                    }
                                } else {
                                    let n = -alpha / beta;
                                    if n.is_integer() { n.to_integer().to_i64().into_iter().collect() } else { vec![] }
                                };
                                for n in ns {
                                    if (2..=n_max).contains(&n) && s.abs() < n && (n + 1 - s).rem_euclid(2) == 0 {
                                        out.push(D3Solution { k, i, n: Some(n), e_neg, e_pos, j: Some(j), s: Some(s) });
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    out.sort();
    Ok(out)
}

/// `(i, n)` cells where the `d3` spectra computed from the diagrams meet.
/// Independent of the closed forms; used to cross-check the solver.
pub fn spectrum_coincidences(tb: i64, family: Family, n_max: i64) -> Result<BTreeSet<(i64, Option<i64>)>> {
    let pairs: Vec<(SlopePair, Option<i64>)> = match family {
        Family::PmOne => vec![(SlopePair::PmOneOver { n: 1 }, None)],
        Family::PmTwo => vec![(SlopePair::PmTwo, None)],
        Family::PmOneOverN => (2..=n_max).map(|n| (SlopePair::PmOneOver { n }, Some(n))).collect(),
    };
    let mut out = BTreeSet::new();
    for i in rot_range(tb)? {
        let knot = LegendrianData::new(tb, i, None)?;
        for (pair, n) in &pairs {
            let a = d3_table(&knot, &pair.negative())?.spectrum();
            let b = d3_table(&knot, &pair.positive())?.spectrum();
            if !a.is_disjoint(&b) {
                out.insert((i, *n));
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Unknots

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `|rot| < |tb + 1|`.
    Interior,
    /// `|rot| = |tb + 1|`.
    Boundary,
}

/// How many contact surgeries at `target` are contactomorphic to each tight
/// surgery at the source slope.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TargetCount {
    pub target: Slope,
    pub counts: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Equivalence {
    /// No surgery at another slope of the class is contactomorphic.
    Unique,
    /// Per-slope counts of contactomorphic tight surgeries.
    Counts { targets: Vec<TargetCount> },
    /// Overtwisted; contactomorphic surgeries exist at every listed slope.
    Overtwisted { targets: Vec<Slope> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnknotSurgeryClass {
    pub knot: LegendrianData,
    #[serde(with = "rational_serde")]
    pub contact_coeff: Rational,
    pub smooth_slope: Slope,
    pub regime: Regime,
    pub tightness: Tightness,
    /// `(p, q)` with the canonical slope `-p/q <= -1`.
    pub canonical_class: (String, String),
    pub equivalence: Equivalence,
}

/// Slope `-p/q'` written with its `q'`.
fn q_prime(x: &Slope) -> BigInt {
    if x.numer().is_negative() {
        x.denom().clone()
    } else {
        -x.denom().clone()
    }
}

/// Canonical `(p, q)` with `1 <= q <= p`.
fn canonical_pq(x: &Slope) -> Result<(BigInt, BigInt)> {
    let (p, q) = lens_parameters(x)?;
    let q = if q.is_zero() { p.clone() } else { q };
    Ok((p, q))
}

fn slope_in_open(x: &Slope, lo: i64, hi: i64) -> bool {
    x.to_rational().is_some_and(|r| r > q(lo) && r < q(hi))
}

/// Matrix carrying the lens-space path of the surgery at `x` to the path
/// from `-p/q` to `0`. `x` must lie in the cosmetic class of `-p/q`.
fn canonical_frame(x: &Slope, p: &BigInt, q0: &BigInt) -> Result<[BigInt; 4]> {
    let qx = q_prime(x);
    if x.numer().abs() != *p {
        return domain(format!("{x} is not in the cosmetic class of -{p}/{q0}"));
    }
    if (&qx - q0).mod_floor(p).is_zero() {
        let m = (&qx - q0) / p;
        return Ok([BigInt::one(), BigInt::zero(), m, BigInt::one()]);
    }
    let qbar = mod_inverse(q0, p).expect("canonical q is a unit");
    let qbar = if qbar.is_zero() { p.clone() } else { qbar };
    if !(&qx - &qbar).mod_floor(p).is_zero() {
        return domain(format!("{x} is not in the cosmetic class of -{p}/{q0}"));
    }
    let m = (&qx - &qbar) / p;
    // Orientation-reversing swap of the two solid tori of L(p, qbar) and L(p, q).
    let swap = [-qbar.clone(), -p.clone(), (q0 * &qbar - 1) / p, q0.clone()];
    let twist = [BigInt::one(), BigInt::zero(), m, BigInt::one()];
    Ok(mat_mul(&swap, &twist))
}

fn mat_mul(a: &[BigInt; 4], b: &[BigInt; 4]) -> [BigInt; 4] {
    [
        &a[0] * &b[0] + &a[1] * &b[2],
        &a[0] * &b[1] + &a[1] * &b[3],
        &a[2] * &b[0] + &a[3] * &b[2],
        &a[2] * &b[1] + &a[3] * &b[3],
    ]
}

/// The standard neighbourhood complement of an unknot with `tb = -t`: the
/// path `tb, tb + 1, ..., 0` whose first `t - 1` edges carry `rot` as
/// (plus count) - (minus count) and whose last edge is unsigned.
pub fn complement_path(tb: i64, rot: i64) -> Result<DecoratedPath> {
    let t = -tb;
    if t < 1 || rot.abs() > t - 1 || (t - 1 + rot).rem_euclid(2) != 0 {
        return domain(format!("no Legendrian unknot has tb {tb} and rot {rot}"));
    }
    let plus = ((t - 1 + rot) / 2) as usize;
    let vertices = (tb..=0).map(Slope::int).collect();
    let mut signs: Vec<Sign> = (0..(t - 1) as usize).map(|e| if e < plus { Sign::Plus } else { Sign::Minus }).collect();
    signs.push(Sign::Unsigned);
    DecoratedPath::new(vertices, signs)
}

/// Lens-space class of the surgery given by the solid-torus structure
/// `solid`, in the frame of `-p/q`; `None` when the gluing is overtwisted.
fn glued_class(
    solid: &DecoratedPath,
    complement: &DecoratedPath,
    frame: &[BigInt; 4],
) -> Result<Option<ClassKey>> {
    let (lens, t) = shorten(&solid.concat(complement)?)?;
    if t == Tightness::Overtwisted {
        return Ok(None);
    }
    Ok(Some(class_key(&lens.transform(frame)?)?))
}

fn solid_classes(x: &Slope, tb: i64) -> Result<Vec<DecoratedPath>> {
    Ok(class_representatives(&minimal_path(x, &Slope::int(tb), Direction::Clockwise)?, Boundary::SolidTorus))
}

/// Lens classes of all tight surgeries at smooth slope `x`. Slopes in
/// `(tb, 0)` contain an overtwisted disk and give no tight classes.
pub fn tight_lens_classes(knot: &LegendrianData, x: &Slope, frame: &[BigInt; 4]) -> Result<Vec<Option<ClassKey>>> {
    if x.is_zero() || x.is_infinite() || *x == Slope::int(knot.tb) {
        return domain(format!("slope {x} is excluded"));
    }
    let complement = complement_path(knot.tb, knot.rot)?;
    if slope_in_open(x, knot.tb, 0) {
        return Ok(Vec::new());
    }
    solid_classes(x, knot.tb)?.iter().map(|s| glued_class(s, &complement, frame)).collect()
}

/// For each tight surgery at `source`, the number of tight surgeries at
/// `target` giving a contactomorphic lens space.
pub fn count_equivalent(knot: &LegendrianData, source: &Slope, target: &Slope) -> Result<Vec<usize>> {
    let (p, q0) = canonical_pq(source)?;
    let fs = canonical_frame(source, &p, &q0)?;
    let ft = canonical_frame(target, &p, &q0)?;
    let src = tight_lens_classes(knot, source, &fs)?;
    let tgt = tight_lens_classes(knot, target, &ft)?;
    let mut hist: BTreeMap<ClassKey, usize> = BTreeMap::new();
    for k in tgt.into_iter().flatten() {
        *hist.entry(k).or_default() += 1;
    }
    Ok(src.into_iter().flatten().map(|k| hist.get(&k).copied().unwrap_or(0)).collect())
}

/// Classifies contact `contact_coeff` surgery on a Legendrian unknot and
/// lists contactomorphic surgeries at other slopes `-p/q'` of the class with
/// `|q'| <= den_bound`.
pub fn unknot_classify(knot: &LegendrianData, contact_coeff: &Rational, den_bound: i64) -> Result<UnknotSurgeryClass> {
    let knot = LegendrianData::unknot(knot.tb, knot.rot)?;
    if contact_coeff.is_zero() {
        return Err(Error::ContactZero);
    }
    let smooth = contact_coeff + q(knot.tb);
    if smooth.is_zero() {
        return domain("smooth slope 0 is excluded");
    }
    let x = Slope::from(smooth.clone());
    let (p, q0) = canonical_pq(&x)?;
    let tb = knot.tb;
    let regime = if knot.rot.abs() < -tb - 1 { Regime::Interior } else { Regime::Boundary };
    let members: Vec<Slope> = cs_set(&p, &q0, &BigInt::from(den_bound))?
        .into_iter()
        .filter(|m| *m != Slope::int(tb))
        .collect();
    let in_band = |y: &Slope| slope_in_open(y, tb, 0);
    let below_tb = smooth < q(tb);
    let (tightness, equivalence) = match regime {
        Regime::Interior if below_tb => (Tightness::Tight, Equivalence::Unique),
        Regime::Interior => (
            Tightness::Overtwisted,
            Equivalence::Overtwisted {
                targets: members.into_iter().filter(|m| m.to_rational().is_some_and(|r| r >= q(tb))).collect(),
            },
        ),
        Regime::Boundary if in_band(&x) => (
            Tightness::Overtwisted,
            Equivalence::Overtwisted { targets: members.into_iter().filter(in_band).collect() },
        ),
        Regime::Boundary => {
            let targets = members
                .par_iter()
                .filter(|m| !in_band(m))
                .map(|m| Ok(TargetCount { target: m.clone(), counts: count_equivalent(&knot, &x, m)? }))
                .collect::<Result<Vec<_>>>()?;
            (Tightness::Tight, Equivalence::Counts { targets })
        }
    };
    check_tightness(&knot, &x, tightness)?;
    Ok(UnknotSurgeryClass {
        knot,
        contact_coeff: contact_coeff.clone(),
        smooth_slope: x,
        regime,
        tightness,
        canonical_class: (p.to_string(), q0.to_string()),
        equivalence,
    })
}

/// Outside `(tb, 0)` the surgery is tight iff some solid-torus structure
/// glues to the complement without a sign clash.
fn check_tightness(knot: &LegendrianData, x: &Slope, claimed: Tightness) -> Result<()> {
    if slope_in_open(x, knot.tb, 0) {
        return Ok(());
    }
    let path = minimal_path(x, &Slope::int(knot.tb), Direction::Clockwise)?;
    if count_classes(&path, Boundary::SolidTorus) > 4096u32.into() {
        return Ok(());
    }
    let complement = complement_path(knot.tb, knot.rot)?;
    let mut any_tight = false;
    for s in solid_classes(x, knot.tb)? {
        let (_, t) = shorten(&s.concat(&complement)?)?;
        any_tight |= t == Tightness::Tight;
    }
    let farey = if any_tight { Tightness::Tight } else { Tightness::Overtwisted };
    if farey != claimed {
        return Err(Error::Consistency(format!(
            "tightness of slope {x} on tb {} rot {}: rule says {claimed:?}, Farey gluing says {farey:?}",
            knot.tb, knot.rot
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Scan

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CellStatus {
    Obstructed,
    NotObstructed,
    /// One of the two surgeries is contact 0, which is not defined.
    ContactZero,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanCell {
    pub tb: i64,
    pub rot: i64,
    pub pair: SlopePair,
    pub status: CellStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<CosmeticVerdict>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolverSummary {
    pub tb: i64,
    pub family: Family,
    pub solutions: Vec<D3Solution>,
    /// Spectrum-based coincidences over the same ranges, as `(i, n)`.
    pub coincidences: Vec<(i64, Option<i64>)>,
    /// The solver and the spectrum scan found the same `(i, n)` cells.
    pub agree: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanReport {
    pub tb_min: i64,
    pub tb_max: i64,
    pub n_max: i64,
    pub cells: Vec<ScanCell>,
    pub solver: Vec<SolverSummary>,
    /// `(tb, rot, pair)` of every cell the `d3` invariant does not obstruct.
    pub not_obstructed: Vec<(i64, i64, SlopePair)>,
    /// The only unobstructed cells are `±2` on `tb = -1`.
    pub only_expected_exception: bool,
}

/// Runs every `(tb, rot, pair)` cell and every closed-form equation in
/// range.
pub fn scan(tb_min: i64, tb_max: i64, n_max: i64) -> Result<ScanReport> {
    if tb_max > -1 && tb_min <= tb_max {
        return domain("scan needs tb_max <= -1");
    }
    let mut jobs = Vec::new();
    for tb in tb_min..=tb_max {
        for rot in rot_range(tb)? {
            for pair in candidate_slopes(2, n_max) {
                jobs.push((tb, rot, pair));
            }
        }
    }
    let cells = jobs
        .par_iter()
        .map(|&(tb, rot, pair)| {
            let knot = LegendrianData::new(tb, rot, None)?;
            match check_pair(&knot, pair) {
                Ok(v) => Ok(ScanCell {
                    tb,
                    rot,
                    pair,
                    status: match v.outcome {
                        Outcome::Obstructed => CellStatus::Obstructed,
                        Outcome::NotObstructed => CellStatus::NotObstructed,
                    },
                    verdict: Some(v),
                }),
                Err(Error::ContactZero) => Ok(ScanCell { tb, rot, pair, status: CellStatus::ContactZero, verdict: None }),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let mut solver_jobs = Vec::new();
    for tb in tb_min..=tb_max.min(-3) {
        for family in [Family::PmOne, Family::PmTwo, Family::PmOneOverN] {
            if family == Family::PmTwo && tb > -4 {
                continue;
            }
            solver_jobs.push((tb, family));
        }
    }
    let solver = solver_jobs
        .par_iter()
        .map(|&(tb, family)| {
            let solutions = solve_d3_equation(tb, family, n_max)?;
            let coincidences = spectrum_coincidences(tb, family, n_max)?;
            let from_solver: BTreeSet<(i64, Option<i64>)> = solutions.iter().map(|s| (s.i, s.n)).collect();
            Ok(SolverSummary {
                tb,
                family,
                agree: from_solver == coincidences,
                solutions,
                coincidences: coincidences.into_iter().collect(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let not_obstructed: Vec<_> = cells
        .iter()
        .filter(|c| c.status == CellStatus::NotObstructed)
        .map(|c| (c.tb, c.rot, c.pair))
        .collect();
    let only_expected_exception = not_obstructed.iter().all(|&(tb, _, pair)| tb == -1 && pair == SlopePair::PmTwo);
    Ok(ScanReport { tb_min, tb_max, n_max, cells, solver, not_obstructed, only_expected_exception })
}
