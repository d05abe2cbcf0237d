//! Acceptance checks, one line per criterion. Runs without the libtest
//! harness so the lines are printed even when everything passes.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use cosmetic_core::cosmetic::{
    count_equivalent, rot_range, scan, solve_d3_equation, spectrum_coincidences, unknot_classify, Equivalence,
    SlopePair, EXCEPTION_PREDICATES,
};
use cosmetic_core::exact_arith::{cs_set, lens_parameters, rat, same_lens_space};
use cosmetic_core::exact_linalg::appendix::verify_appendix;
use cosmetic_core::exact_linalg::{signature_congruence, signature_descartes};
use cosmetic_core::invariants::d3_spectrum;
use cosmetic_core::verification::{diagram_matrices, random_symmetric_matrices};
use cosmetic_core::{Family, LegendrianData, Rational, Slope, Tightness};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};

type Spectrum = BTreeSet<Rational>;

fn spectrum(tb: i64, rot: i64, s: Rational) -> Spectrum {
    d3_spectrum(&LegendrianData::new(tb, rot, None).unwrap(), &s).unwrap()
}

fn set(xs: &[Rational]) -> Spectrum {
    xs.iter().cloned().collect()
}

fn int(n: i64) -> Rational {
    rat(n, 1)
}

struct Outcome {
    ok: bool,
    detail: String,
}

impl Outcome {
    fn new() -> Self {
        Outcome { ok: true, detail: String::new() }
    }

    fn require(&mut self, cond: bool, what: impl FnOnce() -> String) {
        if !cond && self.ok {
            self.detail = what();
        }
        self.ok &= cond;
    }
}

fn tb_minus_one() -> Outcome {
    let mut o = Outcome::new();
    let cases = [(rat(-1, 2), int(1)), (rat(1, 2), int(0)), (int(-2), rat(1, 4)), (int(2), rat(1, 4))];
    for (s, d) in cases {
        let got = spectrum(-1, 0, s.clone());
        o.require(got == set(&[d.clone()]), || format!("slope {s}: {got:?}"));
    }
    for n in 3..=50 {
        let neg = spectrum(-1, 0, rat(-1, n));
        let pos = spectrum(-1, 0, rat(1, n));
        o.require(neg == set(&[int(1)]) && pos == set(&[int(0)]), || format!("n {n}: {neg:?} {pos:?}"));
    }
    o.detail = if o.ok { "-1/n -> 1, +1/n -> 0 for n = 2 and 3..50; ±2 -> 1/4".into() } else { o.detail };
    o
}

fn tb_minus_two() -> Outcome {
    let mut o = Outcome::new();
    for rot in [-1, 1] {
        let m1 = spectrum(-2, rot, int(-1));
        o.require(m1 == set(&[int(1)]), || format!("rot {rot} -1: {m1:?}"));
        let p1 = spectrum(-2, rot, int(1));
        o.require(p1 == set(&[int(0), int(2)]), || format!("rot {rot} +1: {p1:?}"));
        for n in 1..=50 {
            let neg = spectrum(-2, rot, rat(-1, n));
            let pos = spectrum(-2, rot, rat(1, n));
            let want: Spectrum = set(&[int(1), int(3 - 2 * n)]);
            o.require(neg == want, || format!("rot {rot} -1/{n}: {neg:?}"));
            let even = pos.iter().all(|d| d.is_integer() && d.to_integer().is_even());
            o.require(even, || format!("rot {rot} +1/{n} not all even: {pos:?}"));
            o.require(neg.is_disjoint(&pos), || format!("rot {rot} n {n} spectra meet"));
        }
    }
    o.detail = if o.ok { "-1 -> 1, +1 -> {0, 2}, -1/n -> {1, 3-2n}, +1/n even, disjoint for n <= 50".into() } else { o.detail };
    o
}

fn tb_minus_three() -> Outcome {
    let mut o = Outcome::new();
    let union = |s: Rational| -> Spectrum { rot_range(-3).unwrap().into_iter().flat_map(|r| spectrum(-3, r, s.clone())).collect() };
    let neg = union(int(-2));
    let pos = union(int(2));
    o.require(neg == set(&[rat(3, 4), rat(5, 4)]), || format!("-2: {neg:?}"));
    o.require(pos == set(&[rat(1, 4), rat(7, 4), rat(17, 4)]), || format!("+2: {pos:?}"));
    o.require(neg.is_disjoint(&pos), || "spectra meet".into());
    o.detail = if o.ok { "-2 -> {3/4, 5/4}, +2 -> {1/4, 7/4, 17/4}, disjoint".into() } else { o.detail };
    o
}

fn closed_form_sweep() -> Outcome {
    let mut o = Outcome::new();
    let r = verify_appendix(20, 20);
    o.require(r.mismatches.is_empty(), || format!("{} mismatches, first {:?}", r.mismatches.len(), r.mismatches.first()));
    o.require(r.families.iter().all(|f| f.checks > 0), || "a formula family was never exercised".into());
    if o.ok {
        o.detail = format!("{} checks over {} families, 0 mismatches", r.checks, r.families.len());
    }
    o
}

fn signature_cross_validation() -> Outcome {
    let mut o = Outcome::new();
    let random = random_symmetric_matrices(20240601, 1000, 8, 9);
    let ok_shape = random.iter().all(|m| {
        m.size() <= 8 && m.is_symmetric() && m.rows().iter().flatten().all(|x| x.abs() <= BigInt::from(9))
    });
    o.require(ok_shape, || "random matrix outside the sampling box".into());
    let diagrams = diagram_matrices(20, 20);
    let mut bad = 0;
    for m in random.iter().chain(&diagrams) {
        let (c, d) = (signature_congruence(m), signature_descartes(m));
        if c.is_err() || c != d {
            bad += 1;
        }
    }
    o.require(bad == 0, || format!("{bad} disagreements"));
    if o.ok {
        o.detail = format!("{} random and {} diagram matrices, 0 disagreements", random.len(), diagrams.len());
    }
    o
}

fn integer_solution_searches() -> Outcome {
    let mut o = Outcome::new();
    let mut systems = 0;
    for k in 3..=20 {
        for f in [Family::PmOne, Family::PmTwo, Family::PmOneOverN] {
            if f == Family::PmTwo && k < 4 {
                continue;
            }
            systems += 1;
            let sol = solve_d3_equation(-k, f, 20).unwrap();
            o.require(sol.is_empty(), || format!("tb -{k} {f:?}: {:?}", sol.first()));
            if k <= 6 {
                let meet = spectrum_coincidences(-k, f, 20).unwrap();
                o.require(meet.is_empty(), || format!("tb -{k} {f:?}: spectra meet at {meet:?}"));
            }
        }
    }
    if o.ok {
        o.detail = format!("{systems} systems, 3 <= k <= 20, n <= 20, |s| < n: no solutions");
    }
    o
}

fn obstruction_scan() -> Outcome {
    let mut o = Outcome::new();
    let r = scan(-10, -1, 20).unwrap();
    o.require(r.not_obstructed == vec![(-1, 0, SlopePair::PmTwo)], || format!("unobstructed {:?}", r.not_obstructed));
    let cell = r.cells.iter().find(|c| c.tb == -1 && c.pair == SlopePair::PmTwo).and_then(|c| c.verdict.as_ref());
    let flags: Vec<&str> = cell.map(|v| v.exception_flags.iter().map(String::as_str).collect()).unwrap_or_default();
    o.require(flags == EXCEPTION_PREDICATES, || format!("flags {flags:?}"));
    let want = ["tau=0", "tbb=-1", "genus=2", "slice_genus=0", "prime", "quasi_positive", "lagrangian_slice"];
    o.require(EXCEPTION_PREDICATES == want, || format!("predicate list {EXCEPTION_PREDICATES:?}"));
    if o.ok {
        o.detail = format!("{} cells over tb in [-10, -1]; only (tb=-1, ±2) unobstructed, flagged", r.cells.len());
    }
    o
}

/// Counts at `r'` in `(1/(k+1), 1/k)` for boundary-rotation unknots, from
/// every admissible source in the class, against the exhaustive oracle.
fn unknot_counts() -> Outcome {
    let mut o = Outcome::new();
    let mut seen: Vec<String> = Vec::new();
    for tb in [-1i64, -2, -3] {
        let t = -tb;
        let rots: BTreeSet<i64> = [t - 1, 1 - t].into();
        for rot in rots {
            let knot = LegendrianData::unknot(tb, rot).unwrap();
            for k in 0..=5i64 {
                let mut observed = BTreeSet::new();
                for b in 2..=11i64 {
                    for a in 1..=3 * b {
                        let r = rat(a, b);
                        let inside = r > rat(1, k + 1) && (k == 0 || r < rat(1, k));
                        if a.gcd(&b) != 1 || !inside {
                            continue;
                        }
                        let target = Slope::from(r.clone());
                        let (p, q) = lens_parameters(&target).unwrap();
                        let q = if q == BigInt::from(0) { p.clone() } else { q };
                        let sources = cs_set(&p, &q, &BigInt::from(8)).unwrap();
                        for (idx, src) in sources.iter().enumerate() {
                            let v = src.to_rational().unwrap();
                            if v == int(tb) || (v > int(tb) && v < int(0)) {
                                continue;
                            }
                            let got = count_equivalent(&knot, src, &target).unwrap();
                            if idx == 0 && b <= 7 {
                                let s = (src.numer().to_i64().unwrap(), src.denom().to_i64().unwrap());
                                let want = common::oracle_count_equivalent(tb, rot, s, (a, b));
                                o.require(got == want, || format!("tb {tb} {src} -> {r}: {got:?} vs oracle {want:?}"));
                            }
                            observed.extend(got.iter().copied());
                            o.require(got.iter().all(|&c| c as i64 == k + 1), || {
                                format!("tb={tb} rot={rot} r'={r} from {src}: counts {got:?}, expected k+1 = {}", k + 1)
                            });
                        }
                    }
                }
                if rot >= 0 {
                    seen.push(format!("tb={tb},k={k}:{observed:?}"));
                }
            }
        }
    }
    let unique_cases = [(-3, 0, -4), (-3, 0, -7), (-4, 1, -5), (-4, -1, -9)];
    for (tb, rot, s) in unique_cases {
        let c = unknot_classify(&LegendrianData::unknot(tb, rot).unwrap(), &int(s - tb), 12).unwrap();
        o.require(c.equivalence == Equivalence::Unique && c.tightness == Tightness::Tight, || {
            format!("tb {tb} rot {rot} smooth {s}: {:?}", c.equivalence)
        });
    }
    let summary = seen.join(" ");
    o.detail = if o.ok { format!("k+1 everywhere; interior case unique; {summary}") } else { format!("{}; observed {summary}", o.detail) };
    o
}

/// Independent normalizer: the smaller of `q mod p` and its inverse.
fn cs_lens_consistency() -> Outcome {
    let mut o = Outcome::new();
    let mut members = 0usize;
    for p in 1i64..=40 {
        for q in 1..=p {
            if p.gcd(&q) != 1 {
                continue;
            }
            let base = (BigInt::from(p), BigInt::from(q));
            let want = common::lens_normal_form(p, q);
            for m in cs_set(&base.0, &base.1, &BigInt::from(2 * p + 5)).unwrap() {
                members += 1;
                let lp = lens_parameters(&m).unwrap();
                o.require(same_lens_space(&base, &lp), || format!("-{p}/{q}: member {m} gives {lp:?}"));
                let (mn, md) = (m.numer().to_i64().unwrap(), m.denom().to_i64().unwrap());
                let got = common::lens_of_slope(mn, md);
                o.require(got == want, || format!("-{p}/{q}: member {m} normalizes to {got:?}, not {want:?}"));
            }
            // Residues outside the class must be told apart by both.
            for r in 1..=p {
                if r.gcd(&p) != 1 {
                    continue;
                }
                let a = same_lens_space(&base, &(BigInt::from(p), BigInt::from(r)));
                let b = common::lens_normal_form(p, r) == want;
                o.require(a == b, || format!("L({p},{q}) vs L({p},{r}): library {a}, oracle {b}"));
            }
        }
    }
    if o.ok {
        o.detail = format!("{members} members over all canonical -p/q with p <= 40, 0 mismatches");
    }
    o
}

fn main() -> ExitCode {
    let criteria: [(&str, Duration, fn() -> Outcome); 9] = [
        ("d3 regression, tb=-1", Duration::from_secs(1), tb_minus_one),
        ("d3 regression, tb=-2", Duration::from_secs(2), tb_minus_two),
        ("d3 regression, tb=-3", Duration::from_secs(1), tb_minus_three),
        ("closed-form sweep k, n <= 20", Duration::from_secs(20), closed_form_sweep),
        ("signature cross-validation", Duration::from_secs(10), signature_cross_validation),
        ("d3 equation integer searches", Duration::from_secs(10), integer_solution_searches),
        ("obstruction scan tb in [-10, -1]", Duration::from_secs(10), obstruction_scan),
        ("unknot surgery counts", Duration::from_secs(5), unknot_counts),
        ("cosmetic sets vs lens spaces", Duration::from_secs(5), cs_lens_consistency),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut out = run();
        let elapsed = start.elapsed();
        if elapsed > *limit {
            out.ok = false;
            out.detail = format!("took {elapsed:.2?}, limit {limit:?}; {}", out.detail);
        }
        let verdict = if out.ok { "PASS" } else { "FAIL" };
        println!("criterion {}: {verdict} {name} ({elapsed:.2?}): {}", i + 1, out.detail);
        failed += usize::from(!out.ok);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
