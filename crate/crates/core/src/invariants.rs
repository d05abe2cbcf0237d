//! Euler characteristic, signature, `c1^2` and the `d3` invariant of the
//! contact structure produced by a contact (±1)-surgery diagram.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_arith::{rational_serde, Rational};
use crate::exact_linalg::{inverse, signature, IntMatrix};
use crate::surgery_diagram::{diagram, enumerate_rotations, IntersectionForm, LegendrianData, SurgeryDiagram};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct D3Result {
    pub chi: i64,
    pub sigma: i64,
    #[serde(with = "rational_serde")]
    pub c_squared: Rational,
    pub l: i64,
    #[serde(with = "rational_serde")]
    pub d3: Rational,
}

impl D3Result {
    pub fn assemble(chi: i64, sigma: i64, c_squared: Rational, l: i64) -> Self {
        let d3 = d3_from_parts(chi, sigma, &c_squared, l);
        D3Result { chi, sigma, c_squared, l, d3 }
    }
}

/// `(c^2 - 3 sigma - 2 (chi - 1)) / 4 + l`.
pub fn d3_from_parts(chi: i64, sigma: i64, c_squared: &Rational, l: i64) -> Rational {
    let int = |x: i64| Rational::from_integer(BigInt::from(x));
    (c_squared - int(3 * sigma) - int(2 * (chi - 1))) / int(4) + int(l)
}

/// One plus the number of 2-handles.
pub fn euler_char(form: &IntersectionForm) -> i64 {
    form.size() as i64 + 1
}

/// `r^T Q^{-1} r`. Needs `det Q != 0`.
pub fn c_squared(form: &IntersectionForm) -> Result<Rational> {
    if form.size() == 0 {
        return Ok(Rational::from_integer(BigInt::from(0)));
    }
    Ok(inverse(&form.q)?.quadratic_form(&form.r_big()))
}

pub fn d3(form: &IntersectionForm) -> Result<D3Result> {
    let c2 = c_squared(form)?;
    let sigma = if form.size() == 0 { 0 } else { signature(&form.q)? };
    Ok(D3Result::assemble(euler_char(form), sigma, c2, form.l as i64))
}

/// Contact coefficient `smooth - tb`, rejecting the ill-defined zero case.
pub fn contact_coefficient(tb: i64, smooth_slope: &Rational) -> Result<Rational> {
    let c = smooth_slope - Rational::from_integer(BigInt::from(tb));
    if c == Rational::from_integer(BigInt::from(0)) {
        return Err(Error::ContactZero);
    }
    Ok(c)
}

/// Everything needed to audit a spectrum: the diagram, its form and every
/// rotation vector with its `d3` data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct D3Table {
    pub diagram: SurgeryDiagram,
    pub matrix: IntMatrix,
    pub entries: Vec<D3Entry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct D3Entry {
    pub rot: Vec<i64>,
    pub result: D3Result,
}

impl D3Table {
    pub fn spectrum(&self) -> BTreeSet<Rational> {
        self.entries.iter().map(|e| e.result.d3.clone()).collect()
    }
}

/// `d3` for every presentation of the surgery with the given smooth slope.
/// The form is inverted and its signature taken once; only `c^2` varies.
pub fn d3_table(knot: &LegendrianData, smooth_slope: &Rational) -> Result<D3Table> {
    let d = diagram(knot.tb, &contact_coefficient(knot.tb, smooth_slope)?)?;
    let q = d.intersection_matrix();
    let inv = inverse(&q)?;
    let sigma = signature(&q)?;
    let chi = d.len() as i64 + 1;
    let l = d.l() as i64;
    let entries = enumerate_rotations(&d, knot.rot)
        .into_iter()
        .map(|rot| {
            let r: Vec<BigInt> = rot.iter().map(|&x| BigInt::from(x)).collect();
            let result = D3Result::assemble(chi, sigma, inv.quadratic_form(&r), l);
            D3Entry { rot, result }
        })
        .collect();
    Ok(D3Table { diagram: d, matrix: q, entries })
}

pub fn d3_spectrum(knot: &LegendrianData, smooth_slope: &Rational) -> Result<BTreeSet<Rational>> {
    Ok(d3_table(knot, smooth_slope)?.spectrum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::rat;

    fn spec(tb: i64, rot: i64, s: Rational) -> Vec<Rational> {
        d3_spectrum(&LegendrianData::new(tb, rot, None).unwrap(), &s).unwrap().into_iter().collect()
    }

    #[test]
    fn worked_values() {
        assert_eq!(spec(-1, 0, rat(-1, 2)), vec![rat(1, 1)]);
        assert_eq!(spec(-1, 0, rat(1, 2)), vec![rat(0, 1)]);
        assert_eq!(spec(-1, 0, rat(2, 1)), vec![rat(1, 4)]);
        assert_eq!(spec(-1, 0, rat(-2, 1)), vec![rat(1, 4)]);
        assert_eq!(spec(-2, 1, rat(1, 1)), vec![rat(0, 1), rat(2, 1)]);
        let union = |s: Rational| -> BTreeSet<Rational> { [-2, 0, 2].iter().flat_map(|&r| spec(-3, r, s.clone())).collect() };
        assert_eq!(union(rat(-2, 1)), [rat(3, 4), rat(5, 4)].into_iter().collect());
        assert_eq!(union(rat(2, 1)), [rat(1, 4), rat(7, 4), rat(17, 4)].into_iter().collect());
    }

    #[test]
    fn empty_form() {
        let f = IntersectionForm::new(IntMatrix::zeros(0), vec![], 0).unwrap();
        let r = d3(&f).unwrap();
        assert_eq!((r.chi, r.d3.clone()), (1, rat(0, 1)));
    }

    #[test]
    fn singular_rejected() {
        let f = IntersectionForm::new(IntMatrix::from_rows(&[vec![0]]), vec![1], 0).unwrap();
        assert_eq!(c_squared(&f), Err(Error::Singular));
    }
}
