//! Contact (r)-surgery on a Legendrian knot rewritten as contact (±1)-surgery
//! on push-offs and chains of unknots, with the resulting intersection form.

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::exact_arith::{cf_digits, Rational};
use crate::exact_linalg::IntMatrix;

/// Smooth knot-type data that the obstruction consumes but does not compute.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnotMeta {
    pub tau: i64,
    pub seifert_genus: i64,
    pub slice_genus: i64,
    /// Maximal Thurston-Bennequin number of the knot type.
    pub tbb: i64,
    pub prime: bool,
    #[serde(default)]
    pub quasi_positive: bool,
    pub lagrangian_slice: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LegendrianData {
    pub tb: i64,
    pub rot: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub knot_meta: Option<KnotMeta>,
}

impl LegendrianData {
    /// Checks `rot = tb + 1 (mod 2)` and, when `tau` is known, the bound
    /// `tb + |rot| <= 2 tau - 1`.
    pub fn new(tb: i64, rot: i64, knot_meta: Option<KnotMeta>) -> Result<Self> {
        if (rot - tb - 1).rem_euclid(2) != 0 {
            return domain(format!("rot {rot} must have parity opposite to tb {tb}"));
        }
        if let Some(m) = &knot_meta {
            if tb + rot.abs() > 2 * m.tau - 1 {
                return domain(format!("tb {tb} and rot {rot} violate tb + |rot| <= 2 tau - 1 for tau {}", m.tau));
            }
        }
        Ok(LegendrianData { tb, rot, knot_meta })
    }

    /// A Legendrian unknot, which needs `|rot| <= -tb - 1`.
    pub fn unknot(tb: i64, rot: i64) -> Result<Self> {
        if tb > -1 || rot.abs() > -tb - 1 {
            return domain(format!("no Legendrian unknot has tb {tb} and rot {rot}"));
        }
        LegendrianData::new(tb, rot, None)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    /// A Legendrian push-off of the knot, possibly stabilized.
    Pushoff,
    /// An unknot in the chain of meridians.
    Chain,
}

/// One component of a surgery diagram before rotation numbers are chosen.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub role: Role,
    pub tb: i64,
    /// Number of stabilizations applied to a push-off.
    pub stabilizations: i64,
    /// Contact surgery coefficient, `+1` or `-1`.
    pub sign: i8,
}

impl Component {
    pub fn framing(&self) -> i64 {
        self.tb + i64::from(self.sign)
    }
}

/// The link and contact signs realizing one contact (r)-surgery.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurgeryDiagram {
    /// `tb` of the knot being operated on.
    pub base_tb: i64,
    pub components: Vec<Component>,
}

impl SurgeryDiagram {
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Number of contact `+1` surgeries.
    pub fn l(&self) -> usize {
        self.components.iter().filter(|c| c.sign > 0).count()
    }

    /// `Q_ii = tb_i + sign_i`, push-offs link `tb(base)` times and
    /// consecutive chain components link `-1` times.
    pub fn intersection_matrix(&self) -> IntMatrix {
        let n = self.len();
        let mut q = IntMatrix::zeros(n);
        for (i, c) in self.components.iter().enumerate() {
            q.set(i, i, BigInt::from(c.framing()));
            for (j, d) in self.components.iter().enumerate().skip(i + 1) {
                if c.role == Role::Pushoff && d.role == Role::Pushoff {
                    q.set_sym(i, j, BigInt::from(self.base_tb));
                }
            }
            if i > 0 && c.role == Role::Chain {
                q.set_sym(i - 1, i, BigInt::from(-1));
            }
        }
        q
    }

    /// The possible rotation numbers of each component for base rotation
    /// `base_rot`.
    pub fn rotation_choices(&self, base_rot: i64) -> Vec<Vec<i64>> {
        self.components
            .iter()
            .map(|c| match c.role {
                Role::Pushoff => (0..=c.stabilizations).map(|j| base_rot + c.stabilizations - 2 * j).collect(),
                Role::Chain => {
                    let t = -c.tb;
                    (0..t).map(|j| t - 1 - 2 * j).collect()
                }
            })
            .collect()
    }

    /// Rotation vector for explicit stabilization signs, one string of `+`
    /// and `-` per component. A push-off with `m` stabilizations takes `m`
    /// signs; a chain unknot with `tb = -t` takes `t - 1`.
    pub fn rotation_from_signs(&self, base_rot: i64, signs: &[&str]) -> Result<Vec<i64>> {
        if signs.len() != self.len() {
            return domain(format!("{} sign groups for {} components", signs.len(), self.len()));
        }
        self.components
            .iter()
            .zip(signs)
            .map(|(c, s)| {
                let (need, base) = match c.role {
                    Role::Pushoff => (c.stabilizations, base_rot),
                    Role::Chain => (-c.tb - 1, 0),
                };
                if s.len() as i64 != need {
                    return domain(format!("component with tb {} needs {need} signs, got {s:?}", c.tb));
                }
                s.chars().try_fold(base, |acc, ch| match ch {
                    '+' => Ok(acc + 1),
                    '-' => Ok(acc - 1),
                    _ => domain(format!("stabilization sign {ch:?} is not + or -")),
                })
            })
            .collect()
    }
}

/// Rewrites contact `contact_coeff` surgery on a knot with the given `tb`.
///
/// For a positive coefficient `p/q`, take `k = ceil(q/p)` push-offs with
/// contact `+1`; if `q - kp != 0` continue with coefficient `p/(q - kp) < 0`
/// on one more push-off. A negative coefficient with smooth slope `s` is
/// realized by stabilizing the knot until its framing is the first digit of
/// `s` and adding a chain of unknots for the remaining digits.
pub fn diagram(tb: i64, contact_coeff: &Rational) -> Result<SurgeryDiagram> {
    if contact_coeff.is_zero() {
        return Err(Error::ContactZero);
    }
    let mut components = Vec::new();
    let mut c = contact_coeff.clone();
    if c.is_positive() {
        let (p, q) = (c.numer().clone(), c.denom().clone());
        let k = q.div_ceil(&p);
        let count = k.to_i64().ok_or_else(|| Error::Domain("too many push-offs".into()))?;
        for _ in 0..count {
            components.push(Component { role: Role::Pushoff, tb, stabilizations: 0, sign: 1 });
        }
        let rest = &q - &k * &p;
        if rest.is_zero() {
            return Ok(SurgeryDiagram { base_tb: tb, components });
        }
        c = Rational::new(p, rest);
    }
    let s = Rational::from_integer(BigInt::from(tb)) + &c;
    let digits = cf_digits(&s);
    let c1 = digits[0].to_i64().ok_or_else(|| Error::Domain("framing out of range".into()))?;
    let m = tb - 1 - c1;
    debug_assert!(m >= 0);
    components.push(Component { role: Role::Pushoff, tb: tb - m, stabilizations: m, sign: -1 });
    for d in &digits[1..] {
        let d = d.to_i64().ok_or_else(|| Error::Domain("framing out of range".into()))?;
        components.push(Component { role: Role::Chain, tb: d + 1, stabilizations: 0, sign: -1 });
    }
    Ok(SurgeryDiagram { base_tb: tb, components })
}

/// A diagram with every rotation number fixed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurgeryPresentation {
    pub components: Vec<PresentedComponent>,
    pub l: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentedComponent {
    pub role: Role,
    pub tb: i64,
    pub rot: i64,
    pub sign: i8,
}

/// Every rotation vector the diagram admits when the knot has rotation
/// `base_rot`.
pub fn enumerate_rotations(d: &SurgeryDiagram, base_rot: i64) -> Vec<Vec<i64>> {
    d.rotation_choices(base_rot).into_iter().multi_cartesian_product().collect()
}

/// One presentation per choice of stabilizations and chain rotations.
pub fn convert(knot: &LegendrianData, contact_coeff: &Rational) -> Result<Vec<SurgeryPresentation>> {
    let d = diagram(knot.tb, contact_coeff)?;
    let l = d.l();
    Ok(enumerate_rotations(&d, knot.rot)
        .into_iter()
        .map(|r| SurgeryPresentation {
            components: d
                .components
                .iter()
                .zip(r)
                .map(|(c, rot)| PresentedComponent { role: c.role, tb: c.tb, rot, sign: c.sign })
                .collect(),
            l,
        })
        .collect())
}

/// Intersection form, rotation vector and number of `+1` surgeries.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionForm {
    pub q: IntMatrix,
    pub r: Vec<i64>,
    pub l: usize,
}

impl IntersectionForm {
    pub fn new(q: IntMatrix, r: Vec<i64>, l: usize) -> Result<Self> {
        if !q.is_symmetric() || q.size() != r.len() {
            return domain("intersection form needs a symmetric matrix and a matching rotation vector");
        }
        Ok(IntersectionForm { q, r, l })
    }

    pub fn size(&self) -> usize {
        self.q.size()
    }

    pub fn r_big(&self) -> Vec<BigInt> {
        self.r.iter().map(|&x| BigInt::from(x)).collect()
    }

    /// Applies the permutation `perm` to components.
    pub fn permuted(&self, perm: &[usize]) -> IntersectionForm {
        IntersectionForm {
            q: self.q.select(perm, perm),
            r: perm.iter().map(|&i| self.r[i]).collect(),
            l: self.l,
        }
    }
}

pub fn linking_matrix(pres: &SurgeryPresentation, base: &LegendrianData) -> IntersectionForm {
    let d = SurgeryDiagram {
        base_tb: base.tb,
        components: pres
            .components
            .iter()
            .map(|c| Component { role: c.role, tb: c.tb, stabilizations: 0, sign: c.sign })
            .collect(),
    };
    IntersectionForm { q: d.intersection_matrix(), r: pres.components.iter().map(|c| c.rot).collect(), l: pres.l }
}

/// Smooth coefficient `tb + contact` of a diagram's surgery, recovered from
/// its integer chain: only valid for diagrams without `+1` push-offs.
pub fn chain_slope(d: &SurgeryDiagram) -> Option<Rational> {
    if d.components.iter().any(|c| c.sign > 0) {
        return None;
    }
    let mut it = d.components.iter().rev();
    let mut v = Rational::from_integer(BigInt::from(it.next()?.framing()));
    for c in it {
        v = Rational::from_integer(BigInt::from(c.framing())) - v.recip();
    }
    Some(v)
}

/// `|H_1|` of the surgered manifold, `|det Q|`; equals the absolute
/// numerator of the smooth slope.
pub fn homology_order(d: &SurgeryDiagram) -> BigInt {
    let q = d.intersection_matrix();
    if q.size() == 0 {
        return BigInt::one();
    }
    crate::exact_linalg::determinant(&q).abs()
}
