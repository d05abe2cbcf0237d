//! Exact integer linear algebra for small symmetric forms.
//!
//! Every routine first runs on checked `i128` and silently reruns on `BigInt`
//! when an intermediate overflows, so results are always exact.

pub mod appendix;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_arith::Rational;

/// Dense square integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "Vec<Vec<String>>", try_from = "Vec<Vec<String>>")]
pub struct IntMatrix {
    n: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(n: usize) -> Self {
        IntMatrix { n, data: vec![BigInt::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    /// Panics on ragged input.
    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for r in rows {
            assert_eq!(r.len(), n, "matrix must be square");
            data.extend(r.iter().cloned().map(Into::into));
        }
        IntMatrix { n, data }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.n + j] = v;
    }

    /// Sets both `(i, j)` and `(j, i)`.
    pub fn set_sym(&mut self, i: usize, j: usize, v: BigInt) {
        self.set(j, i, v.clone());
        self.set(i, j, v);
    }

    pub fn rows(&self) -> Vec<Vec<BigInt>> {
        self.data.chunks(self.n.max(1)).take(self.n).map(|c| c.to_vec()).collect()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Submatrix on the given row and column index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> IntMatrix {
        assert_eq!(rows.len(), cols.len());
        let mut data = Vec::with_capacity(rows.len() * cols.len());
        for &i in rows {
            for &j in cols {
                data.push(self.get(i, j).clone());
            }
        }
        IntMatrix { n: rows.len(), data }
    }

    /// Deletes row `i` and column `j`.
    pub fn minor(&self, i: usize, j: usize) -> IntMatrix {
        let rows: Vec<usize> = (0..self.n).filter(|&r| r != i).collect();
        let cols: Vec<usize> = (0..self.n).filter(|&c| c != j).collect();
        self.select(&rows, &cols)
    }

    pub fn leading(&self, k: usize) -> IntMatrix {
        let idx: Vec<usize> = (0..k).collect();
        self.select(&idx, &idx)
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = IntMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let s = (0..n).fold(BigInt::zero(), |acc, t| acc + self.get(i, t) * other.get(t, j));
                out.set(i, j, s);
            }
        }
        out
    }

    fn as_i128(&self) -> Option<Vec<i128>> {
        self.data.iter().map(|x| x.to_i128()).collect()
    }
}

impl From<IntMatrix> for Vec<Vec<String>> {
    fn from(m: IntMatrix) -> Self {
        m.rows().into_iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect()
    }
}

impl TryFrom<Vec<Vec<String>>> for IntMatrix {
    type Error = String;
    fn try_from(rows: Vec<Vec<String>>) -> std::result::Result<Self, String> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for r in &rows {
            if r.len() != n {
                return Err("matrix must be square".into());
            }
            for s in r {
                data.push(s.parse::<BigInt>().map_err(|e| e.to_string())?);
            }
        }
        Ok(IntMatrix { n, data })
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, r) in self.rows().iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            let cells: Vec<String> = r.iter().map(|x| format!("{x:>4}")).collect();
            write!(f, "[{}]", cells.join(" "))?;
        }
        Ok(())
    }
}

/// Minimal exact ring interface. `None` means overflow (or an inexact
/// division, which signals a caller bug on the `BigInt` path).
trait Ring: Clone + PartialEq {
    fn r_zero() -> Self;
    fn r_one() -> Self;
    fn r_add(&self, o: &Self) -> Option<Self>;
    fn r_sub(&self, o: &Self) -> Option<Self>;
    fn r_mul(&self, o: &Self) -> Option<Self>;
    fn div_exact(&self, o: &Self) -> Option<Self>;
    fn r_neg(&self) -> Option<Self>;
    fn r_is_zero(&self) -> bool {
        *self == Self::r_zero()
    }
}

impl Ring for i128 {
    fn r_zero() -> Self {
        0
    }
    fn r_one() -> Self {
        1
    }
    fn r_add(&self, o: &Self) -> Option<Self> {
        self.checked_add(*o)
    }
    fn r_sub(&self, o: &Self) -> Option<Self> {
        self.checked_sub(*o)
    }
    fn r_mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn div_exact(&self, o: &Self) -> Option<Self> {
        (*o != 0 && self.checked_rem(*o)? == 0).then(|| self / o)
    }
    fn r_neg(&self) -> Option<Self> {
        self.checked_neg()
    }
}

impl Ring for BigInt {
    fn r_zero() -> Self {
        Zero::zero()
    }
    fn r_one() -> Self {
        One::one()
    }
    fn r_add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn r_sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn r_mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn div_exact(&self, o: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(o);
        r.is_zero().then_some(q)
    }
    fn r_neg(&self) -> Option<Self> {
        Some(-self)
    }
}

/// Runs `f` on `i128`, falling back to `BigInt` on overflow.
fn with_fallback<T>(
    m: &IntMatrix,
    small: impl Fn(Vec<i128>, usize) -> Option<T>,
    big: impl Fn(Vec<BigInt>, usize) -> Option<T>,
) -> T {
    if let Some(v) = m.as_i128() {
        if let Some(out) = small(v, m.n) {
            return out;
        }
    }
    big(m.data.clone(), m.n).expect("exact BigInt arithmetic cannot fail")
}

// Bareiss elimination with row pivoting. Returns the determinant.
fn bareiss<R: Ring>(mut a: Vec<R>, n: usize) -> Option<R> {
    if n == 0 {
        return Some(R::r_one());
    }
    let mut sign_flip = false;
    let mut prev = R::r_one();
    for k in 0..n - 1 {
        if a[k * n + k].r_is_zero() {
            let Some(p) = (k + 1..n).find(|&r| !a[r * n + k].r_is_zero()) else {
                return Some(R::r_zero());
            };
            for j in 0..n {
                a.swap(k * n + j, p * n + j);
            }
            sign_flip = !sign_flip;
        }
        let pivot = a[k * n + k].clone();
        for i in k + 1..n {
            let aik = a[i * n + k].clone();
            for j in k + 1..n {
                let t = pivot.r_mul(&a[i * n + j])?.r_sub(&aik.r_mul(&a[k * n + j])?)?;
                a[i * n + j] = t.div_exact(&prev)?;
            }
        }
        prev = pivot;
    }
    let d = a[n * n - 1].clone();
    if sign_flip {
        d.r_neg()
    } else {
        Some(d)
    }
}

// Bareiss without pivoting; returns leading principal minors while they stay
// nonzero, and stops at the first zero (later minors are then not computed).
fn leading_minors<R: Ring>(mut a: Vec<R>, n: usize) -> Option<Vec<R>> {
    let mut out = Vec::with_capacity(n);
    let mut prev = R::r_one();
    for k in 0..n {
        let pivot = a[k * n + k].clone();
        out.push(pivot.clone());
        if pivot.r_is_zero() {
            return Some(out);
        }
        for i in k + 1..n {
            let aik = a[i * n + k].clone();
            for j in k + 1..n {
                let t = pivot.r_mul(&a[i * n + j])?.r_sub(&aik.r_mul(&a[k * n + j])?)?;
                a[i * n + j] = t.div_exact(&prev)?;
            }
        }
        prev = pivot;
    }
    Some(out)
}

// Berkowitz: division-free characteristic polynomial, highest degree first,
// as det(lambda I - A).
fn berkowitz<R: Ring>(a: Vec<R>, n: usize) -> Option<Vec<R>> {
    let at = |i: usize, j: usize| &a[i * n + j];
    // Polynomial of the trailing 1x1 block, then grow upward.
    let mut poly: Vec<R> = vec![R::r_one()];
    for k in (0..n).rev() {
        let m = n - k - 1; // size of the already-processed block below/right of k
        // Column vector C (rows k+1.., column k), row R (row k, columns k+1..).
        let mut toeplitz_col: Vec<R> = Vec::with_capacity(m + 2);
        toeplitz_col.push(R::r_one());
        toeplitz_col.push(at(k, k).r_neg()?);
        let mut v: Vec<R> = (k + 1..n).map(|i| at(i, k).clone()).collect();
        for _ in 0..m {
            // -R * S^t * C
            let mut dot = R::r_zero();
            for (idx, j) in (k + 1..n).enumerate() {
                dot = dot.r_add(&at(k, j).r_mul(&v[idx])?)?;
            }
            toeplitz_col.push(dot.r_neg()?);
            let mut next = Vec::with_capacity(m);
            for i in k + 1..n {
                let mut s = R::r_zero();
                for (idx, j) in (k + 1..n).enumerate() {
                    s = s.r_add(&at(i, j).r_mul(&v[idx])?)?;
                }
                next.push(s);
            }
            v = next;
        }
        // New polynomial = Toeplitz(toeplitz_col) * poly, lengths (m+2) and (m+1).
        let mut out = vec![R::r_zero(); m + 2];
        for (i, slot) in out.iter_mut().enumerate() {
            let mut s = R::r_zero();
            for (j, pj) in poly.iter().enumerate() {
                if i >= j {
                    s = s.r_add(&toeplitz_col[i - j].r_mul(pj)?)?;
                }
            }
            *slot = s;
        }
        poly = out;
    }
    Some(poly)
}

// Fraction-free Gauss-Jordan on [A | I]. Returns (d, B) with A^{-1} = B / d.
fn adjugate<R: Ring>(a: Vec<R>, n: usize) -> Option<Option<(R, Vec<R>)>> {
    let w = 2 * n;
    let mut m = vec![R::r_zero(); n * w];
    for i in 0..n {
        for j in 0..n {
            m[i * w + j] = a[i * n + j].clone();
        }
        m[i * w + n + i] = R::r_one();
    }
    let mut prev = R::r_one();
    for k in 0..n {
        if m[k * w + k].r_is_zero() {
            let Some(p) = (k + 1..n).find(|&r| !m[r * w + k].r_is_zero()) else {
                return Some(None);
            };
            for j in 0..w {
                m.swap(k * w + j, p * w + j);
            }
        }
        let pivot = m[k * w + k].clone();
        for i in 0..n {
            if i == k {
                continue;
            }
            let mik = m[i * w + k].clone();
            for j in 0..w {
                if j == k {
                    continue;
                }
                let t = pivot.r_mul(&m[i * w + j])?.r_sub(&mik.r_mul(&m[k * w + j])?)?;
                m[i * w + j] = t.div_exact(&prev)?;
            }
            m[i * w + k] = R::r_zero();
        }
        prev = pivot;
    }
    // Every diagonal entry now equals the same d (up to the row-swap sign,
    // which is shared with the right-hand block).
    let d = m[(n - 1) * w + (n - 1)].clone();
    let mut b = Vec::with_capacity(n * n);
    for i in 0..n {
        if m[i * w + i] != d {
            return None;
        }
        for j in 0..n {
            b.push(m[i * w + n + j].clone());
        }
    }
    Some(Some((d, b)))
}

/// Exact determinant by fraction-free elimination.
pub fn determinant(a: &IntMatrix) -> BigInt {
    with_fallback(a, |v, n| bareiss(v, n).map(BigInt::from), bareiss)
}

/// `(A^{-1})_{ij} = (-1)^{i+j} det(A_{ji}) / det(A)`, zero-based indices.
pub fn inverse_entry(a: &IntMatrix, i: usize, j: usize) -> Result<Rational> {
    let d = determinant(a);
    if d.is_zero() {
        return Err(Error::Singular);
    }
    let c = determinant(&a.minor(j, i));
    let c = if (i + j) % 2 == 1 { -c } else { c };
    Ok(Rational::new(c, d))
}

/// `A^{-1}` stored as an integer matrix over a common denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Inverse {
    den: BigInt,
    num: IntMatrix,
}

impl Inverse {
    pub fn entry(&self, i: usize, j: usize) -> Rational {
        Rational::new(self.num.get(i, j).clone(), self.den.clone())
    }

    pub fn size(&self) -> usize {
        self.num.size()
    }

    /// `x^T A^{-1} x`, skipping zero coordinates of `x`.
    pub fn quadratic_form(&self, x: &[BigInt]) -> Rational {
        assert_eq!(x.len(), self.size());
        let support: Vec<usize> = (0..x.len()).filter(|&i| !x[i].is_zero()).collect();
        let mut s = BigInt::zero();
        for &i in &support {
            for &j in &support {
                s += &x[i] * self.num.get(i, j) * &x[j];
            }
        }
        Rational::new(s, self.den.clone())
    }
}

/// Full exact inverse.
pub fn inverse(a: &IntMatrix) -> Result<Inverse> {
    let n = a.size();
    if n == 0 {
        return Ok(Inverse { den: BigInt::one(), num: IntMatrix::zeros(0) });
    }
    let small = a
        .as_i128()
        .and_then(|v| adjugate(v, n))
        .map(|o| o.map(|(d, b)| (BigInt::from(d), b.into_iter().map(BigInt::from).collect())));
    let res = match small {
        Some(r) => r,
        None => adjugate(a.data.clone(), n).expect("exact BigInt arithmetic cannot fail"),
    };
    let (d, b) = res.ok_or(Error::Singular)?;
    let (d, b): (BigInt, Vec<BigInt>) = if d.is_negative() {
        (-d, b.into_iter().map(|x| -x).collect())
    } else {
        (d, b)
    };
    Ok(Inverse { den: d, num: IntMatrix { n, data: b } })
}

/// Leading principal minors `det A_1, ..., det A_n`.
pub fn leading_principal_minors(a: &IntMatrix) -> Vec<BigInt> {
    let fast = with_fallback(
        a,
        |v, n| leading_minors(v, n).map(|m| m.into_iter().map(BigInt::from).collect::<Vec<_>>()),
        leading_minors,
    );
    if fast.len() == a.size() {
        return fast;
    }
    // A zero leading minor stalls elimination; finish by direct determinants.
    (1..=a.size()).map(|k| determinant(&a.leading(k))).collect()
}

/// Sylvester's criterion: `(-1)^k det A_k > 0` for every leading minor.
pub fn is_negative_definite(a: &IntMatrix) -> bool {
    let minors = with_fallback(
        a,
        |v, n| leading_minors(v, n).map(|m| m.into_iter().map(BigInt::from).collect::<Vec<_>>()),
        leading_minors,
    );
    minors.len() == a.size()
        && minors.iter().enumerate().all(|(k, d)| if k % 2 == 0 { d.is_negative() } else { d.is_positive() })
}

/// Characteristic polynomial `det(lambda I - A)`, highest degree first.
pub fn char_poly(a: &IntMatrix) -> Vec<BigInt> {
    with_fallback(
        a,
        |v, n| berkowitz(v, n).map(|p| p.into_iter().map(BigInt::from).collect()),
        berkowitz,
    )
}

/// `E_0 = 1, E_1, ..., E_n`: sums of principal minors of each size.
/// Enumerates all `2^n` index subsets; intended for `n <= 20`.
pub fn principal_minor_sums(a: &IntMatrix) -> Vec<BigInt> {
    let n = a.size();
    assert!(n <= 24, "principal minor enumeration is exponential");
    let mut e = vec![BigInt::zero(); n + 1];
    for mask in 0u32..(1u32 << n) {
        let idx: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        e[idx.len()] += determinant(&a.select(&idx, &idx));
    }
    e
}

/// `lambda^n - E_1 lambda^{n-1} + ... + (-1)^n E_n` from principal minor sums.
pub fn char_poly_from_minor_sums(e: &[BigInt]) -> Vec<BigInt> {
    e.iter().enumerate().map(|(i, x)| if i % 2 == 1 { -x } else { x.clone() }).collect()
}

fn sign_changes(coeffs: impl Iterator<Item = BigInt>) -> i64 {
    let mut last = 0i8;
    let mut changes = 0;
    for c in coeffs {
        let s = if c.is_positive() {
            1
        } else if c.is_negative() {
            -1
        } else {
            continue;
        };
        if last != 0 && s != last {
            changes += 1;
        }
        last = s;
    }
    changes
}

/// Signature from sign changes of `P(lambda)` and `P(-lambda)`. Exact because
/// a symmetric matrix has a real spectrum. Requires `det A != 0`.
pub fn signature_descartes(a: &IntMatrix) -> Result<i64> {
    let p = char_poly(a);
    if p.last().is_some_and(|c| c.is_zero()) {
        return Err(Error::Singular);
    }
    let n = a.size();
    let pos = sign_changes(p.iter().cloned());
    // P(-lambda): coefficient of lambda^{n-i} picks up (-1)^{n-i}.
    let neg = sign_changes(p.iter().enumerate().map(|(i, c)| if (n - i) % 2 == 1 { -c } else { c.clone() }));
    Ok(pos - neg)
}

/// Signature by symmetric Gaussian elimination over the rationals.
pub fn signature_congruence(a: &IntMatrix) -> Result<i64> {
    let n = a.size();
    let mut m: Vec<Vec<Rational>> =
        a.rows().into_iter().map(|r| r.into_iter().map(Rational::from_integer).collect()).collect();
    let mut sig = 0i64;
    let mut rank = 0;
    for k in 0..n {
        if m[k][k].is_zero() {
            if let Some(j) = (k + 1..n).find(|&j| !m[j][j].is_zero()) {
                m.swap(k, j);
                for row in m.iter_mut() {
                    row.swap(k, j);
                }
            } else if let Some(j) = (k + 1..n).find(|&j| !m[k][j].is_zero()) {
                // Row/column k += row/column j makes the pivot 2 m[k][j] != 0.
                for t in 0..n {
                    let v = m[j][t].clone();
                    m[k][t] += v;
                }
                for t in 0..n {
                    let v = m[t][j].clone();
                    m[t][k] += v;
                }
            } else {
                continue;
            }
        }
        let pivot = m[k][k].clone();
        sig += if pivot.is_positive() { 1 } else { -1 };
        rank += 1;
        for i in k + 1..n {
            if m[i][k].is_zero() {
                continue;
            }
            let f = &m[i][k] / &pivot;
            for j in k..n {
                let v = &f * &m[k][j];
                m[i][j] -= v;
            }
        }
        for i in k + 1..n {
            m[k][i] = Rational::zero();
        }
    }
    if rank < n {
        return Err(Error::Singular);
    }
    Ok(sig)
}

/// Signature of a nondegenerate symmetric form, computed two independent
/// ways. Disagreement is reported as a consistency failure.
pub fn signature(a: &IntMatrix) -> Result<i64> {
    if !a.is_symmetric() {
        return Err(Error::Domain("signature needs a symmetric matrix".into()));
    }
    let c = signature_congruence(a)?;
    let d = signature_descartes(a)?;
    if c != d {
        return Err(Error::Consistency(format!(
            "signature by congruence {c} but by Descartes {d} for\n{a}"
        )));
    }
    Ok(c)
}

/// The `-2` tridiagonal chain matrix with `-1` off the diagonal.
pub fn chain_matrix(n: usize) -> IntMatrix {
    let mut m = IntMatrix::zeros(n);
    for i in 0..n {
        m.set(i, i, BigInt::from(-2));
        if i + 1 < n {
            m.set_sym(i, i + 1, BigInt::from(-1));
        }
    }
    m
}
