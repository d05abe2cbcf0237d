//! The Farey graph: adjacency, minimal paths, signed paths, shortening and
//! counting tight contact structures on thickened tori, solid tori and lens
//! spaces.
//!
//! Paths run clockwise, which here means increasing slope, passing from the
//! largest rationals through `inf` to the most negative ones.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{domain, Error, Result};
use crate::exact_arith::{cf_digits, Rational, Slope};

/// `true` iff `a` and `b` span a Farey edge.
pub fn is_edge(a: &Slope, b: &Slope) -> Result<bool> {
    if a == b {
        return domain(format!("is_edge needs distinct slopes, got {a} twice"));
    }
    Ok(adjacent(a, b))
}

pub(crate) fn adjacent(a: &Slope, b: &Slope) -> bool {
    a.intersection(b).abs().is_one()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Clockwise,
    Anticlockwise,
}

/// Position of `x` on the circle read clockwise from `base`. `base` itself
/// sorts first.
fn cyclic_key(x: &Slope, base: &Slope) -> (u8, Option<Slope>) {
    if x == base {
        return (0, None);
    }
    if base.is_infinite() {
        return (1, Some(x.clone()));
    }
    match (x.is_infinite(), x > base) {
        (true, _) => (2, None),
        (false, true) => (1, Some(x.clone())),
        (false, false) => (3, Some(x.clone())),
    }
}

fn cyclic_cmp(a: &Slope, b: &Slope, base: &Slope) -> Ordering {
    cyclic_key(a, base).cmp(&cyclic_key(b, base))
}

/// `true` iff `x` lies strictly inside the clockwise arc from `a` to `b`.
pub fn in_open_arc(x: &Slope, a: &Slope, b: &Slope) -> bool {
    x != a && x != b && cyclic_cmp(x, b, a) == Ordering::Less
}

/// Orientation-preserving integer matrix sending `a` to `inf`.
fn to_infinity(a: &Slope) -> [BigInt; 4] {
    let (p, q) = (a.numer(), a.denom());
    let e = p.extended_gcd(q);
    let (s, t) = if e.gcd.is_negative() { (-e.x, -e.y) } else { (e.x, e.y) };
    [s, t, -q.clone(), p.clone()]
}

fn inverse_matrix(m: &[BigInt; 4]) -> [BigInt; 4] {
    [m[3].clone(), -m[1].clone(), -m[2].clone(), m[0].clone()]
}

/// Shortest Farey path from `a` to `b` turning in `direction`. The answer is
/// unique: after moving `a` to `inf`, the vertices are the partial
/// evaluations of the continued fraction of the image of `b`.
pub fn minimal_path(a: &Slope, b: &Slope, direction: Direction) -> Result<Vec<Slope>> {
    if a == b {
        return domain(format!("minimal_path needs distinct endpoints, got {a} twice"));
    }
    if direction == Direction::Anticlockwise {
        let mut p = minimal_path(b, a, Direction::Clockwise)?;
        p.reverse();
        return Ok(p);
    }
    let m = to_infinity(a);
    let y = b.transform(&m).to_rational().expect("b != a");
    let digits = cf_digits(&y);
    let back = inverse_matrix(&m);
    let mut out = vec![a.clone()];
    for i in 1..=digits.len() {
        let mut v = Slope::from(Rational::from_integer(digits[i - 1].clone()));
        for c in digits[..i - 1].iter().rev() {
            let r = v.to_rational().expect("partial values are finite");
            v = Slope::from(Rational::from_integer(c.clone()) - r.recip());
        }
        out.push(v.transform(&back));
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
    Unsigned,
}

impl Sign {
    pub fn as_char(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
            Sign::Unsigned => '?',
        }
    }

    pub fn from_char(c: char) -> Result<Self> {
        match c {
            '+' => Ok(Sign::Plus),
            '-' => Ok(Sign::Minus),
            '?' => Ok(Sign::Unsigned),
            _ => Err(Error::Parse(format!("bad edge sign {c:?}"))),
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
            Sign::Unsigned => Sign::Unsigned,
        }
    }
}

pub fn signs_to_string(signs: &[Sign]) -> String {
    signs.iter().map(|s| s.as_char()).collect()
}

pub fn signs_from_str(s: &str) -> Result<Vec<Sign>> {
    s.chars().map(Sign::from_char).collect()
}

/// A clockwise Farey path with one sign per edge.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DecoratedPath {
    vertices: Vec<Slope>,
    signs: Vec<Sign>,
}

impl DecoratedPath {
    /// Checks adjacency of consecutive vertices and that the path winds
    /// less than once around the circle.
    pub fn new(vertices: Vec<Slope>, signs: Vec<Sign>) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::MalformedPath("a path needs at least one edge".into()));
        }
        if signs.len() + 1 != vertices.len() {
            return Err(Error::MalformedPath(format!(
                "{} vertices but {} signs",
                vertices.len(),
                signs.len()
            )));
        }
        for w in vertices.windows(2) {
            if w[0] == w[1] || !adjacent(&w[0], &w[1]) {
                return Err(Error::MalformedPath(format!("{} and {} are not Farey neighbours", w[0], w[1])));
            }
        }
        let base = &vertices[0];
        for w in vertices[1..].windows(2) {
            if cyclic_cmp(&w[0], &w[1], base) != Ordering::Less {
                return Err(Error::MalformedPath(format!(
                    "path does not run clockwise from {base}: {} then {}",
                    w[0], w[1]
                )));
            }
        }
        Ok(DecoratedPath { vertices, signs })
    }

    /// The minimal clockwise path from `a` to `b` with the given signs.
    pub fn minimal(a: &Slope, b: &Slope, signs: Vec<Sign>) -> Result<Self> {
        DecoratedPath::new(minimal_path(a, b, Direction::Clockwise)?, signs)
    }

    pub fn vertices(&self) -> &[Slope] {
        &self.vertices
    }

    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    pub fn num_edges(&self) -> usize {
        self.signs.len()
    }

    pub fn start(&self) -> &Slope {
        &self.vertices[0]
    }

    pub fn end(&self) -> &Slope {
        self.vertices.last().expect("nonempty")
    }

    pub fn is_minimal(&self) -> bool {
        minimal_path(self.start(), self.end(), Direction::Clockwise).is_ok_and(|p| p == self.vertices)
    }

    /// Joins `self` and `other` at the shared vertex.
    pub fn concat(&self, other: &DecoratedPath) -> Result<DecoratedPath> {
        if self.end() != other.start() {
            return Err(Error::MalformedPath(format!("{} does not meet {}", self.end(), other.start())));
        }
        let mut v = self.vertices.clone();
        v.extend(other.vertices[1..].iter().cloned());
        let mut s = self.signs.clone();
        s.extend(other.signs.iter().copied());
        DecoratedPath::new(v, s)
    }

    /// Image under an integer matrix. Orientation-reversing matrices also
    /// reverse the path so that it still runs clockwise.
    pub fn transform(&self, m: &[BigInt; 4]) -> Result<DecoratedPath> {
        let det = &m[0] * &m[3] - &m[1] * &m[2];
        let mut v: Vec<Slope> = self.vertices.iter().map(|x| x.transform(m)).collect();
        let mut s = self.signs.clone();
        if det == -BigInt::one() {
            v.reverse();
            s.reverse();
        } else if !det.is_one() {
            return domain("path transforms need determinant ±1");
        }
        DecoratedPath::new(v, s)
    }

    pub fn sign_string(&self) -> String {
        signs_to_string(&self.signs)
    }
}

impl fmt::Display for DecoratedPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.vertices[0])?;
        for (v, s) in self.vertices[1..].iter().zip(&self.signs) {
            write!(f, " -{}-> {v}", s.as_char())?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct PathRepr {
    vertices: Vec<Slope>,
    signs: String,
}

impl Serialize for DecoratedPath {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PathRepr { vertices: self.vertices.clone(), signs: self.sign_string() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for DecoratedPath {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = PathRepr::deserialize(d)?;
        let signs = signs_from_str(&r.signs).map_err(serde::de::Error::custom)?;
        DecoratedPath::new(r.vertices, signs).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tightness {
    Tight,
    Overtwisted,
}

fn merge_signs(a: Sign, b: Sign) -> (Sign, bool) {
    match (a, b) {
        (Sign::Unsigned, _) | (_, Sign::Unsigned) => (Sign::Unsigned, false),
        (x, y) if x == y => (x, false),
        (x, _) => (x, true),
    }
}

/// Removes vertex `i` (an interior vertex whose neighbours are adjacent),
/// returning whether the merged signs clash.
fn merge_at(v: &mut Vec<Slope>, s: &mut Vec<Sign>, i: usize) -> bool {
    let (sign, clash) = merge_signs(s[i - 1], s[i]);
    v.remove(i);
    s.remove(i);
    s[i - 1] = sign;
    clash
}

/// Interior vertices that can currently be removed.
pub fn shortening_moves(path: &DecoratedPath) -> Vec<usize> {
    let v = &path.vertices;
    (1..v.len() - 1).filter(|&i| adjacent(&v[i - 1], &v[i + 1])).collect()
}

/// Applies one shortening move at interior vertex `i`.
pub fn shorten_at(path: &DecoratedPath, i: usize) -> Result<(DecoratedPath, bool)> {
    let v = &path.vertices;
    if i == 0 || i + 1 >= v.len() || !adjacent(&v[i - 1], &v[i + 1]) {
        return Err(Error::MalformedPath(format!("no shortening move at vertex {i}")));
    }
    let (mut v, mut s) = (path.vertices.clone(), path.signs.clone());
    let clash = merge_at(&mut v, &mut s, i);
    Ok((DecoratedPath { vertices: v, signs: s }, clash))
}

/// Shortens to the minimal path with the same endpoints. Merged edges keep
/// their common sign; a merge of opposite signs makes the structure
/// overtwisted, while a merge involving an unsigned edge is unconstrained.
/// For a path winding less than once around, different merge orders give
/// the same result.
pub fn shorten(path: &DecoratedPath) -> Result<(DecoratedPath, Tightness)> {
    let (mut v, mut s) = (path.vertices.clone(), path.signs.clone());
    let mut overtwisted = false;
    'outer: loop {
        for i in 1..v.len() - 1 {
            if adjacent(&v[i - 1], &v[i + 1]) {
                overtwisted |= merge_at(&mut v, &mut s, i);
                continue 'outer;
            }
        }
        break;
    }
    let out = DecoratedPath { vertices: v, signs: s };
    debug_assert!(out.is_minimal());
    Ok((out, if overtwisted { Tightness::Overtwisted } else { Tightness::Tight }))
}

/// Block index of every edge. Consecutive edges lie in one continued
/// fraction block when all their vertices are Farey neighbours of a common
/// apex.
pub fn cf_blocks(path: &DecoratedPath) -> Result<Vec<usize>> {
    if !path.is_minimal() {
        return Err(Error::MalformedPath(format!("cf_blocks needs a minimal path, got {path}")));
    }
    Ok(block_ids(&path.vertices))
}

fn block_ids(v: &[Slope]) -> Vec<usize> {
    let mut ids = vec![0usize];
    let mut apex: Option<Slope> = None;
    for i in 1..v.len() - 1 {
        let cands = apexes(&v[i - 1], &v[i]);
        let next = &v[i + 1];
        let fits = |w: &Slope| w != next && adjacent(w, next);
        let chosen = match &apex {
            Some(a) if cands.contains(a) && fits(a) => Some(a.clone()),
            Some(_) => None,
            None => cands.into_iter().find(|w| fits(w)),
        };
        let last = *ids.last().expect("nonempty");
        if chosen.is_some() {
            ids.push(last);
        } else {
            ids.push(last + 1);
        }
        apex = chosen;
    }
    ids
}

fn apexes(u: &Slope, v: &Slope) -> Vec<Slope> {
    let (a, b, c, d) = (u.numer(), u.denom(), v.numer(), v.denom());
    vec![
        Slope::new(a + c, b + d).expect("primitive"),
        Slope::new(a - c, b - d).expect("primitive"),
    ]
}

/// Edge indices grouped by block.
pub fn block_partition(path: &DecoratedPath) -> Result<Vec<Vec<usize>>> {
    let ids = cf_blocks(path)?;
    let mut out: Vec<Vec<usize>> = Vec::new();
    for (e, b) in ids.into_iter().enumerate() {
        if b == out.len() {
            out.push(Vec::new());
        }
        out[b].push(e);
    }
    Ok(out)
}

/// Sign content of one block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BlockSigns {
    pub plus: usize,
    pub minus: usize,
    pub unsigned: usize,
}

/// Isotopy class of the structure a decorated minimal path describes:
/// signs within a block may be permuted freely.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ClassKey {
    pub vertices: Vec<Slope>,
    pub blocks: Vec<BlockSigns>,
}

pub fn class_key(path: &DecoratedPath) -> Result<ClassKey> {
    let blocks = block_partition(path)?
        .into_iter()
        .map(|edges| {
            let mut b = BlockSigns { plus: 0, minus: 0, unsigned: 0 };
            for e in edges {
                match path.signs[e] {
                    Sign::Plus => b.plus += 1,
                    Sign::Minus => b.minus += 1,
                    Sign::Unsigned => b.unsigned += 1,
                }
            }
            b
        })
        .collect();
    Ok(ClassKey { vertices: path.vertices.clone(), blocks })
}

/// Which edges carry no sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    /// Every edge signed.
    ThickenedTorus,
    /// First edge unsigned.
    SolidTorus,
    /// First and last edges unsigned.
    Lens,
}

impl Boundary {
    pub fn unsigned_mask(self, edges: usize) -> Vec<bool> {
        (0..edges)
            .map(|e| match self {
                Boundary::ThickenedTorus => false,
                Boundary::SolidTorus => e == 0,
                Boundary::Lens => e == 0 || e + 1 == edges,
            })
            .collect()
    }
}

fn signed_per_block(vertices: &[Slope], boundary: Boundary) -> (Vec<usize>, Vec<usize>) {
    let ids = block_ids(vertices);
    let mask = boundary.unsigned_mask(ids.len());
    let nblocks = ids.last().map_or(0, |b| b + 1);
    let mut signed = vec![0usize; nblocks];
    for (e, b) in ids.iter().enumerate() {
        if !mask[e] {
            signed[*b] += 1;
        }
    }
    (ids, signed)
}

/// Tight structures on the piece bounded by the minimal path `vertices`:
/// the product over blocks of one more than the number of signed edges.
pub fn count_classes(vertices: &[Slope], boundary: Boundary) -> BigUint {
    let (_, signed) = signed_per_block(vertices, boundary);
    signed.iter().map(|&s| BigUint::from(s + 1)).product()
}

/// Number of sign assignments before identifying block shuffles.
pub fn count_raw(vertices: &[Slope], boundary: Boundary) -> BigUint {
    let edges = vertices.len() - 1;
    let signed = boundary.unsigned_mask(edges).iter().filter(|u| !**u).count();
    BigUint::one() << signed
}

/// One representative path per class: within each block the `+` edges come
/// first.
pub fn class_representatives(vertices: &[Slope], boundary: Boundary) -> Vec<DecoratedPath> {
    let (ids, signed) = signed_per_block(vertices, boundary);
    let mask = boundary.unsigned_mask(ids.len());
    let mut out = Vec::new();
    let mut plus = vec![0usize; signed.len()];
    loop {
        let mut seen = vec![0usize; signed.len()];
        let signs = ids
            .iter()
            .enumerate()
            .map(|(e, &b)| {
                if mask[e] {
                    return Sign::Unsigned;
                }
                seen[b] += 1;
                if seen[b] <= plus[b] {
                    Sign::Plus
                } else {
                    Sign::Minus
                }
            })
            .collect();
        out.push(DecoratedPath { vertices: vertices.to_vec(), signs });
        // Odometer over plus counts.
        let mut b = 0;
        loop {
            if b == plus.len() {
                return out;
            }
            if plus[b] < signed[b] {
                plus[b] += 1;
                break;
            }
            plus[b] = 0;
            b += 1;
        }
    }
}

/// Tight structures on the solid torus with lower meridian `meridian` and
/// convex boundary of dividing slope `boundary`.
pub fn count_tight_solid_torus(meridian: &Slope, boundary: &Slope) -> Result<BigUint> {
    Ok(count_classes(&minimal_path(meridian, boundary, Direction::Clockwise)?, Boundary::SolidTorus))
}

pub fn count_tight_solid_torus_raw(meridian: &Slope, boundary: &Slope) -> Result<BigUint> {
    Ok(count_raw(&minimal_path(meridian, boundary, Direction::Clockwise)?, Boundary::SolidTorus))
}

/// Minimally twisting tight structures on `T^2 x I` with dividing slopes
/// `a` and `b`.
pub fn count_tight_thickened_torus(a: &Slope, b: &Slope) -> Result<BigUint> {
    Ok(count_classes(&minimal_path(a, b, Direction::Clockwise)?, Boundary::ThickenedTorus))
}

/// Tight structures on the lens space glued from solid tori with meridians
/// `s` (lower) and `r` (upper).
pub fn count_tight_lens(s: &Slope, r: &Slope) -> Result<BigUint> {
    let v = minimal_path(s, r, Direction::Clockwise)?;
    if v.len() < 2 {
        return domain("degenerate lens space");
    }
    Ok(count_classes(&v, Boundary::Lens))
}

pub fn count_tight_lens_raw(s: &Slope, r: &Slope) -> Result<BigUint> {
    Ok(count_raw(&minimal_path(s, r, Direction::Clockwise)?, Boundary::Lens))
}

/// `L(p, q)`, realized as the path from `-p/q` to `0`.
pub fn count_tight_lens_pq(p: &BigInt, q: &BigInt) -> Result<BigUint> {
    if !p.is_positive() || !q.is_positive() || q >= p || !p.gcd(q).is_one() {
        return domain(format!("L({p},{q}) needs 0 < q < p coprime"));
    }
    count_tight_lens(&Slope::new(-p.clone(), q.clone())?, &Slope::new(BigInt::zero(), BigInt::one())?)
}
