//! Slow, independent re-implementations used as test oracles. None of these
//! call into the library's algorithms.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Plain Gaussian elimination with row swaps over the rationals.
pub fn det(rows: &[Vec<i64>]) -> BigRational {
    let n = rows.len();
    let mut m: Vec<Vec<BigRational>> = rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect();
    let mut d = q(1);
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else { return q(0) };
        if p != c {
            m.swap(p, c);
            d = -d;
        }
        d *= m[c][c].clone();
        for r in c + 1..n {
            let f = &m[r][c] / &m[c][c];
            for k in c..n {
                let v = &f * &m[c][k];
                m[r][k] -= v;
            }
        }
    }
    d
}

/// Solves `A x = b` by Gauss-Jordan elimination.
pub fn solve(rows: &[Vec<i64>], b: &[i64]) -> Option<Vec<BigRational>> {
    let n = rows.len();
    let mut m: Vec<Vec<BigRational>> = rows
        .iter()
        .zip(b)
        .map(|(r, &bi)| r.iter().map(|&x| q(x)).chain(std::iter::once(q(bi))).collect())
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !m[r][c].is_zero())?;
        m.swap(p, c);
        let piv = m[c][c].clone();
        for k in 0..=n {
            m[c][k] = &m[c][k] / &piv;
        }
        for r in 0..n {
            if r != c && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                for k in 0..=n {
                    let v = &f * &m[c][k];
                    m[r][k] -= v;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n].clone()).collect())
}

/// `r^T A^{-1} r`.
pub fn c_squared(rows: &[Vec<i64>], r: &[i64]) -> BigRational {
    let x = solve(rows, r).expect("nonsingular");
    x.iter().zip(r).map(|(xi, &ri)| xi * q(ri)).sum()
}

/// Jacobi's rule: the number of sign changes in `1, D_1, ..., D_n` counts
/// negative eigenvalues when every leading minor is nonzero. When some
/// minor vanishes the form is replaced by `S^T A S` for unimodular lower
/// triangular shears `S`, which keeps the signature.
pub fn jacobi_signature(rows: &[Vec<i64>]) -> i64 {
    let n = rows.len();
    let mut state: u64 = 0x9e3779b97f4a7c15;
    let mut a = rows.to_vec();
    for _ in 0..1000 {
        let minors: Vec<BigRational> =
            (1..=n).map(|k| det(&a[..k].iter().map(|r| r[..k].to_vec()).collect::<Vec<_>>())).collect();
        if minors.iter().all(|m| !m.is_zero()) {
            let mut prev = q(1);
            let mut neg = 0;
            for m in minors {
                if m.is_negative() != prev.is_negative() {
                    neg += 1;
                }
                prev = m;
            }
            return n as i64 - 2 * neg;
        }
        let mut s = vec![vec![0i64; n]; n];
        for i in 0..n {
            s[i][i] = 1;
            for j in 0..i {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                s[i][j] = ((state >> 60) as i64 % 3) - 1;
            }
        }
        // a <- S^T a S
        let mul = |x: &[Vec<i64>], y: &[Vec<i64>]| -> Vec<Vec<i64>> {
            (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| x[i][k] * y[k][j]).sum()).collect()).collect()
        };
        let st: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| s[j][i]).collect()).collect();
        a = mul(&mul(&st, rows), &s);
    }
    panic!("no congruent form with nonzero leading minors");
}

/// Lens space `L(p, q)` up to orientation-preserving diffeomorphism: the
/// smaller of `q mod p` and its inverse, inverse found by search.
pub fn lens_normal_form(p: i64, q: i64) -> (i64, i64) {
    assert!(p > 0);
    if p == 1 {
        return (1, 0);
    }
    let r = q.rem_euclid(p);
    let inv = (1..p).find(|x| (r * x).rem_euclid(p) == 1).expect("coprime");
    (p, r.min(inv))
}

/// `-p/q'` surgery on the unknot is `L(p, q')`.
pub fn lens_of_slope(num: i64, den: i64) -> (i64, i64) {
    let (p, qq) = if num < 0 { (-num, den) } else { (num, -den) };
    lens_normal_form(p, qq)
}

/// Farey vertex as a primitive pair with `q >= 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct V(pub i64, pub i64);

impl V {
    pub fn new(p: i64, q: i64) -> V {
        let g = p.gcd(&q);
        let (p, q) = (p / g, q / g);
        if q < 0 || (q == 0 && p < 0) {
            V(-p, -q)
        } else {
            V(p, q)
        }
    }

    pub fn adjacent(self, o: V) -> bool {
        (self.0 * o.1 - self.1 * o.0).abs() == 1
    }

    /// Position on the circle, increasing clockwise from `-inf` to `inf`.
    pub fn angle(self) -> BigRational {
        if self.1 == 0 {
            return q(i64::MAX);
        }
        BigRational::new(self.0.into(), self.1.into())
    }
}

/// `x` lies in the closed clockwise arc from `a` to `b`.
pub fn in_arc(x: V, a: V, b: V) -> bool {
    let (x, a, b) = (x.angle(), a.angle(), b.angle());
    if a <= b {
        a <= x && x <= b
    } else {
        x >= a || x <= b
    }
}

/// Shortest path length from `a` to `b` through vertices of the closed
/// clockwise arc whose numerators and denominators are bounded by `h`.
pub fn bfs_distance(a: V, b: V, h: i64) -> Option<usize> {
    let mut verts = vec![V(1, 0)];
    for den in 1..=h {
        for num in -h..=h {
            if num.gcd(&den) == 1 {
                verts.push(V(num, den));
            }
        }
    }
    verts.retain(|&v| in_arc(v, a, b));
    let mut dist: HashMap<V, usize> = HashMap::new();
    dist.insert(a, 0);
    let mut queue = VecDeque::from([a]);
    while let Some(u) = queue.pop_front() {
        if u == b {
            return dist.get(&b).copied();
        }
        let d = dist[&u];
        for &v in &verts {
            if u.adjacent(v) && !dist.contains_key(&v) {
                dist.insert(v, d + 1);
                queue.push_back(v);
            }
        }
    }
    None
}

/// Integer apex of the turn at `v[i]` in coordinates sending `v[i]` to
/// infinity, or `None` when the two edges share no common neighbour.
fn turn_apex(prev: V, mid: V, next: V) -> Option<V> {
    // An SL2 matrix [[a, b], [c, d]] with (a, c) = mid; its inverse sends mid
    // to infinity and its neighbours to integers.
    let (x, y) = (mid.0, mid.1);
    let e = BigInt::from(x).extended_gcd(&BigInt::from(y));
    let (s, t): (i64, i64) = (e.x.try_into().unwrap(), e.y.try_into().unwrap());
    // s x + t y = 1, so [[x, -t], [y, s]] has det 1.
    let to_inf = |v: V| -> i64 {
        // inverse [[s, t], [-y, x]] applied to v; the image has denominator +-1
        let num = s * v.0 + t * v.1;
        let den = -y * v.0 + x * v.1;
        assert!(den.abs() == 1, "neighbour of mid maps to an integer");
        num * den
    };
    let (a, b) = (to_inf(prev), to_inf(next));
    if (a - b).abs() != 2 {
        return None;
    }
    let w = (a + b) / 2;
    // map w back: [[x, -t], [y, s]] (w, 1)
    Some(V::new(x * w - t, y * w + s))
}

/// Partition of edge indices into blocks: maximal runs of consecutive turns
/// around one common apex.
pub fn blocks(path: &[V]) -> Vec<Vec<usize>> {
    let edges = path.len() - 1;
    let mut out: Vec<Vec<usize>> = Vec::new();
    let mut current = vec![0];
    let mut apex: Option<V> = None;
    for i in 1..edges {
        let a = turn_apex(path[i - 1], path[i], path[i + 1]);
        match (a, apex) {
            (Some(w), None) => {
                apex = Some(w);
                current.push(i);
            }
            (Some(w), Some(u)) if w == u => current.push(i),
            // Both apexes are the common neighbour of edge i - 1 on the far
            // side from the path, so they cannot differ.
            (Some(w), Some(u)) => panic!("turns at consecutive vertices around {u:?} and {w:?}"),
            (None, _) => {
                out.push(std::mem::take(&mut current));
                current.push(i);
                apex = None;
            }
        }
    }
    out.push(current);
    out
}

/// Orbit count of sign assignments under transpositions inside blocks,
/// found by exhaustive search. `fixed` marks unsigned edges.
pub fn orbit_count(path: &[V], fixed: &[bool]) -> usize {
    let bl = blocks(path);
    let free: Vec<usize> = (0..fixed.len()).filter(|&i| !fixed[i]).collect();
    let mut seen: BTreeSet<Vec<i8>> = BTreeSet::new();
    let mut orbits = 0;
    for mask in 0u32..(1 << free.len()) {
        let mut s = vec![0i8; fixed.len()];
        for (b, &e) in free.iter().enumerate() {
            s[e] = if mask >> b & 1 == 1 { 1 } else { -1 };
        }
        if seen.contains(&s) {
            continue;
        }
        orbits += 1;
        let mut stack = vec![s];
        while let Some(cur) = stack.pop() {
            if !seen.insert(cur.clone()) {
                continue;
            }
            for b in &bl {
                for x in 0..b.len() {
                    for y in x + 1..b.len() {
                        let (i, j) = (b[x], b[y]);
                        if cur[i] != 0 && cur[j] != 0 && cur[i] != cur[j] {
                            let mut nxt = cur.clone();
                            nxt.swap(i, j);
                            stack.push(nxt);
                        }
                    }
                }
            }
        }
    }
    orbits
}

pub fn big(x: i64) -> BigInt {
    BigInt::from(x)
}

pub fn is_one(x: &BigInt) -> bool {
    x.is_one()
}

/// Shortest path from `a` to `b` inside the closed clockwise arc, through
/// vertices with numerators and denominators bounded by `h`.
pub fn bfs_path(a: V, b: V, h: i64) -> Vec<V> {
    let mut verts = vec![V(1, 0)];
    for den in 1..=h {
        for num in -h..=h {
            if num.gcd(&den) == 1 {
                verts.push(V(num, den));
            }
        }
    }
    verts.retain(|&v| in_arc(v, a, b));
    let mut parent: HashMap<V, V> = HashMap::new();
    let mut queue = VecDeque::from([a]);
    parent.insert(a, a);
    while let Some(u) = queue.pop_front() {
        if u == b {
            break;
        }
        for &v in &verts {
            if u.adjacent(v) && !parent.contains_key(&v) {
                parent.insert(v, u);
                queue.push_back(v);
            }
        }
    }
    let mut out = vec![b];
    while *out.last().unwrap() != a {
        out.push(parent[out.last().unwrap()]);
    }
    out.reverse();
    out
}

/// Removes vertices whose neighbours on the path are adjacent, merging the
/// two edges. Returns `None` when two opposite signs meet. Signs: `1`, `-1`,
/// `0` for unsigned.
pub fn oracle_shorten(mut path: Vec<V>, mut signs: Vec<i8>) -> Option<(Vec<V>, Vec<i8>)> {
    loop {
        let Some(i) = (1..path.len() - 1).find(|&i| path[i - 1].adjacent(path[i + 1])) else {
            return Some((path, signs));
        };
        let (s, t) = (signs[i - 1], signs[i]);
        let merged = match (s, t) {
            (0, _) | (_, 0) => 0,
            (s, t) if s == t => s,
            _ => return None,
        };
        path.remove(i);
        signs.remove(i);
        signs[i - 1] = merged;
    }
}

fn act(m: [i64; 4], v: V) -> V {
    V::new(m[0] * v.0 + m[1] * v.1, m[2] * v.0 + m[3] * v.1)
}

/// Block-wise `(plus, minus, unsigned)` counts together with the vertices.
pub type Key = (Vec<V>, Vec<(usize, usize, usize)>);

pub fn key(path: &[V], signs: &[i8]) -> Key {
    let counts = blocks(path)
        .iter()
        .map(|b| {
            let c = |x: i8| b.iter().filter(|&&e| signs[e] == x).count();
            (c(1), c(-1), c(0))
        })
        .collect();
    (path.to_vec(), counts)
}

/// Matrix taking the lens path of `-p/qq` to the one of `-p/q0`, with its
/// determinant.
fn frame(p: i64, q0: i64, qq: i64) -> [i64; 4] {
    if (qq - q0).rem_euclid(p) == 0 {
        return [1, 0, (qq - q0) / p, 1];
    }
    let qbar = if p == 1 { 1 } else { (1..=p).find(|x| (q0 * x).rem_euclid(p) == 1 % p).unwrap() };
    assert_eq!((qq - qbar).rem_euclid(p), 0, "slope outside the class");
    let m = (qq - qbar) / p;
    let swap = [-qbar, -p, (q0 * qbar - 1) / p, q0];
    let twist = [1, 0, m, 1];
    [
        swap[0] * twist[0] + swap[1] * twist[2],
        swap[0] * twist[1] + swap[1] * twist[3],
        swap[2] * twist[0] + swap[3] * twist[2],
        swap[2] * twist[1] + swap[3] * twist[3],
    ]
}

/// Lens-space classes of every tight surgery on the `(tb, rot)` unknot at
/// smooth slope `num/den`, one per solid-torus class, in the frame of
/// `-p/q0`. Raw sign assignments are enumerated and deduplicated by key.
pub fn oracle_lens_keys(tb: i64, rot: i64, num: i64, den: i64, q0: i64) -> Vec<Key> {
    let x = V::new(num, den);
    let p = num.abs();
    let qq = if num < 0 { x.1 } else { -x.1 };
    let h = num.abs().max(den.abs()).max(-tb) + 1;
    let solid = bfs_path(x, V(tb, 1), h);
    let t = -tb;
    let plus = ((t - 1 + rot) / 2) as usize;
    let mut comp_signs: Vec<i8> = (0..(t - 1) as usize).map(|e| if e < plus { 1 } else { -1 }).collect();
    comp_signs.push(0);
    let comp: Vec<V> = (tb + 1..=0).map(|n| V(n, 1)).collect();
    let m = frame(p, q0, qq);
    let det = m[0] * m[3] - m[1] * m[2];
    let free = solid.len() - 2;
    let mut seen: BTreeSet<Key> = BTreeSet::new();
    let mut out = Vec::new();
    for mask in 0u32..(1 << free) {
        let mut signs = vec![0i8];
        signs.extend((0..free).map(|b| if mask >> b & 1 == 1 { 1 } else { -1 }));
        if !seen.insert(key(&solid, &signs)) {
            continue;
        }
        let mut path = solid.clone();
        path.extend(&comp);
        let mut all = signs.clone();
        all.extend(&comp_signs);
        let Some((lens, ls)) = oracle_shorten(path, all) else { continue };
        let mut lens: Vec<V> = lens.into_iter().map(|v| act(m, v)).collect();
        let mut ls = ls;
        if det < 0 {
            lens.reverse();
            ls.reverse();
        }
        out.push(key(&lens, &ls));
    }
    out
}

/// For each tight surgery at `src`, how many tight surgeries at `tgt` give
/// the same lens-space class.
pub fn oracle_count_equivalent(tb: i64, rot: i64, src: (i64, i64), tgt: (i64, i64)) -> Vec<usize> {
    let p = src.0.abs();
    let qs = if src.0 < 0 { src.1 } else { -src.1 };
    let q0 = if p == 1 { 1 } else { qs.rem_euclid(p) };
    let s = oracle_lens_keys(tb, rot, src.0, src.1, q0);
    let t = oracle_lens_keys(tb, rot, tgt.0, tgt.1, q0);
    s.iter().map(|k| t.iter().filter(|x| *x == k).count()).collect()
}
