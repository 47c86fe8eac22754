//! Curves in normal position with respect to a triangulation.
//!
//! A curve is a chain of segments `(entry, exit)`, each a corner arc inside
//! the triangle holding both sides, with `twin(exit_i) == entry_{i+1}`.
//! Arcs start and end on boundary sides; loops are cyclic.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::surface::{edge_of, side, twin, EdgeId, PointId, Side, Triangulation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CurveKind {
    Arc,
    Loop,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Turn {
    L,
    R,
}

pub type Seg = (Side, Side);

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Curve {
    kind: CurveKind,
    segs: Vec<Seg>,
}

fn reversed(segs: &[Seg]) -> Vec<Seg> {
    segs.iter().rev().map(|&(a, b)| (b, a)).collect()
}

impl Curve {
    fn check_segments(tri: &Triangulation, segs: &[Seg]) -> Result<()> {
        for &(a, b) in segs {
            if !tri.has_side(a) || !tri.has_side(b) {
                return Err(Error::InvalidCurve(format!("unknown side in segment ({}, {})", a, b)));
            }
            if a == b {
                return Err(Error::NotMinimalPosition);
            }
            if tri.triangle_of(a) != tri.triangle_of(b) {
                return Err(Error::InvalidCurve(format!("sides {} and {} are not in one triangle", a, b)));
            }
        }
        Ok(())
    }

    pub fn arc(tri: &Triangulation, segs: Vec<Seg>) -> Result<Curve> {
        if segs.is_empty() {
            return Err(Error::InvalidCurve("empty arc".into()));
        }
        Self::check_segments(tri, &segs)?;
        for w in segs.windows(2) {
            if twin(w[0].1) != w[1].0 {
                return Err(Error::InvalidCurve("segments do not chain".into()));
            }
            if tri.is_boundary_side(w[0].1) {
                return Err(Error::InvalidCurve("arc passes through the boundary".into()));
            }
        }
        if !tri.is_boundary_side(segs[0].0) || !tri.is_boundary_side(segs[segs.len() - 1].1) {
            return Err(Error::NotBoundaryEnded);
        }
        let r = reversed(&segs);
        let segs = if r < segs { r } else { segs };
        Ok(Curve { kind: CurveKind::Arc, segs })
    }

    pub fn closed(tri: &Triangulation, segs: Vec<Seg>) -> Result<Curve> {
        if segs.is_empty() {
            return Err(Error::InvalidCurve("empty loop".into()));
        }
        Self::check_segments(tri, &segs)?;
        let n = segs.len();
        for i in 0..n {
            if twin(segs[i].1) != segs[(i + 1) % n].0 || tri.is_boundary_side(segs[i].1) {
                return Err(Error::InvalidCurve("loop segments do not chain".into()));
            }
        }
        let mut best: Option<Vec<Seg>> = None;
        for cand in [segs.clone(), reversed(&segs)] {
            for k in 0..n {
                let mut rot = cand[k..].to_vec();
                rot.extend_from_slice(&cand[..k]);
                if best.as_ref().is_none_or(|b| rot < *b) {
                    best = Some(rot);
                }
            }
        }
        Ok(Curve { kind: CurveKind::Loop, segs: best.unwrap_or_default() })
    }

    /// Parse a crossing word: for arcs `[entry, exit0, exit1, ...]`, for
    /// loops the cyclic list of exits.  Back-tracking factors are removed.
    pub fn from_word(tri: &Triangulation, kind: CurveKind, word: &[Side]) -> Result<Curve> {
        match kind {
            CurveKind::Arc => {
                if word.len() < 2 {
                    return Err(Error::InvalidCurve("arc word needs an entry and an exit".into()));
                }
                let mut sides: Vec<Side> = Vec::new();
                for &s in word {
                    // `x, twin(x)` style bigons: crossing and immediately re-crossing
                    if let Some(&last) = sides.last() {
                        if sides.len() >= 2 && s == twin(last) {
                            sides.pop();
                            continue;
                        }
                    }
                    sides.push(s);
                }
                if sides.len() < 2 {
                    return Err(Error::InvalidCurve("arc is trivial".into()));
                }
                let mut segs = Vec::new();
                let mut entry = sides[0];
                for &x in &sides[1..] {
                    segs.push((entry, x));
                    entry = twin(x);
                }
                Curve::arc(tri, segs)
            }
            CurveKind::Loop => {
                let n = word.len();
                if n == 0 {
                    return Err(Error::InvalidCurve("empty loop".into()));
                }
                let segs = (0..n).map(|i| (twin(word[(i + n - 1) % n]), word[i])).collect();
                Curve::closed(tri, segs)
            }
        }
    }

    pub fn word(&self) -> Vec<Side> {
        match self.kind {
            CurveKind::Arc => std::iter::once(self.segs[0].0).chain(self.segs.iter().map(|s| s.1)).collect(),
            CurveKind::Loop => self.segs.iter().map(|s| s.1).collect(),
        }
    }

    pub fn kind(&self) -> CurveKind {
        self.kind
    }

    pub fn is_loop(&self) -> bool {
        self.kind == CurveKind::Loop
    }

    pub fn segments(&self) -> &[Seg] {
        &self.segs
    }

    /// Boundary intervals at the two ends of an arc.
    pub fn ends(&self) -> Option<(EdgeId, EdgeId)> {
        match self.kind {
            CurveKind::Arc => Some((edge_of(self.segs[0].0), edge_of(self.segs[self.segs.len() - 1].1))),
            CurveKind::Loop => None,
        }
    }

    /// Number of passages through each edge; arc endpoints count once each.
    pub fn crossing_counts(&self) -> BTreeMap<EdgeId, i64> {
        let mut m = BTreeMap::new();
        for &(_, b) in &self.segs {
            *m.entry(edge_of(b)).or_insert(0) += 1;
        }
        if self.kind == CurveKind::Arc {
            *m.entry(edge_of(self.segs[0].0)).or_insert(0) += 1;
        }
        m
    }

    pub fn crossing_count(&self, e: EdgeId) -> i64 {
        self.crossing_counts().get(&e).copied().unwrap_or(0)
    }

    pub fn turns(&self, tri: &Triangulation) -> Vec<Turn> {
        self.segs.iter().map(|&(a, b)| turn(tri, a, b)).collect()
    }

    /// Peripheral: an arc turning the same way around one special point.
    pub fn is_peripheral(&self, tri: &Triangulation) -> bool {
        if self.kind == CurveKind::Loop {
            return false;
        }
        let t = self.turns(tri);
        t.iter().all(|&x| x == Turn::L) || t.iter().all(|&x| x == Turn::R)
    }

    /// The special point a peripheral arc surrounds.
    pub fn peripheral_point(&self, tri: &Triangulation) -> Option<PointId> {
        if !self.is_peripheral(tri) {
            return None;
        }
        let (a, b) = self.segs[0];
        Some(if tri.prev(a) == b { tri.tail(a) } else { tri.head(a) })
    }
}

pub fn turn(tri: &Triangulation, entry: Side, exit: Side) -> Turn {
    if tri.prev(entry) == exit {
        Turn::L
    } else {
        Turn::R
    }
}

/// An arc between marked points, stored by the sides it crosses.  `Edge`
/// when it belongs to the triangulation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IdealArc {
    Edge(EdgeId),
    Through(Vec<Side>),
}

impl IdealArc {
    pub fn through(crossings: Vec<Side>) -> IdealArc {
        let r: Vec<Side> = crossings.iter().rev().map(|&s| twin(s)).collect();
        IdealArc::Through(if r.cmp(&crossings) == Ordering::Less { r } else { crossings })
    }

    /// Plain number of interior crossings with the edge `e`.
    pub fn crossings_with(&self, e: EdgeId) -> i64 {
        match self {
            IdealArc::Edge(_) => 0,
            IdealArc::Through(x) => x.iter().filter(|&&s| edge_of(s) == e).count() as i64,
        }
    }

    pub fn crossing_total(&self) -> usize {
        match self {
            IdealArc::Edge(_) => 0,
            IdealArc::Through(x) => x.len(),
        }
    }

    pub fn endpoints(&self, tri: &Triangulation) -> (PointId, PointId) {
        match self {
            IdealArc::Edge(e) => {
                let s = side(*e, 0);
                (tri.tail(s), tri.head(s))
            }
            IdealArc::Through(x) => {
                let first = x[0];
                let last = twin(x[x.len() - 1]);
                (tri.head(tri.next(first)), tri.head(tri.next(last)))
            }
        }
    }
}

fn guard(n: &mut usize) -> Result<()> {
    *n += 1;
    if *n > 100_000 {
        return Err(Error::Other("runaway fan traversal".into()));
    }
    Ok(())
}

/// Counterclockwise fan around the tail of `entry`, starting at the boundary
/// side `entry`, until `stop(exit)` holds.
fn left_fan(tri: &Triangulation, mut entry: Side, stop: &dyn Fn(Side) -> bool, out: &mut Vec<Seg>) -> Result<Side> {
    let mut n = 0;
    loop {
        guard(&mut n)?;
        let exit = tri.prev(entry);
        out.push((entry, exit));
        if stop(exit) {
            return Ok(exit);
        }
        if tri.is_boundary_side(exit) {
            return Err(Error::Other("fan reached the boundary".into()));
        }
        entry = twin(exit);
    }
}

/// Clockwise fan around the head of `entry` until a boundary side.
fn right_fan(tri: &Triangulation, mut entry: Side, out: &mut Vec<Seg>) -> Result<()> {
    let mut n = 0;
    loop {
        guard(&mut n)?;
        let exit = tri.next(entry);
        out.push((entry, exit));
        if tri.is_boundary_side(exit) {
            return Ok(());
        }
        entry = twin(exit);
    }
}

/// Positive boundary shift: both endpoints slide to the next boundary
/// interval in the direction of the boundary orientation.
pub fn b_shift(tri: &Triangulation, arc: &IdealArc) -> Result<Curve> {
    let mut segs = Vec::new();
    match arc {
        IdealArc::Edge(e) => {
            tri.edge(*e)?;
            if tri.is_boundary(*e) {
                right_fan(tri, side(*e, 0), &mut segs)?;
            } else {
                let u = tri.tail(side(*e, 0));
                let eta = tri.interval_from(u).ok_or(Error::EndpointAtPuncture)?;
                let v = tri.head(side(*e, 0));
                tri.interval_from(v).ok_or(Error::EndpointAtPuncture)?;
                let e = *e;
                let crossed = left_fan(tri, side(eta, 0), &|x| edge_of(x) == e, &mut segs)?;
                right_fan(tri, twin(crossed), &mut segs)?;
            }
        }
        IdealArc::Through(x) => {
            let x1 = x[0];
            let z = tri.prev(x1);
            let u = tri.tail(z);
            let eta = tri.interval_from(u).ok_or(Error::EndpointAtPuncture)?;
            if side(eta, 0) != z {
                left_fan(tri, side(eta, 0), &|s| twin(s) == z, &mut segs)?;
            }
            segs.push((z, x1));
            for w in x.windows(2) {
                segs.push((twin(w[0]), w[1]));
            }
            let w = twin(x[x.len() - 1]);
            let zz = tri.prev(w);
            tri.interval_from(tri.tail(zz)).ok_or(Error::EndpointAtPuncture)?;
            segs.push((w, zz));
            if !tri.is_boundary_side(zz) {
                right_fan(tri, twin(zz), &mut segs)?;
            }
        }
    }
    Curve::arc(tri, segs)
}

/// Negative marked-point shift of a boundary-ended arc.
pub fn m_shift(tri: &Triangulation, c: &Curve) -> Result<IdealArc> {
    if c.kind != CurveKind::Arc {
        return Err(Error::NotBoundaryEnded);
    }
    let t = c.turns(tri);
    let segs = &c.segs;
    let n = segs.len();
    let Some(a) = t.iter().position(|&x| x == Turn::R) else {
        return Ok(IdealArc::Edge(edge_of(segs[n - 1].1)));
    };
    let mut cidx = n;
    while cidx > 0 && t[cidx - 1] == Turn::R {
        cidx -= 1;
    }
    if cidx <= a {
        return Ok(IdealArc::Edge(edge_of(segs[a].0)));
    }
    let crossings: Vec<Side> = segs[a..cidx - 1].iter().map(|s| s.1).collect();
    Ok(IdealArc::through(crossings))
}

/// Rewrite a curve across the flip of `k`; `after` is `tri.flip(k)`.
pub fn renormalize(tri: &Triangulation, after: &Triangulation, k: EdgeId, c: &Curve) -> Result<Curve> {
    let k0 = side(k, 0);
    let k1 = side(k, 1);
    let t1 = tri.triangle_of(k0);
    let t2 = tri.triangle_of(k1);
    let in_q = |s: Side| {
        let t = tri.triangle_of(s);
        t == t1 || t == t2
    };
    let is_k = |s: Side| s == k0 || s == k1;
    let nt1 = after.triangles()[t1];
    let nt2 = after.triangles()[t2];
    let route = |x: Side, y: Side, out: &mut Vec<Seg>| {
        let tx = if nt1.contains(&x) { nt1 } else { nt2 };
        if tx.contains(&y) {
            out.push((x, y));
        } else {
            let kx = tx[0];
            out.push((x, kx));
            out.push((twin(kx), y));
        }
    };
    let segs = &c.segs;
    let n = segs.len();
    match c.kind {
        CurveKind::Arc => {
            let mut out = Vec::new();
            let mut i = 0;
            while i < n {
                let (x, y) = segs[i];
                if !in_q(x) {
                    out.push((x, y));
                    i += 1;
                } else if is_k(y) {
                    route(x, segs[i + 1].1, &mut out);
                    i += 2;
                } else {
                    route(x, y, &mut out);
                    i += 1;
                }
            }
            Curve::arc(after, out)
        }
        CurveKind::Loop => {
            let start = (0..n).find(|&i| !is_k(segs[(i + n - 1) % n].1)).ok_or(Error::NotMinimalPosition)?;
            let rot: Vec<Seg> = (0..n).map(|j| segs[(start + j) % n]).collect();
            let mut out = Vec::new();
            let mut i = 0;
            while i < n {
                let (x, y) = rot[i];
                if !in_q(x) {
                    out.push((x, y));
                    i += 1;
                } else if is_k(y) {
                    route(x, rot[i + 1].1, &mut out);
                    i += 2;
                } else {
                    route(x, y, &mut out);
                    i += 1;
                }
            }
            Curve::closed(after, out)
        }
    }
}

/// Shear contribution of a single curve on every edge; boundary entries
/// hold minus the corner count at `m+` (no pinning).
pub fn shear_of_curve(tri: &Triangulation, c: &Curve) -> BTreeMap<EdgeId, i64> {
    let mut x: BTreeMap<EdgeId, i64> = tri.edge_ids().into_iter().map(|e| (e, 0)).collect();
    let segs = &c.segs;
    let n = segs.len();
    let pairs: Vec<(usize, usize)> = match c.kind {
        CurveKind::Arc => (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect(),
        CurveKind::Loop => (0..n).map(|i| (i, (i + 1) % n)).collect(),
    };
    for (i, j) in pairs {
        let s = segs[i].1;
        let p = segs[i].0;
        let q = segs[j].1;
        let v = if p == tri.next(s) && q == tri.next(twin(s)) {
            1
        } else if p == tri.prev(s) && q == tri.prev(twin(s)) {
            -1
        } else {
            0
        };
        *x.get_mut(&edge_of(s)).expect("edge") += v;
    }
    for (e, c) in corner_counts(tri, c, false) {
        *x.get_mut(&e).expect("edge") -= c;
    }
    x
}

/// Corner arcs of a curve at `m+` (or `m-` when `terminal`) of each
/// boundary interval, inside the triangle holding that interval.
pub fn corner_counts(tri: &Triangulation, c: &Curve, terminal: bool) -> BTreeMap<EdgeId, i64> {
    let mut out = BTreeMap::new();
    for e in tri.boundary_edges() {
        let s = side(e, 0);
        let o = if terminal { tri.next(s) } else { tri.prev(s) };
        let k = c.segs.iter().filter(|&&(a, b)| (a == s && b == o) || (a == o && b == s)).count() as i64;
        if k > 0 {
            out.insert(e, k);
        }
    }
    out
}
