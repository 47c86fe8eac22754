//! A- and P-laminations, their tropical coordinates, and reconstruction of
//! laminations from coordinate vectors.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::cluster::TropicalVector;
use crate::curve::{corner_counts, renormalize, shear_of_curve, Curve, Seg};
use crate::error::{Error, Result};
use crate::poly::Rat;
use crate::surface::{edge_of, twin, EdgeId, PointId, Side, Triangulation};

/// Weighted curves on a fixed triangulation.  Peripheral arcs may carry any
/// rational weight, other curves nonnegative weights.
#[derive(Clone, Debug, PartialEq)]
pub struct ALamination {
    pub tri: Triangulation,
    pub components: Vec<(Curve, Rat)>,
}

/// Weighted non-peripheral curves with puncture signs and a pinning on
/// every boundary interval.
#[derive(Clone, Debug, PartialEq)]
pub struct PLamination {
    pub tri: Triangulation,
    pub components: Vec<(Curve, Rat)>,
    pub sigma: BTreeMap<PointId, i8>,
    pub nu: BTreeMap<EdgeId, Rat>,
}

fn merge(components: Vec<(Curve, Rat)>) -> Vec<(Curve, Rat)> {
    let mut m: BTreeMap<Curve, Rat> = BTreeMap::new();
    for (c, w) in components {
        *m.entry(c).or_insert_with(Rat::zero) += w;
    }
    m.into_iter().filter(|(_, w)| !w.is_zero()).collect()
}

fn full_nu(tri: &Triangulation, nu: BTreeMap<EdgeId, Rat>) -> BTreeMap<EdgeId, Rat> {
    tri.boundary_edges().into_iter().map(|e| (e, nu.get(&e).cloned().unwrap_or_else(Rat::zero))).collect()
}

fn int(r: &Rat) -> Rat {
    r.clone()
}

fn from_i64(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

impl ALamination {
    pub fn new(tri: &Triangulation, components: Vec<(Curve, Rat)>) -> Result<Self> {
        let lam = ALamination { tri: tri.clone(), components: merge(components) };
        for (c, w) in &lam.components {
            if w.is_negative() && !c.is_peripheral(tri) {
                return Err(Error::InvalidCurve("negative weight on a non-peripheral curve".into()));
            }
        }
        Ok(lam)
    }

    pub fn empty(tri: &Triangulation) -> Self {
        ALamination { tri: tri.clone(), components: Vec::new() }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        ALamination { tri: self.tri.clone(), components: merge(self.components.iter().map(|(g, w)| (g.clone(), w * c)).collect()) }
    }

    pub fn union(&self, o: &ALamination) -> Self {
        let mut v = self.components.clone();
        v.extend(o.components.iter().cloned());
        ALamination { tri: self.tri.clone(), components: merge(v) }
    }

    pub fn is_integral(&self) -> bool {
        a_coords(self).is_integral()
    }

    /// Rewrite across the flip of `k`; `after` is the flipped triangulation.
    pub fn renormalize(&self, after: &Triangulation, k: EdgeId) -> Result<Self> {
        let mut comps = Vec::new();
        for (c, w) in &self.components {
            comps.push((renormalize(&self.tri, after, k, c)?, w.clone()));
        }
        Ok(ALamination { tri: after.clone(), components: merge(comps) })
    }
}

impl PLamination {
    pub fn new(tri: &Triangulation, components: Vec<(Curve, Rat)>, nu: BTreeMap<EdgeId, Rat>) -> Result<Self> {
        let lam = PLamination {
            tri: tri.clone(),
            components: merge(components),
            sigma: tri.punctures().into_iter().map(|p| (p, 0)).collect(),
            nu: full_nu(tri, nu),
        };
        for (c, w) in &lam.components {
            if w.is_negative() {
                return Err(Error::InvalidCurve("negative weight".into()));
            }
            if c.is_peripheral(tri) {
                return Err(Error::InvalidCurve("peripheral curve in a P-lamination".into()));
            }
        }
        Ok(lam)
    }

    pub fn empty(tri: &Triangulation) -> Self {
        PLamination::new(tri, Vec::new(), BTreeMap::new()).expect("empty lamination")
    }

    pub fn with_nu(tri: &Triangulation, nu: BTreeMap<EdgeId, Rat>) -> Self {
        PLamination::new(tri, Vec::new(), nu).expect("empty lamination")
    }

    pub fn scale(&self, c: &Rat) -> Self {
        PLamination {
            tri: self.tri.clone(),
            components: merge(self.components.iter().map(|(g, w)| (g.clone(), w * c)).collect()),
            sigma: self.sigma.clone(),
            nu: self.nu.iter().map(|(&e, v)| (e, v * c)).collect(),
        }
    }

    pub fn union(&self, o: &PLamination) -> Self {
        let mut v = self.components.clone();
        v.extend(o.components.iter().cloned());
        let nu = self.nu.iter().map(|(&e, v)| (e, v + o.nu.get(&e).cloned().unwrap_or_else(Rat::zero))).collect();
        PLamination { tri: self.tri.clone(), components: merge(v), sigma: self.sigma.clone(), nu }
    }

    pub fn is_integral(&self) -> bool {
        self.components.iter().all(|(_, w)| w.is_integer()) && self.nu.values().all(|v| v.is_integer())
    }

    pub fn renormalize(&self, after: &Triangulation, k: EdgeId) -> Result<Self> {
        let mut comps = Vec::new();
        for (c, w) in &self.components {
            comps.push((renormalize(&self.tri, after, k, c)?, w.clone()));
        }
        Ok(PLamination { tri: after.clone(), components: merge(comps), sigma: self.sigma.clone(), nu: self.nu.clone() })
    }
}

/// Half the geometric intersection number of a curve with an edge of the
/// triangulation; an endpoint on a boundary interval counts as half.
pub fn intersection_number(tri: &Triangulation, e: EdgeId, c: &Curve) -> Result<Rat> {
    tri.edge(e)?;
    Ok(Rat::new(c.crossing_count(e).into(), BigInt::from(2)))
}

pub fn a_coords(lam: &ALamination) -> TropicalVector {
    let mut v = TropicalVector::zero(&lam.tri);
    for (c, w) in &lam.components {
        for (e, n) in c.crossing_counts() {
            *v.entries.get_mut(&e).expect("edge") += w * Rat::new(n.into(), BigInt::from(2));
        }
    }
    v
}

fn shear_with(lam: &PLamination, dual: bool) -> TropicalVector {
    let tri = &lam.tri;
    let mut v = TropicalVector::zero(tri);
    for (c, w) in &lam.components {
        for (e, x) in shear_of_curve(tri, c) {
            if !tri.is_boundary(e) {
                *v.entries.get_mut(&e).expect("edge") += w * from_i64(x);
            }
        }
        let (corners, sign) = if dual { (corner_counts(tri, c, true), 1) } else { (corner_counts(tri, c, false), -1) };
        for (e, k) in corners {
            *v.entries.get_mut(&e).expect("edge") += w * from_i64(sign * k);
        }
    }
    for (e, n) in &lam.nu {
        *v.entries.get_mut(e).expect("edge") += int(n);
    }
    v
}

pub fn shear_coords(lam: &PLamination) -> TropicalVector {
    shear_with(lam, false)
}

pub fn dual_shear_coords(lam: &PLamination) -> TropicalVector {
    shear_with(lam, true)
}

/// A normal strand system: each corner of each triangle carries a number of
/// parallel corner arcs.  Corner `i` of a triangle sits between its sides
/// `i` and `i+1`.  Positions on a side count from its tail.
pub(crate) struct Strands<'a> {
    pub tri: &'a Triangulation,
    pub corner: Vec<[i64; 3]>,
}

impl<'a> Strands<'a> {
    pub fn uniform(tri: &'a Triangulation, n: i64) -> Self {
        Strands { tri, corner: vec![[n; 3]; tri.triangles().len()] }
    }

    pub fn count(&self, s: Side) -> i64 {
        let (t, i) = self.tri.locate(s);
        self.corner[t][i] + self.corner[t][(i + 2) % 3]
    }

    fn partner(&self, s: Side, p: i64) -> (Side, i64) {
        let (t, i) = self.tri.locate(s);
        let tail = self.corner[t][(i + 2) % 3];
        if p < tail {
            let o = self.tri.prev(s);
            (o, self.count(o) - 1 - p)
        } else {
            (self.tri.next(s), self.count(s) - 1 - p)
        }
    }

    /// Across an interior edge with the identity matching.
    pub fn twin_cross(&self, s: Side, p: i64) -> Option<(Side, i64)> {
        if self.tri.is_boundary_side(s) {
            return None;
        }
        Some((twin(s), self.count(s) - 1 - p))
    }

    /// Connected strands: complete arcs (both ends on boundary sides) and
    /// loops with their multiplicities.  Chains ending at an unmatched
    /// position are dropped.
    pub fn trace(&self, cross: &dyn Fn(Side, i64) -> Option<(Side, i64)>) -> Result<BTreeMap<Curve, i64>> {
        let tri = self.tri;
        let mut seen: BTreeMap<(Side, i64), bool> = BTreeMap::new();
        let mut nodes = Vec::new();
        for t in tri.triangles() {
            for &s in t {
                for p in 0..self.count(s) {
                    nodes.push((s, p));
                    seen.insert((s, p), false);
                }
            }
        }
        let mut out: BTreeMap<Curve, i64> = BTreeMap::new();
        let walk = |start: (Side, i64), seen: &mut BTreeMap<(Side, i64), bool>| -> (Vec<Seg>, (Side, i64), bool) {
            let mut segs = Vec::new();
            let mut cur = start;
            loop {
                seen.insert(cur, true);
                let t = self.partner(cur.0, cur.1);
                seen.insert(t, true);
                segs.push((cur.0, t.0));
                match cross(t.0, t.1) {
                    None => return (segs, t, false),
                    Some(n) if n == start => return (segs, t, true),
                    Some(n) => cur = n,
                }
            }
        };
        for &n in &nodes {
            if seen[&n] || cross(n.0, n.1).is_some() {
                continue;
            }
            let (segs, end, _) = walk(n, &mut seen);
            if tri.is_boundary_side(n.0) && tri.is_boundary_side(end.0) {
                *out.entry(Curve::arc(tri, segs)?).or_insert(0) += 1;
            }
        }
        for &n in &nodes {
            if seen[&n] {
                continue;
            }
            // entering a triangle: pick the orientation that starts with an entry
            let (segs, _, closed) = walk(n, &mut seen);
            if !closed {
                return Err(Error::Other("strand matching is not an involution".into()));
            }
            *out.entry(Curve::closed(tri, segs)?).or_insert(0) += 1;
        }
        Ok(out)
    }
}

/// Lamination with the given shear coordinates.
pub fn reconstruct_from_shear(tri: &Triangulation, x: &TropicalVector) -> Result<PLamination> {
    let comps = reconstruct_curves(tri, x)?;
    let mut lam = PLamination::new(tri, comps, BTreeMap::new())?;
    let got = shear_coords(&lam);
    for e in tri.boundary_edges() {
        lam.nu.insert(e, x.get(e) - got.get(e));
    }
    Ok(lam)
}

/// Lamination with the given dual shear coordinates.
pub fn reconstruct_from_dual_shear(tri: &Triangulation, x: &TropicalVector) -> Result<PLamination> {
    let comps = reconstruct_curves(tri, x)?;
    let mut lam = PLamination::new(tri, comps, BTreeMap::new())?;
    let got = dual_shear_coords(&lam);
    for e in tri.boundary_edges() {
        lam.nu.insert(e, x.get(e) - got.get(e));
    }
    Ok(lam)
}

fn reconstruct_curves(tri: &Triangulation, x: &TropicalVector) -> Result<Vec<(Curve, Rat)>> {
    if tri.is_punctured() {
        return Err(Error::PuncturedSurfaceUnsupported);
    }
    if !x.is_integral() {
        return Err(Error::NonIntegerInput);
    }
    let xs: BTreeMap<EdgeId, i64> = tri
        .interior_edges()
        .into_iter()
        .map(|e| (e, x.get(e).to_integer().to_i64().unwrap_or(i64::MAX / 4)))
        .collect();
    let n = 1 + xs.values().map(|v| v.abs()).sum::<i64>();
    let a = pinned_curves(tri, &xs, n)?;
    let b = pinned_curves(tri, &xs, 2 * n)?;
    if a != b {
        return Err(Error::Other("reconstruction did not stabilise".into()));
    }
    Ok(a.into_iter().map(|(c, k)| (c, from_i64(k))).collect())
}

/// Draw `n` corner arcs in every corner and connect them across each
/// interior edge with the pins at `x` and `0`; drop peripheral curves.
fn pinned_curves(tri: &Triangulation, xs: &BTreeMap<EdgeId, i64>, n: i64) -> Result<BTreeMap<Curve, i64>> {
    let st = Strands::uniform(tri, n);
    let cross = |s: Side, p: i64| -> Option<(Side, i64)> {
        if tri.is_boundary_side(s) {
            return None;
        }
        let x = xs[&edge_of(s)];
        let q = x + 2 * n - 1 - p;
        if (0..2 * n).contains(&q) {
            Some((twin(s), q))
        } else {
            None
        }
    };
    let all = st.trace(&cross)?;
    Ok(all.into_iter().filter(|(c, _)| !c.is_peripheral(tri)).collect())
}

/// The peripheral arc around a special point.
pub fn peripheral_curve(tri: &Triangulation, m: PointId) -> Result<Curve> {
    let fan = tri.fan(m)?;
    let segs: Vec<Seg> = fan.iter().map(|&s| (s, tri.prev(s))).collect();
    Curve::arc(tri, segs)
}

/// The A-lamination with the given coordinates (unpunctured surfaces).
pub fn a_lamination_from_coords(tri: &Triangulation, a: &TropicalVector) -> Result<ALamination> {
    if tri.is_punctured() {
        return Err(Error::PuncturedSurfaceUnsupported);
    }
    let mut den = BigInt::one();
    for v in a.entries.values() {
        den = den.lcm(v.denom());
    }
    let scale = Rat::from_integer(den.clone());
    let val = |e: EdgeId| -> Result<i64> { (a.get(e) * &scale).to_integer().to_i64().ok_or(Error::Other("coordinate too large".into())) };
    let mut corner = Vec::new();
    for t in tri.triangles() {
        let v = [val(edge_of(t[0]))?, val(edge_of(t[1]))?, val(edge_of(t[2]))?];
        corner.push([v[0] + v[1] - v[2], v[1] + v[2] - v[0], v[2] + v[0] - v[1]]);
    }
    let mut periph: BTreeMap<PointId, i64> = BTreeMap::new();
    for (ti, t) in tri.triangles().iter().enumerate() {
        for i in 0..3 {
            let m = tri.head(t[i]);
            let w = periph.entry(m).or_insert(i64::MAX);
            *w = (*w).min(corner[ti][i]);
        }
    }
    for (ti, t) in tri.triangles().iter().enumerate() {
        for i in 0..3 {
            corner[ti][i] -= periph[&tri.head(t[i])];
        }
    }
    let st = Strands { tri, corner };
    let curves = st.trace(&|s, p| st.twin_cross(s, p))?;
    let mut comps: Vec<(Curve, Rat)> = curves.into_iter().map(|(c, k)| (c, from_i64(k) / &scale)).collect();
    for (m, w) in periph {
        if w != 0 {
            comps.push((peripheral_curve(tri, m)?, from_i64(w) / &scale));
        }
    }
    ALamination::new(tri, comps)
}

fn ensemble_with(lam: &ALamination, dual: bool) -> Result<PLamination> {
    let tri = &lam.tri;
    let mut comps = Vec::new();
    let mut nu: BTreeMap<EdgeId, Rat> = BTreeMap::new();
    for (c, w) in &lam.components {
        match c.peripheral_point(tri) {
            Some(m) => {
                let (e, v) = if dual {
                    (tri.interval_to(m), w.clone())
                } else {
                    (tri.interval_from(m), -w.clone())
                };
                let e = e.ok_or(Error::EndpointAtPuncture)?;
                *nu.entry(e).or_insert_with(Rat::zero) += v;
            }
            None => comps.push((c.clone(), w.clone())),
        }
    }
    PLamination::new(tri, comps, nu)
}

/// Delete peripheral arcs, pinning `-w` on the interval leaving the point.
pub fn tropical_ensemble(lam: &ALamination) -> Result<PLamination> {
    ensemble_with(lam, false)
}

/// Delete peripheral arcs, pinning `+w` on the interval arriving at the point.
pub fn dual_tropical_ensemble(lam: &ALamination) -> Result<PLamination> {
    ensemble_with(lam, true)
}

/// Corner arcs of a P-lamination at `m+` (or `m-`) of each boundary interval.
pub fn corner_weights(lam: &PLamination, terminal: bool) -> BTreeMap<EdgeId, Rat> {
    let mut out: BTreeMap<EdgeId, Rat> = lam.tri.boundary_edges().into_iter().map(|e| (e, Rat::zero())).collect();
    for (c, w) in &lam.components {
        for (e, k) in corner_counts(&lam.tri, c, terminal) {
            *out.get_mut(&e).expect("edge") += w * from_i64(k);
        }
    }
    out
}
