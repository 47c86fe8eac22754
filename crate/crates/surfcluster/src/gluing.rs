//! Gluing two boundary intervals: charts, tropical vectors, laminations,
//! and the pin construction on curves used as an oracle.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::cluster::{Chart, ChartKind, ChartValues, TropicalVector};
use crate::curve::Curve;
use crate::error::{Error, Result};
use crate::lamination::{dual_shear_coords, reconstruct_from_dual_shear, reconstruct_from_shear, shear_coords, PLamination, Strands};
use crate::poly::Rat;
use crate::surface::{edge_of, side, EdgeId, EdgeMap, Side, Triangulation};

fn moved<T: Clone>(m: &BTreeMap<EdgeId, T>, al: EdgeId, ar: EdgeId, new: EdgeId, join: impl Fn(&T, &T) -> T) -> BTreeMap<EdgeId, T> {
    let mut out: BTreeMap<EdgeId, T> = m.iter().filter(|(&e, _)| e != al && e != ar).map(|(&e, v)| (e, v.clone())).collect();
    out.insert(new, join(&m[&al], &m[&ar]));
    out
}

/// `X_new = X_al * X_ar`, other coordinates carried over.
pub fn glue_chart_with_id(chart: &Chart, al: EdgeId, ar: EdgeId, new: EdgeId) -> Result<(Chart, EdgeMap)> {
    if chart.kind != ChartKind::X {
        return Err(Error::WrongChartKind("x"));
    }
    let (tri, map) = chart.tri.glue_with_id(al, ar, new)?;
    let values = match &chart.values {
        ChartValues::Symbolic(v) => ChartValues::Symbolic(moved(v, al, ar, new, |a, b| a.mul(b))),
        ChartValues::Numeric(v) => ChartValues::Numeric(moved(v, al, ar, new, |a, b| a * b)),
    };
    Ok((Chart { tri, kind: ChartKind::X, values }, map))
}

pub fn glue_chart(chart: &Chart, al: EdgeId, ar: EdgeId) -> Result<(Chart, EdgeMap)> {
    glue_chart_with_id(chart, al, ar, chart.tri.next_id())
}

/// `x_new = x_al + x_ar` on the glued triangulation.
pub fn glue_vector(v: &TropicalVector, al: EdgeId, ar: EdgeId, new: EdgeId) -> Result<TropicalVector> {
    let (tri, _) = v.tri.glue_with_id(al, ar, new)?;
    TropicalVector::new(&tri, moved(&v.entries, al, ar, new, |a, b| a + b))
}

fn common_denominator(v: &TropicalVector) -> Rat {
    let mut d = BigInt::one();
    for x in v.entries.values() {
        d = d.lcm(x.denom());
    }
    Rat::from_integer(d)
}

fn glue_with(lam: &PLamination, al: EdgeId, ar: EdgeId, new: EdgeId, dual: bool) -> Result<PLamination> {
    let x = if dual { dual_shear_coords(lam) } else { shear_coords(lam) };
    let g = glue_vector(&x, al, ar, new)?;
    // extend to rational laminations by rescaling
    let d = common_denominator(&g);
    let gi = g.scale(&d);
    let out = if dual { reconstruct_from_dual_shear(&g.tri, &gi)? } else { reconstruct_from_shear(&g.tri, &gi)? };
    Ok(out.scale(&d.recip()))
}

pub fn glue_tropical_with_id(lam: &PLamination, al: EdgeId, ar: EdgeId, new: EdgeId) -> Result<PLamination> {
    glue_with(lam, al, ar, new, false)
}

pub fn glue_tropical(lam: &PLamination, al: EdgeId, ar: EdgeId) -> Result<PLamination> {
    glue_with(lam, al, ar, lam.tri.next_id(), false)
}

pub fn dual_glue_tropical_with_id(lam: &PLamination, al: EdgeId, ar: EdgeId, new: EdgeId) -> Result<PLamination> {
    glue_with(lam, al, ar, new, true)
}

pub fn dual_glue_tropical(lam: &PLamination, al: EdgeId, ar: EdgeId) -> Result<PLamination> {
    glue_with(lam, al, ar, lam.tri.next_id(), true)
}

/// `nu_al += mu`, `nu_ar -= mu`.
pub fn shift_action(lam: &PLamination, al: EdgeId, ar: EdgeId, mu: &Rat) -> Result<PLamination> {
    if al == ar {
        return Err(Error::SameEdge);
    }
    for e in [al, ar] {
        if !lam.tri.has_edge(e) || !lam.tri.is_boundary(e) {
            return Err(Error::NotBoundary(e));
        }
    }
    let mut out = lam.clone();
    *out.nu.get_mut(&al).expect("pinning") += mu;
    *out.nu.get_mut(&ar).expect("pinning") -= mu;
    Ok(out)
}

/// Corner index (between sides `i` and `i+1`) used by a segment.
fn corner_of(tri: &Triangulation, a: Side, b: Side) -> (usize, usize) {
    let (t, i) = tri.locate(a);
    if tri.next(a) == b {
        (t, i)
    } else {
        (t, tri.locate(b).1)
    }
}

fn to_i64(r: &Rat) -> Result<i64> {
    if !r.is_integer() {
        return Err(Error::NotIntegral);
    }
    r.to_integer().to_i64().ok_or_else(|| Error::Other("value too large".into()))
}

fn pin_curves(lam: &PLamination, al: EdgeId, ar: EdgeId, glued: &Triangulation, new: EdgeId, dual: bool, n: i64) -> Result<BTreeMap<Curve, i64>> {
    let tri = &lam.tri;
    let mut corner = vec![[0i64; 3]; tri.triangles().len()];
    for (c, w) in &lam.components {
        let w = to_i64(w)?;
        for &(a, b) in c.segments() {
            let (t, i) = corner_of(tri, a, b);
            corner[t][i] += w;
        }
    }
    let mut points = BTreeSet::new();
    for e in [al, ar] {
        let s = side(e, 0);
        points.insert(tri.tail(s));
        points.insert(tri.head(s));
    }
    for m in points {
        for s in tri.fan(m)? {
            let (t, i) = tri.locate(tri.prev(s));
            corner[t][i] += n;
        }
    }
    let own = |e: EdgeId| -> i64 {
        let s = side(e, 0);
        let (t, i) = tri.locate(s);
        corner[t][i] + corner[t][(i + 2) % 3] - 2 * n
    };
    let off = |e: EdgeId| if dual { n + own(e) } else { n };
    let total = to_i64(&lam.nu[&al])? + off(al) + to_i64(&lam.nu[&ar])? + off(ar) - 1;
    let st = Strands { tri: glued, corner };
    let cross = |s: Side, p: i64| -> Option<(Side, i64)> {
        if glued.is_boundary_side(s) {
            return None;
        }
        if edge_of(s) == new {
            let o = s ^ 1;
            let q = total - p;
            return (0..st.count(o)).contains(&q).then_some((o, q));
        }
        st.twin_cross(s, p)
    };
    let all = st.trace(&cross)?;
    Ok(all.into_iter().filter(|(c, _)| !c.is_peripheral(glued)).collect())
}

/// Curve-level gluing with pins, for integral laminations.  Pinnings on the
/// remaining intervals are chosen so that their coordinates are unchanged.
pub fn glue_by_pins(lam: &PLamination, al: EdgeId, ar: EdgeId, new: EdgeId, dual: bool) -> Result<PLamination> {
    if !lam.is_integral() {
        return Err(Error::NotIntegral);
    }
    let (glued, _) = lam.tri.glue_with_id(al, ar, new)?;
    if glued.is_punctured() {
        return Err(Error::PuncturedSurfaceUnsupported);
    }
    let weight: i64 = lam.components.iter().map(|(c, w)| to_i64(w).map(|w| w * c.segments().len() as i64)).sum::<Result<i64>>()?;
    let nus: i64 = lam.nu.values().map(|v| to_i64(v).map(i64::abs)).sum::<Result<i64>>()?;
    let n = 2 + weight + nus;
    let a = pin_curves(lam, al, ar, &glued, new, dual, n)?;
    let b = pin_curves(lam, al, ar, &glued, new, dual, 2 * n)?;
    if a != b {
        return Err(Error::Other("pin gluing did not stabilise".into()));
    }
    let comps = a.into_iter().map(|(c, k)| (c, Rat::from_integer(k.into()))).collect();
    let mut out = PLamination::new(&glued, comps, BTreeMap::new())?;
    let before = if dual { dual_shear_coords(lam) } else { shear_coords(lam) };
    let now = if dual { dual_shear_coords(&out) } else { shear_coords(&out) };
    for e in glued.boundary_edges() {
        out.nu.insert(e, before.get(e) - now.get(e));
    }
    Ok(out)
}

/// Sum of the two pinnings being glued.
pub fn pinning_sum(lam: &PLamination, al: EdgeId, ar: EdgeId) -> Rat {
    lam.nu.get(&al).cloned().unwrap_or_else(Rat::zero) + lam.nu.get(&ar).cloned().unwrap_or_else(Rat::zero)
}
