//! JSON documents for surfaces, triangulations, charts, tropical vectors and
//! laminations.  Conversions report schema problems with JSON-pointer paths.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::cluster::{Chart, ChartKind, ChartValues, TropicalVector};
use crate::curve::{Curve, CurveKind};
use crate::error::{Error, Result};
use crate::lamination::{ALamination, PLamination};
use crate::poly::{PolyJson, Rat, RatFunc, RatJson};
use crate::surface::{Edge, EdgeId, PointId, Side, Triangulation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeKind {
    Interior,
    Boundary,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeJson {
    pub id: EdgeId,
    pub kind: EdgeKind,
    pub mplus: PointId,
    pub mminus: PointId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TriangulationJson {
    pub edges: Vec<EdgeJson>,
    pub triangles: Vec<[Side; 3]>,
    /// Id given to the next new edge; defaults to one past the largest id.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub next_id: Option<EdgeId>,
}

impl From<&Triangulation> for TriangulationJson {
    fn from(t: &Triangulation) -> Self {
        let edges = t
            .edges()
            .map(|e| EdgeJson {
                id: e.id,
                kind: if e.boundary { EdgeKind::Boundary } else { EdgeKind::Interior },
                mplus: e.tail,
                mminus: e.head,
                label: e.label.clone(),
            })
            .collect();
        TriangulationJson { edges, triangles: t.triangles().to_vec(), next_id: Some(t.next_id()) }
    }
}

impl TryFrom<&TriangulationJson> for Triangulation {
    type Error = Error;
    fn try_from(j: &TriangulationJson) -> Result<Triangulation> {
        let mut seen = BTreeMap::new();
        for (i, e) in j.edges.iter().enumerate() {
            if seen.insert(e.id, i).is_some() {
                return Err(Error::Schema(format!("/edges/{}/id: duplicate edge id {}", i, e.id)));
            }
        }
        for (i, t) in j.triangles.iter().enumerate() {
            for (k, &s) in t.iter().enumerate() {
                if !seen.contains_key(&(s >> 1)) {
                    return Err(Error::Schema(format!("/triangles/{}/{}: side {} names no edge", i, k, s)));
                }
            }
        }
        let edges = j
            .edges
            .iter()
            .map(|e| Edge { id: e.id, boundary: e.kind == EdgeKind::Boundary, tail: e.mplus, head: e.mminus, label: e.label.clone() })
            .collect();
        let floor = j.edges.iter().map(|e| e.id + 1).max().unwrap_or(0);
        Triangulation::from_parts(edges, j.triangles.clone(), j.next_id.unwrap_or(floor).max(floor))
    }
}

fn rat_map(m: &BTreeMap<EdgeId, Rat>) -> BTreeMap<EdgeId, RatJson> {
    m.iter().map(|(&e, v)| (e, RatJson::from(v))).collect()
}

fn parse_rat_map(m: &BTreeMap<EdgeId, RatJson>, at: &str) -> Result<BTreeMap<EdgeId, Rat>> {
    m.iter()
        .map(|(&e, v)| Rat::try_from(v).map(|r| (e, r)).map_err(|_| Error::Schema(format!("{}/{}/den: zero denominator", at, e))))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RatFuncJson {
    pub num: PolyJson,
    pub den: PolyJson,
}

/// Exactly one of `symbolic` and `numeric` is present.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartJson {
    pub triangulation: TriangulationJson,
    pub kind: ChartKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symbolic: Option<BTreeMap<EdgeId, RatFuncJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub numeric: Option<BTreeMap<EdgeId, RatJson>>,
}

impl From<&Chart> for ChartJson {
    fn from(c: &Chart) -> Self {
        let (symbolic, numeric) = match &c.values {
            ChartValues::Symbolic(m) => (Some(m.iter().map(|(&e, f)| (e, RatFuncJson { num: (&f.num).into(), den: (&f.den).into() })).collect()), None),
            ChartValues::Numeric(m) => (None, Some(rat_map(m))),
        };
        ChartJson { triangulation: (&c.tri).into(), kind: c.kind, symbolic, numeric }
    }
}

impl TryFrom<&ChartJson> for Chart {
    type Error = Error;
    fn try_from(j: &ChartJson) -> Result<Chart> {
        let tri = Triangulation::try_from(&j.triangulation).map_err(|e| nest("/triangulation", e))?;
        match (&j.symbolic, &j.numeric) {
            (None, Some(m)) => Chart::numeric(&tri, j.kind, parse_rat_map(m, "/numeric")?),
            (Some(_), Some(_)) | (None, None) => Err(Error::Schema("/: exactly one of symbolic and numeric is required".into())),
            (Some(m), None) => {
                let mut out = BTreeMap::new();
                for (&e, f) in m {
                    let num = (&f.num).try_into().map_err(|x| nest(&format!("/symbolic/{}/num", e), x))?;
                    let den: crate::poly::LaurentPoly = (&f.den).try_into().map_err(|x| nest(&format!("/symbolic/{}/den", e), x))?;
                    if den.is_zero() {
                        return Err(Error::Schema(format!("/symbolic/{}/den: zero", e)));
                    }
                    out.insert(e, RatFunc::new(num, den));
                }
                if out.keys().ne(tri.edge_ids().iter()) {
                    return Err(Error::Schema("/symbolic: keys must be exactly the edge ids".into()));
                }
                Ok(Chart { tri, kind: j.kind, values: ChartValues::Symbolic(out) })
            }
        }
    }
}

/// Prefix the pointer of a schema error; other errors pass through.
fn nest(prefix: &str, e: Error) -> Error {
    match e {
        Error::Schema(s) if s.starts_with('/') => Error::Schema(format!("{}{}", prefix, s)),
        Error::Schema(s) => Error::Schema(format!("{}: {}", prefix, s)),
        other => other,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TropicalJson {
    pub triangulation: TriangulationJson,
    pub kind: ChartKind,
    pub entries: BTreeMap<EdgeId, RatJson>,
}

impl TropicalJson {
    pub fn new(v: &TropicalVector, kind: ChartKind) -> Self {
        TropicalJson { triangulation: (&v.tri).into(), kind, entries: rat_map(&v.entries) }
    }

    pub fn parse(&self) -> Result<(TropicalVector, ChartKind)> {
        let tri = Triangulation::try_from(&self.triangulation).map_err(|e| nest("/triangulation", e))?;
        let v = TropicalVector::new(&tri, parse_rat_map(&self.entries, "/entries")?).map_err(|e| nest("/entries", e))?;
        Ok((v, self.kind))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CurveKindJson {
    Arc,
    Loop,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentJson {
    /// Arcs: entry side then the exit side in every triangle.  Loops: the
    /// cyclic list of exit sides.
    pub word: Vec<Side>,
    pub kind: CurveKindJson,
    pub weight: RatJson,
    #[serde(default)]
    pub puncture_ends: Vec<PointId>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LaminationJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub triangulation: Option<TriangulationJson>,
    pub components: Vec<ComponentJson>,
    #[serde(default)]
    pub sigma: BTreeMap<PointId, i8>,
    #[serde(default)]
    pub nu: BTreeMap<EdgeId, RatJson>,
}

fn components_json(cs: &[(Curve, Rat)]) -> Vec<ComponentJson> {
    cs.iter()
        .map(|(c, w)| ComponentJson {
            word: c.word(),
            kind: match c.kind() {
                CurveKind::Arc => CurveKindJson::Arc,
                CurveKind::Loop => CurveKindJson::Loop,
            },
            weight: w.into(),
            puncture_ends: Vec::new(),
        })
        .collect()
}

impl LaminationJson {
    pub fn from_p(l: &PLamination) -> Self {
        LaminationJson { triangulation: Some((&l.tri).into()), components: components_json(&l.components), sigma: l.sigma.clone(), nu: rat_map(&l.nu) }
    }

    pub fn from_a(l: &ALamination) -> Self {
        LaminationJson { triangulation: Some((&l.tri).into()), components: components_json(&l.components), sigma: BTreeMap::new(), nu: BTreeMap::new() }
    }

    /// The embedded triangulation, or `fallback` when there is none.
    pub fn triangulation(&self, fallback: Option<&Triangulation>) -> Result<Triangulation> {
        match (&self.triangulation, fallback) {
            (Some(t), _) => Triangulation::try_from(t).map_err(|e| nest("/triangulation", e)),
            (None, Some(t)) => Ok(t.clone()),
            (None, None) => Err(Error::Schema("/triangulation: missing and no triangulation supplied".into())),
        }
    }

    fn curves(&self, tri: &Triangulation) -> Result<Vec<(Curve, Rat)>> {
        let mut out = Vec::new();
        for (i, c) in self.components.iter().enumerate() {
            if !c.puncture_ends.is_empty() {
                return Err(Error::PuncturedSurfaceUnsupported);
            }
            let kind = match c.kind {
                CurveKindJson::Arc => CurveKind::Arc,
                CurveKindJson::Loop => CurveKind::Loop,
            };
            let at = |e: Error| nest(&format!("/components/{}/word", i), e);
            if let Some(&s) = c.word.iter().find(|&&s| !tri.has_side(s)) {
                return Err(Error::Schema(format!("/components/{}/word: side {} is not in the triangulation", i, s)));
            }
            let curve = Curve::from_word(tri, kind, &c.word).map_err(at)?;
            let w = Rat::try_from(&c.weight).map_err(|_| Error::Schema(format!("/components/{}/weight/den: zero denominator", i)))?;
            out.push((curve, w));
        }
        Ok(out)
    }

    pub fn to_p(&self, fallback: Option<&Triangulation>) -> Result<PLamination> {
        let tri = self.triangulation(fallback)?;
        let comps = self.curves(&tri)?;
        let nu = parse_rat_map(&self.nu, "/nu")?;
        if let Some(e) = nu.keys().find(|&&e| !tri.has_edge(e) || !tri.is_boundary(e)) {
            return Err(Error::Schema(format!("/nu/{}: not a boundary interval", e)));
        }
        if !self.sigma.is_empty() {
            return Err(Error::PuncturedSurfaceUnsupported);
        }
        PLamination::new(&tri, comps, nu)
    }

    pub fn to_a(&self, fallback: Option<&Triangulation>) -> Result<ALamination> {
        let tri = self.triangulation(fallback)?;
        let comps = self.curves(&tri)?;
        ALamination::new(&tri, comps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;
    use crate::surface::{initial_triangulation, MarkedSurface};

    #[test]
    fn triangulation_round_trip() {
        let mut t = initial_triangulation(&MarkedSurface::new(0, 0, &[1, 1]).unwrap()).unwrap();
        t.set_label(0, "β").unwrap();
        let j = TriangulationJson::from(&t);
        let s = serde_json::to_string(&j).unwrap();
        let back: TriangulationJson = serde_json::from_str(&s).unwrap();
        assert_eq!(Triangulation::try_from(&back).unwrap(), t);
        assert_eq!(serde_json::to_string(&back).unwrap(), s);
    }

    #[test]
    fn chart_round_trip() {
        let t = initial_triangulation(&MarkedSurface::polygon(5).unwrap()).unwrap();
        let k = t.interior_edges()[0];
        let (c, _) = Chart::initial(&t, ChartKind::X).mutate(k).unwrap();
        let j = ChartJson::from(&c);
        let back: ChartJson = serde_json::from_str(&serde_json::to_string(&j).unwrap()).unwrap();
        assert_eq!(Chart::try_from(&back).unwrap(), c);
    }

    #[test]
    fn lamination_round_trip() {
        let t = initial_triangulation(&MarkedSurface::polygon(4).unwrap()).unwrap();
        let mut x = TropicalVector::zero(&t);
        x.entries.insert(4, rat(1));
        x.entries.insert(0, rat(-2));
        let lam = crate::lamination::reconstruct_from_shear(&t, &x).unwrap();
        let j = LaminationJson::from_p(&lam);
        let back: LaminationJson = serde_json::from_str(&serde_json::to_string(&j).unwrap()).unwrap();
        assert_eq!(back.to_p(None).unwrap(), lam);
    }

    #[test]
    fn bad_side_reports_pointer() {
        let t = initial_triangulation(&MarkedSurface::polygon(4).unwrap()).unwrap();
        let j = LaminationJson {
            triangulation: None,
            components: vec![ComponentJson { word: vec![0, 99], kind: CurveKindJson::Arc, weight: (&rat(1)).into(), puncture_ends: vec![] }],
            sigma: BTreeMap::new(),
            nu: BTreeMap::new(),
        };
        let e = j.to_p(Some(&t)).unwrap_err().to_string();
        assert!(e.contains("/components/0/word"), "{}", e);
    }
}
