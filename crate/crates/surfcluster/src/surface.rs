//! Marked surfaces, ideal triangulations and flips.
//!
//! An edge `e` has two sides `2e` and `2e+1`; side 0 runs from `tail` to
//! `head`, side 1 the other way.  Boundary intervals only expose side 0.
//! Triangles list their three sides counterclockwise, so the surface lies to
//! the left of every side.  Boundary intervals therefore run from `m+` (tail)
//! to `m-` (head).

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

pub type EdgeId = u32;
pub type Side = u32;
pub type PointId = u32;

pub fn side(e: EdgeId, half: u32) -> Side {
    2 * e + half
}

pub fn twin(s: Side) -> Side {
    s ^ 1
}

pub fn edge_of(s: Side) -> EdgeId {
    s >> 1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarkedSurface {
    pub genus: u32,
    pub punctures: Vec<PointId>,
    pub boundary: Vec<Vec<PointId>>,
}

impl MarkedSurface {
    /// Validated surface; special points are numbered first, then punctures.
    pub fn new(genus: u32, punctures: usize, boundary: &[usize]) -> Result<Self> {
        let mut next = 0u32;
        let mut bd = Vec::new();
        for &n in boundary {
            bd.push((next..next + n as u32).collect::<Vec<_>>());
            next += n as u32;
        }
        let punctures = (next..next + punctures as u32).collect();
        let s = MarkedSurface { genus, punctures, boundary: bd };
        s.validate()?;
        Ok(s)
    }

    pub fn polygon(n: usize) -> Result<Self> {
        Self::new(0, 0, &[n])
    }

    /// Euler characteristic of the surface with punctures removed.
    pub fn euler_punctured(&self) -> i64 {
        2 - 2 * self.genus as i64 - self.boundary.len() as i64 - self.punctures.len() as i64
    }

    pub fn special_count(&self) -> usize {
        self.boundary.iter().map(Vec::len).sum()
    }

    pub fn validate(&self) -> Result<()> {
        if self.boundary.iter().any(Vec::is_empty) {
            return Err(Error::ConditionViolated("S1: a boundary component has no special point".into()));
        }
        if self.special_count() + self.punctures.len() == 0 {
            return Err(Error::ConditionViolated("no marked points".into()));
        }
        let s2 = -2 * self.euler_punctured() + self.special_count() as i64;
        if s2 <= 0 {
            return Err(Error::ConditionViolated(format!("S2: -2chi + |M_bd| = {} <= 0", s2)));
        }
        if self.genus == 0 && self.punctures.len() == 1 && self.boundary.len() == 1 && self.boundary[0].len() == 1 {
            return Err(Error::ConditionViolated("S3: once-punctured monogon".into()));
        }
        let mut seen = BTreeSet::new();
        for p in self.boundary.iter().flatten().chain(self.punctures.iter()) {
            if !seen.insert(*p) {
                return Err(Error::ConditionViolated(format!("marked point {} listed twice", p)));
            }
        }
        Ok(())
    }

    /// `(edges, interior edges, triangles)` of any ideal triangulation.
    pub fn expected_counts(&self) -> (usize, usize, usize) {
        let chi = self.euler_punctured();
        let b = self.special_count() as i64;
        ((-3 * chi + 2 * b) as usize, (-3 * chi + b) as usize, (-2 * chi + b) as usize)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub id: EdgeId,
    pub boundary: bool,
    pub tail: PointId,
    pub head: PointId,
    pub label: Option<String>,
}

/// Maps edge ids of a source triangulation to the ids in the target.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct EdgeMap {
    pub map: BTreeMap<EdgeId, EdgeId>,
}

impl EdgeMap {
    pub fn get(&self, e: EdgeId) -> EdgeId {
        self.map.get(&e).copied().unwrap_or(e)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relabeling {
    pub removed: EdgeId,
    pub added: EdgeId,
}

#[derive(Clone, Debug)]
pub struct Triangulation {
    edges: BTreeMap<EdgeId, Edge>,
    triangles: Vec<[Side; 3]>,
    next_id: EdgeId,
    loc: BTreeMap<Side, (usize, usize)>,
}

/// Equality up to the orientation of interior edges and the id counter.
impl PartialEq for Triangulation {
    fn eq(&self, o: &Self) -> bool {
        let key = |t: &Triangulation| -> Vec<(EdgeId, bool, PointId, PointId, Option<String>)> {
            t.edges
                .values()
                .map(|e| (e.id, e.boundary, e.tail.min(e.head), e.tail.max(e.head), e.label.clone()))
                .collect()
        };
        key(self) == key(o) && self.canonical_triangles() == o.canonical_triangles()
    }
}

impl Eq for Triangulation {}

impl Triangulation {
    pub fn from_parts(edges: Vec<Edge>, triangles: Vec<[Side; 3]>, next_id: EdgeId) -> Result<Self> {
        let mut map = BTreeMap::new();
        for e in edges {
            if map.insert(e.id, e.clone()).is_some() {
                return Err(Error::InvalidTriangulation(format!("duplicate edge id {}", e.id)));
            }
        }
        let next_id = next_id.max(map.keys().next_back().map_or(0, |m| m + 1));
        let mut t = Triangulation { edges: map, triangles, next_id, loc: BTreeMap::new() };
        t.index()?;
        Ok(t)
    }

    fn index(&mut self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidTriangulation(m));
        self.loc.clear();
        for (ti, tri) in self.triangles.iter().enumerate() {
            for (i, &s) in tri.iter().enumerate() {
                let e = match self.edges.get(&edge_of(s)) {
                    Some(e) => e,
                    None => return bad(format!("triangle {} uses unknown edge {}", ti, edge_of(s))),
                };
                if e.boundary && s & 1 == 1 {
                    return bad(format!("boundary edge {} used with its outer side", e.id));
                }
                if self.loc.insert(s, (ti, i)).is_some() {
                    return bad(format!("side {} used twice", s));
                }
            }
            let es: BTreeSet<EdgeId> = tri.iter().map(|&s| edge_of(s)).collect();
            if es.len() < 3 {
                return bad(format!("triangle {} is self-folded", ti));
            }
        }
        for e in self.edges.values() {
            let need = if e.boundary { 1 } else { 2 };
            let have = (0..2).filter(|&h| self.loc.contains_key(&side(e.id, h))).count();
            if have != need {
                return bad(format!("edge {} has {} of {} sides in triangles", e.id, have, need));
            }
        }
        for (ti, tri) in self.triangles.iter().enumerate() {
            for i in 0..3 {
                if self.head(tri[i]) != self.tail(tri[(i + 1) % 3]) {
                    return bad(format!("triangle {} is not a closed counterclockwise cycle", ti));
                }
            }
        }
        Ok(())
    }

    pub fn edges(&self) -> impl Iterator<Item = &Edge> {
        self.edges.values()
    }

    pub fn edge_ids(&self) -> Vec<EdgeId> {
        self.edges.keys().copied().collect()
    }

    pub fn edge(&self, e: EdgeId) -> Result<&Edge> {
        self.edges.get(&e).ok_or_else(|| Error::UnknownEdge(e.to_string()))
    }

    pub fn has_edge(&self, e: EdgeId) -> bool {
        self.edges.contains_key(&e)
    }

    pub fn next_id(&self) -> EdgeId {
        self.next_id
    }

    pub fn triangles(&self) -> &[[Side; 3]] {
        &self.triangles
    }

    pub fn is_boundary(&self, e: EdgeId) -> bool {
        self.edges.get(&e).is_some_and(|e| e.boundary)
    }

    pub fn is_boundary_side(&self, s: Side) -> bool {
        self.is_boundary(edge_of(s))
    }

    pub fn interior_edges(&self) -> Vec<EdgeId> {
        self.edges.values().filter(|e| !e.boundary).map(|e| e.id).collect()
    }

    pub fn boundary_edges(&self) -> Vec<EdgeId> {
        self.edges.values().filter(|e| e.boundary).map(|e| e.id).collect()
    }

    /// Resolve an edge by numeric id or label.
    pub fn find_edge(&self, key: &str) -> Result<EdgeId> {
        if let Some(e) = self.edges.values().find(|e| e.label.as_deref() == Some(key)) {
            return Ok(e.id);
        }
        match key.parse::<EdgeId>() {
            Ok(id) if self.edges.contains_key(&id) => Ok(id),
            _ => Err(Error::UnknownEdge(key.to_string())),
        }
    }

    pub fn set_label(&mut self, e: EdgeId, label: &str) -> Result<()> {
        let edge = self.edges.get_mut(&e).ok_or_else(|| Error::UnknownEdge(e.to_string()))?;
        edge.label = Some(label.to_string());
        Ok(())
    }

    pub fn label(&self, e: EdgeId) -> String {
        match self.edges.get(&e).and_then(|e| e.label.clone()) {
            Some(l) => l,
            None => format!("e{}", e),
        }
    }

    pub fn tail(&self, s: Side) -> PointId {
        let e = &self.edges[&edge_of(s)];
        if s & 1 == 0 {
            e.tail
        } else {
            e.head
        }
    }

    pub fn head(&self, s: Side) -> PointId {
        let e = &self.edges[&edge_of(s)];
        if s & 1 == 0 {
            e.head
        } else {
            e.tail
        }
    }

    /// Triangle index and position of a side.
    pub fn locate(&self, s: Side) -> (usize, usize) {
        self.loc[&s]
    }

    pub fn has_side(&self, s: Side) -> bool {
        self.loc.contains_key(&s)
    }

    pub fn triangle_of(&self, s: Side) -> usize {
        self.loc[&s].0
    }

    /// Counterclockwise successor of a side in its triangle.
    pub fn next(&self, s: Side) -> Side {
        let (t, i) = self.loc[&s];
        self.triangles[t][(i + 1) % 3]
    }

    pub fn prev(&self, s: Side) -> Side {
        let (t, i) = self.loc[&s];
        self.triangles[t][(i + 2) % 3]
    }

    pub fn points(&self) -> BTreeSet<PointId> {
        self.edges.values().flat_map(|e| [e.tail, e.head]).collect()
    }

    pub fn special_points(&self) -> BTreeSet<PointId> {
        self.edges.values().filter(|e| e.boundary).flat_map(|e| [e.tail, e.head]).collect()
    }

    pub fn punctures(&self) -> BTreeSet<PointId> {
        let sp = self.special_points();
        self.points().into_iter().filter(|p| !sp.contains(p)).collect()
    }

    pub fn is_punctured(&self) -> bool {
        !self.punctures().is_empty()
    }

    /// The boundary interval leaving `m` (its `m+` is `m`).
    pub fn interval_from(&self, m: PointId) -> Option<EdgeId> {
        self.edges.values().find(|e| e.boundary && e.tail == m).map(|e| e.id)
    }

    /// The boundary interval arriving at `m` (its `m-` is `m`).
    pub fn interval_to(&self, m: PointId) -> Option<EdgeId> {
        self.edges.values().find(|e| e.boundary && e.head == m).map(|e| e.id)
    }

    /// Sides leaving the special point `m`, counterclockwise from the boundary
    /// interval leaving `m`.  The last entry's `prev` is the interval arriving at `m`.
    pub fn fan(&self, m: PointId) -> Result<Vec<Side>> {
        let start = self.interval_from(m).ok_or(Error::EndpointAtPuncture)?;
        let mut out = Vec::new();
        let mut s = side(start, 0);
        loop {
            out.push(s);
            let p = self.prev(s);
            if self.is_boundary_side(p) {
                return Ok(out);
            }
            s = twin(p);
        }
    }

    fn canonical_triangles(&self) -> Vec<[(EdgeId, PointId); 3]> {
        let mut v: Vec<[(EdgeId, PointId); 3]> = self
            .triangles
            .iter()
            .map(|t| {
                let k = t.map(|s| (edge_of(s), self.tail(s)));
                let i = (0..3).min_by_key(|&i| k[i]).unwrap_or(0);
                [k[i], k[(i + 1) % 3], k[(i + 2) % 3]]
            })
            .collect();
        v.sort();
        v
    }

    pub fn flip(&self, k: EdgeId) -> Result<(Triangulation, Relabeling)> {
        self.flip_with_id(k, self.next_id)
    }

    /// Flip `k`, giving the new diagonal the id `new_id`.
    pub fn flip_with_id(&self, k: EdgeId, new_id: EdgeId) -> Result<(Triangulation, Relabeling)> {
        let e = self.edge(k)?;
        if e.boundary {
            return Err(Error::NotInterior(k));
        }
        if new_id != k && self.edges.contains_key(&new_id) {
            return Err(Error::Other(format!("edge id {} already in use", new_id)));
        }
        let s = side(k, 0);
        let t = side(k, 1);
        let (t1, _) = self.locate(s);
        let (t2, _) = self.locate(t);
        let (a, b) = (self.next(s), self.prev(s));
        let (c, d) = (self.next(t), self.prev(t));
        if edge_of(a) == edge_of(d) || edge_of(b) == edge_of(c) {
            return Err(Error::WouldSelfFold(k));
        }
        let r = self.head(a);
        let q = self.head(c);
        let mut edges = self.edges.clone();
        edges.remove(&k);
        edges.insert(new_id, Edge { id: new_id, boundary: false, tail: r, head: q, label: None });
        let mut triangles = self.triangles.clone();
        triangles[t1] = [side(new_id, 0), d, a];
        triangles[t2] = [side(new_id, 1), b, c];
        let next_id = self.next_id.max(new_id + 1);
        let out = Triangulation::from_parts(edges.into_values().collect(), triangles, next_id)?;
        Ok((out, Relabeling { removed: k, added: new_id }))
    }

    pub fn exchange_matrix(&self) -> IntMatrix {
        let ids = self.edge_ids();
        let mut eps = IntMatrix::zeros(ids.clone());
        for tri in &self.triangles {
            for i in 0..3 {
                let x = edge_of(tri[i]);
                let y = edge_of(tri[(i + 1) % 3]);
                eps.add(x, y, 1);
                eps.add(y, x, -1);
            }
        }
        eps
    }

    pub fn exchange_data(&self) -> ExchangeData {
        let epsilon = self.exchange_matrix();
        let mut m = IntMatrix::zeros(self.edge_ids());
        for e in self.boundary_edges() {
            m.set(e, e, -1);
        }
        let p = epsilon.plus(&m);
        ExchangeData { epsilon, m, p }
    }

    /// Disjoint union; the other triangulation's ids are shifted past ours
    /// and its labels get a trailing prime.
    pub fn disjoint_union(&self, other: &Triangulation) -> Triangulation {
        let eoff = self.next_id;
        let poff = self.points().iter().next_back().map_or(0, |p| p + 1);
        let mut edges: Vec<Edge> = self.edges.values().cloned().collect();
        for e in other.edges.values() {
            edges.push(Edge {
                id: e.id + eoff,
                boundary: e.boundary,
                tail: e.tail + poff,
                head: e.head + poff,
                label: e.label.as_ref().map(|l| format!("{}'", l)),
            });
        }
        let mut triangles = self.triangles.clone();
        for t in &other.triangles {
            triangles.push([t[0] + 2 * eoff, t[1] + 2 * eoff, t[2] + 2 * eoff]);
        }
        Triangulation::from_parts(edges, triangles, eoff + other.next_id).expect("disjoint union of valid triangulations")
    }

    /// Glue boundary intervals `al` and `ar` into one interior edge with id
    /// `new_id`; `m+` of one side meets `m-` of the other.
    pub fn glue_with_id(&self, al: EdgeId, ar: EdgeId, new_id: EdgeId) -> Result<(Triangulation, EdgeMap)> {
        if al == ar {
            return Err(Error::SameEdge);
        }
        let l = self.edge(al)?.clone();
        let r = self.edge(ar)?.clone();
        if !l.boundary {
            return Err(Error::NotBoundary(al));
        }
        if !r.boundary {
            return Err(Error::NotBoundary(ar));
        }
        if self.triangle_of(side(al, 0)) == self.triangle_of(side(ar, 0)) {
            return Err(Error::ConditionViolated("gluing two sides of one triangle folds it".into()));
        }
        let mut uf: BTreeMap<PointId, PointId> = self.points().into_iter().map(|p| (p, p)).collect();
        fn find(uf: &BTreeMap<PointId, PointId>, mut p: PointId) -> PointId {
            while uf[&p] != p {
                p = uf[&p];
            }
            p
        }
        let mut union = |a: PointId, b: PointId| {
            let (x, y) = (find(&uf, a), find(&uf, b));
            let (lo, hi) = (x.min(y), x.max(y));
            uf.insert(hi, lo);
        };
        union(l.head, r.tail);
        union(l.tail, r.head);
        let mut edges = Vec::new();
        for e in self.edges.values() {
            if e.id == al || e.id == ar {
                continue;
            }
            let mut e = e.clone();
            e.tail = find(&uf, e.tail);
            e.head = find(&uf, e.head);
            edges.push(e);
        }
        edges.push(Edge { id: new_id, boundary: false, tail: find(&uf, l.tail), head: find(&uf, l.head), label: None });
        let triangles = self
            .triangles
            .iter()
            .map(|t| {
                t.map(|s| {
                    if s == side(al, 0) {
                        side(new_id, 0)
                    } else if s == side(ar, 0) {
                        side(new_id, 1)
                    } else {
                        s
                    }
                })
            })
            .collect();
        let out = Triangulation::from_parts(edges, triangles, self.next_id.max(new_id + 1))?;
        for s in out.surfaces() {
            s.validate()?;
        }
        let mut map = EdgeMap::default();
        map.map.insert(al, new_id);
        map.map.insert(ar, new_id);
        Ok((out, map))
    }

    pub fn glue(&self, al: EdgeId, ar: EdgeId) -> Result<(Triangulation, EdgeMap)> {
        self.glue_with_id(al, ar, self.next_id)
    }

    /// Connected components as sets of triangle indices.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.triangles.len();
        let mut comp = vec![usize::MAX; n];
        let mut out = Vec::new();
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut stack = vec![start];
            let mut members = Vec::new();
            comp[start] = id;
            while let Some(t) = stack.pop() {
                members.push(t);
                for &s in &self.triangles[t] {
                    if let Some(&(u, _)) = self.loc.get(&twin(s)) {
                        if comp[u] == usize::MAX {
                            comp[u] = id;
                            stack.push(u);
                        }
                    }
                }
            }
            members.sort();
            out.push(members);
        }
        out
    }

    /// The marked surfaces this triangulation lives on, one per component.
    pub fn surfaces(&self) -> Vec<MarkedSurface> {
        let mut out = Vec::new();
        for comp in self.components() {
            let mut es = BTreeSet::new();
            for &t in &comp {
                for &s in &self.triangles[t] {
                    es.insert(edge_of(s));
                }
            }
            let pts: BTreeSet<PointId> = es.iter().flat_map(|e| [self.edges[e].tail, self.edges[e].head]).collect();
            let bds: Vec<&Edge> = es.iter().map(|e| &self.edges[e]).filter(|e| e.boundary).collect();
            let mut cycles = Vec::new();
            let mut used = BTreeSet::new();
            let mut starts: Vec<PointId> = bds.iter().map(|e| e.tail).collect();
            starts.sort();
            for st in starts {
                if used.contains(&st) {
                    continue;
                }
                let mut cyc = Vec::new();
                let mut p = st;
                loop {
                    used.insert(p);
                    cyc.push(p);
                    let e = bds.iter().find(|e| e.tail == p).expect("boundary cycle");
                    p = e.head;
                    if p == st {
                        break;
                    }
                }
                cycles.push(cyc);
            }
            let chi = pts.len() as i64 - es.len() as i64 + comp.len() as i64;
            let b = cycles.len() as i64;
            let genus = ((2 - b - chi) / 2) as u32;
            let special: BTreeSet<PointId> = bds.iter().flat_map(|e| [e.tail, e.head]).collect();
            let punctures = pts.iter().filter(|p| !special.contains(p)).copied().collect();
            out.push(MarkedSurface { genus, punctures, boundary: cycles });
        }
        out
    }
}

/// Exchange matrix, boundary matrix and their sum, indexed by edge id.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExchangeData {
    pub epsilon: IntMatrix,
    pub m: IntMatrix,
    pub p: IntMatrix,
}

#[derive(Clone, Copy)]
enum Letter {
    Bd(usize, usize),
    Pair(u32, bool),
}

/// Deterministic fan triangulation from a polygon word.
pub fn initial_triangulation(surface: &MarkedSurface) -> Result<Triangulation> {
    surface.validate()?;
    let g = surface.genus;
    let p = surface.punctures.len() as u32;
    let b = surface.boundary.len();
    let mut word: Vec<Letter> = Vec::new();
    let mut pair = 0u32;
    let chain = |word: &mut Vec<Letter>, n: u32, pair: &mut u32| {
        let ids: Vec<u32> = (0..n).map(|i| *pair + i).collect();
        *pair += n;
        for &i in &ids {
            word.push(Letter::Pair(i, false));
        }
        for &i in ids.iter().rev() {
            word.push(Letter::Pair(i, true));
        }
    };
    let genus_blocks = |word: &mut Vec<Letter>, pair: &mut u32| {
        for _ in 0..g {
            let (x, y) = (*pair, *pair + 1);
            *pair += 2;
            word.extend([Letter::Pair(x, false), Letter::Pair(y, false), Letter::Pair(x, true), Letter::Pair(y, true)]);
        }
    };
    if b >= 1 {
        word.push(Letter::Bd(0, 0));
        chain(&mut word, p, &mut pair);
        for k in 1..surface.boundary[0].len() {
            word.push(Letter::Bd(0, k));
        }
        genus_blocks(&mut word, &mut pair);
        for j in 1..b {
            let c = pair;
            pair += 1;
            word.push(Letter::Pair(c, false));
            for k in 0..surface.boundary[j].len() {
                word.push(Letter::Bd(j, k));
            }
            word.push(Letter::Pair(c, true));
        }
    } else if g >= 1 {
        // the chain of extra punctures sits inside the first handle
        let (x, y) = (pair, pair + 1);
        pair += 2;
        word.push(Letter::Pair(x, false));
        chain(&mut word, p - 1, &mut pair);
        word.extend([Letter::Pair(y, false), Letter::Pair(x, true), Letter::Pair(y, true)]);
        for _ in 1..g {
            let (x, y) = (pair, pair + 1);
            pair += 2;
            word.extend([Letter::Pair(x, false), Letter::Pair(y, false), Letter::Pair(x, true), Letter::Pair(y, true)]);
        }
    } else {
        chain(&mut word, p - 1, &mut pair);
    }
    let n = word.len();
    // vertex identification
    let mut parent: Vec<usize> = (0..n).collect();
    fn root(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut first: BTreeMap<u32, usize> = BTreeMap::new();
    for (i, l) in word.iter().enumerate() {
        if let Letter::Pair(id, primed) = *l {
            if !primed {
                first.insert(id, i);
            } else {
                let j = first[&id];
                for (x, y) in [(j, (i + 1) % n), ((j + 1) % n, i)] {
                    let (rx, ry) = (root(&mut parent, x), root(&mut parent, y));
                    parent[rx.max(ry)] = rx.min(ry);
                }
            }
        }
    }
    let mut point_of: BTreeMap<usize, PointId> = BTreeMap::new();
    for (i, l) in word.iter().enumerate() {
        if let Letter::Bd(j, k) = *l {
            let r = root(&mut parent, i);
            if point_of.insert(r, surface.boundary[j][k]).is_some() {
                return Err(Error::Other("polygon word identified two special points".into()));
            }
        }
    }
    let mut punct = surface.punctures.iter();
    for i in 0..n {
        let r = root(&mut parent, i);
        if let std::collections::btree_map::Entry::Vacant(e) = point_of.entry(r) {
            let id = punct.next().ok_or_else(|| Error::Other("too many vertex classes".into()))?;
            e.insert(*id);
        }
    }
    if punct.next().is_some() {
        return Err(Error::Other("too few vertex classes".into()));
    }
    let mut vpt = |i: usize| point_of[&root(&mut parent, i % n)];
    let single = b == 1;
    let mut edges: Vec<Edge> = Vec::new();
    let mut side_of: Vec<Side> = Vec::with_capacity(n);
    let mut pair_edge: BTreeMap<u32, EdgeId> = BTreeMap::new();
    let mut next: EdgeId = 0;
    for (i, l) in word.iter().enumerate() {
        match *l {
            Letter::Bd(j, k) => {
                let label = if single { format!("b{}", k + 1) } else { format!("b{}_{}", j + 1, k + 1) };
                edges.push(Edge { id: next, boundary: true, tail: vpt(i), head: vpt(i + 1), label: Some(label) });
                side_of.push(side(next, 0));
                next += 1;
            }
            Letter::Pair(id, false) => {
                edges.push(Edge { id: next, boundary: false, tail: vpt(i), head: vpt(i + 1), label: None });
                pair_edge.insert(id, next);
                side_of.push(side(next, 0));
                next += 1;
            }
            Letter::Pair(id, true) => side_of.push(side(pair_edge[&id], 1)),
        }
    }
    // diagonals from vertex 0 to vertex i, 2 <= i <= n-2
    let mut diag: BTreeMap<usize, EdgeId> = BTreeMap::new();
    for i in 2..n.saturating_sub(1) {
        edges.push(Edge { id: next, boundary: false, tail: vpt(0), head: vpt(i), label: None });
        diag.insert(i, next);
        next += 1;
    }
    let mut triangles = Vec::new();
    for i in 1..n - 1 {
        let first = if i == 1 { side_of[0] } else { side(diag[&i], 0) };
        let last = if i + 1 == n - 1 { side_of[n - 1] } else { side(diag[&(i + 1)], 1) };
        triangles.push([first, side_of[i], last]);
    }
    let t = Triangulation::from_parts(edges, triangles, next)?;
    let (ne, ni, nt) = surface.expected_counts();
    if t.edges.len() != ne || t.interior_edges().len() != ni || t.triangles.len() != nt {
        return Err(Error::Other("count formulas violated by initial triangulation".into()));
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn surface_conditions() {
        assert!(MarkedSurface::new(0, 0, &[4]).is_ok());
        assert!(matches!(MarkedSurface::new(0, 0, &[1]), Err(Error::ConditionViolated(m)) if m.starts_with("S2")));
        assert!(matches!(MarkedSurface::new(0, 1, &[1]), Err(Error::ConditionViolated(m)) if m.starts_with("S3")));
        assert!(matches!(MarkedSurface::new(0, 0, &[2, 0]), Err(Error::ConditionViolated(m)) if m.starts_with("S1")));
    }

    #[test]
    fn initial_counts() {
        for (g, p, bd) in [
            (0, 0, vec![3]),
            (0, 0, vec![4]),
            (0, 0, vec![5]),
            (0, 0, vec![1, 1]),
            (0, 0, vec![1, 1, 1]),
            (0, 1, vec![2]),
            (0, 2, vec![1]),
            (1, 0, vec![1]),
            (1, 1, vec![]),
            (0, 4, vec![]),
            (1, 2, vec![2, 1]),
            (2, 1, vec![]),
        ] {
            let s = MarkedSurface::new(g, p, &bd).unwrap();
            let t = initial_triangulation(&s).unwrap();
            assert_eq!(t.surfaces(), vec![s.clone()], "{:?}", s);
        }
    }

    #[test]
    fn square_exchange_row() {
        let t = initial_triangulation(&MarkedSurface::polygon(4).unwrap()).unwrap();
        let ed = t.exchange_data();
        let row: Vec<i64> = (0..4).map(|b| ed.epsilon.get(4, b)).collect();
        assert_eq!(row, vec![1, -1, 1, -1]);
        for a in 0..5 {
            assert_eq!(ed.m.get(a, a), if a < 4 { -1 } else { 0 });
        }
    }

    #[test]
    fn double_flip_restores() {
        let t = initial_triangulation(&MarkedSurface::polygon(4).unwrap()).unwrap();
        let (t1, r) = t.flip(4).unwrap();
        assert_ne!(t1, t);
        let (t2, _) = t1.flip_with_id(r.added, 4).unwrap();
        assert_eq!(t2, t);
        assert!(matches!(t.flip(0), Err(Error::NotInterior(0))));
    }

    #[test]
    fn glue_two_triangles() {
        let tri = initial_triangulation(&MarkedSurface::polygon(3).unwrap()).unwrap();
        let u = tri.disjoint_union(&tri);
        let (sq, map) = u.glue(u.find_edge("b1").unwrap(), u.find_edge("b1'").unwrap()).unwrap();
        assert_eq!(sq.surfaces(), vec![MarkedSurface { genus: 0, punctures: vec![], boundary: vec![vec![0, 5, 1, 2]] }]);
        let bar = map.get(0);
        let (e0, e1) = (u.exchange_matrix(), sq.exchange_matrix());
        for b in sq.edge_ids() {
            if b != bar {
                assert_eq!(e1.get(bar, b), e0.get(0, b) + e0.get(3, b));
            }
        }
    }

    #[test]
    fn glue_square_to_annulus() {
        let sq = initial_triangulation(&MarkedSurface::polygon(4).unwrap()).unwrap();
        let (ann, _) = sq.glue(0, 2).unwrap();
        let s = &ann.surfaces()[0];
        assert_eq!((s.genus, s.punctures.len(), s.boundary.len()), (0, 0, 2));
        assert_eq!(s.special_count(), 2);
    }
}
