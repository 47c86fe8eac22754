//! Cluster Poisson (X) and K2 (A) charts, their mutations and tropical shadows.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::poly::{LaurentPoly, Monomial, Rat, RatFunc};
use crate::surface::{EdgeId, Relabeling, Triangulation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChartKind {
    X,
    A,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ChartValues {
    Symbolic(BTreeMap<EdgeId, RatFunc>),
    Numeric(BTreeMap<EdgeId, Rat>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Chart {
    pub tri: Triangulation,
    pub kind: ChartKind,
    pub values: ChartValues,
}

/// Arithmetic shared by symbolic and numeric coordinates.
trait Coord: Clone {
    fn unit() -> Self;
    fn times(&self, o: &Self) -> Self;
    fn plus(&self, o: &Self) -> Self;
    fn inverse(&self) -> Self;
    fn power(&self, n: i64) -> Self;
}

impl Coord for RatFunc {
    fn unit() -> Self {
        RatFunc::from_poly(LaurentPoly::one())
    }
    fn times(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn plus(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn inverse(&self) -> Self {
        self.recip()
    }
    fn power(&self, n: i64) -> Self {
        self.pow(n)
    }
}

impl Coord for Rat {
    fn unit() -> Self {
        Rat::one()
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn inverse(&self) -> Self {
        self.recip()
    }
    fn power(&self, n: i64) -> Self {
        crate::poly::pow_rat(self, n)
    }
}

fn mutate_x_values<T: Coord>(eps: &IntMatrix, k: EdgeId, new: EdgeId, v: &BTreeMap<EdgeId, T>) -> BTreeMap<EdgeId, T> {
    let xk = &v[&k];
    let mut out = BTreeMap::new();
    for (&a, xa) in v {
        if a == k {
            out.insert(new, xk.inverse());
            continue;
        }
        let e = eps.get(a, k);
        let val = if e > 0 {
            xa.times(&T::unit().plus(&xk.inverse()).power(-e))
        } else if e < 0 {
            xa.times(&T::unit().plus(xk).power(-e))
        } else {
            xa.clone()
        };
        out.insert(a, val);
    }
    out
}

fn mutate_a_values<T: Coord>(eps: &IntMatrix, k: EdgeId, new: EdgeId, v: &BTreeMap<EdgeId, T>) -> BTreeMap<EdgeId, T> {
    let mut pos = T::unit();
    let mut neg = T::unit();
    for (b, e) in eps.row(k) {
        if e > 0 {
            pos = pos.times(&v[&b].power(e));
        } else if e < 0 {
            neg = neg.times(&v[&b].power(-e));
        }
    }
    let mut out: BTreeMap<EdgeId, T> = v.iter().filter(|(&a, _)| a != k).map(|(&a, x)| (a, x.clone())).collect();
    out.insert(new, pos.plus(&neg).times(&v[&k].inverse()));
    out
}

impl Chart {
    /// Coordinate chart whose value on each edge is the variable of that edge.
    pub fn initial(tri: &Triangulation, kind: ChartKind) -> Chart {
        let values = tri.edge_ids().into_iter().map(|e| (e, RatFunc::from_poly(LaurentPoly::var(e)))).collect();
        Chart { tri: tri.clone(), kind, values: ChartValues::Symbolic(values) }
    }

    pub fn numeric(tri: &Triangulation, kind: ChartKind, values: BTreeMap<EdgeId, Rat>) -> Result<Chart> {
        if values.keys().copied().collect::<Vec<_>>() != tri.edge_ids() {
            return Err(Error::Other("chart values must cover exactly the edges of the triangulation".into()));
        }
        if values.values().any(|v| !v.is_positive()) {
            return Err(Error::Other("numeric chart values must be positive".into()));
        }
        Ok(Chart { tri: tri.clone(), kind, values: ChartValues::Numeric(values) })
    }

    pub fn is_symbolic(&self) -> bool {
        matches!(self.values, ChartValues::Symbolic(_))
    }

    pub fn symbolic(&self, e: EdgeId) -> Option<&RatFunc> {
        match &self.values {
            ChartValues::Symbolic(m) => m.get(&e),
            ChartValues::Numeric(_) => None,
        }
    }

    pub fn numeric_value(&self, e: EdgeId) -> Option<&Rat> {
        match &self.values {
            ChartValues::Numeric(m) => m.get(&e),
            ChartValues::Symbolic(_) => None,
        }
    }

    /// Evaluate a symbolic chart at a positive point.
    pub fn eval(&self, point: &BTreeMap<EdgeId, Rat>) -> Result<Chart> {
        match &self.values {
            ChartValues::Numeric(_) => Ok(self.clone()),
            ChartValues::Symbolic(m) => {
                let mut out = BTreeMap::new();
                for (&e, f) in m {
                    out.insert(e, f.eval(point)?);
                }
                Ok(Chart { tri: self.tri.clone(), kind: self.kind, values: ChartValues::Numeric(out) })
            }
        }
    }

    pub fn mutate(&self, k: EdgeId) -> Result<(Chart, Relabeling)> {
        self.mutate_with_id(k, self.tri.next_id())
    }

    /// Mutate at `k`; the flipped edge receives the id `new`.
    pub fn mutate_with_id(&self, k: EdgeId, new: EdgeId) -> Result<(Chart, Relabeling)> {
        let (tri, rl) = self.tri.flip_with_id(k, new)?;
        let eps = self.tri.exchange_matrix();
        let values = match (&self.values, self.kind) {
            (ChartValues::Symbolic(v), ChartKind::X) => ChartValues::Symbolic(mutate_x_values(&eps, k, new, v)),
            (ChartValues::Symbolic(v), ChartKind::A) => ChartValues::Symbolic(mutate_a_values(&eps, k, new, v)),
            (ChartValues::Numeric(v), ChartKind::X) => ChartValues::Numeric(mutate_x_values(&eps, k, new, v)),
            (ChartValues::Numeric(v), ChartKind::A) => ChartValues::Numeric(mutate_a_values(&eps, k, new, v)),
        };
        Ok((Chart { tri, kind: self.kind, values }, rl))
    }

    /// Apply a sequence of flips.
    pub fn transport(&self, path: &[EdgeId]) -> Result<Chart> {
        let mut c = self.clone();
        for &k in path {
            c = c.mutate(k)?.0;
        }
        Ok(c)
    }

    /// Symbolic value as a Laurent polynomial, if it is one.
    pub fn laurent(&self, e: EdgeId) -> Result<LaurentPoly> {
        let f = self.symbolic(e).ok_or(Error::WrongChartKind("symbolic"))?;
        f.as_poly().cloned().ok_or_else(|| Error::Other(format!("value on edge {} is not a Laurent polynomial", e)))
    }
}

pub fn mutate_x(chart: &Chart, k: EdgeId) -> Result<(Chart, Relabeling)> {
    if chart.kind != ChartKind::X {
        return Err(Error::WrongChartKind("x"));
    }
    chart.mutate(k)
}

pub fn mutate_a(chart: &Chart, k: EdgeId) -> Result<(Chart, Relabeling)> {
    if chart.kind != ChartKind::A {
        return Err(Error::WrongChartKind("a"));
    }
    chart.mutate(k)
}

/// Edge-indexed rational vector attached to a triangulation.
#[derive(Clone, Debug, PartialEq)]
pub struct TropicalVector {
    pub tri: Triangulation,
    pub entries: BTreeMap<EdgeId, Rat>,
}

impl TropicalVector {
    pub fn new(tri: &Triangulation, entries: BTreeMap<EdgeId, Rat>) -> Result<Self> {
        if entries.keys().copied().collect::<Vec<_>>() != tri.edge_ids() {
            return Err(Error::Other("vector entries must cover exactly the edges of the triangulation".into()));
        }
        Ok(TropicalVector { tri: tri.clone(), entries })
    }

    pub fn zero(tri: &Triangulation) -> Self {
        TropicalVector { tri: tri.clone(), entries: tri.edge_ids().into_iter().map(|e| (e, Rat::zero())).collect() }
    }

    pub fn get(&self, e: EdgeId) -> Rat {
        self.entries.get(&e).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_integral(&self) -> bool {
        self.entries.values().all(|v| v.is_integer())
    }

    pub fn scale(&self, c: &Rat) -> Self {
        let entries = self.entries.iter().map(|(&e, v)| (e, v * c)).collect();
        TropicalVector { tri: self.tri.clone(), entries }
    }
}

fn pos(r: &Rat) -> Rat {
    if r.is_positive() {
        r.clone()
    } else {
        Rat::zero()
    }
}

pub fn mutate_x_tropical(v: &TropicalVector, k: EdgeId) -> Result<(TropicalVector, Relabeling)> {
    mutate_x_tropical_with_id(v, k, v.tri.next_id())
}

pub fn mutate_x_tropical_with_id(v: &TropicalVector, k: EdgeId, new: EdgeId) -> Result<(TropicalVector, Relabeling)> {
    let (tri, rl) = v.tri.flip_with_id(k, new)?;
    let eps = v.tri.exchange_matrix();
    let xk = v.get(k);
    let mut out = BTreeMap::new();
    for (&a, xa) in &v.entries {
        if a == k {
            out.insert(new, -xk.clone());
            continue;
        }
        let e = eps.get(a, k);
        let val = if e > 0 {
            xa - pos(&-xk.clone()) * Rat::from_integer(e.into())
        } else if e < 0 {
            xa + pos(&xk) * Rat::from_integer((-e).into())
        } else {
            xa.clone()
        };
        out.insert(a, val);
    }
    Ok((TropicalVector { tri, entries: out }, rl))
}

pub fn mutate_a_tropical(v: &TropicalVector, k: EdgeId) -> Result<(TropicalVector, Relabeling)> {
    mutate_a_tropical_with_id(v, k, v.tri.next_id())
}

pub fn mutate_a_tropical_with_id(v: &TropicalVector, k: EdgeId, new: EdgeId) -> Result<(TropicalVector, Relabeling)> {
    let (tri, rl) = v.tri.flip_with_id(k, new)?;
    let eps = v.tri.exchange_matrix();
    let mut p = Rat::zero();
    let mut n = Rat::zero();
    for (b, e) in eps.row(k) {
        let w = Rat::from_integer(e.into());
        if e > 0 {
            p += w * v.get(b);
        } else if e < 0 {
            n -= w * v.get(b);
        }
    }
    let mut out: BTreeMap<EdgeId, Rat> = v.entries.iter().filter(|(&a, _)| a != k).map(|(&a, x)| (a, x.clone())).collect();
    out.insert(new, -v.get(k) + p.max(n));
    Ok((TropicalVector { tri, entries: out }, rl))
}

/// `{X_a, X_b} = eps_ab X_a X_b`.
pub fn poisson_bracket_x(a: EdgeId, b: EdgeId, tri: &Triangulation) -> Result<LaurentPoly> {
    tri.edge(a)?;
    tri.edge(b)?;
    let e = tri.exchange_matrix().get(a, b);
    Ok(LaurentPoly::term(Monomial::from_exps([(a, 1), (b, 1)]), Rat::from_integer(e.into())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;
    use crate::surface::{initial_triangulation, MarkedSurface};

    fn square() -> Triangulation {
        initial_triangulation(&MarkedSurface::polygon(4).unwrap()).unwrap()
    }

    fn x(v: EdgeId) -> LaurentPoly {
        LaurentPoly::var(v)
    }

    #[test]
    fn square_flip_formulas() {
        let t = square();
        let c = Chart::initial(&t, ChartKind::X);
        let (c2, rl) = mutate_x(&c, 4).unwrap();
        let one = LaurentPoly::one();
        // edge 0 has eps_{0,4} = -1, edge 1 has +1
        assert_eq!(c2.symbolic(0).unwrap(), &RatFunc::from_poly(&x(0) * &(&one + &x(4))));
        let b = RatFunc::new(&x(1) * &x(4), &one + &x(4));
        assert_eq!(c2.symbolic(1).unwrap(), &b);
        assert_eq!(c2.symbolic(rl.added).unwrap(), &RatFunc::new(one.clone(), x(4)));
    }

    #[test]
    fn ptolemy() {
        let t = square();
        let c = Chart::initial(&t, ChartKind::A);
        let (c2, rl) = mutate_a(&c, 4).unwrap();
        let expect = (&(&x(0) * &x(2)) + &(&x(1) * &x(3))).div_exact(&x(4)).unwrap();
        assert_eq!(c2.laurent(rl.added).unwrap(), expect);
    }

    #[test]
    fn tropical_a_square() {
        let t = square();
        let mut e: BTreeMap<EdgeId, Rat> = t.edge_ids().into_iter().map(|e| (e, rat(1))).collect();
        e.insert(4, rat(0));
        let v = TropicalVector::new(&t, e).unwrap();
        let (w, rl) = mutate_a_tropical(&v, 4).unwrap();
        assert_eq!(w.get(rl.added), rat(2));
        let (back, _) = mutate_a_tropical_with_id(&w, rl.added, 4).unwrap();
        assert_eq!(back.entries, v.entries);
    }

    #[test]
    fn numeric_matches_symbolic() {
        let t = square();
        let point: BTreeMap<EdgeId, Rat> = t.edge_ids().into_iter().map(|e| (e, rat(e as i64 + 2))).collect();
        for kind in [ChartKind::X, ChartKind::A] {
            let sym = Chart::initial(&t, kind);
            let num = sym.eval(&point).unwrap();
            let a = sym.mutate(4).unwrap().0.eval(&point).unwrap();
            let b = num.mutate(4).unwrap().0;
            assert_eq!(a, b);
        }
    }

    #[test]
    fn bracket() {
        let t = square();
        assert!(poisson_bracket_x(4, 4, &t).unwrap().is_zero());
        assert_eq!(poisson_bracket_x(4, 0, &t).unwrap(), &x(4) * &x(0));
        assert!(poisson_bracket_x(0, 2, &t).unwrap().is_zero());
    }
}
