//! Square matrices indexed by edge ids, plus exact rational linear algebra.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::poly::{Rat, RatJson};
use crate::surface::EdgeId;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeMatrix<T> {
    ids: Vec<EdgeId>,
    pos: BTreeMap<EdgeId, usize>,
    data: Vec<T>,
}

pub type IntMatrix = EdgeMatrix<i64>;
pub type RatMatrix = EdgeMatrix<Rat>;

impl<T: Clone + Zero> EdgeMatrix<T> {
    pub fn zeros(ids: Vec<EdgeId>) -> Self {
        let pos = ids.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let n = ids.len();
        EdgeMatrix { ids, pos, data: vec![T::zero(); n * n] }
    }

    pub fn ids(&self) -> &[EdgeId] {
        &self.ids
    }

    pub fn n(&self) -> usize {
        self.ids.len()
    }

    pub fn index(&self, e: EdgeId) -> usize {
        self.pos[&e]
    }

    pub fn get(&self, a: EdgeId, b: EdgeId) -> T {
        self.data[self.pos[&a] * self.n() + self.pos[&b]].clone()
    }

    pub fn at(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.n() + j]
    }

    pub fn set(&mut self, a: EdgeId, b: EdgeId, v: T) {
        let n = self.n();
        let k = self.pos[&a] * n + self.pos[&b];
        self.data[k] = v;
    }

    pub fn add(&mut self, a: EdgeId, b: EdgeId, v: T) {
        let n = self.n();
        let k = self.pos[&a] * n + self.pos[&b];
        self.data[k] = self.data[k].clone() + v;
    }

    pub fn plus(&self, o: &Self) -> Self {
        assert_eq!(self.ids, o.ids);
        let mut out = self.clone();
        for (x, y) in out.data.iter_mut().zip(&o.data) {
            *x = x.clone() + y.clone();
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let n = self.n();
        let mut out = self.clone();
        for i in 0..n {
            for j in 0..n {
                out.data[i * n + j] = self.data[j * n + i].clone();
            }
        }
        out
    }

    pub fn row(&self, a: EdgeId) -> Vec<(EdgeId, T)> {
        let i = self.pos[&a];
        self.ids.iter().enumerate().map(|(j, &b)| (b, self.data[i * self.n() + j].clone())).collect()
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        self.data.chunks(self.n().max(1)).map(|r| r.to_vec()).collect()
    }
}

impl<T: Clone + Zero + std::ops::Mul<Output = T>> EdgeMatrix<T> {
    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.ids, o.ids);
        let n = self.n();
        let mut out = Self::zeros(self.ids.clone());
        for i in 0..n {
            for k in 0..n {
                let a = &self.data[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let v = out.data[i * n + j].clone() + a.clone() * o.data[k * n + j].clone();
                    out.data[i * n + j] = v;
                }
            }
        }
        out
    }

    pub fn scale(&self, c: T) -> Self {
        let mut out = self.clone();
        for x in out.data.iter_mut() {
            *x = x.clone() * c.clone();
        }
        out
    }
}

impl<T: Clone + Zero + One> EdgeMatrix<T> {
    pub fn identity(ids: Vec<EdgeId>) -> Self {
        let mut m = Self::zeros(ids.clone());
        for e in ids {
            m.set(e, e, T::one());
        }
        m
    }
}

impl IntMatrix {
    pub fn to_rat(&self) -> RatMatrix {
        let mut out = RatMatrix::zeros(self.ids.clone());
        for (x, y) in out.data.iter_mut().zip(&self.data) {
            *x = Rat::from_integer((*y).into());
        }
        out
    }

    pub fn is_skew(&self) -> bool {
        *self == self.transpose().scale(-1)
    }
}

impl RatMatrix {
    pub fn det(&self) -> Rat {
        det(self.rows())
    }
}

impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Matrix", 2)?;
        st.serialize_field("edges", &self.ids)?;
        st.serialize_field("rows", &self.rows())?;
        st.end()
    }
}

impl Serialize for RatMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<RatJson>> = self.rows().iter().map(|r| r.iter().map(RatJson::from).collect()).collect();
        let mut st = s.serialize_struct("Matrix", 2)?;
        st.serialize_field("edges", &self.ids)?;
        st.serialize_field("rows", &rows)?;
        st.end()
    }
}

/// Row echelon form in place; returns the rank and the sign-adjusted
/// product of pivots when the matrix is square.
fn eliminate(m: &mut [Vec<Rat>]) -> (usize, Rat) {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut det = Rat::one();
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| !m[r][c].is_zero()) else {
            det = Rat::zero();
            continue;
        };
        if p != rank {
            m.swap(p, rank);
            det = -det;
        }
        let piv = m[rank][c].clone();
        det *= &piv;
        for r in rank + 1..rows {
            if m[r][c].is_zero() {
                continue;
            }
            let f = &m[r][c] / &piv;
            for k in c..cols {
                let v = &m[rank][k] * &f;
                m[r][k] -= v;
            }
        }
        rank += 1;
    }
    (rank, det)
}

pub fn rank(mut m: Vec<Vec<Rat>>) -> usize {
    eliminate(&mut m).0
}

pub fn det(mut m: Vec<Vec<Rat>>) -> Rat {
    let n = m.len();
    let (r, d) = eliminate(&mut m);
    if r < n {
        Rat::zero()
    } else {
        d
    }
}
