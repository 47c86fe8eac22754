//! Wilson lines and loop monodromies as products of 2x2 matrices over
//! Laurent polynomials in the cross-ratio variables `X_e`.

use std::collections::BTreeMap;

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::curve::{turn, Curve, CurveKind, Turn};
use crate::error::{Error, Result};
use crate::poly::{LaurentPoly, Monomial, Rat};
use crate::surface::{edge_of, EdgeId, Triangulation};

/// Traversed edges and the turn made in each triangle.  Arcs list
/// `M + 1` edges (first and last are boundary intervals); loops list the
/// `M` exit edges cyclically.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TurningWord {
    pub edges: Vec<EdgeId>,
    pub turns: Vec<Turn>,
    pub cyclic: bool,
}

impl TurningWord {
    pub fn rotate(&self, k: usize) -> TurningWord {
        if !self.cyclic || self.turns.is_empty() {
            return self.clone();
        }
        let n = self.turns.len();
        let k = k % n;
        let mut edges = self.edges[k..].to_vec();
        edges.extend_from_slice(&self.edges[..k]);
        let mut turns = self.turns[k..].to_vec();
        turns.extend_from_slice(&self.turns[..k]);
        TurningWord { edges, turns, cyclic: true }
    }
}

pub fn turning_pattern(tri: &Triangulation, c: &Curve) -> Result<TurningWord> {
    let segs = c.segments();
    let turns: Vec<Turn> = segs.iter().map(|&(a, b)| turn(tri, a, b)).collect();
    match c.kind() {
        CurveKind::Arc => {
            let mut edges = vec![edge_of(segs[0].0)];
            edges.extend(segs.iter().map(|s| edge_of(s.1)));
            Ok(TurningWord { edges, turns, cyclic: false })
        }
        CurveKind::Loop => Ok(TurningWord { edges: segs.iter().map(|s| edge_of(s.1)).collect(), turns, cyclic: true }),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Matrix2 {
    pub entries: [[LaurentPoly; 2]; 2],
}

impl Matrix2 {
    pub fn identity() -> Matrix2 {
        Matrix2 { entries: [[LaurentPoly::one(), LaurentPoly::zero()], [LaurentPoly::zero(), LaurentPoly::one()]] }
    }

    fn constant(m: [[i64; 2]; 2]) -> Matrix2 {
        let c = |v: i64| LaurentPoly::constant(Rat::from_integer(v.into()));
        Matrix2 { entries: [[c(m[0][0]), c(m[0][1])], [c(m[1][0]), c(m[1][1])]] }
    }

    /// `diag(X^(1/2), X^(-1/2))`.
    pub fn h(e: EdgeId) -> Matrix2 {
        Matrix2 {
            entries: [
                [LaurentPoly::monomial(Monomial::from_doubled([(e, 1)])), LaurentPoly::zero()],
                [LaurentPoly::zero(), LaurentPoly::monomial(Monomial::from_doubled([(e, -1)]))],
            ],
        }
    }

    pub fn elementary(t: Turn) -> Matrix2 {
        match t {
            Turn::L => Matrix2::constant([[1, 1], [0, 1]]),
            Turn::R => Matrix2::constant([[1, 0], [1, 1]]),
        }
    }

    pub fn mul(&self, o: &Matrix2) -> Matrix2 {
        let a = &self.entries;
        let b = &o.entries;
        let f = |i: usize, j: usize| &(&a[i][0] * &b[0][j]) + &(&a[i][1] * &b[1][j]);
        Matrix2 { entries: [[f(0, 0), f(0, 1)], [f(1, 0), f(1, 1)]] }
    }

    pub fn det(&self) -> LaurentPoly {
        let a = &self.entries;
        &(&a[0][0] * &a[1][1]) - &(&a[0][1] * &a[1][0])
    }

    pub fn trace(&self) -> LaurentPoly {
        &self.entries[0][0] + &self.entries[1][1]
    }

    pub fn pow(&self, mut w: u64) -> Matrix2 {
        let mut acc = Matrix2::identity();
        let mut base = self.clone();
        while w > 0 {
            if w & 1 == 1 {
                acc = acc.mul(&base);
            }
            w >>= 1;
            if w > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// The entry `Δ_ij` with 1-based indices.
    pub fn delta(&self, i: usize, j: usize) -> &LaurentPoly {
        &self.entries[i - 1][j - 1]
    }

    pub fn eval(&self, point: &BTreeMap<EdgeId, Rat>) -> Result<[[Rat; 2]; 2]> {
        let e = &self.entries;
        Ok([[e[0][0].eval(point)?, e[0][1].eval(point)?], [e[1][0].eval(point)?, e[1][1].eval(point)?]])
    }
}

/// `H(X_0) E^{t_1} H(X_1) ... E^{t_M} H(X_M)` for an arc word.
pub fn wilson_line(word: &TurningWord) -> Result<Matrix2> {
    if word.cyclic || word.edges.len() != word.turns.len() + 1 {
        return Err(Error::NotBoundaryEnded);
    }
    let mut g = Matrix2::h(word.edges[0]);
    for (t, &e) in word.turns.iter().zip(&word.edges[1..]) {
        g = g.mul(&Matrix2::elementary(*t)).mul(&Matrix2::h(e));
    }
    Ok(g)
}

/// Loop monodromy `E^{t_1} H(X_1) ... E^{t_M} H(X_M)`.
pub fn loop_matrix(word: &TurningWord) -> Result<Matrix2> {
    if !word.cyclic || word.turns.is_empty() {
        return Err(Error::NotLoop);
    }
    let mut g = Matrix2::identity();
    for (t, &e) in word.turns.iter().zip(&word.edges) {
        g = g.mul(&Matrix2::elementary(*t)).mul(&Matrix2::h(e));
    }
    Ok(g)
}

/// `Tr(M^w)` in the unimodular lift whose lowest term is positive.
pub fn trace_monodromy(word: &TurningWord, w: u64) -> Result<LaurentPoly> {
    if w == 0 {
        return Err(Error::Other("trace power must be positive".into()));
    }
    let tr = loop_matrix(word)?.pow(w).trace();
    let low = tr.lowest_term()?;
    Ok(if tr.coeff(&low).is_negative() { -&tr } else { tr })
}

/// `Δ_22` of the Wilson line of a boundary-ended curve.
pub fn delta22(tri: &Triangulation, c: &Curve) -> Result<LaurentPoly> {
    let g = wilson_line(&turning_pattern(tri, c)?)?;
    Ok(g.entries[1][1].clone())
}
