//! Ensemble maps between A- and X-charts, the inverse matrix `q`, and the
//! Poisson structure on lambda-lengths.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use crate::cluster::TropicalVector;
use crate::curve::{b_shift, IdealArc};
use crate::error::{Error, Result};
use crate::matrix::{det, IntMatrix, RatMatrix};
use crate::poly::{LaurentPoly, Monomial, Rat, Var};
use crate::surface::{edge_of, EdgeId, Triangulation};

/// `X_k -> prod_a A_a^{p_ka}` with `p = eps + m`.
pub fn ensemble_pullback(tri: &Triangulation) -> BTreeMap<Var, Monomial> {
    let p = tri.exchange_data().p;
    tri.edge_ids().into_iter().map(|k| (k, Monomial::from_exps(p.row(k)))).collect()
}

/// Crossing counts of `b_shift(a)` with every edge, endpoints included.
fn shift_counts(tri: &Triangulation) -> Result<BTreeMap<EdgeId, BTreeMap<EdgeId, i64>>> {
    if tri.is_punctured() {
        return Err(Error::PuncturedSurfaceUnsupported);
    }
    let mut out = BTreeMap::new();
    for a in tri.edge_ids() {
        out.insert(a, b_shift(tri, &IdealArc::Edge(a))?.crossing_counts());
    }
    Ok(out)
}

/// `q_ab = -a_b(b_shift(a))`.
pub fn q_matrix(tri: &Triangulation) -> Result<RatMatrix> {
    let counts = shift_counts(tri)?;
    let mut q = RatMatrix::zeros(tri.edge_ids());
    for (a, row) in counts {
        for (b, n) in row {
            q.set(a, b, Rat::new((-n).into(), 2.into()));
        }
    }
    Ok(q)
}

/// `A_a -> prod_b X_b^{q_ab}`; exponents may be half-integers.
pub fn inverse_a_from_x(tri: &Triangulation) -> Result<BTreeMap<Var, Monomial>> {
    let counts = shift_counts(tri)?;
    Ok(counts.into_iter().map(|(a, row)| (a, Monomial::from_doubled(row.into_iter().map(|(b, n)| (b, -n))))).collect())
}

/// Ends of edges at each special point, counterclockwise from the interval
/// leaving the point, the arriving interval last.
fn ends_at(tri: &Triangulation) -> Result<Vec<Vec<EdgeId>>> {
    let mut out = Vec::new();
    for m in tri.special_points() {
        let fan = tri.fan(m)?;
        let mut v: Vec<EdgeId> = fan.iter().map(|&s| edge_of(s)).collect();
        let last = *fan.last().ok_or(Error::EndpointAtPuncture)?;
        v.push(edge_of(tri.prev(last)));
        out.push(v);
    }
    Ok(out)
}

/// Compatibility matrix of the edges of `tri`: every pair of ends at a
/// common special point contributes `+1` when the end of `a` comes first
/// counterclockwise, `-1` otherwise.
pub fn muller_matrix(tri: &Triangulation) -> Result<IntMatrix> {
    if tri.is_punctured() {
        return Err(Error::PuncturedSurfaceUnsupported);
    }
    let mut pi = IntMatrix::zeros(tri.edge_ids());
    for ends in ends_at(tri)? {
        for i in 0..ends.len() {
            for j in i + 1..ends.len() {
                let (a, b) = (ends[i], ends[j]);
                if a != b {
                    pi.add(a, b, 1);
                    pi.add(b, a, -1);
                }
            }
        }
    }
    Ok(pi)
}

/// `{A_a, A_b} = -pi_ab/4 A_a A_b`.
pub fn poisson_bracket_a(tri: &Triangulation, a: EdgeId, b: EdgeId) -> Result<LaurentPoly> {
    if !tri.has_edge(a) || !tri.has_edge(b) {
        return Err(Error::IncompatibleArcs);
    }
    let pi = muller_matrix(tri)?;
    let c = Rat::new((-pi.get(a, b)).into(), 4.into());
    if c.is_zero() {
        return Ok(LaurentPoly::zero());
    }
    Ok(LaurentPoly::term(Monomial::from_exps([(a, 1), (b, 1)]), c))
}

/// Whether the shear vector lies in the image of integral A-laminations.
pub fn index2_membership(tri: &Triangulation, v: &TropicalVector) -> Result<bool> {
    let q = q_matrix(tri)?;
    for a in tri.edge_ids() {
        let s: Rat = q.row(a).into_iter().map(|(b, x)| x * v.get(b)).sum();
        if !s.is_integer() {
            return Ok(false);
        }
    }
    Ok(v.is_integral())
}

/// Index of the membership sublattice, `1/|det q|`.
pub fn lattice_index(tri: &Triangulation) -> Result<Rat> {
    let q = q_matrix(tri)?;
    let d = det(q.rows());
    if d.is_zero() {
        return Err(Error::Other("q is singular".into()));
    }
    Ok(d.abs().recip())
}
