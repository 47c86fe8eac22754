//! Named verification suites over small surfaces.  Each suite sweeps a
//! bounded family of inputs and stops at the first counterexample.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_traits::{One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::cluster::{mutate_x_tropical, Chart, ChartKind, TropicalVector};
use crate::curve::{b_shift, m_shift, renormalize, Curve, IdealArc};
use crate::duality::{check_bracelet_amalgamation, family_rank, AmalStatus, Duality};
use crate::ensemble::{ensemble_pullback, lattice_index, muller_matrix, q_matrix};
use crate::error::{Error, Result};
use crate::gluing::{dual_glue_tropical_with_id, glue_by_pins, glue_chart_with_id, glue_tropical_with_id};
use crate::lamination::{a_coords, a_lamination_from_coords, dual_shear_coords, reconstruct_from_dual_shear, reconstruct_from_shear, shear_coords};
use crate::matrix::RatMatrix;
use crate::poly::{LaurentPoly, Monomial, Rat};
use crate::surface::{edge_of, EdgeId, MarkedSurface, Triangulation};
use crate::wilson::delta22;

/// Sweeps larger than this are sampled.
pub const SAMPLE_CAP: usize = 20_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Mutation,
    Inverse,
    Poisson,
    Wilson,
    RoundTrip,
    Flip,
    Gluing,
    Duality,
    Amalgamation,
    Basis,
    Index,
}

impl Suite {
    pub const ALL: [Suite; 11] = [
        Suite::Mutation,
        Suite::Inverse,
        Suite::Poisson,
        Suite::Wilson,
        Suite::RoundTrip,
        Suite::Flip,
        Suite::Gluing,
        Suite::Duality,
        Suite::Amalgamation,
        Suite::Basis,
        Suite::Index,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Mutation => "mutation",
            Suite::Inverse => "inverse",
            Suite::Poisson => "poisson",
            Suite::Wilson => "wilson",
            Suite::RoundTrip => "round-trip",
            Suite::Flip => "flip",
            Suite::Gluing => "gluing",
            Suite::Duality => "duality",
            Suite::Amalgamation => "amalgamation",
            Suite::Basis => "basis",
            Suite::Index => "index",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Suite> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Other(format!("unknown suite '{}' (expected one of {})", s, Suite::ALL.map(|x| x.name()).join(", "))))
    }
}

/// Surface names: triangle, square, pentagon, hexagon, `polygon-N`,
/// `annulus` (one point per side), `annulus-P-Q`, `pants`.
pub fn named_surface(name: &str) -> Result<MarkedSurface> {
    let bad = || Error::Other(format!("unknown surface '{}'", name));
    match name {
        "triangle" => MarkedSurface::polygon(3),
        "square" => MarkedSurface::polygon(4),
        "pentagon" => MarkedSurface::polygon(5),
        "hexagon" => MarkedSurface::polygon(6),
        "annulus" => MarkedSurface::new(0, 0, &[1, 1]),
        "pants" => MarkedSurface::new(0, 0, &[1, 1, 1]),
        _ => {
            let parts: Vec<&str> = name.split('-').collect();
            let nums = || parts[1..].iter().map(|p| p.parse::<usize>().map_err(|_| bad())).collect::<Result<Vec<_>>>();
            match parts[0] {
                "polygon" if parts.len() == 2 => MarkedSurface::polygon(nums()?[0]),
                "annulus" if parts.len() == 3 => MarkedSurface::new(0, 0, &nums()?),
                _ => Err(bad()),
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checked: usize,
    pub sampled: bool,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

/// Cases in order; `Some(message)` marks a counterexample.
fn sweep<T: Sync>(items: &[T], f: impl Fn(&T) -> Result<Option<String>> + Sync) -> (usize, Option<String>) {
    let bad = items.par_iter().find_map_first(|x| match f(x) {
        Ok(None) => None,
        Ok(Some(m)) => Some(m),
        Err(e) => Some(format!("error: {}", e)),
    });
    (items.len(), bad)
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Option<String> {
    if cond {
        None
    } else {
        Some(msg())
    }
}

/// Every vector in `[lo, hi]^edges`, or `SAMPLE_CAP` seeded draws when
/// that is too many.
fn box_vectors(tri: &Triangulation, lo: i64, hi: i64, seed: u64) -> (Vec<TropicalVector>, bool) {
    let ids = tri.edge_ids();
    let width = (hi - lo + 1) as u64;
    let total = width.checked_pow(ids.len() as u32).filter(|&n| n <= SAMPLE_CAP as u64);
    let make = |vals: Vec<i64>| TropicalVector::new(tri, ids.iter().zip(vals).map(|(&e, v)| (e, Rat::from_integer(v.into()))).collect()).expect("edges of tri");
    match total {
        Some(n) => {
            let out = (0..n)
                .map(|mut k| {
                    let vals = ids
                        .iter()
                        .map(|_| {
                            let d = (k % width) as i64;
                            k /= width;
                            lo + d
                        })
                        .collect();
                    make(vals)
                })
                .collect();
            (out, false)
        }
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let out = (0..SAMPLE_CAP).map(|_| make(ids.iter().map(|_| rng.gen_range(lo..=hi)).collect())).collect();
            (out, true)
        }
    }
}

/// Two copies of `tri` and one boundary interval from each.
fn doubled(tri: &Triangulation) -> Result<(Triangulation, EdgeId, EdgeId, EdgeId)> {
    let b = *tri.boundary_edges().first().ok_or(Error::Other("surface has no boundary".into()))?;
    let t = tri.disjoint_union(tri);
    let ar = b + tri.next_id();
    if !t.has_edge(ar) || !t.is_boundary(ar) {
        return Err(Error::Other("unexpected numbering of the disjoint union".into()));
    }
    let new = t.next_id();
    Ok((t, b, ar, new))
}

/// Ideal arcs that are edges of triangulations at most `depth` flips away,
/// expressed on `tri`.
pub fn nearby_arcs(tri: &Triangulation, depth: usize) -> Result<BTreeSet<IdealArc>> {
    let mut out = BTreeSet::new();
    let mut layer: Vec<(Triangulation, Vec<(EdgeId, EdgeId)>)> = vec![(tri.clone(), Vec::new())];
    for _ in 0..depth {
        let mut next = Vec::new();
        for (tk, path) in &layer {
            for k in tk.interior_edges() {
                let new = tk.next_id();
                let Ok((t2, _)) = tk.flip_with_id(k, new) else { continue };
                let mut p2 = path.clone();
                p2.push((k, new));
                let mut c = b_shift(&t2, &IdealArc::Edge(new))?;
                let mut cur = t2.clone();
                for &(k, new) in p2.iter().rev() {
                    let (back, _) = cur.flip_with_id(new, k)?;
                    c = renormalize(&cur, &back, new, &c)?;
                    cur = back;
                }
                out.insert(m_shift(tri, &realign(&cur, tri, &c)?)?);
                next.push((t2, p2));
            }
        }
        layer = next;
    }
    Ok(out)
}

/// Renumber the sides of a curve between two copies of the same
/// triangulation that may differ in edge orientation.
fn realign(from: &Triangulation, to: &Triangulation, c: &Curve) -> Result<Curve> {
    let mut map = BTreeMap::new();
    for tf in from.triangles() {
        let tt = to
            .triangles()
            .iter()
            .flat_map(|tt| (0..3).map(move |r| [tt[r], tt[(r + 1) % 3], tt[(r + 2) % 3]]))
            .find(|tt| (0..3).all(|i| edge_of(tt[i]) == edge_of(tf[i])))
            .ok_or_else(|| Error::Other("triangulations differ".into()))?;
        for i in 0..3 {
            map.insert(tf[i], tt[i]);
        }
    }
    Curve::arc(to, c.segments().iter().map(|(a, b)| (map[a], map[b])).collect())
}

fn neg_monomial(v: &TropicalVector) -> Result<Monomial> {
    let mut exps = Vec::new();
    for (&e, x) in &v.entries {
        if !x.is_integer() {
            return Err(Error::NotIntegral);
        }
        exps.push((e, -x.to_integer().to_i64().ok_or(Error::NotIntegral)?));
    }
    Ok(Monomial::from_exps(exps))
}

pub fn run_suite(suite: Suite, tri: &Triangulation, bound: i64, seed: u64) -> Result<SuiteReport> {
    if bound < 0 {
        return Err(Error::Other("bound must be nonnegative".into()));
    }
    let mut sampled = false;
    let (checked, counterexample) = match suite {
        Suite::Mutation => {
            let cases: Vec<(ChartKind, EdgeId)> = [ChartKind::X, ChartKind::A].into_iter().flat_map(|k| tri.interior_edges().into_iter().map(move |e| (k, e))).collect();
            sweep(&cases, |&(kind, k)| {
                let c = Chart::initial(tri, kind);
                let (c1, r) = c.mutate(k)?;
                let (c2, _) = c1.mutate_with_id(r.added, k)?;
                Ok(check(c2 == c, || format!("{:?}-chart: mutating twice at edge {} is not the identity", kind, k)))
            })
        }
        Suite::Inverse => {
            let q = q_matrix(tri)?;
            let p = tri.exchange_data().p.to_rat();
            let ok = q.mul(&p) == RatMatrix::identity(tri.edge_ids());
            (1, check(ok, || "q (eps + m) differs from the identity".into()))
        }
        Suite::Poisson => {
            let q = q_matrix(tri)?;
            let lhs = q.mul(&tri.exchange_matrix().to_rat()).mul(&q.transpose());
            let rhs = muller_matrix(tri)?.to_rat().scale(Rat::new((-1).into(), 4.into()));
            (1, check(lhs == rhs, || "q eps q^T differs from -pi/4".into()))
        }
        Suite::Wilson => {
            let pb = ensemble_pullback(tri);
            let d = Duality::new(tri)?;
            let mut arcs: Vec<IdealArc> = tri.edge_ids().into_iter().map(IdealArc::Edge).collect();
            arcs.extend(nearby_arcs(tri, bound.max(1) as usize)?);
            sweep(&arcs, |arc| {
                let c = b_shift(tri, arc)?;
                let delta = delta22(tri, &c)?;
                let low = Monomial::from_doubled(c.crossing_counts().into_iter().map(|(e, n)| (e, -n)));
                if delta.lowest_term()? != low {
                    return Ok(Some(format!("{:?}: lowest term is not prod X^-a", arc)));
                }
                let f = delta.mul_monomial(&low.inv());
                if !f.coeff(&Monomial::one()).is_one() {
                    return Ok(Some(format!("{:?}: F has constant term {}", arc, f.coeff(&Monomial::one()))));
                }
                let lam = d.lambda(arc)?;
                Ok(check(delta.substitute_monomial(&pb)? == lam, || format!("{:?}: p* Delta22 differs from the lambda length", arc)))
            })
        }
        Suite::RoundTrip => {
            let (vs, s) = box_vectors(tri, -bound, bound, seed);
            sampled = s;
            sweep(&vs, |v| {
                let p = shear_coords(&reconstruct_from_shear(tri, v)?) == *v;
                let q = dual_shear_coords(&reconstruct_from_dual_shear(tri, v)?) == *v;
                Ok(check(p && q, || format!("round trip fails at {}", show(v))))
            })
        }
        Suite::Flip => {
            let (vs, s) = box_vectors(tri, -bound, bound, seed);
            sampled = s;
            sweep(&vs, |v| {
                let lam = reconstruct_from_shear(tri, v)?;
                for k in tri.interior_edges() {
                    let Ok((t2, _)) = tri.flip(k) else { continue };
                    let moved = lam.renormalize(&t2, k)?;
                    let (want, _) = mutate_x_tropical(v, k)?;
                    if shear_coords(&moved) != want {
                        return Ok(Some(format!("flip at {} disagrees for {}", k, show(v))));
                    }
                }
                Ok(None)
            })
        }
        Suite::Gluing => {
            let (t, al, ar, new) = doubled(tri)?;
            let (vs, s) = box_vectors(&t, -bound, bound, seed);
            sampled = s;
            sweep(&vs, |v| {
                let lam = reconstruct_from_shear(&t, v)?;
                let g = shear_coords(&glue_tropical_with_id(&lam, al, ar, new)?);
                if g.get(new) != v.get(al) + v.get(ar) {
                    return Ok(Some(format!("x_new is not additive at {}", show(v))));
                }
                for dual in [false, true] {
                    let pins = glue_by_pins(&lam, al, ar, new, dual)?;
                    let coords = if dual { dual_glue_tropical_with_id(&lam, al, ar, new)? } else { glue_tropical_with_id(&lam, al, ar, new)? };
                    if pins != coords {
                        return Ok(Some(format!("pin gluing (dual={}) differs at {}", dual, show(v))));
                    }
                }
                // positive numeric chart built from the same vector
                let vals = v.entries.iter().map(|(&e, x)| (e, Rat::from_integer(2.into()).pow(x.to_integer().to_i32().unwrap_or(0)))).collect::<BTreeMap<_, _>>();
                let (c, _) = glue_chart_with_id(&Chart::numeric(&t, ChartKind::X, vals.clone())?, al, ar, new)?;
                Ok(check(c.numeric_value(new) == Some(&(&vals[&al] * &vals[&ar])), || format!("X_new is not multiplicative at {}", show(v))))
            })
        }
        Suite::Duality => {
            let d = Duality::new(tri)?;
            let (vs, s) = box_vectors(tri, 0, bound, seed);
            sampled = s;
            sweep(&vs, |a| {
                let lam = a_lamination_from_coords(tri, a)?;
                if a_coords(&lam) != *a {
                    return Ok(Some(format!("a-coordinates {} are not realised", show(a))));
                }
                Ok(check(d.check_ensemble_compatibility(&lam)?, || format!("diagram does not commute at a = {}", show(a))))
            })
        }
        Suite::Amalgamation => {
            let (t, al, ar, new) = doubled(tri)?;
            let (vs, s) = box_vectors(&t, -bound, bound, seed);
            sampled = s;
            sweep(&vs, |v| {
                let lam = reconstruct_from_dual_shear(&t, v)?;
                let rep = check_bracelet_amalgamation(&lam, al, ar, new)?;
                Ok(match rep.status {
                    AmalStatus::NotEqual => Some(format!("restriction differs from the glued value at {}", show(v))),
                    _ => None,
                })
            })
        }
        Suite::Basis => {
            let d = Duality::new(tri)?;
            let (xs, s1) = box_vectors(tri, -bound, bound, seed);
            let (as_, s2) = box_vectors(tri, 0, bound, seed);
            sampled = s1 || s2;
            let fx = xs.par_iter().map(|v| d.i_x(&reconstruct_from_dual_shear(tri, v)?)).collect::<Result<Vec<LaurentPoly>>>()?;
            let fa = as_.par_iter().map(|a| d.i_a(&a_lamination_from_coords(tri, a)?)).collect::<Result<Vec<LaurentPoly>>>()?;
            let low = as_.iter().zip(&fa).position(|(a, f)| neg_monomial(a).ok() != f.lowest_term().ok());
            let bad = if family_rank(&fx) != fx.len() {
                Some(format!("I_X family of {} elements has rank {}", fx.len(), family_rank(&fx)))
            } else if family_rank(&fa) != fa.len() {
                Some(format!("I_A family of {} elements has rank {}", fa.len(), family_rank(&fa)))
            } else {
                low.map(|i| format!("lowest term of I_A at a = {} is not prod X^-a", show(&as_[i])))
            };
            (fx.len() + fa.len(), bad)
        }
        Suite::Index => {
            let idx = lattice_index(tri)?;
            (1, check(idx == Rat::from_integer(2.into()), || format!("index of the integrality sublattice is {}, not 2", idx)))
        }
    };
    Ok(SuiteReport { suite, checked, sampled, passed: counterexample.is_none(), counterexample })
}

fn show(v: &TropicalVector) -> String {
    let parts: Vec<String> = v.entries.iter().map(|(e, x)| format!("{}:{}", e, x)).collect();
    format!("{{{}}}", parts.join(", "))
}
