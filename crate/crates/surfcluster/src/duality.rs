//! The duality maps I_A (laminations to functions of X) and I_X
//! (P-laminations to functions of A), and checks of their compatibility
//! with the ensemble and gluing maps.  Unpunctured surfaces only.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};
use std::sync::Mutex;

use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::cluster::{Chart, ChartKind};
use crate::curve::{b_shift, m_shift, renormalize, Curve, IdealArc};
use crate::ensemble::ensemble_pullback;
use crate::error::{Error, Result};
use crate::gluing::{dual_glue_tropical_with_id, pinning_sum};
use crate::lamination::{dual_tropical_ensemble, ALamination, PLamination};
use crate::matrix::rank;
use crate::poly::{LaurentPoly, Monomial, Rat, Var};
use crate::surface::{EdgeId, Triangulation};
use crate::wilson::{delta22, trace_monodromy, turning_pattern};

const SEARCH_LIMIT: usize = 20_000;

fn weight(w: &Rat) -> Result<i64> {
    if !w.is_integer() {
        return Err(Error::NotIntegral);
    }
    w.to_integer().to_i64().ok_or_else(|| Error::Other("weight too large".into()))
}

/// Flips taking `tri` to a triangulation containing `arc`, and the id the
/// arc receives there.
pub fn flip_path(tri: &Triangulation, arc: &IdealArc) -> Result<(Vec<EdgeId>, EdgeId)> {
    if let IdealArc::Edge(e) = arc {
        return Ok((Vec::new(), *e));
    }
    let start = b_shift(tri, arc)?;
    let mut heap = BinaryHeap::new();
    let mut states: Vec<(Triangulation, Curve, Vec<EdgeId>)> = vec![(tri.clone(), start, Vec::new())];
    heap.push(Reverse((arc.crossing_total(), 0usize, 0usize)));
    while let Some(Reverse((_, depth, idx))) = heap.pop() {
        if states.len() > SEARCH_LIMIT {
            break;
        }
        let (t, c, path) = states[idx].clone();
        let IdealArc::Through(xs) = m_shift(&t, &c)? else { unreachable!("edges are returned on push") };
        let mut crossed: Vec<EdgeId> = xs.iter().map(|&s| s >> 1).collect();
        crossed.sort();
        crossed.dedup();
        for k in crossed {
            let Ok((t2, _)) = t.flip(k) else { continue };
            let c2 = renormalize(&t, &t2, k, &c)?;
            let mut p2 = path.clone();
            p2.push(k);
            match m_shift(&t2, &c2)? {
                IdealArc::Edge(e) => return Ok((p2, e)),
                a => {
                    states.push((t2, c2, p2));
                    heap.push(Reverse((a.crossing_total(), depth + 1, states.len() - 1)));
                }
            }
        }
    }
    Err(Error::NoFlipPath)
}

/// Evaluates both duality maps on one triangulation, caching the lambda
/// lengths of arcs outside it.
pub struct Duality {
    pub tri: Triangulation,
    cache: Mutex<BTreeMap<IdealArc, LaurentPoly>>,
}

impl Duality {
    pub fn new(tri: &Triangulation) -> Result<Duality> {
        if tri.is_punctured() {
            return Err(Error::PuncturedSurfaceUnsupported);
        }
        Ok(Duality { tri: tri.clone(), cache: Mutex::new(BTreeMap::new()) })
    }

    /// Lambda length of an ideal arc as a Laurent polynomial in the A-variables of `tri`.
    pub fn lambda(&self, arc: &IdealArc) -> Result<LaurentPoly> {
        if let IdealArc::Edge(e) = arc {
            return Ok(LaurentPoly::var(*e));
        }
        if let Some(v) = self.cache.lock().expect("cache").get(arc) {
            return Ok(v.clone());
        }
        let (path, e) = flip_path(&self.tri, arc)?;
        let chart = Chart::initial(&self.tri, ChartKind::A).transport(&path)?;
        let v = chart.laurent(e)?;
        self.cache.lock().expect("cache").insert(arc.clone(), v.clone());
        Ok(v)
    }

    fn check(&self, tri: &Triangulation) -> Result<()> {
        if *tri != self.tri {
            return Err(Error::Other("lamination lives on a different triangulation".into()));
        }
        Ok(())
    }

    /// Product of traces, Wilson-line entries and their powers over the components.
    pub fn i_a(&self, lam: &ALamination) -> Result<LaurentPoly> {
        if !lam.is_integral() {
            return Err(Error::NotIntegral);
        }
        self.i_a_curves(lam)
    }

    /// Same product for any lamination with integer weights; the result may
    /// have half-integer exponents.
    pub fn i_a_curves(&self, lam: &ALamination) -> Result<LaurentPoly> {
        self.check(&lam.tri)?;
        let mut out = LaurentPoly::one();
        for (c, w) in &lam.components {
            let w = weight(w)?;
            let f = if c.is_loop() {
                trace_monodromy(&turning_pattern(&self.tri, c)?, w as u64)?
            } else {
                delta22(&self.tri, c)?.pow(w)?
            };
            out = &out * &f;
        }
        Ok(out)
    }

    /// The curve part of I_X: loops as pulled-back traces, arcs as powers
    /// of the lambda length of their negative shift.
    pub fn i_x_curves(&self, lam: &PLamination) -> Result<LaurentPoly> {
        self.check(&lam.tri)?;
        let pb = ensemble_pullback(&self.tri);
        let mut out = LaurentPoly::one();
        for (c, w) in &lam.components {
            let w = weight(w)?;
            let f = if c.is_loop() {
                trace_monodromy(&turning_pattern(&self.tri, c)?, w as u64)?.substitute_monomial(&pb)?
            } else {
                self.lambda(&m_shift(&self.tri, c)?)?.pow(w)?
            };
            out = &out * &f;
        }
        Ok(out)
    }

    pub fn i_x(&self, lam: &PLamination) -> Result<LaurentPoly> {
        let curves = self.i_x_curves(lam)?;
        let mut exps = Vec::new();
        for (&e, v) in &lam.nu {
            exps.push((e, weight(v)?));
        }
        Ok(curves.mul_monomial(&Monomial::from_exps(exps)))
    }

    /// Pull back I_A along the ensemble map and compare with I_X of the
    /// dual tropical ensemble image.
    pub fn check_ensemble_compatibility(&self, lam: &ALamination) -> Result<bool> {
        let lhs = self.i_a(lam)?.substitute_monomial(&ensemble_pullback(&self.tri))?;
        let rhs = self.i_x(&dual_tropical_ensemble(lam)?)?;
        Ok(lhs == rhs)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AmalStatus {
    Equal,
    NotEqual,
    /// The pinning sum is negative; the comparison was still carried out.
    NegativePinningSum,
}

#[derive(Clone, Debug, Serialize)]
pub struct AmalReport {
    pub status: AmalStatus,
    pub equal: bool,
    /// `Res*(I_X(L, nu))`.
    pub restricted: LaurentPoly,
    /// `I_X` of the glued lamination.
    pub glued: LaurentPoly,
    /// Whether the restricted side is a single term of the glued side.
    pub is_term: bool,
    #[serde(skip)]
    pub glued_lamination_nu: BTreeMap<EdgeId, Rat>,
}

/// Compare `Res*(I_X(L))` with `I_X` of the dual gluing along `al`, `ar`.
pub fn check_bracelet_amalgamation(lam: &PLamination, al: EdgeId, ar: EdgeId, new: EdgeId) -> Result<AmalReport> {
    let before = Duality::new(&lam.tri)?;
    let lhs = before.i_x(lam)?;
    let res: BTreeMap<Var, Monomial> = lam
        .tri
        .edge_ids()
        .into_iter()
        .map(|e| (e, Monomial::var(if e == al || e == ar { new } else { e })))
        .collect();
    let restricted = lhs.substitute_monomial(&res)?;
    let glued_lam = dual_glue_tropical_with_id(lam, al, ar, new)?;
    let after = Duality::new(&glued_lam.tri)?;
    let glued = after.i_x(&glued_lam)?;
    let equal = restricted == glued;
    let is_term = match restricted.as_term() {
        Some((m, c)) => glued.coeff(m) == *c,
        None => equal,
    };
    let status = if pinning_sum(lam, al, ar) < Rat::zero() {
        AmalStatus::NegativePinningSum
    } else if equal {
        AmalStatus::Equal
    } else {
        AmalStatus::NotEqual
    };
    Ok(AmalReport { status, equal, restricted, glued, is_term, glued_lamination_nu: glued_lam.nu })
}

/// Exact rank of a family of Laurent polynomials over the rationals.
pub fn family_rank(family: &[LaurentPoly]) -> usize {
    let mut monos: BTreeMap<Monomial, usize> = BTreeMap::new();
    for f in family {
        for (m, _) in f.terms() {
            let n = monos.len();
            monos.entry(m.clone()).or_insert(n);
        }
    }
    let rows: Vec<Vec<Rat>> = family
        .iter()
        .map(|f| {
            let mut r = vec![Rat::zero(); monos.len()];
            for (m, c) in f.terms() {
                r[monos[m]] = c.clone();
            }
            r
        })
        .collect();
    if rows.is_empty() {
        return 0;
    }
    rank(rows)
}

pub fn linearly_independent(family: &[LaurentPoly]) -> bool {
    family_rank(family) == family.len()
}
