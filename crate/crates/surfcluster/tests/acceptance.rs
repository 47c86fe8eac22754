//! Acceptance sweeps.  Each criterion prints one PASS or FAIL line.  The
//! process exits nonzero on any failure outside the known-red list, or if a
//! known-red criterion starts passing.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use surfcluster::cluster::{mutate_a_tropical_with_id, mutate_x_tropical_with_id, Chart, ChartKind, ChartValues, TropicalVector};
use surfcluster::curve::{b_shift, m_shift, renormalize, Curve, CurveKind, IdealArc};
use surfcluster::duality::{check_bracelet_amalgamation, linearly_independent, AmalStatus, Duality};
use surfcluster::ensemble::{ensemble_pullback, lattice_index, muller_matrix, q_matrix};
use surfcluster::gluing::{glue_by_pins, glue_chart_with_id, glue_tropical_with_id, dual_glue_tropical_with_id};
use surfcluster::lamination::{
    a_coords, a_lamination_from_coords, dual_shear_coords, reconstruct_from_dual_shear, reconstruct_from_shear, shear_coords, ALamination, PLamination,
};
use surfcluster::matrix::RatMatrix;
use surfcluster::poly::{rat, ratio, LaurentPoly, Monomial, Rat};
use surfcluster::surface::{edge_of, initial_triangulation, side, twin, EdgeId, MarkedSurface, Side, Triangulation};
use surfcluster::wilson::delta22;

type Outcome = Result<String, String>;

fn polygon(n: usize) -> Triangulation {
    initial_triangulation(&MarkedSurface::polygon(n).unwrap()).unwrap()
}

fn annulus() -> Triangulation {
    initial_triangulation(&MarkedSurface::new(0, 0, &[1, 1]).unwrap()).unwrap()
}

fn pants() -> Triangulation {
    initial_triangulation(&MarkedSurface::new(0, 0, &[1, 1, 1]).unwrap()).unwrap()
}

fn named_surfaces() -> Vec<(&'static str, Triangulation)> {
    vec![("square", polygon(4)), ("pentagon", polygon(5)), ("hexagon", polygon(6)), ("annulus(1,1)", annulus()), ("pants(1,1,1)", pants())]
}

/// Initial triangulations plus every triangulation one flip away.
fn test_triangulations() -> Vec<Triangulation> {
    let mut out = Vec::new();
    for (_, t) in named_surfaces() {
        for k in t.interior_edges() {
            if let Ok((t2, _)) = t.flip(k) {
                out.push(t2);
            }
        }
        out.push(t);
    }
    out
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e2s<E: std::fmt::Debug>(e: E) -> String {
    format!("{:?}", e)
}

/// All vectors in `lo..=hi` over the given edges.
fn grid(tri: &Triangulation, lo: i64, hi: i64) -> Vec<TropicalVector> {
    let ids = tri.edge_ids();
    let mut out = Vec::new();
    let mut idx = vec![lo; ids.len()];
    loop {
        let entries = ids.iter().zip(&idx).map(|(&e, &v)| (e, rat(v))).collect();
        out.push(TropicalVector::new(tri, entries).unwrap());
        let mut i = 0;
        while i < idx.len() && idx[i] == hi {
            idx[i] = lo;
            i += 1;
        }
        if i == idx.len() {
            return out;
        }
        idx[i] += 1;
    }
}

// ---------------------------------------------------------------- 1

fn symbolic_values(c: &Chart) -> BTreeMap<EdgeId, surfcluster::poly::RatFunc> {
    match &c.values {
        ChartValues::Symbolic(m) => m.clone(),
        ChartValues::Numeric(_) => unreachable!(),
    }
}

/// Chart values keyed by the unordered endpoints of each edge (pentagon
/// diagonals are determined by them).
fn by_endpoints(c: &Chart) -> BTreeMap<(u32, u32), surfcluster::poly::RatFunc> {
    symbolic_values(c)
        .into_iter()
        .map(|(e, v)| {
            let s = side(e, 0);
            let (a, b) = (c.tri.tail(s), c.tri.head(s));
            ((a.min(b), a.max(b)), v)
        })
        .collect()
}

fn criterion_1() -> Outcome {
    let mut checked = 0;
    for t in test_triangulations() {
        for kind in [ChartKind::X, ChartKind::A] {
            let c = Chart::initial(&t, kind);
            for k in t.interior_edges() {
                let (c1, r) = c.mutate(k).map_err(e2s)?;
                let (c2, _) = c1.mutate_with_id(r.added, k).map_err(e2s)?;
                ensure(c2 == c, || format!("double mutation at {} differs ({:?})", k, kind))?;
                checked += 1;
            }
        }
    }
    // pentagon: alternate the two diagonals five times
    let t = polygon(5);
    for kind in [ChartKind::X, ChartKind::A] {
        let c0 = Chart::initial(&t, kind);
        let mut c = c0.clone();
        let mut flipped = Vec::new();
        let mut cur = t.interior_edges()[0];
        for _ in 0..5 {
            let other = c.tri.interior_edges().into_iter().find(|&e| e != cur).unwrap();
            let (c2, r) = c.mutate(cur).map_err(e2s)?;
            flipped.push(r.added);
            c = c2;
            cur = other;
        }
        ensure(c.tri == t.clone() || by_endpoints(&c).keys().eq(by_endpoints(&c0).keys()), || "pentagon cycle did not close".into())?;
        ensure(by_endpoints(&c) == by_endpoints(&c0), || format!("pentagon {:?}-chart not periodic", kind))?;
    }
    Ok(format!("{} double mutations; pentagon period 5 for X and A", checked))
}

// ---------------------------------------------------------------- 2, 3

fn criterion_2() -> Outcome {
    for (name, t) in named_surfaces() {
        let q = q_matrix(&t).map_err(e2s)?;
        let p = t.exchange_data().p.to_rat();
        // oracle: plain row-by-column products
        let ids = t.edge_ids();
        for &a in &ids {
            for &b in &ids {
                let s: Rat = ids.iter().map(|&c| q.get(a, c) * p.get(c, b)).sum();
                let want = if a == b { Rat::one() } else { Rat::zero() };
                ensure(s == want, || format!("{}: (q p)[{}][{}] = {}", name, a, b, s))?;
            }
        }
    }
    Ok("q(eps+m) = Id on square, pentagon, hexagon, annulus(1,1), pants(1,1,1)".into())
}

/// Clockwise-end compatibility matrix computed by walking corners.
fn pi_oracle(t: &Triangulation) -> BTreeMap<(EdgeId, EdgeId), i64> {
    let mut out = BTreeMap::new();
    for m in t.special_points() {
        // walk from the interval leaving m, turning counterclockwise
        let start = t.boundary_edges().into_iter().find(|&e| t.tail(side(e, 0)) == m).unwrap();
        let mut order = vec![start];
        let mut s: Side = side(start, 0);
        loop {
            let p = t.prev(s);
            order.push(edge_of(p));
            if t.is_boundary_side(p) {
                break;
            }
            s = twin(p);
        }
        for i in 0..order.len() {
            for j in i + 1..order.len() {
                if order[i] != order[j] {
                    *out.entry((order[i], order[j])).or_insert(0) += 1;
                    *out.entry((order[j], order[i])).or_insert(0) -= 1;
                }
            }
        }
    }
    out
}

fn criterion_3() -> Outcome {
    for (name, t) in named_surfaces() {
        let q = q_matrix(&t).map_err(e2s)?;
        let eps = t.exchange_matrix().to_rat();
        let lhs = q.mul(&eps).mul(&q.transpose());
        let pi = pi_oracle(&t);
        let lib = muller_matrix(&t).map_err(e2s)?;
        for a in t.edge_ids() {
            for b in t.edge_ids() {
                let p = pi.get(&(a, b)).copied().unwrap_or(0);
                ensure(lib.get(a, b) == p, || format!("{}: pi[{}][{}] mismatch", name, a, b))?;
                ensure(lhs.get(a, b) == ratio(-p, 4), || format!("{}: q eps q^T [{}][{}] = {} vs {}", name, a, b, lhs.get(a, b), ratio(-p, 4)))?;
            }
        }
    }
    Ok("q eps q^T = -pi/4 on all five surfaces".into())
}

// ---------------------------------------------------------------- 4

/// Nonbacktracking crossing sequences of length 1..=max.  On surfaces
/// with topology some of these are not in minimal position.
fn crossing_words(t: &Triangulation, max: usize) -> BTreeSet<IdealArc> {
    let mut out = BTreeSet::new();
    let mut stack: Vec<Vec<Side>> = Vec::new();
    for e in t.interior_edges() {
        stack.push(vec![side(e, 0)]);
        stack.push(vec![side(e, 1)]);
    }
    while let Some(w) = stack.pop() {
        out.insert(IdealArc::through(w.clone()));
        if w.len() == max {
            continue;
        }
        let last = twin(*w.last().unwrap());
        for n in [t.next(last), t.prev(last)] {
            if !t.is_boundary_side(n) {
                let mut w2 = w.clone();
                w2.push(n);
                stack.push(w2);
            }
        }
    }
    out
}

/// Rewrites a curve on `from` in the side numbering of `to`, where the two
/// have the same edges and triangles (flipping twice reverses the edge).
fn realign(from: &Triangulation, to: &Triangulation, c: &Curve) -> Result<Curve, String> {
    let mut map = BTreeMap::new();
    for tf in from.triangles() {
        let ef: Vec<EdgeId> = tf.iter().map(|&x| edge_of(x)).collect();
        let tt = to
            .triangles()
            .iter()
            .flat_map(|tt| (0..3).map(move |r| [tt[r], tt[(r + 1) % 3], tt[(r + 2) % 3]]))
            .find(|tt| tt.iter().map(|&x| edge_of(x)).eq(ef.iter().copied()))
            .ok_or("triangulations differ")?;
        for i in 0..3 {
            map.insert(tf[i], tt[i]);
        }
    }
    let segs = c.segments().iter().map(|(a, b)| (map[a], map[b])).collect();
    Curve::arc(to, segs).map_err(e2s)
}

/// Arcs that are edges of triangulations at most `depth` flips from `t`,
/// written in `t` by undoing the flips on the curve.
fn ideal_arcs(t: &Triangulation, depth: usize) -> Result<BTreeSet<IdealArc>, String> {
    let mut out = BTreeSet::new();
    // (triangulation, flips as (flipped edge, new id))
    let mut layer: Vec<(Triangulation, Vec<(EdgeId, EdgeId)>)> = vec![(t.clone(), Vec::new())];
    for _ in 0..depth {
        let mut next = Vec::new();
        for (tk, path) in &layer {
            for k in tk.interior_edges() {
                let new = tk.next_id();
                let (t2, _) = tk.flip_with_id(k, new).map_err(e2s)?;
                let mut p2 = path.clone();
                p2.push((k, new));
                let mut c = b_shift(&t2, &IdealArc::Edge(new)).map_err(e2s)?;
                let mut cur = t2.clone();
                for &(k, new) in p2.iter().rev() {
                    let (back, _) = cur.flip_with_id(new, k).map_err(e2s)?;
                    c = renormalize(&cur, &back, new, &c).map_err(e2s)?;
                    cur = back;
                }
                let c = realign(&cur, t, &c)?;
                out.insert(m_shift(t, &c).map_err(e2s)?);
                next.push((t2, p2));
            }
        }
        layer = next;
    }
    Ok(out)
}

fn criterion_4() -> Outcome {
    let mut arcs = 0;
    let mut extra = 0;
    for t in test_triangulations() {
        let pb = ensemble_pullback(&t);
        for e in t.edge_ids() {
            let c = b_shift(&t, &IdealArc::Edge(e)).map_err(e2s)?;
            let d = delta22(&t, &c).map_err(e2s)?;
            let a = d.substitute_monomial(&pb).map_err(e2s)?;
            ensure(a == LaurentPoly::var(e), || format!("p* Delta22 of edge {} is {}", e, a))?;
            arcs += 1;
        }
        let duality = Duality::new(&t).map_err(e2s)?;
        let arcs = ideal_arcs(&t, 4)?;
        let words = crossing_words(&t, 3);
        for arc in arcs.iter().filter(|a| (1..=3).contains(&a.crossing_total())) {
            ensure(words.contains(arc), || format!("{:?} is not a reduced crossing word in {:?}", arc, t.triangles()))?;
            let c = b_shift(&t, arc).map_err(e2s)?;
            let d = delta22(&t, &c).map_err(e2s)?;
            // lowest term from crossing counts, computed directly
            let low = Monomial::from_doubled(c.crossing_counts().into_iter().map(|(e, n)| (e, -n)));
            let got = d.lowest_term().map_err(e2s)?;
            ensure(got == low, || format!("lowest term of {:?}", arc))?;
            let f = d.mul_monomial(&low.inv());
            ensure(f.coeff(&Monomial::one()).is_one(), || format!("F of {:?} has constant term {}", arc, f.coeff(&Monomial::one())))?;
            // p* of Delta22 is the lambda length obtained by mutation
            let lam = duality.lambda(arc).map_err(|e| format!("{:?} for {:?} on {:?}", e, arc, t.edge_ids()))?;
            ensure(d.substitute_monomial(&pb).map_err(e2s)? == lam, || format!("p* Delta22 differs from the lambda length of {:?}", arc))?;
            extra += 1;
        }
    }
    Ok(format!("{} triangulation arcs, {} arcs with at most 3 crossings", arcs, extra))
}

// ---------------------------------------------------------------- 5

fn criterion_5() -> Outcome {
    let mut n = 0;
    for (name, t, r) in [("square", polygon(4), 3), ("annulus(1,1)", annulus(), 3)] {
        for v in grid(&t, -r, r) {
            let lam = reconstruct_from_shear(&t, &v).map_err(|e| format!("{}: {:?} at {:?}", name, e, v.entries))?;
            ensure(shear_coords(&lam) == v, || format!("{}: round trip fails at {:?}", name, v.entries))?;
            n += 1;
        }
    }
    Ok(format!("{} vectors", n))
}

// ---------------------------------------------------------------- 6

/// Boundary-ended arcs and loops with at most `max` interior crossings.
fn curves(t: &Triangulation, max: usize) -> BTreeSet<Curve> {
    let mut out = BTreeSet::new();
    let mut stack: Vec<Vec<(Side, Side)>> = Vec::new();
    for e in t.boundary_edges() {
        let s = side(e, 0);
        for x in [t.next(s), t.prev(s)] {
            stack.push(vec![(s, x)]);
        }
    }
    while let Some(segs) = stack.pop() {
        let last = segs.last().unwrap().1;
        if t.is_boundary_side(last) {
            out.insert(Curve::arc(t, segs).unwrap());
            continue;
        }
        if segs.len() > max {
            continue;
        }
        let entry = twin(last);
        for x in [t.next(entry), t.prev(entry)] {
            let mut s2 = segs.clone();
            s2.push((entry, x));
            stack.push(s2);
        }
    }
    // loops: cyclic exit words
    let mut words: Vec<Vec<Side>> = t.interior_edges().iter().flat_map(|&e| [vec![side(e, 0)], vec![side(e, 1)]]).collect();
    while let Some(w) = words.pop() {
        let first = w[0];
        let last = twin(*w.last().unwrap());
        if t.next(last) == first || t.prev(last) == first {
            if let Ok(c) = Curve::from_word(t, CurveKind::Loop, &w) {
                out.insert(c);
            }
        }
        if w.len() < max {
            for x in [t.next(last), t.prev(last)] {
                if !t.is_boundary_side(x) {
                    let mut w2 = w.clone();
                    w2.push(x);
                    words.push(w2);
                }
            }
        }
    }
    out
}

fn criterion_6() -> Outcome {
    let (mut n, mut na) = (0, 0);
    for t in test_triangulations() {
        for c in curves(&t, 3) {
            for k in t.interior_edges() {
                let new = t.next_id();
                let (t2, _) = t.flip_with_id(k, new).map_err(e2s)?;
                let c2 = renormalize(&t, &t2, k, &c).map_err(e2s)?;
                let a1 = ALamination::new(&t, vec![(c.clone(), rat(1))]).map_err(e2s)?;
                let a2 = ALamination::new(&t2, vec![(c2.clone(), rat(1))]).map_err(e2s)?;
                let (ma, _) = mutate_a_tropical_with_id(&a_coords(&a1), k, new).map_err(e2s)?;
                ensure(a_coords(&a2) == ma, || format!("a-coordinates of {:?} across flip {}", c, k))?;
                na += 1;
                if c.is_peripheral(&t) {
                    continue;
                }
                let p1 = PLamination::new(&t, vec![(c.clone(), rat(1))], BTreeMap::new()).map_err(e2s)?;
                let p2 = PLamination::new(&t2, vec![(c2, rat(1))], BTreeMap::new()).map_err(e2s)?;
                let (mx, _) = mutate_x_tropical_with_id(&shear_coords(&p1), k, new).map_err(e2s)?;
                ensure(shear_coords(&p2) == mx, || format!("shear of {:?} across flip {}", c, k))?;
                n += 1;
            }
        }
    }
    Ok(format!("{} (curve, flip) pairs for shear, {} for a-coordinates", n, na))
}

// ---------------------------------------------------------------- 7

fn two_polygons(n: usize) -> (Triangulation, EdgeId, EdgeId, EdgeId) {
    let p = polygon(n);
    let t = p.disjoint_union(&p);
    let al = p.boundary_edges()[0];
    let ar = p.next_id() + p.boundary_edges()[0];
    let new = t.next_id();
    (t, al, ar, new)
}

fn criterion_7() -> Outcome {
    let (t, al, ar, new) = two_polygons(3);
    let mut n = 0;
    for v in grid(&t, -2, 2) {
        let lam = reconstruct_from_shear(&t, &v).map_err(e2s)?;
        let g = shear_coords(&glue_tropical_with_id(&lam, al, ar, new).map_err(e2s)?);
        ensure(g.get(new) == v.get(al) + v.get(ar), || format!("x_new at {:?}", v.entries))?;
        for e in t.edge_ids() {
            if e != al && e != ar {
                ensure(g.get(e) == v.get(e), || format!("x_{} changed at {:?}", e, v.entries))?;
            }
        }
        for dual in [false, true] {
            let pins = glue_by_pins(&lam, al, ar, new, dual).map_err(e2s)?;
            let coord = if dual { dual_glue_tropical_with_id(&lam, al, ar, new) } else { glue_tropical_with_id(&lam, al, ar, new) }.map_err(e2s)?;
            ensure(pins == coord, || format!("pin gluing (dual={}) differs at {:?}", dual, v.entries))?;
        }
        // rational points via rescaling
        let half = lam.scale(&ratio(1, 2));
        let gh = shear_coords(&glue_tropical_with_id(&half, al, ar, new).map_err(e2s)?);
        ensure(gh == g.scale(&ratio(1, 2)), || "rescaling does not commute with gluing".into())?;
        let gd = dual_shear_coords(&dual_glue_tropical_with_id(&lam, al, ar, new).map_err(e2s)?);
        let vd = dual_shear_coords(&lam);
        ensure(gd.get(new) == vd.get(al) + vd.get(ar), || "dual additivity".into())?;
        n += 1;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..500 {
        let vals: BTreeMap<EdgeId, Rat> = t.edge_ids().into_iter().map(|e| (e, ratio(rng.gen_range(1..20), rng.gen_range(1..20)))).collect();
        let c = Chart::numeric(&t, ChartKind::X, vals.clone()).map_err(e2s)?;
        let (g, _) = glue_chart_with_id(&c, al, ar, new).map_err(e2s)?;
        ensure(g.numeric_value(new) == Some(&(&vals[&al] * &vals[&ar])), || "X_new is not the product".into())?;
        for e in t.edge_ids() {
            if e != al && e != ar {
                ensure(g.numeric_value(e) == Some(&vals[&e]), || "X changed".into())?;
            }
        }
    }
    Ok(format!("{} tropical points with pin oracle, 500 numeric charts", n))
}

// ---------------------------------------------------------------- 8

fn criterion_8() -> Outcome {
    let mut n = 0;
    for (name, t) in [("square", polygon(4)), ("annulus(1,1)", annulus())] {
        let d = Duality::new(&t).map_err(e2s)?;
        for a in grid(&t, 0, 2) {
            let lam = a_lamination_from_coords(&t, &a).map_err(e2s)?;
            ensure(a_coords(&lam) == a, || format!("{}: a-coordinates not realised", name))?;
            ensure(d.check_ensemble_compatibility(&lam).map_err(e2s)?, || format!("{}: diagram fails at {:?}", name, a.entries))?;
            n += 1;
        }
    }
    Ok(format!("{} integral A-laminations", n))
}

// ---------------------------------------------------------------- 9

fn labelled_two_triangles() -> (Triangulation, EdgeId, EdgeId, EdgeId) {
    let (mut t, al, ar, new) = two_polygons(3);
    // left triangle: alpha_L, beta, gamma; right: alpha_R, delta, epsilon (counterclockwise)
    for (e, l) in [(0, "α_L"), (1, "β"), (2, "γ"), (3, "α_R"), (4, "δ"), (5, "ε")] {
        t.set_label(e, l).unwrap();
    }
    (t, al, ar, new)
}

fn criterion_9() -> Outcome {
    let mut n = 0;
    for (poly, r, sample) in [(3usize, 2i64, None), (4, 2, Some(1500usize))] {
        let (t, al, ar, new) = two_polygons(poly);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let family: Vec<TropicalVector> = match sample {
            None => grid(&t, -r, r),
            Some(k) => (0..k)
                .map(|_| TropicalVector::new(&t, t.edge_ids().into_iter().map(|e| (e, rat(rng.gen_range(-r..=r)))).collect()).unwrap())
                .collect(),
        };
        for v in family {
            let lam = reconstruct_from_dual_shear(&t, &v).map_err(e2s)?;
            let rep = check_bracelet_amalgamation(&lam, al, ar, new).map_err(e2s)?;
            let sum = &lam.nu[&al] + &lam.nu[&ar];
            if !sum.is_negative() {
                ensure(rep.status == AmalStatus::Equal, || format!("amalgamation fails at {:?}: {} vs {}", v.entries, rep.restricted, rep.glued))?;
                n += 1;
            } else {
                ensure(rep.status == AmalStatus::NegativePinningSum, || "status".into())?;
            }
        }
    }
    // the rectangle example with pinnings 2 and 0
    let (t, al, ar, new) = two_polygons(4);
    let mut x = TropicalVector::zero(&t);
    x.entries.insert(al, rat(2));
    let lam = reconstruct_from_dual_shear(&t, &x).map_err(e2s)?;
    ensure(check_bracelet_amalgamation(&lam, al, ar, new).map_err(e2s)?.equal, || "rectangle example".into())?;
    // negative pinning sum on two triangles
    let (t, al, ar, new) = labelled_two_triangles();
    let mut nu = BTreeMap::new();
    nu.insert(al, rat(-1));
    let lam = PLamination::with_nu(&t, nu);
    let rep = check_bracelet_amalgamation(&lam, al, ar, new).map_err(e2s)?;
    ensure(rep.status == AmalStatus::NegativePinningSum && !rep.equal && rep.is_term, || "negative example status".into())?;
    let glued = dual_glue_tropical_with_id(&lam, al, ar, new).map_err(e2s)?;
    let mut gt = glued.tri.clone();
    gt.set_label(new, "\u{1fb1}").unwrap();
    let d = Duality::new(&glued.tri).map_err(e2s)?;
    let arc_part = d.i_x_curves(&glued).map_err(e2s)?;
    let text = arc_part.render(&|v| format!("A_{}", gt.label(v)));
    ensure(text == "(A_βA_δ + A_γA_ε)/A_\u{1fb1}", || format!("rendered {}", text))?;
    ensure(rep.restricted == LaurentPoly::monomial(Monomial::from_exps([(new, -1)])), || "Res* side".into())?;
    Ok(format!("{} laminations with nonnegative pinning sum; example renders {}", n, text))
}

// ---------------------------------------------------------------- 10

fn criterion_10() -> Outcome {
    let t = polygon(4);
    let d = Duality::new(&t).map_err(e2s)?;
    let mut fx = Vec::new();
    for v in grid(&t, -1, 1) {
        let lam = reconstruct_from_dual_shear(&t, &v).map_err(e2s)?;
        fx.push(d.i_x(&lam).map_err(e2s)?);
    }
    ensure(linearly_independent(&fx), || "I_X family is dependent".into())?;
    let mut fa = Vec::new();
    for a in grid(&t, -1, 1) {
        let lam = a_lamination_from_coords(&t, &a).map_err(e2s)?;
        let f = d.i_a(&lam).map_err(e2s)?;
        let low = Monomial::from_exps(a.entries.iter().map(|(&e, v)| (e, -v.to_integer().to_i64().unwrap())));
        ensure(f.lowest_term().map_err(e2s)? == low, || format!("lowest term at {:?}", a.entries))?;
        fa.push(f);
    }
    ensure(linearly_independent(&fa), || "I_A family is dependent".into())?;
    for t in [polygon(4), annulus()] {
        let d = Duality::new(&t).map_err(e2s)?;
        for a in grid(&t, 0, 2) {
            let lam = a_lamination_from_coords(&t, &a).map_err(e2s)?;
            let low = Monomial::from_exps(a.entries.iter().map(|(&e, v)| (e, -v.to_integer().to_i64().unwrap())));
            ensure(d.i_a(&lam).map_err(e2s)?.lowest_term().map_err(e2s)? == low, || "lowest term".into())?;
        }
    }
    Ok(format!("rank {} (I_X) and {} (I_A) on the square", fx.len(), fa.len()))
}

// ---------------------------------------------------------------- 11

fn criterion_11() -> Outcome {
    let mut found = Vec::new();
    for (name, t) in named_surfaces().into_iter().chain([("triangle", polygon(3))]) {
        let idx = lattice_index(&t).map_err(e2s)?;
        // oracle: 2Z^n lies in the sublattice, count residues mod 2
        let q: RatMatrix = q_matrix(&t).map_err(e2s)?;
        let ids = t.edge_ids();
        let mut hits = 0i64;
        for bits in 0..(1u32 << ids.len()) {
            let ok = ids.iter().all(|&a| {
                let s: Rat = ids.iter().enumerate().filter(|(i, _)| (bits >> i) & 1 == 1).map(|(_, &b)| q.get(a, b)).sum();
                s.is_integer()
            });
            hits += ok as i64;
        }
        let brute = Rat::new((1i64 << ids.len()).into(), hits.into());
        ensure(brute == idx, || format!("{}: determinant and residue count disagree", name))?;
        found.push(format!("{}={}", name, idx));
    }
    let all_two = found.iter().all(|s| s.ends_with("=2"));
    let msg = format!("sublattice index: {}", found.join(", "));
    if all_two {
        Ok(msg)
    } else {
        Err(format!("{} (expected 2 everywhere)", msg))
    }
}

fn main() {
    let criteria: Vec<(&str, fn() -> Outcome)> = vec![
        ("mutation involutivity and pentagon periodicity", criterion_1),
        ("inverse formula q(eps+m) = Id", criterion_2),
        ("Poisson lemma q eps q^T = -pi/4", criterion_3),
        ("Wilson lines and lambda lengths", criterion_4),
        ("lamination round trip", criterion_5),
        ("tropical flip oracle", criterion_6),
        ("gluing additivity", criterion_7),
        ("ensemble compatibility of the duality maps", criterion_8),
        ("bracelet amalgamation", criterion_9),
        ("basis properties", criterion_10),
        ("index-2 embedding", criterion_11),
    ];
    // criteria whose targets are contradicted by exact computation; they
    // still print FAIL but do not fail the build
    let known_red = [11usize];
    let only: Option<usize> = std::env::args().skip(1).find_map(|a| a.parse().ok());
    let mut unexpected = Vec::new();
    let mut red = Vec::new();
    for (i, (name, f)) in criteria.iter().enumerate() {
        let n = i + 1;
        if only.is_some_and(|k| k != n) {
            continue;
        }
        let start = Instant::now();
        let r = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match r {
            Ok(m) => {
                println!("PASS {:>2} {}: {} [{:.1}s]", n, name, m, secs);
                if known_red.contains(&n) {
                    unexpected.push(n);
                }
            }
            Err(m) => {
                println!("FAIL {:>2} {}: {} [{:.1}s]", n, name, m, secs);
                if known_red.contains(&n) {
                    red.push(n);
                } else {
                    unexpected.push(n);
                }
            }
        }
    }
    if !red.is_empty() {
        println!("KNOWN RED: {:?}", red);
    }
    if !unexpected.is_empty() {
        println!("UNEXPECTED: {:?}", unexpected);
        std::process::exit(1);
    }
}
