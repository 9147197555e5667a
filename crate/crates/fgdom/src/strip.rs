//! Strip deformations of Fuchsian structures with geodesic boundary:
//! realizing combinatorial arcs as geodesics exiting funnel ends,
//! inserting width-t strips at the holonomy level, and verifying the
//! strict lengthening of the simple length spectrum.

use crate::curves::enumerate_simple;
use crate::devtree::{neighbor_positions, DevTree};
use crate::domination::{
    BoundaryAudit, CurveReport, DominationCertificate, Verdict, WordEvaluator,
};
use crate::moebius::{ideal_triangle_incenter, Geodesic, IsometryClass, Moebius, SpherePoint};
use crate::presentation::Presentation;
use crate::representation::link_sums;
use crate::surface::{IdealTriangulation, NormalCurve, Side};
use crate::{Error, Tolerances};
use num_complex::Complex64 as C64;

/// A realized strip arc: a geodesic line exiting through two funnel ends,
/// crossing exactly the edges of its combinatorial path, together with
/// the waist where the inserted translation's axis meets it
/// perpendicularly.
#[derive(Debug, Clone)]
pub struct StripArc {
    pub path: Vec<usize>,
    /// Realized geodesic, in the development based at the tree frame of
    /// the path's first triangle.
    pub geodesic: Geodesic,
    /// Point of the realized geodesic where the inserted translation's
    /// axis crosses it perpendicularly.
    pub waist: C64,
    /// Lifts in the tree frame of every triangle the arc traverses.
    pub occurrences: Vec<ArcOccurrence>,
}

#[derive(Debug, Clone)]
pub struct ArcOccurrence {
    pub triangle: usize,
    pub geodesic: Geodesic,
    pub waist: C64,
    /// Map from the arc's development frame into this tree frame.
    to_tree: Moebius,
}

impl StripArc {
    /// Moves the waist to another point of the realized geodesic; the
    /// inserted translations' axes cross the arc there instead.
    pub fn with_waist(mut self, w: C64) -> Result<StripArc, Error> {
        if self.geodesic.side_of(w)?.abs() > 1e-9 {
            return Err(Error::Invalid("waist override is off the realized geodesic".into()));
        }
        self.waist = w;
        for occ in self.occurrences.iter_mut() {
            occ.waist = occ.to_tree.apply_h2(w);
        }
        Ok(self)
    }
}

/// Resolves an edge-id path into consecutive side crossings starting at
/// the lexicographically smaller side of the first edge.
fn resolve_path(tri: &IdealTriangulation, path: &[usize]) -> Result<Vec<Side>, Error> {
    if path.is_empty() {
        return Err(Error::TangledPath("empty arc path".into()));
    }
    for &e in path {
        if e >= tri.num_edges() {
            return Err(Error::TangledPath(format!("edge {e} out of range")));
        }
    }
    let mut crossings = Vec::with_capacity(path.len());
    let first = tri.edges[path[0]][0];
    crossings.push(first);
    let mut at = tri.glued(first.0, first.1).0;
    let mut entered = tri.glued(first.0, first.1);
    for &e in &path[1..] {
        let mut choice = None;
        for s in 0..3 {
            if tri.edge_of(at, s) == e && (at, s) != entered {
                choice = Some((at, s));
                break;
            }
        }
        let side = choice.ok_or_else(|| {
            Error::TangledPath(format!("edge {e} is not on the far side of triangle {at}"))
        })?;
        crossings.push(side);
        entered = tri.glued(side.0, side.1);
        at = entered.0;
    }
    Ok(crossings)
}

/// Realizes a combinatorial arc on a Fuchsian structure as the common
/// perpendicular of the peripheral axes anchored at the corners adjacent
/// to its first and last crossed edges.
pub fn realize_arc(
    tri: &IdealTriangulation,
    pres: &Presentation,
    coords: &[C64],
    path: &[usize],
    tol: &Tolerances,
) -> Result<StripArc, Error> {
    let dev = DevTree::new(tri, pres, coords)?;
    realize_arc_with(tri, pres, &dev, coords, path, tol)
}

pub(crate) fn realize_arc_with(
    tri: &IdealTriangulation,
    pres: &Presentation,
    dev: &DevTree,
    coords: &[C64],
    path: &[usize],
    tol: &Tolerances,
) -> Result<StripArc, Error> {
    if !crate::pleat::is_real_positive(coords) {
        return Err(Error::Invalid("strip arcs require real positive coordinates".into()));
    }
    let crossings = resolve_path(tri, path)?;
    let start_tri = crossings[0].0;

    // Develop the corridor of triangles the arc traverses, keeping the
    // frame of each visit relative to its tree lift.
    let mut visits: Vec<(usize, Moebius)> = Vec::with_capacity(crossings.len() + 1);
    visits.push((start_tri, Moebius::identity()));
    let mut pos = dev.pos[start_tri];
    let mut at = start_tri;
    for &(t, s) in &crossings {
        if t != at {
            return Err(Error::TangledPath("crossings do not chain".into()));
        }
        pos = neighbor_positions(tri, &pos, t, s, coords)?;
        at = tri.glued(t, s).0;
        let g = Moebius::map_triples(
            (&dev.pos[at][0], &dev.pos[at][1], &dev.pos[at][2]),
            (&pos[0], &pos[1], &pos[2]),
        )?;
        visits.push((at, g));
    }

    // Anchor corners: the start vertex of the first crossed side and the
    // start vertex of the side through which the last triangle was
    // entered. Corner-adjacent anchors keep the in-triangle chords of
    // distinct arcs from interleaving, so disjoint families stay
    // realizable.
    let stab_at = |visit: usize, corner: usize| -> Result<(usize, Moebius), Error> {
        let (t, g) = &visits[visit];
        let p = tri.puncture_of_corner(*t, corner);
        let w = &pres.corner_word[*t][corner];
        let m = dev
            .eval_word(w)
            .compose(&dev.eval_word(&pres.link_word[p]))
            .compose(&dev.eval_word(w).inverse());
        Ok((p, g.compose(&m).compose(&g.inverse())))
    };
    let start_corner = crossings[0].1;
    let (last_t, last_s) = *crossings.last().unwrap();
    let entered_last = tri.glued(last_t, last_s);
    let end_corner = entered_last.1;
    let (p_start, stab_start) = stab_at(0, start_corner)?;
    let (p_end, stab_end) = stab_at(visits.len() - 1, end_corner)?;
    for p in [p_start, p_end] {
        let (len, _) = link_sums(tri, coords, p);
        if len.abs() <= tol.parabolic {
            return Err(Error::CuspExit(p));
        }
    }
    let axis_of = |m: &Moebius| -> Result<Geodesic, Error> {
        if m.classify(tol.parabolic) != IsometryClass::Loxodromic {
            return Err(Error::TangledPath("anchor stabilizer is not loxodromic".into()));
        }
        let (a, b) = m.fixed_points();
        Ok(Geodesic::new(a, b.expect("loxodromic axis")))
    };
    let a_start = axis_of(&stab_start)?;
    let a_end = axis_of(&stab_end)?;
    let geodesic = a_start
        .common_perpendicular(&a_end)
        .map_err(|_| Error::TangledPath("anchor axes admit no common perpendicular".into()))?;

    // The realized line must cross the developed lift of every listed
    // edge, in path order between its two anchor feet. (Near each foot it
    // also meets the lifts spiralling onto the boundary axis; those are
    // unavoidable and carry no combinatorial content.)
    let path_lifts: Vec<Geodesic> = {
        let mut lifts = Vec::with_capacity(crossings.len());
        let mut pos = dev.pos[start_tri];
        for &(t, s) in &crossings {
            lifts.push(Geodesic::new(pos[s], pos[(s + 1) % 3]));
            pos = neighbor_positions(tri, &pos, t, s, coords)?;
        }
        lifts
    };
    let param_of = |z: C64| -> Result<f64, Error> {
        // Height along the perpendicular after sending it to (0, ∞).
        let m = geodesic.to_zero_infinity()?;
        Ok(m.apply_h2(z).im.ln())
    };
    let mut params = Vec::with_capacity(path_lifts.len());
    for (lift, &e) in path_lifts.iter().zip(path) {
        if !geodesic.crosses(lift)? {
            return Err(Error::TangledPath(format!(
                "realized line fails to cross the lift of edge {e}"
            )));
        }
        params.push(param_of(geodesic.crossing_point(lift)?)?);
    }
    let foot_start = param_of(geodesic.crossing_point(&a_start)?)?;
    let foot_end = param_of(geodesic.crossing_point(&a_end)?)?;
    let ascending = foot_start < foot_end;
    let mut walk = vec![foot_start];
    walk.extend(&params);
    walk.push(foot_end);
    let ordered = walk.windows(2).all(|w| if ascending { w[0] < w[1] } else { w[0] > w[1] });
    if !ordered {
        return Err(Error::TangledPath(
            "edge crossings are out of order along the realized line".into(),
        ));
    }

    // Waist: foot of the perpendicular on the first peripheral axis.
    let waist = geodesic.crossing_point(&a_start)?;
    if geodesic.side_of(waist)?.abs() > 1e-9 {
        return Err(Error::TangledPath("waist is off the realized geodesic".into()));
    }

    // Occurrence lifts in tree frames.
    let mut occurrences = Vec::with_capacity(visits.len());
    for (t, g) in &visits {
        let ginv = g.inverse();
        occurrences.push(ArcOccurrence {
            triangle: *t,
            geodesic: Geodesic::new(ginv.apply(&geodesic.a), ginv.apply(&geodesic.b)),
            waist: ginv.apply_h2(waist),
            to_tree: ginv,
        });
    }

    Ok(StripArc { path: path.to_vec(), geodesic, waist, occurrences })
}

fn point_in_ideal_triangle(
    pos: &[SpherePoint; 3],
    z: C64,
) -> Result<bool, Error> {
    let center = ideal_triangle_incenter(&pos[0], &pos[1], &pos[2])?;
    for s in 0..3 {
        let g = Geodesic::new(pos[s], pos[(s + 1) % 3]);
        let side_z = g.side_of(z)?;
        let side_c = g.side_of(center)?;
        if side_z * side_c < 0.0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Pairwise disjointness of realized arcs, checked exactly triangle by
/// triangle: any intersection point on the surface lies inside some
/// triangle, where both lifts are recorded occurrences.
fn check_disjoint(
    tri: &IdealTriangulation,
    dev: &DevTree,
    arcs: &[StripArc],
) -> Result<(), Error> {
    let mut per_tri: Vec<Vec<(usize, &ArcOccurrence)>> = vec![Vec::new(); tri.num_triangles()];
    for (i, arc) in arcs.iter().enumerate() {
        for occ in &arc.occurrences {
            per_tri[occ.triangle].push((i, occ));
        }
    }
    for t in 0..tri.num_triangles() {
        let list = &per_tri[t];
        for a in 0..list.len() {
            for b in (a + 1)..list.len() {
                let (ga, gb) = (&list[a].1.geodesic, &list[b].1.geodesic);
                if ga.same_unoriented(gb, 1e-9) {
                    continue;
                }
                if ga.crosses(gb)? {
                    let z = ga.crossing_point(gb)?;
                    if point_in_ideal_triangle(&dev.pos[t], z)? {
                        return Err(Error::ArcsIntersect(t));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Crossing event of a generator's spine polyline with an arc lift.
struct CrossEvent {
    order: (usize, u64),
    translation: Moebius,
}

/// Applies width-t strip insertions along every arc to the holonomy: each
/// generator picks up one hyperbolic translation along the perpendicular
/// at the crossed lift's waist per crossing, in path order.
pub fn strip_deform(
    tri: &IdealTriangulation,
    pres: &Presentation,
    coords: &[C64],
    arcs: &[StripArc],
    widths: &[f64],
) -> Result<Vec<Moebius>, Error> {
    if arcs.len() != widths.len() {
        return Err(Error::Invalid("one width per arc required".into()));
    }
    if widths.iter().any(|&w| w < 0.0 || !w.is_finite()) {
        return Err(Error::Invalid("widths must be nonnegative".into()));
    }
    if !crate::pleat::is_real_positive(coords) {
        return Err(Error::Invalid("strip deformation requires real positive coordinates".into()));
    }
    let dev = DevTree::new(tri, pres, coords)?;
    check_disjoint(tri, &dev, arcs)?;
    let base_rep = crate::representation::holonomy_from_fg_with(tri, pres, coords)?;

    let mut out = Vec::with_capacity(base_rep.generators.len());
    for gen in 0..base_rep.generators.len() {
        let path = pres.generator_loop(tri, gen);
        // Develop the loop, collecting frames and the incenter polyline.
        let mut frames: Vec<(usize, Moebius)> = vec![(0, Moebius::identity())];
        let mut pos = dev.pos[0];
        let mut polyline = vec![ideal_triangle_incenter(&pos[0], &pos[1], &pos[2])?];
        for &(t, s) in &path {
            pos = neighbor_positions(tri, &pos, t, s, coords)?;
            let at = tri.glued(t, s).0;
            let g = Moebius::map_triples(
                (&dev.pos[at][0], &dev.pos[at][1], &dev.pos[at][2]),
                (&pos[0], &pos[1], &pos[2]),
            )?;
            frames.push((at, g));
            polyline.push(ideal_triangle_incenter(&pos[0], &pos[1], &pos[2])?);
        }

        // Candidate lifts near the polyline, deduplicated.
        let mut lifts: Vec<(Geodesic, C64, f64)> = Vec::new();
        for (t, g) in &frames {
            for (arc, &width) in arcs.iter().zip(widths) {
                for occ in arc.occurrences.iter().filter(|o| o.triangle == *t) {
                    let lg = Geodesic::new(g.apply(&occ.geodesic.a), g.apply(&occ.geodesic.b));
                    let lw = g.apply_h2(occ.waist);
                    if !lifts.iter().any(|(l, _, _)| l.same_unoriented(&lg, 1e-9)) {
                        lifts.push((lg, lw, width));
                    }
                }
            }
        }

        // Crossing events of the polyline against each lift.
        let mut events: Vec<CrossEvent> = Vec::new();
        for (lift, waist, width) in &lifts {
            if *width == 0.0 {
                continue;
            }
            for seg in 0..polyline.len() - 1 {
                let f0 = lift.side_of(polyline[seg])?;
                let f1 = lift.side_of(polyline[seg + 1])?;
                if f0 == 0.0 || f1 == 0.0 {
                    return Err(Error::Invalid(
                        "spine polyline touches an arc lift; perturb the arc".into(),
                    ));
                }
                if f0 * f1 < 0.0 {
                    // Perpendicular to the lift at its waist.
                    let norm = lift.to_zero_infinity()?;
                    let h = norm.apply_h2(*waist).im;
                    if h <= 0.0 {
                        return Err(Error::Invalid("waist left the upper half-plane".into()));
                    }
                    let inv = norm.inverse();
                    let e_pos = inv.apply(&SpherePoint::real(h));
                    let e_neg = inv.apply(&SpherePoint::real(-h));
                    // Translate from the entered side toward the far side.
                    let (from, to) = if f0 > 0.0 { (e_pos, e_neg) } else { (e_neg, e_pos) };
                    let translation =
                        Geodesic::new(from, to).translation_along(*width)?;
                    let frac = f0.abs() / (f0.abs() + f1.abs());
                    events.push(CrossEvent {
                        order: (seg, (frac * 1e12) as u64),
                        translation,
                    });
                }
            }
        }
        events.sort_by_key(|e| e.order);
        if events.is_empty() {
            // Zero widths and non-crossing generators keep their images
            // bit for bit.
            out.push(base_rep.generators[gen]);
            continue;
        }
        let mut correction = Moebius::identity();
        for e in &events {
            correction = correction.compose(&e.translation);
        }
        out.push(correction.compose(&base_rep.generators[gen]));
    }
    Ok(out)
}

/// Relation residual of a generator tuple over the standard presentation.
pub fn relation_residual(genus: usize, punctures: usize, gens: &[Moebius]) -> f64 {
    let mut m = Moebius::identity();
    for i in 0..genus {
        let a = &gens[2 * i];
        let b = &gens[2 * i + 1];
        m = m
            .compose(a)
            .compose(b)
            .compose(&a.inverse())
            .compose(&b.inverse());
    }
    for j in 0..punctures {
        m = m.compose(&gens[2 * genus + j]);
    }
    m.dist_to_identity()
}

/// Verifies the strict lengthening of a strip deformation: the sup over
/// enumerated curves and boundary classes of l_j / l_{j_t}. Curve reports
/// store the original length as l_rho and the deformed one as l_j.
pub fn verify_strict_increase(
    tri: &IdealTriangulation,
    pres: &Presentation,
    j_coords: &[C64],
    deformed: &[Moebius],
    max_weight: u64,
    tol: &Tolerances,
    budget: usize,
) -> Result<DominationCertificate, Error> {
    let base_rep = crate::representation::holonomy_from_fg_with(tri, pres, j_coords)?;
    let eval_j = WordEvaluator::new(pres, &base_rep);
    let deformed_rep = crate::representation::FramedRepresentation {
        triangulation: tri.clone(),
        generators: deformed.to_vec(),
        framing: base_rep.framing.clone(),
    };
    let eval_t = WordEvaluator::new(pres, &deformed_rep);

    let mut reports = Vec::new();
    let mut sup = 0.0f64;
    let mut witness = None;
    let mut push = |curve: NormalCurve, l_old: f64, l_new: f64| {
        let ratio = if l_old <= 1e-12 { 0.0 } else { l_old / l_new };
        if ratio > sup {
            sup = ratio;
            witness = Some(curve.clone());
        }
        reports.push(CurveReport { curve, l_rho: l_old, l_j: l_new, ratio });
    };
    for c in enumerate_simple(tri, pres, max_weight, budget)? {
        let l_old = eval_j.eval(&c.letter_word).translation_length();
        let l_new = eval_t.eval(&c.letter_word).translation_length();
        if l_new <= 1e-12 {
            return Err(Error::ZeroDenominator(c.curve.weights.clone()));
        }
        push(c.curve, l_old, l_new);
    }
    // Boundary classes, including cusped punctures which stay at zero.
    let mut boundary = Vec::new();
    for p in 0..tri.punctures {
        let l_old = base_rep.peripheral(p).translation_length();
        let l_new = deformed_rep.peripheral(p).translation_length();
        boundary.push(BoundaryAudit { puncture: p, target: l_new, l_j: l_new, l_rho: l_old });
        if l_old > 1e-12 {
            push(NormalCurve::link_curve(tri, p), l_old, l_new);
        }
    }
    let verdict = if sup < 1.0 - tol.strict_margin {
        Verdict::Strict
    } else {
        Verdict::NonStrict
    };
    Ok(DominationCertificate {
        verdict,
        sup_ratio: sup,
        witness,
        curves: reports,
        boundary,
        max_weight,
    })
}
