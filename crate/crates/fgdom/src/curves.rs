//! Enumeration of essential non-peripheral simple closed curves in normal
//! coordinates and evaluation of their holonomy and boundary margins.

use crate::devtree::{base_positions, neighbor_positions, validate_coords, DevTree};
use crate::moebius::{Geodesic, IsometryClass, Moebius};
use crate::presentation::{path_letter_word, Presentation};
use crate::surface::{trace_normal_curve, CurveComponent, IdealTriangulation, NormalCurve};
use crate::word::Word;
use crate::Error;
use num_complex::Complex64 as C64;

/// A connected essential non-peripheral simple closed curve with its
/// trace data and spine class.
#[derive(Debug, Clone)]
pub struct EnumeratedCurve {
    pub curve: NormalCurve,
    pub component: CurveComponent,
    /// Class in the free letters of the presentation's spine.
    pub letter_word: Word,
}

/// Enumerates every admissible weight vector with all weights at most
/// `max_weight` that traces to a single essential non-peripheral
/// component. Deterministic graded-lexicographic output order.
pub fn enumerate_simple(
    tri: &IdealTriangulation,
    pres: &Presentation,
    max_weight: u64,
    budget: usize,
) -> Result<Vec<EnumeratedCurve>, Error> {
    if max_weight > 64 {
        return Err(Error::Invalid("max_weight exceeds the desk-scale guard 64".into()));
    }
    let ne = tri.num_edges();

    // Triangles by the highest edge index they contain, for early pruning.
    let mut tri_by_max_edge: Vec<Vec<usize>> = vec![Vec::new(); ne];
    for t in 0..tri.num_triangles() {
        let m = (0..3).map(|s| tri.edge_of(t, s)).max().unwrap();
        tri_by_max_edge[m].push(t);
    }

    let mut admissible: Vec<Vec<u64>> = Vec::new();
    let mut weights = vec![0u64; ne];
    let mut count = 0usize;

    fn assign(
        tri: &IdealTriangulation,
        tri_by_max_edge: &[Vec<usize>],
        weights: &mut Vec<u64>,
        e: usize,
        max_weight: u64,
        budget: usize,
        count: &mut usize,
        out: &mut Vec<Vec<u64>>,
    ) -> Result<(), Error> {
        if e == weights.len() {
            *count += 1;
            if *count > budget {
                return Err(Error::BudgetExceeded(budget));
            }
            if weights.iter().any(|&w| w > 0) {
                out.push(weights.clone());
            }
            return Ok(());
        }
        'next: for w in 0..=max_weight {
            weights[e] = w;
            // Check every triangle whose last edge is e; and feasibility
            // for triangles with two assigned edges.
            for &t in &tri_by_max_edge[e] {
                let a = weights[tri.edge_of(t, 0)] as i64;
                let b = weights[tri.edge_of(t, 1)] as i64;
                let c = weights[tri.edge_of(t, 2)] as i64;
                if (a + b + c) % 2 != 0 || a > b + c || b > a + c || c > a + b {
                    continue 'next;
                }
            }
            for t in 0..tri.num_triangles() {
                let es = [tri.edge_of(t, 0), tri.edge_of(t, 1), tri.edge_of(t, 2)];
                let assigned: Vec<usize> = es.iter().copied().filter(|&x| x <= e).collect();
                if assigned.len() == 2 && es.iter().any(|&x| x > e) {
                    let d = (weights[assigned[0]] as i64 - weights[assigned[1]] as i64).abs();
                    if d > max_weight as i64 {
                        continue 'next;
                    }
                }
            }
            assign(tri, tri_by_max_edge, weights, e + 1, max_weight, budget, count, out)?;
        }
        weights[e] = 0;
        Ok(())
    }

    assign(
        tri,
        &tri_by_max_edge,
        &mut weights,
        0,
        max_weight,
        budget,
        &mut count,
        &mut admissible,
    )?;

    // Graded lexicographic order by (total weight, vector).
    admissible.sort_by(|a, b| {
        let (sa, sb) = (a.iter().sum::<u64>(), b.iter().sum::<u64>());
        sa.cmp(&sb).then_with(|| a.cmp(b))
    });

    let mut out = Vec::new();
    for w in admissible {
        let curve = NormalCurve::new(w);
        let comps = trace_normal_curve(tri, &curve)?;
        if comps.len() != 1 {
            continue;
        }
        let comp = comps.into_iter().next().unwrap();
        if crate::surface::is_peripheral(tri, &comp) {
            continue;
        }
        let letter_word = path_letter_word(pres, tri, &comp.side_path);
        // The spine class lives in a free group, so a component is
        // null-homotopic exactly when its reduced word is empty.
        if letter_word.reduce().is_identity() {
            continue;
        }
        out.push(EnumeratedCurve { curve, component: comp, letter_word });
    }
    Ok(out)
}

/// Develops a closed dual loop and returns its holonomy class.
pub fn loop_holonomy(
    tri: &IdealTriangulation,
    coords: &[C64],
    start: usize,
    path: &[(usize, usize)],
) -> Result<Moebius, Error> {
    let mut pos = base_positions();
    let mut at = start;
    for &(t, s) in path {
        if t != at {
            return Err(Error::Invalid("crossing does not match current triangle".into()));
        }
        pos = neighbor_positions(tri, &pos, t, s, coords)?;
        at = tri.glued(t, s).0;
    }
    if at != start {
        return Err(Error::Invalid("curve path does not close".into()));
    }
    let base = base_positions();
    Moebius::map_triples((&base[0], &base[1], &base[2]), (&pos[0], &pos[1], &pos[2]))
}

/// Holonomy of a connected normal curve under the given coordinates.
pub fn curve_holonomy(
    tri: &IdealTriangulation,
    coords: &[C64],
    curve: &NormalCurve,
) -> Result<Moebius, Error> {
    validate_coords(tri, coords)?;
    let comps = trace_normal_curve(tri, curve)?;
    if comps.len() != 1 {
        return Err(Error::DisconnectedCurve);
    }
    let comp = &comps[0];
    loop_holonomy(tri, coords, comp.side_path[0].0, &comp.side_path)
}

/// Minimum distance, along the developed curve, between the curve's axis
/// and the peripheral axis or cusp horoball at every ideal vertex
/// encountered.
pub fn boundary_margin(
    tri: &IdealTriangulation,
    coords: &[C64],
    curve: &NormalCurve,
) -> Result<f64, Error> {
    if !crate::pleat::is_real_positive(coords) {
        return Err(Error::Invalid("boundary margins need real positive coordinates".into()));
    }
    validate_coords(tri, coords)?;
    let comps = trace_normal_curve(tri, curve)?;
    if comps.len() != 1 {
        return Err(Error::DisconnectedCurve);
    }
    let comp = &comps[0];
    let pres = Presentation::new(tri)?;
    let dev = DevTree::new(tri, &pres, coords)?;
    let start = comp.side_path[0].0;

    // Develop the loop from the tree frame of its start triangle so that
    // corner stabilizers can be read off the tree data.
    let mut frames: Vec<(usize, Moebius)> = Vec::with_capacity(comp.side_path.len() + 1);
    let mut pos = dev.pos[start];
    let mut at = start;
    frames.push((at, Moebius::identity()));
    for &(t, s) in &comp.side_path {
        pos = neighbor_positions(tri, &pos, t, s, coords)?;
        at = tri.glued(t, s).0;
        let g = Moebius::map_triples(
            (&dev.pos[at][0], &dev.pos[at][1], &dev.pos[at][2]),
            (&pos[0], &pos[1], &pos[2]),
        )?;
        frames.push((at, g));
    }
    let hol = Moebius::map_triples(
        (&dev.pos[start][0], &dev.pos[start][1], &dev.pos[start][2]),
        (&pos[0], &pos[1], &pos[2]),
    )?;
    if hol.classify(1e-9) != IsometryClass::Loxodromic {
        return Err(Error::ZeroDenominator(curve.weights.clone()));
    }
    let (p, q) = hol.fixed_points();
    let axis = Geodesic::new(p, q.expect("loxodromic has two fixed points"));

    let mut margin = f64::INFINITY;
    for (t, g) in &frames {
        for v in 0..3 {
            let punct = tri.puncture_of_corner(*t, v);
            // Stabilizer of this corner's vertex in the developed frame.
            let w = &pres.corner_word[*t][v];
            let stab_tree = dev
                .eval_word(w)
                .compose(&dev.eval_word(&pres.link_word[punct]))
                .compose(&dev.eval_word(w).inverse());
            let stab = g.compose(&stab_tree).compose(&g.inverse());
            match stab.classify(1e-9) {
                IsometryClass::Loxodromic => {
                    let (a, b) = stab.fixed_points();
                    let bd = Geodesic::new(a, b.unwrap());
                    margin = margin.min(axis.distance_to(&bd)?);
                }
                IsometryClass::Parabolic => {
                    // Horoball at the fixed point, normalized so the
                    // parabolic acts as z -> z + tau; height |tau|.
                    let (fix, _) = stab.fixed_points();
                    let aux1 = dev.pos[*t][v];
                    let _ = aux1;
                    let norm = normalize_to_infinity(&fix)?;
                    let moved = norm.compose(&stab).compose(&norm.inverse());
                    let tau = moved.b.norm() / moved.a.norm();
                    margin = margin.min(axis.distance_to_horoball(&norm, tau)?);
                }
                _ => {}
            }
        }
    }
    Ok(margin)
}

fn normalize_to_infinity(p: &crate::moebius::SpherePoint) -> Result<Moebius, Error> {
    use crate::moebius::SpherePoint;
    // Any map sending p to infinity; pick two auxiliary points away from p.
    let candidates = [
        SpherePoint::real(0.0),
        SpherePoint::real(1.0),
        SpherePoint::real(-1.0),
        SpherePoint::infinity(),
    ];
    let mut aux = Vec::new();
    for c in candidates {
        if c.chordal(p) > 0.3 {
            aux.push(c);
        }
        if aux.len() == 2 {
            break;
        }
    }
    Moebius::map_triples(
        (p, &aux[0], &aux[1]),
        (
            &SpherePoint::infinity(),
            &SpherePoint::real(0.0),
            &SpherePoint::real(1.0),
        ),
    )
}

/// Cluster flip of real positive coordinates at edge `e`, paired with the
/// combinatorial flip (edge ids are stable).
pub fn flip_coordinates(
    tri: &IdealTriangulation,
    coords: &[C64],
    e: usize,
) -> Result<(IdealTriangulation, Vec<C64>), Error> {
    if !crate::pleat::is_real_positive(coords) {
        return Err(Error::Invalid("cluster flips are implemented for real positive coordinates".into()));
    }
    validate_coords(tri, coords)?;
    let flipped = tri.flip(e)?;
    // Exchange matrix entries against e: corners where f follows e
    // counterclockwise count +1, corners where f precedes e count -1.
    let mut eps = vec![0i64; tri.num_edges()];
    for t in 0..tri.num_triangles() {
        for s in 0..3 {
            let here = tri.edge_of(t, s);
            let next = tri.edge_of(t, (s + 1) % 3);
            if here == e && next != e {
                eps[next] += 1;
            }
            if next == e && here != e {
                eps[here] -= 1;
            }
        }
    }
    let x = coords[e].re;
    let mut out = coords.to_vec();
    out[e] = C64::new(1.0 / x, 0.0);
    for f in 0..tri.num_edges() {
        if f == e || eps[f] == 0 {
            continue;
        }
        let factor = if eps[f] > 0 {
            (1.0 + x).powi(eps[f] as i32)
        } else {
            (1.0 + 1.0 / x).powi(eps[f] as i32)
        };
        out[f] = C64::new(out[f].re * factor, 0.0);
    }
    Ok((flipped, out))
}
