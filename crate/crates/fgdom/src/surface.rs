//! Combinatorial ideal triangulations of punctured surfaces, puncture
//! links, edge flips, and normal-coordinate curve encoding.
//!
//! Triangles are oriented; side `s` of a triangle runs from its vertex `s`
//! to vertex `s+1 (mod 3)`, counterclockwise, so the interior lies to the
//! left of every directed side. Gluing two sides always identifies them
//! with reversed orientation, which keeps the glued surface oriented.

use crate::Error;

/// A triangle side addressed as (triangle, slot).
pub type Side = (usize, usize);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealTriangulation {
    pub genus: usize,
    pub punctures: usize,
    /// Edge -> its two sides, lexicographically ordered.
    pub edges: Vec<[Side; 2]>,
    /// (triangle, slot) -> edge id.
    side_edge: Vec<[usize; 3]>,
    /// Puncture links: cycles of corners (triangle, vertex), one per
    /// puncture, each starting at its lexicographically least corner.
    links: Vec<Vec<(usize, usize)>>,
    /// (triangle, vertex) -> puncture index.
    corner_puncture: Vec<[usize; 3]>,
}

impl IdealTriangulation {
    pub fn num_triangles(&self) -> usize {
        self.side_edge.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edge_of(&self, t: usize, s: usize) -> usize {
        self.side_edge[t][s % 3]
    }

    /// The side glued to (t, s).
    pub fn glued(&self, t: usize, s: usize) -> Side {
        let e = &self.edges[self.edge_of(t, s)];
        if e[0] == (t, s % 3) {
            e[1]
        } else {
            e[0]
        }
    }

    pub fn links(&self) -> &[Vec<(usize, usize)>] {
        &self.links
    }

    pub fn puncture_of_corner(&self, t: usize, v: usize) -> usize {
        self.corner_puncture[t][v % 3]
    }

    /// Corner cycle step around a puncture: cross the side leaving the
    /// corner's vertex and land on the matching corner of the neighbor.
    pub fn link_next(&self, t: usize, v: usize) -> (usize, usize) {
        let (t2, s2) = self.glued(t, v % 3);
        (t2, (s2 + 1) % 3)
    }

    /// Edges crossed walking once around the link of a puncture, with
    /// multiplicity and in cycle order.
    pub fn link_edges(&self, puncture: usize) -> Vec<usize> {
        self.links[puncture]
            .iter()
            .map(|&(t, v)| self.edge_of(t, v))
            .collect()
    }

    /// Builds a triangulation from a side-pairing table. Each entry
    /// `[t, s, t2, s2]` glues side (t,s) to (t2,s2); every side must be
    /// paired exactly once.
    pub fn build(genus: usize, punctures: usize, gluing: &[[usize; 4]]) -> Result<Self, Error> {
        if punctures == 0 || 2 >= 2 * genus + punctures {
            return Err(Error::NonNegativeEuler { genus, punctures });
        }
        let expected_tris = 4 * genus + 2 * punctures;
        let expected_tris = expected_tris.checked_sub(4).filter(|&n| n > 0).ok_or(
            Error::NonNegativeEuler { genus, punctures },
        )?;
        let num_tris = gluing
            .iter()
            .flat_map(|g| [g[0], g[2]])
            .max()
            .map(|m| m + 1)
            .unwrap_or(0);
        if num_tris != expected_tris || gluing.len() * 2 != num_tris * 3 {
            // A side is missing or duplicated, or the triangle count is off.
            return Err(Error::Invalid(format!(
                "expected {expected_tris} triangles ({} side pairings), found {num_tris} triangles and {} pairings",
                expected_tris * 3 / 2,
                gluing.len()
            )));
        }
        let mut side_edge = vec![[usize::MAX; 3]; num_tris];
        let mut edges: Vec<[Side; 2]> = Vec::with_capacity(gluing.len());
        for g in gluing {
            let (a, b): (Side, Side) = ((g[0], g[1]), (g[2], g[3]));
            for &(t, s) in [&a, &b] {
                if s > 2 || t >= num_tris {
                    return Err(Error::UnpairedSide(t, s));
                }
            }
            if a == b {
                return Err(Error::UnpairedSide(a.0, a.1));
            }
            for &(t, s) in [&a, &b] {
                if side_edge[t][s] != usize::MAX {
                    return Err(Error::UnpairedSide(t, s));
                }
            }
            let e = edges.len();
            side_edge[a.0][a.1] = e;
            side_edge[b.0][b.1] = e;
            edges.push(if a < b { [a, b] } else { [b, a] });
        }
        for (t, sides) in side_edge.iter().enumerate() {
            for (s, &e) in sides.iter().enumerate() {
                if e == usize::MAX {
                    return Err(Error::UnpairedSide(t, s));
                }
            }
        }
        let mut tri = IdealTriangulation {
            genus,
            punctures,
            edges,
            side_edge,
            links: Vec::new(),
            corner_puncture: vec![[usize::MAX; 3]; num_tris],
        };
        tri.compute_links()?;
        Ok(tri)
    }

    fn compute_links(&mut self) -> Result<(), Error> {
        let n = self.num_triangles();
        self.corner_puncture = vec![[usize::MAX; 3]; n];
        self.links.clear();
        for t0 in 0..n {
            for v0 in 0..3 {
                if self.corner_puncture[t0][v0] != usize::MAX {
                    continue;
                }
                let p = self.links.len();
                let mut cycle = Vec::new();
                let (mut t, mut v) = (t0, v0);
                loop {
                    self.corner_puncture[t][v] = p;
                    cycle.push((t, v));
                    let (t2, v2) = self.link_next(t, v);
                    if (t2, v2) == (t0, v0) {
                        break;
                    }
                    if self.corner_puncture[t2][v2] != usize::MAX {
                        return Err(Error::Invalid(
                            "corner walk re-entered a classified corner".into(),
                        ));
                    }
                    (t, v) = (t2, v2);
                }
                self.links.push(cycle);
            }
        }
        if self.links.len() != self.punctures {
            return Err(Error::WrongPunctureCount {
                expected: self.punctures,
                found: self.links.len(),
            });
        }
        Ok(())
    }

    /// Gluing table in a stable order, suitable for serialization.
    pub fn gluing_table(&self) -> Vec<[usize; 4]> {
        self.edges
            .iter()
            .map(|[a, b]| [a.0, a.1, b.0, b.1])
            .collect()
    }

    /// Flips edge `e`, replacing the diagonal of the ideal quadrilateral
    /// formed by its two (distinct) triangles. The flipped edge keeps its
    /// id; all other edges keep theirs.
    pub fn flip(&self, e: usize) -> Result<IdealTriangulation, Error> {
        let [(t1, s1), (t2, s2)] = self.edges[e];
        if t1 == t2 {
            return Err(Error::SelfGluedEdge(e));
        }
        // Quadrilateral with diagonal e: going counterclockwise the sides
        // are R, U (from t2) then P, Q (from t1), where t1 carries
        // (e, P, Q) and t2 carries (e, R, U) in slot order from e.
        let p = (t1, (s1 + 1) % 3);
        let q = (t1, (s1 + 2) % 3);
        let r = (t2, (s2 + 1) % 3);
        let u = (t2, (s2 + 2) % 3);
        // New triangles after re-diagonalizing: t1' = [R, F, Q] and
        // t2' = [U, P, F] with F the new diagonal.
        let relocate = |side: Side| -> Side {
            if side == p {
                (t2, 1)
            } else if side == q {
                (t1, 2)
            } else if side == r {
                (t1, 0)
            } else if side == u {
                (t2, 0)
            } else {
                side
            }
        };
        let mut gluing = Vec::with_capacity(self.edges.len());
        for (id, [a, b]) in self.edges.iter().enumerate() {
            if id == e {
                gluing.push([t1, 1, t2, 2]);
            } else {
                let (a2, b2) = (relocate(*a), relocate(*b));
                gluing.push([a2.0, a2.1, b2.0, b2.1]);
            }
        }
        // Edge ids are preserved because `build` assigns ids in table
        // order and we emit one row per original edge.
        IdealTriangulation::build(self.genus, self.punctures, &gluing)
    }

    /// Isomorphism of labeled gluings up to relabeling triangles and
    /// rotating their slots (orientation-preserving).
    pub fn is_isomorphic(&self, other: &IdealTriangulation) -> bool {
        let n = self.num_triangles();
        if n != other.num_triangles() || self.num_edges() != other.num_edges() {
            return false;
        }
        'outer: for t0 in 0..n {
            for rot in 0..3 {
                // Map self triangle 0 slot s -> other (t0, s+rot); grow by BFS.
                let mut map: Vec<Option<(usize, usize)>> = vec![None; n];
                map[0] = Some((t0, rot));
                let mut queue = vec![0usize];
                let mut seen = vec![false; n];
                seen[0] = true;
                let mut ok = true;
                while let Some(t) = queue.pop() {
                    let (t_img, r) = map[t].unwrap();
                    for s in 0..3 {
                        let (nt, ns) = self.glued(t, s);
                        let (nt_img, ns_img) = other.glued(t_img, (s + r) % 3);
                        let want_rot = (ns_img + 3 - ns) % 3;
                        match map[nt] {
                            None => {
                                map[nt] = Some((nt_img, want_rot));
                                if !seen[nt] {
                                    seen[nt] = true;
                                    queue.push(nt);
                                }
                            }
                            Some(m) => {
                                if m != (nt_img, want_rot) {
                                    ok = false;
                                    break;
                                }
                            }
                        }
                    }
                    if !ok {
                        break;
                    }
                }
                if ok && map.iter().all(|m| m.is_some()) {
                    let mut hit = vec![false; n];
                    for m in map.iter().flatten() {
                        hit[m.0] = true;
                    }
                    if hit.iter().all(|&h| h) {
                        return true;
                    }
                }
                if n == 0 {
                    break 'outer;
                }
            }
        }
        false
    }
}

/// Canonical triangulation of S_{g,k}: the fan triangulation of the
/// canonical fundamental polygon (handle blocks, then puncture blocks).
pub fn standard_triangulation(genus: usize, punctures: usize) -> Result<IdealTriangulation, Error> {
    let (g, k) = (genus, punctures);
    if k == 0 || 2 >= 2 * g + k {
        return Err(Error::NonNegativeEuler { genus: g, punctures: k });
    }
    let n = 2 * g + k - 1;
    let sides = 2 * n;
    // Canonical word: A_i B_i A_i^-1 B_i^-1 ... T_j T_j^-1 ...
    let mut word: Vec<usize> = vec![0; sides]; // letter id per position
    for i in 0..g {
        word[4 * i] = i * 2;
        word[4 * i + 1] = i * 2 + 1;
        word[4 * i + 2] = i * 2;
        word[4 * i + 3] = i * 2 + 1;
    }
    for j in 0..k.saturating_sub(1) {
        word[4 * g + 2 * j] = 2 * g + j;
        word[4 * g + 2 * j + 1] = 2 * g + j;
    }
    // Sides of the fan: polygon side j lives on the fan triangle as below.
    let tri_count = sides - 2;
    let boundary_side = |j: usize| -> Side {
        if j == 0 {
            (0, 0)
        } else if j == sides - 1 {
            (tri_count - 1, 2)
        } else {
            (j - 1, 1)
        }
    };
    let mut gluing: Vec<[usize; 4]> = Vec::new();
    // Interior fan diagonals.
    for i in 0..tri_count - 1 {
        gluing.push([i, 2, i + 1, 0]);
    }
    // Paired polygon sides.
    let mut first_of: Vec<Option<usize>> = vec![None; n];
    for (j, &letter) in word.iter().enumerate() {
        match first_of[letter] {
            None => first_of[letter] = Some(j),
            Some(j0) => {
                let (a, b) = (boundary_side(j0), boundary_side(j));
                gluing.push([a.0, a.1, b.0, b.1]);
            }
        }
    }
    IdealTriangulation::build(g, k, &gluing)
}

/// Simple closed multicurve in normal coordinates: one nonnegative
/// geometric intersection number per edge.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NormalCurve {
    pub weights: Vec<u64>,
}

impl NormalCurve {
    pub fn new(weights: Vec<u64>) -> Self {
        NormalCurve { weights }
    }

    pub fn is_zero(&self) -> bool {
        self.weights.iter().all(|&w| w == 0)
    }

    /// Corner count at (t, v): arcs joining sides v-1 and v.
    fn corner_count(&self, tri: &IdealTriangulation, t: usize, v: usize) -> i64 {
        let w =
            |s: usize| -> i64 { self.weights[tri.edge_of(t, s)] as i64 };
        (w((v + 2) % 3) + w(v) - w((v + 1) % 3)) / 2
    }

    /// Checks triangle parity and inequality constraints; returns the
    /// offending triangle on failure.
    pub fn validate(&self, tri: &IdealTriangulation) -> Result<(), Error> {
        if self.weights.len() != tri.num_edges() {
            return Err(Error::Invalid(format!(
                "expected {} edge weights, found {}",
                tri.num_edges(),
                self.weights.len()
            )));
        }
        for t in 0..tri.num_triangles() {
            let w = |s: usize| self.weights[tri.edge_of(t, s)] as i64;
            let (a, b, c) = (w(0), w(1), w(2));
            if (a + b + c) % 2 != 0 || a > b + c || b > a + c || c > a + b {
                return Err(Error::InadmissibleWeights(t));
            }
        }
        Ok(())
    }

    /// The normal coordinates of the link of a puncture.
    pub fn link_curve(tri: &IdealTriangulation, puncture: usize) -> NormalCurve {
        let mut weights = vec![0u64; tri.num_edges()];
        for e in tri.link_edges(puncture) {
            weights[e] += 1;
        }
        NormalCurve { weights }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Turn {
    Left,
    Right,
}

/// One closed component of a traced normal multicurve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveComponent {
    /// Cyclic tokens (edge crossed, turn taken in the triangle entered
    /// after the previous crossing).
    pub word: Vec<(usize, Turn)>,
    /// Parallel record of the crossings as exited sides, for development.
    pub side_path: Vec<Side>,
}

impl CurveComponent {
    pub fn weights(&self, tri: &IdealTriangulation) -> NormalCurve {
        let mut w = vec![0u64; tri.num_edges()];
        for &(e, _) in &self.word {
            w[e] += 1;
        }
        NormalCurve::new(w)
    }
}

/// Traces an admissible weight vector into its connected components.
/// Component extraction order is lexicographic over (triangle, corner,
/// depth) of the first unused arc, and deterministic.
pub fn trace_normal_curve(
    tri: &IdealTriangulation,
    curve: &NormalCurve,
) -> Result<Vec<CurveComponent>, Error> {
    curve.validate(tri)?;
    let nt = tri.num_triangles();
    let corner_counts: Vec<[i64; 3]> = (0..nt)
        .map(|t| [0, 1, 2].map(|v| curve.corner_count(tri, t, v)))
        .collect();
    let mut used: Vec<[Vec<bool>; 3]> = corner_counts
        .iter()
        .map(|counts| [0, 1, 2].map(|v| vec![false; counts[v].max(0) as usize]))
        .collect();

    // Arc containing point p on side s of triangle t. Points on a side
    // are indexed from the side's start vertex; the first corner_count(s)
    // belong to the corner at vertex s, the rest to the corner at s+1.
    let arc_at = |t: usize, s: usize, p: u64| -> (usize, u64) {
        let n_near = corner_counts[t][s] as u64;
        if p < n_near {
            (s, p)
        } else {
            let w = curve.weights[tri.edge_of(t, s)];
            ((s + 1) % 3, w - 1 - p)
        }
    };

    let mut components = Vec::new();
    for t0 in 0..nt {
        for v0 in 0..3 {
            for m0 in 0..corner_counts[t0][v0].max(0) as u64 {
                if used[t0][v0][m0 as usize] {
                    continue;
                }
                // Start inside t0 on the corner-v0 arc at depth m0, as if
                // we had entered through side v0-1.
                let mut word = Vec::new();
                let mut side_path = Vec::new();
                let (mut t, mut s_in, mut p_in) = {
                    let s_prev = (v0 + 2) % 3;
                    let w_prev = curve.weights[tri.edge_of(t0, s_prev)];
                    (t0, s_prev, w_prev - 1 - m0)
                };
                loop {
                    let (corner, depth) = arc_at(t, s_in, p_in);
                    if used[t][corner][depth as usize] {
                        break;
                    }
                    used[t][corner][depth as usize] = true;
                    // The arc joins sides corner-1 and corner; we exit
                    // through whichever one we did not enter by.
                    let (s_out, p_out, turn) = if corner == s_in {
                        // exit through corner-1 = s_in + 2
                        let s_out = (s_in + 2) % 3;
                        let w_out = curve.weights[tri.edge_of(t, s_out)];
                        (s_out, w_out - 1 - depth, Turn::Left)
                    } else {
                        // corner == s_in + 1: exit through side corner
                        let s_out = corner;
                        (s_out, depth, Turn::Right)
                    };
                    word.push((tri.edge_of(t, s_out), turn));
                    side_path.push((t, s_out));
                    let (t2, s2) = tri.glued(t, s_out);
                    let w_e = curve.weights[tri.edge_of(t, s_out)];
                    (t, s_in, p_in) = (t2, s2, w_e - 1 - p_out);
                }
                if !word.is_empty() {
                    components.push(CurveComponent { word, side_path });
                }
            }
        }
    }

    // Every crossing must be accounted for exactly once.
    let mut total = vec![0u64; tri.num_edges()];
    for c in &components {
        for &(e, _) in &c.word {
            total[e] += 1;
        }
    }
    if total != curve.weights {
        return Err(Error::Invalid(
            "traced crossings do not reproduce the weight vector".into(),
        ));
    }
    Ok(components)
}

/// True iff the component is isotopic to a puncture link: its cyclic
/// edge word matches some link cycle up to rotation and reversal.
pub fn is_peripheral(tri: &IdealTriangulation, component: &CurveComponent) -> bool {
    let word: Vec<usize> = component.word.iter().map(|&(e, _)| e).collect();
    for p in 0..tri.punctures {
        let link = tri.link_edges(p);
        if cyclic_equal(&word, &link) {
            return true;
        }
    }
    false
}

fn cyclic_equal(a: &[usize], b: &[usize]) -> bool {
    if a.len() != b.len() || a.is_empty() {
        return false;
    }
    let n = a.len();
    for rot in 0..n {
        if (0..n).all(|i| a[i] == b[(i + rot) % n]) {
            return true;
        }
        if (0..n).all(|i| a[i] == b[(n + rot - i) % n]) {
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    pub fn once_punctured_torus() -> IdealTriangulation {
        IdealTriangulation::build(
            1,
            1,
            &[[0, 0, 1, 0], [0, 1, 1, 1], [0, 2, 1, 2]],
        )
        .unwrap()
    }

    pub fn thrice_punctured_sphere() -> IdealTriangulation {
        IdealTriangulation::build(
            0,
            3,
            &[[0, 0, 1, 2], [0, 1, 1, 1], [0, 2, 1, 0]],
        )
        .unwrap()
    }

    #[test]
    fn torus_counts_and_link() {
        let t = once_punctured_torus();
        assert_eq!(t.num_triangles(), 2);
        assert_eq!(t.num_edges(), 3);
        assert_eq!(t.links().len(), 1);
        assert_eq!(t.links()[0].len(), 6);
        // Each edge is crossed twice by the link.
        let mut crossings = vec![0; 3];
        for e in t.link_edges(0) {
            crossings[e] += 1;
        }
        assert_eq!(crossings, vec![2, 2, 2]);
    }

    #[test]
    fn pair_of_pants_counts() {
        let t = thrice_punctured_sphere();
        assert_eq!(t.num_triangles(), 2);
        assert_eq!(t.num_edges(), 3);
        assert_eq!(t.links().len(), 3);
        for l in t.links() {
            assert_eq!(l.len(), 2);
        }
    }

    #[test]
    fn euler_guard() {
        assert!(matches!(
            IdealTriangulation::build(0, 1, &[]),
            Err(Error::NonNegativeEuler { .. })
        ));
        assert!(matches!(
            IdealTriangulation::build(0, 2, &[]),
            Err(Error::NonNegativeEuler { .. })
        ));
    }

    #[test]
    fn unpaired_side_detected() {
        let e = IdealTriangulation::build(
            1,
            1,
            &[[0, 0, 1, 0], [0, 1, 1, 1], [0, 2, 0, 2]],
        );
        assert!(matches!(e, Err(Error::UnpairedSide(..))));
    }

    #[test]
    fn wrong_puncture_count_detected() {
        // The S_{0,3} gluing declares one puncture.
        let e = IdealTriangulation::build(
            0,
            3,
            &[[0, 0, 1, 0], [0, 1, 1, 1], [0, 2, 1, 2]],
        );
        // This gluing actually has one link, and 0 genus/3 punctures
        // expects 2 triangles; counts match but links do not.
        assert!(matches!(e, Err(Error::WrongPunctureCount { .. })));
    }

    #[test]
    fn standard_triangulations_validate() {
        for (g, k) in [(1, 1), (0, 3), (1, 2), (2, 1), (0, 4), (2, 3)] {
            let t = standard_triangulation(g, k).unwrap();
            assert_eq!(t.num_triangles(), 4 * g + 2 * k - 4);
            assert_eq!(t.num_edges(), 6 * g + 3 * k - 6);
            assert_eq!(t.links().len(), k);
            assert_eq!(3 * t.num_triangles(), 2 * t.num_edges());
        }
    }

    #[test]
    fn flip_preserves_counts_and_double_flip_restores() {
        let t = once_punctured_torus();
        for e in 0..3 {
            let f = t.flip(e).unwrap();
            assert_eq!(f.num_triangles(), 2);
            assert_eq!(f.num_edges(), 3);
            let ff = f.flip(e).unwrap();
            assert!(ff.is_isomorphic(&t), "double flip restores edge {e}");
        }
        let s21 = standard_triangulation(2, 1).unwrap();
        for e in 0..s21.num_edges() {
            if let Ok(f) = s21.flip(e) {
                let ff = f.flip(e).unwrap();
                assert!(ff.is_isomorphic(&s21));
            }
        }
    }

    #[test]
    fn self_glued_edge_rejected_by_flip() {
        // Build a triangulation with a self-glued edge: S_{1,1} from a
        // different gluing where one triangle glues to itself.
        // One exists inside S_{0,4}'s standard triangulation? Use a direct
        // search: flip standard S_{1,2} edges until a self-glued edge
        // appears, then try to flip it.
        let t = standard_triangulation(1, 2).unwrap();
        let mut found = false;
        let mut stack = vec![t];
        let mut budget = 200;
        while let Some(t) = stack.pop() {
            if budget == 0 {
                break;
            }
            budget -= 1;
            for e in 0..t.num_edges() {
                let [a, b] = t.edges[e];
                if a.0 == b.0 {
                    assert!(matches!(t.flip(e), Err(Error::SelfGluedEdge(_))));
                    found = true;
                } else if budget > 0 && stack.len() < 4 {
                    if let Ok(f) = t.flip(e) {
                        stack.push(f);
                    }
                }
            }
            if found {
                break;
            }
        }
        assert!(found, "no self-glued edge reachable by a few flips");
    }

    #[test]
    fn trace_slope_curve_on_torus() {
        let t = once_punctured_torus();
        let c = NormalCurve::new(vec![1, 1, 0]);
        let comps = trace_normal_curve(&t, &c).unwrap();
        assert_eq!(comps.len(), 1);
        let edges: Vec<usize> = comps[0].word.iter().map(|&(e, _)| e).collect();
        assert_eq!(edges.len(), 2);
        assert!(edges.contains(&0) && edges.contains(&1));
        assert!(!is_peripheral(&t, &comps[0]));
    }

    #[test]
    fn trace_zero_curve_empty() {
        let t = once_punctured_torus();
        let comps = trace_normal_curve(&t, &NormalCurve::new(vec![0, 0, 0])).unwrap();
        assert!(comps.is_empty());
    }

    #[test]
    fn odd_parity_rejected() {
        let t = once_punctured_torus();
        let e = trace_normal_curve(&t, &NormalCurve::new(vec![1, 0, 0]));
        assert!(matches!(e, Err(Error::InadmissibleWeights(_))));
    }

    #[test]
    fn link_curve_is_peripheral() {
        for tri in [once_punctured_torus(), thrice_punctured_sphere()] {
            for p in 0..tri.punctures {
                let link = NormalCurve::link_curve(&tri, p);
                let comps = trace_normal_curve(&tri, &link).unwrap();
                assert_eq!(comps.len(), 1, "link of puncture {p} is connected");
                assert!(is_peripheral(&tri, &comps[0]));
            }
        }
    }

    #[test]
    fn admissibility_closed_under_addition() {
        let t = standard_triangulation(1, 2).unwrap();
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        let mut admissible = Vec::new();
        while admissible.len() < 20 {
            let w: Vec<u64> = (0..t.num_edges()).map(|_| rng.random_range(0..6)).collect();
            let c = NormalCurve::new(w);
            if c.validate(&t).is_ok() {
                admissible.push(c);
            }
        }
        for a in &admissible {
            for b in &admissible {
                let sum: Vec<u64> = a
                    .weights
                    .iter()
                    .zip(&b.weights)
                    .map(|(x, y)| x + y)
                    .collect();
                assert!(NormalCurve::new(sum).validate(&t).is_ok());
            }
        }
    }
}
