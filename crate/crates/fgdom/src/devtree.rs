//! Equivariant development of a triangulation with Fock-Goncharov edge
//! coordinates: tree-lift vertex positions, deck matrices for the free
//! letters, and the one-step development rule shared by the pleated-plane
//! and curve-holonomy code.

use crate::moebius::{Moebius, SpherePoint};
use crate::presentation::Presentation;
use crate::surface::IdealTriangulation;
use crate::word::Word;
use crate::Error;
use num_complex::Complex64 as C64;

/// Base triangle normalization: vertices 0, 1, 2 of triangle 0 develop to
/// (∞, −1, 0).
pub fn base_positions() -> [SpherePoint; 3] {
    [
        SpherePoint::infinity(),
        SpherePoint::real(-1.0),
        SpherePoint::real(0.0),
    ]
}

/// Solves for the apex across side `s` of a developed triangle: the new
/// triangle shares the directed edge and its apex is pinned by the edge
/// coordinate `c` through the cross-ratio convention.
pub fn develop_across(
    pos: &[SpherePoint; 3],
    s: usize,
    c: C64,
) -> Result<SpherePoint, Error> {
    let u = &pos[s % 3];
    let v = &pos[(s + 1) % 3];
    let w = &pos[(s + 2) % 3];
    // Normalize (u, v, w_left) to (∞, 0, c); the right apex sits at −1.
    let m = Moebius::map_triples(
        (u, v, w),
        (
            &SpherePoint::infinity(),
            &SpherePoint::real(0.0),
            &SpherePoint::finite(c),
        ),
    )?;
    Ok(m.inverse().apply(&SpherePoint::real(-1.0)))
}

/// Positions of the neighbor triangle (in its own slot order) after
/// crossing side `s`.
pub fn neighbor_positions(
    tri: &IdealTriangulation,
    pos: &[SpherePoint; 3],
    t: usize,
    s: usize,
    coords: &[C64],
) -> Result<[SpherePoint; 3], Error> {
    let c = coords[tri.edge_of(t, s)];
    let apex = develop_across(pos, s, c)?;
    let (_, s2) = tri.glued(t, s);
    let mut out = [SpherePoint::infinity(); 3];
    out[s2] = pos[(s + 1) % 3];
    out[(s2 + 1) % 3] = pos[s % 3];
    out[(s2 + 2) % 3] = apex;
    Ok(out)
}

/// Tree development of the whole triangulation plus deck matrices for
/// the non-tree letters.
pub struct DevTree {
    pub pos: Vec<[SpherePoint; 3]>,
    pub letter_mat: Vec<Moebius>,
}

impl DevTree {
    pub fn new(
        tri: &IdealTriangulation,
        pres: &Presentation,
        coords: &[C64],
    ) -> Result<DevTree, Error> {
        let nt = tri.num_triangles();
        let mut pos: Vec<Option<[SpherePoint; 3]>> = vec![None; nt];
        pos[0] = Some(base_positions());
        // Parents form a tree rooted at 0; resolve in dependency order.
        let mut stack: Vec<usize> = (0..nt).collect();
        while let Some(t) = stack.pop() {
            if pos[t].is_some() {
                continue;
            }
            let (p, s) = pres.parent[t].expect("connected triangulation");
            if pos[p].is_none() {
                stack.push(t);
                stack.push(p);
                continue;
            }
            let parent_pos = pos[p].as_ref().unwrap();
            pos[t] = Some(neighbor_positions(tri, parent_pos, p, s, coords)?);
        }
        let pos: Vec<[SpherePoint; 3]> = pos.into_iter().map(|p| p.unwrap()).collect();

        // Deck matrix of letter l: crossing out of the positive side
        // lands in x_l * (tree lift of the partner triangle).
        let mut letter_mat = Vec::with_capacity(pres.letter_edge.len());
        for l in 0..pres.letter_edge.len() {
            let (tp, sp) = pres.positive_side[l];
            let (tn, sn) = tri.glued(tp, sp);
            let c = coords[tri.edge_of(tp, sp)];
            let apex = develop_across(&pos[tp], sp, c)?;
            let from = &pos[tn];
            let m = Moebius::map_triples(
                (&from[sn], &from[(sn + 1) % 3], &from[(sn + 2) % 3]),
                (&pos[tp][(sp + 1) % 3], &pos[tp][sp], &apex),
            )?;
            letter_mat.push(m);
        }
        Ok(DevTree { pos, letter_mat })
    }

    pub fn eval_word(&self, w: &Word) -> Moebius {
        let mut m = Moebius::identity();
        for &l in &w.0 {
            let id = (l.unsigned_abs() as usize) - 1;
            if l > 0 {
                m = m.compose(&self.letter_mat[id]);
            } else {
                m = m.compose(&self.letter_mat[id].inverse());
            }
        }
        m
    }

    /// Develops along a closed dual path based at its starting triangle
    /// and returns the holonomy (the map carrying the start frame to the
    /// final frame).
    pub fn path_holonomy(
        &self,
        tri: &IdealTriangulation,
        start: usize,
        path: &[(usize, usize)],
        coords: &[C64],
    ) -> Result<Moebius, Error> {
        let mut cur = self.pos[start];
        let mut at = start;
        for &(t, s) in path {
            if t != at {
                return Err(Error::Invalid(format!(
                    "path crossing ({t},{s}) does not start in triangle {at}"
                )));
            }
            cur = neighbor_positions(tri, &cur, t, s, coords)?;
            at = tri.glued(t, s).0;
        }
        if at != start {
            return Err(Error::Invalid("path is not a closed loop".into()));
        }
        let from = &self.pos[start];
        Moebius::map_triples(
            (&from[0], &from[1], &from[2]),
            (&cur[0], &cur[1], &cur[2]),
        )
    }
}

/// Validates Fock-Goncharov coordinates: finite, nonzero, and away from
/// the degeneracy guards.
pub fn validate_coords(tri: &IdealTriangulation, coords: &[C64]) -> Result<(), Error> {
    if coords.len() != tri.num_edges() {
        return Err(Error::Invalid(format!(
            "expected {} edge coordinates, found {}",
            tri.num_edges(),
            coords.len()
        )));
    }
    for (e, c) in coords.iter().enumerate() {
        let n = c.norm();
        if !n.is_finite() || n <= 1e-12 || n >= 1e12 {
            return Err(Error::DegenerateCoordinate(e));
        }
    }
    Ok(())
}
