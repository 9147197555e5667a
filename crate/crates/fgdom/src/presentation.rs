//! Standard presentations of punctured-surface groups adapted to an ideal
//! triangulation.
//!
//! Contracting a spanning tree of the dual graph collapses the spine to a
//! one-vertex ribbon graph whose loops are the free generators `x_e`, one
//! per non-tree edge. Band slides (Nielsen moves that keep the surface)
//! normalize its chord diagram to handle blocks followed by puncture
//! blocks, which exhibits a standard generating set a_1, b_1, ..., a_g,
//! b_g, c_1, ..., c_k with relation [a_1,b_1]...[a_g,b_g] c_1...c_k = 1
//! and each c_j conjugate to the link word of puncture j. Both change of
//! bases are tracked and verified exactly in the free group.

use crate::surface::{IdealTriangulation, Side};
use crate::word::Word;
use crate::Error;

#[derive(Debug, Clone)]
pub struct Presentation {
    /// Per edge: whether it belongs to the dual spanning tree.
    pub tree_edge: Vec<bool>,
    /// Per triangle: the side of the BFS parent crossed to reach it.
    pub parent: Vec<Option<Side>>,
    /// Non-tree edge behind each free letter.
    pub letter_edge: Vec<usize>,
    /// Edge -> free letter, for non-tree edges.
    pub edge_letter: Vec<Option<usize>>,
    /// Designated positive side of each letter's edge; crossing out of it
    /// is the positive generator.
    pub positive_side: Vec<Side>,
    /// Corner (t, v) -> word w with vertex position w * base(puncture).
    pub corner_word: Vec<[Word; 3]>,
    /// Per puncture: the corner whose vertex is the chosen base lift.
    pub base_corner: Vec<(usize, usize)>,
    /// Per puncture: stabilizer of the base lift (in x letters).
    pub link_word: Vec<Word>,
    /// Standard generator names a1, b1, ..., c1, ..., ck.
    pub gen_names: Vec<String>,
    /// Standard generators as words in the x letters.
    pub gen_words: Vec<Word>,
    /// Each x letter as a word in the standard generators.
    pub x_in_gens: Vec<Word>,
    /// Per puncture: (index of its c generator, conjugator u in x
    /// letters, sign e) with psi(c) = u * link_word^e * u^{-1}.
    pub periph: Vec<(usize, Word, i8)>,
}

impl Presentation {
    pub fn num_generators(&self) -> usize {
        self.gen_words.len()
    }

    pub fn genus(&self) -> usize {
        (self.gen_words.len() - self.periph.len()) / 2
    }

    pub fn new(tri: &IdealTriangulation) -> Result<Self, Error> {
        let nt = tri.num_triangles();
        let ne = tri.num_edges();

        // Dual spanning tree by BFS from triangle 0, sides in slot order.
        let mut tree_edge = vec![false; ne];
        let mut parent: Vec<Option<Side>> = vec![None; nt];
        let mut visited = vec![false; nt];
        visited[0] = true;
        let mut queue = std::collections::VecDeque::from([0usize]);
        while let Some(t) = queue.pop_front() {
            for s in 0..3 {
                let (t2, _) = tri.glued(t, s);
                if !visited[t2] {
                    visited[t2] = true;
                    tree_edge[tri.edge_of(t, s)] = true;
                    parent[t2] = Some((t, s));
                    queue.push_back(t2);
                }
            }
        }
        if visited.iter().any(|v| !v) {
            return Err(Error::Invalid("triangulation is not connected".into()));
        }

        let mut letter_edge = Vec::new();
        let mut edge_letter = vec![None; ne];
        let mut positive_side = Vec::new();
        for e in 0..ne {
            if !tree_edge[e] {
                edge_letter[e] = Some(letter_edge.len());
                positive_side.push(tri.edges[e][0]);
                letter_edge.push(e);
            }
        }

        // Corner words by walking each puncture link from its first corner.
        let mut corner_word: Vec<[Word; 3]> =
            vec![[Word::identity(), Word::identity(), Word::identity()]; nt];
        let mut base_corner = Vec::new();
        let mut link_word = Vec::new();
        for p in 0..tri.punctures {
            let cycle = &tri.links()[p];
            base_corner.push(cycle[0]);
            let mut acc = Word::identity();
            for (i, &(t, v)) in cycle.iter().enumerate() {
                if i > 0 {
                    corner_word[t][v] = acc.clone();
                }
                // Cross side (t, v) to the next corner.
                let e = tri.edge_of(t, v);
                if let Some(l) = edge_letter[e] {
                    let step = if positive_side[l] == (t, v) {
                        Word::letter(l, false)
                    } else {
                        Word::letter(l, true)
                    };
                    acc = step.concat(&acc);
                }
            }
            link_word.push(acc);
        }

        // Initial one-vertex ribbon graph: stub order from the boundary
        // walk of the fattened spanning tree.
        let mut rose = Rose::from_tree(tri, &tree_edge, &edge_letter, &positive_side);
        let k = tri.punctures;
        debug_assert_eq!(rose.face_count(), k);

        let blocks = rose.canonicalize(k)?;
        let (gen_names, gen_words, x_in_gens, c_words) =
            rose.extract(&blocks, tri.genus, k)?;

        // Verify phi and psi are mutually inverse on every letter.
        for (l, phi) in x_in_gens.iter().enumerate() {
            let back = phi.substitute(&gen_words);
            if back != Word::letter(l, true) {
                return Err(Error::Invalid(format!(
                    "presentation self-check failed: psi(phi(x{l})) = {back}"
                )));
            }
        }
        // Verify the surface relation reduces to the identity.
        let g = tri.genus;
        let mut relation = Word::identity();
        for i in 0..g {
            let a = &gen_words[2 * i];
            let b = &gen_words[2 * i + 1];
            relation = relation
                .concat(a)
                .concat(b)
                .concat(&a.inverse())
                .concat(&b.inverse());
        }
        for c in &c_words {
            relation = relation.concat(c);
        }
        if !relation.is_identity() {
            return Err(Error::Invalid(format!(
                "presentation self-check failed: relation reduces to {relation}"
            )));
        }

        // Match each c to a puncture by conjugacy with the link words,
        // then braid the c block until c_j belongs to puncture j.
        let mut c_words = c_words;
        let mut c_puncture = vec![usize::MAX; k];
        for (j, c) in c_words.iter().enumerate() {
            let mut found = None;
            for p in 0..k {
                if c.conjugator_to(&link_word[p]).is_some() {
                    if found.is_some() {
                        return Err(Error::Invalid(format!(
                            "peripheral word c{} matches two link words",
                            j + 1
                        )));
                    }
                    found = Some(p);
                }
            }
            c_puncture[j] = found.ok_or_else(|| {
                Error::Invalid(format!(
                    "peripheral word c{} matches no puncture link",
                    j + 1
                ))
            })?;
        }
        {
            let mut hit = vec![false; k];
            for &p in &c_puncture {
                hit[p] = true;
            }
            if !hit.iter().all(|&h| h) {
                return Err(Error::Invalid(
                    "peripheral words do not hit every puncture".into(),
                ));
            }
        }
        let mut gen_words = gen_words;
        let mut x_in_gens = x_in_gens;
        // Bubble sort with braid moves: swapping adjacent (c_i, c_{i+1})
        // to (c_i c_{i+1} c_i^{-1}, c_i) preserves the relation.
        loop {
            let mut swapped = false;
            for i in 0..k - 1 {
                if c_puncture[i] > c_puncture[i + 1] {
                    let ci = c_words[i].clone();
                    let cj = c_words[i + 1].clone();
                    c_words[i] = ci.concat(&cj).concat(&ci.inverse());
                    c_words[i + 1] = ci.clone();
                    c_puncture.swap(i, i + 1);
                    // Old letters in terms of new: old_ci = new_cj,
                    // old_cj = new_cj^{-1} new_ci new_cj.
                    let gi = 2 * tri.genus + i;
                    let gj = gi + 1;
                    let mut images: Vec<Word> = (0..gen_words.len())
                        .map(|l| Word::letter(l, true))
                        .collect();
                    images[gi] = Word::letter(gj, true);
                    images[gj] = Word::letter(gj, false)
                        .concat(&Word::letter(gi, true))
                        .concat(&Word::letter(gj, true));
                    for phi in x_in_gens.iter_mut() {
                        *phi = phi.substitute(&images);
                    }
                    swapped = true;
                }
            }
            if !swapped {
                break;
            }
        }
        for (j, c) in c_words.iter().enumerate() {
            gen_words[2 * tri.genus + j] = c.clone();
        }
        // Re-verify the inverse property after braiding.
        for (l, phi) in x_in_gens.iter().enumerate() {
            let back = phi.substitute(&gen_words);
            if back != Word::letter(l, true) {
                return Err(Error::Invalid(format!(
                    "presentation self-check failed after braiding on x{l}"
                )));
            }
        }

        let mut periph = Vec::with_capacity(k);
        for p in 0..k {
            let j = c_puncture.iter().position(|&q| q == p).unwrap();
            let c = &c_words[j];
            let (u, sign) = c
                .conjugator_to(&link_word[p])
                .ok_or_else(|| Error::Invalid("conjugator lost after braiding".into()))?;
            // Sanity: c = u link^sign u^{-1} exactly.
            let core = if sign > 0 {
                link_word[p].clone()
            } else {
                link_word[p].inverse()
            };
            let rebuilt = u.concat(&core).concat(&u.inverse()).reduce();
            if &rebuilt != c {
                return Err(Error::Invalid("bad conjugator extraction".into()));
            }
            periph.push((2 * tri.genus + j, u, sign));
        }

        let mut gen_names = gen_names;
        gen_names.truncate(0);
        for i in 0..tri.genus {
            gen_names.push(format!("a{}", i + 1));
            gen_names.push(format!("b{}", i + 1));
        }
        for j in 0..k {
            gen_names.push(format!("c{}", j + 1));
        }

        Ok(Presentation {
            tree_edge,
            parent,
            letter_edge,
            edge_letter,
            positive_side,
            corner_word,
            base_corner,
            link_word,
            gen_names,
            gen_words,
            x_in_gens,
            periph,
        })
    }

    /// Crossings from the base triangle to `t` along the spanning tree.
    pub fn tree_path_to(&self, t: usize) -> Vec<Side> {
        let mut path = Vec::new();
        let mut cur = t;
        while let Some((p, s)) = self.parent[cur] {
            path.push((p, s));
            cur = p;
        }
        path.reverse();
        path
    }

    /// Closed dual path of the free letter `l`, based at triangle 0:
    /// tree out to the positive side, cross, tree back.
    pub fn letter_loop(&self, tri: &IdealTriangulation, l: usize, positive: bool) -> Vec<Side> {
        let (tp, sp) = self.positive_side[l];
        let (tn, sn) = tri.glued(tp, sp);
        let (first, cross, back_from) = if positive {
            (tp, (tp, sp), tn)
        } else {
            (tn, (tn, sn), tp)
        };
        let mut path = self.tree_path_to(first);
        path.push(cross);
        let mut back = self.tree_path_to(back_from);
        back.reverse();
        for (t, s) in back {
            path.push(tri.glued(t, s));
        }
        simplify_path(tri, path)
    }

    /// Closed dual path of a word in the x letters, based at triangle 0.
    pub fn word_loop(&self, tri: &IdealTriangulation, w: &Word) -> Vec<Side> {
        let mut path = Vec::new();
        for &l in &w.0 {
            let id = (l.unsigned_abs() as usize) - 1;
            path.extend(self.letter_loop(tri, id, l > 0));
        }
        simplify_path(tri, path)
    }

    /// Closed dual path of standard generator `gen`.
    pub fn generator_loop(&self, tri: &IdealTriangulation, gen: usize) -> Vec<Side> {
        self.word_loop(tri, &self.gen_words[gen])
    }
}

/// Removes immediate backtracks (crossing a side and coming right back).
pub fn simplify_path(tri: &IdealTriangulation, mut path: Vec<Side>) -> Vec<Side> {
    loop {
        let mut out: Vec<Side> = Vec::with_capacity(path.len());
        let mut changed = false;
        for step in path {
            if let Some(&last) = out.last() {
                if tri.glued(last.0, last.1) == step {
                    out.pop();
                    changed = true;
                    continue;
                }
            }
            out.push(step);
        }
        if !changed {
            return out;
        }
        path = out;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Block {
    Handle { x: usize, y: usize },
    Tail { t: usize },
}

/// One-vertex ribbon graph with tracked change of basis.
struct Rose {
    /// Cyclic stub order: (letter, is_positive_end).
    order: Vec<(usize, bool)>,
    /// Current letter -> word in the original x letters.
    psi: Vec<Word>,
    /// Original x letter -> word in the current letters.
    phi: Vec<Word>,
}

impl Rose {
    fn from_tree(
        tri: &IdealTriangulation,
        tree_edge: &[bool],
        edge_letter: &[Option<usize>],
        positive_side: &[Side],
    ) -> Rose {
        let mut order = Vec::new();
        // Boundary walk of the fattened tree, emitting non-tree stubs.
        fn walk(
            tri: &IdealTriangulation,
            t: usize,
            entry: Option<usize>,
            tree_edge: &[bool],
            edge_letter: &[Option<usize>],
            positive_side: &[Side],
            order: &mut Vec<(usize, bool)>,
        ) {
            let (start, count) = match entry {
                Some(s) => (s + 1, 2),
                None => (0, 3),
            };
            for i in 0..count {
                let s = (start + i) % 3;
                let e = tri.edge_of(t, s);
                if tree_edge[e] {
                    let (t2, s2) = tri.glued(t, s);
                    walk(tri, t2, Some(s2), tree_edge, edge_letter, positive_side, order);
                } else {
                    let l = edge_letter[e].unwrap();
                    order.push((l, positive_side[l] == (t, s)));
                }
            }
        }
        walk(tri, 0, None, tree_edge, edge_letter, positive_side, &mut order);
        let n = positive_side.len();
        debug_assert_eq!(order.len(), 2 * n);
        Rose {
            order,
            psi: (0..n).map(|l| Word::letter(l, true)).collect(),
            phi: (0..n).map(|l| Word::letter(l, true)).collect(),
        }
    }

    fn len(&self) -> usize {
        self.order.len()
    }

    fn find(&self, stub: (usize, bool)) -> usize {
        self.order.iter().position(|&s| s == stub).unwrap()
    }

    fn partner_pos(&self, pos: usize) -> usize {
        let (l, sign) = self.order[pos];
        self.find((l, !sign))
    }

    /// Number of boundary walks (faces) of the ribbon graph.
    fn face_count(&self) -> usize {
        let n = self.len();
        if n == 0 {
            return 1;
        }
        // Gap g sits immediately before stub g; crossing the band of
        // stub g continues at the gap after its partner.
        let mut seen = vec![false; n];
        let mut count = 0;
        for g0 in 0..n {
            if seen[g0] {
                continue;
            }
            count += 1;
            let mut g = g0;
            loop {
                seen[g] = true;
                g = (self.partner_pos(g) + 1) % n;
                if g == g0 {
                    break;
                }
            }
        }
        count
    }

    /// Inverts a letter's orientation everywhere.
    fn invert_letter(&mut self, l: usize) {
        for stub in self.order.iter_mut() {
            if stub.0 == l {
                stub.1 = !stub.1;
            }
        }
        self.psi[l] = self.psi[l].inverse();
        let flip = (l + 1) as i32;
        for phi in self.phi.iter_mut() {
            for x in phi.0.iter_mut() {
                if x.abs() == flip {
                    *x = -*x;
                }
            }
        }
    }

    /// Slides the stub adjacent to `pos` (after it if `after`, else
    /// before it) over the band at `pos`, landing next to the partner
    /// end: before the partner for `after`-slides, after it otherwise.
    fn slide(&mut self, pos: usize, after: bool) {
        let n = self.len();
        let (b, u) = self.order[pos];
        let mover_pos = if after { (pos + 1) % n } else { (pos + n - 1) % n };
        let (a, s) = self.order[mover_pos];
        assert_ne!(a, b, "cannot slide a stub over its own band");
        // Loop update: new a-path rides the b band first (positive end
        // moved) or last (negative end moved).
        if s {
            let factor = if u {
                self.psi[b].inverse()
            } else {
                self.psi[b].clone()
            };
            self.psi[a] = factor.concat(&self.psi[a]);
        } else {
            let factor = if u {
                self.psi[b].clone()
            } else {
                self.psi[b].inverse()
            };
            self.psi[a] = self.psi[a].concat(&factor);
        }
        // phi rewrite: express the old letter in the new basis.
        // s = +: new = b^{-u} old  =>  old = b^{u} new
        // s = -: new = old b^{u}   =>  old = new b^{-u}
        let mut images: Vec<Word> = (0..self.psi.len())
            .map(|l| Word::letter(l, true))
            .collect();
        images[a] = if s {
            Word::letter(b, u).concat(&Word::letter(a, true))
        } else {
            Word::letter(a, true).concat(&Word::letter(b, !u))
        };
        for phi in self.phi.iter_mut() {
            *phi = phi.substitute(&images);
        }
        // Positional rewrite.
        self.order.remove(mover_pos);
        let ppos = self.find((b, !u));
        let insert_at = if after { ppos } else { ppos + 1 };
        self.order.insert(insert_at, (a, s));
    }

    /// Normalizes the chord diagram to handle blocks then tail blocks,
    /// consuming the zone left to right. `expected_faces` is asserted
    /// after every slide.
    fn canonicalize(&mut self, expected_faces: usize) -> Result<Vec<Block>, Error> {
        let mut blocks = Vec::new();
        let mut done = 0usize;
        while done < self.len() {
            let consumed = self.canonicalize_zone(done, self.len(), expected_faces)?;
            let start = done;
            done += consumed;
            // Record the blocks formed at the front of this zone.
            let mut i = start;
            while i < done {
                let (x, xs) = self.order[i];
                debug_assert!(xs);
                if self.order[i + 1].0 == x {
                    blocks.push(Block::Tail { t: x });
                    i += 2;
                } else {
                    let (y, _) = self.order[i + 1];
                    blocks.push(Block::Handle { x, y });
                    i += 4;
                }
            }
        }
        // Transport tails to the right of handles.
        loop {
            let parsed = self.parse_blocks()?;
            let mut acted = false;
            for w in parsed.windows(2) {
                if let (Block::Tail { t }, Block::Handle { x, y }) = (w[0].0, w[1].0) {
                    // Move the tail's stubs right across the handle.
                    for stub in [(t, false), (t, true)] {
                        for over in [(x, true), (y, false), (x, false), (y, true)] {
                            let pos = self.find(over);
                            debug_assert_eq!(self.order[(pos + self.len() - 1) % self.len()], stub);
                            self.slide(pos, false);
                            debug_assert_eq!(self.face_count(), expected_faces);
                        }
                    }
                    acted = true;
                    break;
                }
            }
            if !acted {
                break;
            }
        }
        let parsed = self.parse_blocks()?;
        Ok(parsed.into_iter().map(|(b, _)| b).collect())
    }

    fn parse_blocks(&self) -> Result<Vec<(Block, usize)>, Error> {
        let mut out = Vec::new();
        let mut i = 0;
        while i < self.len() {
            let (x, xs) = self.order[i];
            if !xs {
                return Err(Error::Invalid("unnormalized block sign".into()));
            }
            if self.order[i + 1].0 == x {
                out.push((Block::Tail { t: x }, i));
                i += 2;
            } else {
                let (y, ys) = self.order[i + 1];
                if !ys
                    || self.order.get(i + 2) != Some(&(x, false))
                    || self.order.get(i + 3) != Some(&(y, false))
                {
                    return Err(Error::Invalid("unrecognized block pattern".into()));
                }
                out.push((Block::Handle { x, y }, i));
                i += 4;
            }
        }
        Ok(out)
    }

    /// Canonicalizes the stubs in positions [start, end); returns how
    /// many stubs were finalized at the zone front.
    fn canonicalize_zone(
        &mut self,
        start: usize,
        end: usize,
        faces: usize,
    ) -> Result<usize, Error> {
        let e = self.order[start].0;
        if !self.order[start].1 {
            self.invert_letter(e);
        }
        let epos = start;
        let eneg = self.find((e, false));
        if eneg >= end || eneg <= epos {
            return Err(Error::Invalid("zone is not pair-complete".into()));
        }
        // First interleaver: a stub inside (epos, eneg) whose partner
        // lies beyond eneg.
        let mut interleaver = None;
        for q in (epos + 1)..eneg {
            let p = self.partner_pos(q);
            if p > eneg {
                interleaver = Some(q);
                break;
            }
        }
        if let Some(q) = interleaver {
            let f = self.order[q].0;
            if !self.order[q].1 {
                self.invert_letter(f);
            }
            // Drain the three arcs between the four stubs so the block
            // e+ f+ e- f- becomes contiguous; every landing stays inside
            // the zone and to the right of the block.
            loop {
                // A3: between e- and f-.
                let fneg = self.find((f, false));
                let before = self.order[(fneg + self.len() - 1) % self.len()];
                if before == (e, false) {
                    break;
                }
                self.slide(fneg, false);
                debug_assert_eq!(self.face_count(), faces);
            }
            loop {
                // A2: between f+ and e-.
                let eneg = self.find((e, false));
                let before = self.order[(eneg + self.len() - 1) % self.len()];
                if before == (f, true) {
                    break;
                }
                self.slide(eneg, false);
                debug_assert_eq!(self.face_count(), faces);
            }
            loop {
                // A1: between e+ and f+.
                let fpos = self.find((f, true));
                let before = self.order[(fpos + self.len() - 1) % self.len()];
                if before == (e, true) {
                    break;
                }
                self.slide(fpos, false);
                debug_assert_eq!(self.face_count(), faces);
            }
            debug_assert_eq!(self.order[epos], (e, true));
            debug_assert_eq!(self.order[epos + 1], (f, true));
            debug_assert_eq!(self.order[epos + 2], (e, false));
            debug_assert_eq!(self.order[epos + 3], (f, false));
            return Ok(4);
        }
        if eneg == epos + 1 {
            return Ok(2);
        }
        // Nested, non-interleaved interior: canonicalize it, then walk
        // e- leftward across the finished interior blocks.
        {
            let mut inner_start = epos + 1;
            let inner_end = eneg;
            while inner_start < self.find((e, false)) {
                let consumed = self.canonicalize_zone(inner_start, inner_end, faces)?;
                inner_start += consumed;
            }
        }
        // Parse the interior blocks for the crossing recipes.
        let mut inner_blocks = Vec::new();
        {
            let mut i = epos + 1;
            let eneg = self.find((e, false));
            while i < eneg {
                let (x, _) = self.order[i];
                if self.order[i + 1].0 == x {
                    inner_blocks.push(Block::Tail { t: x });
                    i += 2;
                } else {
                    inner_blocks.push(Block::Handle { x: x, y: self.order[i + 1].0 });
                    i += 4;
                }
            }
        }
        for block in inner_blocks.iter().rev() {
            match *block {
                Block::Tail { t } => {
                    let pos = self.find((t, false));
                    debug_assert_eq!(self.order[(pos + 1) % self.len()], (e, false));
                    self.slide(pos, true);
                    debug_assert_eq!(self.face_count(), faces);
                }
                Block::Handle { x, y } => {
                    for over in [(y, false), (x, true), (y, true), (x, false)] {
                        let pos = self.find(over);
                        debug_assert_eq!(self.order[(pos + 1) % self.len()], (e, false));
                        self.slide(pos, true);
                        debug_assert_eq!(self.face_count(), faces);
                    }
                }
            }
        }
        debug_assert_eq!(self.order[epos + 1], (e, false));
        Ok(2)
    }

    /// Reads the standard generators off the canonical block sequence.
    #[allow(clippy::type_complexity)]
    fn extract(
        &self,
        blocks: &[Block],
        genus: usize,
        punctures: usize,
    ) -> Result<(Vec<String>, Vec<Word>, Vec<Word>, Vec<Word>), Error> {
        let handles: Vec<(usize, usize)> = blocks
            .iter()
            .filter_map(|b| match *b {
                Block::Handle { x, y } => Some((x, y)),
                _ => None,
            })
            .collect();
        let tails: Vec<usize> = blocks
            .iter()
            .filter_map(|b| match *b {
                Block::Tail { t } => Some(t),
                _ => None,
            })
            .collect();
        if handles.len() != genus || tails.len() != punctures - 1 {
            return Err(Error::Invalid(format!(
                "canonical form has {} handles and {} tails, expected {} and {}",
                handles.len(),
                tails.len(),
                genus,
                punctures - 1
            )));
        }
        let num_gens = 2 * genus + punctures;
        let mut gen_words = vec![Word::identity(); num_gens];
        // Handle block <x+ y+ x- y-> contributes a_i = x, b_i = y^{-1}:
        // its boundary walk reads x y^{-1} x^{-1} y = [a_i, b_i].
        for (i, &(x, y)) in handles.iter().enumerate() {
            gen_words[2 * i] = self.psi[x].clone();
            gen_words[2 * i + 1] = self.psi[y].inverse();
        }
        for (j, &t) in tails.iter().enumerate() {
            gen_words[2 * genus + j] = self.psi[t].clone();
        }
        // c_k closes the relation.
        let mut prefix = Word::identity();
        for i in 0..genus {
            let a = &gen_words[2 * i];
            let b = &gen_words[2 * i + 1];
            prefix = prefix
                .concat(a)
                .concat(b)
                .concat(&a.inverse())
                .concat(&b.inverse());
        }
        for j in 0..punctures - 1 {
            prefix = prefix.concat(&gen_words[2 * genus + j]);
        }
        gen_words[2 * genus + punctures - 1] = prefix.inverse();

        // phi: current rose letters -> standard generator letters.
        let mut role = vec![Word::identity(); self.psi.len()];
        for (i, &(x, y)) in handles.iter().enumerate() {
            role[x] = Word::letter(2 * i, true);
            role[y] = Word::letter(2 * i + 1, false);
        }
        for (j, &t) in tails.iter().enumerate() {
            role[t] = Word::letter(2 * genus + j, true);
        }
        let x_in_gens: Vec<Word> = self.phi.iter().map(|w| w.substitute(&role)).collect();

        let names = vec![String::new(); num_gens];
        let c_words = (0..punctures)
            .map(|j| gen_words[2 * genus + j].clone())
            .collect();
        Ok((names, gen_words, x_in_gens, c_words))
    }
}

// path_word needs edge_letter lookup through the triangulation; done as a
// free function to keep borrowck simple.
pub fn path_letter_word(
    pres: &Presentation,
    tri: &IdealTriangulation,
    path: &[Side],
) -> Word {
    let mut w = Word::identity();
    for &(t, s) in path {
        let e = tri.edge_of(t, s);
        if let Some(l) = pres.edge_letter[e] {
            let positive = pres.positive_side[l] == (t, s % 3);
            w = w.concat(&Word::letter(l, positive));
        }
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::standard_triangulation;

    fn check_presentation(tri: &IdealTriangulation) {
        let p = Presentation::new(tri).expect("presentation construction");
        assert_eq!(p.gen_words.len(), 2 * tri.genus + tri.punctures);
        // Peripheral assignment c_j <-> puncture j-1.
        for (pu, (c_idx, u, sign)) in p.periph.iter().enumerate() {
            assert_eq!(*c_idx, 2 * tri.genus + pu);
            let core = if *sign > 0 {
                p.link_word[pu].clone()
            } else {
                p.link_word[pu].inverse()
            };
            let rebuilt = u.concat(&core).concat(&u.inverse()).reduce();
            assert_eq!(rebuilt, p.gen_words[*c_idx]);
        }
        // Generator loops are closed, based at triangle 0, and carry the
        // same spine class as the generator word.
        for g in 0..p.gen_words.len() {
            let path = p.generator_loop(tri, g);
            let mut at = 0usize;
            for &(t, s) in &path {
                assert_eq!(t, at, "path is connected");
                at = tri.glued(t, s).0;
            }
            assert_eq!(at, 0, "generator loop closes at the base triangle");
            let w = path_letter_word(&p, tri, &path);
            assert_eq!(w.reduce(), p.gen_words[g].reduce());
        }
    }

    #[test]
    fn torus_presentation() {
        let tri = standard_triangulation(1, 1).unwrap();
        check_presentation(&tri);
        let p = Presentation::new(&tri).unwrap();
        assert_eq!(p.gen_names, vec!["a1", "b1", "c1"]);
        // c1 = [a1, b1]^{-1} as words.
        let a = &p.gen_words[0];
        let b = &p.gen_words[1];
        let comm = a
            .concat(b)
            .concat(&a.inverse())
            .concat(&b.inverse());
        assert_eq!(comm.concat(&p.gen_words[2]).reduce(), Word::identity());
    }

    #[test]
    fn pair_of_pants_presentation() {
        let tri = standard_triangulation(0, 3).unwrap();
        check_presentation(&tri);
        let p = Presentation::new(&tri).unwrap();
        assert_eq!(p.gen_names, vec!["c1", "c2", "c3"]);
    }

    #[test]
    fn presentations_across_surfaces_and_flips() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for (g, k) in [(1usize, 1usize), (0, 3), (1, 2), (2, 1), (0, 4), (1, 3), (2, 2)] {
            let mut tri = standard_triangulation(g, k).unwrap();
            check_presentation(&tri);
            // Random flip walks keep the machinery sound.
            for _ in 0..6 {
                let e = rng.random_range(0..tri.num_edges());
                if let Ok(next) = tri.flip(e) {
                    tri = next;
                    check_presentation(&tri);
                }
            }
        }
    }
}
