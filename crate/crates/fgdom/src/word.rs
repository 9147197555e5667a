//! Minimal free-group machinery: words over signed letters with free and
//! cyclic reduction, substitution, and conjugacy testing. Letters are
//! nonzero i32 values; `-x` is the inverse of `x`, and letter ids start
//! at 1.

pub type Letter = i32;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn letter(id: usize, positive: bool) -> Self {
        let l = (id + 1) as i32;
        Word(vec![if positive { l } else { -l }])
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| -l).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut out = self.0.clone();
        for &l in &other.0 {
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    pub fn reduce(&self) -> Word {
        Word::identity().concat(self)
    }

    /// Writes `self = u · core · u^{-1}` with `core` cyclically reduced.
    pub fn cyclic_reduce(&self) -> (Word, Word) {
        let w = self.reduce();
        let mut lo = 0usize;
        let mut hi = w.0.len();
        while hi > lo + 1 && w.0[lo] == -w.0[hi - 1] {
            lo += 1;
            hi -= 1;
        }
        (Word(w.0[..lo].to_vec()), Word(w.0[lo..hi].to_vec()))
    }

    /// Replaces each letter by `images[id]` (respecting inversion) and
    /// freely reduces.
    pub fn substitute(&self, images: &[Word]) -> Word {
        let mut out = Word::identity();
        for &l in &self.0 {
            let id = (l.unsigned_abs() as usize) - 1;
            let img = &images[id];
            if l > 0 {
                out = out.concat(img);
            } else {
                out = out.concat(&img.inverse());
            }
        }
        out
    }

    /// If `self` and `other` are conjugate, returns `u` with
    /// `self = u · other^{±1} · u^{-1}`, preferring the `+1` match.
    pub fn conjugator_to(&self, other: &Word) -> Option<(Word, i8)> {
        for (cand, sign) in [(other.clone(), 1i8), (other.inverse(), -1i8)] {
            let (u1, core1) = self.cyclic_reduce();
            let (u2, core2) = cand.cyclic_reduce();
            if core1.0.len() != core2.0.len() {
                continue;
            }
            if core1.0.is_empty() {
                return Some((Word::identity(), sign));
            }
            let n = core2.0.len();
            for k in 0..n {
                let rotated: Vec<Letter> =
                    core2.0[k..].iter().chain(core2.0[..k].iter()).copied().collect();
                if rotated == core1.0 {
                    // rotate_k(s) = p^{-1} s p with p the first k letters:
                    // self = u1 p^{-1} u2^{-1} · cand · (...)^{-1}.
                    let p = Word(core2.0[..k].to_vec());
                    let u = u1.concat(&p.inverse()).concat(&u2.inverse());
                    return Some((u.reduce(), sign));
                }
            }
        }
        None
    }
}

impl std::fmt::Display for Word {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for &l in &self.0 {
            if l > 0 {
                write!(f, " x{}", l)?;
            } else {
                write!(f, " x{}^-1", -l)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction_and_inverse() {
        let a = Word::letter(0, true);
        let b = Word::letter(1, true);
        let w = a.concat(&b).concat(&b.inverse()).concat(&a);
        assert_eq!(w.0, vec![1, 1]);
        assert!(w.concat(&w.inverse()).is_identity());
    }

    #[test]
    fn cyclic_reduce_strips_conjugation() {
        let a = Word::letter(0, true);
        let b = Word::letter(1, true);
        let w = a.concat(&b).concat(&a.inverse());
        let (u, core) = w.cyclic_reduce();
        assert_eq!(u.0, vec![1]);
        assert_eq!(core.0, vec![2]);
    }

    #[test]
    fn conjugator_found_and_verifies() {
        let a = Word::letter(0, true);
        let b = Word::letter(1, true);
        let core = a.concat(&b).concat(&a).reduce();
        let u0 = b.concat(&a.inverse()).concat(&b);
        let w = u0.concat(&core).concat(&u0.inverse()).reduce();
        let (u, sign) = w.conjugator_to(&core).unwrap();
        assert_eq!(sign, 1);
        let rebuilt = u.concat(&core).concat(&u.inverse()).reduce();
        assert_eq!(rebuilt, w);
        // Inverse match.
        let (u, sign) = w.conjugator_to(&core.inverse()).unwrap();
        assert_eq!(sign, -1);
        let rebuilt = u.concat(&core).concat(&u.inverse()).reduce();
        assert_eq!(rebuilt, w);
    }

    #[test]
    fn substitution_composes() {
        // x0 -> ab, x1 -> b^{-1}; then x0 x1 -> a.
        let a = Word::letter(0, true);
        let b = Word::letter(1, true);
        let images = vec![a.concat(&b), b.inverse()];
        let w = Word(vec![1, 2]);
        assert_eq!(w.substitute(&images).0, vec![1]);
    }
}
