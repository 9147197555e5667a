//! Length-spectrum comparison and domination certificates: the sup of
//! ρ-length over j-length across enumerated essential non-peripheral
//! simple closed curves, with a boundary-length audit.

use crate::curves::{enumerate_simple, EnumeratedCurve};
use crate::devtree::DevTree;
use crate::moebius::{bend_angle_beta, bent_endpoint_distance, Moebius};
use crate::pleat::{bending_data, is_real_positive, straighten};
use crate::presentation::Presentation;
use crate::representation::{
    detect_degeneracy, fg_from_framed, link_sums, DegeneracyClass, FramedRepresentation,
};
use crate::surface::{standard_triangulation, IdealTriangulation, NormalCurve};
use crate::word::Word;
use crate::{Error, Tolerances};
use num_complex::Complex64 as C64;
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Strict,
    NonStrict,
    Violated,
    UnsupportedConstruction,
}

#[derive(Debug, Clone)]
pub struct CurveReport {
    pub curve: NormalCurve,
    pub l_rho: f64,
    pub l_j: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone)]
pub struct BoundaryAudit {
    pub puncture: usize,
    /// Prescribed boundary length (from the reference Fuchsian deck).
    pub target: f64,
    pub l_j: f64,
    pub l_rho: f64,
}

#[derive(Debug, Clone)]
pub struct DominationCertificate {
    pub verdict: Verdict,
    pub sup_ratio: f64,
    pub witness: Option<NormalCurve>,
    pub curves: Vec<CurveReport>,
    pub boundary: Vec<BoundaryAudit>,
    pub max_weight: u64,
}

/// The compared representation: either edge coordinates over the same
/// triangulation or a framed representation (whose lengths come from
/// word evaluation, so degenerate inputs are measured honestly).
pub enum RhoInput<'a> {
    Coordinates(&'a [C64]),
    Framed(&'a FramedRepresentation),
}

pub(crate) struct WordEvaluator {
    letter_mat: Vec<Moebius>,
}

impl WordEvaluator {
    pub(crate) fn new(pres: &Presentation, rep: &FramedRepresentation) -> Self {
        WordEvaluator {
            letter_mat: pres.x_in_gens.iter().map(|w| rep.eval(w)).collect(),
        }
    }

    pub(crate) fn eval(&self, w: &Word) -> Moebius {
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
}

/// Compares ρ against the Fuchsian reference j over every enumerated
/// curve and audits the boundary lengths. Strict verdicts require the
/// sup ratio below 1 − strict_margin and a passing audit.
pub fn dominate(
    tri: &IdealTriangulation,
    rho: RhoInput<'_>,
    j_coords: &[C64],
    max_weight: u64,
    tol: &Tolerances,
    budget: usize,
) -> Result<DominationCertificate, Error> {
    if !is_real_positive(j_coords) {
        return Err(Error::Invalid(
            "the dominating side must be real positive coordinates".into(),
        ));
    }
    let pres = Presentation::new(tri)?;
    let curves = enumerate_simple(tri, &pres, max_weight, budget)?;
    // Lengths are evaluated through the spine words on the deck
    // matrices: products of bounded factors stay stable for long curves
    // where a vertex-by-vertex development would underflow.
    let dev_j = DevTree::new(tri, &pres, j_coords)?;
    let dev_rho = match &rho {
        RhoInput::Coordinates(x) => Some(DevTree::new(tri, &pres, x)?),
        RhoInput::Framed(_) => None,
    };
    let evaluator = match &rho {
        RhoInput::Framed(rep) => Some(WordEvaluator::new(&pres, rep)),
        RhoInput::Coordinates(_) => None,
    };

    let reports: Vec<CurveReport> = curves
        .par_iter()
        .map(|c: &EnumeratedCurve| -> Result<CurveReport, Error> {
            let l_j = dev_j.eval_word(&c.letter_word).translation_length();
            if l_j <= 1e-12 {
                return Err(Error::ZeroDenominator(c.curve.weights.clone()));
            }
            let l_rho = match &rho {
                RhoInput::Coordinates(_) => dev_rho
                    .as_ref()
                    .unwrap()
                    .eval_word(&c.letter_word)
                    .translation_length(),
                RhoInput::Framed(_) => evaluator
                    .as_ref()
                    .unwrap()
                    .eval(&c.letter_word)
                    .translation_length(),
            };
            let ratio = if l_rho <= 1e-12 { 0.0 } else { l_rho / l_j };
            Ok(CurveReport { curve: c.curve.clone(), l_rho, l_j, ratio })
        })
        .collect::<Result<Vec<_>, Error>>()?;

    let mut sup_ratio = 0.0f64;
    let mut witness = None;
    for r in &reports {
        if r.ratio > sup_ratio {
            sup_ratio = r.ratio;
            witness = Some(r.curve.clone());
        }
    }

    let mut boundary = Vec::with_capacity(tri.punctures);
    for p in 0..tri.punctures {
        let l_j = link_sums(tri, j_coords, p).0.abs();
        let l_rho = match &rho {
            RhoInput::Coordinates(x) => link_sums(tri, x, p).0.abs(),
            RhoInput::Framed(rep) => rep.peripheral(p).translation_length(),
        };
        boundary.push(BoundaryAudit { puncture: p, target: l_j, l_j, l_rho });
    }

    let audit_ok = boundary
        .iter()
        .all(|b| (b.l_rho - b.target).abs() <= tol.check && (b.l_j - b.target).abs() <= tol.check);
    let verdict = if !audit_ok || sup_ratio > 1.0 + tol.strict_margin {
        Verdict::Violated
    } else if sup_ratio < 1.0 - tol.strict_margin {
        Verdict::Strict
    } else {
        Verdict::NonStrict
    };
    Ok(DominationCertificate {
        verdict,
        sup_ratio,
        witness,
        curves: reports,
        boundary,
        max_weight,
    })
}

/// Filling case of the domination pipeline: straightening the pleated
/// plane of a non-degenerate representation with filling bending support
/// yields a strictly dominating Fuchsian representation with the same
/// boundary lengths.
pub fn strict_dominator_filling(
    rep: &FramedRepresentation,
    max_weight: u64,
    tol: &Tolerances,
    budget: usize,
) -> Result<(Vec<C64>, DominationCertificate), Error> {
    if detect_degeneracy(rep, tol) != DegeneracyClass::Nondegenerate {
        return Err(Error::DegenerateInput);
    }
    let coords = fg_from_framed(rep)?;
    let data = bending_data(&rep.triangulation, &coords)?;
    if !data.filling {
        return Err(Error::NotFilling);
    }
    let j0 = straighten(&coords);
    let cert = dominate(
        &rep.triangulation,
        RhoInput::Coordinates(&coords),
        &j0,
        max_weight,
        tol,
        budget,
    )?;
    Ok((j0, cert))
}

/// Per-crossing length gap from the bending trigonometry: the loss of
/// endpoint distance when a segment with arms of length at least L,
/// meeting the pleating line at angle at least alpha, is bent by at
/// least theta. Minimized at equal arms of length exactly L.
pub fn trig_gap(l: f64, alpha: f64, theta: f64) -> Result<f64, Error> {
    if l <= 0.0 {
        return Err(Error::Invalid("trig_gap needs a positive arm length".into()));
    }
    if !(0.0 < alpha && alpha <= std::f64::consts::PI / 2.0 + 1e-12) {
        return Err(Error::Invalid("alpha outside (0, pi/2]".into()));
    }
    if theta == 0.0 {
        return Err(Error::ZeroBend);
    }
    let beta = bend_angle_beta(alpha, theta.abs());
    Ok(2.0 * l - bent_endpoint_distance(l, l, beta))
}

/// Degenerate case (a): with every image parabolic or identity the
/// ρ-lengths vanish identically, so any cusped Fuchsian structure
/// strictly dominates. Returns the standard triangulation, the all-ones
/// cusped coordinates, and the ratio-zero certificate.
pub fn degenerate_dominator_a(
    genus: usize,
    punctures: usize,
    max_weight: u64,
    budget: usize,
) -> Result<(IdealTriangulation, Vec<C64>, DominationCertificate), Error> {
    let tri = standard_triangulation(genus, punctures)?;
    let j: Vec<C64> = vec![C64::new(1.0, 0.0); tri.num_edges()];
    let pres = Presentation::new(&tri)?;
    let curves = enumerate_simple(&tri, &pres, max_weight, budget)?;
    let dev_j = DevTree::new(&tri, &pres, &j)?;
    let reports: Vec<CurveReport> = curves
        .par_iter()
        .map(|c| -> Result<CurveReport, Error> {
            let l_j = dev_j.eval_word(&c.letter_word).translation_length();
            if l_j <= 1e-12 {
                return Err(Error::ZeroDenominator(c.curve.weights.clone()));
            }
            Ok(CurveReport { curve: c.curve.clone(), l_rho: 0.0, l_j, ratio: 0.0 })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let boundary = (0..punctures)
        .map(|p| {
            let l_j = link_sums(&tri, &j, p).0.abs();
            BoundaryAudit { puncture: p, target: 0.0, l_j, l_rho: 0.0 }
        })
        .collect();
    let cert = DominationCertificate {
        verdict: Verdict::Strict,
        sup_ratio: 0.0,
        witness: None,
        curves: reports,
        boundary,
        max_weight,
    };
    Ok((tri, j, cert))
}

/// Degenerate co-axial case (b): the translation character determines the
/// length spectrum, but the dominating Fuchsian structure comes from a
/// harmonic-map construction this artifact does not build. The
/// certificate records the ρ-spectrum and declines a verdict.
pub fn degenerate_coaxial_certificate(
    rep: &FramedRepresentation,
    axis: (crate::moebius::SpherePoint, crate::moebius::SpherePoint),
    max_weight: u64,
    tol: &Tolerances,
    budget: usize,
) -> Result<DominationCertificate, Error> {
    // Validated here so callers get NotCoaxial early.
    crate::representation::coaxial_character(rep, axis, tol)?;
    let pres = Presentation::new(&rep.triangulation)?;
    let curves = enumerate_simple(&rep.triangulation, &pres, max_weight, budget)?;
    let evaluator = WordEvaluator::new(&pres, rep);
    let reports: Vec<CurveReport> = curves
        .iter()
        .map(|c| {
            let l_rho = evaluator.eval(&c.letter_word).translation_length();
            CurveReport { curve: c.curve.clone(), l_rho, l_j: 0.0, ratio: 0.0 }
        })
        .collect();
    let boundary = (0..rep.punctures())
        .map(|p| {
            let l_rho = rep.peripheral(p).translation_length();
            BoundaryAudit { puncture: p, target: l_rho, l_j: 0.0, l_rho }
        })
        .collect();
    Ok(DominationCertificate {
        verdict: Verdict::UnsupportedConstruction,
        sup_ratio: 0.0,
        witness: None,
        curves: reports,
        boundary,
        max_weight,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::representation::holonomy_from_fg;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn self_domination_is_non_strict() {
        let tri = standard_triangulation(1, 1).unwrap();
        let j = vec![c(2.0, 0.0), c(2.0, 0.0), c(0.25, 0.0)];
        let cert = dominate(
            &tri,
            RhoInput::Coordinates(&j),
            &j,
            6,
            &Tolerances::default(),
            1_000_000,
        )
        .unwrap();
        assert_eq!(cert.verdict, Verdict::NonStrict);
        for r in &cert.curves {
            assert!((r.ratio - 1.0).abs() < 1e-10);
        }
        assert!((cert.sup_ratio - 1.0).abs() < 1e-10);
    }

    #[test]
    fn uniformly_bent_coordinates_dominated_strictly() {
        let tri = standard_triangulation(1, 1).unwrap();
        let j = vec![c(2.0, 0.0), c(2.0, 0.0), c(0.25, 0.0)];
        let theta = std::f64::consts::PI / 3.0;
        let rho: Vec<C64> = j.iter().map(|x| x * C64::from_polar(1.0, theta)).collect();
        let cert = dominate(
            &tri,
            RhoInput::Coordinates(&rho),
            &j,
            8,
            &Tolerances::default(),
            1_000_000,
        )
        .unwrap();
        assert_eq!(cert.verdict, Verdict::Strict);
        assert!(cert.sup_ratio < 1.0 - 1e-3);
        for r in &cert.curves {
            assert!(r.ratio < 1.0, "curve {:?}", r.curve.weights);
        }
        let w = cert.witness.clone().unwrap();
        let wr = cert
            .curves
            .iter()
            .find(|r| r.curve == w)
            .expect("witness listed");
        assert_eq!(wr.ratio, cert.sup_ratio);
    }

    #[test]
    fn perturbed_boundary_is_violated() {
        let tri = standard_triangulation(1, 1).unwrap();
        let j = vec![c(2.0, 0.0), c(2.0, 0.0), c(0.25, 0.0)];
        let mut rho = j.clone();
        rho[0] = c(2.2, 0.0);
        let cert = dominate(
            &tri,
            RhoInput::Coordinates(&rho),
            &j,
            4,
            &Tolerances::default(),
            1_000_000,
        )
        .unwrap();
        assert_eq!(cert.verdict, Verdict::Violated);
    }

    #[test]
    fn filling_pipeline_on_bent_torus() {
        let tri = standard_triangulation(1, 1).unwrap();
        let theta = 0.7;
        let coords = vec![
            C64::from_polar(2.0, theta),
            C64::from_polar(2.0, theta),
            C64::from_polar(0.25, -theta),
        ];
        let rep = holonomy_from_fg(&tri, &coords).unwrap();
        let (j0, cert) =
            strict_dominator_filling(&rep, 6, &Tolerances::default(), 1_000_000).unwrap();
        assert!((j0[0].re - 2.0).abs() < 1e-9);
        assert!((j0[2].re - 0.25).abs() < 1e-9);
        assert_eq!(cert.verdict, Verdict::Strict);
        for b in &cert.boundary {
            assert_eq!(b.l_j, b.target);
            assert!((b.l_rho - b.target).abs() <= 1e-12);
        }
    }

    #[test]
    fn already_fuchsian_input_is_not_filling() {
        let tri = standard_triangulation(1, 1).unwrap();
        let coords = vec![c(2.0, 0.0), c(2.0, 0.0), c(0.25, 0.0)];
        let rep = holonomy_from_fg(&tri, &coords).unwrap();
        let e = strict_dominator_filling(&rep, 4, &Tolerances::default(), 1_000_000);
        assert!(matches!(e, Err(Error::NotFilling)));
    }

    #[test]
    fn trig_gap_examples() {
        use std::f64::consts::PI;
        let g = trig_gap(1.0, PI / 2.0, PI).unwrap();
        assert!((g - 2.0).abs() < 1e-6, "fold-flat of equal arms: {g}");
        let mut prev = trig_gap(1.0, 0.8, 0.5).unwrap();
        for theta in [0.25, 0.1, 0.02, 0.004] {
            let g = trig_gap(1.0, 0.8, theta).unwrap();
            assert!(g < prev && g > 0.0);
            prev = g;
        }
        assert!(matches!(trig_gap(1.0, 0.8, 0.0), Err(Error::ZeroBend)));
        let g = trig_gap(1.0, PI / 4.0, PI / 2.0).unwrap();
        let expect = 2.0
            - (1f64.cosh().powi(2) - 1f64.sinh().powi(2) * (2.0 * PI / 3.0).cos()).acosh();
        assert!((g - expect).abs() < 1e-12);
        assert!(trig_gap(2.0, PI / 4.0, 1.0).unwrap() > trig_gap(1.0, PI / 4.0, 1.0).unwrap());
    }

    #[test]
    fn trig_gap_h3_isometry_oracle() {
        use crate::moebius::{h3_distance, H3Point};
        use std::f64::consts::PI;
        let (l, alpha, theta) = (1.0f64, PI / 4.0, PI / 2.0);
        let beta = bend_angle_beta(alpha, theta);
        let direct = bent_endpoint_distance(l, l, beta);
        let x = H3Point::new(c(0.0, 0.0), l.exp()).unwrap();
        let rot = Moebius::new(
            c((beta / 2.0).cos(), 0.0),
            c((beta / 2.0).sin(), 0.0),
            c(-(beta / 2.0).sin(), 0.0),
            c((beta / 2.0).cos(), 0.0),
        )
        .unwrap();
        let y = x.apply(&rot);
        assert!((h3_distance(&x, &y) - direct).abs() < 1e-10);
        let gap = trig_gap(l, alpha, theta).unwrap();
        assert!((gap - (2.0 * l - direct)).abs() < 1e-12);
    }

    #[test]
    fn degenerate_a_certificates() {
        for (g, k) in [(1usize, 1usize), (0, 3), (2, 1)] {
            let (tri, j, cert) = degenerate_dominator_a(g, k, 4, 1_000_000).unwrap();
            assert_eq!(cert.sup_ratio, 0.0);
            assert_eq!(cert.verdict, Verdict::Strict);
            for b in &cert.boundary {
                assert_eq!(b.l_j, 0.0, "all-ones coordinates are cusped");
            }
            let rep = holonomy_from_fg(&tri, &j).unwrap();
            assert!(rep.relation_residual() < 1e-8);
            if (g, k) == (0, 3) {
                assert!(cert.curves.is_empty(), "pair of pants has no curves");
            } else {
                assert!(!cert.curves.is_empty());
                assert!(cert.curves.iter().all(|r| r.ratio == 0.0));
            }
        }
    }

    #[test]
    fn monotone_truncation_of_sup() {
        let tri = standard_triangulation(1, 1).unwrap();
        let j = vec![c(2.0, 0.0), c(2.0, 0.0), c(0.25, 0.0)];
        let rho: Vec<C64> = j
            .iter()
            .map(|x| x * C64::from_polar(1.0, 0.35))
            .collect();
        let mut prev = 0.0;
        for w in [2u64, 4, 6, 8] {
            let cert = dominate(
                &tri,
                RhoInput::Coordinates(&rho),
                &j,
                w,
                &Tolerances::default(),
                1_000_000,
            )
            .unwrap();
            assert!(cert.sup_ratio >= prev - 1e-12);
            prev = cert.sup_ratio;
        }
    }

    #[test]
    fn bent_family_ratio_sweep() {
        let tri = standard_triangulation(1, 1).unwrap();
        let j = vec![c(2.0, 0.0), c(2.0, 0.0), c(0.25, 0.0)];
        for i in 0..10 {
            let theta = 0.2 + (std::f64::consts::PI - 0.4) * (i as f64) / 9.0;
            let rho: Vec<C64> = j
                .iter()
                .map(|x| x * C64::from_polar(1.0, theta))
                .collect();
            let cert = dominate(
                &tri,
                RhoInput::Coordinates(&rho),
                &j,
                6,
                &Tolerances::default(),
                1_000_000,
            )
            .unwrap();
            assert_eq!(cert.verdict, Verdict::Strict, "theta = {theta}");
            assert!(cert.sup_ratio < 1.0);
        }
    }
}
