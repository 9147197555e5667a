//! JSON wire formats: triangulations, curves, coordinates, framed
//! representations, certificates, arcs, and developed triangles. Maps
//! are ordered so identical inputs serialize to identical bytes.

use crate::domination::{BoundaryAudit, CurveReport, DominationCertificate, Verdict};
use crate::moebius::{Moebius, SpherePoint};
use crate::pleat::DevelopedTriangle;
use crate::representation::{generator_names, FramedRepresentation};
use crate::surface::{IdealTriangulation, NormalCurve};
use crate::Error;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

pub const SCHEMA_VERSION: u32 = 1;

fn default_schema() -> u32 {
    SCHEMA_VERSION
}

/// A point of the Riemann sphere: `[re, im]` or the string `"inf"`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointWire {
    Infinity(String),
    Finite([f64; 2]),
}

impl PointWire {
    pub fn to_point(&self) -> Result<SpherePoint, Error> {
        match self {
            PointWire::Finite([re, im]) => Ok(SpherePoint::finite(C64::new(*re, *im))),
            PointWire::Infinity(s) if s == "inf" => Ok(SpherePoint::infinity()),
            PointWire::Infinity(s) => {
                Err(Error::Invalid(format!("unknown point literal {s:?}")))
            }
        }
    }

    pub fn from_point(p: &SpherePoint) -> PointWire {
        match p.to_complex() {
            None => PointWire::Infinity("inf".into()),
            Some(z) => PointWire::Finite([z.re, z.im]),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TriangulationDoc {
    #[serde(default = "default_schema")]
    pub schema: u32,
    pub genus: usize,
    pub punctures: usize,
    pub gluing: Vec<[usize; 4]>,
}

impl TriangulationDoc {
    pub fn to_triangulation(&self) -> Result<IdealTriangulation, Error> {
        IdealTriangulation::build(self.genus, self.punctures, &self.gluing)
    }

    pub fn from_triangulation(tri: &IdealTriangulation) -> TriangulationDoc {
        TriangulationDoc {
            schema: SCHEMA_VERSION,
            genus: tri.genus,
            punctures: tri.punctures,
            gluing: tri.gluing_table(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoordsDoc {
    #[serde(default = "default_schema")]
    pub schema: u32,
    /// Edge id -> [re, im].
    pub coords: BTreeMap<String, [f64; 2]>,
}

impl CoordsDoc {
    pub fn to_coords(&self, tri: &IdealTriangulation) -> Result<Vec<C64>, Error> {
        let mut out = vec![None; tri.num_edges()];
        for (k, [re, im]) in &self.coords {
            let e: usize = k
                .parse()
                .map_err(|_| Error::Invalid(format!("bad edge id {k:?}")))?;
            if e >= out.len() {
                return Err(Error::Invalid(format!("edge id {e} out of range")));
            }
            out[e] = Some(C64::new(*re, *im));
        }
        out.into_iter()
            .enumerate()
            .map(|(e, c)| {
                c.ok_or_else(|| Error::Invalid(format!("missing coordinate for edge {e}")))
            })
            .collect()
    }

    pub fn from_coords(coords: &[C64]) -> CoordsDoc {
        CoordsDoc {
            schema: SCHEMA_VERSION,
            coords: coords
                .iter()
                .enumerate()
                .map(|(e, c)| (e.to_string(), [c.re, c.im]))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CurveDoc {
    pub weights: BTreeMap<String, u64>,
}

impl CurveDoc {
    pub fn to_curve(&self, tri: &IdealTriangulation) -> Result<NormalCurve, Error> {
        let mut out = vec![0u64; tri.num_edges()];
        for (k, w) in &self.weights {
            let e: usize = k
                .parse()
                .map_err(|_| Error::Invalid(format!("bad edge id {k:?}")))?;
            if e >= out.len() {
                return Err(Error::Invalid(format!("edge id {e} out of range")));
            }
            out[e] = *w;
        }
        Ok(NormalCurve::new(out))
    }

    pub fn from_curve(c: &NormalCurve) -> CurveDoc {
        CurveDoc {
            weights: c
                .weights
                .iter()
                .enumerate()
                .map(|(e, w)| (e.to_string(), *w))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RepresentationDoc {
    #[serde(default = "default_schema")]
    pub schema: u32,
    pub triangulation: TriangulationDoc,
    /// Generator name -> matrix entries [a, b, c, d] as [re, im] pairs.
    pub generators: BTreeMap<String, [[f64; 2]; 4]>,
    /// Puncture index -> framing point.
    pub framing: BTreeMap<String, PointWire>,
}

impl RepresentationDoc {
    pub fn to_representation(&self) -> Result<FramedRepresentation, Error> {
        let tri = self.triangulation.to_triangulation()?;
        let names = generator_names(tri.genus, tri.punctures);
        let mut generators = Vec::with_capacity(names.len());
        for name in &names {
            let m = self
                .generators
                .get(name)
                .ok_or_else(|| Error::Invalid(format!("missing generator {name:?}")))?;
            generators.push(Moebius::new(
                C64::new(m[0][0], m[0][1]),
                C64::new(m[1][0], m[1][1]),
                C64::new(m[2][0], m[2][1]),
                C64::new(m[3][0], m[3][1]),
            )?);
        }
        let mut framing = Vec::with_capacity(tri.punctures);
        for p in 0..tri.punctures {
            let pt = self
                .framing
                .get(&p.to_string())
                .ok_or_else(|| Error::Invalid(format!("missing framing for puncture {p}")))?;
            framing.push(pt.to_point()?);
        }
        Ok(FramedRepresentation { triangulation: tri, generators, framing })
    }

    pub fn from_representation(rep: &FramedRepresentation) -> RepresentationDoc {
        let names = generator_names(rep.genus(), rep.punctures());
        let generators = names
            .iter()
            .zip(&rep.generators)
            .map(|(n, m)| {
                (
                    n.clone(),
                    [
                        [m.a.re, m.a.im],
                        [m.b.re, m.b.im],
                        [m.c.re, m.c.im],
                        [m.d.re, m.d.im],
                    ],
                )
            })
            .collect();
        let framing = rep
            .framing
            .iter()
            .enumerate()
            .map(|(p, pt)| (p.to_string(), PointWire::from_point(pt)))
            .collect();
        RepresentationDoc {
            schema: SCHEMA_VERSION,
            triangulation: TriangulationDoc::from_triangulation(&rep.triangulation),
            generators,
            framing,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CurveReportDoc {
    pub weights: BTreeMap<String, u64>,
    pub l_rho: f64,
    pub l_j: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundaryAuditDoc {
    pub puncture: usize,
    pub target: f64,
    pub l_j: f64,
    pub l_rho: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertificateDoc {
    #[serde(default = "default_schema")]
    pub schema: u32,
    pub verdict: Verdict,
    pub sup_ratio: f64,
    pub max_weight: u64,
    pub witness: Option<CurveDoc>,
    pub curves: Vec<CurveReportDoc>,
    pub boundary: Vec<BoundaryAuditDoc>,
}

impl CertificateDoc {
    pub fn from_certificate(cert: &DominationCertificate) -> CertificateDoc {
        CertificateDoc {
            schema: SCHEMA_VERSION,
            verdict: cert.verdict,
            sup_ratio: cert.sup_ratio,
            max_weight: cert.max_weight,
            witness: cert.witness.as_ref().map(CurveDoc::from_curve),
            curves: cert
                .curves
                .iter()
                .map(|r: &CurveReport| CurveReportDoc {
                    weights: CurveDoc::from_curve(&r.curve).weights,
                    l_rho: r.l_rho,
                    l_j: r.l_j,
                    ratio: r.ratio,
                })
                .collect(),
            boundary: cert
                .boundary
                .iter()
                .map(|b: &BoundaryAudit| BoundaryAuditDoc {
                    puncture: b.puncture,
                    target: b.target,
                    l_j: b.l_j,
                    l_rho: b.l_rho,
                })
                .collect(),
        }
    }

    /// CSV rows of the curve reports: weights, l_rho, l_j, ratio.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("curve,l_rho,l_j,ratio\n");
        for r in &self.curves {
            let weights: Vec<String> = r.weights.values().map(|w| w.to_string()).collect();
            out.push_str(&format!(
                "{},{},{},{}\n",
                weights.join(":"),
                r.l_rho,
                r.l_j,
                r.ratio
            ));
        }
        out
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ArcSpecDoc {
    pub path: Vec<usize>,
    pub width: f64,
    /// "auto" (foot of the perpendicular on the first boundary axis) or
    /// an explicit point on the realized geodesic.
    #[serde(default = "default_waist")]
    pub waist: PointWire,
}

fn default_waist() -> PointWire {
    PointWire::Infinity("auto".into())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ArcsDoc {
    #[serde(default = "default_schema")]
    pub schema: u32,
    pub arcs: Vec<ArcSpecDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DevelopedTriangleDoc {
    pub triangle: usize,
    pub vertices: [PointWire; 3],
}

impl DevelopedTriangleDoc {
    pub fn from_developed(d: &DevelopedTriangle) -> DevelopedTriangleDoc {
        DevelopedTriangleDoc {
            triangle: d.triangle,
            vertices: [
                PointWire::from_point(&d.vertices[0]),
                PointWire::from_point(&d.vertices[1]),
                PointWire::from_point(&d.vertices[2]),
            ],
        }
    }
}

/// Machine-readable error payload for the CLI's standard error stream.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ErrorDoc {
    pub error: String,
    pub message: String,
}

impl ErrorDoc {
    pub fn from_error(e: &Error) -> ErrorDoc {
        ErrorDoc { error: e.code().to_string(), message: e.to_string() }
    }
}

/// SVG rendering of developed triangles in the unit-disk model: vertices
/// on the boundary circle, edges as circular arcs orthogonal to it.
pub fn develop_svg(devs: &[DevelopedTriangle]) -> String {
    let to_disk = |p: &SpherePoint| -> (f64, f64) {
        // Cayley transform of the upper half-plane.
        match p.to_complex() {
            None => (0.0, 1.0),
            Some(z) => {
                let i = C64::new(0.0, 1.0);
                let w = (z - i) / (z + i);
                (w.re, w.im)
            }
        }
    };
    let mut paths = String::new();
    for d in devs {
        let pts: Vec<(f64, f64)> = d.vertices.iter().map(to_disk).collect();
        for s in 0..3 {
            let (x1, y1) = pts[s];
            let (x2, y2) = pts[(s + 1) % 3];
            // Circle orthogonal to the unit circle through two boundary
            // points; diameters degenerate to straight lines.
            let dot = 1.0 + x1 * x2 + y1 * y2;
            if dot.abs() < 1e-9 {
                paths.push_str(&format!(
                    "<line x1='{x1:.6}' y1='{y1:.6}' x2='{x2:.6}' y2='{y2:.6}'/>"
                ));
            } else {
                let cx = (x1 + x2) / dot;
                let cy = (y1 + y2) / dot;
                let r = ((x1 - cx).powi(2) + (y1 - cy).powi(2)).sqrt();
                let sweep = if (x1 - cx) * (y2 - cy) - (y1 - cy) * (x2 - cx) > 0.0 {
                    1
                } else {
                    0
                };
                paths.push_str(&format!(
                    "<path d='M {x1:.6} {y1:.6} A {r:.6} {r:.6} 0 0 {sweep} {x2:.6} {y2:.6}'/>"
                ));
            }
        }
    }
    format!(
        "<svg xmlns='http://www.w3.org/2000/svg' viewBox='-1.1 -1.1 2.2 2.2'>\
         <g transform='scale(1,-1)' fill='none' stroke='black' stroke-width='0.004'>\
         <circle cx='0' cy='0' r='1' stroke='gray'/>{paths}</g></svg>\n"
    )
}
