//! Command-line front end: ingest JSON inputs, run the coordinate /
//! straightening / domination / strip pipelines, and emit deterministic
//! reports. Exit status: 0 for success and strict verdicts, 2 for
//! non-strict verdicts, 1 for errors (with machine-readable JSON on
//! standard error).

use clap::{Parser, Subcommand};
use fgdom::domination::{self, RhoInput, Verdict};
use fgdom::io::*;
use fgdom::presentation::Presentation;
use fgdom::representation::{
    coaxial_character, detect_degeneracy, fg_from_framed, holonomy_from_fg, DegeneracyClass,
};
use fgdom::surface::IdealTriangulation;
use fgdom::{Error, Tolerances};
use num_complex::Complex64 as C64;
use rand::Rng;
use rand::SeedableRng;
use serde::Serialize;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(
    name = "fgdom",
    about = "Fock-Goncharov coordinates, pleated-plane straightening, strip deformations, and simple-length-spectrum domination certificates for punctured-surface PSL(2,C) representations"
)]
struct Cli {
    /// Relation / fixed-point check tolerance.
    #[arg(long, global = true, default_value_t = 1e-8)]
    tolerance: f64,
    /// Worker threads for curve evaluation (0 = library default).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    /// Seed for randomized sampling subcommands.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output file (defaults to standard output).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build and validate a triangulation, optionally flipping edges.
    Triangulate {
        /// Triangulation JSON path, or "standard:g,k" for the canonical
        /// fan triangulation.
        #[arg(long)]
        input: String,
        /// Edge to flip (repeatable, applied in order).
        #[arg(long)]
        flip: Vec<usize>,
    },
    /// Extract coordinates from a representation, reconstruct holonomy
    /// from coordinates, or sample random round-trips.
    Coords {
        /// Framed representation JSON (extraction mode).
        #[arg(long)]
        rep: Option<PathBuf>,
        /// Coordinate JSON (reconstruction mode; needs --triangulation).
        #[arg(long)]
        coords: Option<PathBuf>,
        #[arg(long)]
        triangulation: Option<String>,
        /// Sample N random coordinate vectors and report round-trips.
        #[arg(long)]
        sample: Option<usize>,
    },
    /// Replace every coordinate by its modulus.
    Straighten {
        #[arg(long)]
        coords: PathBuf,
    },
    /// Degeneracy classification of a framed representation.
    Classify {
        #[arg(long)]
        rep: PathBuf,
    },
    /// Length table of enumerated simple closed curves.
    Spectrum {
        #[arg(long)]
        coords: PathBuf,
        #[arg(long)]
        triangulation: String,
        #[arg(long, default_value_t = 6)]
        max_weight: u64,
        /// Also write the table as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Domination certificate: rho against a Fuchsian reference, or the
    /// filling-case pipeline when --j is omitted.
    Dominate {
        /// Framed representation JSON for rho.
        #[arg(long)]
        rep: Option<PathBuf>,
        /// Coordinate JSON for rho (needs --triangulation).
        #[arg(long)]
        rho: Option<PathBuf>,
        /// Real positive coordinate JSON for j; omitted: straighten rho.
        #[arg(long)]
        j: Option<PathBuf>,
        #[arg(long)]
        triangulation: Option<String>,
        #[arg(long, default_value_t = 12)]
        max_weight: u64,
        /// Enumeration cap on admissible weight vectors.
        #[arg(long, default_value_t = 1_000_000)]
        budget: usize,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Strip deformation of a Fuchsian structure along realized arcs,
    /// with the strict-lengthening certificate.
    Strip {
        #[arg(long)]
        coords: PathBuf,
        #[arg(long)]
        triangulation: String,
        #[arg(long)]
        arcs: PathBuf,
        #[arg(long, default_value_t = 6)]
        max_weight: u64,
        #[arg(long, default_value_t = 1_000_000)]
        budget: usize,
    },
    /// Develop the pleated plane along a path of side crossings.
    Develop {
        #[arg(long)]
        coords: PathBuf,
        #[arg(long)]
        triangulation: String,
        /// Comma-separated side slots, e.g. "0,2,1".
        #[arg(long, default_value = "")]
        path: String,
        /// Also emit an SVG of the configuration in the disk model.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Error> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

fn load_triangulation(spec: &str) -> Result<IdealTriangulation, Error> {
    if let Some(rest) = spec.strip_prefix("standard:") {
        let parts: Vec<&str> = rest.split(',').collect();
        if parts.len() != 2 {
            return Err(Error::Invalid("expected standard:<genus>,<punctures>".into()));
        }
        let g: usize = parts[0]
            .trim()
            .parse()
            .map_err(|_| Error::Invalid("bad genus".into()))?;
        let k: usize = parts[1]
            .trim()
            .parse()
            .map_err(|_| Error::Invalid("bad puncture count".into()))?;
        return fgdom::surface::standard_triangulation(g, k);
    }
    let doc: TriangulationDoc = read_json(Path::new(spec))?;
    doc.to_triangulation()
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn emit_json<T: Serialize>(out: &Option<PathBuf>, value: &T) -> Result<(), Error> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    emit(out, &text)
}

#[derive(Serialize)]
struct TriangulateReport {
    schema: u32,
    triangulation: TriangulationDoc,
    triangles: usize,
    edges: usize,
    links: Vec<usize>,
}

#[derive(Serialize)]
struct RoundTripReport {
    schema: u32,
    samples: usize,
    max_roundtrip_error: f64,
    max_relation_residual: f64,
}

#[derive(Serialize)]
struct SpectrumRow {
    weights: BTreeMap<String, u64>,
    length: f64,
    tr_sq: [f64; 2],
}

#[derive(Serialize)]
struct ClassifyReport {
    schema: u32,
    class: String,
    fixed_point: Option<PointWire>,
    axis: Option<[PointWire; 2]>,
    /// Co-axial translation character per generator: (m, reverses).
    character: Option<Vec<(f64, bool)>>,
    boundary: Vec<BoundaryAuditDoc>,
}

#[derive(Serialize)]
struct StripReport {
    schema: u32,
    generators: BTreeMap<String, [[f64; 2]; 4]>,
    certificate: CertificateDoc,
}

fn matrix_entries(m: &fgdom::moebius::Moebius) -> [[f64; 2]; 4] {
    [
        [m.a.re, m.a.im],
        [m.b.re, m.b.im],
        [m.c.re, m.c.im],
        [m.d.re, m.d.im],
    ]
}

fn run(cli: &Cli) -> Result<Option<Verdict>, Error> {
    let tol = Tolerances { check: cli.tolerance, ..Tolerances::default() };
    match &cli.command {
        Command::Triangulate { input, flip } => {
            let mut tri = load_triangulation(input)?;
            for &e in flip {
                tri = tri.flip(e)?;
            }
            let report = TriangulateReport {
                schema: SCHEMA_VERSION,
                triangulation: TriangulationDoc::from_triangulation(&tri),
                triangles: tri.num_triangles(),
                edges: tri.num_edges(),
                links: tri.links().iter().map(|l| l.len()).collect(),
            };
            emit_json(&cli.out, &report)?;
            Ok(None)
        }
        Command::Coords { rep, coords, triangulation, sample } => match (rep, coords, sample) {
            (Some(rep_path), None, None) => {
                let doc: RepresentationDoc = read_json(rep_path)?;
                let rep = doc.to_representation()?;
                rep.validate(&tol)?;
                let x = fg_from_framed(&rep)?;
                emit_json(&cli.out, &CoordsDoc::from_coords(&x))?;
                Ok(None)
            }
            (None, Some(coords_path), None) => {
                let tri = load_triangulation(triangulation.as_deref().ok_or_else(|| {
                    Error::Invalid("--triangulation required with --coords".into())
                })?)?;
                let doc: CoordsDoc = read_json(coords_path)?;
                let x = doc.to_coords(&tri)?;
                let rep = holonomy_from_fg(&tri, &x)?;
                emit_json(&cli.out, &RepresentationDoc::from_representation(&rep))?;
                Ok(None)
            }
            (None, None, Some(n)) => {
                let tri = load_triangulation(triangulation.as_deref().ok_or_else(|| {
                    Error::Invalid("--triangulation required with --sample".into())
                })?)?;
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(cli.seed);
                let mut max_rt = 0.0f64;
                let mut max_res = 0.0f64;
                for _ in 0..*n {
                    let x: Vec<C64> = (0..tri.num_edges())
                        .map(|_| {
                            C64::from_polar(
                                rng.random_range(0.4..2.5),
                                rng.random_range(-2.8..2.8),
                            )
                        })
                        .collect();
                    let rep = holonomy_from_fg(&tri, &x)?;
                    max_res = max_res.max(rep.relation_residual());
                    let back = fg_from_framed(&rep)?;
                    for (a, b) in x.iter().zip(&back) {
                        max_rt = max_rt.max((a - b).norm());
                    }
                }
                emit_json(
                    &cli.out,
                    &RoundTripReport {
                        schema: SCHEMA_VERSION,
                        samples: *n,
                        max_roundtrip_error: max_rt,
                        max_relation_residual: max_res,
                    },
                )?;
                Ok(None)
            }
            _ => Err(Error::Invalid("use exactly one of --rep, --coords, --sample".into())),
        },
        Command::Straighten { coords } => {
            let doc: CoordsDoc = read_json(coords)?;
            let n = doc.coords.len();
            let mut v = vec![C64::new(0.0, 0.0); n];
            for (k, [re, im]) in &doc.coords {
                let e: usize = k
                    .parse()
                    .map_err(|_| Error::Invalid(format!("bad edge id {k:?}")))?;
                if e >= n {
                    return Err(Error::Invalid(format!("edge id {e} out of range")));
                }
                v[e] = C64::new(*re, *im);
            }
            let flat = fgdom::pleat::straighten(&v);
            emit_json(&cli.out, &CoordsDoc::from_coords(&flat))?;
            Ok(None)
        }
        Command::Classify { rep } => {
            let doc: RepresentationDoc = read_json(rep)?;
            let rep = doc.to_representation()?;
            rep.validate(&tol)?;
            let class = detect_degeneracy(&rep, &tol);
            let boundary = (0..rep.punctures())
                .map(|p| {
                    let l = rep.peripheral(p).translation_length();
                    BoundaryAuditDoc { puncture: p, target: l, l_j: l, l_rho: l }
                })
                .collect();
            let report = match class {
                DegeneracyClass::Nondegenerate => ClassifyReport {
                    schema: SCHEMA_VERSION,
                    class: "nondegenerate".into(),
                    fixed_point: None,
                    axis: None,
                    character: None,
                    boundary,
                },
                DegeneracyClass::DegenerateA { fixed_point } => ClassifyReport {
                    schema: SCHEMA_VERSION,
                    class: "degenerate_a".into(),
                    fixed_point: Some(PointWire::from_point(&fixed_point)),
                    axis: None,
                    character: None,
                    boundary,
                },
                DegeneracyClass::DegenerateCoaxial { axis } => {
                    let ch = coaxial_character(&rep, axis, &tol)?;
                    ClassifyReport {
                        schema: SCHEMA_VERSION,
                        class: "degenerate_coaxial".into(),
                        fixed_point: None,
                        axis: Some([
                            PointWire::from_point(&axis.0),
                            PointWire::from_point(&axis.1),
                        ]),
                        character: Some(ch.per_generator.clone()),
                        boundary,
                    }
                }
            };
            emit_json(&cli.out, &report)?;
            Ok(None)
        }
        Command::Spectrum { coords, triangulation, max_weight, csv } => {
            let tri = load_triangulation(triangulation)?;
            let doc: CoordsDoc = read_json(coords)?;
            let x = doc.to_coords(&tri)?;
            let pres = Presentation::new(&tri)?;
            let curves = fgdom::curves::enumerate_simple(&tri, &pres, *max_weight, 1_000_000)?;
            let mut rows = Vec::with_capacity(curves.len());
            for c in &curves {
                let m = fgdom::curves::curve_holonomy(&tri, &x, &c.curve)?;
                let t2 = m.trace_sq();
                rows.push(SpectrumRow {
                    weights: CurveDoc::from_curve(&c.curve).weights,
                    length: m.translation_length(),
                    tr_sq: [t2.re, t2.im],
                });
            }
            if let Some(csv_path) = csv {
                let mut text = String::from("curve,length\n");
                for r in &rows {
                    let weights: Vec<String> =
                        r.weights.values().map(|w| w.to_string()).collect();
                    text.push_str(&format!("{},{}\n", weights.join(":"), r.length));
                }
                std::fs::write(csv_path, text)?;
            }
            emit_json(&cli.out, &rows)?;
            Ok(None)
        }
        Command::Dominate { rep, rho, j, triangulation, max_weight, budget, csv } => {
            let cert = match (rep, rho) {
                (Some(rep_path), None) => {
                    let doc: RepresentationDoc = read_json(rep_path)?;
                    let rep = doc.to_representation()?;
                    rep.validate(&tol)?;
                    match j {
                        None => {
                            domination::strict_dominator_filling(&rep, *max_weight, &tol, *budget)?
                                .1
                        }
                        Some(j_path) => {
                            let jdoc: CoordsDoc = read_json(j_path)?;
                            let jx = jdoc.to_coords(&rep.triangulation)?;
                            domination::dominate(
                                &rep.triangulation,
                                RhoInput::Framed(&rep),
                                &jx,
                                *max_weight,
                                &tol,
                                *budget,
                            )?
                        }
                    }
                }
                (None, Some(rho_path)) => {
                    let tri = load_triangulation(triangulation.as_deref().ok_or_else(|| {
                        Error::Invalid("--triangulation required with --rho".into())
                    })?)?;
                    let rdoc: CoordsDoc = read_json(rho_path)?;
                    let rx = rdoc.to_coords(&tri)?;
                    let jx = match j {
                        Some(j_path) => {
                            let jdoc: CoordsDoc = read_json(j_path)?;
                            jdoc.to_coords(&tri)?
                        }
                        None => fgdom::pleat::straighten(&rx),
                    };
                    domination::dominate(
                        &tri,
                        RhoInput::Coordinates(&rx),
                        &jx,
                        *max_weight,
                        &tol,
                        *budget,
                    )?
                }
                _ => return Err(Error::Invalid("provide exactly one of --rep or --rho".into())),
            };
            let doc = CertificateDoc::from_certificate(&cert);
            if let Some(csv_path) = csv {
                std::fs::write(csv_path, doc.to_csv())?;
            }
            emit_json(&cli.out, &doc)?;
            Ok(Some(cert.verdict))
        }
        Command::Strip { coords, triangulation, arcs, max_weight, budget } => {
            let tri = load_triangulation(triangulation)?;
            let cdoc: CoordsDoc = read_json(coords)?;
            let x = cdoc.to_coords(&tri)?;
            let adoc: ArcsDoc = read_json(arcs)?;
            let pres = Presentation::new(&tri)?;
            let mut realized = Vec::new();
            let mut widths = Vec::new();
            for spec in &adoc.arcs {
                let mut arc = fgdom::strip::realize_arc(&tri, &pres, &x, &spec.path, &tol)?;
                if let PointWire::Finite([re, im]) = &spec.waist {
                    arc = arc.with_waist(C64::new(*re, *im))?;
                }
                realized.push(arc);
                widths.push(spec.width);
            }
            let deformed = fgdom::strip::strip_deform(&tri, &pres, &x, &realized, &widths)?;
            let cert = fgdom::strip::verify_strict_increase(
                &tri,
                &pres,
                &x,
                &deformed,
                *max_weight,
                &tol,
                *budget,
            )?;
            let names = fgdom::representation::generator_names(tri.genus, tri.punctures);
            let report = StripReport {
                schema: SCHEMA_VERSION,
                generators: names
                    .iter()
                    .zip(&deformed)
                    .map(|(n, m)| (n.clone(), matrix_entries(m)))
                    .collect(),
                certificate: CertificateDoc::from_certificate(&cert),
            };
            emit_json(&cli.out, &report)?;
            Ok(Some(cert.verdict))
        }
        Command::Develop { coords, triangulation, path, svg } => {
            let tri = load_triangulation(triangulation)?;
            let cdoc: CoordsDoc = read_json(coords)?;
            let x = cdoc.to_coords(&tri)?;
            let steps: Vec<usize> = if path.is_empty() {
                Vec::new()
            } else {
                path.split(',')
                    .map(|s| {
                        s.trim()
                            .parse()
                            .map_err(|_| Error::Invalid(format!("bad path step {s:?}")))
                    })
                    .collect::<Result<_, _>>()?
            };
            let devs = fgdom::pleat::develop(&tri, &x, &steps)?;
            if let Some(svg_path) = svg {
                std::fs::write(svg_path, develop_svg(&devs))?;
            }
            let docs: Vec<DevelopedTriangleDoc> =
                devs.iter().map(DevelopedTriangleDoc::from_developed).collect();
            emit_json(&cli.out, &docs)?;
            Ok(None)
        }
    }
}

fn main() {
    let cli = Cli::parse();
    let jobs = cli.jobs;
    let body = || -> Result<Option<Verdict>, Error> { run(&cli) };
    let result = if jobs > 0 {
        match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
            Ok(pool) => pool.install(body),
            Err(e) => Err(Error::Invalid(format!("thread pool: {e}"))),
        }
    } else {
        body()
    };
    match result {
        Ok(None) | Ok(Some(Verdict::Strict)) => std::process::exit(0),
        Ok(Some(_)) => std::process::exit(2),
        Err(e) => {
            let doc = ErrorDoc::from_error(&e);
            eprintln!("{}", serde_json::to_string(&doc).unwrap());
            std::process::exit(1);
        }
    }
}
