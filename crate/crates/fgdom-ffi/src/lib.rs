//! C ABI for the fgdom library.
//!
//! All payloads cross the boundary as JSON strings in the schemas of
//! `fgdom::io`; results come back in an opaque buffer handle that must be
//! released with `fgdom_buffer_free`. Functions return 0 on success or a
//! negative error code; `fgdom_last_error_message` retrieves a
//! thread-local description of the most recent failure. The matching
//! header lives in `include/fgdom.h`.

use fgdom::domination::{self, RhoInput, Verdict};
use fgdom::io::*;
use fgdom::presentation::Presentation;
use fgdom::representation::{fg_from_framed, holonomy_from_fg};
use fgdom::{Error, Tolerances};
use libc::{c_char, c_int, size_t};
use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::ptr;

/// Opaque result buffer.
pub struct FgdomBuffer {
    data: CString,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(msg: &str) {
    let sanitized: String = msg.chars().filter(|&c| c != '\0').collect();
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(sanitized).unwrap());
}

/// Stable numeric codes for the library's error kinds.
fn error_code(e: &Error) -> c_int {
    match e.code() {
        "UnpairedSide" => -2,
        "WrongPunctureCount" => -3,
        "NonNegativeEuler" => -4,
        "SelfGluedEdge" => -5,
        "InadmissibleWeights" => -6,
        "DegenerateQuadruple" => -7,
        "NonpositiveHeight" => -8,
        "NonGenericFraming" => -9,
        "DegenerateInput" => -10,
        "NotCoaxial" => -11,
        "DegenerateCoordinate" => -12,
        "NotFilling" => -13,
        "ZeroDenominator" => -14,
        "BudgetExceeded" => -15,
        "DisconnectedCurve" => -16,
        "CuspExit" => -17,
        "TangledPath" => -18,
        "ArcsIntersect" => -19,
        "SingularMatrix" => -20,
        "ZeroBend" => -23,
        "Json" => -21,
        "Io" => -22,
        _ => -1,
    }
}

fn fail(e: Error) -> c_int {
    set_error(&e.to_string());
    error_code(&e)
}

unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, Error> {
    if ptr.is_null() {
        return Err(Error::Invalid("null string argument".into()));
    }
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|_| Error::Invalid("argument is not valid UTF-8".into()))
}

fn deliver(out: *mut *mut FgdomBuffer, text: String) -> c_int {
    let sanitized: String = text.chars().filter(|&c| c != '\0').collect();
    let buf = Box::new(FgdomBuffer { data: CString::new(sanitized).unwrap() });
    unsafe {
        *out = Box::into_raw(buf);
    }
    0
}

fn deliver_json<T: serde::Serialize>(out: *mut *mut FgdomBuffer, value: &T) -> c_int {
    match serde_json::to_string_pretty(value) {
        Ok(text) => deliver(out, text),
        Err(e) => fail(Error::Json(e)),
    }
}

/// Schema version of every JSON payload.
#[no_mangle]
pub extern "C" fn fgdom_schema_version() -> c_int {
    SCHEMA_VERSION as c_int
}

/// Thread-local message for the most recent error. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn fgdom_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `buf` must be a pointer returned through an `out` parameter of this
/// library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fgdom_buffer_free(buf: *mut FgdomBuffer) {
    if !buf.is_null() {
        drop(Box::from_raw(buf));
    }
}

/// # Safety
/// `buf` must be a live buffer returned by this library.
#[no_mangle]
pub unsafe extern "C" fn fgdom_buffer_data(buf: *const FgdomBuffer) -> *const c_char {
    if buf.is_null() {
        return ptr::null();
    }
    (*buf).data.as_ptr()
}

/// # Safety
/// `buf` must be a live buffer returned by this library.
#[no_mangle]
pub unsafe extern "C" fn fgdom_buffer_len(buf: *const FgdomBuffer) -> size_t {
    if buf.is_null() {
        return 0;
    }
    (*buf).data.as_bytes().len()
}

/// Validates a triangulation document and returns its normalized form.
///
/// # Safety
/// `triangulation_json` must be a NUL-terminated string; `out` must be a
/// valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fgdom_triangulation_normalize(
    triangulation_json: *const c_char,
    out: *mut *mut FgdomBuffer,
) -> c_int {
    let run = || -> Result<TriangulationDoc, Error> {
        let doc: TriangulationDoc = serde_json::from_str(read_str(triangulation_json)?)?;
        let tri = doc.to_triangulation()?;
        Ok(TriangulationDoc::from_triangulation(&tri))
    };
    match run() {
        Ok(doc) => deliver_json(out, &doc),
        Err(e) => fail(e),
    }
}

/// Fock-Goncharov coordinates of a framed representation.
///
/// # Safety
/// `representation_json` must be a NUL-terminated string; `out` must be a
/// valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fgdom_fg_coordinates(
    representation_json: *const c_char,
    out: *mut *mut FgdomBuffer,
) -> c_int {
    let run = || -> Result<CoordsDoc, Error> {
        let doc: RepresentationDoc = serde_json::from_str(read_str(representation_json)?)?;
        let rep = doc.to_representation()?;
        rep.validate(&Tolerances::default())?;
        Ok(CoordsDoc::from_coords(&fg_from_framed(&rep)?))
    };
    match run() {
        Ok(doc) => deliver_json(out, &doc),
        Err(e) => fail(e),
    }
}

/// Holonomy reconstruction from edge coordinates.
///
/// # Safety
/// Both arguments must be NUL-terminated strings; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn fgdom_holonomy(
    triangulation_json: *const c_char,
    coords_json: *const c_char,
    out: *mut *mut FgdomBuffer,
) -> c_int {
    let run = || -> Result<RepresentationDoc, Error> {
        let tdoc: TriangulationDoc = serde_json::from_str(read_str(triangulation_json)?)?;
        let tri = tdoc.to_triangulation()?;
        let cdoc: CoordsDoc = serde_json::from_str(read_str(coords_json)?)?;
        let coords = cdoc.to_coords(&tri)?;
        let rep = holonomy_from_fg(&tri, &coords)?;
        Ok(RepresentationDoc::from_representation(&rep))
    };
    match run() {
        Ok(doc) => deliver_json(out, &doc),
        Err(e) => fail(e),
    }
}

/// Straightening: coordinates replaced by their moduli.
///
/// # Safety
/// `coords_json` must be a NUL-terminated string; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn fgdom_straighten(
    coords_json: *const c_char,
    out: *mut *mut FgdomBuffer,
) -> c_int {
    let run = || -> Result<CoordsDoc, Error> {
        let cdoc: CoordsDoc = serde_json::from_str(read_str(coords_json)?)?;
        let n = cdoc.coords.len();
        let mut v = vec![num_complex::Complex64::new(0.0, 0.0); n];
        for (k, [re, im]) in &cdoc.coords {
            let e: usize = k
                .parse()
                .map_err(|_| Error::Invalid(format!("bad edge id {k:?}")))?;
            if e >= n {
                return Err(Error::Invalid(format!("edge id {e} out of range")));
            }
            v[e] = num_complex::Complex64::new(*re, *im);
        }
        Ok(CoordsDoc::from_coords(&fgdom::pleat::straighten(&v)))
    };
    match run() {
        Ok(doc) => deliver_json(out, &doc),
        Err(e) => fail(e),
    }
}

fn verdict_code(v: Verdict) -> c_int {
    match v {
        Verdict::Strict => 0,
        Verdict::NonStrict => 1,
        Verdict::Violated => 2,
        Verdict::UnsupportedConstruction => 3,
    }
}

/// Filling-case strict domination pipeline. Writes the certificate into
/// `out` and the verdict (0 strict, 1 non-strict, 2 violated, 3
/// unsupported) into `verdict`.
///
/// # Safety
/// `representation_json` must be a NUL-terminated string; `out` and
/// `verdict` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn fgdom_dominate_filling(
    representation_json: *const c_char,
    max_weight: u64,
    out: *mut *mut FgdomBuffer,
    verdict: *mut c_int,
) -> c_int {
    let run = || -> Result<(CertificateDoc, Verdict), Error> {
        let doc: RepresentationDoc = serde_json::from_str(read_str(representation_json)?)?;
        let rep = doc.to_representation()?;
        rep.validate(&Tolerances::default())?;
        let (_, cert) = domination::strict_dominator_filling(
            &rep,
            max_weight,
            &Tolerances::default(),
            1_000_000,
        )?;
        Ok((CertificateDoc::from_certificate(&cert), cert.verdict))
    };
    match run() {
        Ok((doc, v)) => {
            *verdict = verdict_code(v);
            deliver_json(out, &doc)
        }
        Err(e) => fail(e),
    }
}

/// Domination certificate of coordinate data against a real positive
/// reference over the same triangulation.
///
/// # Safety
/// String arguments must be NUL-terminated; `out` and `verdict` valid.
#[no_mangle]
pub unsafe extern "C" fn fgdom_dominate_coords(
    triangulation_json: *const c_char,
    rho_coords_json: *const c_char,
    j_coords_json: *const c_char,
    max_weight: u64,
    out: *mut *mut FgdomBuffer,
    verdict: *mut c_int,
) -> c_int {
    let run = || -> Result<(CertificateDoc, Verdict), Error> {
        let tdoc: TriangulationDoc = serde_json::from_str(read_str(triangulation_json)?)?;
        let tri = tdoc.to_triangulation()?;
        let rdoc: CoordsDoc = serde_json::from_str(read_str(rho_coords_json)?)?;
        let rho = rdoc.to_coords(&tri)?;
        let jdoc: CoordsDoc = serde_json::from_str(read_str(j_coords_json)?)?;
        let j = jdoc.to_coords(&tri)?;
        let cert = domination::dominate(
            &tri,
            RhoInput::Coordinates(&rho),
            &j,
            max_weight,
            &Tolerances::default(),
            1_000_000,
        )?;
        Ok((CertificateDoc::from_certificate(&cert), cert.verdict))
    };
    match run() {
        Ok((doc, v)) => {
            *verdict = verdict_code(v);
            deliver_json(out, &doc)
        }
        Err(e) => fail(e),
    }
}

/// Length table of enumerated simple closed curves.
///
/// # Safety
/// String arguments must be NUL-terminated; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn fgdom_spectrum(
    triangulation_json: *const c_char,
    coords_json: *const c_char,
    max_weight: u64,
    out: *mut *mut FgdomBuffer,
) -> c_int {
    #[derive(serde::Serialize)]
    struct Row {
        weights: std::collections::BTreeMap<String, u64>,
        length: f64,
    }
    let run = || -> Result<Vec<Row>, Error> {
        let tdoc: TriangulationDoc = serde_json::from_str(read_str(triangulation_json)?)?;
        let tri = tdoc.to_triangulation()?;
        let cdoc: CoordsDoc = serde_json::from_str(read_str(coords_json)?)?;
        let coords = cdoc.to_coords(&tri)?;
        let pres = Presentation::new(&tri)?;
        let curves = fgdom::curves::enumerate_simple(&tri, &pres, max_weight, 1_000_000)?;
        curves
            .iter()
            .map(|c| {
                Ok(Row {
                    weights: CurveDoc::from_curve(&c.curve).weights,
                    length: fgdom::curves::curve_holonomy(&tri, &coords, &c.curve)?
                        .translation_length(),
                })
            })
            .collect()
    };
    match run() {
        Ok(rows) => deliver_json(out, &rows),
        Err(e) => fail(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cstr(s: &str) -> CString {
        CString::new(s).unwrap()
    }

    unsafe fn buffer_string(buf: *mut FgdomBuffer) -> String {
        let s = CStr::from_ptr(fgdom_buffer_data(buf))
            .to_str()
            .unwrap()
            .to_string();
        fgdom_buffer_free(buf);
        s
    }

    #[test]
    fn roundtrip_through_the_c_abi() {
        let tri = r#"{"schema":1,"genus":1,"punctures":1,
            "gluing":[[0,2,1,0],[0,0,1,1],[0,1,1,2]]}"#;
        let coords = r#"{"schema":1,"coords":{"0":[1.2,0.7],"1":[0.8,-0.3],"2":[1.0,0.4]}}"#;
        unsafe {
            let mut out: *mut FgdomBuffer = ptr::null_mut();
            let code = fgdom_holonomy(cstr(tri).as_ptr(), cstr(coords).as_ptr(), &mut out);
            assert_eq!(code, 0);
            let rep_json = buffer_string(out);
            let mut out2: *mut FgdomBuffer = ptr::null_mut();
            let code = fgdom_fg_coordinates(cstr(&rep_json).as_ptr(), &mut out2);
            assert_eq!(code, 0);
            let coords_json = buffer_string(out2);
            let doc: CoordsDoc = serde_json::from_str(&coords_json).unwrap();
            assert!((doc.coords["0"][0] - 1.2).abs() < 1e-8);
            assert!((doc.coords["0"][1] - 0.7).abs() < 1e-8);
        }
    }

    #[test]
    fn dominate_filling_and_verdict() {
        let tri = r#"{"schema":1,"genus":1,"punctures":1,
            "gluing":[[0,2,1,0],[0,0,1,1],[0,1,1,2]]}"#;
        let theta = 0.7f64;
        let (c, s) = (2.0 * theta.cos(), 2.0 * theta.sin());
        let (c2, s2) = (0.25 * theta.cos(), -0.25 * theta.sin());
        let coords = format!(
            r#"{{"schema":1,"coords":{{"0":[{c},{s}],"1":[{c},{s}],"2":[{c2},{s2}]}}}}"#
        );
        unsafe {
            let mut rep_out: *mut FgdomBuffer = ptr::null_mut();
            let code =
                fgdom_holonomy(cstr(tri).as_ptr(), cstr(&coords).as_ptr(), &mut rep_out);
            assert_eq!(code, 0);
            let rep_json = buffer_string(rep_out);
            let mut out: *mut FgdomBuffer = ptr::null_mut();
            let mut verdict: c_int = -1;
            let code =
                fgdom_dominate_filling(cstr(&rep_json).as_ptr(), 6, &mut out, &mut verdict);
            assert_eq!(code, 0);
            assert_eq!(verdict, 0, "strict verdict");
            let cert = buffer_string(out);
            assert!(cert.contains("\"verdict\": \"strict\""));
        }
    }

    #[test]
    fn errors_set_message_and_code() {
        unsafe {
            let mut out: *mut FgdomBuffer = ptr::null_mut();
            let bad = cstr(r#"{"schema":1,"genus":0,"punctures":1,"gluing":[]}"#);
            let code = fgdom_triangulation_normalize(bad.as_ptr(), &mut out);
            assert_eq!(code, -4, "NonNegativeEuler");
            let msg = CStr::from_ptr(fgdom_last_error_message())
                .to_str()
                .unwrap();
            assert!(msg.contains("Euler"), "{msg}");
        }
    }
}
