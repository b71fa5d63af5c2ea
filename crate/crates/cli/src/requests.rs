//! Request envelopes, dispatch, and response rendering. Every request
//! body carries a version field and is validated before any work runs;
//! responses are emitted as one compact JSON document plus a newline so
//! identical requests produce identical bytes.

use pencilform::chernikov::{
    build_presentation, decide_isomorphic_with_limit, presentation_n1, verify_presentation,
    GroupModel,
};
use pencilform::cohomology::{cocycle_from_form, tau, SkewForm};
use pencilform::io::{
    class_function_from_json, class_function_to_json, cocycle_to_json, matrix_to_json,
    presentation_to_json, skew_tuple_from_json, skew_tuple_to_json, ClassFunctionJson,
    MatrixJson, PresentationJson, SkewTupleJson,
};
use pencilform::linalg::SkewTuple;
use pencilform::pencil::{canonical_pair, congruence_transform};
use pencilform::weakcong::{orbit_canonical, DEFAULT_ORBIT_LIMIT};
use pencilform::{Error, Prime, Result};
use serde::{Deserialize, Serialize};

const VERSION: u32 = 1;

fn parse<T: for<'de> Deserialize<'de>>(input: &str) -> Result<T> {
    serde_json::from_str(input).map_err(|e| Error::Validation(format!("bad request: {e}")))
}

fn check_version(version: u32) -> Result<()> {
    if version == VERSION {
        Ok(())
    } else {
        Err(Error::Validation(format!(
            "unsupported request version {version}, expected {VERSION}"
        )))
    }
}

fn respond<T: Serialize>(body: &T) -> Result<String> {
    let mut s = serde_json::to_string(body)
        .map_err(|e| Error::Internal(format!("response serialization: {e}")))?;
    s.push('\n');
    Ok(s)
}

#[derive(Deserialize)]
struct CanonRequest {
    version: u32,
    tuple: SkewTupleJson,
}

#[derive(Serialize)]
struct CanonResponse {
    version: u32,
    rho: ClassFunctionJson,
    rho_weak_canonical: ClassFunctionJson,
    transform: MatrixJson,
}

pub fn cmd_canon(input: &str) -> Result<String> {
    let req: CanonRequest = parse(input)?;
    check_version(req.version)?;
    let tuple = skew_tuple_from_json(&req.tuple)?;
    let (p_mat, rho) = congruence_transform(&tuple)?;
    let weak = orbit_canonical(&rho, DEFAULT_ORBIT_LIMIT)?;
    respond(&CanonResponse {
        version: VERSION,
        rho: class_function_to_json(&rho),
        rho_weak_canonical: class_function_to_json(&weak),
        transform: matrix_to_json(p_mat.matrix()),
    })
}

#[derive(Deserialize)]
struct IsoRequest {
    version: u32,
    a: SkewTupleJson,
    b: SkewTupleJson,
}

#[derive(Serialize)]
struct CertificateJson {
    p_mat: MatrixJson,
    q_mat: MatrixJson,
}

#[derive(Serialize)]
struct IsoResponse {
    version: u32,
    isomorphic: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificate: Option<CertificateJson>,
}

/// Certificate semantics: b equals congr_act(P, tuple_act(a, Q)) entry for
/// entry.
pub fn cmd_iso(input: &str, limit: u128) -> Result<String> {
    let req: IsoRequest = parse(input)?;
    check_version(req.version)?;
    let a = skew_tuple_from_json(&req.a)?;
    let b = skew_tuple_from_json(&req.b)?;
    let isomorphic = decide_isomorphic_with_limit(&a, &b, limit)?;
    let certificate = if isomorphic && a.size() == b.size() {
        find_certificate(&a, &b, limit)?
    } else {
        None
    };
    respond(&IsoResponse {
        version: VERSION,
        isomorphic,
        certificate,
    })
}

fn find_certificate(
    a: &SkewTuple,
    b: &SkewTuple,
    limit: u128,
) -> Result<Option<CertificateJson>> {
    Ok(
        pencilform::chernikov::weak_congruence_certificate(a, b, limit)?.map(|(p_mat, q)| {
            CertificateJson {
                p_mat: matrix_to_json(p_mat.matrix()),
                q_mat: matrix_to_json(q.matrix()),
            }
        }),
    )
}

#[derive(Deserialize)]
struct ClassesRequest {
    version: u32,
    p: u64,
    m: usize,
}

#[derive(Serialize)]
struct ClassesResponse {
    version: u32,
    p: u64,
    m: usize,
    count: usize,
    classes: Vec<ClassFunctionJson>,
}

pub fn cmd_classes(input: &str, limit: u128) -> Result<String> {
    let req: ClassesRequest = parse(input)?;
    check_version(req.version)?;
    let p = Prime::new(req.p)?;
    let classes = pencilform::weakcong::enumerate_classes(p, req.m, limit)?;
    respond(&ClassesResponse {
        version: VERSION,
        p: req.p,
        m: req.m,
        count: classes.len(),
        classes: classes.iter().map(class_function_to_json).collect(),
    })
}

#[derive(Deserialize)]
struct N1Request {
    k: usize,
    l: usize,
}

#[derive(Deserialize)]
struct PresentRequest {
    version: u32,
    p: u64,
    #[serde(default)]
    rho: Option<ClassFunctionJson>,
    #[serde(default)]
    n1: Option<N1Request>,
}

#[derive(Serialize)]
struct PresentResponse {
    version: u32,
    presentation: PresentationJson,
}

pub fn cmd_present(input: &str, text: bool) -> Result<String> {
    let req: PresentRequest = parse(input)?;
    check_version(req.version)?;
    let p = Prime::new(req.p)?;
    let pres = match (&req.rho, &req.n1) {
        (Some(rho_json), None) => {
            let rho = class_function_from_json(p, rho_json)?;
            build_presentation(&rho)?
        }
        (None, Some(n1)) => presentation_n1(p, n1.k, n1.l),
        _ => {
            return Err(Error::Validation(
                "provide exactly one of `rho` or `n1`".into(),
            ))
        }
    };
    if text {
        Ok(pres.to_string())
    } else {
        respond(&PresentResponse {
            version: VERSION,
            presentation: presentation_to_json(&pres),
        })
    }
}

#[derive(Deserialize)]
struct VerifyRequest {
    version: u32,
    p: u64,
    rho: ClassFunctionJson,
}

#[derive(Serialize)]
struct VerifyResponse {
    version: u32,
    pass: bool,
    checks_run: usize,
    failures: Vec<String>,
}

pub fn cmd_verify(input: &str) -> Result<String> {
    let req: VerifyRequest = parse(input)?;
    check_version(req.version)?;
    let p = Prime::new(req.p)?;
    let rho = class_function_from_json(p, &req.rho)?;
    let pres = build_presentation(&rho)?;
    let model = GroupModel::new(canonical_pair(&rho)?)?;
    let report = verify_presentation(&model, &pres)?;
    respond(&VerifyResponse {
        version: VERSION,
        pass: report.pass,
        checks_run: report.checks_run,
        failures: report.failures,
    })
}

#[derive(Deserialize)]
struct CocycleRequest {
    version: u32,
    tuple: SkewTupleJson,
}

#[derive(Serialize)]
struct CocycleResponse {
    version: u32,
    mu: serde_json::Value,
    normalized: bool,
    cocycle: bool,
    tau: serde_json::Value,
}

pub fn cmd_cocycle(input: &str) -> Result<String> {
    let req: CocycleRequest = parse(input)?;
    check_version(req.version)?;
    let tuple = skew_tuple_from_json(&req.tuple)?;
    let form = SkewForm(tuple);
    let mu = cocycle_from_form(&form)?;
    let recovered = tau(&mu)?;
    respond(&CocycleResponse {
        version: VERSION,
        mu: cocycle_to_json(&mu),
        normalized: mu.is_normalized(),
        cocycle: true,
        tau: skew_tuple_to_json(&recovered.0),
    })
}
