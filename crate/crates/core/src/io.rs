//! The JSON formats shared between the library and the command-line
//! front end. Every format is fixed: matrices carry their modulus, class
//! functions are flat entry lists in serialization order, and points are
//! coefficient lists indexed by x1-degree.

use crate::chernikov::Presentation;
use crate::cohomology::Cocycle;
use crate::error::{Error, Result};
use crate::gf::{HomPoly, Prime};
use crate::linalg::{Matrix, SkewTuple};
use crate::pencil::BlockSpec;
use crate::weakcong::{ClassFunction, ProjPoint};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixJson {
    pub p: u64,
    pub rows: Vec<Vec<u64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SkewTupleJson {
    pub p: u64,
    pub m: usize,
    pub mats: Vec<MatrixJson>,
}

/// A block spec: {"kind":"eps","d":..} or {"kind":"point","g":[..],"d":..}
/// with g the coefficients of the point polynomial by x1-degree.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum BlockSpecJson {
    #[serde(rename = "eps")]
    Eps { d: usize },
    #[serde(rename = "point")]
    Point { g: Vec<u64>, d: usize },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClassEntryJson {
    #[serde(flatten)]
    pub spec: BlockSpecJson,
    pub mult: usize,
}

pub type ClassFunctionJson = Vec<ClassEntryJson>;

pub fn matrix_to_json(m: &Matrix) -> MatrixJson {
    MatrixJson {
        p: m.modulus().get(),
        rows: (0..m.rows()).map(|i| m.row(i).to_vec()).collect(),
    }
}

pub fn matrix_from_json(j: &MatrixJson) -> Result<Matrix> {
    let p = Prime::new(j.p)?;
    for row in &j.rows {
        for &e in row {
            if e >= j.p {
                return Err(Error::Validation(format!(
                    "entry {e} out of range for modulus {}",
                    j.p
                )));
            }
        }
    }
    Matrix::from_rows(p, j.rows.clone())
}

pub fn skew_tuple_to_json(a: &SkewTuple) -> serde_json::Value {
    serde_json::to_value(SkewTupleJson {
        p: a.modulus().get(),
        m: a.size(),
        mats: a.mats().iter().map(matrix_to_json).collect(),
    })
    .expect("serializable")
}

pub fn skew_tuple_from_json(j: &SkewTupleJson) -> Result<SkewTuple> {
    let p = Prime::new(j.p)?;
    let mats = j
        .mats
        .iter()
        .map(|mj| {
            if mj.p != j.p {
                return Err(Error::ModulusMismatch(j.p, mj.p));
            }
            matrix_from_json(mj)
        })
        .collect::<Result<Vec<_>>>()?;
    SkewTuple::new(p, j.m, mats)
}

pub fn block_spec_to_json(spec: &BlockSpec) -> BlockSpecJson {
    match &spec.point {
        ProjPoint::Eps => BlockSpecJson::Eps { d: spec.d },
        ProjPoint::Point(g) => BlockSpecJson::Point {
            g: g.coeffs().to_vec(),
            d: spec.d,
        },
    }
}

pub fn block_spec_from_json(p: Prime, j: &BlockSpecJson) -> Result<BlockSpec> {
    match j {
        BlockSpecJson::Eps { d } => BlockSpec::eps(*d),
        BlockSpecJson::Point { g, d } => {
            let poly = HomPoly::new(p, g.clone())?;
            BlockSpec::new(ProjPoint::point(poly)?, *d)
        }
    }
}

pub fn class_function_to_json(rho: &ClassFunction) -> ClassFunctionJson {
    rho.iter()
        .map(|(spec, mult)| ClassEntryJson {
            spec: block_spec_to_json(spec),
            mult,
        })
        .collect()
}

pub fn class_function_from_json(p: Prime, j: &ClassFunctionJson) -> Result<ClassFunction> {
    let mut rho = ClassFunction::new(p);
    for entry in j {
        if entry.mult == 0 {
            return Err(Error::Validation("zero multiplicity entry".into()));
        }
        rho.add(block_spec_from_json(p, &entry.spec)?, entry.mult);
    }
    Ok(rho)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RelationJson {
    pub a: String,
    pub b: String,
    pub value: Vec<u64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PresentationJson {
    pub p: u64,
    pub n: usize,
    pub gens: Vec<String>,
    pub rels: Vec<RelationJson>,
}

pub fn presentation_to_json(pres: &Presentation) -> PresentationJson {
    PresentationJson {
        p: pres.p.get(),
        n: pres.n,
        gens: pres.generator_names(),
        rels: pres
            .relations
            .iter()
            .map(|r| RelationJson {
                a: format!("h{}_{}", r.block, r.i),
                b: format!("h{}_{}", r.block, r.j),
                value: r.value.clone(),
            })
            .collect(),
    }
}

/// Dense cocycle table as nested arrays indexed by the mixed-radix
/// encodings: table[x][y] is the value vector in F_p^n.
pub fn cocycle_to_json(mu: &Cocycle) -> serde_json::Value {
    let s = mu.elements();
    let table: Vec<Vec<Vec<u64>>> = (0..s)
        .map(|x| (0..s).map(|y| mu.get(x, y).to_vec()).collect())
        .collect();
    serde_json::json!({
        "p": mu.modulus().get(),
        "m": mu.top_rank(),
        "n": mu.bottom_rank(),
        "table": table,
    })
}
