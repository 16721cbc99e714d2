//! JSON encodings of the domain objects: ring descriptors, elements,
//! sigma-polynomials, scalars, lattices and the report types.

use serde_json::{json, Map, Value};

use valrank_core::building::{ConvexHull, LatticeClass};
use valrank_core::chain::{GaloisRing, GrElem};
use valrank_core::codes::{FiltrationReport, SingletonReport};
use valrank_core::matrix::Matrix;
use valrank_core::mustafin::{FiberReport, MpReport, SubsetTable, VertexReport};
use valrank_core::scalar::{Backend, Scalar};
use valrank_core::skew::SigmaPoly;
use valrank_core::valuation::Valuation;

pub fn ring_json(ring: &GaloisRing) -> Value {
    json!({
        "p": ring.p(),
        "k": ring.depth(),
        "n": ring.degree(),
        "h": ring.modulus,
    })
}

pub fn elem_json(e: &GrElem) -> Value {
    json!(e.coeffs)
}

pub fn poly_json(f: &SigmaPoly) -> Value {
    Value::Array(f.coeffs.iter().map(elem_json).collect())
}

/// Standalone scalar encoding: p-adic values as rational strings, t-adic
/// ones as canonical sparse polynomial strings.
pub fn scalar_json(s: &Scalar) -> Value {
    match s {
        Scalar::Padic { p, value } => json!({
            "backend": "padic",
            "p": p,
            "value": value.to_string(),
        }),
        Scalar::Tadic { num, den } => json!({
            "backend": "tadic",
            "num": num.to_string(),
            "den": den.to_string(),
        }),
    }
}

pub fn scalar_from_json(v: &Value) -> Result<Scalar, String> {
    let backend = v
        .get("backend")
        .and_then(Value::as_str)
        .ok_or("scalar needs a backend tag")?;
    match backend {
        "padic" => {
            let p = v
                .get("p")
                .and_then(Value::as_u64)
                .ok_or("padic scalar needs p")?;
            let b = Backend::padic(p).map_err(|e| e.to_string())?;
            let text = v
                .get("value")
                .and_then(Value::as_str)
                .ok_or("padic scalar needs a value string")?;
            crate::expr::parse_scalar(text, b)
        }
        "tadic" => {
            let num = v
                .get("num")
                .and_then(Value::as_str)
                .ok_or("tadic scalar needs num")?;
            let den = v.get("den").and_then(Value::as_str).unwrap_or("1");
            let num = crate::expr::parse_scalar(num, Backend::Tadic)?;
            let den = crate::expr::parse_scalar(den, Backend::Tadic)?;
            num.div(&den).map_err(|e| e.to_string())
        }
        other => Err(format!("unknown scalar backend '{other}'")),
    }
}

/// Matrix as a row-major array of standalone scalar encodings.
pub fn matrix_from_scalar_json(v: &Value) -> Result<Matrix, String> {
    let rows = v.as_array().ok_or("matrix must be an array of rows")?;
    let mut entries: Vec<Scalar> = Vec::new();
    let mut cols = None;
    for row in rows {
        let row = row.as_array().ok_or("matrix rows must be arrays")?;
        if *cols.get_or_insert(row.len()) != row.len() {
            return Err("matrix rows must have equal length".into());
        }
        for e in row {
            entries.push(scalar_from_json(e)?);
        }
    }
    let cols = cols.filter(|&c| c > 0).ok_or("matrix must be nonempty")?;
    let backend = entries[0].backend();
    Matrix::new(backend, rows.len(), cols, entries).map_err(|e| e.to_string())
}

/// Matrix as a row-major array of standalone scalar encodings.
pub fn matrix_scalar_json(m: &Matrix) -> Value {
    let rows: Vec<Value> = (0..m.rows())
        .map(|i| Value::Array((0..m.cols()).map(|j| scalar_json(m.at(i, j))).collect()))
        .collect();
    Value::Array(rows)
}

/// Matrix entries as canonical scalar strings, row-major rows.
pub fn matrix_json(m: &Matrix) -> Value {
    let rows: Vec<Value> = (0..m.rows())
        .map(|i| {
            Value::Array(
                (0..m.cols())
                    .map(|j| Value::String(m.at(i, j).to_string()))
                    .collect(),
            )
        })
        .collect();
    Value::Array(rows)
}

pub fn lattice_json(class: &LatticeClass) -> Value {
    let mut obj = Map::new();
    match class.backend() {
        Backend::Padic { p } => {
            obj.insert("backend".into(), json!("padic"));
            obj.insert("p".into(), json!(p));
        }
        Backend::Tadic => {
            obj.insert("backend".into(), json!("tadic"));
        }
    }
    obj.insert("d".into(), json!(class.dim()));
    obj.insert("matrix".into(), matrix_json(class.matrix()));
    Value::Object(obj)
}

pub fn valuation_json(v: &Valuation) -> Value {
    match v {
        Valuation::Finite(x) => json!(x),
        Valuation::Infinite => json!("inf"),
    }
}

pub fn hull_json(hull: &ConvexHull) -> Value {
    json!({
        "generator_count": hull.generators.len(),
        "vertex_count": hull.vertices.len(),
        "vertices": hull.vertices.iter().map(lattice_json).collect::<Vec<_>>(),
    })
}

pub fn filtration_json(report: &FiltrationReport) -> Value {
    json!({
        "depths": report.depths,
        "k_values": report.k_values.iter().map(|k| k.to_string()).collect::<Vec<_>>(),
        "d_values": report.d_values,
        "mrd": report.mrd_flags,
        "divisor_valuations": report
            .divisor_valuations
            .iter()
            .map(valuation_json)
            .collect::<Vec<_>>(),
    })
}

pub fn singleton_json(report: &SingletonReport) -> Value {
    json!({
        "depth": report.depth,
        "min_distance": report.min_distance,
        "bound": report.bound,
        "free_rank": report.free_rank,
        "is_free": report.is_free,
        "is_mrd": report.is_mrd,
    })
}

fn subset_table_json(table: &SubsetTable, n: usize) -> Value {
    let mut obj = Map::new();
    for (mask, dim) in table {
        if *mask == 0 {
            continue;
        }
        let key: Vec<String> = (0..n)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| (i + 1).to_string())
            .collect();
        obj.insert(key.join(","), json!(dim));
    }
    Value::Object(obj)
}

pub fn vertex_report_json(report: &VertexReport, n: usize) -> Value {
    json!({
        "vertex": matrix_json(report.vertex.matrix()),
        "rank_vector": report.rank_vector,
        "d_table": subset_table_json(&report.d_table, n),
        "dimension": report.dimension,
        "top_multidegrees": report.top_multidegrees,
        "is_component": report.is_component,
    })
}

pub fn fiber_json(report: &FiberReport, n: usize) -> Value {
    json!({
        "finite_residue_field": report.finite_residue_field,
        "vertex_count": report.reports.len(),
        "component_count": report.components().count(),
        "reports": report
            .reports
            .iter()
            .map(|r| vertex_report_json(r, n))
            .collect::<Vec<_>>(),
    })
}

pub fn mp_json(report: &MpReport) -> Value {
    json!({
        "saturated": report.saturated,
        "mp_dimension": report.mp_dimension,
        "gamma": report.gamma.iter().map(lattice_json).collect::<Vec<_>>(),
        "hull_contains_standard": report.hull_contains_standard,
    })
}

/// Reads a ring descriptor {"p":..,"k":..,"n":..} (the basic irreducible is
/// canonical, so "h" is informative output only and ignored on input).
pub fn ring_from_json(v: &Value) -> Result<GaloisRing, String> {
    let p = v.get("p").and_then(Value::as_u64).ok_or("ring needs p")?;
    let k = v.get("k").and_then(Value::as_u64).ok_or("ring needs k")?;
    let n = v.get("n").and_then(Value::as_u64).ok_or("ring needs n")?;
    GaloisRing::new(p, k as u32, n as usize).map_err(|e| e.to_string())
}

pub fn elem_from_json(v: &Value, ring: &GaloisRing) -> Result<GrElem, String> {
    let arr = v.as_array().ok_or("element must be a coefficient array")?;
    if arr.len() > ring.degree() {
        return Err(format!(
            "element takes at most {} coefficients, got {}",
            ring.degree(),
            arr.len()
        ));
    }
    let mut coeffs: Vec<u64> = arr
        .iter()
        .map(|c| {
            c.as_i64()
                .map(|x| ring.zk.reduce_i64(x))
                .ok_or("element coefficients must be integers")
        })
        .collect::<Result<_, _>>()?;
    coeffs.resize(ring.degree(), 0);
    Ok(ring.from_coeffs(&coeffs))
}

pub fn poly_from_json(v: &Value, ring: &GaloisRing) -> Result<SigmaPoly, String> {
    let arr = v.as_array().ok_or("sigma-polynomial must be an array")?;
    if arr.len() > ring.degree() {
        return Err("more coefficients than sigma powers".into());
    }
    let mut coeffs: Vec<GrElem> = arr
        .iter()
        .map(|c| elem_from_json(c, ring))
        .collect::<Result<_, _>>()?;
    while coeffs.len() < ring.degree() {
        coeffs.push(ring.zero());
    }
    Ok(SigmaPoly::from_coeffs(ring, coeffs))
}
