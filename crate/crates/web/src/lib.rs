//! Browser bindings: a trace heatmap over `(λ, μ)`, the three `F1` forms at
//! one point, and the Legendre-family identity table. Each export returns a
//! JSON string; the plain functions underneath are what the tests call.

use picard_ff::character::Character;
use picard_ff::curve::{self, KoikeEvaluator, PicardEvaluator};
use picard_ff::hypergeom::{ghosh_f1, F1Form, F1Spec, MAX_DOUBLE_SUM_ORDER};
use picard_ff::{Cyclotomic, Field};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Largest field the heatmap will sweep; `(q-2)(q-3)` curves at `O(q)` each.
pub const MAX_GRID_ORDER: u64 = 400;

/// Largest field for the Legendre table; its `2F1` table holds `q - 1` sums of length `q`.
pub const MAX_KOIKE_ORDER: u64 = 5000;

#[derive(Serialize)]
pub struct FieldSummary {
    pub p: u32,
    pub e: u32,
    pub q: u32,
    pub modulus: String,
    pub generator: u32,
}

fn summary(field: &Field) -> FieldSummary {
    FieldSummary {
        p: field.characteristic(),
        e: field.degree(),
        q: field.order(),
        modulus: field.modulus_string(),
        generator: field.generator().code(),
    }
}

#[derive(Serialize)]
pub struct GridCell {
    pub lambda: u32,
    pub mu: u32,
    pub trace: i64,
    pub formula: Option<i64>,
}

#[derive(Serialize)]
pub struct TraceGrid {
    pub field: FieldSummary,
    pub bound: i64,
    pub cells: Vec<GridCell>,
    pub mismatches: usize,
}

#[derive(Serialize)]
pub struct ExactValue {
    pub text: String,
    pub order: u32,
    pub re: f64,
    pub im: f64,
}

impl From<&Cyclotomic> for ExactValue {
    fn from(v: &Cyclotomic) -> Self {
        let z = v.to_complex();
        ExactValue { text: v.to_text(), order: v.order(), re: z.re, im: z.im }
    }
}

#[derive(Serialize)]
pub struct FormValue {
    pub form: String,
    pub value: Option<ExactValue>,
    pub error: Option<String>,
}

#[derive(Serialize)]
pub struct F1Comparison {
    pub field: FieldSummary,
    pub characters: [String; 4],
    pub forms: Vec<FormValue>,
    pub agree: bool,
}

#[derive(Serialize)]
pub struct KoikeRow {
    pub lambda: u32,
    pub trace: i64,
    pub formula: ExactValue,
    pub matches: bool,
}

#[derive(Serialize)]
pub struct KoikeTable {
    pub field: FieldSummary,
    pub rows: Vec<KoikeRow>,
}

fn field_of(q: u64) -> Result<Field, String> {
    Field::with_order(q).map_err(|e| e.to_string())
}

fn to_json<T: Serialize>(v: &T) -> Result<String, String> {
    serde_json::to_string(v).map_err(|e| e.to_string())
}

/// Trace of Frobenius for every admissible `(λ, μ)`, brute force and formula.
pub fn trace_grid(q: u64) -> Result<TraceGrid, String> {
    if q > MAX_GRID_ORDER {
        return Err(format!("q = {q} is above the demo limit {MAX_GRID_ORDER}"));
    }
    let field = field_of(q)?;
    let eval = PicardEvaluator::new(&field).map_err(|e| e.to_string())?;
    let mut cells = Vec::new();
    let mut mismatches = 0;
    for (l, m) in curve::admissible_pairs(&field) {
        let r = eval.report(l, m).map_err(|e| e.to_string())?;
        mismatches += !r.matches as usize;
        cells.push(GridCell { lambda: l.code(), mu: m.code(), trace: r.trace, formula: r.rhs_trace });
    }
    Ok(TraceGrid {
        bound: curve::hasse_weil_bound(curve::Family::Picard, field.order()),
        field: summary(&field),
        cells,
        mismatches,
    })
}

/// `F1(A; B1, B2; C | x, y)` in all three forms; characters by exponent.
pub fn f1_forms(q: u64, exps: [u32; 4], x: u64, y: u64) -> Result<F1Comparison, String> {
    let field = field_of(q)?;
    let chars = exps
        .iter()
        .map(|&m| Character::new(&field, m).map_err(|e| e.to_string()))
        .collect::<Result<Vec<_>, _>>()?;
    let spec = F1Spec {
        a: chars[0],
        b1: chars[1],
        b2: chars[2],
        c: chars[3],
        x: field.elem(x).map_err(|e| e.to_string())?,
        y: field.elem(y).map_err(|e| e.to_string())?,
    };
    let mut values = Vec::new();
    let forms = [F1Form::Definition, F1Form::Single, F1Form::Inverted]
        .into_iter()
        .map(|form| match ghosh_f1(&field, &spec, form) {
            Ok(v) => {
                let out = ExactValue::from(&v);
                values.push(v);
                FormValue { form: form.to_string(), value: Some(out), error: None }
            }
            Err(e) => FormValue { form: form.to_string(), value: None, error: Some(e.to_string()) },
        })
        .collect();
    let agree = values.len() > 1 && values.windows(2).all(|w| w[0] == w[1]);
    Ok(F1Comparison {
        field: summary(&field),
        characters: [0, 1, 2, 3].map(|i| chars[i].to_string()),
        forms,
        agree,
    })
}

/// `1 + p - #E` against `-p φ(-1) 2F1(φ, φ; ε | λ)` for every `λ ≠ 0, 1`.
pub fn koike_table(q: u64) -> Result<KoikeTable, String> {
    if q > MAX_KOIKE_ORDER {
        return Err(format!("q = {q} is above the demo limit {MAX_KOIKE_ORDER}"));
    }
    let field = field_of(q)?;
    let eval = KoikeEvaluator::new(&field).map_err(|e| e.to_string())?;
    let rows = field
        .elements()
        .filter(|&l| !l.is_zero() && l != picard_ff::Elem::ONE)
        .map(|l| {
            let r = eval.report(l).map_err(|e| e.to_string())?;
            Ok(KoikeRow { lambda: l.code(), trace: r.trace, formula: ExactValue::from(&r.rhs), matches: r.matches })
        })
        .collect::<Result<Vec<_>, String>>()?;
    Ok(KoikeTable { field: summary(&field), rows })
}

#[wasm_bindgen(js_name = traceGrid)]
pub fn trace_grid_json(q: u32) -> Result<String, JsError> {
    trace_grid(q as u64).and_then(|g| to_json(&g)).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = f1Forms)]
pub fn f1_forms_json(q: u32, a: u32, b1: u32, b2: u32, c: u32, x: u32, y: u32) -> Result<String, JsError> {
    f1_forms(q as u64, [a, b1, b2, c], x as u64, y as u64)
        .and_then(|v| to_json(&v))
        .map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = koikeTable)]
pub fn koike_table_json(q: u32) -> Result<String, JsError> {
    koike_table(q as u64).and_then(|t| to_json(&t)).map_err(|e| JsError::new(&e))
}

/// Field orders the double-sum form accepts.
#[wasm_bindgen(js_name = maxDoubleSumOrder)]
pub fn max_double_sum_order() -> u32 {
    MAX_DOUBLE_SUM_ORDER
}
