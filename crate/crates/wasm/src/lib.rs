//! Browser bindings. Each export returns a JSON string; the plain functions
//! underneath are what the native tests call.

use labstate::bits::{self, BitOp, PBitState};
use labstate::network::{self, EvSetting, Sweeps};
use labstate::Rat;
use serde::Serialize;
use wasm_bindgen::prelude::*;

#[derive(Serialize, Debug, PartialEq)]
pub struct Value {
    pub exact: String,
    pub approx: f64,
}

impl From<&Rat> for Value {
    fn from(r: &Rat) -> Self {
        Value {
            exact: r.to_string(),
            approx: r.to_f64(),
        }
    }
}

#[derive(Serialize, Debug, PartialEq)]
pub struct EvMixture {
    pub explode: Value,
    pub d6: Value,
    pub d7: Value,
}

#[derive(Serialize, Debug, PartialEq)]
pub struct StockpilePoint {
    pub sweeps: u32,
    #[serde(rename = "yield")]
    pub certified: Value,
}

#[derive(Serialize, Debug, PartialEq)]
pub struct Stockpile {
    pub points: Vec<StockpilePoint>,
    pub limit: Value,
}

#[derive(Serialize, Debug, PartialEq)]
pub struct HardyRow {
    pub outcome: String,
    pub probability: Value,
}

#[derive(Serialize, Debug, PartialEq)]
pub struct Hardy {
    pub rows: Vec<HardyRow>,
    pub state: String,
}

#[derive(Serialize, Debug, PartialEq)]
pub struct Composition {
    pub image: String,
    pub name: Option<String>,
    pub code: u8,
}

fn state_from_symbol(c: char) -> Option<PBitState> {
    match c {
        '0' => Some(PBitState::Ground),
        '1' => Some(PBitState::Signal),
        'B' | 'b' => Some(PBitState::Faulty),
        '∅' | 'E' | 'e' => Some(PBitState::Empty),
        _ => None,
    }
}

/// Parses a named operator (`P0`, `Ā`, `Abar`, ...) or a four-symbol image
/// such as `0∅∅∅`, listing where `|0)`, `|1)`, `|B)`, `|∅)` go.
pub fn parse_bitop(text: &str) -> Result<BitOp, String> {
    let t = text.trim();
    if t.eq_ignore_ascii_case("abar") {
        return Ok(BitOp::A_BAR);
    }
    if let Some((_, op)) = BitOp::NAMED.iter().find(|(n, _)| *n == t) {
        return Ok(*op);
    }
    let states: Option<Vec<PBitState>> = t.chars().map(state_from_symbol).collect();
    match states {
        Some(s) if s.len() == 4 => Ok(BitOp::from_image([s[0], s[1], s[2], s[3]])),
        _ => Err(format!(
            "`{t}` is neither an operator name nor a four-symbol image"
        )),
    }
}

pub fn ev_mixture_report(omega_a: &str) -> Result<EvMixture, String> {
    let w: Rat = omega_a.trim().parse().map_err(|e| format!("{e}"))?;
    let r = network::run_ev(&EvSetting::Mixture(w)).map_err(|e| e.to_string())?;
    Ok(EvMixture {
        explode: (&r.explode).into(),
        d6: (&r.d6).into(),
        d7: (&r.d7).into(),
    })
}

pub fn stockpile_report(max_sweeps: u32) -> Result<Stockpile, String> {
    let points = (1..=max_sweeps.clamp(1, 64))
        .map(|n| {
            let y = network::stockpile_yield(Sweeps::Count(n)).map_err(|e| e.to_string())?;
            Ok(StockpilePoint {
                sweeps: n,
                certified: (&y).into(),
            })
        })
        .collect::<Result<_, String>>()?;
    let limit = network::stockpile_yield(Sweeps::Limit).map_err(|e| e.to_string())?;
    Ok(Stockpile {
        points,
        limit: (&limit).into(),
    })
}

pub fn hardy_report() -> Result<Hardy, String> {
    let r = network::run_hardy().map_err(|e| e.to_string())?;
    let rows = [
        ("6,8", &r.p68),
        ("7,8", &r.p78),
        ("7,9", &r.p79),
        ("6,9", &r.p69),
        ("Annihilation", &r.annihilation),
    ]
    .into_iter()
    .map(|(n, p)| HardyRow {
        outcome: n.to_string(),
        probability: p.into(),
    })
    .collect();
    Ok(Hardy {
        rows,
        state: r.final_state.to_string(),
    })
}

/// `second ∘ first`: `first` acts before `second`.
pub fn compose_report(second: &str, first: &str) -> Result<Composition, String> {
    let op = bits::compose(parse_bitop(second)?, parse_bitop(first)?);
    Ok(Composition {
        image: op.image().iter().map(|s| s.symbol()).collect(),
        name: op.name().map(str::to_string),
        code: op.code(),
    })
}

fn to_js<T: Serialize>(r: Result<T, String>) -> Result<String, JsError> {
    let v = r.map_err(|e| JsError::new(&e))?;
    serde_json::to_string(&v).map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen]
pub fn ev_mixture(omega_a: &str) -> Result<String, JsError> {
    to_js(ev_mixture_report(omega_a))
}

#[wasm_bindgen]
pub fn stockpile_curve(max_sweeps: u32) -> Result<String, JsError> {
    to_js(stockpile_report(max_sweeps))
}

#[wasm_bindgen]
pub fn hardy_table() -> Result<String, JsError> {
    to_js(hardy_report())
}

#[wasm_bindgen]
pub fn compose_bitops(second: &str, first: &str) -> Result<String, JsError> {
    to_js(compose_report(second, first))
}
