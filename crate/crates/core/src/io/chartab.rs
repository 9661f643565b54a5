//! Character table files.
//!
//! ```json
//! {"classes":[{"element_order":1,"size":"1"},...],"exponent":12,
//!  "group_order":"24","irreducibles":[[1,1,...],...],"square_map":[0,...]}
//! ```
//!
//! Class indices in `square_map` are 0-based positions in `classes`. A value is
//! an integer or `{"coeffs":{"k":c,...},"conductor":n}` meaning `Σ c·ζ_n^k`.
//! Export writes keys in sorted order with no whitespace, so equal tables give
//! identical bytes.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use serde::{Deserialize, Serialize};

use crate::characters::{CharacterTable, ClassLayout, TableSource};
use crate::cyclotomic::{Cyclotomic, MAX_CONDUCTOR};
use crate::error::{Error, Result};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TableJson {
    classes: Vec<ClassJson>,
    exponent: u64,
    group_order: String,
    irreducibles: Vec<Vec<ValueJson>>,
    square_map: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClassJson {
    element_order: u64,
    size: String,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ValueJson {
    Int(i64),
    Cyc(CycJson),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CycJson {
    coeffs: BTreeMap<String, i64>,
    conductor: u32,
}

fn parse_big(s: &str, what: &str) -> Result<BigUint> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Format(format!("{what} `{s}` is not a decimal integer")));
    }
    s.parse()
        .map_err(|_| Error::Format(format!("{what} `{s}` is not a decimal integer")))
}

fn decode_value(v: &ValueJson) -> Result<Cyclotomic> {
    match v {
        ValueJson::Int(k) => Ok(Cyclotomic::from(*k)),
        ValueJson::Cyc(c) => {
            if c.conductor == 0 || c.conductor > MAX_CONDUCTOR {
                return Err(Error::Format(format!("conductor {} out of range", c.conductor)));
            }
            let mut terms = BTreeMap::new();
            for (k, &coef) in &c.coeffs {
                let e: u32 = k
                    .parse()
                    .ok()
                    .filter(|&e| e < c.conductor)
                    .ok_or_else(|| Error::Format(format!("exponent `{k}` out of range")))?;
                terms.insert(e, BigInt::from(coef));
            }
            Ok(Cyclotomic::from_exponents(c.conductor, &terms))
        }
    }
}

fn encode_value(v: &Cyclotomic) -> Result<ValueJson> {
    let overflow = || Error::Format(format!("value {v} has coefficients beyond 64 bits"));
    if let Some(k) = v.to_integer() {
        return i64::try_from(k).map(ValueJson::Int).map_err(|_| overflow());
    }
    let terms = v.small_terms().ok_or_else(overflow)?;
    Ok(ValueJson::Cyc(CycJson {
        coeffs: terms.into_iter().map(|(k, c)| (k.to_string(), c)).collect(),
        conductor: v.conductor(),
    }))
}

/// Parses and validates a table file. Its classes are those listed in the file.
pub fn parse_character_table(text: &str) -> Result<CharacterTable> {
    let raw: TableJson = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    let r = raw.classes.len();
    if r == 0 {
        return Err(Error::Format("no classes".into()));
    }
    if raw.square_map.len() != r {
        return Err(Error::Format(format!(
            "square_map has {} entries for {r} classes",
            raw.square_map.len()
        )));
    }
    if raw.irreducibles.len() != r || raw.irreducibles.iter().any(|row| row.len() != r) {
        return Err(Error::Format(format!("irreducibles must form a {r}×{r} array")));
    }
    let layout = ClassLayout {
        group_order: parse_big(&raw.group_order, "group_order")?,
        sizes: raw
            .classes
            .iter()
            .map(|c| parse_big(&c.size, "class size"))
            .collect::<Result<_>>()?,
        element_orders: raw.classes.iter().map(|c| c.element_order).collect(),
        square_map: raw.square_map,
    };
    if layout.element_orders.contains(&0) {
        return Err(Error::Format("element orders must be positive".into()));
    }
    if layout.exponent() != raw.exponent {
        return Err(Error::Consistency(format!(
            "exponent {} is not the lcm {} of the element orders",
            raw.exponent,
            layout.exponent()
        )));
    }
    let rows = raw
        .irreducibles
        .iter()
        .map(|row| row.iter().map(decode_value).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    CharacterTable::new(layout, rows, TableSource::Imported)
}

/// Canonical compact JSON for a table.
pub fn write_character_table(table: &CharacterTable) -> Result<String> {
    let layout = table.layout();
    let raw = TableJson {
        classes: layout
            .sizes
            .iter()
            .zip(&layout.element_orders)
            .map(|(s, &o)| ClassJson {
                element_order: o,
                size: s.to_string(),
            })
            .collect(),
        exponent: layout.exponent(),
        group_order: layout.group_order.to_string(),
        irreducibles: table
            .irreducibles()
            .iter()
            .map(|row| row.iter().map(encode_value).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?,
        square_map: layout.square_map.clone(),
    };
    Ok(serde_json::to_string(&raw).expect("serializable"))
}
