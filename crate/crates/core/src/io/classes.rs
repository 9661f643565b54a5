//! Class listings as JSON.

use serde::{Deserialize, Serialize};

use crate::conjugacy::ClassTable;
use crate::error::{Error, Result};
use crate::io::parse_permutation_list;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassRecord {
    pub element_order: u64,
    pub index: usize,
    /// Cycle notation, 1-based.
    pub representative: String,
    pub size: String,
    /// Index of the class containing the squares.
    pub square_index: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassListing {
    pub classes: Vec<ClassRecord>,
    pub format: String,
    pub group_order: String,
}

impl ClassListing {
    pub fn from_table(table: &ClassTable<'_>) -> Self {
        ClassListing {
            classes: table
                .classes()
                .iter()
                .map(|c| ClassRecord {
                    element_order: c.element_order,
                    index: c.index,
                    representative: c.representative.to_string(),
                    size: c.size.to_string(),
                    square_index: table.square_map()[c.index],
                })
                .collect(),
            format: crate::stringc::REPORT_FORMAT.to_string(),
            group_order: table.group_order().to_string(),
        }
    }
}

pub fn write_class_listing(listing: &ClassListing) -> String {
    serde_json::to_string(listing).expect("serializable")
}

/// Parses a listing and checks its internal structure; it is not compared with any group.
pub fn parse_class_listing(text: &str) -> Result<ClassListing> {
    let l: ClassListing = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    if l.format != crate::stringc::REPORT_FORMAT {
        return Err(Error::Format(format!("unknown format `{}`", l.format)));
    }
    let digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    if !digits(&l.group_order) {
        return Err(Error::Format("group_order is not a decimal integer".into()));
    }
    for (i, c) in l.classes.iter().enumerate() {
        if c.index != i || c.square_index >= l.classes.len() || !digits(&c.size) || c.element_order == 0 {
            return Err(Error::Format(format!("malformed class record {}", i + 1)));
        }
        let rep = parse_permutation_list(&c.representative)?;
        if rep.len() != 1 {
            return Err(Error::Format(format!(
                "class {} needs exactly one representative",
                i + 1
            )));
        }
    }
    Ok(l)
}
