//! Generator files.
//!
//! Text form: an optional `degree N` line, then one permutation per nonempty
//! line in disjoint cycle notation with 1-based points, e.g. `(1,2,3)(4,5)`.
//! `()` is the identity and `#` starts a comment.
//!
//! JSON form: `{"degree": N, "generators": [[images...], ...]}` with 1-based images.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Points beyond this are rejected rather than allocated.
pub const MAX_DEGREE: usize = 1 << 22;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupSpec {
    pub degree: usize,
    pub generators: Vec<Permutation>,
}

impl GroupSpec {
    pub fn new(generators: Vec<Permutation>) -> Self {
        let degree = generators.iter().map(|g| g.degree()).max().unwrap_or(0);
        GroupSpec::with_degree(degree, generators)
    }

    fn with_degree(degree: usize, generators: Vec<Permutation>) -> Self {
        let generators = generators.into_iter().map(|g| g.extended(degree)).collect();
        GroupSpec { degree, generators }
    }
}

/// Parses either format, chosen by whether the first non-blank character is `{`.
pub fn parse_group_file(text: &str) -> Result<GroupSpec> {
    if text.trim_start().starts_with('{') {
        parse_group_json(text)
    } else {
        parse_group_text(text)
    }
}

pub fn parse_group_text(text: &str) -> Result<GroupSpec> {
    let mut declared: Option<usize> = None;
    let mut gens = Vec::new();
    let mut seen_content = false;
    for (lineno, raw) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let line = match raw.find('#') {
            Some(k) => &raw[..k],
            None => raw,
        };
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let indent = line.len() - line.trim_start().len();
        if !seen_content {
            seen_content = true;
            if let Some(rest) = trimmed.strip_prefix("degree") {
                let n: usize = rest
                    .trim()
                    .parse()
                    .map_err(|_| Error::parse(line_no, indent + 7, "expected a positive integer after `degree`"))?;
                if n == 0 || n > MAX_DEGREE {
                    return Err(Error::parse(line_no, indent + 7, format!("degree {n} out of range")));
                }
                declared = Some(n);
                continue;
            }
        }
        let cycles = parse_cycles(trimmed, line_no, indent + 1)?;
        if let Some(n) = declared {
            if let Some(&p) = cycles.iter().flatten().max() {
                if p as usize > n {
                    return Err(Error::DegreeMismatch {
                        declared: n,
                        point: p as usize,
                    });
                }
            }
        }
        let perm = Permutation::from_cycles(declared.unwrap_or(0), &cycles)
            .map_err(|e| Error::parse(line_no, indent + 1, e.to_string()))?;
        gens.push(perm);
    }
    let degree = declared.unwrap_or_else(|| gens.iter().map(|g| g.degree()).max().unwrap_or(0));
    Ok(GroupSpec::with_degree(degree, gens))
}

/// Parses one permutation in cycle notation. `column` is the 1-based column of `s[0]`.
pub fn parse_cycles(s: &str, line: usize, column: usize) -> Result<Vec<Vec<u32>>> {
    let bytes = s.as_bytes();
    let mut i = 0;
    let mut cycles = Vec::new();
    let err = |at: usize, msg: &str| Error::parse(line, column + at, msg);
    let skip_ws = |i: &mut usize| {
        while *i < bytes.len() && bytes[*i].is_ascii_whitespace() {
            *i += 1;
        }
    };
    skip_ws(&mut i);
    if i == bytes.len() {
        return Err(err(i, "expected a cycle"));
    }
    while i < bytes.len() {
        if bytes[i] != b'(' {
            return Err(err(i, "expected `(`"));
        }
        i += 1;
        let mut cycle = Vec::new();
        skip_ws(&mut i);
        if i < bytes.len() && bytes[i] == b')' {
            i += 1;
        } else {
            loop {
                skip_ws(&mut i);
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if start == i {
                    return Err(err(
                        i,
                        if i == bytes.len() {
                            "unclosed cycle"
                        } else {
                            "expected a point"
                        },
                    ));
                }
                let pt: u64 = s[start..i].parse().map_err(|_| err(start, "point out of range"))?;
                if pt == 0 || pt as usize > MAX_DEGREE {
                    return Err(err(start, "point out of range"));
                }
                cycle.push(pt as u32);
                skip_ws(&mut i);
                match bytes.get(i) {
                    Some(b',') => i += 1,
                    Some(b')') => {
                        i += 1;
                        break;
                    }
                    None => return Err(err(i, "unclosed cycle")),
                    Some(_) => return Err(err(i, "expected `,` or `)`")),
                }
            }
        }
        if !cycle.is_empty() {
            cycles.push(cycle);
        }
        skip_ws(&mut i);
    }
    Ok(cycles)
}

/// Parses a `;`-separated list of permutations, as taken by `--gens`.
pub fn parse_permutation_list(s: &str) -> Result<Vec<Permutation>> {
    let mut out = Vec::new();
    let mut offset = 0;
    for part in s.split(';') {
        let col = offset + 1 + (part.len() - part.trim_start().len());
        let cycles = parse_cycles(part.trim(), 1, col)?;
        let perm = Permutation::from_cycles(0, &cycles).map_err(|e| Error::parse(1, col, e.to_string()))?;
        out.push(perm);
        offset += part.len() + 1;
    }
    let degree = out.iter().map(|p| p.degree()).max().unwrap_or(0);
    Ok(out.into_iter().map(|p| p.extended(degree)).collect())
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupJson {
    degree: usize,
    generators: Vec<Vec<u64>>,
}

pub fn parse_group_json(text: &str) -> Result<GroupSpec> {
    let raw: GroupJson = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    if raw.degree == 0 || raw.degree > MAX_DEGREE {
        return Err(Error::Format(format!("degree {} out of range", raw.degree)));
    }
    let mut gens = Vec::with_capacity(raw.generators.len());
    for (k, images) in raw.generators.iter().enumerate() {
        if images.len() > raw.degree {
            return Err(Error::DegreeMismatch {
                declared: raw.degree,
                point: images.len(),
            });
        }
        if let Some(&bad) = images.iter().find(|&&im| im as usize > raw.degree) {
            return Err(Error::DegreeMismatch {
                declared: raw.degree,
                point: bad as usize,
            });
        }
        let p = Permutation::from_one_based(images).map_err(|e| Error::Format(format!("generator {}: {e}", k + 1)))?;
        gens.push(p);
    }
    Ok(GroupSpec::with_degree(raw.degree, gens))
}

pub fn write_group_text(spec: &GroupSpec) -> String {
    let mut out = format!("degree {}\n", spec.degree);
    for g in &spec.generators {
        out.push_str(&g.to_string());
        out.push('\n');
    }
    out
}

pub fn write_group_json(spec: &GroupSpec) -> String {
    let raw = GroupJson {
        degree: spec.degree,
        generators: spec
            .generators
            .iter()
            .map(|g| g.images().iter().map(|&i| i as u64 + 1).collect())
            .collect(),
    };
    serde_json::to_string(&raw).expect("serializable")
}
