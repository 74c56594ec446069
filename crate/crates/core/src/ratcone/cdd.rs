//! cdd-style plain text for cones.
//!
//! Both blocks use a leading homogenizing column that is always 0 for
//! cones. In an H-representation each row `0 a_1 .. a_d` means
//! `a . x >= 0`; rows listed on a `linearity` line are equalities.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::Zero;

use super::{parse_rational, render, HRep, Rational, RationalCone};
use crate::error::{Error, Result};

pub fn write_v(cone: &RationalCone) -> String {
    let mut out = String::from("V-representation\nbegin\n");
    let _ = writeln!(out, " {} {} rational", cone.len(), cone.dim() + 1);
    for g in cone.generators() {
        out.push_str(" 0");
        for v in g {
            let _ = write!(out, " {}", render(v));
        }
        out.push('\n');
    }
    out.push_str("end\n");
    out
}

pub fn write_h(h: &HRep) -> String {
    let mut out = String::from("H-representation\n");
    let rows: Vec<&Vec<BigInt>> = h.equalities.iter().chain(&h.inequalities).collect();
    if !h.equalities.is_empty() {
        let _ = write!(out, "linearity {}", h.equalities.len());
        for i in 1..=h.equalities.len() {
            let _ = write!(out, " {i}");
        }
        out.push('\n');
    }
    let _ = writeln!(out, "begin\n {} {} integer", rows.len(), h.dim + 1);
    for row in rows {
        out.push_str(" 0");
        for v in row {
            let _ = write!(out, " {v}");
        }
        out.push('\n');
    }
    out.push_str("end\n");
    out
}

struct Block {
    kind: String,
    linearity: Vec<usize>,
    cols: usize,
    rows: Vec<Vec<Rational>>,
}

fn parse_block(text: &str) -> Result<Block> {
    let bad = |why: &str| Error::Parse(format!("cdd text: {why}"));
    let mut lines = text
        .lines()
        .map(|l| l.split(['*', '#']).next().unwrap_or("").trim())
        .filter(|l| !l.is_empty());
    let mut kind = String::new();
    let mut linearity = Vec::new();
    loop {
        let line = lines.next().ok_or_else(|| bad("missing begin"))?;
        if line == "begin" {
            break;
        }
        if line.ends_with("representation") {
            kind = line.to_string();
        } else if let Some(rest) = line.strip_prefix("linearity") {
            let nums: Vec<usize> = rest
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| bad("bad linearity line")))
                .collect::<Result<_>>()?;
            let (count, idx) = nums.split_first().ok_or_else(|| bad("empty linearity line"))?;
            if *count != idx.len() {
                return Err(bad("linearity count mismatch"));
            }
            linearity = idx.to_vec();
        }
    }
    let header: Vec<&str> = lines.next().ok_or_else(|| bad("missing size line"))?.split_whitespace().collect();
    if header.len() < 2 {
        return Err(bad("size line needs rows and columns"));
    }
    let nrows: usize = header[0].parse().map_err(|_| bad("bad row count"))?;
    let cols: usize = header[1].parse().map_err(|_| bad("bad column count"))?;
    if cols == 0 {
        return Err(bad("zero columns"));
    }
    let mut rows = Vec::with_capacity(nrows);
    for _ in 0..nrows {
        let line = lines.next().ok_or_else(|| bad("too few rows"))?;
        let row: Vec<Rational> = line.split_whitespace().map(parse_rational).collect::<Result<_>>()?;
        if row.len() != cols {
            return Err(bad("row length differs from column count"));
        }
        if !row[0].is_zero() {
            return Err(bad("only cones are supported (leading column must be 0)"));
        }
        rows.push(row[1..].to_vec());
    }
    if lines.next() != Some("end") {
        return Err(bad("missing end"));
    }
    Ok(Block { kind, linearity, cols, rows })
}

pub fn read_v(text: &str) -> Result<RationalCone> {
    let b = parse_block(text)?;
    if !b.kind.is_empty() && b.kind != "V-representation" {
        return Err(Error::Parse(format!("expected V-representation, got {}", b.kind)));
    }
    RationalCone::new(b.cols - 1, b.rows)
}

/// Reads an H-representation; rows are kept as given after scaling to
/// primitive integers.
pub fn read_h(text: &str) -> Result<HRep> {
    let b = parse_block(text)?;
    if b.kind != "H-representation" {
        return Err(Error::Parse("expected H-representation".into()));
    }
    let mut h = HRep { dim: b.cols - 1, inequalities: Vec::new(), equalities: Vec::new() };
    for (i, row) in b.rows.iter().enumerate() {
        let ints = super::linalg::primitive(row);
        if b.linearity.contains(&(i + 1)) {
            h.equalities.push(ints);
        } else {
            h.inequalities.push(ints);
        }
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratcone::dd_facets;

    #[test]
    fn round_trips() {
        let c = RationalCone::from_integer_rows(3, &[vec![1, 0, 0], vec![0, 1, 0]]).unwrap();
        let text = write_v(&c);
        assert_eq!(read_v(&text).unwrap().generators(), c.generators());
        let h = dd_facets(&c);
        let text = write_h(&h);
        assert!(text.contains("linearity 1 1"));
        assert_eq!(read_h(&text).unwrap(), h);
    }

    #[test]
    fn rejects_bad_text() {
        assert!(read_v("begin\n 1 2 rational\n 1 1\nend\n").is_err());
        assert!(read_v("begin\n 2 2 rational\n 0 1\nend\n").is_err());
        assert!(read_v("V-representation\n 1 2\n").is_err());
        let c = read_v("* comment\nV-representation\nbegin\n 1 3 rational\n 0 1/2 3\nend\n").unwrap();
        assert_eq!(c.len(), 1);
    }
}
