//! JSON table rings: `{"size": n, "add": [[..]], "mul": [[..]], "one": i}`, zero at index 0.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{FiniteRing, Shape};
use crate::error::{Error, Result};

#[derive(Debug, Serialize, Deserialize)]
struct TableFile {
    size: usize,
    add: Vec<Vec<usize>>,
    mul: Vec<Vec<usize>>,
    one: usize,
}

/// Reads a table ring and checks every axiom on every triple.
pub fn load_table(path: &Path, cap: usize) -> Result<FiniteRing> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let descriptor = format!("table:{}", path.display());
    table_from_str(&text, descriptor, cap)
}

pub(crate) fn table_from_str(text: &str, descriptor: String, cap: usize) -> Result<FiniteRing> {
    let file: TableFile =
        serde_json::from_str(text).map_err(|e| Error::InvalidSpec(format!("{descriptor}: {e}")))?;
    let n = file.size;
    if n < 2 {
        return Err(Error::InvalidSpec(format!(
            "{descriptor}: size must be at least 2"
        )));
    }
    if n > cap {
        return Err(Error::SizeCap { size: n, cap });
    }
    let flatten = |rows: &[Vec<usize>], name: &str| -> Result<Vec<u32>> {
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(Error::AxiomViolation(format!(
                "{name} table is not {n}×{n}"
            )));
        }
        Ok(rows
            .iter()
            .flatten()
            .map(|&v| v.min(u32::MAX as usize) as u32)
            .collect())
    };
    let add = flatten(&file.add, "add")?;
    let mul = flatten(&file.mul, "mul")?;
    let ring = FiniteRing::from_tables(descriptor, Shape::Table, n, file.one, add, mul)?;
    ring.check_axioms(None)?;
    Ok(ring)
}

/// Exports any ring in the table format.
pub fn ring_to_table_json(ring: &FiniteRing) -> Value {
    let n = ring.size();
    let rows = |f: &dyn Fn(usize, usize) -> usize| -> Vec<Vec<usize>> {
        (0..n).map(|x| (0..n).map(|y| f(x, y)).collect()).collect()
    };
    let file = TableFile {
        size: n,
        add: rows(&|x, y| ring.add(x, y)),
        mul: rows(&|x, y| ring.mul(x, y)),
        one: ring.one(),
    };
    serde_json::to_value(file).expect("table serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::parse_ring;

    #[test]
    fn round_trip_through_json() {
        let r = parse_ring("Z/2 x Z/3").unwrap();
        let text = ring_to_table_json(&r).to_string();
        let t = table_from_str(&text, "table:mem".into(), 4096).unwrap();
        assert_eq!(t.size(), 6);
        assert_eq!(t.one(), r.one());
        for x in 0..6 {
            for y in 0..6 {
                assert_eq!(t.mul(x, y), r.mul(x, y));
            }
        }
    }

    #[test]
    fn rejects_non_rings() {
        // x·y = 1 for all x,y breaks distributivity
        let bad = r#"{"size":2,"add":[[0,1],[1,0]],"mul":[[1,1],[1,1]],"one":1}"#;
        assert!(matches!(
            table_from_str(bad, "t".into(), 10),
            Err(Error::AxiomViolation(_))
        ));
        let shape = r#"{"size":2,"add":[[0,1]],"mul":[[0,0],[0,1]],"one":1}"#;
        assert!(matches!(
            table_from_str(shape, "t".into(), 10),
            Err(Error::AxiomViolation(_))
        ));
        let big = r#"{"size":20,"add":[],"mul":[],"one":1}"#;
        assert!(matches!(
            table_from_str(big, "t".into(), 10),
            Err(Error::SizeCap { .. })
        ));
    }
}
