//! Text file formats: dependency, requirement and precedence CSVs.
//!
//! Requirement numbers in files are 1-based. A leading header row is
//! accepted when its first field is not a number; `#` starts a comment line.

use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::num::fmt_sig;
use crate::preference::DependencyEstimate;
use crate::select::{PrecedenceGraph, PrecedenceKind, Requirement};
use crate::vdg::{Quality, ValueDependencyGraph};

pub const DEPENDENCY_HEADER: &str = "from,to,quality,strength";
pub const REQUIREMENT_HEADER: &str = "id,cost,value,probability";
pub const PRECEDENCE_HEADER: &str = "i,j,kind";

/// Data rows as `(1-based line number, fields)`.
fn records<R: Read>(source: R, expected: usize) -> Result<Vec<(usize, Vec<String>)>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(source);
    let mut out = Vec::new();
    for (idx, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| {
            let row = e.position().map_or(idx + 1, |p| p.line() as usize);
            Error::parse(row, 0, e.to_string())
        })?;
        let row = rec.position().map_or(idx + 1, |p| p.line() as usize);
        if rec.len() == 1 && rec[0].is_empty() {
            continue;
        }
        if out.is_empty() && idx == 0 && rec.get(0).is_some_and(|f| f.parse::<f64>().is_err()) {
            continue;
        }
        if rec.len() != expected {
            return Err(Error::parse(row, 0, format!("expected {expected} fields, found {}", rec.len())));
        }
        out.push((row, rec.iter().map(str::to_string).collect()));
    }
    Ok(out)
}

fn index_field(row: usize, col: usize, s: &str) -> Result<usize> {
    match s.parse::<usize>() {
        Ok(v) if v >= 1 => Ok(v - 1),
        _ => Err(Error::parse(row, col, format!("expected a 1-based requirement number, found {s:?}"))),
    }
}

fn real_field(row: usize, col: usize, s: &str) -> Result<f64> {
    s.parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| Error::parse(row, col, format!("expected a number, found {s:?}")))
}

/// Reads `from,to,quality,strength` rows. The requirement count is `n` when
/// given, otherwise the largest requirement number mentioned.
pub fn read_dependency_graph<R: Read>(source: R, n: Option<usize>) -> Result<ValueDependencyGraph> {
    let rows = records(source, 4)?;
    let mut edges = Vec::with_capacity(rows.len());
    for (row, f) in &rows {
        let from = index_field(*row, 1, &f[0])?;
        let to = index_field(*row, 2, &f[1])?;
        let quality = match Quality::from_symbol(&f[2]) {
            Some(q @ (Quality::Positive | Quality::Negative)) => q,
            _ => return Err(Error::parse(*row, 3, format!("quality must be + or -, found {:?}", f[2]))),
        };
        let strength = real_field(*row, 4, &f[3])?;
        if !(strength > 0.0 && strength <= 1.0) {
            return Err(Error::parse(*row, 4, format!("strength must lie in (0, 1], found {strength}")));
        }
        if from == to {
            return Err(Error::parse(*row, 2, "self-dependency"));
        }
        edges.push((*row, from, to, quality, strength));
    }
    let inferred = edges.iter().map(|e| e.1.max(e.2) + 1).max().unwrap_or(0);
    let n = match n {
        Some(n) if n < inferred => {
            return Err(Error::DimensionMismatch(format!(
                "dependency file mentions requirement {inferred} but only {n} requirements exist"
            )))
        }
        Some(n) => n,
        None => inferred,
    };
    let mut g = ValueDependencyGraph::new(n);
    for (row, from, to, quality, strength) in edges {
        if g.strength(from, to) != 0.0 {
            return Err(Error::parse(row, 0, format!("duplicate dependency {} -> {}", from + 1, to + 1)));
        }
        g.set_edge(from, to, quality, strength)?;
    }
    Ok(g)
}

pub fn write_dependency_graph<W: Write>(mut out: W, g: &ValueDependencyGraph) -> Result<()> {
    writeln!(out, "{DEPENDENCY_HEADER}")?;
    for (i, j, q, s) in g.edges() {
        writeln!(out, "{},{},{},{}", i + 1, j + 1, q.symbol(), fmt_sig(s))?;
    }
    Ok(())
}

/// Writes the specified (nonzero) estimates in the dependency file format.
pub fn write_dependency_estimates<W: Write>(mut out: W, deps: &[DependencyEstimate]) -> Result<()> {
    writeln!(out, "{DEPENDENCY_HEADER}")?;
    for d in deps.iter().filter(|d| d.quality != Quality::Nonspecified) {
        writeln!(out, "{},{},{},{}", d.from + 1, d.to + 1, d.quality.symbol(), fmt_sig(d.strength))?;
    }
    Ok(())
}

/// Reads `id,cost,value,probability` rows; ids must be exactly `1..=n`.
pub fn read_requirements<R: Read>(source: R) -> Result<Vec<Requirement>> {
    let rows = records(source, 4)?;
    let n = rows.len();
    let mut slots: Vec<Option<Requirement>> = vec![None; n];
    for (row, f) in &rows {
        let id = index_field(*row, 1, &f[0])?;
        if id >= n {
            return Err(Error::parse(*row, 1, format!("id {} exceeds the requirement count {n}", id + 1)));
        }
        if slots[id].is_some() {
            return Err(Error::parse(*row, 1, format!("duplicate id {}", id + 1)));
        }
        let cost = real_field(*row, 2, &f[1])?;
        let value = real_field(*row, 3, &f[2])?;
        let probability = real_field(*row, 4, &f[3])?;
        let r = Requirement::new(id + 1, cost, value, probability).map_err(|e| Error::parse(*row, 0, e.to_string()))?;
        slots[id] = Some(r);
    }
    Ok(slots.into_iter().flatten().collect())
}

pub fn write_requirements<W: Write>(mut out: W, reqs: &[Requirement]) -> Result<()> {
    writeln!(out, "{REQUIREMENT_HEADER}")?;
    for r in reqs {
        writeln!(out, "{},{},{},{}", r.id, fmt_sig(r.cost), fmt_sig(r.value), fmt_sig(r.probability))?;
    }
    Ok(())
}

/// Reads `i,j,kind` rows for `n` requirements.
pub fn read_precedence<R: Read>(source: R, n: usize) -> Result<PrecedenceGraph> {
    let mut g = PrecedenceGraph::new(n);
    for (row, f) in records(source, 3)? {
        let i = index_field(row, 1, &f[0])?;
        let j = index_field(row, 2, &f[1])?;
        let kind: PrecedenceKind = f[2].parse().map_err(|e: Error| Error::parse(row, 3, e.to_string()))?;
        if i >= n || j >= n {
            return Err(Error::DimensionMismatch(format!(
                "precedence row {row} refers to requirement {} but only {n} exist",
                i.max(j) + 1
            )));
        }
        g.add(i, j, kind).map_err(|e| Error::parse(row, 0, e.to_string()))?;
    }
    Ok(g)
}

pub fn write_precedence<W: Write>(mut out: W, g: &PrecedenceGraph) -> Result<()> {
    writeln!(out, "{PRECEDENCE_HEADER}")?;
    for &(i, j, kind) in g.edges() {
        writeln!(out, "{},{},{}", i + 1, j + 1, kind.as_str())?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dependency_file_round_trip() {
        let text = "from,to,quality,strength\n1,2,+,0.4\n2,4,+,0.3\n1,3,+,0.8\n3,4,+,0.8\n1,4,-,0.1\n";
        let g = read_dependency_graph(text.as_bytes(), None).unwrap();
        assert_eq!(g.n(), 4);
        assert_eq!(g.edge_count(), 5);
        assert_eq!(g.quality(0, 3), Quality::Negative);
        let mut out = Vec::new();
        write_dependency_graph(&mut out, &g).unwrap();
        let again = read_dependency_graph(out.as_slice(), None).unwrap();
        assert_eq!(g, again);
    }

    #[test]
    fn dependency_file_errors() {
        assert!(matches!(read_dependency_graph("1,2,x,0.5\n".as_bytes(), None), Err(Error::Parse { column: 3, .. })));
        assert!(matches!(read_dependency_graph("1,2,+,0\n".as_bytes(), None), Err(Error::Parse { column: 4, .. })));
        assert!(matches!(read_dependency_graph("1,2,+\n".as_bytes(), None), Err(Error::Parse { row: 1, .. })));
        assert!(matches!(read_dependency_graph("0,2,+,0.5\n".as_bytes(), None), Err(Error::Parse { column: 1, .. })));
        assert!(read_dependency_graph("1,2,+,0.5\n1,2,-,0.5\n".as_bytes(), None).is_err());
        assert!(matches!(
            read_dependency_graph("1,5,+,0.5\n".as_bytes(), Some(3)),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn empty_dependency_file() {
        let g = read_dependency_graph("from,to,quality,strength\n".as_bytes(), None).unwrap();
        assert_eq!(g.n(), 0);
    }

    #[test]
    fn requirements_file() {
        let text = "id,cost,value,probability\n2,3,4,0.5\n1,1,2,1\n";
        let r = read_requirements(text.as_bytes()).unwrap();
        assert_eq!(r[0], Requirement::new(1, 1.0, 2.0, 1.0).unwrap());
        assert_eq!(r[1].id, 2);
        assert!(read_requirements("1,1,1,1.5\n".as_bytes()).is_err());
        assert!(read_requirements("1,1,1,1\n1,1,1,1\n".as_bytes()).is_err());
        assert!(read_requirements("1,1,1,1\n3,1,1,1\n".as_bytes()).is_err());
        let mut out = Vec::new();
        write_requirements(&mut out, &r).unwrap();
        assert_eq!(read_requirements(out.as_slice()).unwrap(), r);
    }

    #[test]
    fn precedence_file() {
        let g = read_precedence("i,j,kind\n1,2,precedes\n2,3,conflicts\n".as_bytes(), 3).unwrap();
        assert_eq!(g.edges(), &[(0, 1, PrecedenceKind::Precedes), (1, 2, PrecedenceKind::Conflicts)]);
        assert!(read_precedence("1,2,maybe\n".as_bytes(), 3).is_err());
        assert!(matches!(read_precedence("1,4,precedes\n".as_bytes(), 3), Err(Error::DimensionMismatch(_))));
        let mut out = Vec::new();
        write_precedence(&mut out, &g).unwrap();
        assert_eq!(read_precedence(out.as_slice(), 3).unwrap(), g);
    }
}
