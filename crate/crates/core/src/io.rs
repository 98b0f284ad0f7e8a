//! Plain-text serialization.
//!
//! Tensors use the "ATNS v1" format:
//!
//! ```text
//! ATNS 1
//! n1 n2 n3
//! <n1*n2*n3 whitespace-separated values in mode-1 unfolding column order>
//! ```
//!
//! Values are written with Rust's shortest round-trip formatting, so a
//! write/read cycle is bit-exact. Three-vector representations use one
//! header line (`A6 n` or `C2 n m`) followed by one whitespace-separated
//! line per vector.

use crate::antisym::{A6Repr, C2Repr};
use crate::error::{Error, Result};
use crate::tensor::{Tensor3, Vector};
use std::io::{BufRead, Write};

fn write_values<W: Write>(w: &mut W, values: &[f64], per_line: usize) -> Result<()> {
    for chunk in values.chunks(per_line) {
        let line = chunk
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(" ");
        writeln!(w, "{line}")?;
    }
    Ok(())
}

/// Writes a tensor in ATNS v1, one mode-1 fiber per line.
pub fn write_atns<W: Write>(mut w: W, t: &Tensor3) -> Result<()> {
    let (n1, n2, n3) = t.dims();
    writeln!(w, "ATNS 1")?;
    writeln!(w, "{n1} {n2} {n3}")?;
    write_values(&mut w, t.values(), n1)
}

fn parse_usize(token: &str, what: &str) -> Result<usize> {
    token
        .parse()
        .map_err(|_| Error::Parse(format!("invalid {what}: {token:?}")))
}

fn parse_f64(token: &str) -> Result<f64> {
    token
        .parse()
        .map_err(|_| Error::Parse(format!("invalid value: {token:?}")))
}

/// Reads a tensor in ATNS v1.
pub fn read_atns<R: BufRead>(r: R) -> Result<Tensor3> {
    let mut lines = r.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty input".into()))??;
    if header.trim() != "ATNS 1" {
        return Err(Error::Parse(format!(
            "expected header \"ATNS 1\", got {:?}",
            header.trim()
        )));
    }
    let dims_line = lines
        .next()
        .ok_or_else(|| Error::Parse("missing dimensions line".into()))??;
    let dims: Vec<&str> = dims_line.split_whitespace().collect();
    if dims.len() != 3 {
        return Err(Error::Parse(format!(
            "expected three dimensions, got {:?}",
            dims_line.trim()
        )));
    }
    let n1 = parse_usize(dims[0], "dimension")?;
    let n2 = parse_usize(dims[1], "dimension")?;
    let n3 = parse_usize(dims[2], "dimension")?;
    let expected = n1 * n2 * n3;

    let mut values = Vec::with_capacity(expected);
    for line in lines {
        for token in line?.split_whitespace() {
            if values.len() == expected {
                return Err(Error::Parse(format!(
                    "more than {expected} values in input"
                )));
            }
            values.push(parse_f64(token)?);
        }
    }
    if values.len() != expected {
        return Err(Error::Parse(format!(
            "expected {expected} values, got {}",
            values.len()
        )));
    }
    Tensor3::new((n1, n2, n3), values)
}

/// Writes a three-vector antisymmetric representation: `A6 n` then the
/// three vectors, one per line.
pub fn write_a6<W: Write>(mut w: W, r: &A6Repr) -> Result<()> {
    writeln!(w, "A6 {}", r.n())?;
    for v in [&r.x, &r.y, &r.z] {
        write_values(&mut w, v.as_slice(), v.len())?;
    }
    Ok(())
}

/// Writes a three-vector partially antisymmetric representation:
/// `C2 n m` then `x`, `y` (length n) and `z` (length m), one per line.
pub fn write_c2<W: Write>(mut w: W, r: &C2Repr) -> Result<()> {
    writeln!(w, "C2 {} {}", r.n(), r.m())?;
    for v in [&r.x, &r.y, &r.z] {
        write_values(&mut w, v.as_slice(), v.len())?;
    }
    Ok(())
}

fn read_vector_line<R: BufRead>(lines: &mut std::io::Lines<R>, len: usize) -> Result<Vector> {
    let line = lines
        .next()
        .ok_or_else(|| Error::Parse("missing vector line".into()))??;
    let values: Vec<f64> = line
        .split_whitespace()
        .map(parse_f64)
        .collect::<Result<_>>()?;
    if values.len() != len {
        return Err(Error::Parse(format!(
            "expected {len} vector entries, got {}",
            values.len()
        )));
    }
    Ok(Vector::from_vec(values))
}

/// Reads an `A6` representation written by [`write_a6`].
pub fn read_a6<R: BufRead>(r: R) -> Result<A6Repr> {
    let mut lines = r.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty input".into()))??;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    if tokens.len() != 2 || tokens[0] != "A6" {
        return Err(Error::Parse(format!("expected \"A6 n\" header, got {header:?}")));
    }
    let n = parse_usize(tokens[1], "length")?;
    let x = read_vector_line(&mut lines, n)?;
    let y = read_vector_line(&mut lines, n)?;
    let z = read_vector_line(&mut lines, n)?;
    A6Repr::new(x, y, z)
}

/// Reads a `C2` representation written by [`write_c2`].
pub fn read_c2<R: BufRead>(r: R) -> Result<C2Repr> {
    let mut lines = r.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty input".into()))??;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    if tokens.len() != 3 || tokens[0] != "C2" {
        return Err(Error::Parse(format!(
            "expected \"C2 n m\" header, got {header:?}"
        )));
    }
    let n = parse_usize(tokens[1], "length")?;
    let m = parse_usize(tokens[2], "length")?;
    let x = read_vector_line(&mut lines, n)?;
    let y = read_vector_line(&mut lines, n)?;
    let z = read_vector_line(&mut lines, m)?;
    C2Repr::new(x, y, z)
}

/// Reads a tensor from a file path.
pub fn read_tensor_path(path: &std::path::Path) -> Result<Tensor3> {
    let file = std::fs::File::open(path)?;
    read_atns(std::io::BufReader::new(file))
}

/// Writes a tensor to a file path.
pub fn write_tensor_path(path: &std::path::Path, t: &Tensor3) -> Result<()> {
    let file = std::fs::File::create(path)?;
    write_atns(std::io::BufWriter::new(file), t)
}
