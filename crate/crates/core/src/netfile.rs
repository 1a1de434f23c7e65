//! Text format for nets.
//!
//! ```text
//! s n m
//! <m blocks of s lines with n characters from {0,1}, separated by one blank line>
//! ```
//!
//! Row `i` of a block is row `i` of a basis matrix; character `j` is column
//! `j`. Lines end in LF with no trailing whitespace.

use std::path::Path;

use crate::error::{Error, Result};
use crate::f2::{F2Matrix, Subspace};

/// Serializes `p` with its canonical basis.
pub fn write_net(p: &Subspace) -> String {
    let (s, n) = p.shape();
    let mut out = format!("{s} {n} {}\n", p.dim());
    for (k, b) in p.basis().iter().enumerate() {
        if k > 0 {
            out.push('\n');
        }
        for i in 0..s {
            out.push_str(&b.row_string(i));
            out.push('\n');
        }
    }
    out
}

pub fn parse_net(text: &str) -> Result<Subspace> {
    let mut lines: Vec<&str> = text.split('\n').collect();
    if lines.last() == Some(&"") {
        lines.pop();
    }
    let header = lines
        .first()
        .ok_or_else(|| Error::parse(1, "empty net file"))?;
    let fields: Vec<&str> = header.split(' ').collect();
    if fields.len() != 3 {
        return Err(Error::parse(
            1,
            format!("expected header \"s n m\", found {header:?}"),
        ));
    }
    let num = |k: usize, name: &str| -> Result<usize> {
        fields[k].parse::<usize>().map_err(|_| {
            Error::parse(
                1,
                format!("{name} is not a nonnegative integer: {:?}", fields[k]),
            )
        })
    };
    let (s, n, m) = (num(0, "s")?, num(1, "n")?, num(2, "m")?);
    if s == 0 || n == 0 {
        return Err(Error::parse(1, "s and n must be positive"));
    }
    if m > s * n {
        return Err(Error::parse(1, format!("m={m} exceeds s*n={}", s * n)));
    }
    let mut vectors = Vec::with_capacity(m);
    let mut at = 1;
    for k in 0..m {
        if k > 0 {
            if at >= lines.len() {
                return Err(Error::parse(at + 1, "unexpected end of file"));
            }
            if !lines[at].is_empty() {
                return Err(Error::parse(at + 1, "expected a blank line between blocks"));
            }
            at += 1;
        }
        let mut x = F2Matrix::zeros(s, n);
        for i in 0..s {
            let Some(&line) = lines.get(at) else {
                return Err(Error::parse(at + 1, "unexpected end of file"));
            };
            if line.len() != n {
                return Err(Error::parse(
                    at + 1,
                    format!("expected {n} characters, found {}", line.len()),
                ));
            }
            for (j, c) in line.bytes().enumerate() {
                match c {
                    b'0' => {}
                    b'1' => x.set(i, j, true),
                    _ => {
                        return Err(Error::parse(
                            at + 1,
                            format!("invalid character {:?} at column {}", c as char, j + 1),
                        ))
                    }
                }
            }
            at += 1;
        }
        vectors.push(x);
    }
    if at < lines.len() {
        return Err(Error::parse(
            at + 1,
            "unexpected content after the last block",
        ));
    }
    let p = Subspace::span(s, n, &vectors)?;
    if p.dim() != m {
        return Err(Error::parse(
            1,
            format!("header declares m={m} but the basis has rank {}", p.dim()),
        ));
    }
    Ok(p)
}

pub fn read_net_file(path: &Path) -> Result<Subspace> {
    parse_net(&std::fs::read_to_string(path)?)
}

pub fn write_net_file(path: &Path, p: &Subspace) -> Result<()> {
    std::fs::write(path, write_net(p))?;
    Ok(())
}
