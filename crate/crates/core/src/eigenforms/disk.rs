//! Plain-text q-expansion files.
//!
//! Layout: a header line `weight=<k> precision=<N>` followed by `N` lines,
//! each a decimal integer, coefficient of `q^0` first.

use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use num_bigint::BigInt;

use super::{EigenformError, EigenformId, QExpansion};

pub fn cache_file_name(f: EigenformId, precision: usize) -> String {
    format!("qexp-weight{}-precision{}.txt", f.weight(), precision)
}

impl QExpansion {
    pub fn write_to<W: Write>(&self, f: EigenformId, mut out: W) -> std::io::Result<()> {
        writeln!(out, "weight={} precision={}", f.weight(), self.precision())?;
        for c in self.coefficients() {
            writeln!(out, "{c}")?;
        }
        out.flush()
    }

    /// Reads a file written by [`QExpansion::write_to`], returning the weight
    /// recorded in its header together with the expansion.
    pub fn read_from<R: BufRead>(input: R) -> Result<(EigenformId, QExpansion), EigenformError> {
        let mut lines = input.lines();
        let header = lines
            .next()
            .ok_or_else(|| EigenformError::Format("missing header".into()))??;
        let (weight, precision) = parse_header(&header)?;
        let f = EigenformId::new(weight)?;
        let mut coefficients = Vec::with_capacity(precision);
        for (n, line) in lines.enumerate() {
            let line = line?;
            let value: BigInt = line
                .trim()
                .parse()
                .map_err(|_| EigenformError::Format(format!("line {}: not an integer", n + 2)))?;
            coefficients.push(value);
        }
        if coefficients.len() != precision {
            return Err(EigenformError::Format(format!(
                "header declares {precision} coefficients, found {}",
                coefficients.len()
            )));
        }
        Ok((f, QExpansion::new(coefficients)))
    }
}

fn parse_header(header: &str) -> Result<(u32, usize), EigenformError> {
    let bad = || EigenformError::Format(format!("bad header {header:?}"));
    let mut fields = header.split_whitespace();
    let weight = fields
        .next()
        .and_then(|s| s.strip_prefix("weight="))
        .and_then(|s| s.parse().ok())
        .ok_or_else(bad)?;
    let precision = fields
        .next()
        .and_then(|s| s.strip_prefix("precision="))
        .and_then(|s| s.parse().ok())
        .ok_or_else(bad)?;
    if fields.next().is_some() {
        return Err(bad());
    }
    Ok((weight, precision))
}

pub fn store_cached(dir: &Path, f: EigenformId, q: &QExpansion) -> Result<PathBuf, EigenformError> {
    fs::create_dir_all(dir)?;
    let path = dir.join(cache_file_name(f, q.precision()));
    let tmp = path.with_extension("tmp");
    q.write_to(f, BufWriter::new(fs::File::create(&tmp)?))?;
    fs::rename(&tmp, &path)?;
    Ok(path)
}

/// Loads the expansion for `(f, precision)` if present in `dir`.
pub fn load_cached(dir: &Path, f: EigenformId, precision: usize) -> Result<Option<QExpansion>, EigenformError> {
    let path = dir.join(cache_file_name(f, precision));
    let file = match fs::File::open(&path) {
        Ok(file) => file,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(e.into()),
    };
    let (weight, q) = QExpansion::read_from(BufReader::new(file))?;
    if weight != f || q.precision() != precision {
        return Err(EigenformError::Format(format!("{} does not match its name", path.display())));
    }
    Ok(Some(q))
}
