//! b-file parsing and comparison against the counting engine.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::Serialize;

use crate::counting::{count, count_hyperbolic, CongruenceSpec, CountOptions, Method};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BFile {
    pub sequence_id: String,
    pub entries: Vec<(u64, BigInt)>,
}

fn check_id(id: &str) -> Result<()> {
    let ok = id.len() == 7 && id.starts_with('A') && id[1..].bytes().all(|b| b.is_ascii_digit());
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "'{id}' is not a sequence id of the form A000000"
        )))
    }
}

impl BFile {
    /// Parses "index value" lines; blank lines and lines starting with '#' are skipped.
    pub fn parse(sequence_id: &str, text: &str) -> Result<Self> {
        check_id(sequence_id)?;
        let mut entries: Vec<(u64, BigInt)> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| Error::BFile { line: i + 1, message };
            let mut parts = line.split_whitespace();
            let (Some(idx), Some(val), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(err(format!("expected 'index value', got '{line}'")));
            };
            let idx: u64 = idx.parse().map_err(|_| err(format!("bad index '{idx}'")))?;
            let val = BigInt::from_str(val).map_err(|_| err(format!("bad value '{val}'")))?;
            if let Some(&(prev, _)) = entries.last() {
                if idx <= prev {
                    return Err(err(format!("index {idx} does not follow {prev}")));
                }
            }
            entries.push((idx, val));
        }
        Ok(BFile {
            sequence_id: sequence_id.to_string(),
            entries,
        })
    }

    pub fn read(sequence_id: &str, path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::parse(sequence_id, &text)
    }
}

/// What a supported sequence counts, as a function of the modulus r.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum SequenceFamily {
    /// N_k(n, r) with a = (1, …, 1)
    AllOnes { k: u32, n: i64 },
    /// N_k(n, r, a) for a fixed coefficient vector
    Signed { n: i64, a: &'static [i64] },
    /// φ(2r), evaluated as N_2(1, r, (1, −1))
    Hyperbolic,
}

impl fmt::Display for SequenceFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SequenceFamily::AllOnes { k, n } => write!(f, "N_{k}({n}, r)"),
            SequenceFamily::Signed { n, a } => write!(f, "N_{}({n}, r, {a:?})", a.len()),
            SequenceFamily::Hyperbolic => f.write_str("N_2(1, r, [1, -1]) = phi(2r)"),
        }
    }
}

pub const SUPPORTED: [(&str, SequenceFamily); 10] = [
    ("A000188", SequenceFamily::AllOnes { k: 1, n: 0 }),
    ("A060594", SequenceFamily::AllOnes { k: 1, n: 1 }),
    ("A086933", SequenceFamily::AllOnes { k: 2, n: 0 }),
    ("A060968", SequenceFamily::AllOnes { k: 2, n: 1 }),
    ("A087687", SequenceFamily::AllOnes { k: 3, n: 0 }),
    ("A087784", SequenceFamily::AllOnes { k: 3, n: 1 }),
    ("A240547", SequenceFamily::AllOnes { k: 4, n: 0 }),
    ("A208895", SequenceFamily::AllOnes { k: 4, n: 1 }),
    ("A062570", SequenceFamily::Hyperbolic),
    ("A062775", SequenceFamily::Signed { n: 0, a: &[1, 1, -1] }),
];

pub fn family(sequence_id: &str) -> Result<SequenceFamily> {
    check_id(sequence_id)?;
    SUPPORTED
        .iter()
        .find(|(id, _)| *id == sequence_id)
        .map(|&(_, f)| f)
        .ok_or_else(|| Error::InvalidArgument(format!("unsupported sequence {sequence_id}")))
}

impl SequenceFamily {
    pub fn term(&self, r: u64, opts: &CountOptions) -> Result<BigInt> {
        let spec = match *self {
            SequenceFamily::AllOnes { k, n } => CongruenceSpec::all_ones(k, n, r)?,
            SequenceFamily::Signed { n, a } => CongruenceSpec::new(a.len() as u32, n, r, a.to_vec())?,
            SequenceFamily::Hyperbolic => return Ok(count_hyperbolic(r)?.into()),
        };
        Ok(count(&spec, Method::Auto, opts)?.count.into())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub index: u64,
    pub modulus: u64,
    #[serde(serialize_with = "crate::report::ser_bigint")]
    pub expected: BigInt,
    #[serde(serialize_with = "crate::report::ser_bigint")]
    pub computed: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OeisReport {
    pub sequence: String,
    pub family: String,
    pub compared: usize,
    pub first_mismatch: Option<Mismatch>,
}

impl OeisReport {
    pub fn agrees(&self) -> bool {
        self.first_mismatch.is_none()
    }
}

/// Compares up to `limit` entries. The first index of the file is taken as r = 1.
pub fn compare(bfile: &BFile, limit: Option<usize>, opts: &CountOptions) -> Result<OeisReport> {
    let fam = family(&bfile.sequence_id)?;
    let take = limit.unwrap_or(usize::MAX).min(bfile.entries.len());
    let offset = bfile.entries.first().map_or(0, |&(i, _)| i);
    let mut first_mismatch = None;
    let mut compared = 0;
    for (index, expected) in bfile.entries.iter().take(take) {
        let r = index - offset + 1;
        let computed = fam.term(r, opts)?;
        compared += 1;
        if &computed != expected {
            first_mismatch = Some(Mismatch {
                index: *index,
                modulus: r,
                expected: expected.clone(),
                computed,
            });
            break;
        }
    }
    Ok(OeisReport {
        sequence: bfile.sequence_id.clone(),
        family: fam.to_string(),
        compared,
        first_mismatch,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_compare() {
        let text = "# A000188\n# header\n\n1 1\n2 1\n3 1\n4 2\n5 1\n6 1\n7 1\n8 2\n";
        let b = BFile::parse("A000188", text).unwrap();
        assert_eq!(b.entries.len(), 8);
        let rep = compare(&b, None, &CountOptions::default()).unwrap();
        assert_eq!(rep.compared, 8);
        assert!(rep.agrees());

        let bad = BFile::parse("A000188", "1 1\n2 1\n3 5\n4 2\n").unwrap();
        let rep = compare(&bad, None, &CountOptions::default()).unwrap();
        assert_eq!(rep.compared, 3);
        assert_eq!(rep.first_mismatch.unwrap().index, 3);
    }

    #[test]
    fn offsets_follow_the_file() {
        // phi(2r) listed from index 0
        let b = BFile::parse("A062570", "0 1\n1 2\n2 2\n3 4\n4 4\n").unwrap();
        assert!(compare(&b, None, &CountOptions::default()).unwrap().agrees());
    }

    #[test]
    fn empty_and_malformed() {
        let b = BFile::parse("A060594", "# nothing\n").unwrap();
        assert_eq!(compare(&b, None, &CountOptions::default()).unwrap().compared, 0);
        assert!(matches!(
            BFile::parse("A060594", "1 1\n1 1\n"),
            Err(Error::BFile { line: 2, .. })
        ));
        assert!(matches!(
            BFile::parse("A060594", "1\n"),
            Err(Error::BFile { line: 1, .. })
        ));
        assert!(matches!(BFile::parse("A060594", "1 x\n"), Err(Error::BFile { .. })));
        assert!(BFile::parse("B000188", "").is_err());
        assert!(family("A000001").is_err());
    }
}
