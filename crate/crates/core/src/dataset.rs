use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::DatasetError;
use crate::record::CommitRecord;

/// Streaming reader over a JSON Lines dataset file.
///
/// Yields one record per non-blank line; parse and validation failures are
/// reported per line so a caller can decide whether to abort or skip.
pub struct DatasetReader<R> {
    lines: std::io::Lines<R>,
    line_no: usize,
}

impl DatasetReader<BufReader<File>> {
    pub fn open(path: &Path) -> Result<Self, DatasetError> {
        let file = File::open(path)?;
        Ok(DatasetReader {
            lines: BufReader::new(file).lines(),
            line_no: 0,
        })
    }
}

impl<R: BufRead> DatasetReader<R> {
    pub fn from_reader(reader: R) -> Self {
        DatasetReader {
            lines: reader.lines(),
            line_no: 0,
        }
    }
}

impl<R: BufRead> Iterator for DatasetReader<R> {
    type Item = Result<CommitRecord, DatasetError>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            let line = match self.lines.next()? {
                Ok(l) => l,
                Err(e) => return Some(Err(e.into())),
            };
            self.line_no += 1;
            if line.trim().is_empty() {
                continue;
            }
            let record: CommitRecord = match serde_json::from_str(&line) {
                Ok(r) => r,
                Err(source) => {
                    return Some(Err(DatasetError::Parse {
                        line: self.line_no,
                        source,
                    }))
                }
            };
            if let Err((field, detail)) = record.validate() {
                return Some(Err(DatasetError::Invalid {
                    line: self.line_no,
                    field,
                    detail,
                }));
            }
            return Some(Ok(record));
        }
    }
}

/// Read a whole dataset file into memory, failing on the first bad line.
pub fn read_dataset(path: &Path) -> Result<Vec<CommitRecord>, DatasetError> {
    DatasetReader::open(path)?.collect()
}

/// Write records as JSON Lines, one compact object per line.
///
/// Every record is validated before anything is written; returns the number
/// of records written.
pub fn write_dataset<'a, I>(path: &Path, records: I) -> Result<usize, DatasetError>
where
    I: IntoIterator<Item = &'a CommitRecord>,
{
    let records: Vec<&CommitRecord> = records.into_iter().collect();
    for record in &records {
        if let Err((field, detail)) = record.validate() {
            return Err(DatasetError::InvalidRecord {
                hash: record.hash.clone(),
                field,
                detail,
            });
        }
    }
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)?;
        }
    }
    let file = File::create(path)?;
    let mut out = BufWriter::new(file);
    for record in &records {
        let line = serde_json::to_string(record).expect("record serializes");
        out.write_all(line.as_bytes())?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(records.len())
}
