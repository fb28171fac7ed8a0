use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};
use tempfile::NamedTempFile;

/// Output file written to a temporary sibling and renamed into place on
/// [`AtomicFile::commit`]. Dropping it uncommitted removes the temporary.
pub struct AtomicFile {
    path: PathBuf,
    writer: BufWriter<NamedTempFile>,
    records: usize,
}

impl AtomicFile {
    pub fn create(path: &Path) -> io::Result<AtomicFile> {
        let dir = path
            .parent()
            .filter(|p| !p.as_os_str().is_empty())
            .unwrap_or(Path::new("."));
        std::fs::create_dir_all(dir)?;
        let tmp = tempfile::Builder::new()
            .prefix(".forge-")
            .suffix(".tmp")
            .tempfile_in(dir)?;
        Ok(AtomicFile {
            path: path.to_path_buf(),
            writer: BufWriter::new(tmp),
            records: 0,
        })
    }

    /// Writes one JSON value per line.
    pub fn write_json<T: Serialize>(&mut self, value: &T) -> io::Result<()> {
        serde_json::to_writer(&mut self.writer, value)?;
        self.writer.write_all(b"\n")?;
        self.records += 1;
        Ok(())
    }

    /// Writes a raw line; a newline is appended.
    pub fn write_line(&mut self, line: &str) -> io::Result<()> {
        self.writer.write_all(line.as_bytes())?;
        self.writer.write_all(b"\n")?;
        self.records += 1;
        Ok(())
    }

    pub fn write_all(&mut self, bytes: &[u8]) -> io::Result<()> {
        self.writer.write_all(bytes)
    }

    pub fn records(&self) -> usize {
        self.records
    }

    pub fn commit(self) -> io::Result<usize> {
        let tmp = self.writer.into_inner().map_err(|e| e.into_error())?;
        tmp.as_file().sync_all()?;
        tmp.persist(&self.path).map_err(|e| e.error)?;
        Ok(self.records)
    }
}

pub fn sha256_file(path: &Path) -> io::Result<String> {
    let mut f = File::open(path)?;
    let mut h = Sha256::new();
    let mut buf = vec![0u8; 1 << 16];
    loop {
        let n = f.read(&mut buf)?;
        if n == 0 {
            break;
        }
        h.update(&buf[..n]);
    }
    Ok(hex::encode(h.finalize()))
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Non-blank lines with 1-based line numbers, read in chunks.
pub struct LineChunks {
    lines: io::Lines<BufReader<File>>,
    next_line: usize,
    chunk: usize,
}

impl LineChunks {
    pub fn open(path: &Path, chunk: usize) -> io::Result<LineChunks> {
        Ok(LineChunks {
            lines: BufReader::new(File::open(path)?).lines(),
            next_line: 0,
            chunk,
        })
    }

    /// Skips the first line, returning it.
    pub fn header(&mut self) -> io::Result<Option<String>> {
        self.next_line += 1;
        self.lines.next().transpose()
    }
}

impl Iterator for LineChunks {
    type Item = io::Result<Vec<(usize, String)>>;

    fn next(&mut self) -> Option<Self::Item> {
        let mut out = Vec::with_capacity(self.chunk);
        while out.len() < self.chunk {
            match self.lines.next() {
                None => break,
                Some(Err(e)) => return Some(Err(e)),
                Some(Ok(l)) => {
                    self.next_line += 1;
                    if !l.trim().is_empty() {
                        out.push((self.next_line, l));
                    }
                }
            }
        }
        if out.is_empty() {
            None
        } else {
            Some(Ok(out))
        }
    }
}
