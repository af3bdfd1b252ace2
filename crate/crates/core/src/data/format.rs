//! Little-endian binary formats for datasets and trained models.
//!
//! Dataset (`ML0T`):
//!
//! ```text
//! magic     4 bytes   "ML0T"
//! version   u32       1
//! ndim      u32
//! dims      ndim × u64
//! n         u64       sample count
//! labels    n × i8    each +1 or -1
//! samples   n × ∏dims × f64, row-major, sample after sample
//! ```
//!
//! Model (`ML0M`):
//!
//! ```text
//! magic     4 bytes   "ML0M"
//! version   u32       1
//! p         u32       number of blocks
//! dims      p × u64   block lengths
//! bias      f64
//! blocks    Σdims × f64, block after block
//! ```
//!
//! Readers reject trailing bytes and report the byte offset of the first
//! problem they find. Nothing is returned on error.

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use super::Dataset;
use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::tensor::DenseTensor;

pub const DATASET_MAGIC: [u8; 4] = *b"ML0T";
pub const MODEL_MAGIC: [u8; 4] = *b"ML0M";
pub const FORMAT_VERSION: u32 = 1;

struct Cursor<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(buf: &'a [u8]) -> Self {
        Self { buf, pos: 0 }
    }

    fn err(&self, at: usize, msg: impl Into<String>) -> Error {
        Error::Format {
            offset: at as u64,
            msg: msg.into(),
        }
    }

    fn take(&mut self, n: usize, what: &str) -> Result<&'a [u8]> {
        let remaining = self.buf.len() - self.pos;
        if n > remaining {
            return Err(self.err(
                self.pos,
                format!("truncated {what}: need {n} bytes, {remaining} available"),
            ));
        }
        let out = &self.buf[self.pos..self.pos + n];
        self.pos += n;
        Ok(out)
    }

    fn u32(&mut self, what: &str) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4, what)?.try_into().unwrap()))
    }

    fn u64(&mut self, what: &str) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8, what)?.try_into().unwrap()))
    }

    fn f64(&mut self, what: &str) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8, what)?.try_into().unwrap()))
    }

    fn magic(&mut self, expected: [u8; 4]) -> Result<()> {
        let got = self.take(4, "magic")?;
        if got != expected {
            return Err(self.err(
                0,
                format!(
                    "bad magic {:?}, expected {:?}",
                    String::from_utf8_lossy(got),
                    String::from_utf8_lossy(&expected)
                ),
            ));
        }
        Ok(())
    }

    fn version(&mut self) -> Result<()> {
        let at = self.pos;
        let v = self.u32("version")?;
        if v != FORMAT_VERSION {
            return Err(self.err(at, format!("unsupported version {v}, expected {FORMAT_VERSION}")));
        }
        Ok(())
    }

    // Reads `count` u64 extents, each ≥ 1.
    fn dims(&mut self, count: usize) -> Result<Vec<usize>> {
        (0..count)
            .map(|i| {
                let at = self.pos;
                let d = self.u64("dims")?;
                if d == 0 {
                    return Err(self.err(at, format!("extent {i} is zero")));
                }
                usize::try_from(d).map_err(|_| self.err(at, format!("extent {d} too large")))
            })
            .collect()
    }

    // Ensures `count × width` more bytes exist before anything is allocated.
    fn require(&self, count: usize, width: usize, what: &str) -> Result<usize> {
        let bytes = count
            .checked_mul(width)
            .ok_or_else(|| self.err(self.pos, format!("{what} size overflows")))?;
        let remaining = self.buf.len() - self.pos;
        if bytes > remaining {
            return Err(self.err(
                self.pos,
                format!("truncated {what}: need {bytes} bytes, {remaining} available"),
            ));
        }
        Ok(bytes)
    }

    fn finite_f64s(&mut self, count: usize, what: &str) -> Result<Vec<f64>> {
        self.require(count, 8, what)?;
        (0..count)
            .map(|_| {
                let at = self.pos;
                let v = self.f64(what)?;
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(self.err(at, format!("non-finite value in {what}")))
                }
            })
            .collect()
    }

    fn finish(&self) -> Result<()> {
        if self.pos != self.buf.len() {
            return Err(self.err(
                self.pos,
                format!("{} trailing bytes", self.buf.len() - self.pos),
            ));
        }
        Ok(())
    }
}

/// Serializes `ds` in the `ML0T` layout.
pub fn write_dataset<W: Write>(ds: &Dataset, mut w: W) -> Result<()> {
    let dims = ds.feature_dims();
    let mut header = Vec::with_capacity(16 + 8 * dims.len() + ds.len());
    header.extend_from_slice(&DATASET_MAGIC);
    header.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    header.extend_from_slice(&(dims.len() as u32).to_le_bytes());
    for &d in dims {
        header.extend_from_slice(&(d as u64).to_le_bytes());
    }
    header.extend_from_slice(&(ds.len() as u64).to_le_bytes());
    header.extend(ds.labels().iter().map(|&y| y as u8));
    w.write_all(&header)?;
    for s in ds.samples() {
        let bytes: Vec<u8> = s.data().iter().flat_map(|v| v.to_le_bytes()).collect();
        w.write_all(&bytes)?;
    }
    w.flush()?;
    Ok(())
}

/// Parses an `ML0T` byte stream.
pub fn read_dataset<R: Read>(mut r: R) -> Result<Dataset> {
    let mut buf = Vec::new();
    r.read_to_end(&mut buf)?;
    let mut c = Cursor::new(&buf);
    c.magic(DATASET_MAGIC)?;
    c.version()?;
    let at = c.pos;
    let ndim = c.u32("ndim")? as usize;
    if ndim == 0 {
        return Err(c.err(at, "ndim is zero"));
    }
    c.require(ndim, 8, "dims")?;
    let dims = c.dims(ndim)?;
    let at = c.pos;
    let n = usize::try_from(c.u64("sample count")?)
        .map_err(|_| c.err(at, "sample count too large"))?;
    if n == 0 {
        return Err(c.err(at, "sample count is zero"));
    }
    let labels_at = c.pos;
    let raw = c.take(n, "labels")?;
    let labels: Vec<i8> = raw.iter().map(|&b| b as i8).collect();
    if let Some(i) = labels.iter().position(|&y| y != 1 && y != -1) {
        return Err(c.err(labels_at + i, format!("label {} is not +1 or -1", labels[i])));
    }
    let per_sample = dims
        .iter()
        .try_fold(1usize, |a, &d| a.checked_mul(d))
        .ok_or_else(|| c.err(c.pos, "sample size overflows"))?;
    c.require(
        n.checked_mul(per_sample)
            .ok_or_else(|| c.err(c.pos, "data size overflows"))?,
        8,
        "sample data",
    )?;
    let mut samples = Vec::with_capacity(n);
    for _ in 0..n {
        let data = c.finite_f64s(per_sample, "sample data")?;
        samples.push(DenseTensor::new(dims.clone(), data)?);
    }
    c.finish()?;
    Dataset::new(samples, labels)
}

pub fn save(ds: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    let mut buf = Vec::new();
    write_dataset(ds, &mut buf)?;
    fs::write(path, buf)?;
    Ok(())
}

pub fn load(path: impl AsRef<Path>) -> Result<Dataset> {
    read_dataset(fs::File::open(path)?)
}

/// Serializes `params` in the `ML0M` layout.
pub fn write_model<W: Write>(params: &ModelParams, mut w: W) -> Result<()> {
    let mut buf = Vec::new();
    buf.extend_from_slice(&MODEL_MAGIC);
    buf.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    buf.extend_from_slice(&(params.blocks.len() as u32).to_le_bytes());
    for b in &params.blocks {
        buf.extend_from_slice(&(b.len() as u64).to_le_bytes());
    }
    buf.extend_from_slice(&params.bias.to_le_bytes());
    for b in &params.blocks {
        buf.extend(b.iter().flat_map(|v| v.to_le_bytes()));
    }
    w.write_all(&buf)?;
    w.flush()?;
    Ok(())
}

/// Parses an `ML0M` byte stream.
pub fn read_model<R: Read>(mut r: R) -> Result<ModelParams> {
    let mut buf = Vec::new();
    r.read_to_end(&mut buf)?;
    let mut c = Cursor::new(&buf);
    c.magic(MODEL_MAGIC)?;
    c.version()?;
    let at = c.pos;
    let p = c.u32("block count")? as usize;
    if p == 0 {
        return Err(c.err(at, "block count is zero"));
    }
    c.require(p, 8, "dims")?;
    let dims = c.dims(p)?;
    let at = c.pos;
    let bias = c.f64("bias")?;
    if !bias.is_finite() {
        return Err(c.err(at, "non-finite bias"));
    }
    let total = dims
        .iter()
        .try_fold(0usize, |a, &d| a.checked_add(d))
        .ok_or_else(|| c.err(c.pos, "block sizes overflow"))?;
    c.require(total, 8, "block data")?;
    let blocks = dims
        .iter()
        .map(|&d| c.finite_f64s(d, "block data"))
        .collect::<Result<Vec<_>>>()?;
    c.finish()?;
    ModelParams::new(blocks, bias)
}

pub fn save_model(params: &ModelParams, path: impl AsRef<Path>) -> Result<()> {
    let mut buf = Vec::new();
    write_model(params, &mut buf)?;
    fs::write(path, buf)?;
    Ok(())
}

pub fn load_model(path: impl AsRef<Path>) -> Result<ModelParams> {
    read_model(fs::File::open(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> Dataset {
        let samples = (0..3)
            .map(|i| {
                DenseTensor::new(vec![2, 1, 3], (0..6).map(|j| (i * 6 + j) as f64 * 0.25 - 1.0).collect())
                    .unwrap()
            })
            .collect();
        Dataset::new(samples, vec![1, -1, 1]).unwrap()
    }

    fn encode(ds: &Dataset) -> Vec<u8> {
        let mut buf = Vec::new();
        write_dataset(ds, &mut buf).unwrap();
        buf
    }

    #[test]
    fn header_layout() {
        let buf = encode(&small());
        assert_eq!(&buf[..4], b"ML0T");
        assert_eq!(u32::from_le_bytes(buf[4..8].try_into().unwrap()), 1);
        assert_eq!(u32::from_le_bytes(buf[8..12].try_into().unwrap()), 3);
        assert_eq!(u64::from_le_bytes(buf[12..20].try_into().unwrap()), 2);
        assert_eq!(u64::from_le_bytes(buf[20..28].try_into().unwrap()), 1);
        assert_eq!(u64::from_le_bytes(buf[28..36].try_into().unwrap()), 3);
        assert_eq!(u64::from_le_bytes(buf[36..44].try_into().unwrap()), 3);
        assert_eq!(&buf[44..47], &[1u8, 0xff, 1]);
        assert_eq!(f64::from_le_bytes(buf[47..55].try_into().unwrap()), -1.0);
        assert_eq!(buf.len(), 47 + 3 * 6 * 8);
    }

    #[test]
    fn round_trip() {
        let ds = small();
        let back = read_dataset(encode(&ds).as_slice()).unwrap();
        assert_eq!(back, ds);
    }

    #[test]
    fn truncation_is_reported() {
        let buf = encode(&small());
        for cut in [0, 3, 10, 30, 45, buf.len() - 1] {
            match read_dataset(&buf[..cut]) {
                Err(Error::Format { offset, msg }) => {
                    assert!(offset as usize <= cut, "offset {offset} past cut {cut}");
                    assert!(msg.contains("truncated") || msg.contains("magic"), "{msg}");
                }
                other => panic!("cut {cut}: expected format error, got {other:?}"),
            }
        }
    }

    #[test]
    fn bad_magic_names_expected() {
        let mut buf = encode(&small());
        buf[0] = b'X';
        match read_dataset(buf.as_slice()) {
            Err(Error::Format { offset: 0, msg }) => assert!(msg.contains("ML0T"), "{msg}"),
            other => panic!("expected format error, got {other:?}"),
        }
    }

    #[test]
    fn structural_errors() {
        let good = encode(&small());

        let mut buf = good.clone();
        buf[4] = 2;
        assert!(matches!(read_dataset(buf.as_slice()), Err(Error::Format { offset: 4, .. })));

        let mut buf = good.clone();
        buf[45] = 0;
        assert!(matches!(read_dataset(buf.as_slice()), Err(Error::Format { offset: 45, .. })));

        let mut buf = good.clone();
        buf.push(0);
        assert!(matches!(read_dataset(buf.as_slice()), Err(Error::Format { .. })));

        let mut buf = good.clone();
        buf[47..55].copy_from_slice(&f64::NAN.to_le_bytes());
        assert!(matches!(read_dataset(buf.as_slice()), Err(Error::Format { offset: 47, .. })));

        // A huge declared sample count must fail without allocating.
        let mut buf = good;
        buf[36..44].copy_from_slice(&u64::MAX.to_le_bytes());
        assert!(matches!(read_dataset(buf.as_slice()), Err(Error::Format { .. })));
    }

    #[test]
    fn model_round_trip_and_errors() {
        let params = ModelParams::new(vec![vec![0.5, -1.25], vec![0.0], vec![3.0, 0.0, -0.0]], -0.75)
            .unwrap();
        let mut buf = Vec::new();
        write_model(&params, &mut buf).unwrap();
        assert_eq!(&buf[..4], b"ML0M");
        let back = read_model(buf.as_slice()).unwrap();
        assert_eq!(back.bias.to_bits(), params.bias.to_bits());
        for (a, b) in back.blocks.iter().zip(&params.blocks) {
            assert!(a.iter().zip(b).all(|(x, y)| x.to_bits() == y.to_bits()));
        }

        assert!(matches!(read_model(&buf[..buf.len() - 3]), Err(Error::Format { .. })));
        let mut bad = buf.clone();
        bad[3] = b'T';
        assert!(matches!(read_model(bad.as_slice()), Err(Error::Format { offset: 0, .. })));
        assert!(matches!(read_dataset(buf.as_slice()), Err(Error::Format { offset: 0, .. })));
    }

    #[test]
    fn file_helpers() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("d.ml0t");
        save(&small(), &path).unwrap();
        assert_eq!(load(&path).unwrap(), small());
        assert!(matches!(load(dir.path().join("missing")), Err(Error::Io(_))));
    }
}
