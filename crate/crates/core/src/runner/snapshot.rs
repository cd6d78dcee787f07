//! Binary field snapshots.
//!
//! Layout (all integers little-endian `u32`, data little-endian `f64`):
//!
//! ```text
//! "NEMF1\n"
//! dim, n[0..dim], field_count
//! per field: name_len, name (UTF-8), components
//! per field: samples, component-major, last axis fastest
//! ```

use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::fields::VectorField;

pub const MAGIC: &[u8; 6] = b"NEMF1\n";

#[derive(Clone, Debug, PartialEq)]
pub struct SnapshotField {
    pub name: String,
    pub components: usize,
    pub data: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Snapshot {
    pub dim: usize,
    pub n: Vec<usize>,
    pub fields: Vec<SnapshotField>,
}

impl Snapshot {
    /// Snapshot of real-space fields sharing one grid.
    pub fn from_fields(fields: &[(&str, &VectorField)]) -> Result<Self> {
        let first = fields
            .first()
            .ok_or_else(|| Error::Shape("snapshot needs at least one field".into()))?
            .1
            .grid();
        let mut out = Vec::with_capacity(fields.len());
        for (name, f) in fields {
            if f.grid().dim() != first.dim() || f.grid().n() != first.n() {
                return Err(Error::Shape(format!("field {name} is on a different grid")));
            }
            out.push(SnapshotField {
                name: name.to_string(),
                components: f.components(),
                data: f.values().to_vec(),
            });
        }
        Ok(Snapshot {
            dim: first.dim(),
            n: vec![first.n(); first.dim()],
            fields: out,
        })
    }

    pub fn points(&self) -> usize {
        self.n.iter().product()
    }

    pub fn field(&self, name: &str) -> Option<&SnapshotField> {
        self.fields.iter().find(|f| f.name == name)
    }

    pub fn encode(&self) -> Vec<u8> {
        let mut buf = Vec::new();
        buf.extend_from_slice(MAGIC);
        let put = |buf: &mut Vec<u8>, v: usize| buf.extend_from_slice(&(v as u32).to_le_bytes());
        put(&mut buf, self.dim);
        for &n in &self.n {
            put(&mut buf, n);
        }
        put(&mut buf, self.fields.len());
        for f in &self.fields {
            put(&mut buf, f.name.len());
            buf.extend_from_slice(f.name.as_bytes());
            put(&mut buf, f.components);
        }
        for f in &self.fields {
            for v in &f.data {
                buf.extend_from_slice(&v.to_le_bytes());
            }
        }
        buf
    }

    pub fn decode(bytes: &[u8]) -> Result<Self> {
        let mut cur = Cursor { bytes, pos: 0 };
        if cur.take(MAGIC.len())? != MAGIC {
            return Err(Error::Format("bad magic".into()));
        }
        let dim = cur.u32()?;
        if dim == 0 || dim > 3 {
            return Err(Error::Format(format!("unsupported dim {dim}")));
        }
        let n = (0..dim).map(|_| cur.u32()).collect::<Result<Vec<_>>>()?;
        let count = cur.u32()?;
        let mut headers = Vec::new();
        for _ in 0..count {
            let len = cur.u32()?;
            let name = std::str::from_utf8(cur.take(len)?)
                .map_err(|_| Error::Format("field name is not UTF-8".into()))?
                .to_string();
            headers.push((name, cur.u32()?));
        }
        let points: usize = n.iter().product();
        let mut fields = Vec::new();
        for (name, components) in headers {
            let count = components
                .checked_mul(points)
                .ok_or_else(|| Error::Format("field too large".into()))?;
            let raw = cur.take(count.checked_mul(8).ok_or_else(|| Error::Format("field too large".into()))?)?;
            let data = raw
                .chunks_exact(8)
                .map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk")))
                .collect();
            fields.push(SnapshotField { name, components, data });
        }
        if cur.pos != bytes.len() {
            return Err(Error::Format("trailing bytes".into()));
        }
        Ok(Snapshot { dim, n, fields })
    }
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, len: usize) -> Result<&'a [u8]> {
        let end = self
            .pos
            .checked_add(len)
            .filter(|&e| e <= self.bytes.len())
            .ok_or_else(|| Error::Format("truncated snapshot".into()))?;
        let out = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(out)
    }

    fn u32(&mut self) -> Result<usize> {
        let b = self.take(4)?;
        Ok(u32::from_le_bytes(b.try_into().expect("4 bytes")) as usize)
    }
}

pub fn write_snapshot(path: &Path, snap: &Snapshot) -> Result<()> {
    let mut f = std::fs::File::create(path)?;
    f.write_all(&snap.encode())?;
    f.flush()?;
    Ok(())
}

pub fn read_snapshot(path: &Path) -> Result<Snapshot> {
    let mut bytes = Vec::new();
    std::fs::File::open(path)?.read_to_end(&mut bytes)?;
    Snapshot::decode(&bytes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{Dealias, GridSpec};

    #[test]
    fn header_layout() {
        let g = GridSpec::new(2, 4, Dealias::None).unwrap();
        let d = VectorField::from_fn(g, 2, |x, o| {
            o[0] = x[0];
            o[1] = -x[1];
        });
        let s = Snapshot::from_fields(&[("d", &d)]).unwrap();
        let b = s.encode();
        assert_eq!(&b[..6], MAGIC);
        assert_eq!(&b[6..10], &2u32.to_le_bytes());
        assert_eq!(&b[10..14], &4u32.to_le_bytes());
        assert_eq!(&b[18..22], &1u32.to_le_bytes());
        assert_eq!(&b[22..26], &1u32.to_le_bytes());
        assert_eq!(b[26], b'd');
        assert_eq!(b.len(), 31 + 2 * 16 * 8);
        assert_eq!(Snapshot::decode(&b).unwrap(), s);
        assert!(Snapshot::decode(&b[..b.len() - 1]).is_err());
        assert!(Snapshot::decode(b"NEMF2\n").is_err());
    }
}
