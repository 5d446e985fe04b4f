//! `HODLRBIN` dump of an assembled matrix. Layout in `docs/FORMAT.md`.

use hodlr::hodlr::LevelPanel;
use hodlr::{ClusterTree, Field, HodlrMatrix, Scalar};

use crate::BenchError;

pub const MAGIC: &[u8; 8] = b"HODLRBIN";
pub const VERSION: u32 = 1;

fn put_scalar<T: Scalar>(out: &mut Vec<u8>, x: T) {
    let (re, im) = x.to_parts();
    match T::FIELD {
        Field::Real32 => out.extend_from_slice(&(re as f32).to_le_bytes()),
        Field::Real64 => out.extend_from_slice(&re.to_le_bytes()),
        Field::Complex64 => {
            out.extend_from_slice(&(re as f32).to_le_bytes());
            out.extend_from_slice(&(im as f32).to_le_bytes());
        }
        Field::Complex128 => {
            out.extend_from_slice(&re.to_le_bytes());
            out.extend_from_slice(&im.to_le_bytes());
        }
    }
}

pub fn dump<T: Scalar>(h: &HodlrMatrix<T>) -> Vec<u8> {
    let s = h.storage_report();
    let mut out = Vec::with_capacity(64 + s.total_bytes());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.push(T::FIELD.tag());
    out.extend_from_slice(&(h.n() as u64).to_le_bytes());
    out.extend_from_slice(&(h.depth() as u32).to_le_bytes());
    for p in h.u_panels() {
        for &r in p.ranks() {
            out.extend_from_slice(&(r as u32).to_le_bytes());
        }
    }
    for &x in h.d_big() {
        put_scalar(&mut out, x);
    }
    for p in h.u_panels().iter().chain(h.v_panels()) {
        for &x in p.data() {
            put_scalar(&mut out, x);
        }
    }
    out
}

struct Cursor<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, k: usize, what: &str) -> Result<&'a [u8], BenchError> {
        let end = self.pos.checked_add(k).filter(|&e| e <= self.buf.len());
        let end = end.ok_or_else(|| BenchError::Format(format!("truncated dump while reading {what} at byte {}", self.pos)))?;
        let s = &self.buf[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn u32(&mut self, what: &str) -> Result<u32, BenchError> {
        Ok(u32::from_le_bytes(self.take(4, what)?.try_into().unwrap()))
    }

    fn u64(&mut self, what: &str) -> Result<u64, BenchError> {
        Ok(u64::from_le_bytes(self.take(8, what)?.try_into().unwrap()))
    }

    fn f32(&mut self, what: &str) -> Result<f64, BenchError> {
        Ok(f32::from_le_bytes(self.take(4, what)?.try_into().unwrap()) as f64)
    }

    fn f64(&mut self, what: &str) -> Result<f64, BenchError> {
        Ok(f64::from_le_bytes(self.take(8, what)?.try_into().unwrap()))
    }

    fn scalars<T: Scalar>(&mut self, count: usize, what: &str) -> Result<Vec<T>, BenchError> {
        if count.saturating_mul(T::FIELD.scalar_bytes()) > self.buf.len() - self.pos {
            return Err(BenchError::Format(format!("truncated dump while reading {what}")));
        }
        (0..count)
            .map(|_| {
                Ok(match T::FIELD {
                    Field::Real32 => T::from_parts(self.f32(what)?, 0.0),
                    Field::Real64 => T::from_parts(self.f64(what)?, 0.0),
                    Field::Complex64 => T::from_parts(self.f32(what)?, self.f32(what)?),
                    Field::Complex128 => T::from_parts(self.f64(what)?, self.f64(what)?),
                })
            })
            .collect()
    }
}

/// Field tag stored in a dump, checked against the magic and version.
pub fn peek_field(bytes: &[u8]) -> Result<Field, BenchError> {
    let mut c = Cursor { buf: bytes, pos: 0 };
    if c.take(8, "magic")? != MAGIC {
        return Err(BenchError::Format("not a HODLRBIN file".into()));
    }
    let version = c.u32("version")?;
    if version != VERSION {
        return Err(BenchError::Format(format!("unsupported version {version}")));
    }
    let tag = c.take(1, "field tag")?[0];
    Field::from_tag(tag).ok_or_else(|| BenchError::Format(format!("unknown field tag {tag}")))
}

pub fn load<T: Scalar>(bytes: &[u8]) -> Result<HodlrMatrix<T>, BenchError> {
    let field = peek_field(bytes)?;
    if field != T::FIELD {
        return Err(BenchError::Format(format!("dump holds {} data, requested {}", field.name(), T::FIELD.name())));
    }
    let mut c = Cursor { buf: bytes, pos: 13 };
    let n = usize::try_from(c.u64("n")?).map_err(|_| BenchError::Format("n does not fit in memory".into()))?;
    let depth = c.u32("depth")? as usize;
    if depth >= usize::BITS as usize {
        return Err(BenchError::Format(format!("depth {depth} is not plausible")));
    }
    let tree = ClusterTree::with_depth(n, depth)?;
    let mut u_ranks = Vec::with_capacity(depth);
    for level in 1..=depth {
        let ranks = (0..1usize << level).map(|_| c.u32("ranks").map(|r| r as usize)).collect::<Result<Vec<_>, _>>()?;
        u_ranks.push(ranks);
    }
    let d_len: usize = tree.leaves().iter().map(|l| l.len() * l.len()).sum();
    let d_big = c.scalars(d_len, "diagonal blocks")?;
    let mut panels = |ranks: &[Vec<usize>], what: &str| -> Result<Vec<LevelPanel<T>>, BenchError> {
        ranks
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let len: usize = tree.level(i + 1).iter().zip(r).map(|(node, &k)| node.len() * k).sum();
                let data = c.scalars(len, what)?;
                Ok(LevelPanel::from_raw(&tree, i + 1, r.clone(), data)?)
            })
            .collect()
    };
    let u = panels(&u_ranks, "U panels")?;
    // V_{2k} pairs with U_{2k+1}
    let v_ranks: Vec<Vec<usize>> = u_ranks.iter().map(|r| (0..r.len()).map(|k| r[k ^ 1]).collect()).collect();
    let v = panels(&v_ranks, "V panels")?;
    if c.pos != bytes.len() {
        return Err(BenchError::Format(format!("{} trailing bytes", bytes.len() - c.pos)));
    }
    Ok(HodlrMatrix::from_raw_parts(tree, d_big, u, v)?)
}
