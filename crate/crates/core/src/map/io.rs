use serde::{Deserialize, Serialize};

use super::{MapError, PlaneMap};

const MAGIC: &[u8; 5] = b"PMAP1";

/// JSON form: rotation table plus root half-edge (opposite is `h ^ 1`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapJson {
    pub half_edges: Vec<u32>,
    pub root: Option<u32>,
}

impl From<&PlaneMap> for MapJson {
    fn from(m: &PlaneMap) -> Self {
        MapJson { half_edges: m.rotation().to_vec(), root: m.root() }
    }
}

impl TryFrom<MapJson> for PlaneMap {
    type Error = MapError;
    fn try_from(j: MapJson) -> Result<Self, MapError> {
        PlaneMap::from_next(j.half_edges, j.root)
    }
}

/// Binary layout: magic, half-edge count, root (`u32::MAX` if none), rotation table.
pub fn write_pmap1(m: &PlaneMap) -> Vec<u8> {
    let mut out = Vec::with_capacity(13 + 4 * m.num_half_edges());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&(m.num_half_edges() as u32).to_le_bytes());
    out.extend_from_slice(&m.root().unwrap_or(u32::MAX).to_le_bytes());
    for &x in m.rotation() {
        out.extend_from_slice(&x.to_le_bytes());
    }
    out
}

pub fn read_pmap1(bytes: &[u8]) -> Result<PlaneMap, MapError> {
    let bad = |s: &str| MapError::Parse(s.to_string());
    if bytes.len() < 13 || &bytes[..5] != MAGIC {
        return Err(bad("missing PMAP1 header"));
    }
    let word = |i: usize| u32::from_le_bytes(bytes[i..i + 4].try_into().unwrap());
    let n = word(5) as usize;
    let root = word(9);
    if bytes.len() != 13 + 4 * n {
        return Err(bad("truncated rotation table"));
    }
    let next = (0..n).map(|i| word(13 + 4 * i)).collect();
    PlaneMap::from_next(next, (root != u32::MAX).then_some(root))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips() {
        let m = PlaneMap::from_next(vec![5, 2, 1, 4, 3, 0], Some(3)).unwrap();
        let j = serde_json::to_string(&MapJson::from(&m)).unwrap();
        let back: PlaneMap = serde_json::from_str::<MapJson>(&j).unwrap().try_into().unwrap();
        assert_eq!(back, m);
        assert_eq!(read_pmap1(&write_pmap1(&m)).unwrap(), m);
        let v = PlaneMap::vertex_map();
        assert_eq!(read_pmap1(&write_pmap1(&v)).unwrap(), v);
        assert!(read_pmap1(b"PMAP2\0\0\0\0\0\0\0\0").is_err());
    }
}
