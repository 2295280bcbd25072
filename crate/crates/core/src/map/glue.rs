use std::collections::HashSet;

use super::{PlaneMap, RawTables};

/// All rooted plane maps whose root face has degree `root_degree` and whose
/// other faces have the given degrees, obtained by gluing polygons along every
/// perfect matching of their sides. Deduplicated by canonical code; intended
/// as a brute-force oracle for small cases.
pub fn enumerate_glued_maps(root_degree: usize, internal: &[usize]) -> Vec<PlaneMap> {
    let mut face_prev = Vec::new();
    let mut offset = 0u32;
    for &d in std::iter::once(&root_degree).chain(internal) {
        assert!(d > 0, "polygon with no sides");
        for i in 0..d as u32 {
            face_prev.push(offset + (i + d as u32 - 1) % d as u32);
        }
        offset += d as u32;
    }
    let n = face_prev.len();
    if n % 2 == 1 {
        return vec![];
    }
    let mut opposite = vec![u32::MAX; n];
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    glue_rec(&face_prev, &mut opposite, &mut seen, &mut out);
    out
}

fn glue_rec(
    face_prev: &[u32],
    opposite: &mut Vec<u32>,
    seen: &mut HashSet<Vec<u32>>,
    out: &mut Vec<PlaneMap>,
) {
    let Some(first) = opposite.iter().position(|&o| o == u32::MAX) else {
        let next: Vec<u32> =
            (0..opposite.len()).map(|h| opposite[face_prev[h] as usize]).collect();
        let raw = RawTables { next, opposite: opposite.clone() };
        if let Ok(map) = PlaneMap::build(raw, Some(0)) {
            if seen.insert(map.canonical_code()) {
                out.push(map);
            }
        }
        return;
    };
    for other in first + 1..opposite.len() {
        if opposite[other] == u32::MAX {
            opposite[first] = other as u32;
            opposite[other] = first as u32;
            glue_rec(face_prev, opposite, seen, out);
            opposite[first] = u32::MAX;
            opposite[other] = u32::MAX;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_quadrangulations_with_boundary() {
        // rooted maps with a boundary of length 2 and no inner face: the single edge
        assert_eq!(enumerate_glued_maps(2, &[]).len(), 1);
        assert_eq!(enumerate_glued_maps(4, &[]).len(), 2);
        assert_eq!(enumerate_glued_maps(2, &[4]).len(), 2);
        assert_eq!(enumerate_glued_maps(4, &[4]).len(), 9);
        assert_eq!(enumerate_glued_maps(2, &[4, 4]).len(), 9);
    }
}
