//! Builds the map drawn by successor arcs inside a disk whose boundary lists
//! the corners in contour order. Every arc is inserted at its exact corner,
//! so planarity holds by construction.

use crate::map::{MapError, PlaneMap};

use super::SuccessorTable;

pub(crate) struct ChordMap {
    pub map: PlaneMap,
    /// Map vertex of every input vertex; the extra central vertex (cyclic case) comes last.
    pub vertex: Vec<u32>,
    /// First half-edge, in clockwise order, at each corner point.
    pub first_cw: Vec<u32>,
}

pub(crate) enum Root {
    /// The arc leaving corner 0.
    OutgoingAtZero,
    /// The half-edge whose corner precedes corner 0 clockwise at its vertex.
    BeforeZero,
}

/// `point_vertex[p]` is the vertex of corner point `p` (vertices `0..n_vertices`).
/// Arc `i` uses half-edges `2i` (at its source) and `2i + 1` (at its target).
/// In the cyclic case, arcs without successor end at an extra vertex with id
/// `n_vertices`, around which they appear counterclockwise in source order.
pub(crate) fn build(
    point_vertex: &[u32],
    n_vertices: usize,
    table: &SuccessorTable,
    root: Root,
) -> Result<ChordMap, MapError> {
    let points = point_vertex.len();
    let arcs = table.succ.len();
    let wrap = |t: usize| table.period.map_or(t, |p| t % p);
    let mut incoming: Vec<(usize, usize, u32)> = Vec::with_capacity(arcs);
    let mut star = Vec::new();
    for (i, s) in table.succ.iter().enumerate() {
        match s {
            Some(t) => incoming.push((wrap(*t), t - i, 2 * i as u32 + 1)),
            None => star.push(2 * i as u32 + 1),
        }
    }
    incoming.sort_unstable();
    let mut cw_at_point: Vec<Vec<u32>> = vec![Vec::new(); points];
    for &(p, _, h) in &incoming {
        cw_at_point[p].push(h);
    }
    for (i, list) in cw_at_point.iter_mut().enumerate().take(arcs) {
        list.push(2 * i as u32);
    }
    let mut points_of: Vec<Vec<usize>> = vec![Vec::new(); n_vertices];
    for (p, &v) in point_vertex.iter().enumerate() {
        points_of[v as usize].push(p);
    }
    let mut next = vec![0u32; 2 * arcs];
    let mut any_half_edge = vec![u32::MAX; n_vertices + 1];
    let mut cw = Vec::new();
    for (v, pts) in points_of.iter().enumerate() {
        cw.clear();
        for &p in pts {
            cw.extend_from_slice(&cw_at_point[p]);
        }
        let k = cw.len();
        for j in 0..k {
            next[cw[j] as usize] = cw[(j + k - 1) % k];
        }
        if k > 0 {
            any_half_edge[v] = cw[0];
        }
    }
    for j in 0..star.len() {
        next[star[j] as usize] = star[(j + 1) % star.len()];
    }
    if let Some(&h) = star.first() {
        any_half_edge[n_vertices] = h;
    }
    let first_cw: Vec<u32> = cw_at_point.iter().map(|l| l[0]).collect();
    let root_he = match root {
        Root::OutgoingAtZero => 0,
        Root::BeforeZero => first_cw[0],
    };
    let map = PlaneMap::from_next(next, Some(root_he))?;
    let vertex = any_half_edge
        .iter()
        .map(|&h| if h == u32::MAX { u32::MAX } else { map.vertex_of(h) })
        .collect();
    Ok(ChordMap { map, vertex, first_cw })
}
