//! Plane forests with integer labels: well-labeled trees and forests, and
//! two-type mobiles. Vertices are numbered in depth-first (preorder) order
//! across the whole forest, tree by tree.

mod encoding;
mod enumerate;
mod sample;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use encoding::{contour_and_label, mobile_encoding, EncodingProcesses};
#[cfg(test)]
pub(crate) use enumerate::compositions;
pub use enumerate::{
    enumerate_labeled_forests, enumerate_mobile_forests, enumerate_plane_forests,
    enumerate_well_labeled_trees, for_each_well_labeled_tree, mobile_labelings,
};
pub use sample::{
    uniform_composition, uniform_first_passage_steps, uniform_labeled_forest,
    uniform_mobile_labels, uniform_plane_forest,
};

pub const NONE: u32 = u32::MAX;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("parent array is not a depth-first numbering")]
    NotPreorder,
    #[error("forest has no tree")]
    Empty,
    #[error("labels length does not match vertex count")]
    LengthMismatch,
    #[error("label jump larger than one across the edge above vertex {0}")]
    LabelJump(u32),
    #[error("root labels violate the cyclic chain constraint at tree {0}")]
    RootChain(usize),
    #[error("first root label must be 0")]
    RootNotZero,
    #[error("labels around black vertex {0} violate the mobile constraint")]
    BlackConstraint(u32),
    #[error("enumeration size {0} is too large")]
    TooLarge(usize),
    #[error("malformed input: {0}")]
    Parse(String),
}

/// Unlabeled plane forest in depth-first numbering.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PlaneForest {
    parent: Vec<u32>,
    depth: Vec<u32>,
    roots: Vec<u32>,
    tree_of: Vec<u32>,
    child_off: Vec<u32>,
    child: Vec<u32>,
}

/// Which corners of the contour to list.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CornerMode {
    /// Forest whose roots are linked in a cycle: a root with `k` children has `k+1` corners.
    ForestCycle,
    /// Single tree seen periodically: the root has as many corners as children.
    TreePeriodic,
    /// Single tree with the root corner split in two (`2n+1` corners).
    TreeSlice,
}

impl PlaneForest {
    /// `parent[v]` is `NONE` for roots. Vertex 0 must be a root and the
    /// numbering must be depth-first with children in left-to-right order.
    pub fn from_parents(parent: Vec<u32>) -> Result<Self, TreeError> {
        let n = parent.len();
        if n == 0 {
            return Err(TreeError::Empty);
        }
        if parent[0] != NONE {
            return Err(TreeError::NotPreorder);
        }
        let mut depth = vec![0u32; n];
        let mut roots = Vec::new();
        let mut tree_of = vec![0u32; n];
        let mut stack: Vec<u32> = Vec::new();
        let mut nchild = vec![0u32; n];
        for v in 0..n {
            let p = parent[v];
            if p == NONE {
                stack.clear();
                roots.push(v as u32);
            } else {
                while stack.last().is_some_and(|&t| t != p) {
                    stack.pop();
                }
                if stack.is_empty() {
                    return Err(TreeError::NotPreorder);
                }
                depth[v] = depth[p as usize] + 1;
                nchild[p as usize] += 1;
            }
            tree_of[v] = roots.len() as u32 - 1;
            stack.push(v as u32);
        }
        let mut child_off = vec![0u32; n + 1];
        for v in 0..n {
            child_off[v + 1] = child_off[v] + nchild[v];
        }
        let mut fill = child_off.clone();
        let mut child = vec![0u32; n - roots.len()];
        for v in 0..n {
            let p = parent[v];
            if p != NONE {
                child[fill[p as usize] as usize] = v as u32;
                fill[p as usize] += 1;
            }
        }
        Ok(PlaneForest { parent, depth, roots, tree_of, child_off, child })
    }

    /// Builds a forest from its per-vertex child counts in depth-first order.
    pub fn from_child_counts(counts: &[u32]) -> Result<Self, TreeError> {
        let mut parent = Vec::with_capacity(counts.len());
        let mut stack: Vec<(u32, u32)> = Vec::new();
        for (v, &c) in counts.iter().enumerate() {
            while stack.last().is_some_and(|&(_, r)| r == 0) {
                stack.pop();
            }
            match stack.last_mut() {
                Some((p, r)) => {
                    parent.push(*p);
                    *r -= 1;
                }
                None => parent.push(NONE),
            }
            stack.push((v as u32, c));
        }
        if stack.iter().any(|&(_, r)| r > 0) {
            return Err(TreeError::NotPreorder);
        }
        Self::from_parents(parent)
    }

    pub fn single_vertex_trees(l: usize) -> Self {
        Self::from_parents(vec![NONE; l.max(1)]).expect("valid")
    }

    pub fn num_vertices(&self) -> usize {
        self.parent.len()
    }
    pub fn num_edges(&self) -> usize {
        self.parent.len() - self.roots.len()
    }
    pub fn num_trees(&self) -> usize {
        self.roots.len()
    }
    pub fn roots(&self) -> &[u32] {
        &self.roots
    }
    pub fn parent(&self, v: u32) -> u32 {
        self.parent[v as usize]
    }
    pub fn parents(&self) -> &[u32] {
        &self.parent
    }
    pub fn depth(&self, v: u32) -> u32 {
        self.depth[v as usize]
    }
    pub fn tree_of(&self, v: u32) -> u32 {
        self.tree_of[v as usize]
    }
    pub fn children(&self, v: u32) -> &[u32] {
        let (a, b) = (self.child_off[v as usize], self.child_off[v as usize + 1]);
        &self.child[a as usize..b as usize]
    }
    pub fn is_white(&self, v: u32) -> bool {
        self.depth[v as usize].is_multiple_of(2)
    }

    /// Vertex range `[start, end)` of tree `t`.
    pub fn tree_range(&self, t: usize) -> (u32, u32) {
        let start = self.roots[t];
        let end = self.roots.get(t + 1).copied().unwrap_or(self.parent.len() as u32);
        (start, end)
    }

    /// Vertices of the corners met along the contour, in order.
    pub fn corner_vertices(&self, white_only: bool, mode: CornerMode) -> Vec<u32> {
        let mut out = Vec::with_capacity(2 * self.num_vertices());
        let emit = |v: u32, out: &mut Vec<u32>| {
            if !white_only || self.is_white(v) {
                out.push(v);
            }
        };
        let mut stack: Vec<(u32, u32)> = Vec::new();
        for &r in &self.roots {
            emit(r, &mut out);
            stack.push((r, 0));
            while let Some(top) = stack.last_mut() {
                let (v, i) = *top;
                let ch = self.children(v);
                if (i as usize) < ch.len() {
                    top.1 += 1;
                    emit(ch[i as usize], &mut out);
                    stack.push((ch[i as usize], 0));
                } else {
                    stack.pop();
                    if let Some(&(p, _)) = stack.last() {
                        emit(p, &mut out);
                    }
                }
            }
        }
        if mode == CornerMode::TreePeriodic && self.num_vertices() > 1 {
            out.pop();
        }
        out
    }
}

/// Plane forest with integer labels on every vertex, the first root labelled 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LabeledForest {
    pub forest: PlaneForest,
    pub labels: Vec<i64>,
}

/// A labeled forest with a single tree.
pub type WellLabeledTree = LabeledForest;

impl LabeledForest {
    pub fn new(forest: PlaneForest, labels: Vec<i64>) -> Result<Self, TreeError> {
        let lf = LabeledForest { forest, labels };
        lf.validate()?;
        Ok(lf)
    }

    pub fn validate(&self) -> Result<(), TreeError> {
        let f = &self.forest;
        if self.labels.len() != f.num_vertices() {
            return Err(TreeError::LengthMismatch);
        }
        if self.labels[0] != 0 {
            return Err(TreeError::RootNotZero);
        }
        for v in 0..f.num_vertices() as u32 {
            let p = f.parent(v);
            if p != NONE && (self.labels[v as usize] - self.labels[p as usize]).abs() > 1 {
                return Err(TreeError::LabelJump(v));
            }
        }
        check_root_chain(&self.root_labels())
    }

    pub fn num_trees(&self) -> usize {
        self.forest.num_trees()
    }
    pub fn num_edges(&self) -> usize {
        self.forest.num_edges()
    }
    pub fn label(&self, v: u32) -> i64 {
        self.labels[v as usize]
    }
    pub fn root_labels(&self) -> Vec<i64> {
        self.forest.roots().iter().map(|&r| self.labels[r as usize]).collect()
    }
    pub fn min_label(&self) -> i64 {
        *self.labels.iter().min().expect("nonempty")
    }
}

pub(crate) fn check_root_chain(roots: &[i64]) -> Result<(), TreeError> {
    let l = roots.len();
    for i in 0..l {
        if roots[(i + 1) % l] < roots[i] - 1 {
            return Err(TreeError::RootChain(i));
        }
    }
    Ok(())
}

/// Two-type forest: vertices at even depth are white and carry labels,
/// vertices at odd depth are black (their label slot is unused and kept at 0).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MobileForest {
    pub forest: PlaneForest,
    pub labels: Vec<i64>,
}

impl MobileForest {
    pub fn new(forest: PlaneForest, labels: Vec<i64>) -> Result<Self, TreeError> {
        let mf = MobileForest { forest, labels };
        mf.validate()?;
        Ok(mf)
    }

    pub fn validate(&self) -> Result<(), TreeError> {
        let f = &self.forest;
        if self.labels.len() != f.num_vertices() {
            return Err(TreeError::LengthMismatch);
        }
        if self.labels[0] != 0 {
            return Err(TreeError::RootNotZero);
        }
        for b in 0..f.num_vertices() as u32 {
            if f.is_white(b) {
                continue;
            }
            let ring: Vec<i64> = std::iter::once(f.parent(b))
                .chain(f.children(b).iter().copied())
                .map(|v| self.labels[v as usize])
                .collect();
            let k = ring.len();
            if (0..k).any(|i| ring[(i + 1) % k] < ring[i] - 1) {
                return Err(TreeError::BlackConstraint(b));
            }
        }
        check_root_chain(&self.root_labels())
    }

    pub fn num_trees(&self) -> usize {
        self.forest.num_trees()
    }
    pub fn root_labels(&self) -> Vec<i64> {
        self.forest.roots().iter().map(|&r| self.labels[r as usize]).collect()
    }
    /// Number of white vertices.
    pub fn n_white(&self) -> usize {
        (0..self.forest.num_vertices() as u32).filter(|&v| self.forest.is_white(v)).count()
    }
    /// Number of black vertices.
    pub fn n_black(&self) -> usize {
        self.forest.num_vertices() - self.n_white()
    }
    pub fn min_white_label(&self) -> i64 {
        (0..self.forest.num_vertices() as u32)
            .filter(|&v| self.forest.is_white(v))
            .map(|v| self.labels[v as usize])
            .min()
            .expect("roots are white")
    }
}

/// JSON form shared by labeled forests and mobiles.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForestJson {
    /// Per tree, the parent of each vertex in local depth-first numbering (`-1` for the root).
    pub trees: Vec<Vec<i64>>,
    pub labels: Vec<Vec<i64>>,
}

impl ForestJson {
    pub fn from_parts(forest: &PlaneForest, labels: &[i64]) -> Self {
        let mut trees = Vec::new();
        let mut labs = Vec::new();
        for t in 0..forest.num_trees() {
            let (a, b) = forest.tree_range(t);
            trees.push(
                (a..b)
                    .map(|v| match forest.parent(v) {
                        NONE => -1,
                        p => (p - a) as i64,
                    })
                    .collect(),
            );
            labs.push(labels[a as usize..b as usize].to_vec());
        }
        ForestJson { trees, labels: labs }
    }

    pub fn into_parts(self) -> Result<(PlaneForest, Vec<i64>), TreeError> {
        if self.trees.len() != self.labels.len() {
            return Err(TreeError::LengthMismatch);
        }
        let mut parent = Vec::new();
        let mut labels = Vec::new();
        for (tree, labs) in self.trees.into_iter().zip(self.labels) {
            if tree.len() != labs.len() || tree.first() != Some(&-1) {
                return Err(TreeError::Parse("tree must start with its root".into()));
            }
            let base = parent.len() as i64;
            for (i, &p) in tree.iter().enumerate() {
                if i > 0 && !(0..i as i64).contains(&p) {
                    return Err(TreeError::NotPreorder);
                }
                parent.push(if p < 0 { NONE } else { (base + p) as u32 });
            }
            labels.extend(labs);
        }
        Ok((PlaneForest::from_parents(parent)?, labels))
    }
}

impl From<&LabeledForest> for ForestJson {
    fn from(f: &LabeledForest) -> Self {
        ForestJson::from_parts(&f.forest, &f.labels)
    }
}

impl From<&MobileForest> for ForestJson {
    fn from(f: &MobileForest) -> Self {
        ForestJson::from_parts(&f.forest, &f.labels)
    }
}

impl TryFrom<ForestJson> for LabeledForest {
    type Error = TreeError;
    fn try_from(j: ForestJson) -> Result<Self, TreeError> {
        let (f, l) = j.into_parts()?;
        LabeledForest::new(f, l)
    }
}

impl TryFrom<ForestJson> for MobileForest {
    type Error = TreeError;
    fn try_from(j: ForestJson) -> Result<Self, TreeError> {
        let (f, l) = j.into_parts()?;
        MobileForest::new(f, l)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preorder_validation() {
        assert!(PlaneForest::from_parents(vec![NONE, 0, 0, 1]).is_err());
        let f = PlaneForest::from_parents(vec![NONE, 0, 1, 0, NONE, 4]).unwrap();
        assert_eq!(f.num_trees(), 2);
        assert_eq!(f.children(0), &[1, 3]);
        assert_eq!(f.depth(2), 2);
        assert_eq!(f.tree_range(1), (4, 6));
        let g = PlaneForest::from_child_counts(&[2, 1, 0, 0, 1, 0]).unwrap();
        assert_eq!(g, f);
    }

    #[test]
    fn corners_per_mode() {
        // root with two leaves
        let f = PlaneForest::from_parents(vec![NONE, 0, 0]).unwrap();
        assert_eq!(f.corner_vertices(false, CornerMode::ForestCycle), vec![0, 1, 0, 2, 0]);
        assert_eq!(f.corner_vertices(false, CornerMode::TreeSlice), vec![0, 1, 0, 2, 0]);
        assert_eq!(f.corner_vertices(false, CornerMode::TreePeriodic), vec![0, 1, 0, 2]);
        assert_eq!(f.corner_vertices(true, CornerMode::ForestCycle), vec![0, 0, 0]);
    }

    #[test]
    fn label_constraints() {
        let f = PlaneForest::from_parents(vec![NONE, 0, NONE]).unwrap();
        assert!(LabeledForest::new(f.clone(), vec![0, 1, -1]).is_ok());
        assert_eq!(LabeledForest::new(f.clone(), vec![0, 2, 0]), Err(TreeError::LabelJump(1)));
        // roots 0 then -2: chain step of -2 is forbidden
        assert_eq!(LabeledForest::new(f.clone(), vec![0, 0, -2]), Err(TreeError::RootChain(0)));
        // roots 0 then 2: closing step 2 -> 0 is forbidden
        assert_eq!(LabeledForest::new(f, vec![0, 0, 2]), Err(TreeError::RootChain(1)));
    }

    #[test]
    fn mobile_constraint() {
        // white 0 - black 1 - whites 2, 3
        let f = PlaneForest::from_parents(vec![NONE, 0, 1, 1]).unwrap();
        assert!(MobileForest::new(f.clone(), vec![0, 0, -1, -1]).is_ok());
        assert!(MobileForest::new(f.clone(), vec![0, 0, 3, 2]).is_err());
        assert_eq!(MobileForest::new(f.clone(), vec![0, 0, 1, 0]).unwrap().n_black(), 1);
        assert!(MobileForest::new(f.clone(), vec![0, 0, -1, 1]).is_ok());
        assert!(MobileForest::new(f, vec![0, 0, 1, -1]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let f = PlaneForest::from_parents(vec![NONE, 0, 1, 0, NONE, 4]).unwrap();
        let lf = LabeledForest::new(f, vec![0, 1, 0, -1, 0, 1]).unwrap();
        let j = serde_json::to_string(&ForestJson::from(&lf)).unwrap();
        assert_eq!(j, r#"{"trees":[[-1,0,1,0],[-1,0]],"labels":[[0,1,0,-1],[0,1]]}"#);
        let back: LabeledForest = serde_json::from_str::<ForestJson>(&j).unwrap().try_into().unwrap();
        assert_eq!(back, lf);
    }
}
