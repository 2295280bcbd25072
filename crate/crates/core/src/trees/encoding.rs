use super::{CornerMode, LabeledForest, MobileForest, PlaneForest, TreeError, NONE};

/// Contour and label processes of a labeled forest, with the extra vertex
/// `rho_{l+1}` appended: `contour[j] = depth - (tree index)`, ending at `-l`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContourProcesses {
    pub contour: Vec<i64>,
    pub labels: Vec<i64>,
}

pub fn contour_and_label(f: &LabeledForest) -> ContourProcesses {
    let forest = &f.forest;
    let corners = forest.corner_vertices(false, CornerMode::ForestCycle);
    let mut contour = Vec::with_capacity(corners.len() + 1);
    let mut labels = Vec::with_capacity(corners.len() + 1);
    for &v in &corners {
        contour.push(forest.depth(v) as i64 - forest.tree_of(v) as i64);
        labels.push(f.label(v));
    }
    contour.push(-(forest.num_trees() as i64));
    labels.push(f.label(0));
    ContourProcesses { contour, labels }
}

impl LabeledForest {
    /// Inverse of [`contour_and_label`].
    pub fn from_contour(p: &ContourProcesses) -> Result<Self, TreeError> {
        let c = &p.contour;
        if c.len() != p.labels.len() || c.is_empty() || c[0] != 0 {
            return Err(TreeError::LengthMismatch);
        }
        let l = -c[c.len() - 1];
        if l < 1 {
            return Err(TreeError::Parse("contour must end at -l < 0".into()));
        }
        let mut parent = vec![NONE];
        let mut labels = vec![p.labels[0]];
        let mut path = vec![0u32];
        let mut done = 0;
        for j in 1..c.len() {
            match c[j] - c[j - 1] {
                1 => {
                    let v = parent.len() as u32;
                    parent.push(*path.last().ok_or(TreeError::NotPreorder)?);
                    labels.push(p.labels[j]);
                    path.push(v);
                }
                -1 => {
                    path.pop();
                    if path.is_empty() {
                        done += 1;
                        if done < l {
                            path.push(parent.len() as u32);
                            parent.push(NONE);
                            labels.push(p.labels[j]);
                        }
                    }
                }
                _ => return Err(TreeError::Parse("contour steps must be +-1".into())),
            }
        }
        if done != l {
            return Err(TreeError::Parse("contour does not close all trees".into()));
        }
        LabeledForest::new(PlaneForest::from_parents(parent)?, labels)
    }
}

/// Exploration processes of a mobile forest.
///
/// Depth-first processes (`height`, `labels`, `labels_rel`, `upsilon`) are
/// indexed by vertices `v_0, v_1, ...`; black vertices take their parent's
/// label. `lambda_v[m]` and `lambda_f[m]` count white and black vertices among
/// the first `m`. The white contour triple lists the white corners in contour
/// order with half the distance to their tree root, their tree index and label.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EncodingProcesses {
    pub height: Vec<i64>,
    pub labels: Vec<i64>,
    pub labels_rel: Vec<i64>,
    pub upsilon: Vec<i64>,
    pub lambda_v: Vec<i64>,
    pub lambda_f: Vec<i64>,
    pub white_contour: Vec<i64>,
    pub white_upsilon: Vec<i64>,
    pub white_labels: Vec<i64>,
    pub white_labels_rel: Vec<i64>,
}

pub fn mobile_encoding(mf: &MobileForest) -> EncodingProcesses {
    let f = &mf.forest;
    let n = f.num_vertices();
    let mut e = EncodingProcesses::default();
    let root_label = |v: u32| mf.labels[f.roots()[f.tree_of(v) as usize] as usize];
    let label = |v: u32| {
        if f.is_white(v) {
            mf.labels[v as usize]
        } else {
            mf.labels[f.parent(v) as usize]
        }
    };
    e.lambda_v.push(0);
    e.lambda_f.push(0);
    for v in 0..n as u32 {
        e.height.push(f.depth(v) as i64);
        e.labels.push(label(v));
        e.labels_rel.push(label(v) - root_label(v));
        e.upsilon.push(f.tree_of(v) as i64);
        let w = f.is_white(v) as i64;
        e.lambda_v.push(e.lambda_v.last().unwrap() + w);
        e.lambda_f.push(e.lambda_f.last().unwrap() + 1 - w);
    }
    for v in f.corner_vertices(true, CornerMode::ForestCycle) {
        e.white_contour.push(f.depth(v) as i64 / 2);
        e.white_upsilon.push(f.tree_of(v) as i64);
        e.white_labels.push(mf.labels[v as usize]);
        e.white_labels_rel.push(mf.labels[v as usize] - root_label(v));
    }
    e
}
