/// Successor of every source corner: the index of the first later corner
/// whose label is one less, or `None` for the extra corner at `v_*`.
/// In the cyclic case indices are taken in the periodic extension, so a
/// successor may exceed the number of corners.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuccessorTable {
    pub succ: Vec<Option<usize>>,
    pub period: Option<usize>,
}

impl SuccessorTable {
    /// Periodic corner sequence with an extra corner labelled `min - 1`.
    pub fn cyclic(labels: &[i64]) -> Self {
        let n = labels.len();
        let min = *labels.iter().min().expect("at least one corner");
        let max = *labels.iter().max().unwrap();
        let width = (max - min + 1) as usize;
        let mut next_at = vec![usize::MAX; width];
        let mut succ = vec![None; n];
        for j in (0..2 * n).rev() {
            let lab = labels[j % n];
            let k = (lab - min) as usize;
            if j < n && k > 0 {
                let t = next_at[k - 1];
                debug_assert!(t != usize::MAX);
                succ[j] = Some(t);
            }
            next_at[k] = j;
        }
        SuccessorTable { succ, period: Some(n) }
    }

    /// Linear sequence: every corner but the last must have a successor.
    pub fn linear(labels: &[i64]) -> Self {
        let n = labels.len();
        let min = *labels.iter().min().expect("at least one corner");
        let max = *labels.iter().max().unwrap();
        let mut next_at = vec![usize::MAX; (max - min + 1) as usize];
        let mut succ = vec![None; n - 1];
        for j in (0..n).rev() {
            let k = (labels[j] - min) as usize;
            if j + 1 < n {
                assert!(k > 0 && next_at[k - 1] != usize::MAX, "corner {j} has no successor");
                succ[j] = Some(next_at[k - 1]);
            }
            next_at[k] = j;
        }
        SuccessorTable { succ, period: None }
    }

    /// True when no two arcs `(i, s(i))` cross, periodic copies included.
    pub fn is_laminar(&self) -> bool {
        let n = self.succ.len();
        let shifts: &[usize] = if self.period.is_some() { &[0, 1] } else { &[0] };
        let mut iv: Vec<(usize, usize)> = Vec::new();
        for &k in shifts {
            for (i, s) in self.succ.iter().enumerate() {
                if let Some(t) = s {
                    iv.push((i + k * n, t + k * n));
                }
            }
        }
        iv.sort_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)));
        let mut open: Vec<usize> = Vec::new();
        for (s, e) in iv {
            while open.last().is_some_and(|&top| top <= s) {
                open.pop();
            }
            if open.last().is_some_and(|&top| top < e) {
                return false;
            }
            open.push(e);
        }
        true
    }
}
