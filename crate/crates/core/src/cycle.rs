//! Cycle lemma for left-continuous sequences.

use rand::Rng;

/// Start indices `j` such that the rotation `x[j..] ++ x[..j]` first reaches
/// `-k` at its last step. `x` must have entries `>= -1` summing to `-k < 0`;
/// there are exactly `k` such indices.
pub fn good_rotations(x: &[i64], k: i64) -> Vec<usize> {
    let m = x.len();
    let mut s = Vec::with_capacity(m + 1);
    s.push(0i64);
    for &v in x {
        s.push(s.last().unwrap() + v);
    }
    debug_assert_eq!(s[m], -k);
    // tail[i] = min of s[i..m) (the final value s[m] = -k is excluded)
    let mut tail = vec![i64::MAX; m + 1];
    for i in (0..m).rev() {
        tail[i] = tail[i + 1].min(s[i]);
    }
    let mut out = Vec::with_capacity(k.max(0) as usize);
    let mut before = i64::MAX;
    for j in 0..m {
        if s[j] < before && tail[j + 1] > s[j] - k {
            out.push(j);
        }
        before = before.min(s[j]);
    }
    out
}

/// Rotates `items` (aligned with `x`) to a uniformly chosen good rotation.
pub fn rotate_uniformly<T, R: Rng + ?Sized>(items: &mut [T], x: &[i64], k: i64, rng: &mut R) {
    let good = good_rotations(x, k);
    assert_eq!(good.len() as i64, k, "cycle lemma count");
    let j = good[rng.random_range(0..good.len())];
    items.rotate_left(j);
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn first_passage_at_end(x: &[i64], k: i64) -> bool {
        let mut s = 0;
        for (i, &v) in x.iter().enumerate() {
            s += v;
            if s == -k && i + 1 < x.len() {
                return false;
            }
        }
        s == -k
    }

    proptest! {
        #[test]
        fn matches_brute_force(raw in proptest::collection::vec(0i64..4, 1..14), k in 1i64..4) {
            // force the sum to -k by appending -1 steps
            let mut x: Vec<i64> = raw.iter().map(|&v| v - 1).collect();
            let mut sum: i64 = x.iter().sum();
            while sum > -k { x.push(-1); sum -= 1; }
            prop_assume!(sum == -k);
            let good = good_rotations(&x, k);
            let brute: Vec<usize> = (0..x.len())
                .filter(|&j| {
                    let mut y = x.clone();
                    y.rotate_left(j);
                    first_passage_at_end(&y, k)
                })
                .collect();
            prop_assert_eq!(&good, &brute);
            prop_assert_eq!(good.len() as i64, k);
        }
    }
}
