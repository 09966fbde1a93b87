//! Exact occurrence counts for patterns of order at most four in
//! `O(n^2 log n)` time.
//!
//! The backtracking counter in [`super::count`] touches every occurrence
//! and is hopeless for `n` in the thousands. Here the one or two middle
//! entries of the pattern are enumerated and the outer entries are counted
//! with prefix-count rows and Fenwick trees.

/// Binary indexed tree over `0..n` with `u64` weights.
pub(crate) struct Fenwick {
    tree: Vec<u64>,
}

impl Fenwick {
    pub(crate) fn new(n: usize) -> Self {
        Fenwick {
            tree: vec![0; n + 1],
        }
    }

    fn clear(&mut self) {
        self.tree.iter_mut().for_each(|x| *x = 0);
    }

    pub(crate) fn add(&mut self, i: usize, delta: u64) {
        let mut i = i + 1;
        while i < self.tree.len() {
            self.tree[i] += delta;
            i += i & i.wrapping_neg();
        }
    }

    /// Sum over `0..i`.
    pub(crate) fn prefix(&self, i: usize) -> u64 {
        let mut i = i;
        let mut s = 0;
        while i > 0 {
            s += self.tree[i];
            i &= i - 1;
        }
        s
    }

    /// Sum over `a..b`; empty when `a >= b`.
    fn range(&self, a: usize, b: usize) -> u64 {
        if a >= b {
            0
        } else {
            self.prefix(b) - self.prefix(a)
        }
    }
}

pub(crate) fn count_inversions(values: &[usize]) -> u64 {
    let mut fw = Fenwick::new(values.len());
    let mut inv = 0;
    for (j, &v) in values.iter().enumerate() {
        inv += j as u64 - fw.prefix(v + 1);
        fw.add(v, 1);
    }
    inv
}

/// Number of occurrences of `pattern` in `text` (both 0-based one-line
/// values), or `None` when the pattern is longer than four.
pub fn count_occurrences_small(pattern: &[usize], text: &[usize]) -> Option<u64> {
    let n = text.len() as u64;
    let k = pattern.len();
    if k as u64 > n {
        return if k <= 4 { Some(0) } else { None };
    }
    match k {
        0 => Some(1),
        1 => Some(n),
        2 => {
            let inv = count_inversions(text);
            Some(if pattern[0] > pattern[1] {
                inv
            } else {
                n * (n - 1) / 2 - inv
            })
        }
        3 => Some(count3(pattern, text)),
        4 => Some(count4(pattern, text)),
        _ => None,
    }
}

/// `row[x]` = number of already-seen values below `x`.
fn bump_row(row: &mut [u64], v: usize) {
    for r in &mut row[v + 1..] {
        *r += 1;
    }
}

fn count3(t: &[usize], s: &[usize]) -> u64 {
    let n = s.len();
    let mut row = vec![0u64; n + 1];
    let mut total = 0;
    let a_below = t[0] < t[1];
    let c_below = t[2] < t[1];
    for p in 0..n {
        let v = s[p];
        let range = |below: bool| if below { (0, v) } else { (v + 1, n) };
        let (ax0, ax1) = range(a_below);
        let (cx0, cx1) = range(c_below);
        if a_below != c_below {
            let a = row[ax1] - row[ax0];
            let c = (cx1 - cx0) as u64 - (row[cx1] - row[cx0]);
            total += a * c;
        } else {
            let (x0, x1) = (ax0, ax1);
            for &w in &s[p + 1..] {
                if w >= x0 && w < x1 {
                    total += if t[0] < t[2] {
                        row[w] - row[x0]
                    } else {
                        row[x1] - row[w + 1]
                    };
                }
            }
        }
        bump_row(&mut row, v);
    }
    total
}

fn count4(t: &[usize], s: &[usize]) -> u64 {
    let n = s.len();
    let mut row = vec![0u64; n + 1];
    let mut cnt = Fenwick::new(n);
    let mut wsum = Fenwick::new(n);
    let mid_up = t[1] < t[2];
    // region of an outer pattern entry relative to the two middle entries
    let region = |x: usize| (x > t[1]) as usize + (x > t[2]) as usize;
    let (ra, rd) = (region(t[0]), region(t[3]));
    let mut total = 0u64;
    for p in 0..n {
        cnt.clear();
        wsum.clear();
        let vp = s[p];
        for q in (p + 1..n).rev() {
            let vq = s[q];
            if (vp < vq) == mid_up {
                let (lo, hi) = if vp < vq { (vp, vq) } else { (vq, vp) };
                let bounds = |r: usize| match r {
                    0 => (0, lo),
                    1 => (lo + 1, hi),
                    _ => (hi + 1, n),
                };
                let (ax0, ax1) = bounds(ra);
                if ra != rd {
                    let (dx0, dx1) = bounds(rd);
                    let a = row[ax1] - row[ax0];
                    if a > 0 {
                        total += a * cnt.range(dx0, dx1);
                    }
                } else {
                    let c = cnt.range(ax0, ax1);
                    if c > 0 {
                        let w = wsum.range(ax0, ax1);
                        total += if t[0] < t[3] {
                            w - row[ax0] * c
                        } else {
                            row[ax1] * c - w
                        };
                    }
                }
            }
            cnt.add(vq, 1);
            wsum.add(vq, row[vq]);
        }
        bump_row(&mut row, vp);
    }
    total
}
