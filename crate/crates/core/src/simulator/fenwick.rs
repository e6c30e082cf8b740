/// Binary indexed tree over non-negative integer weights.
#[derive(Debug, Clone, Default)]
pub(crate) struct Fenwick {
    tree: Vec<u64>,
    top: usize,
}

impl Fenwick {
    pub(crate) fn with_capacity(len: usize) -> Self {
        let mut f = Self::default();
        f.reset(len);
        f
    }

    /// Clears all weights and resizes to `len` slots.
    pub(crate) fn reset(&mut self, len: usize) {
        self.tree.clear();
        self.tree.resize(len + 1, 0);
        self.top = if len == 0 {
            0
        } else {
            1 << (usize::BITS - 1 - len.leading_zeros())
        };
    }

    pub(crate) fn len(&self) -> usize {
        self.tree.len().saturating_sub(1)
    }

    pub(crate) fn add(&mut self, slot: usize, delta: i64) {
        let mut i = slot + 1;
        while i < self.tree.len() {
            self.tree[i] = self.tree[i].wrapping_add_signed(delta);
            i += i & i.wrapping_neg();
        }
    }

    #[cfg(test)]
    pub(crate) fn prefix(&self, slots: usize) -> u64 {
        let mut i = slots;
        let mut s = 0;
        while i > 0 {
            s += self.tree[i];
            i -= i & i.wrapping_neg();
        }
        s
    }

    /// Finds the slot whose cumulative range contains `target` and returns it
    /// together with the residual offset inside that slot's weight.
    pub(crate) fn locate(&self, mut target: u64) -> (usize, u64) {
        let mut pos = 0;
        let mut step = self.top;
        while step > 0 {
            let next = pos + step;
            if next < self.tree.len() && self.tree[next] <= target {
                target -= self.tree[next];
                pos = next;
            }
            step >>= 1;
        }
        (pos, target)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn locate_matches_linear_scan() {
        let weights = [3u64, 0, 5, 1, 0, 0, 7, 2, 4];
        let mut f = Fenwick::with_capacity(weights.len());
        for (i, &w) in weights.iter().enumerate() {
            f.add(i, w as i64);
        }
        let total: u64 = weights.iter().sum();
        assert_eq!(f.prefix(weights.len()), total);
        for t in 0..total {
            let mut acc = 0;
            let mut expect = (0, 0);
            for (i, &w) in weights.iter().enumerate() {
                if t < acc + w {
                    expect = (i, t - acc);
                    break;
                }
                acc += w;
            }
            assert_eq!(f.locate(t), expect, "target {t}");
        }
    }
}
