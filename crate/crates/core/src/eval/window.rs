use std::collections::VecDeque;

/// Extremum over a window of indices that slides monotonically to the right.
///
/// Keeps a deque of candidate indices whose values are strictly decreasing
/// under `better`; each index is pushed and popped at most once, so a full
/// pass over `n` values with non-decreasing window bounds costs `O(n)`.
pub struct SlidingExtremum<'a, T, F> {
    values: &'a [T],
    better: F,
    candidates: VecDeque<usize>,
    next: usize,
}

impl<'a, T: Copy, F: Fn(&T, &T) -> bool> SlidingExtremum<'a, T, F> {
    /// `better(a, b)` returns true when `a` should be preferred over `b`.
    pub fn new(values: &'a [T], better: F) -> Self {
        Self {
            values,
            better,
            candidates: VecDeque::new(),
            next: 0,
        }
    }

    /// Best value among `values[lo..hi]`, or `None` for an empty window.
    ///
    /// Across successive calls `lo` and `hi` must be non-decreasing.
    pub fn query(&mut self, lo: usize, hi: usize) -> Option<T> {
        let hi = hi.min(self.values.len());
        while self.next < hi {
            let value = &self.values[self.next];
            while let Some(&back) = self.candidates.back() {
                if (self.better)(&self.values[back], value) {
                    break;
                }
                self.candidates.pop_back();
            }
            self.candidates.push_back(self.next);
            self.next += 1;
        }
        while let Some(&front) = self.candidates.front() {
            if front >= lo {
                break;
            }
            self.candidates.pop_front();
        }
        match self.candidates.front() {
            Some(&front) if front < hi => Some(self.values[front]),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sliding_max_matches_brute_force() {
        let values = [3, 1, 4, 1, 5, 9, 2, 6, 5, 3, 5];
        let windows = [(0, 3), (1, 3), (1, 5), (4, 4), (4, 8), (6, 11), (11, 11)];
        let mut max = SlidingExtremum::new(&values, |a: &i32, b: &i32| a > b);
        for (lo, hi) in windows {
            let expected = values[lo..hi].iter().copied().max();
            assert_eq!(max.query(lo, hi), expected, "window {lo}..{hi}");
        }
    }

    #[test]
    fn boolean_min_is_all() {
        let values = [true, true, false, true, true];
        let mut min = SlidingExtremum::new(&values, |a: &bool, b: &bool| !a & b);
        assert_eq!(min.query(0, 2), Some(true));
        assert_eq!(min.query(1, 3), Some(false));
        assert_eq!(min.query(3, 5), Some(true));
        assert_eq!(min.query(5, 5), None);
    }
}
