use std::collections::VecDeque;

/// A FIFO of bits with a fixed capacity and an incrementally maintained count
/// of ones. Pushing at capacity evicts the oldest bit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundedBitQueue {
    capacity: usize,
    bits: VecDeque<bool>,
    ones: usize,
}

impl BoundedBitQueue {
    pub fn new(capacity: usize) -> Self {
        assert!(capacity > 0, "queue capacity must be positive");
        Self {
            capacity,
            bits: VecDeque::new(),
            ones: 0,
        }
    }

    pub fn push(&mut self, bit: bool) {
        if self.bits.len() == self.capacity {
            if let Some(true) = self.bits.pop_front() {
                self.ones -= 1;
            }
        }
        self.bits.push_back(bit);
        if bit {
            self.ones += 1;
        }
    }

    pub fn sum(&self) -> usize {
        self.ones
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn reset(&mut self) {
        self.bits.clear();
        self.ones = 0;
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        self.bits.iter().copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn evicts_oldest_at_capacity() {
        let mut q = BoundedBitQueue::new(3);
        for b in [true, true, false] {
            q.push(b);
        }
        assert_eq!(q.sum(), 2);
        q.push(false);
        assert_eq!(q.sum(), 1);
        assert_eq!(q.iter().collect::<Vec<_>>(), vec![true, false, false]);
        q.reset();
        assert!(q.is_empty());
        assert_eq!(q.sum(), 0);
    }

    #[derive(Debug, Clone)]
    enum Op {
        Push(bool),
        Reset,
    }

    fn op() -> impl Strategy<Value = Op> {
        prop_oneof![
            20 => any::<bool>().prop_map(Op::Push),
            1 => Just(Op::Reset),
        ]
    }

    proptest! {
        #[test]
        fn running_sum_matches_recount(cap in 1usize..40, ops in prop::collection::vec(op(), 0..400)) {
            let mut q = BoundedBitQueue::new(cap);
            // Naive oracle: an unbounded Vec truncated to its last `cap` items.
            let mut shadow: Vec<bool> = Vec::new();
            for o in ops {
                match o {
                    Op::Push(b) => { q.push(b); shadow.push(b); }
                    Op::Reset => { q.reset(); shadow.clear(); }
                }
                let tail = &shadow[shadow.len().saturating_sub(cap)..];
                prop_assert!(q.len() <= cap);
                prop_assert_eq!(q.len(), tail.len());
                prop_assert_eq!(q.sum(), tail.iter().filter(|&&b| b).count());
                prop_assert_eq!(q.sum(), q.iter().filter(|&b| b).count());
            }
        }
    }
}
