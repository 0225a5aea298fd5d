//! Short-term memory: a small recency list of numbers and operators whose
//! reuse costs nothing.

use std::collections::VecDeque;

use serde::Serialize;

/// Operator kinds that can sit in short-term memory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum OpTag {
    Copy,
    Increment(u64),
    Mirror,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum StmItem {
    Number(u64),
    Op(OpTag),
}

/// Bounded recency memory. The front holds the oldest item, which is the one
/// evicted when a new item arrives at capacity. Touching a resident item moves
/// it to the back.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StmState {
    capacity: usize,
    slots: VecDeque<StmItem>,
}

impl StmState {
    pub fn new(capacity: usize) -> Self {
        StmState { capacity, slots: VecDeque::with_capacity(capacity + 1) }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn contains(&self, item: &StmItem) -> bool {
        self.slots.contains(item)
    }

    pub fn touch(&mut self, item: StmItem) {
        if self.capacity == 0 {
            return;
        }
        if let Some(pos) = self.slots.iter().position(|s| *s == item) {
            self.slots.remove(pos);
        }
        self.slots.push_back(item);
        while self.slots.len() > self.capacity {
            self.slots.pop_front();
        }
    }

    pub fn clear(&mut self) {
        self.slots.clear();
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn items(&self) -> impl Iterator<Item = &StmItem> {
        self.slots.iter()
    }
}
