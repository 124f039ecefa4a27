//! Positional sequence backed by a size-augmented AVL tree.
//!
//! Items are addressed by their zero-based position. `insert` and `get` run
//! in `O(log n)`. Every inserted item also gets a [`Handle`] whose current
//! position can be recovered with [`PosSequence::position`] in `O(log n)`;
//! the sorter uses this to locate the partner of the element it inserts next.
//!
//! The sequence never compares items.

use std::fmt;

use crate::{Error, Result};

const NIL: u32 = u32::MAX;

/// Stable reference to an item, valid for the lifetime of the sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Handle(u32);

#[derive(Clone)]
struct Node<T> {
    item: T,
    left: u32,
    right: u32,
    parent: u32,
    size: u32,
    height: u8,
}

#[derive(Clone)]
pub struct PosSequence<T> {
    nodes: Vec<Node<T>>,
    root: u32,
}

impl<T> Default for PosSequence<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: fmt::Debug> fmt::Debug for PosSequence<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.iter()).finish()
    }
}

impl<T> PosSequence<T> {
    pub fn new() -> Self {
        PosSequence {
            nodes: Vec::new(),
            root: NIL,
        }
    }

    pub fn with_capacity(capacity: usize) -> Self {
        PosSequence {
            nodes: Vec::with_capacity(capacity),
            root: NIL,
        }
    }

    /// Builds a perfectly balanced sequence. The handle of the item at
    /// position `i` is `Handle(i)`, see [`PosSequence::handle_at_build`].
    pub fn from_vec(items: Vec<T>) -> Self {
        Self::from_vec_with_capacity(items, 0)
    }

    /// Like [`from_vec`](Self::from_vec) but reserves room for `extra`
    /// later insertions.
    pub fn from_vec_with_capacity(items: Vec<T>, extra: usize) -> Self {
        assert!(items.len() < NIL as usize, "sequence too long");
        let mut nodes = Vec::with_capacity(items.len() + extra);
        nodes.extend(items.into_iter().map(|item| Node {
            item,
            left: NIL,
            right: NIL,
            parent: NIL,
            size: 1,
            height: 1,
        }));
        let mut seq = PosSequence { nodes, root: NIL };
        let n = seq.nodes.len() as u32;
        seq.root = seq.build(0, n, NIL);
        seq
    }

    /// Handle of the item placed at position `index` by
    /// [`from_vec`](Self::from_vec).
    pub fn handle_at_build(index: usize) -> Handle {
        Handle(index as u32)
    }

    fn build(&mut self, lo: u32, hi: u32, parent: u32) -> u32 {
        if lo >= hi {
            return NIL;
        }
        let mid = lo + (hi - lo) / 2;
        let left = self.build(lo, mid, mid);
        let right = self.build(mid + 1, hi, mid);
        let node = &mut self.nodes[mid as usize];
        node.left = left;
        node.right = right;
        node.parent = parent;
        self.update(mid);
        mid
    }

    pub fn len(&self) -> usize {
        self.size(self.root) as usize
    }

    pub fn is_empty(&self) -> bool {
        self.root == NIL
    }

    /// Height of the underlying tree (0 for the empty sequence).
    pub fn height(&self) -> usize {
        self.h(self.root) as usize
    }

    /// Inserts `item` so that it occupies `pos`; later items shift right.
    pub fn insert(&mut self, pos: usize, item: T) -> Result<Handle> {
        let len = self.len();
        if pos > len {
            return Err(Error::Range { pos, len });
        }
        assert!(self.nodes.len() < (NIL - 1) as usize, "sequence too long");
        let id = self.nodes.len() as u32;
        self.nodes.push(Node {
            item,
            left: NIL,
            right: NIL,
            parent: NIL,
            size: 1,
            height: 1,
        });
        if self.root == NIL {
            self.root = id;
            return Ok(Handle(id));
        }

        let mut cur = self.root;
        let mut rel = pos as u32;
        loop {
            let left = self.nodes[cur as usize].left;
            let left_size = self.size(left);
            if rel <= left_size {
                if left == NIL {
                    self.nodes[cur as usize].left = id;
                    break;
                }
                cur = left;
            } else {
                rel -= left_size + 1;
                let right = self.nodes[cur as usize].right;
                if right == NIL {
                    self.nodes[cur as usize].right = id;
                    break;
                }
                cur = right;
            }
        }
        self.nodes[id as usize].parent = cur;

        let mut node = cur;
        while node != NIL {
            self.update(node);
            node = self.rebalance(node);
            node = self.nodes[node as usize].parent;
        }
        Ok(Handle(id))
    }

    /// Appends `item` at the end.
    pub fn push(&mut self, item: T) -> Handle {
        let len = self.len();
        self.insert(len, item).expect("append position is always valid")
    }

    pub fn get(&self, pos: usize) -> Result<&T> {
        let len = self.len();
        if pos >= len {
            return Err(Error::Range { pos, len });
        }
        Ok(&self.nodes[self.locate(pos) as usize].item)
    }

    /// Unchecked variant of [`get`](Self::get) for hot loops.
    ///
    /// # Panics
    /// Panics if `pos >= len`.
    pub fn at(&self, pos: usize) -> &T {
        assert!(pos < self.len(), "position {pos} out of range");
        &self.nodes[self.locate(pos) as usize].item
    }

    fn locate(&self, pos: usize) -> u32 {
        let mut cur = self.root;
        let mut rel = pos as u32;
        loop {
            let node = &self.nodes[cur as usize];
            let left_size = self.size(node.left);
            if rel < left_size {
                cur = node.left;
            } else if rel == left_size {
                return cur;
            } else {
                rel -= left_size + 1;
                cur = node.right;
            }
        }
    }

    /// Current position of the item behind `handle`.
    pub fn position(&self, handle: Handle) -> usize {
        let mut cur = handle.0;
        let mut rank = self.size(self.nodes[cur as usize].left);
        loop {
            let parent = self.nodes[cur as usize].parent;
            if parent == NIL {
                break;
            }
            if self.nodes[parent as usize].right == cur {
                rank += self.size(self.nodes[parent as usize].left) + 1;
            }
            cur = parent;
        }
        rank as usize
    }

    pub fn item(&self, handle: Handle) -> &T {
        &self.nodes[handle.0 as usize].item
    }

    pub fn iter(&self) -> Iter<'_, T> {
        let mut iter = Iter {
            seq: self,
            stack: Vec::with_capacity(self.height()),
            remaining: self.len(),
        };
        iter.push_left(self.root);
        iter
    }

    pub fn to_vec(&self) -> Vec<T>
    where
        T: Clone,
    {
        self.iter().cloned().collect()
    }

    #[inline]
    fn size(&self, node: u32) -> u32 {
        if node == NIL {
            0
        } else {
            self.nodes[node as usize].size
        }
    }

    #[inline]
    fn h(&self, node: u32) -> u8 {
        if node == NIL {
            0
        } else {
            self.nodes[node as usize].height
        }
    }

    fn update(&mut self, node: u32) {
        let (l, r) = {
            let n = &self.nodes[node as usize];
            (n.left, n.right)
        };
        let size = 1 + self.size(l) + self.size(r);
        let height = 1 + self.h(l).max(self.h(r));
        let n = &mut self.nodes[node as usize];
        n.size = size;
        n.height = height;
    }

    fn replace_child(&mut self, parent: u32, old: u32, new: u32) {
        if parent == NIL {
            self.root = new;
        } else if self.nodes[parent as usize].left == old {
            self.nodes[parent as usize].left = new;
        } else {
            self.nodes[parent as usize].right = new;
        }
    }

    fn rotate_left(&mut self, x: u32) -> u32 {
        let y = self.nodes[x as usize].right;
        let inner = self.nodes[y as usize].left;
        let parent = self.nodes[x as usize].parent;

        self.nodes[x as usize].right = inner;
        if inner != NIL {
            self.nodes[inner as usize].parent = x;
        }
        self.nodes[y as usize].parent = parent;
        self.replace_child(parent, x, y);
        self.nodes[y as usize].left = x;
        self.nodes[x as usize].parent = y;
        self.update(x);
        self.update(y);
        y
    }

    fn rotate_right(&mut self, x: u32) -> u32 {
        let y = self.nodes[x as usize].left;
        let inner = self.nodes[y as usize].right;
        let parent = self.nodes[x as usize].parent;

        self.nodes[x as usize].left = inner;
        if inner != NIL {
            self.nodes[inner as usize].parent = x;
        }
        self.nodes[y as usize].parent = parent;
        self.replace_child(parent, x, y);
        self.nodes[y as usize].right = x;
        self.nodes[x as usize].parent = y;
        self.update(x);
        self.update(y);
        y
    }

    fn balance_factor(&self, node: u32) -> i32 {
        let n = &self.nodes[node as usize];
        self.h(n.left) as i32 - self.h(n.right) as i32
    }

    /// Restores the AVL condition at `node`, returning the subtree root.
    fn rebalance(&mut self, node: u32) -> u32 {
        let bf = self.balance_factor(node);
        if bf > 1 {
            let left = self.nodes[node as usize].left;
            if self.balance_factor(left) < 0 {
                self.rotate_left(left);
            }
            self.rotate_right(node)
        } else if bf < -1 {
            let right = self.nodes[node as usize].right;
            if self.balance_factor(right) > 0 {
                self.rotate_right(right);
            }
            self.rotate_left(node)
        } else {
            node
        }
    }
}

impl<T> FromIterator<T> for PosSequence<T> {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        Self::from_vec(iter.into_iter().collect())
    }
}

pub struct Iter<'a, T> {
    seq: &'a PosSequence<T>,
    stack: Vec<u32>,
    remaining: usize,
}

impl<T> Iter<'_, T> {
    fn push_left(&mut self, mut node: u32) {
        while node != NIL {
            self.stack.push(node);
            node = self.seq.nodes[node as usize].left;
        }
    }
}

impl<'a, T> Iterator for Iter<'a, T> {
    type Item = &'a T;

    fn next(&mut self) -> Option<&'a T> {
        let node = self.stack.pop()?;
        let right = self.seq.nodes[node as usize].right;
        self.push_left(right);
        self.remaining -= 1;
        Some(&self.seq.nodes[node as usize].item)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        (self.remaining, Some(self.remaining))
    }
}

impl<T> ExactSizeIterator for Iter<'_, T> {}

impl<'a, T> IntoIterator for &'a PosSequence<T> {
    type Item = &'a T;
    type IntoIter = Iter<'a, T>;

    fn into_iter(self) -> Iter<'a, T> {
        self.iter()
    }
}
