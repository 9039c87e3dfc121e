//! Ordered set of visible viewpoints whose keys are never stored.
//!
//! A treap with parent links and subtree sizes. Insertion navigates with a
//! caller-supplied comparator (distances to the current sweep position);
//! removal goes through a per-viewpoint handle, so it needs no comparisons
//! at all. Expected O(log m) per operation.

const NIL: u32 = u32::MAX;

#[derive(Clone, Debug)]
struct Node {
    item: usize,
    prio: u64,
    left: u32,
    right: u32,
    parent: u32,
    size: u32,
}

#[derive(Clone, Debug)]
pub struct VisibleSet {
    nodes: Vec<Node>,
    free: Vec<u32>,
    root: u32,
    handle: Vec<u32>,
    rng: u64,
    ops: u64,
}

impl VisibleSet {
    /// An empty set able to hold items in `0..universe`.
    pub fn new(universe: usize) -> Self {
        Self {
            nodes: Vec::new(),
            free: Vec::new(),
            root: NIL,
            handle: vec![NIL; universe],
            rng: 0x9E37_79B9_7F4A_7C15,
            ops: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.size(self.root) as usize
    }

    pub fn is_empty(&self) -> bool {
        self.root == NIL
    }

    pub fn contains(&self, item: usize) -> bool {
        self.handle.get(item).is_some_and(|&h| h != NIL)
    }

    /// Number of structural operations (insertions and removals) so far.
    pub fn tree_ops(&self) -> u64 {
        self.ops
    }

    fn next_prio(&mut self) -> u64 {
        // xorshift64
        let mut x = self.rng;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.rng = x;
        x
    }

    fn size(&self, t: u32) -> u32 {
        if t == NIL {
            0
        } else {
            self.nodes[t as usize].size
        }
    }

    fn pull(&mut self, t: u32) {
        let (l, r) = (self.nodes[t as usize].left, self.nodes[t as usize].right);
        self.nodes[t as usize].size = 1 + self.size(l) + self.size(r);
        if l != NIL {
            self.nodes[l as usize].parent = t;
        }
        if r != NIL {
            self.nodes[r as usize].parent = t;
        }
    }

    /// Splits `t` into the prefix whose items satisfy `before` and the rest.
    fn split_by(&mut self, t: u32, before: &impl Fn(usize) -> bool) -> (u32, u32) {
        if t == NIL {
            return (NIL, NIL);
        }
        if before(self.nodes[t as usize].item) {
            let (a, b) = self.split_by(self.nodes[t as usize].right, before);
            self.nodes[t as usize].right = a;
            self.pull(t);
            (t, b)
        } else {
            let (a, b) = self.split_by(self.nodes[t as usize].left, before);
            self.nodes[t as usize].left = b;
            self.pull(t);
            (a, t)
        }
    }

    /// Splits `t` into its first `k` items and the rest.
    fn split_at(&mut self, t: u32, k: u32) -> (u32, u32) {
        if t == NIL {
            return (NIL, NIL);
        }
        let left_size = self.size(self.nodes[t as usize].left);
        if k <= left_size {
            let (a, b) = self.split_at(self.nodes[t as usize].left, k);
            self.nodes[t as usize].left = b;
            self.pull(t);
            (a, t)
        } else {
            let (a, b) = self.split_at(self.nodes[t as usize].right, k - left_size - 1);
            self.nodes[t as usize].right = a;
            self.pull(t);
            (t, b)
        }
    }

    fn merge(&mut self, a: u32, b: u32) -> u32 {
        if a == NIL {
            return b;
        }
        if b == NIL {
            return a;
        }
        if self.nodes[a as usize].prio > self.nodes[b as usize].prio {
            let r = self.merge(self.nodes[a as usize].right, b);
            self.nodes[a as usize].right = r;
            self.pull(a);
            a
        } else {
            let l = self.merge(a, self.nodes[b as usize].left);
            self.nodes[b as usize].left = l;
            self.pull(b);
            b
        }
    }

    fn set_root(&mut self, t: u32) {
        self.root = t;
        if t != NIL {
            self.nodes[t as usize].parent = NIL;
        }
    }

    /// Inserts `item` after every element `x` with `less(x, item)`, returning
    /// its rank. `less` must be consistent with the current in-order sequence.
    ///
    /// Panics if `item` is already present.
    pub fn insert(&mut self, item: usize, less: impl Fn(usize, usize) -> bool) -> usize {
        assert!(!self.contains(item), "viewpoint {item} inserted twice");
        self.ops += 1;
        let prio = self.next_prio();
        let node = Node {
            item,
            prio,
            left: NIL,
            right: NIL,
            parent: NIL,
            size: 1,
        };
        let id = match self.free.pop() {
            Some(id) => {
                self.nodes[id as usize] = node;
                id
            }
            None => {
                self.nodes.push(node);
                (self.nodes.len() - 1) as u32
            }
        };
        self.handle[item] = id;
        let root = self.root;
        let (l, r) = self.split_by(root, &|x| less(x, item));
        let rank = self.size(l) as usize;
        let lm = self.merge(l, id);
        let t = self.merge(lm, r);
        self.set_root(t);
        rank
    }

    /// Position of `item` in the order, if present.
    pub fn rank(&self, item: usize) -> Option<usize> {
        let mut t = *self.handle.get(item)?;
        if t == NIL {
            return None;
        }
        let mut r = self.size(self.nodes[t as usize].left);
        while self.nodes[t as usize].parent != NIL {
            let p = self.nodes[t as usize].parent;
            if self.nodes[p as usize].right == t {
                r += self.size(self.nodes[p as usize].left) + 1;
            }
            t = p;
        }
        Some(r as usize)
    }

    /// Removes `item`, returning the rank it had, or `None` if absent.
    pub fn remove(&mut self, item: usize) -> Option<usize> {
        let rank = self.rank(item)?;
        self.ops += 1;
        let id = self.handle[item];
        let root = self.root;
        let (l, rest) = self.split_at(root, rank as u32);
        let (mid, r) = self.split_at(rest, 1);
        debug_assert_eq!(mid, id);
        let t = self.merge(l, r);
        self.set_root(t);
        self.handle[item] = NIL;
        self.free.push(id);
        Some(rank)
    }

    /// The item of rank `k`.
    pub fn select(&self, k: usize) -> Option<usize> {
        let mut k = k as u32;
        let mut t = self.root;
        while t != NIL {
            let ls = self.size(self.nodes[t as usize].left);
            match k.cmp(&ls) {
                std::cmp::Ordering::Less => t = self.nodes[t as usize].left,
                std::cmp::Ordering::Equal => return Some(self.nodes[t as usize].item),
                std::cmp::Ordering::Greater => {
                    k -= ls + 1;
                    t = self.nodes[t as usize].right;
                }
            }
        }
        None
    }

    /// The item with the smallest key.
    pub fn min(&self) -> Option<usize> {
        self.select(0)
    }

    /// Items in order.
    pub fn to_vec(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.len());
        let mut stack = Vec::new();
        let mut t = self.root;
        while t != NIL || !stack.is_empty() {
            while t != NIL {
                stack.push(t);
                t = self.nodes[t as usize].left;
            }
            let top = stack.pop().unwrap();
            out.push(self.nodes[top as usize].item);
            t = self.nodes[top as usize].right;
        }
        out
    }
}
