/// A forest of disjoint sets over `0..len`, with path compression and
/// union by size.
#[derive(Debug, Clone)]
pub struct DisjointSets {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl DisjointSets {
    pub fn new(len: usize) -> DisjointSets {
        DisjointSets {
            parent: (0..len).collect(),
            size: vec![1; len],
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn find(&mut self, i: usize) -> usize {
        let mut root = i;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = i;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    /// Merges the sets of `i` and `j`; returns false if they were already joined.
    pub fn union(&mut self, i: usize, j: usize) -> bool {
        let (mut a, mut b) = (self.find(i), self.find(j));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        true
    }

    /// Dense class labels: elements share a label iff they are joined. Labels
    /// are numbered by the smallest element of each class.
    pub fn labels(&mut self) -> (Vec<usize>, usize) {
        let mut label_of_root = vec![usize::MAX; self.len()];
        let mut labels = Vec::with_capacity(self.len());
        let mut next = 0;
        for i in 0..self.len() {
            let r = self.find(i);
            if label_of_root[r] == usize::MAX {
                label_of_root[r] = next;
                next += 1;
            }
            labels.push(label_of_root[r]);
        }
        (labels, next)
    }

    /// The classes as sorted vectors, ordered by smallest element.
    pub fn classes(&mut self) -> Vec<Vec<usize>> {
        let (labels, n) = self.labels();
        let mut out = vec![Vec::new(); n];
        for (i, l) in labels.into_iter().enumerate() {
            out[l].push(i);
        }
        out
    }
}
