/// Fixed-capacity bitset over variable indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarSet {
    words: Vec<u64>,
}

impl VarSet {
    pub fn empty(capacity: usize) -> Self {
        VarSet {
            words: vec![0; capacity.div_ceil(64)],
        }
    }

    pub fn full(capacity: usize) -> Self {
        let mut s = VarSet::empty(capacity);
        for v in 0..capacity {
            s.insert(v);
        }
        s
    }

    pub fn singleton(capacity: usize, v: usize) -> Self {
        let mut s = VarSet::empty(capacity);
        s.insert(v);
        s
    }

    pub fn insert(&mut self, v: usize) {
        self.words[v / 64] |= 1 << (v % 64);
    }

    pub fn contains(&self, v: usize) -> bool {
        self.words[v / 64] >> (v % 64) & 1 == 1
    }

    pub fn union_with(&mut self, other: &VarSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn is_disjoint(&self, other: &VarSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Members in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let bit = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + bit)
            })
        })
    }

    /// Members of `self` missing from `other`.
    pub fn difference<'a>(&'a self, other: &'a VarSet) -> impl Iterator<Item = usize> + 'a {
        self.iter().filter(move |&v| !other.contains(v))
    }

    /// Smallest member shared with `other`.
    pub fn first_common(&self, other: &VarSet) -> Option<usize> {
        self.words
            .iter()
            .zip(&other.words)
            .enumerate()
            .find_map(|(i, (a, b))| {
                let w = a & b;
                (w != 0).then(|| i * 64 + w.trailing_zeros() as usize)
            })
    }
}
