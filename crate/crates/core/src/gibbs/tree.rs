use std::ops::Range;

/// The rooted Cayley tree of order `k`, vertices numbered level by level:
/// the root is 0 and the successors of `v` are `k v + 1 ..= k v + k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CayleyTree {
    k: usize,
}

impl CayleyTree {
    pub fn new(k: usize) -> Self {
        assert!(k >= 1, "tree order must be at least 1");
        Self { k }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// `|W_l| = k^l`.
    pub fn level_size(&self, level: usize) -> usize {
        self.k.pow(level as u32)
    }

    /// Index of the first vertex of `W_l`.
    pub fn level_start(&self, level: usize) -> usize {
        if self.k == 1 {
            level
        } else {
            (self.level_size(level) - 1) / (self.k - 1)
        }
    }

    /// Vertex indices of `W_l`.
    pub fn level(&self, level: usize) -> Range<usize> {
        self.level_start(level)..self.level_start(level + 1)
    }

    /// `|V_n|`, root included.
    pub fn size(&self, n: usize) -> usize {
        self.level_start(n + 1)
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        (v > 0).then(|| (v - 1) / self.k)
    }

    /// `d(v, x^0)`.
    pub fn depth(&self, v: usize) -> usize {
        let mut d = 0;
        let mut cur = v;
        while let Some(p) = self.parent(cur) {
            cur = p;
            d += 1;
        }
        d
    }

    /// `S(v)`.
    pub fn successors(&self, v: usize) -> Range<usize> {
        self.k * v + 1..self.k * v + self.k + 1
    }

    /// Coordinates `(i_1, ..., i_n)` with `i_j` in `1..=k`; empty for the root.
    pub fn coords(&self, v: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut cur = v;
        while let Some(p) = self.parent(cur) {
            out.push(cur - self.k * p);
            cur = p;
        }
        out.reverse();
        out
    }

    pub fn index(&self, coords: &[usize]) -> usize {
        coords.iter().fold(0, |v, &i| self.k * v + i)
    }

    /// `g o x`, concatenation of coordinates.
    pub fn compose(&self, g: usize, x: usize) -> usize {
        let mut c = self.coords(g);
        c.extend(self.coords(x));
        self.index(&c)
    }

    /// Nearest-neighbour edges `<x, y>` of `V_n`, as (parent, child).
    pub fn edges(&self, n: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        (1..self.size(n)).map(|v| ((v - 1) / self.k, v))
    }

    /// Prolonged next-nearest pairs `>x, y<` of `V_n` (grandparent, vertex).
    pub fn prolonged_pairs(&self, n: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        (self.k + 1..self.size(n)).map(|v| ((((v - 1) / self.k) - 1) / self.k, v))
    }

    /// One-level next-nearest pairs of `V_n`: siblings.
    pub fn one_level_pairs(&self, n: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for x in 0..self.size(n.saturating_sub(1)) {
            if n == 0 {
                break;
            }
            let s = self.successors(x);
            for y in s.clone() {
                for z in y + 1..s.end {
                    out.push((y, z));
                }
            }
        }
        out
    }
}
