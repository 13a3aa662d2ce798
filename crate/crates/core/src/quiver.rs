//! The triangular quiver on vertices `v_ij` (`1 <= j <= i <= n`) with arrows
//! pointing up and left, its diagonals, boxes and directed paths.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum ArrowKind {
    /// `v_{i+1,j} -> v_ij`
    Vertical,
    /// `v_{i,j+1} -> v_ij`
    Horizontal,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Arrow {
    pub head: usize,
    pub tail: usize,
    pub kind: ArrowKind,
    pub label: String,
}

/// A unit square `(a1, a2, a3, a4)` with `z_{a1} z_{a2} = z_{a3} z_{a4}`:
/// `a1: v_{i+1,j+1} -> v_{i,j+1}`, `a2: v_{i,j+1} -> v_ij`,
/// `a3: v_{i+1,j+1} -> v_{i+1,j}`, `a4: v_{i+1,j} -> v_ij`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct QuiverBox {
    pub arrows: [usize; 4],
}

#[derive(Clone, Debug)]
pub struct Quiver {
    n: usize,
    vertices: Vec<(usize, usize)>,
    index: HashMap<(usize, usize), usize>,
    arrows: Vec<Arrow>,
    incoming: Vec<Vec<usize>>,
    outgoing: Vec<Vec<usize>>,
    boxes: Vec<QuiverBox>,
}

/// A directed path, stored as its arrow sequence in travel order.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct QuiverPath {
    pub arrows: Vec<usize>,
    pub vertices: Vec<usize>,
}

impl QuiverPath {
    pub fn start(&self) -> usize {
        self.vertices[0]
    }

    pub fn end(&self) -> usize {
        *self.vertices.last().unwrap()
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    /// Interior vertices, excluding both endpoints.
    pub fn interior(&self) -> &[usize] {
        &self.vertices[1..self.vertices.len() - 1]
    }
}

fn arrow_label(k: usize) -> String {
    if k < 26 {
        ((b'a' + k as u8) as char).to_string()
    } else {
        format!("arrow{k}")
    }
}

impl Quiver {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "quiver needs n >= 1");
        let mut vertices = Vec::new();
        let mut index = HashMap::new();
        for i in 1..=n {
            for j in 1..=i {
                index.insert((i, j), vertices.len());
                vertices.push((i, j));
            }
        }
        let mut arrows = Vec::new();
        for (h, &(i, j)) in vertices.iter().enumerate() {
            if i < n {
                arrows.push((h, index[&(i + 1, j)], ArrowKind::Vertical));
            }
            if j < i {
                arrows.push((h, index[&(i, j + 1)], ArrowKind::Horizontal));
            }
        }
        let arrows: Vec<Arrow> = arrows
            .into_iter()
            .enumerate()
            .map(|(k, (head, tail, kind))| Arrow { head, tail, kind, label: arrow_label(k) })
            .collect();
        let mut incoming = vec![Vec::new(); vertices.len()];
        let mut outgoing = vec![Vec::new(); vertices.len()];
        for (k, a) in arrows.iter().enumerate() {
            incoming[a.head].push(k);
            outgoing[a.tail].push(k);
        }
        let mut q = Quiver { n, vertices, index, arrows, incoming, outgoing, boxes: Vec::new() };
        let mut boxes = Vec::new();
        for i in 2..n {
            for j in 1..i {
                let a1 = q.arrow_between((i + 1, j + 1), (i, j + 1)).unwrap();
                let a2 = q.arrow_between((i, j + 1), (i, j)).unwrap();
                let a3 = q.arrow_between((i + 1, j + 1), (i + 1, j)).unwrap();
                let a4 = q.arrow_between((i + 1, j), (i, j)).unwrap();
                boxes.push(QuiverBox { arrows: [a1, a2, a3, a4] });
            }
        }
        q.boxes = boxes;
        q
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_arrows(&self) -> usize {
        self.arrows.len()
    }

    /// `(row, col)` of a vertex, 1-based.
    pub fn position(&self, v: usize) -> (usize, usize) {
        self.vertices[v]
    }

    pub fn vertex(&self, i: usize, j: usize) -> usize {
        self.index[&(i, j)]
    }

    pub fn vertex_name(&self, v: usize) -> String {
        let (i, j) = self.vertices[v];
        if self.n < 10 {
            format!("v{i}{j}")
        } else {
            format!("v{i}_{j}")
        }
    }

    pub fn is_star(&self, v: usize) -> bool {
        let (i, j) = self.vertices[v];
        i == j
    }

    pub fn stars(&self) -> Vec<usize> {
        (1..=self.n).map(|i| self.vertex(i, i)).collect()
    }

    pub fn bullets(&self) -> Vec<usize> {
        (0..self.vertices.len()).filter(|&v| !self.is_star(v)).collect()
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow(&self, a: usize) -> &Arrow {
        &self.arrows[a]
    }

    pub fn arrow_by_label(&self, label: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.label == label)
    }

    pub fn incoming(&self, v: usize) -> &[usize] {
        &self.incoming[v]
    }

    pub fn outgoing(&self, v: usize) -> &[usize] {
        &self.outgoing[v]
    }

    pub fn arrow_between(&self, tail: (usize, usize), head: (usize, usize)) -> Option<usize> {
        let t = *self.index.get(&tail)?;
        let h = *self.index.get(&head)?;
        self.outgoing[t].iter().copied().find(|&a| self.arrows[a].head == h)
    }

    /// Vertical arrow with head `v_ij`.
    pub fn vertical_into(&self, i: usize, j: usize) -> Option<usize> {
        self.arrow_between((i + 1, j), (i, j))
    }

    /// Horizontal arrow with head `v_ij`.
    pub fn horizontal_into(&self, i: usize, j: usize) -> Option<usize> {
        self.arrow_between((i, j + 1), (i, j))
    }

    pub fn boxes(&self) -> &[QuiverBox] {
        &self.boxes
    }

    /// `D_i = {v_{i,1}, v_{i+1,2}, ..., v_{n,n-i+1}}` for `1 <= i <= n`.
    pub fn diagonal(&self, i: usize) -> Vec<usize> {
        (1..=self.n + 1 - i).map(|k| self.vertex(i + k - 1, k)).collect()
    }

    /// All directed paths of length >= 1 whose endpoints lie in `allowed`,
    /// whose interior avoids `allowed`, and which use no arrow of `forbidden`.
    pub fn enumerate_paths(&self, allowed: &BTreeSet<usize>, forbidden: &BTreeSet<usize>) -> Vec<QuiverPath> {
        let mut out = Vec::new();
        for &s in allowed {
            let mut arrows = Vec::new();
            let mut verts = vec![s];
            self.dfs(s, allowed, forbidden, &mut arrows, &mut verts, &mut out);
        }
        out
    }

    fn dfs(
        &self,
        v: usize,
        allowed: &BTreeSet<usize>,
        forbidden: &BTreeSet<usize>,
        arrows: &mut Vec<usize>,
        verts: &mut Vec<usize>,
        out: &mut Vec<QuiverPath>,
    ) {
        for &a in &self.outgoing[v] {
            if forbidden.contains(&a) {
                continue;
            }
            let h = self.arrows[a].head;
            arrows.push(a);
            verts.push(h);
            if allowed.contains(&h) {
                out.push(QuiverPath { arrows: arrows.clone(), vertices: verts.clone() });
            } else {
                self.dfs(h, allowed, forbidden, arrows, verts, out);
            }
            arrows.pop();
            verts.pop();
        }
    }

    /// Graphviz rendering; `vertex_note` and `arrow_note` add optional annotations.
    pub fn to_dot(&self, vertex_note: &dyn Fn(usize) -> Option<String>, arrow_note: &dyn Fn(usize) -> Option<String>) -> String {
        let mut s = String::from("digraph quiver {\n  rankdir=TB;\n");
        for v in 0..self.vertices.len() {
            let (i, j) = self.vertices[v];
            let shape = if self.is_star(v) { "box" } else { "circle" };
            let label = match vertex_note(v) {
                Some(note) => format!("{}\\n{}", self.vertex_name(v), note),
                None => self.vertex_name(v),
            };
            let _ = writeln!(s, "  {} [shape={shape}, label=\"{label}\", pos=\"{j},{}!\"];", self.vertex_name(v), self.n + 1 - i);
        }
        for (k, a) in self.arrows.iter().enumerate() {
            let label = match arrow_note(k) {
                Some(note) => format!("{} = {}", a.label, note),
                None => a.label.clone(),
            };
            let _ = writeln!(s, "  {} -> {} [label=\"{label}\"];", self.vertex_name(a.tail), self.vertex_name(a.head));
        }
        s.push_str("}\n");
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        for (n, v, a, b) in [(2, 3, 2, 0), (3, 6, 6, 1), (4, 10, 12, 3), (5, 15, 20, 6)] {
            let q = Quiver::new(n);
            assert_eq!((q.num_vertices(), q.num_arrows(), q.boxes().len()), (v, a, b));
        }
    }

    #[test]
    fn n3_labels() {
        let q = Quiver::new(3);
        let name = |a: usize| {
            let ar = q.arrow(a);
            (ar.label.clone(), q.vertex_name(ar.tail), q.vertex_name(ar.head))
        };
        let got: Vec<_> = (0..6).map(name).collect();
        let want = [
            ("a", "v21", "v11"),
            ("b", "v31", "v21"),
            ("c", "v22", "v21"),
            ("d", "v32", "v22"),
            ("e", "v32", "v31"),
            ("f", "v33", "v32"),
        ];
        for (g, w) in got.iter().zip(want) {
            assert_eq!((g.0.as_str(), g.1.as_str(), g.2.as_str()), w);
        }
        let bx = q.boxes()[0].arrows;
        let l: Vec<&str> = bx.iter().map(|&a| q.arrow(a).label.as_str()).collect();
        assert_eq!(l, vec!["d", "c", "e", "b"]);
    }

    #[test]
    fn bullets_have_in_and_out() {
        for n in 2..=6 {
            let q = Quiver::new(n);
            for v in q.bullets() {
                assert!(!q.incoming(v).is_empty() && !q.outgoing(v).is_empty());
            }
        }
    }

    #[test]
    fn star_paths() {
        let q = Quiver::new(2);
        let stars: BTreeSet<usize> = q.stars().into_iter().collect();
        let paths = q.enumerate_paths(&stars, &BTreeSet::new());
        assert_eq!(paths.len(), 1);
        assert_eq!(paths[0].len(), 2);
        assert_eq!(paths[0].start(), q.vertex(2, 2));
        assert_eq!(paths[0].end(), q.vertex(1, 1));

        let q = Quiver::new(3);
        let stars: BTreeSet<usize> = q.stars().into_iter().collect();
        let paths = q.enumerate_paths(&stars, &BTreeSet::new());
        // v22 -> v21 -> v11, v33 -> v32 -> v22 and v33 -> v32 -> v31 -> v21 -> v11
        let mut lens: Vec<usize> = paths.iter().map(|p| p.len()).collect();
        lens.sort();
        assert_eq!(lens, vec![2, 2, 4]);
    }

    #[test]
    fn diagonals() {
        let q = Quiver::new(3);
        let names = |d: Vec<usize>| d.into_iter().map(|v| q.vertex_name(v)).collect::<Vec<_>>();
        assert_eq!(names(q.diagonal(1)), vec!["v11", "v22", "v33"]);
        assert_eq!(names(q.diagonal(2)), vec!["v21", "v32"]);
        assert_eq!(names(q.diagonal(3)), vec!["v31"]);
    }
}
