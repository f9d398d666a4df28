use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};

/// Vertex label. Vertices are small integers chosen by the caller.
pub type Vertex = u32;

/// Index of an arrow in its quiver's fixed arrow order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ArrowId(pub u32);

impl ArrowId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Arrow {
    pub name: String,
    pub tail: Vertex,
    pub head: Vertex,
}

impl Arrow {
    pub fn new(name: impl Into<String>, tail: Vertex, head: Vertex) -> Self {
        Arrow {
            name: name.into(),
            tail,
            head,
        }
    }
}

/// A finite quiver with an ordered vertex list and an ordered arrow list.
///
/// The arrow order is significant: it is the order used for paths,
/// canonical rotations and every printed output.
#[derive(Clone)]
pub struct Quiver {
    vertices: Vec<Vertex>,
    arrows: Vec<Arrow>,
    by_name: HashMap<String, ArrowId>,
}

impl PartialEq for Quiver {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.arrows == other.arrows
    }
}

impl Eq for Quiver {}

impl fmt::Debug for Quiver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Quiver")
            .field("vertices", &self.vertices)
            .field("arrows", &self.arrows)
            .finish()
    }
}

/// Checks that an arrow name survives the text format: no whitespace or
/// reserved punctuation, balanced brackets, and `.` only inside brackets.
pub fn validate_arrow_name(name: &str) -> Result<()> {
    let bad = |why: &str| Error::InvalidQuiver(format!("arrow name `{name}`: {why}"));
    if name.is_empty() {
        return Err(bad("empty"));
    }
    if name.starts_with('-') || name.starts_with('+') {
        return Err(bad("leading sign"));
    }
    let mut depth = 0i32;
    for ch in name.chars() {
        match ch {
            c if c.is_whitespace() => return Err(bad("whitespace")),
            '*' | ':' | '{' | '}' | ',' | '"' | '#' => return Err(bad("reserved character")),
            '[' => depth += 1,
            ']' => {
                depth -= 1;
                if depth < 0 {
                    return Err(bad("unbalanced brackets"));
                }
            }
            '.' if depth == 0 => return Err(bad("`.` outside brackets")),
            _ => {}
        }
    }
    if depth != 0 {
        return Err(bad("unbalanced brackets"));
    }
    Ok(())
}

impl Quiver {
    pub fn new(vertices: Vec<Vertex>, arrows: Vec<Arrow>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for v in &vertices {
            if !seen.insert(*v) {
                return Err(Error::InvalidQuiver(format!("duplicate vertex {v}")));
            }
        }
        let mut by_name = HashMap::with_capacity(arrows.len());
        for (i, a) in arrows.iter().enumerate() {
            validate_arrow_name(&a.name)?;
            for v in [a.tail, a.head] {
                if !seen.contains(&v) {
                    return Err(Error::InvalidQuiver(format!(
                        "arrow `{}` references unknown vertex {v}",
                        a.name
                    )));
                }
            }
            if by_name.insert(a.name.clone(), ArrowId(i as u32)).is_some() {
                return Err(Error::InvalidQuiver(format!(
                    "duplicate arrow name `{}`",
                    a.name
                )));
            }
        }
        Ok(Quiver {
            vertices,
            arrows,
            by_name,
        })
    }

    /// Convenience constructor from `(name, tail, head)` triples.
    pub fn from_triples(vertices: &[Vertex], arrows: &[(&str, Vertex, Vertex)]) -> Result<Self> {
        Quiver::new(
            vertices.to_vec(),
            arrows
                .iter()
                .map(|(n, t, h)| Arrow::new(*n, *t, *h))
                .collect(),
        )
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn num_arrows(&self) -> usize {
        self.arrows.len()
    }

    pub fn arrow_ids(&self) -> impl Iterator<Item = ArrowId> + '_ {
        (0..self.arrows.len() as u32).map(ArrowId)
    }

    pub fn arrow(&self, id: ArrowId) -> &Arrow {
        &self.arrows[id.index()]
    }

    pub fn name(&self, id: ArrowId) -> &str {
        &self.arrows[id.index()].name
    }

    pub fn head(&self, id: ArrowId) -> Vertex {
        self.arrows[id.index()].head
    }

    pub fn tail(&self, id: ArrowId) -> Vertex {
        self.arrows[id.index()].tail
    }

    pub fn arrow_id(&self, name: &str) -> Result<ArrowId> {
        self.by_name
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownArrow(name.to_string()))
    }

    pub fn find_arrow(&self, name: &str) -> Option<ArrowId> {
        self.by_name.get(name).copied()
    }

    pub fn has_vertex(&self, v: Vertex) -> bool {
        self.vertices.contains(&v)
    }

    pub fn vertex_index(&self, v: Vertex) -> Result<usize> {
        self.vertices
            .iter()
            .position(|&w| w == v)
            .ok_or(Error::UnknownVertex(v))
    }

    /// Arrows `tail -> head`, in arrow order.
    pub fn arrows_between(&self, tail: Vertex, head: Vertex) -> Vec<ArrowId> {
        self.arrow_ids()
            .filter(|&a| self.tail(a) == tail && self.head(a) == head)
            .collect()
    }

    /// Arrows ending at `k`.
    pub fn incoming(&self, k: Vertex) -> Vec<ArrowId> {
        self.arrow_ids().filter(|&a| self.head(a) == k).collect()
    }

    /// Arrows starting at `k`.
    pub fn outgoing(&self, k: Vertex) -> Vec<ArrowId> {
        self.arrow_ids().filter(|&a| self.tail(a) == k).collect()
    }

    pub fn loops(&self) -> Vec<ArrowId> {
        self.arrow_ids()
            .filter(|&a| self.head(a) == self.tail(a))
            .collect()
    }

    pub fn ensure_loop_free(&self) -> Result<()> {
        match self.loops().first() {
            Some(&a) => Err(Error::Loop(self.name(a).to_string())),
            None => Ok(()),
        }
    }

    /// `count[i][j]` = number of arrows from vertex `j` to vertex `i`
    /// (indices into the vertex list), i.e. the dimension of `e_i A e_j`.
    pub fn arrow_counts(&self) -> Vec<Vec<i64>> {
        let n = self.vertices.len();
        let mut count = vec![vec![0i64; n]; n];
        for a in &self.arrows {
            let i = self.vertex_index(a.head).expect("validated");
            let j = self.vertex_index(a.tail).expect("validated");
            count[i][j] += 1;
        }
        count
    }

    /// Unordered vertex pairs joined by arrows in both directions.
    pub fn two_cycles(&self) -> Vec<(Vertex, Vertex)> {
        let count = self.arrow_counts();
        let n = self.vertices.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if count[i][j] > 0 && count[j][i] > 0 {
                    out.push((self.vertices[i], self.vertices[j]));
                }
            }
        }
        out
    }

    pub fn is_two_acyclic(&self) -> bool {
        self.two_cycles().is_empty()
    }

    pub fn on_two_cycle(&self, k: Vertex) -> bool {
        self.two_cycles().iter().any(|&(i, j)| i == k || j == k)
    }

    /// True when there is no oriented cycle at all.
    pub fn is_acyclic(&self) -> bool {
        // Kahn's algorithm on vertex indices.
        let n = self.vertices.len();
        let mut indeg = vec![0usize; n];
        for a in &self.arrows {
            indeg[self.vertex_index(a.head).unwrap()] += 1;
        }
        let mut stack: Vec<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
        let mut seen = 0;
        while let Some(i) = stack.pop() {
            seen += 1;
            let v = self.vertices[i];
            for a in &self.arrows {
                if a.tail == v {
                    let h = self.vertex_index(a.head).unwrap();
                    indeg[h] -= 1;
                    if indeg[h] == 0 {
                        stack.push(h);
                    }
                }
            }
        }
        seen == n
    }

    /// Full subquiver on `keep`; arrows keep their relative order.
    /// Returns the subquiver and, for each new arrow, its old id.
    pub fn full_subquiver(&self, keep: &[Vertex]) -> Result<(Quiver, Vec<ArrowId>)> {
        for v in keep {
            if !self.has_vertex(*v) {
                return Err(Error::UnknownVertex(*v));
            }
        }
        let vertices: Vec<Vertex> = self
            .vertices
            .iter()
            .copied()
            .filter(|v| keep.contains(v))
            .collect();
        let mut arrows = Vec::new();
        let mut old = Vec::new();
        for id in self.arrow_ids() {
            let a = self.arrow(id);
            if keep.contains(&a.tail) && keep.contains(&a.head) {
                arrows.push(a.clone());
                old.push(id);
            }
        }
        Ok((Quiver::new(vertices, arrows)?, old))
    }

    /// Renames vertices by a bijection; the vertex list comes out sorted and
    /// arrows keep their names and order.
    pub fn relabel_vertices(&self, map: impl Fn(Vertex) -> Vertex) -> Result<Quiver> {
        let mut vertices: Vec<Vertex> = self.vertices.iter().map(|&v| map(v)).collect();
        vertices.sort_unstable();
        let arrows = self
            .arrows
            .iter()
            .map(|a| Arrow::new(a.name.clone(), map(a.tail), map(a.head)))
            .collect();
        Quiver::new(vertices, arrows)
    }
}
