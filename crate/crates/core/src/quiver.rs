//! Finite quivers and their paths.
//!
//! Paths are stored in traversal order (first arrow applied first) and
//! rendered right-to-left, so the path "alpha then beta" prints as `β·α`.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ArrowId(pub usize);

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Arrow {
    pub name: String,
    pub source: VertexId,
    pub target: VertexId,
}

#[derive(Clone, Debug)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
    vertex_index: HashMap<String, VertexId>,
    arrow_index: HashMap<String, ArrowId>,
}

impl PartialEq for Quiver {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.arrows == other.arrows
    }
}

impl Eq for Quiver {}

impl Quiver {
    /// Builds a quiver from vertex names and `(name, source, target)` triples.
    pub fn new<V, A>(vertices: V, arrows: A) -> Result<Self>
    where
        V: IntoIterator,
        V::Item: Into<String>,
        A: IntoIterator<Item = (String, String, String)>,
    {
        let mut q = Quiver {
            vertices: Vec::new(),
            arrows: Vec::new(),
            vertex_index: HashMap::new(),
            arrow_index: HashMap::new(),
        };
        for v in vertices {
            q.add_vertex(v.into())?;
        }
        for (name, s, t) in arrows {
            q.add_arrow(name, &s, &t)?;
        }
        Ok(q)
    }

    /// Convenience constructor for literals.
    pub fn from_names(vertices: &[&str], arrows: &[(&str, &str, &str)]) -> Result<Self> {
        Quiver::new(
            vertices.iter().copied(),
            arrows.iter().map(|(a, s, t)| (a.to_string(), s.to_string(), t.to_string())),
        )
    }

    pub fn add_vertex(&mut self, name: String) -> Result<VertexId> {
        if name.is_empty() {
            return Err(Error::InvalidQuiver("empty vertex id".into()));
        }
        if self.vertex_index.contains_key(&name) {
            return Err(Error::Duplicate { kind: "vertex", name });
        }
        let id = VertexId(self.vertices.len());
        self.vertex_index.insert(name.clone(), id);
        self.vertices.push(name);
        Ok(id)
    }

    pub fn add_arrow(&mut self, name: String, source: &str, target: &str) -> Result<ArrowId> {
        if name.is_empty() {
            return Err(Error::InvalidQuiver("empty arrow name".into()));
        }
        if self.arrow_index.contains_key(&name) {
            return Err(Error::Duplicate { kind: "arrow", name });
        }
        let source = self.vertex(source)?;
        let target = self.vertex(target)?;
        let id = ArrowId(self.arrows.len());
        self.arrow_index.insert(name.clone(), id);
        self.arrows.push(Arrow { name, source, target });
        Ok(id)
    }

    pub fn vertex(&self, name: &str) -> Result<VertexId> {
        self.vertex_index.get(name).copied().ok_or_else(|| Error::UnknownVertex(name.into()))
    }

    pub fn arrow_id(&self, name: &str) -> Result<ArrowId> {
        self.arrow_index.get(name).copied().ok_or_else(|| Error::UnknownArrow(name.into()))
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertices[v.0]
    }

    pub fn arrow(&self, a: ArrowId) -> &Arrow {
        &self.arrows[a.0]
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> {
        (0..self.vertices.len()).map(VertexId)
    }

    pub fn arrow_ids(&self) -> impl Iterator<Item = ArrowId> {
        (0..self.arrows.len()).map(ArrowId)
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrows_from(&self, v: VertexId) -> impl Iterator<Item = ArrowId> + '_ {
        self.arrow_ids().filter(move |a| self.arrows[a.0].source == v)
    }

    pub fn arrows_to(&self, v: VertexId) -> impl Iterator<Item = ArrowId> + '_ {
        self.arrow_ids().filter(move |a| self.arrows[a.0].target == v)
    }

    pub fn trivial_path(&self, v: VertexId) -> Path {
        Path::trivial(v)
    }

    pub fn arrow_path(&self, a: ArrowId) -> Path {
        let arrow = &self.arrows[a.0];
        Path { source: arrow.source, target: arrow.target, arrows: vec![a] }
    }

    /// Path from arrow names in traversal order.
    pub fn path(&self, names: &[&str]) -> Result<Path> {
        let ids = names.iter().map(|n| self.arrow_id(n)).collect::<Result<Vec<_>>>()?;
        self.path_from_ids(ids)
    }

    pub fn path_from_ids(&self, arrows: Vec<ArrowId>) -> Result<Path> {
        let first = arrows
            .first()
            .ok_or_else(|| Error::NotComposable("empty arrow list".into()))?;
        let source = self.arrows[first.0].source;
        let mut at = source;
        for (k, a) in arrows.iter().enumerate() {
            let arrow = &self.arrows[a.0];
            if arrow.source != at {
                return Err(Error::NotComposable(format!(
                    "arrow `{}` at position {k} starts at `{}` but the path is at `{}`",
                    arrow.name,
                    self.vertex_name(arrow.source),
                    self.vertex_name(at)
                )));
            }
            at = arrow.target;
        }
        Ok(Path { source, target: at, arrows })
    }

    /// All paths of length `t` from `i` to `j`, lexicographic in the declared
    /// arrow order (compared in traversal order).
    pub fn paths_of_length(&self, t: usize, i: VertexId, j: VertexId) -> Vec<Path> {
        self.paths_from(t, i).into_iter().filter(|p| p.target == j).collect()
    }

    pub fn paths_of_length_named(&self, t: usize, i: &str, j: &str) -> Result<Vec<Path>> {
        Ok(self.paths_of_length(t, self.vertex(i)?, self.vertex(j)?))
    }

    /// All paths of length `t` starting at `i`, in lexicographic order.
    pub fn paths_from(&self, t: usize, i: VertexId) -> Vec<Path> {
        let mut out = Vec::new();
        let mut stack = Path::trivial(i);
        self.extend_paths(&mut stack, t, &mut out);
        out
    }

    fn extend_paths(&self, current: &mut Path, remaining: usize, out: &mut Vec<Path>) {
        if remaining == 0 {
            out.push(current.clone());
            return;
        }
        for a in self.arrows_from(current.target).collect::<Vec<_>>() {
            let prev = current.target;
            current.arrows.push(a);
            current.target = self.arrows[a.0].target;
            self.extend_paths(current, remaining - 1, out);
            current.arrows.pop();
            current.target = prev;
        }
    }

    /// All paths of length `t`, sorted.
    pub fn all_paths_of_length(&self, t: usize) -> Vec<Path> {
        let mut all: Vec<Path> = self.vertex_ids().flat_map(|i| self.paths_from(t, i)).collect();
        all.sort();
        all
    }

    pub fn is_acyclic(&self) -> bool {
        let n = self.vertices.len();
        let mut indegree = vec![0usize; n];
        for a in &self.arrows {
            indegree[a.target.0] += 1;
        }
        let mut ready: Vec<usize> = (0..n).filter(|&v| indegree[v] == 0).collect();
        let mut seen = 0;
        while let Some(v) = ready.pop() {
            seen += 1;
            for a in &self.arrows {
                if a.source.0 == v {
                    indegree[a.target.0] -= 1;
                    if indegree[a.target.0] == 0 {
                        ready.push(a.target.0);
                    }
                }
            }
        }
        seen == n
    }

    /// Same vertices, every arrow reversed; names get `suffix` appended.
    pub fn opposite_with_suffix(&self, suffix: &str) -> Quiver {
        Quiver::new(
            self.vertices.iter().cloned(),
            self.arrows.iter().map(|a| {
                (
                    format!("{}{suffix}", a.name),
                    self.vertex_name(a.target).to_string(),
                    self.vertex_name(a.source).to_string(),
                )
            }),
        )
        .expect("reversing arrows keeps the quiver valid")
    }

    pub fn opposite(&self) -> Quiver {
        self.opposite_with_suffix("")
    }

    /// Adjacency matrix with entry `(j, i)` counting arrows `i -> j`.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let n = self.vertices.len();
        let mut m = vec![vec![0; n]; n];
        for a in &self.arrows {
            m[a.target.0][a.source.0] += 1;
        }
        m
    }

    pub fn render(&self, p: &Path) -> String {
        if p.arrows.is_empty() {
            return format!("e_{}", self.vertex_name(p.source));
        }
        let names: Vec<&str> = p.arrows.iter().rev().map(|a| self.arrows[a.0].name.as_str()).collect();
        names.join("·")
    }

    pub fn arrow_names(&self, p: &Path) -> Vec<String> {
        p.arrows.iter().map(|a| self.arrows[a.0].name.clone()).collect()
    }
}

pub fn opposite_quiver(q: &Quiver) -> Quiver {
    q.opposite()
}

pub fn is_acyclic(q: &Quiver) -> bool {
    q.is_acyclic()
}

pub fn paths_of_length(q: &Quiver, t: usize, i: &str, j: &str) -> Result<Vec<Path>> {
    q.paths_of_length_named(t, i, j)
}

/// A path in traversal order. Trivial paths have no arrows and equal
/// endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Path {
    source: VertexId,
    target: VertexId,
    arrows: Vec<ArrowId>,
}

impl Path {
    pub fn trivial(v: VertexId) -> Self {
        Path { source: v, target: v, arrows: Vec::new() }
    }

    pub fn source(&self) -> VertexId {
        self.source
    }

    pub fn target(&self) -> VertexId {
        self.target
    }

    pub fn arrows(&self) -> &[ArrowId] {
        &self.arrows
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    /// `self` followed by `next`; `None` if the endpoints do not meet.
    pub fn then(&self, next: &Path) -> Option<Path> {
        if self.target != next.source {
            return None;
        }
        let mut arrows = self.arrows.clone();
        arrows.extend_from_slice(&next.arrows);
        Some(Path { source: self.source, target: next.target, arrows })
    }

    /// `self` followed by the arrow `a` ending at `target`.
    pub fn extended(&self, a: ArrowId, target: VertexId) -> Path {
        let mut arrows = self.arrows.clone();
        arrows.push(a);
        Path { source: self.source, target, arrows }
    }

    /// Last arrow applied (leftmost in composition notation).
    pub fn last_arrow(&self) -> Option<ArrowId> {
        self.arrows.last().copied()
    }

    pub fn first_arrow(&self) -> Option<ArrowId> {
        self.arrows.first().copied()
    }
}

impl Ord for Path {
    fn cmp(&self, other: &Self) -> Ordering {
        self.arrows
            .len()
            .cmp(&other.arrows.len())
            .then_with(|| self.arrows.cmp(&other.arrows))
            .then_with(|| self.source.cmp(&other.source))
    }
}

impl PartialOrd for Path {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Display helper binding a path to its quiver.
pub struct Rendered<'a>(pub &'a Quiver, pub &'a Path);

impl fmt::Display for Rendered<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.render(self.1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a3() -> Quiver {
        Quiver::from_names(&["1", "2", "3"], &[("α", "1", "2"), ("β", "2", "3")]).unwrap()
    }

    fn beilinson() -> Quiver {
        Quiver::from_names(
            &["0", "1", "2"],
            &[("a0", "0", "1"), ("b0", "0", "1"), ("a1", "1", "2"), ("b1", "1", "2")],
        )
        .unwrap()
    }

    #[test]
    fn a3_length_two() {
        let q = a3();
        let ps = q.paths_of_length_named(2, "1", "3").unwrap();
        assert_eq!(ps.len(), 1);
        assert_eq!(q.render(&ps[0]), "β·α");
    }

    #[test]
    fn length_zero_is_trivial() {
        let q = a3();
        let ps = q.paths_of_length_named(0, "2", "2").unwrap();
        assert_eq!(ps, vec![Path::trivial(q.vertex("2").unwrap())]);
        assert_eq!(q.render(&ps[0]), "e_2");
        assert!(q.paths_of_length_named(0, "1", "2").unwrap().is_empty());
    }

    #[test]
    fn beilinson_block_order() {
        let q = beilinson();
        let rendered: Vec<String> =
            q.paths_of_length_named(2, "0", "2").unwrap().iter().map(|p| q.render(p)).collect();
        // traversal-order lexicographic with arrows declared a0, b0, a1, b1
        assert_eq!(rendered, ["a1·a0", "b1·a0", "a1·b0", "b1·b0"]);
    }

    #[test]
    fn unknown_vertex() {
        assert_eq!(
            a3().paths_of_length_named(1, "1", "9").unwrap_err(),
            Error::UnknownVertex("9".into())
        );
    }

    #[test]
    fn acyclicity() {
        assert!(a3().is_acyclic());
        let lp = Quiver::from_names(&["1"], &[("l", "1", "1")]).unwrap();
        assert!(!lp.is_acyclic());
        let two = Quiver::from_names(&["1", "2"], &[("a", "1", "2"), ("b", "2", "1")]).unwrap();
        assert!(!two.is_acyclic());
    }

    #[test]
    fn opposite_examples() {
        let op = a3().opposite();
        assert_eq!(op.arrow(op.arrow_id("α").unwrap()).source, op.vertex("2").unwrap());
        assert_eq!(op.opposite(), a3());
        let lp = Quiver::from_names(&["1"], &[("l", "1", "1")]).unwrap();
        assert_eq!(lp.opposite(), lp);
        let dbl = Quiver::from_names(&["1", "2"], &[("a", "1", "2"), ("b", "1", "2")]).unwrap();
        let op = dbl.opposite_with_suffix("*");
        assert_eq!(op.arrows()[1].name, "b*");
        assert_eq!(op.arrows()[1].source, op.vertex("2").unwrap());
    }

    #[test]
    fn noncomposable_path_rejected() {
        let q = a3();
        assert!(matches!(q.path(&["β", "α"]), Err(Error::NotComposable(_))));
        assert_eq!(q.path(&["α", "β"]).unwrap().len(), 2);
    }

    #[test]
    fn duplicate_names_rejected() {
        assert!(Quiver::from_names(&["1", "1"], &[]).is_err());
        assert!(Quiver::from_names(&["1", "2"], &[("a", "1", "2"), ("a", "2", "1")]).is_err());
        assert!(Quiver::from_names(&["1"], &[("a", "1", "7")]).is_err());
    }
}
