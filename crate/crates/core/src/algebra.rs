//! Graded quotients `kQ/(rho)` built degree by degree.
//!
//! Degree `t` is computed from degree `t-1`: every length-`t` path is
//! congruent modulo `I_{t-1}·V` to a combination of *candidates* `m·α` with
//! `m` in the chosen basis `M_{t-1}`, so `Λ_t` is the quotient of the span of
//! the candidates by the images of `Λ_{t-d}·ρ_d`. Eliminating against the
//! path order picks `M_t` as the non-pivot candidates, which are exactly the
//! non-pivot paths of a full elimination of `I_t` in `kQ_t`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{add_scaled, fmt_scalar, kernel, rref, Matrix, Scalar, SparseVec, Subspace};
use crate::quiver::{ArrowId, Path, Quiver, VertexId};

/// An arbitrary linear combination of paths, possibly of mixed lengths and
/// endpoints.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PathCombination {
    terms: BTreeMap<Path, Scalar>,
}

impl PathCombination {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_term(&mut self, path: Path, coeff: Scalar) {
        let entry = self.terms.entry(path.clone()).or_insert_with(Scalar::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&path);
        }
    }

    pub fn terms(&self) -> &BTreeMap<Path, Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl FromIterator<(Path, Scalar)> for PathCombination {
    fn from_iter<I: IntoIterator<Item = (Path, Scalar)>>(iter: I) -> Self {
        let mut c = PathCombination::new();
        for (p, x) in iter {
            c.add_term(p, x);
        }
        c
    }
}

/// A nonzero combination of paths sharing source, target and length ≥ 2.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RelationElement {
    source: VertexId,
    target: VertexId,
    degree: usize,
    terms: BTreeMap<Path, Scalar>,
}

impl RelationElement {
    pub fn new<I>(terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Path, Scalar)>,
    {
        let combo: PathCombination = terms.into_iter().collect();
        let mut iter = combo.terms.keys();
        let first = iter
            .next()
            .ok_or_else(|| Error::NotAdmissible("relation has no nonzero terms".into()))?;
        let (source, target, degree) = (first.source(), first.target(), first.len());
        if degree < 2 {
            return Err(Error::NotAdmissible(format!("relation term of length {degree}")));
        }
        if iter.any(|p| p.source() != source || p.target() != target || p.len() != degree) {
            return Err(Error::NotAdmissible("relation is not homogeneous".into()));
        }
        Ok(RelationElement { source, target, degree, terms: combo.terms })
    }

    /// Relation from a coordinate vector over `paths` (one block); `None` if
    /// the vector is zero.
    pub fn from_coordinates(paths: &[Path], coords: &[Scalar]) -> Option<Self> {
        let terms: Vec<(Path, Scalar)> = paths
            .iter()
            .zip(coords)
            .filter(|(_, x)| !x.is_zero())
            .map(|(p, x)| (p.clone(), x.clone()))
            .collect();
        RelationElement::new(terms).ok()
    }

    pub fn source(&self) -> VertexId {
        self.source
    }

    pub fn target(&self) -> VertexId {
        self.target
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<Path, Scalar> {
        &self.terms
    }

    pub fn coefficient(&self, p: &Path) -> Scalar {
        self.terms.get(p).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Coordinates over the given block paths. Terms outside `paths` are an
    /// error.
    pub fn to_coordinates(&self, paths: &[Path]) -> Result<Vec<Scalar>> {
        let index: HashMap<&Path, usize> = paths.iter().enumerate().map(|(k, p)| (p, k)).collect();
        let mut v = vec![Scalar::zero(); paths.len()];
        for (p, x) in &self.terms {
            let k = index
                .get(p)
                .ok_or_else(|| Error::BlockMismatch("relation term outside the block".into()))?;
            v[*k] = x.clone();
        }
        Ok(v)
    }

    pub fn scaled(&self, c: &Scalar) -> RelationElement {
        assert!(!c.is_zero());
        RelationElement {
            terms: self.terms.iter().map(|(p, x)| (p.clone(), x * c)).collect(),
            ..self.clone()
        }
    }

    /// Whether `self = c·other` for some nonzero scalar `c`.
    pub fn proportional_to(&self, other: &RelationElement) -> bool {
        if self.terms.len() != other.terms.len() {
            return false;
        }
        let Some((p, x)) = self.terms.iter().next() else {
            return false;
        };
        let Some(y) = other.terms.get(p) else {
            return false;
        };
        let c = x / y;
        other.scaled(&c) == *self
    }

    pub fn render(&self, q: &Quiver) -> String {
        let mut out = String::new();
        for (k, (p, x)) in self.terms.iter().enumerate() {
            let neg = x < &Scalar::zero();
            let mag = if neg { -x.clone() } else { x.clone() };
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if !mag.is_one() {
                out.push_str(&fmt_scalar(&mag));
                out.push(' ');
            }
            out.push_str(&q.render(p));
        }
        out
    }
}

/// A bound quiver with homogeneous relations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    quiver: Quiver,
    relations: Vec<RelationElement>,
}

impl Presentation {
    pub fn new(quiver: Quiver, relations: Vec<RelationElement>) -> Result<Self> {
        for r in &relations {
            for p in r.terms.keys() {
                if p.arrows().iter().any(|a| a.0 >= quiver.arrow_count()) {
                    return Err(Error::NotComposable("relation uses an arrow outside the quiver".into()));
                }
                let rebuilt = quiver.path_from_ids(p.arrows().to_vec())?;
                if rebuilt != *p {
                    return Err(Error::NotComposable("relation path endpoints disagree".into()));
                }
            }
        }
        Ok(Presentation { quiver, relations })
    }

    /// Free path algebra.
    pub fn free(quiver: Quiver) -> Self {
        Presentation { quiver, relations: Vec::new() }
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn relations(&self) -> &[RelationElement] {
        &self.relations
    }

    pub fn is_quadratic(&self) -> bool {
        self.relations.iter().all(|r| r.degree == 2)
    }

    /// Span of the relations of the given degree inside the block `i -> j`,
    /// with coordinates over `paths_of_length(degree, i, j)`.
    pub fn relation_span(&self, degree: usize, i: VertexId, j: VertexId) -> (Vec<Path>, Subspace) {
        let paths = self.quiver.paths_of_length(degree, i, j);
        let rows = self
            .relations
            .iter()
            .filter(|r| r.degree == degree && r.source == i && r.target == j)
            .map(|r| r.to_coordinates(&paths).expect("relation lies in its block"));
        let span = Subspace::span(paths.len(), rows);
        (paths, span)
    }

    pub fn render_relations(&self) -> Vec<String> {
        self.relations.iter().map(|r| r.render(&self.quiver)).collect()
    }
}

/// Splits mixed combinations into homogeneous pieces by (source, target,
/// length). The ideal is unchanged in every degree because the path algebra
/// is graded by length and by the idempotents at both ends.
pub fn normalize_relations(quiver: &Quiver, raw: &[PathCombination]) -> Result<Presentation> {
    let mut relations = Vec::new();
    for combo in raw {
        let mut blocks: BTreeMap<(usize, VertexId, VertexId), Vec<(Path, Scalar)>> = BTreeMap::new();
        for (p, x) in &combo.terms {
            if p.len() < 2 {
                return Err(Error::NotAdmissible(format!(
                    "relation contains `{}` of length {}",
                    quiver.render(p),
                    p.len()
                )));
            }
            blocks.entry((p.len(), p.source(), p.target())).or_default().push((p.clone(), x.clone()));
        }
        for (_, terms) in blocks {
            relations.push(RelationElement::new(terms)?);
        }
    }
    Presentation::new(quiver.clone(), relations)
}

/// Brute-force `I_t ∩ e_j kQ_t e_i`: the span of every padded relation
/// `u·r·v`. Independent of [`GradedBasis`]; used to cross-check it.
pub fn ideal_by_padding(p: &Presentation, t: usize, i: VertexId, j: VertexId) -> (Vec<Path>, Subspace) {
    let q = p.quiver();
    let paths = q.paths_of_length(t, i, j);
    let index: HashMap<&Path, usize> = paths.iter().enumerate().map(|(k, p)| (p, k)).collect();
    let mut rows = Vec::new();
    for r in p.relations().iter().filter(|r| r.degree() <= t) {
        for before_len in 0..=(t - r.degree()) {
            let after_len = t - r.degree() - before_len;
            for before in q.paths_of_length(before_len, i, r.source()) {
                for after in q.paths_of_length(after_len, r.target(), j) {
                    let mut v = vec![Scalar::zero(); paths.len()];
                    for (path, x) in r.terms() {
                        let full = before.then(path).and_then(|bp| bp.then(&after)).expect("composable");
                        v[index[&full]] += x;
                    }
                    rows.push(v);
                }
            }
        }
    }
    (paths.clone(), Subspace::span(paths.len(), rows))
}

/// Which path order drives the basis selection.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum BasisOrder {
    /// `M_t` = paths that are not the lexicographically smallest term of any
    /// element of `I_t` (ordinary reduced row echelon form).
    #[default]
    Lex,
    /// Same with the order reversed.
    ReverseLex,
}

#[derive(Clone, Debug)]
struct DegreeData {
    basis: Vec<Path>,
    index: HashMap<Path, usize>,
    /// `(m, α)` with `m ∈ M_{t-1}` ↦ coordinates of `m·α` over `M_t`.
    reductions: HashMap<(usize, ArrowId), SparseVec>,
}

/// Per-degree bases `M_t` of `Λ = kQ/(ρ)` plus the expansion machinery.
#[derive(Clone, Debug)]
pub struct GradedBasis {
    presentation: Presentation,
    order: BasisOrder,
    degrees: Vec<DegreeData>,
}

impl GradedBasis {
    /// Computes degrees `0..=max_degree`.
    pub fn new(p: &Presentation, max_degree: usize) -> Self {
        Self::with_order(p, max_degree, BasisOrder::Lex)
    }

    pub fn with_order(p: &Presentation, max_degree: usize, order: BasisOrder) -> Self {
        let mut gb = GradedBasis { presentation: p.clone(), order, degrees: Vec::new() };
        gb.push_degree_zero();
        while gb.max_degree() < max_degree {
            gb.push_next_degree();
        }
        gb
    }

    /// Computes degrees until the first vanishing one. For acyclic quivers
    /// the bound is automatic; otherwise `bound` caps the search and an
    /// algebra still nonzero there is rejected.
    pub fn finite(p: &Presentation, bound: usize) -> Result<Self> {
        Self::finite_with_order(p, bound, BasisOrder::Lex)
    }

    pub fn finite_with_order(p: &Presentation, bound: usize, order: BasisOrder) -> Result<Self> {
        let bound = if p.quiver().is_acyclic() { bound.max(p.quiver().vertex_count()) } else { bound };
        let mut gb = GradedBasis { presentation: p.clone(), order, degrees: Vec::new() };
        gb.push_degree_zero();
        while !gb.degrees.last().expect("degree 0").basis.is_empty() {
            if gb.max_degree() >= bound {
                return Err(Error::NotFiniteDimensional(bound));
            }
            gb.push_next_degree();
        }
        Ok(gb)
    }

    fn push_degree_zero(&mut self) {
        let basis: Vec<Path> = self.presentation.quiver().vertex_ids().map(Path::trivial).collect();
        let index = basis.iter().cloned().enumerate().map(|(k, p)| (p, k)).collect();
        self.degrees.push(DegreeData { basis, index, reductions: HashMap::new() });
    }

    fn push_next_degree(&mut self) {
        let t = self.degrees.len();
        let q = self.presentation.quiver().clone();
        let prev = &self.degrees[t - 1];

        // candidates grouped by block
        let mut blocks: BTreeMap<(VertexId, VertexId), Vec<(usize, ArrowId, Path)>> = BTreeMap::new();
        for (k, m) in prev.basis.iter().enumerate() {
            for a in q.arrows_from(m.target()) {
                let c = m.extended(a, q.arrow(a).target);
                blocks.entry((c.source(), c.target())).or_default().push((k, a, c));
            }
        }

        // relation images π(m·r), keyed by block, as maps candidate -> coefficient
        let mut relation_rows: BTreeMap<(VertexId, VertexId), Vec<BTreeMap<(usize, ArrowId), Scalar>>> =
            BTreeMap::new();
        for r in self.presentation.relations().iter().filter(|r| r.degree() <= t) {
            let d = r.degree();
            for (mk, m) in self.degrees[t - d].basis.iter().enumerate() {
                if m.target() != r.source() {
                    continue;
                }
                let mut row: BTreeMap<(usize, ArrowId), Scalar> = BTreeMap::new();
                for (path, x) in r.terms() {
                    let arrows = path.arrows();
                    let mut v = SparseVec::new();
                    v.insert(mk, Scalar::one());
                    for (step, a) in arrows[..d - 1].iter().enumerate() {
                        v = self.extend_in_degree(t - d + step, &v, *a);
                    }
                    let last = arrows[d - 1];
                    for (mi, c) in v {
                        let e = row.entry((mi, last)).or_insert_with(Scalar::zero);
                        *e += c * x;
                    }
                }
                row.retain(|_, x| !x.is_zero());
                if !row.is_empty() {
                    relation_rows.entry((m.source(), r.target())).or_default().push(row);
                }
            }
        }

        let mut chosen: Vec<Path> = Vec::new();
        // candidate -> (pivot?, reduction over chosen paths by path)
        let mut pending: Vec<((usize, ArrowId), Vec<(Path, Scalar)>)> = Vec::new();
        for ((i, j), mut cands) in blocks {
            cands.sort_by(|a, b| a.2.cmp(&b.2));
            if self.order == BasisOrder::ReverseLex {
                cands.reverse();
            }
            let col: HashMap<(usize, ArrowId), usize> =
                cands.iter().enumerate().map(|(k, (m, a, _))| ((*m, *a), k)).collect();
            let rows = relation_rows.remove(&(i, j)).unwrap_or_default();
            let mut mat = Matrix::zeros(rows.len(), cands.len());
            for (r, row) in rows.iter().enumerate() {
                for (key, x) in row {
                    mat.set(r, col[key], x.clone());
                }
            }
            let (red, pivots) = rref(&mat);
            let mut pivot_row = vec![None; cands.len()];
            for (r, &c) in pivots.iter().enumerate() {
                pivot_row[c] = Some(r);
            }
            for (c, (m, a, path)) in cands.iter().enumerate() {
                match pivot_row[c] {
                    None => {
                        chosen.push(path.clone());
                        pending.push(((*m, *a), vec![(path.clone(), Scalar::one())]));
                    }
                    Some(r) => {
                        let red_terms = (0..cands.len())
                            .filter(|&c2| pivot_row[c2].is_none() && !red.get(r, c2).is_zero())
                            .map(|c2| (cands[c2].2.clone(), -red.get(r, c2).clone()))
                            .collect();
                        pending.push(((*m, *a), red_terms));
                    }
                }
            }
        }
        chosen.sort();
        let index: HashMap<Path, usize> = chosen.iter().cloned().enumerate().map(|(k, p)| (p, k)).collect();
        let reductions = pending
            .into_iter()
            .map(|(key, terms)| (key, terms.into_iter().map(|(p, x)| (index[&p], x)).collect()))
            .collect();
        self.degrees.push(DegreeData { basis: chosen, index, reductions });
    }

    /// `v·α` for `v` in degree `t` (α applied after `v`).
    fn extend_in_degree(&self, t: usize, v: &SparseVec, a: ArrowId) -> SparseVec {
        let next = &self.degrees[t + 1];
        let mut out = SparseVec::new();
        for (m, c) in v {
            if let Some(red) = next.reductions.get(&(*m, a)) {
                add_scaled(&mut out, red, c);
            }
        }
        out
    }

    /// Right-extension of an element of `Λ_t` by an arrow: the element
    /// followed by `a`.
    pub fn extend(&self, t: usize, v: &SparseVec, a: ArrowId) -> Result<SparseVec> {
        if t + 1 > self.max_degree() {
            return Err(Error::DegreeNotComputed(t + 1));
        }
        Ok(self.extend_in_degree(t, v, a))
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn quiver(&self) -> &Quiver {
        self.presentation.quiver()
    }

    pub fn order(&self) -> BasisOrder {
        self.order
    }

    pub fn max_degree(&self) -> usize {
        self.degrees.len() - 1
    }

    /// Largest degree with `Λ_t ≠ 0` among those computed.
    pub fn top_degree(&self) -> usize {
        self.degrees.iter().rposition(|d| !d.basis.is_empty()).unwrap_or(0)
    }

    /// True when the last computed degree vanishes, so every higher one does.
    pub fn is_conclusive(&self) -> bool {
        self.degrees.last().is_some_and(|d| d.basis.is_empty())
    }

    pub fn basis(&self, t: usize) -> &[Path] {
        self.degrees.get(t).map_or(&[], |d| d.basis.as_slice())
    }

    pub fn dim(&self, t: usize) -> usize {
        self.basis(t).len()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.degrees.iter().map(|d| d.basis.len()).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.dims().iter().sum()
    }

    pub fn block_dim(&self, t: usize, i: VertexId, j: VertexId) -> usize {
        self.basis(t).iter().filter(|p| p.source() == i && p.target() == j).count()
    }

    pub fn index_of(&self, p: &Path) -> Option<usize> {
        self.degrees.get(p.len())?.index.get(p).copied()
    }

    /// Coordinates of a path over `M_{len}`.
    pub fn expand(&self, p: &Path) -> Result<SparseVec> {
        if p.len() > self.max_degree() {
            return Err(Error::DegreeNotComputed(p.len()));
        }
        let mut v = SparseVec::new();
        v.insert(p.source().0, Scalar::one());
        for (t, a) in p.arrows().iter().enumerate() {
            v = self.extend_in_degree(t, &v, *a);
            if v.is_empty() {
                break;
            }
        }
        Ok(v)
    }

    /// Coordinates of a homogeneous combination of equal-length paths.
    pub fn expand_combination<'a, I>(&self, terms: I) -> Result<SparseVec>
    where
        I: IntoIterator<Item = (&'a Path, &'a Scalar)>,
    {
        let mut out = SparseVec::new();
        let mut degree = None;
        for (p, x) in terms {
            if *degree.get_or_insert(p.len()) != p.len() {
                return Err(Error::NotAdmissible("combination is not homogeneous".into()));
            }
            add_scaled(&mut out, &self.expand(p)?, x);
        }
        Ok(out)
    }

    /// Product of two paths in `Λ`: `first` followed by `second`.
    pub fn compose(&self, first: &Path, second: &Path) -> Result<SparseVec> {
        match first.then(second) {
            Some(p) => self.expand(&p),
            None => Ok(SparseVec::new()),
        }
    }

    pub fn is_bound(&self, p: &Path) -> Result<bool> {
        Ok(!self.expand(p)?.is_empty())
    }

    /// `I_t ∩ e_j kQ_t e_i` as the kernel of the expansion map.
    pub fn ideal_subspace(&self, t: usize, i: VertexId, j: VertexId) -> Result<(Vec<Path>, Subspace)> {
        let paths = self.quiver().paths_of_length(t, i, j);
        let block: Vec<usize> = self
            .basis(t)
            .iter()
            .enumerate()
            .filter(|(_, m)| m.source() == i && m.target() == j)
            .map(|(k, _)| k)
            .collect();
        let mut e = Matrix::zeros(block.len(), paths.len());
        for (c, p) in paths.iter().enumerate() {
            let v = self.expand(p)?;
            for (r, k) in block.iter().enumerate() {
                if let Some(x) = v.get(k) {
                    e.set(r, c, x.clone());
                }
            }
        }
        Ok((paths, kernel(&e)))
    }

    /// Bound paths admitting no nonzero one-arrow extension on either side.
    pub fn maximal_bound_paths(&self) -> Result<Vec<(Path, usize)>> {
        if !self.is_conclusive() {
            return Err(Error::DegreeNotComputed(self.max_degree() + 1));
        }
        let q = self.quiver();
        let mut out = Vec::new();
        for t in 0..=self.top_degree() {
            for p in q.all_paths_of_length(t) {
                if !self.is_bound(&p)? {
                    continue;
                }
                if !self.has_nonzero_extension(&p)? {
                    out.push((p, t));
                }
            }
        }
        Ok(out)
    }

    fn has_nonzero_extension(&self, p: &Path) -> Result<bool> {
        let q = self.quiver();
        for a in q.arrows_from(p.target()) {
            if self.is_bound(&p.extended(a, q.arrow(a).target))? {
                return Ok(true);
            }
        }
        for a in q.arrows_to(p.source()) {
            let ext = q.arrow_path(a).then(p).expect("composable");
            if self.is_bound(&ext)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// `Some(n)` iff every maximal bound path has length `n`.
    pub fn homogeneity_degree(&self) -> Option<usize> {
        let lengths: BTreeSet<usize> = self.maximal_bound_paths().ok()?.into_iter().map(|(_, t)| t).collect();
        (lengths.len() == 1).then(|| *lengths.iter().next().expect("one length"))
    }

    /// `M_n`, the paths indexing the returning arrows.
    pub fn top_degree_basis(&self, n: usize) -> Result<Vec<Path>> {
        if self.homogeneity_degree() != Some(n) {
            return Err(Error::NotHomogeneous);
        }
        Ok(self.basis(n).to_vec())
    }

    /// Dimension table `t -> (i, j) -> dim e_j Λ_t e_i`.
    pub fn block_dims(&self) -> Vec<BTreeMap<(VertexId, VertexId), usize>> {
        self.degrees
            .iter()
            .map(|d| {
                let mut m = BTreeMap::new();
                for p in &d.basis {
                    *m.entry((p.source(), p.target())).or_insert(0) += 1;
                }
                m
            })
            .collect()
    }
}

impl fmt::Display for GradedBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let q = self.quiver();
        for (t, d) in self.degrees.iter().enumerate() {
            let names: Vec<String> = d.basis.iter().map(|p| q.render(p)).collect();
            writeln!(f, "M_{t} ({}): {}", d.basis.len(), names.join(", "))?;
        }
        Ok(())
    }
}

pub fn graded_basis(p: &Presentation, max_degree: usize) -> GradedBasis {
    GradedBasis::new(p, max_degree)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::linalg::int;

    #[test]
    fn normalization_splits_blocks() {
        let q = Quiver::from_names(
            &["1", "2", "3", "4"],
            &[("α", "1", "2"), ("β", "2", "3"), ("γ", "1", "2"), ("δ", "2", "4")],
        )
        .unwrap();
        let mixed: PathCombination = [
            (q.path(&["α", "β"]).unwrap(), int(1)),
            (q.path(&["γ", "δ"]).unwrap(), int(1)),
        ]
        .into_iter()
        .collect();
        let p = normalize_relations(&q, &[mixed]).unwrap();
        assert_eq!(p.relations().len(), 2);

        let normal: PathCombination = [
            (q.path(&["α", "β"]).unwrap(), int(1)),
            (q.path(&["γ", "β"]).unwrap(), int(-1)),
        ]
        .into_iter()
        .collect();
        let p = normalize_relations(&q, &[normal.clone()]).unwrap();
        assert_eq!(p.relations().len(), 1);
        assert_eq!(p.relations()[0].terms(), normal.terms());
    }

    #[test]
    fn normalization_rejects_short_paths() {
        let q = fixtures::a_quiver(3);
        let bad: PathCombination = [(q.path(&["α"]).unwrap(), int(1))].into_iter().collect();
        assert!(matches!(normalize_relations(&q, &[bad]), Err(Error::NotAdmissible(_))));
    }

    #[test]
    fn type_a_dimensions() {
        let gb = GradedBasis::new(&fixtures::a_rad_square_zero(3), 3);
        assert_eq!(gb.dims(), vec![3, 2, 0, 0]);
        let gb = GradedBasis::new(&fixtures::a_path_algebra(3), 3);
        assert_eq!(gb.dims(), vec![3, 2, 1, 0]);
        assert_eq!(gb.quiver().render(&gb.basis(2)[0]), "β·α");
    }

    #[test]
    fn beilinson_dimensions_and_basis() {
        let gb = GradedBasis::new(&fixtures::beilinson(), 3);
        assert_eq!(gb.dims(), vec![3, 4, 1, 0]);
        assert_eq!(gb.quiver().render(&gb.basis(2)[0]), "a1·b0");
    }

    #[test]
    fn beilinson_expansions() {
        let gb = GradedBasis::new(&fixtures::beilinson(), 2);
        let q = gb.quiver();
        let b1a0 = gb.expand(&q.path(&["a0", "b1"]).unwrap()).unwrap();
        assert_eq!(b1a0, SparseVec::from([(0, int(-1))]));
        assert!(gb.expand(&q.path(&["a0", "a1"]).unwrap()).unwrap().is_empty());
        for (k, m) in gb.basis(1).iter().enumerate() {
            assert_eq!(gb.expand(m).unwrap(), SparseVec::from([(k, int(1))]));
        }
    }

    #[test]
    fn expansion_beyond_computed_degree() {
        let gb = GradedBasis::new(&fixtures::beilinson(), 1);
        let q = gb.quiver();
        assert_eq!(gb.expand(&q.path(&["a0", "a1"]).unwrap()), Err(Error::DegreeNotComputed(2)));
    }

    #[test]
    fn maximal_paths_and_homogeneity() {
        let gb = GradedBasis::finite(&fixtures::a_rad_square_zero(3), 8).unwrap();
        let max: Vec<(String, usize)> =
            gb.maximal_bound_paths().unwrap().iter().map(|(p, t)| (gb.quiver().render(p), *t)).collect();
        assert_eq!(max, vec![("α".to_string(), 1), ("β".to_string(), 1)]);
        assert_eq!(gb.homogeneity_degree(), Some(1));

        let gb = GradedBasis::finite(&fixtures::a_path_algebra(3), 8).unwrap();
        let max = gb.maximal_bound_paths().unwrap();
        assert_eq!(max.len(), 1);
        assert_eq!(max[0].1, 2);

        let gb = GradedBasis::finite(&fixtures::beilinson(), 8).unwrap();
        let max: Vec<(String, usize)> =
            gb.maximal_bound_paths().unwrap().iter().map(|(p, t)| (gb.quiver().render(p), *t)).collect();
        assert!(max.contains(&("a1·b0".to_string(), 2)));
        assert!(max.iter().all(|(_, t)| *t == 2));
        assert_eq!(gb.homogeneity_degree(), Some(2));
    }

    #[test]
    fn unequal_branches_are_not_homogeneous() {
        let q = Quiver::from_names(
            &["1", "2", "3", "4"],
            &[("a", "1", "2"), ("b", "1", "3"), ("c", "3", "4")],
        )
        .unwrap();
        let gb = GradedBasis::finite(&Presentation::free(q), 8).unwrap();
        assert_eq!(gb.homogeneity_degree(), None);
        assert_eq!(gb.top_degree_basis(2), Err(Error::NotHomogeneous));
    }

    #[test]
    fn top_degree_bases() {
        let render = |p: &Presentation, n| {
            let gb = GradedBasis::finite(p, 8).unwrap();
            gb.top_degree_basis(n).unwrap().iter().map(|m| gb.quiver().render(m)).collect::<Vec<_>>()
        };
        assert_eq!(render(&fixtures::a_rad_square_zero(3), 1), ["α", "β"]);
        assert_eq!(render(&fixtures::beilinson(), 2), ["a1·b0"]);
        assert_eq!(render(&fixtures::a_path_algebra(2), 1), ["α"]);
    }

    #[test]
    fn cyclic_infinite_algebra_is_refused() {
        let q = Quiver::from_names(&["1"], &[("x", "1", "1")]).unwrap();
        assert_eq!(GradedBasis::finite(&Presentation::free(q), 5).unwrap_err(), Error::NotFiniteDimensional(5));
    }

    #[test]
    fn relation_render() {
        let p = fixtures::beilinson();
        assert_eq!(p.render_relations(), ["b1·a0 + a1·b0", "a1·a0", "b1·b0"]);
    }
}
