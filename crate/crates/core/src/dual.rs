//! Quadratic duals via the coordinate pairing on length-2 paths.
//!
//! The dual keeps the quiver and arrow names; in each `(source, target)`
//! block of `kQ_2` its relations are the reduced basis of the orthogonal
//! complement of the original relation span.

use num_traits::Zero;

use crate::algebra::{Presentation, RelationElement};
use crate::error::{Error, Result};
use crate::linalg::{orthogonal_complement, Scalar, Subspace};
use crate::quiver::{Path, VertexId};

/// One block of `kQ_2` with the relation span and its complement.
#[derive(Clone, Debug)]
pub struct DualBlock {
    pub source: VertexId,
    pub target: VertexId,
    pub paths: Vec<Path>,
    pub relations: Subspace,
    pub complement: Subspace,
}

#[derive(Clone, Debug)]
pub struct QuadraticPair {
    pub original: Presentation,
    pub dual: Presentation,
    pub blocks: Vec<DualBlock>,
}

fn require_quadratic(p: &Presentation) -> Result<()> {
    match p.relations().iter().find(|r| r.degree() != 2) {
        Some(r) => Err(Error::NotQuadratic(format!("relation `{}` has length {}", r.render(p.quiver()), r.degree()))),
        None => Ok(()),
    }
}

pub fn quadratic_pair(p: &Presentation) -> Result<QuadraticPair> {
    require_quadratic(p)?;
    let q = p.quiver();
    let mut blocks = Vec::new();
    let mut relations = Vec::new();
    for i in q.vertex_ids() {
        for j in q.vertex_ids() {
            let (paths, span) = p.relation_span(2, i, j);
            if paths.is_empty() {
                continue;
            }
            let complement = orthogonal_complement(&span);
            for v in complement.basis_vectors() {
                relations.extend(RelationElement::from_coordinates(&paths, &v));
            }
            blocks.push(DualBlock { source: i, target: j, paths, relations: span, complement });
        }
    }
    let dual = Presentation::new(q.clone(), relations)?;
    Ok(QuadraticPair { original: p.clone(), dual, blocks })
}

/// `Λ^{!,op}` as a presentation on the same quiver.
pub fn quadratic_dual(p: &Presentation) -> Result<Presentation> {
    Ok(quadratic_pair(p)?.dual)
}

/// Coordinate pairing of two combinations in the same block: paths form an
/// orthonormal system.
pub fn pairing(x: &RelationElement, y: &RelationElement) -> Result<Scalar> {
    if (x.source(), x.target(), x.degree()) != (y.source(), y.target(), y.degree()) {
        return Err(Error::BlockMismatch(format!(
            "pairing elements of blocks ({:?}→{:?}, length {}) and ({:?}→{:?}, length {})",
            x.source().0,
            x.target().0,
            x.degree(),
            y.source().0,
            y.target().0,
            y.degree()
        )));
    }
    let mut sum = Scalar::zero();
    for (p, a) in x.terms() {
        if let Some(b) = y.terms().get(p) {
            sum += a * b;
        }
    }
    Ok(sum)
}

/// Whether two quadratic presentations on the same quiver have equal
/// relation spans in every block.
pub fn same_relation_span(a: &Presentation, b: &Presentation) -> Result<bool> {
    if a.quiver() != b.quiver() {
        return Ok(false);
    }
    let q = a.quiver();
    for i in q.vertex_ids() {
        for j in q.vertex_ids() {
            for t in 2..=max_degree(a).max(max_degree(b)) {
                let (_, sa) = a.relation_span(t, i, j);
                let (_, sb) = b.relation_span(t, i, j);
                if sa != sb {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

fn max_degree(p: &Presentation) -> usize {
    p.relations().iter().map(|r| r.degree()).max().unwrap_or(2)
}
