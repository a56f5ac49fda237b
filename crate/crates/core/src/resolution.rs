//! Minimal graded projective resolutions of the simple modules.
//!
//! Modules are left modules: `Λe_v` has basis the paths starting at `v`, and
//! an arrow acts by appending itself to the path. A free module is a list of
//! generators `(internal degree, vertex)`; its degree-`d` part at vertex `j`
//! has basis `(g, m)` with `m ∈ M_{d - deg g}` running from `v_g` to `j`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Zero};

use crate::algebra::{GradedBasis, Presentation};
use crate::error::{Error, Result};
use crate::linalg::{kernel, Matrix, Scalar, SparseVec, Subspace};
use crate::quiver::VertexId;

/// Element of a free module in a fixed internal degree:
/// `(generator, index into M_{degree - deg g})` ↦ coefficient.
pub type FreeElement = BTreeMap<(usize, usize), Scalar>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Generator {
    pub degree: usize,
    pub vertex: VertexId,
}

/// One term `F_s` of the resolution with its differential into `F_{s-1}`.
#[derive(Clone, Debug, Default)]
pub struct Stage {
    pub generators: Vec<Generator>,
    /// Image of each generator in `F_{s-1}`, in the generator's degree.
    /// Empty for `s = 0`.
    pub images: Vec<FreeElement>,
}

impl Stage {
    /// Internal degree ↦ vertex ↦ multiplicity.
    pub fn multiplicities(&self) -> BTreeMap<usize, BTreeMap<VertexId, usize>> {
        let mut out: BTreeMap<usize, BTreeMap<VertexId, usize>> = BTreeMap::new();
        for g in &self.generators {
            *out.entry(g.degree).or_default().entry(g.vertex).or_insert(0) += 1;
        }
        out
    }

    /// Sorted distinct internal degrees of the generators.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.generators.iter().map(|g| g.degree).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct Resolution {
    pub vertex: VertexId,
    pub stages: Vec<Stage>,
    /// Some `F_s` vanished, so the resolution is complete.
    pub finished: bool,
}

impl Resolution {
    /// Checks `d_{s-1} ∘ d_s = 0` on every generator.
    pub fn is_complex(&self, gb: &GradedBasis) -> bool {
        (2..self.stages.len()).all(|s| {
            let (lower, upper) = (&self.stages[s - 2], &self.stages[s - 1]);
            self.stages[s]
                .generators
                .iter()
                .zip(&self.stages[s].images)
                .all(|(g, img)| differential(gb, &lower.generators, upper, g.degree, img).is_empty())
        })
    }

    /// Generators of `F_s` all sit in internal degree `s`.
    pub fn is_linear(&self) -> bool {
        self.stages.iter().enumerate().all(|(s, st)| st.generators.iter().all(|g| g.degree == s))
    }

    /// First `(homological degree, internal degree)` breaking linearity.
    pub fn first_nonlinear(&self) -> Option<(usize, usize)> {
        self.stages
            .iter()
            .enumerate()
            .find_map(|(s, st)| st.generators.iter().find(|g| g.degree != s).map(|g| (s, g.degree)))
    }
}

/// `d(x)` for `x ∈ F_s` of internal degree `degree`; `upper = F_s` carries
/// the images and `lower_gens` are the generators of `F_{s-1}`.
fn differential(
    gb: &GradedBasis,
    lower_gens: &[Generator],
    upper: &Stage,
    degree: usize,
    x: &FreeElement,
) -> FreeElement {
    let mut out = FreeElement::new();
    for (&(g, mi), c) in x {
        let gen = upper.generators[g];
        let m = &gb.basis(degree - gen.degree)[mi];
        for (&(h, ki), y) in &upper.images[g] {
            let mprime = &gb.basis(gen.degree - lower_gens[h].degree)[ki];
            let prod = gb.compose(mprime, m).expect("degree within computed range");
            for (k, z) in prod {
                *out.entry((h, k)).or_insert_with(Scalar::zero) += c * y * z;
            }
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// Basis `(g, m)` of the degree-`d` part of a free module at vertex `j`.
fn block_basis(gb: &GradedBasis, gens: &[Generator], d: usize, j: VertexId) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (g, gen) in gens.iter().enumerate() {
        if gen.degree > d {
            continue;
        }
        for (mi, m) in gb.basis(d - gen.degree).iter().enumerate() {
            if m.source() == gen.vertex && m.target() == j {
                out.push((g, mi));
            }
        }
    }
    out
}

struct KernelBlock {
    basis: Vec<(usize, usize)>,
    kernel: Subspace,
}

/// Minimal resolution of the simple at `i`, through `F_depth`.
pub fn minimal_resolution(gb: &GradedBasis, i: VertexId, depth: usize) -> Result<Resolution> {
    if !gb.is_conclusive() {
        return Err(Error::NotFiniteDimensional(gb.max_degree()));
    }
    let q = gb.quiver();
    let top = gb.top_degree();
    let mut stages = vec![Stage { generators: vec![Generator { degree: 0, vertex: i }], images: Vec::new() }];
    let mut finished = false;
    while stages.len() <= depth {
        let s = stages.len() - 1;
        let current = &stages[s];
        let lower_gens: &[Generator] = if s == 0 { &[] } else { &stages[s - 1].generators };
        let dmin = current.generators.iter().map(|g| g.degree).min().expect("nonempty stage");
        let dmax = current.generators.iter().map(|g| g.degree).max().expect("nonempty stage") + top;

        let mut kernels: HashMap<(usize, VertexId), KernelBlock> = HashMap::new();
        let mut next = Stage::default();
        for d in dmin..=dmax {
            for j in q.vertex_ids() {
                let basis = block_basis(gb, &current.generators, d, j);
                let kernel_space = if s == 0 {
                    if d == 0 {
                        Subspace::zero(basis.len())
                    } else {
                        Subspace::full(basis.len())
                    }
                } else {
                    let rows = block_basis(gb, lower_gens, d, j);
                    let row_index: HashMap<(usize, usize), usize> =
                        rows.iter().enumerate().map(|(k, key)| (*key, k)).collect();
                    let mut mat = Matrix::zeros(rows.len(), basis.len());
                    for (c, key) in basis.iter().enumerate() {
                        let unit = FreeElement::from([(*key, Scalar::one())]);
                        for (target, x) in differential(gb, lower_gens, current, d, &unit) {
                            mat.set(row_index[&target], c, x);
                        }
                    }
                    kernel(&mat)
                };

                // radical of the kernel: arrows acting on the degree d-1 part
                let index: HashMap<(usize, usize), usize> =
                    basis.iter().enumerate().map(|(k, key)| (*key, k)).collect();
                let mut radical_rows = Vec::new();
                if d > 0 {
                    for a in q.arrows_to(j) {
                        let from = q.arrow(a).source;
                        let Some(block) = kernels.get(&(d - 1, from)) else { continue };
                        for v in block.kernel.basis_vectors() {
                            let mut row = vec![Scalar::zero(); basis.len()];
                            for (pos, x) in v.iter().enumerate() {
                                if x.is_zero() {
                                    continue;
                                }
                                let (g, mi) = block.basis[pos];
                                let t = d - 1 - current.generators[g].degree;
                                let ext = gb.extend(t, &SparseVec::from([(mi, Scalar::one())]), a)?;
                                for (k, y) in ext {
                                    row[index[&(g, k)]] += x * y;
                                }
                            }
                            radical_rows.push(row);
                        }
                    }
                }
                let mut span = Subspace::span(basis.len(), radical_rows.clone());
                for v in kernel_space.basis_vectors() {
                    if span.contains(&v) {
                        continue;
                    }
                    let image: FreeElement = v
                        .iter()
                        .enumerate()
                        .filter(|(_, x)| !x.is_zero())
                        .map(|(k, x)| (basis[k], x.clone()))
                        .collect();
                    next.generators.push(Generator { degree: d, vertex: j });
                    next.images.push(image);
                    radical_rows.push(v);
                    span = Subspace::span(basis.len(), radical_rows.clone());
                }
                kernels.insert((d, j), KernelBlock { basis, kernel: kernel_space });
            }
        }
        if next.is_empty() {
            finished = true;
            break;
        }
        stages.push(next);
    }
    Ok(Resolution { vertex: i, stages, finished })
}

/// Builds the graded basis (refusing infinite-dimensional algebras) and
/// resolves the simple at `i`.
pub fn minimal_resolution_of_simple(p: &Presentation, i: VertexId, depth: usize) -> Result<Resolution> {
    let gb = GradedBasis::finite(p, finite_bound(p))?;
    minimal_resolution(&gb, i, depth)
}

/// Degree cap used when probing finite-dimensionality of a cyclic quiver.
pub fn finite_bound(p: &Presentation) -> usize {
    64.max(p.quiver().vertex_count() + 1)
}

/// `max(2(n+1), 6)`.
pub fn default_depth(n: Option<usize>) -> usize {
    n.map_or(6, |n| (2 * (n + 1)).max(6))
}

#[derive(Clone, Debug)]
pub struct KoszulReport {
    pub depth: usize,
    pub resolutions: Vec<Resolution>,
    /// `(vertex, homological degree, internal degree)` of the first
    /// generator off the diagonal.
    pub failure: Option<(VertexId, usize, usize)>,
}

impl KoszulReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// Bounded Koszulity certificate: every simple has a linear resolution
/// through homological degree `depth`.
pub fn koszul_witness(p: &Presentation, depth: usize) -> Result<KoszulReport> {
    if let Some(r) = p.relations().iter().find(|r| r.degree() != 2) {
        return Err(Error::NotQuadratic(format!("relation `{}` has length {}", r.render(p.quiver()), r.degree())));
    }
    let gb = GradedBasis::finite(p, finite_bound(p))?;
    koszul_witness_with(&gb, depth)
}

pub fn koszul_witness_with(gb: &GradedBasis, depth: usize) -> Result<KoszulReport> {
    let mut resolutions = Vec::new();
    let mut failure = None;
    for v in gb.quiver().vertex_ids() {
        let r = minimal_resolution(gb, v, depth)?;
        if failure.is_none() {
            failure = r.first_nonlinear().map(|(s, d)| (v, s, d));
        }
        resolutions.push(r);
    }
    Ok(KoszulReport { depth, resolutions, failure })
}

pub struct ReportDisplay<'a> {
    pub report: &'a KoszulReport,
    pub names: &'a [String],
}

impl fmt::Display for ReportDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.report;
        for res in &r.resolutions {
            let degrees: Vec<String> = res
                .stages
                .iter()
                .map(|st| {
                    let ds: Vec<String> = st.degrees().iter().map(|d| d.to_string()).collect();
                    format!("{{{}}}", ds.join(","))
                })
                .collect();
            let tail = if res.finished { " (projective resolution complete)" } else { "" };
            writeln!(f, "  simple {}: generator degrees {}{}", self.names[res.vertex.0], degrees.join(" "), tail)?;
        }
        match r.failure {
            None => write!(f, "  linear resolutions: certified to depth {}", r.depth),
            Some((v, s, d)) => write!(
                f,
                "  linear resolutions: FAILED at simple {}, homological degree {s}, internal degree {d}",
                self.names[v.0]
            ),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::RelationElement;
    use crate::fixtures;
    use crate::linalg::int;

    #[test]
    fn type_a_simple_at_source() {
        let p = fixtures::a_rad_square_zero(3);
        let r = minimal_resolution_of_simple(&p, VertexId(0), 2).unwrap();
        let degrees: Vec<Vec<usize>> = r.stages.iter().map(|s| s.degrees()).collect();
        assert_eq!(degrees, vec![vec![0], vec![1], vec![2]]);
        let vertices: Vec<VertexId> = r.stages.iter().map(|s| s.generators[0].vertex).collect();
        assert_eq!(vertices, vec![VertexId(0), VertexId(1), VertexId(2)]);
    }

    #[test]
    fn sink_simple_is_projective() {
        let p = fixtures::a_rad_square_zero(3);
        let r = minimal_resolution_of_simple(&p, VertexId(2), 4).unwrap();
        assert_eq!(r.stages.len(), 1);
        assert!(r.finished);
    }

    #[test]
    fn beilinson_is_linear() {
        let gb = GradedBasis::finite(&fixtures::beilinson(), 8).unwrap();
        let r = minimal_resolution(&gb, VertexId(0), 3).unwrap();
        assert!(r.is_linear());
        assert!(r.is_complex(&gb));
        let report = koszul_witness(&fixtures::beilinson(), 6).unwrap();
        assert!(report.passed());
    }

    #[test]
    fn non_quadratic_is_refused() {
        let p = fixtures::a_path_algebra(4);
        let q = p.quiver().clone();
        let cubic = RelationElement::new([(q.path(&["α", "β", "γ"]).unwrap(), int(1))]).unwrap();
        let quad = RelationElement::new([(q.path(&["α", "β"]).unwrap(), int(1))]).unwrap();
        let p = Presentation::new(q, vec![quad, cubic]).unwrap();
        assert!(matches!(koszul_witness(&p, 6), Err(Error::NotQuadratic(_))));
    }

    #[test]
    fn cubic_relation_gives_nonlinear_resolution() {
        let p = fixtures::a_path_algebra(4);
        let q = p.quiver().clone();
        let cubic = RelationElement::new([(q.path(&["α", "β", "γ"]).unwrap(), int(1))]).unwrap();
        let p = Presentation::new(q, vec![cubic]).unwrap();
        let r = minimal_resolution_of_simple(&p, VertexId(0), 3).unwrap();
        assert_eq!(r.first_nonlinear(), Some((2, 3)));
    }

    #[test]
    fn default_depths() {
        assert_eq!(default_depth(Some(1)), 6);
        assert_eq!(default_depth(Some(3)), 8);
        assert_eq!(default_depth(None), 6);
    }
}
