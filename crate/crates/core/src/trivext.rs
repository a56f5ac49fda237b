//! Twisted trivial extensions `Λ ⋉ DΛ^σ` and their quadratic presentations.
//!
//! Elements are pairs `(a, f)` with `a ∈ Λ` and `f ∈ DΛ`, written over the
//! path basis `M` and its dual basis. The product is
//! `(a, f)(b, g) = (ab, a·g + f·σ(b))` with `(a·g)(z) = g(za)` and
//! `(f·b)(z) = f(bz)`; `DΛ` squares to zero. Products are in composition
//! order: `xy` means "`y` first, then `x`".
//!
//! Grading: `Λ̃_t = Λ_t ⊕ DΛ_{n+1-t}`, so the duals of `M_n` sit in degree 1
//! and become the returning arrows `β_p: t(p) → s(p)`.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use crate::algebra::{GradedBasis, Presentation, RelationElement};
use crate::error::{Error, Result};
use crate::linalg::{fmt_scalar, kernel, Matrix, Scalar, SparseVec};
use crate::quiver::{ArrowId, Path, Quiver, VertexId};

/// Prefix of returning-arrow names; the rest is the rendered path.
pub const RETURNING_PREFIX: &str = "ret:";

/// `Q̃`: the quiver with one reversed arrow per element of `M_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReturningArrowQuiver {
    pub quiver: Quiver,
    pub original_arrows: usize,
    /// `returning[k]` is the path of the arrow with id `original_arrows + k`.
    pub returning: Vec<Path>,
    pub n: usize,
}

impl ReturningArrowQuiver {
    pub fn is_original(&self, a: ArrowId) -> bool {
        a.0 < self.original_arrows
    }

    pub fn returning_path(&self, a: ArrowId) -> Option<&Path> {
        a.0.checked_sub(self.original_arrows).and_then(|k| self.returning.get(k))
    }

    pub fn returning_arrow(&self, p: &Path) -> Option<ArrowId> {
        self.returning.iter().position(|x| x == p).map(|k| ArrowId(self.original_arrows + k))
    }

    pub fn returning_arrows(&self) -> impl Iterator<Item = ArrowId> + '_ {
        (0..self.returning.len()).map(|k| ArrowId(self.original_arrows + k))
    }

    /// Length-2 paths of `Q̃` with exactly one returning arrow, from `i` to `j`.
    pub fn mixed_paths(&self, i: VertexId, j: VertexId) -> Vec<Path> {
        self.quiver
            .paths_of_length(2, i, j)
            .into_iter()
            .filter(|p| p.arrows().iter().filter(|a| !self.is_original(**a)).count() == 1)
            .collect()
    }

    /// All composable pairs of returning arrows.
    pub fn returning_pairs(&self) -> Vec<Path> {
        let mut out = Vec::new();
        for a in self.returning_arrows() {
            for b in self.returning_arrows() {
                if self.quiver.arrow(a).target == self.quiver.arrow(b).source {
                    out.push(self.quiver.path_from_ids(vec![a, b]).expect("composable"));
                }
            }
        }
        out.sort();
        out
    }
}

/// Adds `β_p: t(p) → s(p)` for each `p ∈ M_n`.
pub fn returning_arrow_quiver(gb: &GradedBasis, n: usize) -> Result<ReturningArrowQuiver> {
    let top = gb.top_degree_basis(n)?;
    let mut quiver = gb.quiver().clone();
    let original_arrows = quiver.arrow_count();
    for p in &top {
        let rendered = gb.quiver().render(p);
        let name = if p.len() > 1 { format!("{RETURNING_PREFIX}({rendered})") } else { format!("{RETURNING_PREFIX}{rendered}") };
        let (from, to) = (quiver.vertex_name(p.target()).to_string(), quiver.vertex_name(p.source()).to_string());
        quiver.add_arrow(name, &from, &to)?;
    }
    Ok(ReturningArrowQuiver { quiver, original_arrows, returning: top, n })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TwistKind {
    Identity,
    /// `α ↦ (-1)^n α` on every arrow.
    Nu(usize),
    Custom,
}

/// A graded automorphism of `Λ` scaling each arrow by a unit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistSpec {
    pub kind: TwistKind,
    scalars: Vec<Scalar>,
}

impl TwistSpec {
    pub fn identity(q: &Quiver) -> Self {
        TwistSpec { kind: TwistKind::Identity, scalars: vec![Scalar::one(); q.arrow_count()] }
    }

    pub fn nu(q: &Quiver, n: usize) -> Self {
        let s = if n % 2 == 0 { Scalar::one() } else { -Scalar::one() };
        TwistSpec { kind: TwistKind::Nu(n), scalars: vec![s; q.arrow_count()] }
    }

    /// Arbitrary nonzero per-arrow scalars. Only automorphisms if the
    /// relations are preserved, which the caller must ensure.
    pub fn custom(scalars: Vec<Scalar>) -> Result<Self> {
        if scalars.iter().any(|x| x.is_zero()) {
            return Err(Error::Inconsistent("twist scalars must be nonzero".into()));
        }
        Ok(TwistSpec { kind: TwistKind::Custom, scalars })
    }

    pub fn arrow_scalar(&self, a: ArrowId) -> &Scalar {
        &self.scalars[a.0]
    }

    pub fn path_scalar(&self, p: &Path) -> Scalar {
        p.arrows().iter().fold(Scalar::one(), |acc, a| acc * &self.scalars[a.0])
    }

    pub fn label(&self) -> String {
        match self.kind {
            TwistKind::Identity => "identity".into(),
            TwistKind::Nu(n) => format!("nu (n = {n})"),
            TwistKind::Custom => "custom".into(),
        }
    }
}

/// Element of `Λ ⋉ DΛ`. Keys are `(degree t, index into M_t)`; a dual key
/// `(t, k)` stands for `(M_t[k])*`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TrivElement {
    pub lambda: BTreeMap<(usize, usize), Scalar>,
    pub dual: BTreeMap<(usize, usize), Scalar>,
}

impl TrivElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_path(t: usize, k: usize) -> Self {
        TrivElement { lambda: BTreeMap::from([((t, k), Scalar::one())]), dual: BTreeMap::new() }
    }

    pub fn from_dual(t: usize, k: usize) -> Self {
        TrivElement { lambda: BTreeMap::new(), dual: BTreeMap::from([((t, k), Scalar::one())]) }
    }

    pub fn is_zero(&self) -> bool {
        self.lambda.is_empty() && self.dual.is_empty()
    }

    pub fn add_scaled(&mut self, other: &TrivElement, c: &Scalar) {
        for (k, x) in &other.lambda {
            push(&mut self.lambda, *k, x * c);
        }
        for (k, x) in &other.dual {
            push(&mut self.dual, *k, x * c);
        }
    }

    pub fn scaled(&self, c: &Scalar) -> TrivElement {
        let mut out = TrivElement::zero();
        out.add_scaled(self, c);
        out
    }
}

fn push(map: &mut BTreeMap<(usize, usize), Scalar>, key: (usize, usize), x: Scalar) {
    let e = map.entry(key).or_insert_with(Scalar::zero);
    *e += x;
    if e.is_zero() {
        map.remove(&key);
    }
}

/// `Δ_σΛ` realized through multiplication on basis elements.
#[derive(Clone, Debug)]
pub struct TrivExtAlgebra {
    gb: GradedBasis,
    n: usize,
    twist: TwistSpec,
}

impl TrivExtAlgebra {
    pub fn new(gb: &GradedBasis, n: usize, twist: TwistSpec) -> Result<Self> {
        if !gb.is_conclusive() {
            return Err(Error::DegreeNotComputed(gb.max_degree() + 1));
        }
        Ok(TrivExtAlgebra { gb: gb.clone(), n, twist })
    }

    pub fn graded_basis(&self) -> &GradedBasis {
        &self.gb
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn twist(&self) -> &TwistSpec {
        &self.twist
    }

    /// `dim Λ_t + dim Λ_{n+1-t}`.
    pub fn degree_dim(&self, t: usize) -> usize {
        let dual = if t <= self.n + 1 { self.gb.dim(self.n + 1 - t) } else { 0 };
        self.gb.dim(t) + dual
    }

    pub fn dim(&self) -> usize {
        2 * self.gb.total_dim()
    }

    /// Every basis element: `Λ` paths first, then their duals.
    pub fn basis(&self) -> Vec<TrivElement> {
        let mut out = Vec::new();
        for t in 0..=self.gb.top_degree() {
            out.extend((0..self.gb.dim(t)).map(|k| TrivElement::from_path(t, k)));
        }
        for t in 0..=self.gb.top_degree() {
            out.extend((0..self.gb.dim(t)).map(|k| TrivElement::from_dual(t, k)));
        }
        out
    }

    fn path_product(&self, first: &Path, second: &Path) -> SparseVec {
        if first.len() + second.len() > self.gb.max_degree() {
            return SparseVec::new();
        }
        self.gb.compose(first, second).expect("degree within range")
    }

    pub fn multiply(&self, x: &TrivElement, y: &TrivElement) -> TrivElement {
        let gb = &self.gb;
        let mut out = TrivElement::zero();
        for (&(s, i), c) in &x.lambda {
            let a = &gb.basis(s)[i];
            for (&(s2, j), d) in &y.lambda {
                let b = &gb.basis(s2)[j];
                for (k, z) in self.path_product(b, a) {
                    push(&mut out.lambda, (s + s2, k), c * d * z);
                }
            }
            // a·g with g = m*: coefficient of z* is g(za) = [m] (a then z)
            for (&(k, m), d) in &y.dual {
                if k < s {
                    continue;
                }
                for (zi, z) in gb.basis(k - s).iter().enumerate() {
                    if z.source() != a.target() {
                        continue;
                    }
                    if let Some(w) = self.path_product(a, z).get(&m) {
                        push(&mut out.dual, (k - s, zi), c * d * w);
                    }
                }
            }
        }
        // f·σ(b) with f = m*: coefficient of z* is σ(b)-scaled f(bz) = [m] (z then b)
        for (&(k, m), c) in &x.dual {
            for (&(s, j), d) in &y.lambda {
                if k < s {
                    continue;
                }
                let b = &gb.basis(s)[j];
                let sign = self.twist.path_scalar(b);
                for (zi, z) in gb.basis(k - s).iter().enumerate() {
                    if z.target() != b.source() {
                        continue;
                    }
                    if let Some(w) = self.path_product(z, b).get(&m) {
                        push(&mut out.dual, (k - s, zi), c * d * &sign * w);
                    }
                }
            }
        }
        out
    }

    /// `μ_σ` on a path of `Q̃`: arrows go to `(α, 0)`, returning arrows to
    /// `(0, p*)`, and the path to the product in composition order.
    pub fn mu(&self, raq: &ReturningArrowQuiver, path: &Path) -> TrivElement {
        let v = path.source();
        let mut acc = TrivElement::from_path(0, v.0);
        for &a in path.arrows() {
            let g = match raq.returning_path(a) {
                Some(p) => TrivElement::from_dual(self.n, self.gb.index_of(p).expect("p ∈ M_n")),
                None => {
                    let ap = self.gb.quiver().arrow_path(a);
                    TrivElement::from_path(1, self.gb.index_of(&ap).expect("arrows are a basis of Λ_1"))
                }
            };
            acc = self.multiply(&g, &acc);
            if acc.is_zero() {
                break;
            }
        }
        acc
    }

    /// `μ_σ` of a homogeneous combination of `Q̃` paths.
    pub fn mu_combination(&self, raq: &ReturningArrowQuiver, r: &RelationElement) -> TrivElement {
        let mut out = TrivElement::zero();
        for (p, x) in r.terms() {
            out.add_scaled(&self.mu(raq, p), x);
        }
        out
    }

    /// Renders an element using `M` and starred duals.
    pub fn render(&self, x: &TrivElement) -> String {
        let q = self.gb.quiver();
        let mut parts = Vec::new();
        for (&(t, k), c) in &x.lambda {
            parts.push(format!("{} {}", fmt_scalar(c), q.render(&self.gb.basis(t)[k])));
        }
        for (&(t, k), c) in &x.dual {
            parts.push(format!("{} ({})*", fmt_scalar(c), q.render(&self.gb.basis(t)[k])));
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

/// Coordinates of a trivial-extension element over a fixed key list.
fn coordinates(x: &TrivElement, keys: &HashMap<(bool, usize, usize), usize>, len: usize) -> Vec<Scalar> {
    let mut v = vec![Scalar::zero(); len];
    for (&(t, k), c) in &x.lambda {
        v[keys[&(false, t, k)]] += c;
    }
    for (&(t, k), c) in &x.dual {
        v[keys[&(true, t, k)]] += c;
    }
    v
}

/// `ρ ∪ ρ_M ∪ ρ_{σ,0}` on `Q̃`.
#[derive(Clone, Debug)]
pub struct TrivExtRelations {
    pub raq: ReturningArrowQuiver,
    pub rho: Vec<RelationElement>,
    pub rho_m: Vec<RelationElement>,
    pub rho_sigma0: Vec<RelationElement>,
    /// `dim N`, the span of mixed length-2 paths.
    pub mixed_dim: usize,
    /// Rank of `μ_σ` on `N`.
    pub mixed_rank: usize,
    pub twist: TwistSpec,
}

impl TrivExtRelations {
    pub fn presentation(&self) -> Presentation {
        let mut all = self.rho.clone();
        all.extend(self.rho_m.iter().cloned());
        all.extend(self.rho_sigma0.iter().cloned());
        Presentation::new(self.raq.quiver.clone(), all).expect("relations live on Q̃")
    }
}

pub fn trivext_relations(gb: &GradedBasis, n: usize, twist: &TwistSpec) -> Result<TrivExtRelations> {
    let raq = returning_arrow_quiver(gb, n)?;
    let alg = TrivExtAlgebra::new(gb, n, twist.clone())?;
    trivext_relations_with(&alg, raq)
}

pub fn trivext_relations_with(alg: &TrivExtAlgebra, raq: ReturningArrowQuiver) -> Result<TrivExtRelations> {
    let gb = alg.graded_basis();
    let q = &raq.quiver;
    let rho = gb.presentation().relations().to_vec();
    let rho_m = raq
        .returning_pairs()
        .into_iter()
        .map(|p| RelationElement::new([(p, Scalar::one())]).expect("length two"))
        .collect();

    let mut rho_sigma0 = Vec::new();
    let (mut mixed_dim, mut mixed_rank) = (0, 0);
    for i in q.vertex_ids() {
        for j in q.vertex_ids() {
            let paths = raq.mixed_paths(i, j);
            if paths.is_empty() {
                continue;
            }
            let images: Vec<TrivElement> = paths.iter().map(|p| alg.mu(&raq, p)).collect();
            let mut keys = HashMap::new();
            for x in &images {
                for &(t, k) in x.lambda.keys() {
                    let len = keys.len();
                    keys.entry((false, t, k)).or_insert(len);
                }
                for &(t, k) in x.dual.keys() {
                    let len = keys.len();
                    keys.entry((true, t, k)).or_insert(len);
                }
            }
            let mut m = Matrix::zeros(keys.len(), paths.len());
            for (c, x) in images.iter().enumerate() {
                for (r, v) in coordinates(x, &keys, keys.len()).into_iter().enumerate() {
                    m.set(r, c, v);
                }
            }
            mixed_dim += paths.len();
            mixed_rank += m.rank();
            for v in kernel(&m).basis_vectors() {
                rho_sigma0.extend(RelationElement::from_coordinates(&paths, &v));
            }
        }
    }
    Ok(TrivExtRelations { raq, rho, rho_m, rho_sigma0, mixed_dim, mixed_rank, twist: alg.twist().clone() })
}

/// Applies the twist sign rule to untwisted mixed relations: the coefficient
/// of each path "α then β_p" is divided by the scalar of `α`.
pub fn twist_mixed_relations(
    raq: &ReturningArrowQuiver,
    untwisted: &[RelationElement],
    twist: &TwistSpec,
) -> Vec<RelationElement> {
    untwisted
        .iter()
        .map(|r| {
            let terms = r.terms().iter().map(|(p, x)| {
                let first = p.arrows()[0];
                let c = if raq.is_original(first) { x / twist.arrow_scalar(first) } else { x.clone() };
                (p.clone(), c)
            });
            RelationElement::new(terms).expect("nonzero")
        })
        .collect()
}

/// Quadratic cover dimensions against `dim Λ_t + dim Λ_{n+1-t}`.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct QuadraticityReport {
    pub n: usize,
    /// Degrees `0..=n+2`.
    pub expected: Vec<usize>,
    pub cover: Vec<usize>,
    pub mixed_dim: usize,
    pub mixed_rank: usize,
    /// `dim DΛ_{n-1}`, the target of `μ_σ` on mixed paths.
    pub mixed_target_dim: usize,
}

impl QuadraticityReport {
    pub fn is_quadratic(&self) -> bool {
        self.first_mismatch().is_none()
    }

    pub fn first_mismatch(&self) -> Option<usize> {
        (0..self.expected.len()).find(|&t| self.expected[t] != self.cover[t])
    }
}

/// Compares `kQ̃/(ρ̃)` with `Δ_σΛ` through degree `n+2`.
pub fn is_trivext_quadratic(rel: &TrivExtRelations, alg: &TrivExtAlgebra) -> QuadraticityReport {
    let n = alg.n();
    let cover = GradedBasis::new(&rel.presentation(), n + 2);
    let expected: Vec<usize> = (0..=n + 2).map(|t| alg.degree_dim(t)).collect();
    QuadraticityReport {
        n,
        expected,
        cover: cover.dims(),
        mixed_dim: rel.mixed_dim,
        mixed_rank: rel.mixed_rank,
        mixed_target_dim: if n >= 1 { alg.graded_basis().dim(n - 1) } else { 0 },
    }
}

/// Everything about `Δ_σΛ` for an `n`-homogeneous `Λ`.
#[derive(Clone, Debug)]
pub struct TrivialExtension {
    pub algebra: TrivExtAlgebra,
    pub relations: TrivExtRelations,
    pub quadraticity: QuadraticityReport,
}

impl TrivialExtension {
    pub fn build(gb: &GradedBasis, twist_for: impl FnOnce(&Quiver, usize) -> TwistSpec) -> Result<Self> {
        let n = gb.homogeneity_degree().ok_or(Error::NotHomogeneous)?;
        let twist = twist_for(gb.quiver(), n);
        let algebra = TrivExtAlgebra::new(gb, n, twist)?;
        let raq = returning_arrow_quiver(gb, n)?;
        let relations = trivext_relations_with(&algebra, raq)?;
        let quadraticity = is_trivext_quadratic(&relations, &algebra);
        Ok(TrivialExtension { algebra, relations, quadraticity })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::linalg::int;

    fn a3() -> GradedBasis {
        GradedBasis::finite(&fixtures::a_rad_square_zero(3), 8).unwrap()
    }

    fn rendered(q: &Quiver, rels: &[RelationElement]) -> Vec<String> {
        rels.iter().map(|r| r.render(q)).collect()
    }

    #[test]
    fn returning_arrows() {
        let raq = returning_arrow_quiver(&a3(), 1).unwrap();
        let q = &raq.quiver;
        assert_eq!(q.arrow_count(), 4);
        let b = q.arrow(ArrowId(2));
        assert_eq!((b.name.as_str(), q.vertex_name(b.source), q.vertex_name(b.target)), ("ret:α", "2", "1"));
        let gb = GradedBasis::finite(&fixtures::beilinson(), 8).unwrap();
        let raq = returning_arrow_quiver(&gb, 2).unwrap();
        let b = raq.quiver.arrow(ArrowId(4));
        assert_eq!((b.name.as_str(), b.source, b.target), ("ret:(a1·b0)", VertexId(2), VertexId(0)));
        assert_eq!(returning_arrow_quiver(&gb, 1), Err(Error::NotHomogeneous));
    }

    #[test]
    fn dual_actions() {
        let gb = a3();
        let id = TrivExtAlgebra::new(&gb, 1, TwistSpec::identity(gb.quiver())).unwrap();
        let alpha = TrivElement::from_path(1, 0);
        let alpha_star = TrivElement::from_dual(1, 0);
        assert_eq!(id.multiply(&alpha, &alpha_star), TrivElement::from_dual(0, 1));
        assert_eq!(id.multiply(&alpha_star, &alpha), TrivElement::from_dual(0, 0));
        let nu = TrivExtAlgebra::new(&gb, 1, TwistSpec::nu(gb.quiver(), 1)).unwrap();
        assert_eq!(nu.multiply(&alpha_star, &alpha), TrivElement::from_dual(0, 0).scaled(&int(-1)));
        assert!(id.multiply(&alpha_star, &TrivElement::from_dual(0, 1)).is_zero());
    }

    #[test]
    fn mu_on_paths() {
        let gb = a3();
        let raq = returning_arrow_quiver(&gb, 1).unwrap();
        let alg = TrivExtAlgebra::new(&gb, 1, TwistSpec::identity(gb.quiver())).unwrap();
        let q = &raq.quiver;
        assert_eq!(alg.mu(&raq, &q.path(&["ret:α"]).unwrap()), TrivElement::from_dual(1, 0));
        assert_eq!(alg.mu(&raq, &q.path(&["ret:α", "α"]).unwrap()), TrivElement::from_dual(0, 1));
        assert_eq!(alg.mu(&raq, &q.path(&["β", "ret:β"]).unwrap()), TrivElement::from_dual(0, 1));
        assert!(alg.mu(&raq, &q.path(&["ret:β", "ret:α"]).unwrap()).is_zero());
    }

    #[test]
    fn type_a_relations() {
        let gb = a3();
        let nu = trivext_relations(&gb, 1, &TwistSpec::nu(gb.quiver(), 1)).unwrap();
        let q = nu.raq.quiver.clone();
        assert_eq!(rendered(&q, &nu.rho), ["β·α"]);
        assert_eq!(rendered(&q, &nu.rho_m), ["ret:α·ret:β"]);
        assert_eq!(rendered(&q, &nu.rho_sigma0), ["ret:β·β + α·ret:α"]);
        let id = trivext_relations(&gb, 1, &TwistSpec::identity(gb.quiver())).unwrap();
        assert_eq!(rendered(&q, &id.rho_sigma0), ["ret:β·β - α·ret:α"]);
        let flipped = twist_mixed_relations(&id.raq, &id.rho_sigma0, &TwistSpec::nu(gb.quiver(), 1));
        assert!(flipped[0].proportional_to(&nu.rho_sigma0[0]));
    }

    #[test]
    fn beilinson_relations() {
        let gb = GradedBasis::finite(&fixtures::beilinson(), 8).unwrap();
        let rel = trivext_relations(&gb, 2, &TwistSpec::nu(gb.quiver(), 2)).unwrap();
        assert!(rel.rho_m.is_empty());
        assert!(rel.rho_sigma0.is_empty());
        assert_eq!((rel.mixed_dim, rel.mixed_rank), (4, 4));
    }

    #[test]
    fn quadraticity_examples() {
        let check = |p: &Presentation| {
            let gb = GradedBasis::finite(p, 8).unwrap();
            let te = TrivialExtension::build(&gb, TwistSpec::nu).unwrap();
            te.quadraticity
        };
        let r = check(&fixtures::a_rad_square_zero(3));
        assert!(r.is_quadratic());
        assert_eq!(r.cover, vec![3, 4, 3, 0]);
        assert!(!check(&fixtures::a_path_algebra(2)).is_quadratic());
        assert!(!check(&fixtures::a_path_algebra(3)).is_quadratic());
    }

    #[test]
    fn dimension_is_twice() {
        let gb = GradedBasis::finite(&fixtures::beilinson(), 8).unwrap();
        let alg = TrivExtAlgebra::new(&gb, 2, TwistSpec::identity(gb.quiver())).unwrap();
        assert_eq!(alg.dim(), 16);
        assert_eq!(alg.basis().len(), 16);
        let total: usize = (0..=3).map(|t| alg.degree_dim(t)).sum();
        assert_eq!(total, 16);
    }
}
