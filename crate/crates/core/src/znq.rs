//! Finite windows of the translation quiver `Z|_{n-1}Q` and its τ-slices.
//!
//! Vertices are `(i,t)` for `a ≤ t ≤ b`. Each arrow `α` of `Q` is copied at
//! every level; each returning arrow `β_p` runs from `(t(p),t)` to
//! `(s(p),t+1)`. A `Q̃` path is lifted to the window by starting at some level
//! and moving up one level at every returning arrow, so relations of `Q̃`
//! (`ρ`, `ρ_M` and the untwisted `ρ_0`) are instantiated level by level.
//! Levels never decrease along a path.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::algebra::{GradedBasis, Presentation, RelationElement};
use crate::error::{Error, Result};
use crate::quiver::{ArrowId, Path, Quiver, VertexId};
use crate::resolution::{finite_bound, koszul_witness_with};
use crate::trivext::{
    is_trivext_quadratic, returning_arrow_quiver, trivext_relations_with, ReturningArrowQuiver, TrivExtAlgebra,
    TwistSpec,
};

fn level_name(name: &str, t: i64) -> String {
    format!("({name},{t})")
}

/// Window `[a, b]` of `Z|_{n-1}Q` with its instantiated relations.
#[derive(Clone, Debug)]
pub struct WindowQuiver {
    pub base: Presentation,
    pub n: usize,
    pub a: i64,
    pub b: i64,
    pub raq: ReturningArrowQuiver,
    pub presentation: Presentation,
    lifts: HashMap<(ArrowId, i64), ArrowId>,
}

impl WindowQuiver {
    pub fn quiver(&self) -> &Quiver {
        self.presentation.quiver()
    }

    fn base_count(&self) -> usize {
        self.base.quiver().vertex_count()
    }

    pub fn vertex(&self, i: VertexId, t: i64) -> Option<VertexId> {
        (self.a..=self.b).contains(&t).then(|| VertexId((t - self.a) as usize * self.base_count() + i.0))
    }

    /// `(base vertex, level)` of a window vertex.
    pub fn level_of(&self, v: VertexId) -> (VertexId, i64) {
        (VertexId(v.0 % self.base_count()), self.a + (v.0 / self.base_count()) as i64)
    }

    /// `τ(i,t) = (i,t-1)` where defined in the window.
    pub fn tau(&self, v: VertexId) -> Option<VertexId> {
        let (i, t) = self.level_of(v);
        self.vertex(i, t - 1)
    }

    /// Window copy of a `Q̃` arrow leaving level `t`.
    pub fn arrow(&self, a: ArrowId, t: i64) -> Option<ArrowId> {
        self.lifts.get(&(a, t)).copied()
    }

    /// Lifts a `Q̃` path starting at level `t`; `None` if it leaves the window.
    pub fn lift(&self, p: &Path, t: i64) -> Option<Path> {
        let mut level = t;
        let mut arrows = Vec::with_capacity(p.len());
        for &x in p.arrows() {
            arrows.push(self.arrow(x, level)?);
            if !self.raq.is_original(x) {
                level += 1;
            }
        }
        if arrows.is_empty() {
            return Some(Path::trivial(self.vertex(p.source(), t)?));
        }
        self.quiver().path_from_ids(arrows).ok()
    }
}

/// Builds the window `[a, b]`. `ρ_0` is the untwisted mixed relation set.
pub fn znq_window(p: &Presentation, a: i64, b: i64) -> Result<WindowQuiver> {
    if a > b {
        return Err(Error::WindowTooSmall(format!("empty range [{a}, {b}]")));
    }
    let gb = GradedBasis::finite(p, finite_bound(p))?;
    let n = gb.homogeneity_degree().ok_or(Error::NotHomogeneous)?;
    let raq = returning_arrow_quiver(&gb, n)?;
    let alg = TrivExtAlgebra::new(&gb, n, TwistSpec::identity(p.quiver()))?;
    let rel = trivext_relations_with(&alg, raq.clone())?;

    let q = p.quiver();
    let qt = &raq.quiver;
    let mut vertices = Vec::new();
    for t in a..=b {
        for i in q.vertex_ids() {
            vertices.push(level_name(q.vertex_name(i), t));
        }
    }
    let mut window = Quiver::new(vertices, Vec::<(String, String, String)>::new())?;
    let mut lifts = HashMap::new();
    let vname = |i: VertexId, t: i64| level_name(q.vertex_name(i), t);
    for t in a..=b {
        for x in qt.arrow_ids().filter(|x| raq.is_original(*x)) {
            let arr = qt.arrow(x);
            let id = window.add_arrow(level_name(&arr.name, t), &vname(arr.source, t), &vname(arr.target, t))?;
            lifts.insert((x, t), id);
        }
    }
    for t in a..b {
        for x in raq.returning_arrows() {
            let arr = qt.arrow(x);
            let id = window.add_arrow(level_name(&arr.name, t), &vname(arr.source, t), &vname(arr.target, t + 1))?;
            lifts.insert((x, t), id);
        }
    }

    let mut w = WindowQuiver {
        base: p.clone(),
        n,
        a,
        b,
        raq,
        presentation: Presentation::free(window),
        lifts,
    };
    let mut relations = Vec::new();
    let sources = rel.rho.iter().chain(&rel.rho_m).chain(&rel.rho_sigma0);
    for r in sources {
        for t in a..=b {
            let lifted: Option<Vec<(Path, _)>> =
                r.terms().iter().map(|(path, x)| w.lift(path, t).map(|lp| (lp, x.clone()))).collect();
            if let Some(terms) = lifted {
                relations.push(RelationElement::new(terms)?);
            }
        }
    }
    w.presentation = Presentation::new(w.quiver().clone(), relations)?;
    Ok(w)
}

/// One level per `τ`-orbit, keyed by base vertex name.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SliceSpec {
    pub levels: BTreeMap<String, i64>,
}

impl SliceSpec {
    pub fn constant(q: &Quiver, t: i64) -> Self {
        SliceSpec { levels: q.vertex_names().iter().map(|v| (v.clone(), t)).collect() }
    }

    pub fn from_levels(q: &Quiver, levels: &[i64]) -> Self {
        SliceSpec { levels: q.vertex_names().iter().cloned().zip(levels.iter().copied()).collect() }
    }

    pub fn shifted(&self, by: i64) -> Self {
        SliceSpec { levels: self.levels.iter().map(|(k, v)| (k.clone(), v + by)).collect() }
    }

    /// The window vertices of the slice, validated against the window.
    pub fn vertices(&self, w: &WindowQuiver) -> Result<BTreeSet<VertexId>> {
        let q = w.base.quiver();
        for name in self.levels.keys() {
            q.vertex(name)?;
        }
        let mut out = BTreeSet::new();
        for i in q.vertex_ids() {
            let name = q.vertex_name(i);
            let t = *self
                .levels
                .get(name)
                .ok_or_else(|| Error::InvalidSlice(format!("no level for vertex `{name}`")))?;
            if t <= w.a || t >= w.b {
                return Err(Error::WindowTooSmall(format!(
                    "vertex `{name}` at level {t} is not inside the open range ({}, {})",
                    w.a, w.b
                )));
            }
            out.insert(w.vertex(i, t).expect("inside window"));
        }
        Ok(out)
    }
}

fn reachable(q: &Quiver, from: &BTreeSet<VertexId>, forward: bool) -> BTreeSet<VertexId> {
    let mut seen = BTreeSet::new();
    let mut queue: VecDeque<VertexId> = from.iter().copied().collect();
    while let Some(v) = queue.pop_front() {
        let next: Vec<VertexId> = if forward {
            q.arrows_from(v).map(|a| q.arrow(a).target).collect()
        } else {
            q.arrows_to(v).map(|a| q.arrow(a).source).collect()
        };
        for u in next {
            if seen.insert(u) {
                queue.push_back(u);
            }
        }
    }
    seen
}

/// One vertex per orbit (by construction of [`SliceSpec`]) and convexity:
/// no vertex outside the slice lies on a path between slice vertices.
pub fn is_complete_tau_slice(w: &WindowQuiver, s: &SliceSpec) -> Result<bool> {
    let slice = s.vertices(w)?;
    let after = reachable(w.quiver(), &slice, true);
    let before = reachable(w.quiver(), &slice, false);
    Ok(after.intersection(&before).all(|v| slice.contains(v)))
}

/// Full subquiver on the slice with the window relations whose paths start
/// and end in it. Names keep their levels, e.g. `(1,0)` and `(α,0)`.
pub fn slice_presentation(w: &WindowQuiver, s: &SliceSpec) -> Result<Presentation> {
    if !is_complete_tau_slice(w, s)? {
        return Err(Error::InvalidSlice("level assignment is not convex".into()));
    }
    let slice = s.vertices(w)?;
    let wq = w.quiver();
    let vertices: Vec<String> = slice.iter().map(|v| wq.vertex_name(*v).to_string()).collect();
    let arrows: Vec<(String, String, String)> = wq
        .arrows()
        .iter()
        .filter(|a| slice.contains(&a.source) && slice.contains(&a.target))
        .map(|a| (a.name.clone(), wq.vertex_name(a.source).to_string(), wq.vertex_name(a.target).to_string()))
        .collect();
    let sub = Quiver::new(vertices, arrows)?;
    let mut relations = Vec::new();
    for r in w.presentation.relations() {
        if !slice.contains(&r.source()) || !slice.contains(&r.target()) {
            continue;
        }
        let terms: Result<Vec<(Path, _)>> = r
            .terms()
            .iter()
            .map(|(p, x)| {
                let names: Vec<&str> = p.arrows().iter().map(|a| wq.arrow(*a).name.as_str()).collect();
                Ok((sub.path(&names)?, x.clone()))
            })
            .collect();
        relations.push(RelationElement::new(terms?)?);
    }
    Presentation::new(sub, relations)
}

/// Drops the `,t` level suffix from every vertex and arrow name.
pub fn strip_levels(p: &Presentation) -> Result<Presentation> {
    let strip = |s: &str| -> String {
        match (s.strip_prefix('('), s.rfind(',')) {
            (Some(_), Some(k)) if s.ends_with(')') => s[1..k].to_string(),
            _ => s.to_string(),
        }
    };
    let q = p.quiver();
    let vertices: Vec<String> = q.vertex_names().iter().map(|v| strip(v)).collect();
    let arrows: Vec<(String, String, String)> = q
        .arrows()
        .iter()
        .map(|a| (strip(&a.name), strip(q.vertex_name(a.source)), strip(q.vertex_name(a.target))))
        .collect();
    let nq = Quiver::new(vertices, arrows)?;
    let relations = p
        .relations()
        .iter()
        .map(|r| {
            let terms = r.terms().iter().map(|(path, x)| {
                (nq.path_from_ids(path.arrows().to_vec()).expect("same arrow ids"), x.clone())
            });
            RelationElement::new(terms)
        })
        .collect::<Result<Vec<_>>>()?;
    Presentation::new(nq, relations)
}

#[derive(Clone, Debug, Serialize)]
pub struct Characterization {
    pub acyclic: bool,
    pub n: Option<usize>,
    /// `Λ` is a τ-slice algebra, equivalently `n`-homogeneous.
    pub tau_slice: bool,
    /// Quadratic cover of the untwisted `ΔΛ` matches its dimensions.
    pub trivext_quadratic: Option<bool>,
    /// Linear resolutions of all simples to `depth`.
    pub koszul_witness: Option<bool>,
    pub depth: usize,
    pub notes: Vec<String>,
}

pub fn characterize(p: &Presentation, depth: usize) -> Characterization {
    let mut c = Characterization {
        acyclic: p.quiver().is_acyclic(),
        n: None,
        tau_slice: false,
        trivext_quadratic: None,
        koszul_witness: None,
        depth,
        notes: Vec::new(),
    };
    if !c.acyclic {
        c.notes.push("quiver has an oriented cycle; the characterizations need an acyclic quiver".into());
        return c;
    }
    let gb = match GradedBasis::finite(p, finite_bound(p)) {
        Ok(gb) => gb,
        Err(e) => {
            c.notes.push(e.to_string());
            return c;
        }
    };
    c.n = gb.homogeneity_degree();
    c.tau_slice = c.n.is_some();
    if p.is_quadratic() {
        c.koszul_witness = koszul_witness_with(&gb, depth).ok().map(|r| r.passed());
    } else {
        c.notes.push("presentation is not quadratic; no Koszul witness".into());
    }
    if let Some(n) = c.n {
        let alg = TrivExtAlgebra::new(&gb, n, TwistSpec::identity(p.quiver())).expect("conclusive basis");
        let raq = returning_arrow_quiver(&gb, n).expect("n-homogeneous");
        let rel = trivext_relations_with(&alg, raq).expect("n-homogeneous");
        c.trivext_quadratic = Some(is_trivext_quadratic(&rel, &alg).is_quadratic());
        if n % 2 == 1 {
            c.notes.push(format!(
                "n = {n} is odd: the window uses the untwisted mixed relations; whether the ν-twisted ones belong there is open"
            ));
        }
    } else {
        c.notes.push("maximal bound paths have different lengths, so Λ is not a τ-slice algebra".into());
    }
    c
}

impl fmt::Display for Characterization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let yn = |b: bool| if b { "yes" } else { "no" };
        let opt = |b: Option<bool>| b.map_or("n/a", yn);
        writeln!(f, "acyclic: {}", yn(self.acyclic))?;
        match self.n {
            Some(n) => writeln!(f, "τ-slice algebra: yes (n = {n})")?,
            None => writeln!(f, "τ-slice algebra: no")?,
        }
        writeln!(f, "trivial extension quadratic: {}", opt(self.trivext_quadratic))?;
        write!(f, "Koszul witness (depth {}): {}", self.depth, opt(self.koszul_witness))?;
        for note in &self.notes {
            write!(f, "\nnote: {note}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn type_a_window() {
        let w = znq_window(&fixtures::a_rad_square_zero(3), 0, 1).unwrap();
        let q = w.quiver();
        assert_eq!(q.vertex_count(), 6);
        assert_eq!(q.arrow_count(), 6);
        let ret = q.arrow(q.arrow_id("(ret:α,0)").unwrap());
        assert_eq!((q.vertex_name(ret.source), q.vertex_name(ret.target)), ("(2,0)", "(1,1)"));
        let ret = q.arrow(q.arrow_id("(ret:β,0)").unwrap());
        assert_eq!((q.vertex_name(ret.source), q.vertex_name(ret.target)), ("(3,0)", "(2,1)"));
        assert_eq!(w.tau(q.vertex("(2,1)").unwrap()), Some(q.vertex("(2,0)").unwrap()));
        assert_eq!(w.tau(q.vertex("(2,0)").unwrap()), None);
    }

    #[test]
    fn single_level_window_is_the_base() {
        let p = fixtures::a_rad_square_zero(3);
        let w = znq_window(&p, 0, 0).unwrap();
        assert_eq!(w.quiver().arrow_count(), 2);
        assert_eq!(w.presentation.render_relations(), ["(β,0)·(α,0)"]);
    }

    #[test]
    fn beilinson_window() {
        let w = znq_window(&fixtures::beilinson(), 0, 1).unwrap();
        let q = w.quiver();
        let returning: Vec<_> = q.arrows().iter().filter(|a| a.name.starts_with("(ret:")).collect();
        assert_eq!(returning.len(), 1);
        assert_eq!((q.vertex_name(returning[0].source), q.vertex_name(returning[0].target)), ("(2,0)", "(0,1)"));
    }

    #[test]
    fn slices_of_type_a() {
        let p = fixtures::a_rad_square_zero(3);
        let w = znq_window(&p, -1, 2).unwrap();
        let q = p.quiver();
        assert!(is_complete_tau_slice(&w, &SliceSpec::constant(q, 0)).unwrap());
        assert!(is_complete_tau_slice(&w, &SliceSpec::from_levels(q, &[1, 0, 0])).unwrap());
        // (2,0) → (3,0) → (2,1) → (3,1) leaves and re-enters the slice
        assert!(!is_complete_tau_slice(&w, &SliceSpec::from_levels(q, &[0, 0, 1])).unwrap());
        assert!(!is_complete_tau_slice(&w, &SliceSpec::from_levels(q, &[1, 0, 1])).unwrap());
        let err = is_complete_tau_slice(&w, &SliceSpec::constant(q, 2)).unwrap_err();
        assert!(matches!(err, Error::WindowTooSmall(_)));
    }

    #[test]
    fn constant_slice_is_the_base_presentation() {
        let p = fixtures::a_rad_square_zero(3);
        let w = znq_window(&p, -2, 2).unwrap();
        let s = slice_presentation(&w, &SliceSpec::constant(p.quiver(), 0)).unwrap();
        assert_eq!(strip_levels(&s).unwrap(), p);
    }

    #[test]
    fn characterizations() {
        let c = characterize(&fixtures::a_rad_square_zero(3), 6);
        assert_eq!((c.tau_slice, c.n, c.koszul_witness), (true, Some(1), Some(true)));
        let c = characterize(&fixtures::beilinson(), 6);
        assert_eq!((c.tau_slice, c.n), (true, Some(2)));
        let q = Quiver::from_names(&["1", "2", "3", "4"], &[("a", "1", "2"), ("b", "1", "3"), ("c", "3", "4")]).unwrap();
        let c = characterize(&Presentation::free(q), 6);
        assert!(!c.tau_slice);
    }
}
