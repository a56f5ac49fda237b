//! End-to-end check that the quadratic dual of `Δ_νΛ` and the preprojective
//! presentation `Π(Λ^{!,op})` cut out orthogonal complements in `kQ̃_2`.

use std::collections::BTreeMap;
use std::fmt;
use std::time::{Duration, Instant};

use num_traits::Zero;
use serde::Serialize;

use crate::algebra::{BasisOrder, GradedBasis, Presentation, RelationElement};
use crate::dual::{pairing, quadratic_dual};
use crate::error::{Error, Result};
use crate::linalg::{orthogonal_complement, Subspace};
use crate::preproj::{preproj_presentation, relation_rank, PreprojPresentation};
use crate::quiver::{Path, VertexId};
use crate::resolution::{finite_bound, koszul_witness_with, KoszulReport};
use crate::trivext::{
    is_trivext_quadratic, returning_arrow_quiver, trivext_relations_with, QuadraticityReport, ReturningArrowQuiver,
    TrivExtAlgebra, TrivExtRelations, TwistSpec,
};

/// Every pairing between the two families vanishes. Both must lie in the
/// mixed part of `kQ̃_2`; elements of different blocks pair to zero.
pub fn verify_orthogonality(
    raq: &ReturningArrowQuiver,
    lhs: &[RelationElement],
    rhs: &[RelationElement],
) -> Result<bool> {
    for r in lhs.iter().chain(rhs) {
        let mixed = r.degree() == 2
            && r.terms().keys().all(|p| p.arrows().iter().filter(|a| !raq.is_original(**a)).count() == 1);
        if !mixed {
            return Err(Error::BlockMismatch(format!("`{}` is not in the mixed block", r.render(&raq.quiver))));
        }
    }
    pairwise_orthogonal(lhs, rhs)
}

fn pairwise_orthogonal(lhs: &[RelationElement], rhs: &[RelationElement]) -> Result<bool> {
    for x in lhs {
        for y in rhs {
            if (x.source(), x.target(), x.degree()) != (y.source(), y.target(), y.degree()) {
                continue;
            }
            if !pairing(x, y)?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StageStatus {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for StageStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StageStatus::Pass => "PASS",
            StageStatus::Fail => "FAIL",
            StageStatus::Skipped => "SKIPPED",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct StageResult {
    pub number: usize,
    pub name: &'static str,
    pub status: StageStatus,
    pub details: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    HypothesisUnmet,
    Violation,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Pass => 0,
            Outcome::HypothesisUnmet => 1,
            Outcome::Violation => 2,
        }
    }
}

/// One `(source, target)` block of `kQ̃_2`.
#[derive(Clone, Debug, Serialize)]
pub struct BlockRow {
    pub source: String,
    pub target: String,
    pub paths: usize,
    pub dim_rho_nu: usize,
    pub dim_rho_star: usize,
    pub complement_equal: bool,
}

/// Graded dimensions of two presentations on the same quiver.
#[derive(Clone, Debug, Serialize)]
pub struct GradedComparison {
    pub depth: usize,
    pub dims_a: Vec<usize>,
    pub dims_b: Vec<usize>,
    /// Per degree, `(source, target, dim a, dim b)` for every nonzero block.
    pub blocks: Vec<Vec<(String, String, usize, usize)>>,
    pub first_mismatch: Option<usize>,
}

impl GradedComparison {
    pub fn equal(&self) -> bool {
        self.first_mismatch.is_none()
    }
}

/// Compares blockwise graded dimensions of `a` and `b` through `depth`.
pub fn compare_graded_dims(a: &Presentation, b: &Presentation, depth: usize) -> Result<GradedComparison> {
    if a.quiver() != b.quiver() {
        return Err(Error::BlockMismatch("presentations live on different quivers".into()));
    }
    let q = a.quiver();
    let ga = GradedBasis::new(a, depth);
    let gb = GradedBasis::new(b, depth);
    let (ba, bb) = (ga.block_dims(), gb.block_dims());
    let mut blocks = Vec::new();
    let mut first_mismatch = None;
    for t in 0..=depth {
        let mut keys: Vec<(VertexId, VertexId)> = ba[t].keys().chain(bb[t].keys()).copied().collect();
        keys.sort();
        keys.dedup();
        let mut row = Vec::new();
        for (i, j) in keys {
            let (x, y) = (ba[t].get(&(i, j)).copied().unwrap_or(0), bb[t].get(&(i, j)).copied().unwrap_or(0));
            if x != y && first_mismatch.is_none() {
                first_mismatch = Some(t);
            }
            row.push((q.vertex_name(i).to_string(), q.vertex_name(j).to_string(), x, y));
        }
        blocks.push(row);
    }
    Ok(GradedComparison { depth, dims_a: ga.dims(), dims_b: gb.dims(), blocks, first_mismatch })
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub n: Option<usize>,
    pub depth: usize,
    pub dims_lambda: Vec<usize>,
    pub dims_gamma: Vec<usize>,
    pub trivext: Option<QuadraticityReport>,
    pub stages: Vec<StageResult>,
    pub blocks: Vec<BlockRow>,
    pub corroboration: Option<GradedComparison>,
    pub rho_nu: Vec<String>,
    pub rho_star: Vec<String>,
    pub outcome: Outcome,
    pub diagnostic: Option<String>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.outcome == Outcome::Pass
    }

    pub fn stage(&self, number: usize) -> &StageResult {
        &self.stages[number - 1]
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

/// The two relation sets on `Q̃` and the data they were built from.
#[derive(Clone, Debug)]
pub struct TheoremData {
    pub raq: ReturningArrowQuiver,
    pub trivext: TrivExtRelations,
    pub preproj: PreprojPresentation,
}

impl TheoremData {
    pub fn rho_nu(&self) -> Vec<RelationElement> {
        self.trivext.presentation().relations().to_vec()
    }

    pub fn rho_star(&self) -> Vec<RelationElement> {
        self.preproj.presentation().relations().to_vec()
    }

    /// Per block of `kQ̃_2`: paths, `span(tρ̃^ν)`, `span(tρ̃*)`.
    pub fn block_spans(&self) -> Vec<(VertexId, VertexId, usize, Subspace, Subspace)> {
        let q = &self.raq.quiver;
        let nu = self.trivext.presentation();
        let star = self.preproj.presentation();
        let mut out = Vec::new();
        for i in q.vertex_ids() {
            for j in q.vertex_ids() {
                let (paths, a) = nu.relation_span(2, i, j);
                if paths.is_empty() {
                    continue;
                }
                let (_, b) = star.relation_span(2, i, j);
                out.push((i, j, paths.len(), a, b));
            }
        }
        out
    }
}

pub fn theorem_data(gb: &GradedBasis, n: usize) -> Result<TheoremData> {
    let raq = returning_arrow_quiver(gb, n)?;
    let alg = TrivExtAlgebra::new(gb, n, TwistSpec::nu(gb.quiver(), n))?;
    let trivext = trivext_relations_with(&alg, raq.clone())?;
    let preproj = preproj_presentation(gb, n)?;
    Ok(TheoremData { raq, trivext, preproj })
}

fn stage(number: usize, name: &'static str) -> StageResult {
    StageResult { number, name, status: StageStatus::Skipped, details: Vec::new() }
}

fn status(ok: bool) -> StageStatus {
    if ok {
        StageStatus::Pass
    } else {
        StageStatus::Fail
    }
}

fn witness_line(label: &str, r: &KoszulReport, names: &[String]) -> String {
    match r.failure {
        None => format!("{label}: linear resolutions witnessed to depth {}", r.depth),
        Some((v, s, d)) => format!(
            "{label}: simple {} has a generator in homological degree {s}, internal degree {d}",
            names[v.0]
        ),
    }
}

pub fn verify_main_theorem(p: &Presentation, depth: usize) -> VerificationReport {
    verify_main_theorem_with_order(p, depth, BasisOrder::Lex)
}

pub fn verify_main_theorem_with_order(p: &Presentation, depth: usize, order: BasisOrder) -> VerificationReport {
    let start = Instant::now();
    let mut stages = vec![
        stage(1, "n-homogeneous"),
        stage(2, "trivial extension quadratic (twist nu)"),
        stage(3, "Koszul witness for Λ and Γ"),
        stage(4, "orthogonality"),
        stage(5, "blockwise dimension sum"),
        stage(6, "complement equality"),
    ];
    let mut report = VerificationReport {
        n: None,
        depth,
        dims_lambda: Vec::new(),
        dims_gamma: Vec::new(),
        trivext: None,
        stages: Vec::new(),
        blocks: Vec::new(),
        corroboration: None,
        rho_nu: Vec::new(),
        rho_star: Vec::new(),
        outcome: Outcome::HypothesisUnmet,
        diagnostic: None,
        elapsed: Duration::ZERO,
    };
    let finish = |mut report: VerificationReport, stages: Vec<StageResult>| {
        report.stages = stages;
        report.elapsed = start.elapsed();
        report
    };

    // stage 1
    let q = p.quiver();
    if !q.is_acyclic() {
        stages[0].status = StageStatus::Fail;
        stages[0].details.push("quiver has an oriented cycle".into());
        report.diagnostic = Some("quiver has an oriented cycle: theorem hypothesis unmet".into());
        return finish(report, stages);
    }
    let gb = match GradedBasis::finite_with_order(p, finite_bound(p), order) {
        Ok(gb) => gb,
        Err(e) => {
            stages[0].status = StageStatus::Fail;
            stages[0].details.push(e.to_string());
            report.diagnostic = Some(format!("{e}: theorem hypothesis unmet"));
            return finish(report, stages);
        }
    };
    report.dims_lambda = gb.dims();
    let Some(n) = gb.homogeneity_degree() else {
        stages[0].status = StageStatus::Fail;
        let lengths: Vec<String> = gb
            .maximal_bound_paths()
            .unwrap_or_default()
            .iter()
            .map(|(path, t)| format!("{} ({t})", q.render(path)))
            .collect();
        stages[0].details.push(format!("maximal bound paths: {}", lengths.join(", ")));
        report.diagnostic = Some("algebra is not n-homogeneous: theorem hypothesis unmet".into());
        return finish(report, stages);
    };
    report.n = Some(n);
    stages[0].status = StageStatus::Pass;
    stages[0].details.push(format!("every maximal bound path has length n = {n}"));
    if !p.is_quadratic() {
        stages[0].status = StageStatus::Fail;
        stages[0].details.push("presentation has relations of length > 2".into());
        report.diagnostic = Some("presentation is not quadratic: theorem hypothesis unmet".into());
        return finish(report, stages);
    }

    // stage 2
    let alg = TrivExtAlgebra::new(&gb, n, TwistSpec::nu(q, n)).expect("conclusive basis");
    let raq = returning_arrow_quiver(&gb, n).expect("n-homogeneous");
    let rel = trivext_relations_with(&alg, raq.clone()).expect("n-homogeneous");
    let quad = is_trivext_quadratic(&rel, &alg);
    stages[1].status = status(quad.is_quadratic());
    stages[1].details.push(format!("expected dims {:?}, quadratic cover dims {:?}", quad.expected, quad.cover));
    stages[1].details.push(format!(
        "μ_ν on mixed paths: rank {} of {} (target dim DΛ_{} = {})",
        quad.mixed_rank,
        quad.mixed_dim,
        n - 1,
        quad.mixed_target_dim
    ));
    let hypothesis_two = quad.is_quadratic();
    report.trivext = Some(quad.clone());
    if !hypothesis_two {
        let t = quad.first_mismatch().expect("mismatch");
        stages[1].details.push(format!("first mismatch in degree {t}"));
    }

    // stage 3
    let gamma_p = quadratic_dual(p).expect("quadratic");
    let hypothesis_three = match GradedBasis::finite(&gamma_p, finite_bound(&gamma_p)) {
        Ok(gamma) => {
            report.dims_gamma = gamma.dims();
            let names = q.vertex_names();
            let wl = koszul_witness_with(&gb, depth).expect("finite");
            let wg = koszul_witness_with(&gamma, depth).expect("finite");
            stages[2].details.push(witness_line("Λ", &wl, names));
            stages[2].details.push(witness_line("Γ", &wg, names));
            wl.passed() && wg.passed()
        }
        Err(e) => {
            stages[2].details.push(format!("Γ: {e}"));
            false
        }
    };
    stages[2].status = status(hypothesis_three);

    if !hypothesis_two {
        report.diagnostic = Some("trivial extension not quadratic: theorem hypothesis unmet".into());
        return finish(report, stages);
    }

    let data = match preproj_presentation(&gb, n) {
        Ok(preproj) => TheoremData { raq, trivext: rel, preproj },
        Err(e) => {
            stages[3].status = StageStatus::Fail;
            stages[3].details.push(format!("preprojective presentation: {e}"));
            report.outcome = Outcome::Violation;
            report.diagnostic = Some(format!("preprojective presentation failed: {e}"));
            return finish(report, stages);
        }
    };
    let qt = &data.raq.quiver;
    report.rho_nu = data.rho_nu().iter().map(|r| r.render(qt)).collect();
    report.rho_star = data.rho_star().iter().map(|r| r.render(qt)).collect();

    // stage 4
    let zetas = data.preproj.rho_m_perp();
    let mixed_ok = verify_orthogonality(&data.raq, &data.trivext.rho_sigma0, &zetas).unwrap_or(false);
    let base_ok = pairwise_orthogonal(&data.trivext.rho, &data.preproj.rho_perp).unwrap_or(false);
    stages[3].status = status(mixed_ok && base_ok);
    stages[3].details.push(format!(
        "⟨ρ_ν0, ζ⟩ = 0 for {} × {} pairs: {}",
        data.trivext.rho_sigma0.len(),
        zetas.len(),
        if mixed_ok { "yes" } else { "no" }
    ));
    stages[3].details.push(format!("⟨ρ, ρ^⊥⟩ = 0: {}", if base_ok { "yes" } else { "no" }));

    // stages 5 and 6
    let spans = data.block_spans();
    let mut sums_ok = true;
    let mut complements_ok = true;
    for (i, j, paths, a, b) in &spans {
        let equal = orthogonal_complement(a) == *b && orthogonal_complement(b) == *a;
        sums_ok &= a.dim() + b.dim() == *paths;
        complements_ok &= equal;
        report.blocks.push(BlockRow {
            source: qt.vertex_name(*i).to_string(),
            target: qt.vertex_name(*j).to_string(),
            paths: *paths,
            dim_rho_nu: a.dim(),
            dim_rho_star: b.dim(),
            complement_equal: equal,
        });
    }
    let lower_dim = gb.dim(n - 1);
    let zeta_rank = relation_rank(qt, &zetas);
    let prop_ok = zeta_rank == lower_dim;
    stages[4].status = status(sums_ok && prop_ok);
    stages[4].details.push("dim span(ρ̃ν) + dim span(ρ̃*) = dim kQ̃_2 in every block".to_string()
        + if sums_ok { "" } else { ": FAILED" });
    stages[4].details.push(format!("dim span(ρ_M⊥) = {zeta_rank}, dim Λ_{} = {lower_dim}", n - 1));

    let returning_block_ok = returning_block_covered(&data);
    stages[5].status = status(complements_ok && returning_block_ok);
    stages[5].details.push(format!(
        "span(ρ̃ν)^⊥ = span(ρ̃*) and span(ρ̃*)^⊥ = span(ρ̃ν) in all {} blocks: {}",
        spans.len(),
        if complements_ok { "yes" } else { "no" }
    ));
    stages[5].details.push(format!(
        "ρ_M spans every returning-returning block: {}",
        if returning_block_ok { "yes" } else { "no" }
    ));

    // corroboration
    let cover_dual = quadratic_dual(&data.trivext.presentation()).expect("quadratic");
    let corroboration =
        compare_graded_dims(&data.preproj.presentation(), &cover_dual, depth).expect("same quiver");
    let corroborated = corroboration.equal();
    report.corroboration = Some(corroboration);

    let theorem_ok = mixed_ok && base_ok && sums_ok && prop_ok && complements_ok && returning_block_ok && corroborated;
    report.outcome = if !hypothesis_three {
        report.diagnostic = Some("no linear resolution within the depth bound: theorem hypothesis unmet".into());
        Outcome::HypothesisUnmet
    } else if theorem_ok {
        Outcome::Pass
    } else {
        report.diagnostic = Some("theorem violated: the two relation spaces are not complementary".into());
        Outcome::Violation
    };
    finish(report, stages)
}

/// `V_M ⊗ V_M` blocks are spanned by `ρ_M`.
fn returning_block_covered(data: &TheoremData) -> bool {
    let mut blocks: BTreeMap<(VertexId, VertexId), Vec<Path>> = BTreeMap::new();
    for p in data.raq.returning_pairs() {
        blocks.entry((p.source(), p.target())).or_default().push(p);
    }
    blocks.into_iter().all(|((i, j), paths)| {
        let rows = data
            .trivext
            .rho_m
            .iter()
            .filter(|r| r.source() == i && r.target() == j)
            .map(|r| r.to_coordinates(&paths).expect("ρ_M in the returning block"));
        Subspace::span(paths.len(), rows).dim() == paths.len()
    })
}

fn join(v: &[usize]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.n {
            Some(n) => writeln!(f, "n = {n}")?,
            None => writeln!(f, "n = (not homogeneous)")?,
        }
        writeln!(f, "graded dims Λ: {}", join(&self.dims_lambda))?;
        if !self.dims_gamma.is_empty() {
            writeln!(f, "graded dims Γ: {}", join(&self.dims_gamma))?;
        }
        for s in &self.stages {
            writeln!(f, "stage {} {}: {}", s.number, s.name, s.status)?;
            for d in &s.details {
                writeln!(f, "    {d}")?;
            }
        }
        if !self.blocks.is_empty() {
            writeln!(f, "blocks of kQ̃_2 (source -> target: paths, dim ρ̃ν, dim ρ̃*, complement):")?;
            for b in &self.blocks {
                writeln!(
                    f,
                    "    {} -> {}: {}, {}, {}, {}",
                    b.source,
                    b.target,
                    b.paths,
                    b.dim_rho_nu,
                    b.dim_rho_star,
                    if b.complement_equal { "equal" } else { "DIFFERENT" }
                )?;
            }
        }
        if let Some(c) = &self.corroboration {
            writeln!(f, "graded dims of kQ̃/(ρ̃*):            {}", join(&c.dims_a))?;
            writeln!(f, "graded dims of dual of kQ̃/(ρ̃ν):    {}", join(&c.dims_b))?;
            match c.first_mismatch {
                None => writeln!(f, "corroboration: blockwise dims agree through degree {}", c.depth)?,
                Some(t) => writeln!(f, "corroboration: FAILED, first mismatch in degree {t}")?,
            }
        }
        if !self.rho_nu.is_empty() {
            writeln!(f, "relations ρ̃ν:")?;
            for r in &self.rho_nu {
                writeln!(f, "    {r}")?;
            }
        }
        if !self.rho_star.is_empty() {
            writeln!(f, "relations ρ̃*:")?;
            for r in &self.rho_star {
                writeln!(f, "    {r}")?;
            }
        }
        if let Some(d) = &self.diagnostic {
            writeln!(f, "diagnostic: {d}")?;
        }
        let passed = self.stages.iter().filter(|s| s.status == StageStatus::Pass).count();
        write!(
            f,
            "result: {} ({passed} of {} stages passing)",
            match self.outcome {
                Outcome::Pass => "PASS",
                Outcome::HypothesisUnmet => "HYPOTHESIS UNMET",
                Outcome::Violation => "VIOLATION",
            },
            self.stages.len()
        )
    }
}
