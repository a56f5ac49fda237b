//! Small named presentations used in tests, examples and the CLI.

use crate::algebra::{Presentation, RelationElement};
use crate::linalg::int;
use crate::quiver::Quiver;

const GREEK: [&str; 10] = ["α", "β", "γ", "δ", "ε", "η", "θ", "κ", "λ", "μ"];

fn linear_arrow_name(k: usize) -> String {
    GREEK.get(k).map_or_else(|| format!("α{k}"), |s| s.to_string())
}

/// Linear quiver `1 → 2 → … → m`, arrows named α, β, γ, ….
pub fn a_quiver(m: usize) -> Quiver {
    let vertices: Vec<String> = (1..=m).map(|k| k.to_string()).collect();
    let arrows: Vec<(String, String, String)> =
        (1..m).map(|k| (linear_arrow_name(k - 1), k.to_string(), (k + 1).to_string())).collect();
    Quiver::new(vertices, arrows).expect("linear quiver")
}

/// Path algebra of the linear quiver, no relations.
pub fn a_path_algebra(m: usize) -> Presentation {
    Presentation::free(a_quiver(m))
}

/// Linear quiver with every length-2 path killed.
pub fn a_rad_square_zero(m: usize) -> Presentation {
    let q = a_quiver(m);
    let relations = (0..m.saturating_sub(2))
        .map(|k| {
            let p = q.path_from_ids(vec![crate::quiver::ArrowId(k), crate::quiver::ArrowId(k + 1)]).unwrap();
            RelationElement::new([(p, int(1))]).unwrap()
        })
        .collect();
    Presentation::new(q, relations).expect("valid relations")
}

/// `0 ⇉ 1 ⇉ 2` with `b1·a0 + a1·b0`, `a1·a0`, `b1·b0`.
pub fn beilinson() -> Presentation {
    let q = Quiver::from_names(
        &["0", "1", "2"],
        &[("a0", "0", "1"), ("b0", "0", "1"), ("a1", "1", "2"), ("b1", "1", "2")],
    )
    .unwrap();
    let rel = |terms: &[(&[&str], i64)]| {
        RelationElement::new(terms.iter().map(|(p, c)| (q.path(p).unwrap(), int(*c)))).unwrap()
    };
    let relations = vec![
        rel(&[(&["a0", "b1"], 1), (&["b0", "a1"], 1)]),
        rel(&[(&["a0", "a1"], 1)]),
        rel(&[(&["b0", "b1"], 1)]),
    ];
    Presentation::new(q, relations).unwrap()
}

/// `0 ⇉ 1 ⇉ 2` with three arrows per step and exterior-algebra relations
/// `y_i·x_i`, `y_j·x_i + y_i·x_j`. Graded dimensions (3, 6, 3).
pub fn exterior3() -> Presentation {
    let q = Quiver::from_names(
        &["0", "1", "2"],
        &[
            ("x1", "0", "1"),
            ("x2", "0", "1"),
            ("x3", "0", "1"),
            ("y1", "1", "2"),
            ("y2", "1", "2"),
            ("y3", "1", "2"),
        ],
    )
    .unwrap();
    let x = ["x1", "x2", "x3"];
    let y = ["y1", "y2", "y3"];
    let mut relations = Vec::new();
    for i in 0..3 {
        relations.push(RelationElement::new([(q.path(&[x[i], y[i]]).unwrap(), int(1))]).unwrap());
    }
    for i in 0..3 {
        for j in i + 1..3 {
            let terms = [(q.path(&[x[i], y[j]]).unwrap(), int(1)), (q.path(&[x[j], y[i]]).unwrap(), int(1))];
            relations.push(RelationElement::new(terms).unwrap());
        }
    }
    Presentation::new(q, relations).unwrap()
}

/// Kronecker quiver `1 ⇉ 2`.
pub fn kronecker() -> Presentation {
    Presentation::free(Quiver::from_names(&["1", "2"], &[("a", "1", "2"), ("b", "1", "2")]).unwrap())
}
