#![allow(dead_code)]

use pathalg::linalg::{int, Matrix, Scalar};
use pathalg::{Presentation, Quiver, RelationElement};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Acyclic quiver on up to `max_vertices` vertices, arrows only from lower
/// to higher index, at most two parallel arrows per pair.
pub fn random_quiver(rng: &mut ChaCha8Rng, max_vertices: usize) -> Quiver {
    let nv = rng.gen_range(2..=max_vertices);
    let vertices: Vec<String> = (0..nv).map(|i| format!("v{i}")).collect();
    let mut arrows = Vec::new();
    for i in 0..nv {
        for j in i + 1..nv {
            let k = if j == i + 1 { rng.gen_range(0..=2) } else { rng.gen_range(0..=1) * rng.gen_range(0..=1) };
            for c in 0..k {
                arrows.push((format!("x{i}_{j}_{c}"), format!("v{i}"), format!("v{j}")));
            }
        }
    }
    Quiver::new(vertices, arrows).unwrap()
}

pub fn small_scalar(rng: &mut ChaCha8Rng) -> Scalar {
    int(rng.gen_range(-3..=3))
}

/// Random quadratic relations: each length-2 block gets a random number of
/// random vectors.
pub fn random_quadratic(rng: &mut ChaCha8Rng, max_vertices: usize) -> Presentation {
    let q = random_quiver(rng, max_vertices);
    let mut rels = Vec::new();
    for i in q.vertex_ids() {
        for j in q.vertex_ids() {
            let paths = q.paths_of_length(2, i, j);
            if paths.is_empty() {
                continue;
            }
            let count = rng.gen_range(0..=paths.len());
            for _ in 0..count {
                let coords: Vec<Scalar> = paths.iter().map(|_| small_scalar(rng)).collect();
                if let Some(r) = RelationElement::from_coordinates(&paths, &coords) {
                    rels.push(r);
                }
            }
        }
    }
    Presentation::new(q, rels).unwrap()
}

/// Random invertible `n×n` matrix with small integer entries.
pub fn random_invertible(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
    loop {
        let rows: Vec<Vec<Scalar>> = (0..n).map(|_| (0..n).map(|_| small_scalar(rng)).collect()).collect();
        let m = Matrix::from_rows(n, rows);
        if m.rank() == n {
            return m;
        }
    }
}
