//! Random embedded graphs of prescribed genus: a stacked planar
//! triangulation with torus or projective-plane triangulations sewn in
//! along triangles.

use crate::embedding::{EmbeddingScheme, SurfaceKind};
use crate::graph::VertexId;
use rand::seq::SliceRandom;
use rand::Rng;
use std::collections::BTreeMap;

pub type Triangle = [VertexId; 3];

/// Boundary of the tetrahedron, vertices 1..=4.
pub fn tetrahedron() -> Vec<Triangle> {
    vec![[1, 2, 3], [1, 3, 4], [1, 4, 2], [2, 4, 3]]
}

/// The 7-vertex triangulation of the torus (K7), vertices 1..=7.
pub fn k7_torus_faces() -> Vec<Triangle> {
    let mut out = Vec::new();
    for i in 0..7 {
        let v = |d: u32| (i + d) % 7 + 1;
        out.push([v(0), v(1), v(3)]);
        out.push([v(0), v(2), v(3)]);
    }
    out
}

/// The 6-vertex triangulation of the projective plane (K6), vertices 1..=6.
pub fn k6_projective_faces() -> Vec<Triangle> {
    vec![[1, 2, 3], [1, 3, 4], [1, 4, 5], [1, 5, 6], [1, 6, 2], [2, 3, 5], [3, 4, 6], [5, 6, 3], [4, 5, 2], [6, 2, 4]]
}

/// Stacked triangulation of the sphere on `n >= 4` vertices: each new vertex
/// goes inside a uniformly random face.
pub fn stacked_triangulation<R: Rng>(n: u32, rng: &mut R) -> Vec<Triangle> {
    assert!(n >= 4, "a stacked triangulation needs at least 4 vertices");
    let mut faces = tetrahedron();
    for v in 5..=n {
        let i = rng.gen_range(0..faces.len());
        let [a, b, c] = faces.swap_remove(i);
        faces.extend([[a, b, v], [b, c, v], [c, a, v]]);
    }
    faces
}

/// Connected sum along a face: removes `faces[at]` and the first face of
/// `gadget`, identifies their corners in order, and gives the remaining
/// gadget vertices fresh ids.
pub fn sew(faces: &mut Vec<Triangle>, at: usize, gadget: &[Triangle]) {
    let host = faces.swap_remove(at);
    let mut next = faces.iter().flatten().max().copied().unwrap_or(0) + 1;
    let mut map: BTreeMap<VertexId, VertexId> = gadget[0].iter().copied().zip(host).collect();
    for f in &gadget[1..] {
        let t = f.map(|x| {
            *map.entry(x).or_insert_with(|| {
                next += 1;
                next - 1
            })
        });
        faces.push(t);
    }
}

/// Vertex count of the result of [`surface_faces`] for the given base size.
pub fn total_vertices(base: u32, surface: SurfaceKind) -> u32 {
    let per = if surface.orientable { 4 } else { 3 };
    base + per * surface.genus
}

/// Triangles of a random triangulation of `surface` with `n` vertices, or as
/// close above `n` as the gadgets allow.
pub fn surface_faces<R: Rng>(n: u32, surface: SurfaceKind, rng: &mut R) -> Vec<Triangle> {
    let per = if surface.orientable { 4 } else { 3 };
    let base = n.saturating_sub(per * surface.genus).max(4);
    let mut faces = stacked_triangulation(base, rng);
    let gadget = if surface.orientable { k7_torus_faces() } else { k6_projective_faces() };
    for _ in 0..surface.genus {
        let at = rng.gen_range(0..faces.len());
        sew(&mut faces, at, &gadget);
    }
    faces
}

/// A random embedded graph on `surface` with about `n` vertices and shuffled
/// vertex ids 1..=n.
pub fn random_embedded<R: Rng>(n: u32, surface: SurfaceKind, rng: &mut R) -> EmbeddingScheme {
    let faces = surface_faces(n, surface, rng);
    let mut ids: Vec<VertexId> = faces.iter().flatten().copied().collect();
    ids.sort_unstable();
    ids.dedup();
    let mut shuffled: Vec<VertexId> = (1..=ids.len() as VertexId).collect();
    shuffled.shuffle(rng);
    let relabel: BTreeMap<VertexId, VertexId> = ids.into_iter().zip(shuffled).collect();
    let polys: Vec<Vec<VertexId>> = faces.iter().map(|f| f.iter().map(|x| relabel[x]).collect()).collect();
    EmbeddingScheme::from_polygons(&polys).expect("sewn triangulations are closed surfaces")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn polys(faces: &[Triangle]) -> Vec<Vec<VertexId>> {
        faces.iter().map(|f| f.to_vec()).collect()
    }

    #[test]
    fn gadgets_have_the_right_surfaces() {
        let t = EmbeddingScheme::from_polygons(&polys(&k7_torus_faces())).unwrap();
        assert_eq!((t.n(), t.m()), (7, 21));
        assert_eq!(t.euler_genus().unwrap(), SurfaceKind { orientable: true, genus: 1 });
        let p = EmbeddingScheme::from_polygons(&polys(&k6_projective_faces())).unwrap();
        assert_eq!((p.n(), p.m()), (6, 15));
        assert_eq!(p.euler_genus().unwrap(), SurfaceKind { orientable: false, genus: 1 });
    }

    #[test]
    fn random_surfaces_hit_their_genus() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for genus in 0..4 {
            for orientable in [true, false] {
                if !orientable && genus == 0 {
                    continue;
                }
                let kind = SurfaceKind { orientable, genus };
                let s = random_embedded(30, kind, &mut rng);
                assert_eq!(s.euler_genus().unwrap(), kind);
                assert!(s.graph().is_connected());
                assert_eq!(s.n(), 30);
            }
        }
    }
}
