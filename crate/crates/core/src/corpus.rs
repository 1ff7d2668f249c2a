//! Named embedded graphs used as fixtures by tests, benches and the CLI.

use crate::embedding::{EmbeddingScheme, SurfaceKind};
use crate::generate::{k6_projective_faces, k7_torus_faces, sew, Triangle};
use crate::textfmt::parse_scheme;
use std::collections::{BTreeMap, BTreeSet};

#[derive(Clone, Debug)]
pub struct Instance {
    pub name: &'static str,
    pub scheme: EmbeddingScheme,
    pub surface: SurfaceKind,
}

fn from_triangles(faces: &[Triangle]) -> EmbeddingScheme {
    let polys: Vec<Vec<u32>> = faces.iter().map(|f| f.to_vec()).collect();
    EmbeddingScheme::from_polygons(&polys).expect("fixture is a closed surface")
}

/// K4 on the torus with one triangle and one face of length 9.
pub fn k4_torus() -> EmbeddingScheme {
    let rot = BTreeMap::from([(1, vec![4, 2, 3]), (2, vec![1, 4, 3]), (3, vec![1, 2, 4]), (4, vec![2, 3, 1])]);
    EmbeddingScheme::new(rot, BTreeSet::new()).unwrap()
}

pub fn k5_torus() -> EmbeddingScheme {
    parse_scheme(
        "v 1 : 2 5 3 4\n\
         v 2 : 1 3 4 5\n\
         v 3 : 1 4 2 5\n\
         v 4 : 1 2 3 5\n\
         v 5 : 1 2 3 4\n",
    )
    .unwrap()
}

pub fn k33_torus() -> EmbeddingScheme {
    parse_scheme(
        "v 1 : 4 5 6\n\
         v 2 : 4 5 6\n\
         v 3 : 4 5 6\n\
         v 4 : 1 2 3\n\
         v 5 : 1 2 3\n\
         v 6 : 1 2 3\n",
    )
    .unwrap()
}

pub fn k7_torus() -> EmbeddingScheme {
    from_triangles(&k7_torus_faces())
}

/// Two K7 tori sewn together along a triangle: 11 vertices on the genus 2
/// surface.
pub fn double_torus() -> EmbeddingScheme {
    let mut faces = k7_torus_faces();
    sew(&mut faces, 0, &k7_torus_faces());
    from_triangles(&faces)
}

pub fn k6_projective() -> EmbeddingScheme {
    from_triangles(&k6_projective_faces())
}

/// Two K6 projective planes sewn together: 9 vertices on the Klein bottle.
pub fn klein_bottle() -> EmbeddingScheme {
    let mut faces = k6_projective_faces();
    sew(&mut faces, 0, &k6_projective_faces());
    from_triangles(&faces)
}

/// The round-trip corpus.
pub fn corpus() -> Vec<Instance> {
    let torus = SurfaceKind { orientable: true, genus: 1 };
    vec![
        Instance { name: "K5/T1", scheme: k5_torus(), surface: torus },
        Instance { name: "K3,3/T1", scheme: k33_torus(), surface: torus },
        Instance { name: "K7/T1", scheme: k7_torus(), surface: torus },
        Instance {
            name: "double-torus/T2",
            scheme: double_torus(),
            surface: SurfaceKind { orientable: true, genus: 2 },
        },
        Instance { name: "K6/P1", scheme: k6_projective(), surface: SurfaceKind { orientable: false, genus: 1 } },
        Instance { name: "klein/P2", scheme: klein_bottle(), surface: SurfaceKind { orientable: false, genus: 2 } },
    ]
}

pub fn by_name(name: &str) -> Option<EmbeddingScheme> {
    match name {
        "K4/T1" => Some(k4_torus()),
        _ => corpus().into_iter().find(|i| i.name == name).map(|i| i.scheme),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_sit_on_their_surfaces() {
        for inst in corpus() {
            assert_eq!(inst.scheme.euler_genus().unwrap(), inst.surface, "{}", inst.name);
            assert!(inst.scheme.graph().is_connected(), "{}", inst.name);
        }
        let d = double_torus();
        assert_eq!((d.n(), d.m()), (11, 39));
    }
}
