//! The mesh-equation polytopes against the g-vector fan and the type cone.

use std::collections::BTreeSet;

use fanforge::arquiver::{
    abhy_polytope, abhy_rays, dynkin_edges, knit_ar_quiver, ones, DynkinQuiver, DynkinType,
};
use fanforge::clusterfan::{enumerate_fan, Seed};
use fanforge::linalg::add;
use fanforge::polyhedra::{fan_eq, normal_fan, vertices, Fan};
use fanforge::typecone::{qc_polytope, translation, type_cone};
use fanforge::{ExactField, Rat};

fn all_orientations(kind: DynkinType, n: usize) -> Vec<DynkinQuiver> {
    let edges = dynkin_edges(kind, n).unwrap();
    (0..(1u32 << edges.len()))
        .map(|mask| {
            let arrows = edges
                .iter()
                .enumerate()
                .map(|(i, &(a, b))| if mask >> i & 1 == 1 { (a, b) } else { (b, a) })
                .collect();
            DynkinQuiver::new(kind, n, arrows).unwrap()
        })
        .collect()
}

fn gvector_fan(q: &DynkinQuiver) -> Fan {
    enumerate_fan(&Seed::new(q.exchange_matrix()).unwrap())
        .unwrap()
        .0
}

#[test]
fn abhy_rays_are_the_g_vectors() {
    let mut quivers: Vec<DynkinQuiver> = (1..=4)
        .flat_map(|n| all_orientations(DynkinType::A, n))
        .collect();
    quivers.extend(all_orientations(DynkinType::D, 4));
    quivers.push(DynkinQuiver::linear(DynkinType::D, 5).unwrap());
    for q in quivers {
        let ar = knit_ar_quiver(&q).unwrap();
        let rays: BTreeSet<Vec<i64>> = abhy_rays(&ar).unwrap().into_iter().collect();
        let fan = gvector_fan(&q);
        let fan_rays: BTreeSet<Vec<i64>> = fan.rays().iter().cloned().collect();
        assert_eq!(rays, fan_rays, "{q:?}");
        let p = vertices(&abhy_polytope(&ar, &ones(ar.meshes().len())).unwrap()).unwrap();
        assert!(fan_eq(&normal_fan(&p).unwrap(), &fan), "{q:?}");
    }
}

#[test]
fn abhy_equals_qc_up_to_translation() {
    for n in 1..=4 {
        let q = DynkinQuiver::linear(DynkinType::A, n).unwrap();
        let ar = knit_ar_quiver(&q).unwrap();
        let abhy = abhy_polytope(&ar, &ones(ar.meshes().len())).unwrap();
        let fan = gvector_fan(&q);
        let mut h_abhy = vec![Rat::from_int(0); fan.n_rays()];
        for (row, b) in abhy_rays(&ar).unwrap().iter().zip(abhy.bounds()) {
            h_abhy[fan.ray_index(row).unwrap()] = b.clone();
        }
        let tc = type_cone(&fan).unwrap();
        let qc = qc_polytope(&fan, &tc, &ones(tc.facets.len())).unwrap();
        let x = translation(&fan, &qc.h, &h_abhy).expect("same right-hand side up to G x");
        let mut moved: Vec<Vec<Rat>> = vertices(&qc.polytope)
            .unwrap()
            .vertices()
            .iter()
            .map(|v| add(v, &x))
            .collect();
        moved.sort();
        assert_eq!(moved, vertices(&abhy).unwrap().vertices(), "n={n}");
    }
}
