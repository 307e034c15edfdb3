use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;

use weylarray_core::bloch::assemble_bloch;
use weylarray_core::contour::{marching_squares, ScalarGrid};
use weylarray_core::ewald::{light_sphere_distance, EwaldConfig};
use weylarray_core::lattice::LatticeGeometry;
use weylarray_core::model::{green_dyadic, zeeman_block, ArrayParams, Vec3};
use weylarray_core::slab::{localization_profile, polarization_weight};
use weylarray_core::weyl::{find_weyl_nodes, WeylSearch};

fn vec3(r: f64) -> impl Strategy<Value = Vec3> {
    (-r..r, -r..r, -r..r).prop_map(|(x, y, z)| Vec3::new(x, y, z))
}

fn lattice() -> impl Strategy<Value = LatticeGeometry> {
    prop_oneof![Just(LatticeGeometry::bcc()), Just(LatticeGeometry::cub())]
}

proptest! {
    #[test]
    fn green_is_symmetric_and_even(r in vec3(4.0).prop_filter("away from origin", |r| r.norm() > 1e-3), k0a in 0.05f64..3.0) {
        let g = green_dyadic(&r, k0a).unwrap();
        let m = green_dyadic(&-r, k0a).unwrap();
        let scale = g.iter().map(|z| z.norm()).fold(0.0, f64::max);
        prop_assert!((g - g.transpose()).iter().all(|z| z.norm() <= 1e-14 * scale));
        prop_assert!((g - m).iter().all(|z| z.norm() <= 1e-14 * scale));
    }

    #[test]
    fn zeeman_block_is_hermitian_and_traceless(mu_b in -50.0f64..50.0) {
        let z = zeeman_block(mu_b);
        prop_assert_eq!(z, z.adjoint());
        prop_assert_eq!(z.trace(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn reduction_shifts_by_reciprocal_vectors(lat in lattice(), k in vec3(20.0)) {
        let r = lat.reduce_k(&k);
        for f in lat.reduced_k(&r) {
            prop_assert!((-0.5 - 1e-12..0.5 + 1e-12).contains(&f));
        }
        for f in lat.reduced_k(&(k - r)) {
            prop_assert!((f - f.round()).abs() < 1e-9);
        }
        for (i, a) in lat.direct_basis().iter().enumerate() {
            for (j, b) in lat.reciprocal_basis().iter().enumerate() {
                let want = if i == j { 2.0 * PI } else { 0.0 };
                prop_assert!((a.dot(b) - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn state_weights_sum_to_one(re in prop::collection::vec(-1.0f64..1.0, 6..60), seed in 0u64..1000) {
        let n = re.len() / 3 * 3;
        let mut state: Vec<Complex64> = (0..n)
            .map(|i| Complex64::new(re[i], ((i as u64 * 7919 + seed) % 101) as f64 / 50.0 - 1.0))
            .collect();
        let norm = state.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        prop_assume!(norm > 1e-6);
        state.iter_mut().for_each(|z| *z /= norm);
        let w = polarization_weight(&state);
        prop_assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        prop_assert!(w.iter().all(|&x| x >= 0.0));
        let p = localization_profile(&state);
        prop_assert_eq!(p.len(), n / 3);
        prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn circle_contour_encloses_its_area(r in 3.0f64..12.0, cx in 14.0f64..18.0, cy in 14.0f64..18.0) {
        let n = 32;
        let values = (0..n * n)
            .map(|idx| ((idx / n) as f64 - cx).hypot((idx % n) as f64 - cy))
            .collect();
        let lines = marching_squares(&ScalarGrid::new(n, n, values, false), r);
        prop_assert_eq!(lines.len(), 1);
        prop_assert!(lines[0].closed);
        let area = lines[0].area().abs();
        prop_assert!((area - PI * r * r).abs() < 0.05 * PI * r * r);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn bloch_matrix_is_hermitian_off_the_light_spheres(
        lat in lattice(),
        k in vec3(PI),
        a in 0.05f64..0.2,
        mu_b in -10.0f64..10.0,
    ) {
        let p = ArrayParams::new(a, mu_b).unwrap();
        prop_assume!(light_sphere_distance(&lat, &k, p.k0a()) > 0.05);
        let h = assemble_bloch(&lat, &p, &k).unwrap().matrix;
        let scale = h.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let skew = (&h - h.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        prop_assert!(skew < 1e-9 * scale, "skew {skew:e} vs {scale:e}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(4))]

    #[test]
    fn nodes_mirror_and_field_reversal_flips_chirality(mu_b in 3.0f64..9.0) {
        let lat = LatticeGeometry::bcc();
        let cfg = EwaldConfig::default();
        let search = WeylSearch { scan_points: 120, ..WeylSearch::default() };
        let up = find_weyl_nodes(&lat, &ArrayParams::new(0.1, mu_b).unwrap(), &search, &cfg).unwrap();
        let down = find_weyl_nodes(&lat, &ArrayParams::new(0.1, -mu_b).unwrap(), &search, &cfg).unwrap();
        prop_assert_eq!(up.nodes.len(), 2);
        let (a, b) = (&up.nodes[0], &up.nodes[1]);
        prop_assert!((a.k_position[2] + b.k_position[2]).abs() < 1e-12);
        prop_assert!((a.weyl_frequency - b.weyl_frequency).abs() < 1e-9);
        prop_assert_eq!(a.chirality.unwrap() + b.chirality.unwrap(), 0);
        prop_assert_eq!(down.nodes.len(), 2);
        for n in &up.nodes {
            let twin = down
                .nodes
                .iter()
                .find(|m| (m.k_position[2] - n.k_position[2]).abs() < 1e-6)
                .expect("reversed field keeps the node positions");
            prop_assert!((twin.weyl_frequency - n.weyl_frequency).abs() < 1e-6);
            prop_assert_eq!(twin.chirality.unwrap(), -n.chirality.unwrap());
        }
    }
}
