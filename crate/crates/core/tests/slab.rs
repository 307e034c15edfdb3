use weylarray_core::ewald::EwaldConfig;
use weylarray_core::lattice::LatticeGeometry;
use weylarray_core::model::{ArrayParams, Vec3};
use weylarray_core::slab::{
    build_slab, fermi_arcs, slab_bands, slab_path, ArcConfig, Facet, FermiArcs,
};
use weylarray_core::weyl::{find_weyl_nodes, WeylSearch};

fn setup() -> (ArrayParams, f64, Vec<Vec3>) {
    let p = ArrayParams::new(0.1, 5.0).unwrap();
    let found = find_weyl_nodes(
        &LatticeGeometry::bcc(),
        &p,
        &WeylSearch::default(),
        &EwaldConfig::default(),
    )
    .unwrap();
    let w = found.primary().unwrap().weyl_frequency;
    (p, w, found.nodes.iter().take(2).map(|n| n.k()).collect())
}

fn open_arc_ends(arcs: &FermiArcs, facet: Facet) -> [[f64; 2]; 2] {
    let open: Vec<_> = arcs.on_facet(facet).filter(|c| !c.closed).collect();
    assert_eq!(open.len(), 1);
    let (a, b) = open[0].endpoints().unwrap();
    let wrap = |k: [f64; 2]| k.map(|x| x - 2.0 * (x / 2.0).round());
    let mut e = [wrap(a), wrap(b)];
    e.sort_by(|x, y| x[1].total_cmp(&y[1]));
    e
}

#[test]
fn decay_rates_are_non_negative() {
    let (p, _, _) = setup();
    let slab = build_slab(7.5).unwrap();
    let path = slab_path(&slab, &["Γ", "Y", "M", "Z", "Γ"], 6).unwrap();
    for (sol, _) in slab_bands(&slab, &p, &path.points, &EwaldConfig::default()).unwrap() {
        assert_eq!(sol.num_bands(), 3 * slab.num_sites());
        assert!(
            sol.decay_rates.iter().all(|&g| g >= -1e-8),
            "{:?}",
            sol.decay_rates
        );
    }
}

#[test]
fn facets_are_related_by_inversion() {
    let (p, w, nodes) = setup();
    let slab = build_slab(7.5).unwrap();
    let cfg = ArcConfig {
        grid_n: 24,
        ..ArcConfig::default()
    };
    let arcs = fermi_arcs(&slab, &p, w, &nodes, &cfg, &EwaldConfig::default()).unwrap();
    let mut front: Vec<[f64; 2]> = arcs
        .on_facet(Facet::Facet100)
        .flat_map(|c| c.vertices.iter().map(|v| v.k))
        .collect();
    let back: Vec<[f64; 2]> = arcs
        .on_facet(Facet::Facet1bar00)
        .flat_map(|c| c.vertices.iter().map(|v| v.k))
        .collect();
    assert!(!front.is_empty());
    assert_eq!(front.len(), back.len());
    front.iter_mut().for_each(|k| *k = [-k[0], -k[1]]);
    let wrap = |x: f64| x - 2.0 * (x / 2.0).round();
    for k in &front {
        let d = back
            .iter()
            .map(|b| wrap(k[0] - b[0]).hypot(wrap(k[1] - b[1])))
            .fold(f64::INFINITY, f64::min);
        assert!(d < 1e-6, "{k:?} has no inverted partner ({d})");
    }
}

#[test]
fn no_arcs_far_from_the_surface_bands() {
    let (p, _, nodes) = setup();
    let slab = build_slab(3.5).unwrap();
    let cfg = ArcConfig {
        grid_n: 12,
        ..ArcConfig::default()
    };
    let arcs = fermi_arcs(&slab, &p, 60.0, &nodes, &cfg, &EwaldConfig::default()).unwrap();
    assert!(arcs.curves.is_empty());
}

fn arc_vertices(arcs: &FermiArcs, facet: Facet) -> Vec<[f64; 2]> {
    let open: Vec<_> = arcs.on_facet(facet).filter(|c| !c.closed).collect();
    assert_eq!(open.len(), 1);
    open[0].vertices.iter().map(|v| v.k).collect()
}

/// Mean torus distance from the vertices of `a` to the polyline `b`.
fn mean_distance(a: &[[f64; 2]], b: &[[f64; 2]]) -> f64 {
    let near = |x: f64, to: f64| x - 2.0 * ((x - to) / 2.0).round();
    let seg = |p: [f64; 2], u: [f64; 2], v: [f64; 2]| {
        let p = [near(p[0], u[0]), near(p[1], u[1])];
        let (dx, dy) = (v[0] - u[0], v[1] - u[1]);
        let t = (((p[0] - u[0]) * dx + (p[1] - u[1]) * dy) / (dx * dx + dy * dy).max(1e-300))
            .clamp(0.0, 1.0);
        (p[0] - u[0] - t * dx).hypot(p[1] - u[1] - t * dy)
    };
    a.iter()
        .map(|&p| {
            b.windows(2)
                .map(|w| seg(p, w[0], w[1]))
                .fold(f64::INFINITY, f64::min)
        })
        .sum::<f64>()
        / a.len() as f64
}

#[test]
fn arcs_are_converged_in_width() {
    let (p, w, nodes) = setup();
    let cfg = ArcConfig::default();
    let cell = 2.0 / cfg.grid_n as f64;
    let arcs: Vec<_> = [7.5, 15.5]
        .iter()
        .map(|&width| {
            fermi_arcs(
                &build_slab(width).unwrap(),
                &p,
                w,
                &nodes,
                &cfg,
                &EwaldConfig::default(),
            )
            .unwrap()
        })
        .collect();
    let ends: Vec<_> = arcs
        .iter()
        .map(|a| open_arc_ends(a, Facet::Facet100))
        .collect();
    for (a, b) in ends[0].iter().zip(&ends[1]) {
        assert!(
            (a[0] - b[0]).hypot(a[1] - b[1]) <= 1.5 * cell,
            "{a:?} vs {b:?}"
        );
    }
    let (thin, thick) = (
        arc_vertices(&arcs[0], Facet::Facet100),
        arc_vertices(&arcs[1], Facet::Facet100),
    );
    let d = mean_distance(&thin, &thick).max(mean_distance(&thick, &thin));
    assert!(d < cell, "mean arc displacement {d} vs cell {cell}");
}
