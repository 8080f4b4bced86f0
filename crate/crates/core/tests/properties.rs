//! Property tests for the invariants of the norm, optimizer, orthogonality
//! and embedding layers.

use normlab::catalog::{self, InstanceKind, DEFAULT_BUILTINS};
use normlab::embedding::{self, Definiteness, EmbeddingSpec, Status, VerifyConfig};
use normlab::norm::{self, DualNorm, NormSpec, PExponent, Space};
use normlab::optim::{self, extremize_gain, minimize_over_subspace, Method};
use normlab::orthogonality::{bj_orthogonal, bj_symmetry_scan};
use normlab::scalar::{self, Field, Matrix, Vector, C64};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn catalog_spaces() -> Vec<Space> {
    let mut out: Vec<Space> = DEFAULT_BUILTINS.iter().map(|n| catalog::builtin(n).unwrap().space).collect();
    out.push(Space::new(NormSpec::p(3, 3.0), Field::Complex).unwrap());
    out.push(Space::new(NormSpec::p_inf(2), Field::Complex).unwrap());
    out.push(Space::real(NormSpec::SchattenInf { n: 2 }).unwrap());
    out
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn polyhedral_space(seed: u64, dim: usize) -> Space {
    catalog::random_instance(seed, dim, InstanceKind::Polyhedral).unwrap().space
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn norm_homogeneity_and_triangle(idx in 0usize..12, seed in any::<u64>(), t in -50.0f64..50.0) {
        let spaces = catalog_spaces();
        let space = &spaces[idx % spaces.len()];
        let mut r = rng(seed);
        let u = norm::gaussian_vector(&mut r, space.dim(), space.field);
        let v = norm::gaussian_vector(&mut r, space.dim(), space.field);
        let nu = space.norm(&u).unwrap();
        let nv = space.norm(&v).unwrap();
        let ntv = space.norm(&scalar::scale_real(&v, t)).unwrap();
        prop_assert!((ntv - t.abs() * nv).abs() <= 1e-9 * nv.max(1.0) * t.abs().max(1.0));
        prop_assert!(space.norm(&scalar::add(&u, &v)).unwrap() <= nu + nv + 1e-9);
    }

    #[test]
    fn bipolar_and_holder(idx in 0usize..12, seed in any::<u64>()) {
        let spaces = catalog_spaces();
        let space = &spaces[idx % spaces.len()];
        let bidual = space.norm.dual().unwrap().dual().unwrap();
        let dual = DualNorm::new(&space.norm).unwrap();
        let mut r = rng(seed);
        for _ in 0..20 {
            let x = norm::gaussian_vector(&mut r, space.dim(), space.field);
            let f = norm::gaussian_vector(&mut r, space.dim(), space.field);
            let nx = space.norm(&x).unwrap();
            prop_assert!((bidual.eval(&x).unwrap() - nx).abs() <= 1e-9 * nx.max(1.0));
            prop_assert!(scalar::pair(&f, &x).norm() <= dual.eval(&f).unwrap() * nx + 1e-9);
        }
    }

    #[test]
    fn conjugate_exponent_is_an_involution(p in 1.0f64..100.0) {
        let e = PExponent::Finite(p);
        let back = e.conjugate().conjugate();
        match back {
            PExponent::Finite(q) => prop_assert!((q - p).abs() <= 1e-9 * p),
            PExponent::Infinity => prop_assert!(false),
        }
    }

    #[test]
    fn golden_section_matches_grid_scan(seed in any::<u64>()) {
        // max of affine pieces is convex and piecewise linear
        let mut r = rng(seed);
        let pieces: Vec<(f64, f64)> = (0..r.random_range(2..6))
            .map(|_| (r.random_range(-5.0..5.0), r.random_range(-5.0..5.0)))
            .collect();
        let f = |t: f64| pieces.iter().map(|(a, b)| a * t + b).fold(f64::NEG_INFINITY, f64::max);
        let res = optim::minimize_1d_convex(f, -3.0, 3.0, 1e-10).unwrap();
        let grid = 1_000_000;
        let best = (0..=grid).map(|k| f(-3.0 + 6.0 * k as f64 / grid as f64)).fold(f64::INFINITY, f64::min);
        prop_assert!(res.value <= best + 1e-8, "{} vs grid {}", res.value, best);
    }

    #[test]
    fn lp_distance_is_a_lower_bound(seed in any::<u64>(), dim in 2usize..5) {
        let space = polyhedral_space(seed, dim);
        let mut r = rng(seed ^ 1);
        let x = norm::gaussian_vector(&mut r, dim, Field::Real);
        let basis = vec![norm::gaussian_vector(&mut r, dim, Field::Real)];
        let res = minimize_over_subspace(&space, &x, &basis, 1e-10).unwrap();
        prop_assert_eq!(res.method, Method::ExactLp);
        let at = |c: f64| space.norm(&scalar::axpy(&x, C64::new(c, 0.0), &basis[0])).unwrap();
        prop_assert!((at(res.argmin[0].re) - res.value).abs() <= 1e-9 * res.value.max(1.0));
        for _ in 0..50 {
            let c = res.argmin[0].re + r.random_range(-1.0..1.0);
            prop_assert!(res.value <= at(c) + 1e-10);
        }
    }

    #[test]
    fn bj_scaling_invariance(idx in 0usize..12, seed in any::<u64>(), a in 0.1f64..10.0, b in -10.0f64..-0.1) {
        let spaces = catalog_spaces();
        let space = &spaces[idx % spaces.len()];
        if space.dim() > 6 {
            return Ok(());
        }
        let mut r = rng(seed);
        let x = norm::gaussian_vector(&mut r, space.dim(), space.field);
        let y = norm::gaussian_vector(&mut r, space.dim(), space.field);
        let base = bj_orthogonal(space, &x, &y, 1e-9).unwrap();
        let scaled = bj_orthogonal(space, &scalar::scale_real(&x, a), &scalar::scale_real(&y, b), 1e-9).unwrap();
        // far from the tolerance band the verdict cannot move
        if base.margin.abs() > 1e-6 * base.norm_x {
            prop_assert_eq!(base.orthogonal, scaled.orthogonal);
            prop_assert!((scaled.margin - a * base.margin).abs() <= 1e-6 * a * base.norm_x);
        }
    }

    #[test]
    fn orthogonal_pairs_respect_the_definition(seed in any::<u64>(), dim in 2usize..5) {
        let space = polyhedral_space(seed, dim);
        let mut r = rng(seed ^ 2);
        let x = norm::gaussian_vector(&mut r, dim, Field::Real);
        let w = norm::gaussian_vector(&mut r, dim, Field::Real);
        let res = minimize_over_subspace(&space, &w, std::slice::from_ref(&x), 1e-10).unwrap();
        // w' = w + c* x minimizes ||w + c x||, so w' ⊥ x by construction
        let wp = scalar::axpy(&w, res.argmin[0], &x);
        let bj = bj_orthogonal(&space, &wp, &x, 1e-9).unwrap();
        prop_assert!(bj.orthogonal);
        let nwp = space.norm(&wp).unwrap();
        let radius = 2.0 * nwp / space.norm(&x).unwrap();
        for _ in 0..100 {
            let lambda = r.random_range(-radius..radius);
            let v = space.norm(&scalar::axpy(&wp, C64::new(lambda, 0.0), &x)).unwrap();
            prop_assert!(v >= nwp - 1e-9 * nwp);
        }
    }

    #[test]
    fn hilbert_bj_matches_inner_product(seed in any::<u64>(), dim in 2usize..6) {
        let space = Space::real(NormSpec::euclid(dim)).unwrap();
        let mut r = rng(seed);
        let x = norm::gaussian_vector(&mut r, dim, Field::Real);
        let mut y = norm::gaussian_vector(&mut r, dim, Field::Real);
        if seed % 2 == 0 {
            let c = scalar::inner(&x, &y) / scalar::inner(&x, &x);
            y = scalar::axpy(&y, -c, &x);
        }
        let expected = scalar::inner(&x, &y).norm() <= 1e-8 * scalar::euclid_norm(&x) * scalar::euclid_norm(&y);
        prop_assert_eq!(bj_orthogonal(&space, &x, &y, 1e-8).unwrap().orthogonal, expected);
    }

    #[test]
    fn gain_brackets_fresh_samples(seed in any::<u64>(), dim in 1usize..5) {
        let e = catalog::random_instance(seed, dim, InstanceKind::PolyhedralSpd).unwrap();
        let dual = DualNorm::new(&e.space.norm).unwrap();
        let b = embedding::operator_bounds(&e.space, &e.embedding, 200, seed).unwrap();
        let g = extremize_gain(|x| e.embedding.covector(x), &e.space, |f| dual.eval(f), 200, seed, &[]).unwrap();
        // vertex candidates make the bounds at least as wide as plain sampling
        prop_assert!(b.delta <= g.min + 1e-12 && b.phi_norm >= g.max - 1e-12);
        for x in norm::sample_sphere(&e.space, 2_000, seed.wrapping_add(1)).unwrap() {
            let ratio = dual.eval(&e.embedding.covector(&x)).unwrap() / e.space.norm(&x).unwrap();
            prop_assert!(ratio >= b.delta - 1e-6 && ratio <= b.phi_norm + 1e-6);
        }
    }

    #[test]
    fn riesz_soundness(seed in any::<u64>(), dim in 1usize..6) {
        let e = catalog::random_instance(seed, dim, InstanceKind::SpdHilbert).unwrap();
        let cfg = VerifyConfig { samples: 300, seed, ..VerifyConfig::default() };
        for r in [
            embedding::verify_theorem1(&e.space, &e.embedding, &cfg).unwrap(),
            embedding::verify_theorem2(&e.space, &e.embedding, &cfg).unwrap(),
        ] {
            for c in r.hypotheses.iter().chain(&r.conclusions) {
                prop_assert_eq!(c.status, Status::Pass, "{} {:?}", e.name, c);
            }
        }
    }

    #[test]
    fn indefinite_witnesses_reverify(seed in any::<u64>(), dim in 2usize..6) {
        let e = catalog::random_instance(seed, dim, InstanceKind::Perturbed).unwrap();
        match e.embedding.definiteness().unwrap() {
            Definiteness::Indefinite { witness } | Definiteness::Degenerate { witness } => {
                prop_assert!(e.embedding.form(&witness, &witness).norm() <= 1e-9);
                prop_assert!(e.space.norm(&witness).unwrap() >= 1e-6);
            }
            _ => {}
        }
    }

    #[test]
    fn bj_condition_witnesses_reverify(seed in any::<u64>(), dim in 2usize..4) {
        let e = catalog::random_instance(seed, dim, InstanceKind::Polyhedral).unwrap();
        let r = embedding::check_bj_condition(&e.space, &e.embedding, 50, seed, 1e-9).unwrap();
        if let Some(f) = r.failure {
            let kernel: Vec<Vector> = f.kernel.iter().map(|k| k.0.clone()).collect();
            let again = normlab::orthogonality::bj_orthogonal_subspace(&e.space, &f.x, &kernel, 1e-9).unwrap();
            prop_assert!(again.margin < -1e-9 * again.norm_x);
        }
    }

    #[test]
    fn isometry_deviation_is_monotone_in_samples(seed in any::<u64>(), dim in 2usize..4) {
        let e = catalog::random_instance(seed, dim, InstanceKind::PolyhedralSpd).unwrap();
        let small = embedding::check_isometry(&e.space, &e.embedding, 100, seed).unwrap();
        let large = embedding::check_isometry(&e.space, &e.embedding, 1_000, seed).unwrap();
        prop_assert!(small.deviation() <= large.deviation() + 1e-12);
    }

    #[test]
    fn hilbert_detectors_agree(seed in any::<u64>(), dim in 2usize..4) {
        let e = catalog::random_instance(seed & !1, dim, InstanceKind::SpdHilbert).unwrap();
        let p = embedding::parallelogram_defect(&e.space, 200, seed, 1e-6).unwrap();
        if p.max_defect <= 1e-6 {
            prop_assert!(bj_symmetry_scan(&e.space, 200, seed, 1e-9).unwrap().is_empty());
        }
    }

    #[test]
    fn report_json_round_trips(seed in any::<u64>(), dim in 2usize..4) {
        let e = catalog::random_instance(seed, dim, InstanceKind::Perturbed).unwrap();
        let cfg = VerifyConfig { samples: 50, seed, ..VerifyConfig::default() };
        let r = embedding::verify_theorem3(&e.space, &e.embedding, &cfg).unwrap();
        let text = serde_json::to_string(&r).unwrap();
        let back: embedding::VerificationReport = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, r);
        let entry_text = serde_json::to_string(&e).unwrap();
        let entry: catalog::CatalogEntry = serde_json::from_str(&entry_text).unwrap();
        prop_assert_eq!(entry, e);
    }

    #[test]
    fn covector_pairing_gives_the_form(seed in any::<u64>(), dim in 1usize..5) {
        let mut r = rng(seed);
        let rows: Vec<Vector> = (0..dim).map(|_| norm::gaussian_vector(&mut r, dim, Field::Complex)).collect();
        let emb = EmbeddingSpec::new(Field::Complex, Matrix::from_rows(&rows).unwrap()).unwrap();
        let x = norm::gaussian_vector(&mut r, dim, Field::Complex);
        let y = norm::gaussian_vector(&mut r, dim, Field::Complex);
        let via_covector = scalar::pair(&emb.covector(&x), &y);
        prop_assert!((via_covector - emb.form(&x, &y)).norm() <= 1e-9 * (1.0 + via_covector.norm()));
    }
}
