use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::numeric::PrecisionConfig;
use crate::obliteration::line_certified;

const B: usize = 256;

fn s(v: f64) -> Scalar {
    Scalar::from_f64(v, B)
}

fn ctx(seed: u64) -> Context {
    Context::new(PrecisionConfig::with_bits(B).seed(seed))
}

fn lim(c: &Context) -> f64 {
    SLACK * c.tol()
}

fn mono(nvars: usize, exps: &[(usize, u32)]) -> Vec<u32> {
    let mut e = vec![0u32; nvars];
    for &(i, k) in exps {
        e[i] = k;
    }
    e
}

fn fermat(nvars: usize) -> MultiPoly {
    MultiPoly::from_terms(nvars, 3, (0..nvars).map(|i| (mono(nvars, &[(i, 3)]), s(1.0))))
}

fn random_poly(nvars: usize, degree: usize, seed: u64) -> MultiPoly {
    MultiPoly::random(nvars, degree, B, &mut ChaCha8Rng::seed_from_u64(seed))
}

fn assert_isotropic(g: &Matrix, sub: &LinearSubspace, c: &Context) {
    let q = orthonormalize(sub.basis(), 0.0);
    assert!(gram_on(g, &q).norm_max() <= lim(c) * g.norm_max());
}

fn on_line(polys: &[&MultiPoly], l: &ProjLine, c: &Context) {
    let (p, q) = l.points();
    let eqs: Vec<Equation> = polys.iter().map(|f| Equation::explicit((*f).clone())).collect();
    assert!(line_certified(&eqs, p.coords(), q.coords(), lim(c)));
}

fn vec_c(re: &[f64], im: &[f64]) -> Vec<Scalar> {
    re.iter().zip(im).map(|(&a, &b)| Scalar::new(a, b, B)).collect()
}

#[test]
fn isotropic_examples() {
    let mut c = ctx(1);
    let h = Matrix::from_f64(&[&[0.0, 1.0], &[1.0, 0.0]], B);
    let sub = isotropic_subspace(&h, 0, &mut c).unwrap();
    assert_eq!((sub.ambient(), sub.dim()), (1, 0));
    assert_isotropic(&h, &sub, &c);
    let v = &sub.basis()[0];
    assert!(v[0].mag() < 1e-60 || v[1].mag() < 1e-60);

    let i2 = Matrix::identity(2, B);
    let sub = isotropic_subspace(&i2, 0, &mut c).unwrap();
    assert_isotropic(&i2, &sub, &c);
    let plus = vec_c(&[1.0, 0.0], &[0.0, 1.0]);
    let minus = vec_c(&[1.0, 0.0], &[0.0, -1.0]);
    assert!(sub.contains(&plus, 1e-50) || sub.contains(&minus, 1e-50));

    let i4 = Matrix::identity(4, B);
    let known = LinearSubspace::new(vec![
        vec_c(&[1.0, 0.0, 0.0, 0.0], &[0.0, 1.0, 0.0, 0.0]),
        vec_c(&[0.0, 0.0, 1.0, 0.0], &[0.0, 0.0, 0.0, 1.0]),
    ])
    .unwrap();
    assert_isotropic(&i4, &known, &c);
    let before = c.log.len();
    let sub = isotropic_subspace(&i4, 1, &mut c).unwrap();
    assert_eq!(sub.dim(), 1);
    assert_isotropic(&i4, &sub, &c);
    let added = &c.log.entries()[before..];
    assert_eq!(added.len(), 2);
    assert!(added.iter().all(|e| e.degree == 2));
}

#[test]
fn isotropic_needs_room() {
    let mut c = ctx(2);
    let err = isotropic_subspace(&Matrix::identity(3, B), 1, &mut c).unwrap_err();
    assert_eq!(err, Error::AmbientTooSmall { required: 3, actual: 2 });
}

#[test]
fn isotropic_uses_radical() {
    let mut c = ctx(3);
    // x0² + x1² + x2² with x3, x4 in the radical
    let mut g = Matrix::zeros(5, 5, B);
    for i in 0..3 {
        g[(i, i)] = s(1.0);
    }
    let sub = isotropic_subspace(&g, 1, &mut c).unwrap();
    assert_isotropic(&g, &sub, &c);
}

#[test]
fn quadric_surface_examples() {
    let mut c = ctx(4);
    let seg = MultiPoly::from_terms(
        4,
        2,
        [(mono(4, &[(0, 1), (3, 1)]), s(1.0)), (mono(4, &[(1, 1), (2, 1)]), s(-1.0))],
    );
    let e0 = vec_c(&[1.0, 0.0, 0.0, 0.0], &[0.0; 4]);
    let e1 = vec_c(&[0.0, 1.0, 0.0, 0.0], &[0.0; 4]);
    assert!(LinearSubspace::new(vec![e0, e1]).unwrap().lies_on(&seg, 1e-70));
    let l = line_on_quadric_surface(&seg, &mut c).unwrap();
    on_line(&[&seg], &l, &c);

    let sq = MultiPoly::from_terms(4, 2, (0..4).map(|i| (mono(4, &[(i, 2)]), s(1.0))));
    let l = line_on_quadric_surface(&sq, &mut c).unwrap();
    on_line(&[&sq], &l, &c);

    let q = random_poly(4, 2, 44);
    let l = line_on_quadric_surface(&q, &mut c).unwrap();
    on_line(&[&q], &l, &c);
    assert_eq!(c.log.max_degree(), 2);
}

#[test]
fn quadric_surface_rank_collapse() {
    let mut c = ctx(5);
    let q = MultiPoly::from_terms(4, 2, [(mono(4, &[(0, 1), (1, 1)]), s(1.0))]);
    assert!(matches!(line_on_quadric_surface(&q, &mut c), Err(Error::RankCollapse(_))));
}

#[test]
fn cubic_line_examples() {
    let mut c = ctx(6);
    let f = fermat(6);
    let known = LinearSubspace::new(vec![
        vec_c(&[1.0, -1.0, 0.0, 0.0, 0.0, 0.0], &[0.0; 6]),
        vec_c(&[0.0, 0.0, 1.0, -1.0, 0.0, 0.0], &[0.0; 6]),
    ])
    .unwrap();
    assert!(known.lies_on(&f, 1e-70));
    let l = line_on_cubic(&f, &mut c).unwrap();
    on_line(&[&f], &l, &c);
    assert!(LinearSubspace::from(&l).lies_on(&f, lim(&c)));

    // x0 · (random quadric)
    let x0 = MultiPoly::linear(&vec_c(&[1.0, 0.0, 0.0, 0.0, 0.0, 0.0], &[0.0; 6]));
    let g = x0.mul(&random_poly(6, 2, 61));
    let l = line_on_cubic(&g, &mut c).unwrap();
    on_line(&[&g], &l, &c);
    assert!(c.log.max_degree() <= 3);
}

#[test]
fn cubic_line_random() {
    for (seed, nvars) in [(70, 6), (71, 6), (72, 8)] {
        let mut c = ctx(seed);
        let f = random_poly(nvars, 3, seed);
        let l = line_on_cubic(&f, &mut c).unwrap();
        on_line(&[&f], &l, &c);
        assert_eq!(c.log.max_degree(), 3);
    }
    let mut c = ctx(73);
    assert_eq!(
        line_on_cubic(&random_poly(5, 3, 73), &mut c).unwrap_err(),
        Error::AmbientTooSmall { required: 5, actual: 4 }
    );
}

#[test]
fn pencil_examples() {
    let mut c = ctx(8);
    let q1 = MultiPoly::from_terms(5, 2, [(mono(5, &[(0, 1), (1, 1)]), s(1.0))]);
    let q2 = MultiPoly::from_terms(5, 2, [(mono(5, &[(2, 1), (3, 1)]), s(1.0))]);
    let known = LinearSubspace::new(vec![
        vec_c(&[0.0, 1.0, 0.0, 0.0, 0.0], &[0.0; 5]),
        vec_c(&[0.0, 0.0, 0.0, 1.0, 0.0], &[0.0; 5]),
    ])
    .unwrap();
    assert!(known.lies_on(&q1, 1e-70) && known.lies_on(&q2, 1e-70));
    let pencil = QuadricPencil::from_quadrics(&q1, &q2).unwrap();
    let l = line_on_two_quadrics_p4(&pencil, &mut c).unwrap();
    on_line(&[&q1, &q2], &l, &c);

    // a rank-4 quadric taken twice
    let q = MultiPoly::from_terms(5, 2, (0..4).map(|i| (mono(5, &[(i, 2)]), s(1.0 + i as f64))));
    let pencil = QuadricPencil::from_quadrics(&q, &q).unwrap();
    let l = line_on_two_quadrics_p4(&pencil, &mut c).unwrap();
    on_line(&[&q], &l, &c);
    assert!(c.log.max_degree() <= 5);
}

#[test]
fn pencil_random() {
    for seed in 90..94 {
        let mut c = ctx(seed);
        let (q1, q2) = (random_poly(5, 2, seed), random_poly(5, 2, seed + 100));
        let pencil = QuadricPencil::from_quadrics(&q1, &q2).unwrap();
        let l = line_on_two_quadrics_p4(&pencil, &mut c).unwrap();
        on_line(&[&q1, &q2], &l, &c);
        assert_eq!(c.log.max_degree(), 5);
    }
}

#[test]
fn pencil_rejects_other_ambients() {
    let mut c = ctx(9);
    let g = Matrix::identity(4, B);
    let p = QuadricPencil::new(g.clone(), g).unwrap();
    assert_eq!(
        line_on_two_quadrics_p4(&p, &mut c).unwrap_err(),
        Error::AmbientTooSmall { required: 4, actual: 3 }
    );
    let bad = Matrix::from_f64(&[&[0.0, 1.0], &[0.0, 0.0]], B);
    assert!(QuadricPencil::new(bad.clone(), bad).is_err());
}

fn fermat_plane(nvars: usize) -> LinearSubspace {
    let row = |k: usize| {
        let mut re = vec![0.0; nvars];
        re[2 * k] = 1.0;
        re[2 * k + 1] = -1.0;
        vec_c(&re, &vec![0.0; nvars])
    };
    LinearSubspace::new(vec![row(0), row(1), row(2)]).unwrap()
}

#[test]
fn strict_plane_examples() {
    let f = fermat(12);
    assert!(fermat_plane(12).lies_on(&f, 1e-70));
    let mut c = ctx(10);
    let p = plane_on_cubic_strict(&f, &mut c).unwrap();
    assert_eq!((p.ambient(), p.dim()), (11, 2));
    assert!(p.lies_on(&f, lim(&c)));
    assert!(c.log.max_degree() <= 3);

    let mut x0 = vec![0.0; 12];
    x0[0] = 1.0;
    let g = MultiPoly::linear(&vec_c(&x0, &[0.0; 12])).mul(&random_poly(12, 2, 101));
    let mut c = ctx(11);
    let p = plane_on_cubic_strict(&g, &mut c).unwrap();
    assert!(p.lies_on(&g, lim(&c)));
    assert!(c.log.max_degree() <= 3);
}

#[test]
fn strict_plane_random_contains_its_line() {
    let f = random_poly(12, 3, 120);
    let mut c = ctx(12);
    let p = plane_on_cubic_strict(&f, &mut c).unwrap();
    assert!(p.lies_on(&f, lim(&c)));
    assert_eq!(c.log.max_degree(), 3);
    // the same seed reproduces the line the plane was built on
    let l = line_on_cubic(&f, &mut ctx(12)).unwrap();
    let (a, b) = l.points();
    assert!(p.contains(a.coords(), 1e-40) && p.contains(b.coords(), 1e-40));
    assert_eq!(
        plane_on_cubic_strict(&random_poly(11, 3, 1), &mut ctx(1)).unwrap_err(),
        Error::AmbientTooSmall { required: 11, actual: 10 }
    );
}

#[test]
fn segre_plane_examples() {
    let f = fermat(10);
    assert!(fermat_plane(10).lies_on(&f, 1e-70));
    let mut c = ctx(13);
    let p = plane_on_cubic_segre(&f, &mut c).unwrap();
    assert!(p.lies_on(&f, lim(&c)));
    assert!(c.log.max_degree() <= 5);
}

#[test]
fn segre_plane_random() {
    for seed in [140, 141] {
        let f = random_poly(10, 3, seed);
        let mut c = ctx(seed);
        let p = plane_on_cubic_segre(&f, &mut c).unwrap();
        assert_eq!((p.ambient(), p.dim()), (9, 2));
        assert!(p.lies_on(&f, lim(&c)));
        assert_eq!(c.log.max_degree(), 5);
        let l = line_on_cubic(&f, &mut ctx(seed)).unwrap();
        let (a, b) = l.points();
        assert!(p.contains(a.coords(), 1e-40) && p.contains(b.coords(), 1e-40));
    }
}

#[test]
fn binomial_curves_meet_in_twenty_points() {
    let mut c = ctx(15);
    let c4 = MultiPoly::from_terms(3, 4, [(mono(3, &[(0, 4)]), s(1.0)), (mono(3, &[(2, 4)]), s(-1.0))]);
    let c5 = MultiPoly::from_terms(3, 5, [(mono(3, &[(1, 5)]), s(1.0)), (mono(3, &[(2, 5)]), s(-1.0))]);
    let pts = intersect_plane_curves(&c4, &c5, &mut c).unwrap();
    assert_eq!(pts.len(), 20);
    for p in &pts {
        let x = p.coords();
        let (u, v) = (&x[0] / &x[2], &x[1] / &x[2]);
        assert!((u.powi(4).mag() - 1.0).abs() < 1e-50 && (v.powi(5).mag() - 1.0).abs() < 1e-50);
        assert!((&u.powi(4) - &s(1.0)).mag() < 1e-50 && (&v.powi(5) - &s(1.0)).mag() < 1e-50);
    }
    assert!(c.log.max_degree() <= 20);
}

#[test]
fn monomial_curves_meet_once() {
    let mut c = ctx(16);
    let c4 = MultiPoly::from_terms(3, 4, [(mono(3, &[(0, 4)]), s(1.0))]);
    let c5 = MultiPoly::from_terms(3, 5, [(mono(3, &[(1, 5)]), s(1.0))]);
    let pts = intersect_plane_curves(&c4, &c5, &mut c).unwrap();
    assert_eq!(pts.len(), 1);
    let origin = ProjPoint::from_f64(&[0.0, 0.0, 1.0], B).unwrap();
    assert!(pts[0].distance(&origin) < 1e-50);
}

#[test]
fn random_curves_intersect() {
    for seed in [170, 171, 172] {
        let mut c = ctx(seed);
        let (c4, c5) = (random_poly(3, 4, seed), random_poly(3, 5, seed + 50));
        let pts = intersect_plane_curves(&c4, &c5, &mut c).unwrap();
        assert!(!pts.is_empty() && pts.len() <= 20);
        let (e4, e5) = (Equation::explicit(c4), Equation::explicit(c5));
        for p in &pts {
            assert!(e4.residual(p.coords()) <= c.tol() && e5.residual(p.coords()) <= c.tol());
        }
        assert_eq!(c.log.max_degree(), 20);
    }
}

#[test]
fn shared_component_is_reported() {
    let mut c = ctx(18);
    let l = MultiPoly::linear(&vec_c(&[1.0, 2.0, -1.0], &[0.0; 3]));
    let c4 = l.mul(&random_poly(3, 3, 1));
    let c5 = l.mul(&random_poly(3, 4, 2));
    assert_eq!(intersect_plane_curves(&c4, &c5, &mut c).unwrap_err(), Error::CommonComponent);
}

#[test]
fn subspace_json_shape() {
    let sub = fermat_plane(6);
    let v: serde_json::Value = serde_json::to_value(&sub).unwrap();
    assert_eq!(v["ambient"], 5);
    assert_eq!(v["dim"], 2);
    assert_eq!(v["basis"].as_array().unwrap().len(), 3);
    let back: LinearSubspace = serde_json::from_value(v).unwrap();
    assert_eq!(back, sub);
    assert!(LinearSubspace::new(vec![vec_c(&[1.0, 0.0], &[0.0; 2]), vec_c(&[2.0, 0.0], &[0.0; 2])]).is_err());
}

fn symmetric(m: usize, seed: u64) -> Matrix {
    random_poly(m, 2, seed).polarize_quadratic()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn isotropic_basis_is_totally_isotropic(m in 2usize..8, seed in any::<u64>(), pick in any::<u32>()) {
        let r = pick as usize % (m / 2);
        let g = symmetric(m, seed);
        let mut c = ctx(seed);
        let sub = isotropic_subspace(&g, r, &mut c).unwrap();
        prop_assert_eq!(sub.dim(), r);
        let q = orthonormalize(sub.basis(), 0.0);
        prop_assert!(gram_on(&g, &q).norm_max() <= lim(&c) * g.norm_max());
        prop_assert_eq!(c.log.len(), r + 1);
        prop_assert_eq!(c.log.max_degree(), 2);
    }
}
