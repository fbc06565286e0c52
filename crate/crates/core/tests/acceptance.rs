//! End-to-end acceptance run. Prints one line per criterion and exits
//! nonzero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tschirnhaus::geometry::{line_on_cubic, plane_on_cubic_segre, LinearSubspace};
use tschirnhaus::multipoly::{LinearMap, MultiPoly};
use tschirnhaus::numeric::{hessenberg_eigenvalues, orthonormalize, Context, PrecisionConfig, Scalar, UniPoly};
use tschirnhaus::obliteration::{line_bound, point_bound, DegreeProfile};
use tschirnhaus::pipeline::{quintic_solve_demo, remove5, verify_certificate, Certificate, Variant};
use tschirnhaus::transform::{companion_matrix, leading_via_companion, transform, MonicPoly, Transformation};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(started: Instant, budget: Duration) -> Result<(), String> {
    let t = started.elapsed();
    ensure(t <= budget, || format!("took {t:.1?}, budget {budget:?}"))
}

fn random_int_poly(n: usize, seed: u64, bits: usize) -> MonicPoly {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a: Vec<i64> = (0..n).map(|_| rng.gen_range(-5..=5)).collect();
    MonicPoly::from_i64(&a, bits).unwrap()
}

/// Largest coefficient of `f` on `span(basis)`, against the largest
/// coefficient of `f`, along an orthonormal basis.
fn vanishing_residual(f: &MultiPoly, basis: &[Vec<Scalar>]) -> f64 {
    let q = orthonormalize(basis, 0.0);
    f.substitute_linear(&LinearMap::from_columns(&q)).max_abs_coeff() / f.max_abs_coeff()
}

/// `|A_i| / max(1, R)^i` for `i ≤ k`, with `A_i` from traces of powers of
/// `T(C_p)` at twice the certificate's precision.
fn companion_residuals(cert: &Certificate) -> Vec<f64> {
    let bits = 2 * cert.precision.bits;
    let p = cert.input.with_bits(bits);
    let b: Vec<Scalar> = cert.transformation.b().iter().map(|c| c.with_bits(bits)).collect();
    let q = &cert.transformed;
    let r = (cert.k + 1..=q.n())
        .map(|j| q.coeff(j).mag().powf(1.0 / j as f64))
        .fold(1.0, f64::max);
    leading_via_companion(&p, &b, cert.k)
        .iter()
        .enumerate()
        .map(|(i, a)| a.mag() / r.powi(i as i32 + 1))
        .collect()
}

fn max(v: &[f64]) -> f64 {
    v.iter().cloned().fold(0.0, f64::max)
}

fn non_illusory(t: &Transformation, n: usize) -> bool {
    t.n() == n && t.b().iter().any(|c| !c.is_zero()) && t.degree() < n
}

fn same_roots(got: &[Scalar], want: &[Scalar]) -> f64 {
    if got.len() != want.len() {
        return f64::INFINITY;
    }
    let mut used = vec![false; want.len()];
    let mut worst: f64 = 0.0;
    for g in got {
        let (j, d) = want
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, w)| (j, (g - w).mag() / w.mag().max(1.0)))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        used[j] = true;
        worst = worst.max(d);
    }
    worst
}

fn bound_table() -> Outcome {
    let l1 = line_bound(&DegreeProfile::new(vec![1, 0, 0]).unwrap());
    let l2 = line_bound(&DegreeProfile::new(vec![2, 3]).unwrap());
    let minimal: Vec<usize> = (3..=5).map(|k| point_bound(&DegreeProfile::staircase(k)) + 1).collect();
    ensure(l1 == 5 && l2 == 9 && minimal == [5, 11, 47], || {
        format!("line bounds {l1}, {l2}; minimal n {minimal:?}")
    })?;
    Ok(format!("line [1,0,0] = {l1}, line [2,3] = {l2}, minimal n for k = 3,4,5: {minimal:?}"))
}

fn lines_on_cubics() -> Outcome {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut worst, mut deg) = (0.0f64, 0);
    for i in 0..25 {
        let f = MultiPoly::random(6, 3, 256, &mut rng);
        let mut ctx = Context::new(PrecisionConfig::with_bits(256).seed(i));
        let line = line_on_cubic(&f, &mut ctx).map_err(|e| format!("cubic {i}: {e}"))?;
        let (a, b) = line.points();
        worst = worst.max(vanishing_residual(&f, &[a.coords().to_vec(), b.coords().to_vec()]));
        deg = deg.max(ctx.log.max_degree());
    }
    ensure(worst <= 1e-25 && deg <= 3, || format!("residual {worst:.2e}, max degree {deg}"))?;
    within(started, Duration::from_secs(30))?;
    Ok(format!("25 lines, residual ≤ {worst:.2e}, max degree {deg}, {:.1?}", started.elapsed()))
}

fn planes_on_cubics() -> Outcome {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut worst, mut deg) = (0.0f64, 0);
    for i in 0..10 {
        let f = MultiPoly::random(10, 3, 256, &mut rng);
        let mut ctx = Context::new(PrecisionConfig::with_bits(256).seed(i));
        let plane: LinearSubspace = plane_on_cubic_segre(&f, &mut ctx).map_err(|e| format!("cubic {i}: {e}"))?;
        ensure(plane.dim() == 2, || format!("cubic {i}: got a P^{}", plane.dim()))?;
        worst = worst.max(vanishing_residual(&f, plane.basis()));
        deg = deg.max(ctx.log.max_degree());
    }
    ensure(worst <= 1e-20 && deg <= 5, || format!("residual {worst:.2e}, max degree {deg}"))?;
    within(started, Duration::from_secs(300))?;
    Ok(format!("10 planes, residual ≤ {worst:.2e}, max degree {deg}, {:.1?}", started.elapsed()))
}

fn remove5_batch(variant: Variant, n: usize, emitted: &mut Vec<Transformation>) -> Result<(Vec<String>, String), String> {
    let mut json = Vec::new();
    let (mut worst, mut deg, mut geo) = (0.0f64, 0, 0);
    let mut slowest = Duration::ZERO;
    for i in 0..5u64 {
        let started = Instant::now();
        let p = random_int_poly(n, 100 + i, 512);
        let cfg = PrecisionConfig::with_bits(512).seed(i);
        let cert = remove5(&p, variant, &cfg).map_err(|e| format!("instance {i}: {e}"))?;
        slowest = slowest.max(started.elapsed());
        let res = companion_residuals(&cert);
        worst = worst.max(max(&res));
        deg = deg.max(cert.solve_log.max_degree());
        geo = geo.max(cert.solve_log.max_degree_in("geometry"));
        let report = verify_certificate(&cert, &cfg);
        ensure(report.passed(), || format!("instance {i}:\n{report}"))?;
        emitted.push(cert.transformation.clone());
        json.push(cert.to_json());
    }
    let geo_cap = if variant == Variant::Strict { 3 } else { 5 };
    ensure(worst <= 1e-15 && deg <= 20 && geo <= geo_cap, || {
        format!("residual {worst:.2e}, max degree {deg}, geometry degree {geo}")
    })?;
    ensure(slowest <= Duration::from_secs(600), || format!("slowest instance {slowest:.1?}"))?;
    Ok((
        json,
        format!(
            "5 certificates at n = {n}, |A_1..A_5| ≤ {worst:.2e}, max degree {deg}, geometry degree {geo}, verified, slowest {slowest:.1?}"
        ),
    ))
}

fn quintic_demo(emitted: &mut Vec<Transformation>) -> Outcome {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut inputs = vec![MonicPoly::from_i64(&[0, 0, 0, -1, -1], 256).unwrap()];
    for _ in 0..20 {
        let a: Vec<Scalar> = (0..5)
            .map(|_| Scalar::new(rng.gen_range(-4.0..4.0), rng.gen_range(-4.0..4.0), 256))
            .collect();
        inputs.push(MonicPoly::new(a).unwrap());
    }
    let (mut root_err, mut res) = (0.0f64, 0.0f64);
    for (i, p) in inputs.iter().enumerate() {
        let cfg = PrecisionConfig::with_bits(256).seed(i as u64);
        let sol = quintic_solve_demo(p, &cfg).map_err(|e| format!("quintic {i}: {e}"))?;
        let oracle = hessenberg_eigenvalues(&companion_matrix(p)).map_err(|e| e.to_string())?;
        root_err = root_err.max(same_roots(&sol.roots, &oracle));
        res = res.max(max(&companion_residuals(&sol.certificate)));
        emitted.push(sol.certificate.transformation.clone());
    }
    ensure(root_err <= 1e-10 && res <= 1e-25, || format!("roots off by {root_err:.2e}, residual {res:.2e}"))?;
    within(started, Duration::from_secs(10))?;
    Ok(format!(
        "21 quintics, roots within {root_err:.2e} of the eigenvalue oracle, k = 3 residual ≤ {res:.2e}, {:.1?}",
        started.elapsed()
    ))
}

fn transform_oracle() -> Outcome {
    let started = Instant::now();
    const B: usize = 256;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0.0f64;
    for i in 0..200 {
        let n = rng.gen_range(1..=12);
        let a: Vec<Scalar> = (0..n)
            .map(|_| Scalar::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0), B))
            .collect();
        let b: Vec<Scalar> = (0..n)
            .map(|_| Scalar::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), B))
            .collect();
        let p = MonicPoly::new(a).unwrap();
        let t = Transformation::new(b).unwrap();
        let q = transform(&p, &t);
        let wide = p.with_bits(2 * B);
        let xs = hessenberg_eigenvalues(&companion_matrix(&wide)).map_err(|e| format!("pair {i}: {e}"))?;
        let tw = t.with_bits(2 * B).to_unipoly();
        let ys: Vec<Scalar> = xs.iter().map(|x| tw.eval(x)).collect();
        let oracle = MonicPoly::from_unipoly(&UniPoly::from_roots(&ys, 2 * B)).unwrap();
        let scale = oracle.a().iter().map(Scalar::mag).fold(1.0, f64::max);
        for (x, y) in q.a().iter().zip(oracle.a()) {
            worst = worst.max((&x.with_bits(2 * B) - y).mag() / scale);
        }
    }
    ensure(worst <= 1e-20, || format!("largest relative difference {worst:.2e}"))?;
    within(started, Duration::from_secs(60))?;
    Ok(format!("200 pairs, n ≤ 12, largest relative difference {worst:.2e}, {:.1?}", started.elapsed()))
}

fn main() -> std::process::ExitCode {
    let mut lines: Vec<(String, Outcome)> = Vec::new();
    let mut emitted: Vec<(usize, Transformation)> = Vec::new();
    let run = |name: &str, lines: &mut Vec<(String, Outcome)>, f: &mut dyn FnMut() -> Outcome| {
        let out = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let (mark, detail) = match &out {
            Ok(s) => ("PASS", s),
            Err(s) => ("FAIL", s),
        };
        println!("[{mark}] {name}: {detail}");
        lines.push((name.to_string(), out));
    };

    run("1 bound table", &mut lines, &mut bound_table);
    run("2 lines on cubic fourfolds", &mut lines, &mut lines_on_cubics);
    run("3 planes on cubics in P^9", &mut lines, &mut planes_on_cubics);

    let mut first = None;
    run("4 remove5 segre, n = 21", &mut lines, &mut || {
        let mut ts = Vec::new();
        let r = remove5_batch(Variant::Segre, 21, &mut ts);
        emitted.extend(ts.into_iter().map(|t| (21, t)));
        r.map(|(json, msg)| {
            first = Some(json);
            msg
        })
    });
    run("5 remove5 strict, n = 25", &mut lines, &mut || {
        let mut ts = Vec::new();
        let r = remove5_batch(Variant::Strict, 25, &mut ts);
        emitted.extend(ts.into_iter().map(|t| (25, t)));
        r.map(|(_, msg)| msg)
    });
    run("6 quintic demo", &mut lines, &mut || {
        let mut ts = Vec::new();
        let r = quintic_demo(&mut ts);
        emitted.extend(ts.into_iter().map(|t| (5, t)));
        r
    });
    run("7 transform vs root-product oracle", &mut lines, &mut transform_oracle);
    run("8 non-illusory transformations", &mut lines, &mut || {
        let bad = emitted.iter().filter(|(n, t)| !non_illusory(t, *n)).count();
        ensure(!emitted.is_empty() && bad == 0, || format!("{bad} of {} illusory", emitted.len()))?;
        Ok(format!("{} transformations, all nonzero with degree ≤ n − 1", emitted.len()))
    });
    run("9 deterministic rerun of 4", &mut lines, &mut || {
        let before = first.clone().ok_or("criterion 4 produced nothing to compare")?;
        let (again, _) = remove5_batch(Variant::Segre, 21, &mut Vec::new())?;
        let same = before.iter().zip(&again).filter(|(a, b)| a == b).count();
        ensure(same == before.len() && again.len() == before.len(), || {
            format!("{same} of {} certificates identical", before.len())
        })?;
        Ok(format!("{same} certificates byte-identical"))
    });

    let failed: Vec<&str> = lines.iter().filter(|(_, o)| o.is_err()).map(|(n, _)| n.as_str()).collect();
    if failed.is_empty() {
        println!("acceptance: all {} criteria passed", lines.len());
        std::process::ExitCode::SUCCESS
    } else {
        println!("acceptance: failed {failed:?}");
        std::process::ExitCode::FAILURE
    }
}
