use num_complex::Complex64;
use proptest::prelude::*;
use zerocond::ensembles::{basis_eval, sample_section, weighted_value, ConditionSpec, Conditioner, EnsembleSpec};
use zerocond::kernels::{fs_distance, kernel_eval};
use zerocond::numerics::trial_rng;
use zerocond::zeros::find_zeros;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn conditioned_covariance_matches_projector() {
    let spec = EnsembleSpec::projective_line(3).unwrap();
    let cd = Conditioner::new(&spec, &ConditionSpec::vanishing_at(&[c(0.3, -0.4)]).unwrap()).unwrap();
    let proj = cd.kernel_projector(spec.dim());
    let d = spec.dim();
    let trials = 100_000;
    let mut cov = vec![Complex64::new(0.0, 0.0); d * d];
    for t in 0..trials {
        let s = cd.sample(&spec, &mut trial_rng(99, t));
        for i in 0..d {
            for j in 0..d {
                cov[i * d + j] += s.coeffs[i] * s.coeffs[j].conj();
            }
        }
    }
    // entries have standard error about 1/sqrt(trials)
    let tol = 5.0 / (trials as f64).sqrt();
    for i in 0..d {
        for j in 0..d {
            let e = cov[i * d + j] / trials as f64;
            assert!((e - proj[(i, j)]).norm() < tol, "({i},{j}): {e} vs {}", proj[(i, j)]);
        }
    }
}

#[test]
fn projector_has_rank_d_minus_r() {
    let spec = EnsembleSpec::projective_line(2).unwrap();
    let pts = [c(0.0, 0.0)];
    let cd = Conditioner::new(&spec, &ConditionSpec::vanishing_at(&pts).unwrap()).unwrap();
    let p = cd.kernel_projector(3);
    let p2 = &p * &p;
    assert!((&p2 - &p).norm() < 1e-14);
    let trace: f64 = (0..3).map(|i| p[(i, i)].re).sum();
    assert!((trace - 2.0).abs() < 1e-14);
    // vanishing at 0 kills exactly the constant term
    assert!(p[(0, 0)].norm() < 1e-15);
    let b = basis_eval(&spec, pts[0]).unwrap();
    let w = nalgebra::DVector::from_column_slice(&b.weighted);
    assert!((&p * w.conjugate()).norm() < 1e-14);
}

#[test]
fn vanishing_and_value_constraints_hold() {
    let spec = EnsembleSpec::projective_line(30).unwrap();
    let pts = [c(0.1, 0.2), c(-0.7, 0.0), c(2.0, 1.0)];
    let vals = [c(0.0, 0.0), c(0.5, -0.5), c(0.0, 1.0)];
    let cs = ConditionSpec::new(pts.iter().copied().zip(vals.iter().copied()).collect()).unwrap();
    let cd = Conditioner::new(&spec, &cs).unwrap();
    for t in 0..20 {
        let s = cd.sample(&spec, &mut trial_rng(3, t));
        for (p, v) in pts.iter().zip(&vals) {
            let got = weighted_value(&s, &basis_eval(&spec, *p).unwrap());
            assert!((got - v).norm() < 1e-12, "{p}: {got} vs {v}");
        }
    }
}

#[test]
fn unconditioned_zeros_are_uniform_on_the_sphere() {
    let n = 20;
    let spec = EnsembleSpec::projective_line(n).unwrap();
    let bins = 10;
    let samples = 10_000;
    let mut counts = vec![0u64; bins];
    let mut total = 0u64;
    for t in 0..samples {
        let zs = find_zeros(&sample_section(&spec, &mut trial_rng(17, t)), &spec).unwrap();
        assert_eq!(zs.total(), n as usize);
        for r in zs.affine_roots {
            let q = r.norm_sqr() / (1.0 + r.norm_sqr());
            counts[((q * bins as f64) as usize).min(bins - 1)] += 1;
            total += 1;
        }
    }
    let expected = total as f64 / bins as f64;
    let chi2: f64 = counts.iter().map(|&k| (k as f64 - expected).powi(2) / expected).sum();
    // 0.999 quantile of chi-square with 9 degrees of freedom
    assert!(chi2 < 27.88, "chi2 = {chi2}, counts {counts:?}");
}

#[test]
fn seeds_give_independent_streams() {
    let spec = EnsembleSpec::projective_line(5).unwrap();
    let a = sample_section(&spec, &mut trial_rng(1, 0));
    assert_eq!(a, sample_section(&spec, &mut trial_rng(1, 0)));
    assert_ne!(a, sample_section(&spec, &mut trial_rng(1, 1)));
    assert_ne!(a, sample_section(&spec, &mut trial_rng(2, 0)));
}

proptest! {
    #[test]
    fn kernel_is_invariant_under_sphere_rotations(
        zr in -3.0..3.0f64, zi in -3.0..3.0f64,
        wr in -3.0..3.0f64, wi in -3.0..3.0f64,
        ar in -0.9..0.9f64, ai in -0.9..0.9f64,
        theta in 0.0..6.3f64,
        n in 1u32..200,
    ) {
        let spec = EnsembleSpec::projective_line(n).unwrap();
        let (z, w, a) = (c(zr, zi), c(wr, wi), c(ar, ai));
        let rotor = Complex64::from_polar(1.0, theta);
        let mobius = |x: Complex64| rotor * (x - a) / (Complex64::new(1.0, 0.0) + a.conj() * x);
        let before = kernel_eval(&spec, z, w);
        let after = kernel_eval(&spec, mobius(z), mobius(w));
        prop_assert!((before.lambda_n - after.lambda_n).abs() <= 1e-9 * (1.0 + before.lambda_n));
        prop_assert!((fs_distance(z, w) - fs_distance(mobius(z), mobius(w))).abs() < 1e-10);
        prop_assert!(before.p_n <= 1.0 && before.p_n >= 0.0);
    }
}
