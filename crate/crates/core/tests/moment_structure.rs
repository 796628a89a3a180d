use randlind::analytic::mp_density;
use randlind::moments::*;
use randlind::quad::integrate;

#[test]
fn matrix_moments_preserve_trace_and_have_no_swap_part() {
    for n in [4usize, 8] {
        for order in 1..=3 {
            let d = matrix_moment_decompose(order, n, 1.0, 10_000, 0xab + n as u64).unwrap();
            let nf = n as f64;
            // Σᵢ (Sⁿ)_{ii,kl} = (A + N·B + C) δ_kl vanishes
            let combo = d.a + nf * d.b;
            let se = d.a_stderr + nf * d.b_stderr;
            assert!(combo.abs() <= 3.0 * se + 1e-12, "N = {n}, order {order}: {combo} ± {se}");
            assert!(d.c.abs() <= 3.0 * d.c_stderr + 1e-12, "N = {n}, order {order}: C = {} ± {}", d.c, d.c_stderr);
        }
    }
}

/// Points u_k at the midpoint quantiles of the MP law, so that power sums
/// over them approximate its moments.
fn mp_quantiles(count: usize) -> Vec<f64> {
    let cdf = |x: f64| integrate(|w: f64| 2.0 * w * mp_density(w * w, 1.0), 0.0, x.sqrt(), 1e-14, 1e-12).unwrap().value;
    (0..count)
        .map(|k| {
            let p = (k as f64 + 0.5) / count as f64;
            let (mut lo, mut hi) = (0.0, 4.0);
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if cdf(mid) < p {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            0.5 * (lo + hi)
        })
        .collect()
}

#[test]
fn noncrossing_moments_follow_the_binomial_identity() {
    let u = mp_quantiles(1500);
    for n in 0..=5usize {
        let binom = |q: usize| (1..=q).fold(1.0, |c, j| c * (n + 1 - j) as f64 / j as f64);
        let want: f64 = (0..=n).map(|q| binom(q) * wishart_moment(n - q, 1.0) * wishart_moment(q, 1.0)).sum();
        let got = noncrossing_moment_from_eigenvalues(&u, n).abs();
        assert!((got - want).abs() < 2e-3 * want, "n = {n}: {got} vs {want}");
    }
}
