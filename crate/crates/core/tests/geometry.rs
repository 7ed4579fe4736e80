use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use proptest::prelude::*;

use pirlab::geometry::{
    arc_length, build_pattern_stack, build_pattern_stack_with_tol, metrics_csv, panel_transforms, render_svg,
    renormalize, renormalized_level1, GridSpec, PiecewisePoly, Rational, SvgOptions,
};
use pirlab::relations::ptm_sequence;

fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

fn f(x: &Rational) -> f64 {
    x.to_f64().unwrap()
}

/// Composite 5-point Gauss-Legendre on √(1 + g²), where `g` is the
/// derivative supplied as a separate function.
fn gauss_arc_length(derivative: &PiecewisePoly, a: f64, b: f64, panels: usize) -> f64 {
    const X: [f64; 5] = [
        0.0,
        -0.538_469_310_105_683_1,
        0.538_469_310_105_683_1,
        -0.906_179_845_938_664,
        0.906_179_845_938_664,
    ];
    const W: [f64; 5] = [
        0.568_888_888_888_888_9,
        0.478_628_670_499_366_5,
        0.478_628_670_499_366_5,
        0.236_926_885_056_189_1,
        0.236_926_885_056_189_1,
    ];
    let h = (b - a) / panels as f64;
    (0..panels)
        .map(|p| {
            let mid = a + (p as f64 + 0.5) * h;
            X.iter()
                .zip(W)
                .map(|(x, w)| {
                    let g = derivative.eval_f64(mid + 0.5 * h * x);
                    w * (1.0 + g * g).sqrt()
                })
                .sum::<f64>()
                * 0.5
                * h
        })
        .sum()
}

#[test]
fn level2_values_by_hand() {
    let grid = GridSpec::new(q(1, 1), q(1, 1), 4).unwrap();
    let stack = build_pattern_stack(&ptm_sequence(4).unwrap(), &grid, 2).unwrap();
    let psi2 = &stack.functions[2];
    // t²/2 on [0,1], then 1/2 + u - u²/2 on [1,2]
    assert_eq!(psi2.eval(&q(1, 2)).unwrap(), q(1, 8));
    assert_eq!(psi2.eval(&q(3, 2)).unwrap(), q(7, 8));
    assert_eq!(psi2.eval(&q(2, 1)).unwrap(), q(1, 1));
    assert_eq!(psi2.integral(q(0, 1)..q(2, 1)).unwrap(), q(1, 1));
    assert_eq!(psi2.integral(q(0, 1)..q(4, 1)).unwrap(), q(2, 1));
}

#[test]
fn level1_triangle_from_ptm2() {
    let (eps, delta) = (q(3, 4), q(5, 3));
    let grid = GridSpec::new(eps.clone(), delta.clone(), 2).unwrap();
    let stack = build_pattern_stack(&ptm_sequence(2).unwrap(), &grid, 1).unwrap();
    let m = &stack.metrics[1][0];
    assert_eq!(m.width, &eps * q(2, 1));
    assert_eq!(m.height, &delta * &eps);
    assert_eq!(stack.functions[1].eval(&(&eps * q(2, 1))).unwrap(), q(0, 1));
}

#[test]
fn level0_metrics() {
    let (eps, delta) = (q(2, 5), q(7, 3));
    let grid = GridSpec::new(eps.clone(), delta.clone(), 4).unwrap();
    let stack = build_pattern_stack(&ptm_sequence(4).unwrap(), &grid, 2).unwrap();
    for m in &stack.metrics[0] {
        assert_eq!((&m.width, &m.height), (&eps, &delta));
        assert_eq!(m.area, &delta * &eps);
    }
    assert_eq!(stack.metrics[1][0].height, stack.metrics[0][0].area);
}

#[test]
fn renormalized_pattern_matches_level4() {
    let (eps, delta) = (q(3, 2), q(1, 3));
    let grid = GridSpec::new(eps.clone(), delta.clone(), 16).unwrap();
    let stack = build_pattern_stack(&ptm_sequence(16).unwrap(), &grid, 4).unwrap();
    let l4 = &stack.metrics[4][0];
    let params = renormalize(&grid);
    assert_eq!(&params.epsilon_prime * q(2, 1), l4.width);
    assert_eq!(&params.delta_prime * &params.epsilon_prime, l4.height);
    // δ'ε' = 8δε⁴ = H_4 = S_3
    assert_eq!(&params.delta_prime * &params.epsilon_prime, stack.metrics[3][0].area);

    let coarse = renormalized_level1(&ptm_sequence(2).unwrap(), &grid).unwrap();
    let span = q(0, 1)..grid.t(16);
    assert_eq!(coarse.domain(), span);
    assert_eq!(
        coarse.integral(span.clone()).unwrap(),
        stack.functions[4].integral(span).unwrap()
    );
}

#[test]
fn arc_length_agrees_with_gauss_oracle() {
    let grid = GridSpec::new(q(1, 1), q(1, 1), 16).unwrap();
    let stack = build_pattern_stack(&ptm_sequence(16).unwrap(), &grid, 4).unwrap();
    let adaptive = arc_length(&stack.functions[4], q(0, 1)..q(16, 1), 1e-9).unwrap();
    let oracle = gauss_arc_length(&stack.functions[3], 0.0, 16.0, 4096);
    assert!((adaptive - oracle).abs() < 1e-9, "{adaptive} vs {oracle}");

    let coarse = renormalized_level1(&ptm_sequence(2).unwrap(), &grid).unwrap();
    let tri = arc_length(&coarse, q(0, 1)..q(16, 1), 1e-9).unwrap();
    assert!((tri - 16.0 * 2f64.sqrt()).abs() < 1e-9);
    assert!((adaptive - tri).abs() / tri > 0.01);
}

#[test]
fn arc_length_of_partial_range() {
    let grid = GridSpec::new(q(1, 1), q(1, 1), 8).unwrap();
    let stack = build_pattern_stack(&ptm_sequence(8).unwrap(), &grid, 3).unwrap();
    let part = arc_length(&stack.functions[3], q(1, 3)..q(13, 2), 1e-10).unwrap();
    let oracle = gauss_arc_length(&stack.functions[2], 1.0 / 3.0, 6.5, 4096);
    assert!((part - oracle).abs() < 1e-9);
}

#[test]
fn svg_vertices_lie_on_exact_curves() {
    let grid = GridSpec::new(q(2, 3), q(5, 4), 8).unwrap();
    let stack = build_pattern_stack(&ptm_sequence(8).unwrap(), &grid, 3).unwrap();
    let options = SvgOptions::default();
    let svg = render_svg(&stack, &options);
    let transforms = panel_transforms(&stack, &options);
    let polylines: Vec<&str> = svg
        .split("points=\"")
        .skip(1)
        .map(|s| s.split('"').next().unwrap())
        .collect();
    assert_eq!(polylines.len(), 4);
    for (level, (points, tf)) in polylines.iter().zip(&transforms).enumerate() {
        let vertices: Vec<(f64, f64)> = points
            .split(' ')
            .map(|p| {
                let (x, y) = p.split_once(',').unwrap();
                (x.parse().unwrap(), y.parse().unwrap())
            })
            .collect();
        assert_eq!(vertices.len(), 8 * 32 + 1);
        for (k, (x, y)) in vertices.into_iter().enumerate() {
            let t = grid.epsilon() * q(k as i64, 32);
            let exact = f(&stack.functions[level].eval(&t).unwrap());
            let (tx, value) = tf.from_px(x, y);
            assert!((tx - f(&t)).abs() < 1e-9);
            assert!(
                (value - exact).abs() < 1e-9,
                "level {level} vertex {k}: {value} vs {exact}"
            );
        }
    }
    assert_eq!(svg, render_svg(&stack, &options));
}

#[test]
fn metrics_csv_layout() {
    let grid = GridSpec::new(q(1, 1), q(1, 1), 4).unwrap();
    let stack = build_pattern_stack_with_tol(&ptm_sequence(4).unwrap(), &grid, 2, 1e-9).unwrap();
    let csv = metrics_csv(&stack);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "level,block,width,height,area,arc_length");
    assert_eq!(lines.len(), 1 + 4 + 2 + 1);
    assert!(lines[7].starts_with("2,0:4,4/1,1/1,2/1,"));
}

fn rational_in_0_2() -> impl Strategy<Value = Rational> {
    (1i64..=40)
        .prop_flat_map(|d| (1i64..=2 * d, Just(d)))
        .prop_map(|(n, d)| q(n, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn exact_identities(eps in rational_in_0_2(), delta in rational_in_0_2(), m in 1u32..=5) {
        let len = 1usize << m;
        let grid = GridSpec::new(eps.clone(), delta.clone(), len).unwrap();
        let stack = build_pattern_stack_with_tol(&ptm_sequence(len).unwrap(), &grid, m as usize, 1e-6).unwrap();
        for l in 1..=m as usize {
            for (k, pat) in stack.metrics[l].iter().enumerate() {
                prop_assert_eq!(&pat.width, &(&eps * q(1 << l, 1)));
                prop_assert_eq!(&pat.height, &stack.metrics[l - 1][2 * k].area);
                prop_assert_eq!(&pat.area, &(&pat.width * &pat.height / q(2, 1)));
            }
        }
    }

    #[test]
    fn derivative_recovers_lower_level(eps in rational_in_0_2(), delta in rational_in_0_2()) {
        let grid = GridSpec::new(eps, delta, 16).unwrap();
        let stack = build_pattern_stack_with_tol(&ptm_sequence(16).unwrap(), &grid, 4, 1e-6).unwrap();
        for l in 0..4 {
            let d = stack.functions[l + 1].derivative();
            prop_assert_eq!(d.pieces(), stack.functions[l].pieces());
            prop_assert!(stack.functions[l + 1].max_jump().is_zero());
            prop_assert!(stack.functions[l + 1].degree() <= l + 1);
        }
    }

    #[test]
    fn sign_constancy(eps in rational_in_0_2(), delta in rational_in_0_2()) {
        let grid = GridSpec::new(eps, delta, 32).unwrap();
        let signs = ptm_sequence(32).unwrap();
        let stack = build_pattern_stack_with_tol(&signs, &grid, 5, 1e-6).unwrap();
        for l in 2..=5 {
            let psi = &stack.functions[l];
            for pat in &stack.metrics[l] {
                let orient = if signs.as_slice()[pat.block.start] > 0 { q(1, 1) } else { q(-1, 1) };
                let (lo, hi) = (pat.block.start as i64, pat.block.end as i64);
                let mid = grid.t(pat.block.start + (1 << (l - 1)));
                prop_assert_eq!(psi.eval(&mid).unwrap() * &orient, pat.height.clone());
                prop_assert!(psi.eval(&grid.t(pat.block.end)).unwrap().is_zero());
                for j in 0..=(hi - lo) * 8 {
                    let t = grid.epsilon() * q(lo * 8 + j, 8);
                    let v = psi.eval(&t).unwrap() * &orient;
                    prop_assert!(!v.is_negative());
                    prop_assert!(v <= pat.height);
                }
            }
        }
    }
}
