use mlsr::model::{grad_block, lipschitz_block, smooth_loss};
use mlsr::solver::{init_sparse_gaussian, run};
use mlsr::{Dataset, DenseTensor, ExtrapolationCheck, ModelParams, ProblemSpec, Schedule, SolverConfig};
use proptest::prelude::*;

fn instance() -> impl Strategy<Value = (Vec<usize>, Dataset, ModelParams)> {
    prop::collection::vec(1usize..=4, 1..=3).prop_flat_map(|dims| {
        let len: usize = dims.iter().product();
        let n = 6usize;
        (
            Just(dims.clone()),
            prop::collection::vec(prop::collection::vec(-2.0f64..2.0, len), n),
            prop::collection::vec(-1.0f64..1.0, dims.iter().sum::<usize>()),
            -0.5f64..0.5,
        )
            .prop_map(move |(dims, xs, flat, bias)| {
                let samples = xs.into_iter().map(|x| DenseTensor::new(dims.clone(), x).unwrap()).collect();
                let labels = (0..n).map(|i| if i % 2 == 0 { 1 } else { -1 }).collect();
                let mut blocks = Vec::new();
                let mut rest = flat.as_slice();
                for &d in &dims {
                    let (head, tail) = rest.split_at(d);
                    blocks.push(head.to_vec());
                    rest = tail;
                }
                (dims, Dataset::new(samples, labels).unwrap(), ModelParams::new(blocks, bias).unwrap())
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn block_descent_lemma((dims, ds, x) in instance(), step in prop::collection::vec(-1.0f64..1.0, 4), j_raw in 0usize..3) {
        let j = j_raw % dims.len();
        let spec = ProblemSpec::new(vec![2e-4; dims.len()], dims.clone(), 1.5, &dims).unwrap();
        let delta = &step[..dims[j]];
        let g = grad_block(&x, &ds, &spec, j).unwrap();
        let tau = lipschitz_block(&x, &ds, &spec, j).unwrap();
        let mut y = x.clone();
        y.blocks[j].iter_mut().zip(delta).for_each(|(w, d)| *w += d);
        let bound = smooth_loss(&x, &ds, &spec).unwrap()
            + g.iter().zip(delta).map(|(a, b)| a * b).sum::<f64>()
            + tau / 2.0 * delta.iter().map(|d| d * d).sum::<f64>();
        prop_assert!(smooth_loss(&y, &ds, &spec).unwrap() <= bound + 1e-10);
    }

    #[test]
    fn solver_objective_never_increases(
        (dims, ds, _) in instance(),
        seed in 0u64..1000,
        schedule in prop::sample::select(vec![Schedule::Adaptive, Schedule::None]),
        check in prop::sample::select(vec![ExtrapolationCheck::FullObjective, ExtrapolationCheck::SmoothOnly]),
    ) {
        let spec = ProblemSpec::from_fraction(vec![2e-4; dims.len()], 0.5, 1.5, &dims).unwrap();
        let init = init_sparse_gaussian(&dims, spec.sparsity(), seed).unwrap();
        let config = SolverConfig { schedule, extrapolation_check: check, max_iters: 60, record_time: false, ..Default::default() };
        let result = run(&spec, &ds, &init, &config).unwrap();
        let mut prev = smooth_loss(&init, &ds, &spec).unwrap();
        for t in &result.trace {
            prop_assert!(t.objective <= prev + 1e-10, "iter {}: {} > {}", t.iter, t.objective, prev);
            prop_assert!(t.nonzeros.iter().zip(spec.sparsity()).all(|(a, b)| a <= b));
            prev = t.objective;
        }
        prop_assert!(result.params.is_feasible(spec.sparsity()));
    }
}
