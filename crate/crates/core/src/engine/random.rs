//! Seeded random message-passing programs.
//!
//! Used wherever a claim must hold for *generic* programs rather than
//! hand-picked ones: fuzzing the equivariance checker, demonstrating that
//! no program in the family reaches an incompatible target. Constants are
//! small rationals so the same program runs bit-identically in exact mode
//! and sensibly in float mode; the squash inside
//! [`crate::engine::RandomAffine`] keeps float values bounded.

use crate::engine::{GnnProgram, MessageFn, RandomAffine};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A family of random programs with a fixed layer shape.
#[derive(Debug, Clone)]
pub struct RandomProgramFamily {
    pub d_in: usize,
    /// Output dimension of each layer, in order.
    pub layer_dims: Vec<usize>,
}

impl RandomProgramFamily {
    /// Two layers tapering to scalar output — the default demo shape.
    pub fn default_shape(d_in: usize) -> Self {
        RandomProgramFamily {
            d_in,
            layer_dims: vec![2, 1],
        }
    }

    /// Sample one program. Deterministic in the seed.
    pub fn sample(&self, seed: u64) -> GnnProgram {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut layers = Vec::with_capacity(self.layer_dims.len());
        let mut in_dim = self.d_in;
        for &out_dim in &self.layer_dims {
            let cols = 2 * in_dim + 1;
            let weights: Vec<Vec<i64>> = (0..out_dim)
                .map(|_| (0..cols).map(|_| rng.gen_range(-4..=4)).collect())
                .collect();
            let bias: Vec<i64> = (0..out_dim).map(|_| rng.gen_range(-4..=4)).collect();
            layers.push(MessageFn::RandomAffine(RandomAffine {
                in_dim,
                out_dim,
                weights,
                bias,
                denom: 2,
            }));
            in_dim = out_dim;
        }
        GnnProgram {
            d_in: self.d_in,
            layers,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::run_gnn;
    use crate::graph::Graph;
    use crate::scalar::{Scalar, ScalarKind};

    #[test]
    fn sampling_is_deterministic_in_the_seed() {
        let fam = RandomProgramFamily::default_shape(1);
        let a = fam.sample(5);
        let b = fam.sample(5);
        let g = Graph::unit_complete(3, 1, ScalarKind::Rational).unwrap();
        assert_eq!(run_gnn(&a, &g).unwrap(), run_gnn(&b, &g).unwrap());
        let c = fam.sample(6);
        // Different seeds give different programs (overwhelmingly).
        assert_ne!(run_gnn(&a, &g).unwrap(), run_gnn(&c, &g).unwrap());
    }

    #[test]
    fn sampled_programs_have_the_declared_shape() {
        let fam = RandomProgramFamily {
            d_in: 2,
            layer_dims: vec![3, 2, 1],
        };
        let prog = fam.sample(0);
        assert_eq!(prog.layer_dims(), vec![2, 3, 2, 1]);
    }

    #[test]
    fn exact_and_float_runs_agree_closely() {
        let fam = RandomProgramFamily::default_shape(1);
        let prog = fam.sample(9);
        let ge = Graph::from_upper(
            3,
            1,
            ScalarKind::Rational,
            vec![Scalar::from_int(1), Scalar::from_int(2), Scalar::from_int(3)],
            vec![
                vec![Scalar::from_int(1)],
                vec![Scalar::from_int(2)],
                vec![Scalar::from_int(3)],
            ],
        )
        .unwrap();
        let gf = Graph::from_upper(
            3,
            1,
            ScalarKind::Float,
            vec![Scalar::Float(1.0), Scalar::Float(2.0), Scalar::Float(3.0)],
            vec![
                vec![Scalar::Float(1.0)],
                vec![Scalar::Float(2.0)],
                vec![Scalar::Float(3.0)],
            ],
        )
        .unwrap();
        let he = run_gnn(&prog, &ge).unwrap();
        let hf = run_gnn(&prog, &gf).unwrap();
        for (re, rf) in he.iter().zip(&hf) {
            for (a, b) in re.iter().zip(rf) {
                assert!((a.to_f64() - b.to_f64()).abs() < 1e-9);
            }
        }
    }
}
