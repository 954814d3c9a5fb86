use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Deterministic random stream keyed by `(master_seed, stream_id)`.
///
/// Each stream is an independent ChaCha8 keystream: the master seed fixes the
/// key and the stream id selects the nonce, so a stream's draws never depend
/// on how many other streams exist or in which order they run.
#[derive(Debug, Clone)]
pub struct RandomStream {
    rng: ChaCha8Rng,
    master_seed: u64,
    stream_id: u64,
}

impl RandomStream {
    pub fn new(master_seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
        rng.set_stream(stream_id);
        Self { rng, master_seed, stream_id }
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Uniform on [0, 1).
    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    /// Uniform integer in `0..bound`.
    pub fn below(&mut self, bound: usize) -> usize {
        self.rng.random_range(0..bound)
    }

    pub fn bernoulli(&mut self, p: f64) -> bool {
        self.uniform() < p
    }

    /// Standard normal (ziggurat).
    pub fn gaussian(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_key_same_sequence() {
        let mut a = RandomStream::new(42, 7);
        let mut b = RandomStream::new(42, 7);
        for _ in 0..1000 {
            assert_eq!(a.gaussian().to_bits(), b.gaussian().to_bits());
        }
    }

    #[test]
    fn streams_do_not_depend_on_siblings() {
        let lone: Vec<u64> = {
            let mut s = RandomStream::new(9, 3);
            (0..50).map(|_| s.uniform().to_bits()).collect()
        };
        let mut others: Vec<RandomStream> = (0..5).map(|id| RandomStream::new(9, id)).collect();
        for s in others.iter_mut() {
            for _ in 0..17 {
                s.uniform();
            }
        }
        let again: Vec<u64> = (0..50).map(|_| others[3].uniform().to_bits()).collect();
        assert_ne!(lone, again, "advanced stream should differ from fresh one");
        let mut fresh = RandomStream::new(9, 3);
        let fresh: Vec<u64> = (0..50).map(|_| fresh.uniform().to_bits()).collect();
        assert_eq!(lone, fresh);
        assert_ne!(
            lone[..5],
            {
                let mut s = RandomStream::new(9, 4);
                (0..5).map(|_| s.uniform().to_bits()).collect::<Vec<_>>()
            }[..]
        );
    }

    #[test]
    fn gaussian_moments() {
        let n = 200_000;
        let mut s = RandomStream::new(1, 0);
        let draws: Vec<f64> = (0..n).map(|_| s.gaussian()).collect();
        let mean = draws.iter().sum::<f64>() / n as f64;
        let var = draws.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        let se_mean = (1.0 / n as f64).sqrt();
        let se_var = (2.0 / n as f64).sqrt();
        assert!(mean.abs() < 4.0 * se_mean, "mean {mean}");
        assert!((var - 1.0).abs() < 4.0 * se_var, "var {var}");
    }
}
