use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Fixed imaginary offset keeping sampled `P` off the real zero lattice of `[·]`.
pub const P_OFFSET: f64 = 0.137;

/// Seeded sampler; each suite draws from its own stream so results do not depend on suite order.
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { rng }
    }

    pub fn real(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.gen_range(lo..hi)
    }

    pub fn complex(&mut self, re: (f64, f64), im: (f64, f64)) -> C64 {
        C64::new(self.real(re.0, re.1), self.real(im.0, im.1))
    }

    /// Dynamical parameter: real part in `[-1.5, 1.5)`, imaginary part `0.137`.
    pub fn p_point(&mut self) -> C64 {
        C64::new(self.real(-1.5, 1.5), P_OFFSET)
    }

    pub fn p_points(&mut self, n: usize) -> Vec<C64> {
        (0..n).map(|_| self.p_point()).collect()
    }

    /// Spectral parameter in the box `[-1, 1) × [-0.3, 0.3)`.
    pub fn u_point(&mut self) -> C64 {
        self.complex((-1.0, 1.0), (-0.3, 0.3))
    }
}

/// Stable stream id for a suite name.
pub fn stream_id(name: &str) -> u64 {
    name.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0100_0000_01b3)
    })
}
