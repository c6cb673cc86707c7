//! Deterministic partitioning of the random stream.
//!
//! Every conditional draw in the sampler pulls from its own substream, keyed
//! by `(master seed, iteration, step, unit)`. Units that are conditionally
//! independent (regions, time points, volatility series) can therefore be
//! sampled in parallel while consuming exactly the same randomness as a
//! serial sweep, which is what makes multi-threaded runs bit-reproducible.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

/// Sampler steps, used both to key random substreams and to label errors.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GibbsStep {
    /// Initial parameter values and any start-up randomness.
    Init,
    /// Region coefficient draws (one unit per region).
    RegionCoeffs,
    /// Hierarchy variance draws.
    HierarchyVariances,
    /// Hierarchy mean draw.
    HierarchyMean,
    /// National coefficient draws.
    NationalCoeffs,
    /// Factor loading draws.
    Loadings,
    /// Latent factor draws (one unit per time point).
    Factors,
    /// Log-volatility path and parameter draws (one unit per series).
    Volatility,
    /// Synthetic data generation.
    Synthesis,
}

impl GibbsStep {
    fn tag(self) -> u64 {
        match self {
            GibbsStep::Init => 0,
            GibbsStep::RegionCoeffs => 1,
            GibbsStep::HierarchyVariances => 2,
            GibbsStep::HierarchyMean => 3,
            GibbsStep::NationalCoeffs => 4,
            GibbsStep::Loadings => 5,
            GibbsStep::Factors => 6,
            GibbsStep::Volatility => 7,
            GibbsStep::Synthesis => 8,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            GibbsStep::Init => "initialization",
            GibbsStep::RegionCoeffs => "region coefficients",
            GibbsStep::HierarchyVariances => "hierarchy variances",
            GibbsStep::HierarchyMean => "hierarchy mean",
            GibbsStep::NationalCoeffs => "national coefficients",
            GibbsStep::Loadings => "factor loadings",
            GibbsStep::Factors => "latent factors",
            GibbsStep::Volatility => "log volatilities",
            GibbsStep::Synthesis => "synthetic data",
        }
    }
}

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer; good avalanche behavior for cheap key derivation.
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derive an independent generator for one `(iteration, step, unit)` address.
///
/// The address words are absorbed sequentially into a SplitMix64 state, then
/// the state is expanded into a 256-bit ChaCha key. Different addresses yield
/// (with overwhelming probability) unrelated streams; the same address always
/// yields the same stream.
pub fn substream(seed: u64, iteration: u64, step: GibbsStep, unit: u64) -> ChaCha12Rng {
    let mut state = mix(seed ^ GOLDEN);
    for word in [iteration, step.tag(), unit] {
        state = mix(state.wrapping_add(GOLDEN).wrapping_add(word));
    }
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        state = mix(state.wrapping_add(GOLDEN));
        chunk.copy_from_slice(&state.to_le_bytes());
    }
    ChaCha12Rng::from_seed(key)
}
