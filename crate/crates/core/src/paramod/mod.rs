//! Finite-precision shadows of the paramodular-group statements: membership
//! for the type `(1^n, 2^k)`, the involutions, the subgroups `L`, `U`,
//! `U^opp`, the displayed commutator identities and spanning claims, the
//! constructive generation of `Γ = ker(red_D)`, commutator expressions for
//! its generators, and the odd-prime congruence kernel.
//!
//! `Z_2` is replaced by `Z/2^64` with tracked precision; every statement is
//! checked modulo `2^bits` for a configurable `bits` (default 4).

mod commutators;
mod identities;
mod mat;
mod oddp;
mod para;
mod reduce;

pub use commutators::{
    express_element, express_generators_as_commutators, express_l_prime, express_u_opp, express_u_prime,
    sp_f2_derived_order, CommutatorExpression, GeneratorFamily,
};
pub use identities::{
    level_two_commutators_in_sp_4_8, red_d_image_order, verify_commutator_identities, verify_involutions,
    verify_spanning_claims,
};
pub use mat::{inv_odd, mask, Mat2, FULL_PRECISION};
pub use oddp::{odd_p_kernel_abelianization, OddKernelReport};
pub use para::{
    alpha, beta, embed_alpha, embed_beta, embed_beta_opp, is_l_prime, is_u_para, is_u_prime, random_gl,
    random_l_prime, random_letter, random_u_prime, reduce_entries, word_product, Letter, ParaMatrix, ParaShape,
};
pub use reduce::{random_gamma_word, reduce_to_identity, Reduction};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;

/// Default comparison precision: modulo `2^4`.
pub const DEFAULT_BITS: u32 = 4;

/// Outcome of one finite-precision check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShadowCheck {
    pub name: String,
    pub passed: bool,
    pub trials: usize,
    pub detail: String,
    pub counterexample: Option<String>,
}

impl ShadowCheck {
    pub fn exact(name: &str, passed: bool, detail: String) -> Self {
        ShadowCheck { name: name.to_string(), passed, trials: 1, detail, counterexample: None }
    }
}

/// A per-trial generator: independent stream `tag`, word position `i`.
pub(crate) fn trial_rng(seed: u64, tag: u64, i: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((tag << 32) | i as u64);
    rng
}

/// Run `trials` independent checks; each returns `Some(counterexample)` on
/// failure. The first failing trial (by index) is reported.
pub(crate) fn run_trials<F>(name: &str, detail: &str, trials: usize, seed: u64, tag: u64, f: F) -> Result<ShadowCheck>
where
    F: Fn(&mut ChaCha8Rng) -> Result<Option<String>> + Sync,
{
    let results = crate::par::map_range(trials, |i| f(&mut trial_rng(seed, tag, i)));
    let mut counterexample = None;
    for r in results {
        if let Some(c) = r? {
            counterexample = Some(c);
            break;
        }
    }
    Ok(ShadowCheck {
        name: name.to_string(),
        passed: counterexample.is_none(),
        trials,
        detail: detail.to_string(),
        counterexample,
    })
}
