//! Seeded generation of random well-posed problems, used to exercise the
//! transfer-matrix identities and integrator reversibility over a wide
//! parameter range.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::problem::{validate, ProblemSpec, TransmissionCoefficients, ValidatedProblem};

pub fn rng_for_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_transmission<R: Rng>(rng: &mut R) -> TransmissionCoefficients {
    loop {
        let t = TransmissionCoefficients {
            ap1: rng.gen_range(-2.0..2.0),
            ap0: rng.gen_range(-2.0..2.0),
            am1: rng.gen_range(-2.0..2.0),
            am0: rng.gen_range(-2.0..2.0),
            bp1: rng.gen_range(-2.0..2.0),
            bp0: rng.gen_range(-2.0..2.0),
            bm1: rng.gen_range(-2.0..2.0),
            bm0: rng.gen_range(-2.0..2.0),
        };
        // Keep both pivot minors safely away from zero so the transfer
        // matrices stay well conditioned.
        if t.d(1, 2).abs() > 0.1 && t.d(3, 4).abs() > 0.1 {
            return t;
        }
    }
}

fn random_bc<R: Rng>(rng: &mut R) -> [f64; 4] {
    loop {
        let c = [
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
        ];
        if c.iter().map(|v: &f64| v.abs()).fold(0.0f64, f64::max) > 0.2 {
            return c;
        }
    }
}

/// Draw a random problem with up to `max_interfaces` interior points. The
/// result always passes non-strict validation.
pub fn random_problem<R: Rng>(rng: &mut R, max_interfaces: usize) -> ValidatedProblem {
    let r = rng.gen_range(0..=max_interfaces);
    let a = rng.gen_range(-1.0..0.0);
    let b = rng.gen_range(1.0..2.0);
    // Interior points with a guaranteed minimal gap.
    let mut xi = Vec::with_capacity(r);
    let gap = (b - a) / (r as f64 + 1.0);
    for i in 0..r {
        let left = a + gap * (i as f64 + 0.25) + if i == 0 { 0.0 } else { 0.0 };
        xi.push(left + rng.gen_range(0.0..gap * 0.5));
    }
    let rho: Vec<f64> = (0..=r).map(|_| rng.gen_range(0.5..2.0)).collect();
    let q: Vec<Vec<f64>> = (0..=r)
        .map(|_| {
            let deg = rng.gen_range(1..=3);
            (0..deg).map(|_| rng.gen_range(-1.0..1.0)).collect()
        })
        .collect();
    let spec = ProblemSpec {
        a,
        b,
        xi,
        rho,
        q,
        alpha: random_bc(rng),
        beta: random_bc(rng),
        trans: (0..r).map(|_| random_transmission(rng)).collect(),
    };
    validate(&spec, false).expect("generated problem is well posed")
}
