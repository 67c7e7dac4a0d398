//! Entropy bounds and the minimal-maximal entangled pair.
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use zdpic::matrix::TwoBox;
use zdpic::qfa::{entropic_up_check, p_norm, random_neutral, renyi_entropy, von_neumann_entropy};
use zdpic::quon::minimal_maximal_pair_check;

fn main() -> zdpic::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let a = random_neutral(&mut rng, 3);
    let r = entropic_up_check(&a, 1e-8)?;
    println!("uncertainty: lhs {:.4} ≥ rhs {:.4}", r.lhs, r.rhs);
    let a = TwoBox { d: 3, m: a.m.unscale(p_norm(&a, 1.0)?) };
    for p in [2.0, 1.1, 1.001, 1.00001] {
        println!("h_{p} = {:.6}", renyi_entropy(&a, p)?);
    }
    println!("h   = {:.6}", von_neumann_entropy(&a)?);
    let mm = minimal_maximal_pair_check(3, 1e-10)?;
    println!("P_0 entropy {:.1e}, Fourier image entropy {:.6} = log 3", mm.zero_entropy, mm.bell_entropy);
    Ok(())
}
