//! Double braids on four parafermion pairs.
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use zdpic::braids::{
    braid_images, braid_invariance_check, braid_relation_check, product_state, random_neutral_density, ParafermionRep,
};

fn main() -> zdpic::Result<()> {
    let rep = ParafermionRep::new(3, 4)?;
    let r = braid_relation_check(&rep)?;
    println!("ansatz {:?}", r.ansatz);
    println!("transport {:.1e} / {:.1e}", r.transport_one, r.transport_two);
    println!("Yang-Baxter {:.1e} (phase {:.3}π), far commutation {:.1e}", r.yang_baxter, r.yang_baxter_phase, r.far_commutation);
    let images = braid_images(&rep, 2)?;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let state = product_state(&random_neutral_density(&mut rng, 3), 4)?;
    println!(
        "neutral product state, {} monomials: deviation {:.1e}",
        images.monomials.len(),
        braid_invariance_check(&state, &rep, &images)
    );
    Ok(())
}
