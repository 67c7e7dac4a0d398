//! GHZ and Max from contracting pictures; Max is the Fourier image of GHZ.
use zdpic::linalg::phase_distance;
use zdpic::quon::{entanglement_entropy, fourier_each, ghz_state, max_state, quon_relations};

fn main() -> zdpic::Result<()> {
    let d = 3;
    let q = quon_relations(d)?;
    println!("neutral rank {}  |XYZ - ζ| {:.1e}", q.neutral_rank, q.xyz_on_neutral);
    let ghz = ghz_state(d)?;
    let max = max_state(d)?;
    println!("GHZ amplitudes (nonzero):");
    for (i, a) in ghz.amplitudes.iter().enumerate().filter(|(_, a)| a.norm() > 1e-12) {
        println!("  |{:03}⟩ {a:.4}", format!("{}{}{}", i / 9, i / 3 % 3, i % 3));
    }
    println!("|Max - F⊗F⊗F GHZ| up to phase: {:.1e}", phase_distance(&fourier_each(&ghz).amplitudes, &max.amplitudes));
    println!("entropy of one qudit in Max: {:.6}", entanglement_entropy(&max, &[0])?);
    Ok(())
}
