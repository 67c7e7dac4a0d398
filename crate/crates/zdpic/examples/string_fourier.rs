//! One click of rotation is the DFT on diagonal 2-boxes.
use zdpic::diagram::DiagramSum;
use zdpic::linalg::max_abs_diff;
use zdpic::matrix::{diagram_to_matrix, unit_diagram, TwoBox};
use zdpic::scalar::make_ring;
use zdpic::sft::{fourier_of_projection, replay_proof_chain, rotate, sft_2box};

fn main() -> zdpic::Result<()> {
    let d = 5;
    for k in 0..d as usize {
        let f = sft_2box(&TwoBox::unit(d, k, k))?;
        println!("k={k}  |F(P_k) - DFT| = {:.2e}", max_abs_diff(&f.m, &fourier_of_projection(d, k)));
    }
    let ring = make_ring(d)?;
    for step in replay_proof_chain(&ring, 2) {
        println!("  {:<22} {}", step.rule, step.holds);
    }
    // four clicks twist the charge-c sector by q^(c²)
    let e = unit_diagram(&ring, 3, 1);
    let mut r: DiagramSum = e.clone();
    for _ in 0..4 {
        r = rotate(&r)?;
    }
    let ratio = diagram_to_matrix(&r)?.m[(3, 1)] / diagram_to_matrix(&e)?.m[(3, 1)];
    println!("four clicks on e_31: factor {ratio:.4}, q^4 = {:.4}", ring.zeta_pow_c(ring.q_exp(4)));
    Ok(())
}
