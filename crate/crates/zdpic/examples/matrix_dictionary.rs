//! Diagrams with two inputs and two outputs are d×d matrices.
use zdpic::matrix::{diagram_to_matrix, pauli_pictures, projection_diagram, unit_diagram};
use zdpic::scalar::make_ring;

fn main() -> zdpic::Result<()> {
    let ring = make_ring(3)?;
    let p = pauli_pictures(&ring);
    println!("X =\n{:.3}", diagram_to_matrix(&p.x)?.m);
    println!("Z =\n{:.3}", diagram_to_matrix(&p.z)?.m);
    let e01 = unit_diagram(&ring, 0, 1);
    println!("e_01 =\n{:.3}", diagram_to_matrix(&e01)?.m);
    let p1 = projection_diagram(&ring, 1);
    println!("P_1 ∘ P_1 ≡ P_1: {}", p1.compose_vertical(&p1)?.equivalent(&p1));
    Ok(())
}
