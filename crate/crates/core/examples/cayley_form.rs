//! The Cayley form, the operator S on two-forms, and the 7 + 21 splitting.

use spin7_flat::exterior::{cayley_form, lambda27_basis, project_2_7, projector21, projector7, s_operator, volume, KForm};
use spin7_flat::rational::int;

fn main() -> spin7_flat::Result<()> {
    let omega = cayley_form();
    println!("Omega_0 has {} terms", omega.terms().count());
    println!("*Omega_0 == Omega_0: {}", omega.hodge() == omega);
    println!("Omega_0 ^ Omega_0 == 14 vol: {}", omega.wedge(&omega) == volume().scale(&int(14)));

    for (k, e) in lambda27_basis().iter().enumerate() {
        let s = s_operator(&omega, e)?;
        println!("S e{} = {} e{}", k + 1, if s == e.scale(&int(3)) { "3" } else { "?" }, k + 1);
    }

    let a = KForm::dx(&[1, 2]);
    println!("pi7(dx12) = {}", project_2_7(&a)?);
    println!("rank pi7 = {}, rank pi21 = {}", projector7().rank(), projector21().rank());
    Ok(())
}
