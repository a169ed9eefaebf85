//! Certify a diagonal representation and the non-abelian dihedral example.

use spin7_flat::certify::{certify, dihedral_so3_example, obstruction_witness};
use spin7_flat::enumeration::TokenTuple;

fn main() -> spin7_flat::Result<()> {
    let t = TokenTuple::parse("(b, c, a, b, c)", 3)?;
    let r = certify(&t.expand())?;
    println!("{t}: h0 = {}, h1 = {}, h2 = {}, certified = {}", r.h0, r.h1, r.h2, r.certified);

    let rep = dihedral_so3_example();
    let r = certify(&rep)?;
    println!("dihedral: h0 = {}, h1 = {}, h2 = {}", r.h0, r.h1, r.h2);
    if let Some(w) = obstruction_witness(&rep)? {
        let xi: Vec<String> = w.lie.iter().map(ToString::to_string).collect();
        println!("witness e{} (x) xi with xi = [{}], verified: {}", w.form, xi.join(", "), w.verify(&rep));
    }
    Ok(())
}
