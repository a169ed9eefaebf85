//! Ranks with no certified diagonal representation.

use spin7_flat::enumeration::{nogo_scan, tau_triple_scan};

fn main() -> spin7_flat::Result<()> {
    let r = nogo_scan(6)?;
    println!("{}: {} orbits scanned, {} certified", r.group, r.scanned_orbits, r.certified);
    for n in 9..=12 {
        let t = tau_triple_scan(n)?;
        println!("{}: {} translation parts, {} without an invariant", t.group, t.scanned, t.without_invariant);
    }
    Ok(())
}
