//! Count certified orbits for a range of ranks.
//!
//! `cargo run --release --example enumerate_orbits -- 8`

use std::time::Instant;

use spin7_flat::enumeration::{enumerate, ScanOptions};

fn main() -> spin7_flat::Result<()> {
    let max: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(5);
    for n in 2..=max {
        let t = Instant::now();
        let cat = enumerate(n, ScanOptions::default())?;
        println!(
            "{:<6} {:>8} orbits scanned, {:>6} certified ({} raw)  {:.2}s",
            cat.group,
            cat.scanned_orbits,
            cat.certified_orbits,
            cat.certified_raw,
            t.elapsed().as_secs_f64()
        );
    }
    Ok(())
}
